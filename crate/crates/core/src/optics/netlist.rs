//! Assembly of a synthesis plan into a netlist of optical components.
//!
//! Traveling fields are wired port to port; intracavity elements attach to
//! the `mode` port of the cavity they act on. External fields enter at the
//! `input.<l>` terminals and leave at `output.<l>`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::coupling::{
    coupling_scheme1, coupling_scheme2, default_gamma2, direct_to_optics, dpa_from_r,
    quadrature_to_mode, DpaParams, ModeCoupling,
};
use super::devices::{
    BeamSplitterParams, CavityParams, MirrorParams, PhaseShifterParams, SqueezerParams,
    TwoModeSqueezerParams,
};
use super::mesh::{passive_unitary_to_mesh, MeshElement};
use crate::error::{Error, Result};
use crate::linalg::{identity_c, max_abs, max_abs_c};
use crate::synthesis::SynthesisPlan;

pub const INPUT: &str = "input";
pub const OUTPUT: &str = "output";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    Cavity,
    Dpa,
    Mirror,
    BeamSplitter,
    TwoModeSqueezer,
    Squeezer,
    PhaseShifter,
    PassiveMeshElement,
}

impl ComponentKind {
    pub const ALL: [ComponentKind; 8] = [
        ComponentKind::Cavity,
        ComponentKind::Dpa,
        ComponentKind::Mirror,
        ComponentKind::BeamSplitter,
        ComponentKind::TwoModeSqueezer,
        ComponentKind::Squeezer,
        ComponentKind::PhaseShifter,
        ComponentKind::PassiveMeshElement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::Cavity => "cavity",
            ComponentKind::Dpa => "dpa",
            ComponentKind::Mirror => "mirror",
            ComponentKind::BeamSplitter => "beam_splitter",
            ComponentKind::TwoModeSqueezer => "two_mode_squeezer",
            ComponentKind::Squeezer => "squeezer",
            ComponentKind::PhaseShifter => "phase_shifter",
            ComponentKind::PassiveMeshElement => "passive_mesh_element",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ComponentParams {
    Cavity(CavityParams),
    Dpa(DpaParams),
    Mirror(MirrorParams),
    BeamSplitter(BeamSplitterParams),
    TwoModeSqueezer(TwoModeSqueezerParams),
    Squeezer(SqueezerParams),
    PhaseShifter(PhaseShifterParams),
    /// A 2×2 unitary element of a mesh given by its matrix entries.
    PassiveMeshElement {
        matrix: [Complex64; 4],
    },
}

impl ComponentParams {
    pub fn kind(&self) -> ComponentKind {
        match self {
            ComponentParams::Cavity(_) => ComponentKind::Cavity,
            ComponentParams::Dpa(_) => ComponentKind::Dpa,
            ComponentParams::Mirror(_) => ComponentKind::Mirror,
            ComponentParams::BeamSplitter(_) => ComponentKind::BeamSplitter,
            ComponentParams::TwoModeSqueezer(_) => ComponentKind::TwoModeSqueezer,
            ComponentParams::Squeezer(_) => ComponentKind::Squeezer,
            ComponentParams::PhaseShifter(_) => ComponentKind::PhaseShifter,
            ComponentParams::PassiveMeshElement { .. } => ComponentKind::PassiveMeshElement,
        }
    }
}

/// What part of the plan a component realizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// Front-end passive network for the scattering matrix.
    Scattering,
    /// Block `index`; `channel` is set for coupling subcircuits.
    Block {
        index: usize,
        channel: Option<usize>,
    },
    Coupling {
        j: usize,
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub id: String,
    pub params: ComponentParams,
    pub ports: Vec<String>,
    pub source: Source,
}

impl Component {
    pub fn kind(&self) -> ComponentKind {
        self.params.kind()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Connection {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpticalNetlist {
    pub channels: usize,
    pub components: Vec<Component>,
    pub connections: Vec<Connection>,
}

impl OpticalNetlist {
    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn of_kind(&self, kind: ComponentKind) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(move |c| c.kind() == kind)
    }

    /// Components sorted by id and connections sorted lexicographically.
    pub fn canonicalize(&mut self) {
        self.components.sort_by(|a, b| a.id.cmp(&b.id));
        self.connections.sort();
    }

    /// Unique ids, and every connection endpoint is an existing component
    /// port or an external terminal.
    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        let mut ports = BTreeSet::new();
        for comp in &self.components {
            if comp.id == INPUT || comp.id == OUTPUT || comp.id.contains('.') {
                return Err(Error::InvalidNetwork(format!(
                    "reserved component id {:?}",
                    comp.id
                )));
            }
            if !ids.insert(comp.id.as_str()) {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate component id {:?}",
                    comp.id
                )));
            }
            for p in &comp.ports {
                ports.insert(format!("{}.{}", comp.id, p));
            }
        }
        for l in 0..self.channels {
            ports.insert(format!("{INPUT}.{l}"));
            ports.insert(format!("{OUTPUT}.{l}"));
        }
        for conn in &self.connections {
            for end in [&conn.from, &conn.to] {
                if !ports.contains(end.as_str()) {
                    return Err(Error::InvalidNetwork(format!(
                        "connection to unknown port {end:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetlistOptions {
    /// Auxiliary mirror coupling for the auxiliary-cavity scheme; derived
    /// from each coupling when absent.
    pub gamma2: Option<f64>,
    pub prefer_squeezer_sandwich: bool,
    /// Parameters at or below this magnitude are treated as zero.
    pub tol: f64,
}

impl Default for NetlistOptions {
    fn default() -> Self {
        NetlistOptions {
            gamma2: None,
            prefer_squeezer_sandwich: false,
            tol: 1e-12,
        }
    }
}

/// How one channel of one block couples to its cavity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CouplingRealization {
    None,
    /// `L = α̃a` through a mirror, with phase shifters `∓arg α̃` around it.
    Mirror {
        kappa: f64,
        phase: f64,
    },
    AuxiliaryCavity(super::coupling::Scheme1Params),
    SqueezedField(super::coupling::Scheme2Params),
}

pub fn choose_realization(
    mc: &ModeCoupling,
    options: &NetlistOptions,
) -> Result<CouplingRealization> {
    if mc.is_zero(options.tol) {
        return Ok(CouplingRealization::None);
    }
    if mc.beta_t.norm() <= options.tol {
        return Ok(CouplingRealization::Mirror {
            kappa: mc.alpha_t.norm_sqr(),
            phase: mc.alpha_t.arg(),
        });
    }
    if options.prefer_squeezer_sandwich {
        if let Ok(p) = coupling_scheme2(mc) {
            return Ok(CouplingRealization::SqueezedField(p));
        }
    }
    let gamma2 = options.gamma2.unwrap_or_else(|| default_gamma2(mc));
    Ok(CouplingRealization::AuxiliaryCavity(coupling_scheme1(
        mc, gamma2,
    )?))
}

struct Builder {
    components: Vec<Component>,
    connections: Vec<Connection>,
    /// Current end of each channel's field path.
    heads: Vec<String>,
}

impl Builder {
    fn add(
        &mut self,
        id: String,
        params: ComponentParams,
        ports: &[&str],
        source: Source,
    ) -> String {
        self.components.push(Component {
            id: id.clone(),
            params,
            ports: ports.iter().map(|p| p.to_string()).collect(),
            source,
        });
        id
    }

    fn wire(&mut self, from: String, to: String) {
        self.connections.push(Connection { from, to });
    }

    /// Inserts a two-port element with `in`/`out` ports into a channel.
    fn inline(&mut self, channel: usize, id: String, params: ComponentParams, source: Source) {
        let id = self.add(id, params, &["in", "out"], source);
        let head = std::mem::replace(&mut self.heads[channel], format!("{id}.out"));
        self.wire(head, format!("{id}.in"));
    }

    fn attach(&mut self, element: &str, port: &str, cavity: &str) {
        self.wire(format!("{element}.{port}"), format!("{cavity}.mode"));
    }
}

pub fn build_netlist(plan: &SynthesisPlan, options: &NetlistOptions) -> Result<OpticalNetlist> {
    let m = plan.m;
    let tol = options.tol;
    let mut b = Builder {
        components: Vec::new(),
        connections: Vec::new(),
        heads: (0..m).map(|l| format!("{INPUT}.{l}")).collect(),
    };

    // Static network (S₁, 0, 0) in front of a chain with identity scattering.
    let mut chain_s = Vec::with_capacity(plan.blocks.len());
    for block in &plan.blocks {
        chain_s.push(block.s.clone());
    }
    for (idx, s) in chain_s.iter().enumerate() {
        if max_abs_c(&(s - identity_c(m))) > tol {
            if idx != 0 {
                return Err(Error::InvalidNetwork(
                    "only the first block may carry a scattering matrix".into(),
                ));
            }
            for (e, el) in passive_unitary_to_mesh(s)?.into_iter().enumerate() {
                match el {
                    MeshElement::PhaseShifter { channel, params } => b.inline(
                        channel,
                        format!("mesh{e:03}_ps"),
                        ComponentParams::PhaseShifter(params),
                        Source::Scattering,
                    ),
                    MeshElement::BeamSplitter { upper, params } => {
                        let id = b.add(
                            format!("mesh{e:03}_bs"),
                            ComponentParams::BeamSplitter(params),
                            &["in0", "in1", "out0", "out1"],
                            Source::Scattering,
                        );
                        for (off, (i, o)) in
                            [("in0", "out0"), ("in1", "out1")].into_iter().enumerate()
                        {
                            let head =
                                std::mem::replace(&mut b.heads[upper + off], format!("{id}.{o}"));
                            b.wire(head, format!("{id}.{i}"));
                        }
                    }
                }
            }
        }
    }

    let active_coupling = |j: usize| {
        plan.couplings
            .iter()
            .any(|cp| (cp.j == j || cp.k == j) && !cp.is_zero(tol))
    };
    let cavity_id = |j: usize| format!("cav{j}");

    for (j, block) in plan.blocks.iter().enumerate() {
        let rows: Vec<ModeCoupling> = (0..m)
            .map(|l| quadrature_to_mode([block.k_tilde[(l, 0)], block.k_tilde[(l, 1)]]))
            .collect();
        let needed =
            max_abs(&block.r) > tol || rows.iter().any(|mc| !mc.is_zero(tol)) || active_coupling(j);
        if !needed {
            continue;
        }
        let dpa = dpa_from_r(&block.r)?;
        let cav = b.add(
            cavity_id(j),
            ComponentParams::Cavity(CavityParams {
                detuning: dpa.delta,
            }),
            &["mode"],
            Source::Block {
                index: j,
                channel: None,
            },
        );
        if dpa.epsilon.norm() > tol {
            let id = b.add(
                format!("dpa{j}"),
                ComponentParams::Dpa(dpa),
                &["a"],
                Source::Block {
                    index: j,
                    channel: None,
                },
            );
            b.attach(&id, "a", &cav);
        }

        for (l, mc) in rows.iter().enumerate() {
            let src = Source::Block {
                index: j,
                channel: Some(l),
            };
            let tag = format!("{j}_{l}");
            match choose_realization(mc, options)? {
                CouplingRealization::None => {}
                CouplingRealization::Mirror { kappa, phase } => {
                    let phased = phase.abs() > tol;
                    if phased {
                        b.inline(
                            l,
                            format!("ps{tag}_in"),
                            ComponentParams::PhaseShifter(PhaseShifterParams { theta: -phase }),
                            src.clone(),
                        );
                    }
                    let id = format!("mirror{tag}");
                    b.components.push(Component {
                        id: id.clone(),
                        params: ComponentParams::Mirror(MirrorParams { kappa }),
                        ports: vec!["in".into(), "out".into(), "mode".into()],
                        source: src.clone(),
                    });
                    let head = std::mem::replace(&mut b.heads[l], format!("{id}.out"));
                    b.wire(head, format!("{id}.in"));
                    b.attach(&id, "mode", &cav);
                    if phased {
                        b.inline(
                            l,
                            format!("ps{tag}_out"),
                            ComponentParams::PhaseShifter(PhaseShifterParams { theta: phase }),
                            src.clone(),
                        );
                    }
                }
                CouplingRealization::AuxiliaryCavity(p) => {
                    let aux = b.add(
                        format!("aux{tag}"),
                        ComponentParams::Cavity(CavityParams { detuning: 0.0 }),
                        &["mode"],
                        src.clone(),
                    );
                    if p.eps1.norm() > tol {
                        let id = b.add(
                            format!("tms{tag}"),
                            ComponentParams::TwoModeSqueezer(p.two_mode_squeezer()),
                            &["a", "b"],
                            src.clone(),
                        );
                        b.attach(&id, "a", &cav);
                        b.attach(&id, "b", &aux);
                    }
                    if p.eps2.norm() > tol {
                        let id = b.add(
                            format!("bs{tag}"),
                            ComponentParams::BeamSplitter(p.beam_splitter()),
                            &["a", "b"],
                            src.clone(),
                        );
                        b.attach(&id, "a", &cav);
                        b.attach(&id, "b", &aux);
                    }
                    b.inline(
                        l,
                        format!("ps{tag}_in"),
                        ComponentParams::PhaseShifter(PhaseShifterParams {
                            theta: p.input_phase,
                        }),
                        src.clone(),
                    );
                    let id = format!("mirror{tag}");
                    b.components.push(Component {
                        id: id.clone(),
                        params: ComponentParams::Mirror(MirrorParams { kappa: p.gamma2 }),
                        ports: vec!["in".into(), "out".into(), "mode".into()],
                        source: src.clone(),
                    });
                    let head = std::mem::replace(&mut b.heads[l], format!("{id}.out"));
                    b.wire(head, format!("{id}.in"));
                    b.attach(&id, "mode", &aux);
                }
                CouplingRealization::SqueezedField(p) => {
                    b.inline(
                        l,
                        format!("sq{tag}_in"),
                        ComponentParams::Squeezer(p.input_squeezer()),
                        src.clone(),
                    );
                    let id = format!("mirror{tag}");
                    b.components.push(Component {
                        id: id.clone(),
                        params: ComponentParams::Mirror(MirrorParams { kappa: p.gamma }),
                        ports: vec!["in".into(), "out".into(), "mode".into()],
                        source: src.clone(),
                    });
                    let head = std::mem::replace(&mut b.heads[l], format!("{id}.out"));
                    b.wire(head, format!("{id}.in"));
                    b.attach(&id, "mode", &cav);
                    b.inline(
                        l,
                        format!("sq{tag}_out"),
                        ComponentParams::Squeezer(p.output_squeezer()),
                        src.clone(),
                    );
                }
            }
        }
    }

    for cp in &plan.couplings {
        if cp.is_zero(tol) {
            continue;
        }
        let d = direct_to_optics(&cp.c)?;
        let src = Source::Coupling { j: cp.j, k: cp.k };
        let tag = format!("c{}_{}", cp.j, cp.k);
        if d.needs_beam_splitter(tol) {
            let id = b.add(
                format!("bs_{tag}"),
                ComponentParams::BeamSplitter(d.beam_splitter),
                &["a", "b"],
                src.clone(),
            );
            b.attach(&id, "a", &cavity_id(cp.k));
            b.attach(&id, "b", &cavity_id(cp.j));
        }
        if d.needs_squeezer(tol) {
            let id = b.add(
                format!("tms_{tag}"),
                ComponentParams::TwoModeSqueezer(d.two_mode_squeezer),
                &["a", "b"],
                src,
            );
            b.attach(&id, "a", &cavity_id(cp.k));
            b.attach(&id, "b", &cavity_id(cp.j));
        }
    }

    for l in 0..m {
        let head = std::mem::take(&mut b.heads[l]);
        b.wire(head, format!("{OUTPUT}.{l}"));
    }

    let mut nl = OpticalNetlist {
        channels: m,
        components: b.components,
        connections: b.connections,
    };
    nl.canonicalize();
    nl.validate()?;
    Ok(nl)
}

/// Rounds a phase of exactly `π` coming from the auxiliary-cavity scheme.
pub fn is_pi(theta: f64) -> bool {
    (theta - PI).abs() <= 1e-15
}
