//! Netlist files. Components are emitted in id order and connections in
//! lexicographic order, so equal netlists give equal bytes.

use serde_json::Value;

use super::json::{self, Node};
use crate::error::Result;
use crate::optics::coupling::DpaParams;
use crate::optics::devices::{
    BeamSplitterParams, CavityParams, MirrorParams, PhaseShifterParams, SqueezerParams,
    TwoModeSqueezerParams,
};
use crate::optics::netlist::{
    Component, ComponentKind, ComponentParams, Connection, OpticalNetlist, Source,
};

pub const FORMAT_VERSION: &str = "1.0";
pub const ROTATING_FRAME: &str = "omega_r";
pub const PUMP_FREQUENCY: &str = "2*omega_r";

fn params_value(p: &ComponentParams) -> Value {
    match p {
        ComponentParams::Cavity(c) => json::object([("detuning", json::real(c.detuning))]),
        ComponentParams::Dpa(d) => json::object([
            ("delta", json::real(d.delta)),
            ("epsilon", json::complex(d.epsilon)),
        ]),
        ComponentParams::Mirror(m) => json::object([("kappa", json::real(m.kappa))]),
        ComponentParams::BeamSplitter(b) => json::object([
            ("theta", json::real(b.theta)),
            ("phi", json::real(b.phi)),
            ("psi", json::real(b.psi)),
            ("xi", json::real(b.xi)),
        ]),
        ComponentParams::TwoModeSqueezer(t) => json::object([("pump", json::complex(t.pump))]),
        ComponentParams::Squeezer(s) => {
            json::object([("s", json::real(s.s)), ("theta", json::real(s.theta))])
        }
        ComponentParams::PhaseShifter(p) => json::object([("theta", json::real(p.theta))]),
        ComponentParams::PassiveMeshElement { matrix } => json::object([(
            "matrix",
            Value::Array(vec![
                Value::Array(vec![json::complex(matrix[0]), json::complex(matrix[1])]),
                Value::Array(vec![json::complex(matrix[2]), json::complex(matrix[3])]),
            ]),
        )]),
    }
}

fn parse_params(kind: ComponentKind, node: &Node) -> Result<ComponentParams> {
    let keys: &[&str] = match kind {
        ComponentKind::Cavity => &["detuning"],
        ComponentKind::Dpa => &["delta", "epsilon"],
        ComponentKind::Mirror => &["kappa"],
        ComponentKind::BeamSplitter => &["theta", "phi", "psi", "xi"],
        ComponentKind::TwoModeSqueezer => &["pump"],
        ComponentKind::Squeezer => &["s", "theta"],
        ComponentKind::PhaseShifter => &["theta"],
        ComponentKind::PassiveMeshElement => &["matrix"],
    };
    node.expect_keys(keys)?;
    let real = |k: &str| -> Result<f64> { node.get(k)?.f64() };
    Ok(match kind {
        ComponentKind::Cavity => ComponentParams::Cavity(CavityParams {
            detuning: real("detuning")?,
        }),
        ComponentKind::Dpa => ComponentParams::Dpa(DpaParams {
            delta: real("delta")?,
            epsilon: node.get("epsilon")?.complex()?,
        }),
        ComponentKind::Mirror => {
            let kappa = node.get("kappa")?;
            if kappa.f64()? < 0.0 {
                return Err(kappa.error("mirror coupling must be nonnegative"));
            }
            ComponentParams::Mirror(MirrorParams {
                kappa: kappa.f64()?,
            })
        }
        ComponentKind::BeamSplitter => ComponentParams::BeamSplitter(BeamSplitterParams {
            theta: real("theta")?,
            phi: real("phi")?,
            psi: real("psi")?,
            xi: real("xi")?,
        }),
        ComponentKind::TwoModeSqueezer => ComponentParams::TwoModeSqueezer(TwoModeSqueezerParams {
            pump: node.get("pump")?.complex()?,
        }),
        ComponentKind::Squeezer => ComponentParams::Squeezer(SqueezerParams {
            s: real("s")?,
            theta: real("theta")?,
        }),
        ComponentKind::PhaseShifter => ComponentParams::PhaseShifter(PhaseShifterParams {
            theta: real("theta")?,
        }),
        ComponentKind::PassiveMeshElement => {
            let m = node.get("matrix")?.complex_matrix(2, 2)?;
            ComponentParams::PassiveMeshElement {
                matrix: [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]],
            }
        }
    })
}

fn source_value(s: &Source) -> Value {
    match *s {
        Source::Scattering => json::object([("type", Value::from("scattering"))]),
        Source::Block { index, channel } => json::object([
            ("type", Value::from("block")),
            ("index", Value::from(index)),
            ("channel", channel.map_or(Value::Null, Value::from)),
        ]),
        Source::Coupling { j, k } => json::object([
            ("type", Value::from("coupling")),
            ("j", Value::from(j)),
            ("k", Value::from(k)),
        ]),
    }
}

fn parse_source(node: &Node) -> Result<Source> {
    let ty = node.get("type")?;
    match ty.str()? {
        "scattering" => {
            node.expect_keys(&["type"])?;
            Ok(Source::Scattering)
        }
        "block" => {
            node.expect_keys(&["type", "index", "channel"])?;
            let channel = node.get("channel")?;
            Ok(Source::Block {
                index: node.get("index")?.usize()?,
                channel: if channel.value().is_null() {
                    None
                } else {
                    Some(channel.usize()?)
                },
            })
        }
        "coupling" => {
            node.expect_keys(&["type", "j", "k"])?;
            Ok(Source::Coupling {
                j: node.get("j")?.usize()?,
                k: node.get("k")?.usize()?,
            })
        }
        other => Err(ty.error(format!("unknown source type {other:?}"))),
    }
}

pub fn netlist_value(nl: &OpticalNetlist) -> Value {
    let mut nl = nl.clone();
    nl.canonicalize();
    let components = nl
        .components
        .iter()
        .map(|c| {
            json::object([
                ("id", Value::from(c.id.as_str())),
                ("kind", Value::from(c.kind().name())),
                ("params", params_value(&c.params)),
                (
                    "ports",
                    Value::Array(c.ports.iter().map(|p| Value::from(p.as_str())).collect()),
                ),
                ("source_block", source_value(&c.source)),
            ])
        })
        .collect();
    let connections = nl
        .connections
        .iter()
        .map(|c| {
            json::object([
                ("from", Value::from(c.from.as_str())),
                ("to", Value::from(c.to.as_str())),
            ])
        })
        .collect();
    json::object([
        ("format_version", Value::from(FORMAT_VERSION)),
        (
            "annotations",
            json::object([
                ("rotating_frame", Value::from(ROTATING_FRAME)),
                ("pump_frequency", Value::from(PUMP_FREQUENCY)),
            ]),
        ),
        ("channels", Value::from(nl.channels)),
        ("components", Value::Array(components)),
        ("connections", Value::Array(connections)),
    ])
}

pub fn emit_netlist(nl: &OpticalNetlist) -> String {
    json::to_string(&netlist_value(nl))
}

pub fn parse_netlist(text: &str) -> Result<OpticalNetlist> {
    let doc = json::parse(text)?;
    let root = Node::root(&doc);
    root.expect_keys(&[
        "format_version",
        "annotations",
        "channels",
        "components",
        "connections",
    ])?;
    let version = root.get("format_version")?;
    if version.str()? != FORMAT_VERSION {
        return Err(version.error(format!("unsupported format version {:?}", version.str()?)));
    }
    let annotations = root.get("annotations")?;
    annotations.expect_keys(&["rotating_frame", "pump_frequency"])?;
    for (key, want) in [
        ("rotating_frame", ROTATING_FRAME),
        ("pump_frequency", PUMP_FREQUENCY),
    ] {
        let node = annotations.get(key)?;
        if node.str()? != want {
            return Err(node.error(format!("expected {want:?}")));
        }
    }
    let channels = root.get("channels")?.usize()?;
    let comps = root.get("components")?;
    let mut components = Vec::with_capacity(comps.len()?);
    for i in 0..comps.len()? {
        let node = comps.at(i)?;
        node.expect_keys(&["id", "kind", "params", "ports", "source_block"])?;
        let kind_node = node.get("kind")?;
        let kind = ComponentKind::from_name(kind_node.str()?).ok_or_else(|| {
            kind_node.error(format!(
                "unknown component kind {:?}",
                kind_node.str().unwrap_or("")
            ))
        })?;
        let ports_node = node.get("ports")?;
        let ports = (0..ports_node.len()?)
            .map(|p| ports_node.at(p).and_then(|n| n.str().map(str::to_owned)))
            .collect::<Result<Vec<_>>>()?;
        components.push(Component {
            id: node.get("id")?.str()?.to_owned(),
            params: parse_params(kind, &node.get("params")?)?,
            ports,
            source: parse_source(&node.get("source_block")?)?,
        });
    }
    let conns = root.get("connections")?;
    let mut connections = Vec::with_capacity(conns.len()?);
    for i in 0..conns.len()? {
        let node = conns.at(i)?;
        node.expect_keys(&["from", "to"])?;
        connections.push(Connection {
            from: node.get("from")?.str()?.to_owned(),
            to: node.get("to")?.str()?.to_owned(),
        });
    }
    let mut nl = OpticalNetlist {
        channels,
        components,
        connections,
    };
    nl.validate()?;
    nl.canonicalize();
    Ok(nl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::optics::netlist::{build_netlist, NetlistOptions};
    use crate::synthesis::decompose;
    use crate::testing::*;

    fn golden_netlist() -> OpticalNetlist {
        build_netlist(
            &decompose(&golden_system()).unwrap(),
            &NetlistOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn golden_dpa_record() {
        let text = emit_netlist(&golden_netlist());
        let doc = json::parse(&text).unwrap();
        let dpa = doc["components"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["id"] == "dpa0")
            .unwrap();
        assert_eq!(dpa["kind"], "dpa");
        assert_eq!(dpa["params"]["delta"].as_f64(), Some(5.0));
        assert_eq!(dpa["params"]["epsilon"][0].as_f64(), Some(1.0));
        assert_eq!(dpa["params"]["epsilon"][1].as_f64(), Some(1.0));
        assert!(text.contains("\"rotating_frame\": \"omega_r\""));
    }

    #[test]
    fn empty_netlist() {
        let nl = OpticalNetlist {
            channels: 0,
            components: vec![],
            connections: vec![],
        };
        let text = emit_netlist(&nl);
        assert!(text.contains("\"components\": []"));
        assert!(text.contains("\"connections\": []"));
        assert_eq!(parse_netlist(&text).unwrap(), nl);
    }

    #[test]
    fn reemit_is_byte_stable() {
        let mut rng = seeded(21);
        let mut nets = vec![golden_netlist()];
        for i in 0..10 {
            let g = random_oscillator(&mut rng, 1 + i % 3, 1 + i % 2, 1.0);
            let opts = NetlistOptions {
                prefer_squeezer_sandwich: i % 2 == 0,
                ..NetlistOptions::default()
            };
            nets.push(build_netlist(&decompose(&g).unwrap(), &opts).unwrap());
        }
        nets.push(OpticalNetlist {
            channels: 2,
            components: vec![Component {
                id: "pm".into(),
                params: ComponentParams::PassiveMeshElement {
                    matrix: [c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
                },
                ports: vec!["in0".into(), "in1".into(), "out0".into(), "out1".into()],
                source: Source::Scattering,
            }],
            connections: vec![Connection {
                from: "input.0".into(),
                to: "pm.in0".into(),
            }],
        });
        for nl in nets {
            let text = emit_netlist(&nl);
            let back = parse_netlist(&text).unwrap();
            let mut canon = nl.clone();
            canon.canonicalize();
            assert_eq!(back, canon);
            assert_eq!(emit_netlist(&back), text);
        }
    }

    #[test]
    fn invalid_netlists_rejected() {
        let text = emit_netlist(&golden_netlist());
        assert!(parse_netlist(&text.replace("\"dpa\"", "\"laser\"")).is_err());
        assert!(parse_netlist(&text.replace("\"mirror0_0.out\"", "\"nowhere.out\"")).is_err());
        assert!(parse_netlist(&text.replace("\"omega_r\"", "\"omega\"")).is_err());
        assert!(parse_netlist(&text.replace("\"kappa\"", "\"kapa\"")).is_err());
    }
}
