//! System specification files.
//!
//! ```json
//! {
//!   "format_version": "1.0",
//!   "parameterization": "SKR",
//!   "n": 1,
//!   "m": 1,
//!   "S": [[[1, 0]]],
//!   "K": [[[0.5, 0], [0, 0.5]]],
//!   "R": [[0, 0], [0, 0]]
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs; a bare number is read as real.
//! The `ABCD` form carries `A` (real), `B`, `C` and `D` instead.

use serde_json::Value;

use super::json::{self, Node};
use crate::error::{Error, Result};
use crate::realizability::{check_physical_realizability, from_state_space, StateSpace};
use crate::slh::{OscillatorParams, DEFAULT_TOL};

pub const FORMAT_VERSION: &str = "1.0";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parameterization {
    Skr,
    Abcd,
}

impl Parameterization {
    pub fn name(self) -> &'static str {
        match self {
            Parameterization::Skr => "SKR",
            Parameterization::Abcd => "ABCD",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SystemSpec {
    Skr(OscillatorParams),
    Abcd(StateSpace),
}

impl SystemSpec {
    pub fn parameterization(&self) -> Parameterization {
        match self {
            SystemSpec::Skr(_) => Parameterization::Skr,
            SystemSpec::Abcd(_) => Parameterization::Abcd,
        }
    }

    pub fn dof(&self) -> usize {
        match self {
            SystemSpec::Skr(g) => g.dof(),
            SystemSpec::Abcd(ss) => ss.dof(),
        }
    }

    pub fn channels(&self) -> usize {
        match self {
            SystemSpec::Skr(g) => g.channels(),
            SystemSpec::Abcd(ss) => ss.channels(),
        }
    }

    /// The `(S, K, R)` form; state-space models are inverted first.
    pub fn to_oscillator(&self, tol: f64) -> Result<OscillatorParams> {
        match self {
            SystemSpec::Skr(g) => Ok(g.clone()),
            SystemSpec::Abcd(ss) => from_state_space(ss, tol),
        }
    }

    /// Problems that make the model unphysical, by name and residual.
    pub fn violations(&self, tol: f64) -> Vec<(String, f64)> {
        match self {
            SystemSpec::Skr(g) => g
                .validate(tol)
                .violations
                .iter()
                .map(|v| (v.name().to_owned(), v.residual().unwrap_or(f64::INFINITY)))
                .collect(),
            SystemSpec::Abcd(ss) => {
                let report = check_physical_realizability(ss, tol);
                let mut out: Vec<_> = report
                    .failures(tol)
                    .into_iter()
                    .map(|(name, r)| (name.to_owned(), r))
                    .collect();
                if let Some(detail) = &report.dimension_error {
                    out.push((format!("dimension_mismatch: {detail}"), f64::INFINITY));
                }
                out
            }
        }
    }
}

/// Parse and check the physical invariants at the default tolerance.
pub fn parse_system_spec(text: &str) -> Result<SystemSpec> {
    let spec = parse_system_spec_unchecked(text)?;
    match &spec {
        SystemSpec::Skr(g) => g.validate(DEFAULT_TOL).into_result()?,
        SystemSpec::Abcd(ss) => {
            let report = check_physical_realizability(ss, DEFAULT_TOL);
            if !report.is_realizable {
                let detail = spec
                    .violations(DEFAULT_TOL)
                    .iter()
                    .map(|(name, r)| format!("{name} ({r:.3e})"))
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(Error::NotRealizable(detail));
            }
        }
    }
    Ok(spec)
}

/// Parse with shape checks only.
pub fn parse_system_spec_unchecked(text: &str) -> Result<SystemSpec> {
    let doc = json::parse(text)?;
    let root = Node::root(&doc);
    let version = root.get("format_version")?;
    if version.str()? != FORMAT_VERSION {
        return Err(version.error(format!("unsupported format version {:?}", version.str()?)));
    }
    let kind = root.get("parameterization")?;
    let n_node = root.get("n")?;
    let m_node = root.get("m")?;
    let (n, m) = (n_node.usize()?, m_node.usize()?);
    if n == 0 {
        return Err(n_node.error("a system needs at least one degree of freedom"));
    }
    if m == 0 {
        return Err(m_node.error("a system needs at least one field channel"));
    }
    let common = ["format_version", "parameterization", "n", "m"];
    match kind.str()? {
        "SKR" => {
            root.expect_keys(&[&common[..], &["S", "K", "R"]].concat())?;
            let s = root.get("S")?.complex_matrix(m, m)?;
            let k = root.get("K")?.complex_matrix(m, 2 * n)?;
            let r = root.get("R")?.real_matrix(2 * n, 2 * n)?;
            Ok(SystemSpec::Skr(OscillatorParams::new(s, k, r)?))
        }
        "ABCD" => {
            root.expect_keys(&[&common[..], &["A", "B", "C", "D"]].concat())?;
            let a = root.get("A")?.real_matrix(2 * n, 2 * n)?;
            let b = root.get("B")?.complex_matrix(2 * n, 2 * m)?;
            let c = root.get("C")?.complex_matrix(m, 2 * n)?;
            let d = root.get("D")?.complex_matrix(m, m)?;
            Ok(SystemSpec::Abcd(StateSpace::new(a, b, c, d)?))
        }
        other => Err(kind.error(format!(
            "unknown parameterization {other:?}, expected \"SKR\" or \"ABCD\""
        ))),
    }
}

pub fn emit_system_spec(spec: &SystemSpec) -> String {
    let header = |p: Parameterization| {
        [
            ("format_version", Value::from(FORMAT_VERSION)),
            ("parameterization", Value::from(p.name())),
            ("n", Value::from(spec.dof())),
            ("m", Value::from(spec.channels())),
        ]
    };
    let mut doc = json::object(header(spec.parameterization()));
    let obj = doc.as_object_mut().expect("object");
    match spec {
        SystemSpec::Skr(g) => {
            obj.insert("S".into(), json::complex_matrix(&g.s));
            obj.insert("K".into(), json::complex_matrix(&g.k));
            obj.insert("R".into(), json::real_matrix(&g.r));
        }
        SystemSpec::Abcd(ss) => {
            obj.insert("A".into(), json::real_matrix(&ss.a));
            obj.insert("B".into(), json::complex_matrix(&ss.b));
            obj.insert("C".into(), json::complex_matrix(&ss.c));
            obj.insert("D".into(), json::complex_matrix(&ss.d));
        }
    }
    json::to_string(&doc)
}
