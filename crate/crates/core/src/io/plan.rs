//! Synthesis plan files: the one-mode blocks in cascade order and the
//! direct couplings between them.

use serde_json::Value;

use super::json;
use crate::synthesis::SynthesisPlan;

pub const FORMAT_VERSION: &str = "1.0";

pub fn plan_value(plan: &SynthesisPlan) -> Value {
    let blocks = plan
        .blocks
        .iter()
        .map(|b| {
            json::object([
                ("index", Value::from(b.index)),
                ("S", json::complex_matrix(&b.s)),
                ("K", json::complex_matrix(&b.k_tilde)),
                ("R", json::real_matrix(&b.r)),
            ])
        })
        .collect();
    let couplings = plan
        .couplings
        .iter()
        .map(|c| {
            json::object([
                ("j", Value::from(c.j)),
                ("k", Value::from(c.k)),
                ("C", json::real_matrix(&c.c)),
            ])
        })
        .collect();
    json::object([
        ("format_version", Value::from(FORMAT_VERSION)),
        ("m", Value::from(plan.m)),
        ("blocks", Value::Array(blocks)),
        ("couplings", Value::Array(couplings)),
    ])
}

pub fn emit_plan(plan: &SynthesisPlan) -> String {
    json::to_string(&plan_value(plan))
}
