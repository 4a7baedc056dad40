//! File formats: system specifications, synthesis plans and netlists, all
//! as deterministic JSON.

pub mod json;
pub mod netlist;
pub mod plan;
pub mod system;

pub use netlist::{emit_netlist, netlist_value, parse_netlist};
pub use plan::{emit_plan, plan_value};
pub use system::{
    emit_system_spec, parse_system_spec, parse_system_spec_unchecked, Parameterization, SystemSpec,
};

pub fn read_file(path: &std::path::Path) -> crate::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| crate::Error::parse(path.display().to_string(), e.to_string()))
}
