//! Command-line front end. Exit codes: 0 when every check passes, 1 when a
//! check fails, 2 on unusable input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::{self, json::Node, SystemSpec};
use crate::linalg::{max_abs, RMat};
use crate::moments::{
    compare_systems, convergence_study, simulate, AdiabaticModelParams, ChannelStats, ItoTable,
    SimulationSettings,
};
use crate::optics::netlist::{build_netlist, ComponentKind, NetlistOptions};
use crate::random::random_probe;
use crate::realizability::{check_physical_realizability, from_state_space, to_state_space};
use crate::report::{Check, Report, Stage};
use crate::synthesis::{decompose, reassemble};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Human,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "lqsynth",
    version,
    about = "Synthesis and verification of linear quantum stochastic systems"
)]
struct Cli {
    /// Report format on stdout.
    #[arg(long, value_enum, default_value_t = OutputFormat::Human, global = true)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose a system into one-mode blocks and build its optical netlist.
    Synthesize {
        #[arg(long)]
        input: PathBuf,
        /// Where to write the synthesis plan.
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Where to write the netlist.
        #[arg(long)]
        netlist: Option<PathBuf>,
        /// Auxiliary mirror coupling for the auxiliary-cavity scheme.
        #[arg(long)]
        gamma2: Option<f64>,
        /// Use squeezers around a mirror where possible.
        #[arg(long)]
        prefer_squeezer_sandwich: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Check the physical invariants of a system file.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Integrate mean and second-moment dynamics.
    Simulate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        t_final: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Initial moments: a JSON object with `mean` and `second_moment`.
        #[arg(long)]
        probe: Option<PathBuf>,
        /// Squeezed input statistics `n,c_re[,c_im]`, once per channel.
        #[arg(long, allow_hyphen_values = true)]
        squeezed: Vec<String>,
        /// Where to write the sampled trajectory.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Keep every this many steps in the written trajectory.
        #[arg(long, default_value_t = 100)]
        record_every: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Convert between parameterizations and through the synthesis plan and
    /// report the residuals.
    Roundtrip {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Seed for the random probe states of the dynamic comparison.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        probes: usize,
        #[arg(long, default_value_t = 1.0)]
        t_final: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
    /// Convergence of the auxiliary-cavity model to its adiabatic limit.
    Adiabatic {
        #[arg(long)]
        gamma1: f64,
        #[arg(long)]
        gamma2: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta1: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta2: f64,
        /// `re[,im]`
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        alpha: Complex64,
        /// `re[,im]`
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        beta: Complex64,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
        ks: Vec<f64>,
        #[arg(long, default_value_t = 5.0)]
        t_final: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re or re,im, got {s:?}")),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

/// Parse `argv` (including the program name) and run the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    exit_code: EXIT_INPUT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                    report: None,
                }
            } else {
                Outcome {
                    exit_code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                    report: None,
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(report) => {
            let stdout = match cli.format {
                OutputFormat::Human => report.to_human(),
                OutputFormat::Json => report.to_json(),
            };
            Outcome {
                exit_code: if report.passed() {
                    EXIT_OK
                } else {
                    EXIT_CHECK_FAILED
                },
                stdout,
                stderr: String::new(),
                report: Some(report),
            }
        }
        Err(e) => Outcome {
            exit_code: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            report: None,
        },
    }
}

fn dispatch(command: Command) -> Result<Report> {
    match command {
        Command::Synthesize {
            input,
            plan,
            netlist,
            gamma2,
            prefer_squeezer_sandwich,
            tol,
        } => {
            let options = NetlistOptions {
                gamma2,
                prefer_squeezer_sandwich,
                ..NetlistOptions::default()
            };
            synthesize(&input, plan.as_deref(), netlist.as_deref(), &options, tol)
        }
        Command::Validate { input, tol } => validate(&input, tol),
        Command::Simulate {
            input,
            t_final,
            dt,
            probe,
            squeezed,
            output,
            record_every,
            tol,
        } => {
            let settings = SimulationSettings::new(t_final, dt).every(record_every);
            simulate_cmd(
                &input,
                &settings,
                probe.as_deref(),
                &squeezed,
                output.as_deref(),
                tol,
            )
        }
        Command::Roundtrip {
            input,
            tol,
            seed,
            probes,
            t_final,
            dt,
        } => roundtrip(
            &input,
            tol,
            seed,
            probes,
            &SimulationSettings::new(t_final, dt),
        ),
        Command::Adiabatic {
            gamma1,
            gamma2,
            delta1,
            delta2,
            alpha,
            beta,
            ks,
            t_final,
            dt,
        } => {
            let p = AdiabaticModelParams {
                gamma1,
                gamma2,
                delta1,
                delta2,
                alpha,
                beta,
            };
            adiabatic(&p, &ks, t_final, dt)
        }
    }
}

fn load(path: &Path) -> Result<SystemSpec> {
    io::parse_system_spec_unchecked(&io::read_file(path)?)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn validation_stage(spec: &SystemSpec, tol: f64) -> Stage {
    let mut stage = Stage::new("validation");
    stage
        .info("parameterization", spec.parameterization().name())
        .info("dof", spec.dof())
        .info("channels", spec.channels());
    let violations = spec.violations(tol);
    stage.check(Check::condition(
        "invariants",
        violations.is_empty(),
        if violations.is_empty() {
            "all invariants hold".to_owned()
        } else {
            violations
                .iter()
                .map(|(name, r)| format!("{name} ({r:.3e})"))
                .collect::<Vec<_>>()
                .join(", ")
        },
    ));
    for (name, r) in violations {
        stage.check(Check::at_most(name, r, tol));
    }
    stage
}

fn failed_stage(name: &str, err: &Error) -> Stage {
    let mut stage = Stage::new(name);
    stage.check(Check::condition("completed", false, err.to_string()));
    stage
}

fn validate(input: &Path, tol: f64) -> Result<Report> {
    let spec = load(input)?;
    let mut report = Report::new("validate");
    let stage = validation_stage(&spec, tol);
    let ok = stage.passed();
    report.push(stage);
    if ok {
        let ss = match &spec {
            SystemSpec::Skr(g) => to_state_space(g)?,
            SystemSpec::Abcd(ss) => ss.clone(),
        };
        report.push(realizability_stage(&ss, tol));
    }
    Ok(report)
}

fn realizability_stage(ss: &crate::realizability::StateSpace, tol: f64) -> Stage {
    let r = check_physical_realizability(ss, tol);
    let mut stage = Stage::new("realizability");
    stage
        .check(Check::at_most("ccr_residual", r.ccr_residual, tol))
        .check(Check::at_most(
            "d_unitarity_residual",
            r.d_unitarity_residual,
            tol,
        ))
        .check(Check::at_most(
            "c_consistency_residual",
            r.c_consistency_residual,
            tol,
        ))
        .check(Check::at_most(
            "b_consistency_residual",
            r.b_consistency_residual,
            tol,
        ))
        .check(Check::at_most(
            "hamiltonian_asymmetry",
            r.hamiltonian_asymmetry,
            tol,
        ));
    if let Some(detail) = r.dimension_error {
        stage.check(Check::condition("dimensions", false, detail));
    }
    stage
}

/// Validation, then the oscillator form; `None` once a stage has failed.
fn validated_oscillator(
    report: &mut Report,
    spec: &SystemSpec,
    tol: f64,
) -> Option<crate::slh::OscillatorParams> {
    let stage = validation_stage(spec, tol);
    let ok = stage.passed();
    report.push(stage);
    if !ok {
        return None;
    }
    match spec.to_oscillator(tol) {
        Ok(g) => Some(g),
        Err(e) => {
            report.push(failed_stage("conversion", &e));
            None
        }
    }
}

fn synthesize(
    input: &Path,
    plan_path: Option<&Path>,
    netlist_path: Option<&Path>,
    options: &NetlistOptions,
    tol: f64,
) -> Result<Report> {
    let spec = load(input)?;
    let mut report = Report::new("synthesize");
    let Some(g) = validated_oscillator(&mut report, &spec, tol) else {
        return Ok(report);
    };
    let ss = to_state_space(&g)?;
    report.push(realizability_stage(&ss, tol));

    let plan = match decompose(&g) {
        Ok(p) => p,
        Err(e) => {
            report.push(failed_stage("decomposition", &e));
            return Ok(report);
        }
    };
    let mut stage = Stage::new("decomposition");
    stage.info("blocks", plan.blocks.len()).info(
        "couplings",
        plan.couplings.iter().filter(|c| !c.is_zero(0.0)).count(),
    );
    match reassemble(&plan) {
        Ok(back) => stage.check(Check::at_most(
            "reassembly_residual",
            back.max_difference(&g),
            tol,
        )),
        Err(e) => stage.check(Check::condition(
            "reassembly_residual",
            false,
            e.to_string(),
        )),
    };
    report.push(stage);

    let netlist = match build_netlist(&plan, options) {
        Ok(nl) => nl,
        Err(e) => {
            report.push(failed_stage("netlist", &e));
            return Ok(report);
        }
    };
    let mut stage = Stage::new("netlist");
    stage
        .info("components", netlist.components.len())
        .info("connections", netlist.connections.len());
    let mut counts = BTreeMap::new();
    for c in &netlist.components {
        *counts.entry(c.kind().name()).or_insert(0usize) += 1;
    }
    for kind in ComponentKind::ALL {
        if let Some(n) = counts.get(kind.name()) {
            stage.info(format!("kind.{}", kind.name()), n);
        }
    }
    let text = io::emit_netlist(&netlist);
    let stable = io::parse_netlist(&text).map(|nl| io::emit_netlist(&nl) == text);
    stage.check(Check::condition(
        "byte_stable",
        matches!(stable, Ok(true)),
        match stable {
            Ok(true) => "re-emitted netlist is identical".to_owned(),
            Ok(false) => "re-emitted netlist differs".to_owned(),
            Err(e) => e.to_string(),
        },
    ));
    report.push(stage);

    if let Some(path) = plan_path {
        write(path, &io::emit_plan(&plan))?;
    }
    if let Some(path) = netlist_path {
        write(path, &text)?;
    }
    Ok(report)
}

fn parse_probe(path: &Path, dim: usize) -> Result<(DVector<f64>, RMat)> {
    let text = io::read_file(path)?;
    let doc = io::json::parse(&text)?;
    let root = Node::root(&doc);
    root.expect_keys(&["mean", "second_moment"])?;
    let mean = root.get("mean")?;
    if mean.len()? != dim {
        return Err(mean.error(format!("expected {dim} entries")));
    }
    let m = (0..dim)
        .map(|i| mean.at(i)?.f64())
        .collect::<Result<Vec<_>>>()?;
    let second = root.get("second_moment")?.real_matrix(dim, dim)?;
    Ok((DVector::from_vec(m), second))
}

fn parse_squeezed(items: &[String], m: usize) -> Result<ItoTable> {
    if items.is_empty() {
        return Ok(ItoTable::vacuum(m));
    }
    if items.len() != m {
        return Err(Error::InvalidParameter(format!(
            "--squeezed given {} times for {m} channels",
            items.len()
        )));
    }
    let stats = items
        .iter()
        .map(|s| {
            let nums = s
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse("--squeezed", format!("{s:?}: {e}")))?;
            match nums.as_slice() {
                [n, re] => Ok(ChannelStats {
                    n: *n,
                    c: Complex64::new(*re, 0.0),
                }),
                [n, re, im] => Ok(ChannelStats {
                    n: *n,
                    c: Complex64::new(*re, *im),
                }),
                _ => Err(Error::parse(
                    "--squeezed",
                    format!("expected n,c_re[,c_im], got {s:?}"),
                )),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ItoTable::squeezed(&stats)
}

fn simulate_cmd(
    input: &Path,
    settings: &SimulationSettings,
    probe: Option<&Path>,
    squeezed: &[String],
    output: Option<&Path>,
    tol: f64,
) -> Result<Report> {
    let spec = load(input)?;
    let mut report = Report::new("simulate");
    let Some(g) = validated_oscillator(&mut report, &spec, tol) else {
        return Ok(report);
    };
    let ss = to_state_space(&g)?;
    let dim = 2 * ss.dof();
    let (m0, second0) = match probe {
        Some(p) => parse_probe(p, dim)?,
        None => (DVector::zeros(dim), RMat::identity(dim, dim)),
    };
    let table = parse_squeezed(squeezed, ss.channels())?;
    let traj = simulate(&ss, &m0, &second0, settings, &table)?;

    let mut stage = Stage::new("simulation");
    stage
        .info("t_final", settings.t_final)
        .info("dt", settings.dt)
        .info("samples", traj.len());
    let last_m = traj.means.last().expect("trajectory has a first sample");
    let last_s = traj
        .second_moments
        .last()
        .expect("trajectory has a first sample");
    stage
        .info("final_mean", format!("{:?}", last_m.as_slice()))
        .info(
            "final_second_moment",
            format!("{:?}", last_s.transpose().as_slice()),
        );
    let asym = traj
        .second_moments
        .iter()
        .map(|m| max_abs(&(m - m.transpose())))
        .fold(0.0, f64::max);
    let scale = traj.second_moments.iter().map(max_abs).fold(1.0, f64::max);
    stage.check(Check::at_most("second_moment_asymmetry", asym / scale, tol));
    let finite = traj
        .second_moments
        .iter()
        .all(|m| m.iter().all(|x| x.is_finite()));
    stage.check(Check::condition("finite", finite, "all samples finite"));
    report.push(stage);

    if let Some(path) = output {
        use serde_json::Value;
        let samples = (0..traj.len())
            .map(|i| {
                io::json::object([
                    ("t", io::json::real(traj.times[i])),
                    (
                        "mean",
                        Value::Array(traj.means[i].iter().map(|&x| io::json::real(x)).collect()),
                    ),
                    (
                        "second_moment",
                        io::json::real_matrix(&traj.second_moments[i]),
                    ),
                ])
            })
            .collect();
        write(
            path,
            &io::json::to_string(&io::json::object([("samples", Value::Array(samples))])),
        )?;
    }
    Ok(report)
}

fn roundtrip(
    input: &Path,
    tol: f64,
    seed: u64,
    probes: usize,
    settings: &SimulationSettings,
) -> Result<Report> {
    let spec = load(input)?;
    let mut report = Report::new("roundtrip");
    let Some(g) = validated_oscillator(&mut report, &spec, tol) else {
        return Ok(report);
    };
    let ss = to_state_space(&g)?;
    report.push(realizability_stage(&ss, tol));

    let mut stage = Stage::new("parameterization");
    match from_state_space(&ss, tol) {
        Ok(back) => stage.check(Check::at_most(
            "skr_abcd_skr_residual",
            back.max_difference(&g),
            tol,
        )),
        Err(e) => stage.check(Check::condition(
            "skr_abcd_skr_residual",
            false,
            e.to_string(),
        )),
    };
    if let SystemSpec::Abcd(original) = &spec {
        stage.check(Check::at_most(
            "abcd_skr_abcd_residual",
            ss.max_difference(original),
            tol,
        ));
    }
    report.push(stage);

    let mut stage = Stage::new("synthesis");
    let reassembled = decompose(&g).and_then(|plan| reassemble(&plan));
    match &reassembled {
        Ok(back) => {
            stage.check(Check::at_most(
                "reassembly_residual",
                back.max_difference(&g),
                tol,
            ));
        }
        Err(e) => {
            stage.check(Check::condition(
                "reassembly_residual",
                false,
                e.to_string(),
            ));
        }
    }
    report.push(stage);

    if let Ok(back) = reassembled {
        let mut stage = Stage::new("dynamics");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probe_set: Vec<_> = (0..probes)
            .map(|_| random_probe(&mut rng, g.dof()))
            .collect();
        stage
            .info("probes", probes)
            .info("seed", seed)
            .info("t_final", settings.t_final);
        let deviation = to_state_space(&back)
            .and_then(|ss_b| compare_systems(&ss, &ss_b, &probe_set, settings));
        match deviation {
            Ok(d) => stage.check(Check::at_most("trajectory_deviation", d, 1e-8)),
            Err(e) => stage.check(Check::condition(
                "trajectory_deviation",
                false,
                e.to_string(),
            )),
        };
        report.push(stage);
    }
    Ok(report)
}

fn adiabatic(p: &AdiabaticModelParams, ks: &[f64], t_final: f64, dt: f64) -> Result<Report> {
    p.validate()?;
    let points = convergence_study(p, ks, t_final, dt, &RMat::identity(2, 2))?;
    let mut report = Report::new("adiabatic");
    let mut stage = Stage::new("convergence");
    stage.info("t_final", t_final).info("dt", dt);
    for pt in &points {
        stage.info(format!("error[k={}]", pt.k), format!("{:.6e}", pt.error));
    }
    let decreasing = points.windows(2).all(|w| w[1].error < w[0].error);
    stage.check(Check::condition(
        "monotone_decrease",
        decreasing,
        "error decreases with every larger k",
    ));
    report.push(stage);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arguments() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("-1, 2").unwrap(), Complex64::new(-1.0, 2.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let out = run_command(["lqsynth", "validate", "--bogus"]);
        assert_eq!(out.exit_code, EXIT_INPUT_ERROR);
        assert!(!out.stderr.is_empty());
        let out = run_command(["lqsynth", "frobnicate"]);
        assert_eq!(out.exit_code, EXIT_INPUT_ERROR);
        let out = run_command(["lqsynth", "validate", "--input", "/nonexistent/file.json"]);
        assert_eq!(out.exit_code, EXIT_INPUT_ERROR);
    }

    #[test]
    fn help_exits_0() {
        let out = run_command(["lqsynth", "--help"]);
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.stdout.contains("synthesize"));
    }

    #[test]
    fn adiabatic_decoupled() {
        let out = run_command([
            "lqsynth",
            "--format",
            "json",
            "adiabatic",
            "--gamma1",
            "1",
            "--gamma2",
            "4",
            "--alpha",
            "0",
            "--beta",
            "0",
            "--ks",
            "1,2",
            "--t-final",
            "0.5",
            "--dt",
            "0.01",
        ]);
        // A decoupled slow mode leaves only rounding noise, which need not decrease.
        assert_eq!(out.exit_code, EXIT_CHECK_FAILED, "{}", out.stdout);
        let out = run_command([
            "lqsynth",
            "adiabatic",
            "--gamma1",
            "1",
            "--gamma2",
            "100",
            "--alpha",
            "0,-10",
            "--beta",
            "0,5",
            "--ks",
            "2,4",
            "--t-final",
            "1",
        ]);
        assert_eq!(out.exit_code, EXIT_OK, "{}", out.stdout);
    }
}
