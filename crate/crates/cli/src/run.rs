use crate::config::{ConfigError, ExperimentConfig, Mode};
use crate::verify::run_suite;
use flatness::{run_null_control_experiment, PlanParams};
use genfun::{build_family, min_order_for_tail, Variant};
use kawahara_fd::export::fmt_f64;
use kawahara_fd::{norms, snapshot_csv, write_trajectory, BoundarySignal, GridState, Solver, SolverConfig};
use log::info;
use reach::{run_reach_experiment, ReachTarget};
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use thiserror::Error;

/// Relative threshold on the final state of a null-control run.
pub const NULL_FINAL_TOL: f64 = 1e-2;
/// Glue-window threshold relative to `‖u0‖_sup`.
pub const GLUE_TOL: f64 = 5e-3;
/// Relative threshold on the terminal error of a reach run.
pub const REACH_TOL: f64 = 1e-2;
/// Allowed relative one-step growth of the discrete L² norm.
pub const CONTRACTION_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 3,
            RunError::Numerical(_) | RunError::Io { .. } => 4,
        }
    }
}

fn numerical(e: impl std::fmt::Display) -> RunError {
    RunError::Numerical(e.to_string())
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub strict: bool,
    pub emit_plotscript: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub mode: Mode,
    /// Whether every acceptance threshold of the mode holds.
    pub passed: bool,
    pub files: Vec<String>,
    pub summary: String,
}

#[derive(Serialize)]
struct Report<'a, R: Serialize> {
    #[serde(flatten)]
    report: &'a R,
    passed: bool,
    config_echo: &'a ExperimentConfig,
}

struct Out<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Out<'_> {
    fn write(&mut self, name: &str, text: &str) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, text).map_err(|source| RunError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, v: &T) -> Result<(), RunError> {
        let text = serde_json::to_string_pretty(v).map_err(numerical)?;
        self.write(name, &(text + "\n"))
    }
}

fn solver_config(c: &ExperimentConfig) -> Result<SolverConfig, RunError> {
    let mut s = SolverConfig::new(c.nx, c.t_final).map_err(numerical)?;
    s.theta = c.theta;
    s.mu0 = c.mu0;
    if let Some(dt) = c.dt {
        s.dt = dt;
        s = s.with_horizon(c.t_final).map_err(numerical)?;
    }
    Ok(s)
}

/// Demo initial state `x²(x+1)²`.
pub fn demo_state(nx: usize) -> GridState {
    GridState::from_fn(nx, |x| x * x * (x + 1.0) * (x + 1.0))
}

fn plotscript(csvs: &[&str]) -> String {
    let mut s = String::from(
        "import csv\nimport sys\nimport matplotlib.pyplot as plt\n\n\
         def load(name):\n    with open(name) as f:\n        rows = list(csv.reader(f))\n    \
         cols = list(zip(*rows[1:]))\n    return rows[0], [[float(v) for v in c] for c in cols]\n\n",
    );
    for (i, name) in csvs.iter().enumerate() {
        let _ = write!(
            s,
            "head, cols = load(\"{name}\")\nplt.figure({i})\nfor h, c in zip(head[1:], cols[1:]):\n    \
             plt.plot(cols[0], c, label=h)\nplt.xlabel(head[0])\nplt.legend()\nplt.title(\"{name}\")\n\n"
        );
    }
    s + "plt.savefig(sys.argv[1] if len(sys.argv) > 1 else \"plots.png\")\n"
}

pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome, RunError> {
    let dir = cfg.output_dir.as_path();
    fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut out = Out {
        dir,
        files: Vec::new(),
    };
    let mut csvs: Vec<&str> = Vec::new();
    let (passed, summary) = match cfg.mode {
        Mode::NullControl => {
            let params = PlanParams {
                s: cfg.s,
                k: cfg.k,
                tau: cfg.tau,
                t_final: cfg.t_final,
                j_max: cfg.j_max,
            };
            let u0 = demo_state(cfg.nx);
            let run = run_null_control_experiment(&u0, &params, &solver_config(cfg)?)
                .map_err(numerical)?;
            let r = &run.report;
            let passed = r.final_l2 <= NULL_FINAL_TOL * r.initial_l2
                && r.glue_error <= GLUE_TOL * r.initial_sup;
            out.write("controls.csv", &run.controls.to_csv())?;
            out.write("final_state.csv", &snapshot_csv(&run.final_state))?;
            out.json("plan.json", &run.planned.plan)?;
            out.json("report.json", &Report { report: r, passed, config_echo: cfg })?;
            csvs = vec!["controls.csv", "final_state.csv"];
            let summary = format!(
                "final L2 {:.3e} (free evolution {:.3e}, initial {:.3e}), glue error {:.3e}, tail bound {:.3e}",
                r.final_l2, r.free_final_l2, r.initial_l2, r.glue_error, r.tail_bound
            );
            (passed, summary)
        }
        Mode::Reach => {
            let target = match &cfg.target {
                Some(p) => {
                    let text = fs::read_to_string(p).map_err(|source| ConfigError::Io {
                        path: p.clone(),
                        source,
                    })?;
                    ReachTarget::from_json(&text).map_err(|e| ConfigError::Value {
                        key: "target".into(),
                        value: p.display().to_string(),
                        reason: e.to_string(),
                    })?
                }
                None => {
                    let fam = flatness::family_for(cfg.j_max).map_err(numerical)?;
                    ReachTarget::combination(&fam, &[0.1], &[0.05]).map_err(numerical)?
                }
            };
            let mut target = target;
            if let Some(n) = cfg.n {
                target.n_check = n.min(target.n_check);
            }
            let run = run_reach_experiment(
                &target,
                cfg.tau,
                cfg.t_final,
                cfg.j_max,
                cfg.k,
                &solver_config(cfg)?,
            )
            .map_err(numerical)?;
            let r = &run.report;
            let passed = r.target_error_l2 <= REACH_TOL * r.target_l2;
            out.write("controls.csv", &run.controls.to_csv())?;
            out.write("final_state.csv", &snapshot_csv(&run.final_state))?;
            out.json("target.json", &target.to_file())?;
            out.json("plan.json", &run.plan)?;
            out.json("report.json", &Report { report: r, passed, config_echo: cfg })?;
            csvs = vec!["controls.csv", "final_state.csv"];
            let summary = format!(
                "target error L2 {:.3e} of {:.3e}, sup {:.3e}",
                r.target_error_l2, r.target_l2, r.target_error_sup
            );
            (passed, summary)
        }
        Mode::Simulate => {
            let scfg = solver_config(cfg)?;
            let solver = Solver::new(&scfg).map_err(numerical)?;
            let ops = solver.operators().clone();
            let u0 = demo_state(cfg.nx);
            let every = (scfg.steps() / 10).max(1);
            let mut snaps = Vec::new();
            let mut csv = String::from("t,l2,h1_semi,h2_semi,sup\n");
            let mut prev = ops.norms(&u0.u).l2;
            let mut worst = f64::NEG_INFINITY;
            let mut index = 0usize;
            let last = solver
                .run(&u0, &BoundarySignal::Homogeneous, None, |s| {
                    let n = ops.norms(&s.u);
                    worst = worst.max((n.l2 - prev) / prev.max(f64::MIN_POSITIVE));
                    prev = n.l2;
                    if index % every == 0 || index == scfg.steps() {
                        snaps.push(s.clone());
                        let _ = writeln!(
                            csv,
                            "{},{},{},{},{}",
                            fmt_f64(s.t),
                            fmt_f64(n.l2),
                            fmt_f64(n.h1_semi),
                            fmt_f64(n.h2_semi),
                            fmt_f64(n.sup)
                        );
                    }
                    index += 1;
                    Ok(())
                })
                .map_err(numerical)?;
            let manifest = write_trajectory(&dir.join("trajectory"), &snaps).map_err(numerical)?;
            out.files
                .extend(manifest.files.iter().map(|f| format!("trajectory/{f}")));
            out.files.push("trajectory/manifest.json".into());
            out.write("norms.csv", &csv)?;
            csvs = vec!["norms.csv"];
            #[derive(Serialize)]
            struct Sim {
                initial_l2: f64,
                final_l2: f64,
                max_step_increase: f64,
            }
            let sim = Sim {
                initial_l2: norms(&u0).l2,
                final_l2: norms(&last).l2,
                max_step_increase: worst,
            };
            let passed = worst <= CONTRACTION_TOL;
            out.json("report.json", &Report { report: &sim, passed, config_echo: cfg })?;
            let summary = format!(
                "L2 {:.3e} -> {:.3e}, largest step increase {:.3e}",
                sim.initial_l2, sim.final_l2, worst
            );
            (passed, summary)
        }
        Mode::GenfunDump => {
            let order = cfg.n.unwrap_or_else(|| min_order_for_tail(cfg.j_max));
            let fam = build_family(cfg.j_max, order, Variant::Full).map_err(numerical)?;
            out.json("fam.json", &fam.dump())?;
            (true, format!("J_max {} order {order}", cfg.j_max))
        }
        Mode::Verify => {
            let rep = run_suite(cfg.seed).map_err(RunError::Numerical)?;
            out.json("verify.json", &Report { report: &rep, passed: rep.passed, config_echo: cfg })?;
            (rep.passed, rep.table())
        }
    };
    if opts.emit_plotscript && !csvs.is_empty() {
        out.write("plot.py", &plotscript(&csvs))?;
    }
    #[derive(Serialize)]
    struct Manifest<'a> {
        mode: Mode,
        passed: bool,
        files: &'a [String],
        config: &'a ExperimentConfig,
    }
    let files = out.files.clone();
    out.json(
        "manifest.json",
        &Manifest {
            mode: cfg.mode,
            passed,
            files: &files,
            config: cfg,
        },
    )?;
    info!("{}: {}", cfg.mode, summary);
    Ok(Outcome {
        mode: cfg.mode,
        passed,
        files: out.files,
        summary,
    })
}
