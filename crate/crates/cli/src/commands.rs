use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use beamwave_core::evolution::{
    deviation, energy, energy_rate, evolve, travelling_state, trajectory_csv, EvolveConfig, State,
};
use beamwave_core::params::{check_membership, sample_dense, SampleBudget, SetId};
use beamwave_core::resonance::{critical_frequencies, enumerate_resonances, ScanMethod};
use beamwave_core::solver::{continue_branch, Branch, PathSpec, Solver, WaveSolution};
use beamwave_core::{check_membership_s, check_membership_sprime, Error};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::RunConfig;
use crate::{Cli, Cmd, ParamsCmd};

pub const OK: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const USAGE: u8 = 2;
pub const REFUSED: u8 = 3;
pub const NUMERICAL: u8 = 4;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::MethodRefused(_)) => REFUSED,
        Some(Error::NonConvergence { .. } | Error::NearSingular { .. } | Error::BudgetExhausted(_)) => NUMERICAL,
        _ => USAGE,
    }
}

struct Ctx {
    cfg: RunConfig,
    quiet: bool,
    precision: u32,
}

impl Ctx {
    fn say(&self, s: impl AsRef<str>) {
        if !self.quiet {
            let _ = writeln!(std::io::stdout(), "{}", s.as_ref());
        }
    }

    fn path(&self, name: &str) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&self.cfg.output_dir)
            .with_context(|| format!("creating {}", self.cfg.output_dir.display()))?;
        Ok(self.cfg.output_dir.join(name))
    }

    fn write(&self, name: &str, body: &str) -> anyhow::Result<PathBuf> {
        let p = self.path(name)?;
        fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?;
        Ok(p)
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> anyhow::Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(name, &s)
    }

    /// CSV preceded by a `# config` comment line.
    fn write_csv(&self, name: &str, csv: &str) -> anyhow::Result<PathBuf> {
        let body = format!("# config {}\n{csv}", serde_json::to_string(&self.cfg)?);
        self.write(name, &body)
    }

    fn write_xy(&self, name: &str, rows: &[(f64, f64)]) -> anyhow::Result<PathBuf> {
        let mut s = String::new();
        for (x, y) in rows {
            let _ = writeln!(s, "{x:.17e} {y:.17e}");
        }
        self.write(name, &s)
    }
}

/// Solution file written by `solve` and read by `evolve`/`energy`.
#[derive(Serialize, Deserialize)]
struct SolutionFile {
    config: RunConfig,
    omega_star_decimal: [String; 2],
    solution: WaveSolution,
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    config: RunConfig,
    state: State,
}

fn read_json<T: for<'de> Deserialize<'de>>(p: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
}

/// Accepts either a file written by `evolve` or a bare state object.
fn read_state(p: &Path) -> anyhow::Result<State> {
    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    if let Ok(f) = serde_json::from_str::<StateFile>(&text) {
        return Ok(f.state);
    }
    serde_json::from_str(&text).with_context(|| format!("parsing state {}", p.display()))
}

pub fn run(cli: &Cli) -> anyhow::Result<u8> {
    let cfg = RunConfig::load(cli.global.config.as_deref(), &cli.global.overrides())?;
    let ctx = Ctx {
        cfg,
        quiet: cli.global.quiet,
        precision: cli.global.precision,
    };
    match &cli.cmd {
        Cmd::Params { action } => match action {
            ParamsCmd::Check { set } => params_check(&ctx, *set),
            ParamsCmd::Sample { target, eps, set } => params_sample(&ctx, (target[0], target[1]), *eps, *set),
        },
        Cmd::Resonance { radius, floating } => resonance(&ctx, *radius, *floating),
        Cmd::Solve { rho, plot_data } => solve(&ctx, [rho[0], rho[1]], *plot_data),
        Cmd::Continue {
            path,
            max,
            steps,
            plot_data,
        } => cont(&ctx, PathSpec::straight((*path).into(), *max, *steps), *plot_data),
        Cmd::Evolve {
            from,
            state,
            periods,
            t_end,
            dt,
            sample_every,
            alpha,
            gamma,
            plot_data,
        } => {
            let run = EvolveRun {
                periods: *periods,
                t_end: *t_end,
                dt: *dt,
                sample_every: *sample_every,
                damping: (*alpha, *gamma),
                plot_data: *plot_data,
            };
            match (from, state) {
                (Some(f), _) => evolve_wave(&ctx, f, &run),
                (None, Some(s)) => evolve_state(&ctx, s, &run),
                (None, None) => bail!("one of --from or --state is required"),
            }
        }
        Cmd::Energy { from, state, alpha, gamma } => energy_cmd(&ctx, from.as_deref(), state.as_deref(), (*alpha, *gamma)),
    }
}

fn params_check(ctx: &Ctx, set: Option<SetId>) -> anyhow::Result<u8> {
    let p = &ctx.cfg.problem;
    let report = match set {
        Some(s) => check_membership(p, s)?,
        None => {
            let s = check_membership_s(p)?;
            if s.member {
                s
            } else {
                let sp = check_membership_sprime(p)?;
                if sp.member {
                    sp
                } else {
                    s
                }
            }
        }
    };
    ctx.say(serde_json::to_string_pretty(&report)?);
    Ok(if report.member { OK } else { NEGATIVE })
}

fn params_sample(ctx: &Ctx, target: (f64, f64), eps: f64, set: SetId) -> anyhow::Result<u8> {
    let p = sample_dense(&ctx.cfg.problem, target, eps, set, SampleBudget::default())?;
    let report = check_membership(&p, set)?;
    if !report.member {
        bail!("sampled parameters fail the recheck: {:?}", report.failed_conditions);
    }
    let mut cfg = ctx.cfg.clone();
    cfg.problem = p.clone();
    ctx.say(serde_json::to_string_pretty(&json!({
        "problem": p,
        "mu_decimal": p.params.mu.to_fixed(ctx.precision).to_decimal(ctx.precision),
        "m_decimal": p.params.m.to_fixed(ctx.precision).to_decimal(ctx.precision),
        "report": report,
        "config": cfg,
    }))?);
    Ok(OK)
}

fn resonance(ctx: &Ctx, radius: i64, floating: bool) -> anyhow::Result<u8> {
    let method = if floating { ScanMethod::Floating } else { ScanMethod::Exact };
    let scan = enumerate_resonances(&ctx.cfg.problem, radius, method)?;
    let crit = critical_frequencies(&ctx.cfg.problem, ctx.precision)?;
    let mut csv = String::from("j1,j2\n");
    for j in &scan.hits {
        let _ = writeln!(csv, "{},{}", j[0], j[1]);
    }
    ctx.write_csv("resonance.csv", &csv)?;
    ctx.write_json("resonance.json", &json!({ "config": ctx.cfg, "critical": crit, "scan": scan }))?;
    let n = scan.hits.len();
    ctx.say(format!(
        "kernel size: {n} ({} scan, |j|inf <= {radius}, exact recheck: {})",
        if floating { "floating" } else { "exact" },
        scan.exact_rechecked
    ));
    Ok(if n == 4 { OK } else { NEGATIVE })
}

fn plot_rows(ctx: &Ctx, ws: [f64; 2], sols: &[WaveSolution]) -> anyhow::Result<()> {
    let sigma = |s: &WaveSolution| s.rho[0].max(s.rho[1]);
    let pick = |f: &dyn Fn(&WaveSolution) -> f64| sols.iter().map(|s| (sigma(s), f(s))).collect::<Vec<_>>();
    ctx.write_xy("rho_alpha.dat", &pick(&|s| s.alpha))?;
    ctx.write_xy("rho_gamma.dat", &pick(&|s| s.gamma))?;
    ctx.write_xy("rho_domega.dat", &pick(&|s| (s.omega[0] - ws[0]).abs().max((s.omega[1] - ws[1]).abs())))?;
    Ok(())
}

fn solve(ctx: &Ctx, rho: [f64; 2], plot_data: bool) -> anyhow::Result<u8> {
    let solver = Solver::new(&ctx.cfg.problem, ctx.cfg.solver_config())?;
    let crit = critical_frequencies(&ctx.cfg.problem, ctx.precision)?;
    let sol = solver.solve_wave(rho, None)?;
    let file = SolutionFile {
        config: ctx.cfg.clone(),
        omega_star_decimal: crit.omega_star_decimal.clone(),
        solution: sol.clone(),
    };
    let p = ctx.write_json("solution.json", &file)?;
    if plot_data {
        plot_rows(ctx, solver.omega_star(), std::slice::from_ref(&sol))?;
    }
    ctx.say(format!(
        "rho = ({:e}, {:e}): omega = ({:.15}, {:.15}), alpha = {:.6e}, gamma = {:.6e}, residual_full = {:.3e} (N = {}) -> {}",
        sol.rho[0],
        sol.rho[1],
        sol.omega[0],
        sol.omega[1],
        sol.alpha,
        sol.gamma,
        sol.residual_full,
        sol.n,
        p.display()
    ));
    for w in &sol.warnings {
        ctx.say(format!("warning: {w}"));
    }
    Ok(OK)
}

fn cont(ctx: &Ctx, path: PathSpec, plot_data: bool) -> anyhow::Result<u8> {
    let solver = Solver::new(&ctx.cfg.problem, ctx.cfg.solver_config())?;
    let branch: Branch = continue_branch(&solver, &path)?;
    ctx.write_csv("branch.csv", &branch.to_csv())?;
    ctx.write_json("branch.json", &json!({ "config": ctx.cfg, "branch": branch }))?;
    if plot_data {
        plot_rows(ctx, solver.omega_star(), &branch.points)?;
    }
    ctx.say(format!("{} points, status {:?}", branch.points.len(), branch.status));
    if branch.is_complete() {
        Ok(OK)
    } else {
        eprintln!("beamwave: branch truncated: {:?}", branch.status);
        Ok(NUMERICAL)
    }
}

struct EvolveRun {
    periods: Option<f64>,
    t_end: Option<f64>,
    dt: f64,
    sample_every: usize,
    damping: (f64, f64),
    plot_data: bool,
}

fn finish_evolve(
    ctx: &Ctx,
    cfg: &RunConfig,
    traj: &[State],
    c: &beamwave_core::params::Coeffs,
    damping: (f64, f64),
    dev: Option<&[f64]>,
    plot_data: bool,
) -> anyhow::Result<u8> {
    let sub = Ctx {
        cfg: cfg.clone(),
        quiet: ctx.quiet,
        precision: ctx.precision,
    };
    sub.write_csv("trajectory.csv", &trajectory_csv(traj, c, damping.0, damping.1, dev))?;
    let last = traj.last().expect("trajectory starts with the initial state");
    sub.write_json("final_state.json", &StateFile { config: cfg.clone(), state: last.clone() })?;
    if plot_data {
        let rows: Vec<(f64, f64)> = traj.iter().map(|s| (s.t, energy(s, c))).collect();
        sub.write_xy("t_energy.dat", &rows)?;
    }
    match dev {
        Some(d) => sub.say(format!(
            "{} samples to t = {:.6}, max deviation {:.3e}",
            traj.len(),
            last.t,
            d.iter().cloned().fold(0.0, f64::max)
        )),
        None => sub.say(format!("{} samples to t = {:.6}, final energy {:.12e}", traj.len(), last.t, energy(last, c))),
    }
    Ok(OK)
}

fn evolve_wave(ctx: &Ctx, from: &Path, run: &EvolveRun) -> anyhow::Result<u8> {
    let file: SolutionFile = read_json(from)?;
    let sol = &file.solution;
    let mut cfg = file.config.clone();
    cfg.output_dir = ctx.cfg.output_dir.clone();
    let c = cfg.problem.coeffs();
    let t_end = match (run.periods, run.t_end) {
        (Some(k), _) => k * 2.0 * PI / sol.omega[0].min(sol.omega[1]),
        (None, Some(t)) => t,
        (None, None) => bail!("one of --periods or --t-end is required"),
    };
    let ecfg = EvolveConfig {
        t_end,
        dt: run.dt,
        sample_every: run.sample_every,
    };
    let s0 = travelling_state(sol, c.jstar)?;
    let traj = evolve(&s0, &ecfg, &c, sol.alpha, sol.gamma)?;
    let dev: Vec<f64> = traj.iter().map(|s| deviation(&s0.u, sol.omega, s)).collect();
    finish_evolve(ctx, &cfg, &traj, &c, (sol.alpha, sol.gamma), Some(&dev), run.plot_data)
}

fn evolve_state(ctx: &Ctx, path: &Path, run: &EvolveRun) -> anyhow::Result<u8> {
    let s0 = read_state(path)?;
    let Some(t_end) = run.t_end else {
        bail!("--t-end is required with --state");
    };
    let c = ctx.cfg.problem.coeffs();
    let ecfg = EvolveConfig {
        t_end,
        dt: run.dt,
        sample_every: run.sample_every,
    };
    let traj = evolve(&s0, &ecfg, &c, run.damping.0, run.damping.1)?;
    finish_evolve(ctx, &ctx.cfg, &traj, &c, run.damping, None, run.plot_data)
}

fn energy_cmd(ctx: &Ctx, from: Option<&Path>, state: Option<&Path>, damping: (f64, f64)) -> anyhow::Result<u8> {
    let (s, c, (a, g)) = match (from, state) {
        (Some(f), _) => {
            let file: SolutionFile = read_json(f)?;
            let c = file.config.problem.coeffs();
            let s = travelling_state(&file.solution, c.jstar)?;
            (s, c, (file.solution.alpha, file.solution.gamma))
        }
        (None, Some(p)) => (read_state(p)?, ctx.cfg.problem.coeffs(), damping),
        (None, None) => bail!("one of --from or --state is required"),
    };
    ctx.say(serde_json::to_string_pretty(&json!({
        "t": s.t,
        "energy": energy(&s, &c),
        "energy_rate": energy_rate(&s, &c, a, g),
        "alpha": a,
        "gamma": g,
    }))?);
    Ok(OK)
}
