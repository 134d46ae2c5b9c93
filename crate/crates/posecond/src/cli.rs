//! Command line entry point. Exit codes: 0 success, 1 usage or input error,
//! 2 numerical failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Vector2;
use posecond_core::bench::{
    generate_instance, run_ransac, ConditioningFilter, CurveParams, RansacConfig, StabilityParams, SyntheticConfig,
};
use posecond_core::condition::{condition_number, empirical_condition};
use posecond_core::curves::{CurveQuery, Window};
use posecond_core::geometry::{Correspondence, ImageData, Intrinsics, Problem};
use posecond_core::illposed::{construct_ill_posed, degeneracy_matrix, is_ill_posed, MARGIN_TOL};
use posecond_core::solvers::{solve_five_point, solve_seven_point};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::{
    curve_stability_csv, curve_to_csv, distance_csv, distance_summary_csv, fmt_f64, load_pairs, load_scene,
    models_json, pairs_to_csv, parse_problem, revelation_csv, save_scene, to_json_string, write_file, SceneFile,
};
use crate::parallel;
use crate::svg::render_svg;

#[derive(Debug, Parser)]
#[command(name = "posecond", version, about = "Conditioning of minimal relative pose problems")]
pub struct Cli {
    /// Base seed of every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "THREADS")]
    pub threads: Option<usize>,
    /// Comma-separated `key=value` tolerance overrides: illposed_margin, jump_cap.
    #[arg(long = "tol-overrides", global = true, value_name = "KEY=VALUE,...")]
    pub tol_overrides: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthetic instance: scene JSON and pixel correspondences CSV.
    Gen {
        #[arg(long, value_parser = problem_arg)]
        problem: Problem,
        #[arg(long, default_value = "scene.json")]
        scene: PathBuf,
        #[arg(long, default_value = "pairs.csv")]
        pairs: PathBuf,
    },
    /// Condition number report of a scene.
    Cond {
        #[arg(long)]
        scene: PathBuf,
        /// Random trials of the empirical estimate; 0 skips it.
        #[arg(long, default_value_t = 0)]
        empirical_trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct or check ill-posed scenes.
    Illposed {
        #[command(subcommand)]
        action: IllposedAction,
    },
    /// Calibrated 5-point solver.
    Solve5(SolveArgs),
    /// Uncalibrated 7-point solver.
    Solve7(SolveArgs),
    /// Degenerate curve of a minimal point set: CSV and optional SVG.
    Curve(CurveArgs),
    /// Synthetic experiments exported as CSV.
    Experiment(ExperimentArgs),
    /// RANSAC with optional conditioning filter.
    Ransac(RansacArgs),
}

#[derive(Debug, Subcommand)]
pub enum IllposedAction {
    Construct {
        #[arg(long, value_parser = problem_arg)]
        problem: Problem,
        #[arg(long)]
        out: PathBuf,
    },
    Check {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    /// `fx,fy,cx,cy`; the pairs are then pixels. Ignored by solve7.
    #[arg(long, value_parser = intrinsics_arg)]
    pub intrinsics: Option<Intrinsics>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_parser = problem_arg)]
    pub problem: Problem,
    /// Minimal correspondences; the last pair's first point is the query and
    /// its second point the target.
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long, value_parser = intrinsics_arg)]
    pub intrinsics: Option<Intrinsics>,
    /// `u_min,u_max,v_min,v_max` in second-image coordinates.
    #[arg(long, default_value = "0,640,0,480", value_parser = window_arg)]
    pub window: [f64; 4],
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    /// Only sweep columns within this distance of the target.
    #[arg(long)]
    pub neighborhood: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    Revelation,
    Distance,
    CurveStability,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub kind: ExperimentKind,
    #[arg(long, value_parser = problem_arg)]
    pub problem: Problem,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    /// Noise levels of the revelation grid.
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.3,0.5,1,2")]
    pub sigmas: Vec<f64>,
    /// Error thresholds of the revelation grid.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1")]
    pub taus: Vec<f64>,
    /// Noise of the stability classification or of the anchors.
    #[arg(long, default_value_t = 0.3)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub tau: f64,
    /// Perturbations per stability verdict.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 40.0)]
    pub halfwidth: f64,
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-class summary of the distance experiment.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RansacArgs {
    #[arg(long, value_parser = problem_arg)]
    pub problem: Problem,
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long, value_parser = intrinsics_arg)]
    pub intrinsics: Option<Intrinsics>,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    /// Sampson inlier bound in squared pixels.
    #[arg(long, default_value_t = 1.0)]
    pub threshold: f64,
    /// Reject samples whose held-out point is closer than this to the curve.
    #[arg(long)]
    pub filter_distance: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub filter_step: f64,
    /// Re-fit on the best inlier set.
    #[arg(long)]
    pub lo: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub log: Option<PathBuf>,
}

fn problem_arg(s: &str) -> std::result::Result<Problem, String> {
    parse_problem(s).map_err(|e| e.to_string())
}

fn floats<const N: usize>(s: &str, what: &str) -> std::result::Result<[f64; N], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("{what}: {t:?} is not a number")))
        .collect::<std::result::Result<_, _>>()?;
    v.try_into().map_err(|_| format!("{what} needs {N} comma-separated numbers"))
}

fn intrinsics_arg(s: &str) -> std::result::Result<Intrinsics, String> {
    let [fx, fy, cx, cy] = floats::<4>(s, "intrinsics")?;
    if !(fx > 0.0 && fy > 0.0) {
        return Err("focal lengths must be positive".into());
    }
    Ok(Intrinsics { fx, fy, cx, cy })
}

fn window_arg(s: &str) -> std::result::Result<[f64; 4], String> {
    let w = floats::<4>(s, "window")?;
    if !(w[1] > w[0] && w[3] > w[2]) {
        return Err("window needs u_min < u_max and v_min < v_max".into());
    }
    Ok(w)
}

/// Tolerances adjustable with `--tol-overrides`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub illposed_margin: f64,
    pub jump_cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { illposed_margin: MARGIN_TOL, jump_cap: 3.0 }
    }
}

impl Tolerances {
    pub fn parse(list: Option<&str>) -> Result<Self> {
        let mut t = Tolerances::default();
        for item in list.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| CliError::format(format!("tolerance override {item:?} is not key=value")))?;
            let v: f64 = v.trim().parse().map_err(|_| CliError::format(format!("tolerance {k}: {v:?} is not a number")))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::format(format!("tolerance {k} must be positive")));
            }
            match k.trim() {
                "illposed_margin" => t.illposed_margin = v,
                "jump_cap" => t.jump_cap = v,
                other => return Err(CliError::format(format!("unknown tolerance {other:?}"))),
            }
        }
        Ok(t)
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let tol = Tolerances::parse(cli.tol_overrides.as_deref())?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::format("--threads must be positive"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::format(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli, &tol))
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ConditionJson {
    problem: &'static str,
    /// `null` when the forward differential is singular.
    cond: Option<f64>,
    sigma_min_forward: f64,
    sigma_max_forward: f64,
    empirical: Option<f64>,
}

#[derive(Serialize)]
struct IllposedJson {
    problem: &'static str,
    ill_posed: bool,
    jacobian_margin: f64,
    normalized_det: f64,
    det: f64,
}

#[derive(Serialize)]
struct RansacJson {
    problem: &'static str,
    model: [f64; 9],
    inliers: Vec<usize>,
    hypotheses: usize,
    rejected: usize,
}

fn dispatch(cli: &Cli, tol: &Tolerances) -> Result<()> {
    match &cli.command {
        Command::Gen { problem, scene, pairs } => {
            let cfg = SyntheticConfig { seed: cli.seed, ..Default::default() };
            let inst = generate_instance(*problem, &cfg, cli.seed)?;
            let intrinsics = (*problem == Problem::Essential).then_some(inst.intrinsics);
            save_scene(&SceneFile { scene: inst.scene, intrinsics }, scene)?;
            write_file(pairs, &pairs_to_csv(&inst.pixels.pairs))
        }
        Command::Cond { scene, empirical_trials, out } => {
            let f = load_scene(scene)?;
            let rep = condition_number(&f.scene)?;
            let empirical = if *empirical_trials > 0 {
                Some(empirical_condition(&f.scene, 1e-7, *empirical_trials, cli.seed)?)
            } else {
                None
            };
            let j = ConditionJson {
                problem: f.scene.problem().letter(),
                cond: rep.cond.is_finite().then_some(rep.cond),
                sigma_min_forward: rep.sigma_min_forward,
                sigma_max_forward: rep.sigma_max_forward,
                empirical,
            };
            emit(out.as_deref(), &to_json_string(&j))
        }
        Command::Illposed { action } => match action {
            IllposedAction::Construct { problem, out } => {
                let scene = construct_ill_posed(*problem, cli.seed)?;
                save_scene(&SceneFile { scene, intrinsics: None }, out)
            }
            IllposedAction::Check { scene, out } => {
                let f = load_scene(scene)?;
                let v = is_ill_posed(&f.scene, tol.illposed_margin)?;
                let cert = degeneracy_matrix(&f.scene);
                let j = IllposedJson {
                    problem: f.scene.problem().letter(),
                    ill_posed: v.is_ill_posed(),
                    jacobian_margin: v.margin(),
                    normalized_det: cert.normalized_det,
                    det: cert.det,
                };
                emit(out.as_deref(), &to_json_string(&j))
            }
        },
        Command::Solve5(a) => {
            let pairs = load_pairs(&a.pairs)?;
            let pairs = match &a.intrinsics {
                Some(k) => k.data_to_normalized(&ImageData::new(pairs)?).pairs,
                None => pairs,
            };
            let out = solve_five_point(&pairs)?;
            let j = models_json(Problem::Essential, &out.models, out.residual_max, out.near_degenerate);
            emit(a.out.as_deref(), &to_json_string(&j))
        }
        Command::Solve7(a) => {
            let out = solve_seven_point(&load_pairs(&a.pairs)?)?;
            let j = models_json(Problem::Fundamental, &out.models, out.residual_max, out.near_degenerate);
            emit(a.out.as_deref(), &to_json_string(&j))
        }
        Command::Curve(a) => curve(a, tol),
        Command::Experiment(a) => experiment(a, cli.seed),
        Command::Ransac(a) => ransac(a, cli.seed),
    }
}

fn curve(a: &CurveArgs, tol: &Tolerances) -> Result<()> {
    let pairs = load_pairs(&a.pairs)?;
    let n = a.problem.minimal_points();
    if pairs.len() != n {
        return Err(CliError::format(format!("curve needs exactly {n} pairs, got {}", pairs.len())));
    }
    if !(a.step > 0.0) {
        return Err(CliError::format("--step must be positive"));
    }
    let [u0, u1, v0, v1] = a.window;
    let mut window = Window::new(u0, u1, v0, v1, a.step);
    window.jump_cap = tol.jump_cap;
    let target = pairs[n - 1].y;
    let query = CurveQuery {
        problem: a.problem,
        anchor: pairs[..n - 1].to_vec(),
        x_last: pairs[n - 1].x,
        window,
        intrinsics: if a.problem == Problem::Essential { a.intrinsics } else { None },
    };
    let sweep = match a.neighborhood {
        Some(h) => {
            let k = (h / a.step + 1e-9).floor() as i64;
            let cols: Vec<f64> =
                (-k..=k).map(|i| target.x + i as f64 * a.step).filter(|u| *u >= u0 && *u <= u1).collect();
            parallel::sweep_columns(&query, &cols)?
        }
        None => parallel::sweep(&query)?,
    };
    write_file(&a.out, &curve_to_csv(&sweep))?;
    if let Some(svg) = &a.svg {
        let anchors: Vec<Vector2<f64>> = query.anchor.iter().map(|p| p.y).collect();
        render_svg(&sweep, &anchors, Some(&target), &window, svg)?;
    }
    if sweep.slices.is_empty() && !sweep.failed.is_empty() {
        return Err(CliError::Numerical(sweep.failed[0].1.clone()));
    }
    Ok(())
}

fn experiment(a: &ExperimentArgs, seed: u64) -> Result<()> {
    let cfg = SyntheticConfig { instances: a.instances, seed, sigma: a.sigma, tau: a.tau, ..Default::default() };
    cfg.validate()?;
    let curve = CurveParams { halfwidth: a.halfwidth, step: a.step };
    let stab = StabilityParams { n: a.trials, sigma: a.sigma, tau: a.tau };
    match a.kind {
        ExperimentKind::Revelation => {
            if a.sigmas.iter().any(|s| !(*s >= 0.0)) || a.taus.iter().any(|t| !(*t > 0.0)) {
                return Err(CliError::format("sigmas must be nonnegative and taus positive"));
            }
            write_file(&a.out, &revelation_csv(&parallel::revelation(a.problem, &cfg, &a.sigmas, &a.taus)))
        }
        ExperimentKind::Distance => {
            let r = parallel::distance_stats(a.problem, &cfg, &stab, &curve);
            write_file(&a.out, &distance_csv(&r))?;
            match &a.summary {
                Some(p) => write_file(p, &distance_summary_csv(&r)),
                None => Ok(()),
            }
        }
        ExperimentKind::CurveStability => {
            write_file(&a.out, &curve_stability_csv(&parallel::curve_stability(a.problem, &cfg, a.sigma, &curve)))
        }
    }
}

fn ransac(a: &RansacArgs, seed: u64) -> Result<()> {
    let pairs: Vec<Correspondence> = load_pairs(&a.pairs)?;
    let config = RansacConfig {
        iterations: a.iterations,
        inlier_threshold: a.threshold,
        filter: a.filter_distance.map_or(ConditioningFilter::Off, ConditioningFilter::MinCurveDistance),
        filter_step: a.filter_step,
        local_optimization: a.lo,
        seed,
    };
    let res = run_ransac(&pairs, a.problem, a.intrinsics.as_ref(), &config, None)?;
    let j = RansacJson {
        problem: a.problem.letter(),
        model: posecond_core::linalg::mat3_to_row_major(res.model.matrix()),
        inliers: res.inliers.clone(),
        hypotheses: res.log.len(),
        rejected: res.log.iter().filter(|r| r.rejected).count(),
    };
    emit(a.out.as_deref(), &to_json_string(&j))?;
    if let Some(p) = &a.log {
        let mut s = String::from("iteration,sample,inliers,curve_distance,rejected\n");
        for r in &res.log {
            let sample: Vec<String> = r.sample.iter().map(|i| i.to_string()).collect();
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.iteration,
                sample.join(" "),
                r.inliers,
                r.curve_distance.map_or(String::new(), fmt_f64),
                r.rejected as u8
            ));
        }
        write_file(p, &s)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_overrides() {
        assert_eq!(Tolerances::parse(None).unwrap(), Tolerances::default());
        let t = Tolerances::parse(Some("jump_cap=5, illposed_margin=1e-6")).unwrap();
        assert_eq!((t.jump_cap, t.illposed_margin), (5.0, 1e-6));
        assert!(Tolerances::parse(Some("nope=1")).is_err());
        assert!(Tolerances::parse(Some("jump_cap")).is_err());
        assert!(Tolerances::parse(Some("jump_cap=-1")).is_err());
    }

    #[test]
    fn argument_parsers() {
        assert!(intrinsics_arg("525,525,320,240").is_ok());
        assert!(intrinsics_arg("525,525,320").is_err());
        assert!(window_arg("0,640,0,480").is_ok());
        assert!(window_arg("640,0,0,480").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["posecond", "--bogus"]), 1);
        assert_eq!(run(["posecond", "gen"]), 1);
        assert_eq!(run(["posecond", "--help"]), 0);
    }
}
