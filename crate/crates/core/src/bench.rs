//! Synthetic instances, instability experiments and a RANSAC harness.
//!
//! Every experiment is a per-instance function of `(config, index)` plus an
//! aggregation step, so callers may evaluate instances in any order or in
//! parallel and still get identical reports.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, Matrix3, Matrix3x4, Vector2, Vector3};
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::condition::nearest_model;
use crate::curves::{try_distance_to_curve, CurveQuery, Window};
use crate::error::{Error, Result};
use crate::geometry::{
    beta, epipolar_matrix, normal_form_uncalibrated, Correspondence, EpipolarModel, EssentialScene,
    FundamentalScene, ImageData, Intrinsics, Problem, Rotation, Scene, UnitTranslation,
};
use crate::linalg::svd_right;
use crate::rng::{derive, rng};
use crate::solvers::{apply, epipolar_rows, hartley, sampson_distance, solve_minimal, SolverOutput};

/// Whole-instance draws before `generate_instance` gives up.
pub const SAMPLE_ATTEMPTS: usize = 100_000;
/// Entries of the reference model below this magnitude are left out of
/// [`model_error`].
pub const MODEL_ENTRY_EPS: f64 = 1e-12;
/// A clean solve must reproduce the truth to this projective distance.
pub const CLEAN_TOL: f64 = 1e-6;
/// Fresh instances drawn when a clean solve fails.
pub const RESAMPLE_LIMIT: u64 = 100;
/// Bins of the distance histograms; the last one holds censored values.
pub const HIST_BINS: usize = 20;

const NOISE_STREAM: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub width: f64,
    pub height: f64,
    pub focal: f64,
    pub depth_min: f64,
    pub depth_max: f64,
    /// Pixel noise standard deviation.
    pub sigma: f64,
    /// Model error threshold.
    pub tau: f64,
    pub instances: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            width: 640.0,
            height: 480.0,
            focal: 525.0,
            depth_min: 1.0,
            depth_max: 20.0,
            sigma: 0.3,
            tau: 0.5,
            instances: 3000,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0 && self.focal > 0.0) {
            return Err(Error::invalid("image size and focal length must be positive"));
        }
        if !(self.depth_min > 0.0 && self.depth_max >= self.depth_min) {
            return Err(Error::invalid("depth range must be positive and ordered"));
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::invalid("sigma must be nonnegative"));
        }
        if !(self.tau > 0.0) {
            return Err(Error::invalid("tau must be positive"));
        }
        Ok(())
    }

    /// Principal point at the image center.
    pub fn intrinsics(&self) -> Intrinsics {
        Intrinsics { fx: self.focal, fy: self.focal, cx: self.width / 2.0, cy: self.height / 2.0 }
    }

    pub fn contains(&self, p: &Vector2<f64>) -> bool {
        p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.height
    }
}

/// Synthetic minimal instance. `pixels` are the observed image points; the
/// essential problem is solved on `intrinsics`-normalized coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub problem: Problem,
    pub scene: Scene,
    pub pixels: ImageData,
    pub intrinsics: Intrinsics,
    pub truth: EpipolarModel,
}

impl Instance {
    /// Pixel data in the coordinates of the minimal solver.
    pub fn solver_coords(&self, pixels: &ImageData) -> ImageData {
        match self.problem {
            Problem::Essential => self.intrinsics.data_to_normalized(pixels),
            Problem::Fundamental => pixels.clone(),
        }
    }

    pub fn solve(&self, pixels: &ImageData) -> Result<SolverOutput> {
        solve_minimal(self.problem, &self.solver_coords(pixels))
    }

    /// Curve query from all but the last pair of `pixels`, with the last
    /// first-image point. Columns are `step` apart and the `v` range covers
    /// the image plus `margin`.
    pub fn curve_query(&self, pixels: &ImageData, cfg: &SyntheticConfig, step: f64, margin: f64) -> CurveQuery {
        let n = pixels.len();
        CurveQuery {
            problem: self.problem,
            anchor: pixels.pairs[..n - 1].to_vec(),
            x_last: pixels.pairs[n - 1].x,
            window: Window::new(-margin, cfg.width + margin, -margin, cfg.height + margin, step),
            intrinsics: (self.problem == Problem::Essential).then_some(self.intrinsics),
        }
    }

    pub fn last_point(&self) -> Vector2<f64> {
        self.pixels.pairs[self.pixels.len() - 1].y
    }
}

/// Random relative pose and minimal point set seen inside both images.
pub fn generate_instance(problem: Problem, cfg: &SyntheticConfig, seed: u64) -> Result<Instance> {
    cfg.validate()?;
    let k = cfg.intrinsics();
    let kinv = k.matrix().try_inverse().ok_or(Error::invalid("singular intrinsics"))?;
    let n = problem.minimal_points();
    let mut r = rng(seed);
    'attempt: for _ in 0..SAMPLE_ATTEMPTS {
        let rot = Rotation::random(&mut r);
        let t = UnitTranslation::random(&mut r);
        let mut pts = Vec::with_capacity(n);
        let mut pairs = Vec::with_capacity(n);
        for _ in 0..n {
            let px = Vector2::new(r.gen::<f64>() * cfg.width, r.gen::<f64>() * cfg.height);
            let depth = cfg.depth_min + r.gen::<f64>() * (cfg.depth_max - cfg.depth_min);
            let x = kinv * px.push(1.0) * depth;
            let y = rot.matrix() * x + t.vector();
            let Some(py) = beta(&y).filter(|_| y.z > 0.0).map(|p| k.to_pixel(&p)) else { continue 'attempt };
            if !cfg.contains(&py) {
                continue 'attempt;
            }
            pts.push(x);
            pairs.push(Correspondence::new(px, py));
        }
        let scene = match problem {
            Problem::Essential => Scene::Essential(EssentialScene::new(rot, t, pts)?),
            Problem::Fundamental => {
                let km = k.matrix();
                let mut a = Matrix3x4::zeros();
                a.fixed_view_mut::<3, 3>(0, 0).copy_from(&km);
                let mut rt = Matrix3x4::zeros();
                rt.fixed_view_mut::<3, 3>(0, 0).copy_from(rot.matrix());
                rt.set_column(3, t.vector());
                let Ok(nf) = normal_form_uncalibrated(&a, &(km * rt)) else { continue };
                let Ok(tp) = pts.iter().map(|p| nf.transform_point(p)).collect::<Result<Vec<Vector3<f64>>>>() else {
                    continue;
                };
                match FundamentalScene::new(nf.b, tp) {
                    Ok(s) => Scene::Fundamental(s),
                    Err(_) => continue,
                }
            }
        };
        let truth = epipolar_matrix(&scene)?;
        return Ok(Instance { problem, scene, pixels: ImageData::new(pairs)?, intrinsics: k, truth });
    }
    Err(Error::SamplingFailed(SAMPLE_ATTEMPTS))
}

/// Independent `N(0, sigma^2 I)` displacement of every image point. The
/// normals do not depend on `sigma`, so one seed gives nested perturbations.
pub fn perturb(data: &ImageData, sigma: f64, seed: u64) -> ImageData {
    let mut r = rng(seed);
    let mut g = || -> f64 { StandardNormal.sample(&mut r) };
    let pairs = data
        .pairs
        .iter()
        .map(|p| {
            let dx = Vector2::new(g(), g());
            let dy = Vector2::new(g(), g());
            Correspondence::new(p.x + dx * sigma, p.y + dy * sigma)
        })
        .collect();
    ImageData { pairs }
}

/// Mean of `| |E_ij / M_ij| - 1 |` over entries with `|M_ij| >= 1e-12`.
pub fn model_error(estimate: &EpipolarModel, truth: &EpipolarModel) -> Result<f64> {
    let (e, m) = (estimate.matrix(), truth.matrix());
    let mut sum = 0.0;
    let mut count = 0usize;
    for (a, b) in e.iter().zip(m.iter()) {
        if b.abs() >= MODEL_ENTRY_EPS {
            sum += ((a / b).abs() - 1.0).abs();
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::invalid("every reference entry is zero"));
    }
    Ok(sum / count as f64)
}

/// Smallest [`model_error`] over `models`.
pub fn nearest_error(models: &[EpipolarModel], truth: &EpipolarModel) -> Option<f64> {
    models.iter().filter_map(|m| model_error(m, truth).ok()).min_by(f64::total_cmp)
}

/// Large error of the nearest noisy model, or a change in the number of real
/// solutions. A failed noisy solve (`None`) counts as erroneous.
pub fn is_erroneous(clean: &SolverOutput, noisy: Option<&SolverOutput>, truth: &EpipolarModel, tau: f64) -> bool {
    let Some(noisy) = noisy else { return true };
    noisy.real_count != clean.real_count || nearest_error(&noisy.models, truth).map_or(true, |e| e > tau)
}

/// Instance `index` of an experiment whose clean solve recovers the truth,
/// with the seed it was drawn from. Failing draws are replaced.
pub fn solvable_instance(problem: Problem, cfg: &SyntheticConfig, index: u64) -> Result<(Instance, SolverOutput, u64)> {
    let base = derive(cfg.seed, index);
    for a in 0..RESAMPLE_LIMIT {
        let seed = derive(base, a);
        let inst = generate_instance(problem, cfg, seed)?;
        if let Ok(out) = inst.solve(&inst.pixels) {
            if nearest_model(&out.models, &inst.truth).is_some_and(|(_, d)| d < CLEAN_TOL) {
                return Ok((inst, out, seed));
            }
        }
    }
    Err(Error::SamplingFailed(RESAMPLE_LIMIT as usize))
}

fn noise_seed(seed: u64, trial: u64) -> u64 {
    derive(seed, NOISE_STREAM + trial)
}

/// Per-instance result of the revelation experiment, one entry per sigma.
#[derive(Debug, Clone, PartialEq)]
pub struct RevelationOutcome {
    /// Error of the nearest noisy model; infinite when the noisy solve failed.
    pub min_error: Vec<f64>,
    pub count_changed: Vec<bool>,
}

pub fn revelation_instance(problem: Problem, cfg: &SyntheticConfig, sigmas: &[f64], index: u64) -> Result<RevelationOutcome> {
    let (inst, clean, seed) = solvable_instance(problem, cfg, index)?;
    let mut out = RevelationOutcome { min_error: Vec::new(), count_changed: Vec::new() };
    for &s in sigmas {
        let noisy = inst.solve(&perturb(&inst.pixels, s, noise_seed(seed, 0))).ok();
        out.min_error.push(noisy.as_ref().and_then(|o| nearest_error(&o.models, &inst.truth)).unwrap_or(f64::INFINITY));
        out.count_changed.push(noisy.map_or(true, |o| o.real_count != clean.real_count));
    }
    Ok(out)
}

/// Erroneous ratios, `ratios[i][j]` for `sigmas[i]` and `taus[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RevelationTable {
    pub sigmas: Vec<f64>,
    pub taus: Vec<f64>,
    pub ratios: Vec<Vec<f64>>,
    pub instances: usize,
    /// Instances that could not be generated.
    pub failures: usize,
}

pub fn aggregate_revelation(sigmas: &[f64], taus: &[f64], outcomes: &[Result<RevelationOutcome>]) -> RevelationTable {
    let ok: Vec<&RevelationOutcome> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let n = ok.len().max(1) as f64;
    let ratios = (0..sigmas.len())
        .map(|i| {
            taus.iter()
                .map(|&tau| ok.iter().filter(|o| o.count_changed[i] || o.min_error[i] > tau).count() as f64 / n)
                .collect()
        })
        .collect();
    RevelationTable {
        sigmas: sigmas.to_vec(),
        taus: taus.to_vec(),
        ratios,
        instances: ok.len(),
        failures: outcomes.len() - ok.len(),
    }
}

/// Fraction of erroneous instances on a `(sigma, tau)` grid over
/// `cfg.instances` instances.
pub fn run_revelation(problem: Problem, cfg: &SyntheticConfig, sigmas: &[f64], taus: &[f64]) -> RevelationTable {
    let outcomes: Vec<_> = (0..cfg.instances as u64).map(|i| revelation_instance(problem, cfg, sigmas, i)).collect();
    aggregate_revelation(sigmas, taus, &outcomes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StabilityClass {
    Stable,
    Borderline,
    Unstable,
}

impl StabilityClass {
    pub const ALL: [StabilityClass; 3] = [StabilityClass::Stable, StabilityClass::Borderline, StabilityClass::Unstable];

    pub fn name(self) -> &'static str {
        match self {
            StabilityClass::Stable => "stable",
            StabilityClass::Borderline => "borderline",
            StabilityClass::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub n: usize,
    pub n_hat: usize,
    pub class: StabilityClass,
}

impl StabilityVerdict {
    /// Stable when `n_hat <= n/3`, unstable when `n_hat >= 2n/3`.
    pub fn from_counts(n: usize, n_hat: usize) -> Self {
        let class = if 3 * n_hat <= n {
            StabilityClass::Stable
        } else if 3 * n_hat >= 2 * n {
            StabilityClass::Unstable
        } else {
            StabilityClass::Borderline
        };
        StabilityVerdict { n, n_hat, class }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityParams {
    pub n: usize,
    pub sigma: f64,
    pub tau: f64,
}

impl Default for StabilityParams {
    fn default() -> Self {
        StabilityParams { n: 20, sigma: 0.3, tau: 0.5 }
    }
}

/// Count erroneous solves over `n` noisy copies of the instance.
pub fn classify_stability(inst: &Instance, params: &StabilityParams, seed: u64) -> Result<StabilityVerdict> {
    let clean = inst.solve(&inst.pixels)?;
    let n_hat = (0..params.n as u64)
        .filter(|&k| {
            let noisy = inst.solve(&perturb(&inst.pixels, params.sigma, noise_seed(seed, k))).ok();
            is_erroneous(&clean, noisy.as_ref(), &inst.truth, params.tau)
        })
        .count();
    Ok(StabilityVerdict::from_counts(params.n, n_hat))
}

/// Local curve sampling used for distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParams {
    /// Columns within this horizontal distance of the point are solved;
    /// distances beyond it are censored to it.
    pub halfwidth: f64,
    pub step: f64,
}

impl Default for CurveParams {
    fn default() -> Self {
        CurveParams { halfwidth: 40.0, step: 1.0 }
    }
}

/// Distance from the last second-image point to the curve of the other
/// points, with `min(d, halfwidth)` and a censoring flag. Exact whenever the
/// true distance is below the halfwidth.
pub fn censored_distance(inst: &Instance, anchors: &ImageData, cfg: &SyntheticConfig, curve: &CurveParams) -> Result<(f64, bool)> {
    let q = inst.curve_query(anchors, cfg, curve.step, curve.halfwidth);
    let d = try_distance_to_curve(&q, &inst.last_point(), curve.halfwidth)?;
    Ok(if d >= curve.halfwidth { (curve.halfwidth, true) } else { (d, false) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceRecord {
    pub index: u64,
    pub verdict: StabilityVerdict,
    pub distance: f64,
    pub censored: bool,
}

pub fn distance_instance(
    problem: Problem,
    cfg: &SyntheticConfig,
    stab: &StabilityParams,
    curve: &CurveParams,
    index: u64,
) -> Result<DistanceRecord> {
    let (inst, _, seed) = solvable_instance(problem, cfg, index)?;
    let verdict = classify_stability(&inst, stab, seed)?;
    let (distance, censored) = censored_distance(&inst, &inst.pixels, cfg, curve)?;
    Ok(DistanceRecord { index, verdict, distance, censored })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassSummary {
    pub class: StabilityClass,
    pub count: usize,
    pub censored: usize,
    pub mean: f64,
    pub median: f64,
    /// Counts over `HIST_BINS` equal bins of `[0, halfwidth]`.
    pub histogram: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub records: Vec<DistanceRecord>,
    pub failures: usize,
    pub summaries: Vec<ClassSummary>,
    pub bin_width: f64,
}

impl DistanceReport {
    pub fn summary(&self, class: StabilityClass) -> Option<&ClassSummary> {
        self.summaries.iter().find(|s| s.class == class)
    }

    pub fn distances(&self, class: StabilityClass) -> Vec<f64> {
        self.records.iter().filter(|r| r.verdict.class == class).map(|r| r.distance).collect()
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        f64::NAN
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Counts over `HIST_BINS` bins of `[0, upper]`; values at or above `upper`
/// land in the last bin.
pub fn histogram(values: &[f64], upper: f64) -> Vec<usize> {
    let mut h = vec![0; HIST_BINS];
    for &v in values {
        let b = ((v / upper) * HIST_BINS as f64).floor().max(0.0) as usize;
        h[b.min(HIST_BINS - 1)] += 1;
    }
    h
}

/// Probability that a random `low` value is below a random `high` value,
/// ties counted half.
pub fn separation_auc(low: &[f64], high: &[f64]) -> f64 {
    if low.is_empty() || high.is_empty() {
        return f64::NAN;
    }
    let mut s = 0.0;
    for a in low {
        for b in high {
            s += if a < b {
                1.0
            } else if a == b {
                0.5
            } else {
                0.0
            };
        }
    }
    s / (low.len() * high.len()) as f64
}

pub fn aggregate_distances(records: &[Result<DistanceRecord>], curve: &CurveParams) -> DistanceReport {
    let ok: Vec<DistanceRecord> = records.iter().filter_map(|r| r.as_ref().ok().copied()).collect();
    let summaries = StabilityClass::ALL
        .iter()
        .filter_map(|&class| {
            let rs: Vec<&DistanceRecord> = ok.iter().filter(|r| r.verdict.class == class).collect();
            if rs.is_empty() {
                return None;
            }
            let d: Vec<f64> = rs.iter().map(|r| r.distance).collect();
            Some(ClassSummary {
                class,
                count: rs.len(),
                censored: rs.iter().filter(|r| r.censored).count(),
                mean: mean(&d),
                median: median(&d),
                histogram: histogram(&d, curve.halfwidth),
            })
        })
        .collect();
    DistanceReport {
        failures: records.len() - ok.len(),
        records: ok,
        summaries,
        bin_width: curve.halfwidth / HIST_BINS as f64,
    }
}

/// Stability class and curve distance of the last point for
/// `cfg.instances` instances.
pub fn run_distance_stats(problem: Problem, cfg: &SyntheticConfig, stab: &StabilityParams, curve: &CurveParams) -> DistanceReport {
    let records: Vec<_> = (0..cfg.instances as u64).map(|i| distance_instance(problem, cfg, stab, curve, i)).collect();
    aggregate_distances(&records, curve)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveStabilityRecord {
    pub index: u64,
    pub clean: f64,
    pub perturbed: f64,
    pub difference: f64,
}

/// Distance of the last point to the curve of clean and of perturbed
/// anchors. The last pair itself is not perturbed.
pub fn curve_stability_instance(
    problem: Problem,
    cfg: &SyntheticConfig,
    sigma: f64,
    curve: &CurveParams,
    index: u64,
) -> Result<CurveStabilityRecord> {
    let (inst, _, seed) = solvable_instance(problem, cfg, index)?;
    let n = inst.pixels.len();
    let mut noisy = perturb(&inst.pixels, sigma, noise_seed(seed, 0));
    noisy.pairs[n - 1] = inst.pixels.pairs[n - 1];
    let (clean, _) = censored_distance(&inst, &inst.pixels, cfg, curve)?;
    let (perturbed, _) = censored_distance(&inst, &noisy, cfg, curve)?;
    Ok(CurveStabilityRecord { index, clean, perturbed, difference: (clean - perturbed).abs() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveStabilityReport {
    pub records: Vec<CurveStabilityRecord>,
    pub failures: usize,
    pub median: f64,
    pub histogram: Vec<usize>,
}

pub fn aggregate_curve_stability(records: &[Result<CurveStabilityRecord>], curve: &CurveParams) -> CurveStabilityReport {
    let ok: Vec<CurveStabilityRecord> = records.iter().filter_map(|r| r.as_ref().ok().copied()).collect();
    let d: Vec<f64> = ok.iter().map(|r| r.difference).collect();
    CurveStabilityReport {
        failures: records.len() - ok.len(),
        median: median(&d),
        histogram: histogram(&d, curve.halfwidth),
        records: ok,
    }
}

pub fn run_curve_stability(problem: Problem, cfg: &SyntheticConfig, sigma: f64, curve: &CurveParams) -> CurveStabilityReport {
    let records: Vec<_> =
        (0..cfg.instances as u64).map(|i| curve_stability_instance(problem, cfg, sigma, curve, i)).collect();
    aggregate_curve_stability(&records, curve)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConditioningFilter {
    Off,
    /// Reject minimal samples whose held-out point lies closer than this
    /// (pixels) to the curve of the other sample points.
    MinCurveDistance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RansacConfig {
    pub iterations: usize,
    /// Sampson distance bound for inliers, in squared pixels.
    pub inlier_threshold: f64,
    pub filter: ConditioningFilter,
    /// Column spacing of the filter's curve sweep, in pixels.
    pub filter_step: f64,
    pub local_optimization: bool,
    pub seed: u64,
}

impl Default for RansacConfig {
    fn default() -> Self {
        RansacConfig {
            iterations: 1000,
            inlier_threshold: 1.0,
            filter: ConditioningFilter::Off,
            filter_step: 1.0,
            local_optimization: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisRecord {
    pub iteration: usize,
    pub sample: Vec<usize>,
    /// Inliers of the best model of this sample; 0 when rejected or unsolved.
    pub inliers: usize,
    pub curve_distance: Option<f64>,
    pub rejected: bool,
    /// Error of that model against the reference, when one was given.
    pub model_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RansacResult {
    /// In solver coordinates (normalized for the essential problem).
    pub model: EpipolarModel,
    pub inliers: Vec<usize>,
    pub log: Vec<HypothesisRecord>,
}

/// The model acting on pixel coordinates, `K^-T E K^-1`.
pub fn pixel_model(model: &EpipolarModel, k: &Intrinsics) -> Result<EpipolarModel> {
    let kinv = k.matrix().try_inverse().ok_or(Error::invalid("singular intrinsics"))?;
    EpipolarModel::new(Problem::Fundamental, kinv.transpose() * model.matrix() * kinv)
}

/// Least-squares model from eight or more pairs, projected onto the model
/// manifold. Fundamental fits use normalized coordinates.
pub fn fit_linear(problem: Problem, pairs: &[Correspondence]) -> Result<EpipolarModel> {
    if pairs.len() < 8 {
        return Err(Error::WrongPointCount { expected: 8, found: pairs.len() });
    }
    let (t1, t2) = match problem {
        Problem::Fundamental => (hartley(pairs.iter().map(|p| p.x)), hartley(pairs.iter().map(|p| p.y))),
        Problem::Essential => (Matrix3::identity(), Matrix3::identity()),
    };
    let work: Vec<Correspondence> = pairs.iter().map(|p| Correspondence::new(apply(&t1, &p.x), apply(&t2, &p.y))).collect();
    let rows: DMatrix<f64> = epipolar_rows(&work);
    let (_, v) = svd_right(&rows);
    let m = Matrix3::from_row_slice(v.column(8).as_slice());
    let svd = m.svd(true, true);
    let (u, vt) = (svd.u.ok_or(Error::NoSolution)?, svd.v_t.ok_or(Error::NoSolution)?);
    let mut s: Vec<(f64, usize)> = svd.singular_values.iter().copied().zip(0..3).collect();
    s.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut d = Matrix3::zeros();
    match problem {
        Problem::Fundamental => {
            d[(s[0].1, s[0].1)] = s[0].0;
            d[(s[1].1, s[1].1)] = s[1].0;
        }
        Problem::Essential => {
            d[(s[0].1, s[0].1)] = 1.0;
            d[(s[1].1, s[1].1)] = 1.0;
        }
    }
    EpipolarModel::new(problem, t2.transpose() * (u * d * vt) * t1)
}

struct Scorer<'a> {
    pixels: &'a [Correspondence],
    k: Option<&'a Intrinsics>,
    threshold: f64,
}

impl Scorer<'_> {
    fn inliers(&self, model: &EpipolarModel) -> Result<Vec<usize>> {
        let pm = match self.k {
            Some(k) => pixel_model(model, k)?,
            None => *model,
        };
        Ok((0..self.pixels.len()).filter(|&i| sampson_distance(&pm, &self.pixels[i]) < self.threshold).collect())
    }
}

/// Hypothesize-and-verify on pixel correspondences. With `intrinsics` the
/// essential problem is solved on normalized coordinates and scored in
/// pixels; without them the pairs are taken as already normalized.
pub fn run_ransac(
    pairs: &[Correspondence],
    problem: Problem,
    intrinsics: Option<&Intrinsics>,
    config: &RansacConfig,
    truth: Option<&EpipolarModel>,
) -> Result<RansacResult> {
    let m = problem.minimal_points();
    if pairs.len() < m {
        return Err(Error::WrongPointCount { expected: m, found: pairs.len() });
    }
    if config.iterations == 0 {
        return Err(Error::invalid("iterations must be positive"));
    }
    let k = if problem == Problem::Essential { intrinsics } else { None };
    let solver_pairs: Vec<Correspondence> = match k {
        Some(k) => pairs.iter().map(|p| Correspondence::new(k.to_normalized(&p.x), k.to_normalized(&p.y))).collect(),
        None => pairs.to_vec(),
    };
    let scorer = Scorer { pixels: pairs, k, threshold: config.inlier_threshold };
    let mut r = rng(config.seed);
    let mut log = Vec::with_capacity(config.iterations);
    let mut best: Option<(EpipolarModel, Vec<usize>)> = None;
    for iteration in 0..config.iterations {
        let sample: Vec<usize> = rand::seq::index::sample(&mut r, pairs.len(), m).into_vec();
        let mut rec = HypothesisRecord { iteration, sample, inliers: 0, curve_distance: None, rejected: false, model_error: None };
        if let ConditioningFilter::MinCurveDistance(dmin) = config.filter {
            let q = CurveQuery {
                problem,
                anchor: rec.sample[..m - 1].iter().map(|&i| pairs[i]).collect(),
                x_last: pairs[rec.sample[m - 1]].x,
                window: Window::new(f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, config.filter_step),
                intrinsics: k.copied(),
            };
            rec.curve_distance = try_distance_to_curve(&q, &pairs[rec.sample[m - 1]].y, dmin).ok();
            if rec.curve_distance.is_some_and(|d| d < dmin) {
                rec.rejected = true;
                log.push(rec);
                continue;
            }
        }
        let data = ImageData { pairs: rec.sample.iter().map(|&i| solver_pairs[i]).collect() };
        if let Ok(out) = solve_minimal(problem, &data) {
            let mut top: Option<(EpipolarModel, Vec<usize>)> = None;
            for model in &out.models {
                let inl = scorer.inliers(model)?;
                if top.as_ref().map_or(true, |t| inl.len() > t.1.len()) {
                    top = Some((*model, inl));
                }
            }
            if let Some((model, inl)) = top {
                rec.inliers = inl.len();
                rec.model_error = truth.and_then(|t| model_error(&model, t).ok());
                if best.as_ref().map_or(true, |b| inl.len() > b.1.len()) {
                    best = Some((model, inl));
                }
            }
        }
        log.push(rec);
    }
    let (mut model, mut inliers) = best.ok_or(Error::NoHypothesis)?;
    if config.local_optimization && inliers.len() >= 8 {
        let sel: Vec<Correspondence> = inliers.iter().map(|&i| solver_pairs[i]).collect();
        if let Ok(refit) = fit_linear(problem, &sel) {
            let inl = scorer.inliers(&refit)?;
            if inl.len() >= inliers.len() {
                model = refit;
                inliers = inl;
            }
        }
    }
    Ok(RansacResult { model, inliers, log })
}

/// Hypotheses passed to the solver until the running best model (most
/// inliers, earliest on ties) has error at most `target`. Samples rejected
/// by the conditioning filter are not counted.
pub fn hypotheses_to_target(log: &[HypothesisRecord], target: f64) -> Option<usize> {
    let mut best: Option<&HypothesisRecord> = None;
    let mut tested = 0;
    for rec in log.iter().filter(|r| !r.rejected) {
        tested += 1;
        if rec.inliers == 0 {
            continue;
        }
        if best.map_or(true, |b| rec.inliers > b.inliers) {
            best = Some(rec);
        }
        if best.and_then(|b| b.model_error).is_some_and(|e| e <= target) {
            return Some(tested);
        }
    }
    None
}

/// `n` pixel correspondences of a random scene seen by both cameras, with
/// pixel noise `sigma` and a fraction `outliers` of the pairs replaced by
/// independent uniform points. Returns the pairs, the inlier flags and the
/// reference model in solver coordinates. The scene is always drawn
/// calibrated; the fundamental reference is `K^-T E K^-1`.
pub fn ransac_data(
    problem: Problem,
    cfg: &SyntheticConfig,
    n: usize,
    sigma: f64,
    outliers: f64,
    seed: u64,
) -> Result<(Vec<Correspondence>, Vec<bool>, EpipolarModel)> {
    let mut c = *cfg;
    c.seed = seed;
    let (inst, _, _) = solvable_instance(Problem::Essential, &c, 0)?;
    let Scene::Essential(scene) = &inst.scene else { unreachable!() };
    let (rot, t) = (*scene.rotation.matrix(), *scene.translation.vector());
    let truth = match problem {
        Problem::Essential => inst.truth,
        Problem::Fundamental => pixel_model(&inst.truth, &inst.intrinsics)?,
    };
    let k = cfg.intrinsics();
    let kinv = k.matrix().try_inverse().ok_or(Error::invalid("singular intrinsics"))?;
    let mut r = rng(derive(seed, 1));
    let mut pairs = Vec::with_capacity(n);
    let mut attempts = 0;
    while pairs.len() < n {
        attempts += 1;
        if attempts > SAMPLE_ATTEMPTS {
            return Err(Error::SamplingFailed(SAMPLE_ATTEMPTS));
        }
        let px = Vector2::new(r.gen::<f64>() * cfg.width, r.gen::<f64>() * cfg.height);
        let depth = cfg.depth_min + r.gen::<f64>() * (cfg.depth_max - cfg.depth_min);
        let x = kinv * px.push(1.0) * depth;
        let y = rot * x + t;
        if let Some(py) = beta(&y).filter(|_| y.z > 0.0).map(|p| k.to_pixel(&p)).filter(|p| cfg.contains(p)) {
            pairs.push(Correspondence::new(px, py));
        }
    }
    let mut data = perturb(&ImageData { pairs }, sigma, derive(seed, 2)).pairs;
    let n_out = (outliers * n as f64).round() as usize;
    let mut flags = vec![true; n];
    for i in rand::seq::index::sample(&mut r, n, n_out.min(n)).into_iter() {
        flags[i] = false;
        let a = Vector2::new(r.gen::<f64>() * cfg.width, r.gen::<f64>() * cfg.height);
        let b = Vector2::new(r.gen::<f64>() * cfg.width, r.gen::<f64>() * cfg.height);
        data[i] = Correspondence::new(a, b);
    }
    Ok((data, flags, truth))
}
