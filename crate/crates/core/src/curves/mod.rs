//! Degenerate curves of the minimal problems: for fixed anchor
//! correspondences and a fixed first-image point of the last pair, the
//! second-image positions that make the instance ill-posed. Columns are
//! intersected with vertical lines and linked into polylines.

mod e_start;
pub mod start;
pub mod system;

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, Matrix3, Vector2};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{Correspondence, Intrinsics, Problem};
use crate::linalg::C64;
use crate::polysys::{filter_real, solve_total_degree, track_parameter_path, PathResult, PathStatus, Squared, TrackOptions};
use crate::solvers::roots::normalized_cubic_discriminant;
use crate::solvers::{epipolar_rows, nullspace_basis};
use start::{essential_squared, generic_params, E_START_SEED};
use system::{EssentialCurveSystem, FundamentalCurveSystem, F_SOLUTION_COUNT};

pub(crate) fn max_norm(z: &[C64]) -> f64 {
    z.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Roots are reported only when every defining equation, on unit-norm
/// representatives, is below this bound.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;
/// Roots closer than this in `v` are merged.
pub const ROOT_MERGE_TOL: f64 = 1e-6;
/// Columns between fresh solves when continuing the essential curve.
pub const REFRESH_PERIOD: usize = 50;
const F_START_SEEDS: u64 = 5;
const F_HOMOTOPY_SEED: u64 = 77;
/// Complex column where fresh fundamental solves start; generic, so all
/// finite solutions are regular there.
const F_GENERIC_COLUMN: C64 = C64::new(0.318, 0.727);
const COLUMN_ARC: f64 = 0.5;
const IMAG_TOL: f64 = 1e-6;

/// Rectangle in the second image and the column spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub step: f64,
    /// Largest `|dv|` between linked roots of adjacent columns.
    pub jump_cap: f64,
}

impl Window {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64, step: f64) -> Self {
        Window { u_min, u_max, v_min, v_max, step, jump_cap: 3.0 }
    }

    pub fn columns(&self) -> Vec<f64> {
        if !(self.step > 0.0) || !(self.u_max >= self.u_min) {
            return Vec::new();
        }
        let n = ((self.u_max - self.u_min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.u_min + k as f64 * self.step).collect()
    }
}

/// Anchor correspondences (4 for the essential problem, 6 for the
/// fundamental one) plus the first-image point of the last pair. With
/// `intrinsics` set, coordinates are pixels and the essential problem is
/// solved in calibrated coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveQuery {
    pub problem: Problem,
    pub anchor: Vec<Correspondence>,
    pub x_last: Vector2<f64>,
    pub window: Window,
    pub intrinsics: Option<Intrinsics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSlice {
    pub u: f64,
    /// Sorted.
    pub roots: Vec<f64>,
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveSweep {
    pub slices: Vec<CurveSlice>,
    /// Polylines through roots of consecutive columns.
    pub segments: Vec<Vec<Vector2<f64>>>,
    pub failed: Vec<(f64, Error)>,
}

/// Per-axis affine change `p -> (p - c) / s` into working coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
struct AxisMap {
    c: Vector2<f64>,
    s: Vector2<f64>,
}

impl AxisMap {
    fn identity() -> Self {
        AxisMap { c: Vector2::zeros(), s: Vector2::new(1.0, 1.0) }
    }

    fn from_intrinsics(k: &Intrinsics) -> Self {
        AxisMap { c: Vector2::new(k.cx, k.cy), s: Vector2::new(k.fx, k.fy) }
    }

    /// Centroid at the origin, mean distance `sqrt 2`.
    fn similarity(pts: &[Vector2<f64>]) -> Self {
        let c = pts.iter().sum::<Vector2<f64>>() / pts.len() as f64;
        let d = pts.iter().map(|p| (p - c).norm()).sum::<f64>() / pts.len() as f64;
        let s = if d > 0.0 { d / core::f64::consts::SQRT_2 } else { 1.0 };
        AxisMap { c, s: Vector2::new(s, s) }
    }

    fn to_work(&self, p: &Vector2<f64>) -> Vector2<f64> {
        (p - self.c).component_div(&self.s)
    }

    fn u(&self, u: f64) -> f64 {
        (u - self.c.x) / self.s.x
    }

    fn v_back(&self, v: f64) -> f64 {
        v * self.s.y + self.c.y
    }
}

/// Carries the essential curve solutions from one column to the next.
#[derive(Debug, Clone)]
struct Continuation {
    params: Vec<C64>,
    solutions: Vec<Vec<C64>>,
    age: usize,
}

/// Prepared state for computing columns of one query.
pub struct CurveSolver {
    problem: Problem,
    basis: Vec<Matrix3<f64>>,
    x: Vector2<f64>,
    map2: AxisMap,
    window: Window,
    e_sys: Option<Squared<EssentialCurveSystem>>,
    f_sys: Option<FundamentalCurveSystem>,
    /// Solutions at [`F_GENERIC_COLUMN`].
    f_start: Option<Vec<Vec<C64>>>,
    state: Option<Continuation>,
    opts: TrackOptions,
}

impl CurveSolver {
    pub fn new(query: &CurveQuery) -> Result<Self> {
        let problem = query.problem;
        let needed = problem.minimal_points() - 1;
        if query.anchor.len() != needed {
            return Err(Error::WrongPointCount { expected: needed, found: query.anchor.len() });
        }
        let (map1, map2) = match (problem, &query.intrinsics) {
            (Problem::Essential, Some(k)) => (AxisMap::from_intrinsics(k), AxisMap::from_intrinsics(k)),
            (Problem::Essential, None) => (AxisMap::identity(), AxisMap::identity()),
            (Problem::Fundamental, _) => {
                let mut xs: Vec<Vector2<f64>> = query.anchor.iter().map(|p| p.x).collect();
                xs.push(query.x_last);
                let ys: Vec<Vector2<f64>> = query.anchor.iter().map(|p| p.y).collect();
                (AxisMap::similarity(&xs), AxisMap::similarity(&ys))
            }
        };
        let work: Vec<Correspondence> =
            query.anchor.iter().map(|p| Correspondence::new(map1.to_work(&p.x), map2.to_work(&p.y))).collect();
        let basis = nullspace_basis(&epipolar_rows(&work), 9 - needed)?;
        let x = map1.to_work(&query.x_last);
        Ok(CurveSolver {
            problem,
            x,
            map2,
            window: query.window,
            e_sys: (problem == Problem::Essential).then(essential_squared),
            f_sys: (problem == Problem::Fundamental).then(|| FundamentalCurveSystem::new(&basis, x)),
            basis,
            f_start: None,
            state: None,
            opts: TrackOptions::default(),
        })
    }

    /// Intersection of the curve with the vertical line at `u` (original
    /// coordinates), restricted to the window's `v` range.
    pub fn column(&mut self, u: f64) -> Result<CurveSlice> {
        let uw = self.map2.u(u);
        let mut found: Vec<(f64, f64)> = match self.problem {
            Problem::Fundamental => self.fundamental_column(uw)?,
            Problem::Essential => self.essential_column(uw)?,
        };
        for r in found.iter_mut() {
            r.0 = self.map2.v_back(r.0);
        }
        found.retain(|r| r.0 >= self.window.v_min && r.0 <= self.window.v_max);
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut roots: Vec<f64> = Vec::new();
        let mut residuals: Vec<f64> = Vec::new();
        for (v, res) in found {
            match roots.last() {
                Some(&last) if (v - last).abs() <= ROOT_MERGE_TOL => {
                    let k = residuals.len() - 1;
                    residuals[k] = residuals[k].min(res);
                }
                _ => {
                    roots.push(v);
                    residuals.push(res);
                }
            }
        }
        Ok(CurveSlice { u, roots, residuals })
    }

    fn fundamental_column(&mut self, u: f64) -> Result<Vec<(f64, f64)>> {
        let sys = self.f_sys.as_ref().expect("fundamental system");
        let target = [C64::new(u, 0.0)];
        let continued = self.continue_from_state(sys, &target);
        let (res, ends, age) = match continued {
            Some(c) => c,
            None => {
                if self.f_start.is_none() {
                    self.f_start = Some(fundamental_start(sys, &self.opts)?);
                }
                let starts = self.f_start.as_ref().expect("just set");
                let res = if !starts.is_empty() {
                    track_parameter_path(sys, starts, &[F_GENERIC_COLUMN], &target, 0.0, &self.opts)?
                } else {
                    solve_total_degree(sys, &target, F_HOMOTOPY_SEED, &self.opts)?
                };
                let ends = distinct_converged(&res);
                (res, ends, 0)
            }
        };
        let roots = real_roots_of(sys, &target, &res, 2, |z| sys.full_residual(z, u));
        // Continuation needs the complete finite solution set.
        let full = self.f_start.as_ref().map_or(F_SOLUTION_COUNT, Vec::len);
        self.state = (!ends.is_empty() && ends.len() == full).then(|| Continuation { params: target.to_vec(), solutions: ends, age });
        Ok(roots)
    }

    fn essential_column(&mut self, u: f64) -> Result<Vec<(f64, f64)>> {
        let target = EssentialCurveSystem::params(&self.basis, &self.x, u);
        let sys = self.e_sys.as_ref().expect("essential system");
        let continued = self.continue_from_state(sys, &target);
        let (res, ends, age) = match continued {
            Some(c) => c,
            None => {
                let res = track_parameter_path(sys, &start_table(), &generic_params(E_START_SEED), &target, 0.0, &self.opts)?;
                let ends = distinct_converged(&res);
                if ends.is_empty() {
                    self.state = None;
                    return Err(Error::AllPathsFailed);
                }
                (res, ends, 0)
            }
        };
        let roots = real_roots_of(sys, &target, &res, 4, |z| EssentialCurveSystem::full_residual(z, &target));
        self.state = Some(Continuation { params: target, solutions: ends, age });
        Ok(roots)
    }

    /// Track the previous column's solutions to `target`; `None` when a
    /// refresh is due or a path was lost.
    fn continue_from_state<Sys: crate::polysys::System>(
        &self,
        sys: &Sys,
        target: &[C64],
    ) -> Option<(Vec<PathResult>, Vec<Vec<C64>>, usize)> {
        let st = self.state.as_ref().filter(|st| st.age < REFRESH_PERIOD)?;
        let res = track_parameter_path(sys, &st.solutions, &st.params, target, COLUMN_ARC, &self.opts).ok()?;
        let ends = distinct_converged(&res);
        (ends.len() == st.solutions.len()).then_some((res, ends, st.age + 1))
    }

    /// Start a fresh solve at the next column.
    pub fn reset(&mut self) {
        self.state = None;
    }
}

/// Finite solutions at the generic complex column, unioned over homotopy
/// seeds. Some anchor sets have fewer than six finite solutions for every u;
/// the count stops growing there.
fn fundamental_start(sys: &FundamentalCurveSystem, opts: &TrackOptions) -> Result<Vec<Vec<C64>>> {
    let mut all: Vec<PathResult> = Vec::new();
    let mut best = 0;
    let mut stale = 0;
    for k in 0..F_START_SEEDS {
        all.extend(solve_total_degree(sys, &[F_GENERIC_COLUMN], F_HOMOTOPY_SEED + k, opts)?);
        let n = distinct_converged(&all).len();
        if n == F_SOLUTION_COUNT {
            break;
        }
        stale = if n > best { 0 } else { stale + 1 };
        best = best.max(n);
        if stale >= 2 {
            break;
        }
    }
    Ok(distinct_converged(&all))
}


/// Distinct finite endpoints. Singular endpoints count when their residual is
/// small: solutions far from the origin often miss the sharp final test.
fn distinct_converged(res: &[PathResult]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    let finite = |r: &&PathResult| {
        r.is_converged() || (r.status == PathStatus::SingularEndpoint && r.residual < ROOT_RESIDUAL_TOL)
    };
    for r in res.iter().filter(finite) {
        let z = &r.end_point;
        let tol = 1e-6 * (1.0 + max_norm(z));
        if out.iter().all(|o| o.iter().zip(z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) > tol) {
            out.push(z.clone());
        }
    }
    out
}

/// `(z[vi], residual)` for real endpoints passing the full residual check.
fn real_roots_of<Sys: crate::polysys::System>(
    sys: &Sys,
    params: &[C64],
    res: &[PathResult],
    vi: usize,
    full: impl Fn(&[C64]) -> f64,
) -> Vec<(f64, f64)> {
    // Singular endpoints are kept: constructed degenerate points are often
    // multiple solutions of the column system.
    let real: Vec<PathResult> = res
        .iter()
        .filter(|r| matches!(r.status, PathStatus::Converged | PathStatus::SingularEndpoint))
        .filter(|r| r.end_point.iter().all(|v| v.im.abs() <= IMAG_TOL * (1.0 + v.norm())))
        .map(|r| PathResult { status: PathStatus::Converged, ..r.clone() })
        .collect();
    filter_real(sys, params, &real, f64::INFINITY)
        .into_iter()
        .filter_map(|x| {
            let z: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
            let r = full(&z);
            (r < ROOT_RESIDUAL_TOL).then_some((x[vi], r))
        })
        .collect()
}

fn start_table() -> Vec<Vec<C64>> {
    e_start::SOLUTIONS.iter().map(|s| s.iter().map(|&(re, im)| C64::new(re, im)).collect()).collect()
}

pub fn curve_column(query: &CurveQuery, u: f64) -> Result<CurveSlice> {
    CurveSolver::new(query)?.column(u)
}

/// Columns in order, continuing solutions between neighbours; failed
/// columns are recorded and skipped.
pub fn curve_sweep_columns(query: &CurveQuery, columns: &[f64]) -> Result<Vec<core::result::Result<CurveSlice, (f64, Error)>>> {
    let mut solver = CurveSolver::new(query)?;
    Ok(columns
        .iter()
        .map(|&u| {
            solver.column(u).map_err(|e| {
                solver.reset();
                (u, e)
            })
        })
        .collect())
}

pub fn curve_sweep(query: &CurveQuery) -> Result<CurveSweep> {
    let cols = query.window.columns();
    Ok(assemble(curve_sweep_columns(query, &cols)?, query.window.jump_cap))
}

/// Polylines from per-column results: each root links to the nearest
/// unused root of the next column within `jump_cap`.
pub fn assemble(results: Vec<core::result::Result<CurveSlice, (f64, Error)>>, jump_cap: f64) -> CurveSweep {
    let mut sweep = CurveSweep::default();
    for r in results {
        match r {
            Ok(s) => sweep.slices.push(s),
            Err(f) => sweep.failed.push(f),
        }
    }
    sweep.segments = link(&sweep.slices, jump_cap);
    sweep
}

fn link(slices: &[CurveSlice], jump_cap: f64) -> Vec<Vec<Vector2<f64>>> {
    let mut segments: Vec<Vec<Vector2<f64>>> = Vec::new();
    // Segment index of each root in the previous column.
    let mut open: Vec<usize> = Vec::new();
    let mut prev: Option<&CurveSlice> = None;
    let step_tol = |a: &CurveSlice, b: &CurveSlice| {
        slices.windows(2).map(|w| w[1].u - w[0].u).fold(f64::INFINITY, f64::min) * 1.5 >= (b.u - a.u).abs()
    };
    for s in slices {
        let mut next = vec![usize::MAX; s.roots.len()];
        if let Some(p) = prev.filter(|p| step_tol(p, s)) {
            let mut cand: Vec<(f64, usize, usize)> = Vec::new();
            for (i, a) in p.roots.iter().enumerate() {
                for (j, b) in s.roots.iter().enumerate() {
                    let d = (a - b).abs();
                    if d <= jump_cap {
                        cand.push((d, i, j));
                    }
                }
            }
            cand.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut used = vec![false; p.roots.len()];
            for (_, i, j) in cand {
                if !used[i] && next[j] == usize::MAX {
                    used[i] = true;
                    next[j] = open[i];
                }
            }
        }
        for (j, &v) in s.roots.iter().enumerate() {
            if next[j] == usize::MAX {
                segments.push(Vec::new());
                next[j] = segments.len() - 1;
            }
            segments[next[j]].push(Vector2::new(s.u, v));
        }
        open = next;
        prev = Some(s);
    }
    segments
}

fn point_segment_distance(p: &Vector2<f64>, a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    let d = b - a;
    let l = d.norm_squared();
    let t = if l > 0.0 { ((p - a).dot(&d) / l).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + d * t)).norm()
}

/// Distance from `point` to the polylines of a sweep.
pub fn sweep_distance(sweep: &CurveSweep, point: &Vector2<f64>) -> f64 {
    sweep
        .segments
        .iter()
        .map(|seg| match seg.len() {
            0 => f64::INFINITY,
            1 => (seg[0] - point).norm(),
            _ => seg.windows(2).map(|w| point_segment_distance(point, &w[0], &w[1])).fold(f64::INFINITY, f64::min),
        })
        .fold(f64::INFINITY, f64::min)
}

/// Distance from `point` to the curve, from a local sweep of the columns
/// within `scan_halfwidth` of `point.x` at the query's step. Infinite when
/// no curve point is found.
pub fn distance_to_curve(query: &CurveQuery, point: &Vector2<f64>, scan_halfwidth: f64) -> f64 {
    try_distance_to_curve(query, point, scan_halfwidth).unwrap_or(f64::INFINITY)
}

/// As [`distance_to_curve`], but an error when the query is unusable or
/// every column failed.
pub fn try_distance_to_curve(query: &CurveQuery, point: &Vector2<f64>, scan_halfwidth: f64) -> Result<f64> {
    let step = query.window.step;
    if !(step > 0.0) || !(scan_halfwidth >= 0.0) {
        return Err(Error::invalid("step must be positive and the halfwidth nonnegative"));
    }
    let k = (scan_halfwidth / step + 1e-9).floor() as i64;
    let cols: Vec<f64> = (-k..=k).map(|i| point.x + i as f64 * step).collect();
    let sweep = assemble(curve_sweep_columns(query, &cols)?, query.window.jump_cap);
    if sweep.slices.is_empty() {
        return Err(sweep.failed.into_iter().next().map_or(Error::AllPathsFailed, |f| f.1));
    }
    Ok(sweep_distance(&sweep, point))
}

/// Normalized discriminant of the binary cubic `det(s A + t B)` for the
/// 2-dimensional kernel of the seven epipolar rows, `(A, B)` orthonormal.
/// Vanishes exactly where the 7-point instance has a repeated solution;
/// independent of the kernel basis.
pub fn disc_oracle_fundamental(query: &CurveQuery, u: f64, v: f64) -> Result<f64> {
    if query.anchor.len() != 6 {
        return Err(Error::WrongPointCount { expected: 6, found: query.anchor.len() });
    }
    let mut pairs = query.anchor.clone();
    pairs.push(Correspondence::new(query.x_last, Vector2::new(u, v)));
    let mut xs: Vec<Vector2<f64>> = pairs.iter().map(|p| p.x).collect();
    xs.truncate(7);
    let map1 = AxisMap::similarity(&xs);
    let map2 = AxisMap::similarity(&query.anchor.iter().map(|p| p.y).collect::<Vec<_>>());
    let work: Vec<Correspondence> = pairs.iter().map(|p| Correspondence::new(map1.to_work(&p.x), map2.to_work(&p.y))).collect();
    let basis = nullspace_basis(&epipolar_rows(&work), 2)?;
    Ok(normalized_cubic_discriminant(&binary_cubic(&basis[0], &basis[1])))
}

/// Coefficients of `det(s A + t B)` from `s^3` down to `t^3`.
pub fn binary_cubic(a: &Matrix3<f64>, b: &Matrix3<f64>) -> [f64; 4] {
    let cof = |m: &Matrix3<f64>| {
        Matrix3::from_fn(|i, j| {
            let (i1, i2, j1, j2) = ((i + 1) % 3, (i + 2) % 3, (j + 1) % 3, (j + 2) % 3);
            m[(i1, j1)] * m[(i2, j2)] - m[(i1, j2)] * m[(i2, j1)]
        })
    };
    [a.determinant(), cof(a).dot(b), cof(b).dot(a), b.determinant()]
}

/// Maximal minors of a 7 x 9 matrix, column subsets in lexicographic order,
/// scaled to unit norm (all zeros when the rank is below 7).
pub fn plucker_minors(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() != 7 || m.ncols() != 9 {
        return Err(Error::invalid("Plücker minors need a 7 x 9 matrix"));
    }
    let mut out = Vec::with_capacity(36);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..9 {
        for b in a + 1..9 {
            pairs.push((a, b));
        }
    }
    let mut subsets: Vec<Vec<usize>> = pairs.iter().map(|&(a, b)| (0..9).filter(|&c| c != a && c != b).collect()).collect();
    subsets.sort();
    for cols in subsets {
        out.push(m.select_columns(cols.iter()).determinant());
    }
    let n = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        for v in out.iter_mut() {
            *v /= n;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{forward_project, Scene};
    use crate::illposed::construct_ill_posed;
    use crate::polysys::System;
    use crate::rng::rng;
    use crate::solvers::roots::min_root_gap;
    use crate::solvers::{seven_point_cubic, solve_five_point, solve_seven_point};
    use rand::Rng as _;

    fn query_from(scene: &Scene, v_span: f64) -> (CurveQuery, Vector2<f64>) {
        let data = forward_project(scene).unwrap();
        let n = data.pairs.len();
        let last = data.pairs[n - 1];
        let window = Window::new(last.y.x - 1.0, last.y.x + 1.0, last.y.y - v_span, last.y.y + v_span, 0.05);
        let q = CurveQuery {
            problem: scene.problem(),
            anchor: data.pairs[..n - 1].to_vec(),
            x_last: last.x,
            window,
            intrinsics: None,
        };
        (q, last.y)
    }

    fn random_query(problem: Problem, seed: u64) -> CurveQuery {
        let mut r = rng(seed);
        let mut p = || Vector2::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let n = problem.minimal_points() - 1;
        let anchor = (0..n).map(|_| Correspondence::new(p(), p())).collect();
        CurveQuery { problem, anchor, x_last: p(), window: Window::new(-1.0, 1.0, -1e3, 1e3, 0.1), intrinsics: None }
    }

    #[test]
    fn start_table_solves_full_system() {
        let params = generic_params(E_START_SEED);
        let table = start_table();
        assert_eq!(table.len(), start::E_SOLUTION_COUNT);
        for (i, z) in table.iter().enumerate() {
            assert!(EssentialCurveSystem::full_residual(z, &params) < 1e-9);
            for w in &table[..i] {
                assert!(z.iter().zip(w).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) > 1e-6);
            }
        }
        let sys = essential_squared();
        assert_eq!(sys.degrees().iter().product::<u32>(), 2916);
    }

    #[test]
    fn fundamental_column_recovers_degenerate_point() {
        for seed in 0..5 {
            let scene = construct_ill_posed(Problem::Fundamental, seed).unwrap();
            let (q, y) = query_from(&scene, 50.0);
            let slice = curve_column(&q, y.x).unwrap();
            assert!(slice.roots.len() <= 6);
            assert!(slice.roots.iter().any(|v| (v - y.y).abs() < 1e-5), "seed {seed}: {:?} vs {}", slice.roots, y.y);
            for (&v, &res) in slice.roots.iter().zip(&slice.residuals) {
                assert!(res < ROOT_RESIDUAL_TOL);
                assert!(disc_oracle_fundamental(&q, y.x, v).unwrap().abs() < 1e-6);
                let mut pairs = q.anchor.clone();
                pairs.push(Correspondence::new(q.x_last, Vector2::new(y.x, v)));
                let cubic = seven_point_cubic(&pairs).unwrap().cubic;
                assert!(normalized_cubic_discriminant(&cubic).abs() < 1e-6);
            }
        }
    }

    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let fa = f(a);
        while b - a > 1e-10 {
            let m = 0.5 * (a + b);
            if (f(m) > 0.0) == (fa > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn fundamental_roots_match_discriminant_sign_changes() {
        for seed in 0..3 {
            let mut q = random_query(Problem::Fundamental, seed);
            q.window.v_min = -4.0;
            q.window.v_max = 4.0;
            for k in 0..3 {
                let u = -0.5 + 0.5 * k as f64;
                let slice = curve_column(&q, u).unwrap();
                let f = |v: f64| disc_oracle_fundamental(&q, u, v).unwrap();
                let grid: Vec<f64> = (0..=320).map(|i| -4.0 + 0.025 * i as f64).collect();
                let mut oracle = Vec::new();
                for w in grid.windows(2) {
                    if (f(w[0]) > 0.0) != (f(w[1]) > 0.0) {
                        oracle.push(bisect(f, w[0], w[1]));
                    }
                }
                for o in &oracle {
                    assert!(slice.roots.iter().any(|v| (v - o).abs() < 1e-4), "seed {seed} u {u}: {o} not in {:?}", slice.roots);
                }
                for v in &slice.roots {
                    // Roots without a sign change are tangential; they still zero the oracle.
                    assert!(oracle.iter().any(|o| (v - o).abs() < 1e-4) || f(*v).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn real_solution_count_changes_across_the_curve() {
        let mut checked = 0;
        for seed in 0..4 {
            let q = random_query(Problem::Fundamental, seed);
            let slice = curve_column(&q, 0.3).unwrap();
            for &v in &slice.roots {
                let count = |v: f64| {
                    let mut pairs = q.anchor.clone();
                    pairs.push(Correspondence::new(q.x_last, Vector2::new(0.3, v)));
                    solve_seven_point(&pairs).unwrap().real_count
                };
                let h = 1e-4 * (1.0 + v.abs());
                let (a, b) = (count(v - h), count(v + h));
                if f64::max(a as f64, b as f64) > 0.0 {
                    assert_eq!((a as i64 - b as i64).abs(), 2, "seed {seed} v {v}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn essential_column_recovers_degenerate_point() {
        for seed in 0..3 {
            let scene = construct_ill_posed(Problem::Essential, seed).unwrap();
            let (q, y) = query_from(&scene, 50.0);
            let slice = curve_column(&q, y.x).unwrap();
            assert!(slice.roots.len() <= 30);
            assert!(slice.roots.iter().any(|v| (v - y.y).abs() < 1e-4), "seed {seed}: {:?} vs {}", slice.roots, y.y);
            for (&v, &res) in slice.roots.iter().zip(&slice.residuals) {
                assert!(res < ROOT_RESIDUAL_TOL);
                let mut pairs = q.anchor.clone();
                pairs.push(Correspondence::new(q.x_last, Vector2::new(y.x, v)));
                if let Ok(out) = solve_five_point(&pairs) {
                    assert!(min_root_gap(&out.univariate).unwrap() < 1e-4, "v {v}");
                }
            }
        }
    }

    #[test]
    fn essential_continuation_matches_fresh_solves() {
        let mut q = random_query(Problem::Essential, 11);
        q.window = Window::new(-0.2, 0.2, -50.0, 50.0, 0.1);
        let sweep = curve_sweep(&q).unwrap();
        assert!(sweep.failed.is_empty());
        assert_eq!(sweep.slices.len(), 5);
        for s in &sweep.slices {
            let fresh = curve_column(&q, s.u).unwrap();
            assert_eq!(fresh.roots.len(), s.roots.len(), "u {}", s.u);
            for (a, b) in fresh.roots.iter().zip(&s.roots) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn fundamental_start_is_complete() {
        let opts = TrackOptions::default();
        let mut six = 0;
        for seed in 0..20 {
            let q = random_query(Problem::Fundamental, seed);
            let solver = CurveSolver::new(&q).unwrap();
            let sys = solver.f_sys.as_ref().unwrap();
            let starts = fundamental_start(sys, &opts).unwrap();
            assert!(starts.len() <= F_SOLUTION_COUNT);
            six += usize::from(starts.len() == F_SOLUTION_COUNT);
            // independent count at a real column, unioned over several homotopies
            let target = [C64::new(0.37, 0.0)];
            let mut all = Vec::new();
            for g in 200..206 {
                all.extend(solve_total_degree(sys, &target, g, &opts).unwrap());
            }
            let tracked = track_parameter_path(sys, &starts, &[F_GENERIC_COLUMN], &target, 0.0, &opts).unwrap();
            assert_eq!(distinct_converged(&tracked).len(), distinct_converged(&all).len(), "seed {seed}");
        }
        assert!(six >= 18, "{six}");
    }

    #[test]
    fn fundamental_continuation_matches_fresh_solves() {
        let mut q = random_query(Problem::Fundamental, 12);
        q.window = Window::new(-0.5, 0.5, -50.0, 50.0, 0.05);
        let sweep = curve_sweep(&q).unwrap();
        assert!(sweep.failed.is_empty());
        for s in &sweep.slices {
            let fresh = curve_column(&q, s.u).unwrap();
            assert_eq!(fresh.roots.len(), s.roots.len(), "u {}", s.u);
            for (a, b) in fresh.roots.iter().zip(&s.roots) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn sweep_links_neighbouring_columns() {
        let slices = vec![
            CurveSlice { u: 0.0, roots: vec![0.0, 10.0], residuals: vec![0.0; 2] },
            CurveSlice { u: 1.0, roots: vec![1.0, 20.0], residuals: vec![0.0; 2] },
            CurveSlice { u: 2.0, roots: vec![2.5], residuals: vec![0.0] },
        ];
        let sweep = assemble(slices.into_iter().map(Ok).collect(), 3.0);
        assert_eq!(sweep.segments.len(), 3);
        assert_eq!(sweep.segments[0].len(), 3);
        assert!((sweep_distance(&sweep, &Vector2::new(0.5, 0.5))).abs() < 1e-12);
        assert!((sweep_distance(&sweep, &Vector2::new(1.0, 20.0))).abs() < 1e-12);
        assert_eq!(sweep_distance(&CurveSweep::default(), &Vector2::zeros()), f64::INFINITY);
    }

    #[test]
    fn empty_window_gives_empty_sweep() {
        let mut q = random_query(Problem::Fundamental, 1);
        q.window = Window::new(1.0, 0.0, -1.0, 1.0, 0.1);
        let s = curve_sweep(&q).unwrap();
        assert!(s.slices.is_empty() && s.segments.is_empty());
        q.window.v_min = 1e9;
        q.window.v_max = 1e9 + 1.0;
        assert_eq!(distance_to_curve(&q, &Vector2::new(0.0, 1e9), 0.2), f64::INFINITY);
    }

    #[test]
    fn distance_is_zero_on_a_root() {
        let q = random_query(Problem::Fundamental, 2);
        let slice = curve_column(&q, 0.1).unwrap();
        let v = slice.roots[0];
        let d = distance_to_curve(&q, &Vector2::new(0.1, v), 0.3);
        assert!(d < 1e-9);
        let scene = construct_ill_posed(Problem::Fundamental, 9).unwrap();
        let (q, y) = query_from(&scene, 50.0);
        assert!(distance_to_curve(&q, &y, 0.1) < 1e-5);
    }

    #[test]
    fn local_sweep_is_subset_of_full_sweep() {
        let mut q = random_query(Problem::Fundamental, 3);
        q.window = Window::new(-0.5, 0.5, -20.0, 20.0, 0.1);
        let full = curve_sweep(&q).unwrap();
        let mut local = q.clone();
        local.window.v_min = -1.0;
        local.window.v_max = 1.0;
        let part = curve_sweep(&local).unwrap();
        for (a, b) in part.slices.iter().zip(&full.slices) {
            for v in &a.roots {
                assert!(b.roots.iter().any(|w| (w - v).abs() < 1e-9));
            }
        }
    }

    #[test]
    fn binary_cubic_matches_determinant() {
        let mut r = rng(6);
        let a = Matrix3::from_fn(|_, _| r.gen_range(-1.0..1.0));
        let b = Matrix3::from_fn(|_, _| r.gen_range(-1.0..1.0));
        let c = binary_cubic(&a, &b);
        for (s, t) in [(1.0, 0.3), (-0.4, 2.0), (0.7, -1.1)] {
            let direct = (a * s + b * t).determinant();
            let poly = c[0] * s * s * s + c[1] * s * s * t + c[2] * s * t * t + c[3] * t * t * t;
            assert!((direct - poly).abs() < 1e-12);
        }
        // (t - 1)^2 (t + 2) has a double root.
        assert_eq!(normalized_cubic_discriminant(&[1.0, 0.0, -3.0, 2.0]), 0.0);
    }

    fn minor(m: &DMatrix<f64>, cols: &[usize]) -> f64 {
        m.select_columns(cols.iter()).determinant()
    }

    #[test]
    fn plucker_minor_examples() {
        let mut m = DMatrix::zeros(7, 9);
        for i in 0..7 {
            m[(i, i)] = 1.0;
        }
        let p = plucker_minors(&m).unwrap();
        assert_eq!(p.len(), 36);
        assert_eq!(p.iter().filter(|v| v.abs() > 0.0).count(), 1);
        assert_eq!(p[0], 1.0);
        let mut r = rng(3);
        let m = DMatrix::from_fn(7, 9, |_, _| r.gen_range(-1.0..1.0));
        let p = plucker_minors(&m).unwrap();
        let mut scaled = m.clone();
        scaled.row_mut(2).scale_mut(2.0);
        let ps = plucker_minors(&scaled).unwrap();
        assert!(p.iter().zip(&ps).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!((p[1] - minor(&m, &[0, 1, 2, 3, 4, 5, 7]) / minor(&m, &[0, 1, 2, 3, 4, 5, 6]) * p[0]).abs() < 1e-12);
        // Grassmann-Plücker relation: sum_l (-1)^l p(I + j_l) p(J - j_l) = 0.
        let i = [0, 1, 2, 3, 4, 5];
        let j = [1, 2, 3, 4, 5, 6, 7, 8];
        let mut acc = 0.0;
        for l in 0..8 {
            let mut a: Vec<usize> = i.to_vec();
            a.push(j[l]);
            let b: Vec<usize> = j.iter().enumerate().filter(|&(k, _)| k != l).map(|(_, &c)| c).collect();
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * minor(&m, &a) * minor(&m, &b);
        }
        assert!(acc.abs() < 1e-10);
    }
}
