//! Predictor-corrector path tracking.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng as _;

use super::{eval_jet, residual, residual_scale, with_jet_width, System};
use crate::error::{Error, Result};
use crate::linalg::{lstsq, C64};
use crate::rng::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathStatus {
    Converged,
    Diverged,
    PathFailure,
    SingularEndpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub end_point: Vec<C64>,
    pub status: PathStatus,
    pub residual: f64,
    pub steps: usize,
}

impl PathResult {
    pub fn is_converged(&self) -> bool {
        self.status == PathStatus::Converged
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOptions {
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
    /// Relative Newton step size accepted by the corrector along the path.
    pub corrector_tol: f64,
    /// Relative Newton step size required at the end of the path.
    pub final_tol: f64,
    /// Residual bound for convergence, relative to the system scale.
    pub residual_tol: f64,
    pub divergence: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            initial_step: 0.1,
            max_step: 0.25,
            min_step: 1e-7,
            max_steps: 20_000,
            corrector_tol: 1e-10,
            final_tol: 1e-12,
            residual_tol: 1e-10,
            divergence: 1e8,
        }
    }
}

/// `H(z, s)` with `s` running from 0 (start) to 1 (target).
pub trait Homotopy: Sync {
    fn n(&self) -> usize;
    /// `H`, `dH/dz` and `dH/ds`.
    fn eval(&self, z: &[C64], s: f64) -> (DVector<C64>, DMatrix<C64>, DVector<C64>);
    /// Target residual norm and its tolerance scale.
    fn target_residual(&self, z: &[C64]) -> (f64, f64);
}

/// `(1 - s) gamma g(z) + s f(z)` with `g_i = z_i^d_i - 1`.
pub struct TotalDegreeHomotopy<'a, Sys> {
    sys: &'a Sys,
    params: Vec<C64>,
    degrees: Vec<u32>,
    gamma: C64,
}

impl<'a, Sys: System> TotalDegreeHomotopy<'a, Sys> {
    pub fn new(sys: &'a Sys, params: &[C64], seed: u64) -> Result<Self> {
        if sys.n_eqs() != sys.n_vars() {
            return Err(Error::invalid("total-degree homotopy needs a square system"));
        }
        if params.len() != sys.n_params() {
            return Err(Error::invalid("parameter dimension mismatch"));
        }
        let degrees = sys.degrees();
        if degrees.iter().any(|&d| d == 0) {
            return Err(Error::invalid("constant equation in square system"));
        }
        let th: f64 = rng(seed).gen_range(0.0..core::f64::consts::TAU);
        Ok(TotalDegreeHomotopy { sys, params: params.to_vec(), degrees, gamma: C64::from_polar(1.0, th) })
    }

    pub fn path_count(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).product()
    }

    /// Start point of path `k`: roots of unity indexed in mixed radix.
    pub fn start(&self, mut k: usize) -> Vec<C64> {
        self.degrees
            .iter()
            .map(|&d| {
                let j = k % d as usize;
                k /= d as usize;
                C64::from_polar(1.0, core::f64::consts::TAU * j as f64 / d as f64)
            })
            .collect()
    }
}

impl<Sys: System> Homotopy for TotalDegreeHomotopy<'_, Sys> {
    fn n(&self) -> usize {
        self.sys.n_vars()
    }

    fn eval(&self, z: &[C64], s: f64) -> (DVector<C64>, DMatrix<C64>, DVector<C64>) {
        let (f, jf, _) = with_jet_width!(self.sys.n_vars(), N, eval_jet::<Sys, N>(self.sys, z, &self.params, None));
        let n = z.len();
        let g = DVector::from_fn(n, |i, _| z[i].powu(self.degrees[i]) - 1.0);
        let dg = DVector::from_fn(n, |i, _| z[i].powu(self.degrees[i] - 1) * self.degrees[i] as f64);
        let a = self.gamma * (1.0 - s);
        let h = &g * a + &f * C64::new(s, 0.0);
        let mut hz = jf * C64::new(s, 0.0);
        for i in 0..n {
            hz[(i, i)] += a * dg[i];
        }
        let hs = f - g * self.gamma;
        (h, hz, hs)
    }

    fn target_residual(&self, z: &[C64]) -> (f64, f64) {
        (residual(self.sys, z, &self.params), residual_scale(self.sys, z))
    }
}

/// `f(z, p(s))` with `p(s) = p0 + (p1 - p0) phi(s)`, where
/// `phi(s) = s + i arc s (1 - s)` bends the segment into the complex plane.
pub struct ParameterHomotopy<'a, Sys> {
    sys: &'a Sys,
    p0: Vec<C64>,
    dp: Vec<C64>,
    arc: f64,
}

impl<'a, Sys: System> ParameterHomotopy<'a, Sys> {
    pub fn new(sys: &'a Sys, p0: &[C64], p1: &[C64], arc: f64) -> Result<Self> {
        if p0.len() != sys.n_params() || p1.len() != sys.n_params() || sys.n_eqs() != sys.n_vars() {
            return Err(Error::invalid("parameter homotopy needs a square system and matching parameters"));
        }
        Ok(ParameterHomotopy { sys, p0: p0.to_vec(), dp: p1.iter().zip(p0).map(|(a, b)| a - b).collect(), arc })
    }

    fn params(&self, s: f64) -> Vec<C64> {
        let phi = C64::new(s, self.arc * s * (1.0 - s));
        self.p0.iter().zip(&self.dp).map(|(a, d)| a + d * phi).collect()
    }
}

impl<Sys: System> Homotopy for ParameterHomotopy<'_, Sys> {
    fn n(&self) -> usize {
        self.sys.n_vars()
    }

    fn eval(&self, z: &[C64], s: f64) -> (DVector<C64>, DMatrix<C64>, DVector<C64>) {
        let dphi = C64::new(1.0, self.arc * (1.0 - 2.0 * s));
        let dp: Vec<C64> = self.dp.iter().map(|d| d * dphi).collect();
        let p = self.params(s);
        with_jet_width!(self.sys.n_vars(), N, eval_jet::<Sys, N>(self.sys, z, &p, Some(&dp)))
    }

    fn target_residual(&self, z: &[C64]) -> (f64, f64) {
        (residual(self.sys, z, &self.params(1.0)), residual_scale(self.sys, z))
    }
}

fn max_abs(z: &DVector<C64>) -> f64 {
    z.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn velocity<H: Homotopy>(hom: &H, z: &DVector<C64>, s: f64) -> Option<DVector<C64>> {
    let (_, hz, hs) = hom.eval(z.as_slice(), s);
    hz.lu().solve(&(-hs))
}

fn rk4<H: Homotopy>(hom: &H, z: &DVector<C64>, s: f64, h: f64) -> Option<DVector<C64>> {
    let c = |x: f64| C64::new(x, 0.0);
    let k1 = velocity(hom, z, s)?;
    let k2 = velocity(hom, &(z + &k1 * c(h / 2.0)), s + h / 2.0)?;
    let k3 = velocity(hom, &(z + &k2 * c(h / 2.0)), s + h / 2.0)?;
    let k4 = velocity(hom, &(z + &k3 * c(h)), s + h)?;
    Some(z + (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * c(h / 6.0))
}

/// Newton at fixed `s`; fails unless it contracts to `tol` within `iters`.
fn correct<H: Homotopy>(hom: &H, mut z: DVector<C64>, s: f64, tol: f64, iters: usize) -> (DVector<C64>, bool) {
    let mut prev = f64::INFINITY;
    for _ in 0..iters {
        let (h, hz, _) = hom.eval(z.as_slice(), s);
        let Some(dz) = hz.lu().solve(&(-h)) else { return (z, false) };
        let n = max_abs(&dz);
        if !n.is_finite() || n > 0.5 * prev {
            return (z, false);
        }
        z += dz;
        prev = n;
        if n <= tol * (1.0 + max_abs(&z)) {
            return (z, true);
        }
    }
    (z, false)
}

pub fn track_path<H: Homotopy>(hom: &H, start: &[C64], opts: &TrackOptions) -> PathResult {
    let mut z = DVector::from_column_slice(start);
    let (mut s, mut ds, mut streak, mut steps) = (0.0f64, opts.initial_step, 0usize, 0usize);
    let done = |z: &DVector<C64>, status, residual, steps| PathResult {
        end_point: z.iter().copied().collect(),
        status,
        residual,
        steps,
    };
    while s < 1.0 {
        if steps >= opts.max_steps {
            return done(&z, PathStatus::PathFailure, f64::INFINITY, steps);
        }
        steps += 1;
        let h = ds.min(1.0 - s);
        let next = rk4(hom, &z, s, h).map(|zp| correct(hom, zp, s + h, opts.corrector_tol, 3));
        match next {
            Some((zc, true)) => {
                s = if h >= 1.0 - s { 1.0 } else { s + h };
                z = zc;
                streak += 1;
                if streak >= 5 {
                    ds = (2.0 * ds).min(opts.max_step);
                    streak = 0;
                }
            }
            _ => {
                ds *= 0.5;
                streak = 0;
                if ds < opts.min_step {
                    return done(&z, PathStatus::PathFailure, f64::INFINITY, steps);
                }
            }
        }
        if !(max_abs(&z) < opts.divergence) {
            return done(&z, PathStatus::Diverged, f64::INFINITY, steps);
        }
    }
    let (zf, sharp) = correct(hom, z.clone(), 1.0, opts.final_tol, 8);
    let z = if zf.iter().all(|v| v.re.is_finite() && v.im.is_finite()) { zf } else { z };
    let (res, scale) = hom.target_residual(z.as_slice());
    let status = if !(max_abs(&z) < opts.divergence) {
        PathStatus::Diverged
    } else if !sharp {
        PathStatus::SingularEndpoint
    } else if res < opts.residual_tol * scale {
        PathStatus::Converged
    } else {
        PathStatus::PathFailure
    };
    done(&z, status, res, steps)
}

/// Track all `prod deg_i` paths of the total-degree homotopy, in start order.
pub fn solve_total_degree<Sys: System>(
    sys: &Sys,
    params: &[C64],
    seed: u64,
    opts: &TrackOptions,
) -> Result<Vec<PathResult>> {
    let hom = TotalDegreeHomotopy::new(sys, params, seed)?;
    Ok((0..hom.path_count()).map(|k| track_path(&hom, &hom.start(k), opts)).collect())
}

/// Continue solutions valid at `p0` to `p1`. Starts whose residual at `p0`
/// exceeds `1e-9` (relative) are reported as failures without tracking.
pub fn track_parameter_path<Sys: System>(
    sys: &Sys,
    starts: &[Vec<C64>],
    p0: &[C64],
    p1: &[C64],
    arc: f64,
    opts: &TrackOptions,
) -> Result<Vec<PathResult>> {
    let hom = ParameterHomotopy::new(sys, p0, p1, arc)?;
    let same = p0 == p1;
    Ok(starts
        .iter()
        .map(|z| {
            let (res, scale) = (residual(sys, z, p0), residual_scale(sys, z));
            if z.len() != sys.n_vars() || !(res < 1e-9 * scale) {
                return PathResult { end_point: z.clone(), status: PathStatus::PathFailure, residual: res, steps: 0 };
            }
            if same {
                return PathResult { end_point: z.clone(), status: PathStatus::Converged, residual: res, steps: 0 };
            }
            track_path(&hom, z, opts)
        })
        .collect())
}

/// Converged endpoints with all imaginary parts below `imag_tol`, polished
/// by Gauss-Newton on the real restriction and deduplicated.
pub fn filter_real<Sys: System>(sys: &Sys, params: &[C64], results: &[PathResult], imag_tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for r in results.iter().filter(|r| r.is_converged()) {
        if r.end_point.iter().any(|v| v.im.abs() >= imag_tol) {
            continue;
        }
        let x = polish_real(sys, params, r.end_point.iter().map(|v| v.re).collect());
        if out.iter().all(|o| o.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) > 1e-8) {
            out.push(x);
        }
    }
    out
}

pub(crate) fn polish_real<Sys: System>(sys: &Sys, params: &[C64], mut x: Vec<f64>) -> Vec<f64> {
    let n = x.len();
    for _ in 0..6 {
        let z: Vec<C64> = x.iter().map(|&v| C64::new(v, 0.0)).collect();
        let (f, j, _) = with_jet_width!(n, N, eval_jet::<Sys, N>(sys, &z, params, None));
        let m = f.len();
        let a = DMatrix::from_fn(2 * m, n, |i, k| if i < m { j[(i, k)].re } else { j[(i - m, k)].im });
        let b = DVector::from_fn(2 * m, |i, _| if i < m { -f[i].re } else { -f[i - m].im });
        let Some(dx) = lstsq(&a, &b) else { break };
        let before = f.norm();
        let cand: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, b)| a + b).collect();
        let zc: Vec<C64> = cand.iter().map(|&v| C64::new(v, 0.0)).collect();
        if !(residual(sys, &zc, params) <= before) {
            break;
        }
        x = cand;
        if dx.amax() <= 1e-15 * (1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()))) {
            break;
        }
    }
    x
}
