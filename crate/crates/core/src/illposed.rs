//! Degeneracy of minimal scenes: the reduced linear systems whose
//! determinant vanishes exactly when the forward Jacobian is singular, and
//! generators of degenerate scenes from quadrics through the baseline.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, Matrix3, Matrix4, SVector, Vector3, Vector4};
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use crate::condition::jacobian_forward;
use crate::error::{Error, Result};
use crate::geometry::{EssentialScene, FundamentalScene, Problem, Quadric, Rotation, Scene, UnitTranslation};
use crate::linalg::svd_right;
use crate::rng::{rng, Rng};

/// Relative determinant (and relative singular value) below which a scene
/// counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// `sigma_min / sigma_max` of the forward Jacobian below which a scene is ill-posed.
pub const MARGIN_TOL: f64 = 1e-8;
const SAMPLE_ATTEMPTS: usize = 20_000;
const SAMPLE_BOX: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyCertificate {
    pub matrix: DMatrix<f64>,
    pub det: f64,
    /// `det` divided by the product of the row norms.
    pub normalized_det: f64,
    pub kernel_vector: Option<DVector<f64>>,
    /// World points in the frame the rows were built in.
    pub transformed_points: Vec<Vector3<f64>>,
}

/// Orthogonal map sending `t -> e3`, `perp1 -> e1`, `perp2 -> e2`.
pub fn baseline_frame(t: &UnitTranslation) -> Matrix3<f64> {
    let (p1, p2) = t.perp();
    Matrix3::from_rows(&[p1.transpose(), p2.transpose(), t.vector().transpose()])
}

fn essential_row(p: &Vector3<f64>) -> [f64; 5] {
    [p.x * p.x + p.y * p.y, -p.y * p.z, -p.x * p.z, p.y, -p.x]
}

fn fundamental_row(b: &SVector<f64, 7>, x: &Vector3<f64>) -> [f64; 7] {
    let n1 = -(b[3] * x.x + b[4] * x.y + b[5] * x.z);
    let n2 = x.x + b[0] * x.y + b[1] * x.z;
    [n1 * x.y, n1 * x.z, n1, n2 * x.x, n2 * x.y, n2 * x.z, n2]
}

pub fn degeneracy_matrix(scene: &Scene) -> DegeneracyCertificate {
    let (matrix, transformed_points) = match scene {
        Scene::Essential(s) => {
            let frame = baseline_frame(&s.translation) * s.rotation.matrix();
            let pts: Vec<Vector3<f64>> = s.points.iter().map(|x| frame * x).collect();
            let rows: Vec<[f64; 5]> = pts.iter().map(essential_row).collect();
            (DMatrix::from_fn(rows.len(), 5, |i, j| rows[i][j]), pts)
        }
        Scene::Fundamental(s) => {
            let rows: Vec<[f64; 7]> = s.points.iter().map(|x| fundamental_row(&s.b, x)).collect();
            (DMatrix::from_fn(rows.len(), 7, |i, j| rows[i][j]), s.points.clone())
        }
    };
    let det = if matrix.is_square() { matrix.determinant() } else { 0.0 };
    let row_scale: f64 = matrix.row_iter().map(|r| r.norm()).product();
    let normalized_det = if row_scale > 0.0 { det / row_scale } else { 0.0 };
    let kernel_vector = (normalized_det.abs() < DEGENERACY_TOL).then(|| {
        let (_, v) = svd_right(&matrix);
        v.column(v.ncols() - 1).into_owned()
    });
    DegeneracyCertificate { matrix, det, normalized_det, kernel_vector, transformed_points }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    WellPosed { margin: f64 },
    IllPosed { margin: f64 },
}

impl Verdict {
    pub fn is_ill_posed(&self) -> bool {
        matches!(self, Verdict::IllPosed { .. })
    }

    pub fn margin(&self) -> f64 {
        match *self {
            Verdict::WellPosed { margin } | Verdict::IllPosed { margin } => margin,
        }
    }
}

/// Smallest over largest singular value of the square forward Jacobian.
pub fn jacobian_margin(scene: &Scene) -> Result<f64> {
    let j = jacobian_forward(scene)?;
    let s = j.product.singular_values();
    Ok(s.min() / s.max())
}

pub fn is_ill_posed(scene: &Scene, tol: f64) -> Result<Verdict> {
    let margin = jacobian_margin(scene)?;
    Ok(if margin < tol { Verdict::IllPosed { margin } } else { Verdict::WellPosed { margin } })
}

/// Quadric `q1 (z1^2 + z2^2) + q2 z2 z3 + q3 z1 z3 + q4 z2 + q5 z1`: contains
/// the `z3` axis and meets every plane `z3 = c` in a circle.
pub fn rectangular_quadric(q: &[f64; 5]) -> Result<Quadric> {
    let [q1, q2, q3, q4, q5] = *q;
    Quadric::new(Matrix4::new(
        q1, 0.0, q3 / 2.0, q5 / 2.0, //
        0.0, q1, q2 / 2.0, q4 / 2.0, //
        q3 / 2.0, q2 / 2.0, 0.0, 0.0, //
        q5 / 2.0, q4 / 2.0, 0.0, 0.0,
    ))
}

/// Coefficients of the quadric through the rows of [`degeneracy_matrix`]
/// for an essential scene, given a kernel vector of that matrix.
pub fn essential_kernel_to_quadric(k: &[f64]) -> [f64; 5] {
    [k[0], -k[1], -k[2], k[3], -k[4]]
}

fn sym_outer(u: &Vector4<f64>, w: &Vector4<f64>) -> Matrix4<f64> {
    (u * w.transpose() + w * u.transpose()) * 0.5
}

/// Quadric `sum k_j phi_j` for the row functions of the uncalibrated
/// degeneracy matrix; it contains the baseline for every `k`.
pub fn fundamental_kernel_to_quadric(b: &SVector<f64, 7>, k: &[f64]) -> Result<Quadric> {
    let n1 = Vector4::new(-b[3], -b[4], -b[5], 0.0);
    let n2 = Vector4::new(1.0, b[0], b[1], 0.0);
    let l1 = Vector4::new(0.0, k[0], k[1], k[2]);
    let l2 = Vector4::new(k[3], k[4], k[5], k[6]);
    Quadric::new(sym_outer(&n1, &l1) + sym_outer(&n2, &l2))
}

/// Direction of the line through both camera centres of the normal form.
pub fn fundamental_baseline(b: &SVector<f64, 7>) -> Result<Vector3<f64>> {
    let c = Vector3::new(1.0, b[0], b[1]).cross(&Vector3::new(b[3], b[4], b[5]));
    let n = c.norm();
    if !(n > 0.0) {
        return Err(Error::DegeneratePair("second camera centre is undefined"));
    }
    Ok(c / n)
}

/// Whether the line through the origin along `dir` lies on the quadric.
pub fn quadric_contains_baseline(q: &Quadric, dir: &Vector3<f64>) -> bool {
    let m = q.matrix();
    let d = dir.push(0.0);
    let o = Vector4::new(0.0, 0.0, 0.0, 1.0);
    let tol = 1e-10 * m.norm().max(1.0);
    // (l d + o)^T Q (l d + o) = l^2 d'Qd + 2 l d'Qo + o'Qo
    [d.dot(&(m * d)), d.dot(&(m * o)), o.dot(&(m * o))].iter().all(|c| c.abs() < tol)
}

fn real_quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-12 * scale {
        return if b.abs() > 1e-12 * scale { alloc::vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    // Numerically stable pair.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return alloc::vec![0.0];
    }
    alloc::vec![q / a, c / q]
}

/// Random points on the quadric: two coordinates uniform in a box, the
/// third solved from the resulting quadratic. Points must pass `accept`.
pub fn sample_on_quadric_with(
    q: &Quadric,
    count: usize,
    r: &mut Rng,
    accept: impl Fn(&Vector3<f64>) -> bool,
) -> Result<Vec<Vector3<f64>>> {
    let mut out: Vec<Vector3<f64>> = Vec::with_capacity(count);
    let tol = 1e-10 * q.matrix().norm().max(1.0);
    for _ in 0..SAMPLE_ATTEMPTS {
        if out.len() == count {
            break;
        }
        let j = r.gen_range(0..3);
        let mut p = Vector3::from_fn(|_, _| r.gen_range(-SAMPLE_BOX..SAMPLE_BOX));
        let f = |t: f64| {
            let mut x = p;
            x[j] = t;
            q.value(&x)
        };
        let (f0, f1, fm) = (f(0.0), f(1.0), f(-1.0));
        let roots = real_quadratic_roots((f1 + fm) / 2.0 - f0, (f1 - fm) / 2.0, f0);
        if roots.is_empty() {
            continue;
        }
        p[j] = roots[r.gen_range(0..roots.len())];
        if q.value(&p).abs() < tol
            && p.amax() <= 2.0 * SAMPLE_BOX
            && p.z.abs() > 0.1
            && accept(&p)
            && out.iter().all(|o| (o - p).norm() > 1e-6)
        {
            out.push(p);
        }
    }
    if out.len() < count {
        return Err(Error::SamplingFailed(SAMPLE_ATTEMPTS));
    }
    Ok(out)
}

pub fn sample_on_quadric(q: &Quadric, count: usize, seed: u64) -> Result<Vec<Vector3<f64>>> {
    sample_on_quadric_with(q, count, &mut rng(seed), |_| true)
}

const CONSTRUCT_ATTEMPTS: usize = 50;

/// A minimal scene on the degenerate locus, with points in front of both
/// cameras and at least `asin 0.2` away from the baseline as seen from the
/// first camera.
pub fn construct_ill_posed(problem: Problem, seed: u64) -> Result<Scene> {
    let mut r = rng(seed);
    for _ in 0..CONSTRUCT_ATTEMPTS {
        let scene = match problem {
            Problem::Essential => construct_essential(&mut r),
            Problem::Fundamental => construct_fundamental(&mut r),
        };
        let Ok(scene) = scene else { continue };
        let cert = degeneracy_matrix(&scene);
        let margin = jacobian_margin(&scene)?;
        if cert.normalized_det.abs() < DEGENERACY_TOL && margin < MARGIN_TOL {
            return Ok(scene);
        }
    }
    Err(Error::SamplingFailed(CONSTRUCT_ATTEMPTS))
}

fn construct_essential(r: &mut Rng) -> Result<Scene> {
    let rot = Rotation::random(r);
    let t = UnitTranslation::random(r);
    let q: [f64; 5] = core::array::from_fn(|_| StandardNormal.sample(r));
    let quad = rectangular_quadric(&q)?;
    // Sampling happens in the baseline frame; pull points back to the world.
    let back = (baseline_frame(&t) * rot.matrix()).transpose();
    let (rm, tv) = (*rot.matrix(), *t.vector());
    let pts = sample_on_quadric_with(&quad, 5, r, |p| {
        let x = back * p;
        p.x * p.x + p.y * p.y > 0.04 * p.norm_squared() && x.z > 0.1 && (rm * x + tv).z > 0.1
    })?;
    let pts = pts.iter().map(|p| back * p).collect();
    Ok(Scene::Essential(EssentialScene::new(rot, t, pts)?))
}

fn construct_fundamental(r: &mut Rng) -> Result<Scene> {
    let b = SVector::<f64, 7>::from_fn(|_, _| r.gen_range(-1.0..1.0));
    let dir = fundamental_baseline(&b)?;
    let k: [f64; 7] = core::array::from_fn(|_| StandardNormal.sample(r));
    let quad = fundamental_kernel_to_quadric(&b, &k)?;
    let pts = sample_on_quadric_with(&quad, 7, r, |p| p.z > 0.1 && p.normalize().cross(&dir).norm() > 0.2)?;
    Ok(Scene::Fundamental(FundamentalScene::new(b, pts)?))
}
