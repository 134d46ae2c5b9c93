//! Square-up-able polynomial systems whose real solutions trace the
//! degenerate curves, written once over [`Scalar`] so values, Jacobians and
//! scale-free residuals share the same code.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{Matrix3, Vector2};
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::C64;
use crate::polysys::{Scalar, System};

pub(crate) type M3<S> = [[S; 3]; 3];

fn combine<S: Scalar>(coef: &[S], basis: &[M3<S>], last: &M3<S>) -> M3<S> {
    let mut m = *last;
    for (c, b) in coef.iter().zip(basis) {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = m[i][j] + *c * b[i][j];
            }
        }
    }
    m
}

fn mul<S: Scalar>(a: &M3<S>, b: &M3<S>) -> M3<S> {
    let mut m = [[S::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    m
}

fn transpose<S: Scalar>(a: &M3<S>) -> M3<S> {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[j][i];
        }
    }
    m
}

/// `tr(a b^T)`.
fn inner<S: Scalar>(a: &M3<S>, b: &M3<S>) -> S {
    let mut s = S::zero();
    for i in 0..3 {
        for j in 0..3 {
            s = s + a[i][j] * b[i][j];
        }
    }
    s
}

fn det<S: Scalar>(m: &M3<S>) -> S {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Transposed cofactor matrix, so `d det(m)[w] = <cof(m), w>`.
fn cofactor<S: Scalar>(m: &M3<S>) -> M3<S> {
    let mut c = [[S::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
            let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
            c[i][j] = m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1];
        }
    }
    c
}

fn bilinear<S: Scalar>(y: &[S; 3], m: &M3<S>, x: &[S; 3]) -> S {
    let mut s = S::zero();
    for i in 0..3 {
        for j in 0..3 {
            s = s + y[i] * m[i][j] * x[j];
        }
    }
    s
}

/// `2 E E^T E - tr(E E^T) E` and its derivative along `w`.
fn trace_constraints<S: Scalar>(e: &M3<S>, w: Option<&M3<S>>) -> M3<S> {
    let et = transpose(e);
    let eet = mul(e, &et);
    let tr = eet[0][0] + eet[1][1] + eet[2][2];
    let two = S::real(2.0);
    let mut out = [[S::zero(); 3]; 3];
    match w {
        None => {
            let eete = mul(&eet, e);
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = two * eete[i][j] - tr * e[i][j];
                }
            }
        }
        Some(w) => {
            let wt = transpose(w);
            let a = mul(&mul(w, &et), e);
            let b = mul(&mul(e, &wt), e);
            let c = mul(&eet, w);
            let dtr = two * inner(w, e);
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = two * (a[i][j] + b[i][j] + c[i][j]) - dtr * e[i][j] - tr * w[i][j];
                }
            }
        }
    }
    out
}

/// Equations of a degenerate 5-point instance: `E` on the essential variety
/// and on the epipolar hyperplane of `(x, y)`, and `w` a tangent direction
/// of that intersection. 22 values.
pub(crate) fn essential_equations<S: Scalar>(e: &M3<S>, w: &M3<S>, y: &[S; 3], x: &[S; 3], out: &mut [S]) {
    out[0] = det(e);
    let t = trace_constraints(e, None);
    for k in 0..9 {
        out[1 + k] = t[k / 3][k % 3];
    }
    out[10] = bilinear(y, e, x);
    out[11] = inner(&cofactor(e), w);
    let dt = trace_constraints(e, Some(w));
    for k in 0..9 {
        out[12 + k] = dt[k / 3][k % 3];
    }
    out[21] = bilinear(y, w, x);
}

/// Same for the 7-point case: `det F = 0`, epipolar constraint, tangency.
pub(crate) fn fundamental_equations<S: Scalar>(f: &M3<S>, w: &M3<S>, y: &[S; 3], x: &[S; 3], out: &mut [S]) {
    out[0] = det(f);
    out[1] = bilinear(y, f, x);
    out[2] = inner(&cofactor(f), w);
    out[3] = bilinear(y, w, x);
}

pub(crate) fn to_m3(m: &Matrix3<f64>) -> M3<C64> {
    let mut o = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            o[i][j] = C64::new(m[(i, j)], 0.0);
        }
    }
    o
}

fn unit(m: &M3<C64>) -> M3<C64> {
    let n = m.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    m.map(|r| r.map(|v| v / n))
}

fn unit3(v: [C64; 3]) -> [C64; 3] {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.map(|c| c / n)
}

/// Degenerate-curve system for the essential problem in the unknowns
/// `(a1..a4, v, d1, d2, d3)` with `E = sum a_j E_j + E_5` and tangent
/// `W = sum d_j E_j + E_4`. Parameters: the five basis matrices (row-major),
/// the half-correspondence `x` and the column `u`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EssentialCurveSystem;

pub const E_PARAMS: usize = 48;

impl EssentialCurveSystem {
    pub fn params(basis: &[Matrix3<f64>], x: &Vector2<f64>, u: f64) -> Vec<C64> {
        let mut p: Vec<C64> = basis.iter().flat_map(|m| crate::linalg::mat3_to_row_major(m)).map(|v| C64::new(v, 0.0)).collect();
        p.extend([x.x, x.y, u].map(|v| C64::new(v, 0.0)));
        p
    }

    fn split<S: Scalar>(z: &[S], p: &[S]) -> (M3<S>, M3<S>, [S; 3], [S; 3]) {
        let b: Vec<M3<S>> = (0..5).map(|j| core::array::from_fn(|r| core::array::from_fn(|c| p[9 * j + 3 * r + c]))).collect();
        let e = combine(&z[0..4], &b[0..4], &b[4]);
        let w = combine(&z[5..8], &b[0..3], &b[3]);
        let one = S::real(1.0);
        (e, w, [p[47], z[4], one], [p[45], p[46], one])
    }

    /// Largest of the 22 equations with `E`, `W` and both homogeneous points
    /// scaled to unit norm.
    pub fn full_residual(z: &[C64], p: &[C64]) -> f64 {
        let (e, w, y, x) = Self::split(z, p);
        let mut out = [C64::new(0.0, 0.0); 22];
        essential_equations(&unit(&e), &unit(&w), &unit3(y), &unit3(x), &mut out);
        out.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl System for EssentialCurveSystem {
    fn n_vars(&self) -> usize {
        8
    }

    fn n_eqs(&self) -> usize {
        22
    }

    fn n_params(&self) -> usize {
        E_PARAMS
    }

    fn degrees(&self) -> Vec<u32> {
        let mut d = vec![3; 22];
        d[10] = 2;
        d[21] = 2;
        d
    }

    fn eval<S: Scalar>(&self, z: &[S], p: &[S], out: &mut [S]) {
        let (e, w, y, x) = Self::split(z, p);
        essential_equations(&e, &w, &y, &x, out);
    }
}

/// Indices of the two quadratic equations, kept when squaring up.
pub const E_KEEP: [usize; 2] = [10, 21];

/// Degenerate-curve system for the fundamental problem in `(a1, a2, v, d1)`
/// with `F = a1 F1 + a2 F2 + F3` and tangent `W = d1 F1 + F2`. The single
/// parameter is the column `u`. Square, degrees `[3, 2, 3, 2]`.
#[derive(Debug, Clone)]
pub struct FundamentalCurveSystem {
    basis: [M3<C64>; 3],
    x: Vector2<f64>,
}

/// Finite solutions of the fundamental curve system for a generic column.
pub const F_SOLUTION_COUNT: usize = 6;

impl FundamentalCurveSystem {
    pub fn new(basis: &[Matrix3<f64>], x: Vector2<f64>) -> Self {
        FundamentalCurveSystem { basis: [to_m3(&basis[0]), to_m3(&basis[1]), to_m3(&basis[2])], x }
    }

    fn split<S: Scalar>(&self, z: &[S], u: S) -> (M3<S>, M3<S>, [S; 3], [S; 3]) {
        let b: [M3<S>; 3] = self.basis.map(|m| m.map(|r| r.map(S::cst)));
        let f = combine(&z[0..2], &b[0..2], &b[2]);
        let w = combine(&z[3..4], &b[0..1], &b[1]);
        let one = S::real(1.0);
        (f, w, [u, z[2], one], [S::real(self.x.x), S::real(self.x.y), one])
    }

    pub fn full_residual(&self, z: &[C64], u: f64) -> f64 {
        let (f, w, y, x) = self.split(z, C64::new(u, 0.0));
        let mut out = [C64::new(0.0, 0.0); 4];
        fundamental_equations(&unit(&f), &unit(&w), &unit3(y), &unit3(x), &mut out);
        out.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl System for FundamentalCurveSystem {
    fn n_vars(&self) -> usize {
        4
    }

    fn n_eqs(&self) -> usize {
        4
    }

    fn n_params(&self) -> usize {
        1
    }

    fn degrees(&self) -> Vec<u32> {
        vec![3, 2, 3, 2]
    }

    fn eval<S: Scalar>(&self, z: &[S], p: &[S], out: &mut [S]) {
        let (f, w, y, x) = self.split(z, p[0]);
        fundamental_equations(&f, &w, &y, &x, out);
    }
}
