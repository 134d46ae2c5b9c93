//! Univariate polynomials with real coefficients, highest degree first.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Leading coefficients below this fraction of the largest one are dropped.
pub const LEADING_TOL: f64 = 1e-13;
/// Distinct real roots closer than this (relative) are merged.
pub const MERGE_TOL: f64 = 1e-7;

pub fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, &v| acc * x + v)
}

pub fn eval_complex(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * z + v)
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    let n = c.len().saturating_sub(1);
    c[..n].iter().enumerate().map(|(i, &v)| v * (n - i) as f64).collect()
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, &v) in a.iter().enumerate() {
        out[n - a.len() + i] += v;
    }
    for (i, &v) in b.iter().enumerate() {
        out[n - b.len() + i] += v;
    }
    out
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|v| v * s).collect()
}

/// Polynomial with the given roots and leading coefficient 1.
pub fn from_roots(roots: &[f64]) -> Vec<f64> {
    roots.iter().fold(vec![1.0], |p, &r| mul(&p, &[1.0, -r]))
}

fn strip(c: &[f64]) -> Result<&[f64]> {
    let m = c.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if !(m > 0.0) {
        return Err(Error::ZeroPolynomial);
    }
    let start = c.iter().position(|v| v.abs() > LEADING_TOL * m).unwrap_or(c.len() - 1);
    Ok(&c[start..])
}

/// All complex roots (eigenvalues of the companion matrix), Newton-polished.
pub fn complex_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let c = strip(coeffs)?;
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[0];
    let mut comp = DMatrix::zeros(n, n);
    for j in 0..n {
        comp[(0, j)] = -c[j + 1] / lead;
    }
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    let d = derivative(c);
    let eig = comp.complex_eigenvalues();
    Ok(eig
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..3 {
                let p = eval_complex(c, z);
                let dp = eval_complex(&d, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let nz = z - p / dp;
                if !(nz.re.is_finite() && nz.im.is_finite()) || eval_complex(c, nz).norm() > p.norm() {
                    break;
                }
                z = nz;
            }
            z
        })
        .collect())
}

fn abs_scale(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, &v| acc * x.abs() + v.abs())
}

fn polish_real(c: &[f64], d: &[f64], x0: f64) -> f64 {
    let mut x = x0;
    let mut best = (eval(c, x).abs(), x);
    for _ in 0..8 {
        let dp = eval(d, x);
        if dp == 0.0 {
            break;
        }
        let nx = x - eval(c, x) / dp;
        if !nx.is_finite() {
            break;
        }
        x = nx;
        let r = eval(c, x).abs();
        if r < best.0 {
            best = (r, x);
        } else {
            break;
        }
    }
    best.1
}

/// Real roots in ascending order. Nearly real eigenvalues and tight
/// conjugate pairs (a split double root) are accepted when the polished real
/// point has a tiny residual; roots closer than [`MERGE_TOL`] are merged.
pub fn real_roots(coeffs: &[f64]) -> Result<Vec<f64>> {
    let c = strip(coeffs)?;
    let d = derivative(c);
    let mut out: Vec<f64> = Vec::new();
    for z in complex_roots(c)? {
        let tol_im = 1e-8 * (1.0 + z.norm());
        let candidate = if z.im.abs() <= tol_im {
            true
        } else if z.im.abs() <= 1e-4 * (1.0 + z.norm()) {
            let x = polish_real(c, &d, z.re);
            eval(c, x).abs() <= 1e-12 * abs_scale(c, x)
        } else {
            false
        };
        if candidate {
            out.push(polish_real(c, &d, z.re));
        }
    }
    out.sort_by(|a, b| a.total_cmp(b));
    let mut merged: Vec<f64> = Vec::new();
    for x in out {
        match merged.last() {
            Some(&l) if (x - l).abs() <= MERGE_TOL * (1.0 + x.abs()) => {}
            _ => merged.push(x),
        }
    }
    Ok(merged)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Bombieri norm of the binary form `sum c_k s^(n-k) t^k`.
pub fn bombieri_norm(c: &[f64]) -> f64 {
    let n = c.len() - 1;
    c.iter().enumerate().map(|(k, v)| v * v / binomial(n, k)).sum::<f64>().sqrt()
}

/// Discriminant of the cubic `a t^3 + b t^2 + c t + d`.
pub fn cubic_discriminant(p: &[f64; 4]) -> f64 {
    let [a, b, c, d] = *p;
    b * b * c * c - 4.0 * a * c * c * c - 4.0 * b * b * b * d - 27.0 * a * a * d * d + 18.0 * a * b * c * d
}

/// Discriminant divided by the Bombieri norm to the power `2n - 2`, which is
/// invariant under scaling and under rotations of the binary form.
pub fn normalized_cubic_discriminant(p: &[f64; 4]) -> f64 {
    cubic_discriminant(p) / bombieri_norm(p).powi(4)
}

/// Normalized discriminant of a polynomial of any degree from its roots:
/// `a^(2n-2) prod (r_i - r_j)^2 / |c|_B^(2n-2)`.
pub fn normalized_discriminant(coeffs: &[f64]) -> Result<f64> {
    let m = coeffs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if !(m > 0.0) {
        return Err(Error::ZeroPolynomial);
    }
    let c: Vec<f64> = coeffs.iter().map(|v| v / m).collect();
    let n = c.len() - 1;
    if n < 2 {
        return Ok(1.0);
    }
    let roots = complex_roots(&c)?;
    if roots.len() < n {
        // A vanishing leading coefficient is a root at infinity.
        return Ok(0.0);
    }
    let nb = bombieri_norm(&c);
    let mut acc = Complex64::new((c[0] / nb).abs().powi(2 * n as i32 - 2), 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let d = roots[i] - roots[j];
            acc *= d * d;
        }
    }
    Ok(acc.re)
}

/// Smallest `|r_i - r_j| / (1 + max(|r_i|, |r_j|))` over the complex roots;
/// zero when the leading coefficient vanishes (root at infinity).
pub fn min_root_gap(coeffs: &[f64]) -> Result<f64> {
    let n = coeffs.len().saturating_sub(1);
    let roots = complex_roots(coeffs)?;
    if roots.len() < n {
        return Ok(0.0);
    }
    let mut gap = f64::INFINITY;
    for i in 0..roots.len() {
        for j in 0..i {
            gap = gap.min((roots[i] - roots[j]).norm() / (1.0 + roots[i].norm().max(roots[j].norm())));
        }
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn root_gap() {
        assert!((min_root_gap(&from_roots(&[0.0, 1.0, 3.0])).unwrap() - 0.5).abs() < 1e-12);
        assert!(min_root_gap(&from_roots(&[2.0, 2.0, -1.0])).unwrap() < 1e-6);
        assert_eq!(min_root_gap(&[0.0, 1.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn examples() {
        assert_eq!(real_roots(&[1.0, 0.0, 0.0, -1.0]).unwrap().len(), 1);
        assert!((real_roots(&[1.0, 0.0, 0.0, -1.0]).unwrap()[0] - 1.0).abs() < 1e-14);
        let p = mul(&from_roots(&[1.0, 1.0]), &[1.0, 2.0]);
        let r = real_roots(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] + 2.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-7);
        assert_eq!(real_roots(&[0.0, 0.0]), Err(Error::ZeroPolynomial));
        assert_eq!(real_roots(&[1e-20, 1.0, -3.0]).unwrap(), alloc::vec![3.0]);
    }

    #[test]
    fn degree_ten_real_roots() {
        let mut r = rng(1);
        for _ in 0..50 {
            let mut roots: Vec<f64> = (0..10).map(|_| r.gen_range(-3.0..3.0)).collect();
            roots.sort_by(|a, b| a.total_cmp(b));
            if roots.windows(2).any(|w| w[1] - w[0] < 0.05) {
                continue;
            }
            let got = real_roots(&from_roots(&roots)).unwrap();
            assert_eq!(got.len(), 10);
            for (a, b) in got.iter().zip(&roots) {
                assert!((a - b).abs() < 1e-9, "{a} {b}");
            }
        }
    }

    #[test]
    fn discriminants() {
        let p = mul(&from_roots(&[1.0, 1.0]), &[1.0, 2.0]);
        let p3 = [p[0], p[1], p[2], p[3]];
        assert_eq!(cubic_discriminant(&p3), 0.0);
        assert_eq!(cubic_discriminant(&[1.0, 0.0, -1.0, 0.0]), 4.0);
        let q = [2.0, -1.0, 0.5, 3.0];
        let a = normalized_cubic_discriminant(&q);
        let b = normalized_discriminant(&q).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }

    proptest! {
        #[test]
        fn normalized_cubic_discriminant_is_rotation_invariant(
            q in proptest::collection::vec(-1.0f64..1.0, 4), th in 0.0f64..6.28, k in 0.1f64..10.0
        ) {
            let q = [q[0], q[1], q[2], q[3]];
            prop_assume!(bombieri_norm(&q) > 1e-3);
            // f(s, t) = a t^3 + b t^2 s + c t s^2 + d s^3 with (s, t) rotated by th.
            let (c, s) = (th.cos(), th.sin());
            let f = |ss: f64, tt: f64| q[0] * tt.powi(3) + q[1] * tt * tt * ss + q[2] * tt * ss * ss + q[3] * ss.powi(3);
            let g = |ss: f64, tt: f64| f(c * ss - s * tt, s * ss + c * tt) * k;
            // Recover coefficients of g by sampling.
            let v: Vec<f64> = [0.0, 1.0, -1.0, 2.0].iter().map(|&t| g(1.0, t)).collect();
            let a3 = g(0.0, 1.0);
            let d0 = v[0];
            let sum1 = v[1] - a3 - d0;
            let sum2 = v[2] + a3 - d0;
            let b2 = (sum1 + sum2) / 2.0;
            let c1 = (sum1 - sum2) / 2.0;
            let r = [a3, b2, c1, d0];
            let x = normalized_cubic_discriminant(&q);
            let y = normalized_cubic_discriminant(&r);
            prop_assert!((x - y).abs() < 1e-9, "{} {}", x, y);
        }

        #[test]
        fn real_roots_are_roots(c in proptest::collection::vec(-5.0f64..5.0, 2..9)) {
            prop_assume!(c[0].abs() > 0.1);
            for x in real_roots(&c).unwrap() {
                prop_assert!(eval(&c, x).abs() < 1e-8 * abs_scale(&c, x));
            }
        }
    }
}
