//! Small dense linear algebra helpers shared by the numeric modules.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, Matrix3, Vector2, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Cross-product matrix: `skew(v) * w == v.cross(&w)`.
pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Symmetric positive-definite square root via the eigendecomposition.
pub fn pd_sqrt(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = g.nrows();
    if n != g.ncols() {
        return Err(Error::invalid("pd_sqrt needs a square matrix"));
    }
    let sym = (g + g.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if !(min > 1e-14 * max.max(f64::MIN_POSITIVE)) {
        return Err(Error::NotPositiveDefinite(min));
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| x.sqrt()));
    let s = &eig.eigenvectors * d * eig.eigenvectors.transpose();
    Ok((&s + s.transpose()) * 0.5)
}

/// Singular values in descending order together with the matching right
/// singular vectors as columns of a full `n x n` matrix.
pub fn svd_right(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.ncols();
    let padded = if m.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut v = DMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (col, &i) in idx.iter().enumerate() {
        s.push(svd.singular_values[i]);
        v.set_column(col, &vt.row(i).transpose());
    }
    (s, v)
}

/// Flip `v` so that its largest-magnitude entry is positive.
pub fn canon_sign_vec(v: &mut DVector<f64>) {
    let mut best = 0usize;
    for i in 0..v.len() {
        if v[i].abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
}

/// Orthonormal basis of the numerical kernel of `m` (columns `n - dim .. n`
/// of the right singular vectors). Fails when the rank is not `n - dim`.
pub fn kernel(m: &DMatrix<f64>, dim: usize, rel_tol: f64) -> Result<Vec<DVector<f64>>> {
    let n = m.ncols();
    let (s, v) = svd_right(m);
    let smax = s[0].max(f64::MIN_POSITIVE);
    let found = s.iter().filter(|&&x| x <= rel_tol * smax).count();
    if n < dim || found != dim {
        return Err(Error::RankDeficient { expected: dim, found });
    }
    Ok((n - dim..n)
        .map(|c| {
            let mut col = v.column(c).into_owned();
            canon_sign_vec(&mut col);
            col
        })
        .collect())
}

/// Row `w` with `w . vec(F) = y^T F x` for row-major `vec`.
pub fn epipolar_row(x: &Vector2<f64>, y: &Vector2<f64>) -> [f64; 9] {
    [x.x * y.x, x.y * y.x, y.x, x.x * y.y, x.y * y.y, y.y, x.x, x.y, 1.0]
}

pub fn mat3_from_row_major(v: &[f64]) -> Matrix3<f64> {
    Matrix3::new(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8])
}

pub fn mat3_to_row_major(m: &Matrix3<f64>) -> [f64; 9] {
    [m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 0)], m[(1, 1)], m[(1, 2)], m[(2, 0)], m[(2, 1)], m[(2, 2)]]
}

/// Angle between the lines spanned by `a` and `b` in matrix space, computed
/// as `2 asin(|a - s b| / 2)` on unit representatives for stability near 0.
pub fn projective_distance(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    let a = a / a.norm();
    let b = b / b.norm();
    let s = if a.dot(&b) >= 0.0 { 1.0 } else { -1.0 };
    let chord = (a - b * s).norm();
    2.0 * (chord / 2.0).min(1.0).asin()
}

/// Solve the dense complex system `a x = b` in place (row-major `a`, size
/// `n`), partial pivoting. Returns `false` on an exactly singular pivot.
pub fn solve_complex(a: &mut [C64], b: &mut [C64], n: usize) -> bool {
    for k in 0..n {
        let mut p = k;
        let mut pmax = a[k * n + k].norm_sqr();
        for r in k + 1..n {
            let v = a[r * n + k].norm_sqr();
            if v > pmax {
                pmax = v;
                p = r;
            }
        }
        if pmax == 0.0 || !pmax.is_finite() {
            return false;
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            b.swap(k, p);
        }
        let inv = a[k * n + k].inv();
        for r in k + 1..n {
            let f = a[r * n + k] * inv;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for c in k + 1..n {
                let t = a[k * n + c];
                a[r * n + c] -= f * t;
            }
            let bk = b[k];
            b[r] -= f * bk;
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in k + 1..n {
            s -= a[k * n + c] * b[c];
        }
        b[k] = s / a[k * n + k];
    }
    true
}

/// Least-squares solve of a real overdetermined system via SVD.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    svd.solve(b, 1e-14 * smax.max(f64::MIN_POSITIVE)).ok()
}
