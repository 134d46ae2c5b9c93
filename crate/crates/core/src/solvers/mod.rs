//! Minimal solvers for the 5-point essential and 7-point fundamental problems.

mod five;
mod pose;
pub mod roots;
mod seven;

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use nalgebra::{DMatrix, Matrix3, Vector2};

pub use five::{five_point_equations, solve_five_point, FIVE_POINT_ATTEMPTS};
pub use pose::{decompose_essential, essential_candidates, sampson_distance, triangulate_depths};
pub use roots::real_roots;
pub use seven::{seven_point_cubic, solve_seven_point};

use crate::error::{Error, Result};
use crate::geometry::{Correspondence, EpipolarModel, ImageData, Problem};
use crate::linalg::{epipolar_row, kernel, mat3_from_row_major};

/// Certification bound on manifold and epipolar residuals of emitted models.
pub const CERTIFY_TOL: f64 = 1e-8;
/// Singular values below this fraction of the largest count as kernel.
pub const NULLSPACE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOutput {
    pub models: Vec<EpipolarModel>,
    /// Largest epipolar or manifold residual over the emitted models.
    pub residual_max: f64,
    pub real_count: usize,
    /// Univariate polynomial whose real roots produced the models.
    pub univariate: Vec<f64>,
    /// Set when two real roots were merged.
    pub near_degenerate: bool,
}

/// Orthonormal kernel of the stacked epipolar rows, reshaped row-major.
pub fn nullspace_basis(m: &DMatrix<f64>, expected_dim: usize) -> Result<Vec<Matrix3<f64>>> {
    if m.ncols() != 9 {
        return Err(Error::invalid("epipolar rows need 9 columns"));
    }
    Ok(kernel(m, expected_dim, NULLSPACE_REL_TOL)?
        .into_iter()
        .map(|v| mat3_from_row_major(v.as_slice()))
        .collect())
}

pub fn epipolar_rows(pairs: &[Correspondence]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(pairs.len(), 9);
    for (i, p) in pairs.iter().enumerate() {
        let r = epipolar_row(&p.x, &p.y);
        for j in 0..9 {
            m[(i, j)] = r[j];
        }
    }
    m
}

/// Largest `|y^T M x|` over the pairs after scaling each homogeneous point
/// to unit norm.
pub fn max_epipolar_residual(m: &Matrix3<f64>, pairs: &[Correspondence]) -> f64 {
    let m = m / m.norm();
    pairs
        .iter()
        .map(|p| {
            let x = p.x.push(1.0);
            let y = p.y.push(1.0);
            (y.dot(&(m * x)) / (x.norm() * y.norm())).abs()
        })
        .fold(0.0, f64::max)
}

pub fn solve_minimal(problem: Problem, data: &ImageData) -> Result<SolverOutput> {
    match problem {
        Problem::Essential => solve_five_point(&data.pairs),
        Problem::Fundamental => solve_seven_point(&data.pairs),
    }
}

fn check_count(pairs: &[Correspondence], n: usize) -> Result<()> {
    if pairs.len() != n {
        return Err(Error::WrongPointCount { expected: n, found: pairs.len() });
    }
    if pairs.iter().any(|p| !(p.x.iter().chain(p.y.iter()).all(|v| v.is_finite()))) {
        return Err(Error::invalid("non-finite image coordinate"));
    }
    Ok(())
}

/// Similarity moving the centroid to the origin with mean distance sqrt 2.
pub(crate) fn hartley(points: impl Iterator<Item = Vector2<f64>> + Clone) -> Matrix3<f64> {
    let n = points.clone().count() as f64;
    let c = points.clone().fold(Vector2::zeros(), |a, p| a + p) / n;
    let d = points.map(|p| (p - c).norm()).sum::<f64>() / n;
    let s = if d > 0.0 { core::f64::consts::SQRT_2 / d } else { 1.0 };
    Matrix3::new(s, 0.0, -s * c.x, 0.0, s, -s * c.y, 0.0, 0.0, 1.0)
}

pub(crate) fn apply(t: &Matrix3<f64>, p: &Vector2<f64>) -> Vector2<f64> {
    let h = t * p.push(1.0);
    Vector2::new(h.x / h.z, h.y / h.z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tests::{random_essential_scene, random_fundamental_scene};
    use crate::geometry::{epipolar_matrix, forward_project, Scene};

    fn in_span(basis: &[Matrix3<f64>], m: &Matrix3<f64>) -> f64 {
        let m = m / m.norm();
        let proj = basis.iter().fold(Matrix3::zeros(), |acc, b| acc + b * b.dot(&m));
        (m - proj).norm()
    }

    #[test]
    fn nullspace_contains_truth() {
        for seed in 0..20 {
            for s in [Scene::Essential(random_essential_scene(seed)), Scene::Fundamental(random_fundamental_scene(seed))] {
                let d = forward_project(&s).unwrap();
                let dim = 9 - d.len();
                let basis = nullspace_basis(&epipolar_rows(&d.pairs), dim).unwrap();
                assert_eq!(basis.len(), dim);
                assert!(in_span(&basis, epipolar_matrix(&s).unwrap().matrix()) < 1e-9);
                for (i, a) in basis.iter().enumerate() {
                    for (j, b) in basis.iter().enumerate() {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((a.dot(b) - want).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn duplicated_pair_is_rank_error() {
        let s = Scene::Fundamental(random_fundamental_scene(3));
        let mut d = forward_project(&s).unwrap();
        d.pairs[6] = d.pairs[0];
        assert!(matches!(nullspace_basis(&epipolar_rows(&d.pairs), 2), Err(Error::RankDeficient { .. })));
        assert!(matches!(solve_seven_point(&d.pairs), Err(Error::RankDeficient { .. })));
    }
}
