#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use nalgebra::Matrix3;

use super::roots::{complex_roots, real_roots};
use super::{apply, check_count, epipolar_rows, hartley, max_epipolar_residual, nullspace_basis, SolverOutput, CERTIFY_TOL};
use crate::error::{Error, Result};
use crate::geometry::{Correspondence, EpipolarModel, Problem};

/// Pencil `det(A + t B)` of the 7-point problem in Hartley-normalized
/// coordinates, rotated so that `|det B|` is largest among eight angles.
#[derive(Debug, Clone, PartialEq)]
pub struct SevenPointPencil {
    pub a: Matrix3<f64>,
    pub b: Matrix3<f64>,
    /// `[det B, tr(adj(B) A), tr(adj(A) B), det A]`.
    pub cubic: [f64; 4],
    pub t1: Matrix3<f64>,
    pub t2: Matrix3<f64>,
}

fn adj(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |r: usize, k: usize| m.column(r).cross(&m.column(k));
    // Rows of the adjugate are cross products of columns.
    Matrix3::from_rows(&[c(1, 2).transpose(), c(2, 0).transpose(), c(0, 1).transpose()])
}

pub fn seven_point_cubic(pairs: &[Correspondence]) -> Result<SevenPointPencil> {
    check_count(pairs, 7)?;
    let t1 = hartley(pairs.iter().map(|p| p.x));
    let t2 = hartley(pairs.iter().map(|p| p.y));
    let normalized: Vec<Correspondence> =
        pairs.iter().map(|p| Correspondence::new(apply(&t1, &p.x), apply(&t2, &p.y))).collect();
    let basis = nullspace_basis(&epipolar_rows(&normalized), 2)?;
    let (f1, f2) = (basis[0], basis[1]);
    let (a, b) = (0..8)
        .map(|k| {
            let th = k as f64 * core::f64::consts::PI / 8.0;
            let (s, c) = th.sin_cos();
            (c * f1 + s * f2, -s * f1 + c * f2)
        })
        .max_by(|x, y| x.1.determinant().abs().total_cmp(&y.1.determinant().abs()))
        .unwrap();
    let cubic = [b.determinant(), adj(&b).dot(&a.transpose()), adj(&a).dot(&b.transpose()), a.determinant()];
    Ok(SevenPointPencil { a, b, cubic, t1, t2 })
}

pub fn solve_seven_point(pairs: &[Correspondence]) -> Result<SolverOutput> {
    let p = seven_point_cubic(pairs)?;
    let roots = real_roots(&p.cubic)?;
    // Merged roots: fewer real roots than nearly-real eigenvalues.
    let nearly_real = complex_roots(&p.cubic)?.iter().filter(|z| z.im.abs() <= 1e-4 * (1.0 + z.norm())).count();
    let near_degenerate = roots.len() < nearly_real;
    let npairs: Vec<Correspondence> =
        pairs.iter().map(|q| Correspondence::new(apply(&p.t1, &q.x), apply(&p.t2, &q.y))).collect();
    let mut models = Vec::new();
    let mut residual_max = 0.0f64;
    for t in roots {
        let fnorm = p.a + p.b * t;
        let fnorm = fnorm / fnorm.norm();
        let res = fnorm.determinant().abs().max(max_epipolar_residual(&fnorm, &npairs));
        if res < CERTIFY_TOL {
            residual_max = residual_max.max(res);
            models.push(EpipolarModel::new(Problem::Fundamental, p.t2.transpose() * fnorm * p.t1)?);
        }
    }
    if models.is_empty() {
        return Err(Error::NoSolution);
    }
    Ok(SolverOutput { real_count: models.len(), models, residual_max, univariate: p.cubic.to_vec(), near_degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condition::nearest_model;
    use crate::geometry::tests::random_fundamental_scene;
    use crate::geometry::{epipolar_matrix, forward_project, Scene};
    use crate::solvers::roots::normalized_cubic_discriminant;

    #[test]
    fn adjugate_identity() {
        let m = Matrix3::new(1.0, 2.0, -1.0, 0.5, 3.0, 2.0, -2.0, 1.0, 4.0);
        assert!((adj(&m) * m - Matrix3::identity() * m.determinant()).amax() < 1e-12);
    }

    #[test]
    fn cubic_matches_determinant() {
        let s = Scene::Fundamental(random_fundamental_scene(5));
        let p = seven_point_cubic(&forward_project(&s).unwrap().pairs).unwrap();
        for t in [-2.0, -0.3, 0.0, 0.7, 3.0] {
            let d = (p.a + p.b * t).determinant();
            assert!((d - super::super::roots::eval(&p.cubic, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn recovers_truth_with_odd_count() {
        for seed in 0..500 {
            let s = Scene::Fundamental(random_fundamental_scene(seed));
            let out = solve_seven_point(&forward_project(&s).unwrap().pairs).unwrap();
            let truth = epipolar_matrix(&s).unwrap();
            let (_, d) = nearest_model(&out.models, &truth).unwrap();
            assert!(d < 1e-6, "seed {seed}: {d}");
            assert!(out.real_count <= 3 && out.real_count == out.models.len());
            if normalized_cubic_discriminant(&p_cubic(&out)).abs() > 1e-6 {
                assert_eq!(out.real_count % 2, 1, "seed {seed}");
            }
            assert!(out.residual_max < CERTIFY_TOL);
        }
    }

    fn p_cubic(o: &SolverOutput) -> [f64; 4] {
        [o.univariate[0], o.univariate[1], o.univariate[2], o.univariate[3]]
    }

    #[test]
    fn wrong_count_is_error() {
        let s = Scene::Fundamental(random_fundamental_scene(1));
        let d = forward_project(&s).unwrap();
        assert!(matches!(solve_seven_point(&d.pairs[..6]), Err(Error::WrongPointCount { expected: 7, found: 6 })));
    }
}
