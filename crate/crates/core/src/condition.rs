//! Forward-map Jacobians and condition numbers of the minimal problems.
//!
//! Columns of the forward Jacobian are ordered `dX_1..dX_N` then the pose
//! directions (`(1/sqrt 2) R[e_j]x`, `t_1^perp`, `t_2^perp` for E and
//! `db_1..db_7` for F). Rows follow the image vector `[x_1..x_N, y_1..y_N]`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, Matrix2x3, Vector3};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{
    epipolar_matrix, forward_project, grammian, m_of_b, EpipolarModel, ImageData, Problem, Rotation, Scene,
    UnitTranslation, M_B_INDEX,
};
use crate::linalg::{pd_sqrt, projective_distance, skew};
use crate::rng::rng;
use crate::solvers::solve_minimal;

/// Relative threshold on `sigma_min / sigma_max` below which the forward
/// differential is treated as singular.
pub const SINGULAR_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ForwardJacobian {
    pub problem: Problem,
    /// `6N x (3N + d)`: derivative of the camera-frame points.
    pub stage1: DMatrix<f64>,
    /// `4N x 6N`: block-diagonal derivative of the projections.
    pub stage2: DMatrix<f64>,
    pub product: DMatrix<f64>,
    /// Index of the first pose column.
    pub pose_offset: usize,
}

#[derive(Debug, Clone)]
pub struct ConditionReport {
    /// Largest singular value of the amplification matrix, `+inf` when the
    /// forward differential is numerically singular.
    pub cond: f64,
    pub sigma_min_forward: f64,
    pub sigma_max_forward: f64,
    pub amplification: Option<DMatrix<f64>>,
}

impl ConditionReport {
    pub fn is_finite(&self) -> bool {
        self.cond.is_finite()
    }
}

/// Jacobian of `beta` at `z`.
pub fn dbeta(z: &Vector3<f64>) -> Matrix2x3<f64> {
    let w = 1.0 / z.z;
    Matrix2x3::new(w, 0.0, -z.x * w * w, 0.0, w, -z.y * w * w)
}

pub fn jacobian_forward(scene: &Scene) -> Result<ForwardJacobian> {
    scene.check_minimal()?;
    let n = scene.points().len();
    let d = scene.problem().pose_dim();
    let cols = 3 * n + d;
    let mut s1 = DMatrix::zeros(6 * n, cols);
    for r in 0..3 * n {
        s1[(r, r)] = 1.0;
    }
    match scene {
        Scene::Essential(s) => {
            let r = s.rotation.matrix();
            let (p1, p2) = s.translation.perp();
            let c = core::f64::consts::FRAC_1_SQRT_2;
            for (i, x) in s.points.iter().enumerate() {
                let row = 3 * n + 3 * i;
                s1.fixed_view_mut::<3, 3>(row, 3 * i).copy_from(r);
                for j in 0..3 {
                    let col = r * (skew(&Vector3::ith(j, 1.0)) * x) * c;
                    s1.fixed_view_mut::<3, 1>(row, 3 * n + j).copy_from(&col);
                }
                s1.fixed_view_mut::<3, 1>(row, 3 * n + 3).copy_from(&p1);
                s1.fixed_view_mut::<3, 1>(row, 3 * n + 4).copy_from(&p2);
            }
        }
        Scene::Fundamental(s) => {
            let m = m_of_b(&s.b);
            for (i, x) in s.points.iter().enumerate() {
                let row = 3 * n + 3 * i;
                s1.fixed_view_mut::<3, 3>(row, 3 * i).copy_from(&m.fixed_view::<3, 3>(0, 0));
                let xh = x.push(1.0);
                for (j, &(mr, mc)) in M_B_INDEX.iter().enumerate() {
                    s1[(row + mr, 3 * n + j)] = xh[mc];
                }
            }
        }
    }
    let mut s2 = DMatrix::zeros(4 * n, 6 * n);
    for i in 0..n {
        let p = scene.points()[i];
        let q = scene.second(i);
        if p.z == 0.0 || q.z == 0.0 {
            return Err(Error::ProjectionUndefined { index: i });
        }
        s2.fixed_view_mut::<2, 3>(2 * i, 3 * i).copy_from(&dbeta(&p));
        s2.fixed_view_mut::<2, 3>(2 * n + 2 * i, 3 * n + 3 * i).copy_from(&dbeta(&q));
    }
    let product = &s2 * &s1;
    Ok(ForwardJacobian { problem: scene.problem(), stage1: s1, stage2: s2, product, pose_offset: 3 * n })
}

/// Move `scene` by `eps` along tangent direction `dir` (coordinates in the
/// Jacobian column basis). Rotations use the exponential map, translations
/// are renormalized.
pub fn retract(scene: &Scene, dir: &[f64], eps: f64) -> Result<Scene> {
    let n = scene.points().len();
    let mut out = scene.clone();
    for (i, p) in out.points_mut().iter_mut().enumerate() {
        *p += Vector3::new(dir[3 * i], dir[3 * i + 1], dir[3 * i + 2]) * eps;
    }
    let pose = &dir[3 * n..];
    match &mut out {
        Scene::Essential(s) => {
            let w = Vector3::new(pose[0], pose[1], pose[2]) * (eps * core::f64::consts::FRAC_1_SQRT_2);
            let dr = Rotation::from_axis_angle(&w, w.norm());
            s.rotation = s.rotation.compose(&dr);
            let (p1, p2) = s.translation.perp();
            let t = s.translation.vector() + (p1 * pose[3] + p2 * pose[4]) * eps;
            s.translation = UnitTranslation::new(t)?;
        }
        Scene::Fundamental(s) => {
            for j in 0..7 {
                s.b[j] += pose[j] * eps;
            }
        }
    }
    Ok(out)
}

pub fn condition_number(scene: &Scene) -> Result<ConditionReport> {
    let jac = jacobian_forward(scene)?;
    let p = &jac.product;
    let sv = p.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    if !(smin >= SINGULAR_REL_TOL * smax) {
        return Ok(ConditionReport {
            cond: f64::INFINITY,
            sigma_min_forward: smin,
            sigma_max_forward: smax,
            amplification: None,
        });
    }
    let k = scene.problem().pose_dim();
    let dim = p.nrows();
    let lu = p.transpose().lu();
    let mut rows = DMatrix::zeros(k, dim);
    for r in 0..k {
        let e = DVector::from_fn(dim, |i, _| if i == dim - k + r { 1.0 } else { 0.0 });
        let z = lu.solve(&e).ok_or(Error::RankDeficient { expected: 0, found: 1 })?;
        rows.set_row(r, &z.transpose());
    }
    let gs = pd_sqrt(&grammian(scene)?)?;
    let amp = gs * rows;
    let cond = amp.clone().svd(false, false).singular_values.max();
    Ok(ConditionReport { cond, sigma_min_forward: smin, sigma_max_forward: smax, amplification: Some(amp) })
}

/// Solution of the minimal problem closest to `target`.
pub fn nearest_model<'a>(models: &'a [EpipolarModel], target: &EpipolarModel) -> Option<(&'a EpipolarModel, f64)> {
    models
        .iter()
        .map(|m| (m, projective_distance(m.matrix(), target.matrix())))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Largest observed ratio of output to input displacement over random
/// image perturbations of size `delta`.
pub fn empirical_condition(scene: &Scene, delta: f64, trials: usize, seed: u64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1e-5) {
        return Err(Error::invalid("delta must lie in (0, 1e-5]"));
    }
    let problem = scene.problem();
    let data = forward_project(scene)?;
    let truth = epipolar_matrix(scene)?;
    let clean = solve_minimal(problem, &data)?;
    let (base, _) = nearest_model(&clean.models, &truth).ok_or(Error::NoSolution)?;
    let base = *base;
    let x = data.to_vector();
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let mut dir: Vec<f64> = (0..x.len()).map(|_| StandardNormal.sample(&mut r)).collect();
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        dir.iter_mut().for_each(|v| *v *= delta / norm);
        let xt: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + b).collect();
        let out = solve_minimal(problem, &ImageData::from_vector(&xt))?;
        let (_, d) = nearest_model(&out.models, &base).ok_or(Error::NoSolution)?;
        worst = worst.max(d / delta);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tests::{random_essential_scene, random_fundamental_scene};
    use crate::geometry::{forward_project, EssentialScene};

    fn scenes() -> Vec<Scene> {
        (0..10)
            .flat_map(|s| {
                [Scene::Essential(random_essential_scene(s)), Scene::Fundamental(random_fundamental_scene(s))]
            })
            .collect()
    }

    #[test]
    fn product_is_stage2_times_stage1() {
        for s in scenes() {
            let j = jacobian_forward(&s).unwrap();
            assert_eq!(j.product, &j.stage2 * &j.stage1);
            let n = s.points().len();
            assert_eq!(j.stage1.shape(), (6 * n, 3 * n + s.problem().pose_dim()));
            assert_eq!(j.product.nrows(), j.product.ncols());
        }
    }

    #[test]
    fn dbeta_kernel_is_evaluation_point() {
        let z = Vector3::new(0.3, -1.2, 4.0);
        assert!((dbeta(&z) * z).norm() < 1e-15);
    }

    #[test]
    fn jacobian_matches_central_differences() {
        for (k, s) in scenes().into_iter().enumerate() {
            let j = jacobian_forward(&s).unwrap();
            let eps = 1e-6;
            for c in 0..j.product.ncols() {
                let mut dir = alloc::vec![0.0; j.product.ncols()];
                dir[c] = 1.0;
                let fp = forward_project(&retract(&s, &dir, eps).unwrap()).unwrap().to_vector();
                let fm = forward_project(&retract(&s, &dir, -eps).unwrap()).unwrap().to_vector();
                let fd = DVector::from_iterator(fp.len(), fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * eps)));
                let an = j.product.column(c);
                assert!((&fd - an).norm() <= 1e-6 * (1.0 + an.norm()), "scene {k} col {c}");
            }
        }
    }

    #[test]
    fn amplification_matches_inverse_rows() {
        for s in scenes() {
            let rep = condition_number(&s).unwrap();
            let j = jacobian_forward(&s).unwrap();
            let inv = j.product.clone().try_inverse().unwrap();
            let k = s.problem().pose_dim();
            let rows = inv.rows(inv.nrows() - k, k).into_owned();
            let oracle = pd_sqrt(&grammian(&s).unwrap()).unwrap() * rows;
            let c2 = oracle.svd(false, false).singular_values.max();
            assert!((rep.cond - c2).abs() <= 1e-9 * c2);
            assert!(rep.cond > 0.0 && rep.cond.is_finite());
        }
    }

    #[test]
    fn cond_independent_of_completion() {
        for seed in 0..10 {
            let s = random_essential_scene(seed);
            let mut s2 = s.clone();
            s2.translation = s.translation.with_completion_angle(0.83);
            let c1 = condition_number(&Scene::Essential(s)).unwrap().cond;
            let c2 = condition_number(&Scene::Essential(s2)).unwrap().cond;
            assert!((c1 - c2).abs() <= 1e-8 * c1);
        }
    }

    #[test]
    fn cond_invariant_under_optical_axis_rotations() {
        for seed in 0..10 {
            let s = random_essential_scene(seed);
            let q = Rotation::from_axis_angle(&Vector3::z(), 0.7);
            let first = EssentialScene {
                rotation: s.rotation.compose(&q.transpose()),
                translation: s.translation,
                points: s.points.iter().map(|p| q.matrix() * p).collect(),
            };
            let second = EssentialScene {
                rotation: q.compose(&s.rotation),
                translation: UnitTranslation::new(q.matrix() * s.translation.vector()).unwrap(),
                points: s.points.clone(),
            };
            let c0 = condition_number(&Scene::Essential(s)).unwrap().cond;
            for t in [first, second] {
                let c = condition_number(&Scene::Essential(t)).unwrap().cond;
                assert!((c - c0).abs() <= 1e-8 * c0, "{c} vs {c0}");
            }
        }
    }

    #[test]
    fn empirical_condition_rejects_bad_delta() {
        let s = Scene::Essential(random_essential_scene(1));
        assert!(empirical_condition(&s, 0.0, 10, 1).is_err());
        assert!(empirical_condition(&s, 1e-3, 10, 1).is_err());
    }

    #[test]
    fn empirical_condition_is_bounded_by_cond() {
        for s in scenes().into_iter().take(6) {
            let c = condition_number(&s).unwrap().cond;
            let e = empirical_condition(&s, 1e-7, 200, 3).unwrap();
            assert!(e <= 1.05 * c && e >= 0.2 * c, "{e} vs {c}");
        }
    }
}
