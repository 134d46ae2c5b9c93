#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use nalgebra::{Matrix3, Matrix3x2, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::geometry::{Correspondence, EpipolarModel, Rotation, UnitTranslation};

/// The four `(R, t)` with `[t]x R` proportional to `e`.
pub fn essential_candidates(e: &Matrix3<f64>) -> Result<[(Matrix3<f64>, Vector3<f64>); 4]> {
    let svd = e.svd(true, true);
    let (mut u, mut vt) = (svd.u.ok_or(Error::NoSolution)?, svd.v_t.ok_or(Error::NoSolution)?);
    // Put the null direction in the third column.
    let order = {
        let s = svd.singular_values;
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
        idx
    };
    u = Matrix3::from_columns(&[u.column(order[0]), u.column(order[1]), u.column(order[2])]);
    vt = Matrix3::from_rows(&[vt.row(order[0]), vt.row(order[1]), vt.row(order[2])]);
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
    }
    if vt.determinant() < 0.0 {
        vt.row_mut(2).neg_mut();
    }
    let w = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
    let r1 = u * w * vt;
    let r2 = u * w.transpose() * vt;
    let t: Vector3<f64> = u.column(2).into_owned();
    Ok([(r1, t), (r1, -t), (r2, t), (r2, -t)])
}

/// Depths `(d1, d2)` with `d2 y = R (d1 x) + t` in the least-squares sense,
/// or `None` when the rays are parallel.
pub fn triangulate_depths(r: &Matrix3<f64>, t: &Vector3<f64>, p: &Correspondence) -> Option<Vector2<f64>> {
    let a = Matrix3x2::from_columns(&[r * p.x.push(1.0), -p.y.push(1.0)]);
    let svd = a.svd(false, false);
    let s = svd.singular_values;
    if s.min() <= 1e-10 * s.max() {
        return None;
    }
    (a.transpose() * a).try_inverse().map(|inv| inv * a.transpose() * (-t))
}

/// Pose whose triangulation puts the most points in front of both cameras.
pub fn decompose_essential(e: &EpipolarModel, pairs: &[Correspondence]) -> Result<(Rotation, UnitTranslation)> {
    if pairs.is_empty() {
        return Err(Error::invalid("decomposition needs at least one pair"));
    }
    let cands = essential_candidates(e.matrix())?;
    let mut best: Option<(usize, usize)> = None;
    let mut any = false;
    for (k, (r, t)) in cands.iter().enumerate() {
        let depths: Vec<Vector2<f64>> = pairs.iter().filter_map(|p| triangulate_depths(r, t, p)).collect();
        any |= !depths.is_empty();
        let front = depths.iter().filter(|d| d.x > 0.0 && d.y > 0.0).count();
        if front > 0 && best.map_or(true, |(_, b)| front > b) {
            best = Some((k, front));
        }
    }
    if !any {
        return Err(Error::TriangulationFailed);
    }
    let (k, _) = best.ok_or(Error::CheiralityFailed)?;
    let (r, t) = cands[k];
    Ok((Rotation::new(r)?, UnitTranslation::new(t)?))
}

/// First-order geometric residual `(y^T F x)^2 / (|(F x)_12|^2 + |(F^T y)_12|^2)`,
/// falling back to the squared algebraic residual when the gradient vanishes.
pub fn sampson_distance(model: &EpipolarModel, p: &Correspondence) -> f64 {
    let f = model.matrix();
    let (x, y) = (p.x.push(1.0), p.y.push(1.0));
    let fx = f * x;
    let fty = f.transpose() * y;
    let num = y.dot(&fx).powi(2);
    let den = fx.x * fx.x + fx.y * fx.y + fty.x * fty.x + fty.y * fty.y;
    if den <= 1e-24 {
        num
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tests::random_essential_scene;
    use crate::geometry::{epipolar_matrix, forward_project, Problem, Scene};
    use crate::linalg::{projective_distance, skew};
    use proptest::prelude::*;

    #[test]
    fn candidates_reproduce_e() {
        let s = random_essential_scene(2);
        let e = epipolar_matrix(&Scene::Essential(s)).unwrap();
        for (r, t) in essential_candidates(e.matrix()).unwrap() {
            assert!((r.transpose() * r - Matrix3::identity()).amax() < 1e-12);
            assert!((r.determinant() - 1.0).abs() < 1e-12);
            assert!(projective_distance(&(skew(&t) * r), e.matrix()) < 1e-8);
        }
    }

    #[test]
    fn round_trip_pose() {
        for seed in 0..50 {
            let s = random_essential_scene(seed);
            if (0..5).any(|i| s.second(i).z <= 0.0) {
                continue;
            }
            let scene = Scene::Essential(s.clone());
            let e = epipolar_matrix(&scene).unwrap();
            let d = forward_project(&scene).unwrap();
            let (r, t) = decompose_essential(&e, &d.pairs).unwrap();
            assert!(r.angle_to(&s.rotation) < 1e-6, "seed {seed}");
            assert!((t.vector() - s.translation.vector()).norm() < 1e-6);
            // Wrong candidates put at least one point behind a camera.
            for (rc, tc) in essential_candidates(e.matrix()).unwrap() {
                if (rc - s.rotation.matrix()).amax() < 1e-6 && (tc - s.translation.vector()).norm() < 1e-6 {
                    continue;
                }
                let bad = d.pairs.iter().any(|p| triangulate_depths(&rc, &tc, p).map_or(true, |v| v.x <= 0.0 || v.y <= 0.0));
                assert!(bad);
            }
        }
    }

    #[test]
    fn pair_at_epipole_fails() {
        let s = random_essential_scene(4);
        let scene = Scene::Essential(s.clone());
        let e = epipolar_matrix(&scene).unwrap();
        // Each image of the other camera centre.
        let c2 = s.translation.vector();
        let ex = s.rotation.matrix().transpose() * c2;
        let x = Vector2::new(ex.x / ex.z, ex.y / ex.z);
        let y = Vector2::new(c2.x / c2.z, c2.y / c2.z);
        let p = Correspondence::new(x, y);
        assert!(e.algebraic(&p).abs() < 1e-10);
        assert_eq!(decompose_essential(&e, &[p]), Err(Error::TriangulationFailed));
    }

    #[test]
    fn sampson_examples() {
        let e = EpipolarModel::new(Problem::Essential, skew(&Vector3::x())).unwrap();
        // Epipolar lines are horizontal: y-coordinates must agree.
        let exact = Correspondence::new(Vector2::new(0.2, 0.3), Vector2::new(-0.5, 0.3));
        assert_eq!(sampson_distance(&e, &exact), 0.0);
        let m = e.matrix();
        let line = m * exact.x.push(1.0);
        let n = Vector2::new(line.x, line.y).normalize();
        let off = Correspondence::new(exact.x, exact.y + n);
        // The gradient with respect to y alone gives distance one; the
        // x-gradient halves the squared value for this symmetric geometry.
        let g2 = (m * off.x.push(1.0)).xy().norm_squared() + (m.transpose() * off.y.push(1.0)).xy().norm_squared();
        let alg = off.y.push(1.0).dot(&(m * off.x.push(1.0)));
        assert!((sampson_distance(&e, &off) - alg * alg / g2).abs() < 1e-15);
        assert!((alg * alg / (m * off.x.push(1.0)).xy().norm_squared() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn sampson_is_transpose_symmetric(v in proptest::collection::vec(-2.0f64..2.0, 13)) {
            let f = Matrix3::from_iterator(v[..9].iter().copied());
            prop_assume!(f.norm() > 0.1);
            let m = EpipolarModel::new(Problem::Fundamental, f).unwrap();
            let mt = EpipolarModel::new(Problem::Fundamental, f.transpose()).unwrap();
            let p = Correspondence::new(Vector2::new(v[9], v[10]), Vector2::new(v[11], v[12]));
            let q = Correspondence::new(p.y, p.x);
            let (a, b) = (sampson_distance(&m, &p), sampson_distance(&mt, &q));
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            prop_assert!(a >= 0.0);
        }
    }
}
