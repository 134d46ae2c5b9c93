//! Five-point essential matrix solver: nullspace parametrization
//! `E = x X + y Y + z Z + W`, the ten cubic constraints, Gauss-Jordan
//! elimination and a degree-10 hidden-variable polynomial in `z`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use super::roots::{self, real_roots};
use super::{check_count, epipolar_rows, max_epipolar_residual, nullspace_basis, SolverOutput, CERTIFY_TOL};
use crate::error::{Error, Result};
use crate::geometry::{beta, essential_manifold_residual, Correspondence, EpipolarModel, Problem, Rotation};
use crate::linalg::projective_distance;

/// Attempts before giving up; attempts after the first rotate both images.
pub const FIVE_POINT_ATTEMPTS: usize = 4;
const PIVOT_TOL: f64 = 1e-10;

/// Exponents of `x^a y^b z^c`, eliminated monomials first.
pub const MONOMIALS: [(u8, u8, u8); 20] = [
    (3, 0, 0), (0, 3, 0), (2, 1, 0), (1, 2, 0), (2, 0, 1), (2, 0, 0), (0, 2, 1), (0, 2, 0), (1, 1, 1), (1, 1, 0),
    (1, 0, 2), (1, 0, 1), (1, 0, 0), (0, 1, 2), (0, 1, 1), (0, 1, 0), (0, 0, 3), (0, 0, 2), (0, 0, 1), (0, 0, 0),
];

const fn build_index() -> [u8; 64] {
    let mut t = [255u8; 64];
    let mut i = 0;
    while i < 20 {
        let (a, b, c) = MONOMIALS[i];
        t[(a as usize) * 16 + (b as usize) * 4 + c as usize] = i as u8;
        i += 1;
    }
    t
}

const INDEX: [u8; 64] = build_index();

/// Polynomial of degree at most 3 in `x, y, z` over [`MONOMIALS`].
pub type Poly3 = [f64; 20];

fn pmul(p: &Poly3, q: &Poly3) -> Poly3 {
    let mut out = [0.0; 20];
    for (i, &a) in p.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let (ea, eb, ec) = MONOMIALS[i];
        for (j, &b) in q.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            let (fa, fb, fc) = MONOMIALS[j];
            let (a2, b2, c2) = (ea + fa, eb + fb, ec + fc);
            debug_assert!(a2 + b2 + c2 <= 3);
            out[INDEX[(a2 as usize) * 16 + (b2 as usize) * 4 + c2 as usize] as usize] += a * b;
        }
    }
    out
}

fn padd(p: &Poly3, q: &Poly3, s: f64) -> Poly3 {
    core::array::from_fn(|i| p[i] + s * q[i])
}

fn linear(x: f64, y: f64, z: f64, w: f64) -> Poly3 {
    let mut p = [0.0; 20];
    p[12] = x;
    p[15] = y;
    p[18] = z;
    p[19] = w;
    p
}

/// The ten cubics: `det E` and the entries of `2 E E^T E - tr(E E^T) E`,
/// for `E = x b[0] + y b[1] + z b[2] + b[3]`.
pub fn five_point_equations(b: &[Matrix3<f64>; 4]) -> [Poly3; 10] {
    let e: [[Poly3; 3]; 3] =
        core::array::from_fn(|r| core::array::from_fn(|c| linear(b[0][(r, c)], b[1][(r, c)], b[2][(r, c)], b[3][(r, c)])));
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        padd(&pmul(&e[r1][c1], &e[r2][c2]), &pmul(&e[r1][c2], &e[r2][c1]), -1.0)
    };
    let mut det = pmul(&e[0][0], &minor(1, 2, 1, 2));
    det = padd(&det, &pmul(&e[0][1], &minor(1, 2, 0, 2)), -1.0);
    det = padd(&det, &pmul(&e[0][2], &minor(1, 2, 0, 1)), 1.0);
    let eet: [[Poly3; 3]; 3] = core::array::from_fn(|r| {
        core::array::from_fn(|c| (0..3).fold([0.0; 20], |acc, k| padd(&acc, &pmul(&e[r][k], &e[c][k]), 1.0)))
    });
    let tr = padd(&padd(&eet[0][0], &eet[1][1], 1.0), &eet[2][2], 1.0);
    let mut out = [[0.0; 20]; 10];
    out[0] = det;
    for r in 0..3 {
        for c in 0..3 {
            let eete = (0..3).fold([0.0; 20], |acc, k| padd(&acc, &pmul(&eet[r][k], &e[k][c]), 1.0));
            out[1 + 3 * r + c] = padd(&padd(&[0.0; 20], &eete, 2.0), &pmul(&tr, &e[r][c]), -1.0);
        }
    }
    out
}

fn gauss_jordan(eqs: &[Poly3; 10]) -> Result<[Poly3; 10]> {
    let mut a = *eqs;
    for row in a.iter_mut() {
        let m = row.iter().fold(0.0f64, |x, v| x.max(v.abs()));
        if m > 0.0 {
            row.iter_mut().for_each(|v| *v /= m);
        }
    }
    for col in 0..10 {
        let piv = (col..10).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if !(a[piv][col].abs() > PIVOT_TOL) {
            return Err(Error::EliminationFailed);
        }
        a.swap(col, piv);
        let p = a[col][col];
        a[col].iter_mut().for_each(|v| *v /= p);
        let pivot_row = a[col];
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && row[col] != 0.0 {
                let f = row[col];
                for k in col..20 {
                    row[k] -= f * pivot_row[k];
                }
            }
        }
    }
    Ok(a)
}

/// 3x3 matrix of polynomials in `z` (highest degree first) acting on `(x, y, 1)`.
fn hidden_matrix(r: &[Poly3; 10]) -> [[Vec<f64>; 3]; 3] {
    let row = |a: usize, b: usize| -> [Vec<f64>; 3] {
        let (ra, rb) = (&r[a], &r[b]);
        [
            alloc::vec![ra[10], ra[11] - rb[10], ra[12] - rb[11], -rb[12]],
            alloc::vec![ra[13], ra[14] - rb[13], ra[15] - rb[14], -rb[15]],
            alloc::vec![ra[16], ra[17] - rb[16], ra[18] - rb[17], ra[19] - rb[18], -rb[19]],
        ]
    };
    [row(5, 4), row(7, 6), row(9, 8)]
}

fn det3_poly(m: &[[Vec<f64>; 3]; 3]) -> Vec<f64> {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        roots::add(&roots::mul(&m[r1][c1], &m[r2][c2]), &roots::scale(&roots::mul(&m[r1][c2], &m[r2][c1]), -1.0))
    };
    let t0 = roots::mul(&m[0][0], &minor(1, 2, 1, 2));
    let t1 = roots::mul(&m[0][1], &minor(1, 2, 0, 2));
    let t2 = roots::mul(&m[0][2], &minor(1, 2, 0, 1));
    roots::add(&roots::add(&t0, &roots::scale(&t1, -1.0)), &t2)
}

fn residuals(b: &[Matrix3<f64>; 4], v: &Vector3<f64>) -> (SVector<f64, 10>, SMatrix<f64, 10, 3>) {
    let e = b[0] * v.x + b[1] * v.y + b[2] * v.z + b[3];
    let eet = e * e.transpose();
    let tr = eet.trace();
    let c = eet * e * 2.0 - e * tr;
    let adj = e.try_inverse().map(|i| i * e.determinant()).unwrap_or_else(|| cofactor_t(&e));
    let mut r = SVector::<f64, 10>::zeros();
    r[0] = e.determinant();
    for k in 0..9 {
        r[1 + k] = c[(k / 3, k % 3)];
    }
    let mut j = SMatrix::<f64, 10, 3>::zeros();
    for (col, d) in b[..3].iter().enumerate() {
        j[(0, col)] = (adj * d).trace();
        let dc = (d * e.transpose() * e + e * d.transpose() * e + eet * d) * 2.0
            - e * (2.0 * d.dot(&e))
            - d * tr;
        for k in 0..9 {
            j[(1 + k, col)] = dc[(k / 3, k % 3)];
        }
    }
    (r, j)
}

fn cofactor_t(m: &Matrix3<f64>) -> Matrix3<f64> {
    let c = |r: usize, k: usize| m.column(r).cross(&m.column(k));
    Matrix3::from_rows(&[c(1, 2).transpose(), c(2, 0).transpose(), c(0, 1).transpose()])
}

fn polish(b: &[Matrix3<f64>; 4], v0: Vector3<f64>) -> Vector3<f64> {
    let mut v = v0;
    let (mut r, mut j) = residuals(b, &v);
    for _ in 0..4 {
        let Some(step) = j.svd(true, true).solve(&(-r), 1e-14).ok() else { break };
        let nv = v + step;
        let (nr, nj) = residuals(b, &nv);
        if !(nr.norm() < r.norm()) {
            break;
        }
        v = nv;
        r = nr;
        j = nj;
        if step.norm() <= 1e-15 * (1.0 + v.norm()) {
            break;
        }
    }
    v
}

struct Attempt {
    models: Vec<Matrix3<f64>>,
    univariate: Vec<f64>,
    merged: bool,
}

fn solve_once(pairs: &[Correspondence]) -> Result<Attempt> {
    let basis = nullspace_basis(&epipolar_rows(pairs), 4)?;
    let b = [basis[0], basis[1], basis[2], basis[3]];
    let reduced = gauss_jordan(&five_point_equations(&b))?;
    let hm = hidden_matrix(&reduced);
    let univariate = det3_poly(&hm);
    let zs = real_roots(&univariate)?;
    let nearly_real = roots::complex_roots(&univariate)?
        .iter()
        .filter(|z| z.im.abs() <= 1e-4 * (1.0 + z.norm()))
        .count();
    let mut models = Vec::with_capacity(zs.len());
    for z in zs {
        let m = Matrix3::from_fn(|r, c| roots::eval(&hm[r][c], z));
        let cands = [m.row(0).cross(&m.row(1)), m.row(0).cross(&m.row(2)), m.row(1).cross(&m.row(2))];
        let n = cands.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        if n.z.abs() <= 1e-14 * n.norm() {
            continue;
        }
        let v = polish(&b, Vector3::new(n.x / n.z, n.y / n.z, z));
        models.push(b[0] * v.x + b[1] * v.y + b[2] * v.z + b[3]);
    }
    Ok(Attempt { merged: models.len() < nearly_real, models, univariate })
}

fn rotate_pairs(pairs: &[Correspondence], q1: &Matrix3<f64>, q2: &Matrix3<f64>) -> Option<Vec<Correspondence>> {
    pairs.iter().map(|p| Some(Correspondence::new(beta(&(q1 * p.x.push(1.0)))?, beta(&(q2 * p.y.push(1.0)))?))).collect()
}

fn attempt_rotations(k: usize) -> (Matrix3<f64>, Matrix3<f64>) {
    if k == 0 {
        return (Matrix3::identity(), Matrix3::identity());
    }
    let a = 0.15 * k as f64;
    let r1 = Rotation::from_axis_angle(&Vector3::new(1.0, 2.0, 0.5), a);
    let r2 = Rotation::from_axis_angle(&Vector3::new(-2.0, 0.5, 1.0), 0.8 * a);
    (*r1.matrix(), *r2.matrix())
}

pub fn solve_five_point(pairs: &[Correspondence]) -> Result<SolverOutput> {
    check_count(pairs, 5)?;
    let mut last = Error::EliminationFailed;
    for k in 0..FIVE_POINT_ATTEMPTS {
        let (q1, q2) = attempt_rotations(k);
        let Some(rot) = rotate_pairs(pairs, &q1, &q2) else { continue };
        let att = match solve_once(&rot) {
            Ok(a) => a,
            Err(e @ Error::RankDeficient { .. }) => return Err(e),
            Err(e) => {
                last = e;
                continue;
            }
        };
        let mut models: Vec<EpipolarModel> = Vec::new();
        let mut residual_max = 0.0f64;
        for e in att.models {
            let e = q2.transpose() * e * q1;
            let e = e / e.norm();
            let res = essential_manifold_residual(&e).max(max_epipolar_residual(&e, pairs));
            if res < CERTIFY_TOL && models.iter().all(|m| projective_distance(m.matrix(), &e) > 1e-9) {
                residual_max = residual_max.max(res);
                models.push(EpipolarModel::new(Problem::Essential, e)?);
            }
        }
        return Ok(SolverOutput {
            real_count: models.len(),
            models,
            residual_max,
            univariate: att.univariate,
            near_degenerate: att.merged,
        });
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condition::nearest_model;
    use crate::geometry::tests::random_essential_scene;
    use crate::geometry::{epipolar_matrix, forward_project, Scene};
    use crate::linalg::{solve_complex, C64};
    use crate::rng::rng;
    use rand::Rng as _;

    #[test]
    fn monomial_index_is_a_bijection() {
        for (i, &(a, b, c)) in MONOMIALS.iter().enumerate() {
            assert_eq!(INDEX[(a as usize) * 16 + (b as usize) * 4 + c as usize] as usize, i);
        }
    }

    #[test]
    fn equations_match_matrix_evaluation() {
        let s = Scene::Essential(random_essential_scene(9));
        let d = forward_project(&s).unwrap();
        let basis = nullspace_basis(&epipolar_rows(&d.pairs), 4).unwrap();
        let b = [basis[0], basis[1], basis[2], basis[3]];
        let eqs = five_point_equations(&b);
        let v = Vector3::new(0.3, -1.1, 0.7);
        let (r, _) = residuals(&b, &v);
        for k in 0..10 {
            let val: f64 = MONOMIALS
                .iter()
                .zip(&eqs[k])
                .map(|(&(a, bb, c), &coef)| coef * v.x.powi(a as i32) * v.y.powi(bb as i32) * v.z.powi(c as i32))
                .sum();
            assert!((val - r[k]).abs() < 1e-12 * (1.0 + r[k].abs()));
        }
    }

    #[test]
    fn residual_jacobian_matches_finite_differences() {
        let s = Scene::Essential(random_essential_scene(10));
        let d = forward_project(&s).unwrap();
        let basis = nullspace_basis(&epipolar_rows(&d.pairs), 4).unwrap();
        let b = [basis[0], basis[1], basis[2], basis[3]];
        let v = Vector3::new(0.2, 0.4, -0.6);
        let (_, j) = residuals(&b, &v);
        for c in 0..3 {
            let h = Vector3::ith(c, 1e-6);
            let fd = (residuals(&b, &(v + h)).0 - residuals(&b, &(v - h)).0) / 2e-6;
            assert!((fd - j.column(c)).norm() < 1e-7);
        }
    }

    #[test]
    fn recovers_truth() {
        for seed in 0..500 {
            let s = Scene::Essential(random_essential_scene(seed));
            let out = solve_five_point(&forward_project(&s).unwrap().pairs).unwrap();
            let truth = epipolar_matrix(&s).unwrap();
            let (_, d) = nearest_model(&out.models, &truth).unwrap();
            assert!(d < 1e-6, "seed {seed}: {d}");
            assert!(out.real_count <= 10 && out.real_count == out.models.len());
            for m in &out.models {
                assert!(essential_manifold_residual(m.matrix()) < CERTIFY_TOL);
            }
        }
    }

    #[test]
    fn rotated_attempts_agree() {
        let s = Scene::Essential(random_essential_scene(77));
        let pairs = forward_project(&s).unwrap().pairs;
        let truth = epipolar_matrix(&s).unwrap();
        for k in 1..FIVE_POINT_ATTEMPTS {
            let (q1, q2) = attempt_rotations(k);
            let rot = rotate_pairs(&pairs, &q1, &q2).unwrap();
            let att = solve_once(&rot).unwrap();
            let back: Vec<EpipolarModel> = att
                .models
                .iter()
                .map(|e| EpipolarModel::new(Problem::Essential, q2.transpose() * e * q1).unwrap())
                .collect();
            assert!(nearest_model(&back, &truth).unwrap().1 < 1e-6);
        }
    }

    /// Homogenized cubic at `a` in C^4 with its gradient.
    fn eval_h(p: &Poly3, a: &[C64; 4]) -> (C64, [C64; 4]) {
        let one = C64::new(1.0, 0.0);
        let pw = |z: C64, n: i32| if n <= 0 { one } else { z.powi(n) };
        let mut val = C64::new(0.0, 0.0);
        let mut grad = [C64::new(0.0, 0.0); 4];
        for (&(x, y, z), &coef) in MONOMIALS.iter().zip(p) {
            let e = [x as i32, y as i32, z as i32, 3 - (x + y + z) as i32];
            val += (0..4).fold(one, |acc, k| acc * pw(a[k], e[k])) * coef;
            for k in 0..4 {
                if e[k] > 0 {
                    let d = (0..4).fold(one, |acc, m| acc * pw(a[m], if m == k { e[m] - 1 } else { e[m] }));
                    grad[k] += d * (coef * e[k] as f64);
                }
            }
        }
        (val, grad)
    }

    /// Real solutions of the ten cubics by complex Gauss-Newton from random
    /// starts, each in its own random affine chart `c . a = 1`.
    fn brute_force(eqs: &[Poly3; 10], starts: usize, seed: u64) -> Vec<Vector3<f64>> {
        let mut r = rng(seed);
        let mut found: Vec<Vector3<f64>> = Vec::new();
        let unit = |r: &mut crate::rng::Rng| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        for _ in 0..starts {
            let c: [C64; 4] = core::array::from_fn(|_| unit(&mut r));
            let mut a: [C64; 4] = core::array::from_fn(|_| unit(&mut r));
            let s = c.iter().zip(&a).map(|(x, y)| x * y).sum::<C64>();
            a.iter_mut().for_each(|v| *v /= s);
            let mut ok = false;
            for _ in 0..100 {
                let mut ev: Vec<(C64, [C64; 4])> = eqs.iter().map(|p| eval_h(p, &a)).collect();
                ev.push((c.iter().zip(&a).map(|(x, y)| x * y).sum::<C64>() - 1.0, c));
                let res: f64 = ev.iter().map(|e| e.0.norm_sqr()).sum::<f64>().sqrt();
                let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).powi(3).max(1e-300);
                if res < 1e-14 * scale.max(1.0) {
                    ok = true;
                    break;
                }
                let mut m = [C64::new(0.0, 0.0); 16];
                let mut rhs = [C64::new(0.0, 0.0); 4];
                for (f, g) in &ev {
                    for i in 0..4 {
                        rhs[i] -= g[i].conj() * f;
                        for j in 0..4 {
                            m[4 * i + j] += g[i].conj() * g[j];
                        }
                    }
                }
                if !solve_complex(&mut m, &mut rhs, 4) {
                    break;
                }
                for i in 0..4 {
                    a[i] += rhs[i];
                }
                if a.iter().any(|z| !z.re.is_finite()) {
                    break;
                }
            }
            if !ok || a[3].norm() < 1e-8 * a.iter().map(|z| z.norm()).fold(0.0, f64::max) {
                continue;
            }
            let v: [C64; 3] = core::array::from_fn(|i| a[i] / a[3]);
            if v.iter().all(|z| z.im.abs() < 1e-6 * (1.0 + z.norm())) {
                let x = Vector3::new(v[0].re, v[1].re, v[2].re);
                if found.iter().all(|f| (f - x).norm() > 1e-6 * (1.0 + x.norm())) {
                    found.push(x);
                }
            }
        }
        found
    }

    #[test]
    fn elimination_matches_brute_force() {
        for seed in 0..20 {
            let s = Scene::Essential(random_essential_scene(1000 + seed));
            let pairs = forward_project(&s).unwrap().pairs;
            let basis = nullspace_basis(&epipolar_rows(&pairs), 4).unwrap();
            let b = [basis[0], basis[1], basis[2], basis[3]];
            let brute: Vec<Matrix3<f64>> = brute_force(&five_point_equations(&b), 200, seed)
                .iter()
                .map(|v| b[0] * v.x + b[1] * v.y + b[2] * v.z + b[3])
                .collect();
            let att = solve_once(&pairs).unwrap();
            assert_eq!(brute.len(), att.models.len(), "seed {seed}");
            for m in &brute {
                assert!(att.models.iter().any(|e| projective_distance(e, m) < 1e-6), "seed {seed}");
            }
        }
    }
}
