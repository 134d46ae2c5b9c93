//! Scenes, poses, epipolar models, tangent bases and Grammians.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;
use nalgebra::{DMatrix, Matrix3, Matrix3x4, Matrix4, SVector, Vector2, Vector3, Vector4};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::skew;
use crate::rng::{rng, Rng};
use rand::Rng as _;

/// Smallest admissible magnitude of a third (depth) coordinate.
pub const DEPTH_EPS: f64 = 1e-12;
/// Orthogonality tolerance accepted when validating rotations from outside.
pub const ROTATION_TOL: f64 = 1e-9;
/// Manifold-membership tolerance for certified epipolar models.
pub const MANIFOLD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    /// Calibrated 5-point problem.
    Essential,
    /// Uncalibrated 7-point problem.
    Fundamental,
}

impl Problem {
    pub fn minimal_points(self) -> usize {
        match self {
            Problem::Essential => 5,
            Problem::Fundamental => 7,
        }
    }

    /// Dimension of the pose manifold (5 or 7).
    pub fn pose_dim(self) -> usize {
        match self {
            Problem::Essential => 5,
            Problem::Fundamental => 7,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Problem::Essential => "E",
            Problem::Fundamental => "F",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(Matrix3<f64>);

impl Rotation {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let orth = (m * m.transpose() - Matrix3::identity()).amax();
        if !(orth <= ROTATION_TOL) {
            return Err(Error::InvalidRotation(format!("|R R^T - I| = {orth:e}")));
        }
        let det = m.determinant();
        if !((det - 1.0).abs() <= ROTATION_TOL) {
            return Err(Error::InvalidRotation(format!("det R = {det}")));
        }
        Ok(Rotation(m))
    }

    pub fn identity() -> Self {
        Rotation(Matrix3::identity())
    }

    /// Rodrigues rotation about `axis` (normalized internally) by `angle`.
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Self {
        let n = axis.norm();
        if n == 0.0 {
            return Self::identity();
        }
        let k = skew(&(axis / n));
        Rotation(Matrix3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos()))
    }

    /// Orthogonal factor of the QR decomposition of a standard-normal matrix,
    /// with column signs fixed by diag(R) and the determinant made +1.
    pub fn random(rng: &mut Rng) -> Self {
        loop {
            let a: Matrix3<f64> = Matrix3::from_fn(|_, _| StandardNormal.sample(rng));
            let qr = a.qr();
            let (mut q, r) = (qr.q(), qr.r());
            if (0..3).any(|i| r[(i, i)].abs() < 1e-12) {
                continue;
            }
            for i in 0..3 {
                if r[(i, i)] < 0.0 {
                    let c = -q.column(i);
                    q.set_column(i, &c);
                }
            }
            if q.determinant() < 0.0 {
                q = -q;
            }
            return Rotation(q);
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Rotation {
        Rotation(self.0.transpose())
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation(self.0 * other.0)
    }

    /// Rotation angle of `self^T other`.
    pub fn angle_to(&self, other: &Rotation) -> f64 {
        let r = self.0.transpose() * other.0;
        let c = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
        let s = Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]).norm() / 2.0;
        s.atan2(c)
    }
}

/// Orthonormal pair completing `t` to a right-handed frame. The standard
/// axis least aligned with `t` (first on ties) is orthogonalized against it.
pub fn orthonormal_complement(t: &Vector3<f64>) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let n = t.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    let t = t / n;
    let mut k = 0;
    for i in 1..3 {
        if t[i].abs() < t[k].abs() {
            k = i;
        }
    }
    let e = Vector3::ith(k, 1.0);
    let p1 = (e - t * t[k]).normalize();
    let p2 = t.cross(&p1);
    Ok((p1, p2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitTranslation {
    t: Vector3<f64>,
    perp1: Vector3<f64>,
    perp2: Vector3<f64>,
}

impl UnitTranslation {
    /// Normalizes `t` and attaches the deterministic completion. Vectors
    /// already of unit norm to a few ulps are kept bit for bit.
    pub fn new(t: Vector3<f64>) -> Result<Self> {
        let (perp1, perp2) = orthonormal_complement(&t)?;
        let n = t.norm();
        let t = if (n - 1.0).abs() <= 4.0 * f64::EPSILON { t } else { t / n };
        Ok(UnitTranslation { t, perp1, perp2 })
    }

    pub fn random(rng: &mut Rng) -> Self {
        loop {
            let v = Vector3::from_fn(|_, _| StandardNormal.sample(rng));
            if v.norm() > 1e-6 {
                return Self::new(v).expect("nonzero");
            }
        }
    }

    /// Same direction with the completion rotated by `angle` about `t`.
    pub fn with_completion_angle(&self, angle: f64) -> Self {
        let (c, s) = (angle.cos(), angle.sin());
        UnitTranslation {
            t: self.t,
            perp1: self.perp1 * c + self.perp2 * s,
            perp2: -self.perp1 * s + self.perp2 * c,
        }
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.t
    }

    pub fn perp(&self) -> (Vector3<f64>, Vector3<f64>) {
        (self.perp1, self.perp2)
    }
}

/// `(1/sqrt 2) R [e_i]x`, an orthonormal basis of the tangent space at R.
pub fn tangent_basis_so3(r: &Rotation) -> [Matrix3<f64>; 3] {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    [0, 1, 2].map(|i| r.matrix() * skew(&Vector3::ith(i, 1.0)) * s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correspondence {
    pub x: Vector2<f64>,
    pub y: Vector2<f64>,
}

impl Correspondence {
    pub fn new(x: Vector2<f64>, y: Vector2<f64>) -> Self {
        Correspondence { x, y }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ImageData {
    pub pairs: Vec<Correspondence>,
}

impl ImageData {
    pub fn new(pairs: Vec<Correspondence>) -> Result<Self> {
        if pairs.iter().any(|p| !(p.x.iter().chain(p.y.iter()).all(|v| v.is_finite()))) {
            return Err(Error::invalid("non-finite image coordinate"));
        }
        Ok(ImageData { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Stacked image vector `[x_1..x_N, y_1..y_N]`, each point as (u, v).
    pub fn to_vector(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(4 * self.len());
        for p in &self.pairs {
            out.extend_from_slice(&[p.x.x, p.x.y]);
        }
        for p in &self.pairs {
            out.extend_from_slice(&[p.y.x, p.y.y]);
        }
        out
    }

    pub fn from_vector(v: &[f64]) -> Self {
        let n = v.len() / 4;
        let pairs = (0..n)
            .map(|i| {
                Correspondence::new(
                    Vector2::new(v[2 * i], v[2 * i + 1]),
                    Vector2::new(v[2 * n + 2 * i], v[2 * n + 2 * i + 1]),
                )
            })
            .collect();
        ImageData { pairs }
    }
}

/// Pinhole intrinsics without skew.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl Intrinsics {
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(self.fx, 0.0, self.cx, 0.0, self.fy, self.cy, 0.0, 0.0, 1.0)
    }

    pub fn to_pixel(&self, p: &Vector2<f64>) -> Vector2<f64> {
        Vector2::new(self.fx * p.x + self.cx, self.fy * p.y + self.cy)
    }

    pub fn to_normalized(&self, p: &Vector2<f64>) -> Vector2<f64> {
        Vector2::new((p.x - self.cx) / self.fx, (p.y - self.cy) / self.fy)
    }

    pub fn data_to_normalized(&self, d: &ImageData) -> ImageData {
        let pairs = d
            .pairs
            .iter()
            .map(|p| Correspondence::new(self.to_normalized(&p.x), self.to_normalized(&p.y)))
            .collect();
        ImageData { pairs }
    }

    pub fn data_to_pixel(&self, d: &ImageData) -> ImageData {
        let pairs = d
            .pairs
            .iter()
            .map(|p| Correspondence::new(self.to_pixel(&p.x), self.to_pixel(&p.y)))
            .collect();
        ImageData { pairs }
    }
}

/// Central projection `(a1/a3, a2/a3)`.
pub fn beta(a: &Vector3<f64>) -> Option<Vector2<f64>> {
    if a.z.abs() < DEPTH_EPS || !a.z.is_finite() {
        None
    } else {
        Some(Vector2::new(a.x / a.z, a.y / a.z))
    }
}

/// Calibrated scene: second camera `[R | t]`, first camera `[I | 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EssentialScene {
    pub rotation: Rotation,
    pub translation: UnitTranslation,
    pub points: Vec<Vector3<f64>>,
}

/// Uncalibrated scene in normal form: second camera `M(b)`, first `[I | 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalScene {
    pub b: SVector<f64, 7>,
    pub points: Vec<Vector3<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scene {
    Essential(EssentialScene),
    Fundamental(FundamentalScene),
}

impl EssentialScene {
    pub fn new(rotation: Rotation, translation: UnitTranslation, points: Vec<Vector3<f64>>) -> Result<Self> {
        let s = EssentialScene { rotation, translation, points };
        s.check()?;
        Ok(s)
    }

    pub fn second(&self, i: usize) -> Vector3<f64> {
        self.rotation.matrix() * self.points[i] + self.translation.vector()
    }

    pub fn check(&self) -> Result<()> {
        for i in 0..self.points.len() {
            if beta(&self.points[i]).is_none() || beta(&self.second(i)).is_none() {
                return Err(Error::ProjectionUndefined { index: i });
            }
        }
        Ok(())
    }
}

impl FundamentalScene {
    pub fn new(b: SVector<f64, 7>, points: Vec<Vector3<f64>>) -> Result<Self> {
        let s = FundamentalScene { b, points };
        s.check()?;
        Ok(s)
    }

    pub fn second(&self, i: usize) -> Vector3<f64> {
        m_of_b(&self.b) * self.points[i].push(1.0)
    }

    pub fn check(&self) -> Result<()> {
        let m = m_of_b(&self.b);
        let sv = m.svd(false, false).singular_values;
        if sv.min() <= 1e-12 * sv.max() {
            return Err(Error::DegeneratePair("M(b) is rank deficient"));
        }
        for i in 0..self.points.len() {
            if beta(&self.points[i]).is_none() || beta(&self.second(i)).is_none() {
                return Err(Error::ProjectionUndefined { index: i });
            }
        }
        Ok(())
    }
}

impl Scene {
    pub fn problem(&self) -> Problem {
        match self {
            Scene::Essential(_) => Problem::Essential,
            Scene::Fundamental(_) => Problem::Fundamental,
        }
    }

    pub fn points(&self) -> &[Vector3<f64>] {
        match self {
            Scene::Essential(s) => &s.points,
            Scene::Fundamental(s) => &s.points,
        }
    }

    pub fn points_mut(&mut self) -> &mut Vec<Vector3<f64>> {
        match self {
            Scene::Essential(s) => &mut s.points,
            Scene::Fundamental(s) => &mut s.points,
        }
    }

    /// Point as seen in the second camera frame (before projection).
    pub fn second(&self, i: usize) -> Vector3<f64> {
        match self {
            Scene::Essential(s) => s.second(i),
            Scene::Fundamental(s) => s.second(i),
        }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            Scene::Essential(s) => s.check(),
            Scene::Fundamental(s) => s.check(),
        }
    }

    pub fn check_minimal(&self) -> Result<()> {
        let expected = self.problem().minimal_points();
        if self.points().len() != expected {
            return Err(Error::WrongPointCount { expected, found: self.points().len() });
        }
        self.check()
    }
}

/// Second camera `[[1,b1,b2,b3],[b4,b5,b6,b7],[0,0,0,1]]`.
pub fn m_of_b(b: &SVector<f64, 7>) -> Matrix3x4<f64> {
    Matrix3x4::new(1.0, b[0], b[1], b[2], b[3], b[4], b[5], b[6], 0.0, 0.0, 0.0, 1.0)
}

/// Position of `b_j` inside `M(b)`.
pub const M_B_INDEX: [(usize, usize); 7] = [(0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (1, 3)];

/// Fundamental matrix of the pair `([I|0], M(b))`, unnormalized.
pub fn f_of_b(b: &SVector<f64, 7>) -> Matrix3<f64> {
    let [b1, b2, b3, b4, b5, b6, b7] = [b[0], b[1], b[2], b[3], b[4], b[5], b[6]];
    Matrix3::new(
        b4,
        b5,
        b6,
        -1.0,
        -b1,
        -b2,
        -b3 * b4 + b7,
        -b3 * b5 + b1 * b7,
        -b3 * b6 + b2 * b7,
    )
}

/// Partial derivative of `F(b)` with respect to `b_j` (0-based).
pub fn df_db(b: &SVector<f64, 7>, j: usize) -> Matrix3<f64> {
    let [b1, b2, b3, b4, b5, b6, b7] = [b[0], b[1], b[2], b[3], b[4], b[5], b[6]];
    let mut d = Matrix3::zeros();
    match j {
        0 => {
            d[(1, 1)] = -1.0;
            d[(2, 1)] = b7;
        }
        1 => {
            d[(1, 2)] = -1.0;
            d[(2, 2)] = b7;
        }
        2 => {
            d[(2, 0)] = -b4;
            d[(2, 1)] = -b5;
            d[(2, 2)] = -b6;
        }
        3 => {
            d[(0, 0)] = 1.0;
            d[(2, 0)] = -b3;
        }
        4 => {
            d[(0, 1)] = 1.0;
            d[(2, 1)] = -b3;
        }
        5 => {
            d[(0, 2)] = 1.0;
            d[(2, 2)] = -b3;
        }
        6 => {
            d[(2, 0)] = 1.0;
            d[(2, 1)] = b1;
            d[(2, 2)] = b2;
        }
        _ => panic!("b has 7 entries"),
    }
    d
}

/// Closed-form Grammian of the tangent basis
/// `(1/2) R[e_j]x[t]x, (1/sqrt 2) R[t_k^perp]x` (independent of R).
pub fn grammian_essential(t: &UnitTranslation) -> DMatrix<f64> {
    let v = t.vector();
    let (p1, p2) = t.perp();
    let mut g = DMatrix::zeros(5, 5);
    for i in 0..3 {
        for j in 0..3 {
            g[(i, j)] = 0.25 * v[i] * v[j];
        }
        g[(i, i)] += 0.25 * v.norm_squared();
    }
    let c = 0.5 * core::f64::consts::FRAC_1_SQRT_2;
    for (k, p) in [p1, p2].iter().enumerate() {
        let w = v.cross(p) * c;
        for i in 0..3 {
            g[(i, 3 + k)] = w[i];
            g[(3 + k, i)] = w[i];
        }
    }
    g[(3, 3)] = 1.0;
    g[(4, 4)] = 1.0;
    g
}

/// Closed-form Grammian of `dF/db_j / |F(b)|`.
pub fn grammian_fundamental(b: &SVector<f64, 7>) -> Result<DMatrix<f64>> {
    let m = m_of_b(b);
    let sv = m.svd(false, false).singular_values;
    if sv.min() <= 1e-12 * sv.max() {
        return Err(Error::DegeneratePair("M(b) is rank deficient"));
    }
    let [b1, b2, b3, b4, b5, b6, b7] = [b[0], b[1], b[2], b[3], b[4], b[5], b[6]];
    let c37 = -b1 * b5 - b2 * b6 - b4;
    #[rustfmt::skip]
    let g = DMatrix::from_row_slice(7, 7, &[
        b7 * b7 + 1.0, 0.0, -b5 * b7, 0.0, -b3 * b7, 0.0, b1 * b7,
        0.0, b7 * b7 + 1.0, -b6 * b7, 0.0, 0.0, -b3 * b7, b2 * b7,
        -b5 * b7, -b6 * b7, b4 * b4 + b5 * b5 + b6 * b6, b3 * b4, b3 * b5, b3 * b6, c37,
        0.0, 0.0, b3 * b4, b3 * b3 + 1.0, 0.0, 0.0, -b3,
        -b3 * b7, 0.0, b3 * b5, 0.0, b3 * b3 + 1.0, 0.0, -b1 * b3,
        0.0, -b3 * b7, b3 * b6, 0.0, 0.0, b3 * b3 + 1.0, -b2 * b3,
        b1 * b7, b2 * b7, c37, -b3, -b1 * b3, -b2 * b3, b1 * b1 + b2 * b2 + 1.0,
    ]);
    Ok(g / f_of_b(b).norm_squared())
}

/// Translation expressed in the first camera frame, `R^T t`, with the
/// completion `-R^T t_k^perp`. The essential matrix of the scene is
/// `[t]x R = R [R^T t]x`, and its tangent basis along the pose coordinates
/// `(1/2)[t]x R[e_j]x, (1/sqrt 2)[t_k^perp]x R` has the Gram matrix of
/// [`grammian_essential`] evaluated at this frame.
pub fn essential_frame(r: &Rotation, t: &UnitTranslation) -> UnitTranslation {
    let rt = r.matrix().transpose();
    let (p1, p2) = t.perp();
    UnitTranslation { t: rt * t.vector(), perp1: -(rt * p1), perp2: -(rt * p2) }
}

pub fn grammian(scene: &Scene) -> Result<DMatrix<f64>> {
    match scene {
        Scene::Essential(s) => Ok(grammian_essential(&essential_frame(&s.rotation, &s.translation))),
        Scene::Fundamental(s) => grammian_fundamental(&s.b),
    }
}

/// Essential or fundamental matrix with unit Frobenius norm and the first
/// entry above 1e-9 in magnitude made positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpipolarModel {
    pub kind: Problem,
    m: Matrix3<f64>,
}

impl EpipolarModel {
    pub fn new(kind: Problem, m: Matrix3<f64>) -> Result<Self> {
        let n = m.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(EpipolarModel { kind, m: canonical_sign(&(m / n)) })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Manifold membership: equal leading singular values and vanishing third
    /// for essential matrices, vanishing determinant for fundamental ones.
    pub fn manifold_residual(&self) -> f64 {
        match self.kind {
            Problem::Essential => {
                let mut s: Vec<f64> = self.m.svd(false, false).singular_values.iter().copied().collect();
                s.sort_by(|a, b| b.total_cmp(a));
                (s[0] - s[1]).abs().max(s[2])
            }
            Problem::Fundamental => self.m.determinant().abs(),
        }
    }

    pub fn certify(&self, tol: f64) -> bool {
        self.manifold_residual() < tol
    }

    /// `y^T M x` in homogeneous coordinates.
    pub fn algebraic(&self, p: &Correspondence) -> f64 {
        p.y.push(1.0).dot(&(self.m * p.x.push(1.0)))
    }
}

pub fn canonical_sign(m: &Matrix3<f64>) -> Matrix3<f64> {
    for r in 0..3 {
        for c in 0..3 {
            let v = m[(r, c)];
            if v.abs() > 1e-9 {
                return if v < 0.0 { -m } else { *m };
            }
        }
    }
    *m
}

pub fn epipolar_matrix(scene: &Scene) -> Result<EpipolarModel> {
    match scene {
        Scene::Essential(s) => EpipolarModel::new(
            Problem::Essential,
            skew(s.translation.vector()) * s.rotation.matrix(),
        ),
        Scene::Fundamental(s) => EpipolarModel::new(Problem::Fundamental, f_of_b(&s.b)),
    }
}

pub fn forward_project(scene: &Scene) -> Result<ImageData> {
    let pts = scene.points();
    let mut pairs = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        let x = beta(p).ok_or(Error::ProjectionUndefined { index: i })?;
        let y = beta(&scene.second(i)).ok_or(Error::ProjectionUndefined { index: i })?;
        pairs.push(Correspondence::new(x, y));
    }
    Ok(ImageData { pairs })
}

/// Unit direction of the line through both camera centers.
pub fn baseline(scene: &Scene) -> Result<Vector3<f64>> {
    let v = match scene {
        Scene::Essential(s) => -(s.rotation.matrix().transpose() * s.translation.vector()),
        Scene::Fundamental(s) => {
            let b = &s.b;
            Vector3::new(b[1] * b[4] - b[0] * b[5], -b[1] * b[3] + b[5], b[0] * b[3] - b[4])
        }
    };
    let n = v.norm();
    if !(n > 1e-12) {
        return Err(Error::ZeroVector);
    }
    Ok(v / n)
}

/// `max |2 E E^T E - tr(E E^T) E| + |det E|` on the unit-norm representative.
pub fn essential_manifold_residual(m: &Matrix3<f64>) -> f64 {
    let e = m / m.norm();
    let eet = e * e.transpose();
    let c = eet * e * 2.0 - e * eet.trace();
    c.amax() + e.determinant().abs()
}

/// Normal form of an uncalibrated camera pair.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub b: SVector<f64, 7>,
    /// Maps homogeneous world points of the input frame to the normal frame.
    pub world_transform: Matrix4<f64>,
}

impl NormalForm {
    pub fn transform_point(&self, x: &Vector3<f64>) -> Result<Vector3<f64>> {
        let h: Vector4<f64> = self.world_transform * x.push(1.0);
        if h.w.abs() < DEPTH_EPS {
            return Err(Error::ProjectionUndefined { index: 0 });
        }
        Ok(Vector3::new(h.x / h.w, h.y / h.w, h.z / h.w))
    }
}

/// Bring `(A, B)` to `([I|0], M(b))` by a world transform and camera scales.
pub fn normal_form_uncalibrated(a: &Matrix3x4<f64>, b: &Matrix3x4<f64>) -> Result<NormalForm> {
    let mut h = Matrix4::zeros();
    h.fixed_view_mut::<3, 4>(0, 0).copy_from(a);
    h.fixed_view_mut::<1, 4>(3, 0).copy_from(&b.fixed_view::<1, 4>(2, 0));
    let scale = h.norm();
    if !(h.determinant().abs() > 1e-12 * scale.powi(4)) {
        return Err(Error::DegeneratePair("det [A; B(3,:)] vanishes"));
    }
    let g = h.try_inverse().ok_or(Error::DegeneratePair("det [A; B(3,:)] vanishes"))?;
    let c = b * g;
    let c11 = c[(0, 0)];
    if !(c11.abs() > 1e-12 * c.norm()) {
        return Err(Error::DegeneratePair("(1,1) entry of B g vanishes"));
    }
    let bv = SVector::<f64, 7>::from([
        c[(0, 1)] / c11,
        c[(0, 2)] / c11,
        c[(0, 3)],
        c[(1, 0)] / c11,
        c[(1, 1)] / c11,
        c[(1, 2)] / c11,
        c[(1, 3)],
    ]);
    let d = Matrix4::from_diagonal(&Vector4::new(c11, c11, c11, 1.0));
    Ok(NormalForm { b: bv, world_transform: d * h })
}

/// Symmetric 4x4 matrix of a quadric `(p;1)^T Q (p;1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadric {
    q: Matrix4<f64>,
}

impl Quadric {
    pub fn new(q: Matrix4<f64>) -> Result<Self> {
        let n = q.norm();
        if !(n > 0.0) {
            return Err(Error::ZeroVector);
        }
        if (q - q.transpose()).amax() > 1e-12 * n {
            return Err(Error::invalid("quadric matrix is not symmetric"));
        }
        Ok(Quadric { q: (q + q.transpose()) * 0.5 })
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.q
    }

    pub fn value(&self, p: &Vector3<f64>) -> f64 {
        let h = p.push(1.0);
        h.dot(&(self.q * h))
    }

    /// Same zero set expressed after the point map `p -> r p`.
    pub fn rotated(&self, r: &Matrix3<f64>) -> Quadric {
        let mut t = Matrix4::identity();
        t.fixed_view_mut::<3, 3>(0, 0).copy_from(&r.transpose());
        Quadric { q: t.transpose() * self.q * t }
    }
}

/// Random calibrated scene: points in `[-1,1]^2 x [2,6]`, every depth in the
/// second camera above 0.1 in absolute value.
pub fn random_essential_scene(seed: u64) -> EssentialScene {
    let mut r = rng(seed);
    loop {
        let rot = Rotation::random(&mut r);
        let t = UnitTranslation::random(&mut r);
        let pts: Vec<Vector3<f64>> = (0..5)
            .map(|_| Vector3::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(2.0..6.0)))
            .collect();
        if let Ok(s) = EssentialScene::new(rot, t, pts) {
            if (0..5).all(|i| s.second(i).z.abs() > 0.1) {
                return s;
            }
        }
    }
}

/// Random uncalibrated scene: entries of `b` in `[-1,1]`, points in
/// `[-1,1]^2 x [0.5,2]`.
pub fn random_fundamental_scene(seed: u64) -> FundamentalScene {
    let mut r = rng(seed);
    loop {
        let b = SVector::<f64, 7>::from_fn(|_, _| r.gen_range(-1.0..1.0));
        let pts: Vec<Vector3<f64>> = (0..7)
            .map(|_| Vector3::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(0.5..2.0)))
            .collect();
        if let Ok(s) = FundamentalScene::new(b, pts) {
            return s;
        }
    }
}

pub fn random_scene(problem: Problem, seed: u64) -> Scene {
    match problem {
        Problem::Essential => Scene::Essential(random_essential_scene(seed)),
        Problem::Fundamental => Scene::Fundamental(random_fundamental_scene(seed)),
    }
}
