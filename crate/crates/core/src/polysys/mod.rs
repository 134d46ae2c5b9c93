//! Square and overdetermined polynomial systems over the complex numbers,
//! solved by total-degree and parameter homotopy continuation.

mod jet;
mod track;

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng as _;

pub use jet::{Jet, Scalar};
pub use track::{
    filter_real, solve_total_degree, track_parameter_path, track_path, Homotopy, ParameterHomotopy, PathResult,
    PathStatus, TotalDegreeHomotopy, TrackOptions,
};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::rng::rng;

/// Largest variable count handled by the exact-derivative evaluator.
pub const MAX_VARS: usize = 11;

/// A family of polynomial equations in `n_vars` unknowns and `n_params`
/// parameters. `eval` must be written against [`Scalar`] so derivatives come
/// out of forward-mode evaluation.
pub trait System: Sync {
    fn n_vars(&self) -> usize;
    fn n_eqs(&self) -> usize;
    fn n_params(&self) -> usize {
        0
    }
    /// Total degree of each equation in the unknowns.
    fn degrees(&self) -> Vec<u32>;
    /// Magnitude of the coefficients, used to scale residual tolerances.
    fn coefficient_scale(&self) -> f64 {
        1.0
    }
    fn eval<S: Scalar>(&self, z: &[S], p: &[S], out: &mut [S]);
}

/// One term `c * prod x_i^e_i` over unknowns followed by parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub exps: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<Term>,
}

impl Polynomial {
    pub fn new(terms: Vec<Term>) -> Self {
        Polynomial { terms }
    }

    /// Terms given as `(real coefficient, exponents)`.
    pub fn real(terms: &[(f64, &[u16])]) -> Self {
        Polynomial {
            terms: terms.iter().map(|(c, e)| Term { coeff: C64::new(*c, 0.0), exps: e.to_vec() }).collect(),
        }
    }
}

/// Sparse monomial system.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    n_vars: usize,
    n_params: usize,
    equations: Vec<Polynomial>,
    degrees: Vec<u32>,
    scale: f64,
}

impl PolySystem {
    pub fn new(n_vars: usize, n_params: usize, equations: Vec<Polynomial>) -> Result<Self> {
        for eq in &equations {
            if eq.terms.iter().any(|t| t.exps.len() != n_vars + n_params) {
                return Err(Error::invalid("term references undeclared variables"));
            }
        }
        let degrees = equations
            .iter()
            .map(|eq| eq.terms.iter().map(|t| t.exps[..n_vars].iter().map(|&e| e as u32).sum()).max().unwrap_or(0))
            .collect();
        let scale = equations
            .iter()
            .flat_map(|e| e.terms.iter().map(|t| t.coeff.norm()))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        Ok(PolySystem { n_vars, n_params, equations, degrees, scale })
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }
}

impl System for PolySystem {
    fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn n_eqs(&self) -> usize {
        self.equations.len()
    }

    fn n_params(&self) -> usize {
        self.n_params
    }

    fn degrees(&self) -> Vec<u32> {
        self.degrees.clone()
    }

    fn coefficient_scale(&self) -> f64 {
        self.scale
    }

    fn eval<S: Scalar>(&self, z: &[S], p: &[S], out: &mut [S]) {
        for (o, eq) in out.iter_mut().zip(&self.equations) {
            let mut acc = S::zero();
            for t in &eq.terms {
                let mut m = S::cst(t.coeff);
                for (k, &e) in t.exps.iter().enumerate() {
                    if e > 0 {
                        let base = if k < self.n_vars { z[k] } else { p[k - self.n_vars] };
                        m = m * base.powi(e as u32);
                    }
                }
                acc = acc + m;
            }
            *o = acc;
        }
    }
}

/// Jet width for systems with `n` unknowns plus one extra direction.
macro_rules! with_jet_width {
    ($n:expr, $N:ident, $body:expr) => {
        match $n {
            0..=3 => {
                const $N: usize = 4;
                $body
            }
            4..=5 => {
                const $N: usize = 6;
                $body
            }
            6..=8 => {
                const $N: usize = 9;
                $body
            }
            _ => {
                const $N: usize = 12;
                $body
            }
        }
    };
}
pub(crate) use with_jet_width;

/// Values and Jacobian with respect to the unknowns, plus the derivative
/// along the parameter direction `dp` when given.
pub(crate) fn eval_jet<Sys: System, const N: usize>(
    sys: &Sys,
    z: &[C64],
    p: &[C64],
    dp: Option<&[C64]>,
) -> (DVector<C64>, DMatrix<C64>, DVector<C64>) {
    let n = sys.n_vars();
    let zj: Vec<Jet<N>> = z.iter().enumerate().map(|(i, &v)| Jet::var(v, i)).collect();
    let pj: Vec<Jet<N>> = p
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut j = Jet::constant(v);
            if let Some(d) = dp {
                j.d[n] = d[i];
            }
            j
        })
        .collect();
    let m = sys.n_eqs();
    let mut out = vec![Jet::<N>::constant(C64::new(0.0, 0.0)); m];
    sys.eval(&zj, &pj, &mut out);
    let f = DVector::from_fn(m, |i, _| out[i].v);
    let jac = DMatrix::from_fn(m, n, |i, j| out[i].d[j]);
    let fs = DVector::from_fn(m, |i, _| out[i].d[n]);
    (f, jac, fs)
}

fn check_dims<Sys: System>(sys: &Sys, z: &[C64], p: &[C64]) -> Result<()> {
    if z.len() != sys.n_vars() || p.len() != sys.n_params() {
        return Err(Error::invalid("point or parameter dimension mismatch"));
    }
    if sys.n_vars() > MAX_VARS {
        return Err(Error::invalid("too many unknowns for the derivative evaluator"));
    }
    Ok(())
}

pub fn evaluate_and_jacobian<Sys: System>(sys: &Sys, z: &[C64], p: &[C64]) -> Result<(DVector<C64>, DMatrix<C64>)> {
    check_dims(sys, z, p)?;
    let (f, j, _) = with_jet_width!(sys.n_vars(), N, eval_jet::<Sys, N>(sys, z, p, None));
    Ok((f, j))
}

/// Random complex combinations of the equations not listed in `keep`,
/// appended after the kept equations so the result is square.
#[derive(Debug, Clone)]
pub struct Squared<Sys> {
    inner: Sys,
    keep: Vec<usize>,
    mixed: Vec<usize>,
    lambda: DMatrix<C64>,
}

impl<Sys: System> Squared<Sys> {
    pub fn inner(&self) -> &Sys {
        &self.inner
    }
}

pub fn square_up<Sys: System>(sys: Sys, seed: u64) -> Result<Squared<Sys>> {
    square_up_preserving(sys, &[], seed)
}

/// Square up an overdetermined system, keeping the equations in `keep`
/// verbatim (typically the low-degree ones, to reduce the path count).
pub fn square_up_preserving<Sys: System>(sys: Sys, keep: &[usize], seed: u64) -> Result<Squared<Sys>> {
    let (m, n) = (sys.n_eqs(), sys.n_vars());
    if m < n || keep.len() > n || keep.iter().any(|&k| k >= m) {
        return Err(Error::invalid("cannot square up: too few equations or bad keep list"));
    }
    let mixed: Vec<usize> = (0..m).filter(|i| !keep.contains(i)).collect();
    let rows = n - keep.len();
    let lambda = if m == n {
        DMatrix::identity(rows, mixed.len())
    } else {
        let mut r = rng(seed);
        DMatrix::from_fn(rows, mixed.len(), |_, _| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
    };
    Ok(Squared { inner: sys, keep: keep.to_vec(), mixed, lambda })
}

impl<Sys: System> System for Squared<Sys> {
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    fn n_eqs(&self) -> usize {
        self.inner.n_vars()
    }

    fn n_params(&self) -> usize {
        self.inner.n_params()
    }

    fn degrees(&self) -> Vec<u32> {
        let d = self.inner.degrees();
        let dmix = self.mixed.iter().map(|&i| d[i]).max().unwrap_or(0);
        self.keep.iter().map(|&i| d[i]).chain(core::iter::repeat(dmix).take(self.lambda.nrows())).collect()
    }

    fn coefficient_scale(&self) -> f64 {
        self.inner.coefficient_scale()
    }

    fn eval<S: Scalar>(&self, z: &[S], p: &[S], out: &mut [S]) {
        let mut full = vec![S::zero(); self.inner.n_eqs()];
        self.inner.eval(z, p, &mut full);
        for (o, &k) in out.iter_mut().zip(&self.keep) {
            *o = full[k];
        }
        for r in 0..self.lambda.nrows() {
            let mut acc = S::zero();
            for (c, &i) in self.mixed.iter().enumerate() {
                acc = acc + full[i].scale(self.lambda[(r, c)]);
            }
            out[self.keep.len() + r] = acc;
        }
    }
}

/// Residual norm of the system at a point.
pub fn residual<Sys: System>(sys: &Sys, z: &[C64], p: &[C64]) -> f64 {
    let mut out = vec![C64::new(0.0, 0.0); sys.n_eqs()];
    sys.eval(z, p, &mut out);
    out.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Tolerance scale for residuals at `z`: coefficient size times the largest
/// monomial magnitude.
pub fn residual_scale<Sys: System>(sys: &Sys, z: &[C64]) -> f64 {
    let dmax = sys.degrees().into_iter().max().unwrap_or(0) as i32;
    let zmax = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    sys.coefficient_scale() * (1.0 + zmax).powi(dmax)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn univariate_example() {
        let sys = PolySystem::new(1, 0, alloc::vec![Polynomial::real(&[(1.0, &[2]), (-1.0, &[0])])]).unwrap();
        let (f, j) = evaluate_and_jacobian(&sys, &[c(1.0)], &[]).unwrap();
        assert_eq!(f[0], c(0.0));
        assert_eq!(j[(0, 0)], c(2.0));
        assert!(evaluate_and_jacobian(&sys, &[c(1.0), c(2.0)], &[]).is_err());
        assert_eq!(sys.degrees(), alloc::vec![2]);
    }

    #[test]
    fn empty_system() {
        let sys = PolySystem::new(2, 0, Vec::new()).unwrap();
        let (f, j) = evaluate_and_jacobian(&sys, &[c(1.0), c(2.0)], &[]).unwrap();
        assert_eq!(f.len(), 0);
        assert_eq!(j.shape(), (0, 2));
    }

    #[test]
    fn undeclared_variable_rejected() {
        assert!(PolySystem::new(1, 0, alloc::vec![Polynomial::real(&[(1.0, &[1, 1])])]).is_err());
    }

    pub fn random_system(seed: u64, n: usize, deg: u16, n_params: usize) -> PolySystem {
        let mut r = rng(seed);
        let mut eqs = Vec::new();
        for _ in 0..n {
            let mut terms = Vec::new();
            // All monomials of total degree <= deg in the unknowns.
            let mut e = vec![0u16; n];
            loop {
                let total: u16 = e.iter().sum();
                if total <= deg {
                    let mut ex = e.clone();
                    ex.extend(core::iter::repeat(0).take(n_params));
                    terms.push(Term { coeff: C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)), exps: ex.clone() });
                    // Constant and linear terms also depend linearly on each parameter.
                    if total <= 1 {
                        for k in 0..n_params {
                            let mut ep = ex.clone();
                            ep[n + k] = 1;
                            terms.push(Term { coeff: C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)), exps: ep });
                        }
                    }
                }
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    e[i] += 1;
                    if e[i] > deg {
                        e[i] = 0;
                        i += 1;
                    } else {
                        break;
                    }
                }
                if i == n {
                    break;
                }
            }
            eqs.push(Polynomial::new(terms));
        }
        PolySystem::new(n, n_params, eqs).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn jacobian_matches_central_differences(seed in 0u64..1000, re in proptest::collection::vec(-1.0f64..1.0, 6)) {
            let sys = random_system(seed, 3, 3, 1);
            let z: Vec<C64> = (0..3).map(|i| C64::new(re[i], re[i + 3])).collect();
            let p = [C64::new(0.3, -0.2)];
            let (_, j) = evaluate_and_jacobian(&sys, &z, &p).unwrap();
            let h = 1e-6;
            for k in 0..3 {
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp[k] += h;
                zm[k] -= h;
                let (fp, _) = evaluate_and_jacobian(&sys, &zp, &p).unwrap();
                let (fm, _) = evaluate_and_jacobian(&sys, &zm, &p).unwrap();
                let fd = (fp - fm) / C64::new(2.0 * h, 0.0);
                let err = (fd - j.column(k)).norm();
                prop_assert!(err <= 1e-6 * j.column(k).norm().max(1.0));
            }
        }

        #[test]
        fn squared_system_keeps_original_solutions(seed in 0u64..1000) {
            // Overdetermined system with a known common root at (1, -2).
            let sys = PolySystem::new(2, 0, alloc::vec![
                Polynomial::real(&[(1.0, &[1, 0]), (-1.0, &[0, 0])]),
                Polynomial::real(&[(1.0, &[0, 1]), (2.0, &[0, 0])]),
                Polynomial::real(&[(1.0, &[1, 1]), (2.0, &[0, 0])]),
                Polynomial::real(&[(1.0, &[2, 0]), (1.0, &[0, 1]), (1.0, &[0, 0])]),
            ]).unwrap();
            let sq = square_up(sys, seed).unwrap();
            prop_assert_eq!(sq.n_eqs(), 2);
            prop_assert!(residual(&sq, &[c(1.0), c(-2.0)], &[]) < 1e-14);
        }
    }

    #[test]
    fn square_system_is_unchanged() {
        let sys = random_system(4, 2, 2, 0);
        let sq = square_up(sys.clone(), 1).unwrap();
        let z = [C64::new(0.3, 0.1), C64::new(-0.7, 0.4)];
        let (a, _) = evaluate_and_jacobian(&sys, &z, &[]).unwrap();
        let (b, _) = evaluate_and_jacobian(&sq, &z, &[]).unwrap();
        assert_eq!(a, b);
        assert_eq!(sq.degrees(), sys.degrees());
    }

    #[test]
    fn preserving_keeps_listed_equations() {
        let sys = PolySystem::new(2, 0, alloc::vec![
            Polynomial::real(&[(1.0, &[3, 0]), (-1.0, &[0, 0])]),
            Polynomial::real(&[(1.0, &[0, 1]), (2.0, &[0, 0])]),
            Polynomial::real(&[(1.0, &[1, 2]), (2.0, &[0, 0])]),
        ])
        .unwrap();
        let sq = square_up_preserving(sys, &[1], 3).unwrap();
        assert_eq!(sq.degrees(), alloc::vec![1, 3]);
        let mut out = [c(0.0); 2];
        sq.eval(&[c(0.5), c(0.25)], &[], &mut out);
        assert_eq!(out[0], c(2.25));
    }
}
