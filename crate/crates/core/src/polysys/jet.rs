//! Forward-mode complex scalars for exact Jacobians of structured systems.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::linalg::C64;

/// Arithmetic shared by plain complex numbers and [`Jet`]s.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + Send + Sync
{
    fn cst(c: C64) -> Self;
    fn value(&self) -> C64;
    fn scale(self, c: C64) -> Self;

    fn zero() -> Self {
        Self::cst(C64::new(0.0, 0.0))
    }

    fn real(x: f64) -> Self {
        Self::cst(C64::new(x, 0.0))
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::real(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Scalar for C64 {
    fn cst(c: C64) -> Self {
        c
    }

    fn value(&self) -> C64 {
        *self
    }

    fn scale(self, c: C64) -> Self {
        self * c
    }
}

/// Value with `N` directional derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const N: usize> {
    pub v: C64,
    pub d: [C64; N],
}

impl<const N: usize> Jet<N> {
    pub fn constant(v: C64) -> Self {
        Jet { v, d: [C64::new(0.0, 0.0); N] }
    }

    /// Independent variable in slot `i`.
    pub fn var(v: C64, i: usize) -> Self {
        let mut j = Self::constant(v);
        j.d[i] = C64::new(1.0, 0.0);
        j
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet { v: self.v + o.v, d: core::array::from_fn(|i| self.d[i] + o.d[i]) }
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Jet { v: self.v - o.v, d: core::array::from_fn(|i| self.d[i] - o.d[i]) }
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Jet { v: self.v * o.v, d: core::array::from_fn(|i| self.d[i] * o.v + self.v * o.d[i]) }
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = C64::new(1.0, 0.0) / o.v;
        let v = self.v * inv;
        Jet { v, d: core::array::from_fn(|i| (self.d[i] - v * o.d[i]) * inv) }
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet { v: -self.v, d: core::array::from_fn(|i| -self.d[i]) }
    }
}

impl<const N: usize> Scalar for Jet<N> {
    fn cst(c: C64) -> Self {
        Jet::constant(c)
    }

    fn value(&self) -> C64 {
        self.v
    }

    fn scale(self, c: C64) -> Self {
        Jet { v: self.v * c, d: core::array::from_fn(|i| self.d[i] * c) }
    }
}
