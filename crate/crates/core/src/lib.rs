//! Numerics for the 5-point (essential) and 7-point (fundamental) relative
//! pose problems: forward Jacobians and condition numbers, ill-posed world
//! scenes, minimal solvers, homotopy continuation, degenerate image curves
//! and a synthetic benchmark harness.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bench;
pub mod condition;
pub mod curves;
pub mod error;
pub mod geometry;
pub mod illposed;
pub mod linalg;
pub mod polysys;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use geometry::{
    Correspondence, EpipolarModel, EssentialScene, FundamentalScene, ImageData, Problem, Quadric,
    Rotation, Scene, UnitTranslation,
};
