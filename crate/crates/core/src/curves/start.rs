//! Start solutions for the essential curve system at a generic complex
//! parameter point, reused by every column through parameter homotopy.

use alloc::vec::Vec;
use rand::Rng as _;

use super::system::{EssentialCurveSystem, E_KEEP, E_PARAMS};
use crate::error::Result;
use crate::linalg::C64;
use crate::polysys::{solve_total_degree, square_up_preserving, track_parameter_path, Squared, TrackOptions};
use crate::rng::rng;

pub const E_SQUARE_SEED: u64 = 20_250_611;
pub const E_START_SEED: u64 = 1_234_567;
/// Number of complex solutions of the essential curve system for generic
/// parameters.
pub const E_SOLUTION_COUNT: usize = 30;

pub fn essential_squared() -> Squared<EssentialCurveSystem> {
    square_up_preserving(EssentialCurveSystem, &E_KEEP, E_SQUARE_SEED).expect("22 equations in 8 unknowns")
}

pub fn generic_params(seed: u64) -> Vec<C64> {
    let mut r = rng(seed);
    (0..E_PARAMS).map(|_| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect()
}

fn is_new(found: &[Vec<C64>], z: &[C64]) -> bool {
    found.iter().all(|o| o.iter().zip(z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) > 1e-6 * (1.0 + crate::curves::max_norm(z)))
}

/// Endpoints of `results` that solve the full 22-equation system, deduplicated.
pub fn collect_full(params: &[C64], ends: impl IntoIterator<Item = Vec<C64>>, found: &mut Vec<Vec<C64>>) {
    for z in ends {
        if EssentialCurveSystem::full_residual(&z, params) < 1e-9 && is_new(found, &z) {
            found.push(z);
        }
    }
}

/// Total-degree solve at `params`, then monodromy loops through two random
/// parameter points until `E_SOLUTION_COUNT` solutions are known or
/// `loops` loops pass without progress.
pub fn solve_start(params: &[C64], seed: u64, loops: usize) -> Result<Vec<Vec<C64>>> {
    let sys = essential_squared();
    let opts = TrackOptions::default();
    let mut found = Vec::new();
    let res = solve_total_degree(&sys, params, seed, &opts)?;
    collect_full(params, res.into_iter().filter(|r| r.is_converged()).map(|r| r.end_point), &mut found);
    let mut stale = 0;
    let mut k = 0;
    while found.len() < E_SOLUTION_COUNT && stale < loops {
        k += 1;
        let (p1, p2) = (generic_params(seed ^ (1000 + k)), generic_params(seed ^ (2000 + k)));
        let a = track_parameter_path(&sys, &found, params, &p1, 0.0, &opts)?;
        let a: Vec<Vec<C64>> = a.into_iter().filter(|r| r.is_converged()).map(|r| r.end_point).collect();
        let b = track_parameter_path(&sys, &a, &p1, &p2, 0.0, &opts)?;
        let b: Vec<Vec<C64>> = b.into_iter().filter(|r| r.is_converged()).map(|r| r.end_point).collect();
        let c = track_parameter_path(&sys, &b, &p2, params, 0.0, &opts)?;
        let before = found.len();
        collect_full(params, c.into_iter().filter(|r| r.is_converged()).map(|r| r.end_point), &mut found);
        stale = if found.len() > before { 0 } else { stale + 1 };
    }
    Ok(found)
}
