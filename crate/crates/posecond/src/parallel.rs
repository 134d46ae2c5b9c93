//! Rayon versions of the experiment drivers and of curve sweeps. Instances
//! and column chunks are independent and results are gathered in index
//! order, so output does not depend on the thread count.

use posecond_core::bench::{
    aggregate_curve_stability, aggregate_distances, aggregate_revelation, curve_stability_instance,
    distance_instance, revelation_instance, CurveParams, CurveStabilityReport, DistanceReport, RevelationTable,
    StabilityParams, SyntheticConfig,
};
use posecond_core::curves::{assemble, curve_sweep_columns, CurveQuery, CurveSweep};
use posecond_core::error::Result;
use posecond_core::geometry::Problem;
use rayon::prelude::*;

/// Columns per independently solved chunk of a sweep.
pub const SWEEP_CHUNK: usize = 50;

pub fn revelation(problem: Problem, cfg: &SyntheticConfig, sigmas: &[f64], taus: &[f64]) -> RevelationTable {
    let outcomes: Vec<_> =
        (0..cfg.instances as u64).into_par_iter().map(|i| revelation_instance(problem, cfg, sigmas, i)).collect();
    aggregate_revelation(sigmas, taus, &outcomes)
}

pub fn distance_stats(problem: Problem, cfg: &SyntheticConfig, stab: &StabilityParams, curve: &CurveParams) -> DistanceReport {
    let records: Vec<_> =
        (0..cfg.instances as u64).into_par_iter().map(|i| distance_instance(problem, cfg, stab, curve, i)).collect();
    aggregate_distances(&records, curve)
}

pub fn curve_stability(problem: Problem, cfg: &SyntheticConfig, sigma: f64, curve: &CurveParams) -> CurveStabilityReport {
    let records: Vec<_> = (0..cfg.instances as u64)
        .into_par_iter()
        .map(|i| curve_stability_instance(problem, cfg, sigma, curve, i))
        .collect();
    aggregate_curve_stability(&records, curve)
}

/// Sweep of `columns`, solved in chunks of [`SWEEP_CHUNK`] that each start
/// fresh and continue within the chunk.
pub fn sweep_columns(query: &CurveQuery, columns: &[f64]) -> Result<CurveSweep> {
    let chunks: Vec<_> = columns.par_chunks(SWEEP_CHUNK).map(|c| curve_sweep_columns(query, c)).collect();
    let mut all = Vec::with_capacity(columns.len());
    for c in chunks {
        all.extend(c?);
    }
    Ok(assemble(all, query.window.jump_cap))
}

pub fn sweep(query: &CurveQuery) -> Result<CurveSweep> {
    sweep_columns(query, &query.window.columns())
}

#[cfg(test)]
mod tests {
    use super::*;
    use posecond_core::bench::{run_revelation, solvable_instance};

    fn pool(n: usize) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
    }

    #[test]
    fn parallel_revelation_matches_sequential() {
        let cfg = SyntheticConfig { instances: 12, seed: 4, ..Default::default() };
        let seq = run_revelation(Problem::Fundamental, &cfg, &[0.0, 0.5], &[0.5]);
        for n in [1, 3] {
            let par = pool(n).install(|| revelation(Problem::Fundamental, &cfg, &[0.0, 0.5], &[0.5]));
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn chunked_sweep_matches_sequential_roots() {
        let cfg = SyntheticConfig::default();
        let (inst, _, _) = solvable_instance(Problem::Fundamental, &SyntheticConfig { seed: 5, ..cfg }, 0).unwrap();
        let mut q = inst.curve_query(&inst.pixels, &cfg, 2.0, 0.0);
        q.window.u_min = 100.0;
        q.window.u_max = 330.0;
        let a = posecond_core::curves::curve_sweep(&q).unwrap();
        let b = pool(2).install(|| sweep(&q)).unwrap();
        assert_eq!(a.slices.len(), b.slices.len());
        for (x, y) in a.slices.iter().zip(&b.slices) {
            assert_eq!(x.roots.len(), y.roots.len(), "u {}", x.u);
            for (r, s) in x.roots.iter().zip(&y.roots) {
                assert!((r - s).abs() < 1e-6);
            }
        }
    }
}
