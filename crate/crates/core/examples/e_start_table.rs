//! Prints the start-solution table for the essential curve system.

use posecond_core::curves::start::{generic_params, solve_start, E_START_SEED};

fn main() {
    let params = generic_params(E_START_SEED);
    let sols = solve_start(&params, E_START_SEED, 20).expect("start solve");
    eprintln!("{} solutions", sols.len());
    let c = |v: &posecond_core::linalg::C64| format!("({:e}, {:e})", v.re, v.im);
    println!("//! Generated by `cargo run --release -p posecond-core --example e_start_table`.\n");
    println!("pub(super) const SOLUTIONS: [[(f64, f64); 8]; {}] = [", sols.len());
    for s in &sols {
        println!("    [{}],", s.iter().map(c).collect::<Vec<_>>().join(", "));
    }
    println!("];");
}
