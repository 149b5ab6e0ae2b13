//! Monte Carlo blocks on the rayon pool, merged in block order so the result
//! matches the sequential simulators bit for bit.

use anyhow::Result;
use rayon::prelude::*;
use ruin_core::verify::mc::{PenaltySimulator, RuinSimulator};
use ruin_core::verify::{SimConfig, SimResult, Tally};
use ruin_core::{PenaltyFunction, RuinSolution};

fn merged<F>(n_blocks: u64, block: F) -> Result<SimResult>
where
    F: Fn(u64) -> ruin_core::Result<Tally> + Sync,
{
    let tallies = (0..n_blocks).into_par_iter().map(&block).collect::<ruin_core::Result<Vec<_>>>()?;
    let mut total = Tally::default();
    for t in &tallies {
        total.merge(t);
    }
    Ok(total.finish())
}

pub fn simulate_ruin(cfg: &SimConfig, sol: &RuinSolution, b: f64) -> Result<SimResult> {
    let sim = RuinSimulator::new(*cfg, sol, b)?;
    merged(cfg.n_blocks(), |i| sim.block(i))
}

pub fn simulate_penalty(cfg: &SimConfig, sol: &RuinSolution, f: &PenaltyFunction) -> Result<SimResult> {
    let sim = PenaltySimulator::new(*cfg, sol, f)?;
    merged(cfg.n_blocks(), |i| sim.block(i))
}
