//! Pair state behind the polarizing coupler and its Bell-state content,
//! for the ideal and the fabricated splitter at both pump phases.

use std::f64::consts::PI;

use pairsource::polarization::{
    bell_projection_probability, output_state, postselect_coincidence, BellState, PumpConfig, SplitterParams,
};
use pairsource::Result;

pub fn run() -> Result<()> {
    for (label, splitter) in [("ideal", SplitterParams::ideal()), ("fabricated", SplitterParams::fabricated())] {
        for phase in [0.0, PI] {
            let pump = PumpConfig::cw(777.22).with_phase(phase);
            let pair = output_state(&pump, &splitter)?;
            let target = BellState::target_for_phase(phase);
            let coinc = postselect_coincidence(&pair)?;
            println!(
                "{label:<10} phi={phase:.3}  P({target:?})={:.4}  bunching={:.4}  coincidence F={:.6}",
                bell_projection_probability(&pair, target),
                pair.bunching_probability(),
                coinc.bell_fidelity(target),
            );
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run()
}
