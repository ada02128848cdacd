//! Birefringent walk-off on the chip and the PM fibre that undoes it.

use pairsource::temporal::{residual_indistinguishability, transform_limited_coherence_time, WalkoffBudget, WalkoffSpec};
use pairsource::units::Length;
use pairsource::Result;

pub fn run() -> Result<()> {
    let tau_c = transform_limited_coherence_time(1554.44, 0.25);
    let spec = WalkoffSpec::fabricated(tau_c);
    let budget = WalkoffBudget::compute(&spec, None)?;
    budget
        .write_csv(std::io::stdout())
        .map_err(|source| pairsource::Error::Io { path: "stdout".into(), source })?;

    // a fibre cut a few cm off the ideal length
    for cm in [-20.0, -5.0, 5.0, 20.0] {
        let fiber = Length::from_m(budget.fiber_length.m() + cm / 100.0);
        let b = WalkoffBudget::compute(&spec, Some(fiber))?;
        println!(
            "fibre {:+5.0} cm: residual {:+.4} ps, coherence kept {:.5}",
            cm,
            b.residual_delay.ps(),
            residual_indistinguishability(b.residual_delay, tau_c)?
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    run()
}
