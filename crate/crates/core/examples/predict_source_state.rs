//! Predicted polarization state of the source from its configuration,
//! pulsed with filters, pulsed without, and CW.

use pairsource::pipeline::{cw_variant, predict_state, SourceConfig};
use pairsource::Result;

pub fn run() -> Result<()> {
    let pulsed = SourceConfig::paper_pulsed();
    let mut bare = pulsed.clone();
    bare.filters = None;
    for (label, cfg) in [("pulsed, filtered", pulsed.clone()), ("pulsed, bare", bare), ("cw", cw_variant(&pulsed))] {
        let p = predict_state(&cfg)?;
        println!(
            "{label:<17} exchange {:.4} inter-wg {:.4} temporal {:.4} -> F {:.4}  S {:.3}  success {:.4}",
            p.factors.exchange_overlap,
            p.factors.inter_waveguide_overlap,
            p.factors.temporal,
            p.target_fidelity(),
            p.metrics.chsh_fixed,
            p.success_probability(),
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    run()
}
