//! SHG tuning curves of the two waveguides, refitted, and their overlap.

use pairsource::spectral::{curve_overlap, shg_curve, wavelength_axis, OverlapMetric, PhaseMatchingSpec};
use pairsource::Result;

pub fn run() -> Result<()> {
    let axis = wavelength_axis(1554.44, 3.0, 2001);
    let wg1 = shg_curve(&PhaseMatchingSpec::new(1554.44, 0.306, -33.5)?, &axis)?;
    let wg2 = shg_curve(&PhaseMatchingSpec::new(1554.44, 0.359, -33.5)?, &axis)?;
    for (name, c) in [("wg1", &wg1), ("wg2", &wg2)] {
        println!("{name}: centre {:.4} nm, FWHM {:.4} nm", c.fitted_center, c.fitted_fwhm);
    }
    println!(
        "overlap: amplitude {:.4}, intensity {:.4}",
        curve_overlap(&wg1, &wg2, OverlapMetric::Amplitude)?,
        curve_overlap(&wg1, &wg2, OverlapMetric::Intensity)?
    );

    // detuning one waveguide by a linewidth
    let shifted = shg_curve(&PhaseMatchingSpec::new(1554.74, 0.359, -33.5)?, &axis)?;
    println!("wg2 detuned by 0.3 nm: amplitude overlap {:.4}", curve_overlap(&wg1, &shifted, OverlapMetric::Amplitude)?);
    Ok(())
}

fn main() -> Result<()> {
    run()
}
