//! Simulated two-qubit tomography of a Werner state: Poisson counts,
//! linear inversion, maximum likelihood and bootstrap error bars.

use pairsource::analysis::{
    chsh_fixed, error_bars, fidelity, log_likelihood, simulate_counts, standard_settings, tomography_linear,
    tomography_mle, ChshAngles, DensityMatrix2Q, Estimator,
};
use pairsource::polarization::BellState;
use pairsource::Result;

pub fn run() -> Result<()> {
    let truth = DensityMatrix2Q::werner(0.964)?;
    let singlet = BellState::PsiMinus.vector();
    let records = simulate_counts(&truth, &standard_settings(), 1e5, 11)?;

    let lin = tomography_linear(&records)?;
    let mle = tomography_mle(&records, &lin.rho, 1e-10, 5000)?;
    println!("true F          {:.4}", fidelity(&truth, &singlet)?);
    println!("linear F        {:.4}  logL {:.2}", fidelity(&lin.rho, &singlet)?, log_likelihood(&lin.rho, &records)?);
    println!(
        "MLE F           {:.4}  logL {:.2}  ({} iterations)",
        fidelity(&mle.rho, &singlet)?,
        mle.log_likelihood,
        mle.iterations
    );
    println!("MLE eigenvalues {:?}", mle.rho.eigenvalues());

    let angles = ChshAngles::default();
    let bars = error_bars(&records, Estimator::default(), &singlet, &angles, 100, 5)?;
    println!(
        "F = {:.4} ± {:.4}, S = {:.3} ± {:.3}",
        fidelity(&mle.rho, &singlet)?,
        bars.fidelity_sd,
        chsh_fixed(&mle.rho, &angles),
        bars.chsh_sd
    );
    Ok(())
}

fn main() -> Result<()> {
    run()
}
