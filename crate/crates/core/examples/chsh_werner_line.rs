//! CHSH values along the Werner line and for a dephased singlet.

use pairsource::analysis::{chsh_fixed, chsh_optimal, fidelity, ChshAngles, DensityMatrix2Q};
use pairsource::pipeline::werner_line_chsh;
use pairsource::polarization::BellState;
use pairsource::Result;

pub fn run() -> Result<()> {
    let singlet = BellState::PsiMinus.vector();
    let angles = ChshAngles::default();
    println!("   p       F    S_fixed    S_opt");
    for p in [0.0, 1.0 / 3.0, 1.0 / 2.0_f64.sqrt(), 0.9, 1.0] {
        let rho = DensityMatrix2Q::werner(p)?;
        println!(
            "{p:.3}  {:.4}  {:8.4}  {:7.4}",
            fidelity(&rho, &singlet)?,
            chsh_fixed(&rho, &angles),
            chsh_optimal(&rho)
        );
    }
    for f in [0.973, 0.941] {
        println!("Werner-line S_opt at F={f}: {:.4}", werner_line_chsh(f)?);
    }

    // dephasing keeps the ZZ correlation, so it beats the Werner state at equal F
    let dephased = DensityMatrix2Q::from_pure(&singlet)?.dephased(0.946)?;
    println!(
        "dephased singlet: F={:.4} S_opt={:.4}",
        fidelity(&dephased, &singlet)?,
        chsh_optimal(&dephased)
    );
    Ok(())
}

fn main() -> Result<()> {
    run()
}
