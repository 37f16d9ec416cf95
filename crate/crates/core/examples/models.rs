//! The two built-in system-bath models and their coupling presets.

use meanforce::model::{build_model, CouplingRegime, ModelKind, ModelParams};
use meanforce::operator::herm_eig;

fn main() -> meanforce::Result<()> {
    for kind in [ModelKind::TwoQubit, ModelKind::JaynesCummings] {
        println!("== {kind}");
        for regime in CouplingRegime::ALL {
            let params = ModelParams::defaults(kind).with_n_fock(20).with_regime(regime);
            let model = build_model(&params)?;
            let eig = herm_eig(model.h_total())?;
            let low: Vec<String> = eig.eigenvalues()[..6]
                .iter()
                .map(|e| format!("{e:+.4}"))
                .collect();
            println!(
                "{regime:>8}: lambda = {:<7} dims = {:?}  |V| = {:.3}  lowest levels {}",
                params.lambda,
                model.dims(),
                model.coupling().frobenius_norm(),
                low.join(" ")
            );
        }
    }

    // Decoupled JC: the spectrum is the grid ±ω₀/2 + n ω_c.
    let free = build_model(
        &ModelParams::defaults(ModelKind::JaynesCummings)
            .with_n_fock(3)
            .with_lambda(0.0),
    )?;
    println!(
        "decoupled JC levels: {:?}",
        herm_eig(free.h_total())?.eigenvalues()
    );
    Ok(())
}
