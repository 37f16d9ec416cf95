//! Entropy production after a joint unitary evolution from a product state.

use meanforce::model::{build_model, CouplingRegime, ModelKind, ModelParams};
use meanforce::work::{bell_state, plus_state, Propagator};

fn main() -> meanforce::Result<()> {
    let runs = [
        (ModelKind::TwoQubit, bell_state(), 1.0),
        (ModelKind::JaynesCummings, plus_state(), 0.5),
    ];
    for (kind, state, time) in runs {
        println!("== {kind}, t = {time}");
        println!("{:>5} {:>14} {:>14} {:>14}", "T", "weak", "moderate", "strong");
        let propagators = CouplingRegime::ALL
            .iter()
            .map(|&r| {
                Propagator::new(
                    &build_model(&ModelParams::defaults(kind).with_n_fock(30).with_regime(r))?,
                    time,
                )
            })
            .collect::<meanforce::Result<Vec<_>>>()?;
        for t in [0.5, 1.0, 2.0, 3.0, 5.0] {
            let sigma = propagators
                .iter()
                .map(|p| Ok(p.entropy_production(&state, 1.0 / t)?.sigma))
                .collect::<meanforce::Result<Vec<f64>>>()?;
            println!(
                "{t:>5} {:>14.6e} {:>14.6e} {:>14.6e}",
                sigma[0], sigma[1], sigma[2]
            );
        }
    }

    // Both routes for one point: S(ρ_SB‖ρ_S⊗ρ_B(0)) and I(S:B) + S(ρ_B‖ρ_B(0)).
    let model = build_model(
        &ModelParams::defaults(ModelKind::TwoQubit)
            .with_n_fock(30)
            .with_regime(CouplingRegime::Strong),
    )?;
    let snap = Propagator::new(&model, 1.0)?.entropy_production(&bell_state(), 1.0)?;
    println!(
        "two-qubit strong, T = 1: Sigma = {:.10}, I + D_B = {:.10}, I = {:.10}",
        snap.sigma, snap.sigma_from_mutual_info, snap.mutual_info
    );
    Ok(())
}
