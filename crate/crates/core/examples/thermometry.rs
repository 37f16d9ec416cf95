//! Quantum Fisher information, the uncertainty split and the thermodynamic
//! uncertainty bound across a temperature range.

use meanforce::mean_force::{MeanForceSolver, ThermalContext};
use meanforce::model::{build_model, CouplingRegime, ModelKind, ModelParams};
use meanforce::observables::{qfi, qfi_fd, thermal_point, Parameterization};

fn main() -> meanforce::Result<()> {
    for regime in [CouplingRegime::Weak, CouplingRegime::Strong] {
        let model = build_model(
            &ModelParams::defaults(ModelKind::TwoQubit)
                .with_n_fock(30)
                .with_regime(regime),
        )?;
        let solver = MeanForceSolver::new(&model)?;
        println!("two-qubit, {regime} coupling");
        println!(
            "{:>6} {:>12} {:>12} {:>12} {:>12} {:>12}",
            "T", "F(beta)", "K", "Q", "T^2 F(T)", "bound"
        );
        for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let p = thermal_point(&solver, &ThermalContext::from_temperature(t)?)?;
            println!(
                "{t:>6} {:>12.6e} {:>12.6e} {:>12.3e} {:>12.6e} {:>12.6e}",
                p.qfi_beta, p.classical_uncertainty, p.quantum_uncertainty, p.snr_opt, p.snr_bound
            );
        }
    }

    // The analytic spectral formula against a difference quotient of the fidelity.
    let model =
        build_model(&ModelParams::defaults(ModelKind::JaynesCummings).with_regime(CouplingRegime::Strong))?;
    let solver = MeanForceSolver::new(&model)?;
    let ctx = ThermalContext::from_temperature(0.7)?;
    let exact = qfi(&solver, Parameterization::Temperature, &ctx)?;
    let approx = qfi_fd(&solver, Parameterization::Temperature, &ctx)?;
    println!("JC strong, T = 0.7: F(T) = {exact:.10} (finite differences {approx:.10})");
    Ok(())
}
