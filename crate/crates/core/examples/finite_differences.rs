//! Central differences with Richardson extrapolation, checked against the
//! analytic β-derivatives of the mean-force jet.

use meanforce::fd::{central, richardson, StepPolicy};
use meanforce::mean_force::{MeanForceSolver, ThermalContext};
use meanforce::model::{build_model, CouplingRegime, ModelKind, ModelParams};
use meanforce::observables::effective_energy_fd;

fn main() -> meanforce::Result<()> {
    let f = |x: f64| Ok(x.sin());
    println!("{:>8} {:>12} {:>12}", "h", "central", "richardson");
    for h in [1e-1, 1e-2, 1e-3] {
        let c = central(f, 1.0, h)? - 1f64.cos();
        let r = richardson(f, 1.0, h)? - 1f64.cos();
        println!("{h:>8} {c:>12.3e} {r:>12.3e}");
    }

    let model = build_model(
        &ModelParams::defaults(ModelKind::TwoQubit)
            .with_n_fock(40)
            .with_regime(CouplingRegime::Strong),
    )?;
    let solver = MeanForceSolver::new(&model)?;
    let beta = 1.0;
    let u = |b: f64| Ok(solver.jet(b)?.internal_energy());
    let du = StepPolicy::new(1e-3).with_richardson(true).derivative(u, beta)?;
    println!("dU/dbeta by Richardson: {du:+.10}");

    let ctx = ThermalContext::new(beta)?;
    let est = effective_energy_fd(&solver, &ctx)?;
    let analytic = solver.jet(beta)?.effective_energy();
    println!(
        "E*_S: step-halving change {:.2e}, gap to analytic {:.2e}",
        est.relative_change,
        est.halved.max_abs_diff(&analytic) / analytic.max_abs()
    );
    Ok(())
}
