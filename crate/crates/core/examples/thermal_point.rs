//! Every thermodynamic quantity at one temperature, with its consistency checks.

use meanforce::mean_force::{MeanForceSolver, ThermalContext};
use meanforce::model::{build_model, CouplingRegime, ModelKind, ModelParams};
use meanforce::observables::{heat_capacity, thermal_point};

fn main() -> meanforce::Result<()> {
    let temperature: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.5);
    let model =
        build_model(&ModelParams::defaults(ModelKind::JaynesCummings).with_regime(CouplingRegime::Strong))?;
    let solver = MeanForceSolver::new(&model)?;
    let ctx = ThermalContext::from_temperature(temperature)?;
    let p = thermal_point(&solver, &ctx)?;

    println!("JC, strong coupling, T = {temperature}");
    println!(
        "U_S        {:+.8}  (partition route {:+.8})",
        p.internal_energy, p.internal_energy_partition
    );
    println!("Delta U_S  {:.8}", p.energy_fluctuation);
    println!(
        "Q, K       {:.3e}, {:.8}",
        p.quantum_uncertainty, p.classical_uncertainty
    );
    println!("S_S        {:+.8}", p.entropy);
    println!(
        "C_S        {:+.8}  (direct -b^2 dU/db {:+.8})",
        p.heat_capacity, p.heat_capacity_direct
    );
    println!("<dT E*>    {:+.8}", p.d_et);
    println!("snr        {:.8} <= {:.8}", p.snr_opt, p.snr_bound);
    println!("bare <H_S> {:+.8}", p.bare_energy);
    println!("flags      {:?}", p.flags());

    let c = heat_capacity(&solver, &ctx)?;
    println!(
        "C_S terms: b^2 Var {:+.6}  -b^2 Q {:+.6}  <dT E*> {:+.6}  (printed variant {:+.6})",
        c.variance_term, -c.quantum_term, c.d_et, c.printed_variant
    );
    Ok(())
}
