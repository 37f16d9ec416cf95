//! Hamiltonian of mean force: X-pattern for two qubits, diagonal dressing for JC.

use meanforce::mean_force::{mean_force_partition, MeanForceSolver};
use meanforce::model::{build_model, CouplingRegime, ModelKind, ModelParams};
use meanforce::operator::ComplexOperator;

fn print_matrix(label: &str, m: &ComplexOperator) {
    println!("{label}");
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|j| format!("{:+9.5}", m.entry(i, j).re))
            .collect();
        println!("  [{}]", row.join(" "));
    }
}

fn main() -> meanforce::Result<()> {
    for kind in [ModelKind::TwoQubit, ModelKind::JaynesCummings] {
        let model = build_model(&ModelParams::defaults(kind).with_regime(CouplingRegime::Strong))?;
        let solver = MeanForceSolver::new(&model)?;
        print_matrix(&format!("{kind}: bare H_S"), model.h_system());
        for beta in [0.5, 2.0] {
            let jet = solver.jet(beta)?;
            print_matrix(&format!("{kind}: H*_S at beta = {beta}"), &jet.hmf());
            let z = mean_force_partition(&model, beta)?;
            println!("  Z*_S = Z_SB/Z_B = {z:.6}, U_S = {:+.6}", jet.internal_energy());
        }
        println!();
    }
    Ok(())
}
