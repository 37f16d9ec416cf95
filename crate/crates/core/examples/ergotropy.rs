//! Work extractable from the mean-force state, split into coherent and
//! incoherent parts.

use meanforce::mean_force::MeanForceSolver;
use meanforce::model::{build_model, CouplingRegime, ModelKind, ModelParams};
use meanforce::operator::{ComplexOperator, DensityMatrix};
use meanforce::work::{ergotropy, ergotropy_split_with, Dephasing};

fn main() -> meanforce::Result<()> {
    // Population inversion of a qubit: all of ω₀ is extractable.
    let h = ComplexOperator::from_diagonal(&[1.0, -1.0]);
    let excited = DensityMatrix::new(ComplexOperator::from_diagonal(&[1.0, 0.0]))?;
    println!("|e><e| with w0 = 2: W = {}", ergotropy(&excited, &h)?);

    for kind in [ModelKind::TwoQubit, ModelKind::JaynesCummings] {
        println!("== {kind}, beta = 2");
        for regime in CouplingRegime::ALL {
            let model = build_model(&ModelParams::defaults(kind).with_regime(regime))?;
            let state = MeanForceSolver::new(&model)?.jet(2.0)?.state();
            let w = ergotropy_split_with(&state, model.h_system(), Dephasing::EnergyBasis)?;
            let blocks = ergotropy_split_with(&state, model.h_system(), Dephasing::DegenerateBlocks)?;
            println!(
                "{regime:>8}: total {:.6e}  coherent {:.6e}  incoherent {:.1e} (block dephasing {:.6e})",
                w.total, w.coherent, w.incoherent, blocks.incoherent
            );
        }
    }
    Ok(())
}
