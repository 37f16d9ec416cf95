//! Spectral calculus, tensor products and partial traces on small systems.

use meanforce::operator::{
    dephase, herm_eig, log_psd, partial_trace, power_psd, tensor, ComplexOperator, DensityMatrix, Subsystem,
};
use meanforce::work::bell_state;

fn main() -> meanforce::Result<()> {
    let sz = ComplexOperator::from_diagonal(&[1.0, -1.0]);
    let sx = ComplexOperator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0])?;
    let h = &sz + &sx.scale(0.5);

    let eig = herm_eig(&h)?;
    println!("spectrum of sz + sx/2: {:?}", eig.eigenvalues());
    println!("reconstruction error:  {:e}", eig.reconstruct().max_abs_diff(&h));

    let rho = DensityMatrix::from_unnormalized(&eig.map(|e| (-e).exp())?)?;
    let root = power_psd(rho.operator(), 0.5)?;
    println!("Gibbs state at beta=1 purity {:.6}", rho.purity());
    println!(
        "sqrt(rho)^2 - rho:     {:e}",
        (&root * &root).max_abs_diff(rho.operator())
    );
    println!(
        "log(rho) diag:         {:?}",
        log_psd(rho.operator())?.diagonal_real()
    );

    let bell = bell_state();
    let reduced = partial_trace(bell.operator(), (2, 2), Subsystem::System)?;
    println!("Tr_B |Phi+><Phi+| = {:?}", reduced.diagonal_real());
    println!(
        "entanglement entropy = {:.6} (ln 2 = {:.6})",
        DensityMatrix::new(reduced)?.von_neumann_entropy()?,
        2f64.ln()
    );

    let plus = DensityMatrix::from_unnormalized(&ComplexOperator::from_real_rows(2, &[1.0, 1.0, 1.0, 1.0])?)?;
    let dephased = dephase(&plus, &sz)?;
    println!(
        "|+><+| dephased in sz: max off-diagonal {:e}",
        dephased.operator().max_off_diagonal()
    );

    let product = tensor(rho.operator(), &ComplexOperator::identity(3));
    println!(
        "rho (x) I3 has dimension {} and trace {:.1}",
        product.dim(),
        product.trace().re
    );
    Ok(())
}
