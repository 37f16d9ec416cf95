//! Strong-coupling thermodynamics of the mean-force state.
//!
//! Everything is evaluated in the common eigenbasis of `ζ_S` and `H*_S`
//! supplied by [`MeanForceJet`]. Finite differences appear only as
//! independent cross-checks: `C_direct = -β² ∂_β U_S`, the partition-function
//! route to `U_S`, a difference-quotient `E*_S`, and a difference-quotient QFI.

use nalgebra::DMatrix;

use crate::divided::{logarithmic_mean, mean_gap};
use crate::error::{Error, Result};
use crate::fd;
use crate::mean_force::{state_route_gap, MeanForceJet, MeanForceSolver, ThermalContext};
use crate::operator::{herm_eig, power_psd, shannon, trace_of_product, ComplexOperator, DensityMatrix, C64};
use crate::work::{ergotropy, ergotropy_split, ErgotropyReport};

/// Relative agreement required between the two internal-energy routes.
pub const ENERGY_ROUTE_TOL: f64 = 1e-6;
/// Relative agreement required between the FDR decomposition and `∂_T U_S`.
pub const FDR_TOL: f64 = 1e-4;
/// Below this `|C_S|` the FDR check is made on an absolute scale.
pub const FDR_FLOOR: f64 = 1e-6;
/// A difference-quotient `E*_S` that moves by more than this fraction when
/// the step is halved is flagged as unstable.
pub const FD_INSTABILITY: f64 = 0.1;

/// Quantum and classical parts of a variance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UncertaintySplit {
    pub quantum: f64,
    pub classical: f64,
    pub variance: f64,
}

/// `|⟨n|δY|m⟩|²` in the eigenbasis of a state, with `δY = Y - ⟨Y⟩`.
fn centered_weights(p: &[f64], y: &DMatrix<C64>) -> (f64, DMatrix<f64>) {
    let mean: f64 = p.iter().enumerate().map(|(i, p)| p * y[(i, i)].re).sum();
    let n = p.len();
    let w = DMatrix::from_fn(n, n, |i, j| {
        let shift = if i == j { mean } else { 0.0 };
        (y[(i, j)] - C64::new(shift, 0.0)).norm_sqr()
    });
    (mean, w)
}

fn split_in_basis(p: &[f64], y: &DMatrix<C64>) -> UncertaintySplit {
    let (_, w) = centered_weights(p, y);
    let n = p.len();
    let (mut quantum, mut classical, mut variance) = (0.0, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            classical += logarithmic_mean(p[i], p[j]) * w[(i, j)];
            quantum += mean_gap(p[i], p[j]) * w[(i, j)];
            variance += p[i] * w[(i, j)];
        }
    }
    UncertaintySplit {
        quantum,
        classical,
        variance,
    }
}

fn state_basis(rho: &DensityMatrix, y: &ComplexOperator) -> Result<(Vec<f64>, DMatrix<C64>)> {
    if rho.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: y.dim(),
        });
    }
    let eig = herm_eig(rho.operator())?;
    let p = eig
        .eigenvalues()
        .iter()
        .map(|&x| crate::operator::clamp_nonnegative(x))
        .collect::<Result<Vec<_>>>()?;
    Ok((p, eig.to_eigenbasis(y)))
}

/// `Var = Q + K` with `K = Σ L(p_n,p_m)|δY_nm|²` (logarithmic mean `L`),
/// the classical part, and `Q` the quantum remainder.
pub fn uncertainty_split(rho: &DensityMatrix, y: &ComplexOperator) -> Result<UncertaintySplit> {
    let (p, yb) = state_basis(rho, y)?;
    Ok(split_in_basis(&p, &yb))
}

/// Wigner–Yanase–Dyson skew information
/// `Tr(ρY²) - Tr(ρ^η Y ρ^{1-η} Y)`.
pub fn wyd_skew(rho: &DensityMatrix, y: &ComplexOperator, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param("eta", format!("must lie in (0, 1), got {eta}")));
    }
    if rho.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: y.dim(),
        });
    }
    let a = power_psd(rho.operator(), eta)?;
    let b = power_psd(rho.operator(), 1.0 - eta)?;
    let y2 = y * y;
    let left = trace_of_product(rho.matrix(), y2.matrix()).re;
    let right = trace_of_product((&a * y).matrix(), (&b * y).matrix()).re;
    Ok(left - right)
}

/// `F = 2 Σ |⟨n|∂ρ|m⟩|² / (p_n + p_m)`, skipping pairs with
/// `p_n + p_m < 1e-12`.
pub fn spectral_qfi(rho: &DensityMatrix, derivative: &ComplexOperator) -> Result<f64> {
    let (p, d) = state_basis(rho, derivative)?;
    let n = p.len();
    let mut f = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = p[i] + p[j];
            if s >= 1e-12 {
                f += 2.0 * d[(i, j)].norm_sqr() / s;
            }
        }
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parameterization {
    Beta,
    Temperature,
}

/// A difference-quotient estimate with its step-halving companion.
#[derive(Clone, Debug)]
pub struct FdEstimate<T> {
    pub value: T,
    pub halved: T,
    /// `‖value - halved‖ / ‖halved‖`.
    pub relative_change: f64,
}

impl<T> FdEstimate<T> {
    pub fn unstable(&self) -> bool {
        self.relative_change > FD_INSTABILITY
    }
}

/// `E*_S = ∂_β(βH*_S)`, analytic.
pub fn effective_energy_op(solver: &MeanForceSolver, ctx: &ThermalContext) -> Result<ComplexOperator> {
    Ok(solver.jet(ctx.beta())?.effective_energy())
}

/// `[(β+δ)H*(β+δ) - (β-δ)H*(β-δ)] / 2δ`, repeated with `δ/2`.
pub fn effective_energy_fd(
    solver: &MeanForceSolver,
    ctx: &ThermalContext,
) -> Result<FdEstimate<ComplexOperator>> {
    let beta_hmf = |b: f64| Ok(solver.jet(b)?.hmf().scale(b));
    let delta = ctx.delta();
    let value = fd::central(beta_hmf, ctx.beta(), delta)?;
    let halved = fd::central(beta_hmf, ctx.beta(), 0.5 * delta)?;
    let relative_change = value.max_abs_diff(&halved) / halved.max_abs().max(f64::MIN_POSITIVE);
    Ok(FdEstimate {
        value,
        halved,
        relative_change,
    })
}

/// `U_S` by `Tr[E*_S ζ_S]` and by `-∂_β ln Z_SB + ∂_β ln Z_B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InternalEnergy {
    pub expectation: f64,
    pub partition_route: f64,
}

fn partition_route_energy(solver: &MeanForceSolver, ctx: &ThermalContext) -> Result<f64> {
    let ln_ratio = |b: f64| Ok(solver.log_partition_total(b)? - solver.log_partition_bath(b)?);
    Ok(-ctx.step_policy().derivative(ln_ratio, ctx.beta())?)
}

fn relative_gap(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

pub fn internal_energy(solver: &MeanForceSolver, ctx: &ThermalContext) -> Result<InternalEnergy> {
    let expectation = solver.jet(ctx.beta())?.internal_energy();
    let partition_route = partition_route_energy(solver, ctx)?;
    if relative_gap(expectation, partition_route, 1e-10) > ENERGY_ROUTE_TOL {
        return Err(Error::Consistency {
            check: "internal energy: E* expectation vs partition route",
            lhs: expectation,
            rhs: partition_route,
        });
    }
    Ok(InternalEnergy {
        expectation,
        partition_route,
    })
}

/// `ΔU_S = √Var(ζ_S, E*_S)`.
pub fn energy_fluctuation(solver: &MeanForceSolver, ctx: &ThermalContext) -> Result<f64> {
    let jet = solver.jet(ctx.beta())?;
    Ok(split_in_basis(jet.populations(), jet.energy_in_basis())
        .variance
        .sqrt())
}

/// `S_S = -Tr ζ ln ζ + β² Tr[(∂_β H*_S) ζ]`, where the correction equals
/// `β Tr[(E*_S - H*_S) ζ]`.
pub fn entropy(solver: &MeanForceSolver, ctx: &ThermalContext) -> Result<f64> {
    Ok(entropy_of(&solver.jet(ctx.beta())?))
}

fn entropy_of(jet: &MeanForceJet) -> f64 {
    let p = jet.populations();
    let e = jet.energy_in_basis();
    let correction: f64 = p
        .iter()
        .zip(jet.hmf_levels())
        .enumerate()
        .map(|(i, (p, h))| p * (e[(i, i)].re - h))
        .sum();
    shannon(p) + jet.beta() * correction
}

/// The heat capacity by the generalized fluctuation–dissipation relation,
/// its pieces, and the direct derivative `∂_T U_S`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatCapacity {
    /// `β²ΔU² - β²Q + ⟨∂_T E*⟩`.
    pub fdr: f64,
    pub variance_term: f64,
    pub quantum_term: f64,
    /// `⟨∂_T E*_S⟩ = -β²⟨∂_β E*_S⟩`.
    pub d_et: f64,
    /// Same decomposition with the third term written as `-(1/β²)⟨∂_β E*⟩`.
    pub printed_variant: f64,
    /// `-β² ∂_β U_S` by Richardson-extrapolated central differences.
    pub direct: f64,
}

impl HeatCapacity {
    pub fn relative_mismatch(&self) -> f64 {
        relative_gap(self.fdr, self.direct, FDR_FLOOR)
    }
}

fn d_beta_energy_mean(jet: &MeanForceJet) -> f64 {
    let d = jet.energy_derivative_in_basis();
    jet.populations()
        .iter()
        .enumerate()
        .map(|(i, p)| p * d[(i, i)].re)
        .sum()
}

fn heat_capacity_parts(
    solver: &MeanForceSolver,
    ctx: &ThermalContext,
    jet: &MeanForceJet,
    split: &UncertaintySplit,
) -> Result<HeatCapacity> {
    let beta = ctx.beta();
    let b2 = beta * beta;
    let mean_d = d_beta_energy_mean(jet);
    let d_et = -b2 * mean_d;
    let variance_term = b2 * split.variance;
    let quantum_term = b2 * split.quantum;
    let u = |b: f64| Ok(solver.jet(b)?.internal_energy());
    let direct = -b2 * ctx.step_policy().derivative(u, beta)?;
    Ok(HeatCapacity {
        fdr: variance_term - quantum_term + d_et,
        variance_term,
        quantum_term,
        d_et,
        printed_variant: variance_term - quantum_term - mean_d / b2,
        direct,
    })
}

pub fn heat_capacity(solver: &MeanForceSolver, ctx: &ThermalContext) -> Result<HeatCapacity> {
    let jet = solver.jet(ctx.beta())?;
    let split = split_in_basis(jet.populations(), jet.energy_in_basis());
    let c = heat_capacity_parts(solver, ctx, &jet, &split)?;
    if c.relative_mismatch() > FDR_TOL {
        return Err(Error::Consistency {
            check: "heat capacity: FDR decomposition vs -β²∂_β U",
            lhs: c.fdr,
            rhs: c.direct,
        });
    }
    Ok(c)
}

/// QFI of `ζ_S` from `∂_β ζ = -L∘δE*` (logarithmic mean `L`), so that
/// `F(β) = 2 Σ L²|δE*_nm|² / (p_n + p_m)`.
fn qfi_beta_of(jet: &MeanForceJet) -> f64 {
    let p = jet.populations();
    let (_, w) = centered_weights(p, jet.energy_in_basis());
    let n = p.len();
    let mut f = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = p[i] + p[j];
            if s >= 1e-12 {
                f += 2.0 * logarithmic_mean(p[i], p[j]).powi(2) * w[(i, j)] / s;
            }
        }
    }
    f
}

fn convert_qfi(f_beta: f64, beta: f64, parameterization: Parameterization) -> f64 {
    match parameterization {
        Parameterization::Beta => f_beta,
        // dβ/dT = -1/T², so F(T) = F(β)/T⁴ = β⁴F(β)
        Parameterization::Temperature => f_beta * beta.powi(4),
    }
}

pub fn qfi(
    solver: &MeanForceSolver,
    parameterization: Parameterization,
    ctx: &ThermalContext,
) -> Result<f64> {
    let jet = solver.jet(ctx.beta())?;
    Ok(convert_qfi(qfi_beta_of(&jet), ctx.beta(), parameterization))
}

/// QFI with `∂_θ ζ_S` taken by central differences of the state itself.
pub fn qfi_fd(
    solver: &MeanForceSolver,
    parameterization: Parameterization,
    ctx: &ThermalContext,
) -> Result<f64> {
    let beta = ctx.beta();
    let state = |b: f64| Ok(solver.jet(b)?.state().into_operator());
    let d_state = ctx.step_policy().derivative(state, beta)?;
    let rho = solver.jet(beta)?.state();
    Ok(convert_qfi(spectral_qfi(&rho, &d_state)?, beta, parameterization))
}

/// Every scalar of the strong-coupling thermodynamics at one β.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalPoint {
    pub beta: f64,
    pub temperature: f64,
    pub internal_energy: f64,
    /// `U_S` from `-∂_β ln(Z_SB/Z_B)`.
    pub internal_energy_partition: f64,
    pub energy_fluctuation: f64,
    pub variance: f64,
    pub quantum_uncertainty: f64,
    pub classical_uncertainty: f64,
    pub entropy: f64,
    pub heat_capacity: f64,
    pub heat_capacity_direct: f64,
    pub heat_capacity_printed: f64,
    pub d_et: f64,
    pub qfi_beta: f64,
    pub qfi_temperature: f64,
    pub snr_bound: f64,
    pub snr_opt: f64,
    /// `‖H*_S - H_S‖_F / ‖H_S‖_F`.
    pub hmf_deviation: f64,
    /// Largest off-diagonal of `H*_S` in the computational basis.
    pub hmf_off_diagonal: f64,
    /// `Tr[H_S ζ_S]`; for the JC model this has the sign of `Tr[σ^z ζ_S]`.
    pub bare_energy: f64,
    /// Entrywise gap between the two constructions of `ζ_S`.
    pub state_route_gap: f64,
    /// Step-halving change of the difference-quotient `E*_S`.
    pub effective_energy_fd_change: f64,
    /// Relative gap between analytic and difference-quotient `E*_S`.
    pub effective_energy_fd_gap: f64,
    /// Ergotropy of `ζ_S` against the bare `H_S`.
    pub ergotropy: ErgotropyReport,
    /// Ergotropy of `ζ_S` against `H*_S` (zero up to rounding).
    pub ergotropy_hmf: f64,
}

/// Named invariant violations carried alongside a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointFlag {
    VarianceSplit,
    FisherBound,
    Tur,
    Fdr,
    EnergyRoute,
    StateRoute,
    FdUnstable,
}

impl PointFlag {
    pub fn label(&self) -> &'static str {
        match self {
            PointFlag::VarianceSplit => "variance_split",
            PointFlag::FisherBound => "fisher_bound",
            PointFlag::Tur => "tur_bound",
            PointFlag::Fdr => "fdr_mismatch",
            PointFlag::EnergyRoute => "energy_route",
            PointFlag::StateRoute => "state_route",
            PointFlag::FdUnstable => "fd_unstable",
        }
    }
}

impl ThermalPoint {
    /// Checks the invariants every emitted point must satisfy.
    pub fn flags(&self) -> Vec<PointFlag> {
        let mut out = Vec::new();
        let (q, k, var) = (
            self.quantum_uncertainty,
            self.classical_uncertainty,
            self.variance,
        );
        if q < -1e-10 || k < -1e-10 || (q + k - var).abs() > 1e-8 * var.abs().max(1e-10) {
            out.push(PointFlag::VarianceSplit);
        }
        if self.qfi_beta > k + 1e-8 * k.max(1.0) {
            out.push(PointFlag::FisherBound);
        }
        if self.snr_opt > self.snr_bound + 1e-6 * self.snr_bound.abs().max(1.0) {
            out.push(PointFlag::Tur);
        }
        if relative_gap(self.heat_capacity, self.heat_capacity_direct, FDR_FLOOR) > FDR_TOL {
            out.push(PointFlag::Fdr);
        }
        if relative_gap(self.internal_energy, self.internal_energy_partition, 1e-10) > ENERGY_ROUTE_TOL {
            out.push(PointFlag::EnergyRoute);
        }
        if self.state_route_gap > crate::mean_force::STATE_ROUTE_TOL {
            out.push(PointFlag::StateRoute);
        }
        if self.effective_energy_fd_change > FD_INSTABILITY {
            out.push(PointFlag::FdUnstable);
        }
        out
    }
}

/// Evaluates every observable at one β. Invariant violations are reported
/// through [`ThermalPoint::flags`], not as errors.
pub fn thermal_point(solver: &MeanForceSolver, ctx: &ThermalContext) -> Result<ThermalPoint> {
    let beta = ctx.beta();
    let jet = solver.jet(beta)?;
    let h_s = solver.model().h_system();
    let split = split_in_basis(jet.populations(), jet.energy_in_basis());
    let c = heat_capacity_parts(solver, ctx, &jet, &split)?;
    let qfi_beta = qfi_beta_of(&jet);
    let hmf = jet.hmf();
    let state = jet.state();

    let e_fd = effective_energy_fd(solver, ctx)?;
    let e_an = jet.effective_energy();
    let effective_energy_fd_gap = e_fd.value.max_abs_diff(&e_an) / e_an.max_abs().max(f64::MIN_POSITIVE);

    Ok(ThermalPoint {
        beta,
        temperature: 1.0 / beta,
        internal_energy: jet.internal_energy(),
        internal_energy_partition: partition_route_energy(solver, ctx)?,
        energy_fluctuation: split.variance.max(0.0).sqrt(),
        variance: split.variance,
        quantum_uncertainty: if split.quantum < 0.0 && split.quantum >= -1e-10 {
            0.0
        } else {
            split.quantum
        },
        classical_uncertainty: split.classical,
        entropy: entropy_of(&jet),
        heat_capacity: c.fdr,
        heat_capacity_direct: c.direct,
        heat_capacity_printed: c.printed_variant,
        d_et: c.d_et,
        qfi_beta,
        qfi_temperature: convert_qfi(qfi_beta, beta, Parameterization::Temperature),
        snr_bound: c.fdr - c.d_et,
        snr_opt: beta * beta * qfi_beta,
        hmf_deviation: (&hmf - h_s).frobenius_norm() / h_s.frobenius_norm(),
        hmf_off_diagonal: hmf.max_off_diagonal(),
        bare_energy: h_s.expectation(&state),
        state_route_gap: state_route_gap(solver, &jet)?,
        effective_energy_fd_change: e_fd.relative_change,
        effective_energy_fd_gap,
        ergotropy: ergotropy_split(&state, h_s)?,
        ergotropy_hmf: ergotropy(&state, &hmf)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model, CouplingRegime, ModelKind, ModelParams};

    fn solver(kind: ModelKind, regime: Option<CouplingRegime>, n_fock: usize) -> MeanForceSolver {
        let mut p = ModelParams::defaults(kind).with_n_fock(n_fock);
        if let Some(r) = regime {
            p = p.with_regime(r);
        }
        MeanForceSolver::new(&build_model(&p).unwrap()).unwrap()
    }

    #[test]
    fn commuting_observable_is_classical() {
        let rho = DensityMatrix::new(ComplexOperator::from_diagonal(&[0.6, 0.3, 0.1])).unwrap();
        let y = ComplexOperator::from_diagonal(&[1.0, -2.0, 0.5]);
        let s = uncertainty_split(&rho, &y).unwrap();
        assert!(s.quantum.abs() < 1e-15);
        assert!((s.classical - s.variance).abs() < 1e-14);
        assert!(wyd_skew(&rho, &y, 0.3).unwrap().abs() < 1e-14);
    }

    #[test]
    fn decoupled_jc_closed_forms() {
        let s = solver(ModelKind::JaynesCummings, None, 8);
        for beta in [0.3, 1.0, 2.5] {
            let ctx = ThermalContext::new(beta).unwrap();
            let pt = thermal_point(&s, &ctx).unwrap();
            let x = beta; // βω₀/2 with ω₀ = 2
            let sech2 = 1.0 / x.cosh().powi(2);
            assert!((pt.internal_energy + x.tanh()).abs() < 1e-12);
            assert!((pt.energy_fluctuation - x.cosh().recip()).abs() < 1e-12);
            assert!((pt.heat_capacity - x * x * sech2).abs() < 1e-12);
            assert!((pt.qfi_beta - sech2).abs() < 1e-12);
            assert!(pt.quantum_uncertainty.abs() < 1e-14);
            assert!(pt.d_et.abs() < 1e-12);
            assert!(pt.flags().is_empty(), "{:?}", pt.flags());
        }
    }

    #[test]
    fn strong_two_qubit_point_is_consistent() {
        let s = solver(ModelKind::TwoQubit, Some(CouplingRegime::Strong), 40);
        let ctx = ThermalContext::new(1.0).unwrap();
        let pt = thermal_point(&s, &ctx).unwrap();
        assert!(pt.flags().is_empty(), "{:?} {pt:?}", pt.flags());
        assert!(pt.snr_opt <= pt.snr_bound);
        let u = internal_energy(&s, &ctx).unwrap();
        assert!((u.expectation - u.partition_route).abs() < 1e-6 * u.expectation.abs());
        let c = heat_capacity(&s, &ctx).unwrap();
        assert!(c.relative_mismatch() < 1e-6);
        let f = qfi(&s, Parameterization::Beta, &ctx).unwrap();
        let f_fd = qfi_fd(&s, Parameterization::Beta, &ctx).unwrap();
        assert!((f - f_fd).abs() < 1e-6 * f, "{f} {f_fd}");
    }

    #[test]
    fn qfi_temperature_conversion() {
        let s = solver(ModelKind::JaynesCummings, Some(CouplingRegime::Moderate), 20);
        let ctx = ThermalContext::from_temperature(2.0).unwrap();
        let fb = qfi(&s, Parameterization::Beta, &ctx).unwrap();
        let ft = qfi(&s, Parameterization::Temperature, &ctx).unwrap();
        assert!((ft - fb / 16.0).abs() < 1e-15 * fb);
    }
}
