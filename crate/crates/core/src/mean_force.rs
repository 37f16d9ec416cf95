//! Gibbs states, partition functions and the Hamiltonian of mean force.
//!
//! The reduced thermal operator `N(β) = Tr_B e^{-βH_T}` is never formed
//! directly. With `H_T = Σ_k E_k |k⟩⟨k|` it factorizes as `N = G G†` where
//! `G[s, (b,k)] = e^{-β(E_k-E_0)/2} ⟨s b|k⟩`, and the eigenpairs of `N` are
//! taken from a QR + SVD of `G†`. Squaring singular values instead of
//! diagonalizing `N` keeps the small populations that dominate low-temperature
//! derivatives accurate to many more digits.
//!
//! The β-derivatives `E* = ∂_β(βH*)` and `∂_β E*` follow in closed form from
//! the Daleckii–Krein formulas for the Fréchet derivatives of `ln`, using
//! `∂_β N = -G diag(E_k-E_0) G†` and `∂²_β N = G diag((E_k-E_0)²) G†`.

use nalgebra::DMatrix;

use crate::divided::{log_first, log_second};
use crate::error::{Error, Result};
use crate::fd::StepPolicy;
use crate::model::SystemBathModel;
use crate::operator::{
    conjugate_diagonal, herm_eig, partial_trace, ComplexOperator, DensityMatrix, SpectralDecomposition,
    Subsystem, C64,
};

pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Populations below this are treated as a loss of positive definiteness.
const POPULATION_FLOOR: f64 = 1e-300;
/// Agreement required between the two constructions of `ζ_S`.
pub const STATE_ROUTE_TOL: f64 = 1e-10;
/// Agreement required between `Z_SB/Z_B` and `Tr e^{-βH*}`.
pub const PARTITION_ROUTE_TOL: f64 = 1e-10;

/// Inverse temperature plus the finite-difference policy used by the
/// cross-checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalContext {
    beta: f64,
    fd_step: f64,
    richardson: bool,
}

impl ThermalContext {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::param("beta", format!("must be positive, got {beta}")));
        }
        Ok(Self {
            beta,
            fd_step: DEFAULT_FD_STEP,
            richardson: true,
        })
    }

    pub fn from_temperature(temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::param(
                "temperature",
                format!("must be positive, got {temperature}"),
            ));
        }
        Self::new(1.0 / temperature)
    }

    pub fn with_fd_step(mut self, fd_step: f64) -> Result<Self> {
        if !(fd_step > 0.0 && fd_step <= 1e-2) {
            return Err(Error::param(
                "fd_step",
                format!("must lie in (0, 1e-2], got {fd_step}"),
            ));
        }
        self.fd_step = fd_step;
        Ok(self)
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn step_policy(&self) -> StepPolicy {
        StepPolicy::new(self.fd_step).with_richardson(self.richardson)
    }

    /// The β-step `δ = max(1e-5, fd_step·β)`.
    pub fn delta(&self) -> f64 {
        self.step_policy().step(self.beta)
    }

    /// Same policy at another inverse temperature.
    pub fn at(&self, beta: f64) -> Result<Self> {
        let mut c = Self::new(beta)?;
        c.fd_step = self.fd_step;
        c.richardson = self.richardson;
        Ok(c)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::param("beta", format!("must be positive, got {beta}")))
    }
}

/// `ln Σ e^{-βλ}` evaluated as `-βλ_min + ln Σ e^{-β(λ-λ_min)}`.
fn log_sum_boltzmann(levels: &[f64], beta: f64) -> f64 {
    let min = levels.iter().copied().fold(f64::INFINITY, f64::min);
    let sum: f64 = levels.iter().map(|e| (-beta * (e - min)).exp()).sum();
    -beta * min + sum.ln()
}

/// `ln Tr e^{-βH}`.
pub fn log_partition(h: &ComplexOperator, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(log_sum_boltzmann(herm_eig(h)?.eigenvalues(), beta))
}

/// `Tr e^{-βH}`; may overflow to infinity for large `β|λ_min|`, in which case
/// use [`log_partition`].
pub fn partition_fn(h: &ComplexOperator, beta: f64) -> Result<f64> {
    Ok(log_partition(h, beta)?.exp())
}

fn gibbs_from_spectrum(eig: &SpectralDecomposition, beta: f64) -> DensityMatrix {
    let e0 = eig.eigenvalues()[0];
    let w: Vec<f64> = eig
        .eigenvalues()
        .iter()
        .map(|e| (-beta * (e - e0)).exp())
        .collect();
    let z: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|x| x / z).collect();
    DensityMatrix::new_unchecked(eig.compose(&p))
}

/// `e^{-βH} / Z`.
pub fn gibbs_state(h: &ComplexOperator, beta: f64) -> Result<DensityMatrix> {
    check_beta(beta)?;
    Ok(gibbs_from_spectrum(&herm_eig(h)?, beta))
}

/// Per-model spectral cache: diagonalizes `H_T` and `H_B` once and serves
/// any number of inverse temperatures.
#[derive(Clone, Debug)]
pub struct MeanForceSolver {
    model: SystemBathModel,
    total: SpectralDecomposition,
    bath_levels: Vec<f64>,
}

impl MeanForceSolver {
    pub fn new(model: &SystemBathModel) -> Result<Self> {
        let total = herm_eig(model.h_total())?;
        let bath_levels = herm_eig(model.h_bath())?.eigenvalues().to_vec();
        Ok(Self {
            model: model.clone(),
            total,
            bath_levels,
        })
    }

    pub fn model(&self) -> &SystemBathModel {
        &self.model
    }

    pub fn total_spectrum(&self) -> &SpectralDecomposition {
        &self.total
    }

    /// `ln Z_SB`.
    pub fn log_partition_total(&self, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        Ok(log_sum_boltzmann(self.total.eigenvalues(), beta))
    }

    /// `ln Z_B`.
    pub fn log_partition_bath(&self, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        Ok(log_sum_boltzmann(&self.bath_levels, beta))
    }

    /// Global Gibbs state `ζ_SB`.
    pub fn global_state(&self, beta: f64) -> Result<DensityMatrix> {
        check_beta(beta)?;
        Ok(gibbs_from_spectrum(&self.total, beta))
    }

    /// `Tr_B ζ_SB`, the reference route to the mean-force state.
    pub fn reduced_global_state(&self, beta: f64) -> Result<DensityMatrix> {
        let global = self.global_state(beta)?;
        let reduced = partial_trace(global.operator(), self.model.dims(), Subsystem::System)?;
        Ok(DensityMatrix::new_unchecked(reduced.hermitian_part()))
    }

    /// Bath Gibbs state `ρ_B = e^{-βH_B}/Z_B`.
    pub fn bath_state(&self, beta: f64) -> Result<DensityMatrix> {
        gibbs_state(self.model.h_bath(), beta)
    }

    /// HMF, mean-force state and the effective-energy operator with its
    /// β-derivative, all at one inverse temperature.
    pub fn jet(&self, beta: f64) -> Result<MeanForceJet> {
        check_beta(beta)?;
        let (ds, db) = self.model.dims();
        let levels = self.total.eigenvalues();
        let vectors = self.total.eigenvectors();
        let e0 = levels[0];

        // Surviving Boltzmann weights; underflowed eigenstates carry nothing.
        let kept: Vec<(usize, f64, f64)> = levels
            .iter()
            .enumerate()
            .filter_map(|(k, e)| {
                let gap = e - e0;
                let w = (-beta * gap).exp();
                (w >= f64::MIN_POSITIVE).then_some((k, gap, w))
            })
            .collect();
        let cols = db * kept.len();
        let mut g = DMatrix::<C64>::zeros(ds, cols);
        for (slot, &(k, _, w)) in kept.iter().enumerate() {
            let amp = w.sqrt();
            for s in 0..ds {
                for b in 0..db {
                    g[(s, slot * db + b)] = vectors[(s * db + b, k)] * amp;
                }
            }
        }

        let r = g.adjoint().qr().r();
        let svd = r.svd(false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::Numerical("SVD did not return right singular vectors".into()))?;
        let mut order: Vec<usize> = (0..ds).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let n: Vec<f64> = order.iter().map(|&i| svd.singular_values[i].powi(2)).collect();
        let mut basis = DMatrix::from_fn(ds, ds, |row, col| v_t[(order[col], row)].conj());
        for mut col in basis.column_iter_mut() {
            let max = col.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
            if let Some(pivot) = col.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)).copied() {
                col *= pivot.conj() / pivot.norm();
            }
        }
        if let Some(&bad) = n.iter().find(|&&x| !(x >= POPULATION_FLOOR)) {
            return Err(Error::Numerical(format!(
                "reduced thermal operator lost positive definiteness (eigenvalue {bad:e}); \
                 increase n_fock or reduce beta"
            )));
        }

        // X1 = W diag(gap) W†, X2 = W diag(gap²) W† with W = basis† G.
        let w_mat = basis.adjoint() * &g;
        let mut w_gap = w_mat.clone();
        let mut w_gap2 = w_mat.clone();
        for (slot, &(_, gap, _)) in kept.iter().enumerate() {
            for b in 0..db {
                let c = slot * db + b;
                for i in 0..ds {
                    w_gap[(i, c)] *= gap;
                    w_gap2[(i, c)] *= gap * gap;
                }
            }
        }
        let x1 = &w_gap * w_mat.adjoint();
        let x2 = &w_gap2 * w_mat.adjoint();

        // Bath moments with levels measured from E_0.
        let bath_min = self.bath_levels.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = self
            .bath_levels
            .iter()
            .map(|e| (-beta * (e - bath_min)).exp())
            .collect();
        let zb_rel: f64 = weights.iter().sum();
        let mean_b = weights
            .iter()
            .zip(&self.bath_levels)
            .map(|(w, e)| w * e)
            .sum::<f64>()
            / zb_rel;
        let var_b = weights
            .iter()
            .zip(&self.bath_levels)
            .map(|(w, e)| w * (e - mean_b).powi(2))
            .sum::<f64>()
            / zb_rel;
        let log_zb_shifted = -beta * (bath_min - e0) + zb_rel.ln();

        let f1 = DMatrix::from_fn(ds, ds, |i, j| log_first(n[i], n[j]));
        let mut energy = x1.component_mul(&f1.map(|x| C64::new(x, 0.0)));
        let mut derivative = -x2.component_mul(&f1.map(|x| C64::new(x, 0.0)));
        for i in 0..ds {
            for j in 0..ds {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..ds {
                    acc += x1[(i, k)] * x1[(k, j)] * log_second(n[i], n[k], n[j]);
                }
                derivative[(i, j)] -= acc * 2.0;
            }
            energy[(i, i)] += e0 - mean_b;
            derivative[(i, i)] += var_b;
        }
        let energy = (&energy + energy.adjoint()) * C64::new(0.5, 0.0);
        let derivative = (&derivative + derivative.adjoint()) * C64::new(0.5, 0.0);

        let total_n: f64 = n.iter().sum();
        let populations = n.iter().map(|x| x / total_n).collect();
        let hmf_levels = n.iter().map(|x| -(x.ln() - log_zb_shifted) / beta).collect();
        Ok(MeanForceJet {
            beta,
            populations,
            hmf_levels,
            basis,
            energy,
            derivative,
            log_partition: total_n.ln() - log_zb_shifted,
        })
    }
}

/// Everything the thermodynamics needs at one β, expressed in the common
/// eigenbasis of `H*` and `ζ_S`. Populations are in descending order.
#[derive(Clone, Debug)]
pub struct MeanForceJet {
    beta: f64,
    populations: Vec<f64>,
    hmf_levels: Vec<f64>,
    basis: DMatrix<C64>,
    energy: DMatrix<C64>,
    derivative: DMatrix<C64>,
    log_partition: f64,
}

impl MeanForceJet {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.populations.len()
    }

    /// Eigenvalues of `ζ_S`, descending.
    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    /// Eigenvalues of `H*_S`, ascending, paired with [`Self::populations`].
    pub fn hmf_levels(&self) -> &[f64] {
        &self.hmf_levels
    }

    /// Columns are the common eigenvectors of `H*_S` and `ζ_S`.
    pub fn basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    /// `E*_S` in the eigenbasis.
    pub fn energy_in_basis(&self) -> &DMatrix<C64> {
        &self.energy
    }

    /// `∂_β E*_S` in the eigenbasis.
    pub fn energy_derivative_in_basis(&self) -> &DMatrix<C64> {
        &self.derivative
    }

    pub fn hmf(&self) -> ComplexOperator {
        ComplexOperator::wrap(conjugate_diagonal(&self.basis, &self.hmf_levels))
    }

    pub fn state(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(ComplexOperator::wrap(conjugate_diagonal(
            &self.basis,
            &self.populations,
        )))
    }

    fn out_of_basis(&self, m: &DMatrix<C64>) -> ComplexOperator {
        ComplexOperator::wrap(&self.basis * m * self.basis.adjoint()).hermitian_part()
    }

    /// `E*_S = ∂_β(βH*_S)`.
    pub fn effective_energy(&self) -> ComplexOperator {
        self.out_of_basis(&self.energy)
    }

    /// `∂_β E*_S`.
    pub fn effective_energy_derivative(&self) -> ComplexOperator {
        self.out_of_basis(&self.derivative)
    }

    /// `ln Z*_S = ln(Z_SB / Z_B)`.
    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    /// `U_S = Tr[E*_S ζ_S]`.
    pub fn internal_energy(&self) -> f64 {
        self.populations
            .iter()
            .enumerate()
            .map(|(i, p)| p * self.energy[(i, i)].re)
            .sum()
    }
}

/// `H*_S = -(1/β) ln(Tr_B e^{-βH_T} / Z_B)`.
pub fn hmf(model: &SystemBathModel, beta: f64) -> Result<ComplexOperator> {
    Ok(MeanForceSolver::new(model)?.jet(beta)?.hmf())
}

/// `Z*_S = Z_SB / Z_B`, cross-checked against `Tr e^{-βH*_S}`.
pub fn mean_force_partition(model: &SystemBathModel, beta: f64) -> Result<f64> {
    let solver = MeanForceSolver::new(model)?;
    let ratio = solver.log_partition_total(beta)? - solver.log_partition_bath(beta)?;
    let jet = solver.jet(beta)?;
    let trace_route = log_sum_boltzmann(jet.hmf_levels(), beta);
    let (a, b) = (ratio.exp(), trace_route.exp());
    if (a - b).abs() > PARTITION_ROUTE_TOL * a.abs().max(b.abs()) {
        return Err(Error::Consistency {
            check: "mean-force partition ratio vs HMF trace",
            lhs: a,
            rhs: b,
        });
    }
    Ok(a)
}

/// Largest entrywise gap between `Tr_B ζ_SB` and `e^{-βH*}/Z*`.
pub fn state_route_gap(solver: &MeanForceSolver, jet: &MeanForceJet) -> Result<f64> {
    let reference = solver.reduced_global_state(jet.beta())?;
    Ok(reference.operator().max_abs_diff(jet.state().operator()))
}

/// `ζ_S`, built as the Gibbs state of the HMF and verified against the
/// partial trace of the global Gibbs state.
pub fn mean_force_state(model: &SystemBathModel, beta: f64) -> Result<DensityMatrix> {
    let solver = MeanForceSolver::new(model)?;
    let jet = solver.jet(beta)?;
    let gap = state_route_gap(&solver, &jet)?;
    if gap > STATE_ROUTE_TOL {
        return Err(Error::Consistency {
            check: "mean-force state: partial trace vs HMF Gibbs",
            lhs: gap,
            rhs: STATE_ROUTE_TOL,
        });
    }
    Ok(jet.state())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model, CouplingRegime, ModelKind, ModelParams};

    fn small(kind: ModelKind, regime: Option<CouplingRegime>, n_fock: usize) -> SystemBathModel {
        let mut p = ModelParams::defaults(kind).with_n_fock(n_fock);
        if let Some(r) = regime {
            p = p.with_regime(r);
        }
        build_model(&p).unwrap()
    }

    #[test]
    fn two_level_partition() {
        let h = ComplexOperator::from_diagonal(&[1.0, -1.0]);
        for beta in [0.1, 1.0, 7.0] {
            let z = partition_fn(&h, beta).unwrap();
            assert!((z - 2.0 * beta.cosh()).abs() < 1e-12 * z);
        }
        let z = partition_fn(&ComplexOperator::from_diagonal(&[3.0, 1.0, -2.0]), 1e-12).unwrap();
        assert!((z - 3.0).abs() < 1e-10);
        assert!(partition_fn(&h, 0.0).is_err());
        // no overflow in the log form
        assert!((log_partition(&h, 1e3).unwrap() - 1e3).abs() < 1e-9);
    }

    #[test]
    fn boltzmann_ratio() {
        let h = ComplexOperator::from_diagonal(&[1.0, -1.0]);
        let rho = gibbs_state(&h, 0.8).unwrap();
        let d = rho.operator().diagonal_real();
        assert!((d[0] / d[1] - (-0.8f64 * 2.0).exp()).abs() < 1e-14);
        assert!(rho.operator().commutator(&h).max_abs() < 1e-14);
    }

    #[test]
    fn decoupled_hmf_is_bare() {
        for kind in [ModelKind::TwoQubit, ModelKind::JaynesCummings] {
            let m = small(kind, None, 8);
            for beta in [0.2, 1.0, 10.0] {
                let h = hmf(&m, beta).unwrap();
                assert!(h.max_abs_diff(m.h_system()) < 1e-10, "{kind} {beta}");
                let z = mean_force_partition(&m, beta).unwrap();
                let zs = partition_fn(m.h_system(), beta).unwrap();
                assert!((z - zs).abs() < 1e-10 * zs);
            }
        }
    }

    #[test]
    fn decoupled_effective_energy_is_bare() {
        let m = small(ModelKind::JaynesCummings, None, 6);
        let solver = MeanForceSolver::new(&m).unwrap();
        let jet = solver.jet(1.3).unwrap();
        assert!(jet.effective_energy().max_abs_diff(m.h_system()) < 1e-10);
        assert!(jet.effective_energy_derivative().max_abs() < 1e-10);
        let u = -(1.3_f64).tanh();
        assert!((jet.internal_energy() - u).abs() < 1e-12);
    }

    #[test]
    fn effective_energy_matches_difference_of_beta_hmf() {
        let m = small(ModelKind::TwoQubit, Some(CouplingRegime::Strong), 30);
        let solver = MeanForceSolver::new(&m).unwrap();
        let beta = 1.0;
        let h = 1e-3;
        let bh = |b: f64| Ok(solver.jet(b)?.hmf().scale(b));
        let fd = crate::fd::richardson(bh, beta, h).unwrap();
        let jet = solver.jet(beta).unwrap();
        let e = jet.effective_energy();
        assert!(
            fd.max_abs_diff(&e) < 1e-8 * e.max_abs(),
            "{}",
            fd.max_abs_diff(&e)
        );

        let de = crate::fd::richardson(|b| Ok(solver.jet(b)?.effective_energy()), beta, h).unwrap();
        let an = jet.effective_energy_derivative();
        assert!(
            de.max_abs_diff(&an) < 1e-7 * an.max_abs().max(1.0),
            "{}",
            de.max_abs_diff(&an)
        );
    }

    #[test]
    fn state_routes_agree_at_strong_coupling() {
        let m = small(ModelKind::TwoQubit, Some(CouplingRegime::Strong), 30);
        let solver = MeanForceSolver::new(&m).unwrap();
        for beta in [0.2, 1.0, 5.0] {
            let jet = solver.jet(beta).unwrap();
            assert!(state_route_gap(&solver, &jet).unwrap() < 1e-10);
            let p: f64 = jet.populations().iter().sum();
            assert!((p - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn thermal_context_validation() {
        assert!(ThermalContext::new(-1.0).is_err());
        assert!(ThermalContext::new(1.0).unwrap().with_fd_step(0.1).is_err());
        let c = ThermalContext::from_temperature(0.5).unwrap();
        assert_eq!(c.beta(), 2.0);
        assert_eq!(c.delta(), 2e-3);
    }
}
