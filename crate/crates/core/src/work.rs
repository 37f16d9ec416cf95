//! Ergotropy and entropy production.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::SystemBathModel;
use crate::operator::{
    dephase, dephase_in_basis, herm_eig, log_psd, partial_trace, shannon, tensor, trace_of_product,
    ComplexOperator, DensityMatrix, Subsystem, C64, HERMITIAN_TOL,
};

/// Agreement required between the two entropy-production formulas.
pub const ENTROPY_ROUTE_TOL: f64 = 1e-8;

/// Eigenvalues of `σ` at or below this count as outside its support.
const SUPPORT_FLOOR: f64 = 1e-14;

fn check_dims(rho: &DensityMatrix, h: &ComplexOperator) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: rho.dim(),
        });
    }
    Ok(())
}

/// Maximal work extractable by a unitary:
/// `W = Tr(ρH) - Σ_i r_i↓ e_i↑`.
pub fn ergotropy(rho: &DensityMatrix, h: &ComplexOperator) -> Result<f64> {
    check_dims(rho, h)?;
    let mut r = rho.spectrum()?;
    r.reverse();
    let e = herm_eig(h)?;
    let passive: f64 = r.iter().zip(e.eigenvalues()).map(|(r, e)| r * e).sum();
    Ok((h.expectation(rho) - passive).max(0.0))
}

/// How coherences are removed before evaluating the incoherent ergotropy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Dephasing {
    /// Remove every coherence in an energy eigenbasis of `H`. When `H` is
    /// already diagonal the computational (product) basis is used, so
    /// degenerate levels such as `|eg⟩, |ge⟩` are dephased as well.
    #[default]
    EnergyBasis,
    /// Keep coherences inside degenerate eigenspaces of `H`.
    DegenerateBlocks,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErgotropyReport {
    pub total: f64,
    pub incoherent: f64,
    pub coherent: f64,
}

/// Total ergotropy and its split into the part that survives dephasing
/// (incoherent) and the remainder (coherent).
pub fn ergotropy_split(rho: &DensityMatrix, h: &ComplexOperator) -> Result<ErgotropyReport> {
    ergotropy_split_with(rho, h, Dephasing::EnergyBasis)
}

pub fn ergotropy_split_with(
    rho: &DensityMatrix,
    h: &ComplexOperator,
    rule: Dephasing,
) -> Result<ErgotropyReport> {
    check_dims(rho, h)?;
    let total = ergotropy(rho, h)?;
    let dephased = match rule {
        Dephasing::DegenerateBlocks => dephase(rho, h)?,
        Dephasing::EnergyBasis => {
            if h.max_off_diagonal() <= HERMITIAN_TOL * h.max_abs() {
                dephase_in_basis(rho, &DMatrix::identity(h.dim(), h.dim()))?
            } else {
                dephase_in_basis(rho, herm_eig(h)?.eigenvectors())?
            }
        }
    };
    let incoherent = ergotropy(&dephased, h)?;
    Ok(ErgotropyReport {
        total,
        incoherent,
        coherent: total - incoherent,
    })
}

/// `S(ρ‖σ) = Tr ρ ln ρ - Tr ρ ln σ`, or `+∞` when `ρ` has weight outside
/// the support of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            actual: rho.dim(),
        });
    }
    let eig = herm_eig(sigma.operator())?;
    let in_basis = eig.to_eigenbasis(rho.operator());
    let mut leaked = 0.0;
    let mut cross = 0.0;
    for (k, &s) in eig.eigenvalues().iter().enumerate() {
        let weight = in_basis[(k, k)].re;
        if s <= SUPPORT_FLOOR {
            leaked += weight;
        } else {
            cross += weight * s.ln();
        }
    }
    if leaked > 1e-10 {
        return Ok(f64::INFINITY);
    }
    Ok(-rho.von_neumann_entropy()? - cross)
}

/// `S(ρ‖σ)` when `ln σ` is known exactly (for example a Gibbs state,
/// `ln σ = -βH - ln Z`).
pub fn relative_entropy_to_log(rho: &DensityMatrix, log_sigma: &ComplexOperator) -> Result<f64> {
    if rho.dim() != log_sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: log_sigma.dim(),
            actual: rho.dim(),
        });
    }
    Ok(-rho.von_neumann_entropy()? - trace_of_product(rho.matrix(), log_sigma.matrix()).re)
}

/// `(|ee⟩ + |gg⟩)/√2`.
pub fn bell_state() -> DensityMatrix {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    DensityMatrix::pure(&[one, zero, zero, one]).expect("nonzero ket")
}

/// `(|e⟩ + |g⟩)/√2`.
pub fn plus_state() -> DensityMatrix {
    let one = C64::new(1.0, 0.0);
    DensityMatrix::pure(&[one, one]).expect("nonzero ket")
}

/// `U = e^{-iH_T t}` for one model and time, reusable across temperatures
/// and initial states.
#[derive(Clone, Debug)]
pub struct Propagator {
    t: f64,
    dims: (usize, usize),
    h_bath: ComplexOperator,
    unitary: ComplexOperator,
}

impl Propagator {
    pub fn new(model: &SystemBathModel, t: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::param("time", format!("must be >= 0, got {t}")));
        }
        let eig = herm_eig(model.h_total())?;
        let unitary = eig.compose_complex(|e| C64::from_polar(1.0, -e * t));
        Ok(Self {
            t,
            dims: model.dims(),
            h_bath: model.h_bath().clone(),
            unitary,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn unitary(&self) -> &ComplexOperator {
        &self.unitary
    }

    /// Evolves `ρ_S0 ⊗ ρ_B(β)` and returns the global and reduced states.
    pub fn evolve(&self, rho_s0: &DensityMatrix, beta: f64) -> Result<EvolvedState> {
        let (ds, db) = self.dims;
        if rho_s0.dim() != ds {
            return Err(Error::DimensionMismatch {
                expected: ds,
                actual: rho_s0.dim(),
            });
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::param("beta", format!("must be positive, got {beta}")));
        }
        let levels = herm_eig(&self.h_bath)?;
        let e_min = levels.eigenvalues()[0];
        let log_z = -beta * e_min
            + levels
                .eigenvalues()
                .iter()
                .map(|e| (-beta * (e - e_min)).exp())
                .sum::<f64>()
                .ln();
        let bath_log =
            (&self.h_bath.scale(-beta) - &ComplexOperator::identity(db).scale(log_z)).hermitian_part();
        let bath = DensityMatrix::new_unchecked(levels.map(|e| (-beta * e - log_z).exp())?);

        let initial = tensor(rho_s0.operator(), bath.operator());
        let u = &self.unitary;
        let global = (&(u * &initial) * &u.adjoint()).hermitian_part();
        let system = partial_trace(&global, self.dims, Subsystem::System)?.hermitian_part();
        let bath_t = partial_trace(&global, self.dims, Subsystem::Bath)?.hermitian_part();
        Ok(EvolvedState {
            t: self.t,
            dims: self.dims,
            global: DensityMatrix::new_unchecked(global),
            system: DensityMatrix::new_unchecked(system),
            bath: DensityMatrix::new_unchecked(bath_t),
            bath_initial: bath,
            bath_initial_log: bath_log,
        })
    }

    /// Entropy production of the evolved state, by both formulas.
    pub fn entropy_production(&self, rho_s0: &DensityMatrix, beta: f64) -> Result<EvolutionSnapshot> {
        self.evolve(rho_s0, beta)?.entropy_production()
    }
}

#[derive(Clone, Debug)]
pub struct EvolvedState {
    pub t: f64,
    dims: (usize, usize),
    pub global: DensityMatrix,
    pub system: DensityMatrix,
    /// `ρ_B(t)`.
    pub bath: DensityMatrix,
    /// `ρ_B(0)`, the bath Gibbs state.
    pub bath_initial: DensityMatrix,
    /// `ln ρ_B(0) = -βH_B - ln Z_B`, exact.
    pub bath_initial_log: ComplexOperator,
}

#[derive(Clone, Debug)]
pub struct EvolutionSnapshot {
    pub state: EvolvedState,
    /// `S[ρ_SB(t) ‖ ρ_S(t) ⊗ ρ_B(0)]`.
    pub sigma: f64,
    /// `I(S:B) + S[ρ_B(t) ‖ ρ_B(0)]`.
    pub sigma_from_mutual_info: f64,
    pub mutual_info: f64,
}

impl EvolvedState {
    pub fn entropy_production(self) -> Result<EvolutionSnapshot> {
        let (ds, db) = self.dims;
        let s_global = shannon(&self.global.spectrum()?);
        let s_system = self.system.von_neumann_entropy()?;
        let s_bath = self.bath.von_neumann_entropy()?;

        let log_product = &tensor(&log_psd(self.system.operator())?, &ComplexOperator::identity(db))
            + &tensor(&ComplexOperator::identity(ds), &self.bath_initial_log);
        let sigma = -s_global - trace_of_product(self.global.matrix(), log_product.matrix()).re;

        let mutual_info = s_system + s_bath - s_global;
        let bath_divergence = relative_entropy_to_log(&self.bath, &self.bath_initial_log)?;
        let sigma_from_mutual_info = mutual_info + bath_divergence;

        if (sigma - sigma_from_mutual_info).abs() > ENTROPY_ROUTE_TOL {
            return Err(Error::Consistency {
                check: "entropy production: joint divergence vs mutual information",
                lhs: sigma,
                rhs: sigma_from_mutual_info,
            });
        }
        Ok(EvolutionSnapshot {
            state: self,
            sigma,
            sigma_from_mutual_info,
            mutual_info,
        })
    }
}

/// `ρ_SB(t) = U(ρ_S0 ⊗ ρ_B(β))U†` with its marginals.
pub fn evolve(model: &SystemBathModel, rho_s0: &DensityMatrix, beta: f64, t: f64) -> Result<EvolvedState> {
    Propagator::new(model, t)?.evolve(rho_s0, beta)
}

pub fn entropy_production(
    model: &SystemBathModel,
    rho_s0: &DensityMatrix,
    beta: f64,
    t: f64,
) -> Result<EvolutionSnapshot> {
    Propagator::new(model, t)?.entropy_production(rho_s0, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mean_force::gibbs_state;
    use crate::model::{build_model, CouplingRegime, ModelKind, ModelParams};

    fn sz() -> ComplexOperator {
        ComplexOperator::from_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn passive_and_inverted() {
        let h = sz();
        let g = gibbs_state(&h, 0.7).unwrap();
        assert!(ergotropy(&g, &h).unwrap() < 1e-15);
        let excited = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert!((ergotropy(&excited, &h).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn split_of_diagonal_state_has_no_coherent_part() {
        let rho = DensityMatrix::new(ComplexOperator::from_diagonal(&[0.8, 0.2])).unwrap();
        let r = ergotropy_split(&rho, &sz()).unwrap();
        assert!((r.total - 1.2).abs() < 1e-14);
        assert_eq!(r.coherent, 0.0);
    }

    #[test]
    fn plus_state_is_purely_coherent() {
        let r = ergotropy_split(&plus_state(), &sz()).unwrap();
        assert!((r.total - 1.0).abs() < 1e-14);
        assert!(r.incoherent.abs() < 1e-15);
    }

    #[test]
    fn degenerate_rule_keeps_block_coherence() {
        // |eg⟩ + |ge⟩ lives in the degenerate zero-energy block of ω₀(S₁ᶻ+S₂ᶻ)
        let h = ComplexOperator::from_diagonal(&[2.0, 0.0, 0.0, -2.0]);
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let psi = DensityMatrix::pure(&[zero, one, one, zero]).unwrap();
        let full = ergotropy_split_with(&psi, &h, Dephasing::EnergyBasis).unwrap();
        let block = ergotropy_split_with(&psi, &h, Dephasing::DegenerateBlocks).unwrap();
        assert!((full.total - 2.0).abs() < 1e-14);
        // diag(0, ½, ½, 0) still has ergotropy 1 against diag(2, 0, 0, -2)
        assert!((full.incoherent - 1.0).abs() < 1e-14);
        assert!((full.coherent - 1.0).abs() < 1e-14);
        assert!((block.incoherent - 2.0).abs() < 1e-14);
    }

    #[test]
    fn classical_relative_entropy() {
        let rho = DensityMatrix::new(ComplexOperator::from_diagonal(&[0.7, 0.3])).unwrap();
        let sigma = DensityMatrix::maximally_mixed(2);
        let expected = 0.7 * 1.4_f64.ln() + 0.3 * 0.6_f64.ln();
        assert!((relative_entropy(&rho, &sigma).unwrap() - expected).abs() < 1e-14);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-14);
    }

    #[test]
    fn support_violation_is_infinite() {
        let rho = DensityMatrix::maximally_mixed(2);
        let sigma = DensityMatrix::new(ComplexOperator::from_diagonal(&[1.0, 0.0])).unwrap();
        assert_eq!(relative_entropy(&rho, &sigma).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&sigma, &rho).unwrap().is_finite());
    }

    #[test]
    fn evolution_at_time_zero_is_product() {
        let p = ModelParams::defaults(ModelKind::JaynesCummings)
            .with_n_fock(10)
            .with_regime(CouplingRegime::Strong);
        let m = build_model(&p).unwrap();
        let snap = entropy_production(&m, &plus_state(), 1.0, 0.0).unwrap();
        let product = tensor(plus_state().operator(), snap.state.bath_initial.operator());
        assert!(snap.state.global.operator().max_abs_diff(&product) < 1e-13);
        assert!(snap.sigma.abs() < 1e-10);
    }

    #[test]
    fn evolution_is_unitary() {
        let p = ModelParams::defaults(ModelKind::TwoQubit)
            .with_n_fock(12)
            .with_regime(CouplingRegime::Moderate);
        let m = build_model(&p).unwrap();
        let purity0 = evolve(&m, &bell_state(), 1.0, 0.0).unwrap().global.purity();
        for t in [0.5, 1.0] {
            let s = evolve(&m, &bell_state(), 1.0, t).unwrap();
            assert!((s.global.purity() - purity0).abs() < 1e-10);
            assert!((s.system.operator().trace().re - 1.0).abs() < 1e-12);
        }
        let snap = entropy_production(&m, &bell_state(), 1.0, 1.0).unwrap();
        assert!(snap.sigma > 0.0);
        assert!((snap.sigma - snap.sigma_from_mutual_info).abs() < 1e-10);
    }
}
