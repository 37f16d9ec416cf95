//! Concrete system–bath models on a truncated bosonic mode.
//!
//! Qubit basis convention: index 0 is the excited state `|e⟩`, index 1 the
//! ground state `|g⟩`, so `σ^z = diag(1, -1)` and `S^z = diag(½, -½)`.
//! Two-qubit states are ordered `|ee⟩, |eg⟩, |ge⟩, |gg⟩`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operator::{tensor, ComplexOperator, C64};

pub const DEFAULT_N_FOCK_TWO_QUBIT: usize = 60;
pub const DEFAULT_N_FOCK_JC: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Two dipole-coupled qubits sharing one field mode.
    TwoQubit,
    /// Jaynes–Cummings model with the counter-rotating terms kept.
    JaynesCummings,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            ModelKind::TwoQubit => "two-qubit",
            ModelKind::JaynesCummings => "jc",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "two-qubit" => Ok(ModelKind::TwoQubit),
            "jc" => Ok(ModelKind::JaynesCummings),
            other => Err(Error::config(
                "model",
                format!("unknown model `{other}` (expected two-qubit or jc)"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CouplingRegime {
    Weak,
    Moderate,
    Strong,
}

impl CouplingRegime {
    pub const ALL: [CouplingRegime; 3] = [
        CouplingRegime::Weak,
        CouplingRegime::Moderate,
        CouplingRegime::Strong,
    ];
}

impl fmt::Display for CouplingRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            CouplingRegime::Weak => "weak",
            CouplingRegime::Moderate => "moderate",
            CouplingRegime::Strong => "strong",
        })
    }
}

impl FromStr for CouplingRegime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "weak" => Ok(CouplingRegime::Weak),
            "moderate" => Ok(CouplingRegime::Moderate),
            "strong" => Ok(CouplingRegime::Strong),
            other => Err(Error::config(
                "coupling",
                format!("unknown coupling preset `{other}`"),
            )),
        }
    }
}

/// Physical parameters of either model (ħ = k_B = c = 1).
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub kind: ModelKind,
    /// Qubit transition frequency.
    pub omega0: f64,
    /// Resonator frequency (JC).
    pub omega_c: f64,
    /// Field-mode frequency (two-qubit).
    pub omega: f64,
    /// Inter-qubit separation.
    pub xi: f64,
    /// Coupling amplitude.
    pub lambda: f64,
    /// Highest Fock level kept; the bath dimension is `n_fock + 1`.
    pub n_fock: usize,
    pub include_zero_point: bool,
}

impl ModelParams {
    /// Defaults: ω₀ = 2, ω_c = 1, ω = 1, ξ = 0.05, λ = 0.
    pub fn defaults(kind: ModelKind) -> Self {
        Self {
            kind,
            omega0: 2.0,
            omega_c: 1.0,
            omega: 1.0,
            xi: 0.05,
            lambda: 0.0,
            n_fock: match kind {
                ModelKind::TwoQubit => DEFAULT_N_FOCK_TWO_QUBIT,
                ModelKind::JaynesCummings => DEFAULT_N_FOCK_JC,
            },
            include_zero_point: true,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_regime(self, regime: CouplingRegime) -> Self {
        let lambda = coupling_preset(regime, &self);
        self.with_lambda(lambda)
    }

    pub fn with_n_fock(mut self, n_fock: usize) -> Self {
        self.n_fock = n_fock;
        self
    }

    /// Frequency of the bosonic mode actually used by the model.
    pub fn bath_frequency(&self) -> f64 {
        match self.kind {
            ModelKind::TwoQubit => self.omega,
            ModelKind::JaynesCummings => self.omega_c,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega0", self.omega0),
            ("omegac", self.omega_c),
            ("omega", self.omega),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::param(
                "lambda",
                format!("must be >= 0, got {}", self.lambda),
            ));
        }
        if !(self.xi.is_finite() && self.xi >= 0.0) {
            return Err(Error::param("xi", format!("must be >= 0, got {}", self.xi)));
        }
        if self.n_fock < 1 {
            return Err(Error::param("n_fock", "must be >= 1"));
        }
        Ok(())
    }
}

/// Coupling amplitude for a named regime.
///
/// Two-qubit: strong means `λ√ω = ω₀`; JC: strong means `λ = ω₀`. Moderate
/// is half the strong value and weak is `10⁻³` of `ω₀` on the same scale.
pub fn coupling_preset(regime: CouplingRegime, params: &ModelParams) -> f64 {
    let strong = match params.kind {
        ModelKind::TwoQubit => params.omega0 / params.omega.sqrt(),
        ModelKind::JaynesCummings => params.omega0,
    };
    match regime {
        CouplingRegime::Strong => strong,
        CouplingRegime::Moderate => 0.5 * strong,
        CouplingRegime::Weak => 1e-3 * strong,
    }
}

/// Single-qubit operators in the `|e⟩, |g⟩` basis.
pub mod qubit {
    use crate::operator::ComplexOperator;

    pub fn sigma_x() -> ComplexOperator {
        ComplexOperator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn sigma_z() -> ComplexOperator {
        ComplexOperator::from_diagonal(&[1.0, -1.0])
    }

    /// `S^z = ½(|e⟩⟨e| - |g⟩⟨g|)`.
    pub fn spin_z() -> ComplexOperator {
        ComplexOperator::from_diagonal(&[0.5, -0.5])
    }

    /// `S⁺ = |e⟩⟨g|`.
    pub fn raising() -> ComplexOperator {
        ComplexOperator::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    /// `S⁻ = |g⟩⟨e|`.
    pub fn lowering() -> ComplexOperator {
        raising().adjoint()
    }
}

/// Ladder operators of one truncated bosonic mode.
#[derive(Clone, Debug)]
pub struct FockMode {
    pub annihilation: ComplexOperator,
    pub number: ComplexOperator,
    pub hamiltonian: ComplexOperator,
}

impl FockMode {
    pub fn creation(&self) -> ComplexOperator {
        self.annihilation.adjoint()
    }

    pub fn dim(&self) -> usize {
        self.number.dim()
    }
}

/// `a|n⟩ = √n|n-1⟩` on `n_fock + 1` levels with `H = ω(a†a + ½)` (the ½ only
/// when `include_zero_point`).
pub fn fock_mode(n_fock: usize, omega: f64, include_zero_point: bool) -> Result<FockMode> {
    if n_fock < 1 {
        return Err(Error::param("n_fock", "must be >= 1"));
    }
    let dim = n_fock + 1;
    let annihilation = ComplexOperator::from_fn(dim, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let levels: Vec<f64> = (0..dim).map(|n| n as f64).collect();
    let number = ComplexOperator::from_diagonal(&levels);
    let offset = if include_zero_point { 0.5 } else { 0.0 };
    let energies: Vec<f64> = levels.iter().map(|n| omega * (n + offset)).collect();
    Ok(FockMode {
        annihilation,
        number,
        hamiltonian: ComplexOperator::from_diagonal(&energies),
    })
}

/// A system–bath Hamiltonian `H_S ⊗ I + I ⊗ H_B + V_SB`.
#[derive(Clone, Debug)]
pub struct SystemBathModel {
    params: ModelParams,
    system_dim: usize,
    bath_dim: usize,
    h_system: ComplexOperator,
    h_bath: ComplexOperator,
    h_system_full: ComplexOperator,
    h_bath_full: ComplexOperator,
    coupling: ComplexOperator,
    total: ComplexOperator,
}

impl SystemBathModel {
    fn assemble(
        params: ModelParams,
        h_system: ComplexOperator,
        h_bath: ComplexOperator,
        coupling: ComplexOperator,
    ) -> Self {
        let system_dim = h_system.dim();
        let bath_dim = h_bath.dim();
        let h_system_full = tensor(&h_system, &ComplexOperator::identity(bath_dim));
        let h_bath_full = tensor(&ComplexOperator::identity(system_dim), &h_bath);
        let total = &(&h_system_full + &h_bath_full) + &coupling;
        Self {
            params,
            system_dim,
            bath_dim,
            h_system,
            h_bath,
            h_system_full,
            h_bath_full,
            coupling,
            total,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn kind(&self) -> ModelKind {
        self.params.kind
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn bath_dim(&self) -> usize {
        self.bath_dim
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.system_dim, self.bath_dim)
    }

    /// Bare system Hamiltonian on the system space.
    pub fn h_system(&self) -> &ComplexOperator {
        &self.h_system
    }

    /// Bath Hamiltonian on the bath space.
    pub fn h_bath(&self) -> &ComplexOperator {
        &self.h_bath
    }

    pub fn h_system_full(&self) -> &ComplexOperator {
        &self.h_system_full
    }

    pub fn h_bath_full(&self) -> &ComplexOperator {
        &self.h_bath_full
    }

    pub fn coupling(&self) -> &ComplexOperator {
        &self.coupling
    }

    pub fn h_total(&self) -> &ComplexOperator {
        &self.total
    }
}

/// Two qubits coupled to one field mode through
/// `V = -iλ√ω [(S₁⁺+S₁⁻)(a - a†) + (S₂⁺+S₂⁻)(a e^{iωξ} - a† e^{-iωξ})]`.
pub fn build_two_qubit_model(params: &ModelParams) -> Result<SystemBathModel> {
    params.validate()?;
    if params.kind != ModelKind::TwoQubit {
        return Err(Error::param("model", "expected two-qubit parameters"));
    }
    let i2 = ComplexOperator::identity(2);
    let sz = qubit::spin_z();
    let h_system = (&tensor(&sz, &i2) + &tensor(&i2, &sz)).scale(params.omega0);

    let mode = fock_mode(params.n_fock, params.omega, params.include_zero_point)?;
    let a = &mode.annihilation;
    let a_dag = mode.creation();

    let sx = &qubit::raising() + &qubit::lowering();
    let sx1 = tensor(&sx, &i2);
    let sx2 = tensor(&i2, &sx);
    let phase = C64::from_polar(1.0, params.omega * params.xi);
    let field1 = a - &a_dag;
    let field2 = &(a * phase) - &(&a_dag * phase.conj());
    let prefactor = C64::new(0.0, -params.lambda * params.omega.sqrt());
    let coupling = &(&tensor(&sx1, &field1) + &tensor(&sx2, &field2)) * prefactor;

    Ok(SystemBathModel::assemble(
        params.clone(),
        h_system,
        mode.hamiltonian,
        coupling,
    ))
}

/// `H = (ω₀/2)σ^z + ω_c a†a + λ σ^x (a + a†)`, counter-rotating terms kept.
pub fn build_jc_model(params: &ModelParams) -> Result<SystemBathModel> {
    params.validate()?;
    if params.kind != ModelKind::JaynesCummings {
        return Err(Error::param("model", "expected jc parameters"));
    }
    let h_system = qubit::sigma_z().scale(0.5 * params.omega0);
    let mode = fock_mode(params.n_fock, params.omega_c, params.include_zero_point)?;
    let field = &mode.annihilation + &mode.creation();
    let coupling = tensor(&qubit::sigma_x(), &field).scale(params.lambda);
    Ok(SystemBathModel::assemble(
        params.clone(),
        h_system,
        mode.hamiltonian,
        coupling,
    ))
}

/// Dispatches on `params.kind`.
pub fn build_model(params: &ModelParams) -> Result<SystemBathModel> {
    match params.kind {
        ModelKind::TwoQubit => build_two_qubit_model(params),
        ModelKind::JaynesCummings => build_jc_model(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::herm_eig;

    #[test]
    fn ladder_action_and_number_spectrum() {
        let m = fock_mode(4, 1.0, true).unwrap();
        // a|1> = |0>
        assert!((m.annihilation.entry(0, 1) - C64::new(1.0, 0.0)).norm() < 1e-15);
        let n = &m.creation() * &m.annihilation;
        assert!(n.max_abs_diff(&ComplexOperator::from_diagonal(&[0., 1., 2., 3., 4.])) < 1e-14);
        assert_eq!(m.hamiltonian.diagonal_real(), vec![0.5, 1.5, 2.5, 3.5, 4.5]);
    }

    #[test]
    fn truncated_commutator() {
        let n_fock = 6;
        let m = fock_mode(n_fock, 1.0, false).unwrap();
        let comm = m.annihilation.commutator(&m.creation());
        let mut expected = vec![1.0; n_fock + 1];
        expected[n_fock] = -(n_fock as f64);
        assert!(comm.max_abs_diff(&ComplexOperator::from_diagonal(&expected)) < 1e-13);
    }

    #[test]
    fn decoupled_two_qubit_is_sum_of_parts() {
        let p = ModelParams::defaults(ModelKind::TwoQubit).with_n_fock(5);
        let m = build_two_qubit_model(&p).unwrap();
        let sum = m.h_system_full() + m.h_bath_full();
        assert_eq!(m.h_total(), &sum);
        assert_eq!(m.system_dim(), 4);
    }

    #[test]
    fn two_qubit_reference_point_is_hermitian() {
        let p = ModelParams::defaults(ModelKind::TwoQubit)
            .with_n_fock(20)
            .with_regime(CouplingRegime::Strong);
        assert_eq!(p.lambda, 2.0);
        let m = build_two_qubit_model(&p).unwrap();
        assert_eq!(m.h_total().dim(), 84);
        let h = m.h_total();
        assert!(h.hermiticity_violation() <= 1e-12);
        assert!(m.coupling().is_hermitian());
    }

    #[test]
    fn collective_point_is_swap_symmetric() {
        let mut p = ModelParams::defaults(ModelKind::TwoQubit)
            .with_n_fock(6)
            .with_lambda(0.7);
        p.xi = 0.0;
        let m = build_two_qubit_model(&p).unwrap();
        let swap = ComplexOperator::from_real_rows(
            4,
            &[1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.],
        )
        .unwrap();
        let s = tensor(&swap, &ComplexOperator::identity(m.bath_dim()));
        assert!(s.commutator(m.coupling()).max_abs() < 1e-13);
    }

    #[test]
    fn jc_decoupled_spectrum_is_grid() {
        let mut p = ModelParams::defaults(ModelKind::JaynesCummings).with_n_fock(5);
        p.include_zero_point = false;
        let m = build_jc_model(&p).unwrap();
        let eig = herm_eig(m.h_total()).unwrap();
        let mut grid: Vec<f64> = (0..=5).flat_map(|n| [1.0 + n as f64, -1.0 + n as f64]).collect();
        grid.sort_by(f64::total_cmp);
        for (a, b) in eig.eigenvalues().iter().zip(&grid) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn jc_conserves_parity() {
        let p = ModelParams::defaults(ModelKind::JaynesCummings)
            .with_n_fock(12)
            .with_regime(CouplingRegime::Strong);
        assert_eq!((p.omega0, p.omega_c), (2.0, 1.0));
        let m = build_jc_model(&p).unwrap();
        let bath_parity: Vec<f64> = (0..m.bath_dim())
            .map(|n| if n % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let parity = tensor(&qubit::sigma_z(), &ComplexOperator::from_diagonal(&bath_parity));
        assert!(parity.commutator(m.h_total()).max_abs() < 1e-12);
    }

    #[test]
    fn presets() {
        let tq = ModelParams::defaults(ModelKind::TwoQubit);
        assert_eq!(coupling_preset(CouplingRegime::Strong, &tq), 2.0);
        assert_eq!(
            coupling_preset(CouplingRegime::Moderate, &tq),
            0.5 * coupling_preset(CouplingRegime::Strong, &tq)
        );
        let jc = ModelParams::defaults(ModelKind::JaynesCummings);
        assert_eq!(coupling_preset(CouplingRegime::Weak, &jc), 0.002);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = ModelParams::defaults(ModelKind::JaynesCummings);
        p.omega0 = -1.0;
        assert!(matches!(
            build_jc_model(&p),
            Err(Error::InvalidParameter { name: "omega0", .. })
        ));
        let p = ModelParams::defaults(ModelKind::JaynesCummings).with_lambda(-0.1);
        assert!(build_model(&p).is_err());
        let p = ModelParams::defaults(ModelKind::TwoQubit).with_n_fock(0);
        assert!(build_model(&p).is_err());
        let p = ModelParams::defaults(ModelKind::TwoQubit);
        assert!(build_jc_model(&p).is_err());
    }
}
