use rayon::prelude::*;

use crate::error::Result;
use crate::mean_force::{MeanForceSolver, ThermalContext};
use crate::model::{build_model, ModelKind, SystemBathModel};
use crate::observables::{thermal_point, ThermalPoint};
use crate::operator::DensityMatrix;
use crate::work::{bell_state, plus_state, Propagator};

use super::config::{Coupling, Output, SweepConfig, SweepMode};

/// Largest relative shift allowed when `n_fock` is doubled.
pub const CONVERGENCE_TOL: f64 = 1e-6;
/// Relative changes are measured against `max(|a|, |b|, floor)`.
pub const RELATIVE_FLOOR: f64 = 1e-10;
pub const CONVERGENCE_FLAG: &str = "convergence_warning";

/// One row of the thermal CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalRecord {
    pub model: String,
    pub coupling: String,
    pub lambda: f64,
    pub n_fock: usize,
    pub temperature: f64,
    pub beta: f64,
    pub u_s: f64,
    pub du_s: f64,
    pub q: f64,
    pub k: f64,
    pub s_s: f64,
    pub c_s: f64,
    pub c_direct: f64,
    pub d_et: f64,
    pub snr_bound: f64,
    pub snr_opt: f64,
    pub f_beta: f64,
    pub ergotropy_total: Option<f64>,
    pub ergotropy_coherent: Option<f64>,
    pub ergotropy_incoherent: Option<f64>,
    pub flags: Vec<String>,
}

/// One row of the entropy-production CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyRecord {
    pub model: String,
    pub coupling: String,
    pub lambda: f64,
    pub n_fock: usize,
    pub temperature: f64,
    pub t: f64,
    pub sigma: f64,
    pub mutual_info: f64,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Records {
    Thermal(Vec<ThermalRecord>),
    EntropyProduction(Vec<EntropyRecord>),
}

impl Records {
    pub fn len(&self) -> usize {
        match self {
            Records::Thermal(r) => r.len(),
            Records::EntropyProduction(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of rows that failed to evaluate.
    pub fn error_count(&self) -> usize {
        let is_err = |f: &Vec<String>| f.iter().any(|s| s.starts_with("error:"));
        match self {
            Records::Thermal(r) => r.iter().filter(|x| is_err(&x.flags)).count(),
            Records::EntropyProduction(r) => r.iter().filter(|x| is_err(&x.flags)).count(),
        }
    }
}

/// Outcome of the `n_fock`-doubling check.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub n_fock: usize,
    pub doubled: usize,
    pub temperature: f64,
    pub lambda: f64,
    /// Column with the largest relative shift and that shift.
    pub worst_field: String,
    pub worst_change: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub records: Records,
    pub convergence: ConvergenceReport,
}

impl SweepOutcome {
    pub fn has_warnings(&self) -> bool {
        !self.convergence.passed || self.records.error_count() > 0
    }
}

fn relative_change(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs()).max(RELATIVE_FLOOR)
}

fn initial_state(kind: ModelKind) -> DensityMatrix {
    match kind {
        ModelKind::TwoQubit => bell_state(),
        ModelKind::JaynesCummings => plus_state(),
    }
}

fn thermal_record(
    cfg: &SweepConfig,
    coupling: &Coupling,
    n_fock: usize,
    temperature: f64,
    point: Result<ThermalPoint>,
) -> ThermalRecord {
    let ergo = cfg.wants(Output::Ergotropy);
    let base = |flags: Vec<String>| ThermalRecord {
        model: cfg.params.kind.to_string(),
        coupling: coupling.label.clone(),
        lambda: coupling.lambda,
        n_fock,
        temperature,
        beta: 1.0 / temperature,
        u_s: f64::NAN,
        du_s: f64::NAN,
        q: f64::NAN,
        k: f64::NAN,
        s_s: f64::NAN,
        c_s: f64::NAN,
        c_direct: f64::NAN,
        d_et: f64::NAN,
        snr_bound: f64::NAN,
        snr_opt: f64::NAN,
        f_beta: f64::NAN,
        ergotropy_total: None,
        ergotropy_coherent: None,
        ergotropy_incoherent: None,
        flags,
    };
    match point {
        Err(e) => base(vec![format!("error: {e}")]),
        Ok(p) => {
            let flags = p.flags().iter().map(|f| f.label().to_string()).collect();
            ThermalRecord {
                beta: p.beta,
                u_s: p.internal_energy,
                du_s: p.energy_fluctuation,
                q: p.quantum_uncertainty,
                k: p.classical_uncertainty,
                s_s: p.entropy,
                c_s: p.heat_capacity,
                c_direct: p.heat_capacity_direct,
                d_et: p.d_et,
                snr_bound: p.snr_bound,
                snr_opt: p.snr_opt,
                f_beta: p.qfi_beta,
                ergotropy_total: ergo.then_some(p.ergotropy.total),
                ergotropy_coherent: ergo.then_some(p.ergotropy.coherent),
                ergotropy_incoherent: ergo.then_some(p.ergotropy.incoherent),
                ..base(flags)
            }
        }
    }
}

impl ThermalRecord {
    /// Numeric columns as `(name, value)` pairs.
    pub fn scalars(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![
            ("U_S", self.u_s),
            ("dU_S", self.du_s),
            ("Q", self.q),
            ("K", self.k),
            ("S_S", self.s_s),
            ("C_S", self.c_s),
            ("C_direct", self.c_direct),
            ("dET", self.d_et),
            ("snr_bound", self.snr_bound),
            ("snr_opt", self.snr_opt),
            ("F_beta", self.f_beta),
        ];
        for (name, x) in [
            ("ergotropy_total", self.ergotropy_total),
            ("ergotropy_coherent", self.ergotropy_coherent),
            ("ergotropy_incoherent", self.ergotropy_incoherent),
        ] {
            if let Some(x) = x {
                v.push((name, x));
            }
        }
        v
    }
}

fn solver_for(cfg: &SweepConfig, coupling: &Coupling, n_fock: usize) -> Result<MeanForceSolver> {
    let params = cfg.params_for(coupling).with_n_fock(n_fock);
    MeanForceSolver::new(&build_model(&params)?)
}

fn evaluate_thermal(
    cfg: &SweepConfig,
    solver: &Result<MeanForceSolver>,
    coupling: &Coupling,
    n_fock: usize,
    temperature: f64,
) -> ThermalRecord {
    let point = solver.as_ref().map_err(clone_error).and_then(|s| {
        let ctx = ThermalContext::from_temperature(temperature)?.with_fd_step(cfg.fd_step)?;
        thermal_point(s, &ctx)
    });
    thermal_record(cfg, coupling, n_fock, temperature, point)
}

fn clone_error(e: &crate::Error) -> crate::Error {
    crate::Error::Numerical(e.to_string())
}

fn worst(pairs: impl IntoIterator<Item = (&'static str, f64, f64)>) -> (String, f64) {
    let mut out = (String::from("-"), 0.0);
    for (name, a, b) in pairs {
        let c = if a.is_nan() || b.is_nan() {
            f64::INFINITY
        } else {
            relative_change(a, b)
        };
        if c > out.1 || (c.is_infinite() && out.1.is_finite()) {
            out = (name.to_string(), c);
        }
    }
    out
}

/// Evaluates a thermal sweep with the truncation check at
/// (lowest T, strongest coupling).
pub fn run_thermal(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let n = cfg.params.n_fock;
    let strongest = cfg.strongest().clone();
    let (lo, hi) = rayon::join(
        || evaluate_thermal(cfg, &solver_for(cfg, &strongest, n), &strongest, n, cfg.t_min),
        || {
            evaluate_thermal(
                cfg,
                &solver_for(cfg, &strongest, 2 * n),
                &strongest,
                2 * n,
                cfg.t_min,
            )
        },
    );
    let (worst_field, worst_change) = worst(
        lo.scalars()
            .into_iter()
            .zip(hi.scalars())
            .map(|((name, a), (_, b))| (name, a, b)),
    );
    let convergence = ConvergenceReport {
        n_fock: n,
        doubled: 2 * n,
        temperature: cfg.t_min,
        lambda: strongest.lambda,
        passed: worst_change < CONVERGENCE_TOL,
        worst_field,
        worst_change,
    };

    let temperatures = cfg.temperatures();
    let solvers: Vec<_> = cfg.couplings.par_iter().map(|c| solver_for(cfg, c, n)).collect();
    let jobs: Vec<(usize, f64)> = (0..cfg.couplings.len())
        .flat_map(|i| temperatures.iter().map(move |&t| (i, t)))
        .collect();
    let mut records: Vec<ThermalRecord> = jobs
        .par_iter()
        .map(|&(i, t)| evaluate_thermal(cfg, &solvers[i], &cfg.couplings[i], n, t))
        .collect();
    if !convergence.passed {
        for r in &mut records {
            r.flags.push(CONVERGENCE_FLAG.into());
        }
    }
    Ok(SweepOutcome {
        records: Records::Thermal(records),
        convergence,
    })
}

fn evaluate_entropy(
    cfg: &SweepConfig,
    propagator: &Result<Propagator>,
    coupling: &Coupling,
    n_fock: usize,
    temperature: f64,
) -> EntropyRecord {
    let rho0 = initial_state(cfg.params.kind);
    let snap = propagator
        .as_ref()
        .map_err(clone_error)
        .and_then(|p| p.entropy_production(&rho0, 1.0 / temperature));
    let mut rec = EntropyRecord {
        model: cfg.params.kind.to_string(),
        coupling: coupling.label.clone(),
        lambda: coupling.lambda,
        n_fock,
        temperature,
        t: cfg.time,
        sigma: f64::NAN,
        mutual_info: f64::NAN,
        flags: Vec::new(),
    };
    match snap {
        Ok(s) => {
            rec.sigma = s.sigma;
            rec.mutual_info = s.mutual_info;
            if s.sigma < -1e-10 {
                rec.flags.push("negative_sigma".into());
            }
        }
        Err(e) => rec.flags.push(format!("error: {e}")),
    }
    rec
}

fn propagator_for(cfg: &SweepConfig, coupling: &Coupling, n_fock: usize) -> Result<Propagator> {
    let model: SystemBathModel = build_model(&cfg.params_for(coupling).with_n_fock(n_fock))?;
    Propagator::new(&model, cfg.time)
}

/// Entropy production of the model's reference initial state (Bell state
/// for two qubits, `|+⟩` for JC) over the temperature grid.
pub fn run_entropy_production(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let n = cfg.params.n_fock;
    let strongest = cfg.strongest().clone();
    let (lo, hi) = rayon::join(
        || evaluate_entropy(cfg, &propagator_for(cfg, &strongest, n), &strongest, n, cfg.t_min),
        || {
            evaluate_entropy(
                cfg,
                &propagator_for(cfg, &strongest, 2 * n),
                &strongest,
                2 * n,
                cfg.t_min,
            )
        },
    );
    let (worst_field, worst_change) = worst([
        ("Sigma", lo.sigma, hi.sigma),
        ("mutual_info", lo.mutual_info, hi.mutual_info),
    ]);
    let convergence = ConvergenceReport {
        n_fock: n,
        doubled: 2 * n,
        temperature: cfg.t_min,
        lambda: strongest.lambda,
        passed: worst_change < CONVERGENCE_TOL,
        worst_field,
        worst_change,
    };

    let temperatures = cfg.temperatures();
    let propagators: Vec<_> = cfg
        .couplings
        .par_iter()
        .map(|c| propagator_for(cfg, c, n))
        .collect();
    let jobs: Vec<(usize, f64)> = (0..cfg.couplings.len())
        .flat_map(|i| temperatures.iter().map(move |&t| (i, t)))
        .collect();
    let mut records: Vec<EntropyRecord> = jobs
        .par_iter()
        .map(|&(i, t)| evaluate_entropy(cfg, &propagators[i], &cfg.couplings[i], n, t))
        .collect();
    if !convergence.passed {
        for r in &mut records {
            r.flags.push(CONVERGENCE_FLAG.into());
        }
    }
    Ok(SweepOutcome {
        records: Records::EntropyProduction(records),
        convergence,
    })
}

/// Runs the sweep selected by `cfg.mode`. Records come back ordered by
/// (coupling strength, T) regardless of evaluation order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    match cfg.mode {
        SweepMode::Thermal => run_thermal(cfg),
        SweepMode::EntropyProduction => run_entropy_production(cfg),
    }
}
