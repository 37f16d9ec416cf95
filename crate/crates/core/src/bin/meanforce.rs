//! Command-line driver for temperature sweeps.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
//! 3 completed with warnings (truncation not converged or rows that failed
//! to evaluate) or a numerical failure.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use meanforce::mean_force::{MeanForceSolver, ThermalContext};
use meanforce::model::build_model;
use meanforce::observables::thermal_point;
use meanforce::sweep::{read_pairs, run_sweep, write_records, SweepConfig, SweepMode, SweepOutcome};
use meanforce::work::{ergotropy_split_with, Dephasing};
use meanforce::Error;

#[derive(Parser)]
#[command(name = "meanforce", version, about = "Strong-coupling thermodynamics sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Thermal observables and ergotropy over a temperature grid.
    Sweep(Common),
    /// Entropy production after a fixed evolution time.
    Epsweep(Common),
    /// Full diagnostic dump at one temperature.
    Point {
        #[command(flatten)]
        common: Common,
        /// Temperature to evaluate (defaults to tmin).
        #[arg(long)]
        temperature: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated presets: weak, moderate, strong.
    #[arg(long)]
    coupling: Option<String>,
    /// Explicit coupling values (instead of presets).
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    lambda: Vec<String>,
    #[arg(long, allow_negative_numbers = true)]
    omega0: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    omegac: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<String>,
    #[arg(long = "n-fock")]
    n_fock: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    tmin: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    tmax: Option<String>,
    #[arg(long)]
    tsteps: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    time: Option<String>,
    #[arg(long = "fd-step", allow_negative_numbers = true)]
    fd_step: Option<String>,
    /// Comma-separated: thermal, ergotropy, entropy-production.
    #[arg(long)]
    outputs: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn pairs(&self) -> Result<Vec<(String, String)>, Error> {
        let mut pairs = match &self.config {
            Some(path) => read_pairs(path)?,
            None => Vec::new(),
        };
        let flags = [
            ("model", &self.model),
            ("coupling", &self.coupling),
            ("omega0", &self.omega0),
            ("omegac", &self.omegac),
            ("omega", &self.omega),
            ("xi", &self.xi),
            ("n-fock", &self.n_fock),
            ("tmin", &self.tmin),
            ("tmax", &self.tmax),
            ("tsteps", &self.tsteps),
            ("time", &self.time),
            ("fd-step", &self.fd_step),
            ("outputs", &self.outputs),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                pairs.push((key.to_string(), v.clone()));
            }
        }
        if !self.lambda.is_empty() {
            pairs.push(("lambda".into(), self.lambda.join(",")));
        }
        if let Some(out) = &self.out {
            pairs.push(("out".into(), out.display().to_string()));
        }
        Ok(pairs)
    }

    fn config(&self, mode: SweepMode) -> Result<SweepConfig, Error> {
        SweepConfig::from_pairs(mode, &self.pairs()?)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::InvalidParameter { .. } => 1,
        Error::Io(_) | Error::Csv(_) => 2,
        _ => 3,
    }
}

fn emit(text: &[u8], out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text)?,
    }
    Ok(())
}

fn report(outcome: &SweepOutcome) {
    let c = &outcome.convergence;
    eprintln!(
        "truncation check at T={} lambda={}: n_fock {} -> {}, worst change {:e} in {} ({})",
        c.temperature,
        c.lambda,
        c.n_fock,
        c.doubled,
        c.worst_change,
        c.worst_field,
        if c.passed { "converged" } else { "NOT converged" }
    );
    let errors = outcome.records.error_count();
    if errors > 0 {
        eprintln!("{errors} row(s) failed to evaluate; see the flags column");
    }
}

fn sweep(common: &Common, mode: SweepMode) -> Result<u8, Error> {
    let cfg = common.config(mode)?;
    let outcome = run_sweep(&cfg)?;
    let mut buf = Vec::new();
    write_records(&outcome.records, &mut buf)?;
    emit(&buf, &cfg.out)?;
    report(&outcome);
    Ok(if outcome.has_warnings() { 3 } else { 0 })
}

fn point(common: &Common, temperature: Option<f64>) -> Result<u8, Error> {
    let cfg = common.config(SweepMode::Thermal)?;
    let temperature = temperature.unwrap_or(cfg.t_min);
    let ctx = ThermalContext::from_temperature(temperature)?.with_fd_step(cfg.fd_step)?;
    let mut text = String::new();
    for coupling in &cfg.couplings {
        let model = build_model(&cfg.params_for(coupling))?;
        let solver = MeanForceSolver::new(&model)?;
        let p = thermal_point(&solver, &ctx)?;
        let jet = solver.jet(ctx.beta())?;
        let state = jet.state();
        let block = ergotropy_split_with(&state, model.h_system(), Dephasing::DegenerateBlocks)?;
        let flags: Vec<_> = p.flags().iter().map(|f| f.label()).collect();
        let rows: Vec<(&str, f64)> = vec![
            ("lambda", coupling.lambda),
            ("T", p.temperature),
            ("beta", p.beta),
            ("U_S", p.internal_energy),
            ("U_S_partition_route", p.internal_energy_partition),
            ("dU_S", p.energy_fluctuation),
            ("Q", p.quantum_uncertainty),
            ("K", p.classical_uncertainty),
            ("S_S", p.entropy),
            ("C_S", p.heat_capacity),
            ("C_S_printed_variant", p.heat_capacity_printed),
            ("C_direct", p.heat_capacity_direct),
            ("dET", p.d_et),
            ("F_beta", p.qfi_beta),
            ("F_T", p.qfi_temperature),
            ("snr_bound", p.snr_bound),
            ("snr_opt", p.snr_opt),
            ("hmf_relative_deviation", p.hmf_deviation),
            ("hmf_max_off_diagonal", p.hmf_off_diagonal),
            ("bare_energy", p.bare_energy),
            ("state_route_gap", p.state_route_gap),
            ("effective_energy_fd_gap", p.effective_energy_fd_gap),
            ("effective_energy_fd_halving_change", p.effective_energy_fd_change),
            ("ergotropy_total_vs_HS", p.ergotropy.total),
            ("ergotropy_coherent_vs_HS", p.ergotropy.coherent),
            ("ergotropy_incoherent_vs_HS", p.ergotropy.incoherent),
            ("ergotropy_incoherent_block_dephasing", block.incoherent),
            ("ergotropy_total_vs_HMF", p.ergotropy_hmf),
        ];
        let _ = writeln!(text, "[{} {}]", cfg.params.kind, coupling.label);
        let _ = writeln!(text, "n_fock = {}", cfg.params.n_fock);
        for (k, v) in rows {
            let _ = writeln!(text, "{k} = {v:e}");
        }
        let _ = writeln!(text, "flags = {}", flags.join(";"));
        let hmf = jet.hmf();
        for i in 0..hmf.dim() {
            let row: Vec<String> = (0..hmf.dim())
                .map(|j| {
                    let z = hmf.entry(i, j);
                    format!("{:+.6e}{:+.6e}i", z.re, z.im)
                })
                .collect();
            let _ = writeln!(text, "hmf[{i}] = {}", row.join(" "));
        }
        text.push('\n');
    }
    emit(text.as_bytes(), &cfg.out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Sweep(c) => sweep(c, SweepMode::Thermal),
        Command::Epsweep(c) => sweep(c, SweepMode::EntropyProduction),
        Command::Point { common, temperature } => point(common, *temperature),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
