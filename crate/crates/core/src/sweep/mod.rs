//! Temperature sweeps with truncation checks and deterministic CSV output.

mod config;
mod run;
mod table;

pub use config::{parse_pairs, read_pairs, Coupling, Output, SweepConfig, SweepMode, KEYS};
pub use run::{
    run_entropy_production, run_sweep, run_thermal, ConvergenceReport, EntropyRecord, Records, SweepOutcome,
    ThermalRecord, CONVERGENCE_FLAG, CONVERGENCE_TOL, RELATIVE_FLOOR,
};
pub use table::{read_csv, read_records, write_csv, write_records, ENTROPY_HEADER, THERMAL_HEADER};
