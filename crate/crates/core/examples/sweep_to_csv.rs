//! Programmatic temperature sweep written to CSV, then read back.
//!
//! Usage: cargo run --release --example sweep_to_csv -- [out.csv]

use meanforce::sweep::{read_csv, run_sweep, write_csv, Records, SweepConfig, SweepMode};

fn main() -> meanforce::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "jc_sweep.csv".into());
    let pairs: Vec<(String, String)> = [("model", "jc"), ("tmin", "0.1"), ("tmax", "3"), ("tsteps", "30")]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let cfg = SweepConfig::from_pairs(SweepMode::Thermal, &pairs)?;
    let outcome = run_sweep(&cfg)?;
    let c = &outcome.convergence;
    println!(
        "truncation {} -> {}: worst change {:.2e} in {} ({})",
        c.n_fock,
        c.doubled,
        c.worst_change,
        c.worst_field,
        if c.passed { "converged" } else { "not converged" }
    );
    write_csv(&outcome.records, std::path::Path::new(&out))?;

    if let Records::Thermal(rows) = read_csv(std::path::Path::new(&out))? {
        println!("wrote {} rows to {out}", rows.len());
        for r in rows.iter().filter(|r| r.coupling == "strong" && r.c_s < 0.0) {
            println!(
                "negative heat capacity at T = {:.3}: C_S = {:+.5}",
                r.temperature, r.c_s
            );
        }
    }
    Ok(())
}
