use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::run::{EntropyRecord, Records, ThermalRecord};

pub const THERMAL_HEADER: [&str; 21] = [
    "model",
    "coupling",
    "lambda",
    "n_fock",
    "T",
    "beta",
    "U_S",
    "dU_S",
    "Q",
    "K",
    "S_S",
    "C_S",
    "C_direct",
    "dET",
    "snr_bound",
    "snr_opt",
    "F_beta",
    "ergotropy_total",
    "ergotropy_coherent",
    "ergotropy_incoherent",
    "flags",
];

pub const ENTROPY_HEADER: [&str; 9] = [
    "model",
    "coupling",
    "lambda",
    "n_fock",
    "T",
    "t",
    "Sigma",
    "mutual_info",
    "flags",
];

/// Shortest decimal that round-trips to the same `f64`.
fn float(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

fn optional(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

fn thermal_row(r: &ThermalRecord) -> Vec<String> {
    vec![
        r.model.clone(),
        r.coupling.clone(),
        float(r.lambda),
        r.n_fock.to_string(),
        float(r.temperature),
        float(r.beta),
        float(r.u_s),
        float(r.du_s),
        float(r.q),
        float(r.k),
        float(r.s_s),
        float(r.c_s),
        float(r.c_direct),
        float(r.d_et),
        float(r.snr_bound),
        float(r.snr_opt),
        float(r.f_beta),
        optional(r.ergotropy_total),
        optional(r.ergotropy_coherent),
        optional(r.ergotropy_incoherent),
        r.flags.join(";"),
    ]
}

fn entropy_row(r: &EntropyRecord) -> Vec<String> {
    vec![
        r.model.clone(),
        r.coupling.clone(),
        float(r.lambda),
        r.n_fock.to_string(),
        float(r.temperature),
        float(r.t),
        float(r.sigma),
        float(r.mutual_info),
        r.flags.join(";"),
    ]
}

/// Writes the header and one row per record.
pub fn write_records<W: Write>(records: &Records, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    match records {
        Records::Thermal(rows) => {
            w.write_record(THERMAL_HEADER)?;
            for r in rows {
                w.write_record(thermal_row(r))?;
            }
        }
        Records::EntropyProduction(rows) => {
            w.write_record(ENTROPY_HEADER)?;
            for r in rows {
                w.write_record(entropy_row(r))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(records: &Records, path: &Path) -> Result<()> {
    write_records(records, File::create(path)?)
}

fn field<'a>(row: &'a csv::StringRecord, i: usize, name: &str) -> Result<&'a str> {
    row.get(i)
        .ok_or_else(|| Error::config(name, "missing column in CSV row"))
}

fn parse_f64(row: &csv::StringRecord, i: usize, name: &str) -> Result<f64> {
    let s = field(row, i, name)?;
    s.parse()
        .map_err(|_| Error::config(name, format!("not a number: `{s}`")))
}

fn parse_opt(row: &csv::StringRecord, i: usize, name: &str) -> Result<Option<f64>> {
    let s = field(row, i, name)?;
    if s.is_empty() {
        Ok(None)
    } else {
        parse_f64(row, i, name).map(Some)
    }
}

fn parse_usize(row: &csv::StringRecord, i: usize, name: &str) -> Result<usize> {
    let s = field(row, i, name)?;
    s.parse()
        .map_err(|_| Error::config(name, format!("not an integer: `{s}`")))
}

fn parse_flags(s: &str) -> Vec<String> {
    s.split(';').filter(|f| !f.is_empty()).map(String::from).collect()
}

/// Reads either CSV schema, detected from the header.
pub fn read_records<R: Read>(source: R) -> Result<Records> {
    let mut r = csv::Reader::from_reader(source);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header == THERMAL_HEADER {
        let mut rows = Vec::new();
        for row in r.records() {
            let row = row?;
            let h = &THERMAL_HEADER;
            rows.push(ThermalRecord {
                model: field(&row, 0, h[0])?.to_string(),
                coupling: field(&row, 1, h[1])?.to_string(),
                lambda: parse_f64(&row, 2, h[2])?,
                n_fock: parse_usize(&row, 3, h[3])?,
                temperature: parse_f64(&row, 4, h[4])?,
                beta: parse_f64(&row, 5, h[5])?,
                u_s: parse_f64(&row, 6, h[6])?,
                du_s: parse_f64(&row, 7, h[7])?,
                q: parse_f64(&row, 8, h[8])?,
                k: parse_f64(&row, 9, h[9])?,
                s_s: parse_f64(&row, 10, h[10])?,
                c_s: parse_f64(&row, 11, h[11])?,
                c_direct: parse_f64(&row, 12, h[12])?,
                d_et: parse_f64(&row, 13, h[13])?,
                snr_bound: parse_f64(&row, 14, h[14])?,
                snr_opt: parse_f64(&row, 15, h[15])?,
                f_beta: parse_f64(&row, 16, h[16])?,
                ergotropy_total: parse_opt(&row, 17, h[17])?,
                ergotropy_coherent: parse_opt(&row, 18, h[18])?,
                ergotropy_incoherent: parse_opt(&row, 19, h[19])?,
                flags: parse_flags(field(&row, 20, h[20])?),
            });
        }
        Ok(Records::Thermal(rows))
    } else if header == ENTROPY_HEADER {
        let mut rows = Vec::new();
        for row in r.records() {
            let row = row?;
            let h = &ENTROPY_HEADER;
            rows.push(EntropyRecord {
                model: field(&row, 0, h[0])?.to_string(),
                coupling: field(&row, 1, h[1])?.to_string(),
                lambda: parse_f64(&row, 2, h[2])?,
                n_fock: parse_usize(&row, 3, h[3])?,
                temperature: parse_f64(&row, 4, h[4])?,
                t: parse_f64(&row, 5, h[5])?,
                sigma: parse_f64(&row, 6, h[6])?,
                mutual_info: parse_f64(&row, 7, h[7])?,
                flags: parse_flags(field(&row, 8, h[8])?),
            });
        }
        Ok(Records::EntropyProduction(rows))
    } else {
        Err(Error::config(
            "header",
            format!("unrecognized CSV header: {}", header.join(",")),
        ))
    }
}

pub fn read_csv(path: &Path) -> Result<Records> {
    read_records(File::open(path)?)
}
