use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::mean_force::DEFAULT_FD_STEP;
use crate::model::{coupling_preset, CouplingRegime, ModelKind, ModelParams};

/// Which computation a sweep performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// Thermal observables (and ergotropy) over a temperature grid.
    Thermal,
    /// Entropy production after a fixed evolution time.
    EntropyProduction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Output {
    Thermal,
    Ergotropy,
    EntropyProduction,
}

impl Output {
    fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "thermal" => Ok(Output::Thermal),
            "ergotropy" => Ok(Output::Ergotropy),
            "entropy-production" => Ok(Output::EntropyProduction),
            other => Err(Error::config("outputs", format!("unknown output `{other}`"))),
        }
    }
}

/// One coupling strength to sweep, with the label written to the CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Coupling {
    pub label: String,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub params: ModelParams,
    /// Sorted by increasing λ.
    pub couplings: Vec<Coupling>,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    /// Evolution time for entropy production.
    pub time: f64,
    pub outputs: Vec<Output>,
    pub fd_step: f64,
    pub out: Option<PathBuf>,
}

/// Every key accepted in a config file or as a `--key` flag.
pub const KEYS: &[&str] = &[
    "model",
    "coupling",
    "lambda",
    "omega0",
    "omegac",
    "omega",
    "xi",
    "n-fock",
    "zero-point",
    "tmin",
    "tmax",
    "tsteps",
    "time",
    "outputs",
    "fd-step",
    "out",
];

fn canonical_key(key: &str) -> Result<String> {
    let k = key.trim().to_ascii_lowercase().replace('_', "-");
    if KEYS.contains(&k.as_str()) {
        Ok(k)
    } else {
        Err(Error::config(key.trim(), "unknown key"))
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::config(
                format!("line {}", lineno + 1),
                format!("expected key = value, got `{line}`"),
            )
        })?;
        pairs.push((canonical_key(key)?, value.trim().to_string()));
    }
    Ok(pairs)
}

pub fn read_pairs(path: &Path) -> Result<Vec<(String, String)>> {
    parse_pairs(&fs::read_to_string(path)?)
}

fn number(field: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::config(field, format!("not a number: `{value}`")))?;
    if !v.is_finite() {
        return Err(Error::config(field, format!("not finite: `{value}`")));
    }
    Ok(v)
}

fn integer(field: &str, value: &str) -> Result<usize> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::config(field, format!("not a non-negative integer: `{value}`")))
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl SweepConfig {
    /// Builds a validated config from `(key, value)` pairs. Later pairs win,
    /// so file pairs followed by flag pairs gives flag-over-file precedence.
    pub fn from_pairs(mode: SweepMode, pairs: &[(String, String)]) -> Result<Self> {
        let mut kind = ModelKind::TwoQubit;
        for (k, v) in pairs {
            if canonical_key(k)? == "model" {
                kind = v.parse()?;
            }
        }
        let mut params = ModelParams::defaults(kind);
        let (t_min, t_max, time) = match (mode, kind) {
            (SweepMode::Thermal, _) => (0.1, 6.0, 1.0),
            (SweepMode::EntropyProduction, ModelKind::TwoQubit) => (0.5, 5.0, 1.0),
            (SweepMode::EntropyProduction, ModelKind::JaynesCummings) => (0.5, 5.0, 0.5),
        };
        let mut cfg = SweepConfig {
            mode,
            params: params.clone(),
            couplings: Vec::new(),
            t_min,
            t_max,
            t_steps: 60,
            time,
            outputs: match mode {
                SweepMode::Thermal => vec![Output::Thermal, Output::Ergotropy],
                SweepMode::EntropyProduction => vec![Output::EntropyProduction],
            },
            fd_step: DEFAULT_FD_STEP,
            out: None,
        };
        let mut regimes: Option<Vec<CouplingRegime>> = None;
        let mut lambdas: Option<Vec<f64>> = None;

        for (key, value) in pairs {
            let key = canonical_key(key)?;
            let v = value.as_str();
            match key.as_str() {
                "model" => {}
                "coupling" => {
                    regimes = Some(list(v).map(str::parse).collect::<Result<Vec<_>>>()?);
                }
                "lambda" => {
                    lambdas = Some(list(v).map(|x| number("lambda", x)).collect::<Result<Vec<_>>>()?);
                }
                "omega0" => params.omega0 = number(&key, v)?,
                "omegac" => params.omega_c = number(&key, v)?,
                "omega" => params.omega = number(&key, v)?,
                "xi" => params.xi = number(&key, v)?,
                "n-fock" => params.n_fock = integer(&key, v)?,
                "zero-point" => {
                    params.include_zero_point = match v.trim() {
                        "true" | "1" | "yes" => true,
                        "false" | "0" | "no" => false,
                        other => {
                            return Err(Error::config(&key, format!("expected a boolean, got `{other}`")))
                        }
                    }
                }
                "tmin" => cfg.t_min = number(&key, v)?,
                "tmax" => cfg.t_max = number(&key, v)?,
                "tsteps" => cfg.t_steps = integer(&key, v)?,
                "time" => cfg.time = number(&key, v)?,
                "outputs" => cfg.outputs = list(v).map(Output::parse).collect::<Result<Vec<_>>>()?,
                "fd-step" => cfg.fd_step = number(&key, v)?,
                "out" => cfg.out = Some(PathBuf::from(v.trim())),
                _ => unreachable!("key validated by canonical_key"),
            }
        }

        params
            .validate()
            .map_err(|e| Error::config(param_field(&e), e.to_string()))?;
        cfg.couplings = match (regimes, lambdas) {
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    "lambda",
                    "give either coupling presets or explicit lambda values",
                ))
            }
            (None, Some(ls)) => ls
                .into_iter()
                .map(|lambda| Coupling {
                    label: "custom".into(),
                    lambda,
                })
                .collect(),
            (regimes, None) => regimes
                .unwrap_or_else(|| CouplingRegime::ALL.to_vec())
                .into_iter()
                .map(|r| Coupling {
                    label: r.to_string(),
                    lambda: coupling_preset(r, &params),
                })
                .collect(),
        };
        cfg.couplings
            .sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.label.cmp(&b.label)));
        cfg.couplings.dedup();
        cfg.params = params;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0) {
            return Err(Error::config(
                "tmin",
                format!("must be positive, got {}", self.t_min),
            ));
        }
        if !(self.t_min < self.t_max) {
            return Err(Error::config(
                "tmax",
                format!("tmin ({}) must be below tmax ({})", self.t_min, self.t_max),
            ));
        }
        if self.t_steps < 2 {
            return Err(Error::config("tsteps", "need at least 2 temperatures"));
        }
        if self.outputs.is_empty() {
            return Err(Error::config("outputs", "at least one output is required"));
        }
        if self.couplings.is_empty() {
            return Err(Error::config("coupling", "at least one coupling is required"));
        }
        for c in &self.couplings {
            if !(c.lambda >= 0.0) {
                return Err(Error::config("lambda", format!("must be >= 0, got {}", c.lambda)));
            }
        }
        if !(self.time >= 0.0) {
            return Err(Error::config("time", format!("must be >= 0, got {}", self.time)));
        }
        if !(self.fd_step > 0.0 && self.fd_step <= 1e-2) {
            return Err(Error::config(
                "fd-step",
                format!("must lie in (0, 1e-2], got {}", self.fd_step),
            ));
        }
        Ok(())
    }

    /// Uniform temperature grid including both endpoints.
    pub fn temperatures(&self) -> Vec<f64> {
        let n = self.t_steps;
        let span = self.t_max - self.t_min;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.t_max
                } else {
                    self.t_min + span * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }

    /// Model parameters for one coupling.
    pub fn params_for(&self, coupling: &Coupling) -> ModelParams {
        self.params.clone().with_lambda(coupling.lambda)
    }

    /// The coupling used for the truncation check (largest λ).
    pub fn strongest(&self) -> &Coupling {
        self.couplings.last().expect("validated nonempty")
    }
}

fn param_field(e: &Error) -> String {
    match e {
        Error::InvalidParameter { name, .. } => name.replace('_', "-"),
        _ => "model".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn jc_defaults() {
        let c = SweepConfig::from_pairs(SweepMode::Thermal, &pairs(&[("model", "jc")])).unwrap();
        assert_eq!(c.params.omega0, 2.0);
        assert_eq!(c.params.omega_c, 1.0);
        assert_eq!(c.couplings.len(), 3);
        assert_eq!(c.strongest().lambda, 2.0);
        assert_eq!(c.temperatures().len(), 60);
        assert_eq!(c.temperatures()[59], 6.0);
    }

    #[test]
    fn two_qubit_defaults() {
        let c = SweepConfig::from_pairs(SweepMode::EntropyProduction, &[]).unwrap();
        assert_eq!(c.params.kind, ModelKind::TwoQubit);
        assert_eq!((c.params.omega0, c.params.xi, c.params.omega), (2.0, 0.05, 1.0));
        assert_eq!((c.t_min, c.t_max, c.time), (0.5, 5.0, 1.0));
    }

    #[test]
    fn later_pairs_override() {
        let text = "# file\nmodel = jc\ntmax = 3\nn_fock = 12\n";
        let mut p = parse_pairs(text).unwrap();
        p.extend(pairs(&[("tmax", "4"), ("coupling", "strong")]));
        let c = SweepConfig::from_pairs(SweepMode::Thermal, &p).unwrap();
        assert_eq!(c.t_max, 4.0);
        assert_eq!(c.params.n_fock, 12);
        assert_eq!(
            c.couplings,
            vec![Coupling {
                label: "strong".into(),
                lambda: 2.0
            }]
        );
    }

    #[test]
    fn rejects_bad_input() {
        let err = SweepConfig::from_pairs(SweepMode::Thermal, &pairs(&[("tmin", "3"), ("tmax", "1")]));
        assert!(matches!(err, Err(Error::Config { ref field, .. }) if field == "tmax"));
        assert!(matches!(parse_pairs("bogus = 1"), Err(Error::Config { ref field, .. }) if field == "bogus"));
        let err = SweepConfig::from_pairs(SweepMode::Thermal, &pairs(&[("omega0", "-2")]));
        assert!(matches!(err, Err(Error::Config { ref field, .. }) if field == "omega0"));
        assert!(SweepConfig::from_pairs(SweepMode::Thermal, &pairs(&[("tsteps", "1")])).is_err());
        assert!(SweepConfig::from_pairs(SweepMode::Thermal, &pairs(&[("outputs", "")])).is_err());
    }
}
