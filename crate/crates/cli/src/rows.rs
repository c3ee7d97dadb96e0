//! Result rows and their CSV form.
//!
//! `raw_value` can be far outside the f64 range, so rows keep its natural
//! logarithm and the CSV prints it as a decimal mantissa and exponent.

use std::io::{Read, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use topress::lattice::LatticePoint;
use topress::solver::SolveStatus;
use topress::topological::PressureSample;

use crate::error::{config_error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub cover: String,
    pub mode: String,
    /// Coordinates joined by dashes.
    pub n: String,
    pub lambda_n: u64,
    /// `ln` of the raw value.
    #[serde(rename = "raw_value", serialize_with = "write_log_real", deserialize_with = "read_log_real")]
    pub log_value: f64,
    pub rate: f64,
    pub bound: Option<f64>,
    pub solver_status: String,
}

impl ResultRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        experiment: &str,
        cover: impl Into<String>,
        mode: impl ToString,
        n: &LatticePoint,
        lambda_n: u64,
        log_value: f64,
        bound: Option<f64>,
        status: SolveStatus,
    ) -> Self {
        ResultRow {
            experiment: experiment.to_string(),
            cover: cover.into(),
            mode: mode.to_string(),
            n: dash_joined(n),
            lambda_n,
            log_value,
            rate: log_value / lambda_n as f64,
            bound,
            solver_status: status.to_string(),
        }
    }

    pub fn from_sample(experiment: &str, cover: impl Into<String>, mode: impl ToString, s: &PressureSample) -> Self {
        Self::new(experiment, cover, mode, &s.n, s.lambda, s.log_value, None, s.status)
    }

    pub fn with_bound(mut self, bound: Option<f64>) -> Self {
        self.bound = bound;
        self
    }

    pub fn is_exact(&self) -> bool {
        self.solver_status == SolveStatus::Exact.to_string()
    }

    /// Smallest coordinate of `n`.
    pub fn n_min(&self) -> u64 {
        self.n.split('-').filter_map(|c| c.parse().ok()).min().unwrap_or(0)
    }
}

pub fn dash_joined(n: &LatticePoint) -> String {
    n.coords().iter().map(u64::to_string).collect::<Vec<_>>().join("-")
}

/// `e^l` as `d.ddddddddddddddde±x`, `0` for `l = -inf`.
pub fn format_log_real(l: f64) -> String {
    if l == f64::NEG_INFINITY {
        return "0".into();
    }
    if !l.is_finite() {
        return "inf".into();
    }
    let t = l / std::f64::consts::LN_10;
    let mut exp = t.floor();
    let mut mant = 10f64.powf(t - exp);
    if format!("{mant:.15}").starts_with("10") {
        mant /= 10.0;
        exp += 1.0;
    }
    format!("{mant:.15}e{}", exp as i64)
}

/// Inverse of [`format_log_real`]; also accepts plain decimal numbers.
pub fn parse_log_real(s: &str) -> Option<f64> {
    let s = s.trim();
    match s {
        "0" => return Some(f64::NEG_INFINITY),
        "inf" => return Some(f64::INFINITY),
        _ => {}
    }
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m.parse::<f64>().ok()?, e.parse::<i64>().ok()?),
        None => (s.parse::<f64>().ok()?, 0),
    };
    if mant < 0.0 {
        return None;
    }
    Some(mant.ln() + exp as f64 * std::f64::consts::LN_10)
}

fn write_log_real<S: Serializer>(l: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_log_real(*l))
}

fn read_log_real<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    let s = String::deserialize(d)?;
    parse_log_real(&s).ok_or_else(|| serde::de::Error::custom(format!("bad raw value {s:?}")))
}

pub fn write_rows(rows: &[ResultRow], out: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows(input: impl Read) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>()?;
    Ok(rows)
}

/// Checks that every rate recomputes from its raw value.
pub fn check_rates(rows: &[ResultRow], tol: f64) -> Result<()> {
    for (i, r) in rows.iter().enumerate() {
        let rate = r.log_value / r.lambda_n as f64;
        let ok = rate == r.rate || (rate - r.rate).abs() <= tol;
        if !ok {
            return Err(config_error(format!("row {i}: rate {} but raw value gives {rate}", r.rate)));
        }
    }
    Ok(())
}
