//! JSON interchange: the sparse coefficient format for circle functions and
//! a serializer that prints every float with 17 significant digits so that
//! repeated runs produce byte-identical files.

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Number, Value};

use crate::circlefn::{synthesize, CircleFunction};
use crate::error::{HardyError, Result};

/// Coefficients below this fraction of `max(1, peak)` are omitted on write.
pub const DROP_REL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub n_samples: usize,
    /// `[j, re, im]` triples, nonzero coefficients only.
    pub coeffs: Vec<(i64, f64, f64)>,
}

impl FunctionFile {
    pub fn from_function(f: &CircleFunction) -> Self {
        let peak = f.coeffs_symmetric().iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let coeffs = f
            .nonzero_coeffs(DROP_REL * peak.max(1.0))
            .into_iter()
            .map(|(j, c)| (j, c.re, c.im))
            .collect();
        FunctionFile {
            n_samples: f.n_samples(),
            coeffs,
        }
    }

    /// Rebuilds samples on `n_samples` (or the file's own grid).
    pub fn to_function(&self, n_samples: Option<usize>) -> Result<CircleFunction> {
        let pairs: Vec<(i64, Complex64)> = self.coeffs.iter().map(|&(j, re, im)| (j, Complex64::new(re, im))).collect();
        synthesize(&pairs, n_samples.unwrap_or(self.n_samples))
    }
}

impl Serialize for CircleFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionFile::from_function(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircleFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FunctionFile::deserialize(d)?
            .to_function(None)
            .map_err(serde::de::Error::custom)
    }
}

/// Parses `text`, mapping failures to a format error with line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        if e.line() == 0 {
            // Conversion errors raised after parsing carry no position.
            HardyError::Format(format!("{what}: {e}"))
        } else {
            HardyError::Format(format!("{what}: line {}, column {}: {e}", e.line(), e.column()))
        }
    })
}

pub fn function_from_json(text: &str, n_samples: Option<usize>) -> Result<CircleFunction> {
    parse_json::<FunctionFile>(text, "function file")?.to_function(n_samples)
}

pub fn function_to_json(f: &CircleFunction) -> Result<String> {
    to_json_string(&FunctionFile::from_function(f))
}

fn fixed_digits(x: f64) -> Value {
    if !x.is_finite() {
        // JSON has no infinities; keep the sentinel readable.
        return Value::String(format!("{x}"));
    }
    let s = format!("{x:.16e}");
    Value::Number(s.parse::<Number>().expect("formatted float is valid JSON"))
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => fixed_digits(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with floats at 17 significant digits, integers untouched.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| HardyError::Format(e.to_string()))?;
    let mut out = serde_json::to_string_pretty(&normalize(v)).map_err(|e| HardyError::Format(e.to_string()))?;
    out.push('\n');
    Ok(out)
}
