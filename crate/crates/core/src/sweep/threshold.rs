use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A threshold `f(p)`; a record counts when `b_p^2 <= f(p)`, which is the
/// same as `|delta_p| >= (4p - a_p^2) / f(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdFunction {
    Log,
    LogLog,
    Power(f64),
    Constant(f64),
}

impl ThresholdFunction {
    pub fn eval(&self, p: f64) -> f64 {
        match *self {
            ThresholdFunction::Log => p.ln(),
            ThresholdFunction::LogLog => p.ln().ln().powi(2),
            ThresholdFunction::Power(alpha) => p.powf(alpha),
            ThresholdFunction::Constant(c) => c,
        }
    }

    pub fn default_list() -> Vec<ThresholdFunction> {
        vec![
            ThresholdFunction::Log,
            ThresholdFunction::LogLog,
            ThresholdFunction::Power(0.1),
            ThresholdFunction::Power(0.5),
        ]
    }
}

impl fmt::Display for ThresholdFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdFunction::Log => f.write_str("log"),
            ThresholdFunction::LogLog => f.write_str("loglog"),
            ThresholdFunction::Power(a) => write!(f, "power({a})"),
            ThresholdFunction::Constant(c) => write!(f, "constant({c})"),
        }
    }
}

/// Accepts `log`, `loglog`, `power(A)` / `power:A`, `constant(C)` / `constant:C`.
impl FromStr for ThresholdFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown threshold function {s:?}"));
        match s {
            "log" => return Ok(ThresholdFunction::Log),
            "loglog" => return Ok(ThresholdFunction::LogLog),
            _ => {}
        }
        let (name, arg) = if let Some(open) = s.strip_suffix(')') {
            open.split_once('(').ok_or_else(bad)?
        } else {
            s.split_once(':').ok_or_else(bad)?
        };
        let value: f64 = arg.trim().parse().map_err(|_| bad())?;
        if !value.is_finite() {
            return Err(bad());
        }
        match name.trim() {
            "power" if value > 0.0 => Ok(ThresholdFunction::Power(value)),
            "constant" if value > 0.0 => Ok(ThresholdFunction::Constant(value)),
            _ => Err(bad()),
        }
    }
}
