use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::stats;
use super::{SweepResult, ThresholdFunction};

/// Largest `n` in the reported density profile.
pub const DEFAULT_DENSITY_MAX: u64 = 12;
/// Square counts are reported for squarefree `m` up to this bound.
pub const SQUARE_COUNT_BOUND: u64 = 20;

/// The JSON summary of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub curve: String,
    pub x: u64,
    pub count: usize,
    pub skipped: Vec<u64>,
    pub unresolved: usize,
    pub threshold_ratios: BTreeMap<String, Option<f64>>,
    pub density_profile: Vec<(u64, f64)>,
    pub density_slope: Option<f64>,
    pub extremal_count: u64,
    pub extremal_reference: f64,
    pub square_counts: BTreeMap<u64, u64>,
    pub schoof_statistic: Option<f64>,
}

pub fn summarize(s: &SweepResult, fs: &[ThresholdFunction]) -> Summary {
    let density_profile = stats::density_profile(s, DEFAULT_DENSITY_MAX);
    let ns: Vec<u64> = density_profile.iter().map(|&(n, _)| n).collect();
    Summary {
        curve: s.curve.clone(),
        x: s.x,
        count: s.records.len(),
        skipped: s.skipped.clone(),
        unresolved: s.unresolved_count(),
        threshold_ratios: fs.iter().map(|f| (f.to_string(), stats::threshold_ratio(s, *f))).collect(),
        density_slope: stats::density_slope(s, &ns),
        density_profile,
        extremal_count: stats::extremal_count(s),
        extremal_reference: stats::extremal_reference(s.x),
        square_counts: stats::squarefree_upto(SQUARE_COUNT_BOUND)
            .into_iter()
            .map(|m| (m, stats::square_count(s, m).expect("m is squarefree")))
            .collect(),
        schoof_statistic: stats::schoof_statistic(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::builtin_registry;
    use crate::endoring::Engine;
    use crate::sweep::{run_sweep, SweepConfig};

    #[test]
    fn json_keys_and_totals() {
        let reg = builtin_registry();
        let s = run_sweep(reg.lookup("11a1").unwrap(), &SweepConfig::new(1000), &Engine::default()).unwrap();
        let sum = summarize(&s, &ThresholdFunction::default_list());
        let v: serde_json::Value = serde_json::to_value(&sum).unwrap();
        for key in [
            "curve",
            "x",
            "count",
            "skipped",
            "unresolved",
            "threshold_ratios",
            "density_profile",
            "density_slope",
            "extremal_count",
            "square_counts",
            "schoof_statistic",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["count"], s.records.len());
        assert_eq!(v["skipped"], serde_json::json!([11]));
        assert_eq!(v["threshold_ratios"].as_object().unwrap().len(), 4);
        assert!(v["threshold_ratios"].get("power(0.5)").is_some());
        assert_eq!(v["square_counts"].as_object().unwrap().len(), 13);
        let back: Summary = serde_json::from_value(v).unwrap();
        assert_eq!(back, sum);
    }
}
