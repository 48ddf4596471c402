use serde::{Deserialize, Serialize};

use crate::csp::{CspError, Instance};

/// Summary of one solver run. Serialized as the CLI's JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub alg: String,
    pub seed: Option<u64>,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "D")]
    pub d: usize,
    pub mu: f64,
    pub satisfied: usize,
    pub value: f64,
    /// `value - mu`.
    pub advantage: f64,
    /// `1/√D`.
    pub inv_sqrt_d: f64,
    /// `Σ_i √deg(i) / m`.
    pub sqrt_degree_sum: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reps: Option<usize>,
    /// `true` when a budgeted search ran out before reaching its target.
    pub budget_exhausted: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub per_rep_advantage: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub millis: u64,
}

impl SolveReport {
    /// Fills the instance statistics and the value of `x`.
    pub fn new(alg: &str, inst: &Instance, x: &[i8], seed: Option<u64>) -> Result<Self, CspError> {
        let value = inst.value_fraction(x)?;
        let mu = inst.mu();
        let d = inst.max_degree();
        Ok(SolveReport {
            alg: alg.to_string(),
            seed,
            n: inst.n(),
            m: inst.m(),
            d,
            mu,
            satisfied: value.satisfied,
            value: value.as_f64(),
            advantage: value.as_f64() - mu,
            inv_sqrt_d: if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() },
            sqrt_degree_sum: inst.sqrt_degree_yardstick(),
            trials: None,
            reps: None,
            budget_exhausted: false,
            per_rep_advantage: Vec::new(),
            notes: Vec::new(),
            millis: 0,
        })
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report fields are always serializable")
    }
}

/// Wall-clock milliseconds since `start`.
pub(crate) fn elapsed_millis(start: std::time::Instant) -> u64 {
    start.elapsed().as_millis().min(u64::MAX as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_field_names() {
        let mut inst = Instance::new(3);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        let r = SolveReport::new("xor3", &inst, &[1, 1, 1], Some(4)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["D"], 1);
        assert_eq!(v["value"], 1.0);
        assert_eq!(v["advantage"], 0.5);
        assert!(v.get("trials").is_none());
        let back: SolveReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
