//! Advantage sweeps over `D` with per-row seeds and threshold checks.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csp::Instance;
use crate::error::{Error, Result};
use crate::gen::{random_kxor, triangle_free_random, MixPredicate};
use crate::rng::derive_seed;
use crate::solve::{solve, Algorithm, SolveOptions};

/// Minimum mean advantage on kXOR families, in units of `1/√D`.
pub const KXOR_MIN_ADVANTAGE: f64 = 0.01;
/// Minimum mean advantage on triangle-free families, in units of `Σ√deg(i)/m`.
pub const TRIFREE_MIN_ADVANTAGE: f64 = 0.02;
/// The small-D to large-D mean-advantage ratio must lie within this factor of
/// `√(D_max/D_min)` in either direction.
pub const RATIO_SLACK: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchAlg {
    Xor3,
    Xor3Derand,
    Advrand,
    Trifree,
}

impl BenchAlg {
    pub fn name(self) -> &'static str {
        match self {
            BenchAlg::Xor3 => "xor3",
            BenchAlg::Xor3Derand => "xor3-derand",
            BenchAlg::Advrand => "advrand",
            BenchAlg::Trifree => "trifree",
        }
    }

    pub fn algorithm(self) -> Algorithm {
        match self {
            BenchAlg::Xor3 => Algorithm::Xor3,
            BenchAlg::Xor3Derand => Algorithm::Xor3Derand,
            BenchAlg::Advrand => Algorithm::Advrand,
            BenchAlg::Trifree => Algorithm::Trifree,
        }
    }
}

impl fmt::Display for BenchAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchAlg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [BenchAlg::Xor3, BenchAlg::Xor3Derand, BenchAlg::Advrand, BenchAlg::Trifree]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub alg: BenchAlg,
    pub n: usize,
    /// Constraint arity; fixed to 3 for the xor3 variants.
    pub k: usize,
    pub ds: Vec<usize>,
    pub seeds: usize,
    pub master_seed: u64,
}

impl BenchConfig {
    pub fn new(alg: BenchAlg, n: usize, ds: Vec<usize>, seeds: usize) -> Self {
        BenchConfig { alg, n, k: 3, ds, seeds, master_seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub alg: String,
    /// Requested degree bound.
    #[serde(rename = "D")]
    pub d: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub value: f64,
    pub advantage: f64,
    pub inv_sqrt_d: f64,
    pub sqrt_degree_sum: f64,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    #[serde(rename = "D")]
    pub d: usize,
    pub rows: usize,
    pub mean_advantage: f64,
    pub mean_inv_sqrt_d: f64,
    pub mean_sqrt_degree_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCheck {
    pub name: String,
    pub observed: f64,
    /// Inclusive bounds.
    pub lo: f64,
    pub hi: f64,
    pub passed: bool,
}

impl ThresholdCheck {
    fn new(name: String, observed: f64, lo: f64, hi: f64) -> Self {
        ThresholdCheck { name, observed, lo, hi, passed: observed >= lo && observed <= hi }
    }
}

impl fmt::Display for ThresholdCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: observed {:.6}", self.name, self.observed)?;
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => write!(f, " in [{:.6}, {:.6}]", self.lo, self.hi),
            (true, false) => write!(f, " >= {:.6}", self.lo),
            _ => write!(f, " <= {:.6}", self.hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
    pub summaries: Vec<BenchSummary>,
    pub checks: Vec<ThresholdCheck>,
}

impl BenchResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Row CSV followed by one `summary` row per `D`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = [
            "kind", "alg", "D", "seed", "n", "m", "max_degree", "value", "advantage", "inv_sqrt_d",
            "sqrt_degree_sum", "millis",
        ];
        w.write_record(header).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                "row".to_string(),
                r.alg.clone(),
                r.d.to_string(),
                r.seed.to_string(),
                r.n.to_string(),
                r.m.to_string(),
                r.max_degree.to_string(),
                r.value.to_string(),
                r.advantage.to_string(),
                r.inv_sqrt_d.to_string(),
                r.sqrt_degree_sum.to_string(),
                r.millis.to_string(),
            ])
            .expect("in-memory write");
        }
        for s in &self.summaries {
            w.write_record([
                "summary".to_string(),
                self.config.alg.to_string(),
                s.d.to_string(),
                String::new(),
                self.config.n.to_string(),
                String::new(),
                String::new(),
                String::new(),
                s.mean_advantage.to_string(),
                s.mean_inv_sqrt_d.to_string(),
                s.mean_sqrt_degree_sum.to_string(),
                String::new(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}

fn instance_for(cfg: &BenchConfig, d: usize, seed: u64) -> Result<Instance> {
    match cfg.alg {
        BenchAlg::Xor3 | BenchAlg::Xor3Derand => random_kxor(cfg.n, 3, d, seed),
        BenchAlg::Advrand => random_kxor(cfg.n, cfg.k, d, seed),
        BenchAlg::Trifree => Ok(triangle_free_random(cfg.n, cfg.k, d, seed, &MixPredicate::DEFAULT_MIX)?.instance),
    }
}

/// Runs one row per `(D, seed index)`. Row `i` generates its instance from
/// `derive_seed(master, 2i)` and solves with `derive_seed(master, 2i + 1)`.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchResult> {
    if cfg.ds.is_empty() || cfg.seeds == 0 {
        return Err(Error::Infeasible("bench needs at least one D and one seed".into()));
    }
    let jobs: Vec<(usize, u64)> =
        cfg.ds.iter().flat_map(|&d| (0..cfg.seeds as u64).map(move |s| (d, s))).collect();
    let rows = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(d, _))| {
            let gen_seed = derive_seed(cfg.master_seed, 2 * i as u64);
            let solve_seed = derive_seed(cfg.master_seed, 2 * i as u64 + 1);
            let inst = instance_for(cfg, d, gen_seed)?;
            let (_, report) = solve(&inst, cfg.alg.algorithm(), solve_seed, &SolveOptions::default())?;
            Ok(BenchRow {
                alg: cfg.alg.to_string(),
                d,
                seed: gen_seed,
                n: inst.n(),
                m: inst.m(),
                max_degree: report.d,
                value: report.value,
                advantage: report.advantage,
                inv_sqrt_d: 1.0 / (d as f64).sqrt(),
                sqrt_degree_sum: report.sqrt_degree_sum,
                millis: report.millis,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summaries = summarize(&cfg.ds, &rows);
    let checks = thresholds(cfg.alg, &summaries);
    Ok(BenchResult { config: cfg.clone(), rows, summaries, checks })
}

fn summarize(ds: &[usize], rows: &[BenchRow]) -> Vec<BenchSummary> {
    let mut seen = Vec::new();
    for &d in ds {
        if !seen.contains(&d) {
            seen.push(d);
        }
    }
    seen.into_iter()
        .map(|d| {
            let group: Vec<&BenchRow> = rows.iter().filter(|r| r.d == d).collect();
            let len = group.len() as f64;
            let mean = |f: fn(&BenchRow) -> f64| group.iter().map(|r| f(r)).sum::<f64>() / len;
            BenchSummary {
                d,
                rows: group.len(),
                mean_advantage: mean(|r| r.advantage),
                mean_inv_sqrt_d: mean(|r| r.inv_sqrt_d),
                mean_sqrt_degree_sum: mean(|r| r.sqrt_degree_sum),
            }
        })
        .collect()
}

/// Per-D floors, plus the scaling ratio between the smallest and largest D
/// on kXOR families.
pub fn thresholds(alg: BenchAlg, summaries: &[BenchSummary]) -> Vec<ThresholdCheck> {
    let mut checks = Vec::new();
    for s in summaries {
        let (name, floor) = match alg {
            BenchAlg::Trifree => (
                format!("D={} mean advantage >= {TRIFREE_MIN_ADVANTAGE} * sum sqrt(deg)/m", s.d),
                TRIFREE_MIN_ADVANTAGE * s.mean_sqrt_degree_sum,
            ),
            _ => (
                format!("D={} mean advantage >= {KXOR_MIN_ADVANTAGE}/sqrt(D)", s.d),
                KXOR_MIN_ADVANTAGE / (s.d as f64).sqrt(),
            ),
        };
        checks.push(ThresholdCheck::new(name, s.mean_advantage, floor, f64::INFINITY));
    }
    if alg != BenchAlg::Trifree {
        let lo = summaries.iter().min_by_key(|s| s.d);
        let hi = summaries.iter().max_by_key(|s| s.d);
        if let (Some(lo), Some(hi)) = (lo, hi) {
            if lo.d < hi.d {
                let target = (hi.d as f64 / lo.d as f64).sqrt();
                let ratio = lo.mean_advantage / hi.mean_advantage;
                let observed = if ratio.is_finite() { ratio } else { f64::INFINITY };
                checks.push(ThresholdCheck::new(
                    format!("D={} : D={} mean advantage ratio", lo.d, hi.d),
                    observed,
                    target / RATIO_SLACK,
                    target * RATIO_SLACK,
                ));
            }
        }
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in [BenchAlg::Xor3, BenchAlg::Xor3Derand, BenchAlg::Advrand, BenchAlg::Trifree] {
            assert_eq!(a.name().parse::<BenchAlg>().unwrap(), a);
        }
        assert!("brute".parse::<BenchAlg>().is_err());
    }

    #[test]
    fn ratio_window() {
        let s = |d, a| BenchSummary { d, rows: 1, mean_advantage: a, mean_inv_sqrt_d: 0.0, mean_sqrt_degree_sum: 0.0 };
        let checks = thresholds(BenchAlg::Xor3, &[s(4, 0.2), s(64, 0.05)]);
        let ratio = checks.last().unwrap();
        assert!(ratio.passed);
        assert!((ratio.lo - 2.0).abs() < 1e-12 && (ratio.hi - 8.0).abs() < 1e-12);
        let checks = thresholds(BenchAlg::Xor3, &[s(4, 0.2), s(64, 0.01)]);
        assert!(!checks.last().unwrap().passed);
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let cfg = BenchConfig::new(BenchAlg::Xor3, 60, vec![2, 4], 2);
        let a = run_bench(&cfg).unwrap();
        let b = run_bench(&cfg).unwrap();
        let strip = |r: &BenchResult| r.rows.iter().map(|r| (r.seed, r.m, r.value.to_bits())).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.rows.len(), 4);
        assert_eq!(a.summaries.len(), 2);
        let csv = a.to_csv();
        assert_eq!(csv.lines().count(), 1 + 4 + 2);
        assert!(csv.starts_with("kind,alg,D,seed"));
    }
}
