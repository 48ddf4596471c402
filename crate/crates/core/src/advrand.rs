//! Finding `x` with `|g(x)| ≥ t` for a low-degree, low-influence `g`.
//!
//! Each repetition restricts `g` to a random subset `U` of rate `2^{-s}`,
//! takes greedy signs for the surviving linear part, and re-randomizes them
//! with a retention bias drawn from the halved Chebyshev extrema. Repetitions
//! run until one output passes the final check `|g(x)| ≥ t`.

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::calibration;
use crate::csp::{Assignment, Instance, InstanceKind};
use crate::error::{Error, Result};
use crate::fourier::{FourierError, MultilinearPoly};
use crate::report::{elapsed_millis, SolveReport};
use crate::rng::child_rng;

/// Largest supported degree bound.
pub const MAX_K: usize = 8;

/// Repetitions evaluated per parallel batch.
const BATCH: usize = 64;

/// Returns `g = (p − p̂(∅)) / stddev(p)` and `stddev(p)`.
pub fn normalize(p: &MultilinearPoly) -> std::result::Result<(MultilinearPoly, f64), FourierError> {
    let sd = p.stddev();
    if sd <= crate::fourier::COEFF_EPS {
        return Err(FourierError::ZeroVariance);
    }
    Ok((p.without_constant().scaled(1.0 / sd), sd))
}

/// `⌈log₂ k⌉`.
fn ceil_log2(k: usize) -> usize {
    (usize::BITS - (k - 1).leading_zeros()) as usize
}

/// Levels in band `s`: `(2^{s-1}, 2^s]`, and band 1 also holds level 1.
pub fn band(s: usize) -> (usize, usize) {
    let lo = if s == 1 { 1 } else { (1 << (s - 1)) + 1 };
    (lo, 1 << s)
}

/// The smallest scale whose band holds at least `1/(⌈log₂k⌉+1)` of the
/// Fourier mass, or the heaviest band if none does.
pub fn choose_scale(g: &MultilinearPoly, k: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::Precondition(format!("scale selection needs k >= 2, got {k}")));
    }
    let bands = ceil_log2(k);
    let threshold = 1.0 / (bands + 1) as f64;
    let masses: Vec<f64> = (1..=bands)
        .map(|s| {
            let (lo, hi) = band(s);
            g.level_mass(lo, hi)
        })
        .collect();
    if let Some(pos) = masses.iter().position(|&m| m >= threshold) {
        return Ok(pos + 1);
    }
    let best = masses.iter().enumerate().fold(0, |b, (i, &m)| if m > masses[b] { i } else { b });
    Ok(best + 1)
}

/// A random restriction: variables in `U` stay free, the rest are fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct Restriction {
    /// Free variables, increasing.
    pub u: Vec<u32>,
    /// `0` on `U`, the fixed ±1 value elsewhere.
    pub fixed: Vec<i8>,
    pub g_y: MultilinearPoly,
}

pub fn random_restriction<R: Rng + ?Sized>(g: &MultilinearPoly, s: usize, rng: &mut R) -> Restriction {
    let rate = 0.5f64.powi(s as i32);
    let mut u = Vec::new();
    let fixed: Vec<i8> = (0..g.n() as u32)
        .map(|i| {
            if rng.gen::<f64>() < rate {
                u.push(i);
                0
            } else if rng.gen::<bool>() {
                1
            } else {
                -1
            }
        })
        .collect();
    let g_y = g.restrict_dense(&fixed);
    Restriction { u, fixed, g_y }
}

/// `x*_j = sgn ĝ_y({j})` for `j ∈ U`, with `sgn 0 = +1`; aligned with `u`.
pub fn greedy_signs(g_y: &MultilinearPoly, u: &[u32]) -> Vec<i8> {
    u.iter().map(|&j| if g_y.coefficient(&[j]) >= 0.0 { 1 } else { -1 }).collect()
}

/// `cos(jπ/k)` for `j = 0..=k`.
pub fn chebyshev_extrema(k: usize) -> Vec<f64> {
    (0..=k).map(|j| (j as f64 * PI / k as f64).cos()).collect()
}

/// Flips each coordinate independently with probability `(1 − η)/2`, so
/// each output coordinate has mean `η · x*_j`.
pub fn noise_flip<R: Rng + ?Sized>(x_star: &[i8], eta: f64, rng: &mut R) -> Vec<i8> {
    let p = (1.0 - eta) / 2.0;
    x_star.iter().map(|&v| if rng.gen::<f64>() < p { -v } else { v }).collect()
}

/// Extrema order used for degree bound `k`: odd degrees as is, even ones
/// padded by one.
pub fn effective_degree(k: usize) -> usize {
    if k % 2 == 0 {
        k + 1
    } else {
        k
    }
}

/// `max_r |(T_{η_r/2} g_y)(x*)|` over the halved extrema, with its `r`.
/// `x_star` is aligned with `u`.
pub fn best_noise_level(g_y: &MultilinearPoly, u: &[u32], x_star: &[i8], k: usize) -> (usize, f64) {
    let mut point = vec![0.0; g_y.n()];
    let mut best = (0, f64::NEG_INFINITY);
    for (r, eta) in chebyshev_extrema(effective_degree(k)).into_iter().enumerate() {
        for (&j, &v) in u.iter().zip(x_star) {
            point[j as usize] = eta / 2.0 * v as f64;
        }
        let val = g_y.evaluate_at_biases(&point).expect("point has length n and entries in [-1/2, 1/2]").abs();
        if val > best.1 {
            best = (r, val);
        }
    }
    best
}

#[derive(Clone, Debug)]
pub struct AdvRandParams {
    pub t: f64,
    pub max_reps: usize,
    /// Degree bound.
    pub k: usize,
}

impl AdvRandParams {
    pub fn new(t: f64, k: usize) -> Self {
        AdvRandParams { t, max_reps: default_reps(k), k }
    }

    /// Whether `Inf_i[g] ≤ C^{-k} t^{-2}` holds for every `i`.
    pub fn precondition_holds(&self, g: &MultilinearPoly) -> bool {
        max_influence(g) <= precondition_bound(self.k, self.t)
    }
}

/// `C^{-k} t^{-2}`.
pub fn precondition_bound(k: usize, t: f64) -> f64 {
    calibration::INFLUENCE_C.powi(-(k as i32)) / (t * t)
}

pub fn max_influence(g: &MultilinearPoly) -> f64 {
    g.influences().into_iter().fold(0.0, f64::max)
}

/// `⌈64 e^{2k}⌉`, saturating.
pub fn default_reps(k: usize) -> usize {
    let r = (64.0 * (2.0 * k as f64).exp()).ceil();
    if r >= usize::MAX as f64 {
        usize::MAX
    } else {
        r as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdvOutcome {
    pub x: Vec<i8>,
    pub g_value: f64,
    /// Repetitions consumed, including the returned one.
    pub reps: usize,
    /// Draws with an empty `U`.
    pub empty_draws: usize,
}

/// One repetition. `None` when `U` came out empty.
fn one_rep<R: Rng + ?Sized>(g: &MultilinearPoly, s: usize, k_eff: usize, rng: &mut R) -> Option<(Vec<i8>, f64)> {
    let rest = random_restriction(g, s, rng);
    if rest.u.is_empty() {
        return None;
    }
    let x_star = greedy_signs(&rest.g_y, &rest.u);
    let r = rng.gen_range(0..=k_eff);
    let eta = (r as f64 * PI / k_eff as f64).cos() / 2.0;
    let flipped = noise_flip(&x_star, eta, rng);
    let mut x = rest.fixed;
    for (&j, &v) in rest.u.iter().zip(&flipped) {
        x[j as usize] = v;
    }
    let val = g.evaluate(&x).expect("x is a full ±1 point");
    Some((x, val))
}

fn linear_greedy(g: &MultilinearPoly) -> (Vec<i8>, f64) {
    let u: Vec<u32> = (0..g.n() as u32).collect();
    let x = greedy_signs(g, &u);
    let val = g.evaluate(&x).expect("x is a full ±1 point");
    (x, val)
}

/// Runs repetitions until `|g(x)| ≥ t`. Repetition `i` draws from stream
/// `i + 1` of `seed`, so the result does not depend on thread count. On
/// failure the best output seen is returned in the error.
pub fn adv_rand(g: &MultilinearPoly, params: &AdvRandParams, seed: u64) -> std::result::Result<AdvOutcome, AdvOutcome> {
    if params.k <= 1 {
        let (x, g_value) = linear_greedy(g);
        let out = AdvOutcome { x, g_value, reps: 1, empty_draws: 0 };
        return if g_value.abs() >= params.t { Ok(out) } else { Err(out) };
    }
    let s = choose_scale(g, params.k).expect("k >= 2 here");
    let k_eff = effective_degree(params.k);
    let mut best: Option<(Vec<i8>, f64)> = None;
    let mut empty_draws = 0;
    let mut done = 0;
    while done < params.max_reps {
        let batch = BATCH.min(params.max_reps - done);
        let results: Vec<Option<(Vec<i8>, f64)>> = (done..done + batch)
            .into_par_iter()
            .map(|rep| one_rep(g, s, k_eff, &mut child_rng(seed, rep as u64 + 1)))
            .collect();
        for (offset, res) in results.into_iter().enumerate() {
            let Some((x, val)) = res else {
                empty_draws += 1;
                continue;
            };
            if val.abs() >= params.t {
                return Ok(AdvOutcome { x, g_value: val, reps: done + offset + 1, empty_draws });
            }
            if best.as_ref().map_or(true, |b| val.abs() > b.1.abs()) {
                best = Some((x, val));
            }
        }
        done += batch;
    }
    let (x, g_value) = best.unwrap_or_else(|| (vec![1; g.n()], g.evaluate(&vec![1; g.n()]).unwrap_or(0.0)));
    Err(AdvOutcome { x, g_value, reps: done, empty_draws })
}

#[derive(Clone, Debug, Default)]
pub struct KxorParams {
    /// Overrides the calibrated `c_k` in `t = c_k √(m/D)`.
    pub t_scale: Option<f64>,
    pub reps: Option<usize>,
}

/// Max-kXOR through [`adv_rand`] on the normalized associated polynomial.
/// For odd `k` the better of `x` and `−x` is returned, so the value is at
/// least `1/2`.
pub fn solve_kxor(inst: &Instance, seed: u64, params: &KxorParams) -> Result<(Assignment, SolveReport)> {
    let start = Instant::now();
    let report = inst.validate();
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    let k = match inst.kind() {
        InstanceKind::KXor(k) if k <= MAX_K => k,
        InstanceKind::KXor(k) => return Err(Error::Precondition(format!("arity {k} exceeds {MAX_K}"))),
        InstanceKind::Generic => return Err(Error::Precondition("AdvRand needs a kXOR instance".into())),
    };
    let mut notes = Vec::new();
    let p = inst.associated_polynomial();
    let (g, scale) = normalize(&p)?;
    let d = inst.max_degree().max(1);
    let c_k = params.t_scale.unwrap_or_else(|| calibration::advrand_c(k));
    let t_target = (c_k * (inst.m() as f64 / d as f64).sqrt()).max(1.0);
    // Largest t allowed by the influence precondition.
    let t_pre = (calibration::INFLUENCE_C.powi(-(k as i32)) / max_influence(&g)).sqrt();
    let t = if t_target <= t_pre {
        t_target
    } else {
        let lowered = t_pre.max(1.0);
        notes.push(format!(
            "influence precondition caps t at {t_pre:.3e}; target {t_target:.3} lowered to {lowered:.3}"
        ));
        if t_pre < 1.0 {
            notes.push("precondition cannot hold with t >= 1; running with t = 1".into());
        }
        lowered
    };
    let adv = AdvRandParams { t, max_reps: params.reps.unwrap_or_else(|| default_reps(k)), k };
    let (outcome, exhausted) = match adv_rand(&g, &adv, seed) {
        Ok(o) => (o, false),
        Err(o) => {
            notes.push(format!("no repetition reached |g| >= {t:.3}; best |g| = {:.3}", o.g_value.abs()));
            (o, true)
        }
    };
    let mut x = outcome.x.clone();
    if k % 2 == 1 {
        let neg: Vec<i8> = x.iter().map(|v| -v).collect();
        if inst.satisfied_count(&neg)? > inst.satisfied_count(&x)? {
            x = neg;
        }
    } else {
        let side = if outcome.g_value >= 0.0 { "above" } else { "below" };
        notes.push(format!("even arity: value lies {side} 1/2"));
    }
    let mut report = SolveReport::new("advrand", inst, &x, Some(seed))?;
    report.reps = Some(outcome.reps);
    report.budget_exhausted = exhausted;
    report.notes = notes;
    report.note(format!("t = {t:.4}, g(x) = {:.4}, scale = {scale:.4e}", outcome.g_value));
    if outcome.empty_draws > 0 {
        report.note(format!("{} draws had an empty free set", outcome.empty_draws));
    }
    report.millis = elapsed_millis(start);
    Ok((Assignment::new(x)?, report))
}
