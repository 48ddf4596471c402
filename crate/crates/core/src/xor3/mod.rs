//! Max-3XOR by decoupling.
//!
//! The associated polynomial `𝔓(x) = Σ a_ijk x_i x_j x_k` is relaxed to
//! `𝔓̃(y, z) = Σ_i y_i G_i(z)` with `G_i(z) = Σ_{j,k} a_ijk z_j z_k`. A random
//! `z` makes `Σ_i |G_i(z)|` large with constant probability, `y = sgn G(z)`
//! collects it, and a three-way rounding turns `(y, z)` into an `x` with
//! `E[𝔓(x)] = 𝔓̃(y, z)/3`.

mod fourwise;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::calibration;
use crate::csp::{Assignment, Instance, InstanceKind};
use crate::error::{Error, Result};
use crate::fourier::{MultilinearPoly, VarSet};
use crate::report::{elapsed_millis, SolveReport};
use crate::rng::child_rng;

pub use fourwise::{FourwiseSpace, MAX_FIELD_DEGREE};

/// The decoupled form of a degree-3 polynomial.
#[derive(Clone, Debug)]
pub struct DecoupledForm {
    n: usize,
    /// `a_ijk` keyed by the sorted triple.
    a: BTreeMap<[u32; 3], f64>,
    /// For each `i`, the terms `(j, k, 2 a_ijk)` of `G_i` with `j < k`.
    g: Vec<Vec<(u32, u32, f64)>>,
}

/// Builds the decoupled form of a 3XOR instance.
pub fn decouple(inst: &Instance) -> Result<DecoupledForm> {
    if inst.kind() != InstanceKind::KXor(3) {
        return Err(Error::Precondition("the decoupled solver needs a 3XOR instance".into()));
    }
    Ok(DecoupledForm::from_cubic(&inst.associated_polynomial()))
}

impl DecoupledForm {
    /// Uses only the degree-3 part of `p`.
    pub fn from_cubic(p: &MultilinearPoly) -> Self {
        let mut a = BTreeMap::new();
        let mut g = vec![Vec::new(); p.n()];
        for (s, c) in p.terms() {
            if let [i, j, k] = *s.vars() {
                a.insert([i, j, k], c / 6.0);
                g[i as usize].push((j, k, c / 3.0));
                g[j as usize].push((i, k, c / 3.0));
                g[k as usize].push((i, j, c / 3.0));
            }
        }
        DecoupledForm { n: p.n(), a, g }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a_ijk` for any ordering of the indices; zero unless they are distinct
    /// and the monomial is present.
    pub fn a(&self, i: u32, j: u32, k: u32) -> f64 {
        let mut key = [i, j, k];
        key.sort_unstable();
        self.a.get(&key).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty()
    }

    /// `G_i` as a polynomial in `z`.
    pub fn g_poly(&self, i: usize) -> MultilinearPoly {
        let mut p = MultilinearPoly::zero(self.n);
        for &(j, k, c) in &self.g[i] {
            p.accumulate(VarSet::from_sorted(vec![j, k]), c);
        }
        p
    }

    /// `E_z[G_i(z)²] = Σ_{j<k} (2 a_ijk)²`.
    pub fn g_second_moment(&self, i: usize) -> f64 {
        self.g[i].iter().map(|&(_, _, c)| c * c).sum()
    }

    #[inline]
    fn g_at(&self, i: usize, z: &[i8]) -> f64 {
        self.g[i].iter().map(|&(j, k, c)| c * (z[j as usize] * z[k as usize]) as f64).sum()
    }

    pub fn g_values(&self, z: &[i8]) -> Vec<f64> {
        (0..self.n).map(|i| self.g_at(i, z)).collect()
    }

    /// `Σ_i |G_i(z)|`, the value of `𝔓̃(sgn G(z), z)`.
    pub fn sum_abs(&self, z: &[i8]) -> f64 {
        (0..self.n).map(|i| self.g_at(i, z).abs()).sum()
    }

    /// `𝔓̃(y, z) = Σ_i y_i G_i(z)`.
    pub fn decoupled_value(&self, y: &[i8], z: &[i8]) -> f64 {
        (0..self.n).map(|i| y[i] as f64 * self.g_at(i, z)).sum()
    }

    /// `y_i = sgn G_i(z)` with `sgn 0 = +1`.
    pub fn greedy_y(&self, z: &[i8]) -> Vec<i8> {
        (0..self.n).map(|i| if self.g_at(i, z) >= 0.0 { 1 } else { -1 }).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZTrial {
    pub z: Vec<i8>,
    pub y: Vec<i8>,
    /// `𝔓̃(y, z) = Σ_i |G_i(z)|`.
    pub value: f64,
    /// Trials consumed, including this one.
    pub trials: usize,
}

/// Draws uniform `z` until `Σ_i |G_i(z)| ≥ target`. On failure returns the
/// best trial seen.
pub fn greedy_z_trials<R: Rng + ?Sized>(
    df: &DecoupledForm,
    target: f64,
    max_trials: usize,
    rng: &mut R,
) -> std::result::Result<ZTrial, ZTrial> {
    let mut best: Option<ZTrial> = None;
    let mut z = vec![1i8; df.n];
    for t in 1..=max_trials.max(1) {
        for v in z.iter_mut() {
            *v = if rng.gen::<bool>() { 1 } else { -1 };
        }
        let value = df.sum_abs(&z);
        if best.as_ref().map_or(true, |b| value > b.value) {
            best = Some(ZTrial { z: z.clone(), y: df.greedy_y(&z), value, trials: t });
        }
        if value >= target {
            let mut hit = best.take().expect("just set");
            hit.trials = t;
            return Ok(hit);
        }
    }
    let mut b = best.expect("at least one trial");
    b.trials = max_trials.max(1);
    Err(b)
}

/// The three rounding schemes, drawn with probabilities 4/9, 4/9, 1/9.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundingScheme {
    /// Biases `(y + z)/2`.
    Sum,
    /// Biases `(y − z)/2`.
    Difference,
    /// Biases `−y`.
    NegY,
}

impl RoundingScheme {
    pub const ALL: [RoundingScheme; 3] = [RoundingScheme::Sum, RoundingScheme::Difference, RoundingScheme::NegY];

    pub fn weight(self) -> f64 {
        match self {
            RoundingScheme::Sum | RoundingScheme::Difference => 4.0 / 9.0,
            RoundingScheme::NegY => 1.0 / 9.0,
        }
    }

    pub fn biases(self, y: &[i8], z: &[i8]) -> Vec<f64> {
        y.iter()
            .zip(z)
            .map(|(&yi, &zi)| match self {
                RoundingScheme::Sum => (yi + zi) as f64 / 2.0,
                RoundingScheme::Difference => (yi - zi) as f64 / 2.0,
                RoundingScheme::NegY => -yi as f64,
            })
            .collect()
    }

    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        match rng.gen_range(0..9) {
            0..=3 => RoundingScheme::Sum,
            4..=7 => RoundingScheme::Difference,
            _ => RoundingScheme::NegY,
        }
    }
}

/// Samples independent ±1 bits with the given means.
pub fn sample_biased<R: Rng + ?Sized>(mu: &[f64], rng: &mut R) -> Vec<i8> {
    mu.iter()
        .map(|&m| {
            if m >= 1.0 {
                1
            } else if m <= -1.0 {
                -1
            } else if rng.gen::<f64>() < (1.0 + m) / 2.0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// One randomized rounding of `(y, z)`.
pub fn round_to_x<R: Rng + ?Sized>(y: &[i8], z: &[i8], rng: &mut R) -> Assignment {
    let scheme = RoundingScheme::draw(rng);
    Assignment::new(sample_biased(&scheme.biases(y, z), rng)).expect("sampler emits ±1")
}

/// `E[p(x)]` for `x` from [`round_to_x`], computed exactly.
pub fn rounding_expectation(p: &MultilinearPoly, y: &[i8], z: &[i8]) -> Result<f64> {
    let mut total = 0.0;
    for s in RoundingScheme::ALL {
        total += s.weight() * p.evaluate_at_biases(&s.biases(y, z))?;
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct Xor3Params {
    /// z-trial budget per target level; default `⌈64 √D ln(n+1)⌉`.
    pub trials: Option<usize>,
    /// Rounding draws; default `8 ⌈√D⌉`.
    pub roundings: Option<usize>,
    /// Target is `Σ_i √deg(i) / (divisor · m)`.
    pub target_divisor: f64,
    /// Times the target may be halved after a failed batch of trials.
    pub max_halvings: u32,
}

impl Default for Xor3Params {
    fn default() -> Self {
        Xor3Params {
            trials: None,
            roundings: None,
            target_divisor: calibration::XOR3_TARGET_DIVISOR,
            max_halvings: 10,
        }
    }
}

pub fn default_trials(n: usize, d: usize) -> usize {
    (64.0 * (d.max(1) as f64).sqrt() * ((n + 1) as f64).ln()).ceil() as usize
}

pub fn default_roundings(d: usize) -> usize {
    8 * (d.max(1) as f64).sqrt().ceil() as usize
}

fn check_input(inst: &Instance) -> Result<()> {
    let report = inst.validate();
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    if inst.kind() != InstanceKind::KXor(3) {
        return Err(Error::Precondition("the decoupled solver needs a 3XOR instance".into()));
    }
    Ok(())
}

/// The better of `x` and `−x` with its satisfied count.
fn best_sign(inst: &Instance, x: Vec<i8>) -> (usize, Vec<i8>) {
    let pos = inst.satisfied_count(&x).expect("length matches");
    let neg_x: Vec<i8> = x.iter().map(|v| -v).collect();
    let neg = inst.satisfied_count(&neg_x).expect("length matches");
    if neg > pos {
        (neg, neg_x)
    } else {
        (pos, x)
    }
}

/// Randomized decoupled solver. The result never satisfies fewer than half
/// of the constraints since `x` and `−x` are both tried.
pub fn solve_3xor(inst: &Instance, seed: u64, params: &Xor3Params) -> Result<(Assignment, SolveReport)> {
    let start = Instant::now();
    check_input(inst)?;
    let df = decouple(inst)?;
    let d = inst.max_degree();
    let budget = params.trials.unwrap_or_else(|| default_trials(inst.n(), d));
    let mut target = inst.sqrt_degree_yardstick() / params.target_divisor;
    let mut notes = Vec::new();
    let mut trials = 0;
    let mut exhausted = false;
    let mut z_rng = child_rng(seed, 0);
    let mut halvings = 0;
    let chosen = loop {
        match greedy_z_trials(&df, target, budget, &mut z_rng) {
            Ok(hit) => {
                trials += hit.trials;
                break hit;
            }
            Err(best) => {
                trials += best.trials;
                if halvings == params.max_halvings {
                    exhausted = true;
                    notes.push(format!("no z reached target {target:.3e}; using best seen ({:.3e})", best.value));
                    break best;
                }
                notes.push(format!("target {target:.3e} missed after {budget} trials; halving"));
                target /= 2.0;
                halvings += 1;
            }
        }
    };

    let roundings = params.roundings.unwrap_or_else(|| default_roundings(d)).max(1);
    let (_, x) = (0..roundings)
        .into_par_iter()
        .map(|r| {
            let mut rng = child_rng(seed, 1 + r as u64);
            let x = round_to_x(&chosen.y, &chosen.z, &mut rng).into_inner();
            best_sign(inst, x)
        })
        // Highest count wins; ties go to the lowest draw index.
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one rounding");

    let mut report = SolveReport::new("xor3", inst, &x, Some(seed))?;
    report.trials = Some(trials);
    report.reps = Some(roundings);
    report.budget_exhausted = exhausted;
    report.notes = notes;
    report.note(format!("decoupled value {:.6e}", chosen.value));
    report.millis = elapsed_millis(start);
    Ok((Assignment::new(x)?, report))
}

/// Deterministic variant: `z` ranges over a 4-wise independent space, and
/// each rounding scheme is fixed by conditional expectations.
pub fn solve_3xor_derandomized(inst: &Instance) -> Result<(Assignment, SolveReport)> {
    let start = Instant::now();
    check_input(inst)?;
    let df = decouple(inst)?;
    let space = FourwiseSpace::new(inst.n()).ok_or(Error::TooLarge {
        what: "the 4-wise space",
        n: inst.n(),
        max: (1 << MAX_FIELD_DEGREE) - 1,
    })?;
    let (best_value, best_s) = (0..space.len())
        .into_par_iter()
        .map_init(
            || vec![0i8; inst.n()],
            |z, s| {
                space.fill(s, z);
                (df.sum_abs(z), s)
            },
        )
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("space is nonempty");
    let z = space.point(best_s);
    let y = df.greedy_y(&z);
    let p = inst.associated_polynomial();

    let mut best: Option<(usize, Vec<i8>)> = None;
    for scheme in RoundingScheme::ALL {
        let x = p.fix_by_conditional_expectation(&scheme.biases(&y, &z))?;
        let cand = best_sign(inst, x);
        if best.as_ref().map_or(true, |b| cand.0 > b.0) {
            best = Some(cand);
        }
    }
    let (_, x) = best.expect("three schemes");
    let mut report = SolveReport::new("xor3-derand", inst, &x, None)?;
    report.trials = Some(space.len() as usize);
    report.note(format!("decoupled value {best_value:.6e} at space point {best_s}"));
    report.millis = elapsed_millis(start);
    Ok((Assignment::new(x)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::TOLERANCE;
    use crate::rng::rng_from_seed;

    fn single() -> Instance {
        let mut inst = Instance::new(3);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        inst
    }

    fn all_points(n: usize) -> impl Iterator<Item = Vec<i8>> {
        (0..1u64 << n).map(move |m| Assignment::from_mask(n, m).into_inner())
    }

    #[test]
    fn single_constraint_form() {
        let df = decouple(&single()).unwrap();
        for (i, j, k) in [(0, 1, 2), (2, 1, 0), (1, 0, 2)] {
            assert!((df.a(i, j, k) - 1.0 / 12.0).abs() < TOLERANCE);
        }
        assert_eq!(df.a(0, 0, 1), 0.0);
        let g0 = df.g_poly(0);
        assert!((g0.coefficient(&[1, 2]) - 1.0 / 6.0).abs() < TOLERANCE);
        for z in all_points(3) {
            assert!((df.sum_abs(&z) - 0.5).abs() < TOLERANCE);
        }
    }

    #[test]
    fn rejects_non_3xor() {
        let mut inst = Instance::new(4);
        inst.push_xor(vec![0, 1, 2, 3], 1).unwrap();
        assert!(matches!(decouple(&inst), Err(Error::Precondition(_))));
    }

    #[test]
    fn cancelled_pair_has_zero_form() {
        // Same scope with opposite signs cancels in the polynomial.
        let mut inst = Instance::new(3);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        inst.push_xor(vec![0, 1, 2], -1).unwrap();
        assert!(decouple(&inst).unwrap().is_zero());
    }

    #[test]
    fn greedy_trials_targets() {
        let df = decouple(&single()).unwrap();
        let mut rng = rng_from_seed(1);
        let hit = greedy_z_trials(&df, 0.4, 10, &mut rng).unwrap();
        assert_eq!(hit.trials, 1);
        assert!((df.decoupled_value(&hit.y, &hit.z) - hit.value).abs() < TOLERANCE);
        let miss = greedy_z_trials(&df, 0.51, 25, &mut rng).unwrap_err();
        assert_eq!(miss.trials, 25);
    }

    #[test]
    fn rounding_single_constraint() {
        let p = single().associated_polynomial();
        let ones = [1i8, 1, 1];
        assert!((rounding_expectation(&p, &ones, &ones).unwrap() - 1.0 / 6.0).abs() < TOLERANCE);
        let b = RoundingScheme::Sum.biases(&ones, &ones);
        assert_eq!(b, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn scheme_frequencies() {
        let mut rng = rng_from_seed(9);
        let mut counts = [0usize; 3];
        for _ in 0..90_000 {
            let drawn = RoundingScheme::draw(&mut rng);
            counts[RoundingScheme::ALL.iter().position(|&s| s == drawn).unwrap()] += 1;
        }
        assert!((counts[0] as f64 / 90_000.0 - 4.0 / 9.0).abs() < 0.01);
        assert!((counts[2] as f64 / 90_000.0 - 1.0 / 9.0).abs() < 0.01);
    }

    #[test]
    fn solver_single_constraint() {
        let (x, report) = solve_3xor(&single(), 3, &Xor3Params::default()).unwrap();
        assert_eq!(report.satisfied, 1);
        assert_eq!(single().satisfied_count(&x).unwrap(), 1);
        let (_, det) = solve_3xor_derandomized(&single()).unwrap();
        assert_eq!(det.satisfied, 1);
    }
}
