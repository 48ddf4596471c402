//! Exhaustive ground truth for small instances.
//!
//! Assignments are enumerated in Gray-code order so each step flips one
//! variable and only the constraints touching it are re-evaluated. Work is
//! split into chunks over the high bits and reduced in chunk order, so every
//! result is deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::csp::{Assignment, Instance, Value};
use crate::error::{Error, Result};
use crate::fourier::{big_ratio, MultilinearPoly};
use crate::trifree::{DerivativeTables, PartitionPlan, ThresholdRule};
use crate::xor3::RoundingScheme;

pub const MAX_BRUTE_FORCE_N: usize = 26;
pub const MAX_DISTRIBUTION_N: usize = 22;
/// Largest number of free random bits an exhaustive expectation enumerates.
pub const MAX_RANDOM_BITS: usize = 24;

/// Incremental evaluator: current row of every constraint and the count of
/// satisfied ones.
struct GrayState<'a> {
    inst: &'a Instance,
    /// `(constraint, bit position)` for each variable.
    touches: Vec<Vec<(usize, u8)>>,
    rows: Vec<usize>,
    satisfied: usize,
}

impl<'a> GrayState<'a> {
    fn new(inst: &'a Instance, mask: u64) -> Self {
        let mut touches = vec![Vec::new(); inst.n()];
        for (l, c) in inst.constraints().iter().enumerate() {
            for (t, &v) in c.scope.iter().enumerate() {
                touches[v as usize].push((l, t as u8));
            }
        }
        let x = Assignment::from_mask(inst.n(), mask);
        let rows: Vec<usize> = (0..inst.m()).map(|l| inst.row(l, &x)).collect();
        let satisfied = (0..inst.m()).filter(|&l| inst.predicate_of(l).accepts_row(rows[l])).count();
        GrayState { inst, touches, rows, satisfied }
    }

    #[inline]
    fn flip(&mut self, v: usize) {
        for &(l, t) in &self.touches[v] {
            let p = self.inst.predicate_of(l);
            let before = p.accepts_row(self.rows[l]);
            self.rows[l] ^= 1 << t;
            let after = p.accepts_row(self.rows[l]);
            self.satisfied = self.satisfied + after as usize - before as usize;
        }
    }
}

/// Splits `n` bits into `(high, low)` with `2^high` chunks.
fn split(n: usize) -> (usize, usize) {
    let high = n.saturating_sub(14).min(10);
    (high, n - high)
}

/// Visits every assignment of the chunk with high bits `chunk`.
fn walk_chunk(inst: &Instance, chunk: u64, low: usize, mut visit: impl FnMut(u64, usize)) {
    let mut mask = chunk << low;
    let mut state = GrayState::new(inst, mask);
    visit(mask, state.satisfied);
    for i in 1u64..1 << low {
        let bit = i.trailing_zeros() as usize;
        mask ^= 1 << bit;
        state.flip(bit);
        visit(mask, state.satisfied);
    }
}

/// Exact optimum and one maximizing assignment.
pub fn brute_force_opt(inst: &Instance) -> Result<(Value, Assignment)> {
    let n = inst.n();
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::TooLarge { what: "brute force", n, max: MAX_BRUTE_FORCE_N });
    }
    let (high, low) = split(n);
    let (best, mask) = (0..1u64 << high)
        .into_par_iter()
        .map(|chunk| {
            let mut best = (0usize, chunk << low);
            let mut first = true;
            walk_chunk(inst, chunk, low, |mask, sat| {
                if first || sat > best.0 {
                    best = (sat, mask);
                    first = false;
                }
            });
            best
        })
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one chunk");
    Ok((Value { satisfied: best, m: inst.m() }, Assignment::from_mask(n, mask)))
}

/// `hist[s]` = number of assignments satisfying exactly `s` constraints.
pub fn value_distribution(inst: &Instance) -> Result<Vec<u64>> {
    let n = inst.n();
    if n > MAX_DISTRIBUTION_N {
        return Err(Error::TooLarge { what: "value distribution", n, max: MAX_DISTRIBUTION_N });
    }
    let (high, low) = split(n);
    let m = inst.m();
    let hist = (0..1u64 << high)
        .into_par_iter()
        .map(|chunk| {
            let mut h = vec![0u64; m + 1];
            walk_chunk(inst, chunk, low, |_, sat| h[sat] += 1);
            h
        })
        .reduce(|| vec![0u64; m + 1], |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        });
    Ok(hist)
}

/// Largest `|val(x) − 1/2|` over all assignments, from the distribution.
pub fn max_deviation_from_half(inst: &Instance) -> Result<f64> {
    let hist = value_distribution(inst)?;
    let m = inst.m() as f64;
    Ok(hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(s, _)| (s as f64 / m - 0.5).abs())
        .fold(0.0, f64::max))
}

/// A randomized procedure whose output distribution the oracle averages over.
#[derive(Clone, Debug)]
pub enum Procedure {
    /// Three-scheme rounding of `(y, z)`; the statistic is `𝔓(x)`.
    Xor3Rounding { y: Vec<i8>, z: Vec<i8> },
    /// Flip each coordinate in `coords` independently with probability
    /// `(1 − η)/2` starting from `x_star`; the statistic is `g(x)`.
    NoiseFlip { g: MultilinearPoly, x_star: Vec<i8>, coords: Vec<u32>, eta: f64 },
    /// The greedy bit `x_j` under a fixed partition; the statistic is `x_j`.
    TrifreeBit { plan: PartitionPlan, j: u32 },
}

/// An exhaustive average. `exact` is present when every probability in the
/// procedure is rational.
#[derive(Clone, Debug, PartialEq)]
pub struct Expectation {
    pub value: f64,
    pub exact: Option<BigRational>,
}

impl Expectation {
    fn exact(r: BigRational) -> Self {
        Expectation { value: crate::fourier::ratio_to_f64(&r), exact: Some(r) }
    }
}

fn check_bits(bits: usize) -> Result<()> {
    if bits > MAX_RANDOM_BITS {
        return Err(Error::TooLarge { what: "exhaustive expectation", n: bits, max: MAX_RANDOM_BITS });
    }
    Ok(())
}

pub fn exhaustive_expectation(proc: &Procedure, inst: &Instance) -> Result<Expectation> {
    match proc {
        Procedure::Xor3Rounding { y, z } => xor3_rounding(inst, y, z).map(Expectation::exact),
        Procedure::NoiseFlip { g, x_star, coords, eta } => noise_flip(g, x_star, coords, *eta),
        Procedure::TrifreeBit { plan, j } => trifree_bit_bias(inst, plan, *j).map(Expectation::exact),
    }
}

fn xor3_rounding(inst: &Instance, y: &[i8], z: &[i8]) -> Result<BigRational> {
    let m = inst.m() as i64;
    let mu = inst.mu_exact();
    let mut total = BigRational::zero();
    for (scheme, weight) in RoundingScheme::ALL.into_iter().zip([big_ratio(4, 9), big_ratio(4, 9), big_ratio(1, 9)]) {
        let bias = scheme.biases(y, z);
        let free: Vec<usize> = (0..bias.len()).filter(|&i| bias[i] == 0.0).collect();
        check_bits(free.len())?;
        let mut x: Vec<i8> = bias.iter().map(|&b| if b > 0.0 { 1 } else { -1 }).collect();
        let mut sat_sum: u64 = 0;
        for mask in 0u64..1 << free.len() {
            for (b, &i) in free.iter().enumerate() {
                x[i] = if mask >> b & 1 == 1 { 1 } else { -1 };
            }
            sat_sum += inst.satisfied_count(&x)? as u64;
        }
        let den = BigInt::from(m) << free.len();
        total += weight * BigRational::new(BigInt::from(sat_sum), den);
    }
    Ok(total - mu)
}

fn noise_flip(g: &MultilinearPoly, x_star: &[i8], coords: &[u32], eta: f64) -> Result<Expectation> {
    check_bits(coords.len())?;
    let p_flip = (1.0 - eta) / 2.0;
    let mut x = x_star.to_vec();
    let mut total = 0.0;
    for mask in 0u64..1 << coords.len() {
        let mut prob = 1.0;
        for (b, &i) in coords.iter().enumerate() {
            let flip = mask >> b & 1 == 1;
            x[i as usize] = if flip { -x_star[i as usize] } else { x_star[i as usize] };
            prob *= if flip { p_flip } else { 1.0 - p_flip };
        }
        total += prob * g.evaluate(&x)?;
    }
    Ok(Expectation { value: total, exact: None })
}

/// Rule of greedy variable `j`, or `None` for a fair coin.
fn rule_of(inst: &Instance, plan: &PartitionPlan, tables: &DerivativeTables, j: u32) -> Option<ThresholdRule> {
    if plan.n_j(j).is_empty() {
        None
    } else {
        Some(crate::trifree::threshold_rule(&tables.terms(inst, plan, j)))
    }
}

/// `E[x_j]` for greedy `j`, averaging over every `x_{A_j}` with the tie coin
/// folded in exactly.
pub fn trifree_bit_bias(inst: &Instance, plan: &PartitionPlan, j: u32) -> Result<BigRational> {
    if !plan.is_greedy(j) {
        return Err(Error::Precondition(format!("variable {j} is not greedy")));
    }
    let tables = DerivativeTables::new(inst);
    let Some(rule) = rule_of(inst, plan, &tables, j) else {
        return Ok(BigRational::zero());
    };
    let a = plan.a_j(j);
    check_bits(a.len())?;
    let terms = tables.terms(inst, plan, j);
    let mut x = vec![1i8; inst.n()];
    // Count assignments per value of 2ΣQ, then weight by the tie rule.
    let mut by_sum: std::collections::BTreeMap<i64, u64> = std::collections::BTreeMap::new();
    for mask in 0u64..1 << a.len() {
        for (b, &v) in a.iter().enumerate() {
            x[v as usize] = if mask >> b & 1 == 1 { 1 } else { -1 };
        }
        let s: i64 = terms.iter().map(|t| t.twice_value(&x)).sum();
        *by_sum.entry(s).or_insert(0) += 1;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut total = BigRational::zero();
    for (s, count) in by_sum {
        let sign = rule.plus_probability(s) * &two - BigRational::one();
        total += sign * BigRational::new(BigInt::from(count), BigInt::one() << a.len());
    }
    Ok(total)
}

/// Joint distribution of `x_{S_ℓ}` under a fixed partition, over uniform
/// `x_F` and the tie coins. Entry `row` follows the truth-table convention.
pub fn trifree_scope_distribution(inst: &Instance, plan: &PartitionPlan, l: usize) -> Result<Vec<BigRational>> {
    let tables = DerivativeTables::new(inst);
    scope_distribution(inst, plan, &tables, l)
}

fn scope_distribution(
    inst: &Instance,
    plan: &PartitionPlan,
    tables: &DerivativeTables,
    l: usize,
) -> Result<Vec<BigRational>> {
    let scope = &inst.constraints()[l].scope;
    let greedy: Vec<(usize, u32)> =
        scope.iter().enumerate().filter(|(_, &v)| plan.is_greedy(v)).map(|(t, &v)| (t, v)).collect();
    let mut free: Vec<u32> = scope.iter().copied().filter(|&v| !plan.is_greedy(v)).collect();
    for &(_, j) in &greedy {
        free.extend_from_slice(plan.a_j(j));
    }
    free.sort_unstable();
    free.dedup();
    check_bits(free.len() + greedy.len())?;
    let rules: Vec<Option<ThresholdRule>> = greedy.iter().map(|&(_, j)| rule_of(inst, plan, tables, j)).collect();
    let terms: Vec<_> = greedy.iter().map(|&(_, j)| tables.terms(inst, plan, j)).collect();
    let fair = big_ratio(1, 2);
    let mut dist = vec![BigRational::zero(); 1 << scope.len()];
    let weight = BigRational::new(BigInt::one(), BigInt::one() << free.len());
    let mut x = vec![1i8; inst.n()];
    for mask in 0u64..1 << free.len() {
        for (b, &v) in free.iter().enumerate() {
            x[v as usize] = if mask >> b & 1 == 1 { 1 } else { -1 };
        }
        let base_row = scope
            .iter()
            .enumerate()
            .filter(|(_, &v)| !plan.is_greedy(v))
            .fold(0usize, |acc, (t, &v)| acc | ((x[v as usize] > 0) as usize) << t);
        let p_plus: Vec<BigRational> = rules
            .iter()
            .zip(&terms)
            .map(|(rule, ts)| match rule {
                None => fair.clone(),
                Some(r) => r.plus_probability(ts.iter().map(|t| t.twice_value(&x)).sum()),
            })
            .collect();
        for g_mask in 0usize..1 << greedy.len() {
            let mut prob = weight.clone();
            let mut row = base_row;
            for (b, &(t, _)) in greedy.iter().enumerate() {
                if g_mask >> b & 1 == 1 {
                    prob *= &p_plus[b];
                    row |= 1 << t;
                } else {
                    prob *= BigRational::one() - &p_plus[b];
                }
            }
            if !prob.is_zero() {
                dist[row] += prob;
            }
        }
    }
    Ok(dist)
}

/// `E[𝔓(x)]` for one pass of the triangle-free algorithm with the partition
/// fixed, computed constraint by constraint from exact scope distributions.
pub fn trifree_expected_advantage(inst: &Instance, plan: &PartitionPlan) -> Result<BigRational> {
    let tables = DerivativeTables::new(inst);
    let mut sat = BigRational::zero();
    for l in 0..inst.m() {
        let dist = scope_distribution(inst, plan, &tables, l)?;
        let p = inst.predicate_of(l);
        for (row, pr) in dist.iter().enumerate() {
            if p.accepts_row(row) {
                sat += pr;
            }
        }
    }
    Ok(sat / BigInt::from(inst.m().max(1)) - inst.mu_exact())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{complete_graph_maxcut, nae_ae_gadget};

    #[test]
    fn brute_force_examples() {
        let mut single = Instance::new(3);
        single.push_xor(vec![0, 1, 2], 1).unwrap();
        let (v, x) = brute_force_opt(&single).unwrap();
        assert_eq!(v, Value { satisfied: 1, m: 1 });
        assert_eq!(single.satisfied_count(&x).unwrap(), 1);
        assert_eq!(brute_force_opt(&nae_ae_gadget()).unwrap().0.satisfied, 4);
        assert_eq!(brute_force_opt(&complete_graph_maxcut(10)).unwrap().0, Value { satisfied: 25, m: 45 });
        assert_eq!(brute_force_opt(&complete_graph_maxcut(4)).unwrap().0.satisfied, 4);
        assert_eq!(brute_force_opt(&complete_graph_maxcut(3)).unwrap().0.satisfied, 2);
        assert!(brute_force_opt(&Instance::new(27)).is_err());
    }

    #[test]
    fn chunked_matches_direct() {
        // n = 17 exercises more than one chunk.
        let inst = complete_graph_maxcut(17);
        let hist = value_distribution(&inst).unwrap();
        assert_eq!(hist.iter().sum::<u64>(), 1 << 17);
        let mut direct = vec![0u64; inst.m() + 1];
        for mask in 0..1u64 << 17 {
            direct[inst.satisfied_count(&Assignment::from_mask(17, mask)).unwrap()] += 1;
        }
        assert_eq!(hist, direct);
    }

    #[test]
    fn distributions() {
        let hist = value_distribution(&nae_ae_gadget()).unwrap();
        assert_eq!(hist[4], 64);
        let mut single = Instance::new(3);
        single.push_xor(vec![0, 1, 2], 1).unwrap();
        assert_eq!(value_distribution(&single).unwrap(), vec![4, 4]);
    }

    #[test]
    fn rounding_single_constraint() {
        let mut single = Instance::new(3);
        single.push_xor(vec![0, 1, 2], 1).unwrap();
        let ones = vec![1i8; 3];
        let e = exhaustive_expectation(&Procedure::Xor3Rounding { y: ones.clone(), z: ones }, &single).unwrap();
        assert_eq!(e.exact, Some(big_ratio(1, 6)));
    }

    #[test]
    fn identity_noise() {
        let g = MultilinearPoly::from_terms(3, [(vec![0, 1], 1.0), (vec![2], 0.5)]).unwrap();
        let x_star = vec![1, -1, 1];
        let e = exhaustive_expectation(
            &Procedure::NoiseFlip { g: g.clone(), x_star: x_star.clone(), coords: vec![0, 1, 2], eta: 1.0 },
            &Instance::new(3),
        )
        .unwrap();
        assert!((e.value - g.evaluate(&x_star).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn single_active_bit_is_unbiased() {
        let mut inst = Instance::new(3);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        let plan = PartitionPlan::from_greedy_set(&inst, vec![true, false, false]);
        let e = exhaustive_expectation(&Procedure::TrifreeBit { plan: plan.clone(), j: 0 }, &inst).unwrap();
        assert_eq!(e.exact, Some(BigRational::zero()));
        // The active constraint is always satisfied: advantage 1/2.
        assert_eq!(trifree_expected_advantage(&inst, &plan).unwrap(), big_ratio(1, 2));
    }
}
