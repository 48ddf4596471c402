//! Beating the random assignment on triangle-free instances.
//!
//! Variables are split at random into a fixed side `F` and a greedy side `G`.
//! A constraint is active when exactly one of its variables is greedy. After
//! `x_F` is drawn uniformly, each greedy `x_j` becomes the sign of
//! `Σ_{ℓ ∈ N_j} Q_ℓ − θ_j`, where `Q_ℓ = ∂_j P_ℓ` and `θ_j` is the exact
//! median of that sum; ties are broken by a private coin calibrated so that
//! `x_j` is exactly uniform.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::csp::{Assignment, Instance, Predicate};
use crate::error::{Error, Result};
use crate::fourier::MultilinearPoly;
use crate::report::{elapsed_millis, SolveReport};
use crate::rng::{child_rng, derive_seed};

/// `2∂_t P` on each row of the other coordinates, in scope order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeTable {
    /// Values in `{-1, 0, 1}`.
    pub twice_q: Vec<i8>,
    /// Rows where `Q = -1/2`, `0`, `+1/2`.
    pub counts: [u64; 3],
    /// `r − 1`.
    pub bits: u32,
}

impl DerivativeTable {
    pub fn new(p: &Predicate, t: usize) -> Self {
        let r = p.arity();
        let low_mask = (1usize << t) - 1;
        let twice_q: Vec<i8> = (0..1usize << (r - 1))
            .map(|rest| {
                let base = (rest & low_mask) | (rest >> t) << (t + 1);
                p.accepts_row(base | 1 << t) as i8 - p.accepts_row(base) as i8
            })
            .collect();
        let mut counts = [0u64; 3];
        for &v in &twice_q {
            counts[(v + 1) as usize] += 1;
        }
        DerivativeTable { twice_q, counts, bits: (r - 1) as u32 }
    }
}

/// Derivative tables for every (predicate, position) in an instance.
#[derive(Clone, Debug)]
pub struct DerivativeTables {
    tables: Vec<Vec<Arc<DerivativeTable>>>,
}

impl DerivativeTables {
    pub fn new(inst: &Instance) -> Self {
        let tables = inst
            .predicates()
            .iter()
            .map(|p| (0..p.arity()).map(|t| Arc::new(DerivativeTable::new(p, t))).collect())
            .collect();
        DerivativeTables { tables }
    }

    /// The terms `Q_ℓ`, `ℓ ∈ N_j`.
    pub fn terms(&self, inst: &Instance, plan: &PartitionPlan, j: u32) -> Vec<DerivativeTerm> {
        plan.n_j(j)
            .iter()
            .map(|&l| {
                let c = &inst.constraints()[l];
                let t = c.scope.iter().position(|&v| v == j).expect("active scope contains its greedy variable");
                let rest = c.scope.iter().copied().filter(|&v| v != j).collect();
                DerivativeTerm { constraint: l, position: t, rest, table: self.tables[c.predicate][t].clone() }
            })
            .collect()
    }
}

/// `Q_ℓ = ∂_j P_ℓ` for one active constraint.
#[derive(Clone, Debug)]
pub struct DerivativeTerm {
    pub constraint: usize,
    /// Position of `j` in the scope.
    pub position: usize,
    /// Scope without `j`, in order.
    pub rest: Vec<u32>,
    pub table: Arc<DerivativeTable>,
}

impl DerivativeTerm {
    /// `2 Q_ℓ(x)`.
    #[inline]
    pub fn twice_value(&self, x: &[i8]) -> i64 {
        let row = self.rest.iter().enumerate().fold(0usize, |acc, (b, &v)| acc | ((x[v as usize] > 0) as usize) << b);
        self.table.twice_q[row] as i64
    }

    /// `Q_ℓ` as a polynomial over all `n` variables.
    pub fn polynomial(&self, inst: &Instance) -> MultilinearPoly {
        let c = &inst.constraints()[self.constraint];
        inst.predicates()[c.predicate]
            .polynomial()
            .derivative(self.position)
            .and_then(|q| q.embed(&c.scope, inst.n()))
            .expect("scope indices are valid")
    }
}

/// Convenience wrapper building the tables on the fly.
pub fn derivative_terms(inst: &Instance, plan: &PartitionPlan, j: u32) -> Vec<DerivativeTerm> {
    DerivativeTables::new(inst).terms(inst, plan, j)
}

/// A random Fixed/Greedy split with its active-constraint bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPlan {
    in_g: Vec<bool>,
    /// For each constraint, its greedy variable when active.
    active: Vec<Option<u32>>,
    n_j: Vec<Vec<usize>>,
    a_j: Vec<Vec<u32>>,
}

impl PartitionPlan {
    pub fn from_greedy_set(inst: &Instance, in_g: Vec<bool>) -> Self {
        let n = inst.n();
        assert_eq!(in_g.len(), n, "greedy mask length");
        let mut n_j = vec![Vec::new(); n];
        let mut a_j: Vec<Vec<u32>> = vec![Vec::new(); n];
        let active: Vec<Option<u32>> = inst
            .constraints()
            .iter()
            .enumerate()
            .map(|(l, c)| {
                let mut greedy = c.scope.iter().filter(|&&v| in_g[v as usize]);
                match (greedy.next(), greedy.next()) {
                    (Some(&j), None) => {
                        n_j[j as usize].push(l);
                        a_j[j as usize].extend(c.scope.iter().copied().filter(|&v| v != j));
                        Some(j)
                    }
                    _ => None,
                }
            })
            .collect();
        for a in &mut a_j {
            a.sort_unstable();
            a.dedup();
        }
        PartitionPlan { in_g, active, n_j, a_j }
    }

    pub fn random<R: Rng + ?Sized>(inst: &Instance, rng: &mut R) -> Self {
        let in_g = (0..inst.n()).map(|_| rng.gen::<bool>()).collect();
        Self::from_greedy_set(inst, in_g)
    }

    pub fn is_greedy(&self, i: u32) -> bool {
        self.in_g[i as usize]
    }

    pub fn greedy(&self) -> Vec<u32> {
        (0..self.in_g.len() as u32).filter(|&i| self.in_g[i as usize]).collect()
    }

    pub fn fixed(&self) -> Vec<u32> {
        (0..self.in_g.len() as u32).filter(|&i| !self.in_g[i as usize]).collect()
    }

    pub fn active_greedy(&self, l: usize) -> Option<u32> {
        self.active[l]
    }

    pub fn n_j(&self, j: u32) -> &[usize] {
        &self.n_j[j as usize]
    }

    pub fn a_j(&self, j: u32) -> &[u32] {
        &self.a_j[j as usize]
    }

    /// Checks the structure behind the independence of inactive scopes: for
    /// every inactive constraint, the sets `A_j` of its greedy variables are
    /// pairwise disjoint and avoid its fixed variables. Returns the first
    /// offending constraint.
    pub fn check_independence(&self, inst: &Instance) -> std::result::Result<(), usize> {
        let mut owner: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        for (l, c) in inst.constraints().iter().enumerate() {
            if self.active[l].is_some() {
                continue;
            }
            owner.clear();
            for &v in &c.scope {
                if !self.in_g[v as usize] {
                    owner.insert(v, u32::MAX);
                }
            }
            for &j in c.scope.iter().filter(|&&v| self.in_g[v as usize]) {
                for &w in &self.a_j[j as usize] {
                    if owner.insert(w, j).is_some() {
                        return Err(l);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Draws a uniform partition of a validated triangle-free instance.
pub fn plan_partition<R: Rng + ?Sized>(inst: &Instance, rng: &mut R) -> Result<PartitionPlan> {
    check_input(inst)?;
    Ok(PartitionPlan::random(inst, rng))
}

/// Exact distribution of a sum of independent `Q_ℓ`, in half-units, with
/// probabilities `weights[i] / 2^log2_den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPmf {
    /// Half-unit value of `weights[0]`.
    lo: i64,
    weights: Vec<BigUint>,
    log2_den: u32,
}

impl HalfPmf {
    pub fn point_mass_at_zero() -> Self {
        HalfPmf { lo: 0, weights: vec![BigUint::one()], log2_den: 0 }
    }

    pub fn of_terms(terms: &[DerivativeTerm]) -> Self {
        terms.iter().fold(Self::point_mass_at_zero(), |acc, t| acc.convolve(&t.table.counts, t.table.bits))
    }

    /// Adds an independent term taking values `-1/2, 0, +1/2` with the given
    /// counts out of `2^bits`.
    pub fn convolve(&self, counts: &[u64; 3], bits: u32) -> Self {
        let mut out = vec![BigUint::zero(); self.weights.len() + 2];
        for (i, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for (d, &c) in counts.iter().enumerate() {
                if c != 0 {
                    out[i + d] += w * c;
                }
            }
        }
        HalfPmf { lo: self.lo - 1, weights: out, log2_den: self.log2_den + bits }
    }

    pub fn log2_den(&self) -> u32 {
        self.log2_den
    }

    /// `(half-unit value, weight)` for every point of positive mass.
    pub fn support(&self) -> impl Iterator<Item = (i64, &BigUint)> + '_ {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, w)| (self.lo + i as i64, w))
    }

    pub fn weight(&self, half: i64) -> BigUint {
        let idx = half - self.lo;
        if idx < 0 || idx as usize >= self.weights.len() {
            return BigUint::zero();
        }
        self.weights[idx as usize].clone()
    }

    fn denominator(&self) -> BigUint {
        BigUint::one() << self.log2_den
    }

    pub fn prob(&self, half: i64) -> BigRational {
        ratio(&self.weight(half), &self.denominator())
    }

    pub fn prob_greater(&self, half: i64) -> BigRational {
        let w: BigUint = self.support().filter(|(v, _)| *v > half).map(|(_, w)| w).sum();
        ratio(&w, &self.denominator())
    }

    pub fn total(&self) -> BigRational {
        let w: BigUint = self.weights.iter().sum();
        ratio(&w, &self.denominator())
    }

    pub fn variance(&self) -> f64 {
        let den = self.denominator().to_f64().unwrap_or(f64::INFINITY);
        let probs: Vec<(f64, f64)> =
            self.support().map(|(v, w)| (v as f64 / 2.0, w.to_f64().unwrap_or(0.0) / den)).collect();
        let mean: f64 = probs.iter().map(|(v, p)| v * p).sum();
        probs.iter().map(|(v, p)| p * (v - mean).powi(2)).sum()
    }
}

fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Median threshold with a randomized tie rule.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdRule {
    /// `θ` in half-units.
    pub theta_half: i64,
    /// Probability of `+1` when the sum equals `θ`.
    pub p_plus: BigRational,
    pub pmf: HalfPmf,
}

/// Exact median rule for the sum of `terms`. Empty input gives `θ = 0` and a
/// fair coin.
pub fn threshold_rule(terms: &[DerivativeTerm]) -> ThresholdRule {
    ThresholdRule::from_pmf(HalfPmf::of_terms(terms))
}

impl ThresholdRule {
    pub fn from_pmf(pmf: HalfPmf) -> Self {
        let den = pmf.denominator();
        // Least support point whose CDF reaches 1/2: 2·cdf ≥ den.
        let mut cdf = BigUint::zero();
        let mut theta_half = 0;
        for (v, w) in pmf.support() {
            cdf += w;
            if &cdf * 2u32 >= den {
                theta_half = v;
                break;
            }
        }
        let at = pmf.prob(theta_half);
        let above = pmf.prob_greater(theta_half);
        let p_plus = if at.is_zero() { half() } else { (half() - above) / at };
        ThresholdRule { theta_half, p_plus, pmf }
    }

    pub fn theta(&self) -> f64 {
        self.theta_half as f64 / 2.0
    }

    pub fn p_plus_f64(&self) -> f64 {
        self.p_plus.to_f64().unwrap_or(0.5)
    }

    /// `Pr[x_j = +1 | Σ Q = sum_half / 2]`.
    pub fn plus_probability(&self, sum_half: i64) -> BigRational {
        match sum_half.cmp(&self.theta_half) {
            std::cmp::Ordering::Greater => BigRational::one(),
            std::cmp::Ordering::Less => BigRational::zero(),
            std::cmp::Ordering::Equal => self.p_plus.clone(),
        }
    }

    /// `Pr[Q > θ] + p_plus · Pr[Q = θ]`; equals 1/2 by construction.
    pub fn plus_mass(&self) -> BigRational {
        self.pmf.prob_greater(self.theta_half) + &self.p_plus * self.pmf.prob(self.theta_half)
    }

    /// `E[x_j]` over the pmf and the tie coin.
    pub fn expected_sign(&self) -> BigRational {
        self.plus_mass() * BigInt::from(2) - BigRational::one()
    }

    /// `E[x_j · ΣQ]`.
    pub fn expected_sign_times_sum(&self) -> BigRational {
        let den = BigRational::from_integer(BigInt::from(2));
        self.pmf
            .support()
            .map(|(v, _)| {
                let p = self.pmf.prob(v);
                let sign = self.plus_probability(v) * BigInt::from(2) - BigRational::one();
                p * sign * BigRational::from_integer(BigInt::from(v)) / &den
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `E|ΣQ − θ|`.
    pub fn expected_abs_deviation(&self) -> BigRational {
        self.pmf
            .support()
            .map(|(v, _)| {
                self.pmf.prob(v) * BigRational::new(BigInt::from((v - self.theta_half).abs()), BigInt::from(2))
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Draws the bit given `2ΣQ`, using `rng` only on a tie.
    pub fn decide<R: Rng + ?Sized>(&self, sum_half: i64, rng: &mut R) -> i8 {
        match sum_half.cmp(&self.theta_half) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => {
                let num = self.p_plus.numer().abs().to_biguint().expect("nonnegative");
                let den = self.p_plus.denom().to_biguint().expect("positive");
                if rng.gen_biguint_below(&den) < num {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// Rules for every greedy variable with a nonempty `N_j`.
pub fn rules_for(inst: &Instance, plan: &PartitionPlan, tables: &DerivativeTables) -> Vec<Option<ThresholdRule>> {
    (0..inst.n() as u32)
        .map(|j| {
            if plan.is_greedy(j) && !plan.n_j(j).is_empty() {
                Some(threshold_rule(&tables.terms(inst, plan, j)))
            } else {
                None
            }
        })
        .collect()
}

/// Sets every greedy coordinate of `x` (whose fixed coordinates are already
/// drawn). Variable `j`'s tie coin comes from stream `j` of `coin_seed`.
pub fn greedy_assign(
    inst: &Instance,
    plan: &PartitionPlan,
    tables: &DerivativeTables,
    rules: &[Option<ThresholdRule>],
    x: &mut [i8],
    coin_seed: u64,
) {
    for j in plan.greedy() {
        let mut coin = child_rng(coin_seed, j as u64);
        x[j as usize] = match &rules[j as usize] {
            None => {
                if coin.gen::<bool>() {
                    1
                } else {
                    -1
                }
            }
            Some(rule) => {
                let sum: i64 = tables.terms(inst, plan, j).iter().map(|t| t.twice_value(x)).sum();
                rule.decide(sum, &mut coin)
            }
        };
    }
}

/// `8 ⌈e^k⌉`.
pub fn default_reps(k: usize) -> usize {
    8 * (k as f64).exp().ceil() as usize
}

fn check_input(inst: &Instance) -> Result<()> {
    let report = inst.validate_for_trifree();
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    match inst.check_triangle_free() {
        crate::csp::TriangleFreeReport::Ok => Ok(()),
        witness => Err(Error::NotTriangleFree(witness)),
    }
}

/// One full pass: partition, uniform `x_F`, greedy `x_G`.
pub fn run_once(inst: &Instance, tables: &DerivativeTables, seed: u64) -> Result<(Vec<i8>, PartitionPlan)> {
    let mut rng = child_rng(seed, 0);
    let plan = PartitionPlan::random(inst, &mut rng);
    if let Err(l) = plan.check_independence(inst) {
        return Err(Error::Precondition(format!(
            "greedy neighbourhoods of inactive constraint {l} are not independent"
        )));
    }
    let mut x: Vec<i8> = (0..inst.n()).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    let rules = rules_for(inst, &plan, tables);
    greedy_assign(inst, &plan, tables, &rules, &mut x, derive_seed(seed, 1));
    Ok((x, plan))
}

/// Repeats [`run_once`] and keeps the best assignment.
pub fn solve_triangle_free(inst: &Instance, seed: u64, reps: Option<usize>) -> Result<(Assignment, SolveReport)> {
    let start = Instant::now();
    check_input(inst)?;
    let tables = DerivativeTables::new(inst);
    let reps = reps.unwrap_or_else(|| default_reps(inst.max_arity())).max(1);
    let runs: Vec<(usize, Vec<i8>)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let (x, _) = run_once(inst, &tables, derive_seed(seed, rep as u64))?;
            Ok((inst.satisfied_count(&x)?, x))
        })
        .collect::<Result<_>>()?;
    let mu = inst.mu();
    let m = inst.m() as f64;
    let per_rep: Vec<f64> = runs.iter().map(|(s, _)| *s as f64 / m - mu).collect();
    let best = runs.iter().enumerate().fold(0, |b, (i, r)| if r.0 > runs[b].0 { i } else { b });
    let x = runs[best].1.clone();
    let mut report = SolveReport::new("trifree", inst, &x, Some(seed))?;
    report.reps = Some(reps);
    report.per_rep_advantage = per_rep;
    report.note(format!("best repetition {best}"));
    report.millis = elapsed_millis(start);
    Ok((Assignment::new(x)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{big_ratio, TOLERANCE};
    use crate::rng::rng_from_seed;

    fn term(p: Predicate, t: usize) -> DerivativeTerm {
        let r = p.arity();
        DerivativeTerm {
            constraint: 0,
            position: t,
            rest: (0..r as u32).filter(|&v| v != t as u32).collect(),
            table: Arc::new(DerivativeTable::new(&p, t)),
        }
    }

    #[test]
    fn derivative_tables_match_polynomials() {
        let and = DerivativeTable::new(&Predicate::and(2).unwrap(), 0);
        // Q = 1/4 + x_u/4: 0 at x_u = -1, 1/2 at x_u = +1.
        assert_eq!(and.twice_q, vec![0, 1]);
        let or = DerivativeTable::new(&Predicate::or(2).unwrap(), 0);
        assert_eq!(or.twice_q, vec![1, 0]);
        let xor = DerivativeTable::new(&Predicate::parity(3, 1).unwrap(), 1);
        assert_eq!(xor.counts, [2, 0, 2]);
    }

    #[test]
    fn term_polynomials() {
        let mut inst = Instance::new(4);
        inst.push(Predicate::or(2).unwrap(), vec![2, 0]).unwrap();
        inst.push_xor(vec![1, 2, 3], -1).unwrap();
        let plan = PartitionPlan::from_greedy_set(&inst, vec![false, false, true, false]);
        let terms = derivative_terms(&inst, &plan, 2);
        assert_eq!(terms.len(), 2);
        let q_or = terms[0].polynomial(&inst);
        assert!((q_or.coefficient(&[]) - 0.25).abs() < TOLERANCE);
        assert!((q_or.coefficient(&[0]) + 0.25).abs() < TOLERANCE);
        let q_xor = terms[1].polynomial(&inst);
        assert!((q_xor.coefficient(&[1, 3]) + 0.5).abs() < TOLERANCE);
        // Table lookups agree with the polynomial.
        for mask in 0..16u64 {
            let x = Assignment::from_mask(4, mask);
            for t in &terms {
                let q = t.polynomial(&inst).evaluate(&x).unwrap();
                assert!((t.twice_value(&x) as f64 / 2.0 - q).abs() < TOLERANCE);
            }
        }
    }

    #[test]
    fn plan_definitions() {
        let mut inst = Instance::new(3);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        let plan = PartitionPlan::from_greedy_set(&inst, vec![true, false, false]);
        assert_eq!(plan.n_j(0), &[0]);
        assert_eq!(plan.a_j(0), &[1, 2]);
        let none = PartitionPlan::from_greedy_set(&inst, vec![false; 3]);
        assert_eq!(none.active_greedy(0), None);
        assert!(none.greedy().is_empty());
    }

    #[test]
    fn rule_single_xor() {
        let rule = threshold_rule(&[term(Predicate::parity(3, 1).unwrap(), 0)]);
        assert_eq!(rule.theta_half, -1);
        assert_eq!(rule.p_plus, BigRational::zero());
        assert_eq!(rule.plus_mass(), big_ratio(1, 2));
        assert_eq!(rule.decide(1, &mut rng_from_seed(0)), 1);
        assert_eq!(rule.decide(-1, &mut rng_from_seed(0)), -1);
    }

    #[test]
    fn rule_two_xors() {
        let t = term(Predicate::parity(3, 1).unwrap(), 0);
        let rule = threshold_rule(&[t.clone(), t]);
        assert_eq!(rule.pmf.prob(-2), big_ratio(1, 4));
        assert_eq!(rule.pmf.prob(0), big_ratio(1, 2));
        assert_eq!(rule.pmf.prob(2), big_ratio(1, 4));
        assert_eq!(rule.theta_half, 0);
        assert_eq!(rule.p_plus, big_ratio(1, 2));
        assert_eq!(rule.expected_sign(), BigRational::zero());
    }

    #[test]
    fn rule_empty() {
        let rule = threshold_rule(&[]);
        assert_eq!(rule.theta(), 0.0);
        assert_eq!(rule.p_plus, big_ratio(1, 2));
        assert_eq!(rule.expected_sign(), BigRational::zero());
    }

    #[test]
    fn mixed_rule_is_unbiased_and_advantaged() {
        let terms = vec![
            term(Predicate::or(2).unwrap(), 0),
            term(Predicate::and(2).unwrap(), 1),
            term(Predicate::not_all_equal(3).unwrap(), 2),
            term(Predicate::parity(3, -1).unwrap(), 0),
        ];
        let rule = threshold_rule(&terms);
        assert_eq!(rule.pmf.total(), BigRational::one());
        assert_eq!(rule.plus_mass(), big_ratio(1, 2));
        assert_eq!(rule.expected_sign_times_sum(), rule.expected_abs_deviation());
        assert!(rule.expected_abs_deviation() > BigRational::zero());
    }

    #[test]
    fn tie_coin_frequency() {
        let t = term(Predicate::parity(3, 1).unwrap(), 0);
        let rule = threshold_rule(&[t.clone(), t]);
        let mut rng = rng_from_seed(4);
        let plus = (0..20_000).filter(|_| rule.decide(0, &mut rng) == 1).count();
        assert!((plus as f64 / 20_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn rejects_overlap() {
        let mut inst = Instance::new(4);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        inst.push_xor(vec![1, 2, 3], 1).unwrap();
        match solve_triangle_free(&inst, 0, Some(2)) {
            Err(Error::NotTriangleFree(w)) => assert!(w.to_string().contains("0 and 1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn disjoint_constraints_gain() {
        let mut inst = Instance::new(30);
        for b in 0..10u32 {
            inst.push(Predicate::not_all_equal(3).unwrap(), vec![3 * b, 3 * b + 1, 3 * b + 2]).unwrap();
        }
        let (x, report) = solve_triangle_free(&inst, 8, Some(32)).unwrap();
        assert_eq!(report.per_rep_advantage.len(), 32);
        assert!(report.advantage > 0.0);
        assert_eq!(inst.satisfied_count(&x).unwrap(), report.satisfied);
    }
}
