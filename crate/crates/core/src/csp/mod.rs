//! Constraint-satisfaction instances over ±1 variables.
//!
//! An [`Instance`] holds `n` variables and `m` constraints; each constraint
//! applies a [`Predicate`] from a deduplicated pool to an ordered scope.

mod format;
mod predicate;
mod structure;

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourier::{MultilinearPoly, RationalPoly, VarSet};

pub use format::{parse_instance, write_instance, ParseError};
pub use predicate::{bit_of, Predicate, MAX_ARITY};
pub use structure::{Incidence, TriangleFreeReport, ValidationReport, Violation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CspError {
    #[error("truth table of length {len} is not 2^r for 1 <= r <= 8")]
    BadTable { len: usize },
    #[error("arity {0} outside [1, 8]")]
    BadArity(usize),
    #[error("hex table {text:?} does not encode an arity-{arity} predicate")]
    BadHex { arity: usize, text: String },
    #[error("scope of length {scope} given for a predicate of arity {arity}")]
    ScopeArity { arity: usize, scope: usize },
    #[error("assignment has length {got}, instance has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("assignment entry {index} is {value}, expected -1 or +1")]
    NotBoolean { index: usize, value: i8 },
    #[error("instance has no constraints")]
    Empty,
}

/// A full assignment `x ∈ {±1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Assignment(Vec<i8>);

impl Assignment {
    pub fn new(values: Vec<i8>) -> Result<Self, CspError> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(CspError::NotBoolean { index, value });
        }
        Ok(Assignment(values))
    }

    pub fn all_plus(n: usize) -> Self {
        Assignment(vec![1; n])
    }

    /// Bit `i` of `mask` set means `x_i = +1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Assignment((0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect())
    }

    pub fn negated(&self) -> Assignment {
        Assignment(self.0.iter().map(|v| -v).collect())
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }
}

impl Deref for Assignment {
    type Target = [i8];
    fn deref(&self) -> &[i8] {
        &self.0
    }
}

impl TryFrom<Vec<i8>> for Assignment {
    type Error = CspError;
    fn try_from(v: Vec<i8>) -> Result<Self, CspError> {
        Assignment::new(v)
    }
}

impl From<Assignment> for Vec<i8> {
    fn from(a: Assignment) -> Vec<i8> {
        a.0
    }
}

/// Fraction of satisfied constraints, kept as an exact integer ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub satisfied: usize,
    pub m: usize,
}

impl Value {
    pub fn as_f64(&self) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        self.satisfied as f64 / self.m as f64
    }

    pub fn as_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.satisfied), BigInt::from(self.m.max(1)))
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        // Cross-multiplied so values over different m compare exactly.
        Some((self.satisfied as u128 * other.m as u128).cmp(&(other.satisfied as u128 * self.m as u128)))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.satisfied, self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub predicate: usize,
    pub scope: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstanceKind {
    Generic,
    KXor(usize),
}

#[derive(Clone, Debug, Default)]
pub struct Instance {
    n: usize,
    predicates: Vec<Predicate>,
    constraints: Vec<Constraint>,
    pool: HashMap<Predicate, usize>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.predicates == other.predicates && self.constraints == other.constraints
    }
}

impl Instance {
    pub fn new(n: usize) -> Self {
        Instance { n, ..Default::default() }
    }

    /// Appends a constraint and returns its index. Only the scope length is
    /// checked here; [`validate`](Self::validate) reports everything else.
    pub fn push(&mut self, predicate: Predicate, scope: Vec<u32>) -> Result<usize, CspError> {
        if scope.len() != predicate.arity() {
            return Err(CspError::ScopeArity { arity: predicate.arity(), scope: scope.len() });
        }
        let next = self.predicates.len();
        let id = *self.pool.entry(predicate.clone()).or_insert(next);
        if id == next {
            self.predicates.push(predicate);
        }
        self.constraints.push(Constraint { predicate: id, scope });
        Ok(self.constraints.len() - 1)
    }

    /// Appends `∏_{v ∈ scope} x_v = sign`.
    pub fn push_xor(&mut self, scope: Vec<u32>, sign: i8) -> Result<usize, CspError> {
        let p = Predicate::parity(scope.len(), sign)?;
        self.push(p, scope)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn predicate_of(&self, l: usize) -> &Predicate {
        &self.predicates[self.constraints[l].predicate]
    }

    /// `KXor(k)` when every predicate is a ±parity of the same arity `k`.
    pub fn kind(&self) -> InstanceKind {
        let mut arity = None;
        for p in &self.predicates {
            if p.parity_sign().is_none() {
                return InstanceKind::Generic;
            }
            match arity {
                None => arity = Some(p.arity()),
                Some(a) if a != p.arity() => return InstanceKind::Generic,
                _ => {}
            }
        }
        match arity {
            Some(k) => InstanceKind::KXor(k),
            None => InstanceKind::Generic,
        }
    }

    pub fn max_arity(&self) -> usize {
        self.predicates.iter().map(Predicate::arity).max().unwrap_or(0)
    }

    #[inline]
    pub fn row(&self, l: usize, x: &[i8]) -> usize {
        self.constraints[l].scope.iter().enumerate().fold(0usize, |acc, (t, &v)| acc | bit_of(x[v as usize]) << t)
    }

    #[inline]
    pub fn is_satisfied(&self, l: usize, x: &[i8]) -> bool {
        self.predicate_of(l).accepts_row(self.row(l, x))
    }

    fn check_assignment(&self, x: &[i8]) -> Result<(), CspError> {
        if x.len() != self.n {
            return Err(CspError::AssignmentLength { expected: self.n, got: x.len() });
        }
        Ok(())
    }

    pub fn satisfied_count(&self, x: &[i8]) -> Result<usize, CspError> {
        self.check_assignment(x)?;
        Ok((0..self.m()).filter(|&l| self.is_satisfied(l, x)).count())
    }

    /// `val(x)`: satisfied constraints over `m`, counted exactly.
    pub fn value_fraction(&self, x: &[i8]) -> Result<Value, CspError> {
        Ok(Value { satisfied: self.satisfied_count(x)?, m: self.m() })
    }

    /// Expected satisfied fraction under a uniform assignment.
    pub fn mu(&self) -> f64 {
        if self.constraints.is_empty() {
            return 0.0;
        }
        self.constraints.iter().map(|c| self.predicates[c.predicate].density()).sum::<f64>() / self.m() as f64
    }

    pub fn mu_exact(&self) -> BigRational {
        let mut acc = BigRational::from_integer(BigInt::from(0));
        for c in &self.constraints {
            let p = &self.predicates[c.predicate];
            acc += BigRational::new(BigInt::from(p.popcount()), BigInt::from(1u64) << p.arity());
        }
        acc / BigInt::from(self.m().max(1))
    }

    /// `𝔓(x) = (1/m) Σ_ℓ (P_ℓ − E P_ℓ)(x_{S_ℓ})`, so that
    /// `val(x) = μ + 𝔓(x)` for every `x`.
    pub fn associated_polynomial(&self) -> MultilinearPoly {
        let mut out = MultilinearPoly::zero(self.n);
        if self.constraints.is_empty() {
            return out;
        }
        let local: Vec<MultilinearPoly> = self.predicates.iter().map(|p| p.polynomial().without_constant()).collect();
        let inv_m = 1.0 / self.m() as f64;
        for c in &self.constraints {
            for (s, coef) in local[c.predicate].terms() {
                let vars: Vec<u32> = s.vars().iter().map(|&t| c.scope[t as usize]).collect();
                if let Ok(set) = VarSet::new(vars) {
                    out.accumulate(set, coef * inv_m);
                }
            }
        }
        out
    }

    /// [`associated_polynomial`](Self::associated_polynomial) with exact
    /// rational coefficients, built from integer Walsh sums.
    pub fn associated_polynomial_exact(&self) -> RationalPoly {
        let mut out = RationalPoly::zero(self.n);
        if self.constraints.is_empty() {
            return out;
        }
        let m = BigInt::from(self.m());
        let walsh: Vec<Vec<i64>> = self.predicates.iter().map(Predicate::walsh).collect();
        for c in &self.constraints {
            let arity = self.predicates[c.predicate].arity();
            let den = (BigInt::from(1u64) << arity) * &m;
            for (mask, &w) in walsh[c.predicate].iter().enumerate().skip(1) {
                if w == 0 {
                    continue;
                }
                let vars: Vec<u32> = (0..arity).filter(|t| mask >> t & 1 == 1).map(|t| c.scope[t]).collect();
                if let Ok(set) = VarSet::new(vars) {
                    out.accumulate(set, BigRational::new(BigInt::from(w), den.clone()));
                }
            }
        }
        out
    }

    /// Number of constraints whose scope contains `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.constraints.iter().filter(|c| c.scope.contains(&(i as u32))).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for c in &self.constraints {
            for &v in &c.scope {
                if (v as usize) < self.n {
                    deg[v as usize] += 1;
                }
            }
        }
        deg
    }

    /// `D`, the maximum variable degree.
    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `Σ_i √deg(i) / m`, the yardstick for degree-sensitive guarantees.
    pub fn sqrt_degree_yardstick(&self) -> f64 {
        if self.m() == 0 {
            return 0.0;
        }
        self.degrees().iter().map(|&d| (d as f64).sqrt()).sum::<f64>() / self.m() as f64
    }

    /// For each variable, the constraints that mention it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (l, c) in self.constraints.iter().enumerate() {
            for &v in &c.scope {
                if (v as usize) < self.n {
                    inc[v as usize].push(l);
                }
            }
        }
        inc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{big_ratio, TOLERANCE};

    fn complete_cut(n: u32) -> Instance {
        let mut inst = Instance::new(n as usize);
        for i in 0..n {
            for j in i + 1..n {
                inst.push_xor(vec![i, j], -1).unwrap();
            }
        }
        inst
    }

    #[test]
    fn single_xor_value() {
        let mut inst = Instance::new(3);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        let v = inst.value_fraction(&[1, 1, 1]).unwrap();
        assert_eq!(v, Value { satisfied: 1, m: 1 });
        assert_eq!(inst.kind(), InstanceKind::KXor(3));
        assert!(inst.value_fraction(&[1, 1]).is_err());
    }

    #[test]
    fn mu_values() {
        let mut xor = Instance::new(4);
        xor.push_xor(vec![0, 1, 2], 1).unwrap();
        xor.push_xor(vec![1, 2, 3], -1).unwrap();
        assert_eq!(xor.mu(), 0.5);
        let mut nae = Instance::new(4);
        nae.push(Predicate::not_all_equal(3).unwrap(), vec![0, 1, 2]).unwrap();
        nae.push(Predicate::not_all_equal(3).unwrap(), vec![1, 2, 3]).unwrap();
        assert_eq!(nae.mu(), 0.75);
        assert_eq!(nae.mu_exact(), big_ratio(3, 4));
        assert_eq!(nae.predicates().len(), 1);
        let mut t = Instance::new(2);
        t.push(Predicate::from_fn(2, |_| true).unwrap(), vec![0, 1]).unwrap();
        assert_eq!(t.mu(), 1.0);
    }

    #[test]
    fn associated_polynomial_single_xor() {
        let mut inst = Instance::new(3);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        let p = inst.associated_polynomial();
        assert_eq!(p.num_terms(), 1);
        assert!((p.coefficient(&[0, 1, 2]) - 0.5).abs() < TOLERANCE);
    }

    #[test]
    fn complementary_pair_cancels() {
        let mut inst = Instance::new(3);
        let or = Predicate::or(3).unwrap();
        inst.push(or.complement(), vec![0, 1, 2]).unwrap();
        inst.push(or, vec![0, 1, 2]).unwrap();
        assert!(inst.associated_polynomial().is_zero());
    }

    #[test]
    fn reconstruction_exhaustive() {
        let mut inst = Instance::new(5);
        inst.push(Predicate::or(2).unwrap(), vec![3, 1]).unwrap();
        inst.push(Predicate::not_all_equal(3).unwrap(), vec![0, 4, 2]).unwrap();
        inst.push(Predicate::and(2).unwrap(), vec![2, 1]).unwrap();
        inst.push_xor(vec![4, 0, 3], -1).unwrap();
        let p = inst.associated_polynomial();
        let mu = inst.mu();
        for mask in 0..32u64 {
            let x = Assignment::from_mask(5, mask);
            let v = inst.value_fraction(&x).unwrap().as_f64();
            assert!((v - mu - p.evaluate(&x).unwrap()).abs() < TOLERANCE);
        }
    }

    #[test]
    fn xor_variance_and_influence_exact() {
        let mut inst = Instance::new(5);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        inst.push_xor(vec![1, 2, 3], -1).unwrap();
        inst.push_xor(vec![0, 3, 4], 1).unwrap();
        let p = inst.associated_polynomial_exact();
        assert_eq!(p.variance(), big_ratio(1, 12));
        assert_eq!(p.influence(1).unwrap(), big_ratio(2, 36));
        assert_eq!(p.influence(4).unwrap(), big_ratio(1, 36));
    }

    #[test]
    fn degrees() {
        let mut inst = Instance::new(6);
        inst.push_xor(vec![0, 1, 2], 1).unwrap();
        assert_eq!(inst.degree(0), 1);
        assert_eq!(inst.degree(5), 0);
        let k5 = complete_cut(5);
        assert!(k5.degrees().iter().all(|&d| d == 4));
        assert_eq!(k5.max_degree(), 4);
        assert_eq!(k5.kind(), InstanceKind::KXor(2));
    }

    #[test]
    fn value_ordering_is_exact() {
        let a = Value { satisfied: 1, m: 3 };
        let b = Value { satisfied: 2, m: 6 };
        assert_eq!(a.partial_cmp(&b), Some(std::cmp::Ordering::Equal));
        assert!(Value { satisfied: 25, m: 45 } > Value { satisfied: 5, m: 10 });
    }

    #[test]
    fn assignment_serde() {
        let a = Assignment::new(vec![1, -1, 1]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[1,-1,1]");
        assert!(serde_json::from_str::<Assignment>("[1,0]").is_err());
        assert_eq!(a.negated().into_inner(), vec![-1, 1, -1]);
    }
}
