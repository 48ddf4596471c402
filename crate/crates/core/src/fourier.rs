//! Sparse multilinear polynomials over the Boolean hypercube `{-1,+1}^n`.
//!
//! A polynomial is stored as a map from variable subsets to real Fourier
//! coefficients. Keys are canonical sorted index lists and the map is ordered,
//! so iteration (and therefore every floating-point reduction) is
//! deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Coefficients with magnitude at or below this are dropped.
pub const COEFF_EPS: f64 = 1e-12;

/// Comparison tolerance for real-valued identities.
pub const TOLERANCE: f64 = 1e-9;

/// Largest truth table accepted by [`MultilinearPoly::from_truth_table`].
pub const MAX_TABLE_ARITY: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FourierError {
    #[error("assignment has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("entry {index} is {value}, expected -1 or +1")]
    NotBoolean { index: usize, value: i64 },
    #[error("bias {value} at index {index} lies outside [-1, 1]")]
    BiasOutOfRange { index: usize, value: f64 },
    #[error("variable {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("variable {0} repeated in monomial")]
    RepeatedVariable(u32),
    #[error("truth table length {0} is not a power of two in [2, 2^20]")]
    BadTableLength(usize),
    #[error("polynomial has zero variance")]
    ZeroVariance,
}

/// A set of variable indices, stored sorted and without repeats.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarSet(Vec<u32>);

impl VarSet {
    pub fn new(mut vars: Vec<u32>) -> Result<Self, FourierError> {
        vars.sort_unstable();
        if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
            return Err(FourierError::RepeatedVariable(w[0]));
        }
        Ok(VarSet(vars))
    }

    /// Caller guarantees `vars` is strictly increasing.
    pub(crate) fn from_sorted(vars: Vec<u32>) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        VarSet(vars)
    }

    pub fn empty() -> Self {
        VarSet(Vec::new())
    }

    pub fn singleton(i: u32) -> Self {
        VarSet(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max_var(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// The same set with `i` removed (no-op if absent).
    pub fn without(&self, i: u32) -> VarSet {
        VarSet(self.0.iter().copied().filter(|&v| v != i).collect())
    }

    /// `x^S` for a ±1 vector.
    pub fn monomial(&self, x: &[i8]) -> i8 {
        self.0.iter().fold(1i8, |acc, &i| acc * x[i as usize])
    }

    /// `∏_{i∈S} mu_i` for a real vector.
    pub fn product(&self, mu: &[f64]) -> f64 {
        self.0.iter().map(|&i| mu[i as usize]).product()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, v) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A partial assignment `y`: some coordinates fixed to ±1, the rest free.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    fixed: BTreeMap<u32, i8>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, i8)>) -> Result<Self, FourierError> {
        let mut pa = Self::new();
        for (i, v) in pairs {
            pa.fix(i, v)?;
        }
        Ok(pa)
    }

    /// Fixes `x_i = value`, overwriting any earlier value.
    pub fn fix(&mut self, i: u32, value: i8) -> Result<(), FourierError> {
        if value != 1 && value != -1 {
            return Err(FourierError::NotBoolean { index: i as usize, value: value as i64 });
        }
        self.fixed.insert(i, value);
        Ok(())
    }

    pub fn get(&self, i: u32) -> Option<i8> {
        self.fixed.get(&i).copied()
    }

    pub fn len(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i8)> + '_ {
        self.fixed.iter().map(|(&i, &v)| (i, v))
    }
}

/// Real multilinear polynomial `f(x) = Σ_S f̂(S) x^S` over `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearPoly {
    n: usize,
    terms: BTreeMap<VarSet, f64>,
}

impl MultilinearPoly {
    /// The zero polynomial on `n` variables.
    pub fn zero(n: usize) -> Self {
        MultilinearPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut p = Self::zero(n);
        p.accumulate(VarSet::empty(), c);
        p
    }

    /// Builds a polynomial from `(subset, coefficient)` pairs. Repeated subsets
    /// are summed.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, FourierError>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Self::zero(n);
        for (vars, c) in terms {
            let set = VarSet::new(vars)?;
            p.add_term(set, c)?;
        }
        Ok(p)
    }

    /// Adds `c · x^S`, checking that `S ⊆ [n]`.
    pub fn add_term(&mut self, set: VarSet, c: f64) -> Result<(), FourierError> {
        if let Some(max) = set.max_var() {
            if max as usize >= self.n {
                return Err(FourierError::IndexOutOfRange { index: max as usize, n: self.n });
            }
        }
        self.accumulate(set, c);
        Ok(())
    }

    pub(crate) fn accumulate(&mut self, set: VarSet, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(set);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if c.abs() > COEFF_EPS {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum.abs() > COEFF_EPS {
                    *o.get_mut() = sum;
                } else {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial size; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(VarSet::len).max().unwrap_or(0)
    }

    pub fn coefficient(&self, vars: &[u32]) -> f64 {
        match VarSet::new(vars.to_vec()) {
            Ok(set) => self.terms.get(&set).copied().unwrap_or(0.0),
            Err(_) => 0.0,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VarSet, f64)> + '_ {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    /// Variables that appear in at least one monomial, ascending.
    pub fn support(&self) -> Vec<u32> {
        let mut vars: Vec<u32> = self.terms.keys().flat_map(|s| s.vars().iter().copied()).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    fn check_len(&self, got: usize) -> Result<(), FourierError> {
        if got != self.n {
            return Err(FourierError::LengthMismatch { expected: self.n, got });
        }
        Ok(())
    }

    /// `Σ_S f̂(S) ∏_{i∈S} x_i` at a ±1 point.
    pub fn evaluate(&self, x: &[i8]) -> Result<f64, FourierError> {
        self.check_len(x.len())?;
        if let Some((index, &v)) = x.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(FourierError::NotBoolean { index, value: v as i64 });
        }
        Ok(self.terms.iter().map(|(s, &c)| c * s.monomial(x) as f64).sum())
    }

    /// `E[f(X)]` for independent `X_i` with `E[X_i] = mu_i`; this is the
    /// multilinear extension evaluated at `mu`.
    pub fn evaluate_at_biases(&self, mu: &[f64]) -> Result<f64, FourierError> {
        self.check_len(mu.len())?;
        if let Some((index, &value)) =
            mu.iter().enumerate().find(|(_, &v)| !(-1.0 - TOLERANCE..=1.0 + TOLERANCE).contains(&v))
        {
            return Err(FourierError::BiasOutOfRange { index, value });
        }
        Ok(self.terms.iter().map(|(s, &c)| c * s.product(mu)).sum())
    }

    pub fn expectation(&self) -> f64 {
        self.terms.get(&VarSet::empty()).copied().unwrap_or(0.0)
    }

    pub fn variance(&self) -> f64 {
        self.terms.iter().filter(|(s, _)| !s.is_empty()).map(|(_, &c)| c * c).sum()
    }

    pub fn stddev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn influence(&self, i: usize) -> Result<f64, FourierError> {
        if i >= self.n {
            return Err(FourierError::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(self.terms.iter().filter(|(s, _)| s.contains(i as u32)).map(|(_, &c)| c * c).sum())
    }

    /// All `n` influences in one pass.
    pub fn influences(&self) -> Vec<f64> {
        let mut inf = vec![0.0; self.n];
        for (s, &c) in &self.terms {
            for &i in s.vars() {
                inf[i as usize] += c * c;
            }
        }
        inf
    }

    /// `∂_i f`: the polynomial with coefficients `f̂(S ∪ {i})` on `x^S`, `S ∌ i`.
    pub fn derivative(&self, i: usize) -> Result<MultilinearPoly, FourierError> {
        if i >= self.n {
            return Err(FourierError::IndexOutOfRange { index: i, n: self.n });
        }
        let mut d = Self::zero(self.n);
        for (s, &c) in &self.terms {
            if s.contains(i as u32) {
                d.accumulate(s.without(i as u32), c);
            }
        }
        Ok(d)
    }

    /// Substitutes the fixed coordinates of `pa`. The result keeps the same
    /// `n` but only mentions unfixed variables.
    pub fn restrict(&self, pa: &PartialAssignment) -> Result<MultilinearPoly, FourierError> {
        let mut dense = vec![0i8; self.n];
        for (i, v) in pa.iter() {
            if i as usize >= self.n {
                return Err(FourierError::IndexOutOfRange { index: i as usize, n: self.n });
            }
            dense[i as usize] = v;
        }
        Ok(self.restrict_dense(&dense))
    }

    /// Like [`restrict`](Self::restrict) with a dense vector where `0` means
    /// "free" and ±1 means fixed.
    pub(crate) fn restrict_dense(&self, dense: &[i8]) -> MultilinearPoly {
        let mut out = Self::zero(self.n);
        for (s, &c) in &self.terms {
            let mut sign = 1i8;
            let mut free = Vec::with_capacity(s.len());
            for &i in s.vars() {
                match dense[i as usize] {
                    0 => free.push(i),
                    v => sign *= v,
                }
            }
            out.accumulate(VarSet::from_sorted(free), c * sign as f64);
        }
        out
    }

    /// `Σ_{lo ≤ |S| ≤ hi} f̂(S)²`.
    pub fn level_mass(&self, lo: usize, hi: usize) -> f64 {
        self.terms
            .iter()
            .filter(|(s, _)| (lo..=hi).contains(&s.len()))
            .map(|(_, &c)| c * c)
            .sum()
    }

    /// `Σ_S f̂(S)²`.
    pub fn squared_norm(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum()
    }

    /// Multilinear expansion of a 0/1 truth table. Row `b` has bit `t` set iff
    /// input `t` is `+1`.
    pub fn from_truth_table(table: &[bool]) -> Result<MultilinearPoly, FourierError> {
        let walsh = walsh_coefficients(table)?;
        let r = table.len().trailing_zeros() as usize;
        let scale = table.len() as f64;
        let mut p = Self::zero(r);
        for (mask, &w) in walsh.iter().enumerate() {
            if w != 0 {
                p.accumulate(mask_to_set(mask as u64), w as f64 / scale);
            }
        }
        Ok(p)
    }

    pub fn scaled(&self, factor: f64) -> MultilinearPoly {
        let mut out = Self::zero(self.n);
        for (s, &c) in &self.terms {
            out.accumulate(s.clone(), c * factor);
        }
        out
    }

    /// The same polynomial with its constant term removed.
    pub fn without_constant(&self) -> MultilinearPoly {
        let mut out = self.clone();
        out.terms.remove(&VarSet::empty());
        out
    }

    /// `self += factor · other`. Both must have the same `n`.
    pub fn add_scaled(&mut self, other: &MultilinearPoly, factor: f64) {
        debug_assert_eq!(self.n, other.n);
        for (s, &c) in &other.terms {
            self.accumulate(s.clone(), c * factor);
        }
    }

    /// Renames local variable `t` to `scope[t]` and lifts into `n` variables.
    pub fn embed(&self, scope: &[u32], n: usize) -> Result<MultilinearPoly, FourierError> {
        if scope.len() < self.n {
            return Err(FourierError::LengthMismatch { expected: self.n, got: scope.len() });
        }
        let mut out = Self::zero(n);
        for (s, &c) in &self.terms {
            let vars: Vec<u32> = s.vars().iter().map(|&t| scope[t as usize]).collect();
            out.add_term(VarSet::new(vars)?, c)?;
        }
        Ok(out)
    }

    /// Rounds a product distribution with means `mu` to a single ±1 point by
    /// the method of conditional expectations, fixing coordinates in index
    /// order. The returned point satisfies `f(x) ≥ E_mu[f]`.
    pub fn fix_by_conditional_expectation(&self, mu: &[f64]) -> Result<Vec<i8>, FourierError> {
        // Validate the input once; the sweep below keeps every entry in [-1, 1].
        self.evaluate_at_biases(mu)?;
        let terms: Vec<(&VarSet, f64)> = self.terms().collect();
        let mut by_var: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (idx, (s, _)) in terms.iter().enumerate() {
            for &i in s.vars() {
                by_var[i as usize].push(idx);
            }
        }
        let mut point = mu.to_vec();
        let mut x = vec![1i8; self.n];
        for i in 0..self.n {
            // The objective is affine in point[i] with this slope.
            let slope: f64 = by_var[i]
                .iter()
                .map(|&idx| {
                    let (s, c) = terms[idx];
                    c * s.vars().iter().filter(|&&j| j as usize != i).map(|&j| point[j as usize]).product::<f64>()
                })
                .sum();
            x[i] = if slope >= 0.0 { 1 } else { -1 };
            point[i] = x[i] as f64;
        }
        Ok(x)
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (s, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if s.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}·x{s}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn mask_to_set(mask: u64) -> VarSet {
    VarSet::from_sorted((0..64u32).filter(|t| mask >> t & 1 == 1).collect())
}

/// Unnormalized Walsh coefficients `W(S) = Σ_b table[b] · ∏_{t∈S} x_t(b)`,
/// indexed by the bitmask of `S`. The Fourier coefficient is `W(S) / 2^r`.
pub fn walsh_coefficients(table: &[bool]) -> Result<Vec<i64>, FourierError> {
    let len = table.len();
    if len < 2 || !len.is_power_of_two() || len > 1 << MAX_TABLE_ARITY {
        return Err(FourierError::BadTableLength(len));
    }
    let mut w: Vec<i64> = table.iter().map(|&b| b as i64).collect();
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for lo in block..block + half {
                let (a, b) = (w[lo], w[lo + half]);
                // Coordinate absent from S sums both halves; present weights
                // x_t = +1 on the high half and -1 on the low half.
                w[lo] = a + b;
                w[lo + half] = b - a;
            }
        }
        half <<= 1;
    }
    Ok(w)
}

/// Polynomial with exact rational coefficients; used where identities must
/// hold with equality rather than within a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPoly {
    n: usize,
    terms: BTreeMap<VarSet, BigRational>,
}

impl RationalPoly {
    pub fn zero(n: usize) -> Self {
        RationalPoly { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn accumulate(&mut self, set: VarSet, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(set) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VarSet, &BigRational)> + '_ {
        self.terms.iter()
    }

    pub fn expectation(&self) -> BigRational {
        self.terms.get(&VarSet::empty()).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn variance(&self) -> BigRational {
        self.terms.iter().filter(|(s, _)| !s.is_empty()).map(|(_, c)| c * c).sum()
    }

    pub fn influence(&self, i: usize) -> Result<BigRational, FourierError> {
        if i >= self.n {
            return Err(FourierError::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(self.terms.iter().filter(|(s, _)| s.contains(i as u32)).map(|(_, c)| c * c).sum())
    }

    /// Nearest floating-point polynomial.
    pub fn to_f64(&self) -> MultilinearPoly {
        let mut p = MultilinearPoly::zero(self.n);
        for (s, c) in &self.terms {
            p.accumulate(s.clone(), ratio_to_f64(c));
        }
        p
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fallback for huge numerators/denominators.
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        let num = r.numer().abs().to_f64().unwrap_or(f64::INFINITY);
        let den = r.denom().to_f64().unwrap_or(f64::INFINITY);
        sign * num / den
    })
}

pub(crate) fn big_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
