//! Well-formedness and triangle-freeness checks.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::{Instance, InstanceKind};

/// Outcome of [`Instance::check_triangle_free`]. Witness ids are sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TriangleFreeReport {
    Ok,
    /// Two constraints sharing at least two variables.
    Overlap { first: usize, second: usize },
    /// Three constraints that pairwise meet in three distinct variables.
    HyperTriangle { first: usize, second: usize, third: usize },
}

impl TriangleFreeReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, TriangleFreeReport::Ok)
    }
}

impl fmt::Display for TriangleFreeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriangleFreeReport::Ok => write!(f, "triangle-free"),
            TriangleFreeReport::Overlap { first, second } => {
                write!(f, "constraints {first} and {second} share two or more variables")
            }
            TriangleFreeReport::HyperTriangle { first, second, third } => {
                write!(f, "constraints {first}, {second} and {third} form a hyper-triangle")
            }
        }
    }
}

/// Variable-to-constraint incidence that grows one scope at a time and can
/// test a candidate scope against both forbidden configurations before it is
/// inserted.
#[derive(Clone, Debug, Default)]
pub struct Incidence {
    by_var: Vec<Vec<usize>>,
    scopes: Vec<Vec<u32>>,
}

impl Incidence {
    pub fn new(n: usize) -> Self {
        Incidence { by_var: vec![Vec::new(); n], scopes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.scopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scopes.is_empty()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.by_var.get(v as usize).map_or(0, Vec::len)
    }

    pub fn scope(&self, id: usize) -> &[u32] {
        &self.scopes[id]
    }

    fn ensure(&mut self, scope: &[u32]) {
        if let Some(&max) = scope.iter().max() {
            if max as usize >= self.by_var.len() {
                self.by_var.resize(max as usize + 1, Vec::new());
            }
        }
    }

    fn constraints_at(&self, v: u32) -> &[usize] {
        self.by_var.get(v as usize).map_or(&[], Vec::as_slice)
    }

    /// The violation `scope` would create, naming it with id `self.len()`.
    pub fn conflict(&self, scope: &[u32]) -> TriangleFreeReport {
        let new = self.scopes.len();
        // Overlap: an existing constraint meets the candidate twice.
        let mut hits: HashMap<usize, u32> = HashMap::new();
        for &v in scope {
            for &c in self.constraints_at(v) {
                let h = hits.entry(c).or_insert(0);
                *h += 1;
                if *h >= 2 {
                    return TriangleFreeReport::Overlap { first: c, second: new };
                }
            }
        }
        // Hyper-triangle: c2 ∋ a and c3 ∋ b for a ≠ b in the scope, with c2
        // and c3 meeting outside the scope. Absent overlaps, c2 ∩ scope = {a}
        // and c3 ∩ scope = {b}, so any common variable of c2 and c3 is a
        // third point.
        let mut reach: HashMap<u32, (usize, u32)> = HashMap::new();
        for &a in scope {
            for &c2 in self.constraints_at(a) {
                for &w in &self.scopes[c2] {
                    if w == a {
                        continue;
                    }
                    if let Some(&(c3, b)) = reach.get(&w) {
                        if b != a && c3 != c2 {
                            let mut ids = [c3, c2, new];
                            ids.sort_unstable();
                            return TriangleFreeReport::HyperTriangle { first: ids[0], second: ids[1], third: ids[2] };
                        }
                    } else {
                        reach.insert(w, (c2, a));
                    }
                }
            }
        }
        TriangleFreeReport::Ok
    }

    /// Inserts without checking and returns the new id.
    pub fn insert(&mut self, scope: &[u32]) -> usize {
        self.ensure(scope);
        let id = self.scopes.len();
        for &v in scope {
            self.by_var[v as usize].push(id);
        }
        self.scopes.push(scope.to_vec());
        id
    }

    /// Inserts if doing so keeps the family triangle-free.
    pub fn try_insert(&mut self, scope: &[u32]) -> Result<usize, TriangleFreeReport> {
        match self.conflict(scope) {
            TriangleFreeReport::Ok => Ok(self.insert(scope)),
            bad => Err(bad),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoConstraints,
    VariableOutOfRange { constraint: usize, var: u32 },
    RepeatedCoordinate { constraint: usize, var: u32 },
    InsensitiveCoordinate { constraint: usize, coord: usize },
    /// Two kXOR constraints on the same variable set (equal or negated).
    DuplicateScope { first: usize, second: usize },
    UnaryConstraint { constraint: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoConstraints => write!(f, "instance has no constraints"),
            Violation::VariableOutOfRange { constraint, var } => {
                write!(f, "constraint {constraint}: variable {var} out of range")
            }
            Violation::RepeatedCoordinate { constraint, var } => {
                write!(f, "constraint {constraint}: repeated coordinate {var}")
            }
            Violation::InsensitiveCoordinate { constraint, coord } => {
                write!(f, "constraint {constraint}: insensitive coordinate {coord}")
            }
            Violation::DuplicateScope { first, second } => {
                write!(f, "constraints {first} and {second} have the same variable set")
            }
            Violation::UnaryConstraint { constraint } => write!(f, "constraint {constraint}: unary constraint"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "valid");
        }
        for (idx, v) in self.violations.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Instance {
    /// Lists every structural problem; an empty report means the instance is
    /// well formed.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.m() == 0 {
            violations.push(Violation::NoConstraints);
        }
        let insensitive: Vec<Vec<usize>> = self
            .predicates()
            .iter()
            .map(|p| (0..p.arity()).filter(|&c| !p.is_sensitive_to(c)).collect())
            .collect();
        for (l, c) in self.constraints().iter().enumerate() {
            let mut seen = HashSet::new();
            for &v in &c.scope {
                if v as usize >= self.n() {
                    violations.push(Violation::VariableOutOfRange { constraint: l, var: v });
                }
                if !seen.insert(v) {
                    violations.push(Violation::RepeatedCoordinate { constraint: l, var: v });
                }
            }
            for &coord in &insensitive[c.predicate] {
                violations.push(Violation::InsensitiveCoordinate { constraint: l, coord });
            }
        }
        if let InstanceKind::KXor(_) = self.kind() {
            let mut first_by_set: HashMap<Vec<u32>, usize> = HashMap::new();
            for (l, c) in self.constraints().iter().enumerate() {
                let mut key = c.scope.clone();
                key.sort_unstable();
                if let Some(&first) = first_by_set.get(&key) {
                    violations.push(Violation::DuplicateScope { first, second: l });
                } else {
                    first_by_set.insert(key, l);
                }
            }
        }
        ValidationReport { violations }
    }

    /// [`validate`](Self::validate) plus the arity ≥ 2 requirement of the
    /// triangle-free solver.
    pub fn validate_for_trifree(&self) -> ValidationReport {
        let mut report = self.validate();
        for (l, c) in self.constraints().iter().enumerate() {
            if c.scope.len() < 2 {
                report.violations.push(Violation::UnaryConstraint { constraint: l });
            }
        }
        report
    }

    /// Checks that no two scopes share two variables and no three scopes
    /// pairwise meet in three distinct variables. Constraints sharing a single
    /// common variable are allowed.
    pub fn check_triangle_free(&self) -> TriangleFreeReport {
        let mut inc = Incidence::new(self.n());
        for c in self.constraints() {
            let mut scope = c.scope.clone();
            scope.sort_unstable();
            scope.dedup();
            if let Err(witness) = inc.try_insert(&scope) {
                return witness;
            }
        }
        TriangleFreeReport::Ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Predicate;

    fn xor_instance(n: usize, scopes: &[&[u32]]) -> Instance {
        let mut inst = Instance::new(n);
        for s in scopes {
            inst.push_xor(s.to_vec(), 1).unwrap();
        }
        inst
    }

    #[test]
    fn overlap_witness() {
        let inst = xor_instance(4, &[&[0, 1, 2], &[1, 2, 3]]);
        assert_eq!(inst.check_triangle_free(), TriangleFreeReport::Overlap { first: 0, second: 1 });
    }

    #[test]
    fn triangle_witness() {
        let inst = xor_instance(3, &[&[0, 1], &[1, 2], &[2, 0]]);
        assert_eq!(inst.check_triangle_free(), TriangleFreeReport::HyperTriangle { first: 0, second: 1, third: 2 });
        let big = xor_instance(9, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0], &[6, 7, 8]]);
        assert!(matches!(big.check_triangle_free(), TriangleFreeReport::HyperTriangle { .. }));
    }

    #[test]
    fn accepted_shapes() {
        assert!(xor_instance(6, &[&[0, 1, 2], &[3, 4, 5]]).check_triangle_free().is_ok());
        // A star through one variable and a path are both fine.
        assert!(xor_instance(7, &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6]]).check_triangle_free().is_ok());
        assert!(xor_instance(5, &[&[0, 1], &[1, 2], &[2, 3], &[3, 4]]).check_triangle_free().is_ok());
        // A 4-cycle has no three pairwise-meeting edges.
        assert!(xor_instance(4, &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]).check_triangle_free().is_ok());
    }

    #[test]
    fn validation_messages() {
        let mut inst = Instance::new(3);
        inst.push(Predicate::or(3).unwrap(), vec![0, 0, 1]).unwrap();
        let report = inst.validate();
        assert!(report.violations.contains(&Violation::RepeatedCoordinate { constraint: 0, var: 0 }));
        assert!(report.to_string().contains("repeated coordinate"));

        let mut lazy = Instance::new(2);
        lazy.push(Predicate::from_fn(2, |x| x[0] > 0).unwrap(), vec![0, 1]).unwrap();
        assert_eq!(lazy.validate().violations, vec![Violation::InsensitiveCoordinate { constraint: 0, coord: 1 }]);
        assert!(lazy.validate().to_string().contains("insensitive coordinate"));

        let mut dup = Instance::new(3);
        dup.push_xor(vec![0, 1, 2], 1).unwrap();
        dup.push_xor(vec![2, 0, 1], -1).unwrap();
        assert_eq!(dup.validate().violations, vec![Violation::DuplicateScope { first: 0, second: 1 }]);

        let mut far = Instance::new(2);
        far.push_xor(vec![0, 5], 1).unwrap();
        assert_eq!(far.validate().violations, vec![Violation::VariableOutOfRange { constraint: 0, var: 5 }]);

        assert_eq!(Instance::new(3).validate().violations, vec![Violation::NoConstraints]);
    }

    #[test]
    fn unary_rejected_only_for_trifree() {
        let mut inst = Instance::new(2);
        inst.push(Predicate::or(1).unwrap(), vec![0]).unwrap();
        inst.push(Predicate::or(2).unwrap(), vec![0, 1]).unwrap();
        assert!(inst.validate().is_ok());
        assert_eq!(inst.validate_for_trifree().violations, vec![Violation::UnaryConstraint { constraint: 0 }]);
    }

    #[test]
    fn incidence_grows() {
        let mut inc = Incidence::new(0);
        assert_eq!(inc.try_insert(&[3, 4]), Ok(0));
        assert_eq!(inc.degree(4), 1);
        assert_eq!(inc.try_insert(&[4, 5]), Ok(1));
        assert_eq!(inc.try_insert(&[3, 4]), Err(TriangleFreeReport::Overlap { first: 0, second: 2 }));
        assert_eq!(
            inc.try_insert(&[5, 3]),
            Err(TriangleFreeReport::HyperTriangle { first: 0, second: 1, third: 2 })
        );
        assert_eq!(inc.len(), 2);
    }
}
