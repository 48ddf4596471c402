//! Instance generators. Every generator is a deterministic function of its
//! arguments and seed.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::csp::{Incidence, Instance, Predicate, TriangleFreeReport};
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng as SeededRng};

/// Attempts allowed per requested constraint before a generator gives up.
pub const ATTEMPTS_PER_CONSTRAINT: usize = 50;

/// Draws `r` distinct variables among those with spare degree.
fn pick_scope(rng: &mut SeededRng, open: &[u32], r: usize) -> Option<Vec<u32>> {
    if open.len() < r {
        return None;
    }
    Some(sample(rng, open.len(), r).into_iter().map(|i| open[i]).collect())
}

fn remove_full(open: &mut Vec<u32>, deg: &[usize], d: usize) {
    open.retain(|&v| deg[v as usize] < d);
}

/// Random kXOR with every degree at most `d` and distinct scope sets. Aims
/// for `⌊n d / k⌋` constraints; stops early when no variables have spare
/// degree or the attempt cap is reached.
pub fn random_kxor(n: usize, k: usize, d: usize, seed: u64) -> Result<Instance> {
    if k == 0 || k > crate::csp::MAX_ARITY || n < k || d == 0 {
        return Err(Error::Infeasible(format!("random kXOR needs n >= k in [1, 8] and D >= 1 (n={n}, k={k}, D={d})")));
    }
    let target = n * d / k;
    if target == 0 {
        return Err(Error::Infeasible(format!("n·D/k = {n}·{d}/{k} leaves room for no constraint")));
    }
    let mut rng = rng_from_seed(seed);
    let mut inst = Instance::new(n);
    let mut deg = vec![0usize; n];
    let mut open: Vec<u32> = (0..n as u32).collect();
    let mut used: HashSet<Vec<u32>> = HashSet::new();
    let mut attempts = 0;
    while inst.m() < target && attempts < ATTEMPTS_PER_CONSTRAINT * target {
        attempts += 1;
        let Some(scope) = pick_scope(&mut rng, &open, k) else { break };
        let mut key = scope.clone();
        key.sort_unstable();
        if !used.insert(key) {
            continue;
        }
        let sign = if rng.gen::<bool>() { 1 } else { -1 };
        inst.push_xor(scope.clone(), sign)?;
        for &v in &scope {
            deg[v as usize] += 1;
        }
        if scope.iter().any(|&v| deg[v as usize] == d) {
            remove_full(&mut open, &deg, d);
        }
    }
    Ok(inst)
}

/// Predicate families for the triangle-free generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixPredicate {
    /// Parity of arity 3 with a random sign.
    Xor3,
    Nae3,
    Or2,
    And2,
}

impl MixPredicate {
    pub const DEFAULT_MIX: [MixPredicate; 4] =
        [MixPredicate::Xor3, MixPredicate::Nae3, MixPredicate::Or2, MixPredicate::And2];

    pub fn arity(self) -> usize {
        match self {
            MixPredicate::Xor3 | MixPredicate::Nae3 => 3,
            MixPredicate::Or2 | MixPredicate::And2 => 2,
        }
    }

    fn draw(self, rng: &mut SeededRng) -> Predicate {
        let p = match self {
            MixPredicate::Xor3 => Predicate::parity(3, if rng.gen::<bool>() { 1 } else { -1 }),
            MixPredicate::Nae3 => Predicate::not_all_equal(3),
            MixPredicate::Or2 => Predicate::or(2),
            MixPredicate::And2 => Predicate::and(2),
        };
        p.expect("fixed arities are valid")
    }
}

/// Output of [`triangle_free_random`].
#[derive(Clone, Debug)]
pub struct Packed {
    pub instance: Instance,
    pub target: usize,
    /// Set when fewer than `target` constraints were placed.
    pub short: bool,
}

/// Greedy random packing of triangle-free constraints drawn uniformly from
/// `mix` restricted to arity at most `k`. Aims for `⌊n d / k⌋` constraints.
pub fn triangle_free_random(n: usize, k: usize, d: usize, seed: u64, mix: &[MixPredicate]) -> Result<Packed> {
    let mix: Vec<MixPredicate> = mix.iter().copied().filter(|p| p.arity() <= k).collect();
    if mix.is_empty() || d == 0 || n < 2 {
        return Err(Error::Infeasible(format!("no predicate of arity <= {k} available, or n < 2, or D = 0")));
    }
    let target = n * d / k.max(2);
    if target == 0 {
        return Err(Error::Infeasible(format!("n·D/k = {n}·{d}/{k} leaves room for no constraint")));
    }
    let mut rng = rng_from_seed(seed);
    let mut inst = Instance::new(n);
    let mut inc = Incidence::new(n);
    let mut deg = vec![0usize; n];
    let mut open: Vec<u32> = (0..n as u32).collect();
    let mut attempts = 0;
    while inst.m() < target && attempts < ATTEMPTS_PER_CONSTRAINT * target {
        attempts += 1;
        let kind = mix[rng.gen_range(0..mix.len())];
        let Some(scope) = pick_scope(&mut rng, &open, kind.arity()) else {
            if open.len() < 2 {
                break;
            }
            continue;
        };
        let mut sorted = scope.clone();
        sorted.sort_unstable();
        if inc.conflict(&sorted) != TriangleFreeReport::Ok {
            continue;
        }
        inc.insert(&sorted);
        inst.push(kind.draw(&mut rng), scope.clone())?;
        for &v in &scope {
            deg[v as usize] += 1;
        }
        if scope.iter().any(|&v| deg[v as usize] == d) {
            remove_full(&mut open, &deg, d);
        }
    }
    let short = inst.m() < target;
    Ok(Packed { instance: inst, target, short })
}

/// Max-Cut on `K_n`: `x_i ≠ x_j` for every pair.
pub fn complete_graph_maxcut(n: usize) -> Instance {
    let mut inst = Instance::new(n);
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            inst.push_xor(vec![i, j], -1).expect("arity 2");
        }
    }
    inst
}

/// `K_n` with each edge independently `x_i = x_j` or `x_i ≠ x_j`.
pub fn random_sign_graph(n: usize, seed: u64) -> Instance {
    let mut rng = rng_from_seed(seed);
    let mut inst = Instance::new(n);
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            let sign = if rng.gen::<bool>() { 1 } else { -1 };
            inst.push_xor(vec![i, j], sign).expect("arity 2");
        }
    }
    inst
}

/// `D × D` grid of variables (`x_{r,c}` is index `r·D + c`): `x ∨ y` for
/// every pair in a row and `¬x ∨ ¬y` for every pair in a column.
pub fn grid_2sat(d: usize) -> Instance {
    let mut inst = Instance::new(d * d);
    let or = Predicate::or(2).expect("arity 2");
    let nand = Predicate::nand(2).expect("arity 2");
    let at = |r: usize, c: usize| (r * d + c) as u32;
    for r in 0..d {
        for a in 0..d {
            for b in a + 1..d {
                inst.push(or.clone(), vec![at(r, a), at(r, b)]).expect("arity 2");
            }
        }
    }
    for c in 0..d {
        for a in 0..d {
            for b in a + 1..d {
                inst.push(nand.clone(), vec![at(a, c), at(b, c)]).expect("arity 2");
            }
        }
    }
    inst
}

/// Six variables `x1..x3` (indices 0..2) and `y1..y3` (3..5) with eight
/// NAE/AE clauses, every assignment satisfying exactly four.
pub fn nae_ae_gadget() -> Instance {
    let nae = Predicate::not_all_equal(3).expect("arity 3");
    let ae = Predicate::all_equal(3).expect("arity 3");
    let (x1, x2, x3, y1, y2, y3) = (0, 1, 2, 3, 4, 5);
    let clauses = [
        (&nae, [x1, x2, x3]),
        (&ae, [y1, x2, x3]),
        (&ae, [x1, y2, x3]),
        (&ae, [x1, x2, y3]),
        (&nae, [x1, y2, y3]),
        (&nae, [y1, x2, y3]),
        (&nae, [y1, y2, x3]),
        (&ae, [y1, y2, y3]),
    ];
    let mut inst = Instance::new(6);
    for (p, scope) in clauses {
        inst.push(p.clone(), scope.to_vec()).expect("arity 3");
    }
    inst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Kxor,
    TriangleFree,
    CompleteCut,
    Grid2sat,
    NaeAe,
    RandomSignGraph,
}

impl GenKind {
    pub const ALL: [GenKind; 6] = [
        GenKind::Kxor,
        GenKind::TriangleFree,
        GenKind::CompleteCut,
        GenKind::Grid2sat,
        GenKind::NaeAe,
        GenKind::RandomSignGraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Kxor => "kxor",
            GenKind::TriangleFree => "triangle-free",
            GenKind::CompleteCut => "complete-cut",
            GenKind::Grid2sat => "grid-2sat",
            GenKind::NaeAe => "nae-ae",
            GenKind::RandomSignGraph => "random-sign-graph",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown kind {s:?}; expected one of kxor, triangle-free, complete-cut, grid-2sat, nae-ae, random-sign-graph"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "D")]
    pub d: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: Instance,
    /// Human-readable notes, e.g. a short packing.
    pub notes: Vec<String>,
}

/// Dispatches on `spec.kind`. Fields a kind does not use are ignored:
/// `grid-2sat` reads only `d`, `complete-cut` and `random-sign-graph` only
/// `n` (and `seed`), `nae-ae` nothing.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    let mut notes = Vec::new();
    let instance = match spec.kind {
        GenKind::Kxor => random_kxor(spec.n, spec.k, spec.d, spec.seed)?,
        GenKind::TriangleFree => {
            let packed = triangle_free_random(spec.n, spec.k, spec.d, spec.seed, &MixPredicate::DEFAULT_MIX)?;
            if packed.short {
                notes.push(format!("placed {} of {} constraints", packed.instance.m(), packed.target));
            }
            packed.instance
        }
        GenKind::CompleteCut => {
            if spec.n < 2 {
                return Err(Error::Infeasible("complete-cut needs n >= 2".into()));
            }
            complete_graph_maxcut(spec.n)
        }
        GenKind::Grid2sat => {
            if spec.d < 2 {
                return Err(Error::Infeasible("grid-2sat needs D >= 2".into()));
            }
            grid_2sat(spec.d)
        }
        GenKind::NaeAe => nae_ae_gadget(),
        GenKind::RandomSignGraph => {
            if spec.n < 2 {
                return Err(Error::Infeasible("random-sign-graph needs n >= 2".into()));
            }
            random_sign_graph(spec.n, spec.seed)
        }
    };
    Ok(Generated { instance, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::InstanceKind;

    #[test]
    fn kxor_contract() {
        assert_eq!(random_kxor(3, 3, 1, 0).unwrap().m(), 1);
        let inst = random_kxor(100, 3, 6, 1).unwrap();
        assert!(inst.max_degree() <= 6);
        assert!(inst.validate().is_ok());
        assert_eq!(inst.kind(), InstanceKind::KXor(3));
        assert!(inst.m() >= 190);
        assert!(random_kxor(2, 3, 1, 0).is_err());
        assert!(random_kxor(3, 3, 0, 0).is_err());
    }

    #[test]
    fn deterministic() {
        let a = random_kxor(50, 3, 4, 9).unwrap();
        let b = random_kxor(50, 3, 4, 9).unwrap();
        assert_eq!(a, b);
        let c = random_kxor(50, 3, 4, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn packing_is_triangle_free() {
        for seed in 0..20 {
            let p = triangle_free_random(200, 3, 4, seed, &MixPredicate::DEFAULT_MIX).unwrap();
            assert!(p.instance.check_triangle_free().is_ok());
            assert!(p.instance.validate_for_trifree().is_ok());
            assert!(p.instance.max_degree() <= 4);
        }
    }

    #[test]
    fn matching_when_degree_one() {
        let p = triangle_free_random(60, 3, 1, 2, &MixPredicate::DEFAULT_MIX).unwrap();
        assert!(p.instance.degrees().iter().all(|&d| d <= 1));
    }

    #[test]
    fn fixed_gadgets() {
        assert_eq!(complete_graph_maxcut(10).m(), 45);
        let g = grid_2sat(3);
        assert_eq!((g.n(), g.m()), (9, 18));
        assert!(g.degrees().iter().all(|&d| d == 4));
        assert_eq!(g.mu(), 0.75);
        let nae = nae_ae_gadget();
        assert_eq!((nae.n(), nae.m()), (6, 8));
        assert_eq!(nae.mu(), 0.5);
        assert!(nae.validate().is_ok());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in GenKind::ALL {
            assert_eq!(k.name().parse::<GenKind>().unwrap(), k);
        }
        assert!("bogus".parse::<GenKind>().is_err());
    }
}
