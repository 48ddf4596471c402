//! Name-based dispatch over every solver.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::advrand::{solve_kxor, KxorParams};
use crate::csp::{Assignment, Instance};
use crate::error::Result;
use crate::oracle::brute_force_opt;
use crate::report::{elapsed_millis, SolveReport};
use crate::trifree::solve_triangle_free;
use crate::xor3::{solve_3xor, solve_3xor_derandomized, Xor3Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Xor3,
    Xor3Derand,
    Advrand,
    Trifree,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Xor3, Algorithm::Xor3Derand, Algorithm::Advrand, Algorithm::Trifree, Algorithm::Brute];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Xor3 => "xor3",
            Algorithm::Xor3Derand => "xor3-derand",
            Algorithm::Advrand => "advrand",
            Algorithm::Trifree => "trifree",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| format!("unknown algorithm '{s}'"))
    }
}

/// Optional budget overrides; `None` keeps each solver's default.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveOptions {
    /// z-trial budget for xor3.
    pub trials: Option<usize>,
    /// advrand target scale in units of `√(m/D)`.
    pub t_scale: Option<f64>,
    /// Repetition budget for advrand and trifree.
    pub reps: Option<usize>,
}

pub fn solve(inst: &Instance, alg: Algorithm, seed: u64, opts: &SolveOptions) -> Result<(Assignment, SolveReport)> {
    match alg {
        Algorithm::Xor3 => solve_3xor(inst, seed, &Xor3Params { trials: opts.trials, ..Xor3Params::default() }),
        Algorithm::Xor3Derand => solve_3xor_derandomized(inst),
        Algorithm::Advrand => solve_kxor(inst, seed, &KxorParams { t_scale: opts.t_scale, reps: opts.reps }),
        Algorithm::Trifree => solve_triangle_free(inst, seed, opts.reps),
        Algorithm::Brute => {
            let start = Instant::now();
            let (_, x) = brute_force_opt(inst)?;
            let mut report = SolveReport::new("brute", inst, &x, None)?;
            report.millis = elapsed_millis(start);
            Ok((x, report))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("xor4".parse::<Algorithm>().is_err());
    }
}
