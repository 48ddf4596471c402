use std::fmt;

use crate::fourier::{walsh_coefficients, MultilinearPoly};

use super::CspError;

/// Largest supported constraint arity.
pub const MAX_ARITY: usize = 8;

/// A Boolean predicate `P : {±1}^r → {0,1}` stored as a `2^r`-row truth
/// table. Row `b` has bit `t` set iff input `t` is `+1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    arity: u8,
    table: Vec<bool>,
}

/// Maps a ±1 value to its truth-table bit.
#[inline]
pub fn bit_of(v: i8) -> usize {
    (v > 0) as usize
}

impl Predicate {
    pub fn from_table(table: Vec<bool>) -> Result<Self, CspError> {
        let len = table.len();
        if len < 2 || !len.is_power_of_two() || len > 1 << MAX_ARITY {
            return Err(CspError::BadTable { len });
        }
        Ok(Predicate { arity: len.trailing_zeros() as u8, table })
    }

    /// Builds the table by evaluating `f` on every ±1 input.
    pub fn from_fn(arity: usize, f: impl Fn(&[i8]) -> bool) -> Result<Self, CspError> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(CspError::BadArity(arity));
        }
        let mut input = vec![0i8; arity];
        let table = (0..1usize << arity)
            .map(|row| {
                for (t, v) in input.iter_mut().enumerate() {
                    *v = if row >> t & 1 == 1 { 1 } else { -1 };
                }
                f(&input)
            })
            .collect();
        Self::from_table(table)
    }

    /// Satisfied iff `∏ x_t = sign`.
    pub fn parity(arity: usize, sign: i8) -> Result<Self, CspError> {
        Self::from_fn(arity, |x| x.iter().product::<i8>() == sign.signum())
    }

    /// OR, with `+1` read as true.
    pub fn or(arity: usize) -> Result<Self, CspError> {
        Self::from_fn(arity, |x| x.iter().any(|&v| v > 0))
    }

    pub fn and(arity: usize) -> Result<Self, CspError> {
        Self::from_fn(arity, |x| x.iter().all(|&v| v > 0))
    }

    /// OR of negated literals.
    pub fn nand(arity: usize) -> Result<Self, CspError> {
        Self::from_fn(arity, |x| x.iter().any(|&v| v < 0))
    }

    pub fn not_all_equal(arity: usize) -> Result<Self, CspError> {
        Self::from_fn(arity, |x| x.iter().any(|&v| v != x[0]))
    }

    pub fn all_equal(arity: usize) -> Result<Self, CspError> {
        Self::from_fn(arity, |x| x.iter().all(|&v| v == x[0]))
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    #[inline]
    pub fn accepts_row(&self, row: usize) -> bool {
        self.table[row]
    }

    pub fn accepts(&self, x: &[i8]) -> bool {
        let row = x.iter().enumerate().fold(0usize, |acc, (t, &v)| acc | bit_of(v) << t);
        self.table[row]
    }

    /// Number of satisfying rows.
    pub fn popcount(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    /// Probability a uniform input satisfies the predicate.
    pub fn density(&self) -> f64 {
        self.popcount() as f64 / self.table.len() as f64
    }

    /// `Some(b)` if the predicate is `∏ x_t = b` for its full arity.
    pub fn parity_sign(&self) -> Option<i8> {
        [1i8, -1].into_iter().find(|&s| {
            self.table.iter().enumerate().all(|(row, &v)| {
                let minus = self.arity as u32 - (row as u32).count_ones();
                let prod = if minus % 2 == 0 { 1 } else { -1 };
                v == (prod == s)
            })
        })
    }

    /// Whether flipping input `coord` changes the output on some row.
    pub fn is_sensitive_to(&self, coord: usize) -> bool {
        let mask = 1usize << coord;
        (0..self.table.len()).filter(|row| row & mask == 0).any(|row| self.table[row] != self.table[row | mask])
    }

    pub fn depends_on_all(&self) -> bool {
        (0..self.arity()).all(|c| self.is_sensitive_to(c))
    }

    /// Fourier expansion over local variables `0..arity`.
    pub fn polynomial(&self) -> MultilinearPoly {
        MultilinearPoly::from_truth_table(&self.table).expect("table length validated at construction")
    }

    /// Unnormalized integer Walsh coefficients (divide by `2^arity`).
    pub fn walsh(&self) -> Vec<i64> {
        walsh_coefficients(&self.table).expect("table length validated at construction")
    }

    pub fn complement(&self) -> Predicate {
        Predicate { arity: self.arity, table: self.table.iter().map(|b| !b).collect() }
    }

    /// Hex digits of `Σ_b table[b]·2^b`, most significant digit first,
    /// padded to `⌈2^r / 4⌉` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.table.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4).fold(0u32, |acc, t| {
                    let row = 4 * d + t;
                    acc | ((row < self.table.len() && self.table[row]) as u32) << t
                });
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(arity: usize, hex: &str) -> Result<Self, CspError> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(CspError::BadArity(arity));
        }
        let rows = 1usize << arity;
        let digits = rows.div_ceil(4);
        let bad = || CspError::BadHex { arity, text: hex.to_string() };
        if hex.len() != digits {
            return Err(bad());
        }
        let mut table = vec![false; rows];
        for (d, ch) in hex.chars().rev().enumerate() {
            let nibble = ch.to_digit(16).ok_or_else(bad)?;
            for t in 0..4 {
                let row = 4 * d + t;
                let set = nibble >> t & 1 == 1;
                if row < rows {
                    table[row] = set;
                } else if set {
                    return Err(bad());
                }
            }
        }
        Self::from_table(table)
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate(r={}, 0x{})", self.arity, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_convention() {
        // OR2 fails only on row 0 (both inputs -1).
        let or = Predicate::or(2).unwrap();
        assert_eq!(or.to_hex(), "e");
        assert_eq!(Predicate::from_hex(2, "E").unwrap(), or);
        // 3XOR with b=+1 accepts rows with an even number of -1s: 1, 2, 4, 7.
        let xor = Predicate::parity(3, 1).unwrap();
        assert_eq!(xor.to_hex(), "96");
        assert_eq!(Predicate::parity(3, -1).unwrap().to_hex(), "69");
        // Arity 1: two rows in one digit; high bits must be clear.
        assert_eq!(Predicate::from_hex(1, "2").unwrap().table(), &[false, true]);
        assert!(Predicate::from_hex(1, "4").is_err());
        assert!(Predicate::from_hex(3, "9").is_err());
        assert!(Predicate::from_hex(2, "g").is_err());
    }

    #[test]
    fn parity_detection() {
        assert_eq!(Predicate::parity(4, -1).unwrap().parity_sign(), Some(-1));
        assert_eq!(Predicate::parity(2, 1).unwrap().parity_sign(), Some(1));
        assert_eq!(Predicate::or(2).unwrap().parity_sign(), None);
        assert_eq!(Predicate::all_equal(2).unwrap(), Predicate::parity(2, 1).unwrap());
    }

    #[test]
    fn sensitivity() {
        assert!(Predicate::not_all_equal(3).unwrap().depends_on_all());
        // Ignores input 1.
        let p = Predicate::from_fn(2, |x| x[0] > 0).unwrap();
        assert!(p.is_sensitive_to(0));
        assert!(!p.is_sensitive_to(1));
        assert!(!p.depends_on_all());
    }

    #[test]
    fn densities() {
        assert_eq!(Predicate::not_all_equal(3).unwrap().popcount(), 6);
        assert_eq!(Predicate::all_equal(3).unwrap().popcount(), 2);
        assert_eq!(Predicate::or(2).unwrap().density(), 0.75);
        assert_eq!(Predicate::and(2).unwrap().density(), 0.25);
        assert!(Predicate::from_fn(9, |_| true).is_err());
    }
}
