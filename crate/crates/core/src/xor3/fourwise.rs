//! A 4-wise independent sample space of size `4^q < 4(n+1)²`.
//!
//! Coordinate `i` is labelled by the nonzero field element `p_i = i + 1` of
//! `GF(2^q)` and gets the column `c_i = (p_i, p_i³) ∈ GF(2)^{2q}`. Any four
//! distinct columns are linearly independent (they are parity-check columns of
//! a double-error-correcting BCH code), so for a uniform `s ∈ GF(2)^{2q}` the
//! bits `x_i = (-1)^{⟨s, c_i⟩}` are 4-wise independent and uniform.

/// Irreducible polynomials over GF(2), indexed by degree.
const IRREDUCIBLE: [u32; 17] = [
    0, 0b11, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10000011, 0x11B, 0x211, 0x409, 0x805, 0x1053, 0x201B,
    0x4443, 0x8003, 0x1100B,
];

/// Largest supported field degree; the space then has `2^32` points.
pub const MAX_FIELD_DEGREE: u32 = 16;

pub(crate) fn irreducible(q: u32) -> u32 {
    IRREDUCIBLE[q as usize]
}

/// Product in `GF(2)[t] / poly`, with `deg poly = q`.
pub(crate) fn gf_mul(mut a: u32, mut b: u32, q: u32, poly: u32) -> u32 {
    let mut r = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> q & 1 == 1 {
            a ^= poly;
        }
    }
    r
}

#[derive(Clone, Debug)]
pub struct FourwiseSpace {
    n: usize,
    q: u32,
    columns: Vec<u64>,
}

impl FourwiseSpace {
    /// `None` when `n` needs a field larger than `GF(2^16)`.
    pub fn new(n: usize) -> Option<Self> {
        let mut q = 1;
        while (1usize << q) < n + 1 {
            q += 1;
        }
        if q > MAX_FIELD_DEGREE {
            return None;
        }
        let poly = irreducible(q);
        let columns = (1..=n as u32)
            .map(|p| {
                let cube = gf_mul(gf_mul(p, p, q, poly), p, q, poly);
                p as u64 | (cube as u64) << q
            })
            .collect();
        Some(FourwiseSpace { n, q, columns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field_degree(&self) -> u32 {
        self.q
    }

    /// Number of points, `4^q`.
    pub fn len(&self) -> u64 {
        1u64 << (2 * self.q)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Writes point `s` into `out`.
    pub fn fill(&self, s: u64, out: &mut [i8]) {
        for (x, &c) in out.iter_mut().zip(&self.columns) {
            *x = if (s & c).count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }

    pub fn point(&self, s: u64) -> Vec<i8> {
        let mut out = vec![0; self.n];
        self.fill(s, &mut out);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<i8>> + '_ {
        (0..self.len()).map(move |s| self.point(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_mod(mut a: u64, b: u64) -> u64 {
        let db = 63 - b.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= db {
            a ^= b << (63 - a.leading_zeros() - db);
        }
        a
    }

    #[test]
    fn table_is_irreducible() {
        for q in 1..=MAX_FIELD_DEGREE {
            let p = irreducible(q) as u64;
            assert_eq!(63 - p.leading_zeros(), q);
            // No factor of degree 1..=q/2.
            for f in 2u64..(1 << (q / 2 + 1)) {
                assert_ne!(poly_mod(p, f), 0, "q={q} divisible by {f:b}");
            }
        }
    }

    #[test]
    fn field_inverse_exists() {
        let (q, poly) = (5, irreducible(5));
        for a in 1..32 {
            assert!((1..32).any(|b| gf_mul(a, b, q, poly) == 1));
        }
    }

    #[test]
    fn sizes() {
        for n in 1..300 {
            let s = FourwiseSpace::new(n).unwrap();
            assert!(s.len() < 4 * ((n + 1) * (n + 1)) as u64);
        }
        assert!(FourwiseSpace::new(1 << 16).is_none());
    }

    #[test]
    fn four_moments_vanish_small() {
        let space = FourwiseSpace::new(6).unwrap();
        let pts: Vec<Vec<i8>> = space.iter().collect();
        for mask in 1u32..64 {
            if mask.count_ones() > 4 {
                continue;
            }
            let sum: i64 = pts
                .iter()
                .map(|x| (0..6).filter(|t| mask >> t & 1 == 1).map(|t| x[t] as i64).product::<i64>())
                .sum();
            assert_eq!(sum, 0, "mask {mask:b}");
        }
    }
}
