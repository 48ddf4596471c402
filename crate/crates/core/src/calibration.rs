//! Constants fixed by desk-scale calibration runs (`cspadv bench`). Bump
//! [`VERSION`] whenever a value changes.

pub const VERSION: u32 = 1;

/// Divisor in the Max-3XOR greedy target `Σ_i √deg(i) / (c₀ m)`.
pub const XOR3_TARGET_DIVISOR: f64 = 12.0;

/// The universal constant `C` in the influence precondition
/// `Inf_i[g] ≤ C^{-k} t^{-2}`.
pub const INFLUENCE_C: f64 = 100.0;

/// `c_k` in the AdvRand target `t = c_k √(m/D)`, indexed by `k`.
pub const ADVRAND_C: [f64; 9] = [0.0, 1.0, 0.25, 0.25, 0.2, 0.2, 0.15, 0.15, 0.1];

pub fn advrand_c(k: usize) -> f64 {
    ADVRAND_C[k.min(ADVRAND_C.len() - 1)]
}
