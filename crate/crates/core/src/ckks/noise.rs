//! Error budgets asserted by tests and the selftest. These are configured
//! defaults checked against measurements at the desk parameters, not the
//! output of a noise analysis.

/// Fresh encryption: max slot error relative to ‖m‖∞.
pub const FRESH_RELATIVE: f64 = 1.0 / (1u64 << 20) as f64;

/// HAdd / PAdd: two fresh noises.
pub const ADDITIVE_RELATIVE: f64 = 2.0 * FRESH_RELATIVE;

/// HMult + HRescale and PMult + HRescale.
pub const MULTIPLICATIVE_RELATIVE: f64 = 1.0 / (1u64 << 12) as f64;

/// One HRot (key switching adds roughly N·σ·q/P on top of the fresh noise).
pub const ROTATION_RELATIVE: f64 = 1.0 / (1u64 << 16) as f64;

/// Max abs slot error of one baseline H-(I)DFT pass on messages with
/// ‖m‖∞ ≤ 1 at the desk parameters.
pub const HDFT_ABSOLUTE: f64 = 1.0 / (1u64 << 20) as f64;

/// Max abs slot error of mod-raise → H-IDFT → reference EvalMod → H-DFT.
pub const BOOTSTRAP_ABSOLUTE: f64 = 1.0 / (1u64 << 14) as f64;

/// Max abs slot error over two vectors.
pub fn max_abs_error(got: &[num_complex::Complex64], want: &[num_complex::Complex64]) -> f64 {
    got.iter().zip(want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// ‖v‖∞ over complex slots.
pub fn max_norm(v: &[num_complex::Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
