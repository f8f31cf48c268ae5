//! Deterministic primality and NTT-friendly prime search.

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Miller-Rabin with the first twelve prime bases, which is deterministic for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below 2^bits that are 1 mod 2*degree, skipping
/// anything in `exclude`. Results come out in descending order.
pub fn ntt_primes(bits: u32, degree: usize, count: usize, exclude: &[u64]) -> Result<Vec<u64>> {
    if !(2..=62).contains(&bits) {
        return Err(Error::Config(format!("prime width {bits} out of range")));
    }
    let step = 2 * degree as u64;
    let top = 1u64 << bits;
    // Largest candidate of the form k*step + 1 strictly below 2^bits.
    let mut c = ((top - 2) / step) * step + 1;
    let floor = 1u64 << (bits - 1);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if c < floor || c < step {
            return Err(Error::Config(format!(
                "ran out of {bits}-bit primes congruent to 1 mod {step}"
            )));
        }
        if is_prime(c) && !exclude.contains(&c) {
            out.push(c);
        }
        c -= step;
    }
    Ok(out)
}
