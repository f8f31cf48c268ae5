//! Slow reference implementations used to check the fast paths. None of
//! these share code with the kernels they check.

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::zq::ntt::bit_reverse;

/// (a·b) mod q through a 128-bit product.
pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 + b as u128) % q as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// a·b mod (X^N + 1, q) by the O(N²) schoolbook product.
pub fn negacyclic_convolution(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            let p = mul_mod(a[i], b[j], q);
            let k = i + j;
            if k < n {
                out[k] = add_mod(out[k], p, q);
            } else {
                out[k - n] = (out[k - n] + q - p) % q;
            }
        }
    }
    out
}

/// Evaluation-order NTT by direct evaluation: slot i is a(ψ^(2·brv(i)+1)).
pub fn direct_ntt(a: &[u64], psi: u64, q: u64) -> Vec<u64> {
    let n = a.len();
    let log_n = n.trailing_zeros();
    (0..n)
        .map(|i| {
            let x = pow_mod(psi, 2 * bit_reverse(i, log_n) as u64 + 1, q);
            let mut acc = 0u64;
            let mut pw = 1u64;
            for &c in a {
                acc = add_mod(acc, mul_mod(c, pw, q), q);
                pw = mul_mod(pw, x, q);
            }
            acc
        })
        .collect()
}

/// Garner-style incremental CRT: the centered integer with the given
/// residues modulo the primes.
pub fn crt_centered(residues: &[u64], primes: &[u64]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let pb = BigInt::from(p);
        // x + m·t ≡ r (mod p)
        let x_mod = (&x % &pb).to_u64().unwrap_or(0);
        let m_mod = (&m % &pb).to_u64().unwrap();
        let diff = (r % p + p - x_mod % p) % p;
        let t = mul_mod(diff, inverse_mod(m_mod, p), p);
        x += &m * BigInt::from(t);
        m *= &pb;
    }
    center(&x, &m)
}

/// Product of the primes.
pub fn product(primes: &[u64]) -> BigInt {
    primes.iter().fold(BigInt::one(), |acc, &p| acc * BigInt::from(p))
}

/// x mod m, centered in (−m/2, m/2].
pub fn center(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

pub fn inverse_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduce a (possibly negative) big integer modulo a word prime.
pub fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// a·b mod (X^N + 1) over the integers, optionally reduced modulo m.
pub fn negacyclic_bigint(a: &[BigInt], b: &[BigInt], m: Option<&BigInt>) -> Vec<BigInt> {
    let n = a.len();
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n {
            let p = &a[i] * &b[j];
            let k = i + j;
            if k < n {
                out[k] += p;
            } else {
                out[k - n] -= p;
            }
        }
    }
    if let Some(m) = m {
        for v in out.iter_mut() {
            *v = center(v, m);
        }
    }
    out
}

/// round(x / d) for big integers, halves away from zero.
pub fn div_round(x: &BigInt, d: &BigInt) -> BigInt {
    let twice = x * 2 + if x.is_negative() { -d } else { d.clone() };
    twice / (d * 2)
}

pub fn max_abs(v: &[BigInt]) -> BigUint {
    v.iter().map(|x| x.magnitude().clone()).max().unwrap_or_default()
}

pub fn bigint_from_signed(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn is_nonnegative(x: &BigInt) -> bool {
    x.sign() != Sign::Minus
}

/// U_(j,t) = exp(2πi · (5^j mod 4n) · t / 4n), the n×n slot matrix.
pub fn slot_matrix(n: usize) -> Vec<Vec<Complex64>> {
    let m = 4 * n as u64;
    let mut five = 1u64;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let row = (0..n as u64)
            .map(|t| {
                let e = (five * t) % m;
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / m as f64)
            })
            .collect();
        rows.push(row);
        five = five * 5 % m;
    }
    rows
}

pub fn mat_vec(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn conjugate_transpose(m: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].conj()).collect()).collect()
}

/// out[brv(i)] = v[i]
pub fn bit_reversed(v: &[Complex64]) -> Vec<Complex64> {
    let log_n = v.len().trailing_zeros();
    let mut out = v.to_vec();
    for (i, &x) in v.iter().enumerate() {
        out[bit_reverse(i, log_n)] = x;
    }
    out
}

/// Slots → bit-reversed packed coefficients: R·U⁻¹·m with U⁻¹ = Uᴴ/n.
pub fn inverse_slot_transform(m: &[Complex64]) -> Vec<Complex64> {
    let n = m.len();
    let uh = conjugate_transpose(&slot_matrix(n));
    let z: Vec<Complex64> = mat_vec(&uh, m).into_iter().map(|x| x / n as f64).collect();
    bit_reversed(&z)
}

/// Bit-reversed packed coefficients → slots: U·R⁻¹·v.
pub fn slot_transform(v: &[Complex64]) -> Vec<Complex64> {
    mat_vec(&slot_matrix(v.len()), &bit_reversed(v))
}

/// Largest |a_ij − b_ij| / max |b_ij| over two dense matrices.
pub fn relative_matrix_error(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    let scale = b.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let err = a
        .iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    err / scale
}
