use crate::error::{Error, Result};
use crate::zq::prime::is_prime;

/// Word-sized prime with precomputed Barrett and Montgomery constants.
///
/// Two reductions are kept on purpose. Montgomery is used inside the NTT and
/// base-conversion kernels where one operand is a precomputed constant;
/// Barrett serves everything else. Both return fully reduced residues, so the
/// choice never leaks out of this type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    q: u64,
    bits: u32,
    /// floor(2^128 / q)
    barrett: u128,
    /// -q^{-1} mod 2^64
    mont_neg_inv: u64,
    /// 2^128 mod q, used to enter the Montgomery domain
    mont_r2: u64,
}

/// Which reduction backs a modular multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Barrett,
    Montgomery,
}

pub const MAX_MODULUS_BITS: u32 = 60;

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || !is_prime(q) {
            return Err(Error::Config(format!("{q} is not an odd prime")));
        }
        let bits = 64 - q.leading_zeros();
        if bits > MAX_MODULUS_BITS {
            return Err(Error::Config(format!(
                "modulus {q} has {bits} bits, at most {MAX_MODULUS_BITS} are supported"
            )));
        }
        // q is odd, so it never divides 2^128 and floor((2^128 - 1)/q) = floor(2^128/q).
        let barrett = u128::MAX / q as u128;
        let mont_r2 = ((u128::MAX % q as u128 + 1) % q as u128) as u64;

        // Newton iteration for q^{-1} mod 2^64; each step doubles the correct bits.
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(q.wrapping_mul(inv)));
        }
        debug_assert_eq!(q.wrapping_mul(inv), 1);

        Ok(PrimeModulus {
            q,
            bits,
            barrett,
            mont_neg_inv: inv.wrapping_neg(),
            mont_r2,
        })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// True when the prime supports a negacyclic NTT of length `degree`.
    pub fn supports_degree(&self, degree: usize) -> bool {
        (self.q - 1).is_multiple_of(2 * degree as u64)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    /// Barrett reduction of an arbitrary 128-bit value.
    #[inline]
    pub fn reduce_u128(&self, x: u128) -> u64 {
        let x1 = (x >> 64) as u64 as u128;
        let x0 = x as u64 as u128;
        let m1 = (self.barrett >> 64) as u64 as u128;
        let m0 = self.barrett as u64 as u128;
        // Approximates floor(x * barrett / 2^128) from below by at most 3.
        let qhat = x1 * m1 + ((x1 * m0) >> 64) + ((x0 * m1) >> 64);
        let mut r = x.wrapping_sub(qhat.wrapping_mul(self.q as u128)) as u64;
        while r >= self.q {
            r -= self.q;
        }
        r
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if x < self.q {
            x
        } else {
            x % self.q
        }
    }

    /// (a * b) mod q via Barrett reduction.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        self.reduce_u128(a as u128 * b as u128)
    }

    /// Montgomery reduction: t * 2^-64 mod q for t < q * 2^64.
    #[inline]
    pub(crate) fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.mont_neg_inv);
        let u = ((t + m as u128 * self.q as u128) >> 64) as u64;
        if u >= self.q {
            u - self.q
        } else {
            u
        }
    }

    /// a * 2^64 mod q
    #[inline]
    pub fn to_montgomery(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.mont_r2 as u128)
    }

    /// Multiply a plain residue by a constant already in Montgomery form; the
    /// result is a plain residue.
    #[inline]
    pub fn mul_by_montgomery(&self, a: u64, b_mont: u64) -> u64 {
        self.redc(a as u128 * b_mont as u128)
    }

    /// (a * b) mod q via Montgomery reduction.
    #[inline]
    pub fn mul_montgomery(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        self.mul_by_montgomery(a, self.to_montgomery(b))
    }

    #[inline]
    pub fn mul_with(&self, a: u64, b: u64, reduction: Reduction) -> u64 {
        match reduction {
            Reduction::Barrett => self.mul(a, b),
            Reduction::Montgomery => self.mul_montgomery(a, b),
        }
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.q;
        let mut b = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Inverse via Fermat. Panics on zero, which has no inverse.
    pub fn inv(&self, a: u64) -> u64 {
        let a = self.reduce(a);
        assert!(a != 0, "zero has no inverse modulo {}", self.q);
        self.pow(a, self.q - 2)
    }

    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        let r = (x as i128).rem_euclid(self.q as i128);
        r as u64
    }

    #[inline]
    pub fn from_i128(&self, x: i128) -> u64 {
        if x >= 0 {
            self.reduce_u128(x as u128)
        } else {
            self.neg(self.reduce_u128(x.unsigned_abs()))
        }
    }

    /// Centered representative in (-q/2, q/2].
    #[inline]
    pub fn centered(&self, a: u64) -> i64 {
        debug_assert!(a < self.q);
        if a > self.q / 2 {
            a as i64 - self.q as i64
        } else {
            a as i64
        }
    }
}

/// (a + b) mod q
#[inline]
pub fn mod_add(a: u64, b: u64, q: &PrimeModulus) -> u64 {
    q.add(a, b)
}

/// (a * b) mod q, Barrett by default.
#[inline]
pub fn mod_mul(a: u64, b: u64, q: &PrimeModulus) -> u64 {
    q.mul(a, b)
}
