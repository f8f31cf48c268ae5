use crate::error::{Error, Result};
use crate::zq::{Limb, PrimeModulus};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[inline]
pub fn bit_reverse(x: usize, log_n: u32) -> usize {
    if log_n == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS - log_n)
    }
}

/// Smallest-base primitive 2N-th root of unity found by raising 2, 3, ... to
/// (q-1)/2N. A power-of-two order makes the check a single comparison.
pub fn find_primitive_root(modulus: &PrimeModulus, degree: usize) -> Result<u64> {
    if !degree.is_power_of_two() {
        return Err(Error::Config(format!("degree {degree} is not a power of two")));
    }
    if !modulus.supports_degree(degree) {
        return Err(Error::Config(format!(
            "{} is not 1 mod {}, no negacyclic NTT of length {degree}",
            modulus.value(),
            2 * degree
        )));
    }
    let q = modulus.value();
    let exp = (q - 1) / (2 * degree as u64);
    for x in 2..q {
        let psi = modulus.pow(x, exp);
        if modulus.pow(psi, degree as u64) == q - 1 {
            return Ok(psi);
        }
    }
    unreachable!("a prime field always has a primitive root")
}

/// Precomputed twiddles for the length-N negacyclic transform modulo one prime.
///
/// Forward is Cooley-Tukey over bit-reversed powers of psi: natural-order
/// coefficients in, bit-reversed evaluations out, so output slot i holds
/// a(psi^(2*brv(i)+1)). Inverse is Gentleman-Sande and undoes it exactly, with
/// 1/N folded into its final stage.
#[derive(Clone, Debug)]
pub struct NttTable {
    modulus: PrimeModulus,
    degree: usize,
    log_degree: u32,
    psi: u64,
    psi_rev: Vec<u64>,
    psi_inv_rev: Vec<u64>,
    n_inv: u64,
    last_stage: u64,
}

impl NttTable {
    pub fn new(modulus: PrimeModulus, degree: usize) -> Result<Self> {
        let psi = find_primitive_root(&modulus, degree)?;
        Self::with_root(modulus, degree, psi)
    }

    pub fn with_root(modulus: PrimeModulus, degree: usize, psi: u64) -> Result<Self> {
        if !degree.is_power_of_two() || degree < 2 {
            return Err(Error::Config(format!("degree {degree} is not a power of two ≥ 2")));
        }
        let q = modulus.value();
        if modulus.pow(psi, degree as u64) != q - 1 {
            return Err(Error::Config(format!(
                "{psi} is not a primitive {}-th root modulo {q}",
                2 * degree
            )));
        }
        let log_degree = degree.trailing_zeros();
        let psi_inv = modulus.inv(psi);
        let mut psi_rev = vec![0; degree];
        let mut psi_inv_rev = vec![0; degree];
        let (mut p, mut pi) = (1u64, 1u64);
        for i in 0..degree {
            let r = bit_reverse(i, log_degree);
            psi_rev[r] = modulus.to_montgomery(p);
            psi_inv_rev[r] = modulus.to_montgomery(pi);
            p = modulus.mul(p, psi);
            pi = modulus.mul(pi, psi_inv);
        }
        let n_inv = modulus.inv(degree as u64);
        let last_stage = modulus.to_montgomery(modulus.mul(n_inv, modulus.pow(psi_inv, degree as u64 / 2)));
        Ok(NttTable {
            modulus,
            degree,
            log_degree,
            psi,
            psi_rev,
            psi_inv_rev,
            n_inv: modulus.to_montgomery(n_inv),
            last_stage,
        })
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn psi(&self) -> u64 {
        self.psi
    }

    /// Odd exponent e such that forward output slot i is a(psi^e).
    pub fn evaluation_exponent(&self, i: usize) -> usize {
        2 * bit_reverse(i, self.log_degree) + 1
    }

    pub fn forward_inplace(&self, a: &mut [u64]) {
        assert_eq!(a.len(), self.degree);
        let m = &self.modulus;
        let mut t = self.degree;
        let mut groups = 1;
        while groups < self.degree {
            t >>= 1;
            for i in 0..groups {
                let w = self.psi_rev[groups + i];
                let (lo, hi) = a[2 * i * t..2 * i * t + 2 * t].split_at_mut(t);
                for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                    let u = *x;
                    let v = m.mul_by_montgomery(*y, w);
                    *x = m.add(u, v);
                    *y = m.sub(u, v);
                }
            }
            groups <<= 1;
        }
    }

    pub fn inverse_inplace(&self, a: &mut [u64]) {
        assert_eq!(a.len(), self.degree);
        let m = &self.modulus;
        let mut t = 1;
        let mut groups = self.degree >> 1;
        while groups > 1 {
            for i in 0..groups {
                let w = self.psi_inv_rev[groups + i];
                let (lo, hi) = a[2 * i * t..2 * i * t + 2 * t].split_at_mut(t);
                for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                    let u = *x;
                    let v = *y;
                    *x = m.add(u, v);
                    *y = m.mul_by_montgomery(m.sub(u, v), w);
                }
            }
            t <<= 1;
            groups >>= 1;
        }
        // Last stage with 1/N folded into both outputs.
        let (lo, hi) = a.split_at_mut(t);
        for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
            let u = *x;
            let v = *y;
            *x = m.mul_by_montgomery(m.add(u, v), self.n_inv);
            *y = m.mul_by_montgomery(m.sub(u, v), self.last_stage);
        }
    }

    pub fn transform_inplace(&self, a: &mut [u64], direction: Direction) {
        match direction {
            Direction::Forward => self.forward_inplace(a),
            Direction::Inverse => self.inverse_inplace(a),
        }
    }
}

/// Transform one limb. The limb's modulus and length must match the table.
pub fn ntt(limb: &Limb, table: &NttTable, direction: Direction) -> Result<Limb> {
    if limb.modulus != *table.modulus() || limb.degree() != table.degree() {
        return Err(Error::Config(format!(
            "limb (q={}, N={}) does not match NTT table (q={}, N={})",
            limb.modulus.value(),
            limb.degree(),
            table.modulus().value(),
            table.degree()
        )));
    }
    let mut out = limb.clone();
    table.transform_inplace(&mut out.values, direction);
    Ok(out)
}
