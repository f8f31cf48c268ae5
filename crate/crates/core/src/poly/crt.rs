use num_bigint::{BigInt, BigUint, Sign};
use num_traits::ToPrimitive;

use crate::poly::LimbBasis;
use crate::zq::PrimeModulus;

/// Exact CRT lift from residues to a centered integer in (-Q/2, Q/2].
#[derive(Clone, Debug)]
pub struct CrtReconstructor {
    moduli: Vec<PrimeModulus>,
    product: BigUint,
    half: BigUint,
    /// Q / q_i
    hats: Vec<BigUint>,
    /// (Q / q_i)⁻¹ mod q_i
    hat_inv: Vec<u64>,
}

impl CrtReconstructor {
    pub fn new(basis: &LimbBasis) -> Self {
        let moduli: Vec<PrimeModulus> = basis.moduli().copied().collect();
        let product = basis.product();
        let hats: Vec<BigUint> = moduli.iter().map(|m| &product / m.value()).collect();
        let hat_inv = moduli
            .iter()
            .zip(&hats)
            .map(|(m, h)| m.inv((h % m.value()).to_u64().unwrap()))
            .collect();
        CrtReconstructor {
            half: &product >> 1,
            moduli,
            product,
            hats,
            hat_inv,
        }
    }

    pub fn product(&self) -> &BigUint {
        &self.product
    }

    pub fn reconstruct(&self, residues: impl Fn(usize) -> u64) -> BigInt {
        let mut acc = BigUint::default();
        for (i, (m, hat)) in self.moduli.iter().zip(&self.hats).enumerate() {
            let t = m.mul(residues(i), self.hat_inv[i]);
            acc += hat * t;
        }
        acc %= &self.product;
        if acc > self.half {
            BigInt::from_biguint(Sign::Minus, &self.product - acc)
        } else {
            BigInt::from_biguint(Sign::Plus, acc)
        }
    }

    pub fn reconstruct_f64(&self, residues: impl Fn(usize) -> u64) -> f64 {
        self.reconstruct(residues).to_f64().unwrap_or(f64::NAN)
    }
}
