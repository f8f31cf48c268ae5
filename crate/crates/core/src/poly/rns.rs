use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::LimbBasis;
use crate::zq::{Limb, PrimeModulus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Representation {
    Coefficient,
    Evaluation,
}

/// Polynomial mod X^N + 1 held as one residue vector per basis prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RnsPoly {
    basis: LimbBasis,
    limbs: Vec<Vec<u64>>,
    repr: Representation,
}

impl RnsPoly {
    pub fn zero(basis: &LimbBasis, repr: Representation) -> Self {
        let n = basis.degree();
        RnsPoly {
            basis: basis.clone(),
            limbs: vec![vec![0; n]; basis.len()],
            repr,
        }
    }

    pub fn from_limbs(basis: &LimbBasis, limbs: Vec<Vec<u64>>, repr: Representation) -> Result<Self> {
        if limbs.len() != basis.len() {
            return Err(Error::BasisMismatch(format!(
                "{} limbs for a basis of {} primes",
                limbs.len(),
                basis.len()
            )));
        }
        for (i, (l, m)) in limbs.iter().zip(basis.moduli()).enumerate() {
            if l.len() != basis.degree() {
                return Err(Error::Config(format!(
                    "limb {i} has length {}, expected {}",
                    l.len(),
                    basis.degree()
                )));
            }
            if l.iter().any(|&v| v >= m.value()) {
                return Err(Error::Range(format!("limb {i} holds an unreduced residue")));
            }
        }
        Ok(RnsPoly {
            basis: basis.clone(),
            limbs,
            repr,
        })
    }

    /// Coefficient-representation polynomial from small signed integers.
    pub fn from_signed(basis: &LimbBasis, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != basis.degree() {
            return Err(Error::Config(format!(
                "{} coefficients for ring degree {}",
                coeffs.len(),
                basis.degree()
            )));
        }
        let limbs = basis
            .moduli()
            .map(|m| coeffs.iter().map(|&c| m.from_i64(c)).collect())
            .collect();
        Ok(RnsPoly {
            basis: basis.clone(),
            limbs,
            repr: Representation::Coefficient,
        })
    }

    /// Like [`RnsPoly::from_signed`] for 128-bit coefficients.
    pub fn from_signed_wide(basis: &LimbBasis, coeffs: &[i128]) -> Result<Self> {
        if coeffs.len() != basis.degree() {
            return Err(Error::Config(format!(
                "{} coefficients for ring degree {}",
                coeffs.len(),
                basis.degree()
            )));
        }
        let limbs = basis
            .moduli()
            .map(|m| coeffs.iter().map(|&c| m.from_i128(c)).collect())
            .collect();
        Ok(RnsPoly {
            basis: basis.clone(),
            limbs,
            repr: Representation::Coefficient,
        })
    }

    pub fn basis(&self) -> &LimbBasis {
        &self.basis
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn num_limbs(&self) -> usize {
        self.limbs.len()
    }

    pub fn limb(&self, i: usize) -> &[u64] {
        &self.limbs[i]
    }

    pub fn limb_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.limbs[i]
    }

    pub fn limbs(&self) -> &[Vec<u64>] {
        &self.limbs
    }

    pub fn to_limb(&self, i: usize) -> Limb {
        Limb {
            values: self.limbs[i].clone(),
            modulus: *self.basis.modulus(i),
        }
    }

    pub fn into_limbs(self) -> Vec<Vec<u64>> {
        self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|l| l.iter().all(|&v| v == 0))
    }

    pub fn to_evaluation(&mut self) {
        if self.repr == Representation::Coefficient {
            let tables = self.basis.tables();
            self.limbs
                .par_iter_mut()
                .zip(tables.par_iter())
                .for_each(|(l, t)| t.forward_inplace(l));
            self.repr = Representation::Evaluation;
        }
    }

    pub fn to_coefficient(&mut self) {
        if self.repr == Representation::Evaluation {
            let tables = self.basis.tables();
            self.limbs
                .par_iter_mut()
                .zip(tables.par_iter())
                .for_each(|(l, t)| t.inverse_inplace(l));
            self.repr = Representation::Coefficient;
        }
    }

    pub fn evaluated(mut self) -> Self {
        self.to_evaluation();
        self
    }

    pub fn coefficients(mut self) -> Self {
        self.to_coefficient();
        self
    }

    /// Keep only the first `len` limbs.
    pub fn truncate(&mut self, len: usize) {
        self.limbs.truncate(len);
        self.basis = self.basis.prefix(len);
    }

    pub fn truncated(&self, len: usize) -> Self {
        RnsPoly {
            basis: self.basis.prefix(len),
            limbs: self.limbs[..len].to_vec(),
            repr: self.repr,
        }
    }

    /// Copy out the limbs belonging to `sub`, which must be a subset of this basis.
    pub fn restrict(&self, sub: &LimbBasis) -> Result<Self> {
        let limbs = sub
            .moduli()
            .map(|m| {
                self.basis
                    .position(m.value())
                    .map(|i| self.limbs[i].clone())
                    .ok_or_else(|| Error::BasisMismatch(format!("prime {} not in source basis", m.value())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RnsPoly {
            basis: sub.clone(),
            limbs,
            repr: self.repr,
        })
    }

    fn check_compatible(&self, other: &RnsPoly) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(format!(
                "{:?} vs {:?}",
                self.basis.primes(),
                other.basis.primes()
            )));
        }
        if self.repr != other.repr {
            return Err(Error::Representation {
                expected: self.repr,
                found: other.repr,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &RnsPoly, f: impl Fn(&PrimeModulus, u64, u64) -> u64 + Sync) -> RnsPoly {
        let limbs = self
            .limbs
            .par_iter()
            .zip(other.limbs.par_iter())
            .zip(self.basis.tables().par_iter())
            .map(|((a, b), t)| {
                let m = t.modulus();
                a.iter().zip(b).map(|(&x, &y)| f(m, x, y)).collect()
            })
            .collect();
        RnsPoly {
            basis: self.basis.clone(),
            limbs,
            repr: self.repr,
        }
    }

    fn zip_assign(&mut self, other: &RnsPoly, f: impl Fn(&PrimeModulus, u64, u64) -> u64 + Sync) {
        let tables = self.basis.tables();
        self.limbs
            .par_iter_mut()
            .zip(other.limbs.par_iter())
            .zip(tables.par_iter())
            .for_each(|((a, b), t)| {
                let m = t.modulus();
                for (x, &y) in a.iter_mut().zip(b) {
                    *x = f(m, *x, y);
                }
            });
    }

    pub fn add(&self, other: &RnsPoly) -> Result<RnsPoly> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |m, x, y| m.add(x, y)))
    }

    pub fn sub(&self, other: &RnsPoly) -> Result<RnsPoly> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |m, x, y| m.sub(x, y)))
    }

    pub fn mul(&self, other: &RnsPoly) -> Result<RnsPoly> {
        self.check_compatible(other)?;
        self.require(Representation::Evaluation)?;
        Ok(self.zip_with(other, |m, x, y| m.mul(x, y)))
    }

    pub fn add_assign(&mut self, other: &RnsPoly) -> Result<()> {
        self.check_compatible(other)?;
        self.zip_assign(other, |m, x, y| m.add(x, y));
        Ok(())
    }

    pub fn sub_assign(&mut self, other: &RnsPoly) -> Result<()> {
        self.check_compatible(other)?;
        self.zip_assign(other, |m, x, y| m.sub(x, y));
        Ok(())
    }

    pub fn mul_assign(&mut self, other: &RnsPoly) -> Result<()> {
        self.check_compatible(other)?;
        self.require(Representation::Evaluation)?;
        self.zip_assign(other, |m, x, y| m.mul(x, y));
        Ok(())
    }

    /// self += a * b, all in evaluation representation.
    pub fn fma_assign(&mut self, a: &RnsPoly, b: &RnsPoly) -> Result<()> {
        self.check_compatible(a)?;
        self.check_compatible(b)?;
        self.require(Representation::Evaluation)?;
        let tables = self.basis.tables();
        self.limbs
            .par_iter_mut()
            .zip(a.limbs.par_iter().zip(b.limbs.par_iter()))
            .zip(tables.par_iter())
            .for_each(|((acc, (x, y)), t)| {
                let m = t.modulus();
                for ((s, &u), &v) in acc.iter_mut().zip(x).zip(y) {
                    *s = m.add(*s, m.mul(u, v));
                }
            });
        Ok(())
    }

    pub fn neg(&self) -> RnsPoly {
        let limbs = self
            .limbs
            .iter()
            .zip(self.basis.moduli())
            .map(|(l, m)| l.iter().map(|&x| m.neg(x)).collect())
            .collect();
        RnsPoly {
            basis: self.basis.clone(),
            limbs,
            repr: self.repr,
        }
    }

    /// Multiply by one integer, reduced independently per prime.
    pub fn scalar_mul(&self, c: u64) -> RnsPoly {
        let per_limb: Vec<u64> = self.basis.moduli().map(|m| m.reduce(c)).collect();
        self.scalar_mul_per_limb(&per_limb)
    }

    /// Multiply limb i by `scalars[i]` (already reduced mod q_i).
    pub fn scalar_mul_per_limb(&self, scalars: &[u64]) -> RnsPoly {
        assert_eq!(scalars.len(), self.limbs.len());
        let limbs = self
            .limbs
            .par_iter()
            .zip(self.basis.tables().par_iter())
            .zip(scalars.par_iter())
            .map(|((l, t), &c)| {
                let m = t.modulus();
                let cm = m.to_montgomery(c);
                l.iter().map(|&x| m.mul_by_montgomery(x, cm)).collect()
            })
            .collect();
        RnsPoly {
            basis: self.basis.clone(),
            limbs,
            repr: self.repr,
        }
    }

    pub fn require(&self, repr: Representation) -> Result<()> {
        if self.repr != repr {
            return Err(Error::Representation {
                expected: repr,
                found: self.repr,
            });
        }
        Ok(())
    }
}

/// Limb-wise operators on RNS polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementwiseOp {
    Add,
    Sub,
    Mul,
}

pub fn elementwise(op: ElementwiseOp, a: &RnsPoly, b: &RnsPoly) -> Result<RnsPoly> {
    match op {
        ElementwiseOp::Add => a.add(b),
        ElementwiseOp::Sub => a.sub(b),
        ElementwiseOp::Mul => a.mul(b),
    }
}
