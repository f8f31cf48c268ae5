//! Fast base conversion.
//!
//! Given residues x_j of X modulo source primes p_j, the conversion computes
//! Σ_j [x_j · p̂_j⁻¹]_{p_j} · p̂_j mod q_i for each target prime q_i. The sum
//! equals X + k·P for some 0 ≤ k < |source|, P the source product; callers
//! either tolerate that slack (key switching) or go through exact paths.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{LimbBasis, Representation, RnsPoly};

/// Rows of the table processed together in the blocked loop.
pub const BLOCK_ROWS: usize = 6;
/// Coefficients processed together in the blocked loop.
pub const BLOCK_COLS: usize = 1024;

/// The 128-bit accumulator holds this many 120-bit products without overflow.
const MAX_SOURCE_LIMBS: usize = 256;

#[derive(Clone, Debug)]
pub struct BaseTable {
    source: LimbBasis,
    target: LimbBasis,
    /// p̂_j⁻¹ mod p_j
    inverse_factors: Vec<u64>,
    /// (i, j) entry is p̂_j mod q_i
    matrix: Vec<Vec<u64>>,
}

impl BaseTable {
    pub fn new(source: &LimbBasis, target: &LimbBasis) -> Result<Self> {
        if source.is_empty() || source.len() > MAX_SOURCE_LIMBS {
            return Err(Error::Config(format!(
                "base conversion from {} primes is unsupported",
                source.len()
            )));
        }
        if source.degree() != target.degree() {
            return Err(Error::Config("source and target degrees differ".into()));
        }
        let src: Vec<u64> = source.primes();

        let inverse_factors = source
            .moduli()
            .enumerate()
            .map(|(j, pj)| {
                let hat = src
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .fold(1u64, |acc, (_, &pk)| pj.mul(acc, pj.reduce(pk)));
                pj.inv(hat)
            })
            .collect();

        let matrix: Vec<Vec<u64>> = target
            .moduli()
            .map(|qi| {
                (0..src.len())
                    .map(|j| {
                        src.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .fold(1u64, |acc, (_, &pk)| qi.mul(acc, qi.reduce(pk)))
                    })
                    .collect()
            })
            .collect();

        // Independent check against the big product.
        let p = source.product();
        for (qi, row) in target.moduli().zip(&matrix) {
            let q = BigUint::from(qi.value());
            for (&pj, &entry) in src.iter().zip(row) {
                let exact = ((&p / BigUint::from(pj)) % &q).to_u64().unwrap();
                if exact != entry {
                    return Err(Error::Config(format!(
                        "base table entry for p={pj}, q={} disagrees with the big product",
                        qi.value()
                    )));
                }
            }
        }

        Ok(BaseTable {
            source: source.clone(),
            target: target.clone(),
            inverse_factors,
            matrix,
        })
    }

    pub fn source(&self) -> &LimbBasis {
        &self.source
    }

    pub fn target(&self) -> &LimbBasis {
        &self.target
    }

    pub fn inverse_factors(&self) -> &[u64] {
        &self.inverse_factors
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.matrix[i][j]
    }

    fn check(&self, p: &RnsPoly, target: &LimbBasis) -> Result<()> {
        p.require(Representation::Coefficient)?;
        if *p.basis() != self.source {
            return Err(Error::BasisMismatch("polynomial basis is not the table source".into()));
        }
        if *target != self.target {
            return Err(Error::BasisMismatch("requested target is not the table target".into()));
        }
        Ok(())
    }

    /// Step 1: y_j = x_j · p̂_j⁻¹ mod p_j.
    pub fn scale_inputs(&self, p: &RnsPoly) -> Vec<Vec<u64>> {
        p.limbs()
            .par_iter()
            .zip(self.source.tables().par_iter())
            .zip(self.inverse_factors.par_iter())
            .map(|((l, t), &f)| {
                let m = t.modulus();
                let fm = m.to_montgomery(f);
                l.iter().map(|&x| m.mul_by_montgomery(x, fm)).collect()
            })
            .collect()
    }
}

/// Fast base conversion with the blocked step-2 loop.
pub fn base_convert(p: &RnsPoly, target: &LimbBasis, table: &BaseTable) -> Result<RnsPoly> {
    table.check(p, target)?;
    let y = table.scale_inputs(p);
    let n = p.degree();
    let mut out = vec![vec![0u64; n]; target.len()];

    out.par_chunks_mut(BLOCK_ROWS).enumerate().for_each(|(block, rows)| {
        let first = block * BLOCK_ROWS;
        for c0 in (0..n).step_by(BLOCK_COLS) {
            let c1 = (c0 + BLOCK_COLS).min(n);
            for (r, row) in rows.iter_mut().enumerate() {
                let i = first + r;
                let m = target.modulus(i);
                let coeffs = &table.matrix[i];
                for (c, slot) in row[c0..c1].iter_mut().enumerate() {
                    let mut acc: u128 = 0;
                    for (yj, &t) in y.iter().zip(coeffs) {
                        acc += yj[c0 + c] as u128 * t as u128;
                    }
                    *slot = m.reduce_u128(acc);
                }
            }
        }
    });

    RnsPoly::from_limbs(target, out, Representation::Coefficient)
}

/// Straightforward coefficient-major loop with a reduction after every
/// product. Slow; kept to cross-check the blocked kernel.
pub fn base_convert_naive(p: &RnsPoly, target: &LimbBasis, table: &BaseTable) -> Result<RnsPoly> {
    table.check(p, target)?;
    let n = p.degree();
    let mut out = vec![vec![0u64; n]; target.len()];
    for c in 0..n {
        for (j, pj) in table.source.moduli().enumerate() {
            let yj = pj.mul(p.limb(j)[c], table.inverse_factors[j]);
            for (i, qi) in target.moduli().enumerate() {
                let term = qi.mul(qi.reduce(yj), qi.reduce(table.matrix[i][j]));
                out[i][c] = qi.add(out[i][c], term);
            }
        }
    }
    RnsPoly::from_limbs(target, out, Representation::Coefficient)
}

/// INTT, base conversion, NTT: evaluation representation in and out.
pub fn bconv_routine(p: &RnsPoly, target: &LimbBasis, table: &BaseTable) -> Result<RnsPoly> {
    p.require(Representation::Evaluation)?;
    let coeff = p.clone().coefficients();
    Ok(base_convert(&coeff, target, table)?.evaluated())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BasisKind;
    use crate::zq::prime::ntt_primes;

    fn bases(n: usize) -> (LimbBasis, LimbBasis) {
        let src = ntt_primes(50, n, 3, &[]).unwrap();
        let dst = ntt_primes(45, n, 4, &[]).unwrap();
        (
            LimbBasis::from_primes(&src, n, BasisKind::Special).unwrap(),
            LimbBasis::from_primes(&dst, n, BasisKind::Ciphertext).unwrap(),
        )
    }

    #[test]
    fn small_values_survive() {
        let (s, t) = bases(16);
        let table = BaseTable::new(&s, &t).unwrap();
        let mut c = vec![0i64; 16];
        c[3] = 12345;
        let p = RnsPoly::from_signed(&s, &c).unwrap();
        let out = base_convert(&p, &t, &table).unwrap();
        let big_p = s.product();
        for (l, m) in out.limbs().iter().zip(t.moduli()) {
            let pm = (&big_p % m.value()).to_u64().unwrap();
            let hit = (0..3u64).any(|k| l[3] == m.add(12345, m.mul(m.reduce(k), pm)));
            assert!(hit, "coefficient is not 12345 + kP");
            assert!(l.iter().enumerate().all(|(i, &v)| i == 3 || v == 0));
        }
    }

    #[test]
    fn blocked_equals_naive() {
        let (s, t) = bases(2048);
        let table = BaseTable::new(&s, &t).unwrap();
        let limbs = s
            .moduli()
            .map(|m| {
                (0..2048u64)
                    .map(|i| i.wrapping_mul(0x9E3779B97F4A7C15) % m.value())
                    .collect()
            })
            .collect();
        let p = RnsPoly::from_limbs(&s, limbs, Representation::Coefficient).unwrap();
        assert_eq!(
            base_convert(&p, &t, &table).unwrap(),
            base_convert_naive(&p, &t, &table).unwrap()
        );
    }

    #[test]
    fn evaluation_input_rejected() {
        let (s, t) = bases(16);
        let table = BaseTable::new(&s, &t).unwrap();
        let p = RnsPoly::zero(&s, Representation::Evaluation);
        assert!(matches!(
            base_convert(&p, &t, &table),
            Err(Error::Representation { .. })
        ));
        assert!(bconv_routine(&p, &t, &table).unwrap().is_zero());
    }
}
