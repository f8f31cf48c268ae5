//! Plaintexts stored as their q_0 limb only.
//!
//! When every integer coefficient c of a plaintext satisfies |c| < q_0/2, the
//! centered residue mod q_0 is c itself, so any other limb is recovered by
//! reducing that value mod q_i and transforming.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ckks::{CkksContext, Plaintext};
use crate::error::{Error, Result};
use crate::poly::{Representation, RnsPoly};
use crate::serial::{Header, ObjectKind, Reader, Writer};
use crate::zq::Limb;

#[derive(Clone, Debug, PartialEq)]
pub struct PlaintextSeed {
    /// q_0 residues in coefficient form
    pub q0_limb: Limb,
    pub scale: f64,
    /// caller-chosen identifier
    pub tag: u64,
}

impl PlaintextSeed {
    /// Seed from signed coefficients; each must satisfy |c| < q_0/2.
    pub fn from_signed(ctx: &CkksContext, coeffs: &[i64], scale: f64, tag: u64) -> Result<Self> {
        let m = *ctx.q_basis().modulus(0);
        if coeffs.len() != ctx.degree() {
            return Err(Error::Config("seed length differs from ring degree".into()));
        }
        let q0 = m.value() as i128;
        let mut values = Vec::with_capacity(coeffs.len());
        for (index, &c) in coeffs.iter().enumerate() {
            if 2 * (c as i128).abs() >= q0 {
                return Err(Error::SeedRange {
                    index,
                    value: c as i128,
                });
            }
            values.push(m.from_i64(c));
        }
        Ok(PlaintextSeed {
            q0_limb: Limb::new(values, m)?,
            scale,
            tag,
        })
    }

    /// Encode slot values straight into a seed.
    pub fn encode(ctx: &CkksContext, values: &[Complex64], scale: f64, tag: u64) -> Result<Self> {
        let q0 = ctx.q(0) as f64;
        let coeffs = ctx.encoder().encode_coefficients(values, scale, q0 / 2.0)?;
        Self::from_signed(ctx, &coeffs, scale, tag)
    }

    /// Keep only the q_0 limb of an encoded plaintext. The plaintext must
    /// have been encoded with coefficients below q_0/2, which `encode` enforces.
    pub fn from_plaintext(ctx: &CkksContext, pt: &Plaintext, tag: u64) -> Result<Self> {
        let m = *ctx.q_basis().modulus(0);
        let mut values = pt.poly.limb(0).to_vec();
        if pt.poly.representation() == Representation::Evaluation {
            ctx.q_basis().table(0).inverse_inplace(&mut values);
        }
        Ok(PlaintextSeed {
            q0_limb: Limb::new(values, m)?,
            scale: pt.scale,
            tag,
        })
    }

    pub fn byte_size(&self) -> usize {
        8 * self.q0_limb.values.len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(&Header {
            kind: ObjectKind::PlaintextSeed,
            degree: self.q0_limb.values.len(),
            level: 0,
            primes: vec![self.q0_limb.modulus.value()],
        });
        write_seed_body(&mut w, self);
        w.finish()
    }

    pub fn from_bytes(ctx: &CkksContext, data: &[u8]) -> Result<Self> {
        let (mut r, h) = Reader::open(data, ObjectKind::PlaintextSeed)?;
        if h.degree != ctx.degree() || h.primes != [ctx.q(0)] {
            return Err(Error::Serialization("seed does not match the parameter set".into()));
        }
        let seed = read_seed_body(&mut r, ctx)?;
        r.finish()?;
        Ok(seed)
    }
}

pub(crate) fn write_seed_body(w: &mut Writer, seed: &PlaintextSeed) {
    w.f64(seed.scale);
    w.u64(seed.tag);
    w.words(&seed.q0_limb.values);
}

/// Residues are read unchecked so an out-of-range seed surfaces at extension.
pub(crate) fn read_seed_body(r: &mut Reader, ctx: &CkksContext) -> Result<PlaintextSeed> {
    let scale = r.f64()?;
    let tag = r.u64()?;
    let values = r.words(ctx.degree())?;
    Ok(PlaintextSeed {
        q0_limb: Limb {
            values,
            modulus: *ctx.q_basis().modulus(0),
        },
        scale,
        tag,
    })
}

/// Rebuild the evaluation-form plaintext over q_0 .. q_level from the seed.
/// Limb i is NTT_(q_i)(centered(seed) mod q_i); limb 0 is NTT of the seed.
pub fn of_limb_extend(ctx: &CkksContext, seed: &PlaintextSeed, level: usize) -> Result<Plaintext> {
    if level > ctx.max_level() {
        return Err(Error::InsufficientLevel {
            need: level,
            have: ctx.max_level(),
        });
    }
    let q0 = ctx.q_basis().modulus(0);
    if seed.q0_limb.modulus.value() != q0.value() || seed.q0_limb.values.len() != ctx.degree() {
        return Err(Error::BasisMismatch("seed was made for other parameters".into()));
    }
    if let Some((index, &v)) = seed.q0_limb.values.iter().enumerate().find(|(_, &v)| v >= q0.value()) {
        return Err(Error::SeedRange {
            index,
            value: v as i128,
        });
    }
    let centered: Vec<i64> = seed.q0_limb.values.iter().map(|&v| q0.centered(v)).collect();
    let basis = ctx.level_basis(level);
    let limbs = (0..=level)
        .into_par_iter()
        .map(|i| {
            let mut l: Vec<u64> = if i == 0 {
                seed.q0_limb.values.clone()
            } else {
                let m = basis.modulus(i);
                centered.iter().map(|&c| m.from_i64(c)).collect()
            };
            basis.table(i).forward_inplace(&mut l);
            l
        })
        .collect();
    Ok(Plaintext {
        poly: RnsPoly::from_limbs(&basis, limbs, Representation::Evaluation)?,
        scale: seed.scale,
        level,
    })
}
