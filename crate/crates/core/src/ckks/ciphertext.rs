use num_complex::Complex64;
use rand::Rng;

use crate::ckks::keys::{sample_gaussian, sample_uniform, SecretKey};
use crate::ckks::CkksContext;
use crate::error::{Error, Result};
use crate::poly::{CrtReconstructor, Representation, RnsPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct Plaintext {
    pub poly: RnsPoly,
    pub scale: f64,
    pub level: usize,
}

/// (b, a) with b + a·s ≈ Δ·m over q_0 .. q_level, evaluation form.
#[derive(Clone, Debug, PartialEq)]
pub struct Ciphertext {
    pub b: RnsPoly,
    pub a: RnsPoly,
    pub level: usize,
    pub scale: f64,
}

impl Ciphertext {
    pub fn new(b: RnsPoly, a: RnsPoly, scale: f64) -> Result<Self> {
        if b.basis() != a.basis() {
            return Err(Error::BasisMismatch("ciphertext halves use different primes".into()));
        }
        b.require(Representation::Evaluation)?;
        a.require(Representation::Evaluation)?;
        let level = b
            .num_limbs()
            .checked_sub(1)
            .ok_or_else(|| Error::Config("empty ciphertext".into()))?;
        Ok(Ciphertext { b, a, level, scale })
    }

    pub fn zero(ctx: &CkksContext, level: usize, scale: f64) -> Self {
        let basis = ctx.level_basis(level);
        let z = RnsPoly::zero(&basis, Representation::Evaluation);
        Ciphertext {
            b: z.clone(),
            a: z,
            level,
            scale,
        }
    }

    pub fn byte_size(&self) -> usize {
        16 * self.b.degree() * (self.level + 1)
    }
}

/// Scale check shared by additive operations; exact equality is too strict
/// after a chain of floating-point divisions.
pub(crate) fn scales_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

pub fn encode(ctx: &CkksContext, values: &[Complex64], scale: f64, level: usize) -> Result<Plaintext> {
    if level > ctx.max_level() {
        return Err(Error::InsufficientLevel {
            need: level,
            have: ctx.max_level(),
        });
    }
    let q0 = ctx.q(0) as f64;
    let coeffs = ctx.encoder().encode_coefficients(values, scale, q0 / 2.0)?;
    let poly = RnsPoly::from_signed(&ctx.level_basis(level), &coeffs)?.evaluated();
    Ok(Plaintext { poly, scale, level })
}

pub fn encode_real(ctx: &CkksContext, values: &[f64], scale: f64, level: usize) -> Result<Plaintext> {
    let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    encode(ctx, &v, scale, level)
}

pub fn decode(ctx: &CkksContext, pt: &Plaintext) -> Vec<Complex64> {
    let coeff = pt.poly.clone().coefficients();
    let crt = CrtReconstructor::new(coeff.basis());
    let scale = pt.scale;
    ctx.encoder()
        .decode_coefficients(|i| crt.reconstruct_f64(|limb| coeff.limb(limb)[i]) / scale)
}

pub fn encrypt<R: Rng + ?Sized>(ctx: &CkksContext, pt: &Plaintext, sk: &SecretKey, rng: &mut R) -> Ciphertext {
    let basis = ctx.level_basis(pt.level);
    let a = sample_uniform(&basis, rng);
    let e = RnsPoly::from_signed(&basis, &sample_gaussian(basis.degree(), ctx.params().sigma, rng))
        .expect("degree matches")
        .evaluated();
    let s = sk.at_level(pt.level);
    let mut b = e.sub(&a.mul(&s).unwrap()).unwrap();
    b.add_assign(&pt.poly).expect("plaintext lives on the level basis");
    Ciphertext {
        b,
        a,
        level: pt.level,
        scale: pt.scale,
    }
}

pub fn decrypt(ct: &Ciphertext, sk: &SecretKey) -> Plaintext {
    let s = sk.at_level(ct.level);
    let mut poly = ct.b.clone();
    poly.fma_assign(&ct.a, &s)
        .expect("ciphertext and key share the level basis");
    Plaintext {
        poly,
        scale: ct.scale,
        level: ct.level,
    }
}

/// decode(decrypt(ct))
pub fn decrypt_decode(ctx: &CkksContext, ct: &Ciphertext, sk: &SecretKey) -> Vec<Complex64> {
    decode(ctx, &decrypt(ct, sk))
}
