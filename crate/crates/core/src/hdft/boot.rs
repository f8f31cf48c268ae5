//! Level recovery and the plaintext stand-in for modular reduction.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::ckks::keys::SecretKey;
use crate::ckks::{decrypt_decode, encode, encrypt, Ciphertext, CkksContext};
use crate::error::{Error, Result};
use crate::poly::{Representation, RnsPoly};

/// Reinterpret a level-0 ciphertext over all of q_0 .. q_L by lifting each
/// centered q_0 residue. The result decrypts to the old plaintext plus
/// q_0·I for a small integer polynomial I.
pub fn mod_raise(ctx: &CkksContext, ct: &Ciphertext) -> Result<Ciphertext> {
    if ct.level != 0 {
        return Err(Error::Config(format!("mod-raise expects level 0, got {}", ct.level)));
    }
    let b = raise_poly(ctx, &ct.b)?;
    let a = raise_poly(ctx, &ct.a)?;
    Ciphertext::new(b, a, ct.scale)
}

fn raise_poly(ctx: &CkksContext, p: &RnsPoly) -> Result<RnsPoly> {
    p.require(Representation::Evaluation)?;
    let q = ctx.q_basis();
    let mut low = p.limb(0).to_vec();
    q.table(0).inverse_inplace(&mut low);
    let centered: Vec<i64> = low.iter().map(|&v| q.modulus(0).centered(v)).collect();
    let limbs = (0..q.len())
        .into_par_iter()
        .map(|i| {
            if i == 0 {
                return p.limb(0).to_vec();
            }
            let m = q.modulus(i);
            let mut l: Vec<u64> = centered.iter().map(|&c| m.from_i64(c)).collect();
            q.table(i).forward_inplace(&mut l);
            l
        })
        .collect();
    RnsPoly::from_limbs(q, limbs, Representation::Evaluation)
}

/// x mod period, centered in (−period/2, period/2].
fn centered_mod(x: f64, period: f64) -> f64 {
    x - (x / period).round() * period
}

/// Test-only stand-in for homomorphic modular reduction: decrypts, reduces
/// real and imaginary parts of every slot modulo q_0/scale and re-encrypts at
/// the same level. It uses the secret key and offers no security.
pub fn eval_mod_reference<R: Rng + ?Sized>(
    ctx: &CkksContext,
    ct: &Ciphertext,
    sk: &SecretKey,
    rng: &mut R,
) -> Result<Ciphertext> {
    let period = ctx.q(0) as f64 / ct.scale;
    let reduced: Vec<Complex64> = decrypt_decode(ctx, ct, sk)
        .into_iter()
        .map(|z| Complex64::new(centered_mod(z.re, period), centered_mod(z.im, period)))
        .collect();
    let pt = encode(ctx, &reduced, ct.scale, ct.level)?;
    Ok(encrypt(ctx, &pt, sk, rng))
}
