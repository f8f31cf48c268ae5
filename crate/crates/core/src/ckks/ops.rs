use rayon::prelude::*;

use crate::ckks::ciphertext::scales_match;
use crate::ckks::keys::{EvaluationKey, KeyKind, RotationKeys};
use crate::ckks::keyswitch::key_switch;
use crate::ckks::{Ciphertext, CkksContext, Plaintext};
use crate::error::{Error, Result};
use crate::poly::{apply_galois, galois_element, Representation, RnsPoly};

fn same_level(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LevelMismatch(a, b));
    }
    Ok(())
}

fn same_scale(a: f64, b: f64) -> Result<()> {
    if !scales_match(a, b) {
        return Err(Error::ScaleMismatch(a, b));
    }
    Ok(())
}

pub fn hadd(x: &Ciphertext, y: &Ciphertext) -> Result<Ciphertext> {
    same_level(x.level, y.level)?;
    same_scale(x.scale, y.scale)?;
    Ok(Ciphertext {
        b: x.b.add(&y.b)?,
        a: x.a.add(&y.a)?,
        level: x.level,
        scale: x.scale,
    })
}

pub fn hsub(x: &Ciphertext, y: &Ciphertext) -> Result<Ciphertext> {
    same_level(x.level, y.level)?;
    same_scale(x.scale, y.scale)?;
    Ok(Ciphertext {
        b: x.b.sub(&y.b)?,
        a: x.a.sub(&y.a)?,
        level: x.level,
        scale: x.scale,
    })
}

/// In-place x += y.
pub fn hadd_assign(x: &mut Ciphertext, y: &Ciphertext) -> Result<()> {
    same_level(x.level, y.level)?;
    same_scale(x.scale, y.scale)?;
    x.b.add_assign(&y.b)?;
    x.a.add_assign(&y.a)?;
    Ok(())
}

pub fn padd(x: &Ciphertext, p: &Plaintext) -> Result<Ciphertext> {
    same_level(x.level, p.level)?;
    same_scale(x.scale, p.scale)?;
    Ok(Ciphertext {
        b: x.b.add(&p.poly)?,
        a: x.a.clone(),
        level: x.level,
        scale: x.scale,
    })
}

/// Scale becomes the product of both scales; rescale afterwards.
pub fn pmult(x: &Ciphertext, p: &Plaintext) -> Result<Ciphertext> {
    same_level(x.level, p.level)?;
    Ok(Ciphertext {
        b: x.b.mul(&p.poly)?,
        a: x.a.mul(&p.poly)?,
        level: x.level,
        scale: x.scale * p.scale,
    })
}

/// Constant polynomial holding round(c·scale) on every prime.
fn constant_residues(x: &Ciphertext, c: f64, scale: f64) -> Result<Vec<u64>> {
    let v = (c * scale).round();
    if !(v.abs() < 2f64.powi(126)) {
        return Err(Error::Range(format!("constant {c} at scale {scale:e} does not fit")));
    }
    let v = v as i128;
    Ok(x.b.basis().moduli().map(|m| m.from_i128(v)).collect())
}

/// Add a real constant to every slot.
pub fn cadd(x: &Ciphertext, c: f64) -> Result<Ciphertext> {
    let k = constant_residues(x, c, x.scale)?;
    // A constant polynomial evaluates to itself at every NTT point.
    let mut b = x.b.clone();
    for (i, &ki) in k.iter().enumerate() {
        let m = *b.basis().modulus(i);
        for v in b.limb_mut(i) {
            *v = m.add(*v, ki);
        }
    }
    Ok(Ciphertext {
        b,
        a: x.a.clone(),
        level: x.level,
        scale: x.scale,
    })
}

/// Multiply every slot by a real constant encoded at `const_scale`.
pub fn cmult(x: &Ciphertext, c: f64, const_scale: f64) -> Result<Ciphertext> {
    let k = constant_residues(x, c, const_scale)?;
    Ok(Ciphertext {
        b: x.b.scalar_mul_per_limb(&k),
        a: x.a.scalar_mul_per_limb(&k),
        level: x.level,
        scale: x.scale * const_scale,
    })
}

/// Tensor, then switch the s² component back to s. Scale is the product.
pub fn hmult(ctx: &CkksContext, x: &Ciphertext, y: &Ciphertext, evk: &EvaluationKey) -> Result<Ciphertext> {
    same_level(x.level, y.level)?;
    if evk.kind() != KeyKind::Mult {
        return Err(Error::MissingKey("multiplication key".into()));
    }
    let d0 = x.b.mul(&y.b)?;
    let mut d1 = x.a.mul(&y.b)?;
    d1.fma_assign(&y.a, &x.b)?;
    let d2 = x.a.mul(&y.a)?;
    let (u, v) = key_switch(ctx, &d2, evk)?;
    Ok(Ciphertext {
        b: d0.add(&u)?,
        a: d1.add(&v)?,
        level: x.level,
        scale: x.scale * y.scale,
    })
}

/// Rotate slots left by r.
pub fn hrot(ctx: &CkksContext, x: &Ciphertext, r: i64, evk: &EvaluationKey) -> Result<Ciphertext> {
    let galois = galois_element(r, ctx.degree());
    match evk.kind() {
        KeyKind::Rotation { galois: g } if g == galois => {}
        _ => return Err(Error::MissingKey(format!("rotation by {r} (galois element {galois})"))),
    }
    let b = apply_galois(&x.b, galois);
    let a = apply_galois(&x.a, galois);
    let (u, v) = key_switch(ctx, &a, evk)?;
    Ok(Ciphertext {
        b: b.add(&u)?,
        a: v,
        level: x.level,
        scale: x.scale,
    })
}

/// [`hrot`] with the key looked up in a key set.
pub fn hrot_with(ctx: &CkksContext, x: &Ciphertext, r: i64, keys: &RotationKeys) -> Result<Ciphertext> {
    hrot(ctx, x, r, keys.get(r, ctx.degree())?)
}

/// Drop q_ℓ: every remaining limb becomes (x_i - [x]_(q_ℓ)) · q_ℓ⁻¹ mod q_i,
/// with the dropped limb lifted centered so the division rounds.
pub fn hrescale(ctx: &CkksContext, x: &Ciphertext) -> Result<Ciphertext> {
    if x.level == 0 {
        return Err(Error::LevelExhausted);
    }
    let ql = ctx.q(x.level);
    Ok(Ciphertext {
        b: rescale_poly(ctx, &x.b)?,
        a: rescale_poly(ctx, &x.a)?,
        level: x.level - 1,
        scale: x.scale / ql as f64,
    })
}

fn rescale_poly(ctx: &CkksContext, p: &RnsPoly) -> Result<RnsPoly> {
    p.require(Representation::Evaluation)?;
    let level = p.num_limbs() - 1;
    let basis = ctx.level_basis(level);
    let top = basis.modulus(level);
    let mut last = p.limb(level).to_vec();
    basis.table(level).inverse_inplace(&mut last);
    let centered: Vec<i64> = last.iter().map(|&v| top.centered(v)).collect();
    let lower = ctx.level_basis(level - 1);
    let limbs = (0..level)
        .into_par_iter()
        .map(|i| {
            let m = lower.modulus(i);
            let mut t: Vec<u64> = centered.iter().map(|&c| m.from_i64(c)).collect();
            lower.table(i).forward_inplace(&mut t);
            let inv = m.to_montgomery(m.inv(m.reduce(top.value())));
            p.limb(i)
                .iter()
                .zip(&t)
                .map(|(&x, &y)| m.mul_by_montgomery(m.sub(x, y), inv))
                .collect()
        })
        .collect();
    RnsPoly::from_limbs(&lower, limbs, Representation::Evaluation)
}
