//! Generalized key switching.
//!
//! The input polynomial at level ℓ is split into ⌈(ℓ+1)/α⌉ groups of α
//! ciphertext primes. Each group is extended to the level's full extended
//! basis (mod-up), multiplied into the matching key pair, and the two
//! accumulators are brought back to the ciphertext primes by subtracting
//! their special-prime part and dividing by P (mod-down).

use rayon::prelude::*;

use crate::ckks::keys::EvaluationKey;
use crate::ckks::CkksContext;
use crate::error::{Error, Result};
use crate::poly::{base_convert, Representation, RnsPoly};

/// Extended pieces of `d` over q_0 .. q_ℓ, p_0 .. p_(α-1), evaluation form.
pub fn mod_up(ctx: &CkksContext, d: &RnsPoly) -> Result<Vec<RnsPoly>> {
    d.require(Representation::Evaluation)?;
    let level = d
        .num_limbs()
        .checked_sub(1)
        .filter(|&l| l <= ctx.max_level())
        .ok_or_else(|| Error::Config(format!("{} limbs is not a valid level", d.num_limbs())))?;
    if *d.basis() != ctx.level_basis(level) {
        return Err(Error::BasisMismatch(
            "key switching input is not on a level basis".into(),
        ));
    }
    let coeff = d.clone().coefficients();
    let dl = ctx.extended_basis(level);
    ctx.level_tables(level)
        .pieces
        .iter()
        .map(|(first, end, table)| {
            let src = RnsPoly::from_limbs(
                table.source(),
                coeff.limbs()[*first..*end].to_vec(),
                Representation::Coefficient,
            )?;
            let ext = base_convert(&src, table.target(), table)?.evaluated();
            let mut others = ext.into_limbs().into_iter();
            let limbs = (0..dl.len())
                .map(|pos| {
                    if (*first..*end).contains(&pos) {
                        d.limb(pos).to_vec()
                    } else {
                        others.next().expect("target holds every other prime")
                    }
                })
                .collect();
            RnsPoly::from_limbs(&dl, limbs, Representation::Evaluation)
        })
        .collect()
}

/// (x - ModUp(ModDown-residue)) / P: from the extended level basis back to
/// q_0 .. q_ℓ.
pub fn mod_down(ctx: &CkksContext, x: &RnsPoly) -> Result<RnsPoly> {
    x.require(Representation::Evaluation)?;
    let alpha = ctx.alpha();
    let level = x
        .num_limbs()
        .checked_sub(alpha + 1)
        .ok_or_else(|| Error::Config("mod-down input too short".into()))?;
    let tables = ctx.level_tables(level);
    let special = RnsPoly::from_limbs(
        ctx.p_basis(),
        x.limbs()[level + 1..].to_vec(),
        Representation::Evaluation,
    )?
    .coefficients();
    let lifted = base_convert(&special, tables.mod_down.target(), &tables.mod_down)?.evaluated();
    let basis = ctx.level_basis(level);
    let p_inv = ctx.p_inv_mod_q();
    let limbs = (0..=level)
        .into_par_iter()
        .map(|i| {
            let m = basis.modulus(i);
            let f = m.to_montgomery(p_inv[i]);
            x.limb(i)
                .iter()
                .zip(lifted.limb(i))
                .map(|(&a, &b)| m.mul_by_montgomery(m.sub(a, b), f))
                .collect()
        })
        .collect();
    RnsPoly::from_limbs(&basis, limbs, Representation::Evaluation)
}

/// Returns (u, v) with u + v·s ≈ d·s' where the key switches s' to s.
pub fn key_switch(ctx: &CkksContext, d: &RnsPoly, evk: &EvaluationKey) -> Result<(RnsPoly, RnsPoly)> {
    let pieces = mod_up(ctx, d)?;
    let level = d.num_limbs() - 1;
    if evk.pairs.len() < pieces.len() {
        return Err(Error::Config("evaluation key has too few pairs".into()));
    }
    let dl = pieces[0].basis().clone();
    let n = dl.degree();

    let accumulate = |use_b: bool| -> Vec<Vec<u64>> {
        (0..dl.len())
            .into_par_iter()
            .map(|pos| {
                let m = dl.modulus(pos);
                let k = ctx.key_limb_index(level, pos);
                let mut acc = vec![0u128; n];
                for (piece, (b, a)) in pieces.iter().zip(&evk.pairs) {
                    let key = if use_b { b.limb(k) } else { a.limb(k) };
                    for ((s, &x), &y) in acc.iter_mut().zip(piece.limb(pos)).zip(key) {
                        *s += x as u128 * y as u128;
                    }
                }
                acc.into_iter().map(|s| m.reduce_u128(s)).collect()
            })
            .collect()
    };
    let acc_b = RnsPoly::from_limbs(&dl, accumulate(true), Representation::Evaluation)?;
    let acc_a = RnsPoly::from_limbs(&dl, accumulate(false), Representation::Evaluation)?;
    Ok((mod_down(ctx, &acc_b)?, mod_down(ctx, &acc_a)?))
}
