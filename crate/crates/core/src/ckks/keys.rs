use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::ckks::CkksContext;
use crate::error::{Error, Result};
use crate::poly::{apply_galois, galois_element, LimbBasis, Representation, RnsPoly};

/// Ternary secret, kept both as signed coefficients and as an evaluation-form
/// polynomial over every prime of the scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    pub(crate) coeffs: Vec<i8>,
    pub(crate) poly: RnsPoly,
}

impl SecretKey {
    pub fn coefficients(&self) -> &[i8] {
        &self.coeffs
    }

    /// Evaluation-form key restricted to q_0 .. q_level.
    pub fn at_level(&self, level: usize) -> RnsPoly {
        self.poly.truncated(level + 1)
    }

    pub fn poly(&self) -> &RnsPoly {
        &self.poly
    }

    pub(crate) fn from_coefficients(ctx: &CkksContext, coeffs: Vec<i8>) -> Result<Self> {
        let wide: Vec<i64> = coeffs.iter().map(|&c| c as i64).collect();
        let poly = RnsPoly::from_signed(ctx.d_basis(), &wide)?.evaluated();
        Ok(SecretKey { coeffs, poly })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KeyKind {
    /// switches from s² to s
    Mult,
    /// switches from s(X^g) to s
    Rotation { galois: usize },
}

/// dnum pairs (b_i, a_i) over the full key basis with
/// b_i + a_i·s = e_i + P·[Q̂_i·(Q̂_i⁻¹ mod Q_i)]·s'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationKey {
    pub(crate) kind: KeyKind,
    pub(crate) pairs: Vec<(RnsPoly, RnsPoly)>,
}

impl EvaluationKey {
    pub fn kind(&self) -> KeyKind {
        self.kind
    }

    /// Stable identifier: 0 for the multiplication key, else the Galois element.
    pub fn id(&self) -> u64 {
        match self.kind {
            KeyKind::Mult => 0,
            KeyKind::Rotation { galois } => galois as u64,
        }
    }

    pub fn pairs(&self) -> &[(RnsPoly, RnsPoly)] {
        &self.pairs
    }

    pub fn byte_size(&self) -> usize {
        self.pairs
            .iter()
            .map(|(b, a)| 8 * b.degree() * (b.num_limbs() + a.num_limbs()))
            .sum()
    }
}

/// Rotation keys indexed by Galois element, so r and r + N/2 share a key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RotationKeys {
    keys: BTreeMap<usize, EvaluationKey>,
}

impl RotationKeys {
    pub fn insert(&mut self, key: EvaluationKey) {
        if let KeyKind::Rotation { galois } = key.kind {
            self.keys.insert(galois, key);
        }
    }

    pub fn get(&self, r: i64, degree: usize) -> Result<&EvaluationKey> {
        let g = galois_element(r, degree);
        self.keys
            .get(&g)
            .ok_or_else(|| Error::MissingKey(format!("rotation by {r} (galois element {g})")))
    }

    pub fn contains(&self, r: i64, degree: usize) -> bool {
        self.keys.contains_key(&galois_element(r, degree))
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EvaluationKey> {
        self.keys.values()
    }
}

#[derive(Clone, Debug)]
pub struct KeySet {
    pub secret: SecretKey,
    pub mult: EvaluationKey,
    pub rotations: RotationKeys,
}

pub fn sample_ternary<R: Rng + ?Sized>(degree: usize, hamming_weight: Option<usize>, rng: &mut R) -> Vec<i8> {
    match hamming_weight {
        None => (0..degree).map(|_| rng.gen_range(-1i8..=1)).collect(),
        Some(h) => {
            let mut c = vec![0i8; degree];
            let mut placed = 0;
            while placed < h {
                let i = rng.gen_range(0..degree);
                if c[i] == 0 {
                    c[i] = if rng.gen::<bool>() { 1 } else { -1 };
                    placed += 1;
                }
            }
            c
        }
    }
}

/// Rounded Gaussian, truncated at six standard deviations.
pub fn sample_gaussian<R: Rng + ?Sized>(degree: usize, sigma: f64, rng: &mut R) -> Vec<i64> {
    let normal = Normal::new(0.0, sigma).expect("sigma validated as positive");
    let cut = 6.0 * sigma;
    (0..degree)
        .map(|_| loop {
            let x: f64 = normal.sample(rng);
            if x.abs() <= cut {
                break x.round() as i64;
            }
        })
        .collect()
}

/// Independent uniform residues per prime, already in evaluation form.
pub fn sample_uniform<R: Rng + ?Sized>(basis: &LimbBasis, rng: &mut R) -> RnsPoly {
    let n = basis.degree();
    let limbs = basis
        .moduli()
        .map(|m| (0..n).map(|_| rng.gen_range(0..m.value())).collect())
        .collect();
    RnsPoly::from_limbs(basis, limbs, Representation::Evaluation).expect("sampled below each modulus")
}

pub fn gen_secret_key<R: Rng + ?Sized>(ctx: &CkksContext, rng: &mut R) -> SecretKey {
    let p = ctx.params();
    let coeffs = sample_ternary(p.ring_degree, p.hamming_weight, rng);
    SecretKey::from_coefficients(ctx, coeffs).expect("ternary coefficients fit every prime")
}

/// Key encrypting `target` (evaluation form over the key basis) under `sk`.
fn gen_switching_key<R: Rng + ?Sized>(
    ctx: &CkksContext,
    sk: &SecretKey,
    target: &RnsPoly,
    kind: KeyKind,
    rng: &mut R,
) -> EvaluationKey {
    let d = ctx.d_basis();
    let alpha = ctx.alpha();
    let l = ctx.max_level();
    let mut pairs = Vec::with_capacity(ctx.params().dnum);
    for i in 0..ctx.params().dnum {
        let a = sample_uniform(d, rng);
        let e = RnsPoly::from_signed(d, &sample_gaussian(d.degree(), ctx.params().sigma, rng))
            .expect("degree matches")
            .evaluated();
        let mut b = e.sub(&a.mul(&sk.poly).unwrap()).unwrap();
        // Gadget: P·s' on the primes of piece i, zero elsewhere.
        for t in i * alpha..((i + 1) * alpha).min(l + 1) {
            let m = *d.modulus(t);
            let pm = ctx.p_mod_q()[t];
            let pm_mont = m.to_montgomery(pm);
            let row: Vec<u64> = target
                .limb(t)
                .iter()
                .map(|&x| m.mul_by_montgomery(x, pm_mont))
                .collect();
            for (bv, tv) in b.limb_mut(t).iter_mut().zip(row) {
                *bv = m.add(*bv, tv);
            }
        }
        pairs.push((b, a));
    }
    EvaluationKey { kind, pairs }
}

pub fn gen_mult_key<R: Rng + ?Sized>(ctx: &CkksContext, sk: &SecretKey, rng: &mut R) -> EvaluationKey {
    let s2 = sk.poly.mul(&sk.poly).unwrap();
    gen_switching_key(ctx, sk, &s2, KeyKind::Mult, rng)
}

pub fn gen_rotation_key<R: Rng + ?Sized>(ctx: &CkksContext, sk: &SecretKey, r: i64, rng: &mut R) -> EvaluationKey {
    let galois = galois_element(r, ctx.degree());
    let rotated = apply_galois(&sk.poly, galois);
    gen_switching_key(ctx, sk, &rotated, KeyKind::Rotation { galois }, rng)
}

/// Secret key, multiplication key and one rotation key per distinct Galois
/// element among `rotations`. Deterministic for a given generator state.
pub fn keygen<R: Rng + ?Sized>(ctx: &CkksContext, rotations: &[i64], rng: &mut R) -> KeySet {
    let secret = gen_secret_key(ctx, rng);
    let mult = gen_mult_key(ctx, &secret, rng);
    let mut keys = RotationKeys::default();
    for &r in rotations {
        if !keys.contains(r, ctx.degree()) {
            keys.insert(gen_rotation_key(ctx, &secret, r, rng));
        }
    }
    KeySet {
        secret,
        mult,
        rotations: keys,
    }
}
