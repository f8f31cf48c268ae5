use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rns_ckks::ckks::noise::{self, max_abs_error, max_norm};
use rns_ckks::ckks::*;
use rns_ckks::Error;

fn random_message(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn setup(rotations: &[i64]) -> (std::sync::Arc<CkksContext>, KeySet, ChaCha20Rng) {
    let ctx = CkksContext::new(CkksParams::desk()).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let keys = keygen(&ctx, rotations, &mut rng);
    (ctx, keys, rng)
}

#[test]
fn encrypt_roundtrip_within_fresh_budget() {
    let (ctx, keys, mut rng) = setup(&[]);
    let delta = ctx.params().scale();
    for _ in 0..5 {
        let m = random_message(ctx.slots(), &mut rng);
        let pt = encode(&ctx, &m, delta, ctx.max_level()).unwrap();
        let ct = encrypt(&ctx, &pt, &keys.secret, &mut rng);
        let err = max_abs_error(&decrypt_decode(&ctx, &ct, &keys.secret), &m);
        assert!(err < noise::FRESH_RELATIVE * max_norm(&m), "error {err:e}");
    }
}

#[test]
fn zero_message_encodes_to_zero_polynomial() {
    let ctx = CkksContext::new(CkksParams::desk()).unwrap();
    let pt = encode(
        &ctx,
        &vec![Complex64::new(0.0, 0.0); ctx.slots()],
        ctx.params().scale(),
        3,
    )
    .unwrap();
    assert!(pt.poly.is_zero());
}

#[test]
fn hadd_and_pmult() {
    let (ctx, keys, mut rng) = setup(&[]);
    let delta = ctx.params().scale();
    let l = ctx.max_level();
    let m1 = random_message(ctx.slots(), &mut rng);
    let m2 = random_message(ctx.slots(), &mut rng);
    let c1 = encrypt(&ctx, &encode(&ctx, &m1, delta, l).unwrap(), &keys.secret, &mut rng);
    let c2 = encrypt(&ctx, &encode(&ctx, &m2, delta, l).unwrap(), &keys.secret, &mut rng);

    let sum: Vec<_> = m1.iter().zip(&m2).map(|(a, b)| a + b).collect();
    let got = decrypt_decode(&ctx, &hadd(&c1, &c2).unwrap(), &keys.secret);
    assert!(max_abs_error(&got, &sum) < noise::ADDITIVE_RELATIVE * max_norm(&sum));

    let pt2 = encode(&ctx, &m2, ctx.q(l) as f64, l).unwrap();
    let prod = hrescale(&ctx, &pmult(&c1, &pt2).unwrap()).unwrap();
    assert_eq!(prod.level, l - 1);
    let want: Vec<_> = m1.iter().zip(&m2).map(|(a, b)| a * b).collect();
    let got = decrypt_decode(&ctx, &prod, &keys.secret);
    assert!(max_abs_error(&got, &want) < noise::MULTIPLICATIVE_RELATIVE * max_norm(&want));
}

#[test]
fn hmult_then_rescale() {
    let (ctx, keys, mut rng) = setup(&[]);
    let delta = ctx.params().scale();
    let l = ctx.max_level();
    let m1 = random_message(ctx.slots(), &mut rng);
    let m2 = random_message(ctx.slots(), &mut rng);
    let c1 = encrypt(&ctx, &encode(&ctx, &m1, delta, l).unwrap(), &keys.secret, &mut rng);
    let c2 = encrypt(&ctx, &encode(&ctx, &m2, delta, l).unwrap(), &keys.secret, &mut rng);
    let prod = hmult(&ctx, &c1, &c2, &keys.mult).unwrap();
    assert_eq!(prod.scale, delta * delta);
    let before = prod.scale;
    let r = hrescale(&ctx, &prod).unwrap();
    assert_eq!(r.scale, before / ctx.q(l) as f64);
    let want: Vec<_> = m1.iter().zip(&m2).map(|(a, b)| a * b).collect();
    let err = max_abs_error(&decrypt_decode(&ctx, &r, &keys.secret), &want);
    println!("hmult relative error {:e}", err / max_norm(&want));
    assert!(err < noise::MULTIPLICATIVE_RELATIVE * max_norm(&want));
}

#[test]
fn multiplying_by_ones_exhausts_levels() {
    let (ctx, keys, mut rng) = setup(&[]);
    let delta = ctx.params().scale();
    let m = random_message(ctx.slots(), &mut rng);
    let ones = vec![Complex64::new(1.0, 0.0); ctx.slots()];
    let mut ct = encrypt(
        &ctx,
        &encode(&ctx, &m, delta, ctx.max_level()).unwrap(),
        &keys.secret,
        &mut rng,
    );
    for _ in 0..ctx.max_level() {
        let one = encrypt(
            &ctx,
            &encode(&ctx, &ones, ct.scale, ct.level).unwrap(),
            &keys.secret,
            &mut rng,
        );
        ct = hrescale(&ctx, &hmult(&ctx, &ct, &one, &keys.mult).unwrap()).unwrap();
    }
    assert_eq!(ct.level, 0);
    let err = max_abs_error(&decrypt_decode(&ctx, &ct, &keys.secret), &m);
    assert!(err < 1e-3, "error {err:e} after {} mults", ctx.max_level());
    let prod = hmult(&ctx, &ct, &ct, &keys.mult).unwrap();
    assert!(matches!(hrescale(&ctx, &prod), Err(Error::LevelExhausted)));
}

#[test]
fn rotations_shift_slots_left() {
    let (ctx, keys, mut rng) = setup(&[1, 2, 5, 32]);
    let delta = ctx.params().scale();
    let n = ctx.slots();
    let m = random_message(n, &mut rng);
    let ct = encrypt(&ctx, &encode(&ctx, &m, delta, 4).unwrap(), &keys.secret, &mut rng);
    for r in [1i64, 2, 5, 32] {
        let rot = hrot_with(&ctx, &ct, r, &keys.rotations).unwrap();
        let want: Vec<_> = (0..n).map(|j| m[(j + r as usize) % n]).collect();
        let err = max_abs_error(&decrypt_decode(&ctx, &rot, &keys.secret), &want);
        println!("rotation {r} relative error {:e}", err / max_norm(&want));
        assert!(err < noise::ROTATION_RELATIVE * max_norm(&want));
    }
    assert!(matches!(
        hrot_with(&ctx, &ct, 3, &keys.rotations),
        Err(Error::MissingKey(_))
    ));
}

#[test]
fn constant_ops() {
    let (ctx, keys, mut rng) = setup(&[]);
    let delta = ctx.params().scale();
    let m = random_message(ctx.slots(), &mut rng);
    let ct = encrypt(&ctx, &encode(&ctx, &m, delta, 3).unwrap(), &keys.secret, &mut rng);
    let shifted = cadd(&ct, 0.5).unwrap();
    let want: Vec<_> = m.iter().map(|z| z + 0.5).collect();
    assert!(max_abs_error(&decrypt_decode(&ctx, &shifted, &keys.secret), &want) < 1e-5);
    let same = cmult(&ct, 1.0, delta).unwrap();
    assert_eq!(same.scale, delta * delta);
    assert!(max_abs_error(&decrypt_decode(&ctx, &same, &keys.secret), &m) < 1e-5);
}

#[test]
fn identity_key_switch_rerandomizes() {
    let (ctx, keys, mut rng) = setup(&[]);
    let n = ctx.slots() as i64;
    let delta = ctx.params().scale();
    let m = random_message(ctx.slots(), &mut rng);
    let ct = encrypt(&ctx, &encode(&ctx, &m, delta, 5).unwrap(), &keys.secret, &mut rng);
    // Rotation by N/2 has Galois element 1: the key switches s to s.
    let id = gen_rotation_key(&ctx, &keys.secret, (ctx.degree() / 2) as i64, &mut rng);
    assert_eq!(id.id(), 1);
    let out = hrot(&ctx, &ct, ctx.degree() as i64 / 2, &id).unwrap();
    assert_ne!(out.a, ct.a);
    let err = max_abs_error(&decrypt_decode(&ctx, &out, &keys.secret), &m);
    assert!(err < noise::ROTATION_RELATIVE, "error {err:e}, n = {n}");
}

#[test]
fn mod_up_piece_shape() {
    let (ctx, keys, mut rng) = setup(&[]);
    let l = ctx.max_level();
    let m = random_message(ctx.slots(), &mut rng);
    let ct = encrypt(&ctx, &encode(&ctx, &m, 1e6, l).unwrap(), &keys.secret, &mut rng);
    let pieces = mod_up(&ctx, &ct.a).unwrap();
    assert_eq!(pieces.len(), ctx.params().dnum);
    for p in &pieces {
        assert_eq!(p.num_limbs(), ctx.alpha() + l + 1);
    }
}

#[test]
fn mismatched_inputs_are_rejected() {
    let (ctx, keys, mut rng) = setup(&[]);
    let m = random_message(ctx.slots(), &mut rng);
    let a = encrypt(&ctx, &encode(&ctx, &m, 1e9, 3).unwrap(), &keys.secret, &mut rng);
    let b = encrypt(&ctx, &encode(&ctx, &m, 1e9, 2).unwrap(), &keys.secret, &mut rng);
    let c = encrypt(&ctx, &encode(&ctx, &m, 2e9, 3).unwrap(), &keys.secret, &mut rng);
    assert!(matches!(hadd(&a, &b), Err(Error::LevelMismatch(3, 2))));
    assert!(matches!(hadd(&a, &c), Err(Error::ScaleMismatch(..))));
    assert!(matches!(hmult(&ctx, &a, &b, &keys.mult), Err(Error::LevelMismatch(..))));
    let big = vec![Complex64::new(1e12, 0.0); ctx.slots()];
    assert!(matches!(encode(&ctx, &big, 1e9, 3), Err(Error::Range(_))));
}

#[test]
fn keygen_is_deterministic() {
    let ctx = CkksContext::new(CkksParams::toy(6)).unwrap();
    let a = keygen(&ctx, &[1, 3], &mut ChaCha20Rng::seed_from_u64(11));
    let b = keygen(&ctx, &[1, 3], &mut ChaCha20Rng::seed_from_u64(11));
    assert_eq!(a.secret, b.secret);
    assert_eq!(a.mult, b.mult);
    assert_eq!(a.rotations, b.rotations);
}

#[test]
fn serialization_roundtrips() {
    let (ctx, keys, mut rng) = setup(&[3]);
    let m = random_message(ctx.slots(), &mut rng);
    let pt = encode(&ctx, &m, 1e9, 4).unwrap();
    let ct = encrypt(&ctx, &pt, &keys.secret, &mut rng);
    assert_eq!(Ciphertext::from_bytes(&ctx, &ct.to_bytes()).unwrap(), ct);
    assert_eq!(Plaintext::from_bytes(&ctx, &pt.to_bytes()).unwrap(), pt);
    assert_eq!(
        SecretKey::from_bytes(&ctx, &keys.secret.to_bytes()).unwrap(),
        keys.secret
    );
    assert_eq!(
        EvaluationKey::from_bytes(&ctx, &keys.mult.to_bytes()).unwrap(),
        keys.mult
    );
    let rot = keys.rotations.get(3, ctx.degree()).unwrap();
    assert_eq!(EvaluationKey::from_bytes(&ctx, &rot.to_bytes()).unwrap(), *rot);

    let mut bytes = ct.to_bytes();
    bytes.pop();
    assert!(matches!(
        Ciphertext::from_bytes(&ctx, &bytes),
        Err(Error::Serialization(_))
    ));
    let other = CkksContext::new(CkksParams::toy(6)).unwrap();
    assert!(Ciphertext::from_bytes(&other, &ct.to_bytes()).is_err());
    assert!(Plaintext::from_bytes(&ctx, &ct.to_bytes()).is_err());
}
