//! Invariant suite run by the command-line `selftest`: kernel oracles,
//! scheme arithmetic, both transform variants, seed extension, the
//! bootstrapping linear-transform loop and the analytic reproductions.
//!
//! Each check yields one pass/fail line. A check that errors counts as a
//! failure and carries the error text.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::ckks::noise::{self, max_abs_error, max_norm};
use crate::ckks::*;
use crate::cost::{self, fmt, Report};
use crate::error::{Error, Result};
use crate::hdft::*;
use crate::oracle;
use crate::poly::{apply_galois, base_convert, BaseTable, BasisKind, LimbBasis, Representation, RnsPoly};
use crate::serial::{self, ObjectKind};
use crate::zq::prime::ntt_primes;
use crate::zq::{four_step_ntt, ntt, Direction, FourStepNtt, Limb, NttTable, PrimeModulus};

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub params: CkksParams,
    pub seed: u64,
    /// random trials per scheme-level check
    pub trials: usize,
    /// serialized objects to validate against `params`
    pub fixtures: Vec<PathBuf>,
}

impl SelftestConfig {
    pub fn desk(seed: u64) -> Self {
        SelftestConfig {
            params: CkksParams::desk(),
            seed,
            trials: 5,
            fixtures: Vec::new(),
        }
    }
}

type Outcome = Result<(bool, String)>;

fn record(report: &mut Report, name: &str, f: impl FnOnce() -> Outcome) {
    match f() {
        Ok((pass, detail)) => report.check(name, pass, detail),
        Err(e) => report.check(name, false, format!("error: {e}")),
    }
}

fn message(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn err_detail(err: f64, bound: f64) -> String {
    format!("max error {:.3e} (bound {:.3e})", err, bound)
}

pub fn run(cfg: &SelftestConfig) -> Result<Report> {
    cfg.params.validate()?;
    let mut r = Report::new();
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    record(&mut r, "kernels.four_step_equals_ntt", || four_step(&mut rng));
    record(&mut r, "kernels.convolution_theorem", || convolution(&mut rng));
    record(&mut r, "kernels.base_conversion_slack", || bconv(&mut rng));
    record(&mut r, "kernels.automorphism_homomorphism", || automorphisms(&mut rng));

    let ctx = CkksContext::new(cfg.params.clone())?;
    for path in &cfg.fixtures {
        record(&mut r, &format!("fixture.{}", path.display()), || {
            check_fixture(&ctx, path)
        });
    }
    let n = ctx.slots();
    let l = ctx.max_level();
    let rotations = [1, 2, 5, n as i64 / 2];
    let keys = keygen(&ctx, &rotations, &mut rng);
    let trials = cfg.trials.max(1);

    record(&mut r, "scheme.encrypt_roundtrip", || {
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let m = message(n, &mut rng);
            let ct = encrypt(
                &ctx,
                &encode(&ctx, &m, ctx.params().scale(), l)?,
                &keys.secret,
                &mut rng,
            );
            worst = worst.max(max_abs_error(&decrypt_decode(&ctx, &ct, &keys.secret), &m) / max_norm(&m));
        }
        Ok((worst < noise::FRESH_RELATIVE, err_detail(worst, noise::FRESH_RELATIVE)))
    });
    record(&mut r, "scheme.hadd", || {
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let (a, b) = (message(n, &mut rng), message(n, &mut rng));
            let ca = encrypt(
                &ctx,
                &encode(&ctx, &a, ctx.params().scale(), l)?,
                &keys.secret,
                &mut rng,
            );
            let cb = encrypt(
                &ctx,
                &encode(&ctx, &b, ctx.params().scale(), l)?,
                &keys.secret,
                &mut rng,
            );
            let want: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let got = decrypt_decode(&ctx, &hadd(&ca, &cb)?, &keys.secret);
            worst = worst.max(max_abs_error(&got, &want) / max_norm(&want));
        }
        Ok((
            worst < noise::ADDITIVE_RELATIVE,
            err_detail(worst, noise::ADDITIVE_RELATIVE),
        ))
    });
    record(&mut r, "scheme.pmult_rescale", || {
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let (a, b) = (message(n, &mut rng), message(n, &mut rng));
            let ca = encrypt(
                &ctx,
                &encode(&ctx, &a, ctx.params().scale(), l)?,
                &keys.secret,
                &mut rng,
            );
            let pb = encode(&ctx, &b, ctx.q(l) as f64, l)?;
            let want: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let got = decrypt_decode(&ctx, &hrescale(&ctx, &pmult(&ca, &pb)?)?, &keys.secret);
            worst = worst.max(max_abs_error(&got, &want) / max_norm(&want));
        }
        Ok((
            worst < noise::MULTIPLICATIVE_RELATIVE,
            err_detail(worst, noise::MULTIPLICATIVE_RELATIVE),
        ))
    });
    record(&mut r, "scheme.hmult_rescale", || {
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let (a, b) = (message(n, &mut rng), message(n, &mut rng));
            let ca = encrypt(
                &ctx,
                &encode(&ctx, &a, ctx.params().scale(), l)?,
                &keys.secret,
                &mut rng,
            );
            let cb = encrypt(
                &ctx,
                &encode(&ctx, &b, ctx.params().scale(), l)?,
                &keys.secret,
                &mut rng,
            );
            let want: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let prod = hrescale(&ctx, &hmult(&ctx, &ca, &cb, &keys.mult)?)?;
            let got = decrypt_decode(&ctx, &prod, &keys.secret);
            worst = worst.max(max_abs_error(&got, &want) / max_norm(&want));
        }
        Ok((
            worst < noise::MULTIPLICATIVE_RELATIVE,
            err_detail(worst, noise::MULTIPLICATIVE_RELATIVE),
        ))
    });
    record(&mut r, "scheme.hrot", || {
        let mut worst = 0.0f64;
        for &rot in &[1i64, 2, 5, n as i64 / 2] {
            for _ in 0..trials {
                let a = message(n, &mut rng);
                let ca = encrypt(
                    &ctx,
                    &encode(&ctx, &a, ctx.params().scale(), l)?,
                    &keys.secret,
                    &mut rng,
                );
                let got = decrypt_decode(&ctx, &hrot_with(&ctx, &ca, rot, &keys.rotations)?, &keys.secret);
                let want = rotate_slots(&a, rot);
                worst = worst.max(max_abs_error(&got, &want) / max_norm(&want));
            }
        }
        Ok((
            worst < noise::ROTATION_RELATIVE,
            err_detail(worst, noise::ROTATION_RELATIVE),
        ))
    });
    record(&mut r, "scheme.serialization_roundtrip", || {
        let a = message(n, &mut rng);
        let ct = encrypt(
            &ctx,
            &encode(&ctx, &a, ctx.params().scale(), l)?,
            &keys.secret,
            &mut rng,
        );
        let ok = Ciphertext::from_bytes(&ctx, &ct.to_bytes())? == ct
            && SecretKey::from_bytes(&ctx, &keys.secret.to_bytes())? == keys.secret
            && EvaluationKey::from_bytes(&ctx, &keys.mult.to_bytes())? == keys.mult;
        let bytes = ct.to_bytes();
        let truncated = Ciphertext::from_bytes(&ctx, &bytes[..bytes.len() - 1]).is_err();
        Ok((ok && truncated, String::new()))
    });

    r.extend(hdft_report(&ctx, 2, &Variant::ALL, cfg.seed ^ 0x5eed)?);

    record(&mut r, "oflimb.bit_identical_every_level", || {
        let tries = trials * 2;
        for t in 0..tries {
            let a = message(n, &mut rng);
            let scale = ctx.q(l.min(3)) as f64;
            let seed = PlaintextSeed::encode(&ctx, &a, scale, t as u64)?;
            for level in 0..=l {
                if of_limb_extend(&ctx, &seed, level)? != encode(&ctx, &a, scale, level)? {
                    return Ok((false, format!("seed {t} differs at level {level}")));
                }
            }
        }
        Ok((true, format!("{tries} seeds × {} levels", l + 1)))
    });
    record(&mut r, "oflimb.range_error", || {
        let mut seed = PlaintextSeed::encode(&ctx, &message(n, &mut rng), 1e6, 0)?;
        seed.q0_limb.values[0] = ctx.q(0);
        Ok((
            matches!(of_limb_extend(&ctx, &seed, 1), Err(Error::SeedRange { .. })),
            String::new(),
        ))
    });

    record(&mut r, "bootstrap.linear_transform_loop", || {
        bootstrap_loop(&cfg.params, &mut rng)
    });

    r.extend(cost::sizes_report());
    r.extend(cost::intensity_report(&cost::ParamProfile::ark())?);
    r.extend(cost::breakdown_report(&cost::ParamProfile::ark())?);
    Ok(r)
}

/// Decode a serialized object of any kind and re-encode it byte for byte.
pub fn check_fixture(ctx: &CkksContext, path: &Path) -> Outcome {
    serial::read_file(path, |data| {
        let kind = serial::peek_kind(data)?;
        let again = match kind {
            ObjectKind::Ciphertext => Ciphertext::from_bytes(ctx, data)?.to_bytes(),
            ObjectKind::Plaintext => Plaintext::from_bytes(ctx, data)?.to_bytes(),
            ObjectKind::SecretKey => SecretKey::from_bytes(ctx, data)?.to_bytes(),
            ObjectKind::EvaluationKey => EvaluationKey::from_bytes(ctx, data)?.to_bytes(),
            ObjectKind::PlaintextSeed => PlaintextSeed::from_bytes(ctx, data)?.to_bytes(),
            ObjectKind::DftPlan => EncodedDftPlan::from_bytes(ctx, data)?.to_bytes(ctx),
            ObjectKind::Limb => return Err(Error::Serialization("bare limbs are not standalone fixtures".into())),
        };
        Ok((again == data, format!("{kind:?}, {} bytes", data.len())))
    })
}

/// IDFT then DFT on one encrypted message under each listed variant: output
/// against the unencrypted reference, key loads against the Min-KS and
/// baseline counts, counted cost against the run's own log, and agreement
/// between variants.
pub fn hdft_report(ctx: &CkksContext, k: u32, variants: &[Variant], seed: u64) -> Result<Report> {
    let mut r = Report::new();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = ctx.slots();
    let shape = PlanShape::balanced(n, k)?;
    let idft = build_dft_plan(n, k, (shape.k1, shape.k2), DftDirection::Idft)?;
    let dft = build_dft_plan(n, k, (shape.k1, shape.k2), DftDirection::Dft)?;
    let l = ctx.max_level();
    let iters = idft.iterations.len();
    if 2 * iters > l {
        return Err(Error::InsufficientLevel {
            need: 2 * iters,
            have: l,
        });
    }
    let mut rotations = Vec::new();
    let mut plans = Vec::new();
    for &v in variants {
        let ei = encode_plan(ctx, &idft, v, l)?;
        let ed = encode_plan(ctx, &dft, v, l - iters)?;
        rotations.extend(ei.required_rotations());
        rotations.extend(ed.required_rotations());
        plans.push((v, ei, ed));
    }
    let keys = keygen(ctx, &rotations, &mut rng);
    let profile = cost::ParamProfile::from_params("desk", ctx.params());
    let m = message(n, &mut rng);
    let ct = encrypt(ctx, &encode(ctx, &m, ctx.params().scale(), l)?, &keys.secret, &mut rng);
    let want_coeffs = oracle::inverse_slot_transform(&m);
    let mut runs = Vec::new();
    for (v, ei, ed) in &plans {
        let name = v.name();
        let out = (|| -> Result<_> {
            let mid = hdft(ctx, &ct, ei, &keys.rotations)?;
            let back = hdft(ctx, &mid.ciphertext, ed, &keys.rotations)?;
            Ok((mid, back))
        })();
        match out {
            Ok((mid, back)) => {
                let e1 = max_abs_error(&decrypt_decode(ctx, &mid.ciphertext, &keys.secret), &want_coeffs);
                let got = decrypt_decode(ctx, &back.ciphertext, &keys.secret);
                let e2 = max_abs_error(&got, &m);
                r.check(
                    &format!("hdft.{name}.idft_matches_reference"),
                    e1 < noise::HDFT_ABSOLUTE,
                    err_detail(e1, noise::HDFT_ABSOLUTE),
                );
                r.check(
                    &format!("hdft.{name}.roundtrip"),
                    e2 < 2.0 * noise::HDFT_ABSOLUTE && back.ciphertext.level == l - 2 * iters,
                    format!(
                        "{}, level {}",
                        err_detail(e2, 2.0 * noise::HDFT_ABSOLUTE),
                        back.ciphertext.level
                    ),
                );
                let loads = mid.log.loads_per_iteration();
                let (pass, bound) = if v.minks() {
                    (
                        loads.iter().all(|&c| c == 2) && loads.len() == iters,
                        "exactly 2".to_string(),
                    )
                } else {
                    let b = (1 << shape.k1) + (1 << shape.k2) - 1;
                    (loads.iter().all(|&c| c >= b), format!("at least {b}"))
                };
                r.check(
                    &format!("hdft.{name}.evk_loads"),
                    pass,
                    format!("{loads:?} per iteration ({bound})"),
                );
                let counted = cost::PassDescription::from_run(ei, &mid)
                    .and_then(|desc| cost::hdft_pass_cost(&desc, &profile, *v, Some(&mid.log)));
                match counted {
                    Ok(c) => {
                        r.check(
                            &format!("hdft.{name}.cost_matches_log"),
                            c.evk_loads == mid.log.loads() && c.evk_loads_per_iteration() == loads,
                            format!("{} loads, {} ops/byte", c.evk_loads, fmt(c.ops_per_byte)),
                        );
                        r.cost(&c);
                    }
                    Err(e) => r.check(&format!("hdft.{name}.cost_matches_log"), false, format!("error: {e}")),
                }
                runs.push((*v, got));
            }
            Err(e) => r.check(&format!("hdft.{name}.roundtrip"), false, format!("error: {e}")),
        }
    }
    let out = |v: Variant| runs.iter().find(|(w, _)| *w == v).map(|(_, o)| o);
    if let (Some(b), Some(m)) = (out(Variant::Baseline), out(Variant::MinKs)) {
        let d = max_abs_error(m, b);
        r.check(
            "hdft.minks_equals_baseline",
            d < 2.0 * noise::HDFT_ABSOLUTE,
            err_detail(d, 2.0 * noise::HDFT_ABSOLUTE),
        );
    }
    // seeds extend to the very residues a full encode produces
    if let (Some(m), Some(o)) = (out(Variant::MinKs), out(Variant::MinKsOfLimb)) {
        let d = max_abs_error(o, m);
        r.check("hdft.oflimb_equals_minks", d == 0.0, format!("difference {d:e}"));
    }
    Ok(r)
}

fn four_step(rng: &mut ChaCha20Rng) -> Outcome {
    for (n, cases) in [(16usize, 0usize), (1 << 10, 20)] {
        let q = ntt_primes(59, n, 1, &[])?[0];
        let m = PrimeModulus::new(q)?;
        let t = NttTable::new(m, n)?;
        let f = FourStepNtt::new(&t)?;
        // a basis is enough for a linear map; random inputs on top
        let inputs = (0..n)
            .map(|i| {
                let mut v = vec![0u64; n];
                v[i] = 1;
                v
            })
            .take(if cases == 0 { n } else { 0 })
            .chain((0..cases).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()));
        for v in inputs {
            let a = Limb::new(v, m)?;
            if four_step_ntt(&a, &f, Direction::Forward, f.forward_twist())? != ntt(&a, &t, Direction::Forward)?
                || four_step_ntt(&a, &f, Direction::Inverse, f.inverse_twist())? != ntt(&a, &t, Direction::Inverse)?
            {
                return Ok((false, format!("mismatch at N = {n}")));
            }
        }
    }
    Ok((
        true,
        "N = 16 on every basis vector, N = 1024 on 20 random inputs".into(),
    ))
}

fn convolution(rng: &mut ChaCha20Rng) -> Outcome {
    for n in [8usize, 64, 256] {
        let q = ntt_primes(50, n, 1, &[])?[0];
        let m = PrimeModulus::new(q)?;
        let t = NttTable::new(m, n)?;
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let b: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let (mut fa, mut fb) = (a.clone(), b.clone());
        t.forward_inplace(&mut fa);
        t.forward_inplace(&mut fb);
        let mut prod: Vec<u64> = fa.iter().zip(&fb).map(|(&x, &y)| m.mul(x, y)).collect();
        t.inverse_inplace(&mut prod);
        if prod != oracle::negacyclic_convolution(&a, &b, q) {
            return Ok((false, format!("mismatch at N = {n}")));
        }
    }
    Ok((true, "N = 8, 64, 256 against the schoolbook product".into()))
}

fn bconv(rng: &mut ChaCha20Rng) -> Outcome {
    let n = 256;
    let src_primes = ntt_primes(50, n, 3, &[])?;
    let dst_primes = ntt_primes(45, n, 4, &src_primes)?;
    let src = LimbBasis::from_primes(&src_primes, n, BasisKind::Special)?;
    let dst = LimbBasis::from_primes(&dst_primes, n, BasisKind::Ciphertext)?;
    let table = BaseTable::new(&src, &dst)?;
    let limbs: Vec<Vec<u64>> = src_primes
        .iter()
        .map(|&q| (0..n).map(|_| rng.gen_range(0..q)).collect())
        .collect();
    let p = RnsPoly::from_limbs(&src, limbs.clone(), Representation::Coefficient)?;
    let out = base_convert(&p, &dst, &table)?;
    let big_q = oracle::product(&src_primes);
    let mut max_k = 0;
    for c in 0..n {
        let res: Vec<u64> = limbs.iter().map(|l| l[c]).collect();
        let x = oracle::crt_centered(&res, &src_primes).mod_floor(&big_q);
        let k = (0..src_primes.len() as u64).find(|&k| {
            let y = &x + &big_q * BigInt::from(k);
            dst_primes
                .iter()
                .enumerate()
                .all(|(i, &q)| out.limb(i)[c] == oracle::reduce(&y, q))
        });
        match k {
            Some(k) => max_k = max_k.max(k),
            None => return Ok((false, format!("coefficient {c} is not x + kQ"))),
        }
    }
    Ok((true, format!("slack k ≤ {max_k} < {}", src_primes.len())))
}

fn automorphisms(rng: &mut ChaCha20Rng) -> Outcome {
    let n = 64;
    let primes = ntt_primes(40, n, 2, &[])?;
    let basis = LimbBasis::from_primes(&primes, n, BasisKind::Ciphertext)?;
    let mut poly = || -> Result<RnsPoly> {
        let limbs = primes
            .iter()
            .map(|&q| (0..n).map(|_| rng.gen_range(0..q)).collect())
            .collect();
        Ok(RnsPoly::from_limbs(&basis, limbs, Representation::Coefficient)?.evaluated())
    };
    let (a, b) = (poly()?, poly()?);
    for g in (1..2 * n).step_by(2) {
        let h = (g * 5) % (2 * n);
        let ok = apply_galois(&a.mul(&b)?, g) == apply_galois(&a, g).mul(&apply_galois(&b, g))?
            && apply_galois(&a.add(&b)?, g) == apply_galois(&a, g).add(&apply_galois(&b, g))?
            && apply_galois(&apply_galois(&a, g), h) == apply_galois(&a, g * h % (2 * n))
            && apply_galois(&a.clone().coefficients(), g).evaluated() == apply_galois(&a, g);
        if !ok {
            return Ok((false, format!("law fails for g = {g}")));
        }
    }
    Ok((true, "all 64 odd g at N = 64".into()))
}

/// mod-raise, H-IDFT, reference modular reduction, H-DFT on a full-slot ring
/// derived from the configured parameters.
fn bootstrap_loop(params: &CkksParams, rng: &mut ChaCha20Rng) -> Outcome {
    let p = CkksParams {
        ring_degree: 2 * params.slots,
        scale_bits: 50.0,
        ..params.clone()
    };
    let n = p.slots;
    let k = 2.min(n.trailing_zeros());
    let shape = PlanShape::balanced(n, k)?;
    let idft = build_dft_plan(n, k, (shape.k1, shape.k2), DftDirection::Idft)?;
    let dft = build_dft_plan(n, k, (shape.k1, shape.k2), DftDirection::Dft)?;
    let ctx = CkksContext::new(p)?;
    let l = ctx.max_level();
    let iters = idft.iterations.len();
    let ei = encode_plan(&ctx, &idft, Variant::MinKsOfLimb, l)?;
    let ed = encode_plan(&ctx, &dft, Variant::MinKsOfLimb, l - iters)?;
    let mut rots = ei.required_rotations();
    rots.extend(ed.required_rotations());
    let keys = keygen(&ctx, &rots, rng);
    let m = message(n, rng);
    let ct = encrypt(&ctx, &encode(&ctx, &m, ctx.params().scale(), 0)?, &keys.secret, rng);
    let raised = mod_raise(&ctx, &ct)?;
    let coeffs = hdft(&ctx, &raised, &ei, &keys.rotations)?.ciphertext;
    let reduced = eval_mod_reference(&ctx, &coeffs, &keys.secret, rng)?;
    let out = hdft(&ctx, &reduced, &ed, &keys.rotations)?.ciphertext;
    let err = max_abs_error(&decrypt_decode(&ctx, &out, &keys.secret), &m);
    let levels_ok = raised.level == l && coeffs.level == l - iters && out.level == l - 2 * iters;
    Ok((
        err < noise::BOOTSTRAP_ABSOLUTE && levels_ok,
        format!(
            "{}, final level {}",
            err_detail(err, noise::BOOTSTRAP_ABSOLUTE),
            out.level
        ),
    ))
}

/// Readable one-line summary of a finished run.
pub fn summary(r: &Report) -> String {
    format!(
        "{} of {} checks passed{}",
        r.checks.len() - r.failures(),
        r.checks.len(),
        if r.all_passed() {
            String::new()
        } else {
            format!(", {} failed", fmt(r.failures() as f64))
        }
    )
}
