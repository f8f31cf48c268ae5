//! Acceptance suite: one verdict line per criterion, nonzero exit if any
//! fails. Runs without the libtest harness so the lines always print.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use rns_ckks::ckks::noise::{self, max_abs_error, max_norm};
use rns_ckks::ckks::*;
use rns_ckks::cost::*;
use rns_ckks::hdft::*;
use rns_ckks::oracle;
use rns_ckks::poly::{apply_galois, base_convert, BaseTable, BasisKind, LimbBasis, Representation, RnsPoly};
use rns_ckks::zq::prime::ntt_primes;
use rns_ckks::zq::{four_step_ntt, ntt, Direction, FourStepNtt, Limb, NttTable, PrimeModulus};

type Verdict = Result<String, String>;
type Schedule = Box<dyn Fn(usize) -> f64>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn within(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs()
}

fn message(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn data_sizes_exact() -> Verdict {
    let mut cells = 0;
    for (p, want) in reference_rows() {
        for (got, mib) in data_sizes(&p).as_array().into_iter().zip(want) {
            let expect = (mib * (1u64 << 20) as f64) as u64;
            ensure(got == expect, format!("{}: {got} B, expected {mib} MiB", p.name))?;
            cells += 1;
        }
    }
    let report = sizes_report();
    ensure(
        report.all_passed() && report.checks.len() == 12,
        "sizes report disagrees",
    )?;
    Ok(format!("{cells}/12 cells byte-exact"))
}

fn intensity_figures() -> Verdict {
    let ark = ParamProfile::ark();
    let mut parts = Vec::new();
    for dir in [DftDirection::Idft, DftDirection::Dft] {
        let c = VariantComparison::analytic(&default_pass(&ark, dir).map_err(e)?, &ark).map_err(e)?;
        let t = ark_targets(dir);
        for (name, got, want) in [
            ("gain", c.minks_gain(), t.gain),
            ("ops/byte", c.final_intensity(), t.final_ops_per_byte),
            ("reduction", c.traffic_reduction(), t.reduction),
        ] {
            ensure(
                within(got, want, 0.15),
                format!("{} {name} {got:.4} vs {want} ±15%", dir.name()),
            )?;
            parts.push(format!("{} {name} {}", dir.name(), fmt(got)));
        }
    }
    Ok(parts.join(", "))
}

fn utilization() -> Verdict {
    let ark = ParamProfile::ark();
    let m = MachineProfile::scaled_f1();
    let mut parts = Vec::new();
    for dir in [DftDirection::Idft, DftDirection::Dft] {
        let c = VariantComparison::analytic(&default_pass(&ark, dir).map_err(e)?, &ark).map_err(e)?;
        let t = ark_targets(dir);
        let u = utilization_bound(&m, t.single_use_bytes, c.baseline.modular_mults as f64);
        ensure(
            within(u, t.utilization, 0.20),
            format!("{} {:.4}% vs {}% ±20%", dir.name(), 100.0 * u, 100.0 * t.utilization),
        )?;
        parts.push(format!("{} {:.2}%", dir.name(), 100.0 * u));
    }
    Ok(parts.join(", "))
}

fn keyswitch_breakdown() -> Verdict {
    let ark = ParamProfile::ark();
    let max = keyswitch_mults(&ark.with_dnum(ark.max_level + 1).map_err(e)?, ark.max_level);
    let own = keyswitch_mults(&ark, ark.max_level);
    for (name, got, want) in [
        ("NTT share at max dnum", max.ntt_share(), 0.733),
        ("NTT share", own.ntt_share(), 0.548),
        ("BConv share", own.bconv_share(), 0.342),
    ] {
        ensure(
            (got - want).abs() <= 0.03,
            format!("{name} {:.2}% vs {:.1}% ±3 pp", 100.0 * got, 100.0 * want),
        )?;
    }
    Ok(format!(
        "NTT {:.2}% at max dnum, NTT {:.2}% / BConv {:.2}% at dnum {}",
        100.0 * max.ntt_share(),
        100.0 * own.ntt_share(),
        100.0 * own.bconv_share(),
        ark.dnum
    ))
}

fn transfer_formulas() -> Verdict {
    let mut count = 0;
    let mut profiles = vec![
        ParamProfile::ark(),
        ParamProfile::lattigo(),
        ParamProfile::hundred_x(),
        ParamProfile::f1(),
    ];
    for p in profiles.clone() {
        for d in 1..=p.max_level + 1 {
            if let Ok(q) = p.with_dnum(d) {
                profiles.push(q);
            }
        }
    }
    for p in &profiles {
        let row = ((p.alpha + p.max_level + 1) * p.ring_degree) as u64;
        let alt = distribution_transfer(p, TransferPolicy::Alternating);
        let limb = distribution_transfer(p, TransferPolicy::LimbWiseOnly);
        ensure(
            alt == (p.dnum as u64 + 2) * row,
            format!("{} dnum {}: alternating {alt}", p.name, p.dnum),
        )?;
        if p.dnum > 2 {
            ensure(
                limb == 2 * p.dnum as u64 * row,
                format!("{} dnum {}: limb-wise {limb}", p.name, p.dnum),
            )?;
        }
        count += 1;
    }
    Ok(format!("{count} profiles"))
}

fn scheme_correctness() -> Verdict {
    let ctx = CkksContext::new(CkksParams::desk()).map_err(e)?;
    let n = ctx.slots();
    let l = ctx.max_level();
    let rots = [1i64, 2, 5, n as i64 / 2];
    let keys = keygen(&ctx, &rots, &mut ChaCha20Rng::seed_from_u64(600));
    let scale = ctx.params().scale();
    let trials = 100u64;
    // worst relative error per operation: roundtrip, add, pmult, hmult, rot
    let worst = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<[f64; 5], String> {
            let mut rng = ChaCha20Rng::seed_from_u64(0x600 + t);
            let (a, b) = (message(n, &mut rng), message(n, &mut rng));
            let ca = encrypt(&ctx, &encode(&ctx, &a, scale, l).map_err(e)?, &keys.secret, &mut rng);
            let cb = encrypt(&ctx, &encode(&ctx, &b, scale, l).map_err(e)?, &keys.secret, &mut rng);
            let rel = |got: &[Complex64], want: &[Complex64]| max_abs_error(got, want) / max_norm(want);
            let sum: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let fresh = rel(&decrypt_decode(&ctx, &ca, &keys.secret), &a);
            let add = rel(&decrypt_decode(&ctx, &hadd(&ca, &cb).map_err(e)?, &keys.secret), &sum);
            let pb = encode(&ctx, &b, ctx.q(l) as f64, l).map_err(e)?;
            let pm = hrescale(&ctx, &pmult(&ca, &pb).map_err(e)?).map_err(e)?;
            let pmul = rel(&decrypt_decode(&ctx, &pm, &keys.secret), &prod);
            let hm = hrescale(&ctx, &hmult(&ctx, &ca, &cb, &keys.mult).map_err(e)?).map_err(e)?;
            let hmul = rel(&decrypt_decode(&ctx, &hm, &keys.secret), &prod);
            let mut rot = 0.0f64;
            for &r in &rots {
                let c = hrot_with(&ctx, &ca, r, &keys.rotations).map_err(e)?;
                rot = rot.max(rel(&decrypt_decode(&ctx, &c, &keys.secret), &rotate_slots(&a, r)));
            }
            Ok([fresh, add, pmul, hmul, rot])
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold([0.0f64; 5], |acc, w| std::array::from_fn(|i| acc[i].max(w[i])));
    let bounds = [
        noise::FRESH_RELATIVE,
        noise::ADDITIVE_RELATIVE,
        noise::MULTIPLICATIVE_RELATIVE,
        noise::MULTIPLICATIVE_RELATIVE,
        noise::ROTATION_RELATIVE,
    ];
    let names = ["roundtrip", "HAdd", "PMult", "HMult", "HRot"];
    for i in 0..5 {
        ensure(
            worst[i] < bounds[i],
            format!("{} {:.3e} ≥ {:.3e}", names[i], worst[i], bounds[i]),
        )?;
    }
    Ok(format!(
        "{trials} trials each, worst relative error {}",
        names
            .iter()
            .zip(worst)
            .map(|(n, w)| format!("{n} {w:.1e}"))
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

fn minks_equivalence() -> Verdict {
    let ctx = CkksContext::new(CkksParams::desk()).map_err(e)?;
    let n = ctx.slots();
    let l = ctx.max_level();
    let mut parts = Vec::new();
    for k in [2u32, 3] {
        let shape = PlanShape::balanced(n, k).map_err(e)?;
        for dir in [DftDirection::Idft, DftDirection::Dft] {
            let plan = build_dft_plan(n, k, (shape.k1, shape.k2), dir).map_err(e)?;
            let base = encode_plan(&ctx, &plan, Variant::Baseline, l).map_err(e)?;
            let minks = encode_plan(&ctx, &plan, Variant::MinKs, l).map_err(e)?;
            let mut rots = base.required_rotations();
            rots.extend(minks.required_rotations());
            let mut rng = ChaCha20Rng::seed_from_u64(700 + k as u64);
            let keys = keygen(&ctx, &rots, &mut rng);
            let m = message(n, &mut rng);
            let ct = encrypt(
                &ctx,
                &encode(&ctx, &m, ctx.params().scale(), l).map_err(e)?,
                &keys.secret,
                &mut rng,
            );
            let rb = hdft_baseline(&ctx, &ct, &base, &keys.rotations).map_err(e)?;
            let rm = hdft_minks(&ctx, &ct, &minks, &keys.rotations).map_err(e)?;
            let want = plan.apply_plain(&m);
            let ob = decrypt_decode(&ctx, &rb.ciphertext, &keys.secret);
            let om = decrypt_decode(&ctx, &rm.ciphertext, &keys.secret);
            let eb = max_abs_error(&ob, &want);
            ensure(eb < noise::HDFT_ABSOLUTE, format!("k={k} baseline error {eb:.3e}"))?;
            let d = max_abs_error(&om, &ob);
            ensure(
                d < 2.0 * noise::HDFT_ABSOLUTE,
                format!("k={k} {}: variants differ by {d:.3e}", dir.name()),
            )?;
            let lm = rm.log.loads_per_iteration();
            let lb = rb.log.loads_per_iteration();
            let bound = (1usize << shape.k1) + (1 << shape.k2) - 1;
            ensure(
                lm.len() == plan.iterations.len() && lm.iter().all(|&c| c == 2),
                format!("k={k} Min-KS loads {lm:?}"),
            )?;
            ensure(
                lb.iter().all(|&c| c >= bound),
                format!("k={k} baseline loads {lb:?} < {bound}"),
            )?;
            parts.push(format!("k={k} {} loads {lm:?} vs {lb:?}", dir.name()));
        }
    }
    Ok(parts.join("; "))
}

fn of_limb_exactness() -> Verdict {
    let ctx = CkksContext::new(CkksParams::desk()).map_err(e)?;
    let n = ctx.slots();
    let l = ctx.max_level();
    let mut rng = ChaCha20Rng::seed_from_u64(800);
    for t in 0..100u64 {
        let m = message(n, &mut rng);
        let scale = 2f64.powi(rng.gen_range(20..=45));
        let seed = PlaintextSeed::encode(&ctx, &m, scale, t).map_err(e)?;
        for level in 0..=l {
            let full = encode(&ctx, &m, scale, level).map_err(e)?;
            let ext = of_limb_extend(&ctx, &seed, level).map_err(e)?;
            ensure(ext == full, format!("seed {t} differs at level {level}"))?;
        }
    }
    let mut bad = PlaintextSeed::encode(&ctx, &message(n, &mut rng), 2f64.powi(30), 0).map_err(e)?;
    bad.q0_limb.values[3] = ctx.q(0) + 1;
    ensure(
        matches!(of_limb_extend(&ctx, &bad, l), Err(rns_ckks::Error::SeedRange { .. })),
        "out-of-range seed accepted",
    )?;
    Ok(format!(
        "100 seeds × {} levels bit-identical, range error raised",
        l + 1
    ))
}

fn kernel_oracles() -> Verdict {
    let mut rng = ChaCha20Rng::seed_from_u64(900);
    // four-step: exhaustive basis at N = 16, 1000 random inputs at N = 1024
    for (n, random) in [(16usize, 0usize), (1 << 10, 1000)] {
        let q = ntt_primes(59, n, 1, &[]).map_err(e)?[0];
        let m = PrimeModulus::new(q).map_err(e)?;
        let t = NttTable::new(m, n).map_err(e)?;
        let f = FourStepNtt::new(&t).map_err(e)?;
        let unit = (0..if random == 0 { n } else { 0 }).map(|i| {
            let mut v = vec![0u64; n];
            v[i] = 1;
            v
        });
        let inputs: Vec<Vec<u64>> = unit
            .chain((0..random).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()))
            .collect();
        for v in inputs {
            let a = Limb::new(v, m).map_err(e)?;
            for (dir, tw) in [
                (Direction::Forward, f.forward_twist()),
                (Direction::Inverse, f.inverse_twist()),
            ] {
                ensure(
                    four_step_ntt(&a, &f, dir, tw).map_err(e)? == ntt(&a, &t, dir).map_err(e)?,
                    format!("four-step differs at N = {n}"),
                )?;
            }
        }
    }
    // convolution theorem
    for log_n in 2..=8 {
        let n = 1usize << log_n;
        let q = ntt_primes(50, n, 1, &[]).map_err(e)?[0];
        let m = PrimeModulus::new(q).map_err(e)?;
        let t = NttTable::new(m, n).map_err(e)?;
        for _ in 0..5 {
            let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
            let b: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
            let (mut fa, mut fb) = (a.clone(), b.clone());
            t.forward_inplace(&mut fa);
            t.forward_inplace(&mut fb);
            let mut p: Vec<u64> = fa.iter().zip(&fb).map(|(&x, &y)| m.mul(x, y)).collect();
            t.inverse_inplace(&mut p);
            ensure(
                p == oracle::negacyclic_convolution(&a, &b, q),
                format!("convolution at N = {n}"),
            )?;
        }
    }
    // base conversion: x + kQ with 0 ≤ k < source limbs
    let n = 1 << 10;
    let mut max_k = 0;
    for (s, d) in [(1usize, 2usize), (3, 4), (4, 5)] {
        let src_p = ntt_primes(55, n, s, &[]).map_err(e)?;
        let dst_p = ntt_primes(48, n, d, &src_p).map_err(e)?;
        let src = LimbBasis::from_primes(&src_p, n, BasisKind::Special).map_err(e)?;
        let dst = LimbBasis::from_primes(&dst_p, n, BasisKind::Ciphertext).map_err(e)?;
        let table = BaseTable::new(&src, &dst).map_err(e)?;
        let limbs: Vec<Vec<u64>> = src_p
            .iter()
            .map(|&q| (0..n).map(|_| rng.gen_range(0..q)).collect())
            .collect();
        let p = RnsPoly::from_limbs(&src, limbs.clone(), Representation::Coefficient).map_err(e)?;
        let out = base_convert(&p, &dst, &table).map_err(e)?;
        let big_q = oracle::product(&src_p);
        for c in 0..n {
            let res: Vec<u64> = limbs.iter().map(|l| l[c]).collect();
            let x = oracle::crt_centered(&res, &src_p).mod_floor(&big_q);
            let k = (0..s as u64)
                .find(|&k| {
                    let y = &x + &big_q * BigInt::from(k);
                    dst_p
                        .iter()
                        .enumerate()
                        .all(|(i, &q)| out.limb(i)[c] == oracle::reduce(&y, q))
                })
                .ok_or_else(|| format!("{s}→{d} limbs: coefficient {c} outside x + kQ"))?;
            max_k = max_k.max(k);
        }
    }
    // automorphisms
    for n in [8usize, 64] {
        let primes = ntt_primes(40, n, 2, &[]).map_err(e)?;
        let basis = LimbBasis::from_primes(&primes, n, BasisKind::Ciphertext).map_err(e)?;
        let mut poly = || {
            let limbs = primes
                .iter()
                .map(|&q| (0..n).map(|_| rng.gen_range(0..q)).collect())
                .collect();
            RnsPoly::from_limbs(&basis, limbs, Representation::Coefficient).map(|p| p.evaluated())
        };
        let (a, b) = (poly().map_err(e)?, poly().map_err(e)?);
        for g in (1..2 * n).step_by(2) {
            for h in [3usize, 5, 2 * n - 1] {
                let ok = apply_galois(&a.mul(&b).map_err(e)?, g)
                    == apply_galois(&a, g).mul(&apply_galois(&b, g)).map_err(e)?
                    && apply_galois(&a.add(&b).map_err(e)?, g)
                        == apply_galois(&a, g).add(&apply_galois(&b, g)).map_err(e)?
                    && apply_galois(&apply_galois(&a, g), h) == apply_galois(&a, g * h % (2 * n));
                ensure(ok, format!("automorphism law fails at N = {n}, g = {g}"))?;
            }
        }
    }
    Ok(format!(
        "four-step, convolution, base conversion (slack k ≤ {max_k}), automorphism laws"
    ))
}

fn bootstrap_roundtrip() -> Verdict {
    let ctx = CkksContext::new(CkksParams::desk_bootstrap()).map_err(e)?;
    let n = ctx.slots();
    let l = ctx.max_level();
    let shape = PlanShape::balanced(n, 2).map_err(e)?;
    let idft = build_dft_plan(n, 2, (shape.k1, shape.k2), DftDirection::Idft).map_err(e)?;
    let dft = build_dft_plan(n, 2, (shape.k1, shape.k2), DftDirection::Dft).map_err(e)?;
    let iters = idft.iterations.len();
    let mut parts = Vec::new();
    for v in [Variant::Baseline, Variant::MinKsOfLimb] {
        let ei = encode_plan(&ctx, &idft, v, l).map_err(e)?;
        let ed = encode_plan(&ctx, &dft, v, l - iters).map_err(e)?;
        let mut rots = ei.required_rotations();
        rots.extend(ed.required_rotations());
        let mut rng = ChaCha20Rng::seed_from_u64(1000);
        let keys = keygen(&ctx, &rots, &mut rng);
        let m = message(n, &mut rng);
        let ct = encrypt(
            &ctx,
            &encode(&ctx, &m, ctx.params().scale(), 0).map_err(e)?,
            &keys.secret,
            &mut rng,
        );
        let raised = mod_raise(&ctx, &ct).map_err(e)?;
        ensure(raised.level == l, format!("mod-raise lands at {}", raised.level))?;
        let coeffs = hdft(&ctx, &raised, &ei, &keys.rotations).map_err(e)?.ciphertext;
        ensure(coeffs.level == l - iters, format!("IDFT ends at {}", coeffs.level))?;
        let reduced = eval_mod_reference(&ctx, &coeffs, &keys.secret, &mut rng).map_err(e)?;
        ensure(reduced.level == coeffs.level, "reference reduction changed the level")?;
        let out = hdft(&ctx, &reduced, &ed, &keys.rotations).map_err(e)?.ciphertext;
        ensure(out.level == l - 2 * iters, format!("DFT ends at {}", out.level))?;
        let err = max_abs_error(&decrypt_decode(&ctx, &out, &keys.secret), &m);
        ensure(
            err < noise::BOOTSTRAP_ABSOLUTE,
            format!("{}: error {err:.3e} ≥ {:.3e}", v.name(), noise::BOOTSTRAP_ABSOLUTE),
        )?;
        parts.push(format!("{} error {err:.2e}", v.name()));
    }
    Ok(format!(
        "levels 0 → {l} → {} → {}, {}",
        l - iters,
        l - 2 * iters,
        parts.join(", ")
    ))
}

fn amortized_time_identity() -> Verdict {
    let ark = ParamProfile::ark();
    let usable = (ark.max_level - ark.boot_levels.unwrap()) as f64;
    let slots = ark.slots as f64;
    // dyadic inputs keep every step exact
    let c = 2f64.powi(-10);
    let cases: [(f64, Schedule, f64); 3] = [
        (1.0, Box::new(|_| 0.0), 1.0 / usable / slots),
        (0.5, Box::new(move |l| l as f64 * c), (0.5 + 36.0 * c) / usable / slots),
        (0.25, Box::new(move |_| c), (0.25 + usable * c) / usable / slots),
    ];
    for (t_boot, t_mult, want) in cases {
        let got = tas_metric(t_boot, t_mult, &ark).map_err(e)?;
        ensure(got == want, format!("{got:e} ≠ {want:e}"))?;
    }
    let t_boot = 14.3e-9 * usable * slots;
    let tas = tas_metric(t_boot, |_| 0.0, &ark).map_err(e)?;
    ensure((tas - 14.3e-9).abs() < 1e-18, format!("{tas:e}"))?;
    Ok(format!("closed forms exact, identity gives {} ns", fmt(tas * 1e9)))
}

fn main() {
    // name, check, runtime limit in seconds
    type Criterion = (&'static str, fn() -> Verdict, Option<u64>);
    let criteria: [Criterion; 11] = [
        ("1 data sizes", data_sizes_exact, Some(1)),
        ("2 transform intensity", intensity_figures, Some(1)),
        ("3 utilization bound", utilization, Some(1)),
        ("4 key-switch breakdown", keyswitch_breakdown, Some(1)),
        ("5 transfer formulas", transfer_formulas, None),
        ("6 scheme correctness", scheme_correctness, Some(60)),
        ("7 Min-KS equivalence", minks_equivalence, Some(60)),
        ("8 OF-Limb exactness", of_limb_exactness, Some(30)),
        ("9 kernel oracles", kernel_oracles, Some(120)),
        ("10 bootstrap transform loop", bootstrap_roundtrip, Some(120)),
        ("11 amortized time identity", amortized_time_identity, None),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let verdict = f();
        let took = start.elapsed();
        let verdict = match (verdict, limit) {
            (Ok(d), Some(s)) if took > Duration::from_secs(s) => Err(format!("{d}; took {took:.1?}, limit {s} s")),
            (v, _) => v,
        };
        match verdict {
            Ok(d) => println!("criterion {name}: PASS ({took:.2?}) {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {name}: FAIL ({took:.2?}) {d}");
            }
        }
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
