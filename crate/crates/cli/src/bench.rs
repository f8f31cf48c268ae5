//! Quick wall-clock timings. Numbers vary run to run, so this report carries
//! no checks; the criterion benches are the careful measurement.

use std::time::Instant;

use anyhow::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rns_ckks::ckks::*;
use rns_ckks::cost::{fmt, Report, Table};
use rns_ckks::hdft::{build_dft_plan, encode_plan, hdft, DftDirection, PlanShape, Variant};
use rns_ckks::poly::{base_convert, BaseTable, RnsPoly};

fn median_ms(reps: usize, mut f: impl FnMut()) -> f64 {
    let mut t: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    t.sort_by(|a, b| a.total_cmp(b));
    t[t.len() / 2]
}

pub fn run(params: CkksParams, reps: usize, seed: u64) -> Result<Report> {
    let ctx = CkksContext::new(params)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = ctx.slots();
    let l = ctx.max_level();
    let shape = PlanShape::balanced(n, 2.min(n.trailing_zeros()))?;
    let plan = build_dft_plan(n, shape.k, (shape.k1, shape.k2), DftDirection::Idft)?;
    let encoded = Variant::ALL
        .into_iter()
        .map(|v| encode_plan(&ctx, &plan, v, l))
        .collect::<rns_ckks::Result<Vec<_>>>()?;
    let mut rotations: Vec<i64> = encoded.iter().flat_map(|e| e.required_rotations()).collect();
    rotations.push(1);
    let keys = keygen(&ctx, &rotations, &mut rng);
    let msg: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
    let ct = encrypt(
        &ctx,
        &encode(&ctx, &msg, ctx.params().scale(), l)?,
        &keys.secret,
        &mut rng,
    );

    let basis = ctx.level_basis(l);
    let limbs = basis
        .primes()
        .iter()
        .map(|&q| (0..ctx.degree()).map(|_| rng.gen_range(0..q)).collect())
        .collect();
    let poly = RnsPoly::from_limbs(&basis, limbs, rns_ckks::poly::Representation::Coefficient)?;
    let p_basis = ctx.p_basis().clone();
    let table = BaseTable::new(&basis, &p_basis)?;

    let mut t = Table::new(
        &format!("median wall time over {reps} runs, N = {}, L = {l}", ctx.degree()),
        &["kernel", "ms"],
    );
    let mut report = Report::new();
    let mut time = |name: &str, ms: f64| {
        t.row(vec![name.to_string(), format!("{ms:.3}")]);
        report.record(&format!("bench.{name}"), "-", fmt(ms), "ms");
    };
    time("ntt_all_limbs", median_ms(reps, || drop(poly.clone().evaluated())));
    time(
        "base_convert",
        median_ms(reps, || drop(base_convert(&poly, &p_basis, &table))),
    );
    let ct2 = ct.clone();
    time(
        "hmult_relin",
        median_ms(reps, || drop(hmult(&ctx, &ct, &ct2, &keys.mult))),
    );
    time(
        "hrot",
        median_ms(reps, || drop(hrot_with(&ctx, &ct, 1, &keys.rotations))),
    );
    time("hrescale", median_ms(reps, || drop(hrescale(&ctx, &ct))));
    for (v, e) in Variant::ALL.iter().zip(&encoded) {
        time(
            &format!("idft_{}", v.name()),
            median_ms(reps, || drop(hdft(&ctx, &ct, e, &keys.rotations))),
        );
    }
    report.tables.push(t);
    Ok(report)
}
