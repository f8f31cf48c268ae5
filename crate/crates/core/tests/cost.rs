use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rns_ckks::ckks::*;
use rns_ckks::cost::*;
use rns_ckks::hdft::*;
use rns_ckks::Error;

fn within(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs()
}

#[test]
fn data_sizes_match_reference_rows_exactly() {
    for (p, mib) in reference_rows() {
        let got = data_sizes(&p).as_array();
        for (g, w) in got.iter().zip(mib) {
            assert_eq!(*g, (w * MIB as f64) as u64, "{}", p.name);
        }
    }
}

#[test]
fn single_piece_key_size() {
    let p = ParamProfile::ark().with_dnum(1).unwrap();
    assert_eq!(p.alpha, 24);
    let s = data_sizes(&p);
    assert_eq!(s.evk, (2 * (24 + 24) * (1 << 16) * 8) as u64);
    assert!(ParamProfile::ark().with_dnum(5).is_err());
    assert!(ParamProfile::new("bad", 10, 7, None, 3, 3, 8).is_err());
}

#[test]
fn twist_tables_would_be_large() {
    assert_eq!(twist_storage_words(&ParamProfile::ark()) * 8, 30 * MIB);
}

#[test]
fn degenerate_keyswitch_expands_term_by_term() {
    // L = 0, dnum = 1 and α = 1: one limb in Q, one special prime.
    let p = ParamProfile::new("tiny", 4, 0, None, 1, 1, 8).unwrap();
    let n = 16u64;
    let t = n / 2 * 4 + n;
    // raise: INTT of d_0, BConv 1 → 1 (one scaling, one product), NTT on p_0
    let raise_ntt = 2 * t;
    let raise_bconv = n + n;
    // two key rows over {q_0, p_0}
    let inner = 2 * 2 * n;
    // lower two results: INTT on p_0, BConv 1 → 1, NTT on q_0, scale by P⁻¹
    let lower_ntt = 2 * (t + t);
    let lower_bconv = 2 * (n + n);
    let lower_ew = 2 * n;
    let got = keyswitch_mults(&p, 0);
    assert_eq!(got.ntt, raise_ntt + lower_ntt);
    assert_eq!(got.bconv, raise_bconv + lower_bconv);
    assert_eq!(got.elementwise, inner + lower_ew);
}

#[test]
fn keyswitch_breakdown_shares() {
    let ark = ParamProfile::ark();
    let max = ark.with_dnum(24).unwrap();
    let m = keyswitch_mults(&max, 23);
    println!("max dnum: ntt {:.4}", m.ntt_share());
    assert!((m.ntt_share() - 0.733).abs() <= 0.03);
    let a = keyswitch_mults(&ark, 23);
    println!("ark: ntt {:.4} bconv {:.4}", a.ntt_share(), a.bconv_share());
    assert!((a.ntt_share() - 0.548).abs() <= 0.03);
    assert!((a.bconv_share() - 0.342).abs() <= 0.03);
}

#[test]
fn ark_passes_reproduce_intensity_figures() {
    let p = ParamProfile::ark();
    let cases = [
        (DftDirection::Idft, 2.6, 11.1, 0.88),
        (DftDirection::Dft, 2.0, 9.6, 0.78),
    ];
    for (dir, gain, final_ops, reduction) in cases {
        let c = VariantComparison::analytic(&PassDescription::ark(dir), &p).unwrap();
        println!(
            "{}: gain {:.3} final {:.3} reduction {:.3} overhead {:.3} pt share {:.3}",
            dir.name(),
            c.minks_gain(),
            c.final_intensity(),
            c.traffic_reduction(),
            c.of_limb_overhead(),
            c.baseline.plaintext_share()
        );
        assert!(within(c.minks_gain(), gain, 0.15));
        assert!(within(c.final_intensity(), final_ops, 0.15));
        assert!(within(c.traffic_reduction(), reduction, 0.15));
        assert_eq!(c.minks.evk_loads, 6);
        assert_eq!(c.baseline.evk_loads, 40);
    }
}

#[test]
fn ark_single_use_data_and_side_figures() {
    let p = ParamProfile::ark();
    let idft = VariantComparison::analytic(&PassDescription::ark(DftDirection::Idft), &p).unwrap();
    let dft = VariantComparison::analytic(&PassDescription::ark(DftDirection::Dft), &p).unwrap();
    // single-use data of the baseline, in GB
    assert!(within(idft.baseline.offchip_bytes() as f64 / 1e9, 6.4, 0.15));
    assert!(within(dft.baseline.offchip_bytes() as f64 / 1e9, 0.6, 0.15));
    // plaintext share of baseline traffic and the extra work of limb regeneration
    assert!(within(idft.baseline.plaintext_share(), 0.275, 0.2));
    assert!(within(dft.baseline.plaintext_share(), 0.409, 0.2));
    assert!(within(idft.of_limb_overhead(), 0.229, 0.2));
    assert!(within(dft.of_limb_overhead(), 0.241, 0.2));
}

#[test]
fn utilization_of_scaled_accelerator() {
    let m = MachineProfile::scaled_f1();
    let p = ParamProfile::ark();
    for (dir, bytes, want) in [(DftDirection::Idft, 6.4e9, 0.0861), (DftDirection::Dft, 0.6e9, 0.1332)] {
        let work = hdft_pass_cost(&PassDescription::ark(dir), &p, Variant::Baseline, None)
            .unwrap()
            .modular_mults as f64;
        let u = utilization_bound(&m, bytes, work);
        println!("{}: utilization {u:.4}", dir.name());
        assert!(within(u, want, 0.2));
    }
}

#[test]
fn utilization_saturates() {
    let m = MachineProfile::scaled_f1();
    let bytes = 3e9;
    let capacity = 40_960.0 * 1e9 * (bytes / 3e12);
    assert_eq!(utilization_bound(&m, bytes, capacity), 1.0);
    assert_eq!(utilization_bound(&m, 0.0, 1e9), 1.0);
    assert_eq!(utilization_bound(&m, 1e-30, 1e9), 1.0);
    assert!(MachineProfile::new("x", 0, 1.0, 1.0, 1).is_err());
}

#[test]
fn distribution_transfer_formulas() {
    let ark = ParamProfile::ark();
    let row = 30 * (1u64 << 16);
    assert_eq!(distribution_transfer(&ark, TransferPolicy::Alternating), 6 * row);
    assert_eq!(distribution_transfer(&ark, TransferPolicy::LimbWiseOnly), 8 * row);
    let two = ark.with_dnum(2).unwrap();
    assert_eq!(
        distribution_transfer(&two, TransferPolicy::Alternating),
        distribution_transfer(&two, TransferPolicy::LimbWiseOnly)
    );
    let f1 = ParamProfile::f1();
    let a = distribution_transfer(&f1, TransferPolicy::Alternating);
    let b = distribution_transfer(&f1, TransferPolicy::LimbWiseOnly);
    assert_eq!(a * 32, b * 18);
}

#[test]
fn amortized_time_per_slot() {
    let ark = ParamProfile::ark();
    let slots = (1u64 << 15) as f64;
    let t = tas_metric(1.0, |_| 0.0, &ark).unwrap();
    assert_eq!(t, 1.0 / (8.0 * slots));
    // Σ_(ℓ=1..8) ℓ·c = 36c
    let c = 1e-3;
    let t = tas_metric(0.5, |l| l as f64 * c, &ark).unwrap();
    assert!((t - (0.5 + 36.0 * c) / 8.0 / slots).abs() < 1e-18);
    // reading the reported 14.3 ns back from the total it stands for
    let t_boot = 14.3e-9 * 8.0 * slots;
    let t = tas_metric(t_boot, |_| 0.0, &ark).unwrap();
    assert!((t - 14.3e-9).abs() < 1e-15);
    let mut flat = ark.clone();
    flat.boot_levels = Some(23);
    assert!(tas_metric(1.0, |_| 0.0, &flat).is_err());
    assert!(tas_metric(1.0, |_| 0.0, &ParamProfile::f1()).is_err());
}

#[test]
fn inconsistent_schedules_are_rejected() {
    let p = ParamProfile::ark();
    let gap = PassDescription::new("x", &[23, 21], &[2, 2], &[3, 3]).unwrap();
    assert!(matches!(
        hdft_pass_cost(&gap, &p, Variant::MinKs, None),
        Err(Error::Schedule(_))
    ));
    let high = PassDescription::new("x", &[24], &[2], &[3]).unwrap();
    assert!(hdft_pass_cost(&high, &p, Variant::MinKs, None).is_err());
    assert!(PassDescription::new("x", &[3, 2], &[1], &[1, 1]).is_err());
    let mut log = EvkUsageLog::new();
    log.begin_iteration();
    log.record(1, 5);
    let one = PassDescription::new("x", &[3], &[2], &[1]).unwrap();
    assert!(hdft_pass_cost(&one, &p, Variant::MinKs, Some(&log)).is_err());
}

#[test]
fn counted_loads_match_an_executed_run() {
    let params = CkksParams {
        ring_degree: 1 << 10,
        ..CkksParams::desk()
    };
    let ctx = CkksContext::new(params.clone()).unwrap();
    let plan = build_dft_plan(64, 2, (1, 2), DftDirection::Idft).unwrap();
    let l = ctx.max_level();
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let encoded: Vec<EncodedDftPlan> = Variant::ALL
        .iter()
        .map(|&v| encode_plan(&ctx, &plan, v, l).unwrap())
        .collect();
    let rotations: Vec<i64> = encoded.iter().flat_map(|e| e.required_rotations()).collect();
    let keys = keygen(&ctx, &rotations, &mut rng);
    let m: Vec<num_complex::Complex64> = (0..64)
        .map(|i| num_complex::Complex64::new(i as f64 / 64.0, 0.0))
        .collect();
    let ct = encrypt(
        &ctx,
        &encode(&ctx, &m, ctx.params().scale(), l).unwrap(),
        &keys.secret,
        &mut rng,
    );
    let profile = ParamProfile::from_params("desk", &params);
    for e in &encoded {
        let run = hdft(&ctx, &ct, e, &keys.rotations).unwrap();
        let desc = PassDescription::from_run(e, &run).unwrap();
        let c = hdft_pass_cost(&desc, &profile, e.variant, Some(&run.log)).unwrap();
        assert_eq!(c.evk_loads, run.log.loads());
        assert_eq!(c.evk_loads_per_iteration(), run.log.loads_per_iteration());
        assert_eq!(desc.hrots(), run.hrots);
        assert_eq!(desc.pmults(), run.pmults);
        let parsed = EvkUsageLog::from_text(&run.log.to_text()).unwrap();
        assert_eq!(hdft_pass_cost(&desc, &profile, e.variant, Some(&parsed)).unwrap(), c);
    }
}

fn arb_pass() -> impl Strategy<Value = (ParamProfile, PassDescription)> {
    (
        0usize..4,
        1usize..4,
        prop::collection::vec((0usize..30, 0usize..80), 1..4),
    )
        .prop_map(|(pi, top_off, its)| {
            let p = [
                ParamProfile::ark(),
                ParamProfile::lattigo(),
                ParamProfile::hundred_x(),
                ParamProfile::f1(),
            ][pi]
                .clone();
            let top = p.max_level - top_off.min(p.max_level - its.len());
            let levels: Vec<usize> = (0..its.len()).map(|i| top - i).collect();
            let hr: Vec<usize> = its.iter().map(|x| x.0).collect();
            let pm: Vec<usize> = its.iter().map(|x| x.1).collect();
            (p, PassDescription::new("pass", &levels, &hr, &pm).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn variants_order_traffic_and_work((p, desc) in arb_pass()) {
        let c = VariantComparison::analytic(&desc, &p).unwrap();
        prop_assert!(c.baseline.offchip_bytes() >= c.minks.offchip_bytes());
        prop_assert!(c.minks.offchip_bytes() >= c.oflimb.offchip_bytes());
        prop_assert!(c.oflimb.modular_mults >= c.minks.modular_mults);
        prop_assert_eq!(c.baseline.modular_mults, c.minks.modular_mults);
        for r in [&c.baseline, &c.minks, &c.oflimb] {
            if r.offchip_bytes() > 0 {
                prop_assert_eq!(r.ops_per_byte, r.modular_mults as f64 / r.offchip_bytes() as f64);
            }
        }
    }
}
