use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rns_ckks::oracle;
use rns_ckks::poly::*;
use rns_ckks::zq::prime::ntt_primes;
use rns_ckks::zq::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn table(bits: u32, n: usize) -> NttTable {
    let q = ntt_primes(bits, n, 1, &[]).unwrap()[0];
    NttTable::new(PrimeModulus::new(q).unwrap(), n).unwrap()
}

fn random_limb(m: PrimeModulus, n: usize, rng: &mut impl Rng) -> Limb {
    Limb::new((0..n).map(|_| rng.gen_range(0..m.value())).collect(), m).unwrap()
}

#[test]
fn four_step_equals_ntt_on_every_basis_vector_at_16() {
    // Both maps are linear, so agreement on a basis is agreement everywhere.
    for bits in [20, 40, 60] {
        let t = table(bits, 16);
        let f = FourStepNtt::new(&t).unwrap();
        let m = *t.modulus();
        for i in 0..16 {
            for scale in [1, m.value() - 1] {
                let mut v = vec![0u64; 16];
                v[i] = scale;
                let limb = Limb::new(v, m).unwrap();
                for dir in [Direction::Forward, Direction::Inverse] {
                    let twist = match dir {
                        Direction::Forward => f.forward_twist(),
                        Direction::Inverse => f.inverse_twist(),
                    };
                    assert_eq!(
                        four_step_ntt(&limb, &f, dir, twist).unwrap(),
                        ntt(&limb, &t, dir).unwrap(),
                        "q={} i={i}",
                        m.value()
                    );
                }
            }
        }
    }
}

#[test]
fn four_step_equals_ntt_on_random_inputs_at_1024() {
    let t = table(59, 1 << 10);
    let f = FourStepNtt::new(&t).unwrap();
    let m = *t.modulus();
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let a = random_limb(m, 1 << 10, &mut rng);
        let fwd = four_step_ntt(&a, &f, Direction::Forward, f.forward_twist()).unwrap();
        assert_eq!(fwd, ntt(&a, &t, Direction::Forward).unwrap());
        let inv = four_step_ntt(&a, &f, Direction::Inverse, f.inverse_twist()).unwrap();
        assert_eq!(inv, ntt(&a, &t, Direction::Inverse).unwrap());
    }
}

#[test]
fn twist_schedule_expands_to_full_twist_table() {
    let t = table(50, 1 << 10);
    let f = FourStepNtt::new(&t).unwrap();
    let m = *t.modulus();
    let psi = t.psi();
    let sched = f.forward_twist();
    assert_eq!(sched.stored_words(), 2 * 32);
    // entry j2·32 + e1 is ψ^((2·e1 + 1)·j2)
    let full = expand_twist(sched, 32);
    for j2 in 0..32u64 {
        for e1 in 0..32u64 {
            assert_eq!(full[(j2 * 32 + e1) as usize], m.pow(psi, (2 * e1 + 1) * j2));
        }
    }
}

#[test]
fn direct_evaluation_matches_forward_transform() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    for n in [4usize, 8, 16, 32, 64] {
        let t = table(40, n);
        let a = random_limb(*t.modulus(), n, &mut rng);
        let want = oracle::direct_ntt(&a.values, t.psi(), t.modulus().value());
        assert_eq!(ntt(&a, &t, Direction::Forward).unwrap().values, want, "n={n}");
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn reductions_agree_with_wide_arithmetic(bits in 20u32..=60, a in any::<u64>(), b in any::<u64>(), w in any::<u128>()) {
        let q = ntt_primes(bits, 16, 1, &[]).unwrap()[0];
        let m = PrimeModulus::new(q).unwrap();
        let (a, b) = (a % q, b % q);
        let want = oracle::mul_mod(a, b, q);
        prop_assert_eq!(m.mul(a, b), want);
        prop_assert_eq!(m.mul_montgomery(a, b), want);
        prop_assert_eq!(m.mul_by_montgomery(a, m.to_montgomery(b)), want);
        prop_assert_eq!(m.mul_with(a, b, Reduction::Barrett), m.mul_with(a, b, Reduction::Montgomery));
        prop_assert_eq!(m.reduce_u128(w), (w % q as u128) as u64);
        prop_assert_eq!(m.add(a, b), oracle::add_mod(a, b, q));
        prop_assert_eq!(m.add(m.sub(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(m.mul(m.inv(a), a), 1);
        }
    }

    #[test]
    fn convolution_theorem(log_n in 2u32..=8, seed in any::<u64>()) {
        let n = 1usize << log_n;
        let t = table(45, n);
        let m = *t.modulus();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let a = random_limb(m, n, &mut rng);
        let b = random_limb(m, n, &mut rng);
        let fa = ntt(&a, &t, Direction::Forward).unwrap();
        let fb = ntt(&b, &t, Direction::Forward).unwrap();
        let prod: Vec<u64> = fa.values.iter().zip(&fb.values).map(|(&x, &y)| m.mul(x, y)).collect();
        let back = ntt(&Limb::new(prod, m).unwrap(), &t, Direction::Inverse).unwrap();
        prop_assert_eq!(back.values, oracle::negacyclic_convolution(&a.values, &b.values, m.value()));
    }

    #[test]
    fn transform_is_linear_and_invertible(log_n in 2u32..=10, seed in any::<u64>(), c in any::<u64>()) {
        let n = 1usize << log_n;
        let t = table(55, n);
        let m = *t.modulus();
        let c = c % m.value();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let a = random_limb(m, n, &mut rng);
        let b = random_limb(m, n, &mut rng);
        let comb: Vec<u64> = a.values.iter().zip(&b.values).map(|(&x, &y)| m.add(m.mul(c, x), y)).collect();
        let fc = ntt(&Limb::new(comb, m).unwrap(), &t, Direction::Forward).unwrap();
        let fa = ntt(&a, &t, Direction::Forward).unwrap();
        let fb = ntt(&b, &t, Direction::Forward).unwrap();
        let want: Vec<u64> = fa.values.iter().zip(&fb.values).map(|(&x, &y)| m.add(m.mul(c, x), y)).collect();
        prop_assert_eq!(fc.values, want);
        prop_assert_eq!(ntt(&fa, &t, Direction::Inverse).unwrap(), a);
    }

    #[test]
    fn base_conversion_is_exact_up_to_multiples_of_the_source(log_n in 4u32..=10, src_len in 1usize..5, seed in any::<u64>()) {
        let n = 1usize << log_n;
        let src_primes = ntt_primes(50, n, src_len, &[]).unwrap();
        let dst_primes = ntt_primes(45, n, 4, &src_primes).unwrap();
        let src = LimbBasis::from_primes(&src_primes, n, BasisKind::Special).unwrap();
        let dst = LimbBasis::from_primes(&dst_primes, n, BasisKind::Ciphertext).unwrap();
        let tbl = BaseTable::new(&src, &dst).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let limbs: Vec<Vec<u64>> = src_primes.iter().map(|&q| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
        let p = RnsPoly::from_limbs(&src, limbs.clone(), Representation::Coefficient).unwrap();
        let out = base_convert(&p, &dst, &tbl).unwrap();
        prop_assert_eq!(&out, &base_convert_naive(&p, &dst, &tbl).unwrap());
        let big_q = oracle::product(&src_primes);
        for c in 0..n {
            let residues: Vec<u64> = limbs.iter().map(|l| l[c]).collect();
            let x = oracle::crt_centered(&residues, &src_primes).mod_floor(&big_q);
            let ok = (0..src_len as u64).any(|k| {
                let y = &x + &big_q * BigInt::from(k);
                dst_primes.iter().enumerate().all(|(i, &q)| out.limb(i)[c] == oracle::reduce(&y, q))
            });
            prop_assert!(ok, "coefficient {} is not x + kQ with 0 ≤ k < {}", c, src_len);
        }
    }

    #[test]
    fn automorphisms_are_ring_homomorphisms(log_n in 2u32..=6, g_seed in any::<u64>(), seed in any::<u64>()) {
        let n = 1usize << log_n;
        let primes = ntt_primes(40, n, 2, &[]).unwrap();
        let basis = LimbBasis::from_primes(&primes, n, BasisKind::Ciphertext).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let rand_poly = |rng: &mut ChaCha20Rng| {
            let limbs = primes.iter().map(|&q| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
            RnsPoly::from_limbs(&basis, limbs, Representation::Coefficient).unwrap()
        };
        let a = rand_poly(&mut rng);
        let b = rand_poly(&mut rng);
        let g = (2 * (g_seed as usize % n) + 1) % (2 * n);
        let h = (2 * ((g_seed >> 32) as usize % n) + 1) % (2 * n);

        // coefficient form against the direct substitution X ↦ X^g
        let ga = apply_galois(&a, g);
        for (l, (&q, src)) in ga.limbs().iter().zip(primes.iter().zip(a.limbs())) {
            let mut want = vec![0u64; n];
            for (i, &c) in src.iter().enumerate() {
                let t = i * g % (2 * n);
                if t < n { want[t] = c } else { want[t - n] = (q - c) % q }
            }
            prop_assert_eq!(l, &want);
        }

        let ea = a.clone().evaluated();
        let eb = b.clone().evaluated();
        // evaluation form commutes with the transform
        prop_assert_eq!(apply_galois(&ea, g), ga.clone().evaluated());
        // multiplicative and additive
        prop_assert_eq!(apply_galois(&ea.mul(&eb).unwrap(), g), apply_galois(&ea, g).mul(&apply_galois(&eb, g)).unwrap());
        prop_assert_eq!(apply_galois(&ea.add(&eb).unwrap(), g), apply_galois(&ea, g).add(&apply_galois(&eb, g)).unwrap());
        // ψ_h ∘ ψ_g = ψ_(g·h)
        prop_assert_eq!(apply_galois(&apply_galois(&ea, g), h), apply_galois(&ea, g * h % (2 * n)));
        prop_assert_eq!(apply_galois(&apply_galois(&a, g), h), apply_galois(&a, g * h % (2 * n)));
        // rotations compose additively
        let (r, s) = ((g_seed % 7) as i64, (g_seed % 5) as i64 - 2);
        prop_assert_eq!(automorphism(&automorphism(&ea, r), s), automorphism(&ea, r + s));
    }
}

#[test]
fn rotation_by_the_slot_count_is_the_identity() {
    for n in [8usize, 64] {
        assert_eq!(galois_element(0, n), 1);
        assert_eq!(galois_element(n as i64 / 2, n), 1);
        assert_eq!(galois_element(-1, n) * galois_element(1, n) % (2 * n), 1);
    }
}

#[test]
fn crt_reconstructor_matches_oracle() {
    let n = 16;
    let primes = ntt_primes(50, n, 3, &[]).unwrap();
    let basis = LimbBasis::from_primes(&primes, n, BasisKind::Ciphertext).unwrap();
    let crt = CrtReconstructor::new(&basis);
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for _ in 0..100 {
        let res: Vec<u64> = primes.iter().map(|&q| rng.gen_range(0..q)).collect();
        let want = oracle::crt_centered(&res, &primes);
        assert_eq!(crt.reconstruct(|i| res[i]), want);
        let f = crt.reconstruct_f64(|i| res[i]);
        assert!((f - want.to_f64().unwrap()).abs() <= want.to_f64().unwrap().abs() * 1e-12);
    }
}
