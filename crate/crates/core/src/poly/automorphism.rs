//! The ring automorphisms X ↦ X^g of Z_q[X]/(X^N + 1) for odd g.
//!
//! Rotation by r slots uses g = 5^r mod 2N. In coefficient form coefficient i
//! moves to i·g mod 2N, picking up a sign when that lands in [N, 2N). In
//! evaluation form the map only permutes NTT points: slot i holds the value
//! at ψ^(2·brv(i)+1), and the automorphism sends it to the slot whose exponent
//! is g times larger.

use crate::poly::{Representation, RnsPoly};
use crate::zq::ntt::bit_reverse;

/// Galois element for a rotation by `r` slots (negative r rotates right).
pub fn galois_element(r: i64, degree: usize) -> usize {
    let two_n = 2 * degree as u64;
    let order = (degree / 2).max(1) as i64;
    let mut e = r.rem_euclid(order) as u64;
    let mut base = 5u64 % two_n;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % two_n;
        }
        base = base * base % two_n;
        e >>= 1;
    }
    acc as usize
}

/// For evaluation form: out[i] = in[perm[i]].
pub fn evaluation_permutation(galois: usize, degree: usize) -> Vec<usize> {
    let log_n = degree.trailing_zeros();
    let two_n = 2 * degree;
    (0..degree)
        .map(|i| {
            let e = 2 * bit_reverse(i, log_n) + 1;
            let target = e * galois % two_n;
            bit_reverse((target - 1) / 2, log_n)
        })
        .collect()
}

pub fn automorphism(p: &RnsPoly, r: i64) -> RnsPoly {
    apply_galois(p, galois_element(r, p.degree()))
}

/// X ↦ X^g for an odd g < 2N.
pub fn apply_galois(p: &RnsPoly, galois: usize) -> RnsPoly {
    let n = p.degree();
    assert!(
        galois % 2 == 1 && galois < 2 * n,
        "galois element must be odd and below 2N"
    );
    let limbs = match p.representation() {
        Representation::Coefficient => p
            .limbs()
            .iter()
            .zip(p.basis().moduli())
            .map(|(l, m)| {
                let mut out = vec![0u64; n];
                for (i, &c) in l.iter().enumerate() {
                    let t = i * galois % (2 * n);
                    if t < n {
                        out[t] = c;
                    } else {
                        out[t - n] = m.neg(c);
                    }
                }
                out
            })
            .collect(),
        Representation::Evaluation => {
            let perm = evaluation_permutation(galois, n);
            p.limbs().iter().map(|l| perm.iter().map(|&j| l[j]).collect()).collect()
        }
    };
    RnsPoly::from_limbs(p.basis(), limbs, p.representation()).expect("permutation keeps residues in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{BasisKind, LimbBasis};
    use crate::zq::prime::ntt_primes;

    #[test]
    fn impulse_moves_to_five() {
        let ps = ntt_primes(30, 8, 1, &[]).unwrap();
        let b = LimbBasis::from_primes(&ps, 8, BasisKind::Ciphertext).unwrap();
        let mut c = vec![0i64; 8];
        c[1] = 1;
        let p = RnsPoly::from_signed(&b, &c).unwrap();
        let out = automorphism(&p, 1);
        let mut want = vec![0i64; 8];
        want[5] = 1;
        assert_eq!(out, RnsPoly::from_signed(&b, &want).unwrap());
        // X^3 -> X^15 = -X^7
        let mut c = vec![0i64; 8];
        c[3] = 1;
        let out = automorphism(&RnsPoly::from_signed(&b, &c).unwrap(), 1);
        let mut want = vec![0i64; 8];
        want[7] = -1;
        assert_eq!(out, RnsPoly::from_signed(&b, &want).unwrap());
    }

    #[test]
    fn galois_elements() {
        assert_eq!(galois_element(0, 64), 1);
        assert_eq!(galois_element(1, 64), 5);
        assert_eq!(galois_element(2, 64), 25);
        // 5 has order N/2 in (Z/2N)^*
        assert_eq!(galois_element(32, 64), 1);
        assert_eq!(galois_element(-1, 64) * 5 % 128, 1);
    }
}
