//! Slot encoding.
//!
//! n slots live in the subring spanned by X^(g·t), g = N/(2n). Writing
//! z_t = c_(g·t) + i·c_(g·(t+n)) for t < n, slot j of the polynomial is
//! Σ_t z_t · ξ^(5^j · t) with ξ = exp(2πi/4n). Indexing slots by powers of 5
//! makes X ↦ X^(5^r) a cyclic left shift by r. The n×n matrix U_(j,t) =
//! ξ^(5^j·t) satisfies Uᴴ·U = n·I, so encoding applies Uᴴ/n.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Encoder {
    degree: usize,
    slots: usize,
    /// 5^j mod 4n
    rot_group: Vec<usize>,
    /// ξ^k for k < 4n
    roots: Vec<Complex64>,
}

impl Encoder {
    pub fn new(degree: usize, slots: usize) -> Result<Self> {
        if !slots.is_power_of_two() || slots < 1 || 2 * slots > degree {
            return Err(Error::Config(format!("{slots} slots do not fit ring degree {degree}")));
        }
        let m = 4 * slots;
        let mut rot_group = Vec::with_capacity(slots);
        let mut g = 1usize;
        for _ in 0..slots {
            rot_group.push(g);
            g = g * 5 % m;
        }
        let roots = (0..m)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64))
            .collect();
        Ok(Encoder {
            degree,
            slots,
            rot_group,
            roots,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Distance between consecutive subring coefficients.
    pub fn gap(&self) -> usize {
        self.degree / (2 * self.slots)
    }

    /// The (j, t) entry of the slot matrix U.
    pub fn slot_matrix_entry(&self, j: usize, t: usize) -> Complex64 {
        let m = 4 * self.slots;
        self.roots[self.rot_group[j] * t % m]
    }

    /// In place: z (natural order) to slot values, i.e. v ← U·v.
    pub fn special_fft(&self, v: &mut [Complex64]) {
        let n = self.slots;
        assert_eq!(v.len(), n);
        bit_reverse_permute(v);
        let m = 4 * n;
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let quarter_order = 4 * len;
            for block in (0..n).step_by(len) {
                for j in 0..half {
                    let idx = (self.rot_group[j] % quarter_order) * (m / quarter_order);
                    let u = v[block + j];
                    let w = v[block + j + half] * self.roots[idx];
                    v[block + j] = u + w;
                    v[block + j + half] = u - w;
                }
            }
            len <<= 1;
        }
    }

    /// In place inverse of [`Encoder::special_fft`].
    pub fn special_ifft(&self, v: &mut [Complex64]) {
        let n = self.slots;
        assert_eq!(v.len(), n);
        let m = 4 * n;
        let mut len = n;
        while len >= 2 {
            let half = len / 2;
            let quarter_order = 4 * len;
            for block in (0..n).step_by(len) {
                for j in 0..half {
                    let idx = (quarter_order - self.rot_group[j] % quarter_order) * (m / quarter_order);
                    let u = v[block + j] + v[block + j + half];
                    let w = (v[block + j] - v[block + j + half]) * self.roots[idx];
                    v[block + j] = u;
                    v[block + j + half] = w;
                }
            }
            len >>= 1;
        }
        bit_reverse_permute(v);
        let inv = 1.0 / n as f64;
        for x in v.iter_mut() {
            *x *= inv;
        }
    }

    /// Integer coefficients c with c ≈ scale · (embedding preimage of values).
    /// Fails if any |c| reaches `bound`.
    pub fn encode_coefficients(&self, values: &[Complex64], scale: f64, bound: f64) -> Result<Vec<i64>> {
        if values.len() != self.slots {
            return Err(Error::Config(format!(
                "{} values for {} slots",
                values.len(),
                self.slots
            )));
        }
        let mut z = values.to_vec();
        self.special_ifft(&mut z);
        let gap = self.gap();
        let mut coeffs = vec![0i64; self.degree];
        for (t, zt) in z.iter().enumerate() {
            for (pos, part) in [(t, zt.re), (t + self.slots, zt.im)] {
                let c = (part * scale).round();
                if !(c.abs() < bound) {
                    return Err(Error::Range(format!(
                        "encoded coefficient {c:e} at index {} is not below {bound:e}",
                        pos * gap
                    )));
                }
                coeffs[pos * gap] = c as i64;
            }
        }
        Ok(coeffs)
    }

    /// Slot values from real-valued coefficients already divided by the scale.
    /// Only the subring positions are read.
    pub fn decode_coefficients(&self, coeff_at: impl Fn(usize) -> f64) -> Vec<Complex64> {
        let gap = self.gap();
        let mut z: Vec<Complex64> = (0..self.slots)
            .map(|t| Complex64::new(coeff_at(t * gap), coeff_at((t + self.slots) * gap)))
            .collect();
        self.special_fft(&mut z);
        z
    }
}

fn bit_reverse_permute<T>(v: &mut [T]) {
    let n = v.len();
    let log_n = n.trailing_zeros();
    for i in 0..n {
        let j = crate::zq::ntt::bit_reverse(i, log_n);
        if i < j {
            v.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_matches_matrix() {
        let enc = Encoder::new(64, 16).unwrap();
        let z: Vec<Complex64> = (0..16)
            .map(|t| Complex64::new(t as f64 * 0.1 - 0.3, 1.0 / (t as f64 + 1.0)))
            .collect();
        let mut fast = z.clone();
        enc.special_fft(&mut fast);
        for (j, f) in fast.iter().enumerate() {
            let direct: Complex64 = (0..16).map(|t| z[t] * enc.slot_matrix_entry(j, t)).sum();
            assert!((direct - f).norm() < 1e-12);
        }
        enc.special_ifft(&mut fast);
        for (a, b) in fast.iter().zip(&z) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_goes_to_constant_term() {
        let enc = Encoder::new(32, 8).unwrap();
        let c = enc
            .encode_coefficients(&[Complex64::new(0.5, 0.0); 8], 1024.0, 1e18)
            .unwrap();
        assert_eq!(c[0], 512);
        assert!(c[1..].iter().all(|&x| x == 0));
    }

    #[test]
    fn overflow_is_a_range_error() {
        let enc = Encoder::new(32, 8).unwrap();
        let r = enc.encode_coefficients(&[Complex64::new(1e6, 0.0); 8], 2f64.powi(40), 2f64.powi(59));
        assert!(matches!(r, Err(Error::Range(_))));
    }
}
