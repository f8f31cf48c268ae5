//! N-point negacyclic NTT as √N-point column transforms, a twist, and
//! √N-point row transforms.
//!
//! With coefficient index j = C·j1 + j2 and evaluation index e = e1 + R·e2
//! (R = C = √N), the exponent (2e+1)·j splits into a negacyclic column part
//! in j1, a twist ψ^((2·e1+1)·j2) and a cyclic row part in j2. For a fixed j2
//! the twist is geometric in e1 with start ψ^j2 and ratio ψ^(2·j2), so only
//! those two numbers per column are stored.

use crate::error::{Error, Result};
use crate::zq::ntt::{bit_reverse, Direction, NttTable};
use crate::zq::{Limb, PrimeModulus};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSchedule {
    pub modulus: PrimeModulus,
    pub start_values: Vec<u64>,
    pub common_ratios: Vec<u64>,
}

impl TwistSchedule {
    pub fn new(modulus: PrimeModulus, start_values: Vec<u64>, common_ratios: Vec<u64>) -> Result<Self> {
        if start_values.len() != common_ratios.len() {
            return Err(Error::Config("twist schedule start/ratio lengths differ".into()));
        }
        let q = modulus.value();
        if start_values.iter().chain(&common_ratios).any(|&v| v >= q) {
            return Err(Error::Range("twist schedule entry not reduced".into()));
        }
        Ok(TwistSchedule {
            modulus,
            start_values,
            common_ratios,
        })
    }

    pub fn len(&self) -> usize {
        self.start_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.start_values.is_empty()
    }

    /// Words held by the schedule itself.
    pub fn stored_words(&self) -> usize {
        2 * self.len()
    }
}

/// Expand every (start, ratio) pair for `steps` terms. Entry p·steps + j is
/// start_p · ratio_p^j.
pub fn expand_twist(t: &TwistSchedule, steps: usize) -> Vec<u64> {
    let m = &t.modulus;
    let mut out = Vec::with_capacity(t.len() * steps);
    for (&s, &r) in t.start_values.iter().zip(&t.common_ratios) {
        let mut w = s;
        for _ in 0..steps {
            out.push(w);
            w = m.mul(w, r);
        }
    }
    out
}

/// Words a conventional implementation would spend on full twist tables:
/// forward and inverse, N factors each, for every limb.
pub fn twist_table_words(degree: usize, limbs: usize) -> u64 {
    2 * limbs as u64 * degree as u64
}

/// Cyclic transform of length C, used for the row pass.
#[derive(Clone, Debug)]
struct CyclicTable {
    modulus: PrimeModulus,
    size: usize,
    log_size: u32,
    /// ω^t in Montgomery form for t < C/2
    powers: Vec<u64>,
    inv_powers: Vec<u64>,
    size_inv: u64,
}

impl CyclicTable {
    fn new(modulus: PrimeModulus, size: usize, omega: u64) -> Self {
        let omega_inv = modulus.inv(omega);
        let half = (size / 2).max(1);
        let mut powers = Vec::with_capacity(half);
        let mut inv_powers = Vec::with_capacity(half);
        let (mut w, mut wi) = (1u64, 1u64);
        for _ in 0..half {
            powers.push(modulus.to_montgomery(w));
            inv_powers.push(modulus.to_montgomery(wi));
            w = modulus.mul(w, omega);
            wi = modulus.mul(wi, omega_inv);
        }
        CyclicTable {
            modulus,
            size,
            log_size: size.trailing_zeros(),
            powers,
            inv_powers,
            size_inv: modulus.to_montgomery(modulus.inv(size as u64)),
        }
    }

    fn transform(&self, a: &mut [u64], inverse: bool) {
        let m = &self.modulus;
        for i in 0..self.size {
            let j = bit_reverse(i, self.log_size);
            if i < j {
                a.swap(i, j);
            }
        }
        let tw = if inverse { &self.inv_powers } else { &self.powers };
        let mut len = 2;
        while len <= self.size {
            let stride = self.size / len;
            for block in (0..self.size).step_by(len) {
                for j in 0..len / 2 {
                    let u = a[block + j];
                    let v = m.mul_by_montgomery(a[block + j + len / 2], tw[j * stride]);
                    a[block + j] = m.add(u, v);
                    a[block + j + len / 2] = m.sub(u, v);
                }
            }
            len <<= 1;
        }
        if inverse {
            for x in a.iter_mut() {
                *x = m.mul_by_montgomery(*x, self.size_inv);
            }
        }
    }
}

/// Four-step engine producing exactly the output of a reference [`NttTable`]
/// built with the same root.
#[derive(Clone, Debug)]
pub struct FourStepNtt {
    modulus: PrimeModulus,
    degree: usize,
    log_degree: u32,
    side: usize,
    log_side: u32,
    columns: NttTable,
    rows: CyclicTable,
    forward_twist: TwistSchedule,
    inverse_twist: TwistSchedule,
}

impl FourStepNtt {
    pub fn new(reference: &NttTable) -> Result<Self> {
        let degree = reference.degree();
        let log_degree = degree.trailing_zeros();
        if !log_degree.is_multiple_of(2) || degree < 4 {
            return Err(Error::Config(format!(
                "four-step NTT needs a perfect-square degree, got {degree}"
            )));
        }
        let m = *reference.modulus();
        let side = 1usize << (log_degree / 2);
        let psi = reference.psi();
        let psi_inv = m.inv(psi);
        let columns = NttTable::with_root(m, side, m.pow(psi, side as u64))?;
        let rows = CyclicTable::new(m, side, m.pow(psi, 2 * side as u64));

        let mut fs = Vec::with_capacity(side);
        let mut fr = Vec::with_capacity(side);
        let mut is = Vec::with_capacity(side);
        let mut ir = Vec::with_capacity(side);
        for j2 in 0..side as u64 {
            fs.push(m.pow(psi, j2));
            fr.push(m.pow(psi, 2 * j2));
            is.push(m.pow(psi_inv, j2));
            ir.push(m.pow(psi_inv, 2 * j2));
        }
        Ok(FourStepNtt {
            modulus: m,
            degree,
            log_degree,
            side,
            log_side: log_degree / 2,
            columns,
            rows,
            forward_twist: TwistSchedule::new(m, fs, fr)?,
            inverse_twist: TwistSchedule::new(m, is, ir)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn forward_twist(&self) -> &TwistSchedule {
        &self.forward_twist
    }

    pub fn inverse_twist(&self) -> &TwistSchedule {
        &self.inverse_twist
    }

    /// Twist words actually stored (both directions).
    pub fn stored_twist_words(&self) -> usize {
        self.forward_twist.stored_words() + self.inverse_twist.stored_words()
    }

    pub fn forward_inplace(&self, a: &mut [u64]) {
        self.forward_with(a, &self.forward_twist)
    }

    pub fn inverse_inplace(&self, a: &mut [u64]) {
        self.inverse_with(a, &self.inverse_twist)
    }

    fn forward_with(&self, a: &mut [u64], twist: &TwistSchedule) {
        assert_eq!(a.len(), self.degree);
        let (s, m) = (self.side, &self.modulus);
        // grid[e1 * s + j2] after the column pass and twist
        let mut grid = vec![0u64; self.degree];
        let mut col = vec![0u64; s];
        for j2 in 0..s {
            for (j1, c) in col.iter_mut().enumerate() {
                *c = a[s * j1 + j2];
            }
            self.columns.forward_inplace(&mut col);
            let ratio = twist.common_ratios[j2];
            let mut w = twist.start_values[j2];
            for e1 in 0..s {
                grid[e1 * s + j2] = m.mul(col[bit_reverse(e1, self.log_side)], w);
                w = m.mul(w, ratio);
            }
        }
        for e1 in 0..s {
            let row = &mut grid[e1 * s..(e1 + 1) * s];
            self.rows.transform(row, false);
            for (e2, &v) in row.iter().enumerate() {
                a[bit_reverse(e1 + s * e2, self.log_degree)] = v;
            }
        }
    }

    fn inverse_with(&self, a: &mut [u64], twist: &TwistSchedule) {
        assert_eq!(a.len(), self.degree);
        let (s, m) = (self.side, &self.modulus);
        let mut grid = vec![0u64; self.degree];
        for e1 in 0..s {
            let row = &mut grid[e1 * s..(e1 + 1) * s];
            for (e2, r) in row.iter_mut().enumerate() {
                *r = a[bit_reverse(e1 + s * e2, self.log_degree)];
            }
            self.rows.transform(row, true);
        }
        let mut col = vec![0u64; s];
        for j2 in 0..s {
            let ratio = twist.common_ratios[j2];
            let mut w = twist.start_values[j2];
            for e1 in 0..s {
                col[bit_reverse(e1, self.log_side)] = m.mul(grid[e1 * s + j2], w);
                w = m.mul(w, ratio);
            }
            self.columns.inverse_inplace(&mut col);
            for (j1, &c) in col.iter().enumerate() {
                a[s * j1 + j2] = c;
            }
        }
    }
}

/// Transform a limb with an explicit twist schedule. The schedule must be the
/// one matching the direction (see [`FourStepNtt::forward_twist`]); a
/// different schedule gives a different, generally meaningless, transform.
pub fn four_step_ntt(limb: &Limb, engine: &FourStepNtt, direction: Direction, twist: &TwistSchedule) -> Result<Limb> {
    if limb.modulus != engine.modulus || limb.degree() != engine.degree {
        return Err(Error::Config("limb does not match four-step engine".into()));
    }
    if twist.len() != engine.side || twist.modulus != engine.modulus {
        return Err(Error::Config(format!(
            "twist schedule has {} pairs, engine needs {}",
            twist.len(),
            engine.side
        )));
    }
    let mut out = limb.clone();
    match direction {
        Direction::Forward => engine.forward_with(&mut out.values, twist),
        Direction::Inverse => engine.inverse_with(&mut out.values, twist),
    }
    Ok(out)
}
