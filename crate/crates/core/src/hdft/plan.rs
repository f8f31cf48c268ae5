//! Factorization of the slot transform into sparse radix-2^k stages.
//!
//! The encoder's special FFT is U = F·R with R the bit-reversal permutation
//! and F = E_(log n − 1) ⋯ E_0 a product of radix-2 butterfly stages; stage s
//! has nonzero diagonals only at slot offsets 0 and ±2^s. Merging k
//! consecutive stages gives a matrix whose diagonals sit at offsets i·2^(k·t)
//! with |i| < 2^k. The forward plan applies F, mapping bit-reversed
//! coefficients to slots. The inverse plan applies F⁻¹, each butterfly stage
//! inverted as E_sᴴ/2, mapping slots to bit-reversed coefficients.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DftDirection {
    /// bit-reversed coefficients to slots (the second transform of bootstrapping)
    Dft,
    /// slots to bit-reversed coefficients (the first transform of bootstrapping)
    Idft,
}

impl DftDirection {
    pub fn name(self) -> &'static str {
        match self {
            DftDirection::Dft => "dft",
            DftDirection::Idft => "idft",
        }
    }
}

/// Slot-offset form of a matrix: offset d ↦ diagonal D_d with
/// (M·v)_j = Σ_d D_d[j] · v_((j + d) mod n). Offsets are plain integers and
/// are not merged modulo n.
pub type Diagonals = BTreeMap<i64, Vec<Complex64>>;

/// Rotate a slot vector left: out[j] = v[(j + r) mod n].
pub fn rotate_slots(v: &[Complex64], r: i64) -> Vec<Complex64> {
    let n = v.len() as i64;
    (0..n).map(|j| v[(j + r).rem_euclid(n) as usize]).collect()
}

/// Apply an offset-form matrix to a slot vector.
pub fn apply_diagonals(diags: &Diagonals, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (&d, diag) in diags {
        for (o, (x, y)) in out.iter_mut().zip(diag.iter().zip(rotate_slots(v, d))) {
            *o += x * y;
        }
    }
    out
}

/// A·B in offset form (B applied first).
fn compose(a: &Diagonals, b: &Diagonals, n: usize) -> Diagonals {
    let mut out = Diagonals::new();
    for (&da, va) in a {
        for (&db, vb) in b {
            let acc = out.entry(da + db).or_insert_with(|| vec![Complex64::new(0.0, 0.0); n]);
            for j in 0..n {
                acc[j] += va[j] * vb[(j as i64 + da).rem_euclid(n as i64) as usize];
            }
        }
    }
    out
}

/// Mᴴ in offset form: (Mᴴ)_(−d)[j] = conj(M_d[j − d]).
fn conjugate_transpose(m: &Diagonals, n: usize) -> Diagonals {
    m.iter()
        .map(|(&d, v)| {
            let t = (0..n)
                .map(|j| v[(j as i64 - d).rem_euclid(n as i64) as usize].conj())
                .collect();
            (-d, t)
        })
        .collect()
}

/// Radix-2 stage with half-width 2^s, as in the encoder's special FFT.
fn butterfly_stage(n: usize, s: u32) -> Diagonals {
    let half = 1usize << s;
    let len = 2 * half;
    let order = 4 * len;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut center = vec![zero; n];
    let mut up = vec![zero; n];
    let mut down = vec![zero; n];
    let mut five = vec![1usize; half];
    for j in 1..half {
        five[j] = five[j - 1] * 5 % order;
    }
    for x in 0..n {
        let pos = x % len;
        if pos < half {
            let w = Complex64::from_polar(1.0, 2.0 * PI * five[pos] as f64 / order as f64);
            center[x] = one;
            up[x] = w;
        } else {
            let w = Complex64::from_polar(1.0, 2.0 * PI * five[pos - half] as f64 / order as f64);
            center[x] = -w;
            down[x] = one;
        }
    }
    Diagonals::from([(-(half as i64), down), (0, center), (half as i64, up)])
}

fn is_zero(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.norm() < 1e-13)
}

/// One merged stage: slot offsets are `index · stride`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanIteration {
    pub stride: usize,
    /// diagonal index i ↦ D_i, rotation by i·stride; all-zero diagonals omitted
    pub diagonals: BTreeMap<i64, Vec<Complex64>>,
}

impl PlanIteration {
    /// True when the only diagonal is the main one.
    pub fn is_degenerate(&self) -> bool {
        self.diagonals.keys().all(|&i| i == 0)
    }

    pub fn as_offsets(&self) -> Diagonals {
        self.diagonals
            .iter()
            .map(|(&i, v)| (i * self.stride as i64, v.clone()))
            .collect()
    }
}

/// Radix and baby-step/giant-step split, without any constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanShape {
    pub slots: usize,
    pub k: u32,
    pub k1: u32,
    pub k2: u32,
}

impl PlanShape {
    pub fn new(slots: usize, k: u32, k1: u32, k2: u32) -> Result<Self> {
        if !slots.is_power_of_two() || slots < 2 {
            return Err(Error::InvalidPlan(format!("{slots} slots is not a power of two ≥ 2")));
        }
        let log_n = slots.trailing_zeros();
        if k == 0 || !log_n.is_multiple_of(k) {
            return Err(Error::InvalidPlan(format!(
                "radix 2^{k} does not divide log2 n = {log_n}"
            )));
        }
        if k1 + k2 != k + 1 {
            return Err(Error::InvalidPlan(format!(
                "k1 + k2 = {} but k + 1 = {}",
                k1 + k2,
                k + 1
            )));
        }
        Ok(PlanShape { slots, k, k1, k2 })
    }

    /// Balanced split k1 = ⌊(k+1)/2⌋.
    pub fn balanced(slots: usize, k: u32) -> Result<Self> {
        let k1 = k.div_ceil(2);
        Self::new(slots, k, k1, k + 1 - k1)
    }

    pub fn iterations(&self) -> usize {
        (self.slots.trailing_zeros() / self.k) as usize
    }

    /// Levels consumed by one transform: one rescale per iteration.
    pub fn levels_consumed(&self) -> usize {
        self.iterations()
    }

    /// Diagonals of a merged stage before regrouping.
    pub fn diagonals_per_iteration(&self) -> usize {
        (1 << (self.k + 1)) - 1
    }

    /// Strides in execution order.
    pub fn strides(&self, direction: DftDirection) -> Vec<usize> {
        let s: Vec<usize> = (0..self.iterations())
            .map(|t| 1usize << (self.k as usize * t))
            .collect();
        match direction {
            DftDirection::Dft => s,
            DftDirection::Idft => s.into_iter().rev().collect(),
        }
    }

    /// Rotations per iteration when every diagonal is present: pre-rotation,
    /// baby steps and giant steps for the baseline; the same minus the
    /// pre-rotation for Min-KS.
    pub fn rotations_per_iteration(&self, minks: bool) -> usize {
        let r = (1 << self.k1) - 1 + (1 << self.k2) - 1;
        if minks {
            r
        } else {
            r + 1
        }
    }

    /// Distinct evaluation keys per iteration when every diagonal is present.
    pub fn evks_per_iteration(&self, minks: bool) -> usize {
        if minks {
            2
        } else {
            self.rotations_per_iteration(false)
        }
    }
}

/// Unencoded transform: direction, shape and the merged stages in execution
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct DftPlan {
    pub shape: PlanShape,
    pub direction: DftDirection,
    pub iterations: Vec<PlanIteration>,
}

pub fn build_dft_plan(slots: usize, k: u32, split: (u32, u32), direction: DftDirection) -> Result<DftPlan> {
    let shape = PlanShape::new(slots, k, split.0, split.1)?;
    let n = slots;
    let mut merged = Vec::with_capacity(shape.iterations());
    for t in 0..shape.iterations() as u32 {
        let mut m = butterfly_stage(n, t * k);
        for s in t * k + 1..(t + 1) * k {
            m = compose(&butterfly_stage(n, s), &m, n);
        }
        if direction == DftDirection::Idft {
            let scale = 1.0 / (1u64 << k) as f64;
            m = conjugate_transpose(&m, n);
            for v in m.values_mut() {
                for z in v.iter_mut() {
                    *z *= scale;
                }
            }
        }
        merged.push(to_iteration(m, 1usize << (t * k))?);
    }
    if direction == DftDirection::Idft {
        merged.reverse();
    }
    Ok(DftPlan {
        shape,
        direction,
        iterations: merged,
    })
}

fn to_iteration(m: Diagonals, stride: usize) -> Result<PlanIteration> {
    let mut diagonals = BTreeMap::new();
    for (d, v) in m {
        if is_zero(&v) {
            continue;
        }
        if d % stride as i64 != 0 {
            return Err(Error::InvalidPlan(format!(
                "offset {d} is not a multiple of stride {stride}"
            )));
        }
        diagonals.insert(d / stride as i64, v);
    }
    Ok(PlanIteration { stride, diagonals })
}

impl DftPlan {
    /// A one-iteration plan that multiplies slot-wise by `diag`. Its only
    /// diagonal is the main one, so no rotation is needed.
    pub fn slotwise(shape: PlanShape, diag: Vec<Complex64>) -> Result<Self> {
        if diag.len() != shape.slots {
            return Err(Error::InvalidPlan("diagonal length differs from slot count".into()));
        }
        Ok(DftPlan {
            shape,
            direction: DftDirection::Dft,
            iterations: vec![PlanIteration {
                stride: 1,
                diagonals: BTreeMap::from([(0, diag)]),
            }],
        })
    }

    pub fn slots(&self) -> usize {
        self.shape.slots
    }

    /// Apply every iteration in order to a plain slot vector.
    pub fn apply_plain(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.iterations
            .iter()
            .fold(v.to_vec(), |acc, it| apply_diagonals(&it.as_offsets(), &acc))
    }

    /// Dense n×n matrix of the whole plan, row-major.
    pub fn dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.slots();
        let mut cols = Vec::with_capacity(n);
        for c in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[c] = Complex64::new(1.0, 0.0);
            cols.push(self.apply_plain(&e));
        }
        (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect()
    }
}
