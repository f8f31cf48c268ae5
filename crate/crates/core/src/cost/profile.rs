//! Parameter and machine profiles for the analytic cost model.

use crate::ckks::CkksParams;
use crate::error::{Error, Result};

pub const MIB: u64 = 1 << 20;

/// Sizes that matter for counting, independent of the concrete primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamProfile {
    pub name: String,
    /// ring degree N
    pub ring_degree: usize,
    /// top level L (L + 1 primes in Q)
    pub max_level: usize,
    /// levels consumed by bootstrapping, when the set supports it
    pub boot_levels: Option<usize>,
    pub dnum: usize,
    /// primes per decomposition piece, also the number of special primes
    pub alpha: usize,
    /// slots n
    pub slots: usize,
    pub word_bytes: usize,
}

impl ParamProfile {
    pub fn new(
        name: &str,
        log_n: u32,
        max_level: usize,
        boot_levels: Option<usize>,
        dnum: usize,
        alpha: usize,
        word_bytes: usize,
    ) -> Result<Self> {
        let p = ParamProfile {
            name: name.to_string(),
            ring_degree: 1 << log_n,
            max_level,
            boot_levels,
            dnum,
            alpha,
            slots: 1 << (log_n - 1),
            word_bytes,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.ring_degree.is_power_of_two() || self.ring_degree < 4 {
            return Err(Error::Config(format!("N = {} is not a power of two", self.ring_degree)));
        }
        if self.dnum == 0 || self.alpha == 0 || self.alpha * self.dnum != self.max_level + 1 {
            return Err(Error::Config(format!(
                "alpha = {} times dnum = {} must equal L + 1 = {}",
                self.alpha,
                self.dnum,
                self.max_level + 1
            )));
        }
        if self.slots == 0 || self.slots > self.ring_degree / 2 || !self.slots.is_power_of_two() {
            return Err(Error::Config(format!("n = {} out of range", self.slots)));
        }
        if self.word_bytes == 0 {
            return Err(Error::Config("word size must be positive".into()));
        }
        Ok(())
    }

    pub fn ark() -> Self {
        Self::new("ark", 16, 23, Some(15), 4, 6, 8).unwrap()
    }

    pub fn lattigo() -> Self {
        Self::new("lattigo", 16, 24, Some(15), 5, 5, 8).unwrap()
    }

    pub fn hundred_x() -> Self {
        Self::new("100x", 17, 29, Some(19), 3, 10, 8).unwrap()
    }

    pub fn f1() -> Self {
        Self::new("f1", 14, 15, None, 16, 1, 4).unwrap()
    }

    pub fn desk() -> Self {
        Self::from_params("desk", &CkksParams::desk())
    }

    /// Profile of a concrete parameter set, counting 64-bit words.
    pub fn from_params(name: &str, p: &CkksParams) -> Self {
        ParamProfile {
            name: name.to_string(),
            ring_degree: p.ring_degree,
            max_level: p.max_level,
            boot_levels: None,
            dnum: p.dnum,
            alpha: p.alpha(),
            slots: p.slots,
            word_bytes: 8,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "ark" => Ok(Self::ark()),
            "lattigo" => Ok(Self::lattigo()),
            "100x" => Ok(Self::hundred_x()),
            "f1" => Ok(Self::f1()),
            "desk" => Ok(Self::desk()),
            _ => Err(Error::Config(format!(
                "unknown profile '{name}' (expected desk, ark, lattigo, 100x or f1)"
            ))),
        }
    }

    /// The same profile with a different decomposition count.
    pub fn with_dnum(&self, dnum: usize) -> Result<Self> {
        if dnum == 0 || !(self.max_level + 1).is_multiple_of(dnum) {
            return Err(Error::Config(format!(
                "dnum = {dnum} does not divide L + 1 = {}",
                self.max_level + 1
            )));
        }
        let p = ParamProfile {
            dnum,
            alpha: (self.max_level + 1) / dnum,
            ..self.clone()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn log_degree(&self) -> u32 {
        self.ring_degree.trailing_zeros()
    }

    /// Bytes of one polynomial with `limbs` limbs.
    pub fn poly_bytes(&self, limbs: usize) -> u64 {
        (limbs * self.ring_degree * self.word_bytes) as u64
    }

    /// Number of decomposition pieces that cover limbs 0..=level.
    pub fn pieces_at(&self, level: usize) -> usize {
        (level + 1).div_ceil(self.alpha)
    }

    /// Bytes of an evaluation key truncated to the given working level.
    pub fn evk_bytes_at(&self, level: usize) -> u64 {
        (self.pieces_at(level) * 2) as u64 * self.poly_bytes(self.alpha + level + 1)
    }

    pub fn plaintext_bytes_at(&self, level: usize) -> u64 {
        self.poly_bytes(level + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DataSizes {
    pub plaintext: u64,
    pub ciphertext: u64,
    pub evk: u64,
}

impl DataSizes {
    pub fn as_array(&self) -> [u64; 3] {
        [self.plaintext, self.ciphertext, self.evk]
    }
}

/// Full-level plaintext, ciphertext and evaluation-key sizes in bytes.
pub fn data_sizes(p: &ParamProfile) -> DataSizes {
    let l = p.max_level + 1;
    DataSizes {
        plaintext: p.poly_bytes(l),
        ciphertext: 2 * p.poly_bytes(l),
        evk: (p.dnum * 2) as u64 * p.poly_bytes(p.alpha + l),
    }
}

/// Words of twisting factors a four-step transform would store per key switch
/// if they were not generated on the fly: one table per prime of PQ, two
/// directions.
pub fn twist_storage_words(p: &ParamProfile) -> u64 {
    (2 * (p.alpha + p.max_level + 1) * p.ring_degree) as u64
}

/// The four reference parameter rows and their data sizes in MiB
/// (plaintext, ciphertext, evk).
pub fn reference_rows() -> Vec<(ParamProfile, [f64; 3])> {
    vec![
        (ParamProfile::lattigo(), [12.5, 25.0, 150.0]),
        (ParamProfile::hundred_x(), [30.0, 60.0, 240.0]),
        (ParamProfile::f1(), [1.0, 2.0, 34.0]),
        (ParamProfile::ark(), [12.0, 24.0, 120.0]),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferPolicy {
    /// switch between limb-wise and coefficient-wise distribution as needed
    Alternating,
    LimbWiseOnly,
}

impl TransferPolicy {
    pub fn name(self) -> &'static str {
        match self {
            TransferPolicy::Alternating => "alternating",
            TransferPolicy::LimbWiseOnly => "limb-wise-only",
        }
    }
}

/// Words moved between compute units during one key switch.
pub fn distribution_transfer(p: &ParamProfile, policy: TransferPolicy) -> u64 {
    let row = ((p.alpha + p.max_level + 1) * p.ring_degree) as u64;
    let d = p.dnum as u64;
    match policy {
        TransferPolicy::Alternating => (d + 2) * row,
        // with two pieces or fewer both policies move the same data
        TransferPolicy::LimbWiseOnly if d <= 2 => (d + 2) * row,
        TransferPolicy::LimbWiseOnly => 2 * d * row,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MachineProfile {
    pub name: String,
    pub modular_multipliers: u64,
    pub clock_hz: f64,
    pub offchip_bandwidth: f64,
    pub onchip_capacity: u64,
}

impl MachineProfile {
    pub fn new(
        name: &str,
        modular_multipliers: u64,
        clock_hz: f64,
        offchip_bandwidth: f64,
        onchip_capacity: u64,
    ) -> Result<Self> {
        if modular_multipliers == 0 || !(clock_hz > 0.0) || !(offchip_bandwidth > 0.0) || onchip_capacity == 0 {
            return Err(Error::Config("machine profile fields must be positive".into()));
        }
        Ok(MachineProfile {
            name: name.to_string(),
            modular_multipliers,
            clock_hz,
            offchip_bandwidth,
            onchip_capacity,
        })
    }

    /// F1-style accelerator scaled up to bootstrappable parameters.
    pub fn scaled_f1() -> Self {
        Self::new("scaled-f1", 40_960, 1e9, 3e12, 64 * MIB).unwrap()
    }
}
