use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scheme parameters as written in a parameter file.
///
/// ```toml
/// N = 8192
/// n = 64
/// L = 7
/// dnum = 2
/// scale_bits = 40
/// q0_bits = 60
/// q_bits = 40
/// p_bits = 60
/// sigma = 3.2
/// seed = 1
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CkksParams {
    #[serde(rename = "N")]
    pub ring_degree: usize,
    #[serde(rename = "n")]
    pub slots: usize,
    #[serde(rename = "L")]
    pub max_level: usize,
    pub dnum: usize,
    /// log2 of the default scale Δ
    pub scale_bits: f64,
    pub q0_bits: u32,
    /// width of q_1 .. q_L; these should sit close to Δ so rescaling keeps the scale
    pub q_bits: u32,
    pub p_bits: u32,
    pub sigma: f64,
    /// Fixed number of nonzero secret coefficients; dense ternary when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamming_weight: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl CkksParams {
    /// Desk-scale set: large enough for multi-limb base conversion and
    /// multi-iteration transforms, small enough for second-scale tests. Not
    /// intended to be secure.
    pub fn desk() -> Self {
        CkksParams {
            ring_degree: 1 << 13,
            slots: 1 << 6,
            max_level: 7,
            dnum: 2,
            scale_bits: 40.0,
            q0_bits: 60,
            q_bits: 40,
            p_bits: 60,
            sigma: 3.2,
            hamming_weight: None,
            seed: 1,
        }
    }

    /// Full-slot ring for the bootstrapping linear-transform loop: N = 2n so
    /// the transforms see every coefficient and no slot folding is needed.
    pub fn desk_bootstrap() -> Self {
        CkksParams {
            ring_degree: 1 << 7,
            slots: 1 << 6,
            scale_bits: 50.0,
            ..Self::desk()
        }
    }

    /// Tiny ring for exhaustive and big-integer checks.
    pub fn toy(log_degree: u32) -> Self {
        CkksParams {
            ring_degree: 1 << log_degree,
            slots: 1 << (log_degree - 1),
            max_level: 3,
            dnum: 2,
            scale_bits: 30.0,
            q0_bits: 50,
            q_bits: 30,
            p_bits: 50,
            ..Self::desk()
        }
    }

    pub fn alpha(&self) -> usize {
        (self.max_level + 1) / self.dnum
    }

    pub fn scale(&self) -> f64 {
        self.scale_bits.exp2()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.ring_degree;
        if !n.is_power_of_two() || n < 4 {
            return Err(Error::Config(format!("N = {n} must be a power of two ≥ 4")));
        }
        if !self.slots.is_power_of_two() || self.slots > n / 2 || self.slots < 2 {
            return Err(Error::Config(format!(
                "n = {} must be a power of two with 2 ≤ n ≤ N/2",
                self.slots
            )));
        }
        if self.dnum == 0 || !(self.max_level + 1).is_multiple_of(self.dnum) {
            return Err(Error::Config(format!(
                "L + 1 = {} is not divisible by dnum = {}",
                self.max_level + 1,
                self.dnum
            )));
        }
        for (name, bits) in [
            ("q0_bits", self.q0_bits),
            ("q_bits", self.q_bits),
            ("p_bits", self.p_bits),
        ] {
            if !(20..=crate::zq::MAX_MODULUS_BITS).contains(&bits) {
                return Err(Error::Config(format!("{name} = {bits} is outside 20..=60")));
            }
        }
        if !(self.scale_bits > 0.0 && self.scale_bits < self.q0_bits as f64 - 1.0) {
            return Err(Error::Config(format!(
                "scale_bits = {} must be positive and below q0_bits - 1",
                self.scale_bits
            )));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config("sigma must be positive".into()));
        }
        if let Some(h) = self.hamming_weight {
            if h == 0 || h > n {
                return Err(Error::Config(format!("hamming weight {h} out of range")));
            }
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let p: CkksParams = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("parameters always serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).at_path(path))?;
        Self::from_toml(&text).map_err(|e| e.at_path(path))
    }
}
