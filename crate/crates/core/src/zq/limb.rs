use crate::error::{Error, Result};
use crate::zq::PrimeModulus;

/// Residues of one polynomial modulo one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limb {
    pub values: Vec<u64>,
    pub modulus: PrimeModulus,
}

impl Limb {
    pub fn new(values: Vec<u64>, modulus: PrimeModulus) -> Result<Self> {
        if !values.len().is_power_of_two() {
            return Err(Error::Config(format!(
                "limb length {} is not a power of two",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|&v| v >= modulus.value()) {
            return Err(Error::Range(format!(
                "limb entry {i} = {} is not below {}",
                values[i],
                modulus.value()
            )));
        }
        Ok(Limb { values, modulus })
    }

    pub fn zero(degree: usize, modulus: PrimeModulus) -> Self {
        Limb {
            values: vec![0; degree],
            modulus,
        }
    }

    pub fn degree(&self) -> usize {
        self.values.len()
    }

    /// Fixture layout: little-endian 8-byte words in index order.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.values.iter().flat_map(|v| v.to_le_bytes()).collect()
    }

    pub fn from_le_bytes(bytes: &[u8], modulus: PrimeModulus) -> Result<Self> {
        if !bytes.len().is_multiple_of(8) {
            return Err(Error::Serialization(format!(
                "limb payload of {} bytes is not a whole number of words",
                bytes.len()
            )));
        }
        let values = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Limb::new(values, modulus).map_err(|e| Error::Serialization(e.to_string()))
    }
}
