use std::ops::Range;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::zq::{NttTable, PrimeModulus};

/// Role a basis plays in the scheme. Partial groups remember their index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// q_0 .. q_L, or a prefix of it
    Ciphertext,
    /// p_0 .. p_{α-1}
    Special,
    /// special primes followed by ciphertext primes
    Extended,
    /// one α-sized decomposition group of the ciphertext primes
    Partial(usize),
    Other,
}

/// Ordered set of distinct primes, each with its NTT table.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone, Debug)]
pub struct LimbBasis {
    tables: Vec<Arc<NttTable>>,
    kind: BasisKind,
}

impl PartialEq for LimbBasis {
    fn eq(&self, other: &Self) -> bool {
        self.tables.len() == other.tables.len()
            && self
                .tables
                .iter()
                .zip(&other.tables)
                .all(|(a, b)| a.modulus() == b.modulus() && a.degree() == b.degree())
    }
}

impl Eq for LimbBasis {}

impl LimbBasis {
    pub fn new(tables: Vec<Arc<NttTable>>, kind: BasisKind) -> Result<Self> {
        if let Some(first) = tables.first() {
            let n = first.degree();
            if tables.iter().any(|t| t.degree() != n) {
                return Err(Error::Config("basis tables disagree on the ring degree".into()));
            }
        }
        for (i, a) in tables.iter().enumerate() {
            if tables[..i].iter().any(|b| b.modulus() == a.modulus()) {
                return Err(Error::Config(format!(
                    "prime {} appears twice in a basis",
                    a.modulus().value()
                )));
            }
        }
        Ok(LimbBasis { tables, kind })
    }

    pub fn from_primes(primes: &[u64], degree: usize, kind: BasisKind) -> Result<Self> {
        let tables = primes
            .iter()
            .map(|&q| Ok(Arc::new(NttTable::new(PrimeModulus::new(q)?, degree)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(tables, kind)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: BasisKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.tables.first().map_or(0, |t| t.degree())
    }

    pub fn table(&self, i: usize) -> &NttTable {
        &self.tables[i]
    }

    pub fn tables(&self) -> &[Arc<NttTable>] {
        &self.tables
    }

    pub fn modulus(&self, i: usize) -> &PrimeModulus {
        self.tables[i].modulus()
    }

    pub fn moduli(&self) -> impl Iterator<Item = &PrimeModulus> + '_ {
        self.tables.iter().map(|t| t.modulus())
    }

    /// Prime values in order; these double as basis identifiers on disk.
    pub fn primes(&self) -> Vec<u64> {
        self.moduli().map(|m| m.value()).collect()
    }

    pub fn position(&self, q: u64) -> Option<usize> {
        self.moduli().position(|m| m.value() == q)
    }

    pub fn slice(&self, range: Range<usize>, kind: BasisKind) -> LimbBasis {
        LimbBasis {
            tables: self.tables[range].to_vec(),
            kind,
        }
    }

    pub fn prefix(&self, len: usize) -> LimbBasis {
        self.slice(0..len, self.kind)
    }

    /// Concatenation; fails if the two share a prime.
    pub fn concat(&self, other: &LimbBasis, kind: BasisKind) -> Result<LimbBasis> {
        let mut tables = self.tables.clone();
        tables.extend(other.tables.iter().cloned());
        Self::new(tables, kind)
    }

    /// Primes of `self` that are not in `other`, order preserved.
    pub fn difference(&self, other: &LimbBasis, kind: BasisKind) -> LimbBasis {
        let tables = self
            .tables
            .iter()
            .filter(|t| other.position(t.modulus().value()).is_none())
            .cloned()
            .collect();
        LimbBasis { tables, kind }
    }

    pub fn product(&self) -> BigUint {
        self.moduli()
            .fold(BigUint::from(1u32), |acc, m| acc * BigUint::from(m.value()))
    }
}
