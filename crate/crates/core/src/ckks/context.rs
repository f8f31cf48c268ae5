use std::sync::Arc;

use crate::ckks::encoding::Encoder;
use crate::ckks::CkksParams;
use crate::error::Result;
use crate::poly::{BaseTable, BasisKind, LimbBasis};
use crate::zq::prime::ntt_primes;

/// Base-conversion tables for key switching at one level.
#[derive(Debug)]
pub(crate) struct LevelTables {
    /// (first, end) ciphertext-prime indices of each decomposition piece, and
    /// the table extending that piece to the rest of the level's extended basis
    pub pieces: Vec<(usize, usize, BaseTable)>,
    /// special primes to the level's ciphertext primes
    pub mod_down: BaseTable,
}

/// Everything derived from [`CkksParams`]: primes, NTT tables, conversion tables
/// and the encoder. Immutable and shareable across threads.
#[derive(Debug)]
pub struct CkksContext {
    params: CkksParams,
    q_basis: LimbBasis,
    p_basis: LimbBasis,
    /// ciphertext primes followed by special primes
    d_basis: LimbBasis,
    encoder: Encoder,
    levels: Vec<LevelTables>,
    /// P mod q_i
    p_mod_q: Vec<u64>,
    /// P⁻¹ mod q_i
    p_inv_mod_q: Vec<u64>,
}

impl CkksContext {
    pub fn new(params: CkksParams) -> Result<Arc<Self>> {
        params.validate()?;
        let n = params.ring_degree;
        let l = params.max_level;
        let alpha = params.alpha();

        let mut qs = ntt_primes(params.q0_bits, n, 1, &[])?;
        qs.extend(ntt_primes(params.q_bits, n, l, &qs)?);
        let ps = ntt_primes(params.p_bits, n, alpha, &qs)?;

        let q_basis = LimbBasis::from_primes(&qs, n, BasisKind::Ciphertext)?;
        let p_basis = LimbBasis::from_primes(&ps, n, BasisKind::Special)?;
        let d_basis = q_basis.concat(&p_basis, BasisKind::Extended)?;

        let mut levels = Vec::with_capacity(l + 1);
        for level in 0..=l {
            let cl = q_basis.prefix(level + 1);
            let dl = cl.concat(&p_basis, BasisKind::Extended)?;
            let mut pieces = Vec::new();
            let mut first = 0;
            let mut index = 0;
            while first <= level {
                let end = (first + alpha).min(level + 1);
                let piece = q_basis.slice(first..end, BasisKind::Partial(index));
                let rest = dl.difference(&piece, BasisKind::Other);
                pieces.push((first, end, BaseTable::new(&piece, &rest)?));
                first = end;
                index += 1;
            }
            levels.push(LevelTables {
                pieces,
                mod_down: BaseTable::new(&p_basis, &cl)?,
            });
        }

        let p_mod_q: Vec<u64> = q_basis
            .moduli()
            .map(|m| ps.iter().fold(1, |acc, &p| m.mul(acc, m.reduce(p))))
            .collect();
        let p_inv_mod_q = q_basis.moduli().zip(&p_mod_q).map(|(m, &x)| m.inv(x)).collect();

        Ok(Arc::new(CkksContext {
            encoder: Encoder::new(n, params.slots)?,
            params,
            q_basis,
            p_basis,
            d_basis,
            levels,
            p_mod_q,
            p_inv_mod_q,
        }))
    }

    pub fn params(&self) -> &CkksParams {
        &self.params
    }

    pub fn degree(&self) -> usize {
        self.params.ring_degree
    }

    pub fn slots(&self) -> usize {
        self.params.slots
    }

    pub fn max_level(&self) -> usize {
        self.params.max_level
    }

    pub fn alpha(&self) -> usize {
        self.params.alpha()
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    /// q_0 .. q_L
    pub fn q_basis(&self) -> &LimbBasis {
        &self.q_basis
    }

    /// p_0 .. p_(α-1)
    pub fn p_basis(&self) -> &LimbBasis {
        &self.p_basis
    }

    /// q_0 .. q_L, p_0 .. p_(α-1): the basis of keys
    pub fn d_basis(&self) -> &LimbBasis {
        &self.d_basis
    }

    /// q_0 .. q_level
    pub fn level_basis(&self, level: usize) -> LimbBasis {
        self.q_basis.prefix(level + 1)
    }

    /// q_0 .. q_level, p_0 .. p_(α-1)
    pub fn extended_basis(&self, level: usize) -> LimbBasis {
        self.level_basis(level)
            .concat(&self.p_basis, BasisKind::Extended)
            .expect("ciphertext and special primes are disjoint")
    }

    /// Number of decomposition pieces used at `level`.
    pub fn pieces_at(&self, level: usize) -> usize {
        self.levels[level].pieces.len()
    }

    pub(crate) fn level_tables(&self, level: usize) -> &LevelTables {
        &self.levels[level]
    }

    pub fn q(&self, i: usize) -> u64 {
        self.q_basis.modulus(i).value()
    }

    pub(crate) fn p_mod_q(&self) -> &[u64] {
        &self.p_mod_q
    }

    pub(crate) fn p_inv_mod_q(&self) -> &[u64] {
        &self.p_inv_mod_q
    }

    /// Index of extended-basis limb `pos` at `level` inside the full key basis.
    pub(crate) fn key_limb_index(&self, level: usize, pos: usize) -> usize {
        if pos <= level {
            pos
        } else {
            self.params.max_level + 1 + (pos - level - 1)
        }
    }
}
