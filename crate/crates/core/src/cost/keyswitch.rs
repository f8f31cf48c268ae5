//! Modular-multiplication counts of one key switch and its neighbours.
//!
//! One op is one modular multiplication; additions are free.

use super::profile::ParamProfile;

/// Twisting multiplications per limb in a four-step transform, in units of N.
pub const TWIST_MULTS_PER_COEFF: usize = 1;

/// Multiplications of one forward or inverse transform over one limb:
/// N/2 · log N butterflies plus the twist.
pub fn ntt_mults_per_limb(p: &ParamProfile) -> u64 {
    let n = p.ring_degree as u64;
    n / 2 * p.log_degree() as u64 + TWIST_MULTS_PER_COEFF as u64 * n
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KeySwitchMults {
    pub ntt: u64,
    pub bconv: u64,
    pub elementwise: u64,
}

impl KeySwitchMults {
    pub fn total(&self) -> u64 {
        self.ntt + self.bconv + self.elementwise
    }

    pub fn ntt_share(&self) -> f64 {
        self.ntt as f64 / self.total() as f64
    }

    pub fn bconv_share(&self) -> f64 {
        self.bconv as f64 / self.total() as f64
    }

    pub fn elementwise_share(&self) -> f64 {
        self.elementwise as f64 / self.total() as f64
    }
}

/// Counts for switching one polynomial at `level`: raise every piece to PQ,
/// multiply with both key rows and accumulate, then divide both results by P.
pub fn keyswitch_mults(p: &ParamProfile, level: usize) -> KeySwitchMults {
    let limbs = level + 1;
    let alpha = p.alpha;
    let beta = p.pieces_at(level);
    let mut transforms = 0;
    let mut bconv = 0;
    for i in 0..beta {
        let size = alpha.min(limbs - alpha * i);
        // the piece's own limbs are kept; every other prime of PQ is produced
        let target = alpha + limbs - size;
        transforms += size + target;
        bconv += size + size * target;
    }
    let mut elementwise = beta * 2 * (alpha + limbs);
    // two polynomials leave PQ: INTT of the P limbs, convert to Q, NTT, then
    // (x − conv) · P⁻¹
    transforms += 2 * (alpha + limbs);
    bconv += 2 * (alpha + alpha * limbs);
    elementwise += 2 * limbs;
    let n = p.ring_degree as u64;
    KeySwitchMults {
        ntt: transforms as u64 * ntt_mults_per_limb(p),
        bconv: bconv as u64 * n,
        elementwise: elementwise as u64 * n,
    }
}

/// Rescaling a ciphertext at `level`: each of the two polynomials takes the
/// top limb back to coefficients, reduces it into the other limbs, transforms
/// it there and multiplies by q_level⁻¹.
pub fn rescale_mults(p: &ParamProfile, level: usize) -> u64 {
    let n = p.ring_degree as u64;
    2 * ((1 + level) as u64 * ntt_mults_per_limb(p) + level as u64 * n)
}

/// Plaintext times ciphertext at `level`.
pub fn pmult_mults(p: &ParamProfile, level: usize) -> u64 {
    (2 * (level + 1) * p.ring_degree) as u64
}

/// Regenerating a plaintext's limbs 0..=level from its q_0 seed.
pub fn of_limb_mults(p: &ParamProfile, level: usize) -> u64 {
    (level + 1) as u64 * ntt_mults_per_limb(p)
}
