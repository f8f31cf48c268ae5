//! Bootstrapping's linear transforms: mod-raise, radix-2^k homomorphic
//! (I)DFT in baseline and Min-KS form, and plaintext constants stored as
//! q_0 seeds.

mod boot;
mod eval;
mod log;
mod plan;
mod seed;

pub use boot::{eval_mod_reference, mod_raise};
pub use eval::{
    encode_plan, hdft, hdft_baseline, hdft_minks, minks_rotate_accumulate, minks_rotations, EncodedDftPlan,
    EncodedGiant, EncodedIteration, EncodedTerm, HdftRun, PlanConstant, Variant,
};
pub use log::{EvkAction, EvkUsageLog, EvkUse};
pub use plan::{
    apply_diagonals, build_dft_plan, rotate_slots, DftDirection, DftPlan, Diagonals, PlanIteration, PlanShape,
};
pub use seed::{of_limb_extend, PlaintextSeed};
