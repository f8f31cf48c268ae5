//! Prime-field arithmetic and negacyclic NTT kernels.

pub mod four_step;
mod limb;
mod modulus;
pub mod ntt;
pub mod prime;

pub use four_step::{expand_twist, four_step_ntt, FourStepNtt, TwistSchedule};
pub use limb::Limb;
pub use modulus::{mod_add, mod_mul, PrimeModulus, Reduction, MAX_MODULUS_BITS};
pub use ntt::{ntt, Direction, NttTable};
