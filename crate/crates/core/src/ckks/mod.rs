//! RNS-CKKS: parameters, keys, encoding, encryption and the primitive
//! homomorphic operations.

mod ciphertext;
mod context;
pub mod encoding;
pub mod keys;
pub mod keyswitch;
pub mod noise;
pub mod ops;
mod params;
mod serialize;

pub use ciphertext::{decode, decrypt, decrypt_decode, encode, encode_real, encrypt, Ciphertext, Plaintext};
pub use context::CkksContext;
pub use encoding::Encoder;
pub use keys::{
    gen_mult_key, gen_rotation_key, gen_secret_key, keygen, EvaluationKey, KeyKind, KeySet, RotationKeys, SecretKey,
};
pub use keyswitch::{key_switch, mod_down, mod_up};
pub use ops::{cadd, cmult, hadd, hadd_assign, hmult, hrescale, hrot, hrot_with, hsub, padd, pmult};
pub use params::CkksParams;
