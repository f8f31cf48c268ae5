//! RNS polynomials and their limb-level primitives.

pub mod automorphism;
mod basis;
pub mod bconv;
mod crt;
mod rns;

pub use automorphism::{apply_galois, automorphism, galois_element};
pub use basis::{BasisKind, LimbBasis};
pub use bconv::{base_convert, base_convert_naive, bconv_routine, BaseTable};
pub use crt::CrtReconstructor;
pub use rns::{elementwise, ElementwiseOp, Representation, RnsPoly};
