//! Exceptional Chevalley Lie algebras over prime fields.
//!
//! The crate builds the algebras of types g2, f4, e6, e7 and e8 from their
//! root systems, reduces the integer structure constants mod p, and decides
//! whether every derivation is inner — by a naive full Leibniz system and by
//! a block-diagonal method that exploits the root-space decomposition.

// Index loops over coupled arrays read better than iterator chains in the
// dense linear-algebra kernels below.
#![allow(clippy::needless_range_loop)]

pub mod cartan_decomp;
pub mod chevalley;
pub mod derivations;
pub mod genbasis;
pub mod gfp_linalg;
pub mod liecore;
pub mod rootsys;

pub use chevalley::{ChevalleyBasisZ, LieAlgebraFp};
pub use derivations::{DerivationReport, Method};
pub use rootsys::{LieType, RootSystem};
