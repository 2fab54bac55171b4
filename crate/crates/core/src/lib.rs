//! Enumeration of left Bruck loops, commutative automorphic loops and
//! involutory latin quandles of odd prime-power order by central extension.

pub mod cocycle;
pub mod correspond;
pub mod error;
pub mod gf;
pub mod iso;
pub mod loops;
pub mod perm;
pub mod pipeline;
pub mod symmetry;

pub use cocycle::{Cocycle, Variety};
pub use error::{Error, Result};
pub use gf::{Fp, GfMatrix, QuotientSpace, RrefBasis, StreamingSolver};
pub use loops::{CayleyTable, InnerKind, LoopTable, Magma, QuandleTable};
pub use perm::Permutation;
