//! Structural matrix algebras `M_n(F, ρ)` over exact fields: quasi-orders
//! and their block upper triangular form, automorphisms, transitive
//! functions, and the factorization of an automorphism into inner,
//! transitive-function and permutation parts.

pub mod algebra;
pub mod automorphism;
pub mod blockform;
pub mod error;
pub mod examples;
pub mod factor;
pub mod field;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod perm;
pub mod relation;
pub mod transitive;

pub use algebra::StructMatrix;
pub use automorphism::{verify_automorphism, AutomorphismSpec, VerifyReport};
pub use blockform::{build_block_form, BlockForm};
pub use error::{Error, Result};
pub use factor::{factor_automorphism, Factorization};
pub use field::{Field, Scalar};
pub use linalg::DenseMatrix;
pub use perm::Permutation;
pub use relation::{ClassPartition, CondensationDag, Relation};
pub use transitive::{cocycle_rank, TransitiveFn};
