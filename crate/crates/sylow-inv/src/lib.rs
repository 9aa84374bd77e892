//! Exact computational kernel for the Sylow p-subgroups of the finite
//! classical groups in their defining characteristic, together with the
//! invariant polynomial families attached to them and a verification layer
//! that machine-checks the algebraic identities, order formulas, degree
//! bounds and field-generation certificates at desk scale.

pub mod caps;
pub mod error;
pub mod families;
pub mod field;
pub mod matrix;
pub mod par;
pub mod groups;
pub mod poly;
pub mod rng;
pub mod steenrod;
pub mod verify;

pub use error::{Error, Result};
