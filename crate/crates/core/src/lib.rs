//! Conditional-expectation channels of finite-dimensional matrix algebras and the
//! orthogonality and relative-privacy measures built from them.

pub mod algebra;
pub mod channels;
pub mod error;
pub mod linalg;
pub mod mub;
pub mod paperlab;
pub mod privacy;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CScalar, CVector};
