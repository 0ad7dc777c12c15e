//! Exact construction and certification of linear matrices of constant rank
//! obtained from truncated graded modules over `k[x_0, ..., x_n]`.

pub mod betti;
pub mod bundles;
pub mod catalog;
pub mod error;
pub mod field;
pub mod free;
pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod rankverify;
pub mod rational;
pub mod reduction;
pub mod resolution;
pub mod tree;
pub mod window;

pub use error::{Error, Result};
pub use field::{Field, FieldKind, FieldSpec, PrimeField, Rationals};
pub use free::{GradedFreeMap, GradedFreeModule};
pub use matrix::Matrix;
pub use rational::Rational;
pub use poly::{monomial_basis, Monomial, Poly, QPoly};
pub use window::{GradedModuleWindow, HilbertData, WindowDocument};
