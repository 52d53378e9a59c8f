//! Cyclotomic numbers of order `2l^2` over prime fields, their equality-class
//! reduction, exact integer/rational matrix algebra, and the asymmetric
//! cipher built from cyclotomic matrices (CAC).
//!
//! The crate is organized around four layers:
//!
//! - [`field`]: arithmetic in `F_p` and `F_p*` — primitive roots, modular
//!   exponentiation, baby-step/giant-step discrete logarithms.
//! - [`cyclotomy`]: cyclotomic numbers `(a,b)` of order `e = 2l^2`, the
//!   symmetry relations that partition index pairs into equality classes,
//!   and cyclotomic matrix construction (class-reduced and naive paths).
//! - [`matrix`]: exact linear algebra over arbitrary-precision integers and
//!   rationals (fraction-free determinant and inverse).
//! - [`cac`]: key generation, message framing, encryption, secret-key
//!   expansion, decryption, and the no-secret attack that inverts the
//!   public matrix directly.
//!
//! The cipher is linear and therefore breakable by anyone holding the
//! public key; [`cac::break_ciphertext`] exists to demonstrate exactly
//! that. Nothing here is fit for protecting real data.

pub mod cac;
pub mod cyclotomy;
pub mod error;
pub mod field;
pub mod matrix;

pub use error::{Error, Result};
