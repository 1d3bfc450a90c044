//! Exact arithmetic: rationals, polynomials and rational functions in `n`, `k`.

pub mod factor;
mod field;
pub mod kpoly;
pub mod linalg;
mod modular;
mod poly;
mod polynk;
mod rat;
pub mod roots;
pub(crate) mod ratn;
mod ratnk;
mod zpoly;

pub use field::Field;
pub use kpoly::KPoly;
pub use poly::Poly;
pub use polynk::{poly_gcd, PolyNK};
pub use rat::Rat;
pub use ratn::RatN;
pub use ratnk::RatNK;
pub use zpoly::ZPoly;

/// Univariate polynomials over `Q` (used for `P(z)` in integer-linear factors
/// and for Nicole-style rational functions at fixed `n`).
pub type QPoly = Poly<Rat>;
