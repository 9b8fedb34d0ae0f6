//! Exact elimination and consistency checks for systems of algebraic
//! differential-difference equations.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: the ground fields `Q` and `Q(t)`;
//! * [`ddpoly`]: differential-difference polynomials, shift, derivation, prolongation;
//! * [`groebner`]: Buchberger bases, normal forms, elimination, radical membership;
//! * [`elim`]: truncated consistency, elimination and membership searches with certificates;
//! * [`seq`]: evaluation on sequence windows and partial solutions;
//! * [`bounds`]: the computable bound tower for the truncation level.

pub mod bounds;
pub mod budget;
pub mod ddpoly;
pub mod elim;
pub mod field;
pub mod groebner;
pub mod seq;

pub use ddpoly::{DSPolynomial, Family, Measure, Monomial, PolySystem, VarRef};
pub use field::{FieldElement, GroundField};
