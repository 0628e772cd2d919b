//! Group quivers over `Z_p` and `T^d` and the algebras they present.
//!
//! * [`numt`]: exact integer arithmetic and integer matrices (Smith form, adjugate).
//! * [`finquiver`]: the finite quivers `Q_{n,m}(Z_p)`: construction, isomorphism,
//!   cycle structure and the census of isomorphism classes.
//! * [`torquiver`]: torus quiver data `(F, G)`, reduction to diagonal `F`, fibers and
//!   numerical checks of the orthonormal basis `{u_nu}`.
//! * [`starcalc`]: a normal-form engine for words in the generators `U_j`, `S` of
//!   `O_{F,G}(T^d)` together with the gauge structure built on it.

pub mod error;
pub mod finquiver;
pub mod numt;
pub mod starcalc;
pub mod torquiver;

pub use error::{Error, Result};
