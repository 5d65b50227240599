//! Exact certification kernels for transcendental L-function candidates of
//! K3 surfaces over finite fields.
//!
//! - [`arith`]: rationals, valuations, square classes, Legendre and Hilbert symbols
//! - [`qform`]: diagonal quadratic spaces over Q, Hasse invariants, the CM embedding criterion
//! - [`k3lattice`]: the lattices N embedded in the K3 lattice and their proof obligations
//! - [`weilpoly`]: polynomials over Q, Sturm counts, Newton polygons, cyclotomic factors
//! - [`condition`]: the six-part condition checker, witness constructors, feasibility oracle
//!
//! All arithmetic is exact; there is no floating point anywhere in this crate.

pub mod arith;
pub mod condition;
pub mod error;
pub mod k3lattice;
pub mod qform;
pub mod weilpoly;

pub use arith::{Br2Class, Place, Rat, SquareClass};
pub use condition::{
    check_condition1, construct_f0, construct_l, construct_l_even_h, feasibility, feasibility_table, Bullet,
    Condition1Report, FeasibilityVerdict, Verdict,
};
pub use error::{Error, Result};
pub use k3lattice::{build_n, verify_lattice_cm, LatticeReport, LatticeSpec};
pub use qform::{CMFieldData, QuadSpace, SpaceInvariants};
pub use weilpoly::{NewtonPolygon, RatPoly};
