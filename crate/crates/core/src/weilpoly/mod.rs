//! Exact polynomial engine over Q.
//!
//! No root is ever approximated: real-root counts come from Sturm sequences,
//! p-adic root valuations from Newton polygons, roots of unity from exact
//! division by cyclotomic polynomials.

mod certificate;
mod cyclotomic;
mod newton;
mod poly;
mod reciprocal;
mod sturm;

pub use certificate::{kronecker_certificate, CertificateVerdict, IrreducibilityCertificate, Premise, PremiseCheck};
pub(crate) use certificate::integral_exponent;
pub use cyclotomic::{
    cyclotomic_index_list, cyclotomic_poly, cyclotomic_table, euler_phi, has_cyclotomic_factor, strip_cyclotomic,
};
pub use newton::{newton_polygon, NewtonPolygon, Segment, SlopeProfile};
pub use poly::{squarefree_decompose, RatPoly};
pub use reciprocal::{chebyshev_descent, is_self_reciprocal, reciprocal_transform, unit_circle_check};
pub use sturm::{cauchy_bound, sign_changes, sturm_count, sturm_sequence};
