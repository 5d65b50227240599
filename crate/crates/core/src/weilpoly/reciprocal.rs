//! The substitution x = T + 1/T relating degree-m polynomials to
//! self-reciprocal polynomials of degree 2m.

use num_traits::{One, Zero};

use super::{sturm::sturm_count, RatPoly};
use crate::arith::{int, Rat};
use crate::error::{Error, Result};

/// (T^2 + 1)^k, the numerator of (T + 1/T)^k.
fn plus_one_powers(m: usize) -> Vec<RatPoly> {
    let base = RatPoly::from_ints(&[1, 0, 1]);
    let mut out = vec![RatPoly::one()];
    for k in 1..=m {
        out.push(&out[k - 1] * &base);
    }
    out
}

/// L(T) = T^m F(T + 1/T) for F of degree m.
pub fn reciprocal_transform(f: &RatPoly) -> Result<RatPoly> {
    let m = f.degree().ok_or(Error::Zero("reciprocal_transform"))?;
    let powers = plus_one_powers(m);
    let mut out = RatPoly::zero();
    for (k, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // T^{m-k} (T^2 + 1)^k
        out = &out + &(&RatPoly::monomial(c.clone(), m - k) * &powers[k]);
    }
    Ok(out)
}

pub fn is_self_reciprocal(l: &RatPoly) -> bool {
    !l.is_zero() && l.reversed() == *l
}

/// The unique G with L = T^m G(T + 1/T), for self-reciprocal L of degree 2m.
///
/// Peels off c * T^{m-k} (T^2 + 1)^k from the top degree down; None if a
/// nonzero remainder is left.
pub fn chebyshev_descent(l: &RatPoly) -> Option<RatPoly> {
    let deg = l.degree()?;
    if deg % 2 != 0 {
        return None;
    }
    let m = deg / 2;
    let powers = plus_one_powers(m);
    let mut rest = l.clone();
    let mut g = vec![Rat::zero(); m + 1];
    for k in (0..=m).rev() {
        let c = rest.coeff(m + k);
        if c.is_zero() {
            continue;
        }
        rest = &rest - &(&RatPoly::monomial(c.clone(), m - k) * &powers[k]);
        g[k] = c;
    }
    rest.is_zero().then(|| RatPoly::new(g))
}

/// Exact test that every complex root of L lies on the unit circle.
///
/// Requires L self-reciprocal with even degree; then the roots lie on the
/// circle iff G (L = T^m G(T + 1/T)) has only real roots in [-2, 2]. Any
/// polynomial that is not self-reciprocal is conservatively rejected.
pub fn unit_circle_check(l: &RatPoly) -> bool {
    if l.constant_term() != Rat::one() || !is_self_reciprocal(l) {
        return false;
    }
    let Some(g) = chebyshev_descent(l) else {
        return false;
    };
    let g = g.squarefree_part();
    let distinct = g.degree().unwrap_or(0);
    if distinct == 0 {
        return true;
    }
    let (lo, hi) = (int(-2), int(2));
    let Ok(inside) = sturm_count(&g, &lo, &hi) else {
        return false;
    };
    let at_lo = usize::from(g.eval(&lo).is_zero());
    inside + at_lo == distinct
}
