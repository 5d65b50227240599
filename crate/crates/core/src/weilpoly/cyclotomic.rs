//! Cyclotomic polynomials and detection of roots of unity.

use std::collections::BTreeMap;

use super::RatPoly;
use crate::arith::Rat;
use crate::error::{Error, Result};

pub fn euler_phi(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// All k >= 1 with φ(k) <= maxdeg, ascending.
pub fn cyclotomic_index_list(maxdeg: usize) -> Vec<usize> {
    // φ(k) >= sqrt(k/2), so k <= 2 maxdeg^2
    let bound = 2 * maxdeg.max(1) * maxdeg.max(1);
    (1..=bound).filter(|&k| euler_phi(k) <= maxdeg).collect()
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Φ_k for every k in `indices`, built by exact division of T^k - 1 by Φ_d for proper divisors d.
pub fn cyclotomic_table(indices: &[usize]) -> Vec<(usize, RatPoly)> {
    let mut cache: BTreeMap<usize, RatPoly> = BTreeMap::new();
    fn build(k: usize, cache: &mut BTreeMap<usize, RatPoly>) -> RatPoly {
        if let Some(p) = cache.get(&k) {
            return p.clone();
        }
        let mut coeffs = vec![Rat::from_integer(0.into()); k + 1];
        coeffs[0] = Rat::from_integer((-1).into());
        coeffs[k] = Rat::from_integer(1.into());
        let mut p = RatPoly::new(coeffs);
        for d in divisors(k).into_iter().filter(|&d| d < k) {
            let phi_d = build(d, cache);
            p = p.exact_div(&phi_d).expect("Φ_d divides T^k - 1");
        }
        cache.insert(k, p.clone());
        p
    }
    indices.iter().map(|&k| (k, build(k, &mut cache))).collect()
}

pub fn cyclotomic_poly(k: usize) -> Result<RatPoly> {
    if k == 0 {
        return Err(Error::InvalidArgument("cyclotomic index must be positive".into()));
    }
    Ok(cyclotomic_table(&[k]).pop().expect("one entry").1)
}

/// Smallest k with Φ_k | L, or None when L has no root of unity as a root.
pub fn has_cyclotomic_factor(l: &RatPoly) -> Option<usize> {
    let deg = l.degree()?;
    cyclotomic_table(&cyclotomic_index_list(deg))
        .into_iter()
        .find(|(_, phi)| phi.divides(l).expect("Φ_k is nonzero"))
        .map(|(k, _)| k)
}

/// Divides out every cyclotomic factor with multiplicity.
///
/// Returns the remaining factor scaled to constant term 1, and the removed
/// indices in ascending order.
pub fn strip_cyclotomic(p: &RatPoly) -> Result<(RatPoly, Vec<usize>)> {
    if p.constant_term() == Rat::from_integer(0.into()) {
        return Err(Error::InvalidArgument("strip_cyclotomic needs a nonzero constant term".into()));
    }
    let deg = p.degree().expect("nonzero constant term");
    let mut rest = p.clone();
    let mut removed = Vec::new();
    for (k, phi) in cyclotomic_table(&cyclotomic_index_list(deg)) {
        loop {
            let (q, r) = rest.div_rem(&phi)?;
            if !r.is_zero() {
                break;
            }
            rest = q;
            removed.push(k);
        }
    }
    let rest = rest.normalize_constant().expect("constant term stays nonzero");
    Ok((rest, removed))
}
