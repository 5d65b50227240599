use num_traits::{Signed, Zero};

use super::RatPoly;
use crate::arith::Rat;
use crate::error::{Error, Result};

/// Sturm sequence f, f', -rem(f, f'), ... down to a nonzero constant.
///
/// Every member is rescaled by a positive constant, which leaves sign
/// changes untouched but keeps coefficients small.
pub fn sturm_sequence(f: &RatPoly) -> Vec<RatPoly> {
    let tame = |p: RatPoly| match p.leading() {
        Some(l) => p.scale(&l.abs().recip()),
        None => p,
    };
    let mut seq = vec![tame(f.clone())];
    let d = f.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(tame(d));
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero member");
        if r.is_zero() {
            return seq;
        }
        seq.push(tame(-&r));
    }
}

/// Sign changes of the sequence at x, zeros skipped.
pub fn sign_changes(seq: &[RatPoly], x: &Rat) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of a squarefree f in the half-open interval (lo, hi].
pub fn sturm_count(f: &RatPoly, lo: &Rat, hi: &Rat) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("sturm_count of the zero polynomial".into()));
    }
    if lo >= hi {
        return Err(Error::InvalidArgument("sturm_count needs lo < hi".into()));
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let seq = sturm_sequence(f);
    let (vl, vh) = (sign_changes(&seq, lo), sign_changes(&seq, hi));
    vl.checked_sub(vh)
        .ok_or_else(|| Error::Internal("Sturm sign-change count increased".into()))
}

/// Cauchy bound: every complex root has |z| < 1 + max |a_i / a_n|.
pub fn cauchy_bound(f: &RatPoly) -> Rat {
    let lead = f.leading().cloned().unwrap_or_else(|| Rat::from_integer(1.into()));
    let max = f
        .coeffs()
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    max + Rat::from_integer(1.into())
}
