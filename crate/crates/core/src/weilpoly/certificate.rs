//! Irreducibility over Q from a pure p-adic slope plus Kronecker's theorem.
//!
//! Let R be squarefree with R(0) = 1, all roots on the unit circle, no root
//! of unity among them, and coefficients integral away from p. If the
//! negative-slope part of the Newton polygon at p is a single segment of
//! length h and slope -a/h with gcd(a, h) = 1, those h roots form one
//! irreducible factor over Q_p. Any other Q-factor is closed under z ↦ 1/z
//! (unit circle and real coefficients), so it holds only p-adic units and is
//! therefore a monic integer polynomial with all roots on the circle. By
//! Kronecker it would be cyclotomic, which was ruled out. Hence R is
//! irreducible.

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{has_cyclotomic_factor, newton_polygon, unit_circle_check, RatPoly};
use crate::arith::Rat;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateVerdict {
    Certified,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Premise {
    PureSlope,
    NoCyclotomicFactor,
    UnitCircle,
    LIntegrality,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremiseCheck {
    pub premise: Premise,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityCertificate {
    pub verdict: CertificateVerdict,
    pub p: u64,
    /// Length of the negative-slope segment.
    pub h: Option<usize>,
    /// a with negative slope -a/h.
    pub a: Option<u64>,
    pub premises: Vec<PremiseCheck>,
}

impl IrreducibilityCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == CertificateVerdict::Certified
    }
}

/// (h, a) when the slope s of a length-h segment makes a = s*h an integer.
pub(crate) fn integral_exponent(slope: &Rat, h: usize) -> Option<u64> {
    let a = slope * Rat::from_integer(h.into());
    a.is_integer().then(|| a.to_integer().to_u64()).flatten()
}

pub fn kronecker_certificate(r: &RatPoly, p: u64) -> Result<IrreducibilityCertificate> {
    if r.constant_term() != Rat::from_integer(1.into()) {
        return Err(Error::InvalidArgument("certificate needs R(0) = 1".into()));
    }
    if !r.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let np = newton_polygon(r, p)?;
    let mut premises = Vec::with_capacity(4);

    let (h, a) = match np.symmetric_profile() {
        Some(profile) => (Some(profile.h), integral_exponent(&profile.slope, profile.h)),
        None => (None, None),
    };
    let pure = matches!((h, a), (Some(h), Some(a)) if a >= 1 && a.gcd(&(h as u64)) == 1);
    premises.push(PremiseCheck {
        premise: Premise::PureSlope,
        holds: pure,
        detail: match (h, a) {
            (Some(h), Some(a)) => format!("polygon {np}: negative segment length {h}, slope -{a}/{h}"),
            (Some(h), None) => format!("polygon {np}: slope times length {h} is not an integer"),
            _ => format!("polygon {np} is not of the form (-s, h), (0, *), (s, h)"),
        },
    });

    let cyclo = has_cyclotomic_factor(r);
    premises.push(PremiseCheck {
        premise: Premise::NoCyclotomicFactor,
        holds: cyclo.is_none(),
        detail: match cyclo {
            Some(k) => format!("divisible by Φ_{k}"),
            None => "no Φ_k divides R".into(),
        },
    });

    let circle = unit_circle_check(r);
    premises.push(PremiseCheck {
        premise: Premise::UnitCircle,
        holds: circle,
        detail: if circle { "all roots on |z| = 1".into() } else { "unit-circle test failed".into() },
    });

    let integral = r.denominators_are_powers_of(p);
    premises.push(PremiseCheck {
        premise: Premise::LIntegrality,
        holds: integral,
        detail: if integral {
            format!("denominators are powers of {p}")
        } else {
            format!("denominator primes other than {p}: {:?}", r.foreign_denominator_primes(p)?)
        },
    });

    let verdict = if premises.iter().all(|c| c.holds) {
        CertificateVerdict::Certified
    } else {
        CertificateVerdict::Unknown
    };
    Ok(IrreducibilityCertificate { verdict, p, h, a, premises })
}
