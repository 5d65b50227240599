//! The six-part condition on candidate transcendental L-polynomials, the
//! explicit witness constructors, and the (Picard number, height) feasibility
//! oracle.
//!
//! A candidate is L(T) ∈ 1 + T·Q[T] of degree 2m, 1 <= m <= 10, checked at a
//! prime p. The bullets, in order:
//!
//! 1. every complex root has absolute value one;
//! 2. no root is a root of unity;
//! 3. L ∈ Z_ℓ[T] for every prime ℓ != p;
//! 4. with q = p^a, root valuations ν_q are -1/h (h times), 0 (2m - 2h times), 1/h (h times);
//! 5. L = Q^e with Q irreducible over Q;
//! 6. the negative-slope part Q_{<0} is irreducible over Q_p.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, int, Rat};
use crate::error::{Error, Result};
use crate::weilpoly::{
    has_cyclotomic_factor, integral_exponent, kronecker_certificate, newton_polygon, reciprocal_transform,
    squarefree_decompose, sturm_count, unit_circle_check, NewtonPolygon, RatPoly,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bullet {
    UnitCircle,
    NoRootOfUnity,
    LIntegral,
    SlopeProfile,
    PowerOfIrreducible,
    LocalIrreducible,
}

impl Bullet {
    pub const ALL: [Bullet; 6] = [
        Bullet::UnitCircle,
        Bullet::NoRootOfUnity,
        Bullet::LIntegral,
        Bullet::SlopeProfile,
        Bullet::PowerOfIrreducible,
        Bullet::LocalIrreducible,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }
}

impl std::fmt::Display for Bullet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", name.as_str().expect("string"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BulletCheck {
    pub status: CheckStatus,
    pub detail: String,
}

impl BulletCheck {
    fn new(status: CheckStatus, detail: impl Into<String>) -> BulletCheck {
        BulletCheck { status, detail: detail.into() }
    }

    fn pass_if(ok: bool, detail: impl Into<String>) -> BulletCheck {
        BulletCheck::new(if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { bullet: Bullet, reason: String },
    Unknown { bullet: Bullet, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition1Report {
    pub verdict: Verdict,
    pub p: u64,
    pub m: usize,
    /// Length of the negative-slope segment, when the profile matches.
    pub h: Option<usize>,
    /// Exponent with q = p^a.
    pub a: Option<u64>,
    pub e: Option<u32>,
    /// p^a in decimal.
    pub q: Option<String>,
    pub slope_profile: NewtonPolygon,
    pub checks: BTreeMap<Bullet, BulletCheck>,
}

impl Condition1Report {
    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn status(&self, bullet: Bullet) -> CheckStatus {
        self.checks[&bullet].status
    }

    /// (m, h, a, e) for a passing report.
    pub fn parameters(&self) -> Option<(usize, usize, u64, u32)> {
        Some((self.m, self.h?, self.a?, self.e?))
    }
}

fn negative_segment_check(q: &RatPoly, p: u64) -> Result<BulletCheck> {
    let np = newton_polygon(q, p)?;
    let negative: Vec<_> = np.segments.iter().filter(|s| s.slope.is_negative()).collect();
    Ok(match negative.as_slice() {
        [] => BulletCheck::new(CheckStatus::Fail, format!("Q has no root of negative valuation; polygon {np}")),
        [seg] => {
            let a = integral_exponent(&-seg.slope.clone(), seg.length);
            match a {
                Some(a) if a.gcd(&(seg.length as u64)) == 1 => BulletCheck::new(
                    CheckStatus::Pass,
                    format!("pure slope {} with gcd({a}, {h}) = 1", arith::format_rat(&seg.slope), h = seg.length),
                ),
                _ => BulletCheck::new(
                    CheckStatus::Unknown,
                    format!(
                        "slope {} over length {} is not pure; irreducibility over Q_p undecided",
                        arith::format_rat(&seg.slope),
                        seg.length
                    ),
                ),
            }
        }
        _ => BulletCheck::new(
            CheckStatus::Fail,
            format!("{} distinct negative slopes split Q_<0 over Q_p; polygon {np}", negative.len()),
        ),
    })
}

/// Evaluates all six bullets for L at p.
pub fn check_condition1(l: &RatPoly, p: u64) -> Result<Condition1Report> {
    arith::require_prime(p)?;
    if l.constant_term() != Rat::one() {
        return Err(Error::InvalidArgument("L must have constant term 1".into()));
    }
    let deg = l.degree().expect("constant term is 1");
    if deg % 2 != 0 || !(2..=20).contains(&deg) {
        return Err(Error::InvalidArgument(format!("L has degree {deg}; need an even degree 2m with 1 <= m <= 10")));
    }
    let m = deg / 2;
    let mut checks = BTreeMap::new();

    checks.insert(
        Bullet::UnitCircle,
        BulletCheck::pass_if(unit_circle_check(l), "self-reciprocal, T + 1/T image has all roots real in [-2, 2]"),
    );

    let cyclo = has_cyclotomic_factor(l);
    checks.insert(
        Bullet::NoRootOfUnity,
        match cyclo {
            Some(k) => BulletCheck::new(CheckStatus::Fail, format!("divisible by Φ_{k}")),
            None => BulletCheck::new(CheckStatus::Pass, "no cyclotomic factor"),
        },
    );

    let foreign = l.foreign_denominator_primes(p)?;
    checks.insert(
        Bullet::LIntegral,
        BulletCheck::pass_if(
            foreign.is_empty(),
            if foreign.is_empty() {
                format!("every denominator is a power of {p}")
            } else {
                format!("denominators divisible by {foreign:?}")
            },
        ),
    );

    let polygon = newton_polygon(l, p)?;
    let mut h = None;
    let mut a = None;
    let profile_check = match polygon.symmetric_profile() {
        Some(profile) if (1..=m).contains(&profile.h) => match integral_exponent(&profile.slope, profile.h) {
            Some(exp) if exp >= 1 => {
                h = Some(profile.h);
                a = Some(exp);
                let s = arith::format_rat(&profile.slope);
                BulletCheck::new(CheckStatus::Pass, format!("h = {}, a = {exp}: slopes -{s}, 0, {s}", profile.h))
            }
            _ => BulletCheck::new(
                CheckStatus::Fail,
                format!("slope {} times length {} is not an integer", arith::format_rat(&profile.slope), profile.h),
            ),
        },
        Some(profile) => BulletCheck::new(CheckStatus::Fail, format!("h = {} outside 1..={m}", profile.h)),
        None => BulletCheck::new(CheckStatus::Fail, format!("polygon {polygon} is not of the form (-s, h), (0, 2m-2h), (s, h)")),
    };
    checks.insert(Bullet::SlopeProfile, profile_check);

    let mut e = None;
    match squarefree_decompose(l) {
        Some((q, exp)) => {
            e = Some(exp);
            let cert = kronecker_certificate(&q, p)?;
            let check = if cert.is_certified() {
                BulletCheck::new(CheckStatus::Pass, format!("L = Q^{exp}, Q irreducible by the slope/Kronecker certificate"))
            } else {
                let failed: Vec<String> = cert
                    .premises
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| format!("{:?}: {}", c.premise, c.detail))
                    .collect();
                BulletCheck::new(CheckStatus::Unknown, format!("L = Q^{exp}; certificate premises failed: {}", failed.join("; ")))
            };
            checks.insert(Bullet::PowerOfIrreducible, check);
            checks.insert(Bullet::LocalIrreducible, negative_segment_check(&q, p)?);
        }
        None => {
            checks.insert(Bullet::PowerOfIrreducible, BulletCheck::new(CheckStatus::Fail, "L is not a power of its squarefree part"));
            checks.insert(Bullet::LocalIrreducible, BulletCheck::new(CheckStatus::Unknown, "no Q to examine"));
        }
    }

    let first = |status: CheckStatus| Bullet::ALL.into_iter().find(|b| checks[b].status == status);
    let verdict = if let Some(b) = first(CheckStatus::Fail) {
        Verdict::Fail { bullet: b, reason: checks[&b].detail.clone() }
    } else if let Some(b) = first(CheckStatus::Unknown) {
        Verdict::Unknown { bullet: b, reason: checks[&b].detail.clone() }
    } else {
        Verdict::Pass
    };
    let q = a.map(|a| BigUint::from(p).pow(a as u32).to_string());
    Ok(Condition1Report { verdict, p, m, h, a, e, q, slope_profile: polygon, checks })
}

// ---------------------------------------------------------------------------
// Constructors

fn generator(i: usize) -> RatPoly {
    match i {
        0 => RatPoly::from_ints(&[-1, 1]),
        1..=3 => RatPoly::from_ints(&[-(i as i64), 0, 1]),
        4 => RatPoly::from_ints(&[1, -3, 0, 1]),
        5 => RatPoly::from_ints(&[1, 0, -4, 0, 1]),
        _ => unreachable!("six generators"),
    }
}

/// Generator indices whose product is F₀ for each m.
const F0_TABLE: [&[usize]; 10] = [&[0], &[1], &[4], &[5], &[1, 4], &[1, 5], &[4, 5], &[1, 2, 5], &[1, 4, 5], &[1, 2, 3, 5]];

/// Monic integer F₀ of degree m with m distinct nonzero real roots in (-2, 2).
pub fn construct_f0(m: usize) -> Result<RatPoly> {
    if !(1..=10).contains(&m) {
        return Err(Error::InvalidArgument(format!("m = {m} is outside 1..=10")));
    }
    let f0 = F0_TABLE[m - 1].iter().fold(RatPoly::one(), |acc, &i| &acc * &generator(i));
    let (lo, hi) = (int(-2), int(2));
    let roots_ok = f0.degree() == Some(m)
        && f0.leading() == Some(&Rat::one())
        && !f0.constant_term().is_zero()
        && f0.is_squarefree()
        && f0.eval(&hi) != Rat::zero()
        && sturm_count(&f0, &lo, &hi)? == m;
    if !roots_ok {
        return Err(Error::Internal(format!("F0 for m = {m} fails its root-location guard")));
    }
    Ok(f0)
}

pub const DEFAULT_A_CAP: u64 = 50;

/// A constructed polynomial together with the report that certifies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(rename = "coefficients")]
    pub l: RatPoly,
    pub report: Condition1Report,
}

fn check_mh(m: usize, h: usize) -> Result<()> {
    if !(1..=10).contains(&m) || !(1..=m).contains(&h) {
        return Err(Error::InvalidArgument(format!("need 1 <= h <= m <= 10, got m = {m}, h = {h}")));
    }
    Ok(())
}

/// L = T^m F(T + 1/T) with F = F₀ + p^{-a} T^{m-h}, for the first passing a
/// coprime to h in a_start..=DEFAULT_A_CAP.
pub fn construct_l(p: u64, m: usize, h: usize, a_start: Option<u64>) -> Result<Witness> {
    construct_l_capped(p, m, h, a_start.unwrap_or(1), DEFAULT_A_CAP)
}

pub fn construct_l_capped(p: u64, m: usize, h: usize, a_start: u64, a_cap: u64) -> Result<Witness> {
    arith::require_prime(p)?;
    check_mh(m, h)?;
    let f0 = construct_f0(m)?;
    let bp = BigUint::from(p);
    for a in a_start.max(1)..=a_cap {
        if a.gcd(&(h as u64)) != 1 {
            continue;
        }
        let shift = Rat::new(1.into(), (&bp).pow(a as u32).into());
        let f = &f0 + &RatPoly::monomial(shift, m - h);
        let l = reciprocal_transform(&f)?;
        let report = check_condition1(&l, p)?;
        if report.is_pass() {
            if report.parameters() != Some((m, h, a, 1)) {
                return Err(Error::Internal(format!(
                    "passing witness at a = {a} reports {:?}, expected ({m}, {h}, {a}, 1)",
                    report.parameters()
                )));
            }
            return Ok(Witness { l, report });
        }
    }
    Err(Error::SearchExhausted(format!(
        "no a in {a_start}..={a_cap} coprime to h = {h} gives a passing witness for p = {p}, m = {m}"
    )))
}

/// Degree-20 witness with even height: the square of an (m = 5, h/2) witness.
pub fn construct_l_even_h(p: u64, h_even: usize) -> Result<Witness> {
    if h_even % 2 != 0 || !(2..=10).contains(&h_even) {
        return Err(Error::InvalidArgument(format!("height {h_even} must be even in 2..=10")));
    }
    let base = construct_l(p, 5, h_even / 2, None)?;
    let l = base.l.pow(2);
    let report = check_condition1(&l, p)?;
    let base_a = base.report.a.expect("passing report has a");
    if !report.is_pass() || report.parameters() != Some((10, h_even, 2 * base_a, 2)) {
        return Err(Error::Internal(format!(
            "squared witness for h = {h_even} reports {:?} with verdict {:?}",
            report.parameters(),
            report.verdict
        )));
    }
    Ok(Witness { l, report })
}

// ---------------------------------------------------------------------------
// Feasibility

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibilityReason {
    /// rho > 22 - 2h.
    ArtinViolation,
    TheoremCase { description: String },
    WitnessProvided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessStatus {
    Computed,
    UnsupportedCase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub p: u64,
    pub rho: u64,
    pub h: u64,
    pub feasible: bool,
    pub reason: FeasibilityReason,
    /// 11 - rho/2, the half-degree of the transcendental part.
    pub m: Option<usize>,
    pub witness: Option<Witness>,
    pub witness_status: Option<WitnessStatus>,
}

/// Whether a K3 surface over the algebraic closure of F_p with Picard number
/// rho and height h exists (p >= 5), optionally with an explicit witness.
pub fn feasibility(p: u64, rho: u64, h: u64, want_witness: bool) -> Result<FeasibilityVerdict> {
    if p < 5 {
        return Err(Error::InvalidArgument(format!("p = {p}: the existence criterion requires p >= 5")));
    }
    arith::require_prime(p)?;
    if rho == 0 || rho % 2 != 0 {
        return Err(Error::InvalidArgument(format!("rho = {rho} must be a positive even integer")));
    }
    if h == 0 {
        return Err(Error::InvalidArgument("height must be positive".into()));
    }
    let mut verdict = FeasibilityVerdict {
        p,
        rho,
        h,
        feasible: false,
        reason: FeasibilityReason::ArtinViolation,
        m: None,
        witness: None,
        witness_status: None,
    };
    if rho + 2 * h > 22 {
        return Ok(verdict);
    }
    let m = (11 - rho / 2) as usize;
    let hh = h as usize;
    verdict.feasible = true;
    verdict.m = Some(m);
    verdict.reason = FeasibilityReason::TheoremCase {
        description: format!("rho <= 22 - 2h; transcendental part of degree {} with height {h}", 2 * m),
    };
    if !want_witness {
        return Ok(verdict);
    }
    let witness = match (m, hh % 2, p) {
        (10, 0, _) => Some(construct_l_even_h(p, hh)?),
        (10, _, 5) => None,
        _ => Some(construct_l(p, m, hh, None)?),
    };
    match witness {
        Some(w) => {
            verdict.reason = FeasibilityReason::WitnessProvided;
            verdict.witness = Some(w);
            verdict.witness_status = Some(WitnessStatus::Computed);
        }
        None => {
            verdict.reason = FeasibilityReason::TheoremCase {
                description: "rho = 2 with odd height at p = 5: feasible by the existence theorem; a witness must \
                              generate a degree-20 CM field with square discriminant, which needs a class-group \
                              construction not implemented here"
                    .into(),
            };
            verdict.witness_status = Some(WitnessStatus::UnsupportedCase);
        }
    }
    Ok(verdict)
}

pub const TABLE_RHOS: [u64; 10] = [2, 4, 6, 8, 10, 12, 14, 16, 18, 20];
pub const TABLE_HEIGHTS: [u64; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

/// The full 10 x 10 grid, rows by rho then columns by h, computed in parallel.
pub fn feasibility_table(p: u64, want_witness: bool) -> Result<Vec<FeasibilityVerdict>> {
    let cells: Vec<(u64, u64)> =
        TABLE_RHOS.iter().flat_map(|&rho| TABLE_HEIGHTS.iter().map(move |&h| (rho, h))).collect();
    cells.par_iter().map(|&(rho, h)| feasibility(p, rho, h, want_witness)).collect()
}

/// Convenience for callers holding only the coefficient text.
pub fn check_condition1_text(coeffs: &str, p: u64) -> Result<Condition1Report> {
    check_condition1(&RatPoly::parse(coeffs)?, p)
}
