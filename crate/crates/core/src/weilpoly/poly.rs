use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, Rat};
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q, coefficients in ascending degree.
///
/// Trailing zeros are never stored; the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> RatPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&c| arith::int(c)).collect())
    }

    pub fn zero() -> RatPoly {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> RatPoly {
        RatPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> RatPoly {
        RatPoly::new(vec![c])
    }

    /// c * T^k
    pub fn monomial(c: Rat, k: usize) -> RatPoly {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.push(c);
        RatPoly::new(coeffs)
    }

    /// T
    pub fn x() -> RatPoly {
        RatPoly::monomial(Rat::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> RatPoly {
        let mut base = self.clone();
        let mut acc = RatPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division: self = q * divisor + r with deg r < deg divisor.
    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.leading().expect("nonzero divisor").recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    pub fn rem(&self, divisor: &RatPoly) -> Result<RatPoly> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    pub fn divides(&self, other: &RatPoly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, divisor: &RatPoly) -> Result<RatPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => RatPoly::zero(),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            // keep coefficient growth in check
            a = b.monic();
            b = r;
        }
        a.monic()
    }

    /// Scales so the constant term is 1; None if the constant term is 0.
    pub fn normalize_constant(&self) -> Option<RatPoly> {
        let c = self.constant_term();
        (!c.is_zero()).then(|| self.scale(&c.recip()))
    }

    /// T^deg * p(1/T).
    pub fn reversed(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// p / gcd(p, p'), monic.
    pub fn squarefree_part(&self) -> RatPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Whether every coefficient denominator is a power of p.
    pub fn denominators_are_powers_of(&self, p: u64) -> bool {
        let bp = BigInt::from(p);
        self.coeffs.iter().all(|c| {
            let mut d = c.denom().clone();
            while (&d % &bp).is_zero() {
                d /= &bp;
            }
            d.is_one()
        })
    }

    /// Primes dividing some coefficient denominator other than p, ascending.
    pub fn foreign_denominator_primes(&self, p: u64) -> Result<Vec<u64>> {
        let mut out: Vec<u64> = Vec::new();
        for c in &self.coeffs {
            out.extend(arith::factorize(c.denom().magnitude())?.into_iter().map(|(q, _)| q).filter(|&q| q != p));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Comma-separated ascending coefficients, e.g. `1,1/7,1,1/7,1`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(arith::format_rat).collect::<Vec<_>>().join(",")
    }

    pub fn parse(text: &str) -> Result<RatPoly> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        let coeffs = text.split(',').map(arith::parse_rat).collect::<Result<Vec<_>>>()?;
        Ok(RatPoly::new(coeffs))
    }
}

/// Writes L = R^e with R squarefree and R(0) = 1, if such a shape exists.
pub fn squarefree_decompose(l: &RatPoly) -> Option<(RatPoly, u32)> {
    let l = l.normalize_constant()?;
    let deg = l.degree()?;
    if deg == 0 {
        return Some((l, 1));
    }
    let r = l.squarefree_part().normalize_constant()?;
    let dr = r.degree()?;
    if dr == 0 || deg % dr != 0 {
        return None;
    }
    let e = u32::try_from(deg / dr).ok()?;
    (r.pow(e) == l).then_some((r, e))
}

impl fmt::Display for RatPoly {
    /// Human-readable form in T, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag_text = arith::format_rat(&mag);
            match i {
                0 => f.write_str(&mag_text)?,
                _ => {
                    if !mag.is_one() {
                        if mag.denom().is_one() {
                            write!(f, "{mag_text}*")?;
                        } else {
                            write!(f, "({mag_text})*")?;
                        }
                    }
                    if i == 1 {
                        f.write_str("T")?;
                    } else {
                        write!(f, "T^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for RatPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<RatPoly> {
        RatPoly::parse(s)
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(arith::format_rat))
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<RatPoly, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| arith::parse_rat(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(RatPoly::new(coeffs))
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);
