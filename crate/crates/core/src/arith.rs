//! Exact integer and rational arithmetic over Q and its completions.
//!
//! Valuations, square classes, Legendre and Hilbert symbols, and the two
//! small prime searches the lattice constructor relies on. Everything here is
//! a pure function of its arguments.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num/den`, with the denominator omitted when it is 1.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Serde adapter storing a [`Rat`] as its `num/den` string.
pub mod rat_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Primes

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve primes as witnesses cover all of u64.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn require_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

fn require_odd_prime(p: u64) -> Result<u64> {
    if p != 2 && is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// Converts an arbitrary integer into a prime below 2^64.
pub fn prime_from_bigint(p: &BigInt) -> Result<u64> {
    let small = p
        .to_u64()
        .ok_or_else(|| if p.is_negative() { Error::NotPrime(p.to_string()) } else { Error::OutOfRange(p.to_string()) })?;
    require_prime(small)
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
///
/// Small primes are stripped by trial division; the cofactor must then fit in
/// a u64, where Pollard-Brent finishes the job.
pub fn factorize(n: &BigUint) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::Zero("factorize"));
    }
    let mut primes = Vec::new();
    let mut rest = n.clone();
    for p in (2u64..1000).filter(|&p| is_prime(p)) {
        let bp = BigUint::from(p);
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            primes.push(p);
        }
    }
    let rest = rest.to_u64().ok_or_else(|| Error::OutOfRange(n.to_string()))?;
    factor_u64_into(rest, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Distinct primes dividing the numerator or denominator of `x`.
pub fn support_primes(x: &Rat) -> Result<Vec<u64>> {
    let mut ps: Vec<u64> = Vec::new();
    for part in [x.numer(), x.denom()] {
        if part.is_zero() {
            continue;
        }
        ps.extend(factorize(part.magnitude())?.into_iter().map(|(p, _)| p));
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

// ---------------------------------------------------------------------------
// Valuations

/// A p-adic valuation: an integer, or +infinity for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer, and the cofactor.
pub(crate) fn split_power(x: &BigInt, p: u64) -> (i64, BigInt) {
    debug_assert!(!x.is_zero());
    let bp = BigInt::from(p);
    let mut v = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(&bp);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

pub(crate) fn val_int(x: &BigInt, p: u64) -> i64 {
    split_power(x, p).0
}

/// ν_p(x), normalized by ν_p(p) = 1.
pub fn val_p(x: &Rat, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    Ok(val_p_unchecked(x, p))
}

pub(crate) fn val_p_unchecked(x: &Rat, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(val_int(x.numer(), p) - val_int(x.denom(), p))
}

// ---------------------------------------------------------------------------
// Places, Brauer classes, square classes

/// A place of Q: a prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl Place {
    pub fn prime(p: u64) -> Result<Place> {
        require_prime(p).map(Place::Finite)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Place::Infinite),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::Parse(format!("bad place {t:?}")))?;
                Place::prime(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Place, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of Br(Q_v)[2] = Z/2.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Br2Class(bool);

impl Br2Class {
    pub const TRIVIAL: Br2Class = Br2Class(false);
    pub const NONTRIVIAL: Br2Class = Br2Class(true);

    pub fn from_bit(bit: u8) -> Br2Class {
        Br2Class(bit & 1 == 1)
    }

    pub fn bit(self) -> u8 {
        self.0 as u8
    }

    pub fn is_trivial(self) -> bool {
        !self.0
    }
}

impl Add for Br2Class {
    type Output = Br2Class;
    fn add(self, rhs: Br2Class) -> Br2Class {
        Br2Class(self.0 ^ rhs.0)
    }
}

impl AddAssign for Br2Class {
    fn add_assign(&mut self, rhs: Br2Class) {
        self.0 ^= rhs.0;
    }
}

impl std::iter::Sum for Br2Class {
    fn sum<I: Iterator<Item = Br2Class>>(iter: I) -> Br2Class {
        iter.fold(Br2Class::TRIVIAL, Add::add)
    }
}

impl fmt::Display for Br2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

impl Serialize for Br2Class {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.bit())
    }
}

impl<'de> Deserialize<'de> for Br2Class {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Br2Class, D::Error> {
        match u8::deserialize(d)? {
            b @ (0 | 1) => Ok(Br2Class::from_bit(b)),
            b => Err(serde::de::Error::custom(format!("Brauer class bit must be 0 or 1, got {b}"))),
        }
    }
}

/// Element of Q*/(Q*)^2 as (sign, squarefree positive integer).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareClass {
    sign: i8,
    squarefree: BigUint,
}

impl SquareClass {
    pub fn one() -> SquareClass {
        SquareClass { sign: 1, squarefree: BigUint::one() }
    }

    pub fn minus_one() -> SquareClass {
        SquareClass { sign: -1, squarefree: BigUint::one() }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn squarefree_part(&self) -> &BigUint {
        &self.squarefree
    }

    pub fn is_square(&self) -> bool {
        self.sign == 1 && self.squarefree.is_one()
    }

    /// The canonical integer representative sign * squarefree.
    pub fn representative(&self) -> BigInt {
        let sign = if self.sign < 0 { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, self.squarefree.clone())
    }

    pub fn to_rat(&self) -> Rat {
        Rat::from_integer(self.representative())
    }
}

impl Mul for &SquareClass {
    type Output = SquareClass;
    fn mul(self, rhs: &SquareClass) -> SquareClass {
        let g = self.squarefree.gcd(&rhs.squarefree);
        SquareClass {
            sign: self.sign * rhs.sign,
            squarefree: (&self.squarefree / &g) * (&rhs.squarefree / &g),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

#[derive(Serialize, Deserialize)]
struct SquareClassRepr {
    sign: i8,
    sqfree: serde_json::Value,
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sqfree = match self.squarefree.to_u64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(self.squarefree.to_string()),
        };
        SquareClassRepr { sign: self.sign, sqfree }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<SquareClass, D::Error> {
        use serde::de::Error as _;
        let repr = SquareClassRepr::deserialize(d)?;
        let text = match &repr.sqfree {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            other => return Err(D::Error::custom(format!("bad sqfree {other}"))),
        };
        let sqf = BigUint::from_str(&text).map_err(D::Error::custom)?;
        let x = BigInt::from_biguint(if repr.sign < 0 { Sign::Minus } else { Sign::Plus }, sqf);
        square_class(&Rat::from_integer(x)).map_err(D::Error::custom)
    }
}

fn squarefree_part(n: &BigUint) -> Result<BigUint> {
    Ok(factorize(n)?
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| BigUint::from(p))
        .product())
}

/// Canonical representative of x in Q*/(Q*)^2.
pub fn square_class(x: &Rat) -> Result<SquareClass> {
    if x.is_zero() {
        return Err(Error::Zero("square_class"));
    }
    // num/den ~ num*den, and num, den are coprime
    let sqf_num = squarefree_part(x.numer().magnitude())?;
    let sqf_den = squarefree_part(x.denom().magnitude())?;
    Ok(SquareClass {
        sign: if x.is_negative() { -1 } else { 1 },
        squarefree: sqf_num * sqf_den,
    })
}

// ---------------------------------------------------------------------------
// Symbols

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    require_odd_prime(p)?;
    Ok(legendre_unchecked(a, p))
}

fn legendre_unchecked(a: &BigInt, p: u64) -> i8 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p");
    match r {
        0 => 0,
        _ if pow_mod(r, (p - 1) / 2, p) == 1 => 1,
        _ => -1,
    }
}

fn is_nonresidue(u: &BigInt, p: u64) -> bool {
    legendre_unchecked(u, p) == -1
}

fn mod8(u: &BigInt) -> u64 {
    u.mod_floor(&BigInt::from(8)).to_u64().expect("residue below 8")
}

/// Integer with the same square class as a nonzero rational.
fn integral_rep(x: &Rat) -> BigInt {
    x.numer() * x.denom()
}

/// Hilbert symbol (a, b)_v as an element of Z/2 (0 = trivial, i.e. +1).
///
/// Closed form at every place: sign analysis at infinity, Legendre symbols at
/// odd primes, and the epsilon/omega exponents at 2.
pub fn hilbert(a: &Rat, b: &Rat, v: Place) -> Result<Br2Class> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("hilbert"));
    }
    if let Place::Finite(p) = v {
        require_prime(p)?;
    }
    Ok(hilbert_unchecked(a, b, v))
}

pub(crate) fn hilbert_unchecked(a: &Rat, b: &Rat, v: Place) -> Br2Class {
    let p = match v {
        Place::Infinite => return Br2Class(a.is_negative() && b.is_negative()),
        Place::Finite(p) => p,
    };
    let (alpha, u) = split_power(&integral_rep(a), p);
    let (beta, w) = split_power(&integral_rep(b), p);
    let (alpha, beta) = ((alpha & 1) as u8, (beta & 1) as u8);
    let bit = if p == 2 {
        let (u8_, w8) = (mod8(&u), mod8(&w));
        let eps = |x: u64| (((x - 1) / 2) & 1) as u8;
        let omega = |x: u64| (((x * x - 1) / 8) & 1) as u8;
        eps(u8_) * eps(w8) + alpha * omega(w8) + beta * omega(u8_)
    } else {
        let eps_p = (((p - 1) / 2) & 1) as u8;
        alpha * beta * eps_p + beta * is_nonresidue(&u, p) as u8 + alpha * is_nonresidue(&w, p) as u8
    };
    Br2Class::from_bit(bit)
}

/// Whether x is a square in Q_v.
pub fn is_local_square(x: &Rat, v: Place) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::Zero("is_local_square"));
    }
    let p = match v {
        Place::Infinite => return Ok(x.is_positive()),
        Place::Finite(p) => require_prime(p)?,
    };
    let (e, u) = split_power(&integral_rep(x), p);
    if e % 2 != 0 {
        return Ok(false);
    }
    Ok(if p == 2 { mod8(&u) == 1 } else { legendre_unchecked(&u, p) == 1 })
}

// ---------------------------------------------------------------------------
// Prime searches

/// Smallest prime q with q = x (mod p) and q = 3 (mod 4).
pub fn next_progression_prime(p: u64, x: i64) -> Result<u64> {
    require_odd_prime(p)?;
    let target = x.rem_euclid(p as i64) as u64;
    if target == 0 {
        return Err(Error::InvalidArgument(format!("{x} is divisible by {p}")));
    }
    let modulus = 4 * p;
    let start = (3..modulus)
        .step_by(4)
        .find(|q| q % p == target)
        .expect("CRT residue exists for coprime moduli");
    let mut q = start;
    loop {
        if is_prime(q) {
            return Ok(q);
        }
        q = q
            .checked_add(modulus)
            .ok_or_else(|| Error::Overflow(format!("progression search for ({p}, {x})")))?;
    }
}

/// Smallest prime p2 != p1 with p2 = 3 (mod 4) and (p2/p1) = +1 if p1 = 3 (mod 4), -1 otherwise.
pub fn find_p2(p1: u64) -> Result<u64> {
    require_odd_prime(p1)?;
    let want = if p1 % 4 == 3 { 1 } else { -1 };
    let mut q = 3u64;
    loop {
        if q != p1 && is_prime(q) && legendre_unchecked(&BigInt::from(q), p1) == want {
            return Ok(q);
        }
        q = q.checked_add(4).ok_or_else(|| Error::Overflow(format!("find_p2({p1})")))?;
    }
}

/// Exact integer square root test.
pub(crate) fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

impl PartialOrd for SquareClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SquareClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.sign, &self.squarefree).cmp(&(other.sign, &other.squarefree))
    }
}
