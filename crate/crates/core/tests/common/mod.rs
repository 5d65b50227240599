//! Independent oracles shared by the integration and acceptance suites.
//!
//! Nothing here calls the production symbol, Sturm, or factoring code.
#![allow(dead_code)]

use k3cert_core::arith::{int, Rat};
use k3cert_core::RatPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Prime divisors by trial division.
pub fn trial_primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Hilbert symbol by local solubility

/// 1 if z² = a x² + b y² has no nontrivial solution over Q_v, else 0.
///
/// `a`, `b` must be squarefree. At a finite prime a primitive solution modulo
/// p^3 (p odd) or 2^6 lifts by Hensel, since some partial derivative then has
/// valuation at most 1 (resp. 2).
pub fn hilbert_oracle(a: i64, b: i64, v: Option<u64>) -> u8 {
    let Some(p) = v else {
        return u8::from(a < 0 && b < 0);
    };
    let k = if p == 2 { 6 } else { 3 };
    let modulus = (p as i64).pow(k);
    // squares[r]: 1 if r is z² for some z, 2 if additionally for some unit z
    let mut squares = vec![0u8; modulus as usize];
    for z in 0..modulus {
        let r = (z * z % modulus) as usize;
        let unit = z % p as i64 != 0;
        squares[r] = squares[r].max(if unit { 2 } else { 1 });
    }
    for x in 0..modulus {
        for y in 0..modulus {
            let r = (a * x % modulus * x + b * y % modulus * y).rem_euclid(modulus) as usize;
            let primitive_xy = x % p as i64 != 0 || y % p as i64 != 0;
            if squares[r] == 2 || (squares[r] == 1 && primitive_xy) {
                return 0;
            }
        }
    }
    1
}

pub const HILBERT_GRID: [i64; 16] = [1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 14, -14];
pub const HILBERT_PLACES: [Option<u64>; 5] = [Some(2), Some(3), Some(5), Some(7), None];

// ---------------------------------------------------------------------------
// Real roots by Descartes' rule with bisection

fn sign_variations(p: &RatPoly) -> usize {
    let signs: Vec<bool> = p.coeffs().iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// (1 + t)^n f((lo + hi t) / (1 + t)): roots in (lo, hi) become roots in (0, ∞).
fn mobius(f: &RatPoly, lo: &Rat, hi: &Rat) -> RatPoly {
    let n = f.degree().unwrap_or(0);
    let num = RatPoly::new(vec![lo.clone(), hi.clone()]);
    let den = RatPoly::from_ints(&[1, 1]);
    let mut out = RatPoly::zero();
    for (i, c) in f.coeffs().iter().enumerate() {
        let term = &(&num.pow(i as u32) * &den.pow((n - i) as u32)) * &RatPoly::constant(c.clone());
        out = &out + &term;
    }
    out
}

/// Real roots of a squarefree f in the open interval (lo, hi).
pub fn descartes_count(f: &RatPoly, lo: &Rat, hi: &Rat) -> usize {
    match sign_variations(&mobius(f, lo, hi)) {
        0 => 0,
        1 => 1,
        _ => {
            let mid = (lo + hi) / int(2);
            let at_mid = usize::from(f.eval(&mid).is_zero());
            descartes_count(f, lo, &mid) + at_mid + descartes_count(f, &mid, hi)
        }
    }
}

/// Real roots in (lo, hi], counted without Sturm sequences.
pub fn real_roots_oracle(f: &RatPoly, lo: &Rat, hi: &Rat) -> usize {
    descartes_count(f, lo, hi) + usize::from(f.eval(hi).is_zero())
}

// ---------------------------------------------------------------------------
// Polynomials over F_l

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv(a: u64, l: u64) -> u64 {
    let (mut r, mut e, mut base) = (1u64, l - 2, a % l);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % l;
        }
        base = base * base % l;
        e >>= 1;
    }
    r
}

fn sub(a: &Fp, b: &Fp, l: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + l - b.get(i).unwrap_or(&0)) % l).collect())
}

fn mul(a: &Fp, b: &Fp, l: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % l;
        }
    }
    trim(out)
}

fn divrem(a: &Fp, b: &Fp, l: u64) -> (Fp, Fp) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = inv(*b.last().unwrap(), l);
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * lead_inv % l;
        q[shift] = c;
        for (i, y) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + l - c * y % l) % l;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn gcd(a: &Fp, b: &Fp, l: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = divrem(&a, &b, l).1;
        a = b;
        b = r;
    }
    a
}

fn powmod(base: &Fp, mut e: u64, m: &Fp, l: u64) -> Fp {
    let mut r = vec![1];
    let mut b = divrem(base, m, l).1;
    while e > 0 {
        if e & 1 == 1 {
            r = divrem(&mul(&r, &b, l), m, l).1;
        }
        b = divrem(&mul(&b, &b, l), m, l).1;
        e >>= 1;
    }
    r
}

/// Reduction of f mod l after clearing denominators, or None if l divides a
/// denominator or the leading coefficient.
pub fn reduce_mod(f: &RatPoly, l: u64) -> Option<Fp> {
    let den = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    if (&den % l).is_zero() {
        return None;
    }
    let lb = BigInt::from(l);
    let out: Fp = f
        .coeffs()
        .iter()
        .map(|c| (c.numer() * (&den / c.denom())).mod_floor(&lb).to_u64().unwrap())
        .collect();
    if *out.last()? == 0 {
        return None;
    }
    Some(trim(out))
}

/// Degrees of the irreducible factors of a squarefree f over F_l, or None if f
/// is not squarefree mod l.
pub fn factor_degrees_mod(f: &RatPoly, l: u64) -> Option<Vec<usize>> {
    let mut g = reduce_mod(f, l)?;
    let deriv: Fp = trim(g.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % l) * c % l).collect());
    if gcd(&g, &deriv, l).len() != 1 {
        return None;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    let mut degrees = Vec::new();
    let mut d = 0;
    while g.len() > 1 {
        d += 1;
        if 2 * d > g.len() - 1 {
            degrees.push(g.len() - 1);
            break;
        }
        h = powmod(&h, l, &g, l);
        let common = gcd(&g, &sub(&h, &x, l), l);
        let k = common.len() - 1;
        if k > 0 {
            degrees.extend(std::iter::repeat(d).take(k / d));
            g = divrem(&g, &common, l).0;
            h = divrem(&h, &g, l).1;
        }
    }
    Some(degrees)
}

/// Subset sums of a degree pattern: the possible degrees of a factor over Q.
pub fn subset_sums(degrees: &[usize]) -> Vec<bool> {
    let total: usize = degrees.iter().sum();
    let mut can = vec![false; total + 1];
    can[0] = true;
    for &d in degrees {
        for s in (d..=total).rev() {
            can[s] |= can[s - d];
        }
    }
    can
}

/// Intersects factor-degree possibilities over successive good primes l != p
/// until only 0 and deg f remain. Returns the number of primes used, or None if
/// `max_primes` primes leave a proper degree open.
pub fn degree_sieve(f: &RatPoly, p: u64, max_primes: usize) -> Option<usize> {
    let n = f.degree()?;
    let mut open = vec![true; n + 1];
    let mut used = 0;
    for l in (3u64..).filter(|&l| small_prime(l) && l != p) {
        if used == max_primes {
            return None;
        }
        let Some(degrees) = factor_degrees_mod(f, l) else { continue };
        used += 1;
        let sums = subset_sums(&degrees);
        for (s, o) in open.iter_mut().enumerate() {
            *o &= sums[s];
        }
        if open[1..n].iter().all(|o| !o) {
            return Some(used);
        }
    }
    unreachable!()
}

/// Exhaustive search for a factor Q of degree k with Q(0) = 1, valid when every
/// root of f has absolute value 1 and f ∈ 1 + T·Z[1/p][T]. Then |Q_i| <= C(k, i),
/// Q_k = ±1, and p^A Q_i is integral where -A is the lowest point of the Newton
/// polygon of f at p.
pub fn has_factor_of_degree(f: &RatPoly, p: u64, k: usize) -> bool {
    let a = f
        .coeffs()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| {
            let (mut n, mut d, mut v) = (c.numer().clone(), c.denom().clone(), 0i64);
            while (&n % p).is_zero() {
                n /= p;
                v += 1;
            }
            while (&d % p).is_zero() {
                d /= p;
                v -= 1;
            }
            v
        })
        .min()
        .unwrap()
        .min(0)
        .unsigned_abs() as u32;
    let scale = BigInt::from(p).pow(a);
    let binom = |i: usize| (0..i).fold(1i64, |acc, j| acc * (k - j) as i64 / (j + 1) as i64);
    let ranges: Vec<i64> = (1..k).map(|i| binom(i) * scale.to_i64().unwrap()).collect();
    let total: i64 = ranges.iter().map(|r| 2 * r + 1).product::<i64>() * 2;
    assert!(total <= 20_000_000, "factor search too large: {total}");
    // candidates are screened by divisibility mod a large prime before the exact test
    let l = 1_000_003u64;
    let f_mod = reduce_mod(f, l).expect("l does not divide the denominators");
    let scale_inv = inv(scale.to_u64().unwrap() % l, l);
    let lift = |n: i64| (n.rem_euclid(l as i64) as u64) * scale_inv % l;
    let mut idx: Vec<i64> = ranges.iter().map(|r| -r).collect();
    loop {
        for last in [-1i64, 1] {
            let mut q_mod = vec![1u64];
            q_mod.extend(idx.iter().map(|&n| lift(n)));
            q_mod.push(last.rem_euclid(l as i64) as u64);
            if divrem(&f_mod, &q_mod, l).1.is_empty() {
                let mut c = vec![int(1)];
                c.extend(idx.iter().map(|&n| Rat::new(n.into(), scale.clone())));
                c.push(int(last));
                if RatPoly::new(c).divides(f).unwrap() {
                    return true;
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return false;
            }
            if idx[pos] < ranges[pos] {
                idx[pos] += 1;
                break;
            }
            idx[pos] = -ranges[pos];
            pos += 1;
        }
    }
}

/// Irreducibility by the degree sieve, falling back to exhaustive factor search
/// for degrees the sieve cannot exclude.
pub fn irreducible_oracle(f: &RatPoly, p: u64) -> bool {
    let n = f.degree().unwrap();
    let mut open = vec![true; n + 1];
    let mut used = 0;
    for l in (3u64..).filter(|&l| small_prime(l) && l != p) {
        if used == 30 {
            break;
        }
        let Some(degrees) = factor_degrees_mod(f, l) else { continue };
        used += 1;
        let sums = subset_sums(&degrees);
        for (s, o) in open.iter_mut().enumerate() {
            *o &= sums[s];
        }
    }
    (1..=n / 2).filter(|&k| open[k]).all(|k| !has_factor_of_degree(f, p, k))
}
