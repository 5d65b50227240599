//! Even lattices N of rank 22 - 2m inside the K3 lattice, one per case
//! 6 <= m <= 10, together with every proof obligation attached to them.
//!
//! The K3 lattice (-E8)^2 ⊕ U^3 only enters through its rational invariants,
//! so it is represented by [`k3_ambient_invariants`] rather than by a Gram
//! matrix. Existence of a primitive embedding N ↪ Λ_K3 is Nikulin's theorem
//! for rank(N) <= 10; the report records that hypothesis instead of
//! constructing the embedding.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{self, find_p2, square_class, Br2Class, Place, SquareClass};
use crate::error::{Error, Result};
use crate::qform::{self, BayerReport, CMFieldData, QuadSpace, SpaceInvariants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    /// The hyperbolic plane with Gram matrix [[0, 1], [1, 0]].
    #[serde(rename = "U")]
    HyperbolicU,
    #[serde(rename = "diag")]
    Diag(i64),
}

/// Orthogonal sum of U-blocks and even rank-one blocks ⟨d⟩.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub blocks: Vec<Block>,
}

impl LatticeSpec {
    pub fn new(blocks: Vec<Block>) -> Result<LatticeSpec> {
        for b in &blocks {
            if let Block::Diag(d) = b {
                if *d == 0 || d % 2 != 0 {
                    return Err(Error::InvalidArgument(format!("diagonal entry {d} must be nonzero and even")));
                }
            }
        }
        Ok(LatticeSpec { blocks })
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| if matches!(b, Block::HyperbolicU) { 2 } else { 1 }).sum()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.blocks.iter().fold((0, 0), |(pos, neg), b| match b {
            Block::HyperbolicU => (pos + 1, neg + 1),
            Block::Diag(d) if *d > 0 => (pos + 1, neg),
            Block::Diag(_) => (pos, neg + 1),
        })
    }

    /// U is even and every ⟨d⟩ has d even, so this holds for any valid spec.
    pub fn is_even(&self) -> bool {
        self.blocks.iter().all(|b| match b {
            Block::HyperbolicU => true,
            Block::Diag(d) => d % 2 == 0,
        })
    }

    pub fn starts_with_u(&self) -> bool {
        matches!(self.blocks.first(), Some(Block::HyperbolicU))
    }
}

impl std::fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::HyperbolicU => "U".to_string(),
                Block::Diag(d) => format!("<{d}>"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// N ⊗ Q as a diagonal form, each entry reduced to its square-class representative.
pub fn rationalize(lattice: &LatticeSpec) -> Result<QuadSpace> {
    let mut entries = Vec::with_capacity(lattice.rank());
    for b in &lattice.blocks {
        match b {
            Block::HyperbolicU => entries.extend([arith::int(1), arith::int(-1)]),
            Block::Diag(d) => entries.push(square_class(&arith::int(*d))?.to_rat()),
        }
    }
    QuadSpace::new(entries)
}

/// Rational invariants of Λ_K3: dimension 22, det -1, signature (3, 19), w = (-1, -1).
pub fn k3_ambient_invariants() -> SpaceInvariants {
    let hasse: BTreeMap<Place, Br2Class> =
        [(Place::Finite(2), Br2Class::NONTRIVIAL), (Place::Infinite, Br2Class::NONTRIVIAL)].into();
    SpaceInvariants { dim: 22, det: SquareClass::minus_one(), signature: (3, 19), hasse }
}

fn checked_mul(values: &[i64]) -> Result<i64> {
    values
        .iter()
        .try_fold(1i64, |acc, &v| acc.checked_mul(v))
        .ok_or_else(|| Error::Overflow(format!("product {values:?}")))
}

fn check_case(m: usize, field: &CMFieldData) -> Result<()> {
    if !(6..=10).contains(&m) {
        return Err(Error::InvalidArgument(format!("m = {m} is outside 6..=10")));
    }
    field.validate()?;
    if field.degree != 2 * m {
        return Err(Error::DimensionMismatch { expected: 2 * m, got: field.degree });
    }
    if matches!(m, 7 | 8) && field.nonsplit_witness.is_none() {
        return Err(Error::InvalidArgument(format!("m = {m} needs a non-split witness prime p1")));
    }
    Ok(())
}

/// The case-table lattice N for 6 <= m <= 10.
pub fn build_n(m: usize, field: &CMFieldData) -> Result<LatticeSpec> {
    check_case(m, field)?;
    let n = i64::try_from(field.n).map_err(|_| Error::Overflow(format!("n = {}", field.n)))?;
    let diag = |xs: &[i64]| checked_mul(xs).map(Block::Diag);
    let blocks = match m {
        6 | 9 => {
            let mut b = vec![Block::HyperbolicU, diag(&[-4, n])?];
            b.extend(std::iter::repeat(Block::Diag(-4)).take(19 - 2 * m));
            b
        }
        7 | 8 => {
            let p1 = field.nonsplit_witness.expect("checked above");
            let p2 = find_p2(p1)?;
            let (p1, p2) = (p1 as i64, p2 as i64);
            let mut b = vec![Block::HyperbolicU, diag(&[-4, n])?];
            if m == 7 {
                b.extend([Block::Diag(-4), Block::Diag(-4)]);
            }
            b.extend([diag(&[-4, p1])?, diag(&[-4, p2])?, diag(&[-4, p1, p2])?]);
            b
        }
        _ if field.disc_is_square => vec![Block::HyperbolicU],
        _ => vec![Block::Diag(2), diag(&[-8, n])?],
    };
    LatticeSpec::new(blocks)
}

/// The mod-4 obstruction: 2a² - 8nb² = -2 forces a² ≡ -1 (mod 4).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod4Argument {
    pub equation: String,
    pub reduces_to: String,
    /// a² mod 4 over a = 0, 1, 2, 3.
    pub squares_mod_4: Vec<u8>,
    pub required_residue: u8,
    pub insoluble: bool,
}

impl Mod4Argument {
    fn build() -> Mod4Argument {
        let mut squares: Vec<u8> = (0u8..4).map(|a| a * a % 4).collect();
        squares.sort_unstable();
        squares.dedup();
        let required_residue = 3; // -1 mod 4
        Mod4Argument {
            equation: "2a^2 - 8nb^2 = -2".into(),
            reduces_to: "a^2 + 1 = 4nb^2".into(),
            insoluble: !squares.contains(&required_residue),
            squares_mod_4: squares,
            required_residue,
        }
    }
}

/// No vector of norm -2 in ⟨2⟩ ⊕ ⟨-8n⟩, and a vector of norm 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoMinusTwoCertificate {
    pub n: u64,
    pub mod4: Mod4Argument,
    pub search_bound: u64,
    /// Solutions (a, b) of 2a² - 8nb² = -2 with |a|, |b| <= bound.
    pub solutions: Vec<(i64, i64)>,
    pub plus_two_witness: (i64, i64),
    pub plus_two_norm: i64,
    pub certified: bool,
}

pub const DEFAULT_SEARCH_BOUND: u64 = 1000;

/// Norm of a·e₁ + b·e₂ in ⟨2⟩ ⊕ ⟨-8n⟩.
fn norm(a: i64, b: i64, n: u64) -> i128 {
    2 * (a as i128).pow(2) - 8 * n as i128 * (b as i128).pow(2)
}

pub fn no_minus_two_vector(n: u64, bound: u64) -> Result<NoMinusTwoCertificate> {
    if n == 0 {
        return Err(Error::Zero("n"));
    }
    let bound_i = i64::try_from(bound).map_err(|_| Error::Overflow(format!("bound {bound}")))?;
    let mut solutions = Vec::new();
    // For each b, a² = 4nb² - 1 is forced; test it exactly.
    for b in -bound_i..=bound_i {
        let target = 4 * n as i128 * (b as i128).pow(2) - 1;
        if target < 0 {
            continue;
        }
        let t = BigUint::from(target as u128);
        if arith::is_perfect_square(&t) {
            let a = i64::try_from(t.sqrt()).map_err(|_| Error::Overflow("search root".into()))?;
            if a <= bound_i {
                solutions.extend([(a, b), (-a, b)]);
            }
        }
    }
    solutions.sort_unstable();
    solutions.dedup();
    let mod4 = Mod4Argument::build();
    let plus_two_witness = (1, 0);
    let plus_two_norm = norm(plus_two_witness.0, plus_two_witness.1, n) as i64;
    let certified = mod4.insoluble && solutions.is_empty() && plus_two_norm == 2;
    Ok(NoMinusTwoCertificate { n, mod4, search_bound: bound, solutions, plus_two_witness, plus_two_norm, certified })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub m: usize,
    pub n: u64,
    pub p1: Option<u64>,
    pub p2: Option<u64>,
    pub lattice: LatticeSpec,
    pub rank: usize,
    pub signature: (usize, usize),
    pub is_even: bool,
    pub rational_space: QuadSpace,
    pub n_invariants: SpaceInvariants,
    pub t_invariants: SpaceInvariants,
    /// The CM embedding criterion applied to T ⊗ Q, including hyperbolicity.
    pub bayer: BayerReport,
    pub has_u_embedding: bool,
    /// Coordinates of a norm-2 vector, in the ⟨2⟩ ⊕ ⟨-8n⟩ case.
    pub degree2_vector: Option<(i64, i64)>,
    pub no_minus2_certificate: Option<NoMinusTwoCertificate>,
    /// rank(N) <= 10, the hypothesis under which a primitive embedding into Λ_K3 exists.
    pub nikulin_hypothesis: bool,
}

impl LatticeReport {
    pub fn hyperbolicity(&self) -> &qform::HyperbolicityReport {
        &self.bayer.hyperbolicity
    }
}

pub fn verify_lattice_cm(m: usize, field: &CMFieldData) -> Result<LatticeReport> {
    let lattice = build_n(m, field)?;
    let rational_space = rationalize(&lattice)?;
    let n_invariants = qform::invariants(&rational_space)?;
    let t_invariants = qform::complement_invariants(&k3_ambient_invariants(), &n_invariants)?;
    let bayer = qform::bayer_from_invariants(&t_invariants, field)?;
    let (p1, p2) = match m {
        7 | 8 => {
            let p1 = field.nonsplit_witness.expect("checked by build_n");
            (Some(p1), Some(find_p2(p1)?))
        }
        _ => (field.nonsplit_witness, None),
    };
    let has_u_embedding = lattice.starts_with_u();
    let (degree2_vector, no_minus2_certificate) = if has_u_embedding {
        (None, None)
    } else {
        let cert = no_minus_two_vector(field.n, DEFAULT_SEARCH_BOUND)?;
        (Some(cert.plus_two_witness), Some(cert))
    };
    Ok(LatticeReport {
        m,
        n: field.n,
        p1,
        p2,
        rank: lattice.rank(),
        signature: lattice.signature(),
        is_even: lattice.is_even(),
        nikulin_hypothesis: lattice.rank() <= 10,
        lattice,
        rational_space,
        n_invariants,
        t_invariants,
        bayer,
        has_u_embedding,
        degree2_vector,
        no_minus2_certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::{diag, invariants, CriterionVerdict, HyperbolicityStatus};

    fn field(m: usize, n: u64) -> CMFieldData {
        CMFieldData::new(2 * m, n).unwrap()
    }

    #[test]
    fn ambient_matches_diagonal_model() {
        let mut e = vec![1; 3];
        e.extend([-1; 19]);
        assert_eq!(invariants(&diag(&e)).unwrap(), k3_ambient_invariants());
        let amb = k3_ambient_invariants();
        assert_eq!(amb.hasse_at(Place::Infinite), Br2Class::NONTRIVIAL);
        assert_eq!(amb.hasse_at(Place::Finite(2)), Br2Class::NONTRIVIAL);
        assert_eq!(amb.hasse_at(Place::Finite(7)), Br2Class::TRIVIAL);
    }

    #[test]
    fn case_table() {
        assert_eq!(build_n(10, &field(10, 4)).unwrap().blocks, vec![Block::HyperbolicU]);
        assert_eq!(build_n(10, &field(10, 1)).unwrap().blocks, vec![Block::HyperbolicU]);
        let nonsq = CMFieldData { disc_is_square: false, ..field(10, 3) };
        assert_eq!(build_n(10, &nonsq).unwrap().blocks, vec![Block::Diag(2), Block::Diag(-24)]);
        let f8 = field(8, 5).with_witness(7).unwrap();
        let n8 = build_n(8, &f8).unwrap();
        assert_eq!(
            n8.blocks,
            vec![Block::HyperbolicU, Block::Diag(-20), Block::Diag(-28), Block::Diag(-44), Block::Diag(-308)]
        );
        assert_eq!(n8.to_string(), "U + <-20> + <-28> + <-44> + <-308>");
    }

    #[test]
    fn case_guards() {
        assert!(build_n(5, &field(5, 1)).is_err());
        assert!(build_n(7, &field(7, 5)).is_err());
        assert!(matches!(build_n(6, &field(7, 5)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rationalize_examples() {
        let u = LatticeSpec::new(vec![Block::HyperbolicU]).unwrap();
        assert_eq!(rationalize(&u).unwrap(), diag(&[1, -1]));
        let d = LatticeSpec::new(vec![Block::Diag(2), Block::Diag(-8 * 5)]).unwrap();
        assert_eq!(rationalize(&d).unwrap(), diag(&[2, -10]));
        let n6 = build_n(6, &field(6, 3)).unwrap();
        let mut expect = vec![1, -1, -3];
        expect.extend([-1; 7]);
        assert_eq!(rationalize(&n6).unwrap(), diag(&expect));
        assert!(LatticeSpec::new(vec![Block::Diag(3)]).is_err());
    }

    #[test]
    fn minus_two_certificates() {
        for n in [1, 13] {
            let c = no_minus_two_vector(n, DEFAULT_SEARCH_BOUND).unwrap();
            assert!(c.certified);
            assert!(c.solutions.is_empty());
            assert_eq!(c.plus_two_norm, 2);
            assert_eq!(c.mod4.squares_mod_4, vec![0, 1]);
        }
    }

    #[test]
    fn m9_report() {
        let r = verify_lattice_cm(9, &field(9, 3)).unwrap();
        assert_eq!(r.t_invariants.det.representative(), 3.into());
        assert_eq!(r.t_invariants.signature, (2, 16));
        assert!(r.hyperbolicity().is_pass());
        assert!(r.hyperbolicity().discrepancies.is_empty());
        assert_eq!(r.bayer.verdict, CriterionVerdict::Holds);
        assert!(r.has_u_embedding && r.degree2_vector.is_none());
    }

    #[test]
    fn m7_report_is_conditional_on_p1() {
        let r = verify_lattice_cm(7, &field(7, 5).with_witness(7).unwrap()).unwrap();
        assert_eq!(r.p2, Some(11));
        assert!(r.hyperbolicity().discrepancies.iter().all(|&q| q == 7));
        assert!(r.hyperbolicity().holds());
    }

    #[test]
    fn m10_cases() {
        let sq = verify_lattice_cm(10, &field(10, 9)).unwrap();
        assert!(sq.has_u_embedding);
        assert!(sq.t_invariants.det.is_square());
        assert!(sq.hyperbolicity().is_pass());
        let nonsq = verify_lattice_cm(10, &field(10, 5)).unwrap();
        assert!(!nonsq.has_u_embedding);
        assert_eq!(nonsq.degree2_vector, Some((1, 0)));
        assert!(nonsq.no_minus2_certificate.as_ref().unwrap().certified);
        assert!(matches!(nonsq.hyperbolicity().status, HyperbolicityStatus::ConditionalPass { .. }));
    }

    #[test]
    fn lattice_json() {
        let f8 = field(8, 5).with_witness(7).unwrap();
        let json = serde_json::to_string(&build_n(8, &f8).unwrap()).unwrap();
        assert_eq!(json, r#"{"blocks":["U",{"diag":-20},{"diag":-28},{"diag":-44},{"diag":-308}]}"#);
    }
}
