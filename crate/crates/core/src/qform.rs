//! Diagonal quadratic spaces over Q and their local invariants.
//!
//! A nondegenerate quadratic space is determined up to isometry by its
//! dimension, determinant, signature and Hasse invariants. Hasse invariants are
//! nontrivial at only finitely many places, so each [`SpaceInvariants`] stores
//! the finite support explicitly and treats every other place as trivial.
//!
//! The embedding criterion for CM fields ([`bayer_criterion`]) compares these
//! invariants against the data of the field, with prime splitting behaviour
//! supplied by the caller in [`CMFieldData`].

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, hilbert_unchecked, is_local_square, square_class, Br2Class, Place, Rat, SquareClass};
use crate::error::{Error, Result};

/// Diagonal form ⟨a₁, …, a_m⟩ with nonzero rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSpace {
    entries: Vec<Rat>,
}

impl QuadSpace {
    pub fn new(entries: Vec<Rat>) -> Result<QuadSpace> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("quadratic space must have dimension >= 1".into()));
        }
        if entries.iter().any(Zero::is_zero) {
            return Err(Error::Zero("quadratic space entry"));
        }
        Ok(QuadSpace { entries })
    }

    pub fn from_ints(entries: &[i64]) -> Result<QuadSpace> {
        QuadSpace::new(entries.iter().map(|&a| arith::int(a)).collect())
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn direct_sum(&self, other: &QuadSpace) -> QuadSpace {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        QuadSpace { entries }
    }
}

impl Serialize for QuadSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(arith::format_rat))
    }
}

impl<'de> Deserialize<'de> for QuadSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<QuadSpace, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let entries = raw
            .iter()
            .map(|t| arith::parse_rat(t))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        QuadSpace::new(entries).map_err(serde::de::Error::custom)
    }
}

/// Dimension, determinant, signature and Hasse invariants of a space over Q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceInvariants {
    pub dim: usize,
    pub det: SquareClass,
    #[serde(rename = "sig")]
    pub signature: (usize, usize),
    /// Places with nontrivial Hasse invariant; absent places are trivial.
    #[serde(with = "hasse_map")]
    pub hasse: BTreeMap<Place, Br2Class>,
}

mod hasse_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<Place, Br2Class>, s: S) -> std::result::Result<S::Ok, S::Error> {
        // finite places ascending, then "inf"
        s.collect_map(m.iter().filter(|(_, c)| !c.is_trivial()).map(|(p, c)| (p.to_string(), c.bit())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Place, Br2Class>, D::Error> {
        let raw = BTreeMap::<Place, Br2Class>::deserialize(d)?;
        Ok(raw.into_iter().filter(|(_, c)| !c.is_trivial()).collect())
    }
}

impl SpaceInvariants {
    pub fn hasse_at(&self, v: Place) -> Br2Class {
        self.hasse.get(&v).copied().unwrap_or_default()
    }

    /// Places where the Hasse invariant is nontrivial.
    pub fn hasse_support(&self) -> BTreeSet<Place> {
        self.hasse.iter().filter(|(_, c)| !c.is_trivial()).map(|(&p, _)| p).collect()
    }

    fn from_parts(dim: usize, det: SquareClass, signature: (usize, usize), hasse: BTreeMap<Place, Br2Class>) -> Self {
        let hasse = hasse.into_iter().filter(|(_, c)| !c.is_trivial()).collect();
        SpaceInvariants { dim, det, signature, hasse }
    }
}

/// Places at which a symbol built from these square classes can be nontrivial.
fn candidate_places<'a>(classes: impl IntoIterator<Item = &'a SquareClass>) -> Result<BTreeSet<Place>> {
    let mut places: BTreeSet<Place> = [Place::Finite(2), Place::Infinite].into();
    for c in classes {
        for p in arith::support_primes(&c.to_rat())? {
            places.insert(Place::Finite(p));
        }
    }
    Ok(places)
}

pub fn invariants(space: &QuadSpace) -> Result<SpaceInvariants> {
    let classes: Vec<SquareClass> = space.entries.iter().map(square_class).collect::<Result<_>>()?;
    let reps: Vec<Rat> = classes.iter().map(SquareClass::to_rat).collect();
    let det = classes.iter().fold(SquareClass::one(), |acc, c| &acc * c);
    let neg = space.entries.iter().filter(|a| a.is_negative()).count();
    let mut hasse = BTreeMap::new();
    for v in candidate_places(&classes)? {
        let mut w = Br2Class::TRIVIAL;
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                w += hilbert_unchecked(&reps[i], &reps[j], v);
            }
        }
        hasse.insert(v, w);
    }
    Ok(SpaceInvariants::from_parts(space.dim(), det, (space.dim() - neg, neg), hasse))
}

/// The rational hyperbolic space ⟨1, -1⟩^m.
pub fn hyperbolic(m: usize) -> Result<QuadSpace> {
    if m == 0 {
        return Err(Error::InvalidArgument("hyperbolic(m) needs m >= 1".into()));
    }
    QuadSpace::from_ints(&[1, -1].repeat(m))
}

/// w(U^m ⊗ Q_v) = ((-1)^{m(m-1)/2}, -1)_v.
pub fn hyperbolic_hasse(m: usize, v: Place) -> Br2Class {
    let sign = if (m * (m.saturating_sub(1)) / 2) % 2 == 0 { 1 } else { -1 };
    hilbert_unchecked(&arith::int(sign), &arith::int(-1), v)
}

/// Invariants of V ⊕ W from those of V and W.
pub fn direct_sum_invariants(a: &SpaceInvariants, b: &SpaceInvariants) -> Result<SpaceInvariants> {
    let det = &a.det * &b.det;
    let (da, db) = (a.det.to_rat(), b.det.to_rat());
    let mut places = candidate_places([&a.det, &b.det])?;
    places.extend(a.hasse.keys().chain(b.hasse.keys()).copied());
    let hasse = places
        .into_iter()
        .map(|v| (v, a.hasse_at(v) + b.hasse_at(v) + hilbert_unchecked(&da, &db, v)))
        .collect();
    let sig = (a.signature.0 + b.signature.0, a.signature.1 + b.signature.1);
    Ok(SpaceInvariants::from_parts(a.dim + b.dim, det, sig, hasse))
}

/// Invariants of T where `ambient` ≅ `sub` ⊕ T.
pub fn complement_invariants(ambient: &SpaceInvariants, sub: &SpaceInvariants) -> Result<SpaceInvariants> {
    if sub.dim >= ambient.dim {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension {} must be below ambient dimension {}",
            sub.dim, ambient.dim
        )));
    }
    if sub.signature.0 > ambient.signature.0 || sub.signature.1 > ambient.signature.1 {
        return Err(Error::InvalidArgument(format!(
            "signature {:?} does not fit inside {:?}",
            sub.signature, ambient.signature
        )));
    }
    let det = &ambient.det * &sub.det;
    let (ds, dt) = (sub.det.to_rat(), det.to_rat());
    let mut places = candidate_places([&sub.det, &det])?;
    places.extend(ambient.hasse.keys().chain(sub.hasse.keys()).copied());
    let hasse = places
        .into_iter()
        .map(|v| (v, ambient.hasse_at(v) + sub.hasse_at(v) + hilbert_unchecked(&ds, &dt, v)))
        .collect();
    let sig = (ambient.signature.0 - sub.signature.0, ambient.signature.1 - sub.signature.1);
    Ok(SpaceInvariants::from_parts(ambient.dim - sub.dim, det, sig, hasse))
}

// ---------------------------------------------------------------------------
// CM field data and the embedding criterion

/// What the criterion needs to know about a CM field F of degree 2m.
///
/// Splitting of primes in F/F₀ is not computed here; the caller supplies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMFieldData {
    pub degree: usize,
    /// Positive integer with disc(F) = (-1)^m n.
    pub n: u64,
    pub disc_is_square: bool,
    /// Odd prime with a place of F₀ above it that does not split in F.
    pub nonsplit_witness: Option<u64>,
    /// prime -> "every place of F₀ above it splits in F".
    pub split_table: BTreeMap<u64, bool>,
}

impl CMFieldData {
    /// Field data with `disc_is_square` derived from n and no split information.
    pub fn new(degree: usize, n: u64) -> Result<CMFieldData> {
        let data = CMFieldData {
            degree,
            n,
            disc_is_square: arith::is_perfect_square(&BigUint::from(n)),
            nonsplit_witness: None,
            split_table: BTreeMap::new(),
        };
        data.validate()?;
        Ok(data)
    }

    pub fn with_witness(mut self, p1: u64) -> Result<CMFieldData> {
        self.nonsplit_witness = Some(p1);
        self.validate()?;
        Ok(self)
    }

    pub fn with_split(mut self, p: u64, splits: bool) -> Result<CMFieldData> {
        self.split_table.insert(p, splits);
        self.validate()?;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.degree / 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 || self.degree % 2 != 0 {
            return Err(Error::InvalidArgument(format!("CM field degree {} must be even and positive", self.degree)));
        }
        if self.n == 0 {
            return Err(Error::Zero("CM field n"));
        }
        if self.disc_is_square != arith::is_perfect_square(&BigUint::from(self.n)) {
            return Err(Error::InvalidArgument(format!(
                "disc_is_square = {} contradicts n = {}",
                self.disc_is_square, self.n
            )));
        }
        if let Some(p1) = self.nonsplit_witness {
            if p1 == 2 || !arith::is_prime(p1) {
                return Err(Error::NotOddPrime(p1));
            }
            if self.split_table.get(&p1) == Some(&true) {
                return Err(Error::InvalidArgument(format!("{p1} is both the non-split witness and marked split")));
            }
        }
        for &p in self.split_table.keys() {
            arith::require_prime(p)?;
        }
        Ok(())
    }

    /// disc(F) = (-1)^m n as a rational.
    pub fn disc(&self) -> Rat {
        let sign = if self.m() % 2 == 0 { 1 } else { -1 };
        arith::int(sign) * Rat::from_integer(self.n.into())
    }
}

/// Why a prime is known not to be totally split in F/F₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonsplitReason {
    Witness,
    SplitTable,
    /// disc(F) is not a square in Q_p, which total splitting would force.
    DiscriminantNonsquare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HyperbolicityStatus {
    Pass,
    ConditionalPass { nonsplit: BTreeMap<u64, NonsplitReason> },
    NeedsData { unknown: Vec<u64> },
    Fail { split: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub m: usize,
    /// Primes p with w(V ⊗ Q_p) != w(U^m ⊗ Q_p).
    pub discrepancies: Vec<u64>,
    #[serde(flatten)]
    pub status: HyperbolicityStatus,
}

impl HyperbolicityReport {
    pub fn is_pass(&self) -> bool {
        matches!(self.status, HyperbolicityStatus::Pass)
    }

    /// Pass, or every discrepancy certified non-split.
    pub fn holds(&self) -> bool {
        matches!(self.status, HyperbolicityStatus::Pass | HyperbolicityStatus::ConditionalPass { .. })
    }
}

/// Decides the local condition w(V_p) = w(U^m_p) at every totally split prime.
///
/// Both invariants are trivial outside {2} ∪ supp(V), so only those primes
/// are compared.
pub fn hyperbolicity_check(space: &QuadSpace, field: &CMFieldData) -> Result<HyperbolicityReport> {
    let inv = invariants(space)?;
    hyperbolicity_from_invariants(&inv, field)
}

pub fn hyperbolicity_from_invariants(inv: &SpaceInvariants, field: &CMFieldData) -> Result<HyperbolicityReport> {
    field.validate()?;
    if inv.dim != field.degree {
        return Err(Error::DimensionMismatch { expected: field.degree, got: inv.dim });
    }
    let m = field.m();
    let mut primes: BTreeSet<u64> = [2].into();
    primes.extend(inv.hasse.keys().filter_map(|v| match v {
        Place::Finite(p) => Some(*p),
        Place::Infinite => None,
    }));
    let discrepancies: Vec<u64> = primes
        .into_iter()
        .filter(|&p| inv.hasse_at(Place::Finite(p)) != hyperbolic_hasse(m, Place::Finite(p)))
        .collect();

    let disc = field.disc();
    let mut nonsplit = BTreeMap::new();
    let mut unknown = Vec::new();
    let mut split = Vec::new();
    for &p in &discrepancies {
        if field.nonsplit_witness == Some(p) {
            nonsplit.insert(p, NonsplitReason::Witness);
            continue;
        }
        match field.split_table.get(&p) {
            Some(true) => split.push(p),
            Some(false) => {
                nonsplit.insert(p, NonsplitReason::SplitTable);
            }
            None if !is_local_square(&disc, Place::Finite(p))? => {
                nonsplit.insert(p, NonsplitReason::DiscriminantNonsquare);
            }
            None => unknown.push(p),
        }
    }
    let status = if !split.is_empty() {
        HyperbolicityStatus::Fail { split }
    } else if !unknown.is_empty() {
        HyperbolicityStatus::NeedsData { unknown }
    } else if !nonsplit.is_empty() {
        HyperbolicityStatus::ConditionalPass { nonsplit }
    } else {
        HyperbolicityStatus::Pass
    };
    Ok(HyperbolicityReport { m, discrepancies, status })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionVerdict {
    Holds,
    /// Holds provided the supplied non-split certificates are correct.
    HoldsConditionally,
    NeedsData,
    Fails,
}

/// Per-bullet outcome of the CM embedding criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BayerReport {
    pub verdict: CriterionVerdict,
    pub det: SquareClass,
    pub expected_det: SquareClass,
    pub det_matches: bool,
    pub signature: (usize, usize),
    pub signature_even: bool,
    pub hyperbolicity: HyperbolicityReport,
}

/// Checks the three conditions for V ≅ (F, q_λ) for some λ ∈ F₀*:
/// det(V) = (-1)^m disc(F), even signature, and the hyperbolicity condition.
pub fn bayer_criterion(space: &QuadSpace, field: &CMFieldData) -> Result<BayerReport> {
    let inv = invariants(space)?;
    bayer_from_invariants(&inv, field)
}

pub fn bayer_from_invariants(inv: &SpaceInvariants, field: &CMFieldData) -> Result<BayerReport> {
    let hyperbolicity = hyperbolicity_from_invariants(inv, field)?;
    // (-1)^m disc(F) = n
    let expected_det = square_class(&Rat::from_integer(field.n.into()))?;
    let det_matches = inv.det == expected_det;
    let signature_even = inv.signature.0 % 2 == 0 && inv.signature.1 % 2 == 0;
    let verdict = if !det_matches || !signature_even {
        CriterionVerdict::Fails
    } else {
        match hyperbolicity.status {
            HyperbolicityStatus::Pass => CriterionVerdict::Holds,
            HyperbolicityStatus::ConditionalPass { .. } => CriterionVerdict::HoldsConditionally,
            HyperbolicityStatus::NeedsData { .. } => CriterionVerdict::NeedsData,
            HyperbolicityStatus::Fail { .. } => CriterionVerdict::Fails,
        }
    };
    Ok(BayerReport {
        verdict,
        det: inv.det.clone(),
        expected_det,
        det_matches,
        signature: inv.signature,
        signature_even,
        hyperbolicity,
    })
}

/// Unit test helper shared with the lattice module.
#[cfg(test)]
pub(crate) fn diag(entries: &[i64]) -> QuadSpace {
    QuadSpace::from_ints(entries).unwrap()
}
