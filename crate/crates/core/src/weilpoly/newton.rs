//! p-adic Newton polygons.
//!
//! Convention: the polygon of P is the lower convex hull of the points
//! (i, ν_p(c_i)). A segment of slope s and horizontal length ℓ accounts for
//! exactly ℓ roots of P of p-adic valuation -s. For P = T - p the single
//! segment has slope -1, matching the root p of valuation 1.

use serde::{Deserialize, Serialize};

use super::RatPoly;
use crate::arith::{self, rat_string, Rat, Valuation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "rat_string")]
    pub slope: Rat,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NewtonPolygon {
    pub segments: Vec<Segment>,
}

/// The symmetric shape (-s, h), (0, middle), (s, h) with s > 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeProfile {
    pub h: usize,
    pub middle: usize,
    pub slope: Rat,
}

impl NewtonPolygon {
    pub fn total_length(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Negated and reversed: the polygon of the reversed polynomial.
    pub fn reflected(&self) -> NewtonPolygon {
        NewtonPolygon {
            segments: self
                .segments
                .iter()
                .rev()
                .map(|s| Segment { slope: -s.slope.clone(), length: s.length })
                .collect(),
        }
    }

    pub fn symmetric_profile(&self) -> Option<SlopeProfile> {
        let segs = &self.segments;
        let zero = Rat::from_integer(0.into());
        let (neg, mid, pos) = match segs.as_slice() {
            [a, b] => (a, None, b),
            [a, b, c] => (a, Some(b), c),
            _ => return None,
        };
        if pos.slope <= zero || neg.slope != -pos.slope.clone() || neg.length != pos.length {
            return None;
        }
        let middle = match mid {
            Some(b) if b.slope == zero => b.length,
            Some(_) => return None,
            None => 0,
        };
        Some(SlopeProfile { h: neg.length, middle, slope: pos.slope.clone() })
    }
}

impl std::fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .segments
            .iter()
            .map(|s| format!("({}, {})", arith::format_rat(&s.slope), s.length))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn newton_polygon(poly: &RatPoly, p: u64) -> Result<NewtonPolygon> {
    arith::require_prime(p)?;
    if poly.constant_term() == Rat::from_integer(0.into()) {
        return Err(Error::InvalidArgument("Newton polygon needs a nonzero constant term".into()));
    }
    let points: Vec<(i64, i64)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match arith::val_p_unchecked(c, p) {
            Valuation::Finite(v) => Some((i as i64, v)),
            Valuation::Infinite => None,
        })
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) as i128 * (pt.1 - o.1) as i128 - (a.1 - o.1) as i128 * (pt.0 - o.0) as i128;
            // drop a unless o -> a -> pt turns strictly counter-clockwise
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let dx = w[1].0 - w[0].0;
            Segment { slope: arith::rat(w[1].1 - w[0].1, dx), length: dx as usize }
        })
        .collect();
    Ok(NewtonPolygon { segments })
}
