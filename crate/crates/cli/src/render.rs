use std::fmt::Write;

use k3cert_core::condition::{Bullet, CheckStatus, FeasibilityReason, FeasibilityVerdict, Verdict, Witness, WitnessStatus};
use k3cert_core::qform::{HyperbolicityReport, HyperbolicityStatus};
use k3cert_core::{LatticeReport, SpaceInvariants};

fn status_word(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Unknown => "unknown",
    }
}

fn verdict_line(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail { bullet, reason } => format!("fail at bullet {} ({bullet}): {reason}", bullet.number()),
        Verdict::Unknown { bullet, reason } => format!("unknown at bullet {} ({bullet}): {reason}", bullet.number()),
    }
}

fn opt<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".into(), |v| v.to_string())
}

pub fn witness(w: &Witness) -> String {
    let r = &w.report;
    let mut s = String::new();
    writeln!(s, "L = {}", w.l.to_text()).unwrap();
    writeln!(s, "verdict: {}", verdict_line(&r.verdict)).unwrap();
    writeln!(s, "p = {}, m = {}, h = {}, a = {}, e = {}, q = {}", r.p, r.m, opt(&r.h), opt(&r.a), opt(&r.e), opt(&r.q))
        .unwrap();
    writeln!(s, "newton polygon: {}", r.slope_profile).unwrap();
    for b in Bullet::ALL {
        let c = &r.checks[&b];
        writeln!(s, "  {} {:<22} {:<7} {}", b.number(), b.to_string(), status_word(c.status), c.detail).unwrap();
    }
    s
}

fn invariants(inv: &SpaceInvariants) -> String {
    let support: Vec<String> = inv.hasse_support().iter().map(ToString::to_string).collect();
    format!(
        "dim {}, det {}, sig ({}, {}), hasse nontrivial at {{{}}}",
        inv.dim,
        inv.det,
        inv.signature.0,
        inv.signature.1,
        support.join(", ")
    )
}

fn hyperbolicity(h: &HyperbolicityReport) -> String {
    let status = match &h.status {
        HyperbolicityStatus::Pass => "PASS".to_string(),
        HyperbolicityStatus::ConditionalPass { nonsplit } => {
            let parts: Vec<String> = nonsplit.iter().map(|(p, why)| format!("{p}: {why:?}")).collect();
            format!("CONDITIONAL-PASS (non-split: {})", parts.join(", "))
        }
        HyperbolicityStatus::NeedsData { unknown } => format!("NEEDS-DATA (split status unknown at {unknown:?})"),
        HyperbolicityStatus::Fail { split } => format!("FAIL (split discrepancy primes {split:?})"),
    };
    format!("{status}; discrepancies {:?}", h.discrepancies)
}

pub fn lattice(r: &LatticeReport) -> String {
    let mut s = String::new();
    writeln!(s, "N = {}", r.lattice).unwrap();
    if let (Some(p1), Some(p2)) = (r.p1, r.p2) {
        writeln!(s, "p1 = {p1}, p2 = {p2}").unwrap();
    }
    writeln!(s, "rank {}, signature ({}, {}), even: {}", r.rank, r.signature.0, r.signature.1, r.is_even).unwrap();
    writeln!(s, "N_Q: {}", invariants(&r.n_invariants)).unwrap();
    writeln!(s, "T_Q: {}", invariants(&r.t_invariants)).unwrap();
    let b = &r.bayer;
    writeln!(s, "embedding criterion: {:?}", b.verdict).unwrap();
    writeln!(s, "  det {} vs expected {}: {}", b.det, b.expected_det, b.det_matches).unwrap();
    writeln!(s, "  signature ({}, {}) even: {}", b.signature.0, b.signature.1, b.signature_even).unwrap();
    writeln!(s, "  hyperbolicity: {}", hyperbolicity(&b.hyperbolicity)).unwrap();
    writeln!(s, "U embeds in N: {}", r.has_u_embedding).unwrap();
    if let Some((a, b)) = r.degree2_vector {
        writeln!(s, "degree-2 vector: (a, b) = ({a}, {b})").unwrap();
    }
    if let Some(c) = &r.no_minus2_certificate {
        writeln!(
            s,
            "no (-2)-vector: certified {} ({}; {} solutions with |a|, |b| <= {})",
            c.certified,
            c.mod4.reduces_to,
            c.solutions.len(),
            c.search_bound
        )
        .unwrap();
    }
    writeln!(s, "rank <= 10 (primitive embedding hypothesis): {}", r.nikulin_hypothesis).unwrap();
    s
}

pub fn feasibility(v: &FeasibilityVerdict) -> String {
    let mut s = String::new();
    writeln!(s, "p = {}, rho = {}, height = {}: {}", v.p, v.rho, v.h, if v.feasible { "feasible" } else { "infeasible" })
        .unwrap();
    let reason = match &v.reason {
        FeasibilityReason::ArtinViolation => format!("rho > 22 - 2h = {}", 22i64 - 2 * v.h as i64),
        FeasibilityReason::TheoremCase { description } => description.clone(),
        FeasibilityReason::WitnessProvided => "explicit witness".into(),
    };
    writeln!(s, "reason: {reason}").unwrap();
    if let Some(st) = v.witness_status {
        writeln!(s, "witness status: {st:?}").unwrap();
    }
    if let Some(w) = &v.witness {
        s.push_str(&witness(w));
    }
    s
}

/// Cells: '.' infeasible, 'W' witness computed, 'U' feasible without a computed witness.
pub fn table(p: u64, cells: &[FeasibilityVerdict]) -> String {
    let mut s = String::new();
    writeln!(s, "p = {p}  (. infeasible, W witness, U feasible but witness unsupported)").unwrap();
    writeln!(s, "rho\\h  1 2 3 4 5 6 7 8 9 10").unwrap();
    for row in cells.chunks(10) {
        write!(s, "{:>5} ", row[0].rho).unwrap();
        for c in row {
            let mark = match (c.feasible, c.witness_status) {
                (false, _) => '.',
                (true, Some(WitnessStatus::Computed)) => 'W',
                (true, _) => 'U',
            };
            write!(s, " {mark}").unwrap();
        }
        s.push('\n');
    }
    s
}
