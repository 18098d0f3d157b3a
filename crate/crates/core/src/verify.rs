//! Claim-by-claim certificates for published and constructed matrices.

use serde::Serialize;

use crate::cycles::{count_6cycles_by_row_set, exponent_girth, has_8cycle_doubled_row, six_cycles_by_row_set, CycleWitness};
use crate::ets::{find_ets, EtsQuery, EtsRecord, EtsStatus, DEFAULT_EXPANSION_BUDGET};
use crate::fixtures::Fixture;
use crate::matrix::ExponentMatrix;
use crate::profile::{check_profile, ConstraintProfile, ProfileName};
use crate::tanner::{bfs_girth, lift, Girth};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Cycle(CycleWitness),
    Ets(Box<EtsRecord>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub pass: bool,
    pub detail: String,
    pub witness: Option<Witness>,
}

impl ClaimResult {
    fn new(claim: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        ClaimResult {
            claim: claim.into(),
            pass,
            detail: detail.into(),
            witness: None,
        }
    }

    fn with_witness(mut self, w: Option<Witness>) -> Self {
        self.witness = w;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub fixture: Option<String>,
    pub matrix: ExponentMatrix,
    pub target_girth: usize,
    pub pass: bool,
    pub claims: Vec<ClaimResult>,
    /// Total ETS search expansions.
    pub expansions: u64,
}

impl VerificationReport {
    pub fn failed_claims(&self) -> impl Iterator<Item = &ClaimResult> {
        self.claims.iter().filter(|c| !c.pass)
    }
}

/// Options for [`verify_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub expansion_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            expansion_budget: DEFAULT_EXPANSION_BUDGET,
        }
    }
}

fn girth_claim(label: &str, got: Girth, want: usize) -> ClaimResult {
    ClaimResult::new(format!("{label} = {want}"), got == Girth::Exact(want), format!("{label} is {got}"))
}

fn ets_claim(g: &crate::tanner::TannerGraph, a: usize, b_max: usize, girth: usize, opts: VerifyOptions) -> (ClaimResult, u64) {
    let q = EtsQuery::new(a, b_max).sizes(a, a).girth_context(girth).budget(opts.expansion_budget);
    let res = find_ets(g, &q);
    let name = format!("no ({a},b<={b_max}) ETS");
    let claim = match res.status {
        EtsStatus::Free if res.anomalies.is_empty() => {
            ClaimResult::new(name, true, format!("free after {} expansions", res.expansions))
        }
        EtsStatus::Free | EtsStatus::Found => {
            let mut detail = format!("{} orbit representatives found", res.records.len());
            if !res.anomalies.is_empty() {
                detail.push_str(&format!("; anomalies: {}", res.anomalies.join("; ")));
            }
            let w = res.records.first().cloned().map(|r| Witness::Ets(Box::new(r)));
            ClaimResult::new(name, false, detail).with_witness(w)
        }
        EtsStatus::Inconclusive => ClaimResult::new(
            name,
            false,
            format!("inconclusive: budget of {} expansions exhausted", opts.expansion_budget),
        ),
    };
    (claim, res.expansions)
}

/// Runs the girth-6 or girth-8 claim list on `b`.
///
/// Girth 6: both girth computations give exactly 6, no 6-cycle on rows
/// {1,2,3} or {1,2,4}, the girth6-ets-free profile passes, no (5,b<=4) and
/// no (6,b<=2) ETS. Girth 8: both girth computations give exactly 8, no
/// 8-cycle using row 1 twice and row 2, the girth8-ets-free profile passes,
/// no (7,b<=4) ETS.
pub fn verify_matrix(b: &ExponentMatrix, target_girth: usize, opts: VerifyOptions) -> VerificationReport {
    assert!(target_girth == 6 || target_girth == 8, "target girth must be 6 or 8");
    let g = lift(b);
    let mut claims = Vec::new();
    let mut expansions = 0;

    claims.push(girth_claim("exponent girth", exponent_girth(b, 10), target_girth));
    claims.push(girth_claim("lifted girth", bfs_girth(&g, 10), target_girth));

    let profile_name = if target_girth == 6 {
        ProfileName::Girth6EtsFree
    } else {
        ProfileName::Girth8EtsFree
    };
    let rep = check_profile(b, &ConstraintProfile::named(profile_name));
    let first = rep.violations.first();
    claims.push(
        ClaimResult::new(
            format!("profile {profile_name}"),
            rep.pass,
            match first {
                Some(v) => format!("violates {}", v.constraint),
                None => "all constraints hold".to_string(),
            },
        )
        .with_witness(first.map(|v| Witness::Cycle(v.witness.clone()))),
    );

    if target_girth == 6 {
        for rows in [[0, 1, 2], [0, 1, 3]] {
            let label = format!("no 6-cycle on rows {{{},{},{}}}", rows[0] + 1, rows[1] + 1, rows[2] + 1);
            let claim = match count_6cycles_by_row_set(b, rows) {
                Ok(0) => ClaimResult::new(label, true, "count 0"),
                Ok(n) => {
                    let w = six_cycles_by_row_set(b, rows).ok().and_then(|v| v.into_iter().next());
                    ClaimResult::new(label, false, format!("count {n}")).with_witness(w.map(Witness::Cycle))
                }
                Err(e) => ClaimResult::new(label, false, e.to_string()),
            };
            claims.push(claim);
        }
        for (a, b_max) in [(5, 4), (6, 2)] {
            let (c, e) = ets_claim(&g, a, b_max, 6, opts);
            claims.push(c);
            expansions += e;
        }
    } else {
        let label = "no 8-cycle using row 1 twice and row 2";
        let claim = match has_8cycle_doubled_row(b, 0, 1) {
            Ok(r) if !r.found => ClaimResult::new(label, true, "none"),
            Ok(r) => ClaimResult::new(label, false, format!("{} canonical witnesses", r.witnesses.len()))
                .with_witness(r.witnesses.into_iter().next().map(Witness::Cycle)),
            Err(e) => ClaimResult::new(label, false, e.to_string()),
        };
        claims.push(claim);
        let (c, e) = ets_claim(&g, 7, 4, 8, opts);
        claims.push(c);
        expansions += e;
    }

    VerificationReport {
        fixture: None,
        matrix: b.clone(),
        target_girth,
        pass: claims.iter().all(|c| c.pass),
        claims,
        expansions,
    }
}

/// Verifies an embedded fixture against the claims it is published with.
pub fn verify_fixture(f: Fixture) -> VerificationReport {
    verify_fixture_with(f, VerifyOptions::default())
}

pub fn verify_fixture_with(f: Fixture, opts: VerifyOptions) -> VerificationReport {
    let mut rep = verify_matrix(&f.matrix(), f.girth(), opts);
    rep.fixture = Some(f.name().to_string());
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn girth_six_fixture_passes() {
        let rep = verify_fixture(Fixture::G6N5);
        assert!(rep.pass, "{:#?}", rep.failed_claims().collect::<Vec<_>>());
        assert_eq!(rep.claims.len(), 7);
    }

    #[test]
    fn mutant_reports_witness() {
        let b = Fixture::G6N5.matrix().with_entry(1, 1, 2);
        let rep = verify_matrix(&b, 6, VerifyOptions::default());
        assert!(!rep.pass);
        let failed: Vec<_> = rep.failed_claims().collect();
        assert!(failed.iter().any(|c| c.witness.is_some()));
    }

    #[test]
    fn tiny_budget_is_a_failure() {
        let rep = verify_fixture_with(Fixture::G6N5, VerifyOptions { expansion_budget: 10 });
        assert!(!rep.pass);
        assert!(rep.failed_claims().all(|c| c.detail.starts_with("inconclusive")));
    }
}
