//! Named constraint profiles for exponent matrices and their checker.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cycles::{
    enumerate_cycle_solutions_where, find_cycle_solution, matches_doubled_row, CycleWitness,
};
use crate::matrix::ExponentMatrix;
use crate::tanner::Girth;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileName {
    Girth6Basic,
    Girth6EtsFree,
    Girth8Basic,
    Girth8EtsFree,
}

impl ProfileName {
    pub const ALL: [ProfileName; 4] = [
        ProfileName::Girth6Basic,
        ProfileName::Girth6EtsFree,
        ProfileName::Girth8Basic,
        ProfileName::Girth8EtsFree,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProfileName::Girth6Basic => "girth6-basic",
            ProfileName::Girth6EtsFree => "girth6-ets-free",
            ProfileName::Girth8Basic => "girth8-basic",
            ProfileName::Girth8EtsFree => "girth8-ets-free",
        }
    }
}

impl fmt::Display for ProfileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProfileName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProfileName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown profile '{s}'"))
    }
}

/// Cycle constraints an exponent matrix must satisfy. Row indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintProfile {
    pub name: ProfileName,
    pub girth_floor: usize,
    pub forbidden_6cycle_row_sets: Vec<[usize; 3]>,
    /// `(r_double, r_required)`
    pub forbid_8cycle_doubled_row: Option<(usize, usize)>,
}

impl ConstraintProfile {
    pub fn named(name: ProfileName) -> Self {
        let (girth_floor, six, eight) = match name {
            ProfileName::Girth6Basic => (6, vec![], None),
            ProfileName::Girth6EtsFree => (6, vec![[0, 1, 2], [0, 1, 3]], None),
            ProfileName::Girth8Basic => (8, vec![], None),
            ProfileName::Girth8EtsFree => (8, vec![], Some((0, 1))),
        };
        ConstraintProfile {
            name,
            girth_floor,
            forbidden_6cycle_row_sets: six,
            forbid_8cycle_doubled_row: eight,
        }
    }

    /// Largest row index referenced by the profile.
    pub fn max_row(&self) -> usize {
        let six = self.forbidden_6cycle_row_sets.iter().flatten().copied();
        let eight = self.forbid_8cycle_doubled_row.into_iter().flat_map(|(a, b)| [a, b]);
        six.chain(eight).max().unwrap_or(0)
    }

    /// True when a row pattern of half-length `k` is forbidden by this profile.
    /// Lengths below the girth floor are always forbidden.
    pub fn forbids(&self, rows: &[usize]) -> bool {
        let len = 2 * rows.len();
        if len < self.girth_floor {
            return true;
        }
        match rows.len() {
            3 => {
                let mut s = [rows[0], rows[1], rows[2]];
                s.sort_unstable();
                self.forbidden_6cycle_row_sets.iter().any(|f| {
                    let mut f = *f;
                    f.sort_unstable();
                    f == s
                })
            }
            4 => self
                .forbid_8cycle_doubled_row
                .is_some_and(|(d, r)| matches_doubled_row(rows, d, r)),
            _ => false,
        }
    }

    /// Half-lengths that carry constraints.
    pub fn constrained_half_lengths(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = (2..self.girth_floor / 2).collect();
        if !self.forbidden_6cycle_row_sets.is_empty() && !ks.contains(&3) {
            ks.push(3);
        }
        if self.forbid_8cycle_doubled_row.is_some() && !ks.contains(&4) {
            ks.push(4);
        }
        ks
    }
}

/// One violated constraint and its first witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: String,
    pub witness: CycleWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub profile: ProfileName,
    pub girth_ok: bool,
    pub pass: bool,
    pub violations: Vec<Violation>,
}

fn row_set_label(rows: &[usize]) -> String {
    let inner: Vec<String> = rows.iter().map(|r| (r + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Checks `b` against `profile`. The girth constraint is reported first; row
/// pattern constraints are only evaluated when the girth floor holds.
pub fn check_profile(b: &ExponentMatrix, profile: &ConstraintProfile) -> ProfileReport {
    let mut violations = Vec::new();
    let mut girth_ok = true;
    for k in 2..profile.girth_floor / 2 {
        if let Some(w) = find_cycle_solution(b, k, |_| true) {
            violations.push(Violation {
                constraint: format!("girth >= {} ({}-cycle present)", profile.girth_floor, 2 * k),
                witness: w,
            });
            girth_ok = false;
            break;
        }
    }
    if girth_ok {
        for set in &profile.forbidden_6cycle_row_sets {
            if set.iter().any(|&r| r >= b.rows()) {
                continue;
            }
            let mut target = *set;
            target.sort_unstable();
            let first = enumerate_cycle_solutions_where(b, 3, |r| {
                let mut s = [r[0], r[1], r[2]];
                s.sort_unstable();
                s == target
            })
            .into_iter()
            .next();
            if let Some(w) = first {
                violations.push(Violation {
                    constraint: format!("no 6-cycle on rows {}", row_set_label(set)),
                    witness: w,
                });
            }
        }
        if let Some((d, r)) = profile.forbid_8cycle_doubled_row {
            if d < b.rows() && r < b.rows() {
                let first = enumerate_cycle_solutions_where(b, 4, |rows| matches_doubled_row(rows, d, r))
                    .into_iter()
                    .next();
                if let Some(w) = first {
                    violations.push(Violation {
                        constraint: format!("no 8-cycle using row {} twice and row {}", d + 1, r + 1),
                        witness: w,
                    });
                }
            }
        }
    }
    ProfileReport {
        profile: profile.name,
        girth_ok,
        pass: violations.is_empty(),
        violations,
    }
}

/// Per-pattern cycle counts used by the JSON cycle report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCensus {
    pub girth: Girth,
    pub four: usize,
    /// `(rows, count)` for each 3-subset of rows, 0-based
    pub six_by_rows: Vec<([usize; 3], usize)>,
    /// `(r_double, r_required, count)`
    pub eight_doubled: Vec<(usize, usize, usize)>,
}

/// Counts canonical cycles by row pattern. 6-cycle counts are only taken on
/// 4-cycle-free matrices and doubled-row 8-cycle counts on 6-cycle-free ones.
pub fn cycle_census(b: &ExponentMatrix, cap: usize) -> CycleCensus {
    use crate::cycles::{enumerate_cycle_solutions, exponent_girth};
    let girth = exponent_girth(b, cap);
    let four = enumerate_cycle_solutions(b, 2).len();
    let m = b.rows();
    let mut six_by_rows = Vec::new();
    if four == 0 {
        let sixes = enumerate_cycle_solutions(b, 3);
        for x in 0..m {
            for y in x + 1..m {
                for z in y + 1..m {
                    let count = sixes.iter().filter(|w| w.row_multiset() == [x, y, z]).count();
                    six_by_rows.push(([x, y, z], count));
                }
            }
        }
    }
    let mut eight_doubled = Vec::new();
    if four == 0 && six_by_rows.iter().all(|s| s.1 == 0) && m >= 2 {
        let eights = enumerate_cycle_solutions(b, 4);
        for d in 0..m {
            for r in 0..m {
                if d != r {
                    let count = eights.iter().filter(|w| matches_doubled_row(&w.row_pattern(), d, r)).count();
                    eight_doubled.push((d, r, count));
                }
            }
        }
    }
    CycleCensus {
        girth,
        four,
        six_by_rows,
        eight_doubled,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;

    #[test]
    fn names_round_trip() {
        for p in ProfileName::ALL {
            assert_eq!(p.as_str().parse::<ProfileName>().unwrap(), p);
        }
        assert!("girth7".parse::<ProfileName>().is_err());
    }

    #[test]
    fn profile_shapes() {
        let g6 = ConstraintProfile::named(ProfileName::Girth6EtsFree);
        assert_eq!(g6.girth_floor, 6);
        assert!(g6.forbid_8cycle_doubled_row.is_none());
        let g8 = ConstraintProfile::named(ProfileName::Girth8EtsFree);
        assert!(g8.forbidden_6cycle_row_sets.is_empty());
        assert_eq!(g8.max_row(), 1);
        assert!(g8.forbids(&[0, 1, 2]));
        assert!(g8.forbids(&[0, 1, 0, 3]));
        assert!(!g8.forbids(&[0, 2, 0, 3]));
        assert!(g6.forbids(&[2, 0, 1]));
        assert!(!g6.forbids(&[0, 2, 3]));
        assert_eq!(g8.constrained_half_lengths(), vec![2, 3, 4]);
    }

    #[test]
    fn girth_six_fixture_against_profiles() {
        let b = Fixture::G6N7.matrix();
        assert!(check_profile(&b, &ConstraintProfile::named(ProfileName::Girth6EtsFree)).pass);
        let rep = check_profile(&Fixture::G6N5.matrix(), &ConstraintProfile::named(ProfileName::Girth8Basic));
        assert!(!rep.pass && !rep.girth_ok);
        assert_eq!(rep.violations[0].witness.length(), 6);
    }

    #[test]
    fn duplicate_rows_fail_with_four_cycle() {
        let b = ExponentMatrix::from_rows(13, &[[0, 0, 0], [0, 1, 2], [0, 1, 2], [0, 5, 9]]).unwrap();
        for p in ProfileName::ALL {
            let rep = check_profile(&b, &ConstraintProfile::named(p));
            assert!(!rep.pass);
            assert_eq!(rep.violations[0].witness.length(), 4);
        }
    }

    #[test]
    fn census_on_fixture() {
        let c = cycle_census(&Fixture::G6N5.matrix(), 12);
        assert_eq!(c.girth, Girth::Exact(6));
        assert_eq!(c.four, 0);
        let get = |s: [usize; 3]| c.six_by_rows.iter().find(|x| x.0 == s).unwrap().1;
        assert_eq!(get([0, 1, 2]), 0);
        assert_eq!(get([0, 1, 3]), 0);
        assert!(c.eight_doubled.is_empty());
    }
}
