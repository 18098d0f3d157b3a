//! JSON reports. Every report carries `schema_version` and `command`; the
//! matching JSON Schemas live in `schemas/` at the crate root.
//!
//! Rows and columns of the exponent matrix are 1-based in every report.
//! Variable and check node ids are 0-based flat ids `block * N + offset`.

use serde_json::{json, Map, Value};

use crate::ets::{EtsQuery, EtsSearchResult};
use crate::matrix::ExponentMatrix;
use crate::profile::{cycle_census, ConstraintProfile, ProfileReport};
use crate::search::{SearchConfig, SearchOutcome};
use crate::tanner::Girth;
use crate::verify::VerificationReport;
use crate::vngraph::{chromatic_index, matching_number, EdgeColoring, VnGraph};

pub const SCHEMA_VERSION: &str = "etsbench-report/1";

/// Names of the shipped schema files, one per command.
pub const SCHEMA_FILES: [&str; 8] = [
    "girth.schema.json",
    "cycles.schema.json",
    "profile-check.schema.json",
    "ets.schema.json",
    "search.schema.json",
    "vn-enum.schema.json",
    "color.schema.json",
    "verify-table1.schema.json",
];

fn envelope(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

fn girth_json(g: Girth) -> Value {
    match g {
        Girth::Exact(v) => json!({"value": v, "exact": true}),
        Girth::AtLeast(v) => json!({"value": v, "exact": false}),
    }
}

fn set_label(rows: &[usize]) -> String {
    let inner: Vec<String> = rows.iter().map(|r| (r + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn girth_report(b: &ExponentMatrix, exponent: Girth, lifted: Girth) -> Value {
    envelope(
        "girth",
        json!({
            "matrix": b,
            "exponent_girth": girth_json(exponent),
            "lifted_girth": girth_json(lifted),
            "agree": exponent == lifted,
        }),
    )
}

/// Cycle counts by row pattern together with a profile check.
///
/// `counts.6` is keyed by row set and `counts.8` by the doubled-row multiset
/// `{d,d,r}` (row `d` used twice, row `r` at least once); both are empty
/// when shorter cycles make them undefined.
pub fn cycle_report(b: &ExponentMatrix, cap: usize, profile: &ConstraintProfile, check: &ProfileReport) -> Value {
    let census = cycle_census(b, cap);
    let six: Map<String, Value> = census
        .six_by_rows
        .iter()
        .map(|(rows, c)| (set_label(rows), json!(c)))
        .collect();
    let eight: Map<String, Value> = census
        .eight_doubled
        .iter()
        .map(|&(d, r, c)| (set_label(&[d, d, r]), json!(c)))
        .collect();
    let (girth, exact) = match census.girth {
        Girth::Exact(g) => (g, true),
        Girth::AtLeast(g) => (g, false),
    };
    envelope(
        "cycles",
        json!({
            "matrix": b,
            "girth": girth,
            "girth_exact": exact,
            "counts": {"4": census.four, "6": six, "8": eight},
            "profile": profile.name,
            "pass": check.pass,
            "witnesses": check.violations,
        }),
    )
}

pub fn profile_report(b: &ExponentMatrix, profile: &ConstraintProfile, check: &ProfileReport) -> Value {
    let six: Vec<String> = profile.forbidden_6cycle_row_sets.iter().map(|s| set_label(s)).collect();
    let eight = profile
        .forbid_8cycle_doubled_row
        .map(|(d, r)| json!({"r_double": d + 1, "r_required": r + 1}));
    envelope(
        "profile-check",
        json!({
            "matrix": b,
            "profile": profile.name,
            "girth_floor": profile.girth_floor,
            "forbidden_6cycle_row_sets": six,
            "forbid_8cycle_doubled_row": eight,
            "girth_ok": check.girth_ok,
            "pass": check.pass,
            "violations": check.violations,
        }),
    )
}

/// ETS certificate. `records` holds one representative per quasi-cyclic
/// orbit unless `orbits_expanded` is set.
pub fn ets_certificate(b: &ExponentMatrix, query: &EtsQuery, result: &EtsSearchResult, orbits_expanded: bool) -> Value {
    envelope(
        "ets",
        json!({
            "matrix": b,
            "query": query,
            "status": result.status,
            "records": result.records,
            "orbits_expanded": orbits_expanded,
            "expansions": result.expansions,
            "anomalies": result.anomalies,
        }),
    )
}

pub fn search_report(cfg: &SearchConfig, outcome: &SearchOutcome) -> Value {
    envelope(
        "search",
        json!({
            "config": {
                "n": cfg.cols,
                "profile": cfg.profile.name,
                "N_min": cfg.lift_min,
                "N_max": cfg.lift_max,
                "engine": cfg.engine,
                "random_seed": cfg.random_seed,
                "budget": cfg.budget,
                "normalized": cfg.normalized,
                "symmetry_breaking": cfg.symmetry_breaking,
                "seed_rows": cfg.seed_rows,
            },
            "status": outcome.status,
            "matrix": outcome.matrix,
            "N": outcome.lift,
            "expansions": outcome.expansions,
            "restarts": outcome.restarts,
            "attempts": outcome.attempts,
            "rejected": outcome.rejected,
        }),
    )
}

fn graph_json(g: &VnGraph) -> Value {
    json!({
        "name": g.name(),
        "order": g.order(),
        "edges": g.edges(),
        "degrees": g.degree_sequence(),
        "chromatic_index": chromatic_index(g),
        "matching_number": matching_number(g),
    })
}

pub fn vn_enum_report(a: usize, b: usize, gamma: usize, girth: usize, graphs: &[VnGraph]) -> Value {
    let list: Vec<Value> = graphs.iter().map(graph_json).collect();
    envelope(
        "vn-enum",
        json!({"a": a, "b": b, "gamma": gamma, "girth": girth, "count": graphs.len(), "graphs": list}),
    )
}

/// Result of a constrained coloring run. `count` is present in count mode,
/// `coloring` in find mode.
pub struct ColorRun<'a> {
    pub graph: &'a VnGraph,
    pub colors: usize,
    pub triangles: &'a [[u8; 3]],
    pub quads: &'a [(u8, u8)],
    pub count: Option<u64>,
    pub coloring: Option<Option<EdgeColoring>>,
}

pub fn color_report(run: &ColorRun) -> Value {
    let quads: Vec<Value> = run
        .quads
        .iter()
        .map(|&(d, r)| json!({"r_double": d, "r_required": r}))
        .collect();
    let mut body = json!({
        "graph": run.graph,
        "colors": run.colors,
        "forbid_triangles": run.triangles,
        "forbid_quads": quads,
    });
    let obj = body.as_object_mut().unwrap();
    if let Some(c) = run.count {
        obj.insert("mode".into(), json!("count"));
        obj.insert("count".into(), json!(c));
        obj.insert("exists".into(), json!(c > 0));
    }
    if let Some(found) = &run.coloring {
        obj.insert("mode".into(), json!("find"));
        obj.insert("exists".into(), json!(found.is_some()));
        obj.insert("coloring".into(), json!(found));
    }
    envelope("color", body)
}

pub fn verify_report(reports: &[VerificationReport]) -> Value {
    envelope(
        "verify-table1",
        json!({
            "pass": reports.iter().all(|r| r.pass),
            "certificates": reports,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;
    use crate::profile::{check_profile, ProfileName};

    #[test]
    fn cycle_report_shape() {
        let b = Fixture::G6N5.matrix();
        let p = ConstraintProfile::named(ProfileName::Girth6EtsFree);
        let r = cycle_report(&b, 10, &p, &check_profile(&b, &p));
        assert_eq!(r["schema_version"], SCHEMA_VERSION);
        assert_eq!(r["girth"], 6);
        assert_eq!(r["counts"]["4"], 0);
        assert_eq!(r["counts"]["6"]["{1,2,3}"], 0);
        assert_eq!(r["counts"]["6"]["{1,2,4}"], 0);
        assert!(r["counts"]["6"]["{2,3,4}"].as_u64().unwrap() > 0);
        assert_eq!(r["pass"], true);
    }

    #[test]
    fn witnesses_are_one_based() {
        let b = ExponentMatrix::from_rows(7, &[[0, 0], [0, 0]]).unwrap();
        let p = ConstraintProfile::named(ProfileName::Girth6Basic);
        let r = cycle_report(&b, 10, &p, &check_profile(&b, &p));
        assert_eq!(r["witnesses"][0]["witness"]["slots"], json!([[1, 1], [2, 2]]));
    }
}
