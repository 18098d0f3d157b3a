//! Every report kind validates against its shipped schema.

use std::path::Path;

use etsbench::report::{self, ColorRun, SCHEMA_FILES, SCHEMA_VERSION};
use etsbench::verify::{verify_fixture, verify_matrix, VerifyOptions};
use etsbench::{
    bfs_girth, check_profile, enumerate_vn_graphs, exponent_girth, find_ets, lift, search, ColoringProblem,
    ConstraintProfile, Engine, EtsQuery, ExponentMatrix, Fixture, ProfileName, SearchConfig, VnGraph,
};
use serde_json::Value;

fn validate(name: &str, report: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(report).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
    assert_eq!(report["schema_version"], SCHEMA_VERSION);
    assert_eq!(report["command"], name);
}

#[test]
fn schema_files_exist() {
    for f in SCHEMA_FILES {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(f);
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["properties"]["schema_version"]["const"], SCHEMA_VERSION, "{f}");
    }
}

#[test]
fn matrix_reports_validate() {
    let bad = ExponentMatrix::from_rows(13, &[[0, 0, 0, 0, 0], [0, 7, 6, 8, 1], [0, 3, 9, 6, 2], [0, 4, 7, 12, 9]]).unwrap();
    for b in [Fixture::G6N5.matrix(), Fixture::G8N5.matrix(), bad.clone(), bad.with_entry(1, 1, 6)] {
        validate("girth", &report::girth_report(&b, exponent_girth(&b, 12), bfs_girth(&lift(&b), 12)));
        for name in ProfileName::ALL {
            let p = ConstraintProfile::named(name);
            let c = check_profile(&b, &p);
            validate("cycles", &report::cycle_report(&b, 10, &p, &c));
            validate("profile-check", &report::profile_report(&b, &p, &c));
        }
        let q = EtsQuery::new(6, 4).sizes(5, 6);
        let res = find_ets(&lift(&b), &q);
        validate("ets", &report::ets_certificate(&b, &q, &res, false));
    }
}

#[test]
fn search_reports_validate() {
    let p = ConstraintProfile::named(ProfileName::Girth6EtsFree);
    let cfgs = [
        SearchConfig::new(5, p.clone(), 2, 13),
        SearchConfig::new(5, p.clone(), 2, 9),
        SearchConfig::new(5, p.clone(), 13, 13).engine(Engine::Random).random_seed(4),
        SearchConfig::new(5, p.clone(), 13, 13).seed_rows(vec![vec![0; 5], vec![0, 1, 2, 6, 9], vec![0, 4, 8, 11, 10]]),
        SearchConfig::new(6, p, 30, 30).budget(5),
    ];
    for cfg in cfgs {
        validate("search", &report::search_report(&cfg, &search(&cfg).unwrap()));
    }
}

#[test]
fn graph_reports_validate() {
    for (a, b, girth) in [(5, 4, 6), (6, 2, 6), (7, 4, 8), (3, 3, 6)] {
        validate("vn-enum", &report::vn_enum_report(a, b, 4, girth, &enumerate_vn_graphs(a, b, 4, girth)));
    }
    let g = VnGraph::complete_bipartite(3, 4).unwrap();
    let problem = ColoringProblem::new(&g, 4);
    let count = ColorRun {
        graph: &g,
        colors: 4,
        triangles: &[],
        quads: &[(1, 2)],
        count: Some(0),
        coloring: None,
    };
    validate("color", &report::color_report(&count));
    let find = ColorRun {
        graph: &g,
        colors: 4,
        triangles: &[[1, 2, 3]],
        quads: &[],
        count: None,
        coloring: Some(problem.find()),
    };
    validate("color", &report::color_report(&find));
}

#[test]
fn verification_reports_validate() {
    let bad = ExponentMatrix::from_rows(13, &[[0, 0, 0, 0, 0], [0, 7, 6, 8, 1], [0, 3, 9, 6, 2], [0, 4, 7, 12, 9]]).unwrap();
    let reports = vec![
        verify_fixture(Fixture::G6N5),
        verify_fixture(Fixture::G8N5),
        verify_matrix(&bad, 6, VerifyOptions::default()),
        verify_matrix(&Fixture::G6N5.matrix().with_entry(2, 2, 0), 6, VerifyOptions::default()),
        verify_matrix(&Fixture::G6N5.matrix(), 8, VerifyOptions::default()),
    ];
    assert!(reports[2].claims.iter().any(|c| matches!(c.witness, Some(etsbench::verify::Witness::Ets(_)))));
    validate("verify-table1", &report::verify_report(&reports));
}

#[test]
fn schemas_reject_malformed_reports() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/ets.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let b = Fixture::G6N5.matrix();
    let q = EtsQuery::new(5, 4);
    let good = report::ets_certificate(&b, &q, &find_ets(&lift(&b), &q), false);
    assert!(validator.is_valid(&good));
    let mut bad = good.clone();
    bad["status"] = "maybe".into();
    assert!(!validator.is_valid(&bad));
    let mut bad = good.clone();
    bad["schema_version"] = "0".into();
    assert!(!validator.is_valid(&bad));
    let mut bad = good;
    bad.as_object_mut().unwrap().remove("expansions");
    assert!(!validator.is_valid(&bad));
}
