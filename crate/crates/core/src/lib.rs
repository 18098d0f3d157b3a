//! Workbench for column-weight-4 QC-LDPC exponent matrices: lifting, cycle
//! analysis, VN-graph enumeration and coloring, trapping-set search and
//! constrained matrix construction.

pub mod cycles;
pub mod error;
pub mod ets;
pub mod fixtures;
pub mod matrix;
pub mod profile;
pub mod report;
pub mod search;
pub mod tanner;
pub mod verify;
pub mod vngraph;

pub use cycles::{
    count_6cycles_by_row_set, enumerate_cycle_solutions, exponent_girth, has_8cycle_doubled_row, CycleWitness,
};
pub use error::ParseError;
pub use ets::{brute_force_ets_oracle, classify_subset, find_ets, EtsQuery, EtsRecord, EtsSearchResult, EtsStatus};
pub use fixtures::Fixture;
pub use matrix::{parse_exponent_matrix, ExponentMatrix};
pub use profile::{check_profile, ConstraintProfile, ProfileName, ProfileReport};
pub use search::{search, Engine, SearchConfig, SearchOutcome, SearchStatus};
pub use tanner::{bfs_girth, lift, Alist, Girth, TannerGraph};
pub use verify::{verify_fixture, verify_matrix, VerificationReport};
pub use vngraph::{are_isomorphic, enumerate_vn_graphs, ColoringProblem, VnGraph};
