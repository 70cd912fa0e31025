//! Exact reconstruction of the stratified SU(2)/U(2)/SU(3) character
//! varieties of torus knot groups: component enumeration, closure
//! incidence, Euler characteristics and integral homology, with every
//! counting formula checked against brute-force oracles.

pub mod cyclotomic;
pub mod incidence;
pub mod invariants;
pub mod simplex;
pub mod strata;

pub use cyclotomic::{canonical_t, mu, CyclotomicError, Root};
pub use incidence::{build_incidence, euler_from_graph, Edge, EdgeKind, IncidenceGraph, NodeKind};
pub use invariants::{
    build_f_matrix, chi_formula, chi_strata, f2_rank, homology_n2, meridian_class,
    smith_normal_form, EulerReport, F2Matrix, HomologyProfile, IntMatrix, InvariantsError,
};
pub use simplex::{
    circle_path, circle_point_census, circle_points, monodromy, normalized_lift, to_simplex,
    CirclePath, Lift,
    Rat, SimplexError, SimplexPoint,
};
pub use strata::{
    brute_tr_census, classify_pair, count_components, count_tr_intersections,
    enumerate_components, Component, EigenData, PointClass, StrataError, StratumClass, Topology,
    TorusKnot, TrCensus,
};
