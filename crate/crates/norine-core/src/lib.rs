//! Mechanical verification of the geodesic Norine conjecture on small
//! hypercubes.
//!
//! The conjecture asserts that every antipodal 2-coloring of the edges of
//! Q_n (a coloring where each edge and its antipodal image receive opposite
//! colors) contains a monochromatic geodesic between some pair of antipodal
//! vertices. This crate machine-checks that no counterexample exists for
//! small n, three independent ways:
//!
//! - [`encoder`] translates "a counterexample coloring of Q_n exists" into
//!   CNF; unsatisfiability confirms the conjecture for that dimension.
//! - [`solver`] is a self-contained CDCL SAT solver that decides those
//!   instances (or any DIMACS instance) with verified models.
//! - [`oracle`] exhaustively enumerates all antipodal colorings for n <= 4
//!   and cross-checks the encoding against brute force.
//! - [`orbits`] splits the n = 8 instance into 7218 symmetry-reduced
//!   subproblems, each a standalone CNF file, for distribution across
//!   independent solver runs.
//!
//! [`cube`] holds the shared combinatorial model: vertices, edges, edge ids
//! (which double as CNF variable numbers), colorings, and geodesics.

pub mod cnf;
pub mod cube;
pub mod dimacs;
pub mod encoder;
pub mod error;
pub mod oracle;
pub mod orbits;
pub mod solver;

pub use cnf::{Clause, CnfInstance, Lit};
pub use cube::{
    find_alternating_square, first_mono_geodesic, geodesics_from, has_mono_antipodal_path,
    has_mono_geodesic, Color, Coloring, CubeDim, Edge, Geodesic, Vertex,
};
pub use dimacs::{read_dimacs, write_dimacs};
pub use encoder::{
    antipodal_clauses, build_instance, geodesic_clauses, instance_stats, stream_dimacs,
    symmetry_breaking_units, EncodeOptions, InstanceStats,
};
pub use error::{Error, Result};
pub use oracle::{
    brute_force_geodesic_conjecture, check_counterexample, cross_check_encoding, decode_model,
    encode_coloring, enumerate_antipodal_colorings, read_coloring, write_coloring,
    AntipodalColorings, CounterexampleCheck, CrossCheckReport, MAX_ORACLE_DIM,
};
pub use orbits::{
    boundary_edges, emit_subproblem, read_orbit_table, subproblem_file_name, subproblem_units,
    write_orbit_table, write_subproblem, BoundaryColoring, OrbitSpace, OrbitSummary, SquareFrame,
    SquareMap, SymmetryElement,
};
pub use solver::{
    parse_external_result, solve, solve_with_stats, verify_model, Budget, Model, SolveResult,
    Solver, SolverStats,
};
