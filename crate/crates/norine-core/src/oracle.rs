//! Ground truth at small dimensions.
//!
//! For n ≤ 4 the antipodal colorings of Q_n can be enumerated outright
//! (one free color bit per antipodal edge pair, so 2^(n·2^(n−2)) in
//! total) and the conjecture checked directly on each. That gives an
//! oracle that is independent of the clause encoding, and
//! [`cross_check_encoding`] pits the two against each other: the SAT
//! instance must be unsatisfiable exactly when enumeration finds no
//! counterexample.

use std::io::{self, BufRead, Write};
use std::time::{Duration, Instant};

use crate::cnf::Lit;
use crate::cube::{
    first_mono_geodesic, has_mono_geodesic, Color, Coloring, CubeDim, Edge, Geodesic, Vertex,
};
use crate::encoder::{build_instance, EncodeOptions};
use crate::error::{Error, Result};
use crate::solver::{solve, Budget, Model, SolveResult};

/// Largest dimension the exhaustive oracle accepts. n=5 already has 2^40
/// antipodal colorings.
pub const MAX_ORACLE_DIM: u32 = 4;

/// Iterates over every antipodal coloring of Q_n, each exactly once.
///
/// One canonical edge per antipodal pair (the one with the smaller id)
/// carries a free color bit; its partner always takes the complement.
pub struct AntipodalColorings {
    dim: CubeDim,
    pairs: Vec<(u32, u32)>,
    next: u64,
    total: u64,
}

/// Returns the antipodal-coloring iterator for `dim`, or an error for
/// dimensions past [`MAX_ORACLE_DIM`].
pub fn enumerate_antipodal_colorings(dim: CubeDim) -> Result<AntipodalColorings> {
    if dim.n() > MAX_ORACLE_DIM {
        return Err(Error::OracleDimension(dim.n()));
    }
    let mut pairs = Vec::with_capacity(dim.num_edges() as usize / 2);
    for id in 1..=dim.num_edges() {
        let partner = Edge::from_id(id, dim).unwrap().antipodal(dim).id(dim);
        if id < partner {
            pairs.push((id, partner));
        }
    }
    let total = 1u64 << pairs.len();
    Ok(AntipodalColorings {
        dim,
        pairs,
        next: 0,
        total,
    })
}

impl Iterator for AntipodalColorings {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        if self.next == self.total {
            return None;
        }
        let bits = self.next;
        self.next += 1;
        let mut c = Coloring::monochrome(self.dim, Color::Blue);
        for (i, &(id, partner)) in self.pairs.iter().enumerate() {
            let color = if bits >> i & 1 == 1 {
                Color::Red
            } else {
                Color::Blue
            };
            c.set_by_id(id, color);
            c.set_by_id(partner, color.flip());
        }
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for AntipodalColorings {}

/// Checks the conjecture by enumeration: returns every antipodal coloring
/// of Q_n with no monochromatic geodesic between any antipodal vertex
/// pair. An empty result confirms the conjecture at this dimension.
pub fn brute_force_geodesic_conjecture(dim: CubeDim) -> Result<Vec<Coloring>> {
    let half = dim.num_vertices() / 2;
    let colorings = enumerate_antipodal_colorings(dim)?;
    Ok(colorings
        .filter(|c| {
            (0..half).all(|label| {
                let u = Vertex(label);
                !has_mono_geodesic(c, u, Color::Red) && !has_mono_geodesic(c, u, Color::Blue)
            })
        })
        .collect())
}

/// Reads a coloring back out of a satisfying assignment: edge e is Red
/// exactly when the variable numbered `e.id()` is true.
pub fn decode_model(dim: CubeDim, model: &Model) -> Result<Coloring> {
    if model.num_vars() != dim.num_edges() {
        return Err(Error::ModelSize {
            got: model.num_vars(),
            want: dim.num_edges(),
        });
    }
    let mut c = Coloring::monochrome(dim, Color::Blue);
    for id in 1..=dim.num_edges() {
        if model.value(id) {
            c.set_by_id(id, Color::Red);
        }
    }
    Ok(c)
}

/// Builds the model whose decoding is `c` (the inverse of
/// [`decode_model`]).
pub fn encode_coloring(c: &Coloring) -> Model {
    let values = (1..=c.dim().num_edges())
        .map(|id| c.color_by_id(id) == Color::Red)
        .collect();
    Model::new(values)
}

/// Verdict on a purported counterexample coloring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CounterexampleCheck {
    /// Antipodal and free of monochromatic geodesics: a genuine
    /// counterexample to the conjecture.
    Valid,
    /// An edge and its antipodal partner share a color.
    NotAntipodal { edge: Edge, partner: Edge },
    /// Some antipodal vertex pair is joined by a single-color geodesic.
    MonoGeodesic { geodesic: Geodesic, color: Color },
}

/// Tests whether `c` refutes the conjecture, reporting the first violated
/// property in a fixed scan order (edge ids ascending, then start vertices
/// ascending with Red before Blue) so failures are reproducible.
pub fn check_counterexample(c: &Coloring) -> CounterexampleCheck {
    let dim = c.dim();
    for id in 1..=dim.num_edges() {
        let edge = Edge::from_id(id, dim).unwrap();
        let partner = edge.antipodal(dim);
        if partner.id(dim) > id && c.color(edge) == c.color(partner) {
            return CounterexampleCheck::NotAntipodal { edge, partner };
        }
    }
    for label in 0..dim.num_vertices() / 2 {
        let u = Vertex(label);
        for color in [Color::Red, Color::Blue] {
            if let Some(geodesic) = first_mono_geodesic(c, u, color) {
                return CounterexampleCheck::MonoGeodesic { geodesic, color };
            }
        }
    }
    CounterexampleCheck::Valid
}

/// Outcome of a successful [`cross_check_encoding`] run.
#[derive(Clone, Copy, Debug)]
pub struct CrossCheckReport {
    pub dim: CubeDim,
    /// Antipodal colorings enumerated (always 2^(n·2^(n−2))).
    pub colorings: u64,
    /// Counterexamples found by enumeration (zero when the conjecture
    /// holds at this dimension).
    pub counterexamples: u64,
    pub enumerate_time: Duration,
    /// Solve time for the instance without symmetry-breaking units.
    pub plain_solve_time: Duration,
    /// Solve time for the full instance.
    pub full_solve_time: Duration,
}

/// Validates the clause encoding against exhaustive enumeration (n ≤ 4).
///
/// Checks, in order: the enumeration has the expected cardinality and
/// yields only antipodal colorings; the instance without symmetry units
/// is unsatisfiable exactly when enumeration finds no counterexample; the
/// full instance stays unsatisfiable; and as a positive control, the
/// instance with the geodesic family ablated is satisfiable with a model
/// that decodes to an antipodal coloring carrying a monochromatic
/// geodesic. Any mismatch is an error naming a concrete witness.
pub fn cross_check_encoding(dim: CubeDim, seed: u64) -> Result<CrossCheckReport> {
    let fail = |msg: String| Err(Error::CrossCheck(msg));
    let n = dim.n();

    let start = Instant::now();
    let mut colorings = 0u64;
    let mut counterexamples: Vec<Coloring> = Vec::new();
    let half = dim.num_vertices() / 2;
    for c in enumerate_antipodal_colorings(dim)? {
        colorings += 1;
        if !c.is_antipodal() {
            return fail(format!(
                "n={n}: enumerated coloring {colorings} is not antipodal"
            ));
        }
        let refutes = (0..half).all(|label| {
            let u = Vertex(label);
            !has_mono_geodesic(&c, u, Color::Red) && !has_mono_geodesic(&c, u, Color::Blue)
        });
        if refutes {
            counterexamples.push(c);
        }
    }
    let expected = 1u64 << (dim.num_edges() / 2);
    if colorings != expected {
        return fail(format!(
            "n={n}: enumerated {colorings} colorings, expected {expected}"
        ));
    }
    let enumerate_time = start.elapsed();

    let plain = build_instance(dim, EncodeOptions::without_symmetry());
    let start = Instant::now();
    let plain_result = solve(&plain, seed, Budget::unlimited());
    let plain_solve_time = start.elapsed();
    match (&plain_result, counterexamples.first()) {
        (SolveResult::Unsat, None) => {}
        (SolveResult::Sat(model), Some(_)) => {
            let c = decode_model(dim, model)?;
            if check_counterexample(&c) != CounterexampleCheck::Valid {
                return fail(format!(
                    "n={n}: both paths claim counterexamples but the solver model is not one"
                ));
            }
        }
        (SolveResult::Unsat, Some(witness)) => {
            let reds: Vec<u32> = (1..=dim.num_edges())
                .filter(|&id| witness.color_by_id(id) == Color::Red)
                .collect();
            return fail(format!(
                "n={n}: instance unsatisfiable but enumeration found a counterexample \
                 (red edge ids {reds:?})"
            ));
        }
        (SolveResult::Sat(model), None) => {
            let c = decode_model(dim, model)?;
            return fail(format!(
                "n={n}: instance satisfiable but enumeration found no counterexample; \
                 model decodes with verdict {:?}",
                check_counterexample(&c)
            ));
        }
        (SolveResult::Timeout(_), _) => {
            return fail(format!("n={n}: unlimited solve reported a timeout"));
        }
    }

    let full = build_instance(dim, EncodeOptions::full());
    let start = Instant::now();
    let full_result = solve(&full, seed, Budget::unlimited());
    let full_solve_time = start.elapsed();
    if plain_result == SolveResult::Unsat && full_result != SolveResult::Unsat {
        return fail(format!(
            "n={n}: adding symmetry units turned an unsatisfiable instance satisfiable"
        ));
    }

    let ablated = EncodeOptions {
        antipodal: true,
        geodesic: false,
        symmetry: true,
    };
    match solve(&build_instance(dim, ablated), seed, Budget::unlimited()) {
        SolveResult::Sat(model) => {
            let c = decode_model(dim, &model)?;
            match check_counterexample(&c) {
                CounterexampleCheck::NotAntipodal { edge, partner } => {
                    return fail(format!(
                        "n={n}: model of the antipodal family colors {edge} and {partner} alike"
                    ));
                }
                CounterexampleCheck::MonoGeodesic { .. } => {}
                CounterexampleCheck::Valid => {
                    if counterexamples.is_empty() {
                        return fail(format!(
                            "n={n}: ablated model is a counterexample enumeration never found"
                        ));
                    }
                }
            }
        }
        other => {
            return fail(format!(
                "n={n}: antipodal family alone should be satisfiable, solver said {other:?}"
            ));
        }
    }

    Ok(CrossCheckReport {
        dim,
        colorings,
        counterexamples: counterexamples.len() as u64,
        enumerate_time,
        plain_solve_time,
        full_solve_time,
    })
}

/// Writes `c` in the coloring interchange format: a header line
/// `norine-coloring n=<n>`, then one `<edge_id> <R|B>` line per edge in
/// ascending id order.
pub fn write_coloring<W: Write>(c: &Coloring, mut sink: W) -> io::Result<()> {
    writeln!(sink, "norine-coloring n={}", c.dim().n())?;
    for id in 1..=c.dim().num_edges() {
        writeln!(sink, "{id} {}", c.color_by_id(id).letter())?;
    }
    Ok(())
}

/// Parses the coloring interchange format. Every edge id must appear
/// exactly once; errors carry the offending line number.
pub fn read_coloring<R: BufRead>(reader: R) -> Result<Coloring> {
    let bad = |line: usize, msg: String| Err(Error::Parse { line, msg });
    let mut lines = reader.lines().enumerate();

    let Some((_, header)) = lines.next() else {
        return bad(
            1,
            "empty input, expected `norine-coloring n=<n>`".to_string(),
        );
    };
    let header = header?;
    let Some(n) = header.trim_end().strip_prefix("norine-coloring n=") else {
        return bad(
            1,
            format!("bad header {header:?}, expected `norine-coloring n=<n>`"),
        );
    };
    let n: u32 = match n.parse() {
        Ok(n) => n,
        Err(_) => return bad(1, format!("bad dimension {n:?} in header")),
    };
    let dim = CubeDim::new(n)?;

    let mut c = Coloring::monochrome(dim, Color::Blue);
    let mut seen = vec![false; dim.num_edges() as usize + 1];
    let mut remaining = dim.num_edges();
    let mut last_line = 1;
    for (i, line) in lines {
        let ln = i + 1;
        last_line = ln;
        let line = line?;
        let mut fields = line.split_ascii_whitespace();
        let (Some(id), Some(letter), None) = (fields.next(), fields.next(), fields.next()) else {
            return bad(ln, format!("expected `<edge_id> <R|B>`, got {line:?}"));
        };
        let id: u32 = match id.parse() {
            Ok(id) => id,
            Err(_) => return bad(ln, format!("bad edge id {id:?}")),
        };
        if id == 0 || id > dim.num_edges() {
            return bad(
                ln,
                format!("edge id {id} out of range 1..={}", dim.num_edges()),
            );
        }
        if seen[id as usize] {
            return bad(ln, format!("edge id {id} listed twice"));
        }
        seen[id as usize] = true;
        remaining -= 1;
        let color = match letter {
            "R" => Color::Red,
            "B" => Color::Blue,
            other => return bad(ln, format!("bad color {other:?}, expected R or B")),
        };
        c.set_by_id(id, color);
    }
    if remaining > 0 {
        return bad(last_line, format!("{remaining} edge ids missing"));
    }
    Ok(c)
}

/// Renders a model as DIMACS-style literals, mostly for error messages.
pub fn model_literals(model: &Model) -> Vec<Lit> {
    (1..=model.num_vars())
        .map(|v| {
            if model.value(v) {
                Lit::positive(v)
            } else {
                Lit::negative(v)
            }
        })
        .collect()
}
