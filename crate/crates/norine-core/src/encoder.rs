//! CNF encoding of "Q_n has a counterexample coloring".
//!
//! Variable `X_e` (the edge id of `e`) is true when edge `e` is Red. Three
//! clause families, emitted in this order:
//!
//! 1. **Antipodal**: for each of the n*2^(n-2) antipodal edge pairs `{e, ē}`
//!    (keyed by the smaller id), the pair `(X_e | X_ē)` and `(!X_e | !X_ē)`,
//!    forcing opposite colors. n*2^(n-1) clauses.
//! 2. **Geodesic**: for each antipodal vertex pair, taken at its canonical
//!    endpoint `u` (top coordinate clear), and each of the n! flip orders in
//!    lexicographic order, a positive clause over the first n-1 edges of the
//!    path, in path order. A clause blocks an all-Blue run on those edges;
//!    under the antipodal constraints this is exactly what rules out
//!    monochromatic geodesics of both colors. 2^(n-1)*n! clauses of width
//!    n-1.
//! 3. **Symmetry units**: with k = ceil(n/2), the edges at vertex 0 in
//!    directions 0..k-1 are fixed Red and direction k is fixed Blue; every
//!    counterexample class contains a representative of this shape, so the
//!    units only prune the search. k+1 unit clauses.
//!
//! Family sizes and the emission order are part of the format: encoding the
//! same dimension twice gives byte-identical DIMACS.

use std::io::{self, Write};

use crate::cnf::{Clause, CnfInstance, Lit};
use crate::cube::{factorial, next_permutation, CubeDim, Edge, Vertex};
use crate::dimacs::DimacsWriter;

/// Selects which clause families go into an instance. Disabling families
/// yields ablated instances for cross-checks and experiments.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EncodeOptions {
    pub antipodal: bool,
    pub geodesic: bool,
    pub symmetry: bool,
}

impl EncodeOptions {
    pub fn full() -> Self {
        EncodeOptions {
            antipodal: true,
            geodesic: true,
            symmetry: true,
        }
    }

    /// The full encoding minus the symmetry-breaking units.
    pub fn without_symmetry() -> Self {
        EncodeOptions {
            symmetry: false,
            ..Self::full()
        }
    }
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self::full()
    }
}

/// Closed-form instance dimensions, by family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct InstanceStats {
    pub num_vars: u32,
    pub antipodal_clauses: u64,
    pub geodesic_clauses: u64,
    pub symmetry_units: u64,
}

impl InstanceStats {
    pub fn total_clauses(&self) -> u64 {
        self.antipodal_clauses + self.geodesic_clauses + self.symmetry_units
    }

    pub fn clauses_for(&self, opts: EncodeOptions) -> u64 {
        let mut total = 0;
        if opts.antipodal {
            total += self.antipodal_clauses;
        }
        if opts.geodesic {
            total += self.geodesic_clauses;
        }
        if opts.symmetry {
            total += self.symmetry_units;
        }
        total
    }
}

/// Computes instance dimensions without generating anything.
pub fn instance_stats(dim: CubeDim) -> InstanceStats {
    let n = dim.n();
    let half = 1u64 << (n - 1);
    InstanceStats {
        num_vars: dim.num_edges(),
        antipodal_clauses: n as u64 * half,
        geodesic_clauses: half * factorial(n),
        symmetry_units: n.div_ceil(2) as u64 + 1,
    }
}

/// Family 1: opposite colors on antipodal edge pairs, ordered by the
/// smaller edge id, the positive pair before the negative one.
pub fn antipodal_clauses(dim: CubeDim) -> Vec<Clause> {
    let mut out = Vec::with_capacity(dim.num_edges() as usize);
    for id in 1..=dim.num_edges() {
        let partner = Edge::from_id(id, dim).unwrap().antipodal(dim).id(dim);
        if partner > id {
            out.push(Clause::binary(Lit::positive(id), Lit::positive(partner)));
            out.push(Clause::binary(Lit::negative(id), Lit::negative(partner)));
        }
    }
    out
}

/// Family 3: unit clauses pinning the colors around vertex 0.
pub fn symmetry_breaking_units(dim: CubeDim) -> Vec<Clause> {
    let k = dim.n().div_ceil(2);
    (0..=k)
        .map(|d| {
            let id = Edge::new(Vertex(0), d, dim).unwrap().id(dim);
            Clause::unit(if d < k {
                Lit::positive(id)
            } else {
                Lit::negative(id)
            })
        })
        .collect()
}

/// Family 2 as a lazy iterator; the family has 2^(n-1)*n! clauses and is
/// never materialized wholesale by the writers.
pub fn geodesic_clauses(dim: CubeDim) -> GeodesicClauses {
    GeodesicClauses {
        dim,
        u: 0,
        order: (0..dim.n() as u8).collect(),
        remaining: instance_stats(dim).geodesic_clauses,
    }
}

/// Iterator over the geodesic clause family, in emission order: canonical
/// endpoints ascending, flip orders lexicographic within each endpoint.
pub struct GeodesicClauses {
    dim: CubeDim,
    u: u32,
    order: Vec<u8>,
    remaining: u64,
}

impl GeodesicClauses {
    fn current(&self) -> Clause {
        let n = self.dim.n() as usize;
        let mut lits = Vec::with_capacity(n - 1);
        let mut v = self.u;
        for &d in &self.order[..n - 1] {
            let base = Vertex(v & !(1 << d));
            let e = Edge::new(base, d as u32, self.dim).unwrap();
            lits.push(Lit::positive(e.id(self.dim)));
            v ^= 1 << d;
        }
        Clause::new_unchecked(lits)
    }
}

impl Iterator for GeodesicClauses {
    type Item = Clause;

    fn next(&mut self) -> Option<Clause> {
        if self.remaining == 0 {
            return None;
        }
        let clause = self.current();
        self.remaining -= 1;
        if self.remaining > 0 && !next_permutation(&mut self.order) {
            // flip orders exhausted for this endpoint; move to the next
            // canonical vertex (the order has wrapped back to sorted)
            self.u += 1;
        }
        Some(clause)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let len = self.remaining as usize;
        (len, Some(len))
    }
}

impl ExactSizeIterator for GeodesicClauses {}

/// Builds the full instance in memory. For n = 8 this is about 5.2 million
/// clauses; use [`stream_dimacs`] to write straight to disk instead.
pub fn build_instance(dim: CubeDim, opts: EncodeOptions) -> CnfInstance {
    let stats = instance_stats(dim);
    let mut inst = CnfInstance::new(stats.num_vars);
    let mut literals = 0u64;
    if opts.antipodal {
        literals += 2 * stats.antipodal_clauses;
    }
    if opts.geodesic {
        literals += (dim.n() as u64 - 1) * stats.geodesic_clauses;
    }
    if opts.symmetry {
        literals += stats.symmetry_units;
    }
    inst.reserve(stats.clauses_for(opts) as usize, literals as usize);
    for line in header_comments(dim, opts) {
        inst.push_comment(line);
    }
    if opts.antipodal {
        for c in antipodal_clauses(dim) {
            inst.add(c);
        }
    }
    if opts.geodesic {
        for c in geodesic_clauses(dim) {
            inst.add(c);
        }
    }
    if opts.symmetry {
        for c in symmetry_breaking_units(dim) {
            inst.add(c);
        }
    }
    inst
}

/// Writes the instance for `dim` as DIMACS without building it in memory.
/// Byte-identical to `write_dimacs(&build_instance(dim, opts), sink)`.
pub fn stream_dimacs<W: Write>(dim: CubeDim, opts: EncodeOptions, sink: W) -> io::Result<()> {
    stream_with_extra_units(dim, opts, &[], &[], sink)
}

/// Shared streaming core: the selected families plus trailing unit clauses
/// (used by the orbit subproblem writer).
pub(crate) fn stream_with_extra_units<W: Write>(
    dim: CubeDim,
    opts: EncodeOptions,
    extra_comments: &[String],
    extra_units: &[Lit],
    sink: W,
) -> io::Result<()> {
    let stats = instance_stats(dim);
    let mut w = DimacsWriter::new(sink);
    for line in header_comments(dim, opts) {
        w.comment(&line)?;
    }
    for line in extra_comments {
        w.comment(line)?;
    }
    w.header(
        stats.num_vars,
        stats.clauses_for(opts) + extra_units.len() as u64,
    )?;
    if opts.antipodal {
        for c in antipodal_clauses(dim) {
            w.clause(c.literals())?;
        }
    }
    if opts.geodesic {
        for c in geodesic_clauses(dim) {
            w.clause(c.literals())?;
        }
    }
    if opts.symmetry {
        for c in symmetry_breaking_units(dim) {
            w.clause(c.literals())?;
        }
    }
    for &l in extra_units {
        w.clause(&[l])?;
    }
    w.finish()?;
    Ok(())
}

pub(crate) fn header_comments(dim: CubeDim, opts: EncodeOptions) -> Vec<String> {
    let onoff = |b| if b { "on" } else { "off" };
    vec![
        format!("norine geodesic encoding n={}", dim.n()),
        format!(
            "families antipodal={} geodesic={} symmetry={}",
            onoff(opts.antipodal),
            onoff(opts.geodesic),
            onoff(opts.symmetry)
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn dim(n: u32) -> CubeDim {
        CubeDim::new(n).unwrap()
    }

    fn codes(c: &Clause) -> Vec<i32> {
        c.literals().iter().map(|l| l.to_dimacs()).collect()
    }

    #[test]
    fn stats_match_frozen_table() {
        // (n, vars, antipodal, geodesic, units, total)
        let table: &[(u32, u32, u64, u64, u64, u64)] = &[
            (2, 4, 4, 4, 2, 10),
            (3, 12, 12, 24, 3, 39),
            (4, 32, 32, 192, 3, 227),
            (5, 80, 80, 1920, 4, 2004),
            (6, 192, 192, 23040, 4, 23236),
            (7, 448, 448, 322560, 5, 323013),
            (8, 1024, 1024, 5160960, 5, 5161989),
        ];
        for &(n, vars, ant, geo, units, total) in table {
            let s = instance_stats(dim(n));
            assert_eq!(s.num_vars, vars, "n={n}");
            assert_eq!(s.antipodal_clauses, ant, "n={n}");
            assert_eq!(s.geodesic_clauses, geo, "n={n}");
            assert_eq!(s.symmetry_units, units, "n={n}");
            assert_eq!(s.total_clauses(), total, "n={n}");
        }
    }

    #[test]
    fn antipodal_family_n2() {
        let got: Vec<Vec<i32>> = antipodal_clauses(dim(2)).iter().map(codes).collect();
        assert_eq!(
            got,
            vec![vec![1, 2], vec![-1, -2], vec![3, 4], vec![-3, -4]]
        );
    }

    #[test]
    fn antipodal_family_pairs_each_edge_once() {
        for n in [3, 4, 5] {
            let d = dim(n);
            let clauses = antipodal_clauses(d);
            assert_eq!(clauses.len() as u64, instance_stats(d).antipodal_clauses);
            let mut seen = HashSet::new();
            for pair in clauses.chunks(2) {
                let pos = codes(&pair[0]);
                let neg = codes(&pair[1]);
                assert_eq!(neg, pos.iter().map(|v| -v).collect::<Vec<_>>());
                assert!(pos[0] < pos[1]);
                for &v in &pos {
                    assert!(seen.insert(v), "variable {v} paired twice");
                }
            }
            assert_eq!(seen.len(), d.num_edges() as usize);
        }
    }

    #[test]
    fn geodesic_family_n2() {
        let got: Vec<Vec<i32>> = geodesic_clauses(dim(2)).map(|c| codes(&c)).collect();
        // the family repeats clause [1]: both canonical endpoints share a
        // first edge after direction order reversal
        assert_eq!(got, vec![vec![1], vec![3], vec![1], vec![4]]);
    }

    #[test]
    fn geodesic_family_n3_prefix() {
        let got: Vec<Vec<i32>> = geodesic_clauses(dim(3))
            .take(6)
            .map(|c| codes(&c))
            .collect();
        assert_eq!(
            got,
            vec![
                vec![1, 6],
                vec![1, 10],
                vec![5, 2],
                vec![5, 11],
                vec![9, 3],
                vec![9, 7]
            ]
        );
    }

    #[test]
    fn geodesic_clause_shape() {
        let d = dim(4);
        let stats = instance_stats(d);
        let mut count = 0u64;
        for c in geodesic_clauses(d) {
            count += 1;
            assert_eq!(c.len() as u32, d.n() - 1);
            for l in &c {
                assert!(l.is_positive());
                assert!(l.var() >= 1 && l.var() <= stats.num_vars);
            }
        }
        assert_eq!(count, stats.geodesic_clauses);
        assert_eq!(geodesic_clauses(d).len() as u64, stats.geodesic_clauses);
    }

    #[test]
    fn geodesic_family_distinctness() {
        // As literal sets the family is NOT duplicate-free: whenever the
        // dropped final direction is the top coordinate, the mirrored prefix
        // for the partner endpoint emits the same set. Distinct counts
        // follow 2^(n-1)*n! - 2^(n-2)*(n-1)!. As ordered tuples the clauses
        // are distinct for n >= 3 (at n=2 the prefixes are single edges and
        // collide even as tuples).
        for (n, emitted, distinct_sets) in [(2, 4, 3), (3, 24, 20), (4, 192, 168), (5, 1920, 1728)]
        {
            let d = dim(n);
            let mut sets = HashSet::new();
            let mut tuples = HashSet::new();
            let mut count = 0u64;
            for c in geodesic_clauses(d) {
                let mut sorted = codes(&c);
                tuples.insert(codes(&c));
                sorted.sort_unstable();
                sets.insert(sorted);
                count += 1;
            }
            assert_eq!(count, emitted, "n={n}");
            assert_eq!(sets.len() as u64, distinct_sets, "n={n}");
            let expected_tuples = if n == 2 { 3 } else { emitted };
            assert_eq!(tuples.len() as u64, expected_tuples, "n={n}");
        }
    }

    #[test]
    fn symmetry_units_frozen() {
        let cases: &[(u32, &[i32])] = &[
            (2, &[1, -3]),
            (4, &[1, 9, -17]),
            (6, &[1, 33, 65, -97]),
            (7, &[1, 65, 129, 193, -257]),
            (8, &[1, 129, 257, 385, -513]),
        ];
        for &(n, expected) in cases {
            let got: Vec<i32> = symmetry_breaking_units(dim(n))
                .iter()
                .map(|c| codes(c)[0])
                .collect();
            assert_eq!(got, expected, "n={n}");
        }
    }

    #[test]
    fn build_matches_stats() {
        for n in 2..=5 {
            let d = dim(n);
            let stats = instance_stats(d);
            let inst = build_instance(d, EncodeOptions::full());
            assert_eq!(inst.num_vars(), stats.num_vars);
            assert_eq!(inst.num_clauses() as u64, stats.total_clauses());
            let opts = EncodeOptions {
                antipodal: false,
                geodesic: true,
                symmetry: false,
            };
            let ablated = build_instance(d, opts);
            assert_eq!(ablated.num_clauses() as u64, stats.geodesic_clauses);
            assert_eq!(stats.clauses_for(opts), stats.geodesic_clauses);
        }
    }

    #[test]
    fn stream_matches_materialized() {
        for n in [2, 3, 4] {
            let d = dim(n);
            for bits in 0..8u32 {
                let opts = EncodeOptions {
                    antipodal: bits & 1 != 0,
                    geodesic: bits & 2 != 0,
                    symmetry: bits & 4 != 0,
                };
                let mut streamed = Vec::new();
                stream_dimacs(d, opts, &mut streamed).unwrap();
                let mut built = Vec::new();
                crate::dimacs::write_dimacs(&build_instance(d, opts), &mut built).unwrap();
                assert_eq!(streamed, built, "n={n} opts={opts:?}");
            }
        }
    }

    #[test]
    fn encoding_is_deterministic() {
        let d = dim(4);
        let mut a = Vec::new();
        let mut b = Vec::new();
        stream_dimacs(d, EncodeOptions::full(), &mut a).unwrap();
        stream_dimacs(d, EncodeOptions::full(), &mut b).unwrap();
        assert_eq!(a, b);
    }
}
