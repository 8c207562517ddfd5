//! The hypercube Q_n: vertices, antipodes, edges, edge colorings, and
//! geodesics between antipodal vertex pairs.
//!
//! Vertices are bitstrings of length `n`, stored in the low bits of a `u32`
//! (bit `j` is coordinate `j`). An edge joins two vertices differing in one
//! bit and is stored canonically as its endpoint with that bit clear plus the
//! bit index. Edges are numbered 1..=n*2^(n-1) so they map directly onto
//! DIMACS variables: edge ids sort by direction first, then by the base
//! vertex with the direction bit squeezed out.
//!
//! A geodesic between antipodal vertices is a shortest path, i.e. it flips
//! each of the `n` coordinates exactly once; geodesics from a fixed endpoint
//! correspond to the n! orders in which the coordinates are flipped.

use crate::error::{Error, Result};

/// A validated hypercube dimension in `2..=16`.
///
/// The upper bound keeps every vertex label in a `u32` and every edge id in
/// a `u32` with room to spare; the lower bound is where antipodal pairs stop
/// being degenerate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CubeDim(u32);

impl CubeDim {
    pub const MIN: u32 = 2;
    pub const MAX: u32 = 16;

    pub fn new(n: u32) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&n) {
            Ok(CubeDim(n))
        } else {
            Err(Error::Dimension(n))
        }
    }

    pub fn n(self) -> u32 {
        self.0
    }

    pub fn num_vertices(self) -> u32 {
        1 << self.0
    }

    /// n * 2^(n-1), the number of edges of Q_n.
    pub fn num_edges(self) -> u32 {
        self.0 << (self.0 - 1)
    }

    /// Bitmask covering all `n` coordinates.
    pub fn mask(self) -> u32 {
        (1 << self.0) - 1
    }

    fn contains(self, v: Vertex) -> bool {
        v.0 & !self.mask() == 0
    }
}

/// A vertex of Q_n, identified by its coordinate bitstring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex(pub u32);

impl Vertex {
    pub fn label(self) -> u32 {
        self.0
    }

    /// The vertex with every coordinate flipped.
    pub fn antipode(self, dim: CubeDim) -> Vertex {
        debug_assert!(dim.contains(self));
        Vertex(self.0 ^ dim.mask())
    }

    /// True if the topmost coordinate is clear. Exactly one endpoint of each
    /// antipodal vertex pair is canonical, so the canonical vertices
    /// enumerate the pairs.
    pub fn is_canonical(self, dim: CubeDim) -> bool {
        self.0 & (1 << (dim.n() - 1)) == 0
    }
}

/// An edge of Q_n in canonical form: `base` has bit `dir` clear, and the
/// other endpoint is `base` with bit `dir` set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    base: Vertex,
    dir: u32,
}

impl Edge {
    pub fn new(base: Vertex, dir: u32, dim: CubeDim) -> Result<Edge> {
        if dir >= dim.n() || base.0 & (1 << dir) != 0 || !dim.contains(base) {
            return Err(Error::InvalidEdge {
                base: base.0,
                dir,
                n: dim.n(),
            });
        }
        Ok(Edge { base, dir })
    }

    /// The edge joining two adjacent vertices, in canonical form.
    pub fn between(a: Vertex, b: Vertex) -> Result<Edge> {
        let diff = a.0 ^ b.0;
        if diff == 0 || diff & (diff - 1) != 0 {
            return Err(Error::NotAdjacent { a: a.0, b: b.0 });
        }
        let dir = diff.trailing_zeros();
        Ok(Edge {
            base: Vertex(a.0 & !diff),
            dir,
        })
    }

    pub fn base(self) -> Vertex {
        self.base
    }

    pub fn dir(self) -> u32 {
        self.dir
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.base, Vertex(self.base.0 | (1 << self.dir)))
    }

    /// The image of this edge under the antipodal map: both endpoints are
    /// flipped, the direction is unchanged.
    pub fn antipodal(self, dim: CubeDim) -> Edge {
        // base has bit dir clear, so flipping all coordinates sets it;
        // clearing it again lands on the canonical form of the image.
        Edge {
            base: Vertex(self.base.0 ^ dim.mask() ^ (1 << self.dir)),
            dir: self.dir,
        }
    }

    /// The 1-based id of this edge: `dir * 2^(n-1) + squash(base, dir) + 1`,
    /// where `squash` deletes bit `dir` from the base label.
    pub fn id(self, dim: CubeDim) -> u32 {
        self.dir * (1 << (dim.n() - 1)) + squash(self.base.0, self.dir) + 1
    }

    pub fn from_id(id: u32, dim: CubeDim) -> Result<Edge> {
        let max = dim.num_edges();
        if id == 0 || id > max {
            return Err(Error::EdgeId { id, max });
        }
        let idx = id - 1;
        let per_dir = 1 << (dim.n() - 1);
        let dir = idx / per_dir;
        let base = unsquash(idx % per_dir, dir);
        Ok(Edge {
            base: Vertex(base),
            dir,
        })
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b) = self.endpoints();
        write!(f, "{}-{}", a.label(), b.label())
    }
}

/// Deletes bit `dir` from `label`, closing the gap.
fn squash(label: u32, dir: u32) -> u32 {
    let low = label & ((1 << dir) - 1);
    low | ((label >> (dir + 1)) << dir)
}

/// Inverse of [`squash`]: re-inserts a zero bit at position `dir`.
fn unsquash(s: u32, dir: u32) -> u32 {
    let low = s & ((1 << dir) - 1);
    low | ((s >> dir) << (dir + 1))
}

/// One of the two edge colors. An instance variable set to true means Red.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::Blue => 'B',
            Color::Red => 'R',
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A total red/blue coloring of the edges of Q_n, stored as one bit per edge
/// id (set = Red).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coloring {
    dim: CubeDim,
    bits: Vec<u64>,
}

impl Coloring {
    pub fn monochrome(dim: CubeDim, color: Color) -> Coloring {
        let m = dim.num_edges() as usize;
        let fill = match color {
            Color::Red => !0u64,
            Color::Blue => 0,
        };
        let mut bits = vec![fill; m.div_ceil(64)];
        // Keep bits past the last edge clear so == compares colorings, not
        // residue in the final word.
        if !m.is_multiple_of(64) {
            *bits.last_mut().unwrap() &= (1 << (m % 64)) - 1;
        }
        Coloring { dim, bits }
    }

    pub fn dim(&self) -> CubeDim {
        self.dim
    }

    pub fn color(&self, e: Edge) -> Color {
        self.color_by_id(e.id(self.dim))
    }

    pub fn set(&mut self, e: Edge, color: Color) {
        self.set_by_id(e.id(self.dim), color);
    }

    pub fn color_by_id(&self, id: u32) -> Color {
        assert!(
            id >= 1 && id <= self.dim.num_edges(),
            "edge id {id} out of range"
        );
        let bit = (id - 1) as usize;
        if self.bits[bit / 64] >> (bit % 64) & 1 == 1 {
            Color::Red
        } else {
            Color::Blue
        }
    }

    pub fn set_by_id(&mut self, id: u32, color: Color) {
        assert!(
            id >= 1 && id <= self.dim.num_edges(),
            "edge id {id} out of range"
        );
        let bit = (id - 1) as usize;
        match color {
            Color::Red => self.bits[bit / 64] |= 1 << (bit % 64),
            Color::Blue => self.bits[bit / 64] &= !(1 << (bit % 64)),
        }
    }

    /// True if every edge and its antipodal image have opposite colors.
    pub fn is_antipodal(&self) -> bool {
        let dim = self.dim;
        (1..=dim.num_edges()).all(|id| {
            let e = Edge::from_id(id, dim).unwrap();
            let partner = e.antipodal(dim).id(dim);
            partner <= id || self.color_by_id(id) != self.color_by_id(partner)
        })
    }
}

/// A geodesic from `start` to its antipode: the coordinates in `order` are
/// flipped one at a time, each exactly once.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Geodesic {
    start: Vertex,
    order: Vec<u8>,
}

impl Geodesic {
    pub fn start(&self) -> Vertex {
        self.start
    }

    /// The coordinate flip order; its length is the dimension.
    pub fn order(&self) -> &[u8] {
        &self.order
    }

    pub fn end(&self) -> Vertex {
        Vertex(self.start.0 ^ ((1 << self.order.len()) - 1))
    }

    /// The n+1 vertices along the path, starting at `start`.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let mut v = self.start.0;
        std::iter::once(self.start).chain(self.order.iter().map(move |&d| {
            v ^= 1 << d;
            Vertex(v)
        }))
    }

    /// The n edges along the path, in path order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let mut v = self.start.0;
        self.order.iter().map(move |&d| {
            let base = Vertex(v & !(1 << d));
            v ^= 1 << d;
            Edge {
                base,
                dir: d as u32,
            }
        })
    }
}

/// Iterator over all n! geodesics from `u` to its antipode, in lexicographic
/// order of the coordinate flip sequence.
pub fn geodesics_from(u: Vertex, dim: CubeDim) -> GeodesicsFrom {
    debug_assert!(dim.contains(u));
    GeodesicsFrom {
        start: u,
        order: (0..dim.n() as u8).collect(),
        remaining: factorial(dim.n()),
    }
}

pub struct GeodesicsFrom {
    start: Vertex,
    order: Vec<u8>,
    remaining: u64,
}

impl Iterator for GeodesicsFrom {
    type Item = Geodesic;

    fn next(&mut self) -> Option<Geodesic> {
        if self.remaining == 0 {
            return None;
        }
        let g = Geodesic {
            start: self.start,
            order: self.order.clone(),
        };
        self.remaining -= 1;
        if self.remaining > 0 {
            next_permutation(&mut self.order);
        }
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let len = self.remaining as usize;
        (len, Some(len))
    }
}

impl ExactSizeIterator for GeodesicsFrom {}

pub(crate) fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

/// Advances `a` to its lexicographic successor, or wraps around to sorted
/// order and returns false if `a` was the final permutation.
pub(crate) fn next_permutation(a: &mut [u8]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        a.reverse();
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// True if some geodesic from `u` to its antipode uses only `color` edges.
///
/// Subset dynamic program: a coordinate set S is completable to a
/// monochromatic suffix iff some unflipped coordinate extends it, so the
/// whole check is O(2^n * n) rather than O(n!).
pub fn has_mono_geodesic(c: &Coloring, u: Vertex, color: Color) -> bool {
    mono_suffix_table(c, u, color)[0]
}

/// The lexicographically first monochromatic geodesic from `u` in the order
/// used by [`geodesics_from`], if one exists.
pub fn first_mono_geodesic(c: &Coloring, u: Vertex, color: Color) -> Option<Geodesic> {
    let n = c.dim().n();
    let feasible = mono_suffix_table(c, u, color);
    if !feasible[0] {
        return None;
    }
    let mut order = Vec::with_capacity(n as usize);
    let mut flipped = 0u32;
    for _ in 0..n {
        let d = (0..n)
            .find(|&d| {
                flipped & (1 << d) == 0
                    && edge_color_from(c, u.0 ^ flipped, d) == color
                    && feasible[(flipped | 1 << d) as usize]
            })
            .expect("feasible table admits an extension");
        order.push(d as u8);
        flipped |= 1 << d;
    }
    Some(Geodesic { start: u, order })
}

/// `table[S]` is true iff the path position `u ^ S` can reach the antipode
/// of `u` by flipping the remaining coordinates, using only `color` edges.
fn mono_suffix_table(c: &Coloring, u: Vertex, color: Color) -> Vec<bool> {
    let dim = c.dim();
    debug_assert!(dim.contains(u));
    let n = dim.n();
    let full = dim.mask();
    let mut table = vec![false; 1 << n];
    table[full as usize] = true;
    for s in (0..full).rev() {
        table[s as usize] = (0..n).any(|d| {
            s & (1 << d) == 0
                && table[(s | 1 << d) as usize]
                && edge_color_from(c, u.0 ^ s, d) == color
        });
    }
    table
}

fn edge_color_from(c: &Coloring, vertex: u32, dir: u32) -> Color {
    c.color(Edge {
        base: Vertex(vertex & !(1 << dir)),
        dir,
    })
}

/// Searches for any antipodal vertex pair joined by a monochromatic path
/// (not necessarily a geodesic). Pairs are scanned in ascending order of the
/// canonical endpoint, checking Red before Blue; the first hit is returned.
pub fn has_mono_antipodal_path(c: &Coloring) -> Option<(Vertex, Color)> {
    let dim = c.dim();
    let mut red = DisjointSets::new(dim.num_vertices());
    let mut blue = DisjointSets::new(dim.num_vertices());
    for id in 1..=dim.num_edges() {
        let e = Edge::from_id(id, dim).unwrap();
        let (a, b) = e.endpoints();
        match c.color_by_id(id) {
            Color::Red => red.union(a.0, b.0),
            Color::Blue => blue.union(a.0, b.0),
        }
    }
    let mask = dim.mask();
    for u in 0..1 << (dim.n() - 1) {
        if red.find(u) == red.find(u ^ mask) {
            return Some((Vertex(u), Color::Red));
        }
        if blue.find(u) == blue.find(u ^ mask) {
            return Some((Vertex(u), Color::Blue));
        }
    }
    None
}

/// Searches for a 4-cycle whose edges alternate in color, returning its
/// vertices in cycle order. Squares are scanned lexicographically by
/// (corner, first direction, second direction).
pub fn find_alternating_square(c: &Coloring) -> Option<[Vertex; 4]> {
    let dim = c.dim();
    let n = dim.n();
    for w in 0..dim.num_vertices() {
        for a in 0..n {
            if w & (1 << a) != 0 {
                continue;
            }
            for b in a + 1..n {
                if w & (1 << b) != 0 {
                    continue;
                }
                let (x, y, z, t) = (w, w ^ (1 << a), w ^ (1 << a) ^ (1 << b), w ^ (1 << b));
                let c1 = edge_color_from(c, x, a);
                let c2 = edge_color_from(c, y, b);
                let c3 = edge_color_from(c, t, a);
                let c4 = edge_color_from(c, x, b);
                if c1 != c2 && c2 != c3 && c3 != c4 {
                    return Some([Vertex(x), Vertex(y), Vertex(z), Vertex(t)]);
                }
            }
        }
    }
    None
}

struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    fn new(size: u32) -> Self {
        DisjointSets {
            parent: (0..size).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            // path halving
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb as usize] = ra;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> CubeDim {
        CubeDim::new(n).unwrap()
    }

    /// Deterministic test RNG (splitmix64).
    struct Rng(u64);

    impl Rng {
        fn next(&mut self) -> u64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        }
    }

    fn random_coloring(rng: &mut Rng, d: CubeDim) -> Coloring {
        let mut c = Coloring::monochrome(d, Color::Blue);
        for id in 1..=d.num_edges() {
            if rng.next() & 1 == 1 {
                c.set_by_id(id, Color::Red);
            }
        }
        c
    }

    fn random_antipodal_coloring(rng: &mut Rng, d: CubeDim) -> Coloring {
        let mut c = Coloring::monochrome(d, Color::Blue);
        for id in 1..=d.num_edges() {
            let e = Edge::from_id(id, d).unwrap();
            let partner = e.antipodal(d).id(d);
            if partner > id {
                let color = if rng.next() & 1 == 1 {
                    Color::Red
                } else {
                    Color::Blue
                };
                c.set_by_id(id, color);
                c.set_by_id(partner, color.flip());
            }
        }
        c
    }

    #[test]
    fn dimension_bounds() {
        assert!(CubeDim::new(2).is_ok());
        assert!(CubeDim::new(16).is_ok());
        assert!(matches!(CubeDim::new(1), Err(Error::Dimension(1))));
        assert!(matches!(CubeDim::new(17), Err(Error::Dimension(17))));
    }

    #[test]
    fn counts() {
        assert_eq!(dim(2).num_vertices(), 4);
        assert_eq!(dim(2).num_edges(), 4);
        assert_eq!(dim(3).num_edges(), 12);
        assert_eq!(dim(8).num_edges(), 1024);
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(Vertex(0b000).antipode(dim(3)), Vertex(0b111));
        assert_eq!(Vertex(0b01).antipode(dim(2)), Vertex(0b10));
        assert_eq!(Vertex(0).antipode(dim(8)), Vertex(255));
    }

    #[test]
    fn antipode_is_an_involution() {
        for n in [2, 5, 8] {
            let d = dim(n);
            for v in 0..d.num_vertices() {
                let v = Vertex(v);
                assert_ne!(v.antipode(d), v);
                assert_eq!(v.antipode(d).antipode(d), v);
            }
        }
    }

    #[test]
    fn edge_validation() {
        let d = dim(3);
        assert!(Edge::new(Vertex(0b010), 0, d).is_ok());
        // direction bit set in the base
        assert!(Edge::new(Vertex(0b010), 1, d).is_err());
        assert!(Edge::new(Vertex(0), 3, d).is_err());
        assert!(Edge::new(Vertex(0b1000), 0, d).is_err());
    }

    #[test]
    fn edge_between() {
        let e = Edge::between(Vertex(0b110), Vertex(0b100)).unwrap();
        assert_eq!((e.base(), e.dir()), (Vertex(0b100), 1));
        assert!(Edge::between(Vertex(0b110), Vertex(0b101)).is_err());
        assert!(Edge::between(Vertex(0b110), Vertex(0b110)).is_err());
    }

    #[test]
    fn antipodal_edge_examples() {
        let d2 = dim(2);
        let e = Edge::new(Vertex(0b00), 0, d2).unwrap();
        assert_eq!(e.antipodal(d2), Edge::new(Vertex(0b10), 0, d2).unwrap());

        let d3 = dim(3);
        let e = Edge::new(Vertex(0b000), 2, d3).unwrap();
        assert_eq!(e.antipodal(d3), Edge::new(Vertex(0b011), 2, d3).unwrap());
    }

    #[test]
    fn antipodal_edge_is_a_fixed_point_free_involution() {
        for n in [2, 3, 4] {
            let d = dim(n);
            for id in 1..=d.num_edges() {
                let e = Edge::from_id(id, d).unwrap();
                let partner = e.antipodal(d);
                assert_ne!(partner, e);
                assert_eq!(partner.antipodal(d), e);
                // endpoints map to endpoints
                let (a, b) = e.endpoints();
                let (pa, pb) = partner.endpoints();
                assert_eq!((pa, pb), (b.antipode(d), a.antipode(d)));
            }
        }
    }

    #[test]
    fn edge_id_examples() {
        let d = dim(3);
        assert_eq!(Edge::new(Vertex(0b000), 0, d).unwrap().id(d), 1);
        assert_eq!(Edge::new(Vertex(0b110), 0, d).unwrap().id(d), 4);
    }

    #[test]
    fn edge_ids_are_a_bijection() {
        for n in [2, 3, 4, 8] {
            let d = dim(n);
            for id in 1..=d.num_edges() {
                let e = Edge::from_id(id, d).unwrap();
                assert_eq!(e.id(d), id);
                assert!(e.base().0 & (1 << e.dir()) == 0);
            }
        }
    }

    #[test]
    fn edge_id_range_checks() {
        let d = dim(3);
        assert!(matches!(Edge::from_id(0, d), Err(Error::EdgeId { .. })));
        assert!(matches!(
            Edge::from_id(13, d),
            Err(Error::EdgeId { id: 13, max: 12 })
        ));
    }

    #[test]
    fn antipodal_edge_squash_complement() {
        // The squashed base of the antipodal edge is the bitwise complement
        // of the squashed base, over the remaining n-1 coordinates.
        let d = dim(4);
        let m = (1u32 << 3) - 1;
        for id in 1..=d.num_edges() {
            let e = Edge::from_id(id, d).unwrap();
            let p = e.antipodal(d);
            assert_eq!(
                squash(p.base().0, p.dir()),
                !squash(e.base().0, e.dir()) & m
            );
        }
    }

    #[test]
    fn coloring_roundtrip() {
        let d = dim(3);
        let mut c = Coloring::monochrome(d, Color::Blue);
        assert_eq!(c.color_by_id(5), Color::Blue);
        c.set_by_id(5, Color::Red);
        assert_eq!(c.color_by_id(5), Color::Red);
        assert_eq!(c.color_by_id(4), Color::Blue);
        c.set_by_id(5, Color::Blue);
        assert_eq!(c, Coloring::monochrome(d, Color::Blue));
    }

    #[test]
    fn antipodality_check() {
        let d = dim(2);
        let mut c = Coloring::monochrome(d, Color::Blue);
        assert!(!c.is_antipodal());
        // pairs at n=2: (1,2) and (3,4)
        c.set_by_id(1, Color::Red);
        c.set_by_id(4, Color::Red);
        assert!(c.is_antipodal());
        let mut rng = Rng(7);
        for n in [3, 4] {
            let c = random_antipodal_coloring(&mut rng, dim(n));
            assert!(c.is_antipodal());
        }
    }

    #[test]
    fn geodesic_enumeration_order() {
        let d = dim(3);
        let all: Vec<_> = geodesics_from(Vertex(0), d).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(geodesics_from(Vertex(0), d).len(), 6);
        assert_eq!(all[0].order(), &[0, 1, 2]);
        assert_eq!(all[1].order(), &[0, 2, 1]);
        assert_eq!(all[5].order(), &[2, 1, 0]);
        let verts: Vec<_> = all[0].vertices().collect();
        assert_eq!(
            verts,
            vec![Vertex(0b000), Vertex(0b001), Vertex(0b011), Vertex(0b111)]
        );
        for g in &all {
            assert_eq!(g.start(), Vertex(0));
            assert_eq!(g.end(), Vertex(0b111));
            assert_eq!(g.edges().count(), 3);
        }
        assert_eq!(geodesics_from(Vertex(0), dim(7)).len(), 5040);
    }

    #[test]
    fn geodesic_edges_are_consistent_with_vertices() {
        let d = dim(4);
        for g in geodesics_from(Vertex(0b0101), d).take(30) {
            let verts: Vec<_> = g.vertices().collect();
            for (i, e) in g.edges().enumerate() {
                let (a, b) = e.endpoints();
                assert!((a, b) == (verts[i], verts[i + 1]) || (b, a) == (verts[i], verts[i + 1]));
            }
        }
    }

    /// Reference implementation: scan geodesics in enumeration order and
    /// return the first whose edges all have the target color.
    fn naive_first_mono(c: &Coloring, u: Vertex, color: Color) -> Option<Geodesic> {
        geodesics_from(u, c.dim()).find(|g| g.edges().all(|e| c.color(e) == color))
    }

    #[test]
    fn mono_geodesic_matches_naive_scan() {
        let mut rng = Rng(42);
        for n in [2, 3, 4] {
            let d = dim(n);
            for _ in 0..40 {
                let c = random_coloring(&mut rng, d);
                for u in 0..d.num_vertices() {
                    for color in [Color::Red, Color::Blue] {
                        let naive = naive_first_mono(&c, Vertex(u), color);
                        assert_eq!(has_mono_geodesic(&c, Vertex(u), color), naive.is_some());
                        assert_eq!(first_mono_geodesic(&c, Vertex(u), color), naive);
                    }
                }
            }
        }
    }

    #[test]
    fn mono_geodesic_monochrome_cases() {
        let c = Coloring::monochrome(dim(2), Color::Red);
        assert!(has_mono_geodesic(&c, Vertex(0), Color::Red));
        assert!(!has_mono_geodesic(&c, Vertex(0), Color::Blue));
        let g = first_mono_geodesic(&c, Vertex(0), Color::Red).unwrap();
        assert_eq!(g.order(), &[0, 1]);
    }

    #[test]
    fn mono_antipodal_path_example() {
        // n=2: 00-01 Red, 10-11 Blue, 00-10 Red, 01-11 Blue.
        let d = dim(2);
        let mut c = Coloring::monochrome(d, Color::Blue);
        c.set(
            Edge::between(Vertex(0b00), Vertex(0b01)).unwrap(),
            Color::Red,
        );
        c.set(
            Edge::between(Vertex(0b00), Vertex(0b10)).unwrap(),
            Color::Red,
        );
        assert_eq!(
            has_mono_antipodal_path(&c),
            Some((Vertex(0b01), Color::Red))
        );
    }

    #[test]
    fn mono_antipodal_path_none() {
        // Red: {00,01} and {10,11}; Blue: {00,10} and {01,11}. Neither color
        // class connects an antipodal pair.
        let d = dim(2);
        let mut c = Coloring::monochrome(d, Color::Blue);
        c.set_by_id(1, Color::Red);
        c.set_by_id(2, Color::Red);
        assert_eq!(has_mono_antipodal_path(&c), None);
    }

    #[test]
    fn mono_antipodal_path_prefers_lowest_pair_then_red() {
        let c = Coloring::monochrome(dim(3), Color::Red);
        assert_eq!(has_mono_antipodal_path(&c), Some((Vertex(0), Color::Red)));
        let c = Coloring::monochrome(dim(3), Color::Blue);
        assert_eq!(has_mono_antipodal_path(&c), Some((Vertex(0), Color::Blue)));
    }

    #[test]
    fn mono_geodesic_implies_mono_path() {
        let mut rng = Rng(3);
        let d = dim(4);
        for _ in 0..50 {
            let c = random_antipodal_coloring(&mut rng, d);
            let has_geo = (0..d.num_vertices() / 2).any(|u| {
                has_mono_geodesic(&c, Vertex(u), Color::Red)
                    || has_mono_geodesic(&c, Vertex(u), Color::Blue)
            });
            if has_geo {
                assert!(has_mono_antipodal_path(&c).is_some());
            }
        }
    }

    #[test]
    fn alternating_square_found() {
        // Cycle 00 -> 01 -> 11 -> 10 colored R, B, R, B.
        let d = dim(2);
        let mut c = Coloring::monochrome(d, Color::Blue);
        c.set_by_id(1, Color::Red); // 00-01
        c.set_by_id(2, Color::Red); // 10-11
        assert_eq!(
            find_alternating_square(&c),
            Some([Vertex(0b00), Vertex(0b01), Vertex(0b11), Vertex(0b10)])
        );
    }

    #[test]
    fn alternating_square_absent_in_monochrome() {
        assert_eq!(
            find_alternating_square(&Coloring::monochrome(dim(3), Color::Red)),
            None
        );
    }

    #[test]
    fn alternating_square_really_alternates() {
        let mut rng = Rng(11);
        let d = dim(4);
        for _ in 0..50 {
            let c = random_coloring(&mut rng, d);
            if let Some([x, y, z, t]) = find_alternating_square(&c) {
                let cycle = [
                    Edge::between(x, y).unwrap(),
                    Edge::between(y, z).unwrap(),
                    Edge::between(z, t).unwrap(),
                    Edge::between(t, x).unwrap(),
                ];
                assert_eq!(c.color(cycle[0]), c.color(cycle[2]));
                assert_eq!(c.color(cycle[1]), c.color(cycle[3]));
                assert_ne!(c.color(cycle[0]), c.color(cycle[1]));
            }
        }
    }

    #[test]
    fn next_permutation_cycles_in_lex_order() {
        let mut a = vec![0u8, 1, 2];
        let mut seen = vec![a.clone()];
        while next_permutation(&mut a) {
            seen.push(a.clone());
        }
        assert_eq!(a, vec![0, 1, 2]); // wrapped around
        assert_eq!(seen.len(), 6);
        let mut sorted = seen.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, seen);
    }
}
