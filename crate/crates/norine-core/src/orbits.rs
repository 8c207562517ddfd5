//! Orbit decomposition of the n=8 instance around a fixed alternating
//! square.
//!
//! Any counterexample coloring of Q_8 contains a 4-cycle whose edge colors
//! alternate; after normalizing, that square can be taken to be the one on
//! the vertices 0, 2, 3, 1 (differing in coordinates 1 and 2 only) with
//! edges 0-2 and 1-3 Red, 2-3 and 0-1 Blue. The 24 edges leaving the
//! square along coordinates 3..8 then admit 2^24 colorings, but many are
//! equivalent: permuting coordinates 3..8, translating the square, and
//! swapping the two colors all preserve the setup. This module builds that
//! symmetry group, partitions the 2^24 boundary colorings into orbits
//! (7218 of them), cross-checks the count with Burnside's lemma, and emits
//! one CNF subproblem per orbit: the n=8 antipodal and geodesic families
//! plus 28 unit clauses fixing the square and boundary colors.
//!
//! [`OrbitSpace`] is parametric in the number of free coordinates so the
//! same machinery can be sanity-checked on the scaled-down analogues
//! (a square in Q_3 has 4 boundary edges, in Q_4 eight, and so on).

use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};

use crate::cnf::{Clause, CnfInstance, Lit};
use crate::cube::{factorial, Color, CubeDim, Edge, Vertex};
use crate::encoder::{build_instance, stream_with_extra_units, EncodeOptions};
use crate::error::{Error, Result};

/// Labels of the square corners x, y, z, t in Q_8: 0, 2, 3, 1. Corner s
/// and corner index are related by `CORNER_LABELS[s_idx]`.
const CORNER_LABELS: [u32; 4] = [0, 2, 3, 1];

/// Inverse of [`CORNER_LABELS`]: corner index of each label 0..=3.
const LABEL_TO_CORNER: [usize; 4] = [0, 3, 1, 2];

/// The fixed alternating square: corners x=0, y=2, z=3, t=1, with edges
/// xy and zt Red, yz and tx Blue.
pub struct SquareFrame;

impl SquareFrame {
    pub fn dim() -> CubeDim {
        CubeDim::new(8).unwrap()
    }

    /// The corners x, y, z, t in order.
    pub fn corners() -> [Vertex; 4] {
        CORNER_LABELS.map(Vertex)
    }

    /// The four square edges with their fixed colors, in the order xy,
    /// zt, yz, tx.
    pub fn edges() -> [(Edge, Color); 4] {
        let e = |a: u32, b: u32| Edge::between(Vertex(a), Vertex(b)).unwrap();
        [
            (e(0, 2), Color::Red),
            (e(3, 1), Color::Red),
            (e(2, 3), Color::Blue),
            (e(1, 0), Color::Blue),
        ]
    }

    /// The four square colors as unit literals over global edge ids.
    pub fn unit_literals() -> [Lit; 4] {
        let dim = Self::dim();
        Self::edges().map(|(e, color)| {
            let id = e.id(dim);
            match color {
                Color::Red => Lit::positive(id),
                Color::Blue => Lit::negative(id),
            }
        })
    }

    /// Whether `g` maps the square's alternating color pattern to itself:
    /// its corner translation must permute the square edges so that each
    /// lands on an edge of its own frame color (a color-swapping element
    /// then complements the whole frame uniformly, which is the pattern
    /// again with Red and Blue exchanged).
    pub fn pattern_preserved_by(g: &SymmetryElement) -> bool {
        let frame = Self::edges();
        let t = g.corner_translation();
        frame.iter().all(|&(edge, color)| {
            let (a, b) = edge.endpoints();
            let image = Edge::between(Vertex(a.label() ^ t), Vertex(b.label() ^ t));
            match image {
                Ok(image) => frame.iter().any(|&(e, c)| e == image && c == color),
                Err(_) => false,
            }
        })
    }
}

/// A coloring of the square's boundary edges, packed one bit per edge
/// (set = Red). In an m-coordinate space, bit `m·s_idx + j` is the edge
/// leaving corner `s_idx` along the j-th free coordinate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BoundaryColoring(pub u32);

/// One symmetry of the square setup: a permutation of the free
/// coordinates, a translation of the square (one of the four corner
/// pairings), and an optional color swap. The swap is the global
/// complement composed with the extra corner pairing (x z)(y t).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SymmetryElement {
    /// Image of each free-coordinate index: coordinate j maps to
    /// `coord_perm[j]`.
    coord_perm: Vec<u8>,
    square_map: SquareMap,
    swap: bool,
}

/// Corner translations of the square, written as permutations of
/// {x, y, z, t}: T1 = (x t)(y z), T2 = (x y)(z t), T12 = (x z)(y t).
/// On corner labels these are XOR by 1, 2, 3 respectively.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SquareMap {
    Identity,
    T1,
    T2,
    T12,
}

impl SquareMap {
    pub fn translation(self) -> u32 {
        match self {
            SquareMap::Identity => 0,
            SquareMap::T1 => 1,
            SquareMap::T2 => 2,
            SquareMap::T12 => 3,
        }
    }

    fn from_translation(t: u32) -> SquareMap {
        match t {
            0 => SquareMap::Identity,
            1 => SquareMap::T1,
            2 => SquareMap::T2,
            3 => SquareMap::T12,
            _ => unreachable!("translation out of range"),
        }
    }
}

impl SymmetryElement {
    pub fn identity(coords: usize) -> SymmetryElement {
        SymmetryElement {
            coord_perm: (0..coords as u8).collect(),
            square_map: SquareMap::Identity,
            swap: false,
        }
    }

    pub fn coord_perm(&self) -> &[u8] {
        &self.coord_perm
    }

    pub fn square_map(&self) -> SquareMap {
        self.square_map
    }

    pub fn swaps_colors(&self) -> bool {
        self.swap
    }

    /// `self ∘ other`: the element acting as `other` first, then `self`.
    pub fn compose(&self, other: &SymmetryElement) -> SymmetryElement {
        debug_assert_eq!(self.coord_perm.len(), other.coord_perm.len());
        SymmetryElement {
            coord_perm: other
                .coord_perm
                .iter()
                .map(|&j| self.coord_perm[j as usize])
                .collect(),
            square_map: SquareMap::from_translation(
                self.square_map.translation() ^ other.square_map.translation(),
            ),
            swap: self.swap ^ other.swap,
        }
    }

    pub fn inverse(&self) -> SymmetryElement {
        let mut inv = vec![0u8; self.coord_perm.len()];
        for (j, &image) in self.coord_perm.iter().enumerate() {
            inv[image as usize] = j as u8;
        }
        // the translation and swap components are involutions
        SymmetryElement {
            coord_perm: inv,
            square_map: self.square_map,
            swap: self.swap,
        }
    }

    /// The net translation this element applies to corner labels: the
    /// square map's, plus (x z)(y t) = XOR 3 when colors are swapped.
    fn corner_translation(&self) -> u32 {
        self.square_map.translation() ^ if self.swap { 3 } else { 0 }
    }

    /// Source bit position feeding output bit `m·s_idx + j` under this
    /// element, for stride `m`.
    fn source_bit(&self, m: usize, s_idx: usize, j: usize) -> usize {
        let src_label = CORNER_LABELS[s_idx] ^ self.corner_translation();
        let src_corner = LABEL_TO_CORNER[src_label as usize];
        let inv = &self.inverse().coord_perm;
        m * src_corner + inv[j] as usize
    }
}

/// The boundary colorings of the square in Q_{m+2}, acted on by the
/// square's symmetry group of order m!·4·2.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OrbitSpace {
    m: u32,
}

/// One orbit of the group action: the smallest member, the orbit size,
/// and the 0-based position in representative order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OrbitSummary {
    pub index: u32,
    pub representative: BoundaryColoring,
    pub size: u32,
}

impl OrbitSpace {
    /// `m` is the number of free coordinates: 6 for the real Q_8 problem,
    /// fewer for the scaled-down consistency checks.
    pub fn new(m: u32) -> Result<OrbitSpace> {
        if !(1..=6).contains(&m) {
            return Err(Error::Group(format!(
                "free coordinate count {m} outside 1..=6"
            )));
        }
        Ok(OrbitSpace { m })
    }

    pub fn for_q8() -> OrbitSpace {
        OrbitSpace { m: 6 }
    }

    pub fn free_coords(self) -> u32 {
        self.m
    }

    pub fn num_bits(self) -> u32 {
        4 * self.m
    }

    pub fn num_colorings(self) -> u64 {
        1 << self.num_bits()
    }

    /// Order of the full symmetry group: m!·4·2.
    pub fn group_order_bound(self) -> u64 {
        factorial(self.m) * 8
    }

    /// The generating set: adjacent transpositions of the free
    /// coordinates, the translations T1 and T2, and the color swap.
    pub fn generators(self) -> Vec<SymmetryElement> {
        let m = self.m as usize;
        let mut gens = Vec::with_capacity(m + 2);
        for j in 0..m.saturating_sub(1) {
            let mut e = SymmetryElement::identity(m);
            e.coord_perm.swap(j, j + 1);
            gens.push(e);
        }
        for square_map in [SquareMap::T1, SquareMap::T2] {
            gens.push(SymmetryElement {
                square_map,
                ..SymmetryElement::identity(m)
            });
        }
        gens.push(SymmetryElement {
            square_map: SquareMap::T12,
            swap: true,
            ..SymmetryElement::identity(m)
        });
        gens
    }

    /// Closes the generator set under composition and returns the whole
    /// group, sorted. Exceeding the m!·4·2 bound signals a compose bug.
    pub fn group_elements(self) -> Result<Vec<SymmetryElement>> {
        let bound = self.group_order_bound() as usize;
        let gens = self.generators();
        let identity = SymmetryElement::identity(self.m as usize);
        let mut seen = BTreeSet::from([identity.clone()]);
        let mut queue = vec![identity];
        while let Some(g) = queue.pop() {
            for gen in &gens {
                let h = gen.compose(&g);
                if seen.insert(h.clone()) {
                    if seen.len() > bound {
                        return Err(Error::Group(format!(
                            "group closure exceeded the order bound {bound}"
                        )));
                    }
                    queue.push(h);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Applies `g` to `b`: output bit (s, j) reads the input bit at the
    /// translated corner and inverse-permuted coordinate, complemented
    /// when `g` swaps colors.
    pub fn apply(self, g: &SymmetryElement, b: BoundaryColoring) -> BoundaryColoring {
        debug_assert_eq!(g.coord_perm.len(), self.m as usize);
        let m = self.m as usize;
        let flip = if g.swap {
            (1u32 << self.num_bits()) - 1
        } else {
            0
        };
        let mut out = 0u32;
        for s_idx in 0..4 {
            for j in 0..m {
                let bit = b.0 >> g.source_bit(m, s_idx, j) & 1;
                out |= bit << (m * s_idx + j);
            }
        }
        BoundaryColoring(out ^ flip)
    }

    /// Partitions all 2^(4m) boundary colorings into orbits by flood fill
    /// from ascending seeds; each seed of an unvisited state is its
    /// orbit's minimum, so output is sorted by representative.
    pub fn enumerate_orbits(self) -> Vec<OrbitSummary> {
        let gens: Vec<CompiledElement> =
            self.generators().iter().map(|g| self.compile(g)).collect();
        let total = self.num_colorings() as usize;
        let mut visited = vec![0u64; total.div_ceil(64)];
        let mut orbits = Vec::new();
        let mut stack: Vec<u32> = Vec::new();
        for seed in 0..total as u32 {
            if visited[seed as usize / 64] >> (seed % 64) & 1 == 1 {
                continue;
            }
            visited[seed as usize / 64] |= 1 << (seed % 64);
            stack.push(seed);
            let mut size = 0u32;
            while let Some(state) = stack.pop() {
                size += 1;
                for gen in &gens {
                    let image = gen.apply(state);
                    let (word, bit) = (image as usize / 64, image % 64);
                    if visited[word] >> bit & 1 == 0 {
                        visited[word] |= 1 << bit;
                        stack.push(image);
                    }
                }
            }
            orbits.push(OrbitSummary {
                index: orbits.len() as u32,
                representative: BoundaryColoring(seed),
                size,
            });
        }
        orbits
    }

    /// Counts orbits without enumerating them, by Burnside's lemma: the
    /// average over the group of the number of colorings each element
    /// fixes. An element fixes 2^(#cycles) colorings (over its action as
    /// a bit permutation), or none at all if it swaps colors around an
    /// odd cycle.
    pub fn burnside_count(self) -> Result<u64> {
        let elements = self.group_elements()?;
        let order = elements.len() as u64;
        let m = self.m as usize;
        let mut total = 0u64;
        for g in &elements {
            let mut source = [0usize; 24];
            for s_idx in 0..4 {
                for j in 0..m {
                    source[m * s_idx + j] = g.source_bit(m, s_idx, j);
                }
            }
            total += fixed_points(&source[..4 * m], g.swap);
        }
        if !total.is_multiple_of(order) {
            return Err(Error::Group(format!(
                "Burnside sum {total} is not divisible by the group order {order}"
            )));
        }
        Ok(total / order)
    }

    fn compile(self, g: &SymmetryElement) -> CompiledElement {
        let m = self.m as usize;
        let mut tables = [[0u32; 256]; 3];
        for s_idx in 0..4 {
            for j in 0..m {
                let p = m * s_idx + j;
                let q = g.source_bit(m, s_idx, j);
                let (byte, offset) = (q / 8, q % 8);
                for (value, out) in tables[byte].iter_mut().enumerate() {
                    if value >> offset & 1 == 1 {
                        *out |= 1 << p;
                    }
                }
            }
        }
        let flip = if g.swap {
            (1u32 << self.num_bits()) - 1
        } else {
            0
        };
        CompiledElement { tables, flip }
    }
}

/// A symmetry element lowered to byte-lookup tables for the flood fill:
/// three input-byte tables OR together to the permuted output, then the
/// flip mask applies any color swap.
struct CompiledElement {
    tables: [[u32; 256]; 3],
    flip: u32,
}

impl CompiledElement {
    fn apply(&self, b: u32) -> u32 {
        (self.tables[0][(b & 0xff) as usize]
            | self.tables[1][(b >> 8 & 0xff) as usize]
            | self.tables[2][(b >> 16 & 0xff) as usize])
            ^ self.flip
    }
}

/// Fixed points of a signed bit permutation: 2^(#cycles of `source`),
/// or 0 when `complement` is set and some cycle has odd length.
fn fixed_points(source: &[usize], complement: bool) -> u64 {
    let mut seen = [false; 24];
    let mut cycles = 0u32;
    for start in 0..source.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut len = 0u32;
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            len += 1;
            p = source[p];
        }
        if complement && len % 2 == 1 {
            return 0;
        }
    }
    1 << cycles
}

/// The 24 boundary edges of the Q_8 square in bit-index order: corner
/// x, y, z, t major, free coordinate 3..8 minor.
pub fn boundary_edges() -> Vec<Edge> {
    let dim = SquareFrame::dim();
    let mut edges = Vec::with_capacity(24);
    for &label in &CORNER_LABELS {
        for j in 0..6 {
            edges.push(Edge::new(Vertex(label), j + 2, dim).unwrap());
        }
    }
    edges
}

/// The 28 unit literals of a subproblem: the four fixed square colors,
/// then one literal per boundary edge (set bit = Red = positive).
pub fn subproblem_units(rep: BoundaryColoring) -> Vec<Lit> {
    debug_assert!(rep.0 < 1 << 24);
    let dim = SquareFrame::dim();
    let mut units = SquareFrame::unit_literals().to_vec();
    for (bit, edge) in boundary_edges().iter().enumerate() {
        let id = edge.id(dim);
        units.push(if rep.0 >> bit & 1 == 1 {
            Lit::positive(id)
        } else {
            Lit::negative(id)
        });
    }
    units
}

fn orbit_comment(orbit: &OrbitSummary) -> String {
    format!(
        "orbit {} representative {:08x} size {}",
        orbit.index, orbit.representative.0, orbit.size
    )
}

/// The conventional file name for an orbit's subproblem.
pub fn subproblem_file_name(index: u32) -> String {
    format!("norine8_orbit{index}.cnf")
}

/// Materializes one orbit's subproblem: the n=8 antipodal and geodesic
/// families (no vertex symmetry units; fixing the square already breaks
/// the symmetry those units would) plus the 28 unit clauses. 1024
/// variables, 5162012 clauses.
pub fn emit_subproblem(orbit: &OrbitSummary) -> CnfInstance {
    let mut inst = build_instance(SquareFrame::dim(), EncodeOptions::without_symmetry());
    inst.push_comment(orbit_comment(orbit));
    for l in subproblem_units(orbit.representative) {
        inst.add(Clause::unit(l));
    }
    inst
}

/// Streams one orbit's subproblem as DIMACS without materializing it;
/// byte-identical to writing [`emit_subproblem`]'s result.
pub fn write_subproblem<W: Write>(orbit: &OrbitSummary, sink: W) -> io::Result<()> {
    stream_with_extra_units(
        SquareFrame::dim(),
        EncodeOptions::without_symmetry(),
        &[orbit_comment(orbit)],
        &subproblem_units(orbit.representative),
        sink,
    )
}

/// Writes an orbit table: a `norine-orbits count=<K>` header, then one
/// `<index> <representative as 8 hex digits> <size>` line per orbit.
pub fn write_orbit_table<W: Write>(orbits: &[OrbitSummary], mut sink: W) -> io::Result<()> {
    writeln!(sink, "norine-orbits count={}", orbits.len())?;
    for o in orbits {
        writeln!(sink, "{} {:08x} {}", o.index, o.representative.0, o.size)?;
    }
    Ok(())
}

/// Parses a table written by [`write_orbit_table`], validating indices,
/// representative range, and the header count.
pub fn read_orbit_table<R: BufRead>(reader: R) -> Result<Vec<OrbitSummary>> {
    let bad = |line: usize, msg: String| Err(Error::Parse { line, msg });
    let mut lines = reader.lines().enumerate();

    let Some((_, header)) = lines.next() else {
        return bad(
            1,
            "empty input, expected `norine-orbits count=<K>`".to_string(),
        );
    };
    let header = header?;
    let Some(count) = header.trim_end().strip_prefix("norine-orbits count=") else {
        return bad(
            1,
            format!("bad header {header:?}, expected `norine-orbits count=<K>`"),
        );
    };
    let count: usize = match count.parse() {
        Ok(c) => c,
        Err(_) => return bad(1, format!("bad orbit count {count:?} in header")),
    };

    let mut orbits = Vec::with_capacity(count);
    for (i, line) in lines {
        let ln = i + 1;
        let line = line?;
        let mut fields = line.split_ascii_whitespace();
        let (Some(index), Some(rep), Some(size), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return bad(
                ln,
                format!("expected `<index> <rep-hex> <size>`, got {line:?}"),
            );
        };
        let index: u32 = match index.parse() {
            Ok(i) => i,
            Err(_) => return bad(ln, format!("bad orbit index {index:?}")),
        };
        if index as usize != orbits.len() {
            return bad(
                ln,
                format!("orbit index {index}, expected {}", orbits.len()),
            );
        }
        if rep.len() != 8 {
            return bad(ln, format!("representative {rep:?} is not 8 hex digits"));
        }
        let rep = match u32::from_str_radix(rep, 16) {
            Ok(r) if r < 1 << 24 => r,
            Ok(r) => return bad(ln, format!("representative {r:#x} outside 24 bits")),
            Err(_) => return bad(ln, format!("representative {rep:?} is not 8 hex digits")),
        };
        let size: u32 = match size.parse() {
            Ok(s) if s > 0 => s,
            _ => return bad(ln, format!("bad orbit size {size:?}")),
        };
        orbits.push(OrbitSummary {
            index,
            representative: BoundaryColoring(rep),
            size,
        });
    }
    if orbits.len() != count {
        return bad(
            orbits.len() + 1,
            format!("header promised {count} orbits, found {}", orbits.len()),
        );
    }
    Ok(orbits)
}
