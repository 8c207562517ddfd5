//! Helpers shared by the integration suites: a small deterministic RNG,
//! random CNF and coloring generators, and a bit-parallel truth-table
//! evaluator that serves as an independent satisfiability oracle for up
//! to 20 variables.

#![allow(dead_code)]

use norine_core::{CnfInstance, Color, Coloring, CubeDim, Lit};

pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

/// Draws a CNF with 1..=max_vars variables and a clause density between
/// one and eight clauses per variable, clause widths 1..=5. Literals are
/// deduplicated per clause, so tautologies cannot occur.
pub fn random_instance(rng: &mut SplitMix64, max_vars: u32) -> CnfInstance {
    let vars = 1 + rng.below(max_vars as u64) as u32;
    let density = 1 + rng.below(8) as usize;
    let clauses = (vars as usize * density).min(200);
    let mut inst = CnfInstance::new(vars);
    let mut used = vec![false; vars as usize + 1];
    let mut lits = Vec::new();
    for _ in 0..clauses {
        lits.clear();
        used.iter_mut().for_each(|u| *u = false);
        let width = 1 + rng.below(5) as usize;
        for _ in 0..width {
            let v = 1 + rng.below(vars as u64) as u32;
            if used[v as usize] {
                continue;
            }
            used[v as usize] = true;
            lits.push(if rng.next() & 1 == 0 {
                Lit::positive(v)
            } else {
                Lit::negative(v)
            });
        }
        inst.push_lits(&lits);
    }
    inst
}

const PATTERNS: [u64; 6] = [
    0xaaaa_aaaa_aaaa_aaaa,
    0xcccc_cccc_cccc_cccc,
    0xf0f0_f0f0_f0f0_f0f0,
    0xff00_ff00_ff00_ff00,
    0xffff_0000_ffff_0000,
    0xffff_ffff_0000_0000,
];

fn var_mask(var: u32, block: u64) -> u64 {
    let bit = var - 1;
    if bit < 6 {
        PATTERNS[bit as usize]
    } else if (block >> (bit - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

/// Checks satisfiability by sweeping all assignments, 64 at a time: bit k
/// of a block word answers for the assignment whose low six variables are
/// the bits of k and whose remaining variables are the bits of the block
/// index.
pub fn truth_table_satisfiable(inst: &CnfInstance) -> bool {
    let vars = inst.num_vars();
    assert!(vars <= 20, "truth table limited to 20 variables");
    let valid = if vars >= 6 {
        !0u64
    } else {
        (1u64 << (1u32 << vars)) - 1
    };
    let blocks = 1u64 << vars.saturating_sub(6);
    for block in 0..blocks {
        let mut sat = valid;
        for clause in inst.clauses() {
            let mut covered = 0u64;
            for &lit in clause {
                let m = var_mask(lit.var(), block);
                covered |= if lit.is_positive() { m } else { !m };
            }
            sat &= covered;
            if sat == 0 {
                break;
            }
        }
        if sat != 0 {
            return true;
        }
    }
    false
}

pub fn random_coloring(dim: CubeDim, rng: &mut SplitMix64) -> Coloring {
    let mut c = Coloring::monochrome(dim, Color::Blue);
    let mut word = 0;
    for id in 1..=dim.num_edges() {
        let bit = (id - 1) % 64;
        if bit == 0 {
            word = rng.next();
        }
        if (word >> bit) & 1 == 1 {
            c.set_by_id(id, Color::Red);
        }
    }
    c
}

/// The instance together with the negation of one clause, for checking
/// that the clause is entailed.
pub fn with_negated_clause(inst: &CnfInstance, clause: &[Lit]) -> CnfInstance {
    let mut out = inst.clone();
    for &lit in clause {
        out.push_lits(&[!lit]);
    }
    out
}
