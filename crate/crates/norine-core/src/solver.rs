//! A self-contained CDCL SAT solver.
//!
//! Standard architecture: two-watched-literal propagation with blockers,
//! first-UIP conflict analysis with recursive clause minimization, VSIDS
//! variable activities with an indexed max-heap, phase saving, Luby
//! restarts, and LBD-aware reduction of the learned-clause database with
//! arena compaction. Nothing here is specific to the hypercube encoding;
//! the solver accepts any [`CnfInstance`].
//!
//! Determinism: for a fixed instance, seed, and conflict budget the run is
//! bit-reproducible (the seed only jitters initial variable activities to
//! break ties). Wall-clock budgets are inherently racy and are checked at
//! coarse intervals.
//!
//! A model is verified against every original clause before `Sat` is
//! returned; a verification failure is a solver bug and panics.

use std::time::{Duration, Instant};

use crate::cnf::{CnfInstance, Lit};
use crate::error::{Error, Result};

/// Resource limits for a solver run. `None` means unlimited.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Budget {
    pub max_conflicts: Option<u64>,
    pub max_seconds: Option<f64>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }

    pub fn conflicts(n: u64) -> Budget {
        Budget {
            max_conflicts: Some(n),
            ..Budget::default()
        }
    }

    pub fn seconds(s: f64) -> Budget {
        Budget {
            max_seconds: Some(s),
            ..Budget::default()
        }
    }
}

/// A total assignment for variables `1..=num_vars`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(values: Vec<bool>) -> Model {
        Model { values }
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn value(&self, var: u32) -> bool {
        assert!(
            var >= 1 && var <= self.num_vars(),
            "variable {var} out of range"
        );
        self.values[(var - 1) as usize]
    }

    pub fn lit_true(&self, l: Lit) -> bool {
        self.value(l.var()) == l.is_positive()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

/// Outcome of a solver run.
#[derive(Clone, PartialEq, Debug)]
pub enum SolveResult {
    /// Satisfiable, with a model verified against the instance.
    Sat(Model),
    Unsat,
    /// The budget ran out; carries the budget that was exceeded.
    Timeout(Budget),
}

/// Run counters, all monotone over a single solve call.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learned: u64,
    pub removed: u64,
    pub minimized_literals: u64,
}

/// Decides `inst` within `budget`. Convenience wrapper over [`Solver`].
pub fn solve(inst: &CnfInstance, seed: u64, budget: Budget) -> SolveResult {
    solve_with_stats(inst, seed, budget).0
}

pub fn solve_with_stats(
    inst: &CnfInstance,
    seed: u64,
    budget: Budget,
) -> (SolveResult, SolverStats) {
    let mut solver = Solver::new(inst.num_vars(), seed);
    for clause in inst.clauses() {
        solver.add_clause(clause);
    }
    let result = solver.solve(budget);
    if let SolveResult::Sat(ref model) = result {
        assert!(
            verify_model(inst, model).expect("model sized for instance"),
            "solver produced a model that fails verification"
        );
    }
    (result, solver.stats())
}

/// Checks `model` against every clause of `inst`. `Ok(false)` means some
/// clause is falsified; an error means the model has the wrong size.
pub fn verify_model(inst: &CnfInstance, model: &Model) -> Result<bool> {
    if model.num_vars() != inst.num_vars() {
        return Err(Error::ModelSize {
            got: model.num_vars(),
            want: inst.num_vars(),
        });
    }
    Ok(inst.clauses().all(|c| c.iter().any(|&l| model.lit_true(l))))
}

const VALUE_FALSE: u8 = 0;
const VALUE_TRUE: u8 = 1;
const VALUE_UNDEF: u8 = 2;

const NO_REASON: u32 = u32::MAX;
const LEARNT_BIT: u32 = 1 << 31;

const RESTART_BASE: u64 = 100;
const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: u32,
}

struct OrigHead {
    start: u32,
    len: u32,
}

struct LearntHead {
    start: u32,
    len: u32,
    lbd: u32,
    act: f32,
}

/// Incremental solver core. Add clauses (at decision level 0), then call
/// [`Solver::solve`].
pub struct Solver {
    num_vars: usize,
    ok: bool,

    orig_lits: Vec<u32>,
    orig_heads: Vec<OrigHead>,
    learnt_lits: Vec<u32>,
    learnt_heads: Vec<LearntHead>,

    watches: Vec<Vec<Watcher>>,
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<u32>,
    trail_lim: Vec<u32>,
    qhead: usize,

    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    order: VarOrder,
    polarity: Vec<bool>,

    seen: Vec<bool>,
    to_clear: Vec<u32>,
    redundant_stack: Vec<u32>,
    lbd_stamp: Vec<u64>,
    lbd_counter: u64,

    reduce_threshold: usize,
    stats: SolverStats,

    record_learned: bool,
    learned_log: Vec<Vec<Lit>>,
}

impl Solver {
    pub fn new(num_vars: u32, seed: u64) -> Solver {
        assert!(num_vars < (1 << 30), "variable count {num_vars} too large");
        let n = num_vars as usize;
        // tiny seed-dependent jitter so equal-activity ties break
        // differently per seed while staying fully deterministic
        let mut activity = vec![0.0f64; n];
        for (v, a) in activity.iter_mut().enumerate() {
            *a = splitmix64(seed ^ v as u64) as f64 / u64::MAX as f64 * 1e-9;
        }
        let order = VarOrder::new(n, &activity);
        Solver {
            num_vars: n,
            ok: true,
            orig_lits: Vec::new(),
            orig_heads: Vec::new(),
            learnt_lits: Vec::new(),
            learnt_heads: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![VALUE_UNDEF; n],
            level: vec![0; n],
            reason: vec![NO_REASON; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity,
            var_inc: 1.0,
            cla_inc: 1.0,
            order,
            polarity: vec![false; n],
            seen: vec![false; n],
            to_clear: Vec::new(),
            redundant_stack: Vec::new(),
            lbd_stamp: vec![0; n],
            lbd_counter: 0,
            reduce_threshold: 4000,
            stats: SolverStats::default(),
            record_learned: false,
            learned_log: Vec::new(),
        }
    }

    /// When enabled, every learned clause is logged in external literal
    /// form; used by tests to check that learned clauses are implied.
    pub fn set_record_learned(&mut self, on: bool) {
        self.record_learned = on;
    }

    pub fn learned_clauses(&self) -> &[Vec<Lit>] {
        &self.learned_log
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// Adds a clause at decision level 0, simplifying against the current
    /// root assignment: satisfied clauses are dropped, false literals are
    /// removed, duplicates collapse, and tautologies are ignored.
    pub fn add_clause(&mut self, clause: &[Lit]) {
        if !self.ok {
            return;
        }
        debug_assert_eq!(self.decision_level(), 0);
        let mut lits: Vec<u32> = clause.iter().map(|&l| self.internal(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        let mut write = 0;
        for i in 0..lits.len() {
            if i + 1 < lits.len() && lits[i] >> 1 == lits[i + 1] >> 1 {
                return; // v and !v: tautology
            }
            match self.lit_value(lits[i]) {
                VALUE_TRUE => return, // satisfied at root
                VALUE_FALSE => {}     // drop the literal
                _ => {
                    lits[write] = lits[i];
                    write += 1;
                }
            }
        }
        lits.truncate(write);
        match lits.len() {
            0 => self.ok = false,
            1 => {
                self.assign(lits[0], NO_REASON);
            }
            _ => {
                let start = self.orig_lits.len() as u32;
                self.orig_lits.extend_from_slice(&lits);
                let cref = self.orig_heads.len() as u32;
                self.orig_heads.push(OrigHead {
                    start,
                    len: lits.len() as u32,
                });
                self.attach(cref, lits[0], lits[1]);
            }
        }
    }

    pub fn solve(&mut self, budget: Budget) -> SolveResult {
        if !self.ok {
            return SolveResult::Unsat;
        }
        let start = Instant::now();
        let deadline = budget
            .max_seconds
            .map(|s| start + Duration::from_secs_f64(s));
        if self.propagate().is_some() {
            self.ok = false;
            return SolveResult::Unsat;
        }
        let mut conflicts_at_restart = 0u64;
        let mut restart_limit = RESTART_BASE * luby(0);
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SolveResult::Unsat;
                }
                let (learnt, backtrack_level, lbd) = self.analyze(confl);
                self.backtrack(backtrack_level);
                self.record(learnt, lbd);
                self.decay_activities();

                if let Some(max) = budget.max_conflicts {
                    if self.stats.conflicts >= max {
                        return SolveResult::Timeout(budget);
                    }
                }
                if self.stats.conflicts.is_multiple_of(256) && past(deadline) {
                    return SolveResult::Timeout(budget);
                }
                if self.learnt_heads.len() >= self.reduce_threshold {
                    self.reduce_db();
                    self.reduce_threshold += 1000;
                }
                if self.stats.conflicts - conflicts_at_restart >= restart_limit {
                    conflicts_at_restart = self.stats.conflicts;
                    self.stats.restarts += 1;
                    restart_limit = RESTART_BASE * luby(self.stats.restarts);
                    if self.decision_level() > 0 {
                        self.backtrack(0);
                    }
                }
            } else {
                if self.trail.len() == self.num_vars {
                    let model = Model::new(self.assigns.iter().map(|&a| a == VALUE_TRUE).collect());
                    debug_assert!(self.originals_satisfied());
                    return SolveResult::Sat(model);
                }
                if self.stats.decisions.is_multiple_of(4096) && past(deadline) {
                    return SolveResult::Timeout(budget);
                }
                self.decide();
            }
        }
    }

    fn internal(&self, l: Lit) -> u32 {
        let var = l.var();
        assert!(
            var as usize <= self.num_vars,
            "literal {l} outside solver variables"
        );
        ((var - 1) << 1) | (!l.is_positive() as u32)
    }

    fn external(sl: u32) -> Lit {
        let var = (sl >> 1) + 1;
        if sl & 1 == 0 {
            Lit::positive(var)
        } else {
            Lit::negative(var)
        }
    }

    fn lit_value(&self, sl: u32) -> u8 {
        let a = self.assigns[(sl >> 1) as usize];
        if a == VALUE_UNDEF {
            VALUE_UNDEF
        } else {
            a ^ (sl & 1) as u8
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn clause_bounds(&self, cref: u32) -> (usize, usize) {
        let idx = (cref & !LEARNT_BIT) as usize;
        if cref & LEARNT_BIT != 0 {
            let h = &self.learnt_heads[idx];
            (h.start as usize, h.len as usize)
        } else {
            let h = &self.orig_heads[idx];
            (h.start as usize, h.len as usize)
        }
    }

    fn clause_lit(&self, cref: u32, k: usize) -> u32 {
        let (start, len) = self.clause_bounds(cref);
        debug_assert!(k < len);
        if cref & LEARNT_BIT != 0 {
            self.learnt_lits[start + k]
        } else {
            self.orig_lits[start + k]
        }
    }

    fn clause_len(&self, cref: u32) -> usize {
        self.clause_bounds(cref).1
    }

    fn attach(&mut self, cref: u32, first: u32, second: u32) {
        self.watches[(first ^ 1) as usize].push(Watcher {
            cref,
            blocker: second,
        });
        self.watches[(second ^ 1) as usize].push(Watcher {
            cref,
            blocker: first,
        });
    }

    fn assign(&mut self, sl: u32, reason: u32) {
        let v = (sl >> 1) as usize;
        debug_assert_eq!(self.assigns[v], VALUE_UNDEF);
        self.assigns[v] = VALUE_TRUE ^ (sl & 1) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(sl);
    }

    /// Propagates until fixpoint; returns the conflicting clause if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        'queue: while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let mut ws = std::mem::take(&mut self.watches[p as usize]);
            let mut kept = 0;
            let mut i = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.lit_value(w.blocker) == VALUE_TRUE {
                    ws[kept] = w;
                    kept += 1;
                    continue;
                }
                // normalize: watched false literal at slot 1
                let (start, len) = self.clause_bounds(w.cref);
                let lits: &mut [u32] = if w.cref & LEARNT_BIT != 0 {
                    &mut self.learnt_lits[start..start + len]
                } else {
                    &mut self.orig_lits[start..start + len]
                };
                let false_lit = p ^ 1;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                debug_assert_eq!(lits[1], false_lit);
                let first = lits[0];
                let w = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                let a = self.assigns[(first >> 1) as usize];
                if a != VALUE_UNDEF && a ^ (first & 1) as u8 == VALUE_TRUE {
                    ws[kept] = w;
                    kept += 1;
                    continue;
                }
                // hunt for a non-false replacement watch
                let mut replaced = false;
                for k in 2..len {
                    let q = lits[k];
                    let aq = self.assigns[(q >> 1) as usize];
                    if aq == VALUE_UNDEF || aq ^ (q & 1) as u8 == VALUE_TRUE {
                        lits.swap(1, k);
                        let new_watch = lits[1] ^ 1;
                        self.watches[new_watch as usize].push(w);
                        replaced = true;
                        break;
                    }
                }
                if replaced {
                    continue;
                }
                // clause is unit or conflicting under the current trail
                ws[kept] = w;
                kept += 1;
                if a != VALUE_UNDEF {
                    // first is false too: conflict
                    while i < ws.len() {
                        ws[kept] = ws[i];
                        kept += 1;
                        i += 1;
                    }
                    ws.truncate(kept);
                    self.watches[p as usize] = ws;
                    self.qhead = self.trail.len();
                    conflict = Some(w.cref);
                    break 'queue;
                }
                self.assign(first, w.cref);
            }
            ws.truncate(kept);
            self.watches[p as usize] = ws;
        }
        conflict
    }

    /// First-UIP learning. Returns the learned clause (asserting literal in
    /// slot 0, a deepest-level literal in slot 1), the backtrack level, and
    /// the clause LBD.
    fn analyze(&mut self, confl: u32) -> (Vec<u32>, u32, u32) {
        let mut learnt: Vec<u32> = vec![0];
        let mut confl = confl;
        let mut path = 0u32;
        let mut index = self.trail.len();
        let mut first_round = true;

        loop {
            if confl & LEARNT_BIT != 0 {
                self.bump_clause(confl);
            }
            let len = self.clause_len(confl);
            for k in if first_round { 0 } else { 1 }..len {
                let q = self.clause_lit(confl, k);
                let v = (q >> 1) as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.to_clear.push(v as u32);
                    self.bump_var(v);
                    if self.level[v] == self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            first_round = false;
            // walk the trail back to the next marked literal
            loop {
                index -= 1;
                if self.seen[(self.trail[index] >> 1) as usize] {
                    break;
                }
            }
            let p = self.trail[index];
            let v = (p >> 1) as usize;
            self.seen[v] = false;
            path -= 1;
            if path == 0 {
                learnt[0] = p ^ 1;
                break;
            }
            confl = self.reason[v];
            debug_assert_ne!(confl, NO_REASON, "non-decision implied var lacks a reason");
        }

        // recursive minimization: drop literals implied by the rest
        let mut abstract_levels = 0u32;
        for &q in &learnt[1..] {
            abstract_levels |= 1 << (self.level[(q >> 1) as usize] & 31);
        }
        let mut j = 1;
        for i in 1..learnt.len() {
            let q = learnt[i];
            let v = (q >> 1) as usize;
            if self.reason[v] == NO_REASON || !self.lit_redundant(q, abstract_levels) {
                learnt[j] = q;
                j += 1;
            }
        }
        self.stats.minimized_literals += (learnt.len() - j) as u64;
        learnt.truncate(j);

        let backtrack_level = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[(learnt[i] >> 1) as usize] > self.level[(learnt[max_i] >> 1) as usize]
                {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[(learnt[1] >> 1) as usize]
        };

        self.lbd_counter += 1;
        let mut lbd = 0;
        for &q in &learnt {
            let lvl = self.level[(q >> 1) as usize] as usize;
            if self.lbd_stamp[lvl] != self.lbd_counter {
                self.lbd_stamp[lvl] = self.lbd_counter;
                lbd += 1;
            }
        }

        for &v in &self.to_clear {
            self.seen[v as usize] = false;
        }
        self.to_clear.clear();

        (learnt, backtrack_level, lbd)
    }

    /// True if `q` is implied by the remaining learned literals together
    /// with root facts, following reasons transitively (so the literal can
    /// be dropped from the learned clause).
    fn lit_redundant(&mut self, q: u32, abstract_levels: u32) -> bool {
        self.redundant_stack.clear();
        self.redundant_stack.push(q);
        let top = self.to_clear.len();
        while let Some(p) = self.redundant_stack.pop() {
            let r = self.reason[(p >> 1) as usize];
            debug_assert_ne!(r, NO_REASON);
            let len = self.clause_len(r);
            for k in 1..len {
                let l = self.clause_lit(r, k);
                let v = (l >> 1) as usize;
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                if self.reason[v] == NO_REASON || 1 << (self.level[v] & 31) & abstract_levels == 0 {
                    // cannot be resolved away: undo marks made by this call
                    for &u in &self.to_clear[top..] {
                        self.seen[u as usize] = false;
                    }
                    self.to_clear.truncate(top);
                    return false;
                }
                self.seen[v] = true;
                self.to_clear.push(v as u32);
                self.redundant_stack.push(l);
            }
        }
        true
    }

    fn record(&mut self, learnt: Vec<u32>, lbd: u32) {
        self.stats.learned += 1;
        if self.record_learned {
            self.learned_log
                .push(learnt.iter().map(|&sl| Self::external(sl)).collect());
        }
        if learnt.len() == 1 {
            debug_assert_eq!(self.decision_level(), 0);
            self.assign(learnt[0], NO_REASON);
            return;
        }
        let start = self.learnt_lits.len() as u32;
        self.learnt_lits.extend_from_slice(&learnt);
        let idx = self.learnt_heads.len() as u32;
        self.learnt_heads.push(LearntHead {
            start,
            len: learnt.len() as u32,
            lbd,
            act: self.cla_inc as f32,
        });
        let cref = idx | LEARNT_BIT;
        self.attach(cref, learnt[0], learnt[1]);
        self.assign(learnt[0], cref);
    }

    fn backtrack(&mut self, target: u32) {
        if self.decision_level() <= target {
            return;
        }
        let keep = self.trail_lim[target as usize] as usize;
        for &sl in self.trail[keep..].iter().rev() {
            let v = (sl >> 1) as usize;
            self.polarity[v] = self.assigns[v] == VALUE_TRUE;
            self.assigns[v] = VALUE_UNDEF;
            self.reason[v] = NO_REASON;
            self.order.insert(v as u32, &self.activity);
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(target as usize);
        self.qhead = keep;
    }

    fn decide(&mut self) {
        while let Some(v) = self.order.pop(&self.activity) {
            if self.assigns[v as usize] == VALUE_UNDEF {
                self.stats.decisions += 1;
                self.trail_lim.push(self.trail.len() as u32);
                let sl = (v << 1) | (!self.polarity[v as usize]) as u32;
                self.assign(sl, NO_REASON);
                return;
            }
        }
        unreachable!("decide called with a full trail");
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.rescore(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let idx = (cref & !LEARNT_BIT) as usize;
        let h = &mut self.learnt_heads[idx];
        h.act += self.cla_inc as f32;
        if h.act > 1e20 {
            for head in &mut self.learnt_heads {
                head.act *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn decay_activities(&mut self) {
        self.var_inc /= VAR_DECAY;
        self.cla_inc /= CLAUSE_DECAY;
    }

    /// Halves the learned-clause database, keeping low-LBD, high-activity,
    /// and locked clauses, then compacts the arena and remaps references.
    fn reduce_db(&mut self) {
        let count = self.learnt_heads.len();
        let mut ranked: Vec<u32> = (0..count as u32).collect();
        ranked.sort_by(|&a, &b| {
            let (ha, hb) = (
                &self.learnt_heads[a as usize],
                &self.learnt_heads[b as usize],
            );
            ha.lbd
                .cmp(&hb.lbd)
                .then(
                    hb.act
                        .partial_cmp(&ha.act)
                        .unwrap_or(std::cmp::Ordering::Equal),
                )
                .then(a.cmp(&b))
        });
        let mut keep = vec![false; count];
        for (rank, &idx) in ranked.iter().enumerate() {
            let h = &self.learnt_heads[idx as usize];
            let first = self.learnt_lits[h.start as usize];
            let locked = self.lit_value(first) == VALUE_TRUE
                && self.reason[(first >> 1) as usize] == (idx | LEARNT_BIT);
            keep[idx as usize] = locked || h.lbd <= 2 || rank < count / 2;
        }

        let mut remap = vec![NO_REASON; count];
        let mut new_lits = Vec::with_capacity(self.learnt_lits.len() / 2);
        let mut new_heads = Vec::with_capacity(count / 2);
        for (idx, head) in self.learnt_heads.iter().enumerate() {
            if !keep[idx] {
                self.stats.removed += 1;
                continue;
            }
            let start = new_lits.len() as u32;
            let range = head.start as usize..(head.start + head.len) as usize;
            new_lits.extend_from_slice(&self.learnt_lits[range]);
            remap[idx] = new_heads.len() as u32;
            new_heads.push(LearntHead { start, ..*head });
        }
        self.learnt_lits = new_lits;
        self.learnt_heads = new_heads;

        for list in &mut self.watches {
            list.retain_mut(|w| {
                if w.cref & LEARNT_BIT == 0 {
                    return true;
                }
                let new = remap[(w.cref & !LEARNT_BIT) as usize];
                if new == NO_REASON {
                    return false;
                }
                w.cref = new | LEARNT_BIT;
                true
            });
        }
        for r in &mut self.reason {
            if *r != NO_REASON && *r & LEARNT_BIT != 0 {
                let new = remap[(*r & !LEARNT_BIT) as usize];
                debug_assert_ne!(new, NO_REASON, "locked clause was dropped");
                *r = new | LEARNT_BIT;
            }
        }
    }

    fn originals_satisfied(&self) -> bool {
        self.orig_heads.iter().all(|h| {
            let range = h.start as usize..(h.start + h.len) as usize;
            self.orig_lits[range.clone()]
                .iter()
                .any(|&sl| self.lit_value(sl) == VALUE_TRUE)
        })
    }
}

fn past(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

/// Luby restart sequence, zero-indexed: 1, 1, 2, 1, 1, 2, 4, ...
fn luby(i: u64) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = i;
    while size - 1 != x {
        size = (size - 1) / 2;
        seq -= 1;
        x %= size;
    }
    1 << seq
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Max-heap over variables keyed by activity, with position tracking so
/// membership tests and rescoring are O(1) and O(log n).
struct VarOrder {
    heap: Vec<u32>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl VarOrder {
    fn new(n: usize, activity: &[f64]) -> VarOrder {
        let mut order = VarOrder {
            heap: Vec::with_capacity(n),
            pos: vec![ABSENT; n],
        };
        for v in 0..n as u32 {
            order.insert(v, activity);
        }
        order
    }

    fn insert(&mut self, v: u32, activity: &[f64]) {
        if self.pos[v as usize] != ABSENT {
            return;
        }
        self.pos[v as usize] = self.heap.len() as u32;
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, activity);
    }

    fn pop(&mut self, activity: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        self.pos[top as usize] = ABSENT;
        let last = self.heap.pop().unwrap();
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, activity);
        }
        Some(top)
    }

    /// Restores heap order after `v`'s activity increased.
    fn rescore(&mut self, v: u32, activity: &[f64]) {
        let p = self.pos[v as usize];
        if p != ABSENT {
            self.sift_up(p as usize, activity);
        }
    }

    fn sift_up(&mut self, mut i: usize, activity: &[f64]) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if activity[self.heap[i] as usize] <= activity[self.heap[parent] as usize] {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize, activity: &[f64]) {
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < self.heap.len()
                && activity[self.heap[l] as usize] > activity[self.heap[best] as usize]
            {
                best = l;
            }
            if r < self.heap.len()
                && activity[self.heap[r] as usize] > activity[self.heap[best] as usize]
            {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.pos[self.heap[a] as usize] = a as u32;
        self.pos[self.heap[b] as usize] = b as u32;
    }
}

/// Parses solver output in SAT-competition conventions: comment lines
/// (`c`), one status line (`s SATISFIABLE` / `s UNSATISFIABLE` /
/// `s UNKNOWN`), and for satisfiable results `v` lines listing every
/// variable exactly once with a terminating `0`. `s UNKNOWN` maps to
/// [`SolveResult::Timeout`] with an empty budget, since the output carries
/// no budget information.
pub fn parse_external_result(text: &str) -> Result<SolveResult> {
    let bad = |msg: String| Error::SolverOutput(msg);
    let mut status: Option<String> = None;
    let mut values: Vec<i64> = Vec::new();
    let mut terminated = false;

    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let ln = i + 1;
        if line.trim().is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        if let Some(rest) = line.strip_prefix("s ") {
            if status.is_some() {
                return Err(bad(format!("line {ln}: second status line")));
            }
            status = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("v ").or((line == "v").then_some("")) {
            if terminated {
                return Err(bad(format!(
                    "line {ln}: value data after the terminating 0"
                )));
            }
            for tok in rest.split_ascii_whitespace() {
                if terminated {
                    return Err(bad(format!(
                        "line {ln}: value data after the terminating 0"
                    )));
                }
                let x: i64 = tok
                    .parse()
                    .map_err(|_| bad(format!("line {ln}: bad value token {tok:?}")))?;
                if x == 0 {
                    terminated = true;
                } else {
                    values.push(x);
                }
            }
        } else {
            return Err(bad(format!("line {ln}: unexpected line {line:?}")));
        }
    }

    let Some(status) = status else {
        return Err(bad("missing status line".to_string()));
    };
    match status.as_str() {
        "UNSATISFIABLE" | "UNKNOWN" => {
            if !values.is_empty() || terminated {
                return Err(bad(format!("value lines with status {status}")));
            }
            if status == "UNKNOWN" {
                Ok(SolveResult::Timeout(Budget::default()))
            } else {
                Ok(SolveResult::Unsat)
            }
        }
        "SATISFIABLE" => {
            if !terminated {
                return Err(bad("model lacks the terminating 0".to_string()));
            }
            if values.is_empty() {
                return Err(bad("empty model".to_string()));
            }
            let max_var = values.iter().map(|v| v.unsigned_abs()).max().unwrap();
            if max_var > (1 << 30) {
                return Err(bad(format!("variable {max_var} out of range")));
            }
            let mut assignment: Vec<Option<bool>> = vec![None; max_var as usize];
            for &x in &values {
                let slot = &mut assignment[(x.unsigned_abs() - 1) as usize];
                if slot.is_some() {
                    return Err(bad(format!("variable {} assigned twice", x.unsigned_abs())));
                }
                *slot = Some(x > 0);
            }
            let mut model = Vec::with_capacity(max_var as usize);
            for (i, v) in assignment.into_iter().enumerate() {
                match v {
                    Some(b) => model.push(b),
                    None => return Err(bad(format!("model missing variable {}", i + 1))),
                }
            }
            Ok(SolveResult::Sat(Model::new(model)))
        }
        other => Err(bad(format!("unrecognized status {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clause;

    fn lit(code: i32) -> Lit {
        Lit::from_dimacs(code).unwrap()
    }

    fn instance(num_vars: u32, clauses: &[&[i32]]) -> CnfInstance {
        let mut inst = CnfInstance::new(num_vars);
        for c in clauses {
            inst.add(Clause::new(c.iter().map(|&x| lit(x)).collect()).unwrap());
        }
        inst
    }

    fn pigeonhole(pigeons: u32, holes: u32) -> CnfInstance {
        let var = |p: u32, h: u32| (p * holes + h + 1) as i32;
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        for p in 0..pigeons {
            clauses.push((0..holes).map(|h| var(p, h)).collect());
        }
        for h in 0..holes {
            for p in 0..pigeons {
                for q in p + 1..pigeons {
                    clauses.push(vec![-var(p, h), -var(q, h)]);
                }
            }
        }
        let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
        instance(pigeons * holes, &refs)
    }

    #[test]
    fn trivial_instances() {
        assert!(matches!(
            solve(&instance(0, &[]), 0, Budget::unlimited()),
            SolveResult::Sat(_)
        ));
        assert!(matches!(
            solve(&instance(3, &[]), 0, Budget::unlimited()),
            SolveResult::Sat(_)
        ));
        match solve(&instance(1, &[&[1]]), 0, Budget::unlimited()) {
            SolveResult::Sat(m) => assert!(m.value(1)),
            other => panic!("expected sat, got {other:?}"),
        }
        assert_eq!(
            solve(&instance(1, &[&[1], &[-1]]), 0, Budget::unlimited()),
            SolveResult::Unsat
        );
    }

    #[test]
    fn unit_chain_propagates() {
        // 1 forces 2 forces 3; clause (!3) contradicts
        let inst = instance(3, &[&[1], &[-1, 2], &[-2, 3], &[-3]]);
        assert_eq!(solve(&inst, 0, Budget::unlimited()), SolveResult::Unsat);
        let sat = instance(3, &[&[1], &[-1, 2], &[-2, 3]]);
        match solve(&sat, 7, Budget::unlimited()) {
            SolveResult::Sat(m) => assert!(m.value(1) && m.value(2) && m.value(3)),
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn pigeonhole_unsat() {
        for holes in [1, 2, 3] {
            assert_eq!(
                solve(&pigeonhole(holes + 1, holes), 0, Budget::unlimited()),
                SolveResult::Unsat,
                "php({}, {holes})",
                holes + 1
            );
        }
    }

    #[test]
    fn pigeonhole_sat_when_it_fits() {
        match solve(&pigeonhole(3, 3), 0, Budget::unlimited()) {
            SolveResult::Sat(_) => {}
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn conflict_budget_times_out() {
        let result = solve(&pigeonhole(6, 5), 0, Budget::conflicts(1));
        assert_eq!(result, SolveResult::Timeout(Budget::conflicts(1)));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let inst = pigeonhole(5, 4);
        let (r1, s1) = solve_with_stats(&inst, 42, Budget::unlimited());
        let (r2, s2) = solve_with_stats(&inst, 42, Budget::unlimited());
        assert_eq!(r1, r2);
        assert_eq!(s1, s2);
        assert_eq!(r1, SolveResult::Unsat);
        assert!(s1.conflicts > 0);
    }

    #[test]
    fn planted_random_3sat_is_recovered() {
        let mut state = 0xfeedu64;
        let mut rng = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            splitmix64(state)
        };
        for round in 0..20 {
            let num_vars = 12 + (round % 5) as u32;
            let hidden: Vec<bool> = (0..num_vars).map(|_| rng() & 1 == 1).collect();
            let mut clauses: Vec<Vec<i32>> = Vec::new();
            while clauses.len() < (num_vars * 4) as usize {
                let mut vars: Vec<u32> = Vec::new();
                while vars.len() < 3 {
                    let v = (rng() % num_vars as u64) as u32 + 1;
                    if !vars.contains(&v) {
                        vars.push(v);
                    }
                }
                let clause: Vec<i32> = vars
                    .iter()
                    .map(|&v| {
                        if rng() & 1 == 1 {
                            v as i32
                        } else {
                            -(v as i32)
                        }
                    })
                    .collect();
                let satisfied = clause
                    .iter()
                    .any(|&x| hidden[(x.unsigned_abs() - 1) as usize] == (x > 0));
                if satisfied {
                    clauses.push(clause);
                }
            }
            let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
            let inst = instance(num_vars, &refs);
            match solve(&inst, round, Budget::unlimited()) {
                SolveResult::Sat(m) => {
                    assert!(verify_model(&inst, &m).unwrap());
                }
                other => panic!("round {round}: expected sat, got {other:?}"),
            }
        }
    }

    #[test]
    fn tautology_and_duplicates_are_handled() {
        let mut solver = Solver::new(2, 0);
        solver.add_clause(&[lit(1), lit(-1)]); // tautology: ignored
        solver.add_clause(&[lit(2), lit(2)]); // collapses to unit
        match solver.solve(Budget::unlimited()) {
            SolveResult::Sat(_) => {}
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn verify_model_checks_sizes_and_clauses() {
        let inst = instance(2, &[&[1, 2]]);
        assert!(verify_model(&inst, &Model::new(vec![true, false])).unwrap());
        assert!(!verify_model(&inst, &Model::new(vec![false, false])).unwrap());
        assert!(matches!(
            verify_model(&inst, &Model::new(vec![true])),
            Err(Error::ModelSize { got: 1, want: 2 })
        ));
    }

    #[test]
    fn luby_sequence() {
        let first: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(first, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn model_accessors() {
        let m = Model::new(vec![true, false]);
        assert_eq!(m.num_vars(), 2);
        assert!(m.value(1));
        assert!(!m.value(2));
        assert!(m.lit_true(lit(1)));
        assert!(m.lit_true(lit(-2)));
        assert!(!m.lit_true(lit(2)));
    }

    #[test]
    fn parse_external_sat() {
        let text = "c a comment\ns SATISFIABLE\nv 1 -2\nv 3\nv 0\n";
        match parse_external_result(text).unwrap() {
            SolveResult::Sat(m) => {
                assert_eq!(m.values(), &[true, false, true]);
            }
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn parse_external_unsat_and_unknown() {
        assert_eq!(
            parse_external_result("s UNSATISFIABLE\n").unwrap(),
            SolveResult::Unsat
        );
        assert_eq!(
            parse_external_result("c t\ns UNKNOWN\n").unwrap(),
            SolveResult::Timeout(Budget::default())
        );
    }

    #[test]
    fn parse_external_rejects_malformed() {
        let cases: &[(&str, &str)] = &[
            ("v 1 0\n", "missing status"),
            ("s SATISFIABLE\ns SATISFIABLE\nv 1 0\n", "second status"),
            ("s SATISFIABLE\nv 1\n", "terminating 0"),
            ("s SATISFIABLE\nv 0\n", "empty model"),
            ("s SATISFIABLE\nv 1 3 0\n", "missing variable 2"),
            ("s SATISFIABLE\nv 1 -1 0\n", "assigned twice"),
            ("s SATISFIABLE\nv 1 0 2\n", "after the terminating 0"),
            ("s SATISFIABLE\nv 1 0\nv 2 0\n", "after the terminating 0"),
            ("s UNSATISFIABLE\nv 1 0\n", "value lines with status"),
            ("s MAYBE\n", "unrecognized status"),
            ("hello\n", "unexpected line"),
            ("s SATISFIABLE\nv x 0\n", "bad value token"),
        ];
        for (input, needle) in cases {
            let err = parse_external_result(input).unwrap_err().to_string();
            assert!(err.contains(needle), "input {input:?}: got {err:?}");
        }
    }

    #[test]
    fn learned_clauses_are_logged() {
        let inst = pigeonhole(4, 3);
        let mut solver = Solver::new(inst.num_vars(), 0);
        solver.set_record_learned(true);
        for c in inst.clauses() {
            solver.add_clause(c);
        }
        assert_eq!(solver.solve(Budget::unlimited()), SolveResult::Unsat);
        assert!(!solver.learned_clauses().is_empty());
        assert_eq!(
            solver.stats().learned,
            solver.learned_clauses().len() as u64
        );
    }

    #[test]
    fn stats_are_populated() {
        let (result, stats) = solve_with_stats(&pigeonhole(5, 4), 0, Budget::unlimited());
        assert_eq!(result, SolveResult::Unsat);
        assert!(stats.conflicts > 0);
        assert!(stats.decisions > 0);
        assert!(stats.propagations > 0);
        assert!(stats.learned > 0);
    }
}
