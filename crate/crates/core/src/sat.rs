//! Incremental CDCL SAT solving with assumptions, models and unsatisfiable
//! cores.
//!
//! The solver follows the classic two-watched-literal CDCL design: 1UIP
//! conflict analysis, VSIDS-style decision heuristic, phase saving, Luby
//! restarts and activity-based learnt-clause reduction. Clause additions are
//! monotone within a session; retraction is done by the callers through
//! activation variables. Verdicts, models and cores are deterministic for a
//! fixed seed and call sequence.

use crate::cnf::{Clause, CnfError, CnfFormula, Cube, Lit, Var};

const VAR_DECAY: f64 = 0.95;
const ACTIVITY_RESCALE: f64 = 1e100;
const RESTART_BASE: u64 = 100;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum LBool {
    True,
    False,
    Undef,
}

impl LBool {
    fn from_bool(b: bool) -> LBool {
        if b {
            LBool::True
        } else {
            LBool::False
        }
    }
}

#[derive(Clone)]
struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    activity: f64,
    deleted: bool,
}

#[derive(Clone, Copy)]
struct Watcher {
    clause: u32,
    blocker: Lit,
}

/// Max-heap over variables ordered by activity, with index positions for
/// decrease/increase-key. Ties break towards the smaller variable index so
/// runs are reproducible.
#[derive(Default, Clone)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<i32>,
}

impl VarHeap {
    fn ensure(&mut self, n: usize) {
        while self.pos.len() < n {
            self.pos.push(-1);
        }
    }

    fn in_heap(&self, v: u32) -> bool {
        self.pos[v as usize] >= 0
    }

    fn less(a: u32, b: u32, act: &[f64]) -> bool {
        // max-heap: "less" means higher priority
        let (aa, ab) = (act[a as usize], act[b as usize]);
        aa > ab || (aa == ab && a < b)
    }

    fn percolate_up(&mut self, mut i: usize, act: &[f64]) {
        let x = self.heap[i];
        while i > 0 {
            let p = (i - 1) >> 1;
            if Self::less(x, self.heap[p], act) {
                self.heap[i] = self.heap[p];
                self.pos[self.heap[i] as usize] = i as i32;
                i = p;
            } else {
                break;
            }
        }
        self.heap[i] = x;
        self.pos[x as usize] = i as i32;
    }

    fn percolate_down(&mut self, mut i: usize, act: &[f64]) {
        let x = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let child = if r < self.heap.len() && Self::less(self.heap[r], self.heap[l], act) {
                r
            } else {
                l
            };
            if Self::less(self.heap[child], x, act) {
                self.heap[i] = self.heap[child];
                self.pos[self.heap[i] as usize] = i as i32;
                i = child;
            } else {
                break;
            }
        }
        self.heap[i] = x;
        self.pos[x as usize] = i as i32;
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.in_heap(v) {
            return;
        }
        self.heap.push(v);
        self.pos[v as usize] = (self.heap.len() - 1) as i32;
        self.percolate_up(self.heap.len() - 1, act);
    }

    fn decrease(&mut self, v: u32, act: &[f64]) {
        if self.in_heap(v) {
            self.percolate_up(self.pos[v as usize] as usize, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let x = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[x as usize] = -1;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.percolate_down(0, act);
        }
        Some(x)
    }
}

/// Counters kept per session.
#[derive(Debug, Default, Clone, Copy)]
pub struct SatStats {
    pub solve_calls: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub decisions: u64,
    pub learnt_clauses: u64,
}

/// Outcome of one [`SatSession::solve`] call.
///
/// The model is meaningful only on sat, the core only on unsat.
#[derive(Debug, Clone)]
pub struct SolveResult {
    sat: bool,
    model: Vec<bool>,
    core: Cube,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        self.sat
    }

    /// Value of `v` in the model. Variables the solver never saw default to
    /// false.
    pub fn model_value(&self, v: Var) -> bool {
        self.model.get(v.index()).copied().unwrap_or(false)
    }

    /// The model restricted to `vars`, as a minterm over them.
    pub fn model_cube(&self, vars: &[Var]) -> Cube {
        Cube::new(vars.iter().map(|&v| v.lit(self.model_value(v))).collect())
            .expect("model assigns each variable once")
    }

    /// Subset of the assumption literals responsible for unsatisfiability.
    pub fn core(&self) -> &Cube {
        &self.core
    }
}

/// Incremental CDCL session. Clause additions are monotone; parts of the
/// formula to be retracted later must be guarded by activation variables.
pub struct SatSession {
    clauses: Vec<ClauseData>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<LBool>,
    phase: Vec<bool>,
    level: Vec<u32>,
    reason: Vec<i32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    seen: Vec<bool>,
    ok: bool,
    n_learnt: usize,
    seed: u64,
    stats: SatStats,
}

impl Default for SatSession {
    fn default() -> Self {
        SatSession::new()
    }
}

impl SatSession {
    pub fn new() -> SatSession {
        SatSession::with_seed(0)
    }

    pub fn with_seed(seed: u64) -> SatSession {
        SatSession {
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            phase: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            seen: Vec::new(),
            ok: true,
            n_learnt: 0,
            seed,
            stats: SatStats::default(),
        }
    }

    pub fn stats(&self) -> SatStats {
        self.stats
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    fn ensure_var(&mut self, v: Var) {
        while self.assigns.len() <= v.index() {
            let idx = self.assigns.len() as u32;
            self.assigns.push(LBool::Undef);
            // The seed only perturbs initial phases; search is otherwise
            // deterministic.
            let mut h = self.seed ^ (idx as u64).wrapping_mul(0x9e3779b97f4a7c15);
            h ^= h >> 33;
            h = h.wrapping_mul(0xff51afd7ed558ccd);
            self.phase.push(h & 1 != 0 && self.seed != 0);
            self.level.push(0);
            self.reason.push(-1);
            self.activity.push(0.0);
            self.seen.push(false);
            self.watches.push(Vec::new());
            self.watches.push(Vec::new());
            self.heap.ensure(self.assigns.len());
            self.heap.insert(idx, &self.activity);
        }
    }

    fn value_lit(&self, l: Lit) -> LBool {
        match self.assigns[l.var().index()] {
            LBool::Undef => LBool::Undef,
            LBool::True => LBool::from_bool(!l.is_neg()),
            LBool::False => LBool::from_bool(l.is_neg()),
        }
    }

    /// Append the clauses of `f` to the database.
    pub fn assert_formula(&mut self, f: &CnfFormula) {
        for c in f.clauses() {
            self.assert_clause(c);
        }
    }

    /// Append one clause to the database.
    pub fn assert_clause(&mut self, c: &Clause) {
        self.add_lits(c.lits());
    }

    /// Append a clause given as a literal slice. Duplicates and tautologies
    /// are handled; literals already false at level 0 are dropped.
    pub fn add_lits(&mut self, lits: &[Lit]) {
        if !self.ok {
            return;
        }
        self.cancel_until(0);
        let mut c: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            self.ensure_var(l.var());
            match self.value_lit(l) {
                LBool::True => return, // satisfied at level 0
                LBool::False => continue,
                LBool::Undef => c.push(l),
            }
        }
        c.sort_unstable();
        c.dedup();
        for w in c.windows(2) {
            if w[0].var() == w[1].var() {
                return; // tautology
            }
        }
        match c.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(c[0], -1);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(c, false);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let idx = self.clauses.len() as u32;
        self.watches[lits[0].negate().code() as usize].push(Watcher {
            clause: idx,
            blocker: lits[1],
        });
        self.watches[lits[1].negate().code() as usize].push(Watcher {
            clause: idx,
            blocker: lits[0],
        });
        if learnt {
            self.n_learnt += 1;
        }
        self.clauses.push(ClauseData {
            lits,
            learnt,
            activity: 0.0,
            deleted: false,
        });
        idx
    }

    fn enqueue(&mut self, l: Lit, reason: i32) {
        debug_assert_eq!(self.value_lit(l), LBool::Undef);
        let v = l.var().index();
        self.assigns[v] = LBool::from_bool(!l.is_neg());
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let widx = p.code() as usize;
            let mut ws = std::mem::take(&mut self.watches[widx]);
            let mut j = 0;
            let mut conflict = None;
            'watchers: for i in 0..ws.len() {
                let w = ws[i];
                if self.value_lit(w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let ci = w.clause as usize;
                if self.clauses[ci].deleted {
                    continue;
                }
                let false_lit = p.negate();
                // ensure the false watcher is at position 1
                if self.clauses[ci].lits[0] == false_lit {
                    self.clauses[ci].lits.swap(0, 1);
                }
                debug_assert_eq!(self.clauses[ci].lits[1], false_lit);
                let first = self.clauses[ci].lits[0];
                if first != w.blocker && self.value_lit(first) == LBool::True {
                    ws[j] = Watcher {
                        clause: w.clause,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                for k in 2..self.clauses[ci].lits.len() {
                    let lk = self.clauses[ci].lits[k];
                    if self.value_lit(lk) != LBool::False {
                        self.clauses[ci].lits.swap(1, k);
                        self.watches[lk.negate().code() as usize].push(Watcher {
                            clause: w.clause,
                            blocker: first,
                        });
                        continue 'watchers;
                    }
                }
                // unit or conflicting
                ws[j] = Watcher {
                    clause: w.clause,
                    blocker: first,
                };
                j += 1;
                if self.value_lit(first) == LBool::False {
                    // conflict: copy the remaining watchers back
                    for k in i + 1..ws.len() {
                        ws[j] = ws[k];
                        j += 1;
                    }
                    self.qhead = self.trail.len();
                    conflict = Some(w.clause);
                    break;
                }
                self.enqueue(first, w.clause as i32);
            }
            ws.truncate(j);
            debug_assert!(self.watches[widx].is_empty());
            self.watches[widx] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn cancel_until(&mut self, lvl: usize) {
        if self.trail_lim.len() <= lvl {
            return;
        }
        let bound = self.trail_lim[lvl];
        for i in (bound..self.trail.len()).rev() {
            let v = self.trail[i].var();
            self.phase[v.index()] = self.assigns[v.index()] == LBool::True;
            self.assigns[v.index()] = LBool::Undef;
            self.reason[v.index()] = -1;
            self.heap.insert(v.0, &self.activity);
        }
        self.trail.truncate(bound);
        self.trail_lim.truncate(lvl);
        self.qhead = bound.min(self.qhead);
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > ACTIVITY_RESCALE {
            for a in &mut self.activity {
                *a *= 1.0 / ACTIVITY_RESCALE;
            }
            self.var_inc *= 1.0 / ACTIVITY_RESCALE;
        }
        self.heap.decrease(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, ci: usize) {
        self.clauses[ci].activity += self.cla_inc;
        if self.clauses[ci].activity > ACTIVITY_RESCALE {
            for c in &mut self.clauses {
                c.activity *= 1.0 / ACTIVITY_RESCALE;
            }
            self.cla_inc *= 1.0 / ACTIVITY_RESCALE;
        }
    }

    /// 1UIP conflict analysis. Returns the learnt clause (UIP first) and the
    /// backtrack level.
    fn analyze(&mut self, confl: u32) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![Lit::from_code(0)]; // slot for the UIP
        let mut path_c = 0u32;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let mut confl = confl as usize;
        let current = self.trail_lim.len() as u32;
        let mut to_clear: Vec<usize> = Vec::new();
        loop {
            self.bump_clause(confl);
            let start = if p.is_none() { 0 } else { 1 };
            for k in start..self.clauses[confl].lits.len() {
                let q = self.clauses[confl].lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    to_clear.push(v);
                    self.bump_var(v);
                    if self.level[v] >= current {
                        path_c += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let pl = self.trail[index];
            p = Some(pl);
            self.seen[pl.var().index()] = false;
            path_c -= 1;
            if path_c == 0 {
                break;
            }
            confl = self.reason[pl.var().index()] as usize;
        }
        learnt[0] = p.unwrap().negate();

        // conflict-clause minimization: drop literals implied by the rest
        let mut j = 1;
        for i in 1..learnt.len() {
            let v = learnt[i].var().index();
            let r = self.reason[v];
            let redundant = r >= 0
                && self.clauses[r as usize].lits[1..].iter().all(|q| {
                    self.seen[q.var().index()] || self.level[q.var().index()] == 0
                });
            if !redundant {
                learnt[j] = learnt[i];
                j += 1;
            }
        }
        learnt.truncate(j);

        for v in to_clear {
            self.seen[v] = false;
        }

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var().index()] as usize
        };
        (learnt, bt)
    }

    /// Collect the subset of assumptions responsible for `failed` (an
    /// assumption literal found false under the already-established prefix).
    fn analyze_final(&mut self, failed: Lit, n_assumed: usize) -> Cube {
        let mut out: Vec<Lit> = vec![failed];
        if self.trail_lim.is_empty() {
            return Cube::new(out).expect("single literal");
        }
        let mut to_clear = vec![failed.var().index()];
        self.seen[failed.var().index()] = true;
        let bottom = self.trail_lim[0];
        for i in (bottom..self.trail.len()).rev() {
            let v = self.trail[i].var().index();
            if !self.seen[v] {
                continue;
            }
            let r = self.reason[v];
            if r < 0 {
                // a decision: within the assumption prefix it is an assumption
                if (self.level[v] as usize) <= n_assumed && self.trail[i] != failed.negate() {
                    out.push(self.trail[i]);
                }
            } else {
                for &q in &self.clauses[r as usize].lits[1..] {
                    let qv = q.var().index();
                    if !self.seen[qv] && self.level[qv] > 0 {
                        self.seen[qv] = true;
                        to_clear.push(qv);
                    }
                }
            }
        }
        for v in to_clear {
            self.seen[v] = false;
        }
        Cube::new(out).expect("assumptions are a consistent cube")
    }

    fn reduce_db(&mut self) {
        let mut learnt_idx: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| {
                self.clauses[i].learnt && !self.clauses[i].deleted && self.clauses[i].lits.len() > 2
            })
            .collect();
        learnt_idx.sort_by(|&a, &b| {
            self.clauses[a]
                .activity
                .partial_cmp(&self.clauses[b].activity)
                .unwrap()
                .then(b.cmp(&a))
        });
        let locked: Vec<bool> = learnt_idx
            .iter()
            .map(|&i| {
                let l0 = self.clauses[i].lits[0];
                self.value_lit(l0) == LBool::True && self.reason[l0.var().index()] == i as i32
            })
            .collect();
        let target = learnt_idx.len() / 2;
        let mut removed = 0;
        for (k, &i) in learnt_idx.iter().enumerate() {
            if removed >= target {
                break;
            }
            if locked[k] {
                continue;
            }
            self.clauses[i].deleted = true;
            self.n_learnt -= 1;
            removed += 1;
        }
        // rebuild watches without the deleted clauses
        for w in &mut self.watches {
            w.retain(|watcher| !self.clauses[watcher.clause as usize].deleted);
        }
    }

    fn luby(mut x: u64) -> u64 {
        let mut size = 1u64;
        let mut seq = 0u32;
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        while size - 1 != x {
            size = (size - 1) >> 1;
            seq -= 1;
            x %= size;
        }
        1u64 << seq
    }

    /// Decide satisfiability of the database under the given assumptions.
    pub fn solve(&mut self, assumptions: &Cube) -> SolveResult {
        self.solve_lits(assumptions.lits())
    }

    /// Like [`SatSession::solve`] with the assumptions given as a slice.
    /// Duplicates are fine; the slice must not assert a variable in both
    /// phases (cores and models are cubes).
    pub fn solve_lits(&mut self, assumptions: &[Lit]) -> SolveResult {
        debug_assert!(
            {
                let mut sorted: Vec<Lit> = assumptions.to_vec();
                sorted.sort_unstable();
                sorted.windows(2).all(|w| w[0].var() != w[1].var() || w[0] == w[1])
            },
            "contradictory assumption literals"
        );
        self.stats.solve_calls += 1;
        for &l in assumptions {
            self.ensure_var(l.var());
        }
        if !self.ok {
            return SolveResult {
                sat: false,
                model: Vec::new(),
                core: Cube::empty(),
            };
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return SolveResult {
                sat: false,
                model: Vec::new(),
                core: Cube::empty(),
            };
        }

        let mut restart_count = 0u64;
        let mut conflicts_left = RESTART_BASE * Self::luby(restart_count);
        let mut max_learnt = 2000 + self.clauses.len() / 3;

        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                if self.trail_lim.is_empty() {
                    self.ok = false;
                    return SolveResult {
                        sat: false,
                        model: Vec::new(),
                        core: Cube::empty(),
                    };
                }
                if self.trail_lim.len() <= assumptions.len() {
                    // The conflict may involve assumptions: derive the core
                    // from the conflicting clause.
                    let core = self.core_from_conflict(confl, assumptions.len());
                    self.cancel_until(0);
                    return SolveResult {
                        sat: false,
                        model: Vec::new(),
                        core,
                    };
                }
                let (learnt, bt) = self.analyze(confl);
                // Backtracking below assumption levels is fine: the decision
                // loop re-establishes assumptions one level at a time.
                self.cancel_until(bt);
                self.stats.learnt_clauses += 1;
                if learnt.len() == 1 {
                    self.cancel_until(0);
                    if self.value_lit(learnt[0]) == LBool::False {
                        self.ok = false;
                        return SolveResult {
                            sat: false,
                            model: Vec::new(),
                            core: Cube::empty(),
                        };
                    }
                    if self.value_lit(learnt[0]) == LBool::Undef {
                        self.enqueue(learnt[0], -1);
                    }
                } else {
                    let ci = self.attach(learnt.clone(), true);
                    self.enqueue(learnt[0], ci as i32);
                }
                self.var_inc /= VAR_DECAY;
                conflicts_left = conflicts_left.saturating_sub(1);
            } else {
                if conflicts_left == 0 {
                    restart_count += 1;
                    conflicts_left = RESTART_BASE * Self::luby(restart_count);
                    self.cancel_until(0);
                    continue;
                }
                if self.n_learnt > max_learnt {
                    self.reduce_db();
                    max_learnt += max_learnt / 10;
                }
                // establish pending assumptions as decisions
                if self.trail_lim.len() < assumptions.len() {
                    let p = assumptions[self.trail_lim.len()];
                    match self.value_lit(p) {
                        LBool::True => {
                            self.trail_lim.push(self.trail.len());
                            continue;
                        }
                        LBool::False => {
                            let core = self.analyze_final(p, assumptions.len());
                            self.cancel_until(0);
                            return SolveResult {
                                sat: false,
                                model: Vec::new(),
                                core,
                            };
                        }
                        LBool::Undef => {
                            self.trail_lim.push(self.trail.len());
                            self.enqueue(p, -1);
                            continue;
                        }
                    }
                }
                // regular decision
                let mut next = None;
                while let Some(v) = self.heap.pop(&self.activity) {
                    if self.assigns[v as usize] == LBool::Undef {
                        next = Some(v);
                        break;
                    }
                }
                match next {
                    None => {
                        let model = self
                            .assigns
                            .iter()
                            .zip(self.phase.iter())
                            .map(|(a, ph)| match a {
                                LBool::True => true,
                                LBool::False => false,
                                LBool::Undef => *ph,
                            })
                            .collect();
                        self.cancel_until(0);
                        return SolveResult {
                            sat: true,
                            model,
                            core: Cube::empty(),
                        };
                    }
                    Some(v) => {
                        self.stats.decisions += 1;
                        let l = Var(v).lit(self.phase[v as usize]);
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, -1);
                    }
                }
            }
        }
    }

    /// Derive an assumption core from a conflict at an assumption level.
    fn core_from_conflict(&mut self, confl: u32, n_assumed: usize) -> Cube {
        let mut lits: Vec<Lit> = Vec::new();
        let mut to_clear: Vec<usize> = Vec::new();
        for &q in &self.clauses[confl as usize].lits {
            let v = q.var().index();
            if self.level[v] > 0 && !self.seen[v] {
                self.seen[v] = true;
                to_clear.push(v);
            }
        }
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let v = self.trail[i].var().index();
            if !self.seen[v] {
                continue;
            }
            let r = self.reason[v];
            if r < 0 {
                if self.level[v] as usize <= n_assumed {
                    lits.push(self.trail[i]);
                }
            } else {
                for &q in &self.clauses[r as usize].lits[1..] {
                    let qv = q.var().index();
                    if !self.seen[qv] && self.level[qv] > 0 {
                        self.seen[qv] = true;
                        to_clear.push(qv);
                    }
                }
            }
        }
        for v in to_clear {
            self.seen[v] = false;
        }
        Cube::new(lits).expect("assumption literals are consistent")
    }

    /// Dump the clause database (including learnt clauses) as DIMACS, for
    /// debugging queries with external solvers.
    pub fn dump_dimacs(&self) -> String {
        let live: Vec<&ClauseData> = self.clauses.iter().filter(|c| !c.deleted).collect();
        let mut out = format!("p cnf {} {}\n", self.num_vars(), live.len());
        for c in live {
            for l in &c.lits {
                let v = (l.var().0 + 1) as i64;
                out.push_str(&(if l.is_neg() { -v } else { v }).to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    /// Minimal unsatisfiable core of `cube` with respect to the session
    /// clauses conjoined with `fixed`: the returned subset stays
    /// unsatisfiable and dropping any single literal makes it satisfiable
    /// (keeping `fixed` asserted).
    pub fn min_unsat_core(&mut self, cube: &Cube, fixed: &Cube) -> Result<Cube, CnfError> {
        let mut assumptions: Vec<Lit> = fixed.lits().to_vec();
        let split = assumptions.len();
        assumptions.extend_from_slice(cube.lits());
        let first = self.solve_lits(&assumptions);
        if first.is_sat() {
            return Err(CnfError::CorePreconditionViolated);
        }
        let mut candidate: Vec<Lit> = cube
            .lits()
            .iter()
            .copied()
            .filter(|l| first.core().contains(*l))
            .collect();
        let mut i = 0;
        while i < candidate.len() {
            let mut trial: Vec<Lit> = assumptions[..split].to_vec();
            trial.extend(candidate.iter().copied().enumerate().filter_map(|(j, l)| {
                if j == i {
                    None
                } else {
                    Some(l)
                }
            }));
            let res = self.solve_lits(&trial);
            if res.is_sat() {
                i += 1;
            } else {
                // keep only literals still in the returned core
                candidate = candidate
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|&(j, l)| j != i && res.core().contains(l))
                    .map(|(_, l)| l)
                    .collect();
            }
        }
        Ok(Cube::new(candidate).expect("subset of a cube"))
    }
}
