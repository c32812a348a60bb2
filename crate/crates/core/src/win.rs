//! Winning-region and winning-area computation by CNF query learning.
//!
//! Two backends: an incremental SAT-solver loop that maintains a lazily
//! synchronized copy of the region being learned, and a QBF loop whose
//! counterexample and generalization queries carry one quantifier
//! alternation. Both support reachability optimizations that exploit
//! relative inductiveness, and the SAT loop can universally expand the
//! transition circuit over control inputs (for counterexample computation)
//! and over one heuristically chosen uncontrollable input (for
//! generalization).

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::aig::{cheapest_expansion_var, expand_circuit, AigError, ExpandedTransition, SafetySpec, Signal};
use crate::cnf::{negate_pg, renaming, Clause, CnfFormula, Cube, Lit, Var, VarKind, VarPool};
use crate::cnf::compress_cnf;
use crate::qbf::{QbfConfig, QbfEngine, QbfError, QbfOutcome, TwoQbfQuery};
use crate::sat::SatSession;

#[derive(Debug, Error)]
pub enum WinError {
    #[error("refinement budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("time limit of {0} ms exceeded")]
    TimeLimit(u64),
    #[error("cancelled")]
    Cancelled,
    #[error(transparent)]
    Qbf(#[from] QbfError),
    #[error(transparent)]
    Aig(#[from] AigError),
    #[error("winning-area file is malformed: {0}")]
    BadAreaFile(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Qbf,
    Sat1,
}

/// Verdict of a winning-region computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Realizable,
    Unrealizable,
}

/// What the returned formula is: the full winning region, a winning area
/// (all three certificate checks hold), or a formula that only certifies
/// the verdict (reachability-for-computation may break enforceability).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    WinningRegion,
    WinningArea,
    RealizabilityOnly,
}

#[derive(Debug, Default, Clone)]
pub struct WinStats {
    pub refinements: u64,
    pub cex_candidates: u64,
    pub sat_calls: u64,
    pub qbf_calls: u64,
    pub g_syncs: u64,
    pub time_ms: u64,
    pub provenance: String,
}

#[derive(Debug, Clone)]
pub struct WinningOutcome {
    pub verdict: Verdict,
    /// Valid iff realizable.
    pub region: Option<CnfFormula>,
    pub kind: RegionKind,
    pub stats: WinStats,
}

/// Options for the learning loops.
#[derive(Debug, Clone)]
pub struct WinConfig {
    pub backend: Backend,
    /// `false` resets the counterexample solver and the input exclusion on
    /// every refinement instead of lazily.
    pub lazy_g: bool,
    /// Exploit unreachability during counterexample generalization
    /// (relative inductiveness). The result is a winning area.
    pub opt_rg: bool,
    /// Exploit unreachability during counterexample computation. The result
    /// only certifies the verdict.
    pub opt_rc: bool,
    /// Expand the transition circuit over all controls in the
    /// counterexample solver.
    pub expand_cex: bool,
    /// Expand one heuristically chosen input in the generalization solver.
    pub expand_gen: bool,
    pub seed: u64,
    pub max_refinements: u64,
    pub time_limit_ms: Option<u64>,
    /// Reset the generalization solver when it holds this many more
    /// region clauses than the compressed region.
    pub solver_g_reset_excess: usize,
    pub expansion_node_budget: usize,
    pub qbf: QbfConfig,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for WinConfig {
    fn default() -> Self {
        WinConfig {
            backend: Backend::Sat1,
            lazy_g: true,
            opt_rg: false,
            opt_rc: false,
            expand_cex: false,
            expand_gen: false,
            seed: 0,
            max_refinements: u64::MAX,
            time_limit_ms: None,
            solver_g_reset_excess: 5000,
            expansion_node_budget: 200_000,
            qbf: QbfConfig::default(),
            cancel: None,
        }
    }
}

impl WinConfig {
    pub fn kind(&self) -> RegionKind {
        if self.opt_rc {
            RegionKind::RealizabilityOnly
        } else if self.opt_rg {
            RegionKind::WinningArea
        } else {
            RegionKind::WinningRegion
        }
    }
}

/// Clause exchange hooks for the portfolio. Publishing must never block;
/// draining returns clauses discovered by other workers.
pub trait ClauseBus: Send {
    fn publish(&mut self, c: &Clause);
    fn drain(&mut self) -> Vec<Clause>;
}

/// No-op bus for single-threaded runs.
pub struct NoSharing;

impl ClauseBus for NoSharing {
    fn publish(&mut self, _c: &Clause) {}
    fn drain(&mut self) -> Vec<Clause> {
        Vec::new()
    }
}

fn init_satisfies(spec: &SafetySpec, f: &CnfFormula) -> bool {
    f.eval(&|v| spec.init.value_of(v).unwrap_or(false))
}

fn cube_within_init(spec: &SafetySpec, cube: &Cube) -> bool {
    cube.lits()
        .iter()
        .all(|l| spec.init.value_of(l.var()) == Some(l.value()))
}

/// Map a clause over state variables through next-state signals; `None`
/// when a constant satisfies the clause.
fn map_state_clause(c: &Clause, map: &HashMap<Var, Signal>) -> Option<Clause> {
    let mut lits = Vec::with_capacity(c.len());
    for &l in c.lits() {
        match map.get(&l.var()) {
            None => lits.push(l),
            Some(Signal::Const(b)) => {
                if l.eval(*b) {
                    return None;
                }
            }
            Some(Signal::Lit(m)) => lits.push(if l.is_neg() { m.negate() } else { *m }),
        }
    }
    Clause::new(lits)
}

/// CNF encoding of an [`ExpandedTransition`]: shared gates get one
/// auxiliary each, gates depending on per-copy leaves get one per copy.
struct EncodedExpansion {
    clauses: CnfFormula,
    /// Per copy, the next-state signal for each state variable.
    copy_next: Vec<HashMap<Var, Signal>>,
    /// Per copy, fresh instances of the duplicated leaves.
    copy_dup_vars: Vec<HashMap<Var, Var>>,
}

fn encode_expansion(exp: &ExpandedTransition, pool: &mut VarPool) -> EncodedExpansion {
    let b = &exp.builder;
    let n_nodes = b.n_leaves() + 1 + b.n_gates();
    let first_gate = b.n_leaves() + 1;
    // does a node depend on a duplicated leaf?
    let mut dup_dep = vec![false; n_nodes];
    for &leaf in &exp.dup_leaves {
        dup_dep[leaf + 1] = true;
    }
    for node in first_gate..n_nodes {
        let (x, y) = b.gate(node as u32).unwrap();
        dup_dep[node] = dup_dep[(x >> 1) as usize] || dup_dep[(y >> 1) as usize];
    }
    let mut clauses = CnfFormula::truth();
    // shared gate vars, allocated lazily in node order
    let mut shared_var: Vec<Option<Var>> = vec![None; n_nodes];
    let all_roots: Vec<u32> = exp
        .copies
        .iter()
        .flat_map(|c| c.next_lits.iter().copied())
        .collect();
    let cone = b.cone(&all_roots);
    let resolve_shared = |shared: &Vec<Option<Var>>, exp: &ExpandedTransition, l: u32| -> Signal {
        let node = (l >> 1) as usize;
        let neg = l & 1 != 0;
        let s = if node == 0 {
            Signal::Const(false)
        } else if node < first_gate {
            Signal::Lit(exp.leaf_vars[node - 1].pos())
        } else {
            Signal::Lit(shared[node].expect("shared cone in order").pos())
        };
        if neg {
            s.negate()
        } else {
            s
        }
    };
    for &node in &cone {
        let node = node as usize;
        if dup_dep[node] {
            continue;
        }
        let (x, y) = b.gate(node as u32).unwrap();
        let sx = resolve_shared(&shared_var, exp, x);
        let sy = resolve_shared(&shared_var, exp, y);
        let (Signal::Lit(lx), Signal::Lit(ly)) = (sx, sy) else {
            // builder folds constants away, so gate operands are literals
            unreachable!("builder gates never have constant operands");
        };
        let g = pool.fresh(VarKind::Aux);
        clauses.push(Clause::new(vec![g.neg(), lx]).unwrap());
        clauses.push(Clause::new(vec![g.neg(), ly]).unwrap());
        clauses.push(Clause::new(vec![g.pos(), lx.negate(), ly.negate()]).unwrap());
        shared_var[node] = Some(g);
    }
    // per-copy encodings of duplicated cones
    let mut copy_next = Vec::with_capacity(exp.copies.len());
    let mut copy_dup_vars = Vec::with_capacity(exp.copies.len());
    for copy in &exp.copies {
        let mut dup_var: HashMap<Var, Var> = HashMap::new();
        for &leaf in &exp.dup_leaves {
            let orig = exp.leaf_vars[leaf];
            let fresh = pool.fresh(pool.kind(orig));
            dup_var.insert(orig, fresh);
        }
        let mut copy_var: Vec<Option<Var>> = vec![None; n_nodes];
        let copy_cone = b.cone(&copy.next_lits);
        let resolve_copy = |copy_v: &Vec<Option<Var>>,
                            shared: &Vec<Option<Var>>,
                            dup: &HashMap<Var, Var>,
                            l: u32|
         -> Signal {
            let node = (l >> 1) as usize;
            let neg = l & 1 != 0;
            let s = if node == 0 {
                Signal::Const(false)
            } else if node < first_gate {
                let orig = exp.leaf_vars[node - 1];
                Signal::Lit(dup.get(&orig).copied().unwrap_or(orig).pos())
            } else if dup_dep[node] {
                Signal::Lit(copy_v[node].expect("copy cone in order").pos())
            } else {
                Signal::Lit(shared[node].expect("shared cone first").pos())
            };
            if neg {
                s.negate()
            } else {
                s
            }
        };
        for &node in &copy_cone {
            let node = node as usize;
            if !dup_dep[node] {
                continue;
            }
            let (x, y) = b.gate(node as u32).unwrap();
            let sx = resolve_copy(&copy_var, &shared_var, &dup_var, x);
            let sy = resolve_copy(&copy_var, &shared_var, &dup_var, y);
            let (Signal::Lit(lx), Signal::Lit(ly)) = (sx, sy) else {
                unreachable!("builder gates never have constant operands");
            };
            let g = pool.fresh(VarKind::Aux);
            clauses.push(Clause::new(vec![g.neg(), lx]).unwrap());
            clauses.push(Clause::new(vec![g.neg(), ly]).unwrap());
            clauses.push(Clause::new(vec![g.pos(), lx.negate(), ly.negate()]).unwrap());
            copy_var[node] = Some(g);
        }
        let next: HashMap<Var, Signal> = copy
            .next_lits
            .iter()
            .enumerate()
            .map(|(j, &l)| {
                let s = if l >> 1 == 0 {
                    Signal::Const(l & 1 != 0)
                } else {
                    resolve_copy(&copy_var, &shared_var, &dup_var, l)
                };
                (exp_state_var(exp, j), s)
            })
            .collect();
        copy_next.push(next);
        copy_dup_vars.push(dup_var);
    }
    EncodedExpansion {
        clauses,
        copy_next,
        copy_dup_vars,
    }
}

/// State variable for position `j` of an expansion's next-lits vector (the
/// first leaves of an expansion are always the state variables).
fn exp_state_var(exp: &ExpandedTransition, j: usize) -> Var {
    exp.leaf_vars[j]
}

/// Previous-state copies and the selector encoding of
/// `I(x) | F(x*) & [diff &] T(x*, i*, c*, x)` used by the reachability
/// optimizations.
struct PrevStateCopy {
    selector: Var,
    /// Clauses to assert once (selector -> I, plus guarded T* and diff).
    base: CnfFormula,
    /// Template for guarding newly learned region clauses: push
    /// `selector | clause[states -> prev_states]`.
    prev_map: HashMap<Var, Var>,
}

fn build_prev_copy(
    spec: &SafetySpec,
    f: &CnfFormula,
    with_diff: bool,
    pool: &mut VarPool,
) -> PrevStateCopy {
    let selector = pool.fresh(VarKind::Aux);
    let prev_states = pool.fresh_vec(VarKind::State, spec.states.len());
    let prev_inputs = pool.fresh_vec(VarKind::Input, spec.inputs.len());
    let prev_controls = pool.fresh_vec(VarKind::Control, spec.controls.len());
    let prev_aux = pool.fresh_vec(VarKind::Aux, spec.trans_aux.len());
    let mut map = renaming(&spec.states, &prev_states);
    map.extend(renaming(&spec.inputs, &prev_inputs));
    map.extend(renaming(&spec.controls, &prev_controls));
    map.extend(renaming(&spec.trans_aux, &prev_aux));
    // T* maps next states onto the current states
    map.extend(renaming(&spec.next_states, &spec.states));
    let t_prev = spec.trans.rename(&map).expect("fresh copies");
    let mut base = CnfFormula::truth();
    // selector -> I(x)
    for l in spec.init.lits() {
        base.push(Clause::new(vec![selector.neg(), *l]).unwrap());
    }
    // !selector -> T* (and F*, added by the caller per region clause)
    for c in t_prev.clauses() {
        let mut lits = vec![selector.pos()];
        lits.extend_from_slice(c.lits());
        base.push(Clause::new(lits).expect("selector is fresh"));
    }
    if with_diff {
        // !selector -> x* != x
        let mut diff_lits = vec![selector.pos()];
        for (s, p) in spec.states.iter().zip(&prev_states) {
            let d = pool.fresh(VarKind::Aux);
            base.push(Clause::new(vec![d.neg(), s.pos(), p.pos()]).unwrap());
            base.push(Clause::new(vec![d.neg(), s.neg(), p.neg()]).unwrap());
            diff_lits.push(d.pos());
        }
        base.push(Clause::new(diff_lits).expect("fresh diff vars"));
    }
    let prev_map = renaming(&spec.states, &prev_states);
    // guard the current region clauses as F*
    for c in f.clauses() {
        if let Some(mapped) = map_clause_vars(c, &prev_map) {
            let mut lits = vec![selector.pos()];
            lits.extend_from_slice(mapped.lits());
            base.push(Clause::new(lits).expect("selector fresh"));
        }
    }
    PrevStateCopy {
        selector,
        base,
        prev_map,
    }
}

fn map_clause_vars(c: &Clause, map: &HashMap<Var, Var>) -> Option<Clause> {
    Clause::new(
        c.lits()
            .iter()
            .map(|l| {
                let v = map.get(&l.var()).copied().unwrap_or(l.var());
                Lit::new(v, l.is_neg())
            })
            .collect(),
    )
}

struct BudgetGuard {
    started: Instant,
    cfg_max: u64,
    time_limit_ms: Option<u64>,
    cancel: Option<Arc<AtomicBool>>,
}

impl BudgetGuard {
    fn new(cfg: &WinConfig) -> BudgetGuard {
        BudgetGuard {
            started: Instant::now(),
            cfg_max: cfg.max_refinements,
            time_limit_ms: cfg.time_limit_ms,
            cancel: cfg.cancel.clone(),
        }
    }

    fn check(&self, refinements: u64) -> Result<(), WinError> {
        if refinements > self.cfg_max {
            return Err(WinError::BudgetExceeded(self.cfg_max));
        }
        if let Some(limit) = self.time_limit_ms {
            if self.started.elapsed().as_millis() as u64 > limit {
                return Err(WinError::TimeLimit(limit));
            }
        }
        if let Some(cancel) = &self.cancel {
            if cancel.load(Ordering::Relaxed) {
                return Err(WinError::Cancelled);
            }
        }
        Ok(())
    }

    fn elapsed_ms(&self) -> u64 {
        self.started.elapsed().as_millis() as u64
    }
}

/// The advanced SAT-solver learning loop.
struct SatWin<'a> {
    spec: &'a SafetySpec,
    cfg: WinConfig,
    pool: VarPool,
    f: CnfFormula,
    g: CnfFormula,
    precise: bool,
    solver_c: SatSession,
    solver_g: SatSession,
    exp_cex: Option<(ExpandedTransition, EncodedExpansion)>,
    exp_gen: Option<(ExpandedTransition, EncodedExpansion)>,
    /// Input variable expanded in the generalization solver.
    gen_var: Option<Var>,
    rg: Option<PrevStateCopy>,
    rc: Option<PrevStateCopy>,
    prime_map: HashMap<Var, Var>,
    g_added: usize,
    u_clauses: Vec<Clause>,
    stats: WinStats,
    retired_sat_calls: u64,
}

impl<'a> SatWin<'a> {
    fn new(spec: &'a SafetySpec, cfg: WinConfig) -> Result<SatWin<'a>, WinError> {
        let mut pool = spec.pool.clone();
        let f = {
            let mut f = CnfFormula::truth();
            for c in spec.safe.clauses() {
                f.add_clause_with_subsumption(c.clone());
            }
            f
        };
        let exp_cex = if cfg.expand_cex && !spec.controls.is_empty() {
            match expand_circuit(spec, &spec.controls, &[], cfg.expansion_node_budget) {
                Ok(exp) => {
                    let enc = encode_expansion(&exp, &mut pool);
                    Some((exp, enc))
                }
                Err(AigError::ExpansionBudget(_)) => None, // fall back
                Err(e) => return Err(e.into()),
            }
        } else {
            None
        };
        let (exp_gen, gen_var) = if cfg.expand_gen && !spec.inputs.is_empty() {
            let v = cheapest_expansion_var(spec, &spec.inputs).expect("inputs nonempty");
            // the controls are re-bound per universal input assignment, so
            // every copy gets fresh control instances
            match expand_circuit(spec, &[v], &spec.controls, cfg.expansion_node_budget) {
                Ok(exp) => {
                    let enc = encode_expansion(&exp, &mut pool);
                    (Some((exp, enc)), Some(v))
                }
                Err(AigError::ExpansionBudget(_)) => (None, None),
                Err(e) => return Err(e.into()),
            }
        } else {
            (None, None)
        };
        let prime_map = renaming(&spec.states, &spec.next_states);
        let mut engine = SatWin {
            spec,
            cfg,
            pool,
            g: f.clone(),
            f,
            precise: true,
            solver_c: SatSession::new(),
            solver_g: SatSession::new(),
            exp_cex,
            exp_gen,
            gen_var,
            rg: None,
            rc: None,
            prime_map,
            g_added: 0,
            u_clauses: Vec::new(),
            stats: WinStats::default(),
            retired_sat_calls: 0,
        };
        engine.build_solver_g();
        engine.build_solver_c();
        Ok(engine)
    }

    fn build_solver_c(&mut self) {
        self.retired_sat_calls += self.solver_c.stats().solve_calls;
        let mut s = SatSession::with_seed(self.cfg.seed);
        s.assert_formula(&self.f);
        match &self.exp_cex {
            None => {
                s.assert_formula(&self.spec.trans);
                let g_primed = self.g.rename(&self.prime_map).expect("states to next");
                let neg = negate_pg(&g_primed, &mut self.pool);
                s.assert_formula(&neg.cnf);
            }
            Some((_, enc)) => {
                s.assert_formula(&enc.clauses);
                // one negated-copy of G per renaming, sharing auxiliaries
                // for identical mapped clauses
                let mut cache: HashMap<Clause, Var> = HashMap::new();
                for next in &enc.copy_next {
                    let mut top: Vec<Lit> = Vec::new();
                    let mut copy_true = false;
                    let mut any_clause = false;
                    for c in self.g.clauses() {
                        match map_state_clause(c, next) {
                            None => continue, // clause satisfied, contributes nothing
                            Some(mapped) if mapped.is_empty() => {
                                // G copy is false: its negation is true
                                copy_true = true;
                                break;
                            }
                            Some(mapped) => {
                                any_clause = true;
                                if mapped.len() == 1 {
                                    top.push(mapped.lits()[0].negate());
                                } else {
                                    let a = *cache.entry(mapped.clone()).or_insert_with(|| {
                                        let a = self.pool.fresh(VarKind::Aux);
                                        for &l in mapped.lits() {
                                            s.add_lits(&[a.neg(), l.negate()]);
                                        }
                                        a
                                    });
                                    top.push(a.pos());
                                }
                            }
                        }
                    }
                    if copy_true {
                        continue;
                    }
                    if !any_clause {
                        // G copy is constant true: its negation is false
                        s.assert_formula(&CnfFormula::falsity());
                        continue;
                    }
                    match Clause::new(top) {
                        Some(c) => s.assert_clause(&c),
                        None => continue, // tautological disjunction
                    }
                }
            }
        }
        if self.cfg.opt_rc {
            let rc = build_prev_copy(self.spec, &self.f, true, &mut self.pool);
            s.assert_formula(&rc.base);
            self.rc = Some(rc);
        }
        self.solver_c = s;
    }

    fn build_solver_g(&mut self) {
        self.retired_sat_calls += self.solver_g.stats().solve_calls;
        let mut s = SatSession::with_seed(self.cfg.seed);
        s.assert_formula(&self.f);
        match &self.exp_gen {
            None => {
                s.assert_formula(&self.spec.trans);
                let f_primed = self.f.rename(&self.prime_map).expect("states to next");
                s.assert_formula(&f_primed);
            }
            Some((_, enc)) => {
                s.assert_formula(&enc.clauses);
                for next in &enc.copy_next {
                    for c in self.f.clauses() {
                        match map_state_clause(c, next) {
                            None => continue,
                            Some(mapped) => s.assert_clause(&mapped),
                        }
                    }
                }
            }
        }
        if self.cfg.opt_rg {
            let rg = build_prev_copy(self.spec, &self.f, false, &mut self.pool);
            s.assert_formula(&rg.base);
            self.rg = Some(rg);
        }
        self.g_added = 0;
        self.solver_g = s;
    }

    /// Add a newly learned region clause everywhere it is mirrored.
    fn refine(&mut self, blocking: Clause, bus: &mut dyn ClauseBus) {
        bus.publish(&blocking);
        self.absorb(blocking);
        self.stats.refinements += 1;
    }

    /// Conjoin a region clause (learned locally or received) to F and all
    /// solver mirrors.
    fn absorb(&mut self, blocking: Clause) {
        if !self.f.add_clause_with_subsumption(blocking.clone()) {
            return; // already implied syntactically
        }
        self.precise = false;
        self.solver_c.assert_clause(&blocking);
        if let Some(rc) = &self.rc {
            if let Some(mapped) = map_clause_vars(&blocking, &rc.prev_map) {
                let mut lits = vec![rc.selector.pos()];
                lits.extend_from_slice(mapped.lits());
                self.solver_c.add_lits(&lits);
            }
        }
        self.solver_g.assert_clause(&blocking);
        self.g_added += 1;
        match &self.exp_gen {
            None => {
                if let Some(primed) = map_clause_vars(&blocking, &self.prime_map) {
                    self.solver_g.assert_clause(&primed);
                    self.g_added += 1;
                }
            }
            Some((_, enc)) => {
                for next in &enc.copy_next {
                    if let Some(mapped) = map_state_clause(&blocking, next) {
                        self.solver_g.assert_clause(&mapped);
                        self.g_added += 1;
                    }
                }
            }
        }
        if let Some(rg) = &self.rg {
            if let Some(mapped) = map_clause_vars(&blocking, &rg.prev_map) {
                let mut lits = vec![rg.selector.pos()];
                lits.extend_from_slice(mapped.lits());
                self.solver_g.add_lits(&lits);
            }
        }
    }

    /// Synchronize the lazy copy: compress F, set G := F, reset the input
    /// exclusion and rebuild the counterexample solver.
    fn sync(&mut self) {
        self.f = compress_cnf(&self.f, false);
        self.g = self.f.clone();
        self.precise = true;
        self.stats.g_syncs += 1;
        self.u_clauses.clear();
        self.build_solver_c();
        if self.g_added > self.f.len() + self.cfg.solver_g_reset_excess {
            self.build_solver_g();
        }
    }

    /// Generalize a genuine counterexample by dropping literals while the
    /// one-input exclusion query stays unsatisfiable; with the reachability
    /// optimization the query also allows dropping states with no
    /// predecessor outside the candidate.
    fn generalize(&mut self, x: &Cube, gen_assumptions: &[Lit], initial_core: &Cube) -> Cube {
        let mut candidate: Vec<Lit> = x
            .lits()
            .iter()
            .copied()
            .filter(|l| initial_core.contains(*l))
            .collect();
        let mut idx = 0;
        while idx < candidate.len() {
            let trial: Vec<Lit> = candidate
                .iter()
                .enumerate()
                .filter_map(|(j, &l)| if j == idx { None } else { Some(l) })
                .collect();
            let mut assumptions = gen_assumptions.to_vec();
            assumptions.extend_from_slice(&trial);
            if let Some(rg) = &self.rg {
                // activation clause: act -> (selector | !trial*)
                let act = self.pool.fresh(VarKind::Activation);
                let mut lits = vec![act.neg(), rg.selector.pos()];
                for &l in &trial {
                    let mapped = rg.prev_map[&l.var()];
                    lits.push(Lit::new(mapped, !l.is_neg()));
                }
                self.solver_g.add_lits(&lits);
                assumptions.push(act.pos());
            }
            let res = self.solver_g.solve_lits(&assumptions);
            if res.is_sat() {
                idx += 1;
            } else {
                candidate = trial
                    .into_iter()
                    .filter(|l| res.core().contains(*l))
                    .collect();
            }
        }
        Cube::new(candidate).expect("subset of a model cube")
    }

    /// Exclusion soundness on small games (debug builds): every state and
    /// input excluded while inside the region must have a control that
    /// keeps the next state within the lazy copy.
    #[cfg(debug_assertions)]
    fn assert_u_invariant(&self) {
        let spec = self.spec;
        let n = spec.states.len() + spec.inputs.len() + spec.controls.len();
        // with reachability-for-computation the exclusion cores may also
        // rest on predecessor constraints, which is exactly why that mode
        // is verdict-only
        if n > 9 || self.cfg.opt_rc || self.cfg.expand_cex || self.cfg.expand_gen {
            return;
        }
        let mut scratch = Vec::new();
        for bits in 0u64..1 << (spec.states.len() + spec.inputs.len()) {
            let sb: Vec<bool> = (0..spec.states.len()).map(|j| bits >> j & 1 != 0).collect();
            let ib: Vec<bool> = (0..spec.inputs.len())
                .map(|j| bits >> (spec.states.len() + j) & 1 != 0)
                .collect();
            let assign = |v: Var| {
                if let Some(j) = spec.states.iter().position(|&x| x == v) {
                    sb[j]
                } else {
                    let j = spec.inputs.iter().position(|&x| x == v).unwrap();
                    ib[j]
                }
            };
            let in_f = self.f.eval(&assign);
            let excluded = self.u_clauses.iter().any(|c| !c.eval(&assign));
            if !(in_f && excluded) {
                continue;
            }
            let some_control_stays = (0u64..1 << spec.controls.len()).any(|cb| {
                let cbits: Vec<bool> =
                    (0..spec.controls.len()).map(|j| cb >> j & 1 != 0).collect();
                let next = spec.step(&sb, &ib, &cbits, &mut scratch);
                self.g.eval(&|v| {
                    let j = spec.states.iter().position(|&x| x == v).unwrap();
                    next[j]
                })
            });
            assert!(
                some_control_stays,
                "excluded state/input pair has no control keeping the lazy copy"
            );
        }
    }

    fn outcome(&mut self, verdict: Verdict, guard: &BudgetGuard) -> WinningOutcome {
        self.stats.sat_calls = self.retired_sat_calls
            + self.solver_c.stats().solve_calls
            + self.solver_g.stats().solve_calls;
        self.stats.time_ms = guard.elapsed_ms();
        let region = match verdict {
            Verdict::Realizable => Some(compress_cnf(&self.f, false)),
            Verdict::Unrealizable => None,
        };
        WinningOutcome {
            verdict,
            region,
            kind: self.cfg.kind(),
            stats: std::mem::take(&mut self.stats),
        }
    }

    fn run(&mut self, bus: &mut dyn ClauseBus) -> Result<WinningOutcome, WinError> {
        let guard = BudgetGuard::new(&self.cfg);
        if !init_satisfies(self.spec, &self.spec.safe) {
            return Ok(self.outcome(Verdict::Unrealizable, &guard));
        }
        loop {
            guard.check(self.stats.refinements)?;
            for c in bus.drain() {
                self.absorb(c);
            }
            let res = self.solver_c.solve(&Cube::empty());
            if !res.is_sat() {
                if self.precise {
                    return Ok(self.outcome(Verdict::Realizable, &guard));
                }
                self.sync();
                continue;
            }
            self.stats.cex_candidates += 1;
            let x = res.model_cube(&self.spec.states);
            let i = res.model_cube(&self.spec.inputs);
            // generalization assumptions: the full input vector, minus the
            // expanded input when the generalization solver quantifies it
            let gen_assumptions: Vec<Lit> = i
                .lits()
                .iter()
                .copied()
                .filter(|l| Some(l.var()) != self.gen_var)
                .collect();
            let mut full = gen_assumptions.clone();
            full.extend_from_slice(x.lits());
            let check = self.solver_g.solve_lits(&full);
            if check.is_sat() {
                // spurious candidate: exclude the (state, input) pair and
                // everything the same control value handles
                let controls = self.control_model_for(&check, &i);
                let mut cube_lits = x.lits().to_vec();
                cube_lits.extend_from_slice(i.lits());
                let cube = Cube::new(cube_lits).expect("disjoint vectors");
                let core = self
                    .solver_c
                    .min_unsat_core(&cube, &controls)
                    .expect("control value leading back into the region");
                let u_clause = core.negate_to_clause();
                self.solver_c.assert_clause(&u_clause);
                self.u_clauses.push(u_clause);
                #[cfg(debug_assertions)]
                self.assert_u_invariant();
            } else {
                // genuine counterexample: generalize and refine
                let initial_core =
                    Cube::new(check.core().lits().iter().copied().filter(|l| x.contains(*l)).collect())
                        .expect("subset of the state cube");
                let x_g = self.generalize(&x, &gen_assumptions, &initial_core);
                if cube_within_init(self.spec, &x_g) {
                    return Ok(self.outcome(Verdict::Unrealizable, &guard));
                }
                self.refine(x_g.negate_to_clause(), bus);
                if !self.cfg.lazy_g {
                    self.sync();
                }
            }
        }
    }

    /// Control values proving the candidate spurious, in terms the
    /// counterexample solver understands.
    fn control_model_for(&self, check: &crate::sat::SolveResult, i: &Cube) -> Cube {
        match &self.exp_gen {
            None => check.model_cube(&self.spec.controls),
            Some((exp, enc)) => {
                // pick the copy covering the expanded input's value in `i`
                let gen_var = self.gen_var.expect("generalization expansion set");
                let val = i.value_of(gen_var).unwrap_or(false);
                let idx = exp
                    .copies
                    .iter()
                    .position(|c| {
                        c.assignments
                            .iter()
                            .any(|a| a.value_of(gen_var) == Some(val))
                    })
                    .unwrap_or(0);
                let dup = &enc.copy_dup_vars[idx];
                Cube::new(
                    self.spec
                        .controls
                        .iter()
                        .map(|c| {
                            let inst = dup.get(c).copied().unwrap_or(*c);
                            c.lit(check.model_value(inst))
                        })
                        .collect(),
                )
                .expect("distinct control variables")
            }
        }
    }
}

/// Advanced SAT-solver-based CNF learning of the winning region.
pub fn sat_win1(spec: &SafetySpec, cfg: &WinConfig) -> Result<WinningOutcome, WinError> {
    sat_win1_shared(spec, cfg, &mut NoSharing)
}

/// Like [`sat_win1`] with a clause-exchange bus for portfolio runs.
pub fn sat_win1_shared(
    spec: &SafetySpec,
    cfg: &WinConfig,
    bus: &mut dyn ClauseBus,
) -> Result<WinningOutcome, WinError> {
    let mut engine = SatWin::new(spec, cfg.clone())?;
    let mut outcome = engine.run(bus)?;
    outcome.stats.provenance = "sat1".to_string();
    Ok(outcome)
}

/// QBF-based CNF learning of the winning region. Counterexamples come from
/// a single two-alternation query; generalization uses the strengthened
/// query that behaves as if the candidate had already been removed.
pub fn qbf_win(spec: &SafetySpec, cfg: &WinConfig) -> Result<WinningOutcome, WinError> {
    qbf_win_shared(spec, cfg, &mut NoSharing)
}

pub fn qbf_win_shared(
    spec: &SafetySpec,
    cfg: &WinConfig,
    bus: &mut dyn ClauseBus,
) -> Result<WinningOutcome, WinError> {
    let guard = BudgetGuard::new(cfg);
    let mut stats = WinStats {
        provenance: "qbf".to_string(),
        ..WinStats::default()
    };
    let mut pool = spec.pool.clone();
    let mut engine = QbfEngine::new(cfg.qbf);
    let prime_map = renaming(&spec.states, &spec.next_states);
    let finish = |verdict: Verdict, f: &CnfFormula, stats: &mut WinStats, guard: &BudgetGuard, engine: &QbfEngine| {
        stats.qbf_calls = engine.stats().solve_calls;
        stats.sat_calls = engine.stats().sat_calls;
        stats.time_ms = guard.elapsed_ms();
        WinningOutcome {
            verdict,
            region: match verdict {
                Verdict::Realizable => Some(compress_cnf(f, false)),
                Verdict::Unrealizable => None,
            },
            kind: cfg.kind(),
            stats: std::mem::take(stats),
        }
    };

    if !init_satisfies(spec, &spec.safe) {
        return Ok(finish(Verdict::Unrealizable, &CnfFormula::truth(), &mut stats, &guard, &engine));
    }
    let mut f = CnfFormula::truth();
    for c in spec.safe.clauses() {
        f.add_clause_with_subsumption(c.clone());
    }
    loop {
        guard.check(stats.refinements)?;
        for c in bus.drain() {
            f.add_clause_with_subsumption(c);
        }
        // counterexample query:
        // exists x,i . forall c . exists x',aux . F & T & !F' (& RC parts)
        let mut matrix = CnfFormula::truth();
        matrix.extend(&f);
        matrix.extend(&spec.trans);
        let f_primed = f.rename(&prime_map).expect("states to next");
        let neg = negate_pg(&f_primed, &mut pool);
        matrix.extend(&neg.cnf);
        let mut block_a: Vec<Var> = spec.states.clone();
        block_a.extend_from_slice(&spec.inputs);
        let mut block_c: Vec<Var> = spec.next_states.clone();
        block_c.extend_from_slice(&spec.trans_aux);
        block_c.extend_from_slice(&neg.aux);
        if cfg.opt_rc {
            let rc = build_prev_copy(spec, &f, true, &mut pool);
            matrix.extend(&rc.base);
            let mut prev_vars: Vec<Var> = rc.base.vars();
            prev_vars.retain(|v| {
                !spec.states.contains(v)
                    && !spec.inputs.contains(v)
                    && !spec.next_states.contains(v)
                    && !spec.controls.contains(v)
                    && !spec.trans_aux.contains(v)
                    && !neg.aux.contains(v)
            });
            block_a.extend(prev_vars);
        }
        let query = TwoQbfQuery::new(block_a, spec.controls.clone(), block_c, matrix)?;
        stats.cex_candidates += 1;
        let outcome = engine.solve(&query, &mut pool)?;
        let x = match outcome {
            QbfOutcome::Unsat => {
                return Ok(finish(Verdict::Realizable, &f, &mut stats, &guard, &engine))
            }
            QbfOutcome::Sat { model_a } => Cube::new(
                model_a
                    .lits()
                    .iter()
                    .copied()
                    .filter(|l| spec.states.contains(&l.var()))
                    .collect(),
            )
            .expect("subset of model"),
        };
        // generalization with the strengthened query
        let mut x_g = x.clone();
        for &lit in x.lits() {
            let Some(idx) = x_g.lits().iter().position(|&m| m == lit) else {
                continue;
            };
            let x_t = x_g.without_index(idx);
            let unsat = qbf_gen_check(spec, cfg, &f, &x_t, &x_g, &mut pool, &mut engine)?;
            if unsat {
                x_g = x_t;
            }
        }
        if cube_within_init(spec, &x_g) {
            return Ok(finish(Verdict::Unrealizable, &f, &mut stats, &guard, &engine));
        }
        let blocking = x_g.negate_to_clause();
        bus.publish(&blocking);
        f.add_clause_with_subsumption(blocking);
        f = compress_cnf(&f, false);
        stats.refinements += 1;
    }
}

/// One generalization check:
/// `exists x [,prev] . forall i . exists c,x',aux .
///  x_t & F & !x_g & T & F' & !x_g' [& RG parts]` must be unsat to drop.
#[allow(clippy::too_many_arguments)]
fn qbf_gen_check(
    spec: &SafetySpec,
    cfg: &WinConfig,
    f: &CnfFormula,
    x_t: &Cube,
    x_g: &Cube,
    pool: &mut VarPool,
    engine: &mut QbfEngine,
) -> Result<bool, WinError> {
    let prime_map = renaming(&spec.states, &spec.next_states);
    let mut matrix = CnfFormula::truth();
    for l in x_t.lits() {
        matrix.push(Clause::unit(*l));
    }
    matrix.extend(f);
    matrix.push(x_g.negate_to_clause());
    matrix.extend(&spec.trans);
    let f_primed = f.rename(&prime_map).expect("states to next");
    matrix.extend(&f_primed);
    matrix.push(
        map_clause_vars(&x_g.negate_to_clause(), &prime_map).expect("state clause maps cleanly"),
    );
    let mut block_a: Vec<Var> = spec.states.clone();
    let mut block_c: Vec<Var> = spec.controls.clone();
    block_c.extend_from_slice(&spec.next_states);
    block_c.extend_from_slice(&spec.trans_aux);
    if cfg.opt_rg {
        let rg = build_prev_copy(spec, f, false, pool);
        matrix.extend(&rg.base);
        // !selector -> !x_t at the previous state
        let mut lits = vec![rg.selector.pos()];
        for l in x_t.lits() {
            lits.push(Lit::new(rg.prev_map[&l.var()], !l.is_neg()));
        }
        matrix.push(Clause::new(lits).expect("fresh prev vars"));
        let mut prev_vars: Vec<Var> = rg.base.vars();
        prev_vars.retain(|v| {
            !spec.states.contains(v)
                && !spec.inputs.contains(v)
                && !spec.controls.contains(v)
                && !spec.next_states.contains(v)
                && !spec.trans_aux.contains(v)
        });
        block_a.extend(prev_vars);
    }
    let query = TwoQbfQuery::new(block_a, spec.inputs.clone(), block_c, matrix)?;
    Ok(!engine.solve(&query, pool)?.is_sat())
}

/// Compute a winning region/area with the backend selected in `cfg`.
pub fn compute_winning(spec: &SafetySpec, cfg: &WinConfig) -> Result<WinningOutcome, WinError> {
    match cfg.backend {
        Backend::Sat1 => sat_win1(spec, cfg),
        Backend::Qbf => qbf_win(spec, cfg),
    }
}

/// Export a winning area as DIMACS with a variable-name comment map.
pub fn export_winning_area(spec: &SafetySpec, outcome: &WinningOutcome) -> String {
    let mut s = String::new();
    s.push_str("c winning-area v1\n");
    s.push_str(&format!(
        "c kind {}\n",
        match outcome.kind {
            RegionKind::WinningRegion => "winning-region",
            RegionKind::WinningArea => "winning-area",
            RegionKind::RealizabilityOnly => "realizability-only",
        }
    ));
    let region = outcome.region.as_ref().expect("export requires a region");
    for v in &spec.states {
        s.push_str(&format!("c var {} {}\n", v.0 + 1, spec.var_name(*v)));
    }
    s.push_str(&region.to_dimacs());
    s
}

/// Read back a winning-area file produced by [`export_winning_area`].
pub fn import_winning_area(spec: &SafetySpec, text: &str) -> Result<CnfFormula, WinError> {
    let mut name_to_var: HashMap<String, Var> = HashMap::new();
    for v in &spec.states {
        name_to_var.insert(spec.var_name(*v), *v);
    }
    let mut dimacs_to_var: HashMap<u32, Var> = HashMap::new();
    let mut clauses = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("c var ") {
            let mut parts = rest.splitn(2, ' ');
            let idx: u32 = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| WinError::BadAreaFile(line.to_string()))?;
            let name = parts
                .next()
                .ok_or_else(|| WinError::BadAreaFile(line.to_string()))?;
            let var = *name_to_var
                .get(name)
                .ok_or_else(|| WinError::BadAreaFile(format!("unknown variable {}", name)))?;
            dimacs_to_var.insert(idx, var);
        } else if line.starts_with('c') || line.starts_with('p') || line.is_empty() {
            continue;
        } else {
            let mut lits = Vec::new();
            for tok in line.split_whitespace() {
                let n: i64 = tok
                    .parse()
                    .map_err(|_| WinError::BadAreaFile(line.to_string()))?;
                if n == 0 {
                    break;
                }
                let var = *dimacs_to_var
                    .get(&(n.unsigned_abs() as u32))
                    .ok_or_else(|| WinError::BadAreaFile(format!("unmapped literal {}", n)))?;
                lits.push(Lit::new(var, n < 0));
            }
            clauses.push(
                Clause::new(lits).ok_or_else(|| WinError::BadAreaFile(line.to_string()))?,
            );
        }
    }
    Ok(CnfFormula::from_clauses(clauses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{gen_benchmark, BenchParams, Family};
    use crate::verify::{check_winning_area, ExplicitGame};

    fn bench_spec(family: Family, k: u32, unreal: bool) -> SafetySpec {
        let p = BenchParams {
            family,
            k,
            unrealizable: unreal,
        };
        SafetySpec::parse_aag(&gen_benchmark(&p).unwrap()).unwrap()
    }

    /// Enumerate whether the region formula accepts exactly the oracle
    /// winning region.
    fn region_equals_oracle(spec: &SafetySpec, region: &CnfFormula) -> bool {
        let game = ExplicitGame::build(spec).unwrap();
        let w = game.attractor();
        (0..game.n_states()).all(|s| game.eval_state_formula(spec, region, s) == w.contains(s))
    }

    fn configs_for_verdict_tests() -> Vec<(String, WinConfig)> {
        let mut out = Vec::new();
        for backend in [Backend::Sat1, Backend::Qbf] {
            for (rg, rc) in [(false, false), (true, false), (true, true)] {
                for (ec, eg) in [(false, false), (true, true)] {
                    if backend == Backend::Qbf && (ec || eg) {
                        continue;
                    }
                    let cfg = WinConfig {
                        backend,
                        opt_rg: rg,
                        opt_rc: rc,
                        expand_cex: ec,
                        expand_gen: eg,
                        ..WinConfig::default()
                    };
                    out.push((format!("{backend:?} rg={rg} rc={rc} exp={ec}/{eg}"), cfg));
                }
            }
        }
        out
    }

    #[test]
    fn trivially_safe_spec_has_true_region() {
        let spec = SafetySpec::parse_aag("aag 1 1 0 1 0\n2\n0\ni0 u\n").unwrap();
        for backend in [Backend::Sat1, Backend::Qbf] {
            let cfg = WinConfig {
                backend,
                ..WinConfig::default()
            };
            let out = compute_winning(&spec, &cfg).unwrap();
            assert_eq!(out.verdict, Verdict::Realizable);
            let region = out.region.unwrap();
            assert!(region_equals_oracle(&spec, &region));
            if backend == Backend::Sat1 {
                assert_eq!(out.stats.refinements, 0);
            }
        }
    }

    #[test]
    fn unsafe_initial_state_is_unrealizable_before_any_solving() {
        // force the safe set to exclude the initial state
        let mut spec = SafetySpec::parse_aag(crate::aig::tests::tiny_spec_text()).unwrap();
        spec.safe = CnfFormula::from_clauses(vec![Clause::unit(spec.error_latch.pos())]);
        for backend in [Backend::Sat1, Backend::Qbf] {
            let out = compute_winning(
                &spec,
                &WinConfig {
                    backend,
                    ..WinConfig::default()
                },
            )
            .unwrap();
            assert_eq!(out.verdict, Verdict::Unrealizable);
            assert_eq!(out.stats.refinements, 0);
            assert_eq!(out.stats.cex_candidates, 0);
        }
    }

    #[test]
    fn verdicts_agree_with_oracle_across_configs() {
        let cases = [
            (Family::Cnt, 3, false),
            (Family::Cnt, 3, true),
            (Family::Cnt, 4, false),
            (Family::Mv, 3, false),
            (Family::Mv, 3, true),
            (Family::Add, 2, false),
            (Family::Add, 2, true),
        ];
        for (family, k, unreal) in cases {
            let spec = bench_spec(family, k, unreal);
            let oracle = ExplicitGame::build(&spec).unwrap().realizable();
            for (name, cfg) in configs_for_verdict_tests() {
                let out = compute_winning(&spec, &cfg).unwrap();
                assert_eq!(
                    out.verdict == Verdict::Realizable,
                    oracle,
                    "{family:?}_{k} unreal={unreal} with {name}"
                );
            }
        }
    }

    #[test]
    fn exact_region_without_reachability_opts() {
        for (family, k) in [(Family::Cnt, 4), (Family::Mv, 3), (Family::Bs, 8)] {
            let spec = bench_spec(family, k, false);
            for backend in [Backend::Sat1, Backend::Qbf] {
                let cfg = WinConfig {
                    backend,
                    ..WinConfig::default()
                };
                let out = compute_winning(&spec, &cfg).unwrap();
                assert_eq!(out.verdict, Verdict::Realizable);
                assert_eq!(out.kind, RegionKind::WinningRegion);
                let region = out.region.unwrap();
                assert!(
                    region_equals_oracle(&spec, &region),
                    "{family:?}_{k} {backend:?}"
                );
            }
        }
    }

    #[test]
    fn expanded_and_unexpanded_regions_agree() {
        let spec = bench_spec(Family::Cnt, 6, false);
        let plain = compute_winning(&spec, &WinConfig::default()).unwrap();
        let expanded = compute_winning(
            &spec,
            &WinConfig {
                expand_cex: true,
                expand_gen: true,
                ..WinConfig::default()
            },
        )
        .unwrap();
        let a = plain.region.unwrap();
        let b = expanded.region.unwrap();
        assert!(region_equals_oracle(&spec, &a));
        assert!(region_equals_oracle(&spec, &b));
    }

    #[test]
    fn rg_produces_certified_winning_area() {
        let spec = crate::verify::tests::unreachable_corner_spec();
        let cfg = WinConfig {
            opt_rg: true,
            ..WinConfig::default()
        };
        let out = compute_winning(&spec, &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Realizable);
        assert_eq!(out.kind, RegionKind::WinningArea);
        let area = out.region.unwrap();
        let report = check_winning_area(&spec, &area).unwrap();
        assert!(report.all_pass(), "{}", report.to_text());
        // area is a subset of the oracle region
        let game = ExplicitGame::build(&spec).unwrap();
        let w = game.attractor();
        for s in 0..game.n_states() {
            if game.eval_state_formula(&spec, &area, s) {
                assert!(w.contains(s));
            }
        }
    }

    #[test]
    fn rg_drops_more_literals_on_unreachable_corner() {
        // With relative inductiveness the unreachable corner state gets
        // folded into the first blocking clause, shrinking the final area.
        let spec = crate::verify::tests::unreachable_corner_spec();
        let plain = compute_winning(&spec, &WinConfig::default())
            .unwrap()
            .region
            .unwrap();
        let rg = compute_winning(
            &spec,
            &WinConfig {
                opt_rg: true,
                ..WinConfig::default()
            },
        )
        .unwrap()
        .region
        .unwrap();
        let game = ExplicitGame::build(&spec).unwrap();
        let count = |f: &CnfFormula| {
            (0..game.n_states())
                .filter(|&s| game.eval_state_formula(&spec, f, s))
                .count()
        };
        assert_eq!(count(&plain), 3, "full region has three states");
        assert!(
            count(&rg) < count(&plain),
            "reachability generalization must prune the unreachable corner"
        );
    }

    #[test]
    fn rc_preserves_verdicts() {
        for unreal in [false, true] {
            let spec = bench_spec(Family::Cnt, 4, unreal);
            let cfg = WinConfig {
                opt_rc: true,
                ..WinConfig::default()
            };
            let out = compute_winning(&spec, &cfg).unwrap();
            assert_eq!(
                out.verdict == Verdict::Realizable,
                !unreal,
                "unreal={unreal}"
            );
            assert_eq!(out.kind, RegionKind::RealizabilityOnly);
        }
    }

    #[test]
    fn eager_reset_matches_lazy_semantics() {
        let spec = bench_spec(Family::Cnt, 4, false);
        let lazy = compute_winning(&spec, &WinConfig::default()).unwrap();
        let eager = compute_winning(
            &spec,
            &WinConfig {
                lazy_g: false,
                ..WinConfig::default()
            },
        )
        .unwrap();
        assert_eq!(lazy.verdict, eager.verdict);
        assert!(region_equals_oracle(&spec, &lazy.region.unwrap()));
        assert!(region_equals_oracle(&spec, &eager.region.unwrap()));
    }

    #[test]
    fn expansion_budget_falls_back_to_unexpanded() {
        let spec = bench_spec(Family::Cnt, 4, false);
        let cfg = WinConfig {
            expand_cex: true,
            expand_gen: true,
            expansion_node_budget: 1, // forces the fallback
            ..WinConfig::default()
        };
        let out = compute_winning(&spec, &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Realizable);
        assert!(region_equals_oracle(&spec, &out.region.unwrap()));
    }

    #[test]
    fn forced_generalization_solver_resets_preserve_results() {
        let spec = bench_spec(Family::Cnt, 5, false);
        let cfg = WinConfig {
            opt_rg: true,
            solver_g_reset_excess: 0,
            ..WinConfig::default()
        };
        let out = compute_winning(&spec, &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Realizable);
        let report =
            crate::verify::check_winning_area(&spec, &out.region.unwrap()).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn refinement_budget_is_enforced() {
        let spec = bench_spec(Family::Cnt, 6, false);
        let cfg = WinConfig {
            max_refinements: 3,
            ..WinConfig::default()
        };
        assert!(matches!(
            compute_winning(&spec, &cfg),
            Err(WinError::BudgetExceeded(3))
        ));
    }

    #[test]
    fn cnt_refinement_counts_track_region_size() {
        // halving structure: refinements roughly double with k
        let mut counts = Vec::new();
        for k in 4..=6 {
            let spec = bench_spec(Family::Cnt, k, false);
            let out = compute_winning(&spec, &WinConfig::default()).unwrap();
            counts.push(out.stats.refinements);
            let lo = 1u64 << (k - 2);
            let hi = 1u64 << k;
            assert!(
                (lo..=hi).contains(&out.stats.refinements),
                "k={k}: {} not in [{lo}, {hi}]",
                out.stats.refinements
            );
        }
        for w in counts.windows(2) {
            let ratio = w[1] as f64 / w[0] as f64;
            assert!((1.5..=3.0).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn export_import_round_trip() {
        let spec = bench_spec(Family::Cnt, 3, false);
        let out = compute_winning(&spec, &WinConfig::default()).unwrap();
        let text = export_winning_area(&spec, &out);
        let back = import_winning_area(&spec, &text).unwrap();
        assert_eq!(out.region.unwrap(), back);
    }
}
