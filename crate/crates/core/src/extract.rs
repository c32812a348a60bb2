//! Circuit extraction: turn a specification plus a winning area into
//! combinational definitions for every controllable input.
//!
//! The primary engine interpolates between "must be true" and "must be
//! false" constraint pairs by CNF learning with a SAT solver, optionally
//! widening each signal's allowed support through dependency analysis and
//! shrinking the final solutions by literal and clause dropping. An
//! alternative engine learns each signal with 2QBF queries, quantifying the
//! not-yet-synthesized controls universally.

pub use crate::aig::ControllerCircuit;

use std::collections::{HashMap, HashSet};
use std::sync::atomic::Ordering;
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::aig::{AigBuilder, SafetySpec};
use crate::cnf::{
    compress_cnf, negate_pg, renaming, Clause, CnfFormula, Cube, Lit, Var, VarKind, VarPool,
};
use crate::qbf::{QbfConfig, QbfEngine, QbfError, QbfOutcome, TwoQbfQuery};
use crate::sat::SatSession;
use crate::verify::check_winning_area;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("the provided formula is not a winning area:\n{0}")]
    CertificateFailed(String),
    #[error("interpolation precondition violated: the constraint pair is satisfiable together")]
    InterpolPrecondition,
    #[error("control/auxiliary dependency graph has a cycle involving {0:?}")]
    CyclicDependency(Var),
    #[error("time limit of {0} ms exceeded")]
    TimeLimit(u64),
    #[error("cancelled")]
    Cancelled,
    #[error(transparent)]
    Qbf(#[from] QbfError),
    #[error(transparent)]
    Verify(#[from] crate::verify::VerifyError),
}

/// Which signal to synthesize first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum ControlOrder {
    /// Last declared control first.
    #[default]
    Descending,
    Ascending,
    Custom(Vec<Var>),
}

#[derive(Debug, Clone)]
#[derive(Default)]
pub struct ExtractConfig {
    /// Widen each signal's allowed support with solved controls and
    /// transition auxiliaries that do not depend on it.
    pub dep_opt: bool,
    /// Post-pass dropping literals and clauses from the solutions while
    /// correctness is preserved.
    pub minimize: bool,
    pub order: ControlOrder,
    pub seed: u64,
    pub qbf: QbfConfig,
    pub time_limit_ms: Option<u64>,
    pub cancel: Option<Arc<std::sync::atomic::AtomicBool>>,
}


#[derive(Debug, Default, Clone)]
pub struct ExtractStats {
    pub interpolation_cex: u64,
    pub sat_calls: u64,
    pub qbf_calls: u64,
    pub gates: usize,
    pub time_ms: u64,
    pub literals_before_minimize: usize,
    pub literals_after_minimize: usize,
}

/// One synthesized control signal: its solution CNF and the variables it
/// was allowed to mention.
#[derive(Debug, Clone)]
struct Solution {
    control: Var,
    formula: CnfFormula,
}

/// Shared bookkeeping of the extraction cascade: the refined transition
/// relation, solved/unsolved control groups and dependency masks.
pub struct ExtractionState<'a> {
    pub spec: &'a SafetySpec,
    pub area: CnfFormula,
    pub order: Vec<Var>,
    /// T refined with `c_k <-> F_k` for every solved control.
    t_prime: CnfFormula,
    solutions: Vec<Solution>,
    /// Which original controls each variable transitively depends on
    /// (bit = position in `spec.controls`).
    deps: HashMap<Var, u64>,
    pool: VarPool,
    cfg: ExtractConfig,
    stats: ExtractStats,
    started: Instant,
}

fn order_controls(spec: &SafetySpec, order: &ControlOrder) -> Vec<Var> {
    match order {
        ControlOrder::Descending => spec.controls.iter().rev().copied().collect(),
        ControlOrder::Ascending => spec.controls.to_vec(),
        ControlOrder::Custom(vs) => vs.clone(),
    }
}

impl<'a> ExtractionState<'a> {
    pub fn new(
        spec: &'a SafetySpec,
        area: &CnfFormula,
        cfg: ExtractConfig,
    ) -> Result<ExtractionState<'a>, ExtractError> {
        let report = check_winning_area(spec, area)?;
        if !report.all_pass() {
            return Err(ExtractError::CertificateFailed(report.to_text()));
        }
        // smaller solutions start from a literal-minimal area
        let area = compress_cnf(area, true);
        let mut deps: HashMap<Var, u64> = HashMap::new();
        for (i, c) in spec.controls.iter().enumerate() {
            deps.insert(*c, 1u64 << i.min(63));
        }
        for (aux, la, lb) in &spec.trans_aux_defs {
            let d = deps.get(&la.var()).copied().unwrap_or(0)
                | deps.get(&lb.var()).copied().unwrap_or(0);
            deps.insert(*aux, d);
        }
        let order = order_controls(spec, &cfg.order);
        Ok(ExtractionState {
            spec,
            area,
            order,
            t_prime: spec.trans.clone(),
            solutions: Vec::new(),
            deps,
            pool: spec.pool.clone(),
            cfg,
            stats: ExtractStats::default(),
            started: Instant::now(),
        })
    }

    fn check_limits(&self) -> Result<(), ExtractError> {
        if let Some(limit) = self.cfg.time_limit_ms {
            if self.started.elapsed().as_millis() as u64 > limit {
                return Err(ExtractError::TimeLimit(limit));
            }
        }
        if let Some(cancel) = &self.cfg.cancel {
            if cancel.load(Ordering::Relaxed) {
                return Err(ExtractError::Cancelled);
            }
        }
        Ok(())
    }

    fn control_bit(&self, c: Var) -> u64 {
        let i = self
            .spec
            .controls
            .iter()
            .position(|&x| x == c)
            .expect("control variable");
        1u64 << i.min(63)
    }

    /// The variables the solution for `c_j` may mention: states, inputs,
    /// unsolved controls, and (with the dependency optimization) solved
    /// controls and transition auxiliaries that do not depend on `c_j`.
    fn allowed_support(&self, c_j: Var, solved: &HashSet<Var>) -> HashSet<Var> {
        let bit = self.control_bit(c_j);
        let mut shared: HashSet<Var> = self.spec.states.iter().copied().collect();
        shared.extend(self.spec.inputs.iter().copied());
        for c in &self.spec.controls {
            if *c != c_j && !solved.contains(c) {
                shared.insert(*c);
            }
        }
        if self.cfg.dep_opt {
            for sol in &self.solutions {
                if self.deps[&sol.control] & bit == 0 {
                    shared.insert(sol.control);
                }
            }
            for (aux, _, _) in &self.spec.trans_aux_defs {
                if self.deps[aux] & bit == 0 {
                    shared.insert(*aux);
                }
            }
        }
        shared
    }

    /// One side of the constraint pair: `T'(c_j = value)` with every
    /// non-shared variable freshly renamed, conjoined with the area at the
    /// copy's next state (plain or negated).
    fn t_copy(
        &mut self,
        c_j: Var,
        value: bool,
        shared: &HashSet<Var>,
    ) -> (CnfFormula, HashMap<Var, Var>) {
        let cube = Cube::new(vec![c_j.lit(value)]).unwrap();
        let restricted = self.t_prime.restrict(&cube);
        let mut map: HashMap<Var, Var> = HashMap::new();
        for v in restricted.vars() {
            if !shared.contains(&v) {
                map.insert(v, self.pool.fresh(self.pool.kind(v)));
            }
        }
        // next states may be constant-defined and missing from vars()
        for v in &self.spec.next_states {
            map.entry(*v).or_insert_with(|| self.pool.fresh(VarKind::NextState));
        }
        let renamed = restricted.rename(&map).expect("fresh images");
        (renamed, map)
    }

    fn area_at_copy(&self, map: &HashMap<Var, Var>) -> CnfFormula {
        let state_map: HashMap<Var, Var> = self
            .spec
            .states
            .iter()
            .zip(&self.spec.next_states)
            .map(|(s, n)| (*s, map[n]))
            .collect();
        self.area.rename(&state_map).expect("fresh next-state copies")
    }

    /// Build the "must be true" / "must be false" pair for `c_j`:
    /// `M1 = T'(c_j=1) & W' & T'(c_j=0) & W & !W'` (two fresh copies) and
    /// symmetrically `M0`. Both are asserted to be jointly unsatisfiable.
    pub fn build_m1_m0(
        &mut self,
        c_j: Var,
        shared: &HashSet<Var>,
    ) -> Result<(CnfFormula, CnfFormula), ExtractError> {
        let build_side = |state: &mut Self, good: bool| -> CnfFormula {
            let mut side = CnfFormula::truth();
            // copy where c_j = good leads back into the area
            let (t_good, map_good) = state.t_copy(c_j, good, shared);
            side.extend(&t_good);
            side.extend(&state.area_at_copy(&map_good));
            // copy where c_j = !good escapes the area
            let (t_bad, map_bad) = state.t_copy(c_j, !good, shared);
            side.extend(&t_bad);
            side.extend(&state.area.clone());
            let area_bad = state.area_at_copy(&map_bad);
            let neg = negate_pg(&area_bad, &mut state.pool);
            side.extend(&neg.cnf);
            side
        };
        let m1 = build_side(self, true);
        let m0 = build_side(self, false);
        // the pair must be contradictory
        let mut both = SatSession::with_seed(self.cfg.seed);
        both.assert_formula(&m1);
        both.assert_formula(&m0);
        if both.solve(&Cube::empty()).is_sat() {
            return Err(ExtractError::InterpolPrecondition);
        }
        Ok((m1, m0))
    }

    /// Refine the transition relation with `c_j <-> F_j` and record the
    /// solution's dependency mask.
    fn resubstitute(&mut self, c_j: Var, f_j: CnfFormula) {
        let mut dep = self.control_bit(c_j);
        for v in f_j.vars() {
            dep |= self.deps.get(&v).copied().unwrap_or(0);
        }
        self.deps.insert(c_j, dep);
        append_definition(&mut self.t_prime, c_j, &f_j, &mut self.pool, &mut self.deps, dep);
        self.solutions.push(Solution {
            control: c_j,
            formula: f_j,
        });
    }
}

/// Append CNF clauses for `c <-> f` (with one-sided auxiliaries for the
/// backward implication) and tag the auxiliaries with the dependency mask.
fn append_definition(
    t_prime: &mut CnfFormula,
    c: Var,
    f: &CnfFormula,
    pool: &mut VarPool,
    deps: &mut HashMap<Var, u64>,
    dep_mask: u64,
) {
    if f.has_empty_clause() {
        t_prime.push(Clause::unit(c.neg()));
        return;
    }
    if f.is_true() {
        t_prime.push(Clause::unit(c.pos()));
        return;
    }
    for clause in f.clauses() {
        let mut lits = vec![c.neg()];
        lits.extend_from_slice(clause.lits());
        if let Some(cl) = Clause::new(lits) {
            t_prime.push(cl);
        }
    }
    let mut back = vec![c.pos()];
    for clause in f.clauses() {
        if clause.len() == 1 {
            back.push(clause.lits()[0].negate());
        } else {
            let n = pool.fresh(VarKind::Aux);
            deps.insert(n, dep_mask);
            for &l in clause.lits() {
                t_prime.push(Clause::new(vec![n.neg(), l.negate()]).unwrap());
            }
            back.push(n.pos());
        }
    }
    if let Some(cl) = Clause::new(back) {
        t_prime.push(cl);
    }
}

/// Compute an interpolant between `m1` and `m0` over the shared variables
/// `d` by CNF learning: while the candidate still intersects `m0`, block a
/// minimal core of the witness with respect to `m1`.
pub fn cnf_interpol(
    m1: &CnfFormula,
    m0: &CnfFormula,
    d: &[Var],
    seed: u64,
    stats: &mut ExtractStats,
) -> Result<CnfFormula, ExtractError> {
    let mut check_sess = SatSession::with_seed(seed);
    check_sess.assert_formula(m0);
    let mut gen_sess = SatSession::with_seed(seed);
    gen_sess.assert_formula(m1);
    let mut f = CnfFormula::truth();
    loop {
        let res = check_sess.solve(&Cube::empty());
        if !res.is_sat() {
            stats.sat_calls += check_sess.stats().solve_calls + gen_sess.stats().solve_calls;
            return Ok(f);
        }
        stats.interpolation_cex += 1;
        let witness = res.model_cube(d);
        let core = gen_sess
            .min_unsat_core(&witness, &Cube::empty())
            .map_err(|_| ExtractError::InterpolPrecondition)?;
        let clause = core.negate_to_clause();
        check_sess.assert_clause(&clause);
        f.add_clause_with_subsumption(clause);
    }
}

/// Verify `m1 -> f` and `f -> !m0` with two unsatisfiability checks.
fn verify_interpolant(
    m1: &CnfFormula,
    m0: &CnfFormula,
    f: &CnfFormula,
    pool: &mut VarPool,
    seed: u64,
) -> bool {
    let mut s = SatSession::with_seed(seed);
    s.assert_formula(m1);
    let neg = negate_pg(f, pool);
    s.assert_formula(&neg.cnf);
    if s.solve(&Cube::empty()).is_sat() {
        return false;
    }
    let mut s = SatSession::with_seed(seed);
    s.assert_formula(m0);
    s.assert_formula(f);
    !s.solve(&Cube::empty()).is_sat()
}

/// Interpolation-based extraction: per control (descending by default),
/// interpolate between the constraint pair over the allowed support,
/// verify, resubstitute; optionally minimize all solutions afterwards; then
/// inline the cascade into a controller circuit.
pub fn extract_sat_learn(
    spec: &SafetySpec,
    area: &CnfFormula,
    cfg: &ExtractConfig,
) -> Result<(ControllerCircuit, ExtractStats), ExtractError> {
    let mut state = ExtractionState::new(spec, area, cfg.clone())?;
    let mut solved: HashSet<Var> = HashSet::new();
    for c_j in state.order.clone() {
        state.check_limits()?;
        let shared = state.allowed_support(c_j, &solved);
        let (m1, m0) = state.build_m1_m0(c_j, &shared)?;
        let mut d: Vec<Var> = shared.iter().copied().collect();
        d.sort_unstable();
        let mut stats = std::mem::take(&mut state.stats);
        let f_j = cnf_interpol(&m1, &m0, &d, state.cfg.seed, &mut stats)?;
        state.stats = stats;
        if !verify_interpolant(&m1, &m0, &f_j, &mut state.pool, state.cfg.seed) {
            return Err(ExtractError::InterpolPrecondition);
        }
        state.resubstitute(c_j, f_j);
        solved.insert(c_j);
    }
    if cfg.minimize {
        minimize_solutions(&mut state)?;
    }
    let circuit = inline_cascade(&state)?;
    let mut stats = state.stats;
    stats.gates = circuit.gate_count();
    stats.time_ms = state.started.elapsed().as_millis() as u64;
    Ok((circuit, stats))
}

/// Post-pass in solve order: rebuild the constraint pair for each control
/// against the fixed other solutions, drop literals while `m1 -> F_j`
/// holds, then drop clauses (longest first) while `F_j -> !m0` holds. The
/// total literal count never grows.
fn minimize_solutions(state: &mut ExtractionState) -> Result<(), ExtractError> {
    let before: usize = state
        .solutions
        .iter()
        .map(|s| s.formula.literal_count())
        .sum();
    state.stats.literals_before_minimize = before;
    for idx in 0..state.solutions.len() {
        state.check_limits()?;
        let c_j = state.solutions[idx].control;
        // transition refined with every other solution, exactly as solved
        let mut t_fix = state.spec.trans.clone();
        let mut scratch_deps = state.deps.clone();
        for (k, sol) in state.solutions.iter().enumerate() {
            if k != idx {
                let mask = state.deps[&sol.control];
                append_definition(
                    &mut t_fix,
                    sol.control,
                    &sol.formula,
                    &mut state.pool,
                    &mut scratch_deps,
                    mask,
                );
            }
        }
        let saved_t = std::mem::replace(&mut state.t_prime, t_fix);
        let shared: HashSet<Var> = state.solutions[idx].formula.vars().into_iter().collect();
        let mut shared_all: HashSet<Var> = state.spec.states.iter().copied().collect();
        shared_all.extend(state.spec.inputs.iter().copied());
        shared_all.extend(shared);
        shared_all.remove(&c_j);
        let (m1, m0) = state.build_m1_m0(c_j, &shared_all)?;
        state.t_prime = saved_t;

        let f_j = state.solutions[idx].formula.clone();
        // phase 1: shrink each clause to a minimal consequence of m1
        let mut m1_sess = SatSession::with_seed(state.cfg.seed);
        m1_sess.assert_formula(&m1);
        let mut shrunk: Vec<Clause> = Vec::with_capacity(f_j.len());
        for c in f_j.clauses() {
            let core = m1_sess
                .min_unsat_core(&c.negate_to_cube(), &Cube::empty())
                .map_err(|_| ExtractError::InterpolPrecondition)?;
            shrunk.push(core.negate_to_clause());
        }
        // phase 2: drop clauses longest-first while m0 & F_j stays unsat
        let mut m0_sess = SatSession::with_seed(state.cfg.seed);
        m0_sess.assert_formula(&m0);
        let mut act: Vec<(Var, Clause)> = Vec::new();
        for c in &shrunk {
            let a = state.pool.fresh(VarKind::Activation);
            let mut lits = vec![a.pos()];
            lits.extend_from_slice(c.lits());
            m0_sess.add_lits(&lits);
            act.push((a, c.clone()));
        }
        let mut kept: Vec<bool> = vec![true; act.len()];
        let mut order: Vec<usize> = (0..act.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(act[i].1.len()));
        for &i in &order {
            kept[i] = false;
            let assumptions: Vec<Lit> = act
                .iter()
                .enumerate()
                .filter(|&(k, _)| kept[k])
                .map(|(_, (a, _))| a.neg())
                .collect();
            if m0_sess.solve_lits(&assumptions).is_sat() {
                kept[i] = true; // still needed
            }
        }
        let mut minimized = CnfFormula::truth();
        for (i, (_, c)) in act.into_iter().enumerate() {
            if kept[i] {
                minimized.add_clause_with_subsumption(c);
            }
        }
        debug_assert!(minimized.literal_count() <= state.solutions[idx].formula.literal_count());
        state.solutions[idx].formula = minimized;
    }
    let after: usize = state
        .solutions
        .iter()
        .map(|s| s.formula.literal_count())
        .sum();
    state.stats.literals_after_minimize = after;
    debug_assert!(after <= before);
    Ok(())
}

/// Map every solution into a shared structurally hashed gate list, inlining
/// transition auxiliaries and control-to-control references. Detects
/// dependency cycles.
fn inline_cascade(state: &ExtractionState) -> Result<ControllerCircuit, ExtractError> {
    let spec = state.spec;
    let n_states = spec.states.len();
    let mut builder = AigBuilder::new(n_states + spec.inputs.len());
    let mut lit_cache: HashMap<Var, u32> = HashMap::new();
    for (j, s) in spec.states.iter().enumerate() {
        lit_cache.insert(*s, builder.leaf(j));
    }
    for (k, v) in spec.inputs.iter().enumerate() {
        lit_cache.insert(*v, builder.leaf(n_states + k));
    }
    let aux_defs: HashMap<Var, (Lit, Lit)> = spec
        .trans_aux_defs
        .iter()
        .map(|(v, a, b)| (*v, (*a, *b)))
        .collect();
    let solution_of: HashMap<Var, &CnfFormula> = state
        .solutions
        .iter()
        .map(|s| (s.control, &s.formula))
        .collect();

    fn lit_of(
        v: Var,
        builder: &mut AigBuilder,
        cache: &mut HashMap<Var, u32>,
        on_stack: &mut HashSet<Var>,
        aux_defs: &HashMap<Var, (Lit, Lit)>,
        solutions: &HashMap<Var, &CnfFormula>,
    ) -> Result<u32, ExtractError> {
        if let Some(&l) = cache.get(&v) {
            return Ok(l);
        }
        if !on_stack.insert(v) {
            return Err(ExtractError::CyclicDependency(v));
        }
        let lit = if let Some((la, lb)) = aux_defs.get(&v).copied() {
            let a = signed(la, builder, cache, on_stack, aux_defs, solutions)?;
            let b = signed(lb, builder, cache, on_stack, aux_defs, solutions)?;
            builder.and(a, b)
        } else if let Some(f) = solutions.get(&v).copied() {
            let mut clause_lits = Vec::with_capacity(f.len());
            for c in f.clauses() {
                let mut disj = Vec::with_capacity(c.len());
                for &l in c.lits() {
                    disj.push(signed(l, builder, cache, on_stack, aux_defs, solutions)?);
                }
                clause_lits.push(builder.or_many(&disj));
            }
            builder.and_many(&clause_lits)
        } else {
            return Err(ExtractError::CyclicDependency(v));
        };
        on_stack.remove(&v);
        cache.insert(v, lit);
        Ok(lit)
    }

    fn signed(
        l: Lit,
        builder: &mut AigBuilder,
        cache: &mut HashMap<Var, u32>,
        on_stack: &mut HashSet<Var>,
        aux_defs: &HashMap<Var, (Lit, Lit)>,
        solutions: &HashMap<Var, &CnfFormula>,
    ) -> Result<u32, ExtractError> {
        let base = lit_of(l.var(), builder, cache, on_stack, aux_defs, solutions)?;
        Ok(if l.is_neg() {
            AigBuilder::not(base)
        } else {
            base
        })
    }

    let mut outputs = Vec::with_capacity(spec.controls.len());
    for c in &spec.controls {
        let mut on_stack = HashSet::new();
        let l = lit_of(
            *c,
            &mut builder,
            &mut lit_cache,
            &mut on_stack,
            &aux_defs,
            &solution_of,
        )?;
        outputs.push((*c, l));
    }
    Ok(ControllerCircuit {
        states: spec.states.clone(),
        inputs: spec.inputs.clone(),
        builder,
        outputs,
    })
}

/// Turn per-control CNF definitions into a controller circuit (clause =
/// inverted and of inverted literals), with structural hashing and constant
/// propagation.
pub fn dump_circuit(
    spec: &SafetySpec,
    formulas: &[(Var, CnfFormula)],
) -> Result<ControllerCircuit, ExtractError> {
    let n_states = spec.states.len();
    let mut builder = AigBuilder::new(n_states + spec.inputs.len());
    let mut cache: HashMap<Var, u32> = HashMap::new();
    for (j, s) in spec.states.iter().enumerate() {
        cache.insert(*s, builder.leaf(j));
    }
    for (k, v) in spec.inputs.iter().enumerate() {
        cache.insert(*v, builder.leaf(n_states + k));
    }
    let mut outputs = Vec::with_capacity(formulas.len());
    for (c, f) in formulas {
        let mut clause_lits = Vec::with_capacity(f.len());
        for clause in f.clauses() {
            let mut disj = Vec::with_capacity(clause.len());
            for &l in clause.lits() {
                let base = *cache
                    .get(&l.var())
                    .ok_or(ExtractError::CyclicDependency(l.var()))?;
                disj.push(if l.is_neg() {
                    AigBuilder::not(base)
                } else {
                    base
                });
            }
            clause_lits.push(builder.or_many(&disj));
        }
        let out = builder.and_many(&clause_lits);
        cache.insert(*c, out);
        outputs.push((*c, out));
    }
    Ok(ControllerCircuit {
        states: spec.states.clone(),
        inputs: spec.inputs.clone(),
        builder,
        outputs,
    })
}

/// QBF-learning extraction: controls in ascending order; the
/// not-yet-synthesized controls are quantified universally, the solved ones
/// are determined by the refined transition relation. Solutions range over
/// states and inputs only.
pub fn extract_qbf_learn(
    spec: &SafetySpec,
    area: &CnfFormula,
    cfg: &ExtractConfig,
) -> Result<(ControllerCircuit, ExtractStats), ExtractError> {
    let report = check_winning_area(spec, area)?;
    if !report.all_pass() {
        return Err(ExtractError::CertificateFailed(report.to_text()));
    }
    let area = compress_cnf(area, true);
    let started = Instant::now();
    let mut stats = ExtractStats::default();
    let mut pool = spec.pool.clone();
    let mut engine = QbfEngine::new(cfg.qbf);
    let mut t_prime = spec.trans.clone();
    let prime_map = renaming(&spec.states, &spec.next_states);
    let area_next = area.rename(&prime_map).expect("states to next");
    let mut solutions: Vec<(Var, CnfFormula)> = Vec::new();
    let check_limits = |started: &Instant| -> Result<(), ExtractError> {
        if let Some(limit) = cfg.time_limit_ms {
            if started.elapsed().as_millis() as u64 > limit {
                return Err(ExtractError::TimeLimit(limit));
            }
        }
        if let Some(cancel) = &cfg.cancel {
            if cancel.load(Ordering::Relaxed) {
                return Err(ExtractError::Cancelled);
            }
        }
        Ok(())
    };

    let mut d_vars: Vec<Var> = spec.states.clone();
    d_vars.extend_from_slice(&spec.inputs);
    for (pos, &c_j) in spec.controls.iter().enumerate() {
        let unsolved: Vec<Var> = spec.controls[pos + 1..].to_vec();
        // matrix pieces for "c_j = value escapes the area"
        let side_matrix = |value: bool, pool: &mut VarPool| -> (CnfFormula, Vec<Var>) {
            let cube = Cube::new(vec![c_j.lit(value)]).unwrap();
            let mut m = t_prime.restrict(&cube);
            m.extend(&area);
            let neg = negate_pg(&area_next, pool);
            m.extend(&neg.cnf);
            (m, neg.aux)
        };
        let mut f_j = CnfFormula::truth();
        loop {
            check_limits(&started)?;
            // counterexample: F_j & M0 satisfiable for some (x, i)?
            let (m0, aux0) = side_matrix(true, &mut pool);
            let mut matrix = f_j.clone();
            matrix.extend(&m0);
            let mut block_c: Vec<Var> = solutions.iter().map(|&(c, _)| c).collect();
            block_c.extend(t_prime_aux_vars(spec, &t_prime));
            block_c.extend_from_slice(&spec.next_states);
            block_c.extend(aux0);
            block_c.retain(|v| *v != c_j && !unsolved.contains(v));
            let query =
                TwoQbfQuery::new(d_vars.clone(), unsolved.clone(), block_c, matrix)?;
            let outcome = engine.solve(&query, &mut pool)?;
            let QbfOutcome::Sat { model_a } = outcome else {
                break;
            };
            stats.interpolation_cex += 1;
            // generalize against M1 (c_j = false escapes)
            let mut d_g: Vec<Lit> = model_a.lits().to_vec();
            let mut idx = 0;
            while idx < d_g.len() {
                let trial: Vec<Lit> = d_g
                    .iter()
                    .enumerate()
                    .filter_map(|(k, &l)| if k == idx { None } else { Some(l) })
                    .collect();
                let (m1, aux1) = side_matrix(false, &mut pool);
                let mut matrix = CnfFormula::truth();
                for &l in &trial {
                    matrix.push(Clause::unit(l));
                }
                matrix.extend(&m1);
                let mut block_c: Vec<Var> = solutions.iter().map(|&(c, _)| c).collect();
                block_c.extend(t_prime_aux_vars(spec, &t_prime));
                block_c.extend_from_slice(&spec.next_states);
                block_c.extend(aux1);
                block_c.retain(|v| *v != c_j && !unsolved.contains(v));
                let query =
                    TwoQbfQuery::new(d_vars.clone(), unsolved.clone(), block_c, matrix)?;
                if engine.solve(&query, &mut pool)?.is_sat() {
                    idx += 1;
                } else {
                    d_g = trial;
                }
            }
            let blocking = Cube::new(d_g).expect("subset of a model").negate_to_clause();
            f_j.add_clause_with_subsumption(blocking);
        }
        // resubstitute and move on
        let mut scratch = HashMap::new();
        append_definition(&mut t_prime, c_j, &f_j, &mut pool, &mut scratch, 0);
        solutions.push((c_j, f_j));
    }
    stats.qbf_calls = engine.stats().solve_calls;
    stats.sat_calls = engine.stats().sat_calls;
    let circuit = dump_circuit(spec, &solutions)?;
    stats.gates = circuit.gate_count();
    stats.time_ms = started.elapsed().as_millis() as u64;
    Ok((circuit, stats))
}

/// Every auxiliary mentioned by the refined transition relation.
fn t_prime_aux_vars(spec: &SafetySpec, t_prime: &CnfFormula) -> Vec<Var> {
    t_prime
        .vars()
        .into_iter()
        .filter(|v| {
            !spec.states.contains(v)
                && !spec.inputs.contains(v)
                && !spec.controls.contains(v)
                && !spec.next_states.contains(v)
        })
        .collect()
}
