//! Winning-area search with parameterized templates: fix a CNF or
//! and-inverter shape of bounded expressiveness and solve the single
//! quantified constraint that makes it a winning area, either with one 2QBF
//! call or with a counterexample-guided pair of SAT loops.

use std::sync::atomic::Ordering;
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::aig::{encode_builder_full, AigBuilder, SafetySpec, Signal};
use crate::cnf::{
    compress_cnf, negate_pg, renaming, Clause, CnfFormula, Cube, Lit, Var, VarKind, VarPool,
};
use crate::qbf::{QbfConfig, QbfEngine, QbfError, QbfOutcome, TwoQbfQuery};
use crate::sat::SatSession;
use crate::win::{RegionKind, Verdict, WinStats, WinningOutcome};

#[derive(Debug, Error)]
pub enum TemplError {
    #[error("the initial state violates the safe states: trivially unrealizable")]
    TriviallyUnrealizable,
    #[error("template expressiveness parameter must be at least 1")]
    ZeroExpressiveness,
    #[error("candidate budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("time limit of {0} ms exceeded")]
    TimeLimit(u64),
    #[error("cancelled")]
    Cancelled,
    #[error("instantiating an and-inverter template over {0} state bits needs enumeration; bound is {1}")]
    InstantiationTooLarge(usize, usize),
    #[error(transparent)]
    Qbf(#[from] QbfError),
    #[error("template solution failed the winning-area certificate")]
    CertificateFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateKind {
    Cnf,
    Aig,
}

/// Parameter variables of a CNF template, grouped by role.
#[derive(Debug, Clone)]
pub struct CnfParams {
    /// `kc[i]`: clause `i` is used.
    pub kc: Vec<Var>,
    /// `kv[i][j]`: state variable `j` appears in clause `i`.
    pub kv: Vec<Vec<Var>>,
    /// `kn[i][j]`: state variable `j` appears negated.
    pub kn: Vec<Vec<Var>>,
}

#[derive(Debug, Clone)]
enum ParamLayout {
    Cnf(CnfParams),
    Aig,
}

/// A parameterized winning-area shape `H(x, k)` of expressiveness `N`,
/// already wrapped so that `I -> H` and `H -> P` hold for every parameter
/// assignment. Carries full CNF encodings over the current and the
/// next-state variables (template parameters shared between the two).
#[derive(Debug, Clone)]
pub struct Template {
    pub kind: TemplateKind,
    pub n: usize,
    pub params: Vec<Var>,
    builder: AigBuilder,
    /// Builder literal of the wrapped output.
    out: u32,
    /// Builder literal of the unwrapped template body.
    raw_out: u32,
    layout: ParamLayout,
    /// Encoding over the current states: clause set, auxiliaries, output.
    pub cur: EncodedTemplate,
    /// Encoding over the next states, sharing `params`.
    pub next: EncodedTemplate,
}

#[derive(Debug, Clone)]
pub struct EncodedTemplate {
    pub clauses: CnfFormula,
    pub aux: Vec<Var>,
    pub out: Signal,
}

/// Number of template parameters for the given kind, expressiveness and
/// state-vector width.
pub fn param_count(kind: TemplateKind, n: usize, n_states: usize) -> usize {
    match kind {
        TemplateKind::Cnf => 2 * n * n_states + n,
        TemplateKind::Aig => n * (2 * n_states + n - 1) + 1,
    }
}

/// Build the wrapped template `H = (H' & P) | I` for `spec`.
pub fn build_template(
    spec: &SafetySpec,
    kind: TemplateKind,
    n: usize,
    pool: &mut VarPool,
) -> Result<Template, TemplError> {
    if n == 0 {
        return Err(TemplError::ZeroExpressiveness);
    }
    if !spec.safe.eval(&|v| spec.init.value_of(v).unwrap_or(false)) {
        return Err(TemplError::TriviallyUnrealizable);
    }
    let n_states = spec.states.len();
    let n_params = param_count(kind, n, n_states);
    let params = pool.fresh_vec(VarKind::TemplateParam, n_params);

    // builder leaves: states then parameters
    let mut b = AigBuilder::new(n_states + n_params);
    let state_leaf: Vec<u32> = (0..n_states).map(|j| b.leaf(j)).collect();
    let param_leaf: Vec<u32> = (0..n_params).map(|j| b.leaf(n_states + j)).collect();

    let (raw, layout) = match kind {
        TemplateKind::Cnf => {
            let mut kc = Vec::with_capacity(n);
            let mut kv = Vec::with_capacity(n);
            let mut kn = Vec::with_capacity(n);
            let mut next = 0usize;
            let take = |k: &mut usize| {
                let v = *k;
                *k += 1;
                v
            };
            let mut clause_outs = Vec::with_capacity(n);
            for _ in 0..n {
                let kc_i = take(&mut next);
                kc.push(params[kc_i]);
                let mut kv_i = Vec::with_capacity(n_states);
                let mut kn_i = Vec::with_capacity(n_states);
                let mut terms = Vec::with_capacity(n_states);
                for &x in state_leaf.iter() {
                    let kv_ij = take(&mut next);
                    let kn_ij = take(&mut next);
                    kv_i.push(params[kv_ij]);
                    kn_i.push(params[kn_ij]);
                    // the literal contributes iff selected, negated per kn
                    let signed = b.xor(x, param_leaf[kn_ij]);
                    terms.push(b.and(param_leaf[kv_ij], signed));
                }
                let disj = b.or_many(&terms);
                // disabled clauses are constant true
                let used = param_leaf[kc_i];
                clause_outs.push(b.or(AigBuilder::not(used), disj));
                kv.push(kv_i);
                kn.push(kn_i);
            }
            (
                b.and_many(&clause_outs),
                ParamLayout::Cnf(CnfParams { kc, kv, kn }),
            )
        }
        TemplateKind::Aig => {
            let mut next = 0usize;
            let take = |k: &mut usize| {
                let v = *k;
                *k += 1;
                v
            };
            let mut gate_outs: Vec<u32> = Vec::with_capacity(n);
            for i in 0..n {
                let mut terms = Vec::new();
                for &x in state_leaf.iter() {
                    let kv_ij = param_leaf[take(&mut next)];
                    let kn_ij = param_leaf[take(&mut next)];
                    let signed = b.xor(x, kn_ij);
                    terms.push(b.or(AigBuilder::not(kv_ij), signed));
                }
                let earlier: Vec<u32> = gate_outs[..i].to_vec();
                for &g in &earlier {
                    let ku_il = param_leaf[take(&mut next)];
                    let km_il = param_leaf[take(&mut next)];
                    let signed = b.xor(g, km_il);
                    terms.push(b.or(AigBuilder::not(ku_il), signed));
                }
                gate_outs.push(b.and_many(&terms));
            }
            let kn_out = param_leaf[take(&mut next)];
            debug_assert_eq!(next, n_params);
            (b.xor(gate_outs[n - 1], kn_out), ParamLayout::Aig)
        }
    };
    // wrapper: (H' & P) | I
    let err_leaf = state_leaf[n_states - 1];
    let safe_part = b.and(raw, AigBuilder::not(err_leaf));
    let init_terms: Vec<u32> = state_leaf.iter().map(|&l| AigBuilder::not(l)).collect();
    let init_part = b.and_many(&init_terms);
    let out = b.or(safe_part, init_part);

    let encode = |b: &AigBuilder, state_vars: &[Var], pool: &mut VarPool| -> EncodedTemplate {
        let mut leaf_signals: Vec<Signal> =
            state_vars.iter().map(|v| Signal::Lit(v.pos())).collect();
        leaf_signals.extend(params.iter().map(|v| Signal::Lit(v.pos())));
        let (clauses, aux, roots) = encode_builder_full(b, &leaf_signals, &[out], pool);
        EncodedTemplate {
            clauses,
            aux,
            out: roots[0],
        }
    };
    let cur = encode(&b, &spec.states, pool);
    let next = encode(&b, &spec.next_states, pool);
    Ok(Template {
        kind,
        n,
        params,
        builder: b,
        out,
        raw_out: raw,
        layout,
        cur,
        next,
    })
}

/// Instantiate the unwrapped template body under concrete parameter
/// values, as a CNF over the state variables.
pub fn instantiate_raw(
    tmpl: &Template,
    spec: &SafetySpec,
    k: &Cube,
) -> Result<CnfFormula, TemplError> {
    match &tmpl.layout {
        ParamLayout::Cnf(p) => {
            let mut f = CnfFormula::truth();
            let val = |v: Var| k.value_of(v).unwrap_or(false);
            for i in 0..tmpl.n {
                if !val(p.kc[i]) {
                    continue;
                }
                let mut lits = Vec::new();
                for (j, s) in spec.states.iter().enumerate() {
                    if val(p.kv[i][j]) {
                        lits.push(s.lit(!val(p.kn[i][j])));
                    }
                }
                match Clause::new(lits) {
                    Some(c) => {
                        f.add_clause_with_subsumption(c);
                    }
                    None => continue,
                }
            }
            Ok(f)
        }
        ParamLayout::Aig => {
            // enumerate the state space and block falsifying assignments
            let n_states = spec.states.len();
            if n_states > 16 {
                return Err(TemplError::InstantiationTooLarge(n_states, 16));
            }
            let mut leaves = vec![false; tmpl.builder.n_leaves()];
            for (j, p) in tmpl.params.iter().enumerate() {
                leaves[n_states + j] = k.value_of(*p).unwrap_or(false);
            }
            // instantiate H', not the wrapper
            let raw_root = tmpl.raw_out;
            let mut f = CnfFormula::truth();
            for bits in 0u64..1u64 << n_states {
                for (j, leaf) in leaves.iter_mut().enumerate().take(n_states) {
                    *leaf = bits >> j & 1 != 0;
                }
                if !tmpl.builder.eval(&leaves, raw_root) {
                    let blocking = Clause::new(
                        spec.states
                            .iter()
                            .enumerate()
                            .map(|(j, s)| s.lit(bits >> j & 1 == 0))
                            .collect(),
                    )
                    .expect("minterm negation");
                    f.push(blocking);
                }
            }
            Ok(compress_cnf(&f, true))
        }
    }
}

/// Instantiate the wrapped template `(H' & P) | I` as a pure state CNF:
/// the initial-state disjunct is distributed over the clause set and the
/// result compressed.
pub fn instantiate(tmpl: &Template, spec: &SafetySpec, k: &Cube) -> Result<CnfFormula, TemplError> {
    let raw = instantiate_raw(tmpl, spec, k)?;
    let mut conj = raw;
    for c in spec.safe.clauses() {
        conj.add_clause_with_subsumption(c.clone());
    }
    let mut distributed = CnfFormula::truth();
    for c in conj.clauses() {
        for l in spec.init.lits() {
            let mut lits = c.lits().to_vec();
            lits.push(*l);
            if let Some(cl) = Clause::new(lits) {
                distributed.add_clause_with_subsumption(cl);
            }
        }
    }
    Ok(compress_cnf(&distributed, true))
}

/// Budgets for the template searches.
#[derive(Debug, Clone)]
pub struct TemplConfig {
    pub seed: u64,
    /// CEGIS candidate budget per expressiveness step.
    pub max_candidates: u64,
    pub time_limit_ms: Option<u64>,
    pub qbf: QbfConfig,
    pub cancel: Option<Arc<std::sync::atomic::AtomicBool>>,
}

impl Default for TemplConfig {
    fn default() -> Self {
        TemplConfig {
            seed: 0,
            max_candidates: 200_000,
            time_limit_ms: None,
            qbf: QbfConfig::default(),
            cancel: None,
        }
    }
}

fn check_limits(cfg: &TemplConfig, started: &Instant) -> Result<(), TemplError> {
    if let Some(limit) = cfg.time_limit_ms {
        if started.elapsed().as_millis() as u64 > limit {
            return Err(TemplError::TimeLimit(limit));
        }
    }
    if let Some(cancel) = &cfg.cancel {
        if cancel.load(Ordering::Relaxed) {
            return Err(TemplError::Cancelled);
        }
    }
    Ok(())
}

/// Solve the winning-area constraint for the template with one 2QBF call:
/// `exists k . forall x,i . exists c,x',aux .
///  (H & fixed) -> T & H' & fixed'`. Returns the instantiated area (with
/// `fixed` conjoined) or `None` when no instantiation works.
pub fn templ_win_qbf(
    spec: &SafetySpec,
    tmpl: &Template,
    fixed: &CnfFormula,
    cfg: &TemplConfig,
    pool: &mut VarPool,
) -> Result<Option<CnfFormula>, TemplError> {
    let mut matrix = CnfFormula::truth();
    matrix.extend(&tmpl.cur.clauses);
    matrix.extend(&tmpl.next.clauses);
    let mut aux: Vec<Var> = Vec::new();
    aux.extend_from_slice(&tmpl.cur.aux);
    aux.extend_from_slice(&tmpl.next.aux);

    // h_tot <-> H & fixed; h_tot' likewise over next states
    let prime_map = renaming(&spec.states, &spec.next_states);
    let fixed_next = fixed.rename(&prime_map).expect("states to next");
    let encode_tot =
        |out: Signal, f: &CnfFormula, matrix: &mut CnfFormula, aux: &mut Vec<Var>, pool: &mut VarPool| -> Signal {
            if f.is_empty() {
                return out;
            }
            // f_v <-> conjunction of the fixed clauses
            let f_v = pool.fresh(VarKind::Aux);
            aux.push(f_v);
            let mut back = vec![f_v.pos()];
            for c in f.clauses() {
                let mut lits = vec![f_v.neg()];
                lits.extend_from_slice(c.lits());
                matrix.push(Clause::new(lits).expect("fresh aux"));
                if c.len() == 1 {
                    back.push(c.lits()[0].negate());
                } else {
                    let n_c = pool.fresh(VarKind::Aux);
                    aux.push(n_c);
                    for &l in c.lits() {
                        matrix.push(Clause::new(vec![n_c.neg(), l.negate()]).unwrap());
                    }
                    back.push(n_c.pos());
                }
            }
            if let Some(c) = Clause::new(back) {
                matrix.push(c);
            }
            match out {
                Signal::Const(false) => Signal::Const(false),
                Signal::Const(true) => Signal::Lit(f_v.pos()),
                Signal::Lit(h) => {
                    let tot = pool.fresh(VarKind::Aux);
                    aux.push(tot);
                    matrix.push(Clause::new(vec![tot.neg(), h]).unwrap());
                    matrix.push(Clause::new(vec![tot.neg(), f_v.pos()]).unwrap());
                    matrix.push(Clause::new(vec![tot.pos(), h.negate(), f_v.neg()]).unwrap());
                    Signal::Lit(tot.pos())
                }
            }
        };
    let cur_tot = encode_tot(tmpl.cur.out, fixed, &mut matrix, &mut aux, pool);
    let next_tot = encode_tot(tmpl.next.out, &fixed_next, &mut matrix, &mut aux, pool);

    // a -> T & next_tot; cur_tot -> a
    let a = pool.fresh(VarKind::Aux);
    aux.push(a);
    for c in spec.trans.clauses() {
        let mut lits = vec![a.neg()];
        lits.extend_from_slice(c.lits());
        matrix.push(Clause::new(lits).expect("fresh aux"));
    }
    match next_tot {
        Signal::Const(true) => {}
        Signal::Const(false) => matrix.push(Clause::unit(a.neg())),
        Signal::Lit(h) => matrix.push(Clause::new(vec![a.neg(), h]).unwrap()),
    }
    match cur_tot {
        Signal::Const(false) => {}
        Signal::Const(true) => matrix.push(Clause::unit(a.pos())),
        Signal::Lit(h) => matrix.push(Clause::new(vec![h.negate(), a.pos()]).unwrap()),
    }

    let mut block_b: Vec<Var> = spec.states.clone();
    block_b.extend_from_slice(&spec.inputs);
    let mut block_c: Vec<Var> = spec.controls.clone();
    block_c.extend_from_slice(&spec.next_states);
    block_c.extend_from_slice(&spec.trans_aux);
    block_c.extend(aux);
    let query = TwoQbfQuery::new(tmpl.params.clone(), block_b, block_c, matrix)?;
    let mut engine = QbfEngine::new(cfg.qbf);
    match engine.solve(&query, pool)? {
        QbfOutcome::Unsat => Ok(None),
        QbfOutcome::Sat { model_a } => {
            let mut area = instantiate(tmpl, spec, &model_a)?;
            for c in fixed.clauses() {
                area.add_clause_with_subsumption(c.clone());
            }
            Ok(Some(compress_cnf(&area, true)))
        }
    }
}

/// Counterexample-guided template instantiation with SAT solvers: candidate
/// parameters from an accumulated constraint, checked by the one-step
/// escape search, refined with the winning-area conjuncts at the failing
/// state and input (controls and next states freshly renamed per
/// refinement).
pub fn templ_win_sat(
    spec: &SafetySpec,
    tmpl: &Template,
    fixed: &CnfFormula,
    cfg: &TemplConfig,
    pool: &mut VarPool,
) -> Result<Option<CnfFormula>, TemplError> {
    let started = Instant::now();
    let mut solver_k = SatSession::with_seed(cfg.seed);
    let mut candidates = 0u64;
    loop {
        check_limits(cfg, &started)?;
        candidates += 1;
        if candidates > cfg.max_candidates {
            return Err(TemplError::BudgetExceeded(cfg.max_candidates));
        }
        let res = solver_k.solve(&Cube::empty());
        if !res.is_sat() {
            return Ok(None);
        }
        let k = res.model_cube(&tmpl.params);
        let mut area = instantiate(tmpl, spec, &k)?;
        for c in fixed.clauses() {
            area.add_clause_with_subsumption(c.clone());
        }
        match area_counterexample(spec, &area, cfg, &started)? {
            None => return Ok(Some(compress_cnf(&area, true))),
            Some((x, i)) => {
                refine_candidate_constraint(spec, tmpl, fixed, &x, &i, &mut solver_k, pool);
            }
        }
    }
}

/// Search for `(x, i)` with `x` in the area such that every control leads
/// outside; the non-refining reuse of the winning-region counterexample
/// machinery.
fn area_counterexample(
    spec: &SafetySpec,
    area: &CnfFormula,
    cfg: &TemplConfig,
    started: &Instant,
) -> Result<Option<(Cube, Cube)>, TemplError> {
    let mut pool = spec.pool.clone();
    let prime_map = renaming(&spec.states, &spec.next_states);
    let area_next = area.rename(&prime_map).expect("states to next");
    let mut solver_c = SatSession::with_seed(cfg.seed);
    solver_c.assert_formula(area);
    solver_c.assert_formula(&spec.trans);
    let neg = negate_pg(&area_next, &mut pool);
    solver_c.assert_formula(&neg.cnf);
    let mut solver_g = SatSession::with_seed(cfg.seed);
    solver_g.assert_formula(area);
    solver_g.assert_formula(&spec.trans);
    solver_g.assert_formula(&area_next);
    loop {
        check_limits(cfg, started)?;
        let res = solver_c.solve(&Cube::empty());
        if !res.is_sat() {
            return Ok(None);
        }
        let x = res.model_cube(&spec.states);
        let i = res.model_cube(&spec.inputs);
        let mut assumptions = x.lits().to_vec();
        assumptions.extend_from_slice(i.lits());
        let check = solver_g.solve_lits(&assumptions);
        if !check.is_sat() {
            return Ok(Some((x, i)));
        }
        let controls = check.model_cube(&spec.controls);
        let mut cube_lits = x.lits().to_vec();
        cube_lits.extend_from_slice(i.lits());
        let cube = Cube::new(cube_lits).expect("disjoint vectors");
        let core = solver_c
            .min_unsat_core(&cube, &controls)
            .expect("control leads back into the area");
        solver_c.assert_clause(&core.negate_to_clause());
    }
}

/// Add `H(x,k) & fixed(x) -> T(x,i,tc,tx) & H(tx,k) & fixed(tx)` to the
/// candidate constraints, with fresh copies of the controls, next states
/// and every auxiliary.
fn refine_candidate_constraint(
    spec: &SafetySpec,
    tmpl: &Template,
    fixed: &CnfFormula,
    x: &Cube,
    i: &Cube,
    solver_k: &mut SatSession,
    pool: &mut VarPool,
) {
    // fixed(x) is a constant
    let fixed_at_x = fixed.eval(&|v| x.value_of(v).unwrap_or(false));
    if !fixed_at_x {
        return; // antecedent false, no constraint
    }
    // h_x: template output with states folded to x
    let n_states = spec.states.len();
    let mut leaf_signals: Vec<Signal> = spec
        .states
        .iter()
        .map(|s| Signal::Const(x.value_of(*s).unwrap_or(false)))
        .collect();
    leaf_signals.extend(tmpl.params.iter().map(|v| Signal::Lit(v.pos())));
    let (h_x_cnf, _, roots) = encode_builder_full(&tmpl.builder, &leaf_signals, &[tmpl.out], pool);
    solver_k.assert_formula(&h_x_cnf);
    let h_x = roots[0];
    if let Signal::Const(false) = h_x {
        return;
    }
    let guard: Option<Lit> = match h_x {
        Signal::Const(_) => None,
        Signal::Lit(l) => Some(l.negate()),
    };
    let push = |solver_k: &mut SatSession, c: &Clause| {
        let mut lits: Vec<Lit> = guard.iter().copied().collect();
        lits.extend_from_slice(c.lits());
        solver_k.add_lits(&lits);
    };
    // T at (x, i) with fresh copies
    let t_c = pool.fresh_vec(VarKind::Control, spec.controls.len());
    let t_x = pool.fresh_vec(VarKind::NextState, spec.next_states.len());
    let t_aux = pool.fresh_vec(VarKind::Aux, spec.trans_aux.len());
    let mut xi = x.lits().to_vec();
    xi.extend_from_slice(i.lits());
    let restricted = spec.trans.restrict(&Cube::new(xi).expect("disjoint"));
    let mut map = renaming(&spec.controls, &t_c);
    map.extend(renaming(&spec.next_states, &t_x));
    map.extend(renaming(&spec.trans_aux, &t_aux));
    let t_inst = restricted.rename(&map).expect("fresh copies");
    for c in t_inst.clauses() {
        push(solver_k, c);
    }
    // H(tx, k)
    let mut next_signals: Vec<Signal> = t_x[..n_states]
        .iter()
        .map(|v| Signal::Lit(v.pos()))
        .collect();
    next_signals.extend(tmpl.params.iter().map(|v| Signal::Lit(v.pos())));
    let (h_tx_cnf, _, roots) =
        encode_builder_full(&tmpl.builder, &next_signals, &[tmpl.out], pool);
    solver_k.assert_formula(&h_tx_cnf);
    match roots[0] {
        Signal::Const(true) => {}
        Signal::Const(false) => push(solver_k, &Clause::empty()),
        Signal::Lit(l) => push(solver_k, &Clause::unit(l)),
    }
    // fixed(tx)
    let fixed_map = renaming(&spec.states, &t_x[..n_states]);
    if let Ok(fixed_tx) = fixed.rename(&fixed_map) {
        for c in fixed_tx.clauses() {
            push(solver_k, c);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplMethod {
    Sat,
    Qbf,
}

/// Outcome of the expressiveness schedule: a decided verdict or unknown on
/// budget exhaustion.
#[derive(Debug)]
pub enum ScheduleOutcome {
    Decided(WinningOutcome),
    Unknown,
}

/// Grow the expressiveness parameter 1, 2, 3, 4, 8, 16, ... and call the
/// chosen search; declare unrealizability only when the search fails for a
/// template able to represent every state formula.
pub fn templ_schedule(
    spec: &SafetySpec,
    kind: TemplateKind,
    method: TemplMethod,
    fixed: &CnfFormula,
    cfg: &TemplConfig,
) -> Result<ScheduleOutcome, TemplError> {
    let started = Instant::now();
    let mut stats = WinStats {
        provenance: format!("templ-{:?}", method).to_lowercase(),
        ..WinStats::default()
    };
    let complete_bound: u64 = match u64::try_from(spec.states.len()) {
        Ok(bits) if bits < 63 => 1u64 << bits,
        _ => u64::MAX,
    };
    let mut n = 1usize;
    loop {
        match check_limits(cfg, &started) {
            Ok(()) => {}
            Err(TemplError::TimeLimit(_)) => return Ok(ScheduleOutcome::Unknown),
            Err(e) => return Err(e),
        }
        let mut pool = spec.pool.clone();
        let tmpl = match build_template(spec, kind, n, &mut pool) {
            Err(TemplError::TriviallyUnrealizable) => {
                stats.time_ms = started.elapsed().as_millis() as u64;
                return Ok(ScheduleOutcome::Decided(WinningOutcome {
                    verdict: Verdict::Unrealizable,
                    region: None,
                    kind: RegionKind::WinningArea,
                    stats,
                }));
            }
            other => other?,
        };
        let attempt = match method {
            TemplMethod::Sat => templ_win_sat(spec, &tmpl, fixed, cfg, &mut pool),
            TemplMethod::Qbf => templ_win_qbf(spec, &tmpl, fixed, cfg, &mut pool),
        };
        stats.refinements += 1;
        match attempt {
            Ok(Some(area)) => {
                // every returned area must pass the certificate
                let report = crate::verify::check_winning_area(spec, &area)
                    .map_err(|_| TemplError::CertificateFailed)?;
                if !report.all_pass() {
                    return Err(TemplError::CertificateFailed);
                }
                stats.time_ms = started.elapsed().as_millis() as u64;
                return Ok(ScheduleOutcome::Decided(WinningOutcome {
                    verdict: Verdict::Realizable,
                    region: Some(area),
                    kind: RegionKind::WinningArea,
                    stats,
                }));
            }
            Ok(None) => {
                if n as u64 >= complete_bound {
                    stats.time_ms = started.elapsed().as_millis() as u64;
                    return Ok(ScheduleOutcome::Decided(WinningOutcome {
                        verdict: Verdict::Unrealizable,
                        region: None,
                        kind: RegionKind::WinningArea,
                        stats,
                    }));
                }
                n = if n < 4 { n + 1 } else { n * 2 };
            }
            Err(TemplError::BudgetExceeded(_))
            | Err(TemplError::TimeLimit(_))
            | Err(TemplError::Qbf(QbfError::ResourceLimit(_))) => {
                return Ok(ScheduleOutcome::Unknown)
            }
            Err(e) => return Err(e),
        }
    }
}
