//! Variables, literals, clauses, cubes and CNF formulas.
//!
//! Clauses and cubes are kept in a canonical form (sorted, duplicate-free,
//! tautology-free), which makes subsumption checks linear and hashing stable.
//! On top of the plain data types this module provides the CNF toolbox used
//! by all learning loops: polarity-aware negation (`negate_pg`), negation
//! without auxiliary variables (`neg_learn`), equivalence-preserving
//! compression (`compress_cnf`) and variable renaming.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::sat::SatSession;

/// What role a variable plays in a safety specification or query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Current-state variable (latch or the appended error latch).
    State,
    /// Uncontrollable input.
    Input,
    /// Controllable input.
    Control,
    /// Next-state copy of a state variable.
    NextState,
    /// Tseitin/Plaisted-Greenbaum auxiliary or any other derived variable.
    Aux,
    /// Template parameter.
    TemplateParam,
    /// Activation variable guarding a clause group.
    Activation,
}

/// A Boolean variable, an index into a [`VarPool`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The positive literal of this variable.
    pub fn pos(self) -> Lit {
        Lit::new(self, false)
    }

    /// The negative literal of this variable.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit::new(self, true)
    }

    /// Literal with the given sign (`true` = unnegated).
    pub fn lit(self, value: bool) -> Lit {
        Lit::new(self, !value)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A literal: a variable or its negation.
///
/// Encoded as `2*var + negated`, so the derived order is exactly the
/// canonical `(var, negated)` order used by clauses and cubes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, negated: bool) -> Lit {
        Lit(var.0 << 1 | negated as u32)
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 != 0
    }

    /// Truth value this literal assigns to its variable when asserted.
    pub fn value(self) -> bool {
        !self.is_neg()
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn from_code(code: u32) -> Lit {
        Lit(code)
    }

    /// Evaluate under an assignment of the variable.
    pub fn eval(self, var_value: bool) -> bool {
        var_value ^ self.is_neg()
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_neg() {
            write!(f, "!v{}", self.var().0)
        } else {
            write!(f, "v{}", self.var().0)
        }
    }
}

/// Allocator and kind table for variables.
#[derive(Debug, Clone, Default)]
pub struct VarPool {
    kinds: Vec<VarKind>,
}

impl VarPool {
    pub fn new() -> VarPool {
        VarPool::default()
    }

    pub fn fresh(&mut self, kind: VarKind) -> Var {
        let v = Var(self.kinds.len() as u32);
        self.kinds.push(kind);
        v
    }

    pub fn fresh_vec(&mut self, kind: VarKind, n: usize) -> Vec<Var> {
        (0..n).map(|_| self.fresh(kind)).collect()
    }

    pub fn kind(&self, v: Var) -> VarKind {
        self.kinds[v.index()]
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("renaming map is not injective on the formula variables")]
    NonInjectiveRenaming,
    #[error("cube and formula are satisfiable together, no unsatisfiable core exists")]
    CorePreconditionViolated,
}

fn canonicalize(mut lits: Vec<Lit>) -> Option<Vec<Lit>> {
    lits.sort_unstable();
    lits.dedup();
    for w in lits.windows(2) {
        if w[0].var() == w[1].var() {
            return None; // tautological / contradictory pair
        }
    }
    Some(lits)
}

/// A disjunction of literals in canonical form.
///
/// Construction rejects tautologies (a variable occurring in both phases).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Returns `None` if the clause would be a tautology.
    pub fn new(lits: Vec<Lit>) -> Option<Clause> {
        canonicalize(lits).map(|lits| Clause { lits })
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn unit(l: Lit) -> Clause {
        Clause { lits: vec![l] }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.lits.binary_search(&l).is_ok()
    }

    /// True iff every literal of `self` occurs in `other`.
    pub fn subsumes(&self, other: &Clause) -> bool {
        if self.lits.len() > other.lits.len() {
            return false;
        }
        let mut it = other.lits.iter();
        'outer: for l in &self.lits {
            for o in it.by_ref() {
                match o.cmp(l) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// Evaluate under a total assignment (indexed by variable).
    pub fn eval(&self, assignment: &dyn Fn(Var) -> bool) -> bool {
        self.lits.iter().any(|l| l.eval(assignment(l.var())))
    }

    /// The cube falsifying exactly this clause.
    pub fn negate_to_cube(&self) -> Cube {
        Cube {
            lits: self.lits.iter().map(|l| l.negate()).collect(),
        }
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{:?}", l)?;
        }
        write!(f, ")")
    }
}

/// A conjunction of literals in canonical form. A cube over all variables of
/// a vector is a minterm.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    lits: Vec<Lit>,
}

impl Cube {
    /// Returns `None` if the cube would be contradictory.
    pub fn new(lits: Vec<Lit>) -> Option<Cube> {
        canonicalize(lits).map(|lits| Cube { lits })
    }

    pub fn empty() -> Cube {
        Cube { lits: Vec::new() }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.lits.binary_search(&l).is_ok()
    }

    /// Truth value assigned to `v`, if any.
    pub fn value_of(&self, v: Var) -> Option<bool> {
        match self.lits.binary_search(&v.pos()) {
            Ok(_) => Some(true),
            Err(i) => {
                if self.lits.get(i) == Some(&v.neg()) {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    /// Cube with the literal at `idx` removed.
    pub fn without_index(&self, idx: usize) -> Cube {
        let mut lits = self.lits.clone();
        lits.remove(idx);
        Cube { lits }
    }

    /// True iff every literal of `self` occurs in `other`.
    pub fn subcube_of(&self, other: &Cube) -> bool {
        Clause {
            lits: self.lits.clone(),
        }
        .subsumes(&Clause {
            lits: other.lits.clone(),
        })
    }

    /// The clause excluding exactly this cube.
    pub fn negate_to_clause(&self) -> Clause {
        Clause {
            lits: self.lits.iter().map(|l| l.negate()).collect(),
        }
    }

    pub fn eval(&self, assignment: &dyn Fn(Var) -> bool) -> bool {
        self.lits.iter().all(|l| l.eval(assignment(l.var())))
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{:?}", l)?;
        }
        write!(f, "]")
    }
}

/// A CNF formula: a set of canonical clauses.
///
/// The empty clause set is the constant true; a formula containing the empty
/// clause is the constant false.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    clauses: Vec<Clause>,
}

impl CnfFormula {
    /// The constant true.
    pub fn truth() -> CnfFormula {
        CnfFormula::default()
    }

    /// The constant false.
    pub fn falsity() -> CnfFormula {
        CnfFormula {
            clauses: vec![Clause::empty()],
        }
    }

    pub fn from_clauses(clauses: Vec<Clause>) -> CnfFormula {
        CnfFormula { clauses }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_true(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    pub fn push(&mut self, c: Clause) {
        self.clauses.push(c);
    }

    pub fn extend(&mut self, other: &CnfFormula) {
        self.clauses.extend_from_slice(&other.clauses);
    }

    /// Adds `c` while keeping the clause set free of subsumed pairs: all
    /// supersets of `c` are removed, and `c` itself is dropped when an
    /// existing clause already subsumes it.
    ///
    /// Returns true if the clause was added.
    pub fn add_clause_with_subsumption(&mut self, c: Clause) -> bool {
        for existing in &self.clauses {
            if existing.subsumes(&c) {
                return false;
            }
        }
        self.clauses.retain(|existing| !c.subsumes(existing));
        self.clauses.push(c);
        true
    }

    /// All variables occurring in the formula, sorted.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .clauses
            .iter()
            .flat_map(|c| c.lits().iter().map(|l| l.var()))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn eval(&self, assignment: &dyn Fn(Var) -> bool) -> bool {
        self.clauses.iter().all(|c| c.eval(assignment))
    }

    /// Literal count over all clauses.
    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).sum()
    }

    /// Substitute the truth values of `cube` into the formula: satisfied
    /// clauses are dropped, false literals are removed. The result can
    /// contain the empty clause.
    pub fn restrict(&self, cube: &Cube) -> CnfFormula {
        let mut out = CnfFormula::truth();
        'clauses: for c in &self.clauses {
            let mut lits = Vec::with_capacity(c.len());
            for &l in c.lits() {
                match cube.value_of(l.var()) {
                    Some(v) if l.eval(v) => continue 'clauses,
                    Some(_) => {}
                    None => lits.push(l),
                }
            }
            out.push(Clause::new(lits).expect("subset of a canonical clause"));
        }
        out
    }

    /// Apply a variable renaming. The map must be injective on the formula
    /// variables; variables not in the map are kept.
    pub fn rename(&self, map: &HashMap<Var, Var>) -> Result<CnfFormula, CnfError> {
        let mut seen: HashMap<Var, Var> = HashMap::new();
        for v in self.vars() {
            let img = *map.get(&v).unwrap_or(&v);
            if let Some(prev) = seen.insert(img, v) {
                if prev != v {
                    return Err(CnfError::NonInjectiveRenaming);
                }
            }
        }
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                Clause::new(
                    c.lits()
                        .iter()
                        .map(|l| {
                            let v = *map.get(&l.var()).unwrap_or(&l.var());
                            Lit::new(v, l.is_neg())
                        })
                        .collect(),
                )
                .expect("injective renaming preserves canonical form")
            })
            .collect();
        Ok(CnfFormula { clauses })
    }

    /// DIMACS text (`p cnf V C` header, clauses as zero-terminated lists).
    /// Variable `v` is printed as `v.0 + 1`.
    pub fn to_dimacs(&self) -> String {
        let max_var = self
            .clauses
            .iter()
            .flat_map(|c| c.lits().iter())
            .map(|l| l.var().0 + 1)
            .max()
            .unwrap_or(0);
        let mut out = format!("p cnf {} {}\n", max_var, self.clauses.len());
        for c in &self.clauses {
            for l in c.lits() {
                let v = (l.var().0 + 1) as i64;
                let signed = if l.is_neg() { -v } else { v };
                out.push_str(&signed.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Debug for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "true");
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{:?}", c)?;
        }
        Ok(())
    }
}

/// Result of a polarity-aware CNF negation.
pub struct NegatedCnf {
    /// CNF satisfiable on an assignment of the original variables iff the
    /// negation holds there (with the auxiliaries existentially scoped).
    pub cnf: CnfFormula,
    /// Fresh auxiliary variables introduced by the encoding. Callers must
    /// scope these existentially.
    pub aux: Vec<Var>,
}

/// Negate a CNF with the polarity-aware (one-sided) encoding.
///
/// `!(c1 & c2 & ...)` becomes a disjunction of per-clause selectors, where
/// each selector implies (only) that its clause is falsified. Unit clauses
/// are inlined without an auxiliary.
pub fn negate_pg(f: &CnfFormula, pool: &mut VarPool) -> NegatedCnf {
    if f.has_empty_clause() {
        // !false = true
        return NegatedCnf {
            cnf: CnfFormula::truth(),
            aux: Vec::new(),
        };
    }
    if f.is_true() {
        return NegatedCnf {
            cnf: CnfFormula::falsity(),
            aux: Vec::new(),
        };
    }
    let mut cnf = CnfFormula::truth();
    let mut aux = Vec::new();
    let mut top = Vec::new();
    for c in f.clauses() {
        if c.len() == 1 {
            top.push(c.lits()[0].negate());
        } else {
            let a = pool.fresh(VarKind::Aux);
            aux.push(a);
            for l in c.lits() {
                cnf.push(Clause::new(vec![a.neg(), l.negate()]).expect("distinct vars"));
            }
            top.push(a.pos());
        }
    }
    match Clause::new(top) {
        Some(c) => cnf.push(c),
        // Two complementary unit clauses: the negation is a tautology on the
        // top disjunction, so the formula was unsatisfiable and !f = true.
        None => {
            return NegatedCnf {
                cnf: CnfFormula::truth(),
                aux: Vec::new(),
            }
        }
    }
    NegatedCnf { cnf, aux }
}

/// Compute a CNF for the negation of `f` over exactly `vars`, without
/// auxiliary variables, by model enumeration with core generalization.
///
/// `vars` must cover all variables of `f`.
pub fn neg_learn(f: &CnfFormula, vars: &[Var], pool: &mut VarPool) -> CnfFormula {
    let mut n = CnfFormula::truth();
    // Session A: f & n, produces models of f not yet excluded by n.
    let mut sess_a = SatSession::new();
    sess_a.assert_formula(f);
    // Session B: !f, generalizes those models to minimal cores.
    let neg = negate_pg(f, pool);
    let mut sess_b = SatSession::new();
    sess_b.assert_formula(&neg.cnf);
    loop {
        let res = sess_a.solve(&Cube::empty());
        if !res.is_sat() {
            return n;
        }
        let model = res.model_cube(vars);
        let core = sess_b
            .min_unsat_core(&model, &Cube::empty())
            .expect("model of f contradicts !f");
        let clause = core.negate_to_clause();
        sess_a.assert_clause(&clause);
        n.add_clause_with_subsumption(clause);
    }
}

/// Remove redundant literals (optional) and clauses from a CNF, preserving
/// equivalence. Clauses are checked in increasing size, so small clauses get
/// the chance to make larger ones redundant.
pub fn compress_cnf(f: &CnfFormula, drop_literals: bool) -> CnfFormula {
    if f.has_empty_clause() {
        return CnfFormula::falsity();
    }
    let mut work: Vec<Clause> = f.clauses().to_vec();
    if drop_literals {
        let mut sess = SatSession::new();
        sess.assert_formula(f);
        let mut shrunk = Vec::with_capacity(work.len());
        for c in &work {
            let core = sess
                .min_unsat_core(&c.negate_to_cube(), &Cube::empty())
                .expect("clause of f is implied by f");
            shrunk.push(core.negate_to_clause());
        }
        work = shrunk;
    }
    work.sort_by_key(|c| c.len());
    work.dedup();
    let mut kept = CnfFormula::truth();
    let mut sess = SatSession::new();
    for c in work {
        if kept.clauses().iter().any(|k| k.subsumes(&c)) {
            continue;
        }
        let res = sess.solve(&c.negate_to_cube());
        if res.is_sat() {
            sess.assert_clause(&c);
            kept.add_clause_with_subsumption(c);
        }
    }
    kept
}

/// Build a renaming map from paired variable slices.
pub fn renaming(from: &[Var], to: &[Var]) -> HashMap<Var, Var> {
    assert_eq!(from.len(), to.len());
    from.iter().copied().zip(to.iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::SatSession;

    fn pool_with(n: usize) -> (VarPool, Vec<Var>) {
        let mut pool = VarPool::new();
        let vars = pool.fresh_vec(VarKind::State, n);
        (pool, vars)
    }

    fn clause(lits: &[Lit]) -> Clause {
        Clause::new(lits.to_vec()).unwrap()
    }

    /// Truth-table satisfiability of `assignment |= exists aux . cnf` where
    /// `main` are the assignment variables and everything else is free.
    fn holds_with_free_vars(cnf: &CnfFormula, main: &[Var], assignment: u32) -> bool {
        let mut extra: Vec<Var> = cnf.vars();
        extra.retain(|v| !main.contains(v));
        let m = extra.len();
        assert!(m <= 20);
        (0u32..1 << m).any(|aux_bits| {
            cnf.eval(&|v| {
                if let Some(i) = main.iter().position(|&x| x == v) {
                    assignment >> i & 1 != 0
                } else {
                    let i = extra.iter().position(|&x| x == v).unwrap();
                    aux_bits >> i & 1 != 0
                }
            })
        })
    }

    #[test]
    fn canonical_form_rejects_tautologies() {
        let (_, v) = pool_with(2);
        assert!(Clause::new(vec![v[0].pos(), v[0].neg()]).is_none());
        assert!(Cube::new(vec![v[1].pos(), v[1].neg()]).is_none());
        let c = clause(&[v[1].neg(), v[0].pos(), v[1].neg()]);
        assert_eq!(c.lits(), &[v[0].pos(), v[1].neg()]);
    }

    #[test]
    fn subsumption_is_set_inclusion() {
        let (_, v) = pool_with(3);
        let small = clause(&[v[0].pos()]);
        let big = clause(&[v[0].pos(), v[2].neg()]);
        assert!(small.subsumes(&big));
        assert!(!big.subsumes(&small));
        let other = clause(&[v[1].pos(), v[2].neg()]);
        assert!(!big.subsumes(&other) && !other.subsumes(&big));
    }

    #[test]
    fn add_with_subsumption_keeps_set_minimal() {
        let (_, v) = pool_with(3);
        let mut f = CnfFormula::truth();
        assert!(f.add_clause_with_subsumption(clause(&[v[0].pos(), v[1].pos()])));
        assert!(f.add_clause_with_subsumption(clause(&[v[0].pos(), v[2].pos()])));
        // subsumes both
        assert!(f.add_clause_with_subsumption(clause(&[v[0].pos()])));
        assert_eq!(f.len(), 1);
        // subsumed, must be rejected
        assert!(!f.add_clause_with_subsumption(clause(&[v[0].pos(), v[1].neg()])));
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn negate_pg_of_truth_is_falsity() {
        let mut pool = VarPool::new();
        let neg = negate_pg(&CnfFormula::truth(), &mut pool);
        assert!(neg.cnf.has_empty_clause());
        assert!(neg.aux.is_empty());
    }

    #[test]
    fn negate_pg_single_unit_clause() {
        let (mut pool, v) = pool_with(1);
        let f = CnfFormula::from_clauses(vec![clause(&[v[0].pos()])]);
        let neg = negate_pg(&f, &mut pool);
        assert_eq!(neg.cnf.clauses(), &[clause(&[v[0].neg()])]);
        assert!(neg.aux.is_empty());
    }

    #[test]
    fn negate_pg_matches_truth_table() {
        let (mut pool, v) = pool_with(3);
        let f = CnfFormula::from_clauses(vec![
            clause(&[v[0].pos(), v[1].pos()]),
            clause(&[v[0].neg(), v[2].pos()]),
        ]);
        let neg = negate_pg(&f, &mut pool);
        for bits in 0u32..8 {
            let f_val = f.eval(&|x| bits >> v.iter().position(|&y| y == x).unwrap() & 1 != 0);
            assert_eq!(
                holds_with_free_vars(&neg.cnf, &v, bits),
                !f_val,
                "assignment {bits:03b}"
            );
        }
    }

    #[test]
    fn neg_learn_constants() {
        let (mut pool, v) = pool_with(2);
        let learned = neg_learn(&CnfFormula::falsity(), &v, &mut pool);
        assert!(learned.is_true());
        let learned = neg_learn(&CnfFormula::truth(), &v, &mut pool);
        assert!(learned.has_empty_clause());
    }

    #[test]
    fn neg_learn_conjunction_of_units() {
        let (mut pool, v) = pool_with(2);
        let f = CnfFormula::from_clauses(vec![clause(&[v[0].pos()]), clause(&[v[1].pos()])]);
        let n = neg_learn(&f, &v, &mut pool);
        for bits in 0u32..4 {
            let assign = |x: Var| bits >> v.iter().position(|&y| y == x).unwrap() & 1 != 0;
            assert_eq!(n.eval(&assign), !f.eval(&assign));
        }
        assert_eq!(n.len(), 1);
        assert_eq!(n.clauses()[0], clause(&[v[0].neg(), v[1].neg()]));
    }

    #[test]
    fn neg_learn_double_check_with_solver() {
        // F & N unsat and F | N valid, checked propositionally.
        let (mut pool, v) = pool_with(4);
        let f = CnfFormula::from_clauses(vec![
            clause(&[v[0].pos(), v[1].neg(), v[2].pos()]),
            clause(&[v[1].pos(), v[3].pos()]),
            clause(&[v[0].neg(), v[3].neg()]),
        ]);
        let n = neg_learn(&f, &v, &mut pool);
        let mut both = SatSession::new();
        both.assert_formula(&f);
        both.assert_formula(&n);
        assert!(!both.solve(&Cube::empty()).is_sat());
        // validity of F | N: !F & !N unsat
        let nf = negate_pg(&f, &mut pool);
        let nn = negate_pg(&n, &mut pool);
        let mut neither = SatSession::new();
        neither.assert_formula(&nf.cnf);
        neither.assert_formula(&nn.cnf);
        assert!(!neither.solve(&Cube::empty()).is_sat());
    }

    #[test]
    fn compress_removes_subsumed() {
        let (_, v) = pool_with(2);
        let f = CnfFormula::from_clauses(vec![
            clause(&[v[0].pos()]),
            clause(&[v[0].pos(), v[1].pos()]),
        ]);
        let g = compress_cnf(&f, false);
        assert_eq!(g.clauses(), &[clause(&[v[0].pos()])]);
    }

    #[test]
    fn compress_drop_literals_merges_resolvable_pair() {
        let (_, v) = pool_with(2);
        // (a | b) & (a | !b) == a
        let f = CnfFormula::from_clauses(vec![
            clause(&[v[0].pos(), v[1].pos()]),
            clause(&[v[0].pos(), v[1].neg()]),
        ]);
        let g = compress_cnf(&f, true);
        assert_eq!(g.clauses(), &[clause(&[v[0].pos()])]);
        for bits in 0u32..4 {
            let assign = |x: Var| bits >> v.iter().position(|&y| y == x).unwrap() & 1 != 0;
            assert_eq!(g.eval(&assign), f.eval(&assign));
        }
    }

    #[test]
    fn compress_keeps_irredundant_clause() {
        let (_, v) = pool_with(2);
        let f = CnfFormula::from_clauses(vec![clause(&[v[0].pos(), v[1].pos()])]);
        assert_eq!(compress_cnf(&f, false), f);
    }

    #[test]
    fn rename_substitutes_and_composes() {
        let (mut pool, v) = pool_with(2);
        let v2 = pool.fresh(VarKind::NextState);
        let v3 = pool.fresh(VarKind::NextState);
        let f = CnfFormula::from_clauses(vec![clause(&[v[0].pos(), v[1].neg()])]);
        let m1 = renaming(&[v[0]], &[v2]);
        let r1 = f.rename(&m1).unwrap();
        assert_eq!(r1.clauses(), &[clause(&[v[1].neg(), v2.pos()])]);
        // identity
        assert_eq!(f.rename(&HashMap::new()).unwrap(), f);
        // composition
        let m2 = renaming(&[v2], &[v3]);
        let direct = f.rename(&renaming(&[v[0]], &[v3])).unwrap();
        assert_eq!(r1.rename(&m2).unwrap(), direct);
    }

    #[test]
    fn rename_rejects_non_injective() {
        let (_, v) = pool_with(3);
        let f = CnfFormula::from_clauses(vec![clause(&[v[0].pos(), v[1].pos()])]);
        let mut map = HashMap::new();
        map.insert(v[0], v[2]);
        map.insert(v[1], v[2]);
        assert_eq!(f.rename(&map), Err(CnfError::NonInjectiveRenaming));
    }

    #[test]
    fn dimacs_emitter_formats_header_and_clauses() {
        let (_, v) = pool_with(2);
        let f = CnfFormula::from_clauses(vec![
            clause(&[v[0].pos(), v[1].neg()]),
            clause(&[v[1].pos()]),
        ]);
        assert_eq!(f.to_dimacs(), "p cnf 2 2\n1 -2 0\n2 0\n");
    }

    fn random_cnf(seed: u64, vars: &[Var], max_clauses: usize) -> CnfFormula {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n_clauses = rng.gen_range(0..=max_clauses);
        let mut f = CnfFormula::truth();
        for _ in 0..n_clauses {
            let len = rng.gen_range(1..=3.min(vars.len()));
            let lits: Vec<Lit> = (0..len)
                .map(|_| vars[rng.gen_range(0..vars.len())].lit(rng.gen()))
                .collect();
            if let Some(c) = Clause::new(lits) {
                f.push(c);
            }
        }
        f
    }

    #[test]
    fn compress_preserves_truth_table_on_random_formulas() {
        for seed in 0..60 {
            let (_, v) = pool_with(6);
            let f = random_cnf(seed, &v, 12);
            for drop in [false, true] {
                let g = compress_cnf(&f, drop);
                for bits in 0u32..64 {
                    let assign =
                        |x: Var| bits >> v.iter().position(|&y| y == x).unwrap() & 1 != 0;
                    assert_eq!(g.eval(&assign), f.eval(&assign), "seed {seed} drop {drop}");
                }
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_lit(n_vars: u32) -> impl Strategy<Value = Lit> {
            (0..n_vars, any::<bool>()).prop_map(|(v, neg)| Lit::new(Var(v), neg))
        }

        fn arb_lits(n_vars: u32, max_len: usize) -> impl Strategy<Value = Vec<Lit>> {
            proptest::collection::vec(arb_lit(n_vars), 0..max_len)
        }

        fn arb_cnf(n_vars: u32) -> impl Strategy<Value = CnfFormula> {
            proptest::collection::vec(arb_lits(n_vars, 4), 0..10).prop_map(|clauses| {
                CnfFormula::from_clauses(
                    clauses.into_iter().filter_map(Clause::new).collect(),
                )
            })
        }

        proptest! {
            #[test]
            fn clause_construction_is_canonical(lits in arb_lits(6, 8)) {
                let has_taut = lits.iter().any(|l| lits.contains(&l.negate()));
                match Clause::new(lits.clone()) {
                    None => prop_assert!(has_taut),
                    Some(c) => {
                        prop_assert!(!has_taut);
                        prop_assert!(c.lits().windows(2).all(|w| w[0] < w[1]));
                        for l in &lits {
                            prop_assert!(c.contains(*l));
                        }
                    }
                }
            }

            #[test]
            fn subsumption_free_after_any_additions(clauses in proptest::collection::vec(arb_lits(5, 4), 1..12)) {
                let mut f = CnfFormula::truth();
                for lits in clauses {
                    if let Some(c) = Clause::new(lits) {
                        f.add_clause_with_subsumption(c);
                    }
                }
                let cs = f.clauses();
                for i in 0..cs.len() {
                    for j in 0..cs.len() {
                        if i != j {
                            prop_assert!(!cs[i].subsumes(&cs[j]),
                                "{:?} subsumes {:?}", cs[i], cs[j]);
                        }
                    }
                }
            }

            #[test]
            fn renaming_composes_and_preserves_semantics(f in arb_cnf(4)) {
                let mut pool = VarPool::new();
                let orig = pool.fresh_vec(VarKind::State, 4);
                let mid = pool.fresh_vec(VarKind::Aux, 4);
                let fin = pool.fresh_vec(VarKind::Aux, 4);
                let step1 = renaming(&orig, &mid);
                let step2 = renaming(&mid, &fin);
                let direct = renaming(&orig, &fin);
                let via_two = f.rename(&step1).unwrap().rename(&step2).unwrap();
                prop_assert_eq!(via_two, f.rename(&direct).unwrap());
            }

            #[test]
            fn restrict_agrees_with_evaluation(f in arb_cnf(6), bits in 0u64..64, mask in 0u64..64) {
                let vars: Vec<Var> = (0..6).map(Var).collect();
                let cube = Cube::new(
                    vars.iter().enumerate()
                        .filter(|&(i, _)| mask >> i & 1 != 0)
                        .map(|(i, v)| v.lit(bits >> i & 1 != 0))
                        .collect(),
                ).unwrap();
                let restricted = f.restrict(&cube);
                // on assignments extending the cube, both formulas agree
                for free in 0u64..64 {
                    let assign = |v: Var| {
                        let i = v.index();
                        if mask >> i & 1 != 0 { bits >> i & 1 != 0 } else { free >> i & 1 != 0 }
                    };
                    prop_assert_eq!(restricted.eval(&assign), f.eval(&assign));
                }
            }
        }
    }

    #[test]
    fn neg_learn_random_formulas_are_exact_negations() {
        for seed in 100..130 {
            let (mut pool, v) = pool_with(5);
            let f = random_cnf(seed, &v, 8);
            let n = neg_learn(&f, &v, &mut pool);
            for bits in 0u32..32 {
                let assign = |x: Var| bits >> v.iter().position(|&y| y == x).unwrap() & 1 != 0;
                assert_eq!(n.eval(&assign), !f.eval(&assign), "seed {seed}");
            }
        }
    }
}
