//! Deciding prefix-shaped `exists A . forall B . exists C` formulas with
//! model extraction for the outer block.
//!
//! The solver runs counterexample-guided refinement with two cooperating SAT
//! sessions: a candidate session proposes assignments for the outer block,
//! accumulating matrix copies instantiated at refuting universal
//! assignments; a verification loop searches for a universal assignment that
//! refutes the current candidate. Every query in the synthesis algorithms
//! has exactly this prefix shape, so no general QBF machinery is needed.

use crate::cnf::{negate_pg, renaming, CnfFormula, Cube, Var, VarKind, VarPool};
use crate::sat::SatSession;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QbfError {
    #[error("query blocks are not disjoint")]
    OverlappingBlocks,
    #[error("matrix variable {0:?} is not covered by any quantifier block")]
    UnboundVariable(Var),
    #[error("iteration budget of {0} exceeded")]
    ResourceLimit(u64),
    #[error("universal block size {size} exceeds the expansion bound {bound}")]
    ExpansionBound { size: usize, bound: usize },
}

/// A closed formula `exists A . forall B . exists C . matrix`, with the
/// matrix in CNF. All CNF auxiliaries belong in block C.
#[derive(Debug, Clone)]
pub struct TwoQbfQuery {
    pub block_a: Vec<Var>,
    pub block_b: Vec<Var>,
    pub block_c: Vec<Var>,
    pub matrix: CnfFormula,
}

impl TwoQbfQuery {
    pub fn new(
        block_a: Vec<Var>,
        block_b: Vec<Var>,
        block_c: Vec<Var>,
        matrix: CnfFormula,
    ) -> Result<TwoQbfQuery, QbfError> {
        let q = TwoQbfQuery {
            block_a,
            block_b,
            block_c,
            matrix,
        };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<(), QbfError> {
        let mut all: Vec<Var> = Vec::new();
        all.extend(&self.block_a);
        all.extend(&self.block_b);
        all.extend(&self.block_c);
        let n = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != n {
            return Err(QbfError::OverlappingBlocks);
        }
        for v in self.matrix.vars() {
            if all.binary_search(&v).is_err() {
                return Err(QbfError::UnboundVariable(v));
            }
        }
        Ok(())
    }

    /// QDIMACS text for external cross-checks.
    pub fn to_qdimacs(&self) -> String {
        let mut max_var = 0;
        for v in self
            .block_a
            .iter()
            .chain(&self.block_b)
            .chain(&self.block_c)
        {
            max_var = max_var.max(v.0 + 1);
        }
        let mut out = format!("p cnf {} {}\n", max_var, self.matrix.len());
        let mut prefix = |q: char, vars: &[Var]| {
            if !vars.is_empty() {
                out.push(q);
                for v in vars {
                    out.push_str(&format!(" {}", v.0 + 1));
                }
                out.push_str(" 0\n");
            }
        };
        prefix('e', &self.block_a);
        prefix('a', &self.block_b);
        prefix('e', &self.block_c);
        let body = self.matrix.to_dimacs();
        let body = body.split_once('\n').map(|x| x.1).unwrap_or("");
        out.push_str(body);
        out
    }
}

/// Verdict of a 2QBF solve. On sat, `model_a` is a full assignment to block
/// A under which `forall B exists C matrix` holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QbfOutcome {
    Sat { model_a: Cube },
    Unsat,
}

impl QbfOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, QbfOutcome::Sat { .. })
    }
}

/// Solver limits. The learning loops issue many small queries, so the
/// default budget is generous but finite.
#[derive(Debug, Clone, Copy)]
pub struct QbfConfig {
    pub max_iterations: u64,
    pub expansion_bound: usize,
    pub seed: u64,
}

impl Default for QbfConfig {
    fn default() -> Self {
        QbfConfig {
            max_iterations: 2_000_000,
            expansion_bound: 16,
            seed: 0,
        }
    }
}

/// Per-engine counters.
#[derive(Debug, Default, Clone, Copy)]
pub struct QbfStats {
    pub solve_calls: u64,
    pub candidates: u64,
    pub counterexamples: u64,
    pub sat_calls: u64,
}

/// CEGAR 2QBF solver.
pub struct QbfEngine {
    pub config: QbfConfig,
    stats: QbfStats,
}

impl Default for QbfEngine {
    fn default() -> Self {
        QbfEngine::new(QbfConfig::default())
    }
}

impl QbfEngine {
    pub fn new(config: QbfConfig) -> QbfEngine {
        QbfEngine {
            config,
            stats: QbfStats::default(),
        }
    }

    pub fn stats(&self) -> QbfStats {
        self.stats
    }

    /// Decide the query and on sat return a verified block-A model.
    pub fn solve(&mut self, q: &TwoQbfQuery, pool: &mut VarPool) -> Result<QbfOutcome, QbfError> {
        q.validate()?;
        self.stats.solve_calls += 1;
        if q.matrix.has_empty_clause() {
            return Ok(QbfOutcome::Unsat);
        }
        if q.block_b.is_empty() {
            // purely existential: one propositional call
            let mut sess = SatSession::with_seed(self.config.seed);
            sess.assert_formula(&q.matrix);
            self.stats.sat_calls += 1;
            let res = sess.solve(&Cube::empty());
            return Ok(if res.is_sat() {
                QbfOutcome::Sat {
                    model_a: res.model_cube(&q.block_a),
                }
            } else {
                QbfOutcome::Unsat
            });
        }

        let mut budget = self.config.max_iterations;
        let mut candidate_sess = SatSession::with_seed(self.config.seed);
        // The matrix session checks candidate/universal pairs; it never
        // changes, so one incremental session serves the whole solve.
        let mut matrix_sess = SatSession::with_seed(self.config.seed);
        matrix_sess.assert_formula(&q.matrix);
        loop {
            if budget == 0 {
                return Err(QbfError::ResourceLimit(self.config.max_iterations));
            }
            budget -= 1;
            self.stats.sat_calls += 1;
            let cand = candidate_sess.solve(&Cube::empty());
            if !cand.is_sat() {
                return Ok(QbfOutcome::Unsat);
            }
            self.stats.candidates += 1;
            let a = cand.model_cube(&q.block_a);
            match self.refute(q, &a, &mut matrix_sess, pool, &mut budget)? {
                None => return Ok(QbfOutcome::Sat { model_a: a }),
                Some(b) => {
                    self.stats.counterexamples += 1;
                    // Instantiate the matrix at the refuting universal
                    // assignment with a fresh copy of block C and add it as
                    // a constraint on future candidates.
                    let restricted = q.matrix.restrict(&b);
                    let fresh_c = pool.fresh_vec(VarKind::Aux, q.block_c.len());
                    let map = renaming(&q.block_c, &fresh_c);
                    let copy = restricted.rename(&map).expect("fresh variables");
                    candidate_sess.assert_formula(&copy);
                }
            }
        }
    }

    /// Search for a universal assignment refuting candidate `a`: some `b`
    /// such that the matrix restricted to `(a, b)` has no C-model. Returns
    /// `None` when the candidate survives, which certifies
    /// `forall B exists C matrix` under `a`.
    fn refute(
        &mut self,
        q: &TwoQbfQuery,
        a: &Cube,
        matrix_sess: &mut SatSession,
        pool: &mut VarPool,
        budget: &mut u64,
    ) -> Result<Option<Cube>, QbfError> {
        let mut universal_sess = SatSession::with_seed(self.config.seed);
        loop {
            if *budget == 0 {
                return Err(QbfError::ResourceLimit(self.config.max_iterations));
            }
            *budget -= 1;
            self.stats.sat_calls += 1;
            let rb = universal_sess.solve(&Cube::empty());
            if !rb.is_sat() {
                return Ok(None);
            }
            let b = rb.model_cube(&q.block_b);
            let mut assumptions = a.lits().to_vec();
            assumptions.extend_from_slice(b.lits());
            self.stats.sat_calls += 1;
            let rc = matrix_sess.solve_lits(&assumptions);
            if !rc.is_sat() {
                return Ok(Some(b));
            }
            // (a, b) is satisfiable with some c; exclude every universal
            // assignment that this c already handles.
            let c = rc.model_cube(&q.block_c);
            let mut fixed = a.lits().to_vec();
            fixed.extend_from_slice(c.lits());
            let over_b = q.matrix.restrict(&Cube::new(fixed).expect("disjoint blocks"));
            debug_assert!(!over_b.has_empty_clause());
            let neg = negate_pg(&over_b, pool);
            universal_sess.assert_formula(&neg.cnf);
        }
    }

    /// Expand all universals into a propositional formula and solve it once.
    /// Agrees with [`QbfEngine::solve`]; used for cross-checks.
    pub fn solve_expansion(
        &mut self,
        q: &TwoQbfQuery,
        pool: &mut VarPool,
    ) -> Result<QbfOutcome, QbfError> {
        q.validate()?;
        if q.block_b.len() > self.config.expansion_bound {
            return Err(QbfError::ExpansionBound {
                size: q.block_b.len(),
                bound: self.config.expansion_bound,
            });
        }
        let mut sess = SatSession::with_seed(self.config.seed);
        let n = q.block_b.len();
        for bits in 0u64..1u64 << n {
            let b = Cube::new(
                q.block_b
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v.lit(bits >> i & 1 != 0))
                    .collect(),
            )
            .expect("distinct variables");
            let restricted = q.matrix.restrict(&b);
            let fresh_c = pool.fresh_vec(VarKind::Aux, q.block_c.len());
            let map = renaming(&q.block_c, &fresh_c);
            sess.assert_formula(&restricted.rename(&map).expect("fresh variables"));
        }
        self.stats.sat_calls += 1;
        let res = sess.solve(&Cube::empty());
        Ok(if res.is_sat() {
            QbfOutcome::Sat {
                model_a: res.model_cube(&q.block_a),
            }
        } else {
            QbfOutcome::Unsat
        })
    }

    /// Independent check that `forall B exists C matrix` holds under `a`
    /// (a fresh run of the refutation loop).
    pub fn validate_model(
        &mut self,
        q: &TwoQbfQuery,
        a: &Cube,
        pool: &mut VarPool,
    ) -> Result<bool, QbfError> {
        let mut matrix_sess = SatSession::with_seed(self.config.seed);
        matrix_sess.assert_formula(&q.matrix);
        let mut budget = self.config.max_iterations;
        Ok(self
            .refute(q, a, &mut matrix_sess, pool, &mut budget)?
            .is_none())
    }
}
