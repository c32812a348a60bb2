//! Acceptance suite: every criterion runs at its stated tolerance and
//! prints one PASS/FAIL line (visible with `--nocapture`; failures carry
//! the same detail in the panic message).

use std::collections::HashMap;
use std::sync::OnceLock;
use std::time::Instant;

use safesynth_core::aig::SafetySpec;
use safesynth_core::bench::{gen_benchmark, BenchParams, Family};
use safesynth_core::cnf::{Clause, CnfFormula, Cube, Lit, Var, VarKind, VarPool};
use safesynth_core::cnf::negate_pg;
use safesynth_core::extract::{
    cnf_interpol, extract_qbf_learn, extract_sat_learn, ExtractConfig, ExtractStats,
};
use safesynth_core::portfolio::{run_portfolio_extract, run_portfolio_win, PortfolioConfig};
use safesynth_core::qbf::{QbfConfig, QbfEngine, QbfOutcome, TwoQbfQuery};
use safesynth_core::templ::{
    templ_schedule, ScheduleOutcome, TemplConfig, TemplMethod, TemplateKind,
};
use safesynth_core::verify::{check_winning_area, verify_controller, ExplicitGame};
use safesynth_core::win::{
    compute_winning, Backend, Verdict, WinConfig, WinningOutcome,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instances() -> Vec<BenchParams> {
    let mut out = Vec::new();
    let mut push = |family, k, unrealizable| {
        out.push(BenchParams {
            family,
            k,
            unrealizable,
        })
    };
    for k in 2..=10 {
        push(Family::Cnt, k, false);
    }
    for k in 2..=6 {
        push(Family::Mv, k, false);
    }
    push(Family::Bs, 8, false);
    for k in 2..=4 {
        push(Family::Add, k, false);
    }
    for k in 2..=3 {
        push(Family::Mult, k, false);
    }
    // unrealizable variants
    for k in 2..=4 {
        push(Family::Cnt, k, true);
    }
    push(Family::Mv, 2, true);
    push(Family::Mv, 3, true);
    push(Family::Add, 2, true);
    push(Family::Mult, 2, true);
    push(Family::Bs, 8, true);
    assert!(out.len() >= 25, "suite must have at least 25 instances");
    out
}

struct Prepared {
    params: BenchParams,
    spec: SafetySpec,
    oracle_realizable: bool,
}

struct SuiteData {
    prepared: Vec<Prepared>,
    /// (instance name, backend name) -> outcome of the learning backends.
    outcomes: HashMap<(String, &'static str), WinningOutcome>,
}

fn suite() -> &'static SuiteData {
    static DATA: OnceLock<SuiteData> = OnceLock::new();
    DATA.get_or_init(|| {
        let mut prepared = Vec::new();
        for params in instances() {
            let text = gen_benchmark(&params).expect("valid parameters");
            let spec = SafetySpec::parse_aag(&text).expect("generated files parse");
            let oracle_realizable = ExplicitGame::build(&spec)
                .expect("suite instances are within the oracle budget")
                .realizable();
            prepared.push(Prepared {
                params,
                spec,
                oracle_realizable,
            });
        }
        let mut outcomes = HashMap::new();
        for p in &prepared {
            for (name, cfg) in learning_configs() {
                let out = compute_winning(&p.spec, &cfg)
                    .unwrap_or_else(|e| panic!("{} with {} failed: {e}", p.params.name(), name));
                outcomes.insert((p.params.name(), name), out);
            }
        }
        SuiteData { prepared, outcomes }
    })
}

fn learning_configs() -> Vec<(&'static str, WinConfig)> {
    vec![
        (
            "sat1",
            WinConfig {
                backend: Backend::Sat1,
                ..WinConfig::default()
            },
        ),
        (
            "sat1-rg",
            WinConfig {
                backend: Backend::Sat1,
                opt_rg: true,
                ..WinConfig::default()
            },
        ),
        (
            "sat1-rge",
            WinConfig {
                backend: Backend::Sat1,
                opt_rg: true,
                expand_cex: true,
                expand_gen: true,
                ..WinConfig::default()
            },
        ),
        (
            "qbf",
            WinConfig {
                backend: Backend::Qbf,
                ..WinConfig::default()
            },
        ),
    ]
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Realizable => "realizable",
        Verdict::Unrealizable => "unrealizable",
    }
}

/// Criterion 1: every backend agrees with the explicit-state oracle on
/// every suite instance (the template backends may report unknown within
/// their budget, in which case they are skipped and listed).
#[test]
fn criterion_1_oracle_agreement() {
    let started = Instant::now();
    let data = suite();
    let mut checked = 0usize;
    let mut skipped: Vec<String> = Vec::new();
    for p in &data.prepared {
        let name = p.params.name();
        for (backend, _) in learning_configs() {
            let out = &data.outcomes[&(name.clone(), backend)];
            assert_eq!(
                out.verdict == Verdict::Realizable,
                p.oracle_realizable,
                "criterion 1: FAIL — {} with {} returned {}",
                name,
                backend,
                verdict_name(out.verdict)
            );
            checked += 1;
        }
        // template backends within a budget
        let tcfg = TemplConfig {
            time_limit_ms: Some(30_000),
            ..TemplConfig::default()
        };
        for (label, method) in [("templ-sat", TemplMethod::Sat), ("templ-qbf", TemplMethod::Qbf)]
        {
            match templ_schedule(&p.spec, TemplateKind::Cnf, method, &CnfFormula::truth(), &tcfg)
            {
                Ok(ScheduleOutcome::Decided(out)) => {
                    assert_eq!(
                        out.verdict == Verdict::Realizable,
                        p.oracle_realizable,
                        "criterion 1: FAIL — {} with {} returned {}",
                        name,
                        label,
                        verdict_name(out.verdict)
                    );
                    checked += 1;
                }
                Ok(ScheduleOutcome::Unknown) => skipped.push(format!("{name}/{label}")),
                Err(e) => panic!("criterion 1: FAIL — {} with {} errored: {e}", name, label),
            }
        }
        for threads in [1usize, 2, 3] {
            let out = run_portfolio_win(&p.spec, threads, &PortfolioConfig::default())
                .unwrap_or_else(|e| {
                    panic!("criterion 1: FAIL — {} portfolio x{} errored: {e}", name, threads)
                });
            assert_eq!(
                out.verdict == Verdict::Realizable,
                p.oracle_realizable,
                "criterion 1: FAIL — {} portfolio x{} returned {}",
                name,
                threads,
                verdict_name(out.verdict)
            );
            checked += 1;
        }
    }
    println!(
        "criterion 1 (oracle agreement, {} instances, {} backend runs, {} template skips [{}]): PASS in {:.1}s",
        data.prepared.len(),
        checked,
        skipped.len(),
        skipped.join(", "),
        started.elapsed().as_secs_f64()
    );
}

/// Criterion 2: without the reachability optimizations, both learning
/// backends return exactly the oracle winning region.
#[test]
fn criterion_2_winning_region_exactness() {
    let started = Instant::now();
    let data = suite();
    let mut checked = 0usize;
    for p in &data.prepared {
        if !p.oracle_realizable {
            continue;
        }
        let game = ExplicitGame::build(&p.spec).unwrap();
        let w = game.attractor();
        for backend in ["sat1", "qbf"] {
            let out = &data.outcomes[&(p.params.name(), backend)];
            let region = out.region.as_ref().expect("realizable");
            for s in 0..game.n_states() {
                assert_eq!(
                    game.eval_state_formula(&p.spec, region, s),
                    w.contains(s),
                    "criterion 2: FAIL — {} with {} differs from the oracle at state {:b}",
                    p.params.name(),
                    backend,
                    s
                );
            }
            checked += 1;
        }
    }
    println!(
        "criterion 2 (winning-region exactness, {} regions enumerated): PASS in {:.1}s",
        checked,
        started.elapsed().as_secs_f64()
    );
}

/// Criterion 3: every realizable run's region passes the three
/// winning-area checks, and every synthesized controller passes
/// verification with induction plus 10^4 random simulation steps.
#[test]
fn criterion_3_certificate_validity() {
    let started = Instant::now();
    let data = suite();
    let mut regions = 0usize;
    let mut controllers = 0usize;
    for p in &data.prepared {
        if !p.oracle_realizable {
            continue;
        }
        for (backend, _) in learning_configs() {
            let out = &data.outcomes[&(p.params.name(), backend)];
            let region = out.region.as_ref().expect("realizable");
            let report = check_winning_area(&p.spec, region).unwrap();
            assert!(
                report.all_pass(),
                "criterion 3: FAIL — region of {} via {} flunks the certificate:\n{}",
                p.params.name(),
                backend,
                report.to_text()
            );
            regions += 1;
        }
        // one synthesized controller per instance, verified at full depth
        let area = data.outcomes[&(p.params.name(), "sat1")]
            .region
            .clone()
            .unwrap();
        let (ctrl, _) = extract_sat_learn(
            &p.spec,
            &area,
            &ExtractConfig {
                dep_opt: true,
                ..ExtractConfig::default()
            },
        )
        .unwrap_or_else(|e| panic!("criterion 3: extraction failed on {}: {e}", p.params.name()));
        let report = verify_controller(&p.spec, &ctrl, &area, 10_000, 0xC0FFEE).unwrap();
        assert!(
            report.all_pass() && report.sim_steps_run == 10_000,
            "criterion 3: FAIL — controller of {}:\n{}",
            p.params.name(),
            report.to_text()
        );
        controllers += 1;
    }
    println!(
        "criterion 3 (certificates: {} regions, {} controllers with 10^4-step simulations): PASS in {:.1}s",
        regions,
        controllers,
        started.elapsed().as_secs_f64()
    );
}

/// Criterion 4: the counter family needs refinement counts in
/// [2^(k-2), 2^k] for k = 4..8 with consecutive ratios in [1.5, 3].
#[test]
fn criterion_4_cnt_growth_anchor() {
    let started = Instant::now();
    let data = suite();
    let mut counts = Vec::new();
    for k in 4u32..=8 {
        let name = BenchParams {
            family: Family::Cnt,
            k,
            unrealizable: false,
        }
        .name();
        let out = &data.outcomes[&(name, "sat1")];
        let lo = 1u64 << (k - 2);
        let hi = 1u64 << k;
        assert!(
            (lo..=hi).contains(&out.stats.refinements),
            "criterion 4: FAIL — cnt_{k} took {} refinements, outside [{lo}, {hi}]",
            out.stats.refinements
        );
        counts.push(out.stats.refinements);
    }
    for (i, pair) in counts.windows(2).enumerate() {
        let ratio = pair[1] as f64 / pair[0] as f64;
        assert!(
            (1.5..=3.0).contains(&ratio),
            "criterion 4: FAIL — refinement ratio cnt_{}/cnt_{} = {ratio:.2} outside [1.5, 3]",
            i + 5,
            i + 4
        );
    }
    println!(
        "criterion 4 (cnt growth anchor, refinements {:?}): PASS in {:.1}s",
        counts,
        started.elapsed().as_secs_f64()
    );
}

/// Criterion 5: the CEGIS template search solves every counter instance up
/// to k = 10 with expressiveness at most 4 in under 10 seconds, and the
/// winning areas pass the certificate.
#[test]
fn criterion_5_template_anchor() {
    let overall = Instant::now();
    let mut worst_ms = 0u64;
    for k in 2u32..=10 {
        let params = BenchParams {
            family: Family::Cnt,
            k,
            unrealizable: false,
        };
        let spec = SafetySpec::parse_aag(&gen_benchmark(&params).unwrap()).unwrap();
        let started = Instant::now();
        let out = templ_schedule(
            &spec,
            TemplateKind::Cnf,
            TemplMethod::Sat,
            &CnfFormula::truth(),
            &TemplConfig::default(),
        )
        .unwrap();
        let elapsed_ms = started.elapsed().as_millis() as u64;
        worst_ms = worst_ms.max(elapsed_ms);
        let ScheduleOutcome::Decided(out) = out else {
            panic!("criterion 5: FAIL — template search undecided on cnt_{k}");
        };
        assert_eq!(out.verdict, Verdict::Realizable, "criterion 5: cnt_{k}");
        assert!(
            out.stats.refinements <= 4,
            "criterion 5: FAIL — cnt_{k} needed expressiveness beyond 4 ({} attempts)",
            out.stats.refinements
        );
        assert!(
            elapsed_ms < 10_000,
            "criterion 5: FAIL — cnt_{k} took {elapsed_ms} ms (limit 10 s)"
        );
        let area = out.region.unwrap();
        let report = check_winning_area(&spec, &area).unwrap();
        assert!(
            report.all_pass(),
            "criterion 5: FAIL — cnt_{k} area flunks the certificate:\n{}",
            report.to_text()
        );
    }
    println!(
        "criterion 5 (template anchor cnt_2..10, worst instance {} ms < 10000 ms): PASS in {:.1}s",
        worst_ms,
        overall.elapsed().as_secs_f64()
    );
}

/// Criterion 6: 200 random jointly unsatisfiable constraint pairs with at
/// most 12 shared variables; the learned interpolant satisfies both
/// implications by truth-table enumeration, and the extraction minimizer
/// never increases the literal count.
#[test]
fn criterion_6_interpolant_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1CE);
    for round in 0..200u64 {
        let mut pool = VarPool::new();
        let n_shared = rng.gen_range(4..=12usize);
        let shared = pool.fresh_vec(VarKind::State, n_shared);
        let priv1 = pool.fresh_vec(VarKind::Aux, rng.gen_range(0..=3usize));
        let priv0 = pool.fresh_vec(VarKind::Aux, rng.gen_range(0..=3usize));
        // a random separator guarantees joint unsatisfiability
        let mut sep = CnfFormula::truth();
        for _ in 0..rng.gen_range(1..5usize) {
            let lits: Vec<Lit> = (0..rng.gen_range(1..4usize))
                .map(|_| shared[rng.gen_range(0..n_shared)].lit(rng.gen()))
                .collect();
            if let Some(c) = Clause::new(lits) {
                sep.push(c);
            }
        }
        let mut m1 = sep.clone();
        let neg = negate_pg(&sep, &mut pool);
        let mut m0 = neg.cnf.clone();
        let m0_private: Vec<Var> = priv0.iter().copied().chain(neg.aux.iter().copied()).collect();
        for (target, privates) in [(&mut m1, &priv1), (&mut m0, &priv0)] {
            for _ in 0..rng.gen_range(0..4usize) {
                if privates.is_empty() {
                    break;
                }
                let lits = vec![
                    privates[rng.gen_range(0..privates.len())].lit(rng.gen()),
                    shared[rng.gen_range(0..n_shared)].lit(rng.gen()),
                ];
                if let Some(c) = Clause::new(lits) {
                    target.push(c);
                }
            }
        }
        let mut stats = ExtractStats::default();
        let f = cnf_interpol(&m1, &m0, &shared, round, &mut stats)
            .unwrap_or_else(|e| panic!("criterion 6: round {round}: {e}"));
        // truth-table check of m1 -> f -> !m0 over the shared variables
        let holds = |formula: &CnfFormula, privates: &[Var], shared_bits: u64| -> bool {
            let np = privates.len();
            (0u64..1 << np).any(|pb| {
                formula.eval(&|v| {
                    if let Some(i) = shared.iter().position(|&x| x == v) {
                        shared_bits >> i & 1 != 0
                    } else if let Some(i) = privates.iter().position(|&x| x == v) {
                        pb >> i & 1 != 0
                    } else {
                        false
                    }
                })
            })
        };
        for bits in 0u64..1 << n_shared {
            let f_val = f.eval(&|v| {
                let i = shared.iter().position(|&x| x == v).unwrap();
                bits >> i & 1 != 0
            });
            if holds(&m1, &priv1, bits) {
                assert!(
                    f_val,
                    "criterion 6: FAIL — round {round}: m1 holds but interpolant is false at {bits:b}"
                );
            }
            if f_val {
                assert!(
                    !holds(&m0, &m0_private, bits),
                    "criterion 6: FAIL — round {round}: interpolant and m0 both hold at {bits:b}"
                );
            }
        }
    }
    // minimization monotonicity across the extraction suite
    let mut minimized = 0usize;
    for (family, k) in [(Family::Cnt, 4u32), (Family::Mv, 4), (Family::Add, 3)] {
        let params = BenchParams {
            family,
            k,
            unrealizable: false,
        };
        let spec = SafetySpec::parse_aag(&gen_benchmark(&params).unwrap()).unwrap();
        let area = compute_winning(&spec, &WinConfig::default())
            .unwrap()
            .region
            .unwrap();
        let (_, stats) = extract_sat_learn(
            &spec,
            &area,
            &ExtractConfig {
                dep_opt: true,
                minimize: true,
                ..ExtractConfig::default()
            },
        )
        .unwrap();
        assert!(
            stats.literals_after_minimize <= stats.literals_before_minimize,
            "criterion 6: FAIL — minimization grew {} from {} to {} literals",
            params.name(),
            stats.literals_before_minimize,
            stats.literals_after_minimize
        );
        minimized += 1;
    }
    println!(
        "criterion 6 (200 interpolant pairs by truth table, {} monotone minimizations): PASS in {:.1}s",
        minimized,
        started.elapsed().as_secs_f64()
    );
}

/// Criterion 7: on 500 random two-alternation queries with at most 16
/// variables, the CEGAR verdict equals the expansion verdict, and every
/// sat model survives the universal-validation check.
#[test]
fn criterion_7_two_qbf_engine() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x2b51);
    let mut sat_count = 0usize;
    for round in 0..500u64 {
        let mut pool = VarPool::new();
        let na = rng.gen_range(0..=6usize);
        let nb = rng.gen_range(0..=6usize);
        let nc = rng.gen_range(0..=(16 - na - nb).min(6));
        let a = pool.fresh_vec(VarKind::Aux, na);
        let b = pool.fresh_vec(VarKind::Aux, nb);
        let c = pool.fresh_vec(VarKind::Aux, nc);
        let all: Vec<Var> = a.iter().chain(&b).chain(&c).copied().collect();
        if all.is_empty() {
            continue;
        }
        let mut matrix = CnfFormula::truth();
        for _ in 0..rng.gen_range(1..12usize) {
            let lits: Vec<Lit> = (0..rng.gen_range(1..4usize))
                .map(|_| all[rng.gen_range(0..all.len())].lit(rng.gen()))
                .collect();
            if let Some(cl) = Clause::new(lits) {
                matrix.push(cl);
            }
        }
        let q = TwoQbfQuery::new(a, b, c, matrix).unwrap();
        let mut engine = QbfEngine::new(QbfConfig::default());
        let solved = engine.solve(&q, &mut pool).unwrap();
        let expanded = engine.solve_expansion(&q, &mut pool).unwrap();
        assert_eq!(
            solved.is_sat(),
            expanded.is_sat(),
            "criterion 7: FAIL — round {round}: cegar and expansion disagree"
        );
        if let QbfOutcome::Sat { model_a } = solved {
            sat_count += 1;
            assert!(
                engine.validate_model(&q, &model_a, &mut pool).unwrap(),
                "criterion 7: FAIL — round {round}: model fails universal validation"
            );
        }
    }
    println!(
        "criterion 7 (500 random two-alternation queries, {} sat models validated): PASS in {:.1}s",
        sat_count,
        started.elapsed().as_secs_f64()
    );
}

/// Criterion 8: every extraction engine yields a verified controller on
/// every realizable suite instance, and the extraction portfolio returns
/// the smallest gate count among its finished workers.
#[test]
fn criterion_8_cross_backend_extraction() {
    let started = Instant::now();
    let data = suite();
    let mut runs = 0usize;
    for p in &data.prepared {
        if !p.oracle_realizable {
            continue;
        }
        let area = data.outcomes[&(p.params.name(), "sat1")]
            .region
            .clone()
            .unwrap();
        let mut gate_counts: Vec<(String, usize)> = Vec::new();
        for (label, dep, min) in [
            ("sat-learn", false, false),
            ("sat-learn-dep", true, false),
            ("sat-learn-min", false, true),
            ("sat-learn-dep-min", true, true),
        ] {
            let cfg = ExtractConfig {
                dep_opt: dep,
                minimize: min,
                ..ExtractConfig::default()
            };
            let (ctrl, stats) = extract_sat_learn(&p.spec, &area, &cfg).unwrap_or_else(|e| {
                panic!("criterion 8: FAIL — {} {label}: {e}", p.params.name())
            });
            let report = verify_controller(&p.spec, &ctrl, &area, 2_000, 7).unwrap();
            assert!(
                report.all_pass(),
                "criterion 8: FAIL — {} {label} controller:\n{}",
                p.params.name(),
                report.to_text()
            );
            if min {
                assert!(
                    stats.literals_after_minimize <= stats.literals_before_minimize,
                    "criterion 8: FAIL — minimization grew literals on {}",
                    p.params.name()
                );
            }
            gate_counts.push((label.to_string(), ctrl.gate_count()));
            runs += 1;
        }
        let (ctrl, _) =
            extract_qbf_learn(&p.spec, &area, &ExtractConfig::default()).unwrap_or_else(|e| {
                panic!("criterion 8: FAIL — {} qbf-learn: {e}", p.params.name())
            });
        let report = verify_controller(&p.spec, &ctrl, &area, 2_000, 8).unwrap();
        assert!(
            report.all_pass(),
            "criterion 8: FAIL — {} qbf-learn controller:\n{}",
            p.params.name(),
            report.to_text()
        );
        gate_counts.push(("qbf-learn".into(), ctrl.gate_count()));
        runs += 1;

        // the portfolio result must be verified and no larger than the
        // smallest single-engine result that participates in it
        let (best, _) =
            run_portfolio_extract(&p.spec, &area, 3, false, &PortfolioConfig::default())
                .unwrap_or_else(|e| {
                    panic!("criterion 8: FAIL — {} extraction portfolio: {e}", p.params.name())
                });
        let report = verify_controller(&p.spec, &best, &area, 2_000, 9).unwrap();
        assert!(
            report.all_pass(),
            "criterion 8: FAIL — {} portfolio controller:\n{}",
            p.params.name(),
            report.to_text()
        );
        let participants: usize = gate_counts
            .iter()
            .filter(|(l, _)| l == "sat-learn" || l == "sat-learn-dep" || l == "qbf-learn")
            .map(|&(_, g)| g)
            .min()
            .expect("three participants");
        assert!(
            best.gate_count() <= participants,
            "criterion 8: FAIL — {} portfolio returned {} gates, participants reached {}",
            p.params.name(),
            best.gate_count(),
            participants
        );
        runs += 1;
    }
    println!(
        "criterion 8 (cross-backend extraction, {} verified controller runs): PASS in {:.1}s",
        runs,
        started.elapsed().as_secs_f64()
    );
}

/// Criterion 9: CNF compression preserves truth tables on 200 random
/// formulas, and the learned negation double-checks against the original
/// with a propositional solver.
#[test]
fn criterion_9_cnf_toolbox() {
    use safesynth_core::cnf::{compress_cnf, neg_learn};
    use safesynth_core::sat::SatSession;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc99);
    for round in 0..200u64 {
        let mut pool = VarPool::new();
        let n = rng.gen_range(3..=12usize);
        let vars = pool.fresh_vec(VarKind::State, n);
        let mut f = CnfFormula::truth();
        for _ in 0..rng.gen_range(0..=2 * n) {
            let lits: Vec<Lit> = (0..rng.gen_range(1..4usize))
                .map(|_| vars[rng.gen_range(0..n)].lit(rng.gen()))
                .collect();
            if let Some(c) = Clause::new(lits) {
                f.push(c);
            }
        }
        for drop in [false, true] {
            let g = compress_cnf(&f, drop);
            for bits in 0u64..1 << n {
                let assign = |v: Var| {
                    let i = vars.iter().position(|&x| x == v).unwrap();
                    bits >> i & 1 != 0
                };
                assert_eq!(
                    g.eval(&assign),
                    f.eval(&assign),
                    "criterion 9: FAIL — round {round} drop={drop}: compression changed the truth table at {bits:b}"
                );
            }
        }
        // negation double-check: f & n unsat, f | n valid
        let n_formula = neg_learn(&f, &vars, &mut pool);
        let mut both = SatSession::new();
        both.assert_formula(&f);
        both.assert_formula(&n_formula);
        assert!(
            !both.solve(&Cube::empty()).is_sat(),
            "criterion 9: FAIL — round {round}: f & neg(f) satisfiable"
        );
        let neg_f = negate_pg(&f, &mut pool);
        let neg_n = negate_pg(&n_formula, &mut pool);
        let mut neither = SatSession::new();
        neither.assert_formula(&neg_f.cnf);
        neither.assert_formula(&neg_n.cnf);
        assert!(
            !neither.solve(&Cube::empty()).is_sat(),
            "criterion 9: FAIL — round {round}: f | neg(f) not valid"
        );
    }
    println!(
        "criterion 9 (200 compression truth tables and negation double-checks): PASS in {:.1}s",
        started.elapsed().as_secs_f64()
    );
}
