//! Run several winning-region backends concurrently with clause sharing,
//! and several extraction backends as a simple portfolio.
//!
//! Workers exchange immutable values over channels and honor cooperative
//! cancellation at iteration boundaries; solver sessions are never shared.
//! The first definitive verdict wins and is re-verified before being
//! returned. With more than one thread the winning area (beyond the
//! verdict) is not reproducible across runs; statistics record which worker
//! produced it.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::aig::{ControllerCircuit, SafetySpec};
use crate::cnf::{Clause, CnfFormula};
use crate::extract::{
    extract_qbf_learn, extract_sat_learn, ExtractConfig, ExtractError, ExtractStats,
};
use crate::qbf::QbfConfig;
use crate::templ::{templ_schedule, ScheduleOutcome, TemplConfig, TemplError, TemplMethod, TemplateKind};
use crate::verify::check_winning_area;
use crate::win::{
    sat_win1_shared, ClauseBus, Verdict, WinConfig, WinError, WinningOutcome,
};

/// Message kinds exchanged between portfolio workers and the coordinator.
pub enum ShareMsg {
    /// A newly discovered region clause; sound to conjoin to any worker's
    /// region under the reachability-relaxed soundness condition.
    FClause { origin: usize, clause: Clause },
    /// Cooperative termination request.
    Terminate,
    /// A worker's final outcome.
    Result {
        origin: usize,
        outcome: Box<Result<WinningOutcome, WinError>>,
    },
}

/// Clause exchange over channels; receivers inject clauses only at
/// iteration boundaries (the learning loops drain between iterations).
struct MpscBus {
    origin: usize,
    peers: Vec<Sender<ShareMsg>>,
    inbox: Receiver<ShareMsg>,
}

impl ClauseBus for MpscBus {
    fn publish(&mut self, c: &Clause) {
        for p in &self.peers {
            let _ = p.send(ShareMsg::FClause {
                origin: self.origin,
                clause: c.clone(),
            });
        }
    }

    fn drain(&mut self) -> Vec<Clause> {
        let mut out = Vec::new();
        while let Ok(msg) = self.inbox.try_recv() {
            if let ShareMsg::FClause { clause, .. } = msg {
                out.push(clause);
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct PortfolioConfig {
    pub seed: u64,
    pub time_limit_ms: Option<u64>,
    /// Template thread: how long each schedule attempt may run before the
    /// method is alternated.
    pub alternation_period_ms: u64,
    /// Extraction: allowed waiting/working ratio once the first worker has
    /// finished.
    pub wait_ratio: f64,
    pub qbf: QbfConfig,
}

impl Default for PortfolioConfig {
    fn default() -> Self {
        PortfolioConfig {
            seed: 0,
            time_limit_ms: None,
            alternation_period_ms: 2000,
            wait_ratio: 0.25,
            qbf: QbfConfig::default(),
        }
    }
}

fn sat_worker_config(cfg: &PortfolioConfig, expand: bool, cancel: Arc<AtomicBool>) -> WinConfig {
    WinConfig {
        opt_rg: true,
        expand_cex: expand,
        expand_gen: expand,
        seed: cfg.seed,
        time_limit_ms: cfg.time_limit_ms,
        qbf: cfg.qbf,
        cancel: Some(cancel),
        ..WinConfig::default()
    }
}

/// The template worker: alternate the CEGIS and QBF realizations on a
/// configurable period, treating received region clauses as a fixed part of
/// the winning area to complete.
fn template_worker(
    spec: &SafetySpec,
    cfg: &PortfolioConfig,
    cancel: Arc<AtomicBool>,
    mut bus: MpscBus,
) -> Result<WinningOutcome, WinError> {
    let mut fixed = CnfFormula::truth();
    let mut method = TemplMethod::Sat;
    let started = Instant::now();
    loop {
        if cancel.load(Ordering::Relaxed) {
            return Err(WinError::Cancelled);
        }
        if let Some(limit) = cfg.time_limit_ms {
            if started.elapsed().as_millis() as u64 > limit {
                return Err(WinError::TimeLimit(limit));
            }
        }
        for c in bus.drain() {
            fixed.add_clause_with_subsumption(c);
        }
        let tcfg = TemplConfig {
            seed: cfg.seed,
            time_limit_ms: Some(cfg.alternation_period_ms),
            qbf: cfg.qbf,
            cancel: Some(cancel.clone()),
            ..TemplConfig::default()
        };
        match templ_schedule(spec, TemplateKind::Cnf, method, &fixed, &tcfg) {
            Ok(ScheduleOutcome::Decided(mut outcome)) => {
                outcome.stats.provenance = format!("portfolio-templ-{:?}", method).to_lowercase();
                return Ok(outcome);
            }
            Ok(ScheduleOutcome::Unknown) | Err(TemplError::TimeLimit(_)) => {
                // alternate and retry with the refreshed fixed clauses
                method = match method {
                    TemplMethod::Sat => TemplMethod::Qbf,
                    TemplMethod::Qbf => TemplMethod::Sat,
                };
            }
            Err(TemplError::Cancelled) => return Err(WinError::Cancelled),
            Err(TemplError::Qbf(e)) => return Err(WinError::Qbf(e)),
            Err(_) => {
                method = match method {
                    TemplMethod::Sat => TemplMethod::Qbf,
                    TemplMethod::Qbf => TemplMethod::Sat,
                };
            }
        }
    }
}

/// Run 1 to 3 winning-region workers concurrently: the advanced SAT loop
/// with reachability generalization and quantifier expansion, a template
/// thread, and a SAT loop without expansion. Newly discovered region
/// clauses are broadcast; the first definitive verdict wins and is
/// re-verified.
pub fn run_portfolio_win(
    spec: &SafetySpec,
    threads: usize,
    cfg: &PortfolioConfig,
) -> Result<WinningOutcome, WinError> {
    let threads = threads.clamp(1, 3);
    let cancel = Arc::new(AtomicBool::new(false));
    if threads == 1 {
        let wcfg = sat_worker_config(cfg, true, cancel);
        let mut out = crate::win::sat_win1(spec, &wcfg)?;
        out.stats.provenance = "portfolio-sat1-rge".into();
        return Ok(out);
    }

    // channel plumbing: every worker gets an inbox; results go to the
    // coordinator
    let mut senders: Vec<Sender<ShareMsg>> = Vec::new();
    let mut inboxes: Vec<Receiver<ShareMsg>> = Vec::new();
    for _ in 0..threads {
        let (tx, rx) = channel();
        senders.push(tx);
        inboxes.push(rx);
    }
    let (result_tx, result_rx) = channel::<ShareMsg>();

    let outcome = std::thread::scope(|scope| {
        for (id, inbox) in inboxes.into_iter().enumerate() {
            let peers: Vec<Sender<ShareMsg>> = senders
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != id)
                .map(|(_, s)| s.clone())
                .collect();
            let bus = MpscBus {
                origin: id,
                peers,
                inbox,
            };
            let result_tx = result_tx.clone();
            let cancel = cancel.clone();
            let cfg = cfg.clone();
            scope.spawn(move || {
                let mut bus = bus;
                let outcome = match id {
                    0 => {
                        let wcfg = sat_worker_config(&cfg, true, cancel.clone());
                        sat_win1_shared(spec, &wcfg, &mut bus).map(|mut o| {
                            o.stats.provenance = "portfolio-sat1-rge".into();
                            o
                        })
                    }
                    1 => template_worker(spec, &cfg, cancel.clone(), bus),
                    _ => {
                        let wcfg = sat_worker_config(&cfg, false, cancel.clone());
                        sat_win1_shared(spec, &wcfg, &mut bus).map(|mut o| {
                            o.stats.provenance = "portfolio-sat1-rg".into();
                            o
                        })
                    }
                };
                let _ = result_tx.send(ShareMsg::Result {
                    origin: id,
                    outcome: Box::new(outcome),
                });
            });
        }
        drop(result_tx);

        let mut first_error: Option<WinError> = None;
        let mut winner: Option<WinningOutcome> = None;
        for _ in 0..threads {
            match result_rx.recv() {
                Ok(ShareMsg::Result { outcome, .. }) => match *outcome {
                    Ok(out) => {
                        winner = Some(out);
                        break;
                    }
                    Err(e) => {
                        if first_error.is_none() && !matches!(e, WinError::Cancelled) {
                            first_error = Some(e);
                        }
                    }
                },
                Ok(_) => {}
                Err(_) => break,
            }
        }
        cancel.store(true, Ordering::Relaxed);
        for s in &senders {
            let _ = s.send(ShareMsg::Terminate);
        }
        // remaining workers terminate cooperatively; the scope joins them
        match winner {
            Some(out) => Ok(out),
            None => Err(first_error.unwrap_or(WinError::Cancelled)),
        }
    })?;

    // re-verify before returning
    if outcome.verdict == Verdict::Realizable {
        let region = outcome.region.as_ref().expect("realizable outcome");
        let report = check_winning_area(spec, region).map_err(|_| WinError::Cancelled);
        match report {
            Ok(r) if r.all_pass() => {}
            _ => {
                return Err(WinError::BadAreaFile(
                    "portfolio result failed re-verification".into(),
                ))
            }
        }
    }
    Ok(outcome)
}

enum ExtractMsg {
    Done(Box<Result<(ControllerCircuit, ExtractStats), ExtractError>>),
}

/// Run 1 to 3 extraction workers: interpolation with the dependency
/// widening, QBF learning, and interpolation without widening. Waits for
/// more results while the waiting/working ratio stays below the threshold
/// and returns the smallest verified controller.
pub fn run_portfolio_extract(
    spec: &SafetySpec,
    area: &CnfFormula,
    threads: usize,
    minimize: bool,
    cfg: &PortfolioConfig,
) -> Result<(ControllerCircuit, ExtractStats), ExtractError> {
    let threads = threads.clamp(1, 3);
    let cancel = Arc::new(AtomicBool::new(false));
    let base = ExtractConfig {
        seed: cfg.seed,
        qbf: cfg.qbf,
        time_limit_ms: cfg.time_limit_ms,
        cancel: Some(cancel.clone()),
        minimize,
        ..ExtractConfig::default()
    };
    if threads == 1 {
        let cfg1 = ExtractConfig {
            dep_opt: true,
            ..base
        };
        return extract_sat_learn(spec, area, &cfg1);
    }
    let (tx, rx) = channel::<ExtractMsg>();
    let started = Instant::now();
    std::thread::scope(|scope| {
        for id in 0..threads {
            let tx = tx.clone();
            let base = base.clone();
            scope.spawn(move || {
                let outcome = match id {
                    0 => extract_sat_learn(
                        spec,
                        area,
                        &ExtractConfig {
                            dep_opt: true,
                            ..base
                        },
                    ),
                    1 => extract_qbf_learn(spec, area, &base),
                    _ => extract_sat_learn(
                        spec,
                        area,
                        &ExtractConfig {
                            dep_opt: false,
                            ..base
                        },
                    ),
                };
                let _ = tx.send(ExtractMsg::Done(Box::new(outcome)));
            });
        }
        drop(tx);

        let mut results: Vec<(ControllerCircuit, ExtractStats)> = Vec::new();
        let mut first_error: Option<ExtractError> = None;
        let mut received = 0;
        let mut first_done: Option<Duration> = None;
        while received < threads {
            let msg = if let Some(first) = first_done {
                // ratio heuristic: waiting time is bounded by a fraction of
                // the working time of the first finisher
                let deadline = first + first.mul_f64(cfg.wait_ratio.max(0.0));
                let now = started.elapsed();
                if now >= deadline {
                    break;
                }
                match rx.recv_timeout(deadline - now) {
                    Ok(m) => m,
                    Err(_) => break,
                }
            } else {
                match rx.recv() {
                    Ok(m) => m,
                    Err(_) => break,
                }
            };
            let ExtractMsg::Done(outcome) = msg;
            received += 1;
            match *outcome {
                Ok(pair) => {
                    if first_done.is_none() {
                        first_done = Some(started.elapsed());
                    }
                    results.push(pair);
                }
                Err(e) => {
                    if first_error.is_none() && !matches!(e, ExtractError::Cancelled) {
                        first_error = Some(e);
                    }
                }
            }
        }
        cancel.store(true, Ordering::Relaxed);
        // keep only verified controllers, smallest gate count first
        let mut verified: Vec<(ControllerCircuit, ExtractStats)> = Vec::new();
        for (ctrl, stats) in results {
            let ok = crate::verify::verify_controller(spec, &ctrl, area, 1000, cfg.seed)
                .map(|r| r.all_pass())
                .unwrap_or(false);
            if ok {
                verified.push((ctrl, stats));
            }
        }
        verified.sort_by_key(|(c, _)| c.gate_count());
        match verified.into_iter().next() {
            Some(best) => Ok(best),
            None => Err(first_error.unwrap_or(ExtractError::Cancelled)),
        }
    })
}
