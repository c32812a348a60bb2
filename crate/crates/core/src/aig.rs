//! AIGER frontend: parsing safety specifications, building the symbolic
//! transition relation, circuit-level universal expansion, and writing
//! synthesized controllers back out.
//!
//! Only the ASCII `aag` format is accepted. Inputs whose symbol name starts
//! with `controllable_` are control signals; the single output is the error
//! signal. An absorbing error latch is appended during parsing so the safe
//! states are the pure state predicate "error latch is 0".

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Cube, Lit, Var, VarKind, VarPool};

/// Symbol-name prefix marking controllable inputs.
pub const CONTROLLABLE_PREFIX: &str = "controllable_";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AigError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("binary aig format is not supported, use ASCII aag")]
    BinaryFormat,
    #[error("line {0}: expected {1}")]
    MalformedLine(usize, &'static str),
    #[error("literal {0} out of range or constant where a definition is required")]
    BadDefinition(u32),
    #[error("variable {0} defined more than once")]
    DuplicateDefinition(u32),
    #[error("literal {0} references an undefined or later variable")]
    DanglingLiteral(u32),
    #[error("and-gate definitions must have strictly increasing left-hand sides")]
    GateOrder,
    #[error("expected exactly one output, found {0}")]
    OutputCount(usize),
    #[error("latch init values must be 0")]
    NonzeroLatchInit,
    #[error("malformed symbol entry at line {0}")]
    BadSymbol(usize),
    #[error("controller does not define control signal {0:?}")]
    MissingControl(Var),
    #[error("controller references a variable outside the state and input vectors")]
    ForeignControllerVar,
    #[error("expansion over {0:?} is not a controllable or uncontrollable input")]
    NotAnInput(Var),
    #[error("expansion exceeds the node budget of {0}")]
    ExpansionBudget(usize),
}

/// An AIGER literal: `2*var + negation`; 0 is constant false, 1 constant
/// true.
pub type AigLit = u32;

pub fn aig_var(l: AigLit) -> u32 {
    l >> 1
}

pub fn aig_neg(l: AigLit) -> bool {
    l & 1 != 0
}

/// One and-gate definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AigAnd {
    pub lhs: AigLit,
    pub rhs0: AigLit,
    pub rhs1: AigLit,
}

/// An and-inverter circuit in AIGER terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AigCircuit {
    pub max_var: u32,
    pub inputs: Vec<AigLit>,
    /// Latch (current literal, next-state literal); all init to 0.
    pub latches: Vec<(AigLit, AigLit)>,
    pub outputs: Vec<AigLit>,
    pub ands: Vec<AigAnd>,
    pub input_symbols: Vec<Option<String>>,
    pub latch_symbols: Vec<Option<String>>,
    pub output_symbols: Vec<Option<String>>,
}

impl AigCircuit {
    /// Evaluate all gates given preset input/latch slots in `values`
    /// (indexed by AIGER variable; `values[0]` must be false).
    pub fn eval_gates(&self, values: &mut [bool]) {
        for g in &self.ands {
            let a = values[aig_var(g.rhs0) as usize] ^ aig_neg(g.rhs0);
            let b = values[aig_var(g.rhs1) as usize] ^ aig_neg(g.rhs1);
            values[aig_var(g.lhs) as usize] = a && b;
        }
    }

    pub fn eval_lit(&self, values: &[bool], l: AigLit) -> bool {
        values[aig_var(l) as usize] ^ aig_neg(l)
    }

    /// Serialize to ASCII `aag`.
    pub fn to_aag(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "aag {} {} {} {} {}",
            self.max_var,
            self.inputs.len(),
            self.latches.len(),
            self.outputs.len(),
            self.ands.len()
        )
        .unwrap();
        for &i in &self.inputs {
            writeln!(s, "{}", i).unwrap();
        }
        for &(cur, next) in &self.latches {
            writeln!(s, "{} {}", cur, next).unwrap();
        }
        for &o in &self.outputs {
            writeln!(s, "{}", o).unwrap();
        }
        for g in &self.ands {
            writeln!(s, "{} {} {}", g.lhs, g.rhs0, g.rhs1).unwrap();
        }
        let mut sym = |prefix: char, syms: &[Option<String>]| {
            for (i, name) in syms.iter().enumerate() {
                if let Some(name) = name {
                    writeln!(s, "{}{} {}", prefix, i, name).unwrap();
                }
            }
        };
        sym('i', &self.input_symbols);
        sym('l', &self.latch_symbols);
        sym('o', &self.output_symbols);
        s
    }
}

/// Parse an ASCII AIGER circuit.
pub fn parse_circuit(text: &str) -> Result<AigCircuit, AigError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| AigError::MalformedHeader("empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.first() == Some(&"aig") {
        return Err(AigError::BinaryFormat);
    }
    if fields.len() != 6 || fields[0] != "aag" {
        return Err(AigError::MalformedHeader(header.to_string()));
    }
    let nums: Vec<u32> = fields[1..]
        .iter()
        .map(|f| f.parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| AigError::MalformedHeader(header.to_string()))?;
    let (max_var, n_in, n_latch, n_out, n_and) = (
        nums[0],
        nums[1] as usize,
        nums[2] as usize,
        nums[3] as usize,
        nums[4] as usize,
    );

    let mut circuit = AigCircuit {
        max_var,
        input_symbols: vec![None; n_in],
        latch_symbols: vec![None; n_latch],
        output_symbols: vec![None; n_out],
        ..AigCircuit::default()
    };

    // 0 undefined, 1 input, 2 latch, 3 gate
    let mut defined = vec![0u8; max_var as usize + 1];

    let mut expect_line = |kind: &'static str| -> Result<(usize, &str), AigError> {
        lines
            .next()
            .map(|(n, l)| (n + 1, l))
            .ok_or(AigError::MalformedLine(usize::MAX, kind))
    };

    let parse_lit = |tok: &str, max_var: u32| -> Result<AigLit, AigError> {
        let l: u32 = tok.parse().map_err(|_| AigError::BadDefinition(u32::MAX))?;
        if aig_var(l) > max_var {
            return Err(AigError::DanglingLiteral(l));
        }
        Ok(l)
    };

    for _ in 0..n_in {
        let (_, line) = expect_line("input literal")?;
        let lit = parse_lit(line.trim(), max_var)?;
        if aig_neg(lit) || aig_var(lit) == 0 {
            return Err(AigError::BadDefinition(lit));
        }
        if defined[aig_var(lit) as usize] != 0 {
            return Err(AigError::DuplicateDefinition(aig_var(lit)));
        }
        defined[aig_var(lit) as usize] = 1;
        circuit.inputs.push(lit);
    }
    let mut latch_nexts = Vec::with_capacity(n_latch);
    for _ in 0..n_latch {
        let (ln, line) = expect_line("latch definition")?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 && toks.len() != 3 {
            return Err(AigError::MalformedLine(ln, "latch `cur next [init]`"));
        }
        let cur = parse_lit(toks[0], max_var)?;
        let next = parse_lit(toks[1], max_var)?;
        if toks.len() == 3 && toks[2] != "0" {
            return Err(AigError::NonzeroLatchInit);
        }
        if aig_neg(cur) || aig_var(cur) == 0 {
            return Err(AigError::BadDefinition(cur));
        }
        if defined[aig_var(cur) as usize] != 0 {
            return Err(AigError::DuplicateDefinition(aig_var(cur)));
        }
        defined[aig_var(cur) as usize] = 2;
        circuit.latches.push((cur, next));
        latch_nexts.push(next);
    }
    for _ in 0..n_out {
        let (_, line) = expect_line("output literal")?;
        circuit.outputs.push(parse_lit(line.trim(), max_var)?);
    }
    let mut last_lhs = 0;
    for _ in 0..n_and {
        let (ln, line) = expect_line("and-gate definition")?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(AigError::MalformedLine(ln, "and `lhs rhs0 rhs1`"));
        }
        let lhs = parse_lit(toks[0], max_var)?;
        let rhs0 = parse_lit(toks[1], max_var)?;
        let rhs1 = parse_lit(toks[2], max_var)?;
        if aig_neg(lhs) || aig_var(lhs) == 0 {
            return Err(AigError::BadDefinition(lhs));
        }
        if lhs <= last_lhs {
            return Err(AigError::GateOrder);
        }
        last_lhs = lhs;
        if defined[aig_var(lhs) as usize] != 0 {
            return Err(AigError::DuplicateDefinition(aig_var(lhs)));
        }
        for rhs in [rhs0, rhs1] {
            if aig_var(rhs) != 0 && defined[aig_var(rhs) as usize] == 0 {
                return Err(AigError::DanglingLiteral(rhs));
            }
        }
        defined[aig_var(lhs) as usize] = 3;
        circuit.ands.push(AigAnd { lhs, rhs0, rhs1 });
    }
    for &l in circuit.outputs.iter().chain(latch_nexts.iter()) {
        if aig_var(l) != 0 && defined[aig_var(l) as usize] == 0 {
            return Err(AigError::DanglingLiteral(l));
        }
    }
    // symbol and comment section
    for (n, line) in lines {
        if line == "c" {
            break;
        }
        if line.is_empty() {
            continue;
        }
        let (kind, rest) = line.split_at(1);
        let mut parts = rest.splitn(2, ' ');
        let idx: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(AigError::BadSymbol(n + 1))?;
        let name = parts.next().ok_or(AigError::BadSymbol(n + 1))?.to_string();
        let slot = match kind {
            "i" => circuit.input_symbols.get_mut(idx),
            "l" => circuit.latch_symbols.get_mut(idx),
            "o" => circuit.output_symbols.get_mut(idx),
            _ => return Err(AigError::BadSymbol(n + 1)),
        };
        *slot.ok_or(AigError::BadSymbol(n + 1))? = Some(name);
    }
    Ok(circuit)
}

/// A literal over [`Var`]s or a Boolean constant, produced when circuit
/// signals are folded during CNF encoding or expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    Const(bool),
    Lit(Lit),
}

impl Signal {
    pub fn negate(self) -> Signal {
        match self {
            Signal::Const(b) => Signal::Const(!b),
            Signal::Lit(l) => Signal::Lit(l.negate()),
        }
    }
}

/// The game `(x, i, c, I, T, P)` built from an AIGER circuit.
///
/// State variables are the circuit latches plus an appended absorbing error
/// latch, so `P` is the single unit clause "error latch is false". The
/// transition relation is a functional CNF encoding: for every assignment to
/// `(x, i, c)` exactly one next state satisfies it.
#[derive(Debug, Clone)]
pub struct SafetySpec {
    pub circuit: AigCircuit,
    pub pool: VarPool,
    /// Current-state variables; the last one is the error latch.
    pub states: Vec<Var>,
    /// Uncontrollable inputs.
    pub inputs: Vec<Var>,
    /// Controllable inputs.
    pub controls: Vec<Var>,
    /// Next-state copies aligned with `states`.
    pub next_states: Vec<Var>,
    pub error_latch: Var,
    /// The all-zero initial minterm over `states`.
    pub init: Cube,
    /// Transition relation over states, inputs, controls, next states and
    /// `trans_aux`.
    pub trans: CnfFormula,
    pub trans_aux: Vec<Var>,
    /// Functional definition behind each transition auxiliary:
    /// `aux <-> lit1 & lit2`, in creation order (operands refer to states,
    /// inputs, controls or earlier auxiliaries).
    pub trans_aux_defs: Vec<(Var, Lit, Lit)>,
    /// Safe states: the unit clause `!error_latch`.
    pub safe: CnfFormula,
    /// AIGER variable backing each state variable (error latch: none).
    aig_of_state: Vec<Option<u32>>,
    /// AIGER variable backing each input/control variable.
    aig_of_input: HashMap<Var, u32>,
}

impl SafetySpec {
    /// Parse an ASCII `aag` safety specification.
    pub fn parse_aag(text: &str) -> Result<SafetySpec, AigError> {
        SafetySpec::from_circuit(parse_circuit(text)?)
    }

    pub fn from_circuit(circuit: AigCircuit) -> Result<SafetySpec, AigError> {
        if circuit.outputs.len() != 1 {
            return Err(AigError::OutputCount(circuit.outputs.len()));
        }
        let mut pool = VarPool::new();
        let mut states = Vec::new();
        let mut aig_of_state = Vec::new();
        for &(cur, _) in &circuit.latches {
            states.push(pool.fresh(VarKind::State));
            aig_of_state.push(Some(aig_var(cur)));
        }
        let error_latch = pool.fresh(VarKind::State);
        states.push(error_latch);
        aig_of_state.push(None);
        let mut inputs = Vec::new();
        let mut controls = Vec::new();
        let mut aig_of_input = HashMap::new();
        for (idx, &l) in circuit.inputs.iter().enumerate() {
            let controllable = circuit.input_symbols[idx]
                .as_deref()
                .map(|s| s.starts_with(CONTROLLABLE_PREFIX))
                .unwrap_or(false);
            let v = pool.fresh(if controllable {
                VarKind::Control
            } else {
                VarKind::Input
            });
            if controllable {
                controls.push(v);
            } else {
                inputs.push(v);
            }
            aig_of_input.insert(v, aig_var(l));
        }
        let next_states = pool.fresh_vec(VarKind::NextState, states.len());
        let init = Cube::new(states.iter().map(|s| s.neg()).collect()).expect("distinct vars");
        let safe = CnfFormula::from_clauses(vec![Clause::unit(error_latch.neg())]);
        let (trans, trans_aux, trans_aux_defs) = encode_transition_parts(
            &circuit,
            &states,
            &aig_of_state,
            &aig_of_input,
            &inputs,
            &controls,
            &next_states,
            error_latch,
            &mut pool,
        );
        Ok(SafetySpec {
            circuit,
            pool,
            states,
            inputs,
            controls,
            next_states,
            error_latch,
            init,
            trans,
            trans_aux,
            trans_aux_defs,
            safe,
            aig_of_state,
            aig_of_input,
        })
    }

    /// AIGER variable of a circuit-backed state variable.
    pub fn state_aig_var(&self, idx: usize) -> Option<u32> {
        self.aig_of_state[idx]
    }

    pub fn input_aig_var(&self, v: Var) -> Option<u32> {
        self.aig_of_input.get(&v).copied()
    }

    /// State variables without the error latch.
    pub fn circuit_states(&self) -> &[Var] {
        &self.states[..self.states.len() - 1]
    }

    /// Human-readable name for a state/input/control variable.
    pub fn var_name(&self, v: Var) -> String {
        if v == self.error_latch {
            return "error_latch".to_string();
        }
        if let Some(idx) = self.states.iter().position(|&s| s == v) {
            return self.circuit.latch_symbols[idx]
                .clone()
                .unwrap_or_else(|| format!("latch{}", idx));
        }
        if let Some(aigv) = self.aig_of_input.get(&v) {
            let idx = self
                .circuit
                .inputs
                .iter()
                .position(|&l| aig_var(l) == *aigv)
                .unwrap();
            return self.circuit.input_symbols[idx]
                .clone()
                .unwrap_or_else(|| format!("input{}", idx));
        }
        format!("v{}", v.0)
    }

    /// Evaluate one step of the game: given state, input and control bits,
    /// return the next state bits (error latch last).
    pub fn step(
        &self,
        state_bits: &[bool],
        input_bits: &[bool],
        control_bits: &[bool],
        scratch: &mut Vec<bool>,
    ) -> Vec<bool> {
        scratch.clear();
        scratch.resize(self.circuit.max_var as usize + 1, false);
        for (j, aigv) in self.aig_of_state.iter().enumerate() {
            if let Some(aigv) = aigv {
                scratch[*aigv as usize] = state_bits[j];
            }
        }
        for (v, bit) in self.inputs.iter().zip(input_bits) {
            scratch[self.aig_of_input[v] as usize] = *bit;
        }
        for (v, bit) in self.controls.iter().zip(control_bits) {
            scratch[self.aig_of_input[v] as usize] = *bit;
        }
        self.circuit.eval_gates(scratch);
        let mut next: Vec<bool> = self
            .circuit
            .latches
            .iter()
            .map(|&(_, nl)| self.circuit.eval_lit(scratch, nl))
            .collect();
        let err_now = state_bits[self.states.len() - 1];
        let err_out = self.circuit.eval_lit(scratch, self.circuit.outputs[0]);
        next.push(err_now || err_out);
        next
    }
}

/// Recompute the functional CNF encoding of the transition relation with
/// auxiliaries drawn from `pool`.
pub fn encode_transition(spec: &SafetySpec, pool: &mut VarPool) -> (CnfFormula, Vec<Var>) {
    let (f, aux, _) = encode_transition_parts(
        &spec.circuit,
        &spec.states,
        &spec.aig_of_state,
        &spec.aig_of_input,
        &spec.inputs,
        &spec.controls,
        &spec.next_states,
        spec.error_latch,
        pool,
    );
    (f, aux)
}

#[allow(clippy::too_many_arguments)]
fn encode_transition_parts(
    circuit: &AigCircuit,
    states: &[Var],
    aig_of_state: &[Option<u32>],
    aig_of_input: &HashMap<Var, u32>,
    inputs: &[Var],
    controls: &[Var],
    next_states: &[Var],
    error_latch: Var,
    pool: &mut VarPool,
) -> (CnfFormula, Vec<Var>, Vec<(Var, Lit, Lit)>) {
    let mut f = CnfFormula::truth();
    let mut aux = Vec::new();
    let mut defs: Vec<(Var, Lit, Lit)> = Vec::new();
    let mut sig: HashMap<u32, Signal> = HashMap::new();
    for (j, aigv) in aig_of_state.iter().enumerate() {
        if let Some(aigv) = aigv {
            sig.insert(*aigv, Signal::Lit(states[j].pos()));
        }
    }
    for v in inputs.iter().chain(controls) {
        sig.insert(aig_of_input[v], Signal::Lit(v.pos()));
    }
    let resolve = |sig: &HashMap<u32, Signal>, l: AigLit| -> Signal {
        if aig_var(l) == 0 {
            return Signal::Const(aig_neg(l));
        }
        let s = sig[&aig_var(l)];
        if aig_neg(l) {
            s.negate()
        } else {
            s
        }
    };
    // structural hash on folded operand pairs
    let mut hashed: HashMap<(Lit, Lit), Var> = HashMap::new();
    for g in &circuit.ands {
        let a = resolve(&sig, g.rhs0);
        let b = resolve(&sig, g.rhs1);
        let out = match (a, b) {
            (Signal::Const(false), _) | (_, Signal::Const(false)) => Signal::Const(false),
            (Signal::Const(true), s) | (s, Signal::Const(true)) => s,
            (Signal::Lit(x), Signal::Lit(y)) if x == y => Signal::Lit(x),
            (Signal::Lit(x), Signal::Lit(y)) if x == y.negate() => Signal::Const(false),
            (Signal::Lit(x), Signal::Lit(y)) => {
                let (x, y) = if x <= y { (x, y) } else { (y, x) };
                let v = *hashed.entry((x, y)).or_insert_with(|| {
                    let v = pool.fresh(VarKind::Aux);
                    aux.push(v);
                    defs.push((v, x, y));
                    f.push(Clause::new(vec![v.neg(), x]).unwrap());
                    f.push(Clause::new(vec![v.neg(), y]).unwrap());
                    f.push(Clause::new(vec![v.pos(), x.negate(), y.negate()]).unwrap());
                    v
                });
                Signal::Lit(v.pos())
            }
        };
        sig.insert(aig_var(g.lhs), out);
    }
    for (j, &(_, next_lit)) in circuit.latches.iter().enumerate() {
        let x_next = next_states[j];
        match resolve(&sig, next_lit) {
            Signal::Const(b) => f.push(Clause::unit(x_next.lit(b))),
            Signal::Lit(l) => {
                f.push(Clause::new(vec![x_next.neg(), l]).unwrap());
                f.push(Clause::new(vec![x_next.pos(), l.negate()]).unwrap());
            }
        }
    }
    // absorbing error latch: err' <-> err | error_output
    let err = error_latch;
    let err_next = *next_states.last().unwrap();
    match resolve(&sig, circuit.outputs[0]) {
        Signal::Const(true) => f.push(Clause::unit(err_next.pos())),
        Signal::Const(false) => {
            f.push(Clause::new(vec![err_next.neg(), err.pos()]).unwrap());
            f.push(Clause::new(vec![err_next.pos(), err.neg()]).unwrap());
        }
        Signal::Lit(o) => {
            f.push(Clause::new(vec![err_next.pos(), err.neg()]).unwrap());
            f.push(Clause::new(vec![err_next.pos(), o.negate()]).unwrap());
            f.push(Clause::new(vec![err_next.neg(), err.pos(), o]).unwrap());
        }
    }
    (f, aux, defs)
}

/// Structurally hashed and-inverter node space with constant folding.
///
/// Node 0 is the constant; leaves and gates follow. Literals are
/// `2*node + negation`, so literal 0 is false and literal 1 is true.
#[derive(Debug, Clone, Default)]
pub struct AigBuilder {
    gates: Vec<(u32, u32)>,
    hash: HashMap<(u32, u32), u32>,
    n_leaves: usize,
}

impl AigBuilder {
    pub fn new(n_leaves: usize) -> AigBuilder {
        AigBuilder {
            gates: Vec::new(),
            hash: HashMap::new(),
            n_leaves,
        }
    }

    pub const FALSE: u32 = 0;
    pub const TRUE: u32 = 1;

    pub fn leaf(&self, idx: usize) -> u32 {
        debug_assert!(idx < self.n_leaves);
        (idx as u32 + 1) << 1
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn n_gates(&self) -> usize {
        self.gates.len()
    }

    fn first_gate(&self) -> u32 {
        self.n_leaves as u32 + 1
    }

    /// Gate operands of `node`, if it is a gate.
    pub fn gate(&self, node: u32) -> Option<(u32, u32)> {
        if node >= self.first_gate() {
            Some(self.gates[(node - self.first_gate()) as usize])
        } else {
            None
        }
    }

    pub fn not(l: u32) -> u32 {
        l ^ 1
    }

    pub fn and(&mut self, a: u32, b: u32) -> u32 {
        if a == Self::FALSE || b == Self::FALSE || a == Self::not(b) {
            return Self::FALSE;
        }
        if a == Self::TRUE {
            return b;
        }
        if b == Self::TRUE || a == b {
            return a;
        }
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if let Some(&n) = self.hash.get(&(a, b)) {
            return n << 1;
        }
        let node = self.first_gate() + self.gates.len() as u32;
        self.gates.push((a, b));
        self.hash.insert((a, b), node);
        node << 1
    }

    pub fn or(&mut self, a: u32, b: u32) -> u32 {
        Self::not(self.and(Self::not(a), Self::not(b)))
    }

    pub fn xor(&mut self, a: u32, b: u32) -> u32 {
        let t0 = self.and(a, Self::not(b));
        let t1 = self.and(Self::not(a), b);
        self.or(t0, t1)
    }

    pub fn mux(&mut self, sel: u32, on_true: u32, on_false: u32) -> u32 {
        let t = self.and(sel, on_true);
        let f = self.and(Self::not(sel), on_false);
        self.or(t, f)
    }

    pub fn and_many(&mut self, lits: &[u32]) -> u32 {
        let mut acc = Self::TRUE;
        for &l in lits {
            acc = self.and(acc, l);
        }
        acc
    }

    pub fn or_many(&mut self, lits: &[u32]) -> u32 {
        let mut acc = Self::FALSE;
        for &l in lits {
            acc = self.or(acc, l);
        }
        acc
    }

    /// Evaluate a literal under leaf values.
    pub fn eval(&self, leaf_values: &[bool], l: u32) -> bool {
        debug_assert_eq!(leaf_values.len(), self.n_leaves);
        let mut values = vec![false; self.first_gate() as usize + self.gates.len()];
        for (i, &v) in leaf_values.iter().enumerate() {
            values[i + 1] = v;
        }
        for (i, &(a, b)) in self.gates.iter().enumerate() {
            let av = values[(a >> 1) as usize] ^ (a & 1 != 0);
            let bv = values[(b >> 1) as usize] ^ (b & 1 != 0);
            values[self.first_gate() as usize + i] = av && bv;
        }
        values[(l >> 1) as usize] ^ (l & 1 != 0)
    }

    /// Gate nodes in the fan-in cone of `roots`, ascending.
    pub fn cone(&self, roots: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.first_gate() as usize + self.gates.len()];
        let mut stack: Vec<u32> = roots.iter().map(|l| l >> 1).collect();
        let mut out = Vec::new();
        while let Some(n) = stack.pop() {
            if (n as usize) < seen.len() && !seen[n as usize] {
                seen[n as usize] = true;
                if let Some((a, b)) = self.gate(n) {
                    out.push(n);
                    stack.push(a >> 1);
                    stack.push(b >> 1);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Leaf indices in the fan-in cone of `root`.
    pub fn leaf_support(&self, root: u32) -> Vec<usize> {
        let mut seen = vec![false; self.first_gate() as usize + self.gates.len()];
        let mut stack = vec![root >> 1];
        let mut out = Vec::new();
        while let Some(n) = stack.pop() {
            if seen[n as usize] {
                continue;
            }
            seen[n as usize] = true;
            match self.gate(n) {
                Some((a, b)) => {
                    stack.push(a >> 1);
                    stack.push(b >> 1);
                }
                None => {
                    if n > 0 {
                        out.push(n as usize - 1);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Encode builder nodes into CNF with full (two-sided) gate equivalences,
/// folding constant leaf signals away. Returns the clause set, the fresh
/// auxiliaries and the signal of each root literal.
pub fn encode_builder_full(
    b: &AigBuilder,
    leaf_signals: &[Signal],
    roots: &[u32],
    pool: &mut VarPool,
) -> (CnfFormula, Vec<Var>, Vec<Signal>) {
    assert_eq!(leaf_signals.len(), b.n_leaves());
    let mut f = CnfFormula::truth();
    let mut aux = Vec::new();
    let first_gate = b.n_leaves() + 1;
    let mut sig: Vec<Option<Signal>> = vec![None; first_gate + b.n_gates()];
    sig[0] = Some(Signal::Const(false));
    for (i, s) in leaf_signals.iter().enumerate() {
        sig[i + 1] = Some(*s);
    }
    let resolve = |sig: &Vec<Option<Signal>>, l: u32| -> Signal {
        let s = sig[(l >> 1) as usize].expect("cone in ascending order");
        if l & 1 != 0 {
            s.negate()
        } else {
            s
        }
    };
    for &node in &b.cone(roots) {
        let (x, y) = b.gate(node).unwrap();
        let sx = resolve(&sig, x);
        let sy = resolve(&sig, y);
        let out = match (sx, sy) {
            (Signal::Const(false), _) | (_, Signal::Const(false)) => Signal::Const(false),
            (Signal::Const(true), s) | (s, Signal::Const(true)) => s,
            (Signal::Lit(a), Signal::Lit(bb)) if a == bb => Signal::Lit(a),
            (Signal::Lit(a), Signal::Lit(bb)) if a == bb.negate() => Signal::Const(false),
            (Signal::Lit(a), Signal::Lit(bb)) => {
                let g = pool.fresh(crate::cnf::VarKind::Aux);
                aux.push(g);
                f.push(Clause::new(vec![g.neg(), a]).unwrap());
                f.push(Clause::new(vec![g.neg(), bb]).unwrap());
                f.push(Clause::new(vec![g.pos(), a.negate(), bb.negate()]).unwrap());
                Signal::Lit(g.pos())
            }
        };
        sig[node as usize] = Some(out);
    }
    let root_sigs = roots.iter().map(|&r| resolve(&sig, r)).collect();
    (f, aux, root_sigs)
}

/// Combinational definitions for every controllable input over the states
/// and uncontrollable inputs, sharing one structurally hashed gate list.
#[derive(Debug, Clone)]
pub struct ControllerCircuit {
    /// Leaf order of `builder`: first all of `states`, then `inputs`.
    pub states: Vec<Var>,
    pub inputs: Vec<Var>,
    pub builder: AigBuilder,
    /// One (control variable, builder literal) per controllable input.
    pub outputs: Vec<(Var, u32)>,
}

impl ControllerCircuit {
    pub fn gate_count(&self) -> usize {
        self.builder
            .cone(&self.outputs.iter().map(|&(_, l)| l).collect::<Vec<_>>())
            .len()
    }

    /// Evaluate all control outputs for the given state and input bits.
    pub fn eval(&self, state_bits: &[bool], input_bits: &[bool]) -> Vec<bool> {
        let mut leaves = Vec::with_capacity(self.states.len() + self.inputs.len());
        leaves.extend_from_slice(state_bits);
        leaves.extend_from_slice(input_bits);
        self.outputs
            .iter()
            .map(|&(_, l)| self.builder.eval(&leaves, l))
            .collect()
    }

    pub fn output_for(&self, control: Var) -> Option<u32> {
        self.outputs
            .iter()
            .find(|&&(c, _)| c == control)
            .map(|&(_, l)| l)
    }
}

/// Write the specification with every controllable input replaced by gates
/// implementing `controller`. Re-parsing the result yields a specification
/// with no controllable inputs.
///
/// The appended error latch may appear in controller definitions (winning
/// areas mention it); it is substituted by constant false, which is exact on
/// every run of the closed system because the error latch starts at 0 and
/// the controller keeps it there.
pub fn write_aag(spec: &SafetySpec, controller: &ControllerCircuit) -> Result<String, AigError> {
    for c in &spec.controls {
        if controller.output_for(*c).is_none() {
            return Err(AigError::MissingControl(*c));
        }
    }
    let circuit = &spec.circuit;
    let n_lat = circuit.latches.len();
    let n_in = spec.inputs.len();
    // builder leaves: uncontrollable inputs first, then original latches
    let mut b = AigBuilder::new(n_in + n_lat);
    let leaf_of_input = |k: usize| k;
    let leaf_of_state = |j: usize| n_in + j;

    // translate controller nodes into the builder
    let mut node_lit: Vec<u32> = vec![AigBuilder::FALSE];
    for v in controller.states.iter().chain(&controller.inputs) {
        if *v == spec.error_latch {
            node_lit.push(AigBuilder::FALSE);
        } else if let Some(j) = spec.states.iter().position(|s| s == v) {
            node_lit.push(b.leaf(leaf_of_state(j)));
        } else if let Some(k) = spec.inputs.iter().position(|s| s == v) {
            node_lit.push(b.leaf(leaf_of_input(k)));
        } else {
            return Err(AigError::ForeignControllerVar);
        }
    }
    let map_node_lit = |nl: &[u32], l: u32| -> u32 { nl[(l >> 1) as usize] ^ (l & 1) };
    for gi in 0..controller.builder.n_gates() {
        let node = controller.builder.n_leaves() as u32 + 1 + gi as u32;
        let (ra, rb) = controller.builder.gate(node).unwrap();
        let a = map_node_lit(&node_lit, ra);
        let bb = map_node_lit(&node_lit, rb);
        let lit = b.and(a, bb);
        node_lit.push(lit);
    }
    let mut control_impl: HashMap<u32, u32> = HashMap::new();
    for &(cv, out) in &controller.outputs {
        control_impl.insert(
            spec.input_aig_var(cv).unwrap(),
            map_node_lit(&node_lit, out),
        );
    }

    // translate the original circuit, substituting controller outputs
    let mut aig_map: HashMap<u32, u32> = HashMap::new();
    for (j, &(cur, _)) in circuit.latches.iter().enumerate() {
        aig_map.insert(aig_var(cur), b.leaf(leaf_of_state(j)));
    }
    for (k, v) in spec.inputs.iter().enumerate() {
        aig_map.insert(spec.input_aig_var(*v).unwrap(), b.leaf(leaf_of_input(k)));
    }
    for (av, l) in &control_impl {
        aig_map.insert(*av, *l);
    }
    let map_aig = |m: &HashMap<u32, u32>, l: AigLit| -> u32 {
        if aig_var(l) == 0 {
            return l;
        }
        m[&aig_var(l)] ^ (l & 1)
    };
    for g in &circuit.ands {
        let a = map_aig(&aig_map, g.rhs0);
        let bb = map_aig(&aig_map, g.rhs1);
        let lit = b.and(a, bb);
        aig_map.insert(aig_var(g.lhs), lit);
    }
    let next_lits: Vec<u32> = circuit
        .latches
        .iter()
        .map(|&(_, nl)| map_aig(&aig_map, nl))
        .collect();
    let out_lit = map_aig(&aig_map, circuit.outputs[0]);

    let out_circuit = builder_to_circuit(
        &b,
        n_in,
        n_lat,
        &next_lits,
        out_lit,
        spec.inputs
            .iter()
            .map(|v| Some(spec.var_name(*v)))
            .collect(),
        circuit.latch_symbols.clone(),
        circuit.output_symbols.first().cloned().flatten(),
    );
    Ok(out_circuit.to_aag())
}

/// Emit an [`AigCircuit`] from a builder whose leaves are `n_inputs` inputs
/// followed by `n_latches` latches. Only gates in the cone of the latch
/// next-state literals and the output are kept; AIGER variables are numbered
/// inputs, latches, gates.
#[allow(clippy::too_many_arguments)]
pub fn builder_to_circuit(
    b: &AigBuilder,
    n_inputs: usize,
    n_latches: usize,
    next_lits: &[u32],
    out_lit: u32,
    input_symbols: Vec<Option<String>>,
    latch_symbols: Vec<Option<String>>,
    output_symbol: Option<String>,
) -> AigCircuit {
    assert_eq!(next_lits.len(), n_latches);
    assert_eq!(b.n_leaves(), n_inputs + n_latches);
    let mut roots = next_lits.to_vec();
    roots.push(out_lit);
    let live = b.cone(&roots);
    let mut emit_var: HashMap<u32, u32> = HashMap::new();
    let mut next_var = 1u32;
    let mut out_circuit = AigCircuit::default();
    for k in 0..n_inputs {
        emit_var.insert(k as u32 + 1, next_var);
        out_circuit.inputs.push(next_var << 1);
        next_var += 1;
    }
    for j in 0..n_latches {
        emit_var.insert((n_inputs + j) as u32 + 1, next_var);
        next_var += 1;
    }
    for &n in &live {
        emit_var.insert(n, next_var);
        next_var += 1;
    }
    let to_aiger = |emit: &HashMap<u32, u32>, l: u32| -> AigLit {
        let node = l >> 1;
        if node == 0 {
            return l & 1;
        }
        (emit[&node] << 1) | (l & 1)
    };
    for (j, &nl) in next_lits.iter().enumerate() {
        let cur_var = emit_var[&((n_inputs + j) as u32 + 1)];
        out_circuit
            .latches
            .push((cur_var << 1, to_aiger(&emit_var, nl)));
    }
    out_circuit.outputs.push(to_aiger(&emit_var, out_lit));
    for &n in &live {
        let (a, bb) = b.gate(n).unwrap();
        let lhs = emit_var[&n] << 1;
        let mut r0 = to_aiger(&emit_var, a);
        let mut r1 = to_aiger(&emit_var, bb);
        if r0 < r1 {
            std::mem::swap(&mut r0, &mut r1);
        }
        out_circuit.ands.push(AigAnd {
            lhs,
            rhs0: r0,
            rhs1: r1,
        });
    }
    out_circuit.max_var = next_var - 1;
    out_circuit.input_symbols = input_symbols;
    out_circuit.latch_symbols = latch_symbols;
    out_circuit.output_symbols = vec![output_symbol];
    out_circuit
}

/// Result of expanding the transition circuit over a subset of the inputs:
/// the shared hashed gate structure and the distinct next-state renamings.
#[derive(Debug, Clone)]
pub struct ExpandedTransition {
    pub builder: AigBuilder,
    /// Variable behind each builder leaf (states, then unexpanded inputs
    /// and controls; duplicated leaves keep their canonical variable here).
    pub leaf_vars: Vec<Var>,
    /// Leaf indices that must be instantiated freshly per copy.
    pub dup_leaves: Vec<usize>,
    /// Deduplicated copies; every assignment to the expanded variables maps
    /// to exactly one copy.
    pub copies: Vec<ExpansionCopy>,
    /// The variables that were expanded.
    pub over: Vec<Var>,
}

/// One distinct renaming: the next-state literal vector (error latch last)
/// shared by all assignments in `assignments`.
#[derive(Debug, Clone)]
pub struct ExpansionCopy {
    pub assignments: Vec<Cube>,
    /// Builder literal of each next-state signal, aligned with the state
    /// vector (the final entry is the absorbing error-latch next).
    pub next_lits: Vec<u32>,
}

/// Expand the transition circuit universally over `over` (a subset of the
/// controllable and uncontrollable inputs): the gate cone of the expanded
/// variables is duplicated per assignment with structural-hash reuse and
/// constant propagation, and duplicate next-state renamings are removed.
///
/// Variables in `dup_per_copy` are leaves that must be re-instantiated
/// freshly in every copy when the result is encoded to CNF (used when inner
/// existentials are re-bound per universal assignment).
pub fn expand_circuit(
    spec: &SafetySpec,
    over: &[Var],
    dup_per_copy: &[Var],
    node_budget: usize,
) -> Result<ExpandedTransition, AigError> {
    for v in over {
        if !spec.inputs.contains(v) && !spec.controls.contains(v) {
            return Err(AigError::NotAnInput(*v));
        }
    }
    let mut leaf_vars: Vec<Var> = Vec::new();
    leaf_vars.extend_from_slice(&spec.states);
    for v in spec.inputs.iter().chain(&spec.controls) {
        if !over.contains(v) {
            leaf_vars.push(*v);
        }
    }
    let mut b = AigBuilder::new(leaf_vars.len());
    let leaf_lit: HashMap<Var, u32> = leaf_vars
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, b.leaf(i)))
        .collect();
    let dup_leaves: Vec<usize> = dup_per_copy
        .iter()
        .filter_map(|v| leaf_vars.iter().position(|x| x == v))
        .collect();

    let circuit = &spec.circuit;
    let n = over.len();
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut copies: Vec<ExpansionCopy> = Vec::new();
    for bits in 0u64..1u64 << n {
        let assignment = Cube::new(
            over.iter()
                .enumerate()
                .map(|(i, v)| v.lit(bits >> i & 1 != 0))
                .collect(),
        )
        .expect("distinct variables");
        let mut sig: HashMap<u32, u32> = HashMap::new();
        for (j, aigv) in (0..spec.states.len() - 1).map(|j| (j, spec.state_aig_var(j))) {
            sig.insert(aigv.unwrap(), leaf_lit[&spec.states[j]]);
        }
        for v in spec.inputs.iter().chain(&spec.controls) {
            let aigv = spec.input_aig_var(*v).unwrap();
            match assignment.value_of(*v) {
                Some(val) => {
                    sig.insert(aigv, if val { AigBuilder::TRUE } else { AigBuilder::FALSE });
                }
                None => {
                    sig.insert(aigv, leaf_lit[v]);
                }
            }
        }
        let resolve = |sig: &HashMap<u32, u32>, l: AigLit| -> u32 {
            if aig_var(l) == 0 {
                return l & 1;
            }
            sig[&aig_var(l)] ^ (l & 1)
        };
        for g in &circuit.ands {
            let a = resolve(&sig, g.rhs0);
            let bb = resolve(&sig, g.rhs1);
            let lit = b.and(a, bb);
            sig.insert(aig_var(g.lhs), lit);
            if b.n_gates() > node_budget {
                return Err(AigError::ExpansionBudget(node_budget));
            }
        }
        let mut next_lits: Vec<u32> = circuit
            .latches
            .iter()
            .map(|&(_, nl)| resolve(&sig, nl))
            .collect();
        let err_leaf = leaf_lit[&spec.error_latch];
        let err_out = resolve(&sig, circuit.outputs[0]);
        next_lits.push(b.or(err_leaf, err_out));
        match seen.get(&next_lits) {
            Some(&idx) => copies[idx].assignments.push(assignment),
            None => {
                seen.insert(next_lits.clone(), copies.len());
                copies.push(ExpansionCopy {
                    assignments: vec![assignment],
                    next_lits,
                });
            }
        }
    }
    Ok(ExpandedTransition {
        builder: b,
        leaf_vars,
        dup_leaves,
        copies,
        over: over.to_vec(),
    })
}

/// Pick the expansion candidate whose fan-in cone duplicates the fewest
/// gates.
pub fn cheapest_expansion_var(spec: &SafetySpec, candidates: &[Var]) -> Option<Var> {
    let mut best: Option<(usize, Var)> = None;
    for &v in candidates {
        let aigv = spec.input_aig_var(v)?;
        let mut depends: HashMap<u32, bool> = HashMap::new();
        depends.insert(aigv, true);
        let mut count = 0usize;
        for g in &spec.circuit.ands {
            let d = *depends.get(&aig_var(g.rhs0)).unwrap_or(&false)
                || *depends.get(&aig_var(g.rhs1)).unwrap_or(&false);
            depends.insert(aig_var(g.lhs), d);
            if d {
                count += 1;
            }
        }
        if best.map(|(c, bv)| (count, v.0) < (c, bv.0)).unwrap_or(true) {
            best = Some((count, v));
        }
    }
    best.map(|(_, v)| v)
}

#[cfg(test)]
pub mod tests {
    use super::*;

    /// The running example: latch whose next value is `latch & u`, error
    /// output likewise, one controllable and one uncontrollable input.
    pub fn tiny_spec_text() -> &'static str {
        "aag 4 2 1 1 1\n2\n4\n6 8\n8\n8 6 4\ni0 controllable_c\ni1 u\n"
    }

    #[test]
    fn parses_tiny_example() {
        let spec = SafetySpec::parse_aag(tiny_spec_text()).unwrap();
        assert_eq!(spec.states.len(), 2); // latch + error latch
        assert_eq!(spec.inputs.len(), 1);
        assert_eq!(spec.controls.len(), 1);
        assert_eq!(spec.init.len(), 2);
        assert_eq!(spec.safe.clauses().len(), 1);
    }

    #[test]
    fn zero_controllable_inputs_degenerate_to_model_checking() {
        let text = "aag 2 1 1 1 0\n2\n4 4\n4\ni0 u\n";
        let spec = SafetySpec::parse_aag(text).unwrap();
        assert!(spec.controls.is_empty());
        assert_eq!(spec.inputs.len(), 1);
    }

    #[test]
    fn parse_errors_are_distinguished() {
        assert!(matches!(
            SafetySpec::parse_aag("aig 1 0 0 1 0\n0\n"),
            Err(AigError::BinaryFormat)
        ));
        assert!(matches!(
            SafetySpec::parse_aag("aag x\n"),
            Err(AigError::MalformedHeader(_))
        ));
        assert!(matches!(
            SafetySpec::parse_aag("aag 1 1 0 2 0\n2\n0\n1\n"),
            Err(AigError::OutputCount(2))
        ));
        assert!(matches!(
            SafetySpec::parse_aag("aag 2 1 1 1 0\n2\n4 4 1\n4\n"),
            Err(AigError::NonzeroLatchInit)
        ));
        // output references var 3 which is never defined
        assert!(matches!(
            SafetySpec::parse_aag("aag 3 1 0 1 0\n2\n6\n"),
            Err(AigError::DanglingLiteral(6))
        ));
    }

    #[test]
    fn transition_encoding_is_deterministic_and_complete() {
        let spec = SafetySpec::parse_aag(tiny_spec_text()).unwrap();
        let all: Vec<Var> = spec
            .states
            .iter()
            .chain(&spec.inputs)
            .chain(&spec.controls)
            .copied()
            .collect();
        let aux = &spec.trans_aux;
        for bits in 0u32..1 << all.len() {
            let mut count = 0;
            for next_bits in 0u32..1 << spec.next_states.len() {
                let n_aux = aux.len();
                assert!(n_aux <= 8);
                let found = (0u32..1 << n_aux).any(|aux_bits| {
                    spec.trans.eval(&|v| {
                        if let Some(i) = all.iter().position(|&x| x == v) {
                            bits >> i & 1 != 0
                        } else if let Some(i) = spec.next_states.iter().position(|&x| x == v) {
                            next_bits >> i & 1 != 0
                        } else {
                            let i = aux.iter().position(|&x| x == v).unwrap();
                            aux_bits >> i & 1 != 0
                        }
                    })
                });
                if found {
                    count += 1;
                }
            }
            assert_eq!(count, 1, "assignment {bits:b} must have one successor");
        }
    }

    #[test]
    fn step_matches_transition_semantics() {
        let spec = SafetySpec::parse_aag(tiny_spec_text()).unwrap();
        let mut scratch = Vec::new();
        // latch=1, err=0, u=1: next latch = 1, error output fires
        let next = spec.step(&[true, false], &[true], &[false], &mut scratch);
        assert_eq!(next, vec![true, true]);
        // latch=1, err=0, u=0: next latch = 0, err stays 0
        let next = spec.step(&[true, false], &[false], &[true], &mut scratch);
        assert_eq!(next, vec![false, false]);
        // error latch absorbs
        let next = spec.step(&[false, true], &[false], &[false], &mut scratch);
        assert_eq!(next, vec![false, true]);
    }

    #[test]
    fn builder_folds_constants_and_hashes() {
        let mut b = AigBuilder::new(2);
        let x = b.leaf(0);
        let y = b.leaf(1);
        assert_eq!(b.and(AigBuilder::FALSE, x), AigBuilder::FALSE);
        assert_eq!(b.and(AigBuilder::TRUE, x), x);
        assert_eq!(b.and(x, x), x);
        assert_eq!(b.and(x, AigBuilder::not(x)), AigBuilder::FALSE);
        let g1 = b.and(x, y);
        let g2 = b.and(y, x);
        assert_eq!(g1, g2);
        assert_eq!(b.n_gates(), 1);
        assert!(b.eval(&[true, true], g1));
        assert!(!b.eval(&[true, false], g1));
    }

    #[test]
    fn expansion_dedupes_independent_copies() {
        // T does not depend on c at all
        let spec =
            SafetySpec::parse_aag("aag 3 2 1 1 0\n2\n4\n6 4\n6\ni0 controllable_c\ni1 u\n")
                .unwrap();
        let exp = expand_circuit(&spec, &spec.controls, &[], 10_000).unwrap();
        assert_eq!(exp.copies.len(), 1);
        assert_eq!(exp.copies[0].assignments.len(), 2);
    }

    #[test]
    fn expansion_semantics_match_step_evaluation() {
        let spec = SafetySpec::parse_aag(tiny_spec_text()).unwrap();
        let mut over = spec.controls.clone();
        over.extend_from_slice(&spec.inputs);
        let exp = expand_circuit(&spec, &over, &[], 10_000).unwrap();
        assert!(exp.copies.len() <= 4);
        let mut scratch = Vec::new();
        for copy in &exp.copies {
            for assignment in &copy.assignments {
                for state_bits in 0u32..4 {
                    let sb: Vec<bool> = (0..2).map(|j| state_bits >> j & 1 != 0).collect();
                    let ib = vec![assignment.value_of(spec.inputs[0]).unwrap()];
                    let cb = vec![assignment.value_of(spec.controls[0]).unwrap()];
                    let expected = spec.step(&sb, &ib, &cb, &mut scratch);
                    let leaves: Vec<bool> = exp
                        .leaf_vars
                        .iter()
                        .map(|v| {
                            spec.states
                                .iter()
                                .position(|x| x == v)
                                .map(|j| sb[j])
                                .unwrap_or(false)
                        })
                        .collect();
                    let got: Vec<bool> = copy
                        .next_lits
                        .iter()
                        .map(|&l| exp.builder.eval(&leaves, l))
                        .collect();
                    assert_eq!(got, expected);
                }
            }
        }
    }

    #[test]
    fn write_aag_replaces_controls_and_round_trips() {
        let spec = SafetySpec::parse_aag(tiny_spec_text()).unwrap();
        // controller: c := true
        let builder = AigBuilder::new(spec.states.len() + spec.inputs.len());
        let ctrl = ControllerCircuit {
            states: spec.states.clone(),
            inputs: spec.inputs.clone(),
            builder,
            outputs: vec![(spec.controls[0], AigBuilder::TRUE)],
        };
        let text = write_aag(&spec, &ctrl).unwrap();
        let closed = SafetySpec::parse_aag(&text).unwrap();
        assert!(closed.controls.is_empty());
        assert_eq!(closed.inputs.len(), 1);
        assert_eq!(closed.circuit.latches.len(), spec.circuit.latches.len());
        // write -> parse -> write is a fixpoint
        let empty_ctrl = ControllerCircuit {
            states: closed.states.clone(),
            inputs: closed.inputs.clone(),
            builder: AigBuilder::new(closed.states.len() + closed.inputs.len()),
            outputs: vec![],
        };
        let text2 = write_aag(&closed, &empty_ctrl).unwrap();
        let closed2 = SafetySpec::parse_aag(&text2).unwrap();
        let text3 = write_aag(&closed2, &empty_ctrl).unwrap();
        assert_eq!(text2, text3);
    }

    #[test]
    fn missing_control_definition_is_an_error() {
        let spec = SafetySpec::parse_aag(tiny_spec_text()).unwrap();
        let ctrl = ControllerCircuit {
            states: spec.states.clone(),
            inputs: spec.inputs.clone(),
            builder: AigBuilder::new(spec.states.len() + spec.inputs.len()),
            outputs: vec![],
        };
        assert!(matches!(
            write_aag(&spec, &ctrl),
            Err(AigError::MissingControl(_))
        ));
    }
}
