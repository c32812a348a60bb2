//! Parametric benchmark generator: counter, majority-vote counter, barrel
//! shifter, adder and multiplier families, each with an unrealizable
//! variant.

use std::fmt;

use thiserror::Error;

use crate::aig::{builder_to_circuit, AigBuilder, AigCircuit};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("parameter k={k} out of range for family {family}: {reason}")]
    InvalidParams {
        family: Family,
        k: u32,
        reason: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `k`-bit counter that must not reach its maximum value; resettable at
    /// `2^(k-1)-1` when the single control signal is true.
    Cnt,
    /// Combinational adder: the controls must equal the sum bits of two
    /// uncontrollable `k`-bit operands.
    Add,
    /// Combinational multiplier: the controls must equal the `2k` product
    /// bits of two uncontrollable `k`-bit operands.
    Mult,
    /// Counter resettable at the most significant bit when the XOR of the
    /// `k-1` control signals is true.
    Mv,
    /// Barrel-shifted register avoiding a marked value, with a shift-disable
    /// control.
    Bs,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Cnt => "cnt",
            Family::Add => "add",
            Family::Mult => "mult",
            Family::Mv => "mv",
            Family::Bs => "bs",
        };
        write!(f, "{}", name)
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        match s {
            "cnt" => Ok(Family::Cnt),
            "add" => Ok(Family::Add),
            "mult" => Ok(Family::Mult),
            "mv" => Ok(Family::Mv),
            "bs" => Ok(Family::Bs),
            other => Err(format!("unknown benchmark family `{}`", other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchParams {
    pub family: Family,
    pub k: u32,
    pub unrealizable: bool,
}

impl BenchParams {
    pub fn name(&self) -> String {
        format!(
            "{}_{}{}",
            self.family,
            self.k,
            if self.unrealizable { "_unreal" } else { "" }
        )
    }

    /// Post-parse `(|x|, |i|, |c|)` counts of the realizable variant,
    /// including the appended error latch.
    pub fn expected_counts(&self) -> (usize, usize, usize) {
        let k = self.k as usize;
        match self.family {
            Family::Cnt => (k + 1, 1, 1),
            Family::Mv => (k + 1, k - 1, k - 1),
            Family::Bs => (k + 1, k.ilog2() as usize, 1),
            Family::Add => (2, 2 * k, k),
            Family::Mult => (1, 2 * k, 2 * k),
        }
    }
}

fn validate(p: &BenchParams) -> Result<(), BenchError> {
    let err = |reason| {
        Err(BenchError::InvalidParams {
            family: p.family,
            k: p.k,
            reason,
        })
    };
    match p.family {
        Family::Cnt => {
            if !(2..=30).contains(&p.k) {
                return err("expected 2 <= k <= 30");
            }
        }
        Family::Mv => {
            if !(2..=28).contains(&p.k) {
                return err("expected 2 <= k <= 28");
            }
        }
        Family::Bs => {
            if !p.k.is_power_of_two() || !(2..=128).contains(&p.k) {
                return err("expected k a power of two with 2 <= k <= 128");
            }
        }
        Family::Add => {
            if !(2..=20).contains(&p.k) {
                return err("expected 2 <= k <= 20");
            }
        }
        Family::Mult => {
            if !(2..=16).contains(&p.k) {
                return err("expected 2 <= k <= 16");
            }
        }
    }
    Ok(())
}

/// Generate the ASCII `aag` text of a benchmark instance.
pub fn gen_benchmark(p: &BenchParams) -> Result<String, BenchError> {
    validate(p)?;
    let circuit = match p.family {
        Family::Cnt => gen_cnt(p.k as usize, p.unrealizable),
        Family::Mv => gen_mv(p.k as usize, p.unrealizable),
        Family::Bs => gen_bs(p.k as usize, p.unrealizable),
        Family::Add => gen_add(p.k as usize, p.unrealizable),
        Family::Mult => gen_mult(p.k as usize, p.unrealizable),
    };
    Ok(circuit.to_aag())
}

/// Ripple increment of `bits` by `tick`, modulo `2^k`.
fn increment(b: &mut AigBuilder, bits: &[u32], tick: u32) -> Vec<u32> {
    let mut carry = tick;
    let mut out = Vec::with_capacity(bits.len());
    for &bit in bits {
        out.push(b.xor(bit, carry));
        carry = b.and(bit, carry);
    }
    out
}

/// Ripple add of two equal-width vectors with carry in; returns (sum,
/// carry out).
fn ripple_add(b: &mut AigBuilder, xs: &[u32], ys: &[u32], mut carry: u32) -> (Vec<u32>, u32) {
    let mut out = Vec::with_capacity(xs.len());
    for (&x, &y) in xs.iter().zip(ys) {
        let xy = b.xor(x, y);
        out.push(b.xor(xy, carry));
        let g = b.and(x, y);
        let pr = b.and(xy, carry);
        carry = b.or(g, pr);
    }
    (out, carry)
}

fn gen_cnt(k: usize, unreal: bool) -> AigCircuit {
    // inputs: tick, controllable_reset; latches: k counter bits
    let n_in = 2;
    let mut b = AigBuilder::new(n_in + k);
    let tick = b.leaf(0);
    let ctrl = b.leaf(1);
    let bits: Vec<u32> = (0..k).map(|j| b.leaf(n_in + j)).collect();
    let incremented = increment(&mut b, &bits, tick);
    // trigger: value 2^(k-1)-1, i.e. all low bits set and the top bit clear
    let mut trig_terms: Vec<u32> = bits[..k - 1].to_vec();
    trig_terms.push(AigBuilder::not(bits[k - 1]));
    let trigger = b.and_many(&trig_terms);
    let reset = if unreal {
        AigBuilder::FALSE
    } else {
        b.and(ctrl, trigger)
    };
    let next: Vec<u32> = incremented
        .iter()
        .map(|&s| b.and(AigBuilder::not(reset), s))
        .collect();
    let error = b.and_many(&bits); // counter at its maximum value
    let input_symbols = vec![
        Some("tick".to_string()),
        Some("controllable_reset".to_string()),
    ];
    let latch_symbols = (0..k).map(|j| Some(format!("count{}", j))).collect();
    builder_to_circuit(
        &b,
        n_in,
        k,
        &next,
        error,
        input_symbols,
        latch_symbols,
        Some("error".to_string()),
    )
}

fn gen_mv(k: usize, unreal: bool) -> AigCircuit {
    // inputs: k-1 uncontrollable, k-1 controllable; latches: k counter bits
    let n_u = k - 1;
    let n_in = 2 * n_u;
    let mut b = AigBuilder::new(n_in + k);
    let ticks: Vec<u32> = (0..n_u).map(|j| b.leaf(j)).collect();
    let ctrls: Vec<u32> = (0..n_u).map(|j| b.leaf(n_u + j)).collect();
    let bits: Vec<u32> = (0..k).map(|j| b.leaf(n_in + j)).collect();
    let tick = b.or_many(&ticks);
    let incremented = increment(&mut b, &bits, tick);
    let mut xor_c = AigBuilder::FALSE;
    for &c in &ctrls {
        xor_c = b.xor(xor_c, c);
    }
    let reset = if unreal {
        AigBuilder::FALSE
    } else {
        b.and(bits[k - 1], xor_c)
    };
    let next: Vec<u32> = incremented
        .iter()
        .map(|&s| b.and(AigBuilder::not(reset), s))
        .collect();
    let error = b.and_many(&bits);
    let mut input_symbols: Vec<Option<String>> =
        (0..n_u).map(|j| Some(format!("tick{}", j))).collect();
    input_symbols.extend((0..n_u).map(|j| Some(format!("controllable_vote{}", j))));
    let latch_symbols = (0..k).map(|j| Some(format!("count{}", j))).collect();
    builder_to_circuit(
        &b,
        n_in,
        k,
        &next,
        error,
        input_symbols,
        latch_symbols,
        Some("error".to_string()),
    )
}

fn gen_bs(k: usize, unreal: bool) -> AigCircuit {
    // inputs: log2(k) shift-amount bits, controllable_hold; latches: k
    // register bits. The register XORs its least significant bit and
    // rotates left by the shift amount unless held; the marked unsafe value
    // is the one-hot pattern 0..01.
    let n_s = k.ilog2() as usize;
    let n_in = n_s + 1;
    let mut b = AigBuilder::new(n_in + k);
    let shift: Vec<u32> = (0..n_s).map(|j| b.leaf(j)).collect();
    let hold = b.leaf(n_s);
    let reg: Vec<u32> = (0..k).map(|j| b.leaf(n_in + j)).collect();
    let mut rotated: Vec<u32> = reg.clone();
    rotated[0] = AigBuilder::not(rotated[0]);
    for (p, &s) in shift.iter().enumerate() {
        let amount = 1 << p;
        let prev = rotated.clone();
        for (j, slot) in rotated.iter_mut().enumerate() {
            let from = (j + k - amount % k) % k;
            *slot = b.mux(s, prev[from], prev[j]);
        }
    }
    let next: Vec<u32> = if unreal {
        rotated
    } else {
        reg.iter()
            .zip(&rotated)
            .map(|(&r, &rot)| b.mux(hold, r, rot))
            .collect()
    };
    let mut marked_terms = vec![reg[0]];
    marked_terms.extend(reg[1..].iter().map(|&r| AigBuilder::not(r)));
    let error = b.and_many(&marked_terms);
    let mut input_symbols: Vec<Option<String>> =
        (0..n_s).map(|j| Some(format!("shift{}", j))).collect();
    input_symbols.push(Some("controllable_hold".to_string()));
    let latch_symbols = (0..k).map(|j| Some(format!("reg{}", j))).collect();
    builder_to_circuit(
        &b,
        n_in,
        k,
        &next,
        error,
        input_symbols,
        latch_symbols,
        Some("error".to_string()),
    )
}

fn gen_add(k: usize, unreal: bool) -> AigCircuit {
    // inputs: a0..ak-1, b0..bk-1; controls: s0..sk-1
    let n_in = 3 * k;
    let n_latch = if unreal { k + 2 } else { 1 };
    let mut b = AigBuilder::new(n_in + n_latch);
    let xs: Vec<u32> = (0..k).map(|j| b.leaf(j)).collect();
    let ys: Vec<u32> = (0..k).map(|j| b.leaf(k + j)).collect();
    let ss: Vec<u32> = (0..k).map(|j| b.leaf(2 * k + j)).collect();
    let (sum, _) = ripple_add(&mut b, &xs, &ys, AigBuilder::FALSE);
    let mut input_symbols: Vec<Option<String>> = (0..k)
        .map(|j| Some(format!("a{}", j)))
        .chain((0..k).map(|j| Some(format!("b{}", j))))
        .collect();
    input_symbols.extend((0..k).map(|j| Some(format!("controllable_s{}", j))));
    if !unreal {
        // latch e: absorbs any mismatch between controls and sum bits
        let e = b.leaf(n_in);
        let diffs: Vec<u32> = ss.iter().zip(&sum).map(|(&s, &q)| b.xor(s, q)).collect();
        let mismatch = b.or_many(&diffs);
        let bad = b.or(e, mismatch);
        builder_to_circuit(
            &b,
            n_in,
            1,
            &[bad],
            bad,
            input_symbols,
            vec![Some("e".to_string())],
            Some("error".to_string()),
        )
    } else {
        // the controls of the previous round must equal the current sum:
        // an impossible prediction
        let e = b.leaf(n_in);
        let ds: Vec<u32> = (0..k).map(|j| b.leaf(n_in + 1 + j)).collect();
        let started = b.leaf(n_in + 1 + k);
        let diffs: Vec<u32> = ds.iter().zip(&sum).map(|(&d, &q)| b.xor(d, q)).collect();
        let any = b.or_many(&diffs);
        let mismatch = b.and(started, any);
        let bad = b.or(e, mismatch);
        let mut next = vec![bad];
        next.extend(ss.iter().copied());
        next.push(AigBuilder::TRUE);
        let mut latch_symbols = vec![Some("e".to_string())];
        latch_symbols.extend((0..k).map(|j| Some(format!("store{}", j))));
        latch_symbols.push(Some("started".to_string()));
        builder_to_circuit(
            &b,
            n_in,
            n_latch,
            &next,
            bad,
            input_symbols,
            latch_symbols,
            Some("error".to_string()),
        )
    }
}

fn gen_mult(k: usize, unreal: bool) -> AigCircuit {
    // inputs: a0..ak-1, b0..bk-1; controls: p0..p2k-1
    let n_in = 4 * k;
    let n_latch = if unreal { 2 * k + 2 } else { 0 };
    let mut b = AigBuilder::new(n_in + n_latch);
    let xs: Vec<u32> = (0..k).map(|j| b.leaf(j)).collect();
    let ys: Vec<u32> = (0..k).map(|j| b.leaf(k + j)).collect();
    let ps: Vec<u32> = (0..2 * k).map(|j| b.leaf(2 * k + j)).collect();
    // shift-add array multiplier, full 2k-bit product
    let mut acc = vec![AigBuilder::FALSE; 2 * k];
    for (i, &y) in ys.iter().enumerate() {
        let mut partial = vec![AigBuilder::FALSE; 2 * k];
        for (j, &x) in xs.iter().enumerate() {
            partial[i + j] = b.and(x, y);
        }
        let (sum, _) = ripple_add(&mut b, &acc, &partial, AigBuilder::FALSE);
        acc = sum;
    }
    let diffs_with = |b: &mut AigBuilder, lhs: &[u32]| -> u32 {
        let ds: Vec<u32> = lhs.iter().zip(&acc).map(|(&p, &q)| b.xor(p, q)).collect();
        b.or_many(&ds)
    };
    let mut input_symbols: Vec<Option<String>> = (0..k)
        .map(|j| Some(format!("a{}", j)))
        .chain((0..k).map(|j| Some(format!("b{}", j))))
        .collect();
    input_symbols.extend((0..2 * k).map(|j| Some(format!("controllable_p{}", j))));
    if !unreal {
        let mismatch = diffs_with(&mut b, &ps);
        builder_to_circuit(
            &b,
            n_in,
            0,
            &[],
            mismatch,
            input_symbols,
            vec![],
            Some("error".to_string()),
        )
    } else {
        let e = b.leaf(n_in);
        let ds: Vec<u32> = (0..2 * k).map(|j| b.leaf(n_in + 1 + j)).collect();
        let started = b.leaf(n_in + 1 + 2 * k);
        let any = diffs_with(&mut b, &ds);
        let mismatch = b.and(started, any);
        let bad = b.or(e, mismatch);
        let mut next = vec![bad];
        next.extend(ps.iter().copied());
        next.push(AigBuilder::TRUE);
        let mut latch_symbols = vec![Some("e".to_string())];
        latch_symbols.extend((0..2 * k).map(|j| Some(format!("store{}", j))));
        latch_symbols.push(Some("started".to_string()));
        builder_to_circuit(
            &b,
            n_in,
            n_latch,
            &next,
            bad,
            input_symbols,
            latch_symbols,
            Some("error".to_string()),
        )
    }
}
