//! Seeded random generators for circuits, Boolean circuits and grammars.
//! Everything is deterministic in the seed (ChaCha8), so test failures and
//! CLI demo runs are reproducible.

use crate::circuit::{Circuit, CircuitBuilder, Rhs};
use crate::cvp::{BoolCircuit, BoolRhs};
use crate::lang::grammar::GrammarWithSlp;
use crate::semigroup::Elem;
use crate::semiring::FiniteSemiring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random normal-form circuit with `n_gates` gates; roughly 30% constants
/// (always the first two), the rest add/mul over earlier gates.
pub fn random_circuit(sr: &FiniteSemiring, n_gates: usize, seed: u64) -> Circuit {
    let mut rng = rng(seed);
    let n_gates = n_gates.max(1);
    let mut b = CircuitBuilder::new(&sr.name);
    for i in 0..n_gates {
        let rhs = if i < 2 || rng.gen_bool(0.3) {
            Rhs::Const(Elem(rng.gen_range(0..sr.size())))
        } else {
            let x = crate::circuit::GateIdx(rng.gen_range(0..i));
            let y = crate::circuit::GateIdx(rng.gen_range(0..i));
            if rng.gen_bool(0.5) {
                Rhs::Add(x, y)
            } else {
                Rhs::Mul(x, y)
            }
        };
        b.add_gate(&format!("g{i}"), rhs).unwrap();
    }
    b.set_output(crate::circuit::GateIdx(n_gates - 1));
    b.finish().unwrap()
}

/// Random Boolean circuit over {const, and, not} (suitable for the Z_d
/// translation) or additionally `or` when `with_or` is set.
pub fn random_bool_circuit(n_gates: usize, with_or: bool, seed: u64) -> BoolCircuit {
    let mut rng = rng(seed);
    let n_gates = n_gates.max(1);
    let mut gates = Vec::with_capacity(n_gates);
    for i in 0..n_gates {
        let rhs = if i == 0 || rng.gen_bool(0.25) {
            BoolRhs::Const(rng.gen_bool(0.5))
        } else {
            let x = rng.gen_range(0..i);
            let y = rng.gen_range(0..i);
            match rng.gen_range(0..if with_or { 3 } else { 2 }) {
                0 => BoolRhs::And(x, y),
                1 => BoolRhs::Not(x),
                _ => BoolRhs::Or(x, y),
            }
        };
        gates.push((format!("g{i}"), rhs, None));
    }
    BoolCircuit::new(gates, Some(n_gates - 1)).unwrap()
}

/// Random layered Boolean circuit: `width` gates per layer, every wire goes
/// from layer k to k+1, constants on layer 1, single or/and gates above.
/// The output is the first gate of the top layer.
pub fn random_layered_bool_circuit(layers: usize, width: usize, seed: u64) -> BoolCircuit {
    let mut rng = rng(seed);
    let layers = layers.max(1);
    let width = width.max(1);
    let mut gates = Vec::new();
    let mut prev: Vec<usize> = Vec::new();
    for layer in 1..=layers {
        let count = if layer == layers { 1 } else { width };
        let mut cur = Vec::new();
        for j in 0..count {
            let idx = gates.len();
            let rhs = if layer == 1 {
                BoolRhs::Const(rng.gen_bool(0.5))
            } else {
                let x = prev[rng.gen_range(0..prev.len())];
                let y = prev[rng.gen_range(0..prev.len())];
                if rng.gen_bool(0.5) {
                    BoolRhs::And(x, y)
                } else {
                    BoolRhs::Or(x, y)
                }
            };
            gates.push((format!("l{layer}g{j}"), rhs, Some(layer)));
            cur.push(idx);
        }
        prev = cur;
    }
    let out = gates.len() - 1;
    BoolCircuit::new(gates, Some(out)).unwrap()
}

/// Random productive grammar over the terminal alphabet `letters`, with a
/// valid uniformizing selection: the marked production of the i-th
/// nonterminal only references later nonterminals, extra productions are
/// unconstrained.
pub fn random_grammar(letters: &[&str], n_nonterminals: usize, n_extra: usize, seed: u64) -> GrammarWithSlp {
    let mut rng = rng(seed);
    let n = n_nonterminals.max(1);
    let names: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
    let mut text = String::from("grammar\n");
    text.push_str(&format!("start {}\n", names[0]));
    // marked productions form a dag by construction
    for i in 0..n {
        let mut rhs: Vec<String> = Vec::new();
        let len = rng.gen_range(0..=2);
        for _ in 0..len {
            if i + 1 < n && rng.gen_bool(0.4) {
                rhs.push(names[rng.gen_range(i + 1..n)].clone());
            } else {
                rhs.push(letters[rng.gen_range(0..letters.len())].to_string());
            }
        }
        let rhs = if rhs.is_empty() { "_".to_string() } else { rhs.join(" ") };
        text.push_str(&format!("!{} -> {}\n", names[i], rhs));
    }
    for _ in 0..n_extra {
        let lhs = &names[rng.gen_range(0..n)];
        let len = rng.gen_range(1..=4);
        let mut rhs: Vec<String> = Vec::new();
        for _ in 0..len {
            if rng.gen_bool(0.35) {
                rhs.push(names[rng.gen_range(0..n)].clone());
            } else {
                rhs.push(letters[rng.gen_range(0..letters.len())].to_string());
            }
        }
        text.push_str(&format!("{} -> {}\n", lhs, rhs.join(" ")));
    }
    GrammarWithSlp::parse(&text).expect("generated grammar is valid")
}
