//! Boolean circuits and the two hardness gadgets: the translation of the
//! Boolean circuit value problem into Z_d arithmetic (¬x becomes
//! 1 + (d-1)·x), and the layered translation into the max-plus semiring
//! (ℕ, max, +) whose values are pinned to 2^k-1 / 2^k per layer.

use crate::circuit::{Circuit, CircuitBuilder, GateIdx, Rhs};
use crate::error::{Error, Result};
use crate::fixtures::ring_z;
use crate::semiring::FiniteSemiring;
use crate::textfmt::{tokenized_lines, valid_name};
pub use num_bigint::BigUint;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolRhs {
    Const(bool),
    And(usize, usize),
    Or(usize, usize),
    Not(usize),
}

/// A Boolean circuit; gates may carry a layer annotation (used by the
/// max-plus translation).
#[derive(Debug, Clone)]
pub struct BoolCircuit {
    gates: Vec<(String, BoolRhs, Option<usize>)>,
    output: Option<usize>,
}

impl BoolCircuit {
    pub fn new(gates: Vec<(String, BoolRhs, Option<usize>)>, output: Option<usize>) -> Result<Self> {
        for (i, (id, rhs, _)) in gates.iter().enumerate() {
            if !valid_name(id) {
                return Err(Error::Precondition(format!("invalid gate id '{id}'")));
            }
            let refs = match rhs {
                BoolRhs::Const(_) => vec![],
                BoolRhs::And(a, b) | BoolRhs::Or(a, b) => vec![*a, *b],
                BoolRhs::Not(a) => vec![*a],
            };
            for r in refs {
                if r >= i {
                    return Err(Error::Precondition(format!(
                        "gate '{id}' references a non-earlier gate"
                    )));
                }
            }
        }
        Ok(BoolCircuit { gates, output })
    }

    pub fn gates(&self) -> &[(String, BoolRhs, Option<usize>)] {
        &self.gates
    }

    pub fn output(&self) -> Option<usize> {
        self.output
    }

    pub fn eval(&self) -> Vec<bool> {
        let mut vals = Vec::with_capacity(self.gates.len());
        for (_, rhs, _) in &self.gates {
            let v = match rhs {
                BoolRhs::Const(b) => *b,
                BoolRhs::And(a, b) => vals[*a] && vals[*b],
                BoolRhs::Or(a, b) => vals[*a] || vals[*b],
                BoolRhs::Not(a) => !vals[*a],
            };
            vals.push(v);
        }
        vals
    }

    pub fn output_value(&self) -> bool {
        let vals = self.eval();
        vals[self.output.expect("output gate")]
    }

    pub fn parse(text: &str) -> Result<BoolCircuit> {
        let mut lines = tokenized_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty boolean circuit file"))?;
        if header != ["boolcircuit"] {
            return Err(Error::parse(ln, "expected 'boolcircuit'"));
        }
        let mut gates: Vec<(String, BoolRhs, Option<usize>)> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut output = None;
        for (ln, toks) in lines {
            match toks[0] {
                "gate" => {
                    if toks.len() < 4 || toks[2] != "=" {
                        return Err(Error::parse(ln, "expected 'gate <id> = <rhs> [layer <k>]'"));
                    }
                    let id = toks[1].to_string();
                    if index.contains_key(&id) {
                        return Err(Error::DuplicateGate(id));
                    }
                    let (mut rest, mut layer) = (&toks[3..], None);
                    if rest.len() >= 2 && rest[rest.len() - 2] == "layer" {
                        layer = Some(
                            rest[rest.len() - 1]
                                .parse::<usize>()
                                .map_err(|_| Error::parse(ln, "bad layer number"))?,
                        );
                        rest = &rest[..rest.len() - 2];
                    }
                    let gref = |name: &str| -> Result<usize> {
                        index
                            .get(name)
                            .copied()
                            .ok_or_else(|| Error::UnknownGate(name.to_string()))
                    };
                    let rhs = match (rest[0], rest.len()) {
                        ("const", 2) => match rest[1] {
                            "0" => BoolRhs::Const(false),
                            "1" => BoolRhs::Const(true),
                            other => return Err(Error::parse(ln, format!("bad constant '{other}'"))),
                        },
                        ("and", 3) => BoolRhs::And(gref(rest[1])?, gref(rest[2])?),
                        ("or", 3) => BoolRhs::Or(gref(rest[1])?, gref(rest[2])?),
                        ("not", 2) => BoolRhs::Not(gref(rest[1])?),
                        _ => return Err(Error::parse(ln, format!("bad right-hand side '{}'", rest.join(" ")))),
                    };
                    index.insert(id.clone(), gates.len());
                    gates.push((id, rhs, layer));
                }
                "output" => {
                    if toks.len() != 2 {
                        return Err(Error::parse(ln, "expected 'output <id>'"));
                    }
                    output = Some(
                        *index
                            .get(toks[1])
                            .ok_or_else(|| Error::UnknownGate(toks[1].to_string()))?,
                    );
                }
                other => return Err(Error::parse(ln, format!("unknown directive '{other}'"))),
            }
        }
        BoolCircuit::new(gates, output)
    }
}

/// Gate-for-gate translation of a {const,and,or,not} circuit into a circuit
/// over the ring Z_d: ∧ becomes ·, ¬x becomes 1 + (d-1)·x, ∨ is expanded by
/// De Morgan. Booleans embed as 0/1.
pub fn reduce_boolean_cvp(bc: &BoolCircuit, d: usize) -> Result<(Circuit, FiniteSemiring)> {
    if d < 2 {
        return Err(Error::Precondition("Z_d translation needs d >= 2".into()));
    }
    let zd = ring_z(d);
    let zero = zd.elem_by_name("0").unwrap();
    let one = zd.elem_by_name("1").unwrap();
    let dm1 = zd.elem_by_name(&(d - 1).to_string()).unwrap();
    let mut b = CircuitBuilder::new(&zd.name);
    let mut map: Vec<GateIdx> = Vec::with_capacity(bc.gates().len());
    // y = 1 + (d-1)·x
    let negate = |b: &mut CircuitBuilder, x: GateIdx| -> GateIdx {
        let k = b.fresh(Rhs::Const(dm1));
        let prod = b.fresh(Rhs::Mul(k, x));
        let c1 = b.fresh(Rhs::Const(one));
        b.fresh(Rhs::Add(c1, prod))
    };
    for (id, rhs, _) in bc.gates() {
        let g = match rhs {
            BoolRhs::Const(v) => b.add_gate(id, Rhs::Const(if *v { one } else { zero }))?,
            BoolRhs::And(x, y) => b.add_gate(id, Rhs::Mul(map[*x], map[*y]))?,
            BoolRhs::Not(x) => {
                let n = negate(&mut b, map[*x]);
                b.add_gate(id, Rhs::Copy(n))?
            }
            BoolRhs::Or(x, y) => {
                let nx = negate(&mut b, map[*x]);
                let ny = negate(&mut b, map[*y]);
                let both = b.fresh(Rhs::Mul(nx, ny));
                let n = negate(&mut b, both);
                b.add_gate(id, Rhs::Copy(n))?
            }
        };
        map.push(g);
    }
    if let Some(o) = bc.output() {
        b.set_output(map[o]);
    }
    Ok((b.finish()?.normalize(), zd))
}

/// A circuit over (ℕ, max, +) with arbitrary-precision values.
#[derive(Debug, Clone)]
pub enum MaxPlusRhs {
    Const(BigUint),
    Max(usize, usize),
    Plus(usize, usize),
}

#[derive(Debug, Clone)]
pub struct MaxPlusCircuit {
    pub gates: Vec<(String, MaxPlusRhs)>,
    pub output: usize,
}

impl MaxPlusCircuit {
    pub fn eval(&self) -> Vec<BigUint> {
        let mut vals: Vec<BigUint> = Vec::with_capacity(self.gates.len());
        for (_, rhs) in &self.gates {
            let v = match rhs {
                MaxPlusRhs::Const(c) => c.clone(),
                MaxPlusRhs::Max(a, b) => vals[*a].clone().max(vals[*b].clone()),
                MaxPlusRhs::Plus(a, b) => &vals[*a] + &vals[*b],
            };
            vals.push(v);
        }
        vals
    }

    pub fn output_value(&self) -> BigUint {
        self.eval()[self.output].clone()
    }
}

#[derive(Debug)]
pub struct MaxPlusReduction {
    pub circuit: MaxPlusCircuit,
    /// Number of layers after normalization; true output value is 2^n.
    pub layers: usize,
    /// Per original-gate (layer, translated gate index).
    pub gate_map: Vec<(usize, usize)>,
}

/// Translates a layered {const,and,or} circuit into (ℕ, max, +) so that a
/// gate on layer k carries 2^k-1 when false and 2^k when true. Wires that
/// skip layers are first padded with and(x,x) pass-through gates.
pub fn reduce_cvp_maxplus(bc: &BoolCircuit) -> Result<MaxPlusReduction> {
    let layers = check_layers(bc)?;
    let padded = pad_to_adjacent_layers(bc, &layers)?;
    let n_layers = padded
        .gates()
        .iter()
        .map(|(_, _, l)| l.unwrap())
        .max()
        .unwrap_or(1);

    let mut gates: Vec<(String, MaxPlusRhs)> = Vec::new();
    let mut map: Vec<usize> = Vec::with_capacity(padded.gates().len());
    let mut gate_map = Vec::new();
    for (id, rhs, layer) in padded.gates() {
        let k = layer.unwrap();
        let idx = match rhs {
            BoolRhs::Const(v) => {
                // layer-1 inputs: 0 ↦ 1, 1 ↦ 2
                let val = if *v { 2u32 } else { 1u32 };
                gates.push((id.clone(), MaxPlusRhs::Const(BigUint::from(val))));
                gates.len() - 1
            }
            BoolRhs::And(x, y) => {
                // max(B+C, 2^{k}-1) with B,C on layer k-1
                let sum_idx = {
                    gates.push((format!("{id}.sum"), MaxPlusRhs::Plus(map[*x], map[*y])));
                    gates.len() - 1
                };
                let bound = (BigUint::from(1u32) << k) - 1u32;
                gates.push((format!("{id}.bound"), MaxPlusRhs::Const(bound)));
                let bound_idx = gates.len() - 1;
                gates.push((id.clone(), MaxPlusRhs::Max(sum_idx, bound_idx)));
                gates.len() - 1
            }
            BoolRhs::Or(x, y) => {
                // max(B,C) + 2^{k-1}
                let max_idx = {
                    gates.push((format!("{id}.max"), MaxPlusRhs::Max(map[*x], map[*y])));
                    gates.len() - 1
                };
                let shift = BigUint::from(1u32) << (k - 1);
                gates.push((format!("{id}.shift"), MaxPlusRhs::Const(shift)));
                let shift_idx = gates.len() - 1;
                gates.push((id.clone(), MaxPlusRhs::Plus(max_idx, shift_idx)));
                gates.len() - 1
            }
            BoolRhs::Not(_) => {
                return Err(Error::Precondition(
                    "layered translation handles and/or/const circuits only".into(),
                ))
            }
        };
        map.push(idx);
        gate_map.push((k, idx));
    }
    let output = map[padded
        .output()
        .ok_or_else(|| Error::Precondition("layered circuit needs an output gate".into()))?];
    Ok(MaxPlusReduction {
        circuit: MaxPlusCircuit { gates, output },
        layers: n_layers,
        gate_map,
    })
}

/// Checks and returns per-gate layers: constants on layer 1, inner gates
/// above their children, output on the top layer.
fn check_layers(bc: &BoolCircuit) -> Result<Vec<usize>> {
    let mut layers = Vec::with_capacity(bc.gates().len());
    for (id, rhs, layer) in bc.gates() {
        let l = layer.ok_or_else(|| {
            Error::Precondition(format!("gate '{id}' is missing its layer annotation"))
        })?;
        match rhs {
            BoolRhs::Const(_) if l != 1 => {
                return Err(Error::Precondition(format!("constant '{id}' must be on layer 1")))
            }
            BoolRhs::And(x, y) | BoolRhs::Or(x, y) => {
                if layers[*x] >= l || layers[*y] >= l {
                    return Err(Error::Precondition(format!(
                        "gate '{id}' on layer {l} must be above its inputs"
                    )));
                }
            }
            BoolRhs::Not(_) => {
                return Err(Error::Precondition(
                    "layered translation handles and/or/const circuits only".into(),
                ))
            }
            _ => {}
        }
        layers.push(l);
    }
    if let Some(o) = bc.output() {
        let top = layers.iter().max().copied().unwrap_or(1);
        if layers[o] != top {
            return Err(Error::Precondition("output gate must be on the top layer".into()));
        }
    }
    Ok(layers)
}

/// Inserts and(x,x) pass-through gates so that every wire spans exactly one
/// layer.
fn pad_to_adjacent_layers(bc: &BoolCircuit, layers: &[usize]) -> Result<BoolCircuit> {
    let mut gates: Vec<(String, BoolRhs, Option<usize>)> = Vec::new();
    let mut map: Vec<usize> = Vec::with_capacity(bc.gates().len());
    for (gi, (id, rhs, _)) in bc.gates().iter().enumerate() {
        let l = layers[gi];
        // lift child to layer l-1 through copy-through and-gates
        let lift = |child: usize, gates: &mut Vec<(String, BoolRhs, Option<usize>)>| -> usize {
            let mut cur = map[child];
            for k in (layers[child] + 1)..l {
                gates.push((
                    format!("{id}.pad{k}.{child}"),
                    BoolRhs::And(cur, cur),
                    Some(k),
                ));
                cur = gates.len() - 1;
            }
            cur
        };
        let rhs = match rhs {
            BoolRhs::Const(v) => BoolRhs::Const(*v),
            BoolRhs::And(x, y) => {
                let (x, y) = (lift(*x, &mut gates), lift(*y, &mut gates));
                BoolRhs::And(x, y)
            }
            BoolRhs::Or(x, y) => {
                let (x, y) = (lift(*x, &mut gates), lift(*y, &mut gates));
                BoolRhs::Or(x, y)
            }
            BoolRhs::Not(_) => unreachable!("rejected by check_layers"),
        };
        gates.push((id.clone(), rhs, Some(l)));
        map.push(gates.len() - 1);
    }
    BoolCircuit::new(gates, bc.output().map(|o| map[o]))
}

/// Evaluates both sides and checks the per-layer invariants (a)/(b) and the
/// output correspondence [C]=1 ⟺ [D]=2^n. Returns (boolean value, max-plus
/// value).
pub fn verify_maxplus_reduction(bc: &BoolCircuit, red: &MaxPlusReduction) -> (bool, BigUint) {
    let bool_vals = {
        let layers = check_layers(bc).expect("already checked");
        let padded = pad_to_adjacent_layers(bc, &layers).expect("already padded once");
        padded.eval()
    };
    let mp_vals = red.circuit.eval();
    for (gi, &(k, idx)) in red.gate_map.iter().enumerate() {
        let expect = if bool_vals[gi] {
            BigUint::from(1u32) << k
        } else {
            (BigUint::from(1u32) << k) - 1u32
        };
        assert_eq!(mp_vals[idx], expect, "layer invariant violated at padded gate {gi}");
    }
    let out_val = red.circuit.output_value();
    (bc.output_value(), out_val)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_bool_circuit, random_layered_bool_circuit};

    #[test]
    fn negation_formula_in_z3() {
        let bc = BoolCircuit::parse("boolcircuit\ngate x = const 0\ngate y = not x\noutput y\n").unwrap();
        let (c, zd) = reduce_boolean_cvp(&bc, 3).unwrap();
        // ¬0 = 1 + 2·0 = 1
        assert_eq!(c.eval_naive(&zd).output.unwrap(), zd.elem_by_name("1").unwrap());
        let bc = BoolCircuit::parse("boolcircuit\ngate x = const 1\ngate y = not x\noutput y\n").unwrap();
        let (c, zd) = reduce_boolean_cvp(&bc, 3).unwrap();
        // ¬1 = 1 + 2·1 = 0
        assert_eq!(c.eval_naive(&zd).output.unwrap(), zd.elem_by_name("0").unwrap());
    }

    #[test]
    fn d_below_two_rejected() {
        let bc = BoolCircuit::parse("boolcircuit\ngate x = const 0\noutput x\n").unwrap();
        assert!(reduce_boolean_cvp(&bc, 1).is_err());
    }

    #[test]
    fn random_circuits_translate_correctly() {
        for seed in 0..30 {
            let bc = random_bool_circuit(50, true, seed);
            let want = bc.output_value();
            for d in [2usize, 3, 5] {
                let (c, zd) = reduce_boolean_cvp(&bc, d).unwrap();
                let got = c.eval_naive(&zd).output.unwrap();
                let expect = zd.elem_by_name(if want { "1" } else { "0" }).unwrap();
                assert_eq!(got, expect, "seed {seed} d {d}");
                // every gate value stays in the 0/1 embedding
                let res = c.eval_naive(&zd);
                for (gi, (id, _, _)) in bc.gates().iter().enumerate() {
                    let _ = gi;
                    let v = res.value(c.by_id(id).unwrap());
                    assert!(v == zd.elem_by_name("0").unwrap() || v == zd.elem_by_name("1").unwrap());
                }
            }
        }
    }

    #[test]
    fn maxplus_or_and_examples() {
        // x=1, y=0; or on layer 2 gives max(2,1)+2 = 4 = 2²
        let bc = BoolCircuit::parse(
            "boolcircuit\ngate x = const 1 layer 1\ngate y = const 0 layer 1\ngate a = or x y layer 2\noutput a\n",
        )
        .unwrap();
        let red = reduce_cvp_maxplus(&bc).unwrap();
        let (b, v) = verify_maxplus_reduction(&bc, &red);
        assert!(b);
        assert_eq!(v, BigUint::from(4u32));

        // and on layer 2 gives max(2+1, 3) = 3 = 2²-1
        let bc = BoolCircuit::parse(
            "boolcircuit\ngate x = const 1 layer 1\ngate y = const 0 layer 1\ngate a = and x y layer 2\noutput a\n",
        )
        .unwrap();
        let red = reduce_cvp_maxplus(&bc).unwrap();
        let (b, v) = verify_maxplus_reduction(&bc, &red);
        assert!(!b);
        assert_eq!(v, BigUint::from(3u32));
    }

    #[test]
    fn layered_random_circuits_verify() {
        for seed in 0..20 {
            let bc = random_layered_bool_circuit(6, 4, seed);
            let red = reduce_cvp_maxplus(&bc).unwrap();
            let (b, v) = verify_maxplus_reduction(&bc, &red);
            let two_n = BigUint::from(1u32) << red.layers;
            assert_eq!(b, v == two_n, "seed {seed}");
        }
    }

    #[test]
    fn skipping_wires_get_padded() {
        let bc = BoolCircuit::parse(
            "boolcircuit\n\
             gate x = const 1 layer 1\n\
             gate y = const 0 layer 1\n\
             gate m = or x y layer 2\n\
             gate top = and m x layer 3\n\
             output top\n",
        )
        .unwrap();
        let red = reduce_cvp_maxplus(&bc).unwrap();
        let (b, v) = verify_maxplus_reduction(&bc, &red);
        assert!(b);
        assert_eq!(v, BigUint::from(8u32));
    }
}
