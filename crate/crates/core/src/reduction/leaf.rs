//! Leaf removal: rewriting a circuit whose non-ideal constants appear only
//! in guarded positions into an equivalent circuit over a given ideal. The
//! produced gates A@l_r carry the value l·[A]·r, with l,r ranging over R
//! extended by a formal identity.

use crate::circuit::{Circuit, CircuitBuilder, GateIdx, Rhs};
use crate::error::{Error, Result};
use crate::semigroup::Elem;
use crate::semiring::FiniteSemiring;
use std::collections::HashMap;

/// One side of the sandwich: an element of R, or the formal identity.
type Side = Option<Elem>;

fn side_mul(sr: &FiniteSemiring, l: Side, x: Elem) -> Elem {
    match l {
        None => x,
        Some(v) => sr.mul(v, x),
    }
}

fn mul_side(sr: &FiniteSemiring, x: Elem, r: Side) -> Elem {
    match r {
        None => x,
        Some(v) => sr.mul(x, v),
    }
}

fn side_code(s: Side) -> String {
    match s {
        None => "I".to_string(),
        Some(e) => e.0.to_string(),
    }
}

/// Rewrites `c` over the ideal: requires a normal-form circuit with an
/// output gate whose rhs is an inner gate or an ideal constant, where every
/// multiplication gate has at least one such input and every addition gate
/// has two. Only gates reachable from the sandwiched output are built; the
/// result is normalized (the one-sided multiplication case introduces copy
/// gates).
pub fn leaf_removal(c: &Circuit, sr: &FiniteSemiring, ideal: &[Elem]) -> Result<Circuit> {
    if !c.is_normal_form() {
        return Err(Error::Precondition("leaf removal needs a normal-form circuit".into()));
    }
    if !sr.is_ideal(ideal) {
        return Err(Error::Precondition("the given set is not a non-empty ideal".into()));
    }
    let ideal_mask = sr.member_mask(ideal);
    let in_u = |g: GateIdx| match c.rhs(g) {
        Rhs::Const(a) => ideal_mask[a.0],
        _ => true,
    };
    let output = c
        .output()
        .ok_or_else(|| Error::Precondition("leaf removal needs an output gate".into()))?;
    if !in_u(output) {
        return Err(Error::Precondition(format!(
            "output gate '{}' is a non-ideal constant",
            c.id(output)
        )));
    }
    for g in c.indices() {
        match c.rhs(g) {
            Rhs::Add(x, y) if !in_u(*x) || !in_u(*y) => {
                return Err(Error::Precondition(format!(
                    "addition gate '{}' has a non-ideal constant input",
                    c.id(g)
                )));
            }
            Rhs::Mul(x, y) if !in_u(*x) && !in_u(*y) => {
                return Err(Error::Precondition(format!(
                    "multiplication gate '{}' has two non-ideal constant inputs",
                    c.id(g)
                )));
            }
            _ => {}
        }
    }

    struct Builder<'c, 'r> {
        c: &'c Circuit,
        sr: &'r FiniteSemiring,
        ideal_mask: Vec<bool>,
        b: CircuitBuilder,
        memo: HashMap<(usize, usize, usize), GateIdx>,
    }

    fn key(g: GateIdx, l: Side, r: Side) -> (usize, usize, usize) {
        let code = |s: Side| s.map_or(0, |e| e.0 + 1);
        (g.0, code(l), code(r))
    }

    impl Builder<'_, '_> {
        fn in_u(&self, g: GateIdx) -> bool {
            match self.c.rhs(g) {
                Rhs::Const(a) => self.ideal_mask[a.0],
                _ => true,
            }
        }

        fn build(&mut self, g: GateIdx, l: Side, r: Side) -> GateIdx {
            if let Some(&done) = self.memo.get(&key(g, l, r)) {
                return done;
            }
            let name = format!("{}@{}_{}", self.c.id(g), side_code(l), side_code(r));
            let new = self.b.reserve(&name);
            self.memo.insert(key(g, l, r), new);
            let rhs = match self.c.rhs(g) {
                Rhs::Const(a) => {
                    let v = mul_side(self.sr, side_mul(self.sr, l, *a), r);
                    debug_assert!(self.ideal_mask[v.0], "sandwiched ideal constant stays inside");
                    Rhs::Const(v)
                }
                Rhs::Add(x, y) => {
                    let gx = self.build(*x, l, r);
                    let gy = self.build(*y, l, r);
                    Rhs::Add(gx, gy)
                }
                Rhs::Mul(x, y) => {
                    let (x, y) = (*x, *y);
                    if self.in_u(x) && self.in_u(y) {
                        let gx = self.build(x, l, None);
                        let gy = self.build(y, None, r);
                        Rhs::Mul(gx, gy)
                    } else if !self.in_u(y) {
                        let Rhs::Const(cy) = self.c.rhs(y) else { unreachable!() };
                        let target = self.build(x, l, Some(mul_side(self.sr, *cy, r)));
                        Rhs::Copy(target)
                    } else {
                        let Rhs::Const(cx) = self.c.rhs(x) else { unreachable!() };
                        let target = self.build(y, Some(side_mul(self.sr, l, *cx)), r);
                        Rhs::Copy(target)
                    }
                }
                Rhs::Copy(_) | Rhs::Term(_) => unreachable!("normal form"),
            };
            self.b.set_rhs(new, rhs);
            new
        }
    }

    let mut builder = Builder {
        c,
        sr,
        ideal_mask,
        b: CircuitBuilder::new(&sr.name),
        memo: HashMap::new(),
    };
    let root = builder.build(output, None, None);
    builder.b.set_output(root);
    let out = builder.b.finish()?.normalize();
    debug_assert!(out
        .gates()
        .iter()
        .all(|g| !matches!(g.rhs, Rhs::Const(a) if !sr.member_mask(ideal)[a.0])));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::fixtures;

    /// Three-element chain a < b < c: addition is join, multiplication is
    /// the saturating index sum. The top element forms the ideal {c}.
    fn abc_semiring() -> crate::semiring::FiniteSemiring {
        use crate::semigroup::OpTable;
        let add = OpTable::from_rows(vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 2, 2]]).unwrap();
        let mul = OpTable::from_rows(vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]).unwrap();
        crate::semiring::FiniteSemiring::new(
            "abc",
            vec!["a".into(), "b".into(), "c".into()],
            add,
            mul,
        )
        .unwrap()
    }

    #[test]
    fn sandwiches_constants_into_the_ideal() {
        let sr = abc_semiring();
        let e = |s: &str| sr.elem_by_name(s).unwrap();
        // ideal {c}: c+c = c, xc = cx = c
        let ideal = vec![e("c")];
        assert!(sr.is_ideal(&ideal));
        // E = const c (in I); D = E·(const a); A = D + E; output A
        let c = Circuit::parse(
            "circuit over abc\n\
             gate E = const c\n\
             gate K = const a\n\
             gate D = mul E K\n\
             gate A = add D E\n\
             output A\n",
            &sr,
        )
        .unwrap();
        let want = c.eval_naive(&sr).output.unwrap();
        let d = leaf_removal(&c, &sr, &ideal).unwrap();
        assert_eq!(d.eval_naive(&sr).output.unwrap(), want);
        for g in d.gates() {
            if let Rhs::Const(a) = g.rhs {
                assert_eq!(a, e("c"));
            }
        }
    }

    #[test]
    fn circuit_already_over_ideal_unchanged_values() {
        let sr = fixtures::maxsat4();
        let ideal: Vec<_> = vec![sr.elem_by_name("4").unwrap()];
        assert!(sr.is_ideal(&ideal));
        let c = Circuit::parse(
            "circuit over maxsat4\ngate x = const 4\ngate y = add x x\ngate z = mul y x\noutput z\n",
            &sr,
        )
        .unwrap();
        let d = leaf_removal(&c, &sr, &ideal).unwrap();
        assert_eq!(d.eval_naive(&sr).output, c.eval_naive(&sr).output);
    }

    #[test]
    fn rejects_addition_with_non_ideal_leaf() {
        let sr = abc_semiring();
        let ideal = vec![sr.elem_by_name("c").unwrap()];
        let c = Circuit::parse(
            "circuit over abc\ngate E = const c\ngate K = const a\ngate A = add E K\noutput A\n",
            &sr,
        )
        .unwrap();
        let err = leaf_removal(&c, &sr, &ideal).unwrap_err();
        assert!(err.to_string().contains("addition gate 'A'"));
    }

    #[test]
    fn rejects_two_sided_non_ideal_product() {
        let sr = abc_semiring();
        let ideal = vec![sr.elem_by_name("c").unwrap()];
        let c = Circuit::parse(
            "circuit over abc\ngate K = const a\ngate A = mul K K\noutput A\n",
            &sr,
        )
        .unwrap();
        assert!(leaf_removal(&c, &sr, &ideal).is_err());
    }

    #[test]
    fn random_circuits_preserve_value_over_z6_ideal() {
        use crate::circuit::{CircuitBuilder, GateIdx};
        use rand::{Rng, SeedableRng};
        // Z6: the ideal generated by R·E(R)·R is all of Z6 (1 is present),
        // so use the ideal {0, 2, 4} = 2·Z6 and build random circuits whose
        // leaves are 2 or 4 with occasional guarded odd constants.
        let sr = fixtures::ring_z(6);
        let e = |s: &str| sr.elem_by_name(s).unwrap();
        let ideal = vec![e("0"), e("2"), e("4")];
        assert!(sr.is_ideal(&ideal));
        for seed in 0..40u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut b = CircuitBuilder::new(&sr.name);
            let mut in_u: Vec<bool> = Vec::new();
            for i in 0..30 {
                let (rhs, ok) = if i < 2 {
                    (Rhs::Const([e("2"), e("4"), e("0")][rng.gen_range(0..3)]), true)
                } else if rng.gen_bool(0.2) {
                    // non-ideal constant, only ever used as one mul input
                    (Rhs::Const([e("1"), e("3"), e("5")][rng.gen_range(0..3)]), false)
                } else if rng.gen_bool(0.5) {
                    // addition of two U gates
                    let picks: Vec<usize> = (0..i).filter(|&j| in_u[j]).collect();
                    let x = picks[rng.gen_range(0..picks.len())];
                    let y = picks[rng.gen_range(0..picks.len())];
                    (Rhs::Add(GateIdx(x), GateIdx(y)), true)
                } else {
                    let picks: Vec<usize> = (0..i).filter(|&j| in_u[j]).collect();
                    let x = picks[rng.gen_range(0..picks.len())];
                    let y = rng.gen_range(0..i);
                    if rng.gen_bool(0.5) {
                        (Rhs::Mul(GateIdx(x), GateIdx(y)), true)
                    } else {
                        (Rhs::Mul(GateIdx(y), GateIdx(x)), true)
                    }
                };
                b.add_gate(&format!("g{i}"), rhs).unwrap();
                in_u.push(ok);
            }
            let out = (0..30).rev().find(|&i| in_u[i]).unwrap();
            b.set_output(GateIdx(out));
            let c = b.finish().unwrap();
            let want = c.eval_naive(&sr).output.unwrap();
            let d = leaf_removal(&c, &sr, &ideal).unwrap();
            assert_eq!(d.eval_naive(&sr).output.unwrap(), want, "seed {seed}");
        }
    }
}
