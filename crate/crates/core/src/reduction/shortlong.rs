//! Truncated free-semiring evaluation: every gate's value over ℕ[R] is kept
//! only as its short part (monomials below the length threshold, with
//! coefficients in B(t,p)) plus a flag recording whether a long part
//! exists. Coefficients never need to be exact: m·x depends only on the
//! B(t,p)-class of m.

use crate::circuit::{Circuit, Rhs};
use crate::coeff::Coeff;
use crate::semigroup::Elem;
use std::collections::BTreeMap;

use super::ReductionContext;

pub type Word = Vec<Elem>;

/// A truncated non-commutative polynomial; the empty map is ⊥.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShortPoly(pub BTreeMap<Word, Coeff>);

impl ShortPoly {
    pub fn is_bottom(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.0.keys()
    }
}

#[derive(Debug, Clone)]
pub struct GateAnalysis {
    pub short: ShortPoly,
    pub long_present: bool,
}

#[derive(Debug, Clone)]
pub struct ShortLongAnalysis {
    pub per_gate: Vec<GateAnalysis>,
}

/// Bottom-up truncated evaluation over ℕ[R]: constants contribute their
/// one-letter word, addition adds coefficients, multiplication convolves
/// and spills products at or above the threshold into the long flag.
pub fn short_long_analyze(c: &Circuit, ctx: &ReductionContext) -> ShortLongAnalysis {
    assert!(c.is_normal_form(), "analysis runs on normal-form circuits");
    let m = ctx.threshold;
    let bp = &ctx.coeff;
    let mut per_gate: Vec<Option<GateAnalysis>> = vec![None; c.len()];
    for &g in c.topo_order() {
        let analysis = match c.rhs(g) {
            Rhs::Const(a) => {
                let mut short = ShortPoly::default();
                let mut long = false;
                if 1 < m {
                    short.0.insert(vec![*a], bp.class_of(1));
                } else {
                    long = true;
                }
                GateAnalysis {
                    short,
                    long_present: long,
                }
            }
            Rhs::Add(x, y) => {
                let (ax, ay) = (per_gate[x.0].as_ref().unwrap(), per_gate[y.0].as_ref().unwrap());
                let mut short = ax.short.clone();
                for (w, &cv) in &ay.short.0 {
                    short
                        .0
                        .entry(w.clone())
                        .and_modify(|cu| *cu = bp.add(*cu, cv))
                        .or_insert(cv);
                }
                GateAnalysis {
                    short,
                    long_present: ax.long_present || ay.long_present,
                }
            }
            Rhs::Mul(x, y) => {
                let (ax, ay) = (per_gate[x.0].as_ref().unwrap(), per_gate[y.0].as_ref().unwrap());
                let mut short = ShortPoly::default();
                let mut long = ax.long_present || ay.long_present;
                for (u, &cu) in &ax.short.0 {
                    for (v, &cv) in &ay.short.0 {
                        if u.len() + v.len() < m {
                            let mut w = u.clone();
                            w.extend_from_slice(v);
                            let prod = bp.mul(cu, cv);
                            short
                                .0
                                .entry(w)
                                .and_modify(|cw| *cw = bp.add(*cw, prod))
                                .or_insert(prod);
                        } else {
                            long = true;
                        }
                    }
                }
                GateAnalysis {
                    short,
                    long_present: long,
                }
            }
            Rhs::Copy(_) | Rhs::Term(_) => unreachable!("normal form"),
        };
        debug_assert!(
            !analysis.short.is_bottom() || analysis.long_present,
            "every gate has a short or a long part"
        );
        per_gate[g.0] = Some(analysis);
    }
    let per_gate = per_gate.into_iter().map(Option::unwrap).collect();
    let analysis = ShortLongAnalysis { per_gate };
    debug_assert_eq!(
        long_flags_by_reachability(c, ctx, &analysis),
        analysis
            .per_gate
            .iter()
            .map(|a| a.long_present)
            .collect::<Vec<_>>()
    );
    analysis
}

/// h(short part): the sum over the support of coefficient-class · h(word).
pub fn short_value(ctx: &ReductionContext, poly: &ShortPoly) -> Option<Elem> {
    if poly.is_bottom() {
        return None;
    }
    let parts: Vec<Elem> = poly
        .0
        .iter()
        .map(|(w, &cls)| ctx.scalar_action(cls, ctx.word_value(w)))
        .collect();
    Some(ctx.sr.sum_all(&parts))
}

/// Independent computation of the long flags from the structural criterion:
/// a gate has a long part iff some multiplication gate below it combines
/// two short monomials whose total length reaches the threshold. At
/// threshold 1 every gate is long.
pub fn long_flags_by_reachability(
    c: &Circuit,
    ctx: &ReductionContext,
    analysis: &ShortLongAnalysis,
) -> Vec<bool> {
    if ctx.threshold == 1 {
        return vec![true; c.len()];
    }
    let mut flags = vec![false; c.len()];
    for &g in c.topo_order() {
        flags[g.0] = match c.rhs(g) {
            Rhs::Const(_) => false,
            Rhs::Add(x, y) => flags[x.0] || flags[y.0],
            Rhs::Mul(x, y) => {
                let local = analysis.per_gate[x.0].short.support().any(|u| {
                    analysis.per_gate[y.0]
                        .short
                        .support()
                        .any(|v| u.len() + v.len() >= ctx.threshold)
                });
                local || flags[x.0] || flags[y.0]
            }
            Rhs::Copy(_) | Rhs::Term(_) => unreachable!("normal form"),
        };
    }
    flags
}

/// The two-+-two-· circuit whose output evaluates to 2aab + 2ab + 2a
/// over the free semiring on {a,b}.
#[cfg(test)]
pub(crate) fn mixed_parts_circuit_text() -> &'static str {
    "circuit over sink2\n\
     gate E = const a\n\
     gate F = const b\n\
     gate E2 = add E E\n\
     gate D = mul E F\n\
     gate C = add D F\n\
     gate B = mul E2 C\n\
     gate A = add E2 B\n\
     output A\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::fixtures;
    use crate::reduction::{ReductionContext, ReductionOptions};

    fn sink2_ctx(sr: &crate::semiring::FiniteSemiring) -> ReductionContext<'_> {
        ReductionContext::new(sr, ReductionOptions::default()).unwrap()
    }

    #[test]
    fn const_gate_analysis() {
        let sr = fixtures::sink2();
        let ctx = sink2_ctx(&sr);
        assert_eq!(ctx.threshold, 2);
        let c = Circuit::parse("circuit over sink2\ngate g = const a\noutput g\n", &sr).unwrap();
        let a = short_long_analyze(&c, &ctx);
        let g = &a.per_gate[0];
        assert!(!g.long_present);
        assert_eq!(g.short.0.len(), 1);
        let (w, &cls) = g.short.0.iter().next().unwrap();
        assert_eq!(w, &vec![sr.elem_by_name("a").unwrap()]);
        assert_eq!(cls, ctx.coeff.class_of(1));
    }

    #[test]
    fn product_of_two_letters_is_long_at_threshold_two() {
        let sr = fixtures::sink2();
        let ctx = sink2_ctx(&sr);
        let c = Circuit::parse(
            "circuit over sink2\ngate g = const a\ngate h = mul g g\noutput h\n",
            &sr,
        )
        .unwrap();
        let a = short_long_analyze(&c, &ctx);
        let h = &a.per_gate[c.by_id("h").unwrap().0];
        assert!(h.short.is_bottom());
        assert!(h.long_present);
    }

    #[test]
    fn mixed_circuit_output_short_part_is_2a() {
        let sr = fixtures::sink2();
        let ctx = sink2_ctx(&sr);
        let c = Circuit::parse(mixed_parts_circuit_text(), &sr).unwrap();
        let analysis = short_long_analyze(&c, &ctx);
        let out = &analysis.per_gate[c.output().unwrap().0];
        assert!(out.long_present);
        let a_elem = sr.elem_by_name("a").unwrap();
        assert_eq!(out.short.0.len(), 1);
        assert_eq!(out.short.0.get(&vec![a_elem]), Some(&ctx.coeff.class_of(2)));
        // sigma = h(2a) = a + a = a in sink2
        assert_eq!(short_value(&ctx, &out.short), Some(a_elem));

        // per-gate checks against the hand-computed free values
        let gate = |id: &str| &analysis.per_gate[c.by_id(id).unwrap().0];
        assert!(!gate("E").long_present);
        assert!(!gate("E2").long_present);
        assert!(gate("D").long_present && gate("D").short.is_bottom());
        assert!(gate("C").long_present && !gate("C").short.is_bottom());
        assert!(gate("B").long_present && gate("B").short.is_bottom());
    }

    #[test]
    fn reachability_flags_agree_on_random_circuits() {
        use crate::gen::random_circuit;
        for sr in [fixtures::sink2(), fixtures::maxsat4(), fixtures::ring_z(4)] {
            let ctx = ReductionContext::new(&sr, ReductionOptions::default()).unwrap();
            for seed in 0..25 {
                let c = random_circuit(&sr, 60, seed).normalize();
                let analysis = short_long_analyze(&c, &ctx);
                let flags: Vec<bool> = analysis.per_gate.iter().map(|g| g.long_present).collect();
                assert_eq!(long_flags_by_reachability(&c, &ctx, &analysis), flags);
            }
        }
    }
}
