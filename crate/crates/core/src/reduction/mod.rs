//! Reduction of an arbitrary circuit over a finite semiring to a
//! type-admitting circuit plus an affine recomposition, in two stages:
//! the short/long monomial split (producing a circuit over the ideal
//! ⟨R·E(R)·R⟩ and a residual constant) and the boundary-profile rewrite
//! into typed gates.

pub mod fsf;
pub mod leaf;
pub mod shortlong;

pub use fsf::{fsf, Quad, TypedConstruction};
pub use leaf::leaf_removal;
pub use shortlong::{short_long_analyze, short_value, GateAnalysis, ShortLongAnalysis, ShortPoly};

use crate::circuit::{Circuit, CircuitBuilder, GateIdx, Rhs, Term};
use crate::coeff::{Coeff, CoeffSemiring};
use crate::error::{Error, Result};
use crate::semigroup::Elem;
use crate::semiring::FiniteSemiring;

#[derive(Debug, Clone, Copy)]
pub struct ReductionOptions {
    /// Use the literal |R| as the long-product threshold instead of the
    /// minimal m with R^m = R·E(R)·R.
    pub fidelity_threshold: bool,
    /// Largest semiring the pipeline will accept (word enumeration is
    /// exponential in the threshold).
    pub max_semiring_size: usize,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            fidelity_threshold: false,
            max_semiring_size: 16,
        }
    }
}

/// Precomputed per-semiring data shared by every stage: the long-product
/// threshold, the coefficient quotient B(t,p), the ideal ⟨R·E(R)·R⟩ and the
/// sum-decomposition table for its elements.
pub struct ReductionContext<'a> {
    pub sr: &'a FiniteSemiring,
    /// Words of length >= threshold evaluate into R·E(R)·R.
    pub threshold: usize,
    pub coeff: CoeffSemiring,
    /// ⟨R·E(R)·R⟩, an ideal of R.
    pub ideal: Vec<Elem>,
    pub ideal_mask: Vec<bool>,
    decomp: DecompTable,
}

impl<'a> ReductionContext<'a> {
    pub fn new(sr: &'a FiniteSemiring, opts: ReductionOptions) -> Result<Self> {
        let products = sr.power_set_products(1);
        let threshold = if opts.fidelity_threshold {
            sr.size().max(products.minimal_m)
        } else {
            products.minimal_m
        };
        // the expensive part is enumerating words below the threshold
        // (|R|^(m-1) of them); at threshold 1 there are none, so only the
        // hard cap applies
        if threshold >= 2 && sr.size() > opts.max_semiring_size {
            return Err(Error::CapExceeded {
                what: "reduction pipeline semiring (threshold >= 2)",
                size: sr.size(),
                cap: opts.max_semiring_size,
            });
        }
        if sr.size() > 256 {
            return Err(Error::CapExceeded {
                what: "reduction pipeline semiring",
                size: sr.size(),
                cap: 256,
            });
        }
        let st = sr.stability();
        let coeff = CoeffSemiring::new(st.add_threshold, st.add_period);
        let rer = sr.rer();
        let ideal = sr.generated_subsemiring(&rer)?;
        let ideal_mask = sr.member_mask(&ideal);
        debug_assert!(sr.is_ideal(&ideal));
        let decomp = DecompTable::build(sr);
        Ok(ReductionContext {
            sr,
            threshold,
            coeff,
            ideal,
            ideal_mask,
            decomp,
        })
    }

    /// m·x for the representative m of a non-zero coefficient class.
    pub fn scalar_action(&self, c: Coeff, x: Elem) -> Elem {
        let rep = self.coeff.representative(c);
        assert!(rep >= 1, "zero coefficients never reach the scalar action");
        self.sr.nsum(rep, x)
    }

    /// h(w): the product of the letters of a non-empty word.
    pub fn word_value(&self, w: &[Elem]) -> Elem {
        self.sr.prod_all(w)
    }

    /// Writes x ∈ ⟨R·E(R)·R⟩ as a sum of products s·e·t with e idempotent,
    /// minimal in the number of summands (repeats allowed).
    pub fn decompose_rer(&self, x: Elem) -> Result<Vec<(Elem, Elem, Elem)>> {
        let triples = self.decomp.decompose(x).ok_or_else(|| {
            Error::Precondition(format!(
                "element '{}' is not in the ideal generated by R·E(R)·R",
                self.sr.elem_name(x)
            ))
        })?;
        debug_assert!(!triples.is_empty());
        debug_assert_eq!(
            self.sr.sum_all(
                &triples
                    .iter()
                    .map(|&(s, e, t)| self.sr.mul(self.sr.mul(s, e), t))
                    .collect::<Vec<_>>()
            ),
            x
        );
        debug_assert!(triples.iter().all(|&(_, e, _)| self.sr.mul(e, e) == e));
        Ok(triples)
    }

    /// The largest minimal summand count over the ideal (the "bounded by a
    /// constant" bound, computed exactly).
    pub fn max_summands(&self) -> usize {
        self.decomp.max_dist
    }
}

/// BFS table for writing ideal elements as sums of R·E(R)·R products.
struct DecompTable {
    /// minimal number of summands, per element
    dist: Vec<Option<usize>>,
    /// predecessor element (None for the first summand) and summand value
    parent: Vec<Option<(Option<Elem>, Elem)>>,
    /// lexicographically least (s,e,t) per product value
    triple_of: Vec<Option<(Elem, Elem, Elem)>>,
    max_dist: usize,
}

impl DecompTable {
    fn build(sr: &FiniteSemiring) -> Self {
        let n = sr.size();
        let mut triple_of: Vec<Option<(Elem, Elem, Elem)>> = vec![None; n];
        let idem = sr.mult_idempotents();
        for s in sr.elems() {
            for &e in &idem {
                let se = sr.mul(s, e);
                for t in sr.elems() {
                    let v = sr.mul(se, t);
                    if triple_of[v.0].is_none() {
                        triple_of[v.0] = Some((s, e, t));
                    }
                }
            }
        }
        let values: Vec<Elem> = sr.elems().filter(|v| triple_of[v.0].is_some()).collect();
        let mut dist: Vec<Option<usize>> = vec![None; n];
        let mut parent: Vec<Option<(Option<Elem>, Elem)>> = vec![None; n];
        let mut queue: Vec<Elem> = Vec::new();
        for &v in &values {
            dist[v.0] = Some(1);
            parent[v.0] = Some((None, v));
            queue.push(v);
        }
        let mut head = 0;
        let mut max_dist = if queue.is_empty() { 0 } else { 1 };
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let d = dist[x.0].unwrap();
            for &v in &values {
                let y = sr.add(x, v);
                if dist[y.0].is_none() {
                    dist[y.0] = Some(d + 1);
                    parent[y.0] = Some((Some(x), v));
                    max_dist = max_dist.max(d + 1);
                    queue.push(y);
                }
            }
        }
        DecompTable {
            dist,
            parent,
            triple_of,
            max_dist,
        }
    }

    fn decompose(&self, x: Elem) -> Option<Vec<(Elem, Elem, Elem)>> {
        self.dist[x.0]?;
        let mut out = Vec::new();
        let mut cur = Some(x);
        while let Some(c) = cur {
            let (prev, v) = self.parent[c.0].expect("reachable elements have parents");
            out.push(self.triple_of[v.0].expect("summands are product values"));
            cur = prev;
        }
        out.reverse();
        Some(out)
    }
}

/// Assignment of an idempotent pair to every gate of a circuit.
#[derive(Debug, Clone)]
pub struct TypeAssignment {
    pub types: Vec<(Elem, Elem)>,
}

impl TypeAssignment {
    pub fn of(&self, g: GateIdx) -> (Elem, Elem) {
        self.types[g.0]
    }

    /// Constant assignment (e,e) on every gate; valid for any circuit when
    /// e is a multiplicative identity of the semiring.
    pub fn constant(c: &Circuit, e: Elem) -> Self {
        TypeAssignment {
            types: vec![(e, e); c.len()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeViolation {
    /// the paired elements are not multiplicative idempotents
    NotIdempotent { gate: String },
    /// clause 1: [A] ∉ eRf
    ValueOutsideSlice { gate: String },
    /// clause 2: addition inputs or output differ in type
    AddTypeMismatch { gate: String },
    /// clause 3: type(A) ≠ (first of type(B), second of type(C))
    MulTypeMismatch { gate: String },
    NotNormalForm { gate: String },
}

/// Checks the three clauses of the type-function definition against a given
/// total assignment, using the naive evaluator for the membership clause
/// ([A] ∈ eRf ⟺ e·[A]·f = [A] for idempotent e, f).
pub fn validate_type_assignment(
    c: &Circuit,
    sr: &FiniteSemiring,
    t: &TypeAssignment,
) -> Vec<TypeViolation> {
    assert_eq!(t.types.len(), c.len(), "assignment must be total");
    let mut out = Vec::new();
    let values = c.eval_naive(sr);
    for g in c.indices() {
        let (e, f) = t.of(g);
        let id = || c.id(g).to_string();
        if sr.mul(e, e) != e || sr.mul(f, f) != f {
            out.push(TypeViolation::NotIdempotent { gate: id() });
            continue;
        }
        let v = values.value(g);
        if sr.mul(sr.mul(e, v), f) != v {
            out.push(TypeViolation::ValueOutsideSlice { gate: id() });
        }
        match c.rhs(g) {
            Rhs::Const(_) => {}
            Rhs::Add(x, y) => {
                if t.of(*x) != (e, f) || t.of(*y) != (e, f) {
                    out.push(TypeViolation::AddTypeMismatch { gate: id() });
                }
            }
            Rhs::Mul(x, y) => {
                if t.of(*x).0 != e || t.of(*y).1 != f {
                    out.push(TypeViolation::MulTypeMismatch { gate: id() });
                }
            }
            Rhs::Copy(_) | Rhs::Term(_) => {
                out.push(TypeViolation::NotNormalForm { gate: id() });
            }
        }
    }
    out
}

/// α(x₁,…,x_m) = Σ aᵢ·xᵢ·bᵢ (+ c).
#[derive(Debug, Clone)]
pub struct AffineFunction {
    pub pairs: Vec<(Elem, Elem)>,
    pub constant: Option<Elem>,
}

impl AffineFunction {
    pub fn arity(&self) -> usize {
        self.pairs.len()
    }

    pub fn apply(&self, sr: &FiniteSemiring, xs: &[Elem]) -> Elem {
        assert_eq!(xs.len(), self.pairs.len());
        let terms: Vec<Elem> = self
            .pairs
            .iter()
            .zip(xs)
            .map(|(&(a, b), &x)| sr.mul(sr.mul(a, x), b))
            .chain(self.constant)
            .collect();
        sr.sum_all(&terms)
    }
}

/// Result of the monomial-length split.
pub enum Reduced {
    /// Everything was short: the circuit value directly.
    Value(Elem),
    /// Everything long: an equivalent circuit over the ideal.
    Circuit(Circuit),
    /// Mixed: [input] = [circuit] + sigma.
    CircuitPlusSigma(Circuit, Elem),
}

pub struct MonomlengthArtifacts {
    pub outcome: Reduced,
    pub normalized_input: Circuit,
    pub analysis: ShortLongAnalysis,
    /// The residual constants m_A of the mixed multiplication gates.
    pub mixed_mul_constants: Vec<(String, Elem)>,
}

/// Splits the free-semiring value of every gate at the length threshold and
/// rebuilds the long part as a circuit over the ideal ⟨R·E(R)·R⟩; the short
/// part of the output gate survives as the constant sigma.
pub fn monomlength(c: &Circuit, ctx: &ReductionContext) -> Result<MonomlengthArtifacts> {
    let c = c.normalize();
    let output = c
        .output()
        .ok_or_else(|| Error::Precondition("monomial-length split needs an output gate".into()))?;
    let analysis = short_long_analyze(&c, ctx);
    let sr = ctx.sr;

    let out_gate = &analysis.per_gate[output.0];
    if !out_gate.long_present {
        let value = short_value(ctx, &out_gate.short).expect("short or long part exists");
        return Ok(MonomlengthArtifacts {
            outcome: Reduced::Value(value),
            normalized_input: c,
            analysis,
            mixed_mul_constants: Vec::new(),
        });
    }

    // residual constants for multiplication gates whose short×short
    // convolution crosses the threshold
    let mut mixed_mul_constants = Vec::new();
    let mut m_const: Vec<Option<Elem>> = vec![None; c.len()];
    for g in c.indices() {
        let Rhs::Mul(x, y) = c.rhs(g) else { continue };
        if !analysis.per_gate[g.0].long_present {
            continue;
        }
        let (bs, cs) = (&analysis.per_gate[x.0].short, &analysis.per_gate[y.0].short);
        let mut parts: Vec<Elem> = Vec::new();
        for (u, &cu) in &bs.0 {
            for (v, &cv) in &cs.0 {
                if u.len() + v.len() >= ctx.threshold {
                    let mut w = u.clone();
                    w.extend_from_slice(v);
                    let coeff = ctx.coeff.mul(cu, cv);
                    parts.push(ctx.scalar_action(coeff, ctx.word_value(&w)));
                }
            }
        }
        if !parts.is_empty() {
            let m_a = sr.sum_all(&parts);
            debug_assert!(ctx.ideal_mask[m_a.0]);
            m_const[g.0] = Some(m_a);
            mixed_mul_constants.push((c.id(g).to_string(), m_a));
        }
    }

    // the long-part circuit: one gate per source gate with a long part
    let mut b = CircuitBuilder::new(&sr.name);
    let mut lambda: Vec<Option<GateIdx>> = vec![None; c.len()];
    for &g in c.topo_order() {
        if !analysis.per_gate[g.0].long_present {
            continue;
        }
        let rhs = match c.rhs(g) {
            Rhs::Const(a) => {
                // possible only at threshold 1, where R = R·E(R)·R
                debug_assert_eq!(ctx.threshold, 1);
                debug_assert!(ctx.ideal_mask[a.0]);
                Rhs::Const(*a)
            }
            Rhs::Add(x, y) => match (lambda[x.0], lambda[y.0]) {
                (Some(lx), Some(ly)) => Rhs::Add(lx, ly),
                (Some(lx), None) => Rhs::Copy(lx),
                (None, Some(ly)) => Rhs::Copy(ly),
                (None, None) => unreachable!("addition gate with long part has a long child"),
            },
            Rhs::Mul(x, y) => {
                let bx = &analysis.per_gate[x.0];
                let by = &analysis.per_gate[y.0];
                let mut parts: Vec<Term> = Vec::new();
                if let (Some(lx), Some(ly)) = (lambda[x.0], lambda[y.0]) {
                    parts.push(Term::mul(Term::Gate(lx), Term::Gate(ly)));
                }
                if let (Some(hx), Some(ly)) = (short_value(ctx, &bx.short), lambda[y.0]) {
                    parts.push(Term::mul(Term::Const(hx), Term::Gate(ly)));
                }
                if let (Some(lx), Some(hy)) = (lambda[x.0], short_value(ctx, &by.short)) {
                    parts.push(Term::mul(Term::Gate(lx), Term::Const(hy)));
                }
                if let Some(m_a) = m_const[g.0] {
                    parts.push(Term::Const(m_a));
                }
                assert!(!parts.is_empty(), "long gate contributes at least one summand");
                Rhs::Term(Term::sum(parts))
            }
            Rhs::Copy(_) | Rhs::Term(_) => unreachable!("input was normalized"),
        };
        let name = format!("{}:L", c.id(g));
        let gate = match b.reserve_checked(&name) {
            Ok(gate) => {
                b.set_rhs(gate, rhs);
                gate
            }
            Err(_) => b.fresh(rhs),
        };
        lambda[g.0] = Some(gate);
    }
    b.set_output(lambda[output.0].expect("output has a long part here"));
    let c_lambda = b.finish()?.normalize();
    let d = leaf_removal(&c_lambda, sr, &ctx.ideal)?;

    let sigma = short_value(ctx, &out_gate.short);
    let outcome = match sigma {
        None => Reduced::Circuit(d),
        Some(s) => Reduced::CircuitPlusSigma(d, s),
    };
    Ok(MonomlengthArtifacts {
        outcome,
        normalized_input: c,
        analysis,
        mixed_mul_constants,
    })
}

/// Outcome of the full first stage.
pub enum Step1Outcome {
    /// The circuit value was determined outright.
    Value(Elem),
    Typed(Box<TypedConstruction>),
}

/// normalize → monomial split → typed rewrite, merging the residual sigma
/// into the affine constant. The recomposition identity
/// α([A₁],…,[A_m]) = [input] is oracle-checked by the test suites.
pub fn step1_pipeline(c: &Circuit, sr: &FiniteSemiring, opts: ReductionOptions) -> Result<Step1Outcome> {
    let ctx = ReductionContext::new(sr, opts)?;
    let artifacts = monomlength(c, &ctx)?;
    let (d, sigma) = match artifacts.outcome {
        Reduced::Value(v) => return Ok(Step1Outcome::Value(v)),
        Reduced::Circuit(d) => (d, None),
        Reduced::CircuitPlusSigma(d, s) => (d, Some(s)),
    };
    let mut typed = fsf(&d, &ctx)?;
    typed.affine.constant = sigma;
    Ok(Step1Outcome::Typed(Box::new(typed)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn decompose_rer_roundtrip_over_z6() {
        let sr = fixtures::ring_z(6);
        let ctx = ReductionContext::new(&sr, ReductionOptions::default()).unwrap();
        // Z6 has a 1, so RER = R and every element decomposes
        for x in sr.elems() {
            let triples = ctx.decompose_rer(x).unwrap();
            let parts: Vec<Elem> = triples
                .iter()
                .map(|&(s, e, t)| sr.mul(sr.mul(s, e), t))
                .collect();
            assert_eq!(sr.sum_all(&parts), x);
        }
    }

    #[test]
    fn decompose_single_product() {
        let b2 = fixtures::bool2();
        let ctx = ReductionContext::new(&b2, ReductionOptions::default()).unwrap();
        let one = b2.elem_by_name("1").unwrap();
        let triples = ctx.decompose_rer(one).unwrap();
        assert_eq!(triples.len(), 1);
        let (s, e, t) = triples[0];
        assert_eq!(b2.mul(b2.mul(s, e), t), one);
        assert_eq!(b2.mul(e, e), e);
    }

    #[test]
    fn decompose_rejects_elements_outside_ideal() {
        // sink2: ideal is {a}; b is not in it
        let sr = fixtures::sink2();
        let ctx = ReductionContext::new(&sr, ReductionOptions::default()).unwrap();
        let a = sr.elem_by_name("a").unwrap();
        let b = sr.elem_by_name("b").unwrap();
        assert!(ctx.decompose_rer(a).is_ok());
        assert!(ctx.decompose_rer(b).is_err());
    }

    #[test]
    fn context_threshold_and_cap() {
        let sr = fixtures::maxsat4();
        let ctx = ReductionContext::new(&sr, ReductionOptions::default()).unwrap();
        assert_eq!(ctx.threshold, 4);
        let fid = ReductionContext::new(
            &sr,
            ReductionOptions {
                fidelity_threshold: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(fid.threshold, 4);

        // a power semiring of a monoid has threshold 1: no word
        // enumeration, so the soft cap does not apply
        let p5 = fixtures::power_of_cyclic(5);
        let ctx = ReductionContext::new(&p5, ReductionOptions::default()).unwrap();
        assert_eq!(ctx.threshold, 1);
        // the fidelity threshold forces |R| and trips the soft cap
        assert!(matches!(
            ReductionContext::new(
                &p5,
                ReductionOptions {
                    fidelity_threshold: true,
                    ..Default::default()
                }
            ),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn affine_apply() {
        let sr = fixtures::ring_z(6);
        let e = |s: &str| sr.elem_by_name(s).unwrap();
        let alpha = AffineFunction {
            pairs: vec![(e("2"), e("3")), (e("1"), e("1"))],
            constant: Some(e("4")),
        };
        // 2·x·3 + 1·y·1 + 4 at (x,y) = (1,5): 6 + 5 + 4 = 15 = 3 mod 6
        assert_eq!(alpha.apply(&sr, &[e("1"), e("5")]), e("3"));
    }

    #[test]
    fn monomlength_case_selection_and_value_identity() {
        use crate::circuit::Circuit;
        let sr = fixtures::sink2();
        let ctx = ReductionContext::new(&sr, ReductionOptions::default()).unwrap();

        // case 1: a constant-only circuit has no long part
        let c = Circuit::parse("circuit over sink2\ngate g = const b\noutput g\n", &sr).unwrap();
        let art = monomlength(&c, &ctx).unwrap();
        match art.outcome {
            Reduced::Value(v) => assert_eq!(v, sr.elem_by_name("b").unwrap()),
            _ => panic!("expected the direct value"),
        }

        // case 3 on the mixed-parts circuit: sigma = h(2a) = a, [C] = [D] + sigma
        let c = Circuit::parse(shortlong::mixed_parts_circuit_text(), &sr).unwrap();
        let want = c.eval_naive(&sr).output.unwrap();
        let art = monomlength(&c, &ctx).unwrap();
        match art.outcome {
            Reduced::CircuitPlusSigma(d, sigma) => {
                assert_eq!(sigma, sr.elem_by_name("a").unwrap());
                let dv = d.eval_naive(&sr).output.unwrap();
                assert_eq!(sr.add(dv, sigma), want);
                // D is a circuit over the ideal {a}
                for g in d.gates() {
                    if let crate::circuit::Rhs::Const(a) = g.rhs {
                        assert!(ctx.ideal_mask[a.0]);
                    }
                }
            }
            _ => panic!("expected circuit plus sigma"),
        }

        // case 2: a circuit whose output has no short part
        let c = Circuit::parse(
            "circuit over sink2\ngate x = const a\ngate p = mul x x\noutput p\n",
            &sr,
        )
        .unwrap();
        let want = c.eval_naive(&sr).output.unwrap();
        let art = monomlength(&c, &ctx).unwrap();
        match art.outcome {
            Reduced::Circuit(d) => assert_eq!(d.eval_naive(&sr).output.unwrap(), want),
            _ => panic!("expected a bare circuit"),
        }
    }

    #[test]
    fn monomlength_identity_on_random_circuits() {
        use crate::gen::random_circuit;
        for sr in [
            fixtures::bool2(),
            fixtures::ring_z(4),
            fixtures::sink2(),
            fixtures::maxsat4(),
            fixtures::sink2sq(),
            fixtures::power_of_cyclic(3),
        ] {
            let ctx = ReductionContext::new(&sr, ReductionOptions::default()).unwrap();
            for seed in 0..25 {
                let c = random_circuit(&sr, 50, seed);
                let want = c.eval_naive(&sr).output.unwrap();
                let art = monomlength(&c, &ctx).unwrap();
                let got = match art.outcome {
                    Reduced::Value(v) => v,
                    Reduced::Circuit(d) => d.eval_naive(&sr).output.unwrap(),
                    Reduced::CircuitPlusSigma(d, s) => {
                        sr.add(d.eval_naive(&sr).output.unwrap(), s)
                    }
                };
                assert_eq!(got, want, "{} seed {seed}", sr.name);
            }
        }
    }

    #[test]
    fn pipeline_recomposes_on_random_circuits() {
        use crate::gen::random_circuit;
        for sr in [fixtures::sink2(), fixtures::maxsat4(), fixtures::power_of_cyclic(2)] {
            for seed in 0..25 {
                let c = random_circuit(&sr, 40, seed);
                let want = c.eval_naive(&sr).output.unwrap();
                match step1_pipeline(&c, &sr, ReductionOptions::default()).unwrap() {
                    Step1Outcome::Value(v) => assert_eq!(v, want),
                    Step1Outcome::Typed(tc) => {
                        let vals = tc.circuit.eval_naive(&sr);
                        let xs: Vec<Elem> =
                            tc.distinguished.iter().map(|&g| vals.value(g)).collect();
                        assert_eq!(tc.affine.apply(&sr, &xs), want, "{} seed {seed}", sr.name);
                        assert!(tc.affine.arity() <= sr.size().pow(4));
                    }
                }
            }
        }
    }

    #[test]
    fn fidelity_threshold_agrees_with_minimal_threshold() {
        use crate::gen::random_circuit;
        let strict = ReductionOptions {
            fidelity_threshold: true,
            ..Default::default()
        };
        // fixtures where the literal |R| threshold differs from the
        // minimal one (4 vs 2, and 3 vs 1)
        for sr in [fixtures::sink2sq(), fixtures::power_of_cyclic(2)] {
            let minimal = ReductionContext::new(&sr, ReductionOptions::default()).unwrap().threshold;
            let literal = ReductionContext::new(&sr, strict).unwrap().threshold;
            assert!(literal > minimal, "{}", sr.name);
            for seed in 0..10 {
                let c = random_circuit(&sr, 30, seed);
                let want = c.eval_naive(&sr).output.unwrap();
                for opts in [ReductionOptions::default(), strict] {
                    match step1_pipeline(&c, &sr, opts).unwrap() {
                        Step1Outcome::Value(v) => assert_eq!(v, want),
                        Step1Outcome::Typed(tc) => {
                            let vals = tc.circuit.eval_naive(&sr);
                            let xs: Vec<Elem> =
                                tc.distinguished.iter().map(|&g| vals.value(g)).collect();
                            assert_eq!(tc.affine.apply(&sr, &xs), want, "{} seed {seed}", sr.name);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn constant_type_assignment_valid_for_monoid_semirings() {
        use crate::gen::random_circuit;
        let p2 = fixtures::power_of_cyclic(2);
        let identity = p2.elem_by_name("{0}").unwrap();
        for seed in 0..5 {
            let c = random_circuit(&p2, 30, seed);
            let t = TypeAssignment::constant(&c, identity);
            assert!(validate_type_assignment(&c, &p2, &t).is_empty());
        }
    }

    #[test]
    fn perturbed_assignment_reports_violations() {
        let sr = fixtures::power_of_cyclic(2);
        let identity = sr.elem_by_name("{0}").unwrap();
        let full = sr.elem_by_name("{0,1}").unwrap();
        let c = crate::circuit::Circuit::parse(
            "circuit over p_z2\ngate x = const {1}\ngate y = const {0,1}\ngate s = add x y\ngate p = mul s x\noutput p\n",
            &sr,
        )
        .unwrap();
        let mut t = TypeAssignment::constant(&c, identity);
        // mismatched add type
        t.types[c.by_id("x").unwrap().0] = (full, full);
        let v = validate_type_assignment(&c, &sr, &t);
        assert!(v.iter().any(|x| matches!(x, TypeViolation::AddTypeMismatch { .. })));
        // clause 1: {0,1}·{1}·{0,1} = {0,1} ≠ {1}
        assert!(v.iter().any(|x| matches!(x, TypeViolation::ValueOutsideSlice { .. })));
    }
}
