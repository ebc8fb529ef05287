//! Rewriting a normal-form circuit over ⟨R·E(R)·R⟩ into a type-admitting
//! circuit. Input constants are decomposed into sums s·e·t with idempotent
//! e; every gate's free-semiring value then splits by the first two and
//! last two letters of its monomials (the boundary profile P_A), and each
//! profile entry (s,e,f,t) yields a primed gate evaluating to the middle
//! factor, with type (e,f). The original values are recovered by the
//! affine sum Σ (s·e)·[A'_{s,e,f,t}]·(f·t).

use crate::circuit::{Circuit, CircuitBuilder, GateIdx, Rhs};
use crate::error::{Error, Result};
use crate::semigroup::Elem;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{AffineFunction, ReductionContext, TypeAssignment};

/// One boundary-profile entry: monomials in s·e·R*·f·t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    pub s: Elem,
    pub e: Elem,
    pub f: Elem,
    pub t: Elem,
}

/// Per-input-gate sum decompositions (empty for inner gates).
pub(crate) fn input_decompositions(
    c: &Circuit,
    ctx: &ReductionContext,
) -> Result<Vec<Vec<(Elem, Elem, Elem)>>> {
    let mut out = Vec::with_capacity(c.len());
    for g in c.indices() {
        match c.rhs(g) {
            Rhs::Const(a) => out.push(ctx.decompose_rer(*a)?),
            _ => out.push(Vec::new()),
        }
    }
    Ok(out)
}

/// Boundary profiles by bottom-up propagation: inputs from their
/// decompositions, additions by union, multiplications by crossing the
/// left factor's prefixes with the right factor's suffixes.
pub fn boundary_profiles(
    c: &Circuit,
    decomps: &[Vec<(Elem, Elem, Elem)>],
) -> Vec<BTreeSet<Quad>> {
    let mut profiles: Vec<BTreeSet<Quad>> = vec![BTreeSet::new(); c.len()];
    for &g in c.topo_order() {
        let p = match c.rhs(g) {
            Rhs::Const(_) => decomps[g.0]
                .iter()
                .map(|&(s, e, t)| Quad { s, e, f: e, t })
                .collect(),
            Rhs::Add(x, y) => profiles[x.0].union(&profiles[y.0]).copied().collect(),
            Rhs::Mul(x, y) => {
                let prefixes: BTreeSet<(Elem, Elem)> =
                    profiles[x.0].iter().map(|q| (q.s, q.e)).collect();
                let suffixes: BTreeSet<(Elem, Elem)> =
                    profiles[y.0].iter().map(|q| (q.f, q.t)).collect();
                let mut set = BTreeSet::new();
                for &(s, e) in &prefixes {
                    for &(f, t) in &suffixes {
                        set.insert(Quad { s, e, f, t });
                    }
                }
                set
            }
            Rhs::Copy(_) | Rhs::Term(_) => unreachable!("normal form"),
        };
        profiles[g.0] = p;
    }
    profiles
}

/// Boundary profiles by the path criterion: an entry (s,e,e,t) propagates
/// from an input monomial s·e³·t along addition-only paths; an entry
/// (s,e,f,t) arises at a multiplication gate reachable from an s·e³·t'
/// monomial along its left spine and an s'·f³·t monomial along its right
/// spine, then propagates along addition-only paths.
pub fn boundary_profiles_by_reachability(
    c: &Circuit,
    decomps: &[Vec<(Elem, Elem, Elem)>],
) -> Vec<BTreeSet<Quad>> {
    let n = c.len();
    let mut lpre: Vec<BTreeSet<(Elem, Elem)>> = vec![BTreeSet::new(); n];
    let mut rsuf: Vec<BTreeSet<(Elem, Elem)>> = vec![BTreeSet::new(); n];
    for &g in c.topo_order() {
        let (l, r) = match c.rhs(g) {
            Rhs::Const(_) => (
                decomps[g.0].iter().map(|&(s, e, _)| (s, e)).collect(),
                decomps[g.0].iter().map(|&(_, e, t)| (e, t)).collect(),
            ),
            Rhs::Add(x, y) => (
                lpre[x.0].union(&lpre[y.0]).copied().collect(),
                rsuf[x.0].union(&rsuf[y.0]).copied().collect(),
            ),
            Rhs::Mul(x, y) => (lpre[x.0].clone(), rsuf[y.0].clone()),
            Rhs::Copy(_) | Rhs::Term(_) => unreachable!("normal form"),
        };
        lpre[g.0] = l;
        rsuf[g.0] = r;
    }
    let mut reach: Vec<BTreeSet<Quad>> = vec![BTreeSet::new(); n];
    for &g in c.topo_order() {
        let p = match c.rhs(g) {
            Rhs::Const(_) => decomps[g.0]
                .iter()
                .map(|&(s, e, t)| Quad { s, e, f: e, t })
                .collect(),
            Rhs::Add(x, y) => reach[x.0].union(&reach[y.0]).copied().collect(),
            Rhs::Mul(_, _) => {
                let mut set = BTreeSet::new();
                for &(s, e) in &lpre[g.0] {
                    for &(f, t) in &rsuf[g.0] {
                        set.insert(Quad { s, e, f, t });
                    }
                }
                set
            }
            Rhs::Copy(_) | Rhs::Term(_) => unreachable!("normal form"),
        };
        reach[g.0] = p;
    }
    reach
}

/// The typed rewrite of a circuit over the ideal, with the affine
/// recomposition of its output gate.
pub struct TypedConstruction {
    pub circuit: Circuit,
    pub types: TypeAssignment,
    pub distinguished: Vec<GateIdx>,
    pub affine: AffineFunction,
    /// Sorted boundary profile per source gate.
    pub source_profiles: Vec<Vec<Quad>>,
    gate_map: HashMap<(usize, Quad), GateIdx>,
}

impl TypedConstruction {
    /// The primed gate carrying the middle factor of source gate `src` for
    /// profile entry `q`.
    pub fn constructed_gate(&self, src: GateIdx, q: Quad) -> Option<GateIdx> {
        self.gate_map.get(&(src.0, q)).copied()
    }

    /// Σ (s·e)·[A'_q]·(f·t) over the source gate's profile, evaluated from
    /// the given per-gate values of the constructed circuit.
    pub fn recomposition_value(
        &self,
        sr: &crate::semiring::FiniteSemiring,
        src: GateIdx,
        cprime_values: &crate::circuit::EvalResult,
    ) -> Elem {
        let parts: Vec<Elem> = self.source_profiles[src.0]
            .iter()
            .map(|q| {
                let g = self.constructed_gate(src, *q).expect("profile entries have gates");
                let v = cprime_values.value(g);
                sr.mul(sr.mul(sr.mul(q.s, q.e), v), sr.mul(q.f, q.t))
            })
            .collect();
        sr.sum_all(&parts)
    }
}

struct TypedBuilder {
    b: CircuitBuilder,
    types: BTreeMap<usize, (Elem, Elem)>,
    const_gates: HashMap<(Elem, (Elem, Elem)), GateIdx>,
    mul_gates: HashMap<(GateIdx, GateIdx), GateIdx>,
    add_gates: HashMap<(GateIdx, GateIdx), GateIdx>,
}

impl TypedBuilder {
    fn constant(&mut self, v: Elem, ty: (Elem, Elem)) -> GateIdx {
        if let Some(&g) = self.const_gates.get(&(v, ty)) {
            return g;
        }
        let g = self.b.fresh(Rhs::Const(v));
        self.types.insert(g.0, ty);
        self.const_gates.insert((v, ty), g);
        g
    }

    fn product(&mut self, x: GateIdx, y: GateIdx) -> GateIdx {
        if let Some(&g) = self.mul_gates.get(&(x, y)) {
            return g;
        }
        let ty = (self.types[&x.0].0, self.types[&y.0].1);
        let g = self.b.fresh(Rhs::Mul(x, y));
        self.types.insert(g.0, ty);
        self.mul_gates.insert((x, y), g);
        g
    }

    fn sum(&mut self, x: GateIdx, y: GateIdx) -> GateIdx {
        if let Some(&g) = self.add_gates.get(&(x, y)) {
            return g;
        }
        let ty = self.types[&x.0];
        debug_assert_eq!(ty, self.types[&y.0]);
        let g = self.b.fresh(Rhs::Add(x, y));
        self.types.insert(g.0, ty);
        self.add_gates.insert((x, y), g);
        g
    }

    fn sum_chain(&mut self, parts: &[GateIdx]) -> GateIdx {
        let mut acc = parts[0];
        for &p in &parts[1..] {
            acc = self.sum(acc, p);
        }
        acc
    }

    fn named(&mut self, name: &str, rhs: Rhs, ty: (Elem, Elem)) -> GateIdx {
        let g = match self.b.reserve_checked(name) {
            Ok(g) => {
                self.b.set_rhs(g, rhs);
                g
            }
            Err(_) => self.b.fresh(rhs),
        };
        self.types.insert(g.0, ty);
        g
    }
}

/// Builds the type-admitting circuit for a normal-form circuit over the
/// ideal ⟨R·E(R)·R⟩. Fails if some constant lies outside the ideal.
pub fn fsf(c: &Circuit, ctx: &ReductionContext) -> Result<TypedConstruction> {
    if !c.is_normal_form() {
        return Err(Error::Precondition("typed rewrite needs a normal-form circuit".into()));
    }
    let output = c
        .output()
        .ok_or_else(|| Error::Precondition("typed rewrite needs an output gate".into()))?;
    let sr = ctx.sr;
    let decomps = input_decompositions(c, ctx)?;
    let profiles = boundary_profiles(c, &decomps);
    debug_assert_eq!(profiles, boundary_profiles_by_reachability(c, &decomps));

    let mut tb = TypedBuilder {
        b: CircuitBuilder::new(&sr.name),
        types: BTreeMap::new(),
        const_gates: HashMap::new(),
        mul_gates: HashMap::new(),
        add_gates: HashMap::new(),
    };
    let mut gate_map: HashMap<(usize, Quad), GateIdx> = HashMap::new();

    for &g in c.topo_order() {
        for q in profiles[g.0].iter().copied() {
            let ty = (q.e, q.f);
            let target = match c.rhs(g) {
                Rhs::Const(_) => {
                    // multiplicity-fold sum of the idempotent e
                    let count = decomps[g.0]
                        .iter()
                        .filter(|&&(s, e, t)| s == q.s && e == q.e && t == q.t)
                        .count();
                    debug_assert!(count >= 1);
                    let e_gate = tb.constant(q.e, ty);
                    let parts = vec![e_gate; count];
                    let folded = tb.sum_chain(&parts);
                    let name = format!("{}.q{}_{}_{}_{}", c.id(g), q.s.0, q.e.0, q.f.0, q.t.0);
                    if count == 1 {
                        tb.named(&name, Rhs::Copy(folded), ty)
                    } else {
                        folded
                    }
                }
                Rhs::Add(x, y) => {
                    let gx = gate_map.get(&(x.0, q)).copied();
                    let gy = gate_map.get(&(y.0, q)).copied();
                    match (gx, gy) {
                        (Some(a), Some(b)) => {
                            let name =
                                format!("{}.q{}_{}_{}_{}", c.id(g), q.s.0, q.e.0, q.f.0, q.t.0);
                            tb.named(&name, Rhs::Add(a, b), ty)
                        }
                        (Some(a), None) => a,
                        (None, Some(b)) => b,
                        (None, None) => unreachable!("profile entries come from a child"),
                    }
                }
                Rhs::Mul(x, y) => {
                    let mut parts: Vec<GateIdx> = Vec::new();
                    for qb in profiles[x.0].iter().filter(|qb| qb.s == q.s && qb.e == q.e) {
                        for qc in profiles[y.0].iter().filter(|qc| qc.f == q.f && qc.t == q.t) {
                            let bg = gate_map[&(x.0, *qb)];
                            let cg = gate_map[&(y.0, *qc)];
                            // bridge constant f'·t'·s'·e' of type (f', e')
                            let bridge_val =
                                sr.mul(sr.mul(qb.f, qb.t), sr.mul(qc.s, qc.e));
                            let bridge = tb.constant(bridge_val, (qb.f, qc.e));
                            let left = tb.product(bg, bridge);
                            parts.push(tb.product(left, cg));
                        }
                    }
                    assert!(!parts.is_empty(), "crossed profiles are non-empty");
                    let folded = tb.sum_chain(&parts);
                    let name = format!("{}.q{}_{}_{}_{}", c.id(g), q.s.0, q.e.0, q.f.0, q.t.0);
                    if parts.len() == 1 {
                        tb.named(&name, Rhs::Copy(folded), ty)
                    } else {
                        folded
                    }
                }
                Rhs::Copy(_) | Rhs::Term(_) => unreachable!("normal form"),
            };
            gate_map.insert((g.0, q), target);
        }
    }

    // normalize to clear the naming copy gates, tracking index movement:
    // normalize keeps indices of existing gates stable and only resolves
    // copy rhs, so types transfer by index.
    let built = tb.b.finish()?;
    let circuit = built.normalize();
    debug_assert_eq!(built.len(), circuit.len());
    let types = TypeAssignment {
        types: (0..circuit.len())
            .map(|i| *tb.types.get(&i).expect("every constructed gate is typed"))
            .collect(),
    };

    let out_quads: Vec<Quad> = profiles[output.0].iter().copied().collect();
    assert!(!out_quads.is_empty());
    let distinguished: Vec<GateIdx> = out_quads.iter().map(|q| gate_map[&(output.0, *q)]).collect();
    let affine = AffineFunction {
        pairs: out_quads
            .iter()
            .map(|q| (sr.mul(q.s, q.e), sr.mul(q.f, q.t)))
            .collect(),
        constant: None,
    };
    let source_profiles: Vec<Vec<Quad>> = profiles
        .into_iter()
        .map(|p| p.into_iter().collect())
        .collect();

    let tc = TypedConstruction {
        circuit,
        types,
        distinguished,
        affine,
        source_profiles,
        gate_map,
    };
    debug_assert!(super::validate_type_assignment(&tc.circuit, sr, &tc.types).is_empty());
    Ok(tc)
}
