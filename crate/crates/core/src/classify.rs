//! The dichotomy hypotheses for a finite semiring: {0,1}-freeness (with a
//! constructive B₂/Z_d witness), solvability and aperiodicity of the
//! multiplicative semigroup, the local-group property, and the combined
//! complexity verdict.

use crate::semigroup::{Elem, FiniteSemigroup};
use crate::semiring::FiniteSemiring;

/// Complexity classification of circuit evaluation over a semiring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    PComplete,
    Det,
    Nl,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::PComplete => write!(f, "P-complete"),
            Verdict::Det => write!(f, "DET"),
            Verdict::Nl => write!(f, "NL"),
        }
    }
}

/// Scans for a pair (z, o) with z ≠ o, z+z = z, z+o = o, zo = oz = zz = z,
/// oo = o. Such a pair exists iff the semiring is *not* {0,1}-free.
/// Returns the lexicographically least witness (by element index).
pub fn zero_one_witness(sr: &FiniteSemiring) -> Option<(Elem, Elem)> {
    for z in sr.elems() {
        if sr.add(z, z) != z || sr.mul(z, z) != z {
            continue;
        }
        for o in sr.elems() {
            if z == o {
                continue;
            }
            if sr.add(z, o) == o
                && sr.mul(z, o) == z
                && sr.mul(o, z) == z
                && sr.mul(o, o) == o
            {
                return Some((z, o));
            }
        }
    }
    None
}

pub fn is_zero_one_free(sr: &FiniteSemiring) -> bool {
    zero_one_witness(sr).is_none()
}

/// The concrete obstruction to {0,1}-freeness: a subsemiring isomorphic to
/// B₂ or to the ring Z_d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// `{zero, one}` with one additively idempotent: a copy of B₂.
    B2 { zero: Elem, one: Elem },
    /// d elements forming a ring Z_d; `elements[i]` plays the residue i.
    Zd { d: usize, elements: Vec<Elem> },
}

/// Constructive version of the 1 ⟹ 2 direction: from a witness pair the
/// subsemiring {z} ∪ {m·o} is isomorphic to some B(k,d); k = 0 exposes a
/// Z_d ring, k >= 1 exposes a B₂ via a = dk.
pub fn find_b2_or_zd(sr: &FiniteSemiring) -> Option<Obstruction> {
    let (z, o) = zero_one_witness(sr)?;
    // the sequence z, o, 2o, 3o, ... mirrors 0, 1, 2, 3, ... in B(k,d)
    let mut seq = vec![z];
    let mut seen_at = vec![usize::MAX; sr.size()];
    seen_at[z.0] = 0;
    let mut cur = o;
    let (k, d) = loop {
        if seen_at[cur.0] != usize::MAX {
            let start = seen_at[cur.0];
            break (start, seq.len() - start);
        }
        seen_at[cur.0] = seq.len();
        seq.push(cur);
        cur = sr.add(cur, o);
    };
    if k == 0 {
        // the whole orbit is a cycle through z: a ring Z_d, d >= 2 since z != o
        debug_assert!(d >= 2);
        Some(Obstruction::Zd {
            d,
            elements: seq,
        })
    } else {
        // pick a = dk (a >= k, divisible by d): {z, a·o} is a copy of B2
        let a = d * k.max(1);
        let one = sr.nsum(a, o);
        debug_assert_ne!(z, one);
        Some(Obstruction::B2 { zero: z, one })
    }
}

/// Verifies that an obstruction really carries the claimed structure, by
/// direct table comparison. Used by tests and debug assertions.
pub fn verify_obstruction(sr: &FiniteSemiring, ob: &Obstruction) -> bool {
    match ob {
        Obstruction::B2 { zero, one } => {
            let (z, o) = (*zero, *one);
            z != o
                && sr.add(z, z) == z
                && sr.add(z, o) == o
                && sr.add(o, o) == o
                && sr.mul(z, z) == z
                && sr.mul(z, o) == z
                && sr.mul(o, z) == z
                && sr.mul(o, o) == o
        }
        Obstruction::Zd { d, elements } => {
            let d = *d;
            if elements.len() != d || d < 2 {
                return false;
            }
            // elements[i] acts as residue i; check both tables
            for i in 0..d {
                for j in 0..d {
                    if sr.add(elements[i], elements[j]) != elements[(i + j) % d] {
                        return false;
                    }
                    if sr.mul(elements[i], elements[j]) != elements[(i * j) % d] {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// A maximal subgroup of a semigroup: the group of units of a local monoid
/// eSe, with identity e.
#[derive(Debug, Clone)]
pub struct MaximalSubgroup {
    pub idempotent: Elem,
    pub elements: Vec<Elem>,
}

/// One maximal subgroup per idempotent e: the units of eSe. Every subgroup
/// of the semigroup embeds into one of these.
pub fn maximal_subgroups(sg: &FiniteSemigroup) -> Vec<MaximalSubgroup> {
    sg.idempotents()
        .into_iter()
        .map(|e| {
            let local = sg.local_monoid(e);
            let in_local = {
                let mut mask = vec![false; sg.size()];
                for &x in &local {
                    mask[x.0] = true;
                }
                mask
            };
            let elements: Vec<Elem> = local
                .iter()
                .copied()
                .filter(|&x| {
                    local.iter().any(|&y| {
                        in_local[y.0] && sg.op(x, y) == e && sg.op(y, x) == e
                    })
                })
                .collect();
            debug_assert!(group_closed(sg, e, &elements));
            MaximalSubgroup {
                idempotent: e,
                elements,
            }
        })
        .collect()
}

fn group_closed(sg: &FiniteSemigroup, e: Elem, g: &[Elem]) -> bool {
    let mut mask = vec![false; sg.size()];
    for &x in g {
        mask[x.0] = true;
    }
    mask[e.0]
        && g.iter().all(|&x| {
            g.iter().all(|&y| mask[sg.op(x, y).0])
                && g.iter().any(|&y| sg.op(x, y) == e && sg.op(y, x) == e)
        })
}

/// Derived series of a subgroup (given by its element set and identity):
/// G_{i+1} = [G_i, G_i]. Returns true iff it reaches the trivial group.
fn subgroup_is_solvable(sg: &FiniteSemigroup, e: Elem, elements: &[Elem]) -> bool {
    let mut current: Vec<Elem> = elements.to_vec();
    loop {
        if current.len() == 1 {
            return true;
        }
        let derived = commutator_subgroup(sg, e, &current);
        if derived.len() == current.len() {
            return derived.len() == 1;
        }
        current = derived;
    }
}

fn commutator_subgroup(sg: &FiniteSemigroup, e: Elem, g: &[Elem]) -> Vec<Elem> {
    let inv = |x: Elem| {
        g.iter()
            .copied()
            .find(|&y| sg.op(x, y) == e && sg.op(y, x) == e)
            .expect("group element has an inverse")
    };
    let mut gens: Vec<Elem> = Vec::new();
    let mut seen = vec![false; sg.size()];
    for &x in g {
        for &y in g {
            let c = sg.op(sg.op(inv(x), inv(y)), sg.op(x, y));
            if !seen[c.0] {
                seen[c.0] = true;
                gens.push(c);
            }
        }
    }
    // close the generator set under the group operation
    let mut members = vec![false; sg.size()];
    let mut out = vec![e];
    members[e.0] = true;
    let mut queue = vec![e];
    while let Some(x) = queue.pop() {
        for &ggen in &gens {
            let y = sg.op(x, ggen);
            if !members[y.0] {
                members[y.0] = true;
                out.push(y);
                queue.push(y);
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone)]
pub struct SolvabilityReport {
    pub solvable: bool,
    /// First non-solvable maximal subgroup, when not solvable.
    pub witness: Option<MaximalSubgroup>,
}

/// A finite semigroup is solvable iff every (maximal) subgroup is solvable.
pub fn is_solvable(sg: &FiniteSemigroup) -> SolvabilityReport {
    for g in maximal_subgroups(sg) {
        if !subgroup_is_solvable(sg, g.idempotent, &g.elements) {
            return SolvabilityReport {
                solvable: false,
                witness: Some(g),
            };
        }
    }
    SolvabilityReport {
        solvable: true,
        witness: None,
    }
}

/// Aperiodicity via maximal subgroups; cross-checked against the
/// x^ω = x^{ω+1} characterization.
pub fn is_aperiodic(sg: &FiniteSemigroup) -> bool {
    let by_groups = maximal_subgroups(sg).iter().all(|g| g.elements.len() == 1);
    let omega = sg.omega();
    let by_powers = sg
        .elems()
        .all(|x| sg.power(x, omega) == sg.power(x, omega + 1));
    debug_assert_eq!(by_groups, by_powers);
    by_groups
}

/// True iff every local monoid eSe is a group.
pub fn is_local_group(sg: &FiniteSemigroup) -> bool {
    sg.idempotents().into_iter().all(|e| {
        let local = sg.local_monoid(e);
        local
            .iter()
            .all(|&x| local.iter().any(|&y| sg.op(x, y) == e && sg.op(y, x) == e))
    })
}

#[derive(Debug)]
pub struct ClassificationReport {
    pub zero_one_free: bool,
    pub zero_one_witness: Option<(Elem, Elem)>,
    pub obstruction: Option<Obstruction>,
    pub multiplicative_solvable: bool,
    pub nonsolvable_witness: Option<MaximalSubgroup>,
    pub multiplicative_aperiodic: bool,
    pub verdict: Verdict,
}

/// Full dichotomy report: P-complete iff not {0,1}-free or R_• not
/// solvable; NL iff {0,1}-free and R_• aperiodic; DET otherwise.
pub fn classify(sr: &FiniteSemiring) -> ClassificationReport {
    let witness = zero_one_witness(sr);
    let zero_one_free = witness.is_none();
    let obstruction = find_b2_or_zd(sr);
    debug_assert_eq!(zero_one_free, obstruction.is_none());
    if let Some(ob) = &obstruction {
        debug_assert!(verify_obstruction(sr, ob));
    }
    let mult = sr.multiplicative();
    let solv = is_solvable(&mult);
    let aperiodic = is_aperiodic(&mult);
    let verdict = if !zero_one_free || !solv.solvable {
        Verdict::PComplete
    } else if aperiodic {
        Verdict::Nl
    } else {
        Verdict::Det
    };
    ClassificationReport {
        zero_one_free,
        zero_one_witness: witness,
        obstruction,
        multiplicative_solvable: solv.solvable,
        nonsolvable_witness: solv.witness,
        multiplicative_aperiodic: aperiodic,
        verdict,
    }
}

/// Brute-force enumeration of all subgroups (subsets that are groups under
/// the semigroup operation). Exponential; intended for cross-validation on
/// small semigroups only.
pub fn brute_force_subgroups(sg: &FiniteSemigroup) -> Vec<(Elem, Vec<Elem>)> {
    let n = sg.size();
    assert!(n <= 16, "brute-force subgroup enumeration is for small semigroups");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let elems: Vec<Elem> = (0..n).filter(|i| mask & (1 << i) != 0).map(Elem).collect();
        // find an identity within the subset
        let id = elems.iter().copied().find(|&e| {
            elems.iter().all(|&x| sg.op(e, x) == x && sg.op(x, e) == x)
        });
        let Some(e) = id else { continue };
        let closed = elems.iter().all(|&x| {
            elems.iter().all(|&y| elems.contains(&sg.op(x, y)))
        });
        if !closed {
            continue;
        }
        let has_inverses = elems.iter().all(|&x| {
            elems.iter().any(|&y| sg.op(x, y) == e && sg.op(y, x) == e)
        });
        if has_inverses {
            out.push((e, elems));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn b2_not_free_with_its_own_constants() {
        let b2 = fixtures::bool2();
        let w = zero_one_witness(&b2).unwrap();
        assert_eq!(w, (Elem(0), Elem(1)));
        let ob = find_b2_or_zd(&b2).unwrap();
        assert!(verify_obstruction(&b2, &ob));
        assert!(matches!(ob, Obstruction::B2 { .. }));
    }

    #[test]
    fn rings_not_free_expose_zd() {
        for d in [2usize, 3, 4, 6] {
            let z = fixtures::ring_z(d);
            assert!(!is_zero_one_free(&z));
            let ob = find_b2_or_zd(&z).unwrap();
            assert!(verify_obstruction(&z, &ob));
            match ob {
                Obstruction::Zd { d: found, .. } => assert_eq!(found, d),
                Obstruction::B2 { .. } => panic!("Z_{d} should expose a ring"),
            }
        }
    }

    #[test]
    fn power_of_z5_is_free() {
        let p = fixtures::power_of_cyclic(5);
        assert!(is_zero_one_free(&p));
        assert!(find_b2_or_zd(&p).is_none());
    }

    #[test]
    fn idempotent_one_collapses_to_b2() {
        // sink2 made un-free by flipping mul to meet: chain lattice {a < b}
        use crate::semigroup::OpTable;
        use crate::semiring::FiniteSemiring;
        let add = OpTable::from_rows(vec![vec![0, 1], vec![1, 1]]).unwrap();
        let mul = OpTable::from_rows(vec![vec![0, 0], vec![0, 1]]).unwrap();
        let chain = FiniteSemiring::new("chain2", vec!["a".into(), "b".into()], add, mul).unwrap();
        let ob = find_b2_or_zd(&chain).unwrap();
        assert!(verify_obstruction(&chain, &ob));
        assert!(matches!(ob, Obstruction::B2 { .. }));
    }

    #[test]
    fn maximal_subgroups_of_z5_and_and() {
        let z5 = fixtures::cyclic_group(5);
        let gs = maximal_subgroups(&z5);
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].elements.len(), 5);

        let and = fixtures::and_semigroup();
        let gs = maximal_subgroups(&and);
        assert_eq!(gs.len(), 2);
        assert!(gs.iter().all(|g| g.elements.len() == 1));
    }

    #[test]
    fn maximal_subgroups_of_power_z5_multiplicative() {
        let p = fixtures::power_of_cyclic(5);
        let mul = p.multiplicative();
        let gs = maximal_subgroups(&mul);
        assert_eq!(gs.len(), 2);
        let mut sizes: Vec<usize> = gs.iter().map(|g| g.elements.len()).collect();
        sizes.sort();
        // units at {0} are the singletons (≅ Z5); the local monoid at Z5 is trivial
        assert_eq!(sizes, vec![1, 5]);
    }

    #[test]
    fn s5_not_solvable_s4_solvable() {
        let s5 = fixtures::symmetric_group(5);
        let rep = is_solvable(&s5);
        assert!(!rep.solvable);
        assert_eq!(rep.witness.unwrap().elements.len(), 120);

        let s4 = fixtures::symmetric_group(4);
        assert!(is_solvable(&s4).solvable);
    }

    #[test]
    fn commutative_semigroups_solvable() {
        for sg in [fixtures::cyclic_group(6), fixtures::and_semigroup(), fixtures::trivial_semigroup()] {
            assert!(is_solvable(&sg).solvable);
        }
    }

    #[test]
    fn aperiodicity_examples() {
        assert!(is_aperiodic(&fixtures::and_semigroup()));
        assert!(!is_aperiodic(&fixtures::cyclic_group(2)));
        assert!(is_aperiodic(&fixtures::trivial_semigroup()));
    }

    #[test]
    fn local_group_examples() {
        assert!(is_local_group(&fixtures::cyclic_group(5)));
        assert!(!is_local_group(&fixtures::and_semigroup()));
        assert!(is_local_group(&fixtures::symmetric_group(3)));
    }

    #[test]
    fn classify_table() {
        assert_eq!(classify(&fixtures::bool2()).verdict, Verdict::PComplete);
        for d in [2, 3, 4, 6] {
            assert_eq!(classify(&fixtures::ring_z(d)).verdict, Verdict::PComplete);
        }
        assert_eq!(classify(&fixtures::power_of_cyclic(5)).verdict, Verdict::Det);
        assert_eq!(classify(&fixtures::power_of_cyclic(2)).verdict, Verdict::Det);
        assert_eq!(classify(&fixtures::unit1()).verdict, Verdict::Nl);
        assert_eq!(classify(&fixtures::sink2()).verdict, Verdict::Nl);
        assert_eq!(classify(&fixtures::maxsat4()).verdict, Verdict::Nl);
    }

    #[test]
    fn power_of_and_monoid_p_complete() {
        // local monoid 1·S·1 of ({0,1},∧) is not a group, so P(S) has a B2 copy
        let p = crate::powerset::build_power(&fixtures::and_semigroup(), 8).unwrap();
        let report = classify(&p);
        assert_eq!(report.verdict, Verdict::PComplete);
        assert!(!report.zero_one_free);
    }

    #[test]
    fn solvability_matches_brute_force_on_small_semigroups() {
        for sg in [
            fixtures::cyclic_group(4),
            fixtures::cyclic_group(6),
            fixtures::and_semigroup(),
            fixtures::symmetric_group(3),
            fixtures::meet_semilattice2(),
        ] {
            let via_maximal = is_solvable(&sg).solvable;
            let via_brute = brute_force_subgroups(&sg)
                .into_iter()
                .all(|(e, g)| subgroup_is_solvable(&sg, e, &g));
            assert_eq!(via_maximal, via_brute, "{}", sg.name);
        }
    }

    #[test]
    fn every_brute_force_subgroup_embeds_in_a_maximal_one() {
        for sg in [fixtures::cyclic_group(6), fixtures::symmetric_group(3), fixtures::and_semigroup()] {
            let maximal = maximal_subgroups(&sg);
            for (e, g) in brute_force_subgroups(&sg) {
                let hosts = maximal.iter().filter(|m| {
                    g.iter().all(|x| m.elements.contains(x))
                });
                // identity of the subgroup is an idempotent; its maximal host shares it
                assert!(
                    hosts.clone().any(|m| m.idempotent == e),
                    "subgroup at {:?} not inside its maximal subgroup in {}",
                    e,
                    sg.name
                );
            }
        }
    }
}
