//! Syntactic monoids as transition monoids of minimal automata, the
//! accepting subset F, and the ~F congruence with its quotient semiring.

use crate::classify::is_zero_one_free;
use crate::error::{Error, Result};
use crate::semigroup::{Elem, FiniteSemigroup, OpTable};
use crate::semiring::FiniteSemiring;
use std::collections::HashMap;

use super::dfa::Dfa;

/// A regular language presented algebraically: the syntactic monoid M, the
/// generator morphism h (per letter), and the accepting set F with
/// h⁻¹(F) = L.
#[derive(Debug, Clone)]
pub struct RecognizedLanguage {
    pub monoid: FiniteSemigroup,
    pub identity: Elem,
    pub alphabet: Vec<String>,
    /// h(letter) per alphabet index.
    pub letter_image: Vec<Elem>,
    /// F ⊆ M.
    pub accepting: Vec<bool>,
    /// Shortest generating word per element (letter indices, BFS order).
    pub element_word: Vec<Vec<usize>>,
    /// The minimized automaton the monoid was read from.
    pub dfa: Dfa,
}

impl RecognizedLanguage {
    pub fn monoid_size(&self) -> usize {
        self.monoid.size()
    }

    /// h extended to words multiplicatively.
    pub fn h_word(&self, word: &[usize]) -> Elem {
        word.iter()
            .fold(self.identity, |acc, &a| self.monoid.op(acc, self.letter_image[a]))
    }

    pub fn in_language(&self, word: &[usize]) -> bool {
        self.accepting[self.h_word(word).0]
    }

    pub fn accepting_set(&self) -> Vec<Elem> {
        self.monoid
            .elems()
            .filter(|m| self.accepting[m.0])
            .collect()
    }

    /// A shortest word w with h(w) = m (ties broken by letter order).
    pub fn preimage_word(&self, m: Elem) -> &[usize] {
        &self.element_word[m.0]
    }

    /// The two-sided F-profile separates distinct elements; this is the
    /// syntactic-minimality property of the transition monoid of the
    /// minimal automaton.
    pub fn is_syntactically_minimal(&self) -> bool {
        let m = &self.monoid;
        m.elems().all(|x| {
            m.elems().all(|y| {
                x == y
                    || m.elems().any(|l| {
                        m.elems().any(|r| {
                            let fx = self.accepting[m.op(m.op(l, x), r).0];
                            let fy = self.accepting[m.op(m.op(l, y), r).0];
                            fx != fy
                        })
                    })
            })
        })
    }
}

/// Hard cap on the transition monoid (the closure can approach n^n
/// functions for an n-state automaton, and the multiplication table is
/// quadratic in it).
const MONOID_CAP: usize = 2048;

/// Minimizes the automaton and closes its letter actions under
/// composition; elements are named m0 (identity), m1, … in BFS order.
pub fn syntactic_monoid(d: &Dfa) -> Result<RecognizedLanguage> {
    if d.alphabet.is_empty() {
        return Err(Error::Precondition("syntactic monoid needs a non-empty alphabet".into()));
    }
    let dfa = d.minimize();
    let n_states = dfa.states.len();
    let identity_fn: Vec<usize> = (0..n_states).collect();
    let mut functions: Vec<Vec<usize>> = vec![identity_fn.clone()];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(identity_fn, 0);
    let mut head = 0;
    while head < functions.len() {
        let f = functions[head].clone();
        let w = words[head].clone();
        head += 1;
        for a in 0..dfa.alphabet.len() {
            let g: Vec<usize> = f.iter().map(|&q| dfa.trans[q][a]).collect();
            if !index.contains_key(&g) {
                if functions.len() >= MONOID_CAP {
                    return Err(Error::CapExceeded {
                        what: "transition monoid",
                        size: functions.len() + 1,
                        cap: MONOID_CAP,
                    });
                }
                index.insert(g.clone(), functions.len());
                functions.push(g);
                let mut wa = w.clone();
                wa.push(a);
                words.push(wa);
            }
        }
    }
    let size = functions.len();
    let mut rows = vec![vec![0usize; size]; size];
    for (i, f) in functions.iter().enumerate() {
        for (j, g) in functions.iter().enumerate() {
            // word composition: apply f (first word), then g
            let fg: Vec<usize> = f.iter().map(|&q| g[q]).collect();
            rows[i][j] = index[&fg];
        }
    }
    let names: Vec<String> = (0..size).map(|i| format!("m{i}")).collect();
    let monoid = FiniteSemigroup::new(
        format!("synt_{size}"),
        names,
        OpTable::from_rows(rows)?,
    )?;
    let letter_image: Vec<Elem> = (0..dfa.alphabet.len())
        .map(|a| {
            let g: Vec<usize> = (0..n_states).map(|q| dfa.trans[q][a]).collect();
            Elem(index[&g])
        })
        .collect();
    let accepting: Vec<bool> = functions
        .iter()
        .map(|f| dfa.finals[f[dfa.initial]])
        .collect();
    let lang = RecognizedLanguage {
        monoid,
        identity: Elem(0),
        alphabet: dfa.alphabet.clone(),
        letter_image,
        accepting,
        element_word: words,
        dfa,
    };
    debug_assert!(lang.is_syntactically_minimal());
    Ok(lang)
}

/// The ~F congruence on the power semiring of M: subsets are identified
/// when their two-sided F-intersection profiles agree. Masks are bit sets
/// over the monoid elements; mask k+1 corresponds to element index k of a
/// power semiring built over M.
#[derive(Debug)]
pub struct FCongruence {
    pub monoid_size: usize,
    /// class id per non-empty subset mask (indexed mask-1).
    pub class_of_mask: Vec<usize>,
    /// Union of all members of each class: its largest representative.
    pub largest_rep: Vec<u64>,
    /// The quotient semiring; element i is the class with id i, named by
    /// its largest representative.
    pub quotient: FiniteSemiring,
}

impl FCongruence {
    pub fn class_of(&self, mask: u64) -> usize {
        debug_assert!(mask != 0);
        self.class_of_mask[(mask - 1) as usize]
    }

    pub fn class_count(&self) -> usize {
        self.largest_rep.len()
    }

    /// Representative independence of the quotient operations, checked
    /// over all pairs of subsets.
    pub fn verify_well_defined(&self, r: &RecognizedLanguage) -> bool {
        let n = r.monoid_size();
        let total: u64 = (1u64 << n) - 1;
        for x in 1..=total {
            for y in 1..=total {
                let cu = self.class_of(x | y);
                if cu != self.class_of(self.largest_rep[self.class_of(x)] | self.largest_rep[self.class_of(y)]) {
                    return false;
                }
                let p = mask_product(&r.monoid, x, y);
                let rp = mask_product(
                    &r.monoid,
                    self.largest_rep[self.class_of(x)],
                    self.largest_rep[self.class_of(y)],
                );
                if self.class_of(p) != self.class_of(rp) {
                    return false;
                }
            }
        }
        true
    }
}

/// Setwise product of two monoid subsets given as bit masks.
pub fn mask_product(m: &FiniteSemigroup, x: u64, y: u64) -> u64 {
    let mut out = 0u64;
    let mut xa = x;
    while xa != 0 {
        let a = xa.trailing_zeros() as usize;
        xa &= xa - 1;
        let mut yb = y;
        while yb != 0 {
            let b = yb.trailing_zeros() as usize;
            yb &= yb - 1;
            out |= 1 << m.op(Elem(a), Elem(b)).0;
        }
    }
    out
}

/// Builds the ~F classes and the quotient semiring. The number of subsets
/// is 2^|M|-1, so the monoid size is capped.
pub fn f_congruence(r: &RecognizedLanguage, cap: usize) -> Result<FCongruence> {
    let n = r.monoid_size();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "syntactic monoid for the subset congruence",
            size: n,
            cap,
        });
    }
    let m = &r.monoid;
    // per-element profile: bit (l*n + r) set iff l·a·r ∈ F
    let profile_len = n * n;
    let words = profile_len.div_ceil(64);
    let mut elem_profile: Vec<Vec<u64>> = vec![vec![0u64; words]; n];
    for a in m.elems() {
        for l in m.elems() {
            let la = m.op(l, a);
            for rr in m.elems() {
                if r.accepting[m.op(la, rr).0] {
                    let bit = l.0 * n + rr.0;
                    elem_profile[a.0][bit / 64] |= 1 << (bit % 64);
                }
            }
        }
    }
    let total: u64 = (1u64 << n) - 1;
    let mut profiles: Vec<Vec<u64>> = Vec::with_capacity(total as usize);
    for mask in 1..=total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let p = if rest == 0 {
            elem_profile[low].clone()
        } else {
            let mut p = profiles[(rest - 1) as usize].clone();
            for (w, eb) in p.iter_mut().zip(&elem_profile[low]) {
                *w |= eb;
            }
            p
        };
        profiles.push(p);
    }
    let mut class_index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut class_of_mask: Vec<usize> = Vec::with_capacity(total as usize);
    let mut largest_rep: Vec<u64> = Vec::new();
    for mask in 1..=total {
        let p = &profiles[(mask - 1) as usize];
        let id = match class_index.get(p) {
            Some(&id) => {
                largest_rep[id] |= mask;
                id
            }
            None => {
                let id = largest_rep.len();
                class_index.insert(p.clone(), id);
                largest_rep.push(mask);
                id
            }
        };
        class_of_mask.push(id);
    }
    // the union of a class is itself a member (classes are union-closed)
    for (id, &rep) in largest_rep.iter().enumerate() {
        debug_assert_eq!(class_of_mask[(rep - 1) as usize], id);
    }
    let classes = largest_rep.len();
    let names: Vec<String> = largest_rep
        .iter()
        .map(|&rep| {
            let members: Vec<&str> = (0..n)
                .filter(|i| rep & (1 << i) != 0)
                .map(|i| m.elem_name(Elem(i)))
                .collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    let mut add_rows = vec![vec![0usize; classes]; classes];
    let mut mul_rows = vec![vec![0usize; classes]; classes];
    for i in 0..classes {
        for j in 0..classes {
            let (x, y) = (largest_rep[i], largest_rep[j]);
            add_rows[i][j] = class_of_mask[((x | y) - 1) as usize];
            mul_rows[i][j] = class_of_mask[(mask_product(m, x, y) - 1) as usize];
        }
    }
    let quotient = FiniteSemiring::new(
        format!("q_{}", r.monoid.name),
        names,
        OpTable::from_rows(add_rows)?,
        OpTable::from_rows(mul_rows)?,
    )?;
    let out = FCongruence {
        monoid_size: n,
        class_of_mask,
        largest_rep,
        quotient,
    };
    if n <= 7 {
        debug_assert!(out.verify_well_defined(r));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreenessCheck {
    /// Route (a): ∀ s,t ∈ M, e ∈ E(M): st ∈ F ⟹ set ∈ F.
    pub by_implication: bool,
    /// Route (b): the {0,1}-freeness scan on the quotient semiring, when it
    /// was materializable.
    pub by_quotient: Option<bool>,
}

/// Is the quotient P(M)/~F {0,1}-free? The implication scan needs only M;
/// the quotient route is attempted under the given cap and the two must
/// agree when both are available.
pub fn check_quotient_freeness(r: &RecognizedLanguage, cap: usize) -> FreenessCheck {
    let m = &r.monoid;
    let idem = m.idempotents();
    let mut by_implication = true;
    'outer: for s in m.elems() {
        for t in m.elems() {
            if !r.accepting[m.op(s, t).0] {
                continue;
            }
            for &e in &idem {
                if !r.accepting[m.op(m.op(s, e), t).0] {
                    by_implication = false;
                    break 'outer;
                }
            }
        }
    }
    let by_quotient = f_congruence(r, cap)
        .ok()
        .map(|fc| is_zero_one_free(&fc.quotient));
    if let Some(b) = by_quotient {
        debug_assert_eq!(by_implication, b);
    }
    FreenessCheck {
        by_implication,
        by_quotient,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gen::rng;
    use rand::Rng;

    #[test]
    fn sigma_a_sigma_monoid_is_two_elements() {
        let r = syntactic_monoid(&fixtures::dfa_sigma_a_sigma()).unwrap();
        assert_eq!(r.monoid_size(), 2);
        let f = r.accepting_set();
        assert_eq!(f.len(), 1);
        let e = f[0];
        assert_ne!(e, r.identity);
        assert_eq!(r.monoid.op(e, e), e);
    }

    #[test]
    fn sigma_star_monoid_is_trivial() {
        let r = syntactic_monoid(&fixtures::dfa_sigma_star()).unwrap();
        assert_eq!(r.monoid_size(), 1);
        assert!(r.accepting[r.identity.0]);
    }

    #[test]
    fn even_a_monoid_is_z2() {
        let r = syntactic_monoid(&fixtures::dfa_even_a()).unwrap();
        assert_eq!(r.monoid_size(), 2);
        assert!(r.accepting[r.identity.0]);
        let a = r.letter_image[0];
        assert_eq!(r.monoid.op(a, a), r.identity);
    }

    #[test]
    fn membership_matches_dfa_on_random_words() {
        for d in [
            fixtures::dfa_sigma_a_sigma(),
            fixtures::dfa_even_a(),
            fixtures::dfa_a_then_b(),
            fixtures::dfa_mod3(),
        ] {
            let r = syntactic_monoid(&d).unwrap();
            let md = d.minimize();
            let mut rg = rng(11);
            for _ in 0..1000 {
                let len = rg.gen_range(0..12);
                let w: Vec<usize> = (0..len).map(|_| rg.gen_range(0..d.alphabet.len())).collect();
                assert_eq!(r.in_language(&w), md.accepts(&w));
            }
        }
    }

    #[test]
    fn preimage_words_map_back() {
        let r = syntactic_monoid(&fixtures::dfa_a_then_b()).unwrap();
        for m in r.monoid.elems() {
            let w = r.preimage_word(m).to_vec();
            assert_eq!(r.h_word(&w), m);
        }
    }

    #[test]
    fn f_congruence_of_sigma_a_sigma_has_two_classes() {
        let r = syntactic_monoid(&fixtures::dfa_sigma_a_sigma()).unwrap();
        let fc = f_congruence(&r, 10).unwrap();
        assert_eq!(fc.class_count(), 2);
        assert!(fc.verify_well_defined(&r));
        // {e} and {1,e} share a class; their union is the largest member
        let e = r.accepting_set()[0];
        let me = 1u64 << e.0;
        let both = me | (1 << r.identity.0);
        assert_eq!(fc.class_of(me), fc.class_of(both));
        assert_eq!(fc.largest_rep[fc.class_of(me)], both);
        // quotient is {0,1}-free
        assert!(is_zero_one_free(&fc.quotient));
    }

    #[test]
    fn all_accepting_makes_all_subsets_equivalent() {
        let r = syntactic_monoid(&fixtures::dfa_sigma_star()).unwrap();
        // trivial monoid: single subset, single class
        let fc = f_congruence(&r, 10).unwrap();
        assert_eq!(fc.class_count(), 1);
    }

    #[test]
    fn classes_respect_f_intersection() {
        // l = r = identity instance of the congruence property
        for d in [fixtures::dfa_sigma_a_sigma(), fixtures::dfa_a_then_b(), fixtures::dfa_even_a()] {
            let r = syntactic_monoid(&d).unwrap();
            let fc = f_congruence(&r, 10).unwrap();
            let n = r.monoid_size();
            let total = (1u64 << n) - 1;
            let f_mask: u64 = (0..n).filter(|&i| r.accepting[i]).fold(0, |m, i| m | (1 << i));
            for x in 1..=total {
                for y in (x + 1)..=total {
                    if fc.class_of(x) == fc.class_of(y) {
                        assert_eq!((x & f_mask != 0), (y & f_mask != 0));
                    }
                }
            }
        }
    }

    #[test]
    fn freeness_routes_agree() {
        for d in [
            fixtures::dfa_sigma_a_sigma(),
            fixtures::dfa_even_a(),
            fixtures::dfa_a_then_b(),
            fixtures::dfa_sigma_star(),
            fixtures::dfa_mod3(),
        ] {
            let r = syntactic_monoid(&d).unwrap();
            let check = check_quotient_freeness(&r, 10);
            assert_eq!(Some(check.by_implication), check.by_quotient);
        }
    }

    #[test]
    fn sigma_a_sigma_quotient_free_both_routes() {
        let r = syntactic_monoid(&fixtures::dfa_sigma_a_sigma()).unwrap();
        let check = check_quotient_freeness(&r, 10);
        assert!(check.by_implication);
        assert_eq!(check.by_quotient, Some(true));
    }

    #[test]
    fn group_monoids_satisfy_the_implication_trivially() {
        // words over {a} of even length: the only idempotent of Z2 is the
        // identity, so the implication holds and the quotient stays free
        let r = syntactic_monoid(&fixtures::dfa_even_a_unary()).unwrap();
        let check = check_quotient_freeness(&r, 10);
        assert!(check.by_implication);
        assert_eq!(check.by_quotient, Some(true));
    }

    #[test]
    fn finite_language_fails_implication() {
        // L = {ε}: s = t = 1 has st ∈ F, but the absorbing idempotent z
        // gives s·z·t = z ∉ F
        let r = syntactic_monoid(&fixtures::dfa_epsilon_only()).unwrap();
        let check = check_quotient_freeness(&r, 10);
        assert!(!check.by_implication);
        assert_eq!(check.by_quotient, Some(false));
    }
}
