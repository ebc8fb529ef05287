//! The formal-language application: syntactic monoids, the accepting-set
//! congruence with its quotient semiring, grammar/automaton intersection
//! via the subset fixpoint, and the complexity verdict for the
//! intersection problem of a fixed regular language.

pub mod dfa;
pub mod grammar;
pub mod intersect;
pub mod monoid;

pub use dfa::Dfa;
pub use grammar::GrammarWithSlp;
pub use intersect::{
    circuit_to_grammar, grammar_to_circuit, intersect, product_construction_nonempty, slp_image,
    IntersectOutcome,
};
pub use monoid::{
    check_quotient_freeness, f_congruence, syntactic_monoid, FCongruence, RecognizedLanguage,
};

use crate::classify::{classify, is_solvable, Verdict};
use crate::error::Result;

/// Verdict report for the intersection problem of the language of a dfa.
#[derive(Debug)]
pub struct PcfgReport {
    pub monoid_size: usize,
    /// Route (a) of the freeness characterization (always computed).
    pub quotient_free: bool,
    pub monoid_solvable: bool,
    pub monoid_is_group: bool,
    /// Present when the quotient semiring fit under the cap.
    pub quotient_classes: Option<usize>,
    pub quotient_verdict: Option<Verdict>,
    /// Final verdict; None when the quotient is too large and none of the
    /// monoid-level criteria settles it.
    pub verdict: Option<Verdict>,
    /// How the verdict was reached.
    pub route: &'static str,
}

/// Classifies the intersection problem of the dfa's language by the
/// quotient semiring when it fits under `cap`, and otherwise by
/// monoid-level criteria: a non-solvable syntactic monoid embeds into the
/// quotient through singleton classes (P-complete), a solvable group makes
/// the quotient a divisor of a solvable power semiring (DET), and the
/// freeness implication is cap-free either way.
pub fn pcfg_verdict(d: &Dfa, cap: usize) -> Result<PcfgReport> {
    let r = syntactic_monoid(d)?;
    let freeness = check_quotient_freeness(&r, cap);
    let quotient_free = freeness.by_implication;
    let solv = is_solvable(&r.monoid).solvable;
    let is_group = r.monoid.size() == {
        // a monoid is a group iff every element is a unit
        let m = &r.monoid;
        m.elems()
            .filter(|&x| {
                m.elems()
                    .any(|y| m.op(x, y) == r.identity && m.op(y, x) == r.identity)
            })
            .count()
    };
    match f_congruence(&r, cap) {
        Ok(fc) => {
            let report = classify(&fc.quotient);
            debug_assert_eq!(report.zero_one_free, quotient_free);
            Ok(PcfgReport {
                monoid_size: r.monoid_size(),
                quotient_free,
                monoid_solvable: solv,
                monoid_is_group: is_group,
                quotient_classes: Some(fc.class_count()),
                quotient_verdict: Some(report.verdict),
                verdict: Some(report.verdict),
                route: "quotient classification",
            })
        }
        Err(_) => {
            let (verdict, route) = if !quotient_free || !solv {
                (Some(Verdict::PComplete), "monoid-level obstruction")
            } else if is_group {
                (Some(Verdict::Det), "solvable group monoid")
            } else {
                (None, "inconclusive without the quotient")
            };
            Ok(PcfgReport {
                monoid_size: r.monoid_size(),
                quotient_free,
                monoid_solvable: solv,
                monoid_is_group: is_group,
                quotient_classes: None,
                quotient_verdict: None,
                verdict,
                route,
            })
        }
    }
}
