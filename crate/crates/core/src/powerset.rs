//! Power semirings P(S) = (2^S \ {∅}, ∪, ·) of a finite semigroup.

use crate::classify::{classify, is_local_group, is_solvable, Verdict};
use crate::error::{Error, Result};
use crate::semigroup::{Elem, FiniteSemigroup, OpTable};
use crate::semiring::FiniteSemiring;

/// Builds P(S) with subsets encoded as bitmasks over the element indices of
/// S, ordered by mask value. The empty set is excluded (including it would
/// immediately produce a B₂ copy and destroy {0,1}-freeness).
pub fn build_power(sg: &FiniteSemigroup, cap: usize) -> Result<FiniteSemiring> {
    let n = sg.size();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "power semiring base",
            size: n,
            cap,
        });
    }
    let masks: Vec<u32> = (1u32..(1 << n)).collect();
    let index_of = |mask: u32| (mask - 1) as usize;
    let names: Vec<String> = masks.iter().map(|&m| subset_name(sg, m)).collect();

    let count = masks.len();
    let mut add_rows = vec![vec![0usize; count]; count];
    let mut mul_rows = vec![vec![0usize; count]; count];
    // precompute singleton products lifted to masks: prod_mask[a] for each mask b
    for (i, &ma) in masks.iter().enumerate() {
        for (j, &mb) in masks.iter().enumerate() {
            add_rows[i][j] = index_of(ma | mb);
            let mut prod: u32 = 0;
            let mut x = ma;
            while x != 0 {
                let a = x.trailing_zeros() as usize;
                x &= x - 1;
                let mut y = mb;
                while y != 0 {
                    let b = y.trailing_zeros() as usize;
                    y &= y - 1;
                    prod |= 1 << sg.op(Elem(a), Elem(b)).0;
                }
            }
            mul_rows[i][j] = index_of(prod);
        }
    }
    FiniteSemiring::new(
        format!("p_{}", sg.name),
        names,
        OpTable::from_rows(add_rows)?,
        OpTable::from_rows(mul_rows)?,
    )
}

fn subset_name(sg: &FiniteSemigroup, mask: u32) -> String {
    let mut parts = Vec::new();
    for i in 0..sg.size() {
        if mask & (1 << i) != 0 {
            parts.push(sg.elem_name(Elem(i)));
        }
    }
    format!("{{{}}}", parts.join(","))
}

/// Interprets an element of a power semiring built by [`build_power`] as a
/// subset mask of the base semigroup.
pub fn elem_to_mask(e: Elem) -> u32 {
    (e.0 + 1) as u32
}

pub fn mask_to_elem(mask: u32) -> Elem {
    debug_assert!(mask != 0);
    Elem((mask - 1) as usize)
}

/// Binary verdict for the power-semiring dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerVerdict {
    Det,
    PComplete,
}

#[derive(Debug)]
pub struct PowerVerdictReport {
    pub local_group: bool,
    pub solvable: bool,
    /// Route (a): directly from S.
    pub direct: PowerVerdict,
    /// Route (b): classify(P(S)), when P(S) fits under the cap. NL from the
    /// classifier is coarsened to Det (NL ⊆ DET); both routes must agree.
    pub via_classify: Option<PowerVerdict>,
    pub classifier_verdict: Option<Verdict>,
}

impl PowerVerdictReport {
    pub fn routes_agree(&self) -> bool {
        match self.via_classify {
            Some(v) => v == self.direct,
            None => true,
        }
    }
}

/// Decides the complexity of circuit evaluation over P(S) two ways: from S
/// (local group and solvable ⟺ DET) and, when P(S) is small enough to
/// materialize, by classifying P(S) itself.
pub fn power_verdict(sg: &FiniteSemigroup, cap: usize) -> PowerVerdictReport {
    let local_group = is_local_group(sg);
    let solvable = is_solvable(sg).solvable;
    let direct = if local_group && solvable {
        PowerVerdict::Det
    } else {
        PowerVerdict::PComplete
    };
    let (via_classify, classifier_verdict) = match build_power(sg, cap) {
        Ok(p) => {
            let report = classify(&p);
            let v = match report.verdict {
                Verdict::PComplete => PowerVerdict::PComplete,
                Verdict::Det | Verdict::Nl => PowerVerdict::Det,
            };
            (Some(v), Some(report.verdict))
        }
        Err(_) => (None, None),
    };
    PowerVerdictReport {
        local_group,
        solvable,
        direct,
        via_classify,
        classifier_verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn power_of_trivial_is_unit() {
        let p = build_power(&fixtures::trivial_semigroup(), 8).unwrap();
        assert_eq!(p.size(), 1);
    }

    #[test]
    fn power_of_z5_spot_entries() {
        let p = fixtures::power_of_cyclic(5);
        assert_eq!(p.size(), 31);
        let e = |s: &str| p.elem_by_name(s).unwrap();
        assert_eq!(p.mul(e("{1}"), e("{1}")), e("{2}"));
        assert_eq!(p.add(e("{0,1}"), e("{1,2}")), e("{0,1,2}"));
        assert_eq!(p.mul(e("{0,1}"), e("{0,2}")), e("{0,1,2,3}"));
    }

    #[test]
    fn cap_is_enforced() {
        let s5 = fixtures::symmetric_group(4);
        assert!(matches!(
            build_power(&s5, 8),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn verdict_z5_det_both_routes() {
        let report = power_verdict(&fixtures::cyclic_group(5), 8);
        assert_eq!(report.direct, PowerVerdict::Det);
        assert_eq!(report.via_classify, Some(PowerVerdict::Det));
        assert!(report.routes_agree());
    }

    #[test]
    fn verdict_and_semigroup_p_complete_both_routes() {
        let report = power_verdict(&fixtures::and_semigroup(), 8);
        assert_eq!(report.direct, PowerVerdict::PComplete);
        assert_eq!(report.via_classify, Some(PowerVerdict::PComplete));
    }
}
