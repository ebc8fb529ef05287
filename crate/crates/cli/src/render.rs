//! Text rendering of reports: human-readable by default, stable
//! `key: value` lines with `--machine`.

use cep_core::circuit::{Circuit, EvalResult};
use cep_core::classify::{ClassificationReport, Obstruction};
use cep_core::lang::monoid::FreenessCheck;
use cep_core::lang::{PcfgReport, RecognizedLanguage};
use cep_core::phased::PhaseRecord;
use cep_core::powerset::{PowerVerdict, PowerVerdictReport};
use cep_core::rank::{RankStructure, RankViolation};
use cep_core::reduction::TypedConstruction;
use cep_core::semiring::FiniteSemiring;

pub fn classification(sr: &FiniteSemiring, r: &ClassificationReport, machine: bool) -> String {
    let mut out = String::new();
    if machine {
        out += &format!("semiring: {}\n", sr.name);
        out += &format!("size: {}\n", sr.size());
        out += &format!("zero-one-free: {}\n", r.zero_one_free);
        if let Some((z, o)) = r.zero_one_witness {
            out += &format!("witness-zero: {}\n", sr.elem_name(z));
            out += &format!("witness-one: {}\n", sr.elem_name(o));
        }
        out += &format!("multiplicative-solvable: {}\n", r.multiplicative_solvable);
        out += &format!("multiplicative-aperiodic: {}\n", r.multiplicative_aperiodic);
        out += &format!("verdict: {}\n", r.verdict);
        return out;
    }
    out += &format!("semiring {} ({} elements)\n", sr.name, sr.size());
    match (&r.zero_one_witness, &r.obstruction) {
        (Some((z, o)), Some(ob)) => {
            out += &format!(
                "  not {{0,1}}-free: witness pair 0 = {}, 1 = {}\n",
                sr.elem_name(*z),
                sr.elem_name(*o)
            );
            match ob {
                Obstruction::B2 { zero, one } => {
                    out += &format!(
                        "  contains a Boolean subsemiring on {{{}, {}}}\n",
                        sr.elem_name(*zero),
                        sr.elem_name(*one)
                    );
                }
                Obstruction::Zd { d, elements } => {
                    let names: Vec<&str> = elements.iter().map(|&e| sr.elem_name(e)).collect();
                    out += &format!("  contains the ring Z_{d} on {{{}}}\n", names.join(", "));
                }
            }
        }
        _ => out += "  {0,1}-free\n",
    }
    out += &format!(
        "  multiplicative semigroup: {}solvable, {}aperiodic\n",
        if r.multiplicative_solvable { "" } else { "not " },
        if r.multiplicative_aperiodic { "" } else { "not " },
    );
    if let Some(w) = &r.nonsolvable_witness {
        out += &format!(
            "  non-solvable maximal subgroup of size {} at idempotent {}\n",
            w.elements.len(),
            sr.elem_name(w.idempotent)
        );
    }
    out += &format!("verdict: {}\n", r.verdict);
    out
}

pub fn eval_result(sr: &FiniteSemiring, c: &Circuit, res: &EvalResult, machine: bool) -> String {
    let mut out = String::new();
    if machine {
        for g in c.indices() {
            out += &format!("gate {}: {}\n", c.id(g), sr.elem_name(res.value(g)));
        }
        if let Some(v) = res.output {
            out += &format!("output: {}\n", sr.elem_name(v));
        }
    } else if let Some(v) = res.output {
        out += &format!("{}\n", sr.elem_name(v));
    } else {
        for g in c.indices() {
            out += &format!("{} = {}\n", c.id(g), sr.elem_name(res.value(g)));
        }
    }
    out
}

pub fn phase_trace(sr: &FiniteSemiring, trace: &[PhaseRecord]) -> String {
    let mut out = String::new();
    for rec in trace {
        out += &format!("phase {}\n", rec.label);
        out += &format!("  addition-evaluated: {}\n", rec.step1_evaluated.join(" "));
        let inner: Vec<String> = rec
            .inner_choice
            .iter()
            .map(|(g, c)| format!("{g}={c}"))
            .collect();
        out += &format!("  inner: {}\n", inner.join(" "));
        out += &format!("  locally-correct: {}\n", rec.locally_correct.join(" "));
        out += &format!("  downward-closed: {}\n", rec.downward_closed.join(" "));
        let frozen: Vec<String> = rec
            .frozen
            .iter()
            .map(|(g, v)| format!("{g}={}", sr.elem_name(*v)))
            .collect();
        out += &format!("  frozen: {}\n", frozen.join(" "));
    }
    out
}

pub fn typed_sidecar(sr: &FiniteSemiring, tc: &TypedConstruction) -> String {
    let mut out = String::new();
    for g in tc.circuit.indices() {
        let (e, f) = tc.types.of(g);
        out += &format!(
            "type {} = ({},{})\n",
            tc.circuit.id(g),
            sr.elem_name(e),
            sr.elem_name(f)
        );
    }
    let names: Vec<&str> = tc.distinguished.iter().map(|&g| tc.circuit.id(g)).collect();
    out += &format!("distinguished {}\n", names.join(" "));
    let mut alpha: Vec<String> = Vec::new();
    for (a, b) in &tc.affine.pairs {
        alpha.push(sr.elem_name(*a).to_string());
        alpha.push(sr.elem_name(*b).to_string());
    }
    if let Some(c) = tc.affine.constant {
        alpha.push(sr.elem_name(c).to_string());
    }
    out += &format!("alpha: {}\n", alpha.join(" "));
    out
}

pub fn rank_report(
    sr: &FiniteSemiring,
    rank: &RankStructure,
    violation: &Option<RankViolation>,
    machine: bool,
) -> String {
    let mut out = String::new();
    if machine {
        for e in sr.elems() {
            out += &format!("rank {}: {}\n", sr.elem_name(e), rank.rank_of(e));
        }
        out += &format!("max-rank: {}\n", rank.max_rank);
        out += &format!("axioms: {}\n", if violation.is_none() { "ok" } else { "violated" });
        return out;
    }
    for e in sr.elems() {
        out += &format!("rank({}) = {}\n", sr.elem_name(e), rank.rank_of(e));
    }
    out += &format!("max rank: {}\n", rank.max_rank);
    match violation {
        None => out += "rank axioms: ok\n",
        Some(v) => out += &format!("rank axioms violated: {}\n", describe_rank_violation(sr, v)),
    }
    out
}

pub fn describe_rank_violation(sr: &FiniteSemiring, v: &RankViolation) -> String {
    let n = |e: &cep_core::Elem| sr.elem_name(*e);
    match v {
        RankViolation::AddMonotone { a, b } => {
            format!("rank({}) > rank({} + {})", n(a), n(a), n(b))
        }
        RankViolation::MulMonotone { a, b } => {
            format!("monotonicity fails at {} · {}", n(a), n(b))
        }
        RankViolation::Absorption { e, f, a, b } => format!(
            "a = {}, b = {} in the slice of ({}, {}): equal ranks without absorption",
            n(a),
            n(b),
            n(e),
            n(f)
        ),
    }
}

pub fn power_report(rep: &PowerVerdictReport) -> String {
    let v = |p: &PowerVerdict| match p {
        PowerVerdict::Det => "DET",
        PowerVerdict::PComplete => "P-complete",
    };
    let mut out = String::new();
    out += &format!("local group: {}\n", rep.local_group);
    out += &format!("solvable: {}\n", rep.solvable);
    out += &format!("verdict (from the base semigroup): {}\n", v(&rep.direct));
    match &rep.via_classify {
        Some(w) => {
            out += &format!("verdict (classifying the power semiring): {}\n", v(w));
            if let Some(fine) = rep.classifier_verdict {
                out += &format!("classifier verdict: {fine}\n");
            }
            out += &format!("routes agree: {}\n", rep.routes_agree());
        }
        None => out += "power semiring over the cap; direct route only\n",
    }
    out
}

pub fn syntactic_report(
    r: &RecognizedLanguage,
    freeness: &FreenessCheck,
    quotient_classes: Option<usize>,
    machine: bool,
) -> String {
    let mut out = String::new();
    let f: Vec<&str> = r
        .accepting_set()
        .iter()
        .map(|&m| r.monoid.elem_name(m))
        .collect();
    if machine {
        out += &format!("monoid-size: {}\n", r.monoid_size());
        out += &format!("accepting: {}\n", f.join(" "));
        out += &format!("quotient-free: {}\n", freeness.by_implication);
        if let Some(c) = quotient_classes {
            out += &format!("quotient-classes: {c}\n");
        }
        return out;
    }
    out += &format!("syntactic monoid: {} elements\n", r.monoid_size());
    for m in r.monoid.elems() {
        let w = r.preimage_word(m);
        let word: String = if w.is_empty() {
            "ε".into()
        } else {
            w.iter().map(|&a| r.alphabet[a].clone()).collect::<Vec<_>>().join("")
        };
        out += &format!("  {} = [{}]{}\n", r.monoid.elem_name(m), word, if r.accepting[m.0] { "  (accepting)" } else { "" });
    }
    out += &format!("F = {{{}}}\n", f.join(", "));
    out += &format!(
        "quotient {{0,1}}-free (implication scan): {}\n",
        freeness.by_implication
    );
    if let Some(b) = freeness.by_quotient {
        out += &format!("quotient {{0,1}}-free (materialized): {b}\n");
    }
    if let Some(c) = quotient_classes {
        out += &format!("subset congruence classes: {c}\n");
    }
    out
}

pub fn pcfg_report(r: &PcfgReport, machine: bool) -> String {
    let mut out = String::new();
    if machine {
        out += &format!("monoid-size: {}\n", r.monoid_size);
        out += &format!("quotient-free: {}\n", r.quotient_free);
        out += &format!("monoid-solvable: {}\n", r.monoid_solvable);
        if let Some(c) = r.quotient_classes {
            out += &format!("quotient-classes: {c}\n");
        }
        match &r.verdict {
            Some(v) => out += &format!("verdict: {v}\n"),
            None => out += "verdict: unknown\n",
        }
        out += &format!("route: {}\n", r.route);
        return out;
    }
    out += &format!("syntactic monoid: {} elements\n", r.monoid_size);
    out += &format!("quotient {{0,1}}-free: {}\n", r.quotient_free);
    out += &format!("monoid solvable: {}\n", r.monoid_solvable);
    if let Some(c) = r.quotient_classes {
        out += &format!("subset congruence classes: {c}\n");
    }
    match &r.verdict {
        Some(v) => out += &format!("verdict: {v} ({})\n", r.route),
        None => out += &format!("verdict: unknown ({})\n", r.route),
    }
    out
}
