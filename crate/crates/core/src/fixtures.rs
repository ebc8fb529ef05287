//! Named reference algebras used across the test suites and resolvable by
//! name from the CLI (`over <name>` in circuit files).

use crate::lang::dfa::Dfa;
use crate::lang::grammar::GrammarWithSlp;
use crate::powerset::build_power;
use crate::semigroup::{FiniteSemigroup, OpTable};
use crate::semiring::FiniteSemiring;

/// The Boolean semiring ({0,1}, ∨, ∧).
pub fn bool2() -> FiniteSemiring {
    let add = OpTable::from_rows(vec![vec![0, 1], vec![1, 1]]).unwrap();
    let mul = OpTable::from_rows(vec![vec![0, 0], vec![0, 1]]).unwrap();
    FiniteSemiring::new("b2", vec!["0".into(), "1".into()], add, mul).unwrap()
}

/// The ring Z_d (d >= 2) as a semiring.
pub fn ring_z(d: usize) -> FiniteSemiring {
    assert!(d >= 2);
    let names: Vec<String> = (0..d).map(|i| i.to_string()).collect();
    let add = OpTable::from_rows((0..d).map(|i| (0..d).map(|j| (i + j) % d).collect()).collect()).unwrap();
    let mul = OpTable::from_rows((0..d).map(|i| (0..d).map(|j| (i * j) % d).collect()).collect()).unwrap();
    FiniteSemiring::new(format!("z{d}"), names, add, mul).unwrap()
}

/// The one-element semiring.
pub fn unit1() -> FiniteSemiring {
    let t = OpTable::from_rows(vec![vec![0]]).unwrap();
    FiniteSemiring::new("unit1", vec!["a".into()], t.clone(), t).unwrap()
}

/// Two elements {a,b}: addition is the join of a < b, every product is a.
/// {0,1}-free, with R² = {a} strictly below R, so the long-product
/// threshold is 2.
pub fn sink2() -> FiniteSemiring {
    let add = OpTable::from_rows(vec![vec![0, 1], vec![1, 1]]).unwrap();
    let mul = OpTable::from_rows(vec![vec![0, 0], vec![0, 0]]).unwrap();
    FiniteSemiring::new("sink2", vec!["a".into(), "b".into()], add, mul).unwrap()
}

/// {1,2,3,4} with addition = max and multiplication = saturating sum.
/// Commutative, {0,1}-free, threshold 4 (R² = {2,3,4}, R³ = {3,4}, R⁴ = {4}).
pub fn maxsat4() -> FiniteSemiring {
    let names: Vec<String> = (1..=4).map(|i| i.to_string()).collect();
    let add = OpTable::from_rows(
        (0..4).map(|i| (0..4).map(|j| i.max(j)).collect()).collect(),
    )
    .unwrap();
    let mul = OpTable::from_rows(
        (0..4)
            .map(|i: usize| (0..4).map(|j: usize| (i + j + 2).min(4) - 1).collect())
            .collect(),
    )
    .unwrap();
    FiniteSemiring::new("maxsat4", names, add, mul).unwrap()
}

/// Direct product sink2 × sink2: a 4-element commutative {0,1}-free fixture
/// with threshold 2.
pub fn sink2sq() -> FiniteSemiring {
    let s = sink2();
    direct_product("sink2sq", &s, &s)
}

/// Direct product of two semirings, elements named `<x>.<y>`.
pub fn direct_product(name: &str, a: &FiniteSemiring, b: &FiniteSemiring) -> FiniteSemiring {
    let n = a.size() * b.size();
    let idx = |i: usize, j: usize| i * b.size() + j;
    let names: Vec<String> = a
        .elems()
        .flat_map(|x| {
            b.elems()
                .map(move |y| (x, y))
        })
        .map(|(x, y)| format!("{}.{}", a.elem_name(x), b.elem_name(y)))
        .collect();
    let mut add_rows = vec![vec![0usize; n]; n];
    let mut mul_rows = vec![vec![0usize; n]; n];
    for x1 in a.elems() {
        for y1 in b.elems() {
            for x2 in a.elems() {
                for y2 in b.elems() {
                    let i = idx(x1.0, y1.0);
                    let j = idx(x2.0, y2.0);
                    add_rows[i][j] = idx(a.add(x1, x2).0, b.add(y1, y2).0);
                    mul_rows[i][j] = idx(a.mul(x1, x2).0, b.mul(y1, y2).0);
                }
            }
        }
    }
    FiniteSemiring::new(
        name,
        names,
        OpTable::from_rows(add_rows).unwrap(),
        OpTable::from_rows(mul_rows).unwrap(),
    )
    .unwrap()
}

/// The cyclic group (Z_d, +) as a semigroup.
pub fn cyclic_group(d: usize) -> FiniteSemigroup {
    assert!(d >= 1);
    let names: Vec<String> = (0..d).map(|i| i.to_string()).collect();
    let op = OpTable::from_rows((0..d).map(|i| (0..d).map(|j| (i + j) % d).collect()).collect()).unwrap();
    FiniteSemigroup::new(format!("z{d}"), names, op).unwrap()
}

/// ({0,1}, ∧).
pub fn and_semigroup() -> FiniteSemigroup {
    let op = OpTable::from_rows(vec![vec![0, 0], vec![0, 1]]).unwrap();
    FiniteSemigroup::new("and2", vec!["0".into(), "1".into()], op).unwrap()
}

/// The two-element meet semilattice as a semigroup (same table as `and`).
pub fn meet_semilattice2() -> FiniteSemigroup {
    let op = OpTable::from_rows(vec![vec![0, 0], vec![0, 1]]).unwrap();
    FiniteSemigroup::new("meet2", vec!["lo".into(), "hi".into()], op).unwrap()
}

pub fn trivial_semigroup() -> FiniteSemigroup {
    let op = OpTable::from_rows(vec![vec![0]]).unwrap();
    FiniteSemigroup::new("triv1", vec!["a".into()], op).unwrap()
}

/// The symmetric group S_n as a semigroup table (permutation composition,
/// "apply left, then right"). S5 has 120 elements.
pub fn symmetric_group(n: usize) -> FiniteSemigroup {
    assert!((1..=5).contains(&n));
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        perms.push(cur.clone());
        if !next_permutation(&mut cur) {
            break;
        }
    }
    let index_of = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
    let names: Vec<String> = perms
        .iter()
        .map(|p| p.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    let rows: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    let composed: Vec<usize> = (0..n).map(|i| q[p[i]]).collect();
                    index_of(&composed)
                })
                .collect()
        })
        .collect();
    FiniteSemigroup::new(format!("s{n}"), names, OpTable::from_rows(rows).unwrap()).unwrap()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Power semiring P(Z_d).
pub fn power_of_cyclic(d: usize) -> FiniteSemiring {
    build_power(&cyclic_group(d), 8).unwrap()
}

/// Σ*aΣ* over {a,b}: words containing an a.
pub fn dfa_sigma_a_sigma() -> Dfa {
    Dfa::parse(
        "dfa\nalphabet a b\nstates q0 q1\ninitial q0\nfinal q1\n\
         trans q0 a q1\ntrans q0 b q0\ntrans q1 a q1\ntrans q1 b q1\n",
    )
    .unwrap()
}

/// Σ* over {a,b}.
pub fn dfa_sigma_star() -> Dfa {
    Dfa::parse("dfa\nalphabet a b\nstates q0\ninitial q0\nfinal q0\ntrans q0 a q0\ntrans q0 b q0\n")
        .unwrap()
}

/// Words over {a,b} with an even number of a's.
pub fn dfa_even_a() -> Dfa {
    Dfa::parse(
        "dfa\nalphabet a b\nstates q0 q1\ninitial q0\nfinal q0\n\
         trans q0 a q1\ntrans q0 b q0\ntrans q1 a q0\ntrans q1 b q1\n",
    )
    .unwrap()
}

/// Words over {a} of even length.
pub fn dfa_even_a_unary() -> Dfa {
    Dfa::parse("dfa\nalphabet a\nstates q0 q1\ninitial q0\nfinal q0\ntrans q0 a q1\ntrans q1 a q0\n")
        .unwrap()
}

/// The language {ε} over {a}; its syntactic monoid has an absorbing
/// idempotent, so the quotient keeps a Boolean subsemiring.
pub fn dfa_epsilon_only() -> Dfa {
    Dfa::parse(
        "dfa\nalphabet a\nstates q0 dead\ninitial q0\nfinal q0\ntrans q0 a dead\ntrans dead a dead\n",
    )
    .unwrap()
}

/// Σ*aΣ*bΣ* over {a,b}: an a followed (not necessarily immediately) by a b.
pub fn dfa_a_then_b() -> Dfa {
    Dfa::parse(
        "dfa\nalphabet a b\nstates q0 q1 q2\ninitial q0\nfinal q2\n\
         trans q0 a q1\ntrans q0 b q0\ntrans q1 a q1\ntrans q1 b q2\ntrans q2 a q2\ntrans q2 b q2\n",
    )
    .unwrap()
}

/// Number of a's divisible by 3 (over {a,b}).
pub fn dfa_mod3() -> Dfa {
    Dfa::parse(
        "dfa\nalphabet a b\nstates q0 q1 q2\ninitial q0\nfinal q0\n\
         trans q0 a q1\ntrans q0 b q0\ntrans q1 a q2\ntrans q1 b q1\ntrans q2 a q0\ntrans q2 b q2\n",
    )
    .unwrap()
}

/// Five states acted on by x = (01234) and y = (01): the letters generate
/// the full symmetric group S5 as the transition monoid.
pub fn dfa_s5_action() -> Dfa {
    Dfa::parse(
        "dfa\nalphabet x y\nstates q0 q1 q2 q3 q4\ninitial q0\nfinal q0\n\
         trans q0 x q1\ntrans q1 x q2\ntrans q2 x q3\ntrans q3 x q4\ntrans q4 x q0\n\
         trans q0 y q1\ntrans q1 y q0\ntrans q2 y q2\ntrans q3 y q3\ntrans q4 y q4\n",
    )
    .unwrap()
}

/// The nested-brackets-flavoured grammar S→SS | aSb | A, A→aA | B,
/// B→bB | b with the uniformizing selection S→A, A→B, B→b.
pub fn grammar_nested() -> GrammarWithSlp {
    GrammarWithSlp::parse(
        "grammar\nstart S\nS -> S S\nS -> a S b\n!S -> A\nA -> a A\n!A -> B\nB -> b B\n!B -> b\n",
    )
    .unwrap()
}

/// A grammar producing only b's: b*b over {a,b}.
pub fn grammar_only_bs() -> GrammarWithSlp {
    GrammarWithSlp::parse("grammar\nstart S\nS -> b S\n!S -> b\n").unwrap()
}

/// Semiring fixtures resolvable by name (used by the CLI for `over <name>`).
pub fn semiring_by_name(name: &str) -> Option<FiniteSemiring> {
    match name {
        "b2" => Some(bool2()),
        "unit1" => Some(unit1()),
        "sink2" => Some(sink2()),
        "sink2sq" => Some(sink2sq()),
        "maxsat4" => Some(maxsat4()),
        _ => {
            if let Some(d) = name.strip_prefix("p_z") {
                let d: usize = d.parse().ok()?;
                if (1..=8).contains(&d) {
                    return Some(power_of_cyclic(d));
                }
                None
            } else if let Some(d) = name.strip_prefix('z') {
                let d: usize = d.parse().ok()?;
                if (2..=16).contains(&d) {
                    return Some(ring_z(d));
                }
                None
            } else {
                None
            }
        }
    }
}
