//! Exhaustive generation of all semigroups of a given size up to
//! isomorphism, by backtracking over operation tables with early
//! associativity pruning and canonical-form deduplication.

use crate::semigroup::{FiniteSemigroup, OpTable};
use std::collections::HashSet;

/// All semigroups on n elements up to isomorphism. The counts for
/// n = 1, 2, 3, 4 are 1, 5, 24, 188.
pub fn all_semigroups(n: usize) -> Vec<FiniteSemigroup> {
    assert!((1..=4).contains(&n), "enumeration supported for n <= 4");
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut table = vec![usize::MAX; n * n];
    fill(&mut table, 0, n, &mut tables);

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let perms = permutations(n);
    for t in tables {
        let canon = canonical_form(&t, n, &perms);
        if seen.insert(canon) {
            let rows: Vec<Vec<usize>> = (0..n).map(|i| t[i * n..(i + 1) * n].to_vec()).collect();
            let names = (0..n).map(|i| format!("x{i}")).collect();
            let sg = FiniteSemigroup::new(
                format!("sg{n}_{}", out.len()),
                names,
                OpTable::from_rows(rows).unwrap(),
            )
            .expect("enumerated table is associative");
            out.push(sg);
        }
    }
    out
}

fn fill(table: &mut Vec<usize>, pos: usize, n: usize, out: &mut Vec<Vec<usize>>) {
    if pos == n * n {
        out.push(table.clone());
        return;
    }
    for v in 0..n {
        table[pos] = v;
        if partial_associative(table, pos, n) {
            fill(table, pos + 1, n, out);
        }
    }
    table[pos] = usize::MAX;
}

/// Checks all associativity triples that became fully determined by the
/// entry at `pos`.
fn partial_associative(table: &[usize], _pos: usize, n: usize) -> bool {
    let get = |a: usize, b: usize| -> Option<usize> {
        let v = table[a * n + b];
        if v == usize::MAX {
            None
        } else {
            Some(v)
        }
    };
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = get(a, b) else { continue };
            for c in 0..n {
                let Some(bc) = get(b, c) else { continue };
                if let (Some(l), Some(r)) = (get(ab, c), get(a, bc)) {
                    if l != r {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next permutation
        let mut i = n.saturating_sub(1);
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

fn canonical_form(table: &[usize], n: usize, perms: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for perm in perms {
        let mut relabeled = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                relabeled[perm[a] * n + perm[b]] = perm[table[a * n + b]];
            }
        }
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled);
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_the_standard_sequence() {
        assert_eq!(all_semigroups(1).len(), 1);
        assert_eq!(all_semigroups(2).len(), 5);
        assert_eq!(all_semigroups(3).len(), 24);
    }

    #[test]
    fn size_four_count() {
        assert_eq!(all_semigroups(4).len(), 188);
    }
}
