//! Rank functions: the preorder a ⪯ b (b reachable from a by additions and
//! one-sided multiplications), its SCC condensation, and the axiom checker
//! for candidate ranks.

use crate::semigroup::Elem;
use crate::semiring::FiniteSemiring;

/// The ⪯ preorder, its condensation and the derived rank map.
#[derive(Debug, Clone)]
pub struct RankStructure {
    /// reaches[a][b] = true iff a ⪯ b.
    pub reaches: Vec<Vec<bool>>,
    pub scc_id: Vec<usize>,
    /// rank[x] for element index x; 1-based, distinct per condensation class.
    pub rank: Vec<usize>,
    pub max_rank: usize,
}

impl RankStructure {
    pub fn rank_of(&self, e: Elem) -> usize {
        self.rank[e.0]
    }

    /// Replaces the rank map with an externally supplied one (a reference
    /// rank such as subset cardinality). The caller is responsible for the
    /// rank axioms; the preorder fields keep describing the canonical
    /// construction, and any axiom-satisfying map is monotone along it.
    pub fn with_rank(mut self, rank: Vec<usize>) -> Self {
        assert_eq!(rank.len(), self.rank.len());
        self.max_rank = rank.iter().copied().max().unwrap_or(1);
        self.rank = rank;
        self
    }
}

/// Builds the rank structure: single-step edges a → a+c, a → ℓa, a → ar,
/// reflexive-transitive closure, Tarjan condensation, and a 1-based
/// topological numbering of the classes. Clauses 1-2 of the rank definition
/// hold for any semiring; clause 3 is guaranteed only for {0,1}-free ones.
pub fn build_rank(sr: &FiniteSemiring) -> RankStructure {
    let n = sr.size();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in sr.elems() {
        let mut targets = vec![false; n];
        for c in sr.elems() {
            targets[sr.add(a, c).0] = true;
            targets[sr.mul(c, a).0] = true;
            targets[sr.mul(a, c).0] = true;
        }
        adj[a.0] = (0..n).filter(|&b| targets[b] && b != a.0).collect();
    }
    // transitive closure by DFS from each node
    let mut reaches = vec![vec![false; n]; n];
    for (s, row) in reaches.iter_mut().enumerate() {
        let mut stack = vec![s];
        row[s] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !row[w] {
                    row[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let sccs = tarjan(&adj);
    let mut scc_id = vec![usize::MAX; n];
    for (cid, comp) in sccs.iter().enumerate() {
        for &v in comp {
            scc_id[v] = cid;
        }
    }
    // Tarjan emits components in reverse topological order of the
    // condensation (edges point from later-emitted to earlier-emitted), so
    // rank = (number of components) - cid gives a monotone numbering.
    let ncomp = sccs.len();
    let rank: Vec<usize> = (0..n).map(|v| ncomp - scc_id[v]).collect();
    let structure = RankStructure {
        reaches,
        scc_id,
        max_rank: ncomp,
        rank,
    };
    debug_assert!(structure_is_monotone(&structure));
    structure
}

fn structure_is_monotone(s: &RankStructure) -> bool {
    let n = s.rank.len();
    (0..n).all(|a| {
        (0..n).all(|b| {
            (!s.reaches[a][b] || s.rank[a] <= s.rank[b])
                && ((s.reaches[a][b] && s.reaches[b][a]) == (s.rank[a] == s.rank[b]))
        })
    })
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: usize,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        comps: Vec<Vec<usize>>,
    }
    fn strongconnect(v: usize, st: &mut State) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &st.adj[v] {
            if st.idx[w].is_none() {
                strongconnect(w, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.idx[w].unwrap());
            }
        }
        if st.low[v] == st.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            st.comps.push(comp);
        }
    }
    let n = adj.len();
    let mut st = State {
        adj,
        index: 0,
        idx: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            strongconnect(v, &mut st);
        }
    }
    st.comps
}

/// A violated rank axiom with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankViolation {
    /// rank(a) > rank(a+b)
    AddMonotone { a: Elem, b: Elem },
    /// rank(a) > rank(ab) or rank(b) > rank(ab)
    MulMonotone { a: Elem, b: Elem },
    /// a,b ∈ eRf, rank(a) = rank(a+b), but a ≠ a+b
    Absorption { e: Elem, f: Elem, a: Elem, b: Elem },
}

/// Exhaustive check of the three rank axioms for a candidate map
/// (element index → positive rank). Returns the first violation found.
pub fn check_rank_axioms(sr: &FiniteSemiring, rank: &[usize]) -> Option<RankViolation> {
    assert_eq!(rank.len(), sr.size());
    assert!(rank.iter().all(|&r| r >= 1), "ranks must be positive");
    for a in sr.elems() {
        for b in sr.elems() {
            if rank[a.0] > rank[sr.add(a, b).0] {
                return Some(RankViolation::AddMonotone { a, b });
            }
            let ab = sr.mul(a, b);
            if rank[a.0] > rank[ab.0] || rank[b.0] > rank[ab.0] {
                return Some(RankViolation::MulMonotone { a, b });
            }
        }
    }
    let idem = sr.mult_idempotents();
    for &e in &idem {
        for &f in &idem {
            // eRf = { e·x·f : x ∈ R }
            let mut in_erf = vec![false; sr.size()];
            for x in sr.elems() {
                in_erf[sr.mul(sr.mul(e, x), f).0] = true;
            }
            let erf: Vec<Elem> = sr.elems().filter(|x| in_erf[x.0]).collect();
            for &a in &erf {
                for &b in &erf {
                    let s = sr.add(a, b);
                    if rank[a.0] == rank[s.0] && s != a {
                        return Some(RankViolation::Absorption { e, f, a, b });
                    }
                }
            }
        }
    }
    None
}

/// Absorption identity from {0,1}-freeness: whenever ef = fe = f, e² = e,
/// f² = f + f = f, we must have e + f = f. Returns a counterexample pair if
/// one exists (possible only for non-{0,1}-free semirings).
pub fn char_pair_violation(sr: &FiniteSemiring) -> Option<(Elem, Elem)> {
    for e in sr.elems() {
        if sr.mul(e, e) != e {
            continue;
        }
        for f in sr.elems() {
            if sr.mul(f, f) == f
                && sr.add(f, f) == f
                && sr.mul(e, f) == f
                && sr.mul(f, e) == f
                && sr.add(e, f) != f
            {
                return Some((e, f));
            }
        }
    }
    None
}
