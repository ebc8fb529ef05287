//! Gate DAGs over a finite semiring: parsing and serialization, normal-form
//! transformation, and the naive topological evaluator that serves as the
//! value oracle everywhere (including as the stand-in for the R₊ and R_•
//! oracle calls of the phased algorithm).

use crate::error::{Error, Result};
use crate::semigroup::Elem;
use crate::semiring::FiniteSemiring;
use crate::textfmt::{tokenized_lines, valid_name};
use std::collections::HashMap;

/// Index of a gate within its circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GateIdx(pub usize);

/// Right-hand side of a gate. `Copy` and `Term` appear transiently in
/// transformation outputs; [`Circuit::normalize`] removes them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rhs {
    Const(Elem),
    Add(GateIdx, GateIdx),
    Mul(GateIdx, GateIdx),
    Copy(GateIdx),
    Term(Term),
}

/// An arbitrary +/· tree over gate references and constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Const(Elem),
    Gate(GateIdx),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }
    /// Left-to-right sum of one or more terms.
    pub fn sum(mut parts: Vec<Term>) -> Term {
        assert!(!parts.is_empty());
        let first = parts.remove(0);
        parts.into_iter().fold(first, Term::add)
    }
}

#[derive(Debug, Clone)]
pub struct Gate {
    pub id: String,
    pub rhs: Rhs,
}

/// A circuit over a named semiring. Instances are always acyclic with all
/// gate references resolved; a topological order is computed at
/// construction and cached.
#[derive(Debug, Clone)]
pub struct Circuit {
    pub semiring_name: String,
    gates: Vec<Gate>,
    by_id: HashMap<String, GateIdx>,
    output: Option<GateIdx>,
    topo: Vec<GateIdx>,
}

impl Circuit {
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate(&self, g: GateIdx) -> &Gate {
        &self.gates[g.0]
    }

    pub fn rhs(&self, g: GateIdx) -> &Rhs {
        &self.gates[g.0].rhs
    }

    pub fn id(&self, g: GateIdx) -> &str {
        &self.gates[g.0].id
    }

    pub fn output(&self) -> Option<GateIdx> {
        self.output
    }

    pub fn by_id(&self, id: &str) -> Option<GateIdx> {
        self.by_id.get(id).copied()
    }

    /// Cached topological order (inputs before the gates that use them).
    pub fn topo_order(&self) -> &[GateIdx] {
        &self.topo
    }

    pub fn indices(&self) -> impl Iterator<Item = GateIdx> {
        (0..self.gates.len()).map(GateIdx)
    }

    /// Direct input gates referenced by the rhs of `g`.
    pub fn children(&self, g: GateIdx) -> Vec<GateIdx> {
        let mut out = Vec::new();
        match self.rhs(g) {
            Rhs::Const(_) => {}
            Rhs::Add(a, b) | Rhs::Mul(a, b) => {
                out.push(*a);
                out.push(*b);
            }
            Rhs::Copy(a) => out.push(*a),
            Rhs::Term(t) => collect_term_gates(t, &mut out),
        }
        out
    }

    /// True iff no rhs is a `Copy` or `Term`.
    pub fn is_normal_form(&self) -> bool {
        self.gates
            .iter()
            .all(|g| matches!(g.rhs, Rhs::Const(_) | Rhs::Add(..) | Rhs::Mul(..)))
    }

    /// Evaluates every gate along the topological order.
    pub fn eval_naive(&self, sr: &FiniteSemiring) -> EvalResult {
        let mut values: Vec<Option<Elem>> = vec![None; self.gates.len()];
        for &g in &self.topo {
            let v = match self.rhs(g) {
                Rhs::Const(a) => *a,
                Rhs::Add(x, y) => sr.add(values[x.0].unwrap(), values[y.0].unwrap()),
                Rhs::Mul(x, y) => sr.mul(values[x.0].unwrap(), values[y.0].unwrap()),
                Rhs::Copy(x) => values[x.0].unwrap(),
                Rhs::Term(t) => eval_term(t, sr, &values),
            };
            values[g.0] = Some(v);
        }
        let per_gate: Vec<Elem> = values.into_iter().map(Option::unwrap).collect();
        let output = self.output.map(|g| per_gate[g.0]);
        EvalResult { per_gate, output }
    }

    /// Normal form: every rhs becomes Const, Add or Mul. Copy chains
    /// (including bare-gate terms) are resolved to their terminal gate's
    /// rhs by traversing the copy forest; general terms are split using
    /// fresh `$k` gates. All original gate ids survive with their values.
    pub fn normalize(&self) -> Circuit {
        fn copy_target(rhs: &Rhs) -> Option<GateIdx> {
            match rhs {
                Rhs::Copy(x) => Some(*x),
                Rhs::Term(Term::Gate(x)) => Some(*x),
                _ => None,
            }
        }
        let mut b = CircuitBuilder::new(&self.semiring_name);
        // keep original gates in order so ids and indices are stable
        for g in &self.gates {
            b.reserve(&g.id);
        }
        // terminal = first gate along the copy chain with a real rhs
        let mut terminal: Vec<Option<GateIdx>> = vec![None; self.gates.len()];
        for &g in &self.topo {
            terminal[g.0] = Some(match copy_target(self.rhs(g)) {
                Some(x) => terminal[x.0].unwrap(),
                None => g,
            });
        }
        let resolve = |g: GateIdx| terminal[g.0].unwrap();
        for i in 0..self.gates.len() {
            let src = resolve(GateIdx(i));
            let rhs = match self.rhs(src) {
                Rhs::Const(a) => Rhs::Const(*a),
                Rhs::Add(x, y) => Rhs::Add(resolve(*x), resolve(*y)),
                Rhs::Mul(x, y) => Rhs::Mul(resolve(*x), resolve(*y)),
                Rhs::Term(t) => b.flatten_term(t, &resolve),
                Rhs::Copy(_) => unreachable!("terminal gate has a real rhs"),
            };
            b.set_rhs(GateIdx(i), rhs);
        }
        if let Some(out) = self.output {
            b.set_output(resolve(out));
        }
        let c = b.finish().expect("normalization preserves acyclicity");
        debug_assert!(c.is_normal_form());
        c
    }

    /// True iff no gate of the forbidden kind occurs: `Additive` checks
    /// that the circuit is addition-only, `Multiplicative` that it is
    /// multiplication-only.
    pub fn restrict_check(&self, kind: RestrictKind) -> bool {
        self.gates.iter().all(|g| {
            !matches!(
                (&g.rhs, kind),
                (Rhs::Mul(..), RestrictKind::Additive)
                    | (Rhs::Add(..), RestrictKind::Multiplicative)
                    | (Rhs::Term(_), _)
            )
        })
    }

    pub fn parse(text: &str, sr: &FiniteSemiring) -> Result<Circuit> {
        let mut lines = tokenized_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty circuit file"))?;
        if header.len() != 3 || header[0] != "circuit" || header[1] != "over" {
            return Err(Error::parse(ln, "expected 'circuit over <semiring>'"));
        }
        if header[2] != sr.name {
            return Err(Error::parse(
                ln,
                format!("circuit is over '{}' but semiring '{}' was supplied", header[2], sr.name),
            ));
        }
        let mut b = CircuitBuilder::new(&sr.name);
        let mut pending: Vec<(usize, GateIdx, Vec<String>)> = Vec::new();
        let mut output_name: Option<(usize, String)> = None;
        for (ln, toks) in lines {
            match toks[0] {
                "gate" => {
                    if toks.len() < 4 || toks[2] != "=" {
                        return Err(Error::parse(ln, "expected 'gate <id> = <rhs>'"));
                    }
                    let id = toks[1];
                    if !valid_name(id) {
                        return Err(Error::parse(ln, format!("invalid gate id '{id}'")));
                    }
                    let g = b.reserve_checked(id).map_err(|_| Error::DuplicateGate(id.into()))?;
                    pending.push((ln, g, toks[3..].iter().map(|s| s.to_string()).collect()));
                }
                "output" => {
                    if toks.len() != 2 {
                        return Err(Error::parse(ln, "expected 'output <id>'"));
                    }
                    output_name = Some((ln, toks[1].to_string()));
                }
                other => return Err(Error::parse(ln, format!("unknown directive '{other}'"))),
            }
        }
        for (ln, g, rhs_toks) in pending {
            let rhs = parse_rhs(&rhs_toks, ln, sr, &b)?;
            b.set_rhs(g, rhs);
        }
        if let Some((_, name)) = output_name {
            let g = b
                .lookup(&name)
                .ok_or_else(|| Error::UnknownGate(name.clone()))?;
            b.set_output(g);
        }
        b.finish()
    }

    pub fn serialize(&self, sr: &FiniteSemiring) -> String {
        let mut out = format!("circuit over {}\n", self.semiring_name);
        for g in &self.gates {
            let rhs = match &g.rhs {
                Rhs::Const(a) => format!("const {}", sr.elem_name(*a)),
                Rhs::Add(x, y) => format!("add {} {}", self.id(*x), self.id(*y)),
                Rhs::Mul(x, y) => format!("mul {} {}", self.id(*x), self.id(*y)),
                Rhs::Copy(x) => format!("copy {}", self.id(*x)),
                Rhs::Term(_) => panic!("cannot serialize a general term; normalize first"),
            };
            out.push_str(&format!("gate {} = {}\n", g.id, rhs));
        }
        if let Some(o) = self.output {
            out.push_str(&format!("output {}\n", self.id(o)));
        }
        out
    }
}

fn parse_rhs(toks: &[String], ln: usize, sr: &FiniteSemiring, b: &CircuitBuilder) -> Result<Rhs> {
    let gate_ref = |name: &str| -> Result<GateIdx> {
        b.lookup(name).ok_or_else(|| Error::UnknownGate(name.into()))
    };
    match (toks[0].as_str(), toks.len()) {
        ("const", 2) => {
            let e = sr
                .elem_by_name(&toks[1])
                .ok_or_else(|| Error::UnknownElement(toks[1].clone()))?;
            Ok(Rhs::Const(e))
        }
        ("add", 3) => Ok(Rhs::Add(gate_ref(&toks[1])?, gate_ref(&toks[2])?)),
        ("mul", 3) => Ok(Rhs::Mul(gate_ref(&toks[1])?, gate_ref(&toks[2])?)),
        ("copy", 2) => Ok(Rhs::Copy(gate_ref(&toks[1])?)),
        _ => Err(Error::parse(ln, format!("bad right-hand side '{}'", toks.join(" ")))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictKind {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone)]
pub struct EvalResult {
    pub per_gate: Vec<Elem>,
    pub output: Option<Elem>,
}

impl EvalResult {
    pub fn value(&self, g: GateIdx) -> Elem {
        self.per_gate[g.0]
    }
}

fn eval_term(t: &Term, sr: &FiniteSemiring, values: &[Option<Elem>]) -> Elem {
    match t {
        Term::Const(a) => *a,
        Term::Gate(g) => values[g.0].expect("topological order covers term references"),
        Term::Add(x, y) => sr.add(eval_term(x, sr, values), eval_term(y, sr, values)),
        Term::Mul(x, y) => sr.mul(eval_term(x, sr, values), eval_term(y, sr, values)),
    }
}

fn collect_term_gates(t: &Term, out: &mut Vec<GateIdx>) {
    match t {
        Term::Const(_) => {}
        Term::Gate(g) => out.push(*g),
        Term::Add(x, y) | Term::Mul(x, y) => {
            collect_term_gates(x, out);
            collect_term_gates(y, out);
        }
    }
}

/// Incremental circuit construction. Gates may reference gates declared
/// later; `finish` validates resolution and acyclicity (reporting a witness
/// cycle) and computes the topological order.
pub struct CircuitBuilder {
    semiring_name: String,
    gates: Vec<Gate>,
    by_id: HashMap<String, GateIdx>,
    output: Option<GateIdx>,
    fresh_counter: usize,
}

impl CircuitBuilder {
    pub fn new(semiring_name: &str) -> Self {
        CircuitBuilder {
            semiring_name: semiring_name.to_string(),
            gates: Vec::new(),
            by_id: HashMap::new(),
            output: None,
            fresh_counter: 0,
        }
    }

    /// Declares a gate id with a placeholder rhs, panicking on duplicates.
    pub fn reserve(&mut self, id: &str) -> GateIdx {
        self.reserve_checked(id).expect("duplicate gate id")
    }

    pub fn reserve_checked(&mut self, id: &str) -> Result<GateIdx> {
        if self.by_id.contains_key(id) {
            return Err(Error::DuplicateGate(id.to_string()));
        }
        let g = GateIdx(self.gates.len());
        self.gates.push(Gate {
            id: id.to_string(),
            rhs: Rhs::Term(Term::Gate(g)), // placeholder, must be overwritten
        });
        self.by_id.insert(id.to_string(), g);
        Ok(g)
    }

    pub fn lookup(&self, id: &str) -> Option<GateIdx> {
        self.by_id.get(id).copied()
    }

    pub fn set_rhs(&mut self, g: GateIdx, rhs: Rhs) {
        self.gates[g.0].rhs = rhs;
    }

    /// Adds a gate with a fresh reserved `$k` id.
    pub fn fresh(&mut self, rhs: Rhs) -> GateIdx {
        loop {
            let id = format!("${}", self.fresh_counter);
            self.fresh_counter += 1;
            if !self.by_id.contains_key(&id) {
                let g = self.reserve(&id);
                self.set_rhs(g, rhs);
                return g;
            }
        }
    }

    pub fn add_gate(&mut self, id: &str, rhs: Rhs) -> Result<GateIdx> {
        let g = self.reserve_checked(id)?;
        self.set_rhs(g, rhs);
        Ok(g)
    }

    pub fn set_output(&mut self, g: GateIdx) {
        self.output = Some(g);
    }

    /// Splits a term into fresh binary gates; gate references are rewritten
    /// through `resolve`. Returns the rhs for the gate owning the term.
    /// Bare-gate terms must be resolved as copies by the caller.
    pub fn flatten_term(&mut self, t: &Term, resolve: &impl Fn(GateIdx) -> GateIdx) -> Rhs {
        match t {
            Term::Const(a) => Rhs::Const(*a),
            Term::Gate(_) => unreachable!("bare-gate terms are copy chains"),
            Term::Add(x, y) => {
                let gx = self.term_to_gate(x, resolve);
                let gy = self.term_to_gate(y, resolve);
                Rhs::Add(gx, gy)
            }
            Term::Mul(x, y) => {
                let gx = self.term_to_gate(x, resolve);
                let gy = self.term_to_gate(y, resolve);
                Rhs::Mul(gx, gy)
            }
        }
    }

    fn term_to_gate(&mut self, t: &Term, resolve: &impl Fn(GateIdx) -> GateIdx) -> GateIdx {
        match t {
            Term::Gate(g) => resolve(*g),
            Term::Const(a) => self.fresh(Rhs::Const(*a)),
            _ => {
                let rhs = self.flatten_term(t, resolve);
                self.fresh(rhs)
            }
        }
    }

    pub fn finish(self) -> Result<Circuit> {
        // Kahn's algorithm; on failure extract a witness cycle by DFS.
        let n = self.gates.len();
        let mut children: Vec<Vec<GateIdx>> = Vec::with_capacity(n);
        for g in &self.gates {
            let mut out = Vec::new();
            match &g.rhs {
                Rhs::Const(_) => {}
                Rhs::Add(a, b) | Rhs::Mul(a, b) => {
                    out.push(*a);
                    out.push(*b);
                }
                Rhs::Copy(a) => out.push(*a),
                Rhs::Term(t) => collect_term_gates(t, &mut out),
            }
            for c in &out {
                if c.0 >= n {
                    return Err(Error::UnknownGate(format!("#{}", c.0)));
                }
            }
            children.push(out);
        }
        let mut indegree = vec![0usize; n]; // number of unprocessed children
        let mut parents: Vec<Vec<GateIdx>> = vec![Vec::new(); n];
        for (i, kids) in children.iter().enumerate() {
            indegree[i] = kids.len();
            for k in kids {
                parents[k.0].push(GateIdx(i));
            }
        }
        let mut queue: Vec<GateIdx> = (0..n).filter(|&i| indegree[i] == 0).map(GateIdx).collect();
        let mut topo = Vec::with_capacity(n);
        let mut head = 0;
        while head < queue.len() {
            let g = queue[head];
            head += 1;
            topo.push(g);
            for &p in &parents[g.0] {
                indegree[p.0] -= 1;
                if indegree[p.0] == 0 {
                    queue.push(p);
                }
            }
        }
        if topo.len() != n {
            let cycle = find_cycle(&children, &self.gates);
            return Err(Error::Cycle(cycle));
        }
        Ok(Circuit {
            semiring_name: self.semiring_name,
            gates: self.gates,
            by_id: self.by_id,
            output: self.output,
            topo,
        })
    }
}

fn find_cycle(children: &[Vec<GateIdx>], gates: &[Gate]) -> Vec<String> {
    let n = children.len();
    let mut state = vec![0u8; n]; // 0 = unseen, 1 = on stack, 2 = done
    let mut stack: Vec<usize> = Vec::new();

    fn dfs(
        v: usize,
        children: &[Vec<GateIdx>],
        state: &mut [u8],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for c in &children[v] {
            match state[c.0] {
                0 => {
                    if let Some(cyc) = dfs(c.0, children, state, stack) {
                        return Some(cyc);
                    }
                }
                1 => {
                    let pos = stack.iter().position(|&x| x == c.0).unwrap();
                    return Some(stack[pos..].to_vec());
                }
                _ => {}
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }

    for v in 0..n {
        if state[v] == 0 {
            if let Some(cyc) = dfs(v, children, &mut state, &mut stack) {
                return cyc.into_iter().map(|i| gates[i].id.clone()).collect();
            }
        }
    }
    unreachable!("finish() only calls find_cycle when a cycle exists")
}
