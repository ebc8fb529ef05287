//! Context-free grammars with a uniformizing straight-line selection: every
//! nonterminal carries exactly one marked production, and the marked
//! productions form an acyclic grammar deriving one witness word per
//! nonterminal (its productivity certificate).

use crate::error::{Error, Result};
use crate::textfmt::{tokenized_lines, valid_name};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    /// terminal, indexed into `terminals`
    T(usize),
    /// nonterminal, indexed into `nonterminals`
    N(usize),
}

#[derive(Debug, Clone)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Sym>,
    pub marked: bool,
}

#[derive(Debug, Clone)]
pub struct GrammarWithSlp {
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub start: usize,
    pub productions: Vec<Production>,
    /// marked production per nonterminal
    pub marked_of: Vec<usize>,
    /// nonterminals ordered with marked-production references first
    pub marked_topo: Vec<usize>,
}

impl GrammarWithSlp {
    pub fn nonterminal(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|n| n == name)
    }

    pub fn terminal(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t == name)
    }

    /// Parses the line format: `grammar`, `start <S>`, and productions
    /// `LHS -> sym…` with ε written `_` and the uniformizing selection
    /// marked by a leading `!`. Nonterminals are the left-hand sides; every
    /// other rhs token is a terminal.
    pub fn parse(text: &str) -> Result<GrammarWithSlp> {
        let mut lines = tokenized_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty grammar file"))?;
        if header != ["grammar"] {
            return Err(Error::parse(ln, "expected 'grammar'"));
        }
        let mut start_name: Option<String> = None;
        let mut raw: Vec<(usize, bool, String, Vec<String>)> = Vec::new();
        for (ln, toks) in lines {
            if toks[0] == "start" {
                if toks.len() != 2 {
                    return Err(Error::parse(ln, "expected 'start <nonterminal>'"));
                }
                start_name = Some(toks[1].to_string());
                continue;
            }
            let (marked, lhs) = match toks[0].strip_prefix('!') {
                Some(rest) => (true, rest),
                None => (false, toks[0]),
            };
            if !valid_name(lhs) || lhs == "_" {
                return Err(Error::parse(ln, format!("invalid nonterminal '{lhs}'")));
            }
            if toks.len() < 3 || toks[1] != "->" {
                return Err(Error::parse(ln, "expected '<lhs> -> <rhs>'"));
            }
            let rhs: Vec<String> = toks[2..].iter().map(|s| s.to_string()).collect();
            raw.push((ln, marked, lhs.to_string(), rhs));
        }
        let mut nonterminals: Vec<String> = Vec::new();
        for (_, _, lhs, _) in &raw {
            if !nonterminals.contains(lhs) {
                nonterminals.push(lhs.clone());
            }
        }
        let start_name = start_name.ok_or_else(|| Error::parse(0, "missing start symbol"))?;
        let start = nonterminals
            .iter()
            .position(|n| *n == start_name)
            .ok_or_else(|| Error::Precondition(format!("start symbol '{start_name}' has no production")))?;
        let mut terminals: Vec<String> = Vec::new();
        let mut productions: Vec<Production> = Vec::new();
        for (ln, marked, lhs, rhs_toks) in raw {
            let lhs = nonterminals.iter().position(|n| *n == lhs).unwrap();
            let mut rhs = Vec::new();
            if rhs_toks != ["_"] {
                for tok in &rhs_toks {
                    if tok == "_" {
                        return Err(Error::parse(ln, "'_' stands alone for the empty word"));
                    }
                    if let Some(n) = nonterminals.iter().position(|n| n == tok) {
                        rhs.push(Sym::N(n));
                    } else {
                        if !valid_name(tok) {
                            return Err(Error::parse(ln, format!("invalid symbol '{tok}'")));
                        }
                        let t = match terminals.iter().position(|t| t == tok) {
                            Some(t) => t,
                            None => {
                                terminals.push(tok.to_string());
                                terminals.len() - 1
                            }
                        };
                        rhs.push(Sym::T(t));
                    }
                }
            }
            productions.push(Production { lhs, rhs, marked });
        }
        // exactly one mark per nonterminal
        let mut marked_of = vec![usize::MAX; nonterminals.len()];
        for (i, p) in productions.iter().enumerate() {
            if p.marked {
                if marked_of[p.lhs] != usize::MAX {
                    return Err(Error::Precondition(format!(
                        "nonterminal '{}' has more than one marked production",
                        nonterminals[p.lhs]
                    )));
                }
                marked_of[p.lhs] = i;
            }
        }
        for (n, &m) in marked_of.iter().enumerate() {
            if m == usize::MAX {
                return Err(Error::Precondition(format!(
                    "nonterminal '{}' has no marked production",
                    nonterminals[n]
                )));
            }
        }
        // acyclicity of the marked subgrammar, with a witness cycle
        let n = nonterminals.len();
        let mut state = vec![0u8; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut topo: Vec<usize> = Vec::new();
        fn dfs(
            v: usize,
            productions: &[Production],
            marked_of: &[usize],
            state: &mut [u8],
            stack: &mut Vec<usize>,
            topo: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            state[v] = 1;
            stack.push(v);
            for sym in &productions[marked_of[v]].rhs {
                if let Sym::N(w) = sym {
                    match state[*w] {
                        0 => {
                            if let Some(c) = dfs(*w, productions, marked_of, state, stack, topo) {
                                return Some(c);
                            }
                        }
                        1 => {
                            let pos = stack.iter().position(|&x| x == *w).unwrap();
                            return Some(stack[pos..].to_vec());
                        }
                        _ => {}
                    }
                }
            }
            stack.pop();
            state[v] = 2;
            topo.push(v);
            None
        }
        for v in 0..n {
            if state[v] == 0 {
                if let Some(cycle) = dfs(v, &productions, &marked_of, &mut state, &mut stack, &mut topo) {
                    let names = cycle.into_iter().map(|i| nonterminals[i].clone()).collect();
                    return Err(Error::Cycle(names));
                }
            }
        }
        Ok(GrammarWithSlp {
            nonterminals,
            terminals,
            start,
            productions,
            marked_of,
            marked_topo: topo,
        })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::from("grammar\n");
        out.push_str(&format!("start {}\n", self.nonterminals[self.start]));
        for p in &self.productions {
            let mark = if p.marked { "!" } else { "" };
            let rhs = if p.rhs.is_empty() {
                "_".to_string()
            } else {
                p.rhs
                    .iter()
                    .map(|s| match s {
                        Sym::T(t) => self.terminals[*t].clone(),
                        Sym::N(n) => self.nonterminals[*n].clone(),
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            out.push_str(&format!("{}{} -> {}\n", mark, self.nonterminals[p.lhs], rhs));
        }
        out
    }

    /// The single word the marked subgrammar derives from a nonterminal.
    /// May be exponentially long; capped to guard against blowup.
    pub fn slp_word(&self, nt: usize, max_len: usize) -> Option<Vec<usize>> {
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.nonterminals.len()];
        for &v in &self.marked_topo {
            let mut w: Vec<usize> = Vec::new();
            for sym in &self.productions[self.marked_of[v]].rhs {
                match sym {
                    Sym::T(t) => w.push(*t),
                    Sym::N(n) => {
                        w.extend_from_slice(words[*n].as_ref()?);
                    }
                }
                if w.len() > max_len {
                    return None;
                }
            }
            words[v] = Some(w);
        }
        words[nt].take()
    }

    /// All words of length <= max_len derivable from each nonterminal
    /// (terminal indices), by bounded fixpoint iteration.
    pub fn words_up_to(&self, max_len: usize) -> Vec<BTreeSet<Vec<usize>>> {
        let n = self.nonterminals.len();
        let mut words: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); n];
        loop {
            let mut changed = false;
            for p in &self.productions {
                let mut partial: BTreeSet<Vec<usize>> = BTreeSet::new();
                partial.insert(Vec::new());
                for sym in &p.rhs {
                    let mut next = BTreeSet::new();
                    match sym {
                        Sym::T(t) => {
                            for w in &partial {
                                if w.len() < max_len {
                                    let mut v = w.clone();
                                    v.push(*t);
                                    next.insert(v);
                                }
                            }
                        }
                        Sym::N(b) => {
                            for w in &partial {
                                for u in &words[*b] {
                                    if w.len() + u.len() <= max_len {
                                        let mut v = w.clone();
                                        v.extend_from_slice(u);
                                        next.insert(v);
                                    }
                                }
                            }
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                for w in partial {
                    changed |= words[p.lhs].insert(w);
                }
            }
            if !changed {
                return words;
            }
        }
    }

    /// The emptiness-to-intersection padding: terminals are replaced by a
    /// fresh nonterminal deriving all of Σ*, and a fresh start appends one
    /// more copy of it (so even an ε-only language pads out to Σ*). The
    /// marked selection stays acyclic because the fresh nonterminal's mark
    /// is the ε-rule.
    pub fn padding_gadget(&self) -> GrammarWithSlp {
        let mut pad_name = "X".to_string();
        while self.nonterminals.contains(&pad_name) {
            pad_name.push('\'');
        }
        let mut start_name = "S".to_string();
        while self.nonterminals.contains(&start_name) || start_name == pad_name {
            start_name.push('\'');
        }
        let mut text = String::from("grammar\n");
        text.push_str(&format!("start {start_name}\n"));
        text.push_str(&format!(
            "!{start_name} -> {} {pad_name}\n",
            self.nonterminals[self.start]
        ));
        for p in &self.productions {
            let mark = if p.marked { "!" } else { "" };
            let rhs = if p.rhs.is_empty() {
                "_".to_string()
            } else {
                p.rhs
                    .iter()
                    .map(|s| match s {
                        Sym::T(_) => pad_name.clone(),
                        Sym::N(n) => self.nonterminals[*n].clone(),
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            text.push_str(&format!("{}{} -> {}\n", mark, self.nonterminals[p.lhs], rhs));
        }
        text.push_str(&format!("!{pad_name} -> _\n"));
        for t in &self.terminals {
            text.push_str(&format!("{pad_name} -> {t} {pad_name}\n"));
        }
        GrammarWithSlp::parse(&text).expect("padded grammar is valid")
    }
}
