//! Deterministic finite automata with total transition tables, plus Moore
//! minimization (the syntactic monoid is read off the minimal automaton).

use crate::error::{Error, Result};
use crate::textfmt::{tokenized_lines, valid_name};

#[derive(Debug, Clone)]
pub struct Dfa {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: usize,
    pub finals: Vec<bool>,
    /// trans[state][letter]
    pub trans: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn letter_index(&self, letter: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == letter)
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut q = self.initial;
        for &a in word {
            q = self.trans[q][a];
        }
        self.finals[q]
    }

    /// Reachable-trimmed, Moore-minimized automaton with states renumbered
    /// in BFS order from the initial state (canonical for a fixed alphabet
    /// order).
    pub fn minimize(&self) -> Dfa {
        // reachable trim
        let mut reach = vec![false; self.states.len()];
        let mut queue = vec![self.initial];
        reach[self.initial] = true;
        while let Some(q) = queue.pop() {
            for &r in &self.trans[q] {
                if !reach[r] {
                    reach[r] = true;
                    queue.push(r);
                }
            }
        }
        let reachable: Vec<usize> = (0..self.states.len()).filter(|&q| reach[q]).collect();

        // Moore partition refinement on the reachable part
        let mut class: Vec<usize> = (0..self.states.len())
            .map(|q| usize::from(self.finals[q]))
            .collect();
        loop {
            let mut signatures: Vec<(usize, Vec<usize>)> = Vec::new();
            let mut next_class = vec![0usize; self.states.len()];
            let mut changed = false;
            for &q in &reachable {
                let sig = (
                    class[q],
                    self.trans[q].iter().map(|&r| class[r]).collect::<Vec<_>>(),
                );
                let id = match signatures.iter().position(|s| *s == sig) {
                    Some(i) => i,
                    None => {
                        signatures.push(sig);
                        signatures.len() - 1
                    }
                };
                next_class[q] = id;
            }
            for &q in &reachable {
                if next_class[q] != class[q] {
                    changed = true;
                }
            }
            class = next_class;
            if !changed {
                break;
            }
        }

        // canonical BFS renumbering of the classes
        let mut order: Vec<usize> = Vec::new(); // class -> new index, via discovery
        let mut new_of_class = vec![usize::MAX; self.states.len()];
        let mut rep_of_new: Vec<usize> = Vec::new();
        let push = |cls: usize, rep: usize, new_of_class: &mut Vec<usize>, rep_of_new: &mut Vec<usize>, order: &mut Vec<usize>| {
            if new_of_class[cls] == usize::MAX {
                new_of_class[cls] = rep_of_new.len();
                rep_of_new.push(rep);
                order.push(cls);
            }
        };
        push(class[self.initial], self.initial, &mut new_of_class, &mut rep_of_new, &mut order);
        let mut head = 0;
        while head < rep_of_new.len() {
            let rep = rep_of_new[head];
            head += 1;
            for a in 0..self.alphabet.len() {
                let r = self.trans[rep][a];
                push(class[r], r, &mut new_of_class, &mut rep_of_new, &mut order);
            }
        }
        let n = rep_of_new.len();
        let trans: Vec<Vec<usize>> = rep_of_new
            .iter()
            .map(|&rep| {
                (0..self.alphabet.len())
                    .map(|a| new_of_class[class[self.trans[rep][a]]])
                    .collect()
            })
            .collect();
        let finals: Vec<bool> = rep_of_new.iter().map(|&rep| self.finals[rep]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            states: (0..n).map(|i| format!("q{i}")).collect(),
            initial: 0,
            finals,
            trans,
        }
    }

    pub fn parse(text: &str) -> Result<Dfa> {
        let mut lines = tokenized_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(0, "empty dfa file"))?;
        if header != ["dfa"] {
            return Err(Error::parse(ln, "expected 'dfa'"));
        }
        let mut alphabet: Option<Vec<String>> = None;
        let mut states: Option<Vec<String>> = None;
        let mut initial: Option<String> = None;
        let mut finals: Vec<String> = Vec::new();
        let mut trans_lines: Vec<(usize, String, String, String)> = Vec::new();
        for (ln, toks) in lines {
            match toks[0] {
                "alphabet" => {
                    if toks.len() < 2 {
                        return Err(Error::parse(ln, "alphabet needs at least one letter"));
                    }
                    for l in &toks[1..] {
                        if !valid_name(l) || *l == "_" {
                            return Err(Error::parse(ln, format!("invalid letter '{l}'")));
                        }
                    }
                    alphabet = Some(toks[1..].iter().map(|s| s.to_string()).collect());
                }
                "states" => states = Some(toks[1..].iter().map(|s| s.to_string()).collect()),
                "initial" => {
                    if toks.len() != 2 {
                        return Err(Error::parse(ln, "expected 'initial <state>'"));
                    }
                    initial = Some(toks[1].to_string());
                }
                "final" => finals.extend(toks[1..].iter().map(|s| s.to_string())),
                "trans" => {
                    if toks.len() != 4 {
                        return Err(Error::parse(ln, "expected 'trans <from> <letter> <to>'"));
                    }
                    trans_lines.push((ln, toks[1].into(), toks[2].into(), toks[3].into()));
                }
                other => return Err(Error::parse(ln, format!("unknown directive '{other}'"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing alphabet"))?;
        let states = states.ok_or_else(|| Error::parse(0, "missing states"))?;
        if states.is_empty() {
            return Err(Error::parse(0, "at least one state required"));
        }
        let state_idx = |name: &str| -> Result<usize> {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::Precondition(format!("unknown state '{name}'")))
        };
        let initial = state_idx(&initial.ok_or_else(|| Error::parse(0, "missing initial state"))?)?;
        let mut fin = vec![false; states.len()];
        for f in &finals {
            fin[state_idx(f)?] = true;
        }
        let mut trans: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet.len()]; states.len()];
        for (ln, from, letter, to) in trans_lines {
            let f = state_idx(&from)?;
            let a = alphabet
                .iter()
                .position(|l| *l == letter)
                .ok_or_else(|| Error::parse(ln, format!("unknown letter '{letter}'")))?;
            let t = state_idx(&to)?;
            if trans[f][a].is_some() {
                return Err(Error::parse(ln, format!("duplicate transition {from} --{letter}-->")));
            }
            trans[f][a] = Some(t);
        }
        let mut table = Vec::with_capacity(states.len());
        for (q, row) in trans.into_iter().enumerate() {
            let mut complete = Vec::with_capacity(alphabet.len());
            for (a, cell) in row.into_iter().enumerate() {
                complete.push(cell.ok_or_else(|| {
                    Error::Precondition(format!(
                        "missing transition from '{}' on '{}'",
                        states[q], alphabet[a]
                    ))
                })?);
            }
            table.push(complete);
        }
        Ok(Dfa {
            alphabet,
            states,
            initial,
            finals: fin,
            trans: table,
        })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::from("dfa\n");
        out.push_str(&format!("alphabet {}\n", self.alphabet.join(" ")));
        out.push_str(&format!("states {}\n", self.states.join(" ")));
        out.push_str(&format!("initial {}\n", self.states[self.initial]));
        let finals: Vec<&str> = self
            .finals
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(q, _)| self.states[q].as_str())
            .collect();
        if !finals.is_empty() {
            out.push_str(&format!("final {}\n", finals.join(" ")));
        }
        for (q, row) in self.trans.iter().enumerate() {
            for (a, &r) in row.iter().enumerate() {
                out.push_str(&format!(
                    "trans {} {} {}\n",
                    self.states[q], self.alphabet[a], self.states[r]
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parse_and_run() {
        let d = fixtures::dfa_sigma_a_sigma();
        let a = d.letter_index("a").unwrap();
        let b = d.letter_index("b").unwrap();
        assert!(d.accepts(&[b, a, b]));
        assert!(!d.accepts(&[b, b]));
        assert!(!d.accepts(&[]));
    }

    #[test]
    fn serialize_roundtrip() {
        let d = fixtures::dfa_a_then_b();
        let text = d.serialize();
        let back = Dfa::parse(&text).unwrap();
        assert_eq!(back.serialize(), text);
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        // Σ*aΣ* with a redundant duplicated final state
        let d = Dfa::parse(
            "dfa\nalphabet a b\nstates q0 q1 q2\ninitial q0\nfinal q1 q2\n\
             trans q0 a q1\ntrans q0 b q0\ntrans q1 a q2\ntrans q1 b q1\ntrans q2 a q1\ntrans q2 b q2\n",
        )
        .unwrap();
        let m = d.minimize();
        assert_eq!(m.states.len(), 2);
        let a = m.letter_index("a").unwrap();
        let b = m.letter_index("b").unwrap();
        for w in [vec![], vec![b], vec![a], vec![b, a, b], vec![b, b]] {
            assert_eq!(m.accepts(&w), d.accepts(&w));
        }
    }

    #[test]
    fn minimize_drops_unreachable_states() {
        let d = Dfa::parse(
            "dfa\nalphabet a\nstates q0 q1 dead\ninitial q0\nfinal q1\n\
             trans q0 a q1\ntrans q1 a q0\ntrans dead a dead\n",
        )
        .unwrap();
        assert_eq!(d.minimize().states.len(), 2);
    }

    #[test]
    fn rejects_partial_transition_table() {
        let err = Dfa::parse("dfa\nalphabet a b\nstates q0\ninitial q0\ntrans q0 a q0\n").unwrap_err();
        assert!(err.to_string().contains("missing transition"));
    }
}
