//! Finite semigroups as multiplication tables.

use crate::error::{Error, Result};
use crate::textfmt::{tokenized_lines, valid_name};
use std::fmt;

/// Index of an element in the carrier of a [`FiniteSemigroup`] or
/// [`FiniteSemiring`](crate::semiring::FiniteSemiring). Names exist only at
/// the I/O boundary; all algorithms work on indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub usize);

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A binary operation on `{0, .., n-1}` stored as a full table.
#[derive(Clone, PartialEq, Eq)]
pub struct OpTable {
    n: usize,
    data: Vec<usize>,
}

impl OpTable {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::Precondition(format!(
                    "table row has {} entries, expected {}",
                    row.len(),
                    n
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::Precondition(format!(
                        "table entry {v} out of range (size {n})"
                    )));
                }
                data.push(v);
            }
        }
        Ok(OpTable { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn apply(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.data[a.0 * self.n + b.0])
    }

    /// All triples violating associativity, lexicographically ordered.
    pub fn associativity_violations(&self, limit: usize) -> Vec<(Elem, Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elems() {
            for b in self.elems() {
                let ab = self.apply(a, b);
                for c in self.elems() {
                    if self.apply(ab, c) != self.apply(a, self.apply(b, c)) {
                        out.push((a, b, c));
                        if out.len() >= limit {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn commutativity_violations(&self, limit: usize) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elems() {
            for b in self.elems() {
                if self.apply(a, b) != self.apply(b, a) {
                    out.push((a, b));
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
        out
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        (0..self.n).map(Elem)
    }
}

/// A finite semigroup: named elements plus an associative operation table.
///
/// Construction via [`FiniteSemigroup::new`] validates associativity
/// exhaustively (n³ triples), so every value of this type is a semigroup.
#[derive(Clone)]
pub struct FiniteSemigroup {
    pub name: String,
    element_names: Vec<String>,
    op: OpTable,
}

impl std::fmt::Debug for FiniteSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSemigroup({}, {} elements)", self.name, self.size())
    }
}

impl FiniteSemigroup {
    pub fn new(name: impl Into<String>, element_names: Vec<String>, op: OpTable) -> Result<Self> {
        let name = name.into();
        let sg = FiniteSemigroup {
            name,
            element_names,
            op,
        };
        sg.check_shape()?;
        let bad = sg.op.associativity_violations(1);
        if let Some(&(a, b, c)) = bad.first() {
            return Err(Error::InvalidAlgebra {
                kind: "semigroup",
                name: sg.name.clone(),
                violations: vec![format!(
                    "associativity fails at ({}, {}, {})",
                    sg.elem_name(a),
                    sg.elem_name(b),
                    sg.elem_name(c)
                )],
            });
        }
        Ok(sg)
    }

    fn check_shape(&self) -> Result<()> {
        if self.element_names.is_empty() {
            return Err(Error::Precondition("semigroup needs at least one element".into()));
        }
        if self.element_names.len() != self.op.size() {
            return Err(Error::Precondition(format!(
                "{} element names but table size {}",
                self.element_names.len(),
                self.op.size()
            )));
        }
        for (i, name) in self.element_names.iter().enumerate() {
            if !valid_name(name) {
                return Err(Error::Precondition(format!("invalid element name '{name}'")));
            }
            if self.element_names[..i].contains(name) {
                return Err(Error::Precondition(format!("duplicate element name '{name}'")));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.op.size()
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        self.op.elems()
    }

    pub fn op(&self, a: Elem, b: Elem) -> Elem {
        self.op.apply(a, b)
    }

    pub fn table(&self) -> &OpTable {
        &self.op
    }

    pub fn elem_name(&self, e: Elem) -> &str {
        &self.element_names[e.0]
    }

    pub fn element_names(&self) -> &[String] {
        &self.element_names
    }

    pub fn elem_by_name(&self, name: &str) -> Option<Elem> {
        self.element_names.iter().position(|n| n == name).map(Elem)
    }

    /// `{ e | ee = e }`; non-empty for every finite semigroup.
    pub fn idempotents(&self) -> Vec<Elem> {
        self.elems().filter(|&e| self.op(e, e) == e).collect()
    }

    /// Iterated product `x^k`, k >= 1.
    pub fn power(&self, x: Elem, k: usize) -> Elem {
        assert!(k >= 1);
        let mut acc = x;
        for _ in 1..k {
            acc = self.op(acc, x);
        }
        acc
    }

    /// Smallest `omega >= 1` with `x^omega` idempotent for every `x`.
    pub fn omega(&self) -> usize {
        let mut max_index = 1usize;
        let mut lcm_period = 1usize;
        for x in self.elems() {
            let (index, period) = self.power_index_period(x);
            max_index = max_index.max(index);
            lcm_period = lcm(lcm_period, period);
        }
        // smallest multiple of the lcm that reaches every element's cycle
        let mut omega = lcm_period;
        while omega < max_index {
            omega += lcm_period;
        }
        debug_assert!(self.elems().all(|x| {
            let p = self.power(x, omega);
            self.op(p, p) == p
        }));
        omega
    }

    /// (index, period) of the sequence x, x², x³, ... (1-based index of the
    /// first element that lies on the cycle).
    pub fn power_index_period(&self, x: Elem) -> (usize, usize) {
        let mut seen = vec![usize::MAX; self.size()];
        let mut cur = x;
        let mut step = 1usize;
        loop {
            if seen[cur.0] != usize::MAX {
                let start = seen[cur.0];
                return (start, step - start);
            }
            seen[cur.0] = step;
            cur = self.op(cur, x);
            step += 1;
        }
    }

    /// Identity element, if any.
    pub fn identity(&self) -> Option<Elem> {
        self.elems()
            .find(|&e| self.elems().all(|x| self.op(e, x) == x && self.op(x, e) == x))
    }

    /// The local submonoid eSe for an idempotent e.
    pub fn local_monoid(&self, e: Elem) -> Vec<Elem> {
        debug_assert_eq!(self.op(e, e), e);
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for s in self.elems() {
            let x = self.op(self.op(e, s), e);
            if !seen[x.0] {
                seen[x.0] = true;
                out.push(x);
            }
        }
        out.sort();
        out
    }

    pub fn parse(text: &str) -> Result<FiniteSemigroup> {
        let mut lines = tokenized_lines(text);
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty semigroup file"))?;
        if header.len() != 2 || header[0] != "semigroup" {
            return Err(Error::parse(ln, "expected 'semigroup <name>'"));
        }
        let name = header[1].to_string();
        let (ln, elems_line) = lines
            .next()
            .ok_or_else(|| Error::parse(ln, "expected 'elements ...'"))?;
        if elems_line[0] != "elements" || elems_line.len() < 2 {
            return Err(Error::parse(ln, "expected 'elements <e1> ... <en>'"));
        }
        let element_names: Vec<String> = elems_line[1..].iter().map(|s| s.to_string()).collect();
        let (ln, kw) = lines
            .next()
            .ok_or_else(|| Error::parse(ln, "expected 'op'"))?;
        if kw != ["op"] {
            return Err(Error::parse(ln, "expected 'op'"));
        }
        let rows = parse_table_rows(&mut lines, &element_names)?;
        FiniteSemigroup::new(name, element_names, OpTable::from_rows(rows)?)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("semigroup {}\nelements {}\nop\n", self.name, self.element_names.join(" "));
        push_table(&mut out, &self.op, &self.element_names);
        out
    }
}

pub(crate) fn parse_table_rows<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    element_names: &[String],
) -> Result<Vec<Vec<usize>>> {
    let n = element_names.len();
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, row) = lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("expected {n} table rows")))?;
        if row.len() != n {
            return Err(Error::parse(ln, format!("table row has {} entries, expected {n}", row.len())));
        }
        let mut idx_row = Vec::with_capacity(n);
        for tok in row {
            let idx = element_names
                .iter()
                .position(|e| e == tok)
                .ok_or_else(|| Error::UnknownElement(tok.to_string()))?;
            idx_row.push(idx);
        }
        rows.push(idx_row);
    }
    Ok(rows)
}

pub(crate) fn push_table(out: &mut String, table: &OpTable, names: &[String]) {
    for a in table.elems() {
        let row: Vec<&str> = table
            .elems()
            .map(|b| names[table.apply(a, b).0].as_str())
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
