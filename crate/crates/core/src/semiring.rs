//! Finite semirings as a pair of operation tables, with axiom validation,
//! stability data and the closure operations the reduction pipeline needs.

use crate::error::{Error, Result};
use crate::semigroup::{lcm, parse_table_rows, push_table, Elem, FiniteSemigroup, OpTable};
use crate::textfmt::{tokenized_lines, valid_name};

/// A finite semiring: `(R,+)` a commutative semigroup, `(R,·)` a semigroup,
/// with two-sided distributivity. [`FiniteSemiring::new`] validates all
/// axioms exhaustively; use [`validate_semiring`] to obtain a report with
/// witnesses instead of an error.
#[derive(Clone)]
pub struct FiniteSemiring {
    pub name: String,
    element_names: Vec<String>,
    add: OpTable,
    mul: OpTable,
}

/// One violated axiom with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    AddNotCommutative(Elem, Elem),
    AddNotAssociative(Elem, Elem, Elem),
    MulNotAssociative(Elem, Elem, Elem),
    NotLeftDistributive(Elem, Elem, Elem),
    NotRightDistributive(Elem, Elem, Elem),
}

impl AxiomViolation {
    pub fn describe(&self, element_names: &[String]) -> String {
        let n = |e: &Elem| element_names[e.0].clone();
        match self {
            AxiomViolation::AddNotCommutative(a, b) => {
                format!("addition not commutative at ({}, {})", n(a), n(b))
            }
            AxiomViolation::AddNotAssociative(a, b, c) => {
                format!("addition not associative at ({}, {}, {})", n(a), n(b), n(c))
            }
            AxiomViolation::MulNotAssociative(a, b, c) => {
                format!("multiplication not associative at ({}, {}, {})", n(a), n(b), n(c))
            }
            AxiomViolation::NotLeftDistributive(a, b, c) => {
                format!("a(b+c) != ab+ac at ({}, {}, {})", n(a), n(b), n(c))
            }
            AxiomViolation::NotRightDistributive(a, b, c) => {
                format!("(b+c)a != ba+ca at ({}, {}, {})", n(a), n(b), n(c))
            }
        }
    }
}

/// Raw tables before validation.
pub struct RawSemiring {
    pub name: String,
    pub element_names: Vec<String>,
    pub add: OpTable,
    pub mul: OpTable,
}

/// Validation report: `ok()` iff no axiom is violated.
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every semiring axiom exhaustively and reports all violations
/// (each with a witness pair/triple).
pub fn validate_semiring(raw: &RawSemiring) -> ValidationReport {
    let mut violations = Vec::new();
    let add = &raw.add;
    let mul = &raw.mul;
    for (a, b) in add.commutativity_violations(usize::MAX) {
        violations.push(AxiomViolation::AddNotCommutative(a, b));
    }
    for (a, b, c) in add.associativity_violations(usize::MAX) {
        violations.push(AxiomViolation::AddNotAssociative(a, b, c));
    }
    for (a, b, c) in mul.associativity_violations(usize::MAX) {
        violations.push(AxiomViolation::MulNotAssociative(a, b, c));
    }
    for a in add.elems() {
        for b in add.elems() {
            for c in add.elems() {
                let bc = add.apply(b, c);
                if mul.apply(a, bc) != add.apply(mul.apply(a, b), mul.apply(a, c)) {
                    violations.push(AxiomViolation::NotLeftDistributive(a, b, c));
                }
                if mul.apply(bc, a) != add.apply(mul.apply(b, a), mul.apply(c, a)) {
                    violations.push(AxiomViolation::NotRightDistributive(a, b, c));
                }
            }
        }
    }
    ValidationReport { violations }
}

impl std::fmt::Debug for FiniteSemiring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteSemiring({}, {} elements)", self.name, self.size())
    }
}

impl FiniteSemiring {
    pub fn new(
        name: impl Into<String>,
        element_names: Vec<String>,
        add: OpTable,
        mul: OpTable,
    ) -> Result<Self> {
        let raw = RawSemiring {
            name: name.into(),
            element_names,
            add,
            mul,
        };
        Self::from_raw(raw)
    }

    pub fn from_raw(raw: RawSemiring) -> Result<Self> {
        if raw.element_names.is_empty() {
            return Err(Error::Precondition("semiring needs at least one element".into()));
        }
        if raw.element_names.len() != raw.add.size() || raw.element_names.len() != raw.mul.size() {
            return Err(Error::Precondition("table sizes do not match element count".into()));
        }
        for (i, name) in raw.element_names.iter().enumerate() {
            if !valid_name(name) {
                return Err(Error::Precondition(format!("invalid element name '{name}'")));
            }
            if raw.element_names[..i].contains(name) {
                return Err(Error::Precondition(format!("duplicate element name '{name}'")));
            }
        }
        let report = validate_semiring(&raw);
        if !report.ok() {
            let violations = report
                .violations
                .iter()
                .take(5)
                .map(|v| v.describe(&raw.element_names))
                .collect();
            return Err(Error::InvalidAlgebra {
                kind: "semiring",
                name: raw.name,
                violations,
            });
        }
        Ok(FiniteSemiring {
            name: raw.name,
            element_names: raw.element_names,
            add: raw.add,
            mul: raw.mul,
        })
    }

    pub fn size(&self) -> usize {
        self.add.size()
    }

    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        self.add.elems()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add.apply(a, b)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul.apply(a, b)
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

    /// The additive semigroup R₊ as a standalone table.
    pub fn additive(&self) -> FiniteSemigroup {
        FiniteSemigroup::new(
            format!("{}_add", self.name),
            self.element_names.clone(),
            self.add.clone(),
        )
        .expect("additive structure of a valid semiring")
    }

    /// The multiplicative semigroup R_• as a standalone table.
    pub fn multiplicative(&self) -> FiniteSemigroup {
        FiniteSemigroup::new(
            format!("{}_mul", self.name),
            self.element_names.clone(),
            self.mul.clone(),
        )
        .expect("multiplicative structure of a valid semiring")
    }

    /// Multiplicative idempotents E(R).
    pub fn mult_idempotents(&self) -> Vec<Elem> {
        self.elems().filter(|&e| self.mul(e, e) == e).collect()
    }

    /// `n · x` (n-fold sum), n >= 1.
    pub fn nsum(&self, n: usize, x: Elem) -> Elem {
        assert!(n >= 1);
        let mut acc = x;
        for _ in 1..n {
            acc = self.add(acc, x);
        }
        acc
    }

    /// `x^n`, n >= 1.
    pub fn npow(&self, n: usize, x: Elem) -> Elem {
        assert!(n >= 1);
        let mut acc = x;
        for _ in 1..n {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn sum_all(&self, xs: &[Elem]) -> Elem {
        assert!(!xs.is_empty());
        xs[1..].iter().fold(xs[0], |acc, &x| self.add(acc, x))
    }

    pub fn prod_all(&self, xs: &[Elem]) -> Elem {
        assert!(!xs.is_empty());
        xs[1..].iter().fold(xs[0], |acc, &x| self.mul(acc, x))
    }

    /// The semiring induced on a subset closed under both operations.
    pub fn subsemiring(&self, elements: &[Elem], name: impl Into<String>) -> Result<FiniteSemiring> {
        let mut sorted: Vec<Elem> = elements.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::Precondition("subsemiring needs at least one element".into()));
        }
        let position = |e: Elem| -> Result<usize> {
            sorted
                .binary_search(&e)
                .map_err(|_| Error::Precondition(format!("subset not closed at '{}'", self.elem_name(e))))
        };
        let n = sorted.len();
        let mut add_rows = vec![vec![0usize; n]; n];
        let mut mul_rows = vec![vec![0usize; n]; n];
        for (i, &x) in sorted.iter().enumerate() {
            for (j, &y) in sorted.iter().enumerate() {
                add_rows[i][j] = position(self.add(x, y))?;
                mul_rows[i][j] = position(self.mul(x, y))?;
            }
        }
        FiniteSemiring::new(
            name,
            sorted.iter().map(|&e| self.elem_name(e).to_string()).collect(),
            OpTable::from_rows(add_rows)?,
            OpTable::from_rows(mul_rows)?,
        )
    }

    /// Least subset containing `seed` and closed under + and ·.
    pub fn generated_subsemiring(&self, seed: &[Elem]) -> Result<Vec<Elem>> {
        if seed.is_empty() {
            return Err(Error::Precondition("generated subsemiring needs a non-empty seed".into()));
        }
        let mut member = vec![false; self.size()];
        let mut queue: Vec<Elem> = Vec::new();
        for &s in seed {
            if !member[s.0] {
                member[s.0] = true;
                queue.push(s);
            }
        }
        let mut frontier = 0;
        while frontier < queue.len() {
            let x = queue[frontier];
            frontier += 1;
            // combine with everything already present
            for i in 0..queue.len() {
                let y = queue[i];
                for z in [self.add(x, y), self.add(y, x), self.mul(x, y), self.mul(y, x)] {
                    if !member[z.0] {
                        member[z.0] = true;
                        queue.push(z);
                    }
                }
            }
        }
        let mut out: Vec<Elem> = self.elems().filter(|e| member[e.0]).collect();
        out.sort();
        Ok(out)
    }

    /// Is `set` an ideal (closed under +, and under · by arbitrary elements)?
    pub fn is_ideal(&self, set: &[Elem]) -> bool {
        let member = self.member_mask(set);
        for &a in set {
            for &b in set {
                if !member[self.add(a, b).0] {
                    return false;
                }
            }
            for s in self.elems() {
                if !member[self.mul(s, a).0] || !member[self.mul(a, s).0] {
                    return false;
                }
            }
        }
        !set.is_empty()
    }

    pub(crate) fn member_mask(&self, set: &[Elem]) -> Vec<bool> {
        let mut mask = vec![false; self.size()];
        for &e in set {
            mask[e.0] = true;
        }
        mask
    }

    /// The set R^k of k-fold products, plus the minimal m with R^m = R^{m+1}
    /// (at which point the chain R ⊇ R² ⊇ ... has stabilized at R·E(R)·R).
    pub fn power_set_products(&self, k: usize) -> PowerProducts {
        assert!(k >= 1);
        let mut levels: Vec<Vec<Elem>> = vec![self.elems().collect()];
        let minimal_m = loop {
            let last = levels.last().unwrap();
            let mut next_mask = vec![false; self.size()];
            for &x in last {
                for y in self.elems() {
                    next_mask[self.mul(x, y).0] = true;
                }
            }
            let next: Vec<Elem> = self.elems().filter(|e| next_mask[e.0]).collect();
            if next == *last {
                break levels.len();
            }
            levels.push(next);
            if levels.len() > self.size() + 1 {
                unreachable!("product chain must stabilize within |R| steps");
            }
        };
        let set = if k <= levels.len() {
            levels[k - 1].clone()
        } else {
            levels.last().unwrap().clone()
        };
        PowerProducts { set, minimal_m }
    }

    /// R·E(R)·R computed directly from the definition.
    pub fn rer(&self) -> Vec<Elem> {
        let idem = self.mult_idempotents();
        let mut mask = vec![false; self.size()];
        for r in self.elems() {
            for &e in &idem {
                let re = self.mul(r, e);
                for s in self.elems() {
                    mask[self.mul(re, s).0] = true;
                }
            }
        }
        self.elems().filter(|e| mask[e.0]).collect()
    }

    /// Stability data: per-element indices/periods of `m ↦ m·x` and
    /// `m ↦ x^m`, the global omega (n·x additively and x^n multiplicatively
    /// idempotent for all x at n = omega), and the additive (threshold,
    /// period) that make coefficients reducible modulo B(t,p).
    pub fn stability(&self) -> StabilityProfile {
        let add_sg = self.additive();
        let mul_sg = self.multiplicative();
        let mut per_elem = Vec::with_capacity(self.size());
        let mut t = 1usize;
        let mut p = 1usize;
        let mut omega_index = 1usize;
        let mut omega_period = 1usize;
        for x in self.elems() {
            let (ai, ap) = add_sg.power_index_period(x);
            let (mi, mp) = mul_sg.power_index_period(x);
            t = t.max(ai);
            p = lcm(p, ap);
            omega_index = omega_index.max(ai).max(mi);
            omega_period = lcm(omega_period, lcm(ap, mp));
            per_elem.push(ElemStability {
                add_index: ai,
                add_period: ap,
                mul_index: mi,
                mul_period: mp,
            });
        }
        let mut omega = omega_period;
        while omega < omega_index {
            omega += omega_period;
        }
        let profile = StabilityProfile {
            per_elem,
            omega,
            add_threshold: t,
            add_period: p,
        };
        debug_assert!(profile.verify(self));
        profile
    }

    pub fn parse(text: &str) -> Result<FiniteSemiring> {
        FiniteSemiring::from_raw(parse_raw(text)?)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!(
            "semiring {}\nelements {}\nadd\n",
            self.name,
            self.element_names.join(" ")
        );
        push_table(&mut out, &self.add, &self.element_names);
        out.push_str("mul\n");
        push_table(&mut out, &self.mul, &self.element_names);
        out
    }
}

/// Reads the table file without checking any axioms (so a validation
/// report with witnesses can be produced for bad tables).
pub fn parse_raw(text: &str) -> Result<RawSemiring> {
    let mut lines = tokenized_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty semiring file"))?;
    if header.len() != 2 || header[0] != "semiring" {
        return Err(Error::parse(ln, "expected 'semiring <name>'"));
    }
    let name = header[1].to_string();
    let (ln, elems_line) = lines
        .next()
        .ok_or_else(|| Error::parse(ln, "expected 'elements ...'"))?;
    if elems_line[0] != "elements" || elems_line.len() < 2 {
        return Err(Error::parse(ln, "expected 'elements <e1> ... <en>'"));
    }
    let element_names: Vec<String> = elems_line[1..].iter().map(|s| s.to_string()).collect();
    let (ln, kw) = lines.next().ok_or_else(|| Error::parse(ln, "expected 'add'"))?;
    if kw != ["add"] {
        return Err(Error::parse(ln, "expected 'add'"));
    }
    let add_rows = parse_table_rows(&mut lines, &element_names)?;
    let (ln, kw) = lines.next().ok_or_else(|| Error::parse(ln, "expected 'mul'"))?;
    if kw != ["mul"] {
        return Err(Error::parse(ln, "expected 'mul'"));
    }
    let mul_rows = parse_table_rows(&mut lines, &element_names)?;
    Ok(RawSemiring {
        name,
        element_names,
        add: OpTable::from_rows(add_rows)?,
        mul: OpTable::from_rows(mul_rows)?,
    })
}

pub struct PowerProducts {
    /// Elements of R^k.
    pub set: Vec<Elem>,
    /// Minimal m with R^m = R^{m+1} (= R·E(R)·R).
    pub minimal_m: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct ElemStability {
    pub add_index: usize,
    pub add_period: usize,
    pub mul_index: usize,
    pub mul_period: usize,
}

#[derive(Debug, Clone)]
pub struct StabilityProfile {
    pub per_elem: Vec<ElemStability>,
    /// x^omega is multiplicatively idempotent for every x.
    pub omega: usize,
    /// m·x depends only on the B(t,p)-class of m (for m >= 1).
    pub add_threshold: usize,
    pub add_period: usize,
}

impl StabilityProfile {
    /// Direct iteration check of every claimed property.
    pub fn verify(&self, sr: &FiniteSemiring) -> bool {
        let (t, p, omega) = (self.add_threshold, self.add_period, self.omega);
        sr.elems().all(|x| {
            let xo = sr.npow(omega, x);
            let idem_pow = sr.mul(xo, xo) == xo;
            let period = sr.nsum(t + p, x) == sr.nsum(t, x);
            let ox = sr.nsum(omega, x);
            let add_idem = sr.add(ox, ox) == ox;
            let both = sr.nsum(omega, xo);
            let both_idem = sr.add(both, both) == both && sr.mul(both, both) == both;
            idem_pow && period && add_idem && both_idem
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn b2_is_valid() {
        let b2 = fixtures::bool2();
        assert_eq!(b2.size(), 2);
    }

    #[test]
    fn one_element_semiring_is_valid() {
        let one = fixtures::unit1();
        assert_eq!(one.size(), 1);
        let st = one.stability();
        assert_eq!(st.omega, 1);
        assert_eq!(st.add_period, 1);
    }

    #[test]
    fn perturbed_b2_mul_fails_distributivity() {
        // flipping mul(0,1) alone turns ∧ into the second projection, which
        // still satisfies every axiom; xnor multiplication does not
        let add = OpTable::from_rows(vec![vec![0, 1], vec![1, 1]]).unwrap();
        let second_proj = OpTable::from_rows(vec![vec![0, 1], vec![0, 1]]).unwrap();
        let raw = RawSemiring {
            name: "b2proj".into(),
            element_names: vec!["0".into(), "1".into()],
            add: add.clone(),
            mul: second_proj,
        };
        assert!(validate_semiring(&raw).ok());

        let xnor = OpTable::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let raw = RawSemiring {
            name: "b2xnor".into(),
            element_names: vec!["0".into(), "1".into()],
            add,
            mul: xnor,
        };
        let report = validate_semiring(&raw);
        assert!(!report.ok());
        assert!(report.violations.iter().any(|v| matches!(
            v,
            AxiomViolation::NotRightDistributive(..) | AxiomViolation::NotLeftDistributive(..)
        )));
        // concrete witness: 0·(0+1) = 0·1 = 0 but 0·0 + 0·1 = 1 + 0 = 1
        assert!(report
            .violations
            .contains(&AxiomViolation::NotLeftDistributive(Elem(0), Elem(0), Elem(1))));
    }

    #[test]
    fn stability_of_b2_and_z4() {
        let b2 = fixtures::bool2();
        let st = b2.stability();
        assert_eq!((st.omega, st.add_threshold, st.add_period), (1, 1, 1));

        let z4 = fixtures::ring_z(4);
        let st = z4.stability();
        assert_eq!(st.add_period, 4);
        assert_eq!(st.add_threshold, 1);
        // m·1 has period 4
        let one = z4.elem_by_name("1").unwrap();
        assert_eq!(z4.nsum(5, one), one);
        assert!(st.omega.is_multiple_of(2)); // 3^2 = 1 needs an even omega in Z4
    }

    #[test]
    fn coefficient_quotient_compatible() {
        // for all x and m1 ~ m2 in B(t,p): m1·x = m2·x
        for sr in [fixtures::bool2(), fixtures::ring_z(4), fixtures::ring_z(6), fixtures::sink2()] {
            let st = sr.stability();
            let (t, p) = (st.add_threshold, st.add_period);
            for x in sr.elems() {
                for m in 1..(t + 3 * p) {
                    let class_rep = if m < t { m } else { t + (m - t) % p };
                    assert_eq!(sr.nsum(m, x), sr.nsum(class_rep, x));
                }
            }
        }
    }

    #[test]
    fn generated_subsemiring_examples() {
        let z4 = fixtures::ring_z(4);
        let one = z4.elem_by_name("1").unwrap();
        let gen = z4.generated_subsemiring(&[one]).unwrap();
        assert_eq!(gen.len(), 4);

        let b2 = fixtures::bool2();
        let zero = b2.elem_by_name("0").unwrap();
        assert_eq!(b2.generated_subsemiring(&[zero]).unwrap(), vec![zero]);

        let all: Vec<Elem> = b2.elems().collect();
        assert_eq!(b2.generated_subsemiring(&all).unwrap(), all);

        assert!(b2.generated_subsemiring(&[]).is_err());
    }

    #[test]
    fn power_products_examples() {
        let b2 = fixtures::bool2();
        let p1 = b2.power_set_products(1);
        assert_eq!(p1.set.len(), 2);
        let p2 = b2.power_set_products(2);
        assert_eq!(p2.set.len(), 2);
        assert_eq!(p2.minimal_m, 1);

        let sink = fixtures::sink2();
        let p = sink.power_set_products(2);
        assert_eq!(p.minimal_m, 2);
        assert_eq!(p.set.len(), 1);
    }

    #[test]
    fn minimal_m_matches_rer() {
        for sr in [
            fixtures::bool2(),
            fixtures::ring_z(4),
            fixtures::ring_z(6),
            fixtures::sink2(),
            fixtures::maxsat4(),
            fixtures::power_of_cyclic(3),
        ] {
            let p = sr.power_set_products(1);
            let m = p.minimal_m;
            assert!(m <= sr.size());
            let rm = sr.power_set_products(m).set;
            let rm1 = sr.power_set_products(m + 1).set;
            let rer = sr.rer();
            assert_eq!(rm, rm1, "{}", sr.name);
            assert_eq!(rm, rer, "{}", sr.name);
        }
    }

    #[test]
    fn omega_products_idempotent_everywhere() {
        for sr in [fixtures::bool2(), fixtures::ring_z(6), fixtures::maxsat4(), fixtures::power_of_cyclic(3)] {
            let st = sr.stability();
            for x in sr.elems() {
                let xo = sr.npow(st.omega, x);
                assert_eq!(sr.mul(xo, xo), xo);
                let ox = sr.nsum(st.omega, x);
                assert_eq!(sr.add(ox, ox), ox);
                let both = sr.nsum(st.omega, xo);
                assert_eq!(sr.mul(both, both), both);
                assert_eq!(sr.add(both, both), both);
            }
        }
    }

    #[test]
    fn semiring_parse_roundtrip() {
        let sr = fixtures::maxsat4();
        let text = sr.serialize();
        let back = FiniteSemiring::parse(&text).unwrap();
        assert_eq!(back.serialize(), text);
        assert_eq!(back.name, "maxsat4");
    }
}
