//! The coefficient semirings B(k,d): the quotient of ℕ identifying i and j
//! when i = j < k, or when both are >= k and d divides i - j. Truncated
//! free-semiring values store their multiplicities as B(t,p)-classes, where
//! (t,p) is the semiring's additive stability data.

/// Parameters of a B(k,d) quotient. Classes are represented by their least
/// member, so a class value `c < k` means the exact count `c`, and
/// `k <= c < k+d` means "any count congruent to c mod d that is >= k".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeffSemiring {
    pub k: usize,
    pub d: usize,
}

/// A coefficient class; `Coeff(0)` is the zero of B(k,d) when k >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coeff(pub usize);

impl CoeffSemiring {
    pub fn new(k: usize, d: usize) -> Self {
        assert!(d >= 1);
        CoeffSemiring { k, d }
    }

    pub fn class_of(&self, n: usize) -> Coeff {
        if n < self.k {
            Coeff(n)
        } else {
            Coeff(self.k + (n - self.k) % self.d)
        }
    }

    /// Least representative of a class (the class value itself).
    pub fn representative(&self, c: Coeff) -> usize {
        debug_assert!(c.0 < self.k + self.d);
        c.0
    }

    pub fn add(&self, a: Coeff, b: Coeff) -> Coeff {
        self.class_of(a.0 + b.0)
    }

    pub fn mul(&self, a: Coeff, b: Coeff) -> Coeff {
        self.class_of(a.0 * b.0)
    }

    pub fn num_classes(&self) -> usize {
        self.k + self.d
    }
}
