//! Reals as regular rational approximant sequences.
//!
//! A value here is a total map `n ↦ x(n)` (n ≥ 1) with the regularity
//! bound |x(n) − x(m)| ≤ 1/n + 1/m. Two such sequences denote the same
//! real when |x(n) − y(n)| ≤ 2/n for every n; that equality is only
//! semi-refutable, so the API offers refutation within a budget rather
//! than a decision. Arithmetic reindexes instead of approximating:
//! addition samples both operands at 2n so the bound survives exactly.

use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::rational::{rat_u, Rational};
use crate::verdict::Verdict;

/// A real given by rational approximants with the regularity bound
/// |x(n) − x(m)| ≤ 1/n + 1/m. Cloning shares the underlying map.
#[derive(Clone)]
pub struct BishopReal {
    approx: Arc<dyn Fn(u64) -> Rational + Send + Sync>,
}

/// Outcome of a positivity scan: a certified separation from zero, or
/// budget exhaustion (which asserts nothing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    /// x(m) > 1/m held at this index; the real exceeds x(m) − 1/m > 0.
    PositiveAt(u64),
    /// No index up to the budget certified positivity.
    Undecided(u64),
}

impl BishopReal {
    /// Wrap an approximant map. The caller asserts regularity; the
    /// constructor cannot check it (see `regularity_spot_check`).
    pub fn new(approx: impl Fn(u64) -> Rational + Send + Sync + 'static) -> Self {
        BishopReal { approx: Arc::new(approx) }
    }

    /// The constant sequence; exact rationals embed with zero error.
    pub fn from_rational(q: Rational) -> Self {
        BishopReal::new(move |_| q.clone())
    }

    pub fn zero() -> Self {
        BishopReal::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        BishopReal::from_rational(Rational::one())
    }

    /// n-th approximant, n ≥ 1.
    pub fn approximant(&self, n: u64) -> Rational {
        assert!(n >= 1, "approximant indices are 1-based");
        (self.approx)(n)
    }

    /// Sum: (x+y)(n) = x(2n) + y(2n). Halving the index on each operand
    /// is exactly what keeps the regularity bound for the sum.
    pub fn add(&self, other: &BishopReal) -> BishopReal {
        let x = self.clone();
        let y = other.clone();
        BishopReal::new(move |n| x.approximant(2 * n) + y.approximant(2 * n))
    }

    /// 1 − x, via (1 − x)(n) = 1 − x(2n).
    pub fn one_minus(&self) -> BishopReal {
        let x = self.clone();
        BishopReal::new(move |n| Rational::one() - x.approximant(2 * n))
    }

    /// Scan n = 1..=upto for |x(n) − y(n)| > 2/n. A refutation is a proof
    /// the reals differ; consistency asserts nothing beyond the budget.
    pub fn eq_refute_upto(&self, other: &BishopReal, upto: u64) -> Verdict<u64> {
        for n in 1..=upto {
            let diff = (self.approximant(n) - other.approximant(n)).abs();
            if diff > rat_u(2, n) {
                return Verdict::RefutedAt(n);
            }
        }
        Verdict::ConsistentUpTo(upto)
    }

    /// Scan n = 1..=upto for x(2n) > y(2n) + 1/n, refuting x ≤ y.
    pub fn leq_refute_upto(&self, other: &BishopReal, upto: u64) -> Verdict<u64> {
        for n in 1..=upto {
            if self.approximant(2 * n) > other.approximant(2 * n) + rat_u(1, n) {
                return Verdict::RefutedAt(n);
            }
        }
        Verdict::ConsistentUpTo(upto)
    }

    /// First m ≤ budget with x(m) > 1/m. Such an m certifies
    /// x ≥ x(m) − 1/m > 0 in exact arithmetic.
    pub fn separate_from_zero(&self, budget: u64) -> Separation {
        for m in 1..=budget {
            if self.approximant(m) > rat_u(1, m) {
                return Separation::PositiveAt(m);
            }
        }
        Separation::Undecided(budget)
    }

    /// Check |x(n) − x(m)| ≤ 1/n + 1/m over all pairs from `indices`.
    /// Catches moduli that were asserted but not earned.
    pub fn regularity_spot_check(&self, indices: &[u64]) -> Verdict<(u64, u64)> {
        let mut checked = 0u64;
        for &n in indices {
            let xn = self.approximant(n);
            for &m in indices {
                if m <= n {
                    continue;
                }
                checked += 1;
                let bound = rat_u(1, n) + rat_u(1, m);
                if (xn.clone() - self.approximant(m)).abs() > bound {
                    return Verdict::RefutedAt((n, m));
                }
            }
        }
        Verdict::ConsistentUpTo(checked)
    }
}

impl fmt::Debug for BishopReal {
    // Debug shows a few approximants; the sequence itself is opaque.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BishopReal[x(1)={}, x(4)={}, x(16)={}]",
            self.approximant(1),
            self.approximant(4),
            self.approximant(16)
        )
    }
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Separation::PositiveAt(m) => write!(f, "positive at {m}"),
            Separation::Undecided(b) => write!(f, "undecided within {b}"),
        }
    }
}
