//! Budgeted check outcomes. A `Verdict` never claims truth, only "refuted
//! at this witness" or "no refutation within the budget I was given".

use std::fmt;

/// Outcome of a semi-refutable check. `W` is the witness type: a single
/// index for most checks, a `(n, i, j)` triple for Cauchy grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict<W> {
    /// A concrete counterexample was found.
    RefutedAt(W),
    /// No counterexample within the stated budget (number of indices,
    /// samples or approximants examined).
    ConsistentUpTo(u64),
}

impl<W> Verdict<W> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::ConsistentUpTo(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::RefutedAt(_))
    }

    pub fn refutation(&self) -> Option<&W> {
        match self {
            Verdict::RefutedAt(w) => Some(w),
            Verdict::ConsistentUpTo(_) => None,
        }
    }
}

impl fmt::Display for Verdict<u64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::RefutedAt(n) => write!(f, "refuted at {n}"),
            Verdict::ConsistentUpTo(n) => write!(f, "consistent up to {n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accessors() {
        let r: Verdict<u64> = Verdict::RefutedAt(3);
        let c: Verdict<u64> = Verdict::ConsistentUpTo(64);
        assert!(r.is_refuted() && !r.is_consistent());
        assert!(c.is_consistent() && !c.is_refuted());
        assert_eq!(r.refutation(), Some(&3));
        assert_eq!(c.refutation(), None);
    }
}
