//! What "does a success ever occur" costs, by fragment.
//!
//! For eventually periodic events the question is decidable outright
//! (scan one preamble plus one period), and so is the density-level
//! variant "is the limiting frequency zero". For arbitrary streams only
//! budgeted search is on offer: a found witness is definitive, an
//! exhausted budget asserts nothing. In between sits
//! [`witness_from_separation`]: once a probability approximant certifies
//! separation from zero, a success witness must hide in an explicitly
//! bounded prefix, and the scan is guaranteed to find it.
//!
//! [`oscillator`] is the stream that keeps all of this honest: blocks of
//! 2^k successes then 2^k failures, so the running frequency forever
//! swings between 1/2 (exactly, at the end of every failure block) and
//! values approaching 2/3 (at the end of every success block). It has no
//! settling rate at all, and [`oscillation_report`] documents the
//! persistent gap that proves it.

use std::fmt;

use thiserror::Error;

use crate::actual::ActualEvent;
use crate::event::PotentialEvent;
use crate::rational::{rat_u, Rational};
use crate::real::Separation;
use crate::regular::RegularEvent;

/// Answer to a success-existence question, at whichever level it was
/// asked. Total deciders return the first three forms only; budgeted
/// searches may return `Undecided`, which asserts nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpoVerdict {
    /// No trial ever succeeds.
    AllZero,
    /// Trial n succeeds (first such index).
    WitnessAt(u64),
    /// The limiting frequency is zero (successes may still occur).
    ProbZero,
    /// The limiting frequency is this positive rational.
    ProbPositive(Rational),
    /// Budget exhausted without an answer.
    Undecided(u64),
}

impl fmt::Display for LpoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpoVerdict::AllZero => write!(f, "AllZero"),
            LpoVerdict::WitnessAt(n) => write!(f, "WitnessAt({n})"),
            LpoVerdict::ProbZero => write!(f, "ProbZero"),
            LpoVerdict::ProbPositive(q) => write!(f, "ProbPositive({q})"),
            LpoVerdict::Undecided(b) => write!(f, "Undecided({b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmniscienceError {
    /// A separation certificate promised a success within the scanned
    /// prefix and none was there: the claimed settling rate was a lie
    /// (only reachable with an impure or dishonest modulus).
    #[error(
        "separation at approximant {separation_index} promises a success within \
         the first {scanned} trials, but none exists"
    )]
    InternalContradiction { separation_index: u64, scanned: u64 },
}

/// Decide success-existence for an eventually periodic event. Total:
/// one preamble plus one full period covers every trial that can differ.
pub fn lpo_regular(r: &RegularEvent) -> LpoVerdict {
    let horizon = (r.preamble().len() + r.period().len()) as u64;
    for i in 1..=horizon {
        if r.eval(i) == 1 {
            return LpoVerdict::WitnessAt(i);
        }
    }
    LpoVerdict::AllZero
}

/// Decide whether the limiting frequency is zero, at the density level.
/// Total for the periodic fragment via the closed form.
pub fn density_lpo_regular(r: &RegularEvent) -> LpoVerdict {
    use num::Zero;
    let d = r.density();
    if d.is_zero() {
        LpoVerdict::ProbZero
    } else {
        LpoVerdict::ProbPositive(d)
    }
}

/// Budgeted witness scan for arbitrary events. Never answers `AllZero`:
/// absence within a budget is not absence.
pub fn witness_search(e: &PotentialEvent, budget: u64) -> LpoVerdict {
    for i in 1..=budget {
        if e.eval(i) == 1 {
            return LpoVerdict::WitnessAt(i);
        }
    }
    LpoVerdict::Undecided(budget)
}

/// Turn a positivity certificate into a success witness. When the
/// probability approximant separates from zero at index m, the frequency
/// at γ(m) is strictly positive, so a success must occur within the
/// first γ(m) trials; scanning that prefix is exhaustive.
pub fn witness_from_separation(
    a: &ActualEvent,
    budget: u64,
) -> Result<LpoVerdict, OmniscienceError> {
    match a.probability().separate_from_zero(budget) {
        Separation::Undecided(b) => Ok(LpoVerdict::Undecided(b)),
        Separation::PositiveAt(m) => {
            let scanned = a.modulus().eval(m);
            for i in 1..=scanned {
                if a.event().eval(i) == 1 {
                    return Ok(LpoVerdict::WitnessAt(i));
                }
            }
            Err(OmniscienceError::InternalContradiction { separation_index: m, scanned })
        }
    }
}

/// Locate trial n inside the block structure: returns (k, offset) where
/// k indexes the success/failure block pair and offset is 1-based within
/// the pair. Pair k holds 2^k successes then 2^k failures and starts
/// after 2(2^k − 1) earlier trials.
fn block_position(n: u64) -> (u32, u64) {
    debug_assert!(n >= 1);
    let mut k = 0u32;
    while 2 * ((1u128 << (k + 1)) - 1) < n as u128 {
        k += 1;
    }
    let before = 2 * ((1u64 << k) - 1);
    (k, n - before)
}

/// The stream 1,0,1,1,0,0,1,1,1,1,0,0,0,0,…: success blocks and failure
/// blocks of doubling length. Its running frequency is exactly 1/2 at
/// the end of every failure block and (2^{k+1}−1)/(3·2^k−2) → 2/3 at the
/// end of success block k, so it has no settling rate. Prefix counts are
/// closed-form (O(log n)).
pub fn oscillator() -> PotentialEvent {
    PotentialEvent::from_fn_with_count(
        |n| {
            let (k, offset) = block_position(n);
            u8::from(offset <= 1 << k)
        },
        |n| {
            let (k, offset) = block_position(n);
            ((1u64 << k) - 1) + offset.min(1 << k)
        },
    )
}

/// Which way the frequency was moving when a run of equal bits ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// A run of successes ended here: a local crest of the frequency.
    SuccessRunEnd,
    /// A run of failures ended here: a local trough.
    FailureRunEnd,
}

/// One run boundary: trial index i with e(i) ≠ e(i+1), the exact
/// frequency there, and the min/max of the frequency seen so far.
#[derive(Debug, Clone)]
pub struct BoundaryRow {
    pub index: u64,
    pub frequency: Rational,
    pub kind: BoundaryKind,
    pub running_min: Rational,
    pub running_max: Rational,
}

/// Evidence about how (or whether) a stream's frequency settles over an
/// observed range.
#[derive(Debug, Clone)]
pub struct OscillationReport {
    /// Trials examined: 1..=scanned.
    pub scanned: u64,
    /// All run boundaries in scan order.
    pub boundaries: Vec<BoundaryRow>,
    /// Start of the persistence window (first boundary at or after the
    /// midpoint, or the midpoint itself when no boundary follows it).
    pub tail_start: u64,
    /// Exact frequency extremes over [tail_start, scanned].
    pub tail_min: Rational,
    pub tail_max: Rational,
    /// tail_max − tail_min: a swing that still occurs in the late half
    /// of the observation window.
    pub persistent_gap: Rational,
    /// Least n with persistent_gap > 1/n: no settling-rate claim can
    /// survive at that precision. None when the gap is zero.
    pub gap_exceeds_inverse: Option<u64>,
}

/// Scan the first `upto` trials and report run boundaries, running
/// extremes and the persistent late-window gap, all in exact arithmetic.
///
/// Within a run of equal bits the frequency moves monotonically, so the
/// extremes over any window occur at run boundaries or window endpoints;
/// the report exploits that rather than storing every frequency.
pub fn oscillation_report(e: &PotentialEvent, upto: u64) -> OscillationReport {
    assert!(upto >= 1, "report needs at least one trial");

    // running extremes tracked as exact count/index pairs
    let cmp = |a: (u64, u64), b: (u64, u64)| (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128));

    let mut count = 0u64;
    let mut min = (0u64, 0u64); // (numerator count, index); index 0 = unset
    let mut max = (0u64, 0u64);
    let mut boundaries = Vec::new();

    for i in 1..=upto {
        count += u64::from(e.eval(i));
        let here = (count, i);
        if min.1 == 0 || cmp(here, min).is_lt() {
            min = here;
        }
        if max.1 == 0 || cmp(here, max).is_gt() {
            max = here;
        }
        if i < upto && e.eval(i) != e.eval(i + 1) {
            boundaries.push(BoundaryRow {
                index: i,
                frequency: rat_u(count, i),
                kind: if e.eval(i) == 1 {
                    BoundaryKind::SuccessRunEnd
                } else {
                    BoundaryKind::FailureRunEnd
                },
                running_min: rat_u(min.0, min.1),
                running_max: rat_u(max.0, max.1),
            });
        }
    }

    let half = (upto / 2).max(1);
    let tail_start = boundaries
        .iter()
        .map(|row| row.index)
        .find(|&i| i >= half)
        .unwrap_or(half);

    // window extremes: endpoints plus boundaries inside the window
    let mut tail_min = e.frequency(tail_start);
    let mut tail_max = tail_min.clone();
    for q in [e.frequency(upto)]
        .into_iter()
        .chain(boundaries.iter().filter(|row| row.index >= tail_start).map(|row| row.frequency.clone()))
    {
        if q < tail_min {
            tail_min = q.clone();
        }
        if q > tail_max {
            tail_max = q;
        }
    }

    let persistent_gap = tail_max.clone() - tail_min.clone();
    let gap_exceeds_inverse = if persistent_gap > rat_u(0, 1) {
        // least n with gap > 1/n, i.e. n > denom/numer
        let n0 = persistent_gap.denom() / persistent_gap.numer();
        Some(u64::try_from(n0).unwrap_or(u64::MAX).saturating_add(1))
    } else {
        None
    };

    OscillationReport {
        scanned: upto,
        boundaries,
        tail_start,
        tail_min,
        tail_max,
        persistent_gap,
        gap_exceeds_inverse,
    }
}
