//! Events whose running frequency provably settles, at an explicit rate.
//!
//! An [`ActualEvent`] pairs a potential event e with a modulus γ: a
//! strictly increasing index map such that all frequencies beyond γ(n)
//! stay within 1/n of each other. The probability of the pair is then the
//! real with approximants Φ(e)(γ(n)); no limit is taken anywhere.
//!
//! Constructors transform moduli exactly: complement keeps γ, a disjoint
//! union of (e,γ) and (e',γ') carries n ↦ γ(2n)+γ'(2n), a subevent of a
//! null event carries n ↦ γ(6n), prepending a failure carries
//! n ↦ γ(3n)+1. Affine moduli stay affine through all of this, so the
//! composed rate can be printed and compared exactly.
//!
//! Preconditions that are only semi-decidable (disjointness, nullity,
//! pointwise order) are scanned within a [`CheckBudget`]; past the budget
//! the caller's claim stands, and `validate_cauchy` exists to spot-check
//! any pair after the fact.

use std::fmt;
use std::sync::Arc;

use num::Signed;
use thiserror::Error;

use crate::event::PotentialEvent;
use crate::rational::rat_u;
use crate::real::BishopReal;
use crate::verdict::Verdict;

/// How far the budgeted precondition scans go.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckBudget {
    /// Prefix length for bitwise scans (disjointness, pointwise order).
    pub prefix_bits: u64,
    /// Number of approximants for probability-level scans (nullity,
    /// modulus domination).
    pub approximants: u64,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget { prefix_bits: 10_000, approximants: 64 }
    }
}

/// Strictly increasing index map n ↦ γ(n), n ≥ 1. Affine moduli
/// (slope·n + intercept) are kept in closed form: every constructor in
/// this crate composes them exactly, and they print as such.
#[derive(Clone)]
pub struct Modulus {
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Affine { slope: u128, intercept: u128 },
    Map(Arc<dyn Fn(u64) -> u64 + Send + Sync>),
}

impl Modulus {
    /// slope·n + intercept; slope ≥ 1 keeps it strictly increasing.
    pub fn affine(slope: u128, intercept: u128) -> Self {
        assert!(slope >= 1, "a modulus must strictly increase");
        Modulus { repr: Repr::Affine { slope, intercept } }
    }

    /// The identity modulus n ↦ n.
    pub fn identity() -> Self {
        Modulus::affine(1, 0)
    }

    /// Opaque modulus. The caller asserts strict monotonicity and
    /// positivity; budgeted checks downstream spot-check it.
    pub fn from_fn(f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        Modulus { repr: Repr::Map(Arc::new(f)) }
    }

    pub fn eval(&self, n: u64) -> u64 {
        assert!(n >= 1, "modulus arguments are 1-based");
        match &self.repr {
            Repr::Affine { slope, intercept } => {
                let v = slope
                    .checked_mul(n as u128)
                    .and_then(|p| p.checked_add(*intercept))
                    .expect("modulus value overflows");
                u64::try_from(v).expect("modulus value exceeds u64; event is out of reach")
            }
            Repr::Map(f) => f(n),
        }
    }

    pub fn as_affine(&self) -> Option<(u128, u128)> {
        match &self.repr {
            Repr::Affine { slope, intercept } => Some((*slope, *intercept)),
            Repr::Map(_) => None,
        }
    }

    /// n ↦ γ(k·n).
    pub fn scale_inner(&self, k: u64) -> Modulus {
        assert!(k >= 1);
        match &self.repr {
            Repr::Affine { slope, intercept } => {
                let slope = slope.checked_mul(k as u128).expect("modulus slope overflows");
                Modulus { repr: Repr::Affine { slope, intercept: *intercept } }
            }
            Repr::Map(f) => {
                let f = f.clone();
                Modulus::from_fn(move |n| f(k * n))
            }
        }
    }

    /// n ↦ γ(n) + c.
    pub fn plus_const(&self, c: u64) -> Modulus {
        match &self.repr {
            Repr::Affine { slope, intercept } => Modulus {
                repr: Repr::Affine {
                    slope: *slope,
                    intercept: intercept.checked_add(c as u128).expect("modulus intercept overflows"),
                },
            },
            Repr::Map(f) => {
                let f = f.clone();
                Modulus::from_fn(move |n| f(n) + c)
            }
        }
    }

    /// n ↦ γ(n) + γ'(n).
    pub fn add(&self, other: &Modulus) -> Modulus {
        match (&self.repr, &other.repr) {
            (Repr::Affine { slope: s1, intercept: c1 }, Repr::Affine { slope: s2, intercept: c2 }) => {
                Modulus {
                    repr: Repr::Affine {
                        slope: s1.checked_add(*s2).expect("modulus slope overflows"),
                        intercept: c1.checked_add(*c2).expect("modulus intercept overflows"),
                    },
                }
            }
            _ => {
                let a = self.clone();
                let b = other.clone();
                Modulus::from_fn(move |n| a.eval(n) + b.eval(n))
            }
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Affine { slope: 1, intercept: 0 } => write!(f, "n"),
            Repr::Affine { slope, intercept: 0 } => write!(f, "{slope}n"),
            Repr::Affine { slope: 1, intercept } => write!(f, "n+{intercept}"),
            Repr::Affine { slope, intercept } => write!(f, "{slope}n+{intercept}"),
            Repr::Map(_) => write!(f, "(opaque)"),
        }
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({self})")
    }
}

/// An event together with a settling-rate witness for its frequency.
#[derive(Clone, Debug)]
pub struct ActualEvent {
    event: PotentialEvent,
    modulus: Modulus,
}

/// Why a witness-carrying constructor refused its inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActualEventError {
    #[error("events share a success at trial {0}")]
    NotDisjoint(u64),
    #[error("probability is refutably nonzero (approximant {0})")]
    NotNull(u64),
    #[error("claimed subevent succeeds where its superevent fails, at trial {0}")]
    NotBelow(u64),
    #[error("replacement modulus drops below the original at n = {0}")]
    DominationViolation(u64),
    #[error("modulus fails to strictly increase at n = {0}")]
    NotIncreasing(u64),
    #[error("meet operand disagrees with the pointwise meet at trial {0}")]
    MeetMismatch(u64),
    #[error("join operand disagrees with the pointwise join at trial {0}")]
    JoinMismatch(u64),
}

impl ActualEvent {
    /// Pair an event with a caller-supplied modulus. Nothing is verified
    /// here: the pair earns only what `validate_cauchy` later confirms.
    pub fn from_parts(event: PotentialEvent, modulus: Modulus) -> Self {
        ActualEvent { event, modulus }
    }

    pub(crate) fn from_parts_internal(event: PotentialEvent, modulus: Modulus) -> Self {
        ActualEvent { event, modulus }
    }

    pub fn event(&self) -> &PotentialEvent {
        &self.event
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// The probability as a real: approximant n is Φ(e)(γ(n)), exact.
    pub fn probability(&self) -> BishopReal {
        let event = self.event.clone();
        let modulus = self.modulus.clone();
        BishopReal::new(move |n| event.frequency(modulus.eval(n)))
    }

    /// (¬e, γ): complement frequencies mirror exactly, so the modulus
    /// carries over unchanged.
    pub fn complement(&self) -> ActualEvent {
        ActualEvent { event: self.event.complement(), modulus: self.modulus.clone() }
    }

    /// Prepend one failure; the settling rate degrades to n ↦ γ(3n)+1.
    pub fn shifted(&self) -> ActualEvent {
        ActualEvent {
            event: self.event.shift(),
            modulus: self.modulus.scale_inner(3).plus_const(1),
        }
    }
}

/// The never-successful event with the identity modulus.
pub fn bottom_actual() -> ActualEvent {
    ActualEvent { event: PotentialEvent::bottom(), modulus: Modulus::identity() }
}

/// Union of two actual events with no common success. The combined
/// modulus is n ↦ γ(2n) + γ'(2n).
///
/// Disjointness is decided exactly when the meet is eventually periodic,
/// otherwise scanned over `budget.prefix_bits` trials.
pub fn disjoint_union(
    a: &ActualEvent,
    b: &ActualEvent,
    budget: CheckBudget,
) -> Result<ActualEvent, ActualEventError> {
    let meet = a.event.and(&b.event);
    let horizon = match meet.periodic_parts() {
        Some((pre, per)) => (pre.len() + per.len()) as u64,
        None => budget.prefix_bits,
    };
    for i in 1..=horizon {
        if meet.eval(i) == 1 {
            return Err(ActualEventError::NotDisjoint(i));
        }
    }
    Ok(ActualEvent {
        event: a.event.or(&b.event),
        modulus: a.modulus.scale_inner(2).add(&b.modulus.scale_inner(2)),
    })
}

/// Any pointwise subevent of a probability-zero event is itself actual,
/// with modulus n ↦ γ(6n).
///
/// Nullity is refuted by |ℙ(n)| > 2/n within the approximant budget;
/// order is refuted by a scanned counterexample bit.
pub fn null_subevent(
    null_sup: &ActualEvent,
    sub: &PotentialEvent,
    budget: CheckBudget,
) -> Result<ActualEvent, ActualEventError> {
    if let Verdict::RefutedAt(n) =
        null_sup.probability().eq_refute_upto(&BishopReal::zero(), budget.approximants)
    {
        return Err(ActualEventError::NotNull(n));
    }
    if let Verdict::RefutedAt(i) = sub.leq_upto(&null_sup.event, budget.prefix_bits) {
        return Err(ActualEventError::NotBelow(i));
    }
    Ok(ActualEvent { event: sub.clone(), modulus: null_sup.modulus.scale_inner(6) })
}

/// Replace the modulus by a slower one (γ'(n) ≥ γ(n) pointwise).
///
/// Domination is decided exactly for affine pairs (with the least
/// violating index when it fails); opaque moduli are scanned over the
/// approximant budget, which also spot-checks strict monotonicity.
pub fn relax_modulus(
    a: &ActualEvent,
    slower: Modulus,
    budget: CheckBudget,
) -> Result<ActualEvent, ActualEventError> {
    match (a.modulus.as_affine(), slower.as_affine()) {
        (Some((s1, c1)), Some((s2, c2))) => {
            if s2 >= s1 {
                if s2 + c2 < s1 + c1 {
                    return Err(ActualEventError::DominationViolation(1));
                }
            } else {
                // slope deficit: domination fails for all large n
                let deficit = s1 - s2;
                let head = c2.saturating_sub(c1);
                let n0 = (head / deficit + 1).max(1);
                return Err(ActualEventError::DominationViolation(
                    u64::try_from(n0).unwrap_or(u64::MAX),
                ));
            }
        }
        _ => {
            let mut prev = 0u64;
            for n in 1..=budget.approximants {
                let v = slower.eval(n);
                if v < a.modulus.eval(n) {
                    return Err(ActualEventError::DominationViolation(n));
                }
                if v <= prev {
                    return Err(ActualEventError::NotIncreasing(n));
                }
                prev = v;
            }
        }
    }
    Ok(ActualEvent { event: a.event.clone(), modulus: slower })
}

/// Check |Φ(γ(n)+i) − Φ(γ(n)+j)| ≤ 1/n for each sample triple, in exact
/// arithmetic. Returns the first violated triple.
pub fn validate_cauchy(a: &ActualEvent, samples: &[(u64, u64, u64)]) -> Verdict<(u64, u64, u64)> {
    for &(n, i, j) in samples {
        let base = a.modulus.eval(n);
        let fi = a.event.frequency(base + i);
        let fj = a.event.frequency(base + j);
        if (fi - fj).abs() > rat_u(1, n) {
            return Verdict::RefutedAt((n, i, j));
        }
    }
    Verdict::ConsistentUpTo(samples.len() as u64)
}

/// Grid form of `validate_cauchy`: all pairs i, j ≤ max_offset for each
/// n ≤ max_n. Equivalent to checking max−min of the frequencies at
/// offsets 0..=max_offset against 1/n, so it runs linearly in the grid.
pub fn validate_cauchy_grid(a: &ActualEvent, max_n: u64, max_offset: u64) -> Verdict<(u64, u64, u64)> {
    let mut checked = 0u64;
    for n in 1..=max_n {
        let base = a.modulus.eval(n);
        let first = a.event.frequency(base);
        let mut min = first.clone();
        let mut min_off = 0u64;
        let mut max = first;
        let mut max_off = 0u64;
        for off in 1..=max_offset {
            let f = a.event.frequency(base + off);
            if f < min {
                min = f;
                min_off = off;
            } else if f > max {
                max = f;
                max_off = off;
            }
            checked += 1;
        }
        if max - min > rat_u(1, n) {
            return Verdict::RefutedAt((n, max_off, min_off));
        }
    }
    Verdict::ConsistentUpTo(checked)
}

/// For e ≤ e' (checked within budget), refute ℙ(e) ≤ ℙ(e') by scanning
/// Φ(e)(η(2n)) ≤ Φ(e')(η(2n)) + 1/n with the shared modulus
/// η = γ + γ'.
pub fn monotonicity_check(
    a: &ActualEvent,
    b: &ActualEvent,
    upto: u64,
    budget: CheckBudget,
) -> Result<Verdict<u64>, ActualEventError> {
    if let Verdict::RefutedAt(i) = a.event.leq_upto(&b.event, budget.prefix_bits) {
        return Err(ActualEventError::NotBelow(i));
    }
    let eta = a.modulus.add(&b.modulus);
    for n in 1..=upto {
        let k = eta.eval(2 * n);
        if a.event.frequency(k) > b.event.frequency(k) + rat_u(1, n) {
            return Ok(Verdict::RefutedAt(n));
        }
    }
    Ok(Verdict::ConsistentUpTo(upto))
}

/// Refute ℙ(e∨e') + ℙ(e∧e') = ℙ(e) + ℙ(e') for four actual events whose
/// meet/join operands match the pointwise meet/join (checked within
/// budget). All four probabilities are taken at the shared modulus
/// ε = α+β+γ+δ, under which the identity is exact at every index.
pub fn modularity_check(
    a: &ActualEvent,
    b: &ActualEvent,
    meet: &ActualEvent,
    join: &ActualEvent,
    upto: u64,
    budget: CheckBudget,
) -> Result<Verdict<u64>, ActualEventError> {
    if let Verdict::RefutedAt(i) = meet.event.agree_upto(&a.event.and(&b.event), budget.prefix_bits) {
        return Err(ActualEventError::MeetMismatch(i));
    }
    if let Verdict::RefutedAt(i) = join.event.agree_upto(&a.event.or(&b.event), budget.prefix_bits) {
        return Err(ActualEventError::JoinMismatch(i));
    }
    let eps = a.modulus.add(&b.modulus).add(&meet.modulus).add(&join.modulus);
    let at = |event: &PotentialEvent| {
        ActualEvent { event: event.clone(), modulus: eps.clone() }.probability()
    };
    let lhs = at(&join.event).add(&at(&meet.event));
    let rhs = at(&a.event).add(&at(&b.event));
    Ok(lhs.eq_refute_upto(&rhs, upto))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num::Zero;

    fn reg(pre: &[u8], per: &[u8]) -> PotentialEvent {
        PotentialEvent::from_periodic(pre.to_vec(), per.to_vec())
    }

    /// Period-only pairing used throughout: period length m gets the
    /// modulus 4·m·n, which the frequency of a pure periodic stream
    /// satisfies with room to spare.
    fn periodic_actual(per: &[u8]) -> ActualEvent {
        ActualEvent::from_parts(reg(&[], per), Modulus::affine(4 * per.len() as u128, 0))
    }

    #[test]
    fn modulus_display_and_eval() {
        assert_eq!(Modulus::identity().to_string(), "n");
        assert_eq!(Modulus::affine(8, 0).to_string(), "8n");
        assert_eq!(Modulus::affine(1, 3).to_string(), "n+3");
        assert_eq!(Modulus::affine(52, 1).to_string(), "52n+1");
        assert_eq!(Modulus::affine(52, 1).eval(1), 53);
        assert_eq!(Modulus::affine(3, 0).scale_inner(2).plus_const(5).to_string(), "6n+5");
    }

    #[test]
    fn bottom_probability_is_constant_zero() {
        let bot = bottom_actual();
        for n in 1..=20u64 {
            assert!(bot.probability().approximant(n).is_zero());
        }
        assert!(validate_cauchy_grid(&bot, 16, 64).is_consistent());
    }

    #[test]
    fn complement_mirrors_at_the_same_index() {
        let a = periodic_actual(&[1, 1, 0]);
        let c = a.complement();
        for n in 1..=32u64 {
            // Φ(¬e)(γ(n)) + Φ(e)(γ(n)) = 1 exactly
            assert_eq!(c.probability().approximant(n) + a.probability().approximant(n), rat(1, 1));
        }
    }

    #[test]
    fn complement_vs_one_minus_bookkeeping() {
        let a = ActualEvent::from_parts(reg(&[1], &[1, 0]), Modulus::affine(52, 1));
        let p = a.probability();
        let q = a.complement().probability();
        let om = p.one_minus();
        for n in 1..=24u64 {
            // the two sides differ exactly by the approximant shift n → 2n
            let lhs = (q.approximant(n) - om.approximant(n)).abs();
            let rhs = (p.approximant(2 * n) - p.approximant(n)).abs();
            assert_eq!(lhs, rhs);
            assert!(lhs <= rat(3, 2 * n as i64));
        }
    }

    #[test]
    fn disjoint_union_rejects_overlap() {
        let a = periodic_actual(&[1, 0]);
        let err = disjoint_union(&a, &a.clone(), CheckBudget::default()).unwrap_err();
        assert_eq!(err, ActualEventError::NotDisjoint(1));
    }

    #[test]
    fn disjoint_union_with_bottom_keeps_probability() {
        let a = periodic_actual(&[1, 0]);
        let u = disjoint_union(&a, &bottom_actual(), CheckBudget::default()).unwrap();
        let (s, c) = u.modulus().as_affine().unwrap();
        // γ(2n)+γ'(2n) with γ = 8n, γ' = n
        assert_eq!((s, c), (18, 0));
        assert!(u.probability().eq_refute_upto(&a.probability(), 64).is_consistent());
    }

    #[test]
    fn disjoint_union_is_exactly_additive_under_its_modulus() {
        let a = periodic_actual(&[1, 0, 0, 0]);
        let b = ActualEvent::from_parts(reg(&[], &[0, 1, 0, 0]), Modulus::affine(16, 0));
        let u = disjoint_union(&a, &b, CheckBudget::default()).unwrap();
        for n in 1..=32u64 {
            let k = u.modulus().eval(n);
            let sum = a.event().frequency(k) + b.event().frequency(k);
            assert_eq!(u.event().frequency(k), sum);
        }
    }

    #[test]
    fn null_subevent_accepts_and_rescales() {
        let nul = ActualEvent::from_parts(reg(&[1, 1], &[0]), Modulus::affine(4, 0));
        let sub = reg(&[0, 1], &[0]);
        let got = null_subevent(&nul, &sub, CheckBudget::default()).unwrap();
        assert_eq!(got.modulus().as_affine().unwrap(), (24, 0));
        assert!(validate_cauchy_grid(&got, 16, 64).is_consistent());
    }

    #[test]
    fn null_subevent_refutes_nonzero_probability() {
        // ℙ = 1/2 exactly; |1/2 − 0| > 2/n first at n = 5
        let half = periodic_actual(&[1, 0]);
        let err = null_subevent(&half, &PotentialEvent::bottom(), CheckBudget::default()).unwrap_err();
        assert_eq!(err, ActualEventError::NotNull(5));
    }

    #[test]
    fn null_subevent_refutes_bad_order() {
        let nul = ActualEvent::from_parts(reg(&[], &[0]), Modulus::identity());
        let above = reg(&[0, 0, 1], &[0]);
        let err = null_subevent(&nul, &above, CheckBudget::default()).unwrap_err();
        assert_eq!(err, ActualEventError::NotBelow(3));
    }

    #[test]
    fn relax_accepts_slower_affine() {
        let a = periodic_actual(&[1, 0]);
        let relaxed = relax_modulus(&a, Modulus::affine(8, 1), CheckBudget::default()).unwrap();
        assert!(validate_cauchy_grid(&relaxed, 16, 64).is_consistent());
        // the two pairings denote the same real
        assert!(relaxed.probability().eq_refute_upto(&a.probability(), 64).is_consistent());
    }

    #[test]
    fn relax_rejects_faster_affine_with_least_witness() {
        let a = ActualEvent::from_parts(reg(&[], &[1]), Modulus::affine(2, 0));
        assert_eq!(
            relax_modulus(&a, Modulus::identity(), CheckBudget::default()).unwrap_err(),
            ActualEventError::DominationViolation(1)
        );
        // 2n vs n+5: first drops below at n = 6
        assert_eq!(
            relax_modulus(&a, Modulus::affine(1, 5), CheckBudget::default()).unwrap_err(),
            ActualEventError::DominationViolation(6)
        );
    }

    #[test]
    fn relax_scans_opaque_moduli() {
        let a = ActualEvent::from_parts(reg(&[], &[1]), Modulus::affine(2, 0));
        let ok = relax_modulus(&a, Modulus::from_fn(|n| 2 * n + n / 3), CheckBudget::default());
        assert!(ok.is_ok());
        let bad = relax_modulus(&a, Modulus::from_fn(|n| if n < 5 { 3 * n } else { 9 }), CheckBudget::default());
        assert_eq!(bad.unwrap_err(), ActualEventError::DominationViolation(5));
    }

    #[test]
    fn cauchy_validation_catches_a_fake_modulus() {
        // 0,0,0,0,1,1,1,… claimed to settle at the identity rate:
        // at n = 2 the frequencies at offsets 0 and 64 differ by 62/66.
        let a = ActualEvent::from_parts(reg(&[0, 0, 0, 0], &[1]), Modulus::identity());
        assert_eq!(validate_cauchy(&a, &[(2, 0, 64)]), Verdict::RefutedAt((2, 0, 64)));
        assert_eq!(validate_cauchy_grid(&a, 16, 64).refutation().unwrap().0, 2);
    }

    #[test]
    fn cauchy_validation_passes_honest_pairs() {
        for per in [&[1u8, 0][..], &[1, 1, 0], &[0, 0, 0, 1], &[1]] {
            let a = periodic_actual(per);
            assert!(validate_cauchy_grid(&a, 16, 64).is_consistent());
        }
    }

    #[test]
    fn monotonicity_holds_for_nested_periodics() {
        let small = periodic_actual(&[1, 0, 0]);
        let large = periodic_actual(&[1, 0, 1]);
        let verdict = monotonicity_check(&small, &large, 64, CheckBudget::default()).unwrap();
        assert!(verdict.is_consistent());
    }

    #[test]
    fn monotonicity_rejects_unordered_inputs() {
        let a = periodic_actual(&[1, 0]);
        let b = periodic_actual(&[0, 1]);
        assert_eq!(
            monotonicity_check(&a, &b, 64, CheckBudget::default()).unwrap_err(),
            ActualEventError::NotBelow(1)
        );
    }

    #[test]
    fn modularity_is_exact_under_the_shared_modulus() {
        let a = periodic_actual(&[1, 1, 0]);
        let b = periodic_actual(&[0, 1, 1]);
        let meet = ActualEvent::from_parts(a.event().and(b.event()), Modulus::affine(12, 0));
        let join = ActualEvent::from_parts(a.event().or(b.event()), Modulus::affine(12, 0));
        let verdict = modularity_check(&a, &b, &meet, &join, 64, CheckBudget::default()).unwrap();
        assert!(verdict.is_consistent());
    }

    #[test]
    fn modularity_rejects_mismatched_operands() {
        let a = periodic_actual(&[1, 0]);
        let b = periodic_actual(&[0, 1]);
        let meet = bottom_actual();
        let join = periodic_actual(&[1]);
        let wrong_meet = periodic_actual(&[1, 0]); // not a ∧ b
        assert_eq!(
            modularity_check(&a, &b, &wrong_meet, &join, 64, CheckBudget::default()).unwrap_err(),
            ActualEventError::MeetMismatch(1)
        );
        let ok = modularity_check(&a, &b, &meet, &join, 64, CheckBudget::default()).unwrap();
        assert!(ok.is_consistent());
    }

    #[test]
    fn shifted_composes_rate_and_stream() {
        let a = periodic_actual(&[1, 0]); // modulus 8n
        let s = a.shifted();
        assert_eq!(s.modulus().as_affine().unwrap(), (24, 1));
        assert_eq!(s.event().eval(1), 0);
        assert_eq!(s.event().eval(2), 1);
        assert!(validate_cauchy_grid(&s, 16, 64).is_consistent());
    }

    #[test]
    fn probability_approximants_pass_regularity_spot_checks() {
        for per in [&[1u8, 0][..], &[1, 1, 0, 0], &[0, 1, 0]] {
            let p = periodic_actual(per).probability();
            let grid: Vec<u64> = (0..8).map(|i| 1 + i * 36).collect();
            assert!(p.regularity_spot_check(&grid).is_consistent());
        }
    }
}
