//! Eventually periodic events: the decidable fragment.
//!
//! A [`RegularEvent`] is a preamble (possibly empty) followed by a
//! nonempty period repeated forever. Everything that is merely
//! semi-refutable for arbitrary streams is decidable here: equality (via
//! a canonical form with minimal period and minimal preamble), the full
//! Boolean algebra, and the limiting density itself, which is just the
//! mean of the period bits.
//!
//! The meet/join here are computed by alignment formulas on the two
//! presentations (swap so the longer preamble leads; the result has that
//! preamble length and the product of the period lengths, then gets
//! canonicalized). `event.rs` computes the same operations by plain
//! pointwise evaluation, so the two routes check each other.
//!
//! `to_actual` builds the settling-rate witness compositionally: a pure
//! period of length m settles at 4mn; a preamble followed by zeros at
//! 2mn; prepending a failure turns γ into γ(3n)+1; and a disjoint union
//! combines the parts. For reg([1],[1,0]) the composed rate comes out as
//! 52n+1.

use std::fmt;

use thiserror::Error;

use crate::actual::{disjoint_union, ActualEvent, CheckBudget, Modulus};
use crate::event::PotentialEvent;
use crate::rational::{rat_u, Rational};

/// Preamble + repeating period, both over bits {0,1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegularEvent {
    preamble: Vec<u8>,
    period: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegularEventError {
    #[error("period must be nonempty")]
    EmptyPeriod,
    #[error("value {value} at position {position} is not a bit")]
    NonBinary { value: u8, position: usize },
}

fn check_bits(bits: &[u8]) -> Result<(), RegularEventError> {
    for (position, &value) in bits.iter().enumerate() {
        if value > 1 {
            return Err(RegularEventError::NonBinary { value, position });
        }
    }
    Ok(())
}

impl RegularEvent {
    pub fn new(preamble: Vec<u8>, period: Vec<u8>) -> Result<Self, RegularEventError> {
        if period.is_empty() {
            return Err(RegularEventError::EmptyPeriod);
        }
        check_bits(&preamble)?;
        check_bits(&period)?;
        Ok(RegularEvent { preamble, period })
    }

    /// Infallible constructor for literal bit slices; panics on bad input.
    pub fn from_bits(preamble: &[u8], period: &[u8]) -> Self {
        RegularEvent::new(preamble.to_vec(), period.to_vec()).expect("valid literal event")
    }

    pub fn preamble(&self) -> &[u8] {
        &self.preamble
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Outcome at trial i: preamble bit while i ≤ ℓα, then the period
    /// cycles starting immediately after the preamble.
    pub fn eval(&self, i: u64) -> u8 {
        assert!(i >= 1, "event indices are 1-based");
        let la = self.preamble.len() as u64;
        if i <= la {
            self.preamble[(i - 1) as usize]
        } else {
            let k = (i - la - 1) % self.period.len() as u64;
            self.period[k as usize]
        }
    }

    /// View as a potential event (closed-form counts included).
    pub fn to_potential(&self) -> PotentialEvent {
        PotentialEvent::from_periodic(self.preamble.clone(), self.period.clone())
    }

    /// Unique representative: minimal period (no divisor-length
    /// repetition), then minimal preamble (trailing preamble bits that
    /// the rotated period already produces are absorbed into it).
    pub fn canonical(&self) -> RegularEvent {
        let m = self.period.len();
        let d = (1..=m)
            .find(|&d| m.is_multiple_of(d) && (0..m).all(|i| self.period[i] == self.period[i % d]))
            .expect("a period repeats itself at its own length");
        let mut period = self.period[..d].to_vec();
        let mut preamble = self.preamble.clone();
        while let Some(&last) = preamble.last() {
            if last == *period.last().expect("period is nonempty") {
                preamble.pop();
                period.rotate_right(1);
            } else {
                break;
            }
        }
        RegularEvent { preamble, period }
    }

    /// Same stream of outcomes, decided via canonical forms.
    pub fn equivalent(&self, other: &RegularEvent) -> bool {
        self.canonical() == other.canonical()
    }

    /// Complement: flip every preamble and period bit. Flipping commutes
    /// with rotation and repetition, so canonicality is preserved; the
    /// result is canonicalized anyway for uniformity.
    pub fn complement(&self) -> RegularEvent {
        RegularEvent {
            preamble: self.preamble.iter().map(|b| 1 - b).collect(),
            period: self.period.iter().map(|b| 1 - b).collect(),
        }
        .canonical()
    }

    /// Pointwise meet, via the alignment formulas, canonicalized.
    pub fn and(&self, other: &RegularEvent) -> RegularEvent {
        aligned_op(self, other, |x, y| x * y)
    }

    /// Pointwise join, via the alignment formulas, canonicalized.
    pub fn or(&self, other: &RegularEvent) -> RegularEvent {
        aligned_op(self, other, |x, y| x + y - x * y)
    }

    /// Prepend one failure (the shift of the stream): the preamble grows
    /// by a leading 0.
    pub fn shifted(&self) -> RegularEvent {
        let mut preamble = Vec::with_capacity(self.preamble.len() + 1);
        preamble.push(0);
        preamble.extend_from_slice(&self.preamble);
        RegularEvent { preamble, period: self.period.clone() }
    }

    /// Limiting density in closed form: the mean of the canonical
    /// period's bits. The preamble never matters.
    pub fn density(&self) -> Rational {
        let c = self.canonical();
        let ones: u64 = c.period.iter().map(|&b| u64::from(b)).sum();
        rat_u(ones, c.period.len() as u64)
    }

    /// Settling-rate witness, built compositionally: the period part
    /// settles at 4·ℓπ·n; with a preamble, the preamble-supported part
    /// (2·ℓα·n) and the ℓα-fold shifted period part are disjoint, and
    /// their union supplies the combined modulus.
    pub fn to_actual(&self) -> ActualEvent {
        if self.preamble.is_empty() {
            return ActualEvent::from_parts_internal(
                self.to_potential(),
                Modulus::affine(4 * self.period.len() as u128, 0),
            );
        }
        let head = finite_support_actual(&self.preamble).expect("preamble is nonempty here");
        let mut tail = period_actual(&self.period).expect("period is nonempty");
        for _ in 0..self.preamble.len() {
            tail = tail.shifted();
        }
        let union = disjoint_union(&head, &tail, CheckBudget::default())
            .expect("preamble part and shifted period part never overlap");
        // same stream of outcomes as the union, with closed-form counts
        ActualEvent::from_parts_internal(self.to_potential(), union.modulus().clone())
    }
}

fn rm(a: u64, m: u64) -> usize {
    (a % m) as usize
}

/// Meet/join on presentations. With preambles ordered so ℓ(β) ≥ ℓ(α),
/// the result preamble has length ℓ(β) (the shorter side already cycling
/// where its preamble has run out) and the result period has length
/// ℓπ·ℓψ, each position combining the two periods at their respective
/// phases. Canonicalization then prunes to the minimal form.
fn aligned_op(a: &RegularEvent, b: &RegularEvent, op: fn(u8, u8) -> u8) -> RegularEvent {
    let (x, y) = if a.preamble.len() <= b.preamble.len() { (a, b) } else { (b, a) };
    let la = x.preamble.len() as u64;
    let lb = y.preamble.len() as u64;
    let lp = x.period.len() as u64;
    let lq = y.period.len() as u64;

    let mut preamble = Vec::with_capacity(lb as usize);
    for i in 1..=lb {
        let xi = if i <= la { x.preamble[(i - 1) as usize] } else { x.period[rm(i - la - 1, lp)] };
        preamble.push(op(xi, y.preamble[(i - 1) as usize]));
    }

    let mut period = Vec::with_capacity((lp * lq) as usize);
    for i in 1..=lp * lq {
        let xi = x.period[rm(lb - la + i - 1, lp)];
        let yi = y.period[rm(i - 1, lq)];
        period.push(op(xi, yi));
    }

    RegularEvent { preamble, period }.canonical()
}

impl fmt::Display for RegularEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |bits: &[u8]| {
            bits.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "reg([{}],[{}])", list(&self.preamble), list(&self.period))
    }
}

/// Pure period of length m ≥ 1 with settling rate 4mn.
pub fn period_actual(period: &[u8]) -> Result<ActualEvent, RegularEventError> {
    let r = RegularEvent::new(Vec::new(), period.to_vec())?;
    Ok(ActualEvent::from_parts_internal(
        r.to_potential(),
        Modulus::affine(4 * period.len() as u128, 0),
    ))
}

/// Event succeeding only within the first m trials (all zeros after the
/// given bits), with settling rate 2mn. Needs m ≥ 1.
pub fn finite_support_actual(bits: &[u8]) -> Result<ActualEvent, RegularEventError> {
    if bits.is_empty() {
        return Err(RegularEventError::EmptyPeriod);
    }
    check_bits(bits)?;
    let r = RegularEvent::new(bits.to_vec(), vec![0]).expect("validated above");
    Ok(ActualEvent::from_parts_internal(
        r.to_potential(),
        Modulus::affine(2 * bits.len() as u128, 0),
    ))
}
