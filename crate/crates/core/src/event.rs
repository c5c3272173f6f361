//! Potential events: total 0/1 streams indexed from 1.
//!
//! An event answers "did a success occur at trial n" for every n, with no
//! promise that the running frequency of successes settles anywhere. The
//! type keeps running prefix counts so that `frequency(n)` = S(n)/n is
//! amortized O(1) for opaque streams and O(1) outright for eventually
//! periodic streams, where the count has a closed form.
//!
//! Pointwise operations follow the definitional arithmetic on bits:
//! meet x·y, join x+y−xy, complement 1−x, implication max(1−x, y).

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::rational::{rat_u, Rational};
use crate::verdict::Verdict;

/// Opaque streams refuse prefix scans beyond this many bits; everything
/// the engine builds for periodic inputs uses closed forms instead.
const MAX_STREAM_SCAN: u64 = 1 << 32;

/// Pointwise ops on two eventually periodic events materialize the result
/// (preamble max, period lcm) only up to this total length; beyond it the
/// result falls back to a lazy stream with identical semantics.
const PERIODIC_MATERIALIZE_CAP: u64 = 1 << 12;

/// A total 0/1 stream. Cloning shares the stream and its prefix cache.
#[derive(Clone)]
pub struct PotentialEvent {
    inner: Arc<Source>,
}

enum Source {
    /// Arbitrary total generator plus a memoized prefix-count cache.
    /// The cache only grows and is never evicted; recomputing any S(n)
    /// from scratch must equal the cached value.
    Stream {
        gen: Box<dyn Fn(u64) -> u8 + Send + Sync>,
        counts: Mutex<Vec<u64>>,
    },
    /// Eventually periodic: O(1) eval and closed-form prefix counts.
    Periodic(Periodic),
    /// Generator with a caller-supplied closed-form prefix count
    /// (count(n) must equal the number of 1s among the first n bits).
    Counted {
        gen: Box<dyn Fn(u64) -> u8 + Send + Sync>,
        count: Box<dyn Fn(u64) -> u64 + Send + Sync>,
    },
}

struct Periodic {
    preamble: Vec<u8>,
    period: Vec<u8>,
    /// preamble_sums[i] = ones among the first i preamble bits.
    preamble_sums: Vec<u64>,
    /// period_sums[i] = ones among the first i period bits.
    period_sums: Vec<u64>,
}

fn running_sums(bits: &[u8]) -> Vec<u64> {
    let mut sums = Vec::with_capacity(bits.len() + 1);
    sums.push(0);
    let mut acc = 0u64;
    for &b in bits {
        debug_assert!(b <= 1, "event bits are 0 or 1");
        acc += u64::from(b);
        sums.push(acc);
    }
    sums
}

impl Periodic {
    fn new(preamble: Vec<u8>, period: Vec<u8>) -> Self {
        assert!(!period.is_empty(), "periodic source needs a nonempty period");
        let preamble_sums = running_sums(&preamble);
        let period_sums = running_sums(&period);
        Periodic { preamble, period, preamble_sums, period_sums }
    }

    fn eval(&self, n: u64) -> u8 {
        let la = self.preamble.len() as u64;
        if n <= la {
            self.preamble[(n - 1) as usize]
        } else {
            let k = (n - la - 1) % self.period.len() as u64;
            self.period[k as usize]
        }
    }

    fn count(&self, n: u64) -> u64 {
        let la = self.preamble.len() as u64;
        if n <= la {
            return self.preamble_sums[n as usize];
        }
        let lp = self.period.len() as u64;
        let beyond = n - la;
        let full = beyond / lp;
        let rem = (beyond % lp) as usize;
        self.preamble_sums[la as usize] + full * self.period_sums[lp as usize] + self.period_sums[rem]
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl PotentialEvent {
    /// Event from an arbitrary total generator. The generator must be
    /// deterministic: eval(n) is asked repeatedly and cached only in
    /// aggregate.
    pub fn from_fn(gen: impl Fn(u64) -> u8 + Send + Sync + 'static) -> Self {
        PotentialEvent {
            inner: Arc::new(Source::Stream { gen: Box::new(gen), counts: Mutex::new(Vec::new()) }),
        }
    }

    /// Event with a closed-form prefix count. `count(n)` must equal the
    /// number of 1s among the first n generator values; this is spot
    /// checked in debug builds, trusted in release.
    pub fn from_fn_with_count(
        gen: impl Fn(u64) -> u8 + Send + Sync + 'static,
        count: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        PotentialEvent {
            inner: Arc::new(Source::Counted { gen: Box::new(gen), count: Box::new(count) }),
        }
    }

    pub(crate) fn from_periodic(preamble: Vec<u8>, period: Vec<u8>) -> Self {
        PotentialEvent { inner: Arc::new(Source::Periodic(Periodic::new(preamble, period))) }
    }

    /// The event with no successes.
    pub fn bottom() -> Self {
        PotentialEvent::from_periodic(Vec::new(), vec![0])
    }

    /// The event succeeding at every trial.
    pub fn top() -> Self {
        PotentialEvent::from_periodic(Vec::new(), vec![1])
    }

    /// Deterministic noise stream derived from a seed; handy for
    /// exercising the engine on events with no usable structure.
    pub fn pseudorandom(seed: u64) -> Self {
        PotentialEvent::from_fn(move |n| {
            // splitmix64 finalizer over (seed, n)
            let mut z = seed ^ n.wrapping_mul(0x9e3779b97f4a7c15);
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            ((z ^ (z >> 31)) & 1) as u8
        })
    }

    /// Eventually periodic presentation, when this event has one.
    pub(crate) fn periodic_parts(&self) -> Option<(&[u8], &[u8])> {
        match &*self.inner {
            Source::Periodic(p) => Some((&p.preamble, &p.period)),
            _ => None,
        }
    }

    /// Outcome at trial n (1-based).
    pub fn eval(&self, n: u64) -> u8 {
        assert!(n >= 1, "event indices are 1-based");
        match &*self.inner {
            Source::Stream { gen, .. } => {
                let b = gen(n);
                debug_assert!(b <= 1, "event bits are 0 or 1");
                b
            }
            Source::Periodic(p) => p.eval(n),
            Source::Counted { gen, .. } => gen(n),
        }
    }

    /// S(n): number of successes among the first n trials (S(0) = 0).
    pub fn prefix_count(&self, n: u64) -> u64 {
        match &*self.inner {
            Source::Stream { gen, counts } => {
                if n == 0 {
                    return 0;
                }
                assert!(
                    n <= MAX_STREAM_SCAN,
                    "prefix scan of an opaque stream beyond 2^32 bits; \
                     use a periodic or counted source at this scale"
                );
                let mut cache = counts.lock().unwrap();
                while (cache.len() as u64) < n {
                    let i = cache.len() as u64 + 1;
                    let prev = cache.last().copied().unwrap_or(0);
                    let b = gen(i);
                    debug_assert!(b <= 1, "event bits are 0 or 1");
                    cache.push(prev + u64::from(b));
                }
                cache[(n - 1) as usize]
            }
            Source::Periodic(p) => {
                if n == 0 {
                    0
                } else {
                    p.count(n)
                }
            }
            Source::Counted { count, .. } => {
                if n == 0 {
                    0
                } else {
                    count(n)
                }
            }
        }
    }

    /// Running frequency Φ(n) = S(n)/n, n ≥ 1. Always a rational whose
    /// product with n is the exact success count.
    pub fn frequency(&self, n: u64) -> Rational {
        assert!(n >= 1, "frequency needs a positive index");
        rat_u(self.prefix_count(n), n)
    }

    /// Pointwise meet: (e∧e')(n) = e(n)·e'(n).
    pub fn and(&self, other: &PotentialEvent) -> PotentialEvent {
        pointwise2(self, other, |x, y| x * y)
    }

    /// Pointwise join: (e∨e')(n) = e(n) + e'(n) − e(n)·e'(n).
    pub fn or(&self, other: &PotentialEvent) -> PotentialEvent {
        pointwise2(self, other, |x, y| x + y - x * y)
    }

    /// Pointwise complement: (¬e)(n) = 1 − e(n).
    pub fn complement(&self) -> PotentialEvent {
        match self.periodic_parts() {
            Some((pre, per)) => PotentialEvent::from_periodic(
                pre.iter().map(|b| 1 - b).collect(),
                per.iter().map(|b| 1 - b).collect(),
            ),
            None => {
                let e = self.clone();
                PotentialEvent::from_fn(move |n| 1 - e.eval(n))
            }
        }
    }

    /// Pointwise implication on bits: 1 where e(n) ≤ e'(n), else e'(n)
    /// (equivalently max(1 − e(n), e'(n))).
    pub fn implies(&self, other: &PotentialEvent) -> PotentialEvent {
        pointwise2(self, other, |x, y| (1 - x).max(y))
    }

    /// Prepend one failure: e⁺(1) = 0, e⁺(n+1) = e(n).
    pub fn shift(&self) -> PotentialEvent {
        match &*self.inner {
            Source::Periodic(p) => {
                let mut pre = Vec::with_capacity(p.preamble.len() + 1);
                pre.push(0);
                pre.extend_from_slice(&p.preamble);
                PotentialEvent::from_periodic(pre, p.period.clone())
            }
            Source::Counted { .. } => {
                let e = self.clone();
                let e2 = self.clone();
                PotentialEvent::from_fn_with_count(
                    move |n| if n == 1 { 0 } else { e.eval(n - 1) },
                    move |n| e2.prefix_count(n - 1),
                )
            }
            Source::Stream { .. } => {
                let e = self.clone();
                PotentialEvent::from_fn(move |n| if n == 1 { 0 } else { e.eval(n - 1) })
            }
        }
    }

    /// Refute e ≤ e' (pointwise) on the first `upto` trials.
    pub fn leq_upto(&self, other: &PotentialEvent, upto: u64) -> Verdict<u64> {
        for i in 1..=upto {
            if self.eval(i) > other.eval(i) {
                return Verdict::RefutedAt(i);
            }
        }
        Verdict::ConsistentUpTo(upto)
    }

    /// Refute bitwise equality on the first `upto` trials.
    pub fn agree_upto(&self, other: &PotentialEvent, upto: u64) -> Verdict<u64> {
        for i in 1..=upto {
            if self.eval(i) != other.eval(i) {
                return Verdict::RefutedAt(i);
            }
        }
        Verdict::ConsistentUpTo(upto)
    }
}

fn pointwise2(a: &PotentialEvent, b: &PotentialEvent, op: fn(u8, u8) -> u8) -> PotentialEvent {
    if let (Some((pa, qa)), Some((pb, qb))) = (a.periodic_parts(), b.periodic_parts()) {
        let pre_len = pa.len().max(pb.len()) as u64;
        let per_len = lcm(qa.len() as u64, qb.len() as u64);
        if pre_len + per_len <= PERIODIC_MATERIALIZE_CAP {
            let pre = (1..=pre_len).map(|i| op(a.eval(i), b.eval(i))).collect();
            let per = (pre_len + 1..=pre_len + per_len).map(|i| op(a.eval(i), b.eval(i))).collect();
            return PotentialEvent::from_periodic(pre, per);
        }
    }
    let x = a.clone();
    let y = b.clone();
    PotentialEvent::from_fn(move |n| op(x.eval(n), y.eval(n)))
}

impl fmt::Debug for PotentialEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.periodic_parts() {
            Some((pre, per)) => write!(f, "PotentialEvent(preamble {pre:?}, period {per:?})"),
            None => {
                let head: Vec<u8> = (1..=8).map(|i| self.eval(i)).collect();
                write!(f, "PotentialEvent(stream {head:?}…)")
            }
        }
    }
}
