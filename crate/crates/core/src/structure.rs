//! Stratified probability structures and the law audit.
//!
//! A probability structure is a Heyting-algebra carrier with a De Morgan
//! negation, a distinguished class of elements that carry probability
//! certificates (the "actual" ones), a Boolean subalgebra of "regular"
//! elements inside that class, and a probability map on the certified
//! elements. [`audit`] checks the defining laws over a finite sample:
//! strictness, involution, monotonicity, modularity, downward closure of
//! null sets, closure under disjoint joins and complements, and the
//! Boolean-algebra requirement on the regular fragment.
//!
//! Three executable instances:
//! [`DensityStructure`] (potential events under natural density, where
//! certificates are moduli of convergence and equality is budgeted),
//! [`FiniteKolmogorov`] (all subsets of a finite weighted space, exact),
//! and [`FiniteFuzzy`] (rational-valued fuzzy subsets with min/max/
//! 1−φ and the Gödel implication, exact). [`FiniteKolmogorov`] supports
//! deliberate probability overrides so the audit can be shown to catch a
//! seeded fault.

use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::actual::{disjoint_union, null_subevent, ActualEvent, CheckBudget};
use crate::event::PotentialEvent;
use crate::rational::{rat_u, Rational};
use crate::real::BishopReal;
use crate::regular::RegularEvent;
use crate::verdict::Verdict;

/// A probability value: exact rational, or a Bishop real whose n-th
/// approximant is within 1/n. Arithmetic stays exact as long as both
/// sides are exact.
#[derive(Clone)]
pub enum ProbValue {
    Exact(Rational),
    Approx(BishopReal),
}

impl ProbValue {
    pub fn approximant(&self, n: u64) -> Rational {
        match self {
            ProbValue::Exact(q) => q.clone(),
            ProbValue::Approx(x) => x.approximant(n),
        }
    }

    fn as_real(&self) -> BishopReal {
        match self {
            ProbValue::Exact(q) => BishopReal::from_rational(q.clone()),
            ProbValue::Approx(x) => x.clone(),
        }
    }

    pub fn add(&self, other: &ProbValue) -> ProbValue {
        match (self, other) {
            (ProbValue::Exact(a), ProbValue::Exact(b)) => ProbValue::Exact(a + b),
            _ => ProbValue::Approx(self.as_real().add(&other.as_real())),
        }
    }

    pub fn one_minus(&self) -> ProbValue {
        match self {
            ProbValue::Exact(q) => ProbValue::Exact(Rational::one() - q),
            ProbValue::Approx(x) => ProbValue::Approx(x.one_minus()),
        }
    }

    /// Equality check at the given precision. Two exact values compare
    /// outright (an unequal pair is refuted at the least index whose
    /// tolerance 2/n excludes the difference, even past `precision`);
    /// anything else goes through Bishop-equality refutation.
    pub fn eq_within(&self, other: &ProbValue, precision: u64) -> Verdict<u64> {
        match (self, other) {
            (ProbValue::Exact(a), ProbValue::Exact(b)) => {
                if a == b {
                    Verdict::ConsistentUpTo(precision)
                } else {
                    let d = (a - b).abs();
                    let n0 = (Rational::from_integer(2.into()) / d).floor();
                    Verdict::RefutedAt(big_to_u64(n0.numer()) + 1)
                }
            }
            _ => self.as_real().eq_refute_upto(&other.as_real(), precision),
        }
    }

    /// Order check at the given precision, same conventions.
    pub fn leq_within(&self, other: &ProbValue, precision: u64) -> Verdict<u64> {
        match (self, other) {
            (ProbValue::Exact(a), ProbValue::Exact(b)) => {
                if a <= b {
                    Verdict::ConsistentUpTo(precision)
                } else {
                    let n0 = (Rational::one() / (a - b)).floor();
                    Verdict::RefutedAt(big_to_u64(n0.numer()) + 1)
                }
            }
            _ => self.as_real().leq_refute_upto(&other.as_real(), precision),
        }
    }
}

fn big_to_u64(n: &num::BigInt) -> u64 {
    use num::ToPrimitive;
    n.to_u64().unwrap_or(u64::MAX)
}

impl fmt::Debug for ProbValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbValue::Exact(q) => write!(f, "Exact({q})"),
            ProbValue::Approx(x) => write!(f, "Approx({:?})", x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid membership degree: {0}")]
    InvalidDegree(String),
}

/// The stratified contract: a bounded carrier with meet/join/implication
/// and a De Morgan complement, certificate-based membership for the
/// probability-carrying ("actual") elements and for the regular Boolean
/// kernel, and a probability map on certified elements.
///
/// `leq` and `equal` are decision procedures as far as the instance can
/// afford: exact for finite instances and for regular presentations,
/// budgeted prefix checks otherwise.
pub trait ProbabilityStructure {
    type Elem: Clone;

    fn name(&self) -> String;
    fn describe(&self, e: &Self::Elem) -> String;

    fn bot(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn imp(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn complement(&self, a: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn is_regular(&self, e: &Self::Elem) -> bool;
    fn is_actual(&self, e: &Self::Elem) -> bool;
    /// Probability of a certified element; None when `e` carries no
    /// certificate.
    fn prob(&self, e: &Self::Elem) -> Option<ProbValue>;

    /// Produce the certificate for `sub` granted by a null superset:
    /// callers have already established ℙ(null_sup) = 0 (to tolerance)
    /// and sub ≤ null_sup.
    fn certify_null_sub(&self, sub: &Self::Elem, null_sup: &Self::Elem) -> Option<Self::Elem>;

    /// Produce the certified join of two disjoint certified elements.
    /// The default covers instances where joins stay certified by
    /// construction.
    fn certify_disjoint_join(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        let j = self.join(a, b);
        self.is_actual(&j).then_some(j)
    }
}

/// The audited laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// ℙ(⊥) = 0.
    Strictness,
    /// ℙ(¬e) = 1 − ℙ(e).
    Involution,
    /// e ≤ e′ implies ℙ(e) ≤ ℙ(e′).
    Monotonicity,
    /// ℙ(e ∨ e′) + ℙ(e ∧ e′) = ℙ(e) + ℙ(e′).
    Modularity,
    /// Subelements of null certified elements are certified.
    NullDownward,
    /// Disjoint joins of certified elements are certified.
    DisjointClosure,
    /// Complements of certified elements are certified.
    ComplementClosure,
    /// ⊥, ⊤ regular; regulars closed under ∧, ∨, ¬; Boolean laws hold
    /// on regular elements; regular implies certified.
    RegularSubalgebra,
}

pub const ALL_RULES: [Rule; 8] = [
    Rule::Strictness,
    Rule::Involution,
    Rule::Monotonicity,
    Rule::Modularity,
    Rule::NullDownward,
    Rule::DisjointClosure,
    Rule::ComplementClosure,
    Rule::RegularSubalgebra,
];

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Strictness => "strictness",
            Rule::Involution => "involution",
            Rule::Monotonicity => "monotonicity",
            Rule::Modularity => "modularity",
            Rule::NullDownward => "null-downward",
            Rule::DisjointClosure => "disjoint-closure",
            Rule::ComplementClosure => "complement-closure",
            Rule::RegularSubalgebra => "regular-subalgebra",
        };
        f.write_str(s)
    }
}

/// Outcome for one rule: how many instances were checked and the first
/// violation, if any. Rules whose hypotheses never fire over the sample
/// pass vacuously with `instances` counting only the checks performed.
#[derive(Debug, Clone)]
pub struct AuditRow {
    pub rule: Rule,
    pub instances: u64,
    pub failure: Option<String>,
}

impl AuditRow {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub structure: String,
    pub precision: u64,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(AuditRow::passed)
    }

    pub fn failed_rules(&self) -> Vec<Rule> {
        self.rows.iter().filter(|r| !r.passed()).map(|r| r.rule).collect()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "audit: {} (precision {})", self.structure, self.precision)?;
        writeln!(f, "{:<22}{:>10}  {:<8}witness", "rule", "instances", "verdict")?;
        for row in &self.rows {
            writeln!(
                f,
                "{:<22}{:>10}  {:<8}{}",
                row.rule.to_string(),
                row.instances,
                if row.passed() { "PASS" } else { "FAIL" },
                row.failure.as_deref().unwrap_or("-"),
            )?;
        }
        Ok(())
    }
}

struct RuleCheck {
    instances: u64,
    failure: Option<String>,
}

impl RuleCheck {
    fn new() -> Self {
        RuleCheck { instances: 0, failure: None }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(witness());
        }
    }

    fn into_row(self, rule: Rule) -> AuditRow {
        AuditRow { rule, instances: self.instances, failure: self.failure }
    }
}

/// Check every rule over the sample at the given precision.
///
/// ⊥ and ⊤ participate only in the rules that name them (strictness,
/// the regular-subalgebra membership checks); put them in the sample to
/// include them in the quantified rules. Probability-level rules skip
/// element combinations that lack certificates: a skipped combination is
/// not counted as an instance. Hypothesis-gated rules (monotonicity,
/// null-downward, disjoint-closure) count only combinations whose
/// hypothesis survives the gate.
pub fn audit<S: ProbabilityStructure>(s: &S, sample: &[S::Elem], precision: u64) -> AuditReport {
    assert!(precision >= 1, "precision is a positive approximant index");
    let zero = ProbValue::Exact(Rational::zero());
    let probs: Vec<Option<ProbValue>> = sample.iter().map(|e| s.prob(e)).collect();

    let mut strictness = RuleCheck::new();
    match s.prob(&s.bot()) {
        Some(p) => strictness.check(p.eq_within(&zero, precision).is_consistent(), || {
            format!("P(bot) = {}, expected 0", p.approximant(precision))
        }),
        None => strictness.check(false, || "bot carries no probability certificate".into()),
    }

    let mut involution = RuleCheck::new();
    for (e, pe) in sample.iter().zip(&probs) {
        let not_e = s.complement(e);
        if let (Some(pe), Some(pn)) = (pe, s.prob(&not_e)) {
            involution.check(pn.eq_within(&pe.one_minus(), precision).is_consistent(), || {
                format!(
                    "P(not {}) = {} but 1 - P = {}",
                    s.describe(e),
                    pn.approximant(precision),
                    pe.one_minus().approximant(precision)
                )
            });
        }
    }

    let mut monotonicity = RuleCheck::new();
    for (i, a) in sample.iter().enumerate() {
        for (j, b) in sample.iter().enumerate() {
            if i == j || !s.leq(a, b) {
                continue;
            }
            if let (Some(pa), Some(pb)) = (&probs[i], &probs[j]) {
                monotonicity.check(pa.leq_within(pb, precision).is_consistent(), || {
                    format!(
                        "{} <= {} but P = {} vs {}",
                        s.describe(a),
                        s.describe(b),
                        pa.approximant(precision),
                        pb.approximant(precision)
                    )
                });
            }
        }
    }

    let mut modularity = RuleCheck::new();
    for (i, a) in sample.iter().enumerate() {
        for (j, b) in sample.iter().enumerate().skip(i) {
            let join_p = s.prob(&s.join(a, b));
            let meet_p = s.prob(&s.meet(a, b));
            if let (Some(pa), Some(pb), Some(pj), Some(pm)) = (&probs[i], &probs[j], join_p, meet_p)
            {
                let lhs = pj.add(&pm);
                let rhs = pa.add(pb);
                modularity.check(lhs.eq_within(&rhs, precision).is_consistent(), || {
                    format!(
                        "P(join)+P(meet) = {} but P({})+P({}) = {}",
                        lhs.approximant(precision),
                        s.describe(a),
                        s.describe(b),
                        rhs.approximant(precision)
                    )
                });
            }
        }
    }

    let mut null_downward = RuleCheck::new();
    for (i, sup) in sample.iter().enumerate() {
        let Some(psup) = &probs[i] else { continue };
        if !s.is_actual(sup) || !psup.eq_within(&zero, precision).is_consistent() {
            continue;
        }
        for sub in sample {
            if !s.leq(sub, sup) {
                continue;
            }
            let cert = s.certify_null_sub(sub, sup);
            null_downward.check(cert.as_ref().is_some_and(|c| s.is_actual(c)), || {
                format!(
                    "{} <= null {} but no certificate was produced",
                    s.describe(sub),
                    s.describe(sup)
                )
            });
        }
    }

    let mut disjoint = RuleCheck::new();
    for (i, a) in sample.iter().enumerate() {
        for b in sample.iter().skip(i) {
            if !s.is_actual(a) || !s.is_actual(b) || !s.equal(&s.meet(a, b), &s.bot()) {
                continue;
            }
            let cert = s.certify_disjoint_join(a, b);
            disjoint.check(cert.as_ref().is_some_and(|c| s.is_actual(c)), || {
                format!(
                    "{} and {} are disjoint but their join got no certificate",
                    s.describe(a),
                    s.describe(b)
                )
            });
        }
    }

    let mut compl = RuleCheck::new();
    for e in sample {
        if !s.is_actual(e) {
            continue;
        }
        compl.check(s.is_actual(&s.complement(e)), || {
            format!("complement of {} lost its certificate", s.describe(e))
        });
    }

    let mut regular = RuleCheck::new();
    regular.check(s.is_regular(&s.bot()), || "bot is not regular".into());
    regular.check(s.is_regular(&s.top()), || "top is not regular".into());
    for e in sample {
        if s.is_regular(e) {
            regular.check(s.is_actual(e), || {
                format!("{} is regular but not certified", s.describe(e))
            });
        }
    }
    let regs: Vec<&S::Elem> = sample.iter().filter(|e| s.is_regular(e)).collect();
    for &r in &regs {
        let nr = s.complement(r);
        regular.check(s.is_regular(&nr), || {
            format!("complement of regular {} is not regular", s.describe(r))
        });
        regular.check(s.equal(&s.complement(&nr), r), || {
            format!("double complement of {} moved", s.describe(r))
        });
        regular.check(s.equal(&s.meet(r, &nr), &s.bot()), || {
            format!("{} meets its complement above bot", s.describe(r))
        });
        regular.check(s.equal(&s.join(r, &nr), &s.top()), || {
            format!("{} joins its complement below top", s.describe(r))
        });
    }
    for &r in &regs {
        for &q in &regs {
            let m = s.meet(r, q);
            let j = s.join(r, q);
            regular.check(s.is_regular(&m) && s.is_regular(&j), || {
                format!("meet/join of {} and {} left the regulars", s.describe(r), s.describe(q))
            });
            regular.check(
                s.equal(&s.complement(&m), &s.join(&s.complement(r), &s.complement(q)))
                    && s.equal(&s.complement(&j), &s.meet(&s.complement(r), &s.complement(q))),
                || format!("De Morgan fails on {} and {}", s.describe(r), s.describe(q)),
            );
            regular.check(
                s.equal(&s.join(r, &m), r) && s.equal(&s.meet(r, &j), r),
                || format!("absorption fails on {} and {}", s.describe(r), s.describe(q)),
            );
        }
    }
    // distributivity is cubic; cap the triple set
    let dist = &regs[..regs.len().min(6)];
    for &r in dist {
        for &q in dist {
            for &t in dist {
                regular.check(
                    s.equal(&s.meet(r, &s.join(q, t)), &s.join(&s.meet(r, q), &s.meet(r, t))),
                    || {
                        format!(
                            "distributivity fails on {}, {}, {}",
                            s.describe(r),
                            s.describe(q),
                            s.describe(t)
                        )
                    },
                );
            }
        }
    }

    AuditReport {
        structure: s.name(),
        precision,
        rows: vec![
            strictness.into_row(Rule::Strictness),
            involution.into_row(Rule::Involution),
            monotonicity.into_row(Rule::Monotonicity),
            modularity.into_row(Rule::Modularity),
            null_downward.into_row(Rule::NullDownward),
            disjoint.into_row(Rule::DisjointClosure),
            compl.into_row(Rule::ComplementClosure),
            regular.into_row(Rule::RegularSubalgebra),
        ],
    }
}

/// Carrier element for [`DensityStructure`]: a potential event together
/// with whatever certificates it has. A regular presentation always
/// brings a modulus along; a bare modulus certifies probability without
/// a closed form; an opaque stream has neither.
#[derive(Clone)]
pub struct DensityElem {
    event: PotentialEvent,
    regular: Option<RegularEvent>,
    actual: Option<ActualEvent>,
}

impl DensityElem {
    pub fn from_regular(r: RegularEvent) -> DensityElem {
        let r = r.canonical();
        DensityElem { event: r.to_potential(), actual: Some(r.to_actual()), regular: Some(r) }
    }

    pub fn from_actual(a: ActualEvent) -> DensityElem {
        DensityElem { event: a.event().clone(), regular: None, actual: Some(a) }
    }

    pub fn opaque(event: PotentialEvent) -> DensityElem {
        DensityElem { event, regular: None, actual: None }
    }

    pub fn event(&self) -> &PotentialEvent {
        &self.event
    }

    pub fn regular_form(&self) -> Option<&RegularEvent> {
        self.regular.as_ref()
    }

    pub fn actual_form(&self) -> Option<&ActualEvent> {
        self.actual.as_ref()
    }
}

impl fmt::Debug for DensityElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityElem")
            .field("regular", &self.regular)
            .field("actual", &self.actual.is_some())
            .finish()
    }
}

/// Potential events under natural density. Operations propagate
/// certificates where the theory licenses it: regular presentations are
/// closed under everything, moduli survive complement (and disjoint
/// joins via [`ProbabilityStructure::certify_disjoint_join`]), and
/// nothing else invents a certificate. Order and equality are exact on
/// regular pairs and prefix-budgeted otherwise.
pub struct DensityStructure {
    budget: CheckBudget,
}

impl DensityStructure {
    pub fn new() -> DensityStructure {
        DensityStructure { budget: CheckBudget::default() }
    }

    pub fn with_budget(budget: CheckBudget) -> DensityStructure {
        DensityStructure { budget }
    }
}

impl Default for DensityStructure {
    fn default() -> Self {
        Self::new()
    }
}

impl ProbabilityStructure for DensityStructure {
    type Elem = DensityElem;

    fn name(&self) -> String {
        "natural-density".into()
    }

    fn describe(&self, e: &DensityElem) -> String {
        match (&e.regular, &e.actual) {
            (Some(r), _) => r.to_string(),
            (None, Some(a)) => format!("event with modulus {}", a.modulus()),
            (None, None) => "uncertified event".into(),
        }
    }

    fn bot(&self) -> DensityElem {
        DensityElem::from_regular(RegularEvent::from_bits(&[], &[0]))
    }

    fn top(&self) -> DensityElem {
        DensityElem::from_regular(RegularEvent::from_bits(&[], &[1]))
    }

    fn meet(&self, a: &DensityElem, b: &DensityElem) -> DensityElem {
        match (&a.regular, &b.regular) {
            (Some(ra), Some(rb)) => DensityElem::from_regular(ra.and(rb)),
            _ => DensityElem::opaque(a.event.and(&b.event)),
        }
    }

    fn join(&self, a: &DensityElem, b: &DensityElem) -> DensityElem {
        match (&a.regular, &b.regular) {
            (Some(ra), Some(rb)) => DensityElem::from_regular(ra.or(rb)),
            _ => DensityElem::opaque(a.event.or(&b.event)),
        }
    }

    fn imp(&self, a: &DensityElem, b: &DensityElem) -> DensityElem {
        match (&a.regular, &b.regular) {
            (Some(ra), Some(rb)) => DensityElem::from_regular(ra.complement().or(rb)),
            _ => DensityElem::opaque(a.event.implies(&b.event)),
        }
    }

    fn complement(&self, a: &DensityElem) -> DensityElem {
        DensityElem {
            event: a.event.complement(),
            regular: a.regular.as_ref().map(RegularEvent::complement),
            actual: a.actual.as_ref().map(ActualEvent::complement),
        }
    }

    fn leq(&self, a: &DensityElem, b: &DensityElem) -> bool {
        match (&a.regular, &b.regular) {
            (Some(ra), Some(rb)) => ra.and(rb).equivalent(ra),
            _ => a.event.leq_upto(&b.event, self.budget.prefix_bits).is_consistent(),
        }
    }

    fn equal(&self, a: &DensityElem, b: &DensityElem) -> bool {
        match (&a.regular, &b.regular) {
            (Some(ra), Some(rb)) => ra.equivalent(rb),
            _ => a.event.agree_upto(&b.event, self.budget.prefix_bits).is_consistent(),
        }
    }

    fn is_regular(&self, e: &DensityElem) -> bool {
        e.regular.is_some()
    }

    fn is_actual(&self, e: &DensityElem) -> bool {
        e.actual.is_some()
    }

    fn prob(&self, e: &DensityElem) -> Option<ProbValue> {
        e.actual.as_ref().map(|a| ProbValue::Approx(a.probability()))
    }

    fn certify_null_sub(&self, sub: &DensityElem, null_sup: &DensityElem) -> Option<DensityElem> {
        let sup = null_sup.actual.as_ref()?;
        null_subevent(sup, &sub.event, self.budget).ok().map(DensityElem::from_actual)
    }

    fn certify_disjoint_join(&self, a: &DensityElem, b: &DensityElem) -> Option<DensityElem> {
        if let (Some(ra), Some(rb)) = (&a.regular, &b.regular) {
            return Some(DensityElem::from_regular(ra.or(rb)));
        }
        match (&a.actual, &b.actual) {
            (Some(aa), Some(ab)) => {
                disjoint_union(aa, ab, self.budget).ok().map(DensityElem::from_actual)
            }
            _ => None,
        }
    }
}

fn validate_weights(labels: &[String], weights: &[Rational]) -> Result<(), StructureError> {
    if labels.len() != weights.len() {
        return Err(StructureError::InvalidWeights(format!(
            "{} points but {} weights",
            labels.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| w.is_negative()) {
        return Err(StructureError::InvalidWeights(format!("negative weight {w}")));
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(StructureError::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// A subset of a finite space, as a bitmask over its points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset(pub u32);

/// All subsets of a finite weighted point set, with exact rational
/// probabilities. Every subset is regular and certified; all laws hold
/// with exact equality, unless a probability override seeds a fault.
pub struct FiniteKolmogorov {
    labels: Vec<String>,
    weights: Vec<Rational>,
    overrides: Vec<(Subset, Rational)>,
}

impl FiniteKolmogorov {
    pub fn new<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
        weights: Vec<Rational>,
    ) -> Result<FiniteKolmogorov, StructureError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert!(labels.len() <= 32, "point sets are capped at 32");
        validate_weights(&labels, &weights)?;
        Ok(FiniteKolmogorov { labels, weights, overrides: Vec::new() })
    }

    pub fn uniform<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
    ) -> Result<FiniteKolmogorov, StructureError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len() as u64;
        let w = vec![rat_u(1, n.max(1)); labels.len()];
        FiniteKolmogorov::new(labels, w)
    }

    /// Force ℙ of one subset to an arbitrary value. This deliberately
    /// breaks the measure so audits have a fault to find.
    pub fn with_prob_override(mut self, subset: Subset, value: Rational) -> FiniteKolmogorov {
        self.overrides.push((subset, value));
        self
    }

    pub fn subset(&self, members: &[&str]) -> Subset {
        let mut mask = 0u32;
        for m in members {
            let i = self
                .labels
                .iter()
                .position(|l| l == m)
                .unwrap_or_else(|| panic!("unknown point {m:?}"));
            mask |= 1 << i;
        }
        Subset(mask)
    }

    pub fn all_subsets(&self) -> Vec<Subset> {
        (0..(1u32 << self.labels.len())).map(Subset).collect()
    }

    fn full(&self) -> u32 {
        (1u32 << self.labels.len()) - 1
    }
}

impl ProbabilityStructure for FiniteKolmogorov {
    type Elem = Subset;

    fn name(&self) -> String {
        format!("finite-kolmogorov over {{{}}}", self.labels.join(", "))
    }

    fn describe(&self, e: &Subset) -> String {
        if e.0 == 0 {
            return "empty".into();
        }
        let members: Vec<&str> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(i, _)| e.0 >> i & 1 == 1)
            .map(|(_, l)| l.as_str())
            .collect();
        format!("{{{}}}", members.join(", "))
    }

    fn bot(&self) -> Subset {
        Subset(0)
    }

    fn top(&self) -> Subset {
        Subset(self.full())
    }

    fn meet(&self, a: &Subset, b: &Subset) -> Subset {
        Subset(a.0 & b.0)
    }

    fn join(&self, a: &Subset, b: &Subset) -> Subset {
        Subset(a.0 | b.0)
    }

    fn imp(&self, a: &Subset, b: &Subset) -> Subset {
        Subset((!a.0 | b.0) & self.full())
    }

    fn complement(&self, a: &Subset) -> Subset {
        Subset(!a.0 & self.full())
    }

    fn leq(&self, a: &Subset, b: &Subset) -> bool {
        a.0 & !b.0 == 0
    }

    fn equal(&self, a: &Subset, b: &Subset) -> bool {
        a == b
    }

    fn is_regular(&self, _e: &Subset) -> bool {
        true
    }

    fn is_actual(&self, _e: &Subset) -> bool {
        true
    }

    fn prob(&self, e: &Subset) -> Option<ProbValue> {
        if let Some((_, v)) = self.overrides.iter().rev().find(|(s, _)| s == e) {
            return Some(ProbValue::Exact(v.clone()));
        }
        let total = self
            .weights
            .iter()
            .enumerate()
            .filter(|(i, _)| e.0 >> i & 1 == 1)
            .map(|(_, w)| w)
            .sum();
        Some(ProbValue::Exact(total))
    }

    fn certify_null_sub(&self, sub: &Subset, _null_sup: &Subset) -> Option<Subset> {
        Some(*sub)
    }
}

/// A finite point set with weights, carrying rational-valued fuzzy
/// subsets.
#[derive(Debug, Clone)]
pub struct FiniteFuzzySpace {
    labels: Vec<String>,
    weights: Vec<Rational>,
}

impl FiniteFuzzySpace {
    pub fn new<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
        weights: Vec<Rational>,
    ) -> Result<FiniteFuzzySpace, StructureError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        validate_weights(&labels, &weights)?;
        Ok(FiniteFuzzySpace { labels, weights })
    }

    pub fn uniform<L: Into<String>>(
        labels: impl IntoIterator<Item = L>,
    ) -> Result<FiniteFuzzySpace, StructureError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len() as u64;
        let w = vec![rat_u(1, n.max(1)); labels.len()];
        FiniteFuzzySpace::new(labels, w)
    }

    pub fn points(&self) -> usize {
        self.labels.len()
    }
}

/// Fuzzy subsets of a finite weighted space: meet is pointwise min, join
/// pointwise max, complement 1−φ (De Morgan, not Heyting), implication
/// the Gödel residuum. Every element is certified with exact probability
/// Σ wᵢ·φᵢ; the regular kernel is the crisp (0/1-valued) subsets, which
/// are exactly the elements whose De Morgan complement agrees with their
/// Heyting complement φ → ⊥.
pub struct FiniteFuzzy {
    space: FiniteFuzzySpace,
}

impl FiniteFuzzy {
    pub fn new(space: FiniteFuzzySpace) -> FiniteFuzzy {
        FiniteFuzzy { space }
    }

    /// Validated element constructor: one degree per point, all in
    /// [0,1].
    pub fn element(&self, degrees: Vec<Rational>) -> Result<Vec<Rational>, StructureError> {
        if degrees.len() != self.space.points() {
            return Err(StructureError::InvalidDegree(format!(
                "{} degrees for {} points",
                degrees.len(),
                self.space.points()
            )));
        }
        if let Some(d) = degrees.iter().find(|d| d.is_negative() || **d > Rational::one()) {
            return Err(StructureError::InvalidDegree(format!("{d} is outside [0,1]")));
        }
        Ok(degrees)
    }

    pub fn crisp(&self, members: &[&str]) -> Vec<Rational> {
        let mut degrees = vec![Rational::zero(); self.space.points()];
        for m in members {
            let i = self
                .space
                .labels
                .iter()
                .position(|l| l == m)
                .unwrap_or_else(|| panic!("unknown point {m:?}"));
            degrees[i] = Rational::one();
        }
        degrees
    }
}

impl ProbabilityStructure for FiniteFuzzy {
    type Elem = Vec<Rational>;

    fn name(&self) -> String {
        format!("finite-fuzzy over {{{}}}", self.space.labels.join(", "))
    }

    fn describe(&self, e: &Vec<Rational>) -> String {
        let parts: Vec<String> = self
            .space
            .labels
            .iter()
            .zip(e)
            .map(|(l, d)| format!("{l}:{d}"))
            .collect();
        format!("({})", parts.join(", "))
    }

    fn bot(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.space.points()]
    }

    fn top(&self) -> Vec<Rational> {
        vec![Rational::one(); self.space.points()]
    }

    fn meet(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x.min(y).clone()).collect()
    }

    fn join(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x.max(y).clone()).collect()
    }

    fn imp(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        a.iter()
            .zip(b)
            .map(|(x, y)| if x <= y { Rational::one() } else { y.clone() })
            .collect()
    }

    fn complement(&self, a: &Vec<Rational>) -> Vec<Rational> {
        a.iter().map(|x| Rational::one() - x).collect()
    }

    fn leq(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> bool {
        a.iter().zip(b).all(|(x, y)| x <= y)
    }

    fn equal(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> bool {
        a == b
    }

    fn is_regular(&self, e: &Vec<Rational>) -> bool {
        e.iter().all(|d| d.is_zero() || d.is_one())
    }

    fn is_actual(&self, _e: &Vec<Rational>) -> bool {
        true
    }

    fn prob(&self, e: &Vec<Rational>) -> Option<ProbValue> {
        Some(ProbValue::Exact(self.space.weights.iter().zip(e).map(|(w, d)| w * d).sum()))
    }

    fn certify_null_sub(&self, sub: &Vec<Rational>, _null_sup: &Vec<Rational>) -> Option<Vec<Rational>> {
        Some(sub.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn probvalue_exact_arithmetic() {
        let half = ProbValue::Exact(rat(1, 2));
        let third = ProbValue::Exact(rat(1, 3));
        assert_eq!(half.add(&third).approximant(1), rat(5, 6));
        assert_eq!(half.one_minus().approximant(1), rat(1, 2));
        assert!(half.eq_within(&ProbValue::Exact(rat(1, 2)), 4).is_consistent());
        // |1/2 - 1/3| = 1/6; tolerance 2/n excludes it first at n = 13
        assert_eq!(half.eq_within(&third, 4), Verdict::RefutedAt(13));
        assert!(third.leq_within(&half, 4).is_consistent());
        // excess 1/6 > 1/n first at n = 7
        assert_eq!(half.leq_within(&third, 4), Verdict::RefutedAt(7));
    }

    #[test]
    fn probvalue_mixed_comparisons() {
        let exact = ProbValue::Exact(rat(1, 2));
        let approx = ProbValue::Approx(BishopReal::new(|_| rat(1, 2)));
        assert!(exact.eq_within(&approx, 64).is_consistent());
        let off = ProbValue::Approx(BishopReal::new(|_| rat(1, 3)));
        assert!(exact.eq_within(&off, 64).is_refuted());
        assert!(off.leq_within(&exact, 64).is_consistent());
        assert!(exact.leq_within(&off, 64).is_refuted());
        // approximate sums stay within Bishop regularity
        let sum = approx.add(&off);
        assert_eq!(sum.approximant(3), rat(5, 6));
    }

    #[test]
    fn kolmogorov_weight_guards() {
        let bad = FiniteKolmogorov::new(vec!["a", "b"], vec![rat(1, 2), rat(1, 3)]);
        assert!(matches!(bad, Err(StructureError::InvalidWeights(_))));
        let neg = FiniteKolmogorov::new(vec!["a", "b"], vec![rat(3, 2), rat(-1, 2)]);
        assert!(matches!(neg, Err(StructureError::InvalidWeights(_))));
        let short = FiniteKolmogorov::new(vec!["a", "b"], vec![Rational::one()]);
        assert!(matches!(short, Err(StructureError::InvalidWeights(_))));
    }

    #[test]
    fn kolmogorov_probabilities() {
        let d6 = FiniteKolmogorov::uniform(vec!["1", "2", "3", "4", "5", "6"]).unwrap();
        let evens = d6.subset(&["2", "4", "6"]);
        let p = |s: &Subset| match d6.prob(s).unwrap() {
            ProbValue::Exact(q) => q,
            _ => unreachable!(),
        };
        assert_eq!(p(&evens), rat(1, 2));
        assert_eq!(p(&d6.bot()), rat(0, 1));
        assert_eq!(p(&d6.top()), rat(1, 1));
    }

    #[test]
    fn kolmogorov_audit_passes_exhaustively() {
        let s =
            FiniteKolmogorov::new(vec!["a", "b", "c"], vec![rat(1, 2), rat(1, 3), rat(1, 6)])
                .unwrap();
        let report = audit(&s, &s.all_subsets(), 16);
        assert!(report.all_passed(), "{report}");
        // every rule saw work: the sample includes bot and top
        for row in &report.rows {
            assert!(row.instances > 0, "{} never fired", row.rule);
        }
    }

    #[test]
    fn kolmogorov_fault_fails_exactly_strictness() {
        let s = FiniteKolmogorov::uniform(vec!["a", "b"])
            .unwrap()
            .with_prob_override(Subset(0), rat(1, 10));
        let sample = vec![s.subset(&["a"])];
        let report = audit(&s, &sample, 16);
        assert_eq!(report.failed_rules(), vec![Rule::Strictness]);
        let row = &report.rows[0];
        assert!(row.failure.as_deref().unwrap().contains("1/10"), "{report}");
    }

    #[test]
    fn fuzzy_degree_guards() {
        let space = FiniteFuzzySpace::uniform(vec!["a", "b"]).unwrap();
        let s = FiniteFuzzy::new(space);
        assert!(matches!(
            s.element(vec![rat(3, 2), rat(0, 1)]),
            Err(StructureError::InvalidDegree(_))
        ));
        assert!(matches!(
            s.element(vec![rat(-1, 4), rat(0, 1)]),
            Err(StructureError::InvalidDegree(_))
        ));
        assert!(matches!(s.element(vec![rat(1, 2)]), Err(StructureError::InvalidDegree(_))));
        assert!(s.element(vec![rat(1, 2), rat(1, 1)]).is_ok());
    }

    #[test]
    fn fuzzy_weighted_means() {
        let s = FiniteFuzzy::new(FiniteFuzzySpace::uniform(vec!["a", "b"]).unwrap());
        let phi = s.element(vec![rat(1, 2), rat(1, 1)]).unwrap();
        let p = |e: &Vec<Rational>| match s.prob(e).unwrap() {
            ProbValue::Exact(q) => q,
            _ => unreachable!(),
        };
        assert_eq!(p(&phi), rat(3, 4));
        let not_phi = s.complement(&phi);
        assert_eq!(not_phi, vec![rat(1, 2), rat(0, 1)]);
        assert_eq!(p(&not_phi), rat(1, 4));
    }

    fn degree_grid() -> Vec<Rational> {
        vec![rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)]
    }

    #[test]
    fn fuzzy_crispness_is_the_de_morgan_heyting_agreement() {
        let s = FiniteFuzzy::new(FiniteFuzzySpace::uniform(vec!["a", "b"]).unwrap());
        for x in degree_grid() {
            for y in degree_grid() {
                let phi = s.element(vec![x.clone(), y.clone()]).unwrap();
                let crisp = s.is_regular(&phi);
                let heyting = s.imp(&phi, &s.bot());
                assert_eq!(
                    crisp,
                    s.equal(&s.complement(&phi), &heyting),
                    "crispness mismatch at ({x}, {y})"
                );
            }
        }
    }

    #[test]
    fn fuzzy_de_morgan_algebra_laws() {
        let s = FiniteFuzzy::new(FiniteFuzzySpace::uniform(vec!["a", "b"]).unwrap());
        let grid = degree_grid();
        for x in &grid {
            for y in &grid {
                let phi = vec![x.clone(), y.clone()];
                assert_eq!(s.complement(&s.complement(&phi)), phi);
                for u in &grid {
                    for v in &grid {
                        let psi = vec![u.clone(), v.clone()];
                        assert_eq!(
                            s.complement(&s.meet(&phi, &psi)),
                            s.join(&s.complement(&phi), &s.complement(&psi))
                        );
                        assert_eq!(
                            s.complement(&s.join(&phi, &psi)),
                            s.meet(&s.complement(&phi), &s.complement(&psi))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fuzzy_goedel_implication_is_the_residuum() {
        // min(z, x) <= y iff z <= (x -> y), pointwise
        let s = FiniteFuzzy::new(FiniteFuzzySpace::uniform(vec!["a"]).unwrap());
        for x in degree_grid() {
            for y in degree_grid() {
                for z in degree_grid() {
                    let lhs = s.leq(
                        &s.meet(&vec![z.clone()], &vec![x.clone()]),
                        &vec![y.clone()],
                    );
                    let rhs = s.leq(&vec![z.clone()], &s.imp(&vec![x.clone()], &vec![y.clone()]));
                    assert_eq!(lhs, rhs, "residuation fails at ({x}, {y}, {z})");
                }
            }
        }
    }

    #[test]
    fn fuzzy_audit_passes_on_the_degree_grid() {
        let s = FiniteFuzzy::new(FiniteFuzzySpace::uniform(vec!["a", "b"]).unwrap());
        let mut sample = Vec::new();
        for x in degree_grid() {
            for y in degree_grid() {
                sample.push(s.element(vec![x.clone(), y.clone()]).unwrap());
            }
        }
        let report = audit(&s, &sample, 16);
        assert!(report.all_passed(), "{report}");
    }

    fn reg(pre: &[u8], per: &[u8]) -> DensityElem {
        DensityElem::from_regular(RegularEvent::from_bits(pre, per))
    }

    #[test]
    fn density_certificates_propagate() {
        let s = DensityStructure::new();
        let a = reg(&[], &[1, 0]);
        let b = reg(&[1], &[1, 1, 0]);
        for e in [s.meet(&a, &b), s.join(&a, &b), s.imp(&a, &b), s.complement(&a)] {
            assert!(s.is_regular(&e) && s.is_actual(&e));
        }
        let opaque = DensityElem::opaque(crate::omniscience::oscillator());
        assert!(!s.is_regular(&opaque) && !s.is_actual(&opaque));
        assert!(s.prob(&opaque).is_none());
        let mixed = s.meet(&a, &opaque);
        assert!(!s.is_regular(&mixed) && !s.is_actual(&mixed));
        // a bare modulus survives complement but not meet
        let actual_only = DensityElem::from_actual(RegularEvent::from_bits(&[], &[1, 0]).to_actual());
        assert!(!s.is_regular(&actual_only) && s.is_actual(&actual_only));
        assert!(s.is_actual(&s.complement(&actual_only)));
        assert!(!s.is_actual(&s.meet(&actual_only, &a)));
    }

    #[test]
    fn density_order_and_equality() {
        let s = DensityStructure::new();
        assert!(s.leq(&reg(&[], &[1, 0]), &s.top()));
        assert!(!s.leq(&s.top(), &reg(&[], &[1, 0])));
        assert!(s.equal(&reg(&[1, 0], &[1, 0]), &reg(&[], &[1, 0])));
        assert!(!s.equal(&reg(&[], &[1, 0]), &reg(&[], &[0, 1])));
        // budgeted path for uncertified operands
        let osc = DensityElem::opaque(crate::omniscience::oscillator());
        assert!(s.leq(&s.bot(), &osc));
        assert!(!s.leq(&osc, &s.bot()));
    }

    #[test]
    fn density_audit_passes_on_a_regular_sample() {
        let s = DensityStructure::new();
        let sample = vec![
            s.bot(),
            s.top(),
            reg(&[], &[1, 0]),
            reg(&[1], &[1, 0]),
            reg(&[], &[0, 1]),
            reg(&[1], &[0]),
            reg(&[0, 1], &[1, 1, 0]),
            reg(&[], &[1, 1, 0]),
        ];
        let report = audit(&s, &sample, 32);
        assert!(report.all_passed(), "{report}");
        for row in &report.rows {
            assert!(row.instances > 0, "{} never fired:\n{report}", row.rule);
        }
    }

    #[test]
    fn density_null_downward_produces_real_certificates() {
        let s = DensityStructure::new();
        // 1,0,0,0,…: density zero with a witness, still above bot
        let null_sup = reg(&[1], &[0]);
        let cert = s.certify_null_sub(&s.bot(), &null_sup).unwrap();
        assert!(s.is_actual(&cert));
        // the certified modulus is the superset's slowed by 6
        let m = cert.actual_form().unwrap().modulus().to_string();
        assert!(m.contains('n'), "unexpected modulus {m}");
        // refutation: the superset is not null
        assert!(s.certify_null_sub(&s.bot(), &reg(&[], &[1, 0])).is_none());
    }

    #[test]
    fn density_disjoint_joins_are_certified() {
        let s = DensityStructure::new();
        let odd = reg(&[], &[1, 0]);
        let even = reg(&[0], &[1, 0]);
        assert!(s.equal(&s.meet(&odd, &even), &s.bot()));
        let j = s.certify_disjoint_join(&odd, &even).unwrap();
        assert!(s.is_regular(&j));
        assert!(s.equal(&j, &s.top()));
        // the actual-only route goes through the union constructor
        let a = DensityElem::from_actual(RegularEvent::from_bits(&[], &[1, 0]).to_actual());
        let b = DensityElem::from_actual(RegularEvent::from_bits(&[0], &[1, 0]).to_actual());
        let ab = s.certify_disjoint_join(&a, &b).unwrap();
        assert!(!s.is_regular(&ab) && s.is_actual(&ab));
        // and refuses overlapping operands
        assert!(s.certify_disjoint_join(&a, &a).is_none());
    }

    #[test]
    fn density_audit_tolerates_uncertified_sample_members() {
        let s = DensityStructure::new();
        let sample = vec![
            s.bot(),
            reg(&[], &[1, 0]),
            DensityElem::opaque(crate::omniscience::oscillator()),
        ];
        let report = audit(&s, &sample, 16);
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn audit_report_renders_a_table() {
        let s = FiniteKolmogorov::uniform(vec!["a", "b"])
            .unwrap()
            .with_prob_override(Subset(0), rat(1, 10));
        let report = audit(&s, &[s.subset(&["a"])], 16);
        let text = report.to_string();
        assert!(text.contains("strictness"));
        assert!(text.contains("FAIL"));
        assert!(text.contains("regular-subalgebra"));
        assert!(text.contains("PASS"));
        assert!(text.lines().count() >= 10);
    }
}
