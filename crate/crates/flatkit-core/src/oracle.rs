//! Brute-force torsion witness search, independent of the basis engine.
//!
//! The main pipeline finds torsion through contraction orders and
//! saturation. This module answers the same question by a method with no
//! shared machinery: exact rational elimination over a degree-truncated
//! slice of the module. A witness `(m, r)` consists of a candidate `m`
//! outside the relation submodule `N` and a base monomial `r` with
//! `r * m` inside `N`, certified by an explicit cofactor combination that
//! can be rechecked by plain polynomial arithmetic. Finding nothing proves
//! nothing: the search is sound but truncated, both by the degree bounds
//! and by trying monomial annihilators only. A torsion class whose
//! annihilator ideal contains no monomial stays invisible here, which is
//! acceptable for a validation oracle whose corpus is chosen to have
//! monomial witnesses.
//!
//! `cross_validate` runs both paths over a corpus and reports agreement.
//! Disagreement handling is one-sided by design: an oracle miss never
//! overrides a machine-verified torsion certificate, while an oracle hit
//! against a `Flat` verdict is always fatal.

use crate::flatness::{first_torsion_power, flat_check, FlatnessProblem, FlatnessStatus};
use crate::ideal_ops::reduced_generators;
use crate::limits::{Budget, Deadline, EngineError, ResourceLimits};
use crate::linalg::{Echelon, Insertion, SparseVec};
use crate::monomial::Monomial;
use crate::polynomial::{Coef, Polynomial};
use crate::presentation::ModulePresentation;
use crate::torsion::{verify_certificate, CertificateTrace, TorsionCertificate};
use crate::variable::VarId;
use crate::vector::FreeVector;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Degree caps for one search. `witness_degree` bounds both the candidate
/// element and the monomial annihilator; `multiplier_degree` bounds the
/// relation multiples spanning the truncated submodule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub witness_degree: u32,
    pub multiplier_degree: u32,
}

impl SearchBounds {
    pub fn new(witness_degree: u32, multiplier_degree: u32) -> Self {
        SearchBounds {
            witness_degree,
            multiplier_degree,
        }
    }

    /// `multiplier_degree = witness_degree + max relation degree`, enough
    /// for any witness whose cofactors have degree at most the witness
    /// degree.
    pub fn recommended(witness_degree: u32, m: &ModulePresentation) -> Self {
        let max_rel = m
            .relations()
            .iter()
            .filter_map(|r| r.total_degree())
            .max()
            .unwrap_or(0);
        SearchBounds {
            witness_degree,
            multiplier_degree: witness_degree + max_rel,
        }
    }

    pub fn raised(&self) -> Self {
        SearchBounds {
            witness_degree: self.witness_degree + 1,
            multiplier_degree: self.multiplier_degree + 2,
        }
    }
}

impl fmt::Display for SearchBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "witness degree {}, multiplier degree {}",
            self.witness_degree, self.multiplier_degree
        )
    }
}

/// How the search certifies that a candidate lies outside the relation
/// submodule.
#[derive(Clone, Copy, Debug)]
pub enum MembershipMode<'a> {
    /// Normal form against a reduced basis of the relations.
    Groebner,
    /// Basis-free: evaluate at the given full-universe point. A candidate is
    /// certified outside when its value escapes the rational span of the
    /// evaluated relations; when it does not escape, the candidate is
    /// skipped, so a poorly chosen point can only cause misses, never bad
    /// witnesses.
    AtPoint(&'a [Coef]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// `AtPoint` coordinates must cover every variable of the universe.
    PointArity { expected: usize, got: usize },
    Engine(EngineError),
}

impl From<EngineError> for OracleError {
    fn from(e: EngineError) -> Self {
        OracleError::Engine(e)
    }
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::PointArity { expected, got } => {
                write!(f, "point has {got} coordinates, expected {expected}")
            }
            OracleError::Engine(e) => write!(f, "{e}"),
        }
    }
}

/// A found witness: `annihilator * element` equals the recorded combination
/// of relations, and `element` was certified outside the relation
/// submodule at search time.
#[derive(Clone, Debug)]
pub struct TorsionWitness {
    pub element: FreeVector,
    /// A monomial in the base variables, as a polynomial.
    pub annihilator: Polynomial,
    /// Cofactors by relation index: `annihilator * element` equals the sum
    /// of `cofactor * relation` over these entries.
    pub combination: Vec<(usize, Polynomial)>,
}

impl TorsionWitness {
    /// Rechecks the witness by arithmetic alone: the cofactor identity, a
    /// proper base-monomial annihilator and a nonzero element. No basis
    /// computation is involved.
    pub fn verify(&self, m: &ModulePresentation) -> bool {
        if self.element.is_zero() {
            return false;
        }
        let base_only = self
            .annihilator
            .supported_within(|id| m.vars().block(id) == crate::variable::Block::Base);
        if !base_only || self.annihilator.is_constant() || self.annihilator.is_zero() {
            return false;
        }
        let lhs = self.element.scale_poly(&self.annihilator);
        let mut rhs = FreeVector::zero(m.rank());
        for (j, cof) in &self.combination {
            let Some(rel) = m.relations().get(*j) else {
                return false;
            };
            rhs = rhs.add(&rel.scale_poly(cof));
        }
        lhs == rhs
    }
}

/// All monomials on `ids` of total degree at most `max_deg`, in ascending
/// (degree, structural) order.
fn monomials_up_to(nvars: usize, ids: &[VarId], max_deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = alloc::vec![0u32; nvars];
    fn rec(
        ids: &[VarId],
        pos: usize,
        left: u32,
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if pos == ids.len() {
            out.push(Monomial::from_exps(exps.clone()));
            return;
        }
        for e in 0..=left {
            exps[ids[pos].0] = e;
            rec(ids, pos + 1, left - e, exps, out);
        }
        exps[ids[pos].0] = 0;
    }
    rec(ids, 0, max_deg, &mut exps, &mut out);
    out.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then(a.cmp(b)));
    out
}

/// Stable dense row ids for `(component, monomial)` pairs, assigned on
/// first sight; the assignment order fixes the elimination order and is
/// deterministic because the search enumerates deterministically.
#[derive(Default)]
struct RowIndexer {
    map: BTreeMap<(usize, Monomial), usize>,
    next: usize,
}

impl RowIndexer {
    fn id(&mut self, comp: usize, mono: &Monomial) -> usize {
        if let Some(&i) = self.map.get(&(comp, mono.clone())) {
            return i;
        }
        let i = self.next;
        self.next += 1;
        self.map.insert((comp, mono.clone()), i);
        i
    }

    fn column(&mut self, v: &FreeVector) -> SparseVec {
        let mut col: SparseVec = Vec::new();
        for (comp, p) in v.entries().iter().enumerate() {
            for (mono, c) in p.terms() {
                col.push((self.id(comp, mono), c.clone()));
            }
        }
        col.sort_by_key(|(r, _)| *r);
        col
    }
}

/// Scales a vector to integer coefficients with content 1 and a positive
/// first display coefficient; returns the scalar applied.
fn normalize_primitive(v: &FreeVector) -> (FreeVector, Coef) {
    let mut denom_lcm = BigInt::one();
    let mut numer_gcd = BigInt::zero();
    for p in v.entries() {
        for (_, c) in p.terms() {
            denom_lcm = denom_lcm.lcm(c.denom());
            numer_gcd = numer_gcd.gcd(c.numer());
        }
    }
    let mut s = if numer_gcd.is_zero() {
        Coef::one()
    } else {
        Coef::new(denom_lcm, numer_gcd)
    };
    let scaled = v.scale(&s);
    let flip = scaled
        .entries()
        .iter()
        .find(|p| !p.is_zero())
        .and_then(|p| p.display_lead())
        .is_some_and(|(_, c)| c.is_negative());
    if flip {
        s = -s;
    }
    (v.scale(&s), s)
}

struct PointChecker {
    span: Echelon,
    point: Vec<Coef>,
}

impl PointChecker {
    /// Evaluating a relation combination at a point lands in the rational
    /// span of the evaluated relations, so a candidate whose value escapes
    /// that span cannot be in the submodule.
    fn new(m: &ModulePresentation, point: &[Coef]) -> Result<Self, OracleError> {
        let nv = m.vars().len();
        if point.len() != nv {
            return Err(OracleError::PointArity {
                expected: nv,
                got: point.len(),
            });
        }
        let mut span = Echelon::new();
        for (tag, rel) in m.relations().iter().enumerate() {
            let col = eval_vector(rel, point);
            span.insert(col, tag);
        }
        Ok(PointChecker {
            span,
            point: point.to_vec(),
        })
    }

    fn certifies_outside(&self, v: &FreeVector) -> bool {
        let (residue, _) = self.span.reduce(eval_vector(v, &self.point));
        !residue.is_empty()
    }
}

fn eval_vector(v: &FreeVector, point: &[Coef]) -> SparseVec {
    let mut col: SparseVec = Vec::new();
    for (comp, p) in v.entries().iter().enumerate() {
        let c = p.evaluate_full(point);
        if !c.is_zero() {
            col.push((comp, c));
        }
    }
    col
}

/// Exhaustive degree-bounded search for a torsion witness in `m`.
///
/// The truncated span is the rational space generated by `u * relation`
/// over all monomials `u` up to the multiplier degree. For each candidate
/// monomial annihilator `r` (base variables, ascending degree, structural
/// tie-break matching the certificate convention), candidates `r * e` over
/// basis elements `e` up to the witness degree are eliminated exactly; a
/// linear dependency exhibits an element `m0` with `r * m0` in the span,
/// and `m0` is returned once certified outside the relations.
pub fn brute_torsion_search(
    m: &ModulePresentation,
    bounds: &SearchBounds,
    mode: MembershipMode<'_>,
    budget: &mut Budget<'_>,
) -> Result<Option<TorsionWitness>, OracleError> {
    let vars = m.vars();
    let nv = vars.len();
    let all_ids: Vec<VarId> = vars.ids().collect();
    let base_ids = vars.base_ids();
    if base_ids.is_empty() {
        return Ok(None);
    }

    enum Checker {
        Gb(crate::groebner::GroebnerBasis),
        Point(PointChecker),
    }
    let checker = match mode {
        MembershipMode::Groebner => {
            Checker::Gb(reduced_generators(vars, m.rank(), m.relations(), budget)?)
        }
        MembershipMode::AtPoint(p) => Checker::Point(PointChecker::new(m, p)?),
    };
    let outside = |v: &FreeVector| -> bool {
        match &checker {
            Checker::Gb(gb) => !gb.contains(v),
            Checker::Point(pc) => pc.certifies_outside(v),
        }
    };

    // One shared truncated span of relation multiples.
    let mut rows = RowIndexer::default();
    let mut span = Echelon::new();
    let mut tag_info: Vec<(usize, Monomial)> = Vec::new();
    let multipliers = monomials_up_to(nv, &all_ids, bounds.multiplier_degree);
    for (j, rel) in m.relations().iter().enumerate() {
        for u in &multipliers {
            budget.tick()?;
            let col = rows.column(&rel.mul_term(u, &Coef::one()));
            let tag = tag_info.len();
            tag_info.push((j, u.clone()));
            span.insert(col, tag);
        }
    }

    // Candidate basis: (component, monomial) pairs, cheapest first.
    let mut candidates: Vec<(usize, Monomial)> = Vec::new();
    for mono in monomials_up_to(nv, &all_ids, bounds.witness_degree) {
        for comp in 0..m.rank() {
            candidates.push((comp, mono.clone()));
        }
    }
    candidates.sort_by(|(ca, ma), (cb, mb)| {
        ma.total_degree()
            .cmp(&mb.total_degree())
            .then(ca.cmp(cb))
            .then(ma.cmp(mb))
    });
    let candidate_vector = |i: usize| -> FreeVector {
        let (comp, mono) = &candidates[i];
        let mut entries = alloc::vec![Polynomial::zero(); m.rank()];
        entries[*comp] = Polynomial::monomial(mono.clone(), Coef::one());
        FreeVector::new(entries)
    };

    // Annihilator monomials: structural descending within a degree, the
    // same tie-break the certificate picker uses.
    let mut alphas: Vec<Monomial> = monomials_up_to(nv, &base_ids, bounds.witness_degree)
        .into_iter()
        .filter(|a| !a.is_one())
        .collect();
    alphas.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then(b.cmp(a)));

    for alpha in &alphas {
        budget.check_deadline()?;
        let mut kernel = Echelon::new();
        let mut span_combs: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for i in 0..candidates.len() {
            budget.tick()?;
            let (comp, mono) = &candidates[i];
            let shifted = alloc::vec![(rows.id(*comp, &mono.mul(alpha)), Coef::one())];
            let (residue, comb) = span.reduce(shifted);
            span_combs.insert(i, comb);
            let Insertion::Dependent { combination } = kernel.insert(residue, i) else {
                continue;
            };
            // residue_i = sum over the combination: alpha * (cand_i - sum)
            // lies in the span.
            let mut element = candidate_vector(i);
            for (t, c) in &combination {
                element = element.sub(&candidate_vector(*t).scale(c));
            }
            if !outside(&element) {
                continue;
            }
            let mut total: SparseVec = span_combs[&i].clone();
            for (t, c) in &combination {
                let neg = -c.clone();
                total = crate::linalg::add_scaled(&total, &neg, &span_combs[t]);
            }
            let (element, s) = normalize_primitive(&element);
            let mut cof_terms: BTreeMap<usize, Vec<(Monomial, Coef)>> = BTreeMap::new();
            for (tag, c) in &total {
                let (j, u) = &tag_info[*tag];
                cof_terms.entry(*j).or_default().push((u.clone(), c * &s));
            }
            let combination: Vec<(usize, Polynomial)> = cof_terms
                .into_iter()
                .map(|(j, ts)| (j, Polynomial::from_terms(ts)))
                .filter(|(_, p)| !p.is_zero())
                .collect();
            let witness = TorsionWitness {
                element,
                annihilator: Polynomial::monomial(alpha.clone(), Coef::one()),
                combination,
            };
            assert!(
                witness.verify(m),
                "assembled witness fails its own arithmetic identity"
            );
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// A corpus entry: a problem, what the engine is expected to say, and the
/// oracle bounds that make the search conclusive for this instance.
#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub name: String,
    pub problem: FlatnessProblem,
    pub expected: Option<FlatnessStatus>,
    pub expected_first_power: Option<u32>,
    pub bounds: SearchBounds,
    pub limits: ResourceLimits,
    /// Marked expensive; runners may gate it behind an opt-in.
    pub heavy: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    /// Paths agree, with a caveat worth surfacing (e.g. the oracle needed
    /// raised bounds, or exhausted them while the certificate stands).
    AgreeWithNote(String),
    Mismatch(String),
}

#[derive(Clone, Debug)]
pub struct InstanceOutcome {
    pub name: String,
    pub engine_status: Option<FlatnessStatus>,
    pub witness: Option<TorsionWitness>,
    pub bounds_used: SearchBounds,
    pub agreement: Agreement,
}

#[derive(Clone, Debug, Default)]
pub struct CrossValidationReport {
    pub entries: Vec<InstanceOutcome>,
}

impl CrossValidationReport {
    pub fn all_agree(&self) -> bool {
        self.entries
            .iter()
            .all(|e| !matches!(e.agreement, Agreement::Mismatch(_)))
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &InstanceOutcome> {
        self.entries
            .iter()
            .filter(|e| matches!(e.agreement, Agreement::Mismatch(_)))
    }
}

fn validate_one(inst: &CorpusInstance, deadline: Option<&dyn Deadline>) -> InstanceOutcome {
    let mut budget = match deadline {
        Some(d) => Budget::with_deadline(inst.limits.clone(), d),
        None => Budget::new(inst.limits.clone()),
    };
    let mut outcome = InstanceOutcome {
        name: inst.name.clone(),
        engine_status: None,
        witness: None,
        bounds_used: inst.bounds,
        agreement: Agreement::Agree,
    };
    let verdict = match flat_check(&inst.problem, None, &mut budget) {
        Ok(v) => v,
        Err(e) => {
            outcome.agreement = Agreement::Mismatch(alloc::format!(
                "engine failed to produce a verdict: {e}"
            ));
            return outcome;
        }
    };
    outcome.engine_status = Some(verdict.status);

    if let Some(expected) = inst.expected {
        if verdict.status != expected {
            outcome.agreement = Agreement::Mismatch(alloc::format!(
                "expected {expected} but engine returned {}",
                verdict.status
            ));
            return outcome;
        }
    }
    if let Some(k) = inst.expected_first_power {
        match first_torsion_power(&inst.problem, &mut budget) {
            Ok(Some(got)) if got == k => {}
            Ok(got) => {
                outcome.agreement = Agreement::Mismatch(alloc::format!(
                    "expected first torsion power {k}, engine found {got:?}"
                ));
                return outcome;
            }
            Err(e) => {
                outcome.agreement =
                    Agreement::Mismatch(alloc::format!("first-power scan failed: {e}"));
                return outcome;
            }
        }
    }
    match verdict.status {
        FlatnessStatus::Flat | FlatnessStatus::NotFlat => {}
        other => {
            outcome.agreement = Agreement::Mismatch(alloc::format!(
                "engine could not decide the instance: {other}"
            ));
            return outcome;
        }
    }

    // The oracle searches the module the torsion criterion actually
    // inspects: the authoritative tensor power.
    let n = inst.problem.base_dimension() as u32;
    if n == 0 {
        return outcome;
    }
    let tensor = match verdict.witness_module.clone() {
        Some(t) => t,
        None => inst
            .problem
            .presentation
            .tensor_power(n)
            .expect("positive power over one base"),
    };
    let search =
        |bounds: &SearchBounds, budget: &mut Budget<'_>| -> Result<Option<TorsionWitness>, OracleError> {
            brute_torsion_search(&tensor, bounds, MembershipMode::Groebner, budget)
        };
    let first = match search(&inst.bounds, &mut budget) {
        Ok(w) => w,
        Err(e) => {
            outcome.agreement = Agreement::Mismatch(alloc::format!("oracle failed: {e}"));
            return outcome;
        }
    };
    match (verdict.status, first) {
        (FlatnessStatus::Flat, Some(w)) => {
            outcome.witness = Some(w);
            outcome.agreement = Agreement::Mismatch(alloc::format!(
                "oracle found a torsion witness within {} but the engine says flat",
                inst.bounds
            ));
        }
        (FlatnessStatus::Flat, None) => {}
        (FlatnessStatus::NotFlat, Some(w)) => {
            let cert = TorsionCertificate {
                element: w.element.clone(),
                annihilator: w.annihilator.clone(),
                trace: CertificateTrace {
                    element_outside: false,
                    product_inside: false,
                    annihilator_proper: false,
                },
            };
            match verify_certificate(&tensor, &cert, &mut budget) {
                Ok(_) => outcome.witness = Some(w),
                Err(e) => {
                    outcome.witness = Some(w);
                    outcome.agreement = Agreement::Mismatch(alloc::format!(
                        "oracle witness failed certificate verification: {e}"
                    ));
                }
            }
        }
        (FlatnessStatus::NotFlat, None) => {
            // Never let an oracle miss override a verified certificate:
            // raise the bounds once, then fall back to independent
            // certificate verification.
            let raised = inst.bounds.raised();
            outcome.bounds_used = raised;
            match search(&raised, &mut budget) {
                Ok(Some(w)) => {
                    outcome.witness = Some(w);
                    outcome.agreement = Agreement::AgreeWithNote(alloc::format!(
                        "witness appeared only after raising bounds to {raised}"
                    ));
                }
                Ok(None) => {
                    let verified = verdict
                        .certificate
                        .as_ref()
                        .map(|c| verify_certificate(&tensor, c, &mut budget).is_ok())
                        .unwrap_or(false);
                    if verified {
                        outcome.agreement = Agreement::AgreeWithNote(alloc::format!(
                            "oracle exhausted {raised}; the engine certificate re-verified independently"
                        ));
                    } else {
                        outcome.agreement = Agreement::Mismatch(alloc::format!(
                            "oracle exhausted {raised} and no engine certificate survives re-verification"
                        ));
                    }
                }
                Err(e) => {
                    outcome.agreement =
                        Agreement::Mismatch(alloc::format!("oracle retry failed: {e}"));
                }
            }
        }
        _ => unreachable!("undecided statuses were filtered above"),
    }
    outcome
}

/// Runs engine and oracle over every instance and collects per-instance
/// agreement. Failures never abort the run; they become report entries.
pub fn cross_validate(
    instances: &[CorpusInstance],
    deadline: Option<&dyn Deadline>,
) -> CrossValidationReport {
    CrossValidationReport {
        entries: instances
            .iter()
            .map(|inst| validate_one(inst, deadline))
            .collect(),
    }
}
