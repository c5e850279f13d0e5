//! Recognition of algebras with one-dimensional derived subalgebra, the
//! theorem checks on a single algebra, and exhaustive enumeration of all
//! Lie brackets on `F_q^n` for small `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::algebra::{AlgebraError, LieAlgebra, StructureReport};
use crate::degree::{
    degree_pair_count, degree_rank_sum, formula_central3, formula_dim1, DegreeConfig, DegreeError,
};
use crate::field::{FieldElement, FieldSpec};
use crate::par::{fold_range, map_range, Workers};
use crate::rational::ExactRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim1Kind {
    /// `H(m) (+) A(k)`.
    HeisenbergPlusAbelian,
    /// `<x, y | [x, y] = x> (+) A(k)`.
    AffinePlusAbelian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dim1Shape {
    pub kind: Dim1Kind,
    /// Heisenberg parameter; `None` for the affine kind.
    pub m: Option<usize>,
    pub abelian_dim: usize,
}

impl Dim1Shape {
    pub fn total_dim(&self) -> usize {
        match self.kind {
            Dim1Kind::HeisenbergPlusAbelian => 2 * self.m.unwrap_or(0) + 1 + self.abelian_dim,
            Dim1Kind::AffinePlusAbelian => 2 + self.abelian_dim,
        }
    }
}

impl fmt::Display for Dim1Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Dim1Kind::HeisenbergPlusAbelian => {
                write!(f, "H({}) + A({})", self.m.unwrap_or(0), self.abelian_dim)
            }
            Dim1Kind::AffinePlusAbelian => write!(f, "aff + A({})", self.abelian_dim),
        }
    }
}

/// Decides which of the two shapes an algebra with `dim L^2 = 1` has.
///
/// If `L^2` is central, `L = H(m) (+) A(k)` with `2m = dim L / Z(L)` and
/// `k = dim Z(L) - 1`; otherwise `L = aff (+) A(n - 2)`.
pub fn recognize_dim1(l: &LieAlgebra) -> Result<Dim1Shape, ClassifyError> {
    let f = l.field();
    let derived = l.derived_subalgebra();
    if derived.dim() != 1 {
        return Err(ClassifyError::PreconditionViolated(format!(
            "recognizer needs dim L^2 = 1, got {}",
            derived.dim()
        )));
    }
    let center = l.center();
    let n = l.dim();
    if derived.is_subspace_of(f, &center).expect("same ambient") {
        let quotient = n - center.dim();
        if !quotient.is_multiple_of(2) {
            return Err(ClassifyError::PreconditionViolated(format!(
                "central derived algebra with odd dim L/Z(L) = {quotient}; not a Lie algebra?"
            )));
        }
        Ok(Dim1Shape {
            kind: Dim1Kind::HeisenbergPlusAbelian,
            m: Some(quotient / 2),
            abelian_dim: center.dim() - 1,
        })
    } else {
        Ok(Dim1Shape {
            kind: Dim1Kind::AffinePlusAbelian,
            m: None,
            abelian_dim: n - 2,
        })
    }
}

/// The statements checked by [`verify_bounds`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    /// `dim L^2 >= 2` implies `d < 1/q`.
    DerivedBound,
    /// For non-abelian `L`: `d > 1/q` iff `dim L^2 = 1`, and then the
    /// recognizer applies.
    HighDegreeIff,
    /// `d != 1/q`.
    NoInverseQ,
    /// `dim L/Z(L) = 3` implies `d` is `(2q^2-1)/q^4` or `(q^3+q^2-1)/q^5`.
    CentralQuotient3,
    /// `dim L^2 = 1` implies `d = (q^{2m}+q-1)/q^{2m+1}` for the recognized `m`.
    Dim1Value,
    /// No `d` in `((q^2+q-1)/q^3, 1)`.
    Gap,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::DerivedBound,
        Theorem::HighDegreeIff,
        Theorem::NoInverseQ,
        Theorem::CentralQuotient3,
        Theorem::Dim1Value,
        Theorem::Gap,
    ];
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::DerivedBound => "dim L^2 >= 2 => d < 1/q",
            Theorem::HighDegreeIff => "d > 1/q <=> dim L^2 = 1",
            Theorem::NoInverseQ => "d != 1/q",
            Theorem::CentralQuotient3 => "dim L/Z = 3 => d in {(2q^2-1)/q^4, (q^3+q^2-1)/q^5}",
            Theorem::Dim1Value => "dim L^2 = 1 => d = (q^2m+q-1)/q^(2m+1)",
            Theorem::Gap => "no d in ((q^2+q-1)/q^3, 1)",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// The hypothesis does not apply to this algebra.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub theorem: Theorem,
    pub outcome: Outcome,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub structure: StructureReport,
    pub degree: ExactRational,
    pub shape: Option<Dim1Shape>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail)
    }
}

/// Computes `d(L)`: pair count for `n <= 2`, rank sum otherwise.
fn degree_for_checks(l: &LieAlgebra, cfg: &DegreeConfig) -> Result<ExactRational, DegreeError> {
    if l.dim() <= 2 {
        Ok(degree_pair_count(l, cfg)?.degree)
    } else {
        Ok(degree_rank_sum(l, cfg)?.degree)
    }
}

fn check(theorem: Theorem, applies: bool, holds: bool, witness: String) -> Check {
    let outcome = match (applies, holds) {
        (false, _) => Outcome::Vacuous,
        (true, true) => Outcome::Pass,
        (true, false) => Outcome::Fail,
    };
    Check {
        theorem,
        outcome,
        witness,
    }
}

/// Runs every theorem check on `l` and records the outcome with the values
/// it was decided on.
pub fn verify_bounds(
    l: &LieAlgebra,
    cfg: &DegreeConfig,
) -> Result<VerificationReport, ClassifyError> {
    let structure = l.validate()?;
    let degree = degree_for_checks(l, cfg)?;
    let q = l.field().q() as u64;
    let inv_q = ExactRational::new(1, q);
    let one = ExactRational::one();
    let gap_low = formula_dim1(q, 1)?;
    let shape = if structure.dim_derived == 1 {
        Some(recognize_dim1(l)?)
    } else {
        None
    };
    let dd = structure.dim_derived;
    let d = &degree;

    let mut checks = Vec::with_capacity(6);
    checks.push(check(
        Theorem::DerivedBound,
        dd >= 2,
        *d < inv_q,
        format!("dim L^2 = {dd}, d = {d}"),
    ));
    checks.push(check(
        Theorem::HighDegreeIff,
        !structure.is_abelian,
        (*d > inv_q) == (dd == 1) && (dd != 1 || shape.is_some()),
        format!("dim L^2 = {dd}, d = {d}, 1/q = {inv_q}"),
    ));
    checks.push(check(
        Theorem::NoInverseQ,
        true,
        *d != inv_q,
        format!("d = {d}"),
    ));
    let quotient = structure.dim - structure.dim_center;
    let c3 = [formula_central3(q, 2)?, formula_central3(q, 3)?];
    checks.push(check(
        Theorem::CentralQuotient3,
        quotient == 3,
        c3.contains(d),
        format!("dim L/Z = {quotient}, d = {d}"),
    ));
    let expected_dim1 = match shape {
        Some(Dim1Shape { m: Some(m), .. }) => Some(formula_dim1(q, m as u32)?),
        Some(_) => Some(formula_dim1(q, 1)?),
        None => None,
    };
    checks.push(check(
        Theorem::Dim1Value,
        shape.is_some(),
        expected_dim1.as_ref() == Some(d),
        match (&shape, &expected_dim1) {
            (Some(s), Some(e)) => format!("{s}: d = {d}, formula = {e}"),
            _ => format!("d = {d}"),
        },
    ));
    checks.push(check(
        Theorem::Gap,
        true,
        !(*d > gap_low && *d < one),
        format!("d = {d}, bound = {gap_low}"),
    ));

    Ok(VerificationReport {
        structure,
        degree,
        shape,
        checks,
    })
}

/// Number of alternating tensors on `n` basis vectors over `F_q`.
pub fn candidate_count(q: u32, n: usize) -> u128 {
    let digits = n * n.saturating_sub(1) / 2 * n;
    (q as u128).checked_pow(digits as u32).unwrap_or(u128::MAX)
}

/// The `index`-th alternating tensor: the upper-triangle brackets
/// `[e_1,e_2], [e_1,e_3], ..., [e_{n-1},e_n]` concatenated and read as a
/// base-`q` numeral, most significant digit first. Jacobi is not checked.
pub fn candidate(f: &FieldSpec, n: usize, index: u64) -> LieAlgebra {
    let q = f.q() as u64;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut digits = vec![FieldElement::ZERO; pairs.len() * n];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = f.element((rest % q) as u32).expect("digit below q");
        rest /= q;
    }
    let brackets: Vec<_> = pairs
        .iter()
        .zip(digits.chunks(n.max(1)))
        .map(|(&(i, j), v)| (i, j, v.to_vec()))
        .collect();
    LieAlgebra::from_upper(f.clone(), n, &brackets).expect("indices in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// Maximum number of candidate tensors.
    pub budget: u64,
    pub degree: DegreeConfig,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            budget: 1 << 25,
            degree: DegreeConfig::default(),
        }
    }
}

fn candidates_in_budget(f: &FieldSpec, n: usize, budget: u64) -> Result<u64, ClassifyError> {
    let needed = candidate_count(f.q(), n);
    if needed > budget as u128 {
        return Err(ClassifyError::BudgetExceeded { needed, budget });
    }
    Ok(needed as u64)
}

fn valid_candidate(f: &FieldSpec, n: usize, index: u64) -> Option<LieAlgebra> {
    let l = candidate(f, n, index);
    l.check_identities().is_ok().then_some(l)
}

/// Every Lie bracket on `F_q^n` (all alternating tensors passing Jacobi), in
/// candidate order. Isomorphic duplicates are kept.
pub fn enumerate_small(
    f: &FieldSpec,
    n: usize,
    cfg: &EnumConfig,
) -> Result<Vec<LieAlgebra>, ClassifyError> {
    let total = candidates_in_budget(f, n, cfg.budget)?;
    Ok(
        map_range(cfg.degree.workers, 0..total, |i| valid_candidate(f, n, i))
            .into_iter()
            .flatten()
            .collect(),
    )
}

/// Multiset of degrees over an enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Spectrum {
    pub candidates: u64,
    pub valid: u64,
    pub counts: BTreeMap<ExactRational, u64>,
}

impl Spectrum {
    pub fn merge(mut self, other: Spectrum) -> Spectrum {
        self.candidates += other.candidates;
        self.valid += other.valid;
        for (d, c) in other.counts {
            *self.counts.entry(d).or_insert(0) += c;
        }
        self
    }

    /// Value-set statements the spectrum must satisfy over `F_q` for
    /// algebras of dimension at most `n`; returns a description of each
    /// violation.
    pub fn violations(&self, q: u64, n: usize) -> Vec<String> {
        let mut out = Vec::new();
        let one = ExactRational::one();
        let inv_q = ExactRational::new(1, q);
        let top = formula_dim1(q, 1).expect("q >= 2");
        let allowed: Vec<ExactRational> = (1..=(n / 2).max(1) as u32)
            .map(|m| formula_dim1(q, m).expect("q >= 2"))
            .collect();
        for d in self.counts.keys() {
            if *d > top && *d < one {
                out.push(format!("{d} lies in the gap ({top}, 1)"));
            }
            if *d == inv_q {
                out.push(format!("{d} equals 1/q"));
            }
            if *d > inv_q && *d <= top && !allowed.contains(d) {
                out.push(format!(
                    "{d} lies in (1/q, {top}] but is not a sequence term"
                ));
            }
        }
        out
    }
}

pub fn spectrum(f: &FieldSpec, n: usize, cfg: &EnumConfig) -> Result<Spectrum, ClassifyError> {
    let total = candidates_in_budget(f, n, cfg.budget)?;
    let per_algebra = cfg.degree.with_workers(Workers::Sequential);
    let folded = fold_range(
        cfg.degree.workers,
        0..total,
        || Ok(Spectrum::default()),
        |acc: Result<Spectrum, ClassifyError>, i| {
            let mut s = acc?;
            s.candidates += 1;
            if let Some(l) = valid_candidate(f, n, i) {
                s.valid += 1;
                let d = degree_for_checks(&l, &per_algebra)?;
                *s.counts.entry(d).or_insert(0) += 1;
            }
            Ok(s)
        },
        |a, b| Ok(a?.merge(b?)),
    );
    folded
}

/// Per-theorem tallies over an enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: u64,
    pub fail: u64,
    pub vacuous: u64,
}

/// The first (lowest-index) algebra failing a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub index: u64,
    pub algebra: LieAlgebra,
    pub report: VerificationReport,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationSummary {
    pub spectrum: Spectrum,
    pub tallies: BTreeMap<Theorem, Tally>,
    /// `dim L^2 -> count` over valid algebras.
    pub derived_dims: BTreeMap<usize, u64>,
    pub first_failure: Option<Witness>,
}

impl EnumerationSummary {
    pub fn merge(mut self, other: EnumerationSummary) -> EnumerationSummary {
        self.spectrum = self.spectrum.merge(other.spectrum);
        for (t, x) in other.tallies {
            let e = self.tallies.entry(t).or_default();
            e.pass += x.pass;
            e.fail += x.fail;
            e.vacuous += x.vacuous;
        }
        for (k, c) in other.derived_dims {
            *self.derived_dims.entry(k).or_insert(0) += c;
        }
        self.first_failure = match (self.first_failure, other.first_failure) {
            (Some(a), Some(b)) => Some(if a.index <= b.index { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn all_checks_pass(&self, q: u64, n: usize) -> bool {
        self.first_failure.is_none() && self.spectrum.violations(q, n).is_empty()
    }
}

/// Verifies every candidate with index in `range`.
pub fn verify_range(
    f: &FieldSpec,
    n: usize,
    range: Range<u64>,
    cfg: &EnumConfig,
) -> Result<EnumerationSummary, ClassifyError> {
    // The candidate loop is already parallel; each algebra is small.
    let per_algebra = cfg.degree.with_workers(Workers::Sequential);
    fold_range(
        cfg.degree.workers,
        range,
        || Ok(EnumerationSummary::default()),
        |acc: Result<EnumerationSummary, ClassifyError>, i| {
            let mut s = acc?;
            s.spectrum.candidates += 1;
            let Some(l) = valid_candidate(f, n, i) else {
                return Ok(s);
            };
            let report = verify_bounds(&l, &per_algebra)?;
            s.spectrum.valid += 1;
            *s.spectrum.counts.entry(report.degree.clone()).or_insert(0) += 1;
            *s.derived_dims
                .entry(report.structure.dim_derived)
                .or_insert(0) += 1;
            for c in &report.checks {
                let t = s.tallies.entry(c.theorem).or_default();
                match c.outcome {
                    Outcome::Pass => t.pass += 1,
                    Outcome::Fail => t.fail += 1,
                    Outcome::Vacuous => t.vacuous += 1,
                }
            }
            if !report.passed() && s.first_failure.as_ref().is_none_or(|w| i < w.index) {
                s.first_failure = Some(Witness {
                    index: i,
                    algebra: l,
                    report,
                });
            }
            Ok(s)
        },
        |a, b| Ok(a?.merge(b?)),
    )
}

/// Verifies every Lie bracket on `F_q^n`.
pub fn verify_enumerated(
    f: &FieldSpec,
    n: usize,
    cfg: &EnumConfig,
) -> Result<EnumerationSummary, ClassifyError> {
    let total = candidates_in_budget(f, n, cfg.budget)?;
    verify_range(f, n, 0..total, cfg)
}

/// Total candidates for `(q, n)` if within `budget`.
pub fn enumeration_size(f: &FieldSpec, n: usize, budget: u64) -> Result<u64, ClassifyError> {
    candidates_in_budget(f, n, budget)
}
