//! Commutativity degree `d(L) = |{(x, y) : [x, y] = 0}| / |L|^2`.
//!
//! Three independent exact computations are provided:
//!
//! * [`degree_rank_sum`] sums `1 / |Im ad_x|` over representatives of
//!   `L / Z(L)` up to nonzero scalars, using that `rank(ad_x)` is unchanged
//!   by central translation and by scaling.
//! * [`degree_pair_count`] evaluates the bracket on every ordered pair.
//! * [`degree_centralizer_sum`] sums `|C_L(x)|` over every `x`, computing each
//!   centralizer as a kernel.
//!
//! The closed forms for the families that admit them live alongside, as do
//! the asymptotic degrees of the standard families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{self, AlgebraError, LieAlgebra, StructureReport};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{rank_in_place, unit_vector, vector_from_index};
use crate::par::{fold_range, Workers};
use crate::rational::ExactRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegreeError {
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Enumeration limits and parallelism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeConfig {
    /// Maximum number of coset representatives of `L / Z(L)` for the rank sum.
    pub rank_budget: u64,
    /// Maximum number of ordered pairs for the pair count.
    pub pair_budget: u64,
    /// Maximum number of elements for the centralizer sum.
    pub centralizer_budget: u64,
    pub workers: Workers,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        DegreeConfig {
            rank_budget: 1 << 24,
            pair_budget: 1 << 20,
            centralizer_budget: 1 << 24,
            workers: Workers::Auto,
        }
    }
}

impl DegreeConfig {
    pub fn with_workers(mut self, workers: Workers) -> Self {
        self.workers = workers;
        self
    }

    /// Uses `budget` for every method.
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.rank_budget = budget;
        self.pair_budget = budget;
        self.centralizer_budget = budget;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    RankSum,
    PairCount,
    CentralizerSum,
    /// Product of the degrees of recorded direct summands.
    ClosedFormProduct,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::RankSum => "rank-sum",
            Method::PairCount => "pair-count",
            Method::CentralizerSum => "centralizer-sum",
            Method::ClosedFormProduct => "closed-form-product",
        })
    }
}

impl FromStr for Method {
    type Err = DegreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "rank-sum" | "rank" => Method::RankSum,
            "pair-count" | "pairs" => Method::PairCount,
            "centralizer-sum" | "centralizer" => Method::CentralizerSum,
            "closed-form-product" => Method::ClosedFormProduct,
            other => {
                return Err(DegreeError::InvalidParameter(format!(
                    "unknown method {other:?}"
                )))
            }
        })
    }
}

/// `d(L)` together with the invariants gathered while computing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub q: u32,
    pub degree: ExactRational,
    /// `rank k -> #{x in L : rank(ad_x) = k}`; only nonzero counts are stored.
    pub rank_histogram: BTreeMap<usize, BigUint>,
    pub structure: StructureReport,
    pub method: Method,
}

impl DegreeReport {
    pub fn decimal(&self) -> String {
        self.degree.to_decimal(6)
    }

    /// `q^{-2n} sum_k hist[k] q^{n-k}`, recomputed from the histogram.
    pub fn degree_from_histogram(&self) -> ExactRational {
        degree_from_histogram(self.q, self.structure.dim, &self.rank_histogram)
    }
}

fn pow_u128(q: u32, exp: usize) -> u128 {
    (q as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

fn check_budget(q: u32, exp: usize, budget: u64) -> Result<u64, DegreeError> {
    let needed = pow_u128(q, exp);
    if needed > budget as u128 {
        return Err(DegreeError::BudgetExceeded { needed, budget });
    }
    Ok(needed as u64)
}

fn big_pow(q: u32, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(q), exp)
}

fn degree_from_histogram(q: u32, n: usize, hist: &BTreeMap<usize, BigUint>) -> ExactRational {
    let num = hist
        .iter()
        .fold(BigUint::zero(), |acc, (&k, c)| acc + c * big_pow(q, n - k));
    ExactRational::from_ratio_pow(num, q, 2 * n as u32)
}

fn merge_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn histogram_from_counts(counts: &[u64], scale: &BigUint) -> BTreeMap<usize, BigUint> {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k, BigUint::from(c) * scale))
        .collect()
}

/// Coordinates of the `index`-th projective representative of `F_q^c`: the
/// vectors whose first nonzero coordinate is 1, in lexicographic order.
fn projective_point(f: &FieldSpec, c: usize, mut index: u64) -> Vec<FieldElement> {
    let q = f.q() as u64;
    for lead in 0..c {
        let block = q.pow((c - 1 - lead) as u32);
        if index < block {
            let mut v = vec![FieldElement::ZERO; c];
            v[lead] = FieldElement::ONE;
            let tail = vector_from_index(f, c - 1 - lead, index);
            v[lead + 1..].copy_from_slice(&tail);
            return v;
        }
        index -= block;
    }
    unreachable!("projective index out of range")
}

/// `d(L)` from the rank of `ad_x` over representatives of `L / Z(L)` taken
/// up to nonzero scalars. Each projective class stands for `(q-1) |Z(L)|`
/// elements of equal rank; the zero class stands for `Z(L)` itself.
pub fn degree_rank_sum(l: &LieAlgebra, cfg: &DegreeConfig) -> Result<DegreeReport, DegreeError> {
    let f = l.field();
    let q = f.q();
    let n = l.dim();
    let center = l.center();
    let complement = center.non_pivots();
    let c = complement.len();
    check_budget(q, c, cfg.rank_budget)?;

    let ads: Vec<Vec<FieldElement>> = complement
        .iter()
        .map(|&i| {
            l.ad_matrix(&unit_vector(n, i))
                .expect("unit vector")
                .data()
                .to_vec()
        })
        .collect();
    let classes = if c == 0 {
        0
    } else {
        (pow_u128(q, c) as u64 - 1) / (q as u64 - 1)
    };

    let counts = fold_range(
        cfg.workers,
        0..classes,
        || (vec![0u64; n + 1], vec![FieldElement::ZERO; n * n]),
        |(mut counts, mut buf), idx| {
            let coeffs = projective_point(f, c, idx);
            buf.iter_mut().for_each(|b| *b = FieldElement::ZERO);
            for (coef, ad) in coeffs.iter().zip(&ads) {
                if coef.is_zero() {
                    continue;
                }
                for (slot, &a) in buf.iter_mut().zip(ad) {
                    *slot = f.mul_add(*coef, a, *slot);
                }
            }
            counts[rank_in_place(f, &mut buf, n, n)] += 1;
            (counts, buf)
        },
        |(a, buf), (b, _)| (merge_counts(a, b), buf),
    )
    .0;

    let center_size = big_pow(q, center.dim());
    let mut hist = histogram_from_counts(&counts, &(&center_size * BigUint::from(q - 1)));
    hist.insert(0, center_size);
    let degree = degree_from_histogram(q, n, &hist);
    Ok(DegreeReport {
        q,
        degree,
        rank_histogram: hist,
        structure: l.structure(),
        method: Method::RankSum,
    })
}

/// Exact `q^{-c}` such that `count = q^c` is a subspace size.
fn log_q(q: u32, mut count: u64) -> usize {
    let mut e = 0;
    while count > 1 {
        assert_eq!(
            count % q as u64,
            0,
            "centralizer size {count} is not a power of {q}"
        );
        count /= q as u64;
        e += 1;
    }
    e
}

/// `d(L)` by evaluating `[x, y]` for every ordered pair.
///
/// For a fixed `x` the bilinear form is partially contracted once
/// (`sum_i x_i c[i][j][k]`) and then evaluated on each `y`; no rank or
/// kernel is ever computed. The histogram is read off the per-`x` count of
/// commuting partners, `|C_L(x)| = q^{n - rank}`.
pub fn degree_pair_count(l: &LieAlgebra, cfg: &DegreeConfig) -> Result<DegreeReport, DegreeError> {
    let f = l.field();
    let q = f.q();
    let n = l.dim();
    check_budget(q, 2 * n, cfg.pair_budget)?;
    let size = pow_u128(q, n) as u64;
    let all: Vec<Vec<FieldElement>> = (0..size).map(|i| vector_from_index(f, n, i)).collect();
    let table = l.table();

    let (pairs, counts) = fold_range(
        cfg.workers,
        0..size,
        || (0u64, vec![0u64; n + 1]),
        |(pairs, mut counts), xi| {
            let x = &all[xi as usize];
            let mut contracted = vec![FieldElement::ZERO; n * n];
            for (i, &a) in x.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (slot, &c) in contracted
                    .iter_mut()
                    .zip(&table[i * n * n..(i + 1) * n * n])
                {
                    *slot = f.mul_add(a, c, *slot);
                }
            }
            let commuting = all
                .iter()
                .filter(|y| {
                    (0..n).all(|k| {
                        y.iter()
                            .enumerate()
                            .fold(FieldElement::ZERO, |acc, (j, &b)| {
                                f.mul_add(b, contracted[j * n + k], acc)
                            })
                            .is_zero()
                    })
                })
                .count() as u64;
            counts[n - log_q(q, commuting)] += 1;
            (pairs + commuting, counts)
        },
        |(p1, c1), (p2, c2)| (p1 + p2, merge_counts(c1, c2)),
    );

    let hist = histogram_from_counts(&counts, &BigUint::one());
    let degree = ExactRational::from_ratio_pow(BigUint::from(pairs), q, 2 * n as u32);
    Ok(DegreeReport {
        q,
        degree,
        rank_histogram: hist,
        structure: l.structure(),
        method: Method::PairCount,
    })
}

/// `d(L) = |L|^{-2} sum_x |C_L(x)|` with each centralizer computed as the
/// kernel of `ad_x`.
pub fn degree_centralizer_sum(
    l: &LieAlgebra,
    cfg: &DegreeConfig,
) -> Result<DegreeReport, DegreeError> {
    let f = l.field();
    let q = f.q();
    let n = l.dim();
    let size = check_budget(q, n, cfg.centralizer_budget)?;

    let (sum, counts) = fold_range(
        cfg.workers,
        0..size,
        || (0u128, vec![0u64; n + 1]),
        |(sum, mut counts), xi| {
            let x = vector_from_index(f, n, xi);
            let ker = l.centralizer(&x).expect("length n");
            counts[n - ker.dim()] += 1;
            (sum + pow_u128(q, ker.dim()), counts)
        },
        |(s1, c1), (s2, c2)| (s1 + s2, merge_counts(c1, c2)),
    );

    let hist = histogram_from_counts(&counts, &BigUint::one());
    let degree = ExactRational::from_ratio_pow(BigUint::from(sum), q, 2 * n as u32);
    Ok(DegreeReport {
        q,
        degree,
        rank_histogram: hist,
        structure: l.structure(),
        method: Method::CentralizerSum,
    })
}

pub fn degree_with(
    l: &LieAlgebra,
    method: Method,
    cfg: &DegreeConfig,
) -> Result<DegreeReport, DegreeError> {
    match method {
        Method::RankSum => degree_rank_sum(l, cfg),
        Method::PairCount => degree_pair_count(l, cfg),
        Method::CentralizerSum => degree_centralizer_sum(l, cfg),
        Method::ClosedFormProduct => degree_auto(l, cfg),
    }
}

/// Convolution of rank histograms: ranks add across a direct sum.
fn convolve(
    a: &BTreeMap<usize, BigUint>,
    b: &BTreeMap<usize, BigUint>,
) -> BTreeMap<usize, BigUint> {
    let mut out = BTreeMap::new();
    for (&ka, ca) in a {
        for (&kb, cb) in b {
            *out.entry(ka + kb).or_insert_with(BigUint::zero) += ca * cb;
        }
    }
    out
}

/// Uses `d(L1 (+) L2) = d(L1) d(L2)` when `l` records a direct-sum
/// decomposition, otherwise the rank sum.
pub fn degree_auto(l: &LieAlgebra, cfg: &DegreeConfig) -> Result<DegreeReport, DegreeError> {
    if l.summands().len() < 2 {
        return degree_rank_sum(l, cfg);
    }
    let parts = l
        .summands()
        .iter()
        .map(|s| degree_auto(s, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let degree = parts.iter().map(|p| p.degree.clone()).product();
    let hist = parts
        .iter()
        .skip(1)
        .fold(parts[0].rank_histogram.clone(), |acc, p| {
            convolve(&acc, &p.rank_histogram)
        });
    Ok(DegreeReport {
        q: l.field().q(),
        degree,
        rank_histogram: hist,
        structure: l.structure(),
        method: Method::ClosedFormProduct,
    })
}

fn q_rational(q: u64) -> Result<ExactRational, DegreeError> {
    if crate::field::prime_power(q).is_none() {
        return Err(DegreeError::InvalidParameter(format!(
            "q = {q} is not a prime power"
        )));
    }
    Ok(ExactRational::from_integer(q))
}

/// `(q^{2m} + q - 1) / q^{2m+1}`, the degree of any algebra with `dim L^2 = 1`
/// and `dim L / Z(L) = 2m` (and of the affine algebra plus an abelian part, at `m = 1`).
pub fn formula_dim1(q: u64, m: u32) -> Result<ExactRational, DegreeError> {
    let qr = q_rational(q)?;
    if m == 0 {
        return Err(DegreeError::InvalidParameter("m must be at least 1".into()));
    }
    let q2m = qr.pow(2 * m as i32);
    Ok((&(&q2m + &qr) - &ExactRational::one()) / (&q2m * &qr))
}

/// The two possible degrees when `dim L / Z(L) = 3`: `(2q^2 - 1)/q^4` when
/// `dim L^2 = 2`, `(q^3 + q^2 - 1)/q^5` when `dim L^2 = 3`.
pub fn formula_central3(q: u64, derived_dim: u32) -> Result<ExactRational, DegreeError> {
    let qr = q_rational(q)?;
    let one = ExactRational::one();
    match derived_dim {
        2 => Ok((&(&ExactRational::from_integer(2) * &qr.pow(2)) - &one) / qr.pow(4)),
        3 => Ok((&(&qr.pow(3) + &qr.pow(2)) - &one) / qr.pow(5)),
        d => Err(DegreeError::InvalidParameter(format!(
            "derived dimension must be 2 or 3, got {d}"
        ))),
    }
}

/// Degree of an `n`-dimensional algebra of nilpotency class 3 with
/// `dim L^2 = 2`: `(q^2 - q)/q^n + (q^2 + q - 1)/q^4` for even `n`,
/// `(q - 1)/q^n + (q^2 + q - 1)/q^4` for odd `n`.
pub fn formula_class3(q: u64, n: u32) -> Result<ExactRational, DegreeError> {
    let qr = q_rational(q)?;
    if n < 4 {
        return Err(DegreeError::InvalidParameter(format!(
            "class-3 dimension must be at least 4, got {n}"
        )));
    }
    let one = ExactRational::one();
    let tail = (&(&qr.pow(2) + &qr) - &one) / qr.pow(4);
    let head = if n.is_multiple_of(2) {
        &qr.pow(2) - &qr
    } else {
        &qr - &one
    };
    Ok(&(head / qr.pow(n as i32)) + &tail)
}

/// The first `count` values `formula_dim1(q, 1..=count)`.
pub fn sequence_dim1(q: u64, count: u32) -> Result<Vec<ExactRational>, DegreeError> {
    (1..=count).map(|m| formula_dim1(q, m)).collect()
}

/// Families of algebras of growing order with known limiting degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `L_n = H(n)`.
    Heisenberg,
    /// `L_n = H(n) (+) ... (+) H(n)`, `k` copies.
    HeisenbergPower { k: u32 },
    /// `L_m = L43 * H(m)` (central product), `m >= 0`, dimension `4 + 2m`.
    Class3Even,
    /// `L_m = L55 * H(m)`, `m >= 0`, dimension `5 + 2m`.
    Class3Odd,
    /// `L_n = A(n)`.
    ConstantAbelian,
}

impl Family {
    /// Parses a family name; `k` is required for `heisenberg-power`.
    pub fn parse(name: &str, k: Option<u32>) -> Result<Family, DegreeError> {
        Ok(match name {
            "heisenberg" => Family::Heisenberg,
            "heisenberg-power" => {
                let k = k.ok_or_else(|| {
                    DegreeError::InvalidParameter("heisenberg-power needs k".into())
                })?;
                if k == 0 {
                    return Err(DegreeError::InvalidParameter("k must be at least 1".into()));
                }
                Family::HeisenbergPower { k }
            }
            "class3-even" => Family::Class3Even,
            "class3-odd" => Family::Class3Odd,
            "abelian" | "constant-abelian" => Family::ConstantAbelian,
            other => return Err(DegreeError::UnknownFamily(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Heisenberg => "heisenberg",
            Family::HeisenbergPower { .. } => "heisenberg-power",
            Family::Class3Even => "class3-even",
            Family::Class3Odd => "class3-odd",
            Family::ConstantAbelian => "abelian",
        }
    }

    /// Dimension of the `index`-th member (`index >= 1`).
    pub fn member_dim(&self, index: u32) -> u32 {
        match self {
            Family::Heisenberg => 2 * index + 1,
            Family::HeisenbergPower { k } => k * (2 * index + 1),
            Family::Class3Even => 4 + 2 * (index - 1),
            Family::Class3Odd => 5 + 2 * (index - 1),
            Family::ConstantAbelian => index,
        }
    }

    /// Exact degree of the `index`-th member from the closed forms.
    pub fn member_degree(&self, q: u64, index: u32) -> Result<ExactRational, DegreeError> {
        if index == 0 {
            return Err(DegreeError::InvalidParameter(
                "family members are indexed from 1".into(),
            ));
        }
        match self {
            Family::Heisenberg => formula_dim1(q, index),
            Family::HeisenbergPower { k } => Ok(formula_dim1(q, index)?.pow(*k as i32)),
            Family::Class3Even | Family::Class3Odd => formula_class3(q, self.member_dim(index)),
            Family::ConstantAbelian => Ok(ExactRational::one()),
        }
    }

    /// The `index`-th member as an explicit algebra.
    pub fn member(&self, field: &FieldSpec, index: u32) -> Result<LieAlgebra, DegreeError> {
        if index == 0 {
            return Err(DegreeError::InvalidParameter(
                "family members are indexed from 1".into(),
            ));
        }
        let m = index as usize;
        Ok(match self {
            Family::Heisenberg => algebra::heisenberg(field, m)?,
            Family::HeisenbergPower { k } => {
                let h = algebra::heisenberg(field, m)?;
                let mut acc = h.clone();
                for _ in 1..*k {
                    acc = algebra::direct_sum(&acc, &h)?;
                }
                acc
            }
            Family::Class3Even | Family::Class3Odd => {
                let (base, z) = if *self == Family::Class3Even {
                    (algebra::l43(field), 3)
                } else {
                    (algebra::l55(field), 4)
                };
                if m == 1 {
                    base
                } else {
                    algebra::central_product(
                        &base,
                        z,
                        &algebra::heisenberg(field, m - 1)?,
                        2 * (m - 1),
                    )?
                }
            }
            Family::ConstantAbelian => algebra::abelian(field, m),
        })
    }

    pub fn limit(&self, q: u64) -> Result<ExactRational, DegreeError> {
        let qr = q_rational(q)?;
        Ok(match self {
            Family::Heisenberg => qr.recip(),
            Family::HeisenbergPower { k } => qr.pow(-(*k as i32)),
            Family::Class3Even | Family::Class3Odd => {
                (&(&qr.pow(2) + &qr) - &ExactRational::one()) / qr.pow(4)
            }
            Family::ConstantAbelian => ExactRational::one(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyTerm {
    pub index: u32,
    pub dim: u32,
    pub degree: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticReport {
    pub family: Family,
    pub q: u64,
    pub limit: ExactRational,
    pub terms: Vec<FamilyTerm>,
}

impl AsymptoticReport {
    /// Every term is at least as close to the limit as the one before and
    /// they all lie on the same side of it.
    pub fn is_monotone_toward_limit(&self) -> bool {
        let gaps: Vec<ExactRational> = self.terms.iter().map(|t| &t.degree - &self.limit).collect();
        let zero = ExactRational::zero();
        let same_side = gaps.iter().all(|g| *g >= zero) || gaps.iter().all(|g| *g <= zero);
        let shrinking = gaps.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            if *a >= zero {
                b <= a
            } else {
                b >= a
            }
        });
        same_side && shrinking
    }
}

/// The exact limit of `d(L_n)` and the first `terms` members' degrees.
pub fn asymptotic(family: Family, q: u64, terms: u32) -> Result<AsymptoticReport, DegreeError> {
    let limit = family.limit(q)?;
    let terms = (1..=terms)
        .map(|i| {
            Ok(FamilyTerm {
                index: i,
                dim: family.member_dim(i),
                degree: family.member_degree(q, i)?,
            })
        })
        .collect::<Result<Vec<_>, DegreeError>>()?;
    Ok(AsymptoticReport {
        family,
        q,
        limit,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{abelian, affine, central_product, direct_sum, heisenberg, l43, l55};

    fn f(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn cfg() -> DegreeConfig {
        DegreeConfig::default()
    }

    /// Independent oracle: literal double loop with the public bracket.
    fn oracle(l: &LieAlgebra) -> ExactRational {
        let fl = l.field();
        let n = l.dim();
        let size = (fl.q() as u64).pow(n as u32);
        let mut count = 0u64;
        for a in 0..size {
            for b in 0..size {
                let x = vector_from_index(fl, n, a);
                let y = vector_from_index(fl, n, b);
                if l.bracket(&x, &y).unwrap().iter().all(|c| c.is_zero()) {
                    count += 1;
                }
            }
        }
        ExactRational::new(count, size * size)
    }

    fn sl2(f: &FieldSpec) -> LieAlgebra {
        // basis (h, e, f): [h,e]=2e, [h,f]=-2f, [e,f]=h
        LieAlgebra::from_int_brackets(
            f.clone(),
            3,
            &[(0, 1, &[0, 2, 0]), (0, 2, &[0, 0, -2]), (1, 2, &[1, 0, 0])],
        )
        .unwrap()
    }

    #[test]
    fn oracle_frozen_values() {
        // Values computed once by the literal double loop above.
        assert_eq!(oracle(&heisenberg(&f(2), 1).unwrap()), r("5/8"));
        assert_eq!(oracle(&affine(&f(2))), r("5/8"));
        assert_eq!(oracle(&heisenberg(&f(3), 1).unwrap()), r("11/27"));
        assert_eq!(oracle(&sl2(&f(3))), r("35/243"));
        assert_eq!(oracle(&l43(&f(2))), r("7/16"));
    }

    #[test]
    fn rank_sum_examples() {
        assert_eq!(
            degree_rank_sum(&abelian(&f(3), 4), &cfg()).unwrap().degree,
            ExactRational::one()
        );
        assert_eq!(
            degree_rank_sum(&heisenberg(&f(2), 1).unwrap(), &cfg())
                .unwrap()
                .degree,
            r("5/8")
        );
        assert_eq!(
            degree_rank_sum(&l55(&f(2)), &cfg()).unwrap().degree,
            r("11/32")
        );
        assert_eq!(
            degree_rank_sum(&sl2(&f(3)), &cfg()).unwrap().degree,
            r("35/243")
        );
    }

    #[test]
    fn pair_count_examples() {
        assert_eq!(
            degree_pair_count(&abelian(&f(2), 2), &cfg())
                .unwrap()
                .degree,
            ExactRational::one()
        );
        let aff = degree_pair_count(&affine(&f(2)), &cfg()).unwrap();
        assert_eq!(aff.degree, r("10/16"));
        assert_eq!(
            degree_pair_count(&heisenberg(&f(3), 1).unwrap(), &cfg())
                .unwrap()
                .degree,
            r("11/27")
        );
    }

    #[test]
    fn centralizer_sum_examples() {
        assert_eq!(
            degree_centralizer_sum(&abelian(&f(2), 3), &cfg())
                .unwrap()
                .degree,
            ExactRational::one()
        );
        let h = degree_centralizer_sum(&heisenberg(&f(2), 1).unwrap(), &cfg()).unwrap();
        assert_eq!(h.degree, r("40/64"));
        let expected: BTreeMap<usize, BigUint> = [(0, 2u32.into()), (1, 6u32.into())].into();
        assert_eq!(h.rank_histogram, expected);
        assert_eq!(
            degree_centralizer_sum(&l43(&f(2)), &cfg()).unwrap().degree,
            r("7/16")
        );
    }

    #[test]
    fn budget_exceeded() {
        let h = heisenberg(&f(2), 6).unwrap(); // 13-dim, 2^26 pairs
        let err = degree_pair_count(&h, &cfg()).unwrap_err();
        assert_eq!(
            err,
            DegreeError::BudgetExceeded {
                needed: 1 << 26,
                budget: 1 << 20
            }
        );
        let tight = cfg().with_budget(1 << 4);
        assert!(matches!(
            degree_rank_sum(&h, &tight),
            Err(DegreeError::BudgetExceeded { .. })
        ));
        assert!(degree_rank_sum(&h, &cfg()).is_ok());
    }

    #[test]
    fn zero_algebra_has_degree_one() {
        let z = abelian(&f(3), 0);
        for m in [Method::RankSum, Method::PairCount, Method::CentralizerSum] {
            assert_eq!(
                degree_with(&z, m, &cfg()).unwrap().degree,
                ExactRational::one()
            );
        }
    }

    #[test]
    fn auto_uses_product_for_direct_sums() {
        let h = heisenberg(&f(2), 1).unwrap();
        let hh = direct_sum(&h, &h).unwrap();
        let auto = degree_auto(&hh, &cfg()).unwrap();
        assert_eq!(auto.method, Method::ClosedFormProduct);
        assert_eq!(auto.degree, r("25/64"));
        let flat = degree_rank_sum(&hh, &cfg()).unwrap();
        assert_eq!(flat.degree, auto.degree);
        assert_eq!(flat.rank_histogram, auto.rank_histogram);
        assert_eq!(
            degree_auto(&abelian(&f(2), 5), &cfg()).unwrap().degree,
            ExactRational::one()
        );
        let h3 = degree_auto(&heisenberg(&f(2), 3).unwrap(), &cfg()).unwrap();
        assert_eq!((h3.degree, h3.method), (r("65/128"), Method::RankSum));
    }

    #[test]
    fn formula_examples() {
        assert_eq!(formula_dim1(2, 1).unwrap(), r("5/8"));
        assert_eq!(formula_dim1(2, 2).unwrap(), r("17/32"));
        assert_eq!(formula_dim1(3, 1).unwrap(), r("11/27"));
        assert_eq!(formula_central3(2, 2).unwrap(), r("7/16"));
        assert_eq!(formula_central3(2, 3).unwrap(), r("11/32"));
        assert_eq!(formula_central3(3, 3).unwrap(), r("35/243"));
        assert_eq!(formula_class3(2, 4).unwrap(), r("7/16"));
        assert_eq!(formula_class3(2, 6).unwrap(), r("11/32"));
        assert_eq!(formula_class3(2, 7).unwrap(), r("41/128"));
        assert!(formula_dim1(1, 1).is_err());
        assert!(formula_dim1(2, 0).is_err());
        assert!(formula_central3(2, 1).is_err());
        assert!(formula_class3(2, 3).is_err());
    }

    #[test]
    fn class3_formula_matches_brute_force() {
        for q in [2u64, 3] {
            let fl = f(q);
            for fam in [Family::Class3Even, Family::Class3Odd] {
                for idx in 1..=2 {
                    let l = fam.member(&fl, idx).unwrap();
                    if (q as u128).pow(l.dim() as u32) > 1 << 16 {
                        continue;
                    }
                    let d = degree_centralizer_sum(&l, &cfg()).unwrap().degree;
                    assert_eq!(
                        d,
                        formula_class3(q, l.dim() as u32).unwrap(),
                        "{fam:?} q={q} idx={idx}"
                    );
                }
            }
        }
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(
            sequence_dim1(2, 3).unwrap(),
            vec![r("5/8"), r("17/32"), r("65/128")]
        );
        assert_eq!(sequence_dim1(3, 2).unwrap(), vec![r("11/27"), r("83/243")]);
        for q in [2u64, 3, 5, 7] {
            let seq = sequence_dim1(q, 8).unwrap();
            let inv_q = ExactRational::new(1, q);
            for (i, t) in seq.iter().enumerate() {
                let m = i as i32 + 1;
                let gap = &ExactRational::from_integer(q - 1)
                    / &ExactRational::from_integer(q).pow(2 * m + 1);
                assert_eq!(t - &inv_q, gap);
            }
            assert!(seq.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn asymptotic_examples() {
        let h = asymptotic(Family::Heisenberg, 2, 3).unwrap();
        assert_eq!(h.limit, r("1/2"));
        let prefix: Vec<_> = h.terms.iter().map(|t| t.degree.clone()).collect();
        assert_eq!(prefix, vec![r("5/8"), r("17/32"), r("65/128")]);
        assert!(h.is_monotone_toward_limit());
        assert_eq!(
            asymptotic(Family::HeisenbergPower { k: 3 }, 2, 2)
                .unwrap()
                .limit,
            r("1/8")
        );
        let odd = asymptotic(Family::Class3Odd, 2, 4).unwrap();
        assert_eq!(odd.limit, r("5/16"));
        assert_eq!(odd.terms[1].degree, formula_class3(2, 7).unwrap());
        assert!(odd.is_monotone_toward_limit());
        assert_eq!(
            Family::parse("nope", None),
            Err(DegreeError::UnknownFamily("nope".into()))
        );
        assert!(Family::parse("heisenberg-power", None).is_err());
    }

    #[test]
    fn family_members_match_closed_forms() {
        let fl = f(2);
        for fam in [
            Family::Heisenberg,
            Family::HeisenbergPower { k: 2 },
            Family::Class3Even,
            Family::Class3Odd,
            Family::ConstantAbelian,
        ] {
            for idx in 1..=2 {
                let l = fam.member(&fl, idx).unwrap();
                assert_eq!(l.dim() as u32, fam.member_dim(idx));
                let d = degree_rank_sum(&l, &cfg()).unwrap().degree;
                assert_eq!(d, fam.member_degree(2, idx).unwrap(), "{fam:?} {idx}");
            }
        }
    }

    #[test]
    fn histogram_invariants() {
        for q in [2u64, 3] {
            let fl = f(q);
            let cases = [
                heisenberg(&fl, 2).unwrap(),
                l43(&fl),
                l55(&fl),
                sl2(&fl),
                direct_sum(&affine(&fl), &heisenberg(&fl, 1).unwrap()).unwrap(),
                central_product(&l43(&fl), 3, &heisenberg(&fl, 1).unwrap(), 2).unwrap(),
            ];
            for l in &cases {
                let rep = degree_rank_sum(l, &cfg()).unwrap();
                let n = l.dim();
                let total: BigUint = rep.rank_histogram.values().sum();
                assert_eq!(total, big_pow(q as u32, n));
                let z = big_pow(q as u32, rep.structure.dim_center);
                assert_eq!(rep.rank_histogram[&0], z);
                for (&k, c) in &rep.rank_histogram {
                    if k > 0 {
                        assert!((c % (&z * BigUint::from(q - 1))).is_zero());
                    }
                }
                assert_eq!(rep.degree_from_histogram(), rep.degree);
                assert!(rep.degree.denominator_divides_power(q as u32, 2 * n as u32));
            }
        }
    }

    #[test]
    fn workers_do_not_change_reports() {
        let fl = f(3);
        let l = central_product(&l55(&fl), 4, &heisenberg(&fl, 1).unwrap(), 2).unwrap();
        let base = degree_rank_sum(&l, &cfg().with_workers(Workers::Sequential)).unwrap();
        for w in [Workers::Auto, Workers::Threads(2), Workers::Threads(5)] {
            assert_eq!(degree_rank_sum(&l, &cfg().with_workers(w)).unwrap(), base);
        }
    }

    #[test]
    fn projective_points_cover_each_line_once() {
        let fl = f(3);
        let c = 3;
        let count = (27 - 1) / 2;
        let pts: Vec<_> = (0..count).map(|i| projective_point(&fl, c, i)).collect();
        let mut all = std::collections::HashSet::new();
        for p in &pts {
            for lam in fl.elements().skip(1) {
                let v: Vec<_> = p.iter().map(|&a| fl.mul(lam, a)).collect();
                assert!(all.insert(v));
            }
        }
        assert_eq!(all.len(), 26);
    }
}
