//! Lie algebras over `F_q` given by structure constants.
//!
//! `[e_i, e_j] = sum_k c[i][j][k] e_k`, with both orientations of every pair
//! stored so a bracket read is a single lookup. Indices are 0-based in the
//! API; error messages print basis vectors 1-based.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{self, is_zero_vector, unit_vector, LinalgError, MatrixFq, Subspace, VectorFq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("structure constants are not alternating at (e{}, e{})", .i + 1, .j + 1)]
    NotAlternating { i: usize, j: usize },
    #[error("Jacobi identity fails for (e{}, e{}, e{}): residual {residual:?}", .i + 1, .j + 1, .k + 1)]
    JacobiFails {
        i: usize,
        j: usize,
        k: usize,
        residual: Vec<u32>,
    },
    #[error("fields differ: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("basis vector e{} is not central", .0 + 1)]
    NotCentralElement(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Structural invariants of a Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub dim: usize,
    pub dim_derived: usize,
    pub dim_center: usize,
    /// `None` when the lower central series stabilizes at a nonzero term.
    pub nilpotency_class: Option<usize>,
    pub is_abelian: bool,
}

#[derive(Clone)]
pub struct LieAlgebra {
    field: FieldSpec,
    dim: usize,
    table: Vec<FieldElement>,
    labels: Option<Vec<String>>,
    summands: Vec<LieAlgebra>,
}

/// Equality compares the field and structure constants; labels and the
/// recorded direct-sum decomposition are metadata.
impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.table == other.table
    }
}

impl Eq for LieAlgebra {}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({} over {}", self.dim, self.field)?;
        for (i, j, v) in self.upper_brackets() {
            write!(
                f,
                ", [e{},e{}]={:?}",
                i + 1,
                j + 1,
                v.iter().map(|c| c.index()).collect::<Vec<_>>()
            )?;
        }
        write!(f, ")")
    }
}

impl LieAlgebra {
    /// Builds an algebra from the brackets `[e_i, e_j]` for `i < j`; the
    /// lower triangle is filled by antisymmetry. Does not check Jacobi.
    pub fn from_upper(
        field: FieldSpec,
        dim: usize,
        brackets: &[(usize, usize, VectorFq)],
    ) -> Result<Self, AlgebraError> {
        let mut table = vec![FieldElement::ZERO; dim * dim * dim];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= j || j >= dim {
                return Err(AlgebraError::InvalidParameter(format!(
                    "bracket index pair ({}, {}) must satisfy i < j <= {dim}",
                    i + 1,
                    j + 1
                )));
            }
            if v.len() != dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                }
                .into());
            }
            for k in 0..dim {
                table[(i * dim + j) * dim + k] = v[k];
                table[(j * dim + i) * dim + k] = field.neg(v[k]);
            }
        }
        Ok(LieAlgebra {
            field,
            dim,
            table,
            labels: None,
            summands: Vec::new(),
        })
    }

    /// Wraps a full `n x n x n` table as given. `validate` reports any
    /// failure of antisymmetry or Jacobi.
    pub fn from_table(
        field: FieldSpec,
        dim: usize,
        table: Vec<FieldElement>,
    ) -> Result<Self, AlgebraError> {
        if table.len() != dim * dim * dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim * dim * dim,
                got: table.len(),
            }
            .into());
        }
        Ok(LieAlgebra {
            field,
            dim,
            table,
            labels: None,
            summands: Vec::new(),
        })
    }

    /// Convenience for brackets with small integer coordinates, reduced mod p.
    pub fn from_int_brackets(
        field: FieldSpec,
        dim: usize,
        brackets: &[(usize, usize, &[i64])],
    ) -> Result<Self, AlgebraError> {
        let bs: Vec<_> = brackets
            .iter()
            .map(|(i, j, v)| (*i, *j, v.iter().map(|&c| field.from_int(c)).collect()))
            .collect();
        Self::from_upper(field, dim, &bs)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
        self
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Direct summands recorded by [`direct_sum`]; empty if none were recorded.
    pub fn summands(&self) -> &[LieAlgebra] {
        &self.summands
    }

    /// Raw structure constants, indexed `(i * n + j) * n + k`.
    pub fn table(&self) -> &[FieldElement] {
        &self.table
    }

    /// `[e_i, e_j]` as a coordinate slice.
    #[inline]
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[FieldElement] {
        let n = self.dim;
        &self.table[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// Nonzero brackets `[e_i, e_j]` with `i < j`.
    pub fn upper_brackets(&self) -> impl Iterator<Item = (usize, usize, &[FieldElement])> {
        let n = self.dim;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, self.basis_bracket(i, j)))
            .filter(|(_, _, v)| !is_zero_vector(v))
    }

    fn check_len(&self, v: &[FieldElement]) -> Result<(), AlgebraError> {
        if v.len() != self.dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            }
            .into());
        }
        Ok(())
    }

    pub fn bracket(
        &self,
        x: &[FieldElement],
        y: &[FieldElement],
    ) -> Result<VectorFq, AlgebraError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[FieldElement], y: &[FieldElement]) -> VectorFq {
        let f = &self.field;
        let n = self.dim;
        let mut out = vec![FieldElement::ZERO; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = f.mul(xi, yj);
                for (slot, &c) in out.iter_mut().zip(self.basis_bracket(i, j)) {
                    *slot = f.mul_add(s, c, *slot);
                }
            }
        }
        out
    }

    /// Matrix of `ad_x : y -> [x, y]`; column `j` is `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[FieldElement]) -> Result<MatrixFq, AlgebraError> {
        self.check_len(x)?;
        let n = self.dim;
        let mut m = MatrixFq::zeros(n, n);
        self.ad_into(x, &mut m);
        Ok(m)
    }

    pub(crate) fn ad_into(&self, x: &[FieldElement], m: &mut MatrixFq) {
        let f = &self.field;
        let n = self.dim;
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = FieldElement::ZERO;
            }
        }
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, &c) in self.basis_bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        m[(k, j)] = f.mul_add(xi, c, m[(k, j)]);
                    }
                }
            }
        }
    }

    pub fn centralizer(&self, x: &[FieldElement]) -> Result<Subspace, AlgebraError> {
        Ok(linalg::kernel(&self.field, &self.ad_matrix(x)?))
    }

    /// `Z(L)`, the common kernel of every `ad_{e_i}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut stacked = MatrixFq::zeros(n * n, n);
        for i in 0..n {
            for j in 0..n {
                for (k, &c) in self.basis_bracket(i, j).iter().enumerate() {
                    stacked[(i * n + k, j)] = c;
                }
            }
        }
        linalg::kernel(&self.field, &stacked)
    }

    /// `L^2 = [L, L]`.
    pub fn derived_subalgebra(&self) -> Subspace {
        let n = self.dim;
        let rows: Vec<VectorFq> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.basis_bracket(i, j).to_vec())
            .collect();
        linalg::span(&self.field, &rows, n).expect("brackets have length n")
    }

    /// `[L, V]` for a subspace `V`.
    pub fn bracket_with(&self, v: &Subspace) -> Subspace {
        let n = self.dim;
        let mut rows = Vec::with_capacity(n * v.dim());
        for i in 0..n {
            let e = unit_vector(n, i);
            for b in v.basis_vectors() {
                rows.push(self.bracket_unchecked(&e, &b));
            }
        }
        linalg::span(&self.field, &rows, n).expect("brackets have length n")
    }

    /// `L^1 = L, L^{k+1} = [L, L^k]`, ending at the first zero or repeated term.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let last = series.last().unwrap();
            if last.is_zero() {
                break;
            }
            let next = self.bracket_with(last);
            if &next == last {
                break;
            }
            series.push(next);
        }
        series
    }

    /// Nilpotency class `c` (first `c` with `L^{c+1} = 0`); `Some(0)` for the
    /// zero algebra, `None` if not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let series = self.lower_central_series();
        series.last().unwrap().is_zero().then(|| series.len() - 1)
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|c| c.is_zero())
    }

    pub fn structure(&self) -> StructureReport {
        StructureReport {
            dim: self.dim,
            dim_derived: self.derived_subalgebra().dim(),
            dim_center: self.center().dim(),
            nilpotency_class: self.nilpotency_class(),
            is_abelian: self.is_abelian(),
        }
    }

    /// Checks antisymmetry and the Jacobi identity on basis triples.
    pub fn check_identities(&self) -> Result<(), AlgebraError> {
        let f = &self.field;
        let n = self.dim;
        for i in 0..n {
            if !is_zero_vector(self.basis_bracket(i, i)) {
                return Err(AlgebraError::NotAlternating { i, j: i });
            }
            for j in i + 1..n {
                let ok = self
                    .basis_bracket(i, j)
                    .iter()
                    .zip(self.basis_bracket(j, i))
                    .all(|(&a, &b)| f.add(a, b).is_zero());
                if !ok {
                    return Err(AlgebraError::NotAlternating { i, j });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let residual = jacobi_residual(self, i, j, k);
                    if !is_zero_vector(&residual) {
                        return Err(AlgebraError::JacobiFails {
                            i,
                            j,
                            k,
                            residual: residual.iter().map(|c| c.index()).collect(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Confirms this is a Lie algebra and reports its structure.
    pub fn validate(&self) -> Result<StructureReport, AlgebraError> {
        self.check_identities()?;
        Ok(self.structure())
    }
}

/// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
fn jacobi_residual(l: &LieAlgebra, i: usize, j: usize, k: usize) -> VectorFq {
    let f = &l.field;
    let n = l.dim;
    let mut out = vec![FieldElement::ZERO; n];
    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
        for (m, &coef) in l.basis_bracket(a, b).iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (slot, &d) in out.iter_mut().zip(l.basis_bracket(m, c)) {
                *slot = f.mul_add(coef, d, *slot);
            }
        }
    }
    out
}

fn labelled(l: LieAlgebra, labels: impl IntoIterator<Item = String>) -> LieAlgebra {
    l.with_labels(labels.into_iter().collect())
}

/// `A(n)`.
pub fn abelian(field: &FieldSpec, n: usize) -> LieAlgebra {
    let l = LieAlgebra::from_upper(field.clone(), n, &[]).expect("no brackets");
    labelled(l, (1..=n).map(|i| format!("e{i}")))
}

/// `H(m)` on the basis `(x_1..x_m, y_1..y_m, z)` with `[x_i, y_i] = z`.
pub fn heisenberg(field: &FieldSpec, m: usize) -> Result<LieAlgebra, AlgebraError> {
    if m == 0 {
        return Err(AlgebraError::InvalidParameter(
            "Heisenberg parameter m must be at least 1".into(),
        ));
    }
    let n = 2 * m + 1;
    let brackets: Vec<_> = (0..m).map(|i| (i, m + i, unit_vector(n, 2 * m))).collect();
    let l = LieAlgebra::from_upper(field.clone(), n, &brackets)?;
    let labels = (1..=m)
        .map(|i| format!("x{i}"))
        .chain((1..=m).map(|i| format!("y{i}")))
        .chain(["z".into()]);
    Ok(labelled(l, labels))
}

/// The two-dimensional non-abelian algebra `[x, y] = x`, basis `(x, y)`.
pub fn affine(field: &FieldSpec) -> LieAlgebra {
    let l = LieAlgebra::from_upper(field.clone(), 2, &[(0, 1, unit_vector(2, 0))]).expect("valid");
    labelled(l, ["x".into(), "y".into()])
}

/// `[a1, a2] = a3, [a1, a3] = z` on `(a1, a2, a3, z)`.
pub fn l43(field: &FieldSpec) -> LieAlgebra {
    let l = LieAlgebra::from_upper(
        field.clone(),
        4,
        &[(0, 1, unit_vector(4, 2)), (0, 2, unit_vector(4, 3))],
    )
    .expect("valid");
    labelled(l, ["a1", "a2", "a3", "z"].map(String::from))
}

/// `[a1, a2] = a3, [a1, a3] = z, [a2, a4] = z` on `(a1, a2, a3, a4, z)`.
pub fn l55(field: &FieldSpec) -> LieAlgebra {
    let l = LieAlgebra::from_upper(
        field.clone(),
        5,
        &[
            (0, 1, unit_vector(5, 2)),
            (0, 2, unit_vector(5, 4)),
            (1, 3, unit_vector(5, 4)),
        ],
    )
    .expect("valid");
    labelled(l, ["a1", "a2", "a3", "a4", "z"].map(String::from))
}

fn flat_summands(l: &LieAlgebra) -> Vec<LieAlgebra> {
    if l.summands.is_empty() {
        vec![l.clone()]
    } else {
        l.summands.clone()
    }
}

/// `L1 (+) L2` with `L1`'s basis first. The result remembers its summands.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Result<LieAlgebra, AlgebraError> {
    if a.field != b.field {
        return Err(AlgebraError::FieldMismatch(
            a.field.clone(),
            b.field.clone(),
        ));
    }
    let (n1, n2) = (a.dim, b.dim);
    let n = n1 + n2;
    let mut table = vec![FieldElement::ZERO; n * n * n];
    for (src, off, sn) in [(a, 0, n1), (b, n1, n2)] {
        for i in 0..sn {
            for j in 0..sn {
                for (k, &c) in src.basis_bracket(i, j).iter().enumerate() {
                    table[((i + off) * n + (j + off)) * n + k + off] = c;
                }
            }
        }
    }
    let mut out = LieAlgebra::from_table(a.field.clone(), n, table)?;
    if let (Some(la), Some(lb)) = (a.labels(), b.labels()) {
        let labels = la
            .iter()
            .map(|s| format!("{s}'"))
            .chain(lb.iter().map(|s| format!("{s}\"")))
            .collect();
        out.labels = Some(labels);
    }
    out.summands = flat_summands(a);
    out.summands.extend(flat_summands(b));
    Ok(out)
}

/// Central product gluing the central basis vectors `e_{z1}` of `a` and
/// `e_{z2}` of `b`. Basis: `a` without `z1`, then `b` without `z2`, then the
/// shared central element.
pub fn central_product(
    a: &LieAlgebra,
    z1: usize,
    b: &LieAlgebra,
    z2: usize,
) -> Result<LieAlgebra, AlgebraError> {
    if a.field != b.field {
        return Err(AlgebraError::FieldMismatch(
            a.field.clone(),
            b.field.clone(),
        ));
    }
    for (l, z) in [(a, z1), (b, z2)] {
        if z >= l.dim {
            return Err(AlgebraError::InvalidParameter(format!(
                "central index {} out of range for dimension {}",
                z + 1,
                l.dim
            )));
        }
        if !l.center().contains(&l.field, &unit_vector(l.dim, z))? {
            return Err(AlgebraError::NotCentralElement(z));
        }
    }
    let n = a.dim + b.dim - 1;
    let glued = n - 1;
    let map_a = |i: usize| match i.cmp(&z1) {
        std::cmp::Ordering::Less => i,
        std::cmp::Ordering::Equal => glued,
        std::cmp::Ordering::Greater => i - 1,
    };
    let off = a.dim - 1;
    let map_b = |i: usize| match i.cmp(&z2) {
        std::cmp::Ordering::Less => off + i,
        std::cmp::Ordering::Equal => glued,
        std::cmp::Ordering::Greater => off + i - 1,
    };
    let f = &a.field;
    let mut table = vec![FieldElement::ZERO; n * n * n];
    for (src, map) in [(a, &map_a as &dyn Fn(usize) -> usize), (b, &map_b)] {
        for i in 0..src.dim {
            for j in 0..src.dim {
                for (k, &c) in src.basis_bracket(i, j).iter().enumerate() {
                    let slot = &mut table[(map(i) * n + map(j)) * n + map(k)];
                    *slot = f.add(*slot, c);
                }
            }
        }
    }
    let mut out = LieAlgebra::from_table(f.clone(), n, table)?;
    if let (Some(la), Some(lb)) = (a.labels(), b.labels()) {
        let mut labels = vec![String::new(); n];
        for (i, s) in la.iter().enumerate() {
            labels[map_a(i)] = s.clone();
        }
        for (i, s) in lb.iter().enumerate() {
            if i != z2 {
                labels[map_b(i)] = format!("{s}'");
            }
        }
        out.labels = Some(labels);
    }
    out.check_identities()?;
    Ok(out)
}
