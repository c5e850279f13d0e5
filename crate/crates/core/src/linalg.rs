//! Dense linear algebra over `F_q`: Gaussian elimination, rank, kernels and
//! subspaces kept in reduced row-echelon form.

use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A coordinate vector in `F_q^n`.
pub type VectorFq = Vec<FieldElement>;

/// Standard basis vector `e_i` of `F_q^n`.
pub fn unit_vector(n: usize, i: usize) -> VectorFq {
    let mut v = vec![FieldElement::ZERO; n];
    v[i] = FieldElement::ONE;
    v
}

pub fn is_zero_vector(v: &[FieldElement]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// Decodes `index` into `n` base-`q` digits, most significant first.
pub fn vector_from_index(f: &FieldSpec, n: usize, mut index: u64) -> VectorFq {
    let q = f.q() as u64;
    let mut v = vec![FieldElement::ZERO; n];
    for slot in v.iter_mut().rev() {
        *slot = f.element((index % q) as u32).expect("digit below q");
        index /= q;
    }
    v
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl MatrixFq {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixFq {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElement::ONE;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[VectorFq]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(MatrixFq {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Wraps row-major data; panics if the length is not `rows * cols`.
    pub fn from_data(rows: usize, cols: usize, data: Vec<FieldElement>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        MatrixFq { rows, cols, data }
    }

    pub fn from_ints(f: &FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| f.from_int(v)))
            .collect();
        MatrixFq {
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> VectorFq {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn mul_vec(&self, f: &FieldSpec, v: &[FieldElement]) -> Result<VectorFq, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| f.mul_add(a, b, acc))
            })
            .collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &MatrixFq) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixFq {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }
}

impl std::ops::Index<(usize, usize)> for MatrixFq {
    type Output = FieldElement;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatrixFq {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElement {
        &mut self.data[r * self.cols + c]
    }
}

/// In-place reduction of a row-major `rows x cols` buffer to reduced
/// row-echelon form. Returns the pivot columns; the first `pivots.len()`
/// rows are the nonzero rows.
pub fn rref_in_place(
    f: &FieldSpec,
    data: &mut [FieldElement],
    rows: usize,
    cols: usize,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for k in 0..cols {
                data.swap(pr * cols + k, r * cols + k);
            }
        }
        let inv = f.inv(data[r * cols + c]).expect("pivot is nonzero");
        for k in c..cols {
            data[r * cols + k] = f.mul(data[r * cols + k], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c];
            if factor.is_zero() {
                continue;
            }
            let neg = f.neg(factor);
            for k in c..cols {
                data[i * cols + k] = f.mul_add(neg, data[r * cols + k], data[i * cols + k]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a row-major buffer, destroying it. Forward elimination only.
pub fn rank_in_place(f: &FieldSpec, data: &mut [FieldElement], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for k in c..cols {
                data.swap(pr * cols + k, r * cols + k);
            }
        }
        let inv = f.inv(data[r * cols + c]).expect("pivot is nonzero");
        for i in r + 1..rows {
            let factor = data[i * cols + c];
            if factor.is_zero() {
                continue;
            }
            let neg = f.neg(f.mul(factor, inv));
            for k in c..cols {
                data[i * cols + k] = f.mul_add(neg, data[r * cols + k], data[i * cols + k]);
            }
        }
        r += 1;
    }
    r
}

pub fn rank(f: &FieldSpec, m: &MatrixFq) -> usize {
    let mut data = m.data.clone();
    rank_in_place(f, &mut data, m.rows, m.cols)
}

/// A subspace of `F_q^n` held as the nonzero rows of its reduced row-echelon
/// basis. Two subspaces are equal iff their bases are identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: MatrixFq,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: MatrixFq::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: MatrixFq::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(f: &FieldSpec, m: &MatrixFq) -> Self {
        let mut data = m.data.clone();
        let pivots = rref_in_place(f, &mut data, m.rows, m.cols);
        data.truncate(pivots.len() * m.cols);
        Subspace {
            ambient: m.cols,
            basis: MatrixFq {
                rows: pivots.len(),
                cols: m.cols,
                data,
            },
            pivots,
        }
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &MatrixFq {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<VectorFq> {
        (0..self.dim())
            .map(|r| self.basis.row(r).to_vec())
            .collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not used as pivots. The unit vectors on these coordinates
    /// span a complement of `self`.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn contains(&self, f: &FieldSpec, v: &[FieldElement]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                got: v.len(),
            });
        }
        // Reduce v against the echelon basis; v is in the span iff nothing remains.
        let mut rest = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let factor = rest[pc];
            if factor.is_zero() {
                continue;
            }
            let neg = f.neg(factor);
            for (k, slot) in rest.iter_mut().enumerate() {
                *slot = f.mul_add(neg, self.basis[(r, k)], *slot);
            }
        }
        Ok(is_zero_vector(&rest))
    }

    pub fn is_subspace_of(&self, f: &FieldSpec, other: &Subspace) -> Result<bool, LinalgError> {
        for r in 0..self.dim() {
            if !other.contains(f, self.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, f: &FieldSpec, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        Ok(Subspace::row_space(f, &self.basis.vstack(&other.basis)?))
    }

    /// Every vector of the subspace, in lexicographic order of coefficients
    /// on the basis. Only sensible for tiny subspaces.
    pub fn elements(&self, f: &FieldSpec) -> Vec<VectorFq> {
        let count = (f.q() as u64).pow(self.dim() as u32);
        (0..count)
            .map(|idx| {
                let coeffs = vector_from_index(f, self.dim(), idx);
                let mut v = vec![FieldElement::ZERO; self.ambient];
                for (r, &c) in coeffs.iter().enumerate() {
                    for (k, slot) in v.iter_mut().enumerate() {
                        *slot = f.mul_add(c, self.basis[(r, k)], *slot);
                    }
                }
                v
            })
            .collect()
    }
}

pub fn span(f: &FieldSpec, vectors: &[VectorFq], ambient: usize) -> Result<Subspace, LinalgError> {
    let m = MatrixFq::from_rows(ambient, vectors)?;
    Ok(Subspace::row_space(f, &m))
}

/// Null space `{v : m v = 0}` as a subspace of `F_q^{cols}`.
pub fn kernel(f: &FieldSpec, m: &MatrixFq) -> Subspace {
    let mut data = m.data.clone();
    let pivots = rref_in_place(f, &mut data, m.rows, m.cols);
    let cols = m.cols;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    // One kernel vector per free column: set it to 1 and solve the pivots.
    let vectors: Vec<VectorFq> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![FieldElement::ZERO; cols];
            v[fc] = FieldElement::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(data[r * cols + fc]);
            }
            v
        })
        .collect();
    span(f, &vectors, cols).expect("kernel vectors have the column count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::of_order(q).unwrap()
    }

    fn ints(f: &FieldSpec, v: &[i64]) -> VectorFq {
        v.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn rank_examples() {
        let f2 = f(2);
        assert_eq!(rank(&f2, &MatrixFq::identity(3)), 3);
        assert_eq!(rank(&f2, &MatrixFq::zeros(4, 4)), 0);
        assert_eq!(
            rank(&f2, &MatrixFq::from_ints(&f2, &[&[1, 1, 0], &[1, 1, 1]])),
            2
        );
    }

    #[test]
    fn span_examples() {
        let f2 = f(2);
        assert_eq!(span(&f2, &[], 3).unwrap().dim(), 0);
        let s = span(&f2, &[ints(&f2, &[1, 0]), ints(&f2, &[1, 1])], 2).unwrap();
        assert_eq!(s, Subspace::full(2));
        let s = span(
            &f2,
            &[
                ints(&f2, &[1, 1, 0]),
                ints(&f2, &[1, 1, 1]),
                ints(&f2, &[0, 0, 1]),
            ],
            3,
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
        assert!(matches!(
            span(&f2, &[ints(&f2, &[1, 0])], 3),
            Err(LinalgError::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn kernel_examples() {
        let f3 = f(3);
        assert_eq!(kernel(&f3, &MatrixFq::zeros(2, 5)).dim(), 5);
        assert_eq!(kernel(&f3, &MatrixFq::identity(4)).dim(), 0);
        // ad of x1 in H(1), basis (x1, y1, z): only column y1 is nonzero, equal to z
        let f2 = f(2);
        let ad = MatrixFq::from_ints(&f2, &[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
        let k = kernel(&f2, &ad);
        assert_eq!(
            k,
            span(&f2, &[ints(&f2, &[1, 0, 0]), ints(&f2, &[0, 0, 1])], 3).unwrap()
        );
    }

    #[test]
    fn subspace_sum_examples() {
        let f2 = f(2);
        let v = span(&f2, &[ints(&f2, &[1, 1, 0])], 3).unwrap();
        assert_eq!(v.sum(&f2, &Subspace::zero(3)).unwrap(), v);
        let e1 = span(&f2, &[ints(&f2, &[1, 0, 0])], 3).unwrap();
        let e2 = span(&f2, &[ints(&f2, &[0, 1, 0])], 3).unwrap();
        assert_eq!(e1.sum(&f2, &e2).unwrap().dim(), 2);
        let a = span(&f2, &[ints(&f2, &[1, 1, 0])], 3).unwrap();
        let b = span(&f2, &[ints(&f2, &[0, 1, 1])], 3).unwrap();
        let c = span(&f2, &[ints(&f2, &[1, 0, 1])], 3).unwrap();
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
            let s = x.sum(&f2, y).unwrap();
            assert_eq!(s.dim(), 2);
            assert!(s.contains(&f2, &ints(&f2, &[1, 1, 0])).unwrap());
            assert!(s.contains(&f2, &ints(&f2, &[0, 1, 1])).unwrap());
            assert!(s.contains(&f2, &ints(&f2, &[1, 0, 1])).unwrap());
        }
        assert!(e1.sum(&f2, &Subspace::zero(2)).is_err());
    }

    #[test]
    fn enumerated_size_is_q_to_the_dim() {
        let f2 = f(2);
        for dim in 0..=12 {
            let vs: Vec<VectorFq> = (0..dim).map(|i| unit_vector(12, i)).collect();
            let s = span(&f2, &vs, 12).unwrap();
            let els = s.elements(&f2);
            assert_eq!(els.len(), 1 << dim);
            let distinct: std::collections::HashSet<_> = els.iter().collect();
            assert_eq!(distinct.len(), 1 << dim);
        }
    }

    fn arb_matrix() -> impl Strategy<Value = (u64, usize, usize, Vec<u32>)> {
        (
            prop::sample::select(vec![2u64, 3, 5]),
            1usize..=8,
            1usize..=8,
        )
            .prop_flat_map(|(q, r, c)| {
                prop::collection::vec(0..q as u32, r * c).prop_map(move |d| (q, r, c, d))
            })
    }

    fn build(q: u64, r: usize, c: usize, d: &[u32]) -> (FieldSpec, MatrixFq) {
        let f = f(q);
        let data = d.iter().map(|&x| f.element(x).unwrap()).collect();
        (f, MatrixFq::from_data(r, c, data))
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank((q, r, c, d) in arb_matrix()) {
            let (f, m) = build(q, r, c, &d);
            prop_assert_eq!(rank(&f, &m), rank(&f, &m.transpose()));
        }

        #[test]
        fn rank_nullity((q, r, c, d) in arb_matrix()) {
            let (f, m) = build(q, r, c, &d);
            let k = kernel(&f, &m);
            prop_assert_eq!(k.dim() + rank(&f, &m), c);
            for v in k.basis_vectors() {
                prop_assert!(is_zero_vector(&m.mul_vec(&f, &v).unwrap()));
            }
        }

        #[test]
        fn reechelonization_is_stable((q, r, c, d) in arb_matrix()) {
            let (f, m) = build(q, r, c, &d);
            let s = Subspace::row_space(&f, &m);
            prop_assert_eq!(span(&f, &s.basis_vectors(), c).unwrap(), s.clone());
            for row in 0..r {
                prop_assert!(s.contains(&f, m.row(row)).unwrap());
            }
            prop_assert_eq!(s.dim(), rank(&f, &m));
        }
    }
}
