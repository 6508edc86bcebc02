//! Dense matrices over a [`Scalar`] backend.
//!
//! Storage is dense, but products skip zero entries: the spinor operators in
//! this crate have only a few percent nonzero entries, which makes exact
//! arithmetic on 64×64 and 256×256 matrices practical.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<S>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension {
                op: "construct",
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn scalar_identity(n: usize, value: &S) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { value.clone() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Domain("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), c, |i, j| S::from_int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    fn check_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(self.zip_with(other, S::add))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        Ok(self.zip_with(other, S::sub))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|e| if e.is_zero() { S::zero() } else { e.mul(c) })
    }

    pub fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&S::from_ratio(num, den))
    }

    /// `self + c·I`; requires a square matrix.
    pub fn shift(&self, c: &S) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let k = i * self.cols + i;
            out.entries[k] = out.entries[k].add(c);
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let support: Vec<Vec<usize>> = (0..other.rows)
            .map(|k| {
                (0..other.cols)
                    .filter(|&j| !other.get(k, j).is_zero())
                    .collect()
            })
            .collect();
        let mut entries = vec![S::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            let out = &mut entries[i * other.cols..(i + 1) * other.cols];
            for (k, cols) in support.iter().enumerate() {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in cols {
                    out[j] = out[j].add(&a.mul(other.get(k, j)));
                }
            }
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// `ab + ba`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_add(&other.try_mul(self)?)
    }

    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                op: "apply",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn trace(&self) -> S {
        let mut acc = S::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let a = self.get(i / other.rows, j / other.cols);
            if a.is_zero() {
                S::zero()
            } else {
                a.mul(other.get(i % other.rows, j % other.cols))
            }
        })
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| e.is_negligible(tol))
    }

    /// First entry (row-major) that is not negligible, as a witness.
    pub fn first_nonzero(&self, tol: f64) -> Option<(usize, usize, S)> {
        self.entries
            .iter()
            .position(|e| !e.is_negligible(tol))
            .map(|p| (p / self.cols, p % self.cols, self.entries[p].clone()))
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(S::modulus_f64).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Flips the sign of the first nonzero entry. Used only to build
    /// deliberately broken models.
    pub fn with_first_entry_negated(&self) -> Self {
        let mut out = self.clone();
        if let Some(p) = out.entries.iter().position(|e| !e.is_zero()) {
            out.entries[p] = out.entries[p].neg();
        }
        out
    }

    /// Linearly independent columns, scanned left to right with a
    /// first-nonzero pivot rule. The returned vectors are actual columns of
    /// `self`, so for a projector they lie in its image.
    pub fn column_space_basis(&self, tol: f64) -> Vec<Vec<S>> {
        let mut reduced: Vec<(usize, Vec<S>)> = Vec::new();
        let mut basis = Vec::new();
        for j in 0..self.cols {
            let col = self.column(j);
            if col.iter().all(|x| x.is_negligible(tol)) {
                continue;
            }
            let mut v = col.clone();
            for (pivot, w) in &reduced {
                if v[*pivot].is_negligible(tol) {
                    continue;
                }
                let factor = v[*pivot].div(&w[*pivot]).expect("pivot is nonzero");
                for (x, y) in v.iter_mut().zip(w) {
                    if !y.is_zero() {
                        *x = x.sub(&factor.mul(y));
                    }
                }
            }
            if let Some(pivot) = v.iter().position(|x| !x.is_negligible(tol)) {
                reduced.push((pivot, v));
                basis.push(col);
            }
        }
        basis
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.column_space_basis(tol).len()
    }

    /// SHA-256 over a canonical rendering of the entries.
    pub fn digest_into(&self, hasher: &mut Sha256) {
        hasher.update(format!("{}x{}:", self.rows, self.cols).as_bytes());
        for e in &self.entries {
            hasher.update(e.to_string().as_bytes());
            hasher.update(b";");
        }
    }
}

impl<S: fmt::Debug> fmt::Debug for DenseMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:?}", self.entries[i * self.cols + j]))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact product `a·b`; fails on non-conforming shapes.
pub fn mat_mul<S: Scalar>(a: &DenseMatrix<S>, b: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
    a.try_mul(b)
}

// Operator sugar for internal code where shapes hold by construction.
// These panic on a shape mismatch; use the `try_*` methods otherwise.

impl<S: Scalar> Mul for &DenseMatrix<S> {
    type Output = DenseMatrix<S>;
    fn mul(self, rhs: Self) -> DenseMatrix<S> {
        self.try_mul(rhs).expect("conforming shapes")
    }
}

impl<S: Scalar> Add for &DenseMatrix<S> {
    type Output = DenseMatrix<S>;
    fn add(self, rhs: Self) -> DenseMatrix<S> {
        self.try_add(rhs).expect("equal shapes")
    }
}

impl<S: Scalar> Sub for &DenseMatrix<S> {
    type Output = DenseMatrix<S>;
    fn sub(self, rhs: Self) -> DenseMatrix<S> {
        self.try_sub(rhs).expect("equal shapes")
    }
}

impl<S: Scalar> Neg for &DenseMatrix<S> {
    type Output = DenseMatrix<S>;
    fn neg(self) -> DenseMatrix<S> {
        self.map(S::neg)
    }
}

impl<S: Scalar> Add for DenseMatrix<S> {
    type Output = DenseMatrix<S>;
    fn add(self, rhs: Self) -> DenseMatrix<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for DenseMatrix<S> {
    type Output = DenseMatrix<S>;
    fn sub(self, rhs: Self) -> DenseMatrix<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for DenseMatrix<S> {
    type Output = DenseMatrix<S>;
    fn mul(self, rhs: Self) -> DenseMatrix<S> {
        &self * &rhs
    }
}

/// Sum of an iterator of equally shaped matrices; `zeros(rows, cols)` when empty.
pub fn sum_matrices<S: Scalar>(
    rows: usize,
    cols: usize,
    items: impl IntoIterator<Item = DenseMatrix<S>>,
) -> DenseMatrix<S> {
    items
        .into_iter()
        .fold(DenseMatrix::zeros(rows, cols), |acc, m| &acc + &m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use proptest::prelude::*;

    type M = DenseMatrix<ExactScalar>;

    #[test]
    fn identity_is_neutral() {
        let m = M::from_int_rows(&[&[1, 2, 0, -1], &[0, 3, 4, 0], &[5, 0, 0, 1], &[2, 2, 2, 2]]);
        assert_eq!(mat_mul(&M::identity(4), &m).unwrap(), m);
        assert_eq!(mat_mul(&m, &M::identity(4)).unwrap(), m);
    }

    #[test]
    fn zero_annihilates() {
        let m = M::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(mat_mul(&m, &M::zeros(2, 2)).unwrap(), M::zeros(2, 2));
    }

    #[test]
    fn rotation_squares_to_minus_identity() {
        let r = M::from_int_rows(&[&[0, 1], &[-1, 0]]);
        assert_eq!(mat_mul(&r, &r).unwrap(), M::identity(2).scale_ratio(-1, 1));
    }

    #[test]
    fn shape_mismatch_is_dimension_error() {
        let a = M::zeros(2, 3);
        let b = M::zeros(2, 3);
        assert!(matches!(mat_mul(&a, &b), Err(Error::Dimension { .. })));
        assert!(matches!(
            a.try_add(&M::zeros(3, 2)),
            Err(Error::Dimension { .. })
        ));
        assert!(M::new(2, 2, vec![ExactScalar::one()]).is_err());
    }

    #[test]
    fn kron_of_identities() {
        let a = M::identity(2);
        let b = M::from_int_rows(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&b);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k.get(0, 1), &ExactScalar::one());
        assert_eq!(k.get(2, 3), &ExactScalar::one());
        assert_eq!(k.get(0, 3), &ExactScalar::zero());
    }

    #[test]
    fn column_space_of_projector() {
        let p = M::from_int_rows(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        let basis = p.column_space_basis(0.0);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], p.column(0));
        assert_eq!(basis[1], p.column(2));
        let dependent = M::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(dependent.rank(0.0), 1);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = M> {
        proptest::collection::vec((-4i64..5, -4i64..5, 1i64..4), n * n).prop_map(move |v| {
            M::new(
                n,
                n,
                v.into_iter()
                    .map(|(a, b, d)| ExactScalar::from_parts((a, d), (b, d)))
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn product_is_associative_and_distributive(
            a in small_matrix(3), b in small_matrix(3), c in small_matrix(3)
        ) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).conj_transpose(), &b.conj_transpose() * &a.conj_transpose());
        }
    }
}
