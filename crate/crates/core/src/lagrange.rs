//! Spectral projection onto a known finite spectrum.
//!
//! For an operator `a` whose eigenvalues are claimed to lie in a list of
//! distinct values, `P_λ = Π_{μ≠λ} (a − μ)/(λ − μ)` are the spectral
//! projectors. The construction is then certified: the family must be
//! complete, idempotent, mutually orthogonal and satisfy `a·P_λ = λ·P_λ`.
//! Passing all four proves that the minimal polynomial of `a` divides
//! `Π (x − λ)`, i.e. that `a` is diagonalizable with spectrum inside the list.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Certified spectral projectors, in the order the spectrum was given.
#[derive(Clone, Debug)]
pub struct SpectralFamily<S> {
    entries: Vec<(S, DenseMatrix<S>)>,
}

impl<S: Scalar> SpectralFamily<S> {
    pub fn eigenvalues(&self) -> impl Iterator<Item = &S> {
        self.entries.iter().map(|(l, _)| l)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &DenseMatrix<S>)> {
        self.entries.iter().map(|(l, p)| (l, p))
    }

    pub fn projector(&self, eigenvalue: &S) -> Option<&DenseMatrix<S>> {
        self.entries
            .iter()
            .find(|(l, _)| l == eigenvalue)
            .map(|(_, p)| p)
    }

    pub fn projector_at(&self, index: usize) -> &DenseMatrix<S> {
        &self.entries[index].1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Eigenvalues whose projector is nonzero, i.e. that actually occur.
    pub fn occurring(&self, tol: f64) -> Vec<S> {
        self.entries
            .iter()
            .filter(|(_, p)| !p.is_zero_within(tol))
            .map(|(l, _)| l.clone())
            .collect()
    }
}

fn witness<S: Scalar>(m: &DenseMatrix<S>, tol: f64) -> String {
    match m.first_nonzero(tol) {
        Some((i, j, v)) => format!("residual entry ({i},{j}) = {v}"),
        None => "no nonzero entry".into(),
    }
}

fn certify<S: Scalar>(residual: DenseMatrix<S>, identity: String, tol: f64) -> Result<()> {
    if residual.is_zero_within(tol) {
        Ok(())
    } else {
        Err(Error::Spectrum {
            witness: witness(&residual, tol),
            identity,
        })
    }
}

/// Builds and certifies the spectral projectors of `a` for `spectrum`.
///
/// `tol` is ignored by the exact backend.
pub fn lagrange_eigenprojectors<S: Scalar>(
    a: &DenseMatrix<S>,
    spectrum: &[S],
    tol: f64,
) -> Result<SpectralFamily<S>> {
    if !a.is_square() {
        return Err(Error::Dimension {
            op: "lagrange_eigenprojectors",
            left: a.shape(),
            right: a.shape(),
        });
    }
    for (i, l) in spectrum.iter().enumerate() {
        if spectrum[..i].iter().any(|m| m.approx_eq(l, tol)) {
            return Err(Error::Domain(format!("eigenvalue {l} listed twice")));
        }
    }
    let n = a.rows();
    let shifted: Vec<DenseMatrix<S>> = spectrum.iter().map(|mu| a.shift(&mu.neg())).collect();

    let mut entries = Vec::with_capacity(spectrum.len());
    for (i, lambda) in spectrum.iter().enumerate() {
        let mut p = DenseMatrix::identity(n);
        for (j, mu) in spectrum.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = lambda.sub(mu).inv().expect("distinct eigenvalues");
            p = (&p * &shifted[j]).scale(&denom);
        }
        entries.push((lambda.clone(), p));
    }

    let mut total = DenseMatrix::zeros(n, n);
    for (_, p) in &entries {
        total = &total + p;
    }
    certify(
        &total - &DenseMatrix::identity(n),
        "completeness".into(),
        tol,
    )?;

    for (i, (lambda, p)) in entries.iter().enumerate() {
        certify(&(p * p) - p, format!("idempotence at {lambda}"), tol)?;
        certify(
            &(a * p) - &p.scale(lambda),
            format!("eigen-equation at {lambda}"),
            tol,
        )?;
        for (mu, q) in &entries[i + 1..] {
            certify(p * q, format!("orthogonality of {lambda} and {mu}"), tol)?;
        }
    }
    Ok(SpectralFamily { entries })
}

/// Characteristic polynomial `det(x·I − a)` by the Faddeev–LeVerrier
/// recursion. Coefficients are returned lowest degree first; the leading
/// coefficient is 1.
pub fn characteristic_polynomial<S: Scalar>(a: &DenseMatrix<S>) -> Result<Vec<S>> {
    if !a.is_square() {
        return Err(Error::Dimension {
            op: "characteristic_polynomial",
            left: a.shape(),
            right: a.shape(),
        });
    }
    let n = a.rows();
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut m = DenseMatrix::zeros(n, n);
    for k in 1..=n {
        m = (a * &m).shift(&coeffs[n - k + 1]);
        let am = a * &m;
        coeffs[n - k] = am.trace().neg().mul(&S::from_ratio(1, k as i64));
    }
    Ok(coeffs)
}

/// Monic polynomial with the given roots, lowest degree first.
pub fn polynomial_from_roots<S: Scalar>(roots: &[S]) -> Vec<S> {
    let mut poly = vec![S::one()];
    for root in roots {
        let mut next = vec![S::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(root));
        }
        poly = next;
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    type M = DenseMatrix<ExactScalar>;

    fn int(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn diagonal_projectors() {
        let a = M::from_int_rows(&[&[1, 0], &[0, -1]]);
        let fam = lagrange_eigenprojectors(&a, &[int(1), int(-1)], 0.0).unwrap();
        assert_eq!(
            fam.projector(&int(1)).unwrap(),
            &M::from_int_rows(&[&[1, 0], &[0, 0]])
        );
        assert_eq!(
            fam.projector(&int(-1)).unwrap(),
            &M::from_int_rows(&[&[0, 0], &[0, 1]])
        );
    }

    #[test]
    fn identity_single_eigenvalue() {
        let fam = lagrange_eigenprojectors(&M::identity(3), &[int(1)], 0.0).unwrap();
        assert_eq!(fam.projector(&int(1)).unwrap(), &M::identity(3));
    }

    #[test]
    fn wrong_spectrum_is_rejected() {
        let a = M::from_int_rows(&[&[2, 0], &[0, -1]]);
        let err = lagrange_eigenprojectors(&a, &[int(1), int(-1)], 0.0).unwrap_err();
        assert!(matches!(err, Error::Spectrum { .. }));
        // A nontrivial Jordan block is not diagonalizable.
        let jordan = M::from_int_rows(&[&[1, 1], &[0, 1]]);
        assert!(lagrange_eigenprojectors(&jordan, &[int(1)], 0.0).is_err());
    }

    #[test]
    fn duplicate_eigenvalues_rejected() {
        let a = M::identity(2);
        assert!(matches!(
            lagrange_eigenprojectors(&a, &[int(1), int(1)], 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn absent_eigenvalue_gets_zero_projector() {
        let a = M::identity(2);
        let fam = lagrange_eigenprojectors(&a, &[int(1), int(3)], 0.0).unwrap();
        assert_eq!(fam.occurring(0.0), vec![int(1)]);
    }

    #[test]
    fn charpoly_of_rotation() {
        let r = M::from_int_rows(&[&[0, 1], &[-1, 0]]);
        // x² + 1
        assert_eq!(
            characteristic_polynomial(&r).unwrap(),
            vec![int(1), int(0), int(1)]
        );
        let i = ExactScalar::imag_unit();
        assert_eq!(
            polynomial_from_roots(&[i.clone(), i.neg()]),
            vec![int(1), int(0), int(1)]
        );
    }

    #[test]
    fn charpoly_of_triangular_matches_roots() {
        let a = M::from_int_rows(&[&[3, 5, 7], &[0, -2, 1], &[0, 0, 4]]);
        assert_eq!(
            characteristic_polynomial(&a).unwrap(),
            polynomial_from_roots(&[int(3), int(-2), int(4)])
        );
    }
}
