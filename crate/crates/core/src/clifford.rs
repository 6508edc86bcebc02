//! Matrix model of the Clifford algebra of `R^{4m}` on `C^{2^{2m}}`.
//!
//! Convention: `e_i e_j + e_j e_i = −2 δ_ij`. With this sign the Kraines and
//! Kähler operators built on top have the spectra the rest of the crate
//! relies on.
//!
//! Gamma matrices are iterated Kronecker products of three 2×2 blocks
//! (`σ₃`, `iσ₁`, `iσ₂`), so every entry lies in `{0, ±1, ±i}`. Vector index
//! `i` (zero-based) corresponds to the basis vector `e_{i+1}`; the pairing
//! `(e_{2j−1}, e_{2j})` is `(2j−2, 2j−1)` in code.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

pub const DEFAULT_MAX_M: usize = 4;

/// Upper bound on the quaternionic dimension accepted by constructors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResourceCap {
    pub max_m: usize,
}

impl Default for ResourceCap {
    fn default() -> Self {
        ResourceCap {
            max_m: DEFAULT_MAX_M,
        }
    }
}

impl ResourceCap {
    pub fn check(&self, m: usize) -> Result<()> {
        if m > self.max_m {
            Err(Error::Resource { m, cap: self.max_m })
        } else {
            Ok(())
        }
    }
}

/// Coordinates of a vector of the complexified `R^{4m}` in the standard basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> ComplexVector<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        ComplexVector { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        ComplexVector {
            coeffs: vec![S::zero(); n],
        }
    }

    /// Zero-based standard basis vector.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.coeffs[i] = S::one();
        v
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        ComplexVector {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Applies a real `n×n` matrix acting on coordinates.
    pub fn transform(&self, m: &DenseMatrix<S>) -> Self {
        ComplexVector {
            coeffs: m.apply(&self.coeffs).expect("vector length matches"),
        }
    }

    /// Bilinear (not sesquilinear) square `Σ v_i²`.
    pub fn bilinear_square(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |acc, c| acc.add(&c.mul(c)))
    }
}

#[derive(Clone, Debug)]
pub struct CliffordModel<S> {
    m: usize,
    gamma: Vec<DenseMatrix<S>>,
}

/// Builds the gamma-matrix model for quaternionic dimension `m`.
pub fn build_clifford_model<S: Scalar>(m: usize, cap: ResourceCap) -> Result<CliffordModel<S>> {
    if m == 0 {
        return Err(Error::Domain(
            "quaternionic dimension must be positive".into(),
        ));
    }
    cap.check(m)?;
    let i = S::imag_unit();
    let id2 = DenseMatrix::<S>::identity(2);
    let sigma3 = DenseMatrix::<S>::from_int_rows(&[&[1, 0], &[0, -1]]);
    // iσ₁ and iσ₂
    let a = DenseMatrix::<S>::from_int_rows(&[&[0, 1], &[1, 0]]).scale(&i);
    let b = DenseMatrix::<S>::from_int_rows(&[&[0, 1], &[-1, 0]]);

    let slots = 2 * m;
    let kron_chain = |k: usize, block: &DenseMatrix<S>| {
        let mut acc = DenseMatrix::<S>::identity(1);
        for slot in 0..slots {
            let factor = match slot.cmp(&k) {
                std::cmp::Ordering::Less => &sigma3,
                std::cmp::Ordering::Equal => block,
                std::cmp::Ordering::Greater => &id2,
            };
            acc = acc.kron(factor);
        }
        acc
    };
    let mut gamma = Vec::with_capacity(4 * m);
    for k in 0..slots {
        gamma.push(kron_chain(k, &a));
        gamma.push(kron_chain(k, &b));
    }
    Ok(CliffordModel { m, gamma })
}

impl<S: Scalar> CliffordModel<S> {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Real dimension `n = 4m`.
    pub fn n(&self) -> usize {
        4 * self.m
    }

    pub fn spinor_dim(&self) -> usize {
        1 << (2 * self.m)
    }

    pub fn gamma(&self, i: usize) -> &DenseMatrix<S> {
        &self.gamma[i]
    }

    pub fn gammas(&self) -> &[DenseMatrix<S>] {
        &self.gamma
    }

    pub fn identity(&self) -> DenseMatrix<S> {
        DenseMatrix::identity(self.spinor_dim())
    }

    pub fn zero_operator(&self) -> DenseMatrix<S> {
        DenseMatrix::zeros(self.spinor_dim(), self.spinor_dim())
    }

    /// Clifford multiplication by `v`: `Σ_i v_i γ_i`.
    pub fn vector_action(&self, v: &ComplexVector<S>) -> Result<DenseMatrix<S>> {
        if v.len() != self.n() {
            return Err(Error::Dimension {
                op: "vector_action",
                left: (self.n(), 1),
                right: (v.len(), 1),
            });
        }
        let mut acc = self.zero_operator();
        for (c, g) in v.coeffs().iter().zip(&self.gamma) {
            if !c.is_zero() {
                acc = &acc + &g.scale(c);
            }
        }
        Ok(acc)
    }

    /// First violated relation `γ_iγ_j + γ_jγ_i = −2δ_ij`, if any.
    pub fn anticommutation_witness(&self, tol: f64) -> Option<String> {
        let id = self.identity();
        for i in 0..self.n() {
            for j in i..self.n() {
                let mut r = self.gamma[i]
                    .anticommutator(&self.gamma[j])
                    .expect("square");
                if i == j {
                    r = &r + &id.scale_ratio(2, 1);
                }
                if let Some((a, b, v)) = r.first_nonzero(tol) {
                    return Some(format!(
                        "gamma {i}, gamma {j}: residual entry ({a},{b}) = {v}"
                    ));
                }
            }
        }
        None
    }

    /// A deliberately broken copy: the first nonzero entry of `γ_index` is
    /// negated. (Negating a whole gamma matrix would be a reflection of the
    /// underlying vector space and leave every identity intact.)
    pub fn with_corrupted_gamma(&self, index: usize) -> Result<Self> {
        if index >= self.n() {
            return Err(Error::Domain(format!(
                "gamma index {index} out of range 0..{}",
                self.n()
            )));
        }
        let mut out = self.clone();
        out.gamma[index] = out.gamma[index].with_first_entry_negated();
        Ok(out)
    }

    /// Copy with `γ_index` replaced by `−γ_index`.
    pub fn with_negated_gamma(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.gamma[index] = -&out.gamma[index];
        out
    }

    /// Hex SHA-256 of the gamma matrices.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("clifford m={}", self.m).as_bytes());
        for g in &self.gamma {
            g.digest_into(&mut h);
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use proptest::prelude::*;

    fn model(m: usize) -> CliffordModel<ExactScalar> {
        build_clifford_model(m, ResourceCap::default()).unwrap()
    }

    #[test]
    fn m1_dimensions_and_relations() {
        let c = model(1);
        assert_eq!((c.n(), c.spinor_dim()), (4, 4));
        assert!(c.anticommutation_witness(0.0).is_none());
        let sq = c.gamma(0) * c.gamma(0);
        assert_eq!(sq, c.identity().scale_ratio(-1, 1));
    }

    #[test]
    fn m2_spinor_dimension() {
        assert_eq!(model(2).spinor_dim(), 16);
        assert!(model(2).anticommutation_witness(0.0).is_none());
    }

    #[test]
    fn entries_are_units_or_zero() {
        let c = model(2);
        let units = [
            ExactScalar::zero(),
            ExactScalar::one(),
            ExactScalar::from_int(-1),
            ExactScalar::imag_unit(),
            ExactScalar::imag_unit().neg(),
        ];
        for g in c.gammas() {
            assert!(g.entries().iter().all(|e| units.contains(e)));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = build_clifford_model::<ExactScalar>(5, ResourceCap::default()).unwrap_err();
        assert_eq!(err, Error::Resource { m: 5, cap: 4 });
        assert!(build_clifford_model::<ExactScalar>(0, ResourceCap::default()).is_err());
    }

    #[test]
    fn vector_action_basics() {
        let c = model(1);
        assert_eq!(
            &c.vector_action(&ComplexVector::basis(4, 0)).unwrap(),
            c.gamma(0)
        );
        assert_eq!(
            c.vector_action(&ComplexVector::zero(4)).unwrap(),
            c.zero_operator()
        );
        assert!(c.vector_action(&ComplexVector::zero(3)).is_err());
    }

    #[test]
    fn null_vector_squares_to_zero() {
        // (γ₁ + iγ₂)² = −(1 + i²) − i(γ₁γ₂ + γ₂γ₁) = 0
        let c = model(1);
        let mut coeffs = vec![ExactScalar::zero(); 4];
        coeffs[0] = ExactScalar::one();
        coeffs[1] = ExactScalar::imag_unit();
        let x = c.vector_action(&ComplexVector::new(coeffs)).unwrap();
        assert_eq!(&x * &x, c.zero_operator());
    }

    #[test]
    fn corrupted_model_breaks_anticommutation() {
        let c = model(1).with_corrupted_gamma(0).unwrap();
        assert!(c.anticommutation_witness(0.0).is_some());
        assert!(model(1).with_corrupted_gamma(4).is_err());
        // A whole-matrix sign flip is still a valid Clifford model.
        assert!(model(1)
            .with_negated_gamma(0)
            .anticommutation_witness(0.0)
            .is_none());
    }

    #[test]
    fn content_hash_is_stable_and_sensitive() {
        assert_eq!(model(1).content_hash(), model(1).content_hash());
        assert_ne!(
            model(1).content_hash(),
            model(1).with_corrupted_gamma(0).unwrap().content_hash()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn square_of_real_vector_is_minus_norm(v in proptest::collection::vec((-5i64..6, 1i64..4), 8)) {
            let c = model(2);
            let coeffs: Vec<ExactScalar> = v.iter().map(|&(a, d)| ExactScalar::from_ratio(a, d)).collect();
            let x = ComplexVector::new(coeffs);
            let a = c.vector_action(&x).unwrap();
            let expected = c.identity().scale(&x.bilinear_square().neg());
            prop_assert_eq!(&a * &a, expected);
        }
    }
}
