//! Irreducible `sl(2,C)` modules with generators `H₁, H₂, H₃`, rotations of
//! the generator triple, and the search for a rotated generator whose top
//! eigenspace meets a given vector.
//!
//! Normalization: `H₁ = diag(r, r−2, …, −r)`, `H₂ = X + Y`, `H₃ = −i(X − Y)`
//! with `[H₁,X] = 2X`, `[H₁,Y] = −2Y`, `[X,Y] = H₁`. These satisfy
//! `[H_a,H_b] = 2i ε_abc H_c`; the anti-Hermitian `G_a = −iH_a` satisfy
//! `[G_a,G_b] = 2ε_abc G_c`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lagrange::{characteristic_polynomial, lagrange_eigenprojectors, polynomial_from_roots};
use crate::matrix::{sum_matrices, DenseMatrix};
use crate::quaternionic::levi_civita;
use crate::report::ResidualCheck;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Irrep<S> {
    r: usize,
    h: [DenseMatrix<S>; 3],
}

fn from_ladder<S: Scalar>(r: usize, x: DenseMatrix<S>, y: DenseMatrix<S>) -> Irrep<S> {
    let d = r + 1;
    let h1 = DenseMatrix::from_fn(d, d, |i, j| {
        if i == j {
            S::from_int(r as i64 - 2 * i as i64)
        } else {
            S::zero()
        }
    });
    let h2 = &x + &y;
    let h3 = (&x - &y).scale(&S::imag_unit().neg());
    Irrep { r, h: [h1, h2, h3] }
}

/// Rational ladder: `Y v_s = (s+1) v_{s+1}`, `X v_s = (r−s+1) v_{s−1}`,
/// where `v_s` has `H₁`-weight `r − 2s`.
pub fn build_irrep<S: Scalar>(r: usize) -> Irrep<S> {
    let d = r + 1;
    let x = DenseMatrix::from_fn(d, d, |i, j| {
        if j == i + 1 {
            S::from_int((r - j + 1) as i64)
        } else {
            S::zero()
        }
    });
    let y = DenseMatrix::from_fn(d, d, |i, j| {
        if i == j + 1 {
            S::from_int(i as i64)
        } else {
            S::zero()
        }
    });
    from_ladder(r, x, y)
}

/// Unitary normalization, with Hermitian `H_a`.
pub fn build_unitary_irrep(r: usize) -> Irrep<Complex64> {
    let d = r + 1;
    let coupling = |s: usize| (((s + 1) * (r - s)) as f64).sqrt();
    let y = DenseMatrix::from_fn(d, d, |i, j| {
        if i == j + 1 {
            Complex64::new(coupling(j), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let x = y.transpose();
    from_ladder(r, x, y)
}

impl<S: Scalar> Irrep<S> {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.r + 1
    }

    /// `H_a` for zero-based `a`.
    pub fn h(&self, a: usize) -> &DenseMatrix<S> {
        &self.h[a]
    }

    /// `G_a = −iH_a`.
    pub fn g(&self, a: usize) -> DenseMatrix<S> {
        self.h[a].scale(&S::imag_unit().neg())
    }

    /// `⅛ Σ_a H_aH_a`, equal to `r(r+2)/8` on the module.
    pub fn casimir(&self) -> DenseMatrix<S> {
        sum_matrices(self.dim(), self.dim(), self.h.iter().map(|h| h * h)).scale_ratio(1, 8)
    }

    /// `{r, r−2, …, −r}`, highest first.
    pub fn weights(&self) -> Vec<S> {
        (0..=self.r)
            .map(|s| S::from_int(self.r as i64 - 2 * s as i64))
            .collect()
    }

    pub fn check_commutators(&self, check: &mut ResidualCheck) {
        let two_i = S::imag_unit().scale_int(2);
        for a in 0..3 {
            for b in 0..3 {
                let rhs = sum_matrices(
                    self.dim(),
                    self.dim(),
                    (0..3).map(|c| self.h[c].scale(&two_i.scale_int(levi_civita(a, b, c)))),
                );
                check.equal(
                    format_args!("r={} [H{},H{}]", self.r, a + 1, b + 1),
                    &self.h[a].commutator(&self.h[b]).expect("square"),
                    &rhs,
                );
            }
        }
    }

    pub fn check_casimir(&self, check: &mut ResidualCheck) {
        let r = self.r as i64;
        check.equal(
            format_args!("r={} casimir", self.r),
            &self.casimir(),
            &DenseMatrix::identity(self.dim()).scale_ratio(r * (r + 2), 8),
        );
    }
}

/// A proper rotation of the generator triple.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation<S> {
    matrix: DenseMatrix<S>,
}

fn det3<S: Scalar>(m: &DenseMatrix<S>) -> S {
    let e = |i, j| m.get(i, j).clone();
    let minor =
        |a: usize, b: usize, c: usize, d: usize| e(1, a).mul(&e(2, b)).sub(&e(1, c).mul(&e(2, d)));
    e(0, 0)
        .mul(&minor(1, 2, 2, 1))
        .sub(&e(0, 1).mul(&minor(0, 2, 2, 0)))
        .add(&e(0, 2).mul(&minor(0, 1, 1, 0)))
}

impl<S: Scalar> Rotation<S> {
    /// Accepts `R` only if `RᵀR = I` and `det R = 1` (within `tol`).
    pub fn new(matrix: DenseMatrix<S>, tol: f64) -> Result<Self> {
        if matrix.shape() != (3, 3) {
            return Err(Error::Domain(format!(
                "rotation must be 3×3, got {:?}",
                matrix.shape()
            )));
        }
        if !(&matrix.transpose() * &matrix).approx_eq(&DenseMatrix::identity(3), tol) {
            return Err(Error::Domain("matrix is not orthogonal".into()));
        }
        if !det3(&matrix).approx_eq(&S::one(), tol) {
            return Err(Error::Domain("determinant is not 1".into()));
        }
        Ok(Rotation { matrix })
    }

    pub fn identity() -> Self {
        Rotation {
            matrix: DenseMatrix::identity(3),
        }
    }

    /// Rotation of the unit quaternion `(a + bi + cj + dk)/|·|`; rational
    /// for integer input.
    pub fn from_integer_quaternion(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let n = a * a + b * b + c * c + d * d;
        if n == 0 {
            return Err(Error::Domain("zero quaternion".into()));
        }
        let rows = [
            [
                a * a + b * b - c * c - d * d,
                2 * (b * c - a * d),
                2 * (b * d + a * c),
            ],
            [
                2 * (b * c + a * d),
                a * a - b * b + c * c - d * d,
                2 * (c * d - a * b),
            ],
            [
                2 * (b * d - a * c),
                2 * (c * d + a * b),
                a * a - b * b - c * c + d * d,
            ],
        ];
        Ok(Rotation {
            matrix: DenseMatrix::from_fn(3, 3, |i, j| S::from_ratio(rows[i][j], n)),
        })
    }

    /// Rotation of a unit quaternion given in floating point.
    pub fn from_unit_quaternion(q: [f64; 4]) -> Self {
        let [a, b, c, d] = q;
        let rows = [
            [
                a * a + b * b - c * c - d * d,
                2.0 * (b * c - a * d),
                2.0 * (b * d + a * c),
            ],
            [
                2.0 * (b * c + a * d),
                a * a - b * b + c * c - d * d,
                2.0 * (c * d - a * b),
            ],
            [
                2.0 * (b * d - a * c),
                2.0 * (c * d + a * b),
                a * a - b * b - c * c + d * d,
            ],
        ];
        Rotation {
            matrix: DenseMatrix::from_fn(3, 3, |i, j| S::from_f64(rows[i][j])),
        }
    }

    pub fn matrix(&self) -> &DenseMatrix<S> {
        &self.matrix
    }
}

/// Haar-distributed rotations in float mode (normalized Gaussian
/// quaternion); rational rotations from small integer quaternions in exact
/// mode.
pub fn sample_rotation<S: Scalar>(rng: &mut ChaCha8Rng) -> Rotation<S> {
    if S::EXACT {
        loop {
            let q: [i64; 4] = std::array::from_fn(|_| rng.random_range(-8..=8));
            if let Ok(rot) = Rotation::from_integer_quaternion(q[0], q[1], q[2], q[3]) {
                return rot;
            }
        }
    }
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return Rotation::from_unit_quaternion(q.map(|x| x / norm));
        }
    }
}

/// `Σ_b R_{1b} H_b`.
pub fn rotated_generator<S: Scalar>(irrep: &Irrep<S>, g: &Rotation<S>) -> DenseMatrix<S> {
    sum_matrices(
        irrep.dim(),
        irrep.dim(),
        (0..3).map(|b| irrep.h(b).scale(g.matrix().get(0, b))),
    )
}

/// Exact mode: the characteristic polynomial equals `Π (x − w)` over the
/// weights. Float mode: spectral projectors onto the weights certify.
pub fn check_rotated_spectrum<S: Scalar>(
    irrep: &Irrep<S>,
    g: &Rotation<S>,
    tol: f64,
) -> Result<()> {
    let a = rotated_generator(irrep, g);
    if S::EXACT {
        let got = characteristic_polynomial(&a)?;
        let want = polynomial_from_roots(&irrep.weights());
        if got != want {
            return Err(Error::Spectrum {
                identity: format!("rotated generator spectrum, r={}", irrep.r()),
                witness: "characteristic polynomial differs from Π(x − w)".into(),
            });
        }
        Ok(())
    } else {
        lagrange_eigenprojectors(&a, &irrep.weights(), tol).map(|_| ())
    }
}

/// `Π_{w ≠ r} (A − w)/(r − w)` for the rotated generator `A`.
fn top_projector<S: Scalar>(irrep: &Irrep<S>, g: &Rotation<S>) -> DenseMatrix<S> {
    let a = rotated_generator(irrep, g);
    let top = S::from_int(irrep.r() as i64);
    let mut p = DenseMatrix::identity(irrep.dim());
    for w in irrep.weights().iter().skip(1) {
        let denom = top.sub(w).inv().expect("distinct weights");
        p = (&p * &a.shift(&w.neg())).scale(&denom);
    }
    p
}

/// Squared Hermitian norm of the projection of `v` onto the top eigenspace
/// of the rotated generator.
pub fn highest_weight_norm_sq<S: Scalar>(irrep: &Irrep<S>, g: &Rotation<S>, v: &[S]) -> Result<S> {
    if v.len() != irrep.dim() {
        return Err(Error::Dimension {
            op: "highest_weight_component",
            left: (irrep.dim(), irrep.dim()),
            right: (v.len(), 1),
        });
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::Domain("zero vector".into()));
    }
    let w = top_projector(irrep, g).apply(v)?;
    Ok(w.iter()
        .fold(S::zero(), |acc, x| acc.add(&x.mul(&x.conj()))))
}

/// `|a_g^0|`: the length of that projection.
pub fn highest_weight_component<S: Scalar>(
    irrep: &Irrep<S>,
    g: &Rotation<S>,
    v: &[S],
) -> Result<f64> {
    Ok(highest_weight_norm_sq(irrep, g, v)?.modulus_f64().sqrt())
}

#[derive(Clone, Debug)]
pub enum SearchOutcome<S> {
    Found {
        sample: usize,
        rotation: Rotation<S>,
        component: f64,
    },
    Exhausted {
        budget: usize,
        best_rotation: Rotation<S>,
        best_component: f64,
    },
}

impl<S> SearchOutcome<S> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

/// Tries the identity, then `budget − 1` sampled rotations, until the top
/// component exceeds `threshold` (exact mode: is nonzero).
pub fn find_rotation_with_top_component<S: Scalar>(
    irrep: &Irrep<S>,
    v: &[S],
    budget: usize,
    seed: u64,
    threshold: f64,
) -> Result<SearchOutcome<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Rotation<S>)> = None;
    for sample in 0..budget {
        let g = if sample == 0 {
            Rotation::identity()
        } else {
            sample_rotation(&mut rng)
        };
        let norm_sq = highest_weight_norm_sq(irrep, &g, v)?;
        let component = norm_sq.modulus_f64().sqrt();
        let accepted = if S::EXACT {
            !norm_sq.is_zero()
        } else {
            component > threshold
        };
        if accepted {
            return Ok(SearchOutcome::Found {
                sample,
                rotation: g,
                component,
            });
        }
        if best.as_ref().is_none_or(|(c, _)| component > *c) {
            best = Some((component, g));
        }
    }
    let (best_component, best_rotation) = best.unwrap_or((0.0, Rotation::identity()));
    Ok(SearchOutcome::Exhausted {
        budget,
        best_rotation,
        best_component,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSummary {
    pub max_r: usize,
    pub vectors_per_r: usize,
    pub budget: usize,
    pub seed: u64,
    pub threshold: f64,
    pub trials: usize,
    pub found: usize,
    pub exhausted: usize,
    /// Largest sample index at which a search succeeded.
    pub max_sample_used: usize,
    pub first_exhaustion: Option<String>,
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect()
}

/// Float-mode search over `r = 0..=max_r`, `vectors_per_r` Gaussian vectors
/// each. Trial `t` uses its own seed derived from `seed`, so trials are
/// independent of each other's sample counts.
pub fn top_component_trials(
    max_r: usize,
    vectors_per_r: usize,
    budget: usize,
    seed: u64,
    threshold: f64,
) -> Result<TrialSummary> {
    let mut summary = TrialSummary {
        max_r,
        vectors_per_r,
        budget,
        seed,
        threshold,
        trials: 0,
        found: 0,
        exhausted: 0,
        max_sample_used: 0,
        first_exhaustion: None,
    };
    let mut vectors = ChaCha8Rng::seed_from_u64(seed);
    for r in 0..=max_r {
        let irrep = build_unitary_irrep(r);
        for n in 0..vectors_per_r {
            let v = random_vector(&mut vectors, irrep.dim());
            let trial_seed =
                seed ^ ((r as u64) << 32 | n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            summary.trials += 1;
            match find_rotation_with_top_component(&irrep, &v, budget, trial_seed, threshold)? {
                SearchOutcome::Found { sample, .. } => {
                    summary.found += 1;
                    summary.max_sample_used = summary.max_sample_used.max(sample);
                }
                SearchOutcome::Exhausted { best_component, .. } => {
                    summary.exhausted += 1;
                    if summary.first_exhaustion.is_none() {
                        summary.first_exhaustion = Some(format!(
                            "r={r} vector {n}: best component {best_component:e}"
                        ));
                    }
                }
            }
        }
    }
    Ok(summary)
}
