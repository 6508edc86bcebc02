//! Hyperkähler triple on `R^{4m}`, the Kähler operators `Ω_a`, the Kraines
//! operator `Ω` and the adapted complex basis `f_j`, `f̄_j`.
//!
//! `R^{4m}` is identified with `H^m`, each quaternion coordinate ordered as
//! `(1, i, j, k)`, and `J_a` is left multiplication by `i`, `j`, `k`. With
//! this ordering `J₁ e_{2j−1} = e_{2j}` holds without any permutation.

use crate::clifford::{CliffordModel, ComplexVector};
use crate::matrix::{sum_matrices, DenseMatrix};
use crate::report::ResidualCheck;
use crate::scalar::Scalar;

/// Levi-Civita symbol on zero-based indices.
pub fn levi_civita(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// The two indices `a ≠ 1` (zero-based `1` and `2`) summed over by primed sums.
pub const PRIMED: [usize; 2] = [1, 2];

#[derive(Clone, Debug)]
pub struct HyperkahlerTriple<S> {
    j: [DenseMatrix<S>; 3],
}

pub fn build_standard_triple<S: Scalar>(model: &CliffordModel<S>) -> HyperkahlerTriple<S> {
    let m = model.m();
    let left_i: &[&[i64]] = &[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]];
    let left_j: &[&[i64]] = &[&[0, 0, -1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, -1, 0, 0]];
    let left_k: &[&[i64]] = &[&[0, 0, 0, -1], &[0, 0, -1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]];
    let id = DenseMatrix::<S>::identity(m);
    let block = |rows: &[&[i64]]| id.kron(&DenseMatrix::from_int_rows(rows));
    HyperkahlerTriple {
        j: [block(left_i), block(left_j), block(left_k)],
    }
}

impl<S: Scalar> HyperkahlerTriple<S> {
    /// `J_a` for zero-based `a`.
    pub fn j(&self, a: usize) -> &DenseMatrix<S> {
        &self.j[a]
    }

    pub fn apply(&self, a: usize, v: &ComplexVector<S>) -> ComplexVector<S> {
        v.transform(&self.j[a])
    }

    pub fn dim(&self) -> usize {
        self.j[0].rows()
    }

    /// `J_a J_b = ε_abc J_c − δ_ab`.
    pub fn check_quaternion_relations(&self, check: &mut ResidualCheck) {
        let id = DenseMatrix::identity(self.dim());
        for a in 0..3 {
            for b in 0..3 {
                let mut expected = DenseMatrix::zeros(self.dim(), self.dim());
                if a == b {
                    expected = -&id;
                }
                for c in 0..3 {
                    let e = levi_civita(a, b, c);
                    if e != 0 {
                        expected = &expected + &self.j[c].scale_ratio(e, 1);
                    }
                }
                check.equal(
                    format_args!("J{}J{}", a + 1, b + 1),
                    &(&self.j[a] * &self.j[b]),
                    &expected,
                );
            }
        }
    }

    pub fn check_orthogonal(&self, check: &mut ResidualCheck) {
        let id = DenseMatrix::identity(self.dim());
        for a in 0..3 {
            check.equal(
                format_args!("J{}ᵀJ{}", a + 1, a + 1),
                &(&self.j[a].transpose() * &self.j[a]),
                &id,
            );
        }
    }

    /// `J₁ e_{2j−1} = e_{2j}` for every pair.
    pub fn check_adapted(&self, check: &mut ResidualCheck) {
        let n = self.dim();
        for p in 0..n / 2 {
            let image = self.apply(0, &ComplexVector::basis(n, 2 * p));
            let target = ComplexVector::basis(n, 2 * p + 1);
            for (i, (x, y)) in image.coeffs().iter().zip(target.coeffs()).enumerate() {
                check.scalar(format_args!("J1 e{} coordinate {i}", 2 * p + 1), &x.sub(y));
            }
        }
    }
}

/// `½ Σ_i e_i · (J_a e_i)` acting on spinors.
pub fn kaehler_form<S: Scalar>(
    model: &CliffordModel<S>,
    triple: &HyperkahlerTriple<S>,
    a: usize,
) -> DenseMatrix<S> {
    let n = model.n();
    let d = model.spinor_dim();
    sum_matrices(
        d,
        d,
        (0..n).map(|i| {
            let image = triple.apply(a, &ComplexVector::basis(n, i));
            model.gamma(i) * &model.vector_action(&image).expect("length n")
        }),
    )
    .scale_ratio(1, 2)
}

/// `Σ_a Ω_aΩ_a + 6m`.
pub fn kraines_form<S: Scalar>(omega: &[DenseMatrix<S>; 3], m: usize) -> DenseMatrix<S> {
    let d = omega[0].rows();
    sum_matrices(d, d, omega.iter().map(|o| o * o)).shift(&S::from_int(6 * m as i64))
}

#[derive(Clone, Debug)]
pub struct KaehlerOperators<S> {
    m: usize,
    omega: [DenseMatrix<S>; 3],
    kraines: DenseMatrix<S>,
}

impl<S: Scalar> KaehlerOperators<S> {
    pub fn build(model: &CliffordModel<S>, triple: &HyperkahlerTriple<S>) -> Self {
        let omega = [
            kaehler_form(model, triple, 0),
            kaehler_form(model, triple, 1),
            kaehler_form(model, triple, 2),
        ];
        let kraines = kraines_form(&omega, model.m());
        KaehlerOperators {
            m: model.m(),
            omega,
            kraines,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `Ω_a` for zero-based `a`.
    pub fn omega(&self, a: usize) -> &DenseMatrix<S> {
        &self.omega[a]
    }

    pub fn kraines(&self) -> &DenseMatrix<S> {
        &self.kraines
    }

    fn dim(&self) -> usize {
        self.kraines.rows()
    }

    /// `O_a = (i/2) Ω_a`.
    pub fn sl2_generator(&self, a: usize) -> DenseMatrix<S> {
        self.omega[a].scale(&S::imag_unit().mul(&S::from_ratio(1, 2)))
    }

    /// `O₁^± = ½(O₂ ± iO₃)`.
    pub fn sl2_ladder(&self, raising: bool) -> DenseMatrix<S> {
        let o3 = self.sl2_generator(2).scale(&S::imag_unit());
        let o2 = self.sl2_generator(1);
        let sum = if raising { &o2 + &o3 } else { &o2 - &o3 };
        sum.scale_ratio(1, 2)
    }

    /// `Σ_{a'} Ω_{a'}Ω_{a'}` over `a' ∈ {2,3}`.
    pub fn primed_square_sum(&self) -> DenseMatrix<S> {
        let d = self.dim();
        sum_matrices(
            d,
            d,
            PRIMED.iter().map(|&a| &self.omega[a] * &self.omega[a]),
        )
    }

    /// `[Ω_a, Ω_b] = 4 ε_abc Ω_c`.
    pub fn check_commutators(&self, check: &mut ResidualCheck) {
        for a in 0..3 {
            for b in 0..3 {
                let lhs = self.omega[a].commutator(&self.omega[b]).expect("square");
                let rhs = sum_matrices(
                    self.dim(),
                    self.dim(),
                    (0..3).map(|c| self.omega[c].scale_ratio(4 * levi_civita(a, b, c), 1)),
                );
                check.equal(format_args!("[Ω{},Ω{}]", a + 1, b + 1), &lhs, &rhs);
            }
        }
    }

    pub fn check_kraines_commutes(&self, check: &mut ResidualCheck) {
        for a in 0..3 {
            check.matrix(
                format_args!("[Ω,Ω{}]", a + 1),
                &self.kraines.commutator(&self.omega[a]).expect("square"),
            );
        }
    }

    /// `[O₁,O₁^+] = 2O₁^+`, `[O₁,O₁^−] = −2O₁^−`, `[O₁^+,O₁^−] = O₁`.
    pub fn check_sl2(&self, check: &mut ResidualCheck) {
        let o1 = self.sl2_generator(0);
        let up = self.sl2_ladder(true);
        let down = self.sl2_ladder(false);
        check.equal(
            "[O1,O1+]",
            &o1.commutator(&up).unwrap(),
            &up.scale_ratio(2, 1),
        );
        check.equal(
            "[O1,O1-]",
            &o1.commutator(&down).unwrap(),
            &down.scale_ratio(-2, 1),
        );
        check.equal("[O1+,O1-]", &up.commutator(&down).unwrap(), &o1);
    }

    /// The Casimir in ladder form, in `Σ O_aO_a` form, and as `−(Ω − 6m)/32`.
    pub fn check_casimir(&self, check: &mut ResidualCheck) {
        let o: Vec<DenseMatrix<S>> = (0..3).map(|a| self.sl2_generator(a)).collect();
        let up = self.sl2_ladder(true);
        let down = self.sl2_ladder(false);
        let ladder_form = &(&(&o[0] * &o[0]).scale_ratio(1, 8) + &(&up * &down).scale_ratio(1, 4))
            + &(&down * &up).scale_ratio(1, 4);
        let sum_form =
            sum_matrices(self.dim(), self.dim(), o.iter().map(|x| x * x)).scale_ratio(1, 8);
        let kraines_form = self
            .kraines
            .shift(&S::from_int(-6 * self.m as i64))
            .scale_ratio(-1, 32);
        check.equal("casimir ladder vs sum", &ladder_form, &sum_form);
        check.equal("casimir sum vs kraines", &sum_form, &kraines_form);
    }
}

/// `q^+(X) = ½(X + iJ₁X)`.
pub fn q_plus<S: Scalar>(triple: &HyperkahlerTriple<S>, x: &ComplexVector<S>) -> ComplexVector<S> {
    x.add(&triple.apply(0, x).scale(&S::imag_unit()))
        .scale(&S::from_ratio(1, 2))
}

/// `q^−(X) = ½(X − iJ₁X)`.
pub fn q_minus<S: Scalar>(triple: &HyperkahlerTriple<S>, x: &ComplexVector<S>) -> ComplexVector<S> {
    x.sub(&triple.apply(0, x).scale(&S::imag_unit()))
        .scale(&S::from_ratio(1, 2))
}

/// `f_j = q^−(e_{2j−1})`, `f̄_j = q^+(e_{2j−1})` for `j = 1..2m`.
#[derive(Clone, Debug)]
pub struct AdaptedComplexBasis<S> {
    pub f: Vec<ComplexVector<S>>,
    pub f_bar: Vec<ComplexVector<S>>,
}

impl<S: Scalar> AdaptedComplexBasis<S> {
    pub fn build(triple: &HyperkahlerTriple<S>) -> Self {
        let n = triple.dim();
        let odd: Vec<ComplexVector<S>> =
            (0..n / 2).map(|p| ComplexVector::basis(n, 2 * p)).collect();
        AdaptedComplexBasis {
            f: odd.iter().map(|e| q_minus(triple, e)).collect(),
            f_bar: odd.iter().map(|e| q_plus(triple, e)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }
}
