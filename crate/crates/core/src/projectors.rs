//! Vector operators on spinors built from the hyperkähler triple: `q^±`,
//! the twisted action `𝒥`, the level projectors `p_r^±`, the operators `L`,
//! `L̄`, and the constants `A_{r,k}^{±±}` obtained by restricting sums of
//! `p`-products to the blocks `S_r^k`.
//!
//! Clifford products are always read as compositions of spinor
//! endomorphisms, left to right.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use crate::clifford::{build_clifford_model, CliffordModel, ComplexVector, ResourceCap};
use crate::decomposition::{check_neighbor_mapping, check_weight_consistency, JointDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{sum_matrices, DenseMatrix};
use crate::quaternionic::{
    build_standard_triple, levi_civita, q_minus, q_plus, AdaptedComplexBasis, HyperkahlerTriple,
    KaehlerOperators, PRIMED,
};
use crate::report::{ResidualCheck, VerificationReport};
use crate::scalar::{ratio, Scalar};

/// `𝒥(X) = Σ_a Ω_a·(J_aX) + 3X`, as a spinor endomorphism.
pub fn j_operator<S: Scalar>(
    model: &CliffordModel<S>,
    triple: &HyperkahlerTriple<S>,
    ops: &KaehlerOperators<S>,
    x: &ComplexVector<S>,
) -> DenseMatrix<S> {
    let act = |v: &ComplexVector<S>| model.vector_action(v).expect("vector of length 4m");
    let d = model.spinor_dim();
    let twisted = sum_matrices(
        d,
        d,
        (0..3).map(|a| ops.omega(a) * &act(&triple.apply(a, x))),
    );
    &twisted + &act(x).scale_ratio(3, 1)
}

/// Clifford model together with the structures built on it.
#[derive(Clone, Debug)]
pub struct SpinorGeometry<S> {
    model: CliffordModel<S>,
    triple: HyperkahlerTriple<S>,
    ops: KaehlerOperators<S>,
    basis: AdaptedComplexBasis<S>,
}

impl<S: Scalar> SpinorGeometry<S> {
    pub fn new(model: CliffordModel<S>) -> Self {
        let triple = build_standard_triple(&model);
        let ops = KaehlerOperators::build(&model, &triple);
        let basis = AdaptedComplexBasis::build(&triple);
        SpinorGeometry {
            model,
            triple,
            ops,
            basis,
        }
    }

    pub fn build(m: usize, cap: ResourceCap) -> Result<Self> {
        Ok(Self::new(build_clifford_model(m, cap)?))
    }

    pub fn m(&self) -> usize {
        self.model.m()
    }

    pub fn model(&self) -> &CliffordModel<S> {
        &self.model
    }

    pub fn triple(&self) -> &HyperkahlerTriple<S> {
        &self.triple
    }

    pub fn ops(&self) -> &KaehlerOperators<S> {
        &self.ops
    }

    pub fn basis(&self) -> &AdaptedComplexBasis<S> {
        &self.basis
    }

    pub fn act(&self, x: &ComplexVector<S>) -> DenseMatrix<S> {
        self.model.vector_action(x).expect("vector of length 4m")
    }

    pub fn j_operator(&self, x: &ComplexVector<S>) -> DenseMatrix<S> {
        j_operator(&self.model, &self.triple, &self.ops, x)
    }

    /// `p_r^+(X) = ((2r+1)X − 𝒥(X)) / (4(r+1))`.
    pub fn p_plus(&self, r: usize, x: &ComplexVector<S>) -> DenseMatrix<S> {
        let r = r as i64;
        (&self.act(x).scale_ratio(2 * r + 1, 1) - &self.j_operator(x)).scale_ratio(1, 4 * (r + 1))
    }

    /// `p_r^−(X) = ((2r+3)X + 𝒥(X)) / (4(r+1))`.
    pub fn p_minus(&self, r: usize, x: &ComplexVector<S>) -> DenseMatrix<S> {
        let r = r as i64;
        (&self.act(x).scale_ratio(2 * r + 3, 1) + &self.j_operator(x)).scale_ratio(1, 4 * (r + 1))
    }

    /// `L = Σ_j Σ_{a'} Ω_{a'} f_j (J_{a'}f̄_j)`.
    pub fn l_operator(&self) -> DenseMatrix<S> {
        self.twisted_pair_sum(&self.basis.f, &self.basis.f_bar)
    }

    /// `L̄ = Σ_j Σ_{a'} Ω_{a'} f̄_j (J_{a'}f_j)`.
    pub fn l_bar_operator(&self) -> DenseMatrix<S> {
        self.twisted_pair_sum(&self.basis.f_bar, &self.basis.f)
    }

    fn twisted_pair_sum(
        &self,
        left: &[ComplexVector<S>],
        right: &[ComplexVector<S>],
    ) -> DenseMatrix<S> {
        let d = self.model.spinor_dim();
        sum_matrices(
            d,
            d,
            left.iter().zip(right).flat_map(|(x, y)| {
                PRIMED.map(|a| {
                    &(self.ops.omega(a) * &self.act(x)) * &self.act(&self.triple.apply(a, y))
                })
            }),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorOpKind {
    QPlus,
    QMinus,
    PPlus,
    PMinus,
}

/// A vector operator evaluated on a given argument.
#[derive(Clone, Debug)]
pub struct ProjectedVectorOp<S> {
    pub kind: VectorOpKind,
    /// Level for the `p` kinds.
    pub r: Option<usize>,
    pub argument: ComplexVector<S>,
    pub matrix: DenseMatrix<S>,
}

impl<S: Scalar> ProjectedVectorOp<S> {
    pub fn q_plus(geom: &SpinorGeometry<S>, x: &ComplexVector<S>) -> Self {
        ProjectedVectorOp {
            kind: VectorOpKind::QPlus,
            r: None,
            argument: x.clone(),
            matrix: geom.act(&q_plus(&geom.triple, x)),
        }
    }

    pub fn q_minus(geom: &SpinorGeometry<S>, x: &ComplexVector<S>) -> Self {
        ProjectedVectorOp {
            kind: VectorOpKind::QMinus,
            r: None,
            argument: x.clone(),
            matrix: geom.act(&q_minus(&geom.triple, x)),
        }
    }

    pub fn p_plus(geom: &SpinorGeometry<S>, r: usize, x: &ComplexVector<S>) -> Self {
        ProjectedVectorOp {
            kind: VectorOpKind::PPlus,
            r: Some(r),
            argument: x.clone(),
            matrix: geom.p_plus(r, x),
        }
    }

    pub fn p_minus(geom: &SpinorGeometry<S>, r: usize, x: &ComplexVector<S>) -> Self {
        ProjectedVectorOp {
            kind: VectorOpKind::PMinus,
            r: Some(r),
            argument: x.clone(),
            matrix: geom.p_minus(r, x),
        }
    }
}

/// Clifford actions of the adapted basis, cached once per geometry.
struct BasisActions<S> {
    f: Vec<DenseMatrix<S>>,
    fb: Vec<DenseMatrix<S>>,
    /// `jf[a][j] = J_a f_j`
    jf: Vec<Vec<DenseMatrix<S>>>,
    jfb: Vec<Vec<DenseMatrix<S>>>,
    tf: Vec<DenseMatrix<S>>,
    tfb: Vec<DenseMatrix<S>>,
}

impl<S: Scalar> BasisActions<S> {
    fn new(geom: &SpinorGeometry<S>) -> Self {
        let b = geom.basis();
        let acts = |vs: &[ComplexVector<S>]| vs.iter().map(|v| geom.act(v)).collect::<Vec<_>>();
        let rotated = |vs: &[ComplexVector<S>]| {
            (0..3)
                .map(|a| {
                    vs.iter()
                        .map(|v| geom.act(&geom.triple.apply(a, v)))
                        .collect()
                })
                .collect()
        };
        BasisActions {
            f: acts(&b.f),
            fb: acts(&b.f_bar),
            jf: rotated(&b.f),
            jfb: rotated(&b.f_bar),
            tf: b.f.iter().map(|v| geom.j_operator(v)).collect(),
            tfb: b.f_bar.iter().map(|v| geom.j_operator(v)).collect(),
        }
    }
}

fn pair_sum<S: Scalar>(
    d: usize,
    left: &[DenseMatrix<S>],
    right: &[DenseMatrix<S>],
) -> DenseMatrix<S> {
    sum_matrices(d, d, left.iter().zip(right).map(|(x, y)| x * y))
}

fn record(
    report: &mut VerificationReport,
    id: &str,
    m: usize,
    check: ResidualCheck,
    notes: impl Into<String>,
) {
    report.push(id, m, check.status(), notes);
}

/// Checks every operator identity of the projector calculus on `geom`,
/// using `dec` for the block structure. Failures become report entries with
/// witnesses; nothing here returns early.
pub fn verify_lemma_identities<S: Scalar>(
    geom: &SpinorGeometry<S>,
    dec: &JointDecomposition<S>,
    tol: f64,
) -> VerificationReport {
    let m = geom.m();
    let n = geom.model.n();
    let d = geom.model.spinor_dim();
    let ops = &geom.ops;
    let id = DenseMatrix::<S>::identity(d);
    let i = S::imag_unit();
    let o1 = ops.omega(0);
    let i_o1 = o1.scale(&i);
    let new = || ResidualCheck::new::<S>(tol);
    let mut report = VerificationReport::default();
    let acts = BasisActions::new(geom);

    // Clifford multiplication moves r and k by one step.
    let (mut by_r, mut by_k) = (new(), new());
    check_neighbor_mapping(&geom.model, dec, &mut by_r, &mut by_k);
    record(
        &mut report,
        "mapping.clifford.kraines-neighbours",
        m,
        by_r,
        "γ_i S_r ⊂ S_{r−1} ⊕ S_{r+1}",
    );
    record(
        &mut report,
        "mapping.clifford.kaehler-neighbours",
        m,
        by_k,
        "γ_i S^k ⊂ S^{k−1} ⊕ S^{k+1}",
    );

    let mut weights = new();
    check_weight_consistency(dec, ops, &mut weights);
    record(
        &mut report,
        "weights.orientation",
        m,
        weights,
        "O1 = (i/2)Ω1 acts as 2s−r on S_r^{m−r+2s}; s = 0 is the lowest O1 weight",
    );

    // q^± shift k.
    let mut q_shift = new();
    for x in (0..n).map(|idx| ComplexVector::basis(n, idx)) {
        let up = ProjectedVectorOp::q_plus(geom, &x);
        let down = ProjectedVectorOp::q_minus(geom, &x);
        for k in 0..=2 * m {
            let src = dec.kaehler_projector(k);
            let up_out = dec.kaehler_complement(&[k + 1]);
            q_shift.matrix(
                format_args!("q+ on S^{k}"),
                &(&up_out * &(&up.matrix * src)),
            );
            let down_out = if k == 0 {
                id.clone()
            } else {
                dec.kaehler_complement(&[k - 1])
            };
            q_shift.matrix(
                format_args!("q- on S^{k}"),
                &(&down_out * &(&down.matrix * src)),
            );
        }
    }
    record(
        &mut report,
        "mapping.q-shifts-k",
        m,
        q_shift,
        "q+ raises k by one, q− lowers it",
    );

    // Commutators of the Kraines operator with vectors.
    let kraines = ops.kraines();
    let (mut first, mut second) = (new(), new());
    for idx in 0..n {
        let e = ComplexVector::basis(n, idx);
        let x = geom.act(&e);
        let t = geom.j_operator(&e);
        first.equal(
            format_args!("[Ω,e{}]", idx + 1),
            &kraines.commutator(&x).expect("square"),
            &t.scale_ratio(4, 1),
        );
        let rhs = &(&t.scale_ratio(-8, 1) + &x.scale_ratio(12, 1))
            - &(&x * &kraines.shift(&S::from_int(-6 * m as i64))).scale_ratio(4, 1);
        second.equal(
            format_args!("[Ω,J(e{})]", idx + 1),
            &kraines.commutator(&t).expect("square"),
            &rhs,
        );
    }
    record(
        &mut report,
        "kraines.vector-commutator",
        m,
        first,
        "[Ω, X] = 4J(X)",
    );
    record(
        &mut report,
        "kraines.twisted-commutator",
        m,
        second,
        "[Ω, J(X)] = −8J(X) + 12X − 4X(Ω − 6m)",
    );

    // p^± shift r.
    let mut p_shift = new();
    for x in (0..n).map(|idx| ComplexVector::basis(n, idx)) {
        for r in 0..=m {
            let src = dec.kraines_projector(r);
            let up_out = dec.kraines_complement(&[r + 1]);
            p_shift.matrix(
                format_args!("p+_{r} on S_{r}"),
                &(&up_out * &(&geom.p_plus(r, &x) * src)),
            );
            let down_out = if r == 0 {
                id.clone()
            } else {
                dec.kraines_complement(&[r - 1])
            };
            p_shift.matrix(
                format_args!("p-_{r} on S_{r}"),
                &(&down_out * &(&geom.p_minus(r, &x) * src)),
            );
        }
    }
    record(
        &mut report,
        "mapping.p-shifts-r",
        m,
        p_shift,
        "p_r^+ maps S_r to S_{r+1}, p_r^− to S_{r−1}",
    );

    // Four-way splitting of Clifford multiplication on each block.
    let mut split = new();
    for idx in 0..n {
        let e = ComplexVector::basis(n, idx);
        let halves = [
            (1i64, q_plus(&geom.triple, &e)),
            (-1i64, q_minus(&geom.triple, &e)),
        ];
        for b in dec.nonzero_blocks() {
            let mut pieces = DenseMatrix::zeros(d, d);
            for (dk, half) in &halves {
                for dr in [1i64, -1] {
                    let piece = if dr > 0 {
                        geom.p_plus(b.r, half)
                    } else {
                        geom.p_minus(b.r, half)
                    };
                    let piece = &piece * &b.projector;
                    let (tr, tk) = (b.r as i64 + dr, b.k as i64 + dk);
                    let target = if tr < 0 || tk < 0 {
                        None
                    } else {
                        dec.block(tr as usize, tk as usize)
                    };
                    match target {
                        Some(t) => split.equal(
                            format_args!("e{} piece ({dr:+},{dk:+}) on ({},{})", idx + 1, b.r, b.k),
                            &(&t.projector * &piece),
                            &piece,
                        ),
                        None => split.matrix(
                            format_args!("e{} piece ({dr:+},{dk:+}) on ({},{})", idx + 1, b.r, b.k),
                            &piece,
                        ),
                    }
                    pieces = &pieces + &piece;
                }
            }
            split.equal(
                format_args!("e{} reconstruction on ({},{})", idx + 1, b.r, b.k),
                &pieces,
                &(&geom.act(&e) * &b.projector),
            );
        }
    }
    record(
        &mut report,
        "splitting.fourfold",
        m,
        split,
        "X·P_{r,k} = Σ p^±_r(q^±X)·P_{r,k}, each piece inside S_{r±1}^{k±1}",
    );

    let fbf = pair_sum(d, &acts.fb, &acts.f);
    let ffb = pair_sum(d, &acts.f, &acts.fb);
    let mut bar_sum = new();
    bar_sum.equal(
        "Σ f̄f",
        &fbf,
        &(&id.scale_ratio(-(m as i64), 1) - &i_o1.scale_ratio(1, 2)),
    );
    bar_sum.equal(
        "Σ ff̄",
        &ffb,
        &(&id.scale_ratio(-(m as i64), 1) + &i_o1.scale_ratio(1, 2)),
    );
    record(
        &mut report,
        "basis.bar-product-sum",
        m,
        bar_sum,
        "Σ_j f̄_j f_j = −m − (i/2)Ω1, Σ_j f_j f̄_j = −m + (i/2)Ω1",
    );

    let rotated_pair = |a: usize| pair_sum(d, &acts.jf[a], &acts.jfb[a]);
    let mut per_index = new();
    for a in PRIMED {
        per_index.equal(format_args!("a'={}", a + 1), &rotated_pair(a), &fbf);
    }
    record(
        &mut report,
        "basis.rotated-pair-sum.per-index",
        m,
        per_index,
        "Σ_j (J_a'f_j)(J_a'f̄_j) = Σ_j f̄_j f_j for each a' ∈ {2,3}",
    );
    let summed = &rotated_pair(1) + &rotated_pair(2);
    let mut summed_check = new();
    summed_check.equal("a'-summed", &summed, &fbf.scale_ratio(2, 1));
    let literal_holds = (&summed - &fbf).is_zero_within(tol);
    record(
        &mut report,
        "basis.rotated-pair-sum.summed",
        m,
        summed_check,
        format!(
            "Σ_a' Σ_j (J_a'f_j)(J_a'f̄_j) = 2 Σ_j f̄_j f_j; with coefficient 1 the identity {}",
            if literal_holds { "also holds" } else { "fails" }
        ),
    );

    let mut anti = new();
    for a in PRIMED {
        for j in 0..acts.f.len() {
            anti.matrix(
                format_args!("a'={} j={}", a + 1, j + 1),
                &acts.jf[a][j].anticommutator(&acts.fb[j]).expect("square"),
            );
        }
    }
    record(
        &mut report,
        "basis.rotated-anticommute",
        m,
        anti,
        "(J_a'f_j) f̄_j = −f̄_j (J_a'f_j)",
    );

    let mut mixed = new();
    for a in PRIMED {
        let b = 3 - a;
        let s = levi_civita(a, 0, b);
        let half_a = ops.omega(a).scale_ratio(1, 2);
        let half_ib = ops.omega(b).scale(&i.mul(&S::from_ratio(s, 2)));
        mixed.equal(
            format_args!("Σ f J{}f̄", a + 1),
            &pair_sum(d, &acts.f, &acts.jfb[a]),
            &(&half_a + &half_ib),
        );
        mixed.equal(
            format_args!("Σ f̄ J{}f", a + 1),
            &pair_sum(d, &acts.fb, &acts.jf[a]),
            &(&half_a - &half_ib),
        );
    }
    record(
        &mut report,
        "basis.mixed-product-sum",
        m,
        mixed,
        "Σ_j f_j(J_a'f̄_j) = ½Ω_a' + (i/2)ε_{a'1b'}Ω_b' and the conjugate form",
    );

    let three_plus = id.scale_ratio(3, 1).try_add(&i_o1).expect("square");
    let three_minus = id.scale_ratio(3, 1).try_sub(&i_o1).expect("square");
    let mut expansion = new();
    for j in 0..acts.f.len() {
        let rot = |jv: &Vec<Vec<DenseMatrix<S>>>| {
            sum_matrices(d, d, PRIMED.map(|a| ops.omega(a) * &jv[a][j]))
        };
        expansion.equal(
            format_args!("J(f{})", j + 1),
            &acts.tf[j],
            &(&rot(&acts.jf) + &(&three_plus * &acts.f[j])),
        );
        expansion.equal(
            format_args!("J(f̄{})", j + 1),
            &acts.tfb[j],
            &(&rot(&acts.jfb) + &(&three_minus * &acts.fb[j])),
        );
    }
    record(
        &mut report,
        "twist.expansion",
        m,
        expansion,
        "J(f_j) = Σ_a' Ω_a'(J_a'f_j) + (3 + iΩ1)f_j, J(f̄_j) = Σ_a' Ω_a'(J_a'f̄_j) + (3 − iΩ1)f̄_j",
    );

    let l = geom.l_operator();
    let lb = geom.l_bar_operator();
    let one_plus = id.try_add(&i_o1).expect("square");
    let one_minus = id.try_sub(&i_o1).expect("square");

    // Four product sums, each matched against all four right-hand sides.
    let candidates = [
        ("J(f)f̄", pair_sum(d, &acts.tf, &acts.fb)),
        ("J(f̄)f", pair_sum(d, &acts.tfb, &acts.f)),
        ("fJ(f̄)", pair_sum(d, &acts.f, &acts.tfb)),
        ("f̄J(f)", pair_sum(d, &acts.fb, &acts.tf)),
    ];
    let rhs = [
        &(&three_plus * &ffb) - &lb,
        &(&three_minus * &fbf) - &l,
        &(&l + &(&one_minus * &ffb)) - &fbf.scale_ratio(4, 1),
        &(&lb + &(&one_plus * &fbf)) - &ffb.scale_ratio(4, 1),
    ];
    let rhs_text = [
        "−L̄ + (3 + iΩ1)Σff̄",
        "−L + (3 − iΩ1)Σf̄f",
        "L + (1 − iΩ1)Σff̄ − 4Σf̄f",
        "L̄ + (1 + iΩ1)Σf̄f − 4Σff̄",
    ];
    for (line, (name, value)) in candidates.iter().enumerate() {
        let matches: Vec<&str> = rhs
            .iter()
            .zip(rhs_text)
            .filter(|(r, _)| (value - *r).is_zero_within(tol))
            .map(|(_, t)| t)
            .collect();
        let mut c = new();
        c.equal(format_args!("Σ {name}"), value, &rhs[line]);
        let slug = ["jf-fbar", "jfbar-f", "f-jfbar", "fbar-jf"][line];
        let notes = if matches.is_empty() {
            format!("Σ {name} matches no listed right-hand side")
        } else {
            format!("Σ {name} = {}", matches.join(" and "))
        };
        record(&mut report, &format!("twist.product.{slug}"), m, c, notes);
    }

    let primed_sq = ops.primed_square_sum();
    let tt = pair_sum(d, &acts.tf, &acts.tfb);
    let expect_tt = sum_matrices(
        d,
        d,
        [
            fbf.scale_ratio(-12, 1),
            &primed_sq * &fbf,
            &(-&one_minus) * &l,
            -&(&one_minus * &lb),
            l.scale_ratio(4, 1),
            &(&three_plus * &one_minus) * &ffb,
        ],
    );
    let mut c = new();
    c.equal("Σ J(f)J(f̄)", &tt, &expect_tt);
    record(
        &mut report,
        "twist.square-sum.jf-jfbar",
        m,
        c,
        "Σ J(f)J(f̄) = −12Σf̄f + (Ω2²+Ω3²)Σf̄f + (−1+iΩ1)L − (1−iΩ1)L̄ + 4L + (3+iΩ1)(1−iΩ1)Σff̄",
    );
    let tbt = pair_sum(d, &acts.tfb, &acts.tf);
    let expect_tbt = sum_matrices(
        d,
        d,
        [
            ffb.scale_ratio(-12, 1),
            &primed_sq * &ffb,
            -&(&one_plus * &l),
            &(-&one_plus) * &lb,
            lb.scale_ratio(4, 1),
            &(&three_minus * &one_plus) * &fbf,
        ],
    );
    let mut c = new();
    c.equal("Σ J(f̄)J(f)", &tbt, &expect_tbt);
    record(
        &mut report,
        "twist.square-sum.jfbar-jf",
        m,
        c,
        "Σ J(f̄)J(f) = −12Σff̄ + (Ω2²+Ω3²)Σff̄ − (1+iΩ1)L − (1+iΩ1)L̄ + 4L̄ + (3−iΩ1)(1+iΩ1)Σf̄f",
    );

    let base = (&kraines.shift(&S::from_int(-6 * m as i64)) - &(o1 * o1)).scale_ratio(1, 2);
    let two_i_o1 = i_o1.scale_ratio(2, 1);
    let mut c = new();
    c.equal("L", &l, &(&base - &two_i_o1));
    c.equal("L̄", &lb, &(&base + &two_i_o1));
    record(
        &mut report,
        "twist.l-operators",
        m,
        c,
        "L = ½((Ω − 6m) − Ω1²) − 2iΩ1, L̄ = ½((Ω − 6m) − Ω1²) + 2iΩ1",
    );

    let (mut c_o1, mut c_om, mut c_l, mut c_lb) = (new(), new(), new(), new());
    for b in dec.nonzero_blocks() {
        let (r, k, mi) = (b.r as i64, b.k as i64, m as i64);
        let p = &b.projector;
        let label = format_args!("({},{})", b.r, b.k).to_string();
        c_o1.equal(&label, &(o1 * p), &p.scale(&i.scale_int(2 * mi - 2 * k)));
        c_om.equal(
            &label,
            &(kraines * p),
            &p.scale_ratio(6 * mi - 4 * r * (r + 2), 1),
        );
        c_l.equal(
            &label,
            &(&l * p),
            &p.scale_ratio(-2 * r * (r + 2) + (mi - k) * (2 * mi - 2 * k + 4), 1),
        );
        c_lb.equal(
            &label,
            &(&lb * p),
            &p.scale_ratio(-2 * r * (r + 2) + (mi - k) * (2 * mi - 2 * k - 4), 1),
        );
    }
    record(
        &mut report,
        "restriction.kaehler",
        m,
        c_o1,
        "Ω1 = i(2m − 2k) on S_r^k",
    );
    record(
        &mut report,
        "restriction.kraines",
        m,
        c_om,
        "Ω = 6m − 4r(r+2) on S_r^k",
    );
    record(
        &mut report,
        "restriction.l",
        m,
        c_l,
        "L = −2r(r+2) + (m−k)(2m−2k+4) on S_r^k",
    );
    record(
        &mut report,
        "restriction.l-bar",
        m,
        c_lb,
        "L̄ = −2r(r+2) + (m−k)(2m−2k−4) on S_r^k",
    );

    // Adjointness under the standard Hermitian form.
    let mut adj = new();
    let mut literal_fails = 0usize;
    for r in 0..m {
        let (lo, hi) = (dec.kraines_projector(r), dec.kraines_projector(r + 1));
        for j in 0..geom.basis.len() {
            let (f, fb) = (&geom.basis.f[j], &geom.basis.f_bar[j]);
            let up = &(hi * &geom.p_plus(r, fb)) * lo;
            let down_f = &(lo * &geom.p_minus(r + 1, f)) * hi;
            let down_fb = &(lo * &geom.p_minus(r + 1, fb)) * hi;
            adj.equal(
                format_args!("r={r} j={}", j + 1),
                &up,
                &-&down_f.conj_transpose(),
            );
            if !(&up - &down_fb.conj_transpose()).is_zero_within(tol) {
                literal_fails += 1;
            }
        }
    }
    record(
        &mut report,
        "adjointness.level-projectors",
        m,
        adj,
        format!(
            "P_{{r+1}} p_r^+(f̄_j) P_r = −(P_r p_{{r+1}}^−(f_j) P_{{r+1}})^H; \
             the pairing with p_{{r+1}}^−(f̄_j) itself fails in {literal_fails} of {} cases",
            m * geom.basis.len()
        ),
    );

    report
}

/// Which of the four level-changing products defines a constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Variant {
    #[serde(rename = "++")]
    PlusPlus,
    #[serde(rename = "+-")]
    PlusMinus,
    #[serde(rename = "-+")]
    MinusPlus,
    #[serde(rename = "--")]
    MinusMinus,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::PlusPlus,
        Variant::PlusMinus,
        Variant::MinusPlus,
        Variant::MinusMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Variant::PlusPlus => "++",
            Variant::PlusMinus => "+-",
            Variant::MinusPlus => "-+",
            Variant::MinusMinus => "--",
        }
    }

    /// Variants whose left factor is `p_{r−1}^+`, undefined at `r = 0`.
    pub fn needs_lower_level(self) -> bool {
        matches!(self, Variant::PlusPlus | Variant::PlusMinus)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Closed forms of the four constants:
///
/// * `−−`: `(r−m)(2+k−m+r) / (2(r+1))`
/// * `+−`: `(k−m−r)(2+m+r) / (2(r+1))`
/// * `−+`: `(r−m)(2−k+m+r) / (2(r+1))`
/// * `++`: `(m−k−r)(2+m+r) / (2(r+1))`
pub fn closed_form_a(m: usize, r: usize, k: usize, variant: Variant) -> BigRational {
    let (m, r, k) = (m as i64, r as i64, k as i64);
    let num = match variant {
        Variant::MinusMinus => (r - m) * (2 + k - m + r),
        Variant::PlusMinus => (k - m - r) * (2 + m + r),
        Variant::MinusPlus => (r - m) * (2 - k + m + r),
        Variant::PlusPlus => (m - k - r) * (2 + m + r),
    };
    ratio(num, 2 * (r + 1))
}

/// `Σ_j` of the product defining `variant` at level `r`, on the whole spinor space.
pub fn variant_operator<S: Scalar>(
    geom: &SpinorGeometry<S>,
    r: usize,
    variant: Variant,
) -> Result<DenseMatrix<S>> {
    if variant.needs_lower_level() && r == 0 {
        return Err(Error::Domain(format!("variant {variant} needs r ≥ 1")));
    }
    let d = geom.model.spinor_dim();
    let b = &geom.basis;
    let terms = b.f.iter().zip(&b.f_bar).map(|(f, fb)| match variant {
        Variant::MinusMinus => &geom.p_minus(r + 1, f) * &geom.p_plus(r, fb),
        Variant::PlusMinus => &geom.p_plus(r - 1, f) * &geom.p_minus(r, fb),
        Variant::MinusPlus => &geom.p_minus(r + 1, fb) * &geom.p_plus(r, f),
        Variant::PlusPlus => &geom.p_plus(r - 1, fb) * &geom.p_minus(r, f),
    });
    Ok(sum_matrices(d, d, terms))
}

/// The common eigenvalue of `op` on the block spanned by `basis`, required to
/// be exactly (or within `tol`) the same on every basis vector.
pub fn scalar_on_block<S: Scalar>(
    op: &DenseMatrix<S>,
    basis: &[Vec<S>],
    tol: f64,
    identity: &str,
) -> Result<S> {
    let fail = |witness: String| Error::Identity {
        identity: identity.to_string(),
        witness,
    };
    let mut value: Option<S> = None;
    for (n, v) in basis.iter().enumerate() {
        let image = op.apply(v)?;
        let pivot = v
            .iter()
            .position(|x| !x.is_negligible(tol))
            .ok_or_else(|| fail(format!("basis vector {n} is zero")))?;
        let c = image[pivot].div(&v[pivot]).expect("nonzero pivot");
        for (idx, (w, x)) in image.iter().zip(v).enumerate() {
            if !w.approx_eq(&c.mul(x), tol) {
                return Err(fail(format!(
                    "basis vector {n} is not an eigenvector: coordinate {idx} is {w}, expected {}",
                    c.mul(x)
                )));
            }
        }
        match &value {
            Some(prev) if !prev.approx_eq(&c, tol) => {
                return Err(fail(format!(
                    "eigenvalue {prev} on vector 0 but {c} on vector {n}"
                )));
            }
            Some(_) => {}
            None => value = Some(c),
        }
    }
    value.ok_or_else(|| fail("empty block".into()))
}

/// The constant `A_{r,k}^{variant}`: the scalar by which the variant's
/// operator acts on `S_r^k`.
pub fn compute_a<S: Scalar>(
    geom: &SpinorGeometry<S>,
    dec: &JointDecomposition<S>,
    r: usize,
    k: usize,
    variant: Variant,
    tol: f64,
) -> Result<S> {
    if dec.block_dimension(r, k)? == 0 {
        return Err(Error::Domain(format!(
            "block (r={r}, k={k}) is zero-dimensional"
        )));
    }
    let op = variant_operator(geom, r, variant)?;
    let block = dec.block(r, k).expect("checked above");
    scalar_on_block(&op, &block.basis, tol, &format!("A^{variant} on ({r},{k})"))
}

#[derive(Clone, Debug)]
pub struct ConstantRow<S> {
    pub r: usize,
    pub k: usize,
    pub variant: Variant,
    pub computed: S,
    pub closed_form: BigRational,
    pub matches: bool,
    /// The constant is zero, so dividing by it is meaningless.
    pub normalization_undefined: bool,
}

/// Every defined constant on every nonzero block, ordered by `(r, k, variant)`.
pub fn constants_table<S: Scalar>(
    geom: &SpinorGeometry<S>,
    dec: &JointDecomposition<S>,
    tol: f64,
) -> Result<Vec<ConstantRow<S>>> {
    let mut operators = BTreeMap::new();
    let mut rows = Vec::new();
    for b in dec.nonzero_blocks() {
        for variant in Variant::ALL {
            if variant.needs_lower_level() && b.r == 0 {
                continue;
            }
            let op = match operators.entry((b.r, variant)) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(variant_operator(geom, b.r, variant)?),
            };
            let computed = scalar_on_block(
                op,
                &b.basis,
                tol,
                &format!("A^{variant} on ({},{})", b.r, b.k),
            )?;
            let closed_form = closed_form_a(geom.m(), b.r, b.k, variant);
            let matches = computed.approx_eq(&S::from_rational(&closed_form), tol);
            rows.push(ConstantRow {
                r: b.r,
                k: b.k,
                variant,
                normalization_undefined: computed.is_negligible(tol),
                computed,
                closed_form,
                matches,
            });
        }
    }
    rows.sort_by_key(|row| (row.r, row.k, row.variant));
    Ok(rows)
}
