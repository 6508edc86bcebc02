//! End-to-end verification of one model size, and of the `sl(2)` modules.

use crate::clifford::{build_clifford_model, ResourceCap};
use crate::decomposition::{
    decompose, kaehler_eigenvalue_im, kraines_eigenvalue, lattice_allows, JointDecomposition,
};
use crate::error::{Error, Result};
use crate::lagrange::lagrange_eigenprojectors;
use crate::projectors::{
    constants_table, verify_lemma_identities, ConstantRow, SpinorGeometry, Variant,
};
use crate::report::{CheckStatus, ResidualCheck, VerificationReport};
use crate::scalar::Scalar;
use crate::so3::{build_irrep, check_rotated_spectrum, sample_rotation, top_component_trials};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Residual tolerance for the float backend; ignored when exact.
    pub tol: f64,
    pub cap: ResourceCap,
    /// Build the model with this gamma matrix corrupted (negative control).
    pub corrupt_gamma: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: 1e-10,
            cap: ResourceCap::default(),
            corrupt_gamma: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModelRun<S> {
    pub m: usize,
    pub content_hash: String,
    pub report: VerificationReport,
    /// Present when the decomposition certified and every constant was scalar.
    pub constants: Option<Vec<ConstantRow<S>>>,
}

fn fail(witness: impl Into<String>) -> CheckStatus {
    CheckStatus::Nonzero {
        witness: witness.into(),
    }
}

fn pass<S: Scalar>() -> CheckStatus {
    ResidualCheck::new::<S>(0.0).status()
}

/// Builds the model for `m` and runs every structural check, the spectral
/// decomposition, the operator identities and the constant reproduction.
///
/// Returns an error only when the model cannot be built (resource cap or
/// `m = 0`); everything else is a report entry.
pub fn verify_model<S: Scalar>(m: usize, opts: &VerifyOptions) -> Result<ModelRun<S>> {
    let mut model = build_clifford_model::<S>(m, opts.cap)?;
    if let Some(index) = opts.corrupt_gamma {
        model = model.with_corrupted_gamma(index)?;
    }
    let tol = opts.tol;
    let new = || ResidualCheck::new::<S>(tol);
    let content_hash = model.content_hash();
    let mut report = VerificationReport::default();

    let anti = match model.anticommutation_witness(tol) {
        None => pass::<S>(),
        Some(w) => fail(w),
    };
    report.push(
        "clifford.anticommutation",
        m,
        anti,
        "γ_iγ_j + γ_jγ_i = −2δ_ij",
    );

    let geom = SpinorGeometry::new(model);
    let (mut quat, mut orth, mut adapted) = (new(), new(), new());
    geom.triple().check_quaternion_relations(&mut quat);
    geom.triple().check_orthogonal(&mut orth);
    geom.triple().check_adapted(&mut adapted);
    report.push(
        "quaternion.relations",
        m,
        quat.status(),
        "J_aJ_b = ε_abc J_c − δ_ab",
    );
    report.push("quaternion.orthogonal", m, orth.status(), "J_aᵀJ_a = 1");
    report.push(
        "quaternion.adapted-basis",
        m,
        adapted.status(),
        "J_1 e_{2j−1} = e_{2j}",
    );

    let ops = geom.ops();
    let (mut comm, mut central, mut sl2, mut casimir) = (new(), new(), new(), new());
    ops.check_commutators(&mut comm);
    ops.check_kraines_commutes(&mut central);
    ops.check_sl2(&mut sl2);
    ops.check_casimir(&mut casimir);
    report.push(
        "kaehler.commutators",
        m,
        comm.status(),
        "[Ω_a,Ω_b] = 4ε_abc Ω_c",
    );
    report.push("kraines.central", m, central.status(), "[Ω,Ω_a] = 0");
    report.push(
        "sl2.relations",
        m,
        sl2.status(),
        "O_a = (i/2)Ω_a span sl(2)",
    );
    report.push(
        "sl2.casimir",
        m,
        casimir.status(),
        "⅛ΣO_aO_a = −(Ω − 6m)/32, also in ladder form",
    );

    let kraines_spec: Vec<S> = (0..=m)
        .map(|r| S::from_int(kraines_eigenvalue(m, r)))
        .collect();
    let kaehler_spec: Vec<S> = (0..=2 * m)
        .map(|k| S::imag_unit().scale_int(kaehler_eigenvalue_im(m, k)))
        .collect();
    for (id, op, spec, note) in [
        (
            "spectrum.kraines",
            ops.kraines(),
            &kraines_spec,
            "Ω diagonalizable with eigenvalues in {6m − 4r(r+2)}",
        ),
        (
            "spectrum.kaehler",
            ops.omega(0),
            &kaehler_spec,
            "Ω1 diagonalizable with eigenvalues in {i(2m − 2k)}",
        ),
    ] {
        let status = match lagrange_eigenprojectors(op, spec, tol) {
            Ok(family) => {
                let present = family.occurring(tol).len();
                if present == spec.len() {
                    pass::<S>()
                } else {
                    fail(format!(
                        "only {present} of {} eigenvalues occur",
                        spec.len()
                    ))
                }
            }
            Err(e) => fail(e.to_string()),
        };
        report.push(id, m, status, note);
    }

    let dec = match decompose(geom.model(), ops, tol) {
        Ok(dec) => dec,
        Err(e) => {
            let witness = e.to_string();
            report.push(
                "decomposition.blocks",
                m,
                fail(&witness),
                "joint eigenspaces S_r^k",
            );
            for id in ["lemmas.suite", "constants.reproduction"] {
                report.push(
                    id,
                    m,
                    fail(format!("not evaluated: {witness}")),
                    "requires a certified decomposition",
                );
            }
            report.sort();
            return Ok(ModelRun {
                m,
                content_hash,
                report,
                constants: None,
            });
        }
    };
    report.push("decomposition.blocks", m, pass::<S>(), block_summary(&dec));
    report.push(
        "decomposition.lattice",
        m,
        lattice_status::<S>(&dec),
        "nonzero exactly at (k + r − m)/2 ∈ {0..r}",
    );
    report.extend(verify_lemma_identities(&geom, &dec, tol));

    let constants = match constants_table(&geom, &dec, tol) {
        Ok(rows) => {
            for variant in Variant::ALL {
                let rows: Vec<&ConstantRow<S>> =
                    rows.iter().filter(|row| row.variant == variant).collect();
                let status = match rows.iter().find(|row| !row.matches) {
                    None => pass::<S>(),
                    Some(row) => fail(format!(
                        "(r={}, k={}): computed {}, closed form {}",
                        row.r,
                        row.k,
                        row.computed,
                        crate::scalar::format_rational(&row.closed_form)
                    )),
                };
                let zeros = rows
                    .iter()
                    .filter(|row| row.normalization_undefined)
                    .count();
                report.push(
                    format!("constants.a{}", variant_slug(variant)),
                    m,
                    status,
                    format!(
                        "{} blocks; {zeros} with A = 0 (normalization undefined)",
                        rows.len()
                    ),
                );
            }
            Some(rows)
        }
        Err(e) => {
            report.push(
                "constants.reproduction",
                m,
                fail(e.to_string()),
                "restriction to a block is not scalar",
            );
            None
        }
    };
    report.sort();
    Ok(ModelRun {
        m,
        content_hash,
        report,
        constants,
    })
}

fn variant_slug(v: Variant) -> &'static str {
    match v {
        Variant::PlusPlus => ".plus-plus",
        Variant::PlusMinus => ".plus-minus",
        Variant::MinusPlus => ".minus-plus",
        Variant::MinusMinus => ".minus-minus",
    }
}

fn block_summary<S: Scalar>(dec: &JointDecomposition<S>) -> String {
    let dims: Vec<String> = dec
        .nonzero_blocks()
        .map(|b| format!("({},{}):{}", b.r, b.k, b.dim))
        .collect();
    format!("total {} = {}", dec.total_dimension(), dims.join(" "))
}

fn lattice_status<S: Scalar>(dec: &JointDecomposition<S>) -> CheckStatus {
    for b in dec.blocks() {
        let allowed = lattice_allows(dec.m(), b.r, b.k);
        if allowed != (b.dim > 0) {
            return fail(format!(
                "block ({},{}) has dimension {} but lattice says {allowed}",
                b.r, b.k, b.dim
            ));
        }
    }
    if dec.total_dimension() != 1 << (2 * dec.m()) {
        return fail(format!("dimensions sum to {}", dec.total_dimension()));
    }
    pass::<S>()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct So3Options {
    pub max_r_commutators: usize,
    pub max_r_trials: usize,
    pub rotations_per_r: usize,
    pub vectors_per_r: usize,
    pub budget: usize,
    pub threshold: f64,
    pub seed: u64,
    pub tol: f64,
}

impl Default for So3Options {
    fn default() -> Self {
        So3Options {
            max_r_commutators: 50,
            max_r_trials: 10,
            rotations_per_r: 10,
            vectors_per_r: 100,
            budget: 1000,
            threshold: 1e-8,
            seed: 0,
            tol: 1e-10,
        }
    }
}

/// Checks of the `sl(2)` modules; entries carry `m = 0`.
///
/// Commutators and rotated spectra use the backend `S`; the top-component
/// search always runs in floating point with Haar rotations.
pub fn verify_so3<S: Scalar>(opts: &So3Options) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let new = || ResidualCheck::new::<S>(opts.tol);
    let (mut comm, mut cas) = (new(), new());
    for r in 0..=opts.max_r_commutators {
        let irrep = build_irrep::<S>(r);
        irrep.check_commutators(&mut comm);
        irrep.check_casimir(&mut cas);
    }
    let range = format!("r ≤ {}", opts.max_r_commutators);
    report.push(
        "so3.commutators",
        0,
        comm.status(),
        format!("[H_a,H_b] = 2iε_abc H_c, {range}"),
    );
    report.push(
        "so3.casimir",
        0,
        cas.status(),
        format!("⅛ΣH_aH_a = r(r+2)/8, {range}"),
    );

    let mut spectrum = new();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(opts.seed);
    for r in 0..=opts.max_r_trials {
        let irrep = build_irrep::<S>(r);
        for n in 0..opts.rotations_per_r {
            let g = sample_rotation::<S>(&mut rng);
            if let Err(e) = check_rotated_spectrum(&irrep, &g, opts.tol) {
                spectrum.fail(format!("r={r} rotation {n}: {e}"));
            }
        }
    }
    report.push(
        "so3.rotated-spectrum",
        0,
        spectrum.status(),
        format!(
            "Σ_b R_1b H_b has spectrum {{r, r−2, …, −r}}, r ≤ {}",
            opts.max_r_trials
        ),
    );

    let trials = top_component_trials(
        opts.max_r_trials,
        opts.vectors_per_r,
        opts.budget,
        opts.seed,
        opts.threshold,
    )?;
    let status = if trials.exhausted == 0 {
        CheckStatus::Holds
    } else {
        fail(trials.first_exhaustion.clone().unwrap_or_default())
    };
    report.push(
        "so3.top-component-search",
        0,
        status,
        format!(
            "{} of {} vectors found a rotation within {} samples (latest success at sample {})",
            trials.found, trials.trials, trials.budget, trials.max_sample_used
        ),
    );
    Ok(report)
}

/// `verify_model` for every `m` in `ms`, failing fast on a resource refusal.
pub fn verify_range<S: Scalar>(
    ms: impl IntoIterator<Item = usize>,
    opts: &VerifyOptions,
) -> Result<Vec<ModelRun<S>>> {
    let ms: Vec<usize> = ms.into_iter().collect();
    if let Some(&too_big) = ms.iter().find(|&&m| m > opts.cap.max_m) {
        return Err(Error::Resource {
            m: too_big,
            cap: opts.cap.max_m,
        });
    }
    ms.into_iter().map(|m| verify_model::<S>(m, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use num_complex::Complex64;

    #[test]
    fn exact_m1_passes() {
        let run = verify_model::<ExactScalar>(1, &VerifyOptions::default()).unwrap();
        let failures: Vec<_> = run.report.failures().collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(run
            .report
            .entries
            .iter()
            .all(|e| e.status == CheckStatus::ExactZero));
        assert!(run.constants.unwrap().iter().all(|row| row.matches));
    }

    #[test]
    fn float_m2_passes() {
        let run = verify_model::<Complex64>(2, &VerifyOptions::default()).unwrap();
        assert!(
            run.report.all_passed(),
            "{:#?}",
            run.report.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn corrupted_model_fails_with_witness() {
        let opts = VerifyOptions {
            corrupt_gamma: Some(0),
            ..VerifyOptions::default()
        };
        let run = verify_model::<ExactScalar>(1, &opts).unwrap();
        assert!(!run.report.all_passed());
        let entry = run.report.find("decomposition.blocks", 1).unwrap();
        assert!(matches!(&entry.status, CheckStatus::Nonzero { witness } if !witness.is_empty()));
        assert!(!run
            .report
            .find("constants.reproduction", 1)
            .unwrap()
            .status
            .passed());
    }

    #[test]
    fn cap_is_a_refusal() {
        let err = verify_range::<ExactScalar>([1, 5], &VerifyOptions::default()).unwrap_err();
        assert_eq!(err, Error::Resource { m: 5, cap: 4 });
    }

    #[test]
    fn so3_small() {
        let opts = So3Options {
            max_r_commutators: 6,
            max_r_trials: 4,
            rotations_per_r: 3,
            vectors_per_r: 5,
            budget: 50,
            ..So3Options::default()
        };
        assert!(verify_so3::<ExactScalar>(&opts).unwrap().all_passed());
        assert!(verify_so3::<Complex64>(&opts).unwrap().all_passed());
    }
}
