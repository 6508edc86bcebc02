//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines print in order.
//! Criteria listed in `KNOWN_UNMET` are computed in full and reported as
//! FAIL; the target only exits nonzero when the outcome differs from that
//! expectation, in either direction.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use quatspin_core::bounds::{
    check_dominance, check_k_monotonicity, check_r_monotonicity, check_universal_consistency,
    universal_coefficient,
};
use quatspin_core::so3::top_component_trials;
use quatspin_core::{
    build_clifford_model, decompose, lattice_allows, verify_model, CheckStatus, ExactScalar,
    ModelRun, ResourceCap, SpinorGeometry, VerifyOptions,
};

const MS: [usize; 3] = [1, 2, 3];

/// The first-dominates-second enumeration has genuine counterexamples
/// (first at m = 1, r = 0: 4/3 < 2), so criterion 5 cannot pass.
const KNOWN_UNMET: &[u32] = &[5];

const STRUCTURE_IDS: &[&str] = &[
    "clifford.anticommutation",
    "quaternion.relations",
    "quaternion.orthogonal",
    "quaternion.adapted-basis",
    "kaehler.commutators",
    "kraines.central",
    "sl2.relations",
    "sl2.casimir",
];

const SPECTRUM_IDS: &[&str] = &[
    "spectrum.kraines",
    "spectrum.kaehler",
    "decomposition.blocks",
    "decomposition.lattice",
];

const IDENTITY_PREFIXES: &[&str] = &[
    "mapping.",
    "weights.",
    "kraines.vector-commutator",
    "kraines.twisted-commutator",
    "splitting.",
    "basis.",
    "twist.",
    "restriction.",
    "adjointness.",
];

const RESTRICTION_IDS: &[&str] = &[
    "restriction.kaehler",
    "restriction.kraines",
    "restriction.l",
    "restriction.l-bar",
];

const CONSTANT_IDS: &[&str] = &[
    "constants.a.plus-plus",
    "constants.a.plus-minus",
    "constants.a.minus-plus",
    "constants.a.minus-minus",
];

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
}

type Run = ModelRun<ExactScalar>;

/// Every listed id must be present and an exact zero, for every model.
fn exact_zero_ids(runs: &[Run], ids: &[&str]) -> Result<usize, String> {
    let mut n = 0;
    for run in runs {
        for id in ids {
            match run.report.find(id, run.m) {
                None => return Err(format!("m={}: {id} missing", run.m)),
                Some(e) if e.status != CheckStatus::ExactZero => {
                    return Err(format!("m={}: {id} is {:?}", run.m, e.status))
                }
                Some(_) => n += 1,
            }
        }
    }
    Ok(n)
}

fn criterion_structure(runs: &[Run]) -> Outcome {
    let res = exact_zero_ids(runs, STRUCTURE_IDS);
    Outcome {
        id: 1,
        title: "Clifford, quaternion, commutator and Casimir residuals are exactly zero",
        passed: res.is_ok(),
        detail: match res {
            Ok(n) => format!("{n} exact-zero checks for m ∈ {{1,2,3}}"),
            Err(e) => e,
        },
    }
}

fn criterion_spectra(runs: &[Run]) -> Outcome {
    let mut res = exact_zero_ids(runs, SPECTRUM_IDS).map(|_| ());
    // Independent look at the block set for m = 1.
    if res.is_ok() {
        let geom = SpinorGeometry::<ExactScalar>::new(
            build_clifford_model(1, ResourceCap::default()).unwrap(),
        );
        res = decompose(geom.model(), geom.ops(), 0.0)
            .map_err(|e| e.to_string())
            .and_then(|dec| {
                let mut nonzero: Vec<(usize, usize)> =
                    dec.nonzero_blocks().map(|b| (b.r, b.k)).collect();
                nonzero.sort();
                let lattice: Vec<(usize, usize)> = (0..=1)
                    .flat_map(|r| (0..=2).map(move |k| (r, k)))
                    .filter(|&(r, k)| lattice_allows(1, r, k))
                    .collect();
                if nonzero == vec![(0, 1), (1, 0), (1, 2)]
                    && nonzero == lattice
                    && dec.total_dimension() == 4
                {
                    Ok(())
                } else {
                    Err(format!(
                        "m=1 blocks {nonzero:?}, total {}",
                        dec.total_dimension()
                    ))
                }
            });
    }
    Outcome {
        id: 2,
        title: "Ω and Ω₁ spectra certified, dimensions sum to 4^m, lattice rule exact",
        passed: res.is_ok(),
        detail: match res {
            Ok(()) => {
                "Lagrange certification exact for m ∈ {1,2,3}; m=1 blocks (0,1),(1,0),(1,2)".into()
            }
            Err(e) => e,
        },
    }
}

fn criterion_identities(runs: &[Run]) -> Outcome {
    let mut res = exact_zero_ids(runs, RESTRICTION_IDS).map(|_| 0);
    let mut count = 0;
    for run in runs {
        for e in &run.report.entries {
            if IDENTITY_PREFIXES.iter().any(|p| e.id.starts_with(p)) {
                count += 1;
                if res.is_ok() && e.status != CheckStatus::ExactZero {
                    res = Err(format!("m={}: {} is {:?}", run.m, e.id, e.status));
                }
            }
        }
    }
    if res.is_ok() && count < 25 * runs.len() {
        res = Err(format!("only {count} identity entries"));
    }
    Outcome {
        id: 3,
        title: "mapping properties and operator identities hold exactly",
        passed: res.is_ok(),
        detail: match res {
            Ok(_) => format!("{count} identity entries exact-zero, restriction scalars included"),
            Err(e) => e,
        },
    }
}

fn criterion_constants(runs: &[Run]) -> Outcome {
    let mut res = exact_zero_ids(runs, CONSTANT_IDS).map(|_| ());
    let mut rows = 0;
    for run in runs {
        match &run.constants {
            None => res = res.and(Err(format!("m={}: no constants table", run.m))),
            Some(table) => {
                rows += table.len();
                if let Some(bad) = table.iter().find(|row| !row.matches) {
                    res = res.and(Err(format!(
                        "m={} (r={}, k={}, {}): computed {} vs {}",
                        run.m, bad.r, bad.k, bad.variant, bad.computed, bad.closed_form
                    )));
                }
            }
        }
    }
    Outcome {
        id: 4,
        title: "every block constant equals its closed form exactly",
        passed: res.is_ok() && rows > 0,
        detail: match res {
            Ok(()) => format!("{rows} (m, r, k, variant) rows match"),
            Err(e) => e,
        },
    }
}

fn criterion_bounds() -> Outcome {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let mut problems = Vec::new();
    if let Some(m) = (1..=50).find(|&m| universal_coefficient(m) != q(m as i64 + 3, m as i64 + 2)) {
        problems.push(format!("universal coefficient wrong at m={m}"));
    }
    if universal_coefficient(2) != q(5, 4) || universal_coefficient(3) != q(6, 5) {
        problems.push("m=2,3 values differ from 5/4, 6/5".into());
    }
    let checks = [
        check_universal_consistency(50),
        check_r_monotonicity(50),
        check_k_monotonicity(50),
        check_dominance(50),
    ];
    for c in &checks {
        if !c.passed() {
            problems.push(format!(
                "{}: {} of {} violate, first {}",
                c.id,
                c.violations,
                c.checked,
                c.first_violation.as_deref().unwrap_or("?")
            ));
        }
    }
    Outcome {
        id: 5,
        title: "universal coefficient (m+3)/(m+2), extremal rows, monotonicity and dominance for m ≤ 50",
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            "all properties hold".into()
        } else {
            problems.join("; ")
        },
    }
}

fn criterion_search() -> Outcome {
    let res = top_component_trials(10, 100, 1000, 0, 1e-8);
    let (passed, detail) = match res {
        Ok(s) => (
            s.exhausted == 0 && s.trials == 1100,
            format!(
                "{} trials, {} found, {} exhausted (budget {})",
                s.trials, s.found, s.exhausted, s.budget
            ),
        ),
        Err(e) => (false, e.to_string()),
    };
    Outcome {
        id: 6,
        title: "a rotation with nonzero top-weight component is always found",
        passed,
        detail,
    }
}

fn criterion_negative_control() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_quatspin"))
        .args([
            "verify",
            "--m-range",
            "1..3",
            "--corrupt-gamma",
            "0",
            "--format",
            "json",
        ])
        .output()
        .expect("run quatspin");
    let mut problems = Vec::new();
    if out.status.code() != Some(1) {
        problems.push(format!("exit status {:?}, expected 1", out.status.code()));
    }
    let report: serde_json::Value = match serde_json::from_slice(&out.stdout) {
        Ok(v) => v,
        Err(e) => serde_json::Value::String(format!("unparseable report: {e}")),
    };
    let mut witnesses = 0;
    for m in MS {
        let model = report["models"]
            .as_array()
            .and_then(|ms| ms.iter().find(|x| x["m"] == m));
        for id in [
            "spectrum.kraines",
            "decomposition.blocks",
            "lemmas.suite",
            "constants.reproduction",
        ] {
            let entry = model
                .and_then(|x| x["entries"].as_array())
                .and_then(|es| es.iter().find(|e| e["id"] == id));
            match entry {
                Some(e)
                    if e["status"] == "nonzero"
                        && e["witness"].as_str().is_some_and(|w| !w.is_empty()) =>
                {
                    witnesses += 1
                }
                _ => problems.push(format!("m={m}: {id} did not fail with a witness")),
            }
        }
    }
    Outcome {
        id: 7,
        title: "a corrupted gamma matrix fails spectra, identities and constants with witnesses",
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("exit 1, {witnesses} failing entries with witnesses")
        } else {
            problems.join("; ")
        },
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let opts = VerifyOptions::default();
    let runs: Vec<Run> = MS
        .iter()
        .map(|&m| verify_model::<ExactScalar>(m, &opts).expect("model within cap"))
        .collect();
    // The float backend must agree with the exact one on the small model.
    let float = verify_model::<Complex64>(1, &opts).expect("float model");
    assert!(float.report.all_passed(), "float backend fails at m=1");

    let outcomes = [
        criterion_structure(&runs),
        criterion_spectra(&runs),
        criterion_identities(&runs),
        criterion_constants(&runs),
        criterion_bounds(),
        criterion_search(),
        criterion_negative_control(),
    ];

    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN_UNMET.contains(&o.id);
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        let note = match (o.passed, known) {
            (false, true) => " (known unmet)",
            (true, true) => " (expected to fail, now passes)",
            _ => "",
        };
        println!(
            "criterion {}: {verdict}{note}: {}: {}",
            o.id, o.title, o.detail
        );
        if o.passed == known {
            unexpected += 1;
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!(
        "acceptance: {passed}/{} criteria pass, {unexpected} unexpected, {:.1}s",
        outcomes.len(),
        start.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
