use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use quatspin_core::bounds::{case_a_row, universal_coefficient};
use quatspin_core::{
    closed_form_a, constants_table, decompose, verify_model, ExactScalar, ResourceCap, Scalar,
    SpinorGeometry, Variant, VerifyOptions,
};

fn constants<S: Scalar>(m: usize) -> Vec<(usize, usize, Variant, Complex64)> {
    let geom = SpinorGeometry::<S>::build(m, ResourceCap::default()).unwrap();
    let dec = decompose(geom.model(), geom.ops(), 1e-10).unwrap();
    constants_table(&geom, &dec, 1e-10)
        .unwrap()
        .into_iter()
        .map(|row| (row.r, row.k, row.variant, row.computed.to_complex64()))
        .collect()
}

#[test]
fn m3_block_dimensions() {
    let geom = SpinorGeometry::<ExactScalar>::build(3, ResourceCap::default()).unwrap();
    let dec = decompose(geom.model(), geom.ops(), 0.0).unwrap();
    let expected = [
        ((0, 3), 14),
        ((1, 2), 14),
        ((1, 4), 14),
        ((2, 1), 6),
        ((2, 3), 6),
        ((2, 5), 6),
        ((3, 0), 1),
        ((3, 2), 1),
        ((3, 4), 1),
        ((3, 6), 1),
    ];
    let got: Vec<((usize, usize), usize)> =
        dec.nonzero_blocks().map(|b| ((b.r, b.k), b.dim)).collect();
    assert_eq!(got, expected);
    assert_eq!(dec.total_dimension(), 64);
}

#[test]
fn float_backend_matches_exact_constants() {
    for m in 1..=2 {
        let exact = constants::<ExactScalar>(m);
        let float = constants::<Complex64>(m);
        assert_eq!(exact.len(), float.len());
        for (e, f) in exact.iter().zip(&float) {
            assert_eq!((e.0, e.1, e.2), (f.0, f.1, f.2));
            assert!((e.3 - f.3).norm() < 1e-9, "m={m} {e:?} vs {f:?}");
        }
    }
}

#[test]
fn float_verification_passes_within_tolerance() {
    let run = verify_model::<Complex64>(2, &VerifyOptions::default()).unwrap();
    assert!(
        run.report.all_passed(),
        "{:?}",
        run.report.failures().collect::<Vec<_>>()
    );
}

#[test]
fn negated_gamma_still_verifies() {
    // Negating a whole generator is a reflection: every identity survives,
    // which is why the negative control corrupts a single entry instead.
    let geom = SpinorGeometry::<ExactScalar>::build(1, ResourceCap::default()).unwrap();
    let flipped = SpinorGeometry::new(geom.model().with_negated_gamma(2));
    assert!(flipped.model().anticommutation_witness(0.0).is_none());
    assert!(decompose(flipped.model(), flipped.ops(), 0.0).is_ok());
}

proptest! {
    #[test]
    fn universal_row_is_case_a_extremal(m in 1usize..200) {
        let row = case_a_row(m, 0, m).unwrap();
        prop_assert_eq!(row.bound1.coefficient, Some(universal_coefficient(m)));
    }

    #[test]
    fn minus_constants_vanish_at_top_level(m in 1usize..30, r in 0usize..30, v in 0usize..4) {
        prop_assume!(r <= m);
        // The − constants at the top level r = m vanish for every k.
        let variant = Variant::ALL[v];
        if r == m && matches!(variant, Variant::MinusMinus | Variant::MinusPlus) {
            for k in 0..=2 * m {
                prop_assert_eq!(closed_form_a(m, r, k, variant).to_f64(), Some(0.0));
            }
        }
    }
}
