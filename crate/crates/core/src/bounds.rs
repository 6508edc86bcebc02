//! Lower bounds for `λ²` in units of `κ/4`, assembled from the constants
//! `A_{r,k}^{±±}`.
//!
//! A constant `A` enters a bound through the coefficient `2A/(2A+1)`. The
//! coefficient is only a usable lower bound when it is defined and positive;
//! zero, negative and undefined coefficients are reported but flagged.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::decomposition::lattice_allows;
use crate::error::{Error, Result};
use crate::projectors::{closed_form_a, Variant};
use crate::scalar::{format_rational, ratio, serialize_opt_rational, serialize_rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum BoundCase {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    /// The constant `A` the coefficient is built from.
    #[serde(serialize_with = "serialize_rational")]
    pub a_constant: BigRational,
    /// `2A/(2A+1)`; absent when `2A + 1 = 0`.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub coefficient: Option<BigRational>,
    pub usable: bool,
    pub flag: Option<String>,
}

impl BoundValue {
    pub fn from_constant(a: BigRational) -> Self {
        let denom = &a * BigRational::from_integer(2.into()) + BigRational::one();
        if denom.is_zero() {
            return BoundValue {
                a_constant: a,
                coefficient: None,
                usable: false,
                flag: Some("degenerate: 2A + 1 = 0".into()),
            };
        }
        let coefficient = &a * BigRational::from_integer(2.into()) / &denom;
        let flag = if a.is_zero() {
            Some("A = 0: normalization undefined".to_string())
        } else if !coefficient.is_positive() {
            Some("nonpositive coefficient: not a lower bound".to_string())
        } else {
            None
        };
        BoundValue {
            a_constant: a,
            usable: flag.is_none(),
            coefficient: Some(coefficient),
            flag,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub r: usize,
    pub k: usize,
    pub case: BoundCase,
    pub bound1: BoundValue,
    pub bound2: BoundValue,
}

impl BoundRow {
    pub fn usable(&self) -> bool {
        self.bound1.usable && self.bound2.usable
    }
}

/// Both cases need a level above `r` and a lattice point `(r, k)`.
fn check_domain(m: usize, r: usize, k: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    if r >= m || !lattice_allows(m, r, k) {
        return Err(Error::Domain(format!(
            "(r={r}, k={k}) is not a lattice point with r < m = {m}"
        )));
    }
    Ok(())
}

/// Case A at `(r, k)`: constants `A^{++}_{r+1,k+1}` and `A^{−−}_{r,k}`.
pub fn case_a_row(m: usize, r: usize, k: usize) -> Result<BoundRow> {
    check_domain(m, r, k)?;
    Ok(BoundRow {
        r,
        k,
        case: BoundCase::A,
        bound1: BoundValue::from_constant(closed_form_a(m, r + 1, k + 1, Variant::PlusPlus)),
        bound2: BoundValue::from_constant(closed_form_a(m, r, k, Variant::MinusMinus)),
    })
}

/// Case B at `(r, k)`: constants `A^{+−}_{r+1,k−1}` and `A^{−+}_{r,k}`.
/// This is case A with `Ω₁` replaced by `−Ω₁`, i.e. `k ↦ 2m − k`.
pub fn case_b_row(m: usize, r: usize, k: usize) -> Result<BoundRow> {
    check_domain(m, r, k)?;
    // k ≥ m − r ≥ 1 on the lattice when r < m, so k − 1 does not underflow.
    Ok(BoundRow {
        r,
        k,
        case: BoundCase::B,
        bound1: BoundValue::from_constant(closed_form_a(m, r + 1, k - 1, Variant::PlusMinus)),
        bound2: BoundValue::from_constant(closed_form_a(m, r, k, Variant::MinusPlus)),
    })
}

fn strict_pair(row: BoundRow) -> Result<(BigRational, BigRational)> {
    match (&row.bound1.coefficient, &row.bound2.coefficient) {
        (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
        _ => Err(Error::DegenerateBound {
            m: 0,
            r: row.r,
            k: row.k,
            reason: "2A + 1 = 0".into(),
        }),
    }
}

/// The two case-A coefficients of `κ/4`.
pub fn bound_case_a(m: usize, r: usize, k: usize) -> Result<(BigRational, BigRational)> {
    strict_pair(case_a_row(m, r, k)?).map_err(|e| with_m(e, m))
}

/// The two case-B coefficients of `κ/4`.
pub fn bound_case_b(m: usize, r: usize, k: usize) -> Result<(BigRational, BigRational)> {
    strict_pair(case_b_row(m, r, k)?).map_err(|e| with_m(e, m))
}

fn with_m(e: Error, m: usize) -> Error {
    match e {
        Error::DegenerateBound { r, k, reason, .. } => Error::DegenerateBound { m, r, k, reason },
        other => other,
    }
}

/// `(m+3)/(m+2)`.
pub fn universal_coefficient(m: usize) -> BigRational {
    ratio(m as i64 + 3, m as i64 + 2)
}

/// `(m+3)/(m+2) · κ/4`.
pub fn universal_bound(m: usize, kappa: &BigRational) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    Ok(universal_coefficient(m) * quarter(kappa)?)
}

fn quarter(kappa: &BigRational) -> Result<BigRational> {
    if !kappa.is_positive() {
        return Err(Error::Domain(format!(
            "scalar curvature must be positive, got {}",
            format_rational(kappa)
        )));
    }
    Ok(kappa / BigRational::from_integer(4.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonBounds {
    /// `n/(n−1)` with `n = 4m`.
    #[serde(serialize_with = "serialize_rational")]
    pub friedrich: BigRational,
    /// Complex dimension used for the Kähler bounds.
    pub complex_dim: usize,
    /// `(m_c+1)/m_c`.
    #[serde(serialize_with = "serialize_rational")]
    pub kirchberg_odd: BigRational,
    /// `m_c/(m_c−1)`; absent for `m_c = 1`.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub kirchberg_even: Option<BigRational>,
}

pub fn comparison_bounds(m: usize, complex_dim: usize) -> ComparisonBounds {
    let n = 4 * m as i64;
    let mc = complex_dim as i64;
    ComparisonBounds {
        friedrich: ratio(n, n - 1),
        complex_dim,
        kirchberg_odd: ratio(mc + 1, mc),
        kirchberg_even: (mc > 1).then(|| ratio(mc, mc - 1)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub m: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub kappa: BigRational,
    pub rows: Vec<BoundRow>,
    #[serde(serialize_with = "serialize_rational")]
    pub universal: BigRational,
    /// `universal · κ/4`.
    #[serde(serialize_with = "serialize_rational")]
    pub universal_value: BigRational,
    pub comparisons: ComparisonBounds,
}

/// Every case-A and case-B row for `r < m` on the lattice.
pub fn bound_report(m: usize, kappa: &BigRational, complex_dim: usize) -> Result<BoundReport> {
    let universal_value = universal_bound(m, kappa)?;
    let mut rows = Vec::new();
    for r in 0..m {
        for k in 0..=2 * m {
            if lattice_allows(m, r, k) {
                rows.push(case_a_row(m, r, k)?);
                rows.push(case_b_row(m, r, k)?);
            }
        }
    }
    rows.sort_by_key(|row| (row.r, row.k, row.case));
    Ok(BoundReport {
        m,
        kappa: kappa.clone(),
        rows,
        universal: universal_coefficient(m),
        universal_value,
        comparisons: comparison_bounds(m, complex_dim),
    })
}

/// Result of an enumerated property over `m = 1..=max_m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub id: String,
    pub max_m: usize,
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl PropertyCheck {
    fn new(id: &str, max_m: usize) -> Self {
        PropertyCheck {
            id: id.into(),
            max_m,
            checked: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn test(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// `2(3+m+r)/(4+2m+r)`, the first case-A coefficient at `k = m − r`.
pub fn extremal_first(m: usize, r: usize) -> BigRational {
    let (m, r) = (m as i64, r as i64);
    ratio(2 * (3 + m + r), 4 + 2 * m + r)
}

/// `(2m−2r)/(2m−3r−1)`, the second case-A coefficient at `k = m − r`;
/// `None` when the denominator vanishes.
pub fn extremal_second(m: usize, r: usize) -> Option<BigRational> {
    let (m, r) = (m as i64, r as i64);
    let den = 2 * m - 3 * r - 1;
    (den != 0).then(|| ratio(2 * m - 2 * r, den))
}

/// The universal coefficient equals the extremal case-A value at `r = 0`,
/// and both extremal formulas agree with the rows built from the constants.
pub fn check_universal_consistency(max_m: usize) -> PropertyCheck {
    let mut c = PropertyCheck::new("bounds.universal-is-extremal", max_m);
    for m in 1..=max_m {
        c.test(universal_coefficient(m) == extremal_first(m, 0), || {
            format!(
                "m={m}: universal {} vs r=0 value",
                format_rational(&universal_coefficient(m))
            )
        });
        for r in 0..m {
            let row = case_a_row(m, r, m - r).expect("lattice point");
            c.test(row.bound1.coefficient == Some(extremal_first(m, r)), || {
                format!("m={m} r={r}: first coefficient differs from 2(3+m+r)/(4+2m+r)")
            });
            c.test(row.bound2.coefficient == extremal_second(m, r), || {
                format!("m={m} r={r}: second coefficient differs from (2m−2r)/(2m−3r−1)")
            });
            let mirrored = case_b_row(m, r, m + r).expect("lattice point");
            c.test(
                mirrored.bound1 == row.bound1 && mirrored.bound2 == row.bound2,
                || format!("m={m} r={r}: case B at k=m+r differs from case A at k=m−r"),
            );
        }
    }
    c
}

/// The first extremal coefficient strictly increases with `r ∈ 0..=m`.
pub fn check_r_monotonicity(max_m: usize) -> PropertyCheck {
    let mut c = PropertyCheck::new("bounds.r-monotone", max_m);
    for m in 1..=max_m {
        for r in 0..m {
            let (a, b) = (extremal_first(m, r), extremal_first(m, r + 1));
            c.test(a < b, || {
                format!(
                    "m={m}: r={r} gives {}, r={} gives {}",
                    format_rational(&a),
                    r + 1,
                    format_rational(&b)
                )
            });
        }
    }
    c
}

/// Usable case-A coefficients do not increase along the lattice in `k`.
pub fn check_k_monotonicity(max_m: usize) -> PropertyCheck {
    let mut c = PropertyCheck::new("bounds.k-nonincreasing", max_m);
    for m in 1..=max_m {
        for r in 0..m {
            let rows: Vec<BoundRow> = (m - r..=m + r)
                .step_by(2)
                .map(|k| case_a_row(m, r, k).expect("lattice point"))
                .collect();
            for w in rows.windows(2) {
                for (which, lo, hi) in [
                    (1, &w[0].bound1, &w[1].bound1),
                    (2, &w[0].bound2, &w[1].bound2),
                ] {
                    if let (true, true, Some(x), Some(y)) =
                        (lo.usable, hi.usable, &lo.coefficient, &hi.coefficient)
                    {
                        c.test(y <= x, || {
                            format!(
                                "m={m} r={r}: bound{which} rises from {} at k={} to {} at k={}",
                                format_rational(x),
                                w[0].k,
                                format_rational(y),
                                w[1].k
                            )
                        });
                    }
                }
            }
        }
    }
    c
}

/// At `k = m − r`, wherever `2m − 3r − 1 > 0`, the first coefficient is at
/// least the second.
pub fn check_dominance(max_m: usize) -> PropertyCheck {
    let mut c = PropertyCheck::new("bounds.first-dominates-second", max_m);
    for m in 1..=max_m {
        for r in 0..m {
            if 2 * m as i64 - 3 * r as i64 - 1 <= 0 {
                continue;
            }
            let first = extremal_first(m, r);
            let second = extremal_second(m, r).expect("positive denominator");
            c.test(first >= second, || {
                format!(
                    "m={m} r={r}: first {} < second {}",
                    format_rational(&first),
                    format_rational(&second)
                )
            });
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn extremal_examples() {
        assert_eq!(bound_case_a(2, 0, 2).unwrap().0, ratio(5, 4));
        assert_eq!(bound_case_a(2, 0, 2).unwrap().1, ratio(4, 3));
        assert_eq!(universal_coefficient(2), ratio(5, 4));
        assert_eq!(universal_coefficient(3), ratio(6, 5));
        let big = universal_coefficient(1_000_000);
        assert!(big > BigRational::one() && big - BigRational::one() < ratio(1, 999_999));
    }

    #[test]
    fn universal_bound_values() {
        assert_eq!(universal_bound(2, &ratio(4, 1)).unwrap(), ratio(5, 4));
        assert!(matches!(
            universal_bound(2, &ratio(0, 1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            universal_bound(2, &ratio(-1, 2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn comparisons() {
        let c = comparison_bounds(2, 3);
        assert_eq!(c.friedrich, ratio(8, 7));
        assert_eq!(c.kirchberg_odd, ratio(4, 3));
        assert_eq!(comparison_bounds(1, 2).kirchberg_even, Some(ratio(2, 1)));
        assert_eq!(comparison_bounds(1, 1).kirchberg_even, None);
        assert_eq!(comparison_bounds(1, 2).friedrich, universal_coefficient(1));
    }

    #[test]
    fn case_b_mirrors_case_a() {
        for m in 1..8 {
            for r in 0..m {
                for k in (m - r..=m + r).step_by(2) {
                    let a = case_a_row(m, r, 2 * m - k).unwrap();
                    let b = case_b_row(m, r, k).unwrap();
                    assert_eq!((a.bound1, a.bound2), (b.bound1, b.bound2));
                }
            }
        }
    }

    #[test]
    fn domain_and_degeneracy() {
        assert!(matches!(bound_case_a(2, 2, 2), Err(Error::Domain(_))));
        assert!(matches!(bound_case_a(2, 0, 1), Err(Error::Domain(_))));
        // 2m − 3r − 1 = 0 at m = 2, r = 1: second denominator vanishes.
        assert!(matches!(
            bound_case_a(2, 1, 1),
            Err(Error::DegenerateBound {
                m: 2,
                r: 1,
                k: 1,
                ..
            })
        ));
        let row = case_a_row(2, 1, 1).unwrap();
        assert!(row.bound2.coefficient.is_none() && !row.usable());
    }

    #[test]
    fn universal_row_is_usable() {
        for m in 1..10 {
            let row = case_a_row(m, 0, m).unwrap();
            assert!(row.bound1.usable);
            assert_eq!(row.bound1.coefficient, Some(universal_coefficient(m)));
        }
    }

    #[test]
    fn enumerated_properties() {
        assert!(check_universal_consistency(50).passed());
        assert!(check_r_monotonicity(50).passed());
        assert!(check_k_monotonicity(50).passed());
        let dominance = check_dominance(50);
        assert!(dominance.checked > 0);
        // The extremal second coefficient exceeds the first already at m = 1.
        assert_eq!(
            dominance.first_violation.as_deref(),
            Some("m=1 r=0: first 4/3 < second 2")
        );
    }

    #[test]
    fn report_shape() {
        let report = bound_report(2, &ratio(4, 1), 4).unwrap();
        assert_eq!(report.universal_value, ratio(5, 4));
        // r = 0: k = 2; r = 1: k = 1, 3; two cases each.
        assert_eq!(report.rows.len(), 6);
        assert!(bound_report(2, &ratio(0, 1), 4).is_err());
    }

    proptest! {
        #[test]
        fn coefficient_positive_iff_usable(num in -40i64..40, den in 1i64..12) {
            let v = BoundValue::from_constant(ratio(num, den));
            if let Some(c) = &v.coefficient {
                prop_assert_eq!(v.usable, c.is_positive());
            } else {
                prop_assert!(!v.usable);
            }
        }
    }
}
