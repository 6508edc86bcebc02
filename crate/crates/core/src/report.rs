//! Verification report entries and residual bookkeeping.

use std::fmt;

use serde::Serialize;

use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CheckStatus {
    ExactZero,
    WithinTolerance {
        max_residual: f64,
    },
    /// A check that is not a residual (a search or a count) and holds.
    Holds,
    Nonzero {
        witness: String,
    },
}

impl CheckStatus {
    pub fn passed(&self) -> bool {
        !matches!(self, CheckStatus::Nonzero { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::ExactZero => "exact-zero",
            CheckStatus::WithinTolerance { .. } => "within-tolerance",
            CheckStatus::Holds => "holds",
            CheckStatus::Nonzero { .. } => "nonzero",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportEntry {
    pub id: String,
    pub m: usize,
    #[serde(flatten)]
    pub status: CheckStatus,
    pub notes: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub entries: Vec<ReportEntry>,
}

impl VerificationReport {
    pub fn push(
        &mut self,
        id: impl Into<String>,
        m: usize,
        status: CheckStatus,
        notes: impl Into<String>,
    ) {
        self.entries.push(ReportEntry {
            id: id.into(),
            m,
            status,
            notes: notes.into(),
        });
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.status.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.status.passed())
    }

    pub fn find(&self, id: &str, m: usize) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.id == id && e.m == m)
    }

    /// Stable order: by `m`, then id.
    pub fn sort(&mut self) {
        self.entries.sort_by(|a, b| (a.m, &a.id).cmp(&(b.m, &b.id)));
    }
}

/// Accumulates residuals of one named check.
///
/// In exact mode any nonzero residual fails; in float mode residuals up to
/// `tol` (absolute, per entry) pass and the largest is reported.
#[derive(Clone, Debug)]
pub struct ResidualCheck {
    tol: f64,
    exact: bool,
    max_residual: f64,
    witness: Option<String>,
}

impl ResidualCheck {
    pub fn new<S: Scalar>(tol: f64) -> Self {
        ResidualCheck {
            tol,
            exact: S::EXACT,
            max_residual: 0.0,
            witness: None,
        }
    }

    pub fn matrix<S: Scalar>(&mut self, label: impl fmt::Display, residual: &DenseMatrix<S>) {
        if !self.exact {
            self.max_residual = self.max_residual.max(residual.max_modulus());
        }
        if self.witness.is_none() {
            if let Some((i, j, v)) = residual.first_nonzero(self.tol) {
                self.witness = Some(format!("{label}: residual entry ({i},{j}) = {v}"));
            }
        }
    }

    /// Records `lhs − rhs` as a residual.
    pub fn equal<S: Scalar>(
        &mut self,
        label: impl fmt::Display,
        lhs: &DenseMatrix<S>,
        rhs: &DenseMatrix<S>,
    ) {
        self.matrix(label, &(lhs - rhs));
    }

    pub fn scalar<S: Scalar>(&mut self, label: impl fmt::Display, residual: &S) {
        if !self.exact {
            self.max_residual = self.max_residual.max(residual.modulus_f64());
        }
        if self.witness.is_none() && !residual.is_negligible(self.tol) {
            self.witness = Some(format!("{label}: residual {residual}"));
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        if self.witness.is_none() {
            self.witness = Some(witness.into());
        }
    }

    pub fn is_ok(&self) -> bool {
        self.witness.is_none()
    }

    pub fn status(self) -> CheckStatus {
        match self.witness {
            Some(witness) => CheckStatus::Nonzero { witness },
            None if self.exact => CheckStatus::ExactZero,
            None => CheckStatus::WithinTolerance {
                max_residual: self.max_residual,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;
    use num_complex::Complex64;

    #[test]
    fn exact_residuals() {
        let mut c = ResidualCheck::new::<ExactScalar>(0.0);
        c.matrix("zero", &DenseMatrix::<ExactScalar>::zeros(2, 2));
        assert!(c.is_ok());
        c.matrix("id", &DenseMatrix::<ExactScalar>::identity(2));
        c.matrix("later", &DenseMatrix::<ExactScalar>::identity(2));
        match c.status() {
            CheckStatus::Nonzero { witness } => assert!(witness.starts_with("id:")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn float_residuals_report_maximum() {
        let mut c = ResidualCheck::new::<Complex64>(1e-10);
        let tiny = DenseMatrix::<Complex64>::identity(2).scale(&Complex64::new(1e-12, 0.0));
        c.matrix("tiny", &tiny);
        assert_eq!(
            c.status(),
            CheckStatus::WithinTolerance {
                max_residual: 1e-12
            }
        );
    }
}
