//! Joint eigenspace lattice `S = ⊕ S_r^k` of the Kraines operator and `Ω₁`.
//!
//! `Ω` acts on `S_r` as `6m − 4r(r+2)` (`r = 0..m`) and `Ω₁` acts on `S^k`
//! as `i(2m − 2k)` (`k = 0..2m`). A block `S_r^k = S_r ∩ S^k` can only be
//! nonzero when `s = (k + r − m)/2` is an integer in `0..=r`.

use std::collections::BTreeMap;

use crate::clifford::CliffordModel;
use crate::error::{Error, Result};
use crate::lagrange::{lagrange_eigenprojectors, SpectralFamily};
use crate::matrix::{sum_matrices, DenseMatrix};
use crate::quaternionic::KaehlerOperators;
use crate::report::ResidualCheck;
use crate::scalar::Scalar;

pub fn kraines_eigenvalue(m: usize, r: usize) -> i64 {
    let (m, r) = (m as i64, r as i64);
    6 * m - 4 * r * (r + 2)
}

/// Imaginary part of the `Ω₁` eigenvalue on `S^k`.
pub fn kaehler_eigenvalue_im(m: usize, k: usize) -> i64 {
    2 * m as i64 - 2 * k as i64
}

/// `s = (k + r − m)/2` when it is an integer in `0..=r`.
pub fn lattice_level(m: usize, r: usize, k: usize) -> Option<usize> {
    if r > m || k > 2 * m || k + r < m || !(k + r - m).is_multiple_of(2) {
        return None;
    }
    let s = (k + r - m) / 2;
    (s <= r).then_some(s)
}

pub fn lattice_allows(m: usize, r: usize, k: usize) -> bool {
    lattice_level(m, r, k).is_some()
}

#[derive(Clone, Debug)]
pub struct Block<S> {
    pub r: usize,
    pub k: usize,
    pub projector: DenseMatrix<S>,
    /// Spinor coordinate vectors spanning the block (columns of the projector).
    pub basis: Vec<Vec<S>>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct JointDecomposition<S> {
    m: usize,
    kraines: SpectralFamily<S>,
    kaehler: SpectralFamily<S>,
    blocks: BTreeMap<(usize, usize), Block<S>>,
}

/// Certified simultaneous decomposition of the spinor space.
///
/// Fails with a spectrum error when either operator has an eigenvalue outside
/// its expected list, or when the block structure violates the lattice rule.
pub fn decompose<S: Scalar>(
    model: &CliffordModel<S>,
    ops: &KaehlerOperators<S>,
    tol: f64,
) -> Result<JointDecomposition<S>> {
    let m = model.m();
    let d = model.spinor_dim();
    let kraines_spectrum: Vec<S> = (0..=m)
        .map(|r| S::from_int(kraines_eigenvalue(m, r)))
        .collect();
    let kaehler_spectrum: Vec<S> = (0..=2 * m)
        .map(|k| S::imag_unit().scale_int(kaehler_eigenvalue_im(m, k)))
        .collect();
    let kraines = lagrange_eigenprojectors(ops.kraines(), &kraines_spectrum, tol)?;
    let kaehler = lagrange_eigenprojectors(ops.omega(0), &kaehler_spectrum, tol)?;

    let mut blocks = BTreeMap::new();
    for r in 0..=m {
        for k in 0..=2 * m {
            let projector = kraines.projector_at(r) * kaehler.projector_at(k);
            let basis = projector.column_space_basis(tol);
            let dim = basis.len();
            blocks.insert(
                (r, k),
                Block {
                    r,
                    k,
                    projector,
                    basis,
                    dim,
                },
            );
        }
    }
    let dec = JointDecomposition {
        m,
        kraines,
        kaehler,
        blocks,
    };
    dec.certify(ops, d, tol)?;
    Ok(dec)
}

fn spectrum_err(identity: String, witness: String) -> Error {
    Error::Spectrum { identity, witness }
}

impl<S: Scalar> JointDecomposition<S> {
    fn certify(&self, ops: &KaehlerOperators<S>, d: usize, tol: f64) -> Result<()> {
        let total: usize = self.blocks.values().map(|b| b.dim).sum();
        if total != d {
            return Err(spectrum_err(
                "dimension count".into(),
                format!("block dimensions sum to {total}, expected {d}"),
            ));
        }
        let mut check = ResidualCheck::new::<S>(tol);
        check.equal(
            "completeness",
            &sum_matrices(d, d, self.nonzero_blocks().map(|b| b.projector.clone())),
            &DenseMatrix::identity(d),
        );
        let nonzero: Vec<&Block<S>> = self.nonzero_blocks().collect();
        for (i, b) in nonzero.iter().enumerate() {
            if !lattice_allows(self.m, b.r, b.k) {
                return Err(spectrum_err(
                    "lattice rule".into(),
                    format!(
                        "nonzero block (r={}, k={}) of dimension {}",
                        b.r, b.k, b.dim
                    ),
                ));
            }
            let p = &b.projector;
            check.equal(format_args!("idempotence ({},{})", b.r, b.k), &(p * p), p);
            let omega = S::from_int(kraines_eigenvalue(self.m, b.r));
            let omega1 = S::imag_unit().scale_int(kaehler_eigenvalue_im(self.m, b.k));
            check.equal(
                format_args!("Ω on ({},{})", b.r, b.k),
                &(ops.kraines() * p),
                &p.scale(&omega),
            );
            check.equal(
                format_args!("Ω1 on ({},{})", b.r, b.k),
                &(ops.omega(0) * p),
                &p.scale(&omega1),
            );
            for c in &nonzero[i + 1..] {
                check.matrix(
                    format_args!("orthogonality ({},{})·({},{})", b.r, b.k, c.r, c.k),
                    &(p * &c.projector),
                );
            }
        }
        match check.status() {
            crate::report::CheckStatus::Nonzero { witness } => {
                Err(spectrum_err("block certification".into(), witness))
            }
            _ => Ok(()),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn block(&self, r: usize, k: usize) -> Option<&Block<S>> {
        self.blocks.get(&(r, k))
    }

    /// All `(m+1)(2m+1)` blocks, including empty ones, ordered by `(r, k)`.
    pub fn blocks(&self) -> impl Iterator<Item = &Block<S>> {
        self.blocks.values()
    }

    pub fn nonzero_blocks(&self) -> impl Iterator<Item = &Block<S>> {
        self.blocks.values().filter(|b| b.dim > 0)
    }

    pub fn block_dimension(&self, r: usize, k: usize) -> Result<usize> {
        if r > self.m || k > 2 * self.m {
            return Err(Error::Domain(format!(
                "block (r={r}, k={k}) outside 0..={} × 0..={}",
                self.m,
                2 * self.m
            )));
        }
        Ok(self.blocks[&(r, k)].dim)
    }

    pub fn total_dimension(&self) -> usize {
        self.blocks.values().map(|b| b.dim).sum()
    }

    /// Spectral projector of `Ω` onto `S_r`.
    pub fn kraines_projector(&self, r: usize) -> &DenseMatrix<S> {
        self.kraines.projector_at(r)
    }

    /// Spectral projector of `Ω₁` onto `S^k`.
    pub fn kaehler_projector(&self, k: usize) -> &DenseMatrix<S> {
        self.kaehler.projector_at(k)
    }

    pub fn kraines_family(&self) -> &SpectralFamily<S> {
        &self.kraines
    }

    pub fn kaehler_family(&self) -> &SpectralFamily<S> {
        &self.kaehler
    }

    /// Sum of the `Ω`-projectors `P_{r'}` with `r'` outside `allowed`.
    pub fn kraines_complement(&self, allowed: &[usize]) -> DenseMatrix<S> {
        let d = self.kraines.projector_at(0).rows();
        sum_matrices(
            d,
            d,
            (0..=self.m)
                .filter(|r| !allowed.contains(r))
                .map(|r| self.kraines.projector_at(r).clone()),
        )
    }

    /// Sum of the `Ω₁`-projectors `P^{k'}` with `k'` outside `allowed`.
    pub fn kaehler_complement(&self, allowed: &[usize]) -> DenseMatrix<S> {
        let d = self.kaehler.projector_at(0).rows();
        sum_matrices(
            d,
            d,
            (0..=2 * self.m)
                .filter(|k| !allowed.contains(k))
                .map(|k| self.kaehler.projector_at(k).clone()),
        )
    }
}

fn neighbours(i: usize) -> Vec<usize> {
    let mut v = vec![i + 1];
    if i > 0 {
        v.push(i - 1);
    }
    v
}

/// Clifford multiplication by any `e_i` maps `S_r` into `S_{r−1} ⊕ S_{r+1}`
/// and `S^k` into `S^{k−1} ⊕ S^{k+1}`. Checked on every nonzero block as
/// `P_{r'} γ_i P_{r,k} = 0` for `|r' − r| ≠ 1`, and likewise for `k`.
pub fn check_neighbor_mapping<S: Scalar>(
    model: &CliffordModel<S>,
    dec: &JointDecomposition<S>,
    by_r: &mut ResidualCheck,
    by_k: &mut ResidualCheck,
) {
    for block in dec.nonzero_blocks() {
        let r_out = dec.kraines_complement(&neighbours(block.r));
        let k_out = dec.kaehler_complement(&neighbours(block.k));
        for (i, g) in model.gammas().iter().enumerate() {
            let image = g * &block.projector;
            by_r.matrix(
                format_args!("γ{} on ({},{})", i + 1, block.r, block.k),
                &(&r_out * &image),
            );
            by_k.matrix(
                format_args!("γ{} on ({},{})", i + 1, block.k, block.k),
                &(&k_out * &image),
            );
        }
    }
}

/// Every nonzero block has `k = m − r + 2s` with `s ∈ 0..=r`, `Ω₁` acting as
/// `i(2r − 4s)`, and `O₁ = (i/2)Ω₁` acting as the weight `2s − r`.
pub fn check_weight_consistency<S: Scalar>(
    dec: &JointDecomposition<S>,
    ops: &KaehlerOperators<S>,
    check: &mut ResidualCheck,
) {
    let o1 = ops.sl2_generator(0);
    for b in dec.nonzero_blocks() {
        let Some(s) = lattice_level(dec.m(), b.r, b.k) else {
            check.fail(format!("block ({},{}) violates the lattice rule", b.r, b.k));
            continue;
        };
        let (r, s_i) = (b.r as i64, s as i64);
        if kaehler_eigenvalue_im(dec.m(), b.k) != 2 * r - 4 * s_i {
            check.fail(format!("block ({},{}) Ω1 eigenvalue mismatch", b.r, b.k));
        }
        let p = &b.projector;
        check.equal(
            format_args!("Ω1 = i(2r−4s) on ({},{})", b.r, b.k),
            &(ops.omega(0) * p),
            &p.scale(&S::imag_unit().scale_int(2 * r - 4 * s_i)),
        );
        check.equal(
            format_args!("O1 = 2s−r on ({},{})", b.r, b.k),
            &(&o1 * p),
            &p.scale(&S::from_int(2 * s_i - r)),
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_clifford_model, ResourceCap};
    use crate::quaternionic::build_standard_triple;
    use crate::scalar::ExactScalar;

    fn dec(
        m: usize,
    ) -> (
        CliffordModel<ExactScalar>,
        KaehlerOperators<ExactScalar>,
        JointDecomposition<ExactScalar>,
    ) {
        let model = build_clifford_model(m, ResourceCap::default()).unwrap();
        let ops = KaehlerOperators::build(&model, &build_standard_triple(&model));
        let d = decompose(&model, &ops, 0.0).unwrap();
        (model, ops, d)
    }

    #[test]
    fn lattice_rule() {
        assert!(lattice_allows(1, 0, 1));
        assert!(lattice_allows(1, 1, 0));
        assert!(lattice_allows(1, 1, 2));
        assert!(!lattice_allows(1, 0, 0));
        assert!(!lattice_allows(1, 1, 1));
        assert!(!lattice_allows(2, 1, 2));
        assert_eq!(lattice_level(3, 2, 5), Some(2));
        assert_eq!(lattice_level(3, 2, 7), None);
    }

    #[test]
    fn m1_blocks() {
        let (_, _, d) = dec(1);
        let nonzero: Vec<(usize, usize, usize)> =
            d.nonzero_blocks().map(|b| (b.r, b.k, b.dim)).collect();
        assert_eq!(nonzero, vec![(0, 1, 2), (1, 0, 1), (1, 2, 1)]);
        assert_eq!(d.total_dimension(), 4);
        assert_eq!(
            d.kraines_family().occurring(0.0),
            vec![ExactScalar::from_int(6), ExactScalar::from_int(-6)]
        );
    }

    #[test]
    fn m2_parity_and_dimensions() {
        let (_, _, d) = dec(2);
        assert!(d.block_dimension(1, 1).unwrap() > 0);
        assert!(d.block_dimension(1, 3).unwrap() > 0);
        for b in d.blocks() {
            if (b.k + b.r + 2 - 2) % 2 == 1 {
                assert_eq!(b.dim, 0, "({},{})", b.r, b.k);
            }
        }
        assert_eq!(d.total_dimension(), 16);
        assert_eq!(d.block_dimension(0, 1).unwrap(), 0);
        assert!(d.block_dimension(3, 0).is_err());
        assert!(d.block_dimension(0, 5).is_err());
    }

    #[test]
    fn neighbor_mapping_and_weights() {
        for m in 1..=2 {
            let (model, ops, d) = dec(m);
            let mut by_r = ResidualCheck::new::<ExactScalar>(0.0);
            let mut by_k = ResidualCheck::new::<ExactScalar>(0.0);
            check_neighbor_mapping(&model, &d, &mut by_r, &mut by_k);
            assert!(by_r.is_ok() && by_k.is_ok());
            let mut w = ResidualCheck::new::<ExactScalar>(0.0);
            check_weight_consistency(&d, &ops, &mut w);
            assert!(w.is_ok(), "{:?}", w.status());
        }
    }

    #[test]
    fn corrupted_model_fails_decomposition() {
        let model = build_clifford_model::<ExactScalar>(1, ResourceCap::default())
            .unwrap()
            .with_corrupted_gamma(0)
            .unwrap();
        let ops = KaehlerOperators::build(&model, &build_standard_triple(&model));
        assert!(matches!(
            decompose(&model, &ops, 0.0),
            Err(Error::Spectrum { .. })
        ));
    }
}
