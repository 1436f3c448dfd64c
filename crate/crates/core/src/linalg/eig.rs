//! Cyclic Jacobi eigensolver for complex Hermitian matrices, plus the
//! spectral helpers built on it (PSD square root, purification).
//!
//! The sweep order is fixed (row-major over the upper triangle) so runs are
//! reproducible bit for bit.

use super::{CMatrix, DimList, C64, EIG_CLIP, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition: `values` ascending, `vectors` unitary with
/// eigenvectors as columns, so M = V diag(values) V†.
#[derive(Clone, Debug)]
pub struct EigH {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigH {
    /// V diag(f(λ)) V†
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let flam = f(lam);
            if flam == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)];
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj() * flam;
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| x)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.values.iter().filter(|&&x| x > tol).count()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Eigenvalues in [-1e-12, 0) are clipped to 0. Errors on non-Hermitian
/// input (tolerance 1e-10 on ‖M − M†‖∞).
pub fn eig_hermitian(m: &CMatrix) -> Result<EigH> {
    m.check_hermitian()?;
    let n = m.rows();
    if n == 0 {
        return Err(Error::InvalidArg("empty matrix".into()));
    }
    // Work on the Hermitian average to kill the sub-tolerance asymmetry.
    let mut a = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);

    let scale = a.max_abs().max(1e-300);
    let stop = (1e-15 * scale) * (1e-15 * scale) * (n * n) as f64;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let ab = apq.norm();
                if ab <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / ab; // e^{iθ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (app - aqq) / (2.0 * ab);
                // small-magnitude root of t² - 2τt - 1 = 0
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = I except G[p,p]=c, G[p,q]=s·e^{iθ}, G[q,p]=-s·e^{-iθ}, G[q,q]=c
                let gpq = phase * s;
                let gqp = -phase.conj() * s;
                // A ← G† A G : columns p,q then rows p,q
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * gqp;
                    a[(i, q)] = aip * gpq + aiq * c;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * gqp.conj();
                    a[(q, j)] = apj * gpq.conj() + aqj * c;
                }
                // clean the rotated pivot
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                let app_new = a[(p, p)];
                let aqq_new = a[(q, q)];
                a[(p, p)] = C64::new(app_new.re, 0.0);
                a[(q, q)] = C64::new(aqq_new.re, 0.0);
                // V ← V G
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * gqp;
                    v[(i, q)] = vip * gpq + viq * c;
                }
            }
        }
    }
    if !converged {
        // final re-check after the last sweep
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off > stop {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));
    let values: Vec<f64> = pairs
        .iter()
        .map(|&(lam, _)| if (-EIG_CLIP..0.0).contains(&lam) { 0.0 } else { lam })
        .collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, pairs[k].1)]);
    Ok(EigH { values, vectors })
}

/// PSD square root. Errors if an eigenvalue falls below -1e-10.
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let eig = eig_hermitian(m)?;
    if let Some(&min) = eig
        .values
        .iter()
        .find(|&&x| x < -1e-10)
    {
        return Err(Error::NotPsd(min));
    }
    Ok(eig.apply(|x| x.max(0.0).sqrt()))
}

/// Purifies a density matrix: returns the pure vector on original ⊗ ancilla
/// together with the extended dimension list. The ancilla dimension equals
/// the rank of `rho` (eigenvalues above 1e-12).
pub fn purify(rho: &CMatrix, dims: &DimList) -> Result<(Vec<C64>, DimList)> {
    if rho.rows() != dims.total() {
        return Err(Error::DimMismatch(format!(
            "matrix is {}x{} but dims total {}",
            rho.rows(),
            rho.cols(),
            dims.total()
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::BadTrace(tr.re));
    }
    let eig = eig_hermitian(rho)?;
    if let Some(&min) = eig.values.iter().find(|&&x| x < -1e-9) {
        return Err(Error::NotPsd(min));
    }
    let kept: Vec<(f64, usize)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &lam)| lam > 1e-12)
        .map(|(k, &lam)| (lam, k))
        .collect();
    let r = kept.len().max(1);
    let n = dims.total();
    let mut psi = vec![ZERO; n * r];
    for (slot, &(lam, k)) in kept.iter().enumerate() {
        let w = lam.sqrt();
        for i in 0..n {
            psi[i * r + slot] = eig.vectors[(i, k)] * w;
        }
    }
    Ok((psi, dims.with_appended(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{outer, partial_trace, tensor};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eig_diagonal() {
        let m = CMatrix::diag(&[3.0, 1.0, 2.0]);
        let eig = eig_hermitian(&m).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_pauli_x() {
        let x = CMatrix::from_rows(vec![vec![ZERO, c(1.0, 0.0)], vec![c(1.0, 0.0), ZERO]]);
        let eig = eig_hermitian(&x).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_w_state_marginal() {
        // explicit reduction of (|001>+|010>+|100>)/sqrt(3): rho_A = diag(2/3, 1/3)
        let s = 1.0 / 3f64.sqrt();
        let mut w = vec![ZERO; 8];
        w[1] = c(s, 0.0);
        w[2] = c(s, 0.0);
        w[4] = c(s, 0.0);
        let rho = outer(&w, &w);
        let dims = DimList::new(vec![2, 2, 2]).unwrap();
        let ra = partial_trace(&rho, &dims, &[0]).unwrap();
        let eig = eig_hermitian(&ra).unwrap();
        assert!((eig.values[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((eig.values[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn eig_reconstruction_random() {
        // deterministic pseudo-random Hermitian fill
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [2usize, 3, 5, 8, 13, 16] {
            let g = CMatrix::from_fn(n, n, |_, _| c(next(), next()));
            let h = g.add(&g.adjoint()).scale_re(0.5);
            let eig = eig_hermitian(&h).unwrap();
            let resid = eig.reconstruct().sub(&h).max_abs();
            assert!(resid < 1e-12, "n={n} resid={resid:e}");
            // unitarity of V
            let vv = eig.vectors.adjoint().mul(&eig.vectors);
            assert!(vv.sub(&CMatrix::identity(n)).max_abs() < 1e-12);
            // ascending order
            for k in 1..n {
                assert!(eig.values[k] >= eig.values[k - 1]);
            }
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_rows(vec![vec![ZERO, c(1.0, 0.0)], vec![ZERO, ZERO]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn sqrt_psd_diag() {
        let m = CMatrix::diag(&[4.0, 9.0]);
        let s = sqrt_psd(&m).unwrap();
        assert!(s.sub(&CMatrix::diag(&[2.0, 3.0])).max_abs() < 1e-12);
        let i = CMatrix::identity(3);
        assert!(sqrt_psd(&i).unwrap().sub(&i).max_abs() < 1e-14);
    }

    #[test]
    fn sqrt_psd_eigenbasis_oracle() {
        // rho = ((0.5,0.2),(0.2,0.5)): eigenvalues 0.7 on |+> and 0.3 on |->,
        // so sqrt = ((√.7+√.3)/2 on the diagonal, (√.7-√.3)/2 off it.
        let m = CMatrix::from_rows(vec![
            vec![c(0.5, 0.0), c(0.2, 0.0)],
            vec![c(0.2, 0.0), c(0.5, 0.0)],
        ]);
        let s = sqrt_psd(&m).unwrap();
        assert!(s.mul(&s).sub(&m).max_abs() < 1e-12);
        let d = (0.7f64.sqrt() + 0.3f64.sqrt()) / 2.0;
        let o = (0.7f64.sqrt() - 0.3f64.sqrt()) / 2.0;
        let expected =
            CMatrix::from_rows(vec![vec![c(d, 0.0), c(o, 0.0)], vec![c(o, 0.0), c(d, 0.0)]]);
        assert!(s.sub(&expected).max_abs() < 1e-12);
    }

    #[test]
    fn sqrt_psd_rejects_negative() {
        let m = CMatrix::diag(&[1.0, -0.5]);
        assert!(matches!(sqrt_psd(&m), Err(Error::NotPsd(_))));
    }

    #[test]
    fn purify_rank1() {
        let v = vec![c(0.6, 0.0), c(0.0, 0.8)];
        let rho = outer(&v, &v);
        let dims = DimList::new(vec![2]).unwrap();
        let (psi, pdims) = purify(&rho, &dims).unwrap();
        assert_eq!(pdims.as_slice(), &[2, 1]);
        let full = outer(&psi, &psi);
        let back = partial_trace(&full, &pdims, &[0]).unwrap();
        assert!(back.sub(&rho).max_abs() < 1e-12);
    }

    #[test]
    fn purify_maximally_mixed() {
        let rho = CMatrix::diag(&[0.5, 0.5]);
        let dims = DimList::new(vec![2]).unwrap();
        let (psi, pdims) = purify(&rho, &dims).unwrap();
        assert_eq!(pdims.as_slice(), &[2, 2]);
        // two-qubit state with maximally mixed marginal on both sides
        let full = outer(&psi, &psi);
        let anc = partial_trace(&full, &pdims, &[1]).unwrap();
        assert!(anc.sub(&CMatrix::diag(&[0.5, 0.5])).max_abs() < 1e-12);
    }

    #[test]
    fn purify_roundtrip_product() {
        let a = CMatrix::diag(&[0.25, 0.75]);
        let b = CMatrix::from_rows(vec![
            vec![c(0.5, 0.0), c(0.1, 0.2)],
            vec![c(0.1, -0.2), c(0.5, 0.0)],
        ]);
        let rho = tensor(&a, &b);
        let dims = DimList::new(vec![2, 2]).unwrap();
        let (psi, pdims) = purify(&rho, &dims).unwrap();
        let full = outer(&psi, &psi);
        let back = partial_trace(&full, &pdims, &[0, 1]).unwrap();
        assert!(back.sub(&rho).max_abs() < 1e-10);
    }

    #[test]
    fn purify_rejects_bad_trace() {
        let rho = CMatrix::diag(&[0.5, 0.6]);
        let dims = DimList::new(vec![2]).unwrap();
        assert!(matches!(purify(&rho, &dims), Err(Error::BadTrace(_))));
    }
}
