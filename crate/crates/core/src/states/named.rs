//! Named state and operator constructions: GHZ/W families, the rank-three
//! separable example state, Fourier bases, generalized Pauli operators, the
//! dephasing channels built from them, and the four-partite Ω state used by
//! the mutual-information upper bound.

use super::{MultipartiteState, Povm};
use crate::error::{Error, Result};
use crate::linalg::{outer, partial_trace, CMatrix, DimList, C64, ONE, ZERO};
use std::f64::consts::PI;

/// (|0…0⟩ + |1…1⟩)/√2 on n qubits.
pub fn ghz(n: usize) -> Result<MultipartiteState> {
    if n < 2 {
        return Err(Error::InvalidArg("ghz needs n >= 2".to_string()));
    }
    let dims = DimList::new(vec![2; n])?;
    let total = dims.total();
    let mut v = vec![ZERO; total];
    let s = C64::new(1.0 / 2f64.sqrt(), 0.0);
    v[0] = s;
    v[total - 1] = s;
    MultipartiteState::pure(v, dims)
}

/// (|0…01⟩ + |0…10⟩ + … + |10…0⟩)/√n on n qubits.
pub fn w_state(n: usize) -> Result<MultipartiteState> {
    if n < 2 {
        return Err(Error::InvalidArg("w needs n >= 2".to_string()));
    }
    let dims = DimList::new(vec![2; n])?;
    let mut v = vec![ZERO; dims.total()];
    let s = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    for k in 0..n {
        v[1 << k] = s;
    }
    MultipartiteState::pure(v, dims)
}

/// |Φ+⟩ = GHZ(2).
pub fn bell() -> MultipartiteState {
    ghz(2).expect("bell state")
}

/// Maximally mixed state I/d on the given subsystem dimensions.
pub fn max_mixed(dims: DimList) -> MultipartiteState {
    let n = dims.total();
    let rho = CMatrix::identity(n).scale_re(1.0 / n as f64);
    MultipartiteState::mixed(rho, dims).expect("maximally mixed state")
}

/// The 2⊗2⊗3 state (|x⟩_AC|0⟩_B + |y⟩_AC|1⟩_B)/√2 with
/// |x⟩ = (|02⟩+√2|10⟩)/√3 and |y⟩ = (|12⟩+√2|01⟩)/√3, ordered A,B,C.
pub fn remark1_state() -> MultipartiteState {
    let dims = DimList::new(vec![2, 2, 3]).expect("dims");
    let mut v = vec![ZERO; 12];
    let r3 = 3f64.sqrt();
    let r6 = 6f64.sqrt();
    // (a,b,c) -> 6a + 3b + c
    v[2] = C64::new(1.0 / r6, 0.0); // |0,0,2| from |x⟩|0⟩
    v[6] = C64::new(2f64.sqrt() / r6, 0.0); // |1,0,0|
    v[11] = C64::new(1.0 / r6, 0.0); // |1,1,2| from |y⟩|1⟩
    v[4] = C64::new(2f64.sqrt() / r6, 0.0); // |0,1,1|
    let _ = r3;
    MultipartiteState::pure(v, dims).expect("remark1 state")
}

/// |ẽ_j⟩ = (1/√d) Σ_k ω^{jk} |e_k⟩ for an orthonormal reference basis.
pub fn fourier_basis_in(basis: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let d = basis.len();
    let dim = basis[0].len();
    let scale = 1.0 / (d as f64).sqrt();
    (0..d)
        .map(|j| {
            let mut v = vec![ZERO; dim];
            for (k, e) in basis.iter().enumerate() {
                let angle = 2.0 * PI * (j * k) as f64 / d as f64;
                let w = C64::new(angle.cos(), angle.sin()) * scale;
                for (slot, &x) in v.iter_mut().zip(e) {
                    *slot += w * x;
                }
            }
            v
        })
        .collect()
}

/// Fourier basis over the computational basis of dimension d.
pub fn fourier_basis(d: usize) -> Vec<Vec<C64>> {
    let comp: Vec<Vec<C64>> = (0..d)
        .map(|k| {
            let mut v = vec![ZERO; d];
            v[k] = ONE;
            v
        })
        .collect();
    fourier_basis_in(&comp)
}

/// Z = Σ_j ω^j |e_j⟩⟨e_j| in the computational basis.
pub fn pauli_z(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let angle = 2.0 * PI * i as f64 / d as f64;
            C64::new(angle.cos(), angle.sin())
        } else {
            ZERO
        }
    })
}

/// X = Σ_j |e_{j+1 mod d}⟩⟨e_j| in the computational basis.
pub fn pauli_x(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| if i == (j + 1) % d { ONE } else { ZERO })
}

/// Dephasing channel in the given orthonormal basis: Σ_i P_i σ P_i.
pub fn channel_m0(sigma: &CMatrix, basis: &[Vec<C64>]) -> CMatrix {
    let d = sigma.rows();
    let mut out = CMatrix::zeros(d, d);
    for e in basis {
        let p = outer(e, e);
        out = out.add(&p.mul(sigma).mul(&p));
    }
    out
}

/// Dephasing channel in the Fourier conjugate of the given basis.
pub fn channel_m1(sigma: &CMatrix, basis: &[Vec<C64>]) -> CMatrix {
    channel_m0(sigma, &fourier_basis_in(basis))
}

/// An ensemble with possibly mixed members {p_i, ρ_i}.
#[derive(Clone, Debug)]
pub struct WeightedDensities {
    pub weights: Vec<f64>,
    pub members: Vec<CMatrix>,
}

/// The ensembles induced on A by dephasing B of ρ_AB in the eigenbasis of
/// ρ_B (E0) and in its Fourier conjugate (E1): E0 = {λ_i, σ_A^i},
/// E1 = {1/d_B, τ_A^j}.  Zero-probability members of E0 are dropped.
pub fn induced_ensembles(
    rho_ab: &CMatrix,
    dims: &DimList,
) -> Result<(WeightedDensities, WeightedDensities)> {
    if dims.len() != 2 {
        return Err(Error::DimMismatch("induced_ensembles needs a bipartite state".into()));
    }
    let d_b = dims.dim(1);
    let rho_b = partial_trace(rho_ab, dims, &[1])?;
    let eig = crate::linalg::eig_hermitian(&rho_b)?;
    let eigbasis: Vec<Vec<C64>> = (0..d_b).map(|k| eig.vectors.col(k)).collect();
    let st = MultipartiteState::mixed(rho_ab.clone(), dims.clone())?;

    let m0 = super::measure_on_subsystem(&st, &Povm::projective(&eigbasis)?, 1)?;
    let e0 = WeightedDensities {
        weights: m0.probs.clone(),
        members: m0.post_states.clone(),
    };
    let m1 = super::measure_on_subsystem(
        &st,
        &Povm::projective(&fourier_basis_in(&eigbasis))?,
        1,
    )?;
    let e1 = WeightedDensities {
        weights: m1.probs.clone(),
        members: m1.post_states.clone(),
    };
    Ok((e0, e1))
}

/// The rank-1 measurement {|e_i⟩⟨e_i|/2, |ẽ_j⟩⟨ẽ_j|/2} built from the
/// eigenbasis of ρ_B and its Fourier conjugate.
pub fn thm1_mixed_povm(rho_b: &CMatrix) -> Result<Povm> {
    let d = rho_b.rows();
    let eig = crate::linalg::eig_hermitian(rho_b)?;
    let eigbasis: Vec<Vec<C64>> = (0..d).map(|k| eig.vectors.col(k)).collect();
    let fourier = fourier_basis_in(&eigbasis);
    let half = C64::new(1.0 / 2f64.sqrt(), 0.0);
    let mut vectors = Vec::with_capacity(2 * d);
    for e in eigbasis.iter().chain(fourier.iter()) {
        vectors.push(e.iter().map(|z| z * half).collect());
    }
    Povm::from_vectors(vectors)
}

/// The four-partite state Ω_XYAB stored block-diagonally: the classical X,Y
/// registers are indexed, each block is
/// ω_xy = (I ⊗ X^x Z^y) ρ_AB (I ⊗ Z^{-y} X^{-x}) with weight 1/d_B².
#[derive(Clone, Debug)]
pub struct Omega {
    d_b: usize,
    dims_ab: DimList,
    /// blocks[x * d_b + y]
    blocks: Vec<CMatrix>,
}

/// Builds Ω_XYAB from a bipartite ρ_AB. The Pauli operators act in the
/// eigenbasis of ρ_B, matching the channel construction.
pub fn omega_state(rho_ab: &CMatrix, dims: &DimList) -> Result<Omega> {
    if dims.len() != 2 || rho_ab.rows() != dims.total() {
        return Err(Error::DimMismatch("omega_state needs a bipartite state".into()));
    }
    let d_a = dims.dim(0);
    let d_b = dims.dim(1);
    let rho_b = partial_trace(rho_ab, dims, &[1])?;
    let eig = crate::linalg::eig_hermitian(&rho_b)?;
    // Paulis in the eigenbasis of rho_B: V Z V†, V X V†
    let v = &eig.vectors;
    let z_op = v.mul(&pauli_z(d_b)).mul(&v.adjoint());
    let x_op = v.mul(&pauli_x(d_b)).mul(&v.adjoint());
    let id_a = CMatrix::identity(d_a);

    let mut blocks = Vec::with_capacity(d_b * d_b);
    let mut x_pow = CMatrix::identity(d_b);
    for _x in 0..d_b {
        let mut zy = CMatrix::identity(d_b);
        for _y in 0..d_b {
            let u = crate::linalg::tensor(&id_a, &x_pow.mul(&zy));
            blocks.push(u.mul(rho_ab).mul(&u.adjoint()));
            zy = z_op.mul(&zy);
        }
        x_pow = x_op.mul(&x_pow);
    }
    Ok(Omega {
        d_b,
        dims_ab: dims.clone(),
        blocks,
    })
}

impl Omega {
    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn block(&self, x: usize, y: usize) -> &CMatrix {
        &self.blocks[x * self.d_b + y]
    }

    pub fn dims_ab(&self) -> &DimList {
        &self.dims_ab
    }

    /// Ω_AB = (1/d²) Σ_xy ω_xy; equals ρ_A ⊗ I/d_B.
    pub fn marginal_ab(&self) -> CMatrix {
        let n = self.dims_ab.total();
        let mut out = CMatrix::zeros(n, n);
        for b in &self.blocks {
            out = out.add(b);
        }
        out.scale_re(1.0 / (self.d_b * self.d_b) as f64)
    }

    /// B_x = (1/d) Σ_y ω_xy, the AB block of Ω_XAB at X = x.
    pub fn xab_block(&self, x: usize) -> CMatrix {
        let n = self.dims_ab.total();
        let mut out = CMatrix::zeros(n, n);
        for y in 0..self.d_b {
            out = out.add(self.block(x, y));
        }
        out.scale_re(1.0 / self.d_b as f64)
    }

    /// C_y = (1/d) Σ_x ω_xy, the AB block of Ω_YAB at Y = y.
    pub fn yab_block(&self, y: usize) -> CMatrix {
        let n = self.dims_ab.total();
        let mut out = CMatrix::zeros(n, n);
        for x in 0..self.d_b {
            out = out.add(self.block(x, y));
        }
        out.scale_re(1.0 / self.d_b as f64)
    }

    /// The dense matrix on X⊗Y⊗A⊗B; intended for small d_B cross-checks.
    pub fn to_dense(&self) -> (CMatrix, DimList) {
        let d = self.d_b;
        let nab = self.dims_ab.total();
        let n = d * d * nab;
        let mut out = CMatrix::zeros(n, n);
        let w = 1.0 / (d * d) as f64;
        for x in 0..d {
            for y in 0..d {
                let blk = self.block(x, y);
                let base = (x * d + y) * nab;
                for i in 0..nab {
                    for j in 0..nab {
                        out[(base + i, base + j)] = blk[(i, j)] * w;
                    }
                }
            }
        }
        let mut dims = vec![d, d];
        dims.extend_from_slice(self.dims_ab.as_slice());
        (out, DimList::new(dims).expect("omega dims"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_hermitian, inner, tensor};
    use crate::states::random::random_mixed;

    #[test]
    fn ghz_marginal_and_bell() {
        let g = ghz(3).unwrap();
        let ra = g.reduced_density(&[0]).unwrap();
        assert!(ra.sub(&CMatrix::diag(&[0.5, 0.5])).max_abs() < 1e-12);
        let b = bell();
        let g2 = ghz(2).unwrap();
        assert_eq!(b.vector().unwrap(), g2.vector().unwrap());
        assert!(ghz(1).is_err());
    }

    #[test]
    fn w3_marginal() {
        let w = w_state(3).unwrap();
        let ra = w.reduced_density(&[0]).unwrap();
        assert!(ra.sub(&CMatrix::diag(&[2.0 / 3.0, 1.0 / 3.0])).max_abs() < 1e-12);
    }

    #[test]
    fn remark1_structure() {
        let st = remark1_state();
        // <x|y> = 0 translates into orthogonality of the two B-conditional halves
        let psi = st.vector().unwrap();
        let dims = st.dims();
        let mut xv = vec![ZERO; 6];
        let mut yv = vec![ZERO; 6];
        for a in 0..2 {
            for c in 0..3 {
                xv[a * 3 + c] = psi[dims.ravel(&[a, 0, c])] * C64::new(2f64.sqrt(), 0.0);
                yv[a * 3 + c] = psi[dims.ravel(&[a, 1, c])] * C64::new(2f64.sqrt(), 0.0);
            }
        }
        assert!(inner(&xv, &yv).norm() < 1e-12);
        assert!((crate::linalg::norm(&xv) - 1.0).abs() < 1e-12);
        // tr_BC = I/2
        let ra = st.reduced_density(&[0]).unwrap();
        assert!(ra.sub(&CMatrix::diag(&[0.5, 0.5])).max_abs() < 1e-12);
        // rank of rho_AB is 3
        let rab = st.reduced_density(&[0, 1]).unwrap();
        let eig = eig_hermitian(&rab).unwrap();
        assert_eq!(eig.rank(1e-10), 3);
    }

    #[test]
    fn fourier_basis_properties() {
        // d=2 is the Hadamard pair
        let f2 = fourier_basis(2);
        let s = 1.0 / 2f64.sqrt();
        assert!((f2[0][0].re - s).abs() < 1e-15 && (f2[0][1].re - s).abs() < 1e-15);
        assert!((f2[1][0].re - s).abs() < 1e-15 && (f2[1][1].re + s).abs() < 1e-15);
        // d=3: Gram matrix is the identity
        let f3 = fourier_basis(3);
        for j in 0..3 {
            for k in 0..3 {
                let g = inner(&f3[j], &f3[k]);
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((g - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        // mutually unbiased against the computational basis
        for v in &f3 {
            for k in 0..3 {
                assert!((v[k].norm_sqr() - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pauli_weyl_relations() {
        // d=2 gives the standard Pauli matrices
        let z2 = pauli_z(2);
        assert!((z2[(0, 0)] - ONE).norm() < 1e-15);
        assert!((z2[(1, 1)] + ONE).norm() < 1e-15);
        let x2 = pauli_x(2);
        assert!((x2[(0, 1)] - ONE).norm() < 1e-15 && (x2[(1, 0)] - ONE).norm() < 1e-15);
        // Weyl commutation for d=3: ZX = ω XZ
        // (ZX|e_j> = ω^{j+1}|e_{j+1}>, XZ|e_j> = ω^j|e_{j+1}>)
        let d = 3;
        let (x, z) = (pauli_x(d), pauli_z(d));
        let angle = 2.0 * PI / d as f64;
        let w = C64::new(angle.cos(), angle.sin());
        let lhs = z.mul(&x);
        let rhs = x.mul(&z).scale(w);
        assert!(lhs.sub(&rhs).max_abs() < 1e-12);
        // X is diagonal in the Fourier basis with entries ω^{-j}
        let f = fourier_basis(d);
        for (j, v) in f.iter().enumerate() {
            let xv = x.matvec(v);
            let phase = inner(v, &xv);
            let expect = C64::new(
                (-(j as f64) * angle).cos(),
                (-(j as f64) * angle).sin(),
            );
            assert!((phase - expect).norm() < 1e-12, "j={j}");
        }
        // unitarity
        for m in [&x, &z] {
            assert!(m.mul(&m.adjoint()).sub(&CMatrix::identity(d)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn channels_fix_and_mix() {
        for d in [2usize, 3] {
            let st = random_mixed(&DimList::new(vec![d]).unwrap(), d, 31 + d as u64).unwrap();
            let rho = st.density();
            let eig = eig_hermitian(&rho).unwrap();
            let basis: Vec<Vec<C64>> = (0..d).map(|k| eig.vectors.col(k)).collect();
            // M0 fixes rho, M1 sends it to I/d
            let m0 = channel_m0(&rho, &basis);
            assert!(m0.sub(&rho).max_abs() < 1e-10);
            let m1 = channel_m1(&rho, &basis);
            assert!(
                m1.sub(&CMatrix::identity(d).scale_re(1.0 / d as f64)).max_abs() < 1e-10
            );
            // twirl forms agree with the projector forms on arbitrary input
            let sig_state = random_mixed(&DimList::new(vec![d]).unwrap(), d, 77).unwrap();
            let sigma = sig_state.density();
            let z = {
                let v = &eig.vectors;
                v.mul(&pauli_z(d)).mul(&v.adjoint())
            };
            let x = {
                let v = &eig.vectors;
                v.mul(&pauli_x(d)).mul(&v.adjoint())
            };
            let mut tw0 = CMatrix::zeros(d, d);
            let mut zb = CMatrix::identity(d);
            for _ in 0..d {
                tw0 = tw0.add(&zb.mul(&sigma).mul(&zb.adjoint()));
                zb = z.mul(&zb);
            }
            tw0 = tw0.scale_re(1.0 / d as f64);
            assert!(tw0.sub(&channel_m0(&sigma, &basis)).max_abs() < 1e-10);
            let mut tw1 = CMatrix::zeros(d, d);
            let mut xa = CMatrix::identity(d);
            for _ in 0..d {
                tw1 = tw1.add(&xa.mul(&sigma).mul(&xa.adjoint()));
                xa = x.mul(&xa);
            }
            tw1 = tw1.scale_re(1.0 / d as f64);
            assert!(tw1.sub(&channel_m1(&sigma, &basis)).max_abs() < 1e-10);
            // composing fully mixes
            let both = channel_m1(&channel_m0(&sigma, &basis), &basis);
            assert!(
                both.sub(&CMatrix::identity(d).scale_re(1.0 / d as f64)).max_abs() < 1e-10
            );
        }
    }

    #[test]
    fn omega_marginal_is_product() {
        let dims = DimList::new(vec![2, 3]).unwrap();
        let st = random_mixed(&dims, 4, 5).unwrap();
        let rho = st.density();
        let om = omega_state(&rho, &dims).unwrap();
        let rho_a = partial_trace(&rho, &dims, &[0]).unwrap();
        let expected = tensor(&rho_a, &CMatrix::identity(3).scale_re(1.0 / 3.0));
        assert!(om.marginal_ab().sub(&expected).max_abs() < 1e-10);
    }

    #[test]
    fn thm1_povm_is_valid_rank1() {
        let dims = DimList::new(vec![2, 2]).unwrap();
        let st = random_mixed(&dims, 3, 8).unwrap();
        let rho_b = st.reduced_density(&[1]).unwrap();
        let povm = thm1_mixed_povm(&rho_b).unwrap();
        assert_eq!(povm.len(), 4);
        assert!(povm.is_rank1());
    }
}
