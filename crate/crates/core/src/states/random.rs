//! Seeded samplers: Haar pure states, induced mixed states, Haar unitaries
//! via QR of Ginibre matrices, and random rank-1 POVMs from Haar isometries.
//!
//! Every sampler is a pure function of (arguments, seed); distinct samplers
//! draw from distinct named streams.

use super::MultipartiteState;
use crate::error::{Error, Result};
use crate::linalg::{norm, partial_trace, outer, CMatrix, DimList, C64};
use crate::rng::{complex_gaussian, stream, StreamKind};
use rand::Rng;

/// Haar-random pure state: normalized complex Gaussian vector.
pub fn random_pure(dims: &DimList, seed: u64) -> Result<MultipartiteState> {
    let mut rng = stream(seed, StreamKind::PureState, 0);
    let mut v: Vec<C64> = (0..dims.total()).map(|_| complex_gaussian(&mut rng)).collect();
    let n = norm(&v);
    for z in &mut v {
        *z /= n;
    }
    MultipartiteState::pure(v, dims.clone())
}

/// Rank-r mixed state: partial trace of a Haar pure state with a rank-dim
/// ancilla.
pub fn random_mixed(dims: &DimList, rank: usize, seed: u64) -> Result<MultipartiteState> {
    let total = dims.total();
    if rank == 0 || rank > total {
        return Err(Error::InvalidArg(format!(
            "rank {rank} out of range for dimension {total}"
        )));
    }
    let mut rng = stream(seed, StreamKind::MixedState, 0);
    let mut v: Vec<C64> = (0..total * rank).map(|_| complex_gaussian(&mut rng)).collect();
    let n = norm(&v);
    for z in &mut v {
        *z /= n;
    }
    let ext = dims.with_appended(rank);
    let keep: Vec<usize> = (0..dims.len()).collect();
    let rho = partial_trace(&outer(&v, &v), &ext, &keep)?;
    MultipartiteState::mixed(rho, dims.clone())
}

use crate::linalg::orthonormalize_columns as mgs_columns;

fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unitary: QR of a Ginibre matrix with the R-diagonal phase
/// convention fixed.
pub fn random_unitary(d: usize, seed: u64) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::InvalidArg("dimension 0".into()));
    }
    let mut rng = stream(seed, StreamKind::Unitary, 0);
    Ok(mgs_columns(&ginibre(d, d, &mut rng)))
}

/// Random n-outcome rank-1 POVM on dimension d: rows of a Haar n×d isometry.
pub fn random_povm(d: usize, n: usize, seed: u64) -> Result<super::Povm> {
    if n < d {
        return Err(Error::InvalidArg(format!(
            "rank-1 POVM needs at least d={d} outcomes, got {n}"
        )));
    }
    let mut rng = stream(seed, StreamKind::Povm, 0);
    let w = mgs_columns(&ginibre(n, d, &mut rng));
    // |m_x⟩[k] = conj(W[x,k]) makes Σ_x |m_x⟩⟨m_x| = (W†W)ᵀ = I
    let vectors: Vec<Vec<C64>> = (0..n)
        .map(|x| (0..d).map(|k| w[(x, k)].conj()).collect())
        .collect();
    super::Povm::from_vectors(vectors)
}

/// Mixture of k Haar product pure states on a bipartite system; separable by
/// construction with rank ≤ k. Weights are uniform Dirichlet-free splits
/// drawn from the same stream.
pub fn random_product_mixture(
    dims: &DimList,
    k: usize,
    seed: u64,
) -> Result<MultipartiteState> {
    if dims.len() != 2 {
        return Err(Error::DimMismatch("product mixture needs two subsystems".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArg("k must be positive".into()));
    }
    let mut rng = stream(seed, StreamKind::MixedState, 1);
    let (da, db) = (dims.dim(0), dims.dim(1));
    let mut weights: Vec<f64> = (0..k).map(|_| rng.gen::<f64>().max(1e-6)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let n = dims.total();
    let mut rho = CMatrix::zeros(n, n);
    for &w in &weights {
        let mut a: Vec<C64> = (0..da).map(|_| complex_gaussian(&mut rng)).collect();
        let mut b: Vec<C64> = (0..db).map(|_| complex_gaussian(&mut rng)).collect();
        let (na, nb) = (norm(&a), norm(&b));
        a.iter_mut().for_each(|z| *z /= na);
        b.iter_mut().for_each(|z| *z /= nb);
        let ab = crate::linalg::tensor_vec(&a, &b);
        rho = rho.add(&outer(&ab, &ab).scale_re(w));
    }
    MultipartiteState::mixed(rho, dims.clone())
}
