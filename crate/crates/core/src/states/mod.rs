//! State model: pure/mixed multipartite states, POVMs, pure-state ensembles,
//! measurements, and the JSON state-file schema shared with the CLI.

mod named;
mod random;

pub use named::{
    bell, channel_m0, channel_m1, fourier_basis, fourier_basis_in, ghz, induced_ensembles,
    max_mixed, omega_state, pauli_x, pauli_z, remark1_state, thm1_mixed_povm, w_state, Omega,
    WeightedDensities,
};
pub use random::{random_mixed, random_povm, random_product_mixture, random_pure, random_unitary};

use crate::error::{Error, Result};
use crate::linalg::{inner, norm, outer, partial_trace, permute_subsystems_vec, CMatrix, DimList, C64, ZERO};

/// Probability below which a measurement outcome is dropped (and recorded).
pub const PROB_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub enum StateData {
    Pure(Vec<C64>),
    Mixed(CMatrix),
}

/// A pure vector or density matrix together with its subsystem dimensions.
#[derive(Clone, Debug)]
pub struct MultipartiteState {
    data: StateData,
    dims: DimList,
    labels: Vec<String>,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let ch = (b'A' + (i % 26) as u8) as char;
            if i < 26 {
                ch.to_string()
            } else {
                format!("{}{}", ch, i / 26)
            }
        })
        .collect()
}

impl MultipartiteState {
    pub fn pure(vec: Vec<C64>, dims: DimList) -> Result<Self> {
        if vec.len() != dims.total() {
            return Err(Error::DimMismatch(format!(
                "vector length {} vs dims total {}",
                vec.len(),
                dims.total()
            )));
        }
        let n = norm(&vec);
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::BadNorm(n));
        }
        let labels = default_labels(dims.len());
        Ok(MultipartiteState {
            data: StateData::Pure(vec),
            dims,
            labels,
        })
    }

    pub fn mixed(mat: CMatrix, dims: DimList) -> Result<Self> {
        if mat.rows() != dims.total() || !mat.is_square() {
            return Err(Error::DimMismatch(format!(
                "matrix {}x{} vs dims total {}",
                mat.rows(),
                mat.cols(),
                dims.total()
            )));
        }
        mat.check_hermitian()?;
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::BadTrace(tr.re));
        }
        let eig = crate::linalg::eig_hermitian(&mat)?;
        if let Some(&min) = eig.values.iter().find(|&&x| x < -1e-9) {
            return Err(Error::NotPsd(min));
        }
        let labels = default_labels(dims.len());
        Ok(MultipartiteState {
            data: StateData::Mixed(mat),
            dims,
            labels,
        })
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.data, StateData::Pure(_))
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn data(&self) -> &StateData {
        &self.data
    }

    pub fn vector(&self) -> Option<&[C64]> {
        match &self.data {
            StateData::Pure(v) => Some(v),
            StateData::Mixed(_) => None,
        }
    }

    /// Density matrix (|ψ⟩⟨ψ| for pure states).
    pub fn density(&self) -> CMatrix {
        match &self.data {
            StateData::Pure(v) => outer(v, v),
            StateData::Mixed(m) => m.clone(),
        }
    }

    /// Reduced density matrix on `keep` (ascending original order).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<CMatrix> {
        partial_trace(&self.density(), &self.dims, keep)
    }

    /// Reduced state on `keep` as a mixed state.
    pub fn reduce(&self, keep: &[usize]) -> Result<MultipartiteState> {
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let rho = self.reduced_density(&keep_sorted)?;
        let dims = self.dims.select(&keep_sorted);
        let labels: Vec<String> = keep_sorted
            .iter()
            .map(|&s| self.labels[s].clone())
            .collect();
        let mut st = MultipartiteState::mixed(rho, dims)?;
        st.labels = labels;
        Ok(st)
    }

    /// Reorders subsystems: output subsystem k is input subsystem perm[k].
    pub fn permute(&self, perm: &[usize]) -> Result<MultipartiteState> {
        let labels: Vec<String> = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let mut st = match &self.data {
            StateData::Pure(v) => {
                let (nv, nd) = permute_subsystems_vec(v, &self.dims, perm)?;
                MultipartiteState::pure(nv, nd)?
            }
            StateData::Mixed(m) => {
                let (nm, nd) = crate::linalg::permute_subsystems(m, &self.dims, perm)?;
                MultipartiteState::mixed(nm, nd)?
            }
        };
        st.labels = labels;
        Ok(st)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dims.len());
        self.labels = labels;
        self
    }

    /// tr(ρ²)
    pub fn purity(&self) -> f64 {
        let rho = self.density();
        rho.frob_inner(&rho).re
    }
}

/// A POVM on a single subsystem: positive operators summing to identity.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<CMatrix>,
    rank1: bool,
}

impl Povm {
    /// Validates completeness (1e-9) and flags the rank-1 case.
    pub fn new(elements: Vec<CMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidArg("empty POVM".into()));
        }
        let d = elements[0].rows();
        let mut sum = CMatrix::zeros(d, d);
        for e in &elements {
            if e.rows() != d || !e.is_square() {
                return Err(Error::DimMismatch("POVM element shape".into()));
            }
            e.check_hermitian()?;
            sum = sum.add(e);
        }
        let defect = sum.sub(&CMatrix::identity(d)).max_abs();
        if defect > 1e-9 {
            return Err(Error::InvalidArg(format!(
                "POVM elements sum to identity only within {defect:.3e}"
            )));
        }
        let rank1 = elements.iter().all(|e| {
            match crate::linalg::eig_hermitian(e) {
                Ok(eig) => eig.values.iter().filter(|&&x| x > 1e-9).count() <= 1,
                Err(_) => false,
            }
        });
        Ok(Povm { elements, rank1 })
    }

    /// Rank-1 POVM from sub-normalized vectors: elements |m_x⟩⟨m_x|.
    pub fn from_vectors(vectors: Vec<Vec<C64>>) -> Result<Self> {
        let elements: Vec<CMatrix> = vectors.iter().map(|v| outer(v, v)).collect();
        let mut p = Povm::new(elements)?;
        p.rank1 = true;
        Ok(p)
    }

    /// Projective measurement onto an orthonormal basis.
    pub fn projective(basis: &[Vec<C64>]) -> Result<Self> {
        Povm::from_vectors(basis.to_vec())
    }

    pub fn computational(d: usize) -> Povm {
        let basis: Vec<Vec<C64>> = (0..d)
            .map(|k| {
                let mut v = vec![ZERO; d];
                v[k] = crate::linalg::ONE;
                v
            })
            .collect();
        Povm::projective(&basis).expect("computational basis is a POVM")
    }

    pub fn fourier(d: usize) -> Povm {
        Povm::projective(&fourier_basis_of(&Povm::computational(d).basis_vectors()))
            .expect("fourier basis is a POVM")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn is_rank1(&self) -> bool {
        self.rank1
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    /// Extracts |m_x⟩ with M_x = |m_x⟩⟨m_x| for a rank-1 POVM.
    pub fn vectors(&self) -> Result<Vec<Vec<C64>>> {
        if !self.rank1 {
            return Err(Error::InvalidArg("POVM is not rank-1".into()));
        }
        self.elements
            .iter()
            .map(|e| {
                let eig = crate::linalg::eig_hermitian(e)?;
                let k = eig.values.len() - 1;
                let lam = eig.values[k].max(0.0);
                Ok(eig.vectors.col(k).iter().map(|z| z * lam.sqrt()).collect())
            })
            .collect()
    }

    fn basis_vectors(&self) -> Vec<Vec<C64>> {
        self.elements
            .iter()
            .map(|e| {
                let eig = crate::linalg::eig_hermitian(e).expect("projector");
                eig.vectors.col(eig.values.len() - 1)
            })
            .collect()
    }

    /// Product POVM {M_x ⊗ N_y} ordered x-major.
    pub fn tensor(&self, other: &Povm) -> Povm {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for a in &self.elements {
            for b in &other.elements {
                elements.push(crate::linalg::tensor(a, b));
            }
        }
        Povm {
            elements,
            rank1: self.rank1 && other.rank1,
        }
    }
}

fn fourier_basis_of(basis: &[Vec<C64>]) -> Vec<Vec<C64>> {
    named::fourier_basis_in(basis)
}

/// Weighted list of pure states realizing a density matrix.
#[derive(Clone, Debug)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<Vec<C64>>,
    dims: DimList,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<Vec<C64>>, dims: DimList) -> Result<Self> {
        if weights.len() != states.len() || weights.is_empty() {
            return Err(Error::InvalidArg("ensemble shape mismatch".into()));
        }
        if weights.iter().any(|&p| p < -1e-12) {
            return Err(Error::InvalidArg("negative ensemble weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::BadTrace(total));
        }
        for s in &states {
            if s.len() != dims.total() {
                return Err(Error::DimMismatch("ensemble member length".into()));
            }
            let n = norm(s);
            if (n - 1.0).abs() > 1e-9 {
                return Err(Error::BadNorm(n));
            }
        }
        Ok(Ensemble {
            weights,
            states,
            dims,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[Vec<C64>] {
        &self.states
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn member(&self, i: usize) -> (f64, &[C64]) {
        (self.weights[i], &self.states[i])
    }

    /// Σ p_i |φ_i⟩⟨φ_i|
    pub fn average_density(&self) -> CMatrix {
        let n = self.dims.total();
        let mut rho = CMatrix::zeros(n, n);
        for (p, s) in self.weights.iter().zip(&self.states) {
            rho = rho.add(&outer(s, s).scale_re(*p));
        }
        rho
    }
}

/// Outcome record of measuring one subsystem.
#[derive(Clone, Debug)]
pub struct Measurement {
    /// Probability per retained outcome.
    pub probs: Vec<f64>,
    /// Renormalized post-measurement states on the kept subsystems.
    pub post_states: Vec<CMatrix>,
    /// Original POVM outcome index per retained outcome.
    pub outcome_index: Vec<usize>,
    pub kept_dims: DimList,
    /// Outcomes dropped for probability below [`PROB_FLOOR`], with their mass.
    pub dropped: Vec<(usize, f64)>,
}

/// Measures `povm` on subsystem `sys`; returns outcome probabilities and the
/// renormalized reduced post-measurement states on the remaining subsystems.
pub fn measure_on_subsystem(
    state: &MultipartiteState,
    povm: &Povm,
    sys: usize,
) -> Result<Measurement> {
    let dims = state.dims();
    if sys >= dims.len() {
        return Err(Error::InvalidArg("measured subsystem out of range".into()));
    }
    if povm.dim() != dims.dim(sys) {
        return Err(Error::DimMismatch(format!(
            "POVM dim {} vs subsystem dim {}",
            povm.dim(),
            dims.dim(sys)
        )));
    }
    let keep = dims.complement(&[sys]);
    let kept_dims = dims.select(&keep);
    let rho = state.density();
    let kd = kept_dims.total();
    let d = dims.dim(sys);

    let mut probs = Vec::new();
    let mut post_states = Vec::new();
    let mut outcome_index = Vec::new();
    let mut dropped = Vec::new();

    let mut row_digits = vec![0usize; dims.len()];
    let mut col_digits = vec![0usize; dims.len()];
    for (x, m) in povm.elements().iter().enumerate() {
        // sub[i',j'] = Σ_{b,b'} ρ[(i',b),(j',b')] M[b',b]
        let mut sub = CMatrix::zeros(kd, kd);
        for ik in 0..kd {
            let kr = kept_dims.unravel(ik);
            for (pos, &s) in keep.iter().enumerate() {
                row_digits[s] = kr[pos];
            }
            for jk in 0..kd {
                let kc = kept_dims.unravel(jk);
                for (pos, &s) in keep.iter().enumerate() {
                    col_digits[s] = kc[pos];
                }
                let mut acc = ZERO;
                for b in 0..d {
                    row_digits[sys] = b;
                    let r = dims.ravel(&row_digits);
                    for bp in 0..d {
                        col_digits[sys] = bp;
                        let c = dims.ravel(&col_digits);
                        acc += rho[(r, c)] * m[(bp, b)];
                    }
                }
                sub[(ik, jk)] = acc;
            }
        }
        let p = sub.trace().re;
        if p < PROB_FLOOR {
            dropped.push((x, p.max(0.0)));
            continue;
        }
        probs.push(p);
        post_states.push(sub.scale_re(1.0 / p));
        outcome_index.push(x);
    }
    Ok(Measurement {
        probs,
        post_states,
        outcome_index,
        kept_dims,
        dropped,
    })
}

/// Measures a rank-1 POVM on subsystem `sys` of a *pure* state and returns
/// the induced pure-state ensemble on the remaining subsystems.
pub fn measure_pure_rank1(
    state: &MultipartiteState,
    povm: &Povm,
    sys: usize,
) -> Result<(Ensemble, Vec<(usize, f64)>)> {
    let psi = state
        .vector()
        .ok_or_else(|| Error::InvalidArg("measure_pure_rank1 needs a pure state".into()))?;
    if !povm.is_rank1() {
        return Err(Error::InvalidArg("POVM is not rank-1".into()));
    }
    let dims = state.dims();
    if sys >= dims.len() || povm.dim() != dims.dim(sys) {
        return Err(Error::DimMismatch("measured subsystem".into()));
    }
    let keep = dims.complement(&[sys]);
    let kept_dims = dims.select(&keep);
    let kd = kept_dims.total();
    let d = dims.dim(sys);
    let vectors = povm.vectors()?;

    let mut weights = Vec::new();
    let mut members = Vec::new();
    let mut dropped = Vec::new();
    let mut digits = vec![0usize; dims.len()];
    for (x, mvec) in vectors.iter().enumerate() {
        // |φ_x⟩ ∝ (⟨m_x|_sys ⊗ I) |ψ⟩
        let mut phi = vec![ZERO; kd];
        for (ik, slot) in phi.iter_mut().enumerate() {
            let kr = kept_dims.unravel(ik);
            for (pos, &s) in keep.iter().enumerate() {
                digits[s] = kr[pos];
            }
            let mut acc = ZERO;
            for b in 0..d {
                digits[sys] = b;
                acc += mvec[b].conj() * psi[dims.ravel(&digits)];
            }
            *slot = acc;
        }
        let p = phi.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if p < PROB_FLOOR {
            dropped.push((x, p));
            continue;
        }
        let scale = 1.0 / p.sqrt();
        for z in &mut phi {
            *z *= scale;
        }
        weights.push(p);
        members.push(phi);
    }
    // compensate the dropped mass so the ensemble normalizes exactly
    let total: f64 = weights.iter().sum();
    let weights = weights.into_iter().map(|p| p / total).collect();
    Ok((Ensemble::new(weights, members, kept_dims)?, dropped))
}

/// State-file schema shared with the CLI:
/// `{"kind":"pure"|"mixed","dims":[...],"data":[[re,im],...]}` with row-major
/// data and the subsystem-0-most-significant convention.
pub mod json {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    struct StateFile {
        kind: String,
        dims: Vec<usize>,
        data: Vec<[f64; 2]>,
    }

    pub fn to_json(state: &MultipartiteState) -> serde_json::Value {
        let (kind, entries): (&str, Vec<[f64; 2]>) = match state.data() {
            StateData::Pure(v) => ("pure", v.iter().map(|z| [z.re, z.im]).collect()),
            StateData::Mixed(m) => ("mixed", m.data().iter().map(|z| [z.re, z.im]).collect()),
        };
        serde_json::json!({
            "kind": kind,
            "dims": state.dims().as_slice(),
            "data": entries,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<MultipartiteState> {
        let file: StateFile = serde_json::from_value(value.clone())
            .map_err(|e| Error::BadStateFile(e.to_string()))?;
        let dims = DimList::new(file.dims)?;
        let entries: Vec<C64> = file.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        match file.kind.as_str() {
            "pure" => MultipartiteState::pure(entries, dims),
            "mixed" => {
                let n = dims.total();
                if entries.len() != n * n {
                    return Err(Error::BadStateFile(format!(
                        "mixed state needs {} entries, got {}",
                        n * n,
                        entries.len()
                    )));
                }
                let m = CMatrix::from_fn(n, n, |i, j| entries[i * n + j]);
                MultipartiteState::mixed(m, dims)
            }
            other => Err(Error::BadStateFile(format!("unknown kind {other:?}"))),
        }
    }

    pub fn from_str(s: &str) -> Result<MultipartiteState> {
        let value: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::BadStateFile(e.to_string()))?;
        from_json(&value)
    }
}

/// Fidelity-free closeness helper: ⟨ψ|ρ|ψ⟩ for diagnostics.
pub fn overlap(psi: &[C64], rho: &CMatrix) -> f64 {
    let rv = rho.matvec(psi);
    inner(psi, &rv).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    #[test]
    fn pure_state_norm_enforced() {
        let dims = DimList::new(vec![2]).unwrap();
        assert!(MultipartiteState::pure(vec![ONE, ONE], dims.clone()).is_err());
        assert!(MultipartiteState::pure(vec![ONE, ZERO], dims).is_ok());
    }

    #[test]
    fn povm_completeness_enforced() {
        let half = CMatrix::identity(2).scale_re(0.5);
        assert!(Povm::new(vec![half.clone(), half.clone()]).is_ok());
        assert!(Povm::new(vec![half.clone(), half.clone(), half]).is_err());
    }

    #[test]
    fn computational_measurement_of_product_state() {
        // measuring B of ρ_A ⊗ σ_B leaves every ρ_A^x = ρ_A
        let a = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => C64::new(0.7, 0.0),
            (1, 1) => C64::new(0.3, 0.0),
            (0, 1) => C64::new(0.1, 0.05),
            _ => C64::new(0.1, -0.05),
        });
        let b = CMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                C64::new(0.5, 0.0)
            } else {
                C64::new(0.25, 0.0)
            }
        });
        let rho = crate::linalg::tensor(&a, &b);
        let dims = DimList::new(vec![2, 2]).unwrap();
        let st = MultipartiteState::mixed(rho, dims).unwrap();
        let m = measure_on_subsystem(&st, &Povm::computational(2), 1).unwrap();
        assert_eq!(m.probs.len(), 2);
        assert!((m.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for post in &m.post_states {
            assert!(post.sub(&a).max_abs() < 1e-10);
        }
    }

    #[test]
    fn x_measurement_on_ghz_gives_bell_pairs() {
        // direct algebra: measuring B of GHZ(3) in the X basis leaves AC in
        // (|00⟩ ± |11⟩)/√2, each with probability 1/2
        let ghz = ghz(3).unwrap();
        let povm = Povm::fourier(2);
        let (ens, dropped) = measure_pure_rank1(&ghz, &povm, 1).unwrap();
        assert!(dropped.is_empty());
        assert_eq!(ens.len(), 2);
        let s = 1.0 / 2f64.sqrt();
        for (p, phi) in ens.weights().iter().zip(ens.states()) {
            assert!((p - 0.5).abs() < 1e-12);
            assert!((phi[0].norm() - s).abs() < 1e-12);
            assert!((phi[3].norm() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn measurement_reproduces_average() {
        // Σ p_x ρ^x = ρ_kept
        let st = random::random_mixed(&DimList::new(vec![2, 3]).unwrap(), 3, 11).unwrap();
        let povm = random::random_povm(3, 5, 21).unwrap();
        let m = measure_on_subsystem(&st, &povm, 1).unwrap();
        let mut avg = CMatrix::zeros(2, 2);
        for (p, post) in m.probs.iter().zip(&m.post_states) {
            avg = avg.add(&post.scale_re(*p));
        }
        let ra = st.reduced_density(&[0]).unwrap();
        assert!(avg.sub(&ra).max_abs() < 1e-9);
        assert!((m.probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ensemble_realizes_density() {
        let st = random::random_pure(&DimList::new(vec![2, 2, 2]).unwrap(), 3).unwrap();
        let povm = random::random_povm(2, 4, 9).unwrap();
        let (ens, _) = measure_pure_rank1(&st, &povm, 1).unwrap();
        let avg = ens.average_density();
        let rac = st.reduced_density(&[0, 2]).unwrap();
        assert!(avg.sub(&rac).max_abs() < 1e-10);
    }

    #[test]
    fn json_roundtrip() {
        let st = random::random_pure(&DimList::new(vec![2, 3]).unwrap(), 4).unwrap();
        let j = json::to_json(&st);
        let back = json::from_json(&j).unwrap();
        assert_eq!(back.dims().as_slice(), st.dims().as_slice());
        assert_eq!(back.vector().unwrap(), st.vector().unwrap());

        let mx = random::random_mixed(&DimList::new(vec![2, 2]).unwrap(), 2, 5).unwrap();
        let j2 = json::to_json(&mx);
        let back2 = json::from_json(&j2).unwrap();
        assert!(back2.density().sub(&mx.density()).max_abs() == 0.0);
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(json::from_str("{\"kind\":\"pure\",\"dims\":[2],\"data\":[[1,0],[0,0],[0,0]]}").is_err());
        assert!(json::from_str("{\"kind\":\"nope\",\"dims\":[2],\"data\":[[1,0],[0,0]]}").is_err());
        assert!(json::from_str("not json").is_err());
    }
}
