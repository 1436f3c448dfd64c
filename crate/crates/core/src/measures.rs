//! Scalar correlation measures: entropies, mutual and coherent information,
//! the concurrence family (pure-state, two-qubit closed forms, assistance),
//! roof-extension measures (EoF/EoA/CoA), the measured correlation I←, the
//! one-way unlocalizable entanglement computed two independent ways, their
//! product-measurement variants, Holevo entropy defects, and the explicit
//! mixed-measurement upper bound. Values are in bits.

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, outer, partial_trace, purify, CMatrix, DimList, C64, ZERO,
};
use crate::optim::{
    optimize_decomposition, optimize_povm, optimize_product_povm, Objective, OptimConfig,
    OptimResult,
};
use crate::states::{induced_ensembles, thm1_mixed_povm, Ensemble, MultipartiteState, Povm};

/// How a reported value relates to the true extremum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundDirection {
    Exact,
    /// The true value can only be larger (optimized maxima).
    LowerEstimate,
    /// The true value can only be smaller (optimized minima).
    UpperEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Optimized,
}

/// Parameters achieving an optimized value.
#[derive(Clone, Debug)]
pub enum Certificate {
    Decomposition(Ensemble),
    Measurement(Povm),
    ProductMeasurement(Povm, Povm),
}

impl Certificate {
    pub fn summary(&self) -> String {
        match self {
            Certificate::Decomposition(e) => format!("decomposition[{}]", e.len()),
            Certificate::Measurement(p) => format!("povm[{}]", p.len()),
            Certificate::ProductMeasurement(a, b) => {
                format!("product-povm[{}x{}]", a.len(), b.len())
            }
        }
    }
}

/// Restart/convergence metadata carried along optimized values.
#[derive(Clone, Debug, serde::Serialize)]
pub struct OptimMeta {
    pub restarts: usize,
    pub outcome_count: usize,
    pub escalated: bool,
    pub converged: bool,
}

impl OptimMeta {
    fn from_result(r: &OptimResult, cfg: &OptimConfig) -> Self {
        OptimMeta {
            restarts: cfg.restarts,
            outcome_count: r.outcome_count,
            escalated: r.escalated,
            converged: r.converged,
        }
    }
}

/// A measure value with its provenance.
#[derive(Clone, Debug)]
pub struct MeasureValue {
    pub value: f64,
    pub method: Method,
    pub bound: BoundDirection,
    pub certificate: Option<Certificate>,
    pub optim: Option<OptimMeta>,
}

impl MeasureValue {
    fn closed(value: f64) -> Self {
        MeasureValue {
            value,
            method: Method::ClosedForm,
            bound: BoundDirection::Exact,
            certificate: None,
            optim: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Entropies
// ---------------------------------------------------------------------------

/// Shannon entropy in bits with the 0·log0 = 0 convention. Negative
/// rounding-noise entries are treated as zero.
pub fn shannon(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

/// Binary entropy H(x) in bits.
pub fn binary_entropy(x: f64) -> f64 {
    shannon(&[x, 1.0 - x])
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &CMatrix) -> Result<f64> {
    let eig = eig_hermitian(rho)?;
    Ok(shannon(&eig.values))
}

/// I(ρ_AB) = S(ρ_A) + S(ρ_B) − S(ρ_AB).
pub fn mutual_information(rho: &CMatrix, dims: &DimList) -> Result<f64> {
    if dims.len() != 2 {
        return Err(Error::DimMismatch("mutual information needs a bipartite state".into()));
    }
    let sa = entropy(&partial_trace(rho, dims, &[0])?)?;
    let sb = entropy(&partial_trace(rho, dims, &[1])?)?;
    Ok(sa + sb - entropy(rho)?)
}

/// I_c←(ρ_AB) = S(ρ_A) − S(ρ_AB); may be negative.
pub fn coherent_information(rho: &CMatrix, dims: &DimList) -> Result<f64> {
    if dims.len() != 2 {
        return Err(Error::DimMismatch("coherent information needs a bipartite state".into()));
    }
    let sa = entropy(&partial_trace(rho, dims, &[0])?)?;
    Ok(sa - entropy(rho)?)
}

/// 𝓔(x) = H(1/2 + √(1−x²)/2): the entanglement of a two-qubit (or 2⊗d pure)
/// state as a function of its concurrence.
pub fn curly_e(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArg(format!("curly_e argument {x} outside [0,1]")));
    }
    let root = (1.0 - x * x).max(0.0).sqrt();
    Ok(binary_entropy(0.5 + 0.5 * root))
}

/// Reduced density matrix of a pure vector on the `keep` subsystems,
/// computed without materializing the full projector.
pub fn pure_reduced(phi: &[C64], dims: &DimList, keep: &[usize]) -> CMatrix {
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let rest = dims.complement(&keep_sorted);
    let kd = dims.select(&keep_sorted);
    let rd_total: usize = rest.iter().map(|&s| dims.dim(s)).product();
    let k_total = kd.total();
    let mut rho = CMatrix::zeros(k_total, k_total);
    let mut digits = vec![0usize; dims.len()];
    // amplitude table: amp[a][t]
    let rest_dims: Vec<usize> = rest.iter().map(|&s| dims.dim(s)).collect();
    let mut amp = vec![vec![ZERO; rd_total.max(1)]; k_total];
    for (a, row) in amp.iter_mut().enumerate() {
        let ad = kd.unravel(a);
        for (pos, &s) in keep_sorted.iter().enumerate() {
            digits[s] = ad[pos];
        }
        for (t, slot) in row.iter_mut().enumerate() {
            let mut tt = t;
            for k in (0..rest.len()).rev() {
                digits[rest[k]] = tt % rest_dims[k];
                tt /= rest_dims[k];
            }
            *slot = phi[dims.ravel(&digits)];
        }
    }
    for a in 0..k_total {
        for ap in 0..k_total {
            let mut acc = ZERO;
            for t in 0..rd_total.max(1) {
                acc += amp[a][t] * amp[ap][t].conj();
            }
            rho[(a, ap)] = acc;
        }
    }
    rho
}

/// Entanglement entropy of a pure state across `cut` vs the rest; the
/// smaller side is diagonalized.
pub fn entanglement_entropy(phi: &[C64], dims: &DimList, cut: &[usize]) -> Result<f64> {
    let rest = dims.complement(cut);
    let cut_total: usize = cut.iter().map(|&s| dims.dim(s)).product();
    let rest_total: usize = rest.iter().map(|&s| dims.dim(s)).product();
    let side = if cut_total <= rest_total { cut.to_vec() } else { rest };
    entropy(&pure_reduced(phi, dims, &side))
}

// ---------------------------------------------------------------------------
// Concurrence family
// ---------------------------------------------------------------------------

/// C(|φ⟩) = √(2(1 − tr ρ_cut²)) across `cut` vs the rest.
pub fn concurrence_pure(phi: &[C64], dims: &DimList, cut: &[usize]) -> Result<f64> {
    if phi.len() != dims.total() {
        return Err(Error::DimMismatch("concurrence_pure input".into()));
    }
    let rho = pure_reduced(phi, dims, cut);
    let purity = rho.frob_inner(&rho).re;
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// The spin-flip λ-spectrum of a two-qubit state, descending, padded to 4.
///
/// λᵢ are the singular values of the preconcurrence matrix
/// τ_ij = ⟨vᵢ|(Y⊗Y)|v̄ⱼ⟩ over sub-normalized eigenvectors, obtained from the
/// Hermitian embedding [[0,τ],[τ†,0]] so no eigenvalue ever gets squared.
pub fn spin_flip_lambdas(rho: &CMatrix, dims: &DimList) -> Result<[f64; 4]> {
    if dims.as_slice() != [2, 2] || rho.rows() != 4 {
        return Err(Error::DimMismatch("spin-flip spectrum needs a two-qubit state".into()));
    }
    let eig = eig_hermitian(rho)?;
    let kept: Vec<usize> = (0..4).filter(|&k| eig.values[k] > 1e-12).collect();
    let r = kept.len();
    if r == 0 {
        return Err(Error::NotPsd(eig.values[0]));
    }
    // Y⊗Y in the computational basis
    let mut yy = CMatrix::zeros(4, 4);
    yy[(0, 3)] = C64::new(-1.0, 0.0);
    yy[(3, 0)] = C64::new(-1.0, 0.0);
    yy[(1, 2)] = C64::new(1.0, 0.0);
    yy[(2, 1)] = C64::new(1.0, 0.0);
    let sub: Vec<Vec<C64>> = kept
        .iter()
        .map(|&k| {
            let s = eig.values[k].sqrt();
            eig.vectors.col(k).iter().map(|z| z * s).collect()
        })
        .collect();
    let mut tau = CMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let mut acc = ZERO;
            for k in 0..4 {
                for l in 0..4 {
                    if yy[(k, l)] == ZERO {
                        continue;
                    }
                    acc += sub[i][k].conj() * yy[(k, l)] * sub[j][l].conj();
                }
            }
            tau[(i, j)] = acc;
        }
    }
    // singular values via the Hermitian embedding
    let mut emb = CMatrix::zeros(2 * r, 2 * r);
    for i in 0..r {
        for j in 0..r {
            emb[(i, r + j)] = tau[(i, j)];
            emb[(r + i, j)] = tau[(j, i)].conj();
        }
    }
    let evals = eig_hermitian(&emb)?.values;
    let mut lambdas = [0.0f64; 4];
    for (slot, &lam) in lambdas.iter_mut().zip(evals.iter().rev().take(r)) {
        *slot = lam.max(0.0);
    }
    Ok(lambdas)
}

/// Wootters closed form: C = max{0, λ₁−λ₂−λ₃−λ₄}.
pub fn concurrence_2q(rho: &CMatrix, dims: &DimList) -> Result<f64> {
    let l = spin_flip_lambdas(rho, dims)?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Concurrence of assistance closed form: C^a = λ₁+λ₂+λ₃+λ₄.
pub fn coa_2q(rho: &CMatrix, dims: &DimList) -> Result<f64> {
    let l = spin_flip_lambdas(rho, dims)?;
    Ok((l[0] + l[1] + l[2] + l[3]).min(1.0))
}

/// E_f of a two-qubit state: 𝓔(C).
pub fn eof_2q(rho: &CMatrix, dims: &DimList) -> Result<f64> {
    curly_e(concurrence_2q(rho, dims)?.min(1.0))
}

// ---------------------------------------------------------------------------
// Roof measures
// ---------------------------------------------------------------------------

fn roof(
    rho: &CMatrix,
    dims: &DimList,
    cut: &[usize],
    objective: Objective,
    score: &dyn Fn(&[C64]) -> f64,
    seeds: &[Ensemble],
    cfg: &OptimConfig,
) -> Result<MeasureValue> {
    let out = optimize_decomposition(rho, dims, objective, score, seeds, cfg)?;
    let bound = match objective {
        // an optimized min can only over-estimate, an optimized max under-estimate
        Objective::Minimize => BoundDirection::UpperEstimate,
        Objective::Maximize => BoundDirection::LowerEstimate,
    };
    let _ = cut;
    Ok(MeasureValue {
        value: out.result.value,
        method: Method::Optimized,
        bound,
        certificate: Some(Certificate::Decomposition(out.ensemble)),
        optim: Some(OptimMeta::from_result(&out.result, cfg)),
    })
}

fn entropy_score<'a>(dims: &'a DimList, cut: &'a [usize]) -> impl Fn(&[C64]) -> f64 + 'a {
    move |phi: &[C64]| entanglement_entropy(phi, dims, cut).expect("member entropy")
}

/// Entanglement of formation via the convex roof: minimized average
/// entanglement entropy over pure-state decompositions.
pub fn eof_roof(
    rho: &CMatrix,
    dims: &DimList,
    cut: &[usize],
    seeds: &[Ensemble],
    cfg: &OptimConfig,
) -> Result<MeasureValue> {
    let score = entropy_score(dims, cut);
    roof(rho, dims, cut, Objective::Minimize, &score, seeds, cfg)
}

/// Entanglement of assistance via the concave roof: maximized average
/// entanglement entropy over pure-state decompositions.
pub fn eoa_roof(
    rho: &CMatrix,
    dims: &DimList,
    cut: &[usize],
    seeds: &[Ensemble],
    cfg: &OptimConfig,
) -> Result<MeasureValue> {
    let score = entropy_score(dims, cut);
    roof(rho, dims, cut, Objective::Maximize, &score, seeds, cfg)
}

/// Concurrence of assistance via the concave roof over member concurrences.
pub fn coa_roof(
    rho: &CMatrix,
    dims: &DimList,
    cut: &[usize],
    seeds: &[Ensemble],
    cfg: &OptimConfig,
) -> Result<MeasureValue> {
    let score =
        move |phi: &[C64]| concurrence_pure(phi, dims, cut).expect("member concurrence");
    roof(rho, dims, cut, Objective::Maximize, &score, seeds, cfg)
}

// ---------------------------------------------------------------------------
// Measured correlation and unlocalizable entanglement
// ---------------------------------------------------------------------------

fn bipartite_state(rho: &CMatrix, dims: &DimList) -> Result<MultipartiteState> {
    if dims.len() != 2 {
        return Err(Error::DimMismatch("expected a bipartite state".into()));
    }
    MultipartiteState::mixed(rho.clone(), dims.clone())
}

/// Henderson–Vedral measured correlation:
/// I←(ρ_AB) = max over rank-1 POVMs on B of [S(ρ_A) − Σ p_x S(ρ_A^x)].
pub fn henderson_vedral(
    rho: &CMatrix,
    dims: &DimList,
    seeds: &[Povm],
    cfg: &OptimConfig,
) -> Result<MeasureValue> {
    let st = bipartite_state(rho, dims)?;
    let out = optimize_povm(&st, 1, 0, Objective::Maximize, seeds, cfg)?;
    Ok(MeasureValue {
        value: out.result.value.max(0.0),
        method: Method::Optimized,
        bound: BoundDirection::LowerEstimate,
        certificate: Some(Certificate::Measurement(out.povm)),
        optim: Some(OptimMeta::from_result(&out.result, cfg)),
    })
}

/// One-way unlocalizable entanglement, direct route:
/// E_u←(ρ_AB) = min over rank-1 POVMs on B of [S(ρ_A) − Σ p_x S(ρ_A^x)].
/// The mixed eigen/Fourier measurement is always in the candidate pool.
pub fn ue_direct(
    rho: &CMatrix,
    dims: &DimList,
    seeds: &[Povm],
    cfg: &OptimConfig,
) -> Result<MeasureValue> {
    let st = bipartite_state(rho, dims)?;
    let out = optimize_povm(&st, 1, 0, Objective::Minimize, seeds, cfg)?;
    Ok(MeasureValue {
        value: out.result.value,
        method: Method::Optimized,
        bound: BoundDirection::UpperEstimate,
        certificate: Some(Certificate::Measurement(out.povm)),
        optim: Some(OptimMeta::from_result(&out.result, cfg)),
    })
}

/// One-way unlocalizable entanglement via the definition:
/// E_u←(ρ_AB) = S(ρ_A) − E_a(ρ_AC) on a purification |ψ⟩_ABC.
pub fn ue_via_purification(
    rho: &CMatrix,
    dims: &DimList,
    seeds: &[Ensemble],
    cfg: &OptimConfig,
) -> Result<MeasureValue> {
    if dims.len() != 2 {
        return Err(Error::DimMismatch("expected a bipartite state".into()));
    }
    let (psi, full_dims) = purify(rho, dims)?;
    let s_a = entropy(&partial_trace(rho, dims, &[0])?)?;
    // ρ_AC lives on subsystems (0, 2) of |ψ⟩_ABC
    let rho_ac = pure_reduced(&psi, &full_dims, &[0, 2]);
    let ac_dims = full_dims.select(&[0, 2]);
    let ea = eoa_roof(&rho_ac, &ac_dims, &[0], seeds, cfg)?;
    Ok(MeasureValue {
        value: s_a - ea.value,
        method: Method::Optimized,
        bound: BoundDirection::UpperEstimate,
        certificate: ea.certificate,
        optim: ea.optim,
    })
}

/// Product-measurement unlocalizable entanglement on a tripartite state:
/// Ẽ_u←(ρ_A(CD)) = min over product rank-1 POVMs {M_x ⊗ N_y} on the
/// measured pair of [S(ρ_A) − Σ p_xy S(ρ_A^xy)].
pub fn ue_product(
    state: &MultipartiteState,
    target: usize,
    measured: (usize, usize),
    seeds: &[(Povm, Povm)],
    cfg: &OptimConfig,
) -> Result<MeasureValue> {
    let out = optimize_product_povm(state, measured, target, Objective::Minimize, seeds, cfg)?;
    Ok(MeasureValue {
        value: out.value,
        method: Method::Optimized,
        bound: BoundDirection::UpperEstimate,
        certificate: Some(Certificate::ProductMeasurement(
            out.povm_first,
            out.povm_second,
        )),
        optim: Some(OptimMeta::from_result(&out.result, cfg)),
    })
}

/// Localizable entanglement (as printed): Ẽ_a = max over product rank-1
/// POVMs on the measured pair of Σ p_xy S(ρ_A^xy). Equals
/// S(ρ_A) − Ẽ_u← for the same measurement.
pub fn localizable_ea(
    state: &MultipartiteState,
    target: usize,
    measured: (usize, usize),
    seeds: &[(Povm, Povm)],
    cfg: &OptimConfig,
) -> Result<MeasureValue> {
    let s_a = entropy(&state.reduced_density(&[target])?)?;
    let ue = ue_product(state, target, measured, seeds, cfg)?;
    Ok(MeasureValue {
        value: s_a - ue.value,
        method: Method::Optimized,
        bound: BoundDirection::LowerEstimate,
        certificate: ue.certificate,
        optim: ue.optim,
    })
}

// ---------------------------------------------------------------------------
// Holevo defect and the explicit measurement bound
// ---------------------------------------------------------------------------

/// Holevo entropy defect χ = S(Σ pᵢ ρᵢ) − Σ pᵢ S(ρᵢ) of an ensemble with
/// (possibly mixed) members.
pub fn holevo_chi(weights: &[f64], members: &[CMatrix]) -> Result<f64> {
    if weights.len() != members.len() || weights.is_empty() {
        return Err(Error::InvalidArg("ensemble shape mismatch".into()));
    }
    let n = members[0].rows();
    let mut avg = CMatrix::zeros(n, n);
    let mut mean_entropy = 0.0;
    for (&p, m) in weights.iter().zip(members) {
        avg = avg.add(&m.scale_re(p));
        if p > 0.0 {
            mean_entropy += p * entropy(m)?;
        }
    }
    Ok((entropy(&avg)? - mean_entropy).max(0.0))
}

/// χ of a pure-state ensemble.
pub fn holevo_chi_pure(ens: &Ensemble) -> Result<f64> {
    let members: Vec<CMatrix> = ens.states().iter().map(|s| outer(s, s)).collect();
    holevo_chi(ens.weights(), &members)
}

/// The explicit upper bound on E_u←: the value (χ(𝓔₀)+χ(𝓔₁))/2 achieved by
/// the mixed eigen/Fourier rank-1 measurement, together with that POVM.
/// Always ≤ I(ρ_AB)/2.
pub fn thm1_povm_bound(rho: &CMatrix, dims: &DimList) -> Result<(f64, Povm)> {
    let (e0, e1) = induced_ensembles(rho, dims)?;
    let chi0 = holevo_chi(&e0.weights, &e0.members)?;
    let chi1 = holevo_chi(&e1.weights, &e1.members)?;
    let rho_b = partial_trace(rho, dims, &[1])?;
    let povm = thm1_mixed_povm(&rho_b)?;
    Ok(((chi0 + chi1) / 2.0, povm))
}

/// Convenience wrapper returning all measures from the CLI registry.
pub fn measure_value_closed(value: f64) -> MeasureValue {
    MeasureValue::closed(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sqrt_psd, tensor, ONE};
    use crate::states::{bell, ghz, max_mixed, remark1_state, w_state, random_mixed};

    const LOG2_3: f64 = 1.584962500721156;

    fn dims2() -> DimList {
        DimList::new(vec![2, 2]).unwrap()
    }

    #[test]
    fn entropy_basics() {
        assert!((entropy(&CMatrix::diag(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-12);
        let v = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        assert!(entropy(&outer(&v, &v)).unwrap().abs() < 1e-10);
        assert!((binary_entropy(1.0 / 3.0) - (LOG2_3 - 2.0 / 3.0)).abs() < 1e-12);
        assert_eq!(shannon(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn mutual_and_coherent_information() {
        let b = bell();
        let rho = b.density();
        assert!((mutual_information(&rho, &dims2()).unwrap() - 2.0).abs() < 1e-10);
        assert!((coherent_information(&rho, &dims2()).unwrap() - 1.0).abs() < 1e-10);
        // product state
        let a = CMatrix::diag(&[0.3, 0.7]);
        let s = CMatrix::diag(&[0.9, 0.1]);
        let prod = tensor(&a, &s);
        assert!(mutual_information(&prod, &dims2()).unwrap().abs() < 1e-10);
        // maximally mixed two-qubit: I_c = 1 - 2 = -1
        let mm = max_mixed(dims2()).density();
        assert!((coherent_information(&mm, &dims2()).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn curly_e_values() {
        assert!((curly_e(1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(curly_e(0.0).unwrap().abs() < 1e-12);
        let c = 2.0 * 2f64.sqrt() / 3.0;
        assert!((curly_e(c).unwrap() - (LOG2_3 - 2.0 / 3.0)).abs() < 1e-12);
        // Lemma-4 instance at (0.6, 0.8): values from direct evaluation
        let e6 = curly_e(0.6).unwrap();
        let e8 = curly_e(0.8).unwrap();
        assert!((e6 - 0.4689955935892812).abs() < 1e-12);
        assert!((e8 - 0.7219280948873623).abs() < 1e-12);
        assert!(e6 + e8 >= curly_e(1.0).unwrap());
        assert!(curly_e(-0.1).is_err());
        assert!(curly_e(1.1).is_err());
    }

    #[test]
    fn concurrence_pure_cases() {
        // product state across the cut -> 0
        let a = vec![ONE, ZERO];
        let b = vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)];
        let prod = crate::linalg::tensor_vec(&a, &b);
        let d = dims2();
        assert!(concurrence_pure(&prod, &d, &[0]).unwrap() < 1e-12);
        // remark 1 state across A|(BC)
        let r = remark1_state();
        let c = concurrence_pure(r.vector().unwrap(), r.dims(), &[0]).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        // W state across A|(BC): tr rho_A^2 = 5/9
        let w = w_state(3).unwrap();
        let cw = concurrence_pure(w.vector().unwrap(), w.dims(), &[0]).unwrap();
        assert!((cw - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_pure_2xd_determinant_form() {
        // for 2⊗d pure states C = 2√det(ρ_A)
        let dims = DimList::new(vec![2, 3]).unwrap();
        for seed in 0..5u64 {
            let st = crate::states::random_pure(&dims, 100 + seed).unwrap();
            let phi = st.vector().unwrap();
            let c = concurrence_pure(phi, &dims, &[0]).unwrap();
            let ra = pure_reduced(phi, &dims, &[0]);
            let det = (ra[(0, 0)] * ra[(1, 1)] - ra[(0, 1)] * ra[(1, 0)]).re;
            assert!((c - 2.0 * det.max(0.0).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn wootters_bell_and_ghz() {
        let d = dims2();
        let b = bell().density();
        assert!((concurrence_2q(&b, &d).unwrap() - 1.0).abs() < 1e-10);
        assert!((coa_2q(&b, &d).unwrap() - 1.0).abs() < 1e-10);
        // GHZ(3) marginal: C = 0; CoA = 1 (achieved by the Bell mixture
        // decomposition, and forced by the three-tangle identity).
        let g = ghz(3).unwrap();
        let rab = g.reduced_density(&[0, 1]).unwrap();
        assert!(concurrence_2q(&rab, &d).unwrap() < 1e-10);
        assert!((coa_2q(&rab, &d).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn w_state_three_tangle_members() {
        // C_AB = 2/3 and C^a_AC = 2/3 so that C²_{A(BC)} = 8/9 splits evenly
        let d = dims2();
        let w = w_state(3).unwrap();
        let rab = w.reduced_density(&[0, 1]).unwrap();
        let rac = w.reduced_density(&[0, 2]).unwrap();
        assert!((concurrence_2q(&rab, &d).unwrap() - 2.0 / 3.0).abs() < 1e-10);
        assert!((coa_2q(&rac, &d).unwrap() - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn spin_flip_lambdas_match_sqrt_route() {
        // independent oracle: λ = eigenvalues of sqrt(sqrt(ρ) ρ̃ sqrt(ρ))
        let d = dims2();
        let mut yy = CMatrix::zeros(4, 4);
        yy[(0, 3)] = C64::new(-1.0, 0.0);
        yy[(3, 0)] = C64::new(-1.0, 0.0);
        yy[(1, 2)] = ONE;
        yy[(2, 1)] = ONE;
        for seed in 0..10u64 {
            let rank = 1 + (seed % 4) as usize;
            let st = random_mixed(&d, rank, 500 + seed).unwrap();
            let rho = st.density();
            let lam = spin_flip_lambdas(&rho, &d).unwrap();
            let tilde = yy.mul(&rho.conj()).mul(&yy);
            let root = sqrt_psd(&rho).unwrap();
            let inner = root.mul(&tilde).mul(&root);
            let mut evals = eig_hermitian(&inner).unwrap().values;
            evals.reverse();
            for k in 0..4 {
                let expect = evals.get(k).copied().unwrap_or(0.0).max(0.0).sqrt();
                assert!(
                    (lam[k] - expect).abs() < 1e-7,
                    "seed {seed} k {k}: {} vs {}",
                    lam[k],
                    expect
                );
            }
        }
    }

    #[test]
    fn concurrence_le_coa_on_randoms() {
        let d = dims2();
        for seed in 0..50u64 {
            let st = random_mixed(&d, 1 + (seed % 4) as usize, 900 + seed).unwrap();
            let rho = st.density();
            let c = concurrence_2q(&rho, &d).unwrap();
            let ca = coa_2q(&rho, &d).unwrap();
            assert!(c <= ca + 1e-10, "seed {seed}: C {c} > C^a {ca}");
        }
    }

    #[test]
    fn eof_2q_values() {
        let d = dims2();
        assert!((eof_2q(&bell().density(), &d).unwrap() - 1.0).abs() < 1e-10);
        // separable diagonal state
        let sep = CMatrix::diag(&[0.4, 0.1, 0.3, 0.2]);
        assert!(eof_2q(&sep, &d).unwrap() < 1e-10);
    }

    #[test]
    fn roof_measures_on_pure_input() {
        let dims = dims2();
        let st = crate::states::random_pure(&dims, 42).unwrap();
        let rho = st.density();
        let cfg = OptimConfig {
            restarts: 2,
            max_iters: 40,
            ..OptimConfig::with_seed(7)
        };
        let sa = entropy(&pure_reduced(st.vector().unwrap(), &dims, &[0])).unwrap();
        let ef = eof_roof(&rho, &dims, &[0], &[], &cfg).unwrap();
        let ea = eoa_roof(&rho, &dims, &[0], &[], &cfg).unwrap();
        assert!((ef.value - sa).abs() < 1e-9);
        assert!((ea.value - sa).abs() < 1e-9);
        assert_eq!(ef.bound, BoundDirection::UpperEstimate);
        assert_eq!(ea.bound, BoundDirection::LowerEstimate);
    }

    #[test]
    fn remark1_roof_values() {
        // every decomposition of ρ_AC has the same average entanglement
        let r = remark1_state();
        let rho_ac = r.reduced_density(&[0, 2]).unwrap();
        let ac_dims = DimList::new(vec![2, 3]).unwrap();
        let cfg = OptimConfig {
            restarts: 6,
            max_iters: 200,
            ..OptimConfig::with_seed(3)
        };
        let expect = LOG2_3 - 2.0 / 3.0;
        let ef = eof_roof(&rho_ac, &ac_dims, &[0], &[], &cfg).unwrap();
        let ea = eoa_roof(&rho_ac, &ac_dims, &[0], &[], &cfg).unwrap();
        assert!((ef.value - expect).abs() < 1e-4, "eof {}", ef.value);
        assert!((ea.value - expect).abs() < 1e-4, "eoa {}", ea.value);
        // member concurrences are all 2√2/3
        if let Some(Certificate::Decomposition(ens)) = &ea.certificate {
            for (_, phi) in (0..ens.len()).map(|i| ens.member(i)) {
                let c = concurrence_pure(phi, &ac_dims, &[0]).unwrap();
                assert!((c - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-6);
            }
        } else {
            panic!("missing decomposition certificate");
        }
    }

    #[test]
    fn henderson_vedral_cases() {
        let d = dims2();
        let cfg = OptimConfig {
            restarts: 3,
            max_iters: 80,
            ..OptimConfig::with_seed(5)
        };
        // product state -> 0
        let prod = tensor(&CMatrix::diag(&[0.3, 0.7]), &CMatrix::diag(&[0.6, 0.4]));
        assert!(henderson_vedral(&prod, &d, &[], &cfg).unwrap().value < 1e-9);
        // Bell -> 1
        let hv = henderson_vedral(&bell().density(), &d, &[], &cfg).unwrap();
        assert!((hv.value - 1.0).abs() < 1e-9);
        // GHZ(3) marginal is classically correlated: I← = 1
        let rab = ghz(3).unwrap().reduced_density(&[0, 1]).unwrap();
        let hv2 = henderson_vedral(&rab, &d, &[], &cfg).unwrap();
        assert!((hv2.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ue_direct_analytic_family() {
        let d = dims2();
        let cfg = OptimConfig {
            restarts: 4,
            max_iters: 100,
            ..OptimConfig::with_seed(5)
        };
        // I4/4: every POVM gives 0
        let mm = max_mixed(dims2()).density();
        assert!(ue_direct(&mm, &d, &[], &cfg).unwrap().value.abs() < 1e-9);
        // Bell as ρ_AB: trivial purifying system, nothing is localizable
        let ue = ue_direct(&bell().density(), &d, &[], &cfg).unwrap();
        assert!((ue.value - 1.0).abs() < 1e-9);
        // GHZ(3) marginal: the Fourier measurement localizes everything
        let rab = ghz(3).unwrap().reduced_density(&[0, 1]).unwrap();
        assert!(ue_direct(&rab, &d, &[], &cfg).unwrap().value.abs() < 1e-9);
    }

    #[test]
    fn ue_remark1_both_routes() {
        let r = remark1_state();
        let rab = r.reduced_density(&[0, 1]).unwrap();
        let d = dims2();
        let cfg = OptimConfig {
            restarts: 6,
            max_iters: 200,
            ..OptimConfig::with_seed(9)
        };
        let expect = 5.0 / 3.0 - LOG2_3;
        let direct = ue_direct(&rab, &d, &[], &cfg).unwrap();
        assert!((direct.value - expect).abs() < 1e-4, "direct {}", direct.value);
        let via = ue_via_purification(&rab, &d, &[], &cfg).unwrap();
        assert!((via.value - expect).abs() < 1e-4, "via {}", via.value);
    }

    #[test]
    fn ue_product_and_localizable() {
        // product ρ_A ⊗ σ_CD: measurements on CD cannot touch A
        let a = CMatrix::diag(&[0.3, 0.7]);
        let scd = random_mixed(&dims2(), 2, 77).unwrap().density();
        let rho = tensor(&a, &scd);
        let dims = DimList::new(vec![2, 2, 2]).unwrap();
        let st = MultipartiteState::mixed(rho, dims).unwrap();
        let cfg = OptimConfig {
            restarts: 3,
            max_iters: 60,
            ..OptimConfig::with_seed(4)
        };
        let ue = ue_product(&st, 0, (1, 2), &[], &cfg).unwrap();
        assert!(ue.value.abs() < 1e-9);
        // GHZ(4): Ẽ_a(ρ_AB) = 1 via X⊗X measurements on CD
        let g = ghz(4).unwrap();
        let ea = localizable_ea(&g, 0, (2, 3), &[], &cfg).unwrap();
        assert!((ea.value - 1.0).abs() < 1e-9, "Ẽ_a {}", ea.value);
    }

    #[test]
    fn holevo_chi_cases() {
        // identical members -> 0
        let m = CMatrix::diag(&[0.5, 0.5]);
        assert!(holevo_chi(&[0.5, 0.5], &[m.clone(), m]).unwrap() < 1e-12);
        // orthogonal pure members -> 1
        let p0 = CMatrix::diag(&[1.0, 0.0]);
        let p1 = CMatrix::diag(&[0.0, 1.0]);
        assert!((holevo_chi(&[0.5, 0.5], &[p0, p1]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thm1_bound_cases() {
        let d = dims2();
        // ρ_A ⊗ I/2: both ensembles collapse, bound 0
        let prod = tensor(&CMatrix::diag(&[0.2, 0.8]), &CMatrix::diag(&[0.5, 0.5]));
        let (v, povm) = thm1_povm_bound(&prod, &d).unwrap();
        assert!(v.abs() < 1e-10);
        assert_eq!(povm.len(), 4);
        // Bell: bound = I/2 = 1 and E_u = 1, the chain is tight
        let (vb, _) = thm1_povm_bound(&bell().density(), &d).unwrap();
        assert!((vb - 1.0).abs() < 1e-10);
        // remark 1: χ0 + χ1 ≤ I
        let r = remark1_state();
        let rab = r.reduced_density(&[0, 1]).unwrap();
        let (e0, e1) = induced_ensembles(&rab, &d).unwrap();
        let chi0 = holevo_chi(&e0.weights, &e0.members).unwrap();
        let chi1 = holevo_chi(&e1.weights, &e1.members).unwrap();
        let i = mutual_information(&rab, &d).unwrap();
        assert!(chi0 + chi1 <= i + 1e-9);
    }
}
