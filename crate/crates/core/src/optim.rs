//! Shared optimization engine over pure-state decompositions and rank-1
//! POVMs.
//!
//! Both searches run over isometries. An n×r isometry applied to the
//! sub-normalized eigenvectors of ρ enumerates its n-element pure-state
//! decompositions (HJW); an n×d isometry, read row-wise, enumerates the
//! n-outcome rank-1 POVMs on a d-dimensional subsystem. Local moves are
//! exponentials of random sparse anti-Hermitian generators (a 2×2 rotation
//! mixing two rows), which stay exactly on the manifold and need no
//! derivatives; the step is halved on repeated non-improvement.

use crate::error::{Error, Result};
use crate::linalg::{orthonormalize_columns, CMatrix, DimList, C64, ZERO};
use crate::rng::{complex_gaussian, gaussian, stream, StreamKind};
use crate::states::{Ensemble, MultipartiteState, Povm};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

/// Direction of the extremization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Minimize,
    Maximize,
}

impl Objective {
    fn better(&self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Objective::Minimize => candidate < incumbent,
            Objective::Maximize => candidate > incumbent,
        }
    }
}

/// Knobs for the local search. Deterministic given `seed`.
#[derive(Clone, Debug)]
pub struct OptimConfig {
    /// Number of random restarts (seeded candidates come on top).
    pub restarts: usize,
    /// Proposal budget per candidate.
    pub max_iters: usize,
    /// Search stops when the step size falls below this.
    pub step_tol: f64,
    /// Improvements below this do not trigger outcome escalation.
    pub value_tol: f64,
    pub seed: u64,
    /// Initial outcome count; defaults to min(r², 2r+2) for rank/dimension r.
    pub outcomes: Option<usize>,
    /// Escalation cap on the outcome count; defaults to the initial count + 2.
    pub outcome_cap: Option<usize>,
}

impl Default for OptimConfig {
    fn default() -> Self {
        OptimConfig {
            restarts: 32,
            max_iters: 400,
            step_tol: 1e-7,
            value_tol: 1e-9,
            seed: 1,
            outcomes: None,
            outcome_cap: None,
        }
    }
}

impl OptimConfig {
    pub fn with_seed(seed: u64) -> Self {
        OptimConfig {
            seed,
            ..OptimConfig::default()
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    fn default_outcomes(&self, r: usize) -> usize {
        self.outcomes.unwrap_or_else(|| (r * r).min(2 * r + 2).max(r))
    }
}

/// Where the winning candidate came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Eigendecomposition,
    PoolPovm(&'static str),
    Seed(usize),
    Random(usize),
    Escalated(usize),
}

/// Result of one optimization run.
#[derive(Clone, Debug)]
pub struct OptimResult {
    pub value: f64,
    /// The achieving isometry (n rows, r columns with orthonormal columns).
    pub isometry: CMatrix,
    pub origin: Origin,
    /// Best value seen per candidate, in deterministic evaluation order.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub escalated: bool,
    pub outcome_count: usize,
}

/// Objective decomposable as base + Σ_j row(j, U[j,:]).
trait RowObjective {
    fn base(&self) -> f64;
    fn row_value(&self, row: &[C64]) -> f64;
    fn total(&self, u: &CMatrix) -> f64 {
        self.base() + (0..u.rows()).map(|j| self.row_value(u.row(j))).sum::<f64>()
    }
}

const FAILS_PER_HALVING: usize = 4;
const INITIAL_STEP: f64 = 0.5;

/// 2×2 special unitary from a random traceless anti-Hermitian generator of
/// magnitude `step`: exp([[ia, z], [-z̄, -ia]]).
fn random_rotation(rng: &mut ChaCha12Rng, step: f64) -> [[C64; 2]; 2] {
    let a = gaussian(rng) * step;
    let z = complex_gaussian(rng) * C64::new(step, 0.0);
    let phi = (a * a + z.norm_sqr()).sqrt();
    let (cphi, sinc) = if phi < 1e-300 {
        (1.0, 1.0)
    } else {
        (phi.cos(), phi.sin() / phi)
    };
    [
        [C64::new(cphi, a * sinc), z * sinc],
        [-z.conj() * sinc, C64::new(cphi, -a * sinc)],
    ]
}

fn refine(
    obj: &dyn RowObjective,
    start: &CMatrix,
    direction: Objective,
    rng: &mut ChaCha12Rng,
    cfg: &OptimConfig,
) -> (CMatrix, f64, bool) {
    let n = start.rows();
    let mut u = start.clone();
    let mut contrib: Vec<f64> = (0..n).map(|j| obj.row_value(u.row(j))).collect();
    let mut value = obj.base() + contrib.iter().sum::<f64>();
    if n < 2 {
        return (u, value, true);
    }
    let mut step = INITIAL_STEP;
    let mut fails = 0usize;
    let mut converged = false;
    let r = u.cols();
    for _ in 0..cfg.max_iters {
        if step < cfg.step_tol {
            converged = true;
            break;
        }
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let g = random_rotation(rng, step);
        let mut row_i = vec![ZERO; r];
        let mut row_j = vec![ZERO; r];
        for k in 0..r {
            let ui = u[(i, k)];
            let uj = u[(j, k)];
            row_i[k] = g[0][0] * ui + g[0][1] * uj;
            row_j[k] = g[1][0] * ui + g[1][1] * uj;
        }
        let ci = obj.row_value(&row_i);
        let cj = obj.row_value(&row_j);
        let cand = value - contrib[i] - contrib[j] + ci + cj;
        if direction.better(cand, value) {
            for k in 0..r {
                u[(i, k)] = row_i[k];
                u[(j, k)] = row_j[k];
            }
            contrib[i] = ci;
            contrib[j] = cj;
            value = cand;
            fails = 0;
            step = (step * 1.25).min(0.8);
        } else {
            fails += 1;
            if fails >= FAILS_PER_HALVING {
                step *= 0.5;
                fails = 0;
            }
        }
    }
    // full re-evaluation guards against incremental drift
    let value = obj.total(&u);
    (u, value, converged)
}

/// Haar isometry with n rows and r orthonormal columns.
fn random_isometry(n: usize, r: usize, rng: &mut ChaCha12Rng) -> CMatrix {
    let g = CMatrix::from_fn(n, r, |_, _| complex_gaussian(rng));
    orthonormalize_columns(&g)
}

/// [I_r; 0] padded to n rows: the eigendecomposition candidate.
fn trivial_isometry(n: usize, r: usize) -> CMatrix {
    CMatrix::from_fn(n, r, |i, j| if i == j { crate::linalg::ONE } else { ZERO })
}

fn pad_rows(u: &CMatrix, n: usize) -> CMatrix {
    CMatrix::from_fn(n, u.cols(), |i, j| if i < u.rows() { u[(i, j)] } else { ZERO })
}

struct Candidate {
    origin: Origin,
    iso: CMatrix,
}

/// Shared driver: refine every candidate, then escalate the outcome count
/// while it pays more than `value_tol`.
fn drive(
    obj: &dyn RowObjective,
    direction: Objective,
    mut candidates: Vec<Candidate>,
    n0: usize,
    r: usize,
    cfg: &OptimConfig,
) -> OptimResult {
    for k in 0..cfg.restarts {
        let mut rng = stream(cfg.seed, StreamKind::Optim, 1_000_000 + k as u64);
        candidates.push(Candidate {
            origin: Origin::Random(k),
            iso: random_isometry(n0, r, &mut rng),
        });
    }
    let mut best: Option<(f64, CMatrix, Origin, bool)> = None;
    let mut trace = Vec::with_capacity(candidates.len());
    for (k, cand) in candidates.into_iter().enumerate() {
        let mut rng = stream(cfg.seed, StreamKind::Optim, 2_000_000 + k as u64);
        let (iso, value, conv) = refine(obj, &cand.iso, direction, &mut rng, cfg);
        trace.push(value);
        let take = match &best {
            None => true,
            Some((v, _, _, _)) => direction.better(value, *v),
        };
        if take {
            best = Some((value, iso, cand.origin, conv));
        }
    }
    let (mut value, mut iso, mut origin, mut converged) =
        best.expect("at least one candidate");

    // outcome-count escalation
    let cap = cfg.outcome_cap.unwrap_or(n0 + 2).max(n0);
    let mut n = n0.max(iso.rows());
    let mut escalated = false;
    while n < cap {
        n += 1;
        let mut cands = vec![Candidate {
            origin: Origin::Escalated(n),
            iso: pad_rows(&iso, n.max(iso.rows() + 1)),
        }];
        for k in 0..cfg.restarts.max(1) / 2 {
            let mut rng = stream(cfg.seed, StreamKind::Optim, 3_000_000 + (n * 1000 + k) as u64);
            cands.push(Candidate {
                origin: Origin::Escalated(n),
                iso: random_isometry(n, r, &mut rng),
            });
        }
        let mut improved = false;
        for (k, cand) in cands.into_iter().enumerate() {
            let mut rng =
                stream(cfg.seed, StreamKind::Optim, 4_000_000 + (n * 1000 + k) as u64);
            let (u, v, conv) = refine(obj, &cand.iso, direction, &mut rng, cfg);
            trace.push(v);
            if direction.better(v, value)
                && (v - value).abs() > cfg.value_tol
            {
                value = v;
                iso = u;
                origin = cand.origin.clone();
                converged = conv;
                improved = true;
                escalated = true;
            }
        }
        if !improved {
            break;
        }
    }

    OptimResult {
        value,
        outcome_count: iso.rows(),
        isometry: iso,
        origin,
        trace,
        converged,
        escalated,
    }
}

// ---------------------------------------------------------------------------
// Decomposition optimization
// ---------------------------------------------------------------------------

struct DecompObjective<'a> {
    /// columns √λ_i v_i of the eigendecomposition, each of length N
    w: Vec<Vec<C64>>,
    score: &'a dyn Fn(&[C64]) -> f64,
}

impl DecompObjective<'_> {
    fn member(&self, row: &[C64]) -> (f64, Vec<C64>) {
        let dim = self.w[0].len();
        let mut member = vec![ZERO; dim];
        for (i, wi) in self.w.iter().enumerate() {
            let u = row[i];
            if u == ZERO {
                continue;
            }
            for (slot, &x) in member.iter_mut().zip(wi) {
                *slot += u * x;
            }
        }
        let p: f64 = member.iter().map(|z| z.norm_sqr()).sum();
        (p, member)
    }
}

impl RowObjective for DecompObjective<'_> {
    fn base(&self) -> f64 {
        0.0
    }

    fn row_value(&self, row: &[C64]) -> f64 {
        let (p, mut member) = self.member(row);
        if p < 1e-14 {
            return 0.0;
        }
        let inv = 1.0 / p.sqrt();
        for z in &mut member {
            *z *= inv;
        }
        p * (self.score)(&member)
    }
}

/// Outcome of [`optimize_decomposition`].
pub struct DecompositionOutcome {
    pub result: OptimResult,
    pub ensemble: Ensemble,
}

/// Converts an ensemble into the isometry over ρ's eigendecomposition that
/// realizes it: u[j][i] = ⟨e_i|√p_j φ_j⟩ / √λ_i, then re-orthonormalized.
fn ensemble_to_isometry(
    ens: &Ensemble,
    eigvals: &[f64],
    eigvecs: &[Vec<C64>],
) -> CMatrix {
    let n = ens.len();
    let r = eigvals.len();
    let mut u = CMatrix::zeros(n, r);
    for j in 0..n {
        let (p, phi) = ens.member(j);
        let sp = p.sqrt();
        for i in 0..r {
            let overlap = crate::linalg::inner(&eigvecs[i], phi);
            u[(j, i)] = overlap * sp / eigvals[i].sqrt();
        }
    }
    orthonormalize_columns(&u)
}

/// Extremizes Σ p_j · score(|φ_j⟩) over the n-element pure-state
/// decompositions of `rho`. The candidate pool always contains the
/// eigendecomposition; caller seeds come on top of it.
pub fn optimize_decomposition(
    rho: &CMatrix,
    dims: &DimList,
    objective: Objective,
    score: &dyn Fn(&[C64]) -> f64,
    seeds: &[Ensemble],
    cfg: &OptimConfig,
) -> Result<DecompositionOutcome> {
    if rho.rows() != dims.total() {
        return Err(Error::DimMismatch("optimize_decomposition input".into()));
    }
    let eig = crate::linalg::eig_hermitian(rho)?;
    let kept: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > 1e-12)
        .collect();
    let r = kept.len().max(1);
    let n0 = cfg.default_outcomes(r).max(r);
    if let Some(n) = cfg.outcomes {
        if n < r {
            return Err(Error::InvalidArg(format!(
                "outcome count {n} below rank {r}"
            )));
        }
    }
    let eigvals: Vec<f64> = kept.iter().map(|&k| eig.values[k].max(0.0)).collect();
    let eigvecs: Vec<Vec<C64>> = kept.iter().map(|&k| eig.vectors.col(k)).collect();
    let w: Vec<Vec<C64>> = eigvals
        .iter()
        .zip(&eigvecs)
        .map(|(&lam, v)| {
            let s = lam.sqrt();
            v.iter().map(|z| z * s).collect()
        })
        .collect();
    let obj = DecompObjective { w, score };

    let mut candidates = vec![Candidate {
        origin: Origin::Eigendecomposition,
        iso: trivial_isometry(n0, r),
    }];
    for (k, ens) in seeds.iter().enumerate() {
        let iso = ensemble_to_isometry(ens, &eigvals, &eigvecs);
        candidates.push(Candidate {
            origin: Origin::Seed(k),
            iso: pad_rows(&iso, iso.rows().max(r)),
        });
    }

    let result = drive(&obj, objective, candidates, n0, r, cfg);

    // materialize the ensemble from the winning isometry
    let mut weights = Vec::new();
    let mut members = Vec::new();
    for j in 0..result.isometry.rows() {
        let (p, mut member) = obj.member(result.isometry.row(j));
        if p < 1e-14 {
            continue;
        }
        let inv = 1.0 / p.sqrt();
        for z in &mut member {
            *z *= inv;
        }
        weights.push(p);
        members.push(member);
    }
    let total: f64 = weights.iter().sum();
    for wgt in &mut weights {
        *wgt /= total;
    }
    let ensemble = Ensemble::new(weights, members, dims.clone())?;
    Ok(DecompositionOutcome { result, ensemble })
}

// ---------------------------------------------------------------------------
// POVM optimization
// ---------------------------------------------------------------------------

struct PovmObjective {
    /// bipartite state on target ⊗ measured
    sigma: CMatrix,
    d_a: usize,
    d_b: usize,
    s_a: f64,
}

impl PovmObjective {
    /// (p, renormalized conditional ρ_A) for the rank-1 element built from an
    /// isometry row: m[b] = conj(row[b]).
    fn conditional(&self, row: &[C64]) -> (f64, CMatrix) {
        let (da, db) = (self.d_a, self.d_b);
        let mut cond = CMatrix::zeros(da, da);
        for a in 0..da {
            for ap in 0..da {
                let mut acc = ZERO;
                for b in 0..db {
                    // u[b] = conj(row[b]); acc += u[b]·conj(u[b'])·σ[(a,b'),(ap,b)]
                    for bp in 0..db {
                        acc += row[b].conj() * row[bp] * self.sigma[(a * db + bp, ap * db + b)];
                    }
                }
                cond[(a, ap)] = acc;
            }
        }
        let p = cond.trace().re;
        if p > 0.0 {
            (p, cond.scale_re(1.0 / p))
        } else {
            (p, cond)
        }
    }
}

impl RowObjective for PovmObjective {
    fn base(&self) -> f64 {
        self.s_a
    }

    // value = S(ρ_A) − Σ_x p_x S(ρ_A^x)
    fn row_value(&self, row: &[C64]) -> f64 {
        let (p, cond) = self.conditional(row);
        if p < 1e-14 {
            return 0.0;
        }
        -p * entropy_unchecked(&cond)
    }
}

/// Entropy of a density matrix assumed valid (bits).
fn entropy_unchecked(rho: &CMatrix) -> f64 {
    let eig = crate::linalg::eig_hermitian(rho).expect("conditional state is Hermitian");
    eig.values
        .iter()
        .filter(|&&lam| lam > 0.0)
        .map(|&lam| -lam * lam.log2())
        .sum()
}

/// Outcome of [`optimize_povm`].
pub struct PovmOutcome {
    pub result: OptimResult,
    pub povm: Povm,
}

fn povm_to_isometry(povm: &Povm) -> Result<CMatrix> {
    let vectors = povm.vectors()?;
    let n = vectors.len();
    let d = povm.dim();
    let u = CMatrix::from_fn(n, d, |x, k| vectors[x][k].conj());
    Ok(orthonormalize_columns(&u))
}

fn isometry_to_povm(u: &CMatrix) -> Result<Povm> {
    let w = orthonormalize_columns(u);
    let vectors: Vec<Vec<C64>> = (0..w.rows())
        .map(|x| (0..w.cols()).map(|k| w[(x, k)].conj()).collect())
        .collect();
    Povm::from_vectors(vectors)
}

/// Extremizes S(ρ_A) − Σ_x p_x S(ρ_A^x) over rank-1 POVMs on `measured`,
/// where A is the `target` subsystem. The pool always contains the
/// computational, Fourier, ρ_measured-eigenbasis, and mixed
/// eigen/Fourier-pair measurements; caller seeds come on top.
pub fn optimize_povm(
    state: &MultipartiteState,
    measured: usize,
    target: usize,
    objective: Objective,
    seeds: &[Povm],
    cfg: &OptimConfig,
) -> Result<PovmOutcome> {
    let dims = state.dims();
    if measured >= dims.len() || target >= dims.len() || measured == target {
        return Err(Error::InvalidArg("measured/target subsystems".into()));
    }
    // reduce to target ⊗ measured once; everything else is traced out
    let keep = [target.min(measured), target.max(measured)];
    let mut sigma = state.reduced_density(&keep)?;
    let mut sub_dims = dims.select(&keep);
    if target > measured {
        let (swapped, d) = crate::linalg::permute_subsystems(&sigma, &sub_dims, &[1, 0])?;
        sigma = swapped;
        sub_dims = d;
    }
    let (d_a, d_b) = (sub_dims.dim(0), sub_dims.dim(1));
    let rho_a = crate::linalg::partial_trace(&sigma, &sub_dims, &[0])?;
    let rho_b = crate::linalg::partial_trace(&sigma, &sub_dims, &[1])?;
    let s_a = entropy_unchecked(&rho_a);
    let obj = PovmObjective {
        sigma,
        d_a,
        d_b,
        s_a,
    };

    let n0 = cfg.default_outcomes(d_b).max(d_b);
    if let Some(n) = cfg.outcomes {
        if n < d_b {
            return Err(Error::InvalidArg(format!(
                "outcome count {n} below measured dimension {d_b}"
            )));
        }
    }
    let eig_b = crate::linalg::eig_hermitian(&rho_b)?;
    let eigbasis: Vec<Vec<C64>> = (0..d_b).map(|k| eig_b.vectors.col(k)).collect();
    let mut candidates = vec![
        Candidate {
            origin: Origin::PoolPovm("computational"),
            iso: povm_to_isometry(&Povm::computational(d_b))?,
        },
        Candidate {
            origin: Origin::PoolPovm("fourier"),
            iso: povm_to_isometry(&Povm::fourier(d_b))?,
        },
        Candidate {
            origin: Origin::PoolPovm("eigenbasis"),
            iso: povm_to_isometry(&Povm::projective(&eigbasis)?)?,
        },
        Candidate {
            origin: Origin::PoolPovm("mixed-eigen-fourier"),
            iso: povm_to_isometry(&crate::states::thm1_mixed_povm(&rho_b)?)?,
        },
    ];
    for (k, povm) in seeds.iter().enumerate() {
        candidates.push(Candidate {
            origin: Origin::Seed(k),
            iso: povm_to_isometry(povm)?,
        });
    }

    let result = drive(&obj, objective, candidates, n0, d_b, cfg);
    let povm = isometry_to_povm(&result.isometry)?;
    Ok(PovmOutcome { result, povm })
}

// ---------------------------------------------------------------------------
// Product POVM optimization
// ---------------------------------------------------------------------------

/// Outcome of [`optimize_product_povm`].
pub struct ProductPovmOutcome {
    pub result: OptimResult,
    pub povm_first: Povm,
    pub povm_second: Povm,
    /// value contribution table, x-major, for diagnostics
    pub value: f64,
}

struct ProductObjective {
    /// tripartite state on target ⊗ first ⊗ second
    rho: CMatrix,
    d_a: usize,
    d_c: usize,
    d_d: usize,
    s_a: f64,
}

impl ProductObjective {
    fn conditional(&self, m: &[C64], nvec: &[C64]) -> (f64, CMatrix) {
        let (da, dc, dd) = (self.d_a, self.d_c, self.d_d);
        let dk = dc * dd;
        // u = m ⊗ n on the measured pair (already conjugated rows)
        let mut u = vec![ZERO; dk];
        for c in 0..dc {
            for d in 0..dd {
                u[c * dd + d] = m[c].conj() * nvec[d].conj();
            }
        }
        let mut cond = CMatrix::zeros(da, da);
        for a in 0..da {
            for ap in 0..da {
                let mut acc = ZERO;
                for k in 0..dk {
                    if u[k] == ZERO {
                        continue;
                    }
                    for kp in 0..dk {
                        acc += u[k] * u[kp].conj() * self.rho[(a * dk + kp, ap * dk + k)];
                    }
                }
                cond[(a, ap)] = acc;
            }
        }
        let p = cond.trace().re;
        if p > 0.0 {
            (p, cond.scale_re(1.0 / p))
        } else {
            (p, cond)
        }
    }

    /// avg = Σ_xy p_xy S(ρ_A^xy) from full tables.
    fn average(&self, wc: &CMatrix, wd: &CMatrix) -> f64 {
        let mut acc = 0.0;
        for x in 0..wc.rows() {
            for y in 0..wd.rows() {
                let (p, cond) = self.conditional(wc.row(x), wd.row(y));
                if p >= 1e-14 {
                    acc += p * entropy_unchecked(&cond);
                }
            }
        }
        acc
    }
}

/// Extremizes S(ρ_A) − Σ_xy p_xy S(ρ_A^xy) over product rank-1 POVMs
/// {M_x ⊗ N_y} on the `measured` pair of subsystems.
pub fn optimize_product_povm(
    state: &MultipartiteState,
    measured: (usize, usize),
    target: usize,
    objective: Objective,
    seeds: &[(Povm, Povm)],
    cfg: &OptimConfig,
) -> Result<ProductPovmOutcome> {
    let dims = state.dims();
    let (mc, md) = measured;
    if mc == md || mc >= dims.len() || md >= dims.len() || target >= dims.len()
        || target == mc || target == md
    {
        return Err(Error::InvalidArg("measured/target subsystems".into()));
    }
    // reduce to (target, first measured, second measured) in that order
    let order = [target, mc, md];
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    let reduced = state.reduced_density(&sorted)?;
    let red_dims = dims.select(&sorted);
    let perm: Vec<usize> = order
        .iter()
        .map(|&s| sorted.iter().position(|&t| t == s).unwrap())
        .collect();
    let (rho, tdims) = crate::linalg::permute_subsystems(&reduced, &red_dims, &perm)?;
    let (d_a, d_c, d_d) = (tdims.dim(0), tdims.dim(1), tdims.dim(2));
    let rho_a = crate::linalg::partial_trace(&rho, &tdims, &[0])?;
    let s_a = entropy_unchecked(&rho_a);
    let obj = ProductObjective {
        rho,
        d_a,
        d_c,
        d_d,
        s_a,
    };

    let n_c = cfg.default_outcomes(d_c).max(d_c);
    let n_d = cfg.default_outcomes(d_d).max(d_d);
    let rho_c = crate::linalg::partial_trace(&obj.rho, &tdims, &[1])?;
    let rho_d = crate::linalg::partial_trace(&obj.rho, &tdims, &[2])?;

    let pool_for = |d: usize, rho_m: &CMatrix| -> Result<Vec<(&'static str, CMatrix)>> {
        let eig = crate::linalg::eig_hermitian(rho_m)?;
        let basis: Vec<Vec<C64>> = (0..d).map(|k| eig.vectors.col(k)).collect();
        Ok(vec![
            ("computational", povm_to_isometry(&Povm::computational(d))?),
            ("fourier", povm_to_isometry(&Povm::fourier(d))?),
            ("eigenbasis", povm_to_isometry(&Povm::projective(&basis)?)?),
            (
                "mixed-eigen-fourier",
                povm_to_isometry(&crate::states::thm1_mixed_povm(rho_m)?)?,
            ),
        ])
    };
    let pool_c = pool_for(d_c, &rho_c)?;
    let pool_d = pool_for(d_d, &rho_d)?;

    // candidate pairs: matching pool entries, caller seeds, random pairs
    let mut candidates: Vec<(Origin, CMatrix, CMatrix)> = Vec::new();
    for (name, wc) in &pool_c {
        for (name_d, wd) in &pool_d {
            if name == name_d {
                candidates.push((Origin::PoolPovm(name), wc.clone(), wd.clone()));
            }
        }
    }
    for (k, (pc, pd)) in seeds.iter().enumerate() {
        candidates.push((
            Origin::Seed(k),
            povm_to_isometry(pc)?,
            povm_to_isometry(pd)?,
        ));
    }
    for k in 0..cfg.restarts {
        let mut rng = stream(cfg.seed, StreamKind::Optim, 5_000_000 + k as u64);
        let wc = random_isometry(n_c, d_c, &mut rng);
        let wd = random_isometry(n_d, d_d, &mut rng);
        candidates.push((Origin::Random(k), wc, wd));
    }

    let mut best: Option<(f64, CMatrix, CMatrix, Origin, bool)> = None;
    let mut trace = Vec::new();
    for (k, (origin, wc0, wd0)) in candidates.into_iter().enumerate() {
        let mut rng = stream(cfg.seed, StreamKind::Optim, 6_000_000 + k as u64);
        let (wc, wd, value, conv) =
            refine_product(&obj, wc0, wd0, objective, &mut rng, cfg);
        trace.push(value);
        let take = match &best {
            None => true,
            Some((v, ..)) => objective.better(value, *v),
        };
        if take {
            best = Some((value, wc, wd, origin, conv));
        }
    }
    let (value, wc, wd, origin, converged) = best.expect("candidates nonempty");
    let povm_first = isometry_to_povm(&wc)?;
    let povm_second = isometry_to_povm(&wd)?;
    let outcome_count = wc.rows() * wd.rows();
    Ok(ProductPovmOutcome {
        result: OptimResult {
            value,
            isometry: wc,
            origin,
            trace,
            converged,
            escalated: false,
            outcome_count,
        },
        povm_first,
        povm_second,
        value,
    })
}

fn refine_product(
    obj: &ProductObjective,
    wc0: CMatrix,
    wd0: CMatrix,
    direction: Objective,
    rng: &mut ChaCha12Rng,
    cfg: &OptimConfig,
) -> (CMatrix, CMatrix, f64, bool) {
    let mut wc = wc0;
    let mut wd = wd0;
    let (nc, nd) = (wc.rows(), wd.rows());
    // contribution table: t[x][y] = -p_xy S(ρ^xy) so value = s_a + Σ t
    let mut table = vec![vec![0.0f64; nd]; nc];
    for (x, row) in table.iter_mut().enumerate() {
        for (y, slot) in row.iter_mut().enumerate() {
            let (p, cond) = obj.conditional(wc.row(x), wd.row(y));
            *slot = if p < 1e-14 { 0.0 } else { -p * entropy_unchecked(&cond) };
        }
    }
    let mut value = obj.s_a + table.iter().flatten().sum::<f64>();
    let mut step = INITIAL_STEP;
    let mut fails = 0usize;
    let mut converged = false;
    for it in 0..cfg.max_iters {
        if step < cfg.step_tol {
            converged = true;
            break;
        }
        // alternate sides deterministically, but skip sides with one row
        let side_c = if nc < 2 {
            false
        } else if nd < 2 {
            true
        } else {
            it % 2 == 0
        };
        if !side_c && nd < 2 {
            converged = true;
            break;
        }
        let rows = if side_c { nc } else { nd };
        let i = rng.gen_range(0..rows);
        let mut j = rng.gen_range(0..rows - 1);
        if j >= i {
            j += 1;
        }
        let g = random_rotation(rng, step);
        let w = if side_c { &wc } else { &wd };
        let r = w.cols();
        let mut row_i = vec![ZERO; r];
        let mut row_j = vec![ZERO; r];
        for k in 0..r {
            let ui = w[(i, k)];
            let uj = w[(j, k)];
            row_i[k] = g[0][0] * ui + g[0][1] * uj;
            row_j[k] = g[1][0] * ui + g[1][1] * uj;
        }
        // recompute affected table entries
        let mut delta = 0.0;
        let mut new_i = vec![0.0f64; if side_c { nd } else { nc }];
        let mut new_j = vec![0.0f64; if side_c { nd } else { nc }];
        if side_c {
            for y in 0..nd {
                let (pi, ci) = obj.conditional(&row_i, wd.row(y));
                new_i[y] = if pi < 1e-14 { 0.0 } else { -pi * entropy_unchecked(&ci) };
                let (pj, cj) = obj.conditional(&row_j, wd.row(y));
                new_j[y] = if pj < 1e-14 { 0.0 } else { -pj * entropy_unchecked(&cj) };
                delta += new_i[y] - table[i][y] + new_j[y] - table[j][y];
            }
        } else {
            for x in 0..nc {
                let (pi, ci) = obj.conditional(wc.row(x), &row_i);
                new_i[x] = if pi < 1e-14 { 0.0 } else { -pi * entropy_unchecked(&ci) };
                let (pj, cj) = obj.conditional(wc.row(x), &row_j);
                new_j[x] = if pj < 1e-14 { 0.0 } else { -pj * entropy_unchecked(&cj) };
                delta += new_i[x] - table[x][i] + new_j[x] - table[x][j];
            }
        }
        let cand = value + delta;
        if direction.better(cand, value) {
            let w = if side_c { &mut wc } else { &mut wd };
            for k in 0..r {
                w[(i, k)] = row_i[k];
                w[(j, k)] = row_j[k];
            }
            if side_c {
                table[i].copy_from_slice(&new_i);
                table[j].copy_from_slice(&new_j);
            } else {
                for x in 0..nc {
                    table[x][i] = new_i[x];
                    table[x][j] = new_j[x];
                }
            }
            value = cand;
            fails = 0;
            step = (step * 1.25).min(0.8);
        } else {
            fails += 1;
            if fails >= FAILS_PER_HALVING {
                step *= 0.5;
                fails = 0;
            }
        }
    }
    let value = obj.s_a - obj.average(&wc, &wd);
    (wc, wd, value, converged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace, DimList};
    use crate::states::{ghz, random_mixed, random_pure};

    fn entropy_score(dims: DimList, keep: Vec<usize>) -> impl Fn(&[C64]) -> f64 {
        move |phi: &[C64]| {
            let rho = crate::linalg::outer(phi, phi);
            let red = partial_trace(&rho, &dims, &keep).unwrap();
            entropy_unchecked(&red)
        }
    }

    #[test]
    fn rank1_input_returns_its_score() {
        let dims = DimList::new(vec![2, 2]).unwrap();
        let st = random_pure(&dims, 5).unwrap();
        let rho = st.density();
        let score = entropy_score(dims.clone(), vec![0]);
        let cfg = OptimConfig {
            restarts: 2,
            max_iters: 50,
            ..OptimConfig::with_seed(3)
        };
        let out =
            optimize_decomposition(&rho, &dims, Objective::Minimize, &score, &[], &cfg).unwrap();
        let direct = score(st.vector().unwrap());
        assert!((out.result.value - direct).abs() < 1e-10);
    }

    #[test]
    fn decomposition_reconstructs_rho() {
        let dims = DimList::new(vec![2, 2]).unwrap();
        let st = random_mixed(&dims, 3, 7).unwrap();
        let rho = st.density();
        let score = entropy_score(dims.clone(), vec![0]);
        let cfg = OptimConfig {
            restarts: 4,
            max_iters: 120,
            ..OptimConfig::with_seed(11)
        };
        let out =
            optimize_decomposition(&rho, &dims, Objective::Maximize, &score, &[], &cfg).unwrap();
        let avg = out.ensemble.average_density();
        assert!(avg.sub(&rho).max_abs() < 1e-8, "reconstruction residual");
    }

    #[test]
    fn determinism_same_config_same_result() {
        let dims = DimList::new(vec![2, 2]).unwrap();
        let st = random_mixed(&dims, 2, 9).unwrap();
        let rho = st.density();
        let score = entropy_score(dims.clone(), vec![0]);
        let cfg = OptimConfig {
            restarts: 3,
            max_iters: 80,
            ..OptimConfig::with_seed(21)
        };
        let a = optimize_decomposition(&rho, &dims, Objective::Minimize, &score, &[], &cfg)
            .unwrap();
        let b = optimize_decomposition(&rho, &dims, Objective::Minimize, &score, &[], &cfg)
            .unwrap();
        assert_eq!(a.result.value, b.result.value);
        assert_eq!(a.result.trace, b.result.trace);
        assert!(a
            .result
            .isometry
            .sub(&b.result.isometry)
            .max_abs()
            == 0.0);
    }

    #[test]
    fn monotone_in_restarts() {
        let dims = DimList::new(vec![2, 2]).unwrap();
        let st = random_mixed(&dims, 3, 13).unwrap();
        let rho = st.density();
        let score = entropy_score(dims.clone(), vec![0]);
        let mut last = f64::INFINITY;
        for restarts in [1usize, 4, 10] {
            let cfg = OptimConfig {
                restarts,
                max_iters: 150,
                outcome_cap: Some(4),
                ..OptimConfig::with_seed(2)
            };
            let out =
                optimize_decomposition(&rho, &dims, Objective::Minimize, &score, &[], &cfg)
                    .unwrap();
            assert!(out.result.value <= last + 1e-12);
            last = out.result.value;
        }
    }

    #[test]
    fn povm_on_ghz_reaches_zero_with_fourier() {
        let g = ghz(3).unwrap();
        let cfg = OptimConfig {
            restarts: 2,
            max_iters: 60,
            ..OptimConfig::with_seed(5)
        };
        let out = optimize_povm(&g, 1, 0, Objective::Minimize, &[], &cfg).unwrap();
        assert!(out.result.value.abs() < 1e-9, "value {}", out.result.value);
        // POVM certificate sums to identity
        let mut sum = CMatrix::zeros(2, 2);
        for e in out.povm.elements() {
            sum = sum.add(e);
        }
        assert!(sum.sub(&CMatrix::identity(2)).max_abs() < 1e-9);
    }

    #[test]
    fn povm_on_product_state_is_zero_both_ways() {
        let dims = DimList::new(vec![2, 2, 2]).unwrap();
        let a = random_pure(&DimList::new(vec![2]).unwrap(), 3).unwrap();
        let bc = random_pure(&DimList::new(vec![2, 2]).unwrap(), 4).unwrap();
        let v = crate::linalg::tensor_vec(a.vector().unwrap(), bc.vector().unwrap());
        let st = crate::states::MultipartiteState::pure(v, dims).unwrap();
        let cfg = OptimConfig {
            restarts: 2,
            max_iters: 60,
            ..OptimConfig::with_seed(5)
        };
        for dir in [Objective::Minimize, Objective::Maximize] {
            let out = optimize_povm(&st, 1, 0, dir, &[], &cfg).unwrap();
            assert!(out.result.value.abs() < 1e-9);
        }
    }

    #[test]
    fn product_povm_on_product_state_is_zero() {
        // |a⟩ ⊗ |cd⟩: measuring CD cannot change A
        let a = random_pure(&DimList::new(vec![2]).unwrap(), 6).unwrap();
        let cd = random_pure(&DimList::new(vec![2, 2]).unwrap(), 7).unwrap();
        let v = crate::linalg::tensor_vec(a.vector().unwrap(), cd.vector().unwrap());
        let st =
            crate::states::MultipartiteState::pure(v, DimList::new(vec![2, 2, 2]).unwrap())
                .unwrap();
        let cfg = OptimConfig {
            restarts: 2,
            max_iters: 40,
            ..OptimConfig::with_seed(8)
        };
        let out =
            optimize_product_povm(&st, (1, 2), 0, Objective::Minimize, &[], &cfg).unwrap();
        assert!(out.value.abs() < 1e-9);
    }

    #[test]
    fn product_povm_ghz4_localizes_one_bit() {
        // X⊗X measurements on CD of GHZ(4) leave AB in a Bell state, so the
        // maximum of Σ p S(ρ_A) is 1 and the minimum of S(ρ_A)−Σ is 0.
        let g = ghz(4).unwrap();
        let cfg = OptimConfig {
            restarts: 4,
            max_iters: 100,
            ..OptimConfig::with_seed(17)
        };
        let out =
            optimize_product_povm(&g, (2, 3), 0, Objective::Minimize, &[], &cfg).unwrap();
        assert!(out.value.abs() < 1e-9, "value {}", out.value);
    }
}
