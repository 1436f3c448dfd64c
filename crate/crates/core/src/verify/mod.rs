//! The inequality/identity harness: named checks, seeded random-state
//! sweeps with margin reporting, and the worked-example reproduction.
//!
//! Margin convention: `margin = rhs - lhs` for one-sided checks and
//! `margin = -|lhs - rhs|` for identities, so a check passes iff
//! `margin >= -tolerance` in both cases.

mod checks;

pub use checks::run_remark1;

use crate::error::{Error, Result};
use crate::linalg::DimList;
use crate::optim::OptimConfig;
use crate::rng::mix_seed;
use crate::states::{random_mixed, random_povm, random_product_mixture, random_pure, MultipartiteState, Povm};
use serde::Serialize;

/// Identifier of a named check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckId {
    KwIdentity,
    Lemma1Equiv,
    Subadd,
    LowerBound,
    UpperBound,
    OmegaIdentities,
    TripartitePolygamy,
    CurlyEProperty,
    ThreeTangle,
    ThreeQubitPolygamy,
    Rank2Bounds,
    CoaPolygamy,
    NqubitPolygamy,
    ZeroUeSeparable,
    MixedTradeoff,
    Cor2Tradeoff,
}

impl CheckId {
    pub const ALL: [CheckId; 16] = [
        CheckId::KwIdentity,
        CheckId::Lemma1Equiv,
        CheckId::Subadd,
        CheckId::LowerBound,
        CheckId::UpperBound,
        CheckId::OmegaIdentities,
        CheckId::TripartitePolygamy,
        CheckId::CurlyEProperty,
        CheckId::ThreeTangle,
        CheckId::ThreeQubitPolygamy,
        CheckId::Rank2Bounds,
        CheckId::CoaPolygamy,
        CheckId::NqubitPolygamy,
        CheckId::ZeroUeSeparable,
        CheckId::MixedTradeoff,
        CheckId::Cor2Tradeoff,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::KwIdentity => "kw_identity",
            CheckId::Lemma1Equiv => "lemma1_equiv",
            CheckId::Subadd => "subadd",
            CheckId::LowerBound => "lower_bound",
            CheckId::UpperBound => "upper_bound",
            CheckId::OmegaIdentities => "omega_identities",
            CheckId::TripartitePolygamy => "tripartite_polygamy",
            CheckId::CurlyEProperty => "curly_e_property",
            CheckId::ThreeTangle => "three_tangle",
            CheckId::ThreeQubitPolygamy => "three_qubit_polygamy",
            CheckId::Rank2Bounds => "rank2_bounds",
            CheckId::CoaPolygamy => "coa_polygamy",
            CheckId::NqubitPolygamy => "nqubit_polygamy",
            CheckId::ZeroUeSeparable => "zero_ue_separable",
            CheckId::MixedTradeoff => "mixed_tradeoff",
            CheckId::Cor2Tradeoff => "cor2_tradeoff",
        }
    }

    pub fn parse(s: &str) -> Option<CheckId> {
        CheckId::ALL.iter().copied().find(|c| c.as_str() == s)
    }

    /// Default tolerance for the check's margin.
    pub fn tolerance(&self) -> f64 {
        match self {
            CheckId::KwIdentity => 1e-10,
            CheckId::Lemma1Equiv => 2e-3,
            CheckId::Subadd => 1e-9,
            CheckId::LowerBound => 1e-9,
            CheckId::UpperBound => 1e-9,
            CheckId::OmegaIdentities => 1e-9,
            CheckId::TripartitePolygamy => 1e-3,
            CheckId::CurlyEProperty => 1e-12,
            CheckId::ThreeTangle => 1e-8,
            CheckId::ThreeQubitPolygamy => 1e-8,
            CheckId::Rank2Bounds => 2e-3,
            CheckId::CoaPolygamy => 1e-8,
            CheckId::NqubitPolygamy => 1e-8,
            CheckId::ZeroUeSeparable => 1e-9,
            CheckId::MixedTradeoff => 1e-9,
            CheckId::Cor2Tradeoff => 1e-9,
        }
    }

    pub fn classification(&self) -> Classification {
        match self {
            CheckId::KwIdentity
            | CheckId::OmegaIdentities
            | CheckId::CurlyEProperty
            | CheckId::ThreeTangle
            | CheckId::CoaPolygamy
            | CheckId::ZeroUeSeparable => Classification::Exact,
            CheckId::TripartitePolygamy
            | CheckId::ThreeQubitPolygamy
            | CheckId::NqubitPolygamy => Classification::Conservative,
            CheckId::Subadd
            | CheckId::UpperBound
            | CheckId::MixedTradeoff
            | CheckId::Cor2Tradeoff => Classification::ConservativeBySeeding,
            CheckId::Lemma1Equiv | CheckId::Rank2Bounds => Classification::OptimizerDependent,
            CheckId::LowerBound => Classification::Sanity,
        }
    }
}

/// How a numerical pass relates to the underlying mathematical statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Closed-form or algebraic-path computation; a failure is a bug.
    Exact,
    /// Estimate directions make a numerical pass imply the true inequality.
    Conservative,
    /// A seeded certificate realizes the proof's construction; a failure
    /// indicates an implementation bug, not optimizer weakness.
    ConservativeBySeeding,
    /// Both sides are optimizer estimates; tolerance absorbs the slack.
    OptimizerDependent,
    /// Guards an estimate against crossing a proven bound.
    Sanity,
}

/// Result of a single check on a single input.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub descriptor: String,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub classification: Classification,
    pub pass: bool,
    pub certificates: Vec<String>,
    pub detail: String,
}

impl CheckResult {
    pub(crate) fn build(
        id: CheckId,
        input: &CheckInput,
        lhs: f64,
        rhs: f64,
        margin: f64,
        tol: f64,
    ) -> CheckResult {
        CheckResult {
            check: id.as_str().to_string(),
            descriptor: input.descriptor.clone(),
            seed: input.seed,
            lhs,
            rhs,
            margin,
            tolerance: tol,
            classification: id.classification(),
            pass: margin >= -tol,
            certificates: Vec::new(),
            detail: String::new(),
        }
    }
}

/// Input to a check: the sampled state plus whatever companions the check
/// consumes (a second factor state, a sampled POVM).
#[derive(Clone, Debug)]
pub struct CheckInput {
    pub state: MultipartiteState,
    pub second: Option<MultipartiteState>,
    pub povm: Option<Povm>,
    pub descriptor: String,
    pub seed: u64,
}

impl CheckInput {
    pub fn from_state(state: MultipartiteState, descriptor: impl Into<String>, seed: u64) -> Self {
        CheckInput {
            state,
            second: None,
            povm: None,
            descriptor: descriptor.into(),
            seed,
        }
    }
}

/// Harness configuration; deterministic given `seed`.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub outcome_cap: Option<usize>,
    /// Overrides every per-check tolerance when set.
    pub tol_override: Option<f64>,
    /// Overrides the sampler's state dimensions where compatible.
    pub dims: Option<Vec<usize>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            restarts: 32,
            max_iters: 400,
            outcome_cap: None,
            tol_override: None,
            dims: None,
        }
    }
}

impl VerifyConfig {
    pub fn with_seed(seed: u64) -> Self {
        VerifyConfig {
            seed,
            ..VerifyConfig::default()
        }
    }

    pub(crate) fn optim(&self, seed: u64, restarts: usize) -> OptimConfig {
        OptimConfig {
            restarts,
            max_iters: self.max_iters,
            outcome_cap: self.outcome_cap,
            seed,
            ..OptimConfig::default()
        }
    }

    pub(crate) fn tolerance(&self, id: CheckId) -> f64 {
        self.tol_override.unwrap_or_else(|| id.tolerance())
    }

    fn dims_or(&self, default: &[usize]) -> Vec<usize> {
        self.dims.clone().unwrap_or_else(|| default.to_vec())
    }
}

/// Per-suite sweep report.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub samples: usize,
    pub seed: u64,
    pub results: Vec<CheckResult>,
    pub violations: usize,
    pub worst_margin: f64,
    pub runtime_ms: u64,
}

impl SuiteReport {
    fn from_results(suite: &str, samples: usize, seed: u64, results: Vec<CheckResult>) -> Self {
        let violations = results.iter().filter(|r| !r.pass).count();
        let worst_margin = results
            .iter()
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min);
        let worst_margin = if worst_margin.is_finite() { worst_margin } else { 0.0 };
        SuiteReport {
            suite: suite.to_string(),
            samples,
            seed,
            results,
            violations,
            worst_margin,
            runtime_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// All suite names, in canonical execution order.
pub fn suite_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = CheckId::ALL.iter().map(|c| c.as_str()).collect();
    names.push("remark1");
    names
}

/// Runs one named check on one input.
pub fn run_check(id: CheckId, input: &CheckInput, cfg: &VerifyConfig) -> Result<CheckResult> {
    checks::dispatch(id, input, cfg)
}

/// Deterministic sampler for the check's input distribution.
pub fn sample_input(id: CheckId, index: u64, cfg: &VerifyConfig) -> Result<CheckInput> {
    let seed = mix_seed(cfg.seed, index);
    let dl = |dims: &[usize]| DimList::new(dims.to_vec());
    match id {
        CheckId::KwIdentity => {
            let dims = dl(&cfg.dims_or(&[2, 2, 2]))?;
            let state = random_pure(&dims, seed)?;
            let d_b = dims.dim(1);
            let povm = random_povm(d_b, 2 * d_b, mix_seed(seed, 1))?;
            Ok(CheckInput {
                state,
                second: None,
                povm: Some(povm),
                descriptor: format!("haar-pure dims={dims} + rank1-povm[{}]", 2 * d_b),
                seed,
            })
        }
        CheckId::Lemma1Equiv => {
            let base: &[usize] = if index % 2 == 0 { &[2, 2] } else { &[3, 2] };
            let dims = dl(&cfg.dims_or(base))?;
            let rank = 2 + ((index / 2) % 2) as usize;
            let state = random_mixed(&dims, rank, seed)?;
            Ok(CheckInput::from_state(
                state,
                format!("random-mixed dims={dims} rank={rank}"),
                seed,
            ))
        }
        CheckId::Subadd => {
            let dims = dl(&[2, 2])?;
            let state = random_mixed(&dims, 2, seed)?;
            let second = random_mixed(&dims, 2, mix_seed(seed, 2))?;
            Ok(CheckInput {
                state,
                second: Some(second),
                povm: None,
                descriptor: "two random rank-2 two-qubit factors".to_string(),
                seed,
            })
        }
        CheckId::LowerBound | CheckId::UpperBound => {
            let cycle: [&[usize]; 3] = [&[2, 2], &[2, 3], &[3, 2]];
            let base = cycle[(index % 3) as usize];
            let dims = dl(&cfg.dims_or(base))?;
            let rank = 1 + (index % 3) as usize;
            let state = random_mixed(&dims, rank, seed)?;
            Ok(CheckInput::from_state(
                state,
                format!("random-mixed dims={dims} rank={rank}"),
                seed,
            ))
        }
        CheckId::OmegaIdentities => {
            let cycle: [&[usize]; 6] = [&[2, 2], &[2, 3], &[2, 4], &[3, 2], &[3, 3], &[3, 4]];
            let base = cycle[(index % 6) as usize];
            let dims = dl(&cfg.dims_or(base))?;
            let rank = dims.total().min(3);
            let state = random_mixed(&dims, rank, seed)?;
            Ok(CheckInput::from_state(
                state,
                format!("random-mixed dims={dims} rank={rank}"),
                seed,
            ))
        }
        CheckId::TripartitePolygamy => {
            let dims = dl(&cfg.dims_or(&[2, 2, 2]))?;
            if dims.len() != 3 {
                return Err(Error::DimMismatch("tripartite_polygamy needs 3 subsystems".into()));
            }
            let state = random_pure(&dims, seed)?;
            Ok(CheckInput::from_state(
                state,
                format!("haar-pure dims={dims}"),
                seed,
            ))
        }
        CheckId::CurlyEProperty => {
            // fixture input; the check runs the whole grid
            let dims = dl(&[2, 2])?;
            let state = crate::states::max_mixed(dims);
            Ok(CheckInput::from_state(state, "grid 201x201 quarter-disk", seed))
        }
        CheckId::ThreeTangle | CheckId::ThreeQubitPolygamy => {
            let dims = dl(&[2, 2, 2])?;
            let state = random_pure(&dims, seed)?;
            Ok(CheckInput::from_state(state, "haar-pure 3-qubit", seed))
        }
        CheckId::Rank2Bounds => {
            let dims = dl(&[2, 2])?;
            let rank = if index % 5 == 4 { 1 } else { 2 };
            let state = random_mixed(&dims, rank, seed)?;
            Ok(CheckInput::from_state(
                state,
                format!("random-mixed two-qubit rank={rank}"),
                seed,
            ))
        }
        CheckId::CoaPolygamy | CheckId::NqubitPolygamy => {
            let dims = dl(&cfg.dims_or(&[2, 2, 2, 2]))?;
            if dims.as_slice().iter().any(|&d| d != 2) {
                return Err(Error::DimMismatch("multi-qubit checks need qubit subsystems".into()));
            }
            let state = random_pure(&dims, seed)?;
            Ok(CheckInput::from_state(
                state,
                format!("haar-pure {}-qubit", dims.len()),
                seed,
            ))
        }
        CheckId::ZeroUeSeparable => {
            let dims = dl(&[2, 2])?;
            let state = random_product_mixture(&dims, 2, seed)?;
            Ok(CheckInput::from_state(
                state,
                "separable rank<=2 mixture of 2 product states",
                seed,
            ))
        }
        CheckId::MixedTradeoff | CheckId::Cor2Tradeoff => {
            let dims = dl(&cfg.dims_or(&[2, 2, 2]))?;
            if dims.len() != 3 {
                return Err(Error::DimMismatch("tradeoff checks need 3 subsystems".into()));
            }
            let state = random_mixed(&dims, 2, seed)?;
            Ok(CheckInput::from_state(
                state,
                format!("random-mixed dims={dims} rank=2"),
                seed,
            ))
        }
    }
}

/// Runs a named suite: `samples` sweeps of a check (or the worked-example
/// reproduction). Optimizer-dependent failures are re-run once with 4× the
/// restarts before being recorded as violations.
pub fn run_suite(suite: &str, samples: usize, cfg: &VerifyConfig) -> Result<SuiteReport> {
    if suite == "remark1" {
        return run_remark1(cfg);
    }
    let id = CheckId::parse(suite).ok_or_else(|| Error::UnknownSuite(suite.to_string()))?;
    let effective_samples = if id == CheckId::CurlyEProperty { 1 } else { samples };
    let mut results = Vec::with_capacity(effective_samples);
    for i in 0..effective_samples {
        let input = sample_input(id, i as u64, cfg)?;
        let mut result = run_check(id, &input, cfg)?;
        if !result.pass && id.classification() == Classification::OptimizerDependent {
            let escalated_cfg = VerifyConfig {
                restarts: cfg.restarts * 4,
                ..cfg.clone()
            };
            let mut retried = run_check(id, &input, &escalated_cfg)?;
            retried.detail = format!("escalated 4x restarts; {}", retried.detail);
            result = retried;
        }
        results.push(result);
    }
    Ok(SuiteReport::from_results(suite, effective_samples, cfg.seed, results))
}

/// Runs every suite in canonical order.
pub fn run_all(samples: usize, cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    suite_names()
        .into_iter()
        .map(|name| run_suite(name, samples, cfg))
        .collect()
}
