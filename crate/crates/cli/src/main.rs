//! CLI front end: state I/O, measure computation, suite execution, and the
//! worked-example reproduction, with reproducible seeds and JSON/CSV reports.
//!
//! Exit codes: 0 = success / all checks passed, 1 = inequality violation(s),
//! 2 = usage or input error.

mod cut;
mod report;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::time::Instant;

use unloc::linalg::DimList;
use unloc::measures::{self, BoundDirection, MeasureValue};
use unloc::optim::OptimConfig;
use unloc::rng::mix_seed;
use unloc::states::{self, json as state_json, MultipartiteState};
use unloc::verify::{self, SuiteReport, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "unloc",
    version,
    about = "Correlation and entanglement measures on small multipartite states, \
             with a verification harness for the identities relating them.",
    after_help = "Every flag can also be set through an UNLOC_-prefixed environment \
                  variable (e.g. UNLOC_SEED, UNLOC_RESTARTS, UNLOC_OUT)."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a measure of a state
    Compute(ComputeArgs),
    /// Run a verification suite (or `all`)
    Verify(VerifyArgs),
    /// Sample random states to a JSON file
    Sample(SampleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Base seed for all randomness
    #[arg(long, default_value_t = 1, env = "UNLOC_SEED")]
    seed: u64,
    /// Optimizer restarts
    #[arg(long, default_value_t = 32, env = "UNLOC_RESTARTS")]
    restarts: usize,
    /// Cap on optimizer POVM/decomposition cardinality
    #[arg(long, env = "UNLOC_POVM_CARD")]
    povm_card: Option<usize>,
    /// Tolerance override for verification margins
    #[arg(long, env = "UNLOC_TOL")]
    tol: Option<f64>,
    /// Report file path (stdout when omitted)
    #[arg(long, env = "UNLOC_OUT")]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value = "json", env = "UNLOC_FORMAT")]
    format: Format,
}

#[derive(Args)]
struct ComputeArgs {
    /// State file (JSON schema: {"kind","dims","data"})
    #[arg(long, conflicts_with = "builtin")]
    state: Option<PathBuf>,
    /// Builtin state: ghz2|ghz3|ghz4|w3|w4|bell|remark1|max_mixed:<dims>
    #[arg(long)]
    builtin: Option<String>,
    /// Measure name (see `unloc compute --help`):
    /// entropy|mutual_info|coherent_info|curly_e|concurrence|coa|eof|eoa|hv|
    /// ue|ue_product|localizable_ea|thm1_bound
    #[arg(long)]
    measure: String,
    /// Subsystem cut, letters index subsystems: "AB", "A|BC", "A|C|D"
    #[arg(long)]
    cut: Option<String>,
    /// Argument for curly_e
    #[arg(long)]
    x: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name (a check id, `remark1`, or `all`)
    #[arg(long)]
    suite: String,
    /// Samples per suite
    #[arg(long, default_value_t = 50, env = "UNLOC_SAMPLES")]
    samples: usize,
    /// Override sampler state dimensions, e.g. 3,3,3
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Embed wall-clock timings in the report (breaks byte-for-byte
    /// reproducibility of report files)
    #[arg(long, default_value_t = false)]
    emit_timing: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SampleArgs {
    /// Subsystem dimensions, e.g. 2,2,2
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    /// State kind
    #[arg(long, default_value = "pure")]
    kind: String,
    /// Rank for mixed states
    #[arg(long)]
    rank: Option<usize>,
    /// Number of states
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.cmd {
        Cmd::Compute(args) => cmd_compute(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Sample(args) => cmd_sample(args),
    }
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

fn load_state(args: &ComputeArgs) -> anyhow::Result<(MultipartiteState, String)> {
    if let Some(name) = &args.builtin {
        let st = builtin_state(name)?;
        return Ok((st, format!("builtin:{name}")));
    }
    if let Some(path) = &args.state {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let st = state_json::from_str(&text)?;
        return Ok((st, format!("file:{}", path.display())));
    }
    bail!("provide --state or --builtin");
}

fn builtin_state(name: &str) -> anyhow::Result<MultipartiteState> {
    match name {
        "ghz2" => Ok(states::ghz(2)?),
        "ghz3" => Ok(states::ghz(3)?),
        "ghz4" => Ok(states::ghz(4)?),
        "w3" => Ok(states::w_state(3)?),
        "w4" => Ok(states::w_state(4)?),
        "bell" => Ok(states::bell()),
        "remark1" => Ok(states::remark1_state()),
        other => {
            if let Some(spec) = other.strip_prefix("max_mixed:") {
                let dims: Vec<usize> = spec
                    .split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| anyhow!("bad max_mixed dims {spec:?}"))?;
                Ok(states::max_mixed(DimList::new(dims)?))
            } else {
                bail!(
                    "unknown builtin {other:?} (ghz2, ghz3, ghz4, w3, w4, bell, remark1, \
                     max_mixed:<dims>)"
                )
            }
        }
    }
}

fn optim_config(common: &CommonArgs) -> OptimConfig {
    OptimConfig {
        restarts: common.restarts,
        outcome_cap: common.povm_card,
        seed: common.seed,
        ..OptimConfig::default()
    }
}

fn cmd_compute(args: ComputeArgs) -> anyhow::Result<i32> {
    // curly_e is a scalar function, not a state measure
    if args.measure == "curly_e" {
        let x = args.x.ok_or_else(|| anyhow!("curly_e needs --x"))?;
        let value = measures::curly_e(x)?;
        let mv = measures::measure_value_closed(value);
        return finish_compute(&args, "scalar", &mv);
    }

    let (state, source) = load_state(&args)?;
    let oc = optim_config(&args.common);
    let groups = match &args.cut {
        Some(c) => cut::parse(c, state.dims().len())?,
        None => cut::default_groups(state.dims().len()),
    };
    let mv = dispatch_measure(&args.measure, &state, &groups, &oc)?;
    finish_compute(&args, &source, &mv)
}

fn dispatch_measure(
    measure: &str,
    state: &MultipartiteState,
    groups: &[Vec<usize>],
    oc: &OptimConfig,
) -> anyhow::Result<MeasureValue> {
    use cut::grouped_bipartite;
    let closed = measures::measure_value_closed;
    match measure {
        "entropy" => {
            let union = cut::union(groups);
            let rho = state.reduced_density(&union)?;
            Ok(closed(measures::entropy(&rho)?))
        }
        "mutual_info" => {
            let (rho, dims) = grouped_bipartite(state, groups)?;
            Ok(closed(measures::mutual_information(&rho, &dims)?))
        }
        "coherent_info" => {
            let (rho, dims) = grouped_bipartite(state, groups)?;
            Ok(closed(measures::coherent_information(&rho, &dims)?))
        }
        "concurrence" => {
            if state.is_pure() && groups.len() == 2 && cut::covers_all(groups, state.dims().len())
            {
                let cut_a = groups[0].clone();
                Ok(closed(measures::concurrence_pure(
                    state.vector().unwrap(),
                    state.dims(),
                    &cut_a,
                )?))
            } else {
                let (rho, dims) = grouped_bipartite(state, groups)?;
                if dims.as_slice() == [2, 2] {
                    Ok(closed(measures::concurrence_2q(&rho, &dims)?))
                } else {
                    bail!("mixed-state concurrence is closed-form for two qubits only")
                }
            }
        }
        "coa" => {
            let (rho, dims) = grouped_bipartite(state, groups)?;
            if dims.as_slice() == [2, 2] {
                Ok(closed(measures::coa_2q(&rho, &dims)?))
            } else {
                Ok(measures::coa_roof(&rho, &dims, &[0], &[], oc)?)
            }
        }
        "eof" => {
            let (rho, dims) = grouped_bipartite(state, groups)?;
            if dims.as_slice() == [2, 2] {
                Ok(closed(measures::eof_2q(&rho, &dims)?))
            } else {
                Ok(measures::eof_roof(&rho, &dims, &[0], &[], oc)?)
            }
        }
        "eoa" => {
            let (rho, dims) = grouped_bipartite(state, groups)?;
            Ok(measures::eoa_roof(&rho, &dims, &[0], &[], oc)?)
        }
        "hv" => {
            let (rho, dims) = grouped_bipartite(state, groups)?;
            Ok(measures::henderson_vedral(&rho, &dims, &[], oc)?)
        }
        "ue" => {
            let (rho, dims) = grouped_bipartite(state, groups)?;
            Ok(measures::ue_direct(&rho, &dims, &[], oc)?)
        }
        "ue_product" | "localizable_ea" => {
            if groups.len() != 3 {
                bail!("{measure} needs a three-part cut like \"A|C|D\"");
            }
            let grouped = cut::group_state(state, groups)?;
            let mv = if measure == "ue_product" {
                measures::ue_product(&grouped, 0, (1, 2), &[], oc)?
            } else {
                measures::localizable_ea(&grouped, 0, (1, 2), &[], oc)?
            };
            Ok(mv)
        }
        "thm1_bound" => {
            let (rho, dims) = grouped_bipartite(state, groups)?;
            let (value, povm) = measures::thm1_povm_bound(&rho, &dims)?;
            let mut mv = measures::measure_value_closed(value);
            mv.certificate = Some(measures::Certificate::Measurement(povm));
            Ok(mv)
        }
        other => bail!(
            "unknown measure {other:?} (entropy, mutual_info, coherent_info, curly_e, \
             concurrence, coa, eof, eoa, hv, ue, ue_product, localizable_ea, thm1_bound)"
        ),
    }
}

fn finish_compute(args: &ComputeArgs, source: &str, mv: &MeasureValue) -> anyhow::Result<i32> {
    let report = report::compute_report(args, source, mv);
    match (&args.common.out, args.common.format) {
        (Some(path), Format::Json) => {
            report::write_atomic(path, &serde_json::to_string_pretty(&report)?)?;
            println!("{} = {:.9} ({})", args.measure, mv.value, report.bound_direction);
        }
        (Some(path), Format::Csv) => {
            report::write_atomic(path, &report::compute_csv(&report))?;
            println!("{} = {:.9} ({})", args.measure, mv.value, report.bound_direction);
        }
        (None, Format::Json) => println!("{}", serde_json::to_string_pretty(&report)?),
        (None, Format::Csv) => print!("{}", report::compute_csv(&report)),
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<i32> {
    let cfg = VerifyConfig {
        seed: args.common.seed,
        restarts: args.common.restarts,
        max_iters: 400,
        outcome_cap: args.common.povm_card,
        tol_override: args.common.tol,
        dims: args.dims.clone(),
    };
    let started = Instant::now();
    let mut reports: Vec<SuiteReport> = if args.suite == "all" {
        verify::run_all(args.samples, &cfg)?
    } else {
        vec![verify::run_suite(&args.suite, args.samples, &cfg)?]
    };
    let elapsed_ms = started.elapsed().as_millis() as u64;
    if args.emit_timing {
        // coarse attribution: total wall clock on the last suite, zero elsewhere
        if let Some(last) = reports.last_mut() {
            last.runtime_ms = elapsed_ms;
        }
    }

    for rep in &reports {
        println!(
            "suite {:<22} samples {:>4}  violations {:>3}  worst margin {:+.3e}",
            rep.suite, rep.samples, rep.violations, rep.worst_margin
        );
        if rep.suite == "remark1" {
            for r in &rep.results {
                println!(
                    "  {:<28} value {:+.7}  target {:+.7}  margin {:+.3e}  {}",
                    r.check,
                    r.lhs,
                    r.rhs,
                    r.margin,
                    if r.pass { "pass" } else { "FAIL" }
                );
            }
        }
        for r in rep.results.iter().filter(|r| !r.pass) {
            println!(
                "  VIOLATION {} seed {} margin {:+.3e}: {}",
                r.check, r.seed, r.margin, r.detail
            );
        }
    }
    let total_violations: usize = reports.iter().map(|r| r.violations).sum();
    let worst = reports
        .iter()
        .map(|r| r.worst_margin)
        .fold(f64::INFINITY, f64::min);
    println!(
        "total: {} suites, {} violations, worst margin {:+.3e}, {} ms",
        reports.len(),
        total_violations,
        worst,
        elapsed_ms
    );

    let report = report::verify_report(&args, &cfg, &reports, if args.emit_timing { elapsed_ms } else { 0 });
    if let Some(path) = &args.common.out {
        match args.common.format {
            Format::Json => report::write_atomic(path, &serde_json::to_string_pretty(&report)?)?,
            Format::Csv => report::write_atomic(path, &report::verify_csv(&reports))?,
        }
    }
    Ok(if total_violations == 0 { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

fn cmd_sample(args: SampleArgs) -> anyhow::Result<i32> {
    let dims = DimList::new(args.dims.clone())?;
    let mut out = Vec::with_capacity(args.count);
    for i in 0..args.count {
        let seed = mix_seed(args.common.seed, i as u64);
        let st = match args.kind.as_str() {
            "pure" => states::random_pure(&dims, seed)?,
            "mixed" => {
                let rank = args.rank.unwrap_or_else(|| dims.total().min(2));
                states::random_mixed(&dims, rank, seed)?
            }
            other => bail!("unknown kind {other:?} (pure, mixed)"),
        };
        out.push(state_json::to_json(&st));
    }
    let text = serde_json::to_string_pretty(&serde_json::Value::Array(out))?;
    match &args.common.out {
        Some(path) => {
            report::write_atomic(path, &text)?;
            println!(
                "wrote {} {} state(s) of dims {} to {}",
                args.count,
                args.kind,
                dims,
                path.display()
            );
        }
        None => println!("{text}"),
    }
    Ok(0)
}
