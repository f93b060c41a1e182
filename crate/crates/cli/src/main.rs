use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qsprep::adapt::{self, AdaptConfig, AdaptStatus, Ansatz};
use qsprep::cvoqram::{self, CountsReport, PreprocessOptions};
use qsprep::pools::{build_pool, PoolKind, PoolOptions};
use qsprep::simcore::MAX_DENSE_QUBITS;
use qsprep::targets::{
    esp_cnot_bound, ground_state, spectrum, spectrum_csv, synthetic_target, transverse_field_ising,
    truncate, GroundStateOptions, Keep, PauliSumHamiltonian, SynthConfig,
};
use qsprep::{BitPattern, StateVector64};
use qsprep_cli::bench::{self, BenchConfig, RowStatus};
use qsprep_cli::io::{emit, read_state, read_to_string, write_atomic};
use qsprep_cli::{CliResult, Failure};

/// Verification threshold for compiled loaders.
const VERIFY_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "qsprep", version, about = "Sparse quantum state preparation")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Main output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Format of tabular output.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact ground state of a Pauli-sum Hamiltonian.
    GroundState(GroundStateArgs),
    /// Seeded synthetic CI-like target.
    Synth(SynthArgs),
    /// Keep the largest amplitudes of a target.
    Truncate(TruncateArgs),
    /// Ranked amplitude magnitudes with cumulative weight.
    Spectrum(TargetArg),
    /// Compile an exact loader and verify it by simulation.
    Cvoqram(CvoqramArgs),
    /// Grow an ansatz that maximizes overlap with a target.
    Adapt(AdaptArgs),
    /// Fidelity-matched gate counts of both routes.
    Bench(BenchArgs),
    /// Gate bound for a generic state in a fixed particle sector.
    EspBound(EspArgs),
}

#[derive(Args)]
struct TargetArg {
    /// Sparse state, JSON or text.
    #[arg(long)]
    target: PathBuf,
}

#[derive(Args)]
struct GroundStateArgs {
    /// Hamiltonian file with lines `coeff word`.
    #[arg(long, conflicts_with = "ising")]
    hamiltonian: Option<PathBuf>,
    /// Use the open-chain transverse-field Ising model on this many qubits.
    #[arg(long)]
    ising: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,
    #[arg(long, default_value_t = 1.0)]
    field: f64,
    /// Basis pattern that selects the vector in a degenerate ground space.
    #[arg(long)]
    reference: Option<BitPattern>,
    #[arg(long, default_value_t = 1e-12)]
    cutoff: f64,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    n_qubits: usize,
    #[arg(long)]
    sparsity: usize,
    #[arg(long)]
    n_alpha: usize,
    #[arg(long)]
    n_beta: usize,
    #[arg(long, default_value_t = 0.85)]
    decay: f64,
    #[arg(long)]
    complex_phases: bool,
}

#[derive(Args)]
struct TruncateArgs {
    #[arg(long)]
    target: PathBuf,
    /// Keep this many amplitudes and write the renormalized state.
    #[arg(long, conflicts_with = "grid")]
    keep: Option<usize>,
    /// Comma-separated sparsities; writes one (M, fidelity) row each.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<usize>>,
}

#[derive(Args)]
struct CvoqramArgs {
    #[arg(long)]
    target: PathBuf,
    /// Counts report as JSON; stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Rescale targets whose norm is off by more than the input tolerance.
    #[arg(long)]
    renormalize: bool,
}

#[derive(Args)]
struct AdaptArgs {
    #[arg(long)]
    target: Option<PathBuf>,
    /// JSON adapt configuration; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    pool: Option<PoolKind>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// QEB pool restricted to operators that conserve `S_z`.
    #[arg(long)]
    spin_restricted: bool,
    /// Initial basis pattern; defaults to the reference or dominant pattern.
    #[arg(long)]
    initial: Option<BitPattern>,
    /// Continue from a saved ansatz.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Where to write the ansatz JSON.
    #[arg(long)]
    ansatz_out: Option<PathBuf>,
    /// Record wall time in the trace.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    target: Option<PathBuf>,
    /// JSON bench configuration; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pools: Option<Vec<PoolKind>>,
    #[arg(long)]
    spin_restricted: bool,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
}

#[derive(Args)]
struct EspArgs {
    #[arg(long)]
    spatial_orbitals: u64,
    #[arg(long)]
    alpha: u64,
    #[arg(long)]
    beta: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsprep: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::GroundState(a) => cmd_ground_state(cli, a),
        Command::Synth(a) => cmd_synth(cli, a),
        Command::Truncate(a) => cmd_truncate(cli, a),
        Command::Spectrum(a) => cmd_spectrum(cli, a),
        Command::Cvoqram(a) => cmd_cvoqram(cli, a),
        Command::Adapt(a) => cmd_adapt(cli, a),
        Command::Bench(a) => cmd_bench(cli, a),
        Command::EspBound(a) => cmd_esp_bound(a),
    }
}

fn out(cli: &Cli) -> Option<&Path> {
    cli.out.as_deref()
}

fn table<R: Serialize>(cli: &Cli, rows: &[R], csv: impl FnOnce() -> String) -> String {
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => csv(),
        Format::Json => serde_json::to_string_pretty(rows).expect("rows serialize") + "\n",
    }
}

fn cmd_ground_state(cli: &Cli, a: &GroundStateArgs) -> CliResult<()> {
    let h = match (&a.hamiltonian, a.ising) {
        (Some(path), None) => {
            let text = read_to_string(path)?;
            PauliSumHamiltonian::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        (None, Some(n)) => transverse_field_ising(n, a.coupling, a.field)?,
        _ => return Err(Failure::Input("give --hamiltonian FILE or --ising N".into())),
    };
    let opts = GroundStateOptions { amp_cutoff: a.cutoff, reference: a.reference, ..Default::default() };
    let gs = ground_state::<f64>(&h, &opts)?;
    emit(out(cli), &(gs.state.to_json() + "\n"))?;
    eprintln!(
        "energy {:.15} residual {:.3e} sparsity {} solver {:?}",
        gs.energy,
        gs.residual,
        gs.state.len(),
        gs.solver
    );
    Ok(())
}

fn cmd_synth(cli: &Cli, a: &SynthArgs) -> CliResult<()> {
    let cfg = SynthConfig {
        n_qubits: a.n_qubits,
        sparsity: a.sparsity,
        n_alpha: a.n_alpha,
        n_beta: a.n_beta,
        decay: a.decay,
        complex_phases: a.complex_phases,
        seed: cli.seed.unwrap_or(0),
    };
    let s = synthetic_target::<f64>(&cfg)?;
    emit(out(cli), &(s.to_json() + "\n"))
}

#[derive(Serialize)]
struct TruncRow {
    m: usize,
    fidelity: f64,
}

fn cmd_truncate(cli: &Cli, a: &TruncateArgs) -> CliResult<()> {
    let target = read_state(&a.target)?;
    match (a.keep, &a.grid) {
        (Some(m), None) => {
            let (kept, f) = truncate(&target, Keep::Count(m))?;
            emit(out(cli), &(kept.to_json() + "\n"))?;
            eprintln!("kept {} fidelity {f:.17e}", kept.len());
            Ok(())
        }
        (None, Some(grid)) => {
            let rows = grid
                .iter()
                .map(|&m| Ok(TruncRow { m, fidelity: truncate(&target, Keep::Count(m))?.1 }))
                .collect::<CliResult<Vec<_>>>()?;
            let text = table(cli, &rows, || {
                let mut s = String::from("# qsprep truncate v1\nM,fidelity\n");
                rows.iter().for_each(|r| s.push_str(&format!("{},{:.17e}\n", r.m, r.fidelity)));
                s
            });
            emit(out(cli), &text)
        }
        _ => Err(Failure::Input("give --keep M or --grid M1,M2,...".into())),
    }
}

fn cmd_spectrum(cli: &Cli, a: &TargetArg) -> CliResult<()> {
    let target = read_state(&a.target)?;
    let rows = spectrum(&target);
    #[derive(Serialize)]
    struct Row {
        rank: usize,
        abs_c: f64,
        cum_weight: f64,
    }
    let json: Vec<Row> = rows.iter().map(|r| Row { rank: r.rank, abs_c: r.abs_c, cum_weight: r.cum_weight }).collect();
    let text = table(cli, &json, || spectrum_csv(&rows));
    emit(out(cli), &text)
}

#[derive(Serialize)]
struct CvoReport {
    #[serde(flatten)]
    counts: CountsReport,
    classical_cost: cvoqram::ClassicalCost,
    fidelity: Option<f64>,
}

fn cmd_cvoqram(cli: &Cli, a: &CvoqramArgs) -> CliResult<()> {
    let target = read_state(&a.target)?;
    let opts = PreprocessOptions { renormalize: a.renormalize, ..Default::default() };
    let plan = cvoqram::preprocess(&target, &opts)?;
    let circuit = cvoqram::compile(&plan)?;
    let fidelity = if plan.n_qubits() < MAX_DENSE_QUBITS {
        let final_state = circuit.simulate(&StateVector64::zero_state(plan.n_qubits() + 1)?)?;
        let reg = cvoqram::register_state(&final_state)?;
        let expected = plan.target()?.to_dense()?;
        let f = qsprep::simcore::overlap(&reg, &expected)?.norm_sqr();
        if f < 1.0 - VERIFY_TOL {
            return Err(Failure::Consistency(format!("loader fidelity {f:e} below 1 - {VERIFY_TOL:e}")));
        }
        Some(f)
    } else {
        eprintln!("register too large to simulate; verification skipped");
        None
    };
    let report = CvoReport { counts: CountsReport::new(&plan, &circuit), classical_cost: plan.classical_cost(), fidelity };
    if let Some(path) = out(cli) {
        write_atomic(path, &(circuit.to_json() + "\n"))?;
    }
    emit(a.report.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    match fidelity {
        Some(f) => eprintln!("cnot {} fidelity {f:.17e}", report.counts.cnot_formula),
        None => eprintln!("cnot {}", report.counts.cnot_formula),
    }
    Ok(())
}

fn cmd_adapt(cli: &Cli, a: &AdaptArgs) -> CliResult<()> {
    let mut cfg: AdaptConfig = match &a.config {
        Some(p) => serde_json::from_str(&read_to_string(p)?)?,
        None => AdaptConfig::default(),
    };
    if let Some(p) = a.pool {
        cfg.pool = p;
    }
    if let Some(e) = a.epsilon {
        cfg.epsilon = e;
    }
    if let Some(m) = a.max_iterations {
        cfg.max_iterations = m;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.timing |= a.timing;
    let path = a.target.as_deref().ok_or_else(|| Failure::Input("--target is required".into()))?;
    let target = read_state(path)?;
    let n = target.n_qubits();
    let dense = target.to_dense()?;
    let pool = build_pool(cfg.pool, n, &PoolOptions { spin_restricted: a.spin_restricted })?;
    let start = match (&a.resume, a.initial) {
        (Some(p), _) => Ansatz::from_json(&read_to_string(p)?)?,
        (None, Some(b)) => Ansatz::new(b),
        (None, None) => Ansatz::new(bench::initial_pattern(&target)?),
    };
    let outcome = adapt::resume(&dense, &pool, start, &cfg)?;
    let text = table(cli, &trace_rows(&outcome.trace), || outcome.trace.to_csv());
    emit(out(cli), &text)?;
    if let Some(p) = &a.ansatz_out {
        write_atomic(p, &(outcome.ansatz.to_json() + "\n"))?;
    }
    eprintln!("status {} fidelity {:.17e} operators {}", outcome.status, outcome.fidelity, outcome.ansatz.len());
    match outcome.status {
        AdaptStatus::Converged => Ok(()),
        s => Err(Failure::Unreached(format!("status {s}, fidelity {:e}", outcome.fidelity))),
    }
}

#[derive(Serialize)]
struct TraceJson {
    iteration: usize,
    op_id: String,
    score: f64,
    fidelity: f64,
    cnot_cum: u64,
    single_qubit_cum: u64,
    seconds: f64,
}

fn trace_rows(t: &adapt::AdaptTrace) -> Vec<TraceJson> {
    t.records
        .iter()
        .map(|r| TraceJson {
            iteration: r.iteration,
            op_id: r.op_id.clone(),
            score: r.score,
            fidelity: r.fidelity,
            cnot_cum: r.cnot_cum,
            single_qubit_cum: r.single_qubit_cum,
            seconds: r.seconds,
        })
        .collect()
}

fn cmd_bench(cli: &Cli, a: &BenchArgs) -> CliResult<()> {
    let mut cfg: BenchConfig = match &a.config {
        Some(p) => serde_json::from_str(&read_to_string(p)?)?,
        None => BenchConfig::default(),
    };
    if let Some(t) = &a.target {
        cfg.target = Some(t.clone());
    }
    if let Some(g) = &a.grid {
        cfg.grid = g.clone();
    }
    if let Some(p) = &a.pools {
        cfg.pools = p.clone();
    }
    cfg.spin_restricted |= a.spin_restricted;
    if a.epsilon.is_some() {
        cfg.epsilon = a.epsilon;
    }
    if let Some(m) = a.max_iterations {
        cfg.max_iterations = m;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    let path = cfg.target.clone().ok_or_else(|| Failure::Input("no target given".into()))?;
    let target = read_state(&path)?;
    let rows = bench::run_bench(&target, &cfg)?;
    let text = table(cli, &rows, || bench::frontier_csv(&rows));
    emit(cfg.out.as_deref(), &text)?;
    let unreached = rows.iter().filter(|r| r.status == RowStatus::Unreached).count();
    if unreached > 0 {
        return Err(Failure::Unreached(format!("{unreached} grid points not reached")));
    }
    Ok(())
}

fn cmd_esp_bound(a: &EspArgs) -> CliResult<()> {
    println!("{}", esp_cnot_bound(a.spatial_orbitals, a.alpha, a.beta)?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
