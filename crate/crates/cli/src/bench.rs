//! Fidelity-matched gate counts of exact loading versus adaptive growth.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use qsprep::adapt::{self, AdaptConfig, AdaptOutcome};
use qsprep::cvoqram::{cnot_count, compile, preprocess, PreprocessOptions};
use qsprep::pools::{build_pool, PoolKind, PoolOptions};
use qsprep::targets::{hartree_fock, ranked, spectrum, truncate, Keep};
use qsprep::{BitPattern, SparseState64};

use crate::{CliResult, Failure};

pub const DEFAULT_GRID: [f64; 5] = [0.5, 0.8, 0.9, 0.95, 0.99];

/// Slack when comparing a cumulative weight against a grid point.
pub const GRID_MATCH_TOL: f64 = 1e-12;

pub const FRONTIER_HEADER: &str = "method,fidelity_target,fidelity,cnot,single_qubit,mcu,size,status";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub target: Option<PathBuf>,
    /// Strictly increasing fidelities in `(0, 1]`.
    pub grid: Vec<f64>,
    pub pools: Vec<PoolKind>,
    pub spin_restricted: bool,
    /// ADAPT stopping threshold on `1 − F`. Defaults to `1 − max(grid)`.
    pub epsilon: Option<f64>,
    pub max_iterations: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            target: None,
            grid: DEFAULT_GRID.to_vec(),
            pools: vec![PoolKind::Qeb],
            spin_restricted: false,
            epsilon: None,
            max_iterations: 200,
            seed: 0,
            out: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.grid.is_empty() {
            return Err(Failure::Input("fidelity grid is empty".into()));
        }
        if let Some(f) = self.grid.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return Err(Failure::Input(format!("grid value {f} is outside (0, 1]")));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Failure::Input("grid must be strictly increasing".into()));
        }
        if self.pools.is_empty() {
            return Err(Failure::Input("no pools selected".into()));
        }
        Ok(())
    }

    pub fn adapt_config(&self, pool: PoolKind) -> AdaptConfig {
        let top = self.grid.iter().copied().fold(0.0, f64::max);
        let epsilon = self.epsilon.unwrap_or_else(|| (1.0 - top).max(1e-8));
        AdaptConfig { pool, epsilon, max_iterations: self.max_iterations, seed: self.seed, ..AdaptConfig::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Reached,
    Unreached,
}

impl RowStatus {
    fn as_str(self) -> &'static str {
        match self {
            RowStatus::Reached => "reached",
            RowStatus::Unreached => "unreached",
        }
    }
}

/// One point of a frontier. `size` is the kept sparsity for exact loading
/// and the number of ansatz operators for ADAPT.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontierRow {
    pub method: String,
    pub fidelity_target: f64,
    pub fidelity: f64,
    pub cnot: u64,
    pub single_qubit: u64,
    /// Multi-controlled rotations left unexpanded. Their CNOT cost is in
    /// `cnot`; their single-qubit cost is not in `single_qubit`.
    pub mcu: u64,
    pub size: usize,
    pub status: RowStatus,
}

pub fn frontier_csv(rows: &[FrontierRow]) -> String {
    let mut out = format!("# qsprep frontier v1\n{FRONTIER_HEADER}\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{:e},{},{},{},{},{}",
            r.method,
            r.fidelity_target,
            r.fidelity,
            r.cnot,
            r.single_qubit,
            r.mcu,
            r.size,
            r.status.as_str()
        )
        .expect("string write");
    }
    out
}

/// ADAPT starting point: the closed-shell reference when the target records
/// an electron count, otherwise its largest-amplitude pattern.
pub fn initial_pattern(target: &SparseState64) -> CliResult<BitPattern> {
    if let Some(m) = target.metadata().and_then(|m| m.electrons) {
        return Ok(hartree_fock(target.n_qubits(), m)?);
    }
    let first = ranked(target).first().copied().ok_or_else(|| Failure::Input("target has no entries".into()))?;
    Ok(target.entries()[first].0)
}

/// Exact-loading counts for the smallest truncation reaching each grid point.
pub fn cvoqram_rows(target: &SparseState64, grid: &[f64]) -> CliResult<Vec<FrontierRow>> {
    let spec = spectrum(target);
    grid.iter()
        .map(|&f| {
            let m = spec.iter().position(|r| r.cum_weight >= f - GRID_MATCH_TOL).map_or(spec.len(), |i| i + 1);
            let (kept, fidelity) = truncate(target, Keep::Count(m))?;
            let plan = preprocess(&kept, &PreprocessOptions::default())?;
            let counts = compile(&plan)?.counts();
            Ok(FrontierRow {
                method: "cvoqram".into(),
                fidelity_target: f,
                fidelity,
                cnot: cnot_count(&plan),
                single_qubit: counts.single_qubit,
                mcu: counts.mcu_unexpanded,
                size: m,
                status: RowStatus::Reached,
            })
        })
        .collect()
}

/// Runs ADAPT once and reads the first iteration reaching each grid point.
/// A point above `1 − ε` counts as reached once ADAPT converges.
pub fn adapt_rows(
    target: &SparseState64,
    grid: &[f64],
    config: &AdaptConfig,
    spin_restricted: bool,
) -> CliResult<(Vec<FrontierRow>, AdaptOutcome<f64>)> {
    let dense = target.to_dense()?;
    let pool = build_pool(config.pool, target.n_qubits(), &PoolOptions { spin_restricted })?;
    let initial = initial_pattern(target)?;
    let out = adapt::run(&dense, &pool, initial, config)?;
    let method = format!("adapt_{}", config.pool);
    let trace = &out.trace;
    let rows = grid
        .iter()
        .map(|&f| {
            let threshold = f.min(1.0 - config.epsilon) - GRID_MATCH_TOL;
            let reached = |fid: f64| fid >= threshold;
            if reached(trace.initial_fidelity) {
                return FrontierRow {
                    method: method.clone(),
                    fidelity_target: f,
                    fidelity: trace.initial_fidelity,
                    cnot: 0,
                    single_qubit: 0,
                    mcu: 0,
                    size: 0,
                    status: RowStatus::Reached,
                };
            }
            let hit = trace.records.iter().find(|r| reached(r.fidelity));
            let (rec, status) = match hit {
                Some(r) => (Some(r), RowStatus::Reached),
                None => (trace.records.last(), RowStatus::Unreached),
            };
            FrontierRow {
                method: method.clone(),
                fidelity_target: f,
                fidelity: rec.map_or(trace.initial_fidelity, |r| r.fidelity),
                cnot: rec.map_or(0, |r| r.cnot_cum),
                single_qubit: rec.map_or(0, |r| r.single_qubit_cum),
                mcu: 0,
                size: rec.map_or(0, |r| r.iteration),
                status,
            }
        })
        .collect();
    Ok((rows, out))
}

/// Exact-loading rows followed by one block of ADAPT rows per pool.
pub fn run_bench(target: &SparseState64, config: &BenchConfig) -> CliResult<Vec<FrontierRow>> {
    config.validate()?;
    let (cvo, adapt) = rayon::join(
        || cvoqram_rows(target, &config.grid),
        || {
            config
                .pools
                .iter()
                .map(|&p| adapt_rows(target, &config.grid, &config.adapt_config(p), config.spin_restricted).map(|r| r.0))
                .collect::<CliResult<Vec<_>>>()
        },
    );
    let mut rows = cvo?;
    rows.extend(adapt?.into_iter().flatten());
    Ok(rows)
}
