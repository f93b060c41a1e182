use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pools::{Pool, PoolKind};
use crate::scalar::Real;
use crate::simcore::{GateCounts, StateVector};

use super::ansatz::{sweep, Ansatz};
use super::bfgs::{minimize, BfgsOptions, BfgsStop};
use super::screen::screen;

/// Scores below this count as zero when picking an operator. A score below
/// the optimizer's gradient tolerance also ends the run, since the appended
/// angle would stay at zero.
pub const SCORE_FLOOR: f64 = 1e-14;

/// Half-width of the uniform kick applied on an optimizer stall.
pub const RESTART_AMPLITUDE: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdaptConfig {
    pub pool: PoolKind,
    /// Stop once `1 − F ≤ epsilon`.
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Gradient tolerance of the inner optimizer.
    pub gtol: f64,
    /// Objective evaluations per inner optimization.
    pub max_evals: usize,
    pub seed: u64,
    /// Record wall time in the trace. Off by default so traces are
    /// reproducible.
    pub timing: bool,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        Self { pool: PoolKind::Qeb, epsilon: 1e-8, max_iterations: 100, gtol: 1e-8, max_evals: 2000, seed: 0, timing: false }
    }
}

impl AdaptConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::input(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_iterations == 0 {
            return Err(Error::input("max_iterations must be at least 1"));
        }
        if self.gtol.is_nan() || self.gtol <= 0.0 || self.max_evals == 0 {
            return Err(Error::input("optimizer tolerance and evaluation cap must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdaptStatus {
    Converged,
    MaxIterations,
    GradientStall,
}

impl fmt::Display for AdaptStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdaptStatus::Converged => "converged",
            AdaptStatus::MaxIterations => "max-iterations",
            AdaptStatus::GradientStall => "gradient-stall",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub op_id: String,
    pub score: f64,
    pub fidelity: f64,
    pub cnot_cum: u64,
    pub single_qubit_cum: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AdaptTrace {
    /// Fidelity of the ansatz before the first recorded iteration.
    pub initial_fidelity: f64,
    pub records: Vec<TraceRecord>,
}

pub const TRACE_HEADER: &str = "iteration,op_id,score,fidelity,cnot_cum,single_qubit_cum,seconds";

impl AdaptTrace {
    pub fn fidelities(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.fidelity).collect()
    }

    pub fn final_fidelity(&self) -> f64 {
        self.records.last().map_or(self.initial_fidelity, |r| r.fidelity)
    }

    /// First record with fidelity at least `f`.
    pub fn first_reaching(&self, f: f64) -> Option<&TraceRecord> {
        self.records.iter().find(|r| r.fidelity >= f)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# qsprep adapt trace v1\n{TRACE_HEADER}\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{:e},{:e},{},{},{}\n",
                r.iteration, r.op_id, r.score, r.fidelity, r.cnot_cum, r.single_qubit_cum, r.seconds
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        let mut seen_header = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            let lineno = i + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !seen_header {
                if line != TRACE_HEADER {
                    return Err(Error::Parse { line: lineno, msg: format!("expected header '{TRACE_HEADER}'") });
                }
                seen_header = true;
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(Error::Parse { line: lineno, msg: format!("expected 7 fields, found {}", f.len()) });
            }
            let bad = |msg: &str| Error::Parse { line: lineno, msg: msg.to_owned() };
            records.push(TraceRecord {
                iteration: f[0].parse().map_err(|_| bad("bad iteration"))?,
                op_id: f[1].to_owned(),
                score: f[2].parse().map_err(|_| bad("bad score"))?,
                fidelity: f[3].parse().map_err(|_| bad("bad fidelity"))?,
                cnot_cum: f[4].parse().map_err(|_| bad("bad cnot_cum"))?,
                single_qubit_cum: f[5].parse().map_err(|_| bad("bad single_qubit_cum"))?,
                seconds: f[6].parse().map_err(|_| bad("bad seconds"))?,
            });
        }
        Ok(Self { initial_fidelity: f64::NAN, records })
    }
}

#[derive(Clone, Debug)]
pub struct AdaptOutcome<T> {
    pub ansatz: Ansatz<T>,
    pub trace: AdaptTrace,
    pub status: AdaptStatus,
    pub fidelity: T,
}

/// Grows an ansatz from the basis state `initial` until `1 − F ≤ ε`.
pub fn run<T: Real>(
    target: &StateVector<T>,
    pool: &Pool<T>,
    initial: crate::simcore::BitPattern,
    config: &AdaptConfig,
) -> Result<AdaptOutcome<T>> {
    resume(target, pool, Ansatz::new(initial), config)
}

/// Continues growing `ansatz`; iterations are numbered after its existing
/// steps. At most `config.max_iterations` operators are added.
pub fn resume<T: Real>(
    target: &StateVector<T>,
    pool: &Pool<T>,
    mut ansatz: Ansatz<T>,
    config: &AdaptConfig,
) -> Result<AdaptOutcome<T>> {
    config.validate()?;
    if target.n_qubits() != pool.n_qubits() {
        return Err(Error::input(format!(
            "target has {} qubits but the pool acts on {}",
            target.n_qubits(),
            pool.n_qubits()
        )));
    }
    let norm = target.norm_sqr().to_f64_lossy();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::input(format!("target is not normalized (norm² = {norm})")));
    }
    let mut ops = ansatz.resolve(pool)?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bfgs = BfgsOptions { gtol: config.gtol, max_evals: config.max_evals };
    let initial = *ansatz.initial();
    let mut thetas = ansatz.thetas().to_vec();
    let mut counts: GateCounts = ops.iter().map(|&i| pool.operators()[i].template_counts()).sum();
    let mut fidelity = sweep(pool, &ops, &initial, &thetas, target).0;
    let trace_start = fidelity.to_f64_lossy();
    let eps = T::lit(config.epsilon);
    let mut records = Vec::new();
    let mut status = AdaptStatus::MaxIterations;
    if T::one() - fidelity <= eps {
        status = AdaptStatus::Converged;
    } else {
        for _ in 0..config.max_iterations {
            let psi = super::ansatz::evaluate(&ansatz, pool, &thetas)?;
            let ranked = screen(pool, &psi, target)?;
            let best = ranked[0];
            if best.score < T::lit(SCORE_FLOOR.max(config.gtol)) {
                status = AdaptStatus::GradientStall;
                break;
            }
            ops.push(best.index);
            let op = &pool.operators()[best.index];
            ansatz.push(op.id(), T::zero());
            thetas.push(T::zero());
            counts += op.template_counts();

            let objective = |x: &[T]| {
                let (f, g) = sweep(pool, &ops, &initial, x, target);
                (T::one() - f, g.into_iter().map(|v| -v).collect::<Vec<T>>())
            };
            let mut res = minimize(objective, thetas.clone(), &bfgs);
            if res.stop == BfgsStop::Stalled {
                let kicked: Vec<T> = res
                    .x
                    .iter()
                    .map(|&t| t + T::lit(rng.random_range(-RESTART_AMPLITUDE..RESTART_AMPLITUDE)))
                    .collect();
                let retry = minimize(objective, kicked, &bfgs);
                if retry.f < res.f {
                    res = retry;
                }
            }
            let new_fidelity = T::one() - res.f;
            if new_fidelity >= fidelity {
                thetas = res.x;
                fidelity = new_fidelity;
            }
            ansatz.set_thetas(thetas.clone())?;
            records.push(TraceRecord {
                iteration: ansatz.len(),
                op_id: op.id().to_owned(),
                score: best.score.to_f64_lossy(),
                fidelity: fidelity.to_f64_lossy(),
                cnot_cum: counts.cnot,
                single_qubit_cum: counts.single_qubit,
                seconds: if config.timing { start.elapsed().as_secs_f64() } else { 0.0 },
            });
            if T::one() - fidelity <= eps {
                status = AdaptStatus::Converged;
                break;
            }
        }
    }
    ansatz.set_thetas(thetas)?;
    let fidelity = fidelity.min(T::one());
    Ok(AdaptOutcome { ansatz, trace: AdaptTrace { initial_fidelity: trace_start, records }, status, fidelity })
}
