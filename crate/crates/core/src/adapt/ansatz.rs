use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pools::Pool;
use crate::scalar::{c, Real};
use crate::simcore::{inner, BitPattern, GateCounts, StateVector};

/// Ordered pool operators applied to a basis initial state. Step `j` acts
/// as `exp(iθ_j G_j)`, the first step acting first.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz<T> {
    initial: BitPattern,
    op_ids: Vec<String>,
    thetas: Vec<T>,
}

#[derive(Serialize, Deserialize)]
struct AnsatzDoc {
    initial_state_ref: BitPattern,
    steps: Vec<StepDoc>,
}

#[derive(Serialize, Deserialize)]
struct StepDoc {
    op_id: String,
    theta: f64,
}

impl<T: Real> Ansatz<T> {
    pub fn new(initial: BitPattern) -> Self {
        Self { initial, op_ids: Vec::new(), thetas: Vec::new() }
    }

    pub fn from_steps(initial: BitPattern, steps: Vec<(String, T)>) -> Self {
        let (op_ids, thetas) = steps.into_iter().unzip();
        Self { initial, op_ids, thetas }
    }

    pub fn initial(&self) -> &BitPattern {
        &self.initial
    }

    pub fn op_ids(&self) -> &[String] {
        &self.op_ids
    }

    pub fn thetas(&self) -> &[T] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.op_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.op_ids.is_empty()
    }

    pub fn push(&mut self, op_id: impl Into<String>, theta: T) {
        self.op_ids.push(op_id.into());
        self.thetas.push(theta);
    }

    pub fn set_thetas(&mut self, thetas: Vec<T>) -> Result<()> {
        if thetas.len() != self.op_ids.len() {
            return Err(Error::input(format!("{} parameters for {} steps", thetas.len(), self.op_ids.len())));
        }
        self.thetas = thetas;
        Ok(())
    }

    /// Pool positions of the steps.
    pub fn resolve(&self, pool: &Pool<T>) -> Result<Vec<usize>> {
        if pool.n_qubits() != self.initial.len() {
            return Err(Error::input(format!(
                "pool acts on {} qubits but the initial state has {}",
                pool.n_qubits(),
                self.initial.len()
            )));
        }
        self.op_ids
            .iter()
            .map(|id| pool.position(id).ok_or_else(|| Error::input(format!("operator '{id}' is not in the pool"))))
            .collect()
    }

    /// Sum of template gate counts.
    pub fn gate_counts(&self, pool: &Pool<T>) -> Result<GateCounts> {
        Ok(self.resolve(pool)?.iter().map(|&i| pool.operators()[i].template_counts()).sum())
    }

    pub fn to_json(&self) -> String {
        let doc = AnsatzDoc {
            initial_state_ref: self.initial,
            steps: self
                .op_ids
                .iter()
                .zip(&self.thetas)
                .map(|(id, t)| StepDoc { op_id: id.clone(), theta: t.to_f64_lossy() })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("ansatz serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AnsatzDoc = serde_json::from_str(text)?;
        Ok(Self::from_steps(
            doc.initial_state_ref,
            doc.steps.into_iter().map(|s| (s.op_id, T::lit(s.theta))).collect(),
        ))
    }
}

fn check_len<T>(ansatz: &Ansatz<T>, thetas: &[T]) -> Result<()> {
    if thetas.len() != ansatz.op_ids.len() {
        return Err(Error::input(format!(
            "{} parameters for an ansatz of {} steps",
            thetas.len(),
            ansatz.op_ids.len()
        )));
    }
    Ok(())
}

/// State prepared by the ansatz at parameters `thetas`.
pub fn evaluate<T: Real>(ansatz: &Ansatz<T>, pool: &Pool<T>, thetas: &[T]) -> Result<StateVector<T>> {
    check_len(ansatz, thetas)?;
    let ops = ansatz.resolve(pool)?;
    let n = pool.n_qubits();
    let mut psi = StateVector::basis_state(n, &ansatz.initial)?;
    for (&i, &t) in ops.iter().zip(thetas) {
        pool.operators()[i].apply_exponential(psi.amplitudes_mut(), n, t);
    }
    Ok(psi)
}

fn check_target<T: Real>(pool: &Pool<T>, target: &StateVector<T>) -> Result<()> {
    if target.n_qubits() != pool.n_qubits() {
        return Err(Error::input(format!(
            "target has {} qubits but the pool acts on {}",
            target.n_qubits(),
            pool.n_qubits()
        )));
    }
    Ok(())
}

/// `F = |⟨ψ(θ)|T⟩|²`.
pub fn objective<T: Real>(ansatz: &Ansatz<T>, pool: &Pool<T>, thetas: &[T], target: &StateVector<T>) -> Result<T> {
    check_target(pool, target)?;
    let psi = evaluate(ansatz, pool, thetas)?;
    Ok(inner(psi.amplitudes(), target.amplitudes()).norm_sqr())
}

/// Fidelity and its gradient from one forward and one reverse sweep.
///
/// With `φ_j` the state after step `j` and `λ_j` the target pulled back
/// through the later steps, `∂F/∂θ_j = 2·Re(⟨λ_j|iG_j|φ_j⟩·⟨ψ|T⟩)`.
pub fn fidelity_and_gradient<T: Real>(
    ansatz: &Ansatz<T>,
    pool: &Pool<T>,
    thetas: &[T],
    target: &StateVector<T>,
) -> Result<(T, Vec<T>)> {
    check_target(pool, target)?;
    let ops = ansatz.resolve(pool)?;
    Ok(sweep(pool, &ops, &ansatz.initial, thetas, target))
}

pub(crate) fn sweep<T: Real>(
    pool: &Pool<T>,
    ops: &[usize],
    initial: &BitPattern,
    thetas: &[T],
    target: &StateVector<T>,
) -> (T, Vec<T>) {
    let n = pool.n_qubits();
    let mut phi = StateVector::basis_state(n, initial).expect("validated initial state");
    for (&i, &t) in ops.iter().zip(thetas) {
        pool.operators()[i].apply_exponential(phi.amplitudes_mut(), n, t);
    }
    let s = inner(phi.amplitudes(), target.amplitudes());
    let mut lambda = target.clone();
    let mut grad = vec![T::zero(); ops.len()];
    let two = T::lit(2.0);
    for j in (0..ops.len()).rev() {
        let op = &pool.operators()[ops[j]];
        let g: Complex<T> = op.generator_element(lambda.amplitudes(), phi.amplitudes(), n);
        let x = c(-g.im, g.re);
        grad[j] = two * (x * s).re;
        if j > 0 {
            op.apply_exponential(phi.amplitudes_mut(), n, -thetas[j]);
            op.apply_exponential(lambda.amplitudes_mut(), n, -thetas[j]);
        }
    }
    (s.norm_sqr(), grad)
}

/// `∂F/∂θ_j` for every step.
pub fn gradient<T: Real>(ansatz: &Ansatz<T>, pool: &Pool<T>, thetas: &[T], target: &StateVector<T>) -> Result<Vec<T>> {
    fidelity_and_gradient(ansatz, pool, thetas, target).map(|(_, g)| g)
}
