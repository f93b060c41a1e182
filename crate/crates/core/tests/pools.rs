use num_complex::Complex64;
use proptest::prelude::*;

use qsprep::pools::{build_pool, OperatorKind, PoolKind, PoolOperator, PoolOptions, SymmetryTag};
use qsprep::targets::{symmetry, SparseState};
use qsprep::{BitPattern, GateCounts, Pool64, StateVector64};

const N: usize = 6;

fn random_state(n: usize, seed: &[(f64, f64)]) -> StateVector64 {
    let amps = (0..1usize << n).map(|i| {
        let (a, b) = seed[i % seed.len()];
        Complex64::new(a + 0.01 * i as f64, b)
    });
    let mut s = StateVector64::from_amplitudes(n, amps.collect()).unwrap();
    s.normalize().unwrap();
    s
}

fn distinct(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..N).collect::<Vec<_>>()).prop_shuffle().prop_map(move |v| v[..k].to_vec())
}

fn sector_state(n: usize, particles: u32) -> StateVector64 {
    let amps = (0..1u64 << n)
        .map(|i| if i.count_ones() == particles { Complex64::new(1.0 + (i % 7) as f64, (i % 3) as f64) } else { Complex64::new(0.0, 0.0) })
        .collect();
    let mut s = StateVector64::from_amplitudes(n, amps).unwrap();
    s.normalize().unwrap();
    s
}

fn assert_template_matches(op: &PoolOperator<f64>, theta: f64, psi: &StateVector64) {
    let mut exact = psi.clone();
    op.apply_exponential(exact.amplitudes_mut(), N, theta);
    let circ = op.template(N, theta).unwrap();
    let out = circ.simulate(psi).unwrap();
    let f = out.fidelity(&exact).unwrap();
    assert!((f - 1.0).abs() < 1e-12, "{} θ={theta}: F={f}", op.id());
    assert_eq!(circ.counts(), op.template_counts());
}

proptest! {
    #[test]
    fn single_template_on_any_pair(s in distinct(2), theta in -3.2f64..3.2, amp in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5)) {
        let (p, q) = (s[0].min(s[1]), s[0].max(s[1]));
        let op = PoolOperator::qeb_single(p, q).unwrap();
        assert_template_matches(&op, theta, &random_state(N, &amp));
    }

    #[test]
    fn double_template_on_any_quadruple(s in distinct(4), theta in -3.2f64..3.2, amp in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5)) {
        let mut v = s.clone();
        v.sort();
        let op = PoolOperator::qeb_double(v[0], v[1], v[2], v[3]).unwrap();
        assert_template_matches(&op, theta, &random_state(N, &amp));
    }

    #[test]
    fn string_template_on_any_support(k in 2usize..=4, s in distinct(4), ys in 0u8..16, theta in -3.2f64..3.2) {
        let mut support = s[..k].to_vec();
        support.sort();
        let word: String = (0..k).map(|i| if ys >> i & 1 == 1 { 'Y' } else { 'X' }).collect();
        let op = PoolOperator::pauli_string(&word, &support).unwrap();
        assert_template_matches(&op, theta, &random_state(N, &[(0.3, -0.2), (0.1, 0.9), (-0.5, 0.4)]));
    }
}

#[test]
fn template_counts() {
    let single = PoolOperator::<f64>::qeb_single(0, 3).unwrap();
    let double = PoolOperator::<f64>::qeb_double(0, 1, 2, 5).unwrap();
    assert_eq!(single.template_counts(), GateCounts::new(3, 7, 0));
    assert_eq!(double.template_counts(), GateCounts::new(13, 21, 0));
    let xyyy = PoolOperator::<f64>::pauli_string("XYYY", &[0, 1, 2, 3]).unwrap();
    assert_eq!(xyyy.template_counts(), GateCounts::new(6, 9, 0));
}

#[test]
fn qeb_pool_conserves_particle_number() {
    let pool: Pool64 = build_pool(PoolKind::Qeb, N, &PoolOptions::default()).unwrap();
    assert_eq!(pool.symmetry(), SymmetryTag::ParticlePreserving);
    let psi = sector_state(N, 3);
    for op in pool.operators() {
        let mut out = psi.clone();
        op.apply_exponential(out.amplitudes_mut(), N, 0.7);
        let leak: f64 =
            (0..1u64 << N).filter(|i| i.count_ones() != 3).map(|i| out.amplitudes()[i as usize].norm_sqr()).sum();
        assert!(leak < 1e-28, "{} leaks {leak}", op.id());
    }
}

#[test]
fn restricted_pool_conserves_spin() {
    let pool: Pool64 = build_pool(PoolKind::Qeb, N, &PoolOptions { spin_restricted: true }).unwrap();
    assert_eq!(pool.symmetry(), SymmetryTag::ParticleAndSzPreserving);
    let hf: BitPattern = "111000".parse().unwrap();
    let psi = StateVector64::basis_state(N, &hf).unwrap();
    for op in pool.operators() {
        let mut out = psi.clone();
        op.apply_exponential(out.amplitudes_mut(), N, 0.9);
        let s: SparseState<f64> = SparseState::from_dense(&out, 1e-14).unwrap();
        assert_eq!(symmetry(&s).twice_sz, Some(1), "{}", op.id());
    }
}

#[test]
fn pool_sizes_and_lookup() {
    let qeb: Pool64 = build_pool(PoolKind::Qeb, 4, &PoolOptions::default()).unwrap();
    let singles = qeb.operators().iter().filter(|o| o.kind() == OperatorKind::QebSingle).count();
    assert_eq!(singles, 6);
    assert_eq!(qeb.len() - singles, 3);
    for (i, op) in qeb.operators().iter().enumerate() {
        assert_eq!(qeb.position(op.id()), Some(i));
    }
    assert!(qeb.get("nope").unwrap_err().is_input());

    let qubit: Pool64 = build_pool(PoolKind::Qubit, 4, &PoolOptions::default()).unwrap();
    assert_eq!(qubit.len(), 2 * 6 + 8);
    assert!(build_pool::<f64>(PoolKind::Qubit, 1, &PoolOptions::default()).is_err());
}

#[test]
fn pool_json_lists_every_operator() {
    let pool: Pool64 = build_pool(PoolKind::Qubit, 4, &PoolOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&pool.to_json()).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), pool.len());
    assert!(list.iter().all(|r| r["pauli_label"].is_string() && r["support"].is_array()));
}
