use num_complex::Complex64;
use proptest::prelude::*;

use qsprep::cvoqram::{
    ancilla_weight, cnot_count, compile, preprocess, register_state, run_instrumented, u_matrix, CountsReport,
    PreprocessOptions,
};
use qsprep::simcore::{overlap, BitPattern, StateVector};
use qsprep::SparseState64;

fn state(n: usize, entries: &[(&str, Complex64)]) -> SparseState64 {
    SparseState64::new(n, entries.iter().map(|(p, a)| (p.parse().unwrap(), *a)).collect()).unwrap()
}

fn load(s: &SparseState64) -> (f64, f64) {
    let plan = preprocess(s, &PreprocessOptions::default()).unwrap();
    let out = compile(&plan).unwrap().simulate(&StateVector::zero_state(s.n_qubits() + 1).unwrap()).unwrap();
    let f = overlap(&register_state(&out).unwrap(), &s.to_dense().unwrap()).unwrap().norm_sqr();
    (f, ancilla_weight(&out))
}

fn sparse_strategy() -> impl Strategy<Value = SparseState64> {
    (1usize..=8).prop_flat_map(|n| {
        let m = 1usize..=(1usize << n).min(20);
        (Just(n), prop::collection::btree_map(0u64..(1 << n), (-1.0f64..1.0, -1.0f64..1.0), m))
    })
    .prop_filter_map("zero norm", |(n, map)| {
        let entries = map
            .into_iter()
            .map(|(i, (a, b))| (BitPattern::from_index(n, i).unwrap(), Complex64::new(a, b)))
            .collect();
        SparseState64::new(n, entries).ok()?.normalized().ok()
    })
}

#[test]
fn bell_pair_loads_exactly() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (f, anc) = load(&state(2, &[("01", Complex64::new(h, 0.0)), ("10", Complex64::new(h, 0.0))]));
    assert!((f - 1.0).abs() < 1e-14 && anc < 1e-28);
}

#[test]
fn complex_two_pattern_state() {
    let c1 = Complex64::from_polar(0.8, 1.1);
    let (f, _) = load(&state(2, &[("00", Complex64::new(0.6, 0.0)), ("11", c1)]));
    assert!((f - 1.0).abs() < 1e-14);
}

#[test]
fn single_weight_three_pattern_costs_seventeen() {
    let s = state(4, &[("1101", Complex64::new(1.0, 0.0))]);
    let plan = preprocess(&s, &PreprocessOptions::default()).unwrap();
    assert_eq!(cnot_count(&plan), 17);
    let report = CountsReport::new(&plan, &compile(&plan).unwrap());
    assert_eq!((report.cnot_emitted, report.m, report.n), (17, 1, 4));
    assert_eq!(report.mu_histogram, vec![0, 0, 0, 1, 0]);
}

#[test]
fn twelve_qubit_random_target() {
    let mut entries = Vec::new();
    let mut x: u64 = 0x9e3779b97f4a7c15;
    while entries.len() < 64 {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        let p = BitPattern::from_index(12, x % 4096).unwrap();
        if entries.iter().all(|(q, _)| *q != p) {
            let t = (x >> 20) as f64 / (1u64 << 44) as f64;
            entries.push((p, Complex64::from_polar(0.1 + t, 6.0 * t)));
        }
    }
    let s = SparseState64::new(12, entries).unwrap().normalized().unwrap();
    let (f, anc) = load(&s);
    assert!(f >= 1.0 - 1e-10, "{f}");
    assert!(anc <= 1e-12);
}

#[test]
fn rejects_unnormalized_and_accepts_renormalize() {
    let s = state(1, &[("0", Complex64::new(2.0, 0.0))]);
    assert!(preprocess(&s, &PreprocessOptions::default()).unwrap_err().is_input());
    let opts = PreprocessOptions { renormalize: true, ..Default::default() };
    assert_eq!(preprocess(&s, &opts).unwrap().len(), 1);
}

#[test]
fn u_matrix_is_unitary() {
    let u = u_matrix(Complex64::new(0.3, 0.4), 0.5).unwrap();
    let m = qsprep::linalg::Matrix::from_rows(u);
    assert!(m.is_unitary(1e-14));
    assert!(u_matrix(Complex64::new(1.0, 0.0), 0.5).is_err());
}

proptest! {
    #[test]
    fn random_targets_load_exactly(s in sparse_strategy()) {
        let (f, anc) = load(&s);
        prop_assert!(f >= 1.0 - 1e-10);
        prop_assert!(anc <= 1e-12);
    }

    #[test]
    fn invariant_holds_at_every_step(s in sparse_strategy()) {
        let plan = preprocess(&s, &PreprocessOptions::default()).unwrap();
        prop_assert!(run_instrumented(&plan).unwrap().max_deviation() <= 1e-10);
    }
}
