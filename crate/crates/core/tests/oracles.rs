use std::collections::HashMap;

use stabperf::decoder::MlDecoder;
use stabperf::enumerator::code_enumerators;
use stabperf::registry::{builtin, names};
use stabperf::{PauliOperator, QubitChannel, ResidualClass, StabilizerCode};

fn small_codes() -> Vec<StabilizerCode> {
    names()
        .into_iter()
        .map(|n| builtin(n).unwrap())
        .filter(|c| c.n() <= 7)
        .collect()
}

fn all_paulis(n: usize) -> impl Iterator<Item = PauliOperator> {
    (0..1u64 << (2 * n)).map(move |m| PauliOperator::from_masks(n, m & ((1 << n) - 1), m >> n))
}

#[test]
fn logical_enumerator_matches_brute_force() {
    let codes = small_codes();
    assert!(codes.len() >= 3);
    for code in codes {
        let n = code.n();
        let mut counts = vec![0u64; n + 1];
        for p in all_paulis(n) {
            if let ResidualClass::LogicalOperator { .. } = code.classify_residual(&p) {
                counts[p.weight()] += 1;
            }
        }
        let e = code_enumerators(&code, 1 << 20).unwrap();
        assert_eq!(e.logical.coeffs_u64(), counts, "{}", code.name());
    }
}

#[test]
fn ml_coset_sums_match_brute_force() {
    for code in small_codes() {
        let n = code.n();
        for ch in [
            QubitChannel::depolarizing(0.07),
            QubitChannel::biased(0.11, 10.0),
            QubitChannel::new(0.02, 0.05, 0.09).unwrap(),
        ] {
            let dec = MlDecoder::new(&code, ch).unwrap();
            let probs = [1.0 - ch.rho(), ch.p_x, ch.p_y, ch.p_z];
            // (syndrome, representative index) -> probability
            let mut brute: HashMap<(Vec<u64>, usize), f64> = HashMap::new();
            let mut reps: HashMap<Vec<u64>, Vec<PauliOperator>> = HashMap::new();
            for e in all_paulis(n) {
                let s = code.syndrome(&e);
                let key = s.words().to_vec();
                let list = reps
                    .entry(key.clone())
                    .or_insert_with(|| dec.coset_log_probabilities(&s).into_iter().map(|(r, _)| r).collect());
                let idx = list
                    .iter()
                    .position(|r| code.classify_residual(&(&e * r)) == ResidualClass::InStabilizer)
                    .expect("every error lies in one coset");
                let p: f64 = (0..n).map(|q| probs[e.get(q) as usize]).product();
                *brute.entry((key, idx)).or_default() += p;
            }
            for e in all_paulis(n).filter(|e| e.weight() <= 2) {
                let s = code.syndrome(&e);
                for (idx, (_, lp)) in dec.coset_log_probabilities(&s).into_iter().enumerate() {
                    let want = brute.get(&(s.words().to_vec(), idx)).copied().unwrap_or(0.0);
                    let got = lp.exp();
                    assert!(
                        (got - want).abs() <= 1e-12 * want.max(1e-300),
                        "{} {:?}: {got} vs {want}",
                        code.name(),
                        ch
                    );
                }
            }
        }
    }
}
