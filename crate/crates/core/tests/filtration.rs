mod common;

use common::{config, permutation_oracle, random_matrix, truncate_at_repeat, word_oracle};
use proptest::prelude::*;
use rigidity_core::filtration::{chain_generators, word_span};
use rigidity_core::models::{haar_unitary, random_gate_matrix, swap_matrix};
use rigidity_core::{
    boundary_scan, build_r, filtration_dims, finite_presentation_proxy, ComplexMatrix, FiltrationMode, GeneratorSet,
    ModelId, ScanVerdict,
};

fn product(gens: Vec<ComplexMatrix>) -> GeneratorSet {
    GeneratorSet::new(gens, FiltrationMode::Product, true).unwrap()
}

#[test]
fn swap_filtration_matches_permutation_oracle() {
    let want = [vec![1, 2, 2], vec![1, 3, 5, 5], vec![1, 4, 9, 13, 14, 14], vec![1, 5, 14, 26, 36, 40, 42, 42]];
    for (n, want) in (2..=5).zip(want) {
        let oracle = truncate_at_repeat(&permutation_oracle(n, 2, 10));
        assert_eq!(oracle, want, "oracle n={n}");
        let gens = product(chain_generators(&swap_matrix(2), n, 2).unwrap());
        let rep = filtration_dims(&gens, 12, 1e-9).unwrap();
        assert_eq!(rep.dims, oracle, "n={n}");
        assert!(!rep.saturated);
        assert!(rep.termination_depth.unwrap() <= 6);
    }
}

#[test]
fn random_gate_filtration_matches_word_oracle() {
    for seed in [42, 7, 1234] {
        let g = random_gate_matrix(seed);
        let gens = chain_generators(&g, 3, 2).unwrap();
        let oracle = truncate_at_repeat(&word_oracle(&gens, 7));
        assert_eq!(oracle, vec![1, 3, 7, 15, 29, 55, 64, 64]);
        let rep = filtration_dims(&product(gens), 12, 1e-9).unwrap();
        assert_eq!(rep.dims, oracle, "seed {seed}");
        assert!(rep.saturated);
        assert_eq!(rep.termination_depth, Some(6));
    }
}

#[test]
fn random_gate_four_sites_matches_word_oracle() {
    let gens = chain_generators(&random_gate_matrix(42), 4, 2).unwrap();
    let oracle = word_oracle(&gens, 4);
    let rep = filtration_dims(&product(gens), 12, 1e-9).unwrap();
    assert_eq!(&rep.dims[..5], &oracle[..]);
    assert_eq!(rep.stable_rank(), 256);
}

#[test]
fn scans() {
    let id = build_r(&ModelId::Identity).unwrap();
    let scan = boundary_scan(&id, 2, 4, 6, FiltrationMode::Product, 1e-9).unwrap();
    assert_eq!(scan.verdict, ScanVerdict::Constrained);
    assert!(scan.reports.iter().all(|r| r.report.dims == vec![1, 1]));

    let swap = build_r(&ModelId::Swap).unwrap();
    let scan = boundary_scan(&swap, 2, 5, 10, FiltrationMode::Product, 1e-9).unwrap();
    assert_eq!(scan.verdict, ScanVerdict::Constrained);
    for r in &scan.reports {
        assert!(r.report.stable_rank() < 4usize.pow(r.n as u32));
    }

    let gate = build_r(&ModelId::RandomGate { seed: 42 }).unwrap();
    let scan = boundary_scan(&gate, 2, 4, 10, FiltrationMode::Product, 1e-9).unwrap();
    assert_eq!(scan.verdict, ScanVerdict::Saturating);
    // One generator on two sites spans only its own polynomial algebra.
    assert!(!scan.reports[0].report.saturated);
    assert!(scan.reports[1..].iter().all(|r| r.report.saturated));
}

#[test]
fn presentation_proxy_examples() {
    let swap = product(chain_generators(&swap_matrix(2), 3, 2).unwrap());
    let w = finite_presentation_proxy(&swap, 8, 1e-9).unwrap();
    assert!(w.bounded && !w.report.saturated);

    let gate = product(chain_generators(&random_gate_matrix(42), 3, 2).unwrap());
    let w = finite_presentation_proxy(&gate, 8, 1e-9).unwrap();
    assert!(w.bounded && w.report.saturated);

    let e12 = ComplexMatrix::unit(2, 0, 1);
    let w = finite_presentation_proxy(&product(vec![e12]), 4, 1e-9).unwrap();
    assert!(w.bounded);
    assert_eq!(w.report.dims, vec![1, 2, 2]);
}

#[test]
fn commutator_mode_gives_the_lie_algebra() {
    // Transpositions generate C·1_sym ⊕ sl(2) inside the S_3 image on (C^2)^3.
    let gens = GeneratorSet::new(chain_generators(&swap_matrix(2), 3, 2).unwrap(), FiltrationMode::Commutator, false)
        .unwrap();
    assert_eq!(filtration_dims(&gens, 8, 1e-9).unwrap().dims, vec![2, 3, 4, 4]);
}

#[test]
fn report_json_fields() {
    let gens = product(chain_generators(&swap_matrix(2), 3, 2).unwrap());
    let v = serde_json::to_value(filtration_dims(&gens, 6, 1e-9).unwrap()).unwrap();
    assert_eq!(v["mode"], "product");
    assert_eq!(v["dims"], serde_json::json!([1, 3, 5, 5]));
    assert_eq!(v["termination_depth"], 2);
    assert_eq!(v["new_counts"], serde_json::json!([1, 2, 2, 0]));
}

/// Generators with some structure: a random low-rank-ish pair on C^6.
fn sparse_gens(s: u64) -> Vec<ComplexMatrix> {
    let a = random_matrix(6, s);
    let mask = |m: ComplexMatrix, keep: usize| {
        ComplexMatrix::from_fn(6, |i, j| if (i + 2 * j + keep).is_multiple_of(3) { m.get(i, j) } else { rigidity_core::linalg::ZERO })
    };
    vec![mask(a.clone(), 0), mask(random_matrix(6, s ^ 9), 1)]
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn dims_are_monotone_bounded_and_idempotent(s in any::<u64>(), comm in any::<bool>()) {
        let mode = if comm { FiltrationMode::Commutator } else { FiltrationMode::Product };
        let gens = GeneratorSet::new(sparse_gens(s), mode, true).unwrap();
        let rep = filtration_dims(&gens, 40, 1e-9).unwrap();
        prop_assert!(rep.dims.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(rep.stable_rank() <= 36);
        let t = rep.termination_depth.expect("finite ambient dimension always terminates");
        prop_assert_eq!(rep.dims[t], rep.dims[t + 1]);
        prop_assert_eq!(rep.dims.len(), t + 2);
        // A deeper search stops at the same place.
        let again = filtration_dims(&gens, 80, 1e-9).unwrap();
        prop_assert_eq!(again.dims, rep.dims);
        if !comm {
            // The closed span absorbs one more round of products.
            let mut span = word_span(&gens, 40, 1e-9).unwrap();
            let extra: Vec<ComplexMatrix> = span
                .basis()
                .iter()
                .flat_map(|b| gens.generators().iter().map(move |g| b.matmul(g)))
                .collect();
            prop_assert!(span.extend(&extra, 1e-9).unwrap().is_empty());
        }
    }

    #[test]
    fn dims_do_not_depend_on_basis(s in any::<u64>(), comm in any::<bool>()) {
        let mode = if comm { FiltrationMode::Commutator } else { FiltrationMode::Product };
        let g = haar_unitary(8, s);
        for gens in [chain_generators(&swap_matrix(2), 3, 2).unwrap(), chain_generators(&random_gate_matrix(s), 3, 2).unwrap()] {
            let set = GeneratorSet::new(gens, mode, true).unwrap();
            let a = filtration_dims(&set, 12, 1e-9).unwrap();
            let b = filtration_dims(&set.conjugated(&g).unwrap(), 12, 1e-9).unwrap();
            prop_assert_eq!(a.dims, b.dims);
        }
        let sparse = GeneratorSet::new(sparse_gens(s), mode, true).unwrap();
        let a = filtration_dims(&sparse, 40, 1e-9).unwrap();
        let b = filtration_dims(&sparse.conjugated(&random_matrix(6, s ^ 3)).unwrap(), 40, 1e-9).unwrap();
        prop_assert_eq!(a.dims, b.dims);
    }

    #[test]
    fn products_dominate_commutators(s in any::<u64>()) {
        // A depth-k bracket is a word of length <= 2^k, and the bracket
        // closure sits inside the product closure.
        for gens in [sparse_gens(s), chain_generators(&swap_matrix(2), 3, 2).unwrap()] {
            let prod = filtration_dims(&GeneratorSet::new(gens.clone(), FiltrationMode::Product, true).unwrap(), 40, 1e-9).unwrap();
            let comm = filtration_dims(&GeneratorSet::new(gens, FiltrationMode::Commutator, true).unwrap(), 40, 1e-9).unwrap();
            let last = prod.dims.len() - 1;
            for (k, &c) in comm.dims.iter().enumerate() {
                let bound = prod.dims[(1usize << k.min(20)).min(last)];
                prop_assert!(c <= bound, "level {}: {} > {}", k, c, bound);
            }
            prop_assert!(comm.stable_rank() <= prod.stable_rank());
        }
    }
}
