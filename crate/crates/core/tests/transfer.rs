use rigidity_core::embedding::{cyclic_shift, swap_operator};
use rigidity_core::models::{perturbed_swap_matrix, swap_matrix};
use rigidity_core::transfer_bethe::{max_relative_transfer_commutator, transfer_commutator};
use rigidity_core::yang_baxter::default_sample_params;
use rigidity_core::{
    build_r, check_boundary_free, monodromy, transfer_commutator_norm, transfer_matrix, ComplexMatrix, ModelId,
    RMatrixSpec, SpectralFamily, Tolerances, C64,
};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn identity_family() -> RMatrixSpec {
    let fam = SpectralFamily::custom("identity", |_| Ok(ComplexMatrix::identity(4)));
    RMatrixSpec::spectral(fam, 2, default_sample_params()).unwrap()
}

#[test]
fn single_site_monodromy_of_identity() {
    assert_eq!(monodromy(&identity_family(), c(0.3), 1).unwrap(), ComplexMatrix::identity(4));
    assert_eq!(transfer_matrix(&identity_family(), c(0.3), 3).unwrap(), ComplexMatrix::identity(8).scale(c(2.0)));
    assert_eq!(transfer_commutator_norm(&identity_family(), c(0.7), c(0.3), 3).unwrap(), 0.0);
}

#[test]
fn xxx_monodromy_at_zero_is_a_three_cycle() {
    // P_{a2} P_{a1} |x_a x_1 x_2> = |x_2 x_a x_1>.
    let xxx = build_r(&ModelId::XxxRational).unwrap();
    let t = monodromy(&xxx, c(0.0), 2).unwrap();
    let oracle = ComplexMatrix::from_fn(8, |row, col| {
        let (a, s1, s2) = (col >> 2 & 1, col >> 1 & 1, col & 1);
        let image = s2 << 2 | a << 1 | s1;
        if row == image { c(1.0) } else { c(0.0) }
    });
    assert_eq!(t, oracle);
    assert_eq!(t, swap_operator(1, 3, 3, 2).unwrap().matmul(&swap_operator(1, 2, 3, 2).unwrap()));
}

#[test]
fn xxx_transfer_at_zero_is_the_shift() {
    let xxx = build_r(&ModelId::XxxRational).unwrap();
    for n in 2..=6 {
        assert_eq!(transfer_matrix(&xxx, c(0.0), n).unwrap(), cyclic_shift(n, 2).unwrap(), "n={n}");
    }
}

#[test]
fn xxx_transfer_two_sites_at_one() {
    // tr_a (1 + P_a2)(1 + P_a1) = 2 + 1 + 1 + P_12.
    let xxx = build_r(&ModelId::XxxRational).unwrap();
    let want = &ComplexMatrix::identity(4).scale(c(4.0)) + &swap_matrix(2);
    assert!(transfer_matrix(&xxx, c(1.0), 2).unwrap().max_abs_diff(&want) < 1e-14);
}

#[test]
fn transfer_is_polynomial_of_degree_n() {
    // The (n+1)-th finite difference of a degree-n polynomial vanishes.
    let xxx = build_r(&ModelId::XxxRational).unwrap();
    for n in 1..=4 {
        let ts: Vec<ComplexMatrix> = (0..=n + 1).map(|k| transfer_matrix(&xxx, c(0.25 * k as f64 - 0.5), n).unwrap()).collect();
        let mut diff = ts;
        for _ in 0..=n {
            diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        assert!(diff[0].frobenius_norm() < 1e-10, "n={n}");
    }
}

#[test]
fn xxx_transfer_matrices_commute() {
    let xxx = build_r(&ModelId::XxxRational).unwrap();
    for n in 2..=6 {
        let t = transfer_commutator(&xxx, c(0.7), c(0.3), n).unwrap();
        assert!(t.relative <= 1e-9, "n={n}: {}", t.relative);
    }
}

#[test]
fn passing_models_commute_within_defect_bound() {
    let tol = Tolerances::default().tol_ybe;
    let swap = build_r(&ModelId::Swap).unwrap();
    let models = [
        build_r(&ModelId::XxxRational).unwrap(),
        build_r(&ModelId::XxzTrig { eta: 0.5 }).unwrap(),
        build_r(&ModelId::XxzTrig { eta: 1.3 }).unwrap(),
        swap.spectral_lift(),
        identity_family(),
    ];
    for r in &models {
        assert!(check_boundary_free(r, tol).unwrap().passes);
        let params = r.sample_params().to_vec();
        for n in 2..=6 {
            for &u in &params {
                for &v in &params {
                    let tu = transfer_matrix(r, u, n).unwrap();
                    let tv = transfer_matrix(r, v, n).unwrap();
                    let bound = 100.0 * tol * tu.frobenius_norm() * tv.frobenius_norm();
                    assert!(tu.commutator(&tv).frobenius_norm() <= bound);
                }
            }
        }
    }
}

#[test]
fn perturbed_family_baselines() {
    let r = build_r(&ModelId::PerturbedSwap { epsilon: 0.1 }).unwrap();
    assert!(!check_boundary_free(&r, 1e-10).unwrap().passes);
    let lift = r.spectral_lift();
    assert_eq!(lift.evaluate(c(0.0)).unwrap(), perturbed_swap_matrix(0.1));
    // Three sites are too few to see the defect in the transfer matrices.
    assert!(max_relative_transfer_commutator(&r, 3).unwrap() < 1e-14);
    let t4 = transfer_commutator(&lift, c(0.7), c(0.3), 4).unwrap();
    assert!((t4.relative - 2.673_716_788_197_069e-3).abs() < 1e-12);
    assert!((max_relative_transfer_commutator(&r, 4).unwrap() - 1.818_888_756_339_796e-2).abs() < 1e-12);
    assert!((max_relative_transfer_commutator(&r, 5).unwrap() - 1.154_235_122_856_937e-2).abs() < 1e-12);
}

#[test]
fn random_gate_breaks_commutation() {
    let r = build_r(&ModelId::RandomGate { seed: 42 }).unwrap();
    assert!(max_relative_transfer_commutator(&r, 3).unwrap() > 1e-3);
}
