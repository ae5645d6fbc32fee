use proptest::prelude::*;

use photon_clusters::distributions::{
    be_pmf, be_pmf_table, cluster_count_pmf, cluster_size_pmf, nbd_pmf, BernoulliParam, Degeneracy, PhaseVolume,
};
use photon_clusters::gf::{composition_residual, gf_be};
use photon_clusters::spectra::{planck_from_ranks, planck_u_nu};
use photon_clusters::stirling::StirlingTriangle;
use photon_clusters::thermo::{intensity_from_reduced, occupation, partition_from_reduced};

proptest! {
    #[test]
    fn nbd_and_be_agree(n in 0u64..400, tau in 0.05f64..40.0, w in 0.001f64..200.0) {
        let (t, d) = (PhaseVolume::new(tau).unwrap(), Degeneracy::new(w).unwrap());
        let p = BernoulliParam::new(d.p()).unwrap();
        let be = be_pmf(n, t, d);
        let nbd = nbd_pmf(n, t, p);
        prop_assert!((be - nbd).abs() <= 1e-12_f64.max(1e-8 * be), "be {be} nbd {nbd}");
    }

    #[test]
    fn tables_carry_their_mass(tau in 0.1f64..20.0, w in 0.01f64..50.0) {
        let table = be_pmf_table(1_000_000, PhaseVolume::new(tau).unwrap(), Degeneracy::new(w).unwrap());
        prop_assert!((table.total() + table.tail_mass - 1.0).abs() < 1e-12);
        prop_assert!(table.tail_mass <= 1e-12);
        prop_assert!(table.probabilities().all(|p| (0.0..=1.0).contains(&p)));
    }

    #[test]
    fn cluster_count_at_zero_is_p0(tau in 0.01f64..50.0, w in 0.0f64..1000.0) {
        let (t, d) = (PhaseVolume::new(tau).unwrap(), Degeneracy::new(w).unwrap());
        prop_assert!((cluster_count_pmf(0, t, d) - be_pmf(0, t, d)).abs() < 1e-14);
    }

    #[test]
    fn cluster_sizes_decrease(k in 1u64..500, w in 0.01f64..1000.0) {
        let d = Degeneracy::new(w).unwrap();
        prop_assert!(cluster_size_pmf(k + 1, d).unwrap() < cluster_size_pmf(k, d).unwrap());
    }

    #[test]
    fn composition_holds(z in 0.0f64..=1.0, tau in 0.1f64..10.0, w in 0.001f64..500.0) {
        let (t, d) = (PhaseVolume::new(tau).unwrap(), Degeneracy::new(w).unwrap());
        prop_assert!(composition_residual(z, t, d).unwrap() < 1e-12);
        let p = gf_be(z, t, d).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0);
    }

    #[test]
    fn thermal_identities(x in 1e-8f64..500.0) {
        let eta = intensity_from_reduced(x).unwrap();
        let ln_z = partition_from_reduced(x).unwrap().ln();
        prop_assert!((eta - ln_z).abs() <= 1e-14 * eta.max(1.0));
        let w = occupation(x).unwrap();
        prop_assert!((eta - w.ln_1p()).abs() <= 1e-12 * eta);
    }

    #[test]
    fn rank_sums_reconstruct_planck(nu in 1e11f64..3e15, t in 300.0f64..30000.0) {
        let (sum, ranks) = planck_from_ranks(nu, t, 1e-12).unwrap();
        let exact = planck_u_nu(nu, t).unwrap();
        prop_assert!(ranks >= 1);
        if exact > 0.0 {
            prop_assert!(((sum - exact) / exact).abs() < 1e-11);
        }
    }
}

#[test]
fn stirling_recurrence_over_the_triangle() {
    let t = StirlingTriangle::new(40);
    for n in 1..40 {
        for k in 1..=n + 1 {
            let lhs = t.get(n + 1, k).unwrap().clone();
            let rhs = t.get(n, k - 1).unwrap() + t.get(n, k).cloned().unwrap_or_default() * n;
            assert_eq!(lhs, rhs, "n={n} k={k}");
        }
    }
}
