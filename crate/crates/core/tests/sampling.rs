use photon_clusters::distributions::{cluster_size_pmf, Degeneracy};
use photon_clusters::montecarlo::{
    chi_squared_fit, logarithmic_sampler, sample_compound, sample_nbd_direct, two_sample_chi_squared, SampleReport,
    SamplerConfig, SamplingMethod, BLOCK_SIZE,
};

fn cfg(tau: f64, w: f64, n: u64, seed: u64) -> SamplerConfig {
    SamplerConfig::new(tau, w, n, seed).unwrap()
}

fn on_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn bytes(r: &SampleReport) -> String {
    serde_json::to_string(r).unwrap()
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let c = cfg(1.5, 2.0, 5 * BLOCK_SIZE + 17, 9);
    let one = on_threads(1, || sample_compound(&c).unwrap());
    let many = on_threads(7, || sample_compound(&c).unwrap());
    assert_eq!(bytes(&one), bytes(&many));
    let one = on_threads(1, || sample_nbd_direct(&c).unwrap());
    let many = on_threads(3, || sample_nbd_direct(&c).unwrap());
    assert_eq!(bytes(&one), bytes(&many));
    let a = on_threads(1, || logarithmic_sampler(3.0, 5, 3 * BLOCK_SIZE).unwrap());
    let b = on_threads(5, || logarithmic_sampler(3.0, 5, 3 * BLOCK_SIZE).unwrap());
    assert_eq!(a, b);
}

#[test]
fn identical_configs_give_identical_reports() {
    let c = cfg(2.0, 1.0, 100_000, 42);
    assert_eq!(
        bytes(&sample_compound(&c).unwrap()),
        bytes(&sample_compound(&c).unwrap())
    );
    assert_eq!(
        bytes(&sample_nbd_direct(&c).unwrap()),
        bytes(&sample_nbd_direct(&c).unwrap())
    );
    let other = sample_compound(&cfg(2.0, 1.0, 100_000, 43)).unwrap();
    assert_ne!(bytes(&sample_compound(&c).unwrap()), bytes(&other));
}

#[test]
fn compound_unit_cell_at_unit_degeneracy() {
    let r = sample_compound(&cfg(1.0, 1.0, 1_000_000, 42)).unwrap();
    assert_eq!(r.method, SamplingMethod::Compound);
    assert!(r.tvd < 0.005, "tvd = {}", r.tvd);
    assert!((r.empirical_pmf.total() - 1.0).abs() < 1e-12);
    // mean wτ, variance wτ(1+w)
    let sd = (1.0f64 * 2.0).sqrt();
    assert!((r.empirical_mean - 1.0).abs() < 4.0 * sd / 1000.0);
    let clusters = r.clusters.unwrap();
    assert!(clusters.chi2.p_value > 1e-4);
}

#[test]
fn direct_sampler_fractional_volume() {
    let r = sample_nbd_direct(&cfg(3.5, 2.0, 1_000_000, 42)).unwrap();
    assert_eq!(r.method, SamplingMethod::Direct);
    assert!(r.clusters.is_none());
    assert!(r.tvd < 0.005, "tvd = {}", r.tvd);
    assert!(r.chi2_p > 1e-4, "p = {}", r.chi2_p);
    let sd = (3.5f64 * 2.0 * 3.0).sqrt();
    assert!((r.empirical_mean - 7.0).abs() < 4.0 * sd / 1000.0);
}

#[test]
fn compound_and_direct_samples_are_homogeneous() {
    for (tau, w) in [(1.0, 1.0), (0.5, 10.0), (4.0, 0.1)] {
        let a = sample_compound(&cfg(tau, w, 1_000_000, 1)).unwrap();
        let b = sample_nbd_direct(&cfg(tau, w, 1_000_000, 2)).unwrap();
        let test = two_sample_chi_squared(&a.histogram, &b.histogram).unwrap();
        assert!(test.p_value > 1e-4, "tau={tau} w={w}: {test:?}");
    }
}

#[test]
fn small_degeneracy_is_nearly_poisson() {
    let w = 1e-4;
    let r = sample_compound(&cfg(1.0, w, 200_000, 42)).unwrap();
    assert!(r.tvd < 0.005);
    let clusters = r.clusters.unwrap();
    // With b ≈ w nearly every cluster is a single photon.
    let multi_photon: u64 = r.histogram.iter().skip(2).sum();
    let multi_cluster: u64 = clusters.histogram.iter().skip(2).sum();
    assert!(multi_photon <= multi_cluster + 5);
}

#[test]
fn logarithmic_draws_at_high_degeneracy() {
    let draws = logarithmic_sampler(50.0, 42, 1_000_000).unwrap();
    assert_eq!(draws.len(), 1_000_000);
    let mean = draws.iter().sum::<u64>() as f64 / draws.len() as f64;
    assert!((mean - 12.716_738_907_202_113).abs() < 0.1, "mean = {mean}");

    let d = Degeneracy::new(50.0).unwrap();
    let max = *draws.iter().max().unwrap() as usize;
    let mut hist = vec![0u64; max + 1];
    for &k in &draws {
        hist[k as usize] += 1;
    }
    let probs: Vec<f64> = (0..=max as u64)
        .map(|k| if k == 0 { 0.0 } else { cluster_size_pmf(k, d).unwrap() })
        .collect();
    let fit = chi_squared_fit(&hist, &probs).unwrap();
    assert!(fit.p_value > 1e-4, "{fit:?}");
}

#[test]
fn logarithmic_draws_at_tiny_degeneracy() {
    let draws = logarithmic_sampler(1e-4, 3, 100_000).unwrap();
    let singles = draws.iter().filter(|&&k| k == 1).count();
    assert!(draws.iter().all(|&k| k >= 1));
    assert!(singles as f64 / draws.len() as f64 > 0.999);
}

#[test]
fn reports_roundtrip_through_json() {
    let r = sample_compound(&cfg(0.5, 1.0, 1000, 8)).unwrap();
    let text = bytes(&r);
    let back: SampleReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}
