//! Seeded Monte Carlo check that Poisson-many logarithmic clusters add up to
//! the Bose-Einstein photon count.
//!
//! Samples are drawn in blocks of [`BLOCK_SIZE`]. Block `j` uses a ChaCha20
//! generator seeded with `seed_from_u64(seed)` and switched to stream `j`, so
//! blocks are independent and can run on any number of threads. Each block
//! produces an integer histogram; histograms are merged by addition, which
//! makes every report independent of thread count and scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::distributions::{
    be_pmf, cluster_count_pmf, cluster_size_pmf, BeRecurrence, Degeneracy, PhaseVolume, PmfTable, TABLE_MASS_TOLERANCE,
};
use crate::error::{domain, index, Error, Result};

/// Samples per independent RNG stream.
pub const BLOCK_SIZE: u64 = 1 << 16;
/// Poisson means below this are sampled by inversion, above by counting
/// exponential interarrival times.
pub const POISSON_INVERSION_MAX: f64 = 10.0;
/// Minimum expected count per chi-squared bin.
pub const MIN_EXPECTED: f64 = 5.0;
/// Largest cumulative table a sampler will build.
pub const MAX_TABLE_LEN: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub tau: f64,
    pub w: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(tau: f64, w: f64, n_samples: u64, seed: u64) -> Result<Self> {
        PhaseVolume::new(tau)?;
        Degeneracy::new(w)?;
        if n_samples == 0 {
            return Err(index("n_samples", 0, "at least one sample is required"));
        }
        Ok(SamplerConfig {
            tau,
            w,
            n_samples,
            seed,
        })
    }

    fn validated(&self) -> Result<(PhaseVolume, Degeneracy)> {
        let checked = SamplerConfig::new(self.tau, self.w, self.n_samples, self.seed)?;
        Ok((PhaseVolume::new(checked.tau)?, Degeneracy::new(checked.w)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMethod {
    Compound,
    Direct,
}

/// A chi-squared goodness-of-fit result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquaredTest {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

/// Cluster-count marginal recorded by the compound sampler before sizes are summed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCounts {
    /// `histogram[k]` is the number of samples with `k` clusters.
    pub histogram: Vec<u64>,
    /// Fit of the histogram against Poisson(ητ).
    pub chi2: ChiSquaredTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub config: SamplerConfig,
    pub method: SamplingMethod,
    /// Observed relative frequencies for `n = 0 … max observed`.
    pub empirical_pmf: PmfTable,
    /// Raw photon-count histogram behind `empirical_pmf`.
    pub histogram: Vec<u64>,
    /// Total variation distance to the exact law.
    pub tvd: f64,
    pub chi2_stat: f64,
    pub chi2_dof: u64,
    pub chi2_p: f64,
    pub empirical_mean: f64,
    /// Present for the compound method only.
    pub clusters: Option<ClusterCounts>,
}

fn block_rng(seed: u64, block: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Uniform draw on `(0, 1]`, safe to take the logarithm of.
fn open_uniform(rng: &mut ChaCha20Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

fn poisson_draw(rng: &mut ChaCha20Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    if mean < POISSON_INVERSION_MAX {
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = (-mean).exp();
        let mut cdf = p;
        while u >= cdf {
            k += 1;
            p *= mean / k as f64;
            let next = cdf + p;
            if next == cdf {
                break;
            }
            cdf = next;
        }
        k
    } else {
        let mut elapsed = 0.0;
        let mut k = 0u64;
        loop {
            elapsed -= open_uniform(rng).ln();
            if elapsed > mean {
                return k;
            }
            k += 1;
        }
    }
}

/// Cumulative table of the cluster-size law, truncated at mass `1 - 1e-12`.
/// Draws beyond the table land on its last index.
struct LogarithmicTable {
    cdf: Vec<f64>,
}

impl LogarithmicTable {
    fn new(w: Degeneracy) -> Result<Self> {
        if w.value() <= 0.0 {
            return Err(domain("w", w.value(), "the logarithmic law needs w > 0"));
        }
        let mut cdf = Vec::new();
        let mut total = 0.0;
        let mut k = 1u64;
        while total < 1.0 - TABLE_MASS_TOLERANCE {
            let next = total + cluster_size_pmf(k, w)?;
            if next == total || cdf.len() >= MAX_TABLE_LEN {
                break;
            }
            total = next;
            cdf.push(total);
            k += 1;
        }
        Ok(LogarithmicTable { cdf })
    }

    fn draw(&self, rng: &mut ChaCha20Rng) -> u64 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c <= u);
        i.min(self.cdf.len() - 1) as u64 + 1
    }
}

/// Cumulative Bose-Einstein table with the recurrence kept alive for
/// draws that fall past the table.
struct BeTable {
    cdf: Vec<f64>,
    rest: BeRecurrence,
}

impl BeTable {
    fn new(tau: PhaseVolume, w: Degeneracy) -> Self {
        let mut rest = BeRecurrence::new(tau, w);
        let mut cdf = Vec::new();
        let mut total = 0.0;
        for (_, p) in rest.by_ref() {
            total += p;
            cdf.push(total);
            if total >= 1.0 - TABLE_MASS_TOLERANCE || cdf.len() >= MAX_TABLE_LEN {
                break;
            }
        }
        BeTable { cdf, rest }
    }

    fn draw(&self, rng: &mut ChaCha20Rng) -> u64 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c <= u);
        if i < self.cdf.len() {
            return i as u64;
        }
        let mut total = *self.cdf.last().unwrap_or(&0.0);
        let mut last = self.cdf.len() as u64;
        for (n, p) in self.rest.clone() {
            let next = total + p;
            last = n;
            if u < next || next == total {
                break;
            }
            total = next;
        }
        last
    }
}

fn add_into(acc: &mut Vec<u64>, other: &[u64]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), 0);
    }
    for (a, &b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

fn bump(hist: &mut Vec<u64>, n: u64) {
    let n = n as usize;
    if hist.len() <= n {
        hist.resize(n + 1, 0);
    }
    hist[n] += 1;
}

fn block_lengths(total: u64) -> Vec<(u64, u64)> {
    let blocks = total.div_ceil(BLOCK_SIZE);
    (0..blocks)
        .map(|j| (j, BLOCK_SIZE.min(total - j * BLOCK_SIZE)))
        .collect()
}

/// Runs `per_block` on every block in parallel and merges the histograms.
fn sharded<F>(config: &SamplerConfig, per_block: F) -> (Vec<u64>, Vec<u64>)
where
    F: Fn(&mut ChaCha20Rng, u64, &mut Vec<u64>, &mut Vec<u64>) + Sync,
{
    block_lengths(config.n_samples)
        .into_par_iter()
        .map(|(j, len)| {
            let mut rng = block_rng(config.seed, j);
            let (mut photons, mut extra) = (Vec::new(), Vec::new());
            per_block(&mut rng, len, &mut photons, &mut extra);
            (photons, extra)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((Vec::new(), Vec::new()), |(mut a, mut b), (p, e)| {
            add_into(&mut a, &p);
            add_into(&mut b, &e);
            (a, b)
        })
}

/// Draws photon counts as sums of Poisson(ητ)-many logarithmic cluster sizes.
pub fn sample_compound(config: &SamplerConfig) -> Result<SampleReport> {
    let (tau, w) = config.validated()?;
    let mean_clusters = w.eta() * tau.value();
    let sizes = if w.value() > 0.0 {
        Some(LogarithmicTable::new(w)?)
    } else {
        None
    };
    let (photons, clusters) = sharded(config, |rng, len, photons, clusters| {
        for _ in 0..len {
            let k = poisson_draw(rng, mean_clusters);
            let n: u64 = match &sizes {
                Some(table) => (0..k).map(|_| table.draw(rng)).sum(),
                None => 0,
            };
            bump(clusters, k);
            bump(photons, n);
        }
    });
    let expected_clusters: Vec<f64> = (0..clusters.len() as u64)
        .map(|k| cluster_count_pmf(k, tau, w))
        .collect();
    let chi2 = chi_squared_fit(&clusters, &expected_clusters)?;
    build_report(
        config,
        SamplingMethod::Compound,
        photons,
        tau,
        w,
        Some(ClusterCounts {
            histogram: clusters,
            chi2,
        }),
    )
}

/// Draws photon counts directly from the Bose-Einstein law by inverse CDF.
pub fn sample_nbd_direct(config: &SamplerConfig) -> Result<SampleReport> {
    let (tau, w) = config.validated()?;
    let table = BeTable::new(tau, w);
    let (photons, _) = sharded(config, |rng, len, photons, _| {
        for _ in 0..len {
            bump(photons, table.draw(rng));
        }
    });
    build_report(config, SamplingMethod::Direct, photons, tau, w, None)
}

/// `count` independent draws from the cluster-size law, in a fixed order.
pub fn logarithmic_sampler(w: f64, seed: u64, count: u64) -> Result<Vec<u64>> {
    let w = Degeneracy::new(w)?;
    let table = LogarithmicTable::new(w)?;
    let blocks: Vec<Vec<u64>> = block_lengths(count)
        .into_par_iter()
        .map(|(j, len)| {
            let mut rng = block_rng(seed, j);
            (0..len).map(|_| table.draw(&mut rng)).collect()
        })
        .collect();
    Ok(blocks.concat())
}

fn build_report(
    config: &SamplerConfig,
    method: SamplingMethod,
    histogram: Vec<u64>,
    tau: PhaseVolume,
    w: Degeneracy,
    clusters: Option<ClusterCounts>,
) -> Result<SampleReport> {
    let n = config.n_samples as f64;
    let exact: Vec<f64> = (0..histogram.len() as u64).map(|k| be_pmf(k, tau, w)).collect();
    let chi2 = chi_squared_fit(&histogram, &exact)?;
    let entries: Vec<(u64, f64)> = histogram
        .iter()
        .enumerate()
        .map(|(k, &c)| (k as u64, c as f64 / n))
        .collect();
    let empirical_mean = histogram
        .iter()
        .enumerate()
        .map(|(k, &c)| k as f64 * c as f64)
        .sum::<f64>()
        / n;
    let empirical: Vec<f64> = entries.iter().map(|&(_, p)| p).collect();
    Ok(SampleReport {
        config: *config,
        method,
        tvd: total_variation(&empirical, &exact),
        empirical_pmf: PmfTable {
            entries,
            tail_mass: 0.0,
        },
        histogram,
        chi2_stat: chi2.statistic,
        chi2_dof: chi2.dof,
        chi2_p: chi2.p_value,
        empirical_mean,
        clusters,
    })
}

/// Total variation distance `½ Σ |p_n - q_n|` between an empirical pmf and an
/// exact one given on the same leading support. Exact mass beyond the
/// supplied entries counts in full.
pub fn total_variation(empirical: &[f64], exact: &[f64]) -> f64 {
    let len = empirical.len().max(exact.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    let shared: f64 = (0..len).map(|i| (at(empirical, i) - at(exact, i)).abs()).sum();
    let exact_tail = (1.0 - exact.iter().sum::<f64>()).max(0.0);
    (0.5 * (shared + exact_tail)).clamp(0.0, 1.0)
}

fn chi_squared_p(statistic: f64, dof: u64) -> Result<f64> {
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Config(e.to_string()))?;
    Ok(dist.sf(statistic))
}

/// Pearson goodness of fit of observed counts against a pmf.
///
/// `probabilities[k]` is the model probability of bin `k`; all model mass not
/// listed is folded into the last bin. Adjacent bins are pooled until each
/// expects at least [`MIN_EXPECTED`] counts.
pub fn chi_squared_fit(observed: &[u64], probabilities: &[f64]) -> Result<ChiSquaredTest> {
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(index("samples", 0, "chi-squared needs observations"));
    }
    let n = n as f64;
    let len = observed.len().max(probabilities.len());
    let listed: f64 = probabilities.iter().sum();
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for i in 0..len {
        obs += observed.get(i).copied().unwrap_or(0) as f64;
        exp += n * probabilities.get(i).copied().unwrap_or(0.0);
        if i + 1 == len {
            exp += n * (1.0 - listed).max(0.0);
        }
        if exp >= MIN_EXPECTED {
            bins.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    merge_leftover(&mut bins, obs, exp);
    let statistic = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    finish(statistic, bins.len())
}

/// Two-sample chi-squared homogeneity test between two histograms.
///
/// Bins are pooled until their combined count reaches `2 · MIN_EXPECTED`.
pub fn two_sample_chi_squared(a: &[u64], b: &[u64]) -> Result<ChiSquaredTest> {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return Err(index("samples", 0, "both histograms need observations"));
    }
    let len = a.len().max(b.len());
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut x, mut y) = (0.0, 0.0);
    for i in 0..len {
        x += a.get(i).copied().unwrap_or(0) as f64;
        y += b.get(i).copied().unwrap_or(0) as f64;
        if x + y >= 2.0 * MIN_EXPECTED {
            bins.push((x, y));
            x = 0.0;
            y = 0.0;
        }
    }
    merge_leftover(&mut bins, x, y);
    let (ra, rb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let statistic = bins
        .iter()
        .map(|&(x, y)| {
            let d = ra * x - rb * y;
            d * d / (x + y)
        })
        .sum();
    finish(statistic, bins.len())
}

fn merge_leftover(bins: &mut Vec<(f64, f64)>, x: f64, y: f64) {
    if x == 0.0 && y == 0.0 {
        return;
    }
    match bins.last_mut() {
        Some(last) => {
            last.0 += x;
            last.1 += y;
        }
        None => bins.push((x, y)),
    }
}

fn finish(statistic: f64, bins: usize) -> Result<ChiSquaredTest> {
    if bins < 2 {
        // A single bin carries no information; report a perfect fit.
        return Ok(ChiSquaredTest {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
        });
    }
    let dof = bins as u64 - 1;
    Ok(ChiSquaredTest {
        statistic,
        dof,
        p_value: chi_squared_p(statistic, dof)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(tau: f64, w: f64, n: u64, seed: u64) -> SamplerConfig {
        SamplerConfig::new(tau, w, n, seed).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SamplerConfig::new(1.0, 1.0, 0, 1).is_err());
        assert!(SamplerConfig::new(0.0, 1.0, 10, 1).is_err());
        assert!(SamplerConfig::new(1.0, -1.0, 10, 1).is_err());
        assert!(logarithmic_sampler(0.0, 1, 10).is_err());
    }

    #[test]
    fn block_layout() {
        assert_eq!(block_lengths(1), vec![(0, 1)]);
        assert_eq!(block_lengths(BLOCK_SIZE + 3), vec![(0, BLOCK_SIZE), (1, 3)]);
    }

    #[test]
    fn poisson_draws_have_the_right_mean() {
        for mean in [0.3, 4.0, 25.0] {
            let mut rng = block_rng(7, 0);
            let n = 200_000;
            let total: u64 = (0..n).map(|_| poisson_draw(&mut rng, mean)).sum();
            let avg = total as f64 / n as f64;
            assert!(
                (avg - mean).abs() < 5.0 * (mean / n as f64).sqrt(),
                "mean {mean}: {avg}"
            );
        }
    }

    #[test]
    fn compound_small_run_is_consistent() {
        let r = sample_compound(&cfg(1.0, 1.0, 50_000, 3)).unwrap();
        assert!((r.empirical_pmf.total() - 1.0).abs() < 1e-12);
        assert!(r.tvd < 0.02);
        assert_eq!(r.histogram.iter().sum::<u64>(), 50_000);
        assert!(r.clusters.is_some());
    }

    #[test]
    fn zero_degeneracy_gives_only_zeros() {
        let r = sample_compound(&cfg(2.0, 0.0, 1000, 1)).unwrap();
        assert_eq!(r.histogram, vec![1000]);
        assert_eq!(r.tvd, 0.0);
        let d = sample_nbd_direct(&cfg(2.0, 0.0, 1000, 1)).unwrap();
        assert_eq!(d.histogram, vec![1000]);
    }

    #[test]
    fn tvd_and_chi_squared_basics() {
        assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert!((total_variation(&[1.0], &[0.0, 1.0]) - 1.0).abs() < 1e-15);
        let fit = chi_squared_fit(&[500, 500], &[0.5, 0.5]).unwrap();
        assert_eq!(fit.statistic, 0.0);
        assert_eq!(fit.dof, 1);
        assert!((fit.p_value - 1.0).abs() < 1e-12);
        let same = two_sample_chi_squared(&[100, 200, 300], &[100, 200, 300]).unwrap();
        assert_eq!(same.statistic, 0.0);
        // χ²₁ survival at 3.841458820694124 is 0.05
        let p = chi_squared_p(3.841_458_820_694_124, 1).unwrap();
        assert!((p - 0.05).abs() < 1e-12);
    }
}
