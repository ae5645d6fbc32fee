//! Photon-count and cluster laws for Bose-Einstein radiation.
//!
//! A region of `τ` coherence volumes holding on average `w` photons per
//! volume has the photon-count law
//!
//! ```text
//! p_n(τ) = C(τ+n-1, n) · wⁿ / (1+w)^(n+τ)
//! ```
//!
//! which is a negative binomial law with `p = 1/(1+w)`. The same law arises
//! as a compound Poisson process: clusters arrive with Poisson intensity
//! `η = ln(1+w)` per volume and each cluster carries `k ≥ 1` photons with the
//! logarithmic law `f_k = b^k / (k η)`, `b = w/(1+w)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, index, Result};
use crate::numeric::special::{ln_gamma, ln_rising_binomial, rising_binomial_direct, DIRECT_PRODUCT_MAX};

/// Tables stop once their cumulative mass reaches `1 - TABLE_MASS_TOLERANCE`.
pub const TABLE_MASS_TOLERANCE: f64 = 1e-12;

/// Mean number of photons per coherence volume.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Degeneracy(f64);

impl Degeneracy {
    pub fn new(w: f64) -> Result<Self> {
        if w.is_finite() && w >= 0.0 {
            Ok(Degeneracy(w))
        } else {
            Err(domain("w", w, "w must be finite and >= 0"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Negative binomial success probability `1/(1+w)`.
    pub fn p(self) -> f64 {
        1.0 / (1.0 + self.0)
    }

    /// `w/(1+w)`, the ratio of successive single-cell probabilities.
    pub fn b(self) -> f64 {
        self.0 / (1.0 + self.0)
    }

    /// `ln b`, finite only for `w > 0`.
    pub fn ln_b(self) -> f64 {
        self.0.ln() - self.0.ln_1p()
    }

    /// Cluster intensity `η = ln(1+w)`.
    pub fn eta(self) -> f64 {
        self.0.ln_1p()
    }
}

/// Phase-space volume in units of coherence volumes. Need not be an integer.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PhaseVolume(f64);

impl PhaseVolume {
    pub fn new(tau: f64) -> Result<Self> {
        if tau.is_finite() && tau > 0.0 {
            Ok(PhaseVolume(tau))
        } else {
            Err(domain("tau", tau, "tau must be finite and > 0"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Success probability of the negative binomial parameterization.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BernoulliParam(f64);

impl BernoulliParam {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p <= 1.0 {
            Ok(BernoulliParam(p))
        } else {
            Err(domain("p", p, "p must lie in (0, 1]"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A finite slice of a discrete law together with the mass it leaves out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfTable {
    pub entries: Vec<(u64, f64)>,
    pub tail_mass: f64,
}

impl PmfTable {
    /// Builds a table whose tail mass is whatever the entries leave out of 1.
    pub fn from_entries(entries: Vec<(u64, f64)>) -> Self {
        let total: f64 = entries.iter().map(|&(_, p)| p).sum();
        PmfTable {
            entries,
            tail_mass: (1.0 - total).max(0.0),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    pub fn probability(&self, n: u64) -> Option<f64> {
        self.entries.iter().find(|&&(m, _)| m == n).map(|&(_, p)| p)
    }

    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|&(n, p)| n as f64 * p).sum()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|&(_, p)| p)
    }
}

/// Bose-Einstein photon-count probability for `n` photons in volume `τ`.
pub fn be_pmf(n: u64, tau: PhaseVolume, w: Degeneracy) -> f64 {
    if w.value() == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let tau = tau.value();
    let log_p0 = -tau * w.eta();
    if n == 0 {
        return log_p0.exp();
    }
    let p = if n <= DIRECT_PRODUCT_MAX {
        rising_binomial_direct(n, tau) * w.b().powi(n as i32) * log_p0.exp()
    } else {
        (ln_rising_binomial(n, tau) + n as f64 * w.ln_b() + log_p0).exp()
    };
    p.clamp(0.0, 1.0)
}

/// Tabulates `p_0 … p_N` by the ratio recurrence `p_{n+1} = p_n (τ+n)/(n+1) b`,
/// where `N` is `n_max` or the first index at which the cumulative mass
/// reaches `1 - 1e-12`, whichever comes first.
pub fn be_pmf_table(n_max: u64, tau: PhaseVolume, w: Degeneracy) -> PmfTable {
    let mut entries = Vec::new();
    let mut total = 0.0;
    for (n, p) in BeRecurrence::new(tau, w).take_while(|&(n, _)| n <= n_max) {
        entries.push((n, p));
        total += p;
        if total >= 1.0 - TABLE_MASS_TOLERANCE {
            break;
        }
    }
    PmfTable {
        entries,
        tail_mass: (1.0 - total).max(0.0),
    }
}

/// Unbounded iterator over `(n, p_n)` for the Bose-Einstein law.
///
/// Uses the ratio recurrence, except when `p_0` underflows, in which case
/// every entry is evaluated in log space.
#[derive(Debug, Clone)]
pub struct BeRecurrence {
    tau: PhaseVolume,
    w: Degeneracy,
    b: f64,
    n: u64,
    current: f64,
    log_space: bool,
}

impl BeRecurrence {
    pub fn new(tau: PhaseVolume, w: Degeneracy) -> Self {
        let p0 = be_pmf(0, tau, w);
        BeRecurrence {
            tau,
            w,
            b: w.b(),
            n: 0,
            current: p0,
            log_space: p0 < f64::MIN_POSITIVE,
        }
    }
}

impl Iterator for BeRecurrence {
    type Item = (u64, f64);

    fn next(&mut self) -> Option<(u64, f64)> {
        let n = self.n;
        let p = if self.log_space {
            be_pmf(n, self.tau, self.w)
        } else {
            self.current
        };
        self.current = p * (self.tau.value() + n as f64) / (n + 1) as f64 * self.b;
        self.n += 1;
        Some((n, p))
    }
}

/// Negative binomial probability `C(τ+n-1, n) p^τ (1-p)^n`.
pub fn nbd_pmf(n: u64, tau: PhaseVolume, p: BernoulliParam) -> f64 {
    let (tau, p) = (tau.value(), p.value());
    let q = 1.0 - p;
    if q == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let log_head = tau * p.ln();
    let value = if n <= DIRECT_PRODUCT_MAX {
        rising_binomial_direct(n, tau) * q.powi(n as i32) * log_head.exp()
    } else {
        (ln_rising_binomial(n, tau) + n as f64 * q.ln() + log_head).exp()
    };
    value.clamp(0.0, 1.0)
}

/// Probability of finding `k` clusters (of any rank) in volume `τ`: a Poisson
/// law with mean `η τ`.
pub fn cluster_count_pmf(k: u64, tau: PhaseVolume, w: Degeneracy) -> f64 {
    poisson_pmf(k, w.eta() * tau.value())
}

pub(crate) fn poisson_pmf(k: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k <= DIRECT_PRODUCT_MAX {
        let head = (1..=k).fold(1.0, |acc, j| acc * mean / j as f64);
        head * (-mean).exp()
    } else {
        let kf = k as f64;
        (kf * mean.ln() - mean - ln_gamma(kf + 1.0)).exp()
    }
}

/// Probability that a cluster holds exactly `k` photons, `b^k / (k η)`.
pub fn cluster_size_pmf(k: u64, w: Degeneracy) -> Result<f64> {
    if k == 0 {
        return Err(index("k", 0, "clusters hold at least one photon"));
    }
    if w.value() == 0.0 {
        return Err(domain("w", 0.0, "cluster sizes need w > 0 (η = 0)"));
    }
    let bk = if k <= 64 {
        w.b().powi(k as i32)
    } else {
        (k as f64 * w.ln_b()).exp()
    };
    Ok(bk / (k as f64 * w.eta()))
}

/// Relative probability `q_n = p_n / p_0 = (bⁿ/n!) τ(τ+1)…(τ+n-1)`.
pub fn relative_prob(n: u64, tau: PhaseVolume, w: Degeneracy) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if w.value() == 0.0 {
        return 0.0;
    }
    let tau = tau.value();
    if n <= DIRECT_PRODUCT_MAX {
        rising_binomial_direct(n, tau) * w.b().powi(n as i32)
    } else {
        (ln_rising_binomial(n, tau) + n as f64 * w.ln_b()).exp()
    }
}

/// Mean photons per cluster, `w / ln(1+w)`. Rejects `w = 0`.
pub fn mean_photons_per_cluster(w: Degeneracy) -> Result<f64> {
    if w.value() == 0.0 {
        return Err(domain("w", 0.0, "mean cluster size needs w > 0"));
    }
    Ok(w.value() / w.eta())
}

/// As [`mean_photons_per_cluster`], but returns the `w → 0⁺` limit `1` at `w = 0`.
pub fn mean_photons_per_cluster_or_limit(w: Degeneracy) -> f64 {
    mean_photons_per_cluster(w).unwrap_or(1.0)
}
