//! Library self-check: every closed form against its numerical twin.
//!
//! [`run`] returns one [`CheckOutcome`] per comparison, grouped by criterion
//! number. [`Level::Fast`] leaves out the rows that need a million Monte
//! Carlo draws.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::distributions::{
    be_pmf, cluster_count_pmf, cluster_size_pmf, mean_photons_per_cluster, Degeneracy, PhaseVolume,
};
use crate::error::Result;
use crate::gf::max_composition_residual;
use crate::montecarlo::{logarithmic_sampler, sample_compound, SamplerConfig};
use crate::numeric::optimize::locate_peak_near;
use crate::spectra::{
    clusterization_constants, compare_lambda_spectra, energy_density_by_quadrature, log_grid, photon_number_density,
    planck_from_ranks, planck_u_nu, sigma_rank, sigma_total, u_m_nu, wien_cluster_peak, ClusterConstants,
    LambdaComparison,
};
use crate::stirling::{column_sum, factorial, StirlingTriangle};
use crate::thermo::{
    intensity_from_reduced, partition_from_reduced, rank_mode_averages, ClusterRank, ThermalMode, H, K_B,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Fast,
    Full,
}

/// How `value` is compared with `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `value < threshold`.
    Below,
    /// `value > threshold`.
    Above,
    /// `value <= threshold`.
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub name: String,
    pub value: f64,
    pub comparison: Comparison,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(criterion: u8, name: impl Into<String>, value: f64, comparison: Comparison, threshold: f64) -> Self {
        let passed = match comparison {
            Comparison::Below => value < threshold,
            Comparison::Above => value > threshold,
            Comparison::AtMost => value <= threshold,
        };
        CheckOutcome {
            criterion,
            name: name.into(),
            value,
            comparison,
            threshold,
            passed,
        }
    }

    fn below(criterion: u8, name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(criterion, name, value, Comparison::Below, threshold)
    }
}

/// `|round(x, digits) - printed|`, zero when `x` prints as `printed`.
pub fn printed_mismatch(x: f64, printed: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    ((x * scale).round() - (printed * scale).round()).abs()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn rank(m: u32) -> ClusterRank {
    ClusterRank::new(m).expect("ranks start at 1")
}

pub const MC_SAMPLES: u64 = 1_000_000;
pub const MC_SEED: u64 = 42;
pub const MC_TAUS: [f64; 3] = [0.5, 1.0, 4.0];
pub const MC_WS: [f64; 3] = [0.1, 1.0, 10.0];
pub const COMPOSITION_TAUS: [f64; 4] = [0.5, 1.0, 2.0, 7.0];
pub const COMPOSITION_WS: [f64; 4] = [0.01, 1.0, 10.0, 100.0];

pub fn run(level: Level) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let constants = clusterization_constants();
    energy_fractions(&constants, &mut out);
    photon_fractions(&constants, &mut out);
    sigma_checks(&mut out)?;
    composition(&mut out)?;
    stirling_sums(&mut out)?;
    if level == Level::Full {
        compound_sampling(&mut out)?;
    }
    planck_reconstruction(&mut out)?;
    wien_peaks(&mut out)?;
    lambda_comparison(&mut out)?;
    cluster_size(level, &mut out)?;
    identities(&mut out)?;
    Ok(out)
}

fn energy_fractions(c: &ClusterConstants, out: &mut Vec<CheckOutcome>) {
    out.push(CheckOutcome::new(
        1,
        "phi prints as 0.9239",
        printed_mismatch(c.phi, 0.9239, 4),
        Comparison::AtMost,
        0.0,
    ));
    out.push(CheckOutcome::below(
        1,
        "phi vs 90/pi^4",
        (c.phi - 90.0 / PI.powi(4)).abs(),
        1e-12,
    ));
    out.push(CheckOutcome::new(
        2,
        "theta prints as 0.0761",
        printed_mismatch(c.theta, 0.0761, 4),
        Comparison::AtMost,
        0.0,
    ));
    out.push(CheckOutcome::new(
        2,
        "phi + theta - 1",
        (c.phi + c.theta - 1.0).abs(),
        Comparison::AtMost,
        0.0,
    ));
}

fn photon_fractions(c: &ClusterConstants, out: &mut Vec<CheckOutcome>) {
    // Σ N_m / N_1 summed rank by rank; the tail after M ranks is below 1/(2M²).
    let n1 = photon_number_density(rank(1), 1.0).expect("T = 1 is valid");
    let ratio: f64 = (1..=200_000u32)
        .rev()
        .map(|m| photon_number_density(rank(m), 1.0).expect("T = 1 is valid") / n1)
        .sum();
    out.push(CheckOutcome::new(
        3,
        "sum N_m / N_1 prints as 1.2021",
        printed_mismatch(ratio, 1.2021, 4),
        Comparison::AtMost,
        0.0,
    ));
    out.push(CheckOutcome::below(
        3,
        "sum N_m / N_1 vs zeta(3)",
        (ratio - c.zeta3_ratio).abs(),
        1e-10,
    ));
    let fraction = 1.0 - 1.0 / ratio;
    out.push(CheckOutcome::new(
        3,
        "coalescent fraction prints as 0.168",
        printed_mismatch(fraction, 0.168, 3),
        Comparison::AtMost,
        0.0,
    ));
}

fn sigma_checks(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let s1 = sigma_rank(rank(1));
    let ratio_err = (sigma_rank(rank(2)) / s1 - 1.0 / 16.0)
        .abs()
        .max((sigma_rank(rank(3)) / s1 - 1.0 / 81.0).abs());
    out.push(CheckOutcome::below(
        4,
        "sigma_2/sigma_1 = 1/16, sigma_3/sigma_1 = 1/81",
        ratio_err,
        1e-15,
    ));
    let mut quad_err: f64 = 0.0;
    for t in [300.0, 6000.0] {
        for m in 1..=3 {
            let q = energy_density_by_quadrature(rank(m), t)?;
            quad_err = quad_err.max(rel(q.value, sigma_rank(rank(m)) * t.powi(4)));
        }
    }
    out.push(CheckOutcome::below(4, "sigma_m by quadrature", quad_err, 1e-8));
    let series = ClusterConstants::sigma_series(100_000);
    out.push(CheckOutcome::below(
        4,
        "sum sigma_m vs 8 pi^5 k^4 / 15 c^3 h^3",
        rel(series, sigma_total()),
        1e-10,
    ));
    Ok(())
}

fn composition(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let zs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let residual = max_composition_residual(&zs, &COMPOSITION_TAUS, &COMPOSITION_WS)?;
    out.push(CheckOutcome::below(5, "max |P(z) - G(F(z))|", residual, 1e-12));
    Ok(())
}

fn stirling_sums(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let mut worst: f64 = 0.0;
    for k in 1..=12usize {
        let limit = std::f64::consts::LN_2.powi(k as i32) / (1..=k).map(|j| j as f64).product::<f64>();
        worst = worst.max((column_sum(k, 0.5, 80)? - limit).abs());
    }
    out.push(CheckOutcome::below(
        6,
        "column sums vs ln^k(2)/k!, k <= 12",
        worst,
        1e-10,
    ));
    let triangle = StirlingTriangle::new(60);
    let wrong_rows = (0..=60).filter(|&n| triangle.row_sum(n) != Some(factorial(n))).count();
    out.push(CheckOutcome::new(
        6,
        "row sums equal n!, n <= 60",
        wrong_rows as f64,
        Comparison::AtMost,
        0.0,
    ));
    Ok(())
}

fn compound_sampling(out: &mut Vec<CheckOutcome>) -> Result<()> {
    for &tau in &MC_TAUS {
        for &w in &MC_WS {
            let report = sample_compound(&SamplerConfig::new(tau, w, MC_SAMPLES, MC_SEED)?)?;
            out.push(CheckOutcome::below(
                7,
                format!("compound TVD tau={tau} w={w}"),
                report.tvd,
                0.005,
            ));
            let p = report.clusters.as_ref().map_or(0.0, |c| c.chi2.p_value);
            out.push(CheckOutcome::new(
                7,
                format!("cluster count chi2 p tau={tau} w={w}"),
                p,
                Comparison::Above,
                1e-4,
            ));
        }
    }
    Ok(())
}

fn planck_reconstruction(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let t = 6000.0;
    let peak = wien_cluster_peak(rank(1), t)?;
    let mut worst: f64 = 0.0;
    for nu in log_grid(0.01 * peak, 10.0 * peak, 200)? {
        let (sum, _) = planck_from_ranks(nu, t, 1e-12)?;
        worst = worst.max(rel(sum, planck_u_nu(nu, t)?));
    }
    out.push(CheckOutcome::below(
        8,
        "rank sum vs Planck, 200 points at 6000 K",
        worst,
        1e-10,
    ));
    Ok(())
}

fn wien_peaks(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let t = 6000.0;
    let mut worst: f64 = 0.0;
    for m in 1..=6 {
        let closed = wien_cluster_peak(rank(m), t)?;
        // Start the search well away from the answer.
        let numeric = locate_peak_near(|nu| u_m_nu(nu, t, rank(m)).unwrap_or(0.0), 0.7 * closed);
        worst = worst.max(rel(numeric, closed));
    }
    out.push(CheckOutcome::below(
        9,
        "numeric argmax vs 3kT/(mh), m <= 6",
        worst,
        1e-9,
    ));
    Ok(())
}

fn lambda_comparison(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let base = compare_lambda_spectra(6000.0)?;
    out.push(CheckOutcome::new(
        10,
        "peak ratio - 1.075",
        (base.peak_ratio - 1.075).abs(),
        Comparison::AtMost,
        0.001,
    ));
    out.push(CheckOutcome::new(
        10,
        "peak offset - 0.007",
        (base.peak_offset_rel - 0.007).abs(),
        Comparison::AtMost,
        0.0005,
    ));
    out.push(CheckOutcome::below(
        10,
        "relative area difference",
        base.area_rel_diff,
        1e-8,
    ));
    let spread = |other: &LambdaComparison| {
        (other.peak_ratio - base.peak_ratio)
            .abs()
            .max((other.peak_offset_rel - base.peak_offset_rel).abs())
            .max((other.area_rel_diff - base.area_rel_diff).abs())
    };
    for t in [300.0, 30000.0] {
        let other = compare_lambda_spectra(t)?;
        out.push(CheckOutcome::below(
            10,
            format!("comparison at {t} K vs 6000 K"),
            spread(&other),
            1e-10,
        ));
    }
    Ok(())
}

fn cluster_size(level: Level, out: &mut Vec<CheckOutcome>) -> Result<()> {
    let w = Degeneracy::new(50.0)?;
    let analytic = mean_photons_per_cluster(w)?;
    out.push(CheckOutcome::new(
        11,
        "w/ln(1+w) at w=50 - 12.72",
        (analytic - 12.72).abs(),
        Comparison::AtMost,
        0.01,
    ));
    if level == Level::Full {
        let draws = logarithmic_sampler(50.0, MC_SEED, MC_SAMPLES)?;
        let mean = draws.iter().sum::<u64>() as f64 / draws.len() as f64;
        out.push(CheckOutcome::new(
            11,
            "sampled mean cluster size at w=50",
            (mean - analytic).abs(),
            Comparison::AtMost,
            0.1,
        ));
    }
    Ok(())
}

fn identities(out: &mut Vec<CheckOutcome>) -> Result<()> {
    let mut eta_err: f64 = 0.0;
    for nu in [1e9, 1e11, 1e13, 5e14, 1e16] {
        for t in [2.725, 300.0, 6000.0, 1e5] {
            let mode = ThermalMode::new(nu, t)?;
            let x = mode.x();
            if x > 700.0 {
                continue;
            }
            let eta = intensity_from_reduced(x)?;
            let ln_z = partition_from_reduced(x)?.ln();
            eta_err = eta_err.max((eta - ln_z).abs() / eta.max(1.0));
        }
    }
    out.push(CheckOutcome::below(
        12,
        "eta = ln Z over a (nu, T) grid",
        eta_err,
        1e-14,
    ));

    let mut g0_err: f64 = 0.0;
    for tau in [0.5, 1.0, 2.0, 7.0] {
        for w in [0.01, 1.0, 10.0, 100.0] {
            let (tau, w) = (PhaseVolume::new(tau)?, Degeneracy::new(w)?);
            g0_err = g0_err.max((cluster_count_pmf(0, tau, w) - be_pmf(0, tau, w)).abs());
        }
    }
    out.push(CheckOutcome::below(12, "g_0 = p_0", g0_err, 1e-14));

    let mut size_err: f64 = 0.0;
    for w in [0.01, 1.0, 10.0, 100.0] {
        let d = Degeneracy::new(w)?;
        let mut total = 0.0;
        let mut k = 1;
        loop {
            let f = cluster_size_pmf(k, d)?;
            total += f;
            if f < 1e-17 * total && k > 1 {
                break;
            }
            k += 1;
        }
        size_err = size_err.max((total - 1.0).abs());
    }
    out.push(CheckOutcome::below(12, "sum f_m = 1", size_err, 1e-12));

    let mut occupancy_err: f64 = 0.0;
    for x in [0.1, 1.0, 4.0, 10.0] {
        let mode = ThermalMode::new(x * K_B * 1000.0 / H, 1000.0)?;
        let w = crate::thermo::degeneracy(&mode).value();
        let mut total = 0.0;
        for m in 1.. {
            let a = rank_mode_averages(&mode, rank(m));
            total += m as f64 * a.eta_m;
            if a.k_m < 1e-17 * total {
                break;
            }
        }
        occupancy_err = occupancy_err.max(rel(total, w));
    }
    out.push(CheckOutcome::below(12, "sum m eta_m = w", occupancy_err, 1e-12));
    Ok(())
}
