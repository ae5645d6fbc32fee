use photon_clusters::distributions::{be_pmf, cluster_count_pmf, cluster_size_pmf, Degeneracy, PhaseVolume};
use photon_clusters::montecarlo::{sample_compound, sample_nbd_direct, SampleReport, SamplerConfig};
use photon_clusters::spectra::{
    cluster_lambda_peak, clusterization_constants, compare_lambda_spectra, log_grid, modified_planck_lambda,
    planck_lambda, planck_u_nu, ranks_needed, u_m_lambda, u_m_nu, wien_cluster_peak,
};
use photon_clusters::thermo::{degeneracy, ClusterRank, ThermalMode, H, K_B};
use photon_clusters::verify;

use crate::args::{Level, Method, PmfArgs, PmfKind, SampleArgs, Space, SpectrumArgs, VerifyArgs};
use crate::config::Config;
use crate::error::{usage, CliError};
use crate::output::{Cell, Document, Table};

pub const DEFAULT_TAU: f64 = 1.0;
pub const DEFAULT_N_MAX: u64 = 20;
pub const DEFAULT_POINTS: usize = 200;
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 42;
/// Relative truncation error allowed when `--rank all` picks the number of ranks.
pub const ALL_RANKS_TOLERANCE: f64 = 1e-12;
/// Upper limit on the rank columns `--rank all` may produce.
pub const MAX_RANK_COLUMNS: u32 = 10_000;
/// Default grid spans these multiples of the closed-form peak.
pub const GRID_SPAN: (f64, f64) = (0.01, 10.0);
/// Temperature used for the λ-law comparison in `constants`; the ratios do
/// not depend on it.
pub const COMPARISON_TEMPERATURE: f64 = 6000.0;

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be a finite number > 0, got {v}")))
    }
}

pub fn pmf(args: &PmfArgs, config: &Config, command: &str, precision: usize) -> Result<Document, CliError> {
    // Flags pick the source; config values only apply when no source flag is given,
    // and then a configured w wins over a configured mode.
    let flagged = args.w.is_some() || args.nu.is_some() || args.temp.is_some();
    let (w, nu, temp) = if flagged {
        (args.w, args.nu, args.temp)
    } else if let Some(w) = config.get("w")? {
        (Some(w), None, None)
    } else {
        (None, config.get("nu")?, config.get("temp")?)
    };
    let w = match (w, nu, temp) {
        (Some(w), None, None) => w,
        (Some(_), _, _) => return Err(usage("give either --w or --nu with --temp, not both")),
        (None, Some(nu), Some(t)) => degeneracy(&ThermalMode::new(nu, t)?).value(),
        (None, None, None) => return Err(usage("one of --w or --nu with --temp is required")),
        _ => return Err(usage("--nu and --temp must be given together")),
    };
    let w = Degeneracy::new(w)?;
    let tau = PhaseVolume::new(config.or(args.tau, "tau")?.unwrap_or(DEFAULT_TAU))?;
    let n_max = config.or(args.n_max, "n-max")?.unwrap_or(DEFAULT_N_MAX);
    let kind = config.or_enum(args.kind, "kind")?.unwrap_or(PmfKind::Photons);

    let (label, first) = match kind {
        PmfKind::Photons => ("n", 0),
        PmfKind::Clusters => ("k", 0),
        PmfKind::Sizes => ("k", 1),
    };
    let mut table = Table::new([label, "probability"]);
    let mut total = 0.0;
    for n in first..=n_max {
        let p = match kind {
            PmfKind::Photons => be_pmf(n, tau, w),
            PmfKind::Clusters => cluster_count_pmf(n, tau, w),
            PmfKind::Sizes => cluster_size_pmf(n, w)?,
        };
        total += p;
        table.push(vec![n.into(), p.into()]);
    }
    if kind == PmfKind::Sizes && n_max == 0 {
        // No rows, but the law still has to exist.
        cluster_size_pmf(1, w)?;
    }
    table.push(vec!["tail".into(), (1.0 - total).max(0.0).into()]);
    let mut doc = Document::new(command, precision, table);
    let kind_name = match kind {
        PmfKind::Photons => "photons",
        PmfKind::Clusters => "clusters",
        PmfKind::Sizes => "sizes",
    };
    doc.summary = vec![
        ("kind".into(), kind_name.into()),
        ("tau".into(), tau.value().into()),
        ("w".into(), w.value().into()),
    ];
    Ok(doc)
}

/// Ranks requested by `--rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankRequest {
    UpTo(u32),
    All,
    Total,
}

pub fn parse_rank(s: &str) -> Result<RankRequest, CliError> {
    match s {
        "all" => Ok(RankRequest::All),
        "total" => Ok(RankRequest::Total),
        _ => match s.parse::<u32>() {
            Ok(m) if m >= 1 => Ok(RankRequest::UpTo(m)),
            _ => Err(usage(format!(
                "--rank expects a rank >= 1, `all` or `total`, got `{s}`"
            ))),
        },
    }
}

/// Ranks whose λ-tail `Σ_{m>M} m⁻⁴ < 1/(3M³)` stays below `tol ζ(4)`.
fn lambda_ranks_needed(tol: f64) -> u32 {
    let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
    (1.0 / (3.0 * tol * zeta4)).cbrt().ceil() as u32
}

pub fn spectrum(args: &SpectrumArgs, config: &Config, command: &str, precision: usize) -> Result<Document, CliError> {
    let temp = config
        .or(args.temp, "temp")?
        .ok_or_else(|| usage("--temp is required"))?;
    let temp = positive("temp", temp)?;
    let space = config.or_enum(args.space, "space")?.unwrap_or(Space::Nu);
    let rank = parse_rank(&config.or(args.rank.clone(), "rank")?.unwrap_or_else(|| "total".into()))?;
    let points = config.or(args.points, "points")?.unwrap_or(DEFAULT_POINTS);
    if points < 2 {
        return Err(usage(format!("--points must be at least 2, got {points}")));
    }
    let peak = match space {
        Space::Nu => wien_cluster_peak(ClusterRank::new(1)?, temp)?,
        Space::Lambda => cluster_lambda_peak(temp)?,
    };
    let lo = positive("min", config.or(args.min, "min")?.unwrap_or(GRID_SPAN.0 * peak))?;
    let hi = positive("max", config.or(args.max, "max")?.unwrap_or(GRID_SPAN.1 * peak))?;
    if hi <= lo {
        return Err(usage(format!("--max ({hi}) must exceed --min ({lo})")));
    }
    let grid = log_grid(lo, hi, points)?;

    let ranks = match rank {
        RankRequest::UpTo(m) => m,
        RankRequest::Total => 0,
        RankRequest::All => match space {
            Space::Nu => {
                // The slowest-converging point is the lowest frequency.
                let b = (-H * lo / (K_B * temp)).exp();
                ranks_needed(b, ALL_RANKS_TOLERANCE)
            }
            Space::Lambda => lambda_ranks_needed(ALL_RANKS_TOLERANCE),
        }
        .min(MAX_RANK_COLUMNS),
    };
    let axis = match space {
        Space::Nu => "nu",
        Space::Lambda => "lambda",
    };
    let mut columns = vec![axis.to_string()];
    columns.extend((1..=ranks).map(|m| format!("u_{m}")));
    columns.push("total".into());
    if space == Space::Lambda {
        columns.push("planck".into());
    }
    let mut table = Table::new(columns);
    for &x in &grid {
        let mut row: Vec<Cell> = Vec::with_capacity(ranks as usize + 3);
        row.push(x.into());
        for m in 1..=ranks {
            let m = ClusterRank::new(m)?;
            let u = match space {
                Space::Nu => u_m_nu(x, temp, m)?,
                Space::Lambda => u_m_lambda(x, temp, m)?,
            };
            row.push(u.into());
        }
        match space {
            Space::Nu => row.push(planck_u_nu(x, temp)?.into()),
            Space::Lambda => {
                row.push(modified_planck_lambda(x, temp)?.into());
                row.push(planck_lambda(x, temp)?.into());
            }
        }
        table.push(row);
    }
    let mut doc = Document::new(command, precision, table);
    doc.summary = vec![
        ("temperature".into(), temp.into()),
        ("space".into(), axis.into()),
        ("ranks".into(), ranks.into()),
    ];
    Ok(doc)
}

pub fn constants(command: &str, precision: usize) -> Result<Document, CliError> {
    let c = clusterization_constants();
    let cmp = compare_lambda_spectra(COMPARISON_TEMPERATURE)?;
    let mut table = Table::new(["name", "value"]);
    let mut row = |name: String, v: f64| table.push(vec![name.into(), v.into()]);
    row("phi".into(), c.phi);
    row("theta".into(), c.theta);
    row("zeta3_ratio".into(), c.zeta3_ratio);
    row("n_fraction".into(), c.n_fraction);
    for (i, s) in c.sigma_m.iter().enumerate() {
        row(format!("sigma_{}", i + 1), *s);
    }
    row("sigma_total".into(), c.sigma_total);
    row("peak_ratio".into(), cmp.peak_ratio);
    row("peak_offset_rel".into(), cmp.peak_offset_rel);
    row("area_rel_diff".into(), cmp.area_rel_diff);
    Ok(Document::new(command, precision, table))
}

pub fn sample(args: &SampleArgs, config: &Config, command: &str, precision: usize) -> Result<Document, CliError> {
    let tau = config.or(args.tau, "tau")?.unwrap_or(DEFAULT_TAU);
    let w = config.or(args.w, "w")?.ok_or_else(|| usage("--w is required"))?;
    let samples = config.or(args.samples, "samples")?.unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let seed = config.or(args.seed, "seed")?.unwrap_or(DEFAULT_SEED);
    let method = config.or_enum(args.method, "method")?.unwrap_or(Method::Compound);
    let cfg = SamplerConfig::new(tau, w, samples, seed)?;
    let report = match method {
        Method::Compound => sample_compound(&cfg)?,
        Method::Direct => sample_nbd_direct(&cfg)?,
    };
    Ok(sample_document(&report, command, precision))
}

fn sample_document(report: &SampleReport, command: &str, precision: usize) -> Document {
    let (tau, w) = (report.config.tau, report.config.w);
    let (t, d) = (
        PhaseVolume::new(tau).expect("validated by the sampler"),
        Degeneracy::new(w).expect("validated by the sampler"),
    );
    let mut table = Table::new(["n", "count", "empirical", "exact"]);
    for (n, (&count, &(_, p))) in report.histogram.iter().zip(&report.empirical_pmf.entries).enumerate() {
        table.push(vec![
            (n as u64).into(),
            count.into(),
            p.into(),
            be_pmf(n as u64, t, d).into(),
        ]);
    }
    let mut doc = Document::new(command, precision, table);
    let method = match report.method {
        photon_clusters::montecarlo::SamplingMethod::Compound => "compound",
        photon_clusters::montecarlo::SamplingMethod::Direct => "direct",
    };
    doc.summary = vec![
        ("tau".into(), tau.into()),
        ("w".into(), w.into()),
        ("samples".into(), report.config.n_samples.into()),
        ("seed".into(), report.config.seed.to_string().into()),
        ("method".into(), method.into()),
        ("tvd".into(), report.tvd.into()),
        ("chi2_stat".into(), report.chi2_stat.into()),
        ("chi2_dof".into(), report.chi2_dof.into()),
        ("chi2_p".into(), report.chi2_p.into()),
        ("empirical_mean".into(), report.empirical_mean.into()),
    ];
    if let Some(c) = &report.clusters {
        doc.summary.push(("cluster_chi2_stat".into(), c.chi2.statistic.into()));
        doc.summary.push(("cluster_chi2_dof".into(), c.chi2.dof.into()));
        doc.summary.push(("cluster_chi2_p".into(), c.chi2.p_value.into()));
    }
    doc.json_data = Some(serde_json::to_value(report).expect("reports serialize"));
    doc
}

/// The verification document and the number of failed rows.
pub fn run_verify(
    args: &VerifyArgs,
    config: &Config,
    command: &str,
    precision: usize,
) -> Result<(Document, usize), CliError> {
    let level = config.or_enum(args.level, "level")?.unwrap_or(Level::Fast);
    let rows = verify::run(match level {
        Level::Fast => verify::Level::Fast,
        Level::Full => verify::Level::Full,
    })?;
    let mut table = Table::new(["criterion", "name", "value", "comparison", "threshold", "passed"]);
    for r in &rows {
        let comparison = match r.comparison {
            verify::Comparison::Below => "<",
            verify::Comparison::Above => ">",
            verify::Comparison::AtMost => "<=",
        };
        table.push(vec![
            Cell::Int(r.criterion as i64),
            r.name.clone().into(),
            r.value.into(),
            comparison.into(),
            r.threshold.into(),
            r.passed.into(),
        ]);
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    let mut doc = Document::new(command, precision, table);
    doc.summary = vec![
        (
            "level".into(),
            match level {
                Level::Fast => "fast",
                Level::Full => "full",
            }
            .into(),
        ),
        ("checks".into(), (rows.len() as u64).into()),
        ("failed".into(), (failed as u64).into()),
    ];
    Ok((doc, failed))
}
