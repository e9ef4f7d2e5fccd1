//! Experiment runners behind the CLI subcommands. Everything is seeded and
//! deterministic; seeds, bit counts and caps are echoed into the outputs.

use crate::output::{error_json, json_line, pairs_csv, pairs_svg, suffixed_path, write_text};
use rayon::prelude::*;
use ratlab_core::{
    cf_expand, decimal_to_rational, empirical_compare, estimate_levy, geometric_tau,
    in_omega_alpha, levy_limit, mu_omega_alpha, recommended_bits, return_ratio, sample,
    tau, theta_bar_unverified, BigRational, CertifiedReal, ComparisonReport, DensityModel,
    Error, Histogram, ModelKind, NEPoint, PairVariant, RatInterval, ReturnOutcome,
};
use serde_json::json;
use std::path::PathBuf;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// Exit code + machine-readable rendering.
    pub fn render(&self) -> (i32, String) {
        match self {
            CliError::Core(e) => (2, error_json(e)),
            CliError::Io(e) => (1, format!("{{\"error\":\"Io\",\"message\":\"{e}\"}}\n")),
        }
    }
}

pub type CliResult = Result<(), CliError>;

/// An alpha threshold carried both as the exact decimal rational (for
/// certified comparisons) and as f64 (for closed forms).
#[derive(Clone, Debug)]
pub struct Alpha {
    pub label: String,
    pub exact: BigRational,
    pub value: f64,
}

pub fn parse_alphas(specs: &[String]) -> Result<Vec<Alpha>, CliError> {
    let mut out = Vec::new();
    for s in specs {
        let exact = decimal_to_rational(s)?;
        let value = ratlab_core::scalar::rat_to_f64(&exact);
        if !(value > 0.0 && value <= 1.0) {
            return Err(Error::DomainViolation("alpha must lie in (0,1]").into());
        }
        out.push(Alpha {
            label: s.clone(),
            exact,
            value,
        });
    }
    if out.is_empty() {
        return Err(Error::DomainViolation("at least one alpha is required").into());
    }
    Ok(out)
}

pub fn seed_list(count: usize) -> Vec<u64> {
    (1..=count as u64).collect()
}

/// Partial quotients needed to extract `entries` filtered thetas at this
/// alpha, with headroom for the stochastic return spacing.
fn quotients_needed(alpha: f64, entries: usize) -> usize {
    let mu = mu_omega_alpha(alpha);
    (entries as f64 / mu * 1.06 + 300.0).ceil() as usize
}

fn bits_auto(alpha: f64, entries: usize) -> u32 {
    recommended_bits(quotients_needed(alpha, entries))
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

// ---------------------------------------------------------------- pairs --

#[derive(Clone, Debug)]
pub enum ConstantSource {
    Fig1Preset,
    Decimal(String),
    File(PathBuf),
    Seeded { seed: u64, bits: Option<u32> },
}

#[derive(Clone, Debug)]
pub struct PairsConfig {
    pub source: ConstantSource,
    pub alphas: Vec<String>,
    pub count: usize,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
}

pub fn run_pairs(cfg: &PairsConfig) -> CliResult {
    let alphas = parse_alphas(&cfg.alphas)?;
    let need: usize = alphas
        .iter()
        .map(|a| quotients_needed(a.value, cfg.count + 1))
        .max()
        .unwrap();
    let x = match &cfg.source {
        ConstantSource::Fig1Preset => CertifiedReal::fig1_constant(),
        ConstantSource::Decimal(s) => CertifiedReal::from_decimal_str(s)?,
        ConstantSource::File(path) => {
            let text = std::fs::read_to_string(path)?;
            CertifiedReal::from_constant_text(&text)?
        }
        ConstantSource::Seeded { seed, bits } => {
            let bits = bits.unwrap_or_else(|| recommended_bits(need));
            CertifiedReal::sample(*seed, bits)?
        }
    };
    let cf = cf_expand(&x, need)?;
    let multi = alphas.len() > 1;
    for a in &alphas {
        let tb = theta_bar_unverified(&cf, &a.exact, cfg.count + 1)?;
        let pairs = tb.pairs_f64();
        let path = suffixed_path(&cfg.out, &a.label, multi);
        write_text(&path, &pairs_csv(&pairs))?;
        println!("wrote {}", path.display());
        if let Some(svg_base) = &cfg.svg {
            let svg_path = suffixed_path(svg_base, &a.label, multi);
            write_text(&svg_path, &pairs_svg(&pairs, a.value))?;
            println!("wrote {}", svg_path.display());
        }
    }
    Ok(())
}

// ----------------------------------------------------------------- levy --

#[derive(Clone, Debug)]
pub struct LevyConfig {
    pub alphas: Vec<String>,
    pub k: usize,
    pub seeds: Vec<u64>,
    pub bits: Option<u32>,
    pub out: PathBuf,
}

pub fn run_levy(cfg: &LevyConfig) -> CliResult {
    let alphas = parse_alphas(&cfg.alphas)?;
    let mut reports = Vec::new();
    for a in &alphas {
        let bits = cfg.bits.unwrap_or_else(|| bits_auto(a.value, cfg.k));
        let need = quotients_needed(a.value, cfg.k);
        let estimates: Result<Vec<f64>, Error> = cfg
            .seeds
            .par_iter()
            .map(|&seed| {
                let x = CertifiedReal::sample(seed, bits)?;
                let cf = cf_expand(&x, need)?;
                estimate_levy(&cf, &a.exact, cfg.k)
            })
            .collect();
        let estimates = estimates.map_err(CliError::Core)?;
        let expected = levy_limit(a.value);
        let est = median(estimates);
        reports.push(ComparisonReport {
            alpha: a.value,
            model: format!("levy-limit; k={}; bits={bits}; median of seeds", cfg.k),
            variant: None,
            samples: cfg.k as u64,
            l1: None,
            ks: None,
            expected: Some(expected),
            estimate: Some(est),
            rel_err: Some((est - expected).abs() / expected),
            seeds: cfg.seeds.clone(),
        });
    }
    write_reports(&cfg.out, &reports)
}

fn write_reports(path: &PathBuf, reports: &[ComparisonReport]) -> CliResult {
    let vals: Vec<serde_json::Value> = reports
        .iter()
        .map(|r| serde_json::to_value(r).expect("report"))
        .collect();
    write_text(path, &json_line(&serde_json::Value::Array(vals)))?;
    println!("wrote {}", path.display());
    Ok(())
}

// --------------------------------------------------------------- dl-hist --

#[derive(Clone, Debug)]
pub struct DlHistConfig {
    pub alphas: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub bins: usize,
    pub out: PathBuf,
    pub hist_csv: Option<PathBuf>,
}

pub fn run_dl_hist(cfg: &DlHistConfig) -> CliResult {
    let alphas = parse_alphas(&cfg.alphas)?;
    let multi = alphas.len() > 1;
    let mut reports = Vec::new();
    for a in &alphas {
        let values = sample::theta_bar_samples_f64(cfg.seed, a.value, cfg.samples);
        let model = DensityModel::new(ModelKind::DLConditional { alpha: a.value });
        let mut report = empirical_compare(
            &ratlab_core::SampleSet::Values(values.clone()),
            &model,
            cfg.bins,
        )?;
        report.seeds = vec![cfg.seed];
        reports.push(report);
        if let Some(csv_base) = &cfg.hist_csv {
            let edges = Histogram::uniform_edges(0.0, a.value.min(1.0), cfg.bins);
            let hist = Histogram::from_values(edges.clone(), &values);
            let mut text = String::from("bin_lo,bin_hi,count\n");
            for (i, c) in hist.counts.iter().enumerate() {
                text.push_str(&format!("{},{},{}\n", edges[i], edges[i + 1], c));
            }
            let path = suffixed_path(csv_base, &a.label, multi);
            write_text(&path, &text)?;
            println!("wrote {}", path.display());
        }
    }
    write_reports(&cfg.out, &reports)
}

// -------------------------------------------------------------- pair-hist --

#[derive(Clone, Debug)]
pub struct PairHistConfig {
    pub alphas: Vec<String>,
    pub pairs: usize,
    pub seed: u64,
    pub grid: usize,
    pub out: PathBuf,
}

pub fn run_pair_hist(cfg: &PairHistConfig) -> CliResult {
    let alphas = parse_alphas(&cfg.alphas)?;
    let mut results = Vec::new();
    for a in &alphas {
        let pairs = sample::theta_bar_pairs_f64(cfg.seed, a.value, cfg.pairs);
        let sample_set = ratlab_core::SampleSet::Pairs(pairs);
        let edges = Histogram::uniform_edges(0.0, a.value, cfg.grid);
        let oracle = ratlab_core::pushforward_oracle_masses(a.value, &edges, &edges);
        let mut reports = Vec::new();
        let mut oracle_l1 = Vec::new();
        for variant in [PairVariant::PlainRadical, PairVariant::AlphaInRadical] {
            let model = DensityModel::new(ModelKind::PairJager {
                alpha: a.value,
                variant,
            });
            let masses = model.bin_masses_2d(&edges, &edges);
            let l1_oracle: f64 = masses
                .iter()
                .zip(oracle.iter())
                .map(|(m, o)| (m - o).abs())
                .sum();
            oracle_l1.push(l1_oracle);
            let mut report = empirical_compare(&sample_set, &model, cfg.grid)?;
            report.seeds = vec![cfg.seed];
            reports.push(serde_json::to_value(&report).expect("report"));
        }
        let winner = if oracle_l1[0] <= oracle_l1[1] {
            PairVariant::PlainRadical
        } else {
            PairVariant::AlphaInRadical
        };
        results.push(json!({
            "alpha": a.value,
            "grid": cfg.grid,
            "samples": cfg.pairs,
            "reports": reports,
            "oracle": {
                "l1_plain_radical": oracle_l1[0],
                "l1_alpha_in_radical": oracle_l1[1],
                "winner": winner.as_str(),
            },
        }));
    }
    write_text(&cfg.out, &json_line(&json!({ "results": results })))?;
    println!("wrote {}", cfg.out.display());
    Ok(())
}

// -------------------------------------------------------------- geom-check --

#[derive(Clone, Debug)]
pub struct GeomCheckConfig {
    pub alphas: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub bits: u32,
    pub cap: usize,
    pub out: PathBuf,
}

pub fn run_geom_check(cfg: &GeomCheckConfig) -> CliResult {
    use rand::{Rng, SeedableRng};
    let alphas = parse_alphas(&cfg.alphas)?;
    let mut entries = Vec::new();
    for (idx, a) in alphas.iter().enumerate() {
        let mut rng =
            rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(idx as u64 * 7919));
        let alpha_iv = RatInterval::exact(a.exact.clone());
        let mut agreements = 0usize;
        let mut disagreements = 0usize;
        let mut failures = 0usize;
        let mut drawn = 0usize;
        while drawn < cfg.samples {
            let x = match CertifiedReal::sample(rng.gen(), cfg.bits) {
                Ok(x) => x,
                Err(_) => continue,
            };
            let cf = match cf_expand(&x, cfg.cap + 16) {
                Ok(cf) => cf,
                Err(_) => continue,
            };
            let y = sample::sample_y_exact(&mut rng);
            let p = match NEPoint::new(x.interval(), RatInterval::exact(y.clone())) {
                Ok(p) => p,
                Err(_) => continue,
            };
            if in_omega_alpha(&p, &alpha_iv) != Ok(true) {
                continue;
            }
            drawn += 1;
            let geometric = geometric_tau(&cf, &y, &a.exact, cfg.cap);
            let dynamical = tau(&p, &alpha_iv, 5000);
            match (geometric, dynamical) {
                (Ok(g), Ok(ReturnOutcome::Returned { tau: t, .. })) => {
                    if g == t {
                        agreements += 1;
                    } else {
                        disagreements += 1;
                    }
                }
                _ => failures += 1,
            }
        }
        entries.push(json!({
            "alpha": a.value,
            "samples": cfg.samples,
            "agreements": agreements,
            "disagreements": disagreements,
            "certified_failures": failures,
            "failure_rate": failures as f64 / cfg.samples as f64,
            "cap": cfg.cap,
            "bits": cfg.bits,
            "seeds": [cfg.seed],
        }));
    }
    write_text(&cfg.out, &json_line(&serde_json::Value::Array(entries)))?;
    println!("wrote {}", cfg.out.display());
    Ok(())
}

// ---------------------------------------------------------------- hurwitz --

#[derive(Clone, Debug)]
pub struct HurwitzConfig {
    pub alphas: Vec<String>,
    pub n: usize,
    pub out: PathBuf,
}

pub fn run_hurwitz(cfg: &HurwitzConfig) -> CliResult {
    let alphas = parse_alphas(&cfg.alphas)?;
    let tail_cap = 1000usize;
    // golden-ratio quotient growth is the slowest possible: certified depth
    // is ~0.72 bits, so size the enclosure from the scan depth plus the cap
    let depth = cfg.n + tail_cap + 60;
    let bits = (depth as f64 / 0.70).ceil() as u32;
    let x = CertifiedReal::golden_ratio(bits);
    let cf = cf_expand(&x, depth)?;
    let y0 = BigRational::from_integer((-1).into());
    let mut entries = Vec::new();
    for a in &alphas {
        let indices = ratlab_core::finite_return_scan(&cf, &y0, &a.exact, cfg.n)?;
        let tail_start = indices.last().map_or(1, |l| l + 2);
        let (xs, ys) = cf.tail_and_reversal(tail_start)?;
        let tail_point = NEPoint::new(xs, RatInterval::exact(ys))?;
        let outcome = match tau(&tail_point, &RatInterval::exact(a.exact.clone()), tail_cap)? {
            ReturnOutcome::Returned { tau: t, .. } => format!("returned(tau={t})"),
            ReturnOutcome::NoReturnWithinCap { .. } => "no-return-within-cap".to_string(),
        };
        entries.push(json!({
            "alpha": a.value,
            "n": cfg.n,
            "bits": bits,
            "indices": indices,
            "tail_start": tail_start,
            "tail_cap": tail_cap,
            "tail_outcome": outcome,
        }));
    }
    write_text(&cfg.out, &json_line(&serde_json::Value::Array(entries)))?;
    println!("wrote {}", cfg.out.display());
    Ok(())
}

// ------------------------------------------------------------------ ratio --

#[derive(Clone, Debug)]
pub struct RatioConfig {
    pub alphas: Vec<String>,
    pub k: usize,
    pub seeds: Vec<u64>,
    pub bits: Option<u32>,
    pub out: PathBuf,
}

pub fn run_ratio(cfg: &RatioConfig) -> CliResult {
    let alphas = parse_alphas(&cfg.alphas)?;
    let mut reports = Vec::new();
    for a in &alphas {
        let bits = cfg.bits.unwrap_or_else(|| bits_auto(a.value, cfg.k));
        let need = quotients_needed(a.value, cfg.k);
        let ratios: Result<Vec<f64>, Error> = cfg
            .seeds
            .par_iter()
            .map(|&seed| {
                let x = CertifiedReal::sample(seed, bits)?;
                let cf = cf_expand(&x, need)?;
                return_ratio(&cf, &a.exact, cfg.k)
            })
            .collect();
        let ratios = ratios.map_err(CliError::Core)?;
        let expected = mu_omega_alpha(a.value);
        let est = median(ratios);
        reports.push(ComparisonReport {
            alpha: a.value,
            model: format!("return-ratio k/n_k; k={}; bits={bits}; median of seeds", cfg.k),
            variant: None,
            samples: cfg.k as u64,
            l1: None,
            ks: None,
            expected: Some(expected),
            estimate: Some(est),
            rel_err: Some((est - expected).abs() / expected),
            seeds: cfg.seeds.clone(),
        });
    }
    write_reports(&cfg.out, &reports)
}

/// Applies the RATLAB_THREADS worker-count env var (default: logical cores).
pub fn init_thread_pool() {
    if let Ok(v) = std::env::var("RATLAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
