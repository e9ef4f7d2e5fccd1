use clap::{Parser, Subcommand};
use ratlab::commands::{
    self, ConstantSource, DlHistConfig, GeomCheckConfig, HurwitzConfig, LevyConfig,
    PairHistConfig, PairsConfig, RatioConfig,
};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "ratlab",
    about = "Experiments on continued-fraction approximation dynamics: \
             first-return statistics, limit-law checks, theta-pair scatter data, \
             and geometric return-time cross-checks.",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::to_string)
        .collect()
}

fn split_seeds(s: &str) -> Result<Vec<u64>, String> {
    split_list(s)
        .iter()
        .map(|p| p.parse::<u64>().map_err(|e| e.to_string()))
        .collect()
}

#[derive(Subcommand)]
enum Command {
    /// Emit theta-pair scatter data (CSV, optional SVG) for each alpha.
    Pairs {
        /// Comma-separated alpha thresholds (decimal literals).
        #[arg(long)]
        alpha: Option<String>,
        /// Number of pairs per alpha.
        #[arg(long, default_value_t = 20_000)]
        count: usize,
        /// Named input constant; `fig1` is pi^2 + sqrt(2) - 1.
        #[arg(long)]
        preset: Option<String>,
        /// Decimal literal to use as the input constant.
        #[arg(long)]
        constant: Option<String>,
        /// File holding a decimal literal ('#' header lines ignored).
        #[arg(long)]
        constant_file: Option<PathBuf>,
        /// Sample the input from this seed instead of a fixed constant.
        #[arg(long)]
        seed: Option<u64>,
        /// Interval precision for --seed (default: sized from count).
        #[arg(long)]
        bits: Option<u32>,
        /// Output CSV path (multi-alpha runs insert _a<alpha>).
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG scatter path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Denominator-growth constant: median log(q_bar_k)/k vs the closed form.
    Levy {
        #[arg(long, default_value = "1,0.5,0.8")]
        alpha: String,
        #[arg(long, default_value_t = 10_000)]
        k: usize,
        /// Number of seeds (1..=N).
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        /// Explicit comma-separated seed list overriding --seeds.
        #[arg(long)]
        seed_list: Option<String>,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Filtered-theta histogram vs the conditional limiting density.
    DlHist {
        #[arg(long, default_value = "0.5,1")]
        alpha: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        bins: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the raw histogram as CSV.
        #[arg(long)]
        hist_csv: Option<PathBuf>,
    },
    /// Theta-pair 2-D histogram vs both printed density variants, with the
    /// pushforward-oracle verdict.
    PairHist {
        #[arg(long, default_value = "1,0.7")]
        alpha: String,
        #[arg(long, default_value_t = 1_000_000)]
        pairs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Geometric vs dynamical return-time agreement counts.
    GeomCheck {
        #[arg(long, default_value = "0.3,0.45,0.5,0.8")]
        alpha: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 192)]
        bits: u32,
        /// Convergent-disc scan cap.
        #[arg(long, default_value_t = 50)]
        cap: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Golden-ratio finite-return scan around alpha = 1/sqrt(5).
    Hurwitz {
        #[arg(long, default_value = "0.44")]
        alpha: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Return frequency k/n_k vs mu(Omega_alpha).
    Ratio {
        #[arg(long, default_value = "0.3,0.5,0.8")]
        alpha: String,
        #[arg(long, default_value_t = 10_000)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        #[arg(long)]
        seed_list: Option<String>,
        #[arg(long)]
        bits: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn seeds_from(seed_list: Option<String>, count: usize) -> Vec<u64> {
    match seed_list {
        Some(s) => match split_seeds(&s) {
            Ok(v) if !v.is_empty() => v,
            _ => {
                eprintln!("invalid --seed-list");
                std::process::exit(1);
            }
        },
        None => commands::seed_list(count),
    }
}

fn main() {
    commands::init_thread_pool();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Pairs {
            alpha,
            count,
            preset,
            constant,
            constant_file,
            seed,
            bits,
            out,
            svg,
        } => {
            let source = match (preset.as_deref(), constant, constant_file, seed) {
                (Some("fig1"), None, None, None) => ConstantSource::Fig1Preset,
                (Some(other), _, _, _) => {
                    eprintln!("unknown preset: {other}");
                    std::process::exit(1);
                }
                (None, Some(c), None, None) => ConstantSource::Decimal(c),
                (None, None, Some(f), None) => ConstantSource::File(f),
                (None, None, None, Some(s)) => ConstantSource::Seeded { seed: s, bits },
                _ => {
                    eprintln!(
                        "pairs needs exactly one of --preset fig1 | --constant | \
                         --constant-file | --seed"
                    );
                    std::process::exit(1);
                }
            };
            let alphas = match alpha {
                Some(a) => split_list(&a),
                None if matches!(source, ConstantSource::Fig1Preset) => {
                    vec!["1".into(), "0.7".into(), "0.5".into()]
                }
                None => vec!["1".into()],
            };
            commands::run_pairs(&PairsConfig {
                source,
                alphas,
                count,
                out,
                svg,
            })
        }
        Command::Levy {
            alpha,
            k,
            seeds,
            seed_list,
            bits,
            out,
        } => commands::run_levy(&LevyConfig {
            alphas: split_list(&alpha),
            k,
            seeds: seeds_from(seed_list, seeds),
            bits,
            out,
        }),
        Command::DlHist {
            alpha,
            samples,
            seed,
            bins,
            out,
            hist_csv,
        } => commands::run_dl_hist(&DlHistConfig {
            alphas: split_list(&alpha),
            samples,
            seed,
            bins,
            out,
            hist_csv,
        }),
        Command::PairHist {
            alpha,
            pairs,
            seed,
            grid,
            out,
        } => commands::run_pair_hist(&PairHistConfig {
            alphas: split_list(&alpha),
            pairs,
            seed,
            grid,
            out,
        }),
        Command::GeomCheck {
            alpha,
            samples,
            seed,
            bits,
            cap,
            out,
        } => commands::run_geom_check(&GeomCheckConfig {
            alphas: split_list(&alpha),
            samples,
            seed,
            bits,
            cap,
            out,
        }),
        Command::Hurwitz { alpha, n, out } => commands::run_hurwitz(&HurwitzConfig {
            alphas: split_list(&alpha),
            n,
            out,
        }),
        Command::Ratio {
            alpha,
            k,
            seeds,
            seed_list,
            bits,
            out,
        } => commands::run_ratio(&RatioConfig {
            alphas: split_list(&alpha),
            k,
            seeds: seeds_from(seed_list, seeds),
            bits,
            out,
        }),
    };
    if let Err(e) = result {
        let (code, rendered) = e.render();
        print!("{rendered}");
        std::process::exit(code);
    }
}
