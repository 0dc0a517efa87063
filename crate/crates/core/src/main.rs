use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sentopic::pipeline::{self, PipelineConfig, PipelineError};

/// Sentiment classification, topic modeling and per-topic comparison of
/// short posts.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, default_value = "sentopic.toml")]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Round the significance level to three decimals.
    #[arg(long, global = true)]
    round_alpha: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean and filter the input posts.
    Ingest,
    /// Label every document (runs `agree` first when gold labels are set).
    Sentiment,
    /// Score the sentiment engines against the gold labels.
    Agree,
    /// Choose the topic count by coherence.
    Sweep,
    /// Fit the topic model.
    Fit,
    /// Write an editable topic label file.
    LabelTemplate,
    /// Compare topic weights between negative and non-negative documents.
    Compare,
    /// Monthly trend, topic weights, top topics and charts.
    Report,
    /// Run every stage and write the manifest.
    Run,
}

fn load(cli: &Cli) -> Result<PipelineConfig, PipelineError> {
    let mut cfg = PipelineConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &cli.out_dir {
        cfg.out_dir = dir.clone();
    }
    if let Some(n) = cli.threads {
        cfg.threads = n;
    }
    if cli.round_alpha {
        cfg.stats.round_alpha = true;
    }
    cfg.validate()?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), PipelineError> {
    let cfg = load(cli)?;
    match cli.command {
        Command::Ingest => {
            let c = pipeline::ingest(&cfg)?;
            println!(
                "{} posts read, {} after filtering, {} retained",
                c.raw_posts, c.after_filter, c.retained
            );
        }
        Command::Sentiment => {
            let s = pipeline::sentiment(&cfg)?;
            println!(
                "{} documents labeled by {}, {} negative",
                s.n_labeled, s.engine, s.n_negative
            );
        }
        Command::Agree => {
            for r in pipeline::agree(&cfg)? {
                println!(
                    "{}: {:.2}% of {} unanimous records",
                    r.engine, r.agreement, r.n_gold_used
                );
            }
        }
        Command::Sweep => {
            let s = pipeline::sweep(&cfg)?;
            println!("selected {} topics", s.selected);
        }
        Command::Fit => {
            let f = pipeline::fit(&cfg)?;
            println!(
                "{} topics, final log-likelihood {}",
                f.topics, f.final_log_likelihood
            );
            if let Some(r) = f.robustness {
                println!(
                    "robustness: cv {} ({})",
                    r.cv,
                    if r.pass { "pass" } else { "fail" }
                );
            }
        }
        Command::LabelTemplate => {
            println!("{}", pipeline::label_template(&cfg)?.display());
        }
        Command::Compare => {
            let c = pipeline::compare(&cfg)?;
            for r in &c.rows {
                println!("topic {}: {}", r.test.topic, r.test.direction.as_str());
            }
        }
        Command::Report => {
            let r = pipeline::report(&cfg)?;
            println!(
                "{} months, overall {:.2}% negative",
                r.trend.months.len(),
                r.trend.overall.neg_rate_2dp
            );
        }
        Command::Run => {
            let m = pipeline::run_pipeline(&cfg)?;
            println!(
                "complete: {} artifacts, manifest in {}",
                m.artifacts.len(),
                cfg.out_dir.join("manifest.json").display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
