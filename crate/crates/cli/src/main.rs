use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use sdscan_core::genome_io::{parse_fasta, read_bedpe, render_bedpe, write_fasta};
use sdscan_core::search::ErrorModel;
use sdscan_core::simulate::{read_truth, score_by_delta, simulate_genome, write_truth, GenomeSimConfig};
use sdscan_core::sketch::SketchParams;
use sdscan_core::{run, RunConfig, SdRecord};

#[derive(Parser)]
#[command(name = "sdscan", version, about = "Find segmental duplications in genome assemblies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report duplicated pairs of a FASTA file as BEDPE.
    Search(SearchArgs),
    /// Write a random genome with planted duplications and its truth set.
    Simulate(SimulateArgs),
    /// Sensitivity of a call set against a truth set, per divergence bucket.
    Score(ScoreArgs),
    /// Coverage, record counts and error histograms of a call set.
    Stats(StatsArgs),
}

#[derive(Args)]
struct SearchArgs {
    fasta: PathBuf,
    /// Maximum total divergence.
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    /// Maximum small-mutation divergence.
    #[arg(long = "delta-m", default_value_t = 0.15)]
    delta_m: f64,
    /// Per-base probability that a large gap opens.
    #[arg(long = "p-gap", default_value_t = 0.005)]
    p_gap: f64,
    /// Sketch k-mer length.
    #[arg(long, default_value_t = 12)]
    k: usize,
    /// Chaining anchor length.
    #[arg(long = "anchor-k", default_value_t = 11)]
    anchor_k: usize,
    /// Winnowing window in k-mers.
    #[arg(long, default_value_t = 16)]
    w: usize,
    /// q-gram length of the candidate filter.
    #[arg(long, default_value_t = 5)]
    q: usize,
    /// Minimum alignment length.
    #[arg(long = "min-len", default_value_t = 1000)]
    min_len: usize,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Skip the reverse-complement search.
    #[arg(long = "forward-only")]
    forward_only: bool,
    /// Output BEDPE (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for resumable region checkpoints.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Output FASTA.
    #[arg(long)]
    fasta: PathBuf,
    /// Output truth BEDPE.
    #[arg(long)]
    truth: PathBuf,
    #[arg(long = "total-len", default_value_t = 2_000_000)]
    total_len: usize,
    #[arg(long = "sequences", default_value_t = 2)]
    num_sequences: usize,
    /// Number of planted pairs.
    #[arg(long = "sds", default_value_t = 50)]
    num_sds: usize,
    #[arg(long = "min-len", default_value_t = 1000)]
    min_len: usize,
    #[arg(long = "max-len", default_value_t = 10_000)]
    max_len: usize,
    #[arg(long = "min-delta", default_value_t = 0.01)]
    min_delta: f64,
    #[arg(long = "max-delta", default_value_t = 0.25)]
    max_delta: f64,
    #[arg(long = "p-gap", default_value_t = 0.005)]
    p_gap: f64,
    /// Fraction of copies that are reverse-complemented.
    #[arg(long, default_value_t = 0.5)]
    inverted: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct ScoreArgs {
    /// Calls in BEDPE.
    calls: PathBuf,
    /// Truth BEDPE written by `simulate`.
    truth: PathBuf,
    /// Width of a divergence bucket.
    #[arg(long, default_value_t = 0.05)]
    width: f64,
}

#[derive(Args)]
struct StatsArgs {
    /// Calls in BEDPE.
    calls: PathBuf,
    /// Width of an error histogram bin.
    #[arg(long, default_value_t = 0.01)]
    bin: f64,
}

fn search(args: &SearchArgs) -> Result<()> {
    let config = RunConfig {
        model: ErrorModel::new(args.delta, args.delta_m, args.p_gap)?,
        sketch: SketchParams::new(args.k, args.w)?,
        anchor_k: args.anchor_k,
        q: args.q,
        min_sd_len: args.min_len,
        threads: args.threads,
        reverse_strand: !args.forward_only,
        checkpoint: args.checkpoint.clone(),
        ..RunConfig::default()
    };
    let start = Instant::now();
    let genome = parse_fasta(&args.fasta)?;
    info!("read {} sequences, {} bp", genome.num_sequences(), genome.total_len());
    let records = run(&genome, &config)?;
    info!("{} records in {:.1} s", records.len(), start.elapsed().as_secs_f64());
    let text = render_bedpe(&records);
    match &args.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let config = GenomeSimConfig {
        total_len: args.total_len,
        num_sequences: args.num_sequences,
        num_sds: args.num_sds,
        sd_len_range: (args.min_len, args.max_len),
        delta_range: (args.min_delta, args.max_delta),
        p_gap: args.p_gap,
        inverted_fraction: args.inverted,
        rng_seed: args.seed,
    };
    let (genome, truths) = simulate_genome(&config)?;
    write_fasta(&genome, &args.fasta)?;
    write_truth(&truths, &args.truth)?;
    info!("wrote {} bp with {} planted pairs", genome.total_len(), truths.len());
    Ok(())
}

fn score(args: &ScoreArgs) -> Result<()> {
    if !(args.width > 0.0 && args.width <= 1.0) {
        bail!("bucket width must lie in (0, 1]");
    }
    let calls = read_bedpe(&args.calls)?;
    let truths = read_truth(&args.truth)?;
    let mut out = io::stdout().lock();
    writeln!(out, "delta_lo\tdelta_hi\ttruths\tdetected\tsensitivity")?;
    for row in score_by_delta(&truths, &calls, args.width) {
        writeln!(
            out,
            "{:.3}\t{:.3}\t{}\t{}\t{:.4}",
            row.lo,
            row.hi,
            row.total,
            row.detected,
            row.sensitivity()
        )?;
    }
    Ok(())
}

/// Bases covered by at least one mate, per sequence.
fn covered_bp(records: &[SdRecord]) -> u64 {
    let mut by_seq: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
    for r in records {
        for m in [&r.mate1, &r.mate2] {
            by_seq.entry(&m.seq_name).or_default().push((m.start, m.end));
        }
    }
    let mut total = 0u64;
    for ivs in by_seq.values_mut() {
        ivs.sort_unstable();
        let (mut cur_s, mut cur_e) = ivs[0];
        for &(s, e) in &ivs[1..] {
            if s > cur_e {
                total += (cur_e - cur_s) as u64;
                (cur_s, cur_e) = (s, e);
            } else {
                cur_e = cur_e.max(e);
            }
        }
        total += (cur_e - cur_s) as u64;
    }
    total
}

fn stats(args: &StatsArgs) -> Result<()> {
    if !(args.bin > 0.0 && args.bin <= 1.0) {
        bail!("bin width must lie in (0, 1]");
    }
    let records = read_bedpe(&args.calls)?;
    let intra = records.iter().filter(|r| r.mate1.seq_name == r.mate2.seq_name).count();
    let inverted = records.iter().filter(|r| r.mate1.strand != r.mate2.strand).count();
    let aligned: u64 = records.iter().map(|r| r.alignment_length as u64).sum();

    let mut out = io::stdout().lock();
    writeln!(out, "metric\tvalue")?;
    writeln!(out, "records\t{}", records.len())?;
    writeln!(out, "intra_sequence\t{intra}")?;
    writeln!(out, "inter_sequence\t{}", records.len() - intra)?;
    writeln!(out, "inverted\t{inverted}")?;
    writeln!(out, "covered_bp\t{}", covered_bp(&records))?;
    writeln!(out, "aligned_columns\t{aligned}")?;

    let bins = (1.0 / args.bin).ceil() as usize;
    let slot = |e: f64| ((e / args.bin).floor() as usize).min(bins - 1);
    let mut hist = vec![[0usize; 3]; bins];
    for r in &records {
        hist[slot(r.error_total)][0] += 1;
        hist[slot(r.error_mutation)][1] += 1;
        hist[slot(r.error_gap)][2] += 1;
    }
    let last = hist.iter().rposition(|h| h.iter().any(|&c| c > 0)).map_or(0, |i| i + 1);
    writeln!(out)?;
    writeln!(out, "error_lo\terror_hi\ttotal\tmutation\tgap")?;
    for (i, h) in hist.iter().take(last).enumerate() {
        writeln!(
            out,
            "{:.3}\t{:.3}\t{}\t{}\t{}",
            i as f64 * args.bin,
            (i + 1) as f64 * args.bin,
            h[0],
            h[1],
            h[2]
        )?;
    }
    Ok(())
}

/// The error chain on one line, skipping causes already quoted by their parent.
fn diagnostic(err: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in err.chain() {
        let text = cause.to_string();
        if !msg.contains(&text) {
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&text);
        }
    }
    msg
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Search(a) => search(a),
        Command::Simulate(a) => simulate(a),
        Command::Score(a) => score(a),
        Command::Stats(a) => stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sdscan: {}", diagnostic(&e));
            ExitCode::FAILURE
        }
    }
}
