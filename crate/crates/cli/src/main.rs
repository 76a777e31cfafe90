use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use l2k::align::{align, per, Weights};
use l2k::confusion::{Proficiency, L1};
use l2k::g2p::{g2p, Mode};
use l2k::manifest::{load_manifest, write_manifest, UtteranceRecord};
use l2k::patterns::ScanConfig;
use l2k::phoneset::{PhoneSeq, Token};
use l2k::pipeline::{run_pipeline, AnalysisReport, PipelineConfig};
use l2k::report::{
    parse_report_json, render_heatmap_svg, report_json, report_markdown, write_matrix_csv,
    write_report, ReportFormat, Subset,
};
use l2k::simulator::{recover, sample, CorpusSource, ErrorModel};
use l2k::stats::StarLevels;

#[derive(Parser)]
#[command(name = "l2k", version, about = "Phone-level pronunciation error analysis for L2 Korean")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Shared {
    /// Alignment weights.
    #[arg(long, global = true, default_value = "sub=4,ins=3,del=3")]
    weights: Weights,
    /// Minimum observations for a matrix row to be analysed.
    #[arg(long, global = true, default_value_t = 30)]
    min_support: u64,
    /// Thresholds for *, ** and ***.
    #[arg(long, global = true, default_value = ".05,.01,.001")]
    alpha_stars: StarLevels,
    /// Bonferroni-correct dependence-scan p-values.
    #[arg(long, global = true)]
    bonferroni: bool,
    /// Seed for simulation; recorded in report metadata.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Convert Hangul text to canonical phones.
    G2p {
        text: Vec<String>,
        /// Fail on non-Hangul characters instead of dropping them.
        #[arg(long)]
        strict: bool,
        /// Print every rule application.
        #[arg(long)]
        trace: bool,
    },
    /// Align a canonical and a realized phone sequence.
    Align {
        /// Canonical phones, space separated.
        #[arg(long, required_unless_present = "text", conflicts_with = "text")]
        canonical: Option<String>,
        /// Hangul text to derive the canonical phones from.
        #[arg(long)]
        text: Option<String>,
        /// Realized phones, space separated.
        #[arg(long)]
        realized: String,
    },
    /// Run the full analysis and write matrices, heatmaps and reports.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Output directory.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Print the pattern analyses without writing files.
    Patterns {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Generate a synthetic manifest from an error model.
    Simulate {
        /// Plain-text error model file.
        #[arg(long)]
        model: PathBuf,
        /// Canonical phone count to generate.
        #[arg(long, default_value_t = 200_000)]
        tokens: usize,
        #[arg(long, value_enum, default_value_t = Corpus::Words)]
        corpus: Corpus,
        /// Group code written to each record.
        #[arg(long, default_value = "VI")]
        l1: L1,
        /// Manifest to write; omit to only print the recovery table.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Print planted vs recovered rates.
        #[arg(long)]
        recover: bool,
    },
    /// Re-render a saved JSON report.
    Report {
        /// Report written by `analyze`.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        /// Write here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Learner manifest (TSV).
    #[arg(long)]
    manifest: PathBuf,
    /// Native-speaker manifest used as the baseline.
    #[arg(long)]
    native: Option<PathBuf>,
    /// Only analyse learners of this proficiency.
    #[arg(long)]
    proficiency: Option<Proficiency>,
    /// Error patterns kept per low-accuracy phone.
    #[arg(long, default_value_t = 3)]
    top_k: usize,
    /// Realizations tested per row in the dependence scan.
    #[arg(long, default_value_t = 4)]
    scan_k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Markdown => ReportFormat::Markdown,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Corpus {
    /// G2P output of the bundled word list.
    Words,
    /// Phones drawn uniformly from the inventory.
    Uniform,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let shared = cli.shared;
    match cli.command {
        Command::G2p { text, strict, trace } => cmd_g2p(&text.join(" "), strict, trace),
        Command::Align {
            canonical,
            text,
            realized,
        } => cmd_align(canonical, text, &realized, &shared.weights),
        Command::Analyze { input, out } => {
            let report = analyze(&input, &shared)?;
            write_outputs(&report, &out)
        }
        Command::Patterns { input, format } => {
            let report = analyze(&input, &shared)?;
            print!("{}", render(&report, format));
            Ok(())
        }
        Command::Simulate {
            model,
            tokens,
            corpus,
            l1,
            out,
            recover,
        } => cmd_simulate(&model, tokens, corpus, l1, out.as_deref(), recover, &shared),
        Command::Report { input, format, out } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let report = parse_report_json(&text)?;
            let rendered = render(&report, format);
            match out {
                Some(path) => fs::write(&path, rendered)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{rendered}"),
            }
            Ok(())
        }
    }
}

fn render(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => report_json(report),
        Format::Markdown => report_markdown(report),
    }
}

fn cmd_g2p(text: &str, strict: bool, trace: bool) -> Result<()> {
    let mode = if strict { Mode::Strict } else { Mode::Lenient };
    let out = g2p(text, mode)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    println!("{}", out.phones);
    if trace {
        print!("{}", out.trace);
    }
    Ok(())
}

fn cmd_align(
    canonical: Option<String>,
    text: Option<String>,
    realized: &str,
    weights: &Weights,
) -> Result<()> {
    let canonical = match (canonical, text) {
        (Some(c), _) => PhoneSeq::parse(&c)?,
        (None, Some(t)) => g2p(&t, Mode::Strict)?.phones,
        (None, None) => bail!("one of --canonical or --text is required"),
    };
    let realized = PhoneSeq::parse(realized)?;
    let a = align(&canonical, &realized, weights);
    let ops: Vec<String> = a.ops.iter().map(ToString::to_string).collect();
    println!("{}", ops.join(" "));
    let c = a.counts();
    println!(
        "cost {}  S {}  D {}  I {}  N {}",
        a.cost,
        c.substitutions,
        c.deletions,
        c.insertions,
        c.reference_len()
    );
    if let Ok(rate) = per([&a]) {
        println!("PER {:.2}%", 100.0 * rate);
    }
    Ok(())
}

fn analyze(input: &Input, shared: &Shared) -> Result<AnalysisReport> {
    let records = load_manifest(&input.manifest)
        .with_context(|| format!("loading {}", input.manifest.display()))?;
    let natives = match &input.native {
        Some(p) => load_manifest(p).with_context(|| format!("loading {}", p.display()))?,
        None => Vec::new(),
    };
    let config = PipelineConfig {
        weights: shared.weights,
        scan: ScanConfig {
            k: input.scan_k,
            min_support: shared.min_support,
            stars: shared.alpha_stars,
            bonferroni: shared.bonferroni,
        },
        common_top_k: input.top_k,
        proficiency: input.proficiency,
        seed: shared.seed,
        ..PipelineConfig::default()
    };
    let report = run_pipeline(&records, &natives, &config)?;
    for w in &report.metadata.warnings {
        eprintln!("warning: {w}");
    }
    Ok(report)
}

fn file_stem(group: &l2k::confusion::GroupKey) -> String {
    group.to_string().replace('/', "-")
}

fn write_outputs(report: &AnalysisReport, out: &Path) -> Result<()> {
    let matrices = out.join("matrices");
    let heatmaps = out.join("heatmaps");
    for dir in [out, &matrices, &heatmaps] {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for m in &report.matrices {
        let stem = file_stem(&m.group);
        write_matrix_csv(&m.normalized, matrices.join(format!("{stem}.csv")))?;
        if let Some(adj) = &m.adjusted {
            write_matrix_csv(adj, matrices.join(format!("{stem}.adjusted.csv")))?;
        }
        let shown = m.adjusted.as_ref().unwrap_or(&m.normalized);
        for (name, subset) in [
            ("vowels", Subset::Vowels),
            ("consonants", Subset::Consonants),
            ("all", Subset::All),
        ] {
            render_heatmap_svg(
                shown,
                subset,
                &format!("{} {name}", m.group),
                heatmaps.join(format!("{stem}-{name}.svg")),
            )?;
        }
    }
    write_report(report, out.join("report.json"), ReportFormat::Json)?;
    write_report(report, out.join("report.md"), ReportFormat::Markdown)?;
    println!(
        "wrote {} matrices, {} dependence results to {}",
        report.matrices.len(),
        report.dependence.len(),
        out.display()
    );
    Ok(())
}

fn cmd_simulate(
    model_path: &Path,
    tokens: usize,
    corpus: Corpus,
    l1: L1,
    out: Option<&Path>,
    show_recovery: bool,
    shared: &Shared,
) -> Result<()> {
    if l1 == L1::All {
        bail!("ALL is not a speaker group");
    }
    let text = fs::read_to_string(model_path)
        .with_context(|| format!("reading {}", model_path.display()))?;
    let mut model = ErrorModel::parse(&text)?;
    if let Some(seed) = shared.seed {
        model = model.with_seed(seed);
    }
    let source = match corpus {
        Corpus::Words => CorpusSource::bundled_words(),
        Corpus::Uniform => CorpusSource::uniform(10),
    };
    if let Some(path) = out {
        let records: Vec<UtteranceRecord> = source
            .generate(tokens, model.seed())
            .into_iter()
            .enumerate()
            .map(|(i, canonical)| {
                Ok(UtteranceRecord {
                    id: format!("sim-{}-{i}", l1.code()),
                    l1,
                    proficiency: None,
                    text: None,
                    realized: sample(&canonical, &model, i as u64)?,
                    canonical: Some(canonical),
                })
            })
            .collect::<l2k::Result<_>>()?;
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_manifest(&records, std::io::BufWriter::new(file))?;
        println!("wrote {} utterances to {}", records.len(), path.display());
    }
    if show_recovery {
        let m = recover(&model, tokens, &source, &shared.weights)?;
        println!("| Canon | Real | Planted (%) | Recovered (%) |");
        println!("|---|---|---|---|");
        for (from, to, p) in model.planted() {
            println!(
                "| {from} | {to} | {:.2} | {:.2} |",
                100.0 * p,
                m.get(Token::Phone(from), to)
            );
        }
        for &(to, p) in model.insertion_distribution() {
            println!(
                "| * | {to} | {:.2} | {:.2} |",
                100.0 * p,
                m.get(Token::Star, Token::Phone(to))
            );
        }
    }
    if out.is_none() && !show_recovery {
        bail!("nothing to do: pass --out and/or --recover");
    }
    Ok(())
}
