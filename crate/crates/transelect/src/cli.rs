//! Command-line front end: one subcommand per pipeline stage.
//!
//! `select` and `score` share the scoring flags; `stats` summarizes a
//! finished selection; the `bpe-*` subcommands learn, apply, and undo
//! subword segmentation. Diagnostics go to standard error, data to files or
//! standard output, and the exit status is zero exactly when the command
//! completed.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use crate::bpe::{self, BpeApplier, MergeTable};
use crate::corpus::{
    concat_corpora, load_parallel_corpus, load_test_set, read_lines, write_selection,
    CandidatePool, TestSet, META_HEADER,
};
use crate::error::{Error, Result};
use crate::features::NgramConfig;
use crate::report::ProvenanceReport;
use crate::selection::{
    fda_select, inr_select_seeded, score_dump, tfidf_select, tfidf_select_per_sentence,
    DecayState, FdaConfig, InrConfig, Selection, SelectorConfig,
};

/// Environment variable overriding the default worker thread count.
/// An explicit `--threads` flag still wins over it.
pub const THREADS_ENV: &str = "TRANSELECT_THREADS";

/// Parse the process arguments, run the requested subcommand, and return
/// the exit code for the process.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            2
        }
        Err(CliError::Run(err)) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn dispatch(command: Command) -> std::result::Result<(), CliError> {
    match command {
        Command::Select(args) => cmd_select(args),
        Command::Score(args) => cmd_score(args),
        Command::Stats(args) => cmd_stats(args).map_err(CliError::Run),
        Command::BpeLearn(args) => cmd_bpe_learn(args).map_err(CliError::Run),
        Command::BpeApply(args) => cmd_bpe_apply(args).map_err(CliError::Run),
        Command::BpeUnapply(args) => cmd_bpe_unapply(args).map_err(CliError::Run),
    }
}

/// A flag combination problem (exit code 2) as opposed to a data or I/O
/// problem encountered while running (exit code 1).
#[derive(Debug)]
enum CliError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Run(err)
    }
}

#[derive(Parser)]
#[command(
    name = "transelect",
    version,
    about = "Select fine-tuning data from parallel corpora by ranking candidates against a test set"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the candidate pool against the test set and write the top slice
    Select(SelectArgs),
    /// Dump every candidate's first-round score as TSV
    Score(ScoreArgs),
    /// Summarize which corpus each line of a finished selection came from
    Stats(StatsArgs),
    /// Learn a subword merge table from raw text
    BpeLearn(BpeLearnArgs),
    /// Segment raw text with a learned merge table
    BpeApply(BpeApplyArgs),
    /// Undo subword segmentation
    BpeUnapply(BpeUnapplyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Tfidf,
    Inr,
    Fda,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Tfidf => "tfidf",
            Method::Inr => "inr",
            Method::Fda => "fda",
        }
    }
}

/// Flags shared by `select` and `score`.
#[derive(Args, Debug)]
struct ScoringArgs {
    /// Selection method
    #[arg(long, value_enum)]
    method: Method,

    /// Candidate corpus as three values: ID SRC TGT (repeat per corpus)
    #[arg(long, num_args = 3, value_names = ["ID", "SRC", "TGT"], action = ArgAction::Append, required = true)]
    corpus: Vec<String>,

    /// Test set, one source-language sentence per line
    #[arg(long)]
    test: PathBuf,

    /// Smallest n-gram order used as features [default: 1]
    #[arg(long)]
    ngram_min: Option<usize>,

    /// Largest n-gram order used as features [default: 3]
    #[arg(long)]
    ngram_max: Option<usize>,

    /// Occurrence count at which a test n-gram stops contributing (inr)
    #[arg(long)]
    threshold: Option<u32>,

    /// Per-occurrence score decay base (fda) [default: 0.5]
    #[arg(long)]
    decay: Option<f64>,

    /// Polynomial decay exponent (fda) [default: 0]
    #[arg(long)]
    decay_exponent: Option<f64>,

    /// Initial value of every feature (fda) [default: 1]
    #[arg(long)]
    init: Option<f64>,

    /// Retrieve the top candidates per test sentence, keeping duplicates
    /// (tfidf; select only)
    #[arg(long)]
    tfidf_per_sentence: bool,

    /// Text file whose n-gram counts pre-decay all scores, as if its lines
    /// had already been selected (inr; select only)
    #[arg(long)]
    seed_counts: Option<PathBuf>,

    /// Worker threads [default: TRANSELECT_THREADS or all cores]
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[command(flatten)]
    scoring: ScoringArgs,

    /// Number of sentences to select; suffixes K and M are accepted
    #[arg(long, value_parser = parse_size)]
    size: usize,

    /// Output path prefix; writes PREFIX.src, PREFIX.tgt, PREFIX.meta.tsv
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    #[command(flatten)]
    scoring: ScoringArgs,

    /// Write the TSV here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    /// A .meta.tsv file written by select
    meta: PathBuf,

    /// Emit machine-readable TSV instead of the aligned table
    #[arg(long)]
    tsv: bool,
}

#[derive(Args, Debug)]
struct BpeLearnArgs {
    /// Input text file (repeat to learn jointly over several files)
    #[arg(long, required = true)]
    input: Vec<PathBuf>,

    /// Number of merge operations to learn
    #[arg(long)]
    merges: usize,

    /// Where to write the merge table
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct BpeApplyArgs {
    /// Merge table produced by bpe-learn
    #[arg(long)]
    codec: PathBuf,

    /// Input file [default: standard input]
    #[arg(long)]
    input: Option<PathBuf>,

    /// Output file [default: standard output]
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BpeUnapplyArgs {
    /// Input file [default: standard input]
    #[arg(long)]
    input: Option<PathBuf>,

    /// Output file [default: standard output]
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parse a selection size, accepting `K` (thousand) and `M` (million)
/// suffixes in either case.
fn parse_size(text: &str) -> std::result::Result<usize, String> {
    let text = text.trim();
    let (digits, multiplier) = match text.chars().last() {
        Some('k' | 'K') => (&text[..text.len() - 1], 1_000usize),
        Some('m' | 'M') => (&text[..text.len() - 1], 1_000_000usize),
        _ => (text, 1),
    };
    let n: usize = digits
        .parse()
        .map_err(|_| format!("invalid size `{text}`"))?;
    let n = n
        .checked_mul(multiplier)
        .ok_or_else(|| format!("size `{text}` is too large"))?;
    if n == 0 {
        return Err(format!("size must be at least 1, got `{text}`"));
    }
    Ok(n)
}

/// One `--corpus ID SRC TGT` occurrence.
#[derive(Debug, Clone)]
struct CorpusSpec {
    id: String,
    source: PathBuf,
    target: PathBuf,
}

/// Validated configuration for a `select` or `score` run.
#[derive(Debug, Clone)]
struct RunConfig {
    selector: SelectorConfig,
    corpora: Vec<CorpusSpec>,
    test: PathBuf,
    seed_counts: Option<PathBuf>,
    threads: usize,
}

impl RunConfig {
    /// Build and validate a run configuration, rejecting any flag that does
    /// not apply to the chosen method.
    fn from_scoring(args: &ScoringArgs) -> std::result::Result<Self, CliError> {
        reject_stray_flags(args)?;
        let ngram = NgramConfig::new(
            args.ngram_min.unwrap_or(1),
            args.ngram_max.unwrap_or(3),
        )
        .map_err(config_usage)?;
        let selector = match args.method {
            Method::Tfidf => SelectorConfig::Tfidf {
                ngram,
                per_sentence: args.tfidf_per_sentence,
            },
            Method::Inr => {
                let t = args.threshold.ok_or_else(|| {
                    CliError::Usage("--method inr requires --threshold".into())
                })?;
                SelectorConfig::Inr(InrConfig::new(t, ngram).map_err(config_usage)?)
            }
            Method::Fda => SelectorConfig::Fda(
                FdaConfig::new(
                    args.decay.unwrap_or(0.5),
                    args.decay_exponent.unwrap_or(0.0),
                    args.init.unwrap_or(1.0),
                    ngram,
                )
                .map_err(config_usage)?,
            ),
        };
        let corpora = args
            .corpus
            .chunks_exact(3)
            .map(|chunk| CorpusSpec {
                id: chunk[0].clone(),
                source: PathBuf::from(&chunk[1]),
                target: PathBuf::from(&chunk[2]),
            })
            .collect();
        Ok(RunConfig {
            selector,
            corpora,
            test: args.test.clone(),
            seed_counts: args.seed_counts.clone(),
            threads: resolve_threads(args.threads)?,
        })
    }

    fn load_pool(&self) -> Result<CandidatePool> {
        let mut corpora = Vec::with_capacity(self.corpora.len());
        for spec in &self.corpora {
            corpora.push(load_parallel_corpus(&spec.source, &spec.target, &spec.id)?);
        }
        concat_corpora(corpora)
    }

    fn load_seed_state(&self) -> Result<Option<DecayState>> {
        let Some(path) = &self.seed_counts else {
            return Ok(None);
        };
        let SelectorConfig::Inr(cfg) = &self.selector else {
            unreachable!("flag validation allows --seed-counts only with inr");
        };
        let lines = read_lines(path)?;
        Ok(Some(DecayState::from_sentences(
            lines.iter().map(String::as_str),
            cfg.ngram(),
        )))
    }

    fn select(&self, pool: &CandidatePool, test: &TestSet, n: usize) -> Result<Selection> {
        let seed = self.load_seed_state()?;
        self.install(|| match &self.selector {
            SelectorConfig::Tfidf {
                ngram,
                per_sentence: false,
            } => tfidf_select(pool, test, n, ngram),
            SelectorConfig::Tfidf {
                ngram,
                per_sentence: true,
            } => tfidf_select_per_sentence(pool, test, n, ngram),
            SelectorConfig::Inr(cfg) => {
                inr_select_seeded(pool, test, n, cfg, &seed.clone().unwrap_or_default())
            }
            SelectorConfig::Fda(cfg) => fda_select(pool, test, n, cfg),
        })
    }

    fn score(&self, pool: &CandidatePool, test: &TestSet) -> Result<Vec<f64>> {
        self.install(|| score_dump(pool, test, &self.selector))
    }

    /// Run `work` on a thread pool of the configured size.
    fn install<T>(&self, work: impl FnOnce() -> Result<T> + Send) -> Result<T>
    where
        T: Send,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::Internal(format!("cannot build thread pool: {e}")))?;
        pool.install(work)
    }
}

/// Reject method-specific flags given together with a method they do not
/// apply to.
fn reject_stray_flags(args: &ScoringArgs) -> std::result::Result<(), CliError> {
    let mut stray: Vec<&str> = Vec::new();
    if args.threshold.is_some() && args.method != Method::Inr {
        stray.push("--threshold");
    }
    if args.seed_counts.is_some() && args.method != Method::Inr {
        stray.push("--seed-counts");
    }
    if args.decay.is_some() && args.method != Method::Fda {
        stray.push("--decay");
    }
    if args.decay_exponent.is_some() && args.method != Method::Fda {
        stray.push("--decay-exponent");
    }
    if args.init.is_some() && args.method != Method::Fda {
        stray.push("--init");
    }
    if args.tfidf_per_sentence && args.method != Method::Tfidf {
        stray.push("--tfidf-per-sentence");
    }
    if stray.is_empty() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{} does not apply to --method {}",
            stray.join(", "),
            args.method.name()
        )))
    }
}

fn config_usage(err: Error) -> CliError {
    match err {
        Error::Config(message) => CliError::Usage(message),
        other => CliError::Run(other),
    }
}

/// Thread count: explicit flag, then the environment override, then all
/// available cores.
fn resolve_threads(flag: Option<usize>) -> std::result::Result<usize, CliError> {
    let check = |n: usize, from: &str| {
        if n == 0 {
            Err(CliError::Usage(format!("{from} must be at least 1")))
        } else {
            Ok(n)
        }
    };
    if let Some(n) = flag {
        return check(n, "--threads");
    }
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize = value.trim().parse().map_err(|_| {
            CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{value}`"))
        })?;
        return check(n, THREADS_ENV);
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn cmd_select(args: SelectArgs) -> std::result::Result<(), CliError> {
    let config = RunConfig::from_scoring(&args.scoring)?;
    let started = Instant::now();
    let pool = config.load_pool()?;
    let test = load_test_set(&config.test)?;
    let selection = config.select(&pool, &test, args.size)?;
    write_selection(&selection, &args.output)?;
    println!("selected: {}", selection.len());
    println!("requested: {}", selection.requested());
    println!("exhausted_early: {}", selection.exhausted_early());
    println!("wall_time_s: {:.3}", started.elapsed().as_secs_f64());
    Ok(())
}

fn cmd_score(args: ScoreArgs) -> std::result::Result<(), CliError> {
    let config = RunConfig::from_scoring(&args.scoring)?;
    if config.seed_counts.is_some() {
        return Err(CliError::Usage(
            "--seed-counts only applies to select".into(),
        ));
    }
    if let SelectorConfig::Tfidf {
        per_sentence: true, ..
    } = config.selector
    {
        return Err(CliError::Usage(
            "--tfidf-per-sentence only applies to select".into(),
        ));
    }
    let pool = config.load_pool()?;
    let test = load_test_set(&config.test)?;
    let scores = config.score(&pool, &test)?;
    let (mut out, out_path) = open_output(args.output.as_deref())?;
    let mut write = || -> io::Result<()> {
        writeln!(out, "global_index\tcorpus_id\tline_no\tscore")?;
        for (global_index, score) in scores.iter().enumerate() {
            let (corpus_id, line_no) = pool.locate(global_index);
            writeln!(out, "{global_index}\t{corpus_id}\t{line_no}\t{score:.6}")?;
        }
        out.flush()
    };
    write().map_err(|e| CliError::Run(Error::io(out_path, e)))
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let ids = read_meta_corpus_ids(&args.meta)?;
    let report = ProvenanceReport::from_corpus_ids(ids.iter().map(String::as_str))?;
    if args.tsv {
        print!("{}", report.render_tsv());
    } else {
        print!("{}", report.render_table());
    }
    Ok(())
}

/// Read the corpus-id column of a `.meta.tsv` file, validating every row.
fn read_meta_corpus_ids(path: &Path) -> Result<Vec<String>> {
    let malformed = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let lines = read_lines(path)?;
    let Some((header, rows)) = lines.split_first() else {
        return Err(malformed(1, "empty file, expected a meta TSV header".into()));
    };
    if header != META_HEADER {
        return Err(malformed(
            1,
            format!("expected header `{}`", META_HEADER.replace('\t', "<tab>")),
        ));
    }
    let mut ids = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let line = i + 2;
        let fields: Vec<&str> = row.split('\t').collect();
        if fields.len() != 4 {
            return Err(malformed(
                line,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        fields[0]
            .parse::<usize>()
            .map_err(|_| malformed(line, format!("invalid rank `{}`", fields[0])))?;
        fields[1]
            .parse::<f64>()
            .map_err(|_| malformed(line, format!("invalid score `{}`", fields[1])))?;
        fields[3]
            .parse::<usize>()
            .map_err(|_| malformed(line, format!("invalid line number `{}`", fields[3])))?;
        ids.push(fields[2].to_string());
    }
    Ok(ids)
}

fn cmd_bpe_learn(args: BpeLearnArgs) -> Result<()> {
    let mut files: Vec<Vec<String>> = Vec::with_capacity(args.input.len());
    for path in &args.input {
        let lines = read_lines(path)?;
        reject_reserved_markers(path, &lines)?;
        files.push(lines);
    }
    let table = bpe::learn_bpe(
        files
            .iter()
            .flatten()
            .flat_map(|line| line.split_whitespace()),
        args.merges,
    );
    table.write_to(&args.output)?;
    println!("merges_learned: {}", table.len());
    println!("merges_requested: {}", args.merges);
    Ok(())
}

fn cmd_bpe_apply(args: BpeApplyArgs) -> Result<()> {
    let table = MergeTable::read_from(&args.codec)?;
    let mut applier = BpeApplier::new(&table);
    stream_lines(args.input.as_deref(), args.output.as_deref(), |line, location| {
        if bpe::has_reserved_markers(line) {
            return Err(Error::Parse {
                path: location.path.to_path_buf(),
                line: location.line,
                message: format!(
                    "line contains a reserved subword marker (`{}` or `{}`)",
                    bpe::CONTINUATION,
                    bpe::END_OF_WORD
                ),
            });
        }
        Ok(applier.apply_line(line))
    })
}

fn cmd_bpe_unapply(args: BpeUnapplyArgs) -> Result<()> {
    stream_lines(args.input.as_deref(), args.output.as_deref(), |line, location| {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let words = bpe::unapply_bpe(&tokens).map_err(|err| match err {
            Error::MalformedSubword(message) => Error::MalformedSubword(format!(
                "{}: line {}: {message}",
                location.path.display(),
                location.line
            )),
            other => other,
        })?;
        Ok(words.join(" "))
    })
}

/// Where a streamed line came from, for error messages.
struct LineLocation<'a> {
    path: &'a Path,
    line: usize,
}

/// Transform input to output line by line without holding the file in
/// memory. `transform` receives each line (without its terminator) and the
/// 1-based location for error reporting.
fn stream_lines(
    input: Option<&Path>,
    output: Option<&Path>,
    mut transform: impl FnMut(&str, &LineLocation) -> Result<String>,
) -> Result<()> {
    let (reader, in_path) = open_input(input)?;
    let (mut writer, out_path) = open_output(output)?;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| {
            if e.kind() == io::ErrorKind::InvalidData {
                Error::Encoding {
                    path: in_path.clone(),
                    line: line_no,
                }
            } else {
                Error::io(&in_path, e)
            }
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        let rendered = transform(
            line,
            &LineLocation {
                path: &in_path,
                line: line_no,
            },
        )?;
        writeln!(writer, "{rendered}").map_err(|e| Error::io(&out_path, e))?;
    }
    writer.flush().map_err(|e| Error::io(&out_path, e))
}

fn open_input(path: Option<&Path>) -> Result<(Box<dyn BufRead>, PathBuf)> {
    match path {
        Some(p) => {
            let file = File::open(p).map_err(|e| Error::io(p, e))?;
            Ok((Box::new(BufReader::new(file)), p.to_path_buf()))
        }
        None => Ok((Box::new(io::stdin().lock()), PathBuf::from("<stdin>"))),
    }
}

fn open_output(path: Option<&Path>) -> Result<(Box<dyn Write>, PathBuf)> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Error::io(p, e))?;
            Ok((Box::new(BufWriter::new(file)), p.to_path_buf()))
        }
        None => Ok((Box::new(io::stdout().lock()), PathBuf::from("<stdout>"))),
    }
}

fn reject_reserved_markers(path: &Path, lines: &[String]) -> Result<()> {
    for (i, line) in lines.iter().enumerate() {
        if bpe::has_reserved_markers(line) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!(
                    "line contains a reserved subword marker (`{}` or `{}`)",
                    bpe::CONTINUATION,
                    bpe::END_OF_WORD
                ),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scoring(method: Method) -> ScoringArgs {
        ScoringArgs {
            method,
            corpus: vec!["base".into(), "base.src".into(), "base.tgt".into()],
            test: PathBuf::from("test.src"),
            ngram_min: None,
            ngram_max: None,
            threshold: None,
            decay: None,
            decay_exponent: None,
            init: None,
            tfidf_per_sentence: false,
            seed_counts: None,
            threads: Some(1),
        }
    }

    fn usage_message(err: CliError) -> String {
        match err {
            CliError::Usage(message) => message,
            CliError::Run(err) => panic!("expected a usage error, got: {err}"),
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn sizes_accept_thousand_and_million_suffixes() {
        assert_eq!(parse_size("100"), Ok(100));
        assert_eq!(parse_size("100K"), Ok(100_000));
        assert_eq!(parse_size("100k"), Ok(100_000));
        assert_eq!(parse_size("2M"), Ok(2_000_000));
        assert_eq!(parse_size("2m"), Ok(2_000_000));
        assert!(parse_size("").is_err());
        assert!(parse_size("K").is_err());
        assert!(parse_size("1.5M").is_err());
        assert!(parse_size("10KK").is_err());
        assert!(parse_size("0").is_err());
        assert!(parse_size("0K").is_err());
    }

    #[test]
    fn threshold_is_rejected_for_fda() {
        let mut args = scoring(Method::Fda);
        args.threshold = Some(80);
        let message = usage_message(RunConfig::from_scoring(&args).unwrap_err());
        assert!(message.contains("--threshold"), "{message}");
        assert!(message.contains("fda"), "{message}");
    }

    #[test]
    fn fda_flags_are_rejected_for_inr() {
        let mut args = scoring(Method::Inr);
        args.threshold = Some(80);
        args.decay = Some(0.7);
        args.init = Some(2.0);
        let message = usage_message(RunConfig::from_scoring(&args).unwrap_err());
        assert!(message.contains("--decay"), "{message}");
        assert!(message.contains("--init"), "{message}");
    }

    #[test]
    fn per_sentence_mode_is_rejected_outside_tfidf() {
        let mut args = scoring(Method::Fda);
        args.tfidf_per_sentence = true;
        let message = usage_message(RunConfig::from_scoring(&args).unwrap_err());
        assert!(message.contains("--tfidf-per-sentence"), "{message}");
    }

    #[test]
    fn seed_counts_are_rejected_outside_inr() {
        let mut args = scoring(Method::Tfidf);
        args.seed_counts = Some(PathBuf::from("seed.txt"));
        let message = usage_message(RunConfig::from_scoring(&args).unwrap_err());
        assert!(message.contains("--seed-counts"), "{message}");
    }

    #[test]
    fn inr_requires_a_threshold() {
        let args = scoring(Method::Inr);
        let message = usage_message(RunConfig::from_scoring(&args).unwrap_err());
        assert!(message.contains("--threshold"), "{message}");
    }

    #[test]
    fn invalid_parameter_values_are_usage_errors() {
        let mut args = scoring(Method::Fda);
        args.decay = Some(0.0);
        assert!(matches!(
            RunConfig::from_scoring(&args),
            Err(CliError::Usage(_))
        ));
        let mut args = scoring(Method::Inr);
        args.threshold = Some(0);
        assert!(matches!(
            RunConfig::from_scoring(&args),
            Err(CliError::Usage(_))
        ));
        let mut args = scoring(Method::Tfidf);
        args.ngram_min = Some(3);
        args.ngram_max = Some(1);
        assert!(matches!(
            RunConfig::from_scoring(&args),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn defaults_match_the_standard_configuration() {
        let args = scoring(Method::Fda);
        let config = RunConfig::from_scoring(&args).unwrap();
        let SelectorConfig::Fda(fda) = &config.selector else {
            panic!("expected an fda config");
        };
        assert_eq!(fda.decay_base(), 0.5);
        assert_eq!(fda.decay_exponent(), 0.0);
        assert_eq!(fda.init_value(), 1.0);
        assert_eq!(fda.ngram().min_order(), 1);
        assert_eq!(fda.ngram().max_order(), 3);
    }

    #[test]
    fn corpus_values_chunk_into_specs() {
        let mut args = scoring(Method::Tfidf);
        args.corpus = vec![
            "base".into(),
            "b.src".into(),
            "b.tgt".into(),
            "emea".into(),
            "e.src".into(),
            "e.tgt".into(),
        ];
        let config = RunConfig::from_scoring(&args).unwrap();
        assert_eq!(config.corpora.len(), 2);
        assert_eq!(config.corpora[0].id, "base");
        assert_eq!(config.corpora[1].source, PathBuf::from("e.src"));
    }

    #[test]
    fn explicit_thread_flag_wins() {
        assert!(matches!(resolve_threads(Some(3)), Ok(3)));
        assert!(matches!(resolve_threads(Some(0)), Err(CliError::Usage(_))));
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(content.as_bytes()).unwrap();
        file
    }

    #[test]
    fn meta_reader_returns_ids_in_row_order() {
        let file = write_temp(
            "rank\tscore\tcorpus_id\tline_no\n0\t2.000000\tbase\t7\n1\t1.000000\temea\t0\n",
        );
        let ids = read_meta_corpus_ids(file.path()).unwrap();
        assert_eq!(ids, ["base", "emea"]);
    }

    #[test]
    fn meta_reader_reports_malformed_rows_with_line_numbers() {
        let cases = [
            ("", 1),                                              // empty file
            ("not\ta\theader\n", 1),                              // wrong header
            ("rank\tscore\tcorpus_id\tline_no\n0\t1.0\tbase\n", 2), // 3 fields
            ("rank\tscore\tcorpus_id\tline_no\nx\t1.0\tbase\t0\n", 2), // bad rank
            (
                "rank\tscore\tcorpus_id\tline_no\n0\t1.0\tbase\t0\n1\tok\tbase\t1\n",
                3,
            ), // bad score on the second row
        ];
        for (content, expected_line) in cases {
            let file = write_temp(content);
            let err = read_meta_corpus_ids(file.path()).unwrap_err();
            match err {
                Error::Parse { line, .. } => assert_eq!(line, expected_line, "{content:?}"),
                other => panic!("expected a parse error for {content:?}, got: {other}"),
            }
        }
    }
}
