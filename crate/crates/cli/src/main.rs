//! `casefind`: index a title corpus, query it, retain new cases and run the
//! word-order permutation check.
//!
//! Exit codes: 0 success, 1 usage, 2 data or I/O error, 3 the permutation
//! check failed.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use casefind_core::corpus::{self, CorpusFormat};
use casefind_core::{
    eval, BuildOptions, Case, CaseBase, ExecMode, Index, PreprocessConfig, RankParams,
    RankedResults, Scorer, SearchParams,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "casefind", version, about = "Case-based title search with TF-IDF and cosine similarity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index file from a corpus.
    Index {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: InputFormat,
        #[arg(long)]
        output: PathBuf,
        /// Newline-delimited stopword list.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long = "min-token-len", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        min_token_len: u64,
    },
    /// Rank indexed titles against a query.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long, value_enum, default_value_t = ScorerArg::Cosine)]
        scorer: ScorerArg,
        /// Keep only scores strictly above this value.
        #[arg(long, default_value_t = 0.0, value_parser = parse_threshold)]
        threshold: f64,
        #[arg(long = "top-k", value_parser = clap::value_parser!(u64).range(1..))]
        top_k: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
    },
    /// Retain a new case: append it to the corpus and rebuild the index.
    Add {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        id: String,
        #[arg(long)]
        title: String,
        #[arg(long)]
        solution: Option<String>,
    },
    /// Query each title verbatim, then with its words shuffled, and compare.
    Eval {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        titles: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ScorerArg::Cosine)]
        scorer: ScorerArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Record,
    Plain,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScorerArg {
    Cosine,
    Set,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Records,
}

impl From<ScorerArg> for Scorer {
    fn from(s: ScorerArg) -> Self {
        match s {
            ScorerArg::Cosine => Scorer::Cosine,
            ScorerArg::Set => Scorer::Set,
        }
    }
}

impl From<InputFormat> for CorpusFormat {
    fn from(f: InputFormat) -> Self {
        match f {
            InputFormat::Record => CorpusFormat::Record,
            InputFormat::Plain => CorpusFormat::Plain,
        }
    }
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() {
        Ok(t)
    } else {
        Err("threshold must be a finite number".into())
    }
}

enum Failure {
    Data(String),
    Violation(String),
}

impl From<casefind_core::Error> for Failure {
    fn from(e: casefind_core::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(format!("cannot write output: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Index { input, format, output, stopwords, min_token_len } => {
            cmd_index(&mut out, input, format.into(), output, stopwords, min_token_len as usize)
        }
        Command::Query { index, query, scorer, threshold, top_k, format } => {
            let params = SearchParams {
                scorer: scorer.into(),
                rank: RankParams { threshold, top_k: top_k.map(|k| k as usize) },
            };
            cmd_query(&mut out, index, &query, &params, format)
        }
        Command::Add { index, corpus, id, title, solution } => {
            let mut case = Case::new(id, title);
            case.solution = solution;
            cmd_add(&mut out, index, corpus, case)
        }
        Command::Eval { index, titles, seed, scorer } => {
            cmd_eval(&mut out, index, titles, seed, scorer.into())
        }
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("order invariance violated: {msg}");
            ExitCode::from(3)
        }
    }
}

fn cmd_index(
    out: &mut impl Write,
    input: PathBuf,
    format: CorpusFormat,
    output: PathBuf,
    stopwords: Option<PathBuf>,
    min_token_len: usize,
) -> Result<(), Failure> {
    let mut config = PreprocessConfig::default().with_min_token_length(min_token_len)?;
    if let Some(path) = stopwords {
        config = config.with_stopwords(casefind_core::load_stopwords(path)?);
    }
    let cases = corpus::read_corpus(&input, format)?;
    let (index, report) = casefind_core::build_index(&cases, &config)?;
    index.save(&output)?;
    write!(out, "{report}")?;
    writeln!(out, "index written to {}", output.display())?;
    Ok(())
}

fn cmd_query(
    out: &mut impl Write,
    index_path: PathBuf,
    query: &str,
    params: &SearchParams,
    format: OutputFormat,
) -> Result<(), Failure> {
    let index = Index::load(index_path)?;
    let results = index.search(query, params);
    match format {
        OutputFormat::Table => print_table(out, &results)?,
        OutputFormat::Records => {
            for hit in &results.hits {
                writeln!(
                    out,
                    "{{\"rank\":{},\"id\":{},\"title\":{},\"score\":{:.6},\"count\":{}}}",
                    hit.rank,
                    json_str(&hit.case_id),
                    json_str(&hit.title),
                    hit.score,
                    results.total_matches
                )?;
            }
            eprintln!("matches: {}", results.total_matches);
            eprintln!("dropped terms: {}", dropped_list(&results));
        }
    }
    Ok(())
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

fn dropped_list(results: &RankedResults) -> String {
    if results.dropped_terms.is_empty() {
        "none".to_owned()
    } else {
        results.dropped_terms.join(" ")
    }
}

fn print_table(out: &mut impl Write, results: &RankedResults) -> io::Result<()> {
    writeln!(out, "scorer: {}", results.scorer)?;
    writeln!(out, "matches: {}", results.total_matches)?;
    writeln!(out, "dropped terms: {}", dropped_list(results))?;
    if results.empty_query {
        writeln!(out, "no query term is indexed")?;
    }
    if results.hits.is_empty() {
        return Ok(());
    }
    writeln!(out, "rank\tscore\tid\ttitle")?;
    for hit in &results.hits {
        writeln!(out, "{}\t{:.6}\t{}\t{}", hit.rank, hit.score, hit.case_id, hit.title)?;
    }
    Ok(())
}

fn cmd_add(out: &mut impl Write, index_path: PathBuf, corpus_path: PathBuf, case: Case) -> Result<(), Failure> {
    let index = Index::load(&index_path)?;
    let (cases, format) = corpus::read_corpus_detect(&corpus_path)?;
    let options = BuildOptions {
        weighting: index.weighting(),
        exec: ExecMode::default(),
    };
    let (base, _) = CaseBase::with_options(cases, index.config().clone(), options)?;
    if base.index().map(|i| i.to_json()) != Some(index.to_json()) {
        return Err(Failure::Data(format!(
            "index `{}` was not built from corpus `{}`",
            index_path.display(),
            corpus_path.display()
        )));
    }
    let grown = base.retain(case.clone())?;
    corpus::append_case(&corpus_path, format, &case)?;
    let new_index = grown.index().expect("retained base has an index");
    new_index.save(&index_path)?;
    writeln!(out, "added case `{}`", case.id)?;
    writeln!(out, "corpus size: {}", new_index.corpus_size())?;
    Ok(())
}

fn cmd_eval(out: &mut impl Write, index_path: PathBuf, titles_path: PathBuf, seed: u64, scorer: Scorer) -> Result<(), Failure> {
    let index = Index::load(index_path)?;
    let titles = corpus::read_titles(&titles_path)?;
    if titles.is_empty() {
        return Err(Failure::Data(format!("no titles in `{}`", titles_path.display())));
    }
    let report = eval::run_two_stage(&index, &titles, seed, scorer, ExecMode::default());
    write!(out, "{report}")?;
    let violations = report.violations();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(violations.join("; ")))
    }
}
