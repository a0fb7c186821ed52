//! Line-delimited corpus files.
//!
//! Record mode holds one JSON object per line with the fields `id`, `title`,
//! `solution` (optional) and `meta` (optional flat string map). Plain mode
//! holds one title per line; the case id is the 1-based line number.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::index::Case;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Record,
    Plain,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "record" => Ok(CorpusFormat::Record),
            "plain" => Ok(CorpusFormat::Plain),
            other => Err(format!("unknown corpus format `{other}` (expected record or plain)")),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_owned(),
        source,
    })
}

pub fn read_corpus(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Vec<Case>> {
    let path = path.as_ref();
    let text = read(path)?;
    match format {
        CorpusFormat::Plain => Ok(parse_plain(&text)),
        CorpusFormat::Record => parse_records(&text, path),
    }
}

pub fn parse_plain(text: &str) -> Vec<Case> {
    text.lines()
        .enumerate()
        .map(|(i, line)| Case::new((i + 1).to_string(), line))
        .collect()
}

/// Blank lines are skipped; any other line must be a well-formed record.
pub fn parse_records(text: &str, path: &Path) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let case: Case = serde_json::from_str(line).map_err(|e| Error::Record {
            path: path.to_owned(),
            line: i + 1,
            message: e.to_string(),
        })?;
        if case.id.is_empty() {
            return Err(Error::Record {
                path: path.to_owned(),
                line: i + 1,
                message: "empty id".into(),
            });
        }
        cases.push(case);
    }
    Ok(cases)
}

/// Record mode if every non-blank line parses as a record, plain otherwise.
pub fn detect_format(text: &str) -> CorpusFormat {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty()).peekable();
    if lines.peek().is_none() {
        return CorpusFormat::Record;
    }
    if lines.all(|l| serde_json::from_str::<Case>(l).is_ok()) {
        CorpusFormat::Record
    } else {
        CorpusFormat::Plain
    }
}

pub fn read_corpus_detect(path: impl AsRef<Path>) -> Result<(Vec<Case>, CorpusFormat)> {
    let path = path.as_ref();
    let text = read(path)?;
    let format = detect_format(&text);
    let cases = match format {
        CorpusFormat::Plain => parse_plain(&text),
        CorpusFormat::Record => parse_records(&text, path)?,
    };
    Ok((cases, format))
}

pub fn record_line(case: &Case) -> String {
    serde_json::to_string(case).expect("case serializes")
}

pub fn write_records(path: impl AsRef<Path>, cases: &[Case]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for c in cases {
        out.push_str(&record_line(c));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| Error::Write {
        path: path.to_owned(),
        source,
    })
}

/// Appends one case. Plain corpora can only store the title, so the case
/// must carry the next line number as its id and no solution or meta.
pub fn append_case(path: impl AsRef<Path>, format: CorpusFormat, case: &Case) -> Result<()> {
    let path = path.as_ref();
    let existing = read(path)?;
    let line = match format {
        CorpusFormat::Record => record_line(case),
        CorpusFormat::Plain => {
            if case.solution.is_some() || !case.meta.is_empty() {
                return Err(Error::Config(
                    "plain corpus files store titles only; use a record corpus for solutions".into(),
                ));
            }
            let next = existing.lines().count() + 1;
            if case.id != next.to_string() {
                return Err(Error::Config(format!(
                    "plain corpus ids are line numbers; the next id is `{next}`, not `{}`",
                    case.id
                )));
            }
            if case.title.contains(['\n', '\r']) {
                return Err(Error::Config("title must be a single line".into()));
            }
            case.title.clone()
        }
    };
    let mut f = OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(|source| Error::Write {
            path: path.to_owned(),
            source,
        })?;
    let mut buf = String::new();
    if !existing.is_empty() && !existing.ends_with('\n') {
        buf.push('\n');
    }
    buf.push_str(&line);
    buf.push('\n');
    f.write_all(buf.as_bytes()).map_err(|source| Error::Write {
        path: path.to_owned(),
        source,
    })
}

/// Eval titles file: one title per line, blank lines ignored.
pub fn read_titles(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let text = read(path.as_ref())?;
    Ok(text
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect())
}
