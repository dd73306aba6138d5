//! Plain-text approval profiles.
//!
//! ```text
//! # comment lines start with '#'
//! 4 4 2        <- n m k
//! 0 1          <- one line per voter, ascending candidate indices
//! 0 1
//! 2
//! 3
//! ```
//!
//! Blank lines after the header are empty ballots. Exactly `n` ballot lines
//! must follow the header.

use crate::model::ElectionInstance;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MalformedHeader(String),
    NoVoters,
    EmptyCommittee,
    CommitteeTooLarge { k: usize, m: usize },
    MissingBallots { expected: usize, found: usize },
    TrailingLine,
    BadToken(String),
    NotAscending { previous: usize, index: usize },
    Duplicate(usize),
    IndexOutOfRange { index: usize, m: usize },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MalformedHeader(why) => write!(f, "malformed header: {why}"),
            ParseErrorKind::NoVoters => f.write_str("n must be at least 1"),
            ParseErrorKind::EmptyCommittee => f.write_str("k must be at least 1"),
            ParseErrorKind::CommitteeTooLarge { k, m } => write!(f, "k > m ({k} > {m})"),
            ParseErrorKind::MissingBallots { expected, found } => {
                write!(f, "expected {expected} ballot lines, found {found}")
            }
            ParseErrorKind::TrailingLine => f.write_str("unexpected line after the last ballot"),
            ParseErrorKind::BadToken(t) => write!(f, "not a candidate index: {t:?}"),
            ParseErrorKind::NotAscending { previous, index } => {
                write!(
                    f,
                    "candidate {index} follows {previous}; ballots must be ascending"
                )
            }
            ParseErrorKind::Duplicate(c) => write!(f, "candidate {c} listed twice"),
            ParseErrorKind::IndexOutOfRange { index, m } => {
                write!(f, "candidate {index} out of range (m = {m})")
            }
        }
    }
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split(' ')
        .scan(1usize, |col, tok| {
            let start = *col;
            *col += tok.chars().count() + 1;
            Some((start, tok))
        })
        .filter(|(_, tok)| !tok.is_empty())
}

pub fn parse_profile(text: &str) -> Result<ElectionInstance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim_start().starts_with('#'));

    let Some((header_line, header)) = lines.next() else {
        return Err(err(
            1,
            1,
            ParseErrorKind::MalformedHeader("missing `n m k` line".into()),
        ));
    };
    let fields: Vec<(usize, &str)> = tokens(header).collect();
    if fields.len() != 3 {
        return Err(err(
            header_line,
            1,
            ParseErrorKind::MalformedHeader(format!("expected 3 integers, found {}", fields.len())),
        ));
    }
    let mut values = [0usize; 3];
    for (slot, &(col, tok)) in values.iter_mut().zip(&fields) {
        *slot = tok.parse().map_err(|_| {
            err(
                header_line,
                col,
                ParseErrorKind::MalformedHeader(format!("not a non-negative integer: {tok:?}")),
            )
        })?;
    }
    let [n, m, k] = values;
    if n < 1 {
        return Err(err(header_line, fields[0].0, ParseErrorKind::NoVoters));
    }
    if k < 1 {
        return Err(err(
            header_line,
            fields[2].0,
            ParseErrorKind::EmptyCommittee,
        ));
    }
    if k > m {
        return Err(err(
            header_line,
            fields[2].0,
            ParseErrorKind::CommitteeTooLarge { k, m },
        ));
    }

    let mut ballots = Vec::with_capacity(n);
    let mut last_line = header_line;
    for (line_no, line) in lines.by_ref() {
        if ballots.len() == n {
            return Err(err(line_no, 1, ParseErrorKind::TrailingLine));
        }
        last_line = line_no;
        ballots.push(parse_ballot(line_no, line, m)?);
    }
    if ballots.len() < n {
        return Err(err(
            last_line + 1,
            1,
            ParseErrorKind::MissingBallots {
                expected: n,
                found: ballots.len(),
            },
        ));
    }
    Ok(ElectionInstance::new(n, m, k, ballots).expect("grammar checks cover instance validation"))
}

fn parse_ballot(line_no: usize, line: &str, m: usize) -> Result<Vec<usize>, ParseError> {
    let mut ballot: Vec<usize> = Vec::new();
    for (col, tok) in tokens(line) {
        let index: usize = tok
            .parse()
            .map_err(|_| err(line_no, col, ParseErrorKind::BadToken(tok.to_string())))?;
        if index >= m {
            return Err(err(
                line_no,
                col,
                ParseErrorKind::IndexOutOfRange { index, m },
            ));
        }
        if let Some(&previous) = ballot.last() {
            if previous == index {
                return Err(err(line_no, col, ParseErrorKind::Duplicate(index)));
            }
            if previous > index {
                return Err(err(
                    line_no,
                    col,
                    ParseErrorKind::NotAscending { previous, index },
                ));
            }
        }
        ballot.push(index);
    }
    Ok(ballot)
}

/// Canonical text form; `parse_profile(&serialize_profile(i)) == i`.
pub fn serialize_profile(instance: &ElectionInstance) -> String {
    let mut out = format!(
        "{} {} {}\n",
        instance.num_voters(),
        instance.num_candidates(),
        instance.committee_size()
    );
    for ballot in instance.ballots() {
        let line: Vec<String> = ballot.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
