//! Static instance files and plan output.
//!
//! Instance: a header line `n m`, then `m` lines `borrower lender weight`
//! with 1-indexed nodes. Plan: a line `t`, then `t` lines
//! `sender receiver amount`, sorted by `(sender, receiver)`. Fields are
//! whitespace-separated decimal integers.

use std::fmt::Write;

use debtclear::{Borrowing, Money, NodeId, TransactionPlan};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("expected {expected} fields, found {found}")]
    FieldCount { expected: usize, found: usize },
    #[error("`{0}` is not a valid number")]
    BadNumber(String),
    #[error("node {index} is outside 1..={n}")]
    NodeOutOfRange { index: u64, n: usize },
    #[error("weight must be positive, got {0}")]
    NonPositiveWeight(Money),
    #[error("node {0} cannot borrow from itself")]
    Loop(u64),
    #[error("expected {expected} arcs, found {found}")]
    MissingArcs { expected: usize, found: usize },
    #[error("unexpected content after the last arc")]
    TrailingContent,
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("`{0}` is not a valid name")]
    BadName(String),
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }
}

/// Borrowing graph over nodes `0..n` (written 1-indexed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticInstance {
    pub n: usize,
    pub borrowings: Vec<Borrowing>,
}

pub(crate) fn fields<const N: usize>(line: &str, number: usize) -> Result<[&str; N], ParseError> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    parts
        .as_slice()
        .try_into()
        .map_err(|_| ParseError::new(number, ParseErrorKind::FieldCount { expected: N, found: parts.len() }))
}

pub(crate) fn number<T: std::str::FromStr>(field: &str, line: usize) -> Result<T, ParseError> {
    field.parse().map_err(|_| ParseError::new(line, ParseErrorKind::BadNumber(field.to_owned())))
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

pub fn parse_static(input: &str) -> Result<StaticInstance, ParseError> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !is_blank(l));
    let (header_line, header) = lines.next().ok_or(ParseError::new(1, ParseErrorKind::MissingHeader))?;
    let [n, m] = fields::<2>(header, header_line)?;
    let n: usize = number(n, header_line)?;
    let m: usize = number(m, header_line)?;

    let node = |field: &str, line: usize| -> Result<NodeId, ParseError> {
        let index: u64 = number(field, line)?;
        if index == 0 || index > n as u64 || index > u32::MAX as u64 {
            return Err(ParseError::new(line, ParseErrorKind::NodeOutOfRange { index, n }));
        }
        Ok(NodeId(index as u32 - 1))
    };

    let mut borrowings = Vec::new();
    let mut last_line = header_line;
    while borrowings.len() < m {
        let Some((line, text)) = lines.next() else {
            return Err(ParseError::new(
                last_line + 1,
                ParseErrorKind::MissingArcs { expected: m, found: borrowings.len() },
            ));
        };
        last_line = line;
        let [u, v, w] = fields::<3>(text, line)?;
        let (u, v) = (node(u, line)?, node(v, line)?);
        let weight: Money = number(w, line)?;
        if weight <= 0 {
            return Err(ParseError::new(line, ParseErrorKind::NonPositiveWeight(weight)));
        }
        if u == v {
            return Err(ParseError::new(line, ParseErrorKind::Loop(u.0 as u64 + 1)));
        }
        borrowings.push(Borrowing { borrower: u, lender: v, amount: weight });
    }
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::new(line, ParseErrorKind::TrailingContent));
    }
    Ok(StaticInstance { n, borrowings })
}

pub fn format_static(instance: &StaticInstance) -> String {
    let mut out = format!("{} {}\n", instance.n, instance.borrowings.len());
    for b in &instance.borrowings {
        writeln!(out, "{} {} {}", b.borrower.0 + 1, b.lender.0 + 1, b.amount).unwrap();
    }
    out
}

/// Plan in the output format, nodes written 1-indexed.
pub fn format_plan(plan: &TransactionPlan) -> String {
    let mut out = format!("{}\n", plan.len());
    for t in plan {
        writeln!(out, "{} {} {}", t.sender.0 + 1, t.receiver.0 + 1, t.amount).unwrap();
    }
    out
}
