//! Text driver for the dynamic ledger.
//!
//! One command per line:
//!
//! ```text
//! NODE a        declare node a
//! DEL a         remove a, settling its debts
//! ARC a b 10    a now owes b 10 more
//! UNARC a b     clear what can be cleared between a and b
//! QUERY         print a minimal plan
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `QUERY` prints
//! `query K` and `DEL` prints `settle K`, each followed by `K` lines
//! `sender receiver amount` sorted by `(sender, receiver)` in declaration
//! order of the nodes.

use std::collections::HashMap;
use std::fmt::Write;

use debtclear::{Ledger, Money, NodeId, Transaction, DEFAULT_CAPACITY};

use crate::format::{fields, number, ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Node(String),
    Del(String),
    Arc(String, String, Money),
    Unarc(String, String),
    Query,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptLine {
    pub line: usize,
    pub command: Command,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperationScript {
    pub commands: Vec<ScriptLine>,
}

fn name(field: &str, line: usize) -> Result<String, ParseError> {
    if !field.is_empty() && field.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
        Ok(field.to_owned())
    } else {
        Err(ParseError::new(line, ParseErrorKind::BadName(field.to_owned())))
    }
}

pub fn parse_script(input: &str) -> Result<OperationScript, ParseError> {
    let mut commands = Vec::new();
    for (i, text) in input.lines().enumerate() {
        let line = i + 1;
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let keyword = trimmed.split_whitespace().next().unwrap_or_default();
        let command = match keyword {
            "NODE" => {
                let [_, a] = fields::<2>(trimmed, line)?;
                Command::Node(name(a, line)?)
            }
            "DEL" => {
                let [_, a] = fields::<2>(trimmed, line)?;
                Command::Del(name(a, line)?)
            }
            "ARC" => {
                let [_, a, b, x] = fields::<4>(trimmed, line)?;
                let amount: Money = number(x, line)?;
                if amount <= 0 {
                    return Err(ParseError::new(line, ParseErrorKind::NonPositiveWeight(amount)));
                }
                Command::Arc(name(a, line)?, name(b, line)?, amount)
            }
            "UNARC" => {
                let [_, a, b] = fields::<3>(trimmed, line)?;
                Command::Unarc(name(a, line)?, name(b, line)?)
            }
            "QUERY" => {
                fields::<1>(trimmed, line)?;
                Command::Query
            }
            other => return Err(ParseError::new(line, ParseErrorKind::UnknownCommand(other.to_owned()))),
        };
        commands.push(ScriptLine { line, command });
    }
    Ok(OperationScript { commands })
}

/// A command that failed, with everything printed before it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("command {index} (line {line}): {reason}")]
pub struct ScriptError {
    /// 1-based position among the script's commands.
    pub index: usize,
    pub line: usize,
    pub reason: String,
    pub output: String,
}

struct Names {
    ids: HashMap<String, NodeId>,
    names: HashMap<NodeId, String>,
}

impl Names {
    fn id(&self, name: &str) -> Result<NodeId, String> {
        self.ids.get(name).copied().ok_or_else(|| format!("node `{name}` is not declared"))
    }

    fn write_block(&self, out: &mut String, label: &str, transactions: &[Transaction]) {
        let mut sorted = transactions.to_vec();
        sorted.sort_unstable();
        writeln!(out, "{label} {}", sorted.len()).unwrap();
        for t in sorted {
            writeln!(out, "{} {} {}", self.names[&t.sender], self.names[&t.receiver], t.amount).unwrap();
        }
    }
}

pub fn run_script(script: &OperationScript) -> Result<String, ScriptError> {
    run_script_with(script, DEFAULT_CAPACITY)
}

/// Runs `script` on a fresh ledger with the given active-set capacity,
/// stopping at the first failing command.
pub fn run_script_with(script: &OperationScript, capacity: usize) -> Result<String, ScriptError> {
    let mut ledger = Ledger::with_capacity(capacity).map_err(|e| ScriptError {
        index: 0,
        line: 0,
        reason: e.to_string(),
        output: String::new(),
    })?;
    let mut names = Names { ids: HashMap::new(), names: HashMap::new() };
    let mut out = String::new();
    for (i, entry) in script.commands.iter().enumerate() {
        if let Err(reason) = step(&mut ledger, &mut names, &mut out, &entry.command) {
            return Err(ScriptError { index: i + 1, line: entry.line, reason, output: out });
        }
    }
    Ok(out)
}

fn step(ledger: &mut Ledger, names: &mut Names, out: &mut String, command: &Command) -> Result<(), String> {
    let err = |e: debtclear::Error| e.to_string();
    match command {
        Command::Node(a) => {
            if names.ids.contains_key(a) {
                return Err(format!("node `{a}` is already declared"));
            }
            let id = ledger.insert_node();
            names.ids.insert(a.clone(), id);
            names.names.insert(id, a.clone());
        }
        Command::Del(a) => {
            let id = names.id(a)?;
            let payments = ledger.remove_node(id).map_err(err)?;
            names.write_block(out, "settle", &payments);
            names.ids.remove(a);
        }
        Command::Arc(a, b, x) => ledger.insert_arc(names.id(a)?, names.id(b)?, *x).map_err(err)?,
        Command::Unarc(a, b) => ledger.remove_arc(names.id(a)?, names.id(b)?).map_err(err)?,
        Command::Query => {
            let plan = ledger.query();
            names.write_block(out, "query", plan.as_slice());
        }
    }
    Ok(())
}
