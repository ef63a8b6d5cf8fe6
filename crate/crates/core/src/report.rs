//! Acceptability reports: fixed-width text tables for reading and
//! comma-separated values for machines.

use std::fmt::Write as _;

use crate::error::{Error, ErrorCode, Result};
use crate::hierarchy::{NodeId, ROOT};
use crate::model::Problem;
use crate::smaa::AcceptabilityResult;

/// Which tree nodes a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportLevel {
    /// Overall category acceptability only.
    #[default]
    Category,
    /// Overall plus the first-level criteria.
    FirstLevel,
    /// Every criterion node.
    AllNodes,
}

impl ReportLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportLevel::Category => "category",
            ReportLevel::FirstLevel => "first-level",
            ReportLevel::AllNodes => "all-nodes",
        }
    }

    fn includes(self, depth: usize) -> bool {
        match self {
            ReportLevel::Category => depth == 0,
            ReportLevel::FirstLevel => depth <= 1,
            ReportLevel::AllNodes => true,
        }
    }
}

impl std::str::FromStr for ReportLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "category" => Ok(ReportLevel::Category),
            "first-level" => Ok(ReportLevel::FirstLevel),
            "all-nodes" => Ok(ReportLevel::AllNodes),
            other => Err(Error::new(ErrorCode::Schema, format!("unknown report level `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
}

/// Integer percentages that sum to exactly 100, by largest remainder. Ties
/// in the remainder favour the earlier category.
pub fn display_percentages(hits: &[u64], total: u64) -> Vec<u64> {
    if total == 0 {
        return vec![0; hits.len()];
    }
    let scaled: Vec<u128> = hits.iter().map(|&h| u128::from(h) * 100).collect();
    let total = u128::from(total);
    let mut out: Vec<u64> = scaled.iter().map(|&s| (s / total) as u64).collect();
    let assigned: u64 = out.iter().sum();
    let mut order: Vec<usize> = (0..hits.len()).collect();
    order.sort_by(|&a, &b| (scaled[b] % total).cmp(&(scaled[a] % total)).then(a.cmp(&b)));
    for &i in order.iter().take(100u64.saturating_sub(assigned) as usize) {
        out[i] += 1;
    }
    out
}

pub fn write_report(result: &AcceptabilityResult, problem: &Problem, level: ReportLevel, format: ReportFormat, threshold: f64) -> String {
    match format {
        ReportFormat::Text => write_text(result, problem, level, threshold),
        ReportFormat::Csv => write_csv(result, problem, level, threshold),
    }
}

fn node_label(problem: &Problem, node: NodeId) -> String {
    if node == ROOT {
        "overall".to_owned()
    } else {
        problem.tree.label_path(node)
    }
}

/// Nodes in depth-first order, root first.
fn nodes_at(problem: &Problem, level: ReportLevel) -> Vec<NodeId> {
    std::iter::once(ROOT)
        .chain(problem.tree.criteria())
        .filter(|&id| level.includes(problem.tree.node(id).depth()))
        .collect()
}

/// One row per (alternative, node) with full-precision acceptabilities.
pub fn write_csv(result: &AcceptabilityResult, problem: &Problem, level: ReportLevel, threshold: f64) -> String {
    let mut out = String::from("alternative,node,level");
    for c in &result.categories {
        write!(out, ",{}", csv_field(c)).unwrap();
    }
    out.push_str(",assignment,meets_threshold\n");
    for (a, name) in result.alternatives.iter().enumerate() {
        for node in nodes_at(problem, level) {
            let row = result.row(a, node);
            let best = result.argmax(a, node);
            write!(out, "{},{},{}", csv_field(name), csv_field(&node_label(problem, node)), problem.tree.node(node).depth()).unwrap();
            for v in &row {
                write!(out, ",{v}").unwrap();
            }
            writeln!(out, ",{},{}", csv_field(&result.categories[best]), row[best] >= threshold).unwrap();
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Final category with a marker when its acceptability is below the
/// exploitation threshold.
fn final_cell(result: &AcceptabilityResult, alt: usize, node: NodeId, threshold: f64) -> String {
    let best = result.argmax(alt, node);
    let mark = if result.row(alt, node)[best] < threshold { "+" } else { "" };
    format!("{}{mark}", result.categories[best])
}

pub fn write_text(result: &AcceptabilityResult, problem: &Problem, level: ReportLevel, threshold: f64) -> String {
    let mut out = String::new();
    let pct = (threshold * 100.0).round();
    if result.deterministic {
        writeln!(out, "Deterministic run (point estimates), rule {}, {}", result.rule.as_str(), result.defuzz.as_str()).unwrap();
    } else {
        writeln!(
            out,
            "{} iterations, seed {}, rule {}, {}",
            result.iterations,
            result.seed,
            result.rule.as_str(),
            result.defuzz.as_str()
        )
        .unwrap();
    }
    if result.boundary_violations > 0 {
        writeln!(out, "{} assignments clamped to an end category", result.boundary_violations).unwrap();
    }
    out.push('\n');

    category_table(&mut out, result, threshold);
    if level != ReportLevel::Category {
        out.push('\n');
        first_level_table(&mut out, result, problem, threshold);
    }
    if level == ReportLevel::AllNodes {
        for a in 0..result.alternatives.len() {
            out.push('\n');
            node_blocks(&mut out, result, problem, a, threshold);
        }
    }
    writeln!(out, "\nFinal assignment: highest acceptability index; + marks acceptability below {pct}%").unwrap();
    out
}

fn category_table(out: &mut String, result: &AcceptabilityResult, threshold: f64) {
    writeln!(out, "Category acceptability index (%)").unwrap();
    let name_w = result.alternatives.iter().map(String::len).max().unwrap_or(0).max("Alternative".len());
    let col_w = result.categories.iter().map(String::len).max().unwrap_or(0).max(4);
    write!(out, "{:<name_w$}", "Alternative").unwrap();
    for c in &result.categories {
        write!(out, "  {c:>col_w$}").unwrap();
    }
    writeln!(out, "  Final assignment").unwrap();
    for (a, name) in result.alternatives.iter().enumerate() {
        write!(out, "{name:<name_w$}").unwrap();
        for p in display_percentages(result.hits(a, ROOT), result.iterations) {
            write!(out, "  {p:>col_w$}").unwrap();
        }
        writeln!(out, "  {}", final_cell(result, a, ROOT, threshold)).unwrap();
    }
}

fn first_level_table(out: &mut String, result: &AcceptabilityResult, problem: &Problem, threshold: f64) {
    writeln!(out, "Final assignment by first-level single-criterion flows").unwrap();
    let first = problem.tree.first_level();
    let label_w = first.iter().map(|&id| problem.tree.node(id).label().len()).max().unwrap_or(0).max("Criterion".len());
    let widths: Vec<usize> = result.alternatives.iter().map(|n| n.len().max(4)).collect();
    write!(out, "{:<label_w$}", "Criterion").unwrap();
    for (name, w) in result.alternatives.iter().zip(&widths) {
        write!(out, "  {name:>w$}").unwrap();
    }
    out.push('\n');
    for &id in first {
        write!(out, "{:<label_w$}", problem.tree.node(id).label()).unwrap();
        for (a, w) in widths.iter().enumerate() {
            write!(out, "  {:>w$}", final_cell(result, a, id, threshold)).unwrap();
        }
        out.push('\n');
    }
}

/// One block per first-level criterion listing every descendant with its
/// level, final category and acceptability of that category.
fn node_blocks(out: &mut String, result: &AcceptabilityResult, problem: &Problem, alt: usize, threshold: f64) {
    let tree = &problem.tree;
    writeln!(out, "Single-criterion assignments of {}", result.alternatives[alt]).unwrap();
    let rows: Vec<(NodeId, String)> = tree
        .criteria()
        .into_iter()
        .map(|id| {
            let node = tree.node(id);
            let text = if node.depth() == 1 {
                node.label().to_owned()
            } else {
                format!("{}L{} - {}", "    ".repeat(node.depth() - 1), node.depth(), node.label())
            };
            (id, text)
        })
        .collect();
    let width = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(0);
    for (id, text) in rows {
        let best = result.argmax(alt, id);
        let pct = display_percentages(result.hits(alt, id), result.iterations)[best];
        let pad = width - text.chars().count();
        writeln!(out, "{text}{}  {:<5} {pct:>3}%", " ".repeat(pad), final_cell(result, alt, id, threshold)).unwrap();
    }
}
