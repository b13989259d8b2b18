//! Line-oriented text formats.
//!
//! ```text
//! c comment
//! p csat 4 4        (or `p sat N M`)
//! 1 3 0
//! -3 -4 0
//! ```
//!
//! ```text
//! p tracks N M
//! +1.1 -1 1 1 5 1 2          (tag, then lo/hi for tracks 1..3)
//! 3# -5 3 -5 -4 -1 1
//! ```
//!
//! Graphs use DIMACS `p edge V E`, `e u v` (1-based) and the `n v w`
//! weight extension. Assignments are one line of `0`/`1`, `x1` first.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::formulas::{Assignment, Clause, CsatInstance, Formula, Literal, SatInstance};
use crate::intervals::{
    IntersectionGraph, Member, MultiTrackInterval, OpenInterval, Tag, TrackFamily, TRACKS,
};
use crate::reductions::{GadgetBlock, GadgetMap, GADGET_CLAUSES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; 0 when the problem is the input as a whole.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Largest variable, clause or member count a header may declare.
pub const MAX_COUNT: usize = 1 << 20;
/// Largest vertex or edge count a graph header may declare; adjacency is a
/// dense bit matrix.
pub const MAX_GRAPH_VERTICES: usize = 1 << 14;

/// Which format a header announces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Sat,
    Csat,
    Tracks,
    Graph,
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !is_comment(line))
}

fn is_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ") || line.starts_with("c\t")
}

/// Reads the `p` line announcing the file kind.
pub fn detect_kind(text: &str) -> Result<FileKind, ParseError> {
    let (line, header) = content_lines(text)
        .next()
        .ok_or_else(|| err(0, "missing `p` header"))?;
    match header.split_whitespace().nth(1) {
        Some("sat") if header.starts_with("p ") => Ok(FileKind::Sat),
        Some("csat") if header.starts_with("p ") => Ok(FileKind::Csat),
        Some("tracks") if header.starts_with("p ") => Ok(FileKind::Tracks),
        Some("edge") if header.starts_with("p ") => Ok(FileKind::Graph),
        _ => Err(err(line, format!("unrecognized header {header:?}"))),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| err(line, format!("invalid {what} {token:?}")))
}

/// Parses `p <format> a b` and returns `(a, b)`.
fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    format: &str,
    limit: usize,
) -> Result<(usize, usize, usize), ParseError> {
    let (line, header) = lines
        .next()
        .ok_or_else(|| err(0, format!("missing `p {format}` header")))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    match tokens.as_slice() {
        ["p", f, a, b] if *f == format => {
            let a: usize = parse_num(line, a, "count")?;
            let b: usize = parse_num(line, b, "count")?;
            if a > limit || b > limit {
                return Err(err(
                    line,
                    format!("header counts above the limit of {limit}"),
                ));
            }
            Ok((line, a, b))
        }
        _ => Err(err(
            line,
            format!("expected `p {format} <n> <m>`, found {header:?}"),
        )),
    }
}

fn parse_clauses(text: &str, format: &str) -> Result<(usize, Vec<Clause>), ParseError> {
    let mut lines = content_lines(text);
    let (header_line, n, m) = parse_header(&mut lines, format, MAX_COUNT)?;
    let mut clauses = Vec::with_capacity(m.min(1 << 16));
    for (line, body) in lines {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let [a, b, "0"] = tokens.as_slice() else {
            return Err(err(line, "expected two nonzero literals followed by 0"));
        };
        let lit = |token: &str| -> Result<Literal, ParseError> {
            let value: i64 = parse_num(line, token, "literal")?;
            let literal = Literal::from_dimacs(value)
                .ok_or_else(|| err(line, "literal 0 inside a clause"))?;
            if literal.var() > n {
                return Err(err(
                    line,
                    format!("variable {} exceeds declared {n}", literal.var()),
                ));
            }
            Ok(literal)
        };
        clauses.push(Clause::new(lit(a)?, lit(b)?));
    }
    if clauses.len() != m {
        return Err(err(
            header_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    Ok((n, clauses))
}

pub fn parse_csat(text: &str) -> Result<CsatInstance, ParseError> {
    let (n, clauses) = parse_clauses(text, "csat")?;
    CsatInstance::new(n, clauses).map_err(|e| err(0, e.to_string()))
}

pub fn parse_sat(text: &str) -> Result<SatInstance, ParseError> {
    let (n, clauses) = parse_clauses(text, "sat")?;
    SatInstance::new(n, clauses).map_err(|e| err(0, e.to_string()))
}

fn write_clauses<F: Formula>(formula: &F, format: &str, preamble: &str) -> String {
    let mut out = String::new();
    out.push_str(preamble);
    let _ = writeln!(
        out,
        "p {format} {} {}",
        formula.num_vars(),
        formula.num_clauses()
    );
    for clause in formula.clauses() {
        let _ = writeln!(
            out,
            "{} {} 0",
            clause.first().to_dimacs(),
            clause.second().to_dimacs()
        );
    }
    out
}

pub fn write_csat(instance: &CsatInstance) -> String {
    write_clauses(instance, "csat", "")
}

/// Gadget provenance goes into `c gadget ...` comment lines ahead of the header.
pub fn write_csat_with_gadget(instance: &CsatInstance, map: &GadgetMap) -> String {
    write_clauses(instance, "csat", &map.to_string())
}

pub fn write_sat(instance: &SatInstance) -> String {
    write_clauses(instance, "sat", "")
}

/// Recovers a [`GadgetMap`] from `c gadget k -> a..b y=v` lines. The
/// original variable count is the lowest dummy index minus one.
pub fn parse_gadget_map(text: &str) -> Result<Option<GadgetMap>, ParseError> {
    let mut blocks = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let Some(rest) = raw.trim().strip_prefix("c gadget ") else {
            continue;
        };
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        let [k, "->", range, y] = tokens.as_slice() else {
            return Err(err(line, "expected `c gadget k -> a..b y=v`"));
        };
        let k: usize = parse_num(line, k, "clause index")?;
        let (first, last) = range
            .split_once("..")
            .ok_or_else(|| err(line, format!("invalid range {range:?}")))?;
        let first: usize = parse_num(line, first, "clause index")?;
        let last: usize = parse_num(line, last, "clause index")?;
        let dummy: usize = parse_num(
            line,
            y.strip_prefix("y=")
                .ok_or_else(|| err(line, "missing y="))?,
            "dummy variable",
        )?;
        if k != blocks.len() + 1
            || first == 0
            || first.checked_add(GADGET_CLAUSES - 1) != Some(last)
            || dummy == 0
        {
            return Err(err(line, "gadget line out of sequence"));
        }
        blocks.push(GadgetBlock {
            first_clause: first,
            dummy,
        });
    }
    let Some(min_dummy) = blocks.iter().map(|b| b.dummy).min() else {
        return Ok(None);
    };
    Ok(Some(GadgetMap {
        original_vars: min_dummy - 1,
        blocks,
    }))
}

pub fn parse_assignment(text: &str) -> Result<Assignment, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (idx, line) = lines.next().ok_or_else(|| err(0, "empty assignment"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(err(extra + 1, "assignment must be a single line"));
    }
    let values = line
        .trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(err(idx + 1, format!("unexpected character {other:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Assignment::new(values))
}

pub fn write_assignment(assignment: &Assignment) -> String {
    let mut out: String = assignment
        .values()
        .iter()
        .map(|&v| if v { '1' } else { '0' })
        .collect();
    out.push('\n');
    out
}

pub fn parse_tracks(text: &str) -> Result<TrackFamily, ParseError> {
    let mut lines = content_lines(text);
    let (_, n, m) = parse_header(&mut lines, "tracks", MAX_COUNT)?;
    let mut members = Vec::new();
    let mut seen = HashSet::new();
    for (line, body) in lines {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 1 + 2 * TRACKS {
            return Err(err(
                line,
                format!("expected a tag and {} endpoints", 2 * TRACKS),
            ));
        }
        let tag: Tag = tokens[0]
            .parse()
            .map_err(|e: crate::intervals::TagParseError| err(line, e.to_string()))?;
        let mut tracks = [OpenInterval::new(0, 1).expect("nonempty"); TRACKS];
        for (t, slot) in tracks.iter_mut().enumerate() {
            let lo: i64 = parse_num(line, tokens[1 + 2 * t], "endpoint")?;
            let hi: i64 = parse_num(line, tokens[2 + 2 * t], "endpoint")?;
            *slot = OpenInterval::new(lo, hi).map_err(|e| err(line, e.to_string()))?;
        }
        let in_range = match tag {
            Tag::Pos { var, copy } | Tag::Neg { var, copy } => {
                var <= n && copy <= crate::intervals::LITERAL_COPIES
            }
            Tag::Clause(k) => k <= m,
        };
        if !in_range {
            return Err(err(
                line,
                format!("tag {tag} out of range for {n} variables, {m} clauses"),
            ));
        }
        if !seen.insert(tag) {
            return Err(err(line, format!("duplicate tag {tag}")));
        }
        members.push(Member {
            tag,
            interval: MultiTrackInterval::new(tracks),
        });
    }
    TrackFamily::new(n, m, members).map_err(|e| err(0, e.to_string()))
}

pub fn write_tracks(family: &TrackFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p tracks {} {}",
        family.num_vars(),
        family.num_clauses()
    );
    for member in family.members() {
        let _ = write!(out, "{}", member.tag);
        for t in member.interval.tracks() {
            let _ = write!(out, " {} {}", t.lo(), t.hi());
        }
        out.push('\n');
    }
    out
}

/// Labels are vertex numbers `1..=V`.
pub fn parse_graph(text: &str) -> Result<IntersectionGraph<usize>, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, v, e) = parse_header(&mut lines, "edge", MAX_GRAPH_VERTICES)?;
    let mut weights = vec![1u64; v];
    let mut weighted = vec![false; v];
    let mut edges = Vec::new();
    let vertex = |line: usize, token: &str| -> Result<usize, ParseError> {
        let idx: usize = parse_num(line, token, "vertex")?;
        if idx == 0 || idx > v {
            return Err(err(line, format!("vertex {idx} outside 1..={v}")));
        }
        Ok(idx - 1)
    };
    for (line, body) in lines {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            ["e", a, b] => {
                let (a, b) = (vertex(line, a)?, vertex(line, b)?);
                if a == b {
                    return Err(err(line, "self-loop"));
                }
                edges.push((line, a.min(b), a.max(b)));
            }
            ["n", a, w] => {
                let a = vertex(line, a)?;
                let w: u64 = parse_num(line, w, "weight")?;
                if w == 0 {
                    return Err(err(line, "weight must be positive"));
                }
                if weighted[a] {
                    return Err(err(line, format!("vertex {} weighted twice", a + 1)));
                }
                weighted[a] = true;
                weights[a] = w;
            }
            _ => return Err(err(line, format!("unexpected line {body:?}"))),
        }
    }
    if edges.len() != e {
        return Err(err(
            header_line,
            format!("header declares {e} edges, found {}", edges.len()),
        ));
    }
    let mut graph = IntersectionGraph::new((1..=v).collect(), weights);
    for (line, a, b) in edges {
        if graph.is_adjacent(a, b) {
            return Err(err(line, format!("duplicate edge {} {}", a + 1, b + 1)));
        }
        graph.add_edge(a, b);
    }
    Ok(graph)
}

/// Writes `c v <i> <label>` lines so that vertex identities survive export.
pub fn write_graph<L: std::fmt::Display>(graph: &IntersectionGraph<L>) -> String {
    let mut out = String::new();
    for (idx, label) in graph.labels().iter().enumerate() {
        let _ = writeln!(out, "c v {} {}", idx + 1, label);
    }
    let _ = writeln!(out, "p edge {} {}", graph.len(), graph.edge_count());
    for (idx, &w) in graph.weights().iter().enumerate() {
        let _ = writeln!(out, "n {} {}", idx + 1, w);
    }
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}
