//! Serialization: JSON and text formats, ASCII and DOT renderings.
//!
//! All writers emit UTF-8 with LF line endings, keys in a fixed order and
//! one list element per line, so equal values always produce byte-equal
//! files. Parsers validate semantics (ranges, duplicates, coverage) after
//! syntax and report JSON syntax errors with line and column.
//!
//! Formats:
//! - incidence coloring: `{"m", "n", "k", "colors": [[row, col, "N", color], ...]}`
//!   where a total coloring lists all `4mn` incidences and a partial one
//!   any subset;
//! - pattern: `{"rows", "cols", "entries": [[...], ...]}` plus an optional
//!   `"deleted_edges": [[row, col, "H"|"V"], ...]` naming each deleted edge
//!   by its canonical endpoint (the edge goes east of it when horizontal,
//!   south when vertical);
//! - graph: `{"kind": "torus", "m", "n"}` or
//!   `{"kind": "generic", "vertices", "edges": [[u, v], ...]}`;
//! - matrix text: space-separated positive integers, one pattern row per
//!   line.
//!
//! Coordinates are 0-based and colors 1-based everywhere.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::coloring::{IncidenceColoring, PartialIncidenceColoring};
use crate::graph::{Axis, Direction, Edge, GenericGraph, TorusGrid};
use crate::pattern::{Pattern, QuasiPattern};

/// Errors of the parsers.
#[derive(Debug, Error)]
pub enum FormatError {
    /// Syntax error; the message includes line and column.
    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),
    /// Matrix text error with its 1-based line.
    #[error("line {line}: {message}")]
    Matrix { line: usize, message: String },
    /// Structurally well-formed input with invalid content.
    #[error("{0}")]
    Invalid(String),
}

fn invalid(message: impl Into<String>) -> FormatError {
    FormatError::Invalid(message.into())
}

// =============================================================================
// Incidence colorings
// =============================================================================

/// Serializes a total incidence coloring; entries in canonical order.
pub fn coloring_json(c: &IncidenceColoring) -> String {
    coloring_json_impl(c.grid(), c.palette_size(), |inc| Some(c.color(inc)))
}

/// Serializes a partial incidence coloring; assigned entries only, in
/// canonical order.
pub fn partial_coloring_json(c: &PartialIncidenceColoring) -> String {
    coloring_json_impl(c.grid(), c.palette_size(), |inc| c.color(inc))
}

fn coloring_json_impl(
    grid: TorusGrid,
    k: u32,
    color: impl Fn(crate::graph::Incidence) -> Option<u32>,
) -> String {
    let lines: Vec<String> = grid
        .incidences()
        .filter_map(|inc| {
            color(inc).map(|c| {
                format!(
                    "    [{}, {}, \"{}\", {}]",
                    inc.vertex.row,
                    inc.vertex.col,
                    inc.direction.letter(),
                    c
                )
            })
        })
        .collect();
    format!(
        "{{\n  \"m\": {},\n  \"n\": {},\n  \"k\": {},\n  \"colors\": [\n{}\n  ]\n}}\n",
        grid.m(),
        grid.n(),
        k,
        lines.join(",\n")
    )
}

/// A parsed coloring file: total when every incidence is covered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedColoring {
    Total(IncidenceColoring),
    Partial(PartialIncidenceColoring),
}

impl ParsedColoring {
    pub fn grid(&self) -> TorusGrid {
        match self {
            ParsedColoring::Total(c) => c.grid(),
            ParsedColoring::Partial(c) => c.grid(),
        }
    }

    /// View as a partial coloring (identity for partial input).
    pub fn into_partial(self) -> PartialIncidenceColoring {
        match self {
            ParsedColoring::Total(c) => c.as_partial(),
            ParsedColoring::Partial(c) => c,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringFile {
    m: usize,
    n: usize,
    k: u32,
    colors: Vec<(usize, usize, char, u32)>,
}

/// Parses an incidence coloring file, total or partial.
pub fn parse_coloring_json(text: &str) -> Result<ParsedColoring, FormatError> {
    let file: ColoringFile = serde_json::from_str(text)?;
    let grid = TorusGrid::new(file.m, file.n)
        .map_err(|e| invalid(format!("bad dimensions: {e}")))?;
    if file.k == 0 {
        return Err(invalid("palette size k must be at least 1"));
    }
    let mut slots: Vec<Option<u32>> = vec![None; grid.incidence_count()];
    for (row, col, letter, color) in &file.colors {
        if *row >= grid.m() || *col >= grid.n() {
            return Err(invalid(format!(
                "vertex ({row}, {col}) is outside the {}x{} grid",
                grid.m(),
                grid.n()
            )));
        }
        let dir = Direction::from_letter(*letter).ok_or_else(|| {
            invalid(format!("unknown direction {letter:?}; expected N, E, S or W"))
        })?;
        if *color < 1 || *color > file.k {
            return Err(invalid(format!(
                "color {color} at ({row}, {col}, {letter}) is outside 1..={}",
                file.k
            )));
        }
        let idx = grid.incidence_index(grid.incidence(grid.vertex(*row, *col), dir));
        if slots[idx].is_some() {
            return Err(invalid(format!(
                "incidence ({row}, {col}, {letter}) appears more than once"
            )));
        }
        slots[idx] = Some(*color);
    }
    let partial = PartialIncidenceColoring::new(grid, slots, file.k)
        .map_err(|e| invalid(e.to_string()))?;
    if partial.assigned_count() == grid.incidence_count() {
        let total = partial
            .into_total()
            .expect("coverage was just checked");
        Ok(ParsedColoring::Total(total))
    } else {
        Ok(ParsedColoring::Partial(partial))
    }
}

// =============================================================================
// Patterns
// =============================================================================

fn edge_triple(e: &Edge) -> (usize, usize, char) {
    let axis = match e.axis {
        Axis::Horizontal => 'H',
        Axis::Vertical => 'V',
    };
    (e.endpoint_a.row, e.endpoint_a.col, axis)
}

fn entries_block(p: &Pattern) -> String {
    let rows: Vec<String> = (0..p.rows())
        .map(|r| {
            let cells: Vec<String> = p.row(r).iter().map(u32::to_string).collect();
            format!("    [{}]", cells.join(", "))
        })
        .collect();
    rows.join(",\n")
}

/// Serializes a plain pattern.
pub fn pattern_json(p: &Pattern) -> String {
    format!(
        "{{\n  \"rows\": {},\n  \"cols\": {},\n  \"entries\": [\n{}\n  ]\n}}\n",
        p.rows(),
        p.cols(),
        entries_block(p)
    )
}

/// Serializes a quasi-pattern: its base plus the deleted edge list.
pub fn quasi_pattern_json(qp: &QuasiPattern) -> String {
    let edges: Vec<String> = qp
        .deleted_edges()
        .iter()
        .map(|e| {
            let (r, c, a) = edge_triple(e);
            format!("    [{r}, {c}, \"{a}\"]")
        })
        .collect();
    format!(
        "{{\n  \"rows\": {},\n  \"cols\": {},\n  \"entries\": [\n{}\n  ],\n  \"deleted_edges\": [\n{}\n  ]\n}}\n",
        qp.base().rows(),
        qp.base().cols(),
        entries_block(qp.base()),
        edges.join(",\n")
    )
}

/// A parsed pattern file; `deleted_edges` is empty for plain patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedPattern {
    pub pattern: Pattern,
    pub deleted_edges: Vec<Edge>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u32>>,
    #[serde(default)]
    deleted_edges: Vec<(usize, usize, char)>,
}

/// Parses a pattern file (plain or quasi).
pub fn parse_pattern_json(text: &str) -> Result<ParsedPattern, FormatError> {
    let file: PatternFile = serde_json::from_str(text)?;
    if file.entries.len() != file.rows {
        return Err(invalid(format!(
            "declared {} rows but entries has {}",
            file.rows,
            file.entries.len()
        )));
    }
    for (r, row) in file.entries.iter().enumerate() {
        if row.len() != file.cols {
            return Err(invalid(format!(
                "row {r} has {} entries, expected {}",
                row.len(),
                file.cols
            )));
        }
    }
    let pattern = Pattern::from_rows(&file.entries).map_err(|e| invalid(e.to_string()))?;
    let mut deleted_edges = Vec::with_capacity(file.deleted_edges.len());
    if !file.deleted_edges.is_empty() {
        let grid = TorusGrid::new(file.rows, file.cols).map_err(|e| {
            invalid(format!("deleted edges need a torus of the pattern's size: {e}"))
        })?;
        for (row, col, axis) in &file.deleted_edges {
            if *row >= grid.m() || *col >= grid.n() {
                return Err(invalid(format!(
                    "deleted edge endpoint ({row}, {col}) is outside the grid"
                )));
            }
            let dir = match axis {
                'H' => Direction::East,
                'V' => Direction::South,
                other => {
                    return Err(invalid(format!(
                        "unknown edge axis {other:?}; expected \"H\" or \"V\""
                    )))
                }
            };
            deleted_edges.push(grid.edge(grid.vertex(*row, *col), dir));
        }
    }
    Ok(ParsedPattern {
        pattern,
        deleted_edges,
    })
}

/// Serializes a pattern in the text matrix format.
pub fn pattern_matrix(p: &Pattern) -> String {
    p.to_string()
}

/// Parses the text matrix format with per-line error reporting.
pub fn parse_pattern_matrix(text: &str) -> Result<Pattern, FormatError> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut cols: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let bad = |message: String| FormatError::Matrix {
            line: line_no,
            message,
        };
        if line.trim().is_empty() {
            return Err(bad("empty line inside the matrix".into()));
        }
        let mut row = Vec::new();
        for (c, token) in line.split_whitespace().enumerate() {
            let value: u32 = token.parse().map_err(|_| {
                bad(format!(
                    "column {}: expected a positive integer, got {token:?}",
                    c + 1
                ))
            })?;
            if value == 0 {
                return Err(bad(format!("column {}: colors start at 1", c + 1)));
            }
            row.push(value);
        }
        match cols {
            None => cols = Some(row.len()),
            Some(expected) if expected != row.len() => {
                return Err(bad(format!(
                    "{} entries, expected {expected}",
                    row.len()
                )));
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(FormatError::Matrix {
            line: 1,
            message: "empty input".into(),
        });
    }
    Ok(Pattern::from_rows(&rows).expect("shape and entries were just validated"))
}

// =============================================================================
// Graphs
// =============================================================================

/// Serializes a torus as graph JSON.
pub fn torus_graph_json(grid: TorusGrid) -> String {
    format!(
        "{{ \"kind\": \"torus\", \"m\": {}, \"n\": {} }}\n",
        grid.m(),
        grid.n()
    )
}

/// Serializes a generic graph as graph JSON; edges in sorted order.
pub fn generic_graph_json(g: &GenericGraph) -> String {
    let edges: Vec<String> = g
        .edges()
        .map(|(u, v)| format!("    [{u}, {v}]"))
        .collect();
    format!(
        "{{\n  \"kind\": \"generic\",\n  \"vertices\": {},\n  \"edges\": [\n{}\n  ]\n}}\n",
        g.vertex_count(),
        edges.join(",\n")
    )
}

/// A parsed graph file.
#[derive(Debug, Clone)]
pub enum ParsedGraph {
    Torus(TorusGrid),
    Generic(GenericGraph),
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum GraphFile {
    Torus { m: usize, n: usize },
    Generic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
}

/// Parses graph JSON.
pub fn parse_graph_json(text: &str) -> Result<ParsedGraph, FormatError> {
    match serde_json::from_str(text)? {
        GraphFile::Torus { m, n } => {
            let grid = TorusGrid::new(m, n).map_err(|e| invalid(e.to_string()))?;
            Ok(ParsedGraph::Torus(grid))
        }
        GraphFile::Generic { vertices, edges } => {
            let mut g = GenericGraph::new(vertices);
            for (u, v) in edges {
                g.add_edge(u, v).map_err(|e| invalid(e.to_string()))?;
            }
            Ok(ParsedGraph::Generic(g))
        }
    }
}

// =============================================================================
// ASCII rendering
// =============================================================================

fn cell_color(c: Option<u32>) -> String {
    match c {
        Some(color) => format!("{color:>2}"),
        None => " x".to_string(),
    }
}

/// Renders a (partial) incidence coloring as a text diagram: one cell per
/// vertex showing the colors of its four incidences around a `+` marker,
/// `x` for unassigned slots.
///
/// The digit above each `+` colors the incidence pointing north from that
/// vertex, and so on; the two digits between horizontally neighbouring
/// cells belong to the two incidences of their shared edge.
pub fn render_ascii(c: &PartialIncidenceColoring) -> String {
    let grid = c.grid();
    let mut out = String::new();
    for row in 0..grid.m() {
        let mut lines = [String::new(), String::new(), String::new()];
        for col in 0..grid.n() {
            let v = grid.vertex(row, col);
            let color = |d: Direction| cell_color(c.color(grid.incidence(v, d)));
            let _ = write!(lines[0], "   {}    ", color(Direction::North));
            let _ = write!(
                lines[1],
                "{} + {}  ",
                color(Direction::West),
                color(Direction::East)
            );
            let _ = write!(lines[2], "   {}    ", color(Direction::South));
        }
        for line in &lines {
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
    out
}

// =============================================================================
// DOT export
// =============================================================================

/// Renders a (partial) incidence coloring as an undirected DOT graph; each
/// edge is labelled `a|b` with the colors of its two incidences (the
/// canonical endpoint's side first), `x` when unassigned.
pub fn render_dot(c: &PartialIncidenceColoring) -> String {
    let grid = c.grid();
    let mut out = format!("graph torus_{}x{} {{\n", grid.m(), grid.n());
    out.push_str("  node [shape=point];\n");
    for v in grid.vertices() {
        let _ = writeln!(out, "  \"v{}_{}\";", v.row, v.col);
    }
    let label = |inc| match c.color(inc) {
        Some(color) => color.to_string(),
        None => "x".to_string(),
    };
    for e in grid.edges() {
        let a = e.endpoint_a;
        let b = e.endpoint_b;
        let dir_a = match e.axis {
            Axis::Horizontal => Direction::East,
            Axis::Vertical => Direction::South,
        };
        let _ = writeln!(
            out,
            "  \"v{}_{}\" -- \"v{}_{}\" [label=\"{}|{}\"];",
            a.row,
            a.col,
            b.row,
            b.col,
            label(grid.incidence(a, dir_a)),
            label(grid.incidence(b, dir_a.opposite()))
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_pattern, CatalogEntry, PatternName};
    use crate::pattern::{induce_incidence_coloring, induce_partial};

    fn sample_total() -> IncidenceColoring {
        let CatalogEntry::Plain(i) = catalog_pattern(PatternName::I) else {
            panic!("I is plain")
        };
        induce_incidence_coloring(&i).unwrap()
    }

    fn sample_partial() -> PartialIncidenceColoring {
        let CatalogEntry::Quasi(g) = catalog_pattern(PatternName::G) else {
            panic!("G is quasi")
        };
        induce_partial(&g)
    }

    #[test]
    fn coloring_json_roundtrips_total() {
        let c = sample_total();
        let text = coloring_json(&c);
        match parse_coloring_json(&text).unwrap() {
            ParsedColoring::Total(back) => assert_eq!(back, c),
            ParsedColoring::Partial(_) => panic!("expected a total coloring"),
        }
    }

    #[test]
    fn coloring_json_roundtrips_partial() {
        let c = sample_partial();
        let text = partial_coloring_json(&c);
        match parse_coloring_json(&text).unwrap() {
            ParsedColoring::Partial(back) => assert_eq!(back, c),
            ParsedColoring::Total(_) => panic!("expected a partial coloring"),
        }
    }

    #[test]
    fn coloring_writers_are_deterministic() {
        let c = sample_total();
        assert_eq!(coloring_json(&c), coloring_json(&c));
        assert!(coloring_json(&c).ends_with('\n'));
    }

    #[test]
    fn coloring_parser_rejects_bad_content() {
        let cases = [
            (r#"{"m":3,"n":3,"k":0,"colors":[]}"#, "k"),
            (
                r#"{"m":3,"n":3,"k":6,"colors":[[3,0,"N",1]]}"#,
                "outside the 3x3 grid",
            ),
            (
                r#"{"m":3,"n":3,"k":6,"colors":[[0,0,"Q",1]]}"#,
                "unknown direction",
            ),
            (
                r#"{"m":3,"n":3,"k":6,"colors":[[0,0,"N",7]]}"#,
                "outside 1..=6",
            ),
            (
                r#"{"m":3,"n":3,"k":6,"colors":[[0,0,"N",1],[0,0,"N",2]]}"#,
                "more than once",
            ),
        ];
        for (text, needle) in cases {
            let err = parse_coloring_json(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{err:?} should mention {needle:?}");
        }
    }

    #[test]
    fn coloring_parser_reports_syntax_position() {
        let err = parse_coloring_json("{\n  \"m\": 3,\n  oops\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn pattern_json_roundtrips_plain_and_quasi() {
        let CatalogEntry::Plain(i) = catalog_pattern(PatternName::I) else {
            panic!()
        };
        let parsed = parse_pattern_json(&pattern_json(&i)).unwrap();
        assert_eq!(parsed.pattern, i);
        assert!(parsed.deleted_edges.is_empty());

        let CatalogEntry::Quasi(f) = catalog_pattern(PatternName::F) else {
            panic!()
        };
        let parsed = parse_pattern_json(&quasi_pattern_json(&f)).unwrap();
        assert_eq!(&parsed.pattern, f.base());
        let expected: Vec<Edge> = f.deleted_edges().iter().copied().collect();
        assert_eq!(parsed.deleted_edges, expected);
    }

    #[test]
    fn pattern_parser_rejects_shape_mismatches() {
        let err = parse_pattern_json(r#"{"rows":2,"cols":2,"entries":[[1,2]]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("declared 2 rows"), "{err}");
        let err = parse_pattern_json(r#"{"rows":1,"cols":3,"entries":[[1,2]]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("expected 3"), "{err}");
        let err = parse_pattern_json(
            r#"{"rows":1,"cols":2,"entries":[[1,2]],"deleted_edges":[[0,0,"D"]]}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("torus") || err.contains("axis"), "{err}");
    }

    #[test]
    fn matrix_roundtrips_and_reports_lines() {
        let CatalogEntry::Plain(i) = catalog_pattern(PatternName::I) else {
            panic!()
        };
        assert_eq!(parse_pattern_matrix(&pattern_matrix(&i)).unwrap(), i);

        let err = parse_pattern_matrix("1 2 3\n4 five 6\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("column 2"), "{err}");
        let err = parse_pattern_matrix("1 2 3\n4 5\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
        let err = parse_pattern_matrix("1 0\n").unwrap_err().to_string();
        assert!(err.contains("start at 1"), "{err}");
        let err = parse_pattern_matrix("").unwrap_err().to_string();
        assert!(err.contains("empty"), "{err}");
    }

    #[test]
    fn graph_json_roundtrips() {
        let grid = TorusGrid::new(3, 4).unwrap();
        match parse_graph_json(&torus_graph_json(grid)).unwrap() {
            ParsedGraph::Torus(t) => assert_eq!((t.m(), t.n()), (3, 4)),
            ParsedGraph::Generic(_) => panic!("expected torus"),
        }
        let g = grid.to_graph();
        match parse_graph_json(&generic_graph_json(&g)).unwrap() {
            ParsedGraph::Generic(back) => {
                assert_eq!(back.vertex_count(), g.vertex_count());
                assert_eq!(
                    back.edges().collect::<Vec<_>>(),
                    g.edges().collect::<Vec<_>>()
                );
            }
            ParsedGraph::Torus(_) => panic!("expected generic"),
        }
    }

    #[test]
    fn ascii_render_shows_colors_and_unassigned() {
        let c = sample_partial();
        let text = render_ascii(&c);
        assert_eq!(text.lines().count(), 3 * c.grid().m());
        assert!(text.contains('x'), "deleted-edge incidences render as x");
        assert!(text.contains('+'));

        let empty = PartialIncidenceColoring::empty(TorusGrid::new(3, 3).unwrap(), 6);
        let rendered = render_ascii(&empty);
        assert!(!rendered.chars().any(|ch| ch.is_ascii_digit()));
        assert_eq!(rendered.matches('x').count(), 4 * 9);
    }

    #[test]
    fn ascii_render_is_stable() {
        let CatalogEntry::Plain(a) = catalog_pattern(PatternName::A) else {
            panic!()
        };
        let c = induce_incidence_coloring(&a).unwrap().as_partial();
        let text = render_ascii(&c);
        let first_cell: Vec<&str> = text.lines().take(3).collect();
        // Vertex (0,0) of the 4x4 example: north points at row 3 (entry 7
        // in column 0), east at entry 2, south at entry 3, west at entry 4.
        assert_eq!(first_cell[0].trim_start().split_whitespace().next(), Some("7"));
        assert!(first_cell[1].starts_with(" 4 +  2"));
        assert_eq!(first_cell[2].trim_start().split_whitespace().next(), Some("3"));
    }

    #[test]
    fn dot_render_labels_both_sides() {
        let c = sample_total().as_partial();
        let text = render_dot(&c);
        assert!(text.starts_with("graph torus_5x6 {"));
        assert!(text.ends_with("}\n"));
        // 2mn edges, one line each, plus node lines.
        assert_eq!(text.matches(" -- ").count(), 2 * 5 * 6);
        assert_eq!(text.matches("label=").count(), 2 * 5 * 6);
        assert!(!text.contains("label=\"x"));
        let partial = sample_partial();
        assert!(render_dot(&partial).contains("label=\"x|x\""));
    }
}
