//! Pattern algebra: color matrices, gluing, tiling, and the mapping from
//! patterns to incidence colorings.
//!
//! An `m x n` matrix of colors can be read as a vertex coloring of the
//! square of `T(m, n)`. When that reading is proper, the matrix induces an
//! incidence coloring of the torus itself: the incidence `(u, uv)` simply
//! takes the matrix entry at `v`, so all four incidences pointing at a
//! vertex share its color. Checking propriety on the square is therefore a
//! complete proxy for checking the induced incidence coloring.
//!
//! A [`QuasiPattern`] relaxes this: its matrix only needs to be proper on
//! the square of the torus *minus* a set of deleted edges. The induced
//! object is then a partial incidence coloring whose unassigned incidences
//! are exactly those lying on deleted edges; the `completion` module fills
//! them in.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::coloring::{
    verify_partial, verify_vertex_coloring, IncidenceColoring, PartialIncidenceColoring, Verdict,
    VertexColoring,
};
use crate::graph::{Direction, Edge, GenericGraph, GraphError, TorusGrid};

/// Errors raised by pattern construction and composition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern rows must be >= 1, got {0}")]
    NoRows(usize),
    #[error("pattern row {row} has {got} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("pattern entry at ({row},{col}) must be >= 1")]
    ZeroEntry { row: usize, col: usize },
    #[error("cannot glue patterns with {left} and {right} rows")]
    RowCountMismatch { left: usize, right: usize },
    #[error("repetition count must be >= 1, got {0}")]
    ZeroRepeat(usize),
    #[error("tiling factors must be >= 1, got ({p},{q})")]
    ZeroTile { p: usize, q: usize },
    #[error("pattern is {rows}x{cols}, but a torus needs both dimensions >= 3")]
    TooSmallForTorus { rows: usize, cols: usize },
    #[error("row index {row} out of range for a pattern with {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },
    #[error("deleted edge {0:?} is not a canonical edge of the matching torus")]
    ForeignDeletedEdge(Edge),
    #[error(
        "matrix is not a proper coloring of the square of the torus minus the deleted edges \
         (vertices {0} and {1} conflict)"
    )]
    ImproperOnSquare(usize, usize),
    #[error("input coloring is invalid and cannot be tiled")]
    TileInputInvalid,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

// =============================================================================
// Pattern
// =============================================================================

/// An `m x n` matrix of colors (integers >= 1), stored row-major.
///
/// A pattern carries no validity promise by itself: narrow strips (such as
/// single columns) exist purely to be glued, and checking a pattern against
/// a torus square is a separate operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl Pattern {
    /// Builds a pattern from rows; all rows must have equal length and all
    /// entries must be at least 1. Zero columns are allowed (the gluing
    /// identity); zero rows are not.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Pattern, PatternError> {
        if rows.is_empty() {
            return Err(PatternError::NoRows(0));
        }
        let cols = rows[0].len();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(PatternError::RaggedRow {
                    row: r,
                    got: row.len(),
                    expected: cols,
                });
            }
            for (c, &x) in row.iter().enumerate() {
                if x == 0 {
                    return Err(PatternError::ZeroEntry { row: r, col: c });
                }
                entries.push(x);
            }
        }
        Ok(Pattern {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a pattern by evaluating `f` at every position.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Result<Pattern, PatternError> {
        if rows == 0 {
            return Err(PatternError::NoRows(0));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let x = f(r, c);
                if x == 0 {
                    return Err(PatternError::ZeroEntry { row: r, col: c });
                }
                entries.push(x);
            }
        }
        Ok(Pattern {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> u32 {
        debug_assert!(row < self.rows && col < self.cols);
        self.entries[row * self.cols + col]
    }

    /// Largest color appearing in the matrix (0 only for zero-column strips).
    pub fn max_color(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// One row as a slice.
    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix rows as vectors (convenience for tests and serialization).
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Periodic replication: the `(p*rows) x (q*cols)` matrix whose entry at
    /// `(i, j)` is the entry at `(i mod rows, j mod cols)`.
    ///
    /// If the pattern is proper on its torus square, the replication is
    /// proper on the larger one: walks of length at most two project to
    /// walks of length at most two between distinct vertices.
    pub fn tiled(&self, p: usize, q: usize) -> Result<Pattern, PatternError> {
        if p == 0 || q == 0 {
            return Err(PatternError::ZeroTile { p, q });
        }
        Pattern::from_fn(self.rows * p, self.cols * q, |i, j| {
            self.entry(i % self.rows, j % self.cols)
        })
    }

    /// Reads the pattern as a vertex coloring of the square of `T(rows, cols)`.
    pub fn square_coloring(&self) -> Result<VertexColoring, PatternError> {
        let grid = self.torus()?;
        let sq = grid.to_graph().square();
        VertexColoring::new(sq, self.entries.clone(), self.max_color())
            .map_err(|_| PatternError::ZeroEntry { row: 0, col: 0 })
    }

    /// Whether the pattern is a proper vertex coloring of its torus square.
    pub fn is_proper_on_square(&self) -> Result<bool, PatternError> {
        Ok(verify_vertex_coloring(&self.square_coloring()?).is_valid())
    }

    fn torus(&self) -> Result<TorusGrid, PatternError> {
        TorusGrid::new(self.rows, self.cols).map_err(|_| PatternError::TooSmallForTorus {
            rows: self.rows,
            cols: self.cols,
        })
    }
}

impl fmt::Display for Pattern {
    /// The text matrix format: space-separated colors, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Horizontal concatenation of two patterns with equal row counts.
pub fn glue(a: &Pattern, b: &Pattern) -> Result<Pattern, PatternError> {
    if a.rows != b.rows {
        return Err(PatternError::RowCountMismatch {
            left: a.rows,
            right: b.rows,
        });
    }
    let mut rows = Vec::with_capacity(a.rows);
    for r in 0..a.rows {
        let mut row = a.row(r).to_vec();
        row.extend_from_slice(b.row(r));
        rows.push(row);
    }
    Pattern::from_rows(&rows)
}

/// Horizontal concatenation of `l >= 1` copies of a pattern.
pub fn repeat(a: &Pattern, l: usize) -> Result<Pattern, PatternError> {
    if l == 0 {
        return Err(PatternError::ZeroRepeat(0));
    }
    let mut out = a.clone();
    for _ in 1..l {
        out = glue(&out, a)?;
    }
    Ok(out)
}

// =============================================================================
// QuasiPattern
// =============================================================================

/// A pattern together with a set of deleted torus edges, proper on the
/// square of the torus minus those edges.
///
/// Construction verifies the propriety invariant, so a `QuasiPattern` value
/// is always usable with [`induce_partial`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPattern {
    base: Pattern,
    deleted_edges: BTreeSet<Edge>,
}

impl QuasiPattern {
    /// Validates and wraps a pattern plus deleted-edge set.
    ///
    /// Each deleted edge must be a canonical edge of `T(rows, cols)`, and
    /// the matrix must be a proper vertex coloring of the square of the
    /// torus with those edges removed.
    pub fn new(base: Pattern, deleted_edges: BTreeSet<Edge>) -> Result<QuasiPattern, PatternError> {
        let grid = base.torus()?;
        for &e in &deleted_edges {
            let canonical = grid
                .edge_between(e.endpoint_a, e.endpoint_b)
                .filter(|c| *c == e);
            if e.endpoint_a.row >= grid.m()
                || e.endpoint_a.col >= grid.n()
                || e.endpoint_b.row >= grid.m()
                || e.endpoint_b.col >= grid.n()
                || canonical.is_none()
            {
                return Err(PatternError::ForeignDeletedEdge(e));
            }
        }
        // Propriety on the square of the torus minus the deleted edges.
        let mut g = GenericGraph::new(grid.vertex_count());
        for e in grid.edges() {
            if !deleted_edges.contains(&e) {
                g.add_edge(grid.vertex_index(e.endpoint_a), grid.vertex_index(e.endpoint_b))?;
            }
        }
        let colors: Vec<u32> = grid
            .vertices()
            .map(|v| base.entry(v.row, v.col))
            .collect();
        let coloring = VertexColoring::new(g.square(), colors, base.max_color())
            .expect("entries are validated positive");
        if let Verdict::Invalid { witness: (u, v) } = verify_vertex_coloring(&coloring) {
            return Err(PatternError::ImproperOnSquare(u, v));
        }
        Ok(QuasiPattern {
            base,
            deleted_edges,
        })
    }

    /// A quasi-pattern with nothing deleted (requires propriety on the full
    /// square).
    pub fn without_deletions(base: Pattern) -> Result<QuasiPattern, PatternError> {
        QuasiPattern::new(base, BTreeSet::new())
    }

    pub fn base(&self) -> &Pattern {
        &self.base
    }

    pub fn deleted_edges(&self) -> &BTreeSet<Edge> {
        &self.deleted_edges
    }

    pub fn grid(&self) -> TorusGrid {
        TorusGrid::new(self.base.rows(), self.base.cols()).expect("validated at construction")
    }
}

/// The ring of `n` vertical edges joining row `upper_row` to the row below.
pub fn vertical_ring(grid: TorusGrid, upper_row: usize) -> Vec<Edge> {
    (0..grid.n())
        .map(|j| grid.edge(grid.vertex(upper_row, j), Direction::South))
        .collect()
}

/// The ring of `m` horizontal edges joining column `left_col` to the column
/// to its right.
pub fn horizontal_ring(grid: TorusGrid, left_col: usize) -> Vec<Edge> {
    (0..grid.m())
        .map(|i| grid.edge(grid.vertex(i, left_col), Direction::East))
        .collect()
}

// =============================================================================
// Induced colorings
// =============================================================================

/// The incidence coloring induced by a pattern: incidence `(u, uv)` takes
/// the matrix entry at `v`. Palette size is the largest entry.
///
/// No validity is implied; run the verifier (or check the pattern on the
/// torus square, which is equivalent) to decide propriety.
pub fn induce_incidence_coloring(p: &Pattern) -> Result<IncidenceColoring, PatternError> {
    let grid = p.torus()?;
    let coloring = IncidenceColoring::from_fn(grid, p.max_color(), |inc| {
        let target = grid.neighbor(inc.vertex, inc.direction);
        p.entry(target.row, target.col)
    })
    .expect("pattern entries are positive and within the palette");
    Ok(coloring)
}

/// The partial incidence coloring induced by a quasi-pattern: the pattern's
/// incidence coloring restricted to incidences not lying on deleted edges.
///
/// Both incidences of every deleted edge are unassigned and everything else
/// is assigned. Because the quasi-pattern invariant was checked at
/// construction, the result always passes [`verify_partial`]: a conflict
/// between two kept incidences would exhibit two vertices within distance
/// two of each other in the edge-deleted torus carrying equal pattern
/// colors.
pub fn induce_partial(qp: &QuasiPattern) -> PartialIncidenceColoring {
    let grid = qp.grid();
    let p = qp.base();
    let mut out = PartialIncidenceColoring::empty(grid, p.max_color());
    for inc in grid.incidences() {
        if !qp.deleted_edges().contains(&grid.incidence_edge(inc)) {
            let target = grid.neighbor(inc.vertex, inc.direction);
            out.set(inc, Some(p.entry(target.row, target.col)))
                .expect("pattern entries are positive and within the palette");
        }
    }
    debug_assert!(
        verify_partial(&out).is_valid(),
        "quasi-pattern invariant should make the induced partial coloring valid"
    );
    out
}

/// Periodic replication of a valid incidence coloring of `T(m, n)` to
/// `T(pm, qn)`: the incidence at `((i, j), dir)` takes the color of
/// `((i mod m, j mod n), dir)`.
///
/// The input must be valid (checked); the output then is as well, because
/// adjacent incidences of the large torus project to distinct adjacent
/// incidences of the small one.
pub fn tile(
    c: &IncidenceColoring,
    p: usize,
    q: usize,
) -> Result<IncidenceColoring, PatternError> {
    if p == 0 || q == 0 {
        return Err(PatternError::ZeroTile { p, q });
    }
    if !crate::coloring::verify_incidence_coloring(c).is_valid() {
        return Err(PatternError::TileInputInvalid);
    }
    let small = c.grid();
    let big = TorusGrid::new(small.m() * p, small.n() * q)?;
    let out = IncidenceColoring::from_fn(big, c.palette_size(), |inc| {
        let v = small.vertex(inc.vertex.row % small.m(), inc.vertex.col % small.n());
        c.color(small.incidence(v, inc.direction))
    })
    .expect("colors come from a coloring with the same palette");
    debug_assert!(
        crate::coloring::verify_incidence_coloring(&out).is_valid(),
        "tiling a valid coloring must stay valid"
    );
    Ok(out)
}

/// Triples the selected rows of a pattern, deleting the vertical edge rings
/// inside each tripled block.
///
/// The input must be proper on its own torus square. Each selected row
/// appears three times consecutively in the result, and the two edge rings
/// separating the copies are deleted, which is what keeps the (identical)
/// copies out of each other's distance-two reach. Selected rows may be
/// adjacent: blocks then simply follow one another, and the ring between
/// two blocks (joining distinct rows) stays intact. The empty selection
/// returns the trivial quasi-pattern.
pub fn repeat_rows(
    p: &Pattern,
    rows_to_triple: &BTreeSet<usize>,
) -> Result<QuasiPattern, PatternError> {
    for &r in rows_to_triple {
        if r >= p.rows() {
            return Err(PatternError::RowOutOfRange {
                row: r,
                rows: p.rows(),
            });
        }
    }
    if !p.is_proper_on_square()? {
        let w = match verify_vertex_coloring(&p.square_coloring()?) {
            Verdict::Invalid { witness } => witness,
            Verdict::Valid => unreachable!(),
        };
        return Err(PatternError::ImproperOnSquare(w.0, w.1));
    }
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(p.rows() + 2 * rows_to_triple.len());
    let mut ring_tops: Vec<usize> = Vec::new();
    for r in 0..p.rows() {
        if rows_to_triple.contains(&r) {
            let t = rows.len();
            ring_tops.push(t);
            ring_tops.push(t + 1);
            rows.push(p.row(r).to_vec());
            rows.push(p.row(r).to_vec());
        }
        rows.push(p.row(r).to_vec());
    }
    let base = Pattern::from_rows(&rows)?;
    let grid = TorusGrid::new(base.rows(), base.cols())
        .map_err(|_| PatternError::TooSmallForTorus {
            rows: base.rows(),
            cols: base.cols(),
        })?;
    let deleted: BTreeSet<Edge> = ring_tops
        .into_iter()
        .flat_map(|t| vertical_ring(grid, t))
        .collect();
    QuasiPattern::new(base, deleted)
}
