//! Incidence and vertex colorings, plus their verifiers.
//!
//! Colors are plain integers starting at 1. Every coloring carries an
//! explicit `palette_size` because "uses at most k colors" is a different
//! claim from "the maximum color happens to be k"; the headline results of
//! this crate are statements about palette sizes.
//!
//! Verification enumerates, for each incidence, its adjacent incidences
//! directly (no conflict graph is materialized), so memory stays
//! proportional to the coloring itself.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{GenericGraph, Incidence, TorusGrid};

/// Errors raised when assembling or querying colorings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    /// A color fell outside `1..=palette_size`.
    #[error("color {color} at {incidence} outside palette 1..={palette}")]
    ColorOutOfRange {
        incidence: Incidence,
        color: u32,
        palette: u32,
    },
    /// A vertex color fell outside `1..=palette_size`.
    #[error("color {color} at vertex {vertex} outside palette 1..={palette}")]
    VertexColorOutOfRange {
        vertex: usize,
        color: u32,
        palette: u32,
    },
    /// The assignment list has the wrong length for the grid or graph.
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    /// The queried incidence is already assigned.
    #[error("incidence {0} is already assigned")]
    AlreadyAssigned(Incidence),
}

/// Verdict of a verifier: either valid, or invalid with one offending pair.
///
/// The witness is the lexicographically first conflicting pair under the
/// canonical incidence order (or vertex-index order), so failures are
/// reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Valid,
    Invalid { witness: W },
}

impl<W> Verdict<W> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    /// Transforms the witness, e.g. into a printable description.
    pub fn map_witness<X>(self, f: impl FnOnce(W) -> X) -> Verdict<X> {
        match self {
            Verdict::Valid => Verdict::Valid,
            Verdict::Invalid { witness } => Verdict::Invalid {
                witness: f(witness),
            },
        }
    }
}

// =============================================================================
// Incidence colorings
// =============================================================================

/// A total assignment of colors `1..=palette_size` to every incidence of a
/// toroidal grid, stored in canonical incidence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceColoring {
    grid: TorusGrid,
    colors: Vec<u32>,
    palette_size: u32,
}

impl IncidenceColoring {
    /// Wraps a color vector in canonical incidence order.
    ///
    /// Every entry must lie in `1..=palette_size` and the vector must have
    /// exactly `4mn` entries.
    pub fn new(grid: TorusGrid, colors: Vec<u32>, palette_size: u32) -> Result<Self, ColoringError> {
        if colors.len() != grid.incidence_count() {
            return Err(ColoringError::WrongLength {
                expected: grid.incidence_count(),
                got: colors.len(),
            });
        }
        for (i, &c) in colors.iter().enumerate() {
            if c < 1 || c > palette_size {
                return Err(ColoringError::ColorOutOfRange {
                    incidence: grid.incidence_at(i),
                    color: c,
                    palette: palette_size,
                });
            }
        }
        Ok(IncidenceColoring {
            grid,
            colors,
            palette_size,
        })
    }

    /// Builds a coloring by evaluating `f` on every incidence.
    pub fn from_fn(
        grid: TorusGrid,
        palette_size: u32,
        mut f: impl FnMut(Incidence) -> u32,
    ) -> Result<Self, ColoringError> {
        let colors = grid.incidences().map(&mut f).collect();
        IncidenceColoring::new(grid, colors, palette_size)
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn palette_size(&self) -> u32 {
        self.palette_size
    }

    pub fn color(&self, inc: Incidence) -> u32 {
        self.colors[self.grid.incidence_index(inc)]
    }

    /// Colors in canonical incidence order.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// The same assignment viewed as a (fully assigned) partial coloring.
    pub fn as_partial(&self) -> PartialIncidenceColoring {
        PartialIncidenceColoring {
            grid: self.grid,
            colors: self.colors.clone(),
            palette_size: self.palette_size,
        }
    }
}

/// A partial assignment of colors to incidences; unassigned slots are
/// explicitly enumerable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialIncidenceColoring {
    grid: TorusGrid,
    /// Canonical-order slots; 0 encodes "unassigned".
    colors: Vec<u32>,
    palette_size: u32,
}

impl PartialIncidenceColoring {
    /// An entirely unassigned coloring.
    pub fn empty(grid: TorusGrid, palette_size: u32) -> Self {
        PartialIncidenceColoring {
            grid,
            colors: vec![0; grid.incidence_count()],
            palette_size,
        }
    }

    /// Wraps per-incidence options in canonical order.
    pub fn new(
        grid: TorusGrid,
        colors: Vec<Option<u32>>,
        palette_size: u32,
    ) -> Result<Self, ColoringError> {
        if colors.len() != grid.incidence_count() {
            return Err(ColoringError::WrongLength {
                expected: grid.incidence_count(),
                got: colors.len(),
            });
        }
        let mut slots = vec![0u32; colors.len()];
        for (i, entry) in colors.iter().enumerate() {
            if let Some(c) = *entry {
                if c < 1 || c > palette_size {
                    return Err(ColoringError::ColorOutOfRange {
                        incidence: grid.incidence_at(i),
                        color: c,
                        palette: palette_size,
                    });
                }
                slots[i] = c;
            }
        }
        Ok(PartialIncidenceColoring {
            grid,
            colors: slots,
            palette_size,
        })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn palette_size(&self) -> u32 {
        self.palette_size
    }

    pub fn color(&self, inc: Incidence) -> Option<u32> {
        match self.colors[self.grid.incidence_index(inc)] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn is_assigned(&self, inc: Incidence) -> bool {
        self.colors[self.grid.incidence_index(inc)] != 0
    }

    pub fn assigned_count(&self) -> usize {
        self.colors.iter().filter(|&&c| c != 0).count()
    }

    /// Unassigned incidences in canonical order.
    pub fn unassigned(&self) -> Vec<Incidence> {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(i, _)| self.grid.incidence_at(i))
            .collect()
    }

    /// Sets or clears one slot.
    pub fn set(&mut self, inc: Incidence, color: Option<u32>) -> Result<(), ColoringError> {
        let idx = self.grid.incidence_index(inc);
        match color {
            None => self.colors[idx] = 0,
            Some(c) => {
                if c < 1 || c > self.palette_size {
                    return Err(ColoringError::ColorOutOfRange {
                        incidence: inc,
                        color: c,
                        palette: self.palette_size,
                    });
                }
                self.colors[idx] = c;
            }
        }
        Ok(())
    }

    /// Converts to a total coloring; fails if any slot is unassigned.
    pub fn into_total(self) -> Result<IncidenceColoring, ColoringError> {
        if let Some(i) = self.colors.iter().position(|&c| c == 0) {
            return Err(ColoringError::ColorOutOfRange {
                incidence: self.grid.incidence_at(i),
                color: 0,
                palette: self.palette_size,
            });
        }
        Ok(IncidenceColoring {
            grid: self.grid,
            colors: self.colors,
            palette_size: self.palette_size,
        })
    }

    /// Raw slots in canonical order, 0 meaning unassigned.
    pub(crate) fn slots(&self) -> &[u32] {
        &self.colors
    }
}

/// Checks a total incidence coloring against the adjacency conditions.
///
/// On failure the witness is the first conflicting pair `(a, b)` with `a`
/// minimal in canonical order and `b` minimal among conflicts of `a`.
pub fn verify_incidence_coloring(c: &IncidenceColoring) -> Verdict<(Incidence, Incidence)> {
    first_conflict(c.grid(), |inc| Some(c.color(inc)))
}

/// Checks a partial incidence coloring; only pairs with both sides assigned
/// can conflict. The empty coloring is trivially valid.
pub fn verify_partial(c: &PartialIncidenceColoring) -> Verdict<(Incidence, Incidence)> {
    first_conflict(c.grid(), |inc| c.color(inc))
}

fn first_conflict(
    grid: TorusGrid,
    color: impl Fn(Incidence) -> Option<u32>,
) -> Verdict<(Incidence, Incidence)> {
    for a in grid.incidences() {
        let Some(ca) = color(a) else { continue };
        let a_index = grid.incidence_index(a);
        for b in grid.incidence_neighbors(a) {
            // Neighbour lists are in canonical order; only look forward so
            // the first hit is the lexicographically first pair.
            if grid.incidence_index(b) <= a_index {
                continue;
            }
            if color(b) == Some(ca) {
                return Verdict::Invalid { witness: (a, b) };
            }
        }
    }
    Verdict::Valid
}

/// The colors already used by assigned neighbours of an unassigned
/// incidence. The completion arguments revolve around the size of this set.
pub fn forbidden_colors(
    c: &PartialIncidenceColoring,
    a: Incidence,
) -> Result<BTreeSet<u32>, ColoringError> {
    if c.is_assigned(a) {
        return Err(ColoringError::AlreadyAssigned(a));
    }
    Ok(c.grid()
        .incidence_neighbors(a)
        .into_iter()
        .filter_map(|b| c.color(b))
        .collect())
}

// =============================================================================
// Vertex colorings
// =============================================================================

/// A total vertex coloring of a [`GenericGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexColoring {
    graph: GenericGraph,
    colors: Vec<u32>,
    palette_size: u32,
}

impl VertexColoring {
    pub fn new(
        graph: GenericGraph,
        colors: Vec<u32>,
        palette_size: u32,
    ) -> Result<Self, ColoringError> {
        if colors.len() != graph.vertex_count() {
            return Err(ColoringError::WrongLength {
                expected: graph.vertex_count(),
                got: colors.len(),
            });
        }
        for (v, &c) in colors.iter().enumerate() {
            if c < 1 || c > palette_size {
                return Err(ColoringError::VertexColorOutOfRange {
                    vertex: v,
                    color: c,
                    palette: palette_size,
                });
            }
        }
        Ok(VertexColoring {
            graph,
            colors,
            palette_size,
        })
    }

    pub fn graph(&self) -> &GenericGraph {
        &self.graph
    }

    pub fn palette_size(&self) -> u32 {
        self.palette_size
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }
}

/// Checks that no edge joins equal colors. The witness is the first
/// offending edge in `(u, v)` lexicographic order.
pub fn verify_vertex_coloring(c: &VertexColoring) -> Verdict<(usize, usize)> {
    for (u, v) in c.graph().edges() {
        if c.color(u) == c.color(v) {
            return Verdict::Invalid { witness: (u, v) };
        }
    }
    Verdict::Valid
}
