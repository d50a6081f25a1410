//! Frozen reference colorings and table helpers shared by the integration
//! suites.
//!
//! Each table lists one `[north, east, south, west]` quadruple per vertex
//! in row-major order; `0` marks an unassigned incidence. The values were
//! transcribed by hand and are deliberately independent of the library's
//! constructions: the tests check the library against them, not the other
//! way around.

#![allow(dead_code)]

use torus_incidence::coloring::{IncidenceColoring, PartialIncidenceColoring};
use torus_incidence::graph::TorusGrid;

/// A full six-color incidence coloring of the 3x5 torus.
pub const T35_FULL: [[u32; 4]; 15] = [
    [2, 6, 1, 5],
    [5, 4, 2, 3],
    [6, 2, 5, 1],
    [1, 5, 3, 4],
    [4, 3, 6, 2],
    [3, 4, 2, 6],
    [6, 5, 3, 1],
    [4, 3, 6, 2],
    [2, 6, 1, 5],
    [5, 1, 4, 3],
    [1, 5, 3, 4],
    [4, 6, 1, 2],
    [5, 1, 4, 3],
    [3, 4, 2, 6],
    [6, 2, 5, 1],
];

/// The partial six-coloring of the 4x3 torus with both incidences of every
/// ring edge between the duplicated rows left open.
pub const T43_PARTIAL: [[u32; 4]; 12] = [
    [3, 2, 0, 4],
    [5, 4, 0, 1],
    [6, 1, 0, 2],
    [0, 2, 3, 4],
    [0, 4, 5, 1],
    [0, 1, 6, 2],
    [1, 5, 0, 6],
    [2, 6, 0, 3],
    [4, 3, 0, 5],
    [0, 5, 1, 6],
    [0, 6, 2, 3],
    [0, 3, 4, 5],
];

/// The partial six-coloring of the 4x4 torus, same shape as [`T43_PARTIAL`].
pub const T44_PARTIAL: [[u32; 4]; 16] = [
    [3, 2, 0, 4],
    [4, 3, 0, 1],
    [5, 4, 0, 2],
    [6, 1, 0, 3],
    [0, 2, 3, 4],
    [0, 3, 4, 1],
    [0, 4, 5, 2],
    [0, 1, 6, 3],
    [1, 4, 0, 6],
    [2, 5, 0, 3],
    [3, 6, 0, 4],
    [4, 3, 0, 5],
    [0, 4, 1, 6],
    [0, 5, 2, 3],
    [0, 6, 3, 4],
    [0, 3, 4, 5],
];

/// A full six-color incidence coloring of the 4x5 torus.
pub const T45_FULL: [[u32; 4]; 20] = [
    [1, 3, 2, 4],
    [1, 4, 2, 6],
    [1, 6, 2, 3],
    [2, 4, 3, 5],
    [3, 5, 1, 6],
    [5, 6, 4, 1],
    [5, 1, 4, 3],
    [5, 3, 4, 6],
    [6, 1, 5, 2],
    [4, 2, 6, 3],
    [2, 3, 1, 6],
    [2, 6, 1, 5],
    [2, 5, 1, 3],
    [3, 6, 2, 4],
    [1, 4, 3, 5],
    [4, 6, 5, 3],
    [4, 3, 5, 2],
    [4, 2, 5, 6],
    [5, 3, 6, 1],
    [6, 1, 4, 2],
];

/// Row words of the 7x7 partial coloring: the base rows `A` and `B`, the
/// replacement word `M` carried by the south incidences of row 0 and the
/// north incidences of row 2, and the east word of row 0.
pub const T77_ROW_A: [u32; 7] = [3, 5, 6, 3, 4, 5, 6];
pub const T77_ROW_B: [u32; 7] = [1, 2, 4, 1, 2, 3, 4];
pub const T77_ROW_M: [u32; 7] = [5, 6, 3, 5, 6, 1, 2];
pub const T77_ROW_E0: [u32; 7] = [4, 1, 2, 4, 5, 6, 3];

/// The partial six-coloring of the 7x7 torus, expanded from the frozen row
/// words. Vertex `(i, j)` gets the quadruple listed in the match; indices
/// into the words are taken modulo seven.
pub fn t77_partial_table() -> Vec<[u32; 4]> {
    let a = |j: usize| T77_ROW_A[j % 7];
    let b = |j: usize| T77_ROW_B[j % 7];
    let m = |j: usize| T77_ROW_M[j % 7];
    let e0 = |j: usize| T77_ROW_E0[j % 7];
    let mut table = Vec::with_capacity(49);
    for i in 0..7 {
        for j in 0..7 {
            table.push(match i {
                0 => [b(j), e0(j), m(j), a(j + 6)],
                1 => [a(j), b(j + 1), 0, b(j + 6)],
                2 => [m(j), b(j + 1), a(j), b(j + 6)],
                3 => [b(j), a(j + 1), 0, a(j + 6)],
                4 => [0, a(j + 1), b(j), a(j + 6)],
                5 => [a(j), b(j + 1), 0, b(j + 6)],
                _ => [0, b(j + 1), a(j), b(j + 6)],
            });
        }
    }
    table
}

/// Builds a total coloring from a `[N, E, S, W]`-per-vertex table.
pub fn total_from_table(m: usize, n: usize, k: u32, table: &[[u32; 4]]) -> IncidenceColoring {
    assert_eq!(table.len(), m * n, "table covers every vertex");
    let grid = TorusGrid::new(m, n).expect("fixture dimensions are at least three");
    let colors = table.iter().flatten().copied().collect();
    IncidenceColoring::new(grid, colors, k).expect("fixture colors fit the palette")
}

/// Builds a partial coloring from a table where `0` marks unassigned slots.
pub fn partial_from_table(
    m: usize,
    n: usize,
    k: u32,
    table: &[[u32; 4]],
) -> PartialIncidenceColoring {
    assert_eq!(table.len(), m * n, "table covers every vertex");
    let grid = TorusGrid::new(m, n).expect("fixture dimensions are at least three");
    let colors = table
        .iter()
        .flatten()
        .map(|&c| if c == 0 { None } else { Some(c) })
        .collect();
    PartialIncidenceColoring::new(grid, colors, k).expect("fixture colors fit the palette")
}
