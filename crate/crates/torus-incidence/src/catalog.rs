//! The built-in pattern catalog.
//!
//! These small matrices are the raw material of every 6-coloring
//! construction in this crate. Plain patterns are proper on their torus
//! square as-is (or exist only to be glued, like the single-column `B`);
//! quasi-patterns carry the deleted-edge set that makes their matrix proper
//! on the square of the reduced torus.
//!
//! The catalog is frozen: tests compare these matrices entry-for-entry
//! against independent copies, and several of them double as bases for the
//! constructive case analysis (`C` and `E` for odd column counts divisible
//! by 3, `F`/`G`/`H` for row counts divisible by 4, `I` for the general
//! five-row family, `J` for the 7x7 special case).

use std::collections::BTreeSet;

use crate::graph::{Direction, Edge, TorusGrid};
use crate::pattern::{glue, repeat, vertical_ring, Pattern, QuasiPattern};

/// Names of the built-in patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternName {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    IPrime,
    J,
}

impl PatternName {
    pub const ALL: [PatternName; 11] = [
        PatternName::A,
        PatternName::B,
        PatternName::C,
        PatternName::D,
        PatternName::E,
        PatternName::F,
        PatternName::G,
        PatternName::H,
        PatternName::I,
        PatternName::IPrime,
        PatternName::J,
    ];
}

/// A catalog entry: either a plain pattern or a quasi-pattern with its
/// deleted edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogEntry {
    Plain(Pattern),
    Quasi(QuasiPattern),
}

impl CatalogEntry {
    /// The underlying matrix, whichever variant this is.
    pub fn matrix(&self) -> &Pattern {
        match self {
            CatalogEntry::Plain(p) => p,
            CatalogEntry::Quasi(qp) => qp.base(),
        }
    }
}

fn pattern(rows: &[&[u32]]) -> Pattern {
    Pattern::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
        .expect("catalog matrices are rectangular with positive entries")
}

/// Vertical rings between the duplicated-row pairs `(0,1)` and `(2,3)` of a
/// four-row matrix.
fn duplicated_row_rings(cols: usize) -> BTreeSet<Edge> {
    let grid = TorusGrid::new(4, cols).expect("catalog quasi-patterns have cols >= 3");
    [0, 2]
        .into_iter()
        .flat_map(|top| vertical_ring(grid, top))
        .collect()
}

/// Returns the named catalog entry.
///
/// `A` through `E`, `I` and `I'` are plain patterns; `F`, `G`, `H` and `J`
/// are quasi-patterns whose deleted edges separate their duplicated rows
/// (plus, for `J`, one extra ring that keeps the two identical row groups
/// at distance two from wrapping into each other).
pub fn catalog_pattern(name: PatternName) -> CatalogEntry {
    match name {
        PatternName::A => CatalogEntry::Plain(pattern(&[
            &[1, 2, 3, 4],
            &[3, 4, 5, 6],
            &[5, 6, 7, 8],
            &[7, 8, 1, 2],
        ])),
        PatternName::B => CatalogEntry::Plain(pattern(&[&[3], &[1], &[2]])),
        PatternName::C => CatalogEntry::Plain(pattern(&[
            &[1, 4, 2, 5],
            &[2, 5, 3, 6],
            &[3, 6, 1, 4],
        ])),
        PatternName::D => CatalogEntry::Plain(pattern(&[
            &[1, 4, 3, 6],
            &[2, 5, 1, 4],
            &[3, 6, 2, 5],
        ])),
        PatternName::E => CatalogEntry::Plain(pattern(&[&[2, 5], &[3, 6], &[1, 4]])),
        PatternName::F => {
            let f = pattern(&[&[1, 2, 4], &[1, 2, 4], &[3, 5, 6], &[3, 5, 6]]);
            CatalogEntry::Quasi(
                QuasiPattern::new(f, duplicated_row_rings(3))
                    .expect("F is proper once its duplicated-row rings are deleted"),
            )
        }
        PatternName::G => {
            let g = pattern(&[
                &[1, 2, 3, 4],
                &[1, 2, 3, 4],
                &[3, 4, 5, 6],
                &[3, 4, 5, 6],
            ]);
            CatalogEntry::Quasi(
                QuasiPattern::new(g, duplicated_row_rings(4))
                    .expect("G is proper once its duplicated-row rings are deleted"),
            )
        }
        PatternName::H => {
            let f = catalog_pattern(PatternName::F);
            let g = catalog_pattern(PatternName::G);
            let h = glue(
                &repeat(f.matrix(), 2).expect("repeat by 2"),
                &repeat(g.matrix(), 2).expect("repeat by 2"),
            )
            .expect("F and G both have 4 rows");
            CatalogEntry::Quasi(
                QuasiPattern::new(h, duplicated_row_rings(14))
                    .expect("H is proper once its duplicated-row rings are deleted"),
            )
        }
        PatternName::I => CatalogEntry::Plain(pattern(&[
            &[6, 1, 2, 3, 4, 5],
            &[3, 4, 5, 6, 1, 2],
            &[5, 6, 1, 2, 3, 4],
            &[2, 3, 4, 5, 6, 1],
            &[4, 5, 6, 1, 2, 3],
        ])),
        PatternName::IPrime => CatalogEntry::Plain(pattern(&[
            &[6, 1, 2, 3, 4, 5],
            &[6, 1, 2, 3, 4, 5],
            &[6, 1, 2, 3, 4, 5],
            &[3, 4, 5, 6, 1, 2],
            &[5, 6, 1, 2, 3, 4],
            &[2, 3, 4, 5, 6, 1],
            &[4, 5, 6, 1, 2, 3],
        ])),
        PatternName::J => {
            let a = [3u32, 5, 6, 3, 4, 5, 6];
            let b = [1u32, 2, 4, 1, 2, 3, 4];
            let j = pattern(&[&a, &b, &b, &a, &a, &b, &b]);
            let grid = TorusGrid::new(7, 7).expect("7x7");
            // Rings 1, 3 and 5 separate the identical adjacent rows. The
            // ring above row 0 and the horizontal edges inside row 0 must
            // also go: keeping them would pin both full row words around
            // each row-0 vertex and leave its north incidence with every
            // color forbidden.
            let mut deleted: BTreeSet<Edge> = [0, 1, 3, 5]
                .into_iter()
                .flat_map(|top| vertical_ring(grid, top))
                .collect();
            for col in 0..7 {
                deleted.insert(grid.edge(grid.vertex(0, col), Direction::East));
            }
            CatalogEntry::Quasi(
                QuasiPattern::new(j, deleted)
                    .expect("J is proper once the rings separating identical rows are deleted"),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::induce_incidence_coloring;

    #[test]
    fn every_entry_constructs() {
        for name in PatternName::ALL {
            let entry = catalog_pattern(name);
            assert!(entry.matrix().max_color() >= 1, "{name:?}");
        }
    }

    #[test]
    fn shapes_and_palettes() {
        let expect: [(PatternName, usize, usize, u32); 11] = [
            (PatternName::A, 4, 4, 8),
            (PatternName::B, 3, 1, 3),
            (PatternName::C, 3, 4, 6),
            (PatternName::D, 3, 4, 6),
            (PatternName::E, 3, 2, 6),
            (PatternName::F, 4, 3, 6),
            (PatternName::G, 4, 4, 6),
            (PatternName::H, 4, 14, 6),
            (PatternName::I, 5, 6, 6),
            (PatternName::IPrime, 7, 6, 6),
            (PatternName::J, 7, 7, 6),
        ];
        for (name, rows, cols, max) in expect {
            let m = catalog_pattern(name).matrix().clone();
            assert_eq!((m.rows(), m.cols(), m.max_color()), (rows, cols, max), "{name:?}");
        }
    }

    #[test]
    fn h_is_two_f_then_two_g() {
        let h = catalog_pattern(PatternName::H);
        let f = catalog_pattern(PatternName::F);
        let g = catalog_pattern(PatternName::G);
        let built = glue(
            &repeat(f.matrix(), 2).unwrap(),
            &repeat(g.matrix(), 2).unwrap(),
        )
        .unwrap();
        assert_eq!(h.matrix(), &built);
    }

    #[test]
    fn i_prime_triples_the_first_row_of_i() {
        let i = catalog_pattern(PatternName::I);
        let ip = catalog_pattern(PatternName::IPrime);
        let qp = crate::pattern::repeat_rows(i.matrix(), &BTreeSet::from([0])).unwrap();
        assert_eq!(qp.base(), ip.matrix());
    }

    #[test]
    fn plain_patterns_a_and_i_are_proper_on_their_squares() {
        for name in [PatternName::A, PatternName::I] {
            let p = catalog_pattern(name).matrix().clone();
            assert!(p.is_proper_on_square().unwrap(), "{name:?}");
            assert!(
                crate::coloring::verify_incidence_coloring(
                    &induce_incidence_coloring(&p).unwrap()
                )
                .is_valid(),
                "{name:?}"
            );
        }
    }

    #[test]
    fn quasi_deleted_edge_counts() {
        for (name, expected) in [
            (PatternName::F, 2 * 3),
            (PatternName::G, 2 * 4),
            (PatternName::H, 2 * 14),
            (PatternName::J, 5 * 7),
        ] {
            let CatalogEntry::Quasi(qp) = catalog_pattern(name) else {
                panic!("{name:?} should be a quasi-pattern");
            };
            assert_eq!(qp.deleted_edges().len(), expected, "{name:?}");
        }
    }
}
