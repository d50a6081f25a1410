//! Completing partial incidence colorings within a fixed palette.
//!
//! Every "this partial coloring can be extended" step of the constructive
//! case analysis lands here. The search is a plain exhaustive backtracker:
//! variables are the unassigned incidences in canonical order, values are
//! tried smallest color first, and forward checking prunes the domains of
//! later variables. Because the inputs this crate produces leave each
//! unassigned incidence with at most five forbidden colors out of six, the
//! search trees are tiny; exhaustiveness is what turns the underlying
//! feasibility proofs into checked code.
//!
//! Unassigned incidences split into groups with no adjacency between them
//! ([`chain_decomposition`]); groups are solved independently, which keeps
//! the cost linear in the number of groups and leaves the combined result
//! equal to what a single global search would return.

use thiserror::Error;

use crate::coloring::{
    verify_partial, IncidenceColoring, PartialIncidenceColoring, Verdict,
};
use crate::graph::Incidence;

/// Limits for one completion run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionBudget {
    /// Backtracking node cap; a node is one attempted color assignment.
    pub max_nodes: u64,
    /// Palette `1..=palette_size` available to the completion.
    pub palette_size: u32,
}

impl CompletionBudget {
    /// Default node cap of one million, which the constructive paths never
    /// come close to exhausting.
    pub const DEFAULT_MAX_NODES: u64 = 1_000_000;

    pub fn new(palette_size: u32) -> CompletionBudget {
        CompletionBudget {
            max_nodes: Self::DEFAULT_MAX_NODES,
            palette_size,
        }
    }

    pub fn with_max_nodes(mut self, max_nodes: u64) -> CompletionBudget {
        self.max_nodes = max_nodes;
        self
    }
}

/// Search statistics of a completion run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CompletionStats {
    /// Attempted color assignments across all groups.
    pub nodes_searched: u64,
    /// Number of independent unassigned groups.
    pub groups: usize,
}

/// Result of a completion run on a valid partial coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompletionOutcome {
    /// A total coloring extending the input.
    Complete(IncidenceColoring),
    /// The search space was exhausted: no completion exists within the
    /// palette.
    Infeasible,
    /// The node cap was hit before the search could decide either way.
    BudgetExhausted,
}

/// A completion outcome together with its statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub outcome: CompletionOutcome,
    pub stats: CompletionStats,
}

/// Errors for inputs that never reach the search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    /// The input partial coloring already has a conflict. This is distinct
    /// from [`CompletionOutcome::Infeasible`], which is a statement about
    /// valid inputs.
    #[error("input partial coloring is invalid: {0} conflicts with {1}")]
    InvalidPartial(Incidence, Incidence),
    /// The budget palette cannot even hold the colors already assigned.
    #[error("budget palette {budget} is smaller than assigned color {assigned}")]
    PaletteTooSmall { budget: u32, assigned: u32 },
}

/// Partitions the unassigned incidences into connected groups under
/// incidence adjacency, in canonical order (groups ordered by their first
/// member, members in canonical order).
///
/// No incidence of one group is adjacent to any incidence of another, so
/// the groups can be completed independently.
pub fn chain_decomposition(c: &PartialIncidenceColoring) -> Vec<Vec<Incidence>> {
    let grid = c.grid();
    let unassigned = c.unassigned();
    let mut group_of = vec![usize::MAX; grid.incidence_count()];
    let mut groups: Vec<Vec<Incidence>> = Vec::new();
    for &start in &unassigned {
        if group_of[grid.incidence_index(start)] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        group_of[grid.incidence_index(start)] = id;
        let mut queue = vec![start];
        while let Some(a) = queue.pop() {
            for b in grid.incidence_neighbors(a) {
                let idx = grid.incidence_index(b);
                if !c.is_assigned(b) && group_of[idx] == usize::MAX {
                    group_of[idx] = id;
                    members.push(b);
                    queue.push(b);
                }
            }
        }
        members.sort_unstable_by_key(|i| grid.incidence_index(*i));
        groups.push(members);
    }
    groups
}

/// Extends a valid partial coloring to a total one within the budget
/// palette, or proves that impossible.
///
/// The search is deterministic: variables in canonical incidence order,
/// smallest color first, forward checking, exhaustive up to the node cap.
/// `Infeasible` is therefore a certificate that no completion exists, while
/// `BudgetExhausted` only reports that the cap was hit.
///
/// A coloring with nothing unassigned is returned unchanged (after
/// validation), with zero nodes searched.
pub fn complete(
    c: &PartialIncidenceColoring,
    budget: &CompletionBudget,
) -> Result<Completion, CompletionError> {
    if let Verdict::Invalid { witness: (a, b) } = verify_partial(c) {
        return Err(CompletionError::InvalidPartial(a, b));
    }
    let max_assigned = c.slots().iter().copied().max().unwrap_or(0);
    if max_assigned > budget.palette_size {
        return Err(CompletionError::PaletteTooSmall {
            budget: budget.palette_size,
            assigned: max_assigned,
        });
    }

    let grid = c.grid();
    let k = budget.palette_size;
    let full: u64 = if k >= 64 { !0 } else { (1u64 << k) - 1 };
    let mut slots: Vec<u32> = c.slots().to_vec();
    let mut stats = CompletionStats::default();
    let groups = chain_decomposition(c);
    stats.groups = groups.len();

    for group in &groups {
        // Positions of the group members inside `slots`, their initial
        // domains (palette minus colors of assigned neighbours), and the
        // adjacency among group members.
        let vars: Vec<usize> = group.iter().map(|&i| grid.incidence_index(i)).collect();
        let position_of = |idx: usize| vars.binary_search(&idx).ok();
        let mut domains: Vec<u64> = Vec::with_capacity(vars.len());
        let mut neighbors_in_group: Vec<Vec<usize>> = Vec::with_capacity(vars.len());
        for &inc in group {
            let mut dom = full;
            let mut local = Vec::new();
            for b in grid.incidence_neighbors(inc) {
                let bidx = grid.incidence_index(b);
                match slots[bidx] {
                    0 => {
                        if let Some(p) = position_of(bidx) {
                            local.push(p);
                        }
                    }
                    color => dom &= !(1u64 << (color - 1)),
                }
            }
            domains.push(dom);
            neighbors_in_group.push(local);
        }

        match solve_group(&domains, &neighbors_in_group, budget.max_nodes, &mut stats.nodes_searched) {
            GroupResult::Solved(colors) => {
                for (p, &idx) in vars.iter().enumerate() {
                    slots[idx] = colors[p];
                }
            }
            GroupResult::Infeasible => {
                return Ok(Completion {
                    outcome: CompletionOutcome::Infeasible,
                    stats,
                });
            }
            GroupResult::OutOfBudget => {
                return Ok(Completion {
                    outcome: CompletionOutcome::BudgetExhausted,
                    stats,
                });
            }
        }
    }

    let coloring = IncidenceColoring::new(grid, slots, k)
        .expect("search assigns every slot a color within the palette");
    debug_assert!(
        crate::coloring::verify_incidence_coloring(&coloring).is_valid(),
        "forward checking must not let a conflict through"
    );
    Ok(Completion {
        outcome: CompletionOutcome::Complete(coloring),
        stats,
    })
}

enum GroupResult {
    Solved(Vec<u32>),
    Infeasible,
    OutOfBudget,
}

/// Exhaustive depth-first search over one group with forward checking.
/// Variables are taken in the given (canonical) order; colors ascend.
fn solve_group(
    initial_domains: &[u64],
    neighbors: &[Vec<usize>],
    max_nodes: u64,
    nodes: &mut u64,
) -> GroupResult {
    let count = initial_domains.len();
    let mut colors = vec![0u32; count];
    let mut domains = initial_domains.to_vec();
    // Per-depth log of (variable, previous domain) for undoing propagation.
    let mut trail: Vec<Vec<(usize, u64)>> = vec![Vec::new(); count];
    let mut tried: Vec<u64> = vec![0; count];
    let mut depth = 0usize;

    loop {
        if depth == count {
            return GroupResult::Solved(colors);
        }
        let candidates = domains[depth] & !tried[depth];
        if candidates == 0 {
            // Backtrack: undo this depth's bookkeeping and retry above.
            tried[depth] = 0;
            if depth == 0 {
                return GroupResult::Infeasible;
            }
            depth -= 1;
            for (var, dom) in trail[depth].drain(..) {
                domains[var] = dom;
            }
            continue;
        }
        let bit = candidates.trailing_zeros() as u64;
        tried[depth] |= 1u64 << bit;
        if *nodes >= max_nodes {
            return GroupResult::OutOfBudget;
        }
        *nodes += 1;
        colors[depth] = bit as u32 + 1;
        // Forward-check later variables in the group.
        let mask = !(1u64 << bit);
        let mut ok = true;
        for &p in &neighbors[depth] {
            if p > depth {
                let before = domains[p];
                let after = before & mask;
                if after != before {
                    trail[depth].push((p, before));
                    domains[p] = after;
                    if after == 0 {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if ok {
            depth += 1;
        } else {
            for (var, dom) in trail[depth].drain(..) {
                domains[var] = dom;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_pattern, CatalogEntry, PatternName};
    use crate::coloring::verify_incidence_coloring;
    use crate::graph::TorusGrid;
    use crate::pattern::induce_partial;

    #[test]
    fn total_input_is_returned_unchanged() {
        let CatalogEntry::Plain(i) = catalog_pattern(PatternName::I) else {
            panic!("I is a plain pattern")
        };
        let total = crate::pattern::induce_incidence_coloring(&i).unwrap();
        let completion = complete(&total.as_partial(), &CompletionBudget::new(6)).unwrap();
        assert_eq!(completion.stats.nodes_searched, 0);
        assert_eq!(completion.stats.groups, 0);
        match completion.outcome {
            CompletionOutcome::Complete(c) => assert_eq!(c, total),
            other => panic!("expected completion, got {other:?}"),
        }
    }

    #[test]
    fn invalid_input_is_an_error_not_infeasible() {
        let grid = TorusGrid::new(3, 3).unwrap();
        let mut p = crate::coloring::PartialIncidenceColoring::empty(grid, 6);
        let a = grid.incidence_at(0);
        let b = grid.incidence_at(1);
        p.set(a, Some(1)).unwrap();
        p.set(b, Some(1)).unwrap();
        assert_eq!(
            complete(&p, &CompletionBudget::new(6)),
            Err(CompletionError::InvalidPartial(a, b))
        );
    }

    #[test]
    fn palette_must_cover_assigned_colors() {
        let grid = TorusGrid::new(3, 3).unwrap();
        let mut p = crate::coloring::PartialIncidenceColoring::empty(grid, 6);
        p.set(grid.incidence_at(0), Some(6)).unwrap();
        assert_eq!(
            complete(&p, &CompletionBudget::new(5)),
            Err(CompletionError::PaletteTooSmall {
                budget: 5,
                assigned: 6
            })
        );
    }

    #[test]
    fn empty_t33_with_five_colors_is_infeasible() {
        // The incidence chromatic number of the 3x3 torus is 6, so an
        // exhaustive completion of the empty coloring with k=5 must fail.
        let grid = TorusGrid::new(3, 3).unwrap();
        let p = crate::coloring::PartialIncidenceColoring::empty(grid, 5);
        let completion = complete(&p, &CompletionBudget::new(5)).unwrap();
        assert_eq!(completion.outcome, CompletionOutcome::Infeasible);
    }

    #[test]
    fn empty_t33_with_six_colors_completes() {
        let grid = TorusGrid::new(3, 3).unwrap();
        let p = crate::coloring::PartialIncidenceColoring::empty(grid, 6);
        let completion = complete(&p, &CompletionBudget::new(6)).unwrap();
        match completion.outcome {
            CompletionOutcome::Complete(c) => {
                assert!(verify_incidence_coloring(&c).is_valid());
                assert_eq!(c.palette_size(), 6);
            }
            other => panic!("expected completion, got {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_reported_distinctly() {
        let grid = TorusGrid::new(3, 3).unwrap();
        let p = crate::coloring::PartialIncidenceColoring::empty(grid, 5);
        let completion = complete(&p, &CompletionBudget::new(5).with_max_nodes(10)).unwrap();
        assert_eq!(completion.outcome, CompletionOutcome::BudgetExhausted);
        assert_eq!(completion.stats.nodes_searched, 10);
    }

    #[test]
    fn quasi_pattern_partials_complete_and_agree_with_input() {
        for name in [PatternName::F, PatternName::G, PatternName::H, PatternName::J] {
            let CatalogEntry::Quasi(qp) = catalog_pattern(name) else {
                panic!("{name:?} should be a quasi-pattern");
            };
            let partial = induce_partial(&qp);
            let completion = complete(&partial, &CompletionBudget::new(6)).unwrap();
            let CompletionOutcome::Complete(c) = completion.outcome else {
                panic!("{name:?} partial should complete");
            };
            assert!(verify_incidence_coloring(&c).is_valid(), "{name:?}");
            for inc in qp.grid().incidences() {
                if let Some(color) = partial.color(inc) {
                    assert_eq!(c.color(inc), color, "{name:?} at {inc}");
                }
            }
        }
    }

    #[test]
    fn completion_is_deterministic() {
        let CatalogEntry::Quasi(qp) = catalog_pattern(PatternName::G) else {
            panic!("G is a quasi-pattern")
        };
        let partial = induce_partial(&qp);
        let a = complete(&partial, &CompletionBudget::new(6)).unwrap();
        let b = complete(&partial, &CompletionBudget::new(6)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn groups_are_pairwise_nonadjacent() {
        let CatalogEntry::Quasi(qp) = catalog_pattern(PatternName::J) else {
            panic!("J is a quasi-pattern")
        };
        let partial = induce_partial(&qp);
        let grid = partial.grid();
        let groups = chain_decomposition(&partial);
        let total: usize = groups.iter().map(Vec::len).sum();
        assert_eq!(total, partial.unassigned().len());
        for (gi, g) in groups.iter().enumerate() {
            for (hi, h) in groups.iter().enumerate() {
                if gi == hi {
                    continue;
                }
                for &a in g {
                    for &b in h {
                        assert!(
                            !grid.incidences_adjacent(a, b),
                            "groups {gi} and {hi} touch at {a} / {b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn chain_decomposition_of_total_coloring_is_empty() {
        let CatalogEntry::Plain(i) = catalog_pattern(PatternName::I) else {
            panic!("I is a plain pattern")
        };
        let total = crate::pattern::induce_incidence_coloring(&i).unwrap();
        assert!(chain_decomposition(&total.as_partial()).is_empty());
    }
}
