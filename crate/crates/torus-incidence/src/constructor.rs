//! Constructive incidence colorings of toroidal grids.
//!
//! [`construct`] produces, for every torus with both dimensions at least
//! three, a valid incidence coloring that uses five colors when both
//! dimensions are divisible by five and six colors otherwise; both palette
//! sizes are optimal (see the exact module for the matching lower bounds).
//!
//! Dispatch is a case analysis on divisibility. Row counts divisible by
//! three or four reduce to hand-built column patterns that are replicated
//! vertically; the 4x5 and 7x7 tori have dedicated constructions; every
//! remaining torus is covered by stacking five-row base patterns and
//! tripling up to four rows. Branches that start from a quasi-pattern
//! finish with an exhaustive completion search, and every branch verifies
//! its output before returning it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::catalog::{catalog_pattern, CatalogEntry, PatternName};
use crate::coloring::{
    verify_incidence_coloring, verify_partial, IncidenceColoring, PartialIncidenceColoring,
};
use crate::completion::{
    complete, CompletionBudget, CompletionError, CompletionOutcome, CompletionStats,
};
use crate::graph::{Direction, Edge, GraphError, TorusGrid};
use crate::pattern::{
    glue, horizontal_ring, induce_incidence_coloring, induce_partial, repeat, repeat_rows, tile,
    vertical_ring, Pattern, PatternError, QuasiPattern,
};

// =============================================================================
// Options, errors, traces
// =============================================================================

/// Tuning knobs for the constructors. The defaults disable the disk cache
/// and use the standard completion node cap.
#[derive(Debug, Clone, Default)]
pub struct ConstructOptions {
    /// Directory for caching base patterns found by exhaustive search;
    /// `None` disables the disk cache. An in-process memo is always active.
    pub cache_dir: Option<PathBuf>,
    /// Node cap for completion searches; `None` uses
    /// [`CompletionBudget::DEFAULT_MAX_NODES`].
    pub max_completion_nodes: Option<u64>,
}

/// Errors of the constructors.
#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("toroidal grids require both dimensions at least 3, got {m}x{n}")]
    TooSmall { m: usize, n: usize },
    #[error("block count must be at least 1")]
    ZeroBlocks,
    #[error("five-color construction requires both dimensions divisible by 5, got {m}x{n}")]
    NotDivisibleByFive { m: usize, n: usize },
    #[error("the 4x5 torus has a dedicated construction; use the special case")]
    FourByFive,
    #[error(
        "row-tripling construction requires m, n >= 5 with m not 6 or 8 and n != 7, got {m}x{n}"
    )]
    GeneralPrecondition { m: usize, n: usize },
    #[error("no six-color base pattern on 5x{n} exists: column search exhausted")]
    BaseSearchFailed { n: usize },
    #[error("no completion found for the {rows}x{cols} partial coloring: {reason}")]
    CompletionFailed {
        rows: usize,
        cols: usize,
        reason: &'static str,
    },
    #[error("constructed coloring failed verification (internal error)")]
    VerificationFailed,
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How the five-row base pattern of the general case was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseSource {
    /// Columns divisible by five: the diagonal shift formula.
    FiveShift,
    /// Columns divisible by six: horizontal replication of the 5x6 pattern.
    SixShift,
    /// Concatenation of pre-verified five- and six-column blocks.
    BlockWord,
    /// Exhaustive column-by-column search.
    Search,
}

impl fmt::Display for BaseSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseSource::FiveShift => "five-shift",
            BaseSource::SixShift => "six-shift",
            BaseSource::BlockWord => "block-word",
            BaseSource::Search => "search",
        })
    }
}

/// Which branch of the case analysis produced a coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    /// Both dimensions divisible by five: shift pattern, five colors.
    FiveColor,
    /// Rows divisible by three, exactly three columns: per-axis formula.
    Div3AxisSplit,
    /// Rows divisible by three, even column count: alternating columns.
    Div3EvenColumns,
    /// Rows divisible by three, columns congruent 1 mod 4.
    Div3OddColumns1Mod4,
    /// Rows divisible by three, columns congruent 3 mod 4.
    Div3OddColumns3Mod4,
    /// Rows divisible by four, three columns.
    Div4ThreeColumns,
    /// Rows divisible by four, four columns.
    Div4FourColumns,
    /// Rows divisible by four (at least eight), five columns: replicated
    /// 4x5 special case.
    Div4FiveColumns,
    /// Rows divisible by four, at least six columns: glued three- and
    /// four-column blocks.
    Div4Blocks,
    /// The 4x5 torus.
    SpecialT45,
    /// The 7x7 torus.
    SpecialT77,
    /// Stack of five-row bases with `tripled` rows tripled.
    GeneralRows { tripled: usize, source: BaseSource },
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::FiveColor => f.write_str("five-color"),
            CaseLabel::Div3AxisSplit => f.write_str("div3/three-columns"),
            CaseLabel::Div3EvenColumns => f.write_str("div3/even-columns"),
            CaseLabel::Div3OddColumns1Mod4 => f.write_str("div3/columns-1-mod-4"),
            CaseLabel::Div3OddColumns3Mod4 => f.write_str("div3/columns-3-mod-4"),
            CaseLabel::Div4ThreeColumns => f.write_str("div4/three-columns"),
            CaseLabel::Div4FourColumns => f.write_str("div4/four-columns"),
            CaseLabel::Div4FiveColumns => f.write_str("div4/five-columns"),
            CaseLabel::Div4Blocks => f.write_str("div4/block-sum"),
            CaseLabel::SpecialT45 => f.write_str("special/4x5"),
            CaseLabel::SpecialT77 => f.write_str("special/7x7"),
            CaseLabel::GeneralRows { tripled, source } => {
                write!(f, "general/triple-{tripled}/{source}")
            }
        }
    }
}

/// The pattern a construction started from.
///
/// For the 4x5 special case the base lives on the 5x4 torus: the
/// construction completes there and transposes afterwards.
#[derive(Debug, Clone)]
pub enum TraceBase {
    Plain(Pattern),
    Quasi(QuasiPattern),
}

/// What a constructor did, in enough detail to replay it.
#[derive(Debug, Clone)]
pub struct ConstructionTrace {
    /// The branch taken.
    pub case: CaseLabel,
    /// Whether the dispatcher built the transposed torus and flipped the
    /// result at the end.
    pub transposed: bool,
    /// Pattern or quasi-pattern the branch started from, when any.
    pub base: Option<TraceBase>,
    /// Coloring-level replication `(vertical, horizontal)` applied to the
    /// base coloring.
    pub tiling: (usize, usize),
    /// Statistics of the completion search, when one ran.
    pub completion: Option<CompletionStats>,
    /// True when extending the induced partial coloring was proved
    /// infeasible and the branch instead re-opened the conflicting
    /// incidences of the fully induced coloring.
    pub repaired: bool,
}

impl ConstructionTrace {
    fn new(case: CaseLabel) -> ConstructionTrace {
        ConstructionTrace {
            case,
            transposed: false,
            base: None,
            tiling: (1, 1),
            completion: None,
            repaired: false,
        }
    }

    /// One-line human-readable form.
    pub fn summary(&self) -> String {
        let mut s = format!("case={}", self.case);
        if self.transposed {
            s.push_str(" transposed");
        }
        if self.tiling != (1, 1) {
            s.push_str(&format!(" tiling={}x{}", self.tiling.0, self.tiling.1));
        }
        if let Some(stats) = self.completion {
            s.push_str(&format!(
                " completion-nodes={} groups={}",
                stats.nodes_searched, stats.groups
            ));
        }
        if self.repaired {
            s.push_str(" repaired");
        }
        s
    }
}

// =============================================================================
// Shared helpers
// =============================================================================

/// The coloring of the transposed torus: incidence `((i, j), d)` of
/// `T(n, m)` takes the color of `((j, i), d')`, where `d'` swaps the axis
/// roles (north/west and south/east). Transposition is a graph isomorphism,
/// so validity is preserved.
pub fn transpose(c: &IncidenceColoring) -> IncidenceColoring {
    let g = c.grid();
    let t = TorusGrid::new(g.n(), g.m()).expect("transposed dimensions stay valid");
    let out = IncidenceColoring::from_fn(t, c.palette_size(), |inc| {
        let d = match inc.direction {
            Direction::North => Direction::West,
            Direction::West => Direction::North,
            Direction::South => Direction::East,
            Direction::East => Direction::South,
        };
        c.color(g.incidence(g.vertex(inc.vertex.col, inc.vertex.row), d))
    })
    .expect("colors come from a coloring with the same palette");
    debug_assert!(verify_incidence_coloring(&out).is_valid());
    out
}

/// The diagonal shift pattern on `T(m, n)` for dimensions divisible by
/// five: entry `(i, j)` is `((i + 2j) mod 5) + 1`.
///
/// Two vertices within distance two differ by an offset `(di, dj)` with
/// `|di| + |dj| <= 2`, and `di + 2 dj` is never divisible by five for such
/// offsets, so the pattern is proper on the torus square and induces a
/// valid five-color incidence coloring.
pub fn five_color_pattern(m: usize, n: usize) -> Result<Pattern, ConstructError> {
    if m < 3 || n < 3 {
        return Err(ConstructError::TooSmall { m, n });
    }
    if m % 5 != 0 || n % 5 != 0 {
        return Err(ConstructError::NotDivisibleByFive { m, n });
    }
    Ok(Pattern::from_fn(m, n, |i, j| ((i + 2 * j) % 5 + 1) as u32)
        .expect("entries are positive"))
}

fn budget(opts: &ConstructOptions, palette: u32) -> CompletionBudget {
    CompletionBudget::new(palette)
        .with_max_nodes(opts.max_completion_nodes.unwrap_or(CompletionBudget::DEFAULT_MAX_NODES))
}

/// Colors the torus of a quasi-pattern: extend the induced partial coloring
/// by exhaustive search; if extension is proved infeasible, fall back to
/// re-opening every conflicting incidence of the fully induced coloring and
/// completing that instead.
///
/// Returns the coloring, the accumulated completion statistics, and whether
/// the fallback ran.
pub fn color_quasi_pattern(
    qp: &QuasiPattern,
    budget: &CompletionBudget,
) -> Result<(IncidenceColoring, CompletionStats, bool), ConstructError> {
    let grid = qp.grid();
    let fail = |reason| ConstructError::CompletionFailed {
        rows: grid.m(),
        cols: grid.n(),
        reason,
    };
    let first = complete(&induce_partial(qp), budget)?;
    match first.outcome {
        CompletionOutcome::Complete(c) => Ok((c, first.stats, false)),
        CompletionOutcome::BudgetExhausted => Err(fail("node budget exhausted")),
        CompletionOutcome::Infeasible => {
            let reopened = reopen_conflicts(qp.base())?;
            let second = complete(&reopened, budget)?;
            let stats = CompletionStats {
                nodes_searched: first.stats.nodes_searched + second.stats.nodes_searched,
                groups: second.stats.groups,
            };
            match second.outcome {
                CompletionOutcome::Complete(c) => Ok((c, stats, true)),
                CompletionOutcome::Infeasible => {
                    Err(fail("proved infeasible even after re-opening conflicts"))
                }
                CompletionOutcome::BudgetExhausted => Err(fail("node budget exhausted")),
            }
        }
    }
}

/// The fully induced coloring of `base` with every incidence that takes
/// part in any conflict unassigned. Removing all participants of all
/// conflicting pairs leaves a valid partial coloring by definition.
fn reopen_conflicts(base: &Pattern) -> Result<PartialIncidenceColoring, ConstructError> {
    let total = induce_incidence_coloring(base)?;
    let grid = total.grid();
    let mut open = vec![false; grid.incidence_count()];
    for a in grid.incidences() {
        for b in grid.incidence_neighbors(a) {
            if grid.incidence_index(b) > grid.incidence_index(a) && total.color(a) == total.color(b)
            {
                open[grid.incidence_index(a)] = true;
                open[grid.incidence_index(b)] = true;
            }
        }
    }
    let mut out = total.as_partial();
    for (i, flag) in open.iter().enumerate() {
        if *flag {
            out.set(grid.incidence_at(i), None)
                .expect("clearing a slot cannot fail");
        }
    }
    debug_assert!(verify_partial(&out).is_valid());
    Ok(out)
}

fn finish(
    c: IncidenceColoring,
    trace: ConstructionTrace,
) -> Result<(IncidenceColoring, ConstructionTrace), ConstructError> {
    if !verify_incidence_coloring(&c).is_valid() {
        return Err(ConstructError::VerificationFailed);
    }
    Ok((c, trace))
}

fn transposed(
    result: (IncidenceColoring, ConstructionTrace),
) -> Result<(IncidenceColoring, ConstructionTrace), ConstructError> {
    let (c, mut trace) = result;
    trace.transposed = true;
    finish(transpose(&c), trace)
}

// =============================================================================
// Rows divisible by three
// =============================================================================

/// Direct coloring of `T(m, 3)` for `m` divisible by three: an incidence
/// pointing at vertex `(i, j)` takes color `j + 1` when horizontal and
/// `(i mod 3) + 4` when vertical.
///
/// Horizontal and vertical incidences use disjoint color ranges, and two
/// same-axis adjacent incidences always point at vertices whose relevant
/// coordinate differs by one or two, which both dimensions reduce cleanly
/// mod three.
fn axis_split_coloring(m: usize) -> IncidenceColoring {
    let grid = TorusGrid::new(m, 3).expect("caller guarantees m >= 3");
    IncidenceColoring::from_fn(grid, 6, |inc| {
        let target = grid.neighbor(inc.vertex, inc.direction);
        match inc.direction {
            Direction::East | Direction::West => (target.col % 3) as u32 + 1,
            Direction::North | Direction::South => (target.row % 3) as u32 + 4,
        }
    })
    .expect("colors stay within 1..=6")
}

/// Three-row pattern for an even number of columns, at least four: even
/// columns cycle through 1..3, odd columns through 4..6. Column `2s` has
/// entry `((i + a_s) mod 3) + 1` and column `2s + 1` has
/// `((i + a_s) mod 3) + 4`, where the shift word alternates 0, 1 and ends
/// in 2 when the number of column pairs is odd.
///
/// Same-parity columns use disjoint color ranges from opposite-parity
/// ones, each column is a permutation of its range, and columns two apart
/// meet only row-on-row, where cyclically consecutive shifts always
/// differ. That covers every distance-two constraint, so the pattern is
/// proper on the square of `T(3, n)`.
fn alternating_columns_pattern(n: usize) -> Pattern {
    debug_assert!(n >= 4 && n % 2 == 0);
    let pairs = n / 2;
    let shift = |s: usize| -> usize {
        if pairs % 2 == 1 && s == pairs - 1 {
            2
        } else {
            s % 2
        }
    };
    Pattern::from_fn(3, n, |i, j| {
        let base = ((i + shift(j / 2)) % 3) as u32;
        if j % 2 == 0 {
            base + 1
        } else {
            base + 4
        }
    })
    .expect("entries are positive")
}

/// Quasi-pattern for three rows and an odd column count of at least five:
/// one spacer column, then period-four strips (columns congruent 1 mod 4)
/// or period-four strips and a final two-column strip (columns congruent
/// 3 mod 4), with the edge ring between the first two columns deleted.
fn odd_columns_quasi(n: usize) -> Result<(QuasiPattern, CaseLabel), ConstructError> {
    debug_assert!(n >= 5 && n % 2 == 1);
    let spacer = catalog_pattern(PatternName::B).matrix().clone();
    let (strip, case) = if n % 4 == 1 {
        let strip = repeat(catalog_pattern(PatternName::C).matrix(), (n - 1) / 4)?;
        (strip, CaseLabel::Div3OddColumns1Mod4)
    } else {
        let fours = repeat(catalog_pattern(PatternName::D).matrix(), (n - 3) / 4)?;
        let strip = glue(&fours, catalog_pattern(PatternName::E).matrix())?;
        (strip, CaseLabel::Div3OddColumns3Mod4)
    };
    let base = glue(&spacer, &strip)?;
    let grid = TorusGrid::new(3, n)?;
    let deleted: BTreeSet<Edge> = horizontal_ring(grid, 0).into_iter().collect();
    Ok((QuasiPattern::new(base, deleted)?, case))
}

/// Valid six-color incidence coloring of `T(3k, n)`.
pub fn construct_div3(
    k: usize,
    n: usize,
    opts: &ConstructOptions,
) -> Result<(IncidenceColoring, ConstructionTrace), ConstructError> {
    if k == 0 {
        return Err(ConstructError::ZeroBlocks);
    }
    if n < 3 {
        return Err(ConstructError::TooSmall { m: 3 * k, n });
    }
    if n == 3 {
        let trace = ConstructionTrace::new(CaseLabel::Div3AxisSplit);
        return finish(axis_split_coloring(3 * k), trace);
    }
    if n % 2 == 0 {
        let base = alternating_columns_pattern(n);
        let mut c = induce_incidence_coloring(&base)?;
        if k > 1 {
            c = tile(&c, k, 1)?;
        }
        let mut trace = ConstructionTrace::new(CaseLabel::Div3EvenColumns);
        trace.base = Some(TraceBase::Plain(base));
        trace.tiling = (k, 1);
        return finish(c, trace);
    }
    let (qp, case) = odd_columns_quasi(n)?;
    let (mut c, stats, repaired) = color_quasi_pattern(&qp, &budget(opts, 6))?;
    if k > 1 {
        c = tile(&c, k, 1)?;
    }
    let mut trace = ConstructionTrace::new(case);
    trace.base = Some(TraceBase::Quasi(qp));
    trace.tiling = (k, 1);
    trace.completion = Some(stats);
    trace.repaired = repaired;
    finish(c, trace)
}

// =============================================================================
// Rows divisible by four
// =============================================================================

/// Splits `n >= 6` as `3p + 4q` with `q` as large as possible.
fn split_into_blocks(n: usize) -> (usize, usize) {
    for q in (0..=n / 4).rev() {
        if (n - 4 * q) % 3 == 0 {
            return ((n - 4 * q) / 3, q);
        }
    }
    unreachable!("every n >= 6 is a sum of threes and fours")
}

/// Valid six-color incidence coloring of `T(4k, n)`.
///
/// The input `(k, n) = (1, 5)` is rejected: the 4x5 torus does not fit the
/// column-block scheme and is built by [`construct_special`] instead.
pub fn construct_div4(
    k: usize,
    n: usize,
    opts: &ConstructOptions,
) -> Result<(IncidenceColoring, ConstructionTrace), ConstructError> {
    if k == 0 {
        return Err(ConstructError::ZeroBlocks);
    }
    if n < 3 {
        return Err(ConstructError::TooSmall { m: 4 * k, n });
    }
    let (qp, case) = match n {
        3 => {
            let CatalogEntry::Quasi(qp) = catalog_pattern(PatternName::F) else {
                unreachable!("F is a quasi-pattern")
            };
            (qp, CaseLabel::Div4ThreeColumns)
        }
        4 => {
            let CatalogEntry::Quasi(qp) = catalog_pattern(PatternName::G) else {
                unreachable!("G is a quasi-pattern")
            };
            (qp, CaseLabel::Div4FourColumns)
        }
        5 => {
            if k == 1 {
                return Err(ConstructError::FourByFive);
            }
            let (c45, mut trace) = construct_special(SpecialTorus::T45, opts)?;
            let c = tile(&c45, k, 1)?;
            trace.case = CaseLabel::Div4FiveColumns;
            trace.tiling = (k, 1);
            return finish(c, trace);
        }
        _ => {
            let (p, q) = split_into_blocks(n);
            let f = catalog_pattern(PatternName::F);
            let g = catalog_pattern(PatternName::G);
            let base = match (p, q) {
                (0, q) => repeat(g.matrix(), q)?,
                (p, 0) => repeat(f.matrix(), p)?,
                (p, q) => glue(&repeat(f.matrix(), p)?, &repeat(g.matrix(), q)?)?,
            };
            let grid = TorusGrid::new(4, n)?;
            let deleted: BTreeSet<Edge> = vertical_ring(grid, 0)
                .into_iter()
                .chain(vertical_ring(grid, 2))
                .collect();
            (QuasiPattern::new(base, deleted)?, CaseLabel::Div4Blocks)
        }
    };
    let (mut c, stats, repaired) = color_quasi_pattern(&qp, &budget(opts, 6))?;
    if k > 1 {
        c = tile(&c, k, 1)?;
    }
    let mut trace = ConstructionTrace::new(case);
    trace.base = Some(TraceBase::Quasi(qp));
    trace.tiling = (k, 1);
    trace.completion = Some(stats);
    trace.repaired = repaired;
    finish(c, trace)
}

// =============================================================================
// Special cases
// =============================================================================

/// The two tori outside all divisibility-based families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialTorus {
    T45,
    T77,
}

/// Valid six-color incidence colorings of the 4x5 and 7x7 tori.
///
/// The 4x5 coloring is built on the transposed torus: the 3x4 period-four
/// strip with its first row tripled gives a 5x4 quasi-pattern whose
/// completion is transposed at the end. The 7x7 coloring completes the
/// dedicated seven-row quasi-pattern.
pub fn construct_special(
    which: SpecialTorus,
    opts: &ConstructOptions,
) -> Result<(IncidenceColoring, ConstructionTrace), ConstructError> {
    let (qp, case) = match which {
        SpecialTorus::T45 => {
            let c = catalog_pattern(PatternName::C).matrix().clone();
            let qp = repeat_rows(&c, &BTreeSet::from([0]))?;
            (qp, CaseLabel::SpecialT45)
        }
        SpecialTorus::T77 => {
            let CatalogEntry::Quasi(qp) = catalog_pattern(PatternName::J) else {
                unreachable!("J is a quasi-pattern")
            };
            (qp, CaseLabel::SpecialT77)
        }
    };
    let (mut c, stats, repaired) = color_quasi_pattern(&qp, &budget(opts, 6))?;
    if which == SpecialTorus::T45 {
        c = transpose(&c);
    }
    let mut trace = ConstructionTrace::new(case);
    trace.base = Some(TraceBase::Quasi(qp));
    trace.completion = Some(stats);
    trace.repaired = repaired;
    finish(c, trace)
}

// =============================================================================
// General case: stacked five-row bases with tripled rows
// =============================================================================

/// Valid incidence coloring of `T(m, n)` for `m, n >= 5` with `m` not 6 or
/// 8 and `n != 7`: writes `m = 5k + 2r` with `r <= 4`, stacks `k` copies of
/// a five-row base pattern and triples `r` of the rows.
///
/// The palette is six except when both dimensions are divisible by five
/// (then the base is the five-color shift pattern and `r = 0`, so the
/// result uses five colors).
pub fn construct_general(
    m: usize,
    n: usize,
    opts: &ConstructOptions,
) -> Result<(IncidenceColoring, ConstructionTrace), ConstructError> {
    if m < 5 || n < 5 || m == 6 || m == 8 || n == 7 {
        return Err(ConstructError::GeneralPrecondition { m, n });
    }
    let r = [0, 3, 1, 4, 2][m % 5];
    let k = (m - 2 * r) / 5;
    debug_assert!(k >= 1 && 5 * k + 2 * r == m);
    let (base5, source) = base_pattern_five_rows(n, opts)?;
    let case = CaseLabel::GeneralRows { tripled: r, source };
    if r == 0 {
        let mut c = induce_incidence_coloring(&base5)?;
        if k > 1 {
            c = tile(&c, k, 1)?;
        }
        let mut trace = ConstructionTrace::new(case);
        trace.base = Some(TraceBase::Plain(base5));
        trace.tiling = (k, 1);
        return finish(c, trace);
    }
    let stacked = base5.tiled(k, 1)?;
    // With two or more stacked copies the tripled rows are spread out; with
    // a single copy there is no room and consecutive rows are tripled,
    // which the row-tripling construction explicitly supports.
    let selection: BTreeSet<usize> = if k >= 2 {
        [0usize, 2, 4, 6][..r].iter().copied().collect()
    } else {
        (0..r).collect()
    };
    let qp = repeat_rows(&stacked, &selection)?;
    let (c, stats, repaired) = color_quasi_pattern(&qp, &budget(opts, 6))?;
    let mut trace = ConstructionTrace::new(case);
    trace.base = Some(TraceBase::Quasi(qp));
    trace.completion = Some(stats);
    trace.repaired = repaired;
    finish(c, trace)
}

// =============================================================================
// Five-row base patterns
// =============================================================================

/// A five-row pattern proper on the square of `T(5, n)`, by the cheapest
/// applicable strategy: shift formulas when five or six divides `n`, a
/// word of pre-verified blocks when `n` is a sum of fives and sixes, and
/// exhaustive column search otherwise. Search results are memoized in the
/// process and optionally cached on disk.
fn base_pattern_five_rows(
    n: usize,
    opts: &ConstructOptions,
) -> Result<(Pattern, BaseSource), ConstructError> {
    debug_assert!(n >= 5 && n != 7);
    if n % 5 == 0 {
        return Ok((five_color_pattern(5, n)?, BaseSource::FiveShift));
    }
    if n % 6 == 0 {
        let base = catalog_pattern(PatternName::I).matrix().tiled(1, n / 6)?;
        return Ok((base, BaseSource::SixShift));
    }
    if let Some(word) = block_word(n) {
        return Ok((word, BaseSource::BlockWord));
    }
    Ok((searched_base(n, opts)?, BaseSource::Search))
}

/// Assembles `n = 5a + 6b` (smallest `b`, when solvable) as `a` five-column
/// blocks followed by `b` six-column blocks. All four ordered seams between
/// the two block types are checked when the pair is built, so any block
/// word is proper.
fn block_word(n: usize) -> Option<Pattern> {
    let b = n % 5;
    if 6 * b > n {
        return None;
    }
    let a = (n - 6 * b) / 5;
    let (b5, b6) = block_pair()?;
    let mut cols: Vec<[u32; 5]> = Vec::with_capacity(n);
    for _ in 0..a {
        cols.extend_from_slice(b5);
    }
    for _ in 0..b {
        cols.extend_from_slice(b6);
    }
    Some(pattern_from_columns(&cols))
}

fn pattern_from_columns(cols: &[[u32; 5]]) -> Pattern {
    Pattern::from_fn(5, cols.len(), |i, j| cols[j][i]).expect("entries are positive")
}

/// Columns of the five-column diagonal shift block.
fn shift_block_columns() -> [[u32; 5]; 5] {
    let mut cols = [[0u32; 5]; 5];
    for (j, col) in cols.iter_mut().enumerate() {
        for (i, entry) in col.iter_mut().enumerate() {
            *entry = ((i + 2 * j) % 5 + 1) as u32;
        }
    }
    cols
}

/// The five- and six-column block pair used by [`block_word`], found once:
/// the five-column block is the diagonal shift block and the six-column
/// companion comes from a bounded search over its possible seams.
fn block_pair() -> Option<(&'static [[u32; 5]; 5], &'static [[u32; 5]; 6])> {
    static PAIR: OnceLock<Option<([[u32; 5]; 5], [[u32; 5]; 6])>> = OnceLock::new();
    PAIR.get_or_init(|| {
        let b5 = shift_block_columns();
        find_companion_block(&b5).map(|b6| (b5, b6))
    })
    .as_ref()
    .map(|(b5, b6)| (b5, b6))
}

/// Searches for a six-column block `x` such that every seam that can occur
/// in a word over `{b5, x}` is proper: internal seams of `x`, `b5` then
/// `x`, `x` then `b5`, and `x` then `x`. (Seams inside `b5` words are
/// proper because the shift block is proper cyclically.)
fn find_companion_block(b5: &[[u32; 5]; 5]) -> Option<[[u32; 5]; 6]> {
    let t = column_tables();
    let l3 = t.index[&b5[3]];
    let l4 = t.index[&b5[4]];
    let r0 = t.index[&b5[0]];
    let r1 = t.index[&b5[1]];
    let adj = &t.adjacent_ok;
    let two = &t.distance_two_ok;
    for x0 in adj[l4].intersect(&two[l3]).ones() {
        for x1 in adj[x0].intersect(&two[l4]).ones() {
            for x2 in adj[x1].intersect(&two[x0]).ones() {
                for x3 in adj[x2].intersect(&two[x1]).ones() {
                    let x4_allowed = adj[x3]
                        .intersect(&two[x2])
                        .intersect(&two[r0])
                        .intersect(&two[x0]);
                    for x4 in x4_allowed.ones() {
                        let x5_allowed = adj[x4]
                            .intersect(&two[x3])
                            .intersect(&adj[r0])
                            .intersect(&two[r1])
                            .intersect(&adj[x0])
                            .intersect(&two[x1]);
                        let x5 = x5_allowed.ones().next();
                        if let Some(x5) = x5 {
                            let c = &t.columns;
                            return Some([c[x0], c[x1], c[x2], c[x3], c[x4], c[x5]]);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Base pattern by exhaustive cyclic column search, memoized.
fn searched_base(n: usize, opts: &ConstructOptions) -> Result<Pattern, ConstructError> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Pattern>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = memo.lock().expect("memo lock").get(&n) {
        return Ok(p.clone());
    }
    if let Some(dir) = &opts.cache_dir {
        if let Some(p) = read_cached_base(dir, n) {
            memo.lock().expect("memo lock").insert(n, p.clone());
            return Ok(p);
        }
    }
    let p = cyclic_column_search(n).ok_or(ConstructError::BaseSearchFailed { n })?;
    if !p.is_proper_on_square()? {
        return Err(ConstructError::VerificationFailed);
    }
    if let Some(dir) = &opts.cache_dir {
        let _ = write_cached_base(dir, n, &p);
    }
    memo.lock().expect("memo lock").insert(n, p.clone());
    Ok(p)
}

/// Exhaustive search for a five-row pattern proper on the square of
/// `T(5, n)`, one column at a time.
///
/// Every column of such a pattern uses five distinct colors (any two rows
/// of a five-cycle are within distance two), so the domain is the 720
/// injective columns over six colors. The first column is normalized to
/// ascending colors; any solution can be renamed to that form, so failure
/// of the search proves that no pattern exists.
fn cyclic_column_search(n: usize) -> Option<Pattern> {
    debug_assert!(n >= 5);
    let t = column_tables();
    let c0 = t.index[&[1, 2, 3, 4, 5]];
    let mut seq = vec![c0];
    if dfs_columns(n, t, &mut seq) {
        let cols: Vec<[u32; 5]> = seq.into_iter().map(|i| t.columns[i]).collect();
        Some(pattern_from_columns(&cols))
    } else {
        None
    }
}

fn dfs_columns(n: usize, t: &ColumnTables, seq: &mut Vec<usize>) -> bool {
    let j = seq.len();
    if j == n {
        return true;
    }
    let mut allowed = t.adjacent_ok[seq[j - 1]];
    if j >= 2 {
        allowed = allowed.intersect(&t.distance_two_ok[seq[j - 2]]);
    }
    if j == n - 2 {
        allowed = allowed.intersect(&t.distance_two_ok[seq[0]]);
    }
    if j == n - 1 {
        allowed = allowed
            .intersect(&t.adjacent_ok[seq[0]])
            .intersect(&t.distance_two_ok[seq[1]]);
    }
    for candidate in allowed.ones() {
        seq.push(candidate);
        if dfs_columns(n, t, seq) {
            return true;
        }
        seq.pop();
    }
    false
}

fn cache_file(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("base-5x{n}-k6.json"))
}

/// Reads a cached base pattern, accepting it only after re-verification.
fn read_cached_base(dir: &Path, n: usize) -> Option<Pattern> {
    let text = fs::read_to_string(cache_file(dir, n)).ok()?;
    let parsed = crate::formats::parse_pattern_json(&text).ok()?;
    if !parsed.deleted_edges.is_empty() {
        return None;
    }
    let p = parsed.pattern;
    (p.rows() == 5 && p.cols() == n && p.max_color() <= 6 && p.is_proper_on_square().ok()?)
        .then_some(p)
}

/// Writes a base pattern to the cache atomically (write-then-rename).
fn write_cached_base(dir: &Path, n: usize, p: &Pattern) -> std::io::Result<()> {
    use std::io::Write as _;
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(crate::formats::pattern_json(p).as_bytes())?;
    tmp.persist(cache_file(dir, n)).map_err(|e| e.error)?;
    Ok(())
}

// =============================================================================
// Column compatibility tables
// =============================================================================

const COLUMN_COUNT: usize = 720;
const COLUMN_WORDS: usize = COLUMN_COUNT.div_ceil(64);

/// Fixed-size bitset over the 720 injective columns.
#[derive(Clone, Copy, PartialEq, Eq)]
struct ColumnSet([u64; COLUMN_WORDS]);

impl ColumnSet {
    const EMPTY: ColumnSet = ColumnSet([0; COLUMN_WORDS]);

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(mut self, other: &ColumnSet) -> ColumnSet {
        for w in 0..COLUMN_WORDS {
            self.0[w] &= other.0[w];
        }
        self
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rest = bits;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }
}

struct ColumnTables {
    /// All injective maps from five rows to six colors, lexicographic.
    columns: Vec<[u32; 5]>,
    index: HashMap<[u32; 5], usize>,
    /// `adjacent_ok[a]` holds `b` iff columns `a`, `b` may sit side by
    /// side: entries in rows at cyclic distance at most one differ.
    adjacent_ok: Vec<ColumnSet>,
    /// `distance_two_ok[a]` holds `b` iff the columns may sit two apart:
    /// same-row entries differ.
    distance_two_ok: Vec<ColumnSet>,
}

/// Both relations are symmetric, so one table serves either side.
fn column_tables() -> &'static ColumnTables {
    static TABLES: OnceLock<ColumnTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut columns = Vec::with_capacity(COLUMN_COUNT);
        let mut stack = [0u32; 5];
        build_columns(&mut stack, 0, &mut columns);
        debug_assert_eq!(columns.len(), COLUMN_COUNT);
        let index: HashMap<[u32; 5], usize> =
            columns.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut adjacent_ok = vec![ColumnSet::EMPTY; COLUMN_COUNT];
        let mut distance_two_ok = vec![ColumnSet::EMPTY; COLUMN_COUNT];
        for (x, cx) in columns.iter().enumerate() {
            for (y, cy) in columns.iter().enumerate() {
                if columns_adjacent_ok(cx, cy) {
                    adjacent_ok[x].insert(y);
                }
                if (0..5).all(|i| cx[i] != cy[i]) {
                    distance_two_ok[x].insert(y);
                }
            }
        }
        ColumnTables {
            columns,
            index,
            adjacent_ok,
            distance_two_ok,
        }
    })
}

fn build_columns(stack: &mut [u32; 5], depth: usize, out: &mut Vec<[u32; 5]>) {
    if depth == 5 {
        out.push(*stack);
        return;
    }
    for color in 1..=6u32 {
        if stack[..depth].contains(&color) {
            continue;
        }
        stack[depth] = color;
        build_columns(stack, depth + 1, out);
    }
}

fn columns_adjacent_ok(left: &[u32; 5], right: &[u32; 5]) -> bool {
    for i in 0..5 {
        for d in [4usize, 0, 1] {
            if right[i] == left[(i + d) % 5] {
                return false;
            }
        }
    }
    true
}

// =============================================================================
// Dispatch
// =============================================================================

/// Builds a valid incidence coloring of `T(m, n)` with an optimal palette:
/// five colors when both dimensions are divisible by five, six otherwise.
pub fn construct(
    m: usize,
    n: usize,
) -> Result<(IncidenceColoring, ConstructionTrace), ConstructError> {
    construct_with(m, n, &ConstructOptions::default())
}

/// [`construct`] with explicit options.
///
/// Branch priority: the five-color shift pattern; then rows (or, after
/// transposing, columns) divisible by three; then by four; then the 4x5,
/// 5x4 and 7x7 specials; then the general row-tripling construction
/// (transposed when the column count is seven). When both dimensions
/// qualify for the same divisibility branch the smaller one plays the row
/// role.
pub fn construct_with(
    m: usize,
    n: usize,
    opts: &ConstructOptions,
) -> Result<(IncidenceColoring, ConstructionTrace), ConstructError> {
    if m < 3 || n < 3 {
        return Err(ConstructError::TooSmall { m, n });
    }
    if m % 5 == 0 && n % 5 == 0 {
        let c = induce_incidence_coloring(&five_color_pattern(m, n)?)?;
        let mut trace = ConstructionTrace::new(CaseLabel::FiveColor);
        trace.base = Some(TraceBase::Plain(five_color_pattern(5, 5)?));
        trace.tiling = (m / 5, n / 5);
        return finish(c, trace);
    }
    if m % 3 == 0 || n % 3 == 0 {
        let rows_divide = m % 3 == 0 && (n % 3 != 0 || m <= n);
        return if rows_divide {
            construct_div3(m / 3, n, opts)
        } else {
            transposed(construct_div3(n / 3, m, opts)?)
        };
    }
    if m % 4 == 0 || n % 4 == 0 {
        let rows_divide = m % 4 == 0 && (n % 4 != 0 || m <= n);
        return if rows_divide {
            if (m, n) == (4, 5) {
                construct_special(SpecialTorus::T45, opts)
            } else {
                construct_div4(m / 4, n, opts)
            }
        } else if (n, m) == (4, 5) {
            transposed(construct_special(SpecialTorus::T45, opts)?)
        } else {
            transposed(construct_div4(n / 4, m, opts)?)
        };
    }
    if (m, n) == (7, 7) {
        return construct_special(SpecialTorus::T77, opts);
    }
    if n == 7 {
        transposed(construct_general(n, m, opts)?)
    } else {
        construct_general(m, n, opts)
    }
}
