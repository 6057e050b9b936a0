//! Top-right-corner scan of a monotone staircase.
//!
//! The view is a list of rows with non-increasing lengths; entries grow
//! along rows and down columns. Comparing `x` with the last element of
//! the current first row either eliminates that whole row (`x` greater)
//! or the rightmost column (`x` smaller), so `rows + cols − 1`
//! comparisons always suffice.

use super::{Answer, Counter, Oracle, SearchOutcome};

/// Searches a rectangular or staircase sub-view of a layer.
pub fn search_monotone_grid<O: Oracle>(rows: &[Vec<u64>], oracle: &mut O) -> SearchOutcome {
    assert!(!rows.is_empty() && !rows[0].is_empty());
    for w in rows.windows(2) {
        assert!(
            w[0].len() >= w[1].len(),
            "rows must have non-increasing lengths"
        );
        assert!(!w[1].is_empty(), "empty rows are not part of a view");
    }
    let mut c = Counter::new(oracle);
    match grid_scan(rows, 0, usize::MAX, &mut c) {
        Some(s) => SearchOutcome {
            found: true,
            match_subscript: Some(s),
            comparisons_used: c.used,
        },
        None => SearchOutcome {
            found: false,
            match_subscript: None,
            comparisons_used: c.used,
        },
    }
}

/// Core scan over `rows[top..]` with every row truncated to at most
/// `cap` columns. Returns the matching subscript, if any.
///
/// An `x > e` answer on the top-right element `e` eliminates the first
/// row of the residual view (everything there divides `e`); an `x < e`
/// answer eliminates the rightmost residual column (everything there is
/// a multiple of `e`). Row lengths stay non-increasing under both.
pub(super) fn grid_scan<O: Oracle>(
    rows: &[Vec<u64>],
    top: usize,
    cap: usize,
    c: &mut Counter<'_, O>,
) -> Option<u64> {
    let mut top = top;
    let mut cap = cap;
    while top < rows.len() {
        let len = rows[top].len().min(cap);
        if len == 0 {
            break;
        }
        match c.ask(rows[top][len - 1]) {
            Answer::Eq => return Some(rows[top][len - 1]),
            Answer::Gt => top += 1,
            Answer::Lt => cap = len - 1,
        }
    }
    None
}
