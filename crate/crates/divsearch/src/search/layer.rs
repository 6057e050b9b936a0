//! Layer search in `rows + cols − 2` comparisons.
//!
//! Works for any layer with `|L| ∉ {1,2,3,5}`. The first and second row
//! lengths differ by 1 or 2, which splits the procedure into two cases;
//! both start by probing the second-to-last element `e` of the first
//! row:
//!
//! - `x < e` eliminates the last two residual columns (for the
//!   by-one shape the element right below `e` also goes), leaving a
//!   staircase two columns narrower for the plain grid scan;
//! - `x > e` leaves only the last element of the first row alive there;
//!   one more comparison retires it. In the by-two case the remaining
//!   rows go to the grid scan; in the by-one case the second row is in
//!   turn exactly two longer than the third, so the by-two procedure
//!   repeats one row down.

use super::grid::grid_scan;
use super::{Answer, Counter, Oracle, SearchError, SearchOutcome};
use crate::divposet::LayerGrid;

/// Searches one whole layer, `|L| ∉ {1,2,3,5}`.
pub fn search_layer<O: Oracle>(
    grid: &LayerGrid,
    oracle: &mut O,
) -> Result<SearchOutcome, SearchError> {
    let size = grid.size();
    if matches!(size, 1 | 2 | 3 | 5) {
        return Err(SearchError::LayerShape { size });
    }
    let mut c = Counter::new(oracle);
    let hit = layer_scan(&grid.rows, 0, &mut c);
    Ok(match hit {
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
    })
}

/// Case dispatch on the rows starting at `top` (all rows full width).
pub(super) fn layer_scan<O: Oracle>(
    rows: &[Vec<u64>],
    top: usize,
    c: &mut Counter<'_, O>,
) -> Option<u64> {
    debug_assert!(top + 1 < rows.len(), "single-row layers have |L| <= 2");
    let diff = rows[top].len() - rows[top + 1].len();
    if diff == 2 {
        scan_first_exceeds_by_two(rows, top, c)
    } else {
        debug_assert_eq!(diff, 1);
        scan_first_exceeds_by_one(rows, top, c)
    }
}

fn scan_first_exceeds_by_two<O: Oracle>(
    rows: &[Vec<u64>],
    top: usize,
    c: &mut Counter<'_, O>,
) -> Option<u64> {
    let len0 = rows[top].len();
    debug_assert!(len0 >= 2);
    match c.ask(rows[top][len0 - 2]) {
        Answer::Eq => Some(rows[top][len0 - 2]),
        // the probe and its sole residual multiple (the row's last
        // element) are gone; nothing below reaches those columns
        Answer::Lt => grid_scan(rows, top, len0 - 2, c),
        Answer::Gt => match c.ask(rows[top][len0 - 1]) {
            Answer::Eq => Some(rows[top][len0 - 1]),
            _ => grid_scan(rows, top + 1, usize::MAX, c),
        },
    }
}

fn scan_first_exceeds_by_one<O: Oracle>(
    rows: &[Vec<u64>],
    top: usize,
    c: &mut Counter<'_, O>,
) -> Option<u64> {
    let len0 = rows[top].len();
    debug_assert!(len0 >= 4, "by-one shapes below |L| = 8 cannot arise here");
    match c.ask(rows[top][len0 - 2]) {
        Answer::Eq => Some(rows[top][len0 - 2]),
        // the probe, the last element of this row, and the last element
        // of the row below are all multiples-or-self: two columns gone
        Answer::Lt => grid_scan(rows, top, len0 - 2, c),
        Answer::Gt => match c.ask(rows[top][len0 - 1]) {
            Answer::Eq => Some(rows[top][len0 - 1]),
            // second row now exceeds the third by exactly two
            _ => scan_first_exceeds_by_two(rows, top + 1, c),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divposet::{layer_grid, layer_shape_of_ratio};
    use crate::search::{layer_budget, search_layer, worst_case_comparisons};
    use std::collections::HashSet;

    fn synthetic_rows(lens: &[u32]) -> Vec<Vec<u64>> {
        lens.iter()
            .enumerate()
            .map(|(s, &l)| (0..l).map(|k| 3u64.pow(s as u32) * (1 << k)).collect())
            .collect()
    }

    #[test]
    fn smallest_layer_rows_3_1() {
        // |L| = 4, shape [3,1]: at most 2 + 3 − 2 = 3 comparisons
        let g = layer_grid(1, 4);
        assert_eq!(g.row_lens(), vec![3, 1]);
        let worst = worst_case_comparisons(|o| search_layer(&g, o).unwrap());
        assert_eq!(worst, 3);
    }

    #[test]
    fn nine_element_layer_within_six() {
        let g = layer_grid(1, 16);
        assert_eq!(g.row_lens(), vec![5, 3, 1]);
        let worst = worst_case_comparisons(|o| search_layer(&g, o).unwrap());
        assert!(worst <= 6, "worst {worst}");
    }

    #[test]
    fn sizes_4_6_7_all_have_by_two_first_step() {
        let mut seen = HashSet::new();
        for t in 1..=2000u64 {
            let lens = layer_shape_of_ratio(t);
            let size: u32 = lens.iter().sum();
            if matches!(size, 4 | 6 | 7) && seen.insert(lens.clone()) {
                assert_eq!(lens[0] - lens[1], 2, "shape {lens:?}");
            }
        }
        // the three sizes really occur
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn exhaustive_walks_meet_lemma_budget_for_all_shapes_up_to_2000() {
        let mut done: HashSet<Vec<u32>> = HashSet::new();
        for t in 1..=2000u64 {
            let lens = layer_shape_of_ratio(t);
            let size: u32 = lens.iter().sum();
            if matches!(size, 1 | 2 | 3 | 5) || !done.insert(lens.clone()) {
                continue;
            }
            let rows = synthetic_rows(&lens);
            let m = rows.len() as u64;
            let cols = rows[0].len() as u64;
            let worst = worst_case_comparisons(|o| {
                let mut c = Counter::new(o);
                layer_scan(&rows, 0, &mut c);
                SearchOutcome {
                    found: false,
                    match_subscript: None,
                    comparisons_used: c.used,
                }
            });
            assert!(worst <= m + cols - 2, "shape {lens:?} worst {worst}");
            assert_eq!(layer_budget(&lens), m + cols - 2);
        }
    }

    #[test]
    fn layer_search_correct_on_concrete_tables() {
        use crate::divposet::layer_decomposition;
        use crate::tablegen::{probe_values, random_table, TableOracle};
        for n in [4u64, 9, 16, 48, 97, 144] {
            let t = random_table(n, 5);
            for g in layer_decomposition(n) {
                if matches!(g.size(), 1 | 2 | 3 | 5) {
                    continue;
                }
                for x in probe_values(&t) {
                    let mut o = TableOracle::new(&t, x);
                    let out = search_layer(&g, &mut o).unwrap();
                    let expect = g.rows.iter().flatten().find(|&&e| t.value(e) == x).copied();
                    assert_eq!(out.match_subscript, expect, "n={n} base={} x={x}", g.base);
                    let (m, cols) = g.dims();
                    assert!(out.comparisons_used <= (m + cols - 2) as u64);
                }
            }
        }
    }
}
