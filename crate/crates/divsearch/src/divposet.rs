//! Structural model of the division poset `P_n`.
//!
//! Two partitions of `{1..n}` drive everything else:
//!
//! - chains `B_j = {j·2^k ≤ n}` for odd `j`, each totally ordered;
//! - layers `L_i = {i·2^k·3^s ≤ n}` for `i` coprime to 6, each a
//!   staircase-shaped monotone grid (rows indexed by the 3-power,
//!   columns by the 2-power).
//!
//! Row lengths of a layer strictly decrease downward by 1 or 2, three
//! consecutive rows never step by (1,1) and four never step by (2,2,2);
//! `check_structural_lemmas` verifies all three facts by enumeration.
//!
//! Each row carries one *unit* (its last `min(4, len)` elements). Units
//! are classified by row shape; the 4-unit special classes additionally
//! correspond to explicit subscript ranges (`SpecialIndexSets`), and the
//! two views are kept separate so tests can check they agree.

use serde::Serialize;

/// Integers in `[1, n]` with no factor 2 or 3 (layer bases).
pub fn layer_bases(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(|i| i % 2 != 0 && i % 3 != 0)
}

/// Strips all factors of 2 and 3, yielding the base of the layer
/// containing `j`.
pub fn base_of(j: u64) -> u64 {
    debug_assert!(j >= 1);
    let mut b = j;
    while b % 2 == 0 {
        b /= 2;
    }
    while b % 3 == 0 {
        b /= 3;
    }
    b
}

/// One chain `B_j`: subscripts `j·2^k ≤ n` for odd `j`, in increasing
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub odd_base: u64,
    pub members: Vec<u64>,
}

/// Partition of `{1..n}` into chains, ordered by odd base.
pub fn chain_partition(n: u64) -> Vec<Chain> {
    assert!(n >= 1);
    (1..=n)
        .step_by(2)
        .map(|j| {
            let mut members = Vec::new();
            let mut m = j;
            while m <= n {
                members.push(m);
                m *= 2;
            }
            Chain {
                odd_base: j,
                members,
            }
        })
        .collect()
}

/// One layer `L_base` materialized as rows of subscripts.
///
/// Row `s` holds `base·3^s·2^k` for `k = 0..len_s`; columns double,
/// rows triple, so the grid is monotone along both axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerGrid {
    pub base: u64,
    pub rows: Vec<Vec<u64>>,
    #[serde(skip)]
    pub n: u64,
}

impl LayerGrid {
    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Row count `m` and column count (first-row length) `c`.
    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.rows[0].len())
    }

    pub fn row_lens(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.len() as u32).collect()
    }
}

/// Builds the grid for a single base.
pub fn layer_grid(base: u64, n: u64) -> LayerGrid {
    assert!(base >= 1 && base <= n && base % 2 != 0 && base % 3 != 0);
    let mut rows = Vec::new();
    let mut p = base;
    while p <= n {
        let mut row = Vec::new();
        let mut e = p;
        while e <= n {
            row.push(e);
            e *= 2;
        }
        rows.push(row);
        p *= 3;
    }
    LayerGrid { base, rows, n }
}

/// Row lengths of `L_base` without materializing the subscripts.
pub fn layer_row_lens(base: u64, n: u64) -> Vec<u32> {
    let mut lens = Vec::new();
    let mut p = base;
    while p <= n {
        lens.push((n / p).ilog2() + 1);
        p *= 3;
    }
    lens
}

/// All layers of `P_n`, ordered by base.
pub fn layer_decomposition(n: u64) -> Vec<LayerGrid> {
    assert!(n >= 1);
    layer_bases(n).map(|b| layer_grid(b, n)).collect()
}

/// The shape of a layer depends only on `floor(n / base)`, so sweeping
/// this value covers every shape arising for any `n' ≤ n`.
pub fn layer_shape_of_ratio(t: u64) -> Vec<u32> {
    layer_row_lens(1, t)
}

/// Unit classes. `U31`/`U32` split 3-units by the length of the row
/// below; `U4S` is the single special class used by `RS2`, while
/// `U4S1`/`U4S2`/`U4S3` are the refined classes used by `RS2*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum UnitClass {
    U1,
    U2,
    U31,
    U32,
    U4General,
    U4S,
    U4S1,
    U4S2,
    U4S3,
}

impl UnitClass {
    pub fn is_special(self) -> bool {
        matches!(
            self,
            UnitClass::U4S | UnitClass::U4S1 | UnitClass::U4S2 | UnitClass::U4S3
        )
    }
}

/// The unit of one layer row: its last `min(4, len)` elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitDescriptor {
    pub layer_base: u64,
    pub row_index: usize,
    pub members: Vec<u64>,
    pub class: UnitClass,
}

/// Which partition of 4-units into general/special is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitRegime {
    Rs2,
    Rs2Star,
}

/// The special-unit subscript ranges.
///
/// `s_n` holds layer bases `i` (the special unit itself starts at `2i`);
/// the three refined sets hold the subscripts of unit *first elements*.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialIndexSets {
    pub s_n: Vec<u64>,
    pub s_n1: Vec<u64>,
    pub s_n2: Vec<u64>,
    pub s_n3: Vec<u64>,
}

/// Enumerates the four range-defined sets with exact integer bounds:
/// `n/18 < i` is evaluated as `18·i > n`, and so on. No floating point.
pub fn special_index_sets(n: u64) -> SpecialIndexSets {
    assert!(n >= 1);
    let s_n = (1..=n)
        .filter(|&i| 18 * i > n && 16 * i <= n && i % 2 != 0 && i % 3 != 0)
        .collect();
    let s_n1 = (1..=n)
        .filter(|&j| {
            9 * j > n && 8 * j <= n && j % 2 == 0 && j % 4 != 0 && j % 3 != 0 && j % 5 != 0
        })
        .collect();
    let s_n2 = (1..=n)
        .filter(|&i| 12 * i > n && 8 * i <= n && i % 4 == 0 && i % 3 != 0 && i % 5 != 0)
        .collect();
    let s_n3 = (1..=n)
        .filter(|&i| 12 * i > n && 32 * i <= 3 * n && i % 36 == 0 && i % 5 != 0)
        .collect();
    SpecialIndexSets {
        s_n,
        s_n1,
        s_n2,
        s_n3,
    }
}

/// Classifies every row's unit in `grid`.
///
/// Classification is purely by row shape; the caller-provided `sets`
/// are not consulted (they exist so tests can assert the range view and
/// the shape view agree).
pub fn classify_units(grid: &LayerGrid, regime: UnitRegime) -> Vec<UnitDescriptor> {
    let lens = grid.row_lens();
    let m = lens.len();
    grid.rows
        .iter()
        .enumerate()
        .map(|(s, row)| {
            let take = row.len().min(4);
            let members: Vec<u64> = row[row.len() - take..].to_vec();
            let class = match take {
                1 => UnitClass::U1,
                2 => UnitClass::U2,
                3 => {
                    // a 3-element row always has a row below it
                    debug_assert!(s + 1 < m);
                    if lens[s + 1] == 1 {
                        UnitClass::U31
                    } else {
                        debug_assert_eq!(lens[s + 1], 2);
                        UnitClass::U32
                    }
                }
                _ => four_unit_class(&lens, s, grid.base, regime),
            };
            UnitDescriptor {
                layer_base: grid.base,
                row_index: s,
                members,
                class,
            }
        })
        .collect()
}

/// Class of the 4-unit sitting in row `s` of a layer with the given
/// row-length profile and base. Requires `lens[s] >= 4`.
pub fn four_unit_class(lens: &[u32], s: usize, base: u64, regime: UnitRegime) -> UnitClass {
    debug_assert!(lens[s] >= 4);
    let size: u32 = lens.iter().sum();
    let base_not_div5 = base % 5 != 0;
    match regime {
        UnitRegime::Rs2 => {
            if size == 9 && s == 0 {
                UnitClass::U4S
            } else {
                UnitClass::U4General
            }
        }
        UnitRegime::Rs2Star => {
            if size == 9 && s == 0 && base_not_div5 {
                return UnitClass::U4S1;
            }
            if s == 0 && lens[0] >= 6 && lens.len() >= 2 && lens[0] == lens[1] + 2 && base_not_div5
            {
                return UnitClass::U4S2;
            }
            if s >= 2
                && lens[s - 1] == lens[s] + 2
                && s + 1 < lens.len()
                && lens[s + 1] + 2 == lens[s]
                && lens[s] >= 6 // at least two columns precede the unit
                && base_not_div5
            {
                return UnitClass::U4S3;
            }
            UnitClass::U4General
        }
    }
}

/// A layer whose row-length profile breaks one of the three shape
/// lemmas. Expected never to exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeViolation {
    pub base: u64,
    pub n: u64,
    pub row_lens: Vec<u32>,
    pub reason: ShapeViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeViolationKind {
    /// Two consecutive rows differ by something other than 1 or 2.
    BadStep,
    /// Three consecutive rows with lengths each increased by one
    /// reading upward.
    ThreeByOne,
    /// Four consecutive rows with lengths each increased by two.
    FourByTwo,
}

fn shape_violation(lens: &[u32]) -> Option<ShapeViolationKind> {
    for w in lens.windows(2) {
        let d = w[0] as i64 - w[1] as i64;
        if d != 1 && d != 2 {
            return Some(ShapeViolationKind::BadStep);
        }
    }
    for w in lens.windows(3) {
        if w[0] == w[1] + 1 && w[1] == w[2] + 1 {
            return Some(ShapeViolationKind::ThreeByOne);
        }
    }
    for w in lens.windows(4) {
        if w[0] == w[1] + 2 && w[1] == w[2] + 2 && w[2] == w[3] + 2 {
            return Some(ShapeViolationKind::FourByTwo);
        }
    }
    None
}

/// Checks every layer of `P_n` against the three row-length lemmas.
pub fn check_structural_lemmas(n: u64) -> Vec<ShapeViolation> {
    assert!(n >= 1);
    layer_bases(n)
        .filter_map(|b| {
            let lens = layer_row_lens(b, n);
            shape_violation(&lens).map(|reason| ShapeViolation {
                base: b,
                n,
                row_lens: lens,
                reason,
            })
        })
        .collect()
}

/// Checks every layer shape arising for *any* table size up to `n_max`.
///
/// The shape of `L_base` in `P_n` equals the shape of `L_1` in
/// `P_{n/base}`, so sweeping `t = 1..=n_max` covers them all.
pub fn check_structural_lemmas_up_to(n_max: u64) -> Vec<ShapeViolation> {
    (1..=n_max)
        .filter_map(|t| {
            let lens = layer_shape_of_ratio(t);
            shape_violation(&lens).map(|reason| ShapeViolation {
                base: 1,
                n: t,
                row_lens: lens,
                reason,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn chains_n15() {
        let chains = chain_partition(15);
        assert_eq!(chains.len(), 8);
        let of = |j: u64| &chains.iter().find(|c| c.odd_base == j).unwrap().members;
        assert_eq!(of(1), &vec![1, 2, 4, 8]);
        assert_eq!(of(3), &vec![3, 6, 12]);
        assert_eq!(of(15), &vec![15]);
        let mut sizes: Vec<usize> = chains.iter().map(|c| c.members.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 1, 2, 2, 3, 4]);
    }

    #[test]
    fn chains_n1() {
        let chains = chain_partition(1);
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].members, vec![1]);
    }

    #[test]
    fn layers_n15_match_known_decomposition() {
        let layers = layer_decomposition(15);
        let bases: Vec<u64> = layers.iter().map(|l| l.base).collect();
        assert_eq!(bases, vec![1, 5, 7, 11, 13]);
        let by_base = |b: u64| &layers.iter().find(|l| l.base == b).unwrap().rows;
        assert_eq!(by_base(1), &vec![vec![1, 2, 4, 8], vec![3, 6, 12], vec![9]]);
        assert_eq!(by_base(5), &vec![vec![5, 10], vec![15]]);
        assert_eq!(by_base(7), &vec![vec![7, 14]]);
        assert_eq!(by_base(11), &vec![vec![11]]);
        assert_eq!(by_base(13), &vec![vec![13]]);
    }

    #[test]
    fn layers_n1() {
        let layers = layer_decomposition(1);
        assert_eq!(layers.len(), 1);
        assert_eq!(layers[0].rows, vec![vec![1]]);
    }

    #[test]
    fn layer_base1_n144_row_lens() {
        // floor(log2(144/3^s)) + 1 for s = 0..4
        assert_eq!(layer_row_lens(1, 144), vec![8, 6, 5, 3, 1]);
        assert_eq!(layer_grid(1, 144).row_lens(), vec![8, 6, 5, 3, 1]);
    }

    #[test]
    fn partitions_cover_everything_exactly_once() {
        for n in 1..=10_000u64 {
            let mut seen_chain = vec![false; n as usize + 1];
            for c in chain_partition(n) {
                for &m in &c.members {
                    assert!(!seen_chain[m as usize], "n={n} subscript {m} in two chains");
                    seen_chain[m as usize] = true;
                }
            }
            let mut seen_layer = vec![false; n as usize + 1];
            for l in layer_decomposition(n) {
                for row in &l.rows {
                    for &m in row {
                        assert!(!seen_layer[m as usize], "n={n} subscript {m} in two layers");
                        seen_layer[m as usize] = true;
                    }
                }
            }
            for j in 1..=n as usize {
                assert!(
                    seen_chain[j] && seen_layer[j],
                    "n={n} subscript {j} missing"
                );
            }
        }
    }

    #[test]
    fn base_count_tracks_density_one_third() {
        for n in 1..=10_000u64 {
            let count = layer_bases(n).count() as f64;
            assert!((count - n as f64 / 3.0).abs() <= 1.0, "n={n} |I_n|={count}");
        }
    }

    #[test]
    fn structural_lemmas_hold_everywhere() {
        assert!(check_structural_lemmas(1).is_empty());
        assert!(check_structural_lemmas(15).is_empty());
        assert!(check_structural_lemmas_up_to(100_000).is_empty());
        // the per-n and ratio-swept checkers agree
        for n in 1..=500 {
            assert!(check_structural_lemmas(n).is_empty());
        }
    }

    #[test]
    fn shape_violation_detects_planted_faults() {
        assert_eq!(shape_violation(&[4, 3, 1]), None);
        assert_eq!(shape_violation(&[5, 2]), Some(ShapeViolationKind::BadStep));
        assert_eq!(
            shape_violation(&[3, 2, 1]),
            Some(ShapeViolationKind::ThreeByOne)
        );
        assert_eq!(
            shape_violation(&[7, 5, 3, 1]),
            Some(ShapeViolationKind::FourByTwo)
        );
    }

    #[test]
    fn special_sets_small_cases() {
        assert_eq!(special_index_sets(288).s_n, vec![17]);
        assert_eq!(special_index_sets(100).s_n3, Vec::<u64>::new());
        assert_eq!(special_index_sets(16).s_n, vec![1]);
        assert_eq!(layer_row_lens(1, 16), vec![5, 3, 1]);
        assert_eq!(special_index_sets(3456).s_n3, vec![324]);
    }

    #[test]
    fn s_n_membership_iff_layer_has_nine_elements() {
        for n in [16u64, 100, 288, 1000, 5000] {
            let sets = special_index_sets(n);
            let s_n: HashSet<u64> = sets.s_n.iter().copied().collect();
            for b in layer_bases(n) {
                let size: u32 = layer_row_lens(b, n).iter().sum();
                assert_eq!(size == 9, s_n.contains(&b), "n={n} base={b}");
            }
        }
    }

    /// The shape-derived classes coincide with the subscript-range
    /// phrasing: an element is outside every unit iff 16i ≤ n, 1-unit
    /// members are the odd i > n/2, 2-units start at odd i in
    /// (n/4, n/2], 3-units with a one-element row below start at odd i
    /// in (n/6, n/4], the other 3-units at odd i in (n/8, n/6], and
    /// 4-units start in (n/16, n/8].
    #[test]
    fn unit_classes_match_subscript_ranges() {
        for n in (1..=300).chain([977, 2048, 3456, 9999]) {
            let mut in_unit = vec![false; n as usize + 1];
            for g in layer_decomposition(n) {
                for u in classify_units(&g, UnitRegime::Rs2) {
                    for &m in &u.members {
                        in_unit[m as usize] = true;
                    }
                    let first = u.members[0];
                    match u.class {
                        UnitClass::U1 => {
                            assert!(first % 2 == 1 && 2 * first > n, "n={n} {u:?}")
                        }
                        UnitClass::U2 => {
                            assert!(
                                first % 2 == 1 && 4 * first > n && 2 * first <= n,
                                "n={n} {u:?}"
                            )
                        }
                        UnitClass::U31 => {
                            assert!(
                                first % 2 == 1 && 6 * first > n && 4 * first <= n,
                                "n={n} {u:?}"
                            )
                        }
                        UnitClass::U32 => {
                            assert!(
                                first % 2 == 1 && 8 * first > n && 6 * first <= n,
                                "n={n} {u:?}"
                            )
                        }
                        _ => assert!(16 * first > n && 8 * first <= n, "n={n} {u:?}"),
                    }
                }
            }
            for i in 1..=n {
                assert_eq!(in_unit[i as usize], 16 * i > n, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn units_n15_classes() {
        let layers = layer_decomposition(15);
        let all: Vec<UnitDescriptor> = layers
            .iter()
            .flat_map(|g| classify_units(g, UnitRegime::Rs2))
            .collect();
        let find = |b: u64, s: usize| {
            all.iter()
                .find(|u| u.layer_base == b && u.row_index == s)
                .unwrap()
        };
        assert_eq!(find(1, 0).members, vec![1, 2, 4, 8]);
        assert_eq!(find(1, 0).class, UnitClass::U4General);
        assert_eq!(find(1, 1).class, UnitClass::U31);
        assert_eq!(find(1, 2).class, UnitClass::U1);
        assert_eq!(find(5, 0).class, UnitClass::U2);
        assert_eq!(find(5, 1).class, UnitClass::U1);
        assert_eq!(find(7, 0).class, UnitClass::U2);
    }

    #[test]
    fn special_layer_unit_is_last_four_of_first_row() {
        // |L_1| = 9 at n = 16
        let g = layer_grid(1, 16);
        let units = classify_units(&g, UnitRegime::Rs2);
        assert_eq!(units[0].members, vec![2, 4, 8, 16]);
        assert_eq!(units[0].class, UnitClass::U4S);
        let star = classify_units(&g, UnitRegime::Rs2Star);
        assert_eq!(star[0].class, UnitClass::U4S1);
        // base divisible by 5: special under RS2, general under RS2*
        let g5 = layer_grid(5, 80);
        assert_eq!(
            classify_units(&g5, UnitRegime::Rs2)[0].class,
            UnitClass::U4S
        );
        assert_eq!(
            classify_units(&g5, UnitRegime::Rs2Star)[0].class,
            UnitClass::U4General
        );
    }

    /// Shape-based classification must match the range-based index sets.
    #[test]
    fn classification_agrees_with_index_sets() {
        for n in 1..=10_000u64 {
            let sets = special_index_sets(n);
            let (s1, s2, s3): (HashSet<u64>, HashSet<u64>, HashSet<u64>) = (
                sets.s_n1.iter().copied().collect(),
                sets.s_n2.iter().copied().collect(),
                sets.s_n3.iter().copied().collect(),
            );
            let mut found = (HashSet::new(), HashSet::new(), HashSet::new());
            for g in layer_decomposition(n) {
                for u in classify_units(&g, UnitRegime::Rs2Star) {
                    match u.class {
                        UnitClass::U4S1 => {
                            found.0.insert(u.members[0]);
                        }
                        UnitClass::U4S2 => {
                            found.1.insert(u.members[0]);
                        }
                        UnitClass::U4S3 => {
                            found.2.insert(u.members[0]);
                        }
                        _ => {}
                    }
                }
            }
            assert_eq!(found.0, s1, "n={n} first elements of class-1 units");
            assert_eq!(found.1, s2, "n={n} first elements of class-2 units");
            assert_eq!(found.2, s3, "n={n} first elements of class-3 units");
        }
    }

    #[test]
    fn special_classes_are_pairwise_disjoint_and_bounded() {
        for n in [100u64, 1000, 3456, 10_000] {
            let sets = special_index_sets(n);
            let mut all: Vec<u64> = Vec::new();
            all.extend(&sets.s_n1);
            all.extend(&sets.s_n2);
            all.extend(&sets.s_n3);
            let distinct: HashSet<u64> = all.iter().copied().collect();
            assert_eq!(distinct.len(), all.len(), "n={n} overlap between classes");
            // first element i of any special unit satisfies 12i > n
            for &i in &all {
                assert!(12 * i > n, "n={n} i={i}");
            }
            for &i in &sets.s_n {
                assert!(12 * (2 * i) > n, "n={n} base={i}");
            }
        }
    }

    #[test]
    fn cross_layer_divisor_quotients() {
        let n = 10_000u64;
        for j in 1..=n {
            let bj = base_of(j);
            let mut k = 2 * j;
            while k <= n {
                if base_of(k) != bj {
                    let q = k / j;
                    assert!(q >= 5, "j={j} k={k}");
                    if k % 5 != 0 {
                        assert!(q >= 7, "j={j} k={k}");
                    }
                }
                k += j;
            }
        }
    }
}
