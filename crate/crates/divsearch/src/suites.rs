//! Long-running verification sweeps shared by the CLI and the
//! acceptance tests.

use crate::adversary::{
    essential_set, verify_essentiality, AdversarySession, CutViolation, Regime,
};
use crate::divposet::{
    base_of, check_structural_lemmas_up_to, layer_row_lens, layer_shape_of_ratio,
    special_index_sets, LayerGrid, ShapeViolation,
};
use crate::search::{
    layer_budget, search_layer, search_monotone_grid, search_table, worst_case_comparisons,
};
use crate::tablegen::{
    knowledge_closure, refute_early_stop, witness, Claim, RefuteOutcome, TranscriptConstraints,
    WitnessResult,
};
use std::collections::HashMap;

/// Memoized exhaustive answer-tree walks, one per layer shape.
///
/// The shape of `L_base` in `P_n` depends only on `t = floor(n/base)`,
/// so worst cases are cached by ratio.
#[derive(Default)]
pub struct ShapeWalks {
    by_ratio: HashMap<u64, u64>,
    by_shape: HashMap<Vec<u32>, u64>,
}

/// Synthetic rows with the given length profile; subscripts are
/// `3^row · 2^col`, a genuine divisibility grid.
pub fn synthetic_layer_rows(lens: &[u32]) -> Vec<Vec<u64>> {
    lens.iter()
        .enumerate()
        .map(|(s, &l)| (0..l).map(|k| 3u64.pow(s as u32) << k).collect())
        .collect()
}

impl ShapeWalks {
    pub fn new() -> Self {
        Self::default()
    }

    /// Worst-case comparisons of the Algorithm-2 per-layer dispatch on
    /// the shape of ratio `t`, over every answer sequence.
    pub fn worst_for_ratio(&mut self, t: u64) -> u64 {
        if let Some(&w) = self.by_ratio.get(&t) {
            return w;
        }
        let lens = layer_shape_of_ratio(t);
        let w = match self.by_shape.get(&lens) {
            Some(&w) => w,
            None => {
                let rows = synthetic_layer_rows(&lens);
                let size: u32 = lens.iter().sum();
                let grid = LayerGrid {
                    base: 1,
                    n: u64::MAX,
                    rows: rows.clone(),
                };
                let w = if matches!(size, 1 | 2 | 3 | 5) {
                    worst_case_comparisons(|o| search_monotone_grid(&rows, o))
                } else {
                    worst_case_comparisons(|o| search_layer(&grid, o).unwrap())
                };
                self.by_shape.insert(lens, w);
                w
            }
        };
        self.by_ratio.insert(t, w);
        w
    }

    /// Sum of per-layer worst cases for the whole table of size `n` —
    /// an upper bound on any single run of the table search.
    pub fn worst_table_total(&mut self, n: u64) -> u64 {
        let mut total = 0;
        let mut b = 1u64;
        while b <= n {
            if b % 3 != 0 {
                total += self.worst_for_ratio(n / b);
            }
            b += 2;
        }
        total
    }

    /// Every distinct shape arising for ratios `1..=t_max`, with its
    /// walked worst case and its per-layer budget.
    pub fn all_shapes_with_worst(&mut self, t_max: u64) -> Vec<(Vec<u32>, u64, u64)> {
        let mut seen = HashMap::new();
        for t in 1..=t_max {
            let lens = layer_shape_of_ratio(t);
            if !seen.contains_key(&lens) {
                let w = self.worst_for_ratio(t);
                seen.insert(lens.clone(), (w, layer_budget(&lens)));
            }
        }
        let mut out: Vec<(Vec<u32>, u64, u64)> = seen
            .into_iter()
            .map(|(lens, (w, b))| (lens, w, b))
            .collect();
        out.sort();
        out
    }
}

/// Structural lemma sweep; empty result means every shape up to
/// `n_max` is clean.
pub fn structural_suite(n_max: u64) -> Vec<ShapeViolation> {
    check_structural_lemmas_up_to(n_max)
}

/// Essentiality sweep over every `n ≤ n_max` under both unit regimes.
pub fn essential_suite(n_max: u64) -> Vec<(u64, Regime, CutViolation)> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for regime in [Regime::Rs2, Regime::Rs2Star] {
            for v in verify_essentiality(n, regime) {
                out.push((n, regime, v));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientViolation {
    pub j1: u64,
    pub j2: u64,
    pub quotient: u64,
}

/// Cross-layer divisor pairs must have quotient at least 5, and at
/// least 7 when the larger element is not divisible by 5. Also checks
/// `12·i > n` for the first element of every special unit, for every
/// `n ≤ n_max`.
pub fn quotient_suite(n_max: u64) -> Vec<QuotientViolation> {
    let mut out = Vec::new();
    for j1 in 1..=n_max {
        let b1 = base_of(j1);
        let mut j2 = 2 * j1;
        while j2 <= n_max {
            if base_of(j2) != b1 {
                let q = j2 / j1;
                if q < 5 || (j2 % 5 != 0 && q < 7) {
                    out.push(QuotientViolation {
                        j1,
                        j2,
                        quotient: q,
                    });
                }
            }
            j2 += j1;
        }
    }
    for n in 1..=n_max {
        let sets = special_index_sets(n);
        for &i in sets.s_n1.iter().chain(&sets.s_n2).chain(&sets.s_n3) {
            if 12 * i <= n {
                out.push(QuotientViolation {
                    j1: i,
                    j2: n,
                    quotient: 12,
                });
            }
        }
        for &b in &sets.s_n {
            if 12 * (2 * b) <= n {
                out.push(QuotientViolation {
                    j1: 2 * b,
                    j2: n,
                    quotient: 12,
                });
            }
        }
    }
    out
}

#[derive(Debug, Default, Clone, Copy)]
pub struct WitnessSweepStats {
    pub duels: u64,
    pub checkpoints: u64,
    pub feasible_pins_checked: u64,
    pub infeasible_pins_checked: u64,
}

/// Runs a table-search duel for every `n ≤ n_max` under both regimes
/// and checks, at several transcript prefixes, that pinning any
/// still-undecided essential element is feasible (sampled) and that
/// pinning a decided one is not. Completed transcripts must survive
/// the early-stop refuter.
///
/// Panics on the first violation; returns statistics otherwise.
pub fn witness_feasibility_sweep(n_max: u64, pins_per_checkpoint: usize) -> WitnessSweepStats {
    let mut stats = WitnessSweepStats::default();
    for n in 1..=n_max {
        for regime in [Regime::Rs2, Regime::Rs2Star] {
            let mut session = AdversarySession::new(n, regime);
            let out = search_table(n, &mut session);
            assert!(!out.found);
            let transcript = session.transcript;
            stats.duels += 1;

            let len = transcript.len();
            let essential = essential_set(n, regime);
            for cut in [len / 4, len / 2, 3 * len / 4, len] {
                stats.checkpoints += 1;
                let prefix = crate::search::Transcript {
                    entries: transcript.entries[..cut].to_vec(),
                };
                let constraints = TranscriptConstraints::from_transcript(&prefix);
                let (below, above) = knowledge_closure(n, &constraints);
                let queried: Vec<bool> = {
                    let mut q = vec![false; n as usize + 1];
                    for &(s, _) in &prefix.entries {
                        q[s as usize] = true;
                    }
                    q
                };
                let undecided: Vec<u64> = essential
                    .subscripts
                    .iter()
                    .copied()
                    .filter(|&e| !queried[e as usize] && !below[e as usize] && !above[e as usize])
                    .collect();
                for &e in sample(&undecided, pins_per_checkpoint) {
                    match witness(n, &constraints, Some(e)) {
                        WitnessResult::Feasible(w) => {
                            w.check_against(&constraints);
                            stats.feasible_pins_checked += 1;
                        }
                        WitnessResult::Infeasible { cycle } => panic!(
                            "n={n} {regime:?} cut={cut}: undecided essential {e} not pinnable ({cycle:?})"
                        ),
                    }
                }
                let decided: Vec<u64> = essential
                    .subscripts
                    .iter()
                    .copied()
                    .filter(|&e| below[e as usize] || above[e as usize])
                    .collect();
                for &e in sample(&decided, pins_per_checkpoint.min(2)) {
                    match witness(n, &constraints, Some(e)) {
                        WitnessResult::Infeasible { .. } => stats.infeasible_pins_checked += 1,
                        WitnessResult::Feasible(_) => panic!(
                            "n={n} {regime:?} cut={cut}: decided element {e} should not be pinnable"
                        ),
                    }
                }
            }
            match refute_early_stop(n, regime, &transcript, Claim::NotFound) {
                RefuteOutcome::Confirmed => {}
                RefuteOutcome::Refuted(r) => {
                    panic!("n={n} {regime:?}: complete run refuted at {}", r.pinned)
                }
            }
        }
    }
    stats
}

fn sample(items: &[u64], k: usize) -> &[u64] {
    &items[..items.len().min(k)]
}

/// Budgets for each layer of `P_n`, distributed as (rows, cols, size).
pub fn layer_budget_breakdown(n: u64) -> Vec<(u64, Vec<u32>, u64)> {
    let mut out = Vec::new();
    let mut b = 1u64;
    while b <= n {
        if b % 3 != 0 {
            let lens = layer_row_lens(b, n);
            let budget = layer_budget(&lens);
            out.push((b, lens, budget));
        }
        b += 2;
    }
    out
}
