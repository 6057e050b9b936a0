//! Concrete consistent tables, probe values, and the witness builder
//! that turns adversary transcripts into checkable refutations.
//!
//! Table values are even integers assigned by topological rank, so
//! midpoints between adjacent values are exact odd integers and the
//! equality outcome of a comparison is never a rounding question.

use crate::adversary::{essential_set, Regime};
use crate::search::{Answer, Oracle, Transcript};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A table of distinct values consistent with the division poset:
/// `i | j, i ≠ j` implies `value(i) < value(j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistentTable {
    pub n: u64,
    values: Vec<i64>, // index by subscript, slot 0 unused
}

impl ConsistentTable {
    pub fn value(&self, subscript: u64) -> i64 {
        self.values[subscript as usize]
    }

    pub fn subscript_of_value(&self, x: i64) -> Option<u64> {
        (1..=self.n).find(|&s| self.values[s as usize] == x)
    }

    /// Verifies the consistency invariant, returning the first
    /// offending divisor pair if any.
    pub fn check_consistency(&self) -> Result<(), (u64, u64)> {
        for i in 1..=self.n {
            let mut m = 2 * i;
            while m <= self.n {
                if self.values[i as usize] >= self.values[m as usize] {
                    return Err((i, m));
                }
                m += i;
            }
        }
        Ok(())
    }

    /// CSV dump, one `subscript,value` row per element.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subscript,value\n");
        for s in 1..=self.n {
            out.push_str(&format!("{},{}\n", s, self.values[s as usize]));
        }
        out
    }
}

/// A random table consistent with `P_n`: a random topological order of
/// the divisibility DAG (uniform tie-breaking among currently minimal
/// elements) with strictly increasing even values along it.
pub fn random_table(n: u64, seed: u64) -> ConsistentTable {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indegree = proper_divisor_counts(n);
    let mut ready: Vec<u64> = (1..=n).filter(|&j| indegree[j as usize] == 0).collect();
    let mut values = vec![0i64; n as usize + 1];
    let mut rank = 0i64;
    while !ready.is_empty() {
        let pick = rng.gen_range(0..ready.len());
        let v = ready.swap_remove(pick);
        rank += 1;
        values[v as usize] = 2 * rank;
        let mut m = 2 * v;
        while m <= n {
            indegree[m as usize] -= 1;
            if indegree[m as usize] == 0 {
                ready.push(m);
            }
            m += v;
        }
    }
    debug_assert_eq!(rank, n as i64);
    ConsistentTable { n, values }
}

fn proper_divisor_counts(n: u64) -> Vec<u32> {
    let mut indegree = vec![0u32; n as usize + 1];
    for d in 1..=n {
        let mut m = 2 * d;
        while m <= n {
            indegree[m as usize] += 1;
            m += d;
        }
    }
    indegree
}

/// Every ternary-outcome region of a table: each value, each midpoint
/// between adjacent sorted values, and sentinels below and above.
pub fn probe_values(table: &ConsistentTable) -> Vec<i64> {
    let mut sorted: Vec<i64> = (1..=table.n).map(|s| table.value(s)).collect();
    sorted.sort_unstable();
    let mut probes = Vec::with_capacity(2 * sorted.len() + 1);
    probes.push(sorted[0] - 1);
    for (k, &v) in sorted.iter().enumerate() {
        probes.push(v);
        if k + 1 < sorted.len() {
            probes.push((v + sorted[k + 1]) / 2);
        }
    }
    probes.push(sorted[sorted.len() - 1] + 1);
    probes
}

/// Oracle backed by a concrete table and probe value.
pub struct TableOracle<'a> {
    table: &'a ConsistentTable,
    x: i64,
}

impl<'a> TableOracle<'a> {
    pub fn new(table: &'a ConsistentTable, x: i64) -> Self {
        TableOracle { table, x }
    }
}

impl Oracle for TableOracle<'_> {
    fn answer(&mut self, subscript: u64) -> Answer {
        match self.x.cmp(&self.table.value(subscript)) {
            std::cmp::Ordering::Less => Answer::Lt,
            std::cmp::Ordering::Equal => Answer::Eq,
            std::cmp::Ordering::Greater => Answer::Gt,
        }
    }
}

/// The order constraints a finished session places on `x`: answers
/// `x > a_g` for `g ∈ gt` and `x < a_l` for `l ∈ lt`.
#[derive(Debug, Clone, Default)]
pub struct TranscriptConstraints {
    pub gt: Vec<u64>,
    pub lt: Vec<u64>,
}

impl TranscriptConstraints {
    pub fn from_transcript(t: &Transcript) -> Self {
        TranscriptConstraints {
            gt: t.gt_set(),
            lt: t.lt_set(),
        }
    }
}

/// Divisibility closure of the constraints: `below[j]` when `a_j < x`
/// is implied (some multiple of `j` answered `Gt`), `above[j]` when
/// `a_j > x` is implied.
pub fn knowledge_closure(n: u64, constraints: &TranscriptConstraints) -> (Vec<bool>, Vec<bool>) {
    let mut gt_mask = vec![false; n as usize + 1];
    for &g in &constraints.gt {
        gt_mask[g as usize] = true;
    }
    let mut below = vec![false; n as usize + 1];
    for j in 1..=n {
        let mut m = j;
        while m <= n {
            if gt_mask[m as usize] {
                below[j as usize] = true;
                break;
            }
            m += j;
        }
    }
    let mut above = vec![false; n as usize + 1];
    for &l in &constraints.lt {
        let mut m = l;
        while m <= n {
            above[m as usize] = true;
            m += l;
        }
    }
    (below, above)
}

/// A concrete table plus probe value realizing a transcript.
#[derive(Debug, Clone)]
pub struct WitnessTable {
    pub table: ConsistentTable,
    pub x: i64,
    /// subscript pinned to equal `x`, if requested
    pub pinned: Option<u64>,
}

impl WitnessTable {
    /// Replays the constraints against the witness.
    pub fn check_against(&self, constraints: &TranscriptConstraints) {
        self.table
            .check_consistency()
            .expect("witness table violates consistency");
        for &g in &constraints.gt {
            assert!(self.table.value(g) < self.x, "witness violates x > a_{g}");
        }
        for &l in &constraints.lt {
            assert!(self.table.value(l) > self.x, "witness violates x < a_{l}");
        }
        if let Some(e) = self.pinned {
            assert_eq!(self.table.value(e), self.x);
        } else {
            assert_eq!(self.table.subscript_of_value(self.x), None);
        }
    }
}

#[derive(Debug, Clone)]
pub enum WitnessResult {
    Feasible(WitnessTable),
    /// The constraints contradict the pin (or themselves); one DAG
    /// cycle is returned as the certificate.
    Infeasible {
        cycle: Vec<u64>,
    },
}

/// Builds a table and probe value realizing the constraints, with the
/// probe node optionally merged into element `pin`.
///
/// The DAG has one node per subscript plus a node `X` for the probe;
/// edges run from divisors to multiples, from every `gt` element to
/// `X`, and from `X` to every `lt` element. A topological order yields
/// the assignment; a cycle proves infeasibility.
pub fn witness(n: u64, constraints: &TranscriptConstraints, pin: Option<u64>) -> WitnessResult {
    assert!(n >= 1);
    if let Some(e) = pin {
        assert!(e >= 1 && e <= n);
        if constraints.gt.contains(&e) || constraints.lt.contains(&e) {
            return WitnessResult::Infeasible { cycle: vec![e] };
        }
    }
    // node ids: 1..=n are subscripts, 0 is X (used only when unpinned)
    let x: usize = pin.unwrap_or(0) as usize;
    let mut gt_into_x = vec![false; n as usize + 1];
    let mut x_into = vec![false; n as usize + 1];
    let mut indegree: Vec<i64> = proper_divisor_counts(n)
        .into_iter()
        .map(|c| c as i64)
        .collect();
    for &g in &constraints.gt {
        gt_into_x[g as usize] = true;
        indegree[x] += 1;
    }
    for &l in &constraints.lt {
        x_into[l as usize] = true;
        indegree[l as usize] += 1;
    }

    let mut ready: Vec<usize> = Vec::new();
    if pin.is_none() && indegree[0] == 0 {
        ready.push(0);
    }
    ready.extend((1..=n as usize).filter(|&j| indegree[j] == 0));
    let mut values = vec![0i64; n as usize + 1];
    let mut x_value = None;
    let mut rank = 0i64;
    let total = n as usize + usize::from(pin.is_none());
    // FIFO Kahn; fixed order keeps the output deterministic
    let mut head = 0;
    while head < ready.len() {
        let v = ready[head];
        head += 1;
        rank += 1;
        values[v] = 2 * rank;
        if v == x {
            x_value = Some(2 * rank);
            for l in 1..=n as usize {
                if x_into[l] {
                    indegree[l] -= 1;
                    if indegree[l] == 0 {
                        ready.push(l);
                    }
                }
            }
        }
        if v >= 1 {
            let mut m = 2 * v;
            while m <= n as usize {
                indegree[m] -= 1;
                if indegree[m] == 0 {
                    ready.push(m);
                }
                m += v;
            }
            if gt_into_x[v] {
                indegree[x] -= 1;
                if indegree[x] == 0 {
                    ready.push(x);
                }
            }
        }
    }
    if head < total {
        return WitnessResult::Infeasible {
            cycle: find_cycle(n, &indegree, &gt_into_x, &x_into, pin),
        };
    }
    let x_val = x_value.expect("probe node always emitted on success");
    WitnessResult::Feasible(WitnessTable {
        table: ConsistentTable { n, values },
        x: x_val,
        pinned: pin,
    })
}

/// Walks backwards through still-blocked nodes until one repeats.
/// Only called when Kahn stalled, so a cycle must exist.
fn find_cycle(
    n: u64,
    indegree: &[i64],
    gt_into_x: &[bool],
    x_into: &[bool],
    pin: Option<u64>,
) -> Vec<u64> {
    let x = pin.unwrap_or(0);
    let blocked: Vec<u64> = (0..=n).filter(|&v| indegree[v as usize] > 0).collect();
    let is_blocked = |v: u64| indegree[v as usize] > 0;
    // an in-neighbor of v that is itself blocked
    let pred = |v: u64| -> u64 {
        // divisibility predecessors
        if v >= 1 {
            for d in 1..v {
                if v % d == 0 && is_blocked(d) {
                    return d;
                }
            }
        }
        if v == x {
            for g in 1..=n {
                if gt_into_x[g as usize] && is_blocked(g) {
                    return g;
                }
            }
        }
        if v >= 1 && x_into[v as usize] && is_blocked(x) {
            return x;
        }
        unreachable!("blocked node without blocked predecessor")
    };
    let start = blocked[0];
    let mut seen = std::collections::HashMap::new();
    let mut path = vec![start];
    seen.insert(start, 0usize);
    loop {
        let next = pred(*path.last().unwrap());
        if let Some(&at) = seen.get(&next) {
            let mut cycle = path[at..].to_vec();
            cycle.reverse();
            return cycle;
        }
        seen.insert(next, path.len());
        path.push(next);
    }
}

/// What a finished adversary run claims. Adversaries never answer
/// `Eq`, so the only claim to audit is "not found".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    NotFound,
}

#[derive(Debug, Clone)]
pub struct Refutation {
    /// essential element never compared and never decided by closure
    pub pinned: u64,
    pub table: ConsistentTable,
    pub x: i64,
}

#[derive(Debug, Clone)]
pub enum RefuteOutcome {
    /// Every essential element was compared with `x` or decided by the
    /// transcript's closure; the claim stands.
    Confirmed,
    Refuted(Refutation),
}

/// Audits a "not found" claim: an essential element that was neither
/// queried nor decided can be pinned to equal `x`, producing a concrete
/// table on which the claimed answer is wrong.
pub fn refute_early_stop(
    n: u64,
    regime: Regime,
    transcript: &Transcript,
    _claim: Claim,
) -> RefuteOutcome {
    let constraints = TranscriptConstraints::from_transcript(transcript);
    let (below, above) = knowledge_closure(n, &constraints);
    let mut queried = vec![false; n as usize + 1];
    for &(q, _) in &transcript.entries {
        queried[q as usize] = true;
    }
    let essential = essential_set(n, regime);
    for &e in &essential.subscripts {
        if queried[e as usize] || below[e as usize] || above[e as usize] {
            continue;
        }
        match witness(n, &constraints, Some(e)) {
            WitnessResult::Feasible(w) => {
                w.check_against(&constraints);
                return RefuteOutcome::Refuted(Refutation {
                    pinned: e,
                    table: w.table,
                    x: w.x,
                });
            }
            WitnessResult::Infeasible { cycle } => {
                panic!("undecided element {e} not pinnable (cycle {cycle:?})")
            }
        }
    }
    RefuteOutcome::Confirmed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AdversarySession;
    use crate::search::{search_table, Algorithm, SearchOutcome};

    #[test]
    fn random_table_forced_relations_n4() {
        for seed in 0..5 {
            let t = random_table(4, seed);
            assert!(t.value(1) < t.value(2));
            assert!(t.value(2) < t.value(4));
            assert!(t.value(1) < t.value(3));
            t.check_consistency().unwrap();
        }
    }

    #[test]
    fn random_table_single_element() {
        let t = random_table(1, 0);
        assert_eq!(t.n, 1);
        t.check_consistency().unwrap();
    }

    #[test]
    fn seeds_vary_incomparable_order() {
        let a = random_table(100, 1);
        let b = random_table(100, 2);
        a.check_consistency().unwrap();
        b.check_consistency().unwrap();
        assert_ne!(a, b, "two seeds produced identical tables");
        // same seed reproduces
        assert_eq!(a, random_table(100, 1));
    }

    #[test]
    fn probe_values_cover_all_regions() {
        let t = random_table(10, 3);
        let probes = probe_values(&t);
        assert_eq!(probes.len(), 21);
        let members = probes
            .iter()
            .filter(|&&x| t.subscript_of_value(x).is_some())
            .count();
        assert_eq!(members, 10);
    }

    #[test]
    fn csv_round_trips_by_eye() {
        let t = random_table(3, 0);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("subscript,value"));
        for s in 1..=3u64 {
            assert_eq!(lines.next(), Some(format!("{},{}", s, t.value(s)).as_str()));
        }
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn witness_empty_constraints_with_pin() {
        let w = match witness(5, &TranscriptConstraints::default(), Some(3)) {
            WitnessResult::Feasible(w) => w,
            WitnessResult::Infeasible { cycle } => panic!("{cycle:?}"),
        };
        w.check_against(&TranscriptConstraints::default());
        assert_eq!(w.table.value(3), w.x);
    }

    #[test]
    fn witness_feasible_example_n4() {
        let c = TranscriptConstraints {
            gt: vec![1],
            lt: vec![4],
        };
        match witness(4, &c, Some(3)) {
            WitnessResult::Feasible(w) => {
                w.check_against(&c);
                assert!(w.table.value(1) < w.x);
                assert!(w.x < w.table.value(4));
                assert_eq!(w.table.value(3), w.x);
            }
            WitnessResult::Infeasible { cycle } => panic!("unexpected cycle {cycle:?}"),
        }
    }

    #[test]
    fn witness_infeasible_example_n4() {
        // x > a_2 forces x > a_1 via 1 | 2, so pinning x = a_1 cycles
        let c = TranscriptConstraints {
            gt: vec![2],
            lt: vec![],
        };
        match witness(4, &c, Some(1)) {
            WitnessResult::Infeasible { cycle } => {
                assert!(cycle.contains(&1) && cycle.contains(&2), "cycle {cycle:?}");
            }
            WitnessResult::Feasible(_) => panic!("expected infeasibility"),
        }
    }

    #[test]
    fn witness_rejects_pinning_a_queried_element() {
        let c = TranscriptConstraints {
            gt: vec![3],
            lt: vec![],
        };
        assert!(matches!(
            witness(4, &c, Some(3)),
            WitnessResult::Infeasible { .. }
        ));
    }

    #[test]
    fn unpinned_witness_value_not_in_table() {
        let c = TranscriptConstraints {
            gt: vec![1, 2],
            lt: vec![8, 9],
        };
        match witness(9, &c, None) {
            WitnessResult::Feasible(w) => {
                w.check_against(&c);
                assert_eq!(w.table.subscript_of_value(w.x), None);
            }
            WitnessResult::Infeasible { cycle } => panic!("{cycle:?}"),
        }
    }

    #[test]
    fn refute_empty_transcript_n1() {
        let out = refute_early_stop(1, Regime::Rs2, &Transcript::default(), Claim::NotFound);
        match out {
            RefuteOutcome::Refuted(r) => {
                assert_eq!(r.pinned, 1);
                assert_eq!(r.table.value(1), r.x);
            }
            RefuteOutcome::Confirmed => panic!("claim should be refuted"),
        }
    }

    #[test]
    fn refute_confirms_complete_run() {
        let mut session = AdversarySession::new(100, Regime::Rs2);
        let out = search_table(100, &mut session);
        assert!(!out.found);
        let r = refute_early_stop(100, Regime::Rs2, &session.transcript, Claim::NotFound);
        assert!(matches!(r, RefuteOutcome::Confirmed));
    }

    #[test]
    fn refute_catches_skipped_essential_element() {
        // run the real search, then drop every query on one essential
        // 2-unit element from the transcript
        let n = 100u64;
        let mut session = AdversarySession::new(n, Regime::Rs2);
        search_table(n, &mut session);
        let victim = *essential_set(n, Regime::Rs2)
            .subscripts
            .iter()
            .find(|&&e| {
                // a 2-unit member: an odd element of (n/4, n/2]
                e % 2 == 1 && 4 * e > n && 2 * e <= n
            })
            .unwrap();
        let mut crippled = session.transcript.clone();
        crippled.entries.retain(|&(q, _)| q != victim);
        match refute_early_stop(n, Regime::Rs2, &crippled, Claim::NotFound) {
            RefuteOutcome::Refuted(r) => {
                assert_eq!(r.pinned, victim);
                assert_eq!(r.table.value(victim), r.x);
                r.table.check_consistency().unwrap();
            }
            RefuteOutcome::Confirmed => panic!("skipping {victim} must be refuted"),
        }
    }

    #[test]
    fn every_duel_transcript_admits_a_witness() {
        for n in [1u64, 2, 16, 60, 250] {
            for regime in [Regime::Rs1, Regime::Rs2, Regime::Rs2Star] {
                for alg in [Algorithm::Chains, Algorithm::Table] {
                    let mut session = AdversarySession::new(n, regime);
                    let out: SearchOutcome = alg.run(n, &mut session);
                    assert!(!out.found);
                    let c = TranscriptConstraints::from_transcript(&session.transcript);
                    match witness(n, &c, None) {
                        WitnessResult::Feasible(w) => w.check_against(&c),
                        WitnessResult::Infeasible { cycle } => {
                            panic!("n={n} {regime:?} {alg:?}: cycle {cycle:?}")
                        }
                    }
                }
            }
        }
    }
}
