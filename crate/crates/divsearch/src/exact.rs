//! Brute-force minimax value of the search game for small `n`.
//!
//! The game state records, for every subscript, whether `a_i` is known
//! to lie below `x`, above `x`, or neither, closed under divisibility
//! (below propagates to divisors, above to multiples). The searcher
//! picks a subscript still unknown; the adversary picks any of the
//! three answers (equality ends the game at once). `τ(n)` is the value
//! of the all-unknown state, memoized on the packed status vector.

use crate::tablegen::ConsistentTable;
use std::collections::HashMap;

/// Default cap on `n`; the state space grows as `3^n`.
pub const DEFAULT_CAP: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("n = {n} exceeds the solver cap {cap}; raise the cap explicitly if intended")]
    AboveCap { n: u64, cap: u64 },
}

const UNKNOWN: u8 = 0;
const BELOW: u8 = 1; // a_i < x
const ABOVE: u8 = 2; // a_i > x

/// Per-subscript knowledge, canonical after divisibility closure.
#[derive(Debug, Clone, PartialEq, Eq)]
struct KnowledgeState {
    status: Vec<u8>, // index by subscript, slot 0 unused
}

impl KnowledgeState {
    fn fresh(n: u64) -> Self {
        KnowledgeState {
            status: vec![UNKNOWN; n as usize + 1],
        }
    }

    fn n(&self) -> u64 {
        self.status.len() as u64 - 1
    }

    /// Packed 2-bit-per-element key; valid for `n ≤ 32`.
    fn key(&self) -> u64 {
        self.status[1..]
            .iter()
            .enumerate()
            .fold(0u64, |k, (i, &s)| k | (s as u64) << (2 * i))
    }

    fn unknowns(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.n()).filter(|&i| self.status[i as usize] == UNKNOWN)
    }

    fn decided(&self) -> bool {
        self.status[1..].iter().all(|&s| s != UNKNOWN)
    }

    /// Applies a non-equal answer on `q` and closes under cuts.
    fn after(&self, q: u64, below: bool) -> Self {
        let mut next = self.clone();
        let n = self.n();
        if below {
            // every divisor of q is below x
            for d in 1..=q {
                if q % d == 0 {
                    debug_assert_ne!(next.status[d as usize], ABOVE, "inconsistent answer");
                    next.status[d as usize] = BELOW;
                }
            }
        } else {
            let mut m = q;
            while m <= n {
                debug_assert_ne!(next.status[m as usize], BELOW, "inconsistent answer");
                next.status[m as usize] = ABOVE;
                m += q;
            }
        }
        next
    }
}

/// Minimax comparison count to decide membership in `A_n`.
pub fn tau_exact(n: u64) -> Result<u32, ExactError> {
    tau_exact_capped(n, DEFAULT_CAP)
}

pub fn tau_exact_capped(n: u64, cap: u64) -> Result<u32, ExactError> {
    assert!(n >= 1);
    if n > cap {
        return Err(ExactError::AboveCap { n, cap });
    }
    let mut memo = HashMap::new();
    Ok(tau_value(&KnowledgeState::fresh(n), &mut memo))
}

fn tau_value(state: &KnowledgeState, memo: &mut HashMap<u64, u32>) -> u32 {
    if state.decided() {
        return 0;
    }
    let key = state.key();
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut best = u32::MAX;
    for q in state.unknowns().collect::<Vec<_>>() {
        // the equality answer costs 1 + 0 and never exceeds the others
        let worst =
            tau_value(&state.after(q, true), memo).max(tau_value(&state.after(q, false), memo));
        best = best.min(1 + worst);
    }
    memo.insert(key, best);
    best
}

/// Same value without memoization; exponential, for cross-checking.
pub fn tau_exact_nomemo(n: u64) -> u32 {
    fn go(state: &KnowledgeState) -> u32 {
        if state.decided() {
            return 0;
        }
        state
            .unknowns()
            .collect::<Vec<_>>()
            .into_iter()
            .map(|q| 1 + go(&state.after(q, true)).max(go(&state.after(q, false))))
            .min()
            .unwrap()
    }
    go(&KnowledgeState::fresh(n))
}

/// One optimal strategy as a ternary decision tree. The equality branch
/// of every query node is the `FOUND` verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionNode {
    NotFound,
    Query {
        q: u64,
        lt: Box<DecisionNode>,
        gt: Box<DecisionNode>,
    },
}

impl DecisionNode {
    /// Maximum comparisons along any path.
    pub fn depth(&self) -> u32 {
        match self {
            DecisionNode::NotFound => 0,
            DecisionNode::Query { lt, gt, .. } => 1 + lt.depth().max(gt.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            DecisionNode::NotFound => 1,
            DecisionNode::Query { lt, gt, .. } => 1 + lt.node_count() + gt.node_count(),
        }
    }

    /// Runs the strategy against a concrete table; `true` means the
    /// tree claims `x` is present.
    pub fn replay(&self, table: &ConsistentTable, x: i64) -> bool {
        let mut node = self;
        loop {
            match node {
                DecisionNode::NotFound => return false,
                DecisionNode::Query { q, lt, gt } => match x.cmp(&table.value(*q)) {
                    std::cmp::Ordering::Equal => return true,
                    std::cmp::Ordering::Less => node = lt,
                    std::cmp::Ordering::Greater => node = gt,
                },
            }
        }
    }

    /// JSON per the export schema:
    /// `{"q": 2, "lt": "NOT_FOUND", "eq": "FOUND", "gt": …}`.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            DecisionNode::NotFound => serde_json::Value::String("NOT_FOUND".into()),
            DecisionNode::Query { q, lt, gt } => serde_json::json!({
                "q": q,
                "lt": lt.to_json(),
                "eq": "FOUND",
                "gt": gt.to_json(),
            }),
        }
    }
}

/// Builds an optimal decision tree of depth exactly `tau_exact(n)`,
/// breaking ties toward the smallest subscript.
pub fn optimal_tree(n: u64) -> Result<DecisionNode, ExactError> {
    optimal_tree_capped(n, DEFAULT_CAP)
}

pub fn optimal_tree_capped(n: u64, cap: u64) -> Result<DecisionNode, ExactError> {
    assert!(n >= 1);
    if n > cap {
        return Err(ExactError::AboveCap { n, cap });
    }
    let mut memo = HashMap::new();
    Ok(build_tree(&KnowledgeState::fresh(n), &mut memo))
}

fn build_tree(state: &KnowledgeState, memo: &mut HashMap<u64, u32>) -> DecisionNode {
    if state.decided() {
        return DecisionNode::NotFound;
    }
    let mut best: Option<(u32, u64)> = None;
    for q in state.unknowns().collect::<Vec<_>>() {
        let worst =
            tau_value(&state.after(q, true), memo).max(tau_value(&state.after(q, false), memo));
        if best.is_none_or(|(b, _)| 1 + worst < b) {
            best = Some((1 + worst, q));
        }
    }
    let (_, q) = best.unwrap();
    DecisionNode::Query {
        q,
        lt: Box::new(build_tree(&state.after(q, false), memo)),
        gt: Box::new(build_tree(&state.after(q, true), memo)),
    }
}
