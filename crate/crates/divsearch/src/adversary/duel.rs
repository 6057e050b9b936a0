//! Running a search algorithm against an adversary session end to end.

use super::{forced_comparison_count, AdversarySession, Regime};
use crate::search::{Algorithm, SearchOutcome, Transcript};
use crate::tablegen::{
    refute_early_stop, witness, Claim, RefuteOutcome, TranscriptConstraints, WitnessResult,
};

/// Summary of one completed duel.
#[derive(Debug, Clone)]
pub struct DuelReport {
    pub n: u64,
    pub regime: Regime,
    pub algorithm: Algorithm,
    pub comparisons: u64,
    pub outcome: SearchOutcome,
    pub transcript: Transcript,
    pub forced_lower_bound: u64,
}

/// Runs `algorithm` with the adversary as oracle and validates the run:
/// the transcript must admit a witness table, a correct algorithm must
/// survive the early-stop refuter, and the comparison count must meet
/// the forced lower bound (zero slack).
///
/// Panics if any of those checks fail — each would be a bug in either
/// the algorithm or the strategy.
pub fn duel(n: u64, regime: Regime, algorithm: Algorithm) -> DuelReport {
    let mut session = AdversarySession::new(n, regime);
    let outcome = algorithm.run(n, &mut session);
    let transcript = session.transcript.clone();
    assert!(
        !outcome.found,
        "adversaries never answer EQ, yet the algorithm claims a match"
    );
    assert_eq!(outcome.comparisons_used, transcript.len() as u64);

    let constraints = TranscriptConstraints::from_transcript(&transcript);
    match witness(n, &constraints, None) {
        WitnessResult::Feasible(w) => w.check_against(&constraints),
        WitnessResult::Infeasible { cycle } => {
            panic!("adversary transcript is self-contradictory: cycle {cycle:?}")
        }
    }
    match refute_early_stop(n, regime, &transcript, Claim::NotFound) {
        RefuteOutcome::Confirmed => {}
        RefuteOutcome::Refuted(r) => {
            panic!("algorithm skipped essential element {}", r.pinned)
        }
    }

    let forced_lower_bound = forced_comparison_count(n, regime);
    assert!(
        outcome.comparisons_used >= forced_lower_bound,
        "completed run used {} comparisons, below the forced bound {}",
        outcome.comparisons_used,
        forced_lower_bound
    );
    DuelReport {
        n,
        regime,
        algorithm,
        comparisons: outcome.comparisons_used,
        outcome,
        transcript,
        forced_lower_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duel_n1_single_comparison() {
        for regime in [Regime::Rs1, Regime::Rs2, Regime::Rs2Star] {
            let r = duel(1, regime, Algorithm::Chains);
            assert_eq!(r.comparisons, 1);
            assert!(!r.outcome.found);
        }
    }

    #[test]
    fn duel_rs1_table_meets_three_quarters() {
        let r = duel(100, Regime::Rs1, Algorithm::Table);
        assert!(r.comparisons >= 75, "comparisons {}", r.comparisons);
    }

    #[test]
    fn duels_meet_forced_bounds_and_budgets() {
        for n in [1u64, 4, 15, 16, 50, 100, 288, 777] {
            for regime in [Regime::Rs1, Regime::Rs2, Regime::Rs2Star] {
                for alg in [Algorithm::Chains, Algorithm::Table, Algorithm::GridBaseline] {
                    let r = duel(n, regime, alg);
                    assert!(
                        r.comparisons >= r.forced_lower_bound,
                        "n={n} {regime:?} {alg:?}"
                    );
                    assert!(r.comparisons <= alg.budget(n), "n={n} {regime:?} {alg:?}");
                }
            }
        }
    }

    #[test]
    fn duel_rs2star_at_scale() {
        let n = 100_000;
        let r = duel(n, Regime::Rs2Star, Algorithm::Table);
        assert!(r.comparisons >= forced_comparison_count(n, Regime::Rs2Star));
        assert!(r.comparisons <= crate::search::budget_s2(n));
    }
}
