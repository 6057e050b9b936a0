//! Essential-element sets and forced-comparison counting.
//!
//! Under a fixed strategy, an element of a unit that no element outside
//! its unit can ever cut is *essential*: any correct search must spend
//! a comparison on it (or on enough of its unit, for special units).
//! The per-row tally — 1 for a one-element row's unit, 2 for any other
//! general unit, 3 for a special unit — is the strategy's certified
//! lower bound on comparisons.

use super::{Direction, Regime, StrategyTable};
use crate::divposet::{layer_row_lens, UnitClass};
use serde::Serialize;

/// The essential elements of `P_n` under a regime.
#[derive(Debug, Clone, Serialize)]
pub struct EssentialSet {
    pub regime: Regime,
    pub subscripts: Vec<u64>,
    #[serde(skip)]
    mask: Vec<bool>,
}

impl EssentialSet {
    pub fn contains(&self, j: u64) -> bool {
        self.mask[j as usize]
    }

    pub fn len(&self) -> usize {
        self.subscripts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subscripts.is_empty()
    }
}

/// Positions within a unit that are essential, by class.
fn essential_positions(class: UnitClass) -> &'static [usize] {
    match class {
        UnitClass::U1 => &[0],
        UnitClass::U2 => &[0, 1],
        UnitClass::U31 => &[0, 1],
        UnitClass::U32 => &[1, 2],
        UnitClass::U4General => &[1, 2],
        // every member of a special unit
        _ => &[0, 1, 2, 3],
    }
}

pub fn essential_set(n: u64, regime: Regime) -> EssentialSet {
    essential_set_of(&StrategyTable::new(n, regime))
}

pub(crate) fn essential_set_of(strategy: &StrategyTable) -> EssentialSet {
    let mut mask = vec![false; strategy.n as usize + 1];
    for unit in &strategy.units {
        for &pos in essential_positions(unit.class) {
            mask[unit.members[pos] as usize] = true;
        }
    }
    let subscripts = (1..=strategy.n).filter(|&j| mask[j as usize]).collect();
    EssentialSet {
        regime: strategy.regime,
        subscripts,
        mask,
    }
}

/// An essential element reachable by a cut from outside its unit —
/// a counterexample to the strategy's lower-bound argument. Expected
/// never to exist for the shipped strategies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutViolation {
    pub essential: u64,
    pub cutter: u64,
    /// true when the cutter answered `x > a_cutter` (cutting divisors)
    pub cutter_answers_gt: bool,
}

/// Checks that nothing outside a unit can cut any of its essential
/// members, over every direction the strategy might ever answer with.
pub fn verify_essentiality(n: u64, regime: Regime) -> Vec<CutViolation> {
    verify_strategy_essentiality(&StrategyTable::new(n, regime))
}

/// Same check against an explicit (possibly mutated) strategy table.
pub fn verify_strategy_essentiality(strategy: &StrategyTable) -> Vec<CutViolation> {
    let n = strategy.n;
    let essential = essential_set_of(strategy);
    let mut violations = Vec::new();
    // every divisor pair (j, i = q·j) once
    for j in 1..=n {
        let mut i = 2 * j;
        while i <= n {
            let same_unit = match (strategy.unit_index_of(j), strategy.unit_index_of(i)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            };
            if !same_unit {
                // i answering GT cuts its divisor j
                if essential.contains(j) && strategy.possibility_set(i).contains(&Direction::LeftUp)
                {
                    violations.push(CutViolation {
                        essential: j,
                        cutter: i,
                        cutter_answers_gt: true,
                    });
                }
                // j answering LT cuts its multiple i
                if essential.contains(i)
                    && strategy
                        .possibility_set(j)
                        .contains(&Direction::RightBottom)
                {
                    violations.push(CutViolation {
                        essential: i,
                        cutter: j,
                        cutter_answers_gt: false,
                    });
                }
            }
            i += j;
        }
    }
    violations
}

/// The number of comparisons the regime certifiably forces on any
/// correct algorithm: per row, 1 for a single-element unit, 3 for a
/// special unit, 2 otherwise (`RS1`: every subscript above `n/4`).
pub fn forced_comparison_count(n: u64, regime: Regime) -> u64 {
    assert!(n >= 1);
    let Some(unit_regime) = regime.unit_regime() else {
        return n - n / 4;
    };
    let mut total = 0u64;
    let mut b = 1u64;
    while b <= n {
        if b % 3 != 0 {
            let lens = layer_row_lens(b, n);
            for (s, &len) in lens.iter().enumerate() {
                total += match len {
                    1 => 1,
                    _ if len >= 4
                        && crate::divposet::four_unit_class(&lens, s, b, unit_regime)
                            .is_special() =>
                    {
                        3
                    }
                    _ => 2,
                };
            }
        }
        b += 2;
    }
    total
}
