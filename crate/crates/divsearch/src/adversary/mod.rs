//! Adversarial response strategies and the lower-bound machinery.
//!
//! An adversary answers comparisons `x : a_i` without committing to a
//! table, constrained only by having to stay consistent with *some*
//! consistent table. Three strategies are implemented:
//!
//! - `RS1` answers `x > a_i` for `i ≤ n/2` and `x < a_i` above, forcing
//!   one comparison per element with subscript above `n/4`;
//! - `RS2` keeps the same static per-unit pattern but answers the four
//!   members of each *special* unit (the 4-unit of a 9-element layer)
//!   adaptively, forcing a third comparison there;
//! - `RS2*` is `RS2` with the special 4-units re-partitioned into three
//!   refined classes.
//!
//! Directions: answering `x > a_i` cuts *to the left up* (every divisor
//! of `i` is now known smaller than `x`), answering `x < a_i` cuts *to
//! the right bottom* (every multiple is known larger). An element of a
//! unit that no element outside the unit can cut is *essential*;
//! [`verify_essentiality`] replays the case analysis computationally.

mod duel;
mod essential;

pub use duel::{duel, DuelReport};
pub use essential::{
    essential_set, forced_comparison_count, verify_essentiality, verify_strategy_essentiality,
    CutViolation, EssentialSet,
};

use crate::divposet::{
    classify_units, layer_decomposition, layer_grid, layer_row_lens, UnitClass, UnitDescriptor,
    UnitRegime,
};
use crate::search::{Answer, Oracle, Transcript};
use serde::Serialize;

/// Response strategy identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    Rs1,
    Rs2,
    Rs2Star,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Rs1 => "rs1",
            Regime::Rs2 => "rs2",
            Regime::Rs2Star => "rs2star",
        }
    }

    pub fn unit_regime(self) -> Option<UnitRegime> {
        match self {
            Regime::Rs1 => None,
            Regime::Rs2 => Some(UnitRegime::Rs2),
            Regime::Rs2Star => Some(UnitRegime::Rs2Star),
        }
    }
}

/// Cut direction of an answered comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Answer `x > a_i`; the proper divisors of `i` are cut.
    LeftUp,
    /// Answer `x < a_i`; the proper multiples of `i` are cut.
    RightBottom,
}

impl Direction {
    pub fn answer(self) -> Answer {
        match self {
            Direction::LeftUp => Answer::Gt,
            Direction::RightBottom => Answer::Lt,
        }
    }
}

/// Elements eliminated from equality candidacy when `a_i` answers in
/// direction `d`.
pub fn cut_set(i: u64, d: Direction, n: u64) -> Vec<u64> {
    assert!(i >= 1 && i <= n);
    match d {
        Direction::LeftUp => (1..i).filter(|k| i % k == 0).collect(),
        Direction::RightBottom => (2..=n / i).map(|q| q * i).collect(),
    }
}

/// First-probe answers for a special unit's members, and the fixed
/// answers for the remaining members once the first probe happened.
const SPECIAL_FRESH: [Answer; 4] = [Answer::Gt, Answer::Gt, Answer::Lt, Answer::Lt];
const SPECIAL_AFTER: [[Answer; 4]; 4] = [
    // first probe on member 1: rest follow {2nd ⌟, ⌜3rd, ⌜4th}
    [Answer::Gt, Answer::Gt, Answer::Lt, Answer::Lt],
    // first probe on member 2: 1st already below x, rest {3rd ⌟, ⌜4th}
    [Answer::Gt, Answer::Gt, Answer::Gt, Answer::Lt],
    // first probe on member 3: 4th already above x, rest {1st ⌟, ⌜2nd}
    [Answer::Gt, Answer::Lt, Answer::Lt, Answer::Lt],
    // first probe on member 4: rest {1st ⌟, 2nd ⌟, ⌜3rd}
    [Answer::Gt, Answer::Gt, Answer::Lt, Answer::Lt],
];

/// Directions a member of a special unit may ever answer with, by
/// member position: `{a⌟, ⌜a⌟, ⌜a⌟, ⌜a}`.
const SPECIAL_POSSIBILITY: [&[Direction]; 4] = [
    &[Direction::LeftUp],
    &[Direction::LeftUp, Direction::RightBottom],
    &[Direction::LeftUp, Direction::RightBottom],
    &[Direction::RightBottom],
];

fn static_directions(class: UnitClass) -> Option<&'static [Direction]> {
    use Direction::{LeftUp as L, RightBottom as R};
    match class {
        UnitClass::U1 => Some(&[R]),
        UnitClass::U2 => Some(&[L, R]),
        UnitClass::U31 => Some(&[L, R, R]),
        UnitClass::U32 => Some(&[L, L, R]),
        UnitClass::U4General => Some(&[L, L, R, R]),
        _ => None, // special units answer adaptively
    }
}

/// Per-`n` static strategy data shared by sessions: the unit partition,
/// member positions, and which units are special.
#[derive(Debug, Clone)]
pub struct StrategyTable {
    pub n: u64,
    pub regime: Regime,
    pub units: Vec<UnitDescriptor>,
    /// subscript → unit index + 1, 0 when not in a unit
    unit_of: Vec<u32>,
    /// subscript → 0-based position within its unit
    member_pos: Vec<u8>,
    /// unit index → index into `specials`, for special units
    special_of_unit: Vec<Option<u32>>,
    specials: Vec<[u64; 4]>,
}

impl StrategyTable {
    pub fn new(n: u64, regime: Regime) -> Self {
        assert!(n >= 1);
        let units: Vec<UnitDescriptor> = match regime.unit_regime() {
            Some(ur) => layer_decomposition(n)
                .iter()
                .flat_map(|g| classify_units(g, ur))
                .collect(),
            None => rs1_units(n),
        };
        let mut table = StrategyTable {
            n,
            regime,
            units,
            unit_of: Vec::new(),
            member_pos: Vec::new(),
            special_of_unit: Vec::new(),
            specials: Vec::new(),
        };
        table.rebuild_index();
        table
    }

    /// Recomputes the derived lookup arrays from `self.units`. Used by
    /// the constructor and by tests that plant a mutated classification.
    pub(crate) fn rebuild_index(&mut self) {
        let n = self.n as usize;
        self.unit_of = vec![0; n + 1];
        self.member_pos = vec![0; n + 1];
        self.special_of_unit = vec![None; self.units.len()];
        self.specials.clear();
        for (u, unit) in self.units.iter().enumerate() {
            for (k, &m) in unit.members.iter().enumerate() {
                self.unit_of[m as usize] = u as u32 + 1;
                self.member_pos[m as usize] = k as u8;
            }
            if unit.class.is_special() {
                debug_assert_eq!(unit.members.len(), 4);
                let mut four = [0u64; 4];
                four.copy_from_slice(&unit.members);
                self.special_of_unit[u] = Some(self.specials.len() as u32);
                self.specials.push(four);
            }
        }
    }

    /// Index into `units` for the unit containing `q`, if any.
    pub fn unit_index_of(&self, q: u64) -> Option<usize> {
        match self.unit_of[q as usize] {
            0 => None,
            u => Some(u as usize - 1),
        }
    }

    /// Directions `q` may ever answer with under this strategy.
    pub fn possibility_set(&self, q: u64) -> &'static [Direction] {
        match self.unit_index_of(q) {
            None => &[Direction::LeftUp],
            Some(u) => {
                let pos = self.member_pos[q as usize] as usize;
                match static_directions(self.units[u].class) {
                    Some(dirs) => &dirs[pos..=pos],
                    None => SPECIAL_POSSIBILITY[pos],
                }
            }
        }
    }

    pub fn special_unit_count(&self) -> usize {
        self.specials.len()
    }
}

/// Units as `RS1` picks them: the last `min(2, len)` elements of every
/// row, so exactly the subscripts above `n/4`.
fn rs1_units(n: u64) -> Vec<UnitDescriptor> {
    let mut units = Vec::new();
    let mut b = 1u64;
    while b <= n {
        if b % 2 != 0 && b % 3 != 0 {
            let lens = layer_row_lens(b, n);
            let mut p = b;
            for (s, &len) in lens.iter().enumerate() {
                let last = p << (len - 1);
                let (members, class) = if len == 1 {
                    (vec![last], UnitClass::U1)
                } else {
                    (vec![last / 2, last], UnitClass::U2)
                };
                units.push(UnitDescriptor {
                    layer_base: b,
                    row_index: s,
                    members,
                    class,
                });
                p *= 3;
            }
        }
        b += 2;
    }
    units
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Fresh,
    AfterFirst(u8),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RespondError {
    #[error("subscript {0} was already queried in this session")]
    RepeatedQuery(u64),
    #[error("subscript {0} out of range for n = {1}")]
    OutOfRange(u64, u64),
}

/// One adversary game: strategy plus per-special-unit adaptive state
/// and the transcript of everything answered so far.
#[derive(Debug, Clone)]
pub struct AdversarySession {
    strategy: StrategyTable,
    phase: Vec<Phase>,
    asked: Vec<bool>,
    pub transcript: Transcript,
}

impl AdversarySession {
    pub fn new(n: u64, regime: Regime) -> Self {
        Self::with_strategy(StrategyTable::new(n, regime))
    }

    pub fn with_strategy(strategy: StrategyTable) -> Self {
        let phase = vec![Phase::Fresh; strategy.specials.len()];
        let asked = vec![false; strategy.n as usize + 1];
        AdversarySession {
            strategy,
            phase,
            asked,
            transcript: Transcript::default(),
        }
    }

    pub fn strategy(&self) -> &StrategyTable {
        &self.strategy
    }

    /// Answers one comparison. Never returns `Eq`.
    pub fn respond(&mut self, q: u64) -> Result<Answer, RespondError> {
        let st = &self.strategy;
        if q == 0 || q > st.n {
            return Err(RespondError::OutOfRange(q, st.n));
        }
        if self.asked[q as usize] {
            return Err(RespondError::RepeatedQuery(q));
        }
        self.asked[q as usize] = true;
        let answer = match st.unit_index_of(q) {
            None => Answer::Gt,
            Some(u) => {
                let pos = st.member_pos[q as usize] as usize;
                match st.special_of_unit[u] {
                    None => static_directions(st.units[u].class).unwrap()[pos].answer(),
                    Some(sid) => {
                        let sid = sid as usize;
                        match self.phase[sid] {
                            Phase::Fresh => {
                                self.phase[sid] = Phase::AfterFirst(pos as u8);
                                SPECIAL_FRESH[pos]
                            }
                            Phase::AfterFirst(first) => SPECIAL_AFTER[first as usize][pos],
                        }
                    }
                }
            }
        };
        self.transcript.entries.push((q, answer));
        Ok(answer)
    }
}

impl Oracle for AdversarySession {
    fn answer(&mut self, subscript: u64) -> Answer {
        self.respond(subscript)
            .expect("search algorithm violated the session contract")
    }
}

/// Convenience for tests and the CLI: the special-unit grid of the
/// layer with the given base.
pub fn special_layer_members(base: u64, n: u64) -> [u64; 4] {
    let g = layer_grid(base, n);
    let row = &g.rows[0];
    let mut four = [0u64; 4];
    four.copy_from_slice(&row[row.len() - 4..]);
    four
}
