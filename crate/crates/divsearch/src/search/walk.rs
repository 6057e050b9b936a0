//! Exhaustive walk of a search procedure's answer tree.
//!
//! Re-runs the procedure once per root-to-leaf path, enumerating the
//! binary (`Lt`/`Gt`) answer strings in depth-first order. An `Eq`
//! answer would terminate the run at the same comparison the matching
//! binary path reaches, so binary paths alone determine the worst case.

use super::{Answer, Oracle, SearchOutcome};

/// Replays a fixed answer prefix, then extends it with `Gt`.
pub struct ScriptOracle {
    script: Vec<Answer>,
    pos: usize,
}

impl ScriptOracle {
    pub fn new(script: Vec<Answer>) -> Self {
        ScriptOracle { script, pos: 0 }
    }

    /// The script trimmed to what the run actually consumed.
    pub fn into_consumed(mut self) -> Vec<Answer> {
        self.script.truncate(self.pos);
        self.script
    }
}

impl Oracle for ScriptOracle {
    fn answer(&mut self, _subscript: u64) -> Answer {
        if self.pos == self.script.len() {
            self.script.push(Answer::Gt);
        }
        let a = self.script[self.pos];
        self.pos += 1;
        a
    }
}

/// Maximum comparisons the procedure spends over every possible
/// sequence of non-equal answers.
pub fn worst_case_comparisons<F>(mut run: F) -> u64
where
    F: FnMut(&mut ScriptOracle) -> SearchOutcome,
{
    let mut script: Vec<Answer> = Vec::new();
    let mut worst = 0;
    loop {
        let mut oracle = ScriptOracle::new(std::mem::take(&mut script));
        let out = run(&mut oracle);
        script = oracle.into_consumed();
        worst = worst.max(out.comparisons_used);
        // backtrack to the deepest branch still answered Gt
        loop {
            match script.pop() {
                Some(Answer::Gt) => {
                    script.push(Answer::Lt);
                    break;
                }
                Some(_) => continue,
                None => return worst,
            }
        }
    }
}
