//! Exhaustive reference enumeration: tests every consistent subset of the literal universe.

use crate::asp::{canonical_order, AnswerSet, AspProgram, LitId};
use crate::error::{Error, Result};

pub const ORACLE_MAX_LITERALS: usize = 20;

pub fn oracle_answer_sets(prog: &AspProgram) -> Result<Vec<AnswerSet>> {
    let n = prog.num_literals();
    if n > ORACLE_MAX_LITERALS {
        return Err(Error::UniverseTooLarge(n));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let set: Vec<LitId> = (0..n as LitId).filter(|&i| mask & (1 << i) != 0).collect();
        if prog.is_answer_set(&set) {
            out.push(AnswerSet(set));
        }
    }
    canonical_order(prog, &mut out);
    Ok(out)
}
