//! Strong bi-instantaneity: beyond a threshold length, every
//! admissible word `a` has a companion `c` that works as a future and
//! a past of `a` simultaneously, in the strong sense that `c a` is a
//! future of `a` accepted after every past, and `a c` is a past of `a`
//! accepted before every future. Both conditions reduce to context
//! transfer from `a` to `a c a`.

use crate::error::{Error, Result};
use crate::language::enumerate_words;
use crate::sofic::mappings::ContextOracle;

/// Outcome of a strong bi-instantaneity scan over `r..=max_len`.
#[derive(Debug, Clone)]
pub struct SbiVerdict {
    /// Context transfer was exact, not depth-bounded.
    pub exact: bool,
    pub r: usize,
    pub max_len: usize,
    pub ok: bool,
    /// One companion per scanned word, shortest then lexicographic.
    pub witnesses: Vec<(Vec<usize>, Vec<usize>)>,
    /// The first word with no companion up to the length cap.
    pub failing: Option<Vec<usize>>,
}

/// Scans all admissible words with length in `r..=max_len` for
/// companions, stopping at the first word without one. Companions are
/// capped at the length of the word they accompany. `budget` caps the
/// total number of candidate words examined.
pub fn strong_bi_check(
    oracle: &ContextOracle,
    r: usize,
    max_len: usize,
    budget: usize,
) -> Result<SbiVerdict> {
    let lang = oracle.language();
    let lo = r.max(1);
    let mut verdict = SbiVerdict {
        exact: oracle.is_exact(),
        r,
        max_len,
        ok: true,
        witnesses: Vec::new(),
        failing: None,
    };
    let mut spent = 0usize;
    for a in enumerate_words(lang, lo, max_len, budget)? {
        let mut found = None;
        // grow candidates rightward, pruning on admissibility of a c
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        'search: for _ in 0..a.len() {
            let mut next = Vec::new();
            for c in &frontier {
                for s in 0..lang.symbol_count() {
                    spent += 1;
                    if spent > budget {
                        return Err(Error::budget("companion candidates", budget as u64));
                    }
                    let mut c2 = c.clone();
                    c2.push(s);
                    let mut ac = a.clone();
                    ac.extend_from_slice(&c2);
                    if !lang.contains(&ac)? {
                        continue;
                    }
                    let mut ca = c2.clone();
                    ca.extend_from_slice(&a);
                    if !lang.contains(&ca)? {
                        next.push(c2);
                        continue;
                    }
                    let mut aca = ac.clone();
                    aca.extend_from_slice(&a);
                    if oracle.pasts_transfer(&a, &aca)? && oracle.futures_transfer(&a, &aca)? {
                        found = Some(c2);
                        break 'search;
                    }
                    next.push(c2);
                }
            }
            frontier = next;
        }
        match found {
            Some(c) => verdict.witnesses.push((a, c)),
            None => {
                verdict.ok = false;
                verdict.failing = Some(a);
                break;
            }
        }
    }
    Ok(verdict)
}
