//! Bounded searches for word pairs that bounded invariants cannot
//! tell apart while richer ones can.
//!
//! Both searches walk candidate pairs (a, b) of language members in a
//! fixed order: words sorted by length then by symbols, pairs by their
//! positions in that list. A pair never consists of the same word
//! twice. The searches differ in which invariants they require to agree
//! and which to differ:
//!
//! * [`property_b_witness_search`] looks for pairs whose framed
//!   contexts agree: a and b share their short ends and some common
//!   one-symbol omega extensions, every common frame x- _ x+ built from
//!   those extensions has equal joint contexts at the comparison depth,
//!   yet a bounded joint window separates the bare words.
//! * [`property_c_witness_search`] looks for pairs separated only
//!   jointly: equal short ends, nonempty common omega extensions, equal
//!   left and equal right extension sets to the comparison depth, yet
//!   some window (u, v) with material on both sides tells them apart.
//!
//! Separating windows are scanned in ascending total length and always
//! keep a thin side: min(|u|, |v|) never exceeds the `narrow` bound.
//! That geometry matches how a short probe on one side pairs with a
//! long completion on the other, and it keeps the scan affordable; a
//! pair separated only by windows that are deep on both sides at once
//! is out of scope at the configured bounds. The query budget caps the
//! membership tests spent in the scans; exceeding it raises the budget
//! error rather than returning a partial verdict.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::language::{
    enumerate_words, gamma_minus, gamma_pairs, gamma_plus, omega_minus, omega_plus, Language,
};

/// Bounds shared by the witness searches.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SearchBounds {
    /// Longest candidate word enumerated.
    pub max_len: usize,
    /// Length of the shared prefix and suffix required of a pair.
    pub end_len: usize,
    /// Depth of the context comparisons (one-sided sets for the joint
    /// search, framed joint sets for the framed search).
    pub depth: usize,
    /// Largest |u| + |v| over separating windows.
    pub joint_radius: usize,
    /// Largest size of the thinner side of a separating window.
    pub narrow: usize,
    /// Cap on membership queries spent while scanning for separators.
    pub budget: usize,
}

/// A pair of words agreeing on the bounded invariants of the search
/// that found it, together with the joint window separating them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// (u, v) admitting exactly one of the pair: u a v is in the
    /// language and u b v is not, or the other way round.
    pub separator: (Vec<usize>, Vec<usize>),
}

struct Meter {
    left: usize,
    cap: usize,
}

impl Meter {
    fn new(cap: usize) -> Meter {
        Meter { left: cap, cap }
    }

    fn charge(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::budget("separator membership queries", self.cap as u64));
        }
        self.left -= 1;
        Ok(())
    }
}

fn ends_agree(a: &[usize], b: &[usize], end_len: usize) -> bool {
    a.len() >= end_len
        && b.len() >= end_len
        && a[..end_len] == b[..end_len]
        && a[a.len() - end_len..] == b[b.len() - end_len..]
}

/// First separating window in ascending total length, `None` if the
/// pair looks identical through every window within the bounds. With
/// `require_both_sides`, windows with an empty side are skipped, so
/// purely one-sided differences do not count.
fn joint_separator(
    lang: &dyn Language,
    a: &[usize],
    b: &[usize],
    bounds: &SearchBounds,
    require_both_sides: bool,
    meter: &mut Meter,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let min_side = usize::from(require_both_sides);
    for total in (1 + min_side)..=bounds.joint_radius {
        for lu in min_side..=(total - min_side) {
            let lv = total - lu;
            if lu.min(lv) > bounds.narrow {
                continue;
            }
            let mut u = Vec::new();
            if let Some(found) = grow_left(lang, a, b, lu, lv, &mut u, meter)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

fn grow_left(
    lang: &dyn Language,
    a: &[usize],
    b: &[usize],
    lu: usize,
    lv: usize,
    u: &mut Vec<usize>,
    meter: &mut Meter,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if u.len() == lu {
        let mut v = Vec::new();
        return grow_right(lang, a, b, u, lv, &mut v, meter);
    }
    for s in 0..lang.symbol_count() {
        u.insert(0, s);
        meter.charge()?;
        meter.charge()?;
        let live = lang.contains(&join(u, a, &[]))? || lang.contains(&join(u, b, &[]))?;
        if live {
            if let Some(found) = grow_left(lang, a, b, lu, lv, u, meter)? {
                return Ok(Some(found));
            }
        }
        u.remove(0);
    }
    Ok(None)
}

fn grow_right(
    lang: &dyn Language,
    a: &[usize],
    b: &[usize],
    u: &[usize],
    lv: usize,
    v: &mut Vec<usize>,
    meter: &mut Meter,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    meter.charge()?;
    meter.charge()?;
    let in_a = lang.contains(&join(u, a, v))?;
    let in_b = lang.contains(&join(u, b, v))?;
    if v.len() == lv {
        if in_a != in_b {
            return Ok(Some((u.to_vec(), v.clone())));
        }
        return Ok(None);
    }
    if !in_a && !in_b {
        return Ok(None);
    }
    for s in 0..lang.symbol_count() {
        v.push(s);
        if let Some(found) = grow_right(lang, a, b, u, lv, v, meter)? {
            return Ok(Some(found));
        }
        v.pop();
    }
    Ok(None)
}

fn join(u: &[usize], w: &[usize], v: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(u.len() + w.len() + v.len());
    out.extend_from_slice(u);
    out.extend_from_slice(w);
    out.extend_from_slice(v);
    out
}

/// Searches for a pair whose every common frame agrees while the bare
/// words differ. Candidates share their ends and at least one common
/// one-symbol omega extension on each side (pasts and futures filtered
/// through windows of the end length). For a candidate pair separated
/// within the window bounds, every frame x- _ x+ with x- from the
/// shared omega pasts and x+ from the shared omega futures must give
/// equal joint context sets at the comparison depth; the first pair
/// passing all of it is returned.
pub fn property_b_witness_search(
    lang: &dyn Language,
    bounds: &SearchBounds,
) -> Result<Option<SeparationWitness>> {
    let words = enumerate_words(lang, 1, bounds.max_len, bounds.budget)?;
    let mut meter = Meter::new(bounds.budget);
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let (a, b) = (&words[i], &words[j]);
            if !ends_agree(a, b, bounds.end_len) {
                continue;
            }
            let futures: Vec<Vec<usize>> = omega_plus(lang, a, 1, bounds.end_len)?
                .intersection(&omega_plus(lang, b, 1, bounds.end_len)?)
                .cloned()
                .collect();
            if futures.is_empty() {
                continue;
            }
            let pasts: Vec<Vec<usize>> = omega_minus(lang, a, 1, bounds.end_len)?
                .intersection(&omega_minus(lang, b, 1, bounds.end_len)?)
                .cloned()
                .collect();
            if pasts.is_empty() {
                continue;
            }
            let Some(separator) = joint_separator(lang, a, b, bounds, false, &mut meter)? else {
                continue;
            };
            let mut all_frames_agree = true;
            'frames: for x_minus in &pasts {
                for x_plus in &futures {
                    let fa = gamma_pairs(lang, &join(x_minus, a, x_plus), bounds.depth)?;
                    let fb = gamma_pairs(lang, &join(x_minus, b, x_plus), bounds.depth)?;
                    if fa != fb {
                        all_frames_agree = false;
                        break 'frames;
                    }
                }
            }
            if all_frames_agree {
                return Ok(Some(SeparationWitness { a: a.clone(), b: b.clone(), separator }));
            }
        }
    }
    Ok(None)
}

/// Searches for a pair that one-sided context data cannot separate
/// while a joint window can. Candidates share their ends, have
/// nonempty common omega extensions on both sides, and have equal left
/// and equal right extension sets to the comparison depth; the pair is
/// a witness when some window (u, v) with nonempty u and v within the
/// bounds admits one word and rejects the other.
pub fn property_c_witness_search(
    lang: &dyn Language,
    bounds: &SearchBounds,
) -> Result<Option<SeparationWitness>> {
    let words = enumerate_words(lang, 1, bounds.max_len, bounds.budget)?;
    let mut meter = Meter::new(bounds.budget);
    let mut lefts: Vec<Option<Vec<Vec<usize>>>> = vec![None; words.len()];
    let mut rights: Vec<Option<Vec<Vec<usize>>>> = vec![None; words.len()];
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if !ends_agree(&words[i], &words[j], bounds.end_len) {
                continue;
            }
            if lefts[i].is_none() {
                lefts[i] = Some(gamma_minus(lang, &words[i], bounds.depth)?);
                rights[i] = Some(gamma_plus(lang, &words[i], bounds.depth)?);
            }
            if lefts[j].is_none() {
                lefts[j] = Some(gamma_minus(lang, &words[j], bounds.depth)?);
                rights[j] = Some(gamma_plus(lang, &words[j], bounds.depth)?);
            }
            if lefts[i] != lefts[j] || rights[i] != rights[j] {
                continue;
            }
            let (a, b) = (&words[i], &words[j]);
            let shared_future = omega_plus(lang, a, 1, bounds.end_len)?
                .intersection(&omega_plus(lang, b, 1, bounds.end_len)?)
                .next()
                .is_some();
            let shared_past = omega_minus(lang, a, 1, bounds.end_len)?
                .intersection(&omega_minus(lang, b, 1, bounds.end_len)?)
                .next()
                .is_some();
            if !shared_future || !shared_past {
                continue;
            }
            if let Some(separator) = joint_separator(lang, a, b, bounds, true, &mut meter)? {
                return Ok(Some(SeparationWitness { a: a.clone(), b: b.clone(), separator }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::language::word_to_names;
    use crate::twisted::{TwistConfig, TwistedFamily};

    #[test]
    fn framed_search_reports_none_on_bracket_fixtures() {
        let bounds = SearchBounds {
            max_len: 3,
            end_len: 1,
            depth: 2,
            joint_radius: 4,
            narrow: 2,
            budget: 2_000_000,
        };
        let dyck = fixtures::dyck_identity(2);
        assert_eq!(property_b_witness_search(&dyck, &bounds).unwrap(), None);
        let motzkin = fixtures::motzkin(2);
        assert_eq!(property_b_witness_search(&motzkin, &bounds).unwrap(), None);
    }

    #[test]
    fn framed_search_reports_none_on_the_twisted_family() {
        let fam = TwistedFamily::new(TwistConfig::double_loop(12));
        let bounds = SearchBounds {
            max_len: 2,
            end_len: 1,
            depth: 2,
            joint_radius: 4,
            narrow: 1,
            budget: 4_000_000,
        };
        assert_eq!(property_b_witness_search(&fam, &bounds).unwrap(), None);
    }

    #[test]
    fn joint_search_reports_none_on_bracket_fixtures() {
        let bounds = SearchBounds {
            max_len: 3,
            end_len: 0,
            depth: 3,
            joint_radius: 4,
            narrow: 1,
            budget: 2_000_000,
        };
        let dyck = fixtures::dyck_identity(2);
        assert_eq!(property_c_witness_search(&dyck, &bounds).unwrap(), None);
        let motzkin = fixtures::motzkin(2);
        assert_eq!(property_c_witness_search(&motzkin, &bounds).unwrap(), None);
    }

    #[test]
    fn joint_search_surfaces_the_twisted_hidden_pair() {
        let fam = TwistedFamily::new(TwistConfig::double_loop(12));
        let bounds = SearchBounds {
            max_len: 2,
            end_len: 0,
            depth: 3,
            joint_radius: 6,
            narrow: 1,
            budget: 40_000_000,
        };
        let w = property_c_witness_search(&fam, &bounds)
            .unwrap()
            .expect("the sign-hidden pair is within reach");
        let render = |v: &[usize]| word_to_names(&fam, v).join(" ");
        assert_eq!(render(&w.a), "a-+ a++");
        assert_eq!(render(&w.b), "a-+ b+-");
        assert_eq!(render(&w.separator.0), "a-+");
        assert_eq!(render(&w.separator.1), "a-+ a++ a-+ a++ a++");
    }

    #[test]
    fn searches_respect_the_query_budget() {
        let fam = TwistedFamily::new(TwistConfig::double_loop(12));
        let bounds = SearchBounds {
            max_len: 2,
            end_len: 0,
            depth: 2,
            joint_radius: 6,
            narrow: 1,
            budget: 900,
        };
        let err = property_c_witness_search(&fam, &bounds).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }), "{err}");
    }
}
