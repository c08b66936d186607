//! Window-to-context mappings. A right mapping assigns to every
//! admissible window of half-width L a future word of length L+1 that
//! every past of the window accepts; a left mapping mirrors this with
//! pasts; a bi-directional pair adds cross conditions tying the two
//! maps together. Recoding a shift through such maps yields
//! instantaneous presentations. The searches backtrack in
//! lexicographic order, so the first solution is deterministic, and an
//! exhausted budget is reported apart from a genuine "none at this
//! half-width": a larger half-width may still succeed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::language::{enumerate_words, gamma_minus, gamma_plus, word_to_names, Language};
use crate::sofic::transform::window_recode;
use crate::sofic::{FollowerFamily, SoficPresentation};

const VERIFY_BUDGET: usize = 50_000_000;

/// Answers context-transfer questions: does every past (or future) of
/// one word extend across a replacement word? Exact for an essential
/// labeled graph via its follower-set family; any other language gets
/// a finite approximation that checks contexts up to a fixed depth
/// only, so a positive answer is evidence, not proof.
pub enum ContextOracle<'a> {
    Sofic {
        sp: &'a SoficPresentation,
        fam: FollowerFamily,
        fam_rev: FollowerFamily,
    },
    Bounded { lang: &'a dyn Language, depth: usize },
}

impl<'a> ContextOracle<'a> {
    pub fn sofic(sp: &'a SoficPresentation) -> Result<Self> {
        let fam = FollowerFamily::compute(sp)?;
        let fam_rev = FollowerFamily::compute(&sp.reversed())?;
        Ok(ContextOracle::Sofic { sp, fam, fam_rev })
    }

    pub fn bounded(lang: &'a dyn Language, depth: usize) -> Self {
        ContextOracle::Bounded { lang, depth }
    }

    pub fn language(&self) -> &dyn Language {
        match self {
            ContextOracle::Sofic { sp, .. } => *sp,
            ContextOracle::Bounded { lang, .. } => *lang,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ContextOracle::Sofic { .. })
    }

    /// Is every past of `given` also a past of `replaced`?
    pub fn pasts_transfer(&self, given: &[usize], replaced: &[usize]) -> Result<bool> {
        if !self.language().contains(replaced)? {
            return Ok(false);
        }
        match self {
            ContextOracle::Sofic { fam, .. } => {
                for v in 0..fam.len() {
                    if fam.extendable(v, given) && !fam.extendable(v, replaced) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            ContextOracle::Bounded { lang, depth } => {
                for p in gamma_minus(*lang, given, *depth)? {
                    let mut w = p;
                    w.extend_from_slice(replaced);
                    if !lang.contains(&w)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Is every future of `given` also a future of `replaced`?
    pub fn futures_transfer(&self, given: &[usize], replaced: &[usize]) -> Result<bool> {
        if !self.language().contains(replaced)? {
            return Ok(false);
        }
        match self {
            ContextOracle::Sofic { fam_rev, .. } => {
                let g: Vec<usize> = given.iter().rev().copied().collect();
                let r: Vec<usize> = replaced.iter().rev().copied().collect();
                for v in 0..fam_rev.len() {
                    if fam_rev.extendable(v, &g) && !fam_rev.extendable(v, &r) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            ContextOracle::Bounded { lang, depth } => {
                for f in gamma_plus(*lang, given, *depth)? {
                    let mut w = replaced.to_vec();
                    w.extend_from_slice(&f);
                    if !lang.contains(&w)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// A total map from admissible windows of length `2l+1` to context
/// words of length `l+1`. For a right mapping the value sits just
/// after the window center; for a left mapping it sits just before.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingSearch {
    pub l: usize,
    pub table: BTreeMap<Vec<usize>, Vec<usize>>,
}

// Window coordinates run -l..=l, so index j holds coordinate j-l. The
// stability conditions relate windows that overlap after padding: a
// right entry pads the window on the left by `l-ell` symbols and
// substitutes the first `ell` image symbols for the window tail; a
// left entry mirrors this.
struct REntry {
    a: usize,
    ell: usize,
    arg1: usize,
    stem: Vec<usize>,
}

struct LEntry {
    a: usize,
    ell: usize,
    arg1: usize,
    tail: Vec<usize>,
}

struct Engine {
    l: usize,
    pair: bool,
    windows: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    plus_cands: Vec<Vec<Vec<usize>>>,
    minus_cands: Vec<Vec<Vec<usize>>>,
    r_entries: Vec<REntry>,
    l_entries: Vec<LEntry>,
    budget: usize,
    nodes: usize,
}

impl Engine {
    fn new(oracle: &ContextOracle, l: usize, pair: bool, budget: usize) -> Result<Self> {
        let lang = oracle.language();
        let span = 2 * l + 1;
        let windows = enumerate_words(lang, span, span, budget)?;
        if windows.is_empty() {
            return Err(Error::input("the language has no windows of the requested span"));
        }
        let index: BTreeMap<Vec<usize>, usize> =
            windows.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let images = enumerate_words(lang, l + 1, l + 1, budget)?;
        let mut plus_cands = Vec::with_capacity(windows.len());
        let mut minus_cands = Vec::with_capacity(windows.len());
        for a in &windows {
            let mut cs = Vec::new();
            for c in &images {
                let mut rep = a[..=l].to_vec();
                rep.extend_from_slice(c);
                if oracle.pasts_transfer(a, &rep)? {
                    cs.push(c.clone());
                }
            }
            plus_cands.push(cs);
            if pair {
                let mut cs = Vec::new();
                for c in &images {
                    let mut rep = c.clone();
                    rep.extend_from_slice(&a[l..]);
                    if oracle.futures_transfer(a, &rep)? {
                        cs.push(c.clone());
                    }
                }
                minus_cands.push(cs);
            }
        }
        let mut r_entries = Vec::new();
        let mut l_entries = Vec::new();
        for (ai, a) in windows.iter().enumerate() {
            for ell in 1..=l {
                let head = &a[..l + ell + 1];
                let rear = &a[l - ell..];
                for (wi, w) in windows.iter().enumerate() {
                    if &w[l - ell..] == head {
                        let mut stem = w[..l - ell].to_vec();
                        stem.extend_from_slice(&a[..=l]);
                        r_entries.push(REntry { a: ai, ell, arg1: wi, stem });
                    }
                    if pair && &w[..l + ell + 1] == rear {
                        let mut tail = a[l..].to_vec();
                        tail.extend_from_slice(&w[l + ell + 1..]);
                        l_entries.push(LEntry { a: ai, ell, arg1: wi, tail });
                    }
                }
            }
        }
        Ok(Engine {
            l,
            pair,
            windows,
            index,
            plus_cands,
            minus_cands,
            r_entries,
            l_entries,
            budget,
            nodes: 0,
        })
    }

    fn var_count(&self) -> usize {
        if self.pair {
            2 * self.windows.len()
        } else {
            self.windows.len()
        }
    }

    fn cand_count(&self, var: usize) -> usize {
        if self.pair {
            let w = var / 2;
            if var % 2 == 0 {
                self.minus_cands[w].len()
            } else {
                self.plus_cands[w].len()
            }
        } else {
            self.plus_cands[var].len()
        }
    }

    fn consistent(&self, assign: &[Option<usize>]) -> bool {
        let plus = |i: usize| -> Option<&Vec<usize>> {
            let v = if self.pair { assign[2 * i + 1] } else { assign[i] }?;
            Some(&self.plus_cands[i][v])
        };
        let minus = |i: usize| -> Option<&Vec<usize>> {
            let v = assign[2 * i]?;
            Some(&self.minus_cands[i][v])
        };
        for e in &self.r_entries {
            let Some(img) = plus(e.a) else { continue };
            let mut arg2 = e.stem.clone();
            arg2.extend_from_slice(&img[..e.ell]);
            let Some(&i2) = self.index.get(&arg2) else {
                // substituted word left the language
                return false;
            };
            if let (Some(x), Some(y)) = (plus(e.arg1), plus(i2)) {
                if x != y {
                    return false;
                }
            }
            if self.pair {
                if let (Some(x), Some(y)) = (minus(e.arg1), minus(i2)) {
                    if x != y {
                        return false;
                    }
                }
            }
        }
        if self.pair {
            for e in &self.l_entries {
                let Some(img) = minus(e.a) else { continue };
                let mut arg2 = img[self.l + 1 - e.ell..].to_vec();
                arg2.extend_from_slice(&e.tail);
                let Some(&i2) = self.index.get(&arg2) else {
                    return false;
                };
                if let (Some(x), Some(y)) = (minus(e.arg1), minus(i2)) {
                    if x != y {
                        return false;
                    }
                }
                if let (Some(x), Some(y)) = (plus(e.arg1), plus(i2)) {
                    if x != y {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn extract(&self, assign: &[Option<usize>]) -> (Option<MappingSearch>, MappingSearch) {
        let mut plus = BTreeMap::new();
        let mut minus = BTreeMap::new();
        for (i, a) in self.windows.iter().enumerate() {
            if self.pair {
                minus.insert(a.clone(), self.minus_cands[i][assign[2 * i].unwrap()].clone());
                plus.insert(a.clone(), self.plus_cands[i][assign[2 * i + 1].unwrap()].clone());
            } else {
                plus.insert(a.clone(), self.plus_cands[i][assign[i].unwrap()].clone());
            }
        }
        let p = MappingSearch { l: self.l, table: plus };
        let m = self.pair.then_some(MappingSearch { l: self.l, table: minus });
        (m, p)
    }

    fn run(&mut self) -> Result<Option<(Option<MappingSearch>, MappingSearch)>> {
        if self.plus_cands.iter().any(|c| c.is_empty()) {
            return Ok(None);
        }
        if self.pair && self.minus_cands.iter().any(|c| c.is_empty()) {
            return Ok(None);
        }
        let nvars = self.var_count();
        let mut assign: Vec<Option<usize>> = vec![None; nvars];
        let mut cursor: Vec<usize> = vec![0; nvars];
        let mut k = 0usize;
        loop {
            if k == nvars {
                return Ok(Some(self.extract(&assign)));
            }
            let mut placed = false;
            while cursor[k] < self.cand_count(k) {
                let c = cursor[k];
                cursor[k] += 1;
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::budget("mapping search nodes", self.budget as u64));
                }
                assign[k] = Some(c);
                if self.consistent(&assign) {
                    placed = true;
                    break;
                }
                assign[k] = None;
            }
            if placed {
                k += 1;
                if k < nvars {
                    cursor[k] = 0;
                }
            } else {
                cursor[k] = 0;
                assign[k] = None;
                if k == 0 {
                    return Ok(None);
                }
                k -= 1;
                assign[k] = None;
            }
        }
    }
}

/// Searches for a right mapping at half-width `l`. `Ok(None)` means no
/// mapping exists at this half-width; it says nothing about larger
/// ones. `budget` caps both word enumeration and search nodes.
pub fn ri_mapping_search(
    oracle: &ContextOracle,
    l: usize,
    budget: usize,
) -> Result<Option<MappingSearch>> {
    let mut engine = Engine::new(oracle, l, false, budget)?;
    Ok(engine.run()?.map(|(_, p)| p))
}

/// Searches for a (left, right) mapping pair at half-width `l`,
/// including the cross conditions between the two maps.
pub fn bi_mapping_pair_search(
    oracle: &ContextOracle,
    l: usize,
    budget: usize,
) -> Result<Option<(MappingSearch, MappingSearch)>> {
    let mut engine = Engine::new(oracle, l, true, budget)?;
    Ok(engine.run()?.map(|(m, p)| (m.expect("pair mode yields a left map"), p)))
}

fn fmt(lang: &dyn Language, w: &[usize]) -> String {
    word_to_names(lang, w).join(" ")
}

fn tuples(n_symbols: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n_symbols).map(move |s| {
                    let mut w2 = w.clone();
                    w2.push(s);
                    w2
                })
            })
            .collect();
    }
    out
}

fn check_shape(
    lang: &dyn Language,
    m: &MappingSearch,
    side: &str,
    out: &mut Vec<String>,
) -> Result<()> {
    let span = 2 * m.l + 1;
    for (a, img) in &m.table {
        if a.len() != span || !lang.contains(a)? {
            out.push(format!(
                "totality: {side} key {} is not an admissible window",
                fmt(lang, a)
            ));
        }
        if img.len() != m.l + 1 || !lang.contains(img)? {
            out.push(format!(
                "image-shape: {side} image {} at {} is not an admissible word of length {}",
                fmt(lang, img),
                fmt(lang, a),
                m.l + 1
            ));
        }
    }
    for a in enumerate_words(lang, span, span, VERIFY_BUDGET)? {
        if !m.table.contains_key(&a) {
            out.push(format!(
                "totality: window {} missing from the {side} table",
                fmt(lang, &a)
            ));
        }
    }
    Ok(())
}

fn check_right(oracle: &ContextOracle, m: &MappingSearch, out: &mut Vec<String>) -> Result<()> {
    let lang = oracle.language();
    let l = m.l;
    for (a, img) in &m.table {
        if a.len() != 2 * l + 1 || img.len() != l + 1 {
            continue;
        }
        let mut rep = a[..=l].to_vec();
        rep.extend_from_slice(img);
        if !oracle.pasts_transfer(a, &rep)? {
            out.push(format!("right-compatibility fails at window {}", fmt(lang, a)));
        }
        for ell in 1..=l {
            for p in tuples(lang.symbol_count(), l - ell) {
                let mut arg1 = p.clone();
                arg1.extend_from_slice(&a[..l + ell + 1]);
                if !lang.contains(&arg1)? {
                    continue;
                }
                let mut arg2 = p;
                arg2.extend_from_slice(&a[..=l]);
                arg2.extend_from_slice(&img[..ell]);
                if !lang.contains(&arg2)? {
                    out.push(format!(
                        "right-stability: substituting the image of {} turns {} inadmissible",
                        fmt(lang, a),
                        fmt(lang, &arg2)
                    ));
                } else if m.table.get(&arg1) != m.table.get(&arg2) {
                    out.push(format!(
                        "right-stability: windows {} and {} map differently",
                        fmt(lang, &arg1),
                        fmt(lang, &arg2)
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_left(oracle: &ContextOracle, m: &MappingSearch, out: &mut Vec<String>) -> Result<()> {
    let lang = oracle.language();
    let l = m.l;
    for (a, img) in &m.table {
        if a.len() != 2 * l + 1 || img.len() != l + 1 {
            continue;
        }
        let mut rep = img.clone();
        rep.extend_from_slice(&a[l..]);
        if !oracle.futures_transfer(a, &rep)? {
            out.push(format!("left-compatibility fails at window {}", fmt(lang, a)));
        }
        for ell in 1..=l {
            for s in tuples(lang.symbol_count(), l - ell) {
                let mut arg1 = a[l - ell..].to_vec();
                arg1.extend_from_slice(&s);
                if !lang.contains(&arg1)? {
                    continue;
                }
                let mut arg2 = img[l + 1 - ell..].to_vec();
                arg2.extend_from_slice(&a[l..]);
                arg2.extend_from_slice(&s);
                if !lang.contains(&arg2)? {
                    out.push(format!(
                        "left-stability: substituting the image of {} turns {} inadmissible",
                        fmt(lang, a),
                        fmt(lang, &arg2)
                    ));
                } else if m.table.get(&arg1) != m.table.get(&arg2) {
                    out.push(format!(
                        "left-stability: windows {} and {} map differently",
                        fmt(lang, &arg1),
                        fmt(lang, &arg2)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Re-checks a right mapping clause by clause, independently of the
/// search engine. Returns human-readable violations, empty when valid.
pub fn verify_ri_mapping(oracle: &ContextOracle, m: &MappingSearch) -> Result<Vec<String>> {
    let mut out = Vec::new();
    check_shape(oracle.language(), m, "right", &mut out)?;
    check_right(oracle, m, &mut out)?;
    Ok(out)
}

/// Re-checks a (left, right) pair: each side's own clauses plus the
/// two cross-stability conditions.
pub fn verify_bi_pair(
    oracle: &ContextOracle,
    minus: &MappingSearch,
    plus: &MappingSearch,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    if minus.l != plus.l {
        out.push(format!("shape: half-widths differ ({} vs {})", minus.l, plus.l));
        return Ok(out);
    }
    let lang = oracle.language();
    let l = plus.l;
    check_shape(lang, minus, "left", &mut out)?;
    check_shape(lang, plus, "right", &mut out)?;
    check_left(oracle, minus, &mut out)?;
    check_right(oracle, plus, &mut out)?;
    for (a, img) in &plus.table {
        if a.len() != 2 * l + 1 || img.len() != l + 1 {
            continue;
        }
        for ell in 1..=l {
            for p in tuples(lang.symbol_count(), l - ell) {
                let mut arg1 = p.clone();
                arg1.extend_from_slice(&a[..l + ell + 1]);
                if !lang.contains(&arg1)? {
                    continue;
                }
                let mut arg2 = p;
                arg2.extend_from_slice(&a[..=l]);
                arg2.extend_from_slice(&img[..ell]);
                if !lang.contains(&arg2)? {
                    out.push(format!(
                        "left-cross-stability: substituting the right image of {} turns {} inadmissible",
                        fmt(lang, a),
                        fmt(lang, &arg2)
                    ));
                } else if minus.table.get(&arg1) != minus.table.get(&arg2) {
                    out.push(format!(
                        "left-cross-stability: windows {} and {} get different left images",
                        fmt(lang, &arg1),
                        fmt(lang, &arg2)
                    ));
                }
            }
        }
    }
    for (a, img) in &minus.table {
        if a.len() != 2 * l + 1 || img.len() != l + 1 {
            continue;
        }
        for ell in 1..=l {
            for s in tuples(lang.symbol_count(), l - ell) {
                let mut arg1 = a[l - ell..].to_vec();
                arg1.extend_from_slice(&s);
                if !lang.contains(&arg1)? {
                    continue;
                }
                let mut arg2 = img[l + 1 - ell..].to_vec();
                arg2.extend_from_slice(&a[l..]);
                arg2.extend_from_slice(&s);
                if !lang.contains(&arg2)? {
                    out.push(format!(
                        "right-cross-stability: substituting the left image of {} turns {} inadmissible",
                        fmt(lang, a),
                        fmt(lang, &arg2)
                    ));
                } else if plus.table.get(&arg1) != plus.table.get(&arg2) {
                    out.push(format!(
                        "right-cross-stability: windows {} and {} get different right images",
                        fmt(lang, &arg1),
                        fmt(lang, &arg2)
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Recodes the presented shift through a right mapping: each position
/// emits its recent window paired with the assigned future. The image
/// is right-instantaneous. Rejects invalid mappings, naming the
/// violated clause.
pub fn theta_embed_ri(sp: &SoficPresentation, psi: &MappingSearch) -> Result<SoficPresentation> {
    let oracle = ContextOracle::sofic(sp)?;
    if let Some(v) = verify_ri_mapping(&oracle, psi)?.first() {
        return Err(Error::input(format!("mapping rejected: {v}")));
    }
    let fam = match &oracle {
        ContextOracle::Sofic { fam, .. } => fam,
        ContextOracle::Bounded { .. } => unreachable!(),
    };
    let l = psi.l;
    window_recode(sp, fam, l, l, |buf| {
        let img = psi
            .table
            .get(buf)
            .ok_or_else(|| Error::input("window missing from the mapping table"))?;
        let past: Vec<&str> = buf[..=l].iter().map(|&s| sp.symbol_name(s)).collect();
        let fut: Vec<&str> = img.iter().map(|&s| sp.symbol_name(s)).collect();
        Ok(format!("{}/{}", past.join("."), fut.join(".")))
    })
}

/// Recodes through a (left, right) pair: each position emits its left
/// image, center symbol and right image, then the result is passed
/// through a length-`l` block recode. The image is bi-instantaneous.
pub fn theta_embed_bi(
    sp: &SoficPresentation,
    minus: &MappingSearch,
    plus: &MappingSearch,
) -> Result<SoficPresentation> {
    let oracle = ContextOracle::sofic(sp)?;
    if let Some(v) = verify_bi_pair(&oracle, minus, plus)?.first() {
        return Err(Error::input(format!("mapping pair rejected: {v}")));
    }
    let fam = match &oracle {
        ContextOracle::Sofic { fam, .. } => fam,
        ContextOracle::Bounded { .. } => unreachable!(),
    };
    let l = plus.l;
    let im = window_recode(sp, fam, l, l, |buf| {
        let mv = minus
            .table
            .get(buf)
            .ok_or_else(|| Error::input("window missing from the left table"))?;
        let pv = plus
            .table
            .get(buf)
            .ok_or_else(|| Error::input("window missing from the right table"))?;
        let j = |w: &[usize]| {
            let names: Vec<&str> = w.iter().map(|&s| sp.symbol_name(s)).collect();
            names.join(".")
        };
        Ok(format!("{}/{}/{}", j(mv), sp.symbol_name(buf[l]), j(pv)))
    })?;
    if l <= 1 {
        // the length-l block recode is the identity here
        return Ok(im);
    }
    let fam_im = FollowerFamily::compute(&im)?;
    window_recode(&im, &fam_im, l - 1, 0, |buf| {
        let names: Vec<&str> = buf.iter().map(|&s| im.symbol_name(s)).collect();
        Ok(names.join("|"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{even_toy, full_shift, sofic_left_not_right};
    use crate::sofic::{instantaneity_check, theorem61_transform, IntervalConvention};

    #[test]
    fn full_shift_search_finds_the_constant_mapping() {
        let sp = full_shift(2);
        let oracle = ContextOracle::sofic(&sp).unwrap();
        let m = ri_mapping_search(&oracle, 0, 100_000).unwrap().expect("half-width 0 exists");
        assert_eq!(m.table[&vec![0]], vec![0]);
        assert_eq!(m.table[&vec![1]], vec![0]);
        assert!(verify_ri_mapping(&oracle, &m).unwrap().is_empty());
        let img = theta_embed_ri(&sp, &m).unwrap();
        assert_eq!(img.symbol_count(), 2);
        let rep = instantaneity_check(&img).unwrap();
        assert!(rep.right && rep.left);
        // at half-width 1 every window takes the least future
        let m1 = ri_mapping_search(&oracle, 1, 100_000).unwrap().expect("half-width 1 exists");
        assert_eq!(m1.table.len(), 8);
        assert!(m1.table.values().all(|v| v == &vec![0, 0]));
        assert!(verify_ri_mapping(&oracle, &m1).unwrap().is_empty());
    }

    #[test]
    fn left_not_right_fixture_has_no_half_width_zero_mapping() {
        let sp = sofic_left_not_right();
        let oracle = ContextOracle::sofic(&sp).unwrap();
        assert!(ri_mapping_search(&oracle, 0, 1_000_000).unwrap().is_none());
    }

    #[test]
    fn even_fixture_half_width_zero_pair_is_constant() {
        let sp = even_toy();
        let oracle = ContextOracle::sofic(&sp).unwrap();
        let (minus, plus) =
            bi_mapping_pair_search(&oracle, 0, 100_000).unwrap().expect("pair exists");
        for t in [&minus.table, &plus.table] {
            assert_eq!(t[&vec![0]], vec![0]);
            assert_eq!(t[&vec![1]], vec![0]);
        }
        assert!(verify_bi_pair(&oracle, &minus, &plus).unwrap().is_empty());
        let img = theta_embed_bi(&sp, &minus, &plus).unwrap();
        let rep = instantaneity_check(&img).unwrap();
        assert!(rep.right, "{:?}", rep.right_symbols);
        assert!(rep.left, "{:?}", rep.left_symbols);
    }

    #[test]
    fn half_width_one_pair_on_the_full_shift() {
        let sp = full_shift(2);
        let oracle = ContextOracle::sofic(&sp).unwrap();
        let (minus, plus) =
            bi_mapping_pair_search(&oracle, 1, 1_000_000).unwrap().expect("pair exists");
        assert!(minus.table.values().all(|v| v == &vec![0, 0]));
        assert!(plus.table.values().all(|v| v == &vec![0, 0]));
        assert!(verify_bi_pair(&oracle, &minus, &plus).unwrap().is_empty());
        let img = theta_embed_bi(&sp, &minus, &plus).unwrap();
        let rep = instantaneity_check(&img).unwrap();
        assert!(rep.right && rep.left);
    }

    #[test]
    fn verifier_names_the_broken_clause() {
        let sp = even_toy();
        let oracle = ContextOracle::sofic(&sp).unwrap();
        let mut m = ri_mapping_search(&oracle, 0, 100_000).unwrap().unwrap();
        // the run-cutting future 1 is incompatible with the past 1
        m.table.insert(vec![0], vec![1]);
        let viols = verify_ri_mapping(&oracle, &m).unwrap();
        assert!(!viols.is_empty());
        assert!(viols[0].contains("right-compatibility"), "{viols:?}");
    }

    #[test]
    fn transform_outputs_accept_half_width_zero_mappings() {
        for conv in [IntervalConvention::Strict, IntervalConvention::WideLeft] {
            let t = theorem61_transform(&even_toy(), conv, 32).unwrap();
            let y = &t.presentation(10_000).unwrap();
            let oracle = ContextOracle::sofic(y).unwrap();
            let m = ri_mapping_search(&oracle, 0, 1_000_000)
                .unwrap()
                .expect("instantaneous shifts admit half-width 0");
            assert!(verify_ri_mapping(&oracle, &m).unwrap().is_empty());
            let img = theta_embed_ri(y, &m).unwrap();
            assert!(instantaneity_check(&img).unwrap().right);
        }
    }

    #[test]
    fn exhausted_budget_is_not_a_nonexistence_report() {
        let sp = even_toy();
        let oracle = ContextOracle::sofic(&sp).unwrap();
        match ri_mapping_search(&oracle, 0, 1) {
            Err(Error::Budget { .. }) => {}
            other => panic!("expected a budget error, got {other:?}"),
        }
    }

    #[test]
    fn bounded_oracle_agrees_on_the_even_fixture() {
        let sp = even_toy();
        let exact = ContextOracle::sofic(&sp).unwrap();
        let bounded = ContextOracle::bounded(&sp, 3);
        assert!(exact.is_exact());
        assert!(!bounded.is_exact());
        let a = ri_mapping_search(&exact, 0, 100_000).unwrap().unwrap();
        let b = ri_mapping_search(&bounded, 0, 100_000).unwrap().unwrap();
        assert_eq!(a.table, b.table);
    }
}
