//! Language oracles and bounded context calculators.
//!
//! A [`Language`] answers membership for finite words over an indexed
//! alphabet. All implementations present factor-closed languages (every
//! factor of a member is a member), which the enumerators rely on for
//! pruning. The empty word is a member by convention; it is the neutral
//! element for the extension operators.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::presentation::Presentation;

/// Membership oracle for a factor-closed language.
pub trait Language {
    fn symbol_count(&self) -> usize;
    fn symbol_name(&self, i: usize) -> &str;
    fn contains(&self, w: &[usize]) -> Result<bool>;
}

impl Language for Presentation {
    fn symbol_count(&self) -> usize {
        self.edge_count()
    }

    fn symbol_name(&self, i: usize) -> &str {
        &self.edge(crate::presentation::EdgeId(i as u32)).name
    }

    fn contains(&self, w: &[usize]) -> Result<bool> {
        if w.is_empty() {
            return Ok(true);
        }
        if w.iter().any(|&s| s >= self.edge_count()) {
            return Err(Error::input("symbol index out of range"));
        }
        let ids: Vec<_> = w.iter().map(|&s| crate::presentation::EdgeId(s as u32)).collect();
        Ok(!self.fold_label(&ids).is_zero())
    }
}

pub fn symbol_index(lang: &dyn Language, name: &str) -> Option<usize> {
    (0..lang.symbol_count()).find(|&i| lang.symbol_name(i) == name)
}

pub fn word_from_names(lang: &dyn Language, names: &[&str]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| symbol_index(lang, n).ok_or_else(|| Error::input(format!("unknown symbol {n:?}"))))
        .collect()
}

pub fn word_to_names(lang: &dyn Language, w: &[usize]) -> Vec<String> {
    w.iter().map(|&s| lang.symbol_name(s).to_string()).collect()
}

/// All members with length in `len_min..=len_max`, lexicographic within
/// each length, shorter first. `budget` caps the number of oracle calls.
pub fn enumerate_words(
    lang: &dyn Language,
    len_min: usize,
    len_max: usize,
    budget: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut calls = 0usize;
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for len in 1..=len_max {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..lang.symbol_count() {
                let mut nw = w.clone();
                nw.push(s);
                calls += 1;
                if calls > budget {
                    return Err(Error::budget("membership queries", budget as u64));
                }
                if lang.contains(&nw)? {
                    next.push(nw);
                }
            }
        }
        if len >= len_min {
            out.extend(next.iter().cloned());
        }
        frontier = next;
    }
    Ok(out)
}

/// Left extensions: nonempty `u` with `|u| <= depth` and `u a` a member.
pub fn gamma_minus(lang: &dyn Language, a: &[usize], depth: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    // grow u rightward from the innermost position; prune on u a
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for u in &frontier {
            for s in 0..lang.symbol_count() {
                let mut nu = vec![s];
                nu.extend(u.iter().copied());
                let mut test = nu.clone();
                test.extend_from_slice(a);
                if lang.contains(&test)? {
                    next.push(nu);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort_by(|x, y| (x.len(), x.as_slice()).cmp(&(y.len(), y.as_slice())));
    Ok(out)
}

/// Right extensions: nonempty `v` with `|v| <= depth` and `a v` a member.
pub fn gamma_plus(lang: &dyn Language, a: &[usize], depth: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![a.to_vec()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..lang.symbol_count() {
                let mut nw = w.clone();
                nw.push(s);
                if lang.contains(&nw)? {
                    next.push(nw);
                }
            }
        }
        out.extend(next.iter().map(|w| w[a.len()..].to_vec()));
        frontier = next;
    }
    out.sort_by(|x, y| (x.len(), x.as_slice()).cmp(&(y.len(), y.as_slice())));
    Ok(out)
}

/// Two-sided contexts: pairs `(u, v)`, each side possibly empty and at
/// most `depth` long, with `u a v` a member.
pub fn gamma_pairs(
    lang: &dyn Language,
    a: &[usize],
    depth: usize,
) -> Result<BTreeSet<(Vec<usize>, Vec<usize>)>> {
    let mut out = BTreeSet::new();
    let mut lefts = vec![Vec::new()];
    lefts.extend(gamma_minus(lang, a, depth)?);
    for u in lefts {
        let mut ua = u.clone();
        ua.extend_from_slice(a);
        if !lang.contains(&ua)? {
            continue;
        }
        out.insert((u.clone(), Vec::new()));
        for v in gamma_plus(lang, &ua, depth)? {
            out.insert((u.clone(), v));
        }
    }
    Ok(out)
}

/// Futures common to all pasts: the intersection over length-`m` words
/// `x` with `x a` a member of the exact-length-`n` futures `v` with
/// `x a v` a member. With `m = 0` the single empty past applies. Returns
/// the empty set when `a` is not a member or no length-`m` past exists.
/// The result is a superset of the infinite-past limit and non-increasing
/// in `m`.
pub fn omega_plus(
    lang: &dyn Language,
    a: &[usize],
    n: usize,
    m: usize,
) -> Result<BTreeSet<Vec<usize>>> {
    if !lang.contains(a)? {
        return Ok(BTreeSet::new());
    }
    let pasts: Vec<Vec<usize>> = if m == 0 {
        vec![Vec::new()]
    } else {
        gamma_minus(lang, a, m)?.into_iter().filter(|u| u.len() == m).collect()
    };
    if pasts.is_empty() {
        return Ok(BTreeSet::new());
    }
    let mut acc: Option<BTreeSet<Vec<usize>>> = None;
    for x in pasts {
        let mut xa = x.clone();
        xa.extend_from_slice(a);
        let futures: BTreeSet<Vec<usize>> = gamma_plus(lang, &xa, n)?
            .into_iter()
            .filter(|v| v.len() == n)
            .collect();
        acc = Some(match acc {
            None => futures,
            Some(prev) => prev.intersection(&futures).cloned().collect(),
        });
        if acc.as_ref().is_some_and(|s| s.is_empty()) {
            break;
        }
    }
    Ok(acc.unwrap_or_default())
}

/// Pasts common to all futures; time symmetric to [`omega_plus`].
pub fn omega_minus(
    lang: &dyn Language,
    a: &[usize],
    n: usize,
    m: usize,
) -> Result<BTreeSet<Vec<usize>>> {
    if !lang.contains(a)? {
        return Ok(BTreeSet::new());
    }
    let futures: Vec<Vec<usize>> = if m == 0 {
        vec![Vec::new()]
    } else {
        gamma_plus(lang, a, m)?.into_iter().filter(|v| v.len() == m).collect()
    };
    if futures.is_empty() {
        return Ok(BTreeSet::new());
    }
    let mut acc: Option<BTreeSet<Vec<usize>>> = None;
    for y in futures {
        let mut ay = a.to_vec();
        ay.extend_from_slice(&y);
        let pasts: BTreeSet<Vec<usize>> = gamma_minus(lang, &ay, n)?
            .into_iter()
            .filter(|u| u.len() == n)
            .collect();
        acc = Some(match acc {
            None => pasts,
            Some(prev) => prev.intersection(&pasts).cloned().collect(),
        });
        if acc.as_ref().is_some_and(|s| s.is_empty()) {
            break;
        }
    }
    Ok(acc.unwrap_or_default())
}

/// The `n`-block recoding of a language: symbols are the admissible
/// `n`-words, and a word is a member when consecutive symbols overlap in
/// `n - 1` positions and the expanded word is a member of the base.
pub struct HigherBlock<'a> {
    base: &'a dyn Language,
    n: usize,
    blocks: Vec<Vec<usize>>,
    names: Vec<String>,
}

impl<'a> HigherBlock<'a> {
    pub fn new(base: &'a dyn Language, n: usize, budget: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("block length must be at least 1"));
        }
        let blocks: Vec<Vec<usize>> = enumerate_words(base, n, n, budget)?;
        let names = blocks
            .iter()
            .map(|b| {
                b.iter().map(|&s| base.symbol_name(s)).collect::<Vec<_>>().join("|")
            })
            .collect();
        Ok(HigherBlock { base, n, blocks, names })
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// Expands a higher-block word back to a base word; `None` when
    /// consecutive blocks do not overlap.
    pub fn expand(&self, w: &[usize]) -> Option<Vec<usize>> {
        let mut out: Vec<usize> = Vec::new();
        for (k, &b) in w.iter().enumerate() {
            let block = &self.blocks[b];
            if k == 0 {
                out.extend_from_slice(block);
            } else {
                if out[out.len() - (self.n - 1)..] != block[..self.n - 1] {
                    return None;
                }
                out.push(block[self.n - 1]);
            }
        }
        Some(out)
    }
}

impl Language for HigherBlock<'_> {
    fn symbol_count(&self) -> usize {
        self.blocks.len()
    }

    fn symbol_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    fn contains(&self, w: &[usize]) -> Result<bool> {
        if w.is_empty() {
            return Ok(true);
        }
        if w.iter().any(|&s| s >= self.blocks.len()) {
            return Err(Error::input("symbol index out of range"));
        }
        if self.n == 1 {
            let base_word: Vec<usize> = w.iter().map(|&b| self.blocks[b][0]).collect();
            return self.base.contains(&base_word);
        }
        match self.expand(w) {
            Some(base_word) => self.base.contains(&base_word),
            None => Ok(false),
        }
    }
}

/// The image of a language under a sliding block map with window `n`.
/// The map is a table from admissible `n`-windows to output symbols;
/// membership of an image word is decided by searching for a preimage.
pub struct BlockMapImage<'a> {
    base: &'a dyn Language,
    n: usize,
    table: BTreeMap<Vec<usize>, usize>,
    output_names: Vec<String>,
    budget: usize,
}

impl<'a> BlockMapImage<'a> {
    pub fn new(
        base: &'a dyn Language,
        n: usize,
        table: BTreeMap<Vec<usize>, usize>,
        output_names: Vec<String>,
        budget: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("window length must be at least 1"));
        }
        for (w, &s) in &table {
            if w.len() != n {
                return Err(Error::input("table key of wrong window length"));
            }
            if s >= output_names.len() {
                return Err(Error::input("table value outside the output alphabet"));
            }
        }
        Ok(BlockMapImage { base, n, table, output_names, budget })
    }

    fn window_name(&self, w: &[usize]) -> String {
        w.iter().map(|&s| self.base.symbol_name(s)).collect::<Vec<_>>().join("|")
    }

    /// Applies the map to a full base word, yielding the image word of
    /// length `|x| - n + 1`. Errors on a window missing from the table.
    pub fn image_of(&self, x: &[usize]) -> Result<Vec<usize>> {
        if x.len() < self.n {
            return Err(Error::input("word shorter than the window"));
        }
        x.windows(self.n)
            .map(|w| {
                self.table
                    .get(w)
                    .copied()
                    .ok_or_else(|| Error::PartialBlockMap(self.window_name(w)))
            })
            .collect()
    }

    /// Searches for a preimage of `v`: a base word `x` of length
    /// `|v| + n - 1` whose image is `v`. Returns the lexicographically
    /// first one.
    pub fn preimage(&self, v: &[usize]) -> Result<Option<Vec<usize>>> {
        let mut calls = 0usize;
        self.preimage_from(&mut Vec::new(), v, &mut calls)
    }

    fn preimage_from(
        &self,
        x: &mut Vec<usize>,
        v: &[usize],
        calls: &mut usize,
    ) -> Result<Option<Vec<usize>>> {
        if x.len() == v.len() + self.n - 1 {
            return Ok(Some(x.clone()));
        }
        for s in 0..self.base.symbol_count() {
            *calls += 1;
            if *calls > self.budget {
                return Err(Error::budget("preimage search nodes", self.budget as u64));
            }
            x.push(s);
            let ok = self.base.contains(x)? && self.check_last_window(x, v)?;
            if ok {
                if let Some(found) = self.preimage_from(x, v, calls)? {
                    x.pop();
                    return Ok(Some(found));
                }
            }
            x.pop();
        }
        Ok(None)
    }

    fn check_last_window(&self, x: &[usize], v: &[usize]) -> Result<bool> {
        if x.len() < self.n {
            return Ok(true);
        }
        let w = &x[x.len() - self.n..];
        match self.table.get(w) {
            Some(&s) => Ok(s == v[x.len() - self.n]),
            None => Err(Error::PartialBlockMap(self.window_name(w))),
        }
    }
}

impl Language for BlockMapImage<'_> {
    fn symbol_count(&self) -> usize {
        self.output_names.len()
    }

    fn symbol_name(&self, i: usize) -> &str {
        &self.output_names[i]
    }

    fn contains(&self, w: &[usize]) -> Result<bool> {
        if w.is_empty() {
            return Ok(true);
        }
        if w.iter().any(|&s| s >= self.output_names.len()) {
            return Err(Error::input("symbol index out of range"));
        }
        Ok(self.preimage(w)?.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rgraph::RGraph;

    fn d2() -> Presentation {
        Presentation::identity(&RGraph::dyck(2).unwrap()).unwrap()
    }

    #[test]
    fn presentation_as_language() {
        let p = d2();
        let am = word_from_names(&p, &["a-"]).unwrap();
        assert!(p.contains(&am).unwrap());
        assert!(p.contains(&[]).unwrap());
        let bad = word_from_names(&p, &["a-", "b+"]).unwrap();
        assert!(!p.contains(&bad).unwrap());
    }

    #[test]
    fn gamma_sets() {
        let p = d2();
        let a_plus = word_from_names(&p, &["a+"]).unwrap();
        let lefts = gamma_minus(&p, &a_plus, 1).unwrap();
        // x a+ admissible for x in {a-, a+, b+}; b- a+ = 0
        assert_eq!(lefts.len(), 3);
        let rights = gamma_plus(&p, &a_plus, 1).unwrap();
        // a+ x admissible for x in {a+, b+, a-}; wait: a+ b- is fine too
        assert_eq!(rights.len(), 4);
        let pairs = gamma_pairs(&p, &a_plus, 1).unwrap();
        assert!(pairs.contains(&(vec![], vec![])));
        // inadmissible center gives empty context sets
        let bad = word_from_names(&p, &["a-", "b+"]).unwrap();
        assert!(gamma_pairs(&p, &bad, 2).unwrap().is_empty());
    }

    #[test]
    fn omega_shrinks_with_past() {
        let p = d2();
        let a_rho = word_from_names(&p, &["a+"]).unwrap();
        let a_lam = word_from_names(&p, &["a-"]).unwrap();
        // after a-, the future a+ survives every bounded past
        for m in 0..4 {
            let om = omega_plus(&p, &a_lam, 1, m).unwrap();
            assert!(om.contains(&a_rho), "m={m}");
        }
        // and omega is non-increasing in the past bound
        for a in [&a_lam, &a_rho] {
            let mut prev: Option<BTreeSet<Vec<usize>>> = None;
            for m in 0..6 {
                let om = omega_plus(&p, a, 2, m).unwrap();
                if let Some(p) = &prev {
                    assert!(om.is_subset(p), "m={m}");
                }
                prev = Some(om);
            }
        }
    }

    #[test]
    fn omega_respects_context_restrictions() {
        let p = d2();
        let a_rho = word_from_names(&p, &["a+"]).unwrap();
        // short pasts ending in a+ reduce to an empty minus run, so every
        // next letter composes; at bound 2 the pasts a- a- and b- a-
        // leave conflicting stack tops and only the minus letters survive
        for m in 0..2 {
            assert_eq!(omega_plus(&p, &a_rho, 1, m).unwrap().len(), 4, "m={m}");
        }
        let om2 = omega_plus(&p, &a_rho, 1, 2).unwrap();
        let names: Vec<String> =
            om2.iter().map(|w| word_to_names(&p, w).join("")).collect();
        assert_eq!(names, ["a-", "b-"]);
        // whereas a minus-topped center forbids the unrelated plus letter
        // regardless of the past
        let a_lam = word_from_names(&p, &["a-"]).unwrap();
        for m in 0..3 {
            let om = omega_plus(&p, &a_lam, 1, m).unwrap();
            let names: Vec<String> =
                om.iter().map(|w| word_to_names(&p, w).join("")).collect();
            assert_eq!(names, ["a+", "a-", "b-"], "m={m}");
        }
        // time-symmetric check: pasts of b+ never include b-
        let b_rho = word_from_names(&p, &["b+"]).unwrap();
        for m in 0..3 {
            let om = omega_minus(&p, &b_rho, 1, m).unwrap();
            let names: Vec<String> =
                om.iter().map(|w| word_to_names(&p, w).join("")).collect();
            assert_eq!(names, ["a+", "b+", "b-"], "m={m}");
        }
    }

    #[test]
    fn higher_block_counts() {
        let p = d2();
        let hb = HigherBlock::new(&p, 2, 100_000).unwrap();
        assert_eq!(hb.symbol_count(), 14);
        // |L_k(X^2)| = |L_{k+1}(X)|
        for k in 1..=4 {
            let hk = enumerate_words(&hb, k, k, 1_000_000).unwrap().len();
            let bk = enumerate_words(&p, k + 1, k + 1, 1_000_000).unwrap().len();
            assert_eq!(hk, bk, "k={k}");
        }
        let one = HigherBlock::new(&p, 1, 100_000).unwrap();
        for k in 1..=3 {
            assert_eq!(
                enumerate_words(&one, k, k, 1_000_000).unwrap().len(),
                enumerate_words(&p, k, k, 1_000_000).unwrap().len()
            );
        }
    }

    #[test]
    fn block_map_image_and_partiality() {
        let p = d2();
        // collapse the sign: map every 1-window to its base letter
        let table: BTreeMap<Vec<usize>, usize> = (0..p.symbol_count())
            .map(|s| {
                let name = p.symbol_name(s);
                (vec![s], if name.starts_with('a') { 0 } else { 1 })
            })
            .collect();
        let img = BlockMapImage::new(&p, 1, table, vec!["a".into(), "b".into()], 100_000).unwrap();
        assert!(img.contains(&[0, 1]).unwrap());
        assert!(img.contains(&[0, 0, 1, 1]).unwrap());
        let x = word_from_names(&p, &["a-", "b-", "b+", "a+"]).unwrap();
        assert_eq!(img.image_of(&x).unwrap(), vec![0, 1, 1, 0]);
        // a partial table errors with the offending window name
        let partial: BTreeMap<Vec<usize>, usize> =
            [(word_from_names(&p, &["a-"]).unwrap(), 0)].into_iter().collect();
        let img2 =
            BlockMapImage::new(&p, 1, partial, vec!["a".into(), "b".into()], 100_000).unwrap();
        match img2.contains(&[0, 0]) {
            Err(Error::PartialBlockMap(w)) => assert_eq!(w, "a+"),
            other => panic!("expected partial-map error, got {other:?}"),
        }
    }
}
