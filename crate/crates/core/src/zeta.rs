//! Zeta functions of presented subshifts: code-matrix evaluation and the
//! brute-force oracle.
//!
//! The determinant route decomposes periodic points into circular Markov
//! codes. Neutral behavior is carried by first-return neutral words
//! (`C0`); descending and ascending behavior by sign-homogeneous symbol
//! alphabets (`Sigma-`, `Sigma+`) attached to seed codes (`C-0`, `C+0`)
//! whose proper suffixes (prefixes) never fall back into the closed
//! sign-or-unit set. The zeta function is then
//!
//! ```text
//!           det(1 - H^{C0})
//! ---------------------------------------------------------------
//! det(1-A-z) det(1-H^{C-}) det(1-H^{C+}) det(1-A+z)
//! ```
//!
//! with `H^{C-} = H^{C-0} (1 - B-z)^{-1}` and the mirror on the plus
//! side. The independent oracle exponentiates periodic-point counts.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::periodic;
use crate::presentation::{check_conditions, EdgeId, PVertexId, Presentation};
use crate::semigroup::{mul, ElemClass, SgElem};
use crate::series::{FormalSeries, SeriesMatrix};

/// Boundary convention for the neutral code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Neutral code words are first returns: any length, no proper
    /// nonempty prefix with idempotent label. Required for unique parsing
    /// of periodic points; the default.
    #[default]
    FirstReturn,
    /// Neutral code words have length at least two and only prefixes of
    /// length strictly between one and the word length are excluded.
    /// Kept for comparison; disagrees with the oracle on unit loops.
    StrictPaper,
}

/// One code word with its endpoint states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeWord {
    pub edges: Vec<EdgeId>,
    pub s: PVertexId,
    pub t: PVertexId,
}

/// A set of code words enumerated exhaustively up to `maxlen`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSet {
    pub maxlen: usize,
    pub words: Vec<CodeWord>,
}

impl CodeSet {
    fn from_words(pres: &Presentation, maxlen: usize, mut words: Vec<Vec<EdgeId>>) -> CodeSet {
        words.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
        CodeSet {
            maxlen,
            words: words
                .into_iter()
                .map(|w| CodeWord {
                    s: pres.edge(w[0]).src,
                    t: pres.edge(*w.last().unwrap()).dst,
                    edges: w,
                })
                .collect(),
        }
    }

    pub fn count_by_length(&self, len: usize) -> usize {
        self.words.iter().filter(|w| w.edges.len() == len).count()
    }
}

fn is_minusish(x: &SgElem) -> bool {
    matches!(x.classify(), ElemClass::PureMinus | ElemClass::Idempotent(_))
}

fn is_plusish(x: &SgElem) -> bool {
    matches!(x.classify(), ElemClass::PurePlus | ElemClass::Idempotent(_))
}

/// The Markov-part alphabets: symbols with pure-minus-or-unit labels on
/// the minus side, pure-plus-or-unit on the plus side. Unit-labeled
/// symbols belong to both.
pub fn markov_alphabets(pres: &Presentation) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let minus = pres.edge_ids().filter(|&e| is_minusish(&pres.edge(e).label)).collect();
    let plus = pres.edge_ids().filter(|&e| is_plusish(&pres.edge(e).label)).collect();
    (minus, plus)
}

/// Symbol-level 0-1 adjacency: `(rho, tau) -> 1` iff the path can continue.
pub fn symbol_adjacency(pres: &Presentation, syms: &[EdgeId]) -> Vec<Vec<i64>> {
    syms.iter()
        .map(|&r| {
            syms.iter()
                .map(|&t| (pres.edge(r).dst == pres.edge(t).src) as i64)
                .collect()
        })
        .collect()
}

/// Vertex-level count matrix of a sub-alphabet: entry `(u, v)` counts its
/// symbols running `u -> v`.
pub fn vertex_count_matrix(pres: &Presentation, syms: &[EdgeId]) -> Vec<Vec<i64>> {
    let n = pres.vertex_count();
    let mut m = vec![vec![0i64; n]; n];
    for &e in syms {
        m[pres.edge(e).src.0 as usize][pres.edge(e).dst.0 as usize] += 1;
    }
    m
}

fn big(u: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(u))
}

fn label_runs(x: &SgElem) -> (usize, usize) {
    match x {
        SgElem::Zero => (0, 0),
        SgElem::Word(w) => (w.plus.len(), w.minus.len()),
    }
}

/// Largest number of plus factors any one symbol can contribute; bounds
/// how fast a pending minus stack can cancel.
fn max_plus_run(pres: &Presentation) -> usize {
    pres.edge_ids().map(|e| label_runs(&pres.edge(e).label).0).max().unwrap_or(0)
}

fn max_minus_run(pres: &Presentation) -> usize {
    pres.edge_ids().map(|e| label_runs(&pres.edge(e).label).1).max().unwrap_or(0)
}

/// Can a pending run of `d` factors still be consumed by `steps` more
/// symbols when each symbol consumes at most `per_step`?
fn within_horizon(d: usize, per_step: usize, steps: usize) -> bool {
    if d == 0 {
        return true;
    }
    per_step > 0 && d.div_ceil(per_step) <= steps
}

/// Counting route for the neutral code matrix: entry `(u, v)` holds the
/// generating series of neutral code words `u -> v` by length.
///
/// A prefix of a neutral word never has a plus factor in its reduced
/// label: appending symbols can only pop the minus stack or push onto the
/// plus run, and a plus run never shrinks again. The walk state is
/// therefore `(vertex, pure-minus stack)`, which keeps the state space
/// small.
pub fn count_c0_matrix(
    pres: &Presentation,
    order: usize,
    conv: Convention,
) -> Result<SeriesMatrix> {
    let n = pres.vertex_count();
    let g = pres.rgraph();
    let shrink = max_plus_run(pres);
    let mut h = SeriesMatrix::zero(n, order);
    for u in pres.vertex_ids() {
        // state: at vertex v with reduced label acc (empty plus run)
        let mut states: HashMap<(PVertexId, SgElem), u128> = HashMap::new();
        for e in pres.edge_ids() {
            if pres.edge(e).src == u {
                let acc = pres.edge(e).label.clone();
                if !within_horizon(label_runs(&acc).1, shrink, order.saturating_sub(1)) {
                    continue;
                }
                *states.entry((pres.edge(e).dst, acc)).or_default() += 1;
            }
        }
        for len in 1..=order {
            let mut next: HashMap<(PVertexId, SgElem), u128> = HashMap::new();
            for ((v, acc), k) in &states {
                let idem = matches!(acc.classify(), ElemClass::Idempotent(_));
                if idem {
                    let record = match conv {
                        Convention::FirstReturn => true,
                        Convention::StrictPaper => len >= 2,
                    };
                    if record {
                        let c = h.at_mut(u.0 as usize, v.0 as usize);
                        *c = &*c + &FormalSeries::monomial(big(*k), len, order);
                    }
                    let extend = matches!(conv, Convention::StrictPaper) && len == 1;
                    if !extend {
                        continue;
                    }
                }
                if len == order {
                    continue;
                }
                for e in pres.edge_ids() {
                    if pres.edge(e).src != *v {
                        continue;
                    }
                    let nacc = mul(g, acc, &pres.edge(e).label);
                    match nacc.classify() {
                        ElemClass::Zero | ElemClass::PurePlus | ElemClass::Mixed => continue,
                        _ => {}
                    }
                    // a stack too deep to cancel before the horizon is dead
                    if !within_horizon(label_runs(&nacc).1, shrink, order - (len + 1)) {
                        continue;
                    }
                    *next.entry((pres.edge(e).dst, nacc)).or_default() += *k;
                }
            }
            states = next;
        }
    }
    Ok(h)
}

/// Counting route for the minus-side seed code: words of length at least
/// two whose label is pure minus or a unit while no proper nonempty
/// suffix is. Built right to left; interior suffixes are always pure
/// plus, so the state is `(leftmost vertex, pure-plus suffix value, end
/// vertex)`.
pub fn count_cminus_circ_matrix(pres: &Presentation, order: usize) -> Result<SeriesMatrix> {
    let n = pres.vertex_count();
    let g = pres.rgraph();
    let shrink = max_minus_run(pres);
    let mut h = SeriesMatrix::zero(n, order);
    let mut states: HashMap<(PVertexId, SgElem, PVertexId), u128> = HashMap::new();
    for e in pres.edge_ids() {
        let ed = pres.edge(e);
        if matches!(ed.label.classify(), ElemClass::PurePlus)
            && within_horizon(label_runs(&ed.label).0, shrink, order.saturating_sub(1))
        {
            *states.entry((ed.src, ed.label.clone(), ed.dst)).or_default() += 1;
        }
    }
    for len in 1..order {
        let mut next: HashMap<(PVertexId, SgElem, PVertexId), u128> = HashMap::new();
        for ((v, suffix, end), k) in &states {
            for e in pres.edge_ids() {
                let ed = pres.edge(e);
                if ed.dst != *v {
                    continue;
                }
                let nsuf = mul(g, &ed.label, suffix);
                match nsuf.classify() {
                    ElemClass::Zero => {}
                    ElemClass::PurePlus => {
                        if within_horizon(label_runs(&nsuf).0, shrink, order - (len + 1)) {
                            *next.entry((ed.src, nsuf, *end)).or_default() += *k;
                        }
                    }
                    ElemClass::PureMinus | ElemClass::Idempotent(_) => {
                        let c = h.at_mut(ed.src.0 as usize, end.0 as usize);
                        *c = &*c + &FormalSeries::monomial(big(*k), len + 1, order);
                    }
                    ElemClass::Mixed => {
                        unreachable!("pure label times pure plus is never mixed")
                    }
                }
            }
        }
        states = next;
    }
    Ok(h)
}

/// Counting route for the plus-side seed code, the time mirror: words of
/// length at least two whose label is pure plus or a unit while no
/// proper nonempty prefix is; interior prefixes are always pure minus.
pub fn count_cplus_circ_matrix(pres: &Presentation, order: usize) -> Result<SeriesMatrix> {
    let n = pres.vertex_count();
    let g = pres.rgraph();
    let shrink = max_plus_run(pres);
    let mut h = SeriesMatrix::zero(n, order);
    let mut states: HashMap<(PVertexId, SgElem, PVertexId), u128> = HashMap::new();
    for e in pres.edge_ids() {
        let ed = pres.edge(e);
        if matches!(ed.label.classify(), ElemClass::PureMinus)
            && within_horizon(label_runs(&ed.label).1, shrink, order.saturating_sub(1))
        {
            *states.entry((ed.src, ed.label.clone(), ed.dst)).or_default() += 1;
        }
    }
    for len in 1..order {
        let mut next: HashMap<(PVertexId, SgElem, PVertexId), u128> = HashMap::new();
        for ((start, prefix, v), k) in &states {
            for e in pres.edge_ids() {
                let ed = pres.edge(e);
                if ed.src != *v {
                    continue;
                }
                let npre = mul(g, prefix, &ed.label);
                match npre.classify() {
                    ElemClass::Zero => {}
                    ElemClass::PureMinus => {
                        if within_horizon(label_runs(&npre).1, shrink, order - (len + 1)) {
                            *next.entry((*start, npre, ed.dst)).or_default() += *k;
                        }
                    }
                    ElemClass::PurePlus | ElemClass::Idempotent(_) => {
                        let c = h.at_mut(start.0 as usize, ed.dst.0 as usize);
                        *c = &*c + &FormalSeries::monomial(big(*k), len + 1, order);
                    }
                    ElemClass::Mixed => {
                        unreachable!("pure minus times pure label is never mixed")
                    }
                }
            }
        }
        states = next;
    }
    Ok(h)
}

/// Enumerates neutral code words up to `maxlen` explicitly. Independent
/// of the counting route; tests compare the two.
pub fn enumerate_c0(
    pres: &Presentation,
    maxlen: usize,
    conv: Convention,
    budget: usize,
) -> Result<CodeSet> {
    let g = pres.rgraph();
    let mut found: Vec<Vec<EdgeId>> = Vec::new();
    let mut stack: Vec<(Vec<EdgeId>, SgElem)> = pres
        .edge_ids()
        .map(|e| (vec![e], pres.edge(e).label.clone()))
        .collect();
    while let Some((word, acc)) = stack.pop() {
        if acc.is_zero() {
            continue;
        }
        let idem = matches!(acc.classify(), ElemClass::Idempotent(_));
        if idem {
            let record = match conv {
                Convention::FirstReturn => true,
                Convention::StrictPaper => word.len() >= 2,
            };
            if record {
                found.push(word.clone());
                if found.len() > budget {
                    return Err(Error::budget("code words", budget as u64));
                }
            }
            if !(matches!(conv, Convention::StrictPaper) && word.len() == 1) {
                continue;
            }
        } else if matches!(acc.classify(), ElemClass::PurePlus | ElemClass::Mixed) {
            // a plus factor never cancels later; no neutral completion
            continue;
        }
        if word.len() == maxlen {
            continue;
        }
        let here = pres.edge(*word.last().unwrap()).dst;
        for e in pres.edge_ids() {
            if pres.edge(e).src != here {
                continue;
            }
            let nacc = mul(g, &acc, &pres.edge(e).label);
            if nacc.is_zero() {
                continue;
            }
            let mut nw = word.clone();
            nw.push(e);
            stack.push((nw, nacc));
        }
    }
    Ok(CodeSet::from_words(pres, maxlen, found))
}

/// Enumerates the seed codes by filtering the language: a minus-side seed
/// word has a pure-minus-or-unit label and no proper nonempty suffix
/// with one; mirror for the plus side. Deliberately separate from the
/// counting DPs.
pub fn enumerate_cpm_circ(
    pres: &Presentation,
    maxlen: usize,
    budget: usize,
) -> Result<(CodeSet, CodeSet)> {
    let mut minus_words = Vec::new();
    let mut plus_words = Vec::new();
    for w in pres.enumerate_language(maxlen, budget)? {
        if w.len() < 2 {
            continue;
        }
        if is_minusish(&pres.fold_label(&w))
            && (1..w.len()).all(|j| !is_minusish(&pres.fold_label(&w[j..])))
        {
            minus_words.push(w.clone());
        }
        if is_plusish(&pres.fold_label(&w))
            && (1..w.len()).all(|j| !is_plusish(&pres.fold_label(&w[..j])))
        {
            plus_words.push(w);
        }
    }
    Ok((
        CodeSet::from_words(pres, maxlen, minus_words),
        CodeSet::from_words(pres, maxlen, plus_words),
    ))
}

/// Enumerates the full one-sided codes: minus-side seeds extended by
/// Markov-part tails on the right, plus-side seeds extended by heads on
/// the left, all within `maxlen`.
pub fn enumerate_cpm(
    pres: &Presentation,
    maxlen: usize,
    budget: usize,
) -> Result<(CodeSet, CodeSet)> {
    let (seed_minus, seed_plus) = enumerate_cpm_circ(pres, maxlen, budget)?;
    let (sigma_minus, sigma_plus) = markov_alphabets(pres);
    let mut minus_words: Vec<Vec<EdgeId>> = Vec::new();
    for cw in &seed_minus.words {
        let mut stack: Vec<Vec<EdgeId>> = vec![cw.edges.clone()];
        while let Some(w) = stack.pop() {
            if minus_words.len() >= budget {
                return Err(Error::budget("code words", budget as u64));
            }
            minus_words.push(w.clone());
            if w.len() == maxlen {
                continue;
            }
            let here = pres.edge(*w.last().unwrap()).dst;
            for &e in &sigma_minus {
                if pres.edge(e).src != here {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(e);
                if !pres.fold_label(&nw).is_zero() {
                    stack.push(nw);
                }
            }
        }
    }
    let mut plus_words: Vec<Vec<EdgeId>> = Vec::new();
    for cw in &seed_plus.words {
        let mut stack: Vec<Vec<EdgeId>> = vec![cw.edges.clone()];
        while let Some(w) = stack.pop() {
            if plus_words.len() >= budget {
                return Err(Error::budget("code words", budget as u64));
            }
            plus_words.push(w.clone());
            if w.len() == maxlen {
                continue;
            }
            let here = pres.edge(w[0]).src;
            for &e in &sigma_plus {
                if pres.edge(e).dst != here {
                    continue;
                }
                let mut nw = vec![e];
                nw.extend(w.iter().copied());
                if !pres.fold_label(&nw).is_zero() {
                    stack.push(nw);
                }
            }
        }
    }
    Ok((
        CodeSet::from_words(pres, maxlen, minus_words),
        CodeSet::from_words(pres, maxlen, plus_words),
    ))
}

/// Generating matrix of an enumerated code set: entry `(u, v)` sums
/// `count(length n, u -> v) z^n`. Errors when the requested order
/// exceeds the enumeration depth.
pub fn h_matrix(pres: &Presentation, code: &CodeSet, order: usize) -> Result<SeriesMatrix> {
    if order > code.maxlen {
        return Err(Error::input(format!(
            "order {} exceeds enumeration depth {}; enumerate deeper",
            order, code.maxlen
        )));
    }
    let n = pres.vertex_count();
    let mut h = SeriesMatrix::zero(n, order);
    for w in &code.words {
        if w.edges.len() > order {
            continue;
        }
        let c = h.at_mut(w.s.0 as usize, w.t.0 as usize);
        *c = &*c + &FormalSeries::monomial(big(1), w.edges.len(), order);
    }
    Ok(h)
}

fn det_i_minus(m: &SeriesMatrix) -> FormalSeries {
    SeriesMatrix::identity(m.size(), m.series_order()).sub(m).det()
}

/// The determinant-route zeta function.
pub fn zeta_det_route(
    pres: &Presentation,
    order: usize,
    conv: Convention,
) -> Result<FormalSeries> {
    let h0 = count_c0_matrix(pres, order, conv)?;
    let hm0 = count_cminus_circ_matrix(pres, order)?;
    let hp0 = count_cplus_circ_matrix(pres, order)?;
    let (sigma_minus, sigma_plus) = markov_alphabets(pres);
    let bm = SeriesMatrix::scalar_times_z(&vertex_count_matrix(pres, &sigma_minus), order);
    let bp = SeriesMatrix::scalar_times_z(&vertex_count_matrix(pres, &sigma_plus), order);
    let inv_minus = bm.neumann_inverse().ok_or_else(|| Error::input("tail matrix has a unit"))?;
    let inv_plus = bp.neumann_inverse().ok_or_else(|| Error::input("head matrix has a unit"))?;
    let h_cminus = hm0.matmul(&inv_minus);
    let h_cplus = inv_plus.matmul(&hp0);
    let am = SeriesMatrix::scalar_times_z(&symbol_adjacency(pres, &sigma_minus), order);
    let ap = SeriesMatrix::scalar_times_z(&symbol_adjacency(pres, &sigma_plus), order);
    let numerator = det_i_minus(&h0);
    let denominator = &(&det_i_minus(&am) * &det_i_minus(&h_cminus))
        * &(&det_i_minus(&h_cplus) * &det_i_minus(&ap));
    let recip = denominator
        .recip()
        .ok_or_else(|| Error::input("denominator has zero constant term"))?;
    Ok(&numerator * &recip)
}

/// Brute-force zeta: exponentiate the periodic-point counts.
pub fn zeta_brute_force(
    pres: &Presentation,
    order: usize,
    max_nodes: u64,
) -> Result<FormalSeries> {
    let pi = periodic::pi_counts(pres, order, max_nodes)?;
    let mut acc = FormalSeries::zero(order);
    for (i, &p) in pi.iter().enumerate() {
        let n = i + 1;
        acc = &acc
            + &FormalSeries::monomial(
                BigRational::new(BigInt::from(p), BigInt::from(n as u64)),
                n,
                order,
            );
    }
    acc.exp().ok_or_else(|| Error::input("zeta exponent must have zero constant term"))
}

/// Zeta functions of the per-class neutral point sets, via periodic
/// counting. Keys are graph vertex names.
pub fn neutral_zetas_brute(
    pres: &Presentation,
    order: usize,
    max_nodes: u64,
) -> Result<BTreeMap<String, FormalSeries>> {
    let g = pres.rgraph();
    let mut per_class: BTreeMap<String, FormalSeries> = g
        .vertex_names()
        .iter()
        .map(|v| (v.clone(), FormalSeries::zero(order)))
        .collect();
    for n in 1..=order {
        let report = periodic::count_periodic(pres, n, max_nodes)?;
        for (p, count) in &report.neutral {
            let acc = per_class.get_mut(p).expect("class name");
            *acc = &*acc
                + &FormalSeries::monomial(
                    BigRational::new(BigInt::from(*count), BigInt::from(n as u64)),
                    n,
                    order,
                );
        }
    }
    per_class
        .into_iter()
        .map(|(p, acc)| {
            let z = acc.exp().ok_or_else(|| Error::input("exponent shape"))?;
            Ok((p, z))
        })
        .collect()
}

/// Zeta functions of the per-class neutral point sets, via the neutral
/// code matrix restricted to each class block. Cross-checks the brute
/// route.
pub fn neutral_zetas_det(
    pres: &Presentation,
    order: usize,
    conv: Convention,
) -> Result<BTreeMap<String, FormalSeries>> {
    let g = pres.rgraph();
    let report = check_conditions(pres)?;
    if !report.passed() {
        return Err(Error::input("presentation fails validity; class blocks undefined"));
    }
    let h0 = count_c0_matrix(pres, order, conv)?;
    let mut out = BTreeMap::new();
    for p in g.vertex_ids() {
        let members = report.class_map.class_members(p);
        let sub = SeriesMatrix::from_fn(members.len(), order, |i, j| {
            h0.at(members[i].0 as usize, members[j].0 as usize).clone()
        });
        let det = det_i_minus(&sub);
        let z = det.recip().ok_or_else(|| Error::input("block determinant not invertible"))?;
        out.insert(g.vertex_name(p).to_string(), z);
    }
    Ok(out)
}

/// The class-separating polynomial: product over graph vertices `p` of
/// `(xi - zeta of the neutral class of p)`, with coefficients lowest
/// degree first. Equal for presentations of the same subshift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XiPolynomial {
    pub coeffs: Vec<FormalSeries>,
    pub warning: Option<String>,
}

pub fn class_polynomial(
    pres: &Presentation,
    order: usize,
    max_nodes: u64,
) -> Result<XiPolynomial> {
    let zetas = neutral_zetas_brute(pres, order, max_nodes)?;
    let mut coeffs = vec![FormalSeries::one(order)];
    for z in zetas.values() {
        // multiply by (xi - z)
        let mut next = vec![FormalSeries::zero(order); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * z);
        }
        coeffs = next;
    }
    let weak = pres
        .vertex_ids()
        .find(|&v| pres.edge_ids().filter(|&e| pres.edge(e).dst == v).count() < 2);
    let warning = weak.map(|v| {
        format!(
            "vertex {:?} has fewer than two incoming edges; the invariant is unproven here",
            pres.vertex_name(v)
        )
    });
    Ok(XiPolynomial { coeffs, warning })
}

/// Bounded circularity check: every admissible neutral cyclic word up to
/// `max_period` has exactly one cyclic factorization into neutral code
/// words. Returns the number of points checked.
pub fn circularity_spot_check(
    pres: &Presentation,
    max_period: usize,
    conv: Convention,
    max_nodes: u64,
) -> Result<usize> {
    let code = enumerate_c0(pres, max_period, conv, 1_000_000)?;
    let mut checked = 0usize;
    for n in 1..=max_period {
        for word in all_cycles_of_length(pres, n, max_nodes)? {
            if !matches!(
                periodic::periodic_class(pres, &word)?,
                periodic::PeriodClass::Neutral(_)
            ) {
                continue;
            }
            checked += 1;
            let mut total = 0usize;
            let mut block_counts = Vec::new();
            for r in 0..n {
                let rot: Vec<EdgeId> = word[r..].iter().chain(&word[..r]).copied().collect();
                let facs = linear_factorizations(&rot, &code);
                total += facs.len();
                block_counts.extend(facs);
            }
            // a unique cyclic factorization into k blocks is seen from
            // exactly k rotations, once each
            if block_counts.is_empty() || block_counts.iter().any(|&b| b != block_counts[0]) {
                return Err(Error::input(format!(
                    "cyclic word {:?} does not parse uniquely",
                    word.iter().map(|e| pres.edge(*e).name.clone()).collect::<Vec<_>>()
                )));
            }
            if total != block_counts[0] {
                return Err(Error::input(format!(
                    "cyclic word {:?} parses {} ways across rotations, expected {}",
                    word.iter().map(|e| pres.edge(*e).name.clone()).collect::<Vec<_>>(),
                    total,
                    block_counts[0]
                )));
            }
        }
    }
    Ok(checked)
}

fn all_cycles_of_length(
    pres: &Presentation,
    n: usize,
    max_nodes: u64,
) -> Result<Vec<Vec<EdgeId>>> {
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut word = Vec::with_capacity(n);
    fn go(
        pres: &Presentation,
        n: usize,
        word: &mut Vec<EdgeId>,
        acc: &SgElem,
        out: &mut Vec<Vec<EdgeId>>,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(Error::budget("cycle enumeration nodes", max_nodes));
        }
        if acc.is_zero() {
            return Ok(());
        }
        if word.len() == n {
            if pres.edge(*word.last().unwrap()).dst == pres.edge(word[0]).src {
                out.push(word.clone());
            }
            return Ok(());
        }
        let here = pres.edge(*word.last().unwrap()).dst;
        for e in pres.edge_ids() {
            if pres.edge(e).src != here {
                continue;
            }
            let nacc = mul(pres.rgraph(), acc, &pres.edge(e).label);
            if nacc.is_zero() {
                continue;
            }
            word.push(e);
            go(pres, n, word, &nacc, out, nodes, max_nodes)?;
            word.pop();
        }
        Ok(())
    }
    for start in pres.edge_ids() {
        word.push(start);
        let acc = pres.edge(start).label.clone();
        go(pres, n, &mut word, &acc, &mut out, &mut nodes, max_nodes)?;
        word.pop();
    }
    Ok(out)
}

/// Number of code words in each complete left-to-right factorization of
/// `w`, one entry per factorization.
fn linear_factorizations(w: &[EdgeId], code: &CodeSet) -> Vec<usize> {
    fn go(w: &[EdgeId], code: &CodeSet, from: usize, blocks: usize, out: &mut Vec<usize>) {
        if from == w.len() {
            out.push(blocks);
            return;
        }
        for cw in &code.words {
            let l = cw.edges.len();
            if from + l <= w.len() && w[from..from + l] == cw.edges[..] {
                go(w, code, from + l, blocks + 1, out);
            }
        }
    }
    let mut out = Vec::new();
    go(w, code, 0, 0, &mut out);
    out
}
