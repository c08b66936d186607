//! Periodic points of a presentation: admissibility, classification, and
//! counting.
//!
//! A cyclic edge word `w` of length `n` describes the candidate point
//! `w^inf` with shift period `n`. Whether that point exists in the
//! subshift reduces to one interface product: write the reduced label as
//! `a = P 1_p N` (plus run, unit, minus run) and let `c` be the reduced
//! product `N P`. Powers of `a` telescope to `P c^{k-1} N`, so all powers
//! are nonzero exactly when `c` composes with `p` on the matching side.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::{EdgeId, Presentation};
use crate::rgraph::VertexId;
use crate::semigroup::{mul, ElemClass, SgElem, Word};

/// Classification of a periodic point candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PeriodClass {
    /// Some rotation of the period word reduces to the unit of `p`.
    Neutral(VertexId),
    /// Admissible with a surviving pure-minus interface product.
    NegativeMultiplicative,
    /// Admissible with a surviving pure-plus interface product.
    PositiveMultiplicative,
    Inadmissible,
}

fn require_cycle(pres: &Presentation, w: &[EdgeId]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::input("cyclic word must be non-empty"));
    }
    if w.iter().any(|e| e.0 as usize >= pres.edge_count()) {
        return Err(Error::input("unknown edge id in cyclic word"));
    }
    for win in w.windows(2) {
        if pres.edge(win[0]).dst != pres.edge(win[1]).src {
            return Err(Error::input("edge sequence is not a path"));
        }
    }
    if pres.edge(*w.last().unwrap()).dst != pres.edge(w[0]).src {
        return Err(Error::input("path does not close into a cycle"));
    }
    Ok(())
}

/// The interface product `c = red(N P)` of a nonzero reduced label, never
/// mixed: cancellation runs until one side is exhausted.
fn interface_product(pres: &Presentation, a: &Word) -> SgElem {
    let g = pres.rgraph();
    let n_part = SgElem::Word(Word { plus: Vec::new(), idem: a.idem, minus: a.minus.clone() });
    let p_part = SgElem::Word(Word { plus: a.plus.clone(), idem: a.idem, minus: Vec::new() });
    mul(g, &n_part, &p_part)
}

fn admissible_from_parts(pres: &Presentation, a: &Word) -> bool {
    let g = pres.rgraph();
    let c = interface_product(pres, a);
    match c.classify() {
        ElemClass::Zero => false,
        ElemClass::Idempotent(q) => {
            debug_assert_eq!(q, a.idem);
            q == a.idem
        }
        ElemClass::PureMinus => c.right_unit(g) == Some(a.idem),
        ElemClass::PurePlus => c.left_unit(g) == Some(a.idem),
        ElemClass::Mixed => unreachable!("interface product of pure runs is never mixed"),
    }
}

/// Does `w^inf` belong to the subshift? Decided from the single interface
/// product of the reduced label.
pub fn periodic_admissible(pres: &Presentation, w: &[EdgeId]) -> Result<bool> {
    require_cycle(pres, w)?;
    match pres.fold_label(w) {
        SgElem::Zero => Ok(false),
        SgElem::Word(a) => Ok(admissible_from_parts(pres, &a)),
    }
}

/// Independent oracle: expand powers `w^k` for `k` up to `2|w| + 2` and
/// test every folded label for zero. The bound covers full interface
/// turnover of both runs.
pub fn periodic_admissible_brute(pres: &Presentation, w: &[EdgeId]) -> Result<bool> {
    require_cycle(pres, w)?;
    let mut acc = SgElem::unit(pres.rgraph().vertex_ids().next().unwrap());
    let mut first = true;
    for _ in 0..(2 * w.len() + 2) {
        for &e in w {
            let lab = &pres.edge(e).label;
            acc = if first { lab.clone() } else { mul(pres.rgraph(), &acc, lab) };
            first = false;
            if acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Reduced labels of all rotations of `w`.
fn rotation_labels(pres: &Presentation, w: &[EdgeId]) -> Vec<SgElem> {
    (0..w.len())
        .map(|r| {
            let rot: Vec<EdgeId> = w[r..].iter().chain(&w[..r]).copied().collect();
            pres.fold_label(&rot)
        })
        .collect()
}

/// Classifies the point `w^inf`. Neutral verdicts come from rotation
/// search: the least `p` whose unit appears as a rotation label. The
/// admissible non-neutral cases are split by the sign of the surviving
/// interface product.
pub fn periodic_class(pres: &Presentation, w: &[EdgeId]) -> Result<PeriodClass> {
    require_cycle(pres, w)?;
    let a = match pres.fold_label(w) {
        SgElem::Zero => return Ok(PeriodClass::Inadmissible),
        SgElem::Word(a) => a,
    };
    if !admissible_from_parts(pres, &a) {
        return Ok(PeriodClass::Inadmissible);
    }
    let c = interface_product(pres, &a);
    match c.classify() {
        ElemClass::Idempotent(_) => {
            let unit_vertices: Vec<VertexId> = rotation_labels(pres, w)
                .into_iter()
                .filter_map(|lab| match lab.classify() {
                    ElemClass::Idempotent(p) => Some(p),
                    _ => None,
                })
                .collect();
            // a balanced cyclic matching always surfaces a unit at the
            // stack-minimum edge boundary; the fallback below covers only
            // hypothetical corners and is cross-checked in tests
            match unit_vertices.into_iter().min() {
                Some(p) => Ok(PeriodClass::Neutral(p)),
                None => Ok(PeriodClass::Neutral(a.idem)),
            }
        }
        ElemClass::PureMinus => Ok(PeriodClass::NegativeMultiplicative),
        ElemClass::PurePlus => Ok(PeriodClass::PositiveMultiplicative),
        ElemClass::Zero | ElemClass::Mixed => unreachable!("admissible word with dead interface"),
    }
}

/// Counts of points with `S^n x = x` (sequences, not necklaces), split by
/// classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicReport {
    pub n: usize,
    pub pi_n: u64,
    pub neutral: BTreeMap<String, u64>,
    pub negative: u64,
    pub positive: u64,
}

/// Enumerates all admissible cyclic sequences of length exactly `n` and
/// classifies them. `max_nodes` bounds the search-tree size.
pub fn count_periodic(pres: &Presentation, n: usize, max_nodes: u64) -> Result<PeriodicReport> {
    if n == 0 {
        return Err(Error::input("period must be at least 1"));
    }
    let mut report = PeriodicReport {
        n,
        pi_n: 0,
        neutral: BTreeMap::new(),
        negative: 0,
        positive: 0,
    };
    let mut nodes = 0u64;
    let mut word: Vec<EdgeId> = Vec::with_capacity(n);
    for start in pres.edge_ids() {
        word.push(start);
        extend_cycles(pres, n, &mut word, &pres.edge(start).label.clone(), max_nodes, &mut nodes, &mut report)?;
        word.pop();
    }
    Ok(report)
}

fn extend_cycles(
    pres: &Presentation,
    n: usize,
    word: &mut Vec<EdgeId>,
    acc: &SgElem,
    max_nodes: u64,
    nodes: &mut u64,
    report: &mut PeriodicReport,
) -> Result<()> {
    *nodes += 1;
    if *nodes > max_nodes {
        return Err(Error::budget("periodic search nodes", max_nodes));
    }
    if acc.is_zero() {
        return Ok(());
    }
    if word.len() == n {
        if pres.edge(*word.last().unwrap()).dst != pres.edge(word[0]).src {
            return Ok(());
        }
        let a = match acc {
            SgElem::Word(a) => a,
            SgElem::Zero => return Ok(()),
        };
        if !admissible_from_parts(pres, a) {
            return Ok(());
        }
        report.pi_n += 1;
        match periodic_class(pres, word)? {
            PeriodClass::Neutral(p) => {
                *report
                    .neutral
                    .entry(pres.rgraph().vertex_name(p).to_string())
                    .or_default() += 1;
            }
            PeriodClass::NegativeMultiplicative => report.negative += 1,
            PeriodClass::PositiveMultiplicative => report.positive += 1,
            PeriodClass::Inadmissible => unreachable!("checked above"),
        }
        return Ok(());
    }
    let here = pres.edge(*word.last().unwrap()).dst;
    for e in pres.edge_ids() {
        if pres.edge(e).src != here {
            continue;
        }
        let next = mul(pres.rgraph(), acc, &pres.edge(e).label);
        if next.is_zero() {
            continue;
        }
        word.push(e);
        extend_cycles(pres, n, word, &next, max_nodes, nodes, report)?;
        word.pop();
    }
    Ok(())
}

/// `Pi_n` for `n = 1..=max_n`, the ingredient of the brute-force zeta.
pub fn pi_counts(pres: &Presentation, max_n: usize, max_nodes: u64) -> Result<Vec<u64>> {
    (1..=max_n).map(|n| Ok(count_periodic(pres, n, max_nodes)?.pi_n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rgraph::{Digraph, RGraph};

    fn d2() -> Presentation {
        Presentation::identity(&RGraph::dyck(2).unwrap()).unwrap()
    }

    fn w(p: &Presentation, names: &[&str]) -> Vec<EdgeId> {
        names.iter().map(|n| p.edge_by_name(n).unwrap()).collect()
    }

    #[test]
    fn admissibility_examples() {
        let p = d2();
        assert!(periodic_admissible(&p, &w(&p, &["a-", "a+"])).unwrap());
        assert!(!periodic_admissible(&p, &w(&p, &["a-", "b+"])).unwrap());
        // a+ b- is admissible as a word but dies as a cycle
        assert!(p.is_admissible(&w(&p, &["a+", "b-"])).unwrap());
        assert!(!periodic_admissible(&p, &w(&p, &["a+", "b-"])).unwrap());
        assert!(periodic_admissible(&p, &w(&p, &["a-"])).unwrap());
    }

    #[test]
    fn classification_examples() {
        let p = d2();
        assert_eq!(
            periodic_class(&p, &w(&p, &["a-", "a+"])).unwrap(),
            PeriodClass::Neutral(VertexId(0))
        );
        assert_eq!(
            periodic_class(&p, &w(&p, &["a+", "a-"])).unwrap(),
            PeriodClass::Neutral(VertexId(0))
        );
        assert_eq!(
            periodic_class(&p, &w(&p, &["a-"])).unwrap(),
            PeriodClass::NegativeMultiplicative
        );
        assert_eq!(
            periodic_class(&p, &w(&p, &["a-", "a-", "a+"])).unwrap(),
            PeriodClass::NegativeMultiplicative
        );
        assert_eq!(
            periodic_class(&p, &w(&p, &["b+", "a+"])).unwrap(),
            PeriodClass::PositiveMultiplicative
        );
        assert_eq!(
            periodic_class(&p, &w(&p, &["a+", "b-"])).unwrap(),
            PeriodClass::Inadmissible
        );
    }

    #[test]
    fn frozen_counts_two_loops() {
        let p = d2();
        let r1 = count_periodic(&p, 1, 1_000_000).unwrap();
        assert_eq!(r1.pi_n, 4);
        assert_eq!(r1.negative, 2);
        assert_eq!(r1.positive, 2);
        assert!(r1.neutral.is_empty());
        let r2 = count_periodic(&p, 2, 1_000_000).unwrap();
        assert_eq!(r2.pi_n, 12);
        assert_eq!(r2.negative, 4);
        assert_eq!(r2.positive, 4);
        assert_eq!(r2.neutral.get("p"), Some(&4));
        let r3 = count_periodic(&p, 3, 1_000_000).unwrap();
        assert_eq!(r3.pi_n, 40);
    }

    #[test]
    fn oracle_matches_brute_on_short_cycles() {
        let g2 = RGraph::graph_inverse(&Digraph::new(
            &["u", "v"],
            &[("e", "u", "v"), ("f", "v", "u"), ("g", "u", "u")],
        ))
        .unwrap();
        for pres in [
            d2(),
            Presentation::identity_with_unit_loops(&RGraph::dyck(2).unwrap()).unwrap(),
            Presentation::identity(&g2).unwrap(),
        ] {
            for word in all_cycles(&pres, 4) {
                assert_eq!(
                    periodic_admissible(&pres, &word).unwrap(),
                    periodic_admissible_brute(&pres, &word).unwrap(),
                    "word {:?}",
                    word
                );
            }
        }
    }

    fn all_cycles(pres: &Presentation, max_n: usize) -> Vec<Vec<EdgeId>> {
        let mut out = Vec::new();
        for n in 1..=max_n {
            let mut idx = vec![0u32; n];
            loop {
                let word: Vec<EdgeId> = idx.iter().map(|&i| EdgeId(i)).collect();
                let is_path = word.windows(2).all(|p| pres.edge(p[0]).dst == pres.edge(p[1]).src)
                    && pres.edge(word[n - 1]).dst == pres.edge(word[0]).src;
                if is_path {
                    out.push(word);
                }
                let mut k = n;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if (idx[k] as usize) < pres.edge_count() {
                        break;
                    }
                    idx[k] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        out
    }

    #[test]
    fn rotation_invariance_and_divisors() {
        let p = d2();
        for word in all_cycles(&p, 4) {
            let adm = periodic_admissible(&p, &word).unwrap();
            let class = periodic_class(&p, &word).unwrap();
            for r in 1..word.len() {
                let rot: Vec<EdgeId> =
                    word[r..].iter().chain(&word[..r]).copied().collect();
                assert_eq!(periodic_admissible(&p, &rot).unwrap(), adm);
                let rc = periodic_class(&p, &rot).unwrap();
                assert_eq!(
                    matches!(rc, PeriodClass::Neutral(_)),
                    matches!(class, PeriodClass::Neutral(_))
                );
            }
            if adm {
                for d in 2..=3 {
                    let rep: Vec<EdgeId> =
                        std::iter::repeat(word.iter().copied()).take(d).flatten().collect();
                    assert!(periodic_admissible(&p, &rep).unwrap());
                }
            }
        }
    }

    #[test]
    fn neutral_rotation_lemma_cross_check() {
        // the interface product is idempotent exactly when some rotation
        // of w (equivalently of w^k, k <= 3) reduces to a unit
        let g2 = RGraph::graph_inverse(&Digraph::new(
            &["u", "v"],
            &[("e", "u", "v"), ("f", "v", "u"), ("g", "u", "u")],
        ))
        .unwrap();
        for pres in [d2(), Presentation::identity(&g2).unwrap()] {
            for word in all_cycles(&pres, 5) {
                if !periodic_admissible(&pres, &word).unwrap() {
                    continue;
                }
                let via_class =
                    matches!(periodic_class(&pres, &word).unwrap(), PeriodClass::Neutral(_));
                for k in 1..=3usize {
                    let rep: Vec<EdgeId> =
                        std::iter::repeat(word.iter().copied()).take(k).flatten().collect();
                    let any_unit = rotation_labels(&pres, &rep)
                        .into_iter()
                        .any(|lab| matches!(lab.classify(), ElemClass::Idempotent(_)));
                    assert_eq!(any_unit, via_class, "word {:?} k={}", word, k);
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let p = d2();
        assert!(matches!(
            count_periodic(&p, 8, 10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn report_serialization() {
        let p = d2();
        let r = count_periodic(&p, 2, 1_000_000).unwrap();
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(
            js,
            "{\"n\":2,\"pi_n\":12,\"neutral\":{\"p\":4},\"negative\":4,\"positive\":4}"
        );
    }
}
