//! Labeled directed graphs presenting subshifts.
//!
//! A presentation is a finite directed graph whose edges carry nonzero
//! semigroup elements. Its language consists of the nonempty edge paths
//! whose folded label is nonzero; the symbols of the subshift are the
//! edges themselves, not the labels.

mod reach;

pub use reach::{
    check_conditions, neutral_reachability, validate_presentation, ConditionReport, NeutralReach,
    Rule, RuleViolation, VertexClassMap,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rgraph::{RGraph, VertexId};
use crate::semigroup::{check_element, mul, product, ElemClass, SgElem, Word};

/// Index of a presentation vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PVertexId(pub u32);

/// Index of a presentation edge (a symbol of the subshift).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

/// A labeled edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PEdge {
    pub name: String,
    pub src: PVertexId,
    pub dst: PVertexId,
    pub label: SgElem,
}

/// A labeled-graph presentation over an [`RGraph`] semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    rgraph: RGraph,
    vertices: Vec<String>,
    edges: Vec<PEdge>,
}

impl Presentation {
    /// Builds a presentation. Edge labels must be nonzero and in normal
    /// form over the graph; edges are stored sorted by name so indices
    /// enumerate lexicographically.
    pub fn new(
        rgraph: RGraph,
        vertices: Vec<String>,
        edges: Vec<(String, String, String, SgElem)>,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::input("presentation vertex set is empty"));
        }
        let mut vidx = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vidx.insert(v.clone(), PVertexId(i as u32)).is_some() {
                return Err(Error::input(format!("duplicate presentation vertex {v:?}")));
            }
        }
        let mut out = Vec::with_capacity(edges.len());
        let mut seen = std::collections::BTreeSet::new();
        for (name, src, dst, label) in edges {
            if !seen.insert(name.clone()) {
                return Err(Error::input(format!("duplicate edge name {name:?}")));
            }
            let src = *vidx
                .get(&src)
                .ok_or_else(|| Error::input(format!("edge {name:?} references unknown vertex {src:?}")))?;
            let dst = *vidx
                .get(&dst)
                .ok_or_else(|| Error::input(format!("edge {name:?} references unknown vertex {dst:?}")))?;
            if label.is_zero() {
                return Err(Error::input(format!("edge {name:?} carries the zero label")));
            }
            check_element(&rgraph, &label)
                .map_err(|e| Error::input(format!("edge {name:?} label invalid: {e}")))?;
            out.push(PEdge { name, src, dst, label });
        }
        out.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(Presentation { rgraph, vertices, edges: out })
    }

    pub fn rgraph(&self) -> &RGraph {
        &self.rgraph
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: PVertexId) -> &str {
        &self.vertices[v.0 as usize]
    }

    pub fn vertex(&self, name: &str) -> Option<PVertexId> {
        self.vertices.iter().position(|v| v == name).map(|i| PVertexId(i as u32))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = PVertexId> {
        (0..self.vertices.len() as u32).map(PVertexId)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &PEdge {
        &self.edges[e.0 as usize]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges
            .binary_search_by(|e| e.name.as_str().cmp(name))
            .ok()
            .map(|i| EdgeId(i as u32))
    }

    pub fn edge_names(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.name.clone()).collect()
    }

    /// Folds the labels of an edge sequence into one element; zero when the
    /// sequence is not even a path.
    pub fn fold_label(&self, word: &[EdgeId]) -> SgElem {
        for win in word.windows(2) {
            if self.edge(win[0]).dst != self.edge(win[1]).src {
                return SgElem::Zero;
            }
        }
        product(&self.rgraph, word.iter().map(|&e| &self.edge(e).label))
    }

    /// Is the nonempty edge sequence a path with nonzero folded label?
    pub fn is_admissible(&self, word: &[EdgeId]) -> Result<bool> {
        if word.is_empty() {
            return Err(Error::input("the language contains non-empty words only"));
        }
        if word.iter().any(|e| e.0 as usize >= self.edges.len()) {
            return Err(Error::input("unknown edge id in word"));
        }
        Ok(!self.fold_label(word).is_zero())
    }

    /// All admissible words of length 1 through `n`, in lexicographic order
    /// by edge index (hence by edge name). `max_words` caps the output.
    pub fn enumerate_language(&self, n: usize, max_words: usize) -> Result<Vec<Vec<EdgeId>>> {
        if n == 0 {
            return Err(Error::input("length bound must be at least 1"));
        }
        let mut out = Vec::new();
        // depth-first in lex order, pruning at zero labels; order groups by
        // length first
        let mut frontier: Vec<(Vec<EdgeId>, SgElem)> = vec![(Vec::new(), SgElem::Zero)];
        for _len in 1..=n {
            let mut next = Vec::new();
            for (w, acc) in &frontier {
                for e in self.edge_ids() {
                    if let Some(&last) = w.last() {
                        if self.edge(last).dst != self.edge(e).src {
                            continue;
                        }
                    }
                    let label = if w.is_empty() {
                        self.edge(e).label.clone()
                    } else {
                        mul(&self.rgraph, acc, &self.edge(e).label)
                    };
                    if label.is_zero() {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.push(e);
                    next.push((nw, label));
                }
            }
            for (w, _) in &next {
                out.push(w.clone());
                if out.len() > max_words {
                    return Err(Error::budget("enumerated words", max_words as u64));
                }
            }
            frontier = next;
        }
        Ok(out)
    }

    /// Counts admissible words of each length 1 through `n` without
    /// materializing them.
    pub fn count_language(&self, n: usize) -> Vec<u64> {
        let mut counts = Vec::with_capacity(n);
        let mut frontier: BTreeMap<(PVertexId, SgElem), u64> = BTreeMap::new();
        for e in self.edge_ids() {
            let ed = self.edge(e);
            *frontier.entry((ed.dst, ed.label.clone())).or_default() += 1;
        }
        for _len in 1..=n {
            counts.push(frontier.values().sum());
            let mut next: BTreeMap<(PVertexId, SgElem), u64> = BTreeMap::new();
            for ((dst, acc), k) in &frontier {
                for e in self.edge_ids() {
                    let ed = self.edge(e);
                    if ed.src != *dst {
                        continue;
                    }
                    let label = mul(&self.rgraph, acc, &ed.label);
                    if label.is_zero() {
                        continue;
                    }
                    *next.entry((ed.dst, label)).or_default() += k;
                }
            }
            frontier = next;
        }
        counts
    }

    /// Splits every composite label into a chain of fresh vertices carrying
    /// single-factor labels. The result answers path-label reachability
    /// questions for the original; it is not a shift recoding. Fails on a
    /// mixed label, which has no well-defined factor chain through units.
    pub fn atomize(&self) -> Result<Presentation> {
        let mut vertices = self.vertices.clone();
        let mut edges: Vec<(String, String, String, SgElem)> = Vec::new();
        for e in &self.edges {
            let w = match &e.label {
                SgElem::Zero => unreachable!("labels are nonzero by construction"),
                SgElem::Word(w) => w,
            };
            if !w.plus.is_empty() && !w.minus.is_empty() {
                return Err(Error::input(format!(
                    "edge {:?} carries a mixed label; atomization requires pure or unit labels",
                    e.name
                )));
            }
            let factors: Vec<SgElem> = w
                .plus
                .iter()
                .map(|&p| SgElem::plus(&self.rgraph, p))
                .chain(w.minus.iter().map(|&m| SgElem::minus(&self.rgraph, m)))
                .collect();
            if factors.len() <= 1 {
                edges.push((
                    e.name.clone(),
                    self.vertex_name(e.src).to_string(),
                    self.vertex_name(e.dst).to_string(),
                    e.label.clone(),
                ));
                continue;
            }
            let mut prev = self.vertex_name(e.src).to_string();
            for (i, f) in factors.iter().enumerate() {
                let next = if i + 1 == factors.len() {
                    self.vertex_name(e.dst).to_string()
                } else {
                    let fresh = format!("{}#{}", e.name, i + 1);
                    vertices.push(fresh.clone());
                    fresh
                };
                edges.push((format!("{}#{}", e.name, i), prev.clone(), next.clone(), f.clone()));
                prev = next;
            }
        }
        Presentation::new(self.rgraph.clone(), vertices, edges)
    }

    /// True when no label is a product of two or more edge factors.
    pub fn is_atomic(&self) -> bool {
        self.edges.iter().all(|e| e.label.word_length() <= 1)
    }

    /// The vertices not shared with `other`; used to restrict reachability
    /// output of an atomized copy back to the original vertex set.
    pub fn shares_vertex_names(&self, other: &Presentation) -> bool {
        other.vertices.iter().all(|v| self.vertices.contains(v))
    }

    /// Violations of the label-shape condition: labels must be pure minus,
    /// pure plus, or units, never mixed.
    pub fn check_label_shape(&self) -> Vec<RuleViolation> {
        self.edges
            .iter()
            .filter(|e| matches!(e.label.classify(), ElemClass::Mixed))
            .map(|e| RuleViolation {
                rule: Rule::LabelShape,
                detail: format!("edge {:?} carries a mixed label", e.name),
            })
            .collect()
    }

    /// Strong connectivity defect of the underlying graph, if any.
    pub fn connectivity_defect(&self) -> Option<String> {
        let n = self.vertices.len();
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for e in &self.edges {
            fwd[e.src.0 as usize].push(e.dst.0 as usize);
            bwd[e.dst.0 as usize].push(e.src.0 as usize);
        }
        let reach = |adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen
        };
        let down = reach(&fwd);
        let up = reach(&bwd);
        (0..n).find(|&v| !down[v] || !up[v]).map(|v| self.vertices[v].clone())
    }

    /// The presentation with vertex set the graph's own vertices and one
    /// edge per graph edge, labeled by itself. A minus edge of class
    /// `(q, r)` runs `q -> r`; a plus edge of the same class runs `r -> q`.
    pub fn identity(g: &RGraph) -> Result<Presentation> {
        let vertices: Vec<String> = g.vertex_names().to_vec();
        let mut edges = Vec::new();
        for m in g.minus_ids() {
            let e = g.minus_edge(m);
            edges.push((
                e.name.clone(),
                g.vertex_name(e.q).to_string(),
                g.vertex_name(e.r).to_string(),
                SgElem::minus(g, m),
            ));
        }
        for p in g.plus_ids() {
            let e = g.plus_edge(p);
            edges.push((
                e.name.clone(),
                g.vertex_name(e.r).to_string(),
                g.vertex_name(e.q).to_string(),
                SgElem::plus(g, p),
            ));
        }
        Presentation::new(g.clone(), vertices, edges)
    }

    /// Adds a unit-labeled loop at every vertex of the identity
    /// presentation; loop at vertex `p` is labeled `1_p` and named `u_p`
    /// (just `u` on a single-vertex graph).
    pub fn identity_with_unit_loops(g: &RGraph) -> Result<Presentation> {
        let base = Presentation::identity(g)?;
        let mut edges: Vec<(String, String, String, SgElem)> = base
            .edges
            .iter()
            .map(|e| {
                (
                    e.name.clone(),
                    base.vertex_name(e.src).to_string(),
                    base.vertex_name(e.dst).to_string(),
                    e.label.clone(),
                )
            })
            .collect();
        for v in g.vertex_ids() {
            let name = if g.vertex_count() == 1 {
                "u".to_string()
            } else {
                format!("u_{}", g.vertex_name(v))
            };
            let vn = g.vertex_name(v).to_string();
            edges.push((name, vn.clone(), vn, SgElem::unit(v)));
        }
        Presentation::new(g.clone(), base.vertices.clone(), edges)
    }

    /// The two-block recoding: vertices are the edges of `self`, and for
    /// every admissible two-edge path `s t` there is an edge `s -> t`
    /// labeled by the label of `t`. The recoding presents the same
    /// subshift, so cyclic words and zeta data match the original; its
    /// finite path language may be strictly larger than the shifted
    /// original, because a finite path only folds labels from its second
    /// block onward.
    pub fn two_block(&self) -> Result<Presentation> {
        let vertices: Vec<String> = self.edges.iter().map(|e| e.name.clone()).collect();
        let mut edges = Vec::new();
        for s in self.edge_ids() {
            for t in self.edge_ids() {
                if self.edge(s).dst != self.edge(t).src {
                    continue;
                }
                let lab = mul(&self.rgraph, &self.edge(s).label, &self.edge(t).label);
                if lab.is_zero() {
                    continue;
                }
                edges.push((
                    format!("{}.{}", self.edge(s).name, self.edge(t).name),
                    self.edge(s).name.clone(),
                    self.edge(t).name.clone(),
                    self.edge(t).label.clone(),
                ));
            }
        }
        Presentation::new(self.rgraph.clone(), vertices, edges)
    }
}

#[derive(Serialize, Deserialize)]
struct LabelDto {
    plus: Vec<String>,
    idem: String,
    minus: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PEdgeDto {
    id: String,
    src: String,
    dst: String,
    label: LabelDto,
}

#[derive(Serialize, Deserialize)]
struct PresentationDto {
    rgraph: RGraph,
    #[serde(rename = "V")]
    vertices: Vec<String>,
    edges: Vec<PEdgeDto>,
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let g = &self.rgraph;
        let dto = PresentationDto {
            rgraph: g.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    let w = match &e.label {
                        SgElem::Word(w) => w,
                        SgElem::Zero => unreachable!("labels are nonzero"),
                    };
                    PEdgeDto {
                        id: e.name.clone(),
                        src: self.vertex_name(e.src).to_string(),
                        dst: self.vertex_name(e.dst).to_string(),
                        label: LabelDto {
                            plus: w.plus.iter().map(|&p| g.plus_edge(p).name.clone()).collect(),
                            idem: g.vertex_name(w.idem).to_string(),
                            minus: w.minus.iter().map(|&m| g.minus_edge(m).name.clone()).collect(),
                        },
                    }
                })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = PresentationDto::deserialize(d)?;
        let g = dto.rgraph;
        let mut edges = Vec::with_capacity(dto.edges.len());
        for e in dto.edges {
            let mut plus = Vec::new();
            for p in &e.label.plus {
                plus.push(
                    g.plus_by_name(p)
                        .ok_or_else(|| serde::de::Error::custom(format!("unknown plus edge {p:?}")))?,
                );
            }
            let idem: VertexId = g
                .vertex(&e.label.idem)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown vertex {:?}", e.label.idem)))?;
            let mut minus = Vec::new();
            for m in &e.label.minus {
                minus.push(
                    g.minus_by_name(m)
                        .ok_or_else(|| serde::de::Error::custom(format!("unknown minus edge {m:?}")))?,
                );
            }
            edges.push((e.id, e.src, e.dst, SgElem::Word(Word { plus, idem, minus })));
        }
        Presentation::new(g, dto.vertices, edges).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Presentation({} vertices, {} edges over {})",
            self.vertices.len(),
            self.edges.len(),
            self.rgraph
        )
    }
}
