//! Partitioned graphs with a pairing relation between oppositely oriented
//! edge families.
//!
//! An [`RGraph`] consists of a vertex set `P`, a family of minus edges where
//! an edge in class `(q, r)` runs from `q` to `r`, a family of plus edges
//! where an edge in class `(q, r)` runs from `r` to `q`, and a relation `R`
//! pairing minus and plus edges of the same class. The relation drives the
//! cancellation rule of the associated semigroup (see [`crate::semigroup`]):
//! a minus edge followed by a related plus edge collapses to the unit of
//! their common left vertex, and an unrelated pair annihilates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a vertex in an [`RGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Index of a minus edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinusId(pub u32);

/// Index of a plus edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlusId(pub u32);

/// Class data of an edge: `q` and `r` name the vertex pair the edge belongs
/// to. A minus edge of class `(q, r)` has source `q` and target `r`; a plus
/// edge of the same class has source `r` and target `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub q: VertexId,
    pub r: VertexId,
}

/// A partitioned graph with paired edge families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RGraph {
    vertices: Vec<String>,
    minus: Vec<Edge>,
    plus: Vec<Edge>,
    relation: BTreeSet<(u32, u32)>,
}

/// Structural defects reported by [`RGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RGraphViolation {
    /// Exactly one of the two edge families of class `(q, r)` is empty.
    UnbalancedClass { q: String, r: String },
    /// The graph of minus edges is not strongly connected; `stranded` is a
    /// vertex not mutually reachable with the first vertex.
    NotStronglyConnected { stranded: String },
}

/// Violation of the recovery condition: two distinct edges of one class and
/// orientation have identical sets of related partners.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionAViolation {
    pub side: &'static str,
    pub first: String,
    pub second: String,
}

impl RGraph {
    /// Builds a graph from named parts. Edges are stored sorted by name, so
    /// edge indices enumerate lexicographically. Referential integrity and
    /// classwise shape of the relation are enforced here; the softer
    /// structural invariants are left to [`RGraph::validate`].
    pub fn new(
        vertices: Vec<String>,
        minus: Vec<(String, String, String)>,
        plus: Vec<(String, String, String)>,
        relation: Vec<(String, String)>,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::input("vertex set is empty"));
        }
        let mut vidx = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vidx.insert(v.clone(), VertexId(i as u32)).is_some() {
                return Err(Error::input(format!("duplicate vertex name {v:?}")));
            }
        }
        let intern = |edges: Vec<(String, String, String)>, side: &str| -> Result<Vec<Edge>> {
            let mut out = Vec::with_capacity(edges.len());
            let mut seen = BTreeSet::new();
            for (name, q, r) in edges {
                if !seen.insert(name.clone()) {
                    return Err(Error::input(format!("duplicate {side} edge name {name:?}")));
                }
                let q = *vidx
                    .get(&q)
                    .ok_or_else(|| Error::input(format!("edge {name:?} references unknown vertex {q:?}")))?;
                let r = *vidx
                    .get(&r)
                    .ok_or_else(|| Error::input(format!("edge {name:?} references unknown vertex {r:?}")))?;
                out.push(Edge { name, q, r });
            }
            out.sort_by(|a, b| a.name.cmp(&b.name));
            Ok(out)
        };
        let minus = intern(minus, "minus")?;
        let plus = intern(plus, "plus")?;
        let mpos: BTreeMap<&str, u32> =
            minus.iter().enumerate().map(|(i, e)| (e.name.as_str(), i as u32)).collect();
        let ppos: BTreeMap<&str, u32> =
            plus.iter().enumerate().map(|(i, e)| (e.name.as_str(), i as u32)).collect();
        let mut rel = BTreeSet::new();
        for (m, p) in relation {
            let mi = *mpos
                .get(m.as_str())
                .ok_or_else(|| Error::input(format!("relation references unknown minus edge {m:?}")))?;
            let pi = *ppos
                .get(p.as_str())
                .ok_or_else(|| Error::input(format!("relation references unknown plus edge {p:?}")))?;
            let (em, ep) = (&minus[mi as usize], &plus[pi as usize]);
            if (em.q, em.r) != (ep.q, ep.r) {
                return Err(Error::input(format!(
                    "relation pair ({m:?}, {p:?}) joins edges of different classes"
                )));
            }
            rel.insert((mi, pi));
        }
        Ok(RGraph { vertices, minus, plus, relation: rel })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0 as usize]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(|i| VertexId(i as u32))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn minus_count(&self) -> usize {
        self.minus.len()
    }

    pub fn plus_count(&self) -> usize {
        self.plus.len()
    }

    pub fn minus_edge(&self, m: MinusId) -> &Edge {
        &self.minus[m.0 as usize]
    }

    pub fn plus_edge(&self, p: PlusId) -> &Edge {
        &self.plus[p.0 as usize]
    }

    pub fn minus_ids(&self) -> impl Iterator<Item = MinusId> {
        (0..self.minus.len() as u32).map(MinusId)
    }

    pub fn plus_ids(&self) -> impl Iterator<Item = PlusId> {
        (0..self.plus.len() as u32).map(PlusId)
    }

    pub fn minus_by_name(&self, name: &str) -> Option<MinusId> {
        self.minus
            .binary_search_by(|e| e.name.as_str().cmp(name))
            .ok()
            .map(|i| MinusId(i as u32))
    }

    pub fn plus_by_name(&self, name: &str) -> Option<PlusId> {
        self.plus
            .binary_search_by(|e| e.name.as_str().cmp(name))
            .ok()
            .map(|i| PlusId(i as u32))
    }

    /// Is the pair `(m, p)` in the relation `R`?
    pub fn related(&self, m: MinusId, p: PlusId) -> bool {
        self.relation.contains(&(m.0, p.0))
    }

    pub fn relation_pairs(&self) -> impl Iterator<Item = (MinusId, PlusId)> + '_ {
        self.relation.iter().map(|&(m, p)| (MinusId(m), PlusId(p)))
    }

    /// Checks the structural invariants: matching class emptiness of the two
    /// edge families, and strong connectivity of the minus-edge graph.
    /// Violations are returned as data rather than errors.
    pub fn validate(&self) -> Vec<RGraphViolation> {
        let mut out = Vec::new();
        let mut mcls = BTreeSet::new();
        let mut pcls = BTreeSet::new();
        for e in &self.minus {
            mcls.insert((e.q, e.r));
        }
        for e in &self.plus {
            pcls.insert((e.q, e.r));
        }
        for &(q, r) in mcls.symmetric_difference(&pcls) {
            out.push(RGraphViolation::UnbalancedClass {
                q: self.vertex_name(q).to_string(),
                r: self.vertex_name(r).to_string(),
            });
        }
        if let Some(stranded) = self.strong_connectivity_defect() {
            out.push(RGraphViolation::NotStronglyConnected {
                stranded: self.vertex_name(stranded).to_string(),
            });
        }
        out
    }

    /// Returns a vertex not in the strongly connected component of vertex 0
    /// in the minus-edge graph, if any.
    fn strong_connectivity_defect(&self) -> Option<VertexId> {
        let n = self.vertices.len();
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for e in &self.minus {
            fwd[e.q.0 as usize].push(e.r.0 as usize);
            bwd[e.r.0 as usize].push(e.q.0 as usize);
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
        (0..n).find(|&v| !down[v] || !up[v]).map(|v| VertexId(v as u32))
    }

    /// Checks the recovery condition: within each class, distinct minus
    /// edges have distinct sets of related plus partners, and symmetrically
    /// for plus edges.
    pub fn condition_a(&self) -> Vec<ConditionAViolation> {
        let mut out = Vec::new();
        let mut by_class_minus: BTreeMap<(VertexId, VertexId), Vec<MinusId>> = BTreeMap::new();
        for m in self.minus_ids() {
            let e = self.minus_edge(m);
            by_class_minus.entry((e.q, e.r)).or_default().push(m);
        }
        for ms in by_class_minus.values() {
            for (i, &a) in ms.iter().enumerate() {
                for &b in &ms[i + 1..] {
                    let oa: BTreeSet<u32> =
                        self.relation.iter().filter(|&&(m, _)| m == a.0).map(|&(_, p)| p).collect();
                    let ob: BTreeSet<u32> =
                        self.relation.iter().filter(|&&(m, _)| m == b.0).map(|&(_, p)| p).collect();
                    if oa == ob {
                        out.push(ConditionAViolation {
                            side: "minus",
                            first: self.minus_edge(a).name.clone(),
                            second: self.minus_edge(b).name.clone(),
                        });
                    }
                }
            }
        }
        let mut by_class_plus: BTreeMap<(VertexId, VertexId), Vec<PlusId>> = BTreeMap::new();
        for p in self.plus_ids() {
            let e = self.plus_edge(p);
            by_class_plus.entry((e.q, e.r)).or_default().push(p);
        }
        for ps in by_class_plus.values() {
            for (i, &a) in ps.iter().enumerate() {
                for &b in &ps[i + 1..] {
                    let oa: BTreeSet<u32> =
                        self.relation.iter().filter(|&&(_, p)| p == a.0).map(|&(m, _)| m).collect();
                    let ob: BTreeSet<u32> =
                        self.relation.iter().filter(|&&(_, p)| p == b.0).map(|&(m, _)| m).collect();
                    if oa == ob {
                        out.push(ConditionAViolation {
                            side: "plus",
                            first: self.plus_edge(a).name.clone(),
                            second: self.plus_edge(b).name.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// One vertex `p`, `n` minus loops, `n` plus loops, diagonal relation.
    /// Edge names pair `x-` with `x+` for letters `a`, `b`, `c`, ...
    pub fn dyck(n: usize) -> Result<Self> {
        if n == 0 || n > 26 {
            return Err(Error::input("loop count must be between 1 and 26"));
        }
        let names: Vec<String> =
            (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let p = "p".to_string();
        let minus =
            names.iter().map(|x| (format!("{x}-"), p.clone(), p.clone())).collect();
        let plus =
            names.iter().map(|x| (format!("{x}+"), p.clone(), p.clone())).collect();
        let relation = names.iter().map(|x| (format!("{x}-"), format!("{x}+"))).collect();
        RGraph::new(vec![p], minus, plus, relation)
    }

    /// Doubles a directed multigraph: every edge `e: u -> v` contributes a
    /// minus copy `e-` of class `(u, v)` and a plus copy `e+` of the same
    /// class running back from `v` to `u`, with the diagonal relation.
    pub fn graph_inverse(g: &Digraph) -> Result<Self> {
        let minus = g
            .edges
            .iter()
            .map(|e| (format!("{}-", e.name), e.src.clone(), e.dst.clone()))
            .collect();
        let plus = g
            .edges
            .iter()
            .map(|e| (format!("{}+", e.name), e.src.clone(), e.dst.clone()))
            .collect();
        let relation =
            g.edges.iter().map(|e| (format!("{}-", e.name), format!("{}+", e.name))).collect();
        RGraph::new(g.vertices.clone(), minus, plus, relation)
    }

    /// Tests for an isomorphism fixing every vertex: classwise bijections of
    /// minus and plus edges that carry the relation of `self` exactly onto
    /// the relation of `other`. Class sizes are expected to be small; the
    /// search is a per-class backtrack over partner assignments.
    pub fn isomorphic_pinned(&self, other: &RGraph) -> bool {
        if self.vertices != other.vertices
            || self.minus.len() != other.minus.len()
            || self.plus.len() != other.plus.len()
        {
            return false;
        }
        let classes: BTreeSet<(VertexId, VertexId)> = self
            .minus
            .iter()
            .chain(&self.plus)
            .map(|e| (e.q, e.r))
            .collect();
        for cls in classes {
            let sm: Vec<MinusId> = self
                .minus_ids()
                .filter(|&m| (self.minus_edge(m).q, self.minus_edge(m).r) == cls)
                .collect();
            let om: Vec<MinusId> = other
                .minus_ids()
                .filter(|&m| (other.minus_edge(m).q, other.minus_edge(m).r) == cls)
                .collect();
            let sp: Vec<PlusId> = self
                .plus_ids()
                .filter(|&p| (self.plus_edge(p).q, self.plus_edge(p).r) == cls)
                .collect();
            let op: Vec<PlusId> = other
                .plus_ids()
                .filter(|&p| (other.plus_edge(p).q, other.plus_edge(p).r) == cls)
                .collect();
            if sm.len() != om.len() || sp.len() != op.len() {
                return false;
            }
            if !class_bijection_exists(self, other, &sm, &om, &sp, &op) {
                return false;
            }
        }
        true
    }
}

/// Backtracking search for relation-preserving bijections within one class.
fn class_bijection_exists(
    a: &RGraph,
    b: &RGraph,
    am: &[MinusId],
    bm: &[MinusId],
    ap: &[PlusId],
    bp: &[PlusId],
) -> bool {
    fn go(
        a: &RGraph,
        b: &RGraph,
        am: &[MinusId],
        bm: &[MinusId],
        ap: &[PlusId],
        bp: &[PlusId],
        mmap: &mut Vec<usize>,
        pmap: &mut Vec<usize>,
    ) -> bool {
        if mmap.len() < am.len() {
            let i = mmap.len();
            for cand in 0..bm.len() {
                if mmap.contains(&cand) {
                    continue;
                }
                mmap.push(cand);
                // relations to already-placed plus edges must match
                let ok = pmap.iter().enumerate().all(|(j, &pj)| {
                    a.related(am[i], ap[j]) == b.related(bm[cand], bp[pj])
                });
                if ok && go(a, b, am, bm, ap, bp, mmap, pmap) {
                    return true;
                }
                mmap.pop();
            }
            return false;
        }
        if pmap.len() < ap.len() {
            let j = pmap.len();
            for cand in 0..bp.len() {
                if pmap.contains(&cand) {
                    continue;
                }
                pmap.push(cand);
                let ok = mmap.iter().enumerate().all(|(i, &mi)| {
                    a.related(am[i], ap[j]) == b.related(bm[mi], bp[cand])
                });
                if ok && go(a, b, am, bm, ap, bp, mmap, pmap) {
                    return true;
                }
                pmap.pop();
            }
            return false;
        }
        true
    }
    go(a, b, am, bm, ap, bp, &mut Vec::new(), &mut Vec::new())
}

/// A directed multigraph with named edges, the input shape for
/// [`RGraph::graph_inverse`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Digraph {
    pub vertices: Vec<String>,
    pub edges: Vec<DigraphEdge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DigraphEdge {
    pub name: String,
    pub src: String,
    pub dst: String,
}

impl Digraph {
    pub fn new(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Self {
        Digraph {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(n, s, d)| DigraphEdge {
                    name: n.to_string(),
                    src: s.to_string(),
                    dst: d.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeDto {
    id: String,
    q: String,
    r: String,
}

#[derive(Serialize, Deserialize)]
struct RGraphDto {
    vertices: Vec<String>,
    minus: Vec<EdgeDto>,
    plus: Vec<EdgeDto>,
    relation: Vec<(String, String)>,
}

impl Serialize for RGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = RGraphDto {
            vertices: self.vertices.clone(),
            minus: self
                .minus
                .iter()
                .map(|e| EdgeDto {
                    id: e.name.clone(),
                    q: self.vertex_name(e.q).to_string(),
                    r: self.vertex_name(e.r).to_string(),
                })
                .collect(),
            plus: self
                .plus
                .iter()
                .map(|e| EdgeDto {
                    id: e.name.clone(),
                    q: self.vertex_name(e.q).to_string(),
                    r: self.vertex_name(e.r).to_string(),
                })
                .collect(),
            relation: self
                .relation
                .iter()
                .map(|&(m, p)| {
                    (self.minus[m as usize].name.clone(), self.plus[p as usize].name.clone())
                })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dto = RGraphDto::deserialize(d)?;
        RGraph::new(
            dto.vertices,
            dto.minus.into_iter().map(|e| (e.id, e.q, e.r)).collect(),
            dto.plus.into_iter().map(|e| (e.id, e.q, e.r)).collect(),
            dto.relation,
        )
        .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RGraph({} vertices, {} minus, {} plus, {} related pairs)",
            self.vertices.len(),
            self.minus.len(),
            self.plus.len(),
            self.relation.len()
        )
    }
}
