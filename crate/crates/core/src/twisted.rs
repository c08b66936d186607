//! Sign-decorated bracket codes over a doubled multigraph and the coded
//! system they generate.
//!
//! Every edge of a base multigraph doubles into an opening and a closing
//! bracket, and every position of a word additionally carries a sign.
//! Code words are built in stages: first returns at a vertex, grouping
//! by the parallel class of the boundary edge, pruning so that each wrap
//! encloses zero or at least three first returns, and sign decoration.
//! A completed wrap couples its boundary edges to the signs just inside
//! it: with s the sign on the last symbol of its first enclosed return
//! and t the sign on the first symbol of its last enclosed return (the
//! boundary signs themselves when nothing is enclosed), the wrap is kept
//! exactly when the class permutation selected by s maps the opening
//! edge to the same edge as the permutation selected by t maps the
//! closing edge. A positive sign selects the identity, a negative sign
//! the configured fixed-point-free twist. Parallel classes of size one
//! are rejected outright: they would leave the twist nowhere to move.
//!
//! The factor language of the coded system generated by all code words
//! is decided exactly by one left-to-right scan; the family implements
//! [`Language`], so the generic context and omega calculators apply.
//! [`joint_context_witness`] builds the four-word family whose interior
//! sign flips are tracked by one side each, and [`hidden_pair_witness`]
//! the code-word pair that no one-sided extension separates at any
//! depth while a joint extension does.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::{gamma_minus, gamma_pairs, gamma_plus, Language};
use crate::rgraph::Digraph;

/// Base graph, twist, and enumeration budget for a decorated code
/// family. Construction rejects parallel classes with exactly one edge
/// and twists that fix an edge, leave its class, or fail to permute it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "TwistConfigDto", into = "TwistConfigDto")]
pub struct TwistConfig {
    vertices: Vec<String>,
    edge_names: Vec<String>,
    ends: Vec<(usize, usize)>,
    twist: Vec<usize>,
    inv_twist: Vec<usize>,
    pub max_code_len: usize,
}

#[derive(Serialize, Deserialize)]
struct TwistConfigDto {
    graph: Digraph,
    twist: Vec<(String, String)>,
    max_code_len: usize,
}

impl TryFrom<TwistConfigDto> for TwistConfig {
    type Error = Error;

    fn try_from(dto: TwistConfigDto) -> Result<TwistConfig> {
        let pairs: Vec<(&str, &str)> =
            dto.twist.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        TwistConfig::with_twist(&dto.graph, &pairs, dto.max_code_len)
    }
}

impl From<TwistConfig> for TwistConfigDto {
    fn from(cfg: TwistConfig) -> TwistConfigDto {
        TwistConfigDto {
            graph: Digraph {
                vertices: cfg.vertices.clone(),
                edges: cfg
                    .edge_names
                    .iter()
                    .zip(&cfg.ends)
                    .map(|(n, &(q, r))| crate::rgraph::DigraphEdge {
                        name: n.clone(),
                        src: cfg.vertices[q].clone(),
                        dst: cfg.vertices[r].clone(),
                    })
                    .collect(),
            },
            twist: cfg
                .twist
                .iter()
                .enumerate()
                .map(|(e, &t)| (cfg.edge_names[e].clone(), cfg.edge_names[t].clone()))
                .collect(),
            max_code_len: cfg.max_code_len,
        }
    }
}

impl TwistConfig {
    /// Validates the graph and derives the default twist: each parallel
    /// class, in edge order, is rotated by one step.
    pub fn new(graph: &Digraph, max_code_len: usize) -> Result<TwistConfig> {
        let (vertices, edge_names, ends, classes) = Self::check_graph(graph)?;
        let mut twist = vec![0usize; edge_names.len()];
        for members in classes.values() {
            for (i, &e) in members.iter().enumerate() {
                twist[e] = members[(i + 1) % members.len()];
            }
        }
        Self::assemble(vertices, edge_names, ends, twist, max_code_len)
    }

    /// Validates the graph together with an explicit twist given as
    /// (edge, image) name pairs covering every edge.
    pub fn with_twist(
        graph: &Digraph,
        pairs: &[(&str, &str)],
        max_code_len: usize,
    ) -> Result<TwistConfig> {
        let (vertices, edge_names, ends, _) = Self::check_graph(graph)?;
        let index: BTreeMap<&str, usize> =
            edge_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut twist = vec![usize::MAX; edge_names.len()];
        for &(from, to) in pairs {
            let f = *index
                .get(from)
                .ok_or_else(|| Error::input(format!("unknown edge {from:?} in twist")))?;
            let t = *index
                .get(to)
                .ok_or_else(|| Error::input(format!("unknown edge {to:?} in twist")))?;
            if twist[f] != usize::MAX {
                return Err(Error::input(format!("twist lists edge {from:?} twice")));
            }
            twist[f] = t;
        }
        if let Some(e) = twist.iter().position(|&t| t == usize::MAX) {
            return Err(Error::input(format!("twist misses edge {:?}", edge_names[e])));
        }
        Self::assemble(vertices, edge_names, ends, twist, max_code_len)
    }

    /// The one-vertex base with two loops `a`, `b` and the swap twist.
    pub fn double_loop(max_code_len: usize) -> TwistConfig {
        let g = Digraph::new(&["v"], &[("a", "v", "v"), ("b", "v", "v")]);
        TwistConfig::new(&g, max_code_len).expect("two loops form a valid class")
    }

    fn check_graph(
        graph: &Digraph,
    ) -> Result<(Vec<String>, Vec<String>, Vec<(usize, usize)>, BTreeMap<(usize, usize), Vec<usize>>)>
    {
        let vertices = graph.vertices.clone();
        let vidx: BTreeMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        if vidx.len() != vertices.len() {
            return Err(Error::input("duplicate vertex name"));
        }
        let mut edge_names = Vec::new();
        let mut ends = Vec::new();
        let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for e in &graph.edges {
            let q = *vidx
                .get(e.src.as_str())
                .ok_or_else(|| Error::input(format!("unknown vertex {:?}", e.src)))?;
            let r = *vidx
                .get(e.dst.as_str())
                .ok_or_else(|| Error::input(format!("unknown vertex {:?}", e.dst)))?;
            if edge_names.contains(&e.name) {
                return Err(Error::input(format!("duplicate edge name {:?}", e.name)));
            }
            classes.entry((q, r)).or_default().push(edge_names.len());
            edge_names.push(e.name.clone());
            ends.push((q, r));
        }
        for (&(q, r), members) in &classes {
            if members.len() == 1 {
                return Err(Error::input(format!(
                    "parallel class {} -> {} has exactly one edge ({}); classes must be empty or have at least two",
                    vertices[q], vertices[r], edge_names[members[0]],
                )));
            }
        }
        Ok((vertices, edge_names, ends, classes))
    }

    fn assemble(
        vertices: Vec<String>,
        edge_names: Vec<String>,
        ends: Vec<(usize, usize)>,
        twist: Vec<usize>,
        max_code_len: usize,
    ) -> Result<TwistConfig> {
        let mut seen = vec![false; edge_names.len()];
        for (e, &t) in twist.iter().enumerate() {
            if t == e {
                return Err(Error::input(format!("twist fixes edge {:?}", edge_names[e])));
            }
            if ends[t] != ends[e] {
                return Err(Error::input(format!(
                    "twist maps edge {:?} out of its parallel class",
                    edge_names[e],
                )));
            }
            if seen[t] {
                return Err(Error::input(format!(
                    "twist is not a permutation: {:?} hit twice",
                    edge_names[t],
                )));
            }
            seen[t] = true;
        }
        let mut inv_twist = vec![0usize; twist.len()];
        for (e, &t) in twist.iter().enumerate() {
            inv_twist[t] = e;
        }
        Ok(TwistConfig { vertices, edge_names, ends, twist, inv_twist, max_code_len })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    /// The edge selected for `edge` by `sign`: the edge itself under a
    /// positive sign, its twist image under a negative one.
    pub fn twisted(&self, edge: usize, sign: i8) -> usize {
        if sign > 0 {
            edge
        } else {
            self.twist[edge]
        }
    }

    /// Inverse of [`TwistConfig::twisted`] at fixed sign.
    pub fn untwisted(&self, edge: usize, sign: i8) -> usize {
        if sign > 0 {
            edge
        } else {
            self.inv_twist[edge]
        }
    }

    /// Parallel classes in vertex-pair order with their member edges.
    pub fn classes(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (e, &k) in self.ends.iter().enumerate() {
            out.entry(k).or_default().push(e);
        }
        out
    }

    fn first_edge_from(&self, v: usize) -> Option<usize> {
        (0..self.ends.len()).find(|&e| self.ends[e].0 == v)
    }
}

/// Scan state for one open wrap: the opening edge and sign, the number
/// of enclosed returns, the sign ending the first of them, and the sign
/// starting the last of them.
struct Frame {
    edge: usize,
    open_sign: i8,
    enclosed: u32,
    first_end: i8,
    last_start: i8,
}

/// The coded system of all sign-decorated code words of a
/// [`TwistConfig`], exposed as a factor-closed language over the
/// doubled, signed alphabet.
pub struct TwistedFamily {
    cfg: TwistConfig,
    names: Vec<String>,
}

impl TwistedFamily {
    pub fn new(cfg: TwistConfig) -> TwistedFamily {
        let mut names = Vec::with_capacity(cfg.edge_count() * 4);
        for e in 0..cfg.edge_count() {
            for closing in ["-", "+"] {
                for sign in ["+", "-"] {
                    names.push(format!("{}{}{}", cfg.edge_name(e), closing, sign));
                }
            }
        }
        TwistedFamily { cfg, names }
    }

    pub fn config(&self) -> &TwistConfig {
        &self.cfg
    }

    /// Symbol id of the bracket of `edge` (opening unless `closing`)
    /// carrying `sign`.
    pub fn symbol(&self, edge: usize, closing: bool, sign: i8) -> usize {
        edge * 4 + usize::from(closing) * 2 + usize::from(sign < 0)
    }

    /// Inverse of [`TwistedFamily::symbol`].
    pub fn decode(&self, sym: usize) -> (usize, bool, i8) {
        (sym / 4, sym % 4 >= 2, if sym % 2 == 0 { 1 } else { -1 })
    }

    /// Exact membership: tracks the walk and the bracket stack and
    /// checks every completed wrap for class consistency, the enclosed
    /// count rule (zero or at least three), and the twist link between
    /// its boundary edges and the near and far signs. Open and
    /// unopened brackets impose nothing beyond the walk: the hidden
    /// sides of partial wraps can always be completed, because the
    /// hidden boundary edge ranges over a full class and hidden returns
    /// pump the enclosed count past three.
    fn scan(&self, w: &[usize]) -> Result<bool> {
        let mut cur: Option<usize> = None;
        let mut stack: Vec<Frame> = Vec::new();
        for &sym in w {
            if sym >= self.names.len() {
                return Err(Error::input("symbol index out of range"));
            }
            let (edge, closing, sign) = self.decode(sym);
            let (q, r) = self.cfg.ends(edge);
            let (src, dst) = if closing { (r, q) } else { (q, r) };
            if cur.is_some_and(|v| v != src) {
                return Ok(false);
            }
            cur = Some(dst);
            if !closing {
                stack.push(Frame { edge, open_sign: sign, enclosed: 0, first_end: 0, last_start: 0 });
            } else if let Some(fr) = stack.pop() {
                if self.cfg.ends(fr.edge) != (q, r) {
                    return Ok(false);
                }
                if fr.enclosed == 1 || fr.enclosed == 2 {
                    return Ok(false);
                }
                let (near, far) = if fr.enclosed == 0 {
                    (fr.open_sign, sign)
                } else {
                    (fr.first_end, fr.last_start)
                };
                if self.cfg.twisted(fr.edge, near) != self.cfg.twisted(edge, far) {
                    return Ok(false);
                }
                if let Some(parent) = stack.last_mut() {
                    if parent.enclosed == 0 {
                        parent.first_end = sign;
                    }
                    parent.last_start = fr.open_sign;
                    parent.enclosed += 1;
                }
            }
        }
        Ok(true)
    }

    /// First returns at `p` before sign decoration: bracket-balanced
    /// wraps over the doubled graph whose boundary brackets share a
    /// parallel class, any enclosed count, lengths up to `max_len`, at
    /// most `cap` words, sorted by length then by symbol.
    pub fn plain_returns(&self, p: usize, max_len: usize, cap: usize) -> Result<Vec<Vec<(usize, bool)>>> {
        self.returns_impl(p, max_len, cap, false)
    }

    /// First returns whose every wrap, at every depth, encloses zero or
    /// at least three returns.
    pub fn pruned_returns(&self, p: usize, max_len: usize, cap: usize) -> Result<Vec<Vec<(usize, bool)>>> {
        self.returns_impl(p, max_len, cap, true)
    }

    /// The wraps among `words` whose boundary edge lies in the parallel
    /// class `(q, r)`.
    pub fn class_filter(
        &self,
        words: &[Vec<(usize, bool)>],
        q: usize,
        r: usize,
    ) -> Vec<Vec<(usize, bool)>> {
        words
            .iter()
            .filter(|w| w.first().is_some_and(|&(e, _)| self.cfg.ends(e) == (q, r)))
            .cloned()
            .collect()
    }

    fn returns_impl(
        &self,
        p: usize,
        max_len: usize,
        cap: usize,
        pruned: bool,
    ) -> Result<Vec<Vec<(usize, bool)>>> {
        if p >= self.cfg.vertex_count() {
            return Err(Error::input("vertex index out of range"));
        }
        let nv = self.cfg.vertex_count();
        // ret[v][l] = returns at v of exact length l; seq[v][l] = return
        // concatenations at v of exact length l with their counts.
        let mut ret: Vec<Vec<Vec<Vec<(usize, bool)>>>> = vec![vec![Vec::new(); max_len + 1]; nv];
        let mut seq: Vec<Vec<Vec<(Vec<(usize, bool)>, u32)>>> =
            vec![vec![Vec::new(); max_len + 1]; nv];
        for v in 0..nv {
            seq[v][0].push((Vec::new(), 0));
        }
        let mut total = 0usize;
        for len in (2..=max_len).step_by(2) {
            for v in 0..nv {
                let mut words = Vec::new();
                for e in 0..self.cfg.edge_count() {
                    let (q, r) = self.cfg.ends(e);
                    if q != v {
                        continue;
                    }
                    for (inner, count) in &seq[r][len - 2] {
                        if pruned && (*count == 1 || *count == 2) {
                            continue;
                        }
                        // the closing bracket ranges over the whole
                        // parallel class; signs decide later which
                        // boundary pairs survive
                        for f in 0..self.cfg.edge_count() {
                            if self.cfg.ends(f) != (q, r) {
                                continue;
                            }
                            let mut w = Vec::with_capacity(len);
                            w.push((e, false));
                            w.extend_from_slice(inner);
                            w.push((f, true));
                            words.push(w);
                        }
                    }
                }
                total += words.len();
                if total > cap {
                    return Err(Error::budget("return words", cap as u64));
                }
                ret[v][len] = words;
            }
            // extend the concatenations by every return that fits
            for v in 0..nv {
                let mut more = Vec::new();
                for first_len in (2..=len).step_by(2) {
                    for c in &ret[v][first_len] {
                        for (rest, count) in &seq[v][len - first_len] {
                            let mut w = c.clone();
                            w.extend_from_slice(rest);
                            more.push((w, count + 1));
                        }
                    }
                }
                total += more.len();
                if total > cap {
                    return Err(Error::budget("return words", cap as u64));
                }
                seq[v][len] = more;
            }
        }
        let mut out = Vec::new();
        for len in (2..=max_len).step_by(2) {
            let mut slice = ret[p][len].clone();
            slice.sort();
            out.extend(slice);
        }
        Ok(out)
    }

    /// Sign-decorated code words starting at `p`: the decorations of
    /// the pruned returns that the scan accepts.
    pub fn code_words(&self, p: usize, max_len: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
        let plain = self.pruned_returns(p, max_len, cap)?;
        let mut out = Vec::new();
        for w in plain {
            if w.len() > 24 {
                return Err(Error::budget("decoration positions", 24));
            }
            for mask in 0u64..1 << w.len() {
                let word: Vec<usize> = w
                    .iter()
                    .enumerate()
                    .map(|(i, &(e, c))| self.symbol(e, c, if mask >> i & 1 == 0 { 1 } else { -1 }))
                    .collect();
                if self.scan(&word)? {
                    if out.len() >= cap {
                        return Err(Error::budget("code words", cap as u64));
                    }
                    out.push(word);
                }
            }
        }
        Ok(out)
    }

    /// Whether `w` is a single complete wrap accepted by the scan.
    pub fn is_code_word(&self, w: &[usize]) -> Result<bool> {
        if w.is_empty() {
            return Ok(false);
        }
        let mut depth = 0i64;
        for (i, &sym) in w.iter().enumerate() {
            if sym >= self.names.len() {
                return Err(Error::input("symbol index out of range"));
            }
            let (_, closing, _) = self.decode(sym);
            depth += if closing { -1 } else { 1 };
            if depth < 0 || (depth == 0 && i + 1 < w.len()) {
                return Ok(false);
            }
        }
        if depth != 0 {
            return Ok(false);
        }
        self.scan(w)
    }
}

impl Language for TwistedFamily {
    fn symbol_count(&self) -> usize {
        self.names.len()
    }

    fn symbol_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    fn contains(&self, w: &[usize]) -> Result<bool> {
        self.scan(w)
    }
}

/// For one complete wrap: one past the length of its first enclosed
/// return and one past the length of its last (both 1 when nothing is
/// enclosed). `None` when the word is not a single complete wrap.
pub fn margins(word: &[(usize, bool)]) -> Option<(usize, usize)> {
    let n = word.len();
    if n < 2 || word[0].1 || !word[n - 1].1 {
        return None;
    }
    let mut depth = 1i64;
    let mut first_len = 0usize;
    let mut last_len = 0usize;
    let mut start = 1usize;
    let mut any = false;
    for (i, &(_, closing)) in word.iter().enumerate().take(n - 1).skip(1) {
        depth += if closing { -1 } else { 1 };
        if depth < 1 {
            return None;
        }
        if depth == 1 {
            let l = i + 1 - start;
            if !any {
                first_len = l;
                any = true;
            }
            last_len = l;
            start = i + 1;
        }
    }
    if start != n - 1 {
        return None;
    }
    Some(if any { (1 + first_len, 1 + last_len) } else { (1, 1) })
}

/// The two signs a completed wrap links to its boundary edges: the sign
/// at the left margin position and the sign at the mirrored right
/// margin position.
pub fn margin_reads(word: &[(usize, bool)], signs: &[i8]) -> Option<(i8, i8)> {
    let (mm, mp) = margins(word)?;
    if signs.len() != word.len() {
        return None;
    }
    Some((signs[mm - 1], signs[word.len() - mp]))
}

/// Bounded verification that all code words at `p` up to `max_len`
/// share their extension behaviour: equal left, right, and joint
/// context sets at `depth`. Returns the verdict and the number of code
/// words compared. The sharing is depth-bounded; joint extensions of a
/// larger radius can still separate code words, which
/// [`hidden_pair_witness`] exhibits.
pub fn code_words_share_contexts(
    fam: &TwistedFamily,
    p: usize,
    max_len: usize,
    depth: usize,
    cap: usize,
) -> Result<(bool, usize)> {
    let words = fam.code_words(p, max_len, cap)?;
    let mut reference = None;
    for w in &words {
        let key = (
            gamma_minus(fam, w, depth)?,
            gamma_plus(fam, w, depth)?,
            gamma_pairs(fam, w, depth)?,
        );
        match &reference {
            None => reference = Some(key),
            Some(prev) => {
                if *prev != key {
                    return Ok((false, words.len()));
                }
            }
        }
    }
    Ok((true, words.len()))
}

/// The four-word family probing which side of a word tracks which
/// interior sign. The base word chains a truncated copy, a full copy,
/// and an oppositely truncated copy of one long code word; the variants
/// flip the signs at the two positions that a wrap completed by a
/// single opening (resp. closing) bracket links to its boundary.
#[derive(Debug, Clone, Serialize)]
pub struct JointContextWitness {
    /// Decorated variant words indexed like [`SIGN_PAIRS`].
    pub words: [Vec<usize>; 4],
    /// (near, far) sign pair of each variant.
    pub variant_signs: [(i8, i8); 4],
    /// Position (0-based) whose sign the near flip replaces.
    pub near_flip: usize,
    /// Position (0-based) whose sign the far flip replaces.
    pub far_flip: usize,
    /// Whether each variant is in the language.
    pub admissible: [bool; 4],
    /// Context depth used for the set comparisons.
    pub depth: usize,
    /// Pairwise equality of the left extension sets at `depth`.
    pub left_sets_equal: [[bool; 4]; 4],
    /// Pairwise equality of the right extension sets at `depth`.
    pub right_sets_equal: [[bool; 4]; 4],
    /// Left sets agree exactly when the near signs agree.
    pub left_tracks_near: bool,
    /// Right sets agree exactly when the far signs agree.
    pub right_tracks_far: bool,
    /// All four words share both one-sided sets (the strict collapse).
    pub all_one_sided_equal: bool,
    /// Single-bracket probe pairs indexed like [`SIGN_PAIRS`]: the
    /// opening bracket of the edge the inverse twist selects for the
    /// first sign, and the closing bracket for the second.
    pub probes: [(usize, usize); 4],
    /// `joint_pattern[i][j]`: probe pair `j` extends variant `i`.
    pub joint_pattern: [[bool; 4]; 4],
    /// The joint pattern is the identity matrix: probe `j` fits
    /// variant `i` exactly when `i == j`.
    pub joint_diagonal: bool,
}

/// Variant order for [`JointContextWitness`]: (near, far) signs.
pub const SIGN_PAIRS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Builds and measures the four-word family on `cfg`. The probe test
/// needs single-symbol extensions, so `depth` must be at least 1.
pub fn joint_context_witness(cfg: &TwistConfig, depth: usize) -> Result<JointContextWitness> {
    if depth == 0 {
        return Err(Error::DepthInsufficient {
            depth,
            msg: "the probe pattern needs single-symbol extensions; use depth >= 1".into(),
        });
    }
    let fam = TwistedFamily::new(cfg.clone());
    let cfg = fam.config();
    let ((_, r), class) = cfg
        .classes()
        .into_iter()
        .next()
        .ok_or_else(|| Error::input("the base graph has no edges"))?;
    let e = class[0];

    // One long code word: boundary edge e, enclosing a long return, a
    // short return, and the long return again, so that both margins
    // clear the boundary by more than the probe radius.
    let f = cfg
        .first_edge_from(r)
        .ok_or_else(|| Error::input("witness needs an outgoing edge at the inner vertex"))?;
    let (_, fr) = cfg.ends(f);
    let h = cfg
        .first_edge_from(fr)
        .ok_or_else(|| Error::input("witness needs an outgoing edge two steps in"))?;
    let short = |edge: usize| vec![(edge, false), (edge, true)];
    let mut long = vec![(f, false)];
    for _ in 0..3 {
        long.extend(short(h));
    }
    long.push((f, true));
    let mut full = vec![(e, false)];
    full.extend(long.iter().cloned());
    full.extend(short(f));
    full.extend(long.iter().cloned());
    full.push((e, true));
    let (mm, mp) = margins(&full).expect("the assembled word is one wrap");

    // Chain: copy without its first symbol, full copy, copy without its
    // last symbol. The near flip lands where a wrap completed by one
    // prepended opening bracket reads its near sign; the far flip
    // mirrors it for one appended closing bracket.
    let mut chain: Vec<(usize, bool)> = Vec::new();
    chain.extend_from_slice(&full[1..]);
    chain.extend_from_slice(&full);
    chain.extend_from_slice(&full[..full.len() - 1]);
    let near_flip = mm - 2;
    let far_flip = chain.len() - mp + 1;

    let base_signs = vec![1i8; chain.len()];
    let make = |near: i8, far: i8| -> Vec<usize> {
        let mut signs = base_signs.clone();
        signs[near_flip] = near;
        signs[far_flip] = far;
        chain
            .iter()
            .zip(&signs)
            .map(|(&(edge, closing), &s)| fam.symbol(edge, closing, s))
            .collect()
    };
    let words: [Vec<usize>; 4] = std::array::from_fn(|i| {
        let (n, f) = SIGN_PAIRS[i];
        make(n, f)
    });

    let mut admissible = [false; 4];
    for (i, w) in words.iter().enumerate() {
        admissible[i] = fam.contains(w)?;
    }

    let mut lefts = Vec::with_capacity(4);
    let mut rights = Vec::with_capacity(4);
    for w in &words {
        lefts.push(gamma_minus(&fam, w, depth)?);
        rights.push(gamma_plus(&fam, w, depth)?);
    }
    let mut left_sets_equal = [[false; 4]; 4];
    let mut right_sets_equal = [[false; 4]; 4];
    let mut left_tracks_near = true;
    let mut right_tracks_far = true;
    for i in 0..4 {
        for j in 0..4 {
            left_sets_equal[i][j] = lefts[i] == lefts[j];
            right_sets_equal[i][j] = rights[i] == rights[j];
            if left_sets_equal[i][j] != (SIGN_PAIRS[i].0 == SIGN_PAIRS[j].0) {
                left_tracks_near = false;
            }
            if right_sets_equal[i][j] != (SIGN_PAIRS[i].1 == SIGN_PAIRS[j].1) {
                right_tracks_far = false;
            }
        }
    }
    let all_one_sided_equal =
        (0..4).all(|i| (0..4).all(|j| left_sets_equal[i][j] && right_sets_equal[i][j]));

    let probes: [(usize, usize); 4] = std::array::from_fn(|j| {
        let (n, f) = SIGN_PAIRS[j];
        (fam.symbol(cfg.untwisted(e, n), false, 1), fam.symbol(cfg.untwisted(e, f), true, 1))
    });
    let mut joint_pattern = [[false; 4]; 4];
    for i in 0..4 {
        for (j, &(u, v)) in probes.iter().enumerate() {
            let mut w = Vec::with_capacity(words[i].len() + 2);
            w.push(u);
            w.extend_from_slice(&words[i]);
            w.push(v);
            joint_pattern[i][j] = fam.contains(&w)?;
        }
    }
    let joint_diagonal = (0..4).all(|i| (0..4).all(|j| joint_pattern[i][j] == (i == j)));

    Ok(JointContextWitness {
        words,
        variant_signs: SIGN_PAIRS,
        near_flip,
        far_flip,
        admissible,
        depth,
        left_sets_equal,
        right_sets_equal,
        left_tracks_near,
        right_tracks_far,
        all_one_sided_equal,
        probes,
        joint_pattern,
        joint_diagonal,
    })
}

/// Two code words that no one-sided extension separates while a joint
/// extension does: the interior-free wrap of one edge with both signs
/// positive versus both negative. Balanced words keep their brackets to
/// themselves, so one-sided extensions never read their signs; a
/// surrounding wrap does, but needs material on both sides at once.
#[derive(Debug, Clone, Serialize)]
pub struct HiddenPairWitness {
    pub words: [Vec<usize>; 2],
    pub depth: usize,
    /// Left extension sets at `depth` agree.
    pub left_equal: bool,
    /// Right extension sets at `depth` agree.
    pub right_equal: bool,
    /// Joint extension admitting the first word but not the second.
    pub separator: (Vec<usize>, Vec<usize>),
    pub separated: bool,
}

pub fn hidden_pair_witness(cfg: &TwistConfig, depth: usize) -> Result<HiddenPairWitness> {
    let fam = TwistedFamily::new(cfg.clone());
    let cfg = fam.config();
    let ((q, _), class) = cfg
        .classes()
        .into_iter()
        .next()
        .ok_or_else(|| Error::input("the base graph has no edges"))?;
    let e = class[0];
    let words = [
        vec![fam.symbol(e, false, 1), fam.symbol(e, true, 1)],
        vec![fam.symbol(e, false, -1), fam.symbol(e, true, -1)],
    ];

    let left_equal = gamma_minus(&fam, &words[0], depth)? == gamma_minus(&fam, &words[1], depth)?;
    let right_equal = gamma_plus(&fam, &words[0], depth)? == gamma_plus(&fam, &words[1], depth)?;

    // Surround the pair so that it becomes the first enclosed return of
    // an outer wrap: one opening bracket on the left; two filler
    // returns and the matching closing bracket on the right. The outer
    // wrap then reads the pair's closing sign as its near sign.
    let x = (0..cfg.edge_count())
        .find(|&x| cfg.ends(x).1 == q)
        .ok_or_else(|| Error::input("witness needs an edge into the class vertex"))?;
    let g = cfg.first_edge_from(q).expect("class vertex has an outgoing edge");
    let u = vec![fam.symbol(x, false, 1)];
    let v = vec![
        fam.symbol(g, false, 1),
        fam.symbol(g, true, 1),
        fam.symbol(g, false, 1),
        fam.symbol(g, true, 1),
        fam.symbol(cfg.twisted(x, 1), true, 1),
    ];
    let wrap = |w: &[usize]| {
        let mut out = u.clone();
        out.extend_from_slice(w);
        out.extend_from_slice(&v);
        out
    };
    let separated = fam.contains(&wrap(&words[0]))? && !fam.contains(&wrap(&words[1]))?;

    Ok(HiddenPairWitness { words, depth, left_equal, right_equal, separator: (u, v), separated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{omega_minus, omega_plus, word_to_names};
    use proptest::prelude::*;

    fn family() -> TwistedFamily {
        TwistedFamily::new(TwistConfig::double_loop(12))
    }

    fn names(fam: &TwistedFamily, w: &[usize]) -> String {
        word_to_names(fam, w).join(" ")
    }

    #[test]
    fn singleton_class_rejected() {
        let g = Digraph::new(&["v"], &[("a", "v", "v")]);
        let err = TwistConfig::new(&g, 8).unwrap_err();
        assert!(err.to_string().contains("exactly one edge"), "{err}");
    }

    #[test]
    fn fixed_point_twist_rejected() {
        let g = Digraph::new(&["v"], &[("a", "v", "v"), ("b", "v", "v")]);
        let err = TwistConfig::with_twist(&g, &[("a", "a"), ("b", "b")], 8).unwrap_err();
        assert!(err.to_string().contains("fixes edge"), "{err}");
        let err = TwistConfig::with_twist(&g, &[("a", "b")], 8).unwrap_err();
        assert!(err.to_string().contains("misses edge"), "{err}");
    }

    #[test]
    fn cross_class_twist_rejected() {
        let d = crate::fixtures::double_edge_digraph();
        let err = TwistConfig::with_twist(
            &d,
            &[("e1", "f1"), ("e2", "f2"), ("f1", "e1"), ("f2", "e2")],
            8,
        )
        .unwrap_err();
        assert!(err.to_string().contains("out of its parallel class"), "{err}");
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = TwistConfig::double_loop(10);
        let json = serde_json::to_string(&cfg).unwrap();
        let back: TwistConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.edge_count(), 2);
        assert_eq!(back.twisted(0, -1), 1);
        assert_eq!(back.max_code_len, 10);
    }

    #[test]
    fn plain_return_counts_follow_the_generating_function() {
        // 2 x 2 boundary pairs per wrap: f = 4z^2/(1-f) gives
        // 4, 16, 128, 1280 words at lengths 2, 4, 6, 8.
        let fam = family();
        let words = fam.plain_returns(0, 8, 100_000).unwrap();
        let count = |l: usize| words.iter().filter(|w| w.len() == l).count();
        assert_eq!((count(2), count(4), count(6), count(8)), (4, 16, 128, 1280));
    }

    #[test]
    fn pruned_return_counts_skip_enclosed_counts_one_and_two() {
        // p = 4z^2 (1 + p^3/(1-p)): lengths 4 and 6 are impossible.
        let fam = family();
        let words = fam.pruned_returns(0, 10, 100_000).unwrap();
        let count = |l: usize| words.iter().filter(|w| w.len() == l).count();
        assert_eq!((count(2), count(4), count(6), count(8), count(10)), (4, 0, 0, 256, 1024));
    }

    #[test]
    fn class_filter_groups_by_boundary_edge() {
        let d = crate::fixtures::double_edge_digraph();
        let cfg = TwistConfig::new(&d, 8).unwrap();
        let fam = TwistedFamily::new(cfg);
        let at_q = fam.plain_returns(0, 4, 10_000).unwrap();
        let grouped = fam.class_filter(&at_q, 0, 1);
        assert_eq!(grouped.len(), at_q.len(), "every return at q starts into class q->r");
        assert_eq!(fam.class_filter(&at_q, 1, 0).len(), 0);
    }

    #[test]
    fn shortest_code_words_match_direct_enumeration() {
        let fam = family();
        let listed = fam.code_words(0, 2, 1000).unwrap();
        let mut brute = Vec::new();
        for a in 0..fam.symbol_count() {
            for b in 0..fam.symbol_count() {
                let w = vec![a, b];
                if fam.is_code_word(&w).unwrap() {
                    brute.push(w);
                }
            }
        }
        assert_eq!(listed.len(), 8);
        let mut sorted = listed.clone();
        sorted.sort();
        assert_eq!(sorted, brute);
        let rendered: Vec<String> = sorted.iter().map(|w| names(&fam, w)).collect();
        assert_eq!(
            rendered,
            [
                "a-+ a++", "a-+ b+-", "a-- a+-", "a-- b++", "b-+ a+-", "b-+ b++", "b-- a++",
                "b-- b+-",
            ],
        );
    }

    #[test]
    fn margins_and_reads_on_a_length_four_wrap() {
        // a- b- b+ a+ with signs +, -, +, -: both margins are 3, the
        // near read sits at position 3 from the left, the far read at
        // position 3 from the right.
        let word = vec![(0usize, false), (1, false), (1, true), (0, true)];
        assert_eq!(margins(&word), Some((3, 3)));
        let signs = [1i8, -1, 1, -1];
        assert_eq!(margin_reads(&word, &signs), Some((1, -1)));
        assert_eq!(margins(&[(0, false), (0, true)]), Some((1, 1)));
        assert_eq!(margins(&[(0, false), (0, false)]), None);
    }

    #[test]
    fn scan_enforces_the_enclosed_count_rule() {
        let fam = family();
        let sym = |e, c, s| fam.symbol(e, c, s);
        // one enclosed return
        let one = vec![sym(0, false, 1), sym(0, false, 1), sym(0, true, 1), sym(0, true, 1)];
        assert!(!fam.contains(&one).unwrap());
        // two enclosed returns
        let mut two = vec![sym(0, false, 1)];
        two.extend([sym(0, false, 1), sym(0, true, 1), sym(0, false, 1), sym(0, true, 1)]);
        two.push(sym(0, true, 1));
        assert!(!fam.contains(&two).unwrap());
        // three enclosed returns
        let mut three = vec![sym(0, false, 1)];
        for _ in 0..3 {
            three.extend([sym(0, false, 1), sym(0, true, 1)]);
        }
        three.push(sym(0, true, 1));
        assert!(fam.contains(&three).unwrap());
    }

    #[test]
    fn scan_links_boundaries_through_the_twist() {
        let fam = family();
        let sym = |e, c, s| fam.symbol(e, c, s);
        // equal signs need equal edges
        assert!(fam.contains(&[sym(0, false, 1), sym(0, true, 1)]).unwrap());
        assert!(!fam.contains(&[sym(0, false, 1), sym(0, true, -1)]).unwrap());
        // opposite signs need twist-related edges
        assert!(fam.contains(&[sym(0, false, 1), sym(1, true, -1)]).unwrap());
        assert!(!fam.contains(&[sym(0, false, 1), sym(1, true, 1)]).unwrap());
        // unmatched brackets only constrain the walk
        assert!(fam.contains(&[sym(0, true, 1), sym(1, true, -1)]).unwrap());
        assert!(fam.contains(&[sym(1, true, 1), sym(0, false, -1)]).unwrap());
    }

    #[test]
    fn every_symbol_has_bounded_two_sided_futures() {
        let fam = family();
        for s in 0..fam.symbol_count() {
            let fut = omega_plus(&fam, &[s], 1, 2).unwrap();
            let past = omega_minus(&fam, &[s], 1, 2).unwrap();
            assert!(!fut.is_empty(), "symbol {} has no common future", fam.symbol_name(s));
            assert!(!past.is_empty(), "symbol {} has no common past", fam.symbol_name(s));
        }
    }

    #[test]
    fn code_words_share_bounded_contexts() {
        let fam = family();
        let (shared, n) = code_words_share_contexts(&fam, 0, 2, 2, 1000).unwrap();
        assert!(shared);
        assert_eq!(n, 8);
    }

    #[test]
    fn hidden_pair_is_one_sided_blind_but_jointly_separated() {
        let cfg = TwistConfig::double_loop(12);
        let w = hidden_pair_witness(&cfg, 3).unwrap();
        assert!(w.left_equal);
        assert!(w.right_equal);
        assert!(w.separated);
        let fam = family();
        assert_eq!(names(&fam, &w.words[0]), "a-+ a++");
        assert_eq!(names(&fam, &w.words[1]), "a-- a+-");
        assert_eq!(names(&fam, &w.separator.0), "a-+");
        assert_eq!(names(&fam, &w.separator.1), "a-+ a++ a-+ a++ a++");
    }

    #[test]
    fn joint_witness_pattern_is_diagonal() {
        let cfg = TwistConfig::double_loop(12);
        let w = joint_context_witness(&cfg, 2).unwrap();
        assert_eq!(w.words[0].len(), 58);
        assert_eq!((w.near_flip, w.far_flip), (7, 50));
        assert_eq!(w.admissible, [true; 4]);
        assert!(w.joint_diagonal, "pattern: {:?}", w.joint_pattern);
        assert!(w.left_tracks_near);
        assert!(w.right_tracks_far);
        assert!(!w.all_one_sided_equal);
    }

    #[test]
    fn joint_witness_requires_positive_depth() {
        let cfg = TwistConfig::double_loop(12);
        let err = joint_context_witness(&cfg, 0).unwrap_err();
        assert!(matches!(err, Error::DepthInsufficient { .. }), "{err}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn membership_is_factor_closed(w in proptest::collection::vec(0usize..8, 0..10)) {
            let fam = family();
            if fam.contains(&w).unwrap() {
                for i in 0..w.len() {
                    for j in i..=w.len() {
                        prop_assert!(fam.contains(&w[i..j]).unwrap());
                    }
                }
            }
        }
    }
}
