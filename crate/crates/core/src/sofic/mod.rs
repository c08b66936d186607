//! Labeled-graph presentations of sofic shifts and the instantaneity
//! toolkit built on them: follower-set families, the bi-instantaneous
//! recoding, mapping searches, and the strong bi-instantaneity check.

mod follower;
mod mappings;
mod sbi;
mod transform;

pub use follower::{
    exact_omega_check, instantaneity_check, FollowerFamily, InstantaneityReport, SymbolVerdict,
};
pub use mappings::{
    bi_mapping_pair_search, ri_mapping_search, theta_embed_bi, theta_embed_ri, verify_bi_pair,
    verify_ri_mapping, ContextOracle, MappingSearch,
};
pub use sbi::{strong_bi_check, SbiVerdict};
pub use transform::{theorem61_transform, IntervalConvention, Transform};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::Language;

/// State index into a sofic presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

/// Edge of a sofic presentation: a state transition reading one symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LEdge {
    pub from: StateId,
    pub to: StateId,
    pub symbol: usize,
}

/// A finite directed graph with edges labeled by alphabet symbols. The
/// subshift presented is the set of label sequences of bi-infinite
/// paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoficPresentation {
    states: Vec<String>,
    symbols: Vec<String>,
    edges: Vec<LEdge>,
    // outgoing[state][symbol] -> successor states
    outgoing: Vec<Vec<Vec<StateId>>>,
    incoming: Vec<Vec<Vec<StateId>>>,
}

impl SoficPresentation {
    /// Builds a presentation from named states and (from, to, symbol)
    /// edges. The alphabet is collected from the edges and sorted.
    pub fn new(states: Vec<String>, edges: Vec<(String, String, String)>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::input("sofic presentation needs at least one state"));
        }
        let mut sidx = BTreeMap::new();
        for (i, s) in states.iter().enumerate() {
            if sidx.insert(s.clone(), StateId(i as u32)).is_some() {
                return Err(Error::input(format!("duplicate state {s:?}")));
            }
        }
        let mut symbols: Vec<String> = edges.iter().map(|(_, _, s)| s.clone()).collect();
        symbols.sort();
        symbols.dedup();
        let mut out = Vec::with_capacity(edges.len());
        for (from, to, symbol) in &edges {
            let from = *sidx
                .get(from)
                .ok_or_else(|| Error::input(format!("edge references unknown state {from:?}")))?;
            let to = *sidx
                .get(to)
                .ok_or_else(|| Error::input(format!("edge references unknown state {to:?}")))?;
            let symbol = symbols.binary_search(symbol).expect("symbol was collected");
            out.push(LEdge { from, to, symbol });
        }
        let mut outgoing = vec![vec![Vec::new(); symbols.len()]; states.len()];
        let mut incoming = vec![vec![Vec::new(); symbols.len()]; states.len()];
        for e in &out {
            outgoing[e.from.0 as usize][e.symbol].push(e.to);
            incoming[e.to.0 as usize][e.symbol].push(e.from);
        }
        Ok(SoficPresentation { states, symbols, edges: out, outgoing, incoming })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0 as usize]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| StateId(i as u32))
    }

    pub fn edges(&self) -> &[LEdge] {
        &self.edges
    }

    pub fn successors(&self, s: StateId, symbol: usize) -> &[StateId] {
        &self.outgoing[s.0 as usize][symbol]
    }

    pub fn predecessors(&self, s: StateId, symbol: usize) -> &[StateId] {
        &self.incoming[s.0 as usize][symbol]
    }

    /// Every state must lie on a bi-infinite path; otherwise the label
    /// language of finite paths would overshoot the subshift.
    pub fn is_essential(&self) -> bool {
        (0..self.states.len()).all(|s| {
            self.outgoing[s].iter().any(|v| !v.is_empty())
                && self.incoming[s].iter().any(|v| !v.is_empty())
        })
    }

    pub fn require_essential(&self) -> Result<()> {
        if self.is_essential() {
            Ok(())
        } else {
            Err(Error::input("presentation is not essential: some state lacks in- or out-edges"))
        }
    }

    /// The time reversal: every edge flipped, same labels.
    pub fn reversed(&self) -> SoficPresentation {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                (
                    self.states[e.to.0 as usize].clone(),
                    self.states[e.from.0 as usize].clone(),
                    self.symbols[e.symbol].clone(),
                )
            })
            .collect();
        SoficPresentation::new(self.states.clone(), edges).expect("reversal preserves shape")
    }

    /// Subset step of the label automaton.
    pub fn subset_step(&self, set: &[StateId], symbol: usize) -> Vec<StateId> {
        let mut out: Vec<StateId> = set
            .iter()
            .flat_map(|&s| self.outgoing[s.0 as usize][symbol].iter().copied())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn subset_word(&self, set: &[StateId], word: &[usize]) -> Vec<StateId> {
        let mut cur = set.to_vec();
        for &sym in word {
            if cur.is_empty() {
                break;
            }
            cur = self.subset_step(&cur, sym);
        }
        cur
    }

    /// Does any path realize the word from this state set?
    pub fn realizable_from(&self, set: &[StateId], word: &[usize]) -> bool {
        !self.subset_word(set, word).is_empty()
    }

    pub fn all_states(&self) -> Vec<StateId> {
        (0..self.states.len() as u32).map(StateId).collect()
    }
}

impl Language for SoficPresentation {
    fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    fn symbol_name(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    fn contains(&self, word: &[usize]) -> Result<bool> {
        if word.iter().any(|&s| s >= self.symbols.len()) {
            return Err(Error::input("unknown symbol index"));
        }
        // essential presentations make every realized word a factor
        Ok(self.realizable_from(&self.all_states(), word))
    }
}

#[derive(Serialize, Deserialize)]
struct SoficDto {
    states: Vec<String>,
    edges: Vec<SoficEdgeDto>,
}

#[derive(Serialize, Deserialize)]
struct SoficEdgeDto {
    from: String,
    to: String,
    symbol: String,
}

impl Serialize for SoficPresentation {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let dto = SoficDto {
            states: self.states.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| SoficEdgeDto {
                    from: self.states[e.from.0 as usize].clone(),
                    to: self.states[e.to.0 as usize].clone(),
                    symbol: self.symbols[e.symbol].clone(),
                })
                .collect(),
        };
        dto.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SoficPresentation {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let dto = SoficDto::deserialize(de)?;
        let edges = dto.edges.into_iter().map(|e| (e.from, e.to, e.symbol)).collect();
        SoficPresentation::new(dto.states, edges).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language;

    fn full_shift(n: usize) -> SoficPresentation {
        let edges = (0..n)
            .map(|i| ("q".to_string(), "q".to_string(), format!("{i}")))
            .collect();
        SoficPresentation::new(vec!["q".into()], edges).unwrap()
    }

    fn even_toy() -> SoficPresentation {
        SoficPresentation::new(
            vec!["e0".into(), "e1".into()],
            vec![
                ("e0".into(), "e0".into(), "1".into()),
                ("e0".into(), "e1".into(), "0".into()),
                ("e1".into(), "e0".into(), "0".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn language_of_even_toy() {
        let sp = even_toy();
        assert!(sp.is_essential());
        // "1 0 0 1" admissible, "1 0 1" not: an odd zero run between ones
        let w = language::word_from_names(&sp, &["1", "0", "0", "1"]).unwrap();
        assert!(sp.contains(&w).unwrap());
        let w = language::word_from_names(&sp, &["1", "0", "1"]).unwrap();
        assert!(!sp.contains(&w).unwrap());
        assert!(sp.contains(&[]).unwrap());
    }

    #[test]
    fn reversal_flips_words() {
        let sp = even_toy();
        let rev = sp.reversed();
        let w = language::word_from_names(&sp, &["1", "0", "0"]).unwrap();
        let mut back = w.clone();
        back.reverse();
        assert_eq!(sp.contains(&w).unwrap(), rev.contains(&back).unwrap());
    }

    #[test]
    fn non_essential_rejected() {
        let sp = SoficPresentation::new(
            vec!["a".into(), "b".into()],
            vec![("a".into(), "b".into(), "x".into()), ("a".into(), "a".into(), "y".into())],
        )
        .unwrap();
        assert!(!sp.is_essential());
        assert!(sp.require_essential().is_err());
    }

    #[test]
    fn json_round_trip() {
        let sp = full_shift(2);
        let js = serde_json::to_string(&sp).unwrap();
        assert!(js.starts_with("{\"states\":[\"q\"],\"edges\":[{\"from\":\"q\",\"to\":\"q\",\"symbol\":\"0\"}"));
        let back: SoficPresentation = serde_json::from_str(&js).unwrap();
        assert_eq!(back, sp);
    }
}
