//! Efficient dominating sets (perfect codes) of `P_n`.
//!
//! A set `D` is a perfect code exactly when the closed neighborhoods `N[v]`,
//! `v ∈ D`, tile the vertex set, so enumeration is an exact-cover search with
//! one column per vertex and one row per closed neighborhood.

pub mod exact_cover;

use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BlockKind, PancakeGraph, VertexId};
use crate::permutations::Permutation;
use exact_cover::ExactCover;

/// Largest `n` accepted by [`enumerate_efficient_dominating_sets`].
pub const MAX_ENUMERATION_N: usize = 7;

/// Search-node budget for the exact-cover enumeration.
pub const SEARCH_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EfficientDominatingSet {
    pub members: Vec<VertexId>,
    /// `Some(i)` when `members = B^(i)`.
    pub label: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "vertex", rename_all = "snake_case")]
pub enum Violation {
    /// Member with a neighbor inside the set.
    NotIndependent(VertexId),
    /// Non-member with no neighbor in the set.
    Undominated(VertexId),
    /// Non-member with two or more neighbors in the set.
    OverDominated(VertexId),
}

impl Violation {
    pub fn vertex(&self) -> VertexId {
        match *self {
            Violation::NotIndependent(v) | Violation::Undominated(v) | Violation::OverDominated(v) => v,
        }
    }
}

/// `Ok(())` if `set` is a perfect code, otherwise the violation at the
/// lowest-id offending vertex.
pub fn is_efficient_dominating_set(g: &PancakeGraph, set: &[VertexId]) -> Result<(), Violation> {
    let inside = g.mask_of(set);
    for v in 0..g.vertex_count() as VertexId {
        let hits = g.neighbors(v).iter().filter(|&&w| inside[w as usize]).count();
        match (inside[v as usize], hits) {
            (true, 0) | (false, 1) => {}
            (true, _) => return Err(Violation::NotIndependent(v)),
            (false, 0) => return Err(Violation::Undominated(v)),
            (false, _) => return Err(Violation::OverDominated(v)),
        }
    }
    Ok(())
}

/// `i` with `set = B^(i)`, if any.
pub fn first_symbol_label(g: &PancakeGraph, set: &[VertexId]) -> Option<usize> {
    let first = g.label(*set.first()?).first();
    let block = g.block_members(BlockKind::FirstSymbol(first)).ok()?;
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    (sorted == block).then_some(first)
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub n: usize,
    pub count: usize,
    pub sets: Vec<EfficientDominatingSet>,
    pub search_nodes: u64,
}

/// All perfect codes of `g`, ordered by smallest member.
pub fn enumerate_efficient_dominating_sets(g: &PancakeGraph) -> Result<DominationReport> {
    let n = g.n();
    if n < 3 {
        return Err(Error::domain(format!("perfect-code enumeration needs n >= 3, got {n}")));
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::refusal(format!("perfect-code enumeration on P_{n}"), format!("n <= {MAX_ENUMERATION_N}")));
    }
    let rows: Vec<Vec<usize>> = (0..g.vertex_count() as VertexId)
        .map(|v| g.closed_neighborhood(v).into_iter().map(|w| w as usize).collect())
        .collect();
    let mut dlx = ExactCover::new(g.vertex_count(), &rows);
    let mut found: Vec<Vec<VertexId>> = Vec::new();
    let (stats, complete) = dlx.search(SEARCH_NODE_BUDGET, |centers| {
        let mut set: Vec<VertexId> = centers.iter().map(|&r| r as VertexId).collect();
        set.sort_unstable();
        found.push(set);
        ControlFlow::Continue(())
    });
    if !complete {
        return Err(Error::refusal(
            format!("perfect-code search on P_{n} exceeded its node budget"),
            format!("{SEARCH_NODE_BUDGET} search nodes"),
        ));
    }
    found.sort();
    let sets: Vec<EfficientDominatingSet> = found
        .into_iter()
        .map(|members| {
            let label = first_symbol_label(g, &members);
            EfficientDominatingSet { members, label }
        })
        .collect();
    Ok(DominationReport { n, count: sets.len(), sets, search_nodes: stats.nodes_visited })
}

/// Smallest BFS distance between two distinct members (`None` for fewer than two).
pub fn min_pairwise_distance(g: &PancakeGraph, set: &[VertexId]) -> Option<u32> {
    if set.len() < 2 {
        return None;
    }
    let inside = g.mask_of(set);
    set.iter()
        .map(|&v| {
            let dist = g.distances_from(v);
            dist.iter()
                .enumerate()
                .filter(|&(w, _)| inside[w] && w as VertexId != v)
                .map(|(_, &d)| d)
                .min()
                .unwrap_or(u32::MAX)
        })
        .min()
}

#[derive(Clone, Debug, Serialize)]
pub struct SetSummary {
    pub label: Option<usize>,
    pub size: usize,
    pub members: Vec<Permutation>,
}

impl DominationReport {
    pub fn summaries(&self, g: &PancakeGraph) -> Vec<SetSummary> {
        self.sets
            .iter()
            .map(|s| SetSummary {
                label: s.label,
                size: s.members.len(),
                members: s.members.iter().map(|&v| g.label(v)).collect(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code_sets(n: usize) -> (PancakeGraph, DominationReport) {
        let g = PancakeGraph::build(n).unwrap();
        let report = enumerate_efficient_dominating_sets(&g).unwrap();
        (g, report)
    }

    #[test]
    fn first_symbol_blocks_are_codes() {
        for n in 3..=6 {
            let g = PancakeGraph::build(n).unwrap();
            for i in 1..=n {
                let b = g.block_members(BlockKind::FirstSymbol(i)).unwrap();
                assert_eq!(is_efficient_dominating_set(&g, &b), Ok(()));
                assert_eq!(first_symbol_label(&g, &b), Some(i));
            }
        }
    }

    #[test]
    fn last_symbol_block_of_p3_is_not_a_code() {
        let g = PancakeGraph::build(3).unwrap();
        let b = g.block_members(BlockKind::LastSymbol(1)).unwrap();
        // [2,1,3] (id 2) has neighbors [1,2,3] and [3,1,2], neither in B_(1).
        assert_eq!(is_efficient_dominating_set(&g, &b), Err(Violation::Undominated(2)));
    }

    #[test]
    fn empty_set_witness_is_identity() {
        let g = PancakeGraph::build(4).unwrap();
        assert_eq!(is_efficient_dominating_set(&g, &[]), Err(Violation::Undominated(0)));
    }

    #[test]
    fn adjacent_members_are_reported() {
        let g = PancakeGraph::build(4).unwrap();
        let set = vec![0, g.neighbor_via(0, 2)];
        assert_eq!(is_efficient_dominating_set(&g, &set), Err(Violation::NotIndependent(0)));
    }

    #[test]
    fn enumeration_counts() {
        for n in 3..=5 {
            let (g, report) = code_sets(n);
            assert_eq!(report.count, n);
            let mut labels: Vec<_> = report.sets.iter().map(|s| s.label.unwrap()).collect();
            labels.sort_unstable();
            assert_eq!(labels, (1..=n).collect::<Vec<_>>());
            for s in &report.sets {
                assert_eq!(s.members.len(), crate::permutations::factorial(n - 1) as usize);
                assert!(min_pairwise_distance(&g, &s.members).unwrap() >= 3);
            }
        }
    }

    #[test]
    fn brute_force_agrees_at_n3() {
        let (g, report) = code_sets(3);
        let mut brute = Vec::new();
        for a in 0..6u32 {
            for b in a + 1..6 {
                if is_efficient_dominating_set(&g, &[a, b]).is_ok() {
                    brute.push(vec![a, b]);
                }
            }
        }
        assert_eq!(brute.len(), 3);
        let found: Vec<_> = report.sets.iter().map(|s| s.members.clone()).collect();
        assert_eq!(found, brute);
    }

    #[test]
    fn refuses_out_of_range() {
        assert!(enumerate_efficient_dominating_sets(&PancakeGraph::build(2).unwrap()).is_err());
        let g8 = PancakeGraph::build(8).unwrap();
        assert!(enumerate_efficient_dominating_sets(&g8).unwrap_err().is_scale_refusal());
    }
}
