//! The pancake graph `P_n = Cay(S_n, PR_n)` on rank-indexed vertices.
//!
//! Vertex `v` is the permutation of lexicographic rank `v`. Neighbor slot
//! `j − 2` of every vertex holds its neighbor via `r_{1j}`, so the adjacency
//! of `v` lists the results of reversing its first 2, 3, …, n entries.

use std::collections::{HashMap, VecDeque};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutations::{factorial, Permutation};

pub type VertexId = u32;

/// Largest `n` with a precomputed adjacency table (40320 · 7 ids at `n = 8`).
pub const MAX_BUILD_N: usize = 8;

const UNREACHED: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct PancakeGraph {
    n: usize,
    adjacency: Vec<VertexId>,
}

impl PancakeGraph {
    pub fn build(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("pancake graph needs n >= 2, got {n}")));
        }
        if n > MAX_BUILD_N {
            return Err(Error::refusal(
                format!("building P_{n} ({} vertices)", factorial(n.min(20))),
                format!("n <= {MAX_BUILD_N}"),
            ));
        }
        let count = factorial(n) as usize;
        let degree = n - 1;
        let mut adjacency = vec![0; count * degree];
        for v in 0..count {
            let label = Permutation::unrank(v as u64, n)?;
            let row = &mut adjacency[v * degree..(v + 1) * degree];
            for j in 2..=n {
                row[j - 2] = label.reverse_prefix(j)?.rank() as VertexId;
            }
        }
        Ok(Self { n, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.n - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len() / self.degree()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    /// Vertex id of the identity permutation.
    pub fn identity(&self) -> VertexId {
        0
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let d = self.degree();
        &self.adjacency[v as usize * d..(v as usize + 1) * d]
    }

    /// Neighbor of `v` via `r_{1j}`.
    pub fn neighbor_via(&self, v: VertexId, j: usize) -> VertexId {
        self.neighbors(v)[j - 2]
    }

    pub fn is_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).contains(&v)
    }

    /// Prefix length `j` with `v = u·r_{1j}`, if `u` and `v` are adjacent.
    pub fn edge_label(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.neighbors(u).iter().position(|&w| w == v).map(|slot| slot + 2)
    }

    pub fn label(&self, v: VertexId) -> Permutation {
        Permutation::unrank(v as u64, self.n).expect("vertex id within range")
    }

    pub fn id_of(&self, p: &Permutation) -> Result<VertexId> {
        if p.degree() != self.n {
            return Err(Error::domain(format!("{p} is not an element of S_{}", self.n)));
        }
        Ok(p.rank() as VertexId)
    }

    /// Edges `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count() as VertexId).flat_map(move |u| {
            let mut row: Vec<VertexId> = self.neighbors(u).iter().copied().filter(|&v| v > u).collect();
            row.sort_unstable();
            row.into_iter().map(move |v| (u, v))
        })
    }

    pub(crate) fn mask_of(&self, set: &[VertexId]) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count()];
        for &v in set {
            mask[v as usize] = true;
        }
        mask
    }

    /// Open neighborhood `N(F)`: vertices outside `F` adjacent to some member of `F`.
    pub fn neighborhood(&self, set: &[VertexId]) -> Vec<VertexId> {
        let inside = self.mask_of(set);
        let mut hit = vec![false; self.vertex_count()];
        for &v in set {
            for &w in self.neighbors(v) {
                if !inside[w as usize] {
                    hit[w as usize] = true;
                }
            }
        }
        collect_mask(&hit)
    }

    /// `C(F) = F ∪ N(F)`.
    pub fn closure(&self, set: &[VertexId]) -> Vec<VertexId> {
        let mut all = self.neighborhood(set);
        all.extend_from_slice(set);
        all.sort_unstable();
        all.dedup();
        all
    }

    /// `R(F) = V ∖ C(F)`.
    pub fn remote(&self, set: &[VertexId]) -> Vec<VertexId> {
        let closed = self.mask_of(&self.closure(set));
        collect_mask(&closed.iter().map(|c| !c).collect::<Vec<_>>())
    }

    /// Closed neighborhood `N[v]`, sorted.
    pub fn closed_neighborhood(&self, v: VertexId) -> Vec<VertexId> {
        let mut all = self.neighbors(v).to_vec();
        all.push(v);
        all.sort_unstable();
        all
    }

    /// Components of `V ∖ removed`, each sorted, ordered by smallest member.
    pub fn connected_components(&self, removed: &[VertexId]) -> Vec<Vec<VertexId>> {
        let removed = self.mask_of(removed);
        components_with(self.vertex_count(), |v| self.neighbors(v), &removed)
    }

    /// BFS distances from `root`; unreachable vertices get `u32::MAX`.
    pub fn distances_from(&self, root: VertexId) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = VecDeque::from([root]);
        dist[root as usize] = 0;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = dist[u as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of the shortest cycle through `root`, or `None` if there is none.
    pub fn girth_at(&self, root: VertexId) -> Option<u32> {
        let count = self.vertex_count();
        let mut dist = vec![UNREACHED; count];
        let mut parent = vec![UNREACHED; count];
        let mut queue = VecDeque::from([root]);
        dist[root as usize] = 0;
        let mut best: Option<u32> = None;
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                // Any cycle closed from this level on is at least 2·dist(u) long.
                if 2 * dist[u as usize] >= b {
                    break;
                }
            }
            for &w in self.neighbors(u) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = dist[u as usize] + 1;
                    parent[w as usize] = u;
                    queue.push_back(w);
                } else if parent[u as usize] != w {
                    let len = dist[u as usize] + dist[w as usize] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        best
    }

    /// Girth, rooted at the identity. Cayley graphs are vertex-transitive, so
    /// some shortest cycle passes through every vertex.
    pub fn girth(&self) -> Option<u32> {
        self.girth_at(self.identity())
    }

    /// Eccentricity of the identity, which is the diameter by vertex-transitivity.
    pub fn diameter(&self) -> u32 {
        self.distances_from(self.identity()).into_iter().max().unwrap_or(0)
    }

    pub fn block_members(&self, kind: BlockKind) -> Result<Vec<VertexId>> {
        kind.validate(self.n)?;
        Ok((0..self.vertex_count() as VertexId).filter(|&v| kind.contains(&self.label(v))).collect())
    }

    pub fn block(&self, kind: BlockKind) -> Result<Block> {
        Ok(Block { kind, members: self.block_members(kind)? })
    }

    pub fn induced_subgraph(&self, set: &[VertexId]) -> InducedSubgraph {
        let mut local_to_global = set.to_vec();
        local_to_global.sort_unstable();
        local_to_global.dedup();
        let global_to_local: HashMap<VertexId, u32> =
            local_to_global.iter().enumerate().map(|(local, &global)| (global, local as u32)).collect();
        let adjacency = local_to_global
            .iter()
            .map(|&g| {
                let mut row: Vec<u32> =
                    self.neighbors(g).iter().filter_map(|w| global_to_local.get(w).copied()).collect();
                row.sort_unstable();
                row
            })
            .collect();
        InducedSubgraph { local_to_global, global_to_local, adjacency }
    }

    pub fn export(&self) -> GraphExport {
        GraphExport {
            n: self.n,
            vertices: (0..self.vertex_count() as VertexId).map(|v| self.label(v)).collect(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    /// One `u v` line per edge, `u < v`, ascending.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

pub(crate) fn collect_mask(mask: &[bool]) -> Vec<VertexId> {
    mask.iter().enumerate().filter_map(|(v, &m)| m.then_some(v as VertexId)).collect()
}

pub(crate) fn components_with<'a, F>(count: usize, neighbors: F, removed: &[bool]) -> Vec<Vec<VertexId>>
where
    F: Fn(VertexId) -> &'a [VertexId],
{
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..count {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start as VertexId);
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &w in neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Which of the block families a [`Block`] belongs to. Symbols are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    /// `B^(i) = {π : π(1) = i}`.
    FirstSymbol(usize),
    /// `B_(j) = {π : π(n) = j}`.
    LastSymbol(usize),
    /// `B^(i)_(j) = B^(i) ∩ B_(j)`; empty when `i == j`.
    FirstAndLast { first: usize, last: usize },
    /// `{π : π(n−1) = penultimate, π(n) = last}`.
    SuffixPattern { penultimate: usize, last: usize },
}

impl BlockKind {
    fn validate(&self, n: usize) -> Result<()> {
        let symbols: &[usize] = match self {
            BlockKind::FirstSymbol(i) | BlockKind::LastSymbol(i) => &[*i][..],
            BlockKind::FirstAndLast { first, last } => &[*first, *last],
            BlockKind::SuffixPattern { penultimate, last } => &[*penultimate, *last],
        };
        if symbols.iter().any(|&s| s == 0 || s > n) {
            return Err(Error::domain(format!("{self:?} outside symbols 1..={n}")));
        }
        Ok(())
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        let n = p.degree();
        match *self {
            BlockKind::FirstSymbol(i) => p.first() == i,
            BlockKind::LastSymbol(j) => p.last() == j,
            BlockKind::FirstAndLast { first, last } => p.first() == first && p.last() == last,
            BlockKind::SuffixPattern { penultimate, last } => {
                n >= 2 && p.apply(n - 1) == penultimate && p.last() == last
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub kind: BlockKind,
    pub members: Vec<VertexId>,
}

/// A subgraph induced on a vertex subset, keeping both id maps.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    local_to_global: Vec<VertexId>,
    global_to_local: HashMap<VertexId, u32>,
    adjacency: Vec<Vec<u32>>,
}

impl InducedSubgraph {
    pub fn len(&self) -> usize {
        self.local_to_global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.local_to_global.is_empty()
    }

    pub fn global(&self, local: u32) -> VertexId {
        self.local_to_global[local as usize]
    }

    pub fn local(&self, global: VertexId) -> Option<u32> {
        self.global_to_local.get(&global).copied()
    }

    pub fn neighbors(&self, local: u32) -> &[u32] {
        &self.adjacency[local as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.adjacency.iter().all(|row| row.len() == degree)
    }

    pub fn is_connected(&self) -> bool {
        let removed = vec![false; self.len()];
        components_with(self.len(), |v| self.neighbors(v), &removed).len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub n: usize,
    pub vertices: Vec<Permutation>,
    pub edges: Vec<[VertexId; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u8]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn ids(g: &PancakeGraph, perms: &[&[u8]]) -> Vec<VertexId> {
        let mut out: Vec<_> = perms.iter().map(|q| g.id_of(&p(q)).unwrap()).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn small_sizes() {
        let g3 = PancakeGraph::build(3).unwrap();
        assert_eq!((g3.vertex_count(), g3.edge_count()), (6, 6));
        let g4 = PancakeGraph::build(4).unwrap();
        assert_eq!((g4.vertex_count(), g4.edge_count(), g4.degree()), (24, 36, 3));
        let g5 = PancakeGraph::build(5).unwrap();
        assert_eq!((g5.vertex_count(), g5.edge_count()), (120, 240));
    }

    #[test]
    fn p3_is_six_cycle() {
        let g = PancakeGraph::build(3).unwrap();
        assert!((0..6).all(|v| g.neighbors(v).len() == 2));
        assert_eq!(g.connected_components(&[]).len(), 1);
        assert_eq!(g.girth(), Some(6));
    }

    #[test]
    fn build_bounds() {
        assert!(PancakeGraph::build(1).is_err());
        assert!(PancakeGraph::build(MAX_BUILD_N + 1).unwrap_err().is_scale_refusal());
    }

    #[test]
    fn neighborhood_examples() {
        let g = PancakeGraph::build(3).unwrap();
        // (1 2) = [2,1,3], (1 3 2) = [3,1,2].
        let f = ids(&g, &[&[2, 1, 3], &[3, 1, 2]]);
        assert_eq!(g.neighborhood(&f), ids(&g, &[&[1, 2, 3], &[1, 3, 2]]));
        let all: Vec<_> = (0..6).collect();
        assert!(g.neighborhood(&all).is_empty());

        let g4 = PancakeGraph::build(4).unwrap();
        let n_id = g4.neighborhood(&[g4.identity()]);
        let expected = ids(&g4, &[&[2, 1, 3, 4], &[3, 2, 1, 4], &[4, 3, 2, 1]]);
        assert_eq!(n_id, expected);
    }

    #[test]
    fn closure_and_remote_partition_vertices() {
        let g = PancakeGraph::build(4).unwrap();
        let f = vec![0, 5, 9];
        let c = g.closure(&f);
        let r = g.remote(&f);
        assert_eq!(c.len() + r.len(), 24);
        assert!(r.iter().all(|v| !c.contains(v)));
    }

    #[test]
    fn components_examples() {
        let g3 = PancakeGraph::build(3).unwrap();
        let comps = g3.connected_components(&g3.neighborhood(&[0]));
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], vec![0]);
        assert_eq!(comps[1].len(), 3);

        let g4 = PancakeGraph::build(4).unwrap();
        let comps = g4.connected_components(&g4.closed_neighborhood(0));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 20);
    }

    #[test]
    fn diameter_small() {
        assert_eq!(PancakeGraph::build(2).unwrap().diameter(), 1);
        assert_eq!(PancakeGraph::build(3).unwrap().diameter(), 3);
    }

    #[test]
    fn p2_has_no_cycle() {
        assert_eq!(PancakeGraph::build(2).unwrap().girth(), None);
    }

    #[test]
    fn blocks() {
        let g3 = PancakeGraph::build(3).unwrap();
        assert_eq!(g3.block_members(BlockKind::FirstSymbol(1)).unwrap(), ids(&g3, &[&[1, 2, 3], &[1, 3, 2]]));
        let g5 = PancakeGraph::build(5).unwrap();
        assert_eq!(g5.block_members(BlockKind::FirstAndLast { first: 2, last: 3 }).unwrap().len(), 6);
        assert!(g5.block_members(BlockKind::FirstAndLast { first: 2, last: 2 }).unwrap().is_empty());
        assert!(g5.block_members(BlockKind::LastSymbol(6)).is_err());
        assert_eq!(g5.block_members(BlockKind::SuffixPattern { penultimate: 1, last: 2 }).unwrap().len(), 6);
    }

    #[test]
    fn last_symbol_block_of_p4_is_six_cycle() {
        let g = PancakeGraph::build(4).unwrap();
        let sub = g.induced_subgraph(&g.block_members(BlockKind::LastSymbol(4)).unwrap());
        assert_eq!(sub.len(), 6);
        assert!(sub.is_regular(2));
        assert!(sub.is_connected());
        assert_eq!(sub.edge_count(), 6);
        for local in 0..sub.len() as u32 {
            assert_eq!(sub.local(sub.global(local)), Some(local));
        }
    }

    #[test]
    fn edge_list_format() {
        let g = PancakeGraph::build(3).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0], "0 2");
    }

    #[test]
    fn export_json_shape() {
        let g = PancakeGraph::build(4).unwrap();
        let json = serde_json::to_value(g.export()).unwrap();
        assert_eq!(json["n"], 4);
        assert_eq!(json["vertices"].as_array().unwrap().len(), 24);
        assert_eq!(json["edges"].as_array().unwrap().len(), 36);
        assert_eq!(json["vertices"][0], serde_json::json!([1, 2, 3, 4]));
    }
}
