//! Individualization–refinement search for graph automorphisms.
//!
//! Partitions are ordered: a cell is identified by its start position in
//! `order`, which is invariant under relabeling. Refinement splits every cell
//! by the multiset of neighbor cells until nothing changes; individualizing a
//! vertex also splits cells by BFS distance from it. The target cell is the
//! first smallest non-singleton cell.
//!
//! Generators are found level by level from the bottom of the first path.
//! At each level every vertex of the target cell that is not yet known to be
//! in the base point's orbit gets an exhaustive subtree search, so the product
//! of the orbit sizes is the exact group order.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::graph::{PancakeGraph, VertexId};

use super::schreier_sims::Perm;

const MAX_DEGREE: usize = 8;

#[derive(Clone, Debug)]
struct Partition {
    order: Vec<VertexId>,
    /// Cell start position for each vertex.
    cell_of: Vec<u32>,
    /// Cell end (exclusive), indexed by cell start.
    cell_end: Vec<u32>,
    cells: usize,
}

impl Partition {
    fn unit(count: usize) -> Self {
        let mut cell_end = vec![0; count];
        cell_end[0] = count as u32;
        Partition { order: (0..count as VertexId).collect(), cell_of: vec![0; count], cell_end, cells: 1 }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.order.len()
    }

    fn cell_starts(&self) -> impl Iterator<Item = usize> + '_ {
        let mut s = 0;
        std::iter::from_fn(move || {
            if s >= self.order.len() {
                return None;
            }
            let start = s;
            s = self.cell_end[s] as usize;
            Some(start)
        })
    }

    /// First smallest non-singleton cell, as a start position.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for s in self.cell_starts() {
            let len = self.cell_end[s] as usize - s;
            if len > 1 && best.is_none_or(|(_, l)| len < l) {
                best = Some((s, len));
            }
        }
        best.map(|(s, _)| s)
    }

    fn cell_members(&self, start: usize) -> &[VertexId] {
        &self.order[start..self.cell_end[start] as usize]
    }

    // Re-sorts each cell by `key` and splits between distinct keys.
    // Returns whether any cell split.
    fn split_by<K: Ord + Copy>(&mut self, key: &[K]) -> bool {
        let starts: Vec<usize> = self.cell_starts().collect();
        let mut split = false;
        for s in starts {
            let e = self.cell_end[s] as usize;
            if e - s < 2 {
                continue;
            }
            let cell = &mut self.order[s..e];
            cell.sort_unstable_by_key(|&v| key[v as usize]);
            let mut begin = s;
            let mut groups = 0;
            for p in s + 1..=e {
                if p == e || key[self.order[p] as usize] != key[self.order[p - 1] as usize] {
                    self.cell_end[begin] = p as u32;
                    for q in begin..p {
                        self.cell_of[self.order[q] as usize] = begin as u32;
                    }
                    groups += 1;
                    begin = p;
                }
            }
            if groups > 1 {
                split = true;
                self.cells += groups - 1;
            }
        }
        split
    }

    fn refine(&mut self, g: &PancakeGraph) {
        let count = self.order.len();
        let mut sig = vec![[u32::MAX; MAX_DEGREE]; count];
        loop {
            for (v, row) in sig.iter_mut().enumerate() {
                for (slot, &w) in g.neighbors(v as VertexId).iter().enumerate() {
                    row[slot] = self.cell_of[w as usize];
                }
                row[..g.degree()].sort_unstable();
            }
            if !self.split_by(&sig) {
                break;
            }
        }
    }

    fn individualize(&self, g: &PancakeGraph, v: VertexId) -> Partition {
        let mut next = self.clone();
        let s = next.cell_of[v as usize] as usize;
        let e = next.cell_end[s] as usize;
        debug_assert!(e - s > 1);
        let pos = next.order[s..e].iter().position(|&x| x == v).unwrap() + s;
        next.order.swap(s, pos);
        next.cell_end[s] = s as u32 + 1;
        next.cell_end[s + 1] = e as u32;
        next.cell_of[v as usize] = s as u32;
        for q in s + 1..e {
            next.cell_of[next.order[q] as usize] = s as u32 + 1;
        }
        next.cells += 1;
        let dist = g.distances_from(v);
        next.split_by(&dist);
        next.refine(g);
        next
    }

    /// Isomorphism-invariant fingerprint: cell sizes and the (equitable)
    /// neighbor-cell multiset of each cell.
    fn invariant(&self, g: &PancakeGraph) -> u64 {
        let mut h = DefaultHasher::new();
        for s in self.cell_starts() {
            (self.cell_end[s] as usize - s).hash(&mut h);
            let v = self.order[s];
            let mut row: Vec<u32> = g.neighbors(v).iter().map(|&w| self.cell_of[w as usize]).collect();
            row.sort_unstable();
            row.hash(&mut h);
        }
        h.finish()
    }
}

/// Searches output.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub generators: Vec<Perm>,
    /// First-path individualized vertices.
    pub base: Vec<VertexId>,
    /// Orbit of each base point under the pointwise stabilizer of the previous ones.
    pub orbit_sizes: Vec<usize>,
    pub tree_nodes: u64,
}

impl SearchOutcome {
    pub fn order(&self) -> u128 {
        self.orbit_sizes.iter().map(|&s| s as u128).product()
    }
}

struct Searcher<'a> {
    g: &'a PancakeGraph,
    path_invariants: Vec<u64>,
    first_leaf: Vec<VertexId>,
    nodes: u64,
}

pub fn is_automorphism(g: &PancakeGraph, map: &[u32]) -> bool {
    let count = g.vertex_count();
    if map.len() != count {
        return false;
    }
    let mut hit = vec![false; count];
    for &y in map {
        if y as usize >= count || std::mem::replace(&mut hit[y as usize], true) {
            return false;
        }
    }
    // A bijection of a finite graph that maps edges to edges also maps
    // non-edges to non-edges.
    g.edges().all(|(u, v)| g.is_edge(map[u as usize], map[v as usize]))
}

impl Searcher<'_> {
    fn leaf_map(&self, leaf: &Partition) -> Perm {
        let mut map = vec![0; self.first_leaf.len()];
        for (p, &v) in self.first_leaf.iter().enumerate() {
            map[v as usize] = leaf.order[p];
        }
        map
    }

    fn subtree(&mut self, node: &Partition, depth: usize) -> Option<Perm> {
        self.nodes += 1;
        if depth >= self.path_invariants.len() || node.invariant(self.g) != self.path_invariants[depth] {
            return None;
        }
        if node.is_discrete() {
            let map = self.leaf_map(node);
            return is_automorphism(self.g, &map).then_some(map);
        }
        let target = node.target_cell()?;
        let mut members = node.cell_members(target).to_vec();
        members.sort_unstable();
        for x in members {
            let child = node.individualize(self.g, x);
            if let Some(found) = self.subtree(&child, depth + 1) {
                return Some(found);
            }
        }
        None
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

fn orbit_partition(count: usize, gens: &[Perm]) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..count as u32).collect();
    for gamma in gens {
        for v in 0..count as u32 {
            let (a, b) = (find(&mut parent, v), find(&mut parent, gamma[v as usize]));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    for v in 0..count as u32 {
        find(&mut parent, v);
    }
    parent
}

pub fn search_automorphisms(g: &PancakeGraph) -> SearchOutcome {
    let count = g.vertex_count();
    let mut path = vec![{
        let mut p = Partition::unit(count);
        p.refine(g);
        p
    }];
    let mut base = Vec::new();
    while let Some(target) = path.last().unwrap().target_cell() {
        let top = path.last().unwrap();
        let b = *top.cell_members(target).iter().min().unwrap();
        base.push(b);
        let next = top.individualize(g, b);
        path.push(next);
    }
    let mut searcher = Searcher {
        g,
        path_invariants: path.iter().map(|p| p.invariant(g)).collect(),
        first_leaf: path.last().unwrap().order.clone(),
        nodes: path.len() as u64,
    };

    let mut generators: Vec<Perm> = Vec::new();
    let mut orbit_sizes = vec![0; base.len()];
    for level in (0..base.len()).rev() {
        let node = &path[level];
        let b = base[level];
        let mut cell = node.cell_members(node.target_cell().unwrap()).to_vec();
        cell.sort_unstable();
        let mut orbits = orbit_partition(count, &generators);
        for &w in &cell {
            if w == b || orbits[w as usize] == orbits[b as usize] {
                continue;
            }
            let child = node.individualize(g, w);
            if let Some(gamma) = searcher.subtree(&child, level + 1) {
                generators.push(gamma);
                orbits = orbit_partition(count, &generators);
            }
        }
        orbit_sizes[level] = cell.iter().filter(|&&w| orbits[w as usize] == orbits[b as usize]).count();
    }
    SearchOutcome { generators, base, orbit_sizes, tree_nodes: searcher.nodes }
}
