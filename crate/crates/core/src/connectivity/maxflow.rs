//! Unit-capacity max-flow on the vertex-split digraph of a graph.
//!
//! Vertex `v` becomes `v_in = 2v → v_out = 2v + 1` with capacity 1, and each
//! undirected edge `{u, w}` becomes `u_out → w_in` and `w_out → u_in`. The
//! maximum `s_out → t_in` flow counts internally vertex-disjoint `s`–`t` paths.

use crate::graph::{PancakeGraph, VertexId};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct SplitNetwork {
    first_arc: Vec<u32>,
    // Arc `a` and its reverse `a ^ 1` are stored adjacently.
    arc_to: Vec<u32>,
    arc_cap: Vec<u8>,
    arc_next: Vec<u32>,
}

impl SplitNetwork {
    pub fn new(g: &PancakeGraph) -> Self {
        let count = g.vertex_count();
        let mut net = SplitNetwork {
            first_arc: vec![NONE; 2 * count],
            arc_to: Vec::with_capacity(2 * (count + 2 * g.edge_count())),
            arc_cap: Vec::new(),
            arc_next: Vec::new(),
        };
        for v in 0..count as u32 {
            net.add_arc(2 * v, 2 * v + 1);
        }
        for (u, w) in g.edges() {
            net.add_arc(2 * u + 1, 2 * w);
            net.add_arc(2 * w + 1, 2 * u);
        }
        net
    }

    fn add_arc(&mut self, from: u32, to: u32) {
        for (tail, head, cap) in [(from, to, 1u8), (to, from, 0u8)] {
            let idx = self.arc_to.len() as u32;
            self.arc_to.push(head);
            self.arc_cap.push(cap);
            self.arc_next.push(self.first_arc[tail as usize]);
            self.first_arc[tail as usize] = idx;
        }
    }

    /// Number of internally disjoint `s`–`t` paths, counting at most `limit`.
    /// `s` and `t` must be distinct and non-adjacent.
    pub fn local_connectivity(&self, s: VertexId, t: VertexId, limit: usize) -> usize {
        self.local_connectivity_in(&mut self.workspace(), s, t, limit)
    }

    pub fn workspace(&self) -> Workspace {
        let nodes = self.first_arc.len();
        Workspace {
            cap: self.arc_cap.clone(),
            touched: Vec::new(),
            epoch: 0,
            fwd_seen: vec![0; nodes],
            fwd_via: vec![NONE; nodes],
            bwd_seen: vec![0; nodes],
            bwd_via: vec![NONE; nodes],
            next: Vec::new(),
        }
    }

    /// As [`local_connectivity`](Self::local_connectivity), reusing `ws`
    /// (which must come from this network).
    pub fn local_connectivity_in(&self, ws: &mut Workspace, s: VertexId, t: VertexId, limit: usize) -> usize {
        let (source, sink) = (2 * s + 1, 2 * t);
        let mut flow = 0;
        while flow < limit {
            let Some(meet) = self.bidirectional_search(ws, source, sink) else {
                break;
            };
            let mut y = meet;
            while y != source {
                let a = ws.fwd_via[y as usize];
                ws.push(a);
                y = self.arc_to[(a ^ 1) as usize];
            }
            let mut x = meet;
            while x != sink {
                let a = ws.bwd_via[x as usize];
                ws.push(a);
                x = self.arc_to[a as usize];
            }
            flow += 1;
        }
        for &a in &ws.touched {
            ws.cap[a as usize] = self.arc_cap[a as usize];
        }
        ws.touched.clear();
        flow
    }

    // Level-synchronous BFS from both ends of the residual network, always
    // growing the smaller frontier. Returns a node reached from both sides.
    fn bidirectional_search(&self, ws: &mut Workspace, source: u32, sink: u32) -> Option<u32> {
        ws.epoch += 1;
        let epoch = ws.epoch;
        ws.fwd_seen[source as usize] = epoch;
        ws.bwd_seen[sink as usize] = epoch;
        let mut fwd = vec![source];
        let mut bwd = vec![sink];
        while !fwd.is_empty() && !bwd.is_empty() {
            ws.next.clear();
            if fwd.len() <= bwd.len() {
                for &x in &fwd {
                    let mut a = self.first_arc[x as usize];
                    while a != NONE {
                        let y = self.arc_to[a as usize];
                        if ws.cap[a as usize] > 0 && ws.fwd_seen[y as usize] != epoch {
                            ws.fwd_seen[y as usize] = epoch;
                            ws.fwd_via[y as usize] = a;
                            if ws.bwd_seen[y as usize] == epoch {
                                return Some(y);
                            }
                            ws.next.push(y);
                        }
                        a = self.arc_next[a as usize];
                    }
                }
                std::mem::swap(&mut fwd, &mut ws.next);
            } else {
                for &y in &bwd {
                    // Arcs into `y` are the reverses of arcs out of `y`.
                    let mut b = self.first_arc[y as usize];
                    while b != NONE {
                        let x = self.arc_to[b as usize];
                        let a = b ^ 1;
                        if ws.cap[a as usize] > 0 && ws.bwd_seen[x as usize] != epoch {
                            ws.bwd_seen[x as usize] = epoch;
                            ws.bwd_via[x as usize] = a;
                            if ws.fwd_seen[x as usize] == epoch {
                                return Some(x);
                            }
                            ws.next.push(x);
                        }
                        b = self.arc_next[b as usize];
                    }
                }
                std::mem::swap(&mut bwd, &mut ws.next);
            }
        }
        None
    }
}

/// Per-thread scratch space for repeated flow computations.
#[derive(Clone, Debug)]
pub struct Workspace {
    cap: Vec<u8>,
    touched: Vec<u32>,
    epoch: u32,
    fwd_seen: Vec<u32>,
    fwd_via: Vec<u32>,
    bwd_seen: Vec<u32>,
    bwd_via: Vec<u32>,
    next: Vec<u32>,
}

impl Workspace {
    // Sends one unit along arc `a`.
    fn push(&mut self, a: u32) {
        self.cap[a as usize] -= 1;
        self.cap[(a ^ 1) as usize] += 1;
        self.touched.push(a);
        self.touched.push(a ^ 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_pair_on_six_cycle() {
        let g = PancakeGraph::build(3).unwrap();
        let net = SplitNetwork::new(&g);
        let dist = g.distances_from(0);
        let far = dist.iter().position(|&d| d == 3).unwrap() as u32;
        assert_eq!(net.local_connectivity(0, far, usize::MAX), 2);
        assert_eq!(net.local_connectivity(0, far, 1), 1);
    }

    #[test]
    fn p4_pairs_have_three_paths() {
        let g = PancakeGraph::build(4).unwrap();
        let net = SplitNetwork::new(&g);
        for t in 1..24 {
            if !g.is_edge(0, t) {
                assert_eq!(net.local_connectivity(0, t, usize::MAX), 3);
            }
        }
    }
}
