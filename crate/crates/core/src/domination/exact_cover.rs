//! Exact cover by dancing links (Knuth's Algorithm X).
//!
//! Column choice is deterministic: the column with the fewest remaining rows,
//! ties broken by the lowest column index. Active columns are kept in one
//! bitset per remaining size, so the choice costs a scan of one bucket rather
//! than of every header. Solutions are reported as row indices in the order
//! they were chosen.

use std::ops::ControlFlow;

#[derive(Clone, Copy, Debug, Default)]
struct Node {
    left: usize,
    right: usize,
    up: usize,
    down: usize,
    column: usize,
    row: usize,
}

#[derive(Clone, Debug)]
pub struct ExactCover {
    nodes: Vec<Node>,
    sizes: Vec<usize>,
    /// `buckets[s]` holds the active column headers with `s` remaining rows.
    buckets: Vec<Vec<u64>>,
    bucket_len: Vec<usize>,
    columns: usize,
    rows: usize,
}

/// Counters from a completed (or aborted) search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub solutions: u64,
}

impl ExactCover {
    /// `rows[r]` lists the columns covered by row `r`; each must be strictly increasing.
    pub fn new(columns: usize, rows: &[Vec<usize>]) -> Self {
        // Node 0 is the root header, 1..=columns are column headers.
        let mut nodes = Vec::with_capacity(1 + columns + rows.iter().map(Vec::len).sum::<usize>());
        for c in 0..=columns {
            nodes.push(Node {
                left: if c == 0 { columns } else { c - 1 },
                right: if c == columns { 0 } else { c + 1 },
                up: c,
                down: c,
                column: c,
                row: usize::MAX,
            });
        }
        let mut sizes = vec![0; columns + 1];
        for (r, cols) in rows.iter().enumerate() {
            debug_assert!(cols.windows(2).all(|w| w[0] < w[1]));
            let first = nodes.len();
            for (idx, &c) in cols.iter().enumerate() {
                let header = c + 1;
                let me = nodes.len();
                let up = nodes[header].up;
                nodes.push(Node {
                    left: if idx == 0 { me } else { me - 1 },
                    right: first,
                    up,
                    down: header,
                    column: header,
                    row: r,
                });
                nodes[up].down = me;
                nodes[header].up = me;
                if idx > 0 {
                    nodes[me - 1].right = me;
                    nodes[first].left = me;
                }
                sizes[header] += 1;
            }
        }
        let max_size = sizes.iter().copied().max().unwrap_or(0);
        let words = (columns + 1).div_ceil(64);
        let mut cover = Self {
            nodes,
            sizes,
            buckets: vec![vec![0; words]; max_size + 1],
            bucket_len: vec![0; max_size + 1],
            columns,
            rows: rows.len(),
        };
        for c in 1..=columns {
            cover.bucket_insert(c);
        }
        cover
    }

    fn bucket_insert(&mut self, c: usize) {
        let s = self.sizes[c];
        self.buckets[s][c / 64] |= 1 << (c % 64);
        self.bucket_len[s] += 1;
    }

    fn bucket_remove(&mut self, c: usize) {
        let s = self.sizes[c];
        self.buckets[s][c / 64] &= !(1 << (c % 64));
        self.bucket_len[s] -= 1;
    }

    fn shrink(&mut self, c: usize) {
        self.bucket_remove(c);
        self.sizes[c] -= 1;
        self.bucket_insert(c);
    }

    fn grow(&mut self, c: usize) {
        self.bucket_remove(c);
        self.sizes[c] += 1;
        self.bucket_insert(c);
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    fn cover(&mut self, c: usize) {
        self.bucket_remove(c);
        let (l, r) = (self.nodes[c].left, self.nodes[c].right);
        self.nodes[l].right = r;
        self.nodes[r].left = l;
        let mut i = self.nodes[c].down;
        while i != c {
            let mut j = self.nodes[i].right;
            while j != i {
                let (u, d) = (self.nodes[j].up, self.nodes[j].down);
                self.nodes[u].down = d;
                self.nodes[d].up = u;
                self.shrink(self.nodes[j].column);
                j = self.nodes[j].right;
            }
            i = self.nodes[i].down;
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.nodes[c].up;
        while i != c {
            let mut j = self.nodes[i].left;
            while j != i {
                let (u, d) = (self.nodes[j].up, self.nodes[j].down);
                self.grow(self.nodes[j].column);
                self.nodes[u].down = j;
                self.nodes[d].up = j;
                j = self.nodes[j].left;
            }
            i = self.nodes[i].up;
        }
        let (l, r) = (self.nodes[c].left, self.nodes[c].right);
        self.nodes[l].right = c;
        self.nodes[r].left = c;
        self.bucket_insert(c);
    }

    // Lowest-index column among those with the fewest remaining rows.
    fn choose_column(&self) -> Option<usize> {
        let s = self.bucket_len.iter().position(|&len| len > 0)?;
        self.buckets[s].iter().enumerate().find(|(_, &w)| w != 0).map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
    }

    /// Visits every exact cover. `visit` may stop the search with `Break`.
    /// The search also stops once `node_budget` search nodes have been expanded;
    /// the returned flag is `false` in that case.
    pub fn search<F>(&mut self, node_budget: u64, mut visit: F) -> (SearchStats, bool)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut stats = SearchStats::default();
        let mut partial = Vec::new();
        let outcome = self.recurse(&mut partial, &mut stats, node_budget, &mut visit);
        (stats, !matches!(outcome, Stop::Budget))
    }

    fn recurse<F>(&mut self, partial: &mut Vec<usize>, stats: &mut SearchStats, budget: u64, visit: &mut F) -> Stop
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        stats.nodes_visited += 1;
        if stats.nodes_visited > budget {
            return Stop::Budget;
        }
        let Some(c) = self.choose_column() else {
            stats.solutions += 1;
            return match visit(partial) {
                ControlFlow::Continue(()) => Stop::Continue,
                ControlFlow::Break(()) => Stop::Caller,
            };
        };
        if self.sizes[c] == 0 {
            return Stop::Continue;
        }
        self.cover(c);
        let mut r = self.nodes[c].down;
        let mut outcome = Stop::Continue;
        while r != c {
            partial.push(self.nodes[r].row);
            let mut j = self.nodes[r].right;
            while j != r {
                self.cover(self.nodes[j].column);
                j = self.nodes[j].right;
            }
            outcome = self.recurse(partial, stats, budget, visit);
            let mut j = self.nodes[r].left;
            while j != r {
                self.uncover(self.nodes[j].column);
                j = self.nodes[j].left;
            }
            partial.pop();
            if !matches!(outcome, Stop::Continue) {
                break;
            }
            r = self.nodes[r].down;
        }
        self.uncover(c);
        outcome
    }
}

enum Stop {
    Continue,
    Caller,
    Budget,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_solutions(columns: usize, rows: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let mut dlx = ExactCover::new(columns, rows);
        let mut out = Vec::new();
        let (_, complete) = dlx.search(u64::MAX, |s| {
            let mut s = s.to_vec();
            s.sort_unstable();
            out.push(s);
            ControlFlow::Continue(())
        });
        assert!(complete);
        out.sort();
        out
    }

    #[test]
    fn knuth_example() {
        // The 7-column example from "Dancing Links"; unique cover {A,D,E} = rows 0,3,4.
        let rows = vec![vec![2, 4, 5], vec![0, 3, 6], vec![1, 2, 5], vec![0, 3], vec![1, 6], vec![3, 4, 6]];
        assert_eq!(all_solutions(7, &rows), vec![vec![0, 3, 4]]);
    }

    #[test]
    fn multiple_and_no_solutions() {
        let rows = vec![vec![0], vec![1], vec![0, 1]];
        assert_eq!(all_solutions(2, &rows), vec![vec![0, 1], vec![2]]);
        let rows = vec![vec![0, 1], vec![1, 2]];
        assert!(all_solutions(3, &rows).is_empty());
    }

    #[test]
    fn structure_is_restored_after_search() {
        let rows = vec![vec![0], vec![1], vec![0, 1]];
        let mut dlx = ExactCover::new(2, &rows);
        let first = dlx.search(u64::MAX, |_| ControlFlow::Continue(())).0;
        let second = dlx.search(u64::MAX, |_| ControlFlow::Continue(())).0;
        assert_eq!(first, second);
        assert_eq!(first.solutions, 2);
    }

    #[test]
    fn budget_aborts() {
        let rows: Vec<Vec<usize>> = (0..6).map(|c| vec![c]).collect();
        let mut dlx = ExactCover::new(6, &rows);
        let (_, complete) = dlx.search(3, |_| ControlFlow::Continue(()));
        assert!(!complete);
    }
}
