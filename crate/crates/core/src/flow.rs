//! Dinic max-flow on an undirected multigraph with multiplicities as capacities.

use crate::graph::Multigraph;
use crate::vertex_set::VertexSet;
use std::collections::VecDeque;

const UNBOUNDED: u64 = u64::MAX / 4;

struct Arc {
    to: usize,
    cap: u64,
}

pub(crate) struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    level: Vec<u32>,
    cursor: Vec<usize>,
    source: usize,
    sink: usize,
}

impl FlowNetwork {
    /// Graph vertices keep their ids; a super source feeds every source terminal
    /// and every sink terminal drains into a super sink.
    pub(crate) fn from_graph(g: &Multigraph, sources: &VertexSet, sinks: &VertexSet) -> Self {
        let n = g.n();
        let mut net = FlowNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); n + 2],
            level: vec![0; n + 2],
            cursor: vec![0; n + 2],
            source: n,
            sink: n + 1,
        };
        for (u, v, k) in g.edges() {
            // An undirected edge is a pair of opposite arcs that are each other's residual.
            net.add_pair(u, v, k as u64, k as u64);
        }
        for s in sources {
            net.add_pair(n, s, UNBOUNDED, 0);
        }
        for t in sinks {
            net.add_pair(t, n + 1, UNBOUNDED, 0);
        }
        net
    }

    fn add_pair(&mut self, u: usize, v: usize, forward: u64, backward: u64) {
        self.out[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap: forward });
        self.out[v].push(self.arcs.len());
        self.arcs.push(Arc { to: u, cap: backward });
    }

    fn build_levels(&mut self) -> bool {
        self.level.fill(u32::MAX);
        self.level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && self.level[arc.to] == u32::MAX {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[self.sink] != u32::MAX
    }

    fn augment(&mut self, u: usize, limit: u64) -> u64 {
        if u == self.sink {
            return limit;
        }
        while self.cursor[u] < self.out[u].len() {
            let a = self.out[u][self.cursor[u]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let pushed = self.augment(to, limit.min(cap));
                if pushed > 0 {
                    self.arcs[a].cap -= pushed;
                    self.arcs[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    pub(crate) fn max_flow(&mut self) -> u64 {
        let mut total = 0;
        while self.build_levels() {
            self.cursor.fill(0);
            loop {
                let pushed = self.augment(self.source, UNBOUNDED);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Graph vertices reachable from the super source in the residual network.
    /// Only meaningful after [`max_flow`](Self::max_flow).
    pub(crate) fn source_side(&self, n: usize) -> VertexSet {
        let mut seen = vec![false; n + 2];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    queue.push_back(arc.to);
                }
            }
        }
        VertexSet::from_vertices(n, (0..n).filter(|&v| seen[v]))
    }
}
