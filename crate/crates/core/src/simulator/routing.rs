//! Hop-count shortest-path routing with a smallest-id tie-break.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::topology::{NodeId, Topology};

/// Routes over a connected topology. For `a < b` the path from `a` always
/// steps to the smallest-id neighbor one hop closer to `b`; the path from
/// `b` to `a` is its reverse, so routing is symmetric.
#[derive(Clone, Debug)]
pub struct RoutingTable<'t> {
    t: &'t Topology,
}

pub fn compute_routes(t: &Topology) -> Result<RoutingTable<'_>> {
    t.require_connected()?;
    Ok(RoutingTable { t })
}

fn bfs_from(t: &Topology, root: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; t.n_nodes()];
    let mut queue = VecDeque::new();
    dist[root] = 0;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in t.neighbors(NodeId::from(v)) {
            if dist[w.index()] == u32::MAX {
                dist[w.index()] = dist[v] + 1;
                queue.push_back(w.index());
            }
        }
    }
    dist
}

impl RoutingTable<'_> {
    /// Next hop from `at` toward the node whose BFS distances are `dist`.
    fn next_hop(&self, at: NodeId, dist: &[u32]) -> NodeId {
        let d = dist[at.index()];
        self.t
            .neighbors(at)
            .iter()
            .map(|&(w, _)| w)
            .find(|w| dist[w.index()] + 1 == d)
            .expect("connected")
    }

    fn walk(&self, lo: NodeId, hi: NodeId, dist_hi: &[u32]) -> Vec<NodeId> {
        let mut path = vec![lo];
        let mut at = lo;
        while at != hi {
            at = self.next_hop(at, dist_hi);
            path.push(at);
        }
        path
    }

    pub fn route(&self, src: NodeId, dst: NodeId) -> Result<Vec<NodeId>> {
        self.check(src)?;
        self.check(dst)?;
        let (lo, hi) = (src.min(dst), src.max(dst));
        let mut path = self.walk(lo, hi, &bfs_from(self.t, hi.index()));
        if src != lo {
            path.reverse();
        }
        Ok(path)
    }

    /// Routes for many pairs, sharing one BFS per distinct endpoint.
    pub fn routes(&self, pairs: &[(NodeId, NodeId)]) -> Result<Vec<Vec<NodeId>>> {
        let mut by_hi: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            self.check(a)?;
            self.check(b)?;
            by_hi.entry(a.max(b)).or_default().push(i);
        }
        let groups: Vec<(NodeId, Vec<usize>)> = by_hi.into_iter().collect();
        let solved: Vec<Vec<(usize, Vec<NodeId>)>> = groups
            .par_iter()
            .map(|(hi, idx)| {
                let dist = bfs_from(self.t, hi.index());
                idx.iter()
                    .map(|&i| {
                        let (a, b) = pairs[i];
                        let mut p = self.walk(a.min(b), *hi, &dist);
                        if a > b {
                            p.reverse();
                        }
                        (i, p)
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![Vec::new(); pairs.len()];
        for (i, p) in solved.into_iter().flatten() {
            out[i] = p;
        }
        Ok(out)
    }

    fn check(&self, n: NodeId) -> Result<()> {
        if n.index() >= self.t.n_nodes() {
            return Err(Error::InvalidTopology(format!("node {n} out of range")));
        }
        Ok(())
    }
}
