//! Weighted undirected graph model and edge-list I/O.
//!
//! Every link optionally carries a capacity in Mb/s and a propagation delay
//! in ms. Either all links carry both attributes or none does.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::textio::{fmt_f64, read_file, write_file};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("node index exceeds u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkAttrs {
    /// Mb/s.
    pub capacity: f64,
    /// ms.
    pub prop_delay: f64,
}

impl LinkAttrs {
    pub fn new(capacity: f64, prop_delay: f64) -> Self {
        LinkAttrs {
            capacity,
            prop_delay,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Link {
    pub u: NodeId,
    pub v: NodeId,
    pub attrs: Option<LinkAttrs>,
}

impl Link {
    pub fn other(&self, n: NodeId) -> NodeId {
        if self.u == n {
            self.v
        } else {
            self.u
        }
    }

    fn key(&self) -> (u32, u32) {
        (self.u.0.min(self.v.0), self.u.0.max(self.v.0))
    }
}

/// Per-link summary `(k, k', C, P)` with `k <= k'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkVector {
    pub k: u32,
    pub k2: u32,
    pub capacity: f64,
    pub delay: f64,
}

impl LinkVector {
    pub fn new(a: u32, b: u32, capacity: f64, delay: f64) -> Self {
        LinkVector {
            k: a.min(b),
            k2: a.max(b),
            capacity,
            delay,
        }
    }
}

/// A simple undirected graph. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    links: Vec<Link>,
    /// Neighbors sorted by node id, each with the index of the joining link.
    adjacency: Vec<Vec<(NodeId, usize)>>,
    /// Original (external) node label per dense id.
    labels: Vec<u64>,
    meta: BTreeMap<String, String>,
}

impl Topology {
    /// Build a topology over nodes `0..n_nodes`. Labels default to the dense ids.
    pub fn new(n_nodes: usize, links: Vec<Link>) -> Result<Self> {
        let labels = (0..n_nodes as u64).collect();
        Self::with_labels(labels, links)
    }

    pub fn with_labels(labels: Vec<u64>, links: Vec<Link>) -> Result<Self> {
        let n = labels.len();
        let weighted = links.first().is_some_and(|l| l.attrs.is_some());
        let mut seen = HashSet::with_capacity(links.len());
        let mut adjacency = vec![Vec::new(); n];
        for (i, l) in links.iter().enumerate() {
            if l.u.index() >= n || l.v.index() >= n {
                return Err(Error::InvalidTopology(format!(
                    "link {}-{} references a node outside 0..{n}",
                    l.u, l.v
                )));
            }
            if l.u == l.v {
                return Err(Error::InvalidTopology(format!("self-loop on node {}", l.u)));
            }
            if !seen.insert(l.key()) {
                return Err(Error::InvalidTopology(format!(
                    "duplicate link {}-{}",
                    l.u, l.v
                )));
            }
            if l.attrs.is_some() != weighted {
                return Err(Error::InvalidTopology(
                    "links must either all carry attributes or none".into(),
                ));
            }
            if let Some(a) = l.attrs {
                if !(a.capacity > 0.0 && a.capacity.is_finite())
                    || !(a.prop_delay > 0.0 && a.prop_delay.is_finite())
                {
                    return Err(Error::InvalidTopology(format!(
                        "link {}-{} has non-positive attributes ({}, {})",
                        l.u, l.v, a.capacity, a.prop_delay
                    )));
                }
            }
            adjacency[l.u.index()].push((l.v, i));
            adjacency[l.v.index()].push((l.u, i));
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable_by_key(|&(v, _)| v);
        }
        Ok(Topology {
            links,
            adjacency,
            labels,
            meta: BTreeMap::new(),
        })
    }

    /// Unweighted topology from `(u, v)` pairs.
    pub fn from_edges(n_nodes: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let links = edges
            .iter()
            .map(|&(u, v)| Link {
                u: NodeId(u),
                v: NodeId(v),
                attrs: None,
            })
            .collect();
        Self::new(n_nodes, links)
    }

    /// Weighted topology from `(u, v, capacity_mbps, prop_delay_ms)`.
    pub fn from_weighted_edges(n_nodes: usize, edges: &[(u32, u32, f64, f64)]) -> Result<Self> {
        let links = edges
            .iter()
            .map(|&(u, v, c, p)| Link {
                u: NodeId(u),
                v: NodeId(v),
                attrs: Some(LinkAttrs::new(c, p)),
            })
            .collect();
        Self::new(n_nodes, links)
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn n_links(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, i: usize) -> &Link {
        &self.links[i]
    }

    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[n.index()]
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.adjacency[n.index()].len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.adjacency.iter().map(|a| a.len() as u32).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n_nodes() == 0 {
            0.0
        } else {
            2.0 * self.n_links() as f64 / self.n_nodes() as f64
        }
    }

    pub fn has_link(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u.index()]
            .binary_search_by_key(&v, |&(w, _)| w)
            .is_ok()
    }

    pub fn is_weighted(&self) -> bool {
        self.links.first().is_some_and(|l| l.attrs.is_some())
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.get(key).map(String::as_str)
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.meta.insert(key.into(), value.into());
        self
    }

    pub(crate) fn with_meta_map(mut self, meta: BTreeMap<String, String>) -> Self {
        self.meta = meta;
        self
    }

    /// Copy of `self` with every link's attributes replaced, in link order.
    pub fn with_link_attrs(&self, attrs: &[LinkAttrs]) -> Result<Self> {
        if attrs.len() != self.links.len() {
            return Err(Error::LengthMismatch(format!(
                "{} attribute pairs for {} links",
                attrs.len(),
                self.links.len()
            )));
        }
        let links = self
            .links
            .iter()
            .zip(attrs)
            .map(|(l, &a)| Link {
                attrs: Some(a),
                ..*l
            })
            .collect();
        Ok(Self::with_labels(self.labels.clone(), links)?.with_meta_map(self.meta.clone()))
    }

    /// Same graph with links ordered by `(min id, max id)` and oriented `u < v`.
    pub fn canonical(&self) -> Self {
        let mut links: Vec<Link> = self
            .links
            .iter()
            .map(|l| {
                let (a, b) = l.key();
                Link {
                    u: NodeId(a),
                    v: NodeId(b),
                    attrs: l.attrs,
                }
            })
            .collect();
        links.sort_by_key(Link::key);
        Self::with_labels(self.labels.clone(), links)
            .expect("canonical form of a valid topology is valid")
            .with_meta_map(self.meta.clone())
    }

    /// Connected components as lists of node ids, in order of smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let n = self.n_nodes();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![NodeId::from(s)];
            comp[s] = c;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &self.adjacency[u] {
                    if comp[v.index()] == usize::MAX {
                        comp[v.index()] = c;
                        members.push(v);
                        queue.push_back(v.index());
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n_nodes() <= 1 || self.components().len() == 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        let c = self.components().len();
        if c > 1 {
            Err(Error::Disconnected { components: c })
        } else {
            Ok(())
        }
    }

    /// Subgraph induced by `keep` (sorted ascending), re-densified in that order.
    pub fn induced(&self, keep: &[NodeId]) -> Self {
        let mut map = vec![u32::MAX; self.n_nodes()];
        for (new, &old) in keep.iter().enumerate() {
            map[old.index()] = new as u32;
        }
        let links = self
            .links
            .iter()
            .filter(|l| map[l.u.index()] != u32::MAX && map[l.v.index()] != u32::MAX)
            .map(|l| Link {
                u: NodeId(map[l.u.index()]),
                v: NodeId(map[l.v.index()]),
                attrs: l.attrs,
            })
            .collect();
        let labels = keep.iter().map(|n| self.labels[n.index()]).collect();
        Self::with_labels(labels, links)
            .expect("induced subgraph of a valid topology is valid")
            .with_meta_map(self.meta.clone())
    }
}

/// Largest connected component and the share of nodes it keeps.
#[derive(Clone, Debug)]
pub struct GiantComponent {
    pub topology: Topology,
    pub retained: usize,
    pub total: usize,
}

impl GiantComponent {
    pub fn retained_fraction(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.retained as f64 / self.total as f64
        }
    }
}

/// Largest connected component, ids re-densified. Ties go to the component
/// holding the smallest node id.
pub fn giant_component(t: &Topology) -> GiantComponent {
    let comps = t.components();
    let best = comps
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.len().cmp(&b.len()).then(j.cmp(i)))
        .map(|(i, _)| i);
    let topology = match best {
        Some(i) if comps.len() > 1 => t.induced(&comps[i]),
        _ => t.clone(),
    };
    let retained = topology.n_nodes();
    let frac = if t.n_nodes() == 0 {
        1.0
    } else {
        retained as f64 / t.n_nodes() as f64
    };
    GiantComponent {
        topology: topology.with_meta("gcc_retention", fmt_f64(frac)),
        retained,
        total: t.n_nodes(),
    }
}

/// One `(k, k', C, P)` vector per link, in link order.
pub fn link_vectors(t: &Topology) -> Result<Vec<LinkVector>> {
    if !t.is_weighted() && t.n_links() > 0 {
        return Err(Error::Unweighted);
    }
    Ok(t.links
        .iter()
        .map(|l| {
            let a = l.attrs.expect("weighted topology");
            LinkVector::new(
                t.degree(l.u) as u32,
                t.degree(l.v) as u32,
                a.capacity,
                a.prop_delay,
            )
        })
        .collect())
}

const HEADER: &str = "# netrescale edge list: u v [capacity_mbps prop_delay_ms]";

/// Parse edge-list text. Node labels are densified in ascending label order.
///
/// Lines with a single label declare an isolated node. `#@ key=value` comment
/// lines carry metadata.
pub fn parse_edge_list(text: &str) -> Result<Topology> {
    struct Row {
        line: usize,
        u: u64,
        v: u64,
        attrs: Option<LinkAttrs>,
    }
    let mut rows = Vec::new();
    let mut nodes = Vec::new();
    let mut meta = BTreeMap::new();
    let mut weighted: Option<bool> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix('#') {
            if let Some(kv) = rest.strip_prefix('@') {
                if let Some((k, v)) = kv.trim().split_once('=') {
                    meta.insert(k.trim().to_string(), v.trim().to_string());
                }
            }
            continue;
        }
        let toks: Vec<&str> = s.split_whitespace().collect();
        let id = |tok: &str| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid node id {tok:?}"),
            })
        };
        let num = |tok: &str| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid number {tok:?}"),
            })
        };
        match toks.len() {
            1 => nodes.push(id(toks[0])?),
            2 | 4 => {
                let u = id(toks[0])?;
                let v = id(toks[1])?;
                let attrs = if toks.len() == 4 {
                    let a = LinkAttrs::new(num(toks[2])?, num(toks[3])?);
                    if !(a.capacity > 0.0 && a.capacity.is_finite())
                        || !(a.prop_delay > 0.0 && a.prop_delay.is_finite())
                    {
                        return Err(Error::Parse {
                            line,
                            message: "capacity and delay must be positive".into(),
                        });
                    }
                    Some(a)
                } else {
                    None
                };
                match weighted {
                    None => weighted = Some(attrs.is_some()),
                    Some(w) if w != attrs.is_some() => return Err(Error::MissingAttribute { line }),
                    _ => {}
                }
                if u == v {
                    return Err(Error::SelfLoop { line, node: u });
                }
                rows.push(Row { line, u, v, attrs });
            }
            3 => return Err(Error::MissingAttribute { line }),
            n => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 2 or 4 columns, got {n}"),
                })
            }
        }
    }
    nodes.extend(rows.iter().flat_map(|r| [r.u, r.v]));
    nodes.sort_unstable();
    nodes.dedup();
    let index: HashMap<u64, u32> = nodes
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as u32))
        .collect();
    let mut seen = HashSet::with_capacity(rows.len());
    let mut links = Vec::with_capacity(rows.len());
    for r in rows {
        if !seen.insert((r.u.min(r.v), r.u.max(r.v))) {
            return Err(Error::DuplicateLink {
                line: r.line,
                u: r.u,
                v: r.v,
            });
        }
        links.push(Link {
            u: NodeId(index[&r.u]),
            v: NodeId(index[&r.v]),
            attrs: r.attrs,
        });
    }
    Ok(Topology::with_labels(nodes, links)?.with_meta_map(meta))
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Topology> {
    parse_edge_list(&read_file(path.as_ref())?)
}

/// Edge-list text with original labels, links sorted by `(min id, max id)`.
pub fn format_edge_list(t: &Topology) -> String {
    let mut s = String::from(HEADER);
    s.push('\n');
    for (k, v) in &t.meta {
        s.push_str(&format!("#@ {k}={v}\n"));
    }
    for (i, a) in t.adjacency.iter().enumerate() {
        if a.is_empty() {
            s.push_str(&format!("{}\n", t.labels[i]));
        }
    }
    let mut order: Vec<usize> = (0..t.links.len()).collect();
    order.sort_by_key(|&i| t.links[i].key());
    for i in order {
        let l = &t.links[i];
        let (a, b) = l.key();
        s.push_str(&format!("{} {}", t.labels[a as usize], t.labels[b as usize]));
        if let Some(at) = l.attrs {
            s.push_str(&format!(" {} {}", fmt_f64(at.capacity), fmt_f64(at.prop_delay)));
        }
        s.push('\n');
    }
    s
}

pub fn save_edge_list(t: &Topology, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &format_edge_list(t))
}

/// Dense-id to original-label mapping, one `dense label` pair per line.
pub fn format_id_map(t: &Topology) -> String {
    let mut s = String::from("# dense_id original_label\n");
    for (i, l) in t.labels.iter().enumerate() {
        s.push_str(&format!("{i} {l}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Topology {
        parse_edge_list("0 1 10 5\n1 2 20 7\n0 2 5 3\n").unwrap()
    }

    #[test]
    fn loads_weighted_triangle() {
        let t = triangle();
        assert_eq!(t.n_nodes(), 3);
        assert_eq!(t.n_links(), 3);
        assert!(t.is_weighted());
        assert_eq!(t.degrees(), vec![2, 2, 2]);
    }

    #[test]
    fn rejects_self_loop() {
        assert!(matches!(
            parse_edge_list("0 0 1 1\n"),
            Err(Error::SelfLoop { line: 1, node: 0 })
        ));
    }

    #[test]
    fn rejects_duplicate_in_either_orientation() {
        assert!(matches!(
            parse_edge_list("# c\n0 1\n1 0\n"),
            Err(Error::DuplicateLink { line: 3, .. })
        ));
    }

    #[test]
    fn rejects_half_attributes() {
        assert!(matches!(
            parse_edge_list("0 1 10\n"),
            Err(Error::MissingAttribute { line: 1 })
        ));
        assert!(matches!(
            parse_edge_list("0 1 10 2\n1 2\n"),
            Err(Error::MissingAttribute { line: 2 })
        ));
    }

    #[test]
    fn parse_error_reports_line() {
        match parse_edge_list("0 1\n\nx 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn densifies_sparse_labels() {
        let t = parse_edge_list("100 7\n7 3356\n").unwrap();
        assert_eq!(t.labels(), &[7, 100, 3356]);
        assert_eq!(t.degrees(), vec![2, 1, 1]);
    }

    #[test]
    fn empty_topology_saves_header_only() {
        let t = Topology::new(0, vec![]).unwrap();
        let s = format_edge_list(&t);
        assert_eq!(s, format!("{HEADER}\n"));
        let back = parse_edge_list(&s).unwrap();
        assert_eq!(back.n_nodes(), 0);
    }

    #[test]
    fn save_load_roundtrip_keeps_isolated_nodes_and_meta() {
        let t = Topology::from_weighted_edges(4, &[(2, 0, 1.5, 0.25), (1, 2, 3.0, 1e-3)])
            .unwrap()
            .with_meta("alpha", "0.5");
        let back = parse_edge_list(&format_edge_list(&t)).unwrap();
        assert_eq!(back, t.canonical());
        assert_eq!(back.meta_value("alpha"), Some("0.5"));
    }

    #[test]
    fn giant_component_of_triangle_plus_edge() {
        let t = Topology::from_edges(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let g = giant_component(&t);
        assert_eq!(g.topology.n_nodes(), 3);
        assert_eq!(g.topology.n_links(), 3);
        assert_eq!(g.retained, 3);
        assert!((g.retained_fraction() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn giant_component_of_connected_graph_is_identity() {
        let t = triangle();
        let g = giant_component(&t);
        assert_eq!(g.topology.links(), t.links());
        assert_eq!(g.retained_fraction(), 1.0);
        let empty = giant_component(&Topology::new(0, vec![]).unwrap());
        assert_eq!(empty.topology.n_nodes(), 0);
    }

    #[test]
    fn link_vectors_of_triangle_and_star() {
        let t = Topology::from_weighted_edges(3, &[(0, 1, 10.0, 5.0), (1, 2, 10.0, 5.0), (0, 2, 10.0, 5.0)])
            .unwrap();
        assert!(link_vectors(&t)
            .unwrap()
            .iter()
            .all(|v| *v == LinkVector::new(2, 2, 10.0, 5.0)));
        let star = Topology::from_weighted_edges(4, &[(1, 0, 1.0, 1.0), (0, 2, 1.0, 1.0), (3, 0, 1.0, 1.0)])
            .unwrap();
        let vs = link_vectors(&star).unwrap();
        assert_eq!(vs.len(), 3);
        assert!(vs.iter().all(|v| v.k == 1 && v.k2 == 3));
    }

    #[test]
    fn link_vectors_need_attributes() {
        let t = Topology::from_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(link_vectors(&t), Err(Error::Unweighted)));
    }

    #[test]
    fn constructor_rejects_invalid_links() {
        assert!(Topology::from_edges(2, &[(0, 0)]).is_err());
        assert!(Topology::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Topology::from_edges(2, &[(0, 2)]).is_err());
        assert!(Topology::from_weighted_edges(2, &[(0, 1, 0.0, 1.0)]).is_err());
    }
}
