//! Topological and weighted-correlation statistics.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::index;
use rayon::prelude::*;

use crate::distfit::{empirical_ccdf, EmpiricalCcdf};
use crate::error::{Error, Result};
use crate::seed;
use crate::textio::fmt_f64;
use crate::topology::{NodeId, Topology};

/// One point of a plot-ready curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub count: usize,
}

/// A per-node statistic averaged over nodes of equal degree, both per degree
/// and in base-2 logarithmic degree bins.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeCurve {
    pub by_degree: Vec<CurvePoint>,
    pub binned: Vec<CurvePoint>,
    /// Mean over all contributing nodes.
    pub mean: f64,
}

/// Index of the base-2 bin holding degree `k`: bin `b` is `[2^b, 2^(b+1))`.
pub fn log2_bin(k: u32) -> u32 {
    31 - k.max(1).leading_zeros()
}

impl DegreeCurve {
    /// Build from per-node values; `None` entries are skipped.
    pub fn from_node_values(degrees: &[u32], values: &[Option<f64>]) -> Self {
        let mut per_degree: BTreeMap<u32, (f64, usize)> = BTreeMap::new();
        let mut per_bin: BTreeMap<u32, (f64, f64, usize)> = BTreeMap::new();
        let (mut total, mut n) = (0.0, 0usize);
        for (&k, v) in degrees.iter().zip(values) {
            if let Some(v) = *v {
                let e = per_degree.entry(k).or_default();
                e.0 += v;
                e.1 += 1;
                let b = per_bin.entry(log2_bin(k)).or_default();
                b.0 += f64::from(k);
                b.1 += v;
                b.2 += 1;
                total += v;
                n += 1;
            }
        }
        DegreeCurve {
            by_degree: per_degree
                .into_iter()
                .map(|(k, (s, c))| CurvePoint {
                    x: f64::from(k),
                    y: s / c as f64,
                    count: c,
                })
                .collect(),
            binned: per_bin
                .into_values()
                .map(|(ks, s, c)| CurvePoint {
                    x: ks / c as f64,
                    y: s / c as f64,
                    count: c,
                })
                .collect(),
            mean: if n > 0 { total / n as f64 } else { f64::NAN },
        }
    }

    /// The curve divided by its mean value.
    pub fn normalized(&self) -> DegreeCurve {
        let scale = |pts: &[CurvePoint]| -> Vec<CurvePoint> {
            pts.iter()
                .map(|p| CurvePoint {
                    y: p.y / self.mean,
                    ..*p
                })
                .collect()
        };
        DegreeCurve {
            by_degree: scale(&self.by_degree),
            binned: scale(&self.binned),
            mean: 1.0,
        }
    }

    /// Binned point whose bin contains degree `k`.
    pub fn bin_at(&self, k: u32) -> Option<&CurvePoint> {
        let b = log2_bin(k);
        self.binned
            .iter()
            .find(|p| log2_bin(p.x.floor().max(1.0) as u32) == b)
    }

    pub fn to_text(&self, header: &str, binned: bool) -> String {
        let pts = if binned { &self.binned } else { &self.by_degree };
        let mut s = format!("# {header}\n# degree value count\n");
        for p in pts {
            let _ = writeln!(s, "{} {} {}", fmt_f64(p.x), fmt_f64(p.y), p.count);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Capacity,
    Delay,
}

/// Per node `Σ_j w_ij k_j / Σ_j w_ij`, averaged by degree.
pub fn weighted_neighbor_degree(t: &Topology, weight: Weight) -> Result<DegreeCurve> {
    if !t.is_weighted() {
        return Err(Error::Unweighted);
    }
    let degrees = t.degrees();
    let values: Vec<Option<f64>> = (0..t.n_nodes())
        .map(|i| {
            let nb = t.neighbors(NodeId::from(i));
            if nb.is_empty() {
                return None;
            }
            let (mut num, mut den) = (0.0, 0.0);
            for &(j, li) in nb {
                let a = t.link(li).attrs.expect("weighted");
                let w = match weight {
                    Weight::Capacity => a.capacity,
                    Weight::Delay => a.prop_delay,
                };
                num += w * f64::from(degrees[j.index()]);
                den += w;
            }
            Some(num / den)
        })
        .collect();
    Ok(DegreeCurve::from_node_values(&degrees, &values))
}

const CHUNK: usize = 64;

/// Sources to run from: all nodes, or a seeded sample of `k` of them.
fn pick_sources(n: usize, sample: Option<(usize, u64)>) -> Vec<usize> {
    match sample {
        Some((k, s)) if k < n => {
            let mut v = index::sample(&mut seed::rng(s), n, k).into_vec();
            v.sort_unstable();
            v
        }
        _ => (0..n).collect(),
    }
}

/// Node betweenness counting every shortest path between unordered pairs
/// (endpoints excluded). With `sample = Some((k, seed))` only `k` sources
/// are used and the result is scaled by `n/k`.
pub fn betweenness(t: &Topology, sample: Option<(usize, u64)>) -> Result<Vec<f64>> {
    t.require_connected()?;
    let n = t.n_nodes();
    let sources = pick_sources(n, sample);
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut sigma = vec![0.0f64; n];
            let mut dist = vec![u32::MAX; n];
            let mut delta = vec![0.0f64; n];
            let mut order = Vec::with_capacity(n);
            let mut queue = VecDeque::with_capacity(n);
            for &s in chunk {
                sigma.fill(0.0);
                dist.fill(u32::MAX);
                delta.fill(0.0);
                order.clear();
                sigma[s] = 1.0;
                dist[s] = 0;
                queue.push_back(s);
                while let Some(v) = queue.pop_front() {
                    order.push(v);
                    for &(w, _) in t.neighbors(NodeId::from(v)) {
                        let w = w.index();
                        if dist[w] == u32::MAX {
                            dist[w] = dist[v] + 1;
                            queue.push_back(w);
                        }
                        if dist[w] == dist[v] + 1 {
                            sigma[w] += sigma[v];
                        }
                    }
                }
                for &w in order.iter().rev() {
                    for &(v, _) in t.neighbors(NodeId::from(w)) {
                        let v = v.index();
                        if dist[v] != u32::MAX && dist[v] + 1 == dist[w] {
                            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                        }
                    }
                    if w != s {
                        acc[w] += delta[w];
                    }
                }
            }
            acc
        })
        .collect();
    let scale = 0.5 * n as f64 / sources.len() as f64;
    let mut out = vec![0.0; n];
    for p in partials {
        for (o, x) in out.iter_mut().zip(p) {
            *o += x;
        }
    }
    for o in &mut out {
        *o *= scale;
    }
    Ok(out)
}

/// Betweenness averaged by degree.
pub fn betweenness_load(t: &Topology, sample: Option<(usize, u64)>) -> Result<DegreeCurve> {
    let b = betweenness(t, sample)?;
    let values: Vec<Option<f64>> = b.into_iter().map(Some).collect();
    Ok(DegreeCurve::from_node_values(&t.degrees(), &values))
}

/// Hop-count distribution of shortest paths.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceDistribution {
    /// `counts[h]` ordered source-target pairs at distance `h`; `counts[0] = 0`.
    pub counts: Vec<u64>,
    pub mean: f64,
    pub std: f64,
}

impl DistanceDistribution {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# distance distribution\n# hops probability count\n");
        for (h, (p, c)) in self.probabilities().iter().zip(&self.counts).enumerate().skip(1) {
            let _ = writeln!(s, "{h} {} {c}", fmt_f64(*p));
        }
        s
    }
}

fn bfs_distances(t: &Topology, s: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) {
    dist.fill(u32::MAX);
    dist[s] = 0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in t.neighbors(NodeId::from(v)) {
            let w = w.index();
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
}

pub fn distance_distribution(t: &Topology, sample: Option<(usize, u64)>) -> Result<DistanceDistribution> {
    t.require_connected()?;
    if t.n_nodes() < 2 {
        return Err(Error::Empty);
    }
    let n = t.n_nodes();
    let sources = pick_sources(n, sample);
    let partials: Vec<Vec<u64>> = sources
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut counts = Vec::new();
            let mut dist = vec![u32::MAX; n];
            let mut queue = VecDeque::new();
            for &s in chunk {
                bfs_distances(t, s, &mut dist, &mut queue);
                for &d in &dist {
                    let d = d as usize;
                    if d >= counts.len() {
                        counts.resize(d + 1, 0);
                    }
                    counts[d] += 1;
                }
            }
            counts
        })
        .collect();
    let mut counts: Vec<u64> = Vec::new();
    for p in partials {
        if p.len() > counts.len() {
            counts.resize(p.len(), 0);
        }
        for (c, x) in counts.iter_mut().zip(p) {
            *c += x;
        }
    }
    counts[0] = 0;
    let total = counts.iter().sum::<u64>() as f64;
    let mean = counts.iter().enumerate().map(|(h, &c)| h as f64 * c as f64).sum::<f64>() / total;
    let var = counts
        .iter()
        .enumerate()
        .map(|(h, &c)| (h as f64 - mean).powi(2) * c as f64)
        .sum::<f64>()
        / total;
    Ok(DistanceDistribution {
        counts,
        mean,
        std: var.sqrt(),
    })
}

/// Empirical CCDF of node degrees (nodes of degree 0 excluded).
pub fn degree_distribution(t: &Topology) -> Result<EmpiricalCcdf> {
    let ks: Vec<f64> = t.degrees().into_iter().filter(|&k| k > 0).map(f64::from).collect();
    empirical_ccdf(&ks)
}

/// `P(k)` from node degrees.
pub fn degree_pmf(t: &Topology) -> BTreeMap<u32, f64> {
    let mut m: BTreeMap<u32, f64> = BTreeMap::new();
    for k in t.degrees() {
        *m.entry(k).or_default() += 1.0;
    }
    let n = t.n_nodes() as f64;
    m.values_mut().for_each(|v| *v /= n);
    m
}

/// Fraction of links joining degrees `(k, k')`, keyed with `k ≤ k'`.
pub fn joint_degree_distribution(t: &Topology) -> BTreeMap<(u32, u32), f64> {
    let mut m: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for l in t.links() {
        let (a, b) = (t.degree(l.u) as u32, t.degree(l.v) as u32);
        *m.entry((a.min(b), a.max(b))).or_default() += 1.0;
    }
    let total = t.n_links() as f64;
    m.values_mut().for_each(|v| *v /= total);
    m
}

/// `P(k) = (k̄/k) Σ_k' p(k,k')` for degrees `k ≥ 1`, with `p` the
/// symmetrized joint distribution.
pub fn degree_pmf_from_joint(jdd: &BTreeMap<(u32, u32), f64>, mean_degree: f64) -> BTreeMap<u32, f64> {
    let mut sym: BTreeMap<u32, f64> = BTreeMap::new();
    for (&(a, b), &p) in jdd {
        *sym.entry(a).or_default() += p / 2.0;
        *sym.entry(b).or_default() += p / 2.0;
    }
    sym.into_iter()
        .map(|(k, s)| (k, mean_degree / f64::from(k) * s))
        .collect()
}

/// Pearson correlation of endpoint degrees over links, `None` when degrees
/// have zero variance.
pub fn assortativity(t: &Topology) -> Option<f64> {
    let (mut sx, mut sxx, mut sxy, mut m) = (0.0, 0.0, 0.0, 0.0);
    for l in t.links() {
        let a = t.degree(l.u) as f64;
        let b = t.degree(l.v) as f64;
        sx += a + b;
        sxx += a * a + b * b;
        sxy += 2.0 * a * b;
        m += 2.0;
    }
    if m == 0.0 {
        return None;
    }
    let mean = sx / m;
    let var = sxx / m - mean * mean;
    if var <= 1e-12 * mean * mean {
        return None;
    }
    Some((sxy / m - mean * mean) / var)
}

/// Triangles through each node.
pub fn node_triangles(t: &Topology) -> Vec<u64> {
    let mut tri = vec![0u64; t.n_nodes()];
    for l in t.links() {
        let c = common_neighbors(t, l.u, l.v);
        tri[l.u.index()] += c;
        tri[l.v.index()] += c;
    }
    // Each triangle is seen from both links at every corner.
    tri.iter_mut().for_each(|x| *x /= 2);
    tri
}

/// Size of the intersection of two sorted neighbor lists.
pub fn common_neighbors(t: &Topology, u: NodeId, v: NodeId) -> u64 {
    let (a, b) = (t.neighbors(u), t.neighbors(v));
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Local clustering per node; `None` for degree below 2.
pub fn local_clustering(t: &Topology) -> Vec<Option<f64>> {
    node_triangles(t)
        .into_iter()
        .enumerate()
        .map(|(i, tr)| {
            let k = t.degree(NodeId::from(i)) as f64;
            (k >= 2.0).then(|| 2.0 * tr as f64 / (k * (k - 1.0)))
        })
        .collect()
}

/// Mean local clustering over all nodes, counting degree below 2 as zero.
pub fn mean_clustering(t: &Topology) -> f64 {
    if t.n_nodes() == 0 {
        return 0.0;
    }
    local_clustering(t).iter().map(|c| c.unwrap_or(0.0)).sum::<f64>() / t.n_nodes() as f64
}

/// `c̄(k)` over nodes of degree at least 2.
pub fn clustering_by_degree(t: &Topology) -> DegreeCurve {
    DegreeCurve::from_node_values(&t.degrees(), &local_clustering(t))
}

/// Least-squares slope of `ln y` against `ln x`, `None` with fewer than two
/// usable points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Log-log slope over the binned points with `x ≥ min_degree` and at least
/// `min_count` nodes.
pub fn mid_range_slope(curve: &DegreeCurve, min_degree: f64, min_count: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = curve
        .binned
        .iter()
        .filter(|p| p.x >= min_degree && p.count >= min_count)
        .map(|p| (p.x, p.y))
        .collect();
    loglog_slope(&pts)
}

/// Scalar summary of a topology.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub n_nodes: usize,
    pub n_links: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub mean_hops: f64,
    pub std_hops: f64,
    pub assortativity: Option<f64>,
    pub mean_clustering: f64,
}

pub fn summary(t: &Topology, sample: Option<(usize, u64)>) -> Result<Summary> {
    let d = distance_distribution(t, sample)?;
    Ok(Summary {
        n_nodes: t.n_nodes(),
        n_links: t.n_links(),
        mean_degree: t.mean_degree(),
        max_degree: t.max_degree(),
        mean_hops: d.mean,
        std_hops: d.std,
        assortativity: assortativity(t),
        mean_clustering: mean_clustering(t),
    })
}

impl Summary {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n_nodes={}", self.n_nodes);
        let _ = writeln!(s, "n_links={}", self.n_links);
        let _ = writeln!(s, "mean_degree={}", fmt_f64(self.mean_degree));
        let _ = writeln!(s, "max_degree={}", self.max_degree);
        let _ = writeln!(s, "mean_hops={}", fmt_f64(self.mean_hops));
        let _ = writeln!(s, "std_hops={}", fmt_f64(self.std_hops));
        let _ = writeln!(
            s,
            "assortativity={}",
            self.assortativity.map_or_else(|| "undefined".into(), fmt_f64)
        );
        let _ = writeln!(s, "mean_clustering={}", fmt_f64(self.mean_clustering));
        s
    }
}
