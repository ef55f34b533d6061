//! Joint-degree-preserving rewiring toward a target `c̄(k)` curve.
//!
//! Two links A–B and C–D become A–D and C–B when `k_A = k_C` or
//! `k_B = k_D`, so every link keeps its degree pair and its attributes.
//! A swap is kept only if it strictly lowers the binned clustering error.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::metrics::{log2_bin, mean_clustering, DegreeCurve};
use crate::seed;
use crate::textio::fmt_f64;
use crate::topology::{Link, LinkAttrs, NodeId, Topology};

#[derive(Clone, Debug, PartialEq)]
pub struct RewireConfig {
    pub target: BTreeMap<u32, f64>,
    /// Proposal budget; `None` means 200 per link.
    pub max_steps: Option<usize>,
    /// Relative RMS error at which rewiring stops.
    pub tolerance: f64,
    pub seed: u64,
}

impl RewireConfig {
    pub fn new(target: BTreeMap<u32, f64>, seed: u64) -> Result<Self> {
        let cfg = RewireConfig {
            target,
            max_steps: None,
            tolerance: 0.05,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::config("rewire tolerance must be positive"));
        }
        if self.target.values().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::config("target clustering values must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Read a `degree value [count]` target file.
pub fn parse_target(text: &str) -> Result<BTreeMap<u32, f64>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let err = |m: &str| Error::Parse {
            line: i + 1,
            message: m.into(),
        };
        let mut cols = t.split_whitespace();
        let k: f64 = cols
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| err("bad degree"))?;
        let c: f64 = cols
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| err("bad clustering value"))?;
        if k < 1.0 || k.fract() != 0.0 {
            return Err(err("degree must be a positive integer"));
        }
        out.insert(k as u32, c);
    }
    Ok(out)
}

/// Per-degree target file from a clustering curve.
pub fn format_target(curve: &DegreeCurve) -> String {
    curve.to_text("clustering by degree", false)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewireReport {
    pub proposals: usize,
    pub accepted: usize,
    pub initial_objective: f64,
    pub final_objective: f64,
    pub initial_relative_error: f64,
    pub final_relative_error: f64,
    pub converged: bool,
    pub mean_clustering_before: f64,
    pub mean_clustering_after: f64,
}

impl RewireReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "rewire_proposals={}", self.proposals);
        let _ = writeln!(s, "rewire_accepted={}", self.accepted);
        let _ = writeln!(s, "rewire_initial_objective={}", fmt_f64(self.initial_objective));
        let _ = writeln!(s, "rewire_final_objective={}", fmt_f64(self.final_objective));
        let _ = writeln!(s, "rewire_initial_relative_error={}", fmt_f64(self.initial_relative_error));
        let _ = writeln!(s, "rewire_final_relative_error={}", fmt_f64(self.final_relative_error));
        let _ = writeln!(s, "rewire_converged={}", self.converged);
        let _ = writeln!(s, "mean_clustering_before={}", fmt_f64(self.mean_clustering_before));
        let _ = writeln!(s, "mean_clustering_after={}", fmt_f64(self.mean_clustering_after));
        s
    }
}

struct Bin {
    /// `(degree, node count)` for degrees in this bin.
    degrees: Vec<(u32, u64)>,
    nodes: u64,
    target: f64,
}

/// Incremental rewiring state.
pub struct Rewirer {
    n: usize,
    ends: Vec<[u32; 2]>,
    attrs: Vec<Option<LinkAttrs>>,
    adj: Vec<Vec<u32>>,
    degree: Vec<u32>,
    tri: Vec<i64>,
    tri_by_degree: HashMap<u32, i64>,
    bins: BTreeMap<u32, Bin>,
    objective: f64,
    norm: f64,
    labels: Vec<u64>,
    meta: BTreeMap<String, String>,
}

fn sorted_insert(v: &mut Vec<u32>, x: u32) {
    let i = v.binary_search(&x).unwrap_err();
    v.insert(i, x);
}

fn sorted_remove(v: &mut Vec<u32>, x: u32) {
    let i = v.binary_search(&x).expect("present");
    v.remove(i);
}

fn for_common(a: &[u32], b: &[u32], mut f: impl FnMut(u32)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

impl Rewirer {
    pub fn new(t: &Topology, target: &BTreeMap<u32, f64>) -> Self {
        let n = t.n_nodes();
        let ends: Vec<[u32; 2]> = t.links().iter().map(|l| [l.u.0, l.v.0]).collect();
        let attrs = t.links().iter().map(|l| l.attrs).collect();
        let adj: Vec<Vec<u32>> = (0..n)
            .map(|i| t.neighbors(NodeId::from(i)).iter().map(|&(j, _)| j.0).collect())
            .collect();
        let degree = t.degrees();
        let tri: Vec<i64> = crate::metrics::node_triangles(t)
            .into_iter()
            .map(|x| x as i64)
            .collect();
        let mut tri_by_degree: HashMap<u32, i64> = HashMap::new();
        let mut count_by_degree: BTreeMap<u32, u64> = BTreeMap::new();
        for i in 0..n {
            *tri_by_degree.entry(degree[i]).or_default() += tri[i];
            *count_by_degree.entry(degree[i]).or_default() += 1;
        }

        let mut bins: BTreeMap<u32, Bin> = BTreeMap::new();
        for (&k, &c) in count_by_degree.range(2..) {
            let b = bins.entry(log2_bin(k)).or_insert(Bin {
                degrees: Vec::new(),
                nodes: 0,
                target: f64::NAN,
            });
            b.degrees.push((k, c));
            b.nodes += c;
        }
        for (&b, bin) in bins.iter_mut() {
            let (mut s, mut w) = (0.0, 0.0);
            for &(k, c) in &bin.degrees {
                if let Some(&v) = target.get(&k) {
                    s += v * c as f64;
                    w += c as f64;
                }
            }
            if w == 0.0 {
                let vals: Vec<f64> = target
                    .iter()
                    .filter(|(&k, _)| k >= 2 && log2_bin(k) == b)
                    .map(|(_, &v)| v)
                    .collect();
                if !vals.is_empty() {
                    s = vals.iter().sum();
                    w = vals.len() as f64;
                }
            }
            if w > 0.0 {
                bin.target = s / w;
            }
        }
        bins.retain(|_, b| !b.target.is_nan());
        let norm: f64 = bins.values().map(|b| b.nodes as f64 * b.target * b.target).sum();

        let mut r = Rewirer {
            n,
            ends,
            attrs,
            adj,
            degree,
            tri,
            tri_by_degree,
            bins,
            objective: 0.0,
            norm,
            labels: t.labels().to_vec(),
            meta: t.meta().clone(),
        };
        r.objective = r.bins.keys().map(|&b| r.bin_term(b, &HashMap::new())).sum();
        r
    }

    /// Contribution of bin `b` with per-degree triangle changes applied.
    fn bin_term(&self, b: u32, delta: &HashMap<u32, i64>) -> f64 {
        let bin = &self.bins[&b];
        let mut s = 0.0;
        for &(k, _) in &bin.degrees {
            let t = self.tri_by_degree.get(&k).copied().unwrap_or(0) + delta.get(&k).copied().unwrap_or(0);
            let kf = f64::from(k);
            s += 2.0 * t as f64 / (kf * (kf - 1.0));
        }
        let c = s / bin.nodes as f64;
        bin.nodes as f64 * (c - bin.target).powi(2)
    }

    /// Node-weighted squared error between binned and target `c̄(k)`.
    pub fn objective(&self) -> f64 {
        self.objective
    }

    /// `sqrt(objective / Σ n_b target_b²)`.
    pub fn relative_error(&self) -> f64 {
        if self.norm > 0.0 {
            (self.objective / self.norm).sqrt()
        } else if self.objective == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn n_links(&self) -> usize {
        self.ends.len()
    }

    fn remove_edge(&mut self, u: u32, v: u32, dt: &mut HashMap<u32, i64>) {
        let mut c = 0;
        let (a, b) = (&self.adj[u as usize], &self.adj[v as usize]);
        for_common(a, b, |w| {
            *dt.entry(w).or_default() -= 1;
            c += 1;
        });
        *dt.entry(u).or_default() -= c;
        *dt.entry(v).or_default() -= c;
        sorted_remove(&mut self.adj[u as usize], v);
        sorted_remove(&mut self.adj[v as usize], u);
    }

    fn add_edge(&mut self, u: u32, v: u32, dt: &mut HashMap<u32, i64>) {
        let mut c = 0;
        let (a, b) = (&self.adj[u as usize], &self.adj[v as usize]);
        for_common(a, b, |w| {
            *dt.entry(w).or_default() += 1;
            c += 1;
        });
        *dt.entry(u).or_default() += c;
        *dt.entry(v).or_default() += c;
        sorted_insert(&mut self.adj[u as usize], v);
        sorted_insert(&mut self.adj[v as usize], u);
    }

    fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// One proposal; returns whether the swap was applied.
    pub fn step(&mut self, rng: &mut seed::Rng) -> bool {
        let l = self.ends.len();
        if l < 2 {
            return false;
        }
        let i = rng.random_range(0..l);
        let j = rng.random_range(0..l);
        if i == j {
            return false;
        }
        let si = rng.random_range(0..2);
        let sj = rng.random_range(0..2);
        let (a, b) = (self.ends[i][si], self.ends[i][1 - si]);
        let (c, d) = (self.ends[j][sj], self.ends[j][1 - sj]);
        let degree = &self.degree;
        let deg = |x: u32| degree[x as usize];
        let same_first = deg(a) == deg(c);
        if !same_first && deg(b) != deg(d) {
            return false;
        }
        if a == d || c == b || self.has_edge(a, d) || self.has_edge(c, b) {
            return false;
        }

        let mut dt: HashMap<u32, i64> = HashMap::new();
        self.remove_edge(a, b, &mut dt);
        self.remove_edge(c, d, &mut dt);
        self.add_edge(a, d, &mut dt);
        self.add_edge(c, b, &mut dt);

        let mut by_degree: HashMap<u32, i64> = HashMap::new();
        for (&node, &x) in &dt {
            if x != 0 {
                *by_degree.entry(self.degree[node as usize]).or_default() += x;
            }
        }
        by_degree.retain(|_, x| *x != 0);
        let mut touched: Vec<u32> = by_degree
            .keys()
            .filter(|&&k| k >= 2)
            .map(|&k| log2_bin(k))
            .filter(|b| self.bins.contains_key(b))
            .collect();
        touched.sort_unstable();
        touched.dedup();
        let empty = HashMap::new();
        let old: f64 = touched.iter().map(|&b| self.bin_term(b, &empty)).sum();
        let new: f64 = touched.iter().map(|&b| self.bin_term(b, &by_degree)).sum();

        if touched.is_empty() || new >= old {
            // Revert.
            let mut scratch = HashMap::new();
            self.remove_edge(a, d, &mut scratch);
            self.remove_edge(c, b, &mut scratch);
            self.add_edge(a, b, &mut scratch);
            self.add_edge(c, d, &mut scratch);
            return false;
        }

        for (&node, &x) in &dt {
            self.tri[node as usize] += x;
        }
        for (&k, &x) in &by_degree {
            *self.tri_by_degree.entry(k).or_default() += x;
        }
        self.objective = self.bins.keys().map(|&b| self.bin_term(b, &empty)).sum();
        if same_first {
            self.ends[i] = [c, b];
            self.ends[j] = [a, d];
        } else {
            self.ends[i] = [a, d];
            self.ends[j] = [c, b];
        }
        true
    }

    pub fn topology(&self) -> Result<Topology> {
        let links = self
            .ends
            .iter()
            .zip(&self.attrs)
            .map(|(e, &attrs)| Link {
                u: NodeId(e[0].min(e[1])),
                v: NodeId(e[0].max(e[1])),
                attrs,
            })
            .collect();
        debug_assert_eq!(self.labels.len(), self.n);
        Ok(Topology::with_labels(self.labels.clone(), links)?.with_meta_map(self.meta.clone()))
    }
}

/// Apply a single proposal to `t`.
pub fn clustering_rewire_step(t: &mut Topology, cfg: &RewireConfig, rng: &mut seed::Rng) -> Result<bool> {
    let mut r = Rewirer::new(t, &cfg.target);
    let accepted = r.step(rng);
    if accepted {
        *t = r.topology()?;
    }
    Ok(accepted)
}

/// Rewire until the relative error reaches `cfg.tolerance` or the proposal
/// budget is spent.
pub fn rewire_to_target(t: &Topology, cfg: &RewireConfig) -> Result<(Topology, RewireReport)> {
    cfg.validate()?;
    let mut r = Rewirer::new(t, &cfg.target);
    let mut rng = seed::rng(cfg.seed);
    let budget = cfg.max_steps.unwrap_or(200 * t.n_links());
    let initial_objective = r.objective();
    let initial_relative_error = r.relative_error();
    let (mut proposals, mut accepted) = (0, 0);
    while r.relative_error() > cfg.tolerance && proposals < budget {
        proposals += 1;
        if r.step(&mut rng) {
            accepted += 1;
        }
    }
    let out = r.topology()?;
    let report = RewireReport {
        proposals,
        accepted,
        initial_objective,
        final_objective: r.objective(),
        initial_relative_error,
        final_relative_error: r.relative_error(),
        converged: r.relative_error() <= cfg.tolerance,
        mean_clustering_before: mean_clustering(t),
        mean_clustering_after: mean_clustering(&out),
    };
    Ok((out, report))
}
