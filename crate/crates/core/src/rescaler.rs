//! Replica construction by rank matching.
//!
//! Marginals of degree, capacity, and delay are fitted and resampled at the
//! target size; links sampled from the original network then carry the
//! correlation structure over: each component of a reference link vector is
//! replaced by the target value holding the same rank. Finally degree labels
//! are bound to concrete nodes and stub-matching collisions are repaired.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::distfit::{empirical_ccdf, fit_smoothing_spline, FitConfig, SmoothedDist, Support};
use crate::error::{Error, Result};
use crate::seed;
use crate::textio::fmt_f64;
use crate::topology::{giant_component, link_vectors, Link, LinkAttrs, LinkVector, NodeId, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkSampling {
    WithReplacement,
    /// Without replacement whenever the target has no more links than the
    /// original; with replacement otherwise.
    WithoutReplacementIfPossible,
}

impl LinkSampling {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkSampling::WithReplacement => "with_replacement",
            LinkSampling::WithoutReplacementIfPossible => "without_replacement_if_possible",
        }
    }
}

impl std::str::FromStr for LinkSampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "with_replacement" => Ok(LinkSampling::WithReplacement),
            "without_replacement_if_possible" | "without_replacement" => {
                Ok(LinkSampling::WithoutReplacementIfPossible)
            }
            _ => Err(Error::config(format!("unknown link sampling mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RescaleSpec {
    pub n_target: usize,
    pub seed: u64,
    pub fit: FitConfig,
    pub link_sampling: LinkSampling,
}

impl RescaleSpec {
    pub fn new(n_target: usize, seed: u64) -> Self {
        RescaleSpec {
            n_target,
            seed,
            fit: FitConfig::default(),
            link_sampling: LinkSampling::WithoutReplacementIfPossible,
        }
    }
}

/// The three fitted marginals of a weighted network.
#[derive(Clone, Debug)]
pub struct Marginals {
    pub degrees: SmoothedDist,
    pub capacities: SmoothedDist,
    pub delays: SmoothedDist,
}

pub fn fit_marginals(t: &Topology, cfg: &FitConfig) -> Result<Marginals> {
    let vectors = link_vectors(t)?;
    if vectors.is_empty() {
        return Err(Error::Empty);
    }
    let degrees: Vec<f64> = t
        .degrees()
        .into_iter()
        .filter(|&k| k > 0)
        .map(f64::from)
        .collect();
    let caps: Vec<f64> = vectors.iter().map(|v| v.capacity).collect();
    let delays: Vec<f64> = vectors.iter().map(|v| v.delay).collect();
    let fit = |vals: &[f64], support: Support| -> Result<SmoothedDist> {
        Ok(fit_smoothing_spline(&empirical_ccdf(vals)?, cfg, support))
    };
    Ok(Marginals {
        degrees: fit(&degrees, Support::Integer)?,
        capacities: fit(&caps, Support::infer(&caps))?,
        delays: fit(&delays, Support::infer(&delays))?,
    })
}

/// Sorted target lists: stub labels, capacities, and delays.
#[derive(Clone, Debug, PartialEq)]
pub struct RankLists {
    stub_labels: Vec<u32>,
    capacities: Vec<f64>,
    delays: Vec<f64>,
}

impl RankLists {
    /// One stub label `k` per stub of every node of target degree `k`.
    pub fn new(degrees: &[u32], mut capacities: Vec<f64>, mut delays: Vec<f64>) -> Result<Self> {
        let mut stub_labels: Vec<u32> = degrees
            .iter()
            .flat_map(|&k| std::iter::repeat_n(k, k as usize))
            .collect();
        if stub_labels.len() != 2 * capacities.len() || capacities.len() != delays.len() {
            return Err(Error::LengthMismatch(format!(
                "{} stubs, {} capacities, {} delays",
                stub_labels.len(),
                capacities.len(),
                delays.len()
            )));
        }
        stub_labels.sort_unstable();
        capacities.sort_by(f64::total_cmp);
        delays.sort_by(f64::total_cmp);
        Ok(RankLists {
            stub_labels,
            capacities,
            delays,
        })
    }

    pub fn stub_labels(&self) -> &[u32] {
        &self.stub_labels
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    pub fn delays(&self) -> &[f64] {
        &self.delays
    }
}

/// Sampled target degree sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeSample {
    pub degrees: Vec<u32>,
    pub l_target: usize,
    /// Whether resampling failed to make the degree sum even and one degree
    /// was incremented instead.
    pub parity_bumped: bool,
}

const PARITY_RESAMPLES: usize = 100;

pub fn sample_degree_sequence(s_k: &SmoothedDist, n_target: usize, seed: u64) -> DegreeSample {
    let mut rng = seed::rng(seed);
    let draw = |rng: &mut seed::Rng| (s_k.sample_with(rng).round() as u32).max(1);
    let mut degrees: Vec<u32> = (0..n_target).map(|_| draw(&mut rng)).collect();
    let mut sum: u64 = degrees.iter().map(|&k| u64::from(k)).sum();
    let mut parity_bumped = false;
    if sum % 2 == 1 {
        for _ in 0..PARITY_RESAMPLES {
            let i = rng.random_range(0..n_target);
            let k = draw(&mut rng);
            sum = sum - u64::from(degrees[i]) + u64::from(k);
            degrees[i] = k;
            if sum % 2 == 0 {
                break;
            }
        }
        if sum % 2 == 1 {
            let i = rng.random_range(0..n_target);
            degrees[i] += 1;
            sum += 1;
            parity_bumped = true;
        }
    }
    DegreeSample {
        degrees,
        l_target: (sum / 2) as usize,
        parity_bumped,
    }
}

pub fn sample_link_attributes(
    s_c: &SmoothedDist,
    s_p: &SmoothedDist,
    l_target: usize,
    seed: u64,
) -> (Vec<f64>, Vec<f64>) {
    (
        s_c.sample(l_target, seed::derive(seed, "capacity")),
        s_p.sample(l_target, seed::derive(seed, "delay")),
    )
}

/// `l_target` link vectors drawn uniformly from `t`, in random order.
pub fn sample_reference_links(
    t: &Topology,
    l_target: usize,
    mode: LinkSampling,
    seed: u64,
) -> Result<Vec<LinkVector>> {
    let all = link_vectors(t)?;
    if all.is_empty() {
        return Err(Error::Empty);
    }
    let mut rng = seed::rng(seed);
    let out = if mode == LinkSampling::WithoutReplacementIfPossible && l_target <= all.len() {
        let mut idx = rand::seq::index::sample(&mut rng, all.len(), l_target).into_vec();
        idx.shuffle(&mut rng);
        idx.into_iter().map(|i| all[i]).collect()
    } else {
        (0..l_target)
            .map(|_| all[rng.random_range(0..all.len())])
            .collect()
    };
    Ok(out)
}

/// Distinct rank positions: position of each element in the stably sorted
/// list, so equal values take consecutive positions in order of appearance.
fn rank_positions<T: Copy>(values: &[T], cmp: impl Fn(&T, &T) -> std::cmp::Ordering) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| cmp(&values[a], &values[b]));
    let mut pos = vec![0; values.len()];
    for (rank, i) in order.into_iter().enumerate() {
        pos[i] = rank;
    }
    pos
}

/// Replace every component of every reference vector with the target value
/// at the same rank.
pub fn rank_match(refs: &[LinkVector], ranks: &RankLists) -> Result<Vec<LinkVector>> {
    if refs.len() != ranks.capacities.len() || 2 * refs.len() != ranks.stub_labels.len() {
        return Err(Error::LengthMismatch(format!(
            "{} reference links against {} target links",
            refs.len(),
            ranks.capacities.len()
        )));
    }
    let stubs: Vec<u32> = refs.iter().flat_map(|v| [v.k, v.k2]).collect();
    let caps: Vec<f64> = refs.iter().map(|v| v.capacity).collect();
    let delays: Vec<f64> = refs.iter().map(|v| v.delay).collect();
    let stub_pos = rank_positions(&stubs, Ord::cmp);
    let cap_pos = rank_positions(&caps, f64::total_cmp);
    let delay_pos = rank_positions(&delays, f64::total_cmp);
    Ok((0..refs.len())
        .map(|i| {
            LinkVector::new(
                ranks.stub_labels[stub_pos[2 * i]],
                ranks.stub_labels[stub_pos[2 * i + 1]],
                ranks.capacities[cap_pos[i]],
                ranks.delays[delay_pos[i]],
            )
        })
        .collect())
}

/// Outcome of binding degree labels to nodes.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub topology: Topology,
    /// Self-loops and parallel links after stub binding, before repair.
    pub collisions: usize,
    pub repair_swaps: usize,
    /// Links discarded because repair gave up on them.
    pub dropped: usize,
}

/// Repair attempts spent on one colliding link before it is given up.
const PER_LINK_ATTEMPTS: usize = 1000;

fn pair_key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Bind each degree label to a node of that target degree and repair
/// collisions with degree-preserving endpoint swaps.
pub fn assemble_network(vectors: &[LinkVector], degrees: &[u32], seed: u64) -> Result<Assembly> {
    let mut have: BTreeMap<u32, u64> = BTreeMap::new();
    for v in vectors {
        *have.entry(v.k).or_default() += 1;
        *have.entry(v.k2).or_default() += 1;
    }
    let mut want: BTreeMap<u32, u64> = BTreeMap::new();
    for &k in degrees.iter().filter(|&&k| k > 0) {
        *want.entry(k).or_default() += u64::from(k);
    }
    if have != want {
        return Err(Error::InfeasibleStubs(
            "degree labels on links differ from the stubs of the degree sequence".into(),
        ));
    }

    let mut rng = seed::rng(seed);
    let mut queues: BTreeMap<u32, (Vec<u32>, usize)> = BTreeMap::new();
    for (i, &k) in degrees.iter().enumerate() {
        let q = &mut queues.entry(k).or_default().0;
        q.extend(std::iter::repeat_n(i as u32, k as usize));
    }
    for (q, _) in queues.values_mut() {
        q.shuffle(&mut rng);
    }
    let mut take = |k: u32| {
        let (q, cursor) = queues.get_mut(&k).expect("label checked above");
        let node = q[*cursor];
        *cursor += 1;
        node
    };
    let mut ends: Vec<[u32; 2]> = vectors.iter().map(|v| [take(v.k), take(v.k2)]).collect();

    let mut count: HashMap<(u32, u32), u32> = HashMap::with_capacity(ends.len());
    for e in &ends {
        *count.entry(pair_key(e[0], e[1])).or_default() += 1;
    }
    // Stub positions (link, side) grouped by the degree of the node there.
    let mut classes: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (i, e) in ends.iter().enumerate() {
        for (s, &node) in e.iter().enumerate() {
            classes.entry(degrees[node as usize]).or_default().push((i, s));
        }
    }
    let is_bad = |ends: &[[u32; 2]], count: &HashMap<(u32, u32), u32>, i: usize| {
        let [a, b] = ends[i];
        a == b || count[&pair_key(a, b)] > 1
    };
    let mut seen = std::collections::HashSet::new();
    let mut worklist: Vec<usize> = Vec::new();
    for (i, e) in ends.iter().enumerate() {
        if e[0] == e[1] || !seen.insert(pair_key(e[0], e[1])) {
            worklist.push(i);
        }
    }
    worklist.reverse();
    let collisions = worklist.len();

    let limit = 100 * vectors.len();
    let mut attempts = 0;
    let mut on_current = 0;
    let mut swaps = 0;
    while let Some(&b) = worklist.last() {
        if !is_bad(&ends, &count, b) || on_current >= PER_LINK_ATTEMPTS {
            worklist.pop();
            on_current = 0;
            continue;
        }
        if attempts >= limit {
            break;
        }
        attempts += 1;
        on_current += 1;
        let s = rng.random_range(0..2);
        let (a, x) = (ends[b][s], ends[b][1 - s]);
        let class = &classes[&degrees[a as usize]];
        let (j, sj) = class[rng.random_range(0..class.len())];
        if j == b {
            continue;
        }
        let (c, y) = (ends[j][sj], ends[j][1 - sj]);
        if c == x || a == y {
            continue;
        }
        let (new1, new2) = (pair_key(c, x), pair_key(a, y));
        if new1 == new2 {
            continue;
        }
        let (old1, old2) = (pair_key(a, x), pair_key(c, y));
        let after = |k: (u32, u32)| {
            count.get(&k).copied().unwrap_or(0) - u32::from(k == old1) - u32::from(k == old2)
        };
        if after(new1) > 0 || after(new2) > 0 {
            continue;
        }
        for k in [old1, old2] {
            *count.get_mut(&k).unwrap() -= 1;
        }
        for k in [new1, new2] {
            *count.entry(k).or_default() += 1;
        }
        ends[b][s] = c;
        ends[j][sj] = a;
        swaps += 1;
    }

    let mut kept = std::collections::HashSet::with_capacity(ends.len());
    let mut links = Vec::with_capacity(ends.len());
    for (e, v) in ends.iter().zip(vectors) {
        if e[0] != e[1] && kept.insert(pair_key(e[0], e[1])) {
            links.push(Link {
                u: NodeId(e[0]),
                v: NodeId(e[1]),
                attrs: Some(LinkAttrs::new(v.capacity, v.delay)),
            });
        }
    }
    let dropped = vectors.len() - links.len();
    Ok(Assembly {
        topology: Topology::new(degrees.len(), links)?,
        collisions,
        repair_swaps: swaps,
        dropped,
    })
}

/// Provenance of one replica, written as a `key=value` sidecar.
#[derive(Clone, Debug, PartialEq)]
pub struct RescaleReport {
    pub n_original: usize,
    pub n_target: usize,
    pub alpha: f64,
    pub seed: u64,
    pub l_target: usize,
    pub parity_bumped: bool,
    pub collisions: usize,
    pub repair_swaps: usize,
    pub dropped_links: usize,
    pub gcc_retention: f64,
    pub n_replica: usize,
    pub l_replica: usize,
    pub spar_degree: Option<f64>,
    pub spar_capacity: Option<f64>,
    pub spar_delay: Option<f64>,
    pub link_sampling: LinkSampling,
}

impl RescaleReport {
    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), fmt_f64);
        let mut s = String::from("# netrescale replica metadata\n");
        let _ = writeln!(s, "alpha={}", fmt_f64(self.alpha));
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "n_original={}", self.n_original);
        let _ = writeln!(s, "n_target={}", self.n_target);
        let _ = writeln!(s, "l_target={}", self.l_target);
        let _ = writeln!(s, "parity_bumped={}", self.parity_bumped);
        let _ = writeln!(s, "collisions={}", self.collisions);
        let _ = writeln!(s, "repair_swaps={}", self.repair_swaps);
        let _ = writeln!(s, "dropped_links={}", self.dropped_links);
        let _ = writeln!(s, "gcc_retention={}", fmt_f64(self.gcc_retention));
        let _ = writeln!(s, "n_replica={}", self.n_replica);
        let _ = writeln!(s, "l_replica={}", self.l_replica);
        let _ = writeln!(s, "link_sampling={}", self.link_sampling.as_str());
        let _ = writeln!(s, "spar_degree={}", opt(self.spar_degree));
        let _ = writeln!(s, "spar_capacity={}", opt(self.spar_capacity));
        let _ = writeln!(s, "spar_delay={}", opt(self.spar_delay));
        s
    }
}

#[derive(Clone, Debug)]
pub struct Rescaled {
    pub topology: Topology,
    pub report: RescaleReport,
    pub marginals: Marginals,
}

/// Build a replica of `t` with `spec.n_target` nodes; the result is the
/// giant component of the assembled network.
pub fn rescale(t: &Topology, spec: &RescaleSpec) -> Result<Rescaled> {
    if spec.n_target < 2 {
        return Err(Error::config("n_target must be at least 2"));
    }
    if t.n_nodes() == 0 {
        return Err(Error::Empty);
    }
    let marginals = fit_marginals(t, &spec.fit)?;
    rescale_with_marginals(t, spec, marginals)
}

/// As [`rescale`], reusing marginals already fitted to `t`.
pub fn rescale_with_marginals(t: &Topology, spec: &RescaleSpec, marginals: Marginals) -> Result<Rescaled> {
    let seed = spec.seed;
    let ds = sample_degree_sequence(&marginals.degrees, spec.n_target, seed::derive(seed, "degrees"));
    let (caps, delays) = sample_link_attributes(
        &marginals.capacities,
        &marginals.delays,
        ds.l_target,
        seed::derive(seed, "attributes"),
    );
    let ranks = RankLists::new(&ds.degrees, caps, delays)?;
    let refs = sample_reference_links(
        t,
        ds.l_target,
        spec.link_sampling,
        seed::derive(seed, "reference-links"),
    )?;
    let vectors = rank_match(&refs, &ranks)?;
    let asm = assemble_network(&vectors, &ds.degrees, seed::derive(seed, "assembly"))?;
    let gcc = giant_component(&asm.topology);
    let alpha = spec.n_target as f64 / t.n_nodes() as f64;
    let report = RescaleReport {
        n_original: t.n_nodes(),
        n_target: spec.n_target,
        alpha,
        seed,
        l_target: ds.l_target,
        parity_bumped: ds.parity_bumped,
        collisions: asm.collisions,
        repair_swaps: asm.repair_swaps,
        dropped_links: asm.dropped,
        gcc_retention: gcc.retained_fraction(),
        n_replica: gcc.topology.n_nodes(),
        l_replica: gcc.topology.n_links(),
        spar_degree: marginals.degrees.spar(),
        spar_capacity: marginals.capacities.spar(),
        spar_delay: marginals.delays.spar(),
        link_sampling: spec.link_sampling,
    };
    let topology = gcc
        .topology
        .with_meta("rescale_alpha", fmt_f64(alpha))
        .with_meta("rescale_seed", seed.to_string())
        .with_meta("dropped_links", asm.dropped.to_string());
    Ok(Rescaled {
        topology,
        report,
        marginals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lv(k: u32, k2: u32, c: f64, p: f64) -> LinkVector {
        LinkVector::new(k, k2, c, p)
    }

    #[test]
    fn degree_sequence_point_mass_two() {
        let ds = sample_degree_sequence(&SmoothedDist::point_mass(2.0), 4, 1);
        assert_eq!(ds.degrees, vec![2, 2, 2, 2]);
        assert_eq!(ds.l_target, 4);
        assert!(!ds.parity_bumped);
    }

    #[test]
    fn degree_sequence_parity_fallback() {
        let ds = sample_degree_sequence(&SmoothedDist::point_mass(3.0), 3, 1);
        assert_eq!(ds.degrees.iter().sum::<u32>(), 10);
        assert_eq!(ds.l_target, 5);
        assert!(ds.parity_bumped);
    }

    #[test]
    fn link_attributes_point_masses() {
        let (c, p) = sample_link_attributes(&SmoothedDist::point_mass(10.0), &SmoothedDist::point_mass(5.0), 3, 4);
        assert_eq!(c, vec![10.0; 3]);
        assert_eq!(p, vec![5.0; 3]);
    }

    #[test]
    fn reference_links_identity_and_forced_replacement() {
        let t = Topology::from_weighted_edges(4, &[(0, 1, 1.0, 2.0), (1, 2, 3.0, 4.0), (2, 3, 5.0, 6.0), (1, 3, 7.0, 8.0)])
            .unwrap();
        let mut got = sample_reference_links(&t, 4, LinkSampling::WithoutReplacementIfPossible, 9).unwrap();
        let mut want = link_vectors(&t).unwrap();
        let key = |v: &LinkVector| (v.k, v.k2, v.capacity.to_bits(), v.delay.to_bits());
        got.sort_by_key(key);
        want.sort_by_key(key);
        assert_eq!(got, want);

        let tri = Topology::from_weighted_edges(3, &[(0, 1, 10.0, 5.0), (1, 2, 10.0, 5.0), (0, 2, 10.0, 5.0)]).unwrap();
        let five = sample_reference_links(&tri, 5, LinkSampling::WithoutReplacementIfPossible, 1).unwrap();
        assert_eq!(five, vec![lv(2, 2, 10.0, 5.0); 5]);
    }

    #[test]
    fn rank_match_identity() {
        let refs = vec![lv(1, 2, 3.0, 9.0), lv(2, 3, 1.0, 8.0), lv(1, 3, 2.0, 7.0)];
        let ranks = RankLists {
            stub_labels: vec![1, 1, 2, 2, 3, 3],
            capacities: vec![1.0, 2.0, 3.0],
            delays: vec![7.0, 8.0, 9.0],
        };
        assert_eq!(rank_match(&refs, &ranks).unwrap(), refs);
    }

    #[test]
    fn rank_match_order_preserving_labels() {
        // Reference degrees [1,2,2,3] against target labels [10,20,20,30].
        let refs = vec![lv(1, 2, 1.0, 1.0), lv(2, 3, 2.0, 2.0)];
        let ranks = RankLists {
            stub_labels: vec![10, 20, 20, 30],
            capacities: vec![5.0, 6.0],
            delays: vec![7.0, 8.0],
        };
        let out = rank_match(&refs, &ranks).unwrap();
        assert_eq!(out, vec![lv(10, 20, 5.0, 7.0), lv(20, 30, 6.0, 8.0)]);
    }

    #[test]
    fn rank_match_length_mismatch() {
        let ranks = RankLists::new(&[1, 1], vec![1.0], vec![1.0]).unwrap();
        assert!(matches!(rank_match(&[], &ranks), Err(Error::LengthMismatch(_))));
        assert!(RankLists::new(&[1, 1], vec![1.0, 2.0], vec![1.0]).is_err());
    }

    #[test]
    fn assemble_triangle_and_forced_matching() {
        let tri = vec![lv(2, 2, 1.0, 1.0); 3];
        let a = assemble_network(&tri, &[2, 2, 2], 3).unwrap();
        assert_eq!(a.topology.n_links(), 3);
        assert_eq!(a.dropped, 0);
        assert_eq!(a.topology.degrees(), vec![2, 2, 2]);

        let pairs = vec![lv(1, 1, 1.0, 1.0); 2];
        let b = assemble_network(&pairs, &[1, 1, 1, 1], 5).unwrap();
        assert_eq!(b.topology.n_links(), 2);
        assert_eq!(b.topology.degrees(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn assemble_rejects_label_mismatch() {
        let v = vec![lv(1, 2, 1.0, 1.0)];
        assert!(matches!(assemble_network(&v, &[1, 1], 0), Err(Error::InfeasibleStubs(_))));
    }

    #[test]
    fn assemble_repairs_collisions_and_keeps_vectors() {
        // Two degree-3 nodes and six degree-1 nodes; labels force many
        // parallel-link candidates between the two hubs.
        let vectors = vec![
            lv(3, 3, 1.0, 1.0),
            lv(3, 3, 2.0, 2.0),
            lv(3, 3, 3.0, 3.0),
            lv(1, 1, 4.0, 4.0),
            lv(1, 1, 5.0, 5.0),
            lv(1, 1, 6.0, 6.0),
        ];
        let degrees = [3, 3, 1, 1, 1, 1, 1, 1];
        for seed in 0..20 {
            let a = assemble_network(&vectors, &degrees, seed).unwrap();
            let t = &a.topology;
            // Every kept link still joins nodes whose target degrees match its labels.
            let vs = link_vectors(t).unwrap();
            if a.dropped == 0 {
                assert_eq!(t.degrees(), degrees.to_vec());
                let mut got: Vec<(u32, u32, u64)> = vs.iter().map(|v| (v.k, v.k2, v.capacity.to_bits())).collect();
                got.sort_unstable();
                let mut want: Vec<(u32, u32, u64)> = vectors.iter().map(|v| (v.k, v.k2, v.capacity.to_bits())).collect();
                want.sort_unstable();
                assert_eq!(got, want);
            }
        }
    }

    proptest! {
        #[test]
        fn rank_match_is_monotone_per_component(
            raw in proptest::collection::vec((1u32..20, 1u32..20, 0.1f64..100.0, 0.1f64..100.0), 1..60),
            seed in any::<u64>(),
        ) {
            let refs: Vec<LinkVector> = raw.iter().map(|&(a, b, c, p)| LinkVector::new(a, b, c, p)).collect();
            let l = refs.len();
            let mut rng = seed::rng(seed);
            // Arbitrary target degree sequence with 2l stubs.
            let mut degrees = Vec::new();
            let mut left = 2 * l as u32;
            while left > 0 {
                let k = rng.random_range(1..=left.min(7));
                degrees.push(k);
                left -= k;
            }
            let caps: Vec<f64> = (0..l).map(|_| rng.random::<f64>() * 50.0).collect();
            let delays: Vec<f64> = (0..l).map(|_| rng.random::<f64>() * 50.0).collect();
            let ranks = RankLists::new(&degrees, caps, delays).unwrap();
            let out = rank_match(&refs, &ranks).unwrap();

            // Stub labels used are exactly the target multiset.
            let mut used: Vec<u32> = out.iter().flat_map(|v| [v.k, v.k2]).collect();
            used.sort_unstable();
            prop_assert_eq!(&used[..], ranks.stub_labels());

            let mut order: Vec<usize> = (0..l).collect();
            order.sort_by(|&a, &b| refs[a].capacity.total_cmp(&refs[b].capacity));
            prop_assert!(order.windows(2).all(|w| out[w[0]].capacity <= out[w[1]].capacity));
            order.sort_by(|&a, &b| refs[a].delay.total_cmp(&refs[b].delay));
            prop_assert!(order.windows(2).all(|w| out[w[0]].delay <= out[w[1]].delay));
            for a in 0..l {
                for b in 0..l {
                    if refs[a].k2 < refs[b].k {
                        prop_assert!(out[a].k2 <= out[b].k);
                    }
                }
            }
        }

        #[test]
        fn repair_never_changes_degrees_of_kept_graph(seed in any::<u64>()) {
            let mut rng = seed::rng(seed);
            let degrees: Vec<u32> = (0..40).map(|_| rng.random_range(1..8)).collect();
            let mut stubs: Vec<u32> = degrees.iter().flat_map(|&k| std::iter::repeat_n(k, k as usize)).collect();
            if stubs.len() % 2 == 1 {
                return Ok(());
            }
            stubs.shuffle(&mut rng);
            let vectors: Vec<LinkVector> = stubs.chunks(2).map(|p| LinkVector::new(p[0], p[1], 1.0, 1.0)).collect();
            let a = assemble_network(&vectors, &degrees, seed).unwrap();
            let got = a.topology.degrees();
            if a.dropped == 0 {
                prop_assert_eq!(got, degrees);
            } else {
                prop_assert!(got.iter().zip(&degrees).all(|(g, d)| g <= d));
            }
        }
    }
}
