#![allow(dead_code)]

use std::collections::VecDeque;

use netrescale::analysis::{self, compare_samples, MetricComparison};
use netrescale::metrics::{self, DegreeCurve, Weight};
use netrescale::rescaler::{self, RescaleSpec, Rescaled};
use netrescale::scenario::{self, AlphaTransform, FlowModel, ScenarioId, TrafficConfig};
use netrescale::simulator::{self, SimConfig};
use netrescale::{synth, NodeId, Topology};

/// Betweenness by enumerating every shortest path between each unordered
/// pair and counting the fraction passing through each interior node.
pub fn brute_force_betweenness(t: &Topology) -> Vec<f64> {
    let n = t.n_nodes();
    let mut out = vec![0.0; n];
    let all: Vec<Vec<usize>> = (0..n).map(|v| bfs(t, v)).collect();
    for s in 0..n {
        for d in s + 1..n {
            let mut paths = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(p) = stack.pop() {
                let last = *p.last().unwrap();
                if last == d {
                    paths.push(p);
                    continue;
                }
                for &(w, _) in t.neighbors(NodeId::from(last)) {
                    let w = w.index();
                    if all[w][d] + 1 == all[last][d] {
                        let mut q = p.clone();
                        q.push(w);
                        stack.push(q);
                    }
                }
            }
            let total = paths.len() as f64;
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    out[v] += 1.0 / total;
                }
            }
        }
    }
    out
}

pub fn bfs(t: &Topology, s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; t.n_nodes()];
    let mut q = VecDeque::from([s]);
    dist[s] = 0;
    while let Some(v) = q.pop_front() {
        for &(w, _) in t.neighbors(NodeId::from(v)) {
            if dist[w.index()] == usize::MAX {
                dist[w.index()] = dist[v] + 1;
                q.push_back(w.index());
            }
        }
    }
    dist
}

/// Connected random graphs with at most 50 nodes.
pub fn small_random_graphs(count: usize) -> Vec<Topology> {
    (0u64..)
        .map(|i| {
            let n = 5 + (i as usize * 7) % 46;
            let p = 0.08 + 0.3 * ((i * 13) % 10) as f64 / 10.0;
            netrescale::topology::giant_component(&synth::gnp(n, p, 100 + i)).topology
        })
        .filter(|t| t.n_nodes() >= 3)
        .take(count)
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Mean of `clamp(ceil(X), 1, max)` for a Pareto `X` with minimum `xm`,
/// integrating the density over each unit interval with Simpson's rule.
pub fn integrated_truncated_mean(shape: f64, xm: f64, max: u32) -> f64 {
    let pdf = |x: f64| if x < xm { 0.0 } else { shape * xm.powf(shape) / x.powf(shape + 1.0) };
    let simpson = |a: f64, b: f64| {
        let m = 64;
        let h = (b - a) / m as f64;
        let mut s = pdf(a) + pdf(b);
        for i in 1..m {
            s += pdf(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    };
    let mut mean = 0.0;
    let mut mass = 0.0;
    for j in 1..max {
        let lo = ((j - 1) as f64).max(xm);
        let hi = j as f64;
        if hi <= lo {
            continue;
        }
        let p = simpson(lo, hi);
        mean += j as f64 * p;
        mass += p;
    }
    mean + max as f64 * (1.0 - mass)
}

/// Criterion-2 original: configuration-model power law with Scenario 1 links.
pub fn structural_original() -> Topology {
    let g = synth::power_law_network(10_000, 2.1, 2, None, 2013);
    scenario::assign_scenario(&g, ScenarioId::Scenario1, 1).unwrap()
}

pub fn quarter_replica(original: &Topology, seed: u64) -> Rescaled {
    rescaler::rescale(original, &RescaleSpec::new(original.n_nodes() / 4, seed)).unwrap()
}

/// Largest relative error between normalized binned curves over bins with at
/// least `min_count` nodes in both.
pub fn curve_error(a: &DegreeCurve, b: &DegreeCurve, min_count: usize) -> f64 {
    let (a, b) = (a.normalized(), b.normalized());
    a.binned
        .iter()
        .filter(|p| p.count >= min_count)
        .filter_map(|p| {
            let q = b.bin_at(p.x as u32)?;
            (q.count >= min_count).then(|| ((q.y - p.y) / p.y).abs())
        })
        .fold(0.0, f64::max)
}

pub fn neighbor_degree_errors(original: &Topology, replica: &Topology) -> (f64, f64) {
    let e = |w| {
        curve_error(
            &metrics::weighted_neighbor_degree(original, w).unwrap(),
            &metrics::weighted_neighbor_degree(replica, w).unwrap(),
            20,
        )
    };
    (e(Weight::Capacity), e(Weight::Delay))
}

pub fn load_slope(t: &Topology) -> f64 {
    let load = metrics::betweenness_load(t, None).unwrap().normalized();
    metrics::mid_range_slope(&load, 2.0, 20).unwrap()
}

/// Original (N = 1000, α = 1) and replica (N' = 500, α = 1/2) runs compared
/// on normalized FCT and packet delay.
pub fn performance_pair(sc: ScenarioId, model: FlowModel) -> (MetricComparison, MetricComparison, usize, usize) {
    let original = scenario::assign_scenario(&synth::power_law_network(1000, 2.1, 2, None, 2013), sc, 7).unwrap();
    let replica = rescaler::rescale(&original, &RescaleSpec::new(500, 11)).unwrap().topology;
    let mut runs = Vec::new();
    let mut completed = Vec::new();
    for (t, alpha) in [(&original, 1.0), (&replica, 0.5)] {
        let t = scenario::apply_alpha_transform(t, AlphaTransform::new(alpha).unwrap()).unwrap();
        let traffic = TrafficConfig {
            seed: 3,
            flow_model: model,
            ..TrafficConfig::for_scenario(sc, alpha)
        };
        let schedule = scenario::build_traffic(&t, &traffic).unwrap();
        let r = simulator::run(&t, &schedule, &SimConfig::from_traffic(&traffic, alpha)).unwrap();
        completed.push(r.flows_completed);
        runs.push(analysis::normalize(&r));
    }
    let fct = compare_samples(&runs[0].0, &runs[1].0, 0.05, 0.999).unwrap();
    let delay = compare_samples(&runs[0].1, &runs[1].1, 0.05, 0.999).unwrap();
    (fct, delay, completed[0], completed[1])
}

pub fn netrescale(args: &[&str], env_out: Option<&std::path::Path>) -> std::process::Output {
    let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_netrescale"));
    cmd.args(args);
    match env_out {
        Some(p) => cmd.env(netrescale::cli::OUT_ENV, p),
        None => cmd.env_remove(netrescale::cli::OUT_ENV),
    };
    cmd.output().unwrap()
}

pub fn ok(args: &[&str]) -> String {
    let o = netrescale(args, None);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

/// Every file below `dir` with its bytes.
pub fn snapshot(dir: &std::path::Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    let mut out = std::collections::BTreeMap::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_file() {
            out.insert(p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap());
        }
    }
    out
}

/// rescale → metrics → simulate at two scales → compare, in `root`. Returns
/// the output directories holding manifests.
pub fn cli_pipeline(root: &std::path::Path) -> Vec<std::path::PathBuf> {
    let input = root.join("input.txt");
    let g = synth::power_law_network(600, 2.2, 2, None, 31);
    netrescale::topology::save_edge_list(&g, &input).unwrap();
    let d = |name: &str| root.join(name);
    let s = |p: &std::path::Path| p.to_str().unwrap().to_string();
    ok(&["rescale", "--in", &s(&input), "--scenario", "2", "--alpha", "0.5", "--seed", "5", "--rewire", "--out", &s(&d("rescale"))]);
    ok(&["metrics", "--in", &s(&d("rescale").join("replica.txt")), "--sample-sources", "100", "--out", &s(&d("metrics"))]);
    ok(&["simulate", "--in", &s(&d("rescale").join("original.txt")), "--alpha", "1", "--set", "horizon=20", "--out", &s(&d("sim1"))]);
    ok(&["simulate", "--in", &s(&d("rescale").join("replica.txt")), "--alpha", "0.5", "--set", "horizon=40", "--out", &s(&d("sim2"))]);
    let o = netrescale(&["compare", &s(&d("sim1")), &s(&d("sim2")), "--threshold", "0.1", "--out", &s(&d("compare"))], None);
    assert!(matches!(o.status.code(), Some(0 | 1)));
    ["rescale", "metrics", "sim1", "sim2", "compare"].iter().map(|n| d(n)).collect()
}
