mod common;

use common::*;
use netrescale::analysis::{self, ks_critical, ks_distance, NormalizedSamples};
use netrescale::distfit::{self, empirical_ccdf, FitConfig};
use netrescale::metrics;
use netrescale::scenario::{self, ScenarioId, TrafficConfig, TruncatedPareto};
use netrescale::simulator::compute_routes;
use netrescale::synth::{self, PowerLaw};
use netrescale::{seed, topology, NodeId};
use rand::Rng;

#[test]
fn brandes_matches_path_enumeration() {
    let graphs = small_random_graphs(100);
    assert_eq!(graphs.len(), 100);
    for t in &graphs {
        let fast = metrics::betweenness(t, None).unwrap();
        let slow = brute_force_betweenness(t);
        assert!(max_abs_diff(&fast, &slow) < 1e-9, "n={}", t.n_nodes());
    }
}

#[test]
fn truncated_pareto_mean_matches_integration() {
    let tp = TruncatedPareto::with_mean(4.0, 1.2, 10_000).unwrap();
    let oracle = integrated_truncated_mean(1.2, 4.0 * 0.2 / 1.2, 10_000);
    assert!((tp.mean() - oracle).abs() / oracle < 1e-3);

    let n = 1_000_000;
    let stratified: f64 = (0..n).map(|i| tp.size_from_uniform((i as f64 + 0.5) / n as f64) as f64).sum::<f64>() / n as f64;
    assert!((stratified - oracle).abs() / oracle < 0.01, "{stratified} vs {oracle}");

    let mut rng = seed::rng(2013);
    let v: Vec<f64> = (0..n).map(|_| tp.sample(&mut rng) as f64).collect();
    let mean = v.iter().sum::<f64>() / n as f64;
    let se = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 * (n as f64 - 1.0))).sqrt();
    assert!((mean - oracle).abs() < 3.0 * se, "{mean} vs {oracle} (se {se})");
}

#[test]
fn poisson_arrivals_average_lambda_times_horizon() {
    let t = topology::Topology::from_weighted_edges(2, &[(0, 1, 10.0, 1.0)]).unwrap();
    let runs = 1000;
    let counts: Vec<f64> = (0..runs)
        .map(|s| {
            let cfg = TrafficConfig { sd_fraction: 1.0, lambda: 0.1, horizon: 100.0, seed: s, ..TrafficConfig::default() };
            scenario::build_traffic(&t, &cfg).unwrap().flows.len() as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / runs as f64;
    let sigma = (10.0 / runs as f64).sqrt();
    assert!((mean - 10.0).abs() < 3.0 * sigma, "{mean}");
}

#[test]
fn empirical_and_sample_ccdf_hand_cases() {
    let e = empirical_ccdf(&[1.0, 1.0, 2.0, 4.0]).unwrap();
    let pts: Vec<(f64, f64)> = e.points().iter().map(|p| (p.x, p.ccdf)).collect();
    assert_eq!(pts, vec![(1.0, 1.0), (2.0, 0.5), (4.0, 0.25)]);
    let e = empirical_ccdf(&[5.0]).unwrap();
    assert_eq!(e.points().len(), 1);
    assert_eq!((e.points()[0].x, e.points()[0].ccdf), (5.0, 1.0));

    let s = NormalizedSamples::from_raw(&[1.0, 2.0, 4.0], 1.0, "x");
    assert_eq!(analysis::ccdf_at(&s, 2.0).unwrap(), 2.0 / 3.0);
    let one = NormalizedSamples::from_raw(&[3.0], 1.0, "x");
    assert_eq!(analysis::step_ccdf(&one).unwrap(), vec![(3.0, 1.0)]);
    assert_eq!(analysis::ccdf_at(&one, 3.5).unwrap(), 0.0);

    assert_eq!(ks_distance(&s, &s).unwrap(), 0.0);
    let z = NormalizedSamples::from_raw(&[0.0; 3], 1.0, "z");
    let o = NormalizedSamples::from_raw(&[1.0; 3], 1.0, "o");
    assert_eq!(ks_distance(&z, &o).unwrap(), 1.0);
}

#[test]
fn exponential_ccdf_at_one() {
    let mut rng = seed::rng(5);
    let v: Vec<f64> = (0..100_000).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s = NormalizedSamples::from_raw(&v, 1.0, "exp");
    assert!((analysis::ccdf_at(&s, 1.0).unwrap() - (-1.0f64).exp()).abs() < 0.01);
}

#[test]
fn two_seeds_below_critical_value() {
    let t = synth::power_law_network(300, 2.2, 2, None, 3);
    let t = scenario::assign_scenario(&t, ScenarioId::Scenario2, 1).unwrap();
    let mut samples = Vec::new();
    for s in [1, 2] {
        let traffic = TrafficConfig { seed: s, horizon: 30.0, ..TrafficConfig::for_scenario(ScenarioId::Scenario2, 1.0) };
        let schedule = scenario::build_traffic(&t, &traffic).unwrap();
        let r = netrescale::simulator::run(&t, &schedule, &netrescale::simulator::SimConfig::from_traffic(&traffic, 1.0)).unwrap();
        samples.push(analysis::normalize(&r).0);
    }
    let d = ks_distance(&samples[0], &samples[1]).unwrap();
    assert!(d < ks_critical(samples[0].len(), samples[1].len(), 0.01), "{d}");
}

#[test]
fn power_law_ccdf_slope() {
    let mut rng = seed::rng(9);
    let law = PowerLaw::new(2.1, 1, 1_000_000);
    let v: Vec<f64> = (0..100_000).map(|_| law.sample(&mut rng) as f64).collect();
    let e = empirical_ccdf(&v).unwrap();
    let pts: Vec<(f64, f64)> = e.points().iter().filter(|p| p.x >= 3.0 && p.x <= 300.0).map(|p| (p.x, p.ccdf)).collect();
    let slope = metrics::loglog_slope(&pts).unwrap();
    assert!((slope + 1.1).abs() <= 0.1, "{slope}");
}

#[test]
fn uniform_delay_fit() {
    let mut rng = seed::rng(4);
    let v: Vec<f64> = (0..20_000).map(|_| rng.random_range(1.0..=500.0)).collect();
    let fit = distfit::fit_values(&v, &FitConfig::default()).unwrap();
    assert!((fit.ccdf(250.0) - 0.5).abs() <= 0.05);
    let draws = fit.sample(100_000, 8);
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    assert!((mean - 250.5).abs() / 250.5 < 0.01, "{mean}");
}

#[test]
fn fitted_power_law_samples_within_ks() {
    let mut rng = seed::rng(12);
    let law = PowerLaw::new(2.1, 1, 100_000);
    let v: Vec<f64> = (0..100_000).map(|_| law.sample(&mut rng) as f64).collect();
    let fit = distfit::fit_values(&v, &FitConfig::default()).unwrap();
    assert!(fit.ks_statistic(&fit.sample(100_000, 13)) <= 0.02);
}

#[test]
fn routes_follow_bfs_distances() {
    let t = synth::power_law_network(10_000, 2.2, 2, None, 17);
    let routes = compute_routes(&t).unwrap();
    let mut rng = seed::rng(18);
    let n = t.n_nodes();
    let pairs: Vec<(NodeId, NodeId)> = (0..1000).map(|_| (NodeId::from(rng.random_range(0..n)), NodeId::from(rng.random_range(0..n)))).collect();
    let paths = routes.routes(&pairs).unwrap();
    for (&(a, b), p) in pairs.iter().zip(&paths) {
        assert_eq!(p.len() - 1, bfs(&t, a.index())[b.index()]);
        assert_eq!((p[0], *p.last().unwrap()), (a, b));
        for w in p.windows(2) {
            assert!(t.neighbors(w[0]).iter().any(|&(x, _)| x == w[1]));
        }
    }
}
