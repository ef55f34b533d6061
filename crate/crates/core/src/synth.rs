//! Synthetic topologies used as stand-ins for measured networks.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::seed;
use crate::topology::{giant_component, Topology};

/// Discrete power law `P(k) ∝ k^-gamma` on `[k_min, k_max]`.
#[derive(Clone, Debug)]
pub struct PowerLaw {
    k_min: u32,
    cdf: Vec<f64>,
}

impl PowerLaw {
    pub fn new(gamma: f64, k_min: u32, k_max: u32) -> Self {
        assert!(k_min >= 1 && k_max >= k_min);
        let mut cdf = Vec::with_capacity((k_max - k_min + 1) as usize);
        let mut acc = 0.0;
        for k in k_min..=k_max {
            acc += f64::from(k).powf(-gamma);
            cdf.push(acc);
        }
        for c in &mut cdf {
            *c /= acc;
        }
        PowerLaw { k_min, cdf }
    }

    pub fn sample(&self, rng: &mut seed::Rng) -> u32 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1);
        self.k_min + i as u32
    }
}

/// Erased configuration model: stubs paired uniformly, then self-loops and
/// parallel links discarded.
pub fn configuration_model(degrees: &[u32], seed: u64) -> Topology {
    let mut rng = seed::rng(seed);
    let mut stubs: Vec<u32> = degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(i as u32, k as usize))
        .collect();
    if stubs.len() % 2 == 1 {
        stubs.pop();
    }
    stubs.shuffle(&mut rng);
    let mut seen = HashSet::with_capacity(stubs.len() / 2);
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if u != v && seen.insert((u, v)) {
            edges.push((u, v));
        }
    }
    Topology::from_edges(degrees.len(), &edges).expect("erased configuration model is simple")
}

/// Giant component of an erased configuration model with power-law degrees.
/// `k_max` defaults to the natural cutoff `n^(1/(gamma-1))`.
pub fn power_law_network(n: usize, gamma: f64, k_min: u32, k_max: Option<u32>, seed: u64) -> Topology {
    let natural = (n as f64).powf(1.0 / (gamma - 1.0)).floor() as u32;
    let k_max = k_max.unwrap_or(natural).clamp(k_min, (n.max(2) - 1) as u32);
    let law = PowerLaw::new(gamma, k_min, k_max);
    let mut rng = seed::rng(seed::derive(seed, "synth-degrees"));
    let degrees: Vec<u32> = (0..n).map(|_| law.sample(&mut rng)).collect();
    let t = configuration_model(&degrees, seed::derive(seed, "synth-pairing"));
    giant_component(&t).topology
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Topology {
    let mut rng = seed::rng(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Topology::from_edges(n, &edges).expect("G(n,p) is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_network_is_connected_and_heavy_tailed() {
        let t = power_law_network(2000, 2.1, 2, None, 3);
        assert!(t.is_connected());
        assert!(t.n_nodes() > 1900);
        assert!(t.max_degree() > 50);
    }

    #[test]
    fn configuration_model_respects_degree_bounds() {
        let degs = vec![3u32; 10];
        let t = configuration_model(&degs, 1);
        assert!(t.degrees().iter().all(|&k| k <= 3));
    }
}
