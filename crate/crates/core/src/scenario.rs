//! Link attribute scenarios, the α time transform, and traffic generation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::seed;
use crate::textio::{fmt_f64, parse_kv};
use crate::topology::{LinkAttrs, NodeId, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    /// `C = min(k, k')` Mb/s, `P = 500·sqrt(k k') / k_max` ms.
    Scenario1,
    /// `C = min(2000/k, 2000/k')` Mb/s, `P ~ U[1, 500]` ms.
    Scenario2,
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "scenario1" => Ok(ScenarioId::Scenario1),
            "2" | "scenario2" => Ok(ScenarioId::Scenario2),
            _ => Err(Error::config(format!("unknown scenario {s:?}"))),
        }
    }
}

impl ScenarioId {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::Scenario1 => "scenario1",
            ScenarioId::Scenario2 => "scenario2",
        }
    }
}

/// Overwrite every link's capacity and delay according to `s`.
pub fn assign_scenario(t: &Topology, s: ScenarioId, seed: u64) -> Result<Topology> {
    let k_max = t.max_degree() as f64;
    let mut rng = seed::rng(seed);
    let attrs: Vec<LinkAttrs> = t
        .links()
        .iter()
        .map(|l| {
            let k = t.degree(l.u) as f64;
            let k2 = t.degree(l.v) as f64;
            match s {
                ScenarioId::Scenario1 => LinkAttrs::new(k.min(k2), 500.0 * (k * k2).sqrt() / k_max),
                ScenarioId::Scenario2 => {
                    LinkAttrs::new((2000.0 / k).min(2000.0 / k2), rng.random_range(1.0..=500.0))
                }
            }
        })
        .collect();
    Ok(t.with_link_attrs(&attrs)?.with_meta("scenario", s.as_str()))
}

/// The α time transform: capacities times α, delays and timeouts over α.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaTransform {
    alpha: f64,
}

impl AlphaTransform {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::config(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(AlphaTransform { alpha })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }
}

/// The α recorded on a topology, 1 if none was applied.
pub fn topology_alpha(t: &Topology) -> Result<f64> {
    match t.meta_value("alpha") {
        None => Ok(1.0),
        Some(v) => v
            .parse()
            .map_err(|_| Error::config(format!("bad alpha metadata {v:?}"))),
    }
}

fn scale_links(t: &Topology, cap_factor: f64, delay_factor: f64, meta_alpha: f64) -> Result<Topology> {
    if !t.is_weighted() {
        return Err(Error::Unweighted);
    }
    let attrs: Vec<LinkAttrs> = t
        .links()
        .iter()
        .map(|l| {
            let a = l.attrs.expect("weighted");
            LinkAttrs::new(a.capacity * cap_factor, a.prop_delay * delay_factor)
        })
        .collect();
    Ok(t.with_link_attrs(&attrs)?.with_meta("alpha", fmt_f64(meta_alpha)))
}

pub fn apply_alpha_transform(t: &Topology, a: AlphaTransform) -> Result<Topology> {
    let current = topology_alpha(t)?;
    scale_links(t, a.alpha, 1.0 / a.alpha, current * a.alpha)
}

/// Inverse of [`apply_alpha_transform`].
pub fn undo_alpha_transform(t: &Topology, a: AlphaTransform) -> Result<Topology> {
    let current = topology_alpha(t)?;
    scale_links(t, 1.0 / a.alpha, a.alpha, current / a.alpha)
}

/// Pareto packet counts: continuous Pareto, rounded up, clamped to `[1, max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncatedPareto {
    pub shape: f64,
    pub scale: f64,
    pub max: u32,
}

impl TruncatedPareto {
    /// Scale chosen so the untruncated continuous mean equals `mean`.
    pub fn with_mean(mean: f64, shape: f64, max: u32) -> Result<Self> {
        if !(shape > 1.0) || !(mean > 0.0) || max == 0 {
            return Err(Error::config("flow size needs shape > 1, mean > 0, max >= 1"));
        }
        Ok(TruncatedPareto {
            shape,
            scale: mean * (shape - 1.0) / shape,
            max,
        })
    }

    /// Inverse transform for `u` in `(0, 1]`.
    pub fn size_from_uniform(&self, u: f64) -> u32 {
        let x = self.scale * u.powf(-1.0 / self.shape);
        if x >= f64::from(self.max) {
            self.max
        } else {
            (x.ceil() as u32).max(1)
        }
    }

    pub fn sample(&self, rng: &mut seed::Rng) -> u32 {
        self.size_from_uniform(1.0 - rng.random::<f64>())
    }

    /// `P(size > n)`.
    pub fn survival(&self, n: u32) -> f64 {
        if n >= self.max {
            0.0
        } else if f64::from(n) < self.scale {
            1.0
        } else {
            (self.scale / f64::from(n)).powf(self.shape)
        }
    }

    pub fn mean(&self) -> f64 {
        (0..self.max).map(|n| self.survival(n)).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowModel {
    TcpLite,
    UdpCbr,
}

impl FromStr for FlowModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tcp_lite" | "tcp" => Ok(FlowModel::TcpLite),
            "udp_cbr" | "udp" => Ok(FlowModel::UdpCbr),
            _ => Err(Error::config(format!("unknown flow model {s:?}"))),
        }
    }
}

impl FlowModel {
    pub fn as_str(self) -> &'static str {
        match self {
            FlowModel::TcpLite => "tcp_lite",
            FlowModel::UdpCbr => "udp_cbr",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrafficConfig {
    pub sd_fraction: f64,
    /// Flow arrivals per second per selected pair.
    pub lambda: f64,
    pub mean_flow_size: f64,
    pub max_flow_size: u32,
    pub pareto_shape: f64,
    pub packet_size: u32,
    pub flow_model: FlowModel,
    /// Unscaled UDP rate in packets per second.
    pub udp_rate: f64,
    pub buffer: usize,
    /// Arrival window in seconds.
    pub horizon: f64,
    pub seed: u64,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        TrafficConfig {
            sd_fraction: 0.1,
            lambda: 0.1,
            mean_flow_size: 4.0,
            max_flow_size: 10_000,
            pareto_shape: 1.2,
            packet_size: 1000,
            flow_model: FlowModel::TcpLite,
            udp_rate: 6.0,
            buffer: 300,
            horizon: 100.0,
            seed: 1,
        }
    }
}

impl TrafficConfig {
    /// Defaults for one of the two scenarios: TCP at 0.1 flows/s or UDP at
    /// 0.05 flows/s, with the horizon stretched to `100/alpha`.
    pub fn for_scenario(s: ScenarioId, alpha: f64) -> Self {
        let (lambda, flow_model) = match s {
            ScenarioId::Scenario1 => (0.1, FlowModel::TcpLite),
            ScenarioId::Scenario2 => (0.05, FlowModel::UdpCbr),
        };
        TrafficConfig {
            lambda,
            flow_model,
            horizon: 100.0 / alpha,
            ..TrafficConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sd_fraction > 0.0 && self.sd_fraction <= 1.0) {
            return Err(Error::config("sd_fraction must lie in (0, 1]"));
        }
        if !(self.lambda > 0.0) {
            return Err(Error::config("lambda must be positive"));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::config("horizon must be positive"));
        }
        if self.packet_size == 0 || self.buffer == 0 || !(self.udp_rate > 0.0) {
            return Err(Error::config("packet_size, buffer, and udp_rate must be positive"));
        }
        self.flow_size().map(|_| ())
    }

    pub fn flow_size(&self) -> Result<TruncatedPareto> {
        TruncatedPareto::with_mean(self.mean_flow_size, self.pareto_shape, self.max_flow_size)
    }

    /// Apply `key=value` overrides on top of `self`.
    pub fn with_overrides(mut self, kv: &BTreeMap<String, String>) -> Result<Self> {
        fn num<T: FromStr>(k: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::config(format!("bad value {v:?} for {k}")))
        }
        for (k, v) in kv {
            match k.as_str() {
                "sd_fraction" => self.sd_fraction = num(k, v)?,
                "lambda" => self.lambda = num(k, v)?,
                "mean_flow_size" => self.mean_flow_size = num(k, v)?,
                "max_flow_size" => self.max_flow_size = num(k, v)?,
                "pareto_shape" => self.pareto_shape = num(k, v)?,
                "packet_size" => self.packet_size = num(k, v)?,
                "flow_model" => self.flow_model = v.parse()?,
                "udp_rate" => self.udp_rate = num(k, v)?,
                "buffer" => self.buffer = num(k, v)?,
                "horizon" => self.horizon = num(k, v)?,
                "seed" => self.seed = num(k, v)?,
                _ => return Err(Error::config(format!("unknown traffic key {k:?}"))),
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        TrafficConfig::default().with_overrides(&parse_kv(text)?)
    }

    pub fn to_kv(&self) -> BTreeMap<String, String> {
        [
            ("sd_fraction", fmt_f64(self.sd_fraction)),
            ("lambda", fmt_f64(self.lambda)),
            ("mean_flow_size", fmt_f64(self.mean_flow_size)),
            ("max_flow_size", self.max_flow_size.to_string()),
            ("pareto_shape", fmt_f64(self.pareto_shape)),
            ("packet_size", self.packet_size.to_string()),
            ("flow_model", self.flow_model.as_str().to_string()),
            ("udp_rate", fmt_f64(self.udp_rate)),
            ("buffer", self.buffer.to_string()),
            ("horizon", fmt_f64(self.horizon)),
            ("seed", self.seed.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flow {
    pub id: u32,
    pub pair: u32,
    pub arrival: f64,
    pub size: u32,
}

/// Selected source-destination pairs and the flows they carry, ordered by
/// arrival time.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSchedule {
    pub pairs: Vec<(NodeId, NodeId)>,
    pub flows: Vec<Flow>,
    pub horizon: f64,
}

impl FlowSchedule {
    /// Same flows with every time divided by `alpha`.
    pub fn stretched(&self, alpha: f64) -> FlowSchedule {
        FlowSchedule {
            pairs: self.pairs.clone(),
            flows: self
                .flows
                .iter()
                .map(|f| Flow {
                    arrival: f.arrival / alpha,
                    ..*f
                })
                .collect(),
            horizon: self.horizon / alpha,
        }
    }

    pub fn total_packets(&self) -> u64 {
        self.flows.iter().map(|f| u64::from(f.size)).sum()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# netrescale flow trace\n");
        let _ = writeln!(s, "#@ horizon={}", fmt_f64(self.horizon));
        s.push_str("# pair <pair_id> <src> <dst>\n# flow <flow_id> <pair_id> <arrival_s> <size_pkts>\n");
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            let _ = writeln!(s, "pair {i} {a} {b}");
        }
        for f in &self.flows {
            let _ = writeln!(s, "flow {} {} {} {}", f.id, f.pair, fmt_f64(f.arrival), f.size);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut horizon = None;
        let mut pairs = Vec::new();
        let mut flows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |m: &str| Error::Parse {
                line,
                message: m.to_string(),
            };
            let t = raw.trim();
            if let Some(meta) = t.strip_prefix("#@") {
                if let Some(v) = meta.trim().strip_prefix("horizon=") {
                    horizon = Some(v.parse::<f64>().map_err(|_| err("bad horizon"))?);
                }
                continue;
            }
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = t.split_whitespace().collect();
            match cols.as_slice() {
                ["pair", id, a, b] => {
                    if id.parse::<usize>().ok() != Some(pairs.len()) {
                        return Err(err("pair ids must be consecutive from 0"));
                    }
                    let a: u32 = a.parse().map_err(|_| err("bad node id"))?;
                    let b: u32 = b.parse().map_err(|_| err("bad node id"))?;
                    pairs.push((NodeId(a), NodeId(b)));
                }
                ["flow", id, pair, arrival, size] => {
                    let f = Flow {
                        id: id.parse().map_err(|_| err("bad flow id"))?,
                        pair: pair.parse().map_err(|_| err("bad pair id"))?,
                        arrival: arrival.parse().map_err(|_| err("bad arrival"))?,
                        size: size.parse().map_err(|_| err("bad size"))?,
                    };
                    if f.pair as usize >= pairs.len() {
                        return Err(err("flow refers to an undeclared pair"));
                    }
                    if f.size == 0 || !(f.arrival >= 0.0) {
                        return Err(err("flow needs size >= 1 and arrival >= 0"));
                    }
                    flows.push(f);
                }
                _ => return Err(err("expected a pair or flow record")),
            }
        }
        let horizon = horizon.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing horizon".into(),
        })?;
        Ok(FlowSchedule {
            pairs,
            flows,
            horizon,
        })
    }
}

/// Unordered pair with rank `idx` in the row-major listing of `a < b`.
fn decode_pair(idx: u64, n: u64) -> (u64, u64) {
    // Row a holds n-1-a pairs; find the row by solving the triangular sum.
    let total = n * (n - 1) / 2;
    let rem = total - 1 - idx;
    let r = ((((8 * rem + 1) as f64).sqrt() - 1.0) / 2.0).floor() as u64;
    let mut r = r;
    while (r + 1) * (r + 2) / 2 <= rem {
        r += 1;
    }
    while r * (r + 1) / 2 > rem {
        r -= 1;
    }
    let a = n - 2 - r;
    let row_start = a * (2 * n - a - 1) / 2;
    let b = a + 1 + (idx - row_start);
    (a, b)
}

/// Select `floor(p·N(N−1)/2)` unordered pairs and generate Poisson flow
/// arrivals on each over `cfg.horizon`.
pub fn build_traffic(t: &Topology, cfg: &TrafficConfig) -> Result<FlowSchedule> {
    cfg.validate()?;
    let sizes = cfg.flow_size()?;
    let n = t.n_nodes() as u64;
    let total = n * n.saturating_sub(1) / 2;
    let m = (cfg.sd_fraction * total as f64).floor() as u64;
    let mut rng = seed::rng(seed::derive(cfg.seed, "sd-pairs"));
    let mut chosen: Vec<u64> = if m == 0 {
        Vec::new()
    } else {
        rand::seq::index::sample(&mut rng, total as usize, m as usize)
            .into_iter()
            .map(|i| i as u64)
            .collect()
    };
    chosen.sort_unstable();
    let pairs: Vec<(NodeId, NodeId)> = chosen
        .into_iter()
        .map(|idx| {
            let (a, b) = decode_pair(idx, n);
            let (a, b) = (NodeId(a as u32), NodeId(b as u32));
            if rng.random::<bool>() {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();

    let mut rng = seed::rng(seed::derive(cfg.seed, "flows"));
    let mut flows = Vec::new();
    for pair in 0..pairs.len() as u32 {
        let mut time = 0.0;
        loop {
            time += -(1.0 - rng.random::<f64>()).ln() / cfg.lambda;
            if time >= cfg.horizon {
                break;
            }
            flows.push(Flow {
                id: 0,
                pair,
                arrival: time,
                size: sizes.sample(&mut rng),
            });
        }
    }
    flows.sort_by(|a, b| a.arrival.total_cmp(&b.arrival).then(a.pair.cmp(&b.pair)));
    for (i, f) in flows.iter_mut().enumerate() {
        f.id = i as u32;
    }
    Ok(FlowSchedule {
        pairs,
        flows,
        horizon: cfg.horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weighted_path() -> Topology {
        Topology::from_weighted_edges(3, &[(0, 1, 10.0, 6.0), (1, 2, 4.0, 3.0)]).unwrap()
    }

    #[test]
    fn scenario1_formula() {
        // Star with 7 leaves plus a path so some link joins degrees 3 and 7.
        let mut edges: Vec<(u32, u32)> = (1..=7).map(|i| (0, i)).collect();
        edges.extend([(1, 8), (1, 9)]);
        let t = Topology::from_edges(10, &edges).unwrap();
        let w = assign_scenario(&t, ScenarioId::Scenario1, 0).unwrap();
        let l = w.links().iter().find(|l| l.u == NodeId(0) && l.v == NodeId(1)).unwrap();
        let a = l.attrs.unwrap();
        assert_eq!(a.capacity, 3.0);
        assert!((a.prop_delay - 500.0 * 21f64.sqrt() / 7.0).abs() < 1e-12);
        for l in w.links() {
            let (k, k2) = (w.degree(l.u) as f64, w.degree(l.v) as f64);
            let a = l.attrs.unwrap();
            assert_eq!(a.capacity, k.min(k2));
            assert_eq!(a.prop_delay, 500.0 * (k * k2).sqrt() / 7.0);
        }
    }

    #[test]
    fn scenario2_formula() {
        let mut edges: Vec<(u32, u32)> = (1..=10).map(|i| (0, i)).collect();
        edges.extend([(1, 11), (1, 12), (1, 13)]);
        let t = Topology::from_edges(14, &edges).unwrap();
        let w = assign_scenario(&t, ScenarioId::Scenario2, 5).unwrap();
        let l = w.links().iter().find(|l| l.u == NodeId(0) && l.v == NodeId(1)).unwrap();
        assert_eq!(l.attrs.unwrap().capacity, 200.0);
        for l in w.links() {
            let a = l.attrs.unwrap();
            assert!((1.0..=500.0).contains(&a.prop_delay));
        }
        assert_eq!(w, assign_scenario(&t, ScenarioId::Scenario2, 5).unwrap());
    }

    #[test]
    fn alpha_transform_cases() {
        let t = weighted_path();
        assert!(AlphaTransform::new(0.0).is_err());
        assert!(AlphaTransform::new(1.5).is_err());
        let id = apply_alpha_transform(&t, AlphaTransform::new(1.0).unwrap()).unwrap();
        assert_eq!(id.links(), t.links());
        let half = apply_alpha_transform(&t, AlphaTransform::new(0.5).unwrap()).unwrap();
        assert_eq!(half.links()[0].attrs.unwrap(), LinkAttrs::new(5.0, 12.0));
        assert_eq!(topology_alpha(&half).unwrap(), 0.5);
        assert!(matches!(
            apply_alpha_transform(&Topology::from_edges(2, &[(0, 1)]).unwrap(), AlphaTransform::new(0.5).unwrap()),
            Err(Error::Unweighted)
        ));
    }

    #[test]
    fn pair_decoding_is_a_bijection() {
        for n in 2..12u64 {
            let mut want = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    want.push((a, b));
                }
            }
            let got: Vec<_> = (0..want.len() as u64).map(|i| decode_pair(i, n)).collect();
            assert_eq!(got, want);
        }
        let n = 29_333u64;
        let last = n * (n - 1) / 2 - 1;
        assert_eq!(decode_pair(last, n), (n - 2, n - 1));
        assert_eq!(decode_pair(n - 1, n), (1, 2));
    }

    #[test]
    fn empty_schedule_when_no_pairs() {
        let t = weighted_path();
        let cfg = TrafficConfig {
            sd_fraction: 0.1,
            ..TrafficConfig::default()
        };
        let s = build_traffic(&t, &cfg).unwrap();
        assert!(s.pairs.is_empty() && s.flows.is_empty());
    }

    #[test]
    fn schedule_round_trips_and_is_reproducible() {
        let t = crate::synth::gnp(40, 0.2, 3);
        let cfg = TrafficConfig::default();
        let s = build_traffic(&t, &cfg).unwrap();
        assert_eq!(s.pairs.len(), 78);
        assert!(!s.flows.is_empty());
        assert_eq!(s, build_traffic(&t, &cfg).unwrap());
        assert_eq!(FlowSchedule::from_text(&s.to_text()).unwrap(), s);
        let st = s.stretched(0.25);
        assert_eq!(st.horizon, 400.0);
        assert!(st.flows.iter().zip(&s.flows).all(|(a, b)| a.arrival == b.arrival * 4.0));
    }

    #[test]
    fn traffic_config_overrides() {
        let cfg = TrafficConfig::from_text("lambda=0.05\nflow_model=udp_cbr\n# c\nhorizon=200\n").unwrap();
        assert_eq!(cfg.lambda, 0.05);
        assert_eq!(cfg.flow_model, FlowModel::UdpCbr);
        assert_eq!(cfg.horizon, 200.0);
        assert!(TrafficConfig::from_text("bogus=1").is_err());
        assert!(TrafficConfig::from_text("sd_fraction=0").is_err());
        let back = TrafficConfig::default().with_overrides(&cfg.to_kv()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn pareto_transform_bounds() {
        let d = TruncatedPareto::with_mean(4.0, 1.2, 10_000).unwrap();
        assert!((d.scale - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.size_from_uniform(1.0), 1);
        assert_eq!(d.size_from_uniform(1e-300), 10_000);
        // P(size > 1) = (2/3)^1.2.
        assert!((d.survival(1) - (2.0f64 / 3.0).powf(1.2)).abs() < 1e-15);
        assert!(d.mean() < 4.0 && d.mean() > 3.5);
    }

    proptest! {
        #[test]
        fn alpha_round_trip(alpha_exp in 0u32..6, caps in proptest::collection::vec(0.1f64..1e4, 2), delays in proptest::collection::vec(0.1f64..1e3, 2)) {
            let t = Topology::from_weighted_edges(3, &[(0, 1, caps[0], delays[0]), (1, 2, caps[1], delays[1])]).unwrap();
            let a = AlphaTransform::new(0.5f64.powi(alpha_exp as i32)).unwrap();
            let back = undo_alpha_transform(&apply_alpha_transform(&t, a).unwrap(), a).unwrap();
            prop_assert_eq!(back.links(), t.links());
            prop_assert_eq!(topology_alpha(&back).unwrap(), 1.0);
        }

        #[test]
        fn pareto_sizes_in_range(u in 1e-12f64..=1.0) {
            let d = TruncatedPareto::with_mean(4.0, 1.2, 10_000).unwrap();
            let s = d.size_from_uniform(u);
            prop_assert!((1..=10_000).contains(&s));
        }
    }
}
