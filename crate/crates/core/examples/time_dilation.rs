//! Simulate one flow trace on a network and on its α-scaled copies. With α a
//! power of two every event time is stretched exactly by 1/α, so normalized
//! delays match bit for bit.

use netrescale::scenario::{self, AlphaTransform, FlowModel, ScenarioId, TrafficConfig};
use netrescale::simulator::{self, SimConfig};
use netrescale::synth;

fn main() -> netrescale::Result<()> {
    let g = synth::power_law_network(200, 2.2, 2, None, 8);
    let base = scenario::assign_scenario(&g, ScenarioId::Scenario2, 1)?;
    let traffic = TrafficConfig { flow_model: FlowModel::TcpLite, horizon: 20.0, ..TrafficConfig::for_scenario(ScenarioId::Scenario2, 1.0) };
    let schedule = scenario::build_traffic(&base, &traffic)?;

    let mut reference: Option<(Vec<f64>, Vec<f64>)> = None;
    for alpha in [1.0, 0.5, 0.25] {
        let t = scenario::apply_alpha_transform(&base, AlphaTransform::new(alpha)?)?;
        let cfg = SimConfig::from_traffic(&traffic, alpha);
        let r = simulator::run(&t, &schedule.stretched(alpha), &cfg)?;
        let fct: Vec<f64> = r.fct.iter().map(|&(_, x)| x * alpha).collect();
        let delay: Vec<f64> = r.delays.iter().map(|&x| x * alpha).collect();
        let same = reference.as_ref().map(|(f, d)| *f == fct && *d == delay);
        println!(
            "alpha={alpha:<5} flows={} completed={} packets={} end={:.3}s identical normalized results: {}",
            r.flows_total,
            r.flows_completed,
            r.data.delivered,
            r.end_time,
            same.map_or("reference".to_string(), |s| s.to_string()),
        );
        reference.get_or_insert((fct, delay));
    }
    Ok(())
}
