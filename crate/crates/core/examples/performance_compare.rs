//! UDP traffic on a 1000-node original (α = 1) and on its 500-node replica
//! (α = 1/2), compared through normalized FCT and packet-delay CCDFs.

use netrescale::analysis::{self, percentile};
use netrescale::rescaler::{self, RescaleSpec};
use netrescale::scenario::{self, AlphaTransform, ScenarioId, TrafficConfig};
use netrescale::simulator::{self, SimConfig};
use netrescale::synth;

fn main() -> netrescale::Result<()> {
    let sc = ScenarioId::Scenario2;
    let original = scenario::assign_scenario(&synth::power_law_network(1000, 2.1, 2, None, 2013), sc, 7)?;
    let replica = rescaler::rescale(&original, &RescaleSpec::new(500, 11))?.topology;

    let mut runs = Vec::new();
    for (t, alpha) in [(&original, 1.0), (&replica, 0.5)] {
        let t = scenario::apply_alpha_transform(t, AlphaTransform::new(alpha)?)?;
        let traffic = TrafficConfig { seed: 3, ..TrafficConfig::for_scenario(sc, alpha) };
        let schedule = scenario::build_traffic(&t, &traffic)?;
        let r = simulator::run(&t, &schedule, &SimConfig::from_traffic(&traffic, alpha))?;
        println!("alpha={alpha}: {} of {} flows completed", r.flows_completed, r.flows_total);
        runs.push(analysis::normalize(&r));
    }
    for (name, a, b) in [("fct", &runs[0].0, &runs[1].0), ("delay", &runs[0].1, &runs[1].1)] {
        let c = analysis::compare_samples(a, b, 0.05, 0.999)?;
        println!(
            "{name:>5}: ks={:.4} median {:.4} vs {:.4}",
            c.ks,
            percentile(a, 0.5)?,
            percentile(b, 0.5)?,
        );
    }
    Ok(())
}
