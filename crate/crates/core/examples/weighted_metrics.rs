//! Weighted-correlation and path statistics of an original network and its
//! replica, side by side on normalized log-binned curves.

use netrescale::metrics::{self, DegreeCurve, Weight};
use netrescale::rescaler::{self, RescaleSpec};
use netrescale::scenario::{assign_scenario, ScenarioId};
use netrescale::synth;

fn show(name: &str, a: &DegreeCurve, b: &DegreeCurve) {
    println!("{name}");
    println!("  {:>6} {:>10} {:>10}", "bin", "original", "replica");
    for p in &a.normalized().binned {
        let other = b.normalized().bin_at(p.x as u32).map(|q| format!("{:.3}", q.y));
        println!("  {:>6} {:>10.3} {:>10}", p.x, p.y, other.unwrap_or_else(|| "-".into()));
    }
}

fn main() -> netrescale::Result<()> {
    let g = synth::power_law_network(3000, 2.1, 2, None, 2013);
    let original = assign_scenario(&g, ScenarioId::Scenario1, 1)?;
    let replica = rescaler::rescale(&original, &RescaleSpec::new(1000, 9))?.topology;

    for (name, w) in [("capacity-weighted neighbor degree", Weight::Capacity), ("delay-weighted neighbor degree", Weight::Delay)] {
        show(name, &metrics::weighted_neighbor_degree(&original, w)?, &metrics::weighted_neighbor_degree(&replica, w)?);
    }
    show("betweenness load", &metrics::betweenness_load(&original, None)?, &metrics::betweenness_load(&replica, None)?);
    for (name, t) in [("original", &original), ("replica", &replica)] {
        let s = metrics::summary(t, None)?;
        println!("{name}:");
        print!("{}", s.to_text());
    }
    Ok(())
}
