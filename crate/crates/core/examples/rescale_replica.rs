//! Build a Scenario 1 weighted power-law network and rescale it to a quarter
//! of its size. Pass a directory to save both networks as edge lists.

use netrescale::rescaler::{self, RescaleSpec};
use netrescale::scenario::{assign_scenario, ScenarioId};
use netrescale::{metrics, synth, topology};

fn main() -> netrescale::Result<()> {
    let g = synth::power_law_network(4000, 2.1, 2, None, 2013);
    let original = assign_scenario(&g, ScenarioId::Scenario1, 1)?;
    let r = rescaler::rescale(&original, &RescaleSpec::new(original.n_nodes() / 4, 5))?;
    print!("{}", r.report.to_text());

    for (name, t) in [("original", &original), ("replica", &r.topology)] {
        println!(
            "{name:>8}: n={} links={} mean degree={:.2} max degree={} assortativity={:.3}",
            t.n_nodes(),
            t.n_links(),
            t.mean_degree(),
            t.max_degree(),
            metrics::assortativity(t).unwrap_or(f64::NAN),
        );
    }
    if let Some(dir) = std::env::args().nth(1) {
        let dir = std::path::Path::new(&dir);
        topology::save_edge_list(&original, dir.join("original.txt"))?;
        topology::save_edge_list(&r.topology, dir.join("replica.txt"))?;
        println!("saved to {}", dir.display());
    }
    Ok(())
}
