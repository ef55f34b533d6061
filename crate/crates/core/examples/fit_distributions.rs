//! Fit smoothing-spline CCDFs to a power-law degree list and a uniform delay
//! list, then sample from the fits and report goodness of fit.

use netrescale::distfit::{self, FitConfig};
use netrescale::synth::PowerLaw;
use netrescale::seed;
use rand::Rng;

fn main() -> netrescale::Result<()> {
    let mut rng = seed::rng(7);
    let law = PowerLaw::new(2.1, 1, 10_000);
    let degrees: Vec<f64> = (0..50_000).map(|_| law.sample(&mut rng) as f64).collect();
    let delays: Vec<f64> = (0..20_000).map(|_| rng.random_range(1.0..=500.0)).collect();

    for (name, values) in [("degree", &degrees), ("delay", &delays)] {
        let fit = distfit::fit_values(values, &FitConfig::default())?;
        let draws = fit.sample(values.len(), 11);
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        println!(
            "{name:>6}: spar={:.3} domain={:?} ks(fit, draws)={:.4} sample mean={mean:.2}",
            fit.spar().unwrap_or(f64::NAN),
            fit.domain(),
            fit.ks_statistic(&draws),
        );
        for x in [1.0, 10.0, 100.0, 250.0] {
            println!("        ccdf({x}) = {:.4}", fit.ccdf(x));
        }
    }
    Ok(())
}
