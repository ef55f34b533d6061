//! Command-line pipeline: `rescale`, `metrics`, `simulate`, `compare`, and
//! `rerun`.
//!
//! Every option resolves from built-in defaults, then an optional
//! `key=value` config file, then flags. The fully resolved parameters,
//! including derived seeds, are written as `manifest.txt` next to the
//! outputs; `rerun --manifest` replays one.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::analysis;
use crate::distfit::FitConfig;
use crate::error::{Error, Result};
use crate::metrics::{self, Weight};
use crate::rescaler::{self, LinkSampling, RescaleSpec};
use crate::rewirer::{self, RewireConfig};
use crate::scenario::{self, AlphaTransform, FlowSchedule, ScenarioId, TrafficConfig};
use crate::seed;
use crate::simulator::{self, SimConfig};
use crate::textio::{fmt_f64, parse_kv, read_file, write_file};
use crate::topology::{self, giant_component, Topology};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "NETRESCALE_OUT";
const DEFAULT_OUT: &str = "netrescale-out";
const AUTO: &str = "auto";
const NONE: &str = "none";

#[derive(Parser, Debug)]
#[command(name = "netrescale", version, about = "Build and validate scaled-down replicas of weighted networks")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit marginals and build a replica with N' nodes.
    Rescale(RescaleArgs),
    /// Write topological and weighted-correlation statistics.
    Metrics(MetricsArgs),
    /// Run a packet-level simulation on an α-scaled topology.
    Simulate(SimulateArgs),
    /// Compare normalized FCT and delay distributions of two runs.
    Compare(CompareArgs),
    /// Repeat a run from its manifest.
    Rerun(RerunArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Output directory (default: $NETRESCALE_OUT or ./netrescale-out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file with defaults for any option.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Global seed; per-stage seeds are derived from it.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct RescaleArgs {
    #[command(flatten)]
    common: Common,
    /// Input edge list.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Overwrite link attributes with scenario 1 or 2 before rescaling.
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    n_target: Option<usize>,
    /// Alternative to --n-target: N' = round(alpha·N).
    #[arg(long)]
    alpha: Option<f64>,
    /// Spline smoothing parameter (spar); chosen by GCV when absent.
    #[arg(long)]
    smoothing: Option<f64>,
    #[arg(long)]
    link_sampling: Option<String>,
    /// Rewire the replica toward the input's clustering by degree.
    #[arg(long)]
    rewire: bool,
    /// Two-column (degree, clustering) target instead of the input's.
    #[arg(long)]
    rewire_target: Option<PathBuf>,
    #[arg(long)]
    rewire_tolerance: Option<f64>,
    #[arg(long)]
    rewire_max_steps: Option<usize>,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Use this many sampled BFS sources for distances and load (0: all).
    #[arg(long)]
    sample_sources: Option<usize>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Overwrite link attributes with scenario 1 or 2 first.
    #[arg(long)]
    scenario: Option<String>,
    /// key=value traffic configuration.
    #[arg(long)]
    traffic: Option<PathBuf>,
    /// Replay a saved flow trace instead of generating traffic.
    #[arg(long)]
    flows: Option<PathBuf>,
    /// Divide the replayed trace's times by alpha.
    #[arg(long)]
    stretch_trace: bool,
    /// Traffic overrides, e.g. --set lambda=0.05.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// First results directory.
    a: Option<PathBuf>,
    /// Second results directory.
    b: Option<PathBuf>,
    /// Maximum KS distance for a pass.
    #[arg(long)]
    threshold: Option<f64>,
    /// Quantile at which each sample set is trimmed before KS.
    #[arg(long)]
    trim: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RerunArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Write outputs here instead of the manifest's directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Fully resolved options of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    command: String,
    map: BTreeMap<String, String>,
}

impl Params {
    fn resolve(
        command: &str,
        defaults: &[(&str, &str)],
        config: Option<&BTreeMap<String, String>>,
        flags: Vec<(&str, Option<String>)>,
    ) -> Result<Params> {
        let mut map: BTreeMap<String, String> = defaults
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        if let Some(cfg) = config {
            for (k, v) in cfg {
                let k = k.replace('-', "_");
                if matches!(k.as_str(), "tool" | "version" | "command") {
                    continue;
                }
                if !map.contains_key(&k) && !(command == "simulate" && k.starts_with("traffic.")) {
                    return Err(Error::config(format!("unknown option {k:?} for {command}")));
                }
                map.insert(k, v.clone());
            }
        }
        for (k, v) in flags {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        }
        if map.get("out").is_some_and(|o| o == AUTO) {
            let out = std::env::var(OUT_ENV).unwrap_or_else(|_| DEFAULT_OUT.to_string());
            map.insert("out".into(), out);
        }
        Ok(Params {
            command: command.to_string(),
            map,
        })
    }

    fn raw(&self, k: &str) -> Option<&str> {
        self.map
            .get(k)
            .map(String::as_str)
            .filter(|v| *v != NONE && !v.is_empty())
    }

    fn opt<T: FromStr>(&self, k: &str) -> Result<Option<T>> {
        self.raw(k)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::config(format!("bad value {v:?} for {k}")))
            })
            .transpose()
    }

    fn req<T: FromStr>(&self, k: &str) -> Result<T> {
        self.opt(k)?
            .ok_or_else(|| Error::config(format!("missing required option {k}")))
    }

    fn path(&self, k: &str) -> Result<PathBuf> {
        self.req::<String>(k).map(PathBuf::from)
    }

    /// Replace an `auto` seed with one derived from the global seed.
    fn derive_seed(&mut self, k: &str, label: &str) -> Result<u64> {
        if self.map.get(k).is_some_and(|v| v == AUTO) {
            let s = seed::derive(self.req("seed")?, label);
            self.map.insert(k.into(), s.to_string());
        }
        self.req(k)
    }

    fn set(&mut self, k: &str, v: impl Into<String>) {
        self.map.insert(k.to_string(), v.into());
    }

    pub fn to_manifest(&self) -> String {
        let mut s = String::from("# netrescale run manifest\n");
        s.push_str("tool=netrescale\n");
        s.push_str(&format!("version={}\n", env!("CARGO_PKG_VERSION")));
        s.push_str(&format!("command={}\n", self.command));
        for (k, v) in &self.map {
            s.push_str(&format!("{k}={v}\n"));
        }
        s
    }

    fn out_dir(&self) -> Result<PathBuf> {
        self.path("out")
    }

    fn write_manifest(&self) -> Result<()> {
        write_file(&self.out_dir()?.join("manifest.txt"), &self.to_manifest())
    }
}

const RESCALE_DEFAULTS: &[(&str, &str)] = &[
    ("in", NONE),
    ("out", AUTO),
    ("seed", "1"),
    ("scenario", NONE),
    ("scenario_seed", AUTO),
    ("rescale_seed", AUTO),
    ("n_target", NONE),
    ("alpha", NONE),
    ("smoothing", NONE),
    ("extrapolation", "1"),
    ("link_sampling", "without_replacement_if_possible"),
    ("rewire", "false"),
    ("rewire_target", NONE),
    ("rewire_tolerance", "0.05"),
    ("rewire_max_steps", NONE),
    ("rewire_seed", AUTO),
];

const METRICS_DEFAULTS: &[(&str, &str)] = &[
    ("in", NONE),
    ("out", AUTO),
    ("seed", "1"),
    ("sample_sources", "0"),
    ("sample_seed", AUTO),
];

const SIMULATE_DEFAULTS: &[(&str, &str)] = &[
    ("in", NONE),
    ("out", AUTO),
    ("seed", "1"),
    ("alpha", "1"),
    ("scenario", NONE),
    ("scenario_seed", AUTO),
    ("traffic", NONE),
    ("flows", NONE),
    ("stretch_trace", "false"),
    ("ack_size", "40"),
    ("initial_rtt", "1"),
    ("min_rto", "1"),
    ("max_rto", "60"),
];

const COMPARE_DEFAULTS: &[(&str, &str)] = &[
    ("a", NONE),
    ("b", NONE),
    ("out", NONE),
    ("threshold", "0.05"),
    ("trim", "0.999"),
];

fn load_config(path: Option<&Path>) -> Result<Option<BTreeMap<String, String>>> {
    path.map(|p| parse_kv(&read_file(p)?)).transpose()
}

fn s<T: ToString>(v: &Option<T>) -> Option<String> {
    v.as_ref().map(T::to_string)
}

fn p(v: &Option<PathBuf>) -> Option<String> {
    v.as_ref().map(|p| p.display().to_string())
}

fn flag(b: bool) -> Option<String> {
    b.then(|| "true".to_string())
}

fn common_flags(c: &Common) -> Vec<(&'static str, Option<String>)> {
    vec![("out", p(&c.out)), ("seed", s(&c.seed))]
}

/// Outcome of one subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Text printed to standard output.
    pub stdout: String,
    /// Process exit code: 0 success, 1 a failed comparison verdict.
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn load_gcc(path: &Path) -> Result<Topology> {
    let t = topology::load_edge_list(path)?;
    Ok(giant_component(&t).topology)
}

fn parse_bool(p: &Params, k: &str) -> Result<bool> {
    Ok(p.opt::<bool>(k)?.unwrap_or(false))
}

pub fn cmd_rescale(mut p: Params) -> Result<Outcome> {
    let input = p.path("in")?;
    let out = p.out_dir()?;
    let scenario_seed = p.derive_seed("scenario_seed", "scenario")?;
    let rescale_seed = p.derive_seed("rescale_seed", "rescale")?;
    let rewire_seed = p.derive_seed("rewire_seed", "rewire")?;
    let mut original = load_gcc(&input)?;
    if let Some(sc) = p.opt::<ScenarioId>("scenario")? {
        original = scenario::assign_scenario(&original, sc, scenario_seed)?;
        topology::save_edge_list(&original, out.join("original.txt"))?;
    }
    let n_target = match (p.opt::<usize>("n_target")?, p.opt::<f64>("alpha")?) {
        (Some(n), _) => n,
        (None, Some(a)) => (a * original.n_nodes() as f64).round() as usize,
        (None, None) => return Err(Error::config("one of n_target or alpha is required")),
    };
    let spec = RescaleSpec {
        n_target,
        seed: rescale_seed,
        fit: FitConfig {
            smoothing: p.opt("smoothing")?,
            extrapolation: p.req("extrapolation")?,
        },
        link_sampling: p.req::<String>("link_sampling")?.parse::<LinkSampling>()?,
    };
    let r = rescaler::rescale(&original, &spec)?;
    let mut replica = r.topology;
    if let Some(sc) = original.meta_value("scenario") {
        replica = replica.with_meta("scenario", sc);
    }
    let mut meta = r.report.to_text();
    if parse_bool(&p, "rewire")? {
        let target = match p.opt::<String>("rewire_target")? {
            Some(path) => rewirer::parse_target(&read_file(Path::new(&path))?)?,
            None => metrics::clustering_by_degree(&original)
                .by_degree
                .iter()
                .map(|pt| (pt.x as u32, pt.y))
                .collect(),
        };
        let cfg = RewireConfig {
            target,
            max_steps: p.opt("rewire_max_steps")?,
            tolerance: p.req("rewire_tolerance")?,
            seed: rewire_seed,
        };
        let (rewired, rep) = rewirer::rewire_to_target(&replica, &cfg)?;
        replica = rewired;
        meta.push_str(&rep.to_text());
    }
    topology::save_edge_list(&replica, out.join("replica.txt"))?;
    write_file(&out.join("replica_meta.txt"), &meta)?;
    p.write_manifest()?;
    Ok(Outcome::ok(format!(
        "replica: {} nodes, {} links, alpha={} -> {}\n",
        replica.n_nodes(),
        replica.n_links(),
        fmt_f64(r.report.alpha),
        out.join("replica.txt").display()
    )))
}

pub fn cmd_metrics(mut p: Params) -> Result<Outcome> {
    let input = p.path("in")?;
    let out = p.out_dir()?;
    let sample_seed = p.derive_seed("sample_seed", "metrics-sample")?;
    let k: usize = p.req("sample_sources")?;
    let sample = (k > 0).then_some((k, sample_seed));
    let t = load_gcc(&input)?;

    let summary = metrics::summary(&t, sample)?;
    write_file(&out.join("summary.txt"), &summary.to_text())?;
    let ccdf = metrics::degree_distribution(&t)?;
    let mut text = String::from("# degree ccdf\n# degree ccdf count\n");
    for pt in ccdf.points() {
        text.push_str(&format!("{} {} {}\n", fmt_f64(pt.x), fmt_f64(pt.ccdf), pt.count));
    }
    write_file(&out.join("degree_ccdf.txt"), &text)?;
    write_file(&out.join("distance.txt"), &metrics::distance_distribution(&t, sample)?.to_text())?;
    let load = metrics::betweenness_load(&t, sample)?;
    write_file(&out.join("load.txt"), &load.to_text("load by degree", true))?;
    write_file(&out.join("load_normalized.txt"), &load.normalized().to_text("normalized load by degree", true))?;
    let clustering = metrics::clustering_by_degree(&t);
    write_file(&out.join("clustering.txt"), &rewirer::format_target(&clustering))?;
    if t.is_weighted() {
        for (name, w) in [("knn_capacity", Weight::Capacity), ("knn_delay", Weight::Delay)] {
            let c = metrics::weighted_neighbor_degree(&t, w)?;
            write_file(&out.join(format!("{name}.txt")), &c.to_text(name, true))?;
            write_file(
                &out.join(format!("{name}_normalized.txt")),
                &c.normalized().to_text(&format!("{name} normalized"), true),
            )?;
        }
    }
    p.write_manifest()?;
    Ok(Outcome::ok(summary.to_text()))
}

fn traffic_for(p: &Params, t: &Topology, alpha: f64) -> Result<TrafficConfig> {
    let scenario = match p.opt::<ScenarioId>("scenario")? {
        Some(s) => Some(s),
        None => t.meta_value("scenario").map(str::parse).transpose()?,
    };
    let mut cfg = match scenario {
        Some(s) => TrafficConfig::for_scenario(s, alpha),
        None => TrafficConfig {
            horizon: 100.0 / alpha,
            ..TrafficConfig::default()
        },
    };
    cfg.seed = seed::derive(p.req("seed")?, "traffic");
    if let Some(path) = p.opt::<String>("traffic")? {
        cfg = cfg.with_overrides(&parse_kv(&read_file(Path::new(&path))?)?)?;
    }
    let overrides: BTreeMap<String, String> = p
        .map
        .iter()
        .filter_map(|(k, v)| k.strip_prefix("traffic.").map(|k| (k.to_string(), v.clone())))
        .collect();
    cfg.with_overrides(&overrides)
}

pub fn cmd_simulate(mut p: Params) -> Result<Outcome> {
    let input = p.path("in")?;
    let out = p.out_dir()?;
    let alpha: f64 = p.req("alpha")?;
    let transform = AlphaTransform::new(alpha)?;
    let scenario_seed = p.derive_seed("scenario_seed", "scenario")?;
    let mut t = topology::load_edge_list(&input)?;
    if let Some(sc) = p.opt::<ScenarioId>("scenario")? {
        t = scenario::assign_scenario(&t, sc, scenario_seed)?;
    }
    let traffic = traffic_for(&p, &t, alpha)?;
    for (k, v) in traffic.to_kv() {
        p.set(&format!("traffic.{k}"), v);
    }
    let t = scenario::apply_alpha_transform(&t, transform)?;
    let schedule = match p.opt::<String>("flows")? {
        Some(path) => {
            let s = FlowSchedule::from_text(&read_file(Path::new(&path))?)?;
            if parse_bool(&p, "stretch_trace")? {
                s.stretched(alpha)
            } else {
                s
            }
        }
        None => scenario::build_traffic(&t, &traffic)?,
    };
    let cfg = SimConfig {
        ack_size: p.req("ack_size")?,
        initial_rtt: p.req("initial_rtt")?,
        min_rto: p.req("min_rto")?,
        max_rto: p.req("max_rto")?,
        ..SimConfig::from_traffic(&traffic, alpha)
    };
    let r = simulator::run(&t, &schedule, &cfg)?;
    write_file(&out.join("flows.txt"), &schedule.to_text())?;
    r.write_dir(&out)?;
    p.write_manifest()?;
    Ok(Outcome::ok(r.summary_text()))
}

pub fn cmd_compare(p: Params) -> Result<Outcome> {
    let a = analysis::load_results(&p.path("a")?)?;
    let b = analysis::load_results(&p.path("b")?)?;
    let c = analysis::compare(&a, &b, p.req("threshold")?, p.req("trim")?)?;
    let report = c.to_text();
    if p.raw("out").is_some() {
        write_file(&p.out_dir()?.join("report.txt"), &report)?;
        p.write_manifest()?;
    }
    Ok(Outcome {
        stdout: report,
        code: if c.pass() { 0 } else { 1 },
    })
}

fn dispatch(p: Params) -> Result<Outcome> {
    match p.command.as_str() {
        "rescale" => cmd_rescale(p),
        "metrics" => cmd_metrics(p),
        "simulate" => cmd_simulate(p),
        "compare" => cmd_compare(p),
        other => Err(Error::config(format!("unknown command {other:?} in manifest"))),
    }
}

fn defaults_for(command: &str) -> Result<&'static [(&'static str, &'static str)]> {
    Ok(match command {
        "rescale" => RESCALE_DEFAULTS,
        "metrics" => METRICS_DEFAULTS,
        "simulate" => SIMULATE_DEFAULTS,
        "compare" => COMPARE_DEFAULTS,
        other => return Err(Error::config(format!("unknown command {other:?}"))),
    })
}

/// Resolve a parsed command line into parameters.
fn params_of(cli: Cli) -> Result<Params> {
    match cli.command {
        Command::Rescale(a) => {
            let mut f = common_flags(&a.common);
            f.extend([
                ("in", p(&a.input)),
                ("scenario", a.scenario.clone()),
                ("n_target", s(&a.n_target)),
                ("alpha", s(&a.alpha)),
                ("smoothing", s(&a.smoothing)),
                ("link_sampling", a.link_sampling.clone()),
                ("rewire", flag(a.rewire)),
                ("rewire_target", p(&a.rewire_target)),
                ("rewire_tolerance", s(&a.rewire_tolerance)),
                ("rewire_max_steps", s(&a.rewire_max_steps)),
            ]);
            let cfg = load_config(a.common.config.as_deref())?;
            Params::resolve("rescale", RESCALE_DEFAULTS, cfg.as_ref(), f)
        }
        Command::Metrics(a) => {
            let mut f = common_flags(&a.common);
            f.extend([("in", p(&a.input)), ("sample_sources", s(&a.sample_sources))]);
            let cfg = load_config(a.common.config.as_deref())?;
            Params::resolve("metrics", METRICS_DEFAULTS, cfg.as_ref(), f)
        }
        Command::Simulate(a) => {
            let mut f = common_flags(&a.common);
            f.extend([
                ("in", p(&a.input)),
                ("alpha", s(&a.alpha)),
                ("scenario", a.scenario.clone()),
                ("traffic", p(&a.traffic)),
                ("flows", p(&a.flows)),
                ("stretch_trace", flag(a.stretch_trace)),
            ]);
            let cfg = load_config(a.common.config.as_deref())?;
            let mut params = Params::resolve("simulate", SIMULATE_DEFAULTS, cfg.as_ref(), f)?;
            for kv in &a.set {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
                params.set(&format!("traffic.{}", k.trim()), v.trim());
            }
            Ok(params)
        }
        Command::Compare(a) => {
            let f = vec![
                ("a", p(&a.a)),
                ("b", p(&a.b)),
                ("threshold", s(&a.threshold)),
                ("trim", s(&a.trim)),
                ("out", p(&a.out)),
            ];
            let cfg = load_config(a.config.as_deref())?;
            Params::resolve("compare", COMPARE_DEFAULTS, cfg.as_ref(), f)
        }
        Command::Rerun(a) => {
            let m = parse_kv(&read_file(&a.manifest)?)?;
            let command = m
                .get("command")
                .ok_or_else(|| Error::config("manifest has no command"))?
                .clone();
            let f = vec![("out", p(&a.out))];
            Params::resolve(&command, defaults_for(&command)?, Some(&m), f)
        }
    }
}

/// Parse `args` (including the program name) and run the subcommand.
pub fn run<I, T>(args: I) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::config(e.to_string()))?;
    dispatch(params_of(cli)?)
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match params_of(cli).and_then(dispatch) {
        Ok(o) => {
            print!("{}", o.stdout);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_defaults_config_flags() {
        let cfg = BTreeMap::from([("n-target".to_string(), "50".to_string()), ("seed".to_string(), "9".to_string())]);
        let p = Params::resolve(
            "rescale",
            RESCALE_DEFAULTS,
            Some(&cfg),
            vec![("seed", Some("4".into())), ("alpha", None)],
        )
        .unwrap();
        assert_eq!(p.req::<usize>("n_target").unwrap(), 50);
        assert_eq!(p.req::<u64>("seed").unwrap(), 4);
        assert_eq!(p.opt::<f64>("alpha").unwrap(), None);
        let bad = BTreeMap::from([("bogus".to_string(), "1".to_string())]);
        assert!(Params::resolve("rescale", RESCALE_DEFAULTS, Some(&bad), vec![]).is_err());
    }

    #[test]
    fn manifest_round_trips_through_resolve() {
        let mut p = Params::resolve("metrics", METRICS_DEFAULTS, None, vec![("out", Some("x".into()))]).unwrap();
        p.derive_seed("sample_seed", "metrics-sample").unwrap();
        let m = parse_kv(&p.to_manifest()).unwrap();
        let q = Params::resolve("metrics", METRICS_DEFAULTS, Some(&m), vec![]).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn missing_input_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.txt");
        let r = run([
            "netrescale",
            "rescale",
            "--in",
            missing.to_str().unwrap(),
            "--n-target",
            "10",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(matches!(r, Err(Error::Io { .. })));
        assert!(run(["netrescale", "rescale", "--n-target", "x"]).is_err());
    }
}
