//! Normalized performance samples and their comparison across scales.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::simulator::SimResults;
use crate::textio::{fmt_f64, parse_kv, read_file};

/// Samples in seconds multiplied by α.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedSamples {
    pub samples: Vec<f64>,
    pub alpha: f64,
    pub label: String,
}

impl NormalizedSamples {
    pub fn from_raw(raw: &[f64], alpha: f64, label: impl Into<String>) -> Self {
        NormalizedSamples {
            samples: raw.iter().map(|&x| x * alpha).collect(),
            alpha,
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn sorted(&self) -> Result<Vec<f64>> {
        if self.samples.is_empty() {
            return Err(Error::Empty);
        }
        let mut v = self.samples.clone();
        v.sort_by(f64::total_cmp);
        Ok(v)
    }

    /// Samples at or below this set's own `q` quantile.
    pub fn trimmed(&self, q: f64) -> Result<Self> {
        let cut = percentile(self, q)?;
        Ok(NormalizedSamples {
            samples: self.samples.iter().copied().filter(|&x| x <= cut).collect(),
            alpha: self.alpha,
            label: self.label.clone(),
        })
    }
}

/// Normalized flow completion times and packet delays.
pub fn normalize(r: &SimResults) -> (NormalizedSamples, NormalizedSamples) {
    let fct: Vec<f64> = r.fct.iter().map(|&(_, t)| t).collect();
    (
        NormalizedSamples::from_raw(&fct, r.alpha, "fct"),
        NormalizedSamples::from_raw(&r.delays, r.alpha, "delay"),
    )
}

/// Fraction of samples `≥ x`.
pub fn ccdf_at(s: &NormalizedSamples, x: f64) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::Empty);
    }
    Ok(s.samples.iter().filter(|&&v| v >= x).count() as f64 / s.len() as f64)
}

/// Exact step CCDF: each distinct value with the fraction of samples `≥` it.
pub fn step_ccdf(s: &NormalizedSamples) -> Result<Vec<(f64, f64)>> {
    let v = s.sorted()?;
    let n = v.len() as f64;
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        out.push((v[i], (v.len() - i) as f64 / n));
        let x = v[i];
        while i < v.len() && v[i] == x {
            i += 1;
        }
    }
    Ok(out)
}

/// CCDF on `n_points` log-spaced points spanning the positive samples.
pub fn ccdf(s: &NormalizedSamples, n_points: usize) -> Result<Vec<(f64, f64)>> {
    let v = s.sorted()?;
    let lo = v.iter().copied().find(|&x| x > 0.0).ok_or(Error::NonPositive(v[v.len() - 1]))?;
    let hi = v[v.len() - 1];
    let n = v.len() as f64;
    let m = n_points.max(2);
    Ok((0..m)
        .map(|i| {
            let x = if hi > lo {
                (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (m - 1) as f64).exp()
            } else {
                lo
            };
            let below = v.partition_point(|&y| y < x);
            (x, (v.len() - below) as f64 / n)
        })
        .collect())
}

pub fn format_curve(header: &str, pts: &[(f64, f64)]) -> String {
    let mut s = format!("# {header}\n# x ccdf\n");
    for (x, y) in pts {
        let _ = writeln!(s, "{} {}", fmt_f64(*x), fmt_f64(*y));
    }
    s
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_distance(a: &NormalizedSamples, b: &NormalizedSamples) -> Result<f64> {
    let (x, y) = (a.sorted()?, b.sorted()?);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] == v {
            i += 1;
        }
        while j < y.len() && y[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// Large-sample critical value of the two-sample KS statistic at `level`.
pub fn ks_critical(n: usize, m: usize, level: f64) -> f64 {
    let c = (-(level / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Linearly interpolated quantile, `q` in `[0, 1]`.
pub fn percentile(s: &NormalizedSamples, q: f64) -> Result<f64> {
    let v = s.sorted()?;
    let h = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let (lo, hi) = (h.floor() as usize, h.ceil() as usize);
    Ok(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
}

/// Normalized samples read back from a results directory.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedResults {
    pub fct: NormalizedSamples,
    pub delay: NormalizedSamples,
}

fn second_column(text: &str, path: &Path) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v = t
            .split_whitespace()
            .nth(1)
            .and_then(|c| c.parse::<f64>().ok())
            .ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected two columns in {}", path.display()),
            })?;
        out.push(v);
    }
    Ok(out)
}

pub fn load_results(dir: &Path) -> Result<LoadedResults> {
    let summary = parse_kv(&read_file(&dir.join("summary.txt"))?)?;
    let alpha: f64 = summary
        .get("alpha")
        .and_then(|a| a.parse().ok())
        .ok_or_else(|| Error::config(format!("no alpha in {}", dir.join("summary.txt").display())))?;
    let fct_path = dir.join("fct.txt");
    let delay_path = dir.join("delay.txt");
    let fct = second_column(&read_file(&fct_path)?, &fct_path)?;
    let delay = second_column(&read_file(&delay_path)?, &delay_path)?;
    Ok(LoadedResults {
        fct: NormalizedSamples::from_raw(&fct, alpha, "fct"),
        delay: NormalizedSamples::from_raw(&delay, alpha, "delay"),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricComparison {
    pub label: String,
    pub n_a: usize,
    pub n_b: usize,
    pub ks: f64,
    pub ks_critical_1pct: f64,
    pub p99: (f64, f64),
    pub p999: (f64, f64),
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub threshold: f64,
    pub trim: f64,
    pub metrics: Vec<MetricComparison>,
}

impl Comparison {
    pub fn pass(&self) -> bool {
        self.metrics.iter().all(|m| m.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# netrescale comparison\n");
        let _ = writeln!(s, "threshold={}", fmt_f64(self.threshold));
        let _ = writeln!(s, "trim_quantile={}", fmt_f64(self.trim));
        for m in &self.metrics {
            let l = &m.label;
            let _ = writeln!(s, "{l}_n_a={}", m.n_a);
            let _ = writeln!(s, "{l}_n_b={}", m.n_b);
            let _ = writeln!(s, "{l}_ks={}", fmt_f64(m.ks));
            let _ = writeln!(s, "{l}_ks_critical_1pct={}", fmt_f64(m.ks_critical_1pct));
            let _ = writeln!(s, "{l}_p99_a={}", fmt_f64(m.p99.0));
            let _ = writeln!(s, "{l}_p99_b={}", fmt_f64(m.p99.1));
            let _ = writeln!(s, "{l}_p999_a={}", fmt_f64(m.p999.0));
            let _ = writeln!(s, "{l}_p999_b={}", fmt_f64(m.p999.1));
            let _ = writeln!(s, "{l}_pass={}", m.pass);
        }
        let _ = writeln!(s, "verdict={}", if self.pass() { "pass" } else { "fail" });
        s
    }
}

/// KS distance between two sample sets after each is trimmed at its own
/// `trim` quantile; tail percentiles come from the untrimmed sets.
pub fn compare_samples(a: &NormalizedSamples, b: &NormalizedSamples, threshold: f64, trim: f64) -> Result<MetricComparison> {
    let (ta, tb) = if trim < 1.0 {
        (a.trimmed(trim)?, b.trimmed(trim)?)
    } else {
        (a.clone(), b.clone())
    };
    let ks = ks_distance(&ta, &tb)?;
    Ok(MetricComparison {
        label: a.label.clone(),
        n_a: a.len(),
        n_b: b.len(),
        ks,
        ks_critical_1pct: ks_critical(ta.len(), tb.len(), 0.01),
        p99: (percentile(a, 0.99)?, percentile(b, 0.99)?),
        p999: (percentile(a, 0.999)?, percentile(b, 0.999)?),
        pass: ks <= threshold,
    })
}

pub fn compare(a: &LoadedResults, b: &LoadedResults, threshold: f64, trim: f64) -> Result<Comparison> {
    Ok(Comparison {
        threshold,
        trim,
        metrics: vec![
            compare_samples(&a.fct, &b.fct, threshold, trim)?,
            compare_samples(&a.delay, &b.delay, threshold, trim)?,
        ],
    })
}
