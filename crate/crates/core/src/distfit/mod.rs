//! Smoothed, sampleable marginal distributions.
//!
//! An empirical CCDF is fitted in `(ln x, ln CCDF)` space with a cubic
//! smoothing spline, projected onto non-increasing functions, and then
//! sampled by inverse transform. Discrete data (degrees, lattice-valued
//! attributes) keep their discreteness: the smoothed CCDF is evaluated only on
//! the support and sampling returns support points.

pub mod spline;

use std::fmt::Write as _;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::seed;
use crate::textio::fmt_f64;
use spline::CubicSpline;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CcdfPoint {
    pub x: f64,
    /// Fraction of values `>= x`.
    pub ccdf: f64,
    pub count: usize,
}

/// Empirical `P(X >= x)` at each distinct value, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCcdf {
    points: Vec<CcdfPoint>,
    n: usize,
}

impl EmpiricalCcdf {
    pub fn points(&self) -> &[CcdfPoint] {
        &self.points
    }

    pub fn n_samples(&self) -> usize {
        self.n
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }

    /// `P(X >= x)` as a right-continuous step function.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.points.partition_point(|p| p.x < x);
        self.points.get(i).map_or(0.0, |p| p.ccdf)
    }
}

pub fn empirical_ccdf(values: &[f64]) -> Result<EmpiricalCcdf> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(&bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::NonPositive(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut points = Vec::new();
    let mut i = 0;
    while i < n {
        let x = sorted[i];
        let j = i + sorted[i..].partition_point(|&v| v == x);
        points.push(CcdfPoint {
            x,
            ccdf: (n - i) as f64 / n as f64,
            count: j - i,
        });
        i = j;
    }
    Ok(EmpiricalCcdf { points, n })
}

/// Set of values a fitted distribution may produce.
#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    Continuous,
    /// Every integer in the domain.
    Integer,
    /// Only the listed values (ascending).
    Atoms(Vec<f64>),
}

impl Support {
    /// Integer when all values are whole numbers, the observed atoms when each
    /// distinct value repeats four times on average, otherwise continuous.
    pub fn infer(values: &[f64]) -> Support {
        if values.iter().all(|v| v.fract() == 0.0) {
            return Support::Integer;
        }
        let mut d = values.to_vec();
        d.sort_by(f64::total_cmp);
        d.dedup();
        if d.len() * 4 <= values.len() {
            Support::Atoms(d)
        } else {
            Support::Continuous
        }
    }

    fn is_discrete(&self) -> bool {
        !matches!(self, Support::Continuous)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitConfig {
    /// Smoothing level on the `spar` scale; `None` selects it by GCV.
    pub smoothing: Option<f64>,
    /// Upper domain bound as a multiple of the largest observation.
    pub extrapolation: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            smoothing: None,
            extrapolation: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    PointMass,
    /// Fewer than four distinct values: the empirical step CCDF itself.
    Step,
    Spline {
        spline: CubicSpline,
        spar: f64,
        lambda: f64,
    },
}

const CONTINUOUS_GRID: usize = 2049;
const MAX_INTEGER_TABLE: f64 = 2e6;

/// Fitted marginal distribution. Immutable; sampling is pure given a seed.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothedDist {
    shape: Shape,
    support: Support,
    lo: f64,
    data_hi: f64,
    hi: f64,
    extrapolation: f64,
    /// Evaluation table: ascending x with non-increasing `ln P(X >= x)`.
    table_x: Vec<f64>,
    table_lc: Vec<f64>,
}

impl SmoothedDist {
    pub fn point_mass(x: f64) -> Self {
        SmoothedDist {
            shape: Shape::PointMass,
            support: Support::Atoms(vec![x]),
            lo: x,
            data_hi: x,
            hi: x,
            extrapolation: 1.0,
            table_x: vec![x],
            table_lc: vec![0.0],
        }
    }

    pub fn is_point_mass(&self) -> bool {
        self.shape == Shape::PointMass
    }

    /// True when too few distinct values were available for a spline.
    pub fn is_fallback(&self) -> bool {
        self.shape == Shape::Step
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn spar(&self) -> Option<f64> {
        match &self.shape {
            Shape::Spline { spar, .. } => Some(*spar),
            _ => None,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match &self.shape {
            Shape::Spline { lambda, .. } => Some(*lambda),
            _ => None,
        }
    }

    fn scaled(&self, x: f64) -> f64 {
        (x.ln() - self.lo.ln()) / (self.data_hi.ln() - self.lo.ln())
    }

    fn build_table(&mut self) {
        let Shape::Spline { spline, .. } = &self.shape else {
            return;
        };
        let xs: Vec<f64> = match &self.support {
            Support::Continuous => {
                let (a, b) = (self.lo.ln(), self.hi.ln());
                let last = (CONTINUOUS_GRID - 1) as f64;
                (0..CONTINUOUS_GRID)
                    .map(|i| {
                        if i == 0 {
                            self.lo
                        } else if i == CONTINUOUS_GRID - 1 {
                            self.hi
                        } else {
                            (a + (b - a) * i as f64 / last).exp()
                        }
                    })
                    .collect()
            }
            Support::Integer => {
                let (a, b) = (self.lo.ceil(), self.hi.floor());
                (a as u64..=b as u64).map(|k| k as f64).collect()
            }
            Support::Atoms(a) => a.iter().copied().filter(|&x| x <= self.hi).collect(),
        };
        let raw: Vec<f64> = xs.iter().map(|&x| spline.eval(self.scaled(x))).collect();
        let mut lc = isotonic_non_increasing(&raw);
        for v in &mut lc {
            *v = v.min(0.0);
        }
        lc[0] = 0.0;
        self.table_x = xs;
        self.table_lc = lc;
    }

    /// `P(X >= x)`.
    pub fn ccdf(&self, x: f64) -> f64 {
        if x <= self.table_x[0] {
            return 1.0;
        }
        if self.support.is_discrete() || self.table_x.len() == 1 {
            let i = self.table_x.partition_point(|&a| a < x);
            return self.table_lc.get(i).map_or(0.0, |l| l.exp());
        }
        if x > self.hi {
            return 0.0;
        }
        let j = self.table_x.partition_point(|&a| a < x).max(1);
        let (x0, x1) = (self.table_x[j - 1].ln(), self.table_x[j].ln());
        let (l0, l1) = (self.table_lc[j - 1], self.table_lc[j]);
        let t = if x1 > x0 { (x.ln() - x0) / (x1 - x0) } else { 1.0 };
        (l0 + t * (l1 - l0)).exp()
    }

    /// `P(X > x)`.
    pub fn ccdf_gt(&self, x: f64) -> f64 {
        if self.support.is_discrete() || self.table_x.len() == 1 {
            let i = self.table_x.partition_point(|&a| a <= x);
            return self.table_lc.get(i).map_or(0.0, |l| l.exp());
        }
        if x >= self.hi {
            0.0
        } else {
            self.ccdf(x)
        }
    }

    /// Inverse transform of a uniform draw `u` in `(0, 1]`: the value `x`
    /// with `P(X >= x) = u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let lu = u.ln();
        // First table entry whose CCDF falls below u; entry 0 always has CCDF 1.
        let j = self.table_lc.partition_point(|&l| l >= lu);
        if self.support.is_discrete() || self.table_x.len() == 1 {
            return self.table_x[j - 1];
        }
        if j == self.table_x.len() {
            return self.hi;
        }
        let (x0, x1) = (self.table_x[j - 1].ln(), self.table_x[j].ln());
        let (l0, l1) = (self.table_lc[j - 1], self.table_lc[j]);
        let t = ((lu - l0) / (l1 - l0)).clamp(0.0, 1.0);
        (x0 + t * (x1 - x0)).exp()
    }

    pub fn sample_with(&self, rng: &mut seed::Rng) -> f64 {
        let u = 1.0 - rng.random::<f64>();
        self.quantile(u)
    }

    /// `n` i.i.d. draws; identical for identical seeds.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = seed::rng(seed);
        (0..n).map(|_| self.sample_with(&mut rng)).collect()
    }

    /// One-sample Kolmogorov–Smirnov distance between `samples` and this
    /// distribution, exact for both continuous and discrete support.
    pub fn ks_statistic(&self, samples: &[f64]) -> f64 {
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len() as f64;
        let mut d: f64 = 0.0;
        let mut i = 0;
        while i < s.len() {
            let x = s[i];
            let j = i + s[i..].partition_point(|&v| v == x);
            let emp_ge = (s.len() - i) as f64 / n;
            let emp_gt = (s.len() - j) as f64 / n;
            d = d
                .max((emp_ge - self.ccdf(x)).abs())
                .max((emp_gt - self.ccdf_gt(x)).abs());
            i = j;
        }
        d
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# netrescale smoothed distribution\n");
        let shape = match &self.shape {
            Shape::PointMass => "point",
            Shape::Step => "step",
            Shape::Spline { .. } => "spline",
        };
        let join = |v: &[f64]| v.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "shape {shape}");
        let support = match &self.support {
            Support::Continuous => "continuous".to_string(),
            Support::Integer => "integer".to_string(),
            Support::Atoms(a) => format!("atoms {}", join(a)),
        };
        let _ = writeln!(s, "support {support}");
        let _ = writeln!(s, "lo {}", fmt_f64(self.lo));
        let _ = writeln!(s, "data_hi {}", fmt_f64(self.data_hi));
        let _ = writeln!(s, "extrapolation {}", fmt_f64(self.extrapolation));
        match &self.shape {
            Shape::Spline {
                spline,
                spar,
                lambda,
            } => {
                let _ = writeln!(s, "spar {}", fmt_f64(*spar));
                let _ = writeln!(s, "lambda {}", fmt_f64(*lambda));
                let _ = writeln!(s, "breakpoints {}", join(spline.breakpoints()));
                let _ = writeln!(s, "coefs {}", join(spline.coefs()));
            }
            Shape::Step => {
                let ccdf: Vec<f64> = self.table_lc.iter().map(|l| l.exp()).collect();
                let _ = writeln!(s, "ccdf {}", join(&ccdf));
            }
            Shape::PointMass => {}
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut fields = std::collections::HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once(' ').unwrap_or((line, ""));
            fields.insert(k.to_string(), (i + 1, v.trim().to_string()));
        }
        let get = |k: &str| {
            fields.get(k).ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("missing field {k:?}"),
            })
        };
        let nums = |k: &str| -> Result<Vec<f64>> {
            let (line, v) = get(k)?;
            v.split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|_| Error::Parse {
                        line: *line,
                        message: format!("bad number {t:?}"),
                    })
                })
                .collect()
        };
        let num = |k: &str| -> Result<f64> {
            nums(k)?.first().copied().ok_or_else(|| Error::Parse {
                line: get(k).map(|f| f.0).unwrap_or(0),
                message: format!("empty field {k:?}"),
            })
        };
        let (sline, sval) = get("support")?;
        let support = match sval.split_whitespace().next() {
            Some("continuous") => Support::Continuous,
            Some("integer") => Support::Integer,
            Some("atoms") => Support::Atoms(
                sval.split_whitespace()
                    .skip(1)
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Parse {
                        line: *sline,
                        message: "bad atom".into(),
                    })?,
            ),
            other => {
                return Err(Error::Parse {
                    line: *sline,
                    message: format!("unknown support {other:?}"),
                })
            }
        };
        let lo = num("lo")?;
        let data_hi = num("data_hi")?;
        let extrapolation = num("extrapolation")?;
        let (shape_line, shape) = get("shape")?;
        match shape.as_str() {
            "point" => Ok(SmoothedDist::point_mass(lo)),
            "step" => {
                let Support::Atoms(atoms) = support.clone() else {
                    return Err(Error::Parse {
                        line: *shape_line,
                        message: "step shape needs atom support".into(),
                    });
                };
                let ccdf = nums("ccdf")?;
                if ccdf.len() != atoms.len() {
                    return Err(Error::LengthMismatch("step ccdf vs atoms".into()));
                }
                Ok(SmoothedDist {
                    shape: Shape::Step,
                    support,
                    lo,
                    data_hi,
                    hi: data_hi,
                    extrapolation,
                    table_x: atoms,
                    table_lc: ccdf.iter().map(|c| c.ln()).collect(),
                })
            }
            "spline" => {
                let bp = nums("breakpoints")?;
                let coefs = nums("coefs")?;
                if bp.len() < 2 || coefs.len() != bp.len() + 2 {
                    return Err(Error::LengthMismatch("spline coefficients".into()));
                }
                let mut d = SmoothedDist {
                    shape: Shape::Spline {
                        spline: CubicSpline::new(bp, coefs),
                        spar: num("spar")?,
                        lambda: num("lambda")?,
                    },
                    support,
                    lo,
                    data_hi,
                    hi: data_hi * extrapolation,
                    extrapolation,
                    table_x: Vec::new(),
                    table_lc: Vec::new(),
                };
                d.build_table();
                Ok(d)
            }
            other => Err(Error::Parse {
                line: *shape_line,
                message: format!("unknown shape {other:?}"),
            }),
        }
    }
}

/// Fit a smoothed distribution to an empirical CCDF.
///
/// One distinct value gives a point mass; two or three give the step CCDF
/// (flagged through [`SmoothedDist::is_fallback`]).
pub fn fit_smoothing_spline(e: &EmpiricalCcdf, cfg: &FitConfig, support: Support) -> SmoothedDist {
    let pts = e.points();
    let lo = pts[0].x;
    let data_hi = pts[pts.len() - 1].x;
    if pts.len() == 1 {
        return SmoothedDist::point_mass(lo);
    }
    if pts.len() < 4 {
        return SmoothedDist {
            shape: Shape::Step,
            support: Support::Atoms(e.xs()),
            lo,
            data_hi,
            hi: data_hi,
            extrapolation: 1.0,
            table_x: e.xs(),
            table_lc: pts.iter().map(|p| p.ccdf.ln()).collect(),
        };
    }
    let span = data_hi.ln() - lo.ln();
    let u: Vec<f64> = pts.iter().map(|p| (p.x.ln() - lo.ln()) / span).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.ccdf.ln()).collect();
    let fit = spline::fit(&u, &y, cfg.smoothing);
    let extrapolation = cfg.extrapolation.max(1.0);
    let hi = data_hi * extrapolation;
    let support = match support {
        Support::Integer if hi - lo > MAX_INTEGER_TABLE => Support::Atoms(e.xs()),
        s => s,
    };
    let mut d = SmoothedDist {
        shape: Shape::Spline {
            spline: fit.spline,
            spar: fit.spar,
            lambda: fit.lambda,
        },
        support,
        lo,
        data_hi,
        hi,
        extrapolation,
        table_x: Vec::new(),
        table_lc: Vec::new(),
    };
    d.build_table();
    d
}

/// Convenience: empirical CCDF of `values`, fitted with an inferred support.
pub fn fit_values(values: &[f64], cfg: &FitConfig) -> Result<SmoothedDist> {
    let e = empirical_ccdf(values)?;
    Ok(fit_smoothing_spline(&e, cfg, Support::infer(values)))
}

/// Least-squares projection onto non-increasing sequences (pool adjacent
/// violators).
pub fn isotonic_non_increasing(y: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(y.len());
    for &v in y {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (m2, c2) = blocks[blocks.len() - 1];
            let (m1, c1) = blocks[blocks.len() - 2];
            if m1 >= m2 {
                break;
            }
            blocks.pop();
            let c = c1 + c2;
            *blocks.last_mut().unwrap() = ((m1 * c1 as f64 + m2 * c2 as f64) / c as f64, c);
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, c)| std::iter::repeat_n(m, c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empirical_ccdf_by_hand() {
        let e = empirical_ccdf(&[1.0, 1.0, 2.0, 4.0]).unwrap();
        let got: Vec<(f64, f64)> = e.points().iter().map(|p| (p.x, p.ccdf)).collect();
        assert_eq!(got, vec![(1.0, 1.0), (2.0, 0.5), (4.0, 0.25)]);
        assert_eq!(e.points()[0].count, 2);
        let single = empirical_ccdf(&[5.0]).unwrap();
        assert_eq!(single.points(), &[CcdfPoint { x: 5.0, ccdf: 1.0, count: 1 }]);
    }

    #[test]
    fn empirical_ccdf_errors() {
        assert!(matches!(empirical_ccdf(&[]), Err(Error::Empty)));
        assert!(matches!(empirical_ccdf(&[1.0, 0.0]), Err(Error::NonPositive(_))));
        assert!(matches!(empirical_ccdf(&[1.0, f64::NAN]), Err(Error::NonPositive(_))));
    }

    #[test]
    fn point_mass_samples_constant() {
        let e = empirical_ccdf(&[5.0; 7]).unwrap();
        let d = fit_smoothing_spline(&e, &FitConfig::default(), Support::Integer);
        assert!(d.is_point_mass());
        assert_eq!(d.sample(3, 1), vec![5.0, 5.0, 5.0]);
    }

    #[test]
    fn few_points_fall_back_to_step() {
        let e = empirical_ccdf(&[1.0, 2.0, 2.0, 3.0]).unwrap();
        let d = fit_smoothing_spline(&e, &FitConfig::default(), Support::Continuous);
        assert!(d.is_fallback());
        assert_eq!(d.ccdf(2.0), 0.75);
        assert_eq!(d.ccdf_gt(2.0), 0.25);
        assert!(d.sample(100, 3).iter().all(|v| [1.0, 2.0, 3.0].contains(v)));
    }

    #[test]
    fn exact_power_law_is_reproduced() {
        // 50 support points of x^-1.1 on [1, 1000], log-spaced.
        let pts: Vec<CcdfPoint> = (0..50)
            .map(|i| {
                let x = 1000f64.powf(f64::from(i) / 49.0);
                CcdfPoint { x, ccdf: x.powf(-1.1), count: 1 }
            })
            .collect();
        let e = EmpiricalCcdf { points: pts.clone(), n: 50 };
        let d = fit_smoothing_spline(&e, &FitConfig::default(), Support::Continuous);
        for p in &pts {
            let rel = (d.ccdf(p.x) - p.ccdf).abs() / p.ccdf;
            assert!(rel < 0.02, "x={} rel={rel}", p.x);
        }
    }

    #[test]
    fn uniform_delays_ccdf_at_midpoint() {
        let v = (0..5000)
            .map(|i| 1.0 + 499.0 * (f64::from(i) + 0.5) / 5000.0)
            .collect::<Vec<_>>();
        let d = fit_values(&v, &FitConfig::default()).unwrap();
        assert_eq!(*d.support(), Support::Continuous);
        let c = d.ccdf(250.0);
        assert!((c - 0.5).abs() < 0.05, "ccdf(250) = {c}");
    }

    #[test]
    fn discrete_quantile_matches_ccdf() {
        let v: Vec<f64> = (1..=40).flat_map(|k| std::iter::repeat_n(f64::from(k), (400 / k) as usize)).collect();
        let d = fit_values(&v, &FitConfig::default()).unwrap();
        assert_eq!(*d.support(), Support::Integer);
        for k in 1..=40 {
            let c = d.ccdf(f64::from(k));
            // Largest support point whose CCDF still covers u.
            assert_eq!(d.quantile(c), f64::from(k));
        }
        assert_eq!(d.quantile(1.0), 1.0);
    }

    #[test]
    fn text_roundtrip_reproduces_distribution() {
        let v: Vec<f64> = (1..=300).map(|i| (f64::from(i) * 0.37).exp().min(1e6).max(1.0)).collect();
        for d in [
            fit_values(&v, &FitConfig::default()).unwrap(),
            fit_values(&[1.0, 2.0, 2.0], &FitConfig::default()).unwrap(),
            SmoothedDist::point_mass(3.0),
        ] {
            let back = SmoothedDist::from_text(&d.to_text()).unwrap();
            assert_eq!(back, d);
            assert_eq!(back.sample(50, 9), d.sample(50, 9));
        }
    }

    #[test]
    fn extrapolation_widens_domain() {
        let v: Vec<f64> = (1..=200).map(f64::from).collect();
        let cfg = FitConfig { smoothing: None, extrapolation: 2.0 };
        let d = fit_values(&v, &cfg).unwrap();
        assert_eq!(d.domain(), (1.0, 400.0));
        assert!(d.ccdf(300.0) > 0.0);
    }

    #[test]
    fn isotonic_pools_violators() {
        assert_eq!(isotonic_non_increasing(&[3.0, 1.0, 2.0, 0.0]), vec![3.0, 1.5, 1.5, 0.0]);
        assert_eq!(isotonic_non_increasing(&[1.0, 2.0]), vec![1.5, 1.5]);
    }

    proptest! {
        #[test]
        fn fitted_ccdf_is_monotone(values in proptest::collection::vec(1.0f64..1e4, 5..300), smoothing in proptest::option::of(-1.5f64..1.5)) {
            let d = fit_values(&values, &FitConfig { smoothing, extrapolation: 1.0 }).unwrap();
            let (lo, hi) = d.domain();
            prop_assert_eq!(d.ccdf(lo), 1.0);
            let mut prev = 1.0;
            for i in 0..=1000 {
                let x = lo + (hi - lo) * f64::from(i) / 1000.0;
                let c = d.ccdf(x);
                prop_assert!(c <= prev + 1e-15);
                prop_assert!((0.0..=1.0).contains(&c));
                prev = c;
            }
        }

        #[test]
        fn sampling_is_reproducible(seed in any::<u64>()) {
            let d = fit_values(&[1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0], &FitConfig::default()).unwrap();
            let a = d.sample(20, seed);
            let b = d.sample(20, seed);
            prop_assert_eq!(a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), b.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        }
    }
}
