//! Multifractal spectra of self-similar measures on Euclidean cells.
//!
//! Two families are covered: equal lengths `1/n0` carrying probabilities
//! `p_j`, and equal probabilities `1/n0` carried by lengths `c_j`. Each
//! spectrum point is parametrized by the exponent that tilts the
//! frequencies, `λ_j ∝ p_j^Λ` or `λ_j ∝ c_j^Ξ`.

use rayon::prelude::*;

use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;

fn check_contractors(v: &[f64], what: &str) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::Domain(format!(
            "{what}: need at least two contractors"
        )));
    }
    if let Some(x) = v.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        return Err(Error::Domain(format!("{what}: {x} is not in (0, 1)")));
    }
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > SUM_TOL {
        return Err(Error::Domain(format!("{what}: sum {s} differs from 1")));
    }
    Ok(())
}

/// Probabilities `p_1 … p_{n0}` carried by cells of equal length.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityContractors(Vec<f64>);

impl ProbabilityContractors {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        check_contractors(&p, "probabilities")?;
        Ok(ProbabilityContractors(p))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn n0(&self) -> usize {
        self.0.len()
    }

    /// Closed form `τ(q) = −log Σ p_j^q / log n0`.
    pub fn tau(&self, q: f64) -> f64 {
        -log_sum_exp(self.0.iter().map(|p| q * p.ln())) / (self.n0() as f64).ln()
    }

    /// Attainable range `(α_min, α_max)` of the spectrum.
    pub fn alpha_range(&self) -> (f64, f64) {
        let ln = (self.n0() as f64).ln();
        let hi = self.0.iter().cloned().fold(f64::MIN, f64::max);
        let lo = self.0.iter().cloned().fold(f64::MAX, f64::min);
        (-hi.ln() / ln, -lo.ln() / ln)
    }
}

/// Lengths `c_1 … c_{n0}` of cells of equal probability.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthContractors(Vec<f64>);

impl LengthContractors {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        check_contractors(&c, "lengths")?;
        Ok(LengthContractors(c))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn n0(&self) -> usize {
        self.0.len()
    }
}

/// Frequencies `λ_j = r_j/N` summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyVector(Vec<f64>);

impl FrequencyVector {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Domain("empty frequency vector".into()));
        }
        if let Some(x) = lambda.iter().find(|x| !(**x >= 0.0 && **x <= 1.0)) {
            return Err(Error::Domain(format!("frequency {x} is not in [0, 1]")));
        }
        let s: f64 = lambda.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::Domain(format!("frequencies sum to {s}")));
        }
        Ok(FrequencyVector(lambda))
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let s: f64 = w.iter().sum();
        if !(s > 0.0 && s.is_finite()) || w.iter().any(|x| *x < 0.0) {
            return Err(Error::Domain("weights cannot be normalized".into()));
        }
        FrequencyVector::new(w.iter().map(|x| x / s).collect())
    }

    /// Normalizes `exp(log_w_j)` without overflow.
    pub fn from_log_weights(log_w: &[f64]) -> Result<Self> {
        let m = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !m.is_finite() {
            return Err(Error::Domain("log weights cannot be normalized".into()));
        }
        let w: Vec<f64> = log_w.iter().map(|x| (x - m).exp()).collect();
        FrequencyVector::from_weights(&w)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `−Σ λ_j log λ_j` with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        -self
            .0
            .iter()
            .filter(|x| **x > 0.0)
            .map(|x| x * x.ln())
            .sum::<f64>()
    }

    /// `Σ λ_j g_j`.
    pub fn mean(&self, g: impl Fn(usize) -> f64) -> f64 {
        self.0.iter().enumerate().map(|(j, l)| l * g(j)).sum()
    }
}

/// Thermodynamic coordinates of a spectrum point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoCoords {
    /// The exponent that generated the point (`Λ`, `Ξ`, or `q`).
    pub param: f64,
    /// `q = f′(α)`.
    pub slope: f64,
    /// `τ = q α − f`.
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumPoint {
    pub alpha: f64,
    pub f: f64,
    pub thermo: Option<ThermoCoords>,
    pub freqs: FrequencyVector,
}

impl SpectrumPoint {
    pub fn param(&self) -> Option<f64> {
        self.thermo.map(|t| t.param)
    }

    pub fn tau(&self) -> Option<f64> {
        self.thermo.map(|t| t.tau)
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpectrumCurve {
    pub points: Vec<SpectrumPoint>,
}

impl SpectrumCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Central differences `(f_{i+1} − f_{i−1})/(α_{i+1} − α_{i−1})` at the
    /// interior points.
    pub fn central_slopes(&self) -> Vec<f64> {
        self.points
            .windows(3)
            .map(|w| (w[2].f - w[0].f) / (w[2].alpha - w[0].alpha))
            .collect()
    }

    /// Largest excess of a chord over the curve, after sorting by `α`.
    pub fn concavity_defect(&self) -> f64 {
        let mut pts: Vec<(f64, f64)> = self.points.iter().map(|p| (p.alpha, p.f)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14);
        pts.windows(3)
            .map(|w| {
                let t = (w[1].0 - w[0].0) / (w[2].0 - w[0].0);
                let chord = w[0].1 + t * (w[2].1 - w[0].1);
                chord - w[1].1
            })
            .fold(0.0, f64::max)
    }
}

/// Cells of a measure: `(length, probability)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPartition {
    items: Vec<(f64, f64)>,
}

impl WeightedPartition {
    pub fn new(items: Vec<(f64, f64)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::Domain("empty partition".into()));
        }
        if items
            .iter()
            .any(|(l, p)| !(*l > 0.0 && *l < 1.0 && *p > 0.0 && *p <= 1.0))
        {
            return Err(Error::Domain(
                "cell lengths must lie in (0, 1) and probabilities in (0, 1]".into(),
            ));
        }
        let s: f64 = items.iter().map(|x| x.1).sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("probabilities sum to {s}")));
        }
        Ok(WeightedPartition { items })
    }

    pub fn items(&self) -> &[(f64, f64)] {
        &self.items
    }
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

const TAU_BRACKET: (f64, f64) = (-64.0, 64.0);
const TAU_TOL: f64 = 1e-12;
const TAU_MAX_ITER: usize = 200;

/// Solves `Σ p_j^q l_j^{−τ} = 1` for `τ`.
pub fn partition_tau(part: &WeightedPartition, q: f64) -> Result<f64> {
    if !q.is_finite() {
        return Err(Error::Domain(format!("q = {q} is not finite")));
    }
    let logs: Vec<(f64, f64)> = part
        .items
        .iter()
        .map(|(l, p)| (l.ln(), q * p.ln()))
        .collect();
    // log of the partition sum and its τ-derivative
    let eval = |tau: f64| {
        let terms = logs.iter().map(|(ll, lp)| lp - tau * ll);
        let g = log_sum_exp(terms.clone());
        let m = terms.clone().fold(f64::NEG_INFINITY, f64::max);
        let (mut s, mut ds) = (0.0, 0.0);
        for ((ll, _), t) in logs.iter().zip(terms) {
            let w = (t - m).exp();
            s += w;
            ds -= w * ll;
        }
        (g, ds / s)
    };
    let (mut lo, mut hi) = TAU_BRACKET;
    let (glo, _) = eval(lo);
    let (ghi, _) = eval(hi);
    if !(glo <= 0.0 && ghi >= 0.0) {
        return Err(Error::numeric(
            format!("τ not bracketed at q = {q}"),
            lo,
            hi,
        ));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..TAU_MAX_ITER {
        let (g, dg) = eval(x);
        if g.abs() <= TAU_TOL {
            return Ok(x);
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - g / dg;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 * (1.0 + x.abs()) {
            return Ok(x);
        }
    }
    Err(Error::numeric(
        format!("τ solver hit iteration cap at q = {q}"),
        lo,
        hi,
    ))
}

fn equal_lengths_point(pc: &ProbabilityContractors, lambda: f64) -> SpectrumPoint {
    let logp: Vec<f64> = pc.0.iter().map(|p| p.ln()).collect();
    let lw: Vec<f64> = logp.iter().map(|x| lambda * x).collect();
    let freqs = FrequencyVector::from_log_weights(&lw).expect("finite contractors");
    let ln0 = (pc.n0() as f64).ln();
    let alpha = -freqs.mean(|j| logp[j]) / ln0;
    let f = freqs.entropy() / ln0;
    SpectrumPoint {
        alpha,
        f,
        thermo: Some(ThermoCoords {
            param: lambda,
            slope: lambda,
            tau: lambda * alpha - f,
        }),
        freqs,
    }
}

/// Spectrum of the equal-length measure at each `Λ`.
pub fn spectrum_equal_lengths(
    pc: &ProbabilityContractors,
    params: &[f64],
) -> Result<SpectrumCurve> {
    if let Some(x) = params.iter().find(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("parameter {x} is not finite")));
    }
    let points = params
        .par_iter()
        .map(|&l| equal_lengths_point(pc, l))
        .collect();
    Ok(SpectrumCurve { points })
}

/// The equal-length spectrum point with the given `α`, found by bisection
/// on `Λ` (`α` decreases with `Λ`).
pub fn equal_lengths_at_alpha(pc: &ProbabilityContractors, alpha: f64) -> Result<SpectrumPoint> {
    let (amin, amax) = pc.alpha_range();
    if !(alpha > amin && alpha < amax) {
        return Err(Error::Domain(format!(
            "α = {alpha} outside ({amin}, {amax})"
        )));
    }
    let a = |l: f64| equal_lengths_point(pc, l).alpha;
    let mut span = 1.0;
    while !(a(-span) > alpha && a(span) < alpha) {
        span *= 2.0;
        if span > 1e6 {
            return Err(Error::numeric(
                format!("cannot bracket α = {alpha}"),
                -span,
                span,
            ));
        }
    }
    let (mut lo, mut hi) = (-span, span);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if a(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * (1.0 + mid.abs()) {
            break;
        }
    }
    Ok(equal_lengths_point(pc, 0.5 * (lo + hi)))
}

fn equal_probs_point(lc: &LengthContractors, xi: f64) -> SpectrumPoint {
    let logc: Vec<f64> = lc.0.iter().map(|c| c.ln()).collect();
    let lw: Vec<f64> = logc.iter().map(|x| xi * x).collect();
    let freqs = FrequencyVector::from_log_weights(&lw).expect("finite contractors");
    let ln0 = (lc.n0() as f64).ln();
    let s = freqs.mean(|j| logc[j]);
    let alpha = -ln0 / s;
    let f = -freqs.entropy() / s;
    let slope = log_sum_exp(lw.iter().cloned()) / ln0;
    SpectrumPoint {
        alpha,
        f,
        thermo: Some(ThermoCoords {
            param: xi,
            slope,
            tau: slope * alpha - f,
        }),
        freqs,
    }
}

/// Spectrum of the equal-probability measure at each `Ξ`; the slope
/// `log ℰ / log n0` is attached to every point.
pub fn spectrum_equal_probs(lc: &LengthContractors, params: &[f64]) -> Result<SpectrumCurve> {
    if let Some(x) = params.iter().find(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("parameter {x} is not finite")));
    }
    let points = params
        .par_iter()
        .map(|&x| equal_probs_point(lc, x))
        .collect();
    Ok(SpectrumCurve { points })
}

/// Maps every `(α, f)` to `(1/α, f/α)`; thermodynamic coordinates become
/// `q̄ = −τ`, `τ̄ = −q`.
pub fn invert_spectrum(curve: &SpectrumCurve) -> Result<SpectrumCurve> {
    if let Some(p) = curve.points.iter().find(|p| !(p.alpha > 0.0)) {
        return Err(Error::Domain(format!("cannot invert α = {}", p.alpha)));
    }
    let points = curve
        .points
        .iter()
        .map(|p| SpectrumPoint {
            alpha: 1.0 / p.alpha,
            f: p.f / p.alpha,
            thermo: p.thermo.map(|t| ThermoCoords {
                param: t.param,
                slope: -t.tau,
                tau: -t.slope,
            }),
            freqs: p.freqs.clone(),
        })
        .collect();
    Ok(SpectrumCurve { points })
}

/// Outcome of the duality check at one `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualityResidual {
    pub q: f64,
    pub tau: f64,
    /// Slope of the inverted spectrum, measured by central differences.
    pub q_bar: f64,
    /// `|q̄ + τ(q)|`.
    pub residual: f64,
    /// `|τ̄(q̄) + q|` with `τ̄ = q̄ ᾱ − f̄`.
    pub tau_bar_residual: f64,
}

const DUALITY_STEP: f64 = 1e-4;

/// Compares the slope of the inverted equal-length spectrum with `−τ(q)`.
pub fn duality_residuals(
    pc: &ProbabilityContractors,
    q_grid: &[f64],
) -> Result<Vec<DualityResidual>> {
    if let Some(x) = q_grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("q = {x} is not finite")));
    }
    let h = DUALITY_STEP;
    q_grid
        .par_iter()
        .map(|&q| {
            let tau = pc.tau(q);
            let curve = spectrum_equal_lengths(pc, &[q - h, q, q + h])?;
            let inv = invert_spectrum(&curve)?;
            let (a, b, c) = (&inv.points[0], &inv.points[1], &inv.points[2]);
            let q_bar = (c.f - a.f) / (c.alpha - a.alpha);
            let tau_bar = q_bar * b.alpha - b.f;
            Ok(DualityResidual {
                q,
                tau,
                q_bar,
                residual: (q_bar + tau).abs(),
                tau_bar_residual: (tau_bar + q).abs(),
            })
        })
        .collect()
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Default 201-point parameter grid over `[−5, 5]`.
pub fn default_grid() -> Vec<f64> {
    linspace(-5.0, 5.0, 201)
}
