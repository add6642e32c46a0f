//! Multifractal spectrum of the Farey–Brocot measure.
//!
//! A cell whose expansion has quotient frequencies `λ_j` has length close
//! to `[c · 2^{λ_1} 3^{λ_2} …]^{−2n}` and mass `2^{−Σ a_j}`, which gives
//!
//! ```text
//! α = (log 2 / 2) · m / K      f = −½ Σ λ_j log λ_j / K
//! K = log c + Σ λ_j log(j+1)   m = Σ j λ_j
//! ```

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euclid::{FrequencyVector, SpectrumPoint, ThermoCoords};
use crate::stats::log_a_series;

/// `c_π = π²/6 − 1` and `c = √c_π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FBConstants {
    pub c_pi: f64,
    pub c: f64,
}

impl FBConstants {
    pub fn new() -> Self {
        let c_pi = PI * PI / 6.0 - 1.0;
        FBConstants {
            c_pi,
            c: c_pi.sqrt(),
        }
    }
}

impl Default for FBConstants {
    fn default() -> Self {
        FBConstants::new()
    }
}

/// Quotient frequencies `λ_1 … λ_k` with their mean `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct FBWeights {
    pub lambda: FrequencyVector,
    pub m: f64,
    pub k: usize,
}

impl FBWeights {
    pub fn new(lambda: FrequencyVector) -> Self {
        let m = lambda.mean(|j| (j + 1) as f64);
        let k = lambda.len();
        FBWeights { lambda, m, k }
    }

    /// `K = log c + Σ λ_j log(j+1)`.
    pub fn denominator(&self) -> f64 {
        FBConstants::new().c.ln() + self.lambda.mean(|j| ((j + 2) as f64).ln())
    }
}

/// Fitted tail `f = 1 − A e^{−Bα}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailFit {
    pub a: f64,
    pub b: f64,
    /// Root-mean-square residual of the fit in `log(1 − d)`.
    pub rms_residual: f64,
    /// `(α(k), d_k)` pairs that were fitted.
    pub samples: Vec<(f64, f64)>,
}

impl TailFit {
    pub fn eval(&self, alpha: f64) -> f64 {
        1.0 - self.a * (-self.b * alpha).exp()
    }
}

fn point_from_weights(w: &FBWeights) -> Result<SpectrumPoint> {
    let k = w.denominator();
    if !(k.abs() > 1e-300) || !k.is_finite() {
        return Err(Error::Domain(format!("vanishing denominator {k}")));
    }
    Ok(SpectrumPoint {
        alpha: 0.5 * LN_2 * w.m / k,
        f: 0.5 * w.lambda.entropy() / k,
        thermo: None,
        freqs: w.lambda.clone(),
    })
}

/// Spectrum point of the Farey–Brocot measure for given frequencies.
pub fn fb_point(w: &FBWeights) -> Result<SpectrumPoint> {
    point_from_weights(w)
}

fn ek_weights(k: usize, d: f64) -> FrequencyVector {
    let lw: Vec<f64> = (1..=k).map(|j| -2.0 * d * ((j + 1) as f64).ln()).collect();
    FrequencyVector::from_log_weights(&lw).expect("finite weights")
}

fn ek_map(k: usize, d: f64) -> (f64, FrequencyVector) {
    let lam = ek_weights(k, d);
    let w = FBWeights::new(lam);
    (0.5 * w.lambda.entropy() / w.denominator(), w.lambda)
}

const EK_DAMPING: f64 = 0.5;
const EK_START: f64 = 0.8;
const EK_TOL: f64 = 1e-12;
const EK_MAX_ITER: usize = 500;

/// Dimension of the set of irrationals with all quotients `≤ k`, as the
/// fixed point `d = F(d)` of the extremal-frequency map.
pub fn ek_dimension(k: usize) -> Result<(f64, FBWeights)> {
    if !(1..=1_000_000).contains(&k) {
        return Err(Error::Domain(format!("k = {k} outside 1..=10^6")));
    }
    if k == 1 {
        let lam = FrequencyVector::new(vec![1.0])?;
        return Ok((0.0, FBWeights::new(lam)));
    }
    let mut d = EK_START;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..EK_MAX_ITER {
        let (fd, lam) = ek_map(k, d);
        lo = lo.min(d);
        hi = hi.max(d);
        if (fd - d).abs() <= EK_TOL {
            return Ok((fd, FBWeights::new(lam)));
        }
        d = (1.0 - EK_DAMPING) * d + EK_DAMPING * fd;
        if !d.is_finite() {
            break;
        }
    }
    Err(Error::numeric(
        format!("E_k fixed point did not converge for k = {k}"),
        lo,
        hi,
    ))
}

/// `ek_dimension` over several `k`, in parallel.
pub fn ek_sweep(ks: &[usize]) -> Result<Vec<(usize, f64)>> {
    ks.par_iter()
        .map(|&k| ek_dimension(k).map(|(d, _)| (k, d)))
        .collect()
}

const INFO_MIN_JMAX: usize = 32;

/// The point where `f = α`, reached at `λ_j = 2^{−j}`.
///
/// The `α` numerator `(log 2/2) Σ j 2^{−j}` is summed in closed form; the
/// dropped tail of `K` is bounded analytically and folded into
/// `certificate`.
pub fn information_point(jmax: usize) -> Result<InformationPoint> {
    if jmax < INFO_MIN_JMAX {
        return Err(Error::Precision(format!(
            "jmax = {jmax} is below {INFO_MIN_JMAX}"
        )));
    }
    let (k_trunc, k_tail) = log_a_series(jmax)?;
    let m = 2.0;
    let num = 0.5 * LN_2 * m;
    let k_mid = k_trunc + 0.5 * k_tail;
    let value = num / k_mid;
    let certificate = num * 0.5 * k_tail / (k_trunc * k_trunc) + 4.0 * f64::EPSILON * value;

    let mut lam: Vec<f64> = (1..=jmax).map(|j| 0.5f64.powi(j as i32)).collect();
    lam[jmax - 1] *= 2.0;
    let freqs = FrequencyVector::new(lam)?;

    // the same point through the general formula, truncated
    let trunc: Vec<f64> = (1..=jmax).map(|j| 0.5f64.powi(j as i32)).collect();
    let s: f64 = trunc.iter().sum();
    let w = FBWeights {
        m: trunc
            .iter()
            .enumerate()
            .map(|(j, l)| (j + 1) as f64 * l)
            .sum::<f64>()
            / s,
        lambda: FrequencyVector::new(trunc.iter().map(|l| l / s).collect())?,
        k: jmax,
    };
    let direct = point_from_weights(&w)?;

    Ok(InformationPoint {
        point: SpectrumPoint {
            alpha: value,
            f: value,
            thermo: Some(ThermoCoords {
                param: 1.0,
                slope: 1.0,
                tau: 0.0,
            }),
            freqs,
        },
        value,
        certificate,
        numerator: num,
        denominator: k_mid,
        direct_alpha: direct.alpha,
        direct_f: direct.f,
    })
}

/// Result of [`information_point`].
#[derive(Clone, Debug, PartialEq)]
pub struct InformationPoint {
    pub point: SpectrumPoint,
    /// `α = f` at the information point.
    pub value: f64,
    /// Bound on `|value − limit|`.
    pub certificate: f64,
    /// Limit of the numerator, `log 2`.
    pub numerator: f64,
    pub denominator: f64,
    /// `α` and `f` from the truncated, renormalized frequencies.
    pub direct_alpha: f64,
    pub direct_f: f64,
}

/// `λ_j ∝ (j+1)^{2τ} / 2^{Λ(j−1)}` for `j ≤ jmax`.
pub fn key_freqs_fb(lambda: f64, tau: f64, jmax: usize) -> Result<FrequencyVector> {
    if !lambda.is_finite() || !tau.is_finite() {
        return Err(Error::Domain("non-finite exponent".into()));
    }
    if jmax == 0 {
        return Err(Error::Domain("jmax must be positive".into()));
    }
    if lambda < 0.0 || (lambda == 0.0 && 2.0 * tau >= -1.0) {
        return Err(Error::Domain(format!(
            "normalizing series diverges at Λ = {lambda}, τ = {tau}"
        )));
    }
    let lw: Vec<f64> = (1..=jmax)
        .map(|j| 2.0 * tau * ((j + 1) as f64).ln() - lambda * (j as f64 - 1.0) * LN_2)
        .collect();
    FrequencyVector::from_log_weights(&lw)
}

/// `max_{j ≤ jmax} |(j+1)^{2Λα} − 1|`.
pub fn harmonization_gap(lambda: f64, alpha: f64, jmax: usize) -> Result<f64> {
    if !(lambda * alpha).is_finite() {
        return Err(Error::Domain("non-finite exponent".into()));
    }
    let e = 2.0 * lambda * alpha;
    Ok((1..=jmax)
        .map(|j| (((j + 1) as f64).ln() * e).exp_m1().abs())
        .fold(0.0, f64::max))
}

/// `Σ_{n ≥ 2} log n / n²`, with an Euler–Maclaurin tail.
fn log_zeta_sum() -> f64 {
    let m = 100_000usize;
    let head: f64 = (2..=m)
        .rev()
        .map(|n| (n as f64).ln() / (n as f64 * n as f64))
        .sum();
    let mf = m as f64;
    let tail = (mf.ln() + 1.0) / mf - mf.ln() / (2.0 * mf * mf);
    head + tail
}

/// `K` at the weights `λ_j = (j+1)^{−2}/c_π`.
pub fn tail_denominator() -> f64 {
    let fc = FBConstants::new();
    fc.c.ln() + log_zeta_sum() / fc.c_pi
}

/// `α(k) = (log k / c_π) · (log 2 / 2) / K`.
pub fn alpha_of_k(k: f64) -> f64 {
    let fc = FBConstants::new();
    k.ln() / fc.c_pi * 0.5 * LN_2 / tail_denominator()
}

/// Least-squares fit of `log(1 − d_k) = log A − B α(k)`.
pub fn tail_spectrum_fit(dims: &[(usize, f64)]) -> Result<TailFit> {
    if dims.len() < 3 {
        return Err(Error::Domain("need at least three (k, d_k) pairs".into()));
    }
    if dims
        .windows(2)
        .any(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1))
    {
        return Err(Error::Domain(
            "(k, d_k) must be strictly increasing in both".into(),
        ));
    }
    if dims.iter().any(|&(k, d)| k == 0 || !(d < 1.0)) {
        return Err(Error::Domain("need k ≥ 1 and d_k < 1".into()));
    }
    let samples: Vec<(f64, f64)> = dims
        .iter()
        .map(|&(k, d)| (alpha_of_k(k as f64), d))
        .collect();
    let xy: Vec<(f64, f64)> = samples.iter().map(|&(a, d)| (a, (1.0 - d).ln())).collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rms = (xy
        .iter()
        .map(|p| (p.1 - icpt - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let fit = TailFit {
        a: icpt.exp(),
        b: -slope,
        rms_residual: rms,
        samples,
    };
    if !(fit.b > 1.0) {
        return Err(Error::Domain(format!(
            "fitted B = {} is not above 1",
            fit.b
        )));
    }
    Ok(fit)
}

/// Normalizers `ℰ_j = (j+1)^{2τ} / (2^{Λj} λ_j)` implied by `λ_j = 2^{−j}`
/// for `j = 1 … jmax`, with `τ = Λα − f` taken from `point`.
pub fn information_normalizers(lambda: f64, point: &SpectrumPoint, jmax: usize) -> Vec<f64> {
    let tau = lambda * point.alpha - point.f;
    (1..=jmax)
        .map(|j| {
            let j = j as f64;
            (2.0 * tau * (j + 1.0).ln() - lambda * j * LN_2 + j * LN_2).exp()
        })
        .collect()
}

/// `2^{(Λ−1)j} / (j+1)^{2f(Λ−1)}` for `j = 1 … jmax`.
pub fn lambda_dichotomy_ratios(lambda: f64, f: f64, jmax: usize) -> Vec<f64> {
    (1..=jmax)
        .map(|j| {
            let j = j as f64;
            ((lambda - 1.0) * (j * LN_2 - 2.0 * f * (j + 1.0).ln())).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weights(l: &[f64]) -> FBWeights {
        FBWeights::new(FrequencyVector::new(l.to_vec()).unwrap())
    }

    fn ratio(l: &[f64]) -> f64 {
        let w = weights(l);
        0.5 * w.lambda.entropy() / w.denominator()
    }

    /// Pairwise mass-transfer hill climb on simplex lattices of shrinking step.
    fn lattice_max(k: usize) -> f64 {
        let mut units = vec![0i64; k];
        units[0] = 10;
        let mut scale = 10i64;
        for _ in 0..3 {
            loop {
                let lam = |u: &[i64]| {
                    u.iter()
                        .map(|&x| x as f64 / scale as f64)
                        .collect::<Vec<_>>()
                };
                let cur = ratio(&lam(&units));
                let mut best = (cur, None);
                for i in 0..k {
                    for j in 0..k {
                        if i != j && units[i] > 0 {
                            let mut u = units.clone();
                            u[i] -= 1;
                            u[j] += 1;
                            let v = ratio(&lam(&u));
                            if v > best.0 + 1e-15 {
                                best = (v, Some(u));
                            }
                        }
                    }
                }
                match best.1 {
                    Some(u) => units = u,
                    None => break,
                }
            }
            units.iter_mut().for_each(|x| *x *= 10);
            scale *= 10;
        }
        let lam: Vec<f64> = units.iter().map(|&x| x as f64 / scale as f64).collect();
        ratio(&lam)
    }

    #[test]
    fn constants() {
        let c = FBConstants::new();
        assert!((c.c_pi - 0.644_934_066_848_226_4).abs() < 1e-14);
        assert!((c.c * c.c - c.c_pi).abs() < 1e-15);
    }

    #[test]
    fn fb_point_examples() {
        let p = fb_point(&weights(&[1.0])).unwrap();
        assert!((p.alpha - 0.731_409_267_962_3).abs() < 1e-12);
        assert_eq!(p.f, 0.0);
        let p = fb_point(&weights(&[0.5, 0.5])).unwrap();
        assert!((p.alpha - 0.768_369_374_461_863).abs() < 1e-12);
        assert!((p.f - 0.512_246_249_641_242).abs() < 1e-12);
        let geo: Vec<f64> = (1..=60).map(|j| 0.5f64.powi(j)).collect();
        let s: f64 = geo.iter().sum();
        let p = fb_point(&weights(&geo.iter().map(|x| x / s).collect::<Vec<_>>())).unwrap();
        assert!((p.alpha - 0.870_389_623_387_313).abs() < 1e-12);
        assert!((p.alpha - p.f).abs() < 1e-10);
    }

    #[test]
    fn information_point_value() {
        let ip = information_point(64).unwrap();
        assert!((ip.value - 0.870_389_623_387_313).abs() < 1e-14);
        assert!((ip.value - 0.870_389).abs() < 1e-6);
        assert!((ip.value - 0.870).abs() < 4e-4);
        assert!(ip.certificate < 1e-14);
        assert!((ip.numerator - LN_2).abs() < 1e-16);
        assert!((ip.direct_alpha - ip.direct_f).abs() < 1e-10);
        assert!((ip.direct_alpha - ip.value).abs() < 1e-12);
        let ip32 = information_point(32).unwrap();
        assert!((ip32.value - ip.value).abs() <= ip32.certificate);
        assert!(matches!(information_point(8), Err(Error::Precision(_))));
    }

    #[test]
    fn ek_small_cases() {
        assert_eq!(ek_dimension(1).unwrap().0, 0.0);
        let (d2, w2) = ek_dimension(2).unwrap();
        assert!((d2 - 0.529_13).abs() < 1e-4);
        assert!((d2 - fb_point(&w2).unwrap().f).abs() < 1e-11);
        assert!(ek_dimension(0).is_err());
    }

    #[test]
    fn ek_matches_full_grid_for_k2_k3() {
        for k in [2usize, 3] {
            let mut best = 0.0f64;
            let n = 1000;
            for i in 0..=n {
                if k == 2 {
                    let a = i as f64 / n as f64;
                    best = best.max(ratio(&[a, 1.0 - a]));
                } else {
                    for j in 0..=(n - i) {
                        let a = i as f64 / n as f64;
                        let b = j as f64 / n as f64;
                        best = best.max(ratio(&[a, b, (1.0 - a - b).max(0.0)]));
                    }
                }
            }
            let d = ek_dimension(k).unwrap().0;
            assert!((d - best).abs() < 1e-4, "k={k}: {d} vs {best}");
            assert!(best <= d + 1e-12);
        }
    }

    #[test]
    fn ek_matches_lattice_search_up_to_8() {
        for k in 4..=8 {
            let d = ek_dimension(k).unwrap().0;
            let g = lattice_max(k);
            assert!((d - g).abs() < 1e-4, "k={k}: {d} vs {g}");
        }
    }

    #[test]
    fn ek_growth() {
        let ks = [2usize, 4, 8, 16, 32, 64];
        let ds = ek_sweep(&ks).unwrap();
        for w in ds.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
        let sup = ds
            .iter()
            .map(|&(k, d)| k as f64 * (1.0 - d))
            .fold(0.0, f64::max);
        assert!(sup < 1.0);
    }

    #[test]
    fn key_freq_examples() {
        let v = key_freqs_fb(1.0, 0.0, 60).unwrap();
        for (j, l) in v.as_slice().iter().enumerate() {
            assert!((l - 0.5f64.powi(j as i32 + 1)).abs() < 1e-15);
        }
        let v = key_freqs_fb(0.0, -1.0, 100_000).unwrap();
        let c_pi = FBConstants::new().c_pi;
        assert!((v.as_slice()[0] - 0.25 / c_pi).abs() < 1e-4);
        assert!((v.as_slice()[2] / v.as_slice()[0] - 4.0 / 16.0).abs() < 1e-12);
        let v = key_freqs_fb(0.5, -0.4, 40).unwrap();
        assert!((v.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(key_freqs_fb(-0.1, -5.0, 10).is_err());
        assert!(key_freqs_fb(0.0, -0.4, 10).is_err());
    }

    #[test]
    fn normalizer_at_quadratic_weights() {
        // Σ_{j ≥ 1} (j+1)^{-2}
        let e: f64 = (2..2_000_000u64)
            .map(|n| 1.0 / (n as f64 * n as f64))
            .sum::<f64>()
            + 1.0 / 2e6;
        assert!((e - FBConstants::new().c_pi).abs() < 1e-9);
    }

    #[test]
    fn harmonization_examples() {
        assert_eq!(harmonization_gap(0.0, 3.0, 20).unwrap(), 0.0);
        let g = harmonization_gap(0.01, 5.0, 20).unwrap();
        assert!((g - 0.355_882_106_693_846_7).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for i in 0..8 {
            let a = 0.5 * 2f64.powi(i);
            let g = harmonization_gap(0.3 * (-1.5 * a).exp(), a, 40).unwrap();
            assert!(g < prev);
            prev = g;
        }
    }

    #[test]
    fn tail_fit_recovers_synthetic_model() {
        let (a0, b0) = (0.8, 2.5);
        let dims: Vec<(usize, f64)> = [4usize, 8, 16, 32, 64, 128]
            .iter()
            .map(|&k| (k, 1.0 - a0 * (-b0 * alpha_of_k(k as f64)).exp()))
            .collect();
        let fit = tail_spectrum_fit(&dims).unwrap();
        assert!((fit.a - a0).abs() < 1e-6 && (fit.b - b0).abs() < 1e-6);
        assert!(fit.rms_residual < 1e-10);
        assert!(tail_spectrum_fit(&dims[..2]).is_err());
        let mut bad = dims.clone();
        bad.swap(1, 2);
        assert!(tail_spectrum_fit(&bad).is_err());
    }

    #[test]
    fn tail_fit_of_ek_dimensions() {
        let ds = ek_sweep(&[8, 16, 32, 64]).unwrap();
        let fit = tail_spectrum_fit(&ds).unwrap();
        assert!(fit.b > 1.0);
        for w in fit.samples.windows(2) {
            assert!(fit.eval(w[1].0) > fit.eval(w[0].0));
        }
        assert!((tail_denominator() - 1.234_408_191_549_8).abs() < 1e-9);
    }

    #[test]
    fn information_dichotomy() {
        let ip = information_point(64).unwrap();
        let e = information_normalizers(1.0, &ip.point, 40);
        for x in &e {
            assert!((x - e[0]).abs() <= 1e-10);
        }
        let up = lambda_dichotomy_ratios(2.0, ip.value, 40);
        let down = lambda_dichotomy_ratios(0.5, ip.value, 40);
        for j in 1..39 {
            assert!(up[j + 1] > up[j]);
            assert!(down[j + 1] < down[j]);
        }
        assert!(up[39] > 1e6 && down[39] < 1e-3);
    }

    proptest! {
        #[test]
        fn fixed_point_weights_follow_power_law(k in 2usize..200) {
            let (d, w) = ek_dimension(k).unwrap();
            let l = w.lambda.as_slice();
            let want = (3.0f64 / 2.0).powf(-2.0 * d);
            prop_assert!((l[1] / l[0] - want).abs() < 1e-12);
            prop_assert!(d > 0.0 && d < 1.0);
        }
    }
}
