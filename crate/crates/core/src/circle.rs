//! Mode locking of the critical sine circle map
//! `θ ↦ θ + w + sin(2πθ)/(2π)`.
//!
//! Each rational rotation `p/q` locks on a parameter plateau `[w_lo, w_hi]`.
//! The complement of the plateaus of the level-`N` Farey fractions is a
//! cover of the staircase's Cantor set by `2^N` gaps.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::farey::{build_partition, Fraction};

const TWO_PI: f64 = 2.0 * PI;

/// Periodic perturbation `s` of a degree-one lift `θ ↦ θ + w + s(θ)`.
pub trait Nonlinearity: Send + Sync {
    /// `(s, s′, s″)` at `θ`.
    fn eval(&self, theta: f64) -> (f64, f64, f64);

    /// A point of the circle used to seed superstable orbits; the critical
    /// point when the map has one.
    fn critical_point(&self) -> f64;

    fn name(&self) -> &str;
}

/// `s(θ) = k sin(2πθ)/(2π)`; critical at `k = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineNonlinearity {
    pub k: f64,
}

impl SineNonlinearity {
    pub const CRITICAL: SineNonlinearity = SineNonlinearity { k: 1.0 };
}

impl Nonlinearity for SineNonlinearity {
    fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let (s, c) = (TWO_PI * theta).sin_cos();
        (self.k * s / TWO_PI, self.k * c, -self.k * TWO_PI * s)
    }

    fn critical_point(&self) -> f64 {
        0.5
    }

    fn name(&self) -> &str {
        if self.k == 1.0 {
            "critical-sine"
        } else {
            "sine"
        }
    }
}

/// The circle map family over `w` for a fixed nonlinearity.
pub struct CircleMap {
    nl: Box<dyn Nonlinearity>,
}

impl Default for CircleMap {
    fn default() -> Self {
        CircleMap::critical_sine()
    }
}

/// `F^q` and its partial derivatives in `θ` and `w`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub x: f64,
    pub dth: f64,
    pub dw: f64,
    pub dth2: f64,
    pub dthw: f64,
}

impl CircleMap {
    pub fn critical_sine() -> Self {
        CircleMap {
            nl: Box::new(SineNonlinearity::CRITICAL),
        }
    }

    pub fn new(nl: Box<dyn Nonlinearity>) -> Self {
        CircleMap { nl }
    }

    pub fn nonlinearity(&self) -> &dyn Nonlinearity {
        self.nl.as_ref()
    }

    pub fn step(&self, theta: f64, w: f64) -> f64 {
        theta + w + self.nl.eval(theta).0
    }

    /// `F_w^q(θ)` on the lift.
    pub fn iterate(&self, theta: f64, w: f64, q: u64) -> f64 {
        (0..q).fold(theta, |x, _| self.step(x, w))
    }

    /// `F_w^q(θ)` with first and mixed second derivatives.
    pub fn iterate_jet(&self, theta: f64, w: f64, q: u64) -> Jet {
        let mut j = Jet {
            x: theta,
            dth: 1.0,
            dw: 0.0,
            dth2: 0.0,
            dthw: 0.0,
        };
        for _ in 0..q {
            let (s, s1, s2) = self.nl.eval(j.x);
            let g = 1.0 + s1;
            j = Jet {
                x: j.x + w + s,
                dth: j.dth * g,
                dw: j.dw * g + 1.0,
                dth2: j.dth2 * g + j.dth * j.dth * s2,
                dthw: j.dthw * g + j.dth * j.dw * s2,
            };
        }
        j
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleMapParams {
    pub w: f64,
}

impl CircleMapParams {
    pub fn new(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain(format!("w = {w} outside [0, 1]")));
        }
        Ok(CircleMapParams { w })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingNumber {
    pub value: f64,
    /// `1/n`: the lift stays within one turn of the rigid rotation.
    pub error: f64,
}

pub const MIN_ITERATIONS: u64 = 1000;

/// `(θ_{b+n} − θ_b)/n` for the orbit of `θ_0 = 0`, with the lift kept as an
/// integer turn count plus a fractional angle.
pub fn winding_number(
    map: &CircleMap,
    params: CircleMapParams,
    iterations: u64,
    burn_in: u64,
) -> Result<WindingNumber> {
    if iterations < MIN_ITERATIONS {
        return Err(Error::Domain(format!(
            "need at least {MIN_ITERATIONS} iterations"
        )));
    }
    let w = params.w;
    let mut turns: i64 = 0;
    let mut theta = 0.0f64;
    let advance = |turns: &mut i64, theta: &mut f64| {
        let y = map.step(*theta, w);
        let k = y.floor();
        *turns += k as i64;
        *theta = y - k;
    };
    for _ in 0..burn_in {
        advance(&mut turns, &mut theta);
    }
    let (t0, th0) = (turns, theta);
    for _ in 0..iterations {
        advance(&mut turns, &mut theta);
    }
    let lift = (turns - t0) as f64 + (theta - th0);
    Ok(WindingNumber {
        value: lift / iterations as f64,
        error: 1.0 / iterations as f64,
    })
}

/// Parameter plateau on which the rotation number is `p/q`.
#[derive(Clone, Debug, PartialEq)]
pub struct LockingInterval {
    pub rotation: Fraction,
    pub w_lo: f64,
    pub w_hi: f64,
    /// Parameter of the superstable orbit inside the plateau.
    pub superstable: f64,
}

impl LockingInterval {
    pub fn width(&self) -> f64 {
        self.w_hi - self.w_lo
    }

    /// Same plateau for the rotation shifted by an integer.
    pub fn shifted(&self, n: i64) -> LockingInterval {
        LockingInterval {
            rotation: &self.rotation + &Fraction::from_integer(n),
            w_lo: self.w_lo + n as f64,
            w_hi: self.w_hi + n as f64,
            superstable: self.superstable + n as f64,
        }
    }
}

pub const MAX_DENOMINATOR: u64 = 100;
pub const DEFAULT_TOL: f64 = 1e-10;

struct PlateauSolver<'a> {
    map: &'a CircleMap,
    p: f64,
    q: u64,
    grid: usize,
}

enum Edge {
    Lower,
    Upper,
}

impl PlateauSolver<'_> {
    fn phi(&self, theta: f64, w: f64) -> f64 {
        self.map.iterate(theta, w, self.q) - theta - self.p
    }

    /// `max_θ φ` (lower edge) or `min_θ φ` (upper edge), with its argument.
    fn extremum(&self, w: f64, edge: &Edge) -> (f64, f64) {
        let sgn = match edge {
            Edge::Lower => 1.0,
            Edge::Upper => -1.0,
        };
        let h = 1.0 / self.grid as f64;
        let mut best = (f64::NEG_INFINITY, 0.0);
        for i in 0..self.grid {
            let t = i as f64 * h;
            let v = sgn * self.phi(t, w);
            if v > best.0 {
                best = (v, t);
            }
        }
        // golden-section refinement around the best grid point
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (best.1 - h, best.1 + h);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (sgn * self.phi(c, w), sgn * self.phi(d, w));
        for _ in 0..80 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = sgn * self.phi(c, w);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = sgn * self.phi(d, w);
            }
            if b - a < 1e-13 {
                break;
            }
        }
        let (v, t) = if fc > fd { (fc, c) } else { (fd, d) };
        if v >= best.0 {
            (sgn * v, t)
        } else {
            (sgn * best.0, best.1)
        }
    }

    fn superstable(&self) -> Result<f64> {
        let tc = self.map.nl.critical_point();
        let h = |w: f64| self.phi(tc, w);
        let centre = self.p / self.q as f64;
        let (mut lo, mut hi) = (centre - 0.2, centre + 0.2);
        if !(h(lo) < 0.0 && h(hi) > 0.0) {
            return Err(Error::numeric(
                format!("superstable orbit of {}/{} not bracketed", self.p, self.q),
                lo,
                hi,
            ));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Newton on `F^q(θ) − θ − p = 0`, `∂_θ F^q − 1 = 0`.
    fn tangency(&self, theta0: f64, w0: f64) -> Option<(f64, f64)> {
        let (mut t, mut w) = (theta0, w0);
        for _ in 0..50 {
            let j = self.map.iterate_jet(t, w, self.q);
            let g = j.x - t - self.p;
            let h = j.dth - 1.0;
            let (a, b, c, d) = (j.dth - 1.0, j.dw, j.dth2, j.dthw);
            let det = a * d - b * c;
            if !det.is_finite() || det == 0.0 {
                return None;
            }
            let dt = (d * g - b * h) / det;
            let dw = (a * h - c * g) / det;
            t -= dt;
            w -= dw;
            if dt.abs() < 1e-15 && dw.abs() < 1e-15 {
                return Some((t, w));
            }
        }
        None
    }

    fn edge(&self, ws: f64, edge: Edge, tol: f64) -> Result<f64> {
        let dir = match edge {
            Edge::Lower => -1.0,
            Edge::Upper => 1.0,
        };
        // inside the plateau the extremum has this sign
        let inside = |w: f64| {
            let v = self.extremum(w, &edge).0;
            match edge {
                Edge::Lower => v >= 0.0,
                Edge::Upper => v <= 0.0,
            }
        };
        let mut delta = 1e-6;
        while inside(ws + dir * delta) {
            delta *= 2.0;
            if delta > 0.5 {
                return Err(Error::numeric(
                    format!("plateau edge of {}/{} not bracketed", self.p, self.q),
                    ws,
                    ws + dir * delta,
                ));
            }
        }
        // a: inside, b: outside
        let mut a = if delta > 1e-6 {
            ws + dir * delta * 0.5
        } else {
            ws
        };
        let mut b = ws + dir * delta;
        let mut polished = false;
        while (b - a).abs() > tol.min(1e-7) {
            let m = 0.5 * (a + b);
            if inside(m) {
                a = m;
            } else {
                b = m;
            }
        }
        if (b - a).abs() > 0.0 {
            let m = 0.5 * (a + b);
            let t0 = self.extremum(m, &edge).1;
            if let Some((_, w)) = self.tangency(t0, m) {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                if w >= lo - 1e-12 && w <= hi + 1e-12 {
                    a = w;
                    b = w;
                    polished = true;
                }
            }
        }
        if !polished {
            while (b - a).abs() > tol {
                let m = 0.5 * (a + b);
                if inside(m) {
                    a = m;
                } else {
                    b = m;
                }
            }
        }
        Ok(0.5 * (a + b))
    }
}

/// Plateau of rotation `p/q`, with edges located to within `tol`.
///
/// The superstable parameter is found by bisection, each edge is bracketed
/// on the sign of `max_θ`/`min_θ` of `F^q(θ) − θ − p`, then polished by
/// Newton on the tangency system.
pub fn locking_interval(map: &CircleMap, p: u64, q: u64, tol: f64) -> Result<LockingInterval> {
    if q == 0 || p > q || q > MAX_DENOMINATOR || num_integer::gcd(p, q) != 1 {
        return Err(Error::Domain(format!("invalid rotation {p}/{q}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let s = PlateauSolver {
        map,
        p: p as f64,
        q,
        grid: (32 * q as usize).max(512),
    };
    let ws = s.superstable()?;
    let w_lo = s.edge(ws, Edge::Lower, tol)?;
    let w_hi = s.edge(ws, Edge::Upper, tol)?;
    Ok(LockingInterval {
        rotation: Fraction::new(p, q).unwrap(),
        w_lo,
        w_hi,
        superstable: ws,
    })
}

/// Plateaus for several rotations in parallel, in input order.
pub fn locking_intervals(
    map: &CircleMap,
    rotations: &[Fraction],
    tol: f64,
) -> Result<Vec<LockingInterval>> {
    rotations
        .par_iter()
        .map(|r| {
            let (p, q) = to_u64_pair(r)?;
            if (p, q) == (1, 1) {
                return Ok(locking_interval(map, 0, 1, tol)?.shifted(1));
            }
            locking_interval(map, p, q, tol)
        })
        .collect()
}

fn to_u64_pair(r: &Fraction) -> Result<(u64, u64)> {
    let p = u64::try_from(r.numer()).map_err(|_| Error::Domain(format!("{r} out of range")))?;
    let q = u64::try_from(r.denom()).map_err(|_| Error::Domain(format!("{r} out of range")))?;
    Ok((p, q))
}

/// One complementary interval between consecutive plateaus.
#[derive(Clone, Debug, PartialEq)]
pub struct Gap {
    pub left: Fraction,
    pub right: Fraction,
    pub w_lo: f64,
    pub w_hi: f64,
    /// Length of the vertical image `[left, right]`, i.e. `1/(b b′)`.
    pub fb_image_length: f64,
}

impl Gap {
    pub fn length(&self) -> f64 {
        self.w_hi - self.w_lo
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapCover {
    pub level: u32,
    pub gaps: Vec<Gap>,
}

impl GapCover {
    pub fn lengths(&self) -> Vec<f64> {
        self.gaps.iter().map(Gap::length).collect()
    }

    pub fn total_length(&self) -> f64 {
        self.gaps.iter().map(Gap::length).sum()
    }

    /// Cover built directly from lengths, for calibration.
    pub fn synthetic(level: u32, lengths: &[f64]) -> Self {
        let gaps = lengths
            .iter()
            .map(|&l| Gap {
                left: Fraction::zero(),
                right: Fraction::one(),
                w_lo: 0.0,
                w_hi: l,
                fb_image_length: l,
            })
            .collect();
        GapCover { level, gaps }
    }
}

pub const MAX_COVER_LEVEL: u32 = 8;

/// Gap covers for levels `1 ..= max_level`, computing each plateau once.
pub fn gap_covers(map: &CircleMap, max_level: u32, tol: f64) -> Result<Vec<GapCover>> {
    if !(1..=MAX_COVER_LEVEL).contains(&max_level) {
        return Err(Error::Domain(format!(
            "level {max_level} outside 1..={MAX_COVER_LEVEL}"
        )));
    }
    let part = build_partition(max_level)?;
    let bps = part.breakpoints();
    let plateaus = locking_intervals(map, bps, tol)?;
    (1..=max_level)
        .map(|n| {
            let stride = 1usize << (max_level - n);
            let idx: Vec<usize> = (0..bps.len()).step_by(stride).collect();
            let gaps = idx
                .windows(2)
                .map(|w| {
                    let (x, y) = (&plateaus[w[0]], &plateaus[w[1]]);
                    let img = &y.rotation - &x.rotation;
                    if y.w_lo <= x.w_hi {
                        return Err(Error::numeric(
                            format!("plateaus of {} and {} overlap", x.rotation, y.rotation),
                            x.w_hi,
                            y.w_lo,
                        ));
                    }
                    Ok(Gap {
                        left: x.rotation.clone(),
                        right: y.rotation.clone(),
                        w_lo: x.w_hi,
                        w_hi: y.w_lo,
                        fb_image_length: img.to_f64(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(GapCover { level: n, gaps })
        })
        .collect()
}

/// Gap cover of level `N`.
pub fn gap_cover(map: &CircleMap, level: u32, tol: f64) -> Result<GapCover> {
    Ok(gap_covers(map, level, tol)?.pop().unwrap())
}

/// `d` with `Σ l_i^d = 1`.
pub fn similarity_dimension(lengths: &[f64]) -> Result<f64> {
    if lengths.is_empty() || lengths.iter().any(|&l| !(l > 0.0 && l < 1.0)) {
        return Err(Error::Domain("cover lengths must lie in (0, 1)".into()));
    }
    let logs: Vec<f64> = lengths.iter().map(|l| l.ln()).collect();
    let g = |d: f64| logs.iter().map(|x| (d * x).exp()).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    while g(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::numeric("cover dimension not bracketed", lo, hi));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Dimension estimate from a sequence of covers.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    /// `(N, d_N)` with `Σ l^{d_N} = 1` at level `N`.
    pub per_level: Vec<(u32, f64)>,
    /// Richardson extrapolation in `1/N` through the three finest levels.
    pub extrapolated: f64,
    /// `d` with `Σ_{N+1} l^d = Σ_N l^d`, for consecutive levels.
    pub ratio_estimates: Vec<(u32, f64)>,
}

fn ratio_dimension(a: &GapCover, b: &GapCover) -> Option<f64> {
    let (la, lb) = (a.lengths(), b.lengths());
    let g = |d: f64| {
        lb.iter().map(|l| l.powf(d)).sum::<f64>() - la.iter().map(|l| l.powf(d)).sum::<f64>()
    };
    let (mut lo, mut hi) = (0.0, 4.0);
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

pub fn dimension_estimate(covers: &[GapCover]) -> Result<DimensionEstimate> {
    if covers.len() < 3 {
        return Err(Error::Domain("need at least three covers".into()));
    }
    let per_level = covers
        .iter()
        .map(|c| similarity_dimension(&c.lengths()).map(|d| (c.level, d)))
        .collect::<Result<Vec<_>>>()?;
    let k = per_level.len();
    let pts = &per_level[k - 3..];
    // d_N = d + a/N + b/N², solved through three levels
    let h: Vec<f64> = pts.iter().map(|(n, _)| 1.0 / *n as f64).collect();
    let mut extrapolated = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if i != j {
                w *= h[j] / (h[j] - h[i]);
            }
        }
        extrapolated += w * pts[i].1;
    }
    let ratio_estimates = covers
        .windows(2)
        .filter_map(|w| ratio_dimension(&w[0], &w[1]).map(|d| (w[1].level, d)))
        .collect();
    Ok(DimensionEstimate {
        per_level,
        extrapolated,
        ratio_estimates,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub r_squared: f64,
}

/// Least squares through the origin of Farey–Brocot image length on gap
/// length; `r²` is uncentred.
pub fn slope_scatter(cover: &GapCover) -> Result<SlopeFit> {
    if cover.gaps.is_empty() {
        return Err(Error::Domain("empty cover".into()));
    }
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for g in &cover.gaps {
        let (x, y) = (g.length(), g.fb_image_length);
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    let slope = sxy / sxx;
    let sse: f64 = cover
        .gaps
        .iter()
        .map(|g| (g.fb_image_length - slope * g.length()).powi(2))
        .sum();
    Ok(SlopeFit {
        slope,
        r_squared: 1.0 - sse / syy,
    })
}
