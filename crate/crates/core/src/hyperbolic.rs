//! Unimodular matrices acting on the unit interval, and the T/F cutting
//! sequences of vertical geodesics through the Farey tessellation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::farey::{ContinuedFraction, Fraction, Letter, PeriodicContinuedFraction, Word};

/// `(a′ a; b′ b)` with `a′b − ab′ = 1`, acting as `z ↦ (a′z + a)/(b′z + b)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UnimodularMatrix {
    pub ap: BigInt,
    pub a: BigInt,
    pub bp: BigInt,
    pub b: BigInt,
}

impl UnimodularMatrix {
    pub fn new(
        ap: impl Into<BigInt>,
        a: impl Into<BigInt>,
        bp: impl Into<BigInt>,
        b: impl Into<BigInt>,
    ) -> Result<Self> {
        let m = UnimodularMatrix {
            ap: ap.into(),
            a: a.into(),
            bp: bp.into(),
            b: b.into(),
        };
        if !m.determinant().is_one() {
            return Err(Error::Domain(format!("determinant of {m} is not 1")));
        }
        Ok(m)
    }

    fn raw(ap: i64, a: i64, bp: i64, b: i64) -> Self {
        UnimodularMatrix {
            ap: ap.into(),
            a: a.into(),
            bp: bp.into(),
            b: b.into(),
        }
    }

    pub fn identity() -> Self {
        Self::raw(1, 0, 0, 1)
    }

    /// Lower unit triangular `(1 0; 1 1)`.
    pub fn l() -> Self {
        Self::raw(1, 0, 1, 1)
    }

    /// Upper unit triangular `(1 1; 0 1)`.
    pub fn r() -> Self {
        Self::raw(1, 1, 0, 1)
    }

    pub fn determinant(&self) -> BigInt {
        &self.ap * &self.b - &self.a * &self.bp
    }

    /// Product of the letter matrices, left to right.
    pub fn from_word(w: &Word) -> Self {
        w.letters().iter().fold(Self::identity(), |m, x| match x {
            Letter::L => &m * &Self::l(),
            Letter::R => &m * &Self::r(),
        })
    }

    /// `a′/b′`, the image of `1/0`.
    pub fn first_column(&self) -> Option<Fraction> {
        Fraction::new(self.ap.clone(), self.bp.clone()).ok()
    }

    /// `a/b`, the image of `0`.
    pub fn second_column(&self) -> Option<Fraction> {
        Fraction::new(self.a.clone(), self.b.clone()).ok()
    }
}

impl Mul for &UnimodularMatrix {
    type Output = UnimodularMatrix;

    fn mul(self, o: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            ap: &self.ap * &o.ap + &self.a * &o.bp,
            a: &self.ap * &o.a + &self.a * &o.b,
            bp: &self.bp * &o.ap + &self.b * &o.bp,
            b: &self.bp * &o.a + &self.b * &o.b,
        }
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.ap, self.a, self.bp, self.b)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Endpoint {
    Finite(Fraction),
    Infinity,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Length {
    Finite(Fraction),
    Infinite,
}

/// Image of `[0, 1]` under a unimodular matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShrunkInterval {
    pub from: Endpoint,
    pub to: Endpoint,
    pub length: Length,
}

/// Image of the unit segment: `[a/b, (a+a′)/(b+b′)]` of length
/// `1/(b(b′+b))`.
///
/// When `b(b′+b) = 0` one endpoint is at infinity; the ray is oriented from
/// its finite end to `∞`. When `b(b′+b) < 0` the image passes through `∞`
/// and its length is also infinite.
pub fn mobius_shrink(u: &UnimodularMatrix) -> ShrunkInterval {
    let lo = (u.a.clone(), u.b.clone());
    let hi = (&u.a + &u.ap, &u.b + &u.bp);
    let end = |(n, d): (BigInt, BigInt)| match Fraction::new(n, d) {
        Ok(x) => Endpoint::Finite(x),
        Err(_) => Endpoint::Infinity,
    };
    let den = &u.b * (&u.bp + &u.b);
    match den.sign() {
        num_bigint::Sign::Plus => ShrunkInterval {
            from: end(lo),
            to: end(hi),
            length: Length::Finite(Fraction::new(1, den).unwrap()),
        },
        num_bigint::Sign::Minus => ShrunkInterval {
            from: end(lo),
            to: end(hi),
            length: Length::Infinite,
        },
        num_bigint::Sign::NoSign => {
            let (f, t) = match (end(lo), end(hi)) {
                (Endpoint::Infinity, x) | (x, Endpoint::Infinity) => (x, Endpoint::Infinity),
                (x, y) => (x, y),
            };
            ShrunkInterval {
                from: f,
                to: t,
                length: Length::Infinite,
            }
        }
    }
}

/// True iff `x = a/b` and `y = a′/b′` satisfy `a′b − ab′ = 1`.
pub fn adjacency_check(x: &Fraction, y: &Fraction) -> Result<bool> {
    if x >= y {
        return Err(Error::Ordering(format!("{x} is not below {y}")));
    }
    Ok(x.determinant(y).is_one())
}

/// `(u + v√d)/w` with `d` not a square and `w > 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticIrrational {
    pub u: BigInt,
    pub v: BigInt,
    pub w: BigInt,
    pub d: BigInt,
}

impl QuadraticIrrational {
    pub fn from_periodic(cf: &PeriodicContinuedFraction) -> Result<Self> {
        let conv = |q: &[u64]| {
            // (p_k, p_{k−1}, q_k, q_{k−1})
            let (mut p0, mut p1) = (BigInt::one(), BigInt::zero());
            let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
            for &a in q {
                let a = BigInt::from(a);
                let p2 = &a * &p1 + &p0;
                let q2 = &a * &q1 + &q0;
                p0 = std::mem::replace(&mut p1, p2);
                q0 = std::mem::replace(&mut q1, q2);
            }
            (p1, p0, q1, q0)
        };
        // the purely periodic tail y solves Q′y² + (Q − P′)y − P = 0
        let (pp, pp1, qq, qq1) = conv(cf.period());
        let u0 = &pp1 - &qq;
        let d = &u0 * &u0 + BigInt::from(4) * &qq1 * &pp;
        let w0 = BigInt::from(2) * &qq1;
        let r = d.sqrt();
        if &r * &r == d {
            return Err(Error::Domain("periodic expansion is rational".into()));
        }
        // x = (p_m + y p_{m−1}) / (q_m + y q_{m−1})
        let (pm, pm1, qm, qm1) = conv(cf.prefix());
        let (al, be) = (&pm * &w0 + &pm1 * &u0, pm1.clone());
        let (ga, de) = (&qm * &w0 + &qm1 * &u0, qm1.clone());
        let mut u = &al * &ga - &be * &de * &d;
        let mut v = &be * &ga - &al * &de;
        let mut w = &ga * &ga - &de * &de * &d;
        if w.is_negative() {
            u = -u;
            v = -v;
            w = -w;
        }
        Ok(QuadraticIrrational { u, v, w, d })
    }

    /// Exact ordering of the irrational against `m/n`, `n > 0`.
    pub fn cmp_fraction(&self, m: &BigInt, n: &BigInt) -> Ordering {
        let a = &self.u * n - m * &self.w;
        let b = &self.v * n;
        sign_of_surd(&a, &b, &self.d)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        (f(&self.u) + f(&self.v) * f(&self.d).sqrt()) / f(&self.w)
    }
}

/// Sign of `a + b√d` for non-square `d > 0`.
fn sign_of_surd(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let z = BigInt::zero();
    match (a.cmp(&z), b.cmp(&z)) {
        (Ordering::Equal, Ordering::Equal) => Ordering::Equal,
        (x, Ordering::Equal) | (Ordering::Equal, x) => x,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(b * b * d)),
        (Ordering::Less, Ordering::Greater) => (b * b * d).cmp(&(a * a)),
    }
}

/// Point where the vertical geodesic lands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GeodesicFoot {
    Rational(Fraction),
    Quadratic(QuadraticIrrational),
}

impl GeodesicFoot {
    pub fn from_cf(cf: &ContinuedFraction) -> Self {
        GeodesicFoot::Rational(cf.value())
    }

    pub fn from_periodic(cf: &PeriodicContinuedFraction) -> Result<Self> {
        Ok(GeodesicFoot::Quadratic(QuadraticIrrational::from_periodic(
            cf,
        )?))
    }

    fn cmp_fraction(&self, m: &BigInt, n: &BigInt) -> Ordering {
        match self {
            GeodesicFoot::Rational(x) => (x.numer() * n).cmp(&(m * x.denom())),
            GeodesicFoot::Quadratic(q) => q.cmp_fraction(m, n),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Tile {
    /// Thin: one vertex left of the geodesic.
    T,
    /// Fat: two vertices left of the geodesic.
    F,
}

/// T/F word of a geodesic; `terminated` marks a rational foot reached
/// before the requested depth.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CuttingWord {
    pub letters: Vec<Tile>,
    pub terminated: bool,
}

impl CuttingWord {
    pub fn block_lengths(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        let mut prev = None;
        for &x in &self.letters {
            if prev == Some(x) {
                *out.last_mut().unwrap() += 1;
            } else {
                out.push(1);
            }
            prev = Some(x);
        }
        out
    }

    pub fn to_lr(&self) -> Word {
        Word::new(
            self.letters
                .iter()
                .map(|t| match t {
                    Tile::T => Letter::L,
                    Tile::F => Letter::R,
                })
                .collect(),
        )
    }
}

impl fmt::Display for CuttingWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.letters {
            write!(f, "{x:?}")?;
        }
        if self.terminated {
            write!(f, "$")?;
        }
        Ok(())
    }
}

/// Follows the vertical geodesic from `∞` down to `foot` across at most
/// `depth` tiles. The top tile `(0, 1, ∞)` is `T`; in every later tile
/// `(l, m, r)` the letter is `T` when the foot lies left of `m` and `F`
/// when it lies right of `m`. A rational foot ends the word at the tile
/// whose apex it is.
pub fn cutting_sequence(foot: &GeodesicFoot, depth: usize) -> Result<CuttingWord> {
    if depth == 0 {
        return Err(Error::Domain("depth must be at least 1".into()));
    }
    let inside = foot.cmp_fraction(&BigInt::zero(), &BigInt::one()) == Ordering::Greater
        && foot.cmp_fraction(&BigInt::one(), &BigInt::one()) != Ordering::Greater;
    if !inside {
        return Err(Error::Domain("geodesic foot must lie in (0, 1]".into()));
    }
    let (mut l, mut r) = (
        (BigInt::zero(), BigInt::one()),
        (BigInt::one(), BigInt::zero()),
    );
    let mut letters = Vec::with_capacity(depth);
    while letters.len() < depth {
        let m = (&l.0 + &r.0, &l.1 + &r.1);
        match foot.cmp_fraction(&m.0, &m.1) {
            Ordering::Less => {
                letters.push(Tile::T);
                r = m;
            }
            Ordering::Equal => {
                // the foot is the vertex m: the last tile extends the current block
                letters.push(*letters.last().unwrap_or(&Tile::T));
                return Ok(CuttingWord {
                    letters,
                    terminated: true,
                });
            }
            Ordering::Greater => {
                letters.push(Tile::F);
                l = m;
            }
        }
    }
    Ok(CuttingWord {
        letters,
        terminated: false,
    })
}
