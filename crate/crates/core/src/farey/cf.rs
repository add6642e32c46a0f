use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::fraction::Fraction;
use crate::error::{Error, Result};

/// Finite continued fraction `[a_1, …, a_n] = 1/(a_1 + 1/(a_2 + …))` in
/// canonical form: every `a_j ≥ 1`, and `a_n ≥ 2` whenever `n ≥ 2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ContinuedFraction {
    quotients: Vec<u64>,
}

impl ContinuedFraction {
    pub fn new(quotients: Vec<u64>) -> Result<Self> {
        if quotients.is_empty() {
            return Err(Error::Domain("empty continued fraction".into()));
        }
        if quotients.contains(&0) {
            return Err(Error::Domain("partial quotients must be positive".into()));
        }
        if quotients.len() >= 2 && *quotients.last().unwrap() < 2 {
            return Err(Error::Domain(format!(
                "non-canonical expansion {quotients:?}: last quotient must be at least 2"
            )));
        }
        Ok(ContinuedFraction { quotients })
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    /// Number of partial quotients `n`.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `N = Σ a_j`.
    pub fn quotient_sum(&self) -> u64 {
        self.quotients.iter().sum()
    }

    /// Farey level at which the value first appears as a breakpoint.
    pub fn creation_level(&self) -> u64 {
        self.quotient_sum() - 1
    }

    /// Row of the restricted tree that holds this expansion.
    pub fn tree_row(&self) -> u64 {
        self.quotient_sum()
    }

    pub fn from_fraction(x: &Fraction) -> Result<Self> {
        if !x.is_positive() || *x > Fraction::one() {
            return Err(Error::Domain(format!("{x} is not in (0, 1]")));
        }
        let mut p = x.numer().clone();
        let mut q = x.denom().clone();
        let mut out = Vec::new();
        while !p.is_zero() {
            let (a, r) = q.div_rem(&p);
            let a = a
                .to_u64()
                .ok_or_else(|| Error::Resource(format!("partial quotient {a} exceeds u64")))?;
            out.push(a);
            q = p;
            p = r;
        }
        Ok(ContinuedFraction { quotients: out })
    }

    pub fn value(&self) -> Fraction {
        let (p, q) = self.convergents().pop().unwrap();
        Fraction::new(p, q).unwrap()
    }

    /// Convergents `(p_k, q_k)` for `k = 1…n`.
    pub fn convergents(&self) -> Vec<(BigInt, BigInt)> {
        let (mut p0, mut p1) = (BigInt::one(), BigInt::zero());
        let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
        let mut out = Vec::with_capacity(self.len());
        for &a in &self.quotients {
            let a = BigInt::from(a);
            let p2 = &a * &p1 + &p0;
            let q2 = &a * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
            out.push((p1.clone(), q1.clone()));
        }
        out
    }

    /// Cumulants `q_1 … q_n` from the seeds `q_{-1} = 0`, `q_0 = 1`.
    pub fn cumulants(&self) -> Vec<BigInt> {
        self.convergents().into_iter().map(|(_, q)| q).collect()
    }

    /// `c^n · Π (a_j + 1)`.
    pub fn besicovitch_q(&self, c: f64) -> f64 {
        self.log_besicovitch_q(c).exp()
    }

    /// `n log c + Σ log(a_j + 1)`.
    pub fn log_besicovitch_q(&self, c: f64) -> f64 {
        self.len() as f64 * c.ln()
            + self
                .quotients
                .iter()
                .map(|&a| ((a + 1) as f64).ln())
                .sum::<f64>()
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.quotients.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

pub fn cf_from_fraction(x: &Fraction) -> Result<ContinuedFraction> {
    ContinuedFraction::from_fraction(x)
}

pub fn fraction_from_cf(cf: &ContinuedFraction) -> Fraction {
    cf.value()
}

pub fn cumulants(cf: &ContinuedFraction) -> Vec<BigInt> {
    cf.cumulants()
}

/// Besicovitch estimate of the last cumulant, `c^n · Π (a_j + 1)`.
pub fn besicovitch_q(cf: &ContinuedFraction, c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "contractor constant {c} must be positive"
        )));
    }
    Ok(cf.besicovitch_q(c))
}

/// Eventually periodic expansion `[prefix, period, period, …]`, i.e. a
/// quadratic irrational in `(0, 1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeriodicContinuedFraction {
    prefix: Vec<u64>,
    period: Vec<u64>,
}

impl PeriodicContinuedFraction {
    pub fn new(prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Domain("empty period".into()));
        }
        if prefix.iter().chain(&period).any(|&a| a == 0) {
            return Err(Error::Domain("partial quotients must be positive".into()));
        }
        Ok(PeriodicContinuedFraction { prefix, period })
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// Infinite stream of partial quotients.
    pub fn quotients(&self) -> impl Iterator<Item = u64> + '_ {
        self.prefix
            .iter()
            .copied()
            .chain(self.period.iter().copied().cycle())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cf(v: &[u64]) -> ContinuedFraction {
        ContinuedFraction::new(v.to_vec()).unwrap()
    }

    fn fr(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(cf_from_fraction(&fr(3, 5)).unwrap(), cf(&[1, 1, 2]));
        assert_eq!(cf_from_fraction(&fr(1, 2)).unwrap(), cf(&[2]));
        assert_eq!(cf_from_fraction(&fr(1, 1)).unwrap(), cf(&[1]));
        for q in 1..50 {
            assert_eq!(cf_from_fraction(&fr(1, q)).unwrap(), cf(&[q as u64]));
        }
    }

    #[test]
    fn rejects_out_of_range_and_non_canonical() {
        assert!(cf_from_fraction(&fr(0, 1)).is_err());
        assert!(cf_from_fraction(&fr(3, 2)).is_err());
        assert!(cf_from_fraction(&fr(-1, 2)).is_err());
        assert!(ContinuedFraction::new(vec![1, 1, 1]).is_err());
        assert!(ContinuedFraction::new(vec![]).is_err());
        assert!(ContinuedFraction::new(vec![2, 0, 2]).is_err());
    }

    #[test]
    fn cumulant_examples() {
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(cf(&[1, 1, 2]).cumulants(), big(&[1, 2, 5]));
        assert_eq!(cf(&[7]).cumulants(), big(&[7]));
        assert_eq!(cf(&[2, 2, 2, 2]).cumulants(), big(&[2, 5, 12, 29]));
    }

    #[test]
    fn besicovitch_examples() {
        let c = (std::f64::consts::PI.powi(2) / 6.0 - 1.0).sqrt();
        let x = besicovitch_q(&cf(&[1, 1, 2]), c).unwrap();
        assert!((x - 12.0 * c.powi(3)).abs() < 1e-12);
        assert!((x - 6.215_187_327_877_38).abs() < 1e-9);
        let y = besicovitch_q(&cf(&[3, 1, 4, 2]), 1.0).unwrap();
        assert!((y - 4.0 * 2.0 * 5.0 * 3.0).abs() < 1e-9);
        assert!(besicovitch_q(&cf(&[2]), 0.0).is_err());
    }

    #[test]
    fn round_trip_and_cumulants_for_small_denominators() {
        for q in 1..=1000i64 {
            for p in 1..=q {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let x = fr(p, q);
                let e = cf_from_fraction(&x).unwrap();
                assert_eq!(fraction_from_cf(&e), x);
                assert_eq!(e.cumulants().last().unwrap(), &BigInt::from(q));
            }
        }
    }

    #[test]
    fn display_and_indexing() {
        let e = cf(&[1, 1, 2]);
        assert_eq!(e.to_string(), "[1,1,2]");
        assert_eq!(e.tree_row(), 4);
        assert_eq!(e.creation_level(), 3);
    }

    #[test]
    fn periodic_stream() {
        let g = PeriodicContinuedFraction::new(vec![3], vec![1, 2]).unwrap();
        let v: Vec<u64> = g.quotients().take(6).collect();
        assert_eq!(v, vec![3, 1, 2, 1, 2, 1]);
        assert!(PeriodicContinuedFraction::new(vec![], vec![]).is_err());
    }

    proptest! {
        #[test]
        fn value_of_valid_cf_round_trips(v in prop::collection::vec(1u64..20, 1..12), last in 2u64..20) {
            let mut v = v;
            if v.len() >= 2 { *v.last_mut().unwrap() = last; }
            let e = ContinuedFraction::new(v).unwrap();
            let x = e.value();
            prop_assert!(x.is_positive() && x <= Fraction::one());
            prop_assert_eq!(cf_from_fraction(&x).unwrap(), e);
        }
    }
}
