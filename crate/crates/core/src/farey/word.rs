use std::fmt;

use super::cf::ContinuedFraction;
use super::fraction::Fraction;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::L => Letter::R,
            Letter::R => Letter::L,
        }
    }

    /// Hyperbolic spelling: `L ↔ T`, `R ↔ F`.
    pub fn as_tf(self) -> char {
        match self {
            Letter::L => 'T',
            Letter::R => 'F',
        }
    }
}

/// A word over `{L, R}`.
///
/// Read as a Stern–Brocot descent from `(0/1, 1/0)`: `L` keeps the left
/// end and moves the right end to the mediant, `R` does the opposite.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Maximal runs of equal letters.
    pub fn blocks(&self) -> Vec<(Letter, usize)> {
        let mut out: Vec<(Letter, usize)> = Vec::new();
        for &x in &self.letters {
            match out.last_mut() {
                Some((y, n)) if *y == x => *n += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    /// Interval reached by the descent, as `(left, right)` numerator and
    /// denominator pairs; `right` may be `1/0`.
    pub fn descend_raw(&self) -> ((u64, u64), (u64, u64)) {
        let (mut l, mut r) = ((0u64, 1u64), (1u64, 0u64));
        for &x in &self.letters {
            let m = (l.0 + r.0, l.1 + r.1);
            match x {
                Letter::L => r = m,
                Letter::R => l = m,
            }
        }
        (l, r)
    }

    /// Interval reached by the descent; `None` stands for `1/0`.
    pub fn descend(&self) -> (Fraction, Option<Fraction>) {
        let (l, r) = self.descend_raw();
        let right = (r.1 != 0).then(|| Fraction::new(r.0, r.1).unwrap());
        (Fraction::new(l.0, l.1).unwrap(), right)
    }

    /// Mediant of the interval reached by the descent.
    pub fn mediant(&self) -> Fraction {
        let (l, r) = self.descend_raw();
        Fraction::new(l.0 + r.0, l.1 + r.1).unwrap()
    }

    /// The word without its terminal letter; its descent ends on the
    /// interval whose mediant creates the value.
    pub fn creation_prefix(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.pop();
        Word { letters }
    }

    pub fn to_tf_string(&self) -> String {
        self.letters.iter().map(|l| l.as_tf()).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

/// `L^{a_1} R^{a_2} L^{a_3} …`, of length `Σ a_j`.
pub fn lr_word(cf: &ContinuedFraction) -> Word {
    let mut letters = Vec::with_capacity(cf.quotient_sum() as usize);
    let mut x = Letter::L;
    for &a in cf.quotients() {
        letters.extend(std::iter::repeat_n(x, a as usize));
        x = x.flip();
    }
    Word { letters }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::cf::cf_from_fraction;
    use crate::farey::partition::build_partition;
    use std::collections::BTreeSet;

    fn cf(v: &[u64]) -> ContinuedFraction {
        ContinuedFraction::new(v.to_vec()).unwrap()
    }

    fn fr(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    #[test]
    fn word_examples() {
        let w = lr_word(&cf(&[1, 1, 2]));
        assert_eq!(w.to_string(), "LRLL");
        assert_eq!(w.to_tf_string(), "TFTT");
        assert_eq!(lr_word(&cf(&[1])).to_string(), "L");
        let (l, r) = w.descend();
        assert_eq!((l, r), (fr(1, 2), Some(fr(3, 5))));
        let p = w.creation_prefix();
        assert_eq!(p.to_string(), "LRL");
        assert_eq!(p.mediant(), fr(3, 5));
    }

    #[test]
    fn blocks_follow_quotients() {
        let e = cf(&[3, 1, 4, 2]);
        let b: Vec<usize> = lr_word(&e).blocks().into_iter().map(|x| x.1).collect();
        assert_eq!(b, vec![3, 1, 4, 2]);
    }

    #[test]
    fn descent_lands_on_value_for_all_low_levels() {
        for n in 1..=8 {
            for x in build_partition(n).unwrap().breakpoints().iter().skip(1) {
                let e = cf_from_fraction(x).unwrap();
                let w = lr_word(&e);
                let (l, r) = w.descend();
                assert!(l == *x || r.as_ref() == Some(x), "{x}: {w}");
                let p = w.creation_prefix();
                assert_eq!(p.mediant(), *x);
                assert_eq!(p.len() as u64, e.quotient_sum() - 1);
            }
        }
    }

    #[test]
    fn new_breakpoints_have_quotient_sum_level_plus_one() {
        let mut seen: BTreeSet<Fraction> = BTreeSet::new();
        seen.insert(fr(0, 1));
        seen.insert(fr(1, 1));
        for n in 1..=14u32 {
            let p = build_partition(n).unwrap();
            let fresh: BTreeSet<Fraction> = p
                .breakpoints()
                .iter()
                .filter(|x| !seen.contains(*x))
                .cloned()
                .collect();
            assert_eq!(fresh.len(), 1 << (n - 1));
            let alt: BTreeSet<Fraction> = p.new_breakpoints().cloned().collect();
            assert_eq!(fresh, alt);
            for x in &fresh {
                let e = cf_from_fraction(x).unwrap();
                assert_eq!(e.quotient_sum(), n as u64 + 1);
                assert_eq!(e.creation_level(), n as u64);
            }
            seen.extend(fresh);
        }
    }
}
