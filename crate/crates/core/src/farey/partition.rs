use num_bigint::BigInt;
use num_traits::One;

use super::fraction::Fraction;
use crate::error::{Error, Result};

/// Default largest level accepted by partition builders.
pub const DEFAULT_LEVEL_CAP: u32 = 24;

/// One interval `[a/b, a′/b′]` of a Farey–Brocot partition, with machine
/// integers (denominators at level `N` never exceed `F_{N+2}`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FareyInterval {
    pub a: u64,
    pub b: u64,
    pub a2: u64,
    pub b2: u64,
}

impl FareyInterval {
    pub const UNIT: FareyInterval = FareyInterval {
        a: 0,
        b: 1,
        a2: 1,
        b2: 1,
    };

    pub fn left(&self) -> Fraction {
        Fraction::new(self.a, self.b).unwrap()
    }

    pub fn right(&self) -> Fraction {
        Fraction::new(self.a2, self.b2).unwrap()
    }

    /// `a′b − ab′`.
    pub fn determinant(&self) -> i128 {
        self.a2 as i128 * self.b as i128 - self.a as i128 * self.b2 as i128
    }

    /// Exact length `1/(b b′)`.
    pub fn length(&self) -> Fraction {
        Fraction::new(1, BigInt::from(self.b) * BigInt::from(self.b2)).unwrap()
    }

    pub fn length_f64(&self) -> f64 {
        1.0 / (self.b as f64 * self.b2 as f64)
    }

    pub fn mediant(&self) -> (u64, u64) {
        (self.a + self.a2, self.b + self.b2)
    }

    pub fn children(&self) -> (FareyInterval, FareyInterval) {
        let (m, n) = self.mediant();
        (
            FareyInterval {
                a2: m,
                b2: n,
                ..*self
            },
            FareyInterval {
                a: m,
                b: n,
                ..*self
            },
        )
    }
}

/// Depth-first enumerator of the level-`N` intervals in breakpoint order.
#[derive(Clone, Debug)]
pub struct FareyIntervals {
    level: u32,
    stack: Vec<(FareyInterval, u32)>,
}

impl FareyIntervals {
    fn rooted(root: FareyInterval, depth: u32, level: u32) -> Self {
        FareyIntervals {
            level,
            stack: vec![(root, depth)],
        }
    }
}

impl Iterator for FareyIntervals {
    type Item = FareyInterval;

    fn next(&mut self) -> Option<FareyInterval> {
        while let Some((iv, d)) = self.stack.pop() {
            if d == self.level {
                return Some(iv);
            }
            let (l, r) = iv.children();
            self.stack.push((r, d + 1));
            self.stack.push((l, d + 1));
        }
        None
    }
}

fn check_level(level: u32, cap: u32) -> Result<()> {
    if level == 0 {
        return Err(Error::Domain("partition level must be at least 1".into()));
    }
    if level > cap {
        return Err(Error::Resource(format!("level {level} exceeds cap {cap}")));
    }
    Ok(())
}

/// Streams the `2^N` intervals of level `N`.
pub fn intervals(level: u32) -> Result<FareyIntervals> {
    check_level(level, DEFAULT_LEVEL_CAP)?;
    Ok(FareyIntervals::rooted(FareyInterval::UNIT, 0, level))
}

/// Splits the level-`N` stream into `2^split` independent, ordered pieces.
pub fn subtrees(level: u32, split: u32) -> Result<Vec<FareyIntervals>> {
    check_level(level, DEFAULT_LEVEL_CAP)?;
    let split = split.min(level);
    let roots = FareyIntervals::rooted(FareyInterval::UNIT, 0, split);
    Ok(roots
        .map(|r| FareyIntervals::rooted(r, split, level))
        .collect())
}

/// Materialized level-`N` Farey–Brocot partition of `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FareyPartition {
    level: u32,
    breakpoints: Vec<Fraction>,
}

impl FareyPartition {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// The `2^N + 1` breakpoints from `0/1` to `1/1`.
    pub fn breakpoints(&self) -> &[Fraction] {
        &self.breakpoints
    }

    pub fn interval_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn intervals(&self) -> impl Iterator<Item = (&Fraction, &Fraction)> {
        self.breakpoints.windows(2).map(|w| (&w[0], &w[1]))
    }

    pub fn lengths(&self) -> Vec<Fraction> {
        self.intervals().map(|(l, r)| r - l).collect()
    }

    /// Farey–Brocot mass of every interval, `1/2^N`.
    pub fn cell_measure(&self) -> Fraction {
        Fraction::new(1, BigInt::one() << self.level as usize).unwrap()
    }

    /// Breakpoints created in the last interpolation round.
    pub fn new_breakpoints(&self) -> impl Iterator<Item = &Fraction> {
        self.breakpoints.iter().skip(1).step_by(2)
    }
}

pub fn build_partition(level: u32) -> Result<FareyPartition> {
    build_partition_with_cap(level, DEFAULT_LEVEL_CAP)
}

pub fn build_partition_with_cap(level: u32, cap: u32) -> Result<FareyPartition> {
    check_level(level, cap)?;
    let mut breakpoints = Vec::with_capacity((1usize << level) + 1);
    breakpoints.push(Fraction::zero());
    for iv in FareyIntervals::rooted(FareyInterval::UNIT, 0, level) {
        breakpoints.push(iv.right());
    }
    Ok(FareyPartition { level, breakpoints })
}
