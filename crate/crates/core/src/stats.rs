//! The restricted Farey tree and the statistical contractor `log A`.
//!
//! Row `N` of the restricted tree holds the `2^{N−2}` canonical expansions
//! with `Σ a_j = N`, i.e. the breakpoints created at Farey level `N − 1`.
//! Each element `[…, a_n]` has the two children `[…, a_n + 1]` and
//! `[…, a_n − 1, 2]`.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::farey::{ContinuedFraction, Fraction};
use crate::fb::FBConstants;

pub const MAX_ROW: u32 = 26;
pub const MAX_CENSUS_ROW: u32 = 22;

#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedRow {
    pub n: u32,
    pub elements: Vec<ContinuedFraction>,
}

/// The two children of a tree element, in the order that keeps rows sorted
/// by value.
pub fn children(q: &[u64]) -> [Vec<u64>; 2] {
    let n = q.len();
    let last = q[n - 1];
    let mut plus = q.to_vec();
    plus[n - 1] += 1;
    let mut split = q.to_vec();
    if last == 1 {
        // […, a, 0, 2] is […, a + 2]
        split.pop();
        match split.last_mut() {
            Some(a) => *a += 2,
            None => split.push(2),
        }
    } else {
        split[n - 1] -= 1;
        split.push(2);
    }
    if n % 2 == 1 {
        [plus, split]
    } else {
        [split, plus]
    }
}

fn walk(q: &[u64], row: u32, max_row: u32, visit: &mut impl FnMut(u32, &[u64])) {
    visit(row, q);
    if row < max_row {
        for c in children(q) {
            walk(&c, row + 1, max_row, visit);
        }
    }
}

fn row_raw(n: u32) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(1usize << (n - 2));
    walk(&[2], 2, n, &mut |r, q| {
        if r == n {
            out.push(q.to_vec())
        }
    });
    out
}

/// Visits every element of rows `2 ..= max_row`, splitting the tree at a
/// fixed row for parallel folding. Partial results are merged in tree order.
fn fold_tree<T, V, M>(max_row: u32, init: impl Fn() -> T + Sync, visit: V, merge: M) -> T
where
    T: Send,
    V: Fn(&mut T, u32, &[u64]) + Sync,
    M: Fn(T, T) -> T + Sync,
{
    let split = max_row.min(10);
    let mut top = init();
    let seeds = if split == 2 {
        vec![vec![2]]
    } else {
        walk(&[2], 2, split - 1, &mut |r, q| visit(&mut top, r, q));
        row_raw(split)
    };
    let parts: Vec<T> = seeds
        .par_iter()
        .map(|s| {
            let mut acc = init();
            walk(s, split, max_row, &mut |r, q| visit(&mut acc, r, q));
            acc
        })
        .collect();
    parts.into_iter().fold(top, &merge)
}

/// Row `N` of the restricted tree, in increasing order of value.
pub fn restricted_row(n: u32) -> Result<RestrictedRow> {
    if !(2..=MAX_ROW).contains(&n) {
        return Err(Error::Resource(format!("row {n} outside 2..={MAX_ROW}")));
    }
    let elements = row_raw(n)
        .into_iter()
        .map(|q| ContinuedFraction::new(q).expect("tree elements are canonical"))
        .collect();
    Ok(RestrictedRow { n, elements })
}

/// One closed form checked against enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaCheck {
    pub name: String,
    pub k: Option<u64>,
    pub enumerated: u64,
    pub closed_form: Fraction,
}

impl FormulaCheck {
    fn new(name: &str, k: Option<u64>, enumerated: u64, closed_form: Fraction) -> Self {
        FormulaCheck {
            name: name.into(),
            k,
            enumerated,
            closed_form,
        }
    }

    pub fn agrees(&self) -> bool {
        self.discrepancy().is_zero()
    }

    /// `closed_form − enumerated`.
    pub fn discrepancy(&self) -> Fraction {
        &self.closed_form - &Fraction::from_integer(self.enumerated)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientCensus {
    pub n: u32,
    /// Occurrences of each quotient value over rows `2 ..= N`.
    pub count_by_value: BTreeMap<u64, u64>,
    /// Occurrences of each quotient value in row `r`, for `r = 2 ..= N`.
    pub per_row_counts: Vec<BTreeMap<u64, u64>>,
    pub row_sizes: Vec<u64>,
    /// `Σ n` over row `N`.
    pub length_sum: u64,
    /// `Σ n` over rows `2 ..= N`.
    pub cumulative_length_sum: u64,
    pub total_elements: u64,
    pub checks: Vec<FormulaCheck>,
}

impl CoefficientCensus {
    pub fn count(&self, k: u64) -> u64 {
        self.count_by_value.get(&k).copied().unwrap_or(0)
    }

    /// Exact mean of `n/N` over rows `2 ..= N`.
    pub fn mean_relative_length(&self) -> Fraction {
        Fraction::new(
            self.cumulative_length_sum,
            self.total_elements * self.n as u64,
        )
        .unwrap()
    }

    pub fn check(&self, name: &str, k: Option<u64>) -> Option<&FormulaCheck> {
        self.checks.iter().find(|c| c.name == name && c.k == k)
    }
}

/// `m · 2^e` as an exact fraction, `e` possibly negative.
fn pow2(m: i64, e: i64) -> Fraction {
    let two = BigInt::from(2);
    if e >= 0 {
        Fraction::from_integer(BigInt::from(m) * two.pow(e as u32))
    } else {
        Fraction::new(m, two.pow((-e) as u32)).unwrap()
    }
}

fn binomial_length_sum(n: u32) -> Fraction {
    let m = (n - 2) as u64;
    let mut c = BigInt::one();
    let mut s = BigInt::zero();
    for j in 0..=m {
        s += &c * BigInt::from(j + 1);
        c = c * BigInt::from(m - j) / BigInt::from(j + 1);
    }
    Fraction::from_integer(s)
}

#[derive(Default)]
struct Tally {
    rows: Vec<BTreeMap<u64, u64>>,
    sizes: Vec<u64>,
    lengths: Vec<u64>,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        if self.rows.len() < o.rows.len() {
            self.rows.resize(o.rows.len(), BTreeMap::new());
            self.sizes.resize(o.rows.len(), 0);
            self.lengths.resize(o.rows.len(), 0);
        }
        for (i, m) in o.rows.into_iter().enumerate() {
            for (k, v) in m {
                *self.rows[i].entry(k).or_insert(0) += v;
            }
            self.sizes[i] += o.sizes[i];
            self.lengths[i] += o.lengths[i];
        }
        self
    }
}

/// Quotient census of rows `2 ..= N` with every closed form checked.
pub fn census(n: u32) -> Result<CoefficientCensus> {
    if !(2..=MAX_CENSUS_ROW).contains(&n) {
        return Err(Error::Resource(format!(
            "census row {n} outside 2..={MAX_CENSUS_ROW}"
        )));
    }
    let rows = (n - 1) as usize;
    let init = || Tally {
        rows: vec![BTreeMap::new(); rows],
        sizes: vec![0; rows],
        lengths: vec![0; rows],
    };
    let t = fold_tree(
        n,
        init,
        |t, r, q| {
            let i = (r - 2) as usize;
            t.sizes[i] += 1;
            t.lengths[i] += q.len() as u64;
            for &a in q {
                *t.rows[i].entry(a).or_insert(0) += 1;
            }
        },
        Tally::merge,
    );

    let mut count_by_value = BTreeMap::new();
    for m in &t.rows {
        for (&k, &v) in m {
            *count_by_value.entry(k).or_insert(0) += v;
        }
    }
    let length_sum = *t.lengths.last().unwrap();
    let cumulative_length_sum: u64 = t.lengths.iter().sum();
    let total_elements: u64 = t.sizes.iter().sum();
    let ni = n as i64;
    let get = |k: u64| count_by_value.get(&k).copied().unwrap_or(0);

    let mut checks = vec![
        FormulaCheck::new("row_size", None, *t.sizes.last().unwrap(), pow2(1, ni - 2)),
        FormulaCheck::new(
            "total_elements",
            None,
            total_elements,
            pow2(1, ni - 1) - Fraction::one(),
        ),
        FormulaCheck::new("row_length_sum", None, length_sum, pow2(ni, ni - 3)),
        FormulaCheck::new(
            "row_length_binomial",
            None,
            length_sum,
            binomial_length_sum(n),
        ),
        FormulaCheck::new(
            "cumulative_length_sum",
            None,
            cumulative_length_sum,
            pow2(ni - 1, ni - 2),
        ),
        FormulaCheck::new("count", Some(1), get(1), pow2(ni - 2, ni - 3)),
        FormulaCheck::new("count", Some(2), get(2), pow2(ni + 1, ni - 4)),
    ];
    for k in 3..=n as u64 {
        let ki = k as i64;
        checks.push(FormulaCheck::new(
            "count",
            Some(k),
            get(k),
            pow2(ni + 3 - ki, ni - ki - 2),
        ));
    }

    Ok(CoefficientCensus {
        n,
        count_by_value,
        per_row_counts: t.rows,
        row_sizes: t.sizes,
        length_sum,
        cumulative_length_sum,
        total_elements,
        checks,
    })
}

pub const MIN_SERIES_JMAX: usize = 32;

/// `log A = log c + Σ_{j ≤ jmax} log(j+1)/2^j`, with a bound on the
/// dropped tail `Σ_{j > jmax}`.
pub fn log_a_series(jmax: usize) -> Result<(f64, f64)> {
    if jmax < MIN_SERIES_JMAX {
        return Err(Error::Precision(format!(
            "jmax = {jmax} is below {MIN_SERIES_JMAX}"
        )));
    }
    let head: f64 = (1..=jmax)
        .rev()
        .map(|j| ((j + 1) as f64).ln() * 0.5f64.powi(j as i32))
        .sum();
    let scale = 0.5f64.powi(jmax as i32);
    let jp2 = (jmax + 2) as f64;
    let tail = scale * (jp2.ln() + 1.0 / jp2);
    Ok((FBConstants::new().c.ln() + head, tail))
}

/// `log 2 / log A`.
pub fn statistical_dimension(jmax: usize) -> Result<f64> {
    Ok(LN_2 / log_a_series(jmax)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CumulantMode {
    /// `log q_n ≈ n log c + Σ log(a_j + 1)`.
    Besicovitch,
    /// `log q_n` from the exact recurrence.
    Exact,
}

fn exact_log_q(q: &[u64]) -> f64 {
    let (mut a, mut b) = (0u128, 1u128);
    for &x in q {
        let c = x as u128 * b + a;
        a = b;
        b = c;
    }
    (b as f64).ln()
}

/// Tree average of `2 log q_n`, normalized by `N (2^{N−1} − 1)`.
pub fn empirical_log_a(n: u32, mode: CumulantMode) -> Result<f64> {
    if !(4..=MAX_CENSUS_ROW).contains(&n) {
        return Err(Error::Resource(format!(
            "row {n} outside 4..={MAX_CENSUS_ROW}"
        )));
    }
    let lc = FBConstants::new().c.ln();
    let total = fold_tree(
        n,
        || 0.0f64,
        |s, _, q| {
            *s += 2.0
                * match mode {
                    CumulantMode::Besicovitch => {
                        q.len() as f64 * lc + q.iter().map(|&a| ((a + 1) as f64).ln()).sum::<f64>()
                    }
                    CumulantMode::Exact => exact_log_q(q),
                }
        },
        |a, b| a + b,
    );
    let weight = n as f64 * ((1u64 << (n - 1)) - 1) as f64;
    Ok(total / weight)
}

/// `¼ (1 − 1/N) 2^N / (2^{N−1} − 1)`.
pub fn mean_relative_length_closed_form(n: u32) -> Fraction {
    let ni = n as i64;
    let num = pow2(ni - 1, ni - 2);
    let den = Fraction::from_integer(ni) * (pow2(1, ni - 1) - Fraction::one());
    num / den
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumeratorCheck {
    /// `|Σ_{j ≤ 64} j/2^j − 2|`.
    pub residual: f64,
    /// Exact `Σ_{j ≤ 10} j/2^j`.
    pub partial_10: Fraction,
    /// `(log 2 / 2) Σ_{j ≤ 64} j/2^j`, the information-point numerator.
    pub numerator: f64,
    /// `|information point − log 2 / log A|`.
    pub coincidence: f64,
}

/// `Σ j/2^j` as an exact fraction.
pub fn weighted_geometric_partial(jmax: u32) -> Fraction {
    (1..=jmax as i64).map(|j| pow2(j, -j)).sum()
}

pub fn numerator_identity_check() -> Result<NumeratorCheck> {
    let s: f64 = (1..=64).rev().map(|j| j as f64 * 0.5f64.powi(j)).sum();
    let ip = crate::fb::information_point(64)?;
    Ok(NumeratorCheck {
        residual: (s - 2.0).abs(),
        partial_10: weighted_geometric_partial(10),
        numerator: 0.5 * LN_2 * s,
        coincidence: (ip.value - statistical_dimension(64)?).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::{build_partition, fraction_from_cf};
    use std::collections::BTreeSet;

    fn rows_as_vecs(n: u32) -> Vec<Vec<u64>> {
        restricted_row(n)
            .unwrap()
            .elements
            .iter()
            .map(|e| e.quotients().to_vec())
            .collect()
    }

    #[test]
    fn first_rows() {
        assert_eq!(rows_as_vecs(2), vec![vec![2]]);
        assert_eq!(rows_as_vecs(3), vec![vec![3], vec![1, 2]]);
        let r4: BTreeSet<Vec<u64>> = rows_as_vecs(4).into_iter().collect();
        let want: BTreeSet<Vec<u64>> = [vec![4], vec![2, 2], vec![1, 1, 2], vec![1, 3]]
            .into_iter()
            .collect();
        assert_eq!(r4, want);
        let r5 = rows_as_vecs(5);
        assert_eq!(r5.len(), 8);
        assert!(r5.contains(&vec![2, 1, 2]) && r5.contains(&vec![1, 1, 1, 2]));
        assert!(restricted_row(1).is_err() && restricted_row(27).is_err());
    }

    #[test]
    fn contraction_of_zero_quotient() {
        assert_eq!(children(&[3, 1]), [vec![5], vec![3, 2]]);
        assert_eq!(children(&[1]), [vec![2], vec![2]]);
    }

    #[test]
    fn rows_are_sorted_and_match_new_breakpoints() {
        for n in 2..=14u32 {
            let row = restricted_row(n).unwrap();
            assert_eq!(row.elements.len(), 1 << (n - 2));
            let vals: Vec<Fraction> = row.elements.iter().map(fraction_from_cf).collect();
            assert!(vals.windows(2).all(|w| w[0] < w[1]));
            let fresh: Vec<Fraction> = build_partition(n - 1)
                .unwrap()
                .new_breakpoints()
                .cloned()
                .collect();
            assert_eq!(vals, fresh);
            assert!(row.elements.iter().all(|e| e.quotient_sum() == n as u64));
        }
    }

    #[test]
    fn census_small_examples() {
        let c = census(4).unwrap();
        assert_eq!(c.length_sum, 8);
        assert_eq!(c.count(1), 4);
        assert_eq!(c.count(2), 5);
        let c = census(5).unwrap();
        assert_eq!(c.count(4), 2);
        let last = c.check("count", Some(5)).unwrap();
        assert_eq!(last.enumerated, 1);
        assert_eq!(last.closed_form, Fraction::new(3, 4).unwrap());
        assert_eq!(last.discrepancy(), Fraction::new(-1, 4).unwrap());
    }

    #[test]
    fn census_closed_forms() {
        for n in 2..=16u32 {
            let c = census(n).unwrap();
            for chk in &c.checks {
                let expected = match (chk.name.as_str(), chk.k) {
                    ("count", Some(2)) => n >= 3,
                    ("count", Some(k)) if k == n as u64 && k >= 3 => false,
                    _ => true,
                };
                assert_eq!(chk.agrees(), expected, "N={n} {} {:?}", chk.name, chk.k);
            }
            assert_eq!(
                c.mean_relative_length(),
                mean_relative_length_closed_form(n)
            );
            let per_row: u64 = c
                .per_row_counts
                .iter()
                .map(|m| m.values().sum::<u64>())
                .sum();
            assert_eq!(per_row, c.cumulative_length_sum);
        }
        assert!(census(23).is_err());
    }

    #[test]
    fn log_a_values() {
        let (la, tail) = log_a_series(64).unwrap();
        assert!((la - 0.796_364_251_060_818).abs() < 1e-9);
        assert!(tail < 1e-18);
        assert!(tail <= (66f64.ln() + 2.0) * 0.5f64.powi(64));
        let (la32, tail32) = log_a_series(32).unwrap();
        assert!((la32 - la).abs() < 1e-8);
        assert!(la - la32 <= tail32 && la >= la32);
        assert!((statistical_dimension(64).unwrap() - 0.870_389_623_387_313).abs() < 1e-12);
        assert!(matches!(log_a_series(31), Err(Error::Precision(_))));
    }

    #[test]
    fn numerator_identity() {
        let c = numerator_identity_check().unwrap();
        assert!(c.residual <= 1e-15);
        assert_eq!(
            c.partial_10,
            Fraction::from_integer(2) - Fraction::new(12, 1024).unwrap()
        );
        assert!((c.numerator - LN_2).abs() < 1e-15);
        assert!(c.coincidence <= 1e-9);
    }

    #[test]
    fn empirical_log_a_small() {
        let (la, _) = log_a_series(64).unwrap();
        let b12 = empirical_log_a(12, CumulantMode::Besicovitch).unwrap();
        let b14 = empirical_log_a(14, CumulantMode::Besicovitch).unwrap();
        assert!((b14 - la).abs() < (b12 - la).abs());
        let e12 = empirical_log_a(12, CumulantMode::Exact).unwrap();
        assert!(e12.is_finite() && e12 > 0.0);
        assert!(empirical_log_a(3, CumulantMode::Exact).is_err());
    }

    #[test]
    fn exact_log_q_matches_cumulants() {
        for q in rows_as_vecs(9) {
            let cf = ContinuedFraction::new(q.clone()).unwrap();
            let d = cf.cumulants().pop().unwrap();
            assert!((exact_log_q(&q) - d.to_string().parse::<f64>().unwrap().ln()).abs() < 1e-12);
        }
    }
}
