use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use farey_dim::farey::{build_partition, cf_from_fraction, cumulants, ContinuedFraction, Fraction};
use farey_dim::fb::FBConstants;
use farey_dim::stats::restricted_row;

#[test]
fn restricted_rows_are_new_breakpoints() {
    for n in 2..=14u32 {
        let row = restricted_row(n).unwrap();
        let values: Vec<Fraction> = row.elements.iter().map(|c| c.value()).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]), "row {n} not sorted");
        let part = build_partition(n - 1).unwrap();
        let created: Vec<&Fraction> = part.new_breakpoints().collect();
        assert_eq!(values.iter().collect::<Vec<_>>(), created, "row {n}");
    }
}

#[test]
fn partition_breakpoints_round_trip() {
    let part = build_partition(10).unwrap();
    let mut seen = BTreeSet::new();
    for b in &part.breakpoints()[1..] {
        let cf = cf_from_fraction(b).unwrap();
        assert!(cf.creation_level() <= 10);
        assert_eq!(&cf.value(), b);
        assert!(seen.insert(cf.quotients().to_vec()));
    }
}

/// Compares `log q_n` with its Besicovitch estimate on random expansions.
/// The gap is reported, not asserted: the estimate only holds on average.
#[test]
fn besicovitch_estimate_on_random_expansions() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let c = FBConstants::new().c;
    let mut errs = Vec::new();
    for _ in 0..1000 {
        let mut q: Vec<u64> = (0..20).map(|_| rng.gen_range(1..=9)).collect();
        if q[19] == 1 {
            q[19] = 2;
        }
        let cf = ContinuedFraction::new(q).unwrap();
        let exact = cumulants(&cf)
            .last()
            .unwrap()
            .to_string()
            .parse::<f64>()
            .unwrap()
            .ln();
        let est = cf.log_besicovitch_q(c);
        errs.push((est - exact) / exact);
    }
    let mean = errs.iter().sum::<f64>() / errs.len() as f64;
    let worst = errs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    println!("relative error of log q_20: mean {mean:.4}, worst {worst:.4}");
    assert!(worst < 0.5);
}
