// Regression constants below were generated by running the enumeration
// once and are checked against later runs; they are not independent facts.

use std::collections::BTreeMap;

use commdeg::classify::{
    spectrum, verify_enumerated, verify_range, EnumConfig, EnumerationSummary, Theorem,
};
use commdeg::{DegreeConfig, ExactRational, FieldSpec, Workers};

fn counts(pairs: &[(&str, u64)]) -> BTreeMap<ExactRational, u64> {
    pairs
        .iter()
        .map(|(d, c)| (d.parse().unwrap(), *c))
        .collect()
}

fn check(q: u64, n: usize, valid: u64, expected: &[(&str, u64)]) -> EnumerationSummary {
    let f = FieldSpec::of_order(q).unwrap();
    let s = verify_enumerated(&f, n, &EnumConfig::default()).unwrap();
    assert_eq!(s.spectrum.valid, valid, "q = {q}, n = {n}");
    assert_eq!(s.spectrum.counts, counts(expected), "q = {q}, n = {n}");
    assert!(
        s.all_checks_pass(q, n),
        "q = {q}, n = {n}: {:?}",
        s.first_failure
    );
    s
}

#[test]
fn q2_n2() {
    check(2, 2, 4, &[("1", 1), ("5/8", 3)]);
}

#[test]
fn q2_n3() {
    let s = check(
        2,
        3,
        120,
        &[("1", 1), ("5/8", 49), ("7/16", 42), ("11/32", 28)],
    );
    assert_eq!(s.spectrum.candidates, 512);
    assert_eq!(
        s.derived_dims,
        [(0, 1), (1, 49), (2, 42), (3, 28)].into_iter().collect()
    );
    assert_eq!(s.tallies[&Theorem::CentralQuotient3].pass, 70);
}

#[test]
fn q3_n3() {
    check(
        3,
        3,
        1431,
        &[("1", 1), ("11/27", 338), ("17/81", 624), ("35/243", 468)],
    );
}

#[test]
fn q4_n2() {
    check(4, 2, 16, &[("1", 1), ("19/64", 15)]);
}

#[test]
#[ignore = "2^24 candidates; run with --ignored (about half a minute in release)"]
fn q2_n4() {
    check(
        2,
        4,
        34336,
        &[
            ("1", 1),
            ("5/8", 525),
            ("7/16", 4410),
            ("25/64", 2520),
            ("11/32", 10080),
            ("19/64", 840),
            ("1/4", 15960),
        ],
    );
}

#[test]
fn partitioning_does_not_matter() {
    let f = FieldSpec::of_order(3).unwrap();
    let seq = EnumConfig {
        degree: DegreeConfig::default().with_workers(Workers::Sequential),
        ..EnumConfig::default()
    };
    let whole = verify_enumerated(&f, 3, &seq).unwrap();
    let pieces = [0..1000, 1000..1001, 1001..12345, 12345..19683]
        .into_iter()
        .map(|r| verify_range(&f, 3, r, &seq).unwrap())
        .rev()
        .fold(EnumerationSummary::default(), EnumerationSummary::merge);
    assert_eq!(pieces, whole);
    for w in [Workers::Auto, Workers::Threads(3)] {
        let cfg = EnumConfig {
            degree: DegreeConfig::default().with_workers(w),
            ..EnumConfig::default()
        };
        assert_eq!(verify_enumerated(&f, 3, &cfg).unwrap(), whole);
        assert_eq!(spectrum(&f, 3, &cfg).unwrap(), whole.spectrum);
    }
}
