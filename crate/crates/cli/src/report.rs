//! Human and machine renderings of structure and degree reports.
//!
//! The machine form is one `key=value` pair per line; [`parse_machine`]
//! reads it back.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use commdeg::algebra::StructureReport;
use commdeg::{DegreeReport, ExactRational};

pub fn structure_line(s: &StructureReport) -> String {
    let class = match s.nilpotency_class {
        Some(c) => format!("class {c}"),
        None => "not nilpotent".to_string(),
    };
    format!(
        "dim L^2 = {}, dim Z = {}, {class}",
        s.dim_derived, s.dim_center
    )
}

pub fn degree_line(d: &ExactRational) -> String {
    format!("d = {d} ({})", d.to_decimal(6))
}

fn histogram_text(r: &DegreeReport) -> String {
    r.rank_histogram
        .iter()
        .map(|(k, c)| format!("{k}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn human(r: &DegreeReport) -> String {
    let mut out = String::new();
    writeln!(out, "q = {}, n = {}", r.q, r.structure.dim).unwrap();
    writeln!(out, "{}", structure_line(&r.structure)).unwrap();
    writeln!(out, "{}", degree_line(&r.degree)).unwrap();
    writeln!(out, "method: {}", r.method).unwrap();
    writeln!(out, "rank histogram: {}", histogram_text(r)).unwrap();
    out
}

pub fn machine(r: &DegreeReport) -> String {
    let s = &r.structure;
    let mut out = String::new();
    writeln!(out, "q={}", r.q).unwrap();
    writeln!(out, "n={}", s.dim).unwrap();
    writeln!(out, "dim_derived={}", s.dim_derived).unwrap();
    writeln!(out, "dim_center={}", s.dim_center).unwrap();
    let class = s
        .nilpotency_class
        .map_or("none".to_string(), |c| c.to_string());
    writeln!(out, "class={class}").unwrap();
    writeln!(out, "degree={}", r.degree).unwrap();
    writeln!(out, "decimal={}", r.decimal()).unwrap();
    writeln!(out, "method={}", r.method).unwrap();
    for (k, c) in &r.rank_histogram {
        writeln!(out, "rank.{k}={c}").unwrap();
    }
    out
}

/// Splits a machine report into its key/value pairs.
pub fn parse_machine(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

/// The exact degree from a machine report, if present and well formed.
pub fn machine_degree(text: &str) -> Option<ExactRational> {
    parse_machine(text).get("degree")?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use commdeg::algebra::{affine, heisenberg};
    use commdeg::degree::degree_auto;
    use commdeg::{DegreeConfig, FieldSpec};

    #[test]
    fn heisenberg_lines() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let r = degree_auto(&heisenberg(&f2, 1).unwrap(), &DegreeConfig::default()).unwrap();
        let text = human(&r);
        assert!(text.contains("dim L^2 = 1, dim Z = 1, class 2"));
        assert!(text.contains("d = 5/8 (0.625000)"));
        assert!(text.contains("rank histogram: 0:2 1:6"));
    }

    #[test]
    fn machine_round_trip() {
        for q in [2, 3, 4, 5] {
            let f = FieldSpec::of_order(q).unwrap();
            let r = degree_auto(&affine(&f), &DegreeConfig::default()).unwrap();
            let m = machine(&r);
            assert_eq!(machine_degree(&m), Some(r.degree.clone()));
            assert_eq!(parse_machine(&m)["class"], "none");
        }
    }
}
