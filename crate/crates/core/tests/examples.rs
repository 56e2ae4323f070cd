//! Runs every example through its `run_example` entry point.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }
    };
}

example!(evaluate_families);
example!(hpye_equivalents);
example!(priority_ratio);
example!(axiom_search);
example!(compliance_matrix);
example!(threshold_regions);
example!(file_io);
example!(example1_report);

#[test]
fn evaluate_families_ranks_every_family() {
    let rows = evaluate_families::run_example().unwrap();
    assert_eq!(rows.len(), 10);
    let qaly = rows.iter().find(|r| r.0 == "PowerQALY").unwrap();
    assert!(qaly.1 < qaly.2, "PowerQALY prefers Phi at gamma = 0.5");
}

#[test]
fn hpye_equivalents_preserve_value() {
    assert!(hpye_equivalents::run_example().unwrap() < 1e-12);
}

#[test]
fn priority_ratio_favours_short_lives() {
    let (ratio, gain) = priority_ratio::run_example().unwrap();
    assert!((ratio - 8f64.sqrt()).abs() < 1e-12);
    assert!((gain - (15f64.sqrt() - 5f64.sqrt())).abs() < 1e-12);
}

#[test]
fn axiom_search_finds_planted_violations() {
    let v = axiom_search::run_example().unwrap();
    assert!(!v[0].holds());
    assert!(v[1].holds());
    assert!(!v[2].holds());
}

#[test]
fn compliance_matrix_covers_all_cells() {
    let m = compliance_matrix::run_example().unwrap();
    assert_eq!(m.axioms.len(), 17);
    assert_eq!(m.columns.len(), 9);
}

#[test]
fn threshold_regions_match_worked_example() {
    let r = threshold_regions::run_example().unwrap();
    assert_eq!(r[0].set.to_string(), "(0, 0.32193] U [0.67807, 1)");
    assert_eq!(r[1].set.to_string(), "(0, 0.5]");
}

#[test]
fn file_io_round_trips() {
    assert!((file_io::run_example().unwrap() - 15.268827230335916).abs() < 1e-12);
}

#[test]
fn example1_report_lists_every_line() {
    let report = example1_report::run_example().unwrap();
    assert_eq!(report.lines.len(), 7);
    assert!(report.region("QalyPaly").is_some());
}
