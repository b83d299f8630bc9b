use vertop::config::{parse_rational, parse_window};
use vertop::report::Report;
use vertop_core::{CheckEntry, Rational};

#[test]
fn empty_suite() {
    let r = Report::new("heisenberg", Vec::new(), Vec::new(), false);
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["suite"], "heisenberg");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["entries"], serde_json::json!([]));
    assert!(r.all_pass());
}

#[test]
fn entries_are_sorted_and_witnesses_kept() {
    let mut bad = CheckEntry::new("b-check").param("m", 2);
    bad.fail("mode pair (1,-2) probe #3: x[1,-1] vs 0");
    let entries = vec![
        bad,
        CheckEntry::new("a-check").param("z", 1).param("a", 0),
        CheckEntry::new("b-check").param("m", 1),
    ];
    let r = Report::new("s", [("N".to_string(), "3".to_string())], entries, false);
    let names: Vec<_> = r
        .entries
        .iter()
        .map(|e| (e.name.as_str(), e.params.get("m").cloned()))
        .collect();
    assert_eq!(
        names,
        [
            ("a-check", None),
            ("b-check", Some("1".into())),
            ("b-check", Some("2".into()))
        ]
    );
    assert!(!r.all_pass());
    let json = r.to_json();
    assert!(json.contains("\"witness\": \"mode pair (1,-2) probe #3: x[1,-1] vs 0\""));
    assert_eq!(Report::from_json(&json).unwrap(), r);
    assert!(r.to_text().contains("FAIL  b-check m=2"));
}

#[test]
fn value_parsers() {
    assert_eq!(
        parse_window("-2..2").unwrap(),
        vertop_core::ModeWindow::new(-2, 2)
    );
    assert!(parse_window("2..-2").is_err());
    assert!(parse_window("2").is_err());
    assert_eq!(parse_rational("9/4").unwrap(), Rational::new(9, 4));
    assert_eq!(parse_rational("-3").unwrap(), Rational::from_integer(-3));
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("x").is_err());
}
