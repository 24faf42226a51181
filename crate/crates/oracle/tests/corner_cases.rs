use pairrank_oracle::property_suite;

#[test]
fn corner_case_battery_passes() {
    let report = property_suite();
    assert!(report.checks.len() > 80);
    let failures: Vec<String> = report
        .failures()
        .map(|c| serde_json::to_string(c).unwrap())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
