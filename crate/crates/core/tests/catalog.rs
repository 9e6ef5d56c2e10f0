use filicheck_core::catalog::{builtin, catalog_keys, verify_catalog, verify_entry};
use filicheck_core::format::{parse, serialize};

#[test]
fn every_expectation_recomputes() {
    let failures: Vec<String> = verify_catalog()
        .into_iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {:?}", c.key, c.mismatches))
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn round_trip_on_builtins() {
    for key in catalog_keys() {
        let g = builtin(&key).unwrap().algebra;
        assert_eq!(parse(&serialize(&g)).unwrap(), g, "{key}");
    }
}

#[test]
fn corrupted_entry_reports_diff() {
    let mut entry = builtin("g6_2").unwrap();
    entry.expected.insert(
        filicheck_core::catalog::Property::Filiform,
        filicheck_core::catalog::Expected::Bool(true),
    );
    let check = verify_entry(&entry);
    assert!(!check.passed);
    assert_eq!(check.mismatches.len(), 1);
}
