use l2lab_web::{catalog_json, certify_json, octahedron_json};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn pentagon_round_trip() {
    let c = parse(catalog_json("polygon", Some(5)));
    assert_eq!(c["f_vector"], serde_json::json!([5, 5]));
    assert_eq!(c["euler_l2"], "-1/4");
    let cert = parse(certify_json(&c["complex"].to_string(), 0));
    assert_eq!(cert["degrees"], serde_json::json!(["0", "1/4", "0"]));
    assert_eq!(cert["verified"], true);
}

#[test]
fn octahedron_three() {
    let s = parse(octahedron_json(3));
    assert_eq!(s["steps"].as_array().unwrap().len(), 8);
    assert_eq!(s["target_f_vector"], serde_json::json!([14, 36, 24]));
    assert_eq!(s["verified"], true);
}

#[test]
fn errors_are_strings() {
    assert!(catalog_json("nonexistent", None).is_err());
    assert!(certify_json("{", 0).is_err());
    assert!(octahedron_json(9).is_err());
}
