use serde_json::Value;

use statikit_web::{check_static, chip_firing, statify_plane};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn plane_statification_of_two_squares() {
    let out = parse(statify_plane("x^2, y^2"));
    let kernel = out["kernel"].as_array().unwrap();
    assert!(kernel == &[serde_json::json!("(y^2, -x^2)")] || kernel == &[serde_json::json!("(-y^2, x^2)")]);
    assert_eq!(out["fan"], serde_json::json!([[[0, 1], [1, 1]], [[1, 0], [1, 1]]]));
    assert_eq!(out["valid"], true);
    assert!(out["charts"].as_array().unwrap().iter().all(|c| c["static"] == true));
    assert!(out["cells"].as_array().unwrap().len() >= 3);
}

#[test]
fn staticity_of_orbit_closures() {
    let point = parse(check_static("x, y", 2));
    assert_eq!((point["static"].as_bool(), point["log_flat"].as_bool()), (Some(false), Some(false)));
    let line = parse(check_static("x", 2));
    assert_eq!((line["static"].as_bool(), line["log_flat"].as_bool()), (Some(true), Some(false)));
    assert_eq!(line["faces"].as_array().unwrap().len(), 4);
}

#[test]
fn chip_firing_on_a_triangle() {
    let out = parse(chip_firing(3, "0-1 1-2 2-0", "2 -1 4", "3 -3 5"));
    assert_eq!(out["jacobian"], serde_json::json!(["3"]));
    assert_eq!(out["equivalent"], true);
    assert_eq!(out["script"], serde_json::json!([0, 1, 0]));
    let out = parse(chip_firing(3, "0-1 1-2 2-0", "1 0 0", "0 1 0"));
    assert_eq!(out["script"], Value::Null);
}

#[test]
fn errors_are_reported_as_json() {
    assert!(parse(statify_plane("x^^2")).get("error").is_some());
    assert!(parse(chip_firing(3, "0-1 1-5", "0 0 0", "0 0 0")).get("error").is_some());
    assert!(parse(check_static("", 2)).get("error").is_some());
}
