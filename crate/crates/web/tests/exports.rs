use realquad_web::{class_number_json, euler_curve, family_scatter};

#[test]
fn report_for_small_discriminants() {
    let v: serde_json::Value = serde_json::from_str(&class_number_json(229).unwrap()).unwrap();
    assert_eq!(v["h"], 3);
    let v: serde_json::Value = serde_json::from_str(&class_number_json(5).unwrap()).unwrap();
    assert_eq!((v["h"].as_u64(), v["unit_a"].as_str(), v["unit_b"].as_str()), (Some(1), Some("1"), Some("1")));
    assert!(class_number_json(9).is_err());
    assert!(class_number_json(2_000_001).is_err());
}

#[test]
fn euler_curve_approaches_the_exact_value() {
    let c = euler_curve(13, 100_000, 12).unwrap();
    assert_eq!(c.len(), 25);
    let exact = c[24];
    assert!((exact - 0.662_735_391_071_845_5).abs() < 1e-12);
    let last = c[23];
    assert!((last / exact - 1.0).abs() < 0.01, "{last} vs {exact}");
    assert!((c[22] - 100_000.0).abs() < 1e-6);
    assert!(euler_curve(12, 1, 5).is_err());
}

#[test]
fn scatter_lists_family_members() {
    let s = family_scatter(101, 1000).unwrap();
    let ds: Vec<f64> = s.iter().step_by(2).copied().collect();
    assert_eq!(ds, vec![5.0, 17.0, 37.0, 65.0, 101.0]);
    assert!(s.iter().skip(1).step_by(2).all(|v| v.is_finite() && *v > 0.0));
    assert!(family_scatter(3, 100).is_err());
}
