use flexkin_core::families::catalog::{example_orientation, example_orientations_f64, example_spec, verify_example};
use flexkin_core::families::{set_b_coefficients, solve_orientations, FamilySpec, OrientationStatus};
use flexkin_core::flexion::FlexionClass;
use flexkin_core::ratpoly::{int, rat};

#[test]
fn every_example_reproduces() {
    for n in 1..=7 {
        let r = verify_example(n).unwrap();
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passes).collect();
        assert!(r.passes, "example {n}: {failed:?}");
    }
}

#[test]
fn rational_orientations() {
    let want = [(2, rat(307, 3261)), (3, rat(-2, 37)), (4, rat(4834, 3645)), (5, rat(91, 138)), (6, rat(-9, 25))];
    for (n, f1) in want {
        assert_eq!(example_orientation(n).unwrap(), Some((int(1), f1)));
    }
    assert_eq!(example_orientation(1).unwrap(), None);
}

#[test]
fn radical_examples_have_two_order_two_orientations() {
    for n in [1, 7] {
        let r = solve_orientations(&example_spec(n).unwrap()).unwrap();
        let raising: Vec<_> = r.orientations.iter().filter(|o| o.status == OrientationStatus::OrderRaising).collect();
        assert_eq!(raising.len(), 2);
        assert!(raising.iter().all(|o| o.class == Some(FlexionClass::OrderAtLeast2) && o.identity_multiplicity == Some(3)));
        assert_eq!(example_orientations_f64(n).unwrap().len(), 2);
    }
}

#[test]
fn misprinted_coefficient() {
    let spec = example_spec(4).unwrap();
    assert_eq!(spec.p("b6"), &int(6));
    let printed = spec.with_param("b6", int(0)).unwrap();
    assert_eq!(set_b_coefficients(&printed), Some((rat(-11648, 289), rat(6234, 289))));
}

#[test]
fn specs_survive_json() {
    for n in 1..=7 {
        let spec = example_spec(n).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: FamilySpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}

#[test]
fn unknown_parameter_is_rejected() {
    let text = r#"{"tag":"A-translation","params":{"a5":"6","a6":"-5","b5":"3","b6":"-2","l1":"3","l2":"-2","l3":"1","zz":"1"}}"#;
    assert!(serde_json::from_str::<FamilySpec>(text).is_err());
}
