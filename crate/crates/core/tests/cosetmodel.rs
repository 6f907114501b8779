use amfcong::cosetmodel::document::{model_hash, parse_model, ModelDocument};
use amfcong::cosetmodel::random::random_valid_model;
use amfcong::cosetmodel::toy::{flag_model, group_model, ribet_model, tiny_model};
use amfcong::cosetmodel::{validate, Invariant, Level, ModelError, Side, ValidatedModel};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(seed: u64) -> ValidatedModel {
    ValidatedModel::new(random_valid_model(&mut ChaCha8Rng::seed_from_u64(seed), 24)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let m = model(seed);
        let text = ModelDocument::from_model(&m).to_json_pretty();
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, m.model());
        prop_assert_eq!(model_hash(&back), model_hash(&m));
    }

    #[test]
    fn mass_formula_gives_the_index(seed in any::<u64>()) {
        let m = model(seed);
        for side in [Side::K, Side::Kp] {
            // [K:J] = w_K(x) * sum over the fiber of 1/w_J, at every x
            let wk = m.weights(side.level());
            let wj = m.weights(Level::J);
            for x in 0..m.size(side.level()) {
                let mut mass = num_rational::BigRational::from_integer(0.into());
                for (y, &px) in m.projection(side).iter().enumerate() {
                    if px == x {
                        mass += num_rational::BigRational::new(wk[x].clone(), wj[y].clone());
                    }
                }
                prop_assert_eq!(mass, num_rational::BigRational::from_integer(m.index(side).clone()));
            }
        }
    }

    #[test]
    fn averaging_projectors_are_idempotent(seed in any::<u64>()) {
        let m = model(seed);
        for side in [Side::K, Side::Kp] {
            let e = m.averaging_projector(side);
            prop_assert_eq!(&e * &e, e);
        }
    }

    #[test]
    fn fibers_stay_inside_classes(seed in any::<u64>()) {
        let m = model(seed);
        let p = m.class_partition();
        for side in [Side::K, Side::Kp] {
            let proj = m.projection(side);
            for y in 0..proj.len() {
                for z in 0..proj.len() {
                    if proj[y] == proj[z] {
                        prop_assert_eq!(p.class_of[y], p.class_of[z]);
                    }
                }
            }
        }
    }

    #[test]
    fn doubling_one_weight_breaks_the_mass_formula(seed in any::<u64>()) {
        let m = model(seed);
        prop_assume!(m.size(Level::K) >= 2);
        let mut doc: serde_json::Value = serde_json::from_str(&ModelDocument::from_model(&m).to_json_pretty()).unwrap();
        let first = doc["x_k"][0].as_str().unwrap().to_string();
        let w: BigInt = doc["w_k"][&first].as_str().unwrap().parse().unwrap();
        doc["w_k"][&first] = serde_json::json!((w * BigInt::from(2)).to_string());
        let report = validate(&parse_model(&doc.to_string()).unwrap());
        prop_assert!(report.failed(Invariant::MassFormula));
    }
}

#[test]
fn tiny_model_has_index_two() {
    let r = validate(&tiny_model());
    assert!(r.accepted());
    assert_eq!(r.index_k, Some(BigInt::from(2)));
    assert_eq!(r.index_kp, Some(BigInt::from(2)));
}

#[test]
fn flag_models_have_index_n_minus_one() {
    for n in 3..=6 {
        let m = ValidatedModel::new(group_model(&flag_model(n)).unwrap()).unwrap();
        assert_eq!(m.index(Side::K), &BigInt::from(n - 1));
        assert_eq!(m.index(Side::Kp), &BigInt::from(n - 1));
    }
}

#[test]
fn ribet_models_have_index_q_plus_one() {
    let m = ValidatedModel::new(ribet_model(5, 2).unwrap()).unwrap();
    assert_eq!(m.index(Side::K), &BigInt::from(6));
}

fn tiny_json() -> serde_json::Value {
    serde_json::from_str(&ModelDocument::from_model(&tiny_model()).to_json_pretty()).unwrap()
}

#[test]
fn non_positive_weight_is_rejected_at_parse_time() {
    let mut doc = tiny_json();
    doc["w_j"]["1"] = serde_json::json!("0");
    assert!(matches!(parse_model(&doc.to_string()), Err(ModelError::NonPositiveWeight { .. })));
}

#[test]
fn empty_set_is_rejected() {
    let mut doc = tiny_json();
    doc["x_kp"] = serde_json::json!([]);
    doc["pip"] = serde_json::json!({});
    doc["w_kp"] = serde_json::json!({});
    assert!(parse_model(&doc.to_string()).is_err());
}

#[test]
fn malformed_json_is_a_parse_error() {
    assert!(matches!(parse_model("{\"x_k\": ["), Err(ModelError::Json(_))));
}

#[test]
fn unknown_label_is_reported() {
    let mut doc = tiny_json();
    doc["pi"]["1"] = serde_json::json!("nowhere");
    assert!(matches!(parse_model(&doc.to_string()), Err(ModelError::UnknownLabel { .. })));
}
