use std::collections::BTreeMap;

use amfcong::corpus;
use amfcong::cosetmodel::random::random_valid_model;
use amfcong::cosetmodel::toy::{ribet_model, tiny_model};
use amfcong::cosetmodel::{DoubleCosetModel, Level, Metadata, ModelParts, Operator, ValidatedModel};
use amfcong::eigensys::IntCharacter;
use amfcong::exactalg::{valuation, IntMatrix, RatMatrix};
use amfcong::levelraise::{
    abelian_check, block_formula, build_degeneracy, congruence_module, ihara_defect, k_family, raise, raising_bound,
    select_character, valuation_bound, CertificateStatus, CharacterSelector, CongruenceCertificate, PairedLattice,
    RaiseError,
};
use amfcong::oracle::check_certificate;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn block_formula_matches_the_direct_product(seed in any::<u64>()) {
        let m = ValidatedModel::new(random_valid_model(&mut ChaCha8Rng::seed_from_u64(seed), 30)).unwrap();
        let deg = build_degeneracy(&m).unwrap();
        prop_assert_eq!(block_formula(&m), deg.delta_gram);
    }

    #[test]
    fn ihara_defect_is_trivial(seed in any::<u64>()) {
        let m = ValidatedModel::new(random_valid_model(&mut ChaCha8Rng::seed_from_u64(seed), 30)).unwrap();
        prop_assert!(ihara_defect(&m).is_empty());
    }

    #[test]
    fn scalar_congruence_module(d in 1i64..=60, e in 1i64..=60) {
        let one = PairedLattice::standard(RatMatrix::identity(1));
        let got = congruence_module(&one, &one, &IntMatrix::from_i64_rows(&[vec![d]]), &BigInt::from(e)).unwrap();
        let want = d * d / (d * d).gcd(&e);
        let order: BigInt = got.iter().product();
        prop_assert_eq!(order, BigInt::from(want));
    }

    #[test]
    fn valuation_bound_is_a_difference(m in 1i64..10_000, e in 1i64..100, ecal in 0u32..3, ell in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let v = |x: i64| valuation(&BigInt::from(x), ell).unwrap() as i64;
        let raw = valuation_bound(&BigInt::from(m), &BigInt::from(e), ecal, ell).unwrap();
        prop_assert_eq!(raw, v(m) - v(e) - ecal as i64);
    }

    #[test]
    fn ribet_models_raise_with_n_equal_to_v_m(qi in 0usize..4, x in 0u64..12, ell in prop::sample::select(vec![3u64, 5, 7, 11])) {
        let q = [2u64, 3, 5, 7][qi];
        prop_assume!(x >= 1 && x <= q);
        let a = 2 * x as i64 - q as i64 - 1;
        let m = a * a - (q as i64 + 1).pow(2);
        prop_assume!((q + 1) % ell != 0 && (a - q as i64 - 1).rem_euclid(ell as i64) != 0);
        let model = ValidatedModel::new(ribet_model(q, x).unwrap()).unwrap();
        let cert = raise(&model, ell, &CharacterSelector::Named("f".into()), true).unwrap();
        prop_assert_eq!(&cert.m, &BigInt::from(m));
        prop_assert_eq!(cert.n as u32, valuation(&BigInt::from(m), ell).unwrap());
        if cert.n >= 1 {
            prop_assert_eq!(cert.status, CertificateStatus::Found);
            prop_assert!(check_certificate(&model, &cert).passed());
        }
    }
}

/// Two K-points over one K'-point, with T = [[2, 1], [1, 2]] on X_K.
fn collapse_model() -> ValidatedModel {
    let t = IntMatrix::from_i64_rows(&[vec![2, 1], vec![1, 2]]);
    let parts = ModelParts {
        x_k: vec!["a".into(), "b".into()],
        x_kp: vec!["c".into()],
        x_j: vec!["ya".into(), "yb".into()],
        pi: vec![0, 1],
        pip: vec![0, 0],
        w_k: vec![BigInt::one(); 2],
        w_kp: vec![BigInt::one()],
        w_j: vec![BigInt::one(); 2],
        operators: BTreeMap::from([(
            "T".to_string(),
            Operator { level: Level::K, matrix: t, adjoint: "T".into(), central_at_j: false },
        )]),
        metadata: Metadata::default(),
        characters: BTreeMap::new(),
    };
    ValidatedModel::new(DoubleCosetModel::new(parts).unwrap()).unwrap()
}

#[test]
fn antisymmetric_form_collapses_mod_two() {
    let m = collapse_model();
    let family = k_family(&m).unwrap();
    let minus = IntCharacter::from_witness(&family, &[BigInt::from(1), BigInt::from(-1)]).unwrap();
    assert_eq!(minus.value("T"), Some(&BigInt::from(1)));
    // 1 = 3 mod 2, the eigenvalue of the constant function
    assert!(abelian_check(&m, &family, &minus.reduce(2).unwrap()).unwrap());
    assert!(!abelian_check(&m, &family, &minus.reduce(3).unwrap()).unwrap());
}

#[test]
fn constant_character_has_m_zero() {
    let m = ValidatedModel::new(tiny_model()).unwrap();
    let family = k_family(&m).unwrap();
    let constant = IntCharacter::from_witness(&family, &[BigInt::one()]).unwrap();
    assert!(matches!(raising_bound(&m, &constant, 3), Err(RaiseError::MZero)));
    // the pipeline reports the class-abelian input first
    let err = raise(&m, 3, &CharacterSelector::Index(0), false).unwrap_err();
    assert!(matches!(err, RaiseError::AbelianInput));
}

#[test]
fn ell_dividing_the_index_is_refused() {
    let m = ValidatedModel::new(tiny_model()).unwrap();
    let err = raise(&m, 2, &CharacterSelector::Index(0), false).unwrap_err();
    assert!(matches!(err, RaiseError::EllDividesIndex { ell: 2, .. }));
}

#[test]
fn composite_ell_is_refused() {
    let m = ValidatedModel::new(tiny_model()).unwrap();
    assert!(matches!(raise(&m, 9, &CharacterSelector::Index(0), false), Err(RaiseError::NotPrime(9))));
}

#[test]
fn unknown_character_is_reported() {
    let m = ValidatedModel::new(ribet_model(7, 5).unwrap()).unwrap();
    let family = k_family(&m).unwrap();
    assert!(matches!(
        select_character(&m, &family, &CharacterSelector::Named("g".into())),
        Err(RaiseError::UnknownCharacter(_))
    ));
}

#[test]
fn corpus_certificates_round_trip_and_pass_the_oracle() {
    for (entry, golden) in corpus::embedded() {
        let m = ValidatedModel::new(entry.model).unwrap();
        let text = golden.to_json_pretty();
        assert_eq!(CongruenceCertificate::from_json(&text).unwrap(), golden);
        let report = check_certificate(&m, &golden);
        assert!(report.passed(), "{}: {:?}", entry.name, report.failures());
        assert!(golden.n >= 1);
    }
}

#[test]
fn tampered_certificate_fails_the_oracle() {
    let (entry, mut cert) = corpus::embedded().into_iter().next().unwrap();
    let m = ValidatedModel::new(entry.model).unwrap();
    cert.m += 1;
    assert!(!check_certificate(&m, &cert).passed());
}

#[test]
fn unknown_certificate_fields_are_rejected() {
    let (_, cert) = corpus::embedded().into_iter().next().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&cert.to_json_pretty()).unwrap();
    v["extra"] = serde_json::json!(1);
    assert!(CongruenceCertificate::from_json(&v.to_string()).is_err());
}
