use amfcong::exactalg::{Field, Rationals};
use amfcong::satake::{
    allowed_types, bruhat_index, check_gsp4_condition, check_u3_condition, classify_gl3, classify_gsp4, exclusions,
    exclusions_brute_force, gsp4_orbit, parahoric_indices, prime_power, profile, residue_field, rep_type,
    weyl_double_cosets, Group, TableSources, Tables, WeylType,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn labels(v: &[amfcong::satake::RepType]) -> Vec<String> {
    v.iter().map(|t| t.label.clone()).collect()
}

proptest! {
    #[test]
    fn gl3_ignores_the_order_of_parameters(q in prop::sample::select(vec![2u64, 3, 4, 5, 7]), c in proptest::array::uniform3(nonzero_rational()), perm in 0usize..6) {
        let p = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][perm];
        let shuffled = [c[p[0]].clone(), c[p[1]].clone(), c[p[2]].clone()];
        prop_assert_eq!(labels(&classify_gl3(&Rationals, q, &c).unwrap()), labels(&classify_gl3(&Rationals, q, &shuffled).unwrap()));
    }

    #[test]
    fn gsp4_is_constant_on_weyl_orbits(q in prop::sample::select(vec![2u64, 3, 5]), c in proptest::array::uniform3(nonzero_rational())) {
        let base = labels(&classify_gsp4(&Rationals, q, &c).unwrap());
        for w in gsp4_orbit(&Rationals, &c) {
            prop_assert_eq!(&labels(&classify_gsp4(&Rationals, q, &w).unwrap()), &base);
        }
    }

    #[test]
    fn gsp4_orbit_has_at_most_eight_points(c in proptest::array::uniform3(nonzero_rational())) {
        let n = gsp4_orbit(&Rationals, &c).len();
        prop_assert!(n <= 8 && 8 % n == 0);
    }

    #[test]
    fn constituents_partition_the_full_profile(q in prop::sample::select(vec![2u64, 3, 5]), c in proptest::array::uniform3(nonzero_rational())) {
        for (group, types) in [(Group::Gl3, classify_gl3(&Rationals, q, &c).unwrap()), (Group::Gsp4, classify_gsp4(&Rationals, q, &c).unwrap())] {
            let full = profile(group, "I").unwrap().dims;
            let mut sum = vec![0; full.len()];
            for t in &types {
                for (s, d) in sum.iter_mut().zip(profile(group, &t.label).unwrap().dims) {
                    *s += d;
                }
            }
            prop_assert_eq!(sum, full);
        }
    }

    #[test]
    fn exclusions_closed_form_matches_search(q in 2u64..200, ell in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23])) {
        prop_assume!(prime_power(q).is_some() && q % ell != 0);
        prop_assert_eq!(exclusions(q, ell).unwrap(), exclusions_brute_force(q, ell).unwrap());
    }

    #[test]
    fn allowed_types_are_generic(q in 2u64..100, ell in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        prop_assume!(prime_power(q).is_some() && q % ell != 0);
        for g in [Group::Gl3, Group::Gsp4] {
            for l in allowed_types(g, q, Some(ell)).unwrap() {
                prop_assert!(rep_type(g, &l).unwrap().generic);
            }
        }
    }

    #[test]
    fn bruhat_index_matches_parahoric_index(q in 2u64..50) {
        let idx = parahoric_indices(Group::Gl3, q).unwrap();
        prop_assert_eq!(bruhat_index(WeylType::A2, &["s1"], q).unwrap(), idx.k_j);
        let idx = parahoric_indices(Group::Gsp4, q).unwrap();
        prop_assert_eq!(bruhat_index(WeylType::C2, &["s_short"], q).unwrap(), idx.k_j);
    }
}

#[test]
fn gsp4_profile_of_iva() {
    assert_eq!(profile(Group::Gsp4, "IVa").unwrap().dims, vec![0, 0, 0, 0, 1]);
}

#[test]
fn tabulated_dimension_rows() {
    assert_eq!(profile(Group::Gl3, "IIa").unwrap().dims, vec![0, 1, 3]);
    assert_eq!(profile(Group::Gsp4, "VId").unwrap().dims, vec![1, 1, 2, 2, 3]);
    assert_eq!(profile(Group::Gsp4, "Vd").unwrap().dims, vec![1, 0, 1, 2, 2]);
}

#[test]
fn gsp4_condition_at_three_mod_seven() {
    let ff = residue_field(7).unwrap();
    let t = [1, 3, 2, 6].map(|x| ff.from_i64(x));
    let flag = check_gsp4_condition(&ff, &t, 3).unwrap();
    assert!(flag.holds);
    assert_eq!(flag.refinement, Some(true));
    assert_eq!(allowed_types(Group::Gsp4, 3, Some(7)).unwrap(), vec!["I", "IIa", "IIIa"]);
}

#[test]
fn u3_condition_refuses_ell_dividing_the_index() {
    let ff = residue_field(7).unwrap();
    let t = [2, 1, 4].map(|x| ff.from_i64(x));
    let flag = check_u3_condition(&ff, &t, 2).unwrap();
    assert!(!flag.holds);
    assert!(flag.reasons.iter().any(|r| r.contains("1+q+q^2")));
}

#[test]
fn gsp4_steinberg_point() {
    let q = 3;
    let types = classify_gsp4(&Rationals, q, &[rat(1, 9), rat(1, 3), rat(1, 1)]).unwrap();
    assert_eq!(labels(&types), vec!["IVa", "IVb", "IVc", "IVd"]);
}

#[test]
fn gl3_chain_is_type_iii() {
    let nu = rat(1, 5);
    let c = BigRational::from_integer(BigInt::from(2));
    let chi = [Rationals.mul(&c, &nu), c.clone(), Rationals.div(&c, &nu).unwrap()];
    assert_eq!(labels(&classify_gl3(&Rationals, 5, &chi).unwrap()), vec!["IIIa", "IIIb", "IIIc", "IIId"]);
}

#[test]
fn weyl_double_coset_counts() {
    assert_eq!(weyl_double_cosets(WeylType::A2, &["s1"], &["s1"]).unwrap(), 2);
    assert_eq!(weyl_double_cosets(WeylType::C2, &["s_short"], &["s_long"]).unwrap(), 2);
    assert_eq!(weyl_double_cosets(WeylType::C2, &[], &[]).unwrap(), 8);
}

#[test]
fn corrupted_table_is_rejected() {
    let mut src = TableSources::default();
    src.texts[3] = src.texts[3].replace("IV|a||0|0|0|0|1", "IV|a||0|0|0|1|1");
    assert!(Tables::load(&src).is_err());
}

#[test]
fn zero_parameters_are_bad() {
    assert!(classify_gl3(&Rationals, 3, &[rat(0, 1), rat(1, 1), rat(1, 1)]).is_err());
}
