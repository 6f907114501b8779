use amfcong::eigensys::{hecke_ring, random_commuting_family, IntCharacter, ModCharacter};
use amfcong::exactalg::{spectra_finite, IntMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family(seed: u64) -> Vec<(String, IntMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_commuting_family(&mut rng, 6, 2)
}

fn mod_mat(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let pb = BigInt::from(p);
    m.to_rows().iter().map(|r| r.iter().map(|x| u64::try_from(x.mod_floor(&pb)).unwrap()).collect()).collect()
}

use num_integer::Integer;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generators_commute(seed in any::<u64>()) {
        let f = family(seed);
        for (_, a) in &f {
            for (_, b) in &f {
                prop_assert_eq!(a * b, b * a);
            }
        }
    }

    #[test]
    fn every_mod_ell_character_lifts(seed in any::<u64>(), ell in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let f = family(seed);
        let ring = hecke_ring(&f).unwrap();
        let spec = spectra_finite(&f, ell, 1).unwrap();
        for c in &spec.characters {
            let eta = ModCharacter::from_spectrum(&spec, c);
            let lifts = ring.lift_character(&eta).unwrap();
            prop_assert!(!lifts.is_empty());
            prop_assert!(lifts.iter().all(|l| l.reduces_to(&eta)));
        }
    }

    #[test]
    fn nilpotent_witnesses_are_nilpotent(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        let f = family(seed);
        let ring = hecke_ring(&f).unwrap();
        let (dim, witness) = ring.nilradical_mod_p(p).unwrap();
        prop_assert_eq!(dim == 0, witness.is_none());
        if ring.semisimple_mod_p(p).unwrap_or(false) {
            prop_assert_eq!(dim, 0);
        }
        if let Some(c) = witness {
            let n = ring.dim;
            let mut x = vec![vec![0u64; n]; n];
            for (z, ci) in ring.z_basis.iter().zip(&c) {
                let zm = mod_mat(z, p);
                for i in 0..n {
                    for j in 0..n {
                        x[i][j] = (x[i][j] + ci * zm[i][j]) % p;
                    }
                }
            }
            let mut acc = x.clone();
            for _ in 1..n {
                acc = (0..n).map(|i| (0..n).map(|j| (0..n).fold(0, |s, k| (s + acc[i][k] * x[k][j]) % p)).collect()).collect();
            }
            prop_assert!(acc.iter().all(|r| r.iter().all(|&v| v == 0)));
        }
    }

    #[test]
    fn witnesses_read_off_eigenvalues(l in -6i64..=6, k in -6i64..=6) {
        let t = IntMatrix::from_i64_rows(&[vec![l, 0], vec![0, k]]);
        let fam = vec![("T".to_string(), t)];
        let c = IntCharacter::from_witness(&fam, &[BigInt::from(0), BigInt::from(3)]).unwrap();
        prop_assert_eq!(c.value("T"), Some(&BigInt::from(k)));
    }
}

#[test]
fn jordan_block_is_never_certified() {
    let t = IntMatrix::from_i64_rows(&[vec![2, 1], vec![0, 2]]);
    let ring = hecke_ring(&[("T".into(), t)]).unwrap();
    for p in [2, 3, 5, 7] {
        assert!(!ring.semisimple_mod_p(p).unwrap_or(false));
        assert_eq!(ring.nilradical_mod_p(p).unwrap().0, 1);
    }
}

#[test]
fn golden_ratio_block_ramifies_at_five() {
    let t = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 1]]);
    let ring = hecke_ring(&[("T".into(), t)]).unwrap();
    assert_eq!(ring.trace_form_disc, BigInt::from(5));
    assert!(ring.semisimple_mod_p(3).unwrap());
    assert!(!ring.semisimple_mod_p(5).unwrap());
}

#[test]
fn non_commuting_generators_are_rejected() {
    let a = IntMatrix::from_i64_rows(&[vec![0, 1], vec![0, 0]]);
    let b = IntMatrix::from_i64_rows(&[vec![0, 0], vec![1, 0]]);
    assert!(hecke_ring(&[("A".into(), a), ("B".into(), b)]).is_err());
}
