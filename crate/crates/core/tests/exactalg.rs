use amfcong::exactalg::{
    hermite, linalg, quotient_invariants, smith, spectra_finite, valuation, Field, FiniteField, IntMatrix, Lattice,
    Rationals,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(proptest::collection::vec(-9i64..=9, cols), rows)
        .prop_map(|r| IntMatrix::from_i64_rows(&r))
}

/// Unimodular matrix built from elementary row operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec((0..n, 0..n, -2i64..=2), 0..3 * n).prop_map(move |ops| {
        let mut p = IntMatrix::identity(n);
        for (i, j, c) in ops {
            if i != j {
                let mut e = IntMatrix::identity(n);
                e.set(i, j, BigInt::from(c));
                p = &p * &e;
            }
        }
        p
    })
}

proptest! {
    #[test]
    fn smith_is_a_unimodular_diagonalization(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let s = smith(&a);
        prop_assert_eq!(&(&s.l * &a) * &s.r, s.d.clone());
        prop_assert!(s.l.det().abs().is_one());
        prop_assert!(s.r.det().abs().is_one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero(), "{:?} is not a divisor chain", f);
        }
        prop_assert!(f.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn smith_product_is_the_determinant(a in (1usize..5).prop_flat_map(|n| matrix(n, n))) {
        let det = a.det().abs();
        let f = smith(&a).invariant_factors();
        if det.is_zero() {
            prop_assert!(f.len() < a.nrows());
        } else {
            prop_assert_eq!(f.iter().product::<BigInt>(), det);
        }
    }

    #[test]
    fn hermite_form_is_reduced(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c))) {
        let h = hermite(&a);
        prop_assert_eq!(&h.u * &a, h.h.clone());
        prop_assert!(h.u.det().abs().is_one());
        for (row, &c) in h.pivots.iter().enumerate() {
            let p = h.h.get(row, c).clone();
            prop_assert!(p.is_positive());
            for above in 0..row {
                let x = h.h.get(above, c);
                prop_assert!(!x.is_negative() && x < &p);
            }
        }
        prop_assert!(h.pivots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn quotient_by_diagonal_sublattice((d, p) in (1usize..5).prop_flat_map(|n| (proptest::collection::vec(1i64..30, n), unimodular(n)))) {
        let n = d.len();
        // rows of diag(d) P span a sublattice with Z^n / L = prod Z/d_i
        let gens: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| p.get(i, j) * d[i]).collect()).collect();
        let sub = Lattice::from_generators(n, &gens);
        let q = quotient_invariants(&sub, &Lattice::standard(n)).unwrap();
        prop_assert_eq!(q.free_rank, 0);
        prop_assert_eq!(q.torsion_order(), d.iter().map(|&x| BigInt::from(x)).product::<BigInt>());
    }

    #[test]
    fn spectra_of_conjugated_diagonal((d, p) in (1usize..6).prop_flat_map(|n| (proptest::collection::vec(-5i64..=5, n), unimodular(n))), ell in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let n = d.len();
        let mut diag = IntMatrix::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            diag.set(i, i, BigInt::from(*x));
        }
        let pinv = linalg::inverse(&Rationals, &p.to_rational()).unwrap().to_integer().unwrap();
        let t = &(&p * &diag) * &pinv;
        let spec = spectra_finite(&[("T".into(), t)], ell, 1).unwrap();
        let mut got: Vec<(u64, usize)> = spec.characters.iter().map(|c| (spec.field.as_prime(&c.values[0]).unwrap(), c.multiplicity)).collect();
        got.sort();
        let mut want: Vec<(u64, usize)> = Vec::new();
        for x in &d {
            let r = x.rem_euclid(ell as i64) as u64;
            match want.iter_mut().find(|(v, _)| *v == r) {
                Some(e) => e.1 += 1,
                None => want.push((r, 1)),
            }
        }
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn extension_field_axioms(p in prop::sample::select(vec![2u64, 3, 5, 7]), k in 1usize..4, seed in any::<u64>()) {
        use rand::SeedableRng;
        let ff = FiniteField::new(p, k).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (ff.random(&mut rng), ff.random(&mut rng), ff.random(&mut rng));
        prop_assert_eq!(ff.mul(&a, &ff.add(&b, &c)), ff.add(&ff.mul(&a, &b), &ff.mul(&a, &c)));
        if !ff.is_zero(&a) {
            prop_assert!(ff.is_one(&ff.mul(&a, &ff.inv(&a).unwrap())));
            // a^(q-1) = 1
            prop_assert!(ff.is_one(&ff.pow_u128(&a, ff.order() - 1)));
        }
        let sq = ff.mul(&a, &a);
        let roots = ff.sqrt_all(&sq).unwrap();
        prop_assert!(roots.iter().all(|r| ff.mul(r, r) == sq));
        prop_assert!(roots.contains(&a));
    }

    #[test]
    fn valuation_counts_prime_powers(k in 0u32..8, m in 1i64..1000, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        prop_assume!(m % p as i64 != 0);
        let n = BigInt::from(p).pow(k) * m;
        prop_assert_eq!(valuation(&n, p), Some(k));
        prop_assert_eq!(valuation(&-n, p), Some(k));
    }
}

#[test]
fn zero_has_no_valuation() {
    assert_eq!(valuation(&BigInt::zero(), 3), None);
}
