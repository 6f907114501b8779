//! Classify unramified principal series by their Satake data and run the
//! level-raising filters.

use amfcong::exactalg::{Field, Rationals};
use amfcong::satake::{
    allowed_types, check_gsp4_condition, classify_gl3, classify_gsp4, exclusions, profile, residue_field, Group,
};
use num_bigint::BigInt;
use num_rational::BigRational;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() {
    let q = 3;
    // chi_1 / chi_2 = q^-1 links the first two characters
    let gl3 = classify_gl3(&Rationals, q, &[r(1, 3), r(1, 1), r(5, 1)]).unwrap();
    for t in &gl3 {
        println!("GL(3) {}: {} profile {:?}", t.label, t.representation, profile(Group::Gl3, &t.label).unwrap().dims);
    }
    let gsp4 = classify_gsp4(&Rationals, q, &[r(1, 9), r(1, 3), r(1, 1)]).unwrap();
    let labels: Vec<&str> = gsp4.iter().map(|t| t.label.as_str()).collect();
    println!("GSp(4) (nu^2, nu, 1): {labels:?}");

    let ell = 7;
    let ff = residue_field(ell).unwrap();
    let t = [1, 3, 2, 6].map(|x| ff.from_i64(x));
    println!("condition: {:?}", check_gsp4_condition(&ff, &t, q).unwrap());
    println!("excluded: {:?}", exclusions(q, ell).unwrap());
    println!("allowed GSp(4): {:?}", allowed_types(Group::Gsp4, q, Some(ell)).unwrap());
    println!("allowed GL(3): {:?}", allowed_types(Group::Gl3, q, Some(ell)).unwrap());
}
