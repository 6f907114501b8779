//! Normal forms, lattice quotients and simultaneous spectra.

use amfcong::exactalg::{hermite, quotient_invariants, smith, spectra_finite, spectra_rational, IntMatrix, Lattice};
use num_bigint::BigInt;

fn main() {
    let a = IntMatrix::from_i64_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let h = hermite(&a);
    println!("hermite form: {:?} (rank {})", h.h.to_rows(), h.rank());
    let s = smith(&a);
    println!("invariant factors: {:?}", s.invariant_factors());

    // Z^2 over the sublattice spanned by (2, 0) and (1, 3)
    let sub = Lattice::from_generators(2, &[vec![BigInt::from(2), BigInt::from(0)], vec![BigInt::from(1), BigInt::from(3)]]);
    let q = quotient_invariants(&sub, &Lattice::standard(2)).unwrap();
    println!("Z^2 / L has torsion {:?}, order {}", q.torsion, q.torsion_order());

    // a commuting pair: a diagonal matrix and the swap of its equal eigenspaces
    let t = IntMatrix::from_i64_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
    let d = IntMatrix::from_i64_rows(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 5]]);
    let ops = vec![("T".to_string(), t), ("D".to_string(), d)];
    let q_spec = spectra_rational(&ops).unwrap();
    for c in &q_spec.characters {
        let vals: Vec<String> = c.values.iter().map(|v| v.render()).collect();
        println!("over Q: {:?} x{}", vals, c.multiplicity);
    }
    let f_spec = spectra_finite(&ops, 3, 1).unwrap();
    for c in &f_spec.characters {
        println!("mod 3: {}", f_spec.render_character(c));
    }
}
