//! The Z-algebra generated by commuting operators: semisimplicity mod p
//! and lifts of mod-ell eigensystems to characteristic zero.

use amfcong::eigensys::{hecke_ring, ModCharacter};
use amfcong::exactalg::{spectra_finite, IntMatrix};

fn main() {
    // a Jordan block at 1 next to a 2x2 block with characteristic polynomial x^2 - x - 1
    let t = IntMatrix::from_i64_rows(&[
        vec![1, 1, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 0, 1],
        vec![0, 0, 1, 1],
    ]);
    let family = vec![("T".to_string(), t)];
    let ring = hecke_ring(&family).unwrap();
    println!("rank {}, trace-form discriminant {}", ring.rank(), ring.trace_form_disc);
    for p in [2, 3, 5, 7, 11] {
        let (nil, witness) = ring.nilradical_mod_p(p).unwrap();
        let cert = ring.semisimple_mod_p(p).map_or_else(|e| e.to_string(), |b| b.to_string());
        println!("p = {p}: semisimple certificate: {cert}; nilradical dim {nil}, witness {witness:?}");
    }
    for ell in [5, 11] {
        let spec = spectra_finite(&family, ell, 1).unwrap();
        for c in &spec.characters {
            let eta = ModCharacter::from_spectrum(&spec, c);
            let lifts = ring.lift_character(&eta).unwrap();
            let shown: Vec<String> = lifts.iter().map(|l| l.render()).collect();
            println!("ell = {ell}: {} lifts to {}", eta.render(), shown.join(", "));
        }
    }
}
