//! Certify a congruent new eigensystem on the S_5 flag model and re-check
//! the certificate with the independent oracle.

use amfcong::corpus;
use amfcong::cosetmodel::ValidatedModel;
use amfcong::levelraise::{raise, CharacterSelector, RaiseError};
use amfcong::oracle::check_certificate;

fn main() {
    let (entry, _) = corpus::embedded().into_iter().find(|(e, _)| e.name == "flag-s5").unwrap();
    let model = ValidatedModel::new(entry.model).unwrap();
    let cert = raise(&model, 3, &CharacterSelector::Named("std".into()), false).unwrap();
    println!("m = {}, v_3(m) = {}, n = {}, status {:?}", cert.m, cert.v_m, cert.n, cert.status);
    println!("new dimension {}, multiplicity {}", cert.new_dimension, cert.multiplicity);
    let report = check_certificate(&model, &cert);
    for (check, ok) in &report.checks {
        println!("  {} {check}", if *ok { "ok  " } else { "FAIL" });
    }

    // mod 5 the standard character collapses onto a class-constant one
    match raise(&model, 5, &CharacterSelector::Named("std".into()), false) {
        Err(e @ RaiseError::AbelianInput) => println!("ell = 5: {e}"),
        other => println!("ell = 5: unexpected {other:?}"),
    }
}
