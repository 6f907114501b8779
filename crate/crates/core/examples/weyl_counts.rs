//! Double cosets of parahoric Weyl subgroups and Bruhat indices.

use amfcong::satake::{bruhat_index, weyl_double_cosets, WeylType};

fn main() {
    let cases: [(WeylType, &str, &[&str]); 6] = [
        (WeylType::A2, "W / W", &["s1", "s2"]),
        (WeylType::A2, "W / <s1>", &["s1"]),
        (WeylType::A2, "W", &[]),
        (WeylType::C2, "W / <s_short>", &["s_short"]),
        (WeylType::C2, "W / <s_long>", &["s_long"]),
        (WeylType::C2, "W", &[]),
    ];
    for (ty, name, right) in cases {
        let n = weyl_double_cosets(ty, &[], right).unwrap();
        println!("{ty:?} {name}: {n} cosets");
    }
    for q in [2, 3, 5] {
        let i = bruhat_index(WeylType::A2, &["s1"], q).unwrap();
        let k = bruhat_index(WeylType::C2, &["s_short"], q).unwrap();
        println!("q = {q}: [GL3 hyperspecial : J] = {i}, [GSp4 : Klingen] = {k}");
    }
}
