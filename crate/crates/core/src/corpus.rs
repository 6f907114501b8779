//! The bundled synthetic raising corpus.
//!
//! Each entry is a validated model carrying a named `K`-level character
//! whose `m` is divisible by `ell` while the character stays
//! non-class-abelian mod `ell`. Golden copies of the model documents and
//! their certificates live under `corpus/v1`.

use num_bigint::BigInt;

use crate::cosetmodel::document::{parse_model, ModelDocument};
use crate::cosetmodel::toy::{flag_model, group_model, ribet_model, tiny_model};
use crate::cosetmodel::{DoubleCosetModel, NamedCharacter, ValidatedModel};
use crate::levelraise::{integer_characters, k_family, CongruenceCertificate};

pub const CORPUS_VERSION: &str = "v1";

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub ell: u64,
    pub character: &'static str,
    pub model: DoubleCosetModel,
}

/// `(name, ell, character, model document, certificate)` as shipped.
macro_rules! golden {
    ($name:literal, $ell:literal, $character:literal) => {
        (
            $name,
            $ell,
            $character,
            include_str!(concat!("../corpus/v1/", $name, ".model.json")),
            include_str!(concat!("../corpus/v1/", $name, ".cert.json")),
        )
    };
}

const GOLDEN: &[(&str, u64, &str, &str, &str)] = &[
    golden!("flag-s5", 3, "std"),
    golden!("flag-s7", 5, "std"),
    golden!("flag-s8", 3, "std"),
    golden!("ribet-q7-x5", 5, "f"),
    golden!("ribet-q7-x3", 3, "f"),
    golden!("ribet-q11-x7", 7, "f"),
];

/// The flag model on `S_n` with its standard character named `std`.
fn flag_with_std(n: usize) -> DoubleCosetModel {
    let model = ValidatedModel::new(group_model(&flag_model(n)).expect("flag models build")).expect("valid");
    let family = k_family(&model).expect("commuting family");
    let std = integer_characters(&family)
        .expect("spectra")
        .into_iter()
        .find(|c| c.value("e_KK'") == Some(&BigInt::from(1)))
        .expect("the standard character has e_KK' = 1");
    let mut parts = model.into_model().into_parts();
    // documents record values on registered operators only
    let values = std
        .names
        .iter()
        .cloned()
        .zip(std.values.iter().cloned())
        .filter(|(n, _)| parts.operators.contains_key(n))
        .collect();
    parts.characters.insert("std".into(), NamedCharacter { values, witness: std.witness });
    DoubleCosetModel::new(parts).expect("adding a character keeps the model well formed")
}

/// Rebuild the corpus from the toy constructions.
pub fn build() -> Vec<CorpusEntry> {
    let ribet = |q, x| ribet_model(q, x).expect("ribet models build");
    vec![
        CorpusEntry { name: "flag-s5", ell: 3, character: "std", model: flag_with_std(5) },
        CorpusEntry { name: "flag-s7", ell: 5, character: "std", model: flag_with_std(7) },
        CorpusEntry { name: "flag-s8", ell: 3, character: "std", model: flag_with_std(8) },
        CorpusEntry { name: "ribet-q7-x5", ell: 5, character: "f", model: ribet(7, 5) },
        CorpusEntry { name: "ribet-q7-x3", ell: 3, character: "f", model: ribet(7, 3) },
        CorpusEntry { name: "ribet-q11-x7", ell: 7, character: "f", model: ribet(11, 7) },
    ]
}

/// The shipped corpus, parsed from the golden documents.
pub fn embedded() -> Vec<(CorpusEntry, CongruenceCertificate)> {
    GOLDEN
        .iter()
        .map(|(name, ell, character, model, cert)| {
            let model = parse_model(model).expect("golden models parse");
            let cert = CongruenceCertificate::from_json(cert).expect("golden certificates parse");
            (CorpusEntry { name, ell: *ell, character, model }, cert)
        })
        .collect()
}

pub const TINY_DOCUMENT: &str = include_str!("../corpus/v1/tiny.model.json");

/// The two-point model with `[K:J] = [K':J] = 2`.
pub fn tiny_document() -> String {
    ModelDocument::from_model(&tiny_model()).to_json_pretty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelraise::{raise, CharacterSelector};

    /// Set `AMFCONG_BLESS=1` to rewrite the golden files.
    #[test]
    fn golden_files_match_constructions() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/v1");
        let bless = std::env::var_os("AMFCONG_BLESS").is_some();
        let shipped = embedded();
        for (i, e) in build().into_iter().enumerate() {
            let doc = ModelDocument::from_model(&e.model).to_json_pretty() + "\n";
            let m = ValidatedModel::new(e.model.clone()).unwrap();
            let rank_one = m.metadata().rank_one;
            let cert = raise(&m, e.ell, &CharacterSelector::Named(e.character.into()), rank_one).unwrap();
            if bless {
                std::fs::write(format!("{dir}/{}.model.json", e.name), &doc).unwrap();
                std::fs::write(format!("{dir}/{}.cert.json", e.name), cert.to_json_pretty() + "\n").unwrap();
                continue;
            }
            assert_eq!(shipped[i].0.name, e.name);
            assert_eq!(shipped[i].0.model, e.model, "{}", e.name);
            assert_eq!(shipped[i].1, cert, "{}", e.name);
        }
        let tiny = tiny_document() + "\n";
        if bless {
            std::fs::write(format!("{dir}/tiny.model.json"), &tiny).unwrap();
        } else {
            assert_eq!(TINY_DOCUMENT, tiny);
        }
    }
}
