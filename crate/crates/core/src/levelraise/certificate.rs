use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{Detection, RaisingBound};
use crate::cosetmodel::{Side, ValidatedModel};
use crate::eigensys::{IntCharacter, ModCharacterDoc};
use crate::serde_int::{self, IntString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Found,
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RankOneOutcome {
    /// No characteristic-zero lift of the new character occurs at `K`.
    Ramified,
    /// A lift occurs at both maximal levels and `ell` does not divide
    /// `[K:J][K':J]`; the `K`-level occurrence is contradictory.
    ContradictionPath,
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorTerms {
    #[serde(with = "serde_int")]
    pub a_u: BigInt,
    #[serde(with = "serde_int")]
    pub b_v: BigInt,
    #[serde(with = "serde_int")]
    pub c: BigInt,
    #[serde(with = "serde_int")]
    pub e: BigInt,
    pub v_e: u32,
    pub v_index_kp: u32,
    pub v_e_tilde: u32,
    pub v_ecal: u32,
}

/// Everything needed to re-check a level-raising claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruenceCertificate {
    pub model_hash: String,
    pub ell: u64,
    pub residue_degree: usize,
    pub character: String,
    /// Values of `eta` on the `K`-level family, with its witness on `X_K`.
    pub eta: BTreeMap<String, IntString>,
    pub eta_witness: Vec<IntString>,
    #[serde(with = "serde_int")]
    pub index_k: BigInt,
    #[serde(with = "serde_int")]
    pub index_kp: BigInt,
    #[serde(with = "serde_int")]
    pub eta_e_kkp: BigInt,
    #[serde(with = "serde_int")]
    pub m: BigInt,
    pub v_m: u32,
    /// `v(m) - v(E) - v(Ecal)` before clamping.
    pub raw_bound: i64,
    pub n: i64,
    pub error_terms: ErrorTerms,
    pub status: CertificateStatus,
    pub new_dimension: usize,
    pub multiplicity: usize,
    /// Target values on the central operators, with a witness on `X_J`
    /// when found.
    pub witness_character: ModCharacterDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_one: Option<RankOneOutcome>,
    pub diagnostics: Vec<String>,
    pub warnings: Vec<String>,
}

impl CongruenceCertificate {
    #[allow(clippy::too_many_arguments)]
    pub(super) fn assemble(
        model_hash: String,
        ell: u64,
        character: String,
        eta: &IntCharacter,
        model: &ValidatedModel,
        bound: &RaisingBound,
        detection: &Detection,
        rank_one: Option<RankOneOutcome>,
        warnings: Vec<String>,
    ) -> Self {
        CongruenceCertificate {
            model_hash,
            ell,
            residue_degree: detection.character.field.degree(),
            character,
            eta: eta.names.iter().cloned().zip(eta.values.iter().cloned().map(IntString)).collect(),
            eta_witness: eta.witness.iter().cloned().map(IntString).collect(),
            index_k: model.index(Side::K).clone(),
            index_kp: model.index(Side::Kp).clone(),
            eta_e_kkp: bound.eta_e_kkp.clone(),
            m: bound.m.clone(),
            v_m: bound.v_m,
            raw_bound: bound.raw,
            n: bound.n,
            error_terms: ErrorTerms {
                a_u: bound.error.a_u.clone(),
                b_v: bound.error.b_v.clone(),
                c: bound.error.c.clone(),
                e: bound.error.e.clone(),
                v_e: bound.v_e,
                v_index_kp: bound.v_index_kp,
                v_e_tilde: bound.v_e_tilde,
                v_ecal: bound.v_index_kp + bound.v_e_tilde,
            },
            status: if detection.found { CertificateStatus::Found } else { CertificateStatus::NotFound },
            new_dimension: detection.new_dimension,
            multiplicity: detection.multiplicity,
            witness_character: detection.character.to_doc(),
            rank_one,
            diagnostics: detection.diagnostics.clone(),
            warnings,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
