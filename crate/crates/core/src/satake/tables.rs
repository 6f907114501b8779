//! Iwahori-spherical representation tables for GL(3) and GSp(4), embedded
//! as pipe-separated text and pinned by SHA-256.
//!
//! Columns, in order:
//! - GL(3) types: family, label, representation, unitary, tempered, L2, generic
//! - GL(3) dimensions: family, label, remarks, K, J, I
//! - GSp(4) types: family, label, representation, tempered, L2, generic
//! - GSp(4) dimensions: family, label, remarks, K, K', J, J', I
//!
//! An empty cell means the property never holds; `*` means it always does.

use sha2::{Digest, Sha256};
use thiserror::Error;

pub const GL3_TYPES: &str = "\
I||chi_1 x chi_2 x chi_3|below|abs(chi_i)=1||*
II|a|chi_1 St_GL(2) x chi_2|abs(chi_i)=1|abs(chi_i)=1||*
II|b|chi_1 1_GL(2) x chi_2|abs(chi_i)=1|||
III|a|chi St_GL(3)|abs(chi)=1|abs(chi)=1|abs(chi)=1|*
III|b|chi V_P||||
III|c|chi V_Q||||
III|d|chi 1_GL(3)|abs(chi)=1|||
";

pub const GL3_DIMS: &str = "\
I|||1|3|6
II|a||0|1|3
II|b||1|2|3
III|a||0|0|1
III|b|not unitary|0|1|2
III|c|not unitary|0|1|2
III|d|irrelevant|1|1|1
";

pub const GSP4_TYPES: &str = "\
I||chi_1 x chi_2 rtimes sigma|abs(chi_i)=abs(sigma)=1||*
II|a|chi St_GL(2) rtimes sigma|abs(chi)=abs(sigma)=1||*
II|b|chi 1_GL(2) rtimes sigma|||
III|a|chi rtimes sigma St_GL(2)|abs(chi)=abs(sigma)=1||*
III|b|chi rtimes sigma 1_GL(2)|||
IV|a|sigma St_GSp(4)|*|*|*
IV|b|L((nu^2, nu^-1 sigma St_GL(2)))|||
IV|c|L((nu^3/2 St_GL(2), nu^-3/2 sigma))|||
IV|d|sigma 1_GSp(4)|||
V|a|delta([xi_0, nu xi_0], nu^-1/2 sigma)|*|*|*
V|b|L((nu^1/2 xi_0 St_GL(2), nu^-1/2 sigma))|||
V|c|L((nu^1/2 xi_0 St_GL(2), xi_0 nu^-1/2 sigma))|||
V|d|L((nu xi_0, xi_0 rtimes nu^-1/2 sigma))|||
VI|a|tau(S, nu^-1/2 sigma)|*||*
VI|b|tau(T, nu^-1/2 sigma)|*||
VI|c|L((nu^1/2 St_GL(2), nu^-1/2 sigma))|||
VI|d|L((nu, 1 rtimes nu^-1/2 sigma))|||
";

pub const GSP4_DIMS: &str = "\
I|||1|2|4|4|8
II|a||0|1|2|1|4
II|b||1|1|2|3|4
III|a||0|0|1|2|4
III|b||1|2|3|2|4
IV|a||0|0|0|0|1
IV|b|not unitary|0|0|1|2|3
IV|c|not unitary|0|1|2|1|3
IV|d|irrelevant|1|1|1|1|1
V|a||0|0|1|0|2
V|b||0|1|1|1|2
V|c||0|1|1|1|2
V|d||1|0|1|2|2
VI|a||0|0|1|1|3
VI|b||0|0|0|1|1
VI|c||0|1|1|0|1
VI|d||1|1|2|2|3
";

/// SHA-256 of the four tables, in the order above.
pub const CHECKSUMS: [&str; 4] = [
    "81bb8fe9c23aa01f7c3770d2c48a071f989cfe3e448975346797ff7fa38ee611",
    "aaa151bb3ab6712280748ea1748eaa32528f5239ca10bf83b0f63243efc2eed4",
    "032cedb446dcf8d17e27a497bff215dde49cba1ce81a97a9e9c4e39b3ba98f31",
    "50e9541cc7517cf7e9be5eea339d7801ad862c9a3e77953792050b3350eab922",
];

pub const TABLE_NAMES: [&str; 4] = ["A", "B", "C", "D"];

pub fn checksum(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table {table}: checksum {found} does not match the pinned {expected}")]
    Checksum { table: &'static str, expected: &'static str, found: String },
    #[error("table {table}, line {line}: {reason}")]
    Malformed { table: &'static str, line: usize, reason: String },
}

/// The raw text of the four tables; the embedded copies by default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSources {
    pub texts: [String; 4],
}

impl Default for TableSources {
    fn default() -> Self {
        TableSources { texts: [GL3_TYPES, GL3_DIMS, GSP4_TYPES, GSP4_DIMS].map(String::from) }
    }
}

impl TableSources {
    pub fn verify_checksums(&self) -> Result<(), TableError> {
        for (i, text) in self.texts.iter().enumerate() {
            let found = checksum(text);
            if found != CHECKSUMS[i] {
                return Err(TableError::Checksum { table: TABLE_NAMES[i], expected: CHECKSUMS[i], found });
            }
        }
        Ok(())
    }
}

/// A raw table line split into trimmed cells.
pub(crate) fn rows(table: &'static str, text: &str, width: usize) -> Result<Vec<Vec<String>>, TableError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            let cells = split_cells(l);
            if cells.len() != width {
                return Err(TableError::Malformed {
                    table,
                    line: i + 1,
                    reason: format!("expected {width} cells, found {}", cells.len()),
                });
            }
            Ok(cells)
        })
        .collect()
}

fn split_cells(line: &str) -> Vec<String> {
    line.split('|').map(|c| c.trim().to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_match_pins() {
        TableSources::default().verify_checksums().unwrap();
    }

    #[test]
    fn semidirect_marker_is_not_a_separator() {
        assert_eq!(split_cells("I||chi_1 x chi_2 rtimes sigma|t||*").len(), 6);
    }
}
