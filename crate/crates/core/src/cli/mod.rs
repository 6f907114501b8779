//! Command-line front end. Every command prints one JSON report on stdout
//! and maps its outcome onto a fixed exit code.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cosetmodel::document::{model_hash, parse_model};
use crate::cosetmodel::{validate, Level, ValidatedModel};
use crate::exactalg::{FqElem, Rationals};
use crate::levelraise::{raise, CertificateStatus, CharacterSelector, RaiseError, SURROGATE_WARNING};
use crate::satake::{
    allowed_types, check_gsp4_condition, check_u3_condition, classify_gl3, classify_gsp4, exclusions,
    gl3_type_i_unitary, parahoric_indices, profile, rep_type, residue_field, Group, SatakeError, TypeEntry,
};
use crate::suite::{self, SuiteOptions, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ABELIAN: i32 = 3;
pub const EXIT_VACUOUS: i32 = 4;
pub const EXIT_NOT_FOUND: i32 = 5;
pub const EXIT_SUITE: i32 = 6;

#[derive(Parser, Debug)]
#[command(name = "amfcong", version, about = "Level-raising congruences on finite double-coset models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a model document and report indices, annihilators and classes.
    Validate { path: PathBuf },
    /// Certify a congruent new eigensystem mod ell.
    Raise {
        path: PathBuf,
        #[arg(long)]
        ell: u64,
        /// Character name, or `#i` / `i` for the i-th integral eigensystem.
        #[arg(long)]
        character: String,
        /// Run the rank-one refinement even if the model does not declare it.
        #[arg(long)]
        rank_one: bool,
    },
    /// Classify Iwahori-spherical representations and apply the raising filters.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        q: u64,
        /// Character values at a uniformizer: three for either group
        /// (`chi_1 chi_2 chi_3` or `chi_1 chi_2 sigma`), as rationals.
        #[arg(allow_hyphen_values = true)]
        params: Vec<String>,
        #[arg(long)]
        ell: Option<u64>,
        /// Satake parameter mod ell, comma separated.
        #[arg(long, requires = "ell", value_delimiter = ',', allow_hyphen_values = true)]
        satake_check: Option<Vec<i64>>,
        /// Report the fixed-space profile of one type, e.g. `IVa`.
        #[arg(long = "type")]
        type_label: Option<String>,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, hide = true)]
        corrupt_table_d: bool,
    },
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub command: &'static str,
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub warnings: Vec<String>,
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Report,
}

impl Outcome {
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize")
    }
}

fn report(command: &'static str, inputs: BTreeMap<String, String>, results: Value, warnings: Vec<String>) -> Report {
    Report { command, inputs, results, warnings }
}

fn failure(command: &'static str, inputs: BTreeMap<String, String>, code: i32, kind: &str, message: String) -> Outcome {
    let results = json!({ "error": { "kind": kind, "message": message } });
    Outcome { code, report: report(command, inputs, results, Vec::new()) }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parse `args` (program name first) and run the command.
pub fn run_args<I, T>(args: I) -> Result<Outcome, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args).map(|cli| run(&cli.command))
}

pub fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Validate { path } => cmd_validate(path),
        Command::Raise { path, ell, character, rank_one } => cmd_raise(path, *ell, character, *rank_one),
        Command::Classify { group, q, params, ell, satake_check, type_label } => {
            cmd_classify(group, *q, params, *ell, satake_check.as_deref(), type_label.as_deref())
        }
        Command::Selftest { seed, corrupt_table_d } => cmd_selftest(*seed, *corrupt_table_d),
    }
}

fn read_model(
    command: &'static str,
    path: &PathBuf,
    inputs: &mut BTreeMap<String, String>,
) -> Result<crate::cosetmodel::DoubleCosetModel, Outcome> {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => return Err(failure(command, inputs.clone(), EXIT_PARSE, "io", format!("{}: {e}", path.display()))),
    };
    inputs.insert("document_sha256".into(), digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| failure(command, inputs.clone(), EXIT_PARSE, "parse", "document is not UTF-8".into()))?;
    parse_model(&text).map_err(|e| failure(command, inputs.clone(), EXIT_PARSE, "parse", e.to_string()))
}

pub fn cmd_validate(path: &PathBuf) -> Outcome {
    let mut inputs = BTreeMap::new();
    let model = match read_model("validate", path, &mut inputs) {
        Ok(m) => m,
        Err(o) => return o,
    };
    let report_v = validate(&model);
    let mut results = json!({
        "model_hash": model_hash(&model),
        "validation": &report_v,
        "summary": report_v.to_string(),
    });
    if !report_v.accepted() {
        return Outcome { code: EXIT_VALIDATION, report: report("validate", inputs, results, Vec::new()) };
    }
    let vm = ValidatedModel::new(model).expect("accepted above");
    let annihilators: BTreeMap<&str, _> =
        [Level::K, Level::Kp, Level::J].into_iter().map(|l| (l.as_str(), vm.annihilators(l))).collect();
    let partition = vm.class_partition();
    let labels = vm.labels(Level::J);
    let classes: Vec<Vec<&str>> =
        partition.classes().iter().map(|c| c.iter().map(|&y| labels[y].as_str()).collect()).collect();
    results["annihilators"] = json!(annihilators);
    results["classes"] = json!(classes);
    Outcome { code: EXIT_OK, report: report("validate", inputs, results, Vec::new()) }
}

fn raise_exit(e: &RaiseError) -> (i32, &'static str) {
    match e {
        RaiseError::AbelianInput => (EXIT_ABELIAN, "abelian"),
        RaiseError::MZero => (EXIT_VACUOUS, "vacuous"),
        _ => (EXIT_VALIDATION, "refused"),
    }
}

pub fn cmd_raise(path: &PathBuf, ell: u64, character: &str, rank_one: bool) -> Outcome {
    let mut inputs = BTreeMap::from([
        ("ell".to_string(), ell.to_string()),
        ("character".to_string(), character.to_string()),
        ("rank_one".to_string(), rank_one.to_string()),
    ]);
    let model = match read_model("raise", path, &mut inputs) {
        Ok(m) => m,
        Err(o) => return o,
    };
    let vm = match ValidatedModel::new(model) {
        Ok(vm) => vm,
        Err(r) => {
            let results = json!({ "validation": &r, "summary": r.to_string() });
            return Outcome { code: EXIT_VALIDATION, report: report("raise", inputs, results, Vec::new()) };
        }
    };
    let selector = CharacterSelector::parse(character);
    let rank_one = rank_one || vm.metadata().rank_one;
    match raise(&vm, ell, &selector, rank_one) {
        Ok(cert) => {
            let code = match cert.status {
                CertificateStatus::Found => EXIT_OK,
                CertificateStatus::NotFound => EXIT_NOT_FOUND,
            };
            let warnings = cert.warnings.clone();
            let results = json!({ "certificate": &cert });
            Outcome { code, report: report("raise", inputs, results, warnings) }
        }
        Err(e) => {
            let (code, kind) = raise_exit(&e);
            let mut out = failure("raise", inputs, code, kind, e.to_string());
            if code == EXIT_ABELIAN {
                out.report.warnings.push(SURROGATE_WARNING.into());
            }
            out
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (d != BigInt::from(0)).then(|| BigRational::new(n, d))
        }
        None => s.trim().parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn satake_error(inputs: BTreeMap<String, String>, e: SatakeError) -> Outcome {
    failure("classify", inputs, EXIT_VALIDATION, "bad_params", e.to_string())
}

pub fn cmd_classify(
    group: &str,
    q: u64,
    params: &[String],
    ell: Option<u64>,
    satake: Option<&[i64]>,
    type_label: Option<&str>,
) -> Outcome {
    let mut inputs = BTreeMap::from([
        ("group".to_string(), group.to_ascii_lowercase()),
        ("q".to_string(), q.to_string()),
        ("params".to_string(), params.join(" ")),
    ]);
    if let Some(l) = ell {
        inputs.insert("ell".into(), l.to_string());
    }
    if let Some(t) = satake {
        inputs.insert("satake_check".into(), t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    }
    if let Some(t) = type_label {
        inputs.insert("type".into(), t.into());
    }
    let Some(g) = Group::parse(group) else {
        return failure("classify", inputs, EXIT_PARSE, "parse", format!("unknown group {group:?}"));
    };
    let indices = match parahoric_indices(g, q) {
        Ok(i) => i,
        Err(e) => return satake_error(inputs, e),
    };
    let mut results = json!({ "group": g, "q": q, "indices": indices });
    let mut warnings = Vec::new();

    if let Some(label) = type_label {
        match (rep_type(g, label), profile(g, label)) {
            (Some(rep), Some(p)) => {
                results["type"] = json!(TypeEntry::new(rep));
                results["profile"] = json!({ "columns": g.columns(), "dims": p.dims });
            }
            _ => return failure("classify", inputs, EXIT_VALIDATION, "bad_params", format!("unknown type {label:?}")),
        }
    }

    if !params.is_empty() {
        let values: Option<Vec<BigRational>> = params.iter().map(|s| parse_rational(s)).collect();
        let Some(values) = values else {
            return failure("classify", inputs, EXIT_PARSE, "parse", "parameters must be rationals".into());
        };
        let Ok(values) = <[BigRational; 3]>::try_from(values) else {
            return failure("classify", inputs, EXIT_VALIDATION, "bad_params", "expected three parameters".into());
        };
        let types = match g {
            Group::Gl3 => classify_gl3(&Rationals, q, &values),
            Group::Gsp4 => classify_gsp4(&Rationals, q, &values),
        };
        let types = match types {
            Ok(t) => t,
            Err(e) => return satake_error(inputs, e),
        };
        results["family"] = json!(types[0].family);
        results["constituents"] = json!(types.into_iter().map(TypeEntry::new).collect::<Vec<_>>());
        if g == Group::Gl3 && results["family"] == "I" {
            results["unitarity"] = json!(gl3_type_i_unitary(q, &values));
        }
    }

    if let Some(ell) = ell {
        if g == Group::Gl3 && (&indices.kp_j % ell) == BigInt::from(0) {
            let msg = format!("ell = {ell} divides 1+q+q^2 = {}; the GL(3) raising theorem assumes it does not", indices.kp_j);
            return failure("classify", inputs, EXIT_VALIDATION, "refused", msg);
        }
        if g == Group::Gsp4 {
            match exclusions(q, ell) {
                Ok(x) => results["excluded"] = json!(x),
                Err(e) => return satake_error(inputs, e),
            }
        }
        match allowed_types(g, q, Some(ell)) {
            Ok(a) => results["allowed_types"] = json!(a),
            Err(e) => return satake_error(inputs, e),
        }
        if let Some(t) = satake {
            let ff = match residue_field(ell) {
                Ok(f) => f,
                Err(e) => return satake_error(inputs, e),
            };
            let elems: Vec<FqElem> = t.iter().map(|&x| ff.from_bigint_mod(&BigInt::from(x))).collect();
            let flag = match (g, elems.len()) {
                (Group::Gl3, 3) => check_u3_condition(&ff, &elems.try_into().expect("length 3"), q),
                (Group::Gsp4, 4) => check_gsp4_condition(&ff, &elems.try_into().expect("length 4"), q),
                (_, n) => Err(SatakeError::BadParams(format!("{n} Satake entries for {g:?}"))),
            };
            match flag {
                Ok(f) => {
                    if !f.holds {
                        warnings.push("the congruence condition fails; the allowed types do not apply".into());
                    }
                    results["condition"] = json!(f);
                }
                Err(e) => return satake_error(inputs, e),
            }
        }
    }
    Outcome { code: EXIT_OK, report: report("classify", inputs, results, warnings) }
}

pub fn cmd_selftest(seed: u64, corrupt_table_d: bool) -> Outcome {
    let mut opts = SuiteOptions { seed, ..SuiteOptions::default() };
    if corrupt_table_d {
        // flip one dimension of row IVa
        opts.tables.texts[3] = opts.tables.texts[3].replace("IV|a||0|0|0|0|1", "IV|a||0|0|0|1|1");
    }
    let inputs = BTreeMap::from([("seed".to_string(), seed.to_string())]);
    let report_s = suite::run_with(&opts, |r| eprintln!("{r}"));
    let criteria: Vec<Value> = report_s
        .results
        .iter()
        .map(|r| {
            let (detail, passed) = match &r.outcome {
                Ok(d) if r.passed() => (d.clone(), true),
                Ok(d) => (format!("{d}; over budget"), false),
                Err(e) => (e.clone(), false),
            };
            json!({ "id": r.id, "name": r.name, "passed": passed, "tolerance": r.tolerance,
                    "budget_seconds": r.budget.as_secs(), "detail": detail })
        })
        .collect();
    let first = report_s.first_failure().map(|r| format!("{:02} {}", r.id, r.name));
    let results = json!({ "seed": seed, "passed": report_s.passed(), "first_failure": first, "criteria": criteria });
    let code = if report_s.passed() { EXIT_OK } else { EXIT_SUITE };
    Outcome { code, report: report("selftest", inputs, results, Vec::new()) }
}
