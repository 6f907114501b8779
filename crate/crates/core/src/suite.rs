//! The acceptance suite: twelve criteria, each with a pinned tolerance and
//! a runtime budget. Shared by the `acceptance` test target and the
//! `selftest` command.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::cosetmodel::random::random_valid_model;
use crate::cosetmodel::toy::ribet_model;
use crate::cosetmodel::ValidatedModel;
use crate::eigensys::{hecke_ring, random_commuting_family, ModCharacter};
use crate::exactalg::{is_prime_u64, spectra_finite, valuation, IntMatrix, Lattice, RatMatrix};
use crate::levelraise::{
    block_formula, build_degeneracy, congruence_module, ihara_defect, raise, CertificateStatus, CharacterSelector,
    PairedLattice, RaiseError,
};
use crate::oracle::check_certificate;
use crate::satake::{
    allowed_types, exclusions, exclusions_brute_force, prime_power, raising_candidates, rep_type,
    unitary_dual_filter, weyl_double_cosets, Group, TableSources, Tables, WeylType,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub tables: TableSources,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: DEFAULT_SEED, tables: TableSources::default() }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub tolerance: &'static str,
    pub budget: Duration,
    pub elapsed: Duration,
    /// `Err` carries the first failure.
    pub outcome: Result<String, String>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok() && self.elapsed <= self.budget
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let detail = match &self.outcome {
            Ok(d) if self.elapsed > self.budget => format!("{d}; over budget"),
            Ok(d) => d.clone(),
            Err(e) => e.clone(),
        };
        write!(
            f,
            "[{status}] {:02} {:<28} tol={:<6} {:>8.3}s / {:>3}s  {detail}",
            self.id,
            self.name,
            self.tolerance,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub seed: u64,
    pub results: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed())
    }

    pub fn first_failure(&self) -> Option<&CriterionResult> {
        self.results.iter().find(|r| !r.passed())
    }
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(id: u32, name: &'static str, tolerance: &'static str, budget_s: u64, f: impl FnOnce() -> Check) -> CriterionResult {
    let start = Instant::now();
    let outcome = f();
    CriterionResult { id, name, tolerance, budget: Duration::from_secs(budget_s), elapsed: start.elapsed(), outcome }
}

/// Dimension rows typed in by hand, kept apart from the
/// embedded text so the two can be compared.
const GL3_ROWS: [(&str, [u32; 3]); 7] = [
    ("I", [1, 3, 6]),
    ("IIa", [0, 1, 3]),
    ("IIb", [1, 2, 3]),
    ("IIIa", [0, 0, 1]),
    ("IIIb", [0, 1, 2]),
    ("IIIc", [0, 1, 2]),
    ("IIId", [1, 1, 1]),
];

const GSP4_ROWS: [(&str, [u32; 5]); 17] = [
    ("I", [1, 2, 4, 4, 8]),
    ("IIa", [0, 1, 2, 1, 4]),
    ("IIb", [1, 1, 2, 3, 4]),
    ("IIIa", [0, 0, 1, 2, 4]),
    ("IIIb", [1, 2, 3, 2, 4]),
    ("IVa", [0, 0, 0, 0, 1]),
    ("IVb", [0, 0, 1, 2, 3]),
    ("IVc", [0, 1, 2, 1, 3]),
    ("IVd", [1, 1, 1, 1, 1]),
    ("Va", [0, 0, 1, 0, 2]),
    ("Vb", [0, 1, 1, 1, 2]),
    ("Vc", [0, 1, 1, 1, 2]),
    ("Vd", [1, 0, 1, 2, 2]),
    ("VIa", [0, 0, 1, 1, 3]),
    ("VIb", [0, 0, 0, 1, 1]),
    ("VIc", [0, 1, 1, 0, 1]),
    ("VId", [1, 1, 2, 2, 3]),
];

/// Types counted as generic for the endgame check.
const GENERIC: [&str; 9] = ["I", "IIa", "IIIa", "I", "IIa", "IIIa", "IVa", "Va", "VIa"];

fn table_fidelity(src: &TableSources) -> Check {
    let tables = Tables::load(src).map_err(|e| e.to_string())?;
    let compare = |group: Group, rows: &[(&str, Vec<u32>)]| -> Result<(), String> {
        let got = tables.rows(group);
        ensure(got.len() == rows.len(), || format!("{group:?}: {} rows, expected {}", got.len(), rows.len()))?;
        for ((rep, prof), (label, dims)) in got.iter().zip(rows) {
            ensure(rep.label == *label && prof.dims == *dims, || {
                format!("{group:?} {}: {:?}, expected {label} {dims:?}", rep.label, prof.dims)
            })?;
        }
        Ok(())
    };
    compare(Group::Gl3, &GL3_ROWS.iter().map(|(l, d)| (*l, d.to_vec())).collect::<Vec<_>>())?;
    compare(Group::Gsp4, &GSP4_ROWS.iter().map(|(l, d)| (*l, d.to_vec())).collect::<Vec<_>>())?;
    for (i, g) in GENERIC.iter().enumerate() {
        let group = if i < 3 { Group::Gl3 } else { Group::Gsp4 };
        ensure(tables.row(group, g).is_some_and(|(r, _)| r.generic), || format!("{group:?} {g} should be generic"))?;
    }
    let generic_count = tables.gl3.iter().chain(&tables.gsp4).filter(|(r, _)| r.generic).count();
    ensure(generic_count == GENERIC.len(), || format!("{generic_count} generic rows, expected {}", GENERIC.len()))?;
    Ok(format!("{} + {} rows, 4 checksums", tables.gl3.len(), tables.gsp4.len()))
}

fn constituent_sums() -> Check {
    let t = Tables::embedded();
    let mut n = 0;
    for group in [Group::Gl3, Group::Gsp4] {
        let full = t.family_sum(group, "I");
        for fam in t.reducible_families(group) {
            let s = t.family_sum(group, &fam);
            ensure(s == full, || format!("{group:?} {fam}: {s:?} != {full:?}"))?;
            n += 1;
        }
    }
    ensure(n == 7, || format!("{n} reducible families, expected 7"))?;
    Ok("7 families sum to the type-I row".into())
}

fn weyl_check() -> Check {
    let t = Tables::embedded();
    let a2 = [
        ("K", weyl_double_cosets(WeylType::A2, &[], &["s1", "s2"])),
        ("J", weyl_double_cosets(WeylType::A2, &[], &["s1"])),
        ("I", weyl_double_cosets(WeylType::A2, &[], &[])),
    ];
    let c2 = [
        ("K", weyl_double_cosets(WeylType::C2, &[], &["s_short", "s_long"])),
        ("J", weyl_double_cosets(WeylType::C2, &[], &["s_short"])),
        ("J'", weyl_double_cosets(WeylType::C2, &[], &["s_long"])),
        ("I", weyl_double_cosets(WeylType::C2, &[], &[])),
    ];
    let mut counts = Vec::new();
    for (group, cols) in [(Group::Gl3, &a2[..]), (Group::Gsp4, &c2[..])] {
        let row = &t.row(group, "I").unwrap().1;
        for (col, n) in cols {
            let n = n.clone().map_err(|e| e.to_string())?;
            let want = row.dim(col).unwrap() as usize;
            ensure(n == want, || format!("{group:?} {col}: {n} double cosets, table says {want}"))?;
            counts.push(n.to_string());
        }
    }
    Ok(format!("A2 {}; C2 {}", counts[..3].join("/"), counts[3..].join("/")))
}

fn prime_powers_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&q| prime_power(q).is_some()).collect()
}

fn primes_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&p| is_prime_u64(p)).collect()
}

fn set(v: &[&str]) -> BTreeSet<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn endgames() -> Check {
    let gl3: BTreeSet<String> = unitary_dual_filter(Group::Gl3, &raising_candidates(Group::Gl3)).into_iter().collect();
    ensure(gl3 == set(&["I", "IIa"]), || format!("GL3 endgame {gl3:?}"))?;
    let before: BTreeSet<String> =
        unitary_dual_filter(Group::Gsp4, &raising_candidates(Group::Gsp4)).into_iter().collect();
    ensure(before == set(&["I", "IIa", "IIIa", "Va", "VIa"]), || format!("GSp4 endgame {before:?}"))?;
    let mut pairs = 0;
    for q in prime_powers_below(50) {
        for ell in primes_below(50) {
            if q % ell == 0 {
                continue;
            }
            pairs += 1;
            let g: BTreeSet<String> =
                allowed_types(Group::Gl3, q, Some(ell)).map_err(|e| e.to_string())?.into_iter().collect();
            ensure(g == set(&["I", "IIa"]), || format!("GL3 q={q} ell={ell}: {g:?}"))?;
            let s: BTreeSet<String> =
                allowed_types(Group::Gsp4, q, Some(ell)).map_err(|e| e.to_string())?.into_iter().collect();
            ensure(s.is_subset(&before) && set(&["I", "IIa", "IIIa"]).is_subset(&s), || {
                format!("GSp4 q={q} ell={ell}: {s:?}")
            })?;
            let q4 = (q % ell).pow(4) % ell;
            if q4 != 1 % ell {
                ensure(s == set(&["I", "IIa", "IIIa"]), || format!("GSp4 q={q} ell={ell} with q^4 != 1: {s:?}"))?;
            }
            for l in g.iter().map(|l| (Group::Gl3, l)).chain(s.iter().map(|l| (Group::Gsp4, l))) {
                ensure(rep_type(l.0, l.1).is_some_and(|r| r.generic), || format!("{l:?} is not generic"))?;
            }
        }
    }
    Ok(format!("{pairs} (q, ell) pairs"))
}

fn exclusion_oracle() -> Check {
    let mut pairs = 0;
    for q in prime_powers_below(50) {
        for ell in primes_below(50) {
            if q % ell == 0 {
                continue;
            }
            let closed = exclusions(q, ell).map_err(|e| e.to_string())?;
            let brute = exclusions_brute_force(q, ell).map_err(|e| e.to_string())?;
            ensure(closed == brute, || format!("q={q} ell={ell}: closed {closed:?}, search {brute:?}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (q, ell) pairs agree"))
}

fn random_models(seed: u64) -> Vec<ValidatedModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100)
        .map(|_| ValidatedModel::new(random_valid_model(&mut rng, 50)).expect("random models are valid"))
        .collect()
}

fn block_identity(models: &[ValidatedModel]) -> Check {
    for (i, m) in models.iter().enumerate() {
        ensure(m.size(crate::cosetmodel::Level::J) <= 50, || format!("model {i} is too large"))?;
        let deg = build_degeneracy(m).map_err(|e| format!("model {i}: {e}"))?;
        ensure(block_formula(m) == deg.delta_gram, || format!("model {i}: block formula differs"))?;
    }
    Ok(format!("{} models", models.len()))
}

fn ihara(models: &[ValidatedModel]) -> Check {
    for (i, m) in models.iter().enumerate() {
        let d = ihara_defect(m);
        ensure(d.is_empty(), || format!("model {i}: defect {d:?}"))?;
    }
    Ok(format!("{} models, all trivial", models.len()))
}

fn congruence_law() -> Check {
    let one = PairedLattice::standard(RatMatrix::identity(1));
    for d in 1..=20i64 {
        for e in 1..=20i64 {
            let delta = IntMatrix::from_i64_rows(&[vec![d]]);
            let got = congruence_module(&one, &one, &delta, &BigInt::from(e)).map_err(|x| x.to_string())?;
            let order: BigInt = got.iter().product();
            let want = BigInt::from(d * d / (d * d).gcd(&e));
            ensure(got.len() <= 1 && order == want, || format!("d={d} E={e}: {got:?}, expected Z/{want}"))?;
        }
    }
    Ok("400 instances".into())
}

fn corpus_consistency() -> Check {
    let entries = corpus::embedded();
    ensure(entries.len() >= 5, || format!("only {} corpus models", entries.len()))?;
    for (e, golden) in &entries {
        let m = ValidatedModel::new(e.model.clone()).map_err(|r| format!("{}: {r}", e.name))?;
        let cert = raise(&m, e.ell, &CharacterSelector::Named(e.character.into()), m.metadata().rank_one)
            .map_err(|x| format!("{}: {x}", e.name))?;
        ensure(cert.n >= 1, || format!("{}: n = {}", e.name, cert.n))?;
        ensure(cert.status == CertificateStatus::Found, || format!("{}: no new character", e.name))?;
        let report = check_certificate(&m, &cert);
        ensure(report.passed(), || format!("{}: oracle rejects {:?}", e.name, report.failures()))?;
        ensure(&cert == golden, || format!("{}: certificate differs from the golden copy", e.name))?;
    }
    Ok(format!("{} models, oracle agrees", entries.len()))
}

fn v(x: i64, ell: u64) -> u32 {
    valuation(&BigInt::from(x), ell).unwrap_or(u32::MAX)
}

fn ribet_specialization() -> Check {
    let mut realized = 0;
    let mut symbolic = 0;
    for q in [2i64, 3, 5, 7] {
        let bound = (2.0 * (q as f64).sqrt() * 1.1).floor() as i64;
        for a in -bound..=bound {
            let m = a * a - (q + 1) * (q + 1);
            // block matrix [[q+1, a], [a, q+1]]: m = -det
            let block = RatMatrix::from_fn(2, 2, |i, j| {
                num_rational::BigRational::from_integer(BigInt::from(if i == j { q + 1 } else { a }))
            });
            let det = &(block.get(0, 0) * block.get(1, 1)) - &(block.get(0, 1) * block.get(1, 0));
            ensure(-det.to_integer() == BigInt::from(m), || format!("q={q} a={a}: det mismatch"))?;
            for ell in [3u64, 5, 7, 11] {
                symbolic += 1;
                if m != 0 {
                    let u = PairedLattice::standard(RatMatrix::identity(2));
                    let w = PairedLattice { lattice: Lattice::standard(2), gram: block.clone() };
                    let module = congruence_module(&u, &w, &IntMatrix::identity(2), &BigInt::one())
                        .map_err(|e| e.to_string())?;
                    let len: u32 = module.iter().map(|f| valuation(f, ell).unwrap_or(0)).sum();
                    ensure(len == v(m, ell), || format!("q={q} a={a} ell={ell}: module length {len}"))?;
                }
                // realize a = 2x - q - 1 when possible
                if (a + q + 1) % 2 != 0 {
                    continue;
                }
                let x = (a + q + 1) / 2;
                if !(0..=q + 1).contains(&x) {
                    continue;
                }
                realized += 1;
                let model = ValidatedModel::new(ribet_model(q as u64, x as u64).map_err(|e| e.to_string())?)
                    .map_err(|r| r.to_string())?;
                let out = raise(&model, ell, &CharacterSelector::Named("f".into()), false);
                let ctx = format!("q={q} a={a} ell={ell}");
                match out {
                    Err(RaiseError::EllDividesIndex { .. }) => {
                        ensure((q + 1) % ell as i64 == 0, || format!("{ctx}: refused without cause"))?
                    }
                    Err(RaiseError::MZero) => ensure(m == 0, || format!("{ctx}: MZero with m = {m}"))?,
                    // x in {0, q+1} disconnects the model and f is class-constant
                    Err(RaiseError::AbelianInput) => {
                        ensure((a - q - 1).rem_euclid(ell as i64) == 0 || x == 0 || x == q + 1, || {
                            format!("{ctx}: abelian although a != q+1 mod ell")
                        })?
                    }
                    Err(e) => return Err(format!("{ctx}: {e}")),
                    Ok(cert) => {
                        ensure((a - q - 1).rem_euclid(ell as i64) != 0, || format!("{ctx}: raised an abelian input"))?;
                        ensure(cert.m == BigInt::from(m), || format!("{ctx}: m = {}", cert.m))?;
                        let want = v(m, ell) as i64 - cert.error_terms.v_e as i64 - cert.error_terms.v_ecal as i64;
                        ensure(cert.raw_bound == want && cert.n == want.max(0), || format!("{ctx}: n = {}", cert.n))?;
                        ensure(cert.error_terms.v_ecal == 0 && cert.error_terms.v_e == 0, || {
                            format!("{ctx}: nonzero error terms")
                        })?;
                        if cert.n >= 1 {
                            ensure(cert.status == CertificateStatus::Found, || format!("{ctx}: not found"))?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{symbolic} symbolic cases, {realized} realized models"))
}

fn families(seed: u64) -> Vec<Vec<(String, IntMatrix)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    (0..50)
        .map(|_| {
            let gens = rng.gen_range(1..=3);
            random_commuting_family(&mut rng, 8, gens)
        })
        .collect()
}

fn deligne_serre(fams: &[Vec<(String, IntMatrix)>]) -> Check {
    let mut checked = 0;
    for (i, fam) in fams.iter().enumerate() {
        let ring = hecke_ring(fam).map_err(|e| format!("family {i}: {e}"))?;
        for ell in [2u64, 3, 5, 7] {
            let spec = spectra_finite(fam, ell, 1).map_err(|e| format!("family {i}: {e}"))?;
            for c in &spec.characters {
                let eta = ModCharacter::from_spectrum(&spec, c);
                let lifts = ring.lift_character(&eta).map_err(|e| format!("family {i} ell={ell}: {e}"))?;
                ensure(!lifts.is_empty(), || format!("family {i} ell={ell}: {} does not lift", eta.render()))?;
                for l in &lifts {
                    ensure(l.reduces_to(&eta), || format!("family {i} ell={ell}: {} does not reduce back", l.render()))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} characters over {} families", fams.len()))
}

type ModMat = Vec<Vec<u64>>;

fn mod_matrix(m: &IntMatrix, p: u64) -> ModMat {
    m.to_rows().iter().map(|r| r.iter().map(|x| crate::oracle::residue(x, p)).collect()).collect()
}

fn mod_mul(a: &ModMat, b: &ModMat, p: u64) -> ModMat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(0, |acc, k| (acc + a[i][k] * b[k][j]) % p)).collect())
        .collect()
}

/// `x` is a nonzero nilpotent matrix mod `p`.
fn nonzero_nilpotent(x: &ModMat, p: u64) -> bool {
    let zero = |m: &ModMat| m.iter().all(|r| r.iter().all(|&v| v == 0));
    if zero(x) {
        return false;
    }
    let mut acc = x.clone();
    for _ in 1..x.len() {
        acc = mod_mul(&acc, x, p);
    }
    zero(&acc)
}

fn combination(basis: &[ModMat], coeffs: &[u64], p: u64) -> ModMat {
    let n = basis[0].len();
    (0..n)
        .map(|i| (0..n).map(|j| basis.iter().zip(coeffs).fold(0, |acc, (b, c)| (acc + b[i][j] * c) % p)).collect())
        .collect()
}

fn semisimplicity(fams: &[Vec<(String, IntMatrix)>], seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9a11);
    let (mut certified, mut refused) = (0, 0);
    for (i, fam) in fams.iter().enumerate() {
        let ring = hecke_ring(fam).map_err(|e| format!("family {i}: {e}"))?;
        for p in primes_below(20) {
            let cert = match ring.semisimple_mod_p(p) {
                Ok(c) => c,
                Err(_) => false,
            };
            let basis: Vec<ModMat> = ring.z_basis.iter().map(|z| mod_matrix(z, p)).collect();
            let (nil_dim, witness) = ring.nilradical_mod_p(p).map_err(|e| e.to_string())?;
            let mut explicit = witness.as_ref().is_some_and(|c| nonzero_nilpotent(&combination(&basis, c, p), p));
            for _ in 0..64 {
                if explicit {
                    break;
                }
                let c: Vec<u64> = (0..basis.len()).map(|_| rng.gen_range(0..p)).collect();
                explicit = nonzero_nilpotent(&combination(&basis, &c, p), p);
            }
            if cert {
                ensure(!explicit && nil_dim == 0, || format!("family {i}: certified p={p} with a nilpotent"))?;
                certified += 1;
            } else {
                refused += 1;
            }
        }
    }
    Ok(format!("{certified} certified, {refused} not certified"))
}

/// Run every criterion in order.
pub fn run(opts: &SuiteOptions) -> SuiteReport {
    run_with(opts, |_| {})
}

/// As [`run`], calling `on_result` as each criterion finishes.
pub fn run_with(opts: &SuiteOptions, mut on_result: impl FnMut(&CriterionResult)) -> SuiteReport {
    let mut results = Vec::new();
    let mut push = |r: CriterionResult| {
        on_result(&r);
        results.push(r);
    };
    push(timed(1, "table fidelity", "exact", 1, || table_fidelity(&opts.tables)));
    push(timed(2, "constituent sums", "exact", 1, constituent_sums));
    push(timed(3, "weyl double cosets", "exact", 1, weyl_check));
    push(timed(4, "raising endgames", "exact", 5, endgames));
    push(timed(5, "exclusion oracle", "exact", 30, exclusion_oracle));
    let start = Instant::now();
    let models = random_models(opts.seed);
    let build = start.elapsed();
    let mut r6 = timed(6, "block formula", "exact", 30, || block_identity(&models));
    r6.elapsed += build;
    push(r6);
    push(timed(7, "ihara defect", "exact", 60, || ihara(&models)));
    push(timed(8, "congruence module law", "exact", 1, congruence_law));
    push(timed(9, "corpus raising", "exact", 60, corpus_consistency));
    push(timed(10, "ribet specialization", "exact", 10, ribet_specialization));
    let fams = families(opts.seed);
    push(timed(11, "deligne-serre round trip", "exact", 30, || deligne_serre(&fams)));
    push(timed(12, "semisimplicity certificates", "exact", 30, || semisimplicity(&fams, opts.seed)));
    SuiteReport { seed: opts.seed, results }
}
