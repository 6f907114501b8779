//! Iwahori-spherical representations of GL(3) and GSp(4) over a
//! `q`-adic field: classification from Satake parameters, parahoric
//! fixed-space dimensions, the congruence conditions on Satake parameters
//! that trigger level raising, and Weyl double-coset counts.
//!
//! Unramified characters are recorded by their value at a uniformizer, so
//! `nu = |.|` is the value `1/q`. Half-integral twists are assumed already
//! multiplied out by the caller.

pub mod tables;

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{is_prime_u64, Field, FiniteField, FqElem};
use crate::perm::{Perm, PermGroup};
pub use tables::{TableError, TableSources};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Gl3,
    Gsp4,
}

impl Group {
    pub fn parse(s: &str) -> Option<Group> {
        match s.to_ascii_lowercase().as_str() {
            "gl3" => Some(Group::Gl3),
            "gsp4" => Some(Group::Gsp4),
            _ => None,
        }
    }

    /// Parahoric columns of the dimension table.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Group::Gl3 => &["K", "J", "I"],
            Group::Gsp4 => &["K", "K'", "J", "J'", "I"],
        }
    }
}

/// A table cell describing when a property holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cond {
    Always,
    Never,
    When(String),
    /// Type I of GL(3): governed by the complementary-series rule, see
    /// [`gl3_type_i_unitary`].
    ComplementarySeries,
    /// The table has no such column.
    NotTabulated,
}

impl Cond {
    fn parse(cell: &str) -> Cond {
        match cell {
            "" => Cond::Never,
            "*" => Cond::Always,
            "below" => Cond::ComplementarySeries,
            s => Cond::When(s.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Remark {
    None,
    NotUnitary,
    Irrelevant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepType {
    pub group: Group,
    pub family: String,
    /// Family and letter, e.g. `IIa`; type I has no letter.
    pub label: String,
    pub representation: String,
    pub unitary: Cond,
    pub tempered: Cond,
    pub square_integrable: Cond,
    pub generic: bool,
    pub remark: Remark,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParahoricProfile {
    pub group: Group,
    pub columns: Vec<String>,
    pub dims: Vec<u32>,
}

impl ParahoricProfile {
    pub fn dim(&self, column: &str) -> Option<u32> {
        self.columns.iter().position(|c| c == column).map(|i| self.dims[i])
    }
}

/// Parsed tables: one `(type, profile)` pair per row, in table order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    pub gl3: Vec<(RepType, ParahoricProfile)>,
    pub gsp4: Vec<(RepType, ParahoricProfile)>,
}

fn parse_group(
    group: Group,
    names: (&'static str, &'static str),
    types: &str,
    dims: &str,
) -> Result<Vec<(RepType, ParahoricProfile)>, TableError> {
    let type_width = if group == Group::Gl3 { 7 } else { 6 };
    let cols = group.columns();
    let trows = tables::rows(names.0, types, type_width)?;
    let drows = tables::rows(names.1, dims, 3 + cols.len())?;
    if trows.len() != drows.len() {
        return Err(TableError::Malformed {
            table: names.1,
            line: drows.len().min(trows.len()) + 1,
            reason: format!("{} type rows but {} dimension rows", trows.len(), drows.len()),
        });
    }
    let mut out = Vec::new();
    for (i, (t, d)) in trows.iter().zip(&drows).enumerate() {
        if t[0] != d[0] || t[1] != d[1] {
            return Err(TableError::Malformed {
                table: names.1,
                line: i + 1,
                reason: format!("row {}{} does not match type row {}{}", d[0], d[1], t[0], t[1]),
            });
        }
        let (unitary, rest) = match group {
            Group::Gl3 => (Cond::parse(&t[3]), &t[4..]),
            Group::Gsp4 => (Cond::NotTabulated, &t[3..]),
        };
        let remark = match d[2].as_str() {
            "" => Remark::None,
            "not unitary" => Remark::NotUnitary,
            "irrelevant" => Remark::Irrelevant,
            other => {
                return Err(TableError::Malformed {
                    table: names.1,
                    line: i + 1,
                    reason: format!("unknown remark {other:?}"),
                })
            }
        };
        let dims: Result<Vec<u32>, _> = d[3..].iter().map(|c| c.parse::<u32>()).collect();
        let dims = dims.map_err(|e| TableError::Malformed { table: names.1, line: i + 1, reason: e.to_string() })?;
        let rep = RepType {
            group,
            family: t[0].clone(),
            label: format!("{}{}", t[0], t[1]),
            representation: t[2].clone(),
            unitary,
            tempered: Cond::parse(&rest[0]),
            square_integrable: Cond::parse(&rest[1]),
            generic: rest[2] == "*",
            remark,
        };
        let profile = ParahoricProfile { group, columns: cols.iter().map(|c| c.to_string()).collect(), dims };
        out.push((rep, profile));
    }
    Ok(out)
}

impl Tables {
    /// Checksum, then parse.
    pub fn load(src: &TableSources) -> Result<Tables, TableError> {
        src.verify_checksums()?;
        let [a, b, c, d] = &src.texts;
        Ok(Tables {
            gl3: parse_group(Group::Gl3, ("A", "B"), a, b)?,
            gsp4: parse_group(Group::Gsp4, ("C", "D"), c, d)?,
        })
    }

    pub fn embedded() -> &'static Tables {
        static T: OnceLock<Tables> = OnceLock::new();
        T.get_or_init(|| Tables::load(&TableSources::default()).expect("embedded tables are pinned"))
    }

    pub fn rows(&self, group: Group) -> &[(RepType, ParahoricProfile)] {
        match group {
            Group::Gl3 => &self.gl3,
            Group::Gsp4 => &self.gsp4,
        }
    }

    pub fn row(&self, group: Group, label: &str) -> Option<&(RepType, ParahoricProfile)> {
        self.rows(group).iter().find(|(r, _)| r.label == label)
    }

    pub fn family(&self, group: Group, family: &str) -> Vec<RepType> {
        self.rows(group).iter().filter(|(r, _)| r.family == family).map(|(r, _)| r.clone()).collect()
    }

    /// Families with more than one constituent.
    pub fn reducible_families(&self, group: Group) -> Vec<String> {
        let mut fams: Vec<String> = Vec::new();
        for (r, _) in self.rows(group) {
            if r.family != "I" && !fams.contains(&r.family) {
                fams.push(r.family.clone());
            }
        }
        fams
    }

    /// Column sums of the constituents of `family`.
    pub fn family_sum(&self, group: Group, family: &str) -> Vec<u32> {
        let width = group.columns().len();
        self.rows(group)
            .iter()
            .filter(|(r, _)| r.family == family)
            .fold(vec![0; width], |acc, (_, p)| acc.iter().zip(&p.dims).map(|(a, b)| a + b).collect())
    }
}

pub fn profile(group: Group, label: &str) -> Option<ParahoricProfile> {
    Tables::embedded().row(group, label).map(|(_, p)| p.clone())
}

pub fn rep_type(group: Group, label: &str) -> Option<RepType> {
    Tables::embedded().row(group, label).map(|(r, _)| r.clone())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatakeError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("ell = {ell} divides {what} = {value}")]
    EllDividesIndex { ell: u64, what: &'static str, value: BigInt },
}

fn nu<F: Field>(f: &F, q: u64) -> Result<F::Elem, SatakeError> {
    if q < 2 {
        return Err(SatakeError::BadParams(format!("q = {q} must be at least 2")));
    }
    f.inv(&f.from_i64(q as i64)).ok_or_else(|| SatakeError::BadParams(format!("q = {q} is zero in the value field")))
}

fn nonzero<F: Field>(f: &F, vals: &[F::Elem]) -> Result<(), SatakeError> {
    if vals.iter().any(|v| f.is_zero(v)) {
        return Err(SatakeError::BadParams("character values must be nonzero".into()));
    }
    Ok(())
}

/// Constituent types of `chi_1 x chi_2 x chi_3`.
///
/// III when the values form a chain `c nu, c, c nu^-1`; otherwise II when
/// some ratio is `q^{+-1}`; otherwise I.
pub fn classify_gl3<F: Field>(f: &F, q: u64, chi: &[F::Elem; 3]) -> Result<Vec<RepType>, SatakeError> {
    nonzero(f, chi)?;
    let nu = nu(f, q)?;
    let linked = |a: &F::Elem, b: &F::Elem| f.mul(a, &nu) == *b;
    let chain = (0..3).any(|m| {
        let others: Vec<usize> = (0..3).filter(|&i| i != m).collect();
        let (a, b) = (&chi[others[0]], &chi[others[1]]);
        (linked(&chi[m], a) && linked(b, &chi[m])) || (linked(&chi[m], b) && linked(a, &chi[m]))
    });
    let any_link = (0..3).any(|i| (0..3).any(|j| i != j && linked(&chi[i], &chi[j])));
    let family = if chain {
        "III"
    } else if any_link {
        "II"
    } else {
        "I"
    };
    Ok(Tables::embedded().family(Group::Gl3, family))
}

/// Values `(chi_1, chi_2, sigma)` at a uniformizer.
pub type Gsp4Params<E> = [E; 3];

/// The orbit of `(chi_1, chi_2, sigma)` under the Weyl group of `C_2`,
/// generated by swapping `chi_1, chi_2` and by
/// `(chi_1, chi_2, sigma) -> (chi_1^-1, chi_2, sigma chi_1)`.
pub fn gsp4_orbit<F: Field>(f: &F, p: &Gsp4Params<F::Elem>) -> Vec<Gsp4Params<F::Elem>> {
    let mut orbit = vec![p.clone()];
    let mut i = 0;
    while i < orbit.len() {
        let [a, b, s] = orbit[i].clone();
        let inv_a = f.inv(&a).expect("nonzero");
        for next in [[b.clone(), a.clone(), s.clone()], [inv_a, b.clone(), f.mul(&s, &a)]] {
            if !orbit.contains(&next) {
                orbit.push(next);
            }
        }
        i += 1;
    }
    orbit
}

/// The smallest orbit element in the field's canonical order.
pub fn normalize_gsp4<F: Field>(f: &F, p: &Gsp4Params<F::Elem>) -> Gsp4Params<F::Elem> {
    let mut orbit = gsp4_orbit(f, p);
    orbit.sort_by(|x, y| {
        x.iter().zip(y.iter()).map(|(a, b)| f.cmp_elems(a, b)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    orbit.swap_remove(0)
}

/// Constituent types of `chi_1 x chi_2 >| sigma`, tested on every Weyl
/// conjugate in the order IV, V, VI, II, III.
pub fn classify_gsp4<F: Field>(f: &F, q: u64, p: &Gsp4Params<F::Elem>) -> Result<Vec<RepType>, SatakeError> {
    nonzero(f, p)?;
    let nu = nu(f, q)?;
    let one = f.one();
    let xi0 = f.neg(&one);
    let orbit = gsp4_orbit(f, p);
    let hit = |pred: &dyn Fn(&F::Elem, &F::Elem) -> bool| orbit.iter().any(|[a, b, _]| pred(a, b));
    let family = if hit(&|a, b| *a == f.mul(&nu, &nu) && *b == nu) {
        "IV"
    } else if xi0 != one && hit(&|a, b| *a == f.mul(&nu, &xi0) && *b == xi0) {
        "V"
    } else if hit(&|a, b| *a == nu && *b == one) {
        "VI"
    } else if hit(&|a, b| *a == f.mul(b, &nu)) {
        "II"
    } else if hit(&|_, b| *b == nu) {
        "III"
    } else {
        "I"
    };
    Ok(Tables::embedded().family(Group::Gsp4, family))
}

/// Unitarity of a GL(3) type I representation with rational values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unitarity {
    Unitary,
    NotUnitary,
    Indeterminate,
}

/// `q = p^k` with `p` prime, when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// Type I of GL(3) is unitary when every `|chi_i| = 1`, or when, after a
/// permutation, `chi_1 chi_2^-1 = nu^alpha` with `0 < alpha < 1` and
/// `chi_3` unitary. Rational values have `|x| = |x|_R`, so
/// `|chi_1/chi_2| = q^-alpha` forces `|chi_1/chi_2| = p^-j` with
/// `q = p^k`, `0 < j < k`. Values given mod `ell` carry no absolute value.
pub fn gl3_type_i_unitary(q: u64, chi: &[num_rational::BigRational; 3]) -> Unitarity {
    use num_traits::{One, Signed};
    let Some((p, k)) = prime_power(q) else { return Unitarity::Indeterminate };
    let unit = |x: &num_rational::BigRational| x.abs().is_one();
    if chi.iter().all(unit) {
        return Unitarity::Unitary;
    }
    let big_p = BigInt::from(p);
    for (i, j, m) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        // chi_i, chi_j = chi nu^a, chi nu^-a with chi unitary
        if !unit(&chi[m]) || chi[j].numer().sign() == num_bigint::Sign::NoSign || !unit(&(&chi[i] * &chi[j])) {
            continue;
        }
        let r = (&chi[i] / &chi[j]).abs();
        let r = if r > num_rational::BigRational::one() { r.recip() } else { r };
        if !r.numer().is_one() {
            continue;
        }
        let mut d = r.denom().clone();
        let mut jexp = 0;
        while (&d % &big_p) == BigInt::from(0) {
            d /= &big_p;
            jexp += 1;
        }
        if d.is_one() && 0 < jexp && jexp < k {
            return Unitarity::Unitary;
        }
    }
    Unitarity::NotUnitary
}

/// `[K:J]` and `[K':J]` at a prime power `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexTable {
    #[serde(with = "crate::serde_int")]
    pub k_j: BigInt,
    #[serde(with = "crate::serde_int")]
    pub kp_j: BigInt,
}

/// GL(3): `K'` is the conjugate hyperspecial and `J = K ∩ K'`, so both
/// indices are `1+q+q^2`. GSp(4) with `J` Klingen: `1+q+q^2+q^3` and `q`.
pub fn parahoric_indices(group: Group, q: u64) -> Result<IndexTable, SatakeError> {
    if q < 2 {
        return Err(SatakeError::BadParams(format!("q = {q} must be at least 2")));
    }
    let q = BigInt::from(q);
    let s3 = BigInt::from(1) + &q + &q * &q;
    Ok(match group {
        Group::Gl3 => IndexTable { k_j: s3.clone(), kp_j: s3 },
        Group::Gsp4 => IndexTable { k_j: &s3 + &q * &q * &q, kp_j: q },
    })
}

/// Values mod `ell` are handled in `F_{ell^2}`, which holds a square root
/// of `q` and every value of an unramified quadratic twist.
pub fn residue_field(ell: u64) -> Result<FiniteField, SatakeError> {
    FiniteField::new(ell, 2).map_err(|e| SatakeError::BadParams(e.to_string()))
}

fn check_ell(q: u64, ell: u64) -> Result<(), SatakeError> {
    if !is_prime_u64(ell) {
        return Err(SatakeError::BadParams(format!("ell = {ell} is not prime")));
    }
    if q % ell == 0 {
        return Err(SatakeError::BadParams(format!("ell = {ell} must not divide q = {q}")));
    }
    Ok(())
}

fn sorted(ff: &FiniteField, v: &[FqElem]) -> Vec<u128> {
    let mut out: Vec<u128> = v.iter().map(|x| ff.encode(x)).collect();
    out.sort_unstable();
    out
}

/// Outcome of a Satake congruence test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlag {
    pub holds: bool,
    /// For GSp(4): the condition holds and `q^4 != 1 mod ell`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement: Option<bool>,
    pub reasons: Vec<String>,
}

/// `t ≡ diag(q, 1, q^-1)` up to order, and `ell ∤ 1+q+q^2`.
pub fn check_u3_condition(ff: &FiniteField, t: &[FqElem; 3], q: u64) -> Result<ConditionFlag, SatakeError> {
    let ell = ff.characteristic();
    check_ell(q, ell)?;
    let qe = ff.from_i64(q as i64);
    let target = [qe.clone(), ff.one(), ff.inv(&qe).expect("q is a unit")];
    let mut reasons = Vec::new();
    let matches = sorted(ff, t) == sorted(ff, &target);
    if !matches {
        reasons.push(format!("Satake parameter is not congruent to diag({q}, 1, {q}^-1) mod {ell}"));
    }
    let idx = 1 + q as u128 + (q as u128) * (q as u128);
    let divides = idx % ell as u128 == 0;
    if divides {
        reasons.push(format!("ell = {ell} divides 1+q+q^2 = {idx}"));
    }
    Ok(ConditionFlag { holds: matches && !divides, refinement: None, reasons })
}

/// `t ≡ diag(1, q, q^2, q^3)` up to order; the refinement also asks
/// `q^4 != 1 mod ell`.
pub fn check_gsp4_condition(ff: &FiniteField, t: &[FqElem; 4], q: u64) -> Result<ConditionFlag, SatakeError> {
    let ell = ff.characteristic();
    check_ell(q, ell)?;
    let qe = ff.from_i64(q as i64);
    let target: Vec<FqElem> = (0..4).map(|i| ff.pow_u64(&qe, i)).collect();
    let mut reasons = Vec::new();
    let holds = sorted(ff, t) == sorted(ff, &target);
    if !holds {
        reasons.push(format!("Satake parameter is not congruent to diag(1, {q}, {q}^2, {q}^3) mod {ell}"));
    }
    let q4_one = ff.is_one(&ff.pow_u64(&qe, 4));
    if q4_one {
        reasons.push(format!("q^4 = 1 mod {ell}"));
    }
    Ok(ConditionFlag { holds, refinement: Some(holds && !q4_one), reasons })
}

/// Types among {Va, VIa} ruled out for a congruence at `q` mod `ell`:
/// Va unless `q ≡ -1` or `q^2 ≡ -1`, VIa unless `q^2 ≡ 1`.
pub fn exclusions(q: u64, ell: u64) -> Result<BTreeSet<String>, SatakeError> {
    check_ell(q, ell)?;
    let (q1, q2) = (q % ell, (q % ell) * (q % ell) % ell);
    let minus_one = ell - 1;
    let mut out = BTreeSet::new();
    if q1 != minus_one % ell && q2 != minus_one % ell {
        out.insert("Va".to_string());
    }
    if q2 != 1 % ell {
        out.insert("VIa".to_string());
    }
    Ok(out)
}

/// The same sets by search: Va (resp. VIa) is excluded exactly when no
/// `sigma` in `F_{ell^2}^*` and square root `s` of `q` make
/// `{s^-1 sigma, -s^-1 sigma, -s sigma, s sigma}` (resp.
/// `{s^-1 sigma, s^-1 sigma, s sigma, s sigma}`) equal
/// `{s^-3, s^-1, s, s^3}` as multisets.
pub fn exclusions_brute_force(q: u64, ell: u64) -> Result<BTreeSet<String>, SatakeError> {
    check_ell(q, ell)?;
    let ff = residue_field(ell)?;
    let qe = ff.from_i64(q as i64);
    let roots = ff.sqrt_all(&qe).unwrap_or_default();
    let (mut va, mut via) = (false, false);
    for s in &roots {
        let si = ff.inv(s).expect("unit");
        let target = sorted(&ff, &[ff.pow_u64(&si, 3), si.clone(), s.clone(), ff.pow_u64(s, 3)]);
        for sigma in ff.elements().filter(|x| !ff.is_zero(x)) {
            let (lo, hi) = (ff.mul(&si, &sigma), ff.mul(s, &sigma));
            va |= sorted(&ff, &[lo.clone(), ff.neg(&lo), ff.neg(&hi), hi.clone()]) == target;
            via |= sorted(&ff, &[lo.clone(), lo.clone(), hi.clone(), hi]) == target;
        }
    }
    let mut out = BTreeSet::new();
    if !va {
        out.insert("Va".to_string());
    }
    if !via {
        out.insert("VIa".to_string());
    }
    Ok(out)
}

/// Types whose `J`-fixed space is bigger than the `K`- and `K'`-fixed
/// spaces together. For GL(3), `K'` is conjugate to `K`.
pub fn raising_candidates(group: Group) -> Vec<String> {
    Tables::embedded()
        .rows(group)
        .iter()
        .filter(|(_, p)| {
            let k = p.dim("K").unwrap();
            let kp = p.dim("K'").unwrap_or(k);
            p.dim("J").unwrap() > k + kp
        })
        .map(|(r, _)| r.label.clone())
        .collect()
}

/// Drops types the tables mark as not unitary or irrelevant.
pub fn unitary_dual_filter(group: Group, labels: &[String]) -> Vec<String> {
    labels
        .iter()
        .filter(|l| rep_type(group, l).is_some_and(|r| r.remark == Remark::None))
        .cloned()
        .collect()
}

/// Unitary raising candidates at `q`, minus exclusions mod `ell`.
pub fn allowed_types(group: Group, q: u64, ell: Option<u64>) -> Result<Vec<String>, SatakeError> {
    let base = unitary_dual_filter(group, &raising_candidates(group));
    match (group, ell) {
        (Group::Gsp4, Some(ell)) => {
            let ex = exclusions(q, ell)?;
            Ok(base.into_iter().filter(|l| !ex.contains(l)).collect())
        }
        _ => Ok(base),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeylType {
    A2,
    C2,
}

impl WeylType {
    /// Simple reflections as permutations: `s1 = (0 1)`, `s2 = (1 2)` for
    /// `A_2`; `s_short = (0 1)(2 3)`, `s_long = (1 2)` for `C_2`.
    pub fn simple_reflections(self) -> Vec<(&'static str, Perm)> {
        match self {
            WeylType::A2 => vec![
                ("s1", Perm::from_cycles(3, &[&[1, 2]]).unwrap()),
                ("s2", Perm::from_cycles(3, &[&[2, 3]]).unwrap()),
            ],
            WeylType::C2 => vec![
                ("s_short", Perm::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap()),
                ("s_long", Perm::from_cycles(4, &[&[2, 3]]).unwrap()),
            ],
        }
    }

    fn degree(self) -> usize {
        match self {
            WeylType::A2 => 3,
            WeylType::C2 => 4,
        }
    }

    pub fn group(self) -> PermGroup {
        let gens: Vec<Perm> = self.simple_reflections().into_iter().map(|(_, p)| p).collect();
        PermGroup::generate(self.degree(), &gens)
    }

    fn subgroup(self, names: &[&str]) -> Result<PermGroup, SatakeError> {
        let refl = self.simple_reflections();
        let mut gens = Vec::new();
        for n in names {
            let (_, p) = refl
                .iter()
                .find(|(m, _)| m == n)
                .ok_or_else(|| SatakeError::BadParams(format!("{n} is not a simple reflection of {self:?}")))?;
            gens.push(*p);
        }
        Ok(PermGroup::generate(self.degree(), &gens))
    }
}

/// `|W_L \ W / W_R|` by enumeration.
pub fn weyl_double_cosets(ty: WeylType, left: &[&str], right: &[&str]) -> Result<usize, SatakeError> {
    let (wl, wr) = (ty.subgroup(left)?, ty.subgroup(right)?);
    let keys: HashSet<Perm> = ty
        .group()
        .elements()
        .iter()
        .map(|w| {
            wl.elements()
                .iter()
                .flat_map(|l| wr.elements().iter().map(move |r| l.compose(w).compose(r)))
                .min()
                .expect("subgroups are nonempty")
        })
        .collect();
    Ok(keys.len())
}

/// Word lengths in the simple reflections.
fn lengths(ty: WeylType) -> Vec<(Perm, u32)> {
    let refl = ty.simple_reflections();
    let mut out = vec![(Perm::identity(ty.degree()), 0u32)];
    let mut i = 0;
    while i < out.len() {
        let (w, l) = out[i];
        for (_, s) in &refl {
            let next = w.compose(s);
            if !out.iter().any(|(p, _)| *p == next) {
                out.push((next, l + 1));
            }
        }
        i += 1;
    }
    out
}

/// `sum q^len(w)` over minimal-length representatives of `W / W_R`: the
/// number of points of the partial flag variety over `F_q`.
pub fn bruhat_index(ty: WeylType, right: &[&str], q: u64) -> Result<BigInt, SatakeError> {
    let wr = ty.subgroup(right)?;
    let mut best: std::collections::HashMap<Perm, u32> = std::collections::HashMap::new();
    for (w, l) in lengths(ty) {
        let key = wr.elements().iter().map(|r| w.compose(r)).min().unwrap();
        let e = best.entry(key).or_insert(l);
        *e = (*e).min(l);
    }
    Ok(best.values().map(|&l| BigInt::from(q).pow(l)).sum())
}

/// One classified type with its profile, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEntry {
    #[serde(flatten)]
    pub rep: RepType,
    pub dims: Vec<u32>,
}

impl TypeEntry {
    pub fn new(rep: RepType) -> Self {
        let dims = profile(rep.group, &rep.label).expect("classified types come from the tables").dims;
        TypeEntry { rep, dims }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;
    use num_rational::BigRational;

    fn labels(v: &[RepType]) -> Vec<&str> {
        v.iter().map(|r| r.label.as_str()).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gl3_examples() {
        let f = Rationals;
        assert_eq!(labels(&classify_gl3(&f, 5, &[rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap()), ["I"]);
        assert_eq!(labels(&classify_gl3(&f, 5, &[rat(10, 1), rat(2, 1), rat(7, 1)]).unwrap()), ["IIa", "IIb"]);
        assert_eq!(
            labels(&classify_gl3(&f, 5, &[rat(7, 5), rat(7, 1), rat(35, 1)]).unwrap()),
            ["IIIa", "IIIb", "IIIc", "IIId"]
        );
    }

    #[test]
    fn gsp4_examples() {
        let f = Rationals;
        let q = 3;
        let iv = classify_gsp4(&f, q, &[rat(1, 9), rat(1, 3), rat(1, 1)]).unwrap();
        assert_eq!(labels(&iv), ["IVa", "IVb", "IVc", "IVd"]);
        let v = classify_gsp4(&f, q, &[rat(-1, 3), rat(-1, 1), rat(2, 1)]).unwrap();
        assert_eq!(labels(&v), ["Va", "Vb", "Vc", "Vd"]);
        assert_eq!(labels(&classify_gsp4(&f, q, &[rat(2, 1), rat(5, 1), rat(1, 1)]).unwrap()), ["I"]);
    }

    #[test]
    fn orbit_has_eight_elements_generically() {
        let f = Rationals;
        assert_eq!(gsp4_orbit(&f, &[rat(2, 1), rat(5, 1), rat(7, 1)]).len(), 8);
    }

    #[test]
    fn weyl_and_bruhat() {
        assert_eq!(weyl_double_cosets(WeylType::A2, &[], &[]).unwrap(), 6);
        assert_eq!(weyl_double_cosets(WeylType::A2, &[], &["s1"]).unwrap(), 3);
        assert_eq!(weyl_double_cosets(WeylType::C2, &[], &["s_short"]).unwrap(), 4);
        assert_eq!(bruhat_index(WeylType::C2, &["s_short"], 2).unwrap(), BigInt::from(15));
        assert_eq!(bruhat_index(WeylType::A2, &["s1"], 2).unwrap(), BigInt::from(7));
    }

    #[test]
    fn endgames() {
        assert_eq!(allowed_types(Group::Gl3, 2, None).unwrap(), ["I", "IIa"]);
        assert_eq!(allowed_types(Group::Gsp4, 2, None).unwrap(), ["I", "IIa", "IIIa", "Va", "VIa"]);
        assert_eq!(allowed_types(Group::Gsp4, 3, Some(7)).unwrap(), ["I", "IIa", "IIIa"]);
    }

    #[test]
    fn exclusion_examples() {
        let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(exclusions(3, 7).unwrap(), set(&["Va", "VIa"]));
        assert_eq!(exclusions(2, 3).unwrap(), set(&[]));
        assert_eq!(exclusions(4, 5).unwrap(), set(&[]));
        for (q, l) in [(3, 7), (2, 3), (2, 5), (5, 13)] {
            assert_eq!(exclusions(q, l).unwrap(), exclusions_brute_force(q, l).unwrap(), "q={q} ell={l}");
        }
    }

    #[test]
    fn conditions() {
        let ff = residue_field(5).unwrap();
        let e = |n: i64| ff.from_i64(n);
        assert!(check_u3_condition(&ff, &[e(2), e(1), e(3)], 2).unwrap().holds);
        let ff7 = residue_field(7).unwrap();
        assert!(!check_u3_condition(&ff7, &[ff7.from_i64(2), ff7.one(), ff7.from_i64(4)], 2).unwrap().holds);
        let g = check_gsp4_condition(&ff, &[e(1), e(2), e(4), e(3)], 2).unwrap();
        assert!(g.holds && g.refinement == Some(false));
        let g = check_gsp4_condition(&ff7, &[1, 3, 2, 6].map(|n| ff7.from_i64(n)), 3).unwrap();
        assert!(g.holds && g.refinement == Some(true));
    }

    #[test]
    fn complementary_series() {
        assert_eq!(gl3_type_i_unitary(5, &[rat(1, 1), rat(-1, 1), rat(1, 1)]), Unitarity::Unitary);
        // nu^(1/4) x nu^(-1/4) x 1 at q = 16
        assert_eq!(gl3_type_i_unitary(16, &[rat(1, 2), rat(2, 1), rat(1, 1)]), Unitarity::Unitary);
        // exponent 1/2 is the reducibility point, not the open interval
        assert_eq!(gl3_type_i_unitary(4, &[rat(1, 2), rat(2, 1), rat(1, 1)]), Unitarity::NotUnitary);
        // the central character must be unitary
        assert_eq!(gl3_type_i_unitary(4, &[rat(1, 2), rat(1, 1), rat(1, 1)]), Unitarity::NotUnitary);
        assert_eq!(gl3_type_i_unitary(16, &[rat(4, 1), rat(8, 1), rat(1, 1)]), Unitarity::NotUnitary);
        assert_eq!(gl3_type_i_unitary(5, &[rat(1, 5), rat(1, 1), rat(1, 1)]), Unitarity::NotUnitary);
    }
}
