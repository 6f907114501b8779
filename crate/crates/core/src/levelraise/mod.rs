//! Degeneracy maps, old and new lattices, congruence modules and the
//! level-raising detector.
//!
//! `delta = [iota | iota']` sends a pair of functions `(f, g)` on `X_K` and
//! `X_K'` to `y -> f(pi y) + g(pip y)` on `X_J`. Its image spans the old
//! space; the orthogonal complement under the `J`-pairing is the new space.
//! A `K`-level eigensystem `eta` with
//! `m = eta(e_{K,K'}) - [K:J][K':J]` divisible by `ell` should be congruent
//! to an eigensystem of the central `J`-level operators on the new space.

mod certificate;

pub use certificate::{CertificateStatus, CongruenceCertificate, ErrorTerms, RankOneOutcome};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cosetmodel::document::model_hash;
use crate::cosetmodel::{Level, Side, ValidatedModel};
use crate::eigensys::{hecke_ring, EigenError, IntCharacter, ModCharacter};
use crate::exactalg::{
    int_kernel, is_prime_u64, joint_eigenspace, linalg, quotient_invariants, reduce_matrix, spectra_finite,
    spectra_rational, valuation, ExactError, Field, FqElem, IntMatrix, Lattice, Mat, QCharacter, RatMatrix,
    Rationals,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RaiseError {
    #[error("direct and block computations of delta^v delta differ at ({row}, {col})")]
    BlockMismatch { row: usize, col: usize },
    #[error("E must be nonzero")]
    ZeroE,
    #[error("delta does not map the rational span of U into that of V")]
    DeltaOutside,
    #[error("m = 0: the eigenform is invariant under both maximal levels and raising is vacuous")]
    MZero,
    #[error("ell = {ell} divides [K':J] = {index}; the level-raising theorem assumes it does not")]
    EllDividesIndex { ell: u64, index: BigInt },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no central-at-J operators are registered")]
    NoCentralOps,
    #[error("the character is class-abelian modulo ell (congruent to a class-constant eigensystem)")]
    AbelianInput,
    #[error("the model is not declared rank-one")]
    NotRankOne,
    #[error("character {0:?} is not available")]
    UnknownCharacter(String),
    #[error("bad witness: {0}")]
    BadWitness(String),
    #[error("e_(K,K') has a non-integral eigenvalue {0} on the witness")]
    NonIntegral(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// `delta`, its adjoint, `delta^v delta`, and the old and new lattices in
/// `Z^{X_J}`.
#[derive(Clone, Debug)]
pub struct DegeneracyData {
    pub delta: IntMatrix,
    pub delta_adjoint: RatMatrix,
    pub delta_gram: RatMatrix,
    pub old_lattice: Lattice,
    pub new_lattice: Lattice,
}

/// Block form `[[ [K:J], b ], [ c, [K':J] ]]` with the off-diagonal
/// blocks routed through the averaging projectors:
/// `b = iota^v e_K e_K' iota'`, `c = iota'^v e_K' e_K iota`.
pub fn block_formula(model: &ValidatedModel) -> RatMatrix {
    let (nk, nkp) = (model.size(Level::K), model.size(Level::Kp));
    let ek = model.averaging_projector(Side::K);
    let ekp = model.averaging_projector(Side::Kp);
    let b = &(&(&model.pushforward(Side::K) * &ek) * &ekp) * &model.pullback(Side::Kp).to_rational();
    let c = &(&(&model.pushforward(Side::Kp) * &ekp) * &ek) * &model.pullback(Side::K).to_rational();
    let a = BigRational::from_integer(model.index(Side::K).clone());
    let ap = BigRational::from_integer(model.index(Side::Kp).clone());
    Mat::from_fn(nk + nkp, nk + nkp, |i, j| match (i < nk, j < nk) {
        (true, true) => if i == j { a.clone() } else { BigRational::zero() },
        (true, false) => b.get(i, j - nk).clone(),
        (false, true) => c.get(i - nk, j).clone(),
        (false, false) => if i == j { ap.clone() } else { BigRational::zero() },
    })
}

pub fn build_degeneracy(model: &ValidatedModel) -> Result<DegeneracyData, RaiseError> {
    let delta = model.pullback(Side::K).hstack(&model.pullback(Side::Kp));
    let delta_adjoint = model.pushforward(Side::K).vstack(&model.pushforward(Side::Kp));
    let delta_gram = &delta_adjoint * &delta.to_rational();
    let block = block_formula(model);
    if let Some((row, col)) = (0..block.nrows())
        .flat_map(|i| (0..block.ncols()).map(move |j| (i, j)))
        .find(|&(i, j)| block.get(i, j) != delta_gram.get(i, j))
    {
        return Err(RaiseError::BlockMismatch { row, col });
    }
    let old_lattice = Lattice::from_columns(&delta).saturate();
    // new = {v : delta^T diag(1/w_J) v = 0}, scaled to integers
    let l = model.weight_lcm(Level::J);
    let wj = model.weights(Level::J);
    let dt = delta.transpose();
    let scaled = Mat::from_fn(dt.nrows(), dt.ncols(), |i, y| dt.get(i, y) * (&l / &wj[y]));
    let new_lattice = int_kernel(&scaled);
    Ok(DegeneracyData { delta, delta_adjoint, delta_gram, old_lattice, new_lattice })
}

/// Invariant factors (those above 1) of
/// `(Z^{X_J} ∩ Q delta(...)) / delta(Z^{X_K} ⊕ Z^{X_K'})`.
pub fn ihara_defect(model: &ValidatedModel) -> Vec<BigInt> {
    let delta = model.pullback(Side::K).hstack(&model.pullback(Side::Kp));
    let image = Lattice::from_columns(&delta);
    quotient_invariants(&image, &image.saturate()).expect("image lies in its saturation").torsion
}

/// A lattice with a rational pairing on its ambient space.
#[derive(Clone, Debug)]
pub struct PairedLattice {
    pub lattice: Lattice,
    pub gram: RatMatrix,
}

impl PairedLattice {
    pub fn standard(gram: RatMatrix) -> Self {
        PairedLattice { lattice: Lattice::standard(gram.nrows()), gram }
    }

    fn coordinate_gram(&self) -> RatMatrix {
        let b = self.lattice.basis_matrix().to_rational();
        &(&b.transpose() * &self.gram) * &b
    }
}

fn to_integer_rows(m: &RatMatrix) -> IntMatrix {
    let d = m.common_denominator();
    m.scale(&BigRational::from_integer(d)).to_integer().expect("denominators cleared")
}

/// Invariant factors of `U' / (U' ∩ E^{-1} delta^v delta U)` with
/// `U' = U ∩ ker(delta)^perp`. `delta` maps the ambient space of `U` to
/// that of `V`.
pub fn congruence_module(
    u: &PairedLattice,
    v: &PairedLattice,
    delta: &IntMatrix,
    e: &BigInt,
) -> Result<Vec<BigInt>, RaiseError> {
    if e.is_zero() {
        return Err(RaiseError::ZeroE);
    }
    let bu = u.lattice.basis_matrix();
    let ru = u.lattice.rank();
    // delta in coordinates: delta B_U = B_V D
    let images = (delta * &bu).columns();
    let mut d_cols = Vec::with_capacity(ru);
    for im in &images {
        d_cols.push(v.lattice.rational_coordinates(im).ok_or(RaiseError::DeltaOutside)?);
    }
    let d = Mat::from_cols(&d_cols, v.lattice.rank());
    let gu = u.coordinate_gram();
    let gv = v.coordinate_gram();
    let gu_inv = linalg::inverse(&Rationals, &gu).expect("pairings are non-degenerate");
    let s = &(&(&gu_inv * &d.transpose()) * &gv) * &d;
    // U' in coordinates: x with k^T g_U x = 0 for every k in ker D
    let kernel = int_kernel(&to_integer_rows(&d));
    let u_prime = if kernel.rank() == 0 {
        Lattice::standard(ru)
    } else {
        let kmat = kernel.basis_matrix().to_rational();
        int_kernel(&to_integer_rows(&(&kmat.transpose() * &gu)))
    };
    let x = s.scale(&BigRational::new(BigInt::one(), e.clone()));
    let den = x.common_denominator();
    let xd = x.scale(&BigRational::from_integer(den.clone())).to_integer().expect("denominators cleared");
    let x_lattice = Lattice::from_columns(&xd);
    let a = u_prime.scale(&den);
    let q = quotient_invariants(&a.intersect(&x_lattice), &a).expect("intersection is a sublattice");
    let mut out = q.torsion;
    out.extend(std::iter::repeat_n(BigInt::zero(), q.free_rank));
    Ok(out)
}

/// The congruence module of a model: `U = Z^{X_K} ⊕ Z^{X_K'}`,
/// `V = Z^{X_J}`, with `E = A_U B_V C^2`.
pub fn model_congruence_module(model: &ValidatedModel, deg: &DegeneracyData) -> Result<Vec<BigInt>, RaiseError> {
    let (gk, gkp) = (model.gram_matrix(Level::K).gram, model.gram_matrix(Level::Kp).gram);
    let (nk, nkp) = (gk.nrows(), gkp.nrows());
    let gu = Mat::from_fn(nk + nkp, nk + nkp, |i, j| match (i < nk, j < nk) {
        (true, true) => gk.get(i, j).clone(),
        (false, false) => gkp.get(i - nk, j - nk).clone(),
        _ => BigRational::zero(),
    });
    let u = PairedLattice::standard(gu);
    let v = PairedLattice::standard(model.gram_matrix(Level::J).gram);
    let e = error_constant(model).e;
    congruence_module(&u, &v, &deg.delta, &e)
}

/// `A_U`, `B_V`, `C` and `E = A_U B_V C^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorConstant {
    pub a_u: BigInt,
    pub b_v: BigInt,
    pub c: BigInt,
    pub e: BigInt,
}

pub fn error_constant(model: &ValidatedModel) -> ErrorConstant {
    let a_u = model.annihilators(Level::K).a_min.lcm(&model.annihilators(Level::Kp).a_min);
    let b_v = model.annihilators(Level::J).b_min;
    let c = ihara_defect(model).last().cloned().unwrap_or_else(BigInt::one);
    let e = &a_u * &b_v * &c * &c;
    ErrorConstant { a_u, b_v, c, e }
}

/// `v(m) - v(E) - v(Ecal)`; may be negative.
pub fn valuation_bound(m: &BigInt, e: &BigInt, v_ecal: u32, ell: u64) -> Option<i64> {
    let vm = valuation(m, ell)?;
    let ve = valuation(e, ell)?;
    Some(vm as i64 - ve as i64 - v_ecal as i64)
}

/// The operators whose eigensystems are tracked at level `K`: registered
/// `K`-level operators, `e_K * phi` for each central `phi`, and
/// `e_{K,K'}` when it is integral.
pub fn k_family(model: &ValidatedModel) -> Result<Vec<(String, IntMatrix)>, RaiseError> {
    let mut family = model.operators_at(Level::K);
    for (name, phi) in model.central_operators() {
        family.push((star_name(&name), model.star_k(&phi)));
    }
    if let Some(e) = model.e_kkp().to_integer() {
        family.push(("e_KK'".into(), e));
    }
    if family.is_empty() {
        return Err(ExactError::NoOperators.into());
    }
    crate::exactalg::spectra::check_commuting(&family)?;
    Ok(family)
}

pub fn star_name(central: &str) -> String {
    format!("e_K*{central}")
}

/// How the `K`-level character is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterSelector {
    /// A character shipped with the model document.
    Named(String),
    /// Position among the integer-valued rational characters of the
    /// `K`-level family, in spectrum order.
    Index(usize),
}

impl CharacterSelector {
    pub fn parse(s: &str) -> Self {
        match s.strip_prefix('#').unwrap_or(s).parse::<usize>() {
            Ok(i) => CharacterSelector::Index(i),
            Err(_) => CharacterSelector::Named(s.to_string()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            CharacterSelector::Named(n) => n.clone(),
            CharacterSelector::Index(i) => format!("#{i}"),
        }
    }
}

/// Integer-valued rational characters of the `K`-level family with
/// integral witnesses, in spectrum order.
pub fn integer_characters(family: &[(String, IntMatrix)]) -> Result<Vec<IntCharacter>, RaiseError> {
    let spec = spectra_rational(family)?;
    let mut out = Vec::new();
    for c in &spec.characters {
        if let (Some(_), Some(w)) = (c.integer_values(), &c.witness) {
            out.push(IntCharacter::from_witness(family, w)?);
        }
    }
    Ok(out)
}

fn is_primitive(v: &[BigInt]) -> bool {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).is_one()
}

pub fn select_character(
    model: &ValidatedModel,
    family: &[(String, IntMatrix)],
    sel: &CharacterSelector,
) -> Result<IntCharacter, RaiseError> {
    match sel {
        CharacterSelector::Named(name) => {
            let c = model.characters().get(name).ok_or_else(|| RaiseError::UnknownCharacter(name.clone()))?;
            if !is_primitive(&c.witness) {
                return Err(RaiseError::BadWitness(format!("{name}: witness is not primitive")));
            }
            let ch = IntCharacter::from_witness(family, &c.witness)?;
            for (op, v) in &c.values {
                if ch.value(op) != Some(v) {
                    return Err(RaiseError::BadWitness(format!("{name}: declared value {v} on {op} disagrees")));
                }
            }
            Ok(ch)
        }
        CharacterSelector::Index(i) => integer_characters(family)?
            .into_iter()
            .nth(*i)
            .ok_or_else(|| RaiseError::UnknownCharacter(format!("#{i}"))),
    }
}

/// The bound half of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaisingBound {
    pub eta_e_kkp: BigInt,
    pub m: BigInt,
    pub error: ErrorConstant,
    /// `v(m)`, `v(E)`, `v([K':J])`, `v(Ecal~)`.
    pub v_m: u32,
    pub v_e: u32,
    pub v_index_kp: u32,
    pub v_e_tilde: u32,
    /// `v(m) - v(E) - v(Ecal)`, clamped at zero.
    pub n: i64,
    pub raw: i64,
}

/// `gcd` of the differences of `f` inside each class block of `X_K`.
fn class_difference_gcd(model: &ValidatedModel, f: &[BigInt]) -> BigInt {
    let blocks = model.class_partition().on_side(model, Side::K);
    let mut first: BTreeMap<usize, &BigInt> = BTreeMap::new();
    let mut g = BigInt::zero();
    for (x, &b) in blocks.iter().enumerate() {
        let base = *first.entry(b).or_insert(&f[x]);
        g = g.gcd(&(&f[x] - base));
    }
    g
}

pub fn raising_bound(model: &ValidatedModel, eta: &IntCharacter, ell: u64) -> Result<RaisingBound, RaiseError> {
    if !is_prime_u64(ell) {
        return Err(RaiseError::NotPrime(ell));
    }
    let index_kp = model.index(Side::Kp);
    let v_index_kp = valuation(index_kp, ell).expect("indices are positive");
    if v_index_kp > 0 {
        return Err(RaiseError::EllDividesIndex { ell, index: index_kp.clone() });
    }
    let w = &eta.witness;
    if w.len() != model.size(Level::K) || !is_primitive(w) {
        return Err(RaiseError::BadWitness("witness must be a primitive vector on X_K".into()));
    }
    let e = model.e_kkp();
    let wq: Vec<BigRational> = w.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let image = e.mul_vec(&wq);
    let pivot = w.iter().position(|x| !x.is_zero()).unwrap();
    let mu = &image[pivot] / &wq[pivot];
    if image.iter().zip(&wq).any(|(a, b)| a != &(&mu * b)) {
        return Err(RaiseError::BadWitness("witness is not an eigenvector of e_(K,K')".into()));
    }
    if !mu.is_integer() {
        return Err(RaiseError::NonIntegral(mu.to_string()));
    }
    let eta_e_kkp = mu.to_integer();
    let m = &eta_e_kkp - model.index(Side::K) * index_kp;
    if m.is_zero() {
        return Err(RaiseError::MZero);
    }
    let t = class_difference_gcd(model, w);
    if t.is_zero() {
        return Err(RaiseError::AbelianInput);
    }
    let error = error_constant(model);
    let v_m = valuation(&m, ell).unwrap();
    let v_e = valuation(&error.e, ell).unwrap();
    let v_e_tilde = valuation(&t, ell).unwrap();
    let raw = valuation_bound(&m, &error.e, v_index_kp + v_e_tilde, ell).unwrap();
    Ok(RaisingBound { eta_e_kkp, m, error, v_m, v_e, v_index_kp, v_e_tilde, n: raw.max(0), raw })
}

/// Indicator vectors of the class blocks on `X_K`, as columns.
fn class_indicators(model: &ValidatedModel) -> IntMatrix {
    let blocks = model.class_partition().on_side(model, Side::K);
    let nb = blocks.iter().max().map_or(0, |m| m + 1);
    Mat::from_fn(blocks.len(), nb, |x, b| if blocks[x] == b { BigInt::one() } else { BigInt::zero() })
}

fn family_matrices<'a>(family: &'a [(String, IntMatrix)], names: &[String]) -> Result<Vec<&'a IntMatrix>, RaiseError> {
    names
        .iter()
        .map(|n| {
            family
                .iter()
                .find(|(m, _)| m == n)
                .map(|(_, m)| m)
                .ok_or_else(|| RaiseError::UnknownCharacter(format!("operator {n} is not in the K-level family")))
        })
        .collect()
}

/// Whether `eta_bar` occurs on class-constant functions on `X_K`: its joint
/// generalized eigenspace meets their span modulo `ell`.
pub fn abelian_check(
    model: &ValidatedModel,
    family: &[(String, IntMatrix)],
    eta_bar: &ModCharacter,
) -> Result<bool, RaiseError> {
    let ff = &eta_bar.field;
    let mats: Vec<Mat<FqElem>> =
        family_matrices(family, &eta_bar.names)?.into_iter().map(|m| reduce_matrix(m, ff)).collect();
    let space = joint_eigenspace(ff, &mats, &eta_bar.values);
    if space.dim() == 0 {
        return Ok(false);
    }
    let classes = reduce_matrix(&class_indicators(model), ff);
    Ok(linalg::intersect_spans(ff, &space.basis, &classes).ncols() > 0)
}

/// Outcome of the search on the new subspace.
#[derive(Clone, Debug)]
pub struct Detection {
    pub found: bool,
    /// Rank of the new lattice.
    pub new_dimension: usize,
    /// Dimension of the congruent joint generalized eigenspace.
    pub multiplicity: usize,
    /// Target values `eta_bar(e_K * phi)` on the central operators, with a
    /// witness on `X_J` when found.
    pub character: ModCharacter,
    /// Every character of the central operators on the new space.
    pub diagnostics: Vec<String>,
}

fn restrict_to_lattice(m: &IntMatrix, l: &Lattice) -> IntMatrix {
    let b = l.basis_matrix().to_rational();
    linalg::restrict(&Rationals, &m.to_rational(), &b)
        .and_then(|r| r.to_integer())
        .expect("central operators preserve the saturated new lattice")
}

pub fn detect_new_congruence(
    model: &ValidatedModel,
    deg: &DegeneracyData,
    family: &[(String, IntMatrix)],
    eta_bar: &ModCharacter,
) -> Result<Detection, RaiseError> {
    let central = model.central_operators();
    if central.is_empty() {
        return Err(RaiseError::NoCentralOps);
    }
    if abelian_check(model, family, eta_bar)? {
        return Err(RaiseError::AbelianInput);
    }
    let ff = &eta_bar.field;
    let mut targets = Vec::new();
    for (name, phi) in &central {
        let t = match eta_bar.value(&star_name(name)) {
            Some(v) => v.clone(),
            None => eta_bar.evaluate(&model.star_k(phi)).ok_or_else(|| {
                RaiseError::BadWitness(format!("witness is not an eigenvector of e_K * {name}"))
            })?,
        };
        targets.push(t);
    }
    let names: Vec<String> = central.iter().map(|(n, _)| n.clone()).collect();
    let r = deg.new_lattice.rank();
    let mut character = ModCharacter { field: ff.clone(), names: names.clone(), values: targets, witness: None };
    if r == 0 {
        return Ok(Detection { found: false, new_dimension: 0, multiplicity: 0, character, diagnostics: Vec::new() });
    }
    let restricted: Vec<(String, IntMatrix)> =
        central.iter().map(|(n, m)| (n.clone(), restrict_to_lattice(m, &deg.new_lattice))).collect();
    let spectrum = spectra_finite(&restricted, ff.characteristic(), 1)?;
    let diagnostics: Vec<String> = spectrum.characters.iter().map(|c| spectrum.render_character(c)).collect();
    let mats: Vec<Mat<FqElem>> = restricted.iter().map(|(_, m)| reduce_matrix(m, ff)).collect();
    let space = joint_eigenspace(ff, &mats, &character.values);
    let multiplicity = space.dim();
    if let Some(w) = &space.witness {
        let basis = reduce_matrix(&deg.new_lattice.basis_matrix(), ff);
        let lifted = linalg::normalize_first(ff, &linalg::mat_vec(ff, &basis, w));
        for ((name, phi), t) in central.iter().zip(&character.values) {
            let image = linalg::mat_vec(ff, &reduce_matrix(phi, ff), &lifted);
            let expect: Vec<FqElem> = lifted.iter().map(|x| ff.mul(t, x)).collect();
            assert_eq!(image, expect, "witness fails on {name}");
        }
        character.witness = Some(lifted);
    }
    Ok(Detection { found: multiplicity > 0, new_dimension: r, multiplicity, character, diagnostics })
}

fn is_class_constant(blocks: &[usize], v: &[BigInt]) -> bool {
    let mut seen: BTreeMap<usize, &BigInt> = BTreeMap::new();
    v.iter().zip(blocks).all(|(x, b)| *seen.entry(*b).or_insert(x) == x)
}

/// Rational characters on `side` of the operators `e_side * phi`, keeping
/// only components not spanned by class-constant functions.
fn nonabelian_side_characters(model: &ValidatedModel, side: Side) -> Result<Vec<QCharacter>, RaiseError> {
    let family: Vec<(String, IntMatrix)> =
        model.central_operators().into_iter().map(|(n, m)| (n, model.star(side, &m))).collect();
    let blocks = model.class_partition().on_side(model, side);
    let spec = spectra_rational(&family)?;
    Ok(spec
        .characters
        .into_iter()
        .filter(|c| !c.component.basis().iter().all(|v| is_class_constant(&blocks, v)))
        .collect())
}

/// Decide, for a rank-one model, whether the new character found by
/// detection can also be seen at the maximal levels.
///
/// Characteristic-zero lifts of `eta_prime` on the new lattice are compared
/// with the non-abelian rational eigensystems of `e_K * phi` on `X_K` and
/// `e_K' * phi` on `X_K'`.
pub fn rank_one_refine(
    model: &ValidatedModel,
    deg: &DegeneracyData,
    eta_prime: &ModCharacter,
) -> Result<RankOneOutcome, RaiseError> {
    if !model.metadata().rank_one {
        return Err(RaiseError::NotRankOne);
    }
    let central = model.central_operators();
    if central.is_empty() {
        return Err(RaiseError::NoCentralOps);
    }
    if deg.new_lattice.rank() == 0 {
        return Ok(RankOneOutcome::Inconclusive { reason: "the new lattice is zero".into() });
    }
    let restricted: Vec<(String, IntMatrix)> =
        central.iter().map(|(n, m)| (n.clone(), restrict_to_lattice(m, &deg.new_lattice))).collect();
    let lifts = hecke_ring(&restricted)?.lift_character(eta_prime)?;
    let at_k = nonabelian_side_characters(model, Side::K)?;
    let at_kp = nonabelian_side_characters(model, Side::Kp)?;
    let occurs = |side: &[QCharacter]| lifts.iter().any(|l| side.iter().any(|c| c.values == l.values));
    let (in_k, in_kp) = (occurs(&at_k), occurs(&at_kp));
    let ell = BigInt::from(eta_prime.ell());
    let ab = model.index(Side::K) * model.index(Side::Kp);
    if in_k && in_kp && !(&ab % &ell).is_zero() {
        return Ok(RankOneOutcome::ContradictionPath);
    }
    if !in_k {
        return Ok(RankOneOutcome::Ramified);
    }
    Ok(RankOneOutcome::Inconclusive {
        reason: if in_kp {
            format!("ell divides [K:J][K':J] = {ab}")
        } else {
            "the lift occurs at K but not at K'".into()
        },
    })
}

pub const SURROGATE_WARNING: &str =
    "abelianity tested against the class-partition surrogate: inputs are checked to be class-abelian, not abelian";

/// The whole pipeline: select `eta`, check it is not class-abelian,
/// bound the raising exponent, search the new space and optionally refine
/// for rank-one models.
pub fn raise(
    model: &ValidatedModel,
    ell: u64,
    selector: &CharacterSelector,
    rank_one: bool,
) -> Result<CongruenceCertificate, RaiseError> {
    if !is_prime_u64(ell) {
        return Err(RaiseError::NotPrime(ell));
    }
    // a failed hypothesis is reported before anything about the character
    let index_kp = model.index(Side::Kp);
    if valuation(index_kp, ell).is_some_and(|v| v > 0) {
        return Err(RaiseError::EllDividesIndex { ell, index: index_kp.clone() });
    }
    let family = k_family(model)?;
    let eta = select_character(model, &family, selector)?;
    let eta_bar = eta.reduce(ell)?;
    if abelian_check(model, &family, &eta_bar)? {
        return Err(RaiseError::AbelianInput);
    }
    let bound = raising_bound(model, &eta, ell)?;
    let deg = build_degeneracy(model)?;
    let detection = detect_new_congruence(model, &deg, &family, &eta_bar)?;
    let rank_one_outcome = if rank_one && detection.found {
        Some(rank_one_refine(model, &deg, &detection.character)?)
    } else if rank_one {
        Some(RankOneOutcome::Inconclusive { reason: "no congruent new character was found".into() })
    } else {
        None
    };
    Ok(CongruenceCertificate::assemble(
        model_hash(model),
        ell,
        selector.label(),
        &eta,
        model,
        &bound,
        &detection,
        rank_one_outcome,
        vec![SURROGATE_WARNING.to_string()],
    ))
}

/// Field elements of `F_ell` as residues.
pub fn residues(ff: &crate::exactalg::FiniteField, v: &[FqElem]) -> Vec<u64> {
    v.iter().map(|x| ff.as_prime(x).expect("prime-field value")).collect()
}

#[doc(hidden)]
pub fn signed_valuation(x: &BigInt, ell: u64) -> Option<u32> {
    valuation(&x.abs(), ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosetmodel::toy::{flag_model, group_model, ribet_model, tiny_model};

    fn validated(m: crate::cosetmodel::DoubleCosetModel) -> ValidatedModel {
        ValidatedModel::new(m).expect("valid")
    }

    #[test]
    fn ribet_raises_at_five() {
        let m = validated(ribet_model(7, 5).unwrap());
        let deg = build_degeneracy(&m).unwrap();
        assert_eq!(deg.old_lattice.rank() + deg.new_lattice.rank(), m.size(Level::J));
        assert!(ihara_defect(&m).is_empty());
        let cert = raise(&m, 5, &CharacterSelector::Named("f".into()), true).unwrap();
        assert_eq!(cert.m, BigInt::from(-60));
        assert_eq!(cert.status, CertificateStatus::Found);
        let back = CongruenceCertificate::from_json(&cert.to_json_pretty()).unwrap();
        assert_eq!(back, cert);
        let report = crate::oracle::check_certificate(&m, &cert);
        assert!(report.passed(), "{:?}", report.failures());
    }

    #[test]
    fn flag_s5_new_character_mod_three() {
        let m = validated(group_model(&flag_model(5)).unwrap());
        let family = k_family(&m).unwrap();
        let chars = integer_characters(&family).unwrap();
        let idx = chars
            .iter()
            .position(|c| c.value("e_KK'") == Some(&BigInt::from(1)))
            .expect("a character with m divisible by 3");
        let cert = raise(&m, 3, &CharacterSelector::Index(idx), false).unwrap();
        assert_eq!(cert.status, CertificateStatus::Found, "{cert:#?}");
        assert_eq!(cert.m, BigInt::from(-15));
        assert_eq!(cert.n, 1);
        let report = crate::oracle::check_certificate(&m, &cert);
        assert!(report.passed(), "{:?}", report.failures());
    }

    #[test]
    fn block_formula_agrees_on_tiny() {
        let m = validated(tiny_model());
        let deg = build_degeneracy(&m).unwrap();
        assert_eq!(block_formula(&m), deg.delta_gram);
    }

    #[test]
    fn congruence_module_of_scalar_map() {
        let one = RatMatrix::identity(1);
        let u = PairedLattice::standard(one.clone());
        let v = PairedLattice::standard(one);
        let d = IntMatrix::from_i64_rows(&[vec![6]]);
        assert_eq!(congruence_module(&u, &v, &d, &BigInt::one()).unwrap(), vec![BigInt::from(36)]);
        assert_eq!(congruence_module(&u, &v, &d, &BigInt::from(4)).unwrap(), vec![BigInt::from(9)]);
        assert_eq!(congruence_module(&u, &v, &d, &BigInt::zero()), Err(RaiseError::ZeroE));
    }

    #[test]
    fn valuation_bound_clamps() {
        assert_eq!(valuation_bound(&BigInt::from(-27), &BigInt::from(3), 0, 3), Some(2));
        assert_eq!(valuation_bound(&BigInt::from(2), &BigInt::from(9), 1, 3), Some(-3));
    }
}
