//! Simultaneous spectra of commuting integer matrices over the rationals and
//! over finite fields.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{FiniteField, FqElem, Field, Rationals};
use super::intpoly::{self, IntPoly};
use super::lattice::{int_kernel, Lattice};
use super::linalg;
use super::matrix::{IntMatrix, Mat};
use super::poly;
use super::ExactError;

/// Where eigenvalues are computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseField {
    Rationals,
    /// `F_{ell^k}`; values may live in a finite extension of it.
    Finite { ell: u64, k: usize },
}

/// One Galois orbit of characters over a finite field, given by its
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FfCharacter {
    /// Values on the operators, aligned with [`FfSpectrum::names`].
    pub values: Vec<FqElem>,
    /// Dimension of the joint generalized eigenspace of one character.
    pub multiplicity: usize,
    /// Number of conjugates under `x -> x^(ell^k)`.
    pub orbit_size: usize,
    /// A simultaneous eigenvector; its first nonzero entry is 1.
    pub witness: Vec<FqElem>,
}

#[derive(Clone, Debug)]
pub struct FfSpectrum {
    pub names: Vec<String>,
    /// The common field holding every eigenvalue.
    pub field: FiniteField,
    pub base_degree: usize,
    pub characters: Vec<FfCharacter>,
}

impl FfSpectrum {
    /// Sum of multiplicities over all conjugates.
    pub fn total_dimension(&self) -> usize {
        self.characters.iter().map(|c| c.multiplicity * c.orbit_size).sum()
    }

    /// Every character, conjugates included.
    pub fn all_characters(&self) -> Vec<Vec<FqElem>> {
        let mut out = Vec::new();
        for c in &self.characters {
            let mut cur = c.values.clone();
            for _ in 0..c.orbit_size {
                out.push(cur.clone());
                cur = cur.iter().map(|x| self.field.frobenius(x, self.base_degree)).collect();
            }
        }
        out
    }

    pub fn render_character(&self, c: &FfCharacter) -> String {
        let parts: Vec<String> =
            self.names.iter().zip(&c.values).map(|(n, v)| format!("{n}={}", self.field.render(v))).collect();
        format!("{{{}}} x{} (orbit {})", parts.join(", "), c.multiplicity, c.orbit_size)
    }
}

/// An eigenvalue over the rationals: rational, or a root of an irreducible
/// integer polynomial of degree at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QValue {
    Rational(BigRational),
    Algebraic(IntPoly),
}

impl QValue {
    pub fn render(&self) -> String {
        match self {
            QValue::Rational(r) => r.to_string(),
            QValue::Algebraic(p) => format!("root of {}", intpoly::render(p)),
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            QValue::Rational(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    fn sort_key(&self, other: &Self) -> Ordering {
        match (self, other) {
            (QValue::Rational(a), QValue::Rational(b)) => a.cmp(b),
            (QValue::Rational(_), QValue::Algebraic(_)) => Ordering::Less,
            (QValue::Algebraic(_), QValue::Rational(_)) => Ordering::Greater,
            (QValue::Algebraic(a), QValue::Algebraic(b)) => {
                a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
            }
        }
    }
}

/// A primary component of the joint action over the rationals.
///
/// When every value is rational the component is a joint generalized
/// eigenspace and `witness` holds a primitive integral eigenvector.
/// Otherwise the component is a sum of conjugate eigenspaces, described by
/// minimal polynomials only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCharacter {
    pub values: Vec<QValue>,
    /// Dimension of the component over the rationals.
    pub multiplicity: usize,
    pub witness: Option<Vec<BigInt>>,
    pub component: Lattice,
}

impl QCharacter {
    pub fn is_rational(&self) -> bool {
        self.values.iter().all(|v| matches!(v, QValue::Rational(_)))
    }

    /// Integer values (eigenvalues of integer matrices are integral).
    pub fn integer_values(&self) -> Option<Vec<BigInt>> {
        self.values.iter().map(|v| v.as_integer()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct QSpectrum {
    pub names: Vec<String>,
    pub characters: Vec<QCharacter>,
}

impl QSpectrum {
    pub fn rational(&self) -> impl Iterator<Item = &QCharacter> {
        self.characters.iter().filter(|c| c.is_rational())
    }

    pub fn total_dimension(&self) -> usize {
        self.characters.iter().map(|c| c.multiplicity).sum()
    }
}

#[derive(Clone, Debug)]
pub enum Spectrum {
    Rational(QSpectrum),
    Finite(FfSpectrum),
}

fn check_shapes(ops: &[(String, IntMatrix)]) -> Result<usize, ExactError> {
    let Some((_, first)) = ops.first() else {
        return Err(ExactError::NoOperators);
    };
    let n = first.nrows();
    for (name, m) in ops {
        if m.nrows() != n || m.ncols() != n {
            return Err(ExactError::DimensionMismatch(format!("operator {name} is not {n}x{n}")));
        }
    }
    Ok(n)
}

/// Fails with the first non-commuting pair.
pub fn check_commuting(ops: &[(String, IntMatrix)]) -> Result<(), ExactError> {
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !ops[i].1.commutes_with(&ops[j].1) {
                return Err(ExactError::NonCommuting(ops[i].0.clone(), ops[j].0.clone()));
            }
        }
    }
    Ok(())
}

pub fn reduce_matrix(m: &IntMatrix, ff: &FiniteField) -> Mat<FqElem> {
    m.map(|x| ff.from_bigint_mod(x))
}

pub fn simultaneous_spectra(ops: &[(String, IntMatrix)], field: &BaseField) -> Result<Spectrum, ExactError> {
    match field {
        BaseField::Rationals => spectra_rational(ops).map(Spectrum::Rational),
        BaseField::Finite { ell, k } => spectra_finite(ops, *ell, *k).map(Spectrum::Finite),
    }
}

/// Joint generalized eigenspace of commuting matrices for prescribed values,
/// with a simultaneous eigenvector when it is nonzero.
#[derive(Clone, Debug)]
pub struct JointEigenspace {
    /// Basis as columns.
    pub basis: Mat<FqElem>,
    pub witness: Option<Vec<FqElem>>,
}

impl JointEigenspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

pub fn joint_eigenspace(ff: &FiniteField, ops: &[Mat<FqElem>], values: &[FqElem]) -> JointEigenspace {
    assert_eq!(ops.len(), values.len());
    let n = ops.first().map_or(0, |m| m.nrows());
    let mut basis = linalg::identity(ff, n);
    let mut restricted: Vec<Mat<FqElem>> = ops.to_vec();
    for i in 0..ops.len() {
        let d = basis.ncols();
        if d == 0 {
            break;
        }
        let shifted = linalg::shift(ff, &restricted[i], &values[i]);
        let k = linalg::kernel_matrix(ff, &linalg::mat_pow(ff, &shifted, d as u64));
        if k.ncols() == d {
            continue;
        }
        restricted = restricted.iter().map(|r| linalg::restrict(ff, r, &k).expect("invariant subspace")).collect();
        basis = linalg::mat_mul(ff, &basis, &k);
    }
    let witness = if basis.ncols() == 0 {
        None
    } else {
        let mats: Vec<Mat<FqElem>> =
            restricted.iter().zip(values).map(|(r, v)| linalg::shift(ff, r, v)).collect();
        let ker = linalg::common_kernel(ff, &mats, basis.ncols());
        ker.first().map(|w| linalg::normalize_first(ff, &linalg::mat_vec(ff, &basis, w)))
    };
    JointEigenspace { basis, witness }
}

/// Simultaneous spectra over `F_{ell^k}`: the eigenvalues are computed in the
/// smallest extension `F_{ell^D}` (with `k | D`) containing them all, and
/// characters are grouped into orbits under `x -> x^(ell^k)`.
pub fn spectra_finite(ops: &[(String, IntMatrix)], ell: u64, k: usize) -> Result<FfSpectrum, ExactError> {
    let n = check_shapes(ops)?;
    check_commuting(ops)?;
    let fp = FiniteField::prime(ell)?;
    let mut big_d = k;
    let mut charpolys = Vec::new();
    for (_, m) in ops {
        let cp = linalg::charpoly(&fp, &reduce_matrix(m, &fp));
        for (g, _) in poly::factor_ff(&fp, &cp) {
            big_d = big_d.lcm(&poly::degree(&g).unwrap());
        }
        charpolys.push(cp);
    }
    let field = FiniteField::new(ell, big_d)?;
    let mats: Vec<Mat<FqElem>> = ops.iter().map(|(_, m)| reduce_matrix(m, &field)).collect();
    let roots: Vec<Vec<FqElem>> = charpolys
        .iter()
        .map(|cp| {
            let lifted: Vec<FqElem> = cp.iter().map(|c| field.embed_prime(&fp, c)).collect();
            poly::roots_ff(&field, &lifted)
        })
        .collect();
    let mut leaves: Vec<(Vec<FqElem>, usize, Vec<FqElem>)> = Vec::new();
    if n > 0 {
        split_finite(&field, linalg::identity(&field, n), mats, &roots, Vec::new(), &mut leaves);
    }
    // group into Frobenius orbits
    let key = |v: &[FqElem]| v.iter().map(|x| field.encode(x)).collect::<Vec<u128>>();
    let mut characters = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (values, mult, _) in &leaves {
        if seen.contains(&key(values)) {
            continue;
        }
        let mut orbit = vec![values.clone()];
        loop {
            let next: Vec<FqElem> = orbit.last().unwrap().iter().map(|x| field.frobenius(x, k)).collect();
            if next == orbit[0] {
                break;
            }
            orbit.push(next);
        }
        for o in &orbit {
            seen.insert(key(o));
        }
        let rep = orbit.iter().min_by_key(|o| key(o)).unwrap().clone();
        let witness = leaves.iter().find(|(v, _, _)| *v == rep).map(|(_, _, w)| w.clone()).expect("conjugate present");
        characters.push(FfCharacter { values: rep, multiplicity: *mult, orbit_size: orbit.len(), witness });
    }
    characters.sort_by_key(|c| key(&c.values));
    Ok(FfSpectrum { names: ops.iter().map(|(n, _)| n.clone()).collect(), field, base_degree: k, characters })
}

fn split_finite(
    ff: &FiniteField,
    basis: Mat<FqElem>,
    ops: Vec<Mat<FqElem>>,
    roots: &[Vec<FqElem>],
    assigned: Vec<FqElem>,
    out: &mut Vec<(Vec<FqElem>, usize, Vec<FqElem>)>,
) {
    let idx = assigned.len();
    let d = basis.ncols();
    if idx == ops.len() {
        let mats: Vec<Mat<FqElem>> = ops.iter().zip(&assigned).map(|(r, v)| linalg::shift(ff, r, v)).collect();
        let ker = linalg::common_kernel(ff, &mats, d);
        let w = linalg::normalize_first(ff, &linalg::mat_vec(ff, &basis, &ker[0]));
        out.push((assigned, d, w));
        return;
    }
    for lambda in &roots[idx] {
        let shifted = linalg::shift(ff, &ops[idx], lambda);
        let k = linalg::kernel_matrix(ff, &linalg::mat_pow(ff, &shifted, d as u64));
        if k.ncols() == 0 {
            continue;
        }
        let (new_basis, new_ops) = if k.ncols() == d {
            (basis.clone(), ops.clone())
        } else {
            let r: Vec<Mat<FqElem>> = ops.iter().map(|m| linalg::restrict(ff, m, &k).expect("invariant")).collect();
            (linalg::mat_mul(ff, &basis, &k), r)
        };
        let mut a = assigned.clone();
        a.push(lambda.clone());
        split_finite(ff, new_basis, new_ops, roots, a, out);
    }
}

#[derive(Clone)]
struct Piece {
    basis: IntMatrix,
    ops: Vec<IntMatrix>,
}

fn restrict_int(op: &IntMatrix, k: &IntMatrix) -> IntMatrix {
    linalg::restrict(&Rationals, &op.to_rational(), &k.to_rational())
        .and_then(|r| r.to_integer())
        .expect("saturated invariant sublattice gives an integral restriction")
}

/// Splits a piece by the primary decomposition of `t` (given in piece
/// coordinates). Returns the piece unchanged if `t` is primary.
fn split_by(piece: &Piece, t: &IntMatrix) -> Vec<(Piece, IntPoly)> {
    let cp = intpoly::charpoly(t);
    let (_, fs) = intpoly::factor(&cp);
    if fs.len() == 1 {
        return vec![(piece.clone(), fs[0].0.clone())];
    }
    let mut out = Vec::new();
    for (f, m) in fs {
        let fm = intpoly::eval_matrix(&f, t).pow(m as u64);
        let kl = int_kernel(&fm);
        let k = kl.basis_matrix();
        let ops = piece.ops.iter().map(|r| restrict_int(r, &k)).collect();
        out.push((Piece { basis: &piece.basis * &k, ops }, f));
    }
    out
}

fn refine(piece: Piece, out: &mut Vec<(Piece, Vec<IntPoly>)>) {
    let mut minpolys = Vec::new();
    for i in 0..piece.ops.len() {
        let parts = split_by(&piece, &piece.ops[i]);
        if parts.len() > 1 {
            for (p, _) in parts {
                refine(p, out);
            }
            return;
        }
        minpolys.push(parts.into_iter().next().unwrap().1);
    }
    if minpolys.iter().any(|f| f.len() > 2) && piece.ops.len() > 1 {
        // generic combinations separate conjugate characters that single
        // operators cannot tell apart
        for c in 1..=3i64 {
            let mut t = IntMatrix::zeros(piece.basis.ncols(), piece.basis.ncols());
            let mut w = BigInt::one();
            for r in &piece.ops {
                t = &t + &r.scale(&w);
                w *= c;
            }
            let parts = split_by(&piece, &t);
            if parts.len() > 1 {
                for (p, _) in parts {
                    refine(p, out);
                }
                return;
            }
        }
    }
    out.push((piece, minpolys));
}

/// Simultaneous spectra over the rationals.
pub fn spectra_rational(ops: &[(String, IntMatrix)]) -> Result<QSpectrum, ExactError> {
    let n = check_shapes(ops)?;
    check_commuting(ops)?;
    let names: Vec<String> = ops.iter().map(|(n, _)| n.clone()).collect();
    if n == 0 {
        return Ok(QSpectrum { names, characters: Vec::new() });
    }
    let start = Piece { basis: IntMatrix::identity(n), ops: ops.iter().map(|(_, m)| m.clone()).collect() };
    let mut pieces = Vec::new();
    refine(start, &mut pieces);
    let mut characters = Vec::new();
    for (piece, minpolys) in pieces {
        let dim = piece.basis.ncols();
        let component = Lattice::from_columns(&piece.basis);
        let values: Vec<QValue> = minpolys
            .iter()
            .map(|f| {
                if f.len() == 2 {
                    QValue::Rational(BigRational::new(-f[0].clone(), f[1].clone()))
                } else {
                    QValue::Algebraic(f.clone())
                }
            })
            .collect();
        let witness = if values.iter().all(|v| matches!(v, QValue::Rational(_))) {
            let mut stacked: Option<IntMatrix> = None;
            for (r, v) in piece.ops.iter().zip(&values) {
                let QValue::Rational(v) = v else { unreachable!() };
                let mut s = r.clone();
                for i in 0..dim {
                    let x = s.get(i, i) - v.to_integer();
                    s.set(i, i, x);
                }
                stacked = Some(match stacked {
                    None => s,
                    Some(acc) => acc.vstack(&s),
                });
            }
            let ker = int_kernel(&stacked.unwrap());
            ker.basis().first().map(|w| primitive(&piece.basis.mul_vec(w)))
        } else {
            None
        };
        characters.push(QCharacter { values, multiplicity: dim, witness, component });
    }
    characters.sort_by(|a, b| {
        for (x, y) in a.values.iter().zip(&b.values) {
            let o = x.sort_key(y);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    });
    Ok(QSpectrum { names, characters })
}

/// Divides out the content and makes the first nonzero entry positive.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let lead_neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x < &BigInt::zero());
    let g = if lead_neg { -g } else { g };
    v.iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(name: &str, rows: &[Vec<i64>]) -> (String, IntMatrix) {
        (name.to_string(), IntMatrix::from_i64_rows(rows))
    }

    #[test]
    fn diag_mod_three_collapses() {
        let s = spectra_finite(&[op("T", &[vec![1, 0], vec![0, 4]])], 3, 1).unwrap();
        assert_eq!(s.characters.len(), 1);
        assert_eq!(s.characters[0].multiplicity, 2);
        assert_eq!(s.field.encode(&s.characters[0].values[0]), 1);
    }

    #[test]
    fn conjugate_pair_over_f9() {
        let s = spectra_finite(&[op("T", &[vec![0, -1], vec![1, 0]])], 3, 1).unwrap();
        assert_eq!(s.field.degree(), 2);
        assert_eq!(s.characters.len(), 1);
        assert_eq!(s.characters[0].orbit_size, 2);
        assert_eq!(s.total_dimension(), 2);
        // over F_9 itself the two characters are separate orbits
        let s9 = spectra_finite(&[op("T", &[vec![0, -1], vec![1, 0]])], 3, 2).unwrap();
        assert_eq!(s9.characters.len(), 2);
    }

    #[test]
    fn rational_components() {
        let s = spectra_rational(&[op("T", &[vec![0, -1, 0], vec![1, 0, 0], vec![0, 0, 2]])]).unwrap();
        assert_eq!(s.characters.len(), 2);
        assert!(s.characters[0].is_rational());
        assert_eq!(s.characters[0].witness, Some(vec![BigInt::zero(), BigInt::zero(), BigInt::one()]));
        assert!(!s.characters[1].is_rational());
        assert_eq!(s.total_dimension(), 3);
    }

    #[test]
    fn non_commuting_is_rejected() {
        let r = spectra_rational(&[op("A", &[vec![1, 1], vec![0, 1]]), op("B", &[vec![1, 0], vec![1, 1]])]);
        assert!(matches!(r, Err(ExactError::NonCommuting(_, _))));
    }
}
