use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::Rationals;
use super::linalg;
use super::matrix::{IntMatrix, Mat};
use super::normal_form::{hermite, left_kernel, right_kernel, smith};
use super::ExactError;

/// A sublattice of `Z^n`, stored by its Hermite basis so that equal
/// lattices compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<BigInt>>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(n={}, rank={})", self.ambient, self.basis.len())
    }
}

/// Structure of a finitely generated quotient `sup / sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl QuotientInvariants {
    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Exponent of the torsion part (1 if trivial).
    pub fn exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }
}

impl Lattice {
    pub fn zero(n: usize) -> Self {
        Lattice { ambient: n, basis: Vec::new() }
    }

    pub fn standard(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Lattice { ambient: n, basis }
    }

    /// Lattice spanned by arbitrary integer vectors of length `n`.
    pub fn from_generators(n: usize, gens: &[Vec<BigInt>]) -> Self {
        if gens.is_empty() {
            return Lattice::zero(n);
        }
        for g in gens {
            assert_eq!(g.len(), n, "generator has wrong length");
        }
        let hf = hermite(&Mat::from_rows(gens.to_vec()));
        let basis = (0..hf.rank()).map(|i| hf.h.row(i).to_vec()).collect();
        Lattice { ambient: n, basis }
    }

    /// Lattice spanned by the columns of `m`.
    pub fn from_columns(m: &IntMatrix) -> Self {
        Lattice::from_generators(m.nrows(), &m.columns())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Hermite basis vectors.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `n x rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        Mat::from_cols(&self.basis, self.ambient)
    }

    /// Coordinates of `v` in the basis, if `v` lies in the rational span.
    pub fn rational_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        if self.basis.is_empty() {
            return if v.iter().all(|x| x.is_zero()) { Some(Vec::new()) } else { None };
        }
        let b = self.basis_matrix().to_rational();
        let rhs = Mat::from_cols(&[v.iter().map(|x| BigRational::from_integer(x.clone())).collect()], self.ambient);
        let x = linalg::solve(&Rationals, &b, &rhs)?;
        Some(x.column(0))
    }

    /// Integer coordinates of `v`, if `v` is in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.rational_coordinates(v)?;
        if c.iter().all(|x| x.is_integer()) {
            Some(c.into_iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Lattice::from_generators(self.ambient, &gens)
    }

    pub fn scale(&self, c: &BigInt) -> Lattice {
        let gens: Vec<Vec<BigInt>> = self.basis.iter().map(|v| v.iter().map(|x| x * c).collect()).collect();
        Lattice::from_generators(self.ambient, &gens)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let (r1, r2) = (self.rank(), other.rank());
        if r1 == 0 || r2 == 0 {
            return Lattice::zero(self.ambient);
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().map(|v| v.iter().map(|x| -x).collect()));
        let stacked = Mat::from_rows(rows);
        let b1 = Mat::from_rows(self.basis.clone());
        let gens: Vec<Vec<BigInt>> = left_kernel(&stacked)
            .into_iter()
            .map(|k| {
                let a = Mat::from_rows(vec![k[..r1].to_vec()]);
                (&a * &b1).row(0).to_vec()
            })
            .collect();
        Lattice::from_generators(self.ambient, &gens)
    }

    /// `(Q L) ∩ Z^n`.
    pub fn saturate(&self) -> Lattice {
        let n = self.ambient;
        if self.basis.is_empty() {
            return Lattice::zero(n);
        }
        if self.rank() == n {
            return Lattice::standard(n);
        }
        let b = Mat::from_rows(self.basis.clone());
        let annihilator = right_kernel(&b);
        let a = Mat::from_rows(annihilator);
        Lattice::from_generators(n, &right_kernel(&a))
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    /// Integer vectors `x` in this lattice's span with `m x = 0`.
    pub fn kernel_of(&self, m: &IntMatrix) -> Lattice {
        if self.basis.is_empty() {
            return self.clone();
        }
        let b = self.basis_matrix();
        let mb = m * &b;
        let coords = right_kernel(&mb);
        let gens: Vec<Vec<BigInt>> = coords.iter().map(|c| b.mul_vec(c)).collect();
        Lattice::from_generators(self.ambient, &gens)
    }
}

/// Integer kernel `{x in Z^n : m x = 0}` as a saturated lattice.
pub fn int_kernel(m: &IntMatrix) -> Lattice {
    Lattice::from_generators(m.ncols(), &right_kernel(m))
}

/// Invariants of `sup / sub`; fails unless `sub` is contained in `sup`.
pub fn quotient_invariants(sub: &Lattice, sup: &Lattice) -> Result<QuotientInvariants, ExactError> {
    if sub.ambient != sup.ambient {
        return Err(ExactError::DimensionMismatch(format!("ambient {} vs {}", sub.ambient, sup.ambient)));
    }
    let mut coords = Vec::with_capacity(sub.rank());
    for v in sub.basis() {
        coords.push(sup.coordinates(v).ok_or(ExactError::NotSublattice)?);
    }
    let free_rank = sup.rank() - sub.rank();
    if coords.is_empty() {
        return Ok(QuotientInvariants { free_rank, torsion: Vec::new() });
    }
    let c = Mat::from_rows(coords);
    let torsion = smith(&c).invariant_factors().into_iter().filter(|x| !x.is_one()).collect();
    Ok(QuotientInvariants { free_rank, torsion })
}

/// Lattice generated by rational vectors, returned together with the
/// common denominator `d` so that the result is `d` times the input.
pub fn scaled_rational_lattice(n: usize, gens: &[Vec<BigRational>], d: &BigInt) -> Lattice {
    let ints: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| {
                    let y = x * BigRational::from_integer(d.clone());
                    assert!(y.is_integer(), "denominator does not clear");
                    y.to_integer()
                })
                .collect()
        })
        .collect();
    Lattice::from_generators(n, &ints)
}

/// Least common multiple of the denominators of a collection of vectors.
pub fn common_denominator(gens: &[Vec<BigRational>]) -> BigInt {
    gens.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn saturation_and_index() {
        let l = Lattice::from_generators(3, &[v(&[2, 0, 0]), v(&[0, 3, 3])]);
        let s = l.saturate();
        assert_eq!(s, Lattice::from_generators(3, &[v(&[1, 0, 0]), v(&[0, 1, 1])]));
        let q = quotient_invariants(&l, &s).unwrap();
        assert_eq!(q.free_rank, 0);
        assert_eq!(q.torsion_order(), BigInt::from(6));
        let full = quotient_invariants(&l, &Lattice::standard(3)).unwrap();
        assert_eq!(full.free_rank, 1);
    }

    #[test]
    fn intersection() {
        let a = Lattice::from_generators(2, &[v(&[2, 0]), v(&[0, 1])]);
        let b = Lattice::from_generators(2, &[v(&[1, 0]), v(&[0, 3])]);
        let c = a.intersect(&b);
        assert_eq!(c, Lattice::from_generators(2, &[v(&[2, 0]), v(&[0, 3])]));
        assert!(matches!(quotient_invariants(&a, &b), Err(ExactError::NotSublattice)));
    }
}
