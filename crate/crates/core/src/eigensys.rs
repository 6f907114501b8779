//! Hecke rings generated by commuting integer matrices, their saturation and
//! reduction diagnostics, and eigencharacters in characteristic zero and
//! modulo a prime.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{
    intpoly, joint_eigenspace, linalg, quotient_invariants, reduce_matrix, simultaneous_spectra, spectra_rational,
    BaseField, ExactError, FfCharacter, FfSpectrum, Field, FieldDescriptor, FiniteField, FqElem, IntMatrix, Lattice,
    Mat, QValue, Rationals, Spectrum,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EigenError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("the rational Hecke algebra has nilpotents (trace form is degenerate)")]
    NotReduced,
    #[error("the character does not occur on the lattice")]
    NotOccurring,
    #[error("witness is not an eigenvector of {0}")]
    NotEigen(String),
    #[error("witness is zero or has the wrong length")]
    BadWitness,
    #[error("character names {0:?} do not match the generators")]
    NameMismatch(Vec<String>),
}

fn flatten(m: &IntMatrix) -> Vec<BigInt> {
    m.data().to_vec()
}

fn unflatten(v: &[BigInt], n: usize) -> IntMatrix {
    Mat::from_vec(n, n, v.to_vec())
}

/// The unital ring generated by commuting integer matrices.
#[derive(Clone, Debug)]
pub struct HeckeRing {
    pub generators: Vec<(String, IntMatrix)>,
    /// Size of the matrices.
    pub dim: usize,
    /// Basis of the generated ring as a lattice in `M_n(Z)`.
    pub z_basis: Vec<IntMatrix>,
    /// Basis of `Q T ∩ M_n(Z)`, the largest order acting on `Z^n`.
    pub saturation_basis: Vec<IntMatrix>,
    pub index: BigInt,
    /// Discriminant of the regular trace form of the saturation.
    pub trace_form_disc: BigInt,
    z_lattice: Lattice,
}

/// Coordinates of many vectors in the basis of a lattice (all assumed to
/// lie in its rational span).
fn coordinates_many(l: &Lattice, vecs: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    let b = l.basis_matrix().to_rational();
    let rhs = Mat::from_cols(
        &vecs.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect::<Vec<_>>(),
        l.ambient_dim(),
    );
    linalg::solve(&Rationals, &b, &rhs).expect("vectors lie in the span").columns()
}

/// Structure constants: `c[i][j][k]` with `b_i b_j = sum_k c[i][j][k] b_k`.
fn structure_constants(l: &Lattice, n: usize) -> Vec<Vec<Vec<BigRational>>> {
    let basis: Vec<IntMatrix> = l.basis().iter().map(|v| unflatten(v, n)).collect();
    basis
        .iter()
        .map(|a| {
            let prods: Vec<Vec<BigInt>> = basis.iter().map(|b| flatten(&(a * b))).collect();
            coordinates_many(l, &prods)
        })
        .collect()
}

pub fn hecke_ring(generators: &[(String, IntMatrix)]) -> Result<HeckeRing, EigenError> {
    let Some((_, first)) = generators.first() else {
        return Err(ExactError::NoOperators.into());
    };
    let n = first.nrows();
    for (name, g) in generators {
        if g.nrows() != n || g.ncols() != n {
            return Err(ExactError::DimensionMismatch(format!("generator {name} is not {n}x{n}")).into());
        }
    }
    crate::exactalg::spectra::check_commuting(generators)?;
    let mut gens = vec![flatten(&IntMatrix::identity(n))];
    gens.extend(generators.iter().map(|(_, g)| flatten(g)));
    let mut lattice = Lattice::from_generators(n * n, &gens);
    // breadth-first closure under multiplication by the generators
    loop {
        let mut next = lattice.basis().to_vec();
        for b in lattice.basis() {
            let bm = unflatten(b, n);
            for (_, g) in generators {
                next.push(flatten(&(g * &bm)));
            }
        }
        let grown = Lattice::from_generators(n * n, &next);
        if grown == lattice {
            break;
        }
        lattice = grown;
    }
    let sat = lattice.saturate();
    let index = quotient_invariants(&lattice, &sat).expect("lattice lies in its saturation").torsion_order();
    let c = structure_constants(&sat, n);
    let r = sat.rank();
    // regular trace of b_i b_j: sum over k of the coefficient of b_k in b_i b_j b_k
    let reg_trace = |coeffs: &[BigRational]| -> BigRational {
        (0..r).map(|k| (0..r).map(|m| &coeffs[m] * &c[m][k][k]).sum::<BigRational>()).sum()
    };
    let gram = Mat::from_fn(r, r, |i, j| reg_trace(&c[i][j]));
    let gram = gram.to_integer().expect("the saturation is an order, so traces are integers");
    let trace_form_disc = gram.det();
    let z_basis = lattice.basis().iter().map(|v| unflatten(v, n)).collect();
    let saturation_basis = sat.basis().iter().map(|v| unflatten(v, n)).collect();
    Ok(HeckeRing {
        generators: generators.to_vec(),
        dim: n,
        z_basis,
        saturation_basis,
        index,
        trace_form_disc,
        z_lattice: lattice,
    })
}

/// Prime divisors by trial division; a cofactor above `10^6` squared that
/// survives is returned as is.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= n && p <= limit {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

impl HeckeRing {
    pub fn rank(&self) -> usize {
        self.z_basis.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }

    /// `[T~ : T]` and the primes dividing it.
    pub fn saturation_index(&self) -> (BigInt, Vec<BigInt>) {
        (self.index.clone(), prime_divisors(&self.index))
    }

    /// One-sided certificate that `T ⊗ F_p` is semisimple: `p` divides
    /// neither the saturation index nor the trace-form discriminant.
    pub fn semisimple_mod_p(&self, p: u64) -> Result<bool, EigenError> {
        if self.trace_form_disc.is_zero() {
            return Err(EigenError::NotReduced);
        }
        let p = BigInt::from(p);
        Ok(!(&self.index % &p).is_zero() && !(&self.trace_form_disc % &p).is_zero())
    }

    /// Dimension of the nilradical of `T ⊗ F_p`, computed from the
    /// structure constants of `z_basis` as the kernel of a power of the
    /// Frobenius `x -> x^p`, together with one nilpotent element when it is
    /// nonzero (coordinates in `z_basis`).
    pub fn nilradical_mod_p(&self, p: u64) -> Result<(usize, Option<Vec<u64>>), EigenError> {
        let fp = FiniteField::prime(p)?;
        let r = self.rank();
        let c = structure_constants(&self.z_lattice, self.dim);
        let cf: Vec<Vec<Vec<FqElem>>> = c
            .iter()
            .map(|ci| {
                ci.iter()
                    .map(|cij| cij.iter().map(|x| fp.from_bigint_mod(&x.to_integer())).collect())
                    .collect()
            })
            .collect();
        let mul = |a: &[FqElem], b: &[FqElem]| -> Vec<FqElem> {
            let mut out = vec![fp.zero(); r];
            for i in 0..r {
                if fp.is_zero(&a[i]) {
                    continue;
                }
                for j in 0..r {
                    if fp.is_zero(&b[j]) {
                        continue;
                    }
                    let s = fp.mul(&a[i], &b[j]);
                    for k in 0..r {
                        out[k] = fp.add(&out[k], &fp.mul(&s, &cf[i][j][k]));
                    }
                }
            }
            out
        };
        let pow = |a: &[FqElem], e: u64| -> Vec<FqElem> {
            let mut acc = a.to_vec();
            for _ in 1..e {
                acc = mul(&acc, a);
            }
            acc
        };
        let frob_cols: Vec<Vec<FqElem>> = (0..r)
            .map(|i| {
                let mut e = vec![fp.zero(); r];
                e[i] = fp.one();
                pow(&e, p)
            })
            .collect();
        let frob = Mat::from_cols(&frob_cols, r);
        let big = linalg::mat_pow(&fp, &frob, r as u64);
        let ker = linalg::kernel(&fp, &big);
        let witness = ker.first().map(|v| v.iter().map(|x| fp.as_prime(x).unwrap()).collect());
        Ok((ker.len(), witness))
    }

    /// Characters of the generators over `Q` or a finite field.
    pub fn characters(&self, field: &BaseField) -> Result<Spectrum, EigenError> {
        Ok(simultaneous_spectra(&self.generators, field)?)
    }

    /// Characteristic-zero eigensystems whose reduction is `eta_bar`.
    pub fn lift_character(&self, eta_bar: &ModCharacter) -> Result<Vec<CharacterLift>, EigenError> {
        if eta_bar.names != self.names() {
            return Err(EigenError::NameMismatch(eta_bar.names.clone()));
        }
        let ff = &eta_bar.field;
        let reduced: Vec<Mat<FqElem>> = self.generators.iter().map(|(_, g)| reduce_matrix(g, ff)).collect();
        if joint_eigenspace(ff, &reduced, &eta_bar.values).dim() == 0 {
            return Err(EigenError::NotOccurring);
        }
        let spectrum = spectra_rational(&self.generators)?;
        let mut lifts = Vec::new();
        for ch in &spectrum.characters {
            let basis = ch.component.basis_matrix();
            let restricted: Vec<Mat<FqElem>> = self
                .generators
                .iter()
                .map(|(_, g)| {
                    let r = linalg::restrict(&Rationals, &g.to_rational(), &basis.to_rational())
                        .and_then(|r| r.to_integer())
                        .expect("components are saturated and invariant");
                    reduce_matrix(&r, ff)
                })
                .collect();
            if joint_eigenspace(ff, &restricted, &eta_bar.values).dim() > 0 {
                lifts.push(CharacterLift { names: spectrum.names.clone(), values: ch.values.clone(), component_dim: ch.multiplicity });
            }
        }
        Ok(lifts)
    }
}

/// A characteristic-zero eigensystem: rational values or minimal polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterLift {
    pub names: Vec<String>,
    pub values: Vec<QValue>,
    pub component_dim: usize,
}

impl CharacterLift {
    /// Whether every value reduces to the matching value of `eta_bar`:
    /// rational values map to the prime field; an algebraic value's minimal
    /// polynomial must vanish at the residue.
    pub fn reduces_to(&self, eta_bar: &ModCharacter) -> bool {
        let ff = &eta_bar.field;
        self.values.iter().zip(&eta_bar.values).all(|(v, t)| match v {
            QValue::Rational(q) => ff.from_rational(q).is_some_and(|x| &x == t),
            QValue::Algebraic(f) => {
                let red = intpoly::reduce(ff, f);
                ff.is_zero(&crate::exactalg::poly::eval(ff, &red, t))
            }
        })
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> =
            self.names.iter().zip(&self.values).map(|(n, v)| format!("{n}: {}", v.render())).collect();
        format!("{{{}}} (dim {})", parts.join(", "), self.component_dim)
    }
}

/// An integer-valued character with an integral primitive eigenvector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntCharacter {
    pub names: Vec<String>,
    pub values: Vec<BigInt>,
    pub witness: Vec<BigInt>,
}

impl IntCharacter {
    /// Reads the eigenvalues of `witness` off every operator in `family`.
    pub fn from_witness(family: &[(String, IntMatrix)], witness: &[BigInt]) -> Result<Self, EigenError> {
        let Some(pivot) = witness.iter().position(|x| !x.is_zero()) else {
            return Err(EigenError::BadWitness);
        };
        let mut values = Vec::new();
        for (name, m) in family {
            if m.ncols() != witness.len() {
                return Err(EigenError::BadWitness);
            }
            let image = m.mul_vec(witness);
            let (lambda, rem) = image[pivot].div_rem(&witness[pivot]);
            if !rem.is_zero() || image.iter().zip(witness).any(|(a, w)| a != &(&lambda * w)) {
                return Err(EigenError::NotEigen(name.clone()));
            }
            values.push(lambda);
        }
        Ok(IntCharacter { names: family.iter().map(|(n, _)| n.clone()).collect(), values, witness: witness.to_vec() })
    }

    pub fn value(&self, name: &str) -> Option<&BigInt> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }

    /// Reduction modulo `ell` into `F_ell`.
    pub fn reduce(&self, ell: u64) -> Result<ModCharacter, EigenError> {
        let field = FiniteField::prime(ell)?;
        let values = self.values.iter().map(|v| field.from_bigint_mod(v)).collect();
        let witness: Vec<FqElem> = self.witness.iter().map(|v| field.from_bigint_mod(v)).collect();
        let witness = if witness.iter().all(|x| field.is_zero(x)) { None } else { Some(witness) };
        Ok(ModCharacter { field, names: self.names.clone(), values, witness })
    }
}

/// A character with values in a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModCharacter {
    pub field: FiniteField,
    pub names: Vec<String>,
    pub values: Vec<FqElem>,
    pub witness: Option<Vec<FqElem>>,
}

impl ModCharacter {
    pub fn ell(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn from_spectrum(s: &FfSpectrum, c: &FfCharacter) -> Self {
        ModCharacter {
            field: s.field.clone(),
            names: s.names.clone(),
            values: c.values.clone(),
            witness: Some(c.witness.clone()),
        }
    }

    pub fn value(&self, name: &str) -> Option<&FqElem> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }

    /// Value on an arbitrary operator `m`, read off the witness. `None`
    /// when the witness is missing or is not an eigenvector of `m`.
    pub fn evaluate(&self, m: &IntMatrix) -> Option<FqElem> {
        let ff = &self.field;
        let w = self.witness.as_ref()?;
        let image = linalg::mat_vec(ff, &reduce_matrix(m, ff), w);
        let pivot = w.iter().position(|x| !ff.is_zero(x))?;
        let lambda = ff.div(&image[pivot], &w[pivot])?;
        image.iter().zip(w).all(|(a, b)| *a == ff.mul(&lambda, b)).then_some(lambda)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> =
            self.names.iter().zip(&self.values).map(|(n, v)| format!("{n}={}", self.field.render(v))).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn to_doc(&self) -> ModCharacterDoc {
        ModCharacterDoc {
            field: self.field.descriptor(),
            values: self.names.iter().cloned().zip(self.values.iter().map(encode_elem)).collect(),
            witness: self.witness.as_ref().map(|w| w.iter().map(encode_elem).collect()),
        }
    }
}

/// Field elements as decimal coordinate strings, lowest degree first,
/// separated by commas.
pub fn encode_elem(x: &FqElem) -> String {
    let c: Vec<String> = x.coords().iter().map(|v| v.to_string()).collect();
    c.join(",")
}

pub fn decode_elem(ff: &FiniteField, s: &str) -> Option<FqElem> {
    let coords: Option<Vec<u64>> = s.split(',').map(|t| t.trim().parse().ok()).collect();
    let coords = coords?;
    if coords.len() > ff.degree() || coords.iter().any(|&c| c >= ff.characteristic()) {
        return None;
    }
    Some(ff.from_coords(coords))
}

/// Serialized form of a [`ModCharacter`]; values keyed by operator name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModCharacterDoc {
    pub field: FieldDescriptor,
    pub values: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl ModCharacterDoc {
    pub fn to_character(&self) -> Option<ModCharacter> {
        let field = FiniteField::from_descriptor(&self.field).ok()?;
        let names: Vec<String> = self.values.keys().cloned().collect();
        let values: Option<Vec<FqElem>> = self.values.values().map(|s| decode_elem(&field, s)).collect();
        let witness = match &self.witness {
            Some(w) => Some(w.iter().map(|s| decode_elem(&field, s)).collect::<Option<Vec<_>>>()?),
            None => None,
        };
        Some(ModCharacter { field, names, values: values?, witness })
    }
}

/// A random commuting family on `Z^n`: polynomials in random blocks
/// (scalars, Jordan blocks, companion matrices) conjugated by a random
/// unimodular matrix.
pub fn random_commuting_family<R: Rng>(rng: &mut R, max_rank: usize, generators: usize) -> Vec<(String, IntMatrix)> {
    let n = rng.gen_range(1..=max_rank);
    let mut blocks: Vec<IntMatrix> = Vec::new();
    let mut used = 0;
    while used < n {
        let room = n - used;
        let size = rng.gen_range(1..=room.min(3));
        let b = match size {
            1 => IntMatrix::from_i64_rows(&[vec![rng.gen_range(-3..=3)]]),
            2 if rng.gen_bool(0.4) => {
                let l = rng.gen_range(-3..=3);
                IntMatrix::from_i64_rows(&[vec![l, 1], vec![0, l]])
            }
            _ => {
                // companion matrix of a random monic polynomial
                let mut m = IntMatrix::zeros(size, size);
                for i in 1..size {
                    m.set(i, i - 1, BigInt::one());
                }
                for i in 0..size {
                    m.set(i, size - 1, BigInt::from(rng.gen_range(-3..=3)));
                }
                m
            }
        };
        used += size;
        blocks.push(b);
    }
    let mut p = IntMatrix::identity(n);
    for _ in 0..2 * n {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(rng.gen_range(-1..=1)));
        p = &p * &e;
    }
    let p_inv = linalg::inverse(&Rationals, &p.to_rational())
        .and_then(|m| m.to_integer())
        .expect("products of elementary matrices are unimodular");
    (0..generators)
        .map(|g| {
            let mut d = IntMatrix::zeros(n, n);
            let mut off = 0;
            for b in &blocks {
                let s = b.nrows();
                let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
                let poly = &(&IntMatrix::identity(s).scale(&BigInt::from(c[0])) + &b.scale(&BigInt::from(c[1])))
                    + &(b * b).scale(&BigInt::from(c[2]));
                for i in 0..s {
                    for j in 0..s {
                        d.set(off + i, off + j, poly.get(i, j).clone());
                    }
                }
                off += s;
            }
            (format!("T{g}"), &(&p * &d) * &p_inv)
        })
        .collect()
}

/// Values of `x` read as a residue in `[0, ell)`, for display.
pub fn residue(x: &BigInt, ell: u64) -> u64 {
    x.mod_floor(&BigInt::from(ell)).to_u64().expect("residue fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(rows: &[Vec<i64>]) -> HeckeRing {
        hecke_ring(&[("T".into(), IntMatrix::from_i64_rows(rows))]).unwrap()
    }

    #[test]
    fn ranks_and_indices() {
        assert_eq!(ring(&[vec![1, 0], vec![0, 1]]).rank(), 1);
        let r = ring(&[vec![1, 0], vec![0, 2]]);
        assert_eq!((r.rank(), r.index.clone()), (2, BigInt::one()));
        let r = ring(&[vec![0, 0], vec![0, 2]]);
        assert_eq!(r.index, BigInt::from(2));
        let nil = ring(&[vec![0, 1], vec![0, 0]]);
        assert_eq!(nil.rank(), 2);
        assert_eq!(nil.semisimple_mod_p(3), Err(EigenError::NotReduced));
    }

    #[test]
    fn sqrt2_order() {
        let r = ring(&[vec![0, 2], vec![1, 0]]);
        assert_eq!(r.trace_form_disc, BigInt::from(8));
        assert!(!r.semisimple_mod_p(2).unwrap());
        assert!(r.semisimple_mod_p(3).unwrap());
        assert_eq!(r.nilradical_mod_p(2).unwrap().0, 1);
        assert_eq!(r.nilradical_mod_p(7).unwrap().0, 0);
    }

    #[test]
    fn lifts_of_congruent_pair() {
        let r = ring(&[vec![1, 0], vec![0, 4]]);
        let eta = IntCharacter::from_witness(&r.generators, &[BigInt::one(), BigInt::zero()]).unwrap().reduce(3).unwrap();
        let lifts = r.lift_character(&eta).unwrap();
        assert_eq!(lifts.len(), 2);
        assert!(lifts.iter().all(|l| l.reduces_to(&eta)));
    }
}
