use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::poly;
use super::ExactError;

/// Arithmetic context for a commutative field.
///
/// Elements are plain values; the context carries whatever is needed to
/// combine them (the modulus of a finite field, for instance).
pub trait Field {
    type Elem: Clone + PartialEq + Eq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// A fixed total order used for canonical output.
    fn cmp_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;
    fn render(&self, a: &Self::Elem) -> String;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow_u64(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer powers, negative exponents allowed for units.
    fn pow_i64(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow_u64(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow_u64(&ai, e.unsigned_abs()))
        }
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn cmp_elems(&self, a: &BigRational, b: &BigRational) -> Ordering {
        a.cmp(b)
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// Element of a finite field `F_{p^k}`: coordinates in the power basis of the
/// defining polynomial, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FqElem {
    coords: Vec<u64>,
}

impl FqElem {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// Finite field `F_{p^k}` with `p^k <= 2^64`.
///
/// The defining polynomial is the monic irreducible of degree `k` whose
/// non-leading coefficients, read as base-`p` digits with the `x^{k-1}`
/// coefficient most significant, encode the smallest integer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.k)
    }
}

/// Serializable description of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub characteristic: u64,
    pub degree: usize,
    pub modulus: Vec<u64>,
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    // also keeps every witness below n
    for d in WITNESSES {
        if n % d == 0 {
            return n == d;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in WITNESSES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, ExactError> {
        if !is_prime_u64(p) {
            return Err(ExactError::NotPrime(p));
        }
        Ok(FiniteField { p, k: 1, modulus: vec![0, 1] })
    }

    /// The field `F_{p^k}` with its canonical defining polynomial.
    pub fn new(p: u64, k: usize) -> Result<Self, ExactError> {
        let base = FiniteField::prime(p)?;
        if k == 0 {
            return Err(ExactError::InvalidDegree(k));
        }
        if k == 1 {
            return Ok(base);
        }
        let order = (p as u128).checked_pow(k as u32);
        match order {
            Some(q) if q <= 1u128 << 64 => {}
            _ => return Err(ExactError::FieldTooLarge { p, k }),
        }
        let count = (p as u128).pow(k as u32);
        for n in 0..count {
            let mut coeffs = Vec::with_capacity(k + 1);
            let mut r = n;
            for _ in 0..k {
                coeffs.push((r % p as u128) as u64);
                r /= p as u128;
            }
            coeffs.push(1);
            if coeffs[0] == 0 {
                continue;
            }
            let f: Vec<FqElem> = coeffs.iter().map(|&c| base.from_u64(c)).collect();
            if poly::is_irreducible(&base, &f) {
                return Ok(FiniteField { p, k, modulus: coeffs });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self, ExactError> {
        let f = FiniteField::new(d.characteristic, d.degree)?;
        if f.modulus != d.modulus {
            return Err(ExactError::DescriptorMismatch);
        }
        Ok(f)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { characteristic: self.p, degree: self.k, modulus: self.modulus.clone() }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Number of elements, as `u128` since `2^64` itself is allowed.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn from_u64(&self, n: u64) -> FqElem {
        let mut coords = vec![0; self.k];
        coords[0] = n % self.p;
        FqElem { coords }
    }

    pub fn from_coords(&self, mut coords: Vec<u64>) -> FqElem {
        coords.resize(self.k, 0);
        for c in coords.iter_mut() {
            *c %= self.p;
        }
        FqElem { coords }
    }

    /// Integer encoding `sum c_i p^i`.
    pub fn encode(&self, a: &FqElem) -> u128 {
        a.coords.iter().rev().fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    pub fn decode(&self, mut n: u128) -> FqElem {
        let mut coords = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            coords.push((n % self.p as u128) as u64);
            n /= self.p as u128;
        }
        FqElem { coords }
    }

    /// All elements in encoding order; only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |n| self.decode(n))
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> FqElem {
        FqElem { coords: (0..self.k).map(|_| rng.gen_range(0..self.p)).collect() }
    }

    /// `a^e` for an arbitrary-size exponent.
    pub fn pow_big(&self, a: &FqElem, e: &BigUint) -> FqElem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow_u128(&self, a: &FqElem, e: u128) -> FqElem {
        self.pow_big(a, &BigUint::from(e))
    }

    /// `a^(p^times)`.
    pub fn frobenius(&self, a: &FqElem, times: usize) -> FqElem {
        let mut x = a.clone();
        for _ in 0..times % self.k.max(1) {
            x = self.pow_u64(&x, self.p);
        }
        x
    }

    pub fn is_square(&self, a: &FqElem) -> bool {
        if self.is_zero(a) || self.p == 2 {
            return true;
        }
        self.is_one(&self.pow_u128(a, (self.order() - 1) / 2))
    }

    /// Both square roots of `a` (one when `a` is 0 or the characteristic is 2),
    /// sorted by encoding, or `None` for non-squares.
    pub fn sqrt_all(&self, a: &FqElem) -> Option<Vec<FqElem>> {
        if self.is_zero(a) {
            return Some(vec![self.zero()]);
        }
        let q = self.order();
        if self.p == 2 {
            return Some(vec![self.pow_u128(a, q / 2)]);
        }
        if !self.is_square(a) {
            return None;
        }
        // Tonelli-Shanks with the smallest-encoding non-residue
        let mut t = q - 1;
        let mut s = 0u32;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = (2..q).map(|n| self.decode(n)).find(|z| !self.is_square(z)).expect("non-residue exists");
        let mut m = s;
        let mut c = self.pow_u128(&z, t);
        let mut tt = self.pow_u128(a, t);
        let mut r = self.pow_u128(a, t.div_ceil(2));
        while !self.is_one(&tt) {
            let mut i = 0u32;
            let mut probe = tt.clone();
            while !self.is_one(&probe) {
                probe = self.mul(&probe, &probe);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        let mut roots = vec![r.clone(), self.neg(&r)];
        roots.sort_by(|x, y| self.cmp_elems(x, y));
        roots.dedup();
        Some(roots)
    }

    /// Maps an integer (possibly negative) into the prime subfield.
    pub fn from_bigint_mod(&self, n: &BigInt) -> FqElem {
        let r = n.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits");
        self.from_u64(r)
    }

    /// Maps a rational with denominator prime to `p` into the prime subfield.
    pub fn from_rational(&self, q: &BigRational) -> Option<FqElem> {
        let d = self.from_bigint_mod(q.denom());
        let n = self.from_bigint_mod(q.numer());
        self.div(&n, &d)
    }

    /// Embeds an element of a subfield given as an element of `F_p`.
    pub fn embed_prime(&self, other: &FiniteField, a: &FqElem) -> FqElem {
        assert_eq!(other.p, self.p);
        assert_eq!(other.k, 1, "only prime-field embedding is canonical");
        self.from_u64(a.coords[0])
    }

    /// Whether `a` lies in the prime subfield; returns its residue.
    pub fn as_prime(&self, a: &FqElem) -> Option<u64> {
        if a.coords[1..].iter().all(|&c| c == 0) {
            Some(a.coords[0])
        } else {
            None
        }
    }

    fn add_mod(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    fn mul_mod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn neg_mod(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv_mod(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let e = BigInt::from(a).extended_gcd(&BigInt::from(self.p));
        Some(e.x.mod_floor(&BigInt::from(self.p)).to_u64().unwrap())
    }
}

impl Field for FiniteField {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem { coords: vec![0; self.k] }
    }

    fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem { coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| self.add_mod(x, y)).collect() }
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem {
            coords: a.coords.iter().zip(&b.coords).map(|(&x, &y)| self.add_mod(x, self.neg_mod(y))).collect(),
        }
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if self.k == 1 {
            return FqElem { coords: vec![self.mul_mod(a.coords[0], b.coords[0])] };
        }
        let k = self.k;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coords.iter().enumerate() {
                prod[i + j] = self.add_mod(prod[i + j], self.mul_mod(x, y));
            }
        }
        // reduce by the monic modulus from the top down
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                let sub = self.mul_mod(c, self.modulus[i]);
                prod[d - k + i] = self.add_mod(prod[d - k + i], self.neg_mod(sub));
            }
        }
        prod.truncate(k);
        FqElem { coords: prod }
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        FqElem { coords: a.coords.iter().map(|&x| self.neg_mod(x)).collect() }
    }

    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        if self.k == 1 {
            return self.inv_mod(a.coords[0]).map(|x| FqElem { coords: vec![x] });
        }
        Some(self.pow_u128(a, self.order() - 2))
    }

    fn is_zero(&self, a: &FqElem) -> bool {
        a.coords.iter().all(|&c| c == 0)
    }

    fn from_bigint(&self, n: &BigInt) -> FqElem {
        self.from_bigint_mod(n)
    }

    fn cmp_elems(&self, a: &FqElem, b: &FqElem) -> Ordering {
        self.encode(a).cmp(&self.encode(b))
    }

    fn render(&self, a: &FqElem) -> String {
        if self.k == 1 {
            return a.coords[0].to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in a.coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// `v_p` of a nonzero rational.
pub fn valuation_rational(x: &BigRational, p: u64) -> Option<i64> {
    let vn = valuation(x.numer(), p)? as i64;
    let vd = valuation(x.denom(), p)? as i64;
    Some(vn - vd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_agrees_with_a_sieve() {
        let n = 5000;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                for j in (i * i..n).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime_u64(i as u64), p, "{i}");
        }
        // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime_u64(3_215_031_751));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn defining_polynomials_are_smallest() {
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(5, 2).unwrap().modulus(), &[2, 0, 1]);
    }

    #[test]
    fn size_limit_is_enforced() {
        assert!(FiniteField::new(2, 64).is_ok());
        assert!(matches!(FiniteField::new(2, 65), Err(ExactError::FieldTooLarge { .. })));
        assert!(matches!(FiniteField::new(4, 1), Err(ExactError::NotPrime(4))));
    }

    #[test]
    fn field_axioms_in_f49() {
        let f = FiniteField::new(7, 2).unwrap();
        for n in 1..49u128 {
            let a = f.decode(n);
            let ai = f.inv(&a).unwrap();
            assert!(f.is_one(&f.mul(&a, &ai)));
            assert!(f.is_one(&f.pow_u128(&a, 48)));
        }
    }

    #[test]
    fn square_roots() {
        let f = FiniteField::new(7, 2).unwrap();
        let mut squares = 0;
        for n in 0..49u128 {
            let a = f.decode(n);
            let rs = f.sqrt_all(&f.mul(&a, &a)).unwrap();
            assert!(rs.contains(&a));
            if let Some(roots) = f.sqrt_all(&a) {
                squares += 1;
                for r in roots {
                    assert_eq!(f.mul(&r, &r), a);
                }
            }
        }
        assert_eq!(squares, 25);
        let g = FiniteField::prime(2).unwrap();
        assert_eq!(g.sqrt_all(&g.one()).unwrap(), vec![g.one()]);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(-24), 2), Some(3));
        assert_eq!(valuation(&BigInt::from(0), 2), None);
        assert_eq!(valuation_rational(&BigRational::new(9.into(), 4.into()), 2), Some(-2));
    }
}
