//! Dense univariate polynomials over a [`Field`], lowest degree first.
//! The zero polynomial is the empty vector.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{FiniteField, FqElem, Field};

pub type Poly<E> = Vec<E>;

pub fn trim<F: Field>(f: &F, a: &mut Poly<F::Elem>) {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
}

pub fn normalized<F: Field>(f: &F, mut a: Poly<F::Elem>) -> Poly<F::Elem> {
    trim(f, &mut a);
    a
}

pub fn degree<E>(a: &Poly<E>) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: Field>(f: &F, c: F::Elem) -> Poly<F::Elem> {
    normalized(f, vec![c])
}

/// The monomial `x`.
pub fn x<F: Field>(f: &F) -> Poly<F::Elem> {
    vec![f.zero(), f.one()]
}

pub fn add<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n).map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    normalized(f, out)
}

pub fn sub<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n).map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    normalized(f, out)
}

pub fn scale<F: Field>(f: &F, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
    normalized(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    normalized(f, out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lc_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r = a.clone();
    trim(f, &mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(&r[dr], &lc_inv);
        for (i, bi) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = f.sub(&r[idx], &f.mul(&c, bi));
        }
        q[dr - db] = c;
        trim(f, &mut r);
    }
    (normalized(f, q), r)
}

pub fn rem<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(f, a, &f.inv(lc).expect("nonzero")),
    }
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let mut a = normalized(f, a.clone());
    let mut b = normalized(f, b.clone());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// Returns `(g, s, t)` with `s a + t b = g` and `g` monic.
pub fn ext_gcd<F: Field>(
    f: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
    let (mut r0, mut r1) = (normalized(f, a.clone()), normalized(f, b.clone()));
    let (mut s0, mut s1) = (constant(f, f.one()), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), constant(f, f.one()));
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lc) => {
            let li = f.inv(lc).unwrap();
            (scale(f, &r0, &li), scale(f, &s0, &li), scale(f, &t0, &li))
        }
    }
}

pub fn derivative<F: Field>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    let out = a.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.from_i64(i as i64))).collect();
    normalized(f, out)
}

pub fn eval<F: Field>(f: &F, a: &Poly<F::Elem>, t: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, t), c))
}

/// `base^e mod m`.
pub fn powmod<F: Field>(f: &F, base: &Poly<F::Elem>, e: &BigUint, m: &Poly<F::Elem>) -> Poly<F::Elem> {
    let base = rem(f, base, m);
    let mut acc = rem(f, &constant(f, f.one()), m);
    for i in (0..e.bits()).rev() {
        acc = rem(f, &mul(f, &acc, &acc), m);
        if e.bit(i) {
            acc = rem(f, &mul(f, &acc, &base), m);
        }
    }
    acc
}

pub fn is_one<F: Field>(f: &F, a: &Poly<F::Elem>) -> bool {
    a.len() == 1 && f.is_one(&a[0])
}

/// Ben-Or test over a finite field.
pub fn is_irreducible(ff: &FiniteField, a: &Poly<FqElem>) -> bool {
    let a = monic(ff, a);
    let n = match degree(&a) {
        None | Some(0) => return false,
        Some(n) => n,
    };
    let q = BigUint::from(ff.order());
    let xx = x(ff);
    let mut h = rem(ff, &xx, &a);
    for _ in 0..n / 2 {
        h = powmod(ff, &h, &q, &a);
        let g = gcd(ff, &sub(ff, &h, &xx), &a);
        if !is_one(ff, &g) {
            return false;
        }
    }
    true
}

/// `p`-th root of a polynomial whose derivative vanishes.
fn pth_root(ff: &FiniteField, a: &Poly<FqElem>) -> Poly<FqElem> {
    let p = ff.characteristic() as usize;
    // x -> x^(q/p) inverts the Frobenius on coefficients
    let e = BigUint::from(ff.order() / ff.characteristic() as u128);
    let out = a.iter().step_by(p).map(|c| ff.pow_big(c, &e)).collect();
    normalized(ff, out)
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with
/// pairwise coprime squarefree `g` and `a = prod g^m`.
pub fn squarefree_ff(ff: &FiniteField, a: &Poly<FqElem>) -> Vec<(Poly<FqElem>, usize)> {
    let a = monic(ff, a);
    let mut out = Vec::new();
    if degree(&a).unwrap_or(0) == 0 {
        return out;
    }
    let p = ff.characteristic() as usize;
    let da = derivative(ff, &a);
    if da.is_empty() {
        for (g, m) in squarefree_ff(ff, &pth_root(ff, &a)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = gcd(ff, &a, &da);
    let mut w = divrem(ff, &a, &c).0;
    let mut i = 1;
    while !is_one(ff, &w) {
        let y = gcd(ff, &w, &c);
        let fac = divrem(ff, &w, &y).0;
        if !is_one(ff, &fac) {
            out.push((fac, i));
        }
        w = y;
        c = divrem(ff, &c, &w).0;
        i += 1;
    }
    if !is_one(ff, &c) {
        for (g, m) in squarefree_ff(ff, &pth_root(ff, &c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree(ff: &FiniteField, a: &Poly<FqElem>) -> Vec<(Poly<FqElem>, usize)> {
    let q = BigUint::from(ff.order());
    let xx = x(ff);
    let mut rest = monic(ff, a);
    let mut out = Vec::new();
    let mut h = rem(ff, &xx, &rest);
    let mut i = 1;
    while degree(&rest).unwrap_or(0) >= 2 * i {
        h = powmod(ff, &h, &q, &rest);
        let g = gcd(ff, &sub(ff, &h, &xx), &rest);
        if !is_one(ff, &g) {
            rest = divrem(ff, &rest, &g).0;
            h = rem(ff, &h, &rest);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = degree(&rest) {
        if d > 0 {
            out.push((rest, d));
        }
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(ff: &FiniteField, a: &Poly<FqElem>, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<FqElem>> {
    let n = degree(a).unwrap_or(0);
    if n <= d {
        return vec![monic(ff, a)];
    }
    let q = BigUint::from(ff.order());
    let qd = num_traits::pow(q, d);
    loop {
        let r: Poly<FqElem> = normalized(ff, (0..n).map(|_| ff.random(rng)).collect());
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let b = if ff.characteristic() == 2 {
            // absolute trace r + r^2 + ... + r^(2^(kd-1))
            let steps = ff.degree() * d;
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..steps {
                t = rem(ff, &mul(ff, &t, &t), a);
                acc = add(ff, &acc, &t);
            }
            acc
        } else {
            let e = (&qd - BigUint::one()) >> 1;
            sub(ff, &powmod(ff, &r, &e, a), &constant(ff, ff.one()))
        };
        let g = gcd(ff, &b, a);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(ff, a, &g).0;
            let mut out = equal_degree(ff, &g, d, rng);
            out.extend(equal_degree(ff, &h, d, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by degree and then coefficient encodings.
pub fn factor_ff(ff: &FiniteField, a: &Poly<FqElem>) -> Vec<(Poly<FqElem>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut out = Vec::new();
    for (g, m) in squarefree_ff(ff, a) {
        for (h, d) in distinct_degree(ff, &g) {
            for irr in equal_degree(ff, &h, d, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    sort_polys(ff, &mut out);
    out
}

fn sort_polys(ff: &FiniteField, v: &mut [(Poly<FqElem>, usize)]) {
    v.sort_by(|(a, _), (b, _)| {
        a.len().cmp(&b.len()).then_with(|| {
            let ea: Vec<u128> = a.iter().rev().map(|c| ff.encode(c)).collect();
            let eb: Vec<u128> = b.iter().rev().map(|c| ff.encode(c)).collect();
            ea.cmp(&eb)
        })
    });
}

/// Distinct roots in the field, sorted by encoding.
pub fn roots_ff(ff: &FiniteField, a: &Poly<FqElem>) -> Vec<FqElem> {
    let a = monic(ff, a);
    match degree(&a) {
        None => panic!("roots of the zero polynomial"),
        Some(0) => return Vec::new(),
        Some(_) => {}
    }
    let xx = x(ff);
    let q = BigUint::from(ff.order());
    // restrict to the product of linear factors: gcd(x^q - x, a)
    let xq = powmod(ff, &xx, &q, &a);
    let lin = gcd(ff, &sub(ff, &xq, &xx), &a);
    if degree(&lin).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut roots: Vec<FqElem> = equal_degree(ff, &lin, 1, &mut rng)
        .into_iter()
        .map(|l| ff.neg(&l[0]))
        .collect();
    roots.sort_by(|u, v| ff.cmp_elems(u, v));
    roots
}

/// Reduces integer coefficients into `ff`.
pub fn from_ints(ff: &FiniteField, a: &[num_bigint::BigInt]) -> Poly<FqElem> {
    normalized(ff, a.iter().map(|c| ff.from_bigint_mod(c)).collect())
}

pub fn render<F: Field>(f: &F, a: &Poly<F::Elem>) -> String {
    if a.is_empty() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (i, c) in a.iter().enumerate().rev() {
        if f.is_zero(c) {
            continue;
        }
        let cs = f.render(c);
        let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
        let t = match i {
            0 => cs,
            1 if f.is_one(c) => "x".to_string(),
            1 => format!("{cs}*x"),
            _ if f.is_one(c) => format!("x^{i}"),
            _ => format!("{cs}*x^{i}"),
        };
        terms.push(t);
    }
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ff: &FiniteField, c: &[u64]) -> Poly<FqElem> {
        normalized(ff, c.iter().map(|&x| ff.from_u64(x)).collect())
    }

    fn product(ff: &FiniteField, fs: &[(Poly<FqElem>, usize)]) -> Poly<FqElem> {
        let mut acc = constant(ff, ff.one());
        for (g, m) in fs {
            for _ in 0..*m {
                acc = mul(ff, &acc, g);
            }
        }
        acc
    }

    #[test]
    fn factorization_multiplies_back() {
        for prime in [2u64, 3, 5, 7] {
            let ff = FiniteField::prime(prime).unwrap();
            // (x^2+1)^2 (x+1)^3 x^p (x^3 + x + 1)
            let mut a = p(&ff, &[1, 0, 1]);
            a = mul(&ff, &a, &a);
            let l = p(&ff, &[1, 1]);
            for _ in 0..3 {
                a = mul(&ff, &a, &l);
            }
            let mut xp = vec![ff.zero(); prime as usize];
            xp.push(ff.one());
            a = mul(&ff, &a, &xp);
            a = mul(&ff, &a, &p(&ff, &[1, 1, 0, 1]));
            let fs = factor_ff(&ff, &a);
            assert_eq!(product(&ff, &fs), a, "p = {prime}");
            for (g, _) in &fs {
                assert!(is_irreducible(&ff, g));
            }
        }
    }

    #[test]
    fn roots_over_extension() {
        let ff = FiniteField::new(3, 2).unwrap();
        let a = p(&ff, &[1, 0, 1]);
        let rs = roots_ff(&ff, &a);
        assert_eq!(rs.len(), 2);
        for r in &rs {
            assert!(ff.is_zero(&eval(&ff, &a, r)));
        }
        let f2 = FiniteField::new(2, 3).unwrap();
        let c = p(&f2, &[1, 1, 0, 1]);
        assert_eq!(roots_ff(&f2, &c).len(), 3);
    }

    #[test]
    fn ext_gcd_identity() {
        let ff = FiniteField::prime(11).unwrap();
        let a = p(&ff, &[3, 0, 2, 5]);
        let b = p(&ff, &[1, 4, 1]);
        let (g, s, t) = ext_gcd(&ff, &a, &b);
        assert_eq!(add(&ff, &mul(&ff, &s, &a), &mul(&ff, &t, &b)), g);
        assert_eq!(g, gcd(&ff, &a, &b));
    }
}
