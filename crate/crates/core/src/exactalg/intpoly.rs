//! Polynomials over the integers: characteristic polynomials and complete
//! factorization (Zassenhaus with Hensel lifting).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{is_prime_u64, FiniteField, FqElem, Rationals};
use super::matrix::IntMatrix;
use super::poly::{self, Poly};

/// Integer polynomial, lowest degree first, no trailing zeros.
pub type IntPoly = Vec<BigInt>;

pub fn trim(a: &mut IntPoly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn from_i64(c: &[i64]) -> IntPoly {
    let mut a: IntPoly = c.iter().map(|&x| BigInt::from(x)).collect();
    trim(&mut a);
    a
}

pub fn degree(a: &IntPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn eval(a: &IntPoly, t: &BigInt) -> BigInt {
    a.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
}

pub fn content(a: &IntPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive_part(a: &IntPoly) -> IntPoly {
    let mut c = content(a);
    if c.is_zero() {
        return Vec::new();
    }
    if a.last().unwrap().is_negative() {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

pub fn to_rational(a: &IntPoly) -> Poly<BigRational> {
    a.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Clears denominators and returns the primitive integer polynomial.
pub fn from_rational_primitive(a: &Poly<BigRational>) -> IntPoly {
    let d = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: IntPoly = a.iter().map(|c| (c * BigRational::from_integer(d.clone())).to_integer()).collect();
    primitive_part(&ints)
}

/// Exact quotient `a / b` over the integers, if it exists.
pub fn exact_div(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let (q, r) = poly::divrem(&Rationals, &to_rational(a), &to_rational(b));
    if !r.is_empty() || q.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.iter().map(|c| c.to_integer()).collect())
}

/// Reduction modulo a prime into `ff`.
pub fn reduce(ff: &FiniteField, a: &IntPoly) -> Poly<FqElem> {
    poly::from_ints(ff, a)
}

/// `det(x I - m)` by Faddeev-LeVerrier; all divisions are exact.
pub fn charpoly(m: &IntMatrix) -> IntPoly {
    assert!(m.is_square());
    let n = m.nrows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IntMatrix::identity(n);
    for k in 1..=n {
        let mut am = m * &mk;
        let ck = -(am.trace() / BigInt::from(k));
        for i in 0..n {
            let v = am.get(i, i) + &ck;
            am.set(i, i, v);
        }
        coeffs[n - k] = ck;
        mk = am;
    }
    coeffs
}

/// Matrix polynomial evaluation by Horner's rule.
pub fn eval_matrix(a: &IntPoly, m: &IntMatrix) -> IntMatrix {
    let n = m.nrows();
    let mut acc = IntMatrix::zeros(n, n);
    for c in a.iter().rev() {
        acc = &acc * m;
        for i in 0..n {
            let v = acc.get(i, i) + c;
            acc.set(i, i, v);
        }
    }
    acc
}

/// Squarefree decomposition of a primitive polynomial over the rationals:
/// pairs `(g, m)` with `a = c * prod g^m`, each `g` primitive.
pub fn squarefree(a: &IntPoly) -> Vec<(IntPoly, usize)> {
    let q = Rationals;
    let f = poly::monic(&q, &to_rational(a));
    let mut out = Vec::new();
    if poly::degree(&f).unwrap_or(0) == 0 {
        return out;
    }
    // Yun's algorithm
    let df = poly::derivative(&q, &f);
    let b = poly::gcd(&q, &f, &df);
    let mut c = poly::divrem(&q, &f, &b).0;
    let mut d = poly::sub(&q, &poly::divrem(&q, &df, &b).0, &poly::derivative(&q, &c));
    let mut i = 1;
    while poly::degree(&c).unwrap_or(0) > 0 {
        let g = poly::gcd(&q, &c, &d);
        c = poly::divrem(&q, &c, &g).0;
        d = poly::sub(&q, &poly::divrem(&q, &d, &g).0, &poly::derivative(&q, &c));
        if poly::degree(&g).unwrap_or(0) > 0 {
            out.push((from_rational_primitive(&g), i));
        }
        i += 1;
    }
    out
}

fn mignotte_bound(f: &IntPoly) -> BigInt {
    let n = degree(f).unwrap_or(0) as u32;
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let root = norm2.sqrt() + BigInt::one();
    (BigInt::one() << n) * root * f.last().unwrap().abs()
}

fn symmetric_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn lift_to_int(ff: &FiniteField, a: &Poly<FqElem>) -> IntPoly {
    a.iter().map(|c| BigInt::from(ff.as_prime(c).expect("prime field"))).collect()
}

fn poly_sub_int(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let mut out: IntPoly = (0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect();
    trim(&mut out);
    out
}

fn poly_add_int(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let mut out: IntPoly = (0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect();
    trim(&mut out);
    out
}

fn scale_int(a: &IntPoly, c: &BigInt) -> IntPoly {
    let mut out: IntPoly = a.iter().map(|x| x * c).collect();
    trim(&mut out);
    out
}

/// Lifts `f = g h (mod p)` with `g` monic and coprime cofactor `h` to a
/// factorization modulo `p^target_exp`.
fn hensel_pair(
    ff: &FiniteField,
    f: &IntPoly,
    g0: &Poly<FqElem>,
    h0: &Poly<FqElem>,
    target_exp: u32,
) -> (IntPoly, IntPoly) {
    let p = BigInt::from(ff.characteristic());
    let (gcd, s, t) = poly::ext_gcd(ff, g0, h0);
    assert!(poly::is_one(ff, &gcd), "Hensel lifting needs coprime factors");
    let mut g = lift_to_int(ff, g0);
    let mut h = lift_to_int(ff, h0);
    // make h carry the true leading coefficient
    let lc = f.last().unwrap().clone();
    let hl = h.len() - 1;
    h[hl] = lc;
    let mut pk = p.clone();
    for _ in 1..target_exp {
        let e = poly_sub_int(f, &mul(&g, &h));
        let e_div: IntPoly = e.iter().map(|c| c.div_floor(&pk)).collect();
        debug_assert!(e.iter().all(|c| c.mod_floor(&pk).is_zero()));
        let ebar = reduce(ff, &e_div);
        let (q, r) = poly::divrem(ff, &poly::mul(ff, &t, &ebar), g0);
        let dg = r;
        let dh = poly::add(ff, &poly::mul(ff, &s, &ebar), &poly::mul(ff, &q, h0));
        g = poly_add_int(&g, &scale_int(&lift_to_int(ff, &dg), &pk));
        h = poly_add_int(&h, &scale_int(&lift_to_int(ff, &dh), &pk));
        pk *= &p;
    }
    (g, h)
}

/// Lifts all monic modular factors of `f` (whose product times the leading
/// coefficient is `f mod p`) to modulus `p^exp`.
fn hensel_multi(ff: &FiniteField, f: &IntPoly, factors: &[Poly<FqElem>], exp: u32, out: &mut Vec<IntPoly>) {
    let m = BigInt::from(ff.characteristic()).pow(exp);
    if factors.len() == 1 {
        let lc_inv = f.last().unwrap().modinv(&m).expect("leading coefficient is a unit");
        out.push(f.iter().map(|c| (c * &lc_inv).mod_floor(&m)).collect());
        return;
    }
    let g0 = factors[0].clone();
    let lcf = ff.from_bigint_mod(f.last().unwrap());
    let mut h0 = poly::constant(ff, lcf);
    for fac in &factors[1..] {
        h0 = poly::mul(ff, &h0, fac);
    }
    let (g, h) = hensel_pair(ff, f, &g0, &h0, exp);
    out.push(g.iter().map(|c| c.mod_floor(&m)).collect());
    let h: IntPoly = h.iter().map(|c| c.mod_floor(&m)).collect();
    hensel_multi_mod(ff, &h, &factors[1..], exp, &m, out);
}

// The cofactor is only known modulo p^exp; continue lifting with it.
fn hensel_multi_mod(ff: &FiniteField, h: &IntPoly, factors: &[Poly<FqElem>], exp: u32, m: &BigInt, out: &mut Vec<IntPoly>) {
    let h: IntPoly = h.iter().map(|c| symmetric_mod(c, m)).collect();
    hensel_multi(ff, &h, factors, exp, out);
}

fn product_mod(parts: &[&IntPoly], lc: &BigInt, m: &BigInt) -> IntPoly {
    let mut acc: IntPoly = vec![lc.clone()];
    for p in parts {
        acc = mul(&acc, p).iter().map(|c| c.mod_floor(m)).collect();
    }
    acc.iter().map(|c| symmetric_mod(c, m)).collect()
}

fn choose_prime(f: &IntPoly) -> FiniteField {
    let lc = f.last().unwrap();
    let mut p = 3u64;
    loop {
        if is_prime_u64(p) && !(lc % BigInt::from(p)).is_zero() {
            let ff = FiniteField::prime(p).unwrap();
            let fb = reduce(&ff, f);
            let g = poly::gcd(&ff, &fb, &poly::derivative(&ff, &fb));
            if poly::degree(&g) == Some(0) {
                return ff;
            }
        }
        p += 2;
    }
}

/// Irreducible factors of a primitive squarefree polynomial of degree >= 1.
fn zassenhaus(f: &IntPoly) -> Vec<IntPoly> {
    let n = degree(f).unwrap();
    if n == 1 {
        return vec![primitive_part(f)];
    }
    let ff = choose_prime(f);
    let modular: Vec<Poly<FqElem>> = poly::factor_ff(&ff, &reduce(&ff, f)).into_iter().map(|(g, _)| g).collect();
    if modular.len() == 1 {
        return vec![primitive_part(f)];
    }
    let bound = mignotte_bound(f) * 2;
    let p = BigInt::from(ff.characteristic());
    let mut exp = 1u32;
    let mut m = p.clone();
    while m <= bound {
        m *= &p;
        exp += 1;
    }
    let mut lifted = Vec::new();
    hensel_multi(&ff, f, &modular, exp, &mut lifted);
    recombine(f, lifted, &m)
}

fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, m: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), s) {
            let lc = f.last().unwrap().clone();
            let parts: Vec<&IntPoly> = subset.iter().map(|&i| &lifted[i]).collect();
            let cand = primitive_part(&product_mod(&parts, &lc, m));
            if let Some(q) = exact_div(&f, &cand) {
                out.push(cand);
                f = q;
                let keep: Vec<IntPoly> =
                    lifted.iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, g)| g.clone()).collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if degree(&f).unwrap_or(0) > 0 {
        out.push(primitive_part(&f));
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Complete factorization: `a = content * prod g^m` with primitive
/// irreducible `g` of positive leading coefficient, sorted by degree then
/// coefficients.
pub fn factor(a: &IntPoly) -> (BigInt, Vec<(IntPoly, usize)>) {
    let mut a = a.clone();
    trim(&mut a);
    assert!(!a.is_empty(), "cannot factor the zero polynomial");
    let mut c = content(&a);
    if a.last().unwrap().is_negative() {
        c = -c;
    }
    let prim: IntPoly = a.iter().map(|x| x / &c).collect();
    let mut out = Vec::new();
    let mut rest = prim.clone();
    for (g, m) in squarefree(&prim) {
        for irr in zassenhaus(&g) {
            out.push((irr, m));
        }
    }
    // the squarefree parts are only determined up to units; fix the sign
    for (g, m) in &out {
        for _ in 0..*m {
            rest = exact_div(&rest, g).expect("factor divides");
        }
    }
    let unit = rest[0].clone();
    out.sort_by(|(x, _), (y, _)| x.len().cmp(&y.len()).then_with(|| x.iter().rev().cmp(y.iter().rev())));
    (c * unit, out)
}

/// Roots in `Z` of an integer polynomial, ascending.
pub fn integer_roots(a: &IntPoly) -> Vec<BigInt> {
    let (_, fs) = factor(a);
    let mut roots: Vec<BigInt> = fs
        .iter()
        .filter(|(g, _)| g.len() == 2 && g[1].is_one())
        .map(|(g, _)| -g[0].clone())
        .collect();
    roots.sort();
    roots
}

pub fn render(a: &IntPoly) -> String {
    if a.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, c) in a.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        if mag.is_one() && i > 0 {
            s.push_str(&mono);
        } else if i == 0 {
            s.push_str(&mag.to_string());
        } else {
            s.push_str(&format!("{mag}*{mono}"));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(fs: &[(IntPoly, usize)], c: &BigInt) -> IntPoly {
        let mut acc: IntPoly = vec![c.clone()];
        for (g, m) in fs {
            for _ in 0..*m {
                acc = mul(&acc, g);
            }
        }
        acc
    }

    #[test]
    fn factors_swinnerton_dyer_like() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits mod every prime
        let f = from_i64(&[1, 0, -10, 0, 1]);
        let (c, fs) = factor(&f);
        assert_eq!(c, BigInt::one());
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0, f);
    }

    #[test]
    fn factors_products() {
        // 6 (x-1)^2 (x^2+1) (2x+3)
        let base = mul(&mul(&from_i64(&[-1, 1]), &from_i64(&[-1, 1])), &mul(&from_i64(&[1, 0, 1]), &from_i64(&[3, 2])));
        let f = scale_int(&base, &BigInt::from(-6));
        let (c, fs) = factor(&f);
        assert_eq!(expand(&fs, &c), f);
        assert_eq!(fs.len(), 3);
        assert_eq!(c.abs(), BigInt::from(6));
        assert_eq!(integer_roots(&f), vec![BigInt::one()]);
    }

    #[test]
    fn charpoly_matches_hessenberg() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        let p = charpoly(&m);
        let rat = super::super::linalg::charpoly(&Rationals, &m.to_rational());
        assert_eq!(to_rational(&p), rat);
        assert!(eval_matrix(&p, &m).is_zero());
    }

    #[test]
    fn renders() {
        assert_eq!(render(&from_i64(&[-1, 0, 1])), "x^2 - 1");
        assert_eq!(render(&from_i64(&[-3, 2])), "2*x - 3");
    }
}
