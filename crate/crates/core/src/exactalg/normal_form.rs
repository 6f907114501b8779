//! Hermite and Smith normal forms over the integers, with unimodular
//! transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form `h = u * a`.
///
/// Nonzero rows come first, pivots strictly move right, pivots are
/// positive and entries above a pivot lie in `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn row_combine(m: &mut IntMatrix, r: usize, i: usize, s: &BigInt, t: &BigInt, a: &BigInt, b: &BigInt) {
    // [row_r; row_i] <- [[s, t], [-b, a]] [row_r; row_i]
    for j in 0..m.ncols() {
        let x = m.get(r, j).clone();
        let y = m.get(i, j).clone();
        m.set(r, j, s * &x + t * &y);
        m.set(i, j, a * &y - b * &x);
    }
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    for j in 0..m.ncols() {
        let v = m.get(dst, j) - c * m.get(src, j);
        m.set(dst, j, v);
    }
}

fn row_negate(m: &mut IntMatrix, r: usize) {
    for j in 0..m.ncols() {
        let v = -m.get(r, j).clone();
        m.set(r, j, v);
    }
}

pub fn hermite(a: &IntMatrix) -> Hermite {
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // fold every entry below into row r by extended gcd steps
        for i in r + 1..rows {
            if h.get(i, c).is_zero() {
                continue;
            }
            let x = h.get(r, c).clone();
            let y = h.get(i, c).clone();
            let e = x.extended_gcd(&y);
            let (a_, b_) = (&x / &e.gcd, &y / &e.gcd);
            row_combine(&mut h, r, i, &e.x, &e.y, &a_, &b_);
            row_combine(&mut u, r, i, &e.x, &e.y, &a_, &b_);
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            row_negate(&mut h, r);
            row_negate(&mut u, r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let q = h.get(i, c).div_floor(&p);
            if !q.is_zero() {
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut u, i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hermite { h, u, pivots }
}

/// Basis (as rows) of the integer left kernel `{x : x a = 0}`; saturated.
pub fn left_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let hf = hermite(a);
    (hf.rank()..a.nrows()).map(|i| hf.u.row(i).to_vec()).collect()
}

/// Basis of the integer right kernel `{x : a x = 0}`; saturated.
pub fn right_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    left_kernel(&a.transpose())
}

/// Smith normal form `d = l * a * r` with unimodular `l`, `r`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub l: IntMatrix,
    pub r: IntMatrix,
}

impl Smith {
    /// The `min(m, n)` diagonal entries; zeros come last.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.nrows().min(self.d.ncols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Nonzero invariant factors, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

fn col_combine(m: &mut IntMatrix, c: usize, j: usize, s: &BigInt, t: &BigInt, a: &BigInt, b: &BigInt) {
    for i in 0..m.nrows() {
        let x = m.get(i, c).clone();
        let y = m.get(i, j).clone();
        m.set(i, c, s * &x + t * &y);
        m.set(i, j, a * &y - b * &x);
    }
}

/// `(s, t, a, b)` with `s x + t y = g`, `a = x / g`, `b = y / g`. When `x`
/// divides `y` this is plain elimination, which keeps the pivot in place;
/// other Bezout pairs can swap rows back and forth forever.
fn bezout(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt, BigInt) {
    if (y % x).is_zero() {
        return (BigInt::one(), BigInt::zero(), BigInt::one(), y / x);
    }
    let e = x.extended_gcd(y);
    (e.x, e.y, x / &e.gcd, y / &e.gcd)
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut l = IntMatrix::identity(rows);
    let mut r = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = d.get(i, j);
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        l.swap_rows(t, bi);
        d.swap_cols(t, bj);
        r.swap_cols(t, bj);
        loop {
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let (s, t_, a_, b_) = bezout(d.get(t, t), d.get(i, t));
                row_combine(&mut d, t, i, &s, &t_, &a_, &b_);
                row_combine(&mut l, t, i, &s, &t_, &a_, &b_);
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let (s, t_, a_, b_) = bezout(d.get(t, t), d.get(t, j));
                col_combine(&mut d, t, j, &s, &t_, &a_, &b_);
                col_combine(&mut r, t, j, &s, &t_, &a_, &b_);
            }
            let clean = (t + 1..rows).all(|i| d.get(i, t).is_zero());
            if !clean {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let p = d.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(d.get(i, j) % &p).is_zero()));
            match bad {
                Some(i) => {
                    row_axpy(&mut d, t, i, &BigInt::from(-1));
                    row_axpy(&mut l, t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            row_negate(&mut d, t);
            row_negate(&mut l, t);
        }
    }
    Smith { d, l, r }
}

/// Invariant factors other than one.
pub fn torsion_of(factors: &[BigInt]) -> Vec<BigInt> {
    factors.iter().filter(|x| !x.is_one()).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn smith_with_unit_pivot_terminates() {
        let a = m(&[
            vec![1, 0, 0, 0, 1],
            vec![0, 2, 0, 0, 0],
            vec![0, 0, 1, 0, 1],
            vec![0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 2],
        ]);
        let s = smith(&a);
        assert_eq!(&(&s.l * &a) * &s.r, s.d);
        let f: Vec<i64> = s.invariant_factors().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(f, vec![1, 1, 1, 2, 2]);
    }

    #[test]
    fn hermite_transform_is_consistent() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let hf = hermite(&a);
        assert_eq!(&hf.u * &a, hf.h);
        assert_eq!(hf.u.det().abs(), BigInt::one());
        assert_eq!(hf.rank(), 3);
        assert_eq!(hf.h.get(0, 0), &BigInt::from(2));
    }

    #[test]
    fn smith_diagonal() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith(&a);
        assert_eq!(&(&s.l * &a) * &s.r, s.d);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let z = smith(&m(&[vec![0, 0], vec![0, 3], vec![0, 0]]));
        assert_eq!(z.diagonal(), vec![BigInt::from(3), BigInt::zero()]);
    }

    #[test]
    fn kernels() {
        let a = m(&[vec![2, 4, 6], vec![1, 2, 3]]);
        let k = right_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let lk = left_kernel(&a);
        assert_eq!(lk.len(), 1);
    }
}
