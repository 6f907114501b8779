//! Gaussian elimination and friends over an arbitrary [`Field`].

use super::field::Field;
use super::matrix::Mat;
use super::poly::{self, Poly};

pub fn zeros<F: Field>(f: &F, r: usize, c: usize) -> Mat<F::Elem> {
    Mat::from_fn(r, c, |_, _| f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Mat<F::Elem> {
    Mat::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
}

pub fn mat_mul<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!(a.ncols(), b.nrows(), "matrix product dimension mismatch");
    let mut out = zeros(f, a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            let x = a.get(i, k);
            if f.is_zero(x) {
                continue;
            }
            for j in 0..b.ncols() {
                let y = b.get(k, j);
                if !f.is_zero(y) {
                    let v = f.add(out.get(i, j), &f.mul(x, y));
                    out.set(i, j, v);
                }
            }
        }
    }
    out
}

pub fn mat_add<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| f.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_sub<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| f.sub(a.get(i, j), b.get(i, j)))
}

pub fn mat_scale<F: Field>(f: &F, a: &Mat<F::Elem>, c: &F::Elem) -> Mat<F::Elem> {
    a.map(|x| f.mul(x, c))
}

/// `a - c I`.
pub fn shift<F: Field>(f: &F, a: &Mat<F::Elem>, c: &F::Elem) -> Mat<F::Elem> {
    let mut out = a.clone();
    for i in 0..a.nrows().min(a.ncols()) {
        let v = f.sub(a.get(i, i), c);
        out.set(i, i, v);
    }
    out
}

pub fn mat_pow<F: Field>(f: &F, a: &Mat<F::Elem>, mut e: u64) -> Mat<F::Elem> {
    let mut base = a.clone();
    let mut acc = identity(f, a.nrows());
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(f, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(f, &base, &base);
        }
    }
    acc
}

pub fn mat_vec<F: Field>(f: &F, a: &Mat<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    (0..a.nrows())
        .map(|i| a.row(i).iter().zip(v).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y))))
        .collect()
}

pub fn is_zero_mat<F: Field>(f: &F, a: &Mat<F::Elem>) -> bool {
    a.data().iter().all(|x| f.is_zero(x))
}

pub fn commute<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> bool {
    mat_mul(f, a, b) == mat_mul(f, b, a)
}

/// Evaluates a polynomial at a square matrix (Horner).
pub fn poly_at<F: Field>(f: &F, p: &Poly<F::Elem>, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    let n = a.nrows();
    let mut acc = zeros(f, n, n);
    for c in p.iter().rev() {
        acc = mat_mul(f, &acc, a);
        for i in 0..n {
            let v = f.add(acc.get(i, i), c);
            acc.set(i, i, v);
        }
    }
    acc
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(f: &F, a: &Mat<F::Elem>) -> (Mat<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(p, r);
        let inv = f.inv(m.get(r, c)).unwrap();
        for j in c..cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..cols {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Mat<F::Elem>) -> usize {
    rref(f, a).1.len()
}

/// Basis of the right kernel, one vector per free column, each with a 1 in
/// its free position.
pub fn kernel<F: Field>(f: &F, a: &Mat<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (m, pivots) = rref(f, a);
    let cols = a.ncols();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Kernel basis as the columns of a matrix.
pub fn kernel_matrix<F: Field>(f: &F, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    let k = kernel(f, a);
    Mat::from_cols(&k, a.ncols())
}

/// Solves `a x = b` for a matrix right-hand side; `None` if inconsistent.
/// Free variables are set to zero.
pub fn solve<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    assert_eq!(a.nrows(), b.nrows());
    let n = a.ncols();
    let aug = a.hstack(b);
    let (m, pivots) = rref(f, &aug);
    if pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = zeros(f, n, b.ncols());
    for (r, &pc) in pivots.iter().enumerate() {
        for j in 0..b.ncols() {
            x.set(pc, j, m.get(r, n + j).clone());
        }
    }
    Some(x)
}

pub fn inverse<F: Field>(f: &F, a: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    if !a.is_square() {
        return None;
    }
    let n = a.nrows();
    if rank(f, a) < n {
        return None;
    }
    solve(f, a, &identity(f, n))
}

/// Matrix of `op` restricted to the invariant column span of `basis`
/// (full column rank), i.e. the `r` with `op * basis = basis * r`.
pub fn restrict<F: Field>(f: &F, op: &Mat<F::Elem>, basis: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    let image = mat_mul(f, op, basis);
    let r = solve(f, basis, &image)?;
    if mat_mul(f, basis, &r) == image {
        Some(r)
    } else {
        None
    }
}

/// Basis (columns) of the intersection of two column spaces.
pub fn intersect_spans<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    let n = a.nrows();
    if a.ncols() == 0 || b.ncols() == 0 {
        return zeros(f, n, 0);
    }
    let stacked = a.hstack(&mat_scale(f, b, &f.neg(&f.one())));
    let ker = kernel(f, &stacked);
    let vecs: Vec<Vec<F::Elem>> = ker.iter().map(|k| mat_vec(f, a, &k[..a.ncols()])).collect();
    let m = Mat::from_cols(&vecs, n);
    column_basis(f, &m)
}

/// Independent columns spanning the same space (the pivot columns).
pub fn column_basis<F: Field>(f: &F, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    let (_, pivots) = rref(f, a);
    a.select(&(0..a.nrows()).collect::<Vec<_>>(), &pivots)
}

/// Characteristic polynomial `det(x I - a)` via reduction to Hessenberg form.
pub fn charpoly<F: Field>(f: &F, a: &Mat<F::Elem>) -> Poly<F::Elem> {
    assert!(a.is_square());
    let n = a.nrows();
    let mut h = a.clone();
    // similarity transforms to upper Hessenberg form
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !f.is_zero(h.get(i, m - 1))) else {
            continue;
        };
        if i != m {
            h.swap_rows(i, m);
            h.swap_cols(i, m);
        }
        let pivot_inv = f.inv(h.get(m, m - 1)).unwrap();
        for i in m + 1..n {
            let u = f.mul(h.get(i, m - 1), &pivot_inv);
            if f.is_zero(&u) {
                continue;
            }
            for j in 0..n {
                let v = f.sub(h.get(i, j), &f.mul(&u, h.get(m, j)));
                h.set(i, j, v);
            }
            for j in 0..n {
                let v = f.add(h.get(j, m), &f.mul(&u, h.get(j, i)));
                h.set(j, m, v);
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod sub-diagonal) p_{i-1}
    let mut ps: Vec<Poly<F::Elem>> = vec![poly::constant(f, f.one())];
    for k in 0..n {
        let lin = poly::normalized(f, vec![f.neg(h.get(k, k)), f.one()]);
        let mut pk = poly::mul(f, &lin, &ps[k]);
        let mut t = f.one();
        for i in (0..k).rev() {
            t = f.mul(&t, h.get(i + 1, i));
            let c = f.mul(&t, h.get(i, k));
            pk = poly::sub(f, &pk, &poly::scale(f, &ps[i], &c));
        }
        ps.push(pk);
    }
    ps.pop().unwrap()
}

/// Common kernel of several matrices with the same column count.
pub fn common_kernel<F: Field>(f: &F, mats: &[Mat<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    if mats.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
    }
    let mut stacked = mats[0].clone();
    for m in &mats[1..] {
        stacked = stacked.vstack(m);
    }
    kernel(f, &stacked)
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_first<F: Field>(f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
    match v.iter().find(|x| !f.is_zero(x)) {
        None => v.to_vec(),
        Some(lead) => {
            let inv = f.inv(lead).unwrap();
            v.iter().map(|x| f.mul(x, &inv)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::{FiniteField, Rationals};
    use num_rational::BigRational;

    fn q(rows: &[Vec<i64>]) -> Mat<BigRational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect())
    }

    #[test]
    fn charpoly_of_companion() {
        // companion of x^3 - 2x + 5
        let a = q(&[vec![0, 0, -5], vec![1, 0, 2], vec![0, 1, 0]]);
        let p = charpoly(&Rationals, &a);
        let want: Vec<BigRational> = [5, -2, 0, 1].iter().map(|&x| BigRational::from_integer(x.into())).collect();
        assert_eq!(p, want);
        assert!(is_zero_mat(&Rationals, &poly_at(&Rationals, &p, &a)));
    }

    #[test]
    fn kernel_and_solve() {
        let f = FiniteField::prime(5).unwrap();
        let a = Mat::from_rows(vec![
            vec![f.from_u64(1), f.from_u64(2), f.from_u64(3)],
            vec![f.from_u64(2), f.from_u64(4), f.from_u64(2)],
        ]);
        let k = kernel(&f, &a);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&f, &a, &k[0]).iter().all(|x| f.is_zero(x)));
        let inv = inverse(&f, &Mat::from_rows(vec![vec![f.from_u64(2), f.from_u64(1)], vec![f.from_u64(1), f.from_u64(1)]])).unwrap();
        assert_eq!(inv.get(0, 0), &f.from_u64(1));
    }
}
