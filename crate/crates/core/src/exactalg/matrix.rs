use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Mat<BigInt>;
pub type RatMatrix = Mat<BigRational>;

impl<T> Mat<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Clone> Mat<T> {
    /// Builds from rows; an empty list gives a 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// Builds from column vectors of a fixed height.
    pub fn from_cols(cols: &[Vec<T>], nrows: usize) -> Self {
        for c in cols {
            assert_eq!(c.len(), nrows, "column has wrong height");
        }
        Mat::from_fn(nrows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

macro_rules! ring_matrix {
    ($t:ty) => {
        impl Mat<$t> {
            pub fn zeros(rows: usize, cols: usize) -> Self {
                Mat::from_fn(rows, cols, |_, _| <$t>::zero())
            }

            pub fn identity(n: usize) -> Self {
                Mat::from_fn(n, n, |i, j| if i == j { <$t>::one() } else { <$t>::zero() })
            }

            pub fn diag(entries: &[$t]) -> Self {
                let n = entries.len();
                Mat::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { <$t>::zero() })
            }

            pub fn is_zero(&self) -> bool {
                self.data.iter().all(|x| x.is_zero())
            }

            pub fn scale(&self, c: &$t) -> Self {
                self.map(|x| c * x)
            }

            pub fn mul_vec(&self, v: &[$t]) -> Vec<$t> {
                assert_eq!(v.len(), self.cols);
                (0..self.rows)
                    .map(|i| {
                        let mut acc = <$t>::zero();
                        for (a, b) in self.row(i).iter().zip(v) {
                            if !a.is_zero() && !b.is_zero() {
                                acc += a * b;
                            }
                        }
                        acc
                    })
                    .collect()
            }

            pub fn trace(&self) -> $t {
                let mut acc = <$t>::zero();
                for i in 0..self.rows.min(self.cols) {
                    acc += self.get(i, i);
                }
                acc
            }

            pub fn pow(&self, mut e: u64) -> Self {
                assert!(self.is_square());
                let mut base = self.clone();
                let mut acc = Self::identity(self.rows);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = &acc * &base;
                    }
                    e >>= 1;
                    if e > 0 {
                        base = &base * &base;
                    }
                }
                acc
            }

            /// True when `self * other == other * self`.
            pub fn commutes_with(&self, other: &Self) -> bool {
                (self * other) == (other * self)
            }
        }

        impl<'a> Mul<&'a Mat<$t>> for &'a Mat<$t> {
            type Output = Mat<$t>;

            fn mul(self, rhs: &'a Mat<$t>) -> Mat<$t> {
                assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
                let mut out = vec![<$t>::zero(); self.rows * rhs.cols];
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let a = self.get(i, k);
                        if a.is_zero() {
                            continue;
                        }
                        let orow = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
                        for (o, b) in orow.iter_mut().zip(rhs.row(k)) {
                            if !b.is_zero() {
                                *o += a * b;
                            }
                        }
                    }
                }
                Mat { rows: self.rows, cols: rhs.cols, data: out }
            }
        }

        impl<'a> Add<&'a Mat<$t>> for &'a Mat<$t> {
            type Output = Mat<$t>;

            fn add(self, rhs: &'a Mat<$t>) -> Mat<$t> {
                assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
                Mat {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
                }
            }
        }

        impl<'a> Sub<&'a Mat<$t>> for &'a Mat<$t> {
            type Output = Mat<$t>;

            fn sub(self, rhs: &'a Mat<$t>) -> Mat<$t> {
                assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
                Mat {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
                }
            }
        }
    };
}

ring_matrix!(BigInt);
ring_matrix!(BigRational);

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Reduction modulo `m` into `[0, m)`.
    pub fn mod_floor(&self, m: &BigInt) -> IntMatrix {
        self.map(|x| x.mod_floor(m))
    }
}

impl RatMatrix {
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.is_integral() {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    /// Least common multiple of all entry denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64_rows(&[vec![2, -1, 3], vec![0, 4, 1], vec![5, 2, -2]]);
        // 2(4*-2 - 1*2) - (-1)(0*-2 - 1*5) + 3(0*2 - 4*5)
        assert_eq!(m.det(), BigInt::from(2 * (-10) - 5 + 3 * (-20)));
        let z = IntMatrix::from_i64_rows(&[vec![0, 1], vec![0, 2]]);
        assert!(z.det().is_zero());
        let sw = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(sw.det(), BigInt::from(-1));
    }

    #[test]
    fn product_and_power() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
        let p = m.pow(5);
        assert_eq!(p, IntMatrix::from_i64_rows(&[vec![1, 5], vec![0, 1]]));
        assert_eq!(&m * &IntMatrix::identity(2), m);
        assert!(m.commutes_with(&p));
    }
}
