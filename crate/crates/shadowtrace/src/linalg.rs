//! Exact dense linear algebra: rational matrices and Smith normal form.
//!
//! Everything here is arbitrary precision.  [`QMat`] is a dense matrix of
//! [`BigRational`] used for all 2-cell data and shadow morphisms; [`ZMat`]
//! is a dense matrix of [`BigInt`] used by the Smith normal form, which in
//! turn computes cokernel presentations of shadows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Exact scalar used throughout the engine.
pub type Scalar = BigRational;

/// Build a scalar from an integer.
pub fn q(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Build a scalar from a numerator/denominator pair.
pub fn qr(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A dense matrix of exact rationals, stored row-major.
///
/// A `QMat` with `rows` rows and `cols` columns represents a linear map
/// from a free module of rank `cols` to one of rank `rows`, acting on
/// column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Build from rows of integers; panics if the rows are ragged.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, q(x));
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }
                })
            })
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = QMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(rhs.data.iter()) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(rhs.data.iter()) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> QMat {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= s;
        }
        out
    }

    pub fn transpose(&self) -> QMat {
        let mut out = QMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product, row-major block layout.
    pub fn kron(&self, rhs: &QMat) -> QMat {
        let mut out = QMat::zero(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * b);
                    }
                }
            }
        }
        out
    }

    /// Column `j` as a fresh column matrix.
    pub fn column(&self, j: usize) -> QMat {
        let mut out = QMat::zero(self.rows, 1);
        for i in 0..self.rows {
            out.set(i, 0, self.get(i, j).clone());
        }
        out
    }

    /// True if every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }

    /// Convert to an integer matrix; panics on non-integral entries.
    pub fn to_zmat(&self) -> ZMat {
        assert!(self.is_integral(), "matrix has non-integer entries");
        ZMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.numer().clone()).collect(),
        }
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ZMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl ZMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ZMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &ZMat) -> ZMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = ZMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    pub fn to_qmat(&self) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a += c * row b
    fn add_row(&mut self, a: usize, b: usize, c: &BigInt) {
        for j in 0..self.cols {
            let x = self.get(b, j).clone() * c;
            let cur = self.get(a, j).clone();
            self.set(a, j, cur + x);
        }
    }

    /// col a += c * col b
    fn add_col(&mut self, a: usize, b: usize, c: &BigInt) {
        for i in 0..self.rows {
            let x = self.get(i, b).clone() * c;
            let cur = self.get(i, a).clone();
            self.set(i, a, cur + x);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let x = -self.get(a, j).clone();
            self.set(a, j, x);
        }
    }
}

impl fmt::Debug for ZMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of a Smith normal form computation: `u * a * v = d` with `u`, `v`
/// unimodular and `d` diagonal with each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: ZMat,
    pub u: ZMat,
    pub v: ZMat,
    /// Nonnegative diagonal entries of `d`, padded with zeros to
    /// `min(rows, cols)` length.
    pub diag: Vec<BigInt>,
}

/// Compute the Smith normal form of an integer matrix by unimodular row and
/// column operations, tracking the change-of-basis matrices.
pub fn smith_normal_form(a: &ZMat) -> Snf {
    let mut d = a.clone();
    let mut u = ZMat::identity(a.rows);
    let mut v = ZMat::identity(a.cols);
    let n = a.rows.min(a.cols);

    for t in 0..n {
        // Find a pivot: the nonzero entry of minimal absolute value in the
        // remaining submatrix.
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if !d.get(i, j).is_zero() {
                        match pivot {
                            None => pivot = Some((i, j)),
                            Some((pi, pj)) => {
                                if d.get(i, j).abs() < d.get(pi, pj).abs() {
                                    pivot = Some((i, j));
                                }
                            }
                        }
                    }
                }
            }
            let (pi, pj) = match pivot {
                None => break, // remaining submatrix is zero
                Some(p) => p,
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // Eliminate the rest of the row and column by division; if a
            // remainder appears, the quotient step shrinks the pivot and we
            // loop again.
            let mut clean = true;
            for i in (t + 1)..d.rows {
                if !d.get(i, t).is_zero() {
                    let c = -(d.get(i, t) / d.get(t, t));
                    d.add_row(i, t, &c);
                    u.add_row(i, t, &c);
                    if !d.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..d.cols {
                if !d.get(t, j).is_zero() {
                    let c = -(d.get(t, j) / d.get(t, t));
                    d.add_col(j, t, &c);
                    v.add_col(j, t, &c);
                    if !d.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Pivot divides everything in its row/column. Enforce the
            // divisibility condition on the remaining block: if some entry
            // is not divisible by the pivot, fold its row in and restart.
            let mut fixed = true;
            'outer: for i in (t + 1)..d.rows {
                for j in (t + 1)..d.cols {
                    if !(d.get(i, j) % d.get(t, t)).is_zero() {
                        d.add_row(t, i, &BigInt::one());
                        u.add_row(t, i, &BigInt::one());
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d.get(t, t).sign() == num_bigint::Sign::Minus {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    let diag: Vec<BigInt> = (0..n).map(|i| d.get(i, i).clone()).collect();
    Snf { d, u, v, diag }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_snf() {
        let a = ZMat::identity(3);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, ZMat::identity(3));
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    }

    #[test]
    fn snf_two_by_two() {
        // Elementary-operations oracle: diag(2, 4).
        let a = QMat::from_int_rows(&[&[2, 4], &[6, 8]]).to_zmat();
        let s = smith_normal_form(&a);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    }

    #[test]
    fn snf_zero_matrix() {
        let a = ZMat::zero(3, 2);
        let s = smith_normal_form(&a);
        assert!(s.diag.iter().all(|d| d.is_zero()));
    }

    #[test]
    fn snf_random_uav_and_divisibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let mut a = ZMat::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a.set(i, j, BigInt::from(rng.gen_range(-9i64..=9)));
                }
            }
            let s = smith_normal_form(&a);
            assert_eq!(s.u.mul(&a).mul(&s.v), s.d, "UAV != D for {:?}", a);
            for w in s.diag.windows(2) {
                if !w[0].is_zero() {
                    assert!((&w[1] % &w[0]).is_zero(), "divisibility fails: {:?}", s.diag);
                } else {
                    assert!(w[1].is_zero(), "zero must come last: {:?}", s.diag);
                }
            }
            // Off-diagonal of D is zero.
            for i in 0..rows {
                for j in 0..cols {
                    if i != j {
                        assert!(s.d.get(i, j).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn qmat_kron_and_mul() {
        let a = QMat::from_int_rows(&[&[1, 2], &[3, 4]]);
        let b = QMat::from_int_rows(&[&[0, 1], &[1, 0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, QMat::from_int_rows(&[&[2, 1], &[4, 3]]));
        let k = a.kron(&QMat::identity(2));
        assert_eq!(k.rows, 4);
        assert_eq!(*k.get(0, 0), q(1));
        assert_eq!(*k.get(1, 1), q(1));
        assert_eq!(*k.get(0, 2), q(2));
    }
}
