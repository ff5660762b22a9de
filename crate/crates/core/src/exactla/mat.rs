use std::fmt;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a single exact field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Mat {
    pub fn from_scalars(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::ShapeError(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|s| s.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Mat { field, rows, cols, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Convenience constructor from integer rows; every row must have the same length.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Mat { field, rows: r, cols: c, data }
    }

    pub fn column(field: Field, entries: Vec<Scalar>) -> Result<Mat> {
        let n = entries.len();
        Mat::from_scalars(field, n, 1, entries)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Mat {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn assert_same_field(&self, other: &Mat) {
        assert_eq!(self.field, other.field, "matrix arithmetic across fields");
    }

    pub fn checked_mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    /// Matrix product; panics on shape or field mismatch.
    pub fn mul(&self, other: &Mat) -> Mat {
        self.checked_mul(other).expect("matrix product")
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.assert_same_field(other);
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.assert_same_field(other);
        assert_eq!(self.shape(), other.shape(), "matrix difference shape");
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: &Scalar, other: &Mat) {
        assert_eq!(self.shape(), other.shape());
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = &*a + &(s * b);
            }
        }
    }

    pub fn hstack(field: Field, rows: usize, blocks: &[&Mat]) -> Mat {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for r in 0..rows {
                for c in 0..b.cols {
                    out.data[r * cols + off + c] = b.get(r, c).clone();
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn vstack(field: Field, cols: usize, blocks: &[&Mat]) -> Mat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
        }
        Mat { field, rows, cols, data }
    }

    pub fn block_diag(field: Field, blocks: &[&Mat]) -> Mat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = b.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in r0..r0 + rows {
            data.extend_from_slice(&self.data[r * self.cols + c0..r * self.cols + c0 + cols]);
        }
        Mat {
            field: self.field,
            rows,
            cols,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Mat {
            field: self.field,
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Mat {
            field: self.field,
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(p) = (pr..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            if p != pr {
                for k in 0..m.cols {
                    m.data.swap(p * m.cols + k, pr * m.cols + k);
                }
            }
            let inv = m.get(pr, c).inv().expect("nonzero pivot");
            for k in c..m.cols {
                let idx = pr * m.cols + k;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for r in 0..m.rows {
                if r == pr {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for k in c..m.cols {
                    let pv = m.data[pr * m.cols + k].clone();
                    if pv.is_zero() {
                        continue;
                    }
                    let idx = r * m.cols + k;
                    m.data[idx] = &m.data[idx] - &(&factor * &pv);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().rank()
    }

    /// Columns form a basis of the right null space.
    pub fn kernel_basis(&self) -> Mat {
        let Rref { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, self.field.one());
            for (i, &p) in pivots.iter().enumerate() {
                let v = reduced.get(i, f);
                if !v.is_zero() {
                    k.set(p, j, -v);
                }
            }
        }
        k
    }

    /// Columns form a basis of the column space (the pivot columns of `self`).
    pub fn column_space_basis(&self) -> Mat {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }

    /// Some solution of `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeError(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        if b.iter().any(|s| s.field() != self.field) {
            return Err(Error::FieldMismatch);
        }
        let rhs = Mat {
            field: self.field,
            rows: self.rows,
            cols: 1,
            data: b.to_vec(),
        };
        Ok(self.solve_mat(&rhs)?.map(Mat::into_entries))
    }

    /// Some solution `X` of `self * X = rhs`, or `None` when inconsistent.
    pub fn solve_mat(&self, rhs: &Mat) -> Result<Option<Mat>> {
        if rhs.rows != self.rows {
            return Err(Error::ShapeError(format!(
                "right-hand side has {} rows, system has {}",
                rhs.rows, self.rows
            )));
        }
        if rhs.field != self.field {
            return Err(Error::FieldMismatch);
        }
        let aug = Mat::hstack(self.field, self.rows, &[self, rhs]);
        let Rref { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Mat::zeros(self.field, self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, reduced.get(i, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let x = self.solve_mat(&Mat::identity(self.field, n)).ok()??;
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// A matrix `L` with `L * self = I`, for `self` of full column rank.
    pub fn left_inverse(&self) -> Option<Mat> {
        let t = self.transpose();
        let pivots = t.rref().pivots;
        if pivots.len() != self.cols {
            return None;
        }
        let square = self.select_rows(&pivots);
        let inv = square.inverse()?;
        let mut l = Mat::zeros(self.field, self.cols, self.rows);
        for (j, &p) in pivots.iter().enumerate() {
            for i in 0..self.cols {
                l.set(i, p, inv.get(i, j).clone());
            }
        }
        Some(l)
    }

    /// A matrix `R` with `self * R = I`, for `self` of full row rank.
    pub fn right_inverse(&self) -> Option<Mat> {
        Some(self.transpose().left_inverse()?.transpose())
    }

    pub fn pow(&self, mut e: usize) -> Mat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Rank of a family of vectors of equal length.
pub fn rank_of_vectors(field: Field, len: usize, vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() || len == 0 {
        return 0;
    }
    let data: Vec<Scalar> = vectors.iter().flat_map(|v| v.iter().cloned()).collect();
    Mat {
        field,
        rows: vectors.len(),
        cols: len,
        data,
    }
    .rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn rref_examples() {
        let a = Mat::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let r = a.rref();
        assert_eq!(r.rank(), 1);
        assert_eq!(r.pivots, vec![0]);

        let id = Mat::identity(Q, 3);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.rank(), 3);

        let swap = Mat::from_i64(Q, &[&[0, 1], &[1, 0]]);
        let r = swap.rref();
        assert_eq!(r.reduced, Mat::identity(Q, 2));
        assert_eq!(r.rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Mat::zeros(Q, 2, 3).kernel_basis().cols(), 3);
        assert_eq!(Mat::identity(Q, 4).kernel_basis().cols(), 0);
        let k = Mat::from_i64(Q, &[&[1, 1]]).kernel_basis();
        assert_eq!(k.cols(), 1);
        // proportional to (1, -1)
        assert_eq!(k.get(0, 0), &(-k.get(1, 0)));
        assert!(!k.get(0, 0).is_zero());
    }

    #[test]
    fn solve_examples() {
        let b = vec![Q.from_i64(3), Q.from_i64(-7)];
        assert_eq!(Mat::identity(Q, 2).solve(&b).unwrap(), Some(b.clone()));

        let a = Mat::from_i64(Q, &[&[1, 1]]);
        let x = a.solve(&[Q.from_i64(2)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], Q.from_i64(2));

        let a = Mat::from_i64(Q, &[&[1], &[0]]);
        assert_eq!(a.solve(&[Q.zero(), Q.one()]).unwrap(), None);
        assert!(matches!(a.solve(&[Q.zero()]), Err(Error::ShapeError(_))));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f7 = Field::prime(7).unwrap();
        let r = Mat::from_scalars(Q, 1, 2, vec![Q.one(), f7.one()]);
        assert_eq!(r, Err(Error::FieldMismatch));
    }

    #[test]
    fn one_sided_inverses() {
        let a = Mat::from_i64(Q, &[&[1, 0], &[2, 1], &[0, 3]]);
        let l = a.left_inverse().unwrap();
        assert!(l.mul(&a).is_identity());
        let t = a.transpose();
        assert!(t.mul(&t.right_inverse().unwrap()).is_identity());
    }
}
