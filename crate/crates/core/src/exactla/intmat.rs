use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mat::Mat;
use super::scalar::Field;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<BigInt>]) -> IntMat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged integer rows");
            data.extend(r.iter().cloned());
        }
        IntMat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> IntMat {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        IntMat::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "integer matrix product shape");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += x * a;
                }
            }
        }
        out
    }

    pub fn to_mat(&self, field: Field) -> Mat {
        let entries = self.data.iter().map(|v| field.from_bigint(v)).collect();
        Mat::from_scalars(field, self.rows, self.cols, entries).expect("well-formed")
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * q;
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * q;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = -&self.data[idx];
        }
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// `u * a * v = d`, with `v_inv` the inverse of `v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
    pub v_inv: IntMat,
}

impl Smith {
    /// Diagonal entries of `d` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMat) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMat::identity(m);
    let mut v = IntMat::identity(n);
    let mut v_inv = IntMat::identity(n);

    // Column operations on `d` are mirrored on `v`; their inverses act on the rows of `v_inv`.
    let swap_c = |d: &mut IntMat, v: &mut IntMat, vi: &mut IntMat, a: usize, b: usize| {
        d.swap_cols(a, b);
        v.swap_cols(a, b);
        vi.swap_rows(a, b);
    };
    let add_c = |d: &mut IntMat, v: &mut IntMat, vi: &mut IntMat, dst: usize, src: usize, q: &BigInt| {
        d.add_col(dst, src, q);
        v.add_col(dst, src, q);
        vi.add_row(src, dst, &-q);
    };

    for t in 0..m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        swap_c(&mut d, &mut v, &mut v_inv, t, pj);

        loop {
            let p = d.get(t, t).clone();
            let mut residue = false;
            for i in t + 1..m {
                let q = d.get(i, t).div_floor(&p);
                let q = -q;
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                residue |= !d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = -d.get(t, j).div_floor(&p);
                add_c(&mut d, &mut v, &mut v_inv, j, t, &q);
                residue |= !d.get(t, j).is_zero();
            }
            if residue {
                // a remainder strictly smaller than the pivot appeared in row or column t
                let mut best = (t, t);
                for i in t + 1..m {
                    if !d.get(i, t).is_zero() && d.get(i, t).abs() < d.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !d.get(t, j).is_zero() && d.get(t, j).abs() < d.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    swap_c(&mut d, &mut v, &mut v_inv, t, best.1);
                }
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { u, d, v, v_inv }
}

/// The abelian group `Z^n / rowspan(relations)` with a canonical coset map.
#[derive(Clone, Debug)]
pub struct K0Presentation {
    n_generators: usize,
    relations: IntMat,
    smith: Smith,
    /// Diagonal of the normal form, padded with zeros to length `n_generators`.
    diag: Vec<BigInt>,
}

pub fn quotient_group(relations: &IntMat, n_generators: usize) -> K0Presentation {
    assert_eq!(relations.cols, n_generators, "relation vectors have the wrong length");
    let smith = smith_normal_form(relations);
    let mut diag = smith.diagonal();
    diag.resize(n_generators, BigInt::zero());
    K0Presentation {
        n_generators,
        relations: relations.clone(),
        smith,
        diag,
    }
}

impl K0Presentation {
    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn relations(&self) -> &IntMat {
        &self.relations
    }

    pub fn smith(&self) -> &Smith {
        &self.smith
    }

    pub fn free_rank(&self) -> usize {
        self.diag.iter().filter(|d| d.is_zero()).count()
    }

    /// Invariant factors greater than one, in divisibility order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }

    /// All nonzero diagonal entries, including the trivial ones.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn is_free(&self) -> bool {
        self.torsion().is_empty()
    }

    /// Coordinates in the normal-form basis, torsion parts reduced into `[0, d_i)`.
    pub fn reduced_coordinates(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n_generators, "vector length");
        let mut w = self.smith.v.vec_mul(v);
        for (x, d) in w.iter_mut().zip(&self.diag) {
            if !d.is_zero() {
                *x = x.mod_floor(d);
            }
        }
        w
    }

    /// Unique representative of the coset `v + rowspan(relations)`.
    pub fn canonical(&self, v: &[BigInt]) -> Vec<BigInt> {
        let w = self.reduced_coordinates(v);
        self.smith.v_inv.vec_mul(&w)
    }

    pub fn same_coset(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        self.reduced_coordinates(a) == self.reduced_coordinates(b)
    }

    pub fn is_zero_class(&self, v: &[BigInt]) -> bool {
        self.reduced_coordinates(v).iter().all(Zero::is_zero)
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.torsion().iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
