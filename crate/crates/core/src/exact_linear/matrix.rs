//! Dense matrices over [`Scalar`], with fraction-field elimination.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::exact_linear::scalar::Scalar;

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect(),
            cols,
        )
    }

    /// Column matrix from a vector.
    pub fn column(v: &[Scalar]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn diagonal_blocks(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.rows + b.rows;
        let m = a.cols + b.cols;
        Matrix::from_fn(n, m, |i, j| {
            if i < a.rows && j < a.cols {
                a[(i, j)].clone()
            } else if i >= a.rows && j >= a.cols {
                b[(i - a.rows, j - a.cols)].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_slice(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        self.map(|x| x * s)
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.map(|x| -x)
    }

    /// `M·v` for a column vector `v`.
    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| dot(self.row_slice(i), v))
            .collect()
    }

    /// `v·M` for a row vector `v`.
    pub fn apply_left(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| {
                let mut acc = Scalar::zero();
                for (i, vi) in v.iter().enumerate() {
                    if !vi.is_zero() && !self[(i, j)].is_zero() {
                        acc += &(vi * &self[(i, j)]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks the rows of `self` above those of `o`.
    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows);
        Matrix::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                o[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_rows(idx.iter().map(|&i| self.row(i)).collect(), self.cols)
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

    /// `row[target] += factor · row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if !s.is_zero() {
                let d = s * factor;
                self.data[target * self.cols + j] += &d;
            }
        }
    }

    /// `col[target] += factor · col[source]`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + source];
            if !s.is_zero() {
                let d = s * factor;
                self.data[i * self.cols + target] += &d;
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, factor: &Scalar) {
        for j in 0..self.cols {
            let x = &self.data[i * self.cols + j] * factor;
            self.data[i * self.cols + j] = x;
        }
    }

    pub fn scale_col(&mut self, j: usize, factor: &Scalar) {
        for i in 0..self.rows {
            let x = &self.data[i * self.cols + j] * factor;
            self.data[i * self.cols + j] = x;
        }
    }

    /// Reduced row echelon form over the fraction field, with pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = -&m[(i, c)];
                    m.add_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M·x = 0}` over the fraction field.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (k, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(k, f)];
                }
                v
            })
            .collect()
    }

    /// Basis of `{y : y·M = 0}` (left kernel).
    pub fn left_nullspace(&self) -> Vec<Vector> {
        self.transpose().nullspace()
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Scalar::zero();
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = -&(&m[(i, c)] * &inv);
                    m.add_row_multiple(i, c, &f);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug = self.hstack(&Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Solves `x·self = v` for a row vector `x`, if a solution exists.
    pub fn solve_left(&self, v: &[Scalar]) -> Option<Vector> {
        self.transpose().solve(v)
    }

    /// Solves `self·x = v`, returning one solution if consistent.
    pub fn solve(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.rows);
        let aug = self.hstack(&Matrix::column(v));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (k, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(k, self.cols)].clone();
        }
        Some(x)
    }

    /// Coefficients of the characteristic polynomial `det(t·I − M)`, constant term first.
    pub fn char_poly(&self) -> Vec<Scalar> {
        // Faddeev–LeVerrier
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut mk = Matrix::zeros(n, n);
        for k in 1..=n {
            let prev = coeffs[n - k + 1].clone();
            mk = &(self * &mk) + &Matrix::identity(n).scale(&prev);
            let am = self * &mk;
            let tr = am.trace();
            coeffs[n - k] = -(&tr / &Scalar::from_int(k as i64));
        }
        coeffs
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    pub fn pow(&self, e: u64) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix dimension mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k * o.cols + j];
                    if !b.is_zero() {
                        let prod = a * b;
                        out.data[i * o.cols + j] += &prod;
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Add for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        Matrix::add(self, o)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.determinant(), Scalar::one());
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!(Matrix::from_i64(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = Matrix::from_i64(&[vec![1, 1, 0], vec![2, 2, 0]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.apply(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn char_poly_of_rotation() {
        // order-3 rotation: t^2 + t + 1
        let m = Matrix::from_i64(&[vec![0, -1], vec![1, -1]]);
        let cp = m.char_poly();
        assert_eq!(cp, vec![Scalar::one(), Scalar::one(), Scalar::one()]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_i64(&[vec![1, 0], vec![0, 0]]);
        assert!(m.solve(&[Scalar::from_int(3), Scalar::zero()]).is_some());
        assert!(m.solve(&[Scalar::from_int(3), Scalar::one()]).is_none());
    }
}
