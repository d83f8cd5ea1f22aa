//! Dense matrices of [`RationalExpr`] entries.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use crate::error::{Error, Result};
use crate::symexpr::{Polynomial, RationalExpr};

#[derive(Clone, PartialEq, Eq)]
pub struct SymMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RationalExpr>,
}

impl SymMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SymMatrix {
            rows,
            cols,
            data: alloc::vec![RationalExpr::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = RationalExpr::one();
        }
        m
    }

    pub fn diagonal(entries: &[RationalExpr]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RationalExpr>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows"));
        }
        Ok(SymMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> RationalExpr>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        SymMatrix { rows, cols, data }
    }

    pub fn column_vector(v: &[RationalExpr]) -> Self {
        SymMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
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

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Result<&RationalExpr> {
        if row >= self.rows || col >= self.cols {
            return Err(self.out_of_range(row, col));
        }
        Ok(&self.data[row * self.cols + col])
    }

    pub fn set(&mut self, row: usize, col: usize, value: RationalExpr) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(self.out_of_range(row, col));
        }
        self.data[row * self.cols + col] = value;
        Ok(())
    }

    fn out_of_range(&self, row: usize, col: usize) -> Error {
        Error::IndexOutOfRange {
            row,
            col,
            rows: self.rows,
            cols: self.cols,
        }
    }

    pub fn row(&self, i: usize) -> &[RationalExpr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<RationalExpr> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<RationalExpr>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> SymMatrix {
        SymMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<F: FnMut(&RationalExpr) -> RationalExpr>(&self, f: F) -> SymMatrix {
        SymMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RationalExpr::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RationalExpr)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, e)| (k / cols.max(1), k % cols.max(1), e))
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip<F: Fn(&RationalExpr, &RationalExpr) -> RationalExpr>(&self, other: &SymMatrix, f: F) -> Result<SymMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("elementwise operands differ in shape"));
        }
        Ok(SymMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn neg(&self) -> SymMatrix {
        self.map(|e| -e)
    }

    pub fn mul(&self, other: &SymMatrix) -> Result<SymMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch("inner dimensions differ"));
        }
        Ok(SymMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .filter(|&k| !self[(i, k)].is_zero() && !other[(k, j)].is_zero())
                .map(|k| &self[(i, k)] * &other[(k, j)])
                .sum()
        }))
    }

    pub fn mul_vec(&self, v: &[RationalExpr]) -> Result<Vec<RationalExpr>> {
        if self.cols != v.len() {
            return Err(Error::ShapeMismatch("vector length differs from column count"));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[RationalExpr]) -> Result<Vec<RationalExpr>> {
        if self.rows != v.len() {
            return Err(Error::ShapeMismatch("vector length differs from row count"));
        }
        Ok((0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .filter(|&i| !v[i].is_zero() && !self[(i, j)].is_zero())
                    .map(|i| &v[i] * &self[(i, j)])
                    .sum()
            })
            .collect())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Reorders rows and columns: entry `(perm[i], perm[j])` of the result is
    /// entry `(i, j)` of `self`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Result<SymMatrix> {
        if !self.is_square() || perm.len() != self.rows {
            return Err(Error::ShapeMismatch("permutation length differs from matrix order"));
        }
        let mut out = SymMatrix::zeros(self.rows, self.cols);
        for (i, j, e) in self.entries() {
            out.data[perm[i] * self.cols + perm[j]] = e.clone();
        }
        Ok(out)
    }

    /// The matrix with row `row` and column `col` removed.
    pub fn deletion(&self, row: usize, col: usize) -> Result<SymMatrix> {
        if row >= self.rows || col >= self.cols {
            return Err(self.out_of_range(row, col));
        }
        let rs: Vec<usize> = (0..self.rows).filter(|&i| i != row).collect();
        let cs: Vec<usize> = (0..self.cols).filter(|&j| j != col).collect();
        Ok(self.submatrix(&rs, &cs))
    }

    /// Determinant of the `(row, col)` deletion. The empty determinant is 1.
    pub fn minor(&self, row: usize, col: usize) -> Result<RationalExpr> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("minor of a non-square matrix"));
        }
        self.deletion(row, col)?.determinant()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Each row is first scaled by a common denominator of its entries so the
    /// elimination runs over polynomials, where every Bareiss division is
    /// exact.
    pub fn determinant(&self) -> Result<RationalExpr> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RationalExpr::one());
        }
        let mut scale = Polynomial::one();
        let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let mut common = Polynomial::one();
            for e in row {
                let d = e.denominator();
                if common.div_exact(d).is_none() {
                    common = &common * d;
                }
            }
            rows.push(
                row.iter()
                    .map(|e| {
                        let q = common.div_exact(e.denominator()).expect("common denominator");
                        e.numerator() * &q
                    })
                    .collect(),
            );
            scale = &scale * &common;
        }
        let det = bareiss(rows);
        Ok(RationalExpr::new(det, scale).expect("row scales are nonzero"))
    }
}

fn bareiss(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    let mut negate = false;
    let mut prev = Polynomial::one();
    for k in 0..n {
        // Sparsest nonzero pivot keeps intermediate expressions small.
        let pivot = (k..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].len());
        let Some(p) = pivot else {
            return Polynomial::zero();
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Polynomial::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = RationalExpr;
    fn index(&self, (i, j): (usize, usize)) -> &RationalExpr {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for SymMatrix {
    /// Aligned text, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use alloc::string::{String, ToString};
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let mut widths = alloc::vec![0usize; self.cols];
        for (k, c) in cells.iter().enumerate() {
            let w = c.chars().count();
            widths[k % self.cols] = widths[k % self.cols].max(w);
        }
        for i in 0..self.rows {
            f.write_str("[ ")?;
            for j in 0..self.cols {
                let c = &cells[i * self.cols + j];
                if j > 0 {
                    f.write_str("  ")?;
                }
                write!(f, "{c:>w$}", w = widths[j])?;
            }
            f.write_str(" ]\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymMatrix {}x{}\n{}", self.rows, self.cols, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::Rational;

    fn s(n: &str) -> RationalExpr {
        RationalExpr::symbol(n)
    }

    fn int(c: i64) -> RationalExpr {
        RationalExpr::from_int(c)
    }

    fn ints(rows: &[&[i64]]) -> SymMatrix {
        SymMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect()).unwrap()
    }

    /// Permutation expansion; exponential but independent of elimination.
    fn leibniz(m: &SymMatrix) -> RationalExpr {
        fn go(m: &SymMatrix, row: usize, used: &mut Vec<bool>, sign: i64) -> RationalExpr {
            let n = m.rows();
            if row == n {
                return int(sign);
            }
            let mut acc = RationalExpr::zero();
            for c in 0..n {
                if used[c] {
                    continue;
                }
                let inversions = used[c + 1..].iter().filter(|u| **u).count() as i64;
                let sgn = if inversions % 2 == 0 { sign } else { -sign };
                used[c] = true;
                let rest = go(m, row + 1, used, sgn);
                used[c] = false;
                acc = &acc + &(&m[(row, c)] * &rest);
            }
            acc
        }
        go(m, 0, &mut alloc::vec![false; m.rows()], 1)
    }

    #[test]
    fn empty_determinant_is_one() {
        let m = SymMatrix::from_rows(alloc::vec![alloc::vec![s("x")]]).unwrap();
        assert_eq!(m.minor(0, 0).unwrap(), RationalExpr::one());
    }

    #[test]
    fn integer_determinants_match_leibniz() {
        let m = ints(&[&[2, -1, 0, 3], &[1, 4, -2, 0], &[0, 5, 1, -1], &[3, 0, 2, 2]]);
        assert_eq!(m.determinant().unwrap(), leibniz(&m));
        // Laplace expansion along the first row.
        let expansion: RationalExpr = (0..4)
            .map(|j| {
                let sgn = if j % 2 == 0 { 1 } else { -1 };
                &(&int(sgn) * &m[(0, j)]) * &m.minor(0, j).unwrap()
            })
            .sum();
        assert_eq!(expansion, m.determinant().unwrap());
    }

    #[test]
    fn zero_pivot_needs_swap() {
        let m = ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant().unwrap(), int(-1));
        let singular = ints(&[&[1, 2], &[2, 4]]);
        assert!(singular.determinant().unwrap().is_zero());
    }

    #[test]
    fn symbolic_determinant_with_fractions() {
        let m = SymMatrix::from_rows(alloc::vec![
            alloc::vec![s("a") / s("b"), s("c")],
            alloc::vec![RationalExpr::one(), s("b") + s("a")],
        ])
        .unwrap();
        assert_eq!(m.determinant().unwrap(), leibniz(&m));
        let half = RationalExpr::from_rational(Rational::new(1.into(), 2.into()));
        let h = SymMatrix::from_rows(alloc::vec![
            alloc::vec![half.clone(), s("x")],
            alloc::vec![s("y"), half],
        ])
        .unwrap();
        assert_eq!(h.determinant().unwrap(), leibniz(&h));
    }

    #[test]
    fn products_and_permutations() {
        let a = ints(&[&[1, 2], &[3, 4]]);
        let i = SymMatrix::identity(2);
        assert_eq!(a.mul(&i).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
        let p = a.permute_symmetric(&[1, 0]).unwrap();
        assert_eq!(p, ints(&[&[4, 3], &[2, 1]]));
        assert!(a.get(2, 0).is_err());
        assert!(a.mul(&ints(&[&[1, 2, 3]])).is_err());
    }
}
