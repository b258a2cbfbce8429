use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;
use crate::{Error, Result};

/// Dense matrix of exact rationals, row-major. The 0x0 matrix is the
/// designated empty matrix (identity of trace formulas over an empty basis).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn empty() -> Self {
        Self::zeros(0, 0)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds entry-by-entry from a closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::MatrixShape("ragged row lengths".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::MatrixShape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// `Tr(self * rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Result<Rational> {
        if self.cols != rhs.rows || self.rows != rhs.cols {
            return Err(Error::MatrixShape(format!(
                "trace of {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut acc = Rational::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += &self[(i, j)] * &rhs[(j, i)];
            }
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    /// Exact inverse by fraction-free (Bareiss) elimination.
    ///
    /// Rows are first cleared to integers; the forward sweep then runs the
    /// two-row integer transform whose divisions are exact, pivoting on the
    /// first nonzero entry in each column. Rank deficiency surfaces as
    /// [`Error::SingularMatrix`] carrying the pivot stage. Back substitution
    /// happens over rationals on the triangularized system.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::MatrixShape(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let m = self.rows;
        if m == 0 {
            return Ok(Self::empty());
        }

        // Augmented integer system [B | D] with B = D*self, D = diag(row lcms):
        // solving B X = D gives X = self^{-1}.
        let width = 2 * m;
        let mut a = vec![BigInt::zero(); m * width];
        for i in 0..m {
            let mut lcm = BigInt::one();
            for j in 0..m {
                lcm = lcm.lcm(self[(i, j)].denom());
            }
            for j in 0..m {
                let e = &self[(i, j)];
                a[i * width + j] = e.numer() * (&lcm / e.denom());
            }
            a[i * width + m + i] = lcm;
        }

        let mut prev = BigInt::one();
        for col in 0..m {
            let pivot_row = (col..m)
                .find(|&r| !a[r * width + col].is_zero())
                .ok_or(Error::SingularMatrix { stage: col })?;
            if pivot_row != col {
                for j in 0..width {
                    a.swap(pivot_row * width + j, col * width + j);
                }
            }
            let pivot = a[col * width + col].clone();
            for r in col + 1..m {
                let lead = a[r * width + col].clone();
                for j in col + 1..width {
                    let val = &pivot * &a[r * width + j] - &lead * &a[col * width + j];
                    let (q, rem) = val.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    a[r * width + j] = q;
                }
                a[r * width + col] = BigInt::zero();
            }
            prev = pivot;
        }

        // Upper-triangular solve, one augmented column at a time.
        let mut inv = Self::zeros(m, m);
        for j in 0..m {
            for i in (0..m).rev() {
                let mut acc = Rational::from_integer(a[i * width + m + j].clone());
                for t in i + 1..m {
                    acc -= Rational::from_integer(a[i * width + t].clone()) * &inv[(t, j)];
                }
                inv[(i, j)] = acc / Rational::from_integer(a[i * width + i].clone());
            }
        }
        Ok(inv)
    }

    /// Row-major entries in the `"p/q"` wire form.
    pub fn wire_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| super::format_rational(&self[(i, j)])).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}
