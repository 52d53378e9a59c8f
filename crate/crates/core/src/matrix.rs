//! Exact linear algebra over arbitrary-precision integers and rationals.
//!
//! Determinants and inverses use fraction-free (Bareiss) elimination, so
//! every intermediate value is an exact integer minor of the input and the
//! final inverse is an exact rational matrix. No floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, cells: Vec<BigInt>) -> Self {
        assert_eq!(rows * cols, cells.len(), "cell count must match shape");
        Self { rows, cols, cells }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers (test and fixture aid).
    pub fn from_rows<T: Into<i64> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let cells = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&x| BigInt::from(x.into()))
            })
            .collect();
        Self::new(r, c, cells)
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

    pub fn cells(&self) -> &[BigInt] {
        &self.cells
    }

    /// Exact integer product. Panics on dimension mismatch.
    pub fn mat_mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lhs = &self[(i, k)];
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = lhs * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    ///
    /// Every interior division is exact (the intermediates are minors of
    /// the input), so no rationals are ever formed. Panics if non-square.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant requires a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.cells.clone();
        let at = |cells: &[BigInt], i: usize, j: usize| cells[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for col in 0..n {
            // Pivot: first row at or below `col` with a nonzero entry.
            let pivot_row = match (col..n).find(|&r| !m[r * n + col].is_zero()) {
                Some(r) => r,
                None => return BigInt::zero(),
            };
            if pivot_row != col {
                for j in 0..n {
                    m.swap(pivot_row * n + j, col * n + j);
                }
                sign = -sign;
            }
            for i in col + 1..n {
                for j in col + 1..n {
                    let num = at(&m, col, col) * at(&m, i, j) - at(&m, i, col) * at(&m, col, j);
                    m[i * n + j] = num / &prev;
                }
                m[i * n + col] = BigInt::zero();
            }
            prev = at(&m, col, col);
        }
        sign * prev
    }

    /// Exact rational inverse.
    ///
    /// Fraction-free Gauss-Jordan on the augmented matrix `[M | I]` leaves
    /// `pivot * I` on the left and the adjugate-scaled inverse on the right;
    /// dividing each row by its pivot yields the reduced rational inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        assert!(self.is_square(), "inverse requires a square matrix");
        let n = self.rows;
        let width = 2 * n;
        let mut m = vec![BigInt::zero(); n * width];
        for i in 0..n {
            for j in 0..n {
                m[i * width + j] = self[(i, j)].clone();
            }
            m[i * width + n + i] = BigInt::one();
        }

        let mut prev = BigInt::one();
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !m[r * width + col].is_zero())
                .ok_or_else(|| {
                    Error::SingularMatrix(format!("no inverse: column {col} has no pivot"))
                })?;
            if pivot_row != col {
                for j in 0..width {
                    m.swap(pivot_row * width + j, col * width + j);
                }
            }
            let pivot = m[col * width + col].clone();
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = m[i * width + col].clone();
                for j in 0..width {
                    let num = &pivot * &m[i * width + j] - &factor * &m[col * width + j];
                    m[i * width + j] = num / &prev;
                }
            }
            prev = pivot;
        }

        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            let denom = m[i * width + i].clone();
            debug_assert!(!denom.is_zero());
            for j in 0..n {
                cells.push(BigRational::new(
                    m[i * width + n + j].clone(),
                    denom.clone(),
                ));
            }
        }
        Ok(RatMatrix::new(n, n, cells))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols);
        &self.cells[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols);
        &mut self.cells[i * self.cols + j]
    }
}

/// A dense matrix of exact rationals, each cell reduced to lowest terms
/// with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, cells: Vec<BigRational>) -> Self {
        assert_eq!(rows * cols, cells.len(), "cell count must match shape");
        Self { rows, cols, cells }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let cells = m
            .cells()
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        Self::new(m.rows(), m.cols(), cells)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> &[BigRational] {
        &self.cells
    }

    /// Exact product with an integer matrix. Panics on dimension mismatch.
    pub fn rat_mul(&self, other: &IntMatrix) -> RatMatrix {
        assert_eq!(
            self.cols,
            other.rows(),
            "dimension mismatch: {}x{} * {}x{}",
            self.rows,
            self.cols,
            other.rows(),
            other.cols()
        );
        let mut cells = vec![BigRational::zero(); self.rows * other.cols()];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lhs = &self[(i, k)];
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..other.cols() {
                    let rhs = &other[(k, j)];
                    if rhs.is_zero() {
                        continue;
                    }
                    cells[i * other.cols() + j] += lhs * rhs;
                }
            }
        }
        RatMatrix::new(self.rows, other.cols(), cells)
    }

    /// Whether every cell is an integer.
    pub fn is_integral(&self) -> bool {
        self.cells.iter().all(BigRational::is_integer)
    }

    /// Converts to an integer matrix if every cell is integral.
    pub fn to_int_matrix(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        let cells = self.cells.iter().map(BigRational::to_integer).collect();
        Some(IntMatrix::new(self.rows, self.cols, cells))
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        assert!(i < self.rows && j < self.cols);
        &self.cells[i * self.cols + j]
    }
}

/// `|x|` bound helper for sanity checks on decrypted blocks.
pub fn fits_in_byte(x: &BigInt) -> bool {
    !x.is_negative() && *x <= BigInt::from(255u32)
}
