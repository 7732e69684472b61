//! Dense exact rational linear algebra.
//!
//! Elimination runs fraction-free over integers (rows are scaled to clear
//! denominators, then Bareiss elimination keeps every intermediate an exact
//! integer minor); pivots are normalised only once the echelon form is known.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{lcm_of_denominators, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        RationalMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &RationalMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RationalMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |r, c| self[(r, cols[c])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |r, c| self[(rows[r], c)].clone())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

/// Reduced row-echelon form.
pub fn rref(m: &RationalMatrix) -> Rref {
    let (rows, cols) = (m.rows, m.cols);
    // Scale each row to integers.
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let row = m.row(r);
            let l = lcm_of_denominators(row);
            row.iter()
                .map(|v| (v * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();

    // Bareiss forward elimination.
    let mut pivot_cols = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            let factor = a[i][c].clone();
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &factor * &a[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }
    let rank = r;

    // Normalise pivots and clear above them.
    let mut out = RationalMatrix::zeros(rows, cols);
    for (i, &pc) in pivot_cols.iter().enumerate() {
        let pivot = a[i][pc].clone();
        for j in pc..cols {
            out[(i, j)] = Rational::new(a[i][j].clone(), pivot.clone());
        }
    }
    for (i, &pc) in pivot_cols.iter().enumerate().rev() {
        for k in 0..i {
            let factor = out[(k, pc)].clone();
            if factor.is_zero() {
                continue;
            }
            for j in pc..cols {
                let delta = &factor * &out[(i, j)];
                out[(k, j)] -= delta;
            }
        }
    }
    Rref {
        matrix: out,
        rank,
        pivot_cols,
    }
}

/// Basis of `{z | M z = 0}`, one vector per free column of the RREF.
pub fn nullspace(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let Rref {
        matrix: r,
        pivot_cols,
        ..
    } = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut z = vec![Rational::zero(); m.cols];
            z[f] = Rational::one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                z[pc] = -r[(i, f)].clone();
            }
            z
        })
        .collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &RationalMatrix) -> Option<RationalMatrix> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    let n = m.rows;
    let aug = rref(&m.hstack(&RationalMatrix::identity(n)));
    if aug.pivot_cols.iter().copied().take(n).ne(0..n) {
        return None;
    }
    Some(RationalMatrix::from_fn(n, n, |r, c| aug.matrix[(r, n + c)].clone()))
}

/// Moore–Penrose pseudo-inverse via the rank factorisation `M = C R`:
/// `M† = Rᵀ (R Rᵀ)⁻¹ (Cᵀ C)⁻¹ Cᵀ`.
pub fn pseudo_inverse(m: &RationalMatrix) -> RationalMatrix {
    let Rref {
        matrix,
        rank,
        pivot_cols,
    } = rref(m);
    if rank == 0 {
        return RationalMatrix::zeros(m.cols, m.rows);
    }
    let c = m.select_columns(&pivot_cols);
    let r = matrix.select_rows(&(0..rank).collect::<Vec<_>>());
    let ct = c.transpose();
    let rt = r.transpose();
    let rrt_inv = inverse(&r.mul(&rt)).expect("R has full row rank");
    let ctc_inv = inverse(&ct.mul(&c)).expect("C has full column rank");
    rt.mul(&rrt_inv).mul(&ctc_inv).mul(&ct)
}

/// Minimum-norm solution `A†b` of `A x = b`, or `None` when inconsistent.
pub fn solve_linear(a: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows, b.len(), "right-hand side length differs from row count");
    let x = pseudo_inverse(a).mul_vec(b);
    (a.mul_vec(&x) == b).then_some(x)
}

/// Scales a rational vector to a primitive integer vector (gcd 1) with the same direction.
pub fn clear_denominators(v: &[Rational]) -> Vec<Rational> {
    let l = lcm_of_denominators(v);
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_squared(a: &[Rational]) -> Rational {
    a.iter().map(|x| x * x).sum()
}

/// Checks the four Penrose conditions for `pinv` as the pseudo-inverse of `m`.
pub fn satisfies_penrose(m: &RationalMatrix, pinv: &RationalMatrix) -> bool {
    let mp = m.mul(pinv);
    let pm = pinv.mul(m);
    m.rows == pinv.cols
        && m.cols == pinv.rows
        && mp.mul(m) == *m
        && pm.mul(pinv) == *pinv
        && mp.is_symmetric()
        && pm.is_symmetric()
}

/// True when every entry is an integer.
pub fn is_integral(m: &RationalMatrix) -> bool {
    m.data.iter().all(|v| v.is_integer())
}

pub fn max_abs(m: &RationalMatrix) -> Rational {
    m.data
        .iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}
