//! Dense exact matrices: row reduction, kernels, characteristic polynomials
//! and in-field eigen-decomposition.

use std::fmt;
use std::ops::Index;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::Polynomial;
use crate::subspace::Subspace;

/// Row-major dense matrix over a single field.
///
/// Zero-row matrices are allowed; they carry the basis of the zero subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Result of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// An eigenvalue in the field together with its eigenspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenpair {
    pub value: Scalar,
    pub multiplicity: usize,
    pub space: Subspace,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Self::from_fn(
            field,
            n,
            n,
            |r, c| {
                if r == c {
                    field.one()
                } else {
                    field.zero()
                }
            },
        )
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let x = f(r, c);
                assert_eq!(x.field(), field, "entry field mismatch");
                entries.push(x);
            }
        }
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from rows, checking shape and field.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field,
                        right: x.field(),
                    });
                }
                entries.push(x);
            }
        }
        Ok(Matrix {
            field,
            rows: n,
            cols,
            entries,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64s(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, data).expect("well-formed integer rows")
    }

    /// Parses a matrix of scalar literals (`"3"`, `"-1/2"`).
    pub fn parse<S: AsRef<str>>(field: FieldSpec, rows: &[Vec<S>]) -> Result<Self> {
        let data = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| Scalar::parse(s.as_ref(), field))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(field, data)
    }

    pub fn diagonal(field: FieldSpec, diag: &[Scalar]) -> Self {
        let n = diag.len();
        Self::from_fn(field, n, n, |r, c| {
            if r == c {
                diag[r].clone()
            } else {
                field.zero()
            }
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, dim: usize, columns: &[Vec<Scalar>]) -> Self {
        Self::from_fn(field, dim, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn random<R: Rng + ?Sized>(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    /// Random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(field: FieldSpec, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
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

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.row_vectors().map(<[Scalar]>::to_vec).collect()
    }

    /// Entries as text, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.row_vectors()
            .map(|r| r.iter().map(Scalar::to_string).collect())
            .collect()
    }

    fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.entries[r * self.cols + c] = x;
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn check_field(&self, other: FieldSpec) -> Result<()> {
        if self.field == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field,
                right: other,
            })
        }
    }

    pub fn transpose(&self) -> Matrix {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| {
            self[(c, r)].clone()
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let zero = self.field.zero();
        Ok(Self::from_fn(self.field, self.rows, other.cols, |r, c| {
            (0..self.cols).fold(zero.clone(), |acc, k| {
                &acc + &(&self[(r, k)] * &other[(k, c)])
            })
        }))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other.field)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum shape".into()));
        }
        Ok(Self::from_fn(self.field, self.rows, self.cols, |r, c| {
            &self[(r, c)] + &other[(r, c)]
        }))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Self::from_fn(self.field, self.rows, self.cols, |r, c| &self[(r, c)] * s)
    }

    /// `self - lambda * I`.
    pub fn shift(&self, lambda: &Scalar) -> Result<Matrix> {
        self.check_square()?;
        let mut m = self.clone();
        for i in 0..self.rows {
            let x = &m[(i, i)] - lambda;
            m.set(i, i, x);
        }
        Ok(m)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let zero = self.field.zero();
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(zero.clone(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m[(lead, c)].inv().expect("pivot is nonzero");
            for k in c..m.cols {
                let x = &m[(lead, k)] * &inv;
                m.set(lead, k, x);
            }
            for r in 0..m.rows {
                if r == lead || m[(r, c)].is_zero() {
                    continue;
                }
                let factor = m[(r, c)].clone();
                for k in c..m.cols {
                    let x = &m[(r, k)] - &(&factor * &m[(lead, k)]);
                    m.set(r, k, x);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        Rref {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vectors: Vec<Vec<Scalar>> = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); self.cols];
                v[free] = self.field.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&matrix[(r, free)];
                }
                v
            })
            .collect();
        Subspace::span(self.field, self.cols, &vectors).expect("kernel vectors are well-formed")
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.check_square()?;
        let n = self.rows;
        let aug = Self::from_fn(self.field, n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                self.field.one()
            } else {
                self.field.zero()
            }
        });
        let red = aug.rref();
        if red.rank < n || red.pivots.iter().take(n).copied().ne(0..n) {
            return Err(Error::Precondition("matrix is singular".into()));
        }
        Ok(Self::from_fn(self.field, n, n, |r, c| {
            red.matrix[(r, c + n)].clone()
        }))
    }

    /// Characteristic polynomial `det(xI - A)` by Berkowitz's division-free
    /// algorithm, so it is valid in every characteristic.
    pub fn char_poly(&self) -> Result<Polynomial> {
        self.check_square()?;
        // berkowitz_vector returns coefficients highest degree first.
        let mut coeffs = berkowitz_vector(self);
        coeffs.reverse();
        Polynomial::new(self.field, coeffs)
    }

    /// Eigenvalues lying in the field with their eigenspaces, ordered by the
    /// deterministic scalar ordering.
    pub fn eigen_decomposition(&self) -> Result<Vec<Eigenpair>> {
        let cp = self.char_poly()?;
        cp.roots_with_multiplicity()?
            .into_iter()
            .map(|(value, multiplicity)| {
                let space = self.shift(&value)?.kernel_basis();
                debug_assert!(space.dim() >= 1);
                Ok(Eigenpair {
                    value,
                    multiplicity,
                    space,
                })
            })
            .collect()
    }

    /// Returns `Some(lambda)` when `A v = lambda v`.
    pub fn is_eigenvector(&self, v: &[Scalar]) -> Result<Option<Scalar>> {
        self.check_square()?;
        let Some(k) = v.iter().position(|x| !x.is_zero()) else {
            return Err(Error::ZeroVector);
        };
        let w = self.apply(v)?;
        let lambda = w[k].checked_div(&v[k])?;
        let matches = w.iter().zip(v).all(|(wi, vi)| *wi == &lambda * vi);
        Ok(matches.then_some(lambda))
    }

    /// Whether the subspace is mapped into itself.
    pub fn is_invariant(&self, s: &Subspace) -> Result<bool> {
        self.check_square()?;
        self.check_field(s.field())?;
        if self.rows != s.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator against subspace of K^{}",
                self.rows,
                self.cols,
                s.ambient_dim()
            )));
        }
        for b in s.basis().row_vectors() {
            if !s.contains_vector(&self.apply(b)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Matrix of the operator restricted to an invariant subspace, in the
    /// subspace's canonical basis (column j holds the coordinates of the
    /// image of basis vector j).
    pub fn restrict(&self, s: &Subspace) -> Result<Matrix> {
        if !self.is_invariant(s)? {
            return Err(Error::NotInvariant("operator".into()));
        }
        let k = s.dim();
        let coords: Vec<Vec<Scalar>> = s
            .basis()
            .row_vectors()
            .map(|b| {
                let img = self.apply(b).expect("shape checked");
                s.coordinates(&img)
                    .expect("shape checked")
                    .expect("image lies in s")
            })
            .collect();
        Ok(Self::from_fn(self.field, k, k, |r, c| coords[c][r].clone()))
    }

    /// Matrix entries flattened row-major, for use as a vector in K^(r*c).
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.entries.clone()
    }
}

/// Coefficients expressing `target` as a combination of linearly
/// independent `vectors`, or `None` when it lies outside their span.
pub fn express_in_span(
    field: FieldSpec,
    vectors: &[&[Scalar]],
    target: &[Scalar],
) -> Option<Vec<Scalar>> {
    let d = target.len();
    let k = vectors.len();
    let red = Matrix::from_fn(field, d, k + 1, |r, c| {
        if c < k {
            vectors[c][r].clone()
        } else {
            target[r].clone()
        }
    })
    .rref();
    if red.pivots.contains(&k) {
        return None;
    }
    debug_assert_eq!(
        red.pivots,
        (0..k).collect::<Vec<_>>(),
        "vectors must be independent"
    );
    Some((0..k).map(|r| red.matrix[(r, k)].clone()).collect())
}

/// Berkowitz: returns the coefficient vector of det(xI - A), highest degree
/// first. For A = [[a, R], [C, A']] the vector is T * vec(A') with T the
/// lower-triangular Toeplitz matrix built from 1, -a, -R C, -R A' C, ...
fn berkowitz_vector(m: &Matrix) -> Vec<Scalar> {
    let f = m.field();
    let n = m.rows();
    if n == 0 {
        return vec![f.one()];
    }
    if n == 1 {
        return vec![f.one(), -&m[(0, 0)]];
    }
    let a = &m[(0, 0)];
    let row: Vec<Scalar> = (1..n).map(|c| m[(0, c)].clone()).collect();
    let sub = Matrix::from_fn(f, n - 1, n - 1, |r, c| m[(r + 1, c + 1)].clone());
    let mut col: Vec<Scalar> = (1..n).map(|r| m[(r, 0)].clone()).collect();

    let dot = |u: &[Scalar], v: &[Scalar]| {
        u.iter()
            .zip(v)
            .fold(f.zero(), |acc, (x, y)| &acc + &(x * y))
    };
    // diags = [1, -a, -R C, -R A' C, ..., -R A'^(n-2) C]
    let mut diags = vec![f.one(), -a];
    for i in 0..n - 1 {
        diags.push(-dot(&row, &col));
        if i + 1 < n - 1 {
            col = sub.apply(&col).expect("shape");
        }
    }
    let inner = berkowitz_vector(&sub);
    // (n+1) x n Toeplitz times inner (length n).
    (0..=n)
        .map(|i| {
            (0..n)
                .filter(|&j| j <= i)
                .fold(f.zero(), |acc, j| &acc + &(&diags[i - j] * &inner[j]))
        })
        .collect()
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds"
        );
        &self.entries[r * self.cols + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_strings();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            write!(f, "[")?;
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
