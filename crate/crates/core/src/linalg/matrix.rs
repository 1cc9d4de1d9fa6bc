use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Max-norm tolerance on `U†U - I` for a matrix to count as unitary.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Row-major dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("{rows}x{cols} matrix has no entries")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Parameter(format!("non-finite entry at position {pos}")));
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    /// Builds from nested rows of complex numbers.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.concat())
    }

    /// Builds from nested rows of real numbers.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
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

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Returns the matrix with rows taken in the given order (repeats allowed).
    pub fn select_rows(&self, rows: &[usize]) -> Result<ComplexMatrix> {
        if rows.is_empty() {
            return Err(Error::Dimension("no rows selected".into()));
        }
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            if r >= self.rows {
                return Err(Error::Dimension(format!("row {r} out of {}", self.rows)));
            }
            entries.extend_from_slice(self.row(r));
        }
        Ok(ComplexMatrix {
            rows: rows.len(),
            cols: self.cols,
            entries,
        })
    }

    /// Leading `cols` columns.
    pub fn leading_columns(&self, cols: usize) -> Result<ComplexMatrix> {
        if cols == 0 || cols > self.cols {
            return Err(Error::Dimension(format!("cannot take {cols} of {} columns", self.cols)));
        }
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(&self.row(i)[..cols]);
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols,
            entries,
        })
    }

    /// Max-norm deviation of `A†A` from the identity.
    pub fn isometry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.cols {
            for b in 0..self.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..self.rows {
                    acc += self[(i, a)].conj() * self[(i, b)];
                }
                if a == b {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Numerical rank via Gaussian elimination with partial pivoting.
    pub fn rank(&self, tol: f64) -> usize {
        let mut a = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let (pivot, best) = (rank..rows)
                .map(|r| (r, a[r * cols + col].norm()))
                .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= tol {
                continue;
            }
            for j in 0..cols {
                a.swap(rank * cols + j, pivot * cols + j);
            }
            let p = a[rank * cols + col];
            for r in rank + 1..rows {
                let f = a[r * cols + col] / p;
                for j in col..cols {
                    let v = a[rank * cols + j];
                    a[r * cols + j] -= f * v;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// On-disk matrix format: `{"rows": r, "cols": c, "entries": [[re, im], ...]}`,
/// entries row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        let entries = file.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::from_vec(file.rows, file.cols, entries)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(d)?;
        ComplexMatrix::try_from(file).map_err(serde::de::Error::custom)
    }
}

/// Square matrix checked against `‖U†U − I‖_max ≤ 1e-10`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "unitary must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.isometry_defect();
        if defect > UNITARITY_TOLERANCE {
            return Err(Error::Parameter(format!("matrix is not unitary (defect {defect:e})")));
        }
        Ok(UnitaryMatrix(matrix))
    }

    pub fn identity(m: usize) -> Self {
        UnitaryMatrix(ComplexMatrix::identity(m))
    }

    /// The 50/50 beamsplitter `(1/√2)[[1, 1], [1, −1]]`.
    pub fn beamsplitter() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        UnitaryMatrix(ComplexMatrix::from_real_rows(&[vec![h, h], vec![h, -h]]).unwrap())
    }

    /// Permutation matrix sending mode `j` to mode `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let m = perm.len();
        let mut seen = vec![false; m];
        let mut p = ComplexMatrix::zeros(m.max(1), m.max(1));
        for (j, &t) in perm.iter().enumerate() {
            if t >= m || seen[t] {
                return Err(Error::Parameter("not a permutation".into()));
            }
            seen[t] = true;
            p[(t, j)] = Complex64::new(1.0, 0.0);
        }
        Ok(UnitaryMatrix(p))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn matmul(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        UnitaryMatrix::new(self.0.matmul(&other.0)?)
    }

    pub(crate) fn from_unchecked(matrix: ComplexMatrix) -> Self {
        UnitaryMatrix(matrix)
    }
}

impl std::ops::Deref for UnitaryMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}
