//! Dense complex matrices and the spectral routines every other module leans on.
//!
//! All eigenvalue work goes through [`HermitianEigen`] (symmetrized input,
//! ascending eigenvalues) and all singular values come from a full SVD.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{complex_pair, parse_complex};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `<f, g>`, linear in `f` and conjugate-linear in `g`.
#[inline]
pub fn inner(f: &CVector, g: &CVector) -> Complex64 {
    g.dotc(f)
}

pub fn cvector(entries: &[Complex64]) -> CVector {
    CVector::from_column_slice(entries)
}

/// Real vector lifted to complex entries.
pub fn rvector(entries: &[f64]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&x| c(x, 0.0)))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `a * b^*`, computed through real matrix products.
///
/// nalgebra dispatches real `f64` products to an optimized gemm, while complex
/// products use a generic loop; splitting into real and imaginary parts keeps
/// large frame operators cheap. Purely real operands take a single product.
pub fn mul_adjoint(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.ncols(), "mul_adjoint: inner dimensions differ");
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let a_real = ai.iter().all(|&x| x == 0.0);
    let b_real = bi.iter().all(|&x| x == 0.0);

    let mut re = &ar * br.transpose();
    let mut im = DMatrix::<f64>::zeros(a.nrows(), b.nrows());
    if !a_real && !b_real {
        re += &ai * bi.transpose();
    }
    if !a_real {
        im += &ai * br.transpose();
    }
    if !b_real {
        im -= &ar * bi.transpose();
    }
    DMatrix::from_fn(a.nrows(), b.nrows(), |i, j| c(re[(i, j)], im[(i, j)]))
}

fn split(m: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

/// Scales column `k` of `m` by `factors[k]`.
pub fn scale_columns(m: &CMatrix, factors: &[Complex64]) -> CMatrix {
    debug_assert_eq!(m.ncols(), factors.len());
    let mut out = m.clone();
    for (k, mut col) in out.column_iter_mut().enumerate() {
        col *= factors[k];
    }
    out
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let sym = hermitian_part(m);
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
        Self { values, vectors }
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V^*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let factors: Vec<Complex64> = self.values.iter().map(|&l| c(f(l), 0.0)).collect();
        let scaled = scale_columns(&self.vectors, &factors);
        &scaled * self.vectors.adjoint()
    }
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).unscale(2.0)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Dense complex matrix viewed as an operator between finite-dimensional spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    matrix: CMatrix,
}

impl LinearOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("linear operator"));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix(CMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_matrix(CMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        Self::from_matrix(CMatrix::from_diagonal(&cvector(diag)))
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.matrix.adjoint())
    }

    pub fn apply(&self, f: &CVector) -> Result<CVector> {
        if f.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                context: "operator application",
                expected: self.cols(),
                found: f.len(),
            });
        }
        Ok(&self.matrix * f)
    }

    pub fn compose(&self, rhs: &LinearOperator) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch {
                context: "operator composition",
                expected: self.cols(),
                found: rhs.rows(),
            });
        }
        Ok(Self::from_matrix(&self.matrix * &rhs.matrix))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_matrix(&self.matrix * factor)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &LinearOperator) -> f64 {
        assert_eq!(self.matrix.shape(), other.matrix.shape(), "shape mismatch");
        max_abs(&(&self.matrix - &other.matrix))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// `(T + T^*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_matrix(hermitian_part(&self.matrix))
    }

    /// `‖T − T^*‖_max`.
    pub fn hermitian_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn eigen_hermitian(&self) -> Result<HermitianEigen> {
        self.require_square()?;
        Ok(HermitianEigen::new(&self.matrix))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.matrix)
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    /// `{"rows": r, "cols": c, "entries": [[re, im], ...]}`, row-major.
    pub fn to_json(&self) -> Value {
        let mut entries = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                entries.push(complex_pair(self.matrix[(i, j)]));
            }
        }
        json!({ "rows": self.rows(), "cols": self.cols(), "entries": entries })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let dim = |key: &str| {
            value
                .get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| Error::Json(format!("operator is missing `{key}`")))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let entries = value
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("operator is missing `entries`".into()))?;
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                context: "operator entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let parsed = entries.iter().map(parse_complex).collect::<Result<Vec<_>>>()?;
        Self::new(CMatrix::from_row_slice(rows, cols, &parsed))
    }

    /// CSV payload: a `rows,cols,complex-interleaved` header line, then one line
    /// per matrix row holding `re,im` pairs.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{},complex-interleaved\n", self.rows(), self.cols());
        for i in 0..self.rows() {
            let line: Vec<String> = (0..self.cols())
                .flat_map(|j| {
                    let z = self.matrix[(i, j)];
                    [format!("{:.16e}", z.re), format!("{:.16e}", z.im)]
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

impl From<LinearOperator> for CMatrix {
    fn from(op: LinearOperator) -> Self {
        op.matrix
    }
}
