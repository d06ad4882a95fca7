//! Frames and Bessel families over an atomic measure space.
//!
//! A [`Frame`] stores the vectors `F(x_k)` as the columns of an `n × K`
//! matrix. Weights stay on the [`MeasureSpace`]; every operator formula
//! applies them explicitly, so `S_F = Σ_k w_k F(x_k) F(x_k)^*`.
//!
//! Inner products are linear in the first argument.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{complex_pair, parse_complex};
use crate::linalg::{c, max_abs, mul_adjoint, scale_columns, CMatrix, CVector, HermitianEigen, LinearOperator, ONE};
use crate::measure::{same_space, MeasureSpace};

/// Relative threshold on `λ_max(S_F)` below which `λ_min` counts as zero.
pub const FRAME_EPS: f64 = 1e-10;

/// A family `x ↦ F(x) ∈ ℂⁿ` on the atoms of a measure space.
///
/// Nothing about the lower frame bound is assumed; duals and Bessel maps use
/// the same type.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    space: Arc<MeasureSpace>,
    vectors: CMatrix,
}

impl Frame {
    pub fn new(space: Arc<MeasureSpace>, vectors: CMatrix) -> Result<Self> {
        space.check_len(vectors.ncols(), "frame columns")?;
        if vectors.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                context: "frame vectors",
                expected: 1,
                found: 0,
            });
        }
        if vectors.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("frame vectors"));
        }
        Ok(Self { space, vectors })
    }

    pub fn from_columns(space: Arc<MeasureSpace>, columns: &[CVector]) -> Result<Self> {
        let n = columns.first().map_or(0, |c| c.len());
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch {
                context: "frame columns",
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(space, CMatrix::from_columns(columns))
    }

    /// Real columns over unit-mass atoms; handy for small hand-built examples.
    pub fn from_real_columns(columns: &[&[f64]]) -> Result<Self> {
        let space = Arc::new(MeasureSpace::counting(columns.len())?);
        let cols: Vec<CVector> = columns.iter().map(|col| crate::linalg::rvector(col)).collect();
        Self::from_columns(space, &cols)
    }

    pub(crate) fn from_parts(space: Arc<MeasureSpace>, vectors: CMatrix) -> Self {
        debug_assert_eq!(space.len(), vectors.ncols());
        Self { space, vectors }
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.ncols() == 0
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn column(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    /// The zero Bessel family with the same shape.
    pub fn zeros_like(&self) -> Self {
        Self::from_parts(self.space.clone(), CMatrix::zeros(self.dim(), self.len()))
    }

    /// Same space, new vectors.
    pub fn with_vectors(&self, vectors: CMatrix) -> Result<Self> {
        Self::new(self.space.clone(), vectors)
    }

    /// Same vectors, over another space with the same atom count.
    pub fn reweighted(&self, space: Arc<MeasureSpace>) -> Result<Self> {
        Self::new(space, self.vectors.clone())
    }

    /// Column `k` multiplied by `factors[k]`.
    pub fn scale_columns(&self, factors: &[Complex64]) -> Result<Self> {
        self.space.check_len(factors.len(), "column factors")?;
        Ok(Self::from_parts(self.space.clone(), scale_columns(&self.vectors, factors)))
    }

    pub(crate) fn check_compatible(&self, other: &Frame, context: &'static str) -> Result<()> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch(context));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    fn weights_c(&self) -> Vec<Complex64> {
        self.space.weights().iter().map(|&w| c(w, 0.0)).collect()
    }

    /// `{"dim": n, "space": ..., "vectors": [[re, im], ...]}`, column-major.
    pub fn to_json(&self) -> Value {
        let vectors: Vec<Value> = self.vectors.iter().map(|&z| complex_pair(z)).collect();
        json!({ "dim": self.dim(), "space": self.space.to_json(), "vectors": vectors })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let dim = value
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("frame is missing `dim`".into()))? as usize;
        let space = MeasureSpace::from_json(
            value
                .get("space")
                .ok_or_else(|| Error::Json("frame is missing `space`".into()))?,
        )?;
        let raw = value
            .get("vectors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("frame is missing `vectors`".into()))?;
        if raw.len() != dim * space.len() {
            return Err(Error::LengthMismatch {
                context: "frame vector entries",
                expected: dim * space.len(),
                found: raw.len(),
            });
        }
        let entries = raw.iter().map(parse_complex).collect::<Result<Vec<_>>>()?;
        Self::new(
            Arc::new(space),
            CMatrix::from_column_slice(dim, space_len(&entries, dim), &entries),
        )
    }
}

fn space_len(entries: &[Complex64], dim: usize) -> usize {
    entries.len().checked_div(dim).unwrap_or(0)
}

/// A discretized element of `L²(X, μ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientFunction {
    space: Arc<MeasureSpace>,
    values: Vec<Complex64>,
}

impl CoefficientFunction {
    pub fn new(space: Arc<MeasureSpace>, values: Vec<Complex64>) -> Result<Self> {
        space.check_len(values.len(), "coefficient function")?;
        Ok(Self { space, values })
    }

    /// Indicator of atom `k`.
    pub fn delta(space: Arc<MeasureSpace>, k: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); space.len()];
        values[k] = ONE;
        Self { space, values }
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `Σ_k w_k |c_k|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.space
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum()
    }

    /// `Σ_k w_k a_k conj(b_k)`.
    pub fn inner(&self, other: &CoefficientFunction) -> Result<Complex64> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch("coefficient inner product"));
        }
        Ok(self
            .space
            .weights()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .fold(Complex64::new(0.0, 0.0), |acc, (&w, (a, b))| acc + a * b.conj() * w))
    }
}

fn check_vector(frame: &Frame, f: &CVector, context: &'static str) -> Result<()> {
    if f.len() == frame.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected: frame.dim(),
            found: f.len(),
        })
    }
}

/// `(T_F^* f)(x_k) = <f, F(x_k)>`.
pub fn analysis(frame: &Frame, f: &CVector) -> Result<CoefficientFunction> {
    check_vector(frame, f, "analysis")?;
    let values = frame.vectors.ad_mul(f);
    Ok(CoefficientFunction {
        space: frame.space.clone(),
        values: values.iter().copied().collect(),
    })
}

/// `T_F φ = Σ_k w_k φ(x_k) F(x_k)`.
pub fn synthesis(frame: &Frame, coeffs: &CoefficientFunction) -> Result<CVector> {
    if !same_space(&frame.space, &coeffs.space) {
        return Err(Error::SpaceMismatch("synthesis"));
    }
    let weighted = CVector::from_iterator(
        frame.len(),
        frame.space.weights().iter().zip(&coeffs.values).map(|(&w, &v)| v * w),
    );
    Ok(&frame.vectors * weighted)
}

/// `S_F = Σ_k w_k F(x_k) F(x_k)^*`, symmetrized.
pub fn frame_operator(frame: &Frame) -> LinearOperator {
    LinearOperator::from_matrix(weighted_gram(&frame.vectors, frame.space.weights()))
}

pub(crate) fn weighted_gram(vectors: &CMatrix, weights: &[f64]) -> CMatrix {
    let roots: Vec<Complex64> = weights.iter().map(|&w| c(w.sqrt(), 0.0)).collect();
    let b = scale_columns(vectors, &roots);
    crate::linalg::hermitian_part(&mul_adjoint(&b, &b))
}

/// Frame operator summed over atom chunks in parallel.
///
/// Summation order differs from [`frame_operator`]; results agree to rounding.
pub fn frame_operator_parallel(frame: &Frame, chunk: usize) -> LinearOperator {
    let chunk = chunk.max(1);
    let n = frame.dim();
    let weights = frame.space.weights();
    let starts: Vec<usize> = (0..frame.len()).step_by(chunk).collect();
    let total = starts
        .par_iter()
        .map(|&start| {
            let width = chunk.min(frame.len() - start);
            let cols = frame.vectors.columns(start, width).into_owned();
            weighted_gram(&cols, &weights[start..start + width])
        })
        .reduce(|| CMatrix::zeros(n, n), |a, b| a + b);
    LinearOperator::from_matrix(total)
}

/// Optimal frame bounds from the spectrum of `S_F`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameBounds {
    /// `λ_min(S_F)`.
    pub lower: f64,
    /// `λ_max(S_F)`.
    pub upper: f64,
    /// `FRAME_EPS · λ_max`.
    pub threshold: f64,
    /// Number of eigenvalues above `threshold`.
    pub rank: usize,
}

impl FrameBounds {
    pub fn is_frame(&self) -> bool {
        self.upper > 0.0 && self.lower > self.threshold
    }

    pub fn is_tight(&self, rel_tol: f64) -> bool {
        self.is_frame() && (self.upper - self.lower) <= rel_tol * self.upper
    }

    fn from_eigen(eig: &HermitianEigen) -> Self {
        let upper = eig.max();
        let threshold = FRAME_EPS * upper.max(0.0);
        let rank = eig.values.iter().filter(|&&l| l > threshold).count();
        Self {
            lower: eig.min(),
            upper,
            threshold,
            rank,
        }
    }
}

/// Spectral data of `S_F`; the single source for bounds, rank and `S_F^{-1}`.
#[derive(Clone, Debug)]
pub struct FrameSpectrum {
    pub operator: LinearOperator,
    pub eigen: HermitianEigen,
    pub bounds: FrameBounds,
}

impl FrameSpectrum {
    pub fn new(frame: &Frame) -> Self {
        let operator = frame_operator(frame);
        let eigen = HermitianEigen::new(operator.matrix());
        let bounds = FrameBounds::from_eigen(&eigen);
        Self { operator, eigen, bounds }
    }

    /// `S_F^{-1}`; fails when `F` is only Bessel.
    pub fn inverse(&self) -> Result<CMatrix> {
        self.require_frame()?;
        Ok(self.eigen.apply_fn(|l| 1.0 / l))
    }

    fn require_frame(&self) -> Result<()> {
        if self.bounds.is_frame() {
            Ok(())
        } else {
            Err(Error::NotAFrame {
                lower: self.bounds.lower,
                threshold: self.bounds.threshold,
            })
        }
    }
}

pub fn frame_bounds(frame: &Frame) -> FrameBounds {
    FrameSpectrum::new(frame).bounds
}

/// `S_F^{-1} F(x_k)` for every atom.
pub fn canonical_dual(frame: &Frame) -> Result<Frame> {
    let inv = FrameSpectrum::new(frame).inverse()?;
    Ok(Frame::from_parts(frame.space.clone(), &inv * &frame.vectors))
}

/// `Σ_k w_k G(x_k) F(x_k)^*`, the operator whose identity-ness defines duality.
pub fn cross_frame_operator(f: &Frame, g: &Frame) -> Result<LinearOperator> {
    f.check_compatible(g, "cross frame operator")?;
    let weighted = scale_columns(&g.vectors, &f.weights_c());
    Ok(LinearOperator::from_matrix(mul_adjoint(&weighted, &f.vectors)))
}

/// Whether `‖Σ_k w_k G(x_k) F(x_k)^* − I‖_max ≤ tol`.
pub fn is_dual_pair(f: &Frame, g: &Frame, tol: f64) -> bool {
    dual_defect(f, g).is_ok_and(|d| d <= tol)
}

/// `‖Σ_k w_k G(x_k) F(x_k)^* − I‖_max`.
pub fn dual_defect(f: &Frame, g: &Frame) -> Result<f64> {
    let cross = cross_frame_operator(f, g)?;
    Ok(cross.max_abs_diff(&LinearOperator::identity(f.dim())))
}

/// The dual of `F` parameterized by a Bessel family `Θ`:
///
/// `G(x) = S^{-1}F(x) + Θ(x) − ∫ <S^{-1}F(x), F(y)> Θ(y) dμ(y)`.
///
/// Every dual of `F` arises this way.
pub fn dual_from_bessel(frame: &Frame, theta: &Frame) -> Result<Frame> {
    frame.check_compatible(theta, "dual from Bessel family")?;
    let canonical = canonical_dual(frame)?;
    // gram[(j, k)] = <S^{-1} F(x_k), F(x_j)>
    let gram = frame.vectors.ad_mul(&canonical.vectors);
    let weighted_theta = scale_columns(&theta.vectors, &frame.weights_c());
    let correction = &weighted_theta * gram;
    Ok(Frame::from_parts(
        frame.space.clone(),
        canonical.vectors + &theta.vectors - correction,
    ))
}

/// Complex dimension `n·(K − rank)` of the affine space of duals.
pub fn dual_space_dimension(frame: &Frame) -> Result<usize> {
    let spectrum = FrameSpectrum::new(frame);
    spectrum.require_frame()?;
    Ok(frame.dim() * (frame.len() - spectrum.bounds.rank))
}

/// `‖S / c − I‖_max`.
pub fn tightness_deviation(op: &LinearOperator, constant: f64) -> f64 {
    let n = op.rows();
    max_abs(&(op.matrix().unscale(constant) - CMatrix::identity(n, n)))
}
