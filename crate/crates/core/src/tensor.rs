//! Tensor products of vectors, operators and frames.
//!
//! Index `(a, b)` of `ℂ^{n1} ⊗ ℂ^{n2}` maps to `a·n2 + b`, and atom `(i, j)`
//! of a product space maps to `i·K2 + j`; with these conventions the tensor
//! frame's vector matrix is the Kronecker product of the factors' matrices.

use std::ops::Deref;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::frames::{dual_space_dimension, is_dual_pair, Frame, FrameSpectrum};
use crate::linalg::{c, scale_columns, CMatrix, CVector, LinearOperator};
use crate::measure::{same_space, ProductMeasureSpace};

/// Relative Schmidt-coefficient threshold for counting rank.
pub const RANK_EPS: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct TensorVector {
    dims: (usize, usize),
    entries: CVector,
}

impl TensorVector {
    pub fn new(dims: (usize, usize), entries: CVector) -> Result<Self> {
        if entries.len() != dims.0 * dims.1 {
            return Err(Error::LengthMismatch {
                context: "tensor vector",
                expected: dims.0 * dims.1,
                found: entries.len(),
            });
        }
        Ok(Self { dims, entries })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn entries(&self) -> &CVector {
        &self.entries
    }

    pub fn into_entries(self) -> CVector {
        self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    /// The `n1 × n2` matrix `X[a, b] = x[a·n2 + b]`.
    pub fn reshape(&self) -> CMatrix {
        let (n1, n2) = self.dims;
        CMatrix::from_fn(n1, n2, |a, b| self.entries[a * n2 + b])
    }
}

/// `(u ⊗ v)[a·n2 + b] = u[a] v[b]`.
pub fn kron_vec(u: &CVector, v: &CVector) -> TensorVector {
    let entries = CVector::from_iterator(u.len() * v.len(), u.iter().flat_map(|&a| v.iter().map(move |&b| a * b)));
    TensorVector {
        dims: (u.len(), v.len()),
        entries,
    }
}

/// Kronecker product, consistent with [`kron_vec`]: `(S ⊗ T)(u ⊗ v) = Su ⊗ Tv`.
pub fn kron_op(s: &LinearOperator, t: &LinearOperator) -> LinearOperator {
    LinearOperator::from_matrix(s.matrix().kronecker(t.matrix()))
}

/// A family on a product space acting on `ℂ^{n1} ⊗ ℂ^{n2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorFrame {
    frame: Frame,
    product: ProductMeasureSpace,
    dims: (usize, usize),
    factors: Option<(Frame, Frame)>,
}

impl TensorFrame {
    /// Wraps an arbitrary (possibly non-simple) family on a product space.
    pub fn from_family(frame: Frame, product: ProductMeasureSpace, dims: (usize, usize)) -> Result<Self> {
        if !same_space(frame.space(), product.space()) {
            return Err(Error::SpaceMismatch("tensor family"));
        }
        if frame.dim() != dims.0 * dims.1 {
            return Err(Error::DimensionMismatch {
                context: "tensor family",
                expected: dims.0 * dims.1,
                found: frame.dim(),
            });
        }
        Ok(Self {
            frame,
            product,
            dims,
            factors: None,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn into_frame(self) -> Frame {
        self.frame
    }

    pub fn product(&self) -> &ProductMeasureSpace {
        &self.product
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn factors(&self) -> Option<&(Frame, Frame)> {
        self.factors.as_ref()
    }

    /// Column at atom `p` viewed as a tensor.
    pub fn tensor_column(&self, p: usize) -> TensorVector {
        TensorVector {
            dims: self.dims,
            entries: self.frame.column(p),
        }
    }

    /// Frame JSON plus `"factors": [F1, F2]` when built from factors.
    pub fn to_json(&self) -> Value {
        let mut v = self.frame.to_json();
        if let Some((f1, f2)) = &self.factors {
            v["factors"] = Value::Array(vec![f1.to_json(), f2.to_json()]);
        }
        v
    }
}

impl Deref for TensorFrame {
    type Target = Frame;

    fn deref(&self) -> &Frame {
        &self.frame
    }
}

/// `F1 ⊗ F2` over the product of the factor spaces.
pub fn tensor_frame(f1: &Frame, f2: &Frame) -> TensorFrame {
    let product = ProductMeasureSpace::new(f1.space().clone(), f2.space().clone());
    let vectors = f1.vectors().kronecker(f2.vectors());
    TensorFrame {
        frame: Frame::from_parts(product.space().clone(), vectors),
        product,
        dims: (f1.dim(), f2.dim()),
        factors: Some((f1.clone(), f2.clone())),
    }
}

/// `C_F = inf_{‖g‖=1} ∫ |<g, F(x)>|² dμ` and `D_F = sup_{‖g‖=1} ∫ |<g, F(x)>|² dμ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    pub lower: f64,
    pub upper: f64,
}

pub fn bound_constants(frame: &Frame) -> BoundConstants {
    let b = FrameSpectrum::new(frame).bounds;
    BoundConstants {
        lower: b.lower,
        upper: b.upper,
    }
}

/// `x = Σ_n c_n e_n ⊗ f_n` with orthonormal `{e_n}`, `{f_n}` and descending `c_n > 0`.
#[derive(Clone, Debug)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

impl Schmidt {
    pub fn reconstruct(&self, dims: (usize, usize)) -> TensorVector {
        let mut entries = CVector::zeros(dims.0 * dims.1);
        for ((&cn, e), f) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            entries += kron_vec(e, f).entries * c(cn, 0.0);
        }
        TensorVector { dims, entries }
    }
}

/// Schmidt decomposition through the SVD of the reshaped tensor.
///
/// Left vectors have their first nonzero entry real positive.
pub fn schmidt(x: &TensorVector) -> Schmidt {
    let (n1, n2) = x.dims;
    let mut out = Schmidt {
        coefficients: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    if n1 == 0 || n2 == 0 || x.entries.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return out;
    }
    let svd = x.reshape().svd(true, true);
    let (u, v_t) = (svd.u.expect("requested U"), svd.v_t.expect("requested V^*"));
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let cmax = svd.singular_values[order[0]];
    let floor = f64::EPSILON * cmax * n1.max(n2) as f64;
    for &i in &order {
        let sigma = svd.singular_values[i];
        if sigma <= floor {
            break;
        }
        let mut e = u.column(i).into_owned();
        // X = Σ σ u v^*, so the right factor is conj(v), i.e. the row of V^*
        let mut f = v_t.row(i).transpose();
        if let Some(&lead) = e.iter().find(|z| z.norm() > 1e-12) {
            let phase = lead / lead.norm();
            e *= phase.conj();
            f *= phase;
        }
        out.coefficients.push(sigma);
        out.left.push(e);
        out.right.push(f);
    }
    out
}

/// Number of Schmidt coefficients above `RANK_EPS · c_max`; `≤ 1` iff `x` is a simple tensor.
pub fn simple_rank(x: &TensorVector) -> usize {
    let s = schmidt(x);
    let Some(&cmax) = s.coefficients.first() else {
        return 0;
    };
    s.coefficients.iter().filter(|&&cn| cn > RANK_EPS * cmax).count()
}

/// Dual of a simple tensor frame from a Bessel family `W` on the product space:
///
/// `G(x) = S1⁻¹F1(x1) ⊗ S2⁻¹F2(x2) + W(x) − ∫ <S1⁻¹F1(x1), F1(y1)> <S2⁻¹F2(x2), F2(y2)> W(y) dμ(y)`.
///
/// Uses only factor-level Gram matrices, independent of the full tensor
/// frame operator.
pub fn tensor_dual(frame: &TensorFrame, w: &Frame) -> Result<Frame> {
    let (f1, f2) = frame.factors.as_ref().ok_or(Error::NotRedundant)?;
    frame.frame.check_compatible(w, "tensor dual")?;
    let dual1 = &FrameSpectrum::new(f1).inverse()? * f1.vectors();
    let dual2 = &FrameSpectrum::new(f2).inverse()? * f2.vectors();
    let gram = f1.vectors().ad_mul(&dual1).kronecker(&f2.vectors().ad_mul(&dual2));
    let weights: Vec<Complex64> = frame.space().weights().iter().map(|&x| c(x, 0.0)).collect();
    let correction = scale_columns(w.vectors(), &weights) * gram;
    let canonical = dual1.kronecker(&dual2);
    Ok(Frame::from_parts(frame.space().clone(), canonical + w.vectors() - correction))
}

/// A verified dual of `F1 ⊗ F2` containing a non-simple column.
#[derive(Clone, Debug)]
pub struct NonSimpleDual {
    pub dual: TensorFrame,
    /// Index into the fixed candidate family: 0 is the constant family,
    /// `1 + k` the family supported on atom `k`.
    pub candidate: usize,
    /// First atom whose dual column is non-simple, and its Schmidt rank.
    pub atom: usize,
    pub rank: usize,
}

const CANDIDATE_SEED: u64 = 0x5eed_d0a1;

/// Searches a fixed, seeded family of rank-2 Bessel maps `W` for one whose
/// dual (via [`tensor_dual`]) has a column of Schmidt rank ≥ 2.
///
/// Candidate 0 puts the same rank-2 tensor in every column; candidates
/// `1 + k` put it only at atom `k`. The tensor is `α (e1⊗f1 + e2⊗f2)` from the
/// two leading Schmidt pairs of a seeded random tensor, with column norm
/// `0.1 ×` the mean column norm of the canonical dual.
pub fn nonsimple_dual(frame: &TensorFrame) -> Result<NonSimpleDual> {
    if frame.factors.is_none() {
        return Err(Error::NotRedundant);
    }
    let (n1, n2) = frame.dims;
    if n1 < 2 || n2 < 2 {
        return Err(Error::FactorsTooSmall(n1, n2));
    }
    if dual_space_dimension(&frame.frame)? == 0 {
        return Err(Error::NotRedundant);
    }
    let canonical = tensor_dual(frame, &frame.zeros_like())?;
    let mean_norm = canonical.vectors().column_iter().map(|c| c.norm()).sum::<f64>() / canonical.len() as f64;

    let mut rng = crate::random::rng(CANDIDATE_SEED);
    let seed_tensor = TensorVector::new((n1, n2), crate::random::random_vector(&mut rng, n1 * n2))?;
    let s = schmidt(&seed_tensor);
    let rank2 = kron_vec(&s.left[0], &s.right[0]).entries + kron_vec(&s.left[1], &s.right[1]).entries;
    let block = &rank2 * c(0.1 * mean_norm / rank2.norm(), 0.0);

    let k = frame.len();
    for candidate in 0..=k {
        let mut w = CMatrix::zeros(n1 * n2, k);
        match candidate {
            0 => w.column_iter_mut().for_each(|mut col| col.copy_from(&block)),
            atom => w.set_column(atom - 1, &block),
        }
        let dual = tensor_dual(frame, &frame.with_vectors(w)?)?;
        if !is_dual_pair(&frame.frame, &dual, 1e-10) {
            continue;
        }
        let tensor_dual = TensorFrame::from_family(dual, frame.product.clone(), frame.dims)?;
        let found = (0..k).find_map(|p| {
            let rank = simple_rank(&tensor_dual.tensor_column(p));
            (rank >= 2).then_some((p, rank))
        });
        if let Some((atom, rank)) = found {
            return Ok(NonSimpleDual {
                dual: tensor_dual,
                candidate,
                atom,
                rank,
            });
        }
    }
    Err(Error::NoNonSimpleDual)
}
