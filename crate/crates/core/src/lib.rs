//! Continuous frames over atomic measure spaces: frame operators and duals,
//! tensor products, multipliers, time-frequency localization operators and
//! multiplier-based density operators.

pub mod error;
pub mod frames;
pub mod json;
pub mod linalg;
pub mod localization;
pub mod measure;
pub mod multiplier;
pub mod quantum;
pub mod random;
pub mod tensor;

pub use error::{Error, Result};
pub use frames::{
    analysis, canonical_dual, cross_frame_operator, dual_from_bessel, dual_space_dimension, frame_bounds, frame_operator,
    is_dual_pair, synthesis, CoefficientFunction, Frame, FrameBounds, FRAME_EPS,
};
pub use linalg::{CMatrix, CVector, LinearOperator};
pub use localization::{
    gabor_frame, localize_mixed, localize_stft, localize_wavelet, stft, wavelet_frame, GaborSystem, WaveletGrid, WaveletSystem,
    WindowPreset,
};
pub use measure::{integrate, product, MeasureSpace, ProductMeasureSpace};
pub use multiplier::{
    multiplier, multiplier_parallel, multiplier_partial_trace, norm_bound, norm_bound_check, partial_trace, schatten_bound,
    schatten_norm, trace, MultiplierParts, SchattenReport, Symbol, TraceOut,
};
pub use num_complex::Complex64;
pub use quantum::{is_admissible, normalize_symbol, purity, separable_density, trace_formula, DensityOperator, SeparableDensity};
pub use tensor::{
    bound_constants, kron_op, kron_vec, nonsimple_dual, schmidt, simple_rank, tensor_dual, tensor_frame, TensorFrame,
    TensorVector,
};
