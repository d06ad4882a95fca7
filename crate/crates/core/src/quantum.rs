//! Admissible multipliers as density operators of bipartite states.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::json::{complex_pair, num};
use crate::linalg::{c, inner, CVector, LinearOperator};
use crate::localization::gabor_frame;
use crate::multiplier::{multiplier, partial_trace, trace, Symbol, TraceOut};
use crate::tensor::tensor_frame;

/// Tolerance of the Hermitian, positivity and unit-trace checks.
pub const DENSITY_TOL: f64 = 1e-10;

/// The quantities behind a density-operator check.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// `‖ρ − ρ^*‖_max / ‖ρ‖_max`.
    pub hermitian_defect: f64,
    pub min_eig: f64,
    pub max_eig: f64,
    pub trace: Complex64,
    pub hermitian: bool,
    pub psd: bool,
    pub unit_trace: bool,
    pub reasons: Vec<String>,
}

impl Diagnostics {
    pub fn admissible(&self) -> bool {
        self.hermitian && self.psd && self.unit_trace
    }
}

fn diagnose(op: &LinearOperator, tol: f64) -> Diagnostics {
    let mut reasons = Vec::new();
    if !op.is_square() {
        reasons.push(format!("operator is {}x{}", op.rows(), op.cols()));
        return Diagnostics {
            hermitian_defect: f64::NAN,
            min_eig: f64::NAN,
            max_eig: f64::NAN,
            trace: c(f64::NAN, f64::NAN),
            hermitian: false,
            psd: false,
            unit_trace: false,
            reasons,
        };
    }
    let scale = op.max_abs();
    let hermitian_defect = if scale == 0.0 { 0.0 } else { op.hermitian_defect() / scale };
    let eig = op.eigen_hermitian().expect("square operator");
    let (min_eig, max_eig) = (eig.min(), eig.max());
    let tr = trace(op).expect("square operator");

    let hermitian = hermitian_defect <= tol;
    let psd = min_eig >= -tol * max_eig.max(0.0);
    let unit_trace = (tr - 1.0).norm() <= tol;
    if !hermitian {
        reasons.push(format!("hermitian defect {hermitian_defect:e} exceeds {tol:e}"));
    }
    if !psd {
        reasons.push(format!("smallest eigenvalue {min_eig:e} is negative"));
    }
    if !unit_trace {
        reasons.push(format!("trace {} + {}i is not 1", tr.re, tr.im));
    }
    Diagnostics {
        hermitian_defect,
        min_eig,
        max_eig,
        trace: tr,
        hermitian,
        psd,
        unit_trace,
        reasons,
    }
}

/// Checks that `m` is self-adjoint, positive semidefinite and of unit trace.
pub fn is_admissible(m: &LinearOperator) -> (bool, Diagnostics) {
    let d = diagnose(m, DENSITY_TOL);
    (d.admissible(), d)
}

/// A certified density operator.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    op: LinearOperator,
    diagnostics: Diagnostics,
}

impl DensityOperator {
    pub fn new(op: LinearOperator) -> Result<Self> {
        Self::with_tolerance(op, DENSITY_TOL)
    }

    /// Certifies with a looser tolerance, e.g. one that absorbs a wavelet
    /// system's tightness deviation.
    pub fn with_tolerance(op: LinearOperator, tol: f64) -> Result<Self> {
        let diagnostics = diagnose(&op, tol);
        if diagnostics.admissible() {
            Ok(Self { op, diagnostics })
        } else {
            Err(Error::NotDensity(diagnostics.reasons.join("; ")))
        }
    }

    pub fn operator(&self) -> &LinearOperator {
        &self.op
    }

    pub fn into_operator(self) -> LinearOperator {
        self.op
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    pub fn trace(&self) -> f64 {
        self.diagnostics.trace.re
    }

    pub fn min_eig(&self) -> f64 {
        self.diagnostics.min_eig
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "trace": num(self.trace()),
            "min_eig": num(self.min_eig()),
            "purity": num(self.purity()),
        })
    }
}

/// `Tr ρ²`, computed as the squared Frobenius norm of the Hermitian `ρ`.
pub fn purity(rho: &DensityOperator) -> f64 {
    rho.op.matrix().iter().map(Complex64::norm_sqr).sum()
}

/// Both sides of the trace formula for a Gabor multiplier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceFormula {
    /// `Tr M_{m, π φ, π ψ}`.
    pub lhs: Complex64,
    /// `<ψ, φ> ∫ m`.
    pub rhs: Complex64,
}

impl TraceFormula {
    pub fn error(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.error() <= tol * self.rhs.norm().max(1.0)
    }

    pub fn to_json(&self) -> Value {
        json!({ "lhs": complex_pair(self.lhs), "rhs": complex_pair(self.rhs) })
    }
}

/// Evaluates `Tr M_{m, π(x,ω)φ, π(x,ω)ψ}` and `<ψ, φ> ∫ m` for a symbol on
/// the `N × N` Gabor grid.
pub fn trace_formula(m: &Symbol, phi: &CVector, psi: &CVector) -> Result<TraceFormula> {
    let f = gabor_frame(phi)?;
    let g = gabor_frame(psi)?;
    let op = multiplier(m, f.frame(), g.frame())?;
    Ok(TraceFormula {
        lhs: trace(&op)?,
        rhs: inner(psi, phi) * m.integral(),
    })
}

/// Scales `m` so that the multiplier with analysis windows `phi` and synthesis
/// windows `psi` (one per tensor factor) has unit trace.
pub fn normalize_symbol(m: &Symbol, phi: &[&CVector], psi: &[&CVector]) -> Result<Symbol> {
    if phi.len() != psi.len() {
        return Err(Error::LengthMismatch {
            context: "window tuples",
            expected: phi.len(),
            found: psi.len(),
        });
    }
    let mut pairing = c(1.0, 0.0);
    for (p, q) in phi.iter().zip(psi) {
        let ip = inner(q, p);
        if ip.norm() <= 1e-14 * p.norm() * q.norm() {
            return Err(Error::OrthogonalWindows);
        }
        pairing *= ip;
    }
    let integral = m.integral();
    let mass: f64 = m.space().weights().iter().zip(m.values()).map(|(w, v)| w * v.norm()).sum();
    if integral.norm() <= 1e-14 * mass || mass == 0.0 {
        return Err(Error::ZeroIntegral);
    }
    Ok(m.scaled((pairing * integral).inv()))
}

/// A product state with its two reduced operators.
#[derive(Clone, Debug)]
pub struct SeparableDensity {
    pub rho: DensityOperator,
    /// Reduced operator on the first factor (the second traced out).
    pub rho1: DensityOperator,
    /// Reduced operator on the second factor.
    pub rho2: DensityOperator,
    /// `‖Tr_2 ρ − ρ1‖_max`.
    pub right_deviation: f64,
    /// `‖Tr_1 ρ − ρ2‖_max`.
    pub left_deviation: f64,
}

impl SeparableDensity {
    pub fn to_json(&self) -> Value {
        let mut left = self.rho2.to_json();
        left["deviation"] = num(self.left_deviation);
        let mut right = self.rho1.to_json();
        right["deviation"] = num(self.right_deviation);
        json!({
            "trace": num(self.rho.trace()),
            "min_eig": num(self.rho.min_eig()),
            "purity": num(self.rho.purity()),
            "reduced_left": left,
            "reduced_right": right,
        })
    }
}

fn check_nonnegative(m: &Symbol) -> Result<()> {
    for (index, v) in m.values().iter().enumerate() {
        if v.re < 0.0 || v.im != 0.0 {
            return Err(Error::NegativeSymbol {
                index,
                value: format!("{} + {}i", v.re, v.im),
            });
        }
    }
    Ok(())
}

fn unit_trace(op: LinearOperator, tol: f64) -> Result<DensityOperator> {
    let tr = trace(&op)?;
    if tr.norm() == 0.0 {
        return Err(Error::ZeroIntegral);
    }
    DensityOperator::with_tolerance(op.scaled(tr.inv()), tol)
}

/// `ρ = M_{m1⊗m2, F1⊗F2, F1⊗F2}` for nonnegative symbols and arbitrary frames,
/// with the trace of `ρ`, `ρ1`, `ρ2` divided out.
pub fn separable_density_frames(m1: &Symbol, f1: &Frame, m2: &Symbol, f2: &Frame, tol: f64) -> Result<SeparableDensity> {
    check_nonnegative(m1)?;
    check_nonnegative(m2)?;
    let joint = tensor_frame(f1, f2);
    let rho = unit_trace(multiplier(&Symbol::tensor(m1, m2), &joint, &joint)?, tol)?;
    let rho1 = unit_trace(multiplier(m1, f1, f1)?, tol)?;
    let rho2 = unit_trace(multiplier(m2, f2, f2)?, tol)?;
    let dims = (f1.dim(), f2.dim());
    let right_deviation = partial_trace(rho.operator(), dims, TraceOut::Right)?.max_abs_diff(rho1.operator());
    let left_deviation = partial_trace(rho.operator(), dims, TraceOut::Left)?.max_abs_diff(rho2.operator());
    Ok(SeparableDensity {
        rho,
        rho1,
        rho2,
        right_deviation,
        left_deviation,
    })
}

/// Separable state from Gabor systems with windows `φ1`, `φ2`.
///
/// Each symbol is first scaled to `∫ m_j = 1/‖φ_j‖²`, which gives unit
/// component traces by the trace formula; the final traces are then divided
/// out so the unit-trace check is exact.
pub fn separable_density(m1: &Symbol, m2: &Symbol, phi1: &CVector, phi2: &CVector) -> Result<SeparableDensity> {
    check_nonnegative(m1)?;
    check_nonnegative(m2)?;
    let f1 = gabor_frame(phi1)?;
    let f2 = gabor_frame(phi2)?;
    let m1 = normalize_symbol(m1, &[phi1], &[phi1])?;
    let m2 = normalize_symbol(m2, &[phi2], &[phi2])?;
    separable_density_frames(&m1, f1.frame(), &m2, f2.frame(), DENSITY_TOL)
}
