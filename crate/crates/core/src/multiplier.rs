//! Frame multipliers `M_{m,F,G} = T_G D_m T_F^*`, Schatten norms, traces and
//! partial traces.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frames::{frame_bounds, Frame};
use crate::json::{num, nums};
use crate::linalg::{mul_adjoint, scale_columns, CMatrix, LinearOperator, ZERO};
use crate::measure::{same_space, MeasureSpace, ProductMeasureSpace};
use crate::tensor::{kron_op, tensor_frame};

/// A complex function on the atoms of a measure space.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    space: Arc<MeasureSpace>,
    values: Vec<Complex64>,
}

impl Symbol {
    pub fn new(space: Arc<MeasureSpace>, values: Vec<Complex64>) -> Result<Self> {
        space.check_len(values.len(), "symbol")?;
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("symbol"));
        }
        Ok(Self { space, values })
    }

    pub fn constant(space: Arc<MeasureSpace>, value: Complex64) -> Self {
        let values = vec![value; space.len()];
        Self { space, values }
    }

    /// `1` on the listed atoms, `0` elsewhere.
    pub fn indicator(space: Arc<MeasureSpace>, atoms: &[usize]) -> Self {
        let mut values = vec![ZERO; space.len()];
        for &k in atoms {
            values[k] = Complex64::new(1.0, 0.0);
        }
        Self { space, values }
    }

    /// Evaluates `f` at each atom's coordinates.
    pub fn from_fn(space: Arc<MeasureSpace>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let values = space.points().iter().map(|p| f(p)).collect();
        Self::new(space, values)
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn conj(&self) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// `∫ m dμ`.
    pub fn integral(&self) -> Complex64 {
        self.space.integrate(&self.values).expect("symbol length matches its space")
    }

    /// `(Σ_k w_k |m_k|^p)^{1/p}`, or `max_k |m_k|` for `p = ∞`.
    pub fn norm_p(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            return Ok(self.norm_inf());
        }
        let peak = self.norm_inf();
        if peak == 0.0 {
            return Ok(0.0);
        }
        let sum: f64 = self
            .space
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * (v.norm() / peak).powf(p))
            .sum();
        Ok(peak * sum.powf(1.0 / p))
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.norm()))
    }

    /// `m1 ⊗ m2` on the product space, atom `(i, j)` at `i·K2 + j`.
    pub fn tensor(m1: &Symbol, m2: &Symbol) -> Symbol {
        let product = ProductMeasureSpace::new(m1.space.clone(), m2.space.clone());
        let values = m1
            .values
            .iter()
            .flat_map(|&a| m2.values.iter().map(move |&b| a * b))
            .collect();
        Symbol {
            space: product.space().clone(),
            values,
        }
    }

    fn weighted(&self) -> Vec<Complex64> {
        self.space.weights().iter().zip(&self.values).map(|(&w, &v)| v * w).collect()
    }
}

fn check_triple(m: &Symbol, f: &Frame, g: &Frame) -> Result<()> {
    f.check_compatible(g, "multiplier frames")?;
    if !same_space(&m.space, f.space()) {
        return Err(Error::SpaceMismatch("multiplier symbol"));
    }
    Ok(())
}

/// `M_{m,F,G} = Σ_k w_k m_k G(x_k) F(x_k)^*`, so that
/// `<M f, g> = ∫ m(x) <f, F(x)> <G(x), g> dμ(x)`.
pub fn multiplier(m: &Symbol, f: &Frame, g: &Frame) -> Result<LinearOperator> {
    check_triple(m, f, g)?;
    let weighted = scale_columns(g.vectors(), &m.weighted());
    Ok(LinearOperator::from_matrix(mul_adjoint(&weighted, f.vectors())))
}

/// [`multiplier`] summed over atom chunks in parallel; agrees with the
/// sequential result up to rounding.
pub fn multiplier_parallel(m: &Symbol, f: &Frame, g: &Frame, chunk: usize) -> Result<LinearOperator> {
    check_triple(m, f, g)?;
    let chunk = chunk.max(1);
    let n = f.dim();
    let weighted = m.weighted();
    let starts: Vec<usize> = (0..f.len()).step_by(chunk).collect();
    let total = starts
        .par_iter()
        .map(|&start| {
            let width = chunk.min(f.len() - start);
            let gs = scale_columns(
                &g.vectors().columns(start, width).into_owned(),
                &weighted[start..start + width],
            );
            mul_adjoint(&gs, &f.vectors().columns(start, width).into_owned())
        })
        .reduce(|| CMatrix::zeros(n, n), |a, b| a + b);
    Ok(LinearOperator::from_matrix(total))
}

/// `L_F = max_k ‖F(x_k)‖`.
pub fn norm_bound(frame: &Frame) -> f64 {
    frame.vectors().column_iter().fold(0.0, |acc, col| acc.max(col.norm()))
}

/// Operator norm of a multiplier against `‖m‖_∞ √(B_F B_G)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormBoundCheck {
    pub opnorm: f64,
    pub bound: f64,
}

impl NormBoundCheck {
    pub fn holds(&self) -> bool {
        self.opnorm <= self.bound * (1.0 + 1e-9)
    }
}

pub fn norm_bound_check(m: &Symbol, f: &Frame, g: &Frame) -> Result<NormBoundCheck> {
    let op = multiplier(m, f, g)?;
    let bound = m.norm_inf() * (frame_bounds(f).upper * frame_bounds(g).upper).sqrt();
    Ok(NormBoundCheck {
        opnorm: op.operator_norm(),
        bound,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchattenReport {
    /// `f64::INFINITY` for the operator norm.
    pub p: f64,
    pub norm: f64,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub bound: Option<f64>,
    pub slack: Option<f64>,
}

impl SchattenReport {
    pub fn holds(&self) -> bool {
        match self.bound {
            Some(b) => self.norm <= b + 1e-9 * b,
            None => true,
        }
    }

    pub fn to_json(&self) -> Value {
        let p = if self.p.is_infinite() { json!("inf") } else { num(self.p) };
        json!({
            "p": p,
            "norm": num(self.norm),
            "bound": self.bound.map_or(Value::Null, num),
            "slack": self.slack.map_or(Value::Null, num),
            "singular_values": nums(&self.singular_values),
        })
    }
}

fn lp_norm(values: &[f64], p: f64) -> f64 {
    let peak = values.iter().fold(0.0f64, |a, &b| a.max(b));
    if p.is_infinite() || peak == 0.0 {
        return peak;
    }
    peak * values.iter().map(|s| (s / peak).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `‖T‖_{S_p}`, the `ℓ^p` norm of the singular values.
pub fn schatten_norm(t: &LinearOperator, p: f64) -> Result<SchattenReport> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let singular_values = t.singular_values();
    Ok(SchattenReport {
        p,
        norm: lp_norm(&singular_values, p),
        singular_values,
        bound: None,
        slack: None,
    })
}

/// `‖M_{m,F,G}‖_{S_p}` against `‖m‖_p (L_F L_G)^{1/p} (B_F B_G)^{(p−1)/(2p)}`
/// (for `p = 1` this reads `‖m‖_1 L_F L_G`).
pub fn schatten_bound(m: &Symbol, f: &Frame, g: &Frame, p: f64) -> Result<SchattenReport> {
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::InvalidExponent(p));
    }
    let op = multiplier(m, f, g)?;
    let mut report = schatten_norm(&op, p)?;
    let (lf, lg) = (norm_bound(f), norm_bound(g));
    let mut bound = m.norm_p(p)? * (lf * lg).powf(1.0 / p);
    if p > 1.0 {
        let (bf, bg) = (frame_bounds(f).upper, frame_bounds(g).upper);
        bound *= (bf * bg).powf((p - 1.0) / (2.0 * p));
    }
    report.bound = Some(bound);
    report.slack = Some(bound - report.norm);
    Ok(report)
}

/// `Σ_i T[i, i]`.
pub fn trace(t: &LinearOperator) -> Result<Complex64> {
    t.require_square()?;
    Ok(t.matrix().diagonal().iter().sum())
}

/// Which tensor factor a partial trace removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceOut {
    /// Trace over `H1`; the result acts on `H2`.
    Left,
    /// Trace over `H2`; the result acts on `H1`.
    Right,
}

/// Partial trace on `ℂ^{n1} ⊗ ℂ^{n2}`; `Right` gives `R[a, a'] = Σ_b T[(a,b), (a',b)]`.
pub fn partial_trace(t: &LinearOperator, dims: (usize, usize), over: TraceOut) -> Result<LinearOperator> {
    let (n1, n2) = dims;
    t.require_square()?;
    if t.rows() != n1 * n2 {
        return Err(Error::DimensionMismatch {
            context: "partial trace",
            expected: n1 * n2,
            found: t.rows(),
        });
    }
    let m = t.matrix();
    let out = match over {
        TraceOut::Right => CMatrix::from_fn(n1, n1, |a, a2| (0..n2).map(|b| m[(a * n2 + b, a2 * n2 + b)]).sum()),
        TraceOut::Left => CMatrix::from_fn(n2, n2, |b, b2| (0..n1).map(|a| m[(a * n2 + b, a * n2 + b2)]).sum()),
    };
    Ok(LinearOperator::from_matrix(out))
}

/// Borrowed `(m, F, G)` describing one multiplier.
#[derive(Clone, Copy, Debug)]
pub struct MultiplierParts<'a> {
    pub symbol: &'a Symbol,
    pub analysis: &'a Frame,
    pub synthesis: &'a Frame,
}

impl<'a> MultiplierParts<'a> {
    pub fn new(symbol: &'a Symbol, analysis: &'a Frame, synthesis: &'a Frame) -> Self {
        Self {
            symbol,
            analysis,
            synthesis,
        }
    }

    pub fn build(&self) -> Result<LinearOperator> {
        multiplier(self.symbol, self.analysis, self.synthesis)
    }
}

/// The partial trace of a tensor multiplier next to the scaled component it should equal.
#[derive(Clone, Debug)]
pub struct PartialTraceCheck {
    pub reduced: LinearOperator,
    pub expected: LinearOperator,
    /// `‖reduced − expected‖_max`.
    pub deviation: f64,
}

/// Builds `M_{m1⊗m2, F1⊗F2, G1⊗G2}`, traces out one factor, and compares with
/// `M_1 Tr(M_2)` (or `Tr(M_1) M_2`).
pub fn multiplier_partial_trace(
    first: MultiplierParts<'_>,
    second: MultiplierParts<'_>,
    over: TraceOut,
) -> Result<PartialTraceCheck> {
    let m1 = first.build()?;
    let m2 = second.build()?;
    let symbol = Symbol::tensor(first.symbol, second.symbol);
    let f = tensor_frame(first.analysis, second.analysis);
    let g = tensor_frame(first.synthesis, second.synthesis);
    let joint = multiplier(&symbol, &f, &g)?;
    let dims = (first.analysis.dim(), second.analysis.dim());
    let reduced = partial_trace(&joint, dims, over)?;
    let expected = match over {
        TraceOut::Right => m1.scaled(trace(&m2)?),
        TraceOut::Left => m2.scaled(trace(&m1)?),
    };
    let deviation = reduced.max_abs_diff(&expected);
    Ok(PartialTraceCheck {
        reduced,
        expected,
        deviation,
    })
}

/// `M_{m1,F1,G1} ⊗ M_{m2,F2,G2}` assembled from the components.
pub fn kron_multiplier(first: MultiplierParts<'_>, second: MultiplierParts<'_>) -> Result<LinearOperator> {
    Ok(kron_op(&first.build()?, &second.build()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::frame_operator;
    use crate::linalg::{c, max_abs, HermitianEigen, ONE};
    use crate::random::{random_family_like, random_frame, random_matrix, random_positive_symbol, random_symbol, rng};
    use proptest::prelude::*;

    fn e1e2e1() -> Frame {
        Frame::from_real_columns(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn real_symbol(space: &Arc<MeasureSpace>, values: &[f64]) -> Symbol {
        Symbol::new(space.clone(), values.iter().map(|&v| c(v, 0.0)).collect()).unwrap()
    }

    #[test]
    fn multiplier_examples() {
        let onb = Frame::from_real_columns(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let one = Symbol::constant(onb.space().clone(), ONE);
        assert_eq!(multiplier(&one, &onb, &onb).unwrap(), LinearOperator::identity(2));

        let ind = Symbol::indicator(onb.space().clone(), &[1]);
        let p = multiplier(&ind, &onb, &onb).unwrap();
        assert_eq!(p, LinearOperator::from_diagonal(&[ZERO, ONE]));

        let f = e1e2e1();
        let m = real_symbol(f.space(), &[2.0, 0.0, 1.0]);
        assert_eq!(
            multiplier(&m, &f, &f).unwrap(),
            LinearOperator::from_diagonal(&[c(3.0, 0.0), ZERO])
        );

        let bad = Symbol::constant(Arc::new(MeasureSpace::counting(2).unwrap()), ONE);
        assert!(multiplier(&bad, &f, &f).is_err());
    }

    #[test]
    fn weak_form_matches() {
        let mut r = rng(31);
        let f = random_frame(&mut r, 3, 5);
        let g = random_family_like(&mut r, &f);
        let m = random_symbol(&mut r, f.space().clone());
        let op = multiplier(&m, &f, &g).unwrap();
        let (x, y) = (
            crate::random::random_vector(&mut r, 3),
            crate::random::random_vector(&mut r, 3),
        );
        let lhs = crate::linalg::inner(&op.apply(&x).unwrap(), &y);
        let mut rhs = ZERO;
        for k in 0..5 {
            let w = f.space().weights()[k];
            rhs += m.values()[k] * crate::linalg::inner(&x, &f.column(k)) * crate::linalg::inner(&g.column(k), &y) * w;
        }
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn norm_bound_check_examples() {
        let onb = Frame::from_real_columns(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let one = Symbol::constant(onb.space().clone(), ONE);
        let chk = norm_bound_check(&one, &onb, &onb).unwrap();
        assert!((chk.opnorm - 1.0).abs() < 1e-14 && (chk.bound - 1.0).abs() < 1e-14);

        // tight frame with bound 3/2, m ≡ -2i: opnorm = 2 · 3/2 = bound
        let cols: Vec<Vec<f64>> = [90.0f64, 210.0, 330.0]
            .iter()
            .map(|d| vec![d.to_radians().cos(), d.to_radians().sin()])
            .collect();
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        let merc = Frame::from_real_columns(&refs).unwrap();
        let m = Symbol::constant(merc.space().clone(), c(0.0, -2.0));
        let chk = norm_bound_check(&m, &merc, &merc).unwrap();
        assert!((chk.opnorm - 3.0).abs() < 1e-13 && (chk.bound - 3.0).abs() < 1e-13);
        assert!(chk.holds());
    }

    #[test]
    fn schatten_norm_examples() {
        assert!((schatten_norm(&LinearOperator::identity(4), 1.0).unwrap().norm - 4.0).abs() < 1e-14);
        let d = LinearOperator::from_diagonal(&[c(3.0, 0.0), c(0.0, 4.0)]);
        assert!((schatten_norm(&d, 2.0).unwrap().norm - 5.0).abs() < 1e-14);
        let mut r = rng(1);
        let t = LinearOperator::new(random_matrix(&mut r, 4, 3)).unwrap();
        assert_eq!(schatten_norm(&t, f64::INFINITY).unwrap().norm, t.operator_norm());
        assert_eq!(schatten_norm(&t, 0.5), Err(Error::InvalidExponent(0.5)));
        assert!(schatten_norm(&t, f64::NAN).is_err());
    }

    #[test]
    fn schatten_bound_examples() {
        // p = 1, symbol at a single atom of weight w: rank one, S1 norm = w |m_k| ‖F_k‖ ‖G_k‖
        let space = Arc::new(MeasureSpace::with_weights(vec![0.7, 1.3, 2.0]).unwrap());
        let mut r = rng(2);
        let unit = |v: crate::linalg::CVector| v.normalize();
        let f = Frame::from_columns(
            space.clone(),
            &(0..3)
                .map(|_| unit(crate::random::random_vector(&mut r, 2)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let g = Frame::from_columns(
            space.clone(),
            &(0..3)
                .map(|_| unit(crate::random::random_vector(&mut r, 2)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let mut values = vec![ZERO; 3];
        values[1] = c(0.0, 2.5);
        let m = Symbol::new(space, values).unwrap();
        let rep = schatten_bound(&m, &f, &g, 1.0).unwrap();
        assert!((rep.norm - 1.3 * 2.5).abs() < 1e-13);
        assert!((rep.bound.unwrap() - 1.3 * 2.5).abs() < 1e-13);

        let onb = Frame::from_real_columns(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]).unwrap();
        let rep = schatten_bound(&Symbol::constant(onb.space().clone(), ONE), &onb, &onb, 1.0).unwrap();
        assert!((rep.norm - 3.0).abs() < 1e-14 && (rep.bound.unwrap() - 3.0).abs() < 1e-14);
        assert!(rep.holds());

        assert!(schatten_bound(&Symbol::constant(onb.space().clone(), ONE), &onb, &onb, f64::INFINITY).is_err());
    }

    #[test]
    fn norm_bound_examples() {
        let onb = Frame::from_real_columns(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(norm_bound(&onb), 1.0);
        assert_eq!(
            norm_bound(&Frame::from_real_columns(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap()),
            2.0
        );
        let cols: Vec<Vec<f64>> = [90.0f64, 210.0, 330.0]
            .iter()
            .map(|d| vec![d.to_radians().cos(), d.to_radians().sin()])
            .collect();
        let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
        assert!((norm_bound(&Frame::from_real_columns(&refs).unwrap()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace(&LinearOperator::identity(5)).unwrap(), c(5.0, 0.0));
        let e1 = crate::linalg::rvector(&[1.0, 0.0]);
        let rank_one = LinearOperator::new(&e1 * e1.adjoint()).unwrap();
        assert_eq!(trace(&rank_one).unwrap(), ONE);
        let mut r = rng(3);
        let a = random_matrix(&mut r, 4, 4);
        let h = LinearOperator::new(&a + a.adjoint()).unwrap();
        let eig_sum: f64 = HermitianEigen::new(h.matrix()).values.iter().sum();
        assert!((trace(&h).unwrap() - c(eig_sum, 0.0)).norm() < 1e-12);
        assert!(matches!(trace(&LinearOperator::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn partial_trace_examples() {
        let t = kron_op(
            &LinearOperator::identity(2),
            &LinearOperator::from_diagonal(&[ONE, c(2.0, 0.0)]),
        );
        let r = partial_trace(&t, (2, 2), TraceOut::Right).unwrap();
        assert_eq!(r, LinearOperator::identity(2).scaled(c(3.0, 0.0)));

        let mut g = rng(4);
        let a1 = LinearOperator::new(random_matrix(&mut g, 2, 2)).unwrap();
        let a2 = LinearOperator::new(random_matrix(&mut g, 3, 3)).unwrap();
        let joint = kron_op(&a1, &a2);
        let right = partial_trace(&joint, (2, 3), TraceOut::Right).unwrap();
        assert!(right.max_abs_diff(&a1.scaled(trace(&a2).unwrap())) < 1e-13);
        let left = partial_trace(&joint, (2, 3), TraceOut::Left).unwrap();
        assert!(left.max_abs_diff(&a2.scaled(trace(&a1).unwrap())) < 1e-13);

        assert!(partial_trace(&joint, (3, 3), TraceOut::Right).is_err());
    }

    #[test]
    fn multiplier_partial_trace_examples() {
        let mut r = rng(5);
        let f1 = random_frame(&mut r, 2, 4);
        let g1 = random_family_like(&mut r, &f1);
        let m1 = random_symbol(&mut r, f1.space().clone());
        let f2 = random_frame(&mut r, 3, 4);
        let g2 = random_family_like(&mut r, &f2);
        let raw = random_symbol(&mut r, f2.space().clone());

        // scale m2 so that Tr(M2) = 1
        let t2 = trace(&multiplier(&raw, &f2, &g2).unwrap()).unwrap();
        let m2 = raw.scaled(t2.inv());
        let chk = multiplier_partial_trace(
            MultiplierParts::new(&m1, &f1, &g1),
            MultiplierParts::new(&m2, &f2, &g2),
            TraceOut::Right,
        )
        .unwrap();
        let m1_op = multiplier(&m1, &f1, &g1).unwrap();
        assert!(chk.reduced.max_abs_diff(&m1_op) <= 1e-12 * m1_op.max_abs());

        // Tr(M2) = 0: m2 supported where the diagonal contribution cancels
        let zero_tr = raw.scaled(ZERO);
        let chk = multiplier_partial_trace(
            MultiplierParts::new(&m1, &f1, &g1),
            MultiplierParts::new(&zero_tr, &f2, &g2),
            TraceOut::Right,
        )
        .unwrap();
        assert!(chk.reduced.max_abs() == 0.0);

        let chk = multiplier_partial_trace(
            MultiplierParts::new(&m1, &f1, &g1),
            MultiplierParts::new(&raw, &f2, &g2),
            TraceOut::Left,
        )
        .unwrap();
        assert!(chk.deviation <= 1e-12 * (1.0 + chk.expected.max_abs()));
    }

    #[test]
    fn parallel_assembly_matches() {
        let mut r = rng(6);
        let f = random_frame(&mut r, 4, 37);
        let g = random_family_like(&mut r, &f);
        let m = random_symbol(&mut r, f.space().clone());
        let seq = multiplier(&m, &f, &g).unwrap();
        for chunk in [1, 5, 64] {
            let par = multiplier_parallel(&m, &f, &g, chunk).unwrap();
            assert!(par.max_abs_diff(&seq) <= 1e-12 * seq.max_abs());
        }
    }

    #[test]
    fn symbol_norms_use_weights() {
        let space = Arc::new(MeasureSpace::with_weights(vec![0.5, 2.0]).unwrap());
        let m = Symbol::new(space, vec![c(3.0, 4.0), c(1.0, 0.0)]).unwrap();
        assert!((m.norm_p(1.0).unwrap() - 4.5).abs() < 1e-14);
        assert!((m.norm_p(2.0).unwrap() - (12.5f64 + 2.0).sqrt()).abs() < 1e-14);
        assert_eq!(m.norm_inf(), 5.0);
        assert!(m.norm_p(0.9).is_err());
    }

    #[test]
    fn report_json_shape() {
        let rep = schatten_norm(&LinearOperator::identity(2), f64::INFINITY).unwrap();
        let v = rep.to_json();
        assert_eq!(v["p"], json!("inf"));
        assert!(v["bound"].is_null());
        assert_eq!(v["singular_values"].as_array().unwrap().len(), 2);
    }

    fn instance(seed: u64, n: usize, k: usize) -> (Frame, Frame, Symbol) {
        let mut r = rng(seed);
        let f = random_frame(&mut r, n, k);
        let g = random_family_like(&mut r, &f);
        let m = random_symbol(&mut r, f.space().clone());
        (f, g, m)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn adjoint_identity(seed in any::<u64>(), n in 1usize..5, k in 1usize..8) {
            let (f, g, m) = instance(seed, n, k);
            let lhs = multiplier(&m, &f, &g).unwrap().adjoint();
            let rhs = multiplier(&m.conj(), &g, &f).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + lhs.max_abs()));
        }

        #[test]
        fn positive_symbol_gives_reweighted_frame_operator(seed in any::<u64>(), n in 1usize..5, k in 1usize..8) {
            let mut r = rng(seed);
            let f = random_frame(&mut r, n, k);
            let m = random_positive_symbol(&mut r, f.space().clone(), 0.1, 3.0);
            let op = multiplier(&m, &f, &f).unwrap();
            let eig = op.eigen_hermitian().unwrap();
            prop_assert!(eig.min() >= -1e-12 * eig.max().max(1e-300));
            let roots: Vec<Complex64> = m.values().iter().map(|v| c(v.re.sqrt(), 0.0)).collect();
            let s = frame_operator(&f.scale_columns(&roots).unwrap());
            prop_assert!(op.max_abs_diff(&s) <= 1e-12 * (1.0 + s.max_abs()));
        }

        #[test]
        fn tensor_multiplier_factorizes(seed in any::<u64>(), n1 in 1usize..4, n2 in 1usize..4, k1 in 1usize..5, k2 in 1usize..5) {
            let (f1, g1, m1) = instance(seed, n1, k1);
            let (f2, g2, m2) = instance(seed ^ 0xabcdef, n2, k2);
            let joint = multiplier(&Symbol::tensor(&m1, &m2), &tensor_frame(&f1, &f2), &tensor_frame(&g1, &g2)).unwrap();
            let kron = kron_multiplier(MultiplierParts::new(&m1, &f1, &g1), MultiplierParts::new(&m2, &f2, &g2)).unwrap();
            prop_assert!(joint.max_abs_diff(&kron) <= 1e-12 * (1.0 + kron.max_abs()));
        }

        #[test]
        fn schatten_monotone_in_p(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
            let mut r = rng(seed);
            let t = LinearOperator::new(random_matrix(&mut r, rows, cols)).unwrap();
            let ps = [1.0, 1.5, 2.0, 3.0, 7.0, f64::INFINITY];
            let norms: Vec<f64> = ps.iter().map(|&p| schatten_norm(&t, p).unwrap().norm).collect();
            prop_assert!(norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        }

        #[test]
        fn schatten_bounds_hold(seed in any::<u64>(), n in 1usize..6, k in 1usize..12, p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0])) {
            let (f, g, m) = instance(seed, n, k);
            let rep = schatten_bound(&m, &f, &g, p).unwrap();
            prop_assert!(rep.holds(), "norm {} bound {:?}", rep.norm, rep.bound);
            prop_assert!(norm_bound_check(&m, &f, &g).unwrap().holds());
        }

        #[test]
        fn partial_trace_linear_and_trace_preserving(seed in any::<u64>(), n1 in 1usize..4, n2 in 1usize..4) {
            let mut r = rng(seed);
            let n = n1 * n2;
            let a = LinearOperator::new(random_matrix(&mut r, n, n)).unwrap();
            let b = LinearOperator::new(random_matrix(&mut r, n, n)).unwrap();
            let alpha = crate::random::gaussian(&mut r);
            let mix = LinearOperator::new(a.matrix() * alpha + b.matrix()).unwrap();
            for over in [TraceOut::Left, TraceOut::Right] {
                let lhs = partial_trace(&mix, (n1, n2), over).unwrap();
                let rhs = LinearOperator::new(partial_trace(&a, (n1, n2), over).unwrap().matrix() * alpha + partial_trace(&b, (n1, n2), over).unwrap().matrix()).unwrap();
                prop_assert!(max_abs(&(lhs.matrix() - rhs.matrix())) <= 1e-12 * (1.0 + rhs.max_abs()));
                let tr = trace(&partial_trace(&a, (n1, n2), over).unwrap()).unwrap();
                prop_assert!((tr - trace(&a).unwrap()).norm() <= 1e-12 * (1.0 + a.max_abs() * n as f64));
            }
        }
    }
}
