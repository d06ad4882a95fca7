//! Finite atomic measure spaces.
//!
//! Every integral `∫ φ dμ` is the exact sum `Σ_k w_k φ(x_k)` over atoms, so
//! identities between frame operators hold exactly up to rounding. Atom
//! coordinates are carried as metadata only; the operator math depends on the
//! weights and their order.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{nums, parse_f64};

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpace {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl MeasureSpace {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace);
        }
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                context: "measure space points",
                expected: weights.len(),
                found: points.len(),
            });
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidWeight { index, value });
        }
        if !weights.iter().sum::<f64>().is_finite() {
            return Err(Error::InvalidWeight {
                index: 0,
                value: f64::INFINITY,
            });
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("measure space points"));
        }
        Ok(Self { points, weights })
    }

    /// One-dimensional atoms `0, 1, ..., K-1` with the given masses.
    pub fn with_weights(weights: Vec<f64>) -> Result<Self> {
        let points = (0..weights.len()).map(|k| vec![k as f64]).collect();
        Self::new(points, weights)
    }

    /// `K` atoms of unit mass.
    pub fn counting(k: usize) -> Result<Self> {
        Self::with_weights(vec![1.0; k])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Same atoms, every weight multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.points.clone(), self.weights.iter().map(|w| w * factor).collect())
    }

    /// `Σ_k w_k values[k]`.
    pub fn integrate(&self, values: &[Complex64]) -> Result<Complex64> {
        self.check_len(values.len(), "integrand")?;
        Ok(self
            .weights
            .iter()
            .zip(values)
            .fold(Complex64::new(0.0, 0.0), |acc, (&w, &v)| acc + v * w))
    }

    pub(crate) fn check_len(&self, found: usize, context: &'static str) -> Result<()> {
        if found == self.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                context,
                expected: self.len(),
                found,
            })
        }
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self.points.iter().map(|p| nums(p)).collect();
        json!({ "points": points, "weights": nums(&self.weights) })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            points: Vec<Vec<Value>>,
            weights: Vec<Value>,
        }
        let raw: Raw = serde_json::from_value(value.clone())?;
        let points = raw
            .points
            .iter()
            .map(|p| p.iter().map(parse_f64).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let weights = raw.weights.iter().map(parse_f64).collect::<Result<Vec<_>>>()?;
        Self::new(points, weights)
    }
}

/// `integrate(values, space)` as a free function.
pub fn integrate(values: &[Complex64], space: &MeasureSpace) -> Result<Complex64> {
    space.integrate(values)
}

/// Product of two atomic spaces, atoms in row-major order (right factor fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct ProductMeasureSpace {
    left: Arc<MeasureSpace>,
    right: Arc<MeasureSpace>,
    flat: Arc<MeasureSpace>,
}

impl ProductMeasureSpace {
    pub fn new(left: Arc<MeasureSpace>, right: Arc<MeasureSpace>) -> Self {
        let (k1, k2) = (left.len(), right.len());
        let mut points = Vec::with_capacity(k1 * k2);
        let mut weights = Vec::with_capacity(k1 * k2);
        for i in 0..k1 {
            for j in 0..k2 {
                let mut p = left.points[i].clone();
                p.extend_from_slice(&right.points[j]);
                points.push(p);
                weights.push(left.weights[i] * right.weights[j]);
            }
        }
        // factors are valid, so products of positive finite weights stay valid
        let flat = Arc::new(MeasureSpace { points, weights });
        Self { left, right, flat }
    }

    pub fn left(&self) -> &Arc<MeasureSpace> {
        &self.left
    }

    pub fn right(&self) -> &Arc<MeasureSpace> {
        &self.right
    }

    /// The product viewed as a plain atomic space.
    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.flat
    }

    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.left.len() && j < self.right.len());
        i * self.right.len() + j
    }

    pub fn split(&self, p: usize) -> (usize, usize) {
        (p / self.right.len(), p % self.right.len())
    }
}

pub fn product(a: &MeasureSpace, b: &MeasureSpace) -> ProductMeasureSpace {
    ProductMeasureSpace::new(Arc::new(a.clone()), Arc::new(b.clone()))
}

/// Pointer-or-value equality for shared spaces.
pub(crate) fn same_space(a: &Arc<MeasureSpace>, b: &Arc<MeasureSpace>) -> bool {
    Arc::ptr_eq(a, b) || a.weights == b.weights && a.points == b.points
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn make_space_examples() {
        let s = MeasureSpace::new(vec![vec![0.0]], vec![1.0]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.total_mass(), 1.0);

        let s = MeasureSpace::new(vec![vec![0.0], vec![1.0], vec![2.0]], vec![0.5; 3]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.total_mass(), 1.5);

        assert_eq!(
            MeasureSpace::with_weights(vec![1.0, -1.0]),
            Err(Error::InvalidWeight { index: 1, value: -1.0 })
        );
    }

    #[test]
    fn make_space_rejections() {
        assert_eq!(MeasureSpace::new(vec![], vec![]), Err(Error::EmptySpace));
        assert!(matches!(
            MeasureSpace::new(vec![vec![0.0]], vec![1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(MeasureSpace::with_weights(vec![0.0]).is_err());
        assert!(MeasureSpace::with_weights(vec![f64::NAN]).is_err());
        assert!(MeasureSpace::with_weights(vec![f64::INFINITY]).is_err());
        assert!(MeasureSpace::with_weights(vec![f64::MAX, f64::MAX]).is_err());
    }

    #[test]
    fn product_examples() {
        let p = product(
            &MeasureSpace::with_weights(vec![2.0]).unwrap(),
            &MeasureSpace::with_weights(vec![3.0]).unwrap(),
        );
        assert_eq!(p.space().weights(), &[6.0]);

        let p = product(&MeasureSpace::counting(2).unwrap(), &MeasureSpace::counting(3).unwrap());
        assert_eq!(p.len(), 6);
        assert!(p.space().weights().iter().all(|&w| w == 1.0));

        let p = product(
            &MeasureSpace::with_weights(vec![1.0, 2.0]).unwrap(),
            &MeasureSpace::with_weights(vec![3.0]).unwrap(),
        );
        assert_eq!(p.space().weights(), &[3.0, 6.0]);
    }

    #[test]
    fn product_points_concatenate() {
        let a = MeasureSpace::new(vec![vec![1.0], vec![2.0]], vec![1.0, 1.0]).unwrap();
        let b = MeasureSpace::new(vec![vec![5.0, 6.0]], vec![1.0]).unwrap();
        let p = product(&a, &b);
        assert_eq!(p.space().points()[1], vec![2.0, 5.0, 6.0]);
    }

    #[test]
    fn integrate_examples() {
        let ones = MeasureSpace::counting(3).unwrap();
        assert_eq!(integrate(&[z(1.0, 0.0); 3], &ones).unwrap(), z(3.0, 0.0));

        let s = MeasureSpace::with_weights(vec![2.0, 2.0]).unwrap();
        assert_eq!(s.integrate(&[z(0.0, 1.0), z(0.0, -1.0)]).unwrap(), z(0.0, 0.0));

        let s = MeasureSpace::with_weights(vec![0.5, 0.5, 1.0]).unwrap();
        assert_eq!(s.integrate(&[z(1.0, 0.0), z(2.0, 0.0), z(3.0, 0.0)]).unwrap(), z(4.5, 0.0));

        assert!(s.integrate(&[z(1.0, 0.0)]).is_err());
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let s = MeasureSpace::new(vec![vec![0.1, -3.0], vec![1.0 / 3.0, 2.0]], vec![0.7, 1e-9]).unwrap();
        let text = s.to_json().to_string();
        let back = MeasureSpace::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(s, back);
        assert!(MeasureSpace::from_json(&json!({"points": [[0]], "weights": [1], "extra": 1})).is_err());
    }

    proptest! {
        #[test]
        fn integrate_is_linear(
            w in prop::collection::vec(0.01f64..10.0, 1..12),
            seed in any::<u64>(),
            a in (-3.0f64..3.0, -3.0f64..3.0),
            b in (-3.0f64..3.0, -3.0f64..3.0),
        ) {
            let s = MeasureSpace::with_weights(w.clone()).unwrap();
            let mut state = seed;
            let mut next = || { state = state.wrapping_mul(6364136223846793005).wrapping_add(1); ((state >> 11) as f64) / (1u64 << 53) as f64 - 0.5 };
            let u: Vec<Complex64> = (0..w.len()).map(|_| z(next(), next())).collect();
            let v: Vec<Complex64> = (0..w.len()).map(|_| z(next(), next())).collect();
            let (alpha, beta) = (z(a.0, a.1), z(b.0, b.1));
            let mixed: Vec<Complex64> = u.iter().zip(&v).map(|(x, y)| alpha * x + beta * y).collect();
            let lhs = s.integrate(&mixed).unwrap();
            let rhs = alpha * s.integrate(&u).unwrap() + beta * s.integrate(&v).unwrap();
            let scale = 1.0 + lhs.norm().max(rhs.norm()) + s.total_mass() * 10.0;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }

        #[test]
        fn product_mass_factorizes_and_index_bijective(
            w1 in prop::collection::vec(0.01f64..5.0, 1..6),
            w2 in prop::collection::vec(0.01f64..5.0, 1..6),
        ) {
            let a = MeasureSpace::with_weights(w1).unwrap();
            let b = MeasureSpace::with_weights(w2).unwrap();
            let p = product(&a, &b);
            let rel = (p.space().total_mass() - a.total_mass() * b.total_mass()).abs() / (a.total_mass() * b.total_mass());
            prop_assert!(rel < 1e-13);
            for i in 0..a.len() {
                for j in 0..b.len() {
                    let idx = p.index(i, j);
                    prop_assert_eq!(idx, i * b.len() + j);
                    prop_assert_eq!(p.split(idx), (i, j));
                    prop_assert_eq!(p.space().weights()[idx], a.weights()[i] * b.weights()[j]);
                }
            }
        }
    }
}
