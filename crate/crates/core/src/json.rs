//! JSON helpers. Floats are written with 17 significant digits so that every
//! value round-trips exactly.

use num_complex::Complex64;
use serde_json::{Number, Value};

use crate::error::{Error, Result};

/// A float as a JSON number with 17 significant digits; non-finite values map to `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(text.parse::<Number>().expect("formatted float is valid JSON"))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// `[re, im]`.
pub fn complex_pair(z: Complex64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn parse_f64(v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::Json(format!("expected a number, found {v}")))
}

pub fn parse_complex(v: &Value) -> Result<Complex64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?)),
        _ => match v.as_f64() {
            Some(re) => Ok(Complex64::new(re, 0.0)),
            None => Err(Error::Json(format!("expected [re, im], found {v}"))),
        },
    }
}
