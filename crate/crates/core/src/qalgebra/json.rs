//! JSON encoding of scalars and polynomials.
//!
//! `{"terms":[{"m":..,"n":..,"coeff":{"re":[[p,num,den],..],"im":[..]}}]}`,
//! with arbitrary-size integers written as plain JSON numbers.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::Zero;
use serde_json::{json, Map, Number, Value};

use super::poly::{Monomial, QPolynomial};
use super::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid polynomial JSON: {0}")]
pub struct JsonError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError(msg.into()))
}

pub fn bigint_to_json(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse::<Number>().expect("integer literal is valid JSON"))
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt, JsonError> {
    let text = match v {
        Value::Number(n) => n.as_str().to_string(),
        Value::String(s) => s.clone(),
        _ => return err("expected an integer"),
    };
    text.parse::<BigInt>().or_else(|_| err(format!("not an integer: {text}")))
}

pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_str(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => Some(Rational::from_integer(text.parse::<BigInt>().ok()?)),
    }
}

pub fn scalar_to_json(c: &Scalar) -> Value {
    let mut re = Vec::new();
    let mut im = Vec::new();
    for (p, g) in c.coeffs() {
        for (part, out) in [(&g.re, &mut re), (&g.im, &mut im)] {
            if !part.is_zero() {
                out.push(json!([p, bigint_to_json(part.numer()), bigint_to_json(part.denom())]));
            }
        }
    }
    json!({ "re": re, "im": im })
}

fn parts_from_json(v: Option<&Value>) -> Result<Vec<(i32, Rational)>, JsonError> {
    let Some(v) = v else { return Ok(Vec::new()) };
    let Value::Array(items) = v else { return err("coefficient part must be an array") };
    items
        .iter()
        .map(|item| match item.as_array().map(Vec::as_slice) {
            Some([p, num, den]) => {
                let p = p
                    .as_i64()
                    .and_then(|p| i32::try_from(p).ok())
                    .ok_or_else(|| JsonError("s-power must be a small integer".into()))?;
                let den = bigint_from_json(den)?;
                if den.is_zero() {
                    return err("zero denominator");
                }
                Ok((p, Rational::new(bigint_from_json(num)?, den)))
            }
            _ => err("coefficient entry must be [s_power, num, den]"),
        })
        .collect()
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar, JsonError> {
    let obj = v.as_object().ok_or_else(|| JsonError("coefficient must be an object".into()))?;
    let mut out = Scalar::zero();
    for (p, r) in parts_from_json(obj.get("re"))? {
        out += Scalar::term(p, Complex::new(r, Rational::zero()));
    }
    for (p, r) in parts_from_json(obj.get("im"))? {
        out += Scalar::term(p, Complex::new(Rational::zero(), r));
    }
    Ok(out)
}

pub fn poly_to_json(f: &QPolynomial) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(mono, c)| {
            let mut obj = Map::new();
            obj.insert("m".into(), json!(mono.m));
            obj.insert("n".into(), json!(mono.n));
            obj.insert("coeff".into(), scalar_to_json(c));
            Value::Object(obj)
        })
        .collect();
    json!({ "terms": terms })
}

pub fn poly_from_json(v: &Value) -> Result<QPolynomial, JsonError> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| JsonError("missing \"terms\" array".into()))?;
    let mut out = QPolynomial::zero();
    for t in terms {
        let exp = |key: &str| {
            t.get(key)
                .and_then(Value::as_u64)
                .and_then(|e| u32::try_from(e).ok())
                .ok_or_else(|| JsonError(format!("term needs a nonnegative \"{key}\"")))
        };
        let mono = Monomial::new(exp("m")?, exp("n")?);
        let coeff = t.get("coeff").ok_or_else(|| JsonError("term needs \"coeff\"".into()))?;
        out.add_term(mono, scalar_from_json(coeff)?);
    }
    Ok(out)
}
