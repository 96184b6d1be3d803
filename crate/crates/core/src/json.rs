//! JSON wire format. Integers and rationals travel as decimal strings
//! (`"7"`, `"-3/2"`), so nothing is lost to floating point. Object keys are
//! emitted in sorted order, which makes output byte-stable under a
//! parse/emit round trip.
//!
//! * label: `{"r": "1", "s": ["2", "4"]}`
//! * element: `[{"coeff": "7", "label": {...}}, ...]`, sorted by label
//! * matrix: row-major array of decimal strings

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::coset::RepSet;
use crate::error::{HeckeError, Result};
use crate::hecke::HeckeElement;
use crate::intmat::{CosetLabel, IntMatrix};
use crate::report::{Claim, Report};

fn bad(msg: impl Into<String>) -> HeckeError {
    HeckeError::Parse { line: 0, msg: msg.into() }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad(format!("bad rational '{s}'")))?;
    let d: BigInt = d.trim().parse().map_err(|_| bad(format!("bad rational '{s}'")))?;
    if d.is_zero() {
        return Err(bad(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(n, d))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field '{key}'")))
}

pub fn label_to_json(l: &CosetLabel) -> Value {
    json!({
        "r": rational_to_string(l.r()),
        "s": l.s().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    })
}

pub fn label_from_json(v: &Value) -> Result<CosetLabel> {
    let r = parse_rational(as_str(field(v, "r")?, "r")?)?;
    let s = as_array(field(v, "s")?, "s")?
        .iter()
        .map(|x| {
            let t = as_str(x, "s entry")?;
            t.parse::<BigUint>().map_err(|_| bad(format!("bad divisor '{t}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    CosetLabel::new(r, s)
}

pub fn element_to_json(e: &HeckeElement) -> Value {
    Value::Array(
        e.terms()
            .map(|(l, c)| json!({ "coeff": rational_to_string(c), "label": label_to_json(l) }))
            .collect(),
    )
}

pub fn element_from_json(v: &Value) -> Result<HeckeElement> {
    let mut out = HeckeElement::zero();
    for t in as_array(v, "element")? {
        let label = label_from_json(field(t, "label")?)?;
        let coeff = parse_rational(as_str(field(t, "coeff")?, "coeff")?)?;
        out.add_term(label, coeff);
    }
    Ok(out)
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(m.entries().iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<IntMatrix> {
    let entries = as_array(v, "matrix")?
        .iter()
        .map(|x| {
            let t = as_str(x, "matrix entry")?;
            t.parse::<BigInt>().map_err(|_| bad(format!("bad integer '{t}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = (1..=3).find(|k| k * k == entries.len()).ok_or_else(|| bad(format!("{} entries is not a square", entries.len())))?;
    IntMatrix::new(n, entries)
}

pub fn repset_to_json(set: &RepSet) -> Value {
    json!({
        "count": set.len(),
        "label": label_to_json(set.label()),
        "side": set.side().to_string(),
        "representatives": set.reps().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn claim_to_json(c: &Claim) -> Value {
    json!({ "name": c.name, "expected": c.expected, "actual": c.actual, "pass": c.pass })
}

pub fn report_to_json(r: &Report) -> Value {
    json!({
        "suite": r.suite,
        "params": r.params,
        "pass": r.passed(),
        "claims": r.claims.iter().map(claim_to_json).collect::<Vec<_>>(),
    })
}

/// Canonical pretty form with sorted keys and a trailing newline.
pub fn emit(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

/// Parse and re-emit. Inputs that came from [`emit`] are returned unchanged.
pub fn reemit(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    Ok(emit(&v))
}

/// Builds an object from `(key, value)` pairs; keys end up sorted.
pub fn object(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::expected_intro_2;

    #[test]
    fn rationals() {
        for s in ["7", "-3/2", "0"] {
            assert_eq!(rational_to_string(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(rational_to_string(&parse_rational("4/6").unwrap()), "2/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn element_round_trip() {
        let e = expected_intro_2(3).unwrap().scaled(&parse_rational("1/9").unwrap());
        let v = element_to_json(&e);
        assert_eq!(element_from_json(&v).unwrap(), e);
        let text = emit(&v);
        assert_eq!(reemit(&text).unwrap(), text);
    }

    #[test]
    fn label_shape() {
        let l = CosetLabel::from_diagonal(&[2, 4, 8]).unwrap();
        assert_eq!(serde_json::to_string(&label_to_json(&l)).unwrap(), r#"{"r":"2","s":["2","4"]}"#);
    }

    #[test]
    fn matrix_round_trip() {
        let m = IntMatrix::from_i64(3, &[2, 1, 0, 0, 2, 1, 0, 0, 1]).unwrap();
        assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m);
        assert!(matrix_from_json(&json!(["1", "2"])).is_err());
    }
}
