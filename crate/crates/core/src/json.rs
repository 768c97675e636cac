//! JSON encodings shared by the library types and the command line.
//!
//! Rationals are lowest-terms strings (`"-3/4"`, `"2"`). Quadratic numbers are
//! `{"a","b","c","d"}` meaning `(a + b·√d)/c` with integer strings. Complex
//! exact numbers are `{"re","im"}` whose parts use either form. Float complex
//! numbers are `{"re": <f64>, "im": <f64>}`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::{Edge, Mode, WeightedGraph};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::scalar::{format_rational, parse_quad, parse_rational, quad_integer_form, Quad, Scalar};

pub const SCHEMA: &str = "qws/1";

pub fn quad_to_json(q: &Quad) -> Value {
    match q.as_rational() {
        Some(r) => Value::String(format_rational(r)),
        None => {
            let (a, b, c) = quad_integer_form(q);
            json!({
                "a": a.to_string(),
                "b": b.to_string(),
                "c": c.to_string(),
                "d": q.radicand().unwrap_or(0),
            })
        }
    }
}

pub fn quad_from_json(v: &Value) -> Result<Quad> {
    match v {
        Value::String(s) => parse_quad(s),
        Value::Number(n) if n.is_i64() => Ok(Quad::from(n.as_i64().unwrap())),
        Value::Object(m) if m.contains_key("d") => {
            let int = |key: &str| -> Result<BigInt> {
                let field = m.get(key).ok_or_else(|| Error::Parse(format!("quadratic number missing {key:?}")))?;
                let text = match field {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(Error::Parse(format!("field {key:?} must be an integer"))),
                };
                text.trim().parse().map_err(|_| Error::Parse(format!("bad integer {text:?}")))
            };
            let (a, b, c) = (int("a")?, int("b")?, int("c")?);
            let d = m
                .get("d")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("radicand d must be a non-negative integer".into()))?;
            if c == BigInt::from(0) {
                return Err(Error::Parse("zero denominator c".into()));
            }
            let d = u32::try_from(d).map_err(|_| Error::Parse("radicand too large".into()))?;
            let c = BigRational::from_integer(c);
            Quad::new(BigRational::from_integer(a) / c.clone(), BigRational::from_integer(b) / c, d)
        }
        _ => Err(Error::Parse(format!("expected an exact number, got {v}"))),
    }
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(Error::Parse(format!("expected a rational string, got {v}"))),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    if s.is_real() {
        quad_to_json(&s.re)
    } else {
        json!({"re": quad_to_json(&s.re), "im": quad_to_json(&s.im)})
    }
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::Object(m) if m.contains_key("re") || m.contains_key("im") => {
            let part = |key: &str| m.get(key).map(quad_from_json).transpose();
            let re = part("re")?.unwrap_or_else(|| Quad::from(0));
            let im = part("im")?.unwrap_or_else(|| Quad::from(0));
            if !re.compatible(&im) {
                return Err(Error::MixedRadicals(re.radicand().unwrap_or(0), im.radicand().unwrap_or(0)));
            }
            Ok(Scalar::new(re, im))
        }
        _ => Ok(Scalar::real(quad_from_json(v)?)),
    }
}

pub fn c64_to_json(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

pub fn c64_from_json(v: &Value) -> Result<Complex64> {
    let part = |key: &str| {
        v.get(key)
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Parse(format!("complex number missing float {key:?}")))
    };
    Ok(Complex64::new(part("re")?, part("im")?))
}

pub fn poly_to_json(p: &Poly<Quad>) -> Value {
    Value::Array(p.coeffs().iter().map(quad_to_json).collect())
}

pub fn poly_from_json(v: &Value) -> Result<Poly<Quad>> {
    let items = v.as_array().ok_or_else(|| Error::Parse("polynomial must be an array".into()))?;
    let coeffs = items.iter().map(quad_from_json).collect::<Result<Vec<_>>>()?;
    check_single_radical(&coeffs)?;
    Ok(Poly::new(coeffs))
}

fn check_single_radical(qs: &[Quad]) -> Result<()> {
    let mut d = None;
    for q in qs {
        if let Some(r) = q.radicand() {
            match d {
                Some(prev) if prev != r => return Err(Error::MixedRadicals(prev, r)),
                _ => d = Some(r),
            }
        }
    }
    Ok(())
}

pub fn rf_to_json(f: &RationalFunction<Quad>) -> Value {
    json!({"num": poly_to_json(f.num()), "den": poly_to_json(f.den())})
}

pub fn rf_from_json(v: &Value) -> Result<RationalFunction<Quad>> {
    let num = poly_from_json(v.get("num").ok_or_else(|| Error::Parse("missing \"num\"".into()))?)?;
    let den = poly_from_json(v.get("den").ok_or_else(|| Error::Parse("missing \"den\"".into()))?)?;
    if let (Some(a), Some(b)) = (num.radicand(), den.radicand()) {
        if a != b {
            return Err(Error::MixedRadicals(a, b));
        }
    }
    RationalFunction::new(num, den)
}

pub fn graph_to_value(g: &WeightedGraph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!({"u": e.u, "v": e.v, "w": scalar_to_json(&e.w)}))
        .collect();
    let mode = match g.mode() {
        Mode::Real => "real",
        Mode::Hermitian => "hermitian",
    };
    let (t1, t2) = g.terminals();
    json!({"n": g.n(), "edges": edges, "terminals": [t1, t2], "mode": mode})
}

/// Compact canonical serialization (field order is fixed).
pub fn graph_to_string(g: &WeightedGraph) -> String {
    graph_to_value(g).to_string()
}

pub fn graph_from_value(v: &Value) -> Result<WeightedGraph> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("graph must be a JSON object".into()))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing vertex count \"n\"".into()))? as usize;
    let mode = match obj.get("mode") {
        None => Mode::Real,
        Some(m) => serde_json::from_value::<Mode>(m.clone())
            .map_err(|_| Error::Parse(format!("mode must be \"real\" or \"hermitian\", got {m}")))?,
    };
    let index = |e: &Map<String, Value>, key: &str| -> Result<usize> {
        e.get(key)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| Error::Parse(format!("edge field {key:?} must be a non-negative integer")))
    };
    let mut edges = Vec::new();
    for item in obj.get("edges").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"edges\"".into()))? {
        let e = item.as_object().ok_or_else(|| Error::Parse("edge must be an object".into()))?;
        let w = e.get("w").ok_or_else(|| Error::Parse("edge missing weight \"w\"".into()))?;
        edges.push(Edge::new(index(e, "u")?, index(e, "v")?, scalar_from_json(w)?));
    }
    let terms = obj
        .get("terminals")
        .and_then(Value::as_array)
        .filter(|t| t.len() == 2)
        .ok_or_else(|| Error::Parse("\"terminals\" must be a pair".into()))?;
    let t = |i: usize| {
        terms[i]
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| Error::Parse("terminal must be a non-negative integer".into()))
    };
    WeightedGraph::new(n, edges, (t(0)?, t(1)?), mode)
}

/// Parses and validates a graph document.
pub fn parse_graph(bytes: &[u8]) -> Result<WeightedGraph> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    graph_from_value(&v)
}

pub fn read_graph(path: &std::path::Path) -> Result<WeightedGraph> {
    let bytes = std::fs::read(path)?;
    parse_graph(&bytes)
}
