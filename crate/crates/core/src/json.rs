//! JSON encodings of series, tensors, jets and normal-tensor tuples.
//!
//! Rationals are strings `"p/q"` (a bare `"p"` is accepted on input).
//! Connection keys `"k,i,j"` are 1-based; absent keys are zero series.

use serde_json::{json, Map, Value};

use crate::connections::ConnectionJet;
use crate::error::{Error, Result};
use crate::rat::{self, Rat};
use crate::reduction::NormalTensorTuple;
use crate::series::{DiffeoJet, MultiIndex, TruncatedSeries};
use crate::tensors::{DenseTensor, NormalTensor, Variance};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("`{key}` must be a non-negative integer")))
}

fn bool_field(v: &Value, key: &str) -> Result<bool> {
    field(v, key)?
        .as_bool()
        .ok_or_else(|| bad(format!("`{key}` must be a boolean")))
}

fn rat_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => rat::parse(s),
        Value::Number(n) => n
            .as_i64()
            .map(rat::rat)
            .ok_or_else(|| bad(format!("non-integer number {n}; use a \"p/q\" string"))),
        other => Err(bad(format!("expected a rational, got {other}"))),
    }
}

pub fn rat_to_json(r: &Rat) -> Value {
    Value::String(rat::to_string(r))
}

pub fn series_to_json(s: &TruncatedSeries) -> Value {
    Value::Array(
        s.terms()
            .map(|(idx, c)| json!({"idx": idx.exponents(), "c": rat::to_string(c)}))
            .collect(),
    )
}

pub fn series_from_json(v: &Value, n: usize, order: usize) -> Result<TruncatedSeries> {
    let terms = v.as_array().ok_or_else(|| bad("a series is an array of terms"))?;
    let mut out = TruncatedSeries::zero(n, order);
    for t in terms {
        let idx: Vec<u32> = field(t, "idx")?
            .as_array()
            .ok_or_else(|| bad("`idx` must be an array"))?
            .iter()
            .map(|e| e.as_u64().map(|x| x as u32).ok_or_else(|| bad("bad exponent")))
            .collect::<Result<_>>()?;
        if idx.len() != n {
            return Err(Error::DimensionMismatch(idx.len(), n));
        }
        let idx = MultiIndex::new(idx);
        if idx.degree() as usize > order {
            return Err(bad(format!("term of degree {} above order {order}", idx.degree())));
        }
        out.add_term(idx, rat_value(field(t, "c")?)?);
    }
    Ok(out)
}

fn variance_name(v: Variance) -> &'static str {
    match v {
        Variance::Contra => "contra",
        Variance::Cov => "cov",
    }
}

pub fn tensor_to_json(t: &DenseTensor) -> Value {
    json!({
        "n": t.n(),
        "signature": t.signature().iter().map(|&v| variance_name(v)).collect::<Vec<_>>(),
        "entries": t.entries().iter().map(rat::to_string).collect::<Vec<_>>(),
    })
}

pub fn tensor_from_json(v: &Value) -> Result<DenseTensor> {
    let n = usize_field(v, "n")?;
    let signature = field(v, "signature")?
        .as_array()
        .ok_or_else(|| bad("`signature` must be an array"))?
        .iter()
        .map(|s| match s.as_str() {
            Some("contra") => Ok(Variance::Contra),
            Some("cov") => Ok(Variance::Cov),
            _ => Err(bad(format!("bad variance {s}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let entries = field(v, "entries")?
        .as_array()
        .ok_or_else(|| bad("`entries` must be an array"))?
        .iter()
        .map(rat_value)
        .collect::<Result<Vec<_>>>()?;
    DenseTensor::from_entries(n, signature, entries)
}

pub fn connection_to_json(j: &ConnectionJet) -> Value {
    let n = j.n();
    let mut gamma = Map::new();
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                let s = j.gamma(k, a, b);
                if !s.is_zero() {
                    gamma.insert(format!("{},{},{}", k + 1, a + 1, b + 1), series_to_json(s));
                }
            }
        }
    }
    json!({"n": n, "r": j.order(), "symmetric": j.symmetric(), "gamma": gamma})
}

fn parse_key(key: &str, n: usize) -> Result<(usize, usize, usize)> {
    let parts: Vec<usize> = key
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad(format!("bad key `{key}`"))))
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        &[k, i, j] if (1..=n).contains(&k) && (1..=n).contains(&i) && (1..=n).contains(&j) => {
            Ok((k - 1, i - 1, j - 1))
        }
        _ => Err(bad(format!("key `{key}` must be \"k,i,j\" with entries in 1..={n}"))),
    }
}

/// For symmetric jets a key given in only one order is mirrored.
pub fn connection_from_json(v: &Value) -> Result<ConnectionJet> {
    let n = usize_field(v, "n")?;
    if n == 0 {
        return Err(bad("dimension must be positive"));
    }
    let r = usize_field(v, "r")?;
    let symmetric = bool_field(v, "symmetric")?;
    let map = field(v, "gamma")?
        .as_object()
        .ok_or_else(|| bad("`gamma` must be an object"))?;
    let mut gamma = vec![TruncatedSeries::zero(n, r); n * n * n];
    let mut given = vec![false; n * n * n];
    for (key, s) in map {
        let (k, i, j) = parse_key(key, n)?;
        let pos = (k * n + i) * n + j;
        if given[pos] {
            return Err(bad(format!("key `{key}` repeated")));
        }
        gamma[pos] = series_from_json(s, n, r)?;
        given[pos] = true;
    }
    if symmetric {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = ((k * n + i) * n + j, (k * n + j) * n + i);
                    if given[a] && !given[b] {
                        gamma[b] = gamma[a].clone();
                    }
                }
            }
        }
    }
    ConnectionJet::new(n, r, symmetric, gamma)
}

pub fn tuple_to_json(t: &NormalTensorTuple) -> Value {
    json!({
        "n": t.n(),
        "order": t.order(),
        "symmetric": t.symmetric(),
        "tensors": t.tensors().iter().map(|c| tensor_to_json(c.tensor())).collect::<Vec<_>>(),
    })
}

pub fn tuple_from_json(v: &Value) -> Result<NormalTensorTuple> {
    let n = usize_field(v, "n")?;
    let order = usize_field(v, "order")?;
    let symmetric = bool_field(v, "symmetric")?;
    let tensors = field(v, "tensors")?
        .as_array()
        .ok_or_else(|| bad("`tensors` must be an array"))?;
    if tensors.len() != order + 1 {
        return Err(bad(format!("expected {} tensors, got {}", order + 1, tensors.len())));
    }
    let comps = tensors
        .iter()
        .enumerate()
        .map(|(m, t)| NormalTensor::new(tensor_from_json(t)?, m, symmetric))
        .collect::<Result<Vec<_>>>()?;
    NormalTensorTuple::new(n, symmetric, comps)
}

pub fn diffeo_to_json(d: &DiffeoJet) -> Value {
    json!({
        "n": d.n(),
        "order": d.order(),
        "components": d.components().iter().map(series_to_json).collect::<Vec<_>>(),
    })
}

pub fn diffeo_from_json(v: &Value) -> Result<DiffeoJet> {
    let n = usize_field(v, "n")?;
    let order = usize_field(v, "order")?;
    let comps = field(v, "components")?
        .as_array()
        .ok_or_else(|| bad("`components` must be an array"))?;
    if comps.len() != n {
        return Err(Error::DimensionMismatch(comps.len(), n));
    }
    DiffeoJet::new(
        comps
            .iter()
            .map(|c| series_from_json(c, n, order))
            .collect::<Result<_>>()?,
    )
}
