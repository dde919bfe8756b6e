//! JSON documents for matrices, fibre labels, solution points, choice
//! vectors and reports. Scalars are `[re, im]` pairs: numbers in float mode,
//! `"p/q"` strings in exact mode.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::census::{ChoiceVector, FiberClass, Permutation};
use crate::error::{GzError, Result};
use crate::matrix::Mat;
use crate::moment::{GZSpec, SregReport};
use crate::poly::{MonicPoly, Spectrum};
use crate::scalar::{Scalar, Tolerance};
use crate::solution::{BlockChoice, BlockStabilizer, Side, SolutionBlock, SolutionPoint, StabilizerPattern};

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| GzError::Schema(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| GzError::Schema(format!("{what} must be an array")))
}

fn uint(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| GzError::Schema(format!("{what} must be a non-negative integer")))
}

fn scalars<S: Scalar>(v: &Value, what: &str) -> Result<Vec<S>> {
    array(v, what)?.iter().map(S::from_wire).collect()
}

fn scalars_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(|s| s.to_wire()).collect())
}

pub fn mat_to_json<S: Scalar>(m: &Mat<S>) -> Value {
    json!({
        "mode": S::MODE.as_str(),
        "n": m.n(),
        "entries": m.rows().iter().map(|r| scalars_json(r)).collect::<Vec<_>>(),
    })
}

/// Accepts the matrix document or a bare array of rows.
pub fn mat_from_json<S: Scalar>(v: &Value) -> Result<Mat<S>> {
    let rows_v = if v.is_array() { v } else { field(v, "entries")? };
    let rows = array(rows_v, "entries")?
        .iter()
        .map(|r| scalars::<S>(r, "matrix row"))
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = v.get("n") {
        if uint(n, "n")? != rows.len() {
            return Err(GzError::Schema(format!("n = {n} but {} rows given", rows.len())));
        }
    }
    if rows.is_empty() {
        return Err(GzError::Schema("matrix must have at least one row".into()));
    }
    Mat::from_rows(rows).map_err(|e| GzError::Schema(e.to_string()))
}

pub fn spectrum_to_json<S: Scalar>(s: &Spectrum<S>) -> Value {
    Value::Array(
        s.roots()
            .iter()
            .map(|(r, m)| json!({"value": r.to_wire(), "mult": m}))
            .collect(),
    )
}

pub fn spectrum_from_json<S: Scalar>(v: &Value, tol: &Tolerance) -> Result<Spectrum<S>> {
    let roots = array(v, "roots")?
        .iter()
        .map(|r| Ok((S::from_wire(field(r, "value")?)?, uint(field(r, "mult")?, "mult")?)))
        .collect::<Result<Vec<_>>>()?;
    Spectrum::new(roots, tol)
}

pub fn poly_to_json<S: Scalar>(p: &MonicPoly<S>) -> Value {
    scalars_json(&p.coeffs)
}

/// Every level with its coefficients, plus roots whenever they are known or
/// can be extracted.
pub fn spec_to_json<S: Scalar>(c: &GZSpec<S>, tol: &Tolerance) -> Value {
    let levels: Vec<Value> = (1..=c.n())
        .map(|i| {
            let mut m = Map::new();
            m.insert("coeffs".into(), poly_to_json(c.level(i).expect("level in range")));
            if let Ok(s) = c.spectrum(i, tol) {
                m.insert("roots".into(), spectrum_to_json(&s));
            }
            Value::Object(m)
        })
        .collect();
    json!({"mode": S::MODE.as_str(), "n": c.n(), "levels": levels})
}

pub fn spec_from_json<S: Scalar>(v: &Value, tol: &Tolerance) -> Result<GZSpec<S>> {
    let levels = array(field(v, "levels")?, "levels")?;
    if let Some(n) = v.get("n") {
        if uint(n, "n")? != levels.len() {
            return Err(GzError::Schema(format!("n = {n} but {} levels given", levels.len())));
        }
    }
    let mut polys = Vec::with_capacity(levels.len());
    let mut spectra = Vec::with_capacity(levels.len());
    for (k, lv) in levels.iter().enumerate() {
        let roots = lv.get("roots").map(|r| spectrum_from_json::<S>(r, tol)).transpose()?;
        let poly = match (lv.get("coeffs"), &roots) {
            (Some(c), _) => MonicPoly::new(scalars(c, "coeffs")?),
            (None, Some(s)) => s.poly(),
            (None, None) => {
                return Err(GzError::Schema(format!("level {} needs \"coeffs\" or \"roots\"", k + 1)));
            }
        };
        polys.push(poly);
        spectra.push(roots);
    }
    let mut spec = GZSpec::new(polys).map_err(|e| GzError::Schema(e.to_string()))?;
    for (k, s) in spectra.into_iter().enumerate() {
        if let Some(s) = s {
            spec.set_spectrum(k + 1, s, tol)?;
        }
    }
    Ok(spec)
}

pub fn point_to_json<S: Scalar>(p: &SolutionPoint<S>) -> Value {
    json!({
        "level": p.level,
        "blocks": p.blocks.iter().map(|b| json!({
            "lambda": b.lambda.to_wire(),
            "mult": b.mult,
            "z": scalars_json(&b.z),
            "y": scalars_json(&b.y),
        })).collect::<Vec<_>>(),
        "w": p.w.to_wire(),
    })
}

pub fn point_from_json<S: Scalar>(v: &Value) -> Result<SolutionPoint<S>> {
    let blocks = array(field(v, "blocks")?, "blocks")?
        .iter()
        .map(|b| {
            Ok(SolutionBlock {
                lambda: S::from_wire(field(b, "lambda")?)?,
                mult: uint(field(b, "mult")?, "mult")?,
                z: scalars(field(b, "z")?, "z")?,
                y: scalars(field(b, "y")?, "y")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let p = SolutionPoint::new(blocks, S::from_wire(field(v, "w")?)?).map_err(|e| GzError::Schema(e.to_string()))?;
    if let Some(l) = v.get("level") {
        if uint(l, "level")? != p.level {
            return Err(GzError::Schema(format!("level {l} does not match block sizes summing to {}", p.level)));
        }
    }
    Ok(p)
}

pub fn block_choice_to_json<S: Scalar>(b: &BlockChoice<S>) -> Value {
    Value::Array(
        b.entries
            .iter()
            .map(|(r, s)| json!({"root": r.to_wire(), "choice": s.as_str()}))
            .collect(),
    )
}

pub fn block_choice_from_json<S: Scalar>(v: &Value) -> Result<BlockChoice<S>> {
    let entries = array(v, "level choice")?
        .iter()
        .map(|e| {
            let side: Side = field(e, "choice")?
                .as_str()
                .ok_or_else(|| GzError::Schema("choice must be a string".into()))?
                .parse()?;
            Ok((S::from_wire(field(e, "root")?)?, side))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockChoice::new(entries))
}

pub fn choice_to_json<S: Scalar>(v: &ChoiceVector<S>) -> Value {
    json!({"levels": v.levels.iter().map(block_choice_to_json).collect::<Vec<_>>()})
}

pub fn choice_from_json<S: Scalar>(v: &Value) -> Result<ChoiceVector<S>> {
    let levels = array(field(v, "levels")?, "levels")?
        .iter()
        .map(block_choice_from_json)
        .collect::<Result<Vec<_>>>()?;
    Ok(ChoiceVector::new(levels))
}

pub fn permutation_to_json(p: &Permutation) -> Value {
    json!(p.one_line())
}

pub fn permutation_from_json(v: &Value) -> Result<Permutation> {
    let line = array(v, "permutation")?
        .iter()
        .map(|k| uint(k, "permutation entry"))
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_one_line(line)
}

pub fn pattern_to_json(p: &BTreeSet<(usize, usize)>) -> Value {
    Value::Array(p.iter().map(|&(r, c)| json!([r, c])).collect())
}

pub fn sides_to_json(v: &[Side]) -> Value {
    Value::Array(v.iter().map(|s| json!(s.as_str())).collect())
}

pub fn sreg_to_json(r: &SregReport) -> Value {
    json!({
        "strongly_regular": r.via_differentials && r.agree(),
        "agree": r.agree(),
        "via_differentials": r.via_differentials,
        "via_centralizers": r.via_centralizers,
        "cutoff_regular": r.centralizers.cutoff_regular,
        "intersection_dims": r.centralizers.intersection_dims,
        "tangent_dim": r.tangent_dim,
        "expected_tangent_dim": r.n * (r.n - 1) / 2,
    })
}

pub fn stabilizer_to_json(s: &StabilizerPattern) -> Value {
    let blocks: Vec<Value> = s
        .blocks
        .iter()
        .map(|b| match b {
            BlockStabilizer::Full(d) => json!({"kind": "full", "dim": d}),
            BlockStabilizer::Unipotent(d) => json!({"kind": "unipotent", "dim": d}),
            BlockStabilizer::Trivial => json!({"kind": "trivial", "dim": 0}),
        })
        .collect();
    json!({"blocks": blocks, "dim": s.dim(), "free": s.dim() == 0})
}

pub fn fiber_class_to_json(f: &FiberClass) -> Value {
    json!({"j": f.j, "class": f.kind.as_str()})
}

pub fn error_to_json(e: &GzError) -> Value {
    json!({"error": {"kind": e.kind(), "detail": e.to_string()}})
}
