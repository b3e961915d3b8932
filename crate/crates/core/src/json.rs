//! JSON encoding of states, certificates and results.
//!
//! States use `{"shape":{"dh":..,"dj":..},"kind":"operator"|"vector","data":[[re,im],..]}`
//! with row-major flattening. Matrices inside certificates use
//! `{"rows":..,"cols":..,"data":[[re,im],..]}`, also row-major.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bipartite::linalg::c;
use crate::bipartite::{BipartiteOperator, BipartiteVector, CMatrix, CVector, Shape};
use crate::cross_norm::{
    Bound, Certificate, NormBounds, SignedDecomposition, StandardDecomposition,
};
use crate::error::{Error, Result};
use crate::injective::{GNormEstimate, ProductCandidate};
use crate::separability::{Classification, Evidence, Witness};

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Operator(BipartiteOperator),
    Vector(BipartiteVector),
}

impl State {
    pub fn shape(&self) -> Shape {
        match self {
            State::Operator(o) => o.shape(),
            State::Vector(v) => v.shape(),
        }
    }

    /// The operator itself, or `|v⟩⟨v|` for a vector.
    pub fn operator(&self) -> BipartiteOperator {
        match self {
            State::Operator(o) => o.clone(),
            State::Vector(v) => v.projector(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Operator,
    Vector,
}

#[derive(Serialize, Deserialize)]
struct RawShape {
    dh: usize,
    dj: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    shape: RawShape,
    kind: Kind,
    data: Vec<[f64; 2]>,
}

fn syntax(e: serde_json::Error) -> Error {
    let text = e.to_string();
    let message = match text.rsplit_once(" at line ") {
        Some((head, _)) => head.to_string(),
        None => text,
    };
    Error::Json {
        line: e.line(),
        column: e.column(),
        message,
    }
}

fn entries(data: &[[f64; 2]]) -> Result<Vec<crate::C64>> {
    if data.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(data.iter().map(|[re, im]| c(*re, *im)).collect())
}

fn pairs(it: impl Iterator<Item = crate::C64>) -> Vec<[f64; 2]> {
    it.map(|z| [z.re, z.im]).collect()
}

pub fn parse_state(text: &str) -> Result<State> {
    let raw: RawState = serde_json::from_str(text).map_err(syntax)?;
    let shape = Shape::new(raw.shape.dh, raw.shape.dj)?;
    let vals = entries(&raw.data)?;
    match raw.kind {
        Kind::Operator => {
            let n = shape.dim();
            if vals.len() != n * n {
                return Err(Error::DimensionMismatch {
                    expected: format!("{} entries for shape {shape}", n * n),
                    got: format!("{} entries", vals.len()),
                });
            }
            let m = CMatrix::from_row_slice(n, n, &vals);
            Ok(State::Operator(BipartiteOperator::new(shape, m)?))
        }
        Kind::Vector => {
            if vals.len() != shape.dim() {
                return Err(Error::DimensionMismatch {
                    expected: format!("{} entries for shape {shape}", shape.dim()),
                    got: format!("{} entries", vals.len()),
                });
            }
            Ok(State::Vector(BipartiteVector::new(shape, CVector::from_vec(vals))?))
        }
    }
}

pub fn state_value(state: &State) -> Value {
    let shape = state.shape();
    let (kind, data) = match state {
        State::Operator(o) => (Kind::Operator, pairs(o.matrix().transpose().iter().copied())),
        State::Vector(v) => (Kind::Vector, pairs(v.data().iter().copied())),
    };
    serde_json::to_value(RawState {
        shape: RawShape {
            dh: shape.dh(),
            dj: shape.dj(),
        },
        kind,
        data,
    })
    .expect("state encodes")
}

pub fn state_to_string(state: &State) -> String {
    serde_json::to_string_pretty(&state_value(state)).expect("state encodes")
}

pub fn matrix_value(m: &CMatrix) -> Value {
    json!({
        "rows": m.nrows(),
        "cols": m.ncols(),
        "data": pairs(m.transpose().iter().copied()),
    })
}

pub fn vector_value(v: &CVector) -> Value {
    Value::from(
        v.iter()
            .map(|z| json!([z.re, z.im]))
            .collect::<Vec<_>>(),
    )
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::InvalidParameter(format!("missing field \"{key}\"")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::InvalidParameter(format!("field \"{key}\" must be an integer")))
}

fn f64_field(v: &Value, key: &str) -> Result<f64> {
    field(v, key)?
        .as_f64()
        .ok_or_else(|| Error::InvalidParameter(format!("field \"{key}\" must be a number")))
}

pub fn matrix_from_value(v: &Value) -> Result<CMatrix> {
    let (rows, cols) = (usize_field(v, "rows")?, usize_field(v, "cols")?);
    let data: Vec<[f64; 2]> = serde_json::from_value(field(v, "data")?.clone())
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    if data.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: format!("{} entries", rows * cols),
            got: format!("{} entries", data.len()),
        });
    }
    Ok(CMatrix::from_row_slice(rows, cols, &entries(&data)?))
}

fn shape_value(s: Shape) -> Value {
    json!({"dh": s.dh(), "dj": s.dj()})
}

fn shape_from_value(v: &Value) -> Result<Shape> {
    Shape::new(usize_field(v, "dh")?, usize_field(v, "dj")?)
}

pub fn standard_value(d: &StandardDecomposition) -> Value {
    json!({
        "shape": shape_value(d.shape),
        "weight": d.weight(),
        "terms": d.terms.iter().map(|t| json!({
            "weight": t.weight,
            "left": matrix_value(&t.left),
            "right": matrix_value(&t.right),
        })).collect::<Vec<_>>(),
    })
}

pub fn signed_value(d: &SignedDecomposition) -> Value {
    json!({
        "shape": shape_value(d.shape),
        "total": d.total(),
        "hermitian_weight": d.hermitian_weight(),
        "terms": d.terms.iter().map(|t| json!({
            "coeff": t.coeff,
            "rho": matrix_value(&t.rho),
            "sigma": matrix_value(&t.sigma),
        })).collect::<Vec<_>>(),
    })
}

fn terms(v: &Value) -> Result<&Vec<Value>> {
    field(v, "terms")?
        .as_array()
        .ok_or_else(|| Error::InvalidParameter("\"terms\" must be an array".into()))
}

pub fn standard_from_value(v: &Value) -> Result<StandardDecomposition> {
    let mut d = StandardDecomposition::new(shape_from_value(field(v, "shape")?)?);
    for t in terms(v)? {
        d.push(
            f64_field(t, "weight")?,
            matrix_from_value(field(t, "left")?)?,
            matrix_from_value(field(t, "right")?)?,
        );
    }
    Ok(d)
}

pub fn signed_from_value(v: &Value) -> Result<SignedDecomposition> {
    let mut d = SignedDecomposition::new(shape_from_value(field(v, "shape")?)?);
    for t in terms(v)? {
        d.push(
            f64_field(t, "coeff")?,
            matrix_from_value(field(t, "rho")?)?,
            matrix_from_value(field(t, "sigma")?)?,
        );
    }
    Ok(d)
}

pub fn certificate_value(cert: &Certificate) -> Value {
    match cert {
        Certificate::TraceNorm => json!({"type": "trace_norm"}),
        Certificate::Realignment => json!({"type": "realignment"}),
        Certificate::Witness(v) => json!({
            "type": "witness",
            "shape": shape_value(v.shape()),
            "vector": vector_value(v.data()),
        }),
        Certificate::Standard(d) => json!({"type": "standard", "decomposition": standard_value(d)}),
        Certificate::Signed(d) => json!({"type": "signed", "decomposition": signed_value(d)}),
        Certificate::Doubled(inner) => json!({"type": "doubled", "inner": certificate_value(inner)}),
        Certificate::Split { real, imag } => json!({
            "type": "split",
            "real": certificate_value(real),
            "imag": certificate_value(imag),
        }),
    }
}

pub fn bound_value(b: &Bound) -> Value {
    json!({
        "value": b.value,
        "method": b.method,
        "certificate": certificate_value(&b.certificate),
    })
}

pub fn norm_bounds_value(b: &NormBounds) -> Value {
    json!({
        "pi": {
            "lower": bound_value(&b.pi_lower),
            "upper": bound_value(&b.pi_upper),
            "value": b.pi_value(),
        },
        "hermitian": {
            "lower": bound_value(&b.h_lower),
            "upper": bound_value(&b.h_upper),
            "value": b.h_value(),
        },
        "indirect": b.indirect,
        "candidates": b.candidates.iter().map(|(m, n, s, v)| json!({
            "method": m, "norm": n, "side": s, "value": v,
        })).collect::<Vec<_>>(),
    })
}

fn candidate_value(p: &ProductCandidate) -> Value {
    json!({
        "phi": vector_value(&p.phi),
        "psi": vector_value(&p.psi),
        "eta": vector_value(&p.eta),
        "chi": vector_value(&p.chi),
    })
}

pub fn g_norm_value(g: &GNormEstimate) -> Value {
    json!({
        "g_norm": {
            "lower": g.lower_bound,
            "upper": g.upper_bound,
            "converged": g.converged,
        },
        "candidate": candidate_value(&g.candidate),
        "iterations": g.iterations_used,
        "restart": g.restart,
    })
}

pub fn witness_value(w: &Witness) -> Value {
    json!({
        "kind": w.kind,
        "g_norm_certified_upper": w.g_norm_certified_upper,
        "shape": shape_value(w.operator.shape()),
        "vector": w.vector.as_ref().map(|v| vector_value(v.data())),
        "operator": matrix_value(w.operator.matrix()),
    })
}

pub fn classification_value(cl: &Classification) -> Value {
    let evidence = match &cl.evidence {
        Evidence::Mixture(d) => json!({"type": "mixture", "decomposition": signed_value(d)}),
        Evidence::Witness {
            witness,
            expectation,
        } => json!({
            "type": "witness",
            "expectation": expectation,
            "witness": witness_value(witness),
        }),
        Evidence::Bounds(b) => json!({"type": "bounds", "bounds": norm_bounds_value(b)}),
    };
    json!({"verdict": cl.verdict, "evidence": evidence})
}
