// Copyright 2026 The fsqd Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON documents for states (`.state.json`), Hamiltonians (`.ham.json`)
//! and schedules (`.sched.json`).
//!
//! Complex numbers are `[re, im]` arrays and matrices are dense arrays of
//! rows:
//!
//! ```json
//! {"dim": 2, "amplitudes": [[1, 0], [0, 0]], "normalize": false}
//! {"dim": 2, "matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}
//! {"kind": "piecewise_constant",
//!  "segments": [{"t_start": 0, "matrix": ...}, {"t_start": 1, "matrix": ...}]}
//! ```
//!
//! A Hamiltonian document may also be the bare matrix. Schedules are
//! `constant` (`matrix`), `piecewise_constant` (`segments` of
//! `{t_start, matrix}`) or `sampled` (`samples` of `{t, matrix}`, linearly
//! interpolated); a Hamiltonian document is accepted as a constant schedule.

use fsqd_core::{
    CMatrix, Complex64, Error as CoreError, HamiltonianSchedule, HermitianOperator, ScheduleKind,
    StateVector,
};
use serde_json::{json, Map, Value};

use crate::error::FormatError;

type Result<T> = std::result::Result<T, FormatError>;

pub fn parse_state(text: &str) -> Result<StateVector> {
    state_from_value(&serde_json::from_str(text)?, "")
}

pub fn parse_hamiltonian(text: &str) -> Result<HermitianOperator> {
    hamiltonian_from_value(&serde_json::from_str(text)?, "")
}

pub fn parse_schedule(text: &str) -> Result<HamiltonianSchedule> {
    schedule_from_value(&serde_json::from_str(text)?, "")
}

pub fn state_to_json(state: &StateVector) -> String {
    pretty(&json!({
        "dim": state.dim(),
        "amplitudes": complex_array(state.amplitudes()),
    }))
}

pub fn hamiltonian_to_json(h: &HermitianOperator) -> String {
    pretty(&hamiltonian_value(h))
}

pub fn schedule_to_json(schedule: &HamiltonianSchedule) -> String {
    let value = match schedule.kind() {
        ScheduleKind::Constant => json!({
            "kind": "constant",
            "matrix": matrix_value(schedule.nodes()[0].1.matrix()),
        }),
        ScheduleKind::PiecewiseConstant => json!({
            "kind": "piecewise_constant",
            "segments": schedule.nodes().iter()
                .map(|(t, h)| json!({"t_start": t, "matrix": matrix_value(h.matrix())}))
                .collect::<Vec<_>>(),
        }),
        ScheduleKind::Sampled => json!({
            "kind": "sampled",
            "samples": schedule.nodes().iter()
                .map(|(t, h)| json!({"t": t, "matrix": matrix_value(h.matrix())}))
                .collect::<Vec<_>>(),
        }),
    };
    pretty(&value)
}

pub(crate) fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub(crate) fn complex_array(values: &[Complex64]) -> Value {
    Value::Array(values.iter().map(|z| json!([z.re, z.im])).collect())
}

fn matrix_value(m: &CMatrix) -> Value {
    Value::Array(m.rows().map(complex_array).collect())
}

fn hamiltonian_value(h: &HermitianOperator) -> Value {
    json!({"dim": h.dim(), "matrix": matrix_value(h.matrix())})
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_owned()
    } else {
        format!("{prefix}.{key}")
    }
}

fn root_name(prefix: &str) -> String {
    if prefix.is_empty() {
        "document".to_owned()
    } else {
        prefix.to_owned()
    }
}

fn as_object<'a>(value: &'a Value, prefix: &str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| FormatError::field(root_name(prefix), "expected an object"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], prefix: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(FormatError::field(join(prefix, k), "unknown key")),
        None => Ok(()),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, prefix: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| FormatError::field(join(prefix, key), "missing"))
}

pub(crate) fn number(value: &Value, field: &str) -> Result<f64> {
    match value.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(FormatError::field(field, "expected a finite number")),
    }
}

fn complex(value: &Value, field: &str) -> Result<Complex64> {
    let pair = value
        .as_array()
        .ok_or_else(|| FormatError::field(field, "expected a [re, im] pair"))?;
    if pair.len() != 2 {
        return Err(FormatError::field(field, format!("expected [re, im], found {} entries", pair.len())));
    }
    Ok(Complex64::new(number(&pair[0], &format!("{field}[0]"))?, number(&pair[1], &format!("{field}[1]"))?))
}

fn complex_list(value: &Value, field: &str) -> Result<Vec<Complex64>> {
    value
        .as_array()
        .ok_or_else(|| FormatError::field(field, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, z)| complex(z, &format!("{field}[{i}]")))
        .collect()
}

fn declared_dim(obj: &Map<String, Value>, prefix: &str) -> Result<Option<usize>> {
    match obj.get("dim") {
        None => Ok(None),
        Some(v) => match v.as_u64() {
            Some(d) => Ok(Some(d as usize)),
            None => Err(FormatError::field(join(prefix, "dim"), "expected a nonnegative integer")),
        },
    }
}

pub(crate) fn state_from_value(value: &Value, prefix: &str) -> Result<StateVector> {
    let obj = as_object(value, prefix)?;
    reject_unknown(obj, &["dim", "amplitudes", "normalize"], prefix)?;
    let field = join(prefix, "amplitudes");
    let amplitudes = complex_list(required(obj, "amplitudes", prefix)?, &field)?;
    if let Some(dim) = declared_dim(obj, prefix)? {
        if dim != amplitudes.len() {
            return Err(FormatError::field(
                join(prefix, "dim"),
                format!("declared {dim} but amplitudes has {} entries", amplitudes.len()),
            ));
        }
    }
    let normalize = match obj.get("normalize") {
        None => false,
        Some(v) => v
            .as_bool()
            .ok_or_else(|| FormatError::field(join(prefix, "normalize"), "expected a boolean"))?,
    };
    let state = StateVector::new(amplitudes).map_err(|e| FormatError::numeric(&field, e))?;
    if normalize {
        fsqd_core::normalize(&state).map_err(|e| FormatError::numeric(&field, e))
    } else {
        state.ensure_normalized().map_err(|e| FormatError::numeric(&field, e))?;
        Ok(state)
    }
}

fn matrix_from_value(value: &Value, field: &str) -> Result<HermitianOperator> {
    let rows = value.as_array().ok_or_else(|| FormatError::field(field, "expected an array of rows"))?;
    let n = rows.len();
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let row_field = format!("{field}[{i}]");
            let row = complex_list(row, &row_field)?;
            if row.len() != n {
                return Err(FormatError::field(
                    row_field,
                    format!("matrix is not square: {n} rows but {} entries", row.len()),
                ));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    HermitianOperator::from_rows(rows).map_err(|e| FormatError::numeric(field, e))
}

pub(crate) fn hamiltonian_from_value(value: &Value, prefix: &str) -> Result<HermitianOperator> {
    if value.is_array() {
        let field = if prefix.is_empty() { "matrix".to_owned() } else { prefix.to_owned() };
        return matrix_from_value(value, &field);
    }
    let obj = as_object(value, prefix)?;
    reject_unknown(obj, &["dim", "matrix"], prefix)?;
    let h = matrix_from_value(required(obj, "matrix", prefix)?, &join(prefix, "matrix"))?;
    if let Some(dim) = declared_dim(obj, prefix)? {
        if dim != h.dim() {
            return Err(FormatError::field(
                join(prefix, "dim"),
                format!("declared {dim} but matrix is {0}x{0}", h.dim()),
            ));
        }
    }
    Ok(h)
}

pub(crate) fn schedule_from_value(value: &Value, prefix: &str) -> Result<HamiltonianSchedule> {
    let obj = match value {
        Value::Array(_) => return Ok(HamiltonianSchedule::constant(hamiltonian_from_value(value, prefix)?)),
        _ => as_object(value, prefix)?,
    };
    let kind = match obj.get("kind") {
        None if obj.contains_key("matrix") => {
            return Ok(HamiltonianSchedule::constant(hamiltonian_from_value(value, prefix)?))
        }
        None => return Err(FormatError::field(join(prefix, "kind"), "missing")),
        Some(k) => k
            .as_str()
            .ok_or_else(|| FormatError::field(join(prefix, "kind"), "expected a string"))?,
    };
    match kind {
        "constant" => {
            reject_unknown(obj, &["kind", "matrix"], prefix)?;
            let field = join(prefix, "matrix");
            Ok(HamiltonianSchedule::constant(matrix_from_value(required(obj, "matrix", prefix)?, &field)?))
        }
        "piecewise_constant" => {
            reject_unknown(obj, &["kind", "segments"], prefix)?;
            let field = join(prefix, "segments");
            let nodes = nodes_from_value(required(obj, "segments", prefix)?, &field, "t_start")?;
            HamiltonianSchedule::piecewise_constant(nodes).map_err(|e| node_error(&field, "t_start", e))
        }
        "sampled" => {
            reject_unknown(obj, &["kind", "samples"], prefix)?;
            let field = join(prefix, "samples");
            let nodes = nodes_from_value(required(obj, "samples", prefix)?, &field, "t")?;
            HamiltonianSchedule::sampled(nodes).map_err(|e| node_error(&field, "t", e))
        }
        other => Err(FormatError::field(
            join(prefix, "kind"),
            format!("unknown schedule kind `{other}`, expected constant, piecewise_constant or sampled"),
        )),
    }
}

fn nodes_from_value(value: &Value, field: &str, time_key: &str) -> Result<Vec<(f64, HermitianOperator)>> {
    value
        .as_array()
        .ok_or_else(|| FormatError::field(field, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let prefix = format!("{field}[{i}]");
            let obj = as_object(node, &prefix)?;
            reject_unknown(obj, &[time_key, "matrix"], &prefix)?;
            let t = number(required(obj, time_key, &prefix)?, &join(&prefix, time_key))?;
            let h = matrix_from_value(required(obj, "matrix", &prefix)?, &join(&prefix, "matrix"))?;
            Ok((t, h))
        })
        .collect()
}

fn node_error(field: &str, time_key: &str, e: CoreError) -> FormatError {
    match e {
        CoreError::ScheduleOrder(k) => FormatError::numeric(format!("{field}[{k}].{time_key}"), e),
        _ => FormatError::numeric(field, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn state_examples() {
        let s = parse_state(r#"{"dim":2,"amplitudes":[[1,0],[0,0]]}"#).unwrap();
        assert_eq!(s, StateVector::basis(2, 0).unwrap());

        let s = parse_state(r#"{"dim":2,"amplitudes":[[1,0],[1,0]],"normalize":true}"#).unwrap();
        for z in s.amplitudes() {
            assert!((z - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }

        let err = parse_state(r#"{"dim":2,"amplitudes":[[1,0],[1,0]]}"#).unwrap_err();
        match err.numeric_source() {
            Some(CoreError::NotNormalized { norm, .. }) => assert!((norm - SQRT_2).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        let msg = err.to_string();
        assert!(msg.starts_with("amplitudes:"), "{msg}");
        assert!(msg.contains("1.4142135623730951"), "{msg}");
    }

    #[test]
    fn state_errors_name_the_field() {
        let cases = [
            (r#"{"amplitudes":[[1,0],["x",0]]}"#, "amplitudes[1][0]"),
            (r#"{"amplitudes":[[1,0],[0]]}"#, "amplitudes[1]"),
            (r#"{"amplitudes":[[0,0],[0,0]]}"#, "amplitudes"),
            (r#"{"dim":3,"amplitudes":[[1,0],[0,0]]}"#, "dim"),
            (r#"{"amplitudes":[[1,0]]}"#, "amplitudes"),
            (r#"{"amplitudes":[[1,0],[0,0]],"normalise":true}"#, "normalise"),
            (r#"{"dim":2}"#, "amplitudes"),
            (r#"[1, 2]"#, "document"),
        ];
        for (text, field) in cases {
            let msg = parse_state(text).unwrap_err().to_string();
            assert!(msg.starts_with(&format!("{field}:")), "{text} -> {msg}");
        }
        assert!(matches!(parse_state("{"), Err(FormatError::Json(_))));
    }

    #[test]
    fn hamiltonian_examples() {
        let h = parse_hamiltonian("[[[0,0],[0,0]],[[0,0],[1,0]]]").unwrap();
        assert_eq!(h, HermitianOperator::from_diagonal(&[0.0, 1.0]).unwrap());

        let h = parse_hamiltonian("[[[0,0],[1,0]],[[1,0],[0,0]]]").unwrap();
        assert_eq!(h.eigenvalues().len(), 2);
        assert!((h.eigenvalues()[0] + 1.0).abs() < 1e-15);

        let err = parse_hamiltonian("[[[0,0],[1,0]],[[0,0],[0,0]]]").unwrap_err();
        assert!(matches!(
            err.numeric_source(),
            Some(CoreError::NotHermitian { deviation, row: 0, col: 1 }) if *deviation == 1.0
        ));
        assert!(err.to_string().contains("M[0][1]"), "{err}");
    }

    #[test]
    fn hamiltonian_errors() {
        let err = parse_hamiltonian("[[[0,0],[1,0]],[[1,0]]]").unwrap_err();
        assert!(err.to_string().starts_with("matrix[1]:"), "{err}");
        let err = parse_hamiltonian(r#"{"dim":3,"matrix":[[[0,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap_err();
        assert!(err.to_string().starts_with("dim:"), "{err}");
        let err = parse_hamiltonian(r#"{"matrix":[[[0,0],[0,0]],[[0,0],[1,true]]]}"#).unwrap_err();
        assert!(err.to_string().starts_with("matrix[1][1][1]:"), "{err}");
    }

    #[test]
    fn schedule_documents() {
        let text = r#"{"kind":"piecewise_constant","segments":[
            {"t_start":0,"matrix":[[[0,0],[0,0]],[[0,0],[1,0]]]},
            {"t_start":1,"matrix":[[[0,0],[0,0]],[[0,0],[2,0]]]}]}"#;
        let s = parse_schedule(text).unwrap();
        assert_eq!(s.kind(), ScheduleKind::PiecewiseConstant);
        assert_eq!(parse_schedule(&schedule_to_json(&s)).unwrap(), s);

        let s = parse_schedule("[[[0,0],[0,0]],[[0,0],[1,0]]]").unwrap();
        assert_eq!(s.kind(), ScheduleKind::Constant);
        let s = parse_schedule(r#"{"dim":2,"matrix":[[[0,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
        assert_eq!(s.kind(), ScheduleKind::Constant);

        let bad_order = r#"{"kind":"sampled","samples":[
            {"t":0,"matrix":[[[0,0],[0,0]],[[0,0],[1,0]]]},
            {"t":0,"matrix":[[[0,0],[0,0]],[[0,0],[1,0]]]}]}"#;
        let err = parse_schedule(bad_order).unwrap_err();
        assert!(err.to_string().starts_with("samples[1].t:"), "{err}");

        let err = parse_schedule(r#"{"kind":"linear"}"#).unwrap_err();
        assert!(err.to_string().starts_with("kind:"), "{err}");
        let err = parse_schedule(r#"{"kind":"sampled","samples":[{"t":0}]}"#).unwrap_err();
        assert!(err.to_string().starts_with("samples[0].matrix:"), "{err}");
    }

    #[test]
    fn writers_round_trip() {
        let s = StateVector::normalized(vec![c(0.1, -0.3), c(0.7, 0.2), c(-0.4, 0.0)]).unwrap();
        assert_eq!(parse_state(&state_to_json(&s)).unwrap(), s);
        let h = HermitianOperator::from_rows(vec![
            vec![c(1.0, 0.0), c(0.3, -0.2)],
            vec![c(0.3, 0.2), c(-0.5, 0.0)],
        ])
        .unwrap();
        assert_eq!(parse_hamiltonian(&hamiltonian_to_json(&h)).unwrap(), h);
    }
}
