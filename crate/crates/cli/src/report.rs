//! Text and JSON rendering. Both renderings are deterministic: maps are
//! ordered and every rational is printed in lowest terms.

use ghostcalc_core::cochain::Cochain;
use ghostcalc_core::derivations::{SquareInput, SquareValue, SquareWitness};
use ghostcalc_core::ghost_ring::GhostRing;
use ghostcalc_core::linf::Residual;
use ghostcalc_core::rational::{format_rational, Matrix, Vector};
use serde_json::{json, Value};

/// Witness lists are truncated to this many entries in both renderings.
pub const WITNESS_LIMIT: usize = 20;

pub fn tuple(ring: &GhostRing, t: &[usize]) -> String {
    let names: Vec<&str> = t.iter().map(|&i| ring.basis().name(i)).collect();
    format!("({})", names.join(", "))
}

pub fn tuple_json(ring: &GhostRing, t: &[usize]) -> Value {
    Value::from(t.iter().map(|&i| ring.basis().name(i).to_string()).collect::<Vec<_>>())
}

pub fn coords(v: &Vector) -> String {
    let parts: Vec<String> = v.0.iter().map(format_rational).collect();
    format!("[{}]", parts.join(", "))
}

pub fn coords_json(v: &Vector) -> Value {
    Value::from(v.0.iter().map(format_rational).collect::<Vec<_>>())
}

/// A vector of the generator span, written as a combination of generator names.
pub fn combination(ring: &GhostRing, v: &Vector) -> String {
    let parts: Vec<String> = v
        .0
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(i, c)| format!("{}*{}", format_rational(c), ring.basis().name(i)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn combination_json(ring: &GhostRing, v: &Vector) -> Value {
    let mut m = serde_json::Map::new();
    for (i, c) in v.0.iter().enumerate() {
        if !num_traits::Zero::is_zero(c) {
            m.insert(ring.basis().name(i).to_string(), Value::from(format_rational(c)));
        }
    }
    Value::Object(m)
}

pub fn matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m.rows.iter().map(|r| coords(&Vector(r.clone()))).collect();
    format!("[{}]", rows.join(", "))
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::from(m.rows.iter().map(|r| coords_json(&Vector(r.clone()))).collect::<Vec<_>>())
}

/// Residual of a bracket-level check. Module residuals carry the module basis index.
pub fn residual(ring: &GhostRing, r: &Residual) -> String {
    match r.module_basis {
        Some(f) => format!("arity {} at {} on module basis {}: {}", r.arity, tuple(ring, &r.tuple), f, coords(&r.value)),
        None => format!("arity {} at {}: {}", r.arity, tuple(ring, &r.tuple), combination(ring, &r.value)),
    }
}

pub fn residual_json(ring: &GhostRing, r: &Residual) -> Value {
    match r.module_basis {
        Some(f) => json!({
            "arity": r.arity,
            "inputs": tuple_json(ring, &r.tuple),
            "module_basis": f,
            "value": coords_json(&r.value),
        }),
        None => json!({
            "arity": r.arity,
            "inputs": tuple_json(ring, &r.tuple),
            "value": combination_json(ring, &r.value),
        }),
    }
}

fn square_input(ring: &GhostRing, i: &SquareInput) -> String {
    match i {
        SquareInput::Generator(j) => format!("eta^{}", ring.basis().name(*j)),
        SquareInput::ModuleBasis(f) => format!("module basis {f}"),
    }
}

pub fn square_witness(ring: &GhostRing, w: &SquareWitness) -> String {
    let body: Vec<String> = match &w.value {
        SquareValue::Scalar(p) => p
            .terms()
            .iter()
            .map(|(m, c)| format!("{} eta^{}", format_rational(c), tuple(ring, &m.word())))
            .collect(),
        SquareValue::Module(t) => t.iter().map(|(m, v)| format!("{} eta^{}", coords(v), tuple(ring, &m.word()))).collect(),
    };
    format!("S^2({}) = {}", square_input(ring, &w.input), body.join(" + "))
}

pub fn square_witness_json(ring: &GhostRing, w: &SquareWitness) -> Value {
    let input = match &w.input {
        SquareInput::Generator(j) => json!({ "generator": ring.basis().name(*j) }),
        SquareInput::ModuleBasis(f) => json!({ "module_basis": f }),
    };
    let terms: Vec<Value> = match &w.value {
        SquareValue::Scalar(p) => p
            .terms()
            .iter()
            .map(|(m, c)| json!({ "word": tuple_json(ring, &m.word()), "value": format_rational(c) }))
            .collect(),
        SquareValue::Module(t) => {
            t.iter().map(|(m, v)| json!({ "word": tuple_json(ring, &m.word()), "value": coords_json(v) })).collect()
        }
    };
    json!({ "input": input, "terms": terms })
}

/// Nonzero values of a cochain on its stored (sorted) tuples.
pub fn cochain_lines(ring: &GhostRing, c: &Cochain) -> Vec<String> {
    c.values().iter().filter(|(_, v)| !v.is_zero()).map(|(t, v)| format!("  {} {}", tuple(ring, t), coords(v))).collect()
}

pub fn cochain_json(ring: &GhostRing, c: &Cochain) -> Value {
    let values: Vec<Value> = c
        .values()
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(t, v)| json!({ "inputs": tuple_json(ring, t), "value": coords_json(v) }))
        .collect();
    json!({ "arity": c.arity(), "values": values })
}

/// Truncates a witness list, reporting how many were dropped.
pub fn truncated<T>(items: &[T]) -> (&[T], usize) {
    let shown = items.len().min(WITNESS_LIMIT);
    (&items[..shown], items.len() - shown)
}
