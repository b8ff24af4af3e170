//! Canonical JSON rendering for analysis reports.
//!
//! Every float is rounded to 12 significant digits before it becomes a
//! JSON number, so a report parsed and re-serialized compactly is
//! byte-identical to the original. Non-finite values render as `null`;
//! complex values render as `[re, im]` pairs.

use cvwitness_core::{Complex64 as C64, CriterionReport, MomentSet};
use serde_json::{Map, Number, Value};

use crate::families::{Evaluated, ParamValue};

/// Round to 12 significant digits and wrap as a JSON value.
pub fn sig12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("rounded float reparses");
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

pub fn complex_value(z: C64) -> Value {
    Value::Array(vec![sig12(z.re), sig12(z.im)])
}

fn param_value(p: ParamValue) -> Value {
    match p {
        ParamValue::Real(x) => sig12(x),
        ParamValue::Int(k) => Value::Number(Number::from(k)),
        ParamValue::Complex(z) => complex_value(z),
    }
}

fn moments_value(m: &MomentSet) -> Value {
    let mut out = Map::new();
    out.insert("mean1".into(), complex_value(m.mean1));
    out.insert("mean2".into(), complex_value(m.mean2));
    out.insert("n1".into(), sig12(m.n1));
    out.insert("n2".into(), sig12(m.n2));
    out.insert("sq1".into(), complex_value(m.sq1));
    out.insert("sq2".into(), complex_value(m.sq2));
    out.insert("cross".into(), complex_value(m.cross));
    out.insert("crossc".into(), complex_value(m.crossc));
    Value::Object(out)
}

fn report_value(rep: &CriterionReport) -> Value {
    let mut out = Map::new();
    out.insert("c".into(), sig12(rep.c));
    out.insert("delta".into(), sig12(rep.delta));
    out.insert("du2".into(), sig12(rep.du2));
    out.insert("dv2".into(), sig12(rep.dv2));
    out.insert("bound".into(), sig12(rep.bound));
    out.insert("t".into(), sig12(rep.t_expectation));
    out.insert("is_gees".into(), Value::Bool(rep.is_gees));
    out.insert("u_squeezed".into(), Value::Bool(rep.u_squeezed));
    out.insert("v_squeezed".into(), Value::Bool(rep.v_squeezed));
    out.insert("tau".into(), sig12(rep.tau));
    out.insert("degree_literal".into(), sig12(rep.degree_literal));
    out.insert("degree_monotone".into(), sig12(rep.degree_monotone));
    out.insert(
        "warnings".into(),
        Value::Array(
            rep.physical_warnings
                .iter()
                .map(|w| Value::String(w.to_string()))
                .collect(),
        ),
    );
    Value::Object(out)
}

/// The full `analyze` document: family, parameters, engine provenance,
/// extracted moments, and the assessment.
pub fn report_document(ev: &Evaluated, rep: &CriterionReport) -> Value {
    let mut engine = Map::new();
    engine.insert("name".into(), Value::String(ev.engine.into()));
    engine.insert(
        "cutoff".into(),
        ev.cutoff
            .map_or(Value::Null, |c| Value::Number(Number::from(c as u64))),
    );
    engine.insert("tail_mass".into(), ev.tail_mass.map_or(Value::Null, sig12));

    let mut params = Map::new();
    for &(name, value) in &ev.params {
        params.insert(name.into(), param_value(value));
    }

    let mut doc = Map::new();
    doc.insert("family".into(), Value::String(ev.family.name().into()));
    doc.insert("params".into(), Value::Object(params));
    doc.insert("engine".into(), Value::Object(engine));
    doc.insert("moments".into(), moments_value(&ev.moments));
    doc.insert("report".into(), report_value(rep));
    Value::Object(doc)
}

/// Format a float for CSV cells: 12 significant digits, `NaN` when not
/// finite.
pub fn csv_number(x: f64) -> String {
    if !x.is_finite() {
        return "NaN".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("rounded float reparses");
    format!("{rounded}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds_to_twelve_digits() {
        assert_eq!(sig12(std::f64::consts::PI).to_string(), "3.14159265359");
        assert_eq!(sig12(0.1 + 0.2).to_string(), "0.3");
        assert_eq!(sig12(f64::NAN), Value::Null);
        assert_eq!(sig12(f64::INFINITY), Value::Null);
    }

    #[test]
    fn csv_number_matches_json_rendering() {
        assert_eq!(csv_number(std::f64::consts::PI), "3.14159265359");
        assert_eq!(csv_number(1.0), "1");
        assert_eq!(csv_number(f64::NAN), "NaN");
    }

    #[test]
    fn complex_values_are_pairs() {
        let v = complex_value(C64::new(1.5, -2.25));
        assert_eq!(v.to_string(), "[1.5,-2.25]");
    }
}
