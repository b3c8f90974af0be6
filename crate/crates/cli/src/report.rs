//! JSON documents emitted by the commands. Rationals are `"p/q"` strings and
//! keys keep insertion order, so equal inputs give byte-identical output.

use mb_core::pricing::PriceInterval;
use mb_core::rational::format_rational;
use mb_core::verify::{Counterexample, VerifyReport};
use mb_core::{LatticeVector, PolytopeSpec, Rational, VertexDensity};
use serde_json::{json, Map, Value};

pub fn rational(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn rationals(xs: &[Rational]) -> Value {
    xs.iter().map(rational).collect()
}

/// `{"λ": weight}` over the nonzero atoms.
pub fn vertex(v: &VertexDensity) -> Value {
    let mut out = Map::new();
    for (lambda, w) in v.support() {
        out.insert(lambda.to_string(), rational(&w));
    }
    Value::Object(out)
}

pub fn density(q: &LatticeVector) -> Value {
    let mut out = Map::new();
    for (lambda, w) in q.iter() {
        if *w != Rational::from_integer(0.into()) {
            out.insert(lambda.to_string(), rational(w));
        }
    }
    Value::Object(out)
}

pub fn polytope(spec: &PolytopeSpec) -> mb_core::Result<Value> {
    if spec.is_empty() {
        return Ok(json!({ "b": rationals(spec.b()), "empty": true }));
    }
    Ok(json!({
        "b": rationals(spec.b()),
        "empty": false,
        "b_prime": rationals(spec.b_prime()),
        "b_dprime": rationals(spec.b_dprime()),
        "supervertex": vertex(&spec.supervertex()?),
        "subvertex": vertex(&spec.subvertex()?),
        "criterion_met": spec.subvertex_in_polytope()?,
    }))
}

pub fn price(p: &PriceInterval) -> Value {
    json!({
        "b": rationals(p.spec.b()),
        "b_prime": rationals(p.spec.b_prime()),
        "b_dprime": rationals(p.spec.b_dprime()),
        "supervertex": vertex(&p.supervertex),
        "subvertex": vertex(&p.subvertex),
        "criterion_met": p.criterion_met,
        "f_max": rational(&p.f_max),
        "f_min": rational(&p.f_min),
        "f_min_kind": p.f_min_kind.as_str(),
        "discounted": p.discounted,
        "terms": { "f_max": p.terms.0, "f_min": p.terms.1 },
    })
}

fn counterexample(c: &Counterexample) -> Value {
    json!({
        "check": c.check.name(),
        "statement": c.check.statement(),
        "case": c.case,
        "m": c.m,
        "n": c.n,
        "b": c.b,
        "u": c.u,
        "expected": c.expected,
        "found": c.found,
    })
}

pub fn verify(report: &VerifyReport, seed: u64) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({ "check": c.check.name(), "statement": c.check.statement(), "passed": c.passed }))
        .collect();
    json!({
        "seed": seed,
        "cases_run": report.cases_run,
        "passed": report.passed(),
        "checks": checks,
        "counterexample": report.counterexample.as_ref().map(counterexample),
    })
}
