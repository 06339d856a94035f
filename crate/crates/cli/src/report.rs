//! JSON rendering of pipeline results. Exact values are strings.

use serde_json::{json, Value};

use framedeg::groebner::GroebnerBasis;
use framedeg::oracle::{OracleLambda, RealPoint};
use framedeg::parse::format_rational;
use framedeg::quadform::Inertia;
use framedeg::stiefel::{HypothesisReport, LambdaReport, RealPointDiagnostic, RowTransform};
use framedeg::{format_poly, Monomial, Polynomial, Rational, RationalMatrix, Ring};

pub const SCHEMA: &str = "1";

pub fn rational(c: &Rational) -> Value {
    Value::String(format_rational(c))
}

pub fn poly(p: &Polynomial) -> Value {
    Value::String(format_poly(p))
}

pub fn monomial(ring: &std::sync::Arc<Ring>, m: &Monomial) -> String {
    format_poly(&Polynomial::monomial(ring, m.clone(), Rational::from_integer(1.into())))
}

pub fn matrix(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.dim())
            .map(|i| Value::Array(m.row(i).iter().map(rational).collect()))
            .collect(),
    )
}

pub fn inertia(i: &Inertia) -> Value {
    json!({"positive": i.positives, "negative": i.negatives, "zero": i.zeros})
}

pub fn groebner(gb: &GroebnerBasis) -> Value {
    json!({
        "order": gb.order().name(),
        "polynomials": gb.generators().iter().map(poly).collect::<Vec<_>>(),
    })
}

pub fn randomization(t: Option<&RowTransform>) -> Value {
    match t {
        None => Value::Null,
        Some(t) => json!({"attempt": t.attempt, "seed": t.seed, "matrix": t.matrix}),
    }
}

pub fn hypotheses(h: &HypothesisReport) -> Value {
    json!({
        "all_pass": h.all_pass(),
        "zero_dimensional": h.zero_dimensional,
        "algebra_dim": h.algebra_dim,
        "pivot_minor_invertible": h.pivot_minor_invertible,
        "pivot_minor_norm": rational(&h.pivot_minor_norm),
        "theta_delta_nondegenerate": h.theta_delta_nondegenerate,
        "theta_f_delta_nondegenerate": h.theta_f_delta_nondegenerate,
        "randomization": randomization(h.randomization_applied.as_ref()),
    })
}

pub fn lambda(r: &LambdaReport) -> Value {
    let ring = r.gb.ring();
    json!({
        "lambda": r.lambda,
        "n": r.n,
        "k": r.k,
        "sign_factor": r.sign_factor,
        "signatures": {
            "theta_delta": r.signature_delta,
            "theta_f_delta": r.signature_f_delta,
        },
        "inertia": {
            "theta_delta": inertia(&r.inertia_delta),
            "theta_f_delta": inertia(&r.inertia_f_delta),
        },
        "algebra_dim": r.algebra_dim,
        "standard_basis": r.basis.iter().map(|m| monomial(ring, m)).collect::<Vec<_>>(),
        "basis_traces": r.basis_traces.iter().map(rational).collect::<Vec<_>>(),
        "groebner_basis": groebner(&r.gb),
        "pivot_minor": poly(&r.pivot_minor),
        "delta_residue": poly(&r.delta_residue),
        "f_delta_residue": poly(&r.f_delta_residue),
        "theta_delta": matrix(r.theta_delta.matrix()),
        "theta_f_delta": matrix(r.theta_f_delta.matrix()),
        "hypotheses": hypotheses(&r.hypotheses),
        "randomization": randomization(r.hypotheses.randomization_applied.as_ref()),
        "variety_misses_hypersurface": r.variety_misses_hypersurface,
    })
}

pub fn point(p: &RealPoint) -> Value {
    json!({
        "coordinates": p.coordinates,
        "residual": p.residual,
        "cluster_tolerance": p.cluster_tolerance,
    })
}

pub fn oracle(o: &OracleLambda, exact: i64, tol: f64, merge_tol: f64) -> Value {
    json!({
        "lambda": o.lambda,
        "agrees": o.lambda == exact,
        "counted": o.counted,
        "tol": tol,
        "merge_tol": merge_tol,
        "points": o.points.iter().map(|p| {
            let mut v = point(&p.point);
            v["delta"] = json!(p.delta);
            v["f"] = json!(p.f);
            v
        }).collect::<Vec<_>>(),
    })
}

pub fn diagnostic(d: &RealPointDiagnostic) -> Value {
    match d {
        RealPointDiagnostic::NoRealPoints => json!({"status": "no_real_points"}),
        RealPointDiagnostic::RealPoints(c) => json!({"status": "real_points", "count": c}),
        RealPointDiagnostic::Undetermined => json!({"status": "undetermined"}),
    }
}
