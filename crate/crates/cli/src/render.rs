//! JSON documents for core results. Rationals are rendered as `"p/q"`
//! strings, floats as JSON numbers; indices are 1-based.

use serde_json::{json, Map, Value};
use srbm_core::classifier::{Certificate, NecessityFailure, Verdict};
use srbm_core::fluid::{Breakpoint, FluidVerdict};
use srbm_core::normalization::{Condition15Failure, NormalizationRecord};
use srbm_core::scalar::rational_to_f64;
use srbm_core::{Condition15, IndexSet, LcpSolution, Matrix, ProblemData, Rational, Scalar, SpiralReport};

use crate::problem::parse_exact;

pub trait CliScalar: Scalar {
    const MODE_NAME: &'static str;
    fn to_json(&self) -> Value;
    /// Shortest round-trip decimal.
    fn to_csv(&self) -> String;
    fn parse_arg(s: &str) -> Result<Self, String>;
}

impl CliScalar for Rational {
    const MODE_NAME: &'static str = "exact";

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn to_csv(&self) -> String {
        rational_to_f64(self).to_string()
    }

    fn parse_arg(s: &str) -> Result<Self, String> {
        parse_exact(s)
    }
}

impl CliScalar for f64 {
    const MODE_NAME: &'static str = "float";

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }

    fn to_csv(&self) -> String {
        self.to_string()
    }

    fn parse_arg(s: &str) -> Result<Self, String> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("{s:?} is not a finite number"))
    }
}

pub fn vector<T: CliScalar>(v: &[T]) -> Value {
    Value::Array(v.iter().map(CliScalar::to_json).collect())
}

pub fn matrix<T: CliScalar>(m: &Matrix<T>) -> Value {
    Value::Array(m.rows().iter().map(|r| vector(r)).collect())
}

pub fn index_set(s: IndexSet) -> Value {
    Value::Array(s.iter().map(|i| json!(i + 1)).collect())
}

fn opt<T: CliScalar>(v: Option<&T>) -> Value {
    v.map_or(Value::Null, CliScalar::to_json)
}

pub fn problem<T: CliScalar>(d: &ProblemData<T>) -> Value {
    json!({ "theta": vector(d.theta()), "R": matrix(d.r()), "gamma": matrix(d.gamma()) })
}

pub fn normalization<T: CliScalar>(rec: &NormalizationRecord<T>) -> Value {
    json!({
        "drift_scaling": vector(&rec.drift_scaling.diag()),
        "column_scaling": vector(&rec.column_scaling.diag()),
        "normalized": problem(&rec.normalized),
        "canonical": rec.normalized.is_canonical(),
    })
}

pub fn condition<T: CliScalar>(c: &Condition15<T>) -> Value {
    match c {
        Condition15::Holds { u_star } => json!({ "holds": true, "u_star": vector(u_star), "failure": null }),
        Condition15::Fails(Condition15Failure::Singular { null_vector }) => json!({
            "holds": false,
            "u_star": null,
            "failure": { "kind": "Singular", "null_vector": vector(null_vector) },
        }),
        Condition15::Fails(Condition15Failure::NonnegativeComponent { index, value }) => json!({
            "holds": false,
            "u_star": null,
            "failure": { "kind": "NonnegativeComponent", "index": index + 1, "value": value.to_json() },
        }),
    }
}

pub fn solution<T: CliScalar>(s: &LcpSolution<T>) -> Value {
    let label = s.category.as_ref();
    json!({
        "u": vector(&s.u),
        "v": vector(&s.v),
        "stable": s.stable,
        "degenerate": s.degenerate,
        "proper": s.proper,
        "category": label.map(|c| c.category.to_string()),
        "rhat": label.and_then(|c| c.rhat.as_ref()).map(matrix),
        "det_rhat": opt(label.and_then(|c| c.det_rhat.as_ref())),
    })
}

pub fn spiral<T: CliScalar>(rep: &SpiralReport<T>) -> Value {
    let comparisons: Vec<Value> = rep
        .comparisons
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "lhs": c.lhs.to_json(),
                "rhs": c.rhs.to_json(),
                "holds_c1": c.holds_c1(),
                "holds_c2": c.holds_c2(),
            })
        })
        .collect();
    json!({
        "membership": rep.membership.to_string(),
        "beta": opt(rep.beta.as_ref()),
        "theta_negative": rep.theta_negative,
        "comparisons": comparisons,
        "a": rep.a.as_deref().map(vector),
        "b": rep.b.as_deref().map(vector),
    })
}

pub fn certificate<T: CliScalar>(c: &Certificate<T>) -> Value {
    let mut body = match c {
        Certificate::ProperUnique { u_star } => json!({ "u_star": vector(u_star) }),
        Certificate::SpiralStable { membership, beta } => {
            json!({ "membership": membership.to_string(), "beta": beta.to_json() })
        }
        Certificate::SpiralUnstable { membership, beta, u } => {
            json!({ "membership": membership.to_string(), "beta": beta.to_json(), "u": vector(u) })
        }
        Certificate::DivergentSolution(s) => solution(s),
        Certificate::NecessityFailure(NecessityFailure::NonnegativeComponent {
            index,
            row,
            value,
            s_witness,
        }) => json!({
            "failure": "NonnegativeComponent",
            "index": index + 1,
            "row": vector(row),
            "value": value.to_json(),
            "s_witness": vector(s_witness),
        }),
        Certificate::NecessityFailure(NecessityFailure::SingularNull { u }) => {
            json!({ "failure": "SingularNull", "u": vector(u) })
        }
        Certificate::TwoDStable { u_star, minors } => {
            let minors: Vec<Value> = minors
                .iter()
                .map(|(s, m)| json!({ "set": index_set(*s), "minor": m.to_json() }))
                .collect();
            json!({ "u_star": vector(u_star), "minors": minors })
        }
        Certificate::TwoDNotPMatrix { set, minor } => json!({ "set": index_set(*set), "minor": minor.to_json() }),
    };
    let obj: &mut Map<String, Value> = body.as_object_mut().expect("certificate bodies are objects");
    obj.insert("kind".into(), json!(c.kind()));
    body
}

pub fn verdict<T: CliScalar>(v: &Verdict<T>) -> Value {
    let n = &v.normalization.normalized;
    json!({
        "mode": T::MODE_NAME,
        "dim": n.dim(),
        "decision": v.decision.as_str(),
        "basis": v.basis.as_str(),
        "certificate": certificate(&v.certificate),
        "certificate_valid": v.certificate_is_valid(),
        "normalized": { "theta": vector(n.theta()), "R": matrix(n.r()) },
        "diagnostics": {
            "condition_15": condition(&v.diagnostics.condition),
            "spiral": v.diagnostics.spiral.as_ref().map(spiral),
            "lcp_solutions": v.diagnostics.lcp_solutions.as_ref().map(|s| s.iter().map(solution).collect::<Vec<_>>()),
        },
        "notes": v.notes,
    })
}

pub fn fluid_verdict<T: CliScalar>(v: &FluidVerdict<T>) -> (Value, Value) {
    let factor = match v {
        FluidVerdict::SpiralGrowth(f) => f.to_json(),
        _ => Value::Null,
    };
    (json!(v.name()), factor)
}

pub fn breakpoint<T: CliScalar>(b: &Breakpoint<T>) -> Value {
    json!({
        "t": b.t.to_json(),
        "z": vector(&b.z),
        "y": vector(&b.y),
        "active_set": index_set(b.active_set),
        "rates": vector(&b.rates),
        "velocity": vector(&b.velocity),
    })
}
