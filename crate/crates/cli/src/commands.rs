use std::path::Path;

use serde_json::{json, Value};
use srbm_core::fluid::{fluid_trace, FluidBudget};
use srbm_core::sim::{estimate_hitting_time, simulate_path, SimConfig};
use srbm_core::spiral::{spiral_certificate, spiral_membership};
use srbm_core::{classify, classify_solution, normalize, solve_lcp, Decision, ProblemData};

use crate::error::CliError;
use crate::problem::parse_state;
use crate::render::{self, CliScalar};

pub fn classify_doc<T: CliScalar>(data: &ProblemData<T>) -> Result<(Value, Decision), CliError> {
    let v = classify(data)?;
    Ok((render::verdict(&v), v.decision))
}

pub fn lcp_doc<T: CliScalar>(data: &ProblemData<T>) -> Result<Value, CliError> {
    let (theta, r) = (data.theta(), data.r());
    let mut solutions = solve_lcp(theta, r)?;
    if data.dim() == 3 {
        solutions = solutions
            .iter()
            .map(|s| classify_solution(s, theta, r))
            .collect::<Result<_, _>>()?;
    }
    Ok(json!({
        "mode": T::MODE_NAME,
        "condition_15": render::condition(&data.condition_15()?),
        "solutions": solutions.iter().map(render::solution).collect::<Vec<_>>(),
    }))
}

pub fn spiral_doc<T: CliScalar>(data: &ProblemData<T>) -> Result<Value, CliError> {
    let n = normalize(data).normalized;
    let report = spiral_membership(n.theta(), n.r())?;
    let at_least_one = report
        .beta
        .as_ref()
        .is_some_and(|b| !(b.clone() - T::one()).is_negative());
    let certificate = if at_least_one {
        render::vector(&spiral_certificate(n.theta(), n.r())?)
    } else {
        Value::Null
    };
    let mut doc = render::spiral(&report);
    let obj = doc.as_object_mut().expect("object");
    obj.insert("mode".into(), json!(T::MODE_NAME));
    obj.insert("normalized".into(), json!({ "theta": render::vector(n.theta()), "R": render::matrix(n.r()) }));
    obj.insert("certificate".into(), certificate);
    Ok(doc)
}

pub fn normalize_doc<T: CliScalar>(data: &ProblemData<T>) -> Value {
    let mut doc = render::normalization(&normalize(data));
    doc.as_object_mut().expect("object").insert("mode".into(), json!(T::MODE_NAME));
    doc
}

pub struct FluidArgs<'a> {
    pub z0: Option<&'a str>,
    pub max_breakpoints: usize,
    pub horizon: f64,
    pub trace_csv: Option<&'a Path>,
}

pub fn fluid_doc<T: CliScalar>(data: &ProblemData<T>, args: &FluidArgs) -> Result<Value, CliError> {
    let d = data.dim();
    let z0: Vec<T> = match args.z0 {
        Some(s) => parse_state(s, d)?,
        None => vec![T::one(); d],
    };
    let budget = FluidBudget {
        max_breakpoints: args.max_breakpoints,
        horizon: args.horizon,
        ..FluidBudget::default()
    };
    let path = fluid_trace(data.theta(), data.r(), &z0, &budget)?;
    if let Some(csv_path) = args.trace_csv {
        let mut w = csv::Writer::from_path(csv_path)?;
        let mut header = vec!["t".to_string()];
        header.extend((1..=d).map(|i| format!("z{i}")));
        header.extend((1..=d).map(|i| format!("y{i}")));
        header.push("active_set".into());
        w.write_record(&header)?;
        for b in &path.breakpoints {
            let mut row = vec![b.t.to_csv()];
            row.extend(b.z.iter().map(CliScalar::to_csv));
            row.extend(b.y.iter().map(CliScalar::to_csv));
            row.push(b.active_set.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    let (verdict, factor) = render::fluid_verdict(&path.verdict);
    Ok(json!({
        "mode": T::MODE_NAME,
        "z0": render::vector(&z0),
        "verdict": verdict,
        "factor": factor,
        "breakpoints": path.breakpoints.iter().map(render::breakpoint).collect::<Vec<_>>(),
    }))
}

pub struct SimArgs<'a> {
    pub z0: Option<&'a str>,
    pub config: SimConfig,
    pub trace_csv: Option<&'a Path>,
}

pub fn simulate_doc(data: &ProblemData<f64>, args: &SimArgs) -> Result<Value, CliError> {
    let d = data.dim();
    let z0: Vec<f64> = match args.z0 {
        Some(s) => parse_state(s, d)?,
        None => vec![1.0; d],
    };
    let config = args.config;
    let stats = estimate_hitting_time(data, &z0, &config)?;
    let trace = simulate_path(data, &z0, &config)?;
    if let Some(csv_path) = args.trace_csv {
        let mut w = csv::Writer::from_path(csv_path)?;
        let mut header = vec!["t".to_string()];
        header.extend((1..=d).map(|i| format!("z{i}")));
        header.extend((1..=d).map(|i| format!("y{i}")));
        w.write_record(&header)?;
        for s in &trace.samples {
            let mut row = vec![s.t.to_csv()];
            row.extend(s.z.iter().map(CliScalar::to_csv));
            row.extend(s.y.iter().map(CliScalar::to_csv));
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    Ok(json!({
        "mode": "float",
        "z0": z0,
        "config": {
            "dt": config.dt,
            "horizon": config.horizon,
            "seed": config.seed,
            "n_paths": config.n_paths,
            "hitting_radius": config.hitting_radius,
            "record_stride": config.record_stride,
        },
        "stats": {
            "n_paths": stats.n_paths,
            "n_hit": stats.n_hit,
            "n_censored": stats.n_censored,
            "mean_hit_time": stats.mean_hit_time,
            "censor_rate": stats.censor_rate,
            "growth_rate": stats.growth_rate,
            "max_step_residual": stats.max_step_residual,
        },
        "trace": {
            "path_index": 0,
            "hit_time": trace.hit_time,
            "censored": trace.censored(),
            "steps": trace.steps,
            "samples": trace.samples.len(),
            "final_z": trace.final_z,
        },
    }))
}
