//! CSV and JSON rendering for tables, matrices, and benchmark rows.

use cac_core::cyclotomy::{CycMatrix, CyclotomyParams, RepTable};
use serde_json::json;

/// One row per line, comma-separated decimal counts.
pub fn matrix_csv(m: &CycMatrix) -> String {
    let e = m.e();
    let mut out = String::new();
    for a in 0..e {
        let row: Vec<String> = (0..e).map(|b| m.get(a, b).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// One row per line, cells rendered `a:b`.
pub fn rep_table_csv(t: &RepTable) -> String {
    let e = t.params().e();
    let mut out = String::new();
    for a in 0..e {
        let row: Vec<String> = (0..e).map(|b| t.get(a, b).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn params_fields(params: &CyclotomyParams) -> serde_json::Map<String, serde_json::Value> {
    let mut map = serde_json::Map::new();
    map.insert("version".into(), json!(crate::files::FILE_VERSION));
    map.insert("p".into(), json!(params.modulus().p().to_string()));
    map.insert("l".into(), json!(params.l().to_string()));
    map.insert("k".into(), json!(params.k().to_string()));
    map
}

pub fn matrix_json(m: &CycMatrix) -> String {
    let e = m.e();
    let rows: Vec<Vec<String>> = (0..e)
        .map(|a| (0..e).map(|b| m.get(a, b).to_string()).collect())
        .collect();
    let mut map = params_fields(m.params());
    map.insert("kind".into(), json!("matrix"));
    map.insert("generator".into(), json!(m.generator().value().to_string()));
    map.insert("rows".into(), json!(rows));
    let mut s =
        serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("serializable");
    s.push('\n');
    s
}

pub fn rep_table_json(t: &RepTable) -> String {
    let e = t.params().e();
    let rows: Vec<Vec<String>> = (0..e)
        .map(|a| (0..e).map(|b| t.get(a, b).to_string()).collect())
        .collect();
    let mut map = params_fields(t.params());
    map.insert("kind".into(), json!("representatives"));
    map.insert("rows".into(), json!(rows));
    let mut s =
        serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("serializable");
    s.push('\n');
    s
}

/// Benchmark output: a CSV header plus one data row.
#[allow(clippy::too_many_arguments)]
pub fn bench_csv(
    params: &CyclotomyParams,
    generator: u64,
    reps: u32,
    classes: u64,
    naive_evals: usize,
    reduced_evals: usize,
    naive_ms: f64,
    reduced_ms: f64,
) -> String {
    let e = params.e();
    let pair_ratio = (e * e) as f64 / classes as f64;
    let speedup = naive_ms / reduced_ms.max(1e-9);
    format!(
        "p,l,e,k,generator,reps,class_count,naive_evals,reduced_evals,pair_ratio,naive_ms,reduced_ms,speedup\n\
         {},{},{},{},{},{},{},{},{},{:.4},{:.3},{:.3},{:.3}\n",
        params.p_u64(),
        params.l(),
        e,
        params.k(),
        generator,
        reps,
        classes,
        naive_evals,
        reduced_evals,
        pair_ratio,
        naive_ms,
        reduced_ms,
        speedup,
    )
}
