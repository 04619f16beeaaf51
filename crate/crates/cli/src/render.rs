use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::{Format, Records, RunConfig};

/// Renders records in the configured format. Big integers are written as
/// decimal strings in json and plain decimals in csv.
pub fn render(config: &RunConfig, records: &Records) -> String {
    match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_json(config, records))
                .expect("json values always serialize");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(records),
        Format::Text => to_text(records),
    }
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn to_json(config: &RunConfig, records: &Records) -> Value {
    let rows: Vec<Value> = match records {
        Records::Verify(reports) => reports
            .iter()
            .map(|r| {
                json!({
                    "identity": r.id.as_str(),
                    "k": r.k,
                    "lhs": r.lhs.to_string(),
                    "rhs": r.rhs.to_string(),
                    "equal": r.equal,
                })
            })
            .collect(),
        Records::Table(rows) => rows
            .iter()
            .map(|r| {
                json!({
                    "k": r.k,
                    "S0": r.s0.to_string(),
                    "S1": r.s1.to_string(),
                    "S2": r.s2.to_string(),
                    "S3": r.s3.to_string(),
                })
            })
            .collect(),
        Records::Oracle(rows) => rows
            .iter()
            .map(|r| {
                json!({
                    "k": r.k,
                    "oracle_s0": r.oracle_s0.to_string(),
                    "s0_closed": r.s0_closed.to_string(),
                    "oracle_s1": r.oracle_s1.to_string(),
                    "s1_closed": r.s1_closed.to_string(),
                    "histogram_matches": r.histogram_matches,
                    "pass": r.pass(),
                })
            })
            .collect(),
        Records::Mc(checks) => checks
            .iter()
            .map(|c| {
                let e = &c.estimate;
                json!({
                    "quantity": e.quantity.as_str(),
                    "k": e.k,
                    "n": e.n,
                    "mean": float(e.mean),
                    "stderr": float(e.stderr),
                    "target": e.target.to_string(),
                    "z": float(e.z),
                    "status": c.status.as_str(),
                    "resampled": c.resampled,
                    "rng": {
                        "algorithm": e.rng.algorithm,
                        "seed": e.rng.seed.to_string(),
                        "stream": e.rng.stream.to_string(),
                    },
                })
            })
            .collect(),
    };
    json!({
        "command": config.command.as_str(),
        "k_min": config.k_min,
        "k_max": config.k_max,
        "pass": records.pass(),
        "records": rows,
    })
}

fn to_csv(records: &Records) -> String {
    let mut out = String::new();
    match records {
        Records::Verify(reports) => {
            out.push_str("identity,k,lhs,rhs,equal\n");
            for r in reports {
                let _ = writeln!(out, "{},{},{},{},{}", r.id, r.k, r.lhs, r.rhs, r.equal);
            }
        }
        Records::Table(rows) => {
            out.push_str("k,S0,S1,S2,S3\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{},{},{}", r.k, r.s0, r.s1, r.s2, r.s3);
            }
        }
        Records::Oracle(rows) => {
            out.push_str("k,oracle_s0,s0_closed,oracle_s1,s1_closed,histogram_matches,pass\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.k,
                    r.oracle_s0,
                    r.s0_closed,
                    r.oracle_s1,
                    r.s1_closed,
                    r.histogram_matches,
                    r.pass()
                );
            }
        }
        Records::Mc(checks) => {
            out.push_str(
                "quantity,k,n,mean,stderr,target,z,status,resampled,algorithm,seed,stream\n",
            );
            for c in checks {
                let e = &c.estimate;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    e.quantity,
                    e.k,
                    e.n,
                    e.mean,
                    e.stderr,
                    e.target,
                    e.z,
                    c.status.as_str(),
                    c.resampled,
                    e.rng.algorithm,
                    e.rng.seed,
                    e.rng.stream
                );
            }
        }
    }
    out
}

fn to_text(records: &Records) -> String {
    let mut out = String::new();
    match records {
        Records::Verify(reports) => {
            for r in reports {
                let tag = if r.equal { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{tag} {:<16} k={:<5} lhs={} rhs={}",
                    r.id, r.k, r.lhs, r.rhs
                );
            }
            let failed = reports.iter().filter(|r| !r.equal).count();
            let _ = writeln!(out, "{} checks, {} failed", reports.len(), failed);
        }
        Records::Table(rows) => {
            for r in rows {
                let _ = writeln!(
                    out,
                    "k={} S0={} S1={} S2={} S3={}",
                    r.k, r.s0, r.s1, r.s2, r.s3
                );
            }
        }
        Records::Oracle(rows) => {
            for r in rows {
                let tag = if r.pass() { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{tag} k={} S0 oracle={} closed={} S1 oracle={} closed={} histogram={}",
                    r.k,
                    r.oracle_s0,
                    r.s0_closed,
                    r.oracle_s1,
                    r.s1_closed,
                    if r.histogram_matches {
                        "ok"
                    } else {
                        "mismatch"
                    }
                );
            }
        }
        Records::Mc(checks) => {
            for c in checks {
                let e = &c.estimate;
                let _ = writeln!(
                    out,
                    "{} {:<14} k={:<3} n={} mean={:.6} stderr={:.6} target={} ({:.6}) z={:+.3}{}",
                    c.status.as_str(),
                    e.quantity,
                    e.k,
                    e.n,
                    e.mean,
                    e.stderr,
                    e.target,
                    e.target.to_f64(),
                    e.z,
                    if c.resampled { " (resampled)" } else { "" }
                );
            }
        }
    }
    out
}
