//! Report objects and their two renderings.
//!
//! JSON keys appear in declaration order and absent fields are omitted, so
//! identical runs print identical bytes. Timings are only included on
//! request.

use std::collections::BTreeMap;

use dselim::elim::{EliminationReport, Level};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelOut {
    pub delta: u32,
    pub sigma: u32,
}

impl From<Level> for LevelOut {
    fn from(l: Level) -> Self {
        LevelOut { delta: l.delta, sigma: l.sigma }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertOut {
    pub cofactor: String,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResourcesOut {
    pub reduction_steps: u64,
    pub pairs_reduced: u64,
    pub generators: usize,
    pub basis_size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub verdict: String,
    pub definitive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<LevelOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_completed_level: Option<LevelOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consequence: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<CertOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_replays: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partial_solution: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bdelta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub magnitude: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resources: Option<ResourcesOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Report {
    pub fn from_elim(command: &str, field: String, r: &EliminationReport, certificate: bool, timings: bool) -> Report {
        let cert = if certificate { r.certificate.as_ref() } else { None };
        Report {
            command: command.into(),
            field: Some(field),
            verdict: r.verdict.name().into(),
            definitive: r.verdict.is_definitive(),
            levels: Some(r.levels.iter().copied().map(LevelOut::from).collect()),
            consequence: r.consequence.as_ref().map(|c| c.to_string()),
            power: r.power,
            certificate: cert.map(|c| {
                c.iter().map(|e| CertOut { cofactor: e.cofactor.to_string(), generator: e.generator.to_string() }).collect()
            }),
            certificate_replays: cert.map(|_| r.replay() == r.consequence),
            resources: Some(ResourcesOut {
                reduction_steps: r.resources.reduction_steps,
                pairs_reduced: r.resources.pairs_reduced,
                generators: r.resources.generators,
                basis_size: r.resources.basis_size,
            }),
            elapsed_ms: timings.then_some(r.resources.elapsed.as_secs_f64() * 1e3),
            ..Report::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One `key: value` line per field; lists continue on indented lines.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut out = String::new();
        if let serde_json::Value::Object(map) = value {
            for (k, v) in map {
                match v {
                    serde_json::Value::Array(items) => {
                        out.push_str(&format!("{}:\n", k));
                        for it in items {
                            out.push_str(&format!("  - {}\n", inline(&it)));
                        }
                    }
                    serde_json::Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{}:\n", k));
                        for (kk, vv) in m {
                            out.push_str(&format!("  {}: {}\n", kk, inline(&vv)));
                        }
                    }
                    other => out.push_str(&format!("{}: {}\n", k, inline(&other))),
                }
            }
        }
        out
    }
}

fn inline(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        serde_json::Value::Object(m) => {
            m.iter().map(|(k, v)| format!("{}={}", k, inline(v))).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}
