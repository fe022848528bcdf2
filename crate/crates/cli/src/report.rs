//! Versioned JSON reports. Everything outside the `timing` blocks is
//! reproducible for a fixed seed and tool version.

use amalgrade_core::{Field, KernelStats};
use serde::Serialize;

use crate::runner::Options;

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Mismatch,
    Resource,
    Error,
}

impl Status {
    /// 0 ok, 2 verdict mismatch, 3 resource budget, 4 parse or instance error.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Mismatch => 2,
            Status::Resource => 3,
            Status::Error => 4,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub total_ms: u64,
    pub checks_ms: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub observed: String,
    pub expected: Option<String>,
    pub matches: Option<bool>,
    pub resource_exhausted: bool,
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub instance: String,
    pub status: Status,
    pub error: Option<String>,
    pub seed: u64,
    pub field: String,
    pub budget: u64,
    pub checks: Vec<CheckOutcome>,
    pub kernel: KernelStats,
    pub timing: Timing,
}

pub fn field_label(f: Option<Field>) -> String {
    match f {
        None => "declared".into(),
        Some(Field::Rationals) => "qq".into(),
        Some(Field::Prime(p)) => format!("fp:{p}"),
    }
}

impl InstanceReport {
    pub fn new(instance: String, opts: &Options) -> Self {
        InstanceReport {
            instance,
            status: Status::Ok,
            error: None,
            seed: opts.seed,
            field: field_label(opts.field),
            budget: opts.budget,
            checks: Vec::new(),
            kernel: KernelStats::default(),
            timing: Timing::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub instances: Vec<InstanceReport>,
}

impl RunReport {
    /// Instances are ordered by name, then by input order.
    pub fn new(seed: u64, mut instances: Vec<InstanceReport>) -> Self {
        instances.sort_by(|a, b| a.instance.cmp(&b.instance));
        RunReport { schema: SCHEMA, tool: "amalgrade", version: VERSION, seed, instances }
    }

    /// Worst status: error, then resource, then mismatch.
    pub fn status(&self) -> Status {
        let has = |s: Status| self.instances.iter().any(|i| i.status == s);
        [Status::Error, Status::Resource, Status::Mismatch].into_iter().find(|&s| has(s)).unwrap_or(Status::Ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// JSON with every `timing` block removed, for determinism comparisons.
    pub fn to_json_without_timing(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if let Some(list) = v["instances"].as_array_mut() {
            for inst in list {
                if let Some(o) = inst.as_object_mut() {
                    o.remove("timing");
                }
            }
        }
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }
}
