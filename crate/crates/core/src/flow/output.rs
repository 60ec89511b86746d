use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::scalar::{fmt_exact, Real};

use super::{FlowReport, Termination};

/// `t,r_<id>..,K_<id>..,k,T,spread,minQ,minRatio`, one row per sample.
pub fn write_trajectory_csv<T: Real>(c: &Complex, report: &FlowReport<T>) -> String {
    let ids = c.vertex_ids();
    let mut header = vec!["t".to_string()];
    header.extend(ids.iter().map(|id| format!("r_{id}")));
    header.extend(ids.iter().map(|id| format!("K_{id}")));
    header.extend(["k", "T", "spread", "minQ", "minRatio"].map(String::from));
    let mut out = header.join(",");
    out.push('\n');
    for s in &report.samples {
        let mut row = vec![fmt_exact(s.t)];
        row.extend(s.metric.radii().iter().map(|&r| fmt_exact(r)));
        row.extend(s.field.curvature.iter().map(|&k| fmt_exact(k)));
        row.extend([s.field.average, s.field.total, s.field.spread, s.min_q, s.min_ratio].map(fmt_exact));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// The run summary written by `flow`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSummary {
    pub termination: String,
    pub t_final: f64,
    pub k_final: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tet: Option<[usize; 4]>,
    pub note: String,
}

impl FlowSummary {
    pub fn new<T: Real>(report: &FlowReport<T>) -> Self {
        let last = report.final_state();
        let (vertex, tet) = match report.termination {
            Termination::Collapsed { vertex } => (Some(vertex), None),
            Termination::DegeneratePinch { tet } => (None, Some(tet)),
            _ => (None, None),
        };
        let note = match report.termination {
            Termination::Collapsed { .. } | Termination::DegeneratePinch { .. } => {
                format!("singular behaviour detected at t = {}", last.t)
            }
            _ => format!("no collapse observed up to t = {}", last.t),
        };
        Self {
            termination: report.termination.tag().to_string(),
            t_final: last.t,
            k_final: last.field.average.as_f64(),
            steps_accepted: report.steps_accepted,
            steps_rejected: report.steps_rejected,
            vertex,
            tet,
            note,
        }
    }
}

pub fn write_summary_json<T: Real>(report: &FlowReport<T>) -> String {
    serde_json::to_string_pretty(&FlowSummary::new(report)).expect("plain data serializes")
}
