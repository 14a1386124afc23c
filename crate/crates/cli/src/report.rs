//! Serializable run reports.
//!
//! The structured format is JSON with a fixed field order and sorted maps, so
//! identical inputs produce byte-identical documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use steerage_core::paradox::{CaseLabel, LhsOutcome, ParadoxReport, Verdict};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportDocument {
    pub verdict: String,
    pub k: usize,
    pub delta_k: Option<f64>,
    pub case_label: String,
    pub paradox_string: String,
    pub measurement_requirement: Option<bool>,
    pub tolerance: f64,
    pub seed: u64,
    pub settings: Vec<String>,
    pub classes: Vec<ClassDoc>,
    pub zero_outcomes: Vec<OutcomeRef>,
    pub lhs: Option<LhsDoc>,
    pub premise_violation: Option<ViolationDoc>,
    pub inputs: InputDigests,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassDoc {
    pub ket: Vec<[f64; 2]>,
    pub members: Vec<MemberDoc>,
    pub per_setting_weight: BTreeMap<String, f64>,
    pub canonical_weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MemberDoc {
    pub setting: usize,
    pub outcome: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OutcomeRef {
    pub setting: usize,
    pub outcome: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LhsDoc {
    Feasible {
        weights: Vec<f64>,
        responses: Vec<Vec<Vec<f64>>>,
        rho_b_residual: f64,
    },
    Infeasible {
        quantum_trace: f64,
        classical_trace: f64,
        shared_classes: Vec<SharedClassDoc>,
        weight_table: Vec<BTreeMap<String, f64>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SharedClassDoc {
    pub class_index: usize,
    pub multiplicity: usize,
    pub canonical_weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ViolationDoc {
    pub setting: usize,
    pub outcome: usize,
    pub eigen_gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InputDigests {
    pub state_sha256: String,
    pub protocol_sha256: String,
}

pub fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Paradox => "paradox",
        Verdict::NoContradiction => "no_contradiction",
        Verdict::PremiseViolated => "premise_violated",
    }
}

fn case_str(c: CaseLabel) -> &'static str {
    match c {
        CaseLabel::Case1 => "case1",
        CaseLabel::Case2 => "case2",
        CaseLabel::Case3 => "case3",
        CaseLabel::Case4 => "case4",
        CaseLabel::Mixed => "mixed",
        CaseLabel::NotApplicable => "not_applicable",
    }
}

impl ReportDocument {
    pub fn from_report(
        report: &ParadoxReport,
        seed: u64,
        state_doc: &str,
        protocol_doc: &str,
    ) -> Self {
        let classes = report
            .classification
            .as_ref()
            .map(|cls| {
                cls.classes
                    .iter()
                    .map(|class| ClassDoc {
                        ket: class.ket.amps().iter().map(|a| [a.re, a.im]).collect(),
                        members: class
                            .members
                            .iter()
                            .map(|m| MemberDoc {
                                setting: m.setting,
                                outcome: m.outcome,
                                weight: m.weight,
                            })
                            .collect(),
                        per_setting_weight: class
                            .per_setting_weight
                            .iter()
                            .map(|(l, w)| (l.to_string(), *w))
                            .collect(),
                        canonical_weight: class.canonical_weight,
                    })
                    .collect()
            })
            .unwrap_or_default();
        let zero_outcomes = report
            .classification
            .as_ref()
            .map(|cls| {
                cls.zero_outcomes
                    .iter()
                    .map(|&(setting, outcome)| OutcomeRef { setting, outcome })
                    .collect()
            })
            .unwrap_or_default();
        let lhs = report.lhs.as_ref().map(|outcome| match outcome {
            LhsOutcome::Feasible(model) => LhsDoc::Feasible {
                weights: model.weights.clone(),
                responses: model.responses.clone(),
                rho_b_residual: model.rho_b_residual,
            },
            LhsOutcome::Infeasible(cert) => LhsDoc::Infeasible {
                quantum_trace: cert.quantum_trace,
                classical_trace: cert.classical_trace,
                shared_classes: cert
                    .shared_classes
                    .iter()
                    .map(|s| SharedClassDoc {
                        class_index: s.class_index,
                        multiplicity: s.multiplicity,
                        canonical_weight: s.canonical_weight,
                    })
                    .collect(),
                weight_table: cert
                    .weight_table
                    .iter()
                    .map(|row| row.iter().map(|(l, w)| (l.to_string(), *w)).collect())
                    .collect(),
            },
        });
        ReportDocument {
            verdict: verdict_str(report.verdict).to_string(),
            k: report.k,
            delta_k: report.delta_k,
            case_label: case_str(report.case_label).to_string(),
            paradox_string: report.paradox_string.clone(),
            measurement_requirement: report.measurement_requirement(),
            tolerance: report.tol,
            seed,
            settings: report.setting_labels.clone(),
            classes,
            zero_outcomes,
            lhs,
            premise_violation: report.violation.as_ref().map(|v| ViolationDoc {
                setting: v.setting,
                outcome: v.outcome,
                eigen_gap: v.eigen_gap,
            }),
            inputs: InputDigests {
                state_sha256: sha256_hex(state_doc),
                protocol_sha256: sha256_hex(protocol_doc),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict:     {}", self.verdict);
        let _ = writeln!(out, "statement:   {}", self.paradox_string);
        let _ = writeln!(out, "settings:    k = {} ({})", self.k, self.settings.join(", "));
        match self.delta_k {
            Some(delta) => {
                let _ = writeln!(out, "delta_k:     {delta:.12}");
            }
            None => {
                let _ = writeln!(out, "delta_k:     n/a");
            }
        }
        let _ = writeln!(out, "case:        {}", self.case_label);
        if let Some(req) = self.measurement_requirement {
            let _ = writeln!(out, "requirement: {}", if req { "satisfied" } else { "not satisfied" });
        }
        if let Some(v) = &self.premise_violation {
            let _ = writeln!(
                out,
                "premise:     violated at setting {} outcome {} (eigen gap {:.3e})",
                v.setting, v.outcome, v.eigen_gap
            );
        }
        if !self.classes.is_empty() {
            let _ = writeln!(out, "classes:");
            for (i, class) in self.classes.iter().enumerate() {
                let members: Vec<String> = class
                    .members
                    .iter()
                    .map(|m| format!("({},{})", self.settings[m.setting], m.outcome))
                    .collect();
                let weights: Vec<String> = class
                    .per_setting_weight
                    .iter()
                    .map(|(l, w)| format!("w[{l}]={w:.6}"))
                    .collect();
                let _ = writeln!(
                    out,
                    "  [{i}] canonical={:.6} members {} {}",
                    class.canonical_weight,
                    members.join(" "),
                    weights.join(" ")
                );
            }
        }
        if !self.zero_outcomes.is_empty() {
            let zeros: Vec<String> = self
                .zero_outcomes
                .iter()
                .map(|z| format!("({},{})", self.settings[z.setting], z.outcome))
                .collect();
            let _ = writeln!(out, "zero-trace:  {}", zeros.join(" "));
        }
        match &self.lhs {
            Some(LhsDoc::Feasible { weights, rho_b_residual, .. }) => {
                let ws: Vec<String> = weights.iter().map(|w| format!("{w:.6}")).collect();
                let _ = writeln!(
                    out,
                    "lhs model:   feasible, weights [{}], marginal residual {rho_b_residual:.3e}",
                    ws.join(", ")
                );
            }
            Some(LhsDoc::Infeasible { quantum_trace, classical_trace, shared_classes, .. }) => {
                let _ = writeln!(
                    out,
                    "lhs model:   infeasible, quantum trace {quantum_trace:.9} vs classical {classical_trace:.9}"
                );
                for s in shared_classes {
                    let _ = writeln!(
                        out,
                        "  class {} shared by {} settings, canonical weight {:.6}",
                        s.class_index, s.multiplicity, s.canonical_weight
                    );
                }
            }
            None => {}
        }
        let _ = writeln!(out, "tolerance:   {:e}", self.tolerance);
        let _ = writeln!(out, "state:       sha256:{}", self.inputs.state_sha256);
        let _ = writeln!(out, "protocol:    sha256:{}", self.inputs.protocol_sha256);
        out
    }
}
