//! On-disk document formats.
//!
//! Both states and protocols are UTF-8 JSON documents with all numbers in
//! decimal. Complex amplitudes are `[re, im]` pairs.
//!
//! State document:
//! ```json
//! {
//!   "dims": [2, 2],
//!   "kind": "pure",
//!   "amplitudes": [[0.7071, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071, 0.0]],
//!   "alice_sites": [0]
//! }
//! ```
//! Mixtures use `"kind": "mixture"` and `"terms": [{"weight": w,
//! "amplitudes": [...]}, ...]`. `alice_sites` is optional and defaults to
//! `[0]`.
//!
//! Protocol document:
//! ```json
//! {
//!   "settings": [
//!     {"basis": ["z", "z"]},
//!     {"projectors": [[[re, im], ...], ...], "label": "custom"}
//!   ]
//! }
//! ```
//! A `basis` setting names one basis per Alice site (`z x y` for qubits,
//! `computational`/`fourier` for any dimension); a `projectors` setting lists
//! one row-major matrix per outcome.

use serde::{Deserialize, Serialize};
use steerage_core::matrix::{ComplexMatrix, Ket, C64};
use steerage_core::measurements::{basis_setting, explicit_setting, BasisLabel, Protocol};
use steerage_core::states::{StateBody, StateSpec};
use steerage_core::SubsystemShape;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("document syntax: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("field {field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Core(#[from] steerage_core::Error),
}

fn field_err(field: &str, message: impl Into<String>) -> FormatError {
    FormatError::Field { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StateDoc {
    dims: Vec<usize>,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<TermDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alice_sites: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermDoc {
    weight: f64,
    amplitudes: Vec<[f64; 2]>,
}

fn ket_from_pairs(pairs: &[[f64; 2]]) -> Ket {
    Ket::new(pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect())
}

fn pairs_from_ket(ket: &Ket) -> Vec<[f64; 2]> {
    ket.amps().iter().map(|a| [a.re, a.im]).collect()
}

/// Parses a state document; syntax errors carry line/column, semantic errors
/// name the field.
pub fn parse_state_file(text: &str) -> Result<StateSpec, FormatError> {
    let doc: StateDoc = serde_json::from_str(text)?;
    let alice: Vec<usize> = doc.alice_sites.clone().unwrap_or_else(|| vec![0]);
    let shape = SubsystemShape::new(doc.dims.clone(), &alice)?;
    match doc.kind.as_str() {
        "pure" => {
            let amps = doc
                .amplitudes
                .as_ref()
                .ok_or_else(|| field_err("amplitudes", "required for kind \"pure\""))?;
            if doc.terms.is_some() {
                return Err(field_err("terms", "not allowed for kind \"pure\""));
            }
            Ok(StateSpec::pure(shape, ket_from_pairs(amps))?)
        }
        "mixture" => {
            let terms = doc
                .terms
                .as_ref()
                .ok_or_else(|| field_err("terms", "required for kind \"mixture\""))?;
            if doc.amplitudes.is_some() {
                return Err(field_err("amplitudes", "not allowed for kind \"mixture\""));
            }
            let ensemble = terms
                .iter()
                .map(|t| (t.weight, ket_from_pairs(&t.amplitudes)))
                .collect();
            Ok(StateSpec::mixture(shape, ensemble)?)
        }
        other => Err(field_err("kind", format!("expected \"pure\" or \"mixture\", got \"{other}\""))),
    }
}

/// Canonical emission; `parse_state_file(emit_state_file(s))` reproduces `s`.
pub fn emit_state_file(spec: &StateSpec) -> String {
    let doc = match spec.body() {
        StateBody::Pure(ket) => StateDoc {
            dims: spec.shape().local_dims().to_vec(),
            kind: "pure".into(),
            amplitudes: Some(pairs_from_ket(ket)),
            terms: None,
            alice_sites: Some(spec.shape().alice_sites()),
        },
        StateBody::Mixture(terms) => StateDoc {
            dims: spec.shape().local_dims().to_vec(),
            kind: "mixture".into(),
            amplitudes: None,
            terms: Some(
                terms
                    .iter()
                    .map(|(w, k)| TermDoc { weight: *w, amplitudes: pairs_from_ket(k) })
                    .collect(),
            ),
            alice_sites: Some(spec.shape().alice_sites()),
        },
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("state doc serializes");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProtocolDoc {
    settings: Vec<SettingDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SettingDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    projectors: Option<Vec<Vec<Vec<[f64; 2]>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// Parses a protocol document against the Alice site dimensions of the state
/// it will be used with.
pub fn parse_protocol_file(text: &str, alice_dims: &[usize]) -> Result<Protocol, FormatError> {
    let doc: ProtocolDoc = serde_json::from_str(text)?;
    let mut settings = Vec::with_capacity(doc.settings.len());
    for (i, setting) in doc.settings.iter().enumerate() {
        let built = match (&setting.basis, &setting.projectors) {
            (Some(labels), None) => {
                let parsed: Vec<BasisLabel> = labels
                    .iter()
                    .map(|l| BasisLabel::parse(l))
                    .collect::<Result<_, _>>()?;
                basis_setting(&parsed, alice_dims)?
            }
            (None, Some(matrices)) => {
                let mut projectors = Vec::with_capacity(matrices.len());
                for rows in matrices {
                    let dim = rows.len();
                    let mut entries = Vec::with_capacity(dim * dim);
                    for row in rows {
                        if row.len() != dim {
                            return Err(field_err(
                                &format!("settings[{i}].projectors"),
                                "projector matrices must be square",
                            ));
                        }
                        entries.extend(row.iter().map(|[re, im]| C64::new(*re, *im)));
                    }
                    projectors.push(ComplexMatrix::new(dim, dim, entries)?);
                }
                explicit_setting(projectors)?
            }
            _ => {
                return Err(field_err(
                    &format!("settings[{i}]"),
                    "exactly one of \"basis\" or \"projectors\" is required",
                ));
            }
        };
        let built = match &setting.label {
            Some(label) => built.with_label(label),
            None => built,
        };
        settings.push(built);
    }
    Ok(Protocol::new(settings)?)
}

/// Canonical emission as explicit projectors with labels preserved.
pub fn emit_protocol_file(protocol: &Protocol) -> String {
    let doc = ProtocolDoc {
        settings: protocol
            .settings()
            .iter()
            .map(|s| SettingDoc {
                basis: None,
                projectors: Some(
                    s.projectors()
                        .iter()
                        .map(|p| {
                            (0..p.rows())
                                .map(|r| (0..p.cols()).map(|c| [p.get(r, c).re, p.get(r, c).im]).collect())
                                .collect()
                        })
                        .collect(),
                ),
                label: Some(s.label().to_string()),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("protocol doc serializes");
    out.push('\n');
    out
}

/// Expands shorthand like `zz,yx`: comma-separated settings, one basis letter
/// per Alice site (`z x y` for qubits, `c`/`f` for computational/Fourier).
pub fn parse_protocol_shorthand(spec: &str, alice_dims: &[usize]) -> Result<Protocol, FormatError> {
    let mut settings = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(field_err("protocol", "empty setting token"));
        }
        let labels: Vec<BasisLabel> = token
            .chars()
            .map(|ch| BasisLabel::parse(&ch.to_string()))
            .collect::<Result<_, _>>()?;
        settings.push(basis_setting(&labels, alice_dims)?);
    }
    Ok(Protocol::new(settings)?)
}
