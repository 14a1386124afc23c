//! Complete projective measurement settings on Alice's subspace, and
//! k-setting protocols built from them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;
// Builds that link std resolve these methods inherently; no_std needs the trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::{ComplexMatrix, Ket, rank_one_decompose};
use crate::{Error, Result};

const PROJECTOR_TOL: f64 = 1e-10;

/// One measurement setting: a complete family of mutually orthogonal rank-one
/// projectors on Alice's subspace, in lexicographic outcome order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorSet {
    label: String,
    projectors: Vec<ComplexMatrix>,
    kets: Vec<Ket>,
    outcome_labels: Vec<String>,
}

impl ProjectorSet {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn outcome_count(&self) -> usize {
        self.projectors.len()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Basis ket of each outcome (projectors here are always rank one).
    pub fn kets(&self) -> &[Ket] {
        &self.kets
    }

    pub fn outcome_labels(&self) -> &[String] {
        &self.outcome_labels
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }
}

/// Per-site basis choices understood by [`basis_setting`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    Z,
    X,
    Y,
    Computational,
    Fourier,
}

impl BasisLabel {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(Self::Z),
            "x" => Ok(Self::X),
            "y" => Ok(Self::Y),
            "c" | "computational" => Ok(Self::Computational),
            "f" | "fourier" => Ok(Self::Fourier),
            other => Err(Error::UnknownBasisLabel(other.into())),
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            Self::Z => "z",
            Self::X => "x",
            Self::Y => "y",
            Self::Computational => "computational",
            Self::Fourier => "fourier",
        }
    }

    /// Basis kets on one site of dimension `d`, in outcome order.
    fn kets(&self, d: usize) -> Result<Vec<Ket>> {
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        match self {
            Self::Z | Self::X | Self::Y if d != 2 => Err(Error::InvalidShape(format!(
                "basis '{}' is qubit-only, site has dimension {d}",
                self.as_str()
            ))),
            Self::Z => Ok(vec![Ket::basis(2, 0), Ket::basis(2, 1)]),
            Self::X => Ok(vec![
                Ket::from_real(&[inv_sqrt2, inv_sqrt2]),
                Ket::from_real(&[inv_sqrt2, -inv_sqrt2]),
            ]),
            Self::Y => Ok(vec![
                Ket::new(vec![Complex::new(inv_sqrt2, 0.0), Complex::new(0.0, inv_sqrt2)]),
                Ket::new(vec![Complex::new(inv_sqrt2, 0.0), Complex::new(0.0, -inv_sqrt2)]),
            ]),
            Self::Computational => Ok((0..d).map(|i| Ket::basis(d, i)).collect()),
            Self::Fourier => {
                let scale = 1.0 / (d as f64).sqrt();
                Ok((0..d)
                    .map(|j| {
                        Ket::new(
                            (0..d)
                                .map(|i| {
                                    let angle =
                                        2.0 * core::f64::consts::PI * (i * j) as f64 / d as f64;
                                    Complex::from_polar(scale, angle)
                                })
                                .collect(),
                        )
                    })
                    .collect())
            }
        }
    }
}

/// Tensor-product setting from one basis label per Alice site. Outcomes run
/// lexicographically over per-site outcome indices.
pub fn basis_setting(per_site_labels: &[BasisLabel], per_site_dims: &[usize]) -> Result<ProjectorSet> {
    if per_site_labels.len() != per_site_dims.len() {
        return Err(Error::LabelArity {
            expected: per_site_dims.len(),
            got: per_site_labels.len(),
        });
    }
    if per_site_labels.is_empty() {
        return Err(Error::LabelArity { expected: 1, got: 0 });
    }
    let site_kets: Vec<Vec<Ket>> = per_site_labels
        .iter()
        .zip(per_site_dims)
        .map(|(label, &d)| label.kets(d))
        .collect::<Result<_>>()?;

    let mut kets: Vec<Ket> = vec![Ket::from_real(&[1.0])];
    let mut outcome_labels: Vec<String> = vec![String::new()];
    for choices in &site_kets {
        let mut next_kets = Vec::with_capacity(kets.len() * choices.len());
        let mut next_labels = Vec::with_capacity(kets.len() * choices.len());
        for (prefix, prefix_label) in kets.iter().zip(&outcome_labels) {
            for (digit, choice) in choices.iter().enumerate() {
                next_kets.push(prefix.tensor(choice));
                next_labels.push(format!("{prefix_label}{digit}"));
            }
        }
        kets = next_kets;
        outcome_labels = next_labels;
    }

    let projectors = kets.iter().map(Ket::projector).collect();
    let label = join_labels(per_site_labels);
    let set = ProjectorSet { label, projectors, kets, outcome_labels };
    validate(&set)?;
    Ok(set)
}

fn join_labels(labels: &[BasisLabel]) -> String {
    if labels.iter().all(|l| matches!(l, BasisLabel::Z | BasisLabel::X | BasisLabel::Y)) {
        labels.iter().map(|l| l.as_str()).collect()
    } else {
        let parts: Vec<&str> = labels.iter().map(|l| l.as_str()).collect();
        parts.join(",")
    }
}

/// Validates an explicitly given projector family. Entangled (non-product)
/// bases are accepted; any orthonormal basis of Alice's subspace works.
pub fn explicit_setting(projectors: Vec<ComplexMatrix>) -> Result<ProjectorSet> {
    let count = projectors.len();
    if count == 0 {
        return Err(Error::WrongOutcomeCount { expected: 1, got: 0 });
    }
    let dim = projectors[0].rows();
    let outcome_labels = (0..count).map(|i| i.to_string()).collect();
    let mut kets = Vec::with_capacity(count);
    for (i, p) in projectors.iter().enumerate() {
        if !p.is_square() || p.rows() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.rows() });
        }
        let split = rank_one_decompose(p, PROJECTOR_TOL)?
            .ok_or(Error::NotRankOne { index: i, trace: p.trace().re })?;
        kets.push(split.ket);
    }
    let set = ProjectorSet { label: "explicit".into(), projectors, kets, outcome_labels };
    validate(&set)?;
    Ok(set)
}

fn validate(set: &ProjectorSet) -> Result<()> {
    let dim = set.projectors[0].rows();
    if set.projectors.len() != dim {
        return Err(Error::WrongOutcomeCount { expected: dim, got: set.projectors.len() });
    }
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for (i, p) in set.projectors.iter().enumerate() {
        if !p.is_square() || p.rows() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.rows() });
        }
        let herm = p.hermiticity_residual();
        if herm > PROJECTOR_TOL {
            return Err(Error::NotHermitian { residual: herm });
        }
        let idem = p.matmul(p).max_abs_diff(p);
        if idem > PROJECTOR_TOL {
            return Err(Error::NotIdempotent { index: i, residual: idem });
        }
        let trace = p.trace().re;
        if (trace - 1.0).abs() > PROJECTOR_TOL {
            return Err(Error::NotRankOne { index: i, trace });
        }
        sum = sum.add(p);
    }
    for i in 0..set.projectors.len() {
        for j in (i + 1)..set.projectors.len() {
            let prod = set.projectors[i].matmul(&set.projectors[j]).max_abs();
            if prod > PROJECTOR_TOL {
                return Err(Error::NotOrthogonal { first: i, second: j, residual: prod });
            }
        }
    }
    let completeness = sum.max_abs_diff(&ComplexMatrix::identity(dim));
    if completeness > PROJECTOR_TOL {
        return Err(Error::Incomplete { residual: completeness });
    }
    Ok(())
}

/// An ordered list of at least two settings on the same Alice dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    settings: Vec<ProjectorSet>,
}

impl Protocol {
    pub fn new(settings: Vec<ProjectorSet>) -> Result<Self> {
        if settings.len() < 2 {
            return Err(Error::ProtocolTooSmall { settings: settings.len() });
        }
        let dim = settings[0].dim();
        for s in &settings[1..] {
            if s.dim() != dim {
                return Err(Error::MixedSettingDims { first: dim, offending: s.dim() });
            }
        }
        Ok(Self { settings })
    }

    pub fn settings(&self) -> &[ProjectorSet] {
        &self.settings
    }

    pub fn setting_count(&self) -> usize {
        self.settings.len()
    }

    pub fn alice_dim(&self) -> usize {
        self.settings[0].dim()
    }
}
