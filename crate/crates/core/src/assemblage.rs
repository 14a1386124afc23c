//! Bob's conditional-state assemblage for a state and a protocol.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex;

use crate::eigen::hermitian_eigenvalues;
use crate::matrix::{ComplexMatrix, Ket, partial_trace};
use crate::measurements::Protocol;
use crate::shape::SubsystemShape;
use crate::states::StateSpec;
use crate::{Error, Result, ZERO_TRACE_TOL};

/// Hermiticity/positivity tolerance for individual entries.
const ENTRY_TOL: f64 = 1e-10;
/// No-signalling and normalization tolerance per setting.
const SUM_TOL: f64 = 1e-9;

/// All unnormalized conditional states `entry[setting][outcome]`, together
/// with Bob's reduced state. Construction audits positivity, no-signalling
/// and per-setting normalization before returning.
#[derive(Debug, Clone, PartialEq)]
pub struct Assemblage {
    shape: SubsystemShape,
    entries: Vec<Vec<ComplexMatrix>>,
    rho_b: ComplexMatrix,
    setting_labels: Vec<String>,
    outcome_labels: Vec<Vec<String>>,
}

impl Assemblage {
    /// Conditional states by projecting each ensemble ket with each basis ket
    /// of Alice's settings: one Bob-sized vector per (term, setting, outcome)
    /// instead of full-space matrix products.
    pub fn from_ensemble(spec: &StateSpec, protocol: &Protocol) -> Result<Self> {
        let shape = spec.shape().clone();
        check_protocol_dim(&shape, protocol)?;
        let bob_dim = shape.bob_dim();

        let mut rho_b = ComplexMatrix::zeros(bob_dim, bob_dim);
        for (weight, ket) in spec.ensemble() {
            accumulate_bob_marginal(&mut rho_b, ket, &shape, weight);
        }

        let mut entries = Vec::with_capacity(protocol.setting_count());
        for setting in protocol.settings() {
            let mut row = Vec::with_capacity(setting.outcome_count());
            for alice_ket in setting.kets() {
                let mut conditional = ComplexMatrix::zeros(bob_dim, bob_dim);
                for (weight, ket) in spec.ensemble() {
                    let projected = project_on_alice(ket, alice_ket, &shape);
                    conditional = conditional.add(&projected.outer_scaled(weight));
                }
                row.push(conditional);
            }
            entries.push(row);
        }
        Self::audited(shape, entries, rho_b, protocol)
    }

    /// Dense reference path: `tr_A[(P (x) 1) rho]` with full-space operators.
    /// Slower than [`Assemblage::from_ensemble`]; kept as the independent
    /// oracle for equivalence testing.
    pub fn from_density(
        rho: &ComplexMatrix,
        shape: &SubsystemShape,
        protocol: &Protocol,
    ) -> Result<Self> {
        check_protocol_dim(shape, protocol)?;
        if !rho.is_square() || rho.rows() != shape.total_dim() {
            return Err(Error::DimensionMismatch { expected: shape.total_dim(), got: rho.rows() });
        }
        let herm = rho.hermiticity_residual();
        if herm > ENTRY_TOL {
            return Err(Error::NotHermitian { residual: herm });
        }
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidState(alloc::format!(
                "density matrix has trace {trace}, expected 1"
            )));
        }
        let alice_sites = shape.alice_sites();
        let rho_b = partial_trace(rho, shape, &alice_sites)?;

        let mut entries = Vec::with_capacity(protocol.setting_count());
        for setting in protocol.settings() {
            let mut row = Vec::with_capacity(setting.outcome_count());
            for projector in setting.projectors() {
                let embedded = embed_on_alice(projector, shape);
                let product = embedded.matmul(rho);
                row.push(partial_trace(&product, shape, &alice_sites)?);
            }
            entries.push(row);
        }
        Self::audited(shape.clone(), entries, rho_b, protocol)
    }

    fn audited(
        shape: SubsystemShape,
        entries: Vec<Vec<ComplexMatrix>>,
        rho_b: ComplexMatrix,
        protocol: &Protocol,
    ) -> Result<Self> {
        for (l, row) in entries.iter().enumerate() {
            let mut sum = ComplexMatrix::zeros(rho_b.rows(), rho_b.cols());
            let mut total_prob = 0.0;
            for (a, entry) in row.iter().enumerate() {
                let herm = entry.hermiticity_residual();
                if herm > ENTRY_TOL {
                    return Err(Error::AssemblageInconsistent {
                        setting: l,
                        outcome: Some(a),
                        residual: herm,
                    });
                }
                let min_eig =
                    hermitian_eigenvalues(entry).first().copied().unwrap_or(0.0);
                if min_eig < -ENTRY_TOL {
                    return Err(Error::AssemblageInconsistent {
                        setting: l,
                        outcome: Some(a),
                        residual: -min_eig,
                    });
                }
                total_prob += entry.trace().re;
                sum = sum.add(entry);
            }
            let no_signal = sum.max_abs_diff(&rho_b);
            if no_signal > SUM_TOL {
                return Err(Error::AssemblageInconsistent {
                    setting: l,
                    outcome: None,
                    residual: no_signal,
                });
            }
            if (total_prob - 1.0).abs() > SUM_TOL {
                return Err(Error::AssemblageInconsistent {
                    setting: l,
                    outcome: None,
                    residual: (total_prob - 1.0).abs(),
                });
            }
        }
        let setting_labels =
            protocol.settings().iter().map(|s| String::from(s.label())).collect();
        let outcome_labels =
            protocol.settings().iter().map(|s| s.outcome_labels().to_vec()).collect();
        Ok(Self { shape, entries, rho_b, setting_labels, outcome_labels })
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn setting_count(&self) -> usize {
        self.entries.len()
    }

    pub fn outcome_count(&self, setting: usize) -> usize {
        self.entries[setting].len()
    }

    pub fn entry(&self, setting: usize, outcome: usize) -> &ComplexMatrix {
        &self.entries[setting][outcome]
    }

    pub fn rho_b(&self) -> &ComplexMatrix {
        &self.rho_b
    }

    pub fn setting_labels(&self) -> &[String] {
        &self.setting_labels
    }

    pub fn outcome_label(&self, setting: usize, outcome: usize) -> &str {
        &self.outcome_labels[setting][outcome]
    }

    /// Iterates entries in setting-major, outcome-minor order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &ComplexMatrix)> {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(l, row)| row.iter().enumerate().map(move |(a, m)| (l, a, m)))
    }
}

/// Probability/state split of an assemblage entry; zero-trace outcomes are
/// flagged instead of normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedEntry {
    pub setting: usize,
    pub outcome: usize,
    pub probability: f64,
    pub state: Option<ComplexMatrix>,
}

/// Splits every entry into `p(a|setting) = tr` and the normalized state.
pub fn normalized_view(asm: &Assemblage) -> Vec<NormalizedEntry> {
    asm.iter()
        .map(|(setting, outcome, entry)| {
            let probability = entry.trace().re;
            let state = if probability > ZERO_TRACE_TOL {
                Some(entry.scale(Complex::new(1.0 / probability, 0.0)))
            } else {
                None
            };
            NormalizedEntry { setting, outcome, probability: probability.max(0.0), state }
        })
        .collect()
}

fn check_protocol_dim(shape: &SubsystemShape, protocol: &Protocol) -> Result<()> {
    if protocol.alice_dim() != shape.alice_dim() {
        return Err(Error::DimensionMismatch {
            expected: shape.alice_dim(),
            got: protocol.alice_dim(),
        });
    }
    Ok(())
}

/// `rho_b += weight * tr_A |ket><ket|` without forming the full outer product.
fn accumulate_bob_marginal(rho_b: &mut ComplexMatrix, ket: &Ket, shape: &SubsystemShape, weight: f64) {
    let alice_dim = shape.alice_dim();
    let bob_dim = shape.bob_dim();
    let w = Complex::new(weight, 0.0);
    for av in 0..alice_dim {
        for b_row in 0..bob_dim {
            let amp_row = ket.amps()[shape.compose_index(av, b_row)];
            if amp_row == Complex::new(0.0, 0.0) {
                continue;
            }
            for b_col in 0..bob_dim {
                let amp_col = ket.amps()[shape.compose_index(av, b_col)];
                let v = rho_b.get(b_row, b_col) + w * amp_row * amp_col.conj();
                rho_b.set(b_row, b_col, v);
            }
        }
    }
}

/// `(<alice| (x) 1) |ket>` on Bob's space.
fn project_on_alice(ket: &Ket, alice: &Ket, shape: &SubsystemShape) -> Ket {
    let alice_dim = shape.alice_dim();
    let bob_dim = shape.bob_dim();
    let mut amps = alloc::vec![Complex::new(0.0, 0.0); bob_dim];
    for av in 0..alice_dim {
        let coeff = alice.amps()[av].conj();
        if coeff == Complex::new(0.0, 0.0) {
            continue;
        }
        for (b, amp) in amps.iter_mut().enumerate() {
            *amp += coeff * ket.amps()[shape.compose_index(av, b)];
        }
    }
    Ket::new(amps)
}

/// Places an Alice-space operator at Alice's sites of the full space, acting
/// as identity on Bob's sites.
fn embed_on_alice(op: &ComplexMatrix, shape: &SubsystemShape) -> ComplexMatrix {
    let total = shape.total_dim();
    let alice_dim = shape.alice_dim();
    let bob_dim = shape.bob_dim();
    let mut full = ComplexMatrix::zeros(total, total);
    for ar in 0..alice_dim {
        for ac in 0..alice_dim {
            let v = op.get(ar, ac);
            if v == Complex::new(0.0, 0.0) {
                continue;
            }
            for b in 0..bob_dim {
                full.set(shape.compose_index(ar, b), shape.compose_index(ac, b), v);
            }
        }
    }
    full
}
