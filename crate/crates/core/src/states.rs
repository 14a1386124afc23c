//! Shared-state specifications: pure kets and pure-state ensembles, plus the
//! built-in states used by the demo suite.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;
// Builds that link std resolve these methods inherently; no_std needs the trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::{C64, ComplexMatrix, Ket};
use crate::shape::SubsystemShape;
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-10;

/// Either a single ket or an ensemble of weighted kets. Ensembles stay as
/// ensembles until a density matrix is explicitly requested, which keeps the
/// exact weights available for reports.
#[derive(Debug, Clone, PartialEq)]
pub enum StateBody {
    Pure(Ket),
    Mixture(Vec<(f64, Ket)>),
}

/// A state together with its site layout and Alice/Bob partition.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    shape: SubsystemShape,
    body: StateBody,
}

impl StateSpec {
    pub fn pure(shape: SubsystemShape, ket: Ket) -> Result<Self> {
        Self::validated(shape, StateBody::Pure(ket))
    }

    pub fn mixture(shape: SubsystemShape, terms: Vec<(f64, Ket)>) -> Result<Self> {
        Self::validated(shape, StateBody::Mixture(terms))
    }

    fn validated(shape: SubsystemShape, body: StateBody) -> Result<Self> {
        let dim = shape.total_dim();
        match &body {
            StateBody::Pure(ket) => {
                check_ket(ket, dim, "amplitudes")?;
            }
            StateBody::Mixture(terms) => {
                if terms.is_empty() {
                    return Err(Error::InvalidState("terms: empty mixture".into()));
                }
                let mut total = 0.0;
                for (i, (w, ket)) in terms.iter().enumerate() {
                    if *w < 0.0 {
                        return Err(Error::InvalidState(format!(
                            "terms[{i}].weight: negative weight {w}"
                        )));
                    }
                    check_ket(ket, dim, &format!("terms[{i}].amplitudes"))?;
                    total += w;
                }
                if (total - 1.0).abs() > NORM_TOL {
                    return Err(Error::InvalidState(format!(
                        "terms: weights sum to {total}, expected 1"
                    )));
                }
            }
        }
        Ok(Self { shape, body })
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn body(&self) -> &StateBody {
        &self.body
    }

    /// Replaces the Alice/Bob partition, revalidating it against the dims.
    pub fn with_alice_sites(self, alice_sites: &[usize]) -> Result<Self> {
        let shape = SubsystemShape::new(self.shape.local_dims().to_vec(), alice_sites)?;
        Ok(Self { shape, body: self.body })
    }

    /// The ensemble view: a pure state is a one-term ensemble.
    pub fn ensemble(&self) -> Vec<(f64, &Ket)> {
        match &self.body {
            StateBody::Pure(ket) => vec![(1.0, ket)],
            StateBody::Mixture(terms) => terms.iter().map(|(w, k)| (*w, k)).collect(),
        }
    }

    /// Hermitian PSD matrix with unit trace.
    pub fn to_density(&self) -> ComplexMatrix {
        let dim = self.shape.total_dim();
        let mut rho = ComplexMatrix::zeros(dim, dim);
        for (w, ket) in self.ensemble() {
            rho = rho.add(&ket.outer_scaled(w));
        }
        rho
    }
}

fn check_ket(ket: &Ket, dim: usize, field: &str) -> Result<()> {
    if ket.dim() != dim {
        return Err(Error::InvalidState(format!(
            "{field}: {} amplitudes for total dimension {dim}",
            ket.dim()
        )));
    }
    let norm = ket.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidState(format!("{field}: norm {norm}, expected 1")));
    }
    Ok(())
}

/// Built-in state names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 5] =
    ["two_qubit_theta", "cluster_mix_theta", "psi_prime", "w_state", "si_product_example"];

/// Constructs one of the named demo states with its conventional Alice/Bob
/// partition. `two_qubit_theta` and `cluster_mix_theta` take one angle in
/// radians, restricted to (0, pi/2); the rest take no parameters.
pub fn builtin(name: &str, params: &[f64]) -> Result<StateSpec> {
    match name {
        "two_qubit_theta" => {
            let theta = one_angle(name, params)?;
            let ket = Ket::new(vec![
                real(theta.cos()),
                C_ZERO,
                C_ZERO,
                real(theta.sin()),
            ]);
            StateSpec::pure(SubsystemShape::new(vec![2, 2], &[0])?, ket)
        }
        "cluster_mix_theta" => {
            let theta = one_angle(name, params)?;
            let c2 = theta.cos() * theta.cos();
            let s2 = theta.sin() * theta.sin();
            StateSpec::mixture(
                SubsystemShape::new(vec![2, 2, 2, 2], &[0, 1])?,
                vec![(c2, linear_cluster_4()), (s2, linear_cluster_4_shifted())],
            )
        }
        "psi_prime" => {
            let a = 1.0 / 6.0_f64.sqrt();
            // (|001> + |01>(|0>+|1>) + |10>(|0>-|1>) - |110>) / sqrt(6)
            let mut amps = vec![C_ZERO; 8];
            amps[0b001] = real(a);
            amps[0b010] = real(a);
            amps[0b011] = real(a);
            amps[0b100] = real(a);
            amps[0b101] = real(-a);
            amps[0b110] = real(-a);
            StateSpec::pure(SubsystemShape::new(vec![2, 2, 2], &[0, 1])?, Ket::new(amps))
        }
        "w_state" => {
            let a = 1.0 / 3.0_f64.sqrt();
            // (|100> + |010> + |001>) / sqrt(3)
            let mut amps = vec![C_ZERO; 8];
            amps[0b100] = real(a);
            amps[0b010] = real(a);
            amps[0b001] = real(a);
            StateSpec::pure(SubsystemShape::new(vec![2, 2, 2], &[0, 1])?, Ket::new(amps))
        }
        "si_product_example" => {
            // (1/2)(|00> + |01> + |10> + |11>) (x) |0>
            let mut amps = vec![C_ZERO; 8];
            for alice in 0..4 {
                amps[alice << 1] = real(0.5);
            }
            StateSpec::pure(SubsystemShape::new(vec![2, 2, 2], &[0, 1])?, Ket::new(amps))
        }
        other => Err(Error::UnknownBuiltin(other.into())),
    }
}

const C_ZERO: C64 = Complex::new(0.0, 0.0);

fn real(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

fn one_angle(name: &str, params: &[f64]) -> Result<f64> {
    if params.len() != 1 {
        return Err(Error::DomainError(format!(
            "{name} takes exactly one angle parameter, got {}",
            params.len()
        )));
    }
    let theta = params[0];
    if !(theta > 0.0 && theta < core::f64::consts::FRAC_PI_2) {
        return Err(Error::DomainError(format!(
            "{name} requires theta in (0, pi/2), got {theta}"
        )));
    }
    Ok(theta)
}

/// (|0000> + |1100> + |0011> - |1111>) / 2
fn linear_cluster_4() -> Ket {
    let mut amps = vec![C_ZERO; 16];
    amps[0b0000] = real(0.5);
    amps[0b1100] = real(0.5);
    amps[0b0011] = real(0.5);
    amps[0b1111] = real(-0.5);
    Ket::new(amps)
}

/// (|0100> + |1000> + |0111> - |1011>) / 2
fn linear_cluster_4_shifted() -> Ket {
    let mut amps = vec![C_ZERO; 16];
    amps[0b0100] = real(0.5);
    amps[0b1000] = real(0.5);
    amps[0b0111] = real(0.5);
    amps[0b1011] = real(-0.5);
    Ket::new(amps)
}

/// A short, stable description of what `name` expects, for CLI help output.
pub fn builtin_signature(name: &str) -> Option<&'static str> {
    match name {
        "two_qubit_theta" => Some("two_qubit_theta(theta), theta in (0, pi/2), Alice site 0 of 2"),
        "cluster_mix_theta" => {
            Some("cluster_mix_theta(theta), theta in (0, pi/2), Alice sites 0,1 of 4")
        }
        "psi_prime" => Some("psi_prime(), Alice sites 0,1 of 3"),
        "w_state" => Some("w_state(), Alice sites 0,1 of 3"),
        "si_product_example" => Some("si_product_example(), Alice sites 0,1 of 3"),
        _ => None,
    }
}
