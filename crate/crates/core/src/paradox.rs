//! Premise check, duplicate-state classification, the local-hidden-state
//! reduction, and the `k_Q = (1+delta_k)_C` verdict.
//!
//! With every conditional state pure, a hidden state can reproduce an entry
//! only by being that entry's ray. A model therefore exists exactly when each
//! ray shows up in every setting with the same total weight; otherwise the
//! best classical total falls short of the quantum trace `k` and the gap is
//! the paradox.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;
// Builds that link std resolve these methods inherently; no_std needs the trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::assemblage::Assemblage;
use crate::matrix::{ComplexMatrix, Ket, RankOne, projector_fidelity, rank_one_decompose};
use crate::measurements::Protocol;
use crate::states::StateSpec;
use crate::{Error, Result, ZERO_TRACE_TOL};

/// Outcome of the purity premise check.
#[derive(Debug, Clone, PartialEq)]
pub enum Premise {
    /// Rank-one data for every nonzero entry, indexed `[setting][outcome]`;
    /// `None` marks a zero-trace outcome.
    AllPure(Vec<Vec<Option<RankOne>>>),
    /// Some conditional state is mixed: `eigen_gap = 1 - lambda_max/tr`.
    Violation { setting: usize, outcome: usize, eigen_gap: f64 },
}

/// Verifies that every nonzero conditional state is pure within `tol`.
pub fn check_premise(asm: &Assemblage, tol: f64) -> Result<Premise> {
    let mut data = Vec::with_capacity(asm.setting_count());
    for l in 0..asm.setting_count() {
        let mut row = Vec::with_capacity(asm.outcome_count(l));
        for a in 0..asm.outcome_count(l) {
            let entry = asm.entry(l, a);
            let trace = entry.trace().re;
            if trace <= ZERO_TRACE_TOL {
                row.push(None);
                continue;
            }
            match rank_one_decompose(entry, tol)? {
                Some(split) => row.push(Some(split)),
                None => {
                    let top = crate::eigen::hermitian_eigenvalues(entry)
                        .last()
                        .copied()
                        .unwrap_or(0.0);
                    return Ok(Premise::Violation {
                        setting: l,
                        outcome: a,
                        eigen_gap: 1.0 - top / trace,
                    });
                }
            }
        }
        data.push(row);
    }
    Ok(Premise::AllPure(data))
}

/// One assemblage entry inside a hidden-state class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMember {
    pub setting: usize,
    pub outcome: usize,
    /// `tr` of the unnormalized entry.
    pub weight: f64,
}

/// An equivalence class of entries sharing one normalized pure state: a
/// candidate hidden state.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenStateClass {
    /// Representative normalized ket (first occurrence, fixed phase).
    pub ket: Ket,
    pub members: Vec<ClassMember>,
    pub settings_present: BTreeSet<usize>,
    /// Total member weight per setting: the weight this class is forced to
    /// carry if it is used in that setting.
    pub per_setting_weight: BTreeMap<usize, f64>,
    /// Weight forced by the lowest-index setting this class appears in.
    pub canonical_weight: f64,
}

impl HiddenStateClass {
    pub fn multiplicity(&self) -> usize {
        self.settings_present.len()
    }
}

/// Partition of the nonzero entries into hidden-state classes, ordered by
/// first occurrence (setting-major, outcome-minor).
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub classes: Vec<HiddenStateClass>,
    pub zero_outcomes: Vec<(usize, usize)>,
}

impl Classification {
    /// Class indices present in each setting.
    pub fn per_setting_class_sets(&self, setting_count: usize) -> Vec<BTreeSet<usize>> {
        let mut sets = vec![BTreeSet::new(); setting_count];
        for (idx, class) in self.classes.iter().enumerate() {
            for &l in &class.settings_present {
                sets[l].insert(idx);
            }
        }
        sets
    }
}

/// Groups the rank-one entries into classes of identical rays (transitive
/// closure of `fidelity >= 1 - tol`). Pairs falling inside the band
/// `(1 - 10 tol, 1 - tol)` are neither clearly equal nor clearly distinct and
/// abort classification.
pub fn classify(asm: &Assemblage, premise: &[Vec<Option<RankOne>>], tol: f64) -> Result<Classification> {
    struct Item<'a> {
        setting: usize,
        outcome: usize,
        split: &'a RankOne,
    }
    let mut items = Vec::new();
    let mut zero_outcomes = Vec::new();
    for (l, row) in premise.iter().enumerate() {
        for (a, slot) in row.iter().enumerate() {
            match slot {
                Some(split) => items.push(Item { setting: l, outcome: a, split }),
                None => zero_outcomes.push((l, a)),
            }
        }
    }
    debug_assert_eq!(premise.len(), asm.setting_count());

    // Union-find over entries.
    let n = items.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut walk = i;
        while parent[walk] != root {
            let next = parent[walk];
            parent[walk] = root;
            walk = next;
        }
        root
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let fid = projector_fidelity(&items[i].split.ket, &items[j].split.ket)?;
            if fid > 1.0 - 10.0 * tol && fid < 1.0 - tol {
                return Err(Error::ToleranceAmbiguity { fidelity: fid, tol });
            }
            if fid >= 1.0 - tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    // Lower index wins so class order follows first occurrence.
                    let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                    parent[hi] = lo;
                }
            }
        }
    }

    let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut classes: Vec<HiddenStateClass> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let class_index = *class_of_root.entry(root).or_insert_with(|| {
            classes.push(HiddenStateClass {
                ket: items[root].split.ket.clone(),
                members: Vec::new(),
                settings_present: BTreeSet::new(),
                per_setting_weight: BTreeMap::new(),
                canonical_weight: 0.0,
            });
            classes.len() - 1
        });
        let item = &items[i];
        classes[class_index].members.push(ClassMember {
            setting: item.setting,
            outcome: item.outcome,
            weight: item.split.weight,
        });
        classes[class_index].settings_present.insert(item.setting);
        *classes[class_index].per_setting_weight.entry(item.setting).or_insert(0.0) +=
            item.split.weight;
    }
    for class in &mut classes {
        let first = *class.settings_present.iter().next().expect("class has a member");
        class.canonical_weight = class.per_setting_weight[&first];
    }
    Ok(Classification { classes, zero_outcomes })
}

/// Requirement gate: true iff the per-setting sets of normalized states are not
/// all identical. Zero-trace outcomes carry no state and are ignored.
pub fn measurement_requirement(cls: &Classification, k: usize) -> bool {
    let sets = cls.per_setting_class_sets(k);
    sets.iter().any(|s| *s != sets[0])
}

/// A consistent local-hidden-state model.
#[derive(Debug, Clone, PartialEq)]
pub struct LhsModel {
    /// Hidden-state weights by class index; sums to one.
    pub weights: Vec<f64>,
    /// Response probabilities `[setting][outcome][class]`.
    pub responses: Vec<Vec<Vec<f64>>>,
    /// Residual of re-verifying `sum_xi w_xi rho_xi = rho_B`.
    pub rho_b_residual: f64,
}

/// A class counted once per setting it appears in by the quantum side, but at
/// most once by any hidden-state model.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedClass {
    pub class_index: usize,
    pub multiplicity: usize,
    pub canonical_weight: f64,
}

/// Certifies that no model exists: the maximum classical total `1 + delta`
/// falls short of the quantum trace `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContradictionCertificate {
    pub quantum_trace: f64,
    pub classical_trace: f64,
    pub shared_classes: Vec<SharedClass>,
    /// Per-class forced weight by setting; absent settings expose the
    /// presence gaps, unequal values expose forced-assignment conflicts.
    pub weight_table: Vec<BTreeMap<usize, f64>>,
}

/// Result of the LHS reduction.
#[derive(Debug, Clone, PartialEq)]
pub enum LhsOutcome {
    Feasible(LhsModel),
    Infeasible(ContradictionCertificate),
}

/// Reduction over the classes: a model exists iff every class appears in all
/// `k` settings with a constant forced weight; the model is then unique.
pub fn lhs_reduce(asm: &Assemblage, cls: &Classification, tol: f64) -> LhsOutcome {
    let k = asm.setting_count();
    let mut feasible = true;
    for class in &cls.classes {
        if class.settings_present.len() != k {
            feasible = false;
            break;
        }
        let weights: Vec<f64> = class.per_setting_weight.values().copied().collect();
        let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
        let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max - min > tol {
            feasible = false;
            break;
        }
    }

    if !feasible {
        let quantum_trace: f64 = asm.iter().map(|(_, _, m)| m.trace().re).sum();
        let classical_trace: f64 = 1.0
            + cls
                .classes
                .iter()
                .map(|c| (c.multiplicity() as f64 - 1.0) * c.canonical_weight)
                .sum::<f64>();
        let shared_classes = cls
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.multiplicity() > 1)
            .map(|(i, c)| SharedClass {
                class_index: i,
                multiplicity: c.multiplicity(),
                canonical_weight: c.canonical_weight,
            })
            .collect();
        let weight_table = cls.classes.iter().map(|c| c.per_setting_weight.clone()).collect();
        return LhsOutcome::Infeasible(ContradictionCertificate {
            quantum_trace,
            classical_trace,
            shared_classes,
            weight_table,
        });
    }

    let weights: Vec<f64> = cls.classes.iter().map(|c| c.canonical_weight).collect();
    let mut responses = Vec::with_capacity(k);
    for l in 0..k {
        let mut row = vec![vec![0.0; cls.classes.len()]; asm.outcome_count(l)];
        for (idx, class) in cls.classes.iter().enumerate() {
            for member in &class.members {
                if member.setting == l {
                    row[member.outcome][idx] = member.weight / weights[idx];
                }
            }
        }
        responses.push(row);
    }
    let mut reconstructed = ComplexMatrix::zeros(asm.rho_b().rows(), asm.rho_b().cols());
    for (class, w) in cls.classes.iter().zip(&weights) {
        reconstructed = reconstructed.add(&class.ket.outer_scaled(*w));
    }
    let rho_b_residual = reconstructed.max_abs_diff(asm.rho_b());
    LhsOutcome::Feasible(LhsModel { weights, responses, rho_b_residual })
}

/// Final verdict of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Paradox,
    NoContradiction,
    PremiseViolated,
}

/// Duplication-pattern taxonomy of a two-setting run; `Mixed` for k > 2,
/// `NotApplicable` when the premise fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    Case1,
    Case2,
    Case3,
    Case4,
    Mixed,
    NotApplicable,
}

/// Where and how badly purity failed.
#[derive(Debug, Clone, PartialEq)]
pub struct PremiseViolation {
    pub setting: usize,
    pub outcome: usize,
    pub eigen_gap: f64,
}

/// Everything the pipeline decided, ready for rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct ParadoxReport {
    pub verdict: Verdict,
    /// Number of settings.
    pub k: usize,
    /// Canonical trace gap; `None` when the premise is violated.
    pub delta_k: Option<f64>,
    pub case_label: CaseLabel,
    pub paradox_string: String,
    pub classification: Option<Classification>,
    pub lhs: Option<LhsOutcome>,
    pub violation: Option<PremiseViolation>,
    /// Tolerance used for purity, ray-equality and weight consistency.
    pub tol: f64,
    pub setting_labels: Vec<String>,
}

impl ParadoxReport {
    pub fn measurement_requirement(&self) -> Option<bool> {
        self.classification.as_ref().map(|cls| measurement_requirement(cls, self.k))
    }
}

fn case_label(cls: &Classification, k: usize) -> CaseLabel {
    if k > 2 {
        return CaseLabel::Mixed;
    }
    let mut within = false;
    let mut across = false;
    for class in &cls.classes {
        if class.multiplicity() > 1 {
            across = true;
        }
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for member in &class.members {
            *seen.entry(member.setting).or_insert(0) += 1;
        }
        if seen.values().any(|&count| count > 1) {
            within = true;
        }
    }
    match (within, across) {
        (false, false) => CaseLabel::Case1,
        (true, false) => CaseLabel::Case2,
        (false, true) => CaseLabel::Case3,
        (true, true) => CaseLabel::Case4,
    }
}

/// Renders `k_Q = (1+delta)_C` with small rationals recognized, e.g.
/// `2_Q = 1_C`, `2_Q = (4/3)_C`, `3_Q = 2_C`.
fn format_paradox_string(k: usize, delta: f64) -> String {
    let total = 1.0 + delta;
    if let Some((num, den)) = as_small_fraction(total) {
        if den == 1 {
            return format!("{k}_Q = {num}_C");
        }
        return format!("{k}_Q = ({num}/{den})_C");
    }
    format!("{k}_Q = (1+{delta})_C")
}

/// Continued-fraction recognition of `x` as `num/den` with small denominator.
fn as_small_fraction(x: f64) -> Option<(i64, i64)> {
    const MAX_DEN: i64 = 1024;
    const TOL: f64 = 1e-9;
    let mut a = x.floor();
    let mut frac = x - a;
    let (mut num0, mut den0) = (1i64, 0i64);
    let (mut num1, mut den1) = (a as i64, 1i64);
    for _ in 0..32 {
        if (num1 as f64 / den1 as f64 - x).abs() < TOL {
            return Some((num1, den1));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        a = inv.floor();
        frac = inv - a;
        let num2 = a as i64 * num1 + num0;
        let den2 = a as i64 * den1 + den0;
        if den2 > MAX_DEN {
            break;
        }
        (num0, den0) = (num1, den1);
        (num1, den1) = (num2, den2);
    }
    None
}

/// Full pipeline: assemblage, premise, classification, requirement, reduction.
pub fn analyze(spec: &StateSpec, protocol: &Protocol, tol: f64) -> Result<ParadoxReport> {
    let asm = Assemblage::from_ensemble(spec, protocol)?;
    analyze_assemblage(&asm, tol)
}

/// Pipeline from an already computed assemblage.
pub fn analyze_assemblage(asm: &Assemblage, tol: f64) -> Result<ParadoxReport> {
    let k = asm.setting_count();
    let setting_labels = asm.setting_labels().to_vec();
    match check_premise(asm, tol)? {
        Premise::Violation { setting, outcome, eigen_gap } => Ok(ParadoxReport {
            verdict: Verdict::PremiseViolated,
            k,
            delta_k: None,
            case_label: CaseLabel::NotApplicable,
            paradox_string: format!(
                "premise violated: conditional state ({setting},{outcome}) is mixed"
            ),
            classification: None,
            lhs: None,
            violation: Some(PremiseViolation { setting, outcome, eigen_gap }),
            tol,
            setting_labels,
        }),
        Premise::AllPure(data) => {
            let cls = classify(asm, &data, tol)?;
            let label = case_label(&cls, k);
            let lhs = lhs_reduce(asm, &cls, tol);
            let (verdict, delta) = match &lhs {
                LhsOutcome::Feasible(_) => (Verdict::NoContradiction, (k - 1) as f64),
                LhsOutcome::Infeasible(cert) => {
                    (Verdict::Paradox, cert.classical_trace - 1.0)
                }
            };
            Ok(ParadoxReport {
                verdict,
                k,
                delta_k: Some(delta),
                case_label: label,
                paradox_string: format_paradox_string(k, delta),
                classification: Some(cls),
                lhs: Some(lhs),
                violation: None,
                tol,
                setting_labels,
            })
        }
    }
}

/// Desk-scale limits for the brute-force oracle.
const ORACLE_MAX_CLASSES: usize = 12;
const ORACLE_MAX_OUTCOMES: usize = 16;

/// Independent feasibility check of the hidden-state constraints with the
/// hidden states fixed to the class rays. Re-derives each entry's ray by
/// power iteration, rebuilds the forced assignment table, and accepts only if
/// every consistency equation closes. Must agree with [`lhs_reduce`].
pub fn brute_force_lhs_oracle(asm: &Assemblage, cls: &Classification) -> Result<LhsFeasibility> {
    let k = asm.setting_count();
    if cls.classes.len() > ORACLE_MAX_CLASSES {
        return Err(Error::ScaleLimit(format!(
            "{} classes exceeds supported {ORACLE_MAX_CLASSES}",
            cls.classes.len()
        )));
    }
    for l in 0..k {
        if asm.outcome_count(l) > ORACLE_MAX_OUTCOMES {
            return Err(Error::ScaleLimit(format!(
                "{} outcomes exceeds supported {ORACLE_MAX_OUTCOMES}",
                asm.outcome_count(l)
            )));
        }
    }
    const MATCH_TOL: f64 = 1e-6;
    const MASS_TOL: f64 = 1e-9;
    const RECON_TOL: f64 = 1e-8;

    // Forced assignment mass per (setting, class). A pure entry can only be
    // expanded on its own ray, so its whole trace lands on the matching class.
    let mut mass = vec![vec![0.0f64; cls.classes.len()]; k];
    for (l, a, entry) in asm.iter() {
        let trace = entry.trace().re;
        if trace <= ZERO_TRACE_TOL {
            if entry.max_abs() > RECON_TOL {
                return Err(Error::InvalidState(format!(
                    "entry ({l},{a}) has negligible trace but large entries"
                )));
            }
            continue;
        }
        let ray = principal_ray(entry);
        // Purity is a precondition; verify it independently anyway.
        if entry.max_abs_diff(&ray.outer_scaled(trace)) > RECON_TOL * trace.max(1.0) {
            return Err(Error::InvalidState(format!(
                "oracle requires pure conditional states; ({l},{a}) is not rank one"
            )));
        }
        let mut best = (0usize, -1.0f64);
        let mut second = -1.0f64;
        for (idx, class) in cls.classes.iter().enumerate() {
            let fid = projector_fidelity(&ray, &class.ket)?;
            if fid > best.1 {
                second = best.1;
                best = (idx, fid);
            } else if fid > second {
                second = fid;
            }
        }
        if best.1 < 1.0 - MATCH_TOL {
            // Entry ray matches no hidden state: no model over these states.
            return Ok(LhsFeasibility::Infeasible);
        }
        if second > 1.0 - MATCH_TOL {
            return Err(Error::InvalidState(
                "oracle found two hidden states on the same ray".into(),
            ));
        }
        mass[l][best.0] += trace;
    }

    // Solve the per-class weight equations p_xi = mass[l][xi] for all l.
    let mut weights = vec![0.0f64; cls.classes.len()];
    for idx in 0..cls.classes.len() {
        let column: Vec<f64> = (0..k).map(|l| mass[l][idx]).collect();
        let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = column.iter().copied().fold(f64::INFINITY, f64::min);
        if max - min > MASS_TOL {
            // A class absent from one setting forces weight zero there while
            // another setting demands positive weight: inconsistent.
            return Ok(LhsFeasibility::Infeasible);
        }
        weights[idx] = column[0];
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > MASS_TOL * 10.0 {
        return Ok(LhsFeasibility::Infeasible);
    }

    // The model ensemble must average to Bob's marginal.
    let mut reconstructed = ComplexMatrix::zeros(asm.rho_b().rows(), asm.rho_b().cols());
    for (class, w) in cls.classes.iter().zip(&weights) {
        reconstructed = reconstructed.add(&class.ket.outer_scaled(*w));
    }
    if reconstructed.max_abs_diff(asm.rho_b()) > RECON_TOL {
        return Ok(LhsFeasibility::Infeasible);
    }
    Ok(LhsFeasibility::Feasible)
}

/// The oracle's yes/no answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhsFeasibility {
    Feasible,
    Infeasible,
}

/// Principal eigen-ray by power iteration, independent of the Jacobi path
/// used by the main pipeline.
fn principal_ray(m: &ComplexMatrix) -> Ket {
    let n = m.rows();
    let mut start = 0usize;
    let mut best = -1.0f64;
    for i in 0..n {
        let d = m.get(i, i).re;
        if d > best {
            best = d;
            start = i;
        }
    }
    let mut v = Ket::basis(n, start);
    for _ in 0..256 {
        let next = m.apply(&v);
        let norm = next.norm();
        if norm <= 1e-300 {
            return v.normalized_fixed_phase();
        }
        let scaled = next.scale(Complex::new(1.0 / norm, 0.0));
        if scaled.max_abs_diff(&v) < 1e-15 {
            v = scaled;
            break;
        }
        v = scaled;
    }
    v.normalized_fixed_phase()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemblage::Assemblage;
    use crate::matrix::Ket;
    use crate::measurements::{BasisLabel, basis_setting};
    use crate::shape::SubsystemShape;
    use crate::states::{StateSpec, builtin};
    use core::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    fn qubit_protocol(labels: &[&[BasisLabel]]) -> Protocol {
        let settings = labels
            .iter()
            .map(|per_site| {
                let dims = vec![2usize; per_site.len()];
                basis_setting(per_site, &dims).unwrap()
            })
            .collect();
        Protocol::new(settings).unwrap()
    }

    fn zx() -> Protocol {
        qubit_protocol(&[&[BasisLabel::Z], &[BasisLabel::X]])
    }

    fn zz_xx() -> Protocol {
        qubit_protocol(&[
            &[BasisLabel::Z, BasisLabel::Z],
            &[BasisLabel::X, BasisLabel::X],
        ])
    }

    fn zz_yx() -> Protocol {
        qubit_protocol(&[
            &[BasisLabel::Z, BasisLabel::Z],
            &[BasisLabel::Y, BasisLabel::X],
        ])
    }

    fn assemblage(name: &str, params: &[f64], protocol: &Protocol) -> Assemblage {
        Assemblage::from_ensemble(&builtin(name, params).unwrap(), protocol).unwrap()
    }

    #[test]
    fn premise_holds_for_pure_global_states() {
        let asm = assemblage("two_qubit_theta", &[FRAC_PI_6], &zx());
        assert!(matches!(check_premise(&asm, 1e-9).unwrap(), Premise::AllPure(_)));
    }

    #[test]
    fn premise_fails_on_werner_like_mixture() {
        let bell = builtin("two_qubit_theta", &[FRAC_PI_4]).unwrap();
        let crate::states::StateBody::Pure(bell_ket) = bell.body().clone() else {
            panic!("expected pure")
        };
        let shape = SubsystemShape::new(vec![2, 2], &[0]).unwrap();
        let mut terms = vec![(0.5, bell_ket)];
        for i in 0..4 {
            terms.push((0.125, Ket::basis(4, i)));
        }
        let spec = StateSpec::mixture(shape, terms).unwrap();
        let asm = Assemblage::from_ensemble(&spec, &zx()).unwrap();
        match check_premise(&asm, 1e-9).unwrap() {
            Premise::Violation { eigen_gap, .. } => assert!(eigen_gap > 0.01),
            Premise::AllPure(_) => panic!("expected a violation"),
        }
    }

    #[test]
    fn premise_skips_zero_outcomes_of_the_w_state() {
        let asm = assemblage("w_state", &[], &zz_xx());
        match check_premise(&asm, 1e-9).unwrap() {
            Premise::AllPure(data) => {
                assert!(data[0][3].is_none());
                assert_eq!(data.iter().flatten().filter(|s| s.is_some()).count(), 7);
            }
            _ => panic!("expected all pure"),
        }
    }

    #[test]
    fn theta_state_classifies_into_four_singletons() {
        let asm = assemblage("two_qubit_theta", &[FRAC_PI_6], &zx());
        let Premise::AllPure(data) = check_premise(&asm, 1e-9).unwrap() else { panic!() };
        let cls = classify(&asm, &data, 1e-9).unwrap();
        assert_eq!(cls.classes.len(), 4);
        assert!(cls.classes.iter().all(|c| c.members.len() == 1));
        assert!(measurement_requirement(&cls, 2));
    }

    #[test]
    fn cluster_mixture_pairs_within_settings() {
        let asm = assemblage("cluster_mix_theta", &[FRAC_PI_4], &zz_yx());
        let Premise::AllPure(data) = check_premise(&asm, 1e-9).unwrap() else { panic!() };
        let cls = classify(&asm, &data, 1e-9).unwrap();
        assert_eq!(cls.classes.len(), 4);
        let member_pairs: Vec<Vec<(usize, usize)>> = cls
            .classes
            .iter()
            .map(|c| c.members.iter().map(|m| (m.setting, m.outcome)).collect())
            .collect();
        assert_eq!(member_pairs[0], vec![(0, 0), (0, 1)]);
        assert_eq!(member_pairs[1], vec![(0, 2), (0, 3)]);
        assert_eq!(member_pairs[2], vec![(1, 0), (1, 3)]);
        assert_eq!(member_pairs[3], vec![(1, 1), (1, 2)]);
        assert!(measurement_requirement(&cls, 2));
    }

    #[test]
    fn w_state_classes_follow_the_reference_grouping() {
        let asm = assemblage("w_state", &[], &zz_xx());
        let Premise::AllPure(data) = check_premise(&asm, 1e-9).unwrap() else { panic!() };
        let cls = classify(&asm, &data, 1e-9).unwrap();
        assert_eq!(cls.classes.len(), 4);
        assert_eq!(cls.zero_outcomes, vec![(0, 3)]);
        // |1> spans zz outcome 00 and xx outcomes 01, 10.
        let ones: Vec<(usize, usize)> =
            cls.classes[0].members.iter().map(|m| (m.setting, m.outcome)).collect();
        assert_eq!(ones, vec![(0, 0), (1, 1), (1, 2)]);
        // |0> spans zz outcomes 01, 10.
        let zeros: Vec<(usize, usize)> =
            cls.classes[1].members.iter().map(|m| (m.setting, m.outcome)).collect();
        assert_eq!(zeros, vec![(0, 1), (0, 2)]);
        assert_eq!(cls.classes[2].members.len(), 1);
        assert_eq!(cls.classes[3].members.len(), 1);
        assert!(measurement_requirement(&cls, 2));
    }

    #[test]
    fn product_example_fails_the_requirement() {
        let asm = assemblage("si_product_example", &[], &zz_xx());
        let Premise::AllPure(data) = check_premise(&asm, 1e-9).unwrap() else { panic!() };
        let cls = classify(&asm, &data, 1e-9).unwrap();
        assert_eq!(cls.classes.len(), 1);
        assert!(!measurement_requirement(&cls, 2));
    }

    #[test]
    fn product_example_reduces_to_the_trivial_model() {
        let asm = assemblage("si_product_example", &[], &zz_xx());
        let Premise::AllPure(data) = check_premise(&asm, 1e-9).unwrap() else { panic!() };
        let cls = classify(&asm, &data, 1e-9).unwrap();
        match lhs_reduce(&asm, &cls, 1e-9) {
            LhsOutcome::Feasible(model) => {
                assert_eq!(model.weights.len(), 1);
                assert!((model.weights[0] - 1.0).abs() < 1e-12);
                for outcome_row in &model.responses[0] {
                    assert!((outcome_row[0] - 0.25).abs() < 1e-12);
                }
                assert!((model.responses[1][0][0] - 1.0).abs() < 1e-12);
                for a in 1..4 {
                    assert!(model.responses[1][a][0].abs() < 1e-12);
                }
                assert!(model.rho_b_residual < 1e-10);
            }
            LhsOutcome::Infeasible(_) => panic!("expected feasible"),
        }
    }

    #[test]
    fn theta_state_reduction_is_infeasible_with_unit_classical_trace() {
        let asm = assemblage("two_qubit_theta", &[FRAC_PI_6], &zx());
        let Premise::AllPure(data) = check_premise(&asm, 1e-9).unwrap() else { panic!() };
        let cls = classify(&asm, &data, 1e-9).unwrap();
        match lhs_reduce(&asm, &cls, 1e-9) {
            LhsOutcome::Infeasible(cert) => {
                assert!((cert.quantum_trace - 2.0).abs() < 1e-9);
                assert!((cert.classical_trace - 1.0).abs() < 1e-10);
                assert!(cert.shared_classes.is_empty());
            }
            LhsOutcome::Feasible(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn psi_prime_reduction_certificate_carries_two_thirds() {
        let asm = assemblage("psi_prime", &[], &zz_xx());
        let Premise::AllPure(data) = check_premise(&asm, 1e-9).unwrap() else { panic!() };
        let cls = classify(&asm, &data, 1e-9).unwrap();
        match lhs_reduce(&asm, &cls, 1e-9) {
            LhsOutcome::Infeasible(cert) => {
                assert!((cert.classical_trace - (1.0 + 2.0 / 3.0)).abs() < 1e-10);
                assert_eq!(cert.shared_classes.len(), 2);
                for shared in &cert.shared_classes {
                    assert_eq!(shared.multiplicity, 2);
                    assert!((shared.canonical_weight - 1.0 / 3.0).abs() < 1e-10);
                }
            }
            LhsOutcome::Feasible(_) => panic!("expected infeasible"),
        }
    }

    #[test]
    fn analyze_reproduces_the_five_reference_verdicts() {
        let report = analyze(&builtin("two_qubit_theta", &[FRAC_PI_3]).unwrap(), &zx(), 1e-9)
            .unwrap();
        assert_eq!(report.verdict, Verdict::Paradox);
        assert_eq!(report.case_label, CaseLabel::Case1);
        assert!(report.delta_k.unwrap().abs() < 1e-10);
        assert_eq!(report.paradox_string, "2_Q = 1_C");

        let report = analyze(&builtin("cluster_mix_theta", &[PI / 5.0]).unwrap(), &zz_yx(), 1e-9)
            .unwrap();
        assert_eq!(report.verdict, Verdict::Paradox);
        assert_eq!(report.case_label, CaseLabel::Case2);
        assert!(report.delta_k.unwrap().abs() < 1e-10);

        let report = analyze(&builtin("psi_prime", &[]).unwrap(), &zz_xx(), 1e-9).unwrap();
        assert_eq!(report.verdict, Verdict::Paradox);
        assert_eq!(report.case_label, CaseLabel::Case3);
        assert!((report.delta_k.unwrap() - 2.0 / 3.0).abs() < 1e-10);
        assert_eq!(report.paradox_string, "2_Q = (5/3)_C");

        let report = analyze(&builtin("w_state", &[]).unwrap(), &zz_xx(), 1e-9).unwrap();
        assert_eq!(report.verdict, Verdict::Paradox);
        assert_eq!(report.case_label, CaseLabel::Case4);
        assert!((report.delta_k.unwrap() - 1.0 / 3.0).abs() < 1e-10);
        assert_eq!(report.paradox_string, "2_Q = (4/3)_C");

        let report = analyze(&builtin("si_product_example", &[]).unwrap(), &zz_xx(), 1e-9)
            .unwrap();
        assert_eq!(report.verdict, Verdict::NoContradiction);
        assert!((report.delta_k.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(report.paradox_string, "2_Q = 2_C");
    }

    #[test]
    fn w_state_weight_table_exposes_the_branch_disagreement() {
        let report = analyze(&builtin("w_state", &[]).unwrap(), &zz_xx(), 1e-9).unwrap();
        let Some(LhsOutcome::Infeasible(cert)) = &report.lhs else { panic!("expected certificate") };
        let shared = &cert.weight_table[0];
        assert!((shared[&0] - 1.0 / 3.0).abs() < 1e-10);
        assert!((shared[&1] - 1.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn oracle_agrees_on_the_reference_cases() {
        for (name, params, protocol, expected) in [
            ("si_product_example", &[][..], zz_xx(), LhsFeasibility::Feasible),
            ("psi_prime", &[][..], zz_xx(), LhsFeasibility::Infeasible),
            ("w_state", &[][..], zz_xx(), LhsFeasibility::Infeasible),
        ] {
            let asm = assemblage(name, params, &protocol);
            let Premise::AllPure(data) = check_premise(&asm, 1e-9).unwrap() else { panic!() };
            let cls = classify(&asm, &data, 1e-9).unwrap();
            assert_eq!(brute_force_lhs_oracle(&asm, &cls).unwrap(), expected, "{name}");
        }
    }

    #[test]
    fn ambiguous_ray_pairs_are_rejected_with_advice() {
        // Two settings whose conditional rays differ by a small angle that
        // lands inside the (1 - 10 tol, 1 - tol) band.
        let tol = 1e-4;
        let eps = 0.02f64; // fidelity gap ~ 4e-4 inside the band for tol 1e-4
        let spec = builtin("two_qubit_theta", &[FRAC_PI_4]).unwrap();
        let tilted = crate::measurements::explicit_setting(vec![
            Ket::from_real(&[eps.cos(), eps.sin()]).projector(),
            Ket::from_real(&[-eps.sin(), eps.cos()]).projector(),
        ])
        .unwrap();
        let z = basis_setting(&[BasisLabel::Z], &[2]).unwrap();
        let protocol = Protocol::new(vec![z, tilted]).unwrap();
        let asm = Assemblage::from_ensemble(&spec, &protocol).unwrap();
        let Premise::AllPure(data) = check_premise(&asm, tol).unwrap() else { panic!() };
        match classify(&asm, &data, tol) {
            Err(Error::ToleranceAmbiguity { fidelity, .. }) => {
                assert!(fidelity > 1.0 - 10.0 * tol && fidelity < 1.0 - tol);
            }
            other => panic!("expected ambiguity error, got {other:?}"),
        }
    }

    #[test]
    fn fraction_rendering_covers_the_reference_strings() {
        assert_eq!(format_paradox_string(2, 0.0), "2_Q = 1_C");
        assert_eq!(format_paradox_string(2, 1.0), "2_Q = 2_C");
        assert_eq!(format_paradox_string(2, 1.0 / 3.0), "2_Q = (4/3)_C");
        assert_eq!(format_paradox_string(3, 2.0), "3_Q = 3_C");
        assert_eq!(format_paradox_string(2, 0.123456789), "2_Q = (1+0.123456789)_C");
    }
}
