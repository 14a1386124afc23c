//! Randomized check that the reduction is exactly gated by the measurement
//! requirement on pure-conditional assemblages, with the brute-force oracle
//! agreeing throughout.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steerage_core::assemblage::Assemblage;
use steerage_core::matrix::{Ket, C64};
use steerage_core::measurements::{explicit_setting, Protocol, ProjectorSet};
use steerage_core::paradox::{
    analyze_assemblage, brute_force_lhs_oracle, check_premise, classify, lhs_reduce,
    measurement_requirement, LhsFeasibility, LhsOutcome, Premise, Verdict,
};
use steerage_core::states::{StateBody, StateSpec};
use steerage_core::SubsystemShape;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_unit_ket(rng: &mut ChaCha8Rng, dim: usize) -> Ket {
    loop {
        let ket = Ket::new(
            (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        );
        let norm = ket.norm();
        if norm > 1e-2 {
            return ket.scale(c(1.0 / norm, 0.0));
        }
    }
}

fn random_basis(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Ket> {
    loop {
        let mut basis: Vec<Ket> = Vec::with_capacity(dim);
        'outer: for _ in 0..dim {
            for _attempt in 0..8 {
                let mut v = random_unit_ket(rng, dim);
                for b in &basis {
                    let overlap = b.inner(&v).unwrap();
                    v = v.add(&b.scale(-overlap));
                }
                let norm = v.norm();
                if norm > 1e-3 {
                    basis.push(v.scale(c(1.0 / norm, 0.0)));
                    continue 'outer;
                }
            }
            break;
        }
        if basis.len() == dim {
            return basis;
        }
    }
}

fn random_setting(rng: &mut ChaCha8Rng, dim: usize) -> ProjectorSet {
    explicit_setting(random_basis(rng, dim).iter().map(Ket::projector).collect()).unwrap()
}

fn permuted_setting(rng: &mut ChaCha8Rng, basis: &[Ket]) -> ProjectorSet {
    let mut order: Vec<usize> = (0..basis.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    explicit_setting(order.iter().map(|&i| basis[i].projector()).collect()).unwrap()
}

/// One AllPure instance drawn from the mixed construction strategies.
fn random_instance(rng: &mut ChaCha8Rng) -> (StateSpec, Protocol) {
    let strategies = rng.gen_range(0..4u8);
    match strategies {
        // Entangled pure global state, arbitrary settings.
        0 => {
            let (dims, alice): (Vec<usize>, Vec<usize>) = match rng.gen_range(0..3u8) {
                0 => (vec![2, 2], vec![0]),
                1 => (vec![2, 3], vec![0]),
                _ => (vec![2, 2, 2], vec![0, 1]),
            };
            let shape = SubsystemShape::new(dims, &alice).unwrap();
            let k = if rng.gen_bool(0.3) { 3 } else { 2 };
            let settings = (0..k).map(|_| random_setting(rng, shape.alice_dim())).collect();
            let spec = StateSpec::pure(shape.clone(), random_unit_ket(rng, shape.total_dim()))
                .unwrap();
            (spec, Protocol::new(settings).unwrap())
        }
        // Product state: Bob's marginal is pure, every conditional is it.
        1 => {
            let shape = SubsystemShape::new(vec![2, 2], &[0]).unwrap();
            let ket = random_unit_ket(rng, 2).tensor(&random_unit_ket(rng, 2));
            let spec = StateSpec::pure(shape, ket).unwrap();
            let settings = (0..2).map(|_| random_setting(rng, 2)).collect();
            (spec, Protocol::new(settings).unwrap())
        }
        // Mixture diagonal in a fixed Alice basis with fixed Bob rays,
        // measured in outcome-permuted copies of that basis: feasible.
        2 => {
            let shape = SubsystemShape::new(vec![2, 2], &[0]).unwrap();
            let alice_basis = random_basis(rng, 2);
            let bob_rays: Vec<Ket> = if rng.gen_bool(0.5) {
                let shared = random_unit_ket(rng, 2);
                vec![shared.clone(), shared]
            } else {
                (0..2).map(|_| random_unit_ket(rng, 2)).collect()
            };
            let terms: Vec<(f64, Ket)> = {
                let raw: Vec<f64> = (0..2).map(|_| rng.gen_range(0.1..1.0)).collect();
                let total: f64 = raw.iter().sum();
                raw.into_iter()
                    .map(|p| {
                        let coeffs: Vec<f64> =
                            (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
                        let norm: f64 =
                            coeffs.iter().map(|s| s * s).sum::<f64>().sqrt().max(1e-3);
                        let mut ket = alice_basis[0]
                            .tensor(&bob_rays[0])
                            .scale(c(coeffs[0] / norm, 0.0));
                        ket = ket.add(
                            &alice_basis[1]
                                .tensor(&bob_rays[1])
                                .scale(c(coeffs[1] / norm, 0.0)),
                        );
                        (p / total, ket)
                    })
                    .collect()
            };
            let spec = StateSpec::mixture(shape, terms).unwrap();
            let settings =
                (0..2).map(|_| permuted_setting(rng, &alice_basis)).collect();
            (spec, Protocol::new(settings).unwrap())
        }
        // Same diagonal construction but one genuinely different setting.
        _ => {
            let shape = SubsystemShape::new(vec![2, 2], &[0]).unwrap();
            let alice_basis = random_basis(rng, 2);
            let ket = {
                let a = rng.gen_range(0.2..0.9f64);
                let b = (1.0 - a * a).sqrt();
                alice_basis[0]
                    .tensor(&random_unit_ket(rng, 2))
                    .scale(c(a, 0.0))
                    .add(&alice_basis[1].tensor(&random_unit_ket(rng, 2)).scale(c(b, 0.0)))
            };
            let spec = StateSpec::pure(shape, ket).unwrap();
            let protocol = Protocol::new(vec![
                permuted_setting(rng, &alice_basis),
                random_setting(rng, 2),
            ])
            .unwrap();
            (spec, protocol)
        }
    }
}

#[test]
fn reduction_is_equivalent_to_the_measurement_requirement() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut feasible_seen = 0usize;
    let mut infeasible_seen = 0usize;
    for round in 0..300 {
        let (spec, protocol) = random_instance(&mut rng);
        let asm = Assemblage::from_ensemble(&spec, &protocol).unwrap();
        let Premise::AllPure(data) = check_premise(&asm, 1e-9).unwrap() else {
            panic!("round {round}: construction should keep conditionals pure");
        };
        let cls = classify(&asm, &data, 1e-9).unwrap();
        let requirement = measurement_requirement(&cls, protocol.setting_count());
        let outcome = lhs_reduce(&asm, &cls, 1e-9);
        match &outcome {
            LhsOutcome::Feasible(model) => {
                feasible_seen += 1;
                assert!(!requirement, "round {round}: feasible but requirement held");
                assert!(model.rho_b_residual < 1e-8);
                let total: f64 = model.weights.iter().sum();
                assert!((total - 1.0).abs() < 1e-8);
            }
            LhsOutcome::Infeasible(cert) => {
                infeasible_seen += 1;
                assert!(requirement, "round {round}: infeasible but requirement failed");
                let k = protocol.setting_count() as f64;
                assert!((cert.quantum_trace - k).abs() < 1e-9);
                assert!(cert.classical_trace < k - 1e-12);
                assert!(cert.classical_trace >= 1.0 - 1e-12);
            }
        }
        let oracle = brute_force_lhs_oracle(&asm, &cls).unwrap();
        let agree = matches!(
            (&outcome, oracle),
            (LhsOutcome::Feasible(_), LhsFeasibility::Feasible)
                | (LhsOutcome::Infeasible(_), LhsFeasibility::Infeasible)
        );
        assert!(agree, "round {round}: oracle disagrees with the reduction");
    }
    // The strategy mix must exercise both branches.
    assert!(feasible_seen > 30, "only {feasible_seen} feasible instances");
    assert!(infeasible_seen > 30, "only {infeasible_seen} infeasible instances");
}

#[test]
fn verdicts_are_invariant_under_setting_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed_beef);
    for _ in 0..60 {
        let (spec, protocol) = random_instance(&mut rng);
        let report = steerage_core::paradox::analyze(&spec, &protocol, 1e-9).unwrap();
        let reversed = Protocol::new(protocol.settings().iter().rev().cloned().collect()).unwrap();
        let report_rev = steerage_core::paradox::analyze(&spec, &reversed, 1e-9).unwrap();
        assert_eq!(report.verdict, report_rev.verdict);
        // Per-setting weight tables expose the same data under relabeling.
        if let (Some(a), Some(b)) = (&report.classification, &report_rev.classification) {
            assert_eq!(a.classes.len(), b.classes.len());
        }
    }
}

#[test]
fn certificates_close_their_own_arithmetic() {
    use steerage_core::paradox::CaseLabel;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd_ba11);
    let mut certificates = 0usize;
    for _ in 0..200 {
        let (spec, protocol) = random_instance(&mut rng);
        let report = steerage_core::paradox::analyze(&spec, &protocol, 1e-9).unwrap();
        let Some(LhsOutcome::Infeasible(cert)) = &report.lhs else { continue };
        certificates += 1;
        let k = report.k as f64;
        assert!((cert.quantum_trace - k).abs() < 1e-9);

        // Recompute the classical trace from the exposed weight table: one
        // canonical weight per class, counted once, plus the duplicated mass.
        let recomputed: f64 = 1.0
            + cert
                .weight_table
                .iter()
                .map(|row| {
                    let canonical = row.values().next().copied().unwrap_or(0.0);
                    (row.len() as f64 - 1.0) * canonical
                })
                .sum::<f64>();
        assert!((recomputed - cert.classical_trace).abs() < 1e-10);
        assert!((cert.classical_trace - (1.0 + report.delta_k.unwrap())).abs() < 1e-10);

        // Two-setting shared-class cases sit strictly inside (0, 1).
        if report.k == 2
            && matches!(report.case_label, CaseLabel::Case3 | CaseLabel::Case4)
        {
            let delta = report.delta_k.unwrap();
            assert!(delta > 0.0 && delta < 1.0, "delta = {delta}");
        }
    }
    assert!(certificates > 50, "only {certificates} certificates seen");
}

#[test]
fn verdicts_are_invariant_under_outcome_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xabad_1dea);
    for _ in 0..60 {
        let (spec, protocol) = random_instance(&mut rng);
        let report = steerage_core::paradox::analyze(&spec, &protocol, 1e-9).unwrap();

        let mut settings: Vec<ProjectorSet> = protocol.settings().to_vec();
        let swapped = {
            let first = &settings[0];
            let mut projectors: Vec<_> = first.projectors().to_vec();
            projectors.reverse();
            explicit_setting(projectors).unwrap()
        };
        settings[0] = swapped;
        let permuted = Protocol::new(settings).unwrap();
        let report_perm = steerage_core::paradox::analyze(&spec, &permuted, 1e-9).unwrap();

        assert_eq!(report.verdict, report_perm.verdict);
        assert_eq!(report.case_label, report_perm.case_label);
        match (report.delta_k, report_perm.delta_k) {
            (Some(a), Some(b)) => assert!((a - b).abs() < 1e-9),
            (None, None) => {}
            _ => panic!("delta presence changed under outcome relabeling"),
        }
    }
}

#[test]
fn every_entangled_theta_state_yields_the_zero_gap_paradox() {
    use core::f64::consts::PI;
    for theta in [PI / 8.0, PI / 6.0, PI / 4.0, PI / 3.0, 3.0 * PI / 8.0] {
        let spec = steerage_core::states::builtin("two_qubit_theta", &[theta]).unwrap();
        let StateBody::Pure(_) = spec.body() else { panic!() };
        let protocol = Protocol::new(vec![
            steerage_core::measurements::basis_setting(
                &[steerage_core::measurements::BasisLabel::Z],
                &[2],
            )
            .unwrap(),
            steerage_core::measurements::basis_setting(
                &[steerage_core::measurements::BasisLabel::X],
                &[2],
            )
            .unwrap(),
        ])
        .unwrap();
        let asm = Assemblage::from_ensemble(&spec, &protocol).unwrap();
        let report = analyze_assemblage(&asm, 1e-9).unwrap();
        assert_eq!(report.verdict, Verdict::Paradox);
        assert!(report.delta_k.unwrap().abs() < 1e-10, "theta = {theta}");
    }
}
