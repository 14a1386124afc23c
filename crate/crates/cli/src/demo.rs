//! The five bundled reference cases with their standard protocols and
//! partitions, checked against their expected verdicts.

use std::f64::consts::PI;

use steerage_core::paradox::{analyze, CaseLabel, ParadoxReport, Verdict};
use steerage_core::states::builtin;

use crate::formats::{parse_protocol_shorthand, FormatError};

pub struct DemoCase {
    pub name: &'static str,
    pub builtin: &'static str,
    pub params: &'static [f64],
    pub protocol: &'static str,
    pub expected_verdict: Verdict,
    pub expected_delta: Option<f64>,
    pub expected_case: CaseLabel,
}

const THETA_EX1: f64 = PI / 3.0;
const THETA_EX2: f64 = PI / 5.0;

pub const DEMOS: [DemoCase; 5] = [
    DemoCase {
        name: "example1",
        builtin: "two_qubit_theta",
        params: &[THETA_EX1],
        protocol: "z,x",
        expected_verdict: Verdict::Paradox,
        expected_delta: Some(0.0),
        expected_case: CaseLabel::Case1,
    },
    DemoCase {
        name: "example2",
        builtin: "cluster_mix_theta",
        params: &[THETA_EX2],
        protocol: "zz,yx",
        expected_verdict: Verdict::Paradox,
        expected_delta: Some(0.0),
        expected_case: CaseLabel::Case2,
    },
    DemoCase {
        name: "example3",
        builtin: "psi_prime",
        params: &[],
        protocol: "zz,xx",
        expected_verdict: Verdict::Paradox,
        expected_delta: Some(2.0 / 3.0),
        expected_case: CaseLabel::Case3,
    },
    DemoCase {
        name: "example4",
        builtin: "w_state",
        params: &[],
        protocol: "zz,xx",
        expected_verdict: Verdict::Paradox,
        expected_delta: Some(1.0 / 3.0),
        expected_case: CaseLabel::Case4,
    },
    DemoCase {
        name: "example5",
        builtin: "si_product_example",
        params: &[],
        protocol: "zz,xx",
        expected_verdict: Verdict::NoContradiction,
        expected_delta: Some(1.0),
        expected_case: CaseLabel::Case4,
    },
];

pub struct DemoOutcome {
    pub name: &'static str,
    pub report: ParadoxReport,
    pub matches: bool,
    pub summary: String,
}

pub fn run_demo(case: &DemoCase, tol: f64) -> Result<DemoOutcome, FormatError> {
    let spec = builtin(case.builtin, case.params)?;
    let protocol = parse_protocol_shorthand(case.protocol, &spec.shape().alice_dims())?;
    let report = analyze(&spec, &protocol, tol)?;

    let verdict_ok = report.verdict == case.expected_verdict;
    let delta_ok = match (report.delta_k, case.expected_delta) {
        (Some(got), Some(want)) => (got - want).abs() < 1e-10,
        (None, None) => true,
        _ => false,
    };
    let case_ok = report.case_label == case.expected_case;
    let matches = verdict_ok && delta_ok && case_ok;

    fn fmt_delta(delta: Option<f64>) -> String {
        delta.map(|d| format!("{d:.10}")).unwrap_or_else(|| "n/a".to_string())
    }
    let summary = format!(
        "{name}: expected {want_verdict:?} delta={want_delta} {want_case:?}; \
         computed {verdict:?} delta={delta} {case:?} ({statement}) ... {status}",
        name = case.name,
        want_verdict = case.expected_verdict,
        want_delta = fmt_delta(case.expected_delta),
        want_case = case.expected_case,
        verdict = report.verdict,
        delta = fmt_delta(report.delta_k),
        case = report.case_label,
        statement = report.paradox_string,
        status = if matches { "ok" } else { "MISMATCH" },
    );
    Ok(DemoOutcome { name: case.name, report, matches, summary })
}

pub fn find_demo(name: &str) -> Option<&'static DemoCase> {
    DEMOS.iter().find(|d| d.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reference_cases_match() {
        for case in &DEMOS {
            let outcome = run_demo(case, 1e-9).unwrap();
            assert!(outcome.matches, "{}", outcome.summary);
        }
    }

    #[test]
    fn example_lookup_is_by_name() {
        assert!(find_demo("example3").is_some());
        assert!(find_demo("example9").is_none());
    }
}
