//! Chart computations behind the basis theorem.
//!
//! * [`transition`]: the transition map between the charts of `v` and `w`,
//!   with its determinant-one matrices.
//! * [`tilde`]: the truncated recursion for pairs whose paths stay parallel
//!   at distance two, with the graded and `𝔭`-adic congruences it obeys.
//! * [`rule`]: the resulting coefficient rule, checked against the basis.

pub mod rule;
pub mod tilde;
pub mod transition;

use serde::Serialize;

pub use rule::{check_coefficient_rule, coefficient_by_flips, coefficient_rule, inclusion_predicate, rejoin_point};
pub use tilde::{check_parallel_case, tilde_sequence, ParallelCase, TildeSequence, TildeState};
pub use transition::{check_transition, transition_sequence, ChartVars, TransitionState, XMode};

use crate::exactalg::format_scalar;
use crate::report::{CheckReport, Status};
use crate::words::{weight, Letter, Word};
use crate::Result;

/// What the `charts` report runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartsMode {
    Transition,
    Tilde,
    Verify,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl From<&CheckReport> for CheckJson {
    fn from(r: &CheckReport) -> CheckJson {
        let mut detail = r.detail.clone();
        if detail.is_empty() {
            detail = format!("{} checked", r.checked);
        }
        for c in &r.counterexamples {
            detail.push_str("; ");
            detail.push_str(c);
        }
        CheckJson { name: r.name.clone(), status: r.status, detail }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedPoly {
    pub name: String,
    pub value: String,
}

/// `{pair, checks: [{name, status, detail}]}`, with polynomial text when requested.
#[derive(Debug, Clone, Serialize)]
pub struct ChartsReport {
    pub pair: [Word; 2],
    pub checks: Vec<CheckJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polys: Option<Vec<NamedPoly>>,
}

impl ChartsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

fn named(name: String, value: impl ToString) -> NamedPoly {
    NamedPoly { name, value: value.to_string() }
}

/// Builds the report for one pair. Substitution and elimination checks are
/// run for `n ≤ 5` only.
pub fn charts_report(v: &Word, w: &Word, mode: ChartsMode, print_poly: bool) -> Result<ChartsReport> {
    let mut checks: Vec<CheckReport> = Vec::new();
    let mut polys = Vec::new();
    if matches!(mode, ChartsMode::Transition | ChartsMode::Verify) {
        checks.push(check_transition(v, w, XMode::Generic)?);
        if print_poly {
            for st in transition_sequence(v, w, XMode::Generic)? {
                polys.push(named(format!("b{}", st.ell), &st.b));
            }
        }
    }
    if matches!(mode, ChartsMode::Tilde | ChartsMode::Verify) {
        match ParallelCase::new(v, w) {
            Ok(case) => {
                checks.extend(check_parallel_case(&case, v.len() <= 5)?);
                if print_poly {
                    let seq = tilde_sequence(&case)?;
                    for st in &seq.states {
                        polys.push(named(format!("P~{}", st.ell), &st.p));
                        polys.push(named(format!("Q~{}", st.ell), &st.q));
                        if let Some(c) = &st.c {
                            polys.push(named(format!("c~{}", st.ell), c));
                        }
                    }
                    polys.push(named(format!("c~{}", v.len()), &seq.c_n));
                }
            }
            Err(e) if mode == ChartsMode::Tilde => return Err(e),
            Err(_) => {}
        }
    }
    if mode == ChartsMode::Verify && w.first() == Some(Letter::Minus) && weight(v) == weight(w) {
        let rule = coefficient_rule(v, w)?;
        let oracle = rule::oracle_coefficients(crate::basis::YBasis::shared(), w)?.coeff(v);
        let mut r = CheckReport::new(format!("coefficient rule ({v}, {w})"));
        r.record(rule == oracle, || format!("rule {} vs oracle {}", format_scalar(&rule), format_scalar(&oracle)));
        checks.push(r.with_detail(format!("coefficient {}", format_scalar(&rule))));
    }
    Ok(ChartsReport {
        pair: [v.clone(), w.clone()],
        checks: checks.iter().map(CheckJson::from).collect(),
        polys: print_poly.then_some(polys),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_layout() {
        let v: Word = "+-".parse().unwrap();
        let w: Word = "-+".parse().unwrap();
        let r = charts_report(&v, &w, ChartsMode::Verify, true).unwrap();
        assert!(r.passed());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["pair"], serde_json::json!(["+-", "-+"]));
        assert_eq!(json["checks"][0]["status"], "pass");
        let polys = json["polys"].as_array().unwrap();
        assert_eq!(polys[0]["value"], "1/a1");
        assert_eq!(polys[1]["value"], "x1*a1 - x2*a1 - a1^2*a2");
        assert!(polys.iter().any(|p| p["name"] == "c~2" && p["value"] == "-x + a1*a2"));
    }

    #[test]
    fn tilde_mode_rejects_non_parallel_pairs() {
        let v: Word = "++".parse().unwrap();
        assert!(charts_report(&v, &v, ChartsMode::Tilde, false).is_err());
        assert!(charts_report(&v, &v, ChartsMode::Transition, false).unwrap().polys.is_none());
    }
}
