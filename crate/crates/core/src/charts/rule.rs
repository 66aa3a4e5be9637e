//! The coefficient of `y_v` in `x₋ ⊗ y_{w′}`, by path combinatorics.

use crate::basis::YBasis;
use crate::exactalg::{scalar, BasisTag, Scalar, TensorVector};
use crate::report::CheckReport;
use crate::words::{enumerate_words, flip_set, path_profile, weight, Letter, Word, WordFilter};
use crate::{Error, Result};

fn check_rule_input(v: &Word, w: &Word) -> Result<()> {
    if v.len() != w.len() {
        return Err(Error::LengthMismatch { expected: w.len(), found: v.len() });
    }
    if w.first() != Some(Letter::Minus) {
        return Err(Error::Contract(format!("w = {w} must start with -")));
    }
    if weight(v) != weight(w) {
        return Err(Error::Contract(format!("{v} and {w} have different weights")));
    }
    Ok(())
}

/// Whether the last letter of `u` is significant in `u`.
fn last_letter_significant(u: &Word) -> bool {
    !u.is_empty() && crate::words::significant_set(u).last() == Some(&u.len())
}

/// First index `m ≥ 2` where the paths of `v` and `w` meet again.
pub fn rejoin_point(v: &Word, w: &Word) -> usize {
    let (dv, dw) = (path_profile(v).d, path_profile(w).d);
    (2..=v.len()).find(|&j| dv[j] == dw[j]).unwrap_or(v.len())
}

/// For `(v(1), w(1)) = (+, −)`, equal weights and `v` strictly above `w`
/// on `1..n−1`: whether `v` stays parallel to `w` at distance two and the
/// last letter of `w′` is significant.
pub fn inclusion_predicate(v: &Word, w: &Word) -> Result<bool> {
    let n = v.len();
    if w.len() != n || n < 2 {
        return Err(Error::Contract(format!("({v}, {w}) must have equal length at least 2")));
    }
    if (v.at(1), w.at(1)) != (Letter::Plus, Letter::Minus) || weight(v) != weight(w) {
        return Err(Error::Contract(format!("({v}, {w}) must start with (+, -) and have equal weights")));
    }
    if rejoin_point(v, w) != n {
        return Err(Error::Contract(format!("{v} meets {w} before the end")));
    }
    let parallel = (2..n).all(|j| v.at(j) == w.at(j));
    Ok(parallel && last_letter_significant(&w.tail()))
}

/// The coefficient of `y_v` in the `y`-expansion of `x₋ ⊗ y_{w′}`, where
/// `w = −w′`, computed from the paths of `v` and `w`.
pub fn coefficient_rule(v: &Word, w: &Word) -> Result<Scalar> {
    check_rule_input(v, w)?;
    if v == w {
        return Ok(scalar(1));
    }
    if v.at(1) == Letter::Minus {
        return Ok(scalar(0));
    }
    let n = v.len();
    let m = rejoin_point(v, w);
    if v.slice(m..n) != w.slice(m..n) {
        return Ok(scalar(0));
    }
    let included = inclusion_predicate(&v.slice(0..m), &w.slice(0..m))?;
    Ok(scalar(included as i64))
}

/// The same coefficient as a flip condition: 1 iff `v` arises from `w` by
/// turning its first letter into `+` and one significant `+` of `w′` into `−`.
pub fn coefficient_by_flips(v: &Word, w: &Word) -> Result<Scalar> {
    check_rule_input(v, w)?;
    if v == w {
        return Ok(scalar(1));
    }
    let hit = v.at(1) == Letter::Plus && flip_set(&w.tail()).iter().any(|u| *u == v.tail());
    Ok(scalar(hit as i64))
}

/// Brute-force coefficient from the basis transition.
pub fn oracle_coefficients(basis: &YBasis, w: &Word) -> Result<TensorVector> {
    let x_minus = TensorVector::unit(Word::from_letters([Letter::Minus]), BasisTag::X);
    let prod = x_minus.tensor(&basis.y_in_x(&w.tail()))?;
    basis.expand_in_y(&prod)
}

/// Compares both rules with the oracle for every `w` of length `n` with
/// `w(1) = −` and every `v` of the same weight; all coefficients are 0 or 1.
pub fn check_coefficient_rule(n: usize) -> Result<CheckReport> {
    let basis = YBasis::shared();
    let mut report = CheckReport::new(format!("coefficient rule vs basis oracle, n={n}"));
    if n == 0 {
        return Ok(report);
    }
    let all = enumerate_words(n, WordFilter::All)?;
    for w in enumerate_words(n, WordFilter::FirstLetter(Letter::Minus))? {
        let oracle = oracle_coefficients(basis, &w)?;
        for v in all.iter().filter(|v| weight(v) == weight(&w)) {
            let expected = oracle.coeff(v);
            let rule = coefficient_rule(v, &w)?;
            let flips = coefficient_by_flips(v, &w)?;
            let binary = rule == scalar(0) || rule == scalar(1);
            report.record(rule == expected && flips == expected && binary, || {
                format!("v={v}, w={w}: rule {rule}, flips {flips}, oracle {expected}")
            });
        }
        let stray = oracle.support().find(|v| weight(v) != weight(&w)).cloned();
        report.record(stray.is_none(), || format!("w={w}: oracle has term {stray:?} of another weight"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(coefficient_rule(&w("-+"), &w("-+")).unwrap(), scalar(1));
        assert_eq!(coefficient_rule(&w("+-"), &w("-+")).unwrap(), scalar(1));
        assert_eq!(coefficient_rule(&w("++--"), &w("-+-+")).unwrap(), scalar(0));
        assert_eq!(coefficient_rule(&w("--++"), &w("-+-+")).unwrap(), scalar(0));
        assert!(coefficient_rule(&w("+-"), &w("+-")).is_err());
        assert!(coefficient_rule(&w("++"), &w("-+")).is_err());
    }

    #[test]
    fn inclusion_examples() {
        assert!(inclusion_predicate(&w("+-"), &w("-+")).unwrap());
        assert!(inclusion_predicate(&w("++-+-"), &w("-+-++")).unwrap());
        // Parallel, but the last letter of w′ = "+-+-+" is matched.
        assert!(!inclusion_predicate(&w("++-+--"), &w("-+-+-+")).unwrap());
        // Interior (+, −) step.
        assert!(!inclusion_predicate(&w("++--"), &w("--++")).unwrap());
        assert!(inclusion_predicate(&w("+-+-"), &w("-+-+")).is_err());
    }

    #[test]
    fn rule_matches_oracle_small() {
        for n in 1..=7 {
            let r = check_coefficient_rule(n).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}
