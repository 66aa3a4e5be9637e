//! Invariant suites shared by the CLI `verify` command and the acceptance
//! tests. Items fan out over a rayon pool; results are collected in input
//! order, so reports do not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::YBasis;
use crate::charts::{self, check_transition, ParallelCase, XMode};
use crate::exactalg::BasisTag;
use crate::rep::{self, Shape};
use crate::report::{CheckReport, Status};
use crate::words::{
    crystal, enumerate_words, factorize, flip_set, is_semistable, path_profile, weight, Letter, Word, WordFilter,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Words,
    Basis,
    Rep,
    Charts,
    Theorem,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Words, Suite::Basis, Suite::Rep, Suite::Charts, Suite::Theorem];
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "words" => Ok(Suite::Words),
            "basis" => Ok(Suite::Basis),
            "rep" => Ok(Suite::Rep),
            "charts" => Ok(Suite::Charts),
            "theorem" => Ok(Suite::Theorem),
            _ => Err(Error::Parse(format!("unknown suite {s:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Words => "words",
            Suite::Basis => "basis",
            Suite::Rep => "rep",
            Suite::Charts => "charts",
            Suite::Theorem => "theorem",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub n_max: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n_max: usize,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Runs one suite for every length up to `n_max`.
pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Result<SuiteReport> {
    let run = || -> Result<Vec<CheckReport>> {
        match suite {
            Suite::Words => words_suite(opts.n_max),
            Suite::Basis => basis_suite(opts.n_max),
            Suite::Rep => rep_suite(opts.n_max),
            Suite::Charts => charts_suite(opts.n_max, opts.seed),
            Suite::Theorem => theorem_suite(opts.n_max),
        }
    };
    let checks = match opts.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Contract(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let status = if checks.iter().all(CheckReport::passed) { Status::Pass } else { Status::Fail };
    Ok(SuiteReport { suite, n_max: opts.n_max, seed: opts.seed, status, checks })
}

fn collect<T, F>(items: Vec<T>, f: F) -> Result<Vec<CheckReport>>
where
    T: Send + Sync,
    F: Fn(&T) -> Result<CheckReport> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn merged(name: String, parts: Vec<CheckReport>) -> CheckReport {
    let mut r = CheckReport::new(name);
    let mut all_skipped = !parts.is_empty();
    for p in parts {
        all_skipped &= p.status == Status::Skipped;
        r.absorb(p);
    }
    if all_skipped {
        r.status = Status::Skipped;
    }
    r
}

/// Factorization, significance, flip-set and crystal invariants of all
/// words of length `n`.
pub fn check_words(n: usize) -> Result<CheckReport> {
    let mut r = CheckReport::new(format!("word combinatorics, n={n}"));
    for w in enumerate_words(n, WordFilter::All)? {
        let f = factorize(&w);
        r.record(f.reconcatenate() == w, || format!("{w}: factorization does not reassemble"));
        r.record(f.semistable_blocks().all(is_semistable), || format!("{w}: non-semistable block"));
        let letters: Vec<Letter> = f.significant_letters().collect();
        let sorted = letters.windows(2).all(|p| !(p[0] == Letter::Minus && p[1] == Letter::Plus));
        r.record(sorted && weight(&w) == f.r as i64 - f.s as i64, || format!("{w}: significant letters {letters:?}"));
        let prof = path_profile(&w);
        let sig_plus: Vec<usize> = (1..=n).filter(|&p| prof.is_significant_plus(p)).collect();
        let from_fact: Vec<usize> = f.sig_positions[..f.r].to_vec();
        r.record(sig_plus == from_fact, || format!("{w}: path {sig_plus:?} vs factorization {from_fact:?}"));
        let c = crystal(&w);
        r.record(flip_set(&w).len() == c.phi, || format!("{w}: |flip set| != phi"));
        if let Some(e) = &c.e_result {
            let back = crystal(e);
            r.record(back.f_result.as_ref() == Some(&w) && back.eps + 1 == c.eps && back.phi == c.phi + 1, || {
                format!("{w}: e~ then f~ does not return")
            });
        }
        if let Some(fw) = &c.f_result {
            let back = crystal(fw);
            r.record(back.e_result.as_ref() == Some(&w) && back.phi + 1 == c.phi && back.eps == c.eps + 1, || {
                format!("{w}: f~ then e~ does not return")
            });
        }
    }
    Ok(r)
}

fn words_suite(n_max: usize) -> Result<Vec<CheckReport>> {
    collect((0..=n_max).collect(), |&n| check_words(n))
}

/// `y → x → y` round trips for all words of length `n`.
pub fn check_round_trip(n: usize) -> Result<CheckReport> {
    let basis = YBasis::shared();
    let mut r = CheckReport::new(format!("x/y round trip, n={n}"));
    for w in enumerate_words(n, WordFilter::All)? {
        let y = crate::TensorVector::unit(w.clone(), BasisTag::Y);
        let back = basis.expand_in_y(&basis.expand_in_x(&y)?)?;
        r.record(back == y, || format!("y[{w}] -> {back}"));
    }
    Ok(r)
}

/// Truncation for every word of length `n` and every split with first part 1.
pub fn check_truncation_all(n: usize) -> Result<CheckReport> {
    let basis = YBasis::shared();
    let mut r = CheckReport::new(format!("truncation, n={n}"));
    for w in enumerate_words(n, WordFilter::All)? {
        for n2 in 1..n.saturating_sub(1) {
            r.absorb(basis.check_truncation(&w, (1, n2, n - 1 - n2))?);
        }
    }
    Ok(r)
}

fn basis_suite(n_max: usize) -> Result<Vec<CheckReport>> {
    let basis = YBasis::shared();
    let mut out = basis.check_characterization(n_max, 4)?;
    out.extend(collect((0..=n_max).collect(), |&n| basis.check_transition_matrix(n))?);
    out.extend(collect((0..=n_max).collect(), |&n| check_round_trip(n))?);
    out.extend(collect((3..=n_max.min(7)).collect(), |&n| check_truncation_all(n))?);
    Ok(out)
}

/// All compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    (0..1usize << (n - 1))
        .map(|mask| {
            let mut parts = vec![1];
            for i in 0..n - 1 {
                if mask >> i & 1 == 1 {
                    parts.push(1);
                } else {
                    *parts.last_mut().unwrap() += 1;
                }
            }
            parts
        })
        .collect()
}

fn rep_suite(n_max: usize) -> Result<Vec<CheckReport>> {
    let ns: Vec<usize> = (0..=n_max).collect();
    let mut out = Vec::new();
    out.extend(collect(ns.clone(), |&n| rep::check_crystal_compat(n))?);
    out.extend(collect(ns.clone(), |&n| rep::check_filtration_stability(n))?);
    out.extend(collect(ns.clone(), |&n| rep::check_layer_dimensions(n))?);
    out.extend(collect((0..=n_max).step_by(2).collect(), |&n| rep::check_invariants(n).map(|(_, r)| r))?);
    out.extend(collect((0..=n_max.min(6)).collect(), |&n| rep::check_cartan_projection(n))?);
    let shapes: Vec<Vec<usize>> = (1..=n_max.min(5)).flat_map(compositions).collect();
    out.extend(collect(shapes, |parts| rep::check_shape_basis(&Shape::new(parts.clone())?))?);
    Ok(out)
}

/// Transition invariants for every pair of words of length `n`.
pub fn check_transition_all(n: usize) -> Result<CheckReport> {
    let words = enumerate_words(n, WordFilter::All)?;
    let pairs: Vec<(Word, Word)> =
        words.iter().flat_map(|v| words.iter().map(move |w| (v.clone(), w.clone()))).collect();
    let parts = collect(pairs, |(v, w)| check_transition(v, w, XMode::Generic))?;
    Ok(merged(format!("transition invariants, all pairs, n={n}"), parts))
}

/// Transition invariants for `count` random pairs of length `n`.
pub fn check_transition_random(n: usize, count: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut random_word =
        || Word::from_letters((0..n).map(|_| if rng.gen::<bool>() { Letter::Plus } else { Letter::Minus }));
    let pairs: Vec<(Word, Word)> = (0..count).map(|_| (random_word(), random_word())).collect();
    let parts = collect(pairs, |(v, w)| check_transition(v, w, XMode::Generic))?;
    Ok(merged(format!("transition invariants, {count} random pairs, n={n}, seed={seed}"), parts))
}

/// The lemma battery for every parallel pair of length `n`, grouped by
/// check kind.
pub fn check_parallel_all(n: usize, with_substitution: bool) -> Result<Vec<CheckReport>> {
    let cases = ParallelCase::enumerate(n)?;
    let per_case: Vec<Vec<CheckReport>> =
        cases.par_iter().map(|c| charts::check_parallel_case(c, with_substitution)).collect::<Result<_>>()?;
    let mut groups: Vec<(String, Vec<CheckReport>)> = Vec::new();
    for r in per_case.into_iter().flatten() {
        let kind = r.name.split(" (").next().unwrap_or(&r.name).to_string();
        match groups.iter_mut().find(|(k, _)| *k == kind) {
            Some((_, v)) => v.push(r),
            None => groups.push((kind, vec![r])),
        }
    }
    Ok(groups.into_iter().map(|(kind, parts)| merged(format!("{kind}, parallel pairs, n={n}"), parts)).collect())
}

fn charts_suite(n_max: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in 1..=n_max.min(5) {
        out.push(check_transition_all(n)?);
    }
    for n in 6..=n_max {
        out.push(check_transition_random(n, 50, seed)?);
    }
    for n in 2..=n_max {
        out.extend(check_parallel_all(n, n <= 5)?);
    }
    Ok(out)
}

fn theorem_suite(n_max: usize) -> Result<Vec<CheckReport>> {
    collect((1..=n_max).collect(), |&n| charts::check_coefficient_rule(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(n_max: usize) -> VerifyOptions {
        VerifyOptions { n_max, seed: 7, threads: Some(2) }
    }

    #[test]
    fn suites_pass_at_small_sizes() {
        for suite in Suite::ALL {
            let r = run_suite(suite, opts(4)).unwrap();
            for c in &r.checks {
                assert!(c.passed(), "{c}");
            }
            assert!(r.passed());
        }
    }

    #[test]
    fn empty_words_suite() {
        let r = run_suite(Suite::Words, opts(0)).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4).len(), 8);
        assert!(compositions(3).contains(&vec![1, 2]));
    }

    #[test]
    fn deterministic_random_pairs() {
        let a = check_transition_random(4, 5, 11).unwrap();
        let b = check_transition_random(4, 5, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
