//! Acceptance criteria, each checked exactly. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::time::Instant;

use mvbasis::basis::YBasis;
use mvbasis::charts::check_coefficient_rule;
use mvbasis::exactalg::{scalar, BasisTag, TensorVector};
use mvbasis::rep::{self, Shape};
use mvbasis::report::CheckReport;
use mvbasis::verify::{check_parallel_all, check_transition_all, check_transition_random};
use mvbasis::words::{ell, enumerate_words, Word, WordFilter};
use rayon::prelude::*;

type Outcome = Result<Vec<CheckReport>, String>;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn vector(basis: BasisTag, terms: &[(&str, i64)]) -> TensorVector {
    TensorVector::from_terms(terms[0].0.len(), basis, terms.iter().map(|&(s, c)| (w(s), scalar(c)))).unwrap()
}

fn lift<T>(r: mvbasis::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn exact(name: &str, ok: bool, detail: impl FnOnce() -> String) -> CheckReport {
    let mut r = CheckReport::new(name);
    r.record(ok, detail);
    r
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_1() -> Outcome {
    let basis = YBasis::shared();
    let x = lift(basis.expand_in_y(&vector(BasisTag::X, &[("-+", 1)])))?;
    let y = lift(basis.expand_in_x(&vector(BasisTag::Y, &[("-+", 1)])))?;
    Ok(vec![
        exact("x_-+ = y_-+ + y_+-", x == vector(BasisTag::Y, &[("-+", 1), ("+-", 1)]), || x.to_string()),
        exact("y_-+ = x_-+ - x_+-", y == vector(BasisTag::X, &[("-+", 1), ("+-", -1)]), || y.to_string()),
    ])
}

fn criterion_2() -> Outcome {
    lift(YBasis::shared().check_characterization(8, 4))
}

fn criterion_3() -> Outcome {
    (0..=8usize).into_par_iter().map(|n| lift(rep::check_crystal_compat(n))).collect()
}

fn criterion_4() -> Outcome {
    let mut out = Vec::new();
    let listed = [1usize, 2, 5, 14, 42, 132];
    for m in 1..=6u64 {
        let (count, invariants) = lift(rep::check_invariants(2 * m as usize))?;
        let catalan = (binomial(2 * m, m) / (m + 1)) as usize;
        out.push(exact(
            &format!("semistable count, length {}", 2 * m),
            count == catalan && count == listed[m as usize - 1],
            || format!("{count} semistable words, Catalan {catalan}"),
        ));
        out.push(invariants);
    }
    Ok(out)
}

fn criterion_5() -> Outcome {
    let mut out = Vec::new();
    for n in 0..=10u64 {
        let mut counts = vec![0u64; n as usize + 1];
        for word in lift(enumerate_words(n as usize, WordFilter::All))? {
            counts[ell(&word)] += 1;
        }
        let expected: Vec<u64> = (0..=n)
            .map(|p| {
                if (n - p) % 2 == 1 {
                    return 0;
                }
                let k = (n - p) / 2;
                let m = binomial(n, k) - if k == 0 { 0 } else { binomial(n, k - 1) };
                (p + 1) * m
            })
            .collect();
        out.push(exact(&format!("layer dimensions, n={n}"), counts == expected, || {
            format!("counts {counts:?}, expected {expected:?}")
        }));
    }
    Ok(out)
}

fn criterion_6() -> Outcome {
    (0..=10usize).into_par_iter().map(|n| lift(YBasis::shared().check_transition_matrix(n))).collect()
}

fn criterion_7() -> Outcome {
    let mut out: Vec<CheckReport> = (1..=5).map(|n| lift(check_transition_all(n))).collect::<Result<_, _>>()?;
    out.push(lift(check_transition_random(6, 500, 2024))?);
    Ok(out)
}

fn criterion_8() -> Outcome {
    let mut out = Vec::new();
    for n in 2..=7 {
        out.extend(lift(check_parallel_all(n, n <= 5))?);
    }
    Ok(out)
}

fn criterion_9() -> Outcome {
    (1..=10usize).into_par_iter().map(|n| lift(check_coefficient_rule(n))).collect()
}

fn criterion_10() -> Outcome {
    let basis = YBasis::shared();
    let mut out: Vec<CheckReport> =
        (0..=6usize).into_par_iter().map(|n| lift(rep::check_cartan_projection(n))).collect::<Result<_, _>>()?;
    for big_n in 1..=6 {
        let shape = lift(Shape::new(vec![big_n]))?;
        let elements = lift(rep::mv_basis_of_shape(&shape))?;
        let words: Vec<Word> = (0..=big_n).map(|b| Word::shape(big_n - b, b)).collect();
        let mut found: Vec<Word> = elements.iter().map(|e| e.word.clone()).collect();
        found.sort();
        let mut expected = words.clone();
        expected.sort();
        let images_ok =
            elements.iter().all(|e| e.vector == rep::cartan_project_on_range(&basis.y_in_x(&e.word), 0..big_n));
        out.push(exact(
            &format!("mv basis of shape ({big_n})"),
            elements.len() == big_n + 1 && found == expected && images_ok,
            || format!("{} vectors indexed by {found:?}", elements.len()),
        ));
    }
    let mut trunc = CheckReport::new("truncation, length 6, split (1,2,3)");
    for word in lift(enumerate_words(6, WordFilter::All))? {
        trunc.absorb(lift(basis.check_truncation(&word, (1, 2, 3)))?);
    }
    out.push(trunc);
    Ok(out)
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked example x_-+ = y_-+ + y_+-", criterion_1),
        ("characterization, n <= 8, insertions up to length 4", criterion_2),
        ("crystal compatibility, n <= 8", criterion_3),
        ("invariant dimensions are Catalan numbers, m <= 6", criterion_4),
        ("filtration layer dimensions, n <= 10", criterion_5),
        ("transition matrix structure, n <= 10", criterion_6),
        ("transition-sequence invariants, n <= 5 and 500 pairs at n = 6", criterion_7),
        ("parallel-pair lemma battery, n <= 7", criterion_8),
        ("coefficient rule vs oracle, n <= 10", criterion_9),
        ("Cartan projections and truncation", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(reports) if reports.iter().all(CheckReport::passed) => {
                let checked: usize = reports.iter().map(|r| r.checked).sum();
                println!("PASS criterion {}: {name} ({checked} instances, {secs:.1}s)", i + 1);
            }
            Ok(reports) => {
                failures += 1;
                println!("FAIL criterion {}: {name} ({secs:.1}s)", i + 1);
                for r in reports.iter().filter(|r| !r.passed()) {
                    println!("    {r}");
                }
            }
            Err(e) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: error {e}", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
