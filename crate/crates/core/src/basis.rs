//! The `y`-basis of `V^{⊗n}`.
//!
//! `y_w` is defined by `y_∅ = 1`, `y_{+w} = x_+ ⊗ y_w` and
//! `y_{-w} = x_- ⊗ y_w − Σ_{v ∈ 𝒫(w)} x_+ ⊗ y_v`. Read the other way round,
//! the same identities give `x_+ ⊗ y_w = y_{+w}` and
//! `x_- ⊗ y_w = y_{-w} + Σ_{v ∈ 𝒫(w)} y_{+v}`, which expands any `x_w` in
//! the `y`-basis by peeling letters off the front.
//!
//! [`YBasis`] memoizes both expansions. Its tables sit behind `RwLock`s:
//! concurrent readers are fine, and two threads racing on the same missing
//! entry compute the same value, so the second insert is a no-op.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactalg::{path_weakly_above, BasisTag, Scalar, TensorVector, TermJson};
use crate::report::CheckReport;
use crate::words::{enumerate_words, factorize, flip_set, weight, Letter, Word, WordFilter};
use crate::{Error, Result};

type Memo = RwLock<HashMap<Word, Arc<TensorVector>>>;

#[derive(Default)]
pub struct YBasis {
    y_in_x: Memo,
    x_in_y: Memo,
}

fn cached<F>(memo: &Memo, w: &Word, compute: F) -> Arc<TensorVector>
where
    F: FnOnce() -> TensorVector,
{
    if let Some(v) = memo.read().expect("memo lock poisoned").get(w) {
        return v.clone();
    }
    let v = Arc::new(compute());
    memo.write().expect("memo lock poisoned").entry(w.clone()).or_insert(v).clone()
}

impl YBasis {
    pub fn new() -> YBasis {
        YBasis::default()
    }

    /// Process-wide instance used by the free functions of this module.
    pub fn shared() -> &'static YBasis {
        static SHARED: OnceLock<YBasis> = OnceLock::new();
        SHARED.get_or_init(YBasis::new)
    }

    /// Expansion of `y_w` in the `x`-basis.
    pub fn y_in_x(&self, w: &Word) -> Arc<TensorVector> {
        cached(&self.y_in_x, w, || {
            let Some(first) = w.first() else {
                return TensorVector::constant(Scalar::one(), BasisTag::X);
            };
            let rest = w.tail();
            let mut out = self.y_in_x(&rest).prepend_letter(first);
            if first == Letter::Minus {
                for v in flip_set(&rest) {
                    let term = self.y_in_x(&v).prepend_letter(Letter::Plus);
                    out.axpy(&-Scalar::one(), &term).expect("same length");
                }
            }
            out
        })
    }

    /// Expansion of `x_w` in the `y`-basis.
    pub fn x_in_y(&self, w: &Word) -> Arc<TensorVector> {
        cached(&self.x_in_y, w, || {
            let Some(first) = w.first() else {
                return TensorVector::constant(Scalar::one(), BasisTag::Y);
            };
            let rest = self.x_in_y(&w.tail());
            let mut out = TensorVector::zero(w.len(), BasisTag::Y);
            for (u, c) in rest.terms() {
                out.add_term_unchecked(u.prepend(first), c.clone());
                if first == Letter::Minus {
                    for v in flip_set(u) {
                        out.add_term_unchecked(v.prepend(Letter::Plus), c.clone());
                    }
                }
            }
            out
        })
    }

    /// Re-expresses an `x`-basis vector in the `y`-basis.
    pub fn expand_in_y(&self, v: &TensorVector) -> Result<TensorVector> {
        expect_basis(v, BasisTag::X)?;
        v.map_linear(v.len(), BasisTag::Y, |w| Ok((*self.x_in_y(w)).clone()))
    }

    /// Re-expresses a `y`-basis vector in the `x`-basis.
    pub fn expand_in_x(&self, v: &TensorVector) -> Result<TensorVector> {
        expect_basis(v, BasisTag::Y)?;
        v.map_linear(v.len(), BasisTag::X, |w| Ok((*self.y_in_x(w)).clone()))
    }

    /// Converts to the requested basis (identity if already there).
    pub fn convert(&self, v: &TensorVector, target: BasisTag) -> Result<TensorVector> {
        match (v.basis(), target) {
            (a, b) if a == b => Ok(v.clone()),
            (BasisTag::X, BasisTag::Y) => self.expand_in_y(v),
            _ => self.expand_in_x(v),
        }
    }

    /// `y_w` assembled as `y_{w₋ᵣ} ⊗ x_+ ⊗ … ⊗ y_{w₀} ⊗ x_- ⊗ … ⊗ y_{w_s}`
    /// from the factorization of `w`.
    pub fn factor_product(&self, w: &Word) -> TensorVector {
        let f = factorize(w);
        let mut out = TensorVector::constant(Scalar::one(), BasisTag::X);
        for (i, segment) in f.blocks.iter().enumerate() {
            let piece = if i % 2 == 0 {
                (*self.y_in_x(segment)).clone()
            } else {
                TensorVector::unit(segment.clone(), BasisTag::X)
            };
            out = out.tensor_unchecked(&piece);
        }
        out
    }

    /// Checks the three characterizing properties of the family on all
    /// words of length at most `n`; insertions use semistable words of
    /// length at most `max_insert`.
    pub fn check_characterization(&self, n: usize, max_insert: usize) -> Result<Vec<CheckReport>> {
        let mut shape = CheckReport::new("characterization (a): y_w = x_w for w = +..+-..-");
        for len in 0..=n {
            for plus in 0..=len {
                let w = Word::shape(plus, len - plus);
                let ok = *self.y_in_x(&w) == TensorVector::unit(w.clone(), BasisTag::X);
                shape.record(ok, || format!("y[{w}] = {}", self.y_in_x(&w)));
            }
        }

        let mut base = CheckReport::new("characterization (b): y_-+ = x_-+ - x_+-");
        if n >= 2 {
            let expected = TensorVector::from_terms(
                2,
                BasisTag::X,
                [("-+", 1), ("+-", -1)].map(|(s, c)| (s.parse().unwrap(), Scalar::from_integer(c.into()))),
            )?;
            let got = self.y_in_x(&"-+".parse()?);
            base.record(*got == expected, || format!("y[-+] = {got}"));
        }

        let mut insertion = CheckReport::new("characterization (c): insertion of semistable y_u");
        for ulen in (2..=max_insert.min(n)).step_by(2) {
            for u in enumerate_words(ulen, WordFilter::Semistable)? {
                let yu = self.y_in_x(&u);
                for m in 0..=(n - ulen) {
                    for t in enumerate_words(m, WordFilter::All)? {
                        let yt = self.y_in_x(&t);
                        for k in 0..=m {
                            let inserted = insert_between(&yt, &yu, k);
                            let target = t.slice(0..k).concat(&u).concat(&t.slice(k..m));
                            let ok = inserted == *self.y_in_x(&target);
                            insertion.record(ok, || format!("u={u}, w'={}, w''={}", t.slice(0..k), t.slice(k..m)));
                        }
                    }
                }
            }
        }
        Ok(vec![shape, base, insertion])
    }

    /// Checks the truncation property on the expansion of
    /// `y_{w₍₁₎} ⊗ y_{w₍₂₎w₍₃₎}` in the `y`-basis, where `w` is cut into blocks
    /// of lengths `split`. Every term `y_v` must have
    /// `wt(v₍₃₎) < wt(w₍₃₎)` or `v₍₃₎ = w₍₃₎`, and the terms with `v₍₃₎ = w₍₃₎`
    /// must reproduce the expansion of `y_{w₍₁₎} ⊗ y_{w₍₂₎}`.
    pub fn check_truncation(&self, w: &Word, split: (usize, usize, usize)) -> Result<CheckReport> {
        let (n1, n2, n3) = split;
        if n1 + n2 + n3 != w.len() {
            return Err(Error::LengthMismatch { expected: n1 + n2 + n3, found: w.len() });
        }
        let mut report = CheckReport::new(format!("truncation {w} split ({n1},{n2},{n3})"));
        let (w1, w2, w3) = (w.slice(0..n1), w.slice(n1..n1 + n2), w.slice(n1 + n2..w.len()));
        let full = self.expand_in_y(&self.y_in_x(&w1).tensor_unchecked(&self.y_in_x(&w2.concat(&w3))))?;
        let short = self.expand_in_y(&self.y_in_x(&w1).tensor_unchecked(&self.y_in_x(&w2)))?;

        let mut restricted = TensorVector::zero(n1 + n2, BasisTag::Y);
        for (v, c) in full.terms() {
            let v3 = v.slice(n1 + n2..v.len());
            let ok = v3 == w3 || weight(&v3) < weight(&w3);
            report.record(ok, || format!("term {c}*y[{v}] has suffix weight {}", weight(&v3)));
            if v3 == w3 {
                restricted.add_term_unchecked(v.slice(0..n1 + n2), c.clone());
            }
        }
        report.record(restricted == short, || format!("suffix-matching part {restricted} differs from {short}"));
        Ok(report)
    }

    /// Unitriangularity, integrality, nonnegativity and path-dominance of
    /// the coefficients `x_w = Σ n_{w,v} y_v` for all words of length `n`.
    pub fn check_transition_matrix(&self, n: usize) -> Result<CheckReport> {
        let mut report = CheckReport::new(format!("x->y transition matrix, n={n}"));
        for w in enumerate_words(n, WordFilter::All)? {
            let col = self.x_in_y(&w);
            report.record(col.coeff(&w).is_one(), || format!("n[{w},{w}] = {}", col.coeff(&w)));
            for (v, c) in col.terms() {
                let ok = c.is_integer()
                    && !c.is_negative()
                    && v.len() == w.len()
                    && weight(v) == weight(&w)
                    && path_weakly_above(v, &w);
                report.record(ok, || format!("n[{w},{v}] = {c}"));
            }
        }
        Ok(report)
    }

    /// One row of the exported table.
    pub fn table_row(&self, w: &Word) -> TableRow {
        TableRow { word: w.clone(), y_in_x: self.y_in_x(w).term_list(), x_in_y: self.x_in_y(w).term_list() }
    }

    pub fn table(&self, n: usize) -> Result<Vec<TableRow>> {
        Ok(enumerate_words(n, WordFilter::All)?.iter().map(|w| self.table_row(w)).collect())
    }
}

fn expect_basis(v: &TensorVector, basis: BasisTag) -> Result<()> {
    if v.basis() != basis {
        return Err(Error::BasisMismatch { expected: basis, found: v.basis() });
    }
    Ok(())
}

/// Linear map `x_{s'} ⊗ x_{s''} ↦ x_{s'} ⊗ y_u ⊗ x_{s''}` with `|s'| = k`.
fn insert_between(v: &TensorVector, yu: &TensorVector, k: usize) -> TensorVector {
    let n = v.len() + yu.len();
    let mut out = TensorVector::zero(n, BasisTag::X);
    for (s, c) in v.terms() {
        let (head, tail) = (s.slice(0..k), s.slice(k..s.len()));
        for (m, d) in yu.terms() {
            out.add_term_unchecked(head.concat(m).concat(&tail), c * d);
        }
    }
    out
}

/// Row of the `table` export: `{word, y_in_x, x_in_y}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub word: Word,
    pub y_in_x: Vec<TermJson>,
    pub x_in_y: Vec<TermJson>,
}

pub fn y_in_x(w: &Word) -> Arc<TensorVector> {
    YBasis::shared().y_in_x(w)
}

pub fn x_in_y(w: &Word) -> Arc<TensorVector> {
    YBasis::shared().x_in_y(w)
}

pub fn expand_in_y(v: &TensorVector) -> Result<TensorVector> {
    YBasis::shared().expand_in_y(v)
}

pub fn expand_in_x(v: &TensorVector) -> Result<TensorVector> {
    YBasis::shared().expand_in_x(v)
}

pub fn factor_product(w: &Word) -> TensorVector {
    YBasis::shared().factor_product(w)
}

/// Whether every coefficient of `v` vanishes outside words satisfying `keep`.
pub fn supported_on<F: Fn(&Word) -> bool>(v: &TensorVector, keep: F) -> bool {
    v.terms().all(|(w, c)| c.is_zero() || keep(w))
}

/// Semistable words index the invariants; exposed for the rep checks.
pub fn invariant_words(n: usize) -> Result<Vec<Word>> {
    enumerate_words(n, WordFilter::Semistable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{path_order, scalar, solve_triangular};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn vec_of(basis: BasisTag, pairs: &[(&str, i64)]) -> TensorVector {
        let n = pairs[0].0.len();
        TensorVector::from_terms(n, basis, pairs.iter().map(|&(s, c)| (w(s), scalar(c)))).unwrap()
    }

    #[test]
    fn y_in_x_examples() {
        let b = YBasis::new();
        assert_eq!(*b.y_in_x(&w("++--")), TensorVector::unit(w("++--"), BasisTag::X));
        assert_eq!(*b.y_in_x(&w("-+")), vec_of(BasisTag::X, &[("-+", 1), ("+-", -1)]));
        assert_eq!(*b.y_in_x(&w("--+")), vec_of(BasisTag::X, &[("--+", 1), ("-+-", -1)]));
    }

    #[test]
    fn x_in_y_examples() {
        let b = YBasis::new();
        assert_eq!(*b.x_in_y(&w("+-")), TensorVector::unit(w("+-"), BasisTag::Y));
        assert_eq!(*b.x_in_y(&w("-+")), vec_of(BasisTag::Y, &[("-+", 1), ("+-", 1)]));
    }

    #[test]
    fn x_in_y_agrees_with_triangular_solve() {
        let b = YBasis::new();
        let words = enumerate_words(4, WordFilter::All).unwrap();
        let change: HashMap<_, _> = words.iter().map(|u| (u.clone(), (*b.y_in_x(u)).clone())).collect();
        for u in &words {
            let solved = solve_triangular(&change, &TensorVector::unit(u.clone(), BasisTag::X), path_order).unwrap();
            assert_eq!(solved, *b.x_in_y(u), "{u}");
        }
    }

    #[test]
    fn expand_examples() {
        let b = YBasis::new();
        assert!(b.expand_in_y(&TensorVector::zero(3, BasisTag::X)).unwrap().is_zero());
        let v = b.y_in_x(&w("++")).prepend_letter(Letter::Minus);
        let expected = vec_of(BasisTag::Y, &[("-++", 1), ("+-+", 1), ("++-", 1)]);
        assert_eq!(b.expand_in_y(&v).unwrap(), expected);
        assert!(b.expand_in_y(&TensorVector::zero(1, BasisTag::Y)).is_err());
    }

    #[test]
    fn round_trips() {
        let b = YBasis::new();
        for n in 0..=8 {
            for u in enumerate_words(n, WordFilter::All).unwrap() {
                let back = b.expand_in_y(&b.y_in_x(&u)).unwrap();
                assert_eq!(back, TensorVector::unit(u.clone(), BasisTag::Y), "{u}");
            }
        }
    }

    #[test]
    fn factor_product_matches_recursion() {
        let b = YBasis::new();
        assert_eq!(b.factor_product(&w("+-")), vec_of(BasisTag::X, &[("+-", 1)]));
        let example = w("-++-+-+++--+--++++--+-");
        assert_eq!(b.factor_product(&example), *b.y_in_x(&example));
        for n in 0..=8 {
            for u in enumerate_words(n, WordFilter::All).unwrap() {
                assert_eq!(b.factor_product(&u), *b.y_in_x(&u), "{u}");
            }
        }
    }

    #[test]
    fn characterization_small() {
        let b = YBasis::new();
        for n in [0, 2, 6] {
            for r in b.check_characterization(n, 4).unwrap() {
                assert!(r.passed(), "{r}");
            }
        }
    }

    #[test]
    fn truncation_examples() {
        let b = YBasis::new();
        assert!(b.check_truncation(&w("+-+"), (1, 2, 0)).unwrap().passed());
        assert!(b.check_truncation(&w("-+-+"), (1, 1, 2)).unwrap().passed());
        assert!(b.check_truncation(&w("-+-+"), (1, 1, 1)).is_err());
    }

    #[test]
    fn transition_matrix_small() {
        let b = YBasis::new();
        for n in 0..=6 {
            let r = b.check_transition_matrix(n).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn table_rows() {
        let t = YBasis::new().table(2).unwrap();
        assert_eq!(t.len(), 4);
        let row = t.iter().find(|r| r.word == w("-+")).unwrap();
        let json = serde_json::to_value(row).unwrap();
        assert_eq!(json["y_in_x"], serde_json::json!([{"word": "-+", "coeff": "1"}, {"word": "+-", "coeff": "-1"}]));
    }
}
