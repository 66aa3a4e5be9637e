//! Exact rational scalars and sparse word-indexed vectors of `V^{⊗n}`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::words::{path_profile, Letter, Word};
use crate::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Text form used in JSON: `p` for integers, `p/q` otherwise.
pub fn format_scalar(c: &Scalar) -> String {
    c.to_string()
}

pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Scalar::new(p, q))
        }
        None => Ok(Scalar::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Which basis of `V^{⊗n}` a vector's words index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisTag {
    X,
    Y,
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisTag::X => "x",
            BasisTag::Y => "y",
        })
    }
}

/// A linear combination of basis vectors `x_w` (or `y_w`) with `|w| = n`.
///
/// Zero coefficients are never stored, and iteration follows the word
/// order, so serialized output is reproducible.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorVector {
    n: usize,
    basis: BasisTag,
    terms: BTreeMap<Word, Scalar>,
}

impl TensorVector {
    pub fn zero(n: usize, basis: BasisTag) -> TensorVector {
        TensorVector { n, basis, terms: BTreeMap::new() }
    }

    /// The basis vector indexed by `w`.
    pub fn unit(w: Word, basis: BasisTag) -> TensorVector {
        let mut v = TensorVector::zero(w.len(), basis);
        v.terms.insert(w, Scalar::one());
        v
    }

    /// The scalar `c` in `V^{⊗0}`.
    pub fn constant(c: Scalar, basis: BasisTag) -> TensorVector {
        let mut v = TensorVector::zero(0, basis);
        if !c.is_zero() {
            v.terms.insert(Word::empty(), c);
        }
        v
    }

    pub fn from_terms<I>(n: usize, basis: BasisTag, terms: I) -> Result<TensorVector>
    where
        I: IntoIterator<Item = (Word, Scalar)>,
    {
        let mut v = TensorVector::zero(n, basis);
        for (w, c) in terms {
            v.add_term(w, c)?;
        }
        Ok(v)
    }

    /// The word length `n`, not the number of terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Reinterprets the coefficients in another basis without conversion.
    pub fn retagged(mut self, basis: BasisTag) -> TensorVector {
        self.basis = basis;
        self
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) -> Result<()> {
        if w.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: w.len() });
        }
        self.add_term_unchecked(w, c);
        Ok(())
    }

    pub(crate) fn add_term_unchecked(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &TensorVector) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, found: other.n });
        }
        if self.basis != other.basis {
            return Err(Error::BasisMismatch { expected: self.basis, found: other.basis });
        }
        Ok(())
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &TensorVector) -> Result<()> {
        self.check_compatible(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (w, d) in &other.terms {
            self.add_term_unchecked(w.clone(), c * d);
        }
        Ok(())
    }

    pub fn add(&self, other: &TensorVector) -> Result<TensorVector> {
        let mut out = self.clone();
        out.axpy(&Scalar::one(), other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &TensorVector) -> Result<TensorVector> {
        let mut out = self.clone();
        out.axpy(&-Scalar::one(), other)?;
        Ok(out)
    }

    pub fn scaled(&self, c: &Scalar) -> TensorVector {
        if c.is_zero() {
            return TensorVector::zero(self.n, self.basis);
        }
        TensorVector {
            n: self.n,
            basis: self.basis,
            terms: self.terms.iter().map(|(w, d)| (w.clone(), c * d)).collect(),
        }
    }

    /// Tensor product of two x-expansions: words concatenate, coefficients multiply.
    pub fn tensor(&self, other: &TensorVector) -> Result<TensorVector> {
        for v in [self, other] {
            if v.basis != BasisTag::X {
                return Err(Error::BasisMismatch { expected: BasisTag::X, found: v.basis });
            }
        }
        Ok(self.tensor_unchecked(other))
    }

    pub(crate) fn tensor_unchecked(&self, other: &TensorVector) -> TensorVector {
        let mut out = TensorVector::zero(self.n + other.n, self.basis);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term_unchecked(u.concat(v), a * b);
            }
        }
        out
    }

    /// `x_l ⊗ self`.
    pub fn prepend_letter(&self, l: Letter) -> TensorVector {
        TensorVector {
            n: self.n + 1,
            basis: self.basis,
            terms: self.terms.iter().map(|(w, c)| (w.prepend(l), c.clone())).collect(),
        }
    }

    /// Applies a linear map given on basis words and sums the images.
    pub fn map_linear<F>(&self, out_n: usize, out_basis: BasisTag, mut f: F) -> Result<TensorVector>
    where
        F: FnMut(&Word) -> Result<TensorVector>,
    {
        let mut out = TensorVector::zero(out_n, out_basis);
        for (w, c) in &self.terms {
            out.axpy(c, &f(w)?)?;
        }
        Ok(out)
    }
}

impl fmt::Debug for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TensorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let (neg, abs) = (c.is_negative(), c.abs());
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "{}[{w}]", self.basis)?;
        }
        Ok(())
    }
}

/// JSON form of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Word,
    pub coeff: String,
}

/// JSON form `{"n", "basis", "terms": [{"word", "coeff"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorJson {
    pub n: usize,
    pub basis: BasisTag,
    pub terms: Vec<TermJson>,
}

impl TensorVector {
    pub fn term_list(&self) -> Vec<TermJson> {
        self.terms.iter().map(|(w, c)| TermJson { word: w.clone(), coeff: format_scalar(c) }).collect()
    }

    pub fn to_json(&self) -> VectorJson {
        VectorJson { n: self.n, basis: self.basis, terms: self.term_list() }
    }

    pub fn from_json(json: &VectorJson) -> Result<TensorVector> {
        let mut v = TensorVector::zero(json.n, json.basis);
        for t in &json.terms {
            v.add_term(t.word.clone(), parse_scalar(&t.coeff)?)?;
        }
        Ok(v)
    }
}

impl Serialize for TensorVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Sum of prefix heights of a word's path; strictly larger for paths that
/// lie weakly above and differ somewhere.
pub fn path_area(w: &Word) -> i64 {
    path_profile(w).heights().iter().sum()
}

/// A total order refining path dominance: lower paths come later, ties
/// broken lexicographically. Useful as the order for [`solve_triangular`]
/// when the new basis vectors have leading term on their own word and
/// further terms on higher paths.
pub fn path_order(a: &Word, b: &Word) -> Ordering {
    path_area(b).cmp(&path_area(a)).then_with(|| a.cmp(b))
}

/// Whether the path of `upper` lies weakly above the path of `lower`.
pub fn path_weakly_above(upper: &Word, lower: &Word) -> bool {
    let (pu, pl) = (path_profile(upper), path_profile(lower));
    pu.d.iter().zip(&pl.d).all(|(a, b)| a >= b)
}

/// Coordinates of `target` in a new basis given by `change`, which maps each
/// new basis vector's index to its expansion in the old basis.
///
/// Requires `change[u]` to have coefficient one on `u` and every other term
/// strictly smaller than `u` under `order`. Each step removes the
/// `order`-largest term of the residual.
pub fn solve_triangular<F>(
    change: &HashMap<Word, TensorVector>,
    target: &TensorVector,
    order: F,
) -> Result<TensorVector>
where
    F: Fn(&Word, &Word) -> Ordering,
{
    let new_basis = match target.basis {
        BasisTag::X => BasisTag::Y,
        BasisTag::Y => BasisTag::X,
    };
    let mut residual = target.clone();
    let mut out = TensorVector::zero(target.n, new_basis);
    while let Some(lead) = residual.terms.keys().max_by(|a, b| order(a, b)).cloned() {
        let column = change.get(&lead).ok_or_else(|| Error::NotUnitriangular(lead.to_string()))?;
        if column.basis != target.basis || !column.coeff(&lead).is_one() {
            return Err(Error::NotUnitriangular(lead.to_string()));
        }
        if column.support().any(|u| u != &lead && order(u, &lead) != Ordering::Less) {
            return Err(Error::NotUnitriangular(lead.to_string()));
        }
        let c = residual.coeff(&lead);
        residual.axpy(&-c.clone(), column)?;
        out.add_term_unchecked(lead, c);
    }
    Ok(out)
}

/// Rank of a family of vectors by exact elimination.
pub fn rank(vectors: &[TensorVector]) -> usize {
    // Rows reduced so that each pivot word appears in exactly one row's lead.
    let mut pivots: BTreeMap<Word, TensorVector> = BTreeMap::new();
    for v in vectors {
        let mut r = v.clone();
        loop {
            let Some((lead, c)) = r.terms.iter().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
                break;
            };
            match pivots.get(&lead) {
                Some(p) => {
                    let factor = -(c / p.coeff(&lead));
                    r.axpy(&factor, p).expect("vectors in one space");
                }
                None => {
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_words, WordFilter};
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn xv(pairs: &[(&str, i64)]) -> TensorVector {
        let n = pairs.first().map_or(0, |p| p.0.len());
        TensorVector::from_terms(n, BasisTag::X, pairs.iter().map(|&(s, c)| (w(s), scalar(c)))).unwrap()
    }

    #[test]
    fn addition() {
        let u = xv(&[("-+", 1), ("+-", 3)]);
        assert_eq!(u.add(&TensorVector::zero(2, BasisTag::X)).unwrap(), u);
        let e = xv(&[("-+", 1)]);
        assert!(e.add(&e.scaled(&scalar(-1))).unwrap().is_zero());
        let s = xv(&[("-+", 1)]).add(&xv(&[("+-", 1)])).unwrap();
        assert_eq!(s.num_terms(), 2);
    }

    #[test]
    fn addition_rejects_mismatch() {
        let a = xv(&[("-+", 1)]);
        assert!(matches!(a.add(&xv(&[("+", 1)])), Err(Error::LengthMismatch { .. })));
        let b = a.clone().retagged(BasisTag::Y);
        assert!(matches!(a.add(&b), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(xv(&[("+", 1)]).tensor(&xv(&[("-", 1)])).unwrap(), xv(&[("+-", 1)]));
        let lhs = xv(&[("-+", 1), ("+-", -1)]).tensor(&xv(&[("+", 1)])).unwrap();
        assert_eq!(lhs, xv(&[("-++", 1), ("+-+", -1)]));
        let zero = TensorVector::zero(1, BasisTag::X);
        assert!(zero.tensor(&xv(&[("+-", 2)])).unwrap().is_zero());
        let y = xv(&[("+", 1)]).retagged(BasisTag::Y);
        assert!(y.tensor(&xv(&[("+", 1)])).is_err());
    }

    #[test]
    fn solve_identity_and_two_letter_example() {
        let words = enumerate_words(2, WordFilter::All).unwrap();
        let identity: HashMap<_, _> =
            words.iter().map(|u| (u.clone(), TensorVector::unit(u.clone(), BasisTag::X))).collect();
        let t = xv(&[("--", 2), ("+-", -1)]);
        assert_eq!(solve_triangular(&identity, &t, path_order).unwrap(), t.clone().retagged(BasisTag::Y));

        let mut change = HashMap::new();
        change.insert(w("-+"), xv(&[("-+", 1), ("+-", -1)]));
        change.insert(w("+-"), xv(&[("+-", 1)]));
        let got = solve_triangular(&change, &xv(&[("-+", 1)]), path_order).unwrap();
        let expected = xv(&[("-+", 1), ("+-", 1)]).retagged(BasisTag::Y);
        assert_eq!(got, expected);
    }

    #[test]
    fn solve_detects_non_triangular_input() {
        let mut change = HashMap::new();
        change.insert(w("-+"), xv(&[("-+", 2)]));
        let r = solve_triangular(&change, &xv(&[("-+", 1)]), path_order);
        assert!(matches!(r, Err(Error::NotUnitriangular(_))));
        let mut change = HashMap::new();
        // The extra term sits on a lower path, i.e. later in the order.
        change.insert(w("+-"), xv(&[("+-", 1), ("-+", 1)]));
        change.insert(w("-+"), xv(&[("-+", 1)]));
        let r = solve_triangular(&change, &xv(&[("+-", 1)]), path_order);
        assert!(matches!(r, Err(Error::NotUnitriangular(_))));
    }

    #[test]
    fn scalar_text_round_trip() {
        for s in ["0", "3", "-7/2", "5/10"] {
            let c = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&format_scalar(&c)).unwrap(), c);
        }
        assert_eq!(format_scalar(&parse_scalar("5/10").unwrap()), "1/2");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("a").is_err());
    }

    #[test]
    fn json_layout() {
        let v = xv(&[("+-", 2), ("-+", -1)]).scaled(&ratio(1, 2));
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"n": 2, "basis": "x", "terms": [
                {"word": "-+", "coeff": "-1/2"},
                {"word": "+-", "coeff": "1"}
            ]})
        );
        assert_eq!(TensorVector::from_json(&v.to_json()).unwrap(), v);
    }

    #[test]
    fn rank_of_dependent_family() {
        let a = xv(&[("-+", 1), ("+-", 1)]);
        let b = xv(&[("-+", 1), ("+-", -1)]);
        let c = a.add(&b).unwrap();
        assert_eq!(rank(&[a.clone(), b.clone(), c]), 2);
        assert_eq!(rank(&[a]), 1);
        assert_eq!(rank(&[TensorVector::zero(2, BasisTag::X)]), 0);
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..20).prop_map(|(p, q)| ratio(p, q))
    }

    fn arb_vector(n: usize) -> impl Strategy<Value = TensorVector> {
        proptest::collection::vec((0u32..(1 << n), arb_scalar()), 0..6).prop_map(move |terms| {
            let words = enumerate_words(n, WordFilter::All).unwrap();
            TensorVector::from_terms(n, BasisTag::X, terms.into_iter().map(|(i, c)| (words[i as usize].clone(), c)))
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn scalar_field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * a.recip()).is_one());
            }
            // Lowest terms: gcd(num, den) = 1 and den > 0.
            let g = num_integer::Integer::gcd(a.numer(), a.denom());
            prop_assert!(g.is_one() && a.denom().is_positive());
        }

        #[test]
        fn tensor_is_bilinear_and_associative(
            a in arb_vector(2), b in arb_vector(2), c in arb_vector(1), k in arb_scalar()
        ) {
            let lhs = a.add(&b).unwrap().tensor(&c).unwrap();
            let rhs = a.tensor(&c).unwrap().add(&b.tensor(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.scaled(&k).tensor(&c).unwrap(), a.tensor(&c.scaled(&k)).unwrap());
            prop_assert_eq!(
                a.tensor(&b).unwrap().tensor(&c).unwrap(),
                a.tensor(&b.tensor(&c).unwrap()).unwrap()
            );
        }
    }
}
