//! The sl2-action on `V^{⊗n}`, the filtration by number of significant
//! letters, and projections onto Cartan components.
//!
//! The action is computed on `x`-expansions with the Leibniz rule. The
//! projection onto the top isotypic component is realized as a polynomial
//! in the Casimir `C = ef + fe + h²/2`, which acts on an isotypic component
//! of type `V(p)` by `c_p = p²/2 + p`.

use std::ops::Range;

use num_traits::One;
use serde::Serialize;

use crate::basis::YBasis;
use crate::exactalg::{rank, ratio, scalar, BasisTag, Scalar, TensorVector, TermJson};
use crate::report::CheckReport;
use crate::words::{crystal, ell, enumerate_words, Letter, Word, WordFilter};
use crate::{Error, Result};

/// A basis element of sl2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LieAction {
    E,
    F,
    H,
}

impl LieAction {
    pub const ALL: [LieAction; 3] = [LieAction::E, LieAction::F, LieAction::H];
}

/// A composition `(n₁, …, n_r)` of `N` with positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(parts: Vec<usize>) -> Result<Shape> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::Contract(format!("shape parts must be positive and nonempty, got {parts:?}")));
        }
        Ok(Shape(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// 0-based letter ranges of the blocks.
    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.0
            .iter()
            .map(|&k| {
                let r = start..start + k;
                start += k;
                r
            })
            .collect()
    }

    pub fn split(&self, w: &Word) -> Vec<Word> {
        self.ranges().into_iter().map(|r| w.slice(r)).collect()
    }
}

/// Applies `g` to the tensor factors in `range` only (0-based letters).
pub fn act_on_range(g: LieAction, v: &TensorVector, range: Range<usize>) -> TensorVector {
    let mut out = TensorVector::zero(v.len(), v.basis());
    for (w, c) in v.terms() {
        match g {
            LieAction::H => {
                let wt: i64 = w.letters()[range.clone()].iter().map(|l| l.weight()).sum();
                out.add_term_unchecked(w.clone(), c * scalar(wt));
            }
            LieAction::E | LieAction::F => {
                let from = if g == LieAction::E { Letter::Minus } else { Letter::Plus };
                for pos in range.clone() {
                    if w.letters()[pos] == from {
                        out.add_term_unchecked(w.with_flip(pos + 1), c.clone());
                    }
                }
            }
        }
    }
    out
}

/// `g · v`. A `y`-basis input is converted to `x`, acted on, and converted back.
pub fn act(g: LieAction, v: &TensorVector) -> Result<TensorVector> {
    act_with(YBasis::shared(), g, v)
}

pub fn act_with(basis: &YBasis, g: LieAction, v: &TensorVector) -> Result<TensorVector> {
    let x = basis.convert(v, BasisTag::X)?;
    let image = act_on_range(g, &x, 0..x.len());
    basis.convert(&image, v.basis())
}

/// Casimir acting on the factors in `range`, on an `x`-expansion.
pub fn casimir_on_range(v: &TensorVector, range: Range<usize>) -> TensorVector {
    let on = |g, u: &TensorVector| act_on_range(g, u, range.clone());
    let ef = on(LieAction::E, &on(LieAction::F, v));
    let fe = on(LieAction::F, &on(LieAction::E, v));
    let hh = on(LieAction::H, &on(LieAction::H, v));
    let mut out = ef;
    out.axpy(&Scalar::one(), &fe).expect("same space");
    out.axpy(&ratio(1, 2), &hh).expect("same space");
    out
}

pub fn casimir(v: &TensorVector) -> Result<TensorVector> {
    let basis = YBasis::shared();
    let x = basis.convert(v, BasisTag::X)?;
    basis.convert(&casimir_on_range(&x, 0..x.len()), v.basis())
}

/// Casimir eigenvalue `p²/2 + p` on components of type `V(p)`.
pub fn casimir_eigenvalue(p: usize) -> Scalar {
    let p = p as i64;
    ratio(p * p + 2 * p, 2)
}

/// Projection onto the `V(k)`-isotypic component of the factors in
/// `range`, `k = |range|`, on an `x`-expansion.
pub fn cartan_project_on_range(v: &TensorVector, range: Range<usize>) -> TensorVector {
    let k = range.len();
    let top = casimir_eigenvalue(k);
    let mut out = v.clone();
    // Components V(p) with p ≡ k (mod 2), p < k.
    for p in (k % 2..k).step_by(2) {
        let c = casimir_eigenvalue(p);
        let mut next = casimir_on_range(&out, range.clone());
        next.axpy(&-c.clone(), &out).expect("same space");
        out = next.scaled(&(&top - &c).recip());
    }
    out
}

/// Projection `p: V^{⊗n} → V(n)` onto the Cartan component.
pub fn cartan_project(v: &TensorVector, n: usize) -> Result<TensorVector> {
    if v.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: v.len() });
    }
    let basis = YBasis::shared();
    let x = basis.convert(v, BasisTag::X)?;
    basis.convert(&cartan_project_on_range(&x, 0..n), v.basis())
}

/// Block-wise projection `p₍₁₎ ⊗ … ⊗ p₍ᵣ₎` on an `x`-expansion.
pub fn project_shape(v: &TensorVector, shape: &Shape) -> TensorVector {
    shape.ranges().into_iter().fold(v.clone(), |acc, r| cartan_project_on_range(&acc, r))
}

/// One element of the basis of `V(n₁) ⊗ … ⊗ V(n_r)`: the image of `y_w`,
/// indexed by the blocks of `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeBasisElement {
    pub word: Word,
    pub blocks: Vec<Word>,
    pub vector: TensorVector,
}

/// Nonzero images of the `y_w`, `|w| = N`, under the block-wise projection.
pub fn mv_basis_of_shape(shape: &Shape) -> Result<Vec<ShapeBasisElement>> {
    let basis = YBasis::shared();
    let mut out = Vec::new();
    for w in enumerate_words(shape.total(), WordFilter::All)? {
        let image = project_shape(&basis.y_in_x(&w), shape);
        if !image.is_zero() {
            out.push(ShapeBasisElement { blocks: shape.split(&w), word: w, vector: image });
        }
    }
    Ok(out)
}

/// `{shape, basis: [{blocks, vector}]}` as emitted by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct ShapeBasisJson {
    pub shape: Vec<usize>,
    pub basis: Vec<ShapeElementJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeElementJson {
    pub blocks: Vec<Word>,
    pub vector: Vec<TermJson>,
}

pub fn shape_basis_json(shape: &Shape, elements: &[ShapeBasisElement]) -> ShapeBasisJson {
    ShapeBasisJson {
        shape: shape.parts().to_vec(),
        basis: elements
            .iter()
            .map(|e| ShapeElementJson { blocks: e.blocks.clone(), vector: e.vector.term_list() })
            .collect(),
    }
}

/// Whether every block has only significant letters (shape `+…+−…−`).
pub fn blocks_all_significant(w: &Word, shape: &Shape) -> bool {
    shape.split(w).iter().all(|b| ell(b) == b.len())
}

/// Multiplicity of `V(p)` in `V^{⊗n}`: `C(n, (n−p)/2) − C(n, (n−p)/2 − 1)`.
pub fn multiplicity(n: usize, p: usize) -> u128 {
    if p > n || (n - p) % 2 == 1 {
        return 0;
    }
    let k = (n - p) / 2;
    let below = if k == 0 { 0 } else { binomial(n, k - 1) };
    binomial(n, k) - below
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `e·y_w − ε(w) y_{ẽ(w)}` and `f·y_w − φ(w) y_{f̃(w)}` lie in the span of
/// `y_v` with `ℓ(v) < ℓ(w)`, for every `w` of length `n`.
pub fn check_crystal_compat(n: usize) -> Result<CheckReport> {
    let basis = YBasis::shared();
    let mut report = CheckReport::new(format!("crystal compatibility mod lower layer, n={n}"));
    for w in enumerate_words(n, WordFilter::All)? {
        let c = crystal(&w);
        let yw = TensorVector::unit(w.clone(), BasisTag::Y);
        for (g, count, target) in [(LieAction::E, c.eps, &c.e_result), (LieAction::F, c.phi, &c.f_result)] {
            let mut rem = act_with(basis, g, &yw)?;
            if let Some(t) = target {
                rem.add_term_unchecked(t.clone(), -scalar(count as i64));
            }
            let ok = rem.support().all(|v| ell(v) < c.ell);
            report.record(ok, || format!("{g:?}·y[{w}] - {count}·y[{target:?}] = {rem}"));
        }
    }
    Ok(report)
}

/// Each span of `{y_w : ℓ(w) ≤ p}` is stable under `e`, `f`, `h`.
pub fn check_filtration_stability(n: usize) -> Result<CheckReport> {
    let basis = YBasis::shared();
    let mut report = CheckReport::new(format!("filtration stability, n={n}"));
    for w in enumerate_words(n, WordFilter::All)? {
        let layer = ell(&w);
        let yw = TensorVector::unit(w.clone(), BasisTag::Y);
        for g in LieAction::ALL {
            let image = act_with(basis, g, &yw)?;
            report.record(image.support().all(|v| ell(v) <= layer), || {
                format!("{g:?}·y[{w}] = {image} leaves layer {layer}")
            });
        }
    }
    Ok(report)
}

/// `#{w : ℓ(w) = p} = (p+1)·m_{n,p}` for every `p`.
pub fn check_layer_dimensions(n: usize) -> Result<CheckReport> {
    let mut counts = vec![0u128; n + 1];
    for w in enumerate_words(n, WordFilter::All)? {
        counts[ell(&w)] += 1;
    }
    let mut report = CheckReport::new(format!("filtration layer dimensions, n={n}"));
    for (p, &count) in counts.iter().enumerate() {
        let expected = (p as u128 + 1) * multiplicity(n, p);
        report.record(count == expected, || format!("layer {p}: {count} words, expected {expected}"));
    }
    Ok(report)
}

/// Semistable words of length `n` and exact invariance of their `y_w`.
pub fn check_invariants(n: usize) -> Result<(usize, CheckReport)> {
    let basis = YBasis::shared();
    let mut report = CheckReport::new(format!("invariants e·y_w = f·y_w = 0, n={n}"));
    let words = enumerate_words(n, WordFilter::Semistable)?;
    for w in &words {
        let yw = basis.y_in_x(w);
        for g in [LieAction::E, LieAction::F] {
            let image = act_on_range(g, &yw, 0..n);
            report.record(image.is_zero(), || format!("{g:?}·y[{w}] = {image}"));
        }
    }
    Ok((words.len(), report))
}

/// Idempotence, equivariance and highest-weight fixing of the projection
/// `p` on `V^{⊗n}`, tested on every `y_w`.
pub fn check_cartan_projection(n: usize) -> Result<CheckReport> {
    let basis = YBasis::shared();
    let mut report = CheckReport::new(format!("Cartan projection, n={n}"));
    let top = TensorVector::unit(Word::shape(n, 0), BasisTag::X);
    report.record(cartan_project_on_range(&top, 0..n) == top, || "p(x_{+..+}) != x_{+..+}".into());
    for w in enumerate_words(n, WordFilter::All)? {
        let v = basis.y_in_x(&w);
        let pv = cartan_project_on_range(&v, 0..n);
        report.record(cartan_project_on_range(&pv, 0..n) == pv, || format!("p not idempotent on y[{w}]"));
        for g in LieAction::ALL {
            let lhs = cartan_project_on_range(&act_on_range(g, &v, 0..n), 0..n);
            let rhs = act_on_range(g, &pv, 0..n);
            report.record(lhs == rhs, || format!("p does not commute with {g:?} on y[{w}]"));
        }
        if ell(&w) < n {
            report.record(pv.is_zero(), || format!("p(y[{w}]) = {pv} but ℓ < n"));
        }
    }
    Ok(report)
}

/// Survivors of the block-wise projection are exactly the block-shaped words,
/// and they are linearly independent with the expected count.
pub fn check_shape_basis(shape: &Shape) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("MV basis of shape {:?}", shape.parts()));
    let elements = mv_basis_of_shape(shape)?;
    let survivors: Vec<&Word> = elements.iter().map(|e| &e.word).collect();
    for w in enumerate_words(shape.total(), WordFilter::All)? {
        let expected = blocks_all_significant(&w, shape);
        let got = survivors.contains(&&w);
        report.record(expected == got, || format!("{w}: survives={got}, block-shaped={expected}"));
    }
    let dim: usize = shape.parts().iter().map(|k| k + 1).product();
    let vectors: Vec<TensorVector> = elements.iter().map(|e| e.vector.clone()).collect();
    let r = rank(&vectors);
    report.record(elements.len() == dim && r == dim, || {
        format!("{} vectors of rank {r}, expected dimension {dim}", elements.len())
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn xv(pairs: &[(&str, i64)]) -> TensorVector {
        let n = pairs[0].0.len();
        TensorVector::from_terms(n, BasisTag::X, pairs.iter().map(|&(s, c)| (w(s), scalar(c)))).unwrap()
    }

    #[test]
    fn action_examples() {
        assert_eq!(act(LieAction::E, &xv(&[("--", 1)])).unwrap(), xv(&[("+-", 1), ("-+", 1)]));
        assert!(act(LieAction::E, &xv(&[("-+", 1), ("+-", -1)])).unwrap().is_zero());
        assert!(act(LieAction::H, &xv(&[("+-", 1)])).unwrap().is_zero());
    }

    #[test]
    fn action_on_y_vectors_stays_in_y() {
        let y = TensorVector::unit(w("++"), BasisTag::Y);
        let fy = act(LieAction::F, &y).unwrap();
        assert_eq!(fy.basis(), BasisTag::Y);
        let expected = TensorVector::from_terms(2, BasisTag::Y, [(w("+-"), scalar(2)), (w("-+"), scalar(1))]).unwrap();
        assert_eq!(fy, expected);
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(casimir(&xv(&[("++", 1)])).unwrap(), xv(&[("++", 4)]));
        assert!(casimir(&xv(&[("-+", 1), ("+-", -1)])).unwrap().is_zero());
        assert_eq!(casimir_eigenvalue(1), ratio(3, 2));
    }

    #[test]
    fn casimir_is_central() {
        for u in enumerate_words(4, WordFilter::All).unwrap() {
            let v = TensorVector::unit(u.clone(), BasisTag::X);
            for g in LieAction::ALL {
                let lhs = casimir_on_range(&act_on_range(g, &v, 0..4), 0..4);
                let rhs = act_on_range(g, &casimir_on_range(&v, 0..4), 0..4);
                assert_eq!(lhs, rhs, "{g:?} on {u}");
            }
        }
    }

    #[test]
    fn projection_examples() {
        let p = cartan_project(&xv(&[("-+", 1)]), 2).unwrap();
        assert_eq!(p, xv(&[("-+", 1), ("+-", 1)]).scaled(&ratio(1, 2)));
        let top = xv(&[("+++", 1)]);
        assert_eq!(cartan_project(&top, 3).unwrap(), top);
        assert!(cartan_project(&top, 2).is_err());
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(2, 0), 1);
        assert_eq!(multiplicity(2, 2), 1);
        assert_eq!(multiplicity(2, 1), 0);
        assert_eq!(multiplicity(6, 0), 5);
        assert_eq!(multiplicity(4, 2), 3);
    }

    #[test]
    fn shapes() {
        assert!(Shape::new(vec![]).is_err());
        assert!(Shape::new(vec![2, 0]).is_err());
        let ones = mv_basis_of_shape(&Shape::new(vec![1, 1, 1]).unwrap()).unwrap();
        assert_eq!(ones.len(), 8);
        for e in &ones {
            assert_eq!(e.vector, *YBasis::shared().y_in_x(&e.word));
        }
        let top = mv_basis_of_shape(&Shape::new(vec![3]).unwrap()).unwrap();
        let words: Vec<_> = top.iter().map(|e| e.word.to_string()).collect();
        assert_eq!(words, vec!["---", "+--", "++-", "+++"]);
        assert_eq!(mv_basis_of_shape(&Shape::new(vec![2, 1]).unwrap()).unwrap().len(), 6);
        assert_eq!(mv_basis_of_shape(&Shape::new(vec![2]).unwrap()).unwrap().len(), 3);
    }

    #[test]
    fn small_checks_pass() {
        for n in 0..=5 {
            for r in [
                check_crystal_compat(n).unwrap(),
                check_filtration_stability(n).unwrap(),
                check_layer_dimensions(n).unwrap(),
                check_cartan_projection(n).unwrap(),
            ] {
                assert!(r.passed(), "{r}");
            }
        }
        assert!(check_shape_basis(&Shape::new(vec![2, 2]).unwrap()).unwrap().passed());
    }
}
