//! Packed sparse polynomials for the hot loops of the chart recursions.
//!
//! A monomial is a `u128` with one fixed-width field per variable, variable
//! 0 in the most significant field, so integer order is lex order and the
//! product of monomials is integer addition. The top bit of every field is
//! a guard: exponents stay below it, a sum that reaches it has overflowed,
//! and `d | m` holds iff subtracting `d` from `m` with the guards set
//! borrows from no guard. Coefficients are machine integers until an
//! operation overflows.

use std::collections::BinaryHeap;
use std::sync::Arc;

use num_traits::ToPrimitive;
use rustc_hash::FxHashMap;

use super::modp::{evaluation_point, images_not_divisible, mul_mod, scalar_mod, PRIME};
use super::poly::{Monomial, Poly, VarTable};
use crate::exactalg::Scalar;
use crate::{Error, Result};

/// A rational coefficient. `Big` never holds a value representable as `Small`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Coef {
    Small(i64),
    Big(Box<Scalar>),
}

impl Coef {
    pub(crate) const ZERO: Coef = Coef::Small(0);
    pub(crate) const ONE: Coef = Coef::Small(1);

    pub(crate) fn from_scalar(s: Scalar) -> Coef {
        if s.is_integer() {
            if let Some(k) = s.numer().to_i64() {
                return Coef::Small(k);
            }
        }
        Coef::Big(Box::new(s))
    }

    pub(crate) fn to_scalar(&self) -> Scalar {
        match self {
            Coef::Small(k) => Scalar::from_integer((*k).into()),
            Coef::Big(b) => (**b).clone(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Coef::Small(0))
    }

    pub(crate) fn is_one(&self) -> bool {
        matches!(self, Coef::Small(1))
    }

    fn neg(&self) -> Coef {
        match self {
            Coef::Small(k) => k.checked_neg().map_or_else(|| Coef::from_scalar(-self.to_scalar()), Coef::Small),
            Coef::Big(b) => Coef::from_scalar(-(**b).clone()),
        }
    }

    fn add(&self, o: &Coef) -> Coef {
        match (self, o) {
            (Coef::Small(a), Coef::Small(b)) => {
                a.checked_add(*b).map_or_else(|| Coef::from_scalar(self.to_scalar() + o.to_scalar()), Coef::Small)
            }
            _ => Coef::from_scalar(self.to_scalar() + o.to_scalar()),
        }
    }

    fn mul(&self, o: &Coef) -> Coef {
        match (self, o) {
            (Coef::Small(a), Coef::Small(b)) => {
                a.checked_mul(*b).map_or_else(|| Coef::from_scalar(self.to_scalar() * o.to_scalar()), Coef::Small)
            }
            _ => Coef::from_scalar(self.to_scalar() * o.to_scalar()),
        }
    }

    /// `self += sign · a · b`.
    fn fma(&mut self, a: &Coef, b: &Coef, negate: bool) {
        if let (Coef::Small(s), Coef::Small(x), Coef::Small(y)) = (&*self, a, b) {
            let p = if negate { x.checked_mul(*y).and_then(i64::checked_neg) } else { x.checked_mul(*y) };
            if let Some(r) = p.and_then(|p| s.checked_add(p)) {
                *self = Coef::Small(r);
                return;
            }
        }
        let p = a.to_scalar() * b.to_scalar();
        let p = if negate { -p } else { p };
        *self = Coef::from_scalar(self.to_scalar() + p);
    }

    /// `self / o` for `o ≠ 0`.
    fn div(&self, o: &Coef) -> Coef {
        if let (Coef::Small(a), Coef::Small(b)) = (self, o) {
            if let Some(q) = a.checked_rem(*b).filter(|r| *r == 0).and_then(|_| a.checked_div(*b)) {
                return Coef::Small(q);
            }
        }
        Coef::from_scalar(self.to_scalar() / o.to_scalar())
    }

    fn residue(&self) -> Option<u64> {
        match self {
            Coef::Small(k) => Some(k.rem_euclid(PRIME as i64) as u64),
            Coef::Big(b) => scalar_mod(b),
        }
    }
}

/// Field layout for a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Packing {
    nvars: usize,
    width: u32,
    mask: u128,
    guards: u128,
}

impl Packing {
    /// Fails when fewer than two bits per variable are available.
    pub(crate) fn new(nvars: usize) -> Result<Packing> {
        let width = 128usize.checked_div(nvars).map_or(16, |w| w.min(16) as u32);
        if width < 2 {
            return Err(Error::Contract(format!("{nvars} variables do not fit a packed monomial")));
        }
        let mask = (1u128 << width) - 1;
        let guards = (0..nvars).fold(0u128, |acc, i| acc | (1u128 << (width - 1)) << ((nvars - 1 - i) as u32 * width));
        Ok(Packing { nvars, width, mask, guards })
    }

    /// Largest exponent a field can hold.
    #[cfg(test)]
    fn max_exponent(&self) -> u32 {
        (1 << (self.width - 1)) - 1
    }

    fn shift(&self, var: usize) -> u32 {
        (self.nvars - 1 - var) as u32 * self.width
    }

    fn unit(&self, var: usize) -> u128 {
        1u128 << self.shift(var)
    }

    pub(crate) fn exponent(&self, m: u128, var: usize) -> u32 {
        ((m >> self.shift(var)) & self.mask) as u32
    }

    fn overflowed(&self, m: u128) -> bool {
        m & self.guards != 0
    }

    fn divides(&self, d: u128, m: u128) -> bool {
        ((m | self.guards) - d) & self.guards == self.guards
    }

    #[cfg(test)]
    fn pack(&self, e: &[u16]) -> Result<u128> {
        debug_assert_eq!(e.len(), self.nvars);
        let max = self.max_exponent();
        e.iter().enumerate().try_fold(0u128, |acc, (i, &k)| {
            if k as u32 > max {
                Err(overflow())
            } else {
                Ok(acc | (k as u128) << self.shift(i))
            }
        })
    }

    fn unpack(&self, m: u128) -> Monomial {
        (0..self.nvars).map(|i| self.exponent(m, i) as u16).collect()
    }
}

fn overflow() -> Error {
    Error::Contract("exponent exceeds the packed monomial range".into())
}

/// Sparse polynomial over ℚ: monomials strictly decreasing, no zero
/// coefficient. The layout is supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct SparsePoly {
    terms: Vec<(u128, Coef)>,
}

impl SparsePoly {
    pub(crate) fn zero() -> SparsePoly {
        SparsePoly { terms: Vec::new() }
    }

    pub(crate) fn constant(c: Coef) -> SparsePoly {
        let mut p = SparsePoly::zero();
        if !c.is_zero() {
            p.terms.push((0, c));
        }
        p
    }

    pub(crate) fn one() -> SparsePoly {
        SparsePoly::constant(Coef::ONE)
    }

    pub(crate) fn var(pk: &Packing, var: usize) -> SparsePoly {
        SparsePoly { terms: vec![(pk.unit(var), Coef::ONE)] }
    }

    #[cfg(test)]
    fn from_poly(p: &Poly, pk: &Packing) -> Result<SparsePoly> {
        let mut terms =
            p.terms().map(|(e, c)| Ok((pk.pack(e)?, Coef::from_scalar(c.clone())))).collect::<Result<Vec<_>>>()?;
        terms.reverse();
        Ok(SparsePoly { terms })
    }

    pub(crate) fn to_poly(&self, pk: &Packing, table: &Arc<VarTable>) -> Poly {
        Poly::from_terms(table, self.terms.iter().map(|(m, c)| (pk.unpack(*m), c.to_scalar())))
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == 0)
    }

    pub(crate) fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(0, c)] if c.is_one())
    }

    pub(crate) fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn leading_coefficient(&self) -> Coef {
        self.terms.first().map_or(Coef::ZERO, |(_, c)| c.clone())
    }

    fn degrees(&self, pk: &Packing) -> Vec<u32> {
        let mut out = vec![0; pk.nvars];
        for (m, _) in &self.terms {
            for (i, d) in out.iter_mut().enumerate() {
                *d = (*d).max(pk.exponent(*m, i));
            }
        }
        out
    }

    pub(crate) fn neg(&self) -> SparsePoly {
        SparsePoly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub(crate) fn scaled(&self, c: &Coef) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero();
        }
        SparsePoly { terms: self.terms.iter().map(|(m, k)| (*m, k.mul(c))).collect() }
    }

    fn merge(&self, o: &SparsePoly, negate: bool) -> SparsePoly {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &Coef| if negate { c.neg() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0, sign(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { a[i].1.add(&b[j].1.neg()) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (*m, sign(c))));
        SparsePoly { terms: out }
    }

    pub(crate) fn add(&self, o: &SparsePoly) -> SparsePoly {
        self.merge(o, false)
    }

    pub(crate) fn sub(&self, o: &SparsePoly) -> SparsePoly {
        self.merge(o, true)
    }

    pub(crate) fn mul(&self, o: &SparsePoly, pk: &Packing) -> Result<SparsePoly> {
        let (s, l) = if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        if s.is_zero() {
            return Ok(SparsePoly::zero());
        }
        let mut hit = 0u128;
        if let [(m1, c1)] = s.terms.as_slice() {
            let terms: Vec<(u128, Coef)> = l
                .terms
                .iter()
                .map(|(m2, c2)| {
                    let m = m1 + m2;
                    hit |= m;
                    (m, c1.mul(c2))
                })
                .collect();
            return if pk.overflowed(hit) { Err(overflow()) } else { Ok(SparsePoly { terms }) };
        }
        let mut acc: FxHashMap<u128, Coef> = FxHashMap::default();
        acc.reserve(l.terms.len() * 2);
        for (m1, c1) in &s.terms {
            for (m2, c2) in &l.terms {
                let m = m1 + m2;
                hit |= m;
                acc.entry(m).and_modify(|c| c.fma(c1, c2, false)).or_insert_with(|| c1.mul(c2));
            }
        }
        if pk.overflowed(hit) {
            return Err(overflow());
        }
        let mut terms: Vec<(u128, Coef)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        Ok(SparsePoly { terms })
    }

    pub(crate) fn pow(&self, k: u32, pk: &Packing) -> Result<SparsePoly> {
        let mut out = SparsePoly::one();
        for _ in 0..k {
            out = out.mul(self, pk)?;
        }
        Ok(out)
    }

    /// Replaces `var` by the variable `target`, or by 0 when `target` is `None`.
    pub(crate) fn substitute_var(&self, pk: &Packing, var: usize, target: Option<usize>) -> Result<SparsePoly> {
        let mut acc: FxHashMap<u128, Coef> = FxHashMap::default();
        let mut hit = 0u128;
        for (m, c) in &self.terms {
            let e = pk.exponent(*m, var) as u128;
            let base = m - e * pk.unit(var);
            let m2 = match target {
                Some(t) => base + e * pk.unit(t),
                None if e > 0 => continue,
                None => base,
            };
            hit |= m2;
            acc.entry(m2).and_modify(|k| *k = k.add(c)).or_insert_with(|| c.clone());
        }
        if pk.overflowed(hit) {
            return Err(overflow());
        }
        let mut terms: Vec<(u128, Coef)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        Ok(SparsePoly { terms })
    }

    /// Image in `F_p[var]` with the other variables at `point`.
    fn image(&self, pk: &Packing, var: usize, point: &[u64]) -> Option<Vec<u64>> {
        let degs = self.degrees(pk);
        let powers: Vec<Vec<u64>> = (0..pk.nvars)
            .map(|i| {
                let top = if i == var { 0 } else { degs[i] as usize };
                std::iter::successors(Some(1u64), |&x| Some(mul_mod(x, point[i]))).take(top + 1).collect()
            })
            .collect();
        let mut out = vec![0u64; degs[var] as usize + 1];
        for (m, c) in &self.terms {
            let mut t = c.residue()?;
            for (i, pw) in powers.iter().enumerate() {
                if i != var {
                    t = mul_mod(t, pw[pk.exponent(*m, i) as usize]);
                }
            }
            let slot = &mut out[pk.exponent(*m, var) as usize];
            *slot = (*slot + t) % PRIME;
        }
        Some(out)
    }

    /// Exact quotient `self / d`, by a heap merge over the quotient terms.
    pub(crate) fn exact_div(&self, d: &SparsePoly, pk: &Packing) -> Result<SparsePoly> {
        let Some((dm0, dc0)) = d.terms.first() else {
            return Err(Error::DivisionByZero);
        };
        if self.is_zero() {
            return Ok(SparsePoly::zero());
        }
        if d.terms.len() == 1 {
            let terms = self
                .terms
                .iter()
                .map(|(m, c)| if pk.divides(*dm0, *m) { Ok((m - dm0, c.div(dc0))) } else { Err(Error::NotDivisible) })
                .collect::<Result<_>>()?;
            return Ok(SparsePoly { terms });
        }
        let (da, dd) = (self.degrees(pk), d.degrees(pk));
        if da.iter().zip(&dd).any(|(a, b)| a < b) {
            return Err(Error::NotDivisible);
        }
        // Quotient exponents are bounded by the difference of degrees.
        let bound =
            da.iter().zip(&dd).enumerate().fold(0u128, |acc, (i, (a, b))| acc | ((a - b) as u128) << pk.shift(i));
        let main = (0..pk.nvars).max_by_key(|&i| dd[i]).expect("nonconstant divisor");
        let point = evaluation_point(pk.nvars);
        if let (Some(fa), Some(fb)) = (self.image(pk, main, &point), d.image(pk, main, &point)) {
            if images_not_divisible(fa, &fb) {
                return Err(Error::NotDivisible);
            }
        }
        let mut quot: Vec<(u128, Coef)> = Vec::new();
        let mut heap: BinaryHeap<(u128, usize, usize)> = BinaryHeap::new();
        let mut k = 0;
        loop {
            let next = self.terms.get(k).map(|t| t.0);
            let top = heap.peek().map(|t| t.0);
            let m = match (next, top) {
                (None, None) => break,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (Some(a), Some(b)) => a.max(b),
            };
            let mut c = Coef::ZERO;
            if next == Some(m) {
                c = self.terms[k].1.clone();
                k += 1;
            }
            while let Some(&(hm, i, j)) = heap.peek() {
                if hm != m {
                    break;
                }
                heap.pop();
                c.fma(&quot[i].1, &d.terms[j].1, true);
                if let Some((dm, _)) = d.terms.get(j + 1) {
                    heap.push((quot[i].0 + dm, i, j + 1));
                }
            }
            if c.is_zero() {
                continue;
            }
            if !pk.divides(*dm0, m) {
                return Err(Error::NotDivisible);
            }
            let qm = m - dm0;
            if !pk.divides(qm, bound) {
                return Err(Error::NotDivisible);
            }
            quot.push((qm, c.div(dc0)));
            heap.push((qm + d.terms[1].0, quot.len() - 1, 1));
        }
        Ok(SparsePoly { terms: quot })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar;
    use proptest::prelude::*;

    fn table() -> Arc<VarTable> {
        VarTable::new(["z", "x", "a"]).unwrap()
    }

    fn arb(t: Arc<VarTable>) -> impl Strategy<Value = Poly> {
        let n = t.len();
        let big = i64::MAX / 2;
        prop::collection::vec((prop::collection::vec(0u16..4, n), prop_oneof![-5i64..6, Just(big), Just(-big)]), 0..7)
            .prop_map(move |ts| Poly::from_terms(&t, ts.into_iter().map(|(e, c)| (e.into_iter().collect(), scalar(c)))))
    }

    fn pk() -> Packing {
        Packing::new(3).unwrap()
    }

    fn sp(p: &Poly) -> SparsePoly {
        SparsePoly::from_poly(p, &pk()).unwrap()
    }

    #[test]
    fn layout() {
        let pk = Packing::new(13).unwrap();
        assert_eq!(pk.max_exponent(), 255);
        assert!(Packing::new(65).is_err());
        let t = VarTable::new((0..13).map(|i| format!("v{i}"))).unwrap();
        let mut e: Monomial = smallvec::smallvec![0; 13];
        e[3] = 255;
        assert!(pk.pack(&e).is_ok());
        e[3] = 256;
        assert!(pk.pack(&e).is_err());
        let x = SparsePoly::var(&pk, 3);
        assert!(x.pow(255, &pk).is_ok());
        assert!(x.pow(256, &pk).is_err());
        assert_eq!(x.pow(7, &pk).unwrap().to_poly(&pk, &t), Poly::var(&t, "v3").unwrap().pow(7));
    }

    #[test]
    fn coefficient_promotion() {
        let big = Coef::Small(i64::MAX);
        let sum = big.add(&Coef::ONE);
        assert!(matches!(sum, Coef::Big(_)));
        assert_eq!(sum.add(&Coef::Small(-1)), big);
        assert_eq!(Coef::Small(6).div(&Coef::Small(3)), Coef::Small(2));
        assert_eq!(Coef::Small(i64::MIN).div(&Coef::Small(-1)).to_scalar(), -Coef::Small(i64::MIN).to_scalar());
        assert!(matches!(Coef::Small(1).div(&Coef::Small(2)), Coef::Big(_)));
    }

    #[test]
    fn substitution() {
        let t = table();
        let pk = pk();
        let (z, x, a) = (Poly::var(&t, "z").unwrap(), Poly::var(&t, "x").unwrap(), Poly::var(&t, "a").unwrap());
        let p = &(&z.pow(2) * &a) - &(&z * &x);
        let at_x = sp(&p).substitute_var(&pk, 0, Some(1)).unwrap().to_poly(&pk, &t);
        assert_eq!(at_x, p.substitute(0, &x));
        let at_0 = sp(&p).substitute_var(&pk, 0, None).unwrap();
        assert!(at_0.is_zero());
    }

    proptest! {
        #[test]
        fn agrees_with_poly(a in arb(table()), b in arb(table())) {
            let (pk, t) = (pk(), table());
            prop_assert_eq!(sp(&a).to_poly(&pk, &t), a.clone());
            prop_assert_eq!(sp(&a).add(&sp(&b)).to_poly(&pk, &t), &a + &b);
            prop_assert_eq!(sp(&a).sub(&sp(&b)).to_poly(&pk, &t), &a - &b);
            prop_assert_eq!(sp(&a).mul(&sp(&b), &pk).unwrap().to_poly(&pk, &t), &a * &b);
            prop_assert_eq!(sp(&a).neg().to_poly(&pk, &t), -&a);
        }

        #[test]
        fn division_agrees_with_poly(a in arb(table()), b in arb(table())) {
            let pk = pk();
            prop_assume!(!b.is_zero());
            let prod = sp(&a).mul(&sp(&b), &pk).unwrap();
            prop_assert_eq!(prod.exact_div(&sp(&b), &pk).unwrap(), sp(&a));
            let fast = sp(&a).exact_div(&sp(&b), &pk).ok().map(|q| q.to_poly(&pk, &table()));
            prop_assert_eq!(fast, a.exact_div(&b).ok());
        }
    }
}
