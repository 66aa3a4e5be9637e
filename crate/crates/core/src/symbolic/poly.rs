use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::modp::certainly_not_divisible;
use crate::exactalg::{format_scalar, Scalar};
use crate::{Error, Result};

/// Product, skipping normalization when both factors are integers.
fn mul(a: &Scalar, b: &Scalar) -> Scalar {
    if a.is_integer() && b.is_integer() {
        Scalar::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

fn add_assign(a: &mut Scalar, b: &Scalar) {
    if a.is_integer() && b.is_integer() {
        *a = Scalar::from_integer(a.numer() + b.numer());
    } else {
        *a += b;
    }
}

/// Ordered, duplicate-free variable names shared by every polynomial of a
/// computation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<I, S>(names: I) -> Result<Arc<VarTable>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(Error::Contract(format!("variable names must be unique and nonempty: {n:?}")));
            }
        }
        Ok(Arc::new(VarTable { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

/// Dense exponent vector, one slot per variable of the table.
pub type Monomial = SmallVec<[u16; 16]>;

/// Sparse polynomial over ℚ. Terms are keyed by exponent vector in
/// lexicographic order (variable 0 most significant); the leading term is
/// the last entry. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Arc<VarTable>,
    terms: BTreeMap<Monomial, Scalar>,
}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Poly {
    pub fn zero(vars: &Arc<VarTable>) -> Poly {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Arc<VarTable>) -> Poly {
        Poly::constant(vars, Scalar::one())
    }

    pub fn constant(vars: &Arc<VarTable>, c: Scalar) -> Poly {
        Poly::monomial(vars, smallvec::smallvec![0; vars.len()], c)
    }

    pub fn monomial(vars: &Arc<VarTable>, exps: Monomial, c: Scalar) -> Poly {
        debug_assert_eq!(exps.len(), vars.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { vars: vars.clone(), terms }
    }

    /// The variable at index `i`.
    pub fn var_index(vars: &Arc<VarTable>, i: usize) -> Poly {
        let mut e: Monomial = smallvec::smallvec![0; vars.len()];
        e[i] = 1;
        Poly::monomial(vars, e, Scalar::one())
    }

    pub fn var(vars: &Arc<VarTable>, name: &str) -> Result<Poly> {
        Ok(Poly::var_index(vars, vars.index(name)?))
    }

    pub fn from_terms<I>(vars: &Arc<VarTable>, terms: I) -> Poly
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().iter().all(|&e| e == 0),
            _ => false,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u16]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Leading term under lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Scalar {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&k| k as u32).sum()).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// Indices of the variables occurring in `self`.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| self.depends_on(i)).collect()
    }

    pub(crate) fn add_term(&mut self, e: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                add_assign(slot.get_mut(), &c);
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_table(&self, other: &Poly) -> Result<()> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::VarTableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_table(other)?;
        Ok(self.add_unchecked(other, &Scalar::one()))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_table(other)?;
        Ok(self.add_unchecked(other, &-Scalar::one()))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_table(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Poly, c: &Scalar) -> Poly {
        let mut out = self.clone();
        for (e, k) in &other.terms {
            out.add_term(e.clone(), mul(k, c));
        }
        out
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        if small.is_zero() {
            return Poly::zero(&self.vars);
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(large.terms.len() * 2);
        for (e1, c1) in &small.terms {
            for (e2, c2) in &large.terms {
                let e: Monomial = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                let c = mul(c1, c2);
                match acc.entry(e) {
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        slot.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut slot) => add_assign(slot.get_mut(), &c),
                }
            }
        }
        Poly { vars: self.vars.clone(), terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn scaled(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, k)| (e.clone(), mul(k, c))).collect() }
    }

    /// `self · m` for a monomial exponent vector `m`.
    pub fn shifted(&self, m: &[u16]) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), k.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(&self.vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Monic normalization: leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scaled(&c.recip()),
        }
    }

    /// Exact quotient `self / b`; fails with `NotDivisible` if `b ∤ self`.
    pub fn exact_div(&self, b: &Poly) -> Result<Poly> {
        self.check_table(b)?;
        let (lb_exp, lb_coeff) = b.leading_term().ok_or(Error::DivisionByZero)?;
        let lb_exp = lb_exp.clone();
        let lb_inv = lb_coeff.recip();
        if b.terms.len() == 1 {
            let mut out = Poly::zero(&self.vars);
            for (e, c) in &self.terms {
                let q = monomial_quotient(e, &lb_exp).ok_or(Error::NotDivisible)?;
                out.terms.insert(q, c * &lb_inv);
            }
            return Ok(out);
        }
        // A quotient term can never exceed these per-variable degrees.
        let bounds: Vec<i32> = (0..self.vars.len()).map(|i| self.degree_in(i) as i32 - b.degree_in(i) as i32).collect();
        if bounds.iter().any(|&k| k < 0) && !self.is_zero() {
            return Err(Error::NotDivisible);
        }
        let main = (0..self.vars.len()).max_by_key(|&i| b.degree_in(i)).expect("nonconstant divisor");
        if !self.is_zero() && certainly_not_divisible(self, b, main) {
            return Err(Error::NotDivisible);
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((e, c)) = rem.leading_term() {
            let q = monomial_quotient(e, &lb_exp).ok_or(Error::NotDivisible)?;
            if q.iter().zip(&bounds).any(|(&k, &m)| k as i32 > m) {
                return Err(Error::NotDivisible);
            }
            let qc = mul(c, &lb_inv);
            let neg_qc = -&qc;
            for (be, bc) in &b.terms {
                let e2: Monomial = be.iter().zip(q.iter()).map(|(a, b)| a + b).collect();
                rem.add_term(e2, mul(bc, &neg_qc));
            }
            quot.terms.insert(q, qc);
        }
        Ok(quot)
    }

    pub fn divides(&self, a: &Poly) -> bool {
        !self.is_zero() && a.exact_div(self).is_ok()
    }

    /// Coefficients of `self` as a polynomial in `var`: entry `k` is the
    /// `var`-free coefficient of `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(&self.vars); deg + 1];
        if self.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    /// Coefficient of `var^k` (free of `var`).
    pub fn coefficient_of(&self, var: usize, k: u16) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    /// Substitutes the polynomial `value` for `var` (Horner in `var`).
    pub fn substitute(&self, var: usize, value: &Poly) -> Poly {
        assert!(same_table(&self.vars, &value.vars), "variable table mismatch");
        if !self.depends_on(var) {
            return self.clone();
        }
        let coeffs = self.coefficients_in(var);
        let mut out = Poly::zero(&self.vars);
        for c in coeffs.iter().rev() {
            out = &(&out * value) + c;
        }
        out
    }

    /// Substitutes a constant for `var`.
    pub fn substitute_scalar(&self, var: usize, value: &Scalar) -> Poly {
        if value.is_zero() {
            return self.coefficient_of(var, 0);
        }
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            let k = e[var];
            let mut e2 = e.clone();
            e2[var] = 0;
            out.add_term(e2, c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return smallvec::smallvec![0; self.vars.len()];
        };
        let mut m = first.clone();
        for e in it {
            for (a, &b) in m.iter_mut().zip(e.iter()) {
                *a = (*a).min(b);
            }
        }
        m
    }

    /// Divides by a monomial that divides every term.
    pub(crate) fn unshifted(&self, m: &[u16]) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), k.clone())).collect(),
        }
    }

    /// Drops every monomial of weighted degree `≥ spec.threshold`, i.e.
    /// reduces modulo `J_d`.
    pub fn truncate_graded(&self, spec: &GradedIdealSpec) -> Poly {
        assert_eq!(spec.weights.len(), self.vars.len(), "grading does not match variable table");
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| spec.degree(e) < spec.threshold)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reduction modulo `𝔭^power` where `𝔭` is generated by the listed variables.
    pub fn reduce_mod_variables(&self, vars: &[usize], power: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().map(|&i| e[i] as u32).sum::<u32>() < power)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Whether `self ≡ other mod J_d`.
    pub fn congruent_graded(&self, other: &Poly, spec: &GradedIdealSpec) -> bool {
        (self - other).truncate_graded(spec).is_zero()
    }

    pub fn congruent_mod_variables(&self, other: &Poly, vars: &[usize], power: u32) -> bool {
        (self - other).reduce_mod_variables(vars, power).is_zero()
    }

    /// Moves to another table containing every variable `self` uses.
    pub fn rebase(&self, target: &Arc<VarTable>) -> Result<Poly> {
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index(n).ok()).collect();
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut e2: Monomial = smallvec::smallvec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let j = map[i].ok_or_else(|| Error::UnknownVariable(self.vars.name(i).to_string()))?;
                    e2[j] = k;
                }
            }
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }
}

fn monomial_quotient(e: &[u16], d: &[u16]) -> Option<Monomial> {
    e.iter().zip(d).map(|(&a, &b)| a.checked_sub(b)).collect()
}

/// Weights per variable and a threshold `d`; represents the span `J_d` of
/// monomials of weighted degree `≥ d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedIdealSpec {
    pub weights: Vec<u32>,
    pub threshold: u32,
}

impl GradedIdealSpec {
    /// Weights from `(name, weight)` pairs; unlisted variables get weight 0.
    pub fn from_names(vars: &VarTable, weights: &[(&str, u32)], threshold: u32) -> Result<GradedIdealSpec> {
        let mut w = vec![0; vars.len()];
        for &(name, k) in weights {
            w[vars.index(name)?] = k;
        }
        Ok(GradedIdealSpec { weights: w, threshold })
    }

    pub fn with_threshold(&self, threshold: u32) -> GradedIdealSpec {
        GradedIdealSpec { weights: self.weights.clone(), threshold }
    }

    pub fn degree(&self, e: &[u16]) -> u32 {
        e.iter().zip(&self.weights).map(|(&k, &w)| k as u32 * w).sum()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                assert!(same_table(&self.vars, &rhs.vars), "variable table mismatch");
                $body(self, rhs)
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Poly, b: &Poly| a.add_unchecked(b, &Scalar::one()));
binop!(Sub, sub, |a: &Poly, b: &Poly| a.add_unchecked(b, &-Scalar::one()));
binop!(Mul, mul, |a: &Poly, b: &Poly| a.mul_unchecked(b));

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scaled(&-Scalar::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &VarTable, e: &[u16]) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(vars.name(i))?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

/// Canonical text: terms in decreasing lex order, `c*m` with unit
/// coefficients omitted, `0` for the zero polynomial.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let constant = e.iter().all(|&k| k == 0);
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if constant {
                f.write_str(&format_scalar(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", format_scalar(&mag))?;
                }
                write_monomial(f, &self.vars, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
