use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::gcd::gcd;
use super::poly::{Poly, VarTable};
use crate::exactalg::Scalar;
use crate::{Error, Result};

/// `num / den` with `den ≠ 0`, reduced by the gcd and with monic `den`.
#[derive(Clone)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !Arc::ptr_eq(num.vars(), den.vars()) && num.vars() != den.vars() {
            return Err(Error::VarTableMismatch);
        }
        Ok(RationalFunction::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> RationalFunction {
        if num.is_zero() {
            return RationalFunction { den: Poly::one(num.vars()), num };
        }
        if den.is_constant() {
            let c = den.constant_term().recip();
            return RationalFunction { num: num.scaled(&c), den: Poly::one(den.vars()) };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = den.leading_coefficient().recip();
        RationalFunction { num: num.scaled(&lc), den: den.scaled(&lc) }
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        let one = Poly::one(p.vars());
        RationalFunction { num: p, den: one }
    }

    pub fn zero(vars: &Arc<VarTable>) -> RationalFunction {
        RationalFunction::from_poly(Poly::zero(vars))
    }

    pub fn one(vars: &Arc<VarTable>) -> RationalFunction {
        RationalFunction::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: &Arc<VarTable>, c: Scalar) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(vars, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<RationalFunction> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        Ok(self * &other.recip()?)
    }

    pub fn scaled(&self, c: &Scalar) -> RationalFunction {
        RationalFunction::reduced(self.num.scaled(c), self.den.clone())
    }

    /// Divides the numerator exactly by `p`; fails if `p` does not divide it.
    pub fn exact_div_num(&self, p: &Poly) -> Result<RationalFunction> {
        Ok(RationalFunction { num: self.num.exact_div(p)?, den: self.den.clone() })
    }

    /// Substitutes a polynomial for `var` in numerator and denominator.
    pub fn substitute(&self, var: usize, value: &Poly) -> Result<RationalFunction> {
        RationalFunction::new(self.num.substitute(var, value), self.den.substitute(var, value))
    }

    pub fn substitute_rational(&self, var: usize, value: &RationalFunction) -> Result<RationalFunction> {
        eval_at(&self.num, var, value)?.checked_div(&eval_at(&self.den, var, value)?)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.depends_on(var)
    }
}

/// Substitutes a rational function for `var` in a polynomial.
pub fn eval_at(p: &Poly, var: usize, value: &RationalFunction) -> Result<RationalFunction> {
    if value.is_polynomial() {
        return Ok(RationalFunction::from_poly(p.substitute(var, value.num())));
    }
    // Σ c_k n^k d^{K-k} / d^K
    let coeffs = p.coefficients_in(var);
    let top = coeffs.len() - 1;
    let mut num = Poly::zero(p.vars());
    let mut npow = Poly::one(p.vars());
    let dpows: Vec<Poly> = {
        let mut v = vec![Poly::one(p.vars())];
        for _ in 0..top {
            let next = v.last().unwrap() * value.den();
            v.push(next);
        }
        v
    };
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            num = &num + &(&(c * &npow) * &dpows[top - k]);
        }
        npow = &npow * value.num();
    }
    RationalFunction::new(num, dpows[top].clone())
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &RationalFunction) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::reduced(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            return RationalFunction::reduced(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        if self.den.is_one() {
            return RationalFunction::reduced(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let d1 = self.den.exact_div(&g).expect("gcd divides");
        let d2 = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        RationalFunction::reduced(num, &d1 * &rhs.den)
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // Cross-cancel before multiplying; the results are then coprime.
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = rhs.den.exact_div(&g1).expect("gcd divides");
        let n2 = rhs.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coefficient().recip();
        RationalFunction { num: num.scaled(&lc), den: den.scaled(&lc) }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> RationalFunction {
        RationalFunction::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar;
    use proptest::prelude::*;

    fn t() -> Arc<VarTable> {
        VarTable::new(["z", "x", "a"]).unwrap()
    }

    fn v(t: &Arc<VarTable>, n: &str) -> RationalFunction {
        Poly::var(t, n).unwrap().into()
    }

    #[test]
    fn reduction_and_normalization() {
        let t = t();
        let (x, a) = (Poly::var(&t, "x").unwrap(), Poly::var(&t, "a").unwrap());
        let r = RationalFunction::new(&(&x * &a) + &x, (&a + &Poly::one(&t)).scaled(&scalar(2))).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &x.scaled(&crate::exactalg::ratio(1, 2)));
        assert!(matches!(RationalFunction::new(x.clone(), Poly::zero(&t)), Err(Error::DivisionByZero)));
        let inv = RationalFunction::from_poly(a.scaled(&scalar(-2))).recip().unwrap();
        assert_eq!(inv.den(), &a);
        assert_eq!(inv.to_string(), "-1/2/a");
    }

    #[test]
    fn field_operations() {
        let t = t();
        let (x, a) = (v(&t, "x"), v(&t, "a"));
        let one = RationalFunction::one(&t);
        let inv_a = a.recip().unwrap();
        assert_eq!(&inv_a * &a, one);
        let s = &inv_a + &x.recip().unwrap();
        assert_eq!(s, RationalFunction::new(&x.num().clone() + a.num(), x.num() * a.num()).unwrap());
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let t = t();
        let (z, x) = (Poly::var(&t, "z").unwrap(), Poly::var(&t, "x").unwrap());
        let p = &z - &x;
        assert!(eval_at(&p, 0, &x.clone().into()).unwrap().is_zero());
        assert_eq!(eval_at(&p, 0, &RationalFunction::zero(&t)).unwrap(), RationalFunction::from_poly(-&x));
        let half = v(&t, "a").recip().unwrap();
        let e = eval_at(&z.pow(2), 0, &half).unwrap();
        assert_eq!(e, (&half * &half));
    }

    fn arb_rf() -> impl Strategy<Value = RationalFunction> {
        let t = t();
        let arb = move || {
            let t = t.clone();
            prop::collection::vec((prop::collection::vec(0u16..2, 3), -3i64..4), 1..4).prop_map(move |ts| {
                Poly::from_terms(&t, ts.into_iter().map(|(e, c)| (e.into_iter().collect(), scalar(c))))
            })
        };
        (arb(), arb()).prop_filter_map("nonzero denominator", |(n, d)| RationalFunction::new(n, d).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms(a in arb_rf(), b in arb_rf(), c in arb_rf()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn evaluation_is_homomorphism(a in arb_rf(), b in arb_rf(), s in arb_rf()) {
            let s = s.substitute(0, &Poly::zero(s.vars())).unwrap_or_else(|_| RationalFunction::one(s.vars()));
            let ev = |r: &RationalFunction| r.substitute_rational(0, &s);
            if let (Ok(ea), Ok(eb), Ok(esum), Ok(eprod)) = (ev(&a), ev(&b), ev(&(&a + &b)), ev(&(&a * &b))) {
                prop_assert_eq!(esum, &ea + &eb);
                prop_assert_eq!(eprod, &ea * &eb);
            }
        }
    }
}
