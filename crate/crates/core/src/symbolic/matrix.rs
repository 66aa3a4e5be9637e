use std::fmt;
use std::sync::Arc;

use super::poly::{Poly, VarTable};
use super::ratfunc::RationalFunction;

/// `[[p, q], [r, s]]` over the rational functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix2 {
    pub p: RationalFunction,
    pub q: RationalFunction,
    pub r: RationalFunction,
    pub s: RationalFunction,
}

impl PolyMatrix2 {
    pub fn new(p: RationalFunction, q: RationalFunction, r: RationalFunction, s: RationalFunction) -> PolyMatrix2 {
        PolyMatrix2 { p, q, r, s }
    }

    pub fn identity(vars: &Arc<VarTable>) -> PolyMatrix2 {
        let (o, l) = (RationalFunction::zero(vars), RationalFunction::one(vars));
        PolyMatrix2::new(l.clone(), o.clone(), o, l)
    }

    /// `φ₊(x, a) = [[z − x, a], [0, 1]]`.
    pub fn phi_plus(z: &Poly, x: &Poly, a: &RationalFunction) -> PolyMatrix2 {
        let vars = z.vars();
        PolyMatrix2::new((z - x).into(), a.clone(), RationalFunction::zero(vars), RationalFunction::one(vars))
    }

    /// `φ₋(x, a) = [[1, 0], [a, z − x]]`.
    pub fn phi_minus(z: &Poly, x: &Poly, a: &RationalFunction) -> PolyMatrix2 {
        let vars = z.vars();
        PolyMatrix2::new(RationalFunction::one(vars), RationalFunction::zero(vars), a.clone(), (z - x).into())
    }

    pub fn det(&self) -> RationalFunction {
        &(&self.p * &self.s) - &(&self.q * &self.r)
    }

    pub fn mul(&self, o: &PolyMatrix2) -> PolyMatrix2 {
        PolyMatrix2::new(
            &(&self.p * &o.p) + &(&self.q * &o.r),
            &(&self.p * &o.q) + &(&self.q * &o.s),
            &(&self.r * &o.p) + &(&self.s * &o.r),
            &(&self.r * &o.q) + &(&self.s * &o.s),
        )
    }

    pub fn entries(&self) -> [&RationalFunction; 4] {
        [&self.p, &self.q, &self.r, &self.s]
    }
}

impl fmt::Display for PolyMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.p, self.q, self.r, self.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_matrices_have_determinant_z_minus_x() {
        let t = VarTable::new(["z", "x", "a"]).unwrap();
        let z = Poly::var(&t, "z").unwrap();
        let x = Poly::var(&t, "x").unwrap();
        let a: RationalFunction = Poly::var(&t, "a").unwrap().into();
        let zx: RationalFunction = (&z - &x).into();
        assert_eq!(PolyMatrix2::phi_plus(&z, &x, &a).det(), zx);
        assert_eq!(PolyMatrix2::phi_minus(&z, &x, &a).det(), zx);
        let id = PolyMatrix2::identity(&t);
        let m = PolyMatrix2::phi_plus(&z, &x, &a);
        assert_eq!(id.mul(&m), m);
        assert_eq!(m.mul(&id), m);
        assert_eq!(id.det(), RationalFunction::one(&t));
    }
}
