//! Multivariate gcd over ℚ by content/primitive-part recursion and a
//! primitive pseudo-remainder sequence, short-circuited by a modular
//! coprimality certificate.

use super::modp::{evaluation_point, univariate_gcd_degree, univariate_image};
use super::poly::Poly;

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.vars());
    }
    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let m: Vec<u16> = ma.iter().zip(mb.iter()).map(|(&x, &y)| x.min(y)).collect();
    let g = gcd_free(&a.unshifted(&ma), &b.unshifted(&mb));
    g.shifted(&m).monic()
}

/// Gcd of polynomials without monomial factors.
fn gcd_free(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.vars());
    }
    if a.num_terms() <= b.num_terms() {
        if a.divides(b) {
            return a.monic();
        }
    } else if b.divides(a) {
        return b.monic();
    }
    let va = a.support_vars();
    let vb = b.support_vars();
    if certified_coprime(a, b, &va, &vb) {
        return Poly::one(a.vars());
    }
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return fold_gcd(b.clone(), a.coefficients_in(v));
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return fold_gcd(a.clone(), b.coefficients_in(v));
    }
    let v = *va.iter().min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v)).expect("nonconstant");
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, v);
    (&c * &g).monic()
}

fn fold_gcd(start: Poly, coeffs: Vec<Poly>) -> Poly {
    let mut g = start;
    let mut coeffs = coeffs;
    coeffs.sort_by_key(|c| c.num_terms());
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    g.monic()
}

/// Gcd of the coefficients of `p` as a polynomial in `var`.
pub fn content_in(p: &Poly, var: usize) -> Poly {
    let coeffs: Vec<Poly> = p.coefficients_in(var).into_iter().filter(|c| !c.is_zero()).collect();
    match coeffs.split_first() {
        None => Poly::zero(p.vars()),
        Some((first, rest)) => fold_gcd(first.clone(), rest.to_vec()),
    }
}

pub fn primitive_part(p: &Poly, var: usize) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    p.exact_div(&content_in(p, var)).expect("content divides").monic()
}

/// Pseudo-remainder of `f` by `g` in `var`, scaling by the leading
/// coefficient of `g` only as needed.
pub fn pseudo_remainder(f: &Poly, g: &Poly, var: usize) -> Poly {
    let dg = g.degree_in(var);
    let lc_g = g.coefficient_of(var, dg);
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(var) >= dg {
        let dr = r.degree_in(var);
        let lc_r = r.coefficient_of(var, dr);
        let mut shift = vec![0u16; f.vars().len()];
        shift[var] = dr - dg;
        r = &(&lc_g * &r) - &(&lc_r * &g.shifted(&shift));
    }
    r
}

fn primitive_prs(a: Poly, b: Poly, var: usize) -> Poly {
    let (mut f, mut g) = if a.degree_in(var) >= b.degree_in(var) { (a, b) } else { (b, a) };
    loop {
        let r = pseudo_remainder(&f, &g, var);
        if r.is_zero() {
            return primitive_part(&g, var);
        }
        if r.degree_in(var) == 0 {
            return Poly::one(g.vars());
        }
        f = g;
        g = primitive_part(&r, var);
    }
}

/// A sufficient condition for `gcd(a, b) = 1`. A common factor `h` involves
/// some variable `v` shared by `a` and `b`; reducing mod a prime and
/// evaluating the other variables keeps `deg_v h` whenever the leading
/// coefficient of `a` in `v` survives, so a constant image gcd for every
/// shared `v` rules `h` out.
fn certified_coprime(a: &Poly, b: &Poly, va: &[usize], vb: &[usize]) -> bool {
    let point = evaluation_point(a.vars().len());
    va.iter().filter(|v| vb.contains(v)).all(|&v| {
        let (Some(fa), Some(fb)) = (univariate_image(a, v, &point), univariate_image(b, v, &point)) else {
            return false;
        };
        if fa.last() == Some(&0) || fb.last() == Some(&0) {
            return false;
        }
        univariate_gcd_degree(fa, fb) == Some(0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar;
    use crate::symbolic::poly::VarTable;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn t() -> Arc<VarTable> {
        VarTable::new(["z", "x", "a"]).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let t = t();
        let z = Poly::var(&t, "z").unwrap();
        let x = Poly::var(&t, "x").unwrap();
        let a = Poly::var(&t, "a").unwrap();
        let f = &(&z - &x) * &(&a + &x);
        let g = &(&z - &x) * &(&a - &x);
        assert_eq!(gcd(&f, &g), &z - &x);
        assert_eq!(gcd(&x, &a), Poly::one(&t));
        assert_eq!(gcd(&(&x * &a), &x.pow(2)), x);
        assert_eq!(gcd(&Poly::zero(&t), &a.scaled(&scalar(3))), a);
        assert_eq!(gcd(&Poly::constant(&t, scalar(4)), &a), Poly::one(&t));
    }

    #[test]
    fn gcd_with_one_sided_variable() {
        let t = t();
        let z = Poly::var(&t, "z").unwrap();
        let x = Poly::var(&t, "x").unwrap();
        let a = Poly::var(&t, "a").unwrap();
        let f = &(&x + &a) * &(&z.pow(2) + &x);
        let g = &(&x + &a) * &(&x - &a);
        assert_eq!(gcd(&f, &g), &x + &a);
    }

    fn arb_factor(t: Arc<VarTable>) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u16..3, 3), -3i64..4), 1..4)
            .prop_map(move |ts| Poly::from_terms(&t, ts.into_iter().map(|(e, c)| (e.into_iter().collect(), scalar(c)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn gcd_divides_and_contains_common_factor(
            f in arb_factor(t()), g in arb_factor(t()), h in arb_factor(t())
        ) {
            prop_assume!(!h.is_zero() && !(&f * &h).is_zero() && !(&g * &h).is_zero());
            let a = &f * &h;
            let b = &g * &h;
            let d = gcd(&a, &b);
            prop_assert!(d.divides(&a));
            prop_assert!(d.divides(&b));
            prop_assert!(h.divides(&d));
        }
    }
}
