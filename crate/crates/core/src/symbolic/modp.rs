//! Arithmetic modulo `2^61 − 1` and univariate images of polynomials,
//! used for cheap certificates about exact polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::poly::Poly;
use crate::exactalg::Scalar;

/// `2^61 − 1`.
pub(crate) const PRIME: u64 = (1 << 61) - 1;

fn reduce(x: u128) -> u64 {
    let folded = (x as u64 & PRIME) as u128 + (x >> 61);
    let folded = (folded as u64 & PRIME) + (folded >> 61) as u64;
    if folded >= PRIME {
        folded - PRIME
    } else {
        folded
    }
}

pub(crate) fn mul_mod(a: u64, b: u64) -> u64 {
    reduce(a as u128 * b as u128)
}

fn pow_mod(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

fn int_mod(n: &BigInt) -> u64 {
    match n.to_i64() {
        Some(k) => k.rem_euclid(PRIME as i64) as u64,
        None => n.mod_floor(&BigInt::from(PRIME)).to_u64().expect("reduced below the prime"),
    }
}

pub(crate) fn scalar_mod(c: &Scalar) -> Option<u64> {
    if c.is_integer() {
        return Some(int_mod(c.numer()));
    }
    let d = int_mod(c.denom());
    (d != 0).then(|| mul_mod(int_mod(c.numer()), inv_mod(d)))
}

/// Image of `p` in `F_p[var]` after evaluating every other variable at `point`.
pub(crate) fn univariate_image(p: &Poly, var: usize, point: &[u64]) -> Option<Vec<u64>> {
    let powers: Vec<Vec<u64>> = (0..point.len())
        .map(|i| {
            let top = if i == var { 0 } else { p.degree_in(i) as usize };
            std::iter::successors(Some(1u64), |&x| Some(mul_mod(x, point[i]))).take(top + 1).collect()
        })
        .collect();
    let mut out = vec![0u64; p.degree_in(var) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = scalar_mod(c)?;
        for (i, &e) in m.iter().enumerate() {
            if i != var && e > 0 {
                t = mul_mod(t, powers[i][e as usize]);
            }
        }
        let slot = &mut out[m[var] as usize];
        *slot = (*slot + t) % PRIME;
    }
    Some(out)
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the gcd of two univariate polynomials over `F_p`, `None` if both vanish.
pub(crate) fn univariate_gcd_degree(mut f: Vec<u64>, mut g: Vec<u64>) -> Option<usize> {
    trim(&mut f);
    trim(&mut g);
    loop {
        if g.is_empty() {
            return f.len().checked_sub(1);
        }
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        let inv = inv_mod(*g.last().expect("nonempty"));
        while f.len() >= g.len() {
            let q = mul_mod(*f.last().expect("nonempty"), inv);
            let shift = f.len() - g.len();
            for (i, &gi) in g.iter().enumerate() {
                f[shift + i] = (f[shift + i] + PRIME - mul_mod(q, gi)) % PRIME;
            }
            trim(&mut f);
            if f.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut f, &mut g);
    }
}

/// Fixed evaluation point for the variables other than the one kept.
pub(crate) fn evaluation_point(n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| 1_000_003 + 7919 * i * i + 104_729 * i).collect()
}

/// Remainder of `f` modulo `g` in `F_p[x]`; `g` must have a nonzero top coefficient.
fn univariate_rem(mut f: Vec<u64>, g: &[u64]) -> Vec<u64> {
    trim(&mut f);
    let inv = inv_mod(*g.last().expect("nonzero divisor"));
    while f.len() >= g.len() {
        let q = mul_mod(*f.last().expect("nonempty"), inv);
        let shift = f.len() - g.len();
        for (i, &gi) in g.iter().enumerate() {
            f[shift + i] = (f[shift + i] + PRIME - mul_mod(q, gi)) % PRIME;
        }
        trim(&mut f);
    }
    f
}

/// `true` only if `b ∤ a` is certain: with the other variables evaluated
/// mod `p`, a divisor's image divides the dividend's image whenever the
/// divisor's leading coefficient in `var` survives.
pub(crate) fn certainly_not_divisible(a: &Poly, b: &Poly, var: usize) -> bool {
    let point = evaluation_point(a.vars().len());
    match (univariate_image(a, var, &point), univariate_image(b, var, &point)) {
        (Some(fa), Some(fb)) => images_not_divisible(fa, &fb),
        _ => false,
    }
}

/// The image test behind [`certainly_not_divisible`]: `false` unless the
/// divisor image keeps its top coefficient and leaves a nonzero remainder.
pub(crate) fn images_not_divisible(fa: Vec<u64>, fb: &[u64]) -> bool {
    if fb.last().is_none_or(|&c| c == 0) {
        return false;
    }
    !univariate_rem(fa, fb).is_empty()
}
