//! Parser for vector specs such as `x:-+ + 2*x:+-`, `-1/2*y:+- - y:-+` or `0`.
//!
//! Terms are separated by a whitespace-delimited `+` or `-`. Each term is
//! `[coeff*]b:word` with `b ∈ {x, y}`; a leading `-` on the first term negates it.

use mvbasis::exactalg::parse_scalar;
use mvbasis::{BasisTag, Error, Result, Scalar, Word};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct SpecTerm {
    pub coeff: Scalar,
    pub basis: BasisTag,
    pub word: Word,
}

fn parse_term(token: &str, sign: Scalar) -> Result<Option<SpecTerm>> {
    let (sign, body) = match token.strip_prefix('-') {
        Some(rest) if !rest.starts_with(':') => (-sign, rest),
        _ => (sign, token),
    };
    if body == "0" {
        return Ok(None);
    }
    let (coeff, basis_word) = match body.split_once('*') {
        Some((c, rest)) => (parse_scalar(c)?, rest),
        None => (Scalar::one(), body),
    };
    let (tag, word) = basis_word
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("term {token:?} lacks a basis prefix such as \"x:\"")))?;
    let basis = match tag {
        "x" => BasisTag::X,
        "y" => BasisTag::Y,
        _ => return Err(Error::Parse(format!("unknown basis {tag:?} in term {token:?}"))),
    };
    Ok(Some(SpecTerm { coeff: sign * coeff, basis, word: word.parse()? }))
}

/// Parses a spec into its nonzero terms, in input order.
pub fn parse_spec(spec: &str) -> Result<Vec<SpecTerm>> {
    let mut tokens = spec.split_whitespace();
    let first = tokens.next().ok_or_else(|| Error::Parse("empty vector spec".into()))?;
    let mut terms: Vec<SpecTerm> = parse_term(first, Scalar::one())?.into_iter().collect();
    while let Some(op) = tokens.next() {
        let sign = match op {
            "+" => Scalar::one(),
            "-" => -Scalar::one(),
            _ => return Err(Error::Parse(format!("expected '+' or '-' between terms, found {op:?}"))),
        };
        let token = tokens.next().ok_or_else(|| Error::Parse(format!("dangling {op:?} at end of spec")))?;
        terms.extend(parse_term(token, sign)?);
    }
    terms.retain(|t| !t.coeff.is_zero());
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mvbasis::exactalg::{ratio, scalar};

    #[test]
    fn parses_sums() {
        let t = parse_spec("x:-+ + 2*x:+-").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].coeff, scalar(2));
        assert_eq!(t[1].word, "+-".parse().unwrap());
        let t = parse_spec("-1/2*y:+- - y:-+").unwrap();
        assert_eq!(t[0].coeff, ratio(-1, 2));
        assert_eq!((t[1].coeff.clone(), t[1].basis), (scalar(-1), BasisTag::Y));
        assert_eq!(parse_spec("-x:+").unwrap()[0].coeff, scalar(-1));
    }

    #[test]
    fn zero_and_errors() {
        assert!(parse_spec("0").unwrap().is_empty());
        assert!(parse_spec("0*x:+-").unwrap().is_empty());
        assert!(parse_spec("").is_err());
        assert!(parse_spec("z:+-").is_err());
        assert!(parse_spec("x:+a").is_err());
        assert!(parse_spec("x:+ +").is_err());
        assert!(parse_spec("x:+ * x:-").is_err());
        assert!(parse_spec("+-").is_err());
    }
}
