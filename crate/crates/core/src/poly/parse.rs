//! Text format: sums of terms `c*x1^a1*...*xk^ak`.

use num_traits::One;

use super::{Monomial, Polynomial, MAX_VARS};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

impl Polynomial {
    /// Parses the canonical text format in `nvars` variables.
    ///
    /// Coefficients are integers or `p/q`; factors are joined by `*`, and
    /// variables are written `x1 … xk` with optional `^e`.
    pub fn parse(s: &str, nvars: usize) -> Result<Polynomial> {
        if nvars > MAX_VARS {
            return Err(Error::TooManyVariables(nvars));
        }
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = Polynomial::zero(nvars);
        for (sign, body) in split_terms(&src)? {
            let (m, c) = parse_term(body, nvars)?;
            out.add_term(m, if sign { -c } else { c });
        }
        Ok(out)
    }
}

/// Splits on top-level `+`/`-`, returning (negated, term text).
fn split_terms(src: &str) -> Result<Vec<(bool, &str)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let mut i = 0;
    if matches!(bytes.first(), Some(b'+') | Some(b'-')) {
        neg = bytes[0] == b'-';
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        let b = bytes[i];
        // a sign directly after `^`, `*` or `/` belongs to the factor
        if (b == b'+' || b == b'-') && i > start && !matches!(bytes[i - 1], b'^' | b'*' | b'/') {
            out.push((neg, &src[start..i]));
            neg = b == b'-';
            start = i + 1;
        }
        i += 1;
    }
    out.push((neg, &src[start..]));
    if out.iter().any(|(_, t)| t.is_empty()) {
        return Err(Error::Parse(format!("empty term in {src:?}")));
    }
    Ok(out)
}

fn parse_term(body: &str, nvars: usize) -> Result<(Monomial, Rational)> {
    let mut coeff = Rational::one();
    let mut exps = vec![0u32; nvars];
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in {body:?}")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e),
                None => (rest, "1"),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
            let exp: u32 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
            if idx == 0 || idx > nvars {
                return Err(Error::Parse(format!(
                    "variable x{idx} out of range 1..={nvars}"
                )));
            }
            exps[idx - 1] += exp;
        } else {
            coeff *= parse_rational(factor)?;
        }
    }
    Ok((Monomial::new(&exps)?, coeff))
}
