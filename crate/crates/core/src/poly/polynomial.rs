use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, MonomialOrder};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::{common_denominator, format_rational, Rational};

/// A polynomial with exact rational coefficients.
///
/// Terms are stored in an order-agnostic map; monomial orders are applied
/// when a leading term or a sorted view is requested.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i))
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear_form(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            n,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }

    /// Sums up the given terms, dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "term has the wrong number of variables");
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Maximal total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn leading_term(&self, ord: MonomialOrder) -> Option<(Monomial, &Rational)> {
        let mut it = self.terms.iter();
        let (mut best, mut coeff) = it.next()?;
        for (m, c) in it {
            if ord.cmp(m, best).is_gt() {
                best = m;
                coeff = c;
            }
        }
        Some((*best, coeff))
    }

    pub fn leading_monomial(&self, ord: MonomialOrder) -> Option<Monomial> {
        self.leading_term(ord).map(|(m, _)| m)
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: MonomialOrder) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, ord: MonomialOrder) -> Self {
        match self.leading_term(ord) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    v *= crate::rational::pow(x, e);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// `∂/∂x_{i+1}`.
    pub fn partial_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let lowered = m.checked_div(&Monomial::var(self.nvars, i)).unwrap();
            out.add_term(lowered, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Replaces each `x_i` by `Σ_j M[i][j]·x_j`.
    ///
    /// Composition: substituting `M1` and then `M2` is the same as
    /// substituting the product `M1·M2`.
    pub fn linear_substitute(&self, m: &RatMatrix) -> Result<Self> {
        if m.nrows() != self.nvars || m.ncols() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: m.nrows(),
            });
        }
        if m.determinant()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.substitute_forms_unchecked(m))
    }

    pub(crate) fn substitute_forms_unchecked(&self, m: &RatMatrix) -> Self {
        let n = self.nvars;
        if self.is_zero() {
            return self.clone();
        }
        // x_i ↦ row_i / den_i with integer rows
        let mut dens: Vec<BigInt> = Vec::with_capacity(n);
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let den = common_denominator(m.row(i));
            rows.push(
                m.row(i)
                    .iter()
                    .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
                    .collect(),
            );
            dens.push(den);
        }
        // f = (1/D) Σ c'_α x^α with c'_α = c_α·D / Π den_i^{α_i} integral
        let scale_of = |mono: &Monomial| -> BigInt {
            mono.exponents()
                .iter()
                .zip(&dens)
                .map(|(&e, d)| num_traits::pow(d.clone(), e as usize))
                .product()
        };
        let big_d = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (mono, c)| acc.lcm(&(c.denom() * scale_of(mono))));
        let mut memo: HashMap<Monomial, HashMap<Monomial, BigInt>> = HashMap::new();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (mono, c) in &self.terms {
            let coeff = (c * Rational::from_integer(big_d.clone())
                / Rational::from_integer(scale_of(mono)))
            .to_integer();
            let image = product_of_forms(mono, &rows, &mut memo);
            for (k, v) in image {
                *acc.entry(*k).or_insert_with(BigInt::zero) += &coeff * v;
            }
        }
        let big_d = Rational::from_integer(big_d);
        Polynomial::from_terms(
            n,
            acc.into_iter()
                .map(|(k, v)| (k, Rational::from_integer(v) / &big_d)),
        )
    }

    /// Re-indexes into `nvars + k` variables with `k` new leading variables.
    pub fn prepend_vars(&self, k: usize) -> Self {
        Polynomial {
            nvars: self.nvars + k,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.shift_right(k), c.clone()))
                .collect(),
        }
    }

    /// Drops the first `k` variables; `None` if any of them occurs.
    pub fn strip_leading_vars(&self, k: usize) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.shift_left(k)?, c.clone());
        }
        Some(Polynomial {
            nvars: self.nvars - k,
            terms,
        })
    }

    /// Canonical text form, terms in degrevlex-descending order.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

/// `Π_i (Σ_j rows[i][j] x_j)^{mono_i}`, memoized on the monomial.
fn product_of_forms<'a>(
    mono: &Monomial,
    rows: &[Vec<BigInt>],
    memo: &'a mut HashMap<Monomial, HashMap<Monomial, BigInt>>,
) -> &'a HashMap<Monomial, BigInt> {
    if !memo.contains_key(mono) {
        let n = mono.nvars();
        let value = match (0..n).find(|&i| mono.exponent(i) > 0) {
            None => HashMap::from([(Monomial::one(n), BigInt::one())]),
            Some(i) => {
                let x = Monomial::var(n, i);
                let parent = mono.checked_div(&x).unwrap();
                let base = product_of_forms(&parent, rows, memo).clone();
                let mut out: HashMap<Monomial, BigInt> = HashMap::with_capacity(base.len() * 2);
                for (k, v) in &base {
                    for (j, r) in rows[i].iter().enumerate() {
                        if r.is_zero() {
                            continue;
                        }
                        *out.entry(k.mul(&Monomial::var(n, j)))
                            .or_insert_with(BigInt::zero) += v * r;
                    }
                }
                out.retain(|_, v| !v.is_zero());
                out
            }
        };
        memo.insert(*mono, value);
    }
    &memo[mono]
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms(MonomialOrder::DegRevLex);
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({self})", self.nvars)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics on a variable-count mismatch.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomial variable counts differ")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
