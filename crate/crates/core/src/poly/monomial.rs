use std::fmt;

use crate::error::{Error, Result};

/// Upper bound on the number of variables a monomial can carry.
///
/// Projective dimension up to 6 plus the homogenizing variable and one
/// auxiliary elimination variable.
pub const MAX_VARS: usize = 8;

/// An exponent vector `α ∈ ℤ^k_{≥0}`, stored inline.
///
/// The derived `Ord` is lexicographic on the exponents and is only used as a
/// canonical storage order; monomial orders live in [`MonomialOrder`].
///
/// [`MonomialOrder`]: super::MonomialOrder
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: [u32; MAX_VARS],
    nvars: u8,
}

/// Exponent vectors and monomials share one representation.
pub type ExponentVector = Monomial;

impl Monomial {
    pub fn new(exponents: &[u32]) -> Result<Self> {
        if exponents.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exponents.len()));
        }
        let mut exps = [0; MAX_VARS];
        exps[..exponents.len()].copy_from_slice(exponents);
        Ok(Monomial {
            exps,
            nvars: exponents.len() as u8,
        })
    }

    /// Builds from a slice known to fit; panics otherwise.
    pub fn from_slice(exponents: &[u32]) -> Self {
        Self::new(exponents).expect("monomial has too many variables")
    }

    pub fn one(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Monomial {
            exps: [0; MAX_VARS],
            nvars: nvars as u8,
        }
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.exps[..self.nvars as usize]
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Dimension {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        Ok(())
    }

    /// Componentwise `self ≤ other`, i.e. `x^self` divides `x^other`.
    #[inline]
    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    #[inline]
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(&other.exps) {
            *a += b;
        }
        out
    }

    /// `self / other` when `other` divides `self`.
    #[inline]
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(&other.exps) {
            *a -= b;
        }
        Some(out)
    }

    #[inline]
    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(&other.exps) {
            *a = (*a).max(*b);
        }
        out
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(&other.exps) {
            *a = (*a).min(*b);
        }
        out
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = *self;
        for a in out.exps.iter_mut() {
            *a *= k;
        }
        out
    }

    /// Drops the last coordinate.
    pub fn drop_last(&self) -> Self {
        assert!(self.nvars > 0);
        let mut out = *self;
        out.nvars -= 1;
        out.exps[out.nvars as usize] = 0;
        out
    }

    /// Appends a coordinate with the given exponent.
    pub fn push(&self, e: u32) -> Self {
        assert!(self.nvars() < MAX_VARS, "too many variables");
        let mut out = *self;
        out.exps[out.nvars as usize] = e;
        out.nvars += 1;
        out
    }

    /// Inserts `k` zero coordinates at the front.
    pub fn shift_right(&self, k: usize) -> Self {
        assert!(self.nvars() + k <= MAX_VARS, "too many variables");
        let mut out = Self::one(self.nvars() + k);
        out.exps[k..k + self.nvars()].copy_from_slice(self.exponents());
        out
    }

    /// Removes the first `k` coordinates, which must be zero.
    pub fn shift_left(&self, k: usize) -> Option<Self> {
        if self.exps[..k].iter().any(|&e| e != 0) {
            return None;
        }
        let mut out = Self::one(self.nvars() - k);
        out.exps[..self.nvars() - k].copy_from_slice(&self.exps[k..self.nvars()]);
        Some(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents())
    }
}

/// All monomials of total degree `d` in `nvars` variables, in lexicographic order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left;
            out.push(Monomial::from_slice(cur));
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}
