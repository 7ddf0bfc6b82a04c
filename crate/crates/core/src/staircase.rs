//! Monomial staircases: upward-closed sets of exponent vectors given by an
//! antichain of minimal generators, with lattice-point counts and exact
//! volumes of their complements clipped by the corner simplex.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, Monomial};
use crate::rational::{binomial, factorial, Rational};

/// Inclusion–exclusion is used up to this many generators; beyond it the
/// counts fall back to direct enumeration.
pub const INCLUSION_EXCLUSION_MAX_GENS: usize = 20;

/// A monomial ideal in `nvars` variables, kept as its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialStaircase {
    nvars: usize,
    min_gens: Vec<Monomial>,
}

impl MonomialStaircase {
    /// Minimalizes `gens` and sorts them lexicographically.
    pub fn new(nvars: usize, gens: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut all: Vec<Monomial> = Vec::new();
        for g in gens {
            if g.nvars() != nvars {
                return Err(Error::Dimension {
                    expected: nvars,
                    found: g.nvars(),
                });
            }
            all.push(g);
        }
        all.sort_by_key(Monomial::degree);
        all.dedup();
        let mut min_gens: Vec<Monomial> = Vec::new();
        for g in all {
            if !min_gens.iter().any(|h| h.divides(&g)) {
                min_gens.push(g);
            }
        }
        min_gens.sort();
        Ok(MonomialStaircase { nvars, min_gens })
    }

    pub fn from_exponents(nvars: usize, gens: &[Vec<u32>]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|e| Monomial::new(e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nvars, gens)
    }

    /// The zero ideal: no generators, nothing is a member.
    pub fn zero_ideal(nvars: usize) -> Self {
        MonomialStaircase {
            nvars,
            min_gens: Vec::new(),
        }
    }

    /// The unit ideal: everything is a member.
    pub fn unit_ideal(nvars: usize) -> Self {
        MonomialStaircase {
            nvars,
            min_gens: vec![Monomial::one(nvars)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.min_gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.min_gens.is_empty()
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.min_gens.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// `α` lies in the staircase iff some generator is componentwise ≤ `α`.
    pub fn contains(&self, alpha: &Monomial) -> bool {
        debug_assert_eq!(alpha.nvars(), self.nvars);
        self.min_gens.iter().any(|g| g.divides(alpha))
    }

    pub fn checked_contains(&self, alpha: &Monomial) -> Result<bool> {
        if alpha.nvars() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: alpha.nvars(),
            });
        }
        Ok(self.contains(alpha))
    }

    /// Appends one free variable (generators get exponent 0 there).
    pub fn lift(&self) -> Self {
        MonomialStaircase {
            nvars: self.nvars + 1,
            min_gens: self.min_gens.iter().map(|g| g.push(0)).collect(),
        }
    }

    /// Signed lcm-degree multiset of the inclusion–exclusion expansion,
    /// truncated to lcm degrees ≤ `max_degree`.
    ///
    /// Subsets with equal lcm are merged, so the map stays small.
    fn lcm_expansion(&self, max_degree: u64) -> HashMap<Monomial, BigInt> {
        let mut terms: HashMap<Monomial, BigInt> = HashMap::new();
        terms.insert(Monomial::one(self.nvars), BigInt::from(1));
        for g in &self.min_gens {
            let mut add: Vec<(Monomial, BigInt)> = Vec::new();
            for (l, c) in &terms {
                let joined = l.lcm(g);
                if joined.degree() as u64 <= max_degree {
                    add.push((joined, -c.clone()));
                }
            }
            for (l, c) in add {
                let e = terms.entry(l).or_insert_with(BigInt::zero);
                *e += c;
            }
            terms.retain(|_, c| !c.is_zero());
        }
        terms
    }

    /// `#{α ∈ ℤⁿ_{≥0} : α ∉ s, Σα ≤ bound}`.
    pub fn count_gamma(&self, bound: u64) -> BigUint {
        if self.min_gens.len() > INCLUSION_EXCLUSION_MAX_GENS {
            return self.count_gamma_enumerate(bound);
        }
        let n = self.nvars as u64;
        let total: BigInt = self
            .lcm_expansion(bound)
            .into_iter()
            .map(|(l, c)| c * BigInt::from(binomial(bound - l.degree() as u64 + n, n)))
            .sum();
        total.to_biguint().expect("negative lattice count")
    }

    /// Same count as [`count_gamma`](Self::count_gamma) by degree-sliced enumeration.
    pub fn count_gamma_enumerate(&self, bound: u64) -> BigUint {
        (0..=bound).map(|d| self.slice_enumerate(d)).sum()
    }

    fn slice_enumerate(&self, d: u64) -> BigUint {
        let d = u32::try_from(d).expect("degree out of range");
        BigUint::from(
            monomials_of_degree(self.nvars, d)
                .iter()
                .filter(|a| !self.contains(a))
                .count(),
        )
    }

    /// Number of standard monomials of degree exactly `d` in the staircase's
    /// own variables: the Hilbert function of the monomial ideal it spans.
    pub fn degree_slice_count(&self, d: u64) -> BigUint {
        if self.nvars == 0 {
            return BigUint::from(u32::from(d == 0 && self.min_gens.is_empty()));
        }
        if self.min_gens.len() > INCLUSION_EXCLUSION_MAX_GENS {
            return self.slice_enumerate(d);
        }
        let k = self.nvars as u64 - 1;
        let total: BigInt = self
            .lcm_expansion(d)
            .into_iter()
            .map(|(l, c)| c * BigInt::from(binomial(d - l.degree() as u64 + k, k)))
            .sum();
        total.to_biguint().expect("negative lattice count")
    }

    /// Hilbert function in degree `d` of the homogeneous ideal in `n+1`
    /// variables whose dehomogenized staircase this is, computed as the
    /// cumulative count `#{α ∉ s, Σα ≤ d}`.
    ///
    /// Debug builds also evaluate the degree-`d` slice in `n+1` variables and
    /// assert that both agree.
    pub fn hilbert_function(&self, d: u64) -> BigUint {
        let cumulative = self.count_gamma(d);
        debug_assert_eq!(cumulative, self.hilbert_function_slice(d));
        cumulative
    }

    /// Degree-`d` monomials in `n+1` variables whose first `n` exponents lie
    /// outside the staircase.
    pub fn hilbert_function_slice(&self, d: u64) -> BigUint {
        self.lift().degree_slice_count(d)
    }

    /// Exact volume of `(ℝⁿ_{≥0} \ s) ∩ {Σx ≤ bound}` by inclusion–exclusion
    /// over the translated orthants `lcm + ℝⁿ_{≥0}`.
    pub fn complement_volume(&self, bound: &Rational) -> Rational {
        if bound.is_negative() {
            return Rational::zero();
        }
        if self.min_gens.len() > INCLUSION_EXCLUSION_MAX_GENS {
            return self.complement_volume_cubes(bound);
        }
        let n = self.nvars as u32;
        let cap = bound.floor().to_integer().to_u64().expect("bound out of range");
        let sum: Rational = self
            .lcm_expansion(cap)
            .into_iter()
            .map(|(l, c)| {
                let side = bound - Rational::from_integer(l.degree().into());
                Rational::from_integer(c) * crate::rational::pow(&side, n)
            })
            .sum();
        sum / Rational::from_integer(factorial(n).into())
    }

    /// Same volume via the unit-cube decomposition of the complement: the
    /// complement is the disjoint union of `α + [0,1)ⁿ` over lattice points
    /// `α ∉ s`, and each cube is clipped by the simplex exactly.
    pub fn complement_volume_cubes(&self, bound: &Rational) -> Rational {
        if bound.is_negative() {
            return Rational::zero();
        }
        let n = self.nvars as u32;
        let cap = bound.floor().to_integer().to_u32().expect("bound out of range");
        let mut total = Rational::zero();
        for d in 0..=cap {
            let outside = monomials_of_degree(self.nvars, d)
                .iter()
                .filter(|a| !self.contains(a))
                .count();
            if outside > 0 {
                total += clipped_cube_volume(n, &(bound - Rational::from_integer(d.into())))
                    * Rational::from_integer(outside.into());
            }
        }
        total
    }

    /// Checks `k·α ∈ s_kp` for every minimal generator `α` of `self`.
    pub fn scale_subset(&self, s_kp: &MonomialStaircase, k: u32) -> ContainmentReport {
        let mut report = ContainmentReport::default();
        for g in &self.min_gens {
            report.checked += 1;
            let scaled = g.pow(k);
            if !s_kp.contains(&scaled) {
                report.counterexample = Some(scaled);
                return report.failed();
            }
        }
        report.passed()
    }

    /// Checks `α + β ∈ s_pq` for all generator pairs of `self` and `s_q`.
    pub fn minkowski_subset(
        &self,
        s_q: &MonomialStaircase,
        s_pq: &MonomialStaircase,
    ) -> ContainmentReport {
        let mut report = ContainmentReport::default();
        for a in &self.min_gens {
            for b in &s_q.min_gens {
                report.checked += 1;
                let sum = a.mul(b);
                if !s_pq.contains(&sum) {
                    report.counterexample = Some(sum);
                    return report.failed();
                }
            }
        }
        report.passed()
    }

    pub fn to_json(&self) -> StaircaseJson {
        StaircaseJson {
            nvars: self.nvars,
            generators: self
                .min_gens
                .iter()
                .map(|g| g.exponents().to_vec())
                .collect(),
        }
    }

    pub fn from_json(json: &StaircaseJson) -> Result<Self> {
        if json.generators.iter().any(|g| g.len() != json.nvars) {
            return Err(Error::Parse("generator length differs from nvars".into()));
        }
        Self::from_exponents(json.nvars, &json.generators)
    }
}

/// `vol((c + [0,1]ⁿ) ∩ {Σx ≤ |c| + s})` for an `n`-cube whose corner sits
/// at slack `s` below the bounding hyperplane.
pub fn clipped_cube_volume(n: u32, slack: &Rational) -> Rational {
    if slack.is_negative() || slack.is_zero() {
        return Rational::zero();
    }
    if *slack >= Rational::from_integer(n.into()) {
        return Rational::from_integer(1.into());
    }
    let mut total = Rational::zero();
    for k in 0..=n {
        let side = slack - Rational::from_integer(k.into());
        if !side.is_positive() {
            break;
        }
        let term = Rational::from_integer(binomial(n as u64, k as u64).into())
            * crate::rational::pow(&side, n);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total / Rational::from_integer(factorial(n).into())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContainmentReport {
    pub holds: bool,
    pub checked: usize,
    pub counterexample: Option<Monomial>,
}

impl ContainmentReport {
    fn passed(mut self) -> Self {
        self.holds = true;
        self
    }

    fn failed(mut self) -> Self {
        self.holds = false;
        self
    }
}

/// File form of a staircase; generators in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseJson {
    pub nvars: usize,
    pub generators: Vec<Vec<u32>>,
}

/// Lattice–volume error bound `(n+2)·C(⌊b⌋+n, n−1)` for a simplex cut at `b`.
pub fn lattice_volume_bound(n: usize, bound: u64) -> BigUint {
    let n64 = n as u64;
    BigUint::from(n64 + 2) * binomial(bound + n64, n64.saturating_sub(1))
}
