use num_bigint::BigUint;

use super::buchberger::{buchberger, reduce_full, GbConfig, IntPoly};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{monomials_of_degree, Monomial, MonomialOrder, Polynomial};
use crate::rational::Rational;
use crate::staircase::MonomialStaircase;

/// A homogeneous ideal given by a nonempty list of nonzero generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(generators: Vec<Polynomial>) -> Result<Self> {
        let nvars = generators
            .first()
            .ok_or_else(|| Error::Precondition("an ideal needs at least one generator".into()))?
            .nvars();
        for g in &generators {
            if g.nvars() != nvars {
                return Err(Error::Dimension {
                    expected: nvars,
                    found: g.nvars(),
                });
            }
            if g.is_zero() {
                return Err(Error::Precondition("zero generator".into()));
            }
            if !g.is_homogeneous() {
                return Err(Error::Precondition(format!("generator {g} is not homogeneous")));
            }
        }
        Ok(Ideal { nvars, generators })
    }

    pub fn parse(gens: &[&str], nvars: usize) -> Result<Self> {
        Self::new(
            gens.iter()
                .map(|s| Polynomial::parse(s, nvars))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Monomial ideal spanned by `gens`.
    pub fn monomial(nvars: usize, gens: &[Monomial]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::Dimension {
                expected: nvars,
                found: g.nvars(),
            });
        }
        Self::new(gens.iter().map(|m| Polynomial::monomial(*m)).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn groebner_basis(&self, ord: MonomialOrder, cfg: &GbConfig) -> Result<GroebnerBasis> {
        groebner_basis(self, ord, cfg)
    }

    /// Applies `x_i ↦ Σ_j M[i][j]·x_j` to every generator.
    pub fn linear_substitute(&self, m: &RatMatrix) -> Result<Ideal> {
        let first = self.generators[0].linear_substitute(m)?;
        let mut gens = vec![first];
        for g in &self.generators[1..] {
            gens.push(g.substitute_forms_unchecked(m));
        }
        Ideal::new(gens)
    }

    /// All products of `k` generators (with repetition).
    pub fn power(&self, k: u32) -> Ideal {
        assert!(k >= 1, "power must be positive");
        let mut out: Vec<Polynomial> = Vec::new();
        fn rec(
            gens: &[Polynomial],
            start: usize,
            left: u32,
            acc: Polynomial,
            out: &mut Vec<Polynomial>,
        ) {
            if left == 0 {
                out.push(acc);
                return;
            }
            for i in start..gens.len() {
                rec(gens, i, left - 1, &acc * &gens[i], out);
            }
        }
        rec(&self.generators, 0, k, Polynomial::one(self.nvars), &mut out);
        out.retain(|p| !p.is_zero());
        Ideal::new(out).expect("power of a nonzero ideal")
    }

    /// Product ideal.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = Vec::new();
        for f in &self.generators {
            for g in &other.generators {
                gens.push(f.checked_mul(g)?);
            }
        }
        Ideal::new(gens)
    }

    /// Degree-`d` Hilbert function from exact linear algebra: `dim R_d`
    /// minus the rank of all degree-`d` multiples of the generators.
    pub fn hilbert_function_by_rank(&self, d: u32) -> BigUint {
        let basis = monomials_of_degree(self.nvars, d);
        let index: std::collections::HashMap<Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for g in &self.generators {
            let gd = g.degree().unwrap_or(0);
            if gd > d {
                continue;
            }
            for mult in monomials_of_degree(self.nvars, d - gd) {
                let mut row = vec![Rational::from_integer(0.into()); basis.len()];
                for (m, c) in g.terms() {
                    row[index[&m.mul(&mult)]] = c.clone();
                }
                rows.push(row);
            }
        }
        let rank = if rows.is_empty() {
            0
        } else {
            RatMatrix::from_rows(rows).expect("rectangular").rank()
        };
        BigUint::from(basis.len() - rank)
    }
}

/// A reduced Gröbner basis with monic elements, sorted by leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    basis: Vec<Polynomial>,
}

pub fn groebner_basis(ideal: &Ideal, ord: MonomialOrder, cfg: &GbConfig) -> Result<GroebnerBasis> {
    GroebnerBasis::from_generators(ideal.nvars(), ideal.generators(), ord, cfg)
}

impl GroebnerBasis {
    /// Works for arbitrary (not necessarily homogeneous) generators.
    pub fn from_generators(
        nvars: usize,
        gens: &[Polynomial],
        ord: MonomialOrder,
        cfg: &GbConfig,
    ) -> Result<Self> {
        if gens.iter().any(|g| g.nvars() != nvars) {
            return Err(Error::Dimension {
                expected: nvars,
                found: gens.iter().find(|g| g.nvars() != nvars).unwrap().nvars(),
            });
        }
        let mut basis = buchberger(nvars, gens, ord, cfg)?;
        basis.sort_by(|a, b| {
            ord.cmp(
                &a.leading_monomial(ord).unwrap(),
                &b.leading_monomial(ord).unwrap(),
            )
        });
        Ok(GroebnerBasis { nvars, order: ord, basis })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    fn int_basis(&self) -> Vec<IntPoly> {
        self.basis
            .iter()
            .map(|g| IntPoly::from_poly(g, self.order).0)
            .collect()
    }

    /// Normal form of `f` modulo the basis.
    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.nvars() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: f.nvars(),
            });
        }
        if f.is_zero() {
            return Ok(f.clone());
        }
        let ib = self.int_basis();
        let refs: Vec<&IntPoly> = ib.iter().collect();
        let (fi, kf) = IntPoly::from_poly(f, self.order);
        let (r, k) = reduce_full(&fi, &refs, self.order);
        Ok(r.to_poly(self.nvars).scale(&(kf / k)))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// Minimal generators of the leading-term ideal.
    pub fn initial_ideal(&self) -> Vec<Monomial> {
        initial_ideal(self)
    }

    pub fn initial_staircase(&self) -> MonomialStaircase {
        MonomialStaircase::new(self.nvars, self.initial_ideal()).expect("consistent arity")
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let ib = self.int_basis();
        let refs: Vec<&IntPoly> = ib.iter().collect();
        for i in 0..ib.len() {
            for j in i + 1..ib.len() {
                let l = ib[i].lm().lcm(ib[j].lm());
                let a = self.basis[i].mul_monomial(&l.checked_div(ib[i].lm()).unwrap());
                let b = self.basis[j].mul_monomial(&l.checked_div(ib[j].lm()).unwrap());
                let s = &a - &b;
                if s.is_zero() {
                    continue;
                }
                let (si, _) = IntPoly::from_poly(&s, self.order);
                if !reduce_full(&si, &refs, self.order).0.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// No leading monomial divides another, elements are monic, and no
    /// trailing term is divisible by a leading monomial.
    pub fn is_reduced(&self) -> bool {
        let ord = self.order;
        let lms: Vec<Monomial> = self
            .basis
            .iter()
            .map(|g| g.leading_monomial(ord).unwrap())
            .collect();
        for (i, g) in self.basis.iter().enumerate() {
            let (lm, lc) = g.leading_term(ord).unwrap();
            if !num_traits::One::is_one(lc) {
                return false;
            }
            for m in g.monomials() {
                for (j, l) in lms.iter().enumerate() {
                    let tail = *m != lm;
                    if (tail || i != j) && l.divides(m) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn initial_ideal(gb: &GroebnerBasis) -> Vec<Monomial> {
    let lms: Vec<Monomial> = gb
        .basis
        .iter()
        .filter_map(|g| g.leading_monomial(gb.order))
        .collect();
    MonomialStaircase::new(gb.nvars, lms)
        .expect("consistent arity")
        .generators()
        .to_vec()
}

impl Ideal {
    /// `self ⊆ other`, decided by division against a Gröbner basis of `other`.
    pub fn is_subset_of(&self, other: &Ideal, cfg: &GbConfig) -> Result<bool> {
        let gb = other.groebner_basis(MonomialOrder::DegRevLex, cfg)?;
        for g in &self.generators {
            if !gb.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality by mutual generator membership.
    pub fn equals(&self, other: &Ideal, cfg: &GbConfig) -> Result<bool> {
        Ok(self.is_subset_of(other, cfg)? && other.is_subset_of(self, cfg)?)
    }
}
