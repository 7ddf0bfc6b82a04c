//! Buchberger's algorithm over ℚ with fraction-free integer arithmetic.
//!
//! Working polynomials are primitive integer polynomials with positive
//! leading coefficient, their terms sorted descending under the active
//! order. Pair handling follows Gebauer–Möller; pairs are selected by sugar
//! degree, ties broken by the smaller lcm.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Polynomial};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbConfig {
    /// Maximum number of S-pairs reduced before giving up.
    pub max_pairs: usize,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig { max_pairs: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly {
    pub terms: Vec<(Monomial, BigInt)>,
}

impl IntPoly {
    pub fn from_poly(p: &Polynomial, ord: MonomialOrder) -> (IntPoly, Rational) {
        let sorted = p.sorted_terms(ord);
        let den = crate::rational::common_denominator(sorted.iter().map(|(_, c)| c));
        let terms: Vec<(Monomial, BigInt)> = sorted
            .into_iter()
            .map(|(m, c)| (m, (c * Rational::from_integer(den.clone())).to_integer()))
            .collect();
        let mut ip = IntPoly { terms };
        // p · den = ip · content
        let content = ip.make_primitive();
        (ip, Rational::new(content, den))
    }

    pub fn to_poly(&self, nvars: usize) -> Polynomial {
        Polynomial::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|(m, c)| (*m, Rational::from_integer(c.clone()))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Divides by the content and makes the leading coefficient positive;
    /// returns the signed factor removed.
    pub fn make_primitive(&mut self) -> BigInt {
        if self.terms.is_empty() {
            return BigInt::one();
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in self.terms.iter_mut() {
                *c /= &g;
            }
        }
        g
    }
}

/// `a·f − b·(q·g)`, with `f` and `g` sorted descending; drops zero terms.
fn combine(
    a: &BigInt,
    f: &[(Monomial, BigInt)],
    b: &BigInt,
    q: &Monomial,
    g: &[(Monomial, BigInt)],
    ord: MonomialOrder,
) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < f.len() || j < g.len() {
        let gm = g.get(j).map(|(m, _)| m.mul(q));
        let step = match (f.get(i), &gm) {
            (Some((fm, _)), Some(gm)) => ord.cmp(fm, gm),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => unreachable!(),
        };
        match step {
            Ordering::Greater => {
                out.push((f[i].0, a * &f[i].1));
                i += 1;
            }
            Ordering::Less => {
                out.push((gm.unwrap(), -(b * &g[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = a * &f[i].1 - b * &g[j].1;
                if !c.is_zero() {
                    out.push((f[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Full reduction of `f` by `basis`.
///
/// Returns `(r, k)` with `r = k·NF(f)` for a nonzero rational `k`, where
/// `NF` is computed against `basis` with `f` given exactly (not primitive).
pub(crate) fn reduce_full(
    f: &IntPoly,
    basis: &[&IntPoly],
    ord: MonomialOrder,
) -> (IntPoly, Rational) {
    reduce(f, basis, ord, false)
}

/// Like [`reduce_full`] but stops once the leading term is irreducible.
pub(crate) fn reduce_top(
    f: &IntPoly,
    basis: &[&IntPoly],
    ord: MonomialOrder,
) -> (IntPoly, Rational) {
    reduce(f, basis, ord, true)
}

fn reduce(
    f: &IntPoly,
    basis: &[&IntPoly],
    ord: MonomialOrder,
    top_only: bool,
) -> (IntPoly, Rational) {
    let mut done: Vec<(Monomial, BigInt)> = Vec::new();
    let mut cur = f.terms.clone();
    // cur[pos..] is the part still to be reduced
    let mut pos = 0;
    let mut factor = Rational::one();
    let mut steps = 0usize;
    while pos < cur.len() {
        let m = cur[pos].0;
        let divisor = basis.iter().find(|g| g.lm().divides(&m));
        match divisor {
            None => {
                if top_only {
                    done.extend(cur.drain(pos..));
                    break;
                }
                done.push(cur[pos].clone());
                pos += 1;
            }
            Some(g) => {
                let c = &cur[pos].1;
                let q = m.checked_div(g.lm()).unwrap();
                let d = c.gcd(g.lc());
                let a = g.lc() / &d;
                let b = c / &d;
                cur = combine(&a, &cur[pos..], &b, &q, &g.terms, ord);
                pos = 0;
                if !a.is_one() {
                    for (_, x) in done.iter_mut() {
                        *x *= &a;
                    }
                    factor *= Rational::from_integer(a);
                }
                steps += 1;
                if steps.is_multiple_of(8) {
                    // keep coefficients small: divide out the common content
                    let mut g = BigInt::zero();
                    for (_, x) in done.iter().chain(cur.iter()) {
                        g = g.gcd(x);
                        if g.is_one() {
                            break;
                        }
                    }
                    if !g.is_zero() && !g.is_one() {
                        for (_, x) in done.iter_mut().chain(cur.iter_mut()) {
                            *x /= &g;
                        }
                        factor /= Rational::from_integer(g);
                    }
                }
            }
        }
    }
    let mut r = IntPoly { terms: done };
    if !r.is_zero() {
        let g = r.make_primitive();
        factor /= Rational::from_integer(g);
    }
    (r, factor)
}

fn s_polynomial(f: &IntPoly, g: &IntPoly, ord: MonomialOrder) -> IntPoly {
    let l = f.lm().lcm(g.lm());
    let qf = l.checked_div(f.lm()).unwrap();
    let qg = l.checked_div(g.lm()).unwrap();
    let d = f.lc().gcd(g.lc());
    let a = g.lc() / &d;
    let b = f.lc() / &d;
    let fs: Vec<(Monomial, BigInt)> = f.terms.iter().map(|(m, c)| (m.mul(&qf), c.clone())).collect();
    let mut terms = combine(&a, &fs, &b, &qg, &g.terms, ord);
    // the leading terms cancel by construction
    debug_assert!(terms.first().is_none_or(|(m, _)| ord.cmp(m, &l).is_lt()));
    terms.retain(|(_, c)| !c.is_zero());
    IntPoly { terms }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct State {
    ord: MonomialOrder,
    polys: Vec<IntPoly>,
    sugar: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl State {
    fn pair(&self, i: usize, j: usize) -> Pair {
        let (fi, fj) = (&self.polys[i], &self.polys[j]);
        let lcm = fi.lm().lcm(fj.lm());
        let d = lcm.degree();
        let si = self.sugar[i] + d - fi.lm().degree();
        let sj = self.sugar[j] + d - fj.lm().degree();
        Pair {
            i,
            j,
            lcm,
            sugar: si.max(sj),
        }
    }

    /// Gebauer–Möller update with the new element `h`.
    fn update(&mut self, h: usize) {
        let lm_h = *self.polys[h].lm();
        let candidates: Vec<Pair> = self.active.iter().map(|&g| self.pair(h, g)).collect();

        // chain criterion among the new pairs
        let mut kept: Vec<Pair> = Vec::new();
        for (idx, p) in candidates.iter().enumerate() {
            let lm_g = self.polys[p.j].lm();
            if lm_h.is_coprime(lm_g) {
                kept.push(p.clone());
                continue;
            }
            let dominated = candidates[idx + 1..]
                .iter()
                .chain(kept.iter())
                .any(|q| q.lcm != p.lcm && q.lcm.divides(&p.lcm));
            let duplicate = kept.iter().any(|q| q.lcm == p.lcm);
            if !dominated && !duplicate {
                kept.push(p.clone());
            }
        }
        // product criterion
        kept.retain(|p| !lm_h.is_coprime(self.polys[p.j].lm()));

        // prune old pairs made redundant by h
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !lm_h.divides(&p.lcm) {
                return true;
            }
            let li = polys[p.i].lm().lcm(&lm_h);
            let lj = polys[p.j].lm().lcm(&lm_h);
            li == p.lcm || lj == p.lcm
        });
        self.pairs.extend(kept);

        self.active.retain(|&g| !lm_h.divides(polys[g].lm()));
        self.active.push(h);
    }

    fn select(&mut self) -> Option<Pair> {
        let ord = self.ord;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| ord.cmp(&a.lcm, &b.lcm))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn reducers(&self) -> Vec<&IntPoly> {
        self.active.iter().map(|&k| &self.polys[k]).collect()
    }
}

/// Reduced Gröbner basis (monic) of the ideal generated by `gens`.
pub(crate) fn buchberger(
    nvars: usize,
    gens: &[Polynomial],
    ord: MonomialOrder,
    cfg: &GbConfig,
) -> Result<Vec<Polynomial>> {
    let mut st = State {
        ord,
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    // inter-reduce the input in order of increasing leading monomial
    let mut input: Vec<IntPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| IntPoly::from_poly(g, ord).0)
        .collect();
    input.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    for f in input {
        let sugar = f.total_degree();
        let (r, _) = reduce_top(&f, &st.reducers(), ord);
        if r.is_zero() {
            continue;
        }
        st.polys.push(r);
        st.sugar.push(sugar);
        st.update(st.polys.len() - 1);
    }

    let mut processed = 0usize;
    while let Some(p) = st.select() {
        processed += 1;
        if processed > cfg.max_pairs {
            return Err(Error::ComputationLimit(format!(
                "more than {} S-pairs reduced",
                cfg.max_pairs
            )));
        }
        let s = s_polynomial(&st.polys[p.i], &st.polys[p.j], ord);
        if s.is_zero() {
            continue;
        }
        let (r, _) = reduce_top(&s, &st.reducers(), ord);
        if r.is_zero() {
            continue;
        }
        st.polys.push(r);
        st.sugar.push(p.sugar);
        st.update(st.polys.len() - 1);
    }

    Ok(interreduce(nvars, st.active.iter().map(|&k| st.polys[k].clone()).collect(), ord))
}

/// Turns a Gröbner basis into the reduced one.
fn interreduce(nvars: usize, mut g: Vec<IntPoly>, ord: MonomialOrder) -> Vec<Polynomial> {
    g.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    let mut minimal: Vec<IntPoly> = Vec::new();
    for f in g {
        if !minimal.iter().any(|h| h.lm().divides(f.lm())) {
            minimal.push(f);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&IntPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, p)| p)
            .collect();
        // leading term is irreducible by the others; reduce the tail only
        let head = IntPoly {
            terms: vec![minimal[k].terms[0].clone()],
        };
        let tail = IntPoly {
            terms: minimal[k].terms[1..].to_vec(),
        };
        let (rt, kt) = reduce_full(&tail, &others, ord);
        let head = head.to_poly(nvars);
        let tail = rt.to_poly(nvars).scale(&kt.recip());
        let full = &head + &tail;
        out.push(full.monic(ord));
    }
    out
}
