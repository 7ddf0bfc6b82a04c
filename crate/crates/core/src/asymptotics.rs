//! Asymptotic Hilbert functions and polynomials: the closed forms for
//! disjoint flats and for two intersecting lines, and finite-`m`
//! convergence reports built from generic initial ideals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::configurations::{symbolic_power_ideal, ConfigJson, Configuration, Family};
use crate::error::{Error, Result};
use crate::groebner::{gin, GbConfig, GinParams, DEFAULT_ENTRY_BOUND};
use crate::polyhedra::{convex_union_approximant, gamma_region, newton_polyhedron, RationalPolyhedron};
use crate::rational::{binomial, factorial, format_rational, pow, serde_rational, Rational};
use crate::staircase::{lattice_volume_bound, MonomialStaircase, StaircaseJson};

/// Exact polynomial in `t`; `coefficients[k]` multiplies `t^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "UniPolyJson", from = "UniPolyJson")]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct UniPolyJson {
    #[serde(with = "serde_rational::vec")]
    coefficients: Vec<Rational>,
    #[serde(default)]
    text: String,
}

impl From<UniPoly> for UniPolyJson {
    fn from(p: UniPoly) -> Self {
        UniPolyJson { text: p.to_string(), coefficients: p.coeffs }
    }
}

impl From<UniPolyJson> for UniPoly {
    fn from(j: UniPolyJson) -> Self {
        UniPoly::new(j.coefficients)
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c·t^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `t + c`.
    pub fn linear(c: Rational) -> Self {
        Self::new(vec![c, Rational::one()])
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if k == 0 {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

/// Exact polynomial in `(m, t)`; `coefficients[i][j]` multiplies `m^i t^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiPoly {
    #[serde(with = "serde_rational::vec2")]
    coefficients: Vec<Vec<Rational>>,
}

impl BiPoly {
    pub fn new(coefficients: Vec<Vec<Rational>>) -> Self {
        let mut p = BiPoly { coefficients };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        BiPoly { coefficients: Vec::new() }
    }

    /// `c·m^i t^j`.
    pub fn term(c: Rational, i: usize, j: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(c, i, j);
        p
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Rational {
        self.coefficients.get(i).and_then(|row| row.get(j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree in `m`; `None` for zero.
    pub fn m_degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// The coefficient of `m^i`, as a polynomial in `t`.
    pub fn m_slice(&self, i: usize) -> UniPoly {
        UniPoly::new(self.coefficients.get(i).cloned().unwrap_or_default())
    }

    pub fn eval(&self, m: &Rational, t: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, row| acc * m + UniPoly::new(row.clone()).eval(t))
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (i, row) in other.coefficients.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out.add_term(c.clone(), i, j);
            }
        }
        out.trim();
        out
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = Self::zero();
        for (i, row) in self.coefficients.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, row2) in other.coefficients.iter().enumerate() {
                    for (l, b) in row2.iter().enumerate() {
                        out.add_term(a * b, i + k, j + l);
                    }
                }
            }
        }
        out.trim();
        out
    }

    pub fn scale(&self, c: &Rational) -> BiPoly {
        BiPoly::new(self.coefficients.iter().map(|row| row.iter().map(|a| a * c).collect()).collect())
    }

    fn add_term(&mut self, c: Rational, i: usize, j: usize) {
        if self.coefficients.len() <= i {
            self.coefficients.resize(i + 1, Vec::new());
        }
        let row = &mut self.coefficients[i];
        if row.len() <= j {
            row.resize(j + 1, Rational::zero());
        }
        row[j] += c;
    }

    fn trim(&mut self) {
        for row in &mut self.coefficients {
            while row.last().is_some_and(Zero::is_zero) {
                row.pop();
            }
        }
        while self.coefficients.last().is_some_and(Vec::is_empty) {
            self.coefficients.pop();
        }
    }
}

fn check_flats(n: usize, r: usize, s: usize) -> Result<()> {
    if n == 0 || r >= n || s == 0 {
        return Err(Error::Precondition(format!(
            "flat parameters need 0 <= r < n and s >= 1, got n={n}, r={r}, s={s}"
        )));
    }
    Ok(())
}

fn big(q: BigUint) -> Rational {
    Rational::from_integer(q.into())
}

/// `HP_{I^(m)}(t) = s·Σ_{0≤i<m} C(t−i+r, r)·C(i+n−r−1, n−r−1)` for `s`
/// disjoint `r`-flats in `Pⁿ`.
pub fn flats_hp(n: usize, r: usize, s: usize, m: u32) -> Result<UniPoly> {
    check_flats(n, r, s)?;
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let inv_r = Rational::one() / big(factorial(r as u32));
    let mut total = UniPoly::zero();
    for i in 0..m as u64 {
        // C(t − i + r, r) = Π_{j=1..r} (t − i + j) / r!
        let mut term = UniPoly::constant(inv_r.clone());
        for j in 1..=r as i64 {
            term = term.mul(&UniPoly::linear(Rational::from_integer((j - i as i64).into())));
        }
        let weight = big(binomial(i + (n - r - 1) as u64, (n - r - 1) as u64));
        total = total.add(&term.scale(&weight));
    }
    Ok(total.scale(&Rational::from_integer(s.into())))
}

/// `Σ_{i=0}^{m−1} i^a` as a polynomial in `m` (Faulhaber).
pub fn power_sum(a: usize) -> UniPoly {
    let mut sums: Vec<UniPoly> = Vec::with_capacity(a + 1);
    for k in 0..=a {
        // m^{k+1} = Σ_{j≤k} C(k+1, j)·S_j(m)
        let mut acc = UniPoly::monomial(Rational::one(), k + 1);
        for (j, sj) in sums.iter().enumerate() {
            acc = acc.sub(&sj.scale(&big(binomial(k as u64 + 1, j as u64))));
        }
        sums.push(acc.scale(&(Rational::one() / Rational::from_integer((k + 1).into()))));
    }
    sums.pop().unwrap()
}

/// `HP_{I^(m)}(mt)` as an exact polynomial in `(m, t)` for `s` disjoint
/// `r`-flats in `Pⁿ`.
pub fn flats_hp_bivariate(n: usize, r: usize, s: usize) -> Result<BiPoly> {
    check_flats(n, r, s)?;
    // summand as a polynomial in (i, u): C(u − i + r, r)·C(i + n−r−1, n−r−1)
    let one = Rational::one();
    let mut g = BiPoly::term(
        one.clone() / big(factorial(r as u32) * factorial((n - r - 1) as u32)),
        0,
        0,
    );
    for j in 1..=r {
        let factor = BiPoly::term(one.clone(), 0, 1)
            .add(&BiPoly::term(-one.clone(), 1, 0))
            .add(&BiPoly::term(Rational::from_integer(j.into()), 0, 0));
        g = g.mul(&factor);
    }
    for j in 1..=(n - r - 1) {
        let factor = BiPoly::term(one.clone(), 1, 0).add(&BiPoly::term(Rational::from_integer(j.into()), 0, 0));
        g = g.mul(&factor);
    }
    // Σ_{i<m} i^a (mt)^b = S_a(m)·m^b·t^b
    let mut out = BiPoly::zero();
    for (a, row) in g.coefficients.iter().enumerate() {
        let sa = power_sum(a);
        for (b, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, sk) in sa.coefficients().iter().enumerate() {
                out.add_term(c * sk, k + b, b);
            }
        }
    }
    out.trim();
    Ok(out.scale(&Rational::from_integer(s.into())))
}

/// The asymptotic Hilbert polynomial of `s` disjoint `r`-flats and the
/// complementary `Λ(n,r,s)(t) = tⁿ/n! − aHP(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AhpFlats {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub ahp: UniPoly,
    pub lambda: UniPoly,
}

pub fn ahp_flats(n: usize, r: usize, s: usize) -> Result<AhpFlats> {
    let ahp = flats_hp_bivariate(n, r, s)?.m_slice(n);
    let lambda = simplex_volume_poly(n).sub(&ahp);
    Ok(AhpFlats { n, r, s, ahp, lambda })
}

/// `tⁿ/n!`.
pub fn simplex_volume_poly(n: usize) -> UniPoly {
    UniPoly::monomial(Rational::one() / big(factorial(n as u32)), n)
}

/// `HP_{L^(m)}(t) = (m²+m)t − m³ + m²/2 + 3m/2` for two lines in `P³`
/// meeting in a point.
pub fn intersecting_lines_hp(m: u32) -> Result<UniPoly> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let m = Rational::from_integer(m.into());
    let half = Rational::new(1.into(), 2.into());
    let m2 = &m * &m;
    let c0 = -(&m2 * &m) + &m2 * &half + &m * Rational::new(3.into(), 2.into());
    Ok(UniPoly::new(vec![c0, m2 + &m]))
}

/// The same polynomial after `t ↦ mt`, in `(m, t)`.
pub fn intersecting_lines_bivariate() -> BiPoly {
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    BiPoly::term(q(1, 1), 3, 1)
        .add(&BiPoly::term(q(1, 1), 2, 1))
        .add(&BiPoly::term(q(-1, 1), 3, 0))
        .add(&BiPoly::term(q(1, 2), 2, 0))
        .add(&BiPoly::term(q(3, 2), 1, 0))
}

/// The asymptotic Hilbert polynomial when a closed form is known for the
/// configuration's family.
pub fn closed_form_ahp(config: &Configuration) -> Option<UniPoly> {
    match config.family() {
        Family::DisjointFlats { n, r, s } => ahp_flats(n, r, s).ok().map(|a| a.ahp),
        Family::IntersectingLines => Some(intersecting_lines_bivariate().m_slice(3)),
        Family::Other => None,
    }
}

fn family_label(config: &Configuration) -> String {
    match config.family() {
        Family::DisjointFlats { n, r, s } => format!("disjoint-flats(n={n},r={r},s={s})"),
        Family::IntersectingLines => "intersecting-lines".into(),
        Family::Other => "other".into(),
    }
}

/// Additivity of `aHP` over configurations with disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityReport {
    #[serde(with = "serde_rational")]
    pub t: Rational,
    pub part_a: UniPoly,
    pub part_b: UniPoly,
    pub sum: UniPoly,
    /// Closed form of the union itself, when its family has one.
    pub union_closed_form: Option<UniPoly>,
    #[serde(with = "serde_rational")]
    pub sum_at_t: Rational,
    pub consistent: bool,
}

pub fn ahp_additivity_check(a: &Configuration, b: &Configuration, t: &Rational) -> Result<AdditivityReport> {
    if !a.is_disjoint_from(b) {
        return Err(Error::Precondition("configurations are not disjoint".into()));
    }
    let closed = |c: &Configuration| {
        closed_form_ahp(c).ok_or_else(|| {
            Error::Precondition(format!("no closed-form aHP for a configuration of family {}", family_label(c)))
        })
    };
    let part_a = closed(a)?;
    let part_b = closed(b)?;
    let sum = part_a.add(&part_b);
    let union_closed_form = closed_form_ahp(&a.union(b)?);
    let consistent = union_closed_form.as_ref().is_none_or(|u| *u == sum);
    Ok(AdditivityReport {
        t: t.clone(),
        sum_at_t: sum.eval(t),
        part_a,
        part_b,
        sum,
        union_closed_form,
        consistent,
    })
}

/// Knobs for [`ahf_estimate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimateOptions {
    pub seed: u64,
    pub entry_bound: u32,
    pub gb: GbConfig,
    /// Worker threads for the m-sweep; 1 runs sequentially.
    pub jobs: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions { seed: 0, entry_bound: DEFAULT_ENTRY_BOUND, gb: GbConfig::default(), jobs: 1 }
    }
}

/// One `m` of a convergence report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub m: u32,
    /// `⌊mt⌋`.
    pub degree: u64,
    /// `#Γ_{m,t}`.
    #[serde(with = "serde_rational::opt")]
    pub count: Option<Rational>,
    /// `#Γ_{m,t} / mⁿ`.
    #[serde(with = "serde_rational::opt")]
    pub ratio: Option<Rational>,
    /// `vol(Γ_{m,t}) / mⁿ` for the non-convex staircase complement.
    #[serde(with = "serde_rational::opt")]
    pub vol_staircase: Option<Rational>,
    /// `vol(L_{m,t}/m) = tⁿ/n! − vol_staircase`.
    #[serde(with = "serde_rational::opt")]
    pub vol_l: Option<Rational>,
    /// `vol(T_t \ P(L_m)/m)`: the complement of the convexified shape.
    #[serde(with = "serde_rational::opt")]
    pub vol_convex: Option<Rational>,
    /// `ratio − target`.
    #[serde(with = "serde_rational::opt")]
    pub gap: Option<Rational>,
    #[serde(with = "serde_rational::opt")]
    pub lattice_bound: Option<Rational>,
    pub lattice_ok: Option<bool>,
    /// Maximal degree of a minimal gin generator.
    pub regularity: Option<u32>,
    /// `mt < regularity`: the Hilbert polynomial may not be reached yet.
    pub below_regularity: Option<bool>,
    pub staircase: Option<StaircaseJson>,
    pub error: Option<String>,
    #[serde(skip)]
    pub error_kind: Option<Error>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    /// Diagnostics do not count towards [`ConvergenceReport::all_checks_hold`].
    pub diagnostic: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub family: String,
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub t: Rational,
    pub target_poly: Option<UniPoly>,
    #[serde(with = "serde_rational::opt")]
    pub target: Option<Rational>,
    /// Closed-form comparisons are meaningful from `reg(gin(I)) + 1` on.
    pub closed_form_from: Option<u32>,
    pub rows: Vec<ConvergenceRow>,
    /// `conv` of the union of `P(L_m)/m` over successful rows.
    pub delta: Option<RationalPolyhedron>,
    /// `vol(T_t \ delta)`.
    #[serde(with = "serde_rational::opt")]
    pub delta_gamma_volume: Option<Rational>,
    /// First `m` from which `delta` no longer changes.
    pub stabilized_at: Option<u32>,
    pub checks: Vec<Check>,
    pub config: ConfigJson,
    pub seed: u64,
    pub entry_bound: u32,
    pub tool_version: String,
}

impl ConvergenceReport {
    pub fn all_checks_hold(&self) -> bool {
        self.checks.iter().filter(|c| !c.diagnostic).all(|c| c.holds)
    }

    pub fn first_error(&self) -> Option<&Error> {
        self.rows.iter().find_map(|r| r.error_kind.as_ref())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// CSV with columns `m,count,count/m^n,vol_staircase,vol_convex,target,gap`,
    /// preceded by `#` lines carrying the provenance of the run.
    pub fn to_csv(&self) -> Result<String> {
        let opt = |q: &Option<Rational>| q.as_ref().map(format_rational).unwrap_or_default();
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["m", "count", "count/m^n", "vol_staircase", "vol_convex", "target", "gap"]).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.m.to_string(),
                opt(&r.count),
                opt(&r.ratio),
                opt(&r.vol_staircase),
                opt(&r.vol_convex),
                opt(&self.target),
                opt(&r.gap),
            ])
            .map_err(io)?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?)
            .expect("csv output is utf-8");
        let config = serde_json::to_string(&self.config).expect("config serializes");
        Ok(format!(
            "# family={} t={} seed={} entry_bound={} version={}\n# config={config}\n{body}",
            self.family,
            format_rational(&self.t),
            self.seed,
            self.entry_bound,
            self.tool_version
        ))
    }
}

struct RowData {
    row: ConvergenceRow,
    staircase: Option<MonomialStaircase>,
    newton: Option<RationalPolyhedron>,
}

fn compute_row(config: &Configuration, m: u32, t: &Rational, target: Option<&Rational>, opts: &EstimateOptions) -> RowData {
    let n = config.n();
    let mt = Rational::from_integer(m.into()) * t;
    let degree = mt.floor().to_integer().to_u64().unwrap_or(0);
    let mut row = ConvergenceRow { m, degree, ..Default::default() };
    let result = (|| -> Result<(MonomialStaircase, RationalPolyhedron)> {
        let ideal = symbolic_power_ideal(config, m, &opts.gb)?;
        let params = GinParams { seed: opts.seed, entry_bound: opts.entry_bound, gb: opts.gb };
        let st = gin(&ideal, &params)?.staircase;
        let mn = Rational::from_integer(m.into()).pow(n as i32);
        let count = big(st.count_gamma(degree));
        let vol_gamma = st.complement_volume(&mt);
        let bound = big(lattice_volume_bound(n, degree));
        row.lattice_ok = Some((&count - &vol_gamma).abs() <= bound);
        row.lattice_bound = Some(bound);
        row.ratio = Some(&count / &mn);
        row.gap = target.map(|q| &count / &mn - q);
        row.count = Some(count);
        row.vol_staircase = Some(&vol_gamma / &mn);
        row.vol_l = Some(simplex_volume_poly(n).eval(t) - vol_gamma / &mn);
        let newton = newton_polyhedron(&st)?.scale(&(Rational::one() / Rational::from_integer(m.into())))?;
        row.vol_convex = Some(gamma_region(&newton, t)?.volume);
        let reg = st.max_generator_degree();
        row.regularity = Some(reg);
        row.below_regularity = Some(mt < Rational::from_integer(reg.into()));
        row.staircase = Some(st.to_json());
        Ok((st, newton))
    })();
    match result {
        Ok((st, newton)) => RowData { row, staircase: Some(st), newton: Some(newton) },
        Err(e) => {
            let row = ConvergenceRow { m, degree, error: Some(e.to_string()), error_kind: Some(e), ..Default::default() };
            RowData { row, staircase: None, newton: None }
        }
    }
}

fn is_factorial(m: u32) -> bool {
    let mut f = 1u32;
    let mut k = 1u32;
    while f < m {
        k += 1;
        f = f.saturating_mul(k);
    }
    f == m
}

/// Finite-`m` estimates of `aHF_I(t)` next to the closed-form target, with
/// the monotonicity, sandwich, lattice and semigroup checks.
pub fn ahf_estimate(config: &Configuration, t: &Rational, m_list: &[u32], opts: &EstimateOptions) -> Result<ConvergenceReport> {
    if m_list.is_empty() || m_list[0] == 0 || m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("m_list must be a nonempty increasing list of positive integers".into()));
    }
    if t.is_negative() {
        return Err(Error::Precondition(format!("t must be nonnegative, got {t}")));
    }
    let n = config.n();
    let target_poly = closed_form_ahp(config);
    let target = target_poly.as_ref().map(|p| p.eval(t));

    let data: Vec<RowData> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::ComputationLimit(e.to_string()))?;
        pool.install(|| m_list.par_iter().map(|&m| compute_row(config, m, t, target.as_ref(), opts)).collect())
    } else {
        m_list.iter().map(|&m| compute_row(config, m, t, target.as_ref(), opts)).collect()
    };

    let closed_form_from = data
        .iter()
        .find(|d| d.row.m == 1)
        .and_then(|d| d.row.regularity)
        .map(|r| r + 1);

    // limiting-shape approximant and the m from which it stops changing
    let newtons: Vec<(u32, &RationalPolyhedron)> =
        data.iter().filter_map(|d| d.newton.as_ref().map(|p| (d.row.m, p))).collect();
    let (delta, delta_gamma_volume, stabilized_at) = if newtons.is_empty() {
        (None, None, None)
    } else {
        let all: Vec<RationalPolyhedron> = newtons.iter().map(|(_, p)| (*p).clone()).collect();
        let delta = convex_union_approximant(&all)?;
        let mut stabilized = None;
        for k in 0..all.len() {
            let prefix = convex_union_approximant(&all[..=k])?;
            if same_shape(&prefix, &delta) {
                stabilized = Some(newtons[k].0);
                break;
            }
        }
        let vol = gamma_region(&delta, t)?.volume;
        (Some(delta), Some(vol), stabilized)
    };

    let rows: Vec<ConvergenceRow> = data.iter().map(|d| d.row.clone()).collect();
    let staircases: BTreeMap<u32, &MonomialStaircase> =
        data.iter().filter_map(|d| d.staircase.as_ref().map(|s| (d.row.m, s))).collect();
    let checks = report_checks(n, &rows, &staircases, delta_gamma_volume.as_ref());

    Ok(ConvergenceReport {
        family: family_label(config),
        n,
        t: t.clone(),
        target_poly,
        target,
        closed_form_from,
        rows,
        delta,
        delta_gamma_volume,
        stabilized_at,
        checks,
        config: config.source().clone(),
        seed: opts.seed,
        entry_bound: opts.entry_bound,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn same_shape(a: &RationalPolyhedron, b: &RationalPolyhedron) -> bool {
    let mut va = a.vertices.clone();
    let mut vb = b.vertices.clone();
    va.sort();
    vb.sort();
    va == vb && a.facets == b.facets
}

fn report_checks(
    n: usize,
    rows: &[ConvergenceRow],
    staircases: &BTreeMap<u32, &MonomialStaircase>,
    delta_gamma_volume: Option<&Rational>,
) -> Vec<Check> {
    let mut checks = Vec::new();
    let ok_rows: Vec<&ConvergenceRow> = rows.iter().filter(|r| r.error.is_none()).collect();

    // vol(L_{m!,t}/m!) is nondecreasing along the factorial chain
    let chain: Vec<&ConvergenceRow> = ok_rows.iter().copied().filter(|r| is_factorial(r.m)).collect();
    let monotone = chain.windows(2).all(|w| w[0].vol_l <= w[1].vol_l);
    checks.push(Check {
        name: "factorial-monotone".into(),
        holds: monotone,
        diagnostic: false,
        detail: format!(
            "vol(L_m,t/m) along m in {:?}: {}",
            chain.iter().map(|r| r.m).collect::<Vec<_>>(),
            chain.iter().map(|r| format_rational(r.vol_l.as_ref().unwrap())).collect::<Vec<_>>().join(" <= ")
        ),
    });

    // ((p − q)/p)ⁿ·vol(L_{q,t}/q) ≤ vol(L_{p,t}/p) for factorial q ≤ p
    let mut pairs = 0;
    let mut failure = None;
    for q in &chain {
        for p in ok_rows.iter().filter(|p| p.m >= q.m) {
            pairs += 1;
            let (pm, qm) = (Rational::from_integer(p.m.into()), Rational::from_integer(q.m.into()));
            let lhs = pow(&((&pm - &qm) / &pm), n as u32) * q.vol_l.as_ref().unwrap();
            if lhs > *p.vol_l.as_ref().unwrap() {
                failure.get_or_insert(format!("fails for q={}, p={}", q.m, p.m));
            }
        }
    }
    checks.push(Check {
        name: "sandwich".into(),
        holds: failure.is_none(),
        diagnostic: false,
        detail: failure.unwrap_or_else(|| format!("{pairs} (q, p) pairs")),
    });

    let bad: Vec<u32> = ok_rows.iter().filter(|r| r.lattice_ok != Some(true)).map(|r| r.m).collect();
    checks.push(Check {
        name: "lattice-volume".into(),
        holds: bad.is_empty(),
        diagnostic: false,
        detail: if bad.is_empty() {
            format!("|#Γ − vol Γ| within (n+2)·C(⌊mt⌋+n, n−1) on {} rows", ok_rows.len())
        } else {
            format!("bound exceeded at m = {bad:?}")
        },
    });

    // generator-wise semigroup containments among computed staircases
    let mut scale_pairs = 0;
    let mut scale_fail = None;
    let mut sum_pairs = 0;
    let mut sum_fail = None;
    for (&p, sp) in staircases {
        for (&kp, skp) in staircases.range(p + 1..) {
            if kp % p == 0 {
                scale_pairs += 1;
                if !sp.scale_subset(skp, kp / p).holds {
                    scale_fail.get_or_insert(format!("{}·L_{p} ⊄ L_{kp}", kp / p));
                }
            }
        }
        for (&q, sq) in staircases.range(p..) {
            if let Some(spq) = staircases.get(&(p + q)) {
                sum_pairs += 1;
                if !sp.minkowski_subset(sq, spq).holds {
                    sum_fail.get_or_insert(format!("L_{p} + L_{q} ⊄ L_{}", p + q));
                }
            }
        }
    }
    checks.push(Check {
        name: "scale-containment".into(),
        holds: scale_fail.is_none(),
        diagnostic: false,
        detail: scale_fail.unwrap_or_else(|| format!("{scale_pairs} pairs kL_p ⊂ L_kp")),
    });
    checks.push(Check {
        name: "minkowski-containment".into(),
        holds: sum_fail.is_none(),
        diagnostic: false,
        detail: sum_fail.unwrap_or_else(|| format!("{sum_pairs} pairs L_p + L_q ⊂ L_p+q")),
    });

    // vol(T_t \ Δ_approx) is an upper bound for aHF; compare with the
    // lattice-corrected lower estimates of each row
    if let Some(dv) = delta_gamma_volume {
        let violators: Vec<u32> = ok_rows
            .iter()
            .filter(|r| {
                let mn = Rational::from_integer(r.m.into()).pow(n as i32);
                let lower = r.count.as_ref().unwrap() / &mn - r.lattice_bound.as_ref().unwrap() / &mn;
                lower > *dv
            })
            .map(|r| r.m)
            .collect();
        checks.push(Check {
            name: "convex-upper-bound".into(),
            holds: violators.is_empty(),
            diagnostic: true,
            detail: if violators.is_empty() {
                format!("vol(T_t \\ Δ) = {} dominates every lattice-corrected row", format_rational(dv))
            } else {
                format!("rows exceeding vol(T_t \\ Δ): {violators:?}")
            },
        });
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::Component;
    use crate::rational::{int, rat};

    #[test]
    fn unipoly_display() {
        assert_eq!(UniPoly::new(vec![rat(-2, 3), int(1)]).to_string(), "t - 2/3");
        assert_eq!(UniPoly::constant(rat(1, 6)).to_string(), "1/6");
        assert_eq!(UniPoly::new(vec![int(2), int(2)]).to_string(), "2*t + 2");
        assert_eq!(UniPoly::new(vec![int(0), int(-1), int(0), rat(1, 6)]).to_string(), "1/6*t^3 - t");
        assert_eq!(UniPoly::zero().to_string(), "0");
        let p = UniPoly::new(vec![rat(-5, 6), int(1)]);
        let back: UniPoly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn power_sums() {
        for a in 0..6 {
            let s = power_sum(a);
            for m in 0..8u64 {
                let direct: u64 = (0..m).map(|i| i.pow(a as u32)).sum();
                assert_eq!(s.eval(&int(m as i64)), int(direct as i64), "a={a} m={m}");
            }
        }
    }

    #[test]
    fn flats_hp_examples() {
        assert_eq!(flats_hp(3, 1, 2, 1).unwrap().to_string(), "2*t + 2");
        assert_eq!(flats_hp(2, 0, 3, 1).unwrap(), UniPoly::constant(int(3)));
        // two lines, m = 2: 2[(t + 1) + 2t] = 6t + 2
        assert_eq!(flats_hp(3, 1, 2, 2).unwrap(), UniPoly::new(vec![int(2), int(6)]));
        assert!(flats_hp(2, 2, 1, 1).is_err());
        assert!(flats_hp(3, 1, 0, 1).is_err());
        assert!(flats_hp(3, 1, 1, 0).is_err());
    }

    #[test]
    fn bivariate_matches_univariate() {
        for (n, r, s) in [(3, 1, 2), (2, 0, 1), (4, 2, 3), (4, 0, 5), (3, 0, 2)] {
            let bi = flats_hp_bivariate(n, r, s).unwrap();
            assert!(bi.m_degree().unwrap() <= n);
            for m in 1..5u32 {
                let uni = flats_hp(n, r, s, m).unwrap();
                for t in [0i64, 1, 3, 7] {
                    let mm = int(m as i64);
                    assert_eq!(bi.eval(&mm, &int(t)), uni.eval(&(&mm * int(t))));
                }
            }
        }
    }

    #[test]
    fn ahp_closed_forms() {
        let a = ahp_flats(3, 1, 2).unwrap();
        assert_eq!(a.ahp.to_string(), "t - 2/3");
        assert_eq!(a.lambda, simplex_volume_poly(3).sub(&a.ahp));
        assert_eq!(ahp_flats(2, 0, 1).unwrap().ahp, UniPoly::constant(rat(1, 2)));
        assert_eq!(ahp_flats(2, 0, 4).unwrap().ahp, UniPoly::constant(int(2)));
        for n in 2..=4usize {
            for r in 1..=6usize {
                let expected = Rational::new(r.into(), factorial(n as u32).into());
                assert_eq!(ahp_flats(n, 0, r).unwrap().ahp, UniPoly::constant(expected));
            }
        }
    }

    #[test]
    fn intersecting_lines_formula() {
        assert_eq!(intersecting_lines_hp(1).unwrap().to_string(), "2*t + 1");
        assert_eq!(intersecting_lines_hp(2).unwrap().to_string(), "6*t - 3");
        let bi = intersecting_lines_bivariate();
        assert_eq!(bi.m_slice(3).to_string(), "t - 1");
        for m in 1..6u32 {
            let uni = intersecting_lines_hp(m).unwrap();
            let mm = int(m as i64);
            assert_eq!(bi.eval(&mm, &int(5)), uni.eval(&(&mm * int(5))));
        }
    }

    fn point(c: &[i64]) -> Component {
        Component::Point { coords: c.iter().map(|&x| int(x)).collect() }
    }

    fn line(a: &[i64], b: &[i64]) -> Component {
        Component::Flat { forms: vec![a.iter().map(|&x| int(x)).collect(), b.iter().map(|&x| int(x)).collect()] }
    }

    fn config(n: usize, components: Vec<Component>) -> Configuration {
        Configuration::from_json(&ConfigJson { n, components, generic: None }).unwrap()
    }

    #[test]
    fn additivity_of_lines_and_point() {
        let lines = config(3, vec![line(&[1, 0, 0, 0], &[0, 1, 0, 0]), line(&[1, 0, 0, 0], &[0, 0, 1, 0])]);
        let pt = config(3, vec![point(&[1, 1, 1, 1])]);
        let rep = ahp_additivity_check(&lines, &pt, &int(3)).unwrap();
        assert_eq!(rep.part_a.to_string(), "t - 1");
        assert_eq!(rep.part_b.to_string(), "1/6");
        assert_eq!(rep.sum.to_string(), "t - 5/6");
        assert_eq!(rep.sum_at_t, rat(13, 6));
        assert!(rep.consistent);

        let p2 = config(3, vec![point(&[1, 2, 3, 5])]);
        let rep = ahp_additivity_check(&pt, &p2, &int(1)).unwrap();
        assert_eq!(rep.sum, UniPoly::constant(rat(1, 3)));
        assert_eq!(rep.union_closed_form, Some(UniPoly::constant(rat(1, 3))));

        // the point (0,0,0,1) lies on both lines
        let on_line = config(3, vec![point(&[0, 0, 0, 1])]);
        assert!(ahp_additivity_check(&lines, &on_line, &int(1)).is_err());
    }

    #[test]
    fn one_point_in_the_plane() {
        let c = config(2, vec![point(&[1, 2, 3])]);
        let rep = ahf_estimate(&c, &int(1), &[1, 2, 3, 4], &EstimateOptions::default()).unwrap();
        // HF_{I^(m)}(m) counts the C(m+1, 2) conditions
        let ratios: Vec<Rational> = rep.rows.iter().map(|r| r.ratio.clone().unwrap()).collect();
        assert_eq!(ratios, vec![int(1), rat(3, 4), rat(6, 9), rat(10, 16)]);
        assert_eq!(rep.target, Some(rat(1, 2)));
        assert!(rep.all_checks_hold(), "{:?}", rep.checks);
        assert_eq!(rep.delta_gamma_volume, Some(rat(1, 2)));
        assert_eq!(rep.stabilized_at, Some(1));
        let csv = rep.to_csv().unwrap();
        assert!(csv.contains("m,count,count/m^n,vol_staircase,vol_convex,target,gap"));
        assert!(csv.contains("\n2,3,3/4,"));
    }

    #[test]
    fn parallel_sweep_matches_sequential() {
        let c = config(2, vec![point(&[1, 0, 1]), point(&[0, 1, 1])]);
        let seq = ahf_estimate(&c, &int(2), &[1, 2, 3], &EstimateOptions::default()).unwrap();
        let par = ahf_estimate(&c, &int(2), &[1, 2, 3], &EstimateOptions { jobs: 3, ..Default::default() }).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn rejects_bad_m_lists() {
        let c = config(2, vec![point(&[1, 2, 3])]);
        for bad in [&[][..], &[2, 1], &[0, 1], &[1, 1]] {
            assert!(ahf_estimate(&c, &int(1), bad, &EstimateOptions::default()).is_err());
        }
    }

    #[test]
    fn factorials() {
        let f: Vec<u32> = (1..=30).filter(|&m| is_factorial(m)).collect();
        assert_eq!(f, vec![1, 2, 6, 24]);
    }
}
