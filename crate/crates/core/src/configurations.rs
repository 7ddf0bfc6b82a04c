//! Finite unions of points and linear flats in `Pⁿ`, their radical ideals
//! and symbolic powers.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::{intersect_ideals, GbConfig, Ideal};
use crate::linalg::{rank_of, RatMatrix};
use crate::poly::{Monomial, Polynomial};
use crate::rational::{serde_rational, Rational};

/// Coordinates of seeded generic configurations are drawn from `[-100, 100]`.
pub const GENERIC_COORD_BOUND: i64 = 100;

/// RNG stream reserved for generic configurations.
const CONFIG_STREAM: u64 = 2;

/// One irreducible component: a point given by homogeneous coordinates, or
/// a flat given by independent linear forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Component {
    Point {
        #[serde(with = "serde_rational::vec")]
        coords: Vec<Rational>,
    },
    Flat {
        #[serde(with = "serde_rational::vec2")]
        forms: Vec<Vec<Rational>>,
    },
}

/// Request for `s` seeded generic flats of dimension `r` (`r = 0`: points).
/// A missing seed means 0; the command-line tool fills in its own seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericSpec {
    pub r: usize,
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Configuration file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub n: usize,
    #[serde(default)]
    pub components: Vec<Component>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic: Option<GenericSpec>,
}

/// A validated configuration in `Pⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    n: usize,
    components: Vec<Component>,
    /// Defining linear forms of each component, as coefficient rows.
    forms: Vec<Vec<Vec<Rational>>>,
    pairwise_disjoint: bool,
    source: ConfigJson,
}

/// Shapes for which closed-form asymptotics are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `s` pairwise disjoint flats of common dimension `r` (points when `r = 0`).
    DisjointFlats { n: usize, r: usize, s: usize },
    /// Two lines in `P³` meeting in one point.
    IntersectingLines,
    Other,
}

impl Component {
    fn defining_forms(&self, n: usize) -> Result<Vec<Vec<Rational>>> {
        match self {
            Component::Point { coords } => {
                if coords.len() != n + 1 {
                    return Err(Error::InvalidConfig(format!(
                        "point has {} coordinates, expected {}",
                        coords.len(),
                        n + 1
                    )));
                }
                if coords.iter().all(Zero::is_zero) {
                    return Err(Error::InvalidConfig("point with all coordinates zero".into()));
                }
                Ok(RatMatrix::from_rows(vec![coords.clone()])?.nullspace())
            }
            Component::Flat { forms } => {
                if forms.is_empty() || forms.len() > n {
                    return Err(Error::InvalidConfig(format!(
                        "a flat in P^{n} needs between 1 and {n} forms, got {}",
                        forms.len()
                    )));
                }
                if forms.iter().any(|f| f.len() != n + 1) {
                    return Err(Error::InvalidConfig(format!(
                        "linear forms must have {} coefficients",
                        n + 1
                    )));
                }
                if rank_of(forms) != forms.len() {
                    return Err(Error::InvalidConfig("dependent linear forms".into()));
                }
                Ok(forms.clone())
            }
        }
    }
}

fn random_row(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len)
        .map(|_| {
            Rational::from_integer(rng.gen_range(-GENERIC_COORD_BOUND..=GENERIC_COORD_BOUND).into())
        })
        .collect()
}

fn disjoint(a: &[Vec<Rational>], b: &[Vec<Rational>], n: usize) -> bool {
    let mut rows = a.to_vec();
    rows.extend_from_slice(b);
    rank_of(&rows) == n + 1
}

fn same_subspace(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let mut rows = a.to_vec();
    rows.extend_from_slice(b);
    let r = rank_of(&rows);
    r == a.len() && r == b.len()
}

impl Configuration {
    pub fn from_json(json: &ConfigJson) -> Result<Self> {
        let n = json.n;
        if n == 0 || n + 1 > crate::poly::MAX_VARS - 1 {
            return Err(Error::InvalidConfig(format!("unsupported ambient dimension {n}")));
        }
        let mut components = json.components.clone();
        let mut forms: Vec<Vec<Vec<Rational>>> = components
            .iter()
            .map(|c| c.defining_forms(n))
            .collect::<Result<_>>()?;
        if let Some(g) = &json.generic {
            if g.r >= n {
                return Err(Error::InvalidConfig(format!(
                    "generic flats need 0 <= r < n, got r = {}",
                    g.r
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed.unwrap_or(0));
            rng.set_stream(CONFIG_STREAM);
            let codim = n - g.r;
            let can_be_disjoint = 2 * (g.r + 1) <= n + 1;
            let mut produced = 0;
            let mut attempts = 0;
            while produced < g.s {
                attempts += 1;
                if attempts > 10_000 {
                    return Err(Error::InvalidConfig("could not draw a generic configuration".into()));
                }
                let comp = if g.r == 0 {
                    Component::Point {
                        coords: random_row(&mut rng, n + 1),
                    }
                } else {
                    Component::Flat {
                        forms: (0..codim).map(|_| random_row(&mut rng, n + 1)).collect(),
                    }
                };
                let Ok(f) = comp.defining_forms(n) else { continue };
                let clash = forms.iter().any(|other| {
                    same_subspace(other, &f) || (can_be_disjoint && !disjoint(other, &f, n))
                });
                if clash {
                    continue;
                }
                components.push(comp);
                forms.push(f);
                produced += 1;
            }
        }
        if components.is_empty() {
            return Err(Error::InvalidConfig("configuration has no components".into()));
        }
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                if same_subspace(&forms[i], &forms[j]) {
                    return Err(Error::InvalidConfig(format!(
                        "components {i} and {j} coincide"
                    )));
                }
            }
        }
        let pairwise_disjoint = (0..forms.len())
            .all(|i| (i + 1..forms.len()).all(|j| disjoint(&forms[i], &forms[j], n)));
        Ok(Configuration {
            n,
            components,
            forms,
            pairwise_disjoint,
            source: json.clone(),
        })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let json: ConfigJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        Self::from_json(&json)
    }

    pub fn points(n: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        Self::from_json(&ConfigJson {
            n,
            components: points
                .into_iter()
                .map(|coords| Component::Point { coords })
                .collect(),
            generic: None,
        })
    }

    pub fn flats(n: usize, flats: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        Self::from_json(&ConfigJson {
            n,
            components: flats.into_iter().map(|forms| Component::Flat { forms }).collect(),
            generic: None,
        })
    }

    /// `s` seeded generic flats of dimension `r` in `Pⁿ`.
    pub fn generic(n: usize, r: usize, s: usize, seed: u64) -> Result<Self> {
        Self::from_json(&ConfigJson {
            n,
            components: Vec::new(),
            generic: Some(GenericSpec { r, s, seed: Some(seed) }),
        })
    }

    /// Union of two configurations in the same space.
    pub fn union(&self, other: &Configuration) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidConfig("ambient dimensions differ".into()));
        }
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Self::from_json(&ConfigJson {
            n: self.n,
            components,
            generic: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Source JSON as given (generic requests are kept unexpanded).
    pub fn source(&self) -> &ConfigJson {
        &self.source
    }

    /// JSON with every generic component written out explicitly.
    pub fn expanded_json(&self) -> ConfigJson {
        ConfigJson {
            n: self.n,
            components: self.components.clone(),
            generic: None,
        }
    }

    pub fn pairwise_disjoint(&self) -> bool {
        self.pairwise_disjoint
    }

    /// Projective dimension of each component.
    pub fn component_dims(&self) -> Vec<usize> {
        self.forms.iter().map(|f| self.n - f.len()).collect()
    }

    pub fn is_points_only(&self) -> bool {
        self.component_dims().iter().all(|&d| d == 0)
    }

    pub fn points_coords(&self) -> Option<Vec<Vec<Rational>>> {
        if !self.is_points_only() {
            return None;
        }
        Some(
            self.forms
                .iter()
                .map(|f| {
                    let v = RatMatrix::from_rows(f.clone()).unwrap().nullspace();
                    debug_assert_eq!(v.len(), 1);
                    v.into_iter().next().unwrap()
                })
                .collect(),
        )
    }

    /// `V(self) ∩ V(other) = ∅`, decided exactly over ℚ.
    pub fn is_disjoint_from(&self, other: &Configuration) -> bool {
        self.n == other.n
            && self
                .forms
                .iter()
                .all(|a| other.forms.iter().all(|b| disjoint(a, b, self.n)))
    }

    pub fn family(&self) -> Family {
        let dims = self.component_dims();
        let r = dims[0];
        if self.pairwise_disjoint && dims.iter().all(|&d| d == r) {
            return Family::DisjointFlats {
                n: self.n,
                r,
                s: dims.len(),
            };
        }
        if self.n == 3 && dims == [1, 1] {
            let mut rows = self.forms[0].clone();
            rows.extend_from_slice(&self.forms[1]);
            if rank_of(&rows) == 3 {
                return Family::IntersectingLines;
            }
        }
        Family::Other
    }

    /// Prime ideal of each component.
    pub fn component_ideals(&self) -> Vec<Ideal> {
        self.forms
            .iter()
            .map(|f| {
                Ideal::new(f.iter().map(|row| Polynomial::linear_form(row)).collect())
                    .expect("independent linear forms")
            })
            .collect()
    }
}

/// Radical ideal of the configuration: intersection of the component ideals.
pub fn ideal_of(config: &Configuration, cfg: &GbConfig) -> Result<Ideal> {
    intersect_all(config.component_ideals(), cfg)
}

fn intersect_all(ideals: Vec<Ideal>, cfg: &GbConfig) -> Result<Ideal> {
    let mut it = ideals.into_iter();
    let mut acc = it
        .next()
        .ok_or_else(|| Error::InvalidConfig("configuration has no components".into()))?;
    for next in it {
        acc = intersect_ideals(&acc, &next, cfg)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicPower {
    pub base: Ideal,
    pub m: u32,
    pub ideal: Ideal,
}

/// `I^(m)` as the intersection of the `m`-th powers of the component ideals.
///
/// Each component is cut out by linear forms, so its ordinary and symbolic
/// powers agree.
pub fn symbolic_power_ideal(config: &Configuration, m: u32, cfg: &GbConfig) -> Result<Ideal> {
    if m == 0 {
        return Err(Error::Precondition("symbolic power needs m >= 1".into()));
    }
    intersect_all(
        config.component_ideals().iter().map(|p| p.power(m)).collect(),
        cfg,
    )
}

pub fn symbolic_power(config: &Configuration, m: u32, cfg: &GbConfig) -> Result<SymbolicPower> {
    let base = ideal_of(config, cfg)?;
    let ideal = if m == 1 {
        base.clone()
    } else {
        symbolic_power_ideal(config, m, cfg)?
    };
    Ok(SymbolicPower { base, m, ideal })
}

/// All partial derivatives of order `≤ m − 1` of `f` vanish at every
/// configured point.
pub fn differential_membership_check(
    f: &Polynomial,
    config: &Configuration,
    m: u32,
) -> Result<bool> {
    let points = config
        .points_coords()
        .ok_or_else(|| Error::Precondition("differential check needs a point configuration".into()))?;
    if f.nvars() != config.nvars() {
        return Err(Error::Dimension {
            expected: config.nvars(),
            found: f.nvars(),
        });
    }
    let n = f.nvars();
    let mut layer: Vec<Polynomial> = vec![f.clone()];
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut layer_keys = vec![Monomial::one(n)];
    for order in 0..m {
        for p in &layer {
            for pt in &points {
                if !p.evaluate(pt)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        if order + 1 == m {
            break;
        }
        let mut next = Vec::new();
        let mut next_keys = Vec::new();
        for (p, key) in layer.iter().zip(&layer_keys) {
            for i in 0..n {
                let k = key.mul(&Monomial::var(n, i));
                if seen.insert(k) {
                    let d = p.partial_derivative(i);
                    if !d.is_zero() {
                        next.push(d);
                        next_keys.push(k);
                    }
                }
            }
        }
        layer = next;
        layer_keys = next_keys;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::GroebnerBasis;
    use crate::poly::MonomialOrder;
    use crate::rational::int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn coordinate_point_ideal() {
        let c = Configuration::points(3, vec![ints(&[1, 0, 0, 0])]).unwrap();
        let i = ideal_of(&c, &GbConfig::default()).unwrap();
        assert_eq!(i, Ideal::parse(&["x2", "x3", "x4"], 4).unwrap());
    }

    #[test]
    fn two_coordinate_flats() {
        let c = Configuration::flats(
            3,
            vec![
                vec![ints(&[1, 0, 0, 0]), ints(&[0, 1, 0, 0])],
                vec![ints(&[1, 0, 0, 0]), ints(&[0, 0, 1, 0])],
            ],
        )
        .unwrap();
        assert!(!c.pairwise_disjoint());
        assert_eq!(c.family(), Family::IntersectingLines);
        let cfg = GbConfig::default();
        let i = ideal_of(&c, &cfg).unwrap();
        let expected = Ideal::parse(&["x1", "x2*x3"], 4).unwrap();
        assert!(i.equals(&expected, &cfg).unwrap());
        // membership brute force up to degree 3
        let gb = i.groebner_basis(MonomialOrder::DegRevLex, &cfg).unwrap();
        for d in 0..=3 {
            for m in crate::poly::monomials_of_degree(4, d) {
                let e = m.exponents();
                let member = e[0] > 0 || (e[1] > 0 && e[2] > 0);
                assert_eq!(gb.contains(&Polynomial::monomial(m)).unwrap(), member);
            }
        }
    }

    #[test]
    fn generic_line_has_two_linear_generators() {
        let c = Configuration::generic(3, 1, 1, 5).unwrap();
        let i = ideal_of(&c, &GbConfig::default()).unwrap();
        assert_eq!(i.generators().len(), 2);
        assert!(i.generators().iter().all(|g| g.degree() == Some(1)));
    }

    #[test]
    fn generic_lines_are_disjoint_and_reproducible() {
        let a = Configuration::generic(3, 1, 2, 9).unwrap();
        let b = Configuration::generic(3, 1, 2, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.pairwise_disjoint());
        assert_eq!(a.family(), Family::DisjointFlats { n: 3, r: 1, s: 2 });
        assert_ne!(a.components(), Configuration::generic(3, 1, 2, 10).unwrap().components());
    }

    #[test]
    fn degenerate_configs_are_rejected() {
        assert!(Configuration::points(2, vec![ints(&[1, 2, 3]), ints(&[2, 4, 6])]).is_err());
        assert!(Configuration::points(2, vec![ints(&[0, 0, 0])]).is_err());
        assert!(Configuration::flats(3, vec![vec![ints(&[1, 0, 0, 0]), ints(&[2, 0, 0, 0])]]).is_err());
        assert!(Configuration::points(2, vec![]).is_err());
        assert!(Configuration::parse_json("{\"n\": 2, \"components\": [{\"type\": \"blob\"}]}").is_err());
    }

    #[test]
    fn json_config_with_rational_strings() {
        let c = Configuration::parse_json(
            r#"{"n": 2, "components": [{"type": "point", "coords": ["1/2", 0, 1]}]}"#,
        )
        .unwrap();
        assert!(c.is_points_only());
        let back = serde_json::to_string(c.source()).unwrap();
        assert_eq!(back, r#"{"n":2,"components":[{"type":"point","coords":["1/2","0","1"]}]}"#);
    }

    #[test]
    fn square_of_a_point_in_p2() {
        let c = Configuration::points(2, vec![ints(&[1, 0, 0])]).unwrap();
        let sp = symbolic_power(&c, 2, &GbConfig::default()).unwrap();
        let expected = Ideal::parse(&["x2^2", "x2*x3", "x3^2"], 3).unwrap();
        assert!(sp.ideal.equals(&expected, &GbConfig::default()).unwrap());
    }

    #[test]
    fn two_points_hilbert_function_by_rank() {
        let c = Configuration::points(2, vec![ints(&[1, 0, 0]), ints(&[0, 1, 0])]).unwrap();
        let i = ideal_of(&c, &GbConfig::default()).unwrap();
        // oracle: forms of degree d vanishing at both points lose two conditions
        let hf: Vec<u32> = (0..5)
            .map(|d| u32::try_from(i.hilbert_function_by_rank(d)).unwrap())
            .collect();
        assert_eq!(hf, vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn intersecting_lines_m2_matches_quoted_polynomial() {
        let c = Configuration::flats(
            3,
            vec![
                vec![ints(&[1, 0, 0, 0]), ints(&[0, 1, 0, 0])],
                vec![ints(&[1, 0, 0, 0]), ints(&[0, 0, 1, 0])],
            ],
        )
        .unwrap();
        let cfg = GbConfig::default();
        let sp = symbolic_power(&c, 2, &cfg).unwrap();
        let gb = GroebnerBasis::from_generators(4, sp.ideal.generators(), MonomialOrder::DegRevLex, &cfg)
            .unwrap();
        let st = gb.initial_staircase();
        for t in 2..8u64 {
            assert_eq!(st.degree_slice_count(t), (6 * t - 3).into());
        }
    }

    #[test]
    fn differential_check_examples() {
        let c = Configuration::points(2, vec![ints(&[1, 0, 0])]).unwrap();
        let f = Polynomial::parse("x2^2", 3).unwrap();
        assert!(differential_membership_check(&f, &c, 2).unwrap());
        let g = Polynomial::parse("x2", 3).unwrap();
        assert!(!differential_membership_check(&g, &c, 2).unwrap());
        assert!(differential_membership_check(&g, &c, 1).unwrap());
        let lines = Configuration::generic(3, 1, 1, 1).unwrap();
        assert!(differential_membership_check(&g.prepend_vars(1), &lines, 1).is_err());
    }

    #[test]
    fn semigroup_containment_for_points() {
        let c = Configuration::generic(2, 0, 3, 4).unwrap();
        let cfg = GbConfig::default();
        let i1 = symbolic_power_ideal(&c, 1, &cfg).unwrap();
        let i2 = symbolic_power_ideal(&c, 2, &cfg).unwrap();
        let i3 = symbolic_power_ideal(&c, 3, &cfg).unwrap();
        assert!(i1.product(&i2).unwrap().is_subset_of(&i3, &cfg).unwrap());
        assert!(i2.is_subset_of(&i1, &cfg).unwrap());
    }
}
