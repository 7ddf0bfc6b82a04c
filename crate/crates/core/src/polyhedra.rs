//! Exact rational polyhedra: Newton polyhedra of staircases, their scaled
//! unions, clipping against the corner simplex `T_t`, and exact volumes.
//!
//! Hulls and vertex enumeration use the double-description method on the
//! homogenized cone; volumes come from a recursive pulling triangulation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank_of, RatMatrix};
use crate::rational::{factorial, serde_rational, Rational};
use crate::staircase::MonomialStaircase;

/// Largest ambient dimension accepted by the polyhedral routines.
pub const MAX_DIM: usize = 6;

/// The half-space `coeffs·x ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Facet {
    #[serde(with = "serde_rational::vec")]
    pub coeffs: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
}

impl Facet {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Facet { coeffs, rhs }
    }

    /// `rhs − coeffs·x`; nonnegative exactly on the half-space.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        &self.rhs - dot(&self.coeffs, x)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        !self.slack(x).is_negative()
    }

    /// Whether the direction `r` stays inside the half-space.
    pub fn recedes(&self, r: &[Rational]) -> bool {
        !dot(&self.coeffs, r).is_positive()
    }

    fn scaled(&self, lambda: &Rational) -> Self {
        Facet { coeffs: self.coeffs.clone(), rhs: &self.rhs * lambda }
    }
}

/// `conv(vertices) + cone(rays)` together with its facets when it is
/// full-dimensional. A polyhedron without vertices is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPolyhedron {
    pub dim: usize,
    #[serde(with = "serde_rational::vec2")]
    pub vertices: Vec<Vec<Rational>>,
    #[serde(with = "serde_rational::vec2")]
    pub rays: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Facet>>,
}

/// Where the triangulation used by [`RationalPolyhedron::volume_with`]
/// places its cone points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Apex {
    /// Pull from the first vertex of every face.
    FirstVertex,
    /// Cone every facet to the vertex centroid; facets are pulled from
    /// their last vertex.
    Centroid,
}

impl RationalPolyhedron {
    pub fn empty(dim: usize) -> Self {
        RationalPolyhedron { dim, vertices: Vec::new(), rays: Vec::new(), facets: None }
    }

    /// `conv(points) + cone(rays)`, with redundant points removed and facets
    /// computed.
    pub fn from_generators(
        dim: usize,
        points: Vec<Vec<Rational>>,
        rays: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        check_dim(dim)?;
        for v in points.iter().chain(&rays) {
            if v.len() != dim {
                return Err(Error::Dimension { expected: dim, found: v.len() });
            }
        }
        let points = dedup(points);
        if points.is_empty() {
            return Ok(Self::empty(dim));
        }
        let rays = dedup(rays.into_iter().filter(|r| r.iter().any(|c| !c.is_zero())).map(|r| primitive(&r)).collect());
        let (keep, facets) = hull(dim, &points, &rays)?;
        Ok(RationalPolyhedron {
            dim,
            vertices: keep.into_iter().map(|i| points[i].clone()).collect(),
            rays,
            facets,
        })
    }

    /// The polytope spanned by `points`.
    pub fn from_vertices(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        Self::from_generators(dim, points, Vec::new())
    }

    /// The intersection of half-spaces. The result must contain no line.
    pub fn from_inequalities(dim: usize, halfspaces: &[Facet]) -> Result<Self> {
        check_dim(dim)?;
        for h in halfspaces {
            if h.coeffs.len() != dim {
                return Err(Error::Dimension { expected: dim, found: h.coeffs.len() });
            }
        }
        // rhs·x0 − coeffs·x ≥ 0 together with x0 ≥ 0
        let mut rows: Vec<Vec<Rational>> = halfspaces
            .iter()
            .map(|h| std::iter::once(h.rhs.clone()).chain(h.coeffs.iter().map(|c| -c)).collect())
            .collect();
        rows.push(unit(dim + 1, 0));
        if rank_of(&rows) < dim + 1 {
            return Err(Error::Precondition(
                "half-space system has a lineality space".into(),
            ));
        }
        let mut points = Vec::new();
        let mut rays = Vec::new();
        for y in extreme_rays(&rows, dim + 1) {
            if y[0].is_zero() {
                rays.push(y[1..].to_vec());
            } else {
                points.push(y[1..].iter().map(|c| c / &y[0]).collect());
            }
        }
        if points.is_empty() {
            return Ok(Self::empty(dim));
        }
        Self::from_generators(dim, points, rays)
    }

    /// The corner simplex `T_t = {x ≥ 0, Σx ≤ t}`.
    pub fn simplex(dim: usize, t: &Rational) -> Result<Self> {
        if t.is_negative() {
            return Err(Error::Precondition(format!("negative simplex size {t}")));
        }
        let mut points = vec![vec![Rational::zero(); dim]];
        for i in 0..dim {
            let mut p = vec![Rational::zero(); dim];
            p[i] = t.clone();
            points.push(p);
        }
        Self::from_vertices(dim, points)
    }

    /// The positive orthant `ℝⁿ_{≥0}`.
    pub fn orthant(dim: usize) -> Result<Self> {
        Self::from_generators(dim, vec![vec![Rational::zero(); dim]], axes(dim))
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.facets.is_some()
    }

    pub fn facets(&self) -> &[Facet] {
        self.facets.as_deref().unwrap_or(&[])
    }

    /// Membership via the facet description; lower-dimensional polyhedra
    /// are tested against their generators instead.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: x.len() });
        }
        if self.is_empty() {
            return Ok(false);
        }
        match &self.facets {
            Some(fs) => Ok(fs.iter().all(|f| f.contains(x))),
            None => {
                let mut points = self.vertices.clone();
                points.push(x.to_vec());
                // a point outside a polyhedron is a vertex of the enlarged hull
                let (keep, _) = hull(self.dim, &points, &self.rays)?;
                Ok(!keep.contains(&self.vertices.len()))
            }
        }
    }

    /// Whether `self ⊆ other`, certified on generators against the facets
    /// of `other` (which must be full-dimensional or empty).
    pub fn is_subset_of(&self, other: &RationalPolyhedron) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: other.dim, found: self.dim });
        }
        if self.is_empty() {
            return Ok(true);
        }
        let Some(fs) = &other.facets else {
            return Err(Error::Precondition("containment test needs a full-dimensional polyhedron".into()));
        };
        Ok(fs.iter().all(|f| {
            self.vertices.iter().all(|v| f.contains(v)) && self.rays.iter().all(|r| f.recedes(r))
        }))
    }

    /// Checks that the cached facets certify the vertex set: every vertex
    /// satisfies every inequality, every facet is supported by generators of
    /// full affine rank, and every vertex lies on `dim` independent facets.
    pub fn certify(&self) -> bool {
        let Some(fs) = &self.facets else { return true };
        let n = self.dim;
        let hom = self.homogeneous_generators();
        for f in fs {
            if !self.vertices.iter().all(|v| f.contains(v)) || !self.rays.iter().all(|r| f.recedes(r)) {
                return false;
            }
            let normal: Vec<Rational> =
                std::iter::once(f.rhs.clone()).chain(f.coeffs.iter().map(|c| -c)).collect();
            let tight: Vec<Vec<Rational>> =
                hom.iter().filter(|g| dot(&normal, g).is_zero()).cloned().collect();
            if rank_of(&tight) != n {
                return false;
            }
        }
        self.vertices.iter().all(|v| {
            let active: Vec<Vec<Rational>> =
                fs.iter().filter(|f| f.slack(v).is_zero()).map(|f| f.coeffs.clone()).collect();
            rank_of(&active) == n
        })
    }

    /// `λ·P`: vertices scaled, rays unchanged.
    pub fn scale(&self, lambda: &Rational) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::Precondition(format!("scale factor must be positive, got {lambda}")));
        }
        Ok(RationalPolyhedron {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.iter().map(|c| c * lambda).collect()).collect(),
            rays: self.rays.clone(),
            facets: self.facets.as_ref().map(|fs| fs.iter().map(|f| f.scaled(lambda)).collect()),
        })
    }

    /// Exact Lebesgue volume; lower-dimensional polytopes have volume 0.
    pub fn volume(&self) -> Result<Rational> {
        self.volume_with(Apex::FirstVertex)
    }

    /// Volume through the triangulation selected by `apex`.
    pub fn volume_with(&self, apex: Apex) -> Result<Rational> {
        if self.is_empty() {
            return Ok(Rational::zero());
        }
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        if self.facets.is_none() {
            return Ok(Rational::zero());
        }
        let simplices = self.triangulate(apex);
        let n = self.dim;
        let total: Rational = simplices.iter().map(|s| simplex_volume_scaled(s)).sum();
        Ok(total / Rational::from_integer(factorial(n as u32).into()))
    }

    /// Full-dimensional simplices (as point lists) covering the polytope
    /// with disjoint interiors.
    pub fn triangulate(&self, apex: Apex) -> Vec<Vec<Vec<Rational>>> {
        let n = self.dim;
        let incidence: Vec<Vec<usize>> = self
            .facets()
            .iter()
            .map(|f| (0..self.vertices.len()).filter(|&i| f.slack(&self.vertices[i]).is_zero()).collect())
            .collect();
        let tri = Triangulator { vertices: &self.vertices, incidence: &incidence };
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        match apex {
            Apex::FirstVertex => tri.pull(&all, n, false, &mut out),
            Apex::Centroid => {
                for face in &incidence {
                    tri.pull(face, n - 1, true, &mut out);
                }
            }
        }
        let centroid = match apex {
            Apex::Centroid => Some(centroid(&self.vertices)),
            Apex::FirstVertex => None,
        };
        out.into_iter()
            .map(|s| {
                let mut pts: Vec<Vec<Rational>> = s.iter().map(|&i| self.vertices[i].clone()).collect();
                if let Some(c) = &centroid {
                    pts.insert(0, c.clone());
                }
                pts
            })
            .collect()
    }

    fn homogeneous_generators(&self) -> Vec<Vec<Rational>> {
        homogenize(&self.vertices, &self.rays)
    }
}

/// `P ∩ T_t` with its base polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClippedRegion {
    pub base: RationalPolyhedron,
    #[serde(with = "serde_rational")]
    pub t: Rational,
    pub polytope: RationalPolyhedron,
}

impl ClippedRegion {
    pub fn volume(&self) -> Result<Rational> {
        self.polytope.volume()
    }
}

/// `Γ ∩ T_t` for a limiting-shape approximant `Δ`: the closure of
/// `T_t \ Δ`, given as polytopes with pairwise disjoint interiors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRegion {
    #[serde(with = "serde_rational")]
    pub t: Rational,
    #[serde(with = "serde_rational")]
    pub volume: Rational,
    pub clipped: ClippedRegion,
    pub pieces: Vec<RationalPolyhedron>,
}

impl GammaRegion {
    /// The volume recomputed from the exported pieces.
    pub fn pieces_volume(&self) -> Result<Rational> {
        self.pieces.iter().map(|p| p.volume()).sum()
    }
}

/// `P(J)`: convex hull of the staircase plus the positive orthant. The zero
/// ideal gives the empty polyhedron.
pub fn newton_polyhedron(s: &MonomialStaircase) -> Result<RationalPolyhedron> {
    let n = s.nvars();
    check_dim(n)?;
    if s.is_zero_ideal() {
        return Ok(RationalPolyhedron::empty(n));
    }
    let points = s
        .generators()
        .iter()
        .map(|g| g.exponents().iter().map(|&e| Rational::from_integer(e.into())).collect())
        .collect();
    RationalPolyhedron::from_generators(n, points, axes(n))
}

/// `conv(⋃ P_i)` with the common recession cone.
pub fn convex_union_approximant(polys: &[RationalPolyhedron]) -> Result<RationalPolyhedron> {
    let Some(first) = polys.first() else {
        return Err(Error::Precondition("no polyhedra to unite".into()));
    };
    let dim = first.dim;
    let mut points = Vec::new();
    let mut rays = Vec::new();
    for p in polys {
        if p.dim != dim {
            return Err(Error::Dimension { expected: dim, found: p.dim });
        }
        points.extend(p.vertices.iter().cloned());
        if !p.is_empty() {
            rays.extend(p.rays.iter().cloned());
        }
    }
    RationalPolyhedron::from_generators(dim, points, rays)
}

/// `P ∩ T_t` by exact vertex enumeration.
pub fn clip_to_simplex(p: &RationalPolyhedron, t: &Rational) -> Result<ClippedRegion> {
    if t.is_negative() {
        return Err(Error::Precondition(format!("negative truncation level {t}")));
    }
    let n = p.dim;
    let polytope = if p.is_empty() {
        RationalPolyhedron::empty(n)
    } else {
        let Some(fs) = &p.facets else {
            return Err(Error::Precondition("clipping needs a full-dimensional polyhedron".into()));
        };
        let mut halfspaces = fs.clone();
        halfspaces.extend(simplex_halfspaces(n, t));
        RationalPolyhedron::from_inequalities(n, &halfspaces)?
    };
    Ok(ClippedRegion { base: p.clone(), t: t.clone(), polytope })
}

/// `vol(Γ ∩ T_t) = tⁿ/n! − vol(Δ ∩ T_t)` together with an explicit
/// decomposition of the complement.
pub fn gamma_region(delta: &RationalPolyhedron, t: &Rational) -> Result<GammaRegion> {
    if t.is_negative() {
        return Err(Error::Precondition(format!("negative truncation level {t}")));
    }
    let n = delta.dim;
    let simplex_vol = crate::rational::pow(t, n as u32) / Rational::from_integer(factorial(n as u32).into());
    let t_simplex = RationalPolyhedron::simplex(n, t)?;
    if !delta.is_empty() && !delta.is_full_dimensional() {
        // a null set: Γ ∩ T_t is the whole simplex
        let clipped = ClippedRegion { base: delta.clone(), t: t.clone(), polytope: RationalPolyhedron::empty(n) };
        return Ok(GammaRegion { t: t.clone(), volume: simplex_vol, clipped, pieces: vec![t_simplex] });
    }
    let clipped = clip_to_simplex(delta, t)?;
    let volume = &simplex_vol - clipped.volume()?;
    let pieces = if delta.is_empty() {
        if simplex_vol.is_zero() { Vec::new() } else { vec![t_simplex] }
    } else {
        complement_pieces(delta, t)?
    };
    Ok(GammaRegion { t: t.clone(), volume, clipped, pieces })
}

/// `T_t ∩ {f_k violated} ∩ {f_j holds, j < k}` over the facets of `Δ` that
/// are not coordinate hyperplanes.
fn complement_pieces(delta: &RationalPolyhedron, t: &Rational) -> Result<Vec<RationalPolyhedron>> {
    let n = delta.dim;
    let inner: Vec<&Facet> = delta.facets().iter().filter(|f| !is_coordinate_facet(f)).collect();
    let mut pieces = Vec::new();
    for (k, f) in inner.iter().enumerate() {
        let mut halfspaces = simplex_halfspaces(n, t);
        halfspaces.extend(inner[..k].iter().map(|g| (*g).clone()));
        halfspaces.push(Facet::new(f.coeffs.iter().map(|c| -c).collect(), -&f.rhs));
        let piece = RationalPolyhedron::from_inequalities(n, &halfspaces)?;
        if piece.is_full_dimensional() {
            pieces.push(piece);
        }
    }
    Ok(pieces)
}

fn is_coordinate_facet(f: &Facet) -> bool {
    f.rhs.is_zero()
        && f.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
        && f.coeffs.iter().all(|c| !c.is_positive())
}

fn simplex_halfspaces(n: usize, t: &Rational) -> Vec<Facet> {
    let mut out: Vec<Facet> = (0..n).map(|i| Facet::new(unit(n, i).iter().map(|c| -c).collect(), Rational::zero())).collect();
    out.push(Facet::new(vec![Rational::one(); n], t.clone()));
    out
}

struct Triangulator<'a> {
    vertices: &'a [Vec<Rational>],
    incidence: &'a [Vec<usize>],
}

impl Triangulator<'_> {
    /// Pulling triangulation of the `k`-dimensional face spanned by `face`.
    fn pull(&self, face: &[usize], k: usize, from_last: bool, out: &mut Vec<Vec<usize>>) {
        if face.len() == k + 1 {
            out.push(face.to_vec());
            return;
        }
        let apex = if from_last { *face.last().unwrap() } else { face[0] };
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for inc in self.incidence {
            let sub: Vec<usize> = face.iter().copied().filter(|i| inc.binary_search(i).is_ok()).collect();
            if sub.len() < k || sub.len() == face.len() || sub.contains(&apex) || seen.contains(&sub) {
                continue;
            }
            if self.affine_dim(&sub) + 1 != k {
                continue;
            }
            let mut inner = Vec::new();
            self.pull(&sub, k - 1, from_last, &mut inner);
            for mut s in inner {
                s.insert(0, apex);
                out.push(s);
            }
            seen.push(sub);
        }
    }

    fn affine_dim(&self, face: &[usize]) -> usize {
        let base = &self.vertices[face[0]];
        let diffs: Vec<Vec<Rational>> = face[1..]
            .iter()
            .map(|&i| self.vertices[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        rank_of(&diffs)
    }
}

/// `|det|` of the edge matrix of a simplex (n! times its volume).
fn simplex_volume_scaled(pts: &[Vec<Rational>]) -> Rational {
    let base = &pts[0];
    let rows: Vec<Vec<Rational>> =
        pts[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let det = RatMatrix::from_rows(rows).and_then(|m| m.determinant()).expect("square edge matrix");
    det.abs()
}

/// Vertex indices and (for full-dimensional input) facets of
/// `conv(points) + cone(rays)`.
fn hull(dim: usize, points: &[Vec<Rational>], rays: &[Vec<Rational>]) -> Result<(Vec<usize>, Option<Vec<Facet>>)> {
    let gens = homogenize(points, rays);
    let rank = rank_of(&gens);
    if rank == dim + 1 {
        let mut facets: Vec<Facet> = extreme_rays(&gens, dim + 1)
            .into_iter()
            .filter(|y| y[1..].iter().any(|c| !c.is_zero()))
            .map(|y| Facet::new(y[1..].iter().map(|c| -c).collect(), y[0].clone()))
            .collect();
        facets.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then_with(|| a.rhs.cmp(&b.rhs)));
        let keep = (0..points.len())
            .filter(|&i| {
                let active: Vec<Vec<Rational>> = facets
                    .iter()
                    .filter(|f| f.slack(&points[i]).is_zero())
                    .map(|f| f.coeffs.clone())
                    .collect();
                rank_of(&active) == dim
            })
            .collect();
        return Ok((keep, Some(facets)));
    }
    // Lower-dimensional: project onto coordinates on which the affine hull
    // is a graph, and take the hull there.
    let k = rank - 1;
    if k == 0 {
        return Ok((vec![0], None));
    }
    let base = &points[0];
    let mut dirs: Vec<Vec<Rational>> =
        points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    dirs.extend(rays.iter().cloned());
    let (_, pivots) = RatMatrix::from_rows(dirs)?.rref();
    let project = |v: &Vec<Rational>| -> Vec<Rational> { pivots.iter().map(|&j| v[j].clone()).collect() };
    let ppoints: Vec<Vec<Rational>> = points.iter().map(project).collect();
    let prays: Vec<Vec<Rational>> = rays.iter().map(project).collect();
    let (keep, _) = hull(k, &ppoints, &prays)?;
    Ok((keep, None))
}

fn homogenize(points: &[Vec<Rational>], rays: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    points
        .iter()
        .map(|p| std::iter::once(Rational::one()).chain(p.iter().cloned()).collect())
        .chain(rays.iter().map(|r| std::iter::once(Rational::zero()).chain(r.iter().cloned()).collect()))
        .collect()
}

/// Extreme rays of the pointed cone `{x ∈ ℚ^d : row·x ≥ 0}`; the rows must
/// have rank `d`. Rays are returned as primitive integer vectors.
fn extreme_rays(rows: &[Vec<Rational>], d: usize) -> Vec<Vec<Rational>> {
    // start from a simplicial cone on d independent rows
    let mut basis: Vec<usize> = Vec::new();
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        chosen.push(r.clone());
        if rank_of(&chosen) == chosen.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        } else {
            chosen.pop();
        }
    }
    assert_eq!(basis.len(), d, "extreme_rays needs a pointed cone");
    let inv = RatMatrix::from_rows(chosen).and_then(|m| m.inverse()).expect("independent rows");
    let words = rows.len().div_ceil(64);
    let mut rays: Vec<(Vec<Rational>, Vec<u64>)> = (0..d)
        .map(|j| {
            let r: Vec<Rational> = (0..d).map(|i| inv[(i, j)].clone()).collect();
            let mut z = vec![0u64; words];
            for (jj, &row) in basis.iter().enumerate() {
                if jj != j {
                    z[row / 64] |= 1 << (row % 64);
                }
            }
            (primitive(&r), z)
        })
        .collect();

    for (i, a) in rows.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let values: Vec<Rational> = rays.iter().map(|(r, _)| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        let mut next: Vec<(Vec<Rational>, Vec<u64>)> = Vec::new();
        for (k, (r, z)) in rays.iter().enumerate() {
            if values[k].is_zero() {
                let mut z = z.clone();
                z[i / 64] |= 1 << (i % 64);
                next.push((r.clone(), z));
            } else if values[k].is_positive() {
                next.push((r.clone(), z.clone()));
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p].1.iter().zip(&rays[q].1).map(|(x, y)| x & y).collect();
                let popcount: u32 = common.iter().map(|w| w.count_ones()).sum();
                if (popcount as usize) + 2 < d {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(k, (_, z))| {
                    k == p || k == q || common.iter().zip(z).any(|(c, w)| c & !w != 0)
                });
                if !adjacent {
                    continue;
                }
                let (vp, vq) = (&values[p], &values[q]);
                let r: Vec<Rational> =
                    rays[q].0.iter().zip(&rays[p].0).map(|(x, y)| vp * x - vq * y).collect();
                let mut z = common;
                z[i / 64] |= 1 << (i % 64);
                next.push((primitive(&r), z));
            }
        }
        rays = next;
    }
    rays.into_iter().map(|(r, _)| r).collect()
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::Precondition("polyhedra need dimension at least 1".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
    }
    Ok(())
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn axes(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| unit(n, i)).collect()
}

fn centroid(points: &[Vec<Rational>]) -> Vec<Rational> {
    let k = Rational::from_integer(points.len().into());
    (0..points[0].len())
        .map(|j| points.iter().map(|p| p[j].clone()).sum::<Rational>() / &k)
        .collect()
}

/// Positive multiple with coprime integer entries.
fn primitive(v: &[Rational]) -> Vec<Rational> {
    let den = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect()
}

fn dedup(mut v: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut seen = std::collections::HashSet::new();
    v.retain(|x| seen.insert(x.clone()));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn pts(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect()
    }

    fn example1_delta() -> RationalPolyhedron {
        let s = MonomialStaircase::from_exponents(3, &[vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![1, 0, 1]]).unwrap();
        newton_polyhedron(&s).unwrap()
    }

    fn cube(n: usize) -> RationalPolyhedron {
        let points = (0..1u32 << n)
            .map(|mask| (0..n).map(|i| int(((mask >> i) & 1) as i64)).collect())
            .collect();
        RationalPolyhedron::from_vertices(n, points).unwrap()
    }

    #[test]
    fn newton_of_coordinate_ideal() {
        let s = MonomialStaircase::from_exponents(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let p = newton_polyhedron(&s).unwrap();
        assert_eq!(p.vertices, pts(&[&[0, 1], &[1, 0]]));
        assert_eq!(p.rays, pts(&[&[1, 0], &[0, 1]]));
        assert!(p.certify());
    }

    #[test]
    fn newton_drops_midpoints() {
        let s = MonomialStaircase::from_exponents(2, &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
        let p = newton_polyhedron(&s).unwrap();
        assert_eq!(p.vertices, pts(&[&[0, 2], &[2, 0]]));
        // facets: x ≥ 0, y ≥ 0, x + y ≥ 2
        assert_eq!(p.facets().len(), 3);
        assert!(p.facets().contains(&Facet::new(vec![int(-1), int(-1)], int(-2))));
    }

    #[test]
    fn newton_of_two_lines_gin() {
        let p = example1_delta();
        let mut v = p.vertices.clone();
        v.sort();
        // (1,1,0) is the midpoint of (2,0,0) and (0,2,0): it spans the hull
        // but is not a vertex
        assert_eq!(v, pts(&[&[0, 2, 0], &[1, 0, 1], &[2, 0, 0]]));
        assert!(p.contains(&[int(1), int(1), int(0)]).unwrap());
        assert!(p.certify());
        // 2x + y ≥ 2 supports Δ along the edge (1,0,1)–(0,2,0) side
        assert!(p.facets().contains(&Facet::new(vec![int(-2), int(-1), int(0)], int(-2))));
    }

    #[test]
    fn simplex_and_cube_volumes() {
        let t = RationalPolyhedron::simplex(3, &int(2)).unwrap();
        assert_eq!(t.volume().unwrap(), rat(4, 3));
        assert_eq!(t.volume_with(Apex::Centroid).unwrap(), rat(4, 3));
        for n in 1..=4 {
            let c = cube(n);
            assert_eq!(c.vertices.len(), 1 << n);
            assert_eq!(c.facets().len(), 2 * n);
            assert_eq!(c.volume().unwrap(), int(1));
            assert_eq!(c.volume_with(Apex::Centroid).unwrap(), int(1));
        }
    }

    #[test]
    fn scale_doubles_vertices() {
        let t = RationalPolyhedron::simplex(3, &int(1)).unwrap();
        let s = t.scale(&int(2)).unwrap();
        assert_eq!(s, RationalPolyhedron::simplex(3, &int(2)).unwrap());
        assert_eq!(t.scale(&int(1)).unwrap(), t);
        assert!(t.scale(&int(0)).is_err());
    }

    #[test]
    fn unbounded_volume_is_an_error() {
        let o = RationalPolyhedron::orthant(2).unwrap();
        assert_eq!(o.volume(), Err(Error::Unbounded));
    }

    #[test]
    fn lower_dimensional_polytopes_have_zero_volume() {
        let seg = RationalPolyhedron::from_vertices(
            3,
            pts(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2], &[1, 0, 0]]),
        )
        .unwrap();
        assert!(!seg.is_full_dimensional());
        assert_eq!(seg.vertices.len(), 3); // (1,1,1) lies between the others
        assert_eq!(seg.volume().unwrap(), int(0));
    }

    #[test]
    fn orthant_clips_to_the_simplex() {
        let o = RationalPolyhedron::orthant(3).unwrap();
        for t in [int(0), int(1), rat(7, 2)] {
            let c = clip_to_simplex(&o, &t).unwrap();
            assert_eq!(c.volume().unwrap(), crate::rational::pow(&t, 3) / int(6));
        }
        let c = clip_to_simplex(&o, &int(0)).unwrap();
        assert_eq!(c.polytope.vertices, pts(&[&[0, 0, 0]]));
    }

    #[test]
    fn example1_clipped_delta_and_gamma() {
        let delta = example1_delta();
        let c = clip_to_simplex(&delta, &int(4)).unwrap();
        assert_eq!(c.volume().unwrap(), rat(22, 3));
        for t in [int(2), int(3), int(4), rat(7, 2), int(7)] {
            let g = gamma_region(&delta, &t).unwrap();
            assert_eq!(g.volume, &t - rat(2, 3), "t = {t}");
            assert_eq!(g.pieces_volume().unwrap(), g.volume);
        }
        // below t = 2 the cylinder is cut by the simplex
        let g = gamma_region(&delta, &int(1)).unwrap();
        assert_eq!(g.volume, rat(1, 6));
    }

    #[test]
    fn example1_cylinder_and_pyramid() {
        // Γ for t ≥ 2 is a cylinder over the triangle (0,0,0),(1,0,0),(0,2,0)
        // plus the pyramid over (1,0,0),(2,0,0),(0,2,0) with apex (1,0,1)
        let pyramid = RationalPolyhedron::from_vertices(3, pts(&[&[1, 0, 0], &[2, 0, 0], &[0, 2, 0], &[1, 0, 1]])).unwrap();
        assert_eq!(pyramid.volume().unwrap(), rat(1, 3));
        for t in [2, 3, 5] {
            let cyl = RationalPolyhedron::from_generators(
                3,
                pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 2, 0]]),
                pts(&[&[0, 0, 1]]),
            )
            .unwrap();
            let cyl_t = clip_to_simplex(&cyl, &int(t)).unwrap();
            assert_eq!(cyl_t.volume().unwrap() + pyramid.volume().unwrap(), int(t) - rat(2, 3));
        }
    }

    #[test]
    fn gamma_of_trivial_shapes() {
        let unit = newton_polyhedron(&MonomialStaircase::unit_ideal(3)).unwrap();
        assert_eq!(gamma_region(&unit, &int(3)).unwrap().volume, int(0));
        let zero = newton_polyhedron(&MonomialStaircase::zero_ideal(3)).unwrap();
        let g = gamma_region(&zero, &int(3)).unwrap();
        assert_eq!(g.volume, rat(27, 6));
        assert_eq!(g.pieces_volume().unwrap(), rat(27, 6));
    }

    #[test]
    fn union_approximant() {
        let a = example1_delta();
        assert_eq!(convex_union_approximant(std::slice::from_ref(&a)).unwrap(), a);
        let bigger = newton_polyhedron(&MonomialStaircase::from_exponents(3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap()).unwrap();
        let u = convex_union_approximant(&[a.clone(), bigger.clone()]).unwrap();
        assert_eq!(u.vertices, bigger.vertices);
        assert!(a.is_subset_of(&u).unwrap());
    }

    #[test]
    fn inequalities_roundtrip() {
        let p = example1_delta();
        let q = RationalPolyhedron::from_inequalities(3, p.facets()).unwrap();
        assert_eq!(q.facets, p.facets);
        let mut a = p.vertices.clone();
        let mut b = q.vertices.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn infeasible_system_is_empty() {
        let hs = vec![
            Facet::new(vec![int(1)], int(0)),
            Facet::new(vec![int(-1)], int(-1)),
        ];
        assert!(RationalPolyhedron::from_inequalities(1, &hs).unwrap().is_empty());
    }

    #[test]
    fn dimension_limit() {
        assert!(matches!(RationalPolyhedron::orthant(7), Err(Error::DimensionTooLarge { dim: 7, .. })));
    }

    #[test]
    fn json_round_trip() {
        let p = example1_delta();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"facets\""));
        let back: RationalPolyhedron = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    fn random_polytope() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(-4i64..=4, n), n + 1..=10)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn volume_is_apex_independent((n, raw) in random_polytope()) {
            let points: Vec<Vec<Rational>> = raw.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect();
            let p = RationalPolyhedron::from_vertices(n, points).unwrap();
            prop_assert!(p.certify());
            prop_assert_eq!(p.volume().unwrap(), p.volume_with(Apex::Centroid).unwrap());
        }

        #[test]
        fn volume_is_permutation_and_translation_invariant((n, raw) in random_polytope(), shift in prop::collection::vec(-5i64..=5, 4)) {
            let points: Vec<Vec<Rational>> = raw.iter().map(|r| r.iter().map(|&c| int(c)).collect()).collect();
            let v = RationalPolyhedron::from_vertices(n, points.clone()).unwrap().volume().unwrap();
            let moved: Vec<Vec<Rational>> = points
                .iter()
                .map(|p| p.iter().rev().zip(&shift).map(|(c, &s)| c + int(s)).collect())
                .collect();
            let w = RationalPolyhedron::from_vertices(n, moved).unwrap().volume().unwrap();
            prop_assert_eq!(v, w);
        }
    }
}
