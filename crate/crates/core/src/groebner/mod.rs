//! Gröbner bases, (generic) initial ideals, ideal intersection and the
//! regularity diagnostics built on them.

mod buchberger;
mod gin;
mod ideal;
mod intersect;

pub use buchberger::GbConfig;
pub use gin::{gin, random_invertible_matrix, GinParams, GinResult, DEFAULT_ENTRY_BOUND};
pub use ideal::{groebner_basis, initial_ideal, GroebnerBasis, Ideal};
pub use intersect::intersect_ideals;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Maximal degree of a minimal generator of the gin staircase.
///
/// For Borel-fixed ideals in characteristic zero this is the
/// Castelnuovo–Mumford regularity.
pub fn regularity_surrogate(g: &GinResult) -> u32 {
    g.staircase.max_generator_degree()
}

/// Chebyshev (minimax) line `reg ≈ a·m + b` through regularity samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LbsrFit {
    pub a: Rational,
    pub b: Rational,
    pub max_residual: Rational,
}

impl LbsrFit {
    /// The fitted line shifted up so it bounds every sample from above.
    pub fn upper_intercept(&self) -> Rational {
        &self.b + &self.max_residual
    }
}

/// Minimax linear fit over `(m, regularity)` samples.
///
/// The optimum of a discrete Chebyshev line fit equioscillates on three
/// abscissae (or passes through two when only two distinct `m` occur), so
/// candidate lines are enumerated exactly and the best one is kept.
pub fn lbsr_fit(regs: &[(u32, u32)]) -> Result<LbsrFit> {
    let pts: Vec<(Rational, Rational)> = regs
        .iter()
        .map(|&(m, r)| (Rational::from_integer(m.into()), Rational::from_integer(r.into())))
        .collect();
    let mut xs: Vec<&Rational> = pts.iter().map(|p| &p.0).collect();
    xs.sort();
    xs.dedup();
    if xs.len() < 2 {
        return Err(Error::Precondition(
            "lbsr_fit needs samples at two or more distinct m".into(),
        ));
    }
    let residual = |a: &Rational, b: &Rational| -> Rational {
        pts.iter()
            .map(|(x, y)| (y - a * x - b).abs())
            .max()
            .unwrap()
    };
    let mut best: Option<LbsrFit> = None;
    let mut consider = |a: Rational, b: Rational| {
        let r = residual(&a, &b);
        let better = match &best {
            None => true,
            Some(cur) => (&r, &a, &b) < (&cur.max_residual, &cur.a, &cur.b),
        };
        if better {
            best = Some(LbsrFit {
                a,
                b,
                max_residual: r,
            });
        }
    };
    // midrange at each abscissa
    let mids: Vec<(Rational, Rational)> = xs
        .iter()
        .map(|&x| {
            let ys: Vec<&Rational> = pts.iter().filter(|p| &p.0 == x).map(|p| &p.1).collect();
            let lo = ys.iter().min().unwrap();
            let hi = ys.iter().max().unwrap();
            (x.clone(), (*lo + *hi) / Rational::from_integer(2.into()))
        })
        .collect();
    for p in 0..mids.len() {
        for q in p + 1..mids.len() {
            let a = (&mids[q].1 - &mids[p].1) / (&mids[q].0 - &mids[p].0);
            let b = &mids[p].1 - &a * &mids[p].0;
            consider(a, b);
        }
    }
    // equioscillation on x_i < x_j < x_k: residuals e, -e, e
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            for k in 0..pts.len() {
                let (xi, yi) = &pts[i];
                let (xj, yj) = &pts[j];
                let (xk, yk) = &pts[k];
                if !(xi < xj && xj < xk) {
                    continue;
                }
                // y_i - a x_i - b = e, y_j - a x_j - b = -e, y_k - a x_k - b = e
                let denom = xk - xi;
                if denom.is_zero() {
                    continue;
                }
                let a = (yk - yi) / &denom;
                let two = Rational::from_integer(2.into());
                let e = ((yi - &a * xi) - (yj - &a * xj)) / &two;
                let b = yi - &a * xi - &e;
                consider(a, b);
            }
        }
    }
    Ok(best.expect("at least one candidate"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn exact_line() {
        let f = lbsr_fit(&[(1, 2), (2, 4), (3, 6)]).unwrap();
        assert_eq!((f.a, f.b, f.max_residual), (int(2), int(0), int(0)));
    }

    #[test]
    fn degenerate_input() {
        assert!(lbsr_fit(&[(1, 1)]).is_err());
        assert!(lbsr_fit(&[(1, 1), (1, 2)]).is_err());
    }

    #[test]
    fn minimax_beats_every_line_on_a_grid() {
        let data = [(1, 2), (2, 5), (3, 5), (4, 9), (5, 10)];
        let f = lbsr_fit(&data).unwrap();
        for an in -10..=30 {
            for bn in -20..=20 {
                let a = rat(an, 4);
                let b = rat(bn, 4);
                let r = data
                    .iter()
                    .map(|&(m, y)| (int(y as i64) - &a * int(m as i64) - &b).abs())
                    .max()
                    .unwrap();
                assert!(f.max_residual <= r);
            }
        }
    }
}

#[cfg(test)]
mod engine_tests {
    use super::*;
    use crate::poly::{Monomial, MonomialOrder, Polynomial};

    fn ideal(gens: &[&str], n: usize) -> Ideal {
        Ideal::parse(gens, n).unwrap()
    }

    fn gb(i: &Ideal) -> GroebnerBasis {
        let g = i
            .groebner_basis(MonomialOrder::DegRevLex, &GbConfig::default())
            .unwrap();
        assert!(g.satisfies_buchberger_criterion());
        assert!(g.is_reduced());
        g
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_slice(e)
    }

    #[test]
    fn already_reduced_basis() {
        let g = gb(&ideal(&["x1", "x2"], 2));
        assert_eq!(g.basis().len(), 2);
        assert_eq!(g.initial_ideal(), vec![mono(&[0, 1]), mono(&[1, 0])]);
    }

    #[test]
    fn principal_after_reduction() {
        let i = Ideal::new(vec![
            Polynomial::parse("x1^2 - x2^2", 2).unwrap(),
            Polynomial::parse("x1 + x2", 2).unwrap(),
        ])
        .unwrap();
        let g = gb(&i);
        assert_eq!(g.basis(), &[Polynomial::parse("x1 + x2", 2).unwrap()]);
        // membership oracle by division: x1^2 - x2^2 = (x1 + x2)(x1 - x2)
        assert!(g.contains(&i.generators()[0]).unwrap());
        assert!(!g.contains(&Polynomial::parse("x1", 2).unwrap()).unwrap());
    }

    #[test]
    fn minimalization_of_leading_terms() {
        let i = Ideal::monomial(2, &[mono(&[2, 0]), mono(&[2, 1])]).unwrap();
        assert_eq!(gb(&i).initial_ideal(), vec![mono(&[2, 0])]);
    }

    #[test]
    fn reduce_rejects_wrong_arity() {
        let g = gb(&ideal(&["x1"], 2));
        assert!(g.reduce(&Polynomial::parse("x1", 3).unwrap()).is_err());
    }

    #[test]
    fn twisted_cubic_hilbert_function_matches_rank() {
        let i = ideal(&["x1*x3 - x2^2", "x2*x4 - x3^2", "x1*x4 - x2*x3"], 4);
        let g = gb(&i);
        let st = g.initial_staircase();
        for d in 0..6 {
            assert_eq!(st.degree_slice_count(d as u64), i.hilbert_function_by_rank(d));
            assert_eq!(i.hilbert_function_by_rank(d), (3 * d + 1).into());
        }
    }

    #[test]
    fn coprime_principal_intersection() {
        let i = ideal(&["x1"], 2);
        let j = ideal(&["x2"], 2);
        let k = intersect_ideals(&i, &j, &GbConfig::default()).unwrap();
        assert!(k.equals(&ideal(&["x1*x2"], 2), &GbConfig::default()).unwrap());
    }

    #[test]
    fn intersection_is_idempotent() {
        let i = ideal(&["x1^2 - x2*x3", "x1 + x3"], 3);
        let k = intersect_ideals(&i, &i, &GbConfig::default()).unwrap();
        assert!(k.equals(&i, &GbConfig::default()).unwrap());
    }

    #[test]
    fn intersection_of_squares_by_monomial_brute_force() {
        let cfg = GbConfig::default();
        let a = ideal(&["x1", "x2"], 4).power(2);
        let b = ideal(&["x1", "x3"], 4).power(2);
        let k = intersect_ideals(&a, &b, &cfg).unwrap();
        let gk = gb(&k);
        for d in 0..=4 {
            for m in crate::poly::monomials_of_degree(4, d) {
                let e = m.exponents();
                let in_both = e[0] + e[1] >= 2 && e[0] + e[2] >= 2;
                assert_eq!(gk.contains(&Polynomial::monomial(m)).unwrap(), in_both, "{m}");
            }
        }
    }

    #[test]
    fn gin_of_a_point_is_the_maximal_ideal_in_n_vars() {
        let i = ideal(&["x2", "x3", "x4"], 4);
        let g = gin(&i, &GinParams::new(7)).unwrap();
        assert_eq!(
            g.staircase.generators(),
            &[mono(&[0, 0, 1]), mono(&[0, 1, 0]), mono(&[1, 0, 0])]
        );
        assert_eq!(regularity_surrogate(&g), 1);
    }

    #[test]
    fn borel_fixed_ideal_is_its_own_gin() {
        let i = ideal(&["x1^2", "x1*x2", "x2^3"], 3);
        let g = gin(&i, &GinParams::new(11)).unwrap();
        assert_eq!(
            g.staircase.generators(),
            &[mono(&[0, 3]), mono(&[1, 1]), mono(&[2, 0])]
        );
        assert_eq!(regularity_surrogate(&g), 3);
    }

    #[test]
    fn gin_rejects_small_entry_bound() {
        let i = ideal(&["x1"], 2);
        let mut p = GinParams::new(1);
        p.entry_bound = 5;
        assert!(matches!(gin(&i, &p), Err(Error::Precondition(_))));
    }

    #[test]
    fn non_saturated_input_trips_last_variable_check() {
        // (x1, x2)^2 ∩ … is saturated, but the irrelevant ideal itself is not
        let i = ideal(&["x1", "x2"], 2);
        assert!(matches!(
            gin(&i, &GinParams::new(3)),
            Err(Error::LastVariable(_))
        ));
    }

    #[test]
    fn pair_cap_is_enforced() {
        let i = ideal(&["x1*x3 - x2^2", "x2*x4 - x3^2", "x1*x4 - x2*x3"], 4);
        let cfg = GbConfig { max_pairs: 1 };
        assert!(matches!(
            i.groebner_basis(MonomialOrder::DegRevLex, &cfg),
            Err(Error::ComputationLimit(_))
        ));
    }
}
