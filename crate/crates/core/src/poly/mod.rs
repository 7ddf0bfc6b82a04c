//! Exact multivariate polynomials over ℚ.

mod monomial;
mod order;
mod parse;
mod polynomial;

pub use monomial::{monomials_of_degree, ExponentVector, Monomial, MAX_VARS};
pub use order::{compare, MonomialOrder};
pub use polynomial::Polynomial;

#[cfg(test)]
mod ring_laws {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;
    use std::cmp::Ordering;

    fn arb_mono(nvars: usize, maxe: u32) -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0..=maxe, nvars).prop_map(|e| Monomial::from_slice(&e))
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((arb_mono(3, 3), -9i64..9, 1i64..5), 0..5).prop_map(|terms| {
            Polynomial::from_terms(3, terms.into_iter().map(|(m, n, d)| (m, rat(n, d))))
        })
    }

    proptest! {
        #[test]
        fn degrevlex_is_a_multiplicative_total_order(
            (a, b, c) in (1usize..=6).prop_flat_map(|n| (arb_mono(n, 4), arb_mono(n, 4), arb_mono(n, 4)))
        ) {
            let ord = MonomialOrder::DegRevLex;
            prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&b, &a).reverse());
            prop_assert_eq!(ord.cmp(&a, &b) == Ordering::Equal, a == b);
            prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&a.mul(&c), &b.mul(&c)));
            if ord.cmp(&a, &b).is_le() && ord.cmp(&b, &c).is_le() {
                prop_assert!(ord.cmp(&a, &c).is_le());
            }
        }

        #[test]
        fn ring_axioms(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f + &g, &g + &f);
            prop_assert_eq!(&f * &g, &g * &f);
        }

        #[test]
        fn leading_term_is_multiplicative(f in arb_poly(), g in arb_poly()) {
            let ord = MonomialOrder::DegRevLex;
            if let (Some((mf, cf)), Some((mg, cg))) = (f.leading_term(ord), g.leading_term(ord)) {
                let prod = &f * &g;
                let (mp, cp) = prod.leading_term(ord).unwrap();
                prop_assert_eq!(mp, mf.mul(&mg));
                prop_assert_eq!(cp.clone(), cf * cg);
            }
        }
    }
}
