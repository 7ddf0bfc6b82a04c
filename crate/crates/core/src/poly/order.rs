use std::cmp::Ordering;

use super::Monomial;
use crate::error::Result;

/// Monomial orders with variable precedence `x1 > x2 > … > xk`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Degree reverse lexicographic.
    DegRevLex,
    /// Block order: degrevlex on the first `block` variables decides first,
    /// ties are broken by degrevlex on the remaining ones. Eliminates the
    /// first block.
    Elimination { block: usize },
}

#[inline]
fn degrevlex_range(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // smaller exponent on the last differing variable wins
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    /// Compares two monomials of equal length. Length mismatch is a logic
    /// error here; use [`compare`] for the checked version.
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        let (ea, eb) = (a.exponents(), b.exponents());
        match *self {
            MonomialOrder::DegRevLex => degrevlex_range(ea, eb),
            MonomialOrder::Elimination { block } => degrevlex_range(&ea[..block], &eb[..block])
                .then_with(|| degrevlex_range(&ea[block..], &eb[block..])),
        }
    }

    pub fn max<'a>(&self, a: &'a Monomial, b: &'a Monomial) -> &'a Monomial {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

pub fn compare(a: &Monomial, b: &Monomial, ord: MonomialOrder) -> Result<Ordering> {
    a.check_same(b)?;
    Ok(ord.cmp(a, b))
}
