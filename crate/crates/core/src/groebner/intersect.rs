use super::buchberger::GbConfig;
use super::ideal::{GroebnerBasis, Ideal};
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Polynomial};

/// `I ∩ J` by eliminating `u` from `u·I + (1−u)·J`.
pub fn intersect_ideals(i: &Ideal, j: &Ideal, cfg: &GbConfig) -> Result<Ideal> {
    if i.nvars() != j.nvars() {
        return Err(Error::Dimension {
            expected: i.nvars(),
            found: j.nvars(),
        });
    }
    let n = i.nvars() + 1;
    let u = Polynomial::var(n, 0);
    let one_minus_u = &Polynomial::one(n) - &u;
    let mut gens = Vec::new();
    for f in i.generators() {
        gens.push(&u * &f.prepend_vars(1));
    }
    for g in j.generators() {
        gens.push(&one_minus_u * &g.prepend_vars(1));
    }
    let gb = GroebnerBasis::from_generators(n, &gens, MonomialOrder::Elimination { block: 1 }, cfg)?;
    let kept: Vec<Polynomial> = gb
        .basis()
        .iter()
        .filter_map(|p| p.strip_leading_vars(1))
        .collect();
    Ideal::new(kept)
}
