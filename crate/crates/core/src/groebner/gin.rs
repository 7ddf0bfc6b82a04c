use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::buchberger::GbConfig;
use super::ideal::Ideal;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{Monomial, MonomialOrder};
use crate::rational::Rational;
use crate::staircase::MonomialStaircase;

pub const DEFAULT_ENTRY_BOUND: u32 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GinParams {
    pub seed: u64,
    pub entry_bound: u32,
    pub gb: GbConfig,
}

impl GinParams {
    pub fn new(seed: u64) -> Self {
        GinParams {
            seed,
            entry_bound: DEFAULT_ENTRY_BOUND,
            gb: GbConfig::default(),
        }
    }
}

/// Generic initial ideal of a homogeneous ideal in `n+1` variables,
/// dehomogenized to a staircase in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GinResult {
    pub staircase: MonomialStaircase,
    pub seed: u64,
    pub entry_bound: u32,
    pub coordinate_matrix: RatMatrix,
    /// Minimal generators of the degrevlex initial ideal in `n+1` variables.
    pub raw_initial: Vec<Monomial>,
}

/// Random invertible integer matrix with entries in `[-bound, bound]`,
/// drawn from stream `stream` of the seeded generator.
pub fn random_invertible_matrix(n: usize, seed: u64, stream: u64, bound: u32) -> RatMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let b = bound as i64;
    loop {
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| Rational::from_integer(rng.gen_range(-b..=b).into()))
                    .collect()
            })
            .collect();
        let m = RatMatrix::from_rows(rows).expect("square");
        if !num_traits::Zero::is_zero(&m.determinant().expect("square")) {
            return m;
        }
    }
}

/// Degrevlex initial ideal after the coordinate change drawn from `stream`.
fn initial_after_change(
    ideal: &Ideal,
    params: &GinParams,
    stream: u64,
) -> Result<(RatMatrix, Vec<Monomial>)> {
    let m = random_invertible_matrix(ideal.nvars(), params.seed, stream, params.entry_bound);
    let moved = ideal.linear_substitute(&m)?;
    let gb = moved.groebner_basis(MonomialOrder::DegRevLex, &params.gb)?;
    Ok((m, gb.initial_ideal()))
}

fn dehomogenize(nvars: usize, raw: &[Monomial]) -> Result<MonomialStaircase> {
    let last = nvars - 1;
    if let Some(bad) = raw.iter().find(|g| g.exponent(last) > 0) {
        return Err(Error::LastVariable(bad.to_string()));
    }
    MonomialStaircase::new(last, raw.iter().map(Monomial::drop_last))
}

/// Computes `gin(I)` with a seeded random coordinate change, checks that no
/// minimal generator involves the last variable, and confirms the result
/// with an independent second draw.
pub fn gin(ideal: &Ideal, params: &GinParams) -> Result<GinResult> {
    if params.entry_bound < 10 {
        return Err(Error::Precondition("entry_bound must be at least 10".into()));
    }
    let n1 = ideal.nvars();
    if n1 < 2 {
        return Err(Error::Precondition("gin needs at least two variables".into()));
    }
    let (matrix, raw) = initial_after_change(ideal, params, 0)?;
    let staircase = dehomogenize(n1, &raw)?;
    let (_, raw_check) = initial_after_change(ideal, params, 1)?;
    if raw_check != raw {
        return Err(Error::GenericityFailure(format!(
            "two coordinate draws (seed {}, bound {}) gave different initial ideals; raise the entry bound",
            params.seed, params.entry_bound
        )));
    }
    Ok(GinResult {
        staircase,
        seed: params.seed,
        entry_bound: params.entry_bound,
        coordinate_matrix: matrix,
        raw_initial: raw,
    })
}
