//! Reproductions of the worked examples, one PASS/FAIL line per check.

use serde::Serialize;
use serde_json::{json, Value};

use limshape::asymptotics::{
    ahf_estimate, ahp_additivity_check, ahp_flats, flats_hp, intersecting_lines_bivariate, intersecting_lines_hp,
    EstimateOptions, UniPoly,
};
use limshape::configurations::{symbolic_power_ideal, Configuration};
use limshape::groebner::{gin, regularity_surrogate};
use limshape::polyhedra::{gamma_region, RationalPolyhedron};
use limshape::rational::{format_rational, int, rat, Rational};
use limshape::staircase::MonomialStaircase;

use crate::commands::{gb_config, gin_params};
use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::{Cli, Example};

#[derive(Debug, Serialize)]
struct Outcome {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Suite {
    outcomes: Vec<Outcome>,
}

impl Suite {
    fn record(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        let detail = detail.into();
        println!("{} {name} — {detail}", if pass { "PASS" } else { "FAIL" });
        self.outcomes.push(Outcome { name: name.to_string(), pass, detail });
    }

    /// Runs a fallible check; an error counts as a failure.
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String), limshape::Error>) {
        match f() {
            Ok((pass, detail)) => self.record(name, pass, detail),
            Err(e) => self.record(name, false, format!("error: {e}")),
        }
    }

    fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.pass).count()
    }
}

/// Returns the JSON summary and the number of failed checks.
pub fn run(cli: &Cli, example: Example) -> Result<(Value, usize), CliError> {
    let mut suite = Suite::default();
    let name = match example {
        Example::TwoLines => {
            two_lines(cli, &mut suite);
            "two-lines"
        }
        Example::IntersectingLines => {
            intersecting_lines(cli, &mut suite);
            "intersecting-lines"
        }
        Example::PointsGrid => {
            points_grid(cli, &mut suite);
            "points-grid"
        }
    };
    let failures = suite.failures();
    let manifest = RunManifest::new("verify", cli.seed, cli.entry_bound);
    let value = json!({
        "manifest": manifest,
        "example": name,
        "checks": suite.outcomes,
        "failures": failures,
    });
    Ok((value, failures))
}

fn estimate_options(cli: &Cli) -> EstimateOptions {
    EstimateOptions { seed: cli.seed, entry_bound: cli.entry_bound, gb: gb_config(), jobs: cli.jobs.max(1) }
}

fn pts(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

/// HF of `gin(I^(m))` against a reference polynomial from the regularity on.
fn hf_matches(
    config: &Configuration,
    m: u32,
    cli: &Cli,
    extra: u32,
    reference: &UniPoly,
) -> Result<(bool, String), limshape::Error> {
    let ideal = symbolic_power_ideal(config, m, &gb_config())?;
    let g = gin(&ideal, &gin_params(cli))?;
    let reg = regularity_surrogate(&g);
    let mut bad = Vec::new();
    for d in reg..=reg + extra {
        let hf = Rational::from_integer(g.staircase.hilbert_function_slice(d as u64).into());
        let hp = reference.eval(&int(d as i64));
        if hf != hp {
            bad.push(format!("d={d}: HF={hf}, HP={hp}"));
        }
    }
    let detail = if bad.is_empty() {
        format!("m={m}: HF = {reference} for d in {reg}..={}", reg + extra)
    } else {
        format!("m={m}: {}", bad.join("; "))
    };
    Ok((bad.is_empty(), detail))
}

fn two_lines(cli: &Cli, suite: &mut Suite) {
    let config = match Configuration::generic(3, 1, 2, cli.seed) {
        Ok(c) => c,
        Err(e) => return suite.record("configuration", false, format!("error: {e}")),
    };
    let expected = MonomialStaircase::from_exponents(3, &[vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![1, 0, 1]])
        .expect("valid staircase");

    let mut gin1 = None;
    suite.check("gin-m1", || {
        let ideal = symbolic_power_ideal(&config, 1, &gb_config())?;
        let g = gin(&ideal, &gin_params(cli))?;
        let ok = g.staircase == expected;
        let detail = format!("{:?}", g.staircase.to_json().generators);
        gin1 = Some(g.staircase);
        Ok((ok, detail))
    });

    // Δ = conv{(0,2,0), (1,0,1), (2,0,0)} + ℝ³₊; vol(T_t \ Δ) = t − 2/3 for t ≥ 2
    let axes = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let delta = RationalPolyhedron::from_generators(3, pts(&[&[0, 2, 0], &[1, 0, 1], &[2, 0, 0]]), axes);
    for t in [int(2), int(3), int(4), rat(7, 2)] {
        let name = format!("gamma-volume-t{}", format_rational(&t));
        suite.check(&name, || {
            let g = gamma_region(delta.as_ref().map_err(Clone::clone)?, &t)?;
            let expected = &t - rat(2, 3);
            let pieces = g.pieces_volume()?;
            let ok = g.volume == expected && pieces == expected;
            Ok((ok, format!("vol = {}, pieces = {}, expected {}", g.volume, pieces, expected)))
        });
    }

    suite.check("gin-gamma-volume", || {
        let Some(s) = gin1.as_ref() else {
            return Ok((false, "no gin staircase".into()));
        };
        let g = gamma_region(&limshape::polyhedra::newton_polyhedron(s)?, &int(3))?;
        Ok((g.volume == int(3) - rat(2, 3), format!("vol(Γ ∩ T_3) from gin = {}", g.volume)))
    });

    suite.check("ahp-flats", || {
        let a = ahp_flats(3, 1, 2)?;
        let hp1 = flats_hp(3, 1, 2, 1)?;
        let ok = a.ahp.to_string() == "t - 2/3" && hp1.to_string() == "2*t + 2";
        Ok((ok, format!("aHP = {}, HP_I = {}", a.ahp, hp1)))
    });

    for m in [1, 2] {
        suite.check(&format!("hilbert-function-m{m}"), || {
            hf_matches(&config, m, cli, 3, &flats_hp(3, 1, 2, m)?)
        });
    }

    suite.check("report", || {
        let report = ahf_estimate(&config, &int(3), &[1, 2], &estimate_options(cli))?;
        let gamma = report.delta_gamma_volume.clone();
        let ok = report.all_checks_hold() && gamma == Some(rat(7, 3));
        let failing: Vec<&str> =
            report.checks.iter().filter(|c| !c.diagnostic && !c.holds).map(|c| c.name.as_str()).collect();
        Ok((
            ok,
            format!(
                "vol(T_3 \\ Δ) = {}, failing checks: {:?}",
                gamma.as_ref().map(format_rational).unwrap_or_else(|| "none".into()),
                failing
            ),
        ))
    });
}

fn intersecting_lines(cli: &Cli, suite: &mut Suite) {
    // x0 = x1 = 0 and x0 = x2 = 0 meet in (0:0:0:1)
    let forms = |a: &[i64], b: &[i64]| pts(&[a, b]);
    let lines = Configuration::flats(3, vec![forms(&[1, 0, 0, 0], &[0, 1, 0, 0]), forms(&[1, 0, 0, 0], &[0, 0, 1, 0])]);
    let lines = match lines {
        Ok(c) => c,
        Err(e) => return suite.record("configuration", false, format!("error: {e}")),
    };
    for m in [1, 2] {
        suite.check(&format!("hilbert-function-m{m}"), || {
            hf_matches(&lines, m, cli, 5, &intersecting_lines_hp(m)?)
        });
    }
    suite.check("leading-slice", || {
        let slice = intersecting_lines_bivariate().m_slice(3);
        Ok((slice.to_string() == "t - 1", format!("m³ coefficient = {slice}")))
    });
    suite.check("additivity", || {
        let point = Configuration::points(3, pts(&[&[1, 1, 1, 1]]))?;
        let rep = ahp_additivity_check(&lines, &point, &int(3))?;
        let ok = rep.sum.to_string() == "t - 5/6" && rep.consistent;
        Ok((ok, format!("{} + {} = {}", rep.part_a, rep.part_b, rep.sum)))
    });
}

fn points_grid(cli: &Cli, suite: &mut Suite) {
    let grid = match Configuration::points(2, pts(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]])) {
        Ok(c) => c,
        Err(e) => return suite.record("configuration", false, format!("error: {e}")),
    };
    suite.check("ahp", || {
        let a = ahp_flats(2, 0, 4)?;
        Ok((a.ahp.to_string() == "2", format!("aHP = {}", a.ahp)))
    });
    for m in 1..=3u32 {
        suite.check(&format!("hilbert-function-m{m}"), || {
            let conditions = Rational::from_integer((4 * m * (m + 1) / 2).into());
            hf_matches(&grid, m, cli, 2, &UniPoly::constant(conditions))
        });
    }
    suite.check("report", || {
        let report = ahf_estimate(&grid, &int(3), &[1, 2, 3], &estimate_options(cli))?;
        let failing: Vec<&str> =
            report.checks.iter().filter(|c| !c.diagnostic && !c.holds).map(|c| c.name.as_str()).collect();
        let stabilized = report.stabilized_at.map(|m| m.to_string()).unwrap_or_else(|| "never".into());
        Ok((
            report.all_checks_hold(),
            format!("failing checks: {failing:?}; Δ stabilized at m = {stabilized}"),
        ))
    });
}
