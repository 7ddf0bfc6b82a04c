use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use limshape::asymptotics::{ahf_estimate, ahp_flats, ConvergenceReport, EstimateOptions};
use limshape::configurations::{symbolic_power_ideal, ConfigJson, Configuration};
use limshape::groebner::{gin, regularity_surrogate, GbConfig, GinParams};
use limshape::polyhedra::{clip_to_simplex, gamma_region, Apex, RationalPolyhedron};
use limshape::rational::{abs, format_rational, serde_rational, Rational};
use limshape::staircase::{lattice_volume_bound, MonomialStaircase, StaircaseJson};

use crate::error::CliError;
use crate::manifest::{RunManifest, Timing};
use crate::{verify, Cli, Command, Format};

/// What a command hands back for writing.
struct Output {
    name: &'static str,
    json: Value,
    csv: Option<String>,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let (output, deferred) = match &cli.command {
        Command::Gin { config, m } => (cmd_gin(cli, config, *m)?, None),
        Command::SymbolicPower { config, m } => (cmd_symbolic_power(cli, config, *m)?, None),
        Command::Staircase { config, staircase, m, t } => {
            (cmd_staircase(cli, config.as_deref(), staircase.as_deref(), *m, t)?, None)
        }
        Command::LimitingShape { config, m_max, t } => cmd_limiting_shape(cli, config, *m_max, t, true)?,
        Command::Report { config, m_max, t } => cmd_limiting_shape(cli, config, *m_max, t, false)?,
        Command::AhpFlats { n, r, s } => (cmd_ahp_flats(cli, *n, *r, *s)?, None),
        Command::Volume { polyhedron, t, gamma } => (cmd_volume(cli, polyhedron, t.as_ref(), *gamma)?, None),
        Command::Verify { example } => {
            let (output, failures) = verify::run(cli, *example)?;
            let deferred = (failures > 0).then_some(CliError::ChecksFailed(failures));
            (output_from_verify(cli, output), deferred)
        }
    };
    emit(cli, &output, started)?;
    match deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn output_from_verify(_cli: &Cli, value: Value) -> Output {
    Output { name: "verify", json: value, csv: None }
}

fn emit(cli: &Cli, output: &Output, started: Instant) -> Result<(), CliError> {
    let json_text = serde_json::to_string_pretty(&output.json).expect("json value serializes") + "\n";
    let timing = Timing { command: output.name.to_string(), wall_time_ms: started.elapsed().as_millis() };
    if cli.format == Format::Csv && output.csv.is_none() {
        return Err(CliError::Usage(format!("{} has no CSV output", output.name)));
    }
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            write(&dir.join(format!("{}.json", output.name)), &json_text)?;
            if let Some(csv) = &output.csv {
                write(&dir.join(format!("{}.csv", output.name)), csv)?;
            }
            let timing_text = serde_json::to_string_pretty(&timing).expect("timing serializes") + "\n";
            write(&dir.join(format!("{}.timing.json", output.name)), &timing_text)?;
        }
        None => {
            // verify prints its own check lines
            if !matches!(cli.command, Command::Verify { .. }) {
                match cli.format {
                    Format::Json => print!("{json_text}"),
                    Format::Csv => print!("{}", output.csv.as_deref().unwrap_or_default()),
                }
            }
            eprintln!("wall time: {} ms", timing.wall_time_ms);
        }
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub(crate) fn gb_config() -> GbConfig {
    GbConfig::default()
}

pub(crate) fn gin_params(cli: &Cli) -> GinParams {
    GinParams { seed: cli.seed, entry_bound: cli.entry_bound, gb: gb_config() }
}

/// Reads a configuration; generic requests without a seed take the
/// command-line seed, which is then recorded in the embedded config.
fn load_config(cli: &Cli, path: &PathBuf, command: &str) -> Result<(Configuration, RunManifest), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mut json: ConfigJson = serde_json::from_slice(&bytes)
        .map_err(|e| limshape::Error::Parse(format!("{}: {e}", path.display())))?;
    if let Some(g) = json.generic.as_mut() {
        g.seed.get_or_insert(cli.seed);
    }
    let config = Configuration::from_json(&json)?;
    let manifest = RunManifest::new(command, cli.seed, cli.entry_bound).with_config(path, &bytes);
    Ok((config, manifest))
}

fn check_m(m: u32) -> Result<(), CliError> {
    if m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    Ok(())
}

fn cmd_gin(cli: &Cli, path: &PathBuf, m: u32) -> Result<Output, CliError> {
    check_m(m)?;
    let (config, mut manifest) = load_config(cli, path, "gin")?;
    manifest.m = Some(m);
    let ideal = symbolic_power_ideal(&config, m, &gb_config())?;
    let g = gin(&ideal, &gin_params(cli))?;
    let raw: Vec<Vec<u32>> = g.raw_initial.iter().map(|mono| mono.exponents().to_vec()).collect();
    let matrix: Vec<Vec<String>> = g
        .coordinate_matrix
        .to_rows()
        .iter()
        .map(|row| row.iter().map(format_rational).collect())
        .collect();
    Ok(Output {
        name: "gin",
        json: json!({
            "manifest": manifest,
            "config": config.expanded_json(),
            "m": m,
            "staircase": g.staircase.to_json(),
            "raw_generators": raw,
            "regularity": regularity_surrogate(&g),
            "coordinate_matrix": matrix,
        }),
        csv: None,
    })
}

fn cmd_symbolic_power(cli: &Cli, path: &PathBuf, m: u32) -> Result<Output, CliError> {
    check_m(m)?;
    let (config, mut manifest) = load_config(cli, path, "symbolic-power")?;
    manifest.m = Some(m);
    let ideal = symbolic_power_ideal(&config, m, &gb_config())?;
    let gens: Vec<String> = ideal.generators().iter().map(|p| p.to_string()).collect();
    Ok(Output {
        name: "symbolic_power",
        json: json!({
            "manifest": manifest,
            "config": config.expanded_json(),
            "m": m,
            "nvars": ideal.nvars(),
            "generators": gens,
        }),
        csv: None,
    })
}

#[derive(Serialize)]
struct StaircaseSummary {
    staircase: StaircaseJson,
    m: u32,
    #[serde(with = "serde_rational")]
    t: Rational,
    /// `⌊mt⌋`
    degree: u64,
    #[serde(with = "serde_rational")]
    count_gamma: Rational,
    #[serde(with = "serde_rational")]
    hilbert_function: Rational,
    #[serde(with = "serde_rational")]
    complement_volume: Rational,
    #[serde(with = "serde_rational")]
    complement_volume_cubes: Rational,
    #[serde(with = "serde_rational")]
    lattice_bound: Rational,
    lattice_ok: bool,
}

fn cmd_staircase(
    cli: &Cli,
    config: Option<&Path>,
    staircase: Option<&Path>,
    m: u32,
    t: &Rational,
) -> Result<Output, CliError> {
    check_m(m)?;
    if t < &Rational::from_integer(0.into()) {
        return Err(CliError::Usage("--t must be nonnegative".into()));
    }
    let (st, mut manifest) = match (config, staircase) {
        (Some(path), _) => {
            let (config, manifest) = load_config(cli, &path.to_path_buf(), "staircase")?;
            let ideal = symbolic_power_ideal(&config, m, &gb_config())?;
            (gin(&ideal, &gin_params(cli))?.staircase, manifest)
        }
        (None, Some(path)) => {
            let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
            let json: StaircaseJson = serde_json::from_slice(&bytes)
                .map_err(|e| limshape::Error::Parse(format!("{}: {e}", path.display())))?;
            let manifest = RunManifest::new("staircase", cli.seed, cli.entry_bound).with_config(path, &bytes);
            (MonomialStaircase::from_json(&json)?, manifest)
        }
        (None, None) => return Err(CliError::Usage("need --config or --staircase".into())),
    };
    manifest.m = Some(m);
    manifest.t = Some(format_rational(t));
    let mt = Rational::from_integer(m.into()) * t;
    let degree: u64 = mt.floor().to_integer().try_into().map_err(|_| CliError::Usage("m·t too large".into()))?;
    let int = |q: BigUint| Rational::from_integer(q.into());
    let count = int(st.count_gamma(degree));
    let vol = st.complement_volume(&mt);
    let bound = int(lattice_volume_bound(st.nvars(), degree));
    let summary = StaircaseSummary {
        staircase: st.to_json(),
        m,
        t: t.clone(),
        degree,
        hilbert_function: int(st.hilbert_function_slice(degree)),
        complement_volume_cubes: st.complement_volume_cubes(&mt),
        lattice_ok: abs(&(&count - &vol)) <= bound,
        count_gamma: count,
        complement_volume: vol,
        lattice_bound: bound,
    };
    Ok(Output { name: "staircase", json: json!({ "manifest": manifest, "result": summary }), csv: None })
}

fn cmd_limiting_shape(
    cli: &Cli,
    path: &PathBuf,
    m_max: u32,
    t: &Rational,
    with_shape: bool,
) -> Result<(Output, Option<CliError>), CliError> {
    if m_max == 0 {
        return Err(CliError::Usage("--m-max must be at least 1".into()));
    }
    let command = if with_shape { "limiting-shape" } else { "report" };
    let (config, mut manifest) = load_config(cli, path, command)?;
    manifest.m_max = Some(m_max);
    manifest.t = Some(format_rational(t));
    let opts = EstimateOptions { seed: cli.seed, entry_bound: cli.entry_bound, gb: gb_config(), jobs: cli.jobs.max(1) };
    let m_list: Vec<u32> = (1..=m_max).collect();
    let report: ConvergenceReport = ahf_estimate(&config, t, &m_list, &opts)?;
    let deferred = report.first_error().cloned().map(CliError::Core);
    let manifest_line = format!("# manifest={}\n", serde_json::to_string(&manifest).expect("manifest serializes"));
    let csv = Some(manifest_line + &report.to_csv()?);
    let json = if with_shape {
        let gamma = match &report.delta {
            Some(delta) => Some(gamma_region(delta, t)?),
            None => None,
        };
        json!({ "manifest": manifest, "delta": report.delta, "gamma": gamma, "report": report })
    } else {
        json!({ "manifest": manifest, "report": report })
    };
    let name = if with_shape { "limiting_shape" } else { "report" };
    Ok((Output { name, json, csv }, deferred))
}

fn cmd_ahp_flats(cli: &Cli, n: usize, r: usize, s: usize) -> Result<Output, CliError> {
    let a = ahp_flats(n, r, s)?;
    let manifest = RunManifest::new("ahp-flats", cli.seed, cli.entry_bound);
    Ok(Output {
        name: "ahp_flats",
        json: json!({
            "manifest": manifest,
            "n": n,
            "r": r,
            "s": s,
            "ahp": a.ahp,
            "lambda": a.lambda,
            "text": a.ahp.to_string(),
        }),
        csv: None,
    })
}

fn cmd_volume(cli: &Cli, path: &Path, t: Option<&Rational>, gamma: bool) -> Result<Output, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let raw: RationalPolyhedron = serde_json::from_slice(&bytes)
        .map_err(|e| limshape::Error::Parse(format!("{}: {e}", path.display())))?;
    // facets in the file are not trusted; recompute from generators
    let p = RationalPolyhedron::from_generators(raw.dim, raw.vertices, raw.rays)?;
    let mut manifest = RunManifest::new("volume", cli.seed, cli.entry_bound).with_config(path, &bytes);
    manifest.t = t.map(format_rational);
    let json = match (t, gamma) {
        (Some(t), true) => {
            let g = gamma_region(&p, t)?;
            json!({
                "manifest": manifest,
                "gamma_volume": format_rational(&g.volume),
                "pieces_volume": format_rational(&g.pieces_volume()?),
                "gamma": g,
            })
        }
        (Some(t), false) => {
            let c = clip_to_simplex(&p, t)?;
            json!({
                "manifest": manifest,
                "volume": format_rational(&c.polytope.volume_with(Apex::FirstVertex)?),
                "volume_centroid": format_rational(&c.polytope.volume_with(Apex::Centroid)?),
                "polytope": c.polytope,
            })
        }
        (None, _) => json!({
            "manifest": manifest,
            "volume": format_rational(&p.volume_with(Apex::FirstVertex)?),
            "volume_centroid": format_rational(&p.volume_with(Apex::Centroid)?),
            "polyhedron": p,
        }),
    };
    Ok(Output { name: "volume", json, csv: None })
}
