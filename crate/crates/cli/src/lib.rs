//! Command-line front end for `entord-core`: single evaluations, sweeps and
//! the verification suite, reported as CSV or JSON.
//!
//! [`run`] is the whole program; the binary only wires it to the process.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use entord_core::bcs::GapTriple;
use entord_core::measures::{OptimizerConfig, DEFAULT_SEED};
use serde_json::{Map, Value};

pub mod grid;
pub mod quantities;
pub mod report;
pub mod verify;

use quantities::{EtaPoint, ModeInput, Model, Selection};
use report::{Format, Meta, Row};

/// Everything that ends a run early. Maps onto the exit codes 2 and 1.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Numeric(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<entord_core::Error> for CliError {
    fn from(e: entord_core::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "entord",
    version,
    about = "Entanglement of pairing and superfluid order"
)]
struct Cli {
    /// Print every quantity name by model and exit.
    #[arg(long)]
    list_quantities: bool,
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Optimizer restarts.
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// BCS pair modes from amplitudes or gap parameters.
    Bcs(BcsArgs),
    /// η-pairing (Dicke) states.
    Eta(EtaArgs),
    /// Bose-Hubbard superfluid, one well against the rest.
    Bh(BhArgs),
    /// Run the oracle and invariant checks.
    Verify(VerifyArgs),
    /// Evaluate one model over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct BcsArgs {
    /// `u:v[,u:v...]`
    #[arg(
        long,
        conflicts_with = "gaps",
        required_unless_present = "gaps",
        allow_hyphen_values = true
    )]
    pairs: Option<String>,
    /// `delta:eps:mu[,...]`
    #[arg(long, allow_hyphen_values = true)]
    gaps: Option<String>,
    /// Diagonal one-body energies, one per mode.
    #[arg(long, allow_hyphen_values = true)]
    tdiag: Option<String>,
    #[arg(long)]
    quantities: Option<String>,
}

#[derive(Args, Debug)]
struct EtaArgs {
    #[arg(long = "n")]
    n: Option<u64>,
    #[arg(long = "k", conflicts_with = "r")]
    k: Option<u64>,
    /// Filling; `k = round(r n)`.
    #[arg(long = "r")]
    r: Option<f64>,
    /// Grid over n (`100,1000` or `n=10:100:10`).
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    quantities: Option<String>,
}

#[derive(Args, Debug)]
struct BhArgs {
    #[arg(long)]
    atoms: u64,
    #[arg(long)]
    sites: u64,
    #[arg(long)]
    quantities: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: verify::Suite,
    /// `key=value` tolerance overrides.
    #[arg(long)]
    tol: Vec<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// `name=start:stop[:step]` or `name=v1,v2,...`; repeat for a product grid.
    #[arg(long, required = true)]
    grid: Vec<String>,
    #[arg(long)]
    quantities: Option<String>,
    #[arg(long = "n")]
    n: Option<u64>,
    #[arg(long = "k")]
    k: Option<u64>,
    #[arg(long = "r")]
    r: Option<f64>,
    #[arg(long)]
    atoms: Option<u64>,
    #[arg(long)]
    sites: Option<u64>,
    /// Set M = N at every grid point.
    #[arg(long)]
    sites_equal_atoms: bool,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tdiag: Option<f64>,
}

/// Runs one invocation; returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let c = &cli.common;
    let meta = Meta { seed: c.seed };
    let cfg = OptimizerConfig {
        restarts: c.restarts,
        seed: c.seed,
        ..OptimizerConfig::default()
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if cli.list_quantities {
        if cli.command.is_some() {
            return Err(CliError::Usage(
                "--list-quantities takes no subcommand".into(),
            ));
        }
        report::emit(&list_quantities(c.format)?, c.out.as_deref(), stdout)?;
        return Ok(0);
    }
    let Some(command) = cli.command else {
        return Err(CliError::Usage(
            "a subcommand is required (bcs, eta, bh, verify, sweep)".into(),
        ));
    };
    let mut notes = Vec::new();
    let rows = match command {
        Command::Verify(v) => {
            let overrides = verify::parse_tolerances(&v.tol)?;
            let checks = verify::run_suite(v.suite, &overrides, cfg)?;
            let passed = checks.iter().all(verify::Check::passed);
            let bytes = match c.format {
                Format::Json => {
                    let mut summary = verify::summary_json(v.suite, &checks);
                    summary
                        .as_object_mut()
                        .expect("object")
                        .insert("meta".into(), report::meta_json(meta));
                    report::json_bytes(&summary)
                }
                Format::Csv => checks_csv(&checks)?,
            };
            report::emit(&bytes, c.out.as_deref(), stdout)?;
            for failed in checks.iter().filter(|x| !x.passed()) {
                let _ = writeln!(
                    stderr,
                    "FAIL {}: error {:e} > tol {:e}",
                    failed.name, failed.error, failed.tol
                );
            }
            return Ok(if passed { 0 } else { 1 });
        }
        Command::Bcs(b) => {
            let modes = match (&b.pairs, &b.gaps) {
                (Some(p), None) => parse_pairs(p)?,
                (None, Some(g)) => parse_gaps(g)?,
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --pairs or --gaps".into(),
                    ))
                }
            };
            let t_diag = match &b.tdiag {
                Some(t) => parse_reals("--tdiag", t)?,
                None => Vec::new(),
            };
            let sel = quantities::select(Model::Bcs, b.quantities.as_deref())?;
            vec![quantities::eval_bcs(&modes, &t_diag, &sel)?]
        }
        Command::Eta(e) => {
            let sel = quantities::select(Model::Eta, e.quantities.as_deref())?;
            match e.grid {
                Some(spec) => {
                    let axis = grid::parse_axis(&spec, Some("n"))?;
                    let sweep = SweepArgs {
                        model: Model::Eta,
                        grid: Vec::new(),
                        quantities: None,
                        n: e.n,
                        k: e.k,
                        r: e.r,
                        atoms: None,
                        sites: None,
                        sites_equal_atoms: false,
                        delta: None,
                        epsilon: None,
                        mu: None,
                        tdiag: None,
                    };
                    sweep_rows(&sweep, &[axis], &sel, &cfg, &mut notes)?
                }
                None => {
                    let n = e.n.ok_or_else(|| {
                        CliError::Usage("eta needs --n (or --r with --grid)".into())
                    })?;
                    if e.k.is_none() && e.r.is_none() {
                        return Err(CliError::Usage("eta needs --k or --r".into()));
                    }
                    vec![quantities::eval_eta(
                        EtaPoint { n, k: e.k, r: e.r },
                        &sel,
                        &cfg,
                        &mut notes,
                    )?]
                }
            }
        }
        Command::Bh(b) => {
            let sel = quantities::select(Model::Bh, b.quantities.as_deref())?;
            vec![quantities::eval_bh(b.atoms, b.sites, &sel, &mut notes)?]
        }
        Command::Sweep(s) => {
            let sel = quantities::select(s.model, s.quantities.as_deref())?;
            let axes = s
                .grid
                .iter()
                .map(|g| grid::parse_axis(g, None))
                .collect::<Result<Vec<_>, _>>()?;
            sweep_rows(&s, &axes, &sel, &cfg, &mut notes)?
        }
    };
    for n in &notes {
        let _ = writeln!(stderr, "note: {n}");
    }
    report::emit(
        &report::render(&rows, c.format, meta)?,
        c.out.as_deref(),
        stdout,
    )?;
    Ok(0)
}

fn checks_csv(checks: &[verify::Check]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["name", "key", "error", "tol", "pass"])
        .map_err(err)?;
    for c in checks {
        w.write_record([
            c.name.clone(),
            c.key.to_string(),
            report::format_sig9(c.error),
            report::format_sig9(c.tol),
            c.passed().to_string(),
        ])
        .map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn list_quantities(format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut m = Map::new();
            for model in [Model::Bcs, Model::Eta, Model::Bh] {
                let list = quantities::CATALOG
                    .iter()
                    .filter(|i| i.model == model)
                    .map(|i| {
                        let mut q = Map::new();
                        q.insert("name".into(), i.name.into());
                        q.insert("summary".into(), i.summary.into());
                        q.insert("default".into(), i.default.into());
                        Value::Object(q)
                    })
                    .collect();
                m.insert(model.name().into(), Value::Array(list));
            }
            Ok(report::json_bytes(&Value::Object(m)))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let err = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(["model", "quantity", "default", "summary"])
                .map_err(err)?;
            for i in quantities::CATALOG {
                w.write_record([
                    i.model.name(),
                    i.name,
                    if i.default { "true" } else { "false" },
                    i.summary,
                ])
                .map_err(err)?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn parse_real(flag: &str, s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Usage(format!("{flag}: '{s}' is not a real number")))
}

fn parse_reals(flag: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(|x| parse_real(flag, x)).collect()
}

fn parse_pairs(s: &str) -> Result<Vec<ModeInput>, CliError> {
    s.split(',')
        .map(|item| match item.split(':').collect::<Vec<_>>()[..] {
            [u, v] => Ok(ModeInput::Pair {
                u: parse_real("--pairs", u)?,
                v: parse_real("--pairs", v)?,
            }),
            _ => Err(CliError::Usage(format!("--pairs: '{item}' is not u:v"))),
        })
        .collect()
}

fn parse_gaps(s: &str) -> Result<Vec<ModeInput>, CliError> {
    s.split(',')
        .map(|item| match item.split(':').collect::<Vec<_>>()[..] {
            [d, e, m] => Ok(ModeInput::Gap(GapTriple::new(
                parse_real("--gaps", d)?,
                parse_real("--gaps", e)?,
                parse_real("--gaps", m)?,
            )?)),
            _ => Err(CliError::Usage(format!(
                "--gaps: '{item}' is not delta:eps:mu"
            ))),
        })
        .collect()
}

/// Grid-axis names per model, with the canonical name each alias maps to.
fn canonical_axis(model: Model, name: &str) -> Option<&'static str> {
    let table: &[(&str, &'static str)] = match model {
        Model::Eta => &[("n", "n"), ("k", "k"), ("r", "r")],
        Model::Bh => &[
            ("N", "atoms"),
            ("atoms", "atoms"),
            ("M", "sites"),
            ("sites", "sites"),
        ],
        Model::Bcs => &[
            ("delta", "delta"),
            ("epsilon", "epsilon"),
            ("eps", "epsilon"),
            ("mu", "mu"),
        ],
    };
    table.iter().find(|(a, _)| *a == name).map(|(_, c)| *c)
}

fn sweep_rows(
    s: &SweepArgs,
    axes: &[grid::Axis],
    sel: &Selection,
    cfg: &OptimizerConfig,
    notes: &mut Vec<String>,
) -> Result<Vec<Row>, CliError> {
    let model = s.model;
    let mut names: Vec<&'static str> = Vec::new();
    for a in axes {
        let c = canonical_axis(model, &a.name).ok_or_else(|| {
            CliError::Usage(format!("unknown {} grid axis '{}'", model.name(), a.name))
        })?;
        if names.contains(&c) {
            return Err(CliError::Usage(format!("grid axis {c} given twice")));
        }
        names.push(c);
    }
    let fixed: &[(&str, bool)] = &[
        ("n", s.n.is_some()),
        ("k", s.k.is_some()),
        ("r", s.r.is_some()),
        ("atoms", s.atoms.is_some()),
        ("sites", s.sites.is_some() || s.sites_equal_atoms),
        ("delta", s.delta.is_some()),
        ("epsilon", s.epsilon.is_some()),
        ("mu", s.mu.is_some()),
    ];
    for (name, set) in fixed {
        if *set && names.contains(name) {
            return Err(CliError::Usage(format!(
                "{name} is both fixed and on the grid"
            )));
        }
    }
    if s.sites_equal_atoms && s.sites.is_some() {
        return Err(CliError::Usage(
            "--sites conflicts with --sites-equal-atoms".into(),
        ));
    }
    let mut rows = Vec::new();
    for point in grid::points(axes) {
        let get = |name: &str| names.iter().position(|n| *n == name).map(|i| point[i]);
        let row = match model {
            Model::Eta => {
                let n = match get("n") {
                    Some(v) => grid::as_count("n", v)?,
                    None => {
                        s.n.ok_or_else(|| CliError::Usage("eta sweep needs n".into()))?
                    }
                };
                let k = match get("k") {
                    Some(v) => Some(grid::as_count("k", v)?),
                    None => s.k,
                };
                let r = get("r").or(s.r);
                if k.is_some() == r.is_some() {
                    return Err(CliError::Usage(
                        "eta sweep needs exactly one of k or r".into(),
                    ));
                }
                quantities::eval_eta(EtaPoint { n, k, r }, sel, cfg, notes)?
            }
            Model::Bh => {
                let atoms = match get("atoms") {
                    Some(v) => grid::as_count("atoms", v)?,
                    None => s
                        .atoms
                        .ok_or_else(|| CliError::Usage("bh sweep needs atoms".into()))?,
                };
                let sites = if s.sites_equal_atoms {
                    atoms
                } else {
                    match get("sites") {
                        Some(v) => grid::as_count("sites", v)?,
                        None => s
                            .sites
                            .ok_or_else(|| CliError::Usage("bh sweep needs sites".into()))?,
                    }
                };
                quantities::eval_bh(atoms, sites, sel, notes)?
            }
            Model::Bcs => {
                let need = |name: &str, fixed: Option<f64>| {
                    get(name)
                        .or(fixed)
                        .ok_or_else(|| CliError::Usage(format!("bcs sweep needs {name}")))
                };
                let g = GapTriple::new(
                    need("delta", s.delta)?,
                    need("epsilon", s.epsilon)?,
                    need("mu", s.mu)?,
                )?;
                let t = s.tdiag.map(|t| vec![t]).unwrap_or_default();
                quantities::eval_bcs(&[ModeInput::Gap(g)], &t, sel)?
            }
        };
        rows.push(row);
    }
    Ok(rows)
}
