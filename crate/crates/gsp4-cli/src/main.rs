//! `gsp4`: command-line front end for the spectral-measure toolkit.
//!
//! Every subcommand is deterministic given its inputs (and `--seed` where one
//! applies): reports carry no timestamps, floats print in shortest
//! round-trip form, and map keys serialize in a fixed order, so two runs with
//! the same arguments produce byte-identical output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use gsp4_core::characters::{self, HcParam};
use gsp4_core::harness::{self, BudgetParams, FamilyDataset};
use gsp4_core::hecke;
use gsp4_core::lfun;
use gsp4_core::measures;
use gsp4_core::onelevel::{self, FamilyKind};
use gsp4_core::satake::{OmegaPoint, SatakeAngles};
use gsp4_core::verify;

/// Step size for the numeric cross-check of the regularized character limit.
const STENCIL_H: f64 = 1e-4;

#[derive(Parser)]
#[command(
    name = "gsp4",
    version,
    about = "Spectral measures, Hecke identities, and density statistics for degree-two symplectic Satake data",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate the normalized vertical measure density on a grid
    Measure(MeasureArgs),
    /// Integrate the normalized vertical measure (reference value 1)
    Mass(MassArgs),
    /// Draw a synthetic eigenvalue family and emit it as a dataset
    Sample(SampleArgs),
    /// Run all invariant suites; exit nonzero if any fails
    Verify(VerifyArgs),
    /// Evaluate Hecke eigenvalues and the local factor from Satake angles
    Hecke(HeckeArgs),
    /// Evaluate discrete-series characters and their singular limits
    Char(CharArgs),
    /// Print Euler-factor coefficients and Dirichlet coefficients
    Euler(EulerArgs),
    /// One-level density prediction and explicit prime sums for a dataset
    Density(DensityArgs),
    /// Equidistribution report for a dataset at one prime
    Report(ReportArgs),
    /// Level- and weight-aspect error budgets
    Budget(BudgetArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct MeasureArgs {
    /// Prime parameter of the measure (any value > 1 is accepted)
    #[arg(long)]
    p: f64,
    /// Grid points per axis (cell centers of the square [-2, 2]^2)
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MassArgs {
    /// Prime parameter of the measure (any value > 1 is accepted)
    #[arg(long)]
    p: f64,
    /// Quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Primes to draw at (comma-separated, all coprime to the level)
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<u64>,
    /// Number of synthetic forms
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Larger weight component
    #[arg(long, default_value_t = 10)]
    k1: u64,
    /// Smaller weight component
    #[arg(long, default_value_t = 10)]
    k2: u64,
    /// Level (written to the sidecar; every prime must avoid it)
    #[arg(long = "N", default_value_t = 1)]
    level: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Dataset CSV path; the metadata sidecar lands next to it as .json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeckeArgs {
    /// First Satake angle in [0, pi]
    #[arg(long)]
    theta1: f64,
    /// Second Satake angle in [0, pi]
    #[arg(long)]
    theta2: f64,
    /// Prime for the eigenvalue normalization
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CharArgs {
    /// Larger weight component (k1 >= k2 >= 3)
    #[arg(long)]
    k1: i64,
    /// Smaller weight component
    #[arg(long)]
    k2: i64,
    /// Optional compact-torus angle (with --theta2: evaluate the character)
    #[arg(long, requires = "theta2")]
    theta1: Option<f64>,
    /// Optional compact-torus angle (with --theta1: evaluate the character)
    #[arg(long, requires = "theta1")]
    theta2: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EulerArgs {
    /// First Satake angle in [0, pi]
    #[arg(long)]
    theta1: f64,
    /// Second Satake angle in [0, pi]
    #[arg(long)]
    theta2: f64,
    /// Number of Dirichlet coefficients of the degree-four factor
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    /// Dataset CSV (header form_id,p,x,y or form_id,p,theta1,theta2)
    data: PathBuf,
    /// Metadata sidecar JSON; defaults to the CSV path with extension .json
    sidecar: Option<PathBuf>,
    /// Which family's L-function the sums are formed for
    #[arg(long, value_parser = parse_family, default_value = "spin")]
    family: FamilyKind,
    /// Support of the Fejer test function's Fourier transform
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Dataset CSV (header form_id,p,x,y or form_id,p,theta1,theta2)
    data: PathBuf,
    /// Metadata sidecar JSON; defaults to the CSV path with extension .json
    sidecar: Option<PathBuf>,
    /// Prime to report at (every form needs a record there)
    #[arg(long)]
    p: u64,
    /// Quadrature tolerance for the reference integrals
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Prime of the Hecke operator
    #[arg(long)]
    p: u64,
    /// Hecke depth
    #[arg(long, default_value_t = 1)]
    kappa: u32,
    /// Level for the level-aspect budget
    #[arg(long = "N")]
    level: Option<u64>,
    /// Larger weight component for the weight-aspect budget
    #[arg(long, requires = "k2")]
    k1: Option<u64>,
    /// Smaller weight component for the weight-aspect budget
    #[arg(long, requires = "k1")]
    k2: Option<u64>,
    /// Level-remainder exponent a in p^(a*kappa+b)
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Level-remainder exponent b in p^(a*kappa+b)
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Weight-remainder exponent a' in p^(a'*kappa+b')
    #[arg(long, default_value_t = 1.0)]
    a_prime: f64,
    /// Weight-remainder exponent b' in p^(a'*kappa+b')
    #[arg(long, default_value_t = 1.0)]
    b_prime: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// One line of a report: a named value, optionally with an independent
/// reference, the absolute gap to it, and a Monte-Carlo standard error.
#[derive(Serialize)]
struct Row {
    name: String,
    value: f64,
    reference: Option<f64>,
    abs_err: Option<f64>,
    std_err: Option<f64>,
}

impl Row {
    fn plain(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            reference: None,
            abs_err: None,
            std_err: None,
        }
    }

    fn with_reference(name: impl Into<String>, value: f64, reference: f64) -> Self {
        Self {
            name: name.into(),
            value,
            reference: Some(reference),
            abs_err: Some((value - reference).abs()),
            std_err: None,
        }
    }
}

/// Report envelope shared by all subcommands. Field order is the output key
/// order; `seed` is null for commands that draw nothing.
#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs: Map<String, Value>,
    seed: Option<u64>,
    results: Vec<Row>,
    version: &'static str,
}

impl Report {
    fn new(
        command: &'static str,
        inputs: Map<String, Value>,
        seed: Option<u64>,
        results: Vec<Row>,
    ) -> Self {
        Self {
            command,
            inputs,
            seed,
            results,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut s = String::from("name,value,reference,abs_err,std_err\n");
                for r in &self.results {
                    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                    writeln!(
                        s,
                        "{},{},{},{},{}",
                        r.name,
                        r.value,
                        opt(r.reference),
                        opt(r.abs_err),
                        opt(r.std_err)
                    )?;
                }
                Ok(s)
            }
        }
    }
}

/// Build the `inputs` map from key/value pairs (keys stay in given order only
/// if already sorted; the map itself serializes sorted, which is what keeps
/// output deterministic).
fn inputs(pairs: &[(&str, Value)]) -> Map<String, Value> {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert((*k).to_string(), v.clone());
    }
    m
}

fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn sidecar_path(data: &Path, sidecar: Option<PathBuf>) -> PathBuf {
    sidecar.unwrap_or_else(|| data.with_extension("json"))
}

fn load_dataset(data: &Path, sidecar: Option<PathBuf>) -> Result<FamilyDataset> {
    let sc = sidecar_path(data, sidecar);
    FamilyDataset::ingest(data, &sc)
        .with_context(|| format!("ingesting {} with sidecar {}", data.display(), sc.display()))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Measure(a) => cmd_measure(a),
        Cmd::Mass(a) => cmd_mass(a),
        Cmd::Sample(a) => cmd_sample(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Hecke(a) => cmd_hecke(a),
        Cmd::Char(a) => cmd_char(a),
        Cmd::Euler(a) => cmd_euler(a),
        Cmd::Density(a) => cmd_density(a),
        Cmd::Report(a) => cmd_report(a),
        Cmd::Budget(a) => cmd_budget(a),
    }
}

/// Cell centers of an n-point subdivision of [-2, 2].
fn grid_centers(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| -2.0 + 4.0 * (i as f64 + 0.5) / n as f64)
}

fn cmd_measure(a: MeasureArgs) -> Result<ExitCode> {
    if a.n == 0 || a.n > 2000 {
        bail!("grid size {} out of range 1..=2000", a.n);
    }
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("x,y,density\n");
            for x in grid_centers(a.n) {
                for y in grid_centers(a.n) {
                    let d = measures::mu_normalized(a.p, OmegaPoint { x, y })?;
                    writeln!(s, "{x},{y},{d}")?;
                }
            }
            s
        }
        Format::Json => {
            let mut rows = Vec::with_capacity(a.n * a.n);
            for x in grid_centers(a.n) {
                for y in grid_centers(a.n) {
                    let pt = OmegaPoint { x, y };
                    let d = measures::mu_normalized(a.p, pt)?;
                    // Reference: the large-p (Sato-Tate) limit density.
                    let st = 0.5 * measures::st_density(pt);
                    rows.push(Row::with_reference(format!("rho({x},{y})"), d, st));
                }
            }
            let report = Report::new(
                "measure",
                inputs(&[("n", json!(a.n)), ("p", json!(a.p))]),
                None,
                rows,
            );
            report.render(a.format)?
        }
    };
    write_output(&text, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_mass(a: MassArgs) -> Result<ExitCode> {
    let mass = measures::plancherel_total_mass(a.p, a.tol)?;
    let report = Report::new(
        "mass",
        inputs(&[("p", json!(a.p)), ("tol", json!(a.tol))]),
        None,
        vec![Row::with_reference("total_mass", mass, 1.0)],
    );
    write_output(&report.render(a.format)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(a: SampleArgs) -> Result<ExitCode> {
    let ds = FamilyDataset::synthesize(a.k1, a.k2, a.level, a.n, &a.p, a.seed)?;
    if let Some(out) = &a.out {
        let sc = out.with_extension("json");
        ds.write_files(out, &sc)?;
    }
    match a.format {
        Format::Csv => {
            if a.out.is_none() {
                let mut s = String::from("form_id,p,x,y\n");
                for r in ds.records() {
                    writeln!(s, "{},{},{},{}", r.form_id, r.p, r.x, r.y)?;
                }
                print!("{s}");
            }
        }
        Format::Json => {
            let rows = ds
                .primes()
                .into_iter()
                .map(|p| Row::plain(format!("records@{p}"), ds.points_at_prime(p).len() as f64))
                .collect();
            let report = Report::new(
                "sample",
                inputs(&[
                    ("N", json!(a.level)),
                    ("k1", json!(a.k1)),
                    ("k2", json!(a.k2)),
                    ("n", json!(a.n)),
                    ("p", json!(a.p)),
                ]),
                Some(a.seed),
                rows,
            );
            // Dataset files (if any) are already written; the summary
            // report always goes to stdout.
            print!("{}", report.render(a.format)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let suites = verify::run_all(a.seed);
    let mut all_passed = true;
    for (i, s) in suites.iter().enumerate() {
        let status = if s.passed { "PASS" } else { "FAIL" };
        eprintln!("suite {:2} {status} {} — {}", i + 1, s.name, s.detail);
        all_passed &= s.passed;
    }
    let rows = suites
        .into_iter()
        .map(|s| Row {
            name: s.name,
            value: s.value,
            reference: Some(s.reference),
            abs_err: Some(s.abs_err),
            std_err: s.std_err,
        })
        .collect();
    let report = Report::new("verify", inputs(&[]), Some(a.seed), rows);
    write_output(&report.render(a.format)?, a.out.as_deref())?;
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_hecke(a: HeckeArgs) -> Result<ExitCode> {
    let angles = SatakeAngles::new(a.theta1, a.theta2)?;
    let pt = OmegaPoint::from_angles(angles);
    let q = hecke::hecke_polynomial(angles);
    let mut rows = vec![
        Row::plain("lambda(p)", hecke::lambda_p(angles, a.p)?),
        Row::plain("lambda(p^2)", hecke::lambda_p2(angles, a.p)?),
        Row::plain("a(p)", hecke::a_coeff(pt)),
        Row::plain("b(p)", hecke::b_coeff(pt)),
    ];
    rows.extend((0..5).map(|i| Row::plain(format!("q{i}"), q[i])));
    let report = Report::new(
        "hecke",
        inputs(&[
            ("p", json!(a.p)),
            ("theta1", json!(a.theta1)),
            ("theta2", json!(a.theta2)),
        ]),
        None,
        rows,
    );
    write_output(&report.render(a.format)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_char(a: CharArgs) -> Result<ExitCode> {
    let l = HcParam::from_weight(a.k1, a.k2)?;
    let dim = characters::dim_weight(a.k1 as u64, a.k2 as u64)? as f64;
    let mut rows = vec![
        Row::plain("dim", dim),
        Row::with_reference(
            "formal_degree",
            characters::formal_degree(l) as f64,
            6.0 * dim,
        ),
    ];
    let delta1 = characters::singular_limit_delta1(l);
    // Cross-check the closed form against the central second difference.
    let numeric = characters::singular_limit_delta1_numeric(l, STENCIL_H)?;
    rows.push(Row::with_reference(
        "singular_limit_delta1",
        delta1,
        numeric,
    ));
    rows.push(Row::plain(
        "singular_limit_umin",
        characters::singular_limit_umin(l),
    ));
    let mut input_pairs = vec![("k1", json!(a.k1)), ("k2", json!(a.k2))];
    if let (Some(t1), Some(t2)) = (a.theta1, a.theta2) {
        let v = characters::char_compact(l, t1, t2)?;
        rows.push(Row::plain("char_compact_re", v.re));
        rows.push(Row::plain("char_compact_im", v.im));
        input_pairs.push(("theta1", json!(t1)));
        input_pairs.push(("theta2", json!(t2)));
    }
    let report = Report::new("char", inputs(&input_pairs), None, rows);
    write_output(&report.render(a.format)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_euler(a: EulerArgs) -> Result<ExitCode> {
    if a.n > 64 {
        bail!("coefficient count {} exceeds 64", a.n);
    }
    let angles = SatakeAngles::new(a.theta1, a.theta2)?;
    let spin = lfun::spin_euler_tempered(angles);
    let std5 = lfun::std_euler_tempered(angles);
    let dirichlet = lfun::dirichlet_coeffs(&spin, a.n)?;
    let mut rows: Vec<Row> = Vec::new();
    rows.extend((0..5).map(|i| Row::plain(format!("spin[{i}]"), spin[i])));
    rows.extend((0..6).map(|i| Row::plain(format!("std[{i}]"), std5[i])));
    rows.extend((1..=a.n).map(|i| Row::plain(format!("dirichlet[{i}]"), dirichlet[i])));
    let report = Report::new(
        "euler",
        inputs(&[
            ("n", json!(a.n)),
            ("theta1", json!(a.theta1)),
            ("theta2", json!(a.theta2)),
        ]),
        None,
        rows,
    );
    write_output(&report.render(a.format)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_density(a: DensityArgs) -> Result<ExitCode> {
    let ds = load_dataset(&a.data, a.sidecar.clone())?;
    let q = ds.conductor.unwrap_or(ds.level);
    let conductor = match a.family {
        FamilyKind::Spin => lfun::analytic_conductor_spin(ds.k1, ds.k2, q)?,
        FamilyKind::Std => lfun::analytic_conductor_std(ds.k1, ds.k2, q)?,
    };
    let log_c = (conductor as f64).ln();
    let phi = onelevel::fejer(a.u)?;
    let rows = vec![
        Row::plain("log_conductor", log_c),
        Row::plain("prediction", onelevel::prediction(a.family, &phi)),
        Row::plain(
            "prime_sum_order1",
            onelevel::explicit_prime_sum(&ds, a.family, 1, &phi, log_c)?,
        ),
        Row::plain(
            "prime_sum_order2",
            onelevel::explicit_prime_sum(&ds, a.family, 2, &phi, log_c)?,
        ),
    ];
    let report = Report::new(
        "density",
        inputs(&[
            ("data", json!(a.data.display().to_string())),
            ("family", json!(family_name(a.family))),
            ("u", json!(a.u)),
        ]),
        None,
        rows,
    );
    write_output(&report.render(a.format)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn family_name(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::Spin => "spin",
        FamilyKind::Std => "std",
    }
}

fn cmd_report(a: ReportArgs) -> Result<ExitCode> {
    let ds = load_dataset(&a.data, a.sidecar.clone())?;
    let fns = harness::standard_test_functions();
    let rep = harness::equidist_report(&ds, a.p, &fns, a.tol)?;
    let rows = rep
        .rows
        .into_iter()
        .map(|r| Row {
            name: r.name,
            value: r.empirical,
            reference: Some(r.reference),
            abs_err: Some(r.difference.abs()),
            std_err: Some(r.std_err),
        })
        .collect();
    let report = Report::new(
        "report",
        inputs(&[
            ("data", json!(a.data.display().to_string())),
            ("n", json!(rep.n)),
            ("p", json!(a.p)),
            ("tol", json!(a.tol)),
        ]),
        None,
        rows,
    );
    write_output(&report.render(a.format)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_budget(a: BudgetArgs) -> Result<ExitCode> {
    let params = BudgetParams {
        a: a.a,
        b: a.b,
        a_prime: a.a_prime,
        b_prime: a.b_prime,
    };
    let mut rows = Vec::new();
    let mut input_pairs = vec![
        ("a", json!(a.a)),
        ("a_prime", json!(a.a_prime)),
        ("b", json!(a.b)),
        ("b_prime", json!(a.b_prime)),
        ("kappa", json!(a.kappa)),
        ("p", json!(a.p)),
    ];
    if let Some(level) = a.level {
        let lb = harness::level_error_budget(a.p, a.kappa, level, &params)?;
        rows.push(Row::plain("level_main", lb.main));
        rows.push(Row::plain("level_remainder", lb.remainder));
        input_pairs.push(("N", json!(level)));
    }
    if let (Some(k1), Some(k2)) = (a.k1, a.k2) {
        let wb = harness::weight_error_budget(a.p, a.kappa, k1, k2, &params)?;
        rows.push(Row::plain("weight_b1", wb.b1));
        rows.push(Row::plain("weight_b2", wb.b2));
        rows.push(Row::plain("weight_remainder", wb.remainder));
        input_pairs.push(("k1", json!(k1)));
        input_pairs.push(("k2", json!(k2)));
    }
    if rows.is_empty() {
        bail!("nothing to budget: pass --N for the level aspect and/or --k1 --k2 for the weight aspect");
    }
    let report = Report::new("budget", inputs(&input_pairs), None, rows);
    write_output(&report.render(a.format)?, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
