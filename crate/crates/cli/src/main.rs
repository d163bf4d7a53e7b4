use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use coho_core::invariants::{r_g, r_g_mu, r_prime, InvariantValue, RgOptions};
use coho_core::langlands::langlands_decompose;
use coho_core::realform::{bundled_data_dir, load_catalog, Catalog};
use coho_core::rootsys::{parse_coords, ParabolicSubset, RationalFunctional};
use coho_core::verify::{
    run_suite_streaming, summarize, table_rows, Status, Suite, SuiteOptions, TableCell, TableRow,
    VerificationReport, DEFAULT_BOUND, DEFAULT_SAMPLES, REPORT_SCHEMA_VERSION,
};
use coho_core::{Error, Q};

const EXIT_FAILURES: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Markdown,
    Csv,
    JsonLines,
}

#[derive(Parser)]
#[command(name = "coho", version, about = "Vanishing-degree invariants of simple real Lie algebras")]
struct Cli {
    /// Directory of form descriptors (defaults to the bundled catalog).
    #[arg(long, global = true, env = "COHO_DATA_DIR")]
    data_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "markdown")]
    format: Format,

    /// Lift the rank limit on the exhaustive r_g search (needed for E V to
    /// E IX).
    #[arg(long, global = true)]
    deep: bool,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Computed r' and r_g next to the literature values.
    Tables,
    /// One invariant of one form.
    Invariant {
        form: String,
        #[command(subcommand)]
        which: Which,
    },
    /// Langlands cell of a functional on the restricted Cartan.
    Langlands {
        form: String,
        /// Coordinates against the restricted fundamental weights, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_parser = ["tables", "lemmas", "estimate0", "all"], default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        /// Sampled parameters per parabolic in the half-count check.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum Which {
    Rprime,
    Rg,
    Q0,
    Rgmu {
        /// Weight coordinates of μ, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotRegularIntegral { .. }
        | Error::Precondition(_)
        | Error::UndefinedForCompact { .. }
        | Error::NoRestrictedRoots(_)
        | Error::ExceedsLimit { .. }
        | Error::Unsupported { .. } => EXIT_PRECONDITION,
        Error::Invariant(_) => EXIT_FAILURES,
        _ => EXIT_INPUT,
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cell_str(c: &TableCell) -> (String, String) {
    let computed = match (&c.computed, c.status) {
        (Some(Json::String(s)), _) => s.clone(),
        (Some(v), _) => v.to_string(),
        (None, Status::Unsupported) => "needs --deep".into(),
        (None, _) => "-".into(),
    };
    let paper = c.paper.map_or("-".into(), |p| p.to_string());
    (computed, paper)
}

fn match_str(row: &TableRow) -> &'static str {
    let statuses = [row.r_prime.status, row.r_g.status];
    if statuses.contains(&Status::Fail) {
        "no"
    } else if statuses.contains(&Status::Unsupported) {
        "partial"
    } else {
        "yes"
    }
}

fn table_title(t: &str) -> &'static str {
    match t {
        "table1" => "Complex simple Lie algebras",
        "table2" => "Noncompact noncomplex classical Lie algebras",
        "table3" => "Noncompact noncomplex exceptional Lie algebras",
        _ => "Other forms",
    }
}

fn cmd_tables(out: &mut impl Write, catalog: &Catalog, format: Format, rg: RgOptions) -> io::Result<u8> {
    let rows = table_rows(catalog, rg);
    match format {
        Format::JsonLines => {
            for r in &rows {
                let mut v = serde_json::to_value(r).expect("rows serialize");
                v["match"] = json!(match_str(r));
                v["schema_version"] = json!(REPORT_SCHEMA_VERSION);
                writeln!(out, "{v}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "table,form,r_prime_computed,r_prime_paper,r_computed,r_paper,match")?;
            for r in &rows {
                let (a, b) = cell_str(&r.r_prime);
                let (c, d) = cell_str(&r.r_g);
                writeln!(
                    out,
                    "{},{},{a},{b},{c},{d},{}",
                    r.table,
                    csv_field(&r.form),
                    match_str(r)
                )?;
            }
        }
        Format::Markdown => {
            let mut current = None;
            for r in &rows {
                if current != Some(&r.table) {
                    if current.is_some() {
                        writeln!(out)?;
                    }
                    current = Some(&r.table);
                    writeln!(out, "## {}: {}\n", r.table, table_title(&r.table))?;
                    writeln!(out, "| form | r' computed | r' paper | r computed | r paper | match |")?;
                    writeln!(out, "|---|---|---|---|---|---|")?;
                }
                let (a, b) = cell_str(&r.r_prime);
                let (c, d) = cell_str(&r.r_g);
                writeln!(out, "| {} | {a} | {b} | {c} | {d} | {} |", r.form, match_str(r))?;
            }
        }
    }
    let failed = rows.iter().any(|r| !r.matches());
    Ok(if failed { EXIT_FAILURES } else { 0 })
}

fn print_invariant(
    out: &mut impl Write,
    format: Format,
    form: &str,
    name: &str,
    v: &InvariantValue,
) -> io::Result<()> {
    match format {
        Format::JsonLines => {
            let mut j = serde_json::to_value(v).expect("values serialize");
            j["value"] = json!(v.value.to_string());
            j["form"] = json!(form);
            j["invariant"] = json!(name);
            j["schema_version"] = json!(REPORT_SCHEMA_VERSION);
            writeln!(out, "{j}")
        }
        Format::Csv => {
            writeln!(out, "form,invariant,value,witness")?;
            writeln!(
                out,
                "{},{name},{},{}",
                csv_field(form),
                v.value,
                csv_field(v.witness.as_deref().unwrap_or(""))
            )
        }
        Format::Markdown => {
            writeln!(out, "{}", v.value)?;
            if let Some(w) = &v.witness {
                writeln!(out, "witness: {w}")?;
            }
            Ok(())
        }
    }
}

fn cmd_invariant(
    out: &mut impl Write,
    catalog: &Catalog,
    format: Format,
    rg: RgOptions,
    form: &str,
    which: &Which,
) -> Result<u8, Error> {
    let f = catalog.get(form)?;
    let (name, v) = match which {
        Which::Rprime => ("r_prime", r_prime(f)?),
        Which::Rg => ("r_g", r_g(f, rg)?),
        Which::Rgmu { mu } => {
            let mu = RationalFunctional::new(parse_coords(mu)?);
            if mu.rank() != f.system.rank() {
                return Err(Error::Dimension {
                    expected: f.system.rank(),
                    got: mu.rank(),
                });
            }
            ("r_g_mu", r_g_mu(f, &mu)?)
        }
        Which::Q0 => {
            let q0 = f.q0()?;
            match format {
                Format::JsonLines => writeln!(out, "{}", json!({
                    "schema_version": REPORT_SCHEMA_VERSION,
                    "form": form,
                    "invariant": "q0",
                    "value": q0.to_string(),
                }))?,
                Format::Csv => writeln!(out, "form,invariant,value\n{},q0,{q0}", csv_field(form))?,
                Format::Markdown => writeln!(out, "{q0}")?,
            }
            return Ok(0);
        }
    };
    print_invariant(out, format, form, name, &v)?;
    Ok(0)
}

fn parabolic_name(s: &ParabolicSubset, rank: usize) -> String {
    if s.levi.is_empty() {
        "P0".into()
    } else if s.levi.len() == rank {
        "G".into()
    } else {
        format!("S={s}")
    }
}

fn cmd_langlands(out: &mut impl Write, catalog: &Catalog, format: Format, form: &str, nu: &str) -> Result<u8, Error> {
    let f = catalog.get(form)?;
    let rs = f.restricted_root_system()?;
    let nu = RationalFunctional::new(parse_coords(nu)?);
    let d = langlands_decompose(&rs, &nu)?;
    let p = parabolic_name(&d.parabolic, rs.rank());
    let strs = |v: &[Q]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    match format {
        Format::JsonLines => writeln!(
            out,
            "{}",
            json!({
                "schema_version": REPORT_SCHEMA_VERSION,
                "form": form,
                "nu": strs(&nu.coords),
                "parabolic": p,
                "nu_plus": strs(&d.nu_plus.coords),
                "cone_part": strs(&d.cone_part.coords),
                "coefficients": strs(&d.coefficients),
            })
        )?,
        Format::Csv => writeln!(
            out,
            "parabolic,nu_plus,cone_part,coefficients\n{},{},{},{}",
            csv_field(&p),
            csv_field(&d.nu_plus.to_string()),
            csv_field(&d.cone_part.to_string()),
            csv_field(&strs(&d.coefficients).join(" "))
        )?,
        Format::Markdown => {
            writeln!(out, "P = {p}")?;
            if d.nu_plus == nu {
                writeln!(out, "nu_plus = nu = {}", d.nu_plus)?;
            } else {
                writeln!(out, "nu_plus = {}", d.nu_plus)?;
            }
            writeln!(out, "cone part = {}", d.cone_part)?;
            writeln!(out, "cone coefficients = [{}]", strs(&d.coefficients).join(", "))?;
        }
    }
    Ok(0)
}

fn report_summary(r: &VerificationReport) -> String {
    let mut parts = Vec::new();
    for key in ["reason", "admissible", "samples", "violations", "min_slack", "min_count", "r_g", "computed"] {
        if let Some(v) = r.stats.get(key) {
            let v = match v {
                Json::String(s) => s.clone(),
                v => v.to_string(),
            };
            parts.push(format!("{key}={v}"));
        }
    }
    if let Some(w) = &r.witness {
        parts.push(format!("witness={w}"));
    }
    parts.join("; ")
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Unsupported => "unsupported",
        Status::Skipped => "skipped",
    }
}

fn cmd_verify(out: &mut impl Write, catalog: &Catalog, format: Format, suite: Suite, opts: SuiteOptions) -> io::Result<u8> {
    let mut all = Vec::new();
    let mut io_err = None;
    match format {
        Format::Markdown => {
            writeln!(out, "| claim | status | details |")?;
            writeln!(out, "|---|---|---|")?;
        }
        Format::Csv => writeln!(out, "claim,status,details")?,
        Format::JsonLines => {}
    }
    run_suite_streaming(catalog, suite, opts, |batch| {
        for r in batch {
            let res = match format {
                Format::JsonLines => writeln!(out, "{}", r.to_json_line()),
                Format::Csv => writeln!(
                    out,
                    "{},{},{}",
                    csv_field(&r.claim_id),
                    status_str(r.status),
                    csv_field(&report_summary(r))
                ),
                Format::Markdown => writeln!(
                    out,
                    "| {} | {} | {} |",
                    r.claim_id,
                    status_str(r.status),
                    report_summary(r).replace('|', "\\|")
                ),
            };
            if let Err(e) = res.and_then(|_| out.flush()) {
                io_err.get_or_insert(e);
            }
        }
        all.extend_from_slice(batch);
    });
    if let Some(e) = io_err {
        return Err(e);
    }
    let counts = summarize(&all);
    eprintln!(
        "{} reports: {} pass, {} fail, {} unsupported, {} skipped",
        all.len(),
        counts["pass"],
        counts["fail"],
        counts["unsupported"],
        counts["skipped"]
    );
    Ok(if counts["fail"] > 0 { EXIT_FAILURES } else { 0 })
}

fn run(cli: Cli) -> Result<u8, Error> {
    if let Some(n) = cli.jobs {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let dir = cli.data_dir.clone().unwrap_or_else(bundled_data_dir);
    let catalog = load_catalog(&dir)?;
    let rg = if cli.deep { RgOptions::deep() } else { RgOptions::default() };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match &cli.command {
        Command::Tables => cmd_tables(&mut out, &catalog, cli.format, rg)?,
        Command::Invariant { form, which } => cmd_invariant(&mut out, &catalog, cli.format, rg, form, which)?,
        Command::Langlands { form, nu } => cmd_langlands(&mut out, &catalog, cli.format, form, nu)?,
        Command::Verify { suite, bound, samples } => {
            if *bound < 1 {
                return Err(Error::Precondition("--bound must be at least 1".into()));
            }
            let suite: Suite = suite.parse()?;
            let opts = SuiteOptions {
                rg,
                bound: *bound,
                samples: *samples,
            };
            cmd_verify(&mut out, &catalog, cli.format, suite, opts)?
        }
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        // a closed pipe (`coho tables | head`) is not an error
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
