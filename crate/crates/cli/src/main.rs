//! Command-line driver for the D(q) toolkit.
//!
//! Exit codes are a stable contract for CI use: 0 = success, 1 =
//! verification failure, 2 = usage or parse error. All structured output
//! is JSON on stdout (or --out); progress and summaries go to stderr.

use clap::{Parser, Subcommand, ValueEnum};
use dq_core::dq::{pbw_normal_form, DqParams, FreeExpression, Phi};
use dq_core::flag_order;
use dq_core::graph::{minimal_window, module_graph};
use dq_core::gwa::DegreeTooSmall;
use dq_core::hc::{act_closed_form, ActGen, ActionContext, HcError, Tableau};
use dq_core::poly::Polynomial;
use dq_core::rat::Rat;
use dq_core::verify::{self, SuiteReport};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "dq",
    version,
    about = "Exact computations in the type-D noncommutative Kleinian singularity D(q)"
)]
struct Cli {
    /// Ascending rational coefficients of q, e.g. "0,0,0,0,1" for t^4
    #[arg(long, global = true, value_name = "COEFFS")]
    q: Option<String>,

    /// Write the command output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity verification suites and print a JSON report
    Verify {
        /// Run a single suite: relations, gwa, nilhecke, flag, invariance,
        /// star, pbw, or oracle
        #[arg(long, value_name = "SUITE")]
        only: Option<String>,
    },
    /// Map an expression in u, v, w through the embedding and print the
    /// resulting skew-algebra element
    Phi {
        /// Expression text, e.g. "u*v - v*u - 2*w - v"
        expr: String,
    },
    /// Rewrite an expression to its ordered normal form
    Nf {
        /// Expression text, e.g. "w*w"
        expr: String,
    },
    /// Report the nil-Hecke and flag-order identity checks
    Flag {
        /// Degree bound for the polynomial-preservation sweeps
        #[arg(long, default_value_t = 40)]
        max_deg: usize,
    },
    /// Apply a generator to a tableau functional and print the resulting
    /// distribution
    Act {
        /// Generator: u, v, w, or half_v_plus_w
        gen: String,
        /// Tableau order: 0 for evaluation, 1 for the derivative functional
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        order: u8,
        /// Orbit point as a rational, e.g. 1/3
        #[arg(long, value_name = "RATIONAL", allow_hyphen_values = true)]
        point: String,
        /// Solve for the action by interpolation instead of the closed form
        #[arg(long)]
        oracle: bool,
    },
    /// Build the module-structure graph over a finite window
    ModuleGraph {
        /// Any rational representative of the orbit; the orbit class is
        /// computed from it
        #[arg(long, value_name = "RATIONAL", allow_hyphen_values = true)]
        orbit: String,
        /// Window size; defaults to the smallest admissible window
        #[arg(long, value_name = "N")]
        window: Option<i64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Label DOT edges with symbolic names like q(1) instead of values
        #[arg(long)]
        symbolic: bool,
        /// Include the derivative-tableau row on generic orbits (integral
        /// and half-integral windows always carry it)
        #[arg(long)]
        full: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Dot,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((payload, code)) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, payload + "\n") {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                use std::io::Write;
                let mut stdout = std::io::stdout().lock();
                if let Err(e) = writeln!(stdout, "{payload}") {
                    // a closed reader (e.g. head) is not a failure of ours
                    if e.kind() == std::io::ErrorKind::BrokenPipe {
                        return ExitCode::from(0);
                    }
                    eprintln!("error: cannot write output: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn require_q(cli: &Cli) -> Result<Polynomial, Failure> {
    let text = cli
        .q
        .as_deref()
        .ok_or_else(|| Failure::usage("--q is required for this command"))?;
    let q: Polynomial = text
        .parse()
        .map_err(|e| Failure::usage(format!("invalid --q: {e}")))?;
    let found = if q.is_zero() {
        None
    } else {
        Some(q.coeffs().len() - 1)
    };
    match found {
        Some(d) if d >= 4 => Ok(q),
        other => Err(Failure::usage(DegreeTooSmall { found: other }.to_string())),
    }
}

fn parse_params(cli: &Cli) -> Result<DqParams, Failure> {
    let q = require_q(cli)?;
    DqParams::new(q).map_err(|e| Failure::usage(e.to_string()))
}

fn parse_expr(text: &str) -> Result<FreeExpression, Failure> {
    text.parse()
        .map_err(|e| Failure::usage(format!("invalid expression: {e}")))
}

fn parse_rat(text: &str, what: &str) -> Result<Rat, Failure> {
    Rat::from_str(text).map_err(|e| Failure::usage(format!("invalid {what}: {e}")))
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON rendering cannot fail")
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    match &cli.command {
        Command::Verify { only } => cmd_verify(cli, only.as_deref()),
        Command::Phi { expr } => cmd_phi(cli, expr),
        Command::Nf { expr } => cmd_nf(cli, expr),
        Command::Flag { max_deg } => cmd_flag(cli, *max_deg),
        Command::Act { gen, order, point, oracle } => {
            cmd_act(cli, gen, *order, point, *oracle)
        }
        Command::ModuleGraph { orbit, window, format, symbolic, full } => {
            cmd_module_graph(cli, orbit, *window, *format, *symbolic, *full)
        }
    }
}

fn render_report(reports: &[SuiteReport]) -> (String, u8) {
    let mut rows = vec![];
    let mut failed = 0usize;
    let mut total = 0usize;
    for report in reports {
        for check in &report.checks {
            total += 1;
            if !check.pass {
                failed += 1;
            }
            rows.push(serde_json::json!({
                "suite": report.suite,
                "identity": check.name,
                "pass": check.pass,
                "residual": check.residual,
            }));
        }
    }
    if failed == 0 {
        eprintln!("{total} checks in {} suite(s): all passed", reports.len());
    } else {
        eprintln!(
            "{total} checks in {} suite(s): {failed} FAILED",
            reports.len()
        );
    }
    (pretty(&serde_json::Value::Array(rows)), u8::from(failed > 0))
}

fn cmd_verify(cli: &Cli, only: Option<&str>) -> Result<(String, u8), Failure> {
    let reports = match only {
        None => {
            let q = require_q(cli)?;
            verify::full_report(&q).map_err(|e| Failure::usage(e.to_string()))?
        }
        Some(name) => {
            if !verify::SUITE_NAMES.contains(&name) {
                return Err(Failure::usage(format!(
                    "unknown suite {name:?}; expected one of {}",
                    verify::SUITE_NAMES.join(", ")
                )));
            }
            if name == "nilhecke" {
                vec![verify::nil_hecke_suite()]
            } else {
                let q = require_q(cli)?;
                let report = verify::suite_by_name(&q, name)
                    .map_err(|e| Failure::usage(e.to_string()))?
                    .expect("suite name was validated against the listing");
                vec![report]
            }
        }
    };
    Ok(render_report(&reports))
}

fn cmd_phi(cli: &Cli, expr: &str) -> Result<(String, u8), Failure> {
    let q = require_q(cli)?;
    let e = parse_expr(expr)?;
    let phi = Phi::new(&q).map_err(|err| Failure::usage(err.to_string()))?;
    let image = phi.apply(&e);
    let value = serde_json::to_value(&image).expect("skew elements serialize");
    Ok((pretty(&value), 0))
}

fn cmd_nf(cli: &Cli, expr: &str) -> Result<(String, u8), Failure> {
    let params = parse_params(cli)?;
    let e = parse_expr(expr)?;
    let nf = pbw_normal_form(&e, &params).map_err(|err| {
        Failure::verification(format!("rewriting did not terminate: {err}"))
    })?;
    let value = serde_json::to_value(&nf).expect("normal forms serialize");
    Ok((pretty(&value), 0))
}

fn cmd_flag(cli: &Cli, max_deg: usize) -> Result<(String, u8), Failure> {
    let q = require_q(cli)?;
    let checks = flag_order::verify_identities_to_degree(&q, max_deg)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let report = SuiteReport {
        suite: "flag".into(),
        checks,
    };
    Ok(render_report(std::slice::from_ref(&report)))
}

fn cmd_act(
    cli: &Cli,
    gen: &str,
    order: u8,
    point: &str,
    oracle: bool,
) -> Result<(String, u8), Failure> {
    let params = parse_params(cli)?;
    let g = ActGen::from_str(gen).map_err(|_| {
        Failure::usage(format!(
            "unknown generator {gen:?}; expected u, v, w, or half_v_plus_w"
        ))
    })?;
    let point = parse_rat(point, "--point")?;
    let Some((tableau, sign)) = Tableau::canonical(order, point) else {
        return Err(Failure::usage(
            "T1(0) is the zero functional; there is nothing to act on",
        ));
    };
    let dist = if oracle {
        let mut ctx = ActionContext::new(&params);
        ctx.oracle(g, &tableau)
            .map_err(|e| Failure::verification(render_hc_error(&e)))?
    } else {
        act_closed_form(g, &tableau, &params)
    };
    let dist = dist.scale(&sign);
    let value = serde_json::to_value(&dist).expect("distributions serialize");
    Ok((pretty(&value), 0))
}

fn render_hc_error(e: &HcError) -> String {
    match e {
        HcError::WindowTooSmall { required } => format!(
            "window too small: the smallest admissible window here is {required}"
        ),
        other => other.to_string(),
    }
}

fn cmd_module_graph(
    cli: &Cli,
    orbit: &str,
    window: Option<i64>,
    format: OutputFormat,
    symbolic: bool,
    full: bool,
) -> Result<(String, u8), Failure> {
    let params = parse_params(cli)?;
    let lambda0 = parse_rat(orbit, "--orbit")?;
    let n = window.unwrap_or_else(|| minimal_window(&params, &lambda0));
    let graph = match module_graph(&params, &lambda0, n, full) {
        Ok(g) => g,
        Err(e @ HcError::WindowTooSmall { .. }) => {
            return Err(Failure::usage(render_hc_error(&e)))
        }
        Err(e) => return Err(Failure::verification(e.to_string())),
    };
    eprintln!(
        "{} orbit through {}: {} vertices, {} edges, {} closure(s)",
        graph.orbit_class.as_str(),
        graph.lambda0,
        graph.vertices.len(),
        graph.edges.len(),
        graph.closures.len()
    );
    let payload = match format {
        OutputFormat::Dot => graph.to_dot(symbolic),
        OutputFormat::Json => pretty(&graph.to_json()),
    };
    Ok((payload, 0))
}
