use absnorm::boundary::{psi_curve, rows_to_csv, rows_to_json};
use absnorm::format::fmt17;
use absnorm::norm::validate_norm;
use absnorm::sum::{
    bgp_sum_verdict, equivalence_crosscheck, lemma_inclusion_verify, margins_to_csv,
    smooth_at_basis_with, SamplingConfig, DEFAULT_EPSILONS,
};
use absnorm::support::{support_set_endpoint, support_set_interior};
use absnorm::{
    BoundaryCurve, Coordinate, Error, Exec, FiniteSpace, NormSpec, Side, Tolerances, Tri,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_VIOLATION: u8 = 4;
const EXIT_PRECONDITION: u8 = 5;

#[derive(Parser)]
#[command(
    name = "absnorm",
    version,
    about = "Absolute norms on the plane: boundary curves, support functionals, direct-sum checks"
)]
struct Cli {
    /// Norm in the mini-language, e.g. `p:2`, `mix:0.5:p:1:p:inf`, `curve:0,1;0.5,0.9;1,0`.
    #[arg(long, global = true)]
    norm: Option<String>,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Tolerance override, `<name>=<value>`; repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,

    /// Diagnostics on standard error; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoordArg {
    First,
    Second,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the norm at a point.
    Eval {
        #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
        point: String,
    },
    /// Tabulate the upper boundary curve on an equispaced grid of [-1, 1].
    Boundary {
        #[arg(long, default_value_t = 201)]
        n: usize,
    },
    /// Support functionals at an interior point or an endpoint.
    Support {
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "endpoint",
            required_unless_present = "endpoint"
        )]
        x0: Option<f64>,
        #[arg(long, value_enum)]
        endpoint: Option<SideArg>,
    },
    /// Strict convexity, strict monotonicity, basis smoothness and the direct-sum verdict.
    Classify {
        #[arg(long, default_value_t = 201)]
        grid: usize,
    },
    /// Compare basis-point smoothness with the sampled ball conditions.
    BgpCheck {
        /// Comma-separated epsilons.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long)]
        s_max: Option<f64>,
        /// Coordinate whose margins are written in CSV mode.
        #[arg(long, value_enum, default_value = "first")]
        coordinate: CoordArg,
    },
    /// Sample the ball inclusions on a finite-dimensional direct sum.
    Lemma {
        /// First component, `<norm>,<dim>`.
        #[arg(long = "X", value_name = "SPEC,DIM")]
        x_space: String,
        /// Second component, `<norm>,<dim>`.
        #[arg(long = "Y", value_name = "SPEC,DIM")]
        y_space: String,
        /// Ball center in the second component, comma-separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Run the sampling loop on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// `psi(t) = ‖(1 − t, t)‖` at one point or on a grid of [0, 1].
    Psi {
        #[arg(long, conflicts_with = "n")]
        t: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Sample the norm axioms and absoluteness.
    Validate {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

enum Failure {
    Core(Error, Option<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e, None)
    }
}

struct Output {
    text: String,
    /// Set when the report itself signals a violation or inconsistency.
    violation: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            violation: None,
        }
    }
}

fn json_with_seed<T: Serialize>(report: &T, seed: u64) -> String {
    let mut v = serde_json::to_value(report).expect("report serialises");
    if let Value::Object(map) = &mut v {
        map.entry("seed").or_insert(Value::from(seed));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("report serialises");
    s.push('\n');
    s
}

fn parse_norm(text: Option<&str>) -> Result<NormSpec, Failure> {
    let text = text.ok_or_else(|| {
        Failure::Core(
            Error::Parse {
                pos: 0,
                msg: "missing --norm".into(),
            },
            None,
        )
    })?;
    text.parse::<NormSpec>()
        .map_err(|e| Failure::Core(e, Some(text.to_string())))
}

fn parse_point(text: &str) -> Result<[f64; 2], Failure> {
    let bad = |pos: usize, msg: &str| {
        Failure::Core(
            Error::Parse {
                pos,
                msg: msg.into(),
            },
            Some(text.to_string()),
        )
    };
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| bad(0, "expected `x,y`"))?;
    let x = a.trim().parse().map_err(|_| bad(0, "invalid number"))?;
    let y = b
        .trim()
        .parse()
        .map_err(|_| bad(a.len() + 1, "invalid number"))?;
    Ok([x, y])
}

fn tolerances(overrides: &[String]) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    for o in overrides {
        let (name, value) = o.split_once('=').ok_or_else(|| {
            Failure::Core(
                Error::Parse {
                    pos: 0,
                    msg: format!("expected `<name>=<value>`, got `{o}`"),
                },
                Some(o.clone()),
            )
        })?;
        let v: f64 = value.parse().map_err(|_| {
            Failure::Core(
                Error::Parse {
                    pos: name.len() + 1,
                    msg: format!("invalid number `{value}`"),
                },
                Some(o.clone()),
            )
        })?;
        tol.set(name, v)?;
    }
    Ok(tol)
}

#[derive(Serialize)]
struct Classification {
    norm: String,
    strictly_convex: Tri,
    strictly_monotone: Tri,
    smooth_01: Tri,
    smooth_10: Tri,
    bgp_sum: absnorm::sum::Preservation,
    notes: Vec<String>,
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let tol = tolerances(&cli.tol)?;
    let spec = parse_norm(cli.norm.as_deref())?;
    let curve = BoundaryCurve::with_tolerances(spec.clone(), tol);
    let seed = cli.seed;
    if cli.verbose > 0 {
        eprintln!("norm: {spec}");
        if cli.verbose > 1 {
            eprintln!(
                "tolerances: {}",
                serde_json::to_string(&tol).expect("tolerances serialise")
            );
        }
    }
    let out = match &cli.command {
        Command::Eval { point } => {
            let p = parse_point(point)?;
            Output::ok(format!("{}\n", fmt17(spec.eval(p)?)))
        }
        Command::Boundary { n } => {
            let rows = curve.tabulate(*n)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => Output::ok(rows_to_csv(&rows)),
                Format::Json => Output::ok(format!("{}\n", rows_to_json(&rows))),
            }
        }
        Command::Support { x0, endpoint } => {
            let set = match (x0, endpoint) {
                (Some(x0), _) => support_set_interior(&curve, *x0)?,
                (None, Some(SideArg::Left)) => support_set_endpoint(&curve, Side::Left)?,
                (None, Some(SideArg::Right)) => support_set_endpoint(&curve, Side::Right)?,
                (None, None) => unreachable!("clap requires one of --x0 and --endpoint"),
            };
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => Output::ok(json_with_seed(&set, seed)),
                Format::Csv => {
                    let mut s = String::from("A,B\n");
                    for g in &set.representatives {
                        s.push_str(&format!("{},{}\n", fmt17(g.a), fmt17(g.b)));
                    }
                    Output::ok(s)
                }
            }
        }
        Command::Classify { grid } => {
            let conv = curve.classify_convexity(*grid)?;
            let (smooth_01, smooth_10) = smooth_at_basis_with(&spec, tol)?;
            let bgp = bgp_sum_verdict(&spec, tol)?;
            let c = Classification {
                norm: spec.to_string(),
                strictly_convex: conv.strictly_convex,
                strictly_monotone: conv.strictly_monotone,
                smooth_01,
                smooth_10,
                bgp_sum: bgp.verdict,
                notes: bgp.notes,
            };
            Output::ok(json_with_seed(&c, seed))
        }
        Command::BgpCheck {
            eps,
            s_max,
            coordinate,
        } => {
            let eps = eps.clone().unwrap_or_else(|| DEFAULT_EPSILONS.to_vec());
            let report = equivalence_crosscheck(&spec, &eps, *s_max, tol)?;
            let violation = (report.consistent == Tri::No)
                .then(|| "smoothness and sampled condition verdicts disagree".to_string());
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => json_with_seed(&report, seed),
                Format::Csv => {
                    let want = match coordinate {
                        CoordArg::First => Coordinate::First,
                        CoordArg::Second => Coordinate::Second,
                    };
                    let d = report
                        .detail
                        .iter()
                        .find(|d| d.coordinate == want)
                        .expect("both coordinates checked");
                    margins_to_csv(&d.witnesses)
                }
            };
            Output { text, violation }
        }
        Command::Lemma {
            x_space,
            y_space,
            y,
            r,
            samples,
            sequential,
        } => {
            let xs =
                FiniteSpace::parse(x_space).map_err(|e| Failure::Core(e, Some(x_space.clone())))?;
            let ys =
                FiniteSpace::parse(y_space).map_err(|e| Failure::Core(e, Some(y_space.clone())))?;
            let exec = if *sequential {
                Exec::Sequential
            } else {
                Exec::default()
            };
            let started = Instant::now();
            let report = lemma_inclusion_verify(
                &spec,
                &xs,
                &ys,
                y,
                *r,
                SamplingConfig {
                    samples: *samples,
                    seed,
                    exec,
                },
            )?;
            if cli.verbose > 0 {
                eprintln!(
                    "sampled {} points in {:.2?}",
                    report.samples_checked,
                    started.elapsed()
                );
            }
            let violation = (!report.is_clean()).then(|| {
                format!(
                    "{} inclusion violations, zero excluded: {}",
                    report.violations.len(),
                    report.zero_excluded
                )
            });
            Output {
                text: json_with_seed(&report, seed),
                violation,
            }
        }
        Command::Psi { t, n } => match (t, n) {
            (Some(t), _) => Output::ok(format!("{}\n", fmt17(psi_curve(&spec, *t)?))),
            (None, n) => {
                let n = n.unwrap_or(101);
                if n < 2 {
                    return Err(Error::Domain(format!("psi grid needs n >= 2, got {n}")).into());
                }
                let mut s = String::from("t,psi\n");
                for i in 0..n {
                    let t = i as f64 / (n - 1) as f64;
                    s.push_str(&format!("{},{}\n", fmt17(t), fmt17(psi_curve(&spec, t)?)));
                }
                Output::ok(s)
            }
        },
        Command::Validate { samples } => {
            let report = validate_norm(&spec, *samples, seed, Exec::default())?;
            let violation = (!report.passed)
                .then(|| format!("{} property violations", report.violations.len()));
            Output {
                text: json_with_seed(&report, seed),
                violation,
            }
        }
    };
    Ok(out)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Spec(_) => EXIT_PARSE,
        Error::Domain(_) | Error::Degenerate(_) | Error::UndecidedCase { .. } => EXIT_DOMAIN,
        Error::ConcavityViolation { .. } => EXIT_VIOLATION,
        Error::Precondition(_) => EXIT_PRECONDITION,
    }
}

fn report_error(e: &Error, source: Option<&str>) {
    eprintln!("error: {e}");
    if let (Error::Parse { pos, .. }, Some(src)) = (e, source) {
        eprintln!("  {src}");
        eprintln!(
            "  {}^",
            " ".repeat(src[..(*pos).min(src.len())].chars().count())
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    let mut stdout = std::io::stdout().lock();
                    match stdout
                        .write_all(out.text.as_bytes())
                        .and_then(|_| stdout.flush())
                    {
                        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                        other => other,
                    }
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_DOMAIN);
            }
            match out.violation {
                Some(msg) => {
                    eprintln!("violation: {msg}");
                    ExitCode::from(EXIT_VIOLATION)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Core(e, source)) => {
            report_error(&e, source.as_deref());
            ExitCode::from(exit_code(&e))
        }
    }
}
