use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use samuel_core::error::{Error, Result};
use samuel_core::field::{Field, Rationals};
use samuel_core::filtration::{monomial_closure, ratliff_rush, DEFAULT_RR_CEILING};
use samuel_core::hilbert::{format_series, DEFAULT_NMAX, DEFAULT_WINDOW};
use samuel_core::ideal::Ideal;
use samuel_core::reductions::{superficial_element, Config};
use samuel_core::session::{parse_session, FieldChoice, Session};
use samuel_core::suite::{fuzz_suite, golden_suite};
use samuel_core::theorems::{Instance, Options, Verdict};

/// Hilbert–Samuel invariants of m-primary ideals in local rings.
#[derive(Parser)]
#[command(name = "samuel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Coefficient field: `q` or `fp:<prime>`.
    #[arg(long, global = true, default_value = "fp")]
    field: FieldChoice,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Largest table index computed for Hilbert functions.
    #[arg(long, global = true, default_value_t = DEFAULT_NMAX, value_parser = positive)]
    nmax: usize,
    /// Largest reduction number tried.
    #[arg(long, global = true, default_value_t = samuel_core::reductions::DEFAULT_RMAX, value_parser = positive)]
    rmax: usize,
    /// Zero-tail length that certifies a stable series.
    #[arg(long, global = true, default_value_t = DEFAULT_WINDOW, value_parser = positive)]
    window: usize,
    #[arg(long, global = true)]
    json: bool,
    /// Treat the ideal as integrally closed where that cannot be tested.
    #[arg(long, global = true)]
    assume_closed: bool,
    /// Treat the ideal as normal where that cannot be tested.
    #[arg(long, global = true)]
    assume_normal: bool,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args, Clone)]
struct Target {
    /// Session file.
    file: PathBuf,
    /// Ideal to use (default: the first one declared).
    #[arg(long)]
    ideal: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Golden,
    Fuzz,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert–Samuel table, series and coefficients.
    Hilbert(Target),
    /// Hilbert coefficients e_0..e_d.
    Coeffs(Target),
    /// Numerator of the Hilbert series.
    Series(Target),
    /// A random minimal reduction and its reduction number.
    Reduce(Target),
    /// A certified superficial element.
    Superficial {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3)]
        c_max: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Ratliff–Rush closures of the first powers.
    Rr {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3)]
        power: u32,
    },
    /// Integral closure of a monomial ideal.
    Closure(Target),
    /// Bounds on the depth of the associated graded ring.
    Depth(Target),
    /// Theorem verdicts for an ideal, or one of the built-in suites.
    Verify {
        file: Option<PathBuf>,
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long, conflicts_with = "file")]
        suite: Option<Suite>,
        #[arg(long, conflicts_with = "suite")]
        theorem: Option<String>,
        /// Number of fuzz instances.
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

struct Report {
    value: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn ok(value: Value, text: String) -> Self {
        Report { value, text, ok: true }
    }
}

fn options(c: &Common) -> Options {
    Options {
        reduction: Config {
            seed: c.seed,
            rmax: c.rmax,
            ..Config::default()
        },
        window: c.window,
        nmax: c.nmax,
        assume_closed: c.assume_closed,
        assume_normal: c.assume_normal,
        ..Options::default()
    }
}

fn load<K: Field>(path: &Path, field: K) -> Result<Session<K>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_session(&text, field)
}

fn instance<K: Field>(t: &Target, field: K, opts: Options) -> Result<Instance<K>> {
    let s = load(&t.file, field)?;
    let i = s.ideal(t.ideal.as_deref())?.clone();
    Ok(Instance::new(i, opts))
}

fn polys<K: Field>(i: &Ideal<K>, elems: &[samuel_core::poly::Poly<K>]) -> Vec<String> {
    elems.iter().map(|p| i.ring().format(p)).collect()
}

fn verdict_line(v: &Verdict) -> String {
    let word = |x: Value| x.as_str().unwrap_or("?").to_string();
    let mut s = format!(
        "{}: hypothesis {}, conclusion {}",
        v.theorem,
        word(json!(v.hypothesis)),
        word(json!(v.conclusion))
    );
    if v.is_violation() {
        s.push_str("  VIOLATION");
    }
    for (k, q) in &v.quantities {
        s.push_str(&format!("\n    {k} = {q}"));
    }
    for n in &v.notes {
        s.push_str(&format!("\n    note: {n}"));
    }
    s
}

fn run<K: Field>(field: K, cli: &Cli) -> Result<Report> {
    let opts = options(&cli.common);
    let tag = field.tag();
    match &cli.command {
        Command::Hilbert(t) => {
            let inst = instance(t, field, opts)?;
            let h = inst.hilbert()?;
            let text = format!(
                "lengths: {:?}\nseries: ({}) / (1-t)^{}\ne: {:?}\npostulation: {}",
                h.table,
                h.series_text(),
                h.d,
                h.e,
                h.postulation
            );
            Ok(Report::ok(json!({ "field": tag, "hilbert": h }), text))
        }
        Command::Coeffs(t) => {
            let inst = instance(t, field, opts)?;
            let e = &inst.hilbert()?.e;
            Ok(Report::ok(json!({ "field": tag, "e": e }), format!("e: {e:?}")))
        }
        Command::Series(t) => {
            let inst = instance(t, field, opts)?;
            let h = inst.hilbert()?;
            let text = format!("({}) / (1-t)^{}", format_series(&h.h), h.d);
            Ok(Report::ok(json!({ "field": tag, "numerator": h.h, "d": h.d, "series": text }), text))
        }
        Command::Reduce(t) => {
            let inst = instance(t, field, opts)?;
            let red = inst.reduction()?;
            let elems = polys(inst.ideal(), &red.elems);
            let text = format!(
                "J = ({})\nr = {}\nlambda(I^(n+1)/J I^n) = {:?}\nlength(R/J) = {}",
                elems.join(", "),
                red.r,
                red.lambda,
                red.j.length()
            );
            let value = json!({
                "field": tag,
                "elements": elems,
                "r": red.r,
                "lambda": red.lambda,
                "length_r_mod_j": red.j.length(),
                "seed": red.seed,
            });
            Ok(Report::ok(value, text))
        }
        Command::Superficial { target, c_max, n_max } => {
            let inst = instance(target, field, opts)?;
            let cert = superficial_element(inst.ideal(), &opts.reduction, *c_max, *n_max)?;
            let x = inst.ideal().ring().format(&cert.x);
            let text = format!("x = {x}\nc = {} (checked n <= {})", cert.c, cert.n_max);
            let value = json!({ "field": tag, "element": x, "c": cert.c, "n_max": cert.n_max, "seed": cert.seed });
            Ok(Report::ok(value, text))
        }
        Command::Rr { target, power } => {
            let inst = instance(target, field, opts)?;
            let mut rows = Vec::new();
            let mut text = Vec::new();
            for n in 1..=*power {
                let rr = ratliff_rush(inst.ideal(), n, DEFAULT_RR_CEILING)?;
                let gens = rr.ideal.to_text();
                text.push(format!(
                    "n = {n}: {gens}  (stable at k = {}, equals I^{n}: {})",
                    rr.k_star, rr.equals_power
                ));
                rows.push(json!({ "n": n, "ideal": gens, "k_star": rr.k_star, "equals_power": rr.equals_power }));
            }
            Ok(Report::ok(json!({ "field": tag, "closures": rows }), text.join("\n")))
        }
        Command::Closure(t) => {
            let inst = instance(t, field, opts)?;
            let i = inst.ideal();
            let c = monomial_closure(i)?;
            let closed = c.equals(i)?;
            let text = format!("closure: {}\nlength: {}\nclosed: {closed}", c.to_text(), c.length());
            Ok(Report::ok(
                json!({ "field": tag, "closure": c.to_text(), "length": c.length(), "closed": closed }),
                text,
            ))
        }
        Command::Depth(t) => {
            let inst = instance(t, field, opts)?;
            let d = inst.depth()?;
            let upper = d.upper.map_or("?".to_string(), |u| u.to_string());
            let text = format!(
                "{} <= depth <= {upper}  (certified for n <= {}; {})",
                d.lower,
                d.n_cert,
                d.methods.join(", ")
            );
            Ok(Report::ok(json!({ "field": tag, "depth": d }), text))
        }
        Command::Verify {
            file,
            ideal,
            suite,
            theorem,
            count,
        } => match (suite, file) {
            (Some(Suite::Golden), _) => {
                let r = golden_suite(field, &opts)?;
                let mut lines: Vec<String> = r
                    .checks
                    .iter()
                    .map(|c| {
                        let mark = if c.pass { "PASS" } else { "FAIL" };
                        format!("{mark} {}/{}: expected {}, got {}", c.example, c.name, c.expected, c.actual)
                    })
                    .collect();
                lines.extend(r.verdicts.iter().map(|(e, v)| format!("[{e}] {}", verdict_line(v))));
                let ok = r.pass();
                Ok(Report {
                    value: json!({ "field": tag, "suite": "golden", "pass": ok, "report": r }),
                    text: lines.join("\n"),
                    ok,
                })
            }
            (Some(Suite::Fuzz), _) => {
                let r = fuzz_suite(field, cli.common.seed, *count, &opts)?;
                let mut lines = vec![format!("seed {}, {} instances", r.seed, r.instances)];
                lines.extend(r.checked.iter().map(|(k, n)| format!("checked {k}: {n}")));
                lines.extend(r.outcomes.iter().map(|(k, n)| format!("outcome {k}: {n}")));
                lines.extend(r.violations.iter().map(|v| format!("VIOLATION {v}")));
                let ok = r.pass();
                Ok(Report {
                    value: json!({ "field": tag, "suite": "fuzz", "pass": ok, "report": r }),
                    text: lines.join("\n"),
                    ok,
                })
            }
            (None, Some(file)) => {
                let t = Target {
                    file: file.clone(),
                    ideal: ideal.clone(),
                };
                let inst = instance(&t, field, opts)?;
                let verdicts = match theorem {
                    Some(id) => vec![inst.check(id)?],
                    None => inst.check_all()?,
                };
                let ok = verdicts.iter().all(|v| !v.is_violation());
                let text = verdicts.iter().map(verdict_line).collect::<Vec<_>>().join("\n");
                Ok(Report {
                    value: json!({ "field": tag, "verdicts": verdicts }),
                    text,
                    ok,
                })
            }
            (None, None) => Err(Error::Input("verify needs a session file or --suite".into())),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.common.field {
        FieldChoice::Rationals => run(Rationals, &cli),
        FieldChoice::Prime(p) => run(p, &cli),
    };
    match result {
        Ok(report) => {
            let out = if cli.common.json {
                match serde_json::to_string_pretty(&report.value) {
                    Ok(s) => s,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            } else {
                report.text
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
