use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use geodesica::eulerclass::{euler_number, euler_tuple, EulerResult};
use geodesica::mobius::{uniqueness_check_7_4, uniqueness_check_pretzel};
use geodesica::pipeline::{
    load_bundled_census, load_census, parse_checks, render_knot, run, KnotRecord, KnotSource, RunFlags,
};
use geodesica::pretzel::{
    lambda_closed_form, lambda_poly, psi_root_census, relator_factorization_check, tangency_chain,
};
use geodesica::slopes::slope_set_for_knot;

macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout().lock(), $($arg)*)?
    };
}

#[derive(Parser)]
#[command(name = "geodesica", version, about = "Obstructions to totally geodesic surfaces in knot complements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks over a census and report verdicts
    Report {
        /// Census file; the bundled census when omitted
        #[arg(long)]
        census: Option<PathBuf>,
        /// Comma-separated subset of slopes,euler,pretzel,uniqueness,render, or `all`
        #[arg(long, default_value = "euler,slopes")]
        checks: String,
        #[arg(long, default_value_t = 128)]
        precision_bits: u64,
        /// Write the JSON report here
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write SVG files from the render check into this directory
        #[arg(long)]
        render_dir: Option<PathBuf>,
    },
    /// Identities for the balanced pretzel knot P(2k+1, 2k+1, 2k+1)
    Pretzel {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = PretzelCheck::All)]
        check: PretzelCheck,
        #[arg(long, default_value_t = 256)]
        precision_bits: u64,
        /// Print JSON instead of one line per check
        #[arg(long)]
        json: bool,
    },
    /// Boundary-slope set of a census knot with a case analysis
    Slopes {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        census: Option<PathBuf>,
    },
    /// Euler numbers of the Galois conjugates at real places
    Euler {
        #[arg(long)]
        knot: String,
        /// `all`, or a zero-based real place index
        #[arg(long, default_value = "all")]
        place: String,
        #[arg(long, default_value_t = 128)]
        precision_bits: u64,
        #[arg(long)]
        census: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Denominator systems and tangencies behind the uniqueness of the known surface
    Uniqueness {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        census: Option<PathBuf>,
    },
    /// Draw lifts of the surface boundary as SVG
    Render {
        #[arg(long)]
        knot: String,
        #[arg(long, value_enum)]
        config: RenderConfig,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        census: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PretzelCheck {
    Recursion,
    Relators,
    Census,
    Tangency,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderConfig {
    #[value(name = "pretzel-chain")]
    PretzelChain,
    #[value(name = "74-strip")]
    Strip74,
}

impl RenderConfig {
    fn name(self) -> &'static str {
        match self {
            RenderConfig::PretzelChain => "pretzel-chain",
            RenderConfig::Strip74 => "74-strip",
        }
    }
}

fn census(path: &Option<PathBuf>) -> Result<Vec<KnotRecord>> {
    Ok(match path {
        Some(p) => load_census(p)?,
        None => load_bundled_census()?,
    })
}

fn find(records: Vec<KnotRecord>, name: &str) -> Result<KnotRecord> {
    records.into_iter().find(|r| r.name() == name).ok_or_else(|| anyhow!("no knot named {name} in the census"))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_json<T: serde::Serialize>(x: &T) -> Result<()> {
    out!("{}", serde_json::to_string_pretty(x)?);
    Ok(())
}

fn report(
    census_path: &Option<PathBuf>,
    checks: &str,
    precision_bits: u64,
    json: &Option<PathBuf>,
    render_dir: Option<PathBuf>,
) -> Result<bool> {
    let records = census(census_path)?;
    let checks = parse_checks(checks)?;
    let rep = run(&records, &checks, &RunFlags { precision_bits, render_dir });
    for k in &rep.knots {
        let mut line = format!("{:<10} {:<8}", k.knot, k.status);
        if let Some(o) = &k.obstruction {
            let tuple: Vec<String> = o.euler.iter().map(i64::to_string).collect();
            line += &format!(" e=({}) {}", tuple.join(","), serde_json::to_string(&o.verdict)?.trim_matches('"'));
        }
        if let Some(s) = &k.slopes {
            let set: Vec<String> = s.slopes.iter().map(|x| x.to_string()).collect();
            line += &format!(" slopes={{{}}}", set.join(","));
        }
        if !k.anchors_ok() {
            line += " ANCHOR MISMATCH";
        }
        out!("{line}");
    }
    for f in &rep.failures {
        eprintln!("failure: {f}");
    }
    eprintln!("{} knots in {:.2?}", rep.knots.len(), rep.elapsed);
    if let Some(path) = json {
        write(path, &rep.to_json())?;
    }
    Ok(rep.success())
}

fn pretzel(k: u32, check: PretzelCheck, precision_bits: u64, json: bool) -> Result<bool> {
    let want = |c: PretzelCheck| check == PretzelCheck::All || check == c;
    let mut results: Vec<(String, bool)> = Vec::new();
    let mut details = serde_json::Map::new();
    if want(PretzelCheck::Recursion) {
        let lam = lambda_poly(k);
        results.push(("lambda recursion matches closed form".into(), lam == lambda_closed_form(k)));
        results.push((format!("deg lambda = {}", 2 * k + 1), lam.degree() == Some(2 * k as usize + 1)));
        details.insert("lambda".into(), serde_json::to_value(&lam)?);
    }
    if want(PretzelCheck::Relators) {
        let r = relator_factorization_check(k)?;
        results.extend(r.checks.iter().cloned());
        details.insert("relators".into(), serde_json::to_value(&r)?);
    }
    if want(PretzelCheck::Census) {
        let c = psi_root_census(k, precision_bits)?;
        results.push(("psi root census".into(), c.matches_expected()));
        details.insert("census".into(), serde_json::to_value(&c)?);
    }
    if want(PretzelCheck::Tangency) {
        match tangency_chain(k) {
            Ok(t) => {
                results.extend(t.checks.iter().cloned());
                details.insert("tangency".into(), serde_json::to_value(&t)?);
            }
            Err(e) => results.push((format!("tangency chain: {e}"), false)),
        }
    }
    let ok = results.iter().all(|r| r.1);
    if json {
        details.insert("k".into(), k.into());
        details.insert("checks".into(), serde_json::to_value(&results)?);
        print_json(&details)?;
    } else {
        for (name, pass) in &results {
            out!("{} {name}", if *pass { "pass" } else { "FAIL" });
        }
    }
    Ok(ok)
}

fn euler(name: &str, place: &str, precision_bits: u64, census_path: &Option<PathBuf>, json: bool) -> Result<bool> {
    let rec = find(census(census_path)?, name)?;
    let rep = rec.rep.as_ref().ok_or_else(|| anyhow!("{name} has no bundled representation"))?;
    let results: Vec<EulerResult> = if place == "all" {
        euler_tuple(rep, precision_bits)?
    } else {
        let i: usize = place.parse().with_context(|| format!("bad place {place}"))?;
        vec![euler_number(rep, i, precision_bits)?]
    };
    if json {
        print_json(&results)?;
    } else {
        for r in &results {
            out!("place {}: e = {} (residual {:.1e}, {} bits)", r.place_index, r.n, r.residual, r.precision_bits);
        }
    }
    Ok(true)
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Report { census, checks, precision_bits, json, render_dir } => {
            report(&census, &checks, precision_bits, &json, render_dir)
        }
        Command::Pretzel { k, check, precision_bits, json } => pretzel(k, check, precision_bits, json),
        Command::Slopes { knot, census: path } => {
            let rec = find(census(&path)?, &knot)?;
            let rep = rec.rep.as_ref().ok_or_else(|| anyhow!("{knot} has no bundled representation"))?;
            let cases = rec.row.slope_cases.as_ref().ok_or_else(|| anyhow!("{knot} has no slope case analysis"))?;
            let res = slope_set_for_knot(rep, cases, &rec.row.manual_field_flags)?;
            print_json(&res)?;
            Ok(res.exhaustive)
        }
        Command::Euler { knot, place, precision_bits, census, json } => {
            euler(&knot, &place, precision_bits, &census, json)
        }
        Command::Uniqueness { knot, census: path } => {
            let rec = find(census(&path)?, &knot)?;
            let res = match rec.row.source {
                KnotSource::Pretzel { k } => uniqueness_check_pretzel(k)?,
                KnotSource::TwoBridge { p: 15, q: 11 } => uniqueness_check_7_4()?,
                _ => bail!("no uniqueness argument is implemented for {knot}"),
            };
            print_json(&res)?;
            Ok(res.unique)
        }
        Command::Render { knot, config, out, census: path } => {
            let rec = find(census(&path)?, &knot)?;
            let svg = render_knot(&rec, config.name()).map_err(|e| anyhow!(e))?;
            write(&out, &svg)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
