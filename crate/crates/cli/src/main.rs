use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use latticeforge::cubical::{check_link, cyclic_complex, double};
use latticeforge::ff_lattice::{present_gamma_ff, present_lambda_ff};
use latticeforge::hurwitz::present_gamma_hurwitz;
use latticeforge::quotient::{build_cayley, parse_poly, split_ff, split_hurwitz, CayleyComplex};
use latticeforge::spectral::ramanujan_report;
use latticeforge::{Error, FieldCtx, Presentation};

#[derive(Parser, Debug)]
#[command(name = "latticeforge", version, about = "Lattices on products of trees, their quotients and spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a presentation as JSON.
    #[command(subcommand)]
    Present(Source),
    /// Check involutions, canonical forms and the link condition.
    Validate(InArgs),
    /// Report corners of the link covered other than exactly once.
    Link(InArgs),
    /// Double a presentation.
    Double {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One-vertex complex of cyclic sets of the given even sizes.
    Cyclic {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cayley complex of a congruence quotient, written in binary form.
    Quotient(QuotientArgs),
    /// Directional spectra and the Ramanujan certificate of a Cayley complex.
    Spectrum(SpectrumArgs),
}

#[derive(Subcommand, Debug)]
enum Source {
    /// Lattice over F_q(t) with places S0 in F_q^x.
    Ff {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        places: Vec<u32>,
        /// Generator of F_{q^2}: `u,v` or a polynomial in `Z` such as `2+Z`.
        #[arg(long)]
        delta: Option<String>,
        /// Include the dihedral part `<d, s>` and its relations.
        #[arg(long)]
        lambda: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lattice in the Hurwitz quaternions for a set of odd primes.
    Hurwitz {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Keep `A_p` for `p = 3 mod 4` instead of the torsion-free variant.
        #[arg(long)]
        unprimed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct QuotientArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Odd prime for a Hurwitz presentation.
    #[arg(long = "mod", conflicts_with = "mod_poly", required_unless_present = "mod_poly")]
    modulus: Option<u64>,
    /// Monic irreducible polynomial in `t` for an F_q(t) presentation.
    #[arg(long)]
    mod_poly: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Also write the labelled graph in DOT form.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write `direction,index,eigenvalue` rows.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Failure of a check, as opposed to bad input.
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn write_out(path: Option<&Path>, data: &[u8]) -> anyhow::Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, data).with_context(|| format!("writing {}", p.display())),
        _ => {
            std::io::stdout().write_all(data)?;
            Ok(())
        }
    }
}

fn read_presentation(path: &Path) -> anyhow::Result<Presentation> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Presentation::from_json(&s).with_context(|| format!("parsing {}", path.display()))
}

fn parse_delta(s: &str, p: u32) -> anyhow::Result<(u32, u32)> {
    if let Some((u, v)) = s.split_once(',') {
        return Ok((u.trim().parse()?, v.trim().parse()?));
    }
    let (mut u, mut v) = (0u32, 0u32);
    for term in s.split('+').map(str::trim) {
        if let Some(coef) = term.strip_suffix('Z').or_else(|| term.strip_suffix('z')) {
            let coef = coef.trim_end_matches('*').trim();
            v += if coef.is_empty() { 1 } else { coef.parse::<u32>()? };
        } else {
            u += term.parse::<u32>().with_context(|| format!("bad term {term:?} in delta"))?;
        }
    }
    Ok((u % p, v % p))
}

fn present(src: Source) -> anyhow::Result<()> {
    match src {
        Source::Ff { p, e, places, delta, lambda, out } => {
            let ctx = match delta {
                Some(d) => FieldCtx::with_delta(p, e, parse_delta(&d, p)?)?,
                None => FieldCtx::new(p, e)?,
            };
            let pres = if lambda { present_lambda_ff(&ctx, &places)? } else { present_gamma_ff(&ctx, &places)? };
            eprintln!("{} generators, {} squares", pres.num_generators(), pres.squares.len());
            write_out(out.as_deref(), pres.to_json().as_bytes())
        }
        Source::Hurwitz { primes, unprimed, out } => {
            let pres = present_gamma_hurwitz(&primes, !unprimed)?;
            eprintln!("{} generators, {} squares", pres.num_generators(), pres.squares.len());
            write_out(out.as_deref(), pres.to_json().as_bytes())
        }
    }
}

fn quotient(args: QuotientArgs) -> anyhow::Result<()> {
    let pres = read_presentation(&args.input)?;
    let split = match (&pres.field, args.modulus, &args.mod_poly) {
        (None, Some(l), None) => {
            let s0 = pres.directions.iter().map(|d| d.label.parse::<u64>()).collect::<Result<Vec<_>, _>>()?;
            split_hurwitz(l, &s0)?
        }
        (Some(info), None, Some(poly)) => {
            let ctx = FieldCtx::from_info(info)?;
            let s0 = pres.directions.iter().map(|d| d.label.parse::<u32>()).collect::<Result<Vec<_>, _>>()?;
            let pi = parse_poly(poly, ctx.base())?;
            split_ff(&ctx, &pi, &s0)?
        }
        (None, _, Some(_)) => bail!("--mod-poly needs a presentation over F_q(t)"),
        (Some(_), Some(_), _) => bail!("--mod needs a Hurwitz presentation; use --mod-poly"),
        _ => bail!("give exactly one of --mod and --mod-poly"),
    };
    let c = build_cayley(&pres, &split)?;
    eprintln!("{} vertices over a residue field of size {}", c.num_vertices(), c.field_size);
    fs::write(&args.out, c.to_binary()).with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(dot) = &args.dot {
        write_out(Some(dot), c.to_dot().as_bytes())?;
    }
    Ok(())
}

fn spectrum(args: SpectrumArgs) -> anyhow::Result<()> {
    let buf = fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let c = CayleyComplex::from_binary(&buf)?;
    let r = ramanujan_report(&c, args.tol)?;
    let mut out = String::new();
    for d in &r.directions {
        out.push_str(&format!(
            "direction {}: q = {}, max nontrivial |lambda| = {:.12}, bound {:.12}, trivial +{} -{}, {}\n",
            d.label,
            d.q,
            d.max_nontrivial,
            d.bound,
            d.trivial_plus,
            d.trivial_minus,
            if d.pass { "pass" } else { "FAIL" }
        ));
    }
    let commute = r.commutation.iter().flatten().all(|&x| x);
    out.push_str(&format!(
        "{} vertices, commutation {}, {}\n",
        r.vertices,
        if commute { "exact" } else { "FAILS" },
        if r.pass { "Ramanujan" } else { "not Ramanujan" }
    ));
    if let Some(p) = &args.csv {
        write_out(Some(p), r.to_csv().as_bytes())?;
    }
    if let Some(p) = &args.json {
        write_out(Some(p), r.to_json().as_bytes())?;
    }
    if args.csv.as_deref() != Some(Path::new("-")) && args.json.as_deref() != Some(Path::new("-")) {
        print!("{out}");
    }
    if !r.pass || !commute {
        return Err(CheckFailed("spectral certificate failed".into()).into());
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Present(src) => present(src),
        Command::Validate(a) => {
            let p = read_presentation(&a.input)?;
            let r = p.validate();
            if a.json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                for e in &r.errors {
                    println!("{e}");
                }
                for pc in &r.pair_counts {
                    println!("directions ({}, {}): {} squares", pc.v, pc.w, pc.squares);
                }
            }
            if !r.valid {
                return Err(CheckFailed(format!("{} problems found", r.errors.len())).into());
            }
            Ok(())
        }
        Command::Link(a) => {
            let p = read_presentation(&a.input)?;
            let r = check_link(&p)?;
            if a.json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                for d in &r.defects {
                    println!("corner ({}, {}) of directions ({}, {}) covered {} times", d.corner.0, d.corner.1, d.v, d.w, d.count);
                }
            }
            if !r.pass {
                return Err(CheckFailed(format!("link condition fails at {} corners", r.defects.len())).into());
            }
            Ok(())
        }
        Command::Double { input, out } => {
            let p = read_presentation(&input)?;
            let d = match double(&p) {
                Err(Error::LinkFailure(n)) => {
                    return Err(CheckFailed(format!("input violates the link condition at {n} corners")).into())
                }
                other => other?,
            };
            eprintln!("{} generators, {} squares", d.num_generators(), d.squares.len());
            write_out(out.as_deref(), d.to_json().as_bytes())
        }
        Command::Cyclic { sizes, out } => write_out(out.as_deref(), cyclic_complex(&sizes)?.to_json().as_bytes()),
        Command::Quotient(a) => quotient(a),
        Command::Spectrum(a) => spectrum(a),
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("LATTICEFORGE_THREADS") {
        let n: usize = v.parse().map_err(|_| anyhow!("LATTICEFORGE_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            bail!("LATTICEFORGE_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<CheckFailed>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
