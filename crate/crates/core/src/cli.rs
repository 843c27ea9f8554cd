//! Command-line front end. `dispatch` parses arguments, runs one
//! subcommand and returns the process exit status; data goes to `out`,
//! diagnostics and progress to `err`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{is_prime, set_default_seed, Fp2};
use crate::cheb_bounds::{cheb_gap_bound, class_number_for, count_n, field_invariants, FieldCase};
use crate::error::{Error, Result};
use crate::hilbert::HilbertCache;
use crate::isogeny_graph::{export_graph, neighborhood, verify_theorem1, NeighborhoodReport, Verdict};
use crate::qj_solver::{compute_mp, published_row, qj_for_j, Mode, MpResult, QjRecord, CSV_HEADER};
use crate::ss_curves::{supersingular_j_list, Curve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Dot,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct CliConfig {
    /// Directory for cached class polynomials [default: <platform cache>/ssendo]
    #[arg(long, global = true, env = "SSENDO_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for parallel sweeps [default: logical CPU count]
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output format [default: csv; json for neighborhood reports, dot for graphs]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Intersect one more class polynomial when a q leaves several candidates
    #[arg(long, global = true)]
    pub strict: bool,
    /// Seed for randomized polynomial splitting
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

impl CliConfig {
    pub fn resolved_cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| dirs::cache_dir().map(|d| d.join("ssendo")))
    }

    fn mode(&self) -> Mode {
        if self.strict {
            Mode::Strict
        } else {
            Mode::Mirror
        }
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[derive(Debug, Parser)]
#[command(name = "ssendo", version, about = "Endomorphism rings of supersingular curves over F_p")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Supersingular j-invariants in F_p
    SsList {
        #[arg(long)]
        p: u64,
    },
    /// q_j and the order type for every (or one) supersingular j in F_p
    Qj {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j: Option<u64>,
    },
    /// M(p) rows as in the published tables
    Mp {
        #[arg(long, conflicts_with = "p_range", required_unless_present = "p_range")]
        p: Option<u64>,
        /// Inclusive range of p
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        p_range: Option<Vec<u64>>,
        /// Compare each row with the published table and exit 2 on a mismatch
        #[arg(long)]
        check: bool,
        /// Largest q to try [default: ceil(p log^2 p)]
        #[arg(long)]
        q_ceiling: Option<u64>,
    },
    /// Roots of Phi_l(j, Y) around one vertex
    Neighborhood {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        /// Vertex as an F_p value or `c0+c1*t` in F_{p^2}
        #[arg(long, conflicts_with_all = ["a", "b"], required_unless_present_all = ["a", "b"])]
        j: Option<String>,
        #[arg(long, requires = "b", allow_hyphen_values = true)]
        a: Option<i64>,
        #[arg(long, requires = "a", allow_hyphen_values = true)]
        b: Option<i64>,
    },
    /// Check predicted loops and neighbors at every supersingular j in F_p
    VerifyTheorem1 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
    },
    /// Hilbert class polynomial H_D, optionally reduced mod M
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// The supersingular l-isogeny graph over F_{p^2}
    Graph {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
    },
    /// Explicit Chebotarev error term and lower bound at x
    Cheb {
        #[arg(long)]
        p: u64,
        /// Kzeta8, L0zeta8 or L1zeta8
        #[arg(long)]
        case: FieldCase,
        #[arg(long)]
        x: f64,
        /// Class number to use [default: h(-p) or h(-4p)]
        #[arg(long)]
        h: Option<u64>,
    },
    /// Number of primes q <= x with q = 3 mod 8 and (p/q) = -1
    Nx {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        x: f64,
    },
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Argument(_) => 1,
        Error::Verification(_) => 2,
        _ => 3,
    }
}

/// Runs one command line. `argv[0]` is the program name.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match run(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::Incomplete { partial: Some(p), .. } = &e {
                let _ = writeln!(err, "partial result: {p}");
            }
            exit_code(&e)
        }
    }
}

fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = &cli.config;
    set_default_seed(cfg.seed);
    if let Some(w) = cfg.workers {
        if w == 0 {
            return Err(Error::Argument("--workers must be positive".into()));
        }
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let cache = match cfg.resolved_cache_dir() {
        Some(d) => HilbertCache::with_dir(d),
        None => HilbertCache::in_memory(),
    };
    match &cli.command {
        Command::SsList { p } => ss_list(*p, cfg, out),
        Command::Qj { p, j } => qj(*p, *j, cfg, &cache, out),
        Command::Mp { p, p_range, check, q_ceiling } => {
            let ps: Vec<u64> = match (p, p_range) {
                (Some(p), _) => vec![*p],
                (None, Some(r)) => (r[0]..=r[1]).filter(|&p| p > 3 && is_prime(p)).collect(),
                (None, None) => unreachable!("clap requires --p or --p-range"),
            };
            mp(&ps, *check, *q_ceiling, cfg, &cache, out, err)
        }
        Command::Neighborhood { p, ell, j, a, b } => {
            let j = match (j, a, b) {
                (Some(j), _, _) => Fp2::new(*p)?.parse(j)?,
                (None, Some(a), Some(b)) => {
                    let e = Curve::new(*p, *a, *b)?;
                    Fp2::new(*p)?.embed(e.j_invariant())
                }
                _ => return Err(Error::Argument("give --j or both --a and --b".into())),
            };
            let r = neighborhood(&j, *ell, *p)?;
            write_neighborhood(&r, cfg.format_or(Format::Json), out)
        }
        Command::VerifyTheorem1 { p, ell } => verify(*p, *ell, cfg, &cache, out),
        Command::Hilbert { d, modulus } => hilbert(*d, *modulus, cfg, &cache, out),
        Command::Graph { p, ell } => {
            let g = export_graph(*p, *ell)?;
            match cfg.format_or(Format::Dot) {
                Format::Dot => out.write_all(g.to_dot().as_bytes())?,
                Format::Json => writeln!(out, "{}", g.to_json())?,
                Format::Csv => {
                    writeln!(out, "source,target,multiplicity")?;
                    for (s, t, m) in &g.edges {
                        writeln!(out, "{s},{t},{m}")?;
                    }
                }
            }
            Ok(())
        }
        Command::Cheb { p, case, x, h } => {
            let h = match h {
                Some(h) => *h,
                None => class_number_for(*p)?,
            };
            let inv = field_invariants(*p, *case, h)?;
            let r = cheb_gap_bound(*x, &inv)?;
            match cfg.format_or(Format::Csv) {
                Format::Json => write_json(out, &json!({ "invariants": inv, "bound": r })),
                _ => {
                    writeln!(out, "p,case,h,n,logd_2,logd_p,x,main_term,error_term,lower_bound,positive")?;
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{}",
                        p, case, h, inv.n, inv.logd.0, inv.logd.1, r.x, r.main_term, r.error_term,
                        r.lower_bound, r.positive
                    )?;
                    Ok(())
                }
            }
        }
        Command::Nx { p, x } => {
            let n = count_n(*p, *x)?;
            match cfg.format_or(Format::Csv) {
                Format::Json => write_json(out, &json!({ "p": p, "x": x, "N": n })),
                _ => {
                    writeln!(out, "p,x,N\n{p},{x},{n}")?;
                    Ok(())
                }
            }
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    // Going through Value sorts object keys.
    let v: Value = serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))?;
    writeln!(out, "{v}")?;
    Ok(())
}

fn ss_list(p: u64, cfg: &CliConfig, out: &mut dyn Write) -> Result<()> {
    let js = supersingular_j_list(p)?;
    match cfg.format_or(Format::Csv) {
        Format::Json => write_json(out, &json!({ "p": p, "count": js.len(), "j": js })),
        _ => {
            writeln!(out, "j")?;
            for j in js {
                writeln!(out, "{j}")?;
            }
            Ok(())
        }
    }
}

fn write_records(records: &[QjRecord], out: &mut dyn Write) -> Result<()> {
    writeln!(out, "j,q,kind")?;
    for r in records {
        writeln!(out, "{},{},{}", r.j, r.q, r.kind)?;
    }
    Ok(())
}

fn qj(p: u64, j: Option<u64>, cfg: &CliConfig, cache: &HilbertCache, out: &mut dyn Write) -> Result<()> {
    let fmt = cfg.format_or(Format::Csv);
    match j {
        Some(j) => {
            let r = qj_for_j(p, j, cfg.mode(), cache)?;
            match fmt {
                Format::Json => write_json(out, &r),
                _ => write_records(&[r], out),
            }
        }
        None => {
            let r = compute_mp(p, None, cfg.mode(), cache)?;
            match fmt {
                Format::Json => write_json(out, &r),
                _ => write_records(&r.records, out),
            }
        }
    }
}

fn mp(
    ps: &[u64],
    check: bool,
    q_ceiling: Option<u64>,
    cfg: &CliConfig,
    cache: &HilbertCache,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let fmt = cfg.format_or(Format::Csv);
    let mut results: Vec<MpResult> = Vec::new();
    let mut mismatches = Vec::new();
    if fmt != Format::Json {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for &p in ps {
        if ps.len() > 1 {
            let _ = writeln!(err, "p = {p}");
        }
        let r = compute_mp(p, q_ceiling, cfg.mode(), cache)?;
        let row = r.csv_row();
        if check {
            match published_row(p) {
                Some(want) if want != row => mismatches.push(format!("{row} (published {want})")),
                Some(_) => {}
                None => {
                    let _ = writeln!(err, "p = {p} has no published row");
                }
            }
        }
        if fmt == Format::Json {
            results.push(r);
        } else {
            writeln!(out, "{row}")?;
        }
    }
    if fmt == Format::Json {
        write_json(out, &results)?;
    }
    if !mismatches.is_empty() {
        return Err(Error::Verification(format!("table mismatch: {}", mismatches.join("; "))));
    }
    Ok(())
}

fn neighborhood_json(r: &NeighborhoodReport) -> Value {
    json!({
        "p": r.p,
        "ell": r.ell,
        "j": r.j.to_string(),
        "loops": r.loops,
        "neighbors": r.neighbors.iter().map(|(v, m)| json!([v.to_string(), m])).collect::<Vec<_>>(),
        "distinct_neighbors": r.neighbors.len(),
        "fp_neighbors": r.fp_rational,
        "legendre_minus_p_ell": r.legendre_minus_p_ell,
    })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn write_neighborhood(r: &NeighborhoodReport, fmt: Format, out: &mut dyn Write) -> Result<()> {
    match fmt {
        Format::Csv => {
            let ns: Vec<String> = r.neighbors.iter().map(|(v, m)| format!("{v}^{m}")).collect();
            writeln!(out, "p,ell,j,loops,distinct_neighbors,neighbors,fp_neighbors")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.p,
                r.ell,
                r.j,
                r.loops,
                r.neighbors.len(),
                ns.join(";"),
                join(&r.fp_rational)
            )?;
            Ok(())
        }
        _ => write_json(out, &neighborhood_json(r)),
    }
}

fn verify(p: u64, ell: u64, cfg: &CliConfig, cache: &HilbertCache, out: &mut dyn Write) -> Result<()> {
    let res = compute_mp(p, None, cfg.mode(), cache)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for rec in &res.records {
        if rec.j == 0 || rec.j == 1728 % p || 2 * p * rec.q % ell == 0 {
            continue;
        }
        let c = verify_theorem1(p, ell, rec.j, rec.q, rec.kind, cache)?;
        if c.verdict == Verdict::Fail {
            failures.push(rec.j);
        }
        rows.push(c);
    }
    match cfg.format_or(Format::Csv) {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|c| {
                    json!({
                        "j": c.report.j.to_string(),
                        "q": c.q,
                        "kind": c.kind,
                        "hypothesis": c.hypothesis,
                        "delta": c.delta,
                        "loops": c.report.loops,
                        "expected_loops": c.expected_loops,
                        "distinct_neighbors": c.distinct_neighbors(),
                        "expected_neighbors": c.expected_neighbors,
                        "fp_neighbors": c.report.fp_rational,
                        "expected_fp": c.expected_fp,
                        "verdict": c.verdict.to_string(),
                    })
                })
                .collect();
            write_json(out, &json!({ "p": p, "ell": ell, "checks": v }))?;
        }
        _ => {
            writeln!(
                out,
                "j,q,kind,delta,loops,expected_loops,distinct_neighbors,expected_neighbors,fp_neighbors,expected_fp,verdict"
            )?;
            for c in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    c.report.j,
                    c.q,
                    c.kind,
                    c.delta,
                    c.report.loops,
                    c.expected_loops,
                    c.distinct_neighbors(),
                    c.expected_neighbors,
                    join(&c.report.fp_rational),
                    c.expected_fp,
                    c.verdict
                )?;
            }
        }
    }
    if !failures.is_empty() {
        return Err(Error::Verification(format!("prediction fails at j = {}", join(&failures))));
    }
    Ok(())
}

fn hilbert(d: i64, modulus: Option<u64>, cfg: &CliConfig, cache: &HilbertCache, out: &mut dyn Write) -> Result<()> {
    let coeffs: Vec<String> = match modulus {
        Some(m) => {
            let h = cache.get_mod(d, m)?;
            let deg = cache.get(d)?.degree();
            let mut c: Vec<String> = h.coeffs().iter().map(|c| c.to_string()).collect();
            c.resize(deg + 1, "0".into());
            c
        }
        None => cache.get(d)?.coefficients.iter().map(|c| c.to_string()).collect(),
    };
    match cfg.format_or(Format::Csv) {
        Format::Json => write_json(
            out,
            &json!({ "D": d, "h": coeffs.len() - 1, "mod": modulus, "coefficients": coeffs }),
        ),
        _ => {
            writeln!(out, "degree,coefficient")?;
            for (i, c) in coeffs.iter().enumerate() {
                writeln!(out, "{i},{c}")?;
            }
            Ok(())
        }
    }
}
