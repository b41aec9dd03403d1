//! Command-line front end. [`run`] parses arguments, executes one verb and
//! returns the process exit status: 0 when everything checked out, 1 on a
//! verification failure, 2 on bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::boolalg::BoolAlg;
use crate::duality::{all_homomorphisms, check_naturality, theorem3_check, Decomposition, Report};
use crate::pairs::{build_bn, build_m, FilterMap, TupleAlgebra};
use crate::stone::{psi, psi_inverse, space_of, ValuedMap};
use crate::suite::{self, SuiteConfig};
use crate::wajsberg::{identity_text, NValued, WajsbergAlgebra};

/// Exhaustive axiom checking is used up to this many triples.
const EXHAUSTIVE_TRIPLES: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "mvdual",
    version,
    about = "Finite (n+1)-valued Wajsberg algebras and their Boolean presentations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the algebra of monotone n-tuples over the powerset of `atoms` atoms.
    BuildBn {
        #[arg(long)]
        atoms: u32,
        #[arg(long)]
        n: u32,
    },
    /// Print M(B,h) for a pair file.
    BuildM {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Check the four Wajsberg identities on an algebra file.
    Axioms {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// List the prime filters and their chain quotients.
    Primes {
        #[arg(long)]
        algebra: PathBuf,
        /// Also check that every quotient embeds in L_{n+1}.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Compute ⟨B(A), h_A⟩ and φ for an (n+1)-valued algebra.
    Decompose {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Rebuild M(B(A), h_A) and verify that φ is an isomorphism onto it.
    Reconstruct {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Verify both round trips for a pair file or an algebra file.
    Roundtrip {
        #[arg(long, conflicts_with = "algebra", required_unless_present = "algebra")]
        pair: Option<PathBuf>,
        #[arg(long, requires = "n")]
        algebra: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Print the valued Boolean space of a pair and ψ of every element of M(B,h).
    Stone {
        #[arg(long)]
        pair: PathBuf,
        /// Translate this valued map back to a tuple instead.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Run the full verification suite.
    Suite {
        #[arg(long, default_value_t = 40)]
        max_size: usize,
        /// Run only this criterion (1-9).
        #[arg(long)]
        criterion: Option<u8>,
    },
}

enum Failure {
    Input(String),
    Verify(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(String, Option<String>), Failure>;

/// Output text and, if verification failed, a one-line diagnostic.
fn ok(out: String) -> Outcome {
    Ok((out, None))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_algebra(path: &Path) -> Result<WajsbergAlgebra, Failure> {
    read(path)?
        .parse()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_pair(path: &Path) -> Result<FilterMap, Failure> {
    read(path)?
        .parse()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn algebra_json(a: &WajsbergAlgebra) -> Value {
    let imp: Vec<Vec<usize>> = a
        .elements()
        .map(|x| a.elements().map(|y| a.imp(x, y)).collect())
        .collect();
    let neg: Vec<usize> = a.elements().map(|x| a.neg(x)).collect();
    json!({ "size": a.size(), "top": a.top(), "neg": neg, "imp": imp })
}

fn tuple_algebra(m: &TupleAlgebra, heading: String, format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = format!("# {heading}\n");
            for (i, f) in m.elements().iter().enumerate() {
                let _ = writeln!(s, "# element {i} = {f}");
            }
            s.push_str(&m.algebra().to_text());
            s
        }
        Format::Json => {
            let elements: Vec<String> = m.elements().iter().map(ToString::to_string).collect();
            pretty(&json!({
                "n": m.n(),
                "atoms": m.base().atom_count(),
                "elements": elements,
                "algebra": algebra_json(m.algebra()),
            }))
        }
    }
}

fn report_output(report: &Report, format: Format) -> Outcome {
    let out = match format {
        Format::Text => report.to_string(),
        Format::Json => pretty(&serde_json::to_value(report).expect("serializable")),
    };
    let failed = report.failures().count();
    let diag = (failed > 0).then(|| format!("{failed} of {} checks failed", report.lines.len()));
    Ok((out, diag))
}

fn build_bn_cmd(atoms: u32, n: u32, format: Format) -> Outcome {
    if n == 0 {
        return Err(Failure::Input("n must be positive".into()));
    }
    let base = BoolAlg::new(atoms)?;
    if atoms > 6 || (n as u64 + 1).pow(atoms) > 4096 {
        return Err(Failure::Input(format!(
            "B^[{n}] over {atoms} atoms is too large to print"
        )));
    }
    let m = build_bn(base, n);
    ok(tuple_algebra(
        &m,
        format!("B^[{n}] over {atoms} atoms: {} elements", m.len()),
        format,
    ))
}

fn build_m_cmd(path: &Path, format: Format) -> Outcome {
    let pair = read_pair(path)?;
    pair.validate()?;
    let m = build_m(&pair)?;
    ok(tuple_algebra(
        &m,
        format!(
            "M(B,h) for n={} over {} atoms: {} elements",
            pair.n(),
            pair.base().atom_count(),
            m.len()
        ),
        format,
    ))
}

fn axioms_cmd(path: &Path, seed: u64, format: Format) -> Outcome {
    let a = read_algebra(path)?;
    let s = a.size() as u64;
    let exhaustive = s.saturating_mul(s).saturating_mul(s) <= EXHAUSTIVE_TRIPLES;
    let report = if exhaustive {
        a.check_axioms()
    } else {
        a.check_axioms_sampled(EXHAUSTIVE_TRIPLES, &mut ChaCha8Rng::seed_from_u64(seed))
    };
    let mode = if exhaustive { "exhaustive" } else { "sampled" };
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            for id in 1..=4u8 {
                let count = report.by_identity[id as usize - 1];
                if count == 0 {
                    let _ = writeln!(s, "OK identity-{id} {}", identity_text(id));
                    continue;
                }
                let _ = write!(s, "FAIL identity-{id} {}", identity_text(id));
                if let Some(v) = report.violations.iter().find(|v| v.identity == id) {
                    let vars = ["x", "y", "z"];
                    let at: Vec<String> = vars
                        .iter()
                        .zip(&v.witness)
                        .map(|(k, e)| format!("{k}={e}"))
                        .collect();
                    let _ = write!(s, " at {}", at.join(" "));
                }
                let _ = writeln!(s, " ({count} failures)");
            }
            let _ = writeln!(
                s,
                "# {} evaluations ({mode}), {} failures",
                report.checked, report.failures
            );
            s
        }
        Format::Json => {
            let violations: Vec<Value> = report
                .violations
                .iter()
                .map(|v| json!({ "identity": v.identity, "witness": v.witness }))
                .collect();
            let by_identity: Vec<Value> = (1..=4u8)
                .map(
                    |id| json!({ "identity": id, "failures": report.by_identity[id as usize - 1] }),
                )
                .collect();
            pretty(&json!({
                "ok": report.is_ok(),
                "mode": mode,
                "checked": report.checked,
                "failures": report.failures,
                "by_identity": by_identity,
                "violations": violations,
            }))
        }
    };
    let diag = (!report.is_ok()).then(|| {
        let failing: Vec<String> = (1..=4u8)
            .filter(|&id| report.by_identity[id as usize - 1] > 0)
            .map(|id| id.to_string())
            .collect();
        format!(
            "identities {} fail ({} failing tuples)",
            failing.join(", "),
            report.failures
        )
    });
    Ok((out, diag))
}

fn primes_cmd(path: &Path, n: Option<u32>, format: Format) -> Outcome {
    let a = read_algebra(path)?;
    let primes = a.prime_quotients()?;
    let rows: Vec<(usize, usize, u32)> = primes
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.filter().generator(), p.height()))
        .collect();
    let diag = n.and_then(|n| NValued::new(&a, n).err().map(|e| e.to_string()));
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            for (i, g, c) in &rows {
                let _ = writeln!(s, "prime {i} generator={g} quotient=L{}", c + 1);
            }
            if let Some(n) = n {
                let verdict = if diag.is_none() { "OK" } else { "FAIL" };
                let _ = writeln!(s, "{verdict} {}-valued", n + 1);
            }
            s
        }
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(i, g, c)| json!({ "index": i, "generator": g, "height": c }))
                .collect();
            let mut v = json!({ "primes": list });
            if let Some(n) = n {
                v["n_valued"] = json!({ "n": n, "ok": diag.is_none() });
            }
            pretty(&v)
        }
    };
    Ok((out, diag))
}

fn decompose_cmd(path: &Path, n: u32, format: Format) -> Outcome {
    let a = read_algebra(path)?;
    let dec = Decomposition::new(&a, n)?;
    let phis = a
        .elements()
        .map(|x| dec.phi(x))
        .collect::<Result<Vec<_>, _>>()?;
    let skeleton = dec.view().skeleton();
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            for (i, &atom) in skeleton.atoms().iter().enumerate() {
                let _ = writeln!(s, "# atom {i} = element {atom}");
            }
            for (x, f) in phis.iter().enumerate() {
                let _ = writeln!(s, "# phi {x} = {f}");
            }
            s.push_str(&dec.pair().to_text());
            s
        }
        Format::Json => {
            let h: Vec<Value> = dec
                .pair()
                .divisors()
                .iter()
                .map(|d| json!({ "d": d, "generator": dec.pair().generator(d).expect("divisor").to_string() }))
                .collect();
            let phi: Vec<String> = phis.iter().map(ToString::to_string).collect();
            pretty(&json!({
                "n": n,
                "atoms": skeleton.atoms(),
                "h": h,
                "phi": phi,
            }))
        }
    };
    ok(out)
}

fn reconstruct_cmd(path: &Path, n: u32, format: Format) -> Outcome {
    let a = read_algebra(path)?;
    let dec = Decomposition::new(&a, n)?;
    let m = dec.reconstruction()?;
    let phi = dec.phi_indices()?;
    let verdict = dec.verify_phi();
    let out = match format {
        Format::Text => {
            let mut s = String::new();
            for (x, y) in phi.iter().enumerate() {
                let _ = writeln!(s, "# phi {x} -> {y}");
            }
            s.push_str(&tuple_algebra(
                m,
                format!("M(B(A),h_A) for n={n}: {} elements", m.len()),
                format,
            ));
            match &verdict {
                Ok(()) => s.push_str("# OK phi-iso\n"),
                Err(e) => {
                    let _ = writeln!(s, "# FAIL phi-iso {e}");
                }
            }
            s
        }
        Format::Json => {
            let elements: Vec<String> = m.elements().iter().map(ToString::to_string).collect();
            pretty(&json!({
                "n": n,
                "phi": phi,
                "elements": elements,
                "algebra": algebra_json(m.algebra()),
                "ok": verdict.is_ok(),
            }))
        }
    };
    Ok((out, verdict.err().map(|e| e.to_string())))
}

fn roundtrip_cmd(
    pair: Option<&Path>,
    algebra: Option<&Path>,
    n: Option<u32>,
    format: Format,
) -> Outcome {
    let mut report = Report::default();
    if let Some(path) = pair {
        let pair = read_pair(path)?;
        pair.validate()?;
        let id = crate::suite::pair_id(&pair);
        match theorem3_check(&pair) {
            Ok(w) => {
                report.push::<String>("theorem3", &id, Ok(()));
                let dec = Decomposition::new(w.algebra.algebra(), pair.n());
                report.push(
                    "phi-iso",
                    &format!("M({id})"),
                    dec.and_then(|d| d.verify_phi()),
                );
            }
            Err(e) => report.push("theorem3", &id, Err(e)),
        }
    } else {
        let path = algebra.expect("clap enforces one input");
        let n = n.expect("clap requires n with algebra");
        let a = read_algebra(path)?;
        let dec = Decomposition::new(&a, n)?;
        let id = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        report.push("phi-iso", &id, dec.verify_phi());
        let homs = all_homomorphisms(dec.view(), dec.view())?;
        let result = homs
            .iter()
            .try_for_each(|g| check_naturality(g, &dec, &dec));
        report.push("naturality", &format!("{id}->{id}"), result);
    }
    report_output(&report, format)
}

fn stone_cmd(pair_path: &Path, map: Option<&Path>, format: Format) -> Outcome {
    let pair = read_pair(pair_path)?;
    let space = space_of(&pair)?;
    if let Some(map_path) = map {
        let f: ValuedMap = read(map_path)?
            .parse()
            .map_err(|e| Failure::Input(format!("{}: {e}", map_path.display())))?;
        let g = psi_inverse(&f, &space).map_err(|e| Failure::Verify(e.to_string()))?;
        let out = match format {
            Format::Text => format!("{g}\n"),
            Format::Json => pretty(&json!({ "tuple": g.to_string() })),
        };
        return ok(out);
    }
    let m = build_m(&pair)?;
    let images = m
        .elements()
        .iter()
        .map(|g| psi(g, &pair))
        .collect::<Result<Vec<_>, _>>()?;
    let out = match format {
        Format::Text => {
            let mut s = format!("space points={} n={}\n", space.points(), space.n());
            for d in space.divisors().iter() {
                let pts: Vec<String> = space.h_top(d)?.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "h_top {d} = {{{}}}", pts.join(","));
            }
            for (g, f) in m.elements().iter().zip(&images) {
                let _ = writeln!(s, "# element {g}");
                s.push_str(&f.to_text());
            }
            s
        }
        Format::Json => {
            let h_top: Vec<Value> = space
                .divisors()
                .iter()
                .map(|d| json!({ "d": d, "points": space.h_top(d).expect("divisor") }))
                .collect();
            let maps: Vec<Value> = m
                .elements()
                .iter()
                .zip(&images)
                .map(|(g, f)| {
                    let vals: Vec<String> = f.values().iter().map(ToString::to_string).collect();
                    json!({ "element": g.to_string(), "values": vals })
                })
                .collect();
            pretty(
                &json!({ "points": space.points(), "n": space.n(), "h_top": h_top, "maps": maps }),
            )
        }
    };
    let count = space.valued_maps().len();
    let diag =
        (count != m.len()).then(|| format!("{count} valued maps but |M(B,h)| = {}", m.len()));
    Ok((out, diag))
}

fn suite_cmd(max_size: usize, criterion: Option<u8>, seed: u64, format: Format) -> Outcome {
    let cfg = SuiteConfig {
        seed,
        max_size,
        ..SuiteConfig::default()
    };
    let results = match criterion {
        Some(k @ 1..=9) => vec![suite::CRITERIA[k as usize - 1](&cfg)],
        Some(k) => return Err(Failure::Input(format!("no criterion {k}; expected 1-9"))),
        None => suite::run_all(&cfg),
    };
    let out = match format {
        Format::Text => results.iter().map(|r| format!("{r}\n")).collect(),
        Format::Json => pretty(&serde_json::to_value(&results).expect("serializable")),
    };
    let failed = results.iter().filter(|r| !r.passed).count();
    let diag = (failed > 0).then(|| format!("{failed} of {} criteria failed", results.len()));
    Ok((out, diag))
}

fn dispatch(cli: Cli) -> Outcome {
    let f = cli.format;
    match cli.command {
        Command::BuildBn { atoms, n } => build_bn_cmd(atoms, n, f),
        Command::BuildM { pair } => build_m_cmd(&pair, f),
        Command::Axioms { algebra } => axioms_cmd(&algebra, cli.seed, f),
        Command::Primes { algebra, n } => primes_cmd(&algebra, n, f),
        Command::Decompose { algebra, n } => decompose_cmd(&algebra, n, f),
        Command::Reconstruct { algebra, n } => reconstruct_cmd(&algebra, n, f),
        Command::Roundtrip { pair, algebra, n } => {
            roundtrip_cmd(pair.as_deref(), algebra.as_deref(), n, f)
        }
        Command::Stone { pair, map } => stone_cmd(&pair, map.as_deref(), f),
        Command::Suite {
            max_size,
            criterion,
        } => suite_cmd(max_size, criterion, cli.seed, f),
    }
}

/// Runs one command line (including the program name) and writes its report
/// to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return 2;
        }
    };
    match dispatch(cli) {
        Ok((text, None)) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Ok((text, Some(diag))) => {
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "verification failed: {diag}");
            1
        }
        Err(Failure::Verify(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
