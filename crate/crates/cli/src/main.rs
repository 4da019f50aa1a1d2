use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use qhs_core::cache::{ResultCache, RunRecord, CACHE_DIR_ENV, ENGINE_VERSION};
use qhs_core::census::{census_csv, census_limits, for_each_presentation, for_each_qhs, qhs_census};
use qhs_core::constructions::wisliceny_count;
use qhs_core::coset::{next_minimal_basis, MinimalBasis};
use qhs_core::{
    build_regular_qhs, delta, extend, hilbert_profile, lemma_m1_witness, parse_presentation,
    regularity_degree, render_presentation, singular_monomials, theorem1_certificate,
    validate_qhs, Certificate, EngineLimits, Error, HilbertProfile, IdealMode, Presentation,
    Regularity,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "qhs", version, about = "Quadratic semigroup algebras: classes, profiles, certificates")]
struct Cli {
    /// Largest class (and per-degree basis) the engine may hold.
    /// Defaults to 5000000, or 100000 for `census`.
    #[arg(long, global = true)]
    max_class_size: Option<usize>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Directory for the run cache.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the QHS conditions.
    Validate { file: PathBuf },
    /// Write the regular QHS with delta(n) relations.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the two-generator extension to a QHS.
    Extend { file: PathBuf },
    /// Graded dimensions up to a degree.
    Hilbert {
        file: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Nilpotency index, searched up to a degree cap.
    Nilpotency {
        file: PathBuf,
        #[arg(long)]
        cap: usize,
    },
    /// Minimal and singular words of one degree modulo the ideal without x_n x_1.
    Singular {
        file: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// First degree without singular words.
    Regularity {
        file: PathBuf,
        #[arg(long)]
        cap: usize,
    },
    /// Look for an infinite-dimensionality certificate.
    Certify { file: PathBuf },
    /// Search the class of x1^q for a word ending in x_n.
    #[command(name = "lemma-m1")]
    LemmaM1 {
        #[arg(long)]
        n: usize,
    },
    /// List every QHS (or every presentation) on n generators as JSON lines.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, requires = "d_max")]
        presentations: bool,
        #[arg(long)]
        d_max: Option<usize>,
    },
    /// delta(n) next to the earlier relation counts, as CSV.
    DeltaTable {
        #[arg(long)]
        max_n: u64,
    },
    /// Classify every QHS on n generators and write a CSV.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Exit 2: a cap was reached before a verdict.
const INCONCLUSIVE: u8 = 2;

enum Failure {
    Input(String),
    Inconclusive(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource_exhausted() {
            Failure::Inconclusive(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

struct Ctx {
    limits: EngineLimits,
    cache: Option<ResultCache>,
}

impl Ctx {
    /// Run `f` unless an identical run is already cached.
    fn cached<T, F>(&self, p: &Presentation, op: &str, params: Value, f: F) -> Result<T, Failure>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T, Error>,
    {
        let hash = p.content_hash();
        let params = json!({ "args": params, "max_class_size": self.limits.max_class_size });
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.lookup(&hash, op, &params) {
                if let Ok(v) = serde_json::from_value(hit.result) {
                    return Ok(v);
                }
            }
        }
        let t = Instant::now();
        let result = f()?;
        if let Some(cache) = &self.cache {
            cache.store(&RunRecord {
                hash,
                operation: op.into(),
                params,
                result: serde_json::to_value(&result).expect("result serializes"),
                wall_ms: t.elapsed().as_millis() as u64,
                engine_version: ENGINE_VERSION.into(),
            })?;
        }
        Ok(result)
    }
}

fn read(path: &Path) -> Result<Presentation, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_presentation(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn require_qhs(p: &Presentation) -> Result<(), Failure> {
    let report = validate_qhs(p);
    match report.violations.first() {
        Some(v) => Err(Failure::Input(format!("not a QHS: {}", v.detail))),
        None => Ok(()),
    }
}

fn quarter(num: u64) -> String {
    match num % 4 {
        0 => (num / 4).to_string(),
        2 => format!("{}.5", num / 4),
        r => format!("{}.{}", num / 4, r * 25),
    }
}

fn run(cli: Cli) -> Outcome {
    let defaults = EngineLimits::default();
    let limits = EngineLimits::new(
        cli.max_class_size.unwrap_or(defaults.max_class_size),
        defaults.max_degree,
    )?;
    let cache = cli.cache.as_deref().map(ResultCache::open).transpose()?;
    let ctx = Ctx { limits, cache };

    match cli.command {
        Command::Validate { file } => {
            let p = read(&file)?;
            let report = validate_qhs(&p);
            if report.valid {
                println!("valid QHS: n = {}, {} relations", p.n(), p.len());
                return Ok(0);
            }
            for v in &report.violations {
                println!("{:?}: {}", v.kind, v.detail);
            }
            Err(Failure::Input(format!("{} violations", report.violations.len())))
        }
        Command::Build { n, out } => {
            let p = build_regular_qhs(n)?;
            emit(out.as_deref(), &render_presentation(&p))?;
            Ok(0)
        }
        Command::Extend { file } => {
            let p = extend(&read(&file)?)?;
            print!("{}", render_presentation(&p));
            Ok(0)
        }
        Command::Hilbert {
            file,
            max_degree,
            json,
            csv,
        } => {
            let p = read(&file)?;
            let limits = ctx.limits;
            let prof: HilbertProfile = ctx.cached(&p, "hilbert", json!(max_degree), || {
                hilbert_profile(&p, max_degree, &limits)
            })?;
            if json {
                println!("{}", serde_json::to_string(&prof).expect("profile serializes"));
            } else if csv {
                print!("{}", prof.to_csv());
            } else {
                let dims: Vec<String> = prof.dims.iter().map(u64::to_string).collect();
                println!("dims: {}", dims.join(" "));
                match prof.nilpotency_index() {
                    Some(k) => println!("finite dimensional, nilpotency index {k}"),
                    None => println!("unknown up to degree {}", prof.truncated_at),
                }
                if let Some(reason) = &prof.exhausted {
                    println!("stopped: {reason}");
                }
            }
            Ok(if prof.is_finite() { 0 } else { INCONCLUSIVE })
        }
        Command::Nilpotency { file, cap } => {
            let p = read(&file)?;
            let limits = ctx.limits;
            let prof: HilbertProfile =
                ctx.cached(&p, "hilbert", json!(cap), || hilbert_profile(&p, cap, &limits))?;
            match prof.nilpotency_index() {
                Some(k) => {
                    println!("nilpotency index {k}");
                    Ok(0)
                }
                None => {
                    println!("no zero degree up to {}", prof.truncated_at);
                    Ok(INCONCLUSIVE)
                }
            }
        }
        Command::Singular { file, degree, json } => {
            let p = read(&file)?;
            require_qhs(&p)?;
            if degree == 0 {
                return Err(Failure::Input("degree must be at least 1".into()));
            }
            let limits = ctx.limits;
            let basis: MinimalBasis = ctx.cached(&p, "singular", json!(degree), || {
                let mut b = MinimalBasis::degree_one(&p, IdealMode::WithoutTop);
                while b.degree < degree {
                    match next_minimal_basis(&b, &p, IdealMode::WithoutTop, &limits) {
                        Ok(next) => b = next,
                        Err(e) if e.is_resource_exhausted() => {
                            let singular = singular_monomials(&p, degree, &limits)?;
                            return Ok(MinimalBasis {
                                degree,
                                minimals: Vec::new(),
                                singular,
                                truncated: true,
                            });
                        }
                        Err(e) => return Err(e),
                    }
                }
                Ok(b)
            })?;
            if json {
                println!("{}", serde_json::to_string(&basis).expect("basis serializes"));
            } else {
                println!(
                    "degree {}: {} minimal, {} singular{}",
                    basis.degree,
                    basis.minimals.len(),
                    basis.singular.len(),
                    if basis.truncated { " (minimal basis truncated)" } else { "" }
                );
                for w in &basis.singular {
                    println!("{w}");
                }
            }
            Ok(if basis.truncated { INCONCLUSIVE } else { 0 })
        }
        Command::Regularity { file, cap } => {
            let p = read(&file)?;
            require_qhs(&p)?;
            let limits = EngineLimits {
                max_degree: cap,
                ..ctx.limits
            };
            let reg: Regularity =
                ctx.cached(&p, "regularity", json!(cap), || regularity_degree(&p, &limits))?;
            match &reg {
                Regularity::Regular {
                    degree,
                    nilpotency_bound,
                } => {
                    println!("regular at degree {degree}; nilpotent of index at most {nilpotency_bound}");
                    Ok(0)
                }
                Regularity::IrregularUpTo {
                    max_degree,
                    singular_counts,
                } => {
                    println!("singular words in every degree up to {max_degree}: {singular_counts:?}");
                    Ok(INCONCLUSIVE)
                }
                Regularity::Inconclusive { degree, reason } => {
                    println!("inconclusive at degree {degree}: {reason}");
                    Ok(INCONCLUSIVE)
                }
            }
        }
        Command::Certify { file } => {
            let p = read(&file)?;
            let cert: Certificate =
                ctx.cached(&p, "certify", Value::Null, || Ok(theorem1_certificate(&p)))?;
            println!("{}", serde_json::to_string(&cert).expect("certificate serializes"));
            Ok(if cert.is_some() { 0 } else { INCONCLUSIVE })
        }
        Command::LemmaM1 { n } => {
            let found = lemma_m1_witness(n, &ctx.limits)?;
            let q = qhs_core::constructions::witness_length(n);
            if found {
                println!("class of x1^{q} contains a word ending in x{n}");
            } else {
                println!("class of x1^{q} has no word ending in x{n}");
            }
            Ok(0)
        }
        Command::Enumerate {
            n,
            presentations,
            d_max,
        } => {
            let mut out = std::io::BufWriter::new(std::io::stdout().lock());
            let mut count = 0usize;
            let mut line = |p: Presentation| {
                count += 1;
                let _ = writeln!(out, "{}", p.to_json());
            };
            if presentations {
                for_each_presentation(n, d_max.unwrap_or(0), &mut line)?;
            } else {
                for_each_qhs(n, &mut line)?;
            }
            out.flush()?;
            drop(out);
            eprintln!("{count} presentations");
            Ok(0)
        }
        Command::DeltaTable { max_n } => {
            let mut text = String::from("n,delta,wisliceny,(n^2+n)/4,gap\n");
            for n in 1..=max_n {
                let (d, w) = (delta(n), wisliceny_count(n));
                text.push_str(&format!("{n},{d},{w},{},{}\n", quarter(n * n + n), w as i64 - d as i64));
            }
            emit(None, &text)?;
            Ok(0)
        }
        Command::Census { n, out } => {
            let base = census_limits();
            let limits = EngineLimits {
                max_class_size: cli.max_class_size.unwrap_or(base.max_class_size),
                ..base
            };
            let records = qhs_census(n, &limits)?;
            fs::write(&out, census_csv(&records))?;
            eprintln!("{} QHS written to {}", records.len(), out.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(INCONCLUSIVE)
        }
    }
}
