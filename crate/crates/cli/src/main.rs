use std::fs::{File, OpenOptions};
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wlink_core::classify::{classify_link, render_text, ClassifyOptions, LinkInput, LinkReport};
use wlink_core::families::{case_i, case_ii, cyclic, FamilyInstance};
use wlink_core::orlik::{alexander_divisor, betti2, betti2_oracle, DEFAULT_ORACLE_CAP};
use wlink_core::quasismooth::CheckMode;
use wlink_core::search::{
    enumerate, enumerate_parallel, read_ndjson, verify_certificate, write_ndjson, Certificate, SearchConfig,
};
use wlink_core::topology::curve_genus;
use wlink_core::{parse_polynomial, ErrorClass, LinkError, WeightSystem};

const EXIT_INVALID: u8 = 1;
const EXIT_UNCERTIFIED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "wlink", version, about = "Classify links of weighted homogeneous hypersurface singularities")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Support,
    LinearSystem,
}

impl From<Mode> for CheckMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Support => CheckMode::Support,
            Mode::LinearSystem => CheckMode::LinearSystem,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report for a polynomial, or for the general member of O(d).
    Analyze {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        /// Polynomial in x,y,z,t or z0..z3.
        #[arg(long)]
        poly: Option<String>,
        /// Degree; required without --poly, checked against it otherwise.
        #[arg(long)]
        degree: Option<u64>,
        #[arg(long, value_enum, default_value = "support")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: u64,
    },
    /// Second Betti number from weights and degree.
    Betti {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long)]
        degree: u64,
        /// Cross-check with the group-ring computation.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: u64,
    },
    /// Genus of a curve in a weighted projective plane.
    Genus {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long)]
        degree: u64,
    },
    /// Build a family member and classify it.
    Family {
        #[command(subcommand)]
        family: Family,
    },
    /// Enumerate weight systems and emit certificates.
    Search {
        /// JSON search configuration.
        #[arg(long)]
        config: PathBuf,
        /// Append certificates to this file (one JSON record per line).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue after the last certificate already in --out.
        #[arg(long, requires = "out")]
        resume: bool,
        /// Split the search over threads.
        #[arg(long)]
        parallel: bool,
    },
    /// Recheck every certificate in a file.
    Verify { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Family {
    #[command(name = "caseI")]
    CaseI {
        #[arg(long)]
        k: u64,
    },
    #[command(name = "caseII")]
    CaseII {
        #[arg(long)]
        k: u64,
    },
    Cyclic {
        #[arg(long, value_delimiter = ',', required = true)]
        exps: Vec<u64>,
    },
}

/// What a subcommand produced: text and JSON renderings plus an exit status.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

enum Failure {
    Link(LinkError),
    Io(String),
}

impl From<LinkError> for Failure {
    fn from(e: LinkError) -> Self {
        Failure::Link(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn parts(&self) -> (&'static str, String, u8) {
        match self {
            Failure::Link(e) => {
                let code = match e.class() {
                    ErrorClass::InvalidInput => EXIT_INVALID,
                    ErrorClass::Internal => EXIT_INTERNAL,
                };
                (e.code(), e.to_string(), code)
            }
            Failure::Io(m) => ("io_error", m.clone(), EXIT_INVALID),
        }
    }
}

type Run = Result<Output, Failure>;

fn report_output(report: &LinkReport) -> Output {
    Output {
        text: render_text(report),
        json: serde_json::to_value(report).expect("report serializes"),
        code: if report.quasismooth.passed { 0 } else { EXIT_UNCERTIFIED },
    }
}

fn analyze(weights: Vec<u64>, poly: Option<String>, degree: Option<u64>, mode: Mode, oracle_cap: u64) -> Run {
    let options = ClassifyOptions {
        mode: mode.into(),
        oracle_cap,
    };
    let input = match (poly, degree) {
        (Some(p), degree) => {
            let f = parse_polynomial(&p, &weights)?;
            if let Some(d) = degree.filter(|&d| d != f.degree()) {
                return Err(LinkError::NotHomogeneous {
                    first: f.degree(),
                    second: d,
                }
                .into());
            }
            LinkInput::Polynomial(f)
        }
        (None, Some(d)) => LinkInput::Weights(WeightSystem::new(weights, d)?),
        (None, None) => {
            return Err(LinkError::InvalidParameter("analyze needs --poly or --degree".into()).into())
        }
    };
    Ok(report_output(&classify_link(&input, options)?))
}

fn betti(weights: Vec<u64>, degree: u64, oracle: bool, oracle_cap: u64) -> Run {
    let ws = WeightSystem::new(weights, degree)?.normalized()?;
    let divisor = alexander_divisor(&ws);
    let b2 = betti2(&ws)?;
    let mut json = json!({
        "weight_system": ws,
        "alexander_divisor": divisor,
        "b2": b2,
    });
    let mut text = format!("{b2}\n");
    if oracle {
        let o = betti2_oracle(&ws, oracle_cap)?;
        if o != b2 {
            return Err(LinkError::OracleMismatch { b2, oracle: o }.into());
        }
        json["b2_oracle"] = json!(o);
        text = format!("{b2} (oracle {o})\n");
    }
    Ok(Output::ok(text, json))
}

fn genus(weights: Vec<u64>, degree: u64) -> Run {
    let [a, b, c] = <[u64; 3]>::try_from(weights.as_slice()).map_err(|_| LinkError::LengthMismatch {
        expected: 3,
        found: weights.len(),
    })?;
    let g = curve_genus([a, b, c], degree)?;
    Ok(Output::ok(
        format!("{g}\n"),
        json!({ "weights": [a, b, c], "degree": degree, "genus": g }),
    ))
}

fn family(which: Family) -> Run {
    let inst: FamilyInstance = match which {
        Family::CaseI { k } => case_i(k)?,
        Family::CaseII { k } => case_ii(k)?,
        Family::Cyclic { exps } => {
            let exps = <[u64; 4]>::try_from(exps.as_slice()).map_err(|_| LinkError::LengthMismatch {
                expected: 4,
                found: exps.len(),
            })?;
            cyclic(exps)?
        }
    };
    let report = classify_link(&LinkInput::Polynomial(inst.polynomial.clone()), ClassifyOptions::default())?;
    let mut out = report_output(&report);
    out.text = format!(
        "family: {:?} {:?}\n{}",
        inst.family, inst.parameters, out.text
    );
    out.json = json!({
        "family": inst.family,
        "parameters": inst.parameters,
        "polynomial": inst.polynomial.to_string(),
        "expected": inst.expected,
        "report": out.json,
    });
    Ok(out)
}

fn summary(c: &Certificate) -> String {
    let r = &c.report;
    let torsion = r.homology.as_ref().map_or("?".to_string(), ToString::to_string);
    format!(
        "{}  b2 = {}  H2 = {}  d - sum(w) = {}",
        c.weight_system, r.b2, torsion, r.index_gap
    )
}

fn search(config: PathBuf, out: Option<PathBuf>, resume: bool, parallel: bool) -> Run {
    let text = std::fs::read_to_string(&config)?;
    let mut config: SearchConfig =
        serde_json::from_str(&text).map_err(|e| LinkError::InvalidConfig(e.to_string()))?;
    if resume {
        let path = out.as_ref().expect("clap enforces --out");
        if path.exists() {
            let done = read_ndjson(BufReader::new(File::open(path)?))?;
            if let Some(last) = done.last() {
                config.resume_after = Some(last.discovered_by);
                config.limit = config.limit.map(|l| l.saturating_sub(done.len()));
            }
        }
    }
    let certs = if parallel {
        enumerate_parallel(&config)?
    } else {
        enumerate(&config)?.collect::<Result<Vec<_>, _>>()?
    };
    if let Some(path) = &out {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        write_ndjson(file, &certs)?;
    }
    let text: String = certs.iter().map(|c| summary(c) + "\n").collect();
    let json = Value::Array(certs.iter().map(|c| serde_json::to_value(c).expect("serializes")).collect());
    Ok(Output::ok(text, json))
}

fn verify(file: PathBuf) -> Run {
    let certs = read_ndjson(BufReader::new(File::open(&file)?))?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut all = true;
    for c in &certs {
        let v = verify_certificate(c);
        all &= v.passed;
        text.push_str(&format!("{}: {}\n", if v.passed { "pass" } else { "FAIL" }, c.weight_system));
        for d in &v.diffs {
            text.push_str(&format!("  {}: recorded {} recomputed {}\n", d.field, d.recorded, d.recomputed));
        }
        results.push(json!({ "cursor": c.discovered_by, "verification": v }));
    }
    text.push_str(&format!("{} certificate(s), {}\n", certs.len(), if all { "all pass" } else { "failures" }));
    Ok(Output {
        text,
        json: json!({ "passed": all, "certificates": results }),
        code: if all { 0 } else { EXIT_UNCERTIFIED },
    })
}

fn dispatch(command: Command) -> Run {
    match command {
        Command::Analyze {
            weights,
            poly,
            degree,
            mode,
            oracle_cap,
        } => analyze(weights, poly, degree, mode, oracle_cap),
        Command::Betti {
            weights,
            degree,
            oracle,
            oracle_cap,
        } => betti(weights, degree, oracle, oracle_cap),
        Command::Genus { weights, degree } => genus(weights, degree),
        Command::Family { family: f } => family(f),
        Command::Search {
            config,
            out,
            resume,
            parallel,
        } => search(config, out, resume, parallel),
        Command::Verify { file } => verify(file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match dispatch(cli.command) {
        Ok(out) => {
            if cli.json {
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("serializes"));
            } else {
                let _ = write!(stdout, "{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            let (code, message, exit) = f.parts();
            if cli.json {
                let body = json!({ "error": { "code": code, "message": message } });
                let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&body).expect("serializes"));
            } else {
                eprintln!("error [{code}]: {message}");
            }
            ExitCode::from(exit)
        }
    }
}
