//! Command-line front end: validate, compose, classify, and reduce JSON
//! files, run the property suites, emit random instances, and render d = 2
//! configurations as SVG.
//!
//! Exit status: 0 on success, 1 when a check fails or an operation rejects
//! its (well-formed) inputs, 2 when an input does not parse.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use folab::gen::{
    gen_colors, gen_decoration, gen_forest_into, gen_labeling, gen_plain_tree, gen_profile_forest,
    gen_sc_element, gen_sc_forest_into, gen_sc_young, gen_triple, gen_young, rng_from_seed,
    GenParams,
};
use folab::operad::Operad;
use folab::suites::{run_suite, OperadSpec, SuiteConfig};
use folab::wcons::{reduce, validate_wpoint, ReduceOrder, WPoint};
use folab::{
    compose, compose_sc, render::render_svg, validate_sc, Forest, FreeOperad, ScElement, ScOperad,
    TerminalOperad, YoungForest,
};

#[derive(Parser)]
#[command(name = "folab", version, about = "Forest calculus, W construction, and disc configurations")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct OperadArg {
    /// Operad for decorated points: terminal, sc:<d>, or free:<collection file>.
    #[arg(long, default_value = "terminal")]
    operad: String,
}

#[derive(Subcommand)]
enum Verb {
    /// Check a JSON file: a young forest, forest, disc configuration, or W point.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        operad: OperadArg,
    },
    /// Compose two forests (outer first), or a forest with a disc configuration.
    Compose {
        g: PathBuf,
        f: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sort the edges of a forest into unit, leaf, root, and internal.
    Classify {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bring a W point to canonical form.
    Reduce {
        file: PathBuf,
        #[command(flatten)]
        operad: OperadArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite and report pass/fail per seeded case.
    Check {
        /// forest-axioms | weights | w-relations | sc-functoriality | trees-alpha
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        operad: OperadArg,
        /// Fix the disc dimension instead of drawing it per case.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Emit seeded random instances, one JSON value per line.
    Gen {
        /// young | forest | triple | tree | sc | wpoint
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[command(flatten)]
        operad: OperadArg,
        /// Disc dimension for sc instances.
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a d = 2 disc configuration as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    /// The inputs were well-formed but the operation rejected them.
    Rejected(String),
    /// The inputs did not parse.
    Parse(String),
}

fn parse_err(e: impl ToString) -> CliError {
    CliError::Parse(e.to_string())
}

fn rejected(e: impl ToString) -> CliError {
    CliError::Rejected(e.to_string())
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn from_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("{what}: {e}")))
}

/// Print a line, shrugging off a closed pipe.
fn say(doc: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{doc}");
}

fn emit(doc: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, doc)
            .map_err(|e| CliError::Rejected(format!("{}: {e}", path.display()))),
        None => {
            say(doc);
            Ok(())
        }
    }
}

fn to_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

/// Apply `body` to the parsed W point under whichever operad was named.
fn with_wpoint<R>(
    spec: &OperadSpec,
    text: &str,
    body: impl WPointBody<Out = R>,
) -> Result<R, CliError> {
    match spec {
        OperadSpec::Terminal => {
            let p: WPoint<()> = from_json(text, "W point")?;
            let colors = p.shape.source.colors().clone();
            body.run(&TerminalOperad { colors }, p)
        }
        OperadSpec::Sc(d) => {
            let p: WPoint<Vec<folab::DiscDatum>> = from_json(text, "W point")?;
            body.run(&ScOperad::new(*d), p)
        }
        OperadSpec::Free(coll) => {
            let p: WPoint<folab::free::FreeElement> = from_json(text, "W point")?;
            let op = FreeOperad::new(coll).map_err(rejected)?;
            body.run(&op, p)
        }
    }
}

trait WPointBody {
    type Out;
    fn run<O: Operad>(self, op: &O, p: WPoint<O::Point>) -> Result<Self::Out, CliError>
    where
        O::Point: Serialize;
}

struct ValidateBody;

impl WPointBody for ValidateBody {
    type Out = Result<(), String>;
    fn run<O: Operad>(self, op: &O, p: WPoint<O::Point>) -> Result<Self::Out, CliError>
    where
        O::Point: Serialize,
    {
        Ok(validate_wpoint(op, &p).map_err(|e| e.to_string()))
    }
}

struct ReduceBody {
    tol: f64,
}

impl WPointBody for ReduceBody {
    type Out = String;
    fn run<O: Operad>(self, op: &O, p: WPoint<O::Point>) -> Result<String, CliError>
    where
        O::Point: Serialize,
    {
        validate_wpoint(op, &p).map_err(rejected)?;
        let r = reduce(op, &p, self.tol, ReduceOrder::ZeroEdgesFirst).map_err(rejected)?;
        Ok(to_line(&r))
    }
}

/// What a JSON document is, judged by its top-level keys.
fn sniff(v: &serde_json::Value) -> Option<&'static str> {
    let has = |k: &str| v.get(k).is_some();
    if has("lengths") && has("shape") {
        return Some("wpoint");
    }
    if has("attach") {
        return Some("forest");
    }
    if has("data") && has("shape") {
        return Some("sc");
    }
    if has("inputs") && has("outputs") && has("structure") {
        return Some("young");
    }
    None
}

fn cmd_validate(file: &PathBuf, operad: &str) -> Result<(), CliError> {
    let text = read(file)?;
    let v: serde_json::Value = from_json(&text, "input")?;
    let kind = sniff(&v).ok_or_else(|| parse_err("unrecognized document shape"))?;
    let verdict: Result<(), String> = match kind {
        "young" => {
            let y: YoungForest = from_json(&text, "young forest")?;
            y.validate().map_err(|e| e.to_string())
        }
        "forest" => {
            let f: Forest = from_json(&text, "forest")?;
            f.validate().map_err(|e| e.to_string())
        }
        "sc" => {
            let e: ScElement = from_json(&text, "disc configuration")?;
            validate_sc(&e).map_err(|e| e.to_string())
        }
        _ => {
            let spec = OperadSpec::parse(operad).map_err(parse_err)?;
            with_wpoint(&spec, &text, ValidateBody)?
        }
    };
    match verdict {
        Ok(()) => {
            say(&json!({ "kind": kind, "ok": true }).to_string());
            Ok(())
        }
        Err(detail) => {
            say(&json!({ "kind": kind, "ok": false, "error": detail }).to_string());
            Err(CliError::Rejected(String::new()))
        }
    }
}

fn cmd_compose(g: &PathBuf, f: &PathBuf, out: &Option<PathBuf>) -> Result<(), CliError> {
    let g_text = read(g)?;
    let f_text = read(f)?;
    let outer: Forest = from_json(&g_text, "outer forest")?;
    let v: serde_json::Value = from_json(&f_text, "inner input")?;
    let doc = match sniff(&v) {
        Some("sc") => {
            let e: ScElement = from_json(&f_text, "disc configuration")?;
            to_line(&compose_sc(&outer, &e).map_err(rejected)?)
        }
        Some("forest") => {
            let inner: Forest = from_json(&f_text, "inner forest")?;
            to_line(&compose(&outer, &inner).map_err(rejected)?)
        }
        _ => return Err(parse_err("second input must be a forest or a disc configuration")),
    };
    emit(&doc, out)
}

fn cmd_classify(file: &PathBuf, out: &Option<PathBuf>) -> Result<(), CliError> {
    let f: Forest = from_json(&read(file)?, "forest")?;
    f.validate().map_err(rejected)?;
    emit(&to_line(&f.classify_edges()), out)
}

fn cmd_check(
    suite: &str,
    seed: u64,
    count: u64,
    tol: f64,
    operad: &str,
    d: Option<usize>,
) -> Result<(), CliError> {
    let cfg = SuiteConfig { seed, count, tol, operad: OperadSpec::parse(operad).map_err(parse_err)?, d };
    let report = run_suite(suite, &cfg).map_err(parse_err)?;
    say(report.to_string().trim_end());
    if report.ok() {
        Ok(())
    } else {
        Err(CliError::Rejected(String::new()))
    }
}

fn cmd_gen(
    kind: &str,
    seed: u64,
    count: u64,
    operad: &str,
    d: usize,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let p = GenParams::default();
    let mut rng = rng_from_seed(seed);
    let mut lines = Vec::new();
    for _ in 0..count {
        let line = match kind {
            "young" => to_line(&gen_young(&gen_colors(&mut rng), &p, &mut rng)),
            "forest" => {
                let y = gen_young(&gen_colors(&mut rng), &p, &mut rng);
                to_line(&gen_forest_into(&y, &p, &mut rng))
            }
            "triple" => {
                let (f, g, h) = gen_triple(&gen_colors(&mut rng), &p, &mut rng);
                to_line(&vec![f, g, h])
            }
            "tree" => to_line(&gen_plain_tree(&p, &mut rng)),
            "sc" => to_line(&gen_sc_element(d, &p, &mut rng)),
            "wpoint" => gen_wpoint(operad, &p, &mut rng)?,
            _ => {
                return Err(parse_err(format!(
                    "unknown kind {kind:?} (expected young, forest, triple, tree, sc, or wpoint)"
                )))
            }
        };
        lines.push(line);
    }
    emit(&lines.join("\n"), out)
}

fn gen_wpoint(
    operad: &str,
    p: &GenParams,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<String, CliError> {
    match OperadSpec::parse(operad).map_err(parse_err)? {
        OperadSpec::Terminal => {
            let colors = gen_colors(rng);
            let y = gen_young(&colors, p, rng);
            let shape = gen_forest_into(&y, p, rng);
            let op = TerminalOperad { colors };
            Ok(to_line(&WPoint {
                lengths: gen_labeling(&shape, rng),
                decoration: gen_decoration(&op, &shape.source, rng),
                shape,
            }))
        }
        OperadSpec::Sc(d) => {
            let y = gen_sc_young(d, p, rng);
            let shape = gen_sc_forest_into(&y, d, p.moves, rng);
            let op = ScOperad::new(d);
            Ok(to_line(&WPoint {
                lengths: gen_labeling(&shape, rng),
                decoration: gen_decoration(&op, &shape.source, rng),
                shape,
            }))
        }
        OperadSpec::Free(coll) => {
            let op = FreeOperad::new(&coll).map_err(rejected)?;
            let profiles: Vec<_> = coll.generators.iter().map(|g| g.corolla()).collect();
            let shape = gen_profile_forest(op.color_set(), &profiles, p, rng);
            Ok(to_line(&WPoint {
                lengths: gen_labeling(&shape, rng),
                decoration: gen_decoration(&op, &shape.source, rng),
                shape,
            }))
        }
    }
}

fn cmd_render(file: &PathBuf, out: &Option<PathBuf>) -> Result<(), CliError> {
    let e: ScElement = from_json(&read(file)?, "disc configuration")?;
    let svg = render_svg(&e).map_err(rejected)?;
    emit(&svg, out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.verb {
        Verb::Validate { file, operad } => cmd_validate(file, &operad.operad),
        Verb::Compose { g, f, out } => cmd_compose(g, f, out),
        Verb::Classify { file, out } => cmd_classify(file, out),
        Verb::Reduce { file, operad, tol, out } => {
            let spec = OperadSpec::parse(&operad.operad).map_err(parse_err)?;
            let doc = with_wpoint(&spec, &read(file)?, ReduceBody { tol: *tol })?;
            emit(&doc, out)
        }
        Verb::Check { suite, seed, count, tol, operad, d } => {
            let seed = env_seed(*seed)?;
            cmd_check(suite, seed, *count, *tol, &operad.operad, *d)
        }
        Verb::Gen { kind, seed, count, operad, d, out } => {
            let seed = env_seed(*seed)?;
            cmd_gen(kind, seed, *count, &operad.operad, *d, out)
        }
        Verb::Render { file, out } => cmd_render(file, out),
    }
}

/// FOLAB_SEED overrides the flag when set.
fn env_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var("FOLAB_SEED") {
        Ok(s) => s.parse().map_err(|_| parse_err(format!("FOLAB_SEED: bad seed {s:?}"))),
        Err(_) => Ok(flag),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Rejected(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
