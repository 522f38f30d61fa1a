//! Command-line driver: argument parsing, run configuration and report
//! emission for the `fourcand` binary.
//!
//! Reports are CSV (enumeration counts) or JSON lines; graphs travel as
//! planar_code streams. Failures surface as [`CliError`], which the binary
//! prints as a one-line JSON object on stderr.

use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coloring::{forbidding_profile, ColoringError, ColoringType, ForbiddingProfile};
use crate::construct::{run_pipeline, ConstructError};
use crate::enumerate::{enumerate_candidates, is_candidate, EnumConfig, EnumError};
use crate::plane::planar_code::{decode_planar_code, encode_planar_code, encode_stream, JsonCanvas, PlanarCodeError};
use crate::plane::{canonical_code, Canvas, CanonicalCode};
use crate::reducibility::{
    boolean_feasibility, check_reducent, exact_feasibility, FeasibilityReport, ReducibilityError,
};
use crate::weak::{brute_force_restrictive_weak, generate_restrictive_weak, is_weak_candidate, WeakError, WeakMember};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "FOURCAND_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    PlanarCode(#[from] PlanarCodeError),
    #[error(transparent)]
    Enumerate(#[from] EnumError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Weak(#[from] WeakError),
    #[error(transparent)]
    Reducibility(#[from] ReducibilityError),
}

impl CliError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::PlanarCode(_) => "input",
            CliError::Enumerate(EnumError::Limit(_)) => "resource",
            CliError::Enumerate(EnumError::Interrupted(_)) => "interrupted",
            CliError::Enumerate(_) => "enumerate",
            CliError::Construct(_) => "construct",
            CliError::Coloring(_) => "coloring",
            CliError::Weak(_) => "weak",
            CliError::Reducibility(ReducibilityError::TooLarge { .. }) => "resource",
            CliError::Reducibility(_) => "reducibility",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        json!({"error": self.kind(), "message": self.to_string()}).to_string()
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Parser, Debug)]
#[command(name = "fourcand", version, about = "Candidates for minimal counterexamples with a short outer face")]
pub struct Cli {
    /// Worker threads
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate l-candidates by vertex count and classify them
    Enumerate(EnumerateArgs),
    /// Forbidding profile of every canvas in a planar_code stream
    Classify(ClassifyArgs),
    /// Build a named canvas or a construction pipeline
    Construct(ConstructArgs),
    /// Restrictive weak 4-candidates by expansion or brute force
    WeakGen(WeakGenArgs),
    /// Feasibility of inner ring colorings for a configuration
    Reduce(ReduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Filter {
    All,
    Rainbow,
    Diagonal,
    Bichromatic,
    Restrictive,
}

impl Filter {
    fn keeps(self, p: Option<&ForbiddingProfile>) -> bool {
        match (self, p) {
            (Filter::All, _) => true,
            (_, None) => false,
            (Filter::Rainbow, Some(p)) => p.forbids_rainbow,
            (Filter::Diagonal, Some(p)) => p.forbids_any_diagonal(),
            (Filter::Bichromatic, Some(p)) => p.forbids_bichromatic,
            (Filter::Restrictive, Some(p)) => p.is_restrictive(),
        }
    }
}

/// `i/k`: keep the emitted candidates whose code hashes to `i` modulo `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shard {
    pub index: u64,
    pub count: u64,
}

impl FromStr for Shard {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (i, k) = s.split_once('/').ok_or("expected i/k")?;
        let index: u64 = i.trim().parse().map_err(|_| "bad shard index")?;
        let count: u64 = k.trim().parse().map_err(|_| "bad shard count")?;
        if count == 0 || index >= count {
            return Err(format!("shard {index}/{count} out of range"));
        }
        Ok(Shard { index, count })
    }
}

impl Shard {
    fn keeps(self, code: &CanonicalCode) -> bool {
        // FNV-1a, stable across runs and platforms
        let h = code
            .as_bytes()
            .iter()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
        h % self.count == self.index
    }
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// Outer face length
    #[arg(long = "l", default_value_t = 4)]
    pub l: usize,
    /// Largest vertex count to enumerate
    #[arg(long)]
    pub n_max: usize,
    /// Count CSV; written to stdout when absent
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// planar_code stream of the emitted candidates
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Filter::All)]
    pub filter: Filter,
    /// Checkpoint directory; an existing checkpoint there is resumed
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Emit only candidates whose code hashes to shard `i` of `k`, written `i/k`
    #[arg(long)]
    pub shard: Option<Shard>,
    /// Abort with a checkpoint once this many candidates are stored
    #[arg(long)]
    pub max_stored: Option<usize>,
    /// Stop with a checkpoint after expanding this many parents
    #[arg(long, hide = true)]
    pub stop_after: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// planar_code input; stdin when absent or `-`
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// Name (`diamond`, `w4`, `F_5`, ...) or pipeline (`10ext(diamond)`, `diamond|10ext|proj`)
    pub expr: String,
    /// planar_code output file; stdout when absent
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print a JSON line instead of planar_code
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct WeakGenArgs {
    /// Largest vertex count
    #[arg(long)]
    pub n_max: usize,
    /// Use exhaustive generation instead of the expansion closure
    #[arg(long)]
    pub brute_force: bool,
    /// planar_code stream of the members
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Boolean,
    Exact,
    Both,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// planar_code of the configuration; its outer cycle is the inner ring
    pub input: PathBuf,
    /// Outer ring coloring: `rainbow`, `diagonal`, `bichromatic` (4-rings) or colors like `1,2,3,1,2`
    #[arg(long, default_value = "rainbow")]
    pub theta: String,
    #[arg(long, value_enum, default_value_t = Method::Boolean)]
    pub method: Method,
    /// planar_code of a candidate reducent
    #[arg(long, requires = "vertex_map")]
    pub reducent: Option<PathBuf>,
    /// Reducent vertex for each inner ring position, like `0,1,2,3`
    #[arg(long, requires = "reducent")]
    pub vertex_map: Option<String>,
}

/// Validated settings shared by the subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(threads: Option<usize>) -> Result<Self, CliError> {
        if threads == Some(0) {
            return Err(CliError::Config("worker count must be at least 1".into()));
        }
        Ok(RunConfig { threads })
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// report to `stdout`.
pub fn run_args<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Config(e.to_string()))?;
    run(cli, stdin, stdout)
}

pub fn run(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::new(cli.threads)?;
    match cli.command {
        Command::Enumerate(a) => enumerate(&cfg, a, stdout),
        Command::Classify(a) => classify(a, stdin, stdout),
        Command::Construct(a) => construct(a, stdout),
        Command::WeakGen(a) => weak_gen(a, stdout),
        Command::Reduce(a) => reduce(a, stdout),
    }
}

fn out_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn read_canvases(path: &Path) -> Result<Vec<Canvas>, CliError> {
    let bytes = fs::read(path).map_err(io_error(path))?;
    Ok(decode_planar_code(&bytes)?)
}

fn write_stream(path: &Path, canvases: &[Canvas]) -> Result<(), CliError> {
    fs::write(path, encode_stream(canvases)).map_err(io_error(path))
}

fn canvas_json(c: &Canvas) -> Value {
    serde_json::to_value(JsonCanvas::from(c)).expect("serializable")
}

fn enumerate(cfg: &RunConfig, a: EnumerateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if a.l < 4 || a.n_max < a.l {
        return Err(CliError::Config(format!("need 4 <= l <= n_max, got l={} n_max={}", a.l, a.n_max)));
    }
    let mut ec = EnumConfig::new(a.l, a.n_max);
    ec.threads = cfg.threads;
    ec.checkpoint = a.checkpoint.clone();
    ec.max_stored = a.max_stored;
    ec.stop_after = a.stop_after;

    let resuming = a.checkpoint.as_ref().is_some_and(|d| d.join("state.json").exists());
    // on resume the stream is appended to, skipping candidates already in it
    let mut written: BTreeSet<CanonicalCode> = BTreeSet::new();
    let mut sink = match &a.output {
        None => None,
        Some(path) => {
            let exists = path.exists();
            if resuming && exists {
                for c in read_canvases(path)? {
                    written.insert(canonical_code(&c));
                }
            }
            let mut file = OpenOptions::new()
                .create(true)
                .write(true)
                .append(resuming)
                .truncate(!resuming)
                .open(path)
                .map_err(io_error(path))?;
            if !(resuming && exists) {
                file.write_all(b">>planar_code<<").map_err(io_error(path))?;
            }
            Some((BufWriter::new(file), path.clone()))
        }
    };
    let mut failure: Option<CliError> = None;
    let result = enumerate_candidates(&ec, &mut |c, class| {
        if failure.is_some() || !a.filter.keeps(class.profile.as_ref()) {
            return;
        }
        if a.shard.is_some_and(|s| !s.keeps(&class.code)) {
            return;
        }
        if let Some((w, path)) = sink.as_mut() {
            if written.contains(&class.code) {
                return;
            }
            if let Err(e) = w.write_all(&encode_planar_code(c)) {
                failure = Some(io_error(path)(e));
            }
        }
    });
    if let Some((mut w, path)) = sink {
        w.flush().map_err(io_error(&path))?;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let stats = result?;
    let csv = stats.to_csv();
    match &a.report {
        Some(path) => fs::write(path, csv).map_err(io_error(path)),
        None => stdout.write_all(csv.as_bytes()).map_err(out_err),
    }
}

fn profile_json(p: &ForbiddingProfile) -> Value {
    json!({
        "summary": p.summary(),
        "rainbow": p.forbids_rainbow,
        "diagonal": p.forbids_diagonal,
        "bichromatic": p.forbids_bichromatic,
        "extension_counts": p.extension_counts,
    })
}

fn classify(a: ClassifyArgs, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<(), CliError> {
    let canvases = match a.input.as_deref() {
        Some(p) if p != Path::new("-") => read_canvases(p)?,
        _ => {
            let mut bytes = Vec::new();
            stdin.read_to_end(&mut bytes).map_err(io_error(Path::new("<stdin>")))?;
            decode_planar_code(&bytes)?
        }
    };
    for (i, c) in canvases.iter().enumerate() {
        let profile = if c.outer_len() == 4 {
            Some(profile_json(&forbidding_profile(c)?))
        } else {
            None
        };
        let line = json!({
            "index": i,
            "vertices": c.vertex_count(),
            "outer_length": c.outer_len(),
            "candidate": is_candidate(c),
            "weak_candidate": c.outer_len() == 4 && is_weak_candidate(c),
            "code": canonical_code(c).to_string(),
            "profile": profile,
        });
        writeln!(stdout, "{line}").map_err(out_err)?;
    }
    Ok(())
}

fn construct(a: ConstructArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let c = run_pipeline(&a.expr)?;
    if let Some(path) = &a.output {
        write_stream(path, std::slice::from_ref(&c))?;
    }
    if a.json {
        let line = json!({
            "expr": a.expr,
            "vertices": c.vertex_count(),
            "code": canonical_code(&c).to_string(),
            "canvas": canvas_json(&c),
        });
        writeln!(stdout, "{line}").map_err(out_err)
    } else if a.output.is_none() {
        stdout.write_all(&encode_stream(std::slice::from_ref(&c))).map_err(out_err)
    } else {
        Ok(())
    }
}

fn weak_gen(a: WeakGenArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if a.n_max < 4 {
        return Err(CliError::Config("n_max must be at least 4".into()));
    }
    let (members, kind_changes): (Vec<WeakMember>, Option<usize>) = if a.brute_force {
        (brute_force_restrictive_weak(a.n_max)?, None)
    } else {
        let g = generate_restrictive_weak(a.n_max)?;
        let changes = g.kind_changes.len();
        (g.members, Some(changes))
    };
    for m in &members {
        let line = json!({
            "vertices": m.canvas.vertex_count(),
            "kind": m.kind.to_string(),
            "code": m.code.to_string(),
            "canvas": canvas_json(&m.canvas),
        });
        writeln!(stdout, "{line}").map_err(out_err)?;
    }
    let summary = json!({
        "summary": {
            "source": if a.brute_force { "brute_force" } else { "expansion" },
            "n_max": a.n_max,
            "members": members.len(),
            "kind_changes": kind_changes,
        }
    });
    writeln!(stdout, "{summary}").map_err(out_err)?;
    if let Some(path) = &a.output {
        let canvases: Vec<Canvas> = members.into_iter().map(|m| m.canvas).collect();
        write_stream(path, &canvases)?;
    }
    Ok(())
}

/// Colors of the outer ring from a type name or an explicit list.
pub fn parse_theta(s: &str) -> Result<Vec<u8>, CliError> {
    let t = match s {
        "rainbow" => Some(ColoringType::Rainbow),
        "diagonal" => Some(ColoringType::Diagonal1),
        "bichromatic" => Some(ColoringType::Bichromatic),
        _ => None,
    };
    if let Some(t) = t {
        return Ok(t.representative().to_vec());
    }
    s.split(',')
        .map(|x| match x.trim().parse::<u8>() {
            Ok(c @ 1..=4) => Ok(c),
            _ => Err(CliError::Config(format!("bad color {x:?} in theta (expected 1..4)"))),
        })
        .collect()
}

fn reduce(a: ReduceArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let theta = parse_theta(&a.theta)?;
    let f = read_canvases(&a.input)?
        .into_iter()
        .next()
        .ok_or_else(|| CliError::Config("configuration stream is empty".into()))?;
    let boolean = matches!(a.method, Method::Boolean | Method::Both)
        .then(|| boolean_feasibility(&f, &theta))
        .transpose()?;
    let exact = matches!(a.method, Method::Exact | Method::Both)
        .then(|| exact_feasibility(&f, &theta))
        .transpose()?;
    let base: &FeasibilityReport = boolean.as_ref().or(exact.as_ref()).expect("some method runs");
    let omegas: Vec<Value> = (0..base.omegas.len())
        .map(|i| {
            let mut o = json!({"omega": base.omegas[i], "extends": base.extends[i]});
            if let Some(b) = &boolean {
                o["boolean_infeasible"] = json!(b.infeasible[i]);
            }
            if let Some(e) = &exact {
                o["exact_infeasible"] = json!(e.infeasible[i]);
            }
            o
        })
        .collect();
    let mut report = json!({
        "theta": theta,
        "ring_lengths": [theta.len(), f.outer_len()],
        "vertices": f.vertex_count(),
        "omegas": omegas,
    });
    let internal = f.vertex_count() > f.outer_len();
    if let Some(b) = &boolean {
        report["boolean_feasible_count"] = json!(b.feasible_count());
        report["d_reducible"] = json!(internal && b.all_infeasible());
    }
    if let Some(e) = &exact {
        report["exact_feasible_count"] = json!(e.feasible_count());
    }
    if let (Some(path), Some(map)) = (&a.reducent, &a.vertex_map) {
        let f1 = read_canvases(path)?
            .into_iter()
            .next()
            .ok_or_else(|| CliError::Config("reducent stream is empty".into()))?;
        let map: Vec<usize> = map
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| CliError::Config(format!("bad vertex {x:?} in vertex map"))))
            .collect::<Result<_, _>>()?;
        report["reducent"] = json!(check_reducent(&f, &theta, &f1, &map)?);
    }
    writeln!(stdout, "{report}").map_err(out_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &[u8]) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        let mut inp = input;
        run_args(std::iter::once("fourcand").chain(args.iter().copied()), &mut inp, &mut out)?;
        Ok(out)
    }

    #[test]
    fn shard_parsing() {
        assert_eq!("1/3".parse::<Shard>(), Ok(Shard { index: 1, count: 3 }));
        assert!("3/3".parse::<Shard>().is_err());
        assert!("x".parse::<Shard>().is_err());
    }

    #[test]
    fn theta_parsing() {
        assert_eq!(parse_theta("rainbow").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_theta("1,2,1,2,3").unwrap(), vec![1, 2, 1, 2, 3]);
        assert!(parse_theta("1,5").is_err());
    }

    #[test]
    fn construct_then_classify() {
        let bytes = run_str(&["construct", "diamond"], b"").unwrap();
        let out = String::from_utf8(run_str(&["classify"], &bytes).unwrap()).unwrap();
        let v: Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
        assert_eq!(v["vertices"], 4);
        assert_eq!(v["profile"]["summary"], "diagonal+bichromatic forbidding");
    }

    #[test]
    fn errors_are_machine_readable() {
        let e = run_str(&["enumerate", "--l", "5", "--n-max", "4"], b"").unwrap_err();
        assert_eq!(e.kind(), "config");
        assert_eq!(e.exit_code(), 2);
        let v: Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(v["error"], "config");
        let e = run_str(&["classify"], b"garbage").unwrap_err();
        assert_eq!(e.kind(), "input");
        let e = run_str(&["--threads", "0", "construct", "diamond"], b"").unwrap_err();
        assert_eq!(e.kind(), "config");
        assert_eq!(run_str(&["construct", "nonsense"], b"").unwrap_err().kind(), "construct");
    }

    #[test]
    fn enumerate_counts_and_filter() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("bi.pc");
        let csv = run_str(
            &["enumerate", "--n-max", "12", "--filter", "bichromatic", "--output", out.to_str().unwrap()],
            b"",
        )
        .unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("n,candidates,rainbow_forbidding,diagonal_forbidding,bichromatic_forbidding\n"));
        assert!(csv.contains("\n12,1,0,0,0\n"), "{csv}");
        // only the diamond forbids the bichromatic type up to 12 vertices
        assert_eq!(read_canvases(&out).unwrap().len(), 1);
    }

    #[test]
    fn reduce_reports_every_inner_coloring() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("f.pc");
        run_str(&["construct", "w4", "--output", f.to_str().unwrap()], b"").unwrap();
        let out = run_str(&["reduce", f.to_str().unwrap(), "--method", "both"], b"").unwrap();
        let v: Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["ring_lengths"], json!([4, 4]));
        for o in v["omegas"].as_array().unwrap() {
            if o["exact_infeasible"] == json!(false) {
                assert_eq!(o["boolean_infeasible"], json!(false));
            }
        }
    }
}
