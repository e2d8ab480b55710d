//! The `digitop` command line.
//!
//! Exit codes: 0 affirmative verdict or success, 1 negative verdict
//! (including `unknown` from `equiv`), 2 error. Errors print one
//! `error: ...` line on stderr and never leave a partial output file.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bits::MAX_BITS;
use crate::canon::are_isomorphic;
use crate::catalog::{generate, GeneratorSpec};
use crate::contract::{simple_pairs, Contractor, DEFAULT_MAX_SIZE};
use crate::euler::{e_vector_with, DEFAULT_CLIQUE_CAP};
use crate::error::Error;
use crate::io::{export_dot, parse, serialize, serialize_trace, Format, SpaceDocument};
use crate::par::Execution;
use crate::transform::{mint_label, Equivalence, ReductionPolicy, Rewriter, TransformStep};

#[derive(Parser, Debug)]
#[command(name = "digitop", version, about = "Contractibility, simple points and homotopy rewrites on digital spaces")]
pub struct Cli {
    /// Largest space the contractibility oracle accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SIZE)]
    pub max_size: usize,
    /// Largest space the clique counter accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_CLIQUE_CAP)]
    pub clique_cap: usize,
    /// File format for input and output (default: by extension, else text).
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the witness (check) or reduction trace (reduce) to this file.
    #[arg(long, global = true)]
    pub trace: Option<PathBuf>,
    /// check: also run label-least greedy deletion and report whether it stalls.
    #[arg(long, global = true)]
    pub greedy: bool,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the resulting space here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide contractibility.
    Check { file: PathBuf },
    /// List simple points, simple edges and simple pairs.
    Simple { file: PathBuf },
    /// Print the e-vector and Euler characteristic.
    Euler { file: PathBuf },
    /// Apply one transformation, e.g. `REP 1 2 x`, `RSP 1 2` or `ASP x : a b`.
    Apply {
        file: PathBuf,
        #[arg(required = true, num_args = 1..)]
        step: Vec<String>,
    },
    /// Reduce by simple deletions and pair replacements.
    Reduce {
        file: PathBuf,
        #[arg(long, default_value = "full", value_parser = ["points", "edges", "full"])]
        policy: String,
    },
    /// Decide isomorphism.
    Iso { first: PathBuf, second: PathBuf },
    /// Compare homotopy types by reduction.
    Equiv { first: PathBuf, second: PathBuf },
    /// Generate a fixture, e.g. `gen join cycle 4 complete 1`.
    Gen {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
    },
    /// Export a space as a DOT graph.
    Dot { file: PathBuf },
}

/// Anything that ends a command with exit code 2.
#[derive(Debug)]
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

struct Session<'a> {
    cli: &'a Cli,
    oracle: Contractor,
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

// A bare `->` argument would parse as a flag.
const ARROW: &str = "->";
const ARROW_STANDIN: &str = "\u{1}arrow";

/// Parses `args` (including the program name) and runs the command.
/// `-` as an input path reads stdin.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = args.into_iter().map(|a| {
        let a: OsString = a.into();
        if a == ARROW {
            OsString::from(ARROW_STANDIN)
        } else {
            a
        }
    });
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    run_cli(&cli, stdin, stdout, stderr)
}

pub fn run_cli(cli: &Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if cli.max_size > MAX_BITS || cli.clique_cap > MAX_BITS {
        let _ = writeln!(stderr, "error: --max-size and --clique-cap must be at most {MAX_BITS}");
        return 2;
    }
    let mut session = Session { cli, oracle: Contractor::new(cli.max_size), stdin, stdout, stderr };
    match session.dispatch() {
        Ok(code) => {
            if let Err(e) = session.stdout.flush() {
                let _ = writeln!(session.stderr, "error: {e}");
                return 2;
            }
            code
        }
        Err(Failure(msg)) => {
            let first = msg.lines().next().unwrap_or("");
            let _ = writeln!(session.stderr, "error: {first}");
            2
        }
    }
}

impl Session<'_> {
    fn dispatch(&mut self) -> Outcome {
        match &self.cli.command {
            Command::Check { file } => self.check(file),
            Command::Simple { file } => self.simple(file),
            Command::Euler { file } => self.euler(file),
            Command::Apply { file, step } => self.apply(file, step),
            Command::Reduce { file, policy } => self.reduce(file, policy),
            Command::Iso { first, second } => self.iso(first, second),
            Command::Equiv { first, second } => self.equiv(first, second),
            Command::Gen { spec } => self.gen(spec),
            Command::Dot { file } => self.dot(file),
        }
    }

    fn rewriter(&self) -> Rewriter<'_> {
        Rewriter::new(&self.oracle, self.cli.clique_cap)
    }

    fn input_format(&self, path: &Path) -> Format {
        self.cli.format.map(Format::from).unwrap_or_else(|| Format::for_path(path))
    }

    fn output_format(&self) -> Format {
        match (self.cli.format, &self.cli.out) {
            (Some(f), _) => f.into(),
            (None, Some(out)) => Format::for_path(out),
            (None, None) => Format::Text,
        }
    }

    fn load(&mut self, path: &Path) -> std::result::Result<SpaceDocument, Failure> {
        let mut text = String::new();
        if path == Path::new("-") {
            self.stdin.read_to_string(&mut text)?;
        } else {
            text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        }
        let parsed = parse(&text, self.input_format(path)).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        for w in &parsed.warnings {
            writeln!(self.stderr, "warning: {}: line {}: {}", path.display(), w.line, w.message)?;
        }
        Ok(parsed.document)
    }

    /// Writes to `--out` atomically, or to stdout.
    fn emit(&mut self, content: &str) -> std::result::Result<(), Failure> {
        match &self.cli.out {
            Some(path) => write_atomic(path, content),
            None => Ok(self.stdout.write_all(content.as_bytes())?),
        }
    }

    fn emit_space(&mut self, doc: &SpaceDocument) -> std::result::Result<(), Failure> {
        let text = serialize(doc, self.output_format());
        self.emit(&text)
    }

    fn check(&mut self, file: &Path) -> Outcome {
        let doc = self.load(file)?;
        let verdict = self.oracle.is_contractible(&doc.space)?;
        let mut witness = verdict.witness;
        if self.cli.greedy {
            let greedy = self.oracle.greedy_collapse(&doc.space)?;
            if greedy.reached_point() {
                witness = Some(greedy.removed);
            } else {
                let note = if verdict.contractible { "; backtracking found a witness" } else { "" };
                writeln!(
                    self.stderr,
                    "greedy: stalled with {} points after {} deletions{note}",
                    greedy.remaining,
                    greedy.removed.len()
                )?;
            }
        }
        if let (Some(path), true, Some(w)) = (&self.cli.trace, verdict.contractible, &witness) {
            let steps: Vec<TransformStep> = w.iter().map(|p| TransformStep::DeletePoint { point: p.clone() }).collect();
            write_atomic(path, &serialize_trace(&steps))?;
        }
        if verdict.contractible {
            writeln!(self.stdout, "contractible")?;
            Ok(0)
        } else {
            writeln!(self.stdout, "not contractible")?;
            Ok(1)
        }
    }

    fn simple(&mut self, file: &Path) -> Outcome {
        let doc = self.load(file)?;
        let g = &doc.space;
        let exec = Execution::default();
        let points = self.oracle.simple_points_with(g, exec)?;
        let deletable = self.oracle.simple_edges_for_deletion(g, exec)?;
        let attachable = self.oracle.simple_edges_for_attachment(g, exec)?;
        let pairs = simple_pairs(g, exec);
        let out = &mut *self.stdout;
        writeln!(out, "simple points: {}", points.len())?;
        for p in &points {
            writeln!(out, "  {p}")?;
        }
        for (title, list) in [
            ("deletable simple edges", &deletable),
            ("attachable simple edges", &attachable),
            ("simple pairs", &pairs),
        ] {
            writeln!(out, "{title}: {}", list.len())?;
            for (a, b) in list {
                writeln!(out, "  {a} {b}")?;
            }
        }
        Ok(0)
    }

    fn euler(&mut self, file: &Path) -> Outcome {
        let doc = self.load(file)?;
        let e = e_vector_with(&doc.space, self.cli.clique_cap, Execution::default())?;
        writeln!(self.stdout, "e = {e}\nchi = {}", e.euler_characteristic())?;
        Ok(0)
    }

    fn apply(&mut self, file: &Path, tokens: &[String]) -> Outcome {
        let mut doc = self.load(file)?;
        let mut tokens: Vec<String> = tokens
            .iter()
            .flat_map(|t| t.split_whitespace())
            .map(|t| if t == ARROW_STANDIN { ARROW.to_string() } else { t.to_string() })
            .collect();
        // REP and RSP take the arrow as optional (it is a shell redirect
        // unless quoted) and mint the new label when it is left out.
        if tokens.first().is_some_and(|t| t == "REP" || t == "RSP") {
            if tokens.len() == 4 && tokens[3] != "->" {
                tokens.insert(3, "->".to_string());
            } else if tokens.len() == 3 {
                let fresh = mint_label(&doc.space, &mut 0);
                tokens.extend(["->".to_string(), fresh.to_string()]);
            }
        }
        let step: TransformStep = tokens.join(" ").parse()?;
        doc.space = self.rewriter().apply(&doc.space, &step)?;
        doc.name = None;
        self.emit_space(&doc)?;
        Ok(0)
    }

    fn reduce(&mut self, file: &Path, policy: &str) -> Outcome {
        let mut doc = self.load(file)?;
        let policy: ReductionPolicy = policy.parse()?;
        let trace = self.rewriter().reduce(&doc.space, policy)?;
        let steps = serialize_trace(&trace.steps);
        doc.space = trace.final_space;
        doc.name = None;
        let mut text = serialize(&doc, self.output_format());
        match &self.cli.trace {
            Some(path) => write_atomic(path, &steps)?,
            None if self.output_format() == Format::Text => {
                let mut commented: String = steps.lines().map(|l| format!("# {l}\n")).collect();
                commented.push_str(&text);
                text = commented;
            }
            None => {}
        }
        self.emit(&text)?;
        Ok(0)
    }

    fn iso(&mut self, first: &Path, second: &Path) -> Outcome {
        let (a, b) = (self.load(first)?, self.load(second)?);
        if are_isomorphic(&a.space, &b.space)? {
            writeln!(self.stdout, "isomorphic")?;
            Ok(0)
        } else {
            writeln!(self.stdout, "distinct")?;
            Ok(1)
        }
    }

    fn equiv(&mut self, first: &Path, second: &Path) -> Outcome {
        let (a, b) = (self.load(first)?, self.load(second)?);
        let verdict = self.rewriter().homotopy_equivalent_by_reduction(&a.space, &b.space)?;
        writeln!(self.stdout, "{verdict}")?;
        Ok(if verdict == Equivalence::Equivalent { 0 } else { 1 })
    }

    fn gen(&mut self, tokens: &[String]) -> Outcome {
        let toks: Vec<&str> = tokens.iter().flat_map(|t| t.split_whitespace()).collect();
        let spec = GeneratorSpec::parse(&toks, self.cli.seed)?;
        let doc = SpaceDocument::named(generate(&spec)?, toks.join(" "));
        self.emit_space(&doc)?;
        Ok(0)
    }

    fn dot(&mut self, file: &Path) -> Outcome {
        let doc = self.load(file)?;
        let text = export_dot(&doc);
        self.emit(&text)?;
        Ok(0)
    }
}

fn write_atomic(path: &Path, content: &str) -> std::result::Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(content.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

