use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use otfst::apply::{apply_str, enumerate_pairs};
use otfst::exactness::{check_grammar, find_precisions};
use otfst::grammars::{self, ORDERINGS};
use otfst::ot::{compile_grammar, Grammar, Method};
use otfst::{att, Alphabet, Fsm, EPS};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] otfst::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "otfst", version, about = "Compile Optimality Theory grammars to finite-state transducers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a grammar and write the machine in AT&T format.
    Compile {
        #[command(flatten)]
        src: Source,
        /// Output file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the outputs for each input, sorted. Reads inputs from stdin
    /// when none are given.
    Apply {
        #[command(flatten)]
        src: Source,
        inputs: Vec<String>,
    },
    /// Exactness report for every ranked constraint.
    Check {
        #[command(flatten)]
        src: Source,
        /// Only consider inputs up to this length.
        #[arg(long)]
        len: Option<usize>,
        /// Exit with status 1 if some constraint is inexact.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Greedy search for the least exact precision of each constraint.
    Search {
        #[command(flatten)]
        src: Source,
        /// Only require exactness for inputs up to this length.
        #[arg(long)]
        len: Option<usize>,
        #[arg(long, default_value_t = 16)]
        max_prec: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// State counts for the nine syllabification rankings: matching at the
    /// least globally exact precisions, counting at the least precisions
    /// exact up to each length.
    Table {
        #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 15])]
        len: Vec<usize>,
        #[arg(long, default_value_t = 16)]
        max_prec: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a grammar or machine as AT&T text or Graphviz DOT.
    Export {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value_t = ExportFormat::Att)]
        format: ExportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List every input/output pair with input up to `--len` symbols.
    Enumerate {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
}

#[derive(Args)]
struct Source {
    /// Built-in grammar name, grammar file, or AT&T machine (`*.att`).
    grammar: String,
    /// count, match or matchlocal; overrides the grammar's methods.
    #[arg(long)]
    method: Option<Method>,
    /// `NAME=N` for one constraint or `N` for all; repeatable.
    #[arg(long = "prec", value_name = "NAME=N|N")]
    prec: Vec<String>,
    /// Alphabet as a comma separated list, or a file holding one.
    #[arg(long)]
    sigma: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Att,
    Dot,
}

enum Loaded {
    Grammar(Grammar),
    Machine(Fsm),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

impl Source {
    fn sigma(&self) -> Result<Arc<Alphabet>> {
        let Some(spec) = &self.sigma else {
            return Ok(Arc::new(Alphabet::default_sigma()));
        };
        let path = Path::new(spec);
        let list = if path.is_file() { read(path)?.split_whitespace().collect::<Vec<_>>().join(",") } else { spec.clone() };
        Ok(Arc::new(Alphabet::parse_list(&list)?))
    }

    fn load(&self) -> Result<Loaded> {
        let sigma = self.sigma()?;
        let path = Path::new(&self.grammar);
        if self.grammar.ends_with(".att") {
            if self.method.is_some() || !self.prec.is_empty() {
                return Err(CliError::Usage("--method and --prec apply to grammars, not machines".into()));
            }
            return Ok(Loaded::Machine(att::import(&read(path)?, &sigma)?));
        }
        let method = self.method.unwrap_or(Method::Counting);
        let mut g = if grammars::builtin_source(&self.grammar).is_some() {
            grammars::builtin(&self.grammar, &sigma, method)?
        } else if path.is_file() {
            let name = path.file_stem().map_or(self.grammar.clone(), |s| s.to_string_lossy().into_owned());
            Grammar::parse(&name, &read(path)?, &sigma, method)?
        } else {
            return Err(otfst::Error::UnknownGrammar(self.grammar.clone()).into());
        };
        if let Some(m) = self.method {
            g.set_method(m);
        }
        for p in &self.prec {
            match p.split_once('=') {
                Some((name, n)) => g.set_precision(name.trim(), parse_prec(n)?)?,
                None => g.set_all_precisions(parse_prec(p)?),
            }
        }
        Ok(Loaded::Grammar(g))
    }

    fn grammar(&self) -> Result<Grammar> {
        match self.load()? {
            Loaded::Grammar(g) => Ok(g),
            Loaded::Machine(_) => Err(CliError::Usage("this command needs a grammar, not a compiled machine".into())),
        }
    }

    fn machine(&self) -> Result<Fsm> {
        match self.load()? {
            Loaded::Grammar(g) => Ok(compile_grammar(&g)?),
            Loaded::Machine(m) => Ok(m),
        }
    }
}

fn parse_prec(s: &str) -> Result<u32> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("bad precision `{s}`")))
}

fn show(sigma: &Alphabet, s: &[otfst::Sym]) -> String {
    if s.is_empty() {
        att::EPS_TOKEN.to_string()
    } else {
        sigma.render(s)
    }
}

fn write_out(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn dot(m: &Fsm) -> String {
    let sigma = m.sigma();
    let name = |s| if s == EPS { "ε".to_string() } else { sigma.name(s).replace('"', "\\\"") };
    let mut out = String::from("digraph fsm {\n  rankdir=LR;\n  init [shape=point];\n");
    for s in m.states() {
        let shape = if m.is_final(s) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {s} [shape={shape}];");
    }
    let _ = writeln!(out, "  init -> {};", m.start());
    for s in m.states() {
        for t in m.arcs(s) {
            let l = t.label;
            let label = if l.is_identity() { name(l.input) } else { format!("{}:{}", name(l.input), name(l.output)) };
            let _ = writeln!(out, "  {s} -> {} [label=\"{label}\"];", t.next);
        }
    }
    out.push_str("}\n");
    out
}

/// Method, bound, and per ordering the state count with its precisions.
type Row = (String, String, Vec<(usize, Vec<u32>)>);

fn table(lens: &[usize], max_prec: u32, format: Format) -> Result<String> {
    let sigma = Arc::new(Alphabet::default_sigma());
    let mut rows: Vec<Row> = Vec::new();
    let mut row = Vec::new();
    for k in 1..=ORDERINGS.len() {
        let mut g = grammars::syllable_grammar(k, &sigma, Method::MatchingGlobal)?;
        let p = find_precisions(&g, Method::MatchingGlobal, None, max_prec)?;
        for (r, &x) in g.ranking.iter_mut().zip(&p) {
            r.precision = x;
        }
        row.push((compile_grammar(&g)?.num_states(), p));
    }
    rows.push(("match".into(), "exact".into(), row));
    for &len in lens {
        let mut row = Vec::new();
        for k in 1..=ORDERINGS.len() {
            let mut g = grammars::syllable_grammar(k, &sigma, Method::Counting)?;
            let p = find_precisions(&g, Method::Counting, Some(len), max_prec)?;
            for (r, &x) in g.ranking.iter_mut().zip(&p) {
                r.precision = x;
            }
            row.push((compile_grammar(&g)?.num_states(), p));
        }
        rows.push(("count".into(), format!("<={len}"), row));
    }

    let mut out = String::new();
    match format {
        Format::Text => {
            let _ = write!(out, "{:<8}{:<8}", "method", "bound");
            for k in 1..=ORDERINGS.len() {
                let _ = write!(out, "{k:>8}");
            }
            out.push('\n');
            for (method, bound, cells) in &rows {
                let _ = write!(out, "{method:<8}{bound:<8}");
                for (states, _) in cells {
                    let _ = write!(out, "{states:>8}");
                }
                out.push('\n');
            }
        }
        Format::Kv => {
            for (method, bound, cells) in &rows {
                for (k, (states, p)) in cells.iter().enumerate() {
                    let p: Vec<String> = p.iter().map(u32::to_string).collect();
                    let _ = writeln!(
                        out,
                        "method={method} bound={} ordering={} precisions={} states={states}",
                        bound.trim_start_matches("<="),
                        k + 1,
                        p.join(",")
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Runs a command; `Ok(false)` means an analysis failed under `--strict`.
fn run(cmd: Cmd) -> Result<bool> {
    let t0 = Instant::now();
    match cmd {
        Cmd::Compile { src, output } => {
            let m = src.machine()?;
            write_out(output.as_deref(), &att::export(&m))?;
            let line = format!("states: {}", m.num_states());
            if output.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
        }
        Cmd::Apply { src, inputs } => {
            let m = src.machine()?;
            let inputs = if inputs.is_empty() {
                let mut lines = Vec::new();
                for line in io::stdin().lock().lines() {
                    let line = line.map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
                    lines.push(line.trim().to_string());
                }
                lines
            } else {
                inputs
            };
            let many = inputs.len() > 1;
            let mut out = String::new();
            for w in &inputs {
                for o in apply_str(&m, w)? {
                    if many {
                        let _ = writeln!(out, "{w}\t{o}");
                    } else {
                        let _ = writeln!(out, "{o}");
                    }
                }
            }
            write_out(None, &out)?;
        }
        Cmd::Check { src, len, strict, format } => {
            let report = check_grammar(&src.grammar()?, len)?;
            let text = match format {
                Format::Text => report.to_text(),
                Format::Kv => report.to_kv(),
            };
            write_out(None, &text)?;
            eprintln!("time: {:.3}s", t0.elapsed().as_secs_f64());
            return Ok(!strict || report.is_exact());
        }
        Cmd::Search { src, len, max_prec, format } => {
            let g = src.grammar()?;
            let method = src.method.unwrap_or(Method::Counting);
            let p = find_precisions(&g, method, len, max_prec)?;
            let joined: Vec<String> = p.iter().map(u32::to_string).collect();
            let joined = joined.join(",");
            let out = match format {
                Format::Text => {
                    let named: Vec<String> = g.constraint_names().iter().zip(&p).map(|(n, x)| format!("{n}={x}")).collect();
                    format!("{joined}\n{}\n", named.join(" "))
                }
                Format::Kv => {
                    let bound = len.map_or("global".to_string(), |n| n.to_string());
                    format!("grammar={} method={method} len={bound} precisions={joined}\n", g.name)
                }
            };
            write_out(None, &out)?;
        }
        Cmd::Table { len, max_prec, format } => {
            write_out(None, &table(&len, max_prec, format)?)?;
        }
        Cmd::Export { src, format, output } => {
            let m = src.machine()?;
            let text = match format {
                ExportFormat::Att => att::export(&m),
                ExportFormat::Dot => dot(&m),
            };
            write_out(output.as_deref(), &text)?;
        }
        Cmd::Enumerate { src, len } => {
            let m = src.machine()?;
            let sigma = Arc::clone(m.sigma());
            let mut out = String::new();
            for (i, o) in enumerate_pairs(&m, len)? {
                let _ = writeln!(out, "{}\t{}", show(&sigma, &i), show(&sigma, &o));
            }
            write_out(None, &out)?;
        }
    }
    eprintln!("time: {:.3}s", t0.elapsed().as_secs_f64());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
