//! Command-line front end for `unlenc-core`: batch conversion, step traces
//! and dictionary / rule-pack checks.
//!
//! Every command writes its requested output to `out` and diagnostics to
//! `err`, and returns the process exit status: 0 on success, 1 when some
//! sentences failed or a check found problems, 2 when a dictionary or rule
//! file could not be read or parsed.

pub mod pack;
pub mod records;

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unlenc_core::engine::render_trace;
use unlenc_core::lexicon::parse_dictionary;
use unlenc_core::ruleset::parse_rules;
use unlenc_core::text::nfc;
use unlenc_core::unl::{serialize, serialize_checked, to_dot};
use unlenc_core::{Analysis, Engine, EngineConfig, EngineError, IdPolicy, Lexicon, Registry, RuleSet, Style};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "unlenc", version, about = "Convert Bangla sentences to UNL expressions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert sentences, one per input line.
    Convert(ConvertArgs),
    /// Validate dictionaries and rule files.
    Check(PackArgs),
    /// Print the step trace and result for one sentence.
    Trace(TraceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PackArgs {
    /// Dictionary file; repeatable, read in order. Defaults to the reference pack.
    #[arg(long = "dict", value_name = "PATH")]
    pub dicts: Vec<PathBuf>,
    /// Rule file; repeatable, read in order. Defaults to the reference pack.
    #[arg(long = "rules", value_name = "PATH")]
    pub rules: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    #[command(flatten)]
    pub pack: PackArgs,
    /// Document delimiters.
    #[arg(long, value_enum, default_value_t = StyleArg::S)]
    pub style: StyleArg,
    /// Reject relation labels outside the built-in registry.
    #[arg(long)]
    pub strict_registry: bool,
    /// Step budget per sentence (default: 50 x initial node count).
    #[arg(long, value_name = "N")]
    pub budget: Option<usize>,
    /// Which instances carry `:NN` ids.
    #[arg(long, value_enum, default_value_t = IdsArg::Minimal)]
    pub ids: IdsArg,
}

#[derive(Debug, Clone, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, value_enum, default_value_t = Format::Unl)]
    pub format: Format,
    /// Input file, one sentence per line (default: standard input).
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub engine: EngineArgs,
    pub sentence: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Unl,
    Dot,
    Trace,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    /// `[S]` ... `[/S]`
    S,
    /// `{unl}` ... `{/unl}`
    Unl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdsArg {
    Minimal,
    Always,
}

impl From<StyleArg> for Style {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::S => Style::SBrackets,
            StyleArg::Unl => Style::UnlBraces,
        }
    }
}

impl From<IdsArg> for IdPolicy {
    fn from(i: IdsArg) -> Self {
        match i {
            IdsArg::Minimal => IdPolicy::Minimal,
            IdsArg::Always => IdPolicy::Always,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let status = match cli.command {
        Command::Convert(a) => convert(&a, input, out, err),
        Command::Check(a) => check(&a, out, err),
        Command::Trace(a) => trace(&a, out, err),
    };
    status.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_CONFIG
    })
}

fn sources(paths: &[PathBuf], default: (&str, &str)) -> io::Result<Vec<(String, String)>> {
    if paths.is_empty() {
        return Ok(vec![(default.0.to_string(), default.1.to_string())]);
    }
    paths
        .iter()
        .map(|p| {
            fs::read_to_string(p)
                .map(|text| (p.display().to_string(), text))
                .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))
        })
        .collect()
}

/// Loads and concatenates the dictionaries and rule files, in argument order.
pub fn load(pack: &PackArgs, registry: &Registry) -> Result<(Lexicon, RuleSet), String> {
    let dicts = sources(&pack.dicts, (pack::DICTIONARY_NAME, pack::DICTIONARY)).map_err(|e| e.to_string())?;
    let rule_files = sources(&pack.rules, (pack::RULES_NAME, pack::RULES)).map_err(|e| e.to_string())?;
    let mut lexicon = Lexicon::default();
    for (name, text) in &dicts {
        lexicon.extend(parse_dictionary(text, name).map_err(|e| e.to_string())?);
    }
    let mut rules = RuleSet::default();
    for (name, text) in &rule_files {
        rules.extend(parse_rules(text, name, registry).map_err(|e| e.to_string())?);
    }
    Ok((lexicon, rules))
}

fn registry(args: &EngineArgs) -> Registry {
    Registry::builtin().strict(args.strict_registry)
}

fn config(args: &EngineArgs) -> EngineConfig {
    EngineConfig {
        budget: args.budget,
        ids: args.ids.into(),
        ..EngineConfig::default()
    }
}

fn render_unl(a: &Analysis, args: &EngineArgs, registry: &Registry) -> Result<String, String> {
    let style = args.style.into();
    if args.strict_registry {
        serialize_checked(&a.expression, style, registry).map_err(|e| e.to_string())
    } else {
        Ok(serialize(&a.expression, style))
    }
}

fn report(err: &mut dyn Write, sentence: usize, e: &EngineError) {
    let _ = writeln!(err, "sentence {sentence}: {e}");
}

pub fn convert(args: &ConvertArgs, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let registry = registry(&args.engine);
    let (lexicon, rules) = match load(&args.engine.pack, &registry) {
        Ok(p) => p,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_CONFIG);
        }
    };
    let engine = Engine::new(&lexicon, &rules).with_config(config(&args.engine));
    let mut file_input;
    let input: &mut dyn BufRead = match &args.input {
        Some(p) => match fs::File::open(p) {
            Ok(f) => {
                file_input = io::BufReader::new(f);
                &mut file_input
            }
            Err(e) => {
                writeln!(err, "error: {}: {e}", p.display())?;
                return Ok(EXIT_CONFIG);
            }
        },
        None => stdin,
    };

    let mut status = EXIT_OK;
    for (n, line) in input.lines().enumerate() {
        let sentence_no = n + 1;
        let line = nfc(&line?);
        if line.trim().is_empty() {
            continue;
        }
        let analysis = match engine.run(&line) {
            Ok(a) => a,
            Err(e) => {
                report(err, sentence_no, &e);
                if args.format == Format::Trace {
                    if let Some(t) = e.trace() {
                        write!(out, "{}", render_trace(t))?;
                        writeln!(out)?;
                    }
                }
                status = EXIT_FAILURES;
                continue;
            }
        };
        match args.format {
            Format::Unl => match render_unl(&analysis, &args.engine, &registry) {
                Ok(text) => write!(out, "{text}")?,
                Err(e) => {
                    writeln!(err, "sentence {sentence_no}: {e}")?;
                    status = EXIT_FAILURES;
                }
            },
            Format::Dot => write!(out, "{}", to_dot(&analysis.expression))?,
            Format::Trace => {
                write!(out, "{}", render_trace(&analysis.trace))?;
                write!(out, "{}", serialize(&analysis.expression, args.engine.style.into()))?;
                writeln!(out)?;
            }
            Format::Records => write!(out, "{}", records::to_lines(sentence_no, &analysis.trace))?,
        }
    }
    Ok(status)
}

pub fn trace(args: &TraceArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let registry = registry(&args.engine);
    let (lexicon, rules) = match load(&args.engine.pack, &registry) {
        Ok(p) => p,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_CONFIG);
        }
    };
    let engine = Engine::new(&lexicon, &rules).with_config(config(&args.engine));
    match engine.run(&nfc(&args.sentence)) {
        Ok(a) => {
            write!(out, "{}", render_trace(&a.trace))?;
            writeln!(out, "entry: {}", a.entry)?;
            match render_unl(&a, &args.engine, &registry) {
                Ok(text) => write!(out, "{text}")?,
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_FAILURES);
                }
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            if let Some(t) = e.trace() {
                write!(out, "{}", render_trace(t))?;
            }
            writeln!(err, "error: {e}")?;
            Ok(EXIT_FAILURES)
        }
    }
}

pub fn check(args: &PackArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let registry = Registry::builtin();
    let mut errors = 0usize;
    let mut parse_failed = false;

    let dicts = match sources(&args.dicts, (pack::DICTIONARY_NAME, pack::DICTIONARY)) {
        Ok(d) => d,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_CONFIG);
        }
    };
    let mut lexicon = Lexicon::default();
    for (name, text) in &dicts {
        match parse_dictionary(text, name) {
            Ok(lex) => {
                writeln!(out, "{name}: {} entries", lex.len())?;
                lexicon.extend(lex);
            }
            Err(e) => {
                writeln!(out, "error: {e}")?;
                errors += 1;
                parse_failed = true;
            }
        }
    }
    for (hw, count) in lexicon.duplicate_headwords() {
        writeln!(out, "note: headword {hw} has {count} entries")?;
    }

    let rule_files = match sources(&args.rules, (pack::RULES_NAME, pack::RULES)) {
        Ok(r) => r,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_CONFIG);
        }
    };
    for (name, text) in &rule_files {
        match parse_rules(text, name, &registry) {
            Ok(rules) => {
                writeln!(out, "{name}: {} rules", rules.len())?;
                for (line, label) in rules.unknown_labels(&registry) {
                    writeln!(out, "error: {name}:{line}: relation label `{label}` is not in the registry")?;
                    errors += 1;
                }
                for v in rules.band_violations() {
                    writeln!(out, "error: {name}: {v}")?;
                    errors += 1;
                }
            }
            Err(e) => {
                writeln!(out, "error: {e}")?;
                errors += 1;
                parse_failed = true;
            }
        }
    }
    writeln!(out, "{errors} errors")?;
    Ok(match (errors, parse_failed) {
        (0, _) => EXIT_OK,
        (_, true) => EXIT_CONFIG,
        _ => EXIT_FAILURES,
    })
}
