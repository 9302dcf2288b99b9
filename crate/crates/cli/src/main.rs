use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use metasrl::catalogue::bundled;
use metasrl::{conll, dot, kg, penman, turtle, ucca, xml};
use metasrl::{ConceptCatalogue, SemanticGraph, Validation};

const EXIT_VIOLATIONS: u8 = 1;
const EXIT_FAILURE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "metasrl", version, about = "Build, convert, validate and render semantic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert an annotation file into a semantic graph.
    Convert {
        #[arg(long, value_enum)]
        from: InputFormat,
        #[arg(long, value_enum, default_value = "xml")]
        to: OutputFormat,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Emit all graphs of the input as one graph. With `--combine=false`
        /// each connected component goes to its own `-NN` suffixed file.
        #[arg(long, action = ArgAction::Set, default_value_t = true, num_args = 0..=1, default_missing_value = "true")]
        combine: bool,
        /// Language for CoNLL sentences without a `# lang` comment.
        #[arg(long)]
        lang: Option<String>,
    },
    /// Check a graph XML file and print one violation per line.
    Validate {
        input: PathBuf,
        /// Catalogue XML file, or the name of a bundled catalogue.
        #[arg(long)]
        catalogue: Option<String>,
        /// Also check concepts and roles against the catalogue.
        #[arg(long, requires = "catalogue")]
        strict: bool,
    },
    /// Render a graph XML file as DOT.
    Render {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Inspect concept catalogues.
    Catalogue {
        #[command(subcommand)]
        command: CatalogueCommand,
    },
}

#[derive(Subcommand)]
enum CatalogueCommand {
    /// Print concept signatures, from a file or bundled catalogue (default: all bundled).
    List { source: Option<String> },
    /// Print a bundled catalogue as XML.
    Dump {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Amr,
    Umr,
    Ttl,
    Conll,
    Ucca,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Xml,
    Dot,
}

/// A failure reported on stderr with exit code 2.
struct Failure(String);

impl<E: fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("metasrl: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Convert {
            from,
            to,
            input,
            output,
            combine,
            lang,
        } => {
            let text = read(&input)?;
            let graph = convert(from, &text, lang.as_deref())?;
            if combine {
                write_output(output.as_deref(), &serialize(&graph, to)?)?;
                return Ok(0);
            }
            let Some(output) = output else {
                eprintln!("metasrl: --combine=false needs --output");
                return Ok(EXIT_USAGE);
            };
            for (i, part) in graph.components().iter().enumerate() {
                write_output(Some(&numbered(&output, i + 1)), &serialize(part, to)?)?;
            }
            Ok(0)
        }
        Command::Validate {
            input,
            catalogue,
            strict,
        } => {
            let graph = xml::from_xml(&read(&input)?).map_err(|e| located(&input, e))?;
            let catalogue = catalogue.map(|c| load_catalogue(&c)).transpose()?;
            let mode = match &catalogue {
                Some(c) if strict => Validation::Strict(c),
                _ => Validation::Lax,
            };
            let violations = graph.validate(mode);
            let mut out = io::stdout().lock();
            for v in &violations {
                writeln!(out, "{v}")?;
            }
            Ok(if violations.is_empty() { 0 } else { EXIT_VIOLATIONS })
        }
        Command::Render { input, output } => {
            let graph = xml::from_xml(&read(&input)?).map_err(|e| located(&input, e))?;
            write_output(output.as_deref(), &dot::to_dot(&graph)?)?;
            Ok(0)
        }
        Command::Catalogue { command } => match command {
            CatalogueCommand::List { source } => {
                let mut out = io::stdout().lock();
                match source {
                    Some(s) => list(&mut out, &load_catalogue(&s)?)?,
                    None => {
                        for name in bundled::NAMES {
                            writeln!(out, "[{name}]")?;
                            list(&mut out, &bundled::by_name(name).expect("listed"))?;
                        }
                    }
                }
                Ok(0)
            }
            CatalogueCommand::Dump { name, output } => {
                let catalogue =
                    bundled::by_name(&name).ok_or_else(|| Failure(format!("no bundled catalogue named {name:?}")))?;
                let mut text = xml::catalogue_to_xml(&catalogue)?;
                text.push('\n');
                write_output(output.as_deref(), &text)?;
                Ok(0)
            }
        },
    }
}

fn convert(from: InputFormat, text: &str, lang: Option<&str>) -> Result<SemanticGraph, Failure> {
    Ok(match from {
        InputFormat::Amr => penman::amrs_to_graph(&penman::parse_amr_file(text)?),
        InputFormat::Umr => penman::umr_to_graph(&penman::parse_umr(text)?)?,
        InputFormat::Ttl => kg::events_to_graph(&turtle::parse_turtle(text)?),
        InputFormat::Conll => {
            let sentences = conll::parse_conll_with_language(text, lang.unwrap_or(conll::DEFAULT_LANGUAGE))?;
            let mut graph = SemanticGraph::new();
            for s in &sentences {
                conll::causation_into(s, &mut graph)?;
            }
            graph
        }
        InputFormat::Ucca => ucca::ucca_to_graph(&ucca::parse_ucca(text)?),
    })
}

fn serialize(graph: &SemanticGraph, to: OutputFormat) -> Result<String, Failure> {
    Ok(match to {
        OutputFormat::Xml => xml::to_xml(graph)? + "\n",
        OutputFormat::Dot => dot::to_dot(graph)?,
    })
}

fn list(out: &mut impl Write, catalogue: &ConceptCatalogue) -> io::Result<()> {
    for def in catalogue.iter() {
        writeln!(out, "{def}")?;
    }
    Ok(())
}

fn load_catalogue(source: &str) -> Result<ConceptCatalogue, Failure> {
    let path = Path::new(source);
    if !path.exists() {
        if let Some(c) = bundled::by_name(source) {
            return Ok(c);
        }
    }
    xml::catalogue_from_xml(&read(path)?).map_err(|e| located(path, e))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: xml::XmlError) -> Failure {
    Failure(format!("{}: {e}", path.display()))
}

/// `out.xml` -> `out-03.xml`.
fn numbered(path: &Path, n: usize) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{n:02}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{n:02}"),
    };
    path.with_file_name(name)
}

/// Writes to `path` through a temporary file in the same directory, or to
/// stdout.
fn write_output(path: Option<&Path>, data: &str) -> Result<(), Failure> {
    let Some(path) = path else {
        io::stdout().lock().write_all(data.as_bytes())?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: &dyn fmt::Display| Failure(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(data.as_bytes()).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}
