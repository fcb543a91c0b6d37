//! The `sharedcanvas` command line.
//!
//! Exit codes: 0 success, 1 invalid input or validation errors, 2 usage
//! error, 3 I/O error. Diagnostics go to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::description::{description_of, ingest, parse_description, to_json};
use crate::fixtures;
use crate::model::{Iri, Manifest};
use crate::rdf::{graph_to_model, model_to_graph, parse_turtle, serialize_turtle, Graph};
use crate::render::{render_manifest_html, RenderOptions};
use crate::resolve::{flatten_all, flatten_canvas, ChoicePolicy, Layer, PathPolicy, Q};
use crate::validate::{format_report, has_errors, validate_graph, validate_manifest, Severity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sharedcanvas", version, about = "Build, check and render canvas-based manuscript descriptions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a Turtle manifest from a JSON description.
    Build {
        description: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a Turtle manifest. Warnings only fail with --strict.
    Validate {
        input: PathBuf,
        #[arg(long)]
        strict: bool,
    },
    /// Print the render plan of one canvas.
    Resolve {
        input: PathBuf,
        #[arg(long)]
        canvas: String,
        /// Preferred option metadata, as key=value. Repeatable.
        #[arg(long = "policy", value_parser = parse_pair)]
        policy: Vec<(String, String)>,
        /// Display size used to choose between image options, as WxH.
        #[arg(long, value_parser = parse_viewport)]
        viewport: Option<(u32, u32)>,
    },
    /// Write SVG composites and HTML pages for every canvas.
    Render {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// How alternative paths are linearized: first, single or combined.
        #[arg(long, default_value = "first")]
        path_policy: PathPolicy,
        /// Output pixels per canvas unit, as an integer or a fraction like 1/2.
        #[arg(long, default_value = "1", value_parser = parse_scale)]
        scale: Q,
        /// Comma-separated layers to draw.
        #[arg(long, value_delimiter = ',', default_value = "image,text,commentary", value_parser = parse_layer)]
        layers: Vec<Layer>,
    },
    /// Re-parse and re-serialize; succeeds when the output is stable.
    Roundtrip { input: PathBuf },
    /// Write the bundled example manuscripts as Turtle and JSON.
    Fixtures {
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(format!("expected key=value, got `{s}`")),
    }
}

fn parse_viewport(s: &str) -> Result<(u32, u32), String> {
    let bad = || format!("expected WxH, got `{s}`");
    let (w, h) = s.split_once('x').ok_or_else(bad)?;
    let w: u32 = w.parse().map_err(|_| bad())?;
    let h: u32 = h.parse().map_err(|_| bad())?;
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

fn parse_scale(s: &str) -> Result<Q, String> {
    let bad = || format!("expected a positive integer or fraction, got `{s}`");
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if n <= 0 || d <= 0 {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

fn parse_layer(s: &str) -> Result<Layer, String> {
    match s {
        "image" => Ok(Layer::Image),
        "text" => Ok(Layer::Text),
        "commentary" => Ok(Layer::Commentary),
        other => Err(format!("unknown layer `{other}`")),
    }
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Io(m) => m,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_turtle(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_manifest(path: &Path) -> Result<Manifest, Failure> {
    graph_to_model(&load_graph(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::Io(e.to_string());
    match command {
        Command::Build { description, output } => {
            let doc = parse_description(&read(&description)?).map_err(invalid)?;
            let manifest = ingest(&doc).map_err(invalid)?;
            let diagnostics = validate_manifest(&manifest);
            err.write_all(format_report(&diagnostics).as_bytes()).map_err(io)?;
            write(&output, &serialize_turtle(&model_to_graph(&manifest)))?;
            Ok(if has_errors(&diagnostics) { EXIT_INVALID } else { EXIT_OK })
        }
        Command::Validate { input, strict } => {
            let graph = load_graph(&input)?;
            let mut diagnostics = validate_graph(&graph);
            if !has_errors(&diagnostics) {
                let manifest = graph_to_model(&graph).map_err(invalid)?;
                diagnostics.extend(validate_manifest(&manifest));
            }
            err.write_all(format_report(&diagnostics).as_bytes()).map_err(io)?;
            let failed = has_errors(&diagnostics) || (strict && diagnostics.iter().any(|d| d.severity == Severity::Warning));
            Ok(if failed { EXIT_INVALID } else { EXIT_OK })
        }
        Command::Resolve { input, canvas, policy, viewport } => {
            let manifest = load_manifest(&input)?;
            let canvas = Iri::new(canvas).map_err(invalid)?;
            let policy = ChoicePolicy { viewport, prefer: policy };
            let plan = flatten_canvas(&manifest, &canvas, &policy).map_err(invalid)?;
            out.write_all(plan.to_text().as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Render { input, output, path_policy, scale, layers } => {
            let manifest = load_manifest(&input)?;
            let opts = RenderOptions::new(scale, layers.into_iter().collect(), path_policy).map_err(invalid)?;
            let plans = flatten_all(&manifest, &ChoicePolicy::default()).map_err(invalid)?;
            let files = render_manifest_html(&manifest, &plans, &opts).map_err(invalid)?;
            for (path, text) in &files {
                write(&output.join(path), text)?;
            }
            writeln!(out, "wrote {} files to {}", files.len(), output.display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Roundtrip { input } => {
            let first = serialize_turtle(&load_graph(&input)?);
            let second = serialize_turtle(&parse_turtle(&first).map_err(invalid)?);
            if first == second {
                out.write_all(first.as_bytes()).map_err(io)?;
                Ok(EXIT_OK)
            } else {
                writeln!(err, "{}: serialization is not stable after one pass", input.display()).map_err(io)?;
                Ok(EXIT_INVALID)
            }
        }
        Command::Fixtures { output } => {
            for (name, manifest) in fixtures::all() {
                write(&output.join(format!("{name}.ttl")), &serialize_turtle(&model_to_graph(&manifest)))?;
                let doc = description_of(&manifest).map_err(invalid)?;
                write(&output.join(format!("{name}.json")), &to_json(&doc))?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

/// Runs the command line on the process's standard streams. `argv`
/// includes the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    run_with(argv, &mut out, &mut err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("sharedcanvas").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&[]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["resolve", "x.ttl"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["resolve", "x.ttl", "--canvas", "c", "--viewport", "10"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["render", "x.ttl", "-o", "d", "--scale", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn missing_input_is_io() {
        let (code, _, err) = run_capture(&["validate", "/nonexistent/in.ttl"]);
        assert_eq!(code, EXIT_IO);
        assert!(err.starts_with("error: cannot read"));
    }

    #[test]
    fn value_parsers() {
        assert_eq!(parse_viewport("640x480"), Ok((640, 480)));
        assert!(parse_viewport("0x4").is_err());
        assert_eq!(parse_scale("3/6"), Ok(Q::new(1, 2)));
        assert_eq!(parse_pair("lighting=raking"), Ok(("lighting".into(), "raking".into())));
        assert!(parse_pair("=x").is_err());
    }
}
