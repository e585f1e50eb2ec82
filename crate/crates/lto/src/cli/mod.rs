//! The `lto` command line.
//!
//! Exit codes: 0 success, 1 validation found problems, 2 usage error (bad
//! flags, unknown theme or story, invalid parameters), 3 unreadable input or
//! an ontology that does not build. Data goes to the output stream and
//! diagnostics to the error stream.

mod output;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use lto_core::analytics::{self, StorySet};
use lto_core::exact::Correction;
use lto_core::{Diagnostic, StoryId, ValidationReport};

pub use output::{format_significant, Cell, Format, Table};

use crate::snapshot;
use crate::textio::{export_owl, load_corpus_from_sources, validate_sources, LoadError, LoadedCorpus, Source};

/// Environment variable consulted when no `--themes` is given.
pub const THEME_PATH_VAR: &str = "LTO_THEME_PATH";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FATAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lto", about = "Validate, query and analyse literary theme ontologies", disable_version_flag = true)]
pub struct Cli {
    /// Theme document; repeatable. Defaults to the paths in LTO_THEME_PATH.
    #[arg(long = "themes", global = true, value_name = "FILE")]
    pub themes: Vec<PathBuf>,
    /// Use the bundled ontology snapshot as a theme document.
    #[arg(long, global = true)]
    pub snapshot: bool,
    /// Story annotation document; repeatable.
    #[arg(long = "stories", global = true, value_name = "FILE")]
    pub stories: Vec<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Print toolkit and snapshot versions.
    #[arg(long)]
    pub version: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check structure and report curation warnings.
    Validate {
        /// Also report missing references and upper-level naming; warnings fail.
        #[arg(long)]
        strict: bool,
    },
    /// Validate with every lint enabled.
    Lint,
    /// Class counts, depth and branch sizes.
    Stats,
    /// Closure queries.
    #[command(subcommand)]
    Query(Query),
    /// Case-insensitive search over names, aliases and definitions.
    Search { text: String },
    /// Themes over-represented in a set of stories.
    Enrich {
        /// File listing query story ids, one per line.
        #[arg(long, value_name = "FILE")]
        query: PathBuf,
        /// File listing background story ids; defaults to every story.
        #[arg(long, value_name = "FILE")]
        background: Option<PathBuf>,
        #[command(flatten)]
        testing: Testing,
    },
    /// Themes whose usage differs between two groups of stories.
    Diff {
        #[arg(long = "group-a", value_name = "FILE")]
        group_a: PathBuf,
        /// Defaults to every story outside group A.
        #[arg(long = "group-b", value_name = "FILE")]
        group_b: Option<PathBuf>,
        #[command(flatten)]
        testing: Testing,
    },
    /// Similarity of two stories.
    Similar { a: String, b: String },
    /// Stories most similar to the given one.
    Recommend {
        story: String,
        #[arg(short, long, default_value_t = 10)]
        k: usize,
    },
    /// Group stories by shared themes.
    Cluster {
        /// Largest distance (1 - similarity) at which clusters still merge.
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
    },
    /// Write the ontology as OWL functional syntax.
    ExportOwl,
}

#[derive(Debug, Subcommand)]
pub enum Query {
    Ancestors { theme: String },
    Descendants { theme: String },
    Subsumes { general: String, specific: String },
}

#[derive(Debug, Args)]
pub struct Testing {
    /// Skip themes with fewer hits than this.
    #[arg(long = "min-count", default_value_t = 2)]
    pub min_count: usize,
    /// Adjust with Bonferroni instead of Benjamini-Hochberg.
    #[arg(long)]
    pub bonferroni: bool,
}

impl Testing {
    fn correction(&self) -> Correction {
        if self.bonferroni {
            Correction::Bonferroni
        } else {
            Correction::BenjaminiHochberg
        }
    }
}

/// Reason a command stopped early, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Load(LoadError),
    Io(std::io::Error),
}

impl From<lto_core::Error> for Failure {
    fn from(error: lto_core::Error) -> Self {
        Failure::Usage(format!("{}: {error}", error.code()))
    }
}

impl From<LoadError> for Failure {
    fn from(error: LoadError) -> Self {
        Failure::Load(error)
    }
}

impl From<std::io::Error> for Failure {
    fn from(error: std::io::Error) -> Self {
        Failure::Io(error)
    }
}

pub fn version_line() -> String {
    let manifest = snapshot::manifest();
    format!(
        "lto {} (snapshot {}, {} classes)",
        env!("CARGO_PKG_VERSION"),
        manifest.version,
        manifest.class_count
    )
}

/// Runs the command line against the given streams and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    if cli.version {
        let _ = writeln!(out, "{}", version_line());
        return EXIT_OK;
    }
    let Some(command) = &cli.command else {
        let _ = writeln!(err, "error: a subcommand is required; see `lto --help`");
        return EXIT_USAGE;
    };
    match dispatch(&cli, command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
        Err(Failure::Load(LoadError::Ontology { report })) => {
            print_diagnostics(err, &report.issues);
            let _ = writeln!(err, "error: the ontology does not build ({} errors)", report.error_count);
            EXIT_FATAL
        }
        Err(Failure::Load(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FATAL
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FATAL
        }
    }
}

fn theme_paths(cli: &Cli) -> Vec<PathBuf> {
    if !cli.themes.is_empty() {
        return cli.themes.clone();
    }
    match std::env::var_os(THEME_PATH_VAR) {
        Some(value) => std::env::split_paths(&value).filter(|p| !p.as_os_str().is_empty()).collect(),
        None => Vec::new(),
    }
}

fn read_all(paths: &[PathBuf]) -> Result<Vec<Source>, LoadError> {
    paths.iter().map(|p| Source::read(p)).collect()
}

fn theme_sources(cli: &Cli) -> Result<Vec<Source>, Failure> {
    let paths = theme_paths(cli);
    if paths.is_empty() && !cli.snapshot {
        return Err(Failure::Usage(format!("no theme document given; use --themes, --snapshot or {THEME_PATH_VAR}")));
    }
    let mut sources = Vec::new();
    if cli.snapshot {
        sources.push(Source::new(snapshot::SOURCE_NAME, snapshot::THEMES));
    }
    sources.extend(read_all(&paths)?);
    Ok(sources)
}

fn load(cli: &Cli, err: &mut dyn Write) -> Result<LoadedCorpus, Failure> {
    let themes = theme_sources(cli)?;
    let stories = read_all(&cli.stories)?;
    let loaded = load_corpus_from_sources(&themes, &stories)?;
    print_diagnostics(err, &loaded.diagnostics);
    Ok(loaded)
}

fn print_diagnostics(err: &mut dyn Write, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        let _ = writeln!(err, "{d}");
    }
}

/// Story ids listed one per line; blank lines and `#` comments are skipped.
fn read_story_set(path: &Path) -> Result<StorySet, Failure> {
    let source = Source::read(path)?;
    let mut set = BTreeSet::new();
    for (number, line) in source.text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let id = StoryId::new(line)
            .ok_or_else(|| Failure::Usage(format!("{}:{}: invalid story id {line:?}", source.name, number + 1)))?;
        set.insert(id);
    }
    Ok(set)
}

fn dispatch(cli: &Cli, command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let table = match command {
        Command::Validate { strict } => return validate_command(cli, *strict, out, err),
        Command::Lint => return validate_command(cli, true, out, err),
        Command::Stats => stats(&load(cli, err)?),
        Command::Query(query) => query_command(&load(cli, err)?, query)?,
        Command::Search { text } => search(&load(cli, err)?, text)?,
        Command::Enrich { query, background, testing } => {
            let loaded = load(cli, err)?;
            let query = read_story_set(query)?;
            let background = background.as_deref().map(read_story_set).transpose()?;
            enrich(&loaded, &query, background.as_ref(), testing)?
        }
        Command::Diff { group_a, group_b, testing } => {
            let loaded = load(cli, err)?;
            let group_a = read_story_set(group_a)?;
            let group_b = match group_b {
                Some(path) => read_story_set(path)?,
                None => loaded.corpus.ids().filter(|id| !group_a.contains(*id)).cloned().collect(),
            };
            diff(&loaded, &group_a, &group_b, testing)?
        }
        Command::Similar { a, b } => {
            let loaded = load(cli, err)?;
            let value = analytics::story_similarity(&loaded.corpus, &loaded.ontology, a, b)?;
            let mut table = Table::new(&["story_a", "story_b", "similarity"]);
            table.push(vec![a.as_str().into(), b.as_str().into(), value.into()]);
            table
        }
        Command::Recommend { story, k } => {
            let loaded = load(cli, err)?;
            let mut table = Table::new(&["rank", "story", "similarity"]);
            for (rank, (id, value)) in analytics::recommend(&loaded.corpus, &loaded.ontology, story, *k)?
                .into_iter()
                .enumerate()
            {
                table.push(vec![(rank + 1).into(), id.as_str().into(), value.into()]);
            }
            table
        }
        Command::Cluster { threshold } => {
            let loaded = load(cli, err)?;
            let mut table = Table::new(&["cluster", "story"]);
            for cluster in analytics::agglomerative_cluster(&loaded.corpus, &loaded.ontology, *threshold)? {
                let label = cluster[0].as_str().to_string();
                for id in &cluster {
                    table.push(vec![label.clone().into(), id.as_str().into()]);
                }
            }
            table
        }
        Command::ExportOwl => {
            let loaded = load(cli, err)?;
            let document = export_owl(&loaded.ontology);
            match cli.format {
                Format::Tsv => out.write_all(document.as_bytes())?,
                Format::JsonLines => {
                    let mut table = Table::new(&["format", "document"]);
                    table.push(vec!["owl-functional".into(), document.into()]);
                    table.write(Format::JsonLines, out)?;
                }
            }
            return Ok(EXIT_OK);
        }
    };
    table.write(cli.format, out)?;
    Ok(EXIT_OK)
}

fn validate_command(cli: &Cli, strict: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let themes = theme_sources(cli)?;
    let stories = read_all(&cli.stories)?;
    let checked = validate_sources(&themes, &stories, strict);
    let report: &ValidationReport = &checked.report;
    print_diagnostics(err, &report.issues);
    match cli.format {
        Format::Tsv => {
            let stories = if cli.stories.is_empty() {
                String::new()
            } else {
                format!("{} stories, ", checked.story_count)
            };
            writeln!(
                out,
                "{} themes, {stories}{} errors, {} warnings",
                checked.theme_count, report.error_count, report.warning_count
            )?;
        }
        Format::JsonLines => {
            let mut table = Table::new(&["themes", "stories", "errors", "warnings"]);
            table.push(vec![
                checked.theme_count.into(),
                checked.story_count.into(),
                report.error_count.into(),
                report.warning_count.into(),
            ]);
            table.write(Format::JsonLines, out)?;
        }
    }
    let failed = report.error_count > 0 || (strict && report.warning_count > 0);
    Ok(if failed { EXIT_INVALID } else { EXIT_OK })
}

fn stats(loaded: &LoadedCorpus) -> Table {
    let stats = loaded.ontology.stats();
    let mut table = Table::new(&["stat", "subject", "value"]);
    let mut put = |stat: &str, subject: Cell, value: usize| table.push(vec![stat.into(), subject, value.into()]);
    put("class_count", Cell::Empty, stats.class_count);
    put("leaf_count", Cell::Empty, stats.leaf_count);
    put("max_depth", Cell::Empty, stats.max_depth);
    put("multi_parent_count", Cell::Empty, stats.multi_parent_count);
    put("root_children", loaded.ontology.root().as_str().into(), stats.root_branch_sizes.len());
    for (branch, size) in &stats.root_branch_sizes {
        put("root_branch_size", branch.as_str().into(), *size);
    }
    if !loaded.corpus.is_empty() {
        put("story_count", Cell::Empty, loaded.corpus.len());
    }
    table
}

fn query_command(loaded: &LoadedCorpus, query: &Query) -> Result<Table, Failure> {
    let ontology = &loaded.ontology;
    let closure = match query {
        Query::Ancestors { theme } => ontology.ancestors(theme)?,
        Query::Descendants { theme } => ontology.descendants(theme)?,
        Query::Subsumes { general, specific } => {
            let holds = ontology.subsumes(general, specific)?;
            let mut table = Table::new(&["general", "specific", "subsumes"]);
            table.push(vec![
                ontology.resolve(general)?.as_str().into(),
                ontology.resolve(specific)?.as_str().into(),
                holds.into(),
            ]);
            return Ok(table);
        }
    };
    let mut table = Table::new(&["theme", "depth"]);
    for name in closure {
        table.push(vec![name.as_str().into(), ontology.depth(name)?.into()]);
    }
    Ok(table)
}

fn search(loaded: &LoadedCorpus, text: &str) -> Result<Table, Failure> {
    if text.trim().is_empty() {
        return Err(Failure::Usage("search text must not be empty".into()));
    }
    let mut table = Table::new(&["theme", "field", "score"]);
    for hit in loaded.ontology.search(text) {
        table.push(vec![hit.name.as_str().into(), hit.field.as_str().into(), hit.score.into()]);
    }
    Ok(table)
}

fn enrich(
    loaded: &LoadedCorpus,
    query: &StorySet,
    background: Option<&StorySet>,
    testing: &Testing,
) -> Result<Table, Failure> {
    let rows = analytics::enrich(
        &loaded.corpus,
        &loaded.ontology,
        query,
        background,
        testing.min_count,
        testing.correction(),
    )?;
    let mut table = Table::new(&["theme", "k", "n", "K", "N", "p", "q"]);
    for row in rows {
        table.push(vec![
            row.theme.as_str().into(),
            row.query_hits.into(),
            row.query_size.into(),
            row.background_hits.into(),
            row.background_size.into(),
            row.p.into(),
            row.q.into(),
        ]);
    }
    Ok(table)
}

fn diff(loaded: &LoadedCorpus, group_a: &StorySet, group_b: &StorySet, testing: &Testing) -> Result<Table, Failure> {
    let rows = analytics::differential_usage(
        &loaded.corpus,
        &loaded.ontology,
        group_a,
        group_b,
        testing.min_count,
        testing.correction(),
    )?;
    let mut table = Table::new(&["theme", "a_hits", "a_size", "b_hits", "b_size", "p", "q"]);
    for row in rows {
        table.push(vec![
            row.theme.as_str().into(),
            row.a_hits.into(),
            row.a_size.into(),
            row.b_hits.into(),
            row.b_size.into(),
            row.p.into(),
            row.q.into(),
        ]);
    }
    Ok(table)
}
