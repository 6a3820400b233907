use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser};
use serde::Deserialize;

use varnamer_core::ast::offset_of;
use varnamer_core::eval::{analyze_contexts, evaluate, load_dataset};
use varnamer_core::generation::default_verbs;
use varnamer_core::homogeneous::{ScopeLevel, SearchScope};
use varnamer_core::mining::{
    mine_naming_rules, mine_universal_initializations, Corpus, CurationList, MiningConfig,
};
use varnamer_core::recommend::{recommend, resolve_site, RecommenderConfig};
use varnamer_core::reuse::{ReuseConfig, UniversalInitializationSet};
use varnamer_core::rules::RuleSet;
use varnamer_core::{parse_unit, AstNode, CompilationUnit, Span};

#[derive(Parser)]
#[command(name = "varnamer", version, about = "Variable name recommendation for extract-local-variable refactorings")]
enum Cli {
    /// Parse a source file; debugging aid.
    Parse {
        file: PathBuf,
        /// Print the indented kind/span tree.
        #[arg(long)]
        dump_ast: bool,
    },
    /// Recommend a name for the expression at the given span.
    Recommend {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        line: usize,
        #[arg(long)]
        col: usize,
        #[arg(long)]
        end_line: usize,
        #[arg(long)]
        end_col: usize,
        #[arg(long, value_enum, default_value = "document")]
        scope: ScopeArg,
        /// Root directory for package/project scopes.
        #[arg(long)]
        scope_root: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Mine naming rules and universal initializations from a corpus.
    Mine {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 50)]
        min_support: u64,
        #[arg(long, default_value_t = 0.8)]
        min_confidence: f64,
        #[arg(long, default_value_t = 80)]
        project_num: usize,
        #[arg(long)]
        rules_out: PathBuf,
        #[arg(long)]
        universal_out: PathBuf,
        #[arg(long)]
        curation: Option<PathBuf>,
    },
    /// Run the recommender over a JSONL dataset and report exact-match metrics.
    Evaluate {
        #[arg(long)]
        dataset: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Context-hitting analysis over a JSONL dataset.
    Analyze {
        #[arg(long)]
        dataset: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ScopeArg {
    Document,
    Package,
    Project,
}

#[derive(Args)]
struct EngineArgs {
    /// Naming rules JSON; the built-in curated set when omitted.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Universal initializations, one canonical text per line.
    #[arg(long)]
    universal: Option<PathBuf>,
    /// Verb list for the default invocation heuristic, one per line.
    #[arg(long)]
    verbs: Option<PathBuf>,
    /// TOML config with `fg_sim` / `ini_length` keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    fg_sim: Option<f64>,
    #[arg(long)]
    ini_length: Option<usize>,
}

#[derive(Deserialize, Default)]
struct FileConfig {
    fg_sim: Option<f64>,
    ini_length: Option<usize>,
}

impl EngineArgs {
    fn build(&self) -> Result<RecommenderConfig> {
        let mut reuse = ReuseConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let cfg: FileConfig = toml::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))?;
            if let Some(v) = cfg.fg_sim {
                reuse.fg_sim = v;
            }
            if let Some(v) = cfg.ini_length {
                reuse.ini_length = v;
            }
        }
        if let Some(v) = self.fg_sim {
            reuse.fg_sim = v;
        }
        if let Some(v) = self.ini_length {
            reuse.ini_length = v;
        }

        let rules = match &self.rules {
            Some(path) => RuleSet::load(path)
                .with_context(|| format!("loading rules {}", path.display()))?,
            None => RuleSet::builtin(),
        };
        let universal = match &self.universal {
            Some(path) => UniversalInitializationSet::load(path)
                .with_context(|| format!("loading universal set {}", path.display()))?,
            None => UniversalInitializationSet::builtin(),
        };
        let verbs = match &self.verbs {
            Some(path) => std::fs::read_to_string(path)
                .with_context(|| format!("loading verbs {}", path.display()))?
                .lines()
                .map(|l| l.trim().to_string())
                .filter(|l| !l.is_empty())
                .collect(),
            None => default_verbs(),
        };
        Ok(RecommenderConfig {
            reuse,
            rules,
            universal,
            verbs,
        })
    }
}

fn main() -> Result<()> {
    match Cli::parse() {
        Cli::Parse { file, dump_ast } => cmd_parse(&file, dump_ast),
        Cli::Recommend {
            file,
            line,
            col,
            end_line,
            end_col,
            scope,
            scope_root,
            engine,
        } => cmd_recommend(&file, (line, col, end_line, end_col), scope, scope_root, &engine),
        Cli::Mine {
            corpus,
            min_support,
            min_confidence,
            project_num,
            rules_out,
            universal_out,
            curation,
        } => cmd_mine(
            &corpus,
            MiningConfig {
                min_support,
                min_confidence,
                project_num,
            },
            &rules_out,
            &universal_out,
            curation.as_deref(),
        ),
        Cli::Evaluate { dataset, engine } => {
            let cfg = engine.build()?;
            let load = load_dataset(&dataset)?;
            let report = evaluate(&load.instances, &cfg);
            emit(&format!("{}\n", serde_json::to_string_pretty(&report)?))
        }
        Cli::Analyze { dataset } => {
            let load = load_dataset(&dataset)?;
            let report = analyze_contexts(&load.instances);
            emit(&format!("{}\n", serde_json::to_string_pretty(&report)?))
        }
    }
}

/// Writes to stdout, treating a closed pipe (e.g. `| head`) as success.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        Err(err) if err.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        other => other.map_err(Into::into),
    }
}

fn cmd_parse(file: &Path, dump_ast: bool) -> Result<()> {
    let source = std::fs::read_to_string(file)
        .with_context(|| format!("reading {}", file.display()))?;
    let unit = parse_unit(&source, &file.display().to_string())?;
    if dump_ast {
        let mut out = String::new();
        dump(&unit.root, 0, &mut out);
        emit(&out)
    } else {
        emit(&format!(
            "{}: {} methods, {} nodes\n",
            unit.path,
            unit.methods.len(),
            unit.root.walk().count()
        ))
    }
}

fn dump(node: &AstNode, depth: usize, out: &mut String) {
    use std::fmt::Write;
    let _ = writeln!(
        out,
        "{:indent$}{} @ {}",
        "",
        node.kind,
        node.span,
        indent = depth * 2
    );
    for child in &node.children {
        dump(child, depth + 1, out);
    }
}

fn cmd_recommend(
    file: &Path,
    (line, col, end_line, end_col): (usize, usize, usize, usize),
    scope_arg: ScopeArg,
    scope_root: Option<PathBuf>,
    engine: &EngineArgs,
) -> Result<()> {
    let source = std::fs::read_to_string(file)
        .with_context(|| format!("reading {}", file.display()))?;
    let path_label = file.display().to_string();
    let unit = parse_unit(&source, &path_label)?;

    let start = offset_of(&source, line, col)
        .with_context(|| format!("position {line}:{col} is outside {path_label}"))?;
    let end = offset_of(&source, end_line, end_col)
        .with_context(|| format!("position {end_line}:{end_col} is outside {path_label}"))?;

    let scope = build_scope(scope_arg, scope_root.as_deref(), file, unit)?;
    let site_unit = scope
        .units
        .iter()
        .find(|u| u.path == path_label)
        .expect("site unit is in scope by construction");
    let site = resolve_site(site_unit, Span::new(start, end))?;

    let cfg = engine.build()?;
    let report = recommend(&site, &scope, &cfg);
    emit(&format!("{}\n", serde_json::to_string(&report)?))
}

fn build_scope(
    scope_arg: ScopeArg,
    scope_root: Option<&Path>,
    file: &Path,
    unit: CompilationUnit,
) -> Result<SearchScope> {
    let (level, root) = match scope_arg {
        ScopeArg::Document => return Ok(SearchScope::document(unit)),
        ScopeArg::Package => {
            let dir = file.parent().map(Path::to_path_buf).unwrap_or_default();
            (ScopeLevel::Package, scope_root.map(Path::to_path_buf).unwrap_or(dir))
        }
        ScopeArg::Project => {
            let Some(root) = scope_root else {
                bail!("--scope project requires --scope-root");
            };
            (ScopeLevel::Project, root.to_path_buf())
        }
    };

    let mut units = vec![unit];
    let walker: Box<dyn Iterator<Item = PathBuf>> = match level {
        // Package scope: the file's directory only, no recursion.
        ScopeLevel::Package => Box::new(
            std::fs::read_dir(&root)
                .with_context(|| format!("reading {}", root.display()))?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.is_file()),
        ),
        _ => Box::new(
            walkdir::WalkDir::new(&root)
                .sort_by_file_name()
                .into_iter()
                .filter_map(|e| e.ok())
                .map(|e| e.path().to_path_buf())
                .filter(|p| p.is_file()),
        ),
    };
    for path in walker {
        if path.extension().map(|e| e == "java").unwrap_or(false) {
            let label = path.display().to_string();
            if units.iter().any(|u| u.path == label) {
                continue;
            }
            if let Ok(text) = std::fs::read_to_string(&path) {
                if let Ok(parsed) = parse_unit(&text, &label) {
                    units.push(parsed);
                }
            }
        }
    }
    Ok(SearchScope::new(level, units))
}

fn cmd_mine(
    corpus_dir: &Path,
    cfg: MiningConfig,
    rules_out: &Path,
    universal_out: &Path,
    curation: Option<&Path>,
) -> Result<()> {
    let (corpus, warnings) = Corpus::load_dir(corpus_dir)?;
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }
    let curation = match curation {
        Some(path) => CurationList::load(path)
            .with_context(|| format!("loading curation {}", path.display()))?,
        None => CurationList::permissive(),
    };

    let rules = mine_naming_rules(&corpus, &cfg, &curation);
    rules.save(rules_out)?;
    let universal = mine_universal_initializations(&corpus, cfg.project_num);
    universal.save(universal_out)?;
    eprintln!(
        "mined {} rules and {} universal initializations from {} projects",
        rules.len(),
        universal.len(),
        corpus.projects.len()
    );
    Ok(())
}
