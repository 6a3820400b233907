//! Reuse-based recommendation: decide whether a homogeneous variable's name
//! can be copied for the extraction site. A coarse filter drops universal
//! initializations outright; the fine-grained validator then accepts
//! candidates by initialization length or by statement-context similarity,
//! and ranks survivors by method similarity.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ast::{AstNode, CompilationUnit, MethodView};
use crate::error::Result;
use crate::homogeneous::{canonicalize_initialization, canonicalize_text, HomogeneousVariable};
use crate::similarity::{context_similarity, literal_similarity, structural_similarity};
use crate::vdg::build_vdg;

/// Tunable thresholds of the fine-grained validator.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReuseConfig {
    /// Context-similarity threshold a dependent node must exceed.
    #[serde(default = "default_fg_sim")]
    pub fg_sim: f64,
    /// Character length above which an initialization is reliable by itself.
    #[serde(default = "default_ini_length")]
    pub ini_length: usize,
}

fn default_fg_sim() -> f64 {
    0.3
}

fn default_ini_length() -> usize {
    30
}

impl Default for ReuseConfig {
    fn default() -> Self {
        ReuseConfig {
            fg_sim: default_fg_sim(),
            ini_length: default_ini_length(),
        }
    }
}

/// Canonical initialization texts for which name reuse is disabled.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UniversalInitializationSet {
    entries: BTreeSet<String>,
}

impl UniversalInitializationSet {
    pub fn new(entries: impl IntoIterator<Item = String>) -> Self {
        UniversalInitializationSet {
            entries: entries.into_iter().collect(),
        }
    }

    /// The set shipped with the tool; replaced by a mined set when one is
    /// provided.
    pub fn builtin() -> Self {
        Self::new(
            ["null", "0", "1", "true", "false", "new StringBuilder()"]
                .into_iter()
                .map(canonicalize_text),
        )
    }

    pub fn contains(&self, canonical: &str) -> bool {
        self.entries.contains(canonical)
    }

    pub fn insert(&mut self, canonical: String) {
        self.entries.insert(canonical);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.entries.iter()
    }

    /// One canonical initialization per line.
    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let mut entries = BTreeSet::new();
        for line in BufReader::new(file).lines() {
            let line = line?;
            let line = line.trim();
            if !line.is_empty() {
                entries.insert(line.to_string());
            }
        }
        Ok(UniversalInitializationSet { entries })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        for entry in &self.entries {
            writeln!(file, "{entry}")?;
        }
        Ok(())
    }
}

/// True iff the canonical initialization text is universal; reuse is then
/// deactivated for the site.
pub fn is_universal_initialization(init: &str, set: &UniversalInitializationSet) -> bool {
    set.contains(init)
}

/// The expression being extracted, in context.
#[derive(Debug, Clone, Copy)]
pub struct ExtractionSite<'a> {
    /// The initialization: the expression to extract.
    pub expression: &'a AstNode,
    /// Innermost statement containing the expression.
    pub parent_statement: &'a AstNode,
    pub enclosing_method: &'a MethodView,
    pub unit: &'a CompilationUnit,
}

/// Verdict of the fine-grained validator for one homogeneous variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "score")]
pub enum ReuseDecision {
    /// The initialization is long enough to be reliable on its own.
    ReliableByLength,
    /// The best dependent node's context similarity exceeded the threshold.
    ReliableByContext(f64),
    Rejected,
}

impl ReuseDecision {
    pub fn is_reliable(&self) -> bool {
        !matches!(self, ReuseDecision::Rejected)
    }
}

/// Applies the fine-grained validator to one candidate. The coarse filter
/// must already have passed (the initialization is not universal).
pub fn validate_candidate(
    site: &ExtractionSite<'_>,
    hv: &HomogeneousVariable<'_>,
    cfg: &ReuseConfig,
) -> ReuseDecision {
    let init_chars = site.expression.text().chars().count();
    if init_chars > cfg.ini_length {
        return ReuseDecision::ReliableByLength;
    }
    let vdg = match build_vdg(hv.unit, hv.enclosing_method, hv) {
        Ok(vdg) => vdg,
        Err(_) => return ReuseDecision::Rejected,
    };
    let best = vdg
        .dependent_nodes()
        .iter()
        .map(|vdn| context_similarity(site.parent_statement, vdn))
        .fold(None::<f64>, |acc, s| {
            Some(acc.map_or(s, |a| a.max(s)))
        });
    match best {
        Some(score) if score > cfg.fg_sim => ReuseDecision::ReliableByContext(score),
        _ => ReuseDecision::Rejected,
    }
}

/// Eqs. applied at method granularity: dice over the two declaration
/// subtrees, normalized edit distance over the full method texts, averaged.
pub fn method_similarity(
    site_unit: &CompilationUnit,
    site_method: &MethodView,
    hv_unit: &CompilationUnit,
    hv_method: &MethodView,
) -> f64 {
    let a = site_unit.method_decl(site_method);
    let b = hv_unit.method_decl(hv_method);
    0.5 * structural_similarity(a, b) + 0.5 * literal_similarity(a, b)
}

/// Trace of one candidate's validation, kept for diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct CandidateTrace {
    pub name: String,
    pub unit_path: String,
    pub decision: ReuseDecision,
    /// Only computed for surviving candidates; fields score 0.
    pub method_similarity: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ReuseOutcome {
    pub name: Option<String>,
    /// The coarse filter fired: the initialization is universal.
    pub universal: bool,
    pub candidates: Vec<CandidateTrace>,
}

/// Full reuse pipeline over pre-retrieved homogeneous variables: coarse
/// filter, per-candidate validation, method-similarity ranking. Ties keep
/// the earliest candidate in source order.
pub fn evaluate_reuse(
    site: &ExtractionSite<'_>,
    hvs: &[HomogeneousVariable<'_>],
    cfg: &ReuseConfig,
    universal: &UniversalInitializationSet,
) -> ReuseOutcome {
    let canonical = canonicalize_initialization(site.expression);
    if is_universal_initialization(&canonical, universal) {
        return ReuseOutcome {
            name: None,
            universal: true,
            candidates: Vec::new(),
        };
    }

    let mut traces = Vec::with_capacity(hvs.len());
    let mut best: Option<(f64, usize)> = None;
    for (idx, hv) in hvs.iter().enumerate() {
        let decision = validate_candidate(site, hv, cfg);
        let mut trace = CandidateTrace {
            name: hv.name.clone(),
            unit_path: hv.unit.path.clone(),
            decision,
            method_similarity: None,
        };
        if decision.is_reliable() {
            let sim = match hv.enclosing_method {
                Some(method) => method_similarity(
                    site.unit,
                    site.enclosing_method,
                    hv.unit,
                    method,
                ),
                None => 0.0,
            };
            trace.method_similarity = Some(sim);
            let better = match best {
                None => true,
                Some((best_sim, _)) => sim > best_sim,
            };
            if better {
                best = Some((sim, idx));
            }
        }
        traces.push(trace);
    }

    ReuseOutcome {
        name: best.map(|(_, idx)| hvs[idx].name.clone()),
        universal: false,
        candidates: traces,
    }
}

/// Name of the homogeneous variable selected for reuse, if any.
pub fn select_reuse_name(
    site: &ExtractionSite<'_>,
    hvs: &[HomogeneousVariable<'_>],
    cfg: &ReuseConfig,
    universal: &UniversalInitializationSet,
) -> Option<String> {
    evaluate_reuse(site, hvs, cfg, universal).name
}
