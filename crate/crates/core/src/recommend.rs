//! Final recommendation: run the reuse and generation components, validate
//! candidate names against the site, and prioritize reuse.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::ast::{lexer, AstNode, CompilationUnit, NodeKind, Span};
use crate::error::{Error, Result};
use crate::generation::{default_verbs, generate_name};
use crate::homogeneous::{canonicalize_initialization, find_homogeneous, SearchScope};
use crate::reuse::{evaluate_reuse, CandidateTrace, ExtractionSite, ReuseConfig, UniversalInitializationSet};
use crate::rules::RuleSet;

/// Everything the recommender consumes besides the site itself.
#[derive(Debug, Clone)]
pub struct RecommenderConfig {
    pub reuse: ReuseConfig,
    pub rules: RuleSet,
    pub universal: UniversalInitializationSet,
    pub verbs: Vec<String>,
}

impl Default for RecommenderConfig {
    fn default() -> Self {
        RecommenderConfig {
            reuse: ReuseConfig::default(),
            rules: RuleSet::builtin(),
            universal: UniversalInitializationSet::builtin(),
            verbs: default_verbs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecommendationSource {
    Reuse,
    Generation,
}

/// A recommendation that passed name validation.
#[derive(Debug, Clone, Serialize)]
pub struct Recommendation {
    pub name: String,
    pub source: RecommendationSource,
    pub diagnostics: Diagnostics,
}

/// Per-component traces, populated whether or not a name came out.
#[derive(Debug, Clone, Serialize, Default)]
pub struct Diagnostics {
    pub canonical_initialization: String,
    pub homogeneous_count: usize,
    pub universal: bool,
    pub reuse_candidates: Vec<CandidateTrace>,
    /// Reuse name rejected by validation (keyword or collision), if any.
    pub reuse_rejected: Option<String>,
    pub generation_candidate: Option<String>,
    pub generation_rule: Option<String>,
    /// Generation name rejected by validation, if any.
    pub generation_rejected: Option<String>,
}

/// Outcome of a recommendation run; `name` is `None` when the recommender
/// declines.
#[derive(Debug, Clone, Serialize)]
pub struct RecommendReport {
    pub name: Option<String>,
    pub source: Option<RecommendationSource>,
    pub diagnostics: Diagnostics,
}

impl RecommendReport {
    pub fn into_recommendation(self) -> Option<Recommendation> {
        match (self.name, self.source) {
            (Some(name), Some(source)) => Some(Recommendation {
                name,
                source,
                diagnostics: self.diagnostics,
            }),
            _ => None,
        }
    }
}

/// Resolves a byte span to an extraction site. The span may include
/// surrounding whitespace; it must land exactly on an expression node.
pub fn resolve_site(unit: &CompilationUnit, span: Span) -> Result<ExtractionSite<'_>> {
    let source = unit.source();
    let mut start = span.start.min(source.len());
    let mut end = span.end.min(source.len());
    while start < end && source[start..end].starts_with(char::is_whitespace) {
        start += source[start..].chars().next().map_or(1, |c| c.len_utf8());
    }
    while start < end && source[start..end].ends_with(char::is_whitespace) {
        let trimmed = source[start..end].trim_end();
        end = start + trimmed.len();
    }
    let trimmed = Span::new(start, end);

    let site_err = || Error::SiteResolution {
        path: unit.path.clone(),
        start: span.start,
        end: span.end,
    };

    let expression = unit
        .root
        .find_exact(trimmed)
        .filter(|n| n.kind.is_expression())
        .ok_or_else(site_err)?;
    let parent_statement = innermost_statement(&unit.root, trimmed).ok_or_else(site_err)?;
    let enclosing_method = unit.enclosing_method(trimmed.start).ok_or_else(site_err)?;
    Ok(ExtractionSite {
        expression,
        parent_statement,
        enclosing_method,
        unit,
    })
}

fn innermost_statement(root: &AstNode, span: Span) -> Option<&AstNode> {
    let mut found = None;
    let mut cur = root;
    loop {
        if cur.kind.is_statement() || cur.kind == NodeKind::FieldDeclaration {
            found = Some(cur);
        }
        match cur.children.iter().find(|c| c.span.contains(span)) {
            Some(child) => cur = child,
            None => return found,
        }
    }
}

/// False iff the name is a reserved word or collides with a parameter or a
/// local declared before the extraction point in an enclosing block.
pub fn validate_name(name: &str, site: &ExtractionSite<'_>) -> bool {
    if lexer::is_keyword(name) || name == "var" {
        return false;
    }
    !visible_names(site).contains(name)
}

/// Names visible at the extraction point: all parameters of the enclosing
/// method plus local declarations lexically preceding the point in blocks
/// (and statement headers) enclosing it.
pub fn visible_names(site: &ExtractionSite<'_>) -> BTreeSet<String> {
    let mut names: BTreeSet<String> = site
        .enclosing_method
        .params
        .iter()
        .map(|p| p.name.clone())
        .collect();

    let site_start = site.expression.span.start;
    let mut cur = site.unit.method_decl(site.enclosing_method);
    loop {
        for child in &cur.children {
            if child.span.start >= site_start && !child.span.contains(site.expression.span) {
                continue;
            }
            collect_declared_names(child, site_start, &mut names);
        }
        match cur
            .children
            .iter()
            .find(|c| c.span.contains(site.expression.span))
        {
            Some(child) => cur = child,
            None => break,
        }
    }
    names
}

fn collect_declared_names(node: &AstNode, before: usize, names: &mut BTreeSet<String>) {
    match node.kind {
        NodeKind::LocalVariableDeclaration => {
            for declarator in &node.children {
                if declarator.kind != NodeKind::VariableDeclarator {
                    continue;
                }
                if let Some(name) = declarator
                    .children
                    .first()
                    .filter(|n| n.kind == NodeKind::SimpleName && n.span.start < before)
                {
                    names.insert(name.text().to_string());
                }
            }
        }
        NodeKind::Parameter => {
            if let Some(name) = node
                .children
                .iter()
                .find(|n| n.kind == NodeKind::SimpleName)
                .filter(|n| n.span.start < before)
            {
                names.insert(name.text().to_string());
            }
        }
        _ => {}
    }
}

/// Computes reuse and generation candidates, validates both, and returns the
/// reuse name when present, the generation name otherwise.
pub fn recommend(
    site: &ExtractionSite<'_>,
    scope: &SearchScope,
    cfg: &RecommenderConfig,
) -> RecommendReport {
    let mut diagnostics = Diagnostics {
        canonical_initialization: canonicalize_initialization(site.expression),
        ..Diagnostics::default()
    };

    let hvs = find_homogeneous(site.expression, &site.unit.path, scope);
    diagnostics.homogeneous_count = hvs.len();
    let reuse = evaluate_reuse(site, &hvs, &cfg.reuse, &cfg.universal);
    diagnostics.universal = reuse.universal;
    diagnostics.reuse_candidates = reuse.candidates;

    let mut reuse_name = reuse.name;
    if let Some(name) = reuse_name.take() {
        if validate_name(&name, site) {
            reuse_name = Some(name);
        } else {
            diagnostics.reuse_rejected = Some(name);
        }
    }

    let mut generation_name = None;
    if let Some(generated) = generate_name(site.expression, &cfg.rules, &cfg.verbs) {
        diagnostics.generation_candidate = Some(generated.name.clone());
        diagnostics.generation_rule = Some(generated.rule_id.clone());
        if validate_name(&generated.name, site) {
            generation_name = Some(generated.name);
        } else {
            diagnostics.generation_rejected = Some(generated.name);
        }
    }

    let (name, source) = match (reuse_name, generation_name) {
        (Some(name), _) => (Some(name), Some(RecommendationSource::Reuse)),
        (None, Some(name)) => (Some(name), Some(RecommendationSource::Generation)),
        (None, None) => (None, None),
    };
    RecommendReport {
        name,
        source,
        diagnostics,
    }
}
