//! Evaluation harness: dataset loading, exact-match metrics, and the
//! context-hitting analysis over name sub-tokens.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ast::{offset_of, parse_unit, AstNode, CompilationUnit, NodeKind, Span};
use crate::error::{Error, Result};
use crate::homogeneous::{find_homogeneous, HomogeneousVariable, SearchScope};
use crate::recommend::{recommend, resolve_site, RecommendationSource, RecommenderConfig};
use crate::reuse::ExtractionSite;
use crate::subtoken::{identifier_subtokens, identifier_tokens, identifier_tokens_of_text, split_subtokens};

/// One extract-local-variable refactoring: the pre-refactoring file, the
/// expression to extract, and the developer-chosen name.
#[derive(Debug, Clone)]
pub struct RefactoringInstance {
    pub id: String,
    pub source: String,
    /// Byte span of the expression, resolved from the 1-based line/column
    /// span in the dataset.
    pub expression_span: Span,
    pub ground_truth: String,
}

#[derive(Debug, Deserialize)]
struct RawInstance {
    source: String,
    span: RawSpan,
    ground_truth: String,
    #[serde(default)]
    id: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawSpan {
    #[serde(rename = "startLine")]
    start_line: usize,
    #[serde(rename = "startCol")]
    start_col: usize,
    #[serde(rename = "endLine")]
    end_line: usize,
    #[serde(rename = "endCol")]
    end_col: usize,
}

#[derive(Debug)]
pub struct DatasetLoad {
    pub instances: Vec<RefactoringInstance>,
    /// Instances whose spans did not resolve to an expression.
    pub skipped: usize,
}

/// Loads a JSONL dataset. Malformed JSON is a schema error; spans that do
/// not resolve to an expression only skip their instance.
pub fn load_dataset(path: &Path) -> Result<DatasetLoad> {
    let file = std::fs::File::open(path)?;
    let mut instances = Vec::new();
    let mut skipped = 0usize;
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawInstance = serde_json::from_str(&line).map_err(|err| {
            Error::DatasetSchema(format!("line {}: {err}", lineno + 1))
        })?;
        let id = raw
            .id
            .clone()
            .unwrap_or_else(|| format!("case-{}", lineno + 1));
        match resolve_instance(&raw, &id) {
            Some(instance) => instances.push(instance),
            None => skipped += 1,
        }
    }
    Ok(DatasetLoad { instances, skipped })
}

fn resolve_instance(raw: &RawInstance, id: &str) -> Option<RefactoringInstance> {
    let start = offset_of(&raw.source, raw.span.start_line, raw.span.start_col)?;
    let end = offset_of(&raw.source, raw.span.end_line, raw.span.end_col)?;
    if end <= start {
        return None;
    }
    let unit = parse_unit(&raw.source, id).ok()?;
    resolve_site(&unit, Span::new(start, end)).ok()?;
    let expression = unit.root.find_exact(trim_span(&raw.source, Span::new(start, end)))?;
    Some(RefactoringInstance {
        id: id.to_string(),
        source: raw.source.clone(),
        expression_span: expression.span,
        ground_truth: raw.ground_truth.clone(),
    })
}

fn trim_span(source: &str, span: Span) -> Span {
    let text = &source[span.start..span.end.min(source.len())];
    let trimmed_start = span.start + (text.len() - text.trim_start().len());
    let trimmed_end = trimmed_start + text.trim().len();
    Span::new(trimmed_start, trimmed_end)
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub ground_truth: String,
    pub recommended: Option<String>,
    pub source: Option<RecommendationSource>,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub total_cases: usize,
    pub recommendations: usize,
    pub exact_matches: usize,
    pub em_precision: f64,
    pub em_coverage: f64,
    pub cases: Vec<CaseResult>,
}

impl EvalReport {
    /// The arithmetic identities every report must satisfy.
    pub fn check_identities(&self) {
        assert!(self.exact_matches <= self.recommendations);
        assert!(self.recommendations <= self.total_cases);
        let precision = if self.recommendations == 0 {
            0.0
        } else {
            self.exact_matches as f64 / self.recommendations as f64
        };
        assert!((self.em_precision - precision).abs() < 1e-12);
        let coverage = if self.total_cases == 0 {
            0.0
        } else {
            self.exact_matches as f64 / self.total_cases as f64
        };
        assert!((self.em_coverage - coverage).abs() < 1e-12);
    }
}

/// Runs the recommender over every instance. Exact match is case-sensitive
/// string equality; declines count toward total cases only.
pub fn evaluate(instances: &[RefactoringInstance], cfg: &RecommenderConfig) -> EvalReport {
    let mut cases = Vec::with_capacity(instances.len());
    let mut recommendations = 0usize;
    let mut exact_matches = 0usize;

    for instance in instances {
        let mut recommended = None;
        let mut source = None;
        if let Ok(unit) = parse_unit(&instance.source, &instance.id) {
            let scope = SearchScope::document(unit);
            if let Ok(site) = resolve_site(&scope.units[0], instance.expression_span) {
                let report = recommend(&site, &scope, cfg);
                recommended = report.name;
                source = report.source;
            }
        }
        let exact = recommended.as_deref() == Some(instance.ground_truth.as_str());
        if recommended.is_some() {
            recommendations += 1;
        }
        if exact {
            exact_matches += 1;
        }
        cases.push(CaseResult {
            id: instance.id.clone(),
            ground_truth: instance.ground_truth.clone(),
            recommended,
            source,
            exact,
        });
    }

    let total_cases = instances.len();
    let em_precision = if recommendations == 0 {
        0.0
    } else {
        exact_matches as f64 / recommendations as f64
    };
    let em_coverage = if total_cases == 0 {
        0.0
    } else {
        exact_matches as f64 / total_cases as f64
    };
    let report = EvalReport {
        total_cases,
        recommendations,
        exact_matches,
        em_precision,
        em_coverage,
        cases,
    };
    report.check_identities();
    report
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct ContextStats {
    pub hits: usize,
    pub hitting_rate: f64,
    pub exact_matches: usize,
}

/// Per-instance context extraction: the sub-token pools and the whole-name
/// units of the four contexts.
#[derive(Debug, Default)]
struct InstanceContextData {
    initialization_tokens: BTreeSet<String>,
    homogeneous_tokens: BTreeSet<String>,
    data_type_tokens: BTreeSet<String>,
    assignment_tokens: BTreeSet<String>,
    initialization_units: Vec<String>,
    homogeneous_units: Vec<String>,
    data_type_units: Vec<String>,
    assignment_units: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceContexts {
    pub id: String,
    pub name_subtokens: Vec<String>,
    /// Hit vectors ordered initialization, homogeneous variable, data type,
    /// assignment; one 0/1 entry per name sub-token.
    pub hit_vectors: [Vec<u8>; 4],
}

#[derive(Debug, Clone, Serialize)]
pub struct ContextHitReport {
    pub total_cases: usize,
    pub total_name_subtokens: usize,
    pub initialization: ContextStats,
    pub homogeneous_variable: ContextStats,
    pub data_type: ContextStats,
    pub assignment: ContextStats,
    pub declaration_context: ContextStats,
    pub all_context: ContextStats,
    pub instances: Vec<InstanceContexts>,
}

/// Replicates the context-hitting analysis: for every instance, compare the
/// lowercased name sub-tokens against each context's sub-token pool, and
/// count whole-name exact matches per context (case-insensitive for data
/// types, case-sensitive otherwise).
pub fn analyze_contexts(instances: &[RefactoringInstance]) -> ContextHitReport {
    let mut total_name_subtokens = 0usize;
    let mut hits = [0usize; 6];
    let mut exact = [0usize; 6];
    let mut per_instance = Vec::with_capacity(instances.len());

    for instance in instances {
        let name_subtokens = split_subtokens(&instance.ground_truth);
        total_name_subtokens += name_subtokens.len();

        let data = extract_contexts(instance);
        let pools = [
            &data.initialization_tokens,
            &data.homogeneous_tokens,
            &data.data_type_tokens,
            &data.assignment_tokens,
        ];
        let mut vectors: [Vec<u8>; 4] = Default::default();
        for (ctx, pool) in pools.iter().enumerate() {
            for token in &name_subtokens {
                let hit = pool.contains(token);
                vectors[ctx].push(u8::from(hit));
                if hit {
                    hits[ctx] += 1;
                }
            }
        }
        // Declaration context (initialization plus data type) and the union
        // of all four.
        for token in &name_subtokens {
            if data.initialization_tokens.contains(token) || data.data_type_tokens.contains(token)
            {
                hits[4] += 1;
            }
            if pools.iter().any(|pool| pool.contains(token)) {
                hits[5] += 1;
            }
        }

        let name = &instance.ground_truth;
        let init_exact = data.initialization_units.iter().any(|u| u == name);
        let hv_exact = data.homogeneous_units.iter().any(|u| u == name);
        let ty_exact = data
            .data_type_units
            .iter()
            .any(|u| u.eq_ignore_ascii_case(name));
        let asg_exact = data.assignment_units.iter().any(|u| u == name);
        for (i, e) in [
            init_exact,
            hv_exact,
            ty_exact,
            asg_exact,
            init_exact || ty_exact,
            init_exact || hv_exact || ty_exact || asg_exact,
        ]
        .into_iter()
        .enumerate()
        {
            if e {
                exact[i] += 1;
            }
        }

        per_instance.push(InstanceContexts {
            id: instance.id.clone(),
            name_subtokens,
            hit_vectors: vectors,
        });
    }

    let stats = |i: usize| ContextStats {
        hits: hits[i],
        hitting_rate: if total_name_subtokens == 0 {
            0.0
        } else {
            hits[i] as f64 / total_name_subtokens as f64
        },
        exact_matches: exact[i],
    };
    ContextHitReport {
        total_cases: instances.len(),
        total_name_subtokens,
        initialization: stats(0),
        homogeneous_variable: stats(1),
        data_type: stats(2),
        assignment: stats(3),
        declaration_context: stats(4),
        all_context: stats(5),
        instances: per_instance,
    }
}

fn extract_contexts(instance: &RefactoringInstance) -> InstanceContextData {
    let mut data = InstanceContextData::default();
    let Ok(unit) = parse_unit(&instance.source, &instance.id) else {
        return data;
    };
    let Ok(site) = resolve_site(&unit, instance.expression_span) else {
        return data;
    };

    // Initialization: identifier sub-tokens of the expression; the
    // whole-name unit is the identifier-token join.
    data.initialization_tokens = identifier_subtokens(site.expression).into_iter().collect();
    data.initialization_units = vec![identifier_tokens(site.expression).join(" ")];

    // Homogeneous variables, document scope.
    let scope = SearchScope::document(unit.clone());
    let hvs = find_homogeneous(site.expression, &unit.path, &scope);
    for hv in &hvs {
        data.homogeneous_tokens
            .extend(split_subtokens(&hv.name));
        data.homogeneous_units.push(hv.name.clone());
        if let Some(ty) = declared_type_text(hv) {
            push_type(&mut data, ty);
        }
    }

    // Assignment: formal parameters whose position the initialization fills,
    // resolved against same-unit declarations by name and arity. Their
    // declared types also feed the data-type context.
    for (param_name, param_type) in assignment_params(&unit, &site) {
        data.assignment_tokens
            .extend(split_subtokens(&param_name));
        data.assignment_units.push(param_name);
        push_type(&mut data, param_type);
    }

    data
}

fn push_type(data: &mut InstanceContextData, type_text: String) {
    for token in identifier_tokens_of_text(&type_text) {
        data.data_type_tokens.extend(split_subtokens(&token));
    }
    data.data_type_units.push(type_text);
}

fn declared_type_text(hv: &HomogeneousVariable<'_>) -> Option<String> {
    hv.declaration
        .children
        .iter()
        .find(|c| c.kind == NodeKind::TypeRef)
        .map(|c| c.text().to_string())
}

/// The formal parameters (name, declared type) filled by the expression when
/// it is a direct argument of a call to a method declared in the same unit.
/// Overloads are resolved by arity only.
fn assignment_params(unit: &CompilationUnit, site: &ExtractionSite<'_>) -> Vec<(String, String)> {
    let expr_span = site.expression.span;
    let path = unit.root.path_of_innermost(expr_span);
    if path.is_empty() {
        return Vec::new();
    }
    let parent = match unit.root.resolve_path(&path[..path.len() - 1]) {
        Some(node) => node,
        None => return Vec::new(),
    };

    let (callee, args): (String, Vec<&AstNode>) = match parent.kind {
        NodeKind::MethodInvocation => {
            let Some((name, args)) = invocation_name_and_args(parent) else {
                return Vec::new();
            };
            (name, args)
        }
        NodeKind::ObjectCreation => {
            let Some(ty) = parent.children.first().filter(|c| c.kind == NodeKind::TypeRef)
            else {
                return Vec::new();
            };
            let Some(name) = identifier_tokens(ty).into_iter().last() else {
                return Vec::new();
            };
            (name, parent.children[1..].iter().collect())
        }
        _ => return Vec::new(),
    };

    let Some(position) = args.iter().position(|a| a.span == expr_span) else {
        return Vec::new();
    };

    let mut out = Vec::new();
    for view in &unit.methods {
        if view.name == callee && view.params.len() == args.len() {
            let param = &view.params[position];
            out.push((param.name.clone(), param.type_text.clone()));
        }
    }
    out
}

/// Method name and argument nodes of an invocation; the name is the simple
/// name directly followed by the argument list.
fn invocation_name_and_args(node: &AstNode) -> Option<(String, Vec<&AstNode>)> {
    let text = node.text();
    for (i, child) in node.children.iter().enumerate() {
        if child.kind != NodeKind::SimpleName {
            continue;
        }
        let rel_end = child.span.end - node.span.start;
        if text[rel_end..].trim_start().starts_with('(') {
            return Some((child.text().to_string(), node.children[i + 1..].iter().collect()));
        }
    }
    None
}
