//! Corpus mining: declaration extraction, name/initializer alignment,
//! per-node-kind FP-growth, rule curation, and universal-initialization
//! mining.

pub mod fp_growth;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;



use crate::ast::{parse_unit, CompilationUnit, NodeKind};
use crate::error::{Error, Result};
use crate::homogeneous::{canonicalize_initialization, declared_variables};
use crate::reuse::UniversalInitializationSet;
use crate::rules::{
    is_placeholder_item, NamingRule, RuleSet, PLACEHOLDER, PLACEHOLDER_PLURAL_ES,
    PLACEHOLDER_PLURAL_S,
};
use crate::subtoken::{identifier_subtokens, split_subtokens};

pub use fp_growth::{fp_growth, generate_association_rules, AssociationRule, FrequentItemset};

/// Thresholds of the mining pipeline.
#[derive(Debug, Clone, Copy)]
pub struct MiningConfig {
    /// Absolute transaction count an itemset must reach.
    pub min_support: u64,
    pub min_confidence: f64,
    /// Projects in which an initialization must be project-specific
    /// universal before it counts as universal.
    pub project_num: usize,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_support: 50,
            min_confidence: 0.8,
            project_num: 80,
        }
    }
}

/// Source trees grouped by project.
#[derive(Debug, Default)]
pub struct Corpus {
    pub projects: Vec<Project>,
}

#[derive(Debug)]
pub struct Project {
    pub id: String,
    pub units: Vec<CompilationUnit>,
}

impl Corpus {
    /// Loads a corpus directory. Each top-level subdirectory is one project
    /// unless a `projects.json` manifest (name -> list of relative roots)
    /// overrides the grouping. Unreadable or unparseable files are skipped
    /// with a warning so mining continues.
    pub fn load_dir(root: &Path) -> Result<(Corpus, Vec<String>)> {
        let mut warnings = Vec::new();
        let manifest_path = root.join("projects.json");
        let mut groups: Vec<(String, Vec<std::path::PathBuf>)> = Vec::new();

        if manifest_path.is_file() {
            let text = std::fs::read_to_string(&manifest_path)?;
            let manifest: BTreeMap<String, Vec<String>> = serde_json::from_str(&text)?;
            for (name, rel_roots) in manifest {
                let roots = rel_roots.iter().map(|r| root.join(r)).collect();
                groups.push((name, roots));
            }
        } else {
            let mut dirs: Vec<_> = std::fs::read_dir(root)?
                .filter_map(|e| e.ok())
                .filter(|e| e.path().is_dir())
                .map(|e| e.path())
                .collect();
            dirs.sort();
            for dir in dirs {
                let name = dir
                    .file_name()
                    .map(|n| n.to_string_lossy().to_string())
                    .unwrap_or_default();
                groups.push((name, vec![dir]));
            }
        }

        let mut projects = Vec::new();
        for (id, roots) in groups {
            let mut files = Vec::new();
            for project_root in roots {
                for entry in walkdir::WalkDir::new(&project_root)
                    .sort_by_file_name()
                    .into_iter()
                    .filter_map(|e| e.ok())
                {
                    let path = entry.path();
                    if path.is_file()
                        && path.extension().map(|e| e == "java").unwrap_or(false)
                    {
                        files.push(path.to_path_buf());
                    }
                }
            }
            files.sort();
            let mut units = Vec::new();
            for file in files {
                let display = file.display().to_string();
                let text = match std::fs::read_to_string(&file) {
                    Ok(text) => text,
                    Err(err) => {
                        warnings.push(format!("skipping {display}: {err}"));
                        continue;
                    }
                };
                match parse_unit(&text, &display) {
                    Ok(unit) => units.push(unit),
                    Err(err) => warnings.push(format!("skipping {display}: {err}")),
                }
            }
            projects.push(Project { id, units });
        }
        Ok((Corpus { projects }, warnings))
    }
}

/// One local-variable declaration with an initializer, as consumed by both
/// the rule miner and the universal-initialization miner.
#[derive(Debug, Clone)]
pub struct DeclarationRecord {
    pub name: String,
    pub name_subtokens: Vec<String>,
    pub init_subtokens: Vec<String>,
    pub init_canonical: String,
    pub node_kind: NodeKind,
    pub project_id: String,
    pub unit_path: String,
    pub offset: usize,
}

/// Extracts every local-variable declaration with an initializer, ordered
/// by (project, path, offset) so mining output is independent of walk order.
pub fn extract_declarations(corpus: &Corpus) -> Vec<DeclarationRecord> {
    let mut records = Vec::new();
    for project in &corpus.projects {
        for unit in &project.units {
            for var in declared_variables(unit) {
                if var.declaration.kind != NodeKind::LocalVariableDeclaration {
                    continue;
                }
                records.push(DeclarationRecord {
                    name_subtokens: split_subtokens(&var.name),
                    init_subtokens: identifier_subtokens(var.initializer),
                    init_canonical: canonicalize_initialization(var.initializer),
                    node_kind: var.initializer.kind,
                    project_id: project.id.clone(),
                    unit_path: unit.path.clone(),
                    offset: var.name_span.start,
                    name: var.name,
                });
            }
        }
    }
    records.sort_by(|a, b| {
        (&a.project_id, &a.unit_path, a.offset).cmp(&(&b.project_id, &b.unit_path, b.offset))
    });
    records
}

/// A placeholder-bearing transaction for one declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub items: Vec<String>,
    pub node_kind: NodeKind,
}

/// Replaces the (first) contiguous occurrence of the name sub-tokens inside
/// the initializer sub-tokens with a placeholder item. When the trailing
/// name token only matches a plural initializer token, the placeholder
/// carries the plural suffix as a marker. Single-letter variable names and
/// alignment misses yield `None`.
pub fn align_and_replace(
    name_subtokens: &[String],
    init_subtokens: &[String],
) -> Option<Vec<String>> {
    if name_subtokens.is_empty() || init_subtokens.is_empty() {
        return None;
    }
    if name_subtokens.len() == 1 && name_subtokens[0].chars().count() == 1 {
        return None;
    }

    let k = name_subtokens.len();
    if init_subtokens.len() < k {
        return None;
    }

    let mut matched: Option<(usize, &'static str)> = None;
    for start in 0..=(init_subtokens.len() - k) {
        let window = &init_subtokens[start..start + k];
        if window == name_subtokens {
            matched = Some((start, PLACEHOLDER));
            break;
        }
        let head_matches = window[..k - 1] == name_subtokens[..k - 1];
        if head_matches {
            let last_init = &window[k - 1];
            let last_name = &name_subtokens[k - 1];
            if *last_init == format!("{last_name}s") {
                matched = Some((start, PLACEHOLDER_PLURAL_S));
                break;
            }
            if *last_init == format!("{last_name}es") {
                matched = Some((start, PLACEHOLDER_PLURAL_ES));
                break;
            }
        }
    }

    let (start, placeholder) = matched?;
    let mut items = Vec::with_capacity(init_subtokens.len() - k + 1);
    items.extend(init_subtokens[..start].iter().cloned());
    items.push(placeholder.to_string());
    items.extend(init_subtokens[start + k..].iter().cloned());
    Some(items)
}

/// Transactions from declaration records; records whose alignment fails are
/// dropped, which is the validation step of the mining loop.
pub fn build_transactions(records: &[DeclarationRecord]) -> Vec<Transaction> {
    records
        .iter()
        .filter_map(|rec| {
            align_and_replace(&rec.name_subtokens, &rec.init_subtokens).map(|items| Transaction {
                items,
                node_kind: rec.node_kind,
            })
        })
        .collect()
}

/// Curation of candidate rules: an allow/deny list over antecedent item
/// patterns. With no `allow` entries the list is permissive (deny-only).
#[derive(Debug, Clone, Default)]
pub struct CurationList {
    allow: Vec<BTreeSet<String>>,
    deny: Vec<BTreeSet<String>>,
}

impl CurationList {
    /// Permissive list: every candidate passes.
    pub fn permissive() -> Self {
        CurationList::default()
    }

    /// One entry per line: `allow item,item,...` or `deny item,item,...`.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut list = CurationList::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (verb, rest) = line.split_once(char::is_whitespace).ok_or_else(|| {
                Error::MalformedCuration {
                    entry: line.to_string(),
                }
            })?;
            let items: BTreeSet<String> = rest
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            if items.is_empty() {
                return Err(Error::MalformedCuration {
                    entry: line.to_string(),
                });
            }
            match verb {
                "allow" => list.allow.push(items),
                "deny" => list.deny.push(items),
                _ => {
                    return Err(Error::MalformedCuration {
                        entry: line.to_string(),
                    })
                }
            }
        }
        Ok(list)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    fn admits(&self, antecedent: &[String]) -> bool {
        let items: BTreeSet<String> = antecedent.iter().cloned().collect();
        if self.deny.contains(&items) {
            return false;
        }
        self.allow.is_empty() || self.allow.contains(&items)
    }
}

/// Filters candidates through the curation list and orders the survivors.
pub fn compile_rules(candidates: Vec<NamingRule>, curation: &CurationList) -> RuleSet {
    let kept: Vec<NamingRule> = candidates
        .into_iter()
        .filter(|rule| curation.admits(&rule.antecedent))
        .collect();
    RuleSet::new(kept)
}

/// Full Algorithm-1 pipeline: preprocess, align, validate, mine per node
/// kind, generate rules, curate.
pub fn mine_naming_rules(
    corpus: &Corpus,
    cfg: &MiningConfig,
    curation: &CurationList,
) -> RuleSet {
    let records = extract_declarations(corpus);
    let transactions = build_transactions(&records);

    let mut by_kind: BTreeMap<NodeKind, Vec<Vec<String>>> = BTreeMap::new();
    for tx in transactions {
        by_kind.entry(tx.node_kind).or_default().push(tx.items);
    }

    let mut candidates = Vec::new();
    for (kind, txs) in by_kind {
        let itemsets = fp_growth(&txs, cfg.min_support);
        for rule in generate_association_rules(&itemsets, cfg.min_confidence) {
            if !is_placeholder_item(&rule.consequent) {
                continue;
            }
            if rule.antecedent.iter().any(|item| is_placeholder_item(item)) {
                continue;
            }
            candidates.push(candidate_to_naming_rule(kind, rule));
        }
    }
    compile_rules(candidates, curation)
}

/// Reconstructs the positional antecedent pattern from an unordered
/// association rule: a plain placeholder trails its literals, a
/// plural-marked placeholder leads them.
fn candidate_to_naming_rule(kind: NodeKind, rule: AssociationRule) -> NamingRule {
    let mut antecedent = Vec::with_capacity(rule.antecedent.len() + 1);
    if rule.consequent == PLACEHOLDER {
        antecedent.extend(rule.antecedent.iter().cloned());
        antecedent.push(rule.consequent.clone());
    } else {
        antecedent.push(rule.consequent.clone());
        antecedent.extend(rule.antecedent.iter().cloned());
    }
    NamingRule {
        node_kind: kind,
        antecedent,
        consequent: PLACEHOLDER.to_string(),
        support: rule.support,
        confidence: rule.confidence,
    }
}

/// Universal initializations: canonical initializations assigned two or
/// more distinct names within a project, in at least `project_num` projects.
pub fn mine_universal_initializations(
    corpus: &Corpus,
    project_num: usize,
) -> UniversalInitializationSet {
    let records = extract_declarations(corpus);
    let mut per_project: BTreeMap<&str, BTreeMap<&str, BTreeSet<&str>>> = BTreeMap::new();
    for rec in &records {
        per_project
            .entry(&rec.project_id)
            .or_default()
            .entry(&rec.init_canonical)
            .or_default()
            .insert(&rec.name);
    }

    let mut universal_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for inits in per_project.values() {
        for (init, names) in inits {
            if names.len() >= 2 {
                *universal_counts.entry(init).or_insert(0) += 1;
            }
        }
    }

    UniversalInitializationSet::new(
        universal_counts
            .into_iter()
            .filter(|(_, projects)| *projects >= project_num)
            .map(|(init, _)| init.to_string()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse_unit;

    fn toks(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn corpus_of(sources: &[(&str, &[&str])]) -> Corpus {
        Corpus {
            projects: sources
                .iter()
                .map(|(id, files)| Project {
                    id: id.to_string(),
                    units: files
                        .iter()
                        .enumerate()
                        .map(|(i, src)| {
                            parse_unit(src, &format!("{id}/F{i}.java")).expect("fixture parses")
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    #[test]
    fn alignment_replaces_contiguous_run() {
        assert_eq!(
            align_and_replace(&toks(&["messages"]), &toks(&["check", "config", "get", "messages"])),
            Some(toks(&["check", "config", "get", PLACEHOLDER]))
        );
    }

    #[test]
    fn single_letter_names_are_excluded() {
        assert_eq!(align_and_replace(&toks(&["i"]), &toks(&["i", "next"])), None);
    }

    #[test]
    fn no_overlap_yields_none() {
        assert_eq!(
            align_and_replace(&toks(&["foo"]), &toks(&["bar", "baz"])),
            None
        );
    }

    #[test]
    fn plural_alignment_marks_placeholder() {
        assert_eq!(
            align_and_replace(&toks(&["feature"]), &toks(&["features", "next"])),
            Some(toks(&[PLACEHOLDER_PLURAL_S, "next"]))
        );
        assert_eq!(
            align_and_replace(&toks(&["alias"]), &toks(&["aliases", "next"])),
            Some(toks(&[PLACEHOLDER_PLURAL_ES, "next"]))
        );
    }

    #[test]
    fn extract_declarations_records_kind_and_tokens() {
        let corpus = corpus_of(&[(
            "P",
            &["class A { void f() { Map<String, String> messages = checkConfig.getMessages(); } }"],
        )]);
        let records = extract_declarations(&corpus);
        assert_eq!(records.len(), 1);
        let rec = &records[0];
        assert_eq!(rec.name_subtokens, toks(&["messages"]));
        assert_eq!(rec.init_subtokens, toks(&["check", "config", "get", "messages"]));
        assert_eq!(rec.node_kind, NodeKind::MethodInvocation);
        assert_eq!(rec.project_id, "P");
    }

    #[test]
    fn declarations_without_initializer_are_excluded() {
        let corpus = corpus_of(&[("P", &["class A { void f() { int x; int y = 1; } }"])]);
        let records = extract_declarations(&corpus);
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].name, "y");
    }

    #[test]
    fn mining_recovers_a_verb_rule() {
        // Enough fetch-prefixed declarations to clear min_support, all
        // aligning the trailing tokens with the variable name.
        let files: Vec<String> = (0..6)
            .map(|i| {
                format!(
                    "class A{i} {{ void f() {{ int executionStatus = fetchExecutionStatus(); }} }}"
                )
            })
            .collect();
        let file_refs: Vec<&str> = files.iter().map(|s| s.as_str()).collect();
        let corpus = corpus_of(&[("P", &file_refs[..])]);
        let cfg = MiningConfig {
            min_support: 5,
            min_confidence: 0.8,
            project_num: 80,
        };
        let rules = mine_naming_rules(&corpus, &cfg, &CurationList::permissive());
        assert!(
            rules
                .iter()
                .any(|r| r.antecedent == toks(&["fetch", PLACEHOLDER])),
            "expected fetch rule, got {:?}",
            rules.iter().collect::<Vec<_>>()
        );
        for rule in rules.iter() {
            assert!(rule.confidence >= cfg.min_confidence);
            assert!(rule.support >= cfg.min_support);
        }
    }

    #[test]
    fn curation_allow_and_deny() {
        let candidate = |items: &[&str]| NamingRule {
            node_kind: NodeKind::MethodInvocation,
            antecedent: toks(items),
            consequent: PLACEHOLDER.to_string(),
            support: 10,
            confidence: 0.9,
        };
        let list = CurationList::parse("allow fetch,<placeholder>\ndeny check,<placeholder>\n").unwrap();
        let compiled = compile_rules(
            vec![
                candidate(&["fetch", PLACEHOLDER]),
                candidate(&["check", PLACEHOLDER]),
                candidate(&["other", PLACEHOLDER]),
            ],
            &list,
        );
        let antecedents: Vec<_> = compiled.iter().map(|r| r.antecedent.clone()).collect();
        assert_eq!(antecedents, vec![toks(&["fetch", PLACEHOLDER])]);

        let permissive = compile_rules(
            vec![candidate(&["fetch", PLACEHOLDER]), candidate(&["other", PLACEHOLDER])],
            &CurationList::parse("").unwrap(),
        );
        assert_eq!(permissive.len(), 2);
    }

    #[test]
    fn malformed_curation_entry_is_an_error() {
        let err = CurationList::parse("permit fetch,<placeholder>").unwrap_err();
        match err {
            Error::MalformedCuration { entry } => {
                assert!(entry.contains("permit"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn universal_mining_requires_both_criteria() {
        // Project P0: "null" named two ways (project-specific universal),
        // "zero()" named one way. P1: "null" again universal.
        let corpus = corpus_of(&[
            (
                "P0",
                &["class A { void f() { Object a = null; Object b = null; int z = zero(); } }"],
            ),
            (
                "P1",
                &["class B { void g() { Object c = null; Object d = null; int z2 = zero(); } }"],
            ),
        ]);
        let set = mine_universal_initializations(&corpus, 2);
        assert!(set.contains("null"));
        assert!(!set.contains("zero ( )"));
        // Raising the project threshold empties the set.
        let strict = mine_universal_initializations(&corpus, 3);
        assert!(!strict.contains("null"));
    }

    #[test]
    fn emitted_confidence_matches_recount_from_transactions() {
        let txs: Vec<Vec<String>> = vec![
            toks(&["fetch", PLACEHOLDER]),
            toks(&["fetch", PLACEHOLDER]),
            toks(&["fetch", "all", PLACEHOLDER]),
            toks(&["fetch", PLACEHOLDER_PLURAL_S]),
            toks(&["read", PLACEHOLDER]),
        ];
        let itemsets = fp_growth(&txs, 1);
        for rule in generate_association_rules(&itemsets, 0.0) {
            let contains = |items: &[String]| {
                txs.iter()
                    .filter(|tx| items.iter().all(|i| tx.contains(i)))
                    .count() as u64
            };
            let mut whole = rule.antecedent.clone();
            whole.push(rule.consequent.clone());
            let recomputed = contains(&whole) as f64 / contains(&rule.antecedent) as f64;
            assert_eq!(rule.confidence.to_bits(), recomputed.to_bits());
            assert_eq!(rule.support, contains(&whole));
        }
    }

    #[test]
    fn raising_thresholds_never_adds_rules() {
        let files: Vec<String> = (0..8)
            .map(|i| {
                let verb = if i % 2 == 0 { "fetch" } else { "read" };
                format!("class A{i} {{ void f() {{ int rows = {verb}Rows(); }} }}")
            })
            .collect();
        let file_refs: Vec<&str> = files.iter().map(|s| s.as_str()).collect();
        let corpus = corpus_of(&[("P", &file_refs[..])]);

        let rules_at = |min_support: u64, min_confidence: f64| {
            let cfg = MiningConfig {
                min_support,
                min_confidence,
                project_num: 80,
            };
            mine_naming_rules(&corpus, &cfg, &CurationList::permissive())
                .iter()
                .map(|r| (r.node_kind, r.antecedent.clone()))
                .collect::<std::collections::BTreeSet<_>>()
        };

        let base = rules_at(2, 0.5);
        for (support, confidence) in [(3, 0.5), (4, 0.8), (2, 0.9), (8, 1.0)] {
            let tightened = rules_at(support, confidence);
            assert!(
                tightened.is_subset(&base),
                "raising thresholds to ({support}, {confidence}) added rules"
            );
        }
    }

    #[test]
    fn universal_mining_is_project_order_invariant() {
        let build = |flip: bool| {
            let mut specs: Vec<(&str, &[&str])> = vec![
                ("P0", &["class A { void f() { Object a = make(); Object b = make(); } }"]),
                ("P1", &["class B { void g() { Object c = make(); Object d = make(); } }"]),
            ];
            if flip {
                specs.reverse();
            }
            corpus_of(&specs)
        };
        let a = mine_universal_initializations(&build(false), 2);
        let b = mine_universal_initializations(&build(true), 2);
        assert_eq!(a, b);
    }
}
