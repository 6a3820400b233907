//! Variable name recommendation for extract-local-variable refactorings.
//!
//! The pipeline has two recommendation routes. The reuse route searches the
//! enclosing scope for homogeneous variables (same canonical initializer),
//! filters universal initializations, validates candidates through
//! initialization length and dependency-graph context similarity, and ranks
//! survivors by method similarity. The generation route applies mined
//! naming rules to the initialization, falling back to a verb-stripping
//! heuristic for method invocations. The selector validates both names
//! against keywords and visible locals, preferring reuse.
//!
//! A corpus miner produces the naming rules and the universal-initialization
//! set, and an evaluation harness computes exact-match metrics plus the
//! context-hitting analysis.

pub mod ast;
pub mod error;
pub mod eval;
pub mod generation;
pub mod homogeneous;
pub mod mining;
pub mod recommend;
pub mod reuse;
pub mod rules;
pub mod similarity;
pub mod subtoken;
pub mod vdg;

pub use error::{Error, Result};

pub use ast::{node_kind_multiset, parse_unit, AstNode, CompilationUnit, MethodView, NodeKind, Span};
pub use eval::{analyze_contexts, evaluate, load_dataset, ContextHitReport, EvalReport};
pub use generation::{apply_rules, default_invocation_name, generate_name, GeneratedName};
pub use homogeneous::{
    canonicalize_initialization, find_homogeneous, HomogeneousVariable, ScopeLevel, SearchScope,
};
pub use mining::{
    align_and_replace, extract_declarations, fp_growth, generate_association_rules,
    mine_naming_rules, mine_universal_initializations, compile_rules, Corpus, MiningConfig,
};
pub use recommend::{
    recommend, resolve_site, validate_name, RecommendReport, Recommendation, RecommendationSource,
    RecommenderConfig,
};
pub use reuse::{
    is_universal_initialization, select_reuse_name, validate_candidate, ExtractionSite,
    ReuseConfig, ReuseDecision, UniversalInitializationSet,
};
pub use rules::{NamingRule, RuleSet};
pub use similarity::{context_similarity, levenshtein, literal_similarity, structural_similarity};
pub use subtoken::{identifier_tokens, split_subtokens};
pub use vdg::{build_vdg, dependent_nodes, VariableDependencyGraph};
