//! Generation-based recommendation: name a variable from its initialization
//! alone, through mined naming rules with a method-invocation heuristic as
//! the fallback.

use serde::Serialize;

use crate::ast::{AstNode, NodeKind};
use crate::rules::{NamingRule, RulePattern, RuleSet};
use crate::subtoken::{identifier_tokens, is_valid_identifier, lower_camel_case, split_subtokens};

/// Verbs stripped from method names by the default heuristic: the union of
/// the common IDE lists with the verbs surfaced by corpus mining.
pub const DEFAULT_VERBS: &[&str] = &[
    "get", "is", "to", "find", "create", "as", "fetch", "generate", "read", "build", "add",
    "parse",
];

pub fn default_verbs() -> Vec<String> {
    DEFAULT_VERBS.iter().map(|v| v.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratedName {
    pub name: String,
    /// Rule provenance: a rule id or `"default-invocation"`.
    pub rule_id: String,
}

/// Receiver, method name, and arguments of an invocation node.
struct InvocationParts<'a> {
    receiver: Option<&'a AstNode>,
    method_name: &'a AstNode,
}

/// The method-name child is the simple name directly followed by the
/// argument list's opening parenthesis.
fn invocation_parts(node: &AstNode) -> Option<InvocationParts<'_>> {
    if node.kind != NodeKind::MethodInvocation {
        return None;
    }
    let text = node.text();
    for (i, child) in node.children.iter().enumerate() {
        if child.kind != NodeKind::SimpleName {
            continue;
        }
        let rel_end = child.span.end - node.span.start;
        if text[rel_end..].trim_start().starts_with('(') {
            let receiver = if i > 0 { node.children.first() } else { None };
            return Some(InvocationParts {
                receiver,
                method_name: child,
            });
        }
    }
    None
}

/// Singularizes one sub-token. Tokens ending in `ss`, `us`, or `is` are
/// already-singular shapes and stay unchanged, as do tokens whose stem
/// would drop below three characters. `...ses/...xes/...zes/...ches/...shes`
/// drop the `es`; everything else drops the final `s`.
pub fn singularize(token: &str) -> String {
    if !token.ends_with('s') {
        return token.to_string();
    }
    if token.ends_with("ss") || token.ends_with("us") || token.ends_with("is") {
        return token.to_string();
    }
    const ES_SUFFIXES: &[&str] = &["ses", "xes", "zes", "ches", "shes"];
    if ES_SUFFIXES.iter().any(|suffix| token.ends_with(suffix)) {
        let stem = &token[..token.len() - 2];
        if stem.chars().count() >= 3 {
            return stem.to_string();
        }
        return token.to_string();
    }
    let stem = &token[..token.len() - 1];
    if stem.chars().count() >= 3 {
        return stem.to_string();
    }
    token.to_string()
}

/// Instantiates one rule against an initialization, if it matches.
fn instantiate(rule: &NamingRule, initialization: &AstNode) -> Option<GeneratedName> {
    if rule.node_kind != initialization.kind {
        return None;
    }
    let parts = invocation_parts(initialization)?;
    let method_tokens = split_subtokens(parts.method_name.text());

    let name = match rule.pattern()? {
        RulePattern::VerbPrefix { literals } => {
            if method_tokens.len() <= literals.len() {
                return None;
            }
            if method_tokens[..literals.len()] != *literals {
                return None;
            }
            lower_camel_case(&method_tokens[literals.len()..])
        }
        RulePattern::PluralReceiver { literals } => {
            if method_tokens != *literals {
                return None;
            }
            let receiver = parts.receiver?;
            let receiver_name = identifier_tokens(receiver).into_iter().last()?;
            let mut receiver_tokens = split_subtokens(&receiver_name);
            let last = receiver_tokens.pop()?;
            let singular = singularize(&last);
            if singular == last {
                return None;
            }
            receiver_tokens.push(singular);
            lower_camel_case(&receiver_tokens)
        }
    };
    if !is_valid_identifier(&name) {
        return None;
    }
    Some(GeneratedName {
        name,
        rule_id: rule.id(),
    })
}

/// First matching rule wins; rules are already ordered by confidence and
/// support.
pub fn apply_rules(initialization: &AstNode, rules: &RuleSet) -> Option<GeneratedName> {
    rules
        .iter()
        .find_map(|rule| instantiate(rule, initialization))
}

/// Default heuristic for method-invocation initializations: strip a leading
/// verb when a residue remains, otherwise use the method name itself. Other
/// node kinds produce nothing.
pub fn default_invocation_name(
    initialization: &AstNode,
    verb_list: &[String],
) -> Option<GeneratedName> {
    let parts = invocation_parts(initialization)?;
    let method_name = parts.method_name.text();
    let tokens = split_subtokens(method_name);
    if tokens.len() > 1 && verb_list.iter().any(|v| v == &tokens[0]) {
        let stripped = lower_camel_case(&tokens[1..]);
        if is_valid_identifier(&stripped) {
            return Some(GeneratedName {
                name: stripped,
                rule_id: "default-invocation".to_string(),
            });
        }
    }
    if is_valid_identifier(method_name) {
        return Some(GeneratedName {
            name: method_name.to_string(),
            rule_id: "default-invocation".to_string(),
        });
    }
    None
}

/// The full generation component: mined rules first, then the default
/// invocation heuristic.
pub fn generate_name(
    initialization: &AstNode,
    rules: &RuleSet,
    verb_list: &[String],
) -> Option<GeneratedName> {
    apply_rules(initialization, rules)
        .or_else(|| default_invocation_name(initialization, verb_list))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse_unit;

    fn init_expr(expr: &str) -> (crate::ast::CompilationUnit, Span) {
        let src = format!("class A {{ void f() {{ Object v = {expr}; }} }}");
        let unit = parse_unit(&src, "t").unwrap();
        let node = unit
            .root
            .walk()
            .find(|n| n.kind.is_expression() && n.text() == expr)
            .unwrap_or_else(|| panic!("expression {expr:?} not found"));
        let span = node.span;
        (unit, span)
    }

    use crate::ast::Span;

    fn generated(expr: &str) -> Option<String> {
        let (unit, span) = init_expr(expr);
        let node = unit.root.find_exact(span).unwrap();
        generate_name(node, &RuleSet::builtin(), &default_verbs()).map(|g| g.name)
    }

    #[test]
    fn verb_and_plural_generation_fixtures() {
        assert_eq!(generated("buildId(serviceInstance)").as_deref(), Some("id"));
        assert_eq!(generated("features.next()").as_deref(), Some("feature"));
        assert_eq!(
            generated("checkConfig.getMessages()").as_deref(),
            Some("messages")
        );
        assert_eq!(generated("generateUrls(names)").as_deref(), Some("urls"));
        assert_eq!(
            generated("fetchExecutionStatus()").as_deref(),
            Some("executionStatus")
        );
        assert_eq!(generated("aliases.next()").as_deref(), Some("alias"));
    }

    #[test]
    fn apply_rules_alone_does_not_fall_through() {
        let rules = RuleSet::builtin();
        let (unit, span) = init_expr("buildId(serviceInstance)");
        let node = unit.root.find_exact(span).unwrap();
        let hit = apply_rules(node, &rules).expect("build rule fires");
        assert_eq!(hit.name, "id");
        assert_eq!(hit.rule_id, "method-invocation:build+<placeholder>");

        // No built-in rule strips "get"; only the default heuristic does.
        let (unit, span) = init_expr("checkConfig.getMessages()");
        let node = unit.root.find_exact(span).unwrap();
        assert!(apply_rules(node, &rules).is_none());
        let fallback = default_invocation_name(node, &default_verbs()).unwrap();
        assert_eq!(fallback.name, "messages");
        assert_eq!(fallback.rule_id, "default-invocation");
    }

    #[test]
    fn unmatched_invocation_uses_full_method_name() {
        assert_eq!(
            generated("name().lastIndexOf('.')").as_deref(),
            Some("lastIndexOf")
        );
    }

    #[test]
    fn literal_initialization_generates_nothing() {
        assert_eq!(generated("0"), None);
        assert_eq!(generated("acc + 1"), None);
    }

    #[test]
    fn empty_verb_list_degenerates_to_full_method_name() {
        let (unit, span) = init_expr("checkConfig.getMessages()");
        let node = unit.root.find_exact(span).unwrap();
        let got = default_invocation_name(node, &[]).unwrap();
        assert_eq!(got.name, "getMessages");
    }

    #[test]
    fn generation_ignores_surrounding_context() {
        let a = {
            let src = "class A { void f() { Object v = fetchRows(); } }";
            let unit = parse_unit(src, "a").unwrap();
            let node = unit
                .root
                .walk()
                .find(|n| n.text() == "fetchRows()")
                .unwrap();
            generate_name(node, &RuleSet::builtin(), &default_verbs())
        };
        let b = {
            let src = "class Other { int g(int q) { if (q > 0) { use(fetchRows()); } return q; } }";
            let unit = parse_unit(src, "b").unwrap();
            let node = unit
                .root
                .walk()
                .find(|n| n.text() == "fetchRows()")
                .unwrap();
            generate_name(node, &RuleSet::builtin(), &default_verbs())
        };
        assert_eq!(a, b);
    }

    #[test]
    fn singularize_table() {
        let cases = [
            ("aliases", "alias"),
            ("features", "feature"),
            ("status", "status"),
            ("boxes", "box"),
            ("matches", "match"),
            ("hashes", "hash"),
            ("classes", "class"),
            ("buses", "bus"),
            ("indexes", "index"),
            ("patches", "patch"),
            ("items", "item"),
            ("names", "name"),
            ("urls", "url"),
            ("values", "value"),
            ("process", "process"),
            ("bus", "bus"),
            ("analysis", "analysis"),
            ("this", "this"),
            ("gas", "gas"),
            ("nodes", "node"),
        ];
        for (plural, expected) in cases {
            assert_eq!(singularize(plural), expected, "token {plural:?}");
        }
        assert_eq!(singularize("value"), "value");
    }

    #[test]
    fn generated_names_are_valid_identifiers() {
        for expr in [
            "buildId(serviceInstance)",
            "features.next()",
            "get2xx()",
            "name().lastIndexOf('.')",
        ] {
            if let Some(name) = generated(expr) {
                assert!(is_valid_identifier(&name), "{name:?} from {expr:?}");
            }
        }
    }
}
