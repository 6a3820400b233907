//! Mined naming rules: persistence model and the pattern interpretation the
//! generation engine runs.
//!
//! A rule's antecedent is an ordered item pattern over initializer
//! sub-tokens containing exactly one placeholder item. The placeholder item
//! may carry a plural marker (`<placeholder>s`, `<placeholder>es`), which is
//! how morphology survives itemset mining. The consequent is the name
//! template, `<placeholder>` itself for every shipped family.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ast::NodeKind;
use crate::error::Result;

pub const PLACEHOLDER: &str = "<placeholder>";
pub const PLACEHOLDER_PLURAL_S: &str = "<placeholder>s";
pub const PLACEHOLDER_PLURAL_ES: &str = "<placeholder>es";

pub fn is_placeholder_item(item: &str) -> bool {
    item == PLACEHOLDER || item == PLACEHOLDER_PLURAL_S || item == PLACEHOLDER_PLURAL_ES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamingRule {
    pub node_kind: NodeKind,
    /// Ordered item pattern, e.g. `["fetch", "<placeholder>"]` or
    /// `["<placeholder>s", "next"]`.
    pub antecedent: Vec<String>,
    /// Name template; the placeholder binds to the residual token run.
    pub consequent: String,
    pub support: u64,
    pub confidence: f64,
}

/// Operational reading of a rule's antecedent pattern.
#[derive(Debug, Clone, PartialEq)]
pub enum RulePattern<'a> {
    /// Literal tokens lead, placeholder trails: the literals must prefix the
    /// method-name sub-tokens and the placeholder takes the rest.
    VerbPrefix { literals: &'a [String] },
    /// Plural-marked placeholder leads, literal tokens trail: the literals
    /// must equal the method-name sub-tokens and the placeholder takes the
    /// receiver, singularized.
    PluralReceiver { literals: &'a [String] },
}

impl NamingRule {
    pub fn pattern(&self) -> Option<RulePattern<'_>> {
        let (first, last) = (self.antecedent.first()?, self.antecedent.last()?);
        let placeholders = self
            .antecedent
            .iter()
            .filter(|item| is_placeholder_item(item))
            .count();
        if placeholders != 1 {
            return None;
        }
        if last == PLACEHOLDER && self.antecedent.len() >= 2 {
            return Some(RulePattern::VerbPrefix {
                literals: &self.antecedent[..self.antecedent.len() - 1],
            });
        }
        if (first == PLACEHOLDER_PLURAL_S || first == PLACEHOLDER_PLURAL_ES)
            && self.antecedent.len() >= 2
        {
            return Some(RulePattern::PluralReceiver {
                literals: &self.antecedent[1..],
            });
        }
        None
    }

    /// Stable identifier used in recommendation provenance.
    pub fn id(&self) -> String {
        format!("{}:{}", self.node_kind, self.antecedent.join("+"))
    }
}

/// An ordered rule collection. Iteration follows descending confidence,
/// then descending support, then the antecedent pattern.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RuleSet {
    rules: Vec<NamingRule>,
}

impl RuleSet {
    pub fn new(mut rules: Vec<NamingRule>) -> Self {
        rules.sort_by(|a, b| {
            b.confidence
                .partial_cmp(&a.confidence)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| b.support.cmp(&a.support))
                .then_with(|| a.antecedent.cmp(&b.antecedent))
        });
        RuleSet { rules }
    }

    /// The curated set shipped with the tool: verb-prefix stripping for the
    /// mined verbs, and plural-receiver singularization for `next` calls.
    pub fn builtin() -> Self {
        let verb = |verb: &str, support: u64| NamingRule {
            node_kind: NodeKind::MethodInvocation,
            antecedent: vec![verb.to_string(), PLACEHOLDER.to_string()],
            consequent: PLACEHOLDER.to_string(),
            support,
            confidence: 1.0,
        };
        RuleSet::new(vec![
            verb("fetch", 120),
            verb("generate", 110),
            verb("read", 100),
            verb("build", 95),
            verb("add", 90),
            verb("parse", 85),
            NamingRule {
                node_kind: NodeKind::MethodInvocation,
                antecedent: vec![PLACEHOLDER_PLURAL_S.to_string(), "next".to_string()],
                consequent: PLACEHOLDER.to_string(),
                support: 80,
                confidence: 1.0,
            },
            NamingRule {
                node_kind: NodeKind::MethodInvocation,
                antecedent: vec![PLACEHOLDER_PLURAL_ES.to_string(), "next".to_string()],
                consequent: PLACEHOLDER.to_string(),
                support: 75,
                confidence: 1.0,
            },
        ])
    }

    pub fn iter(&self) -> impl Iterator<Item = &NamingRule> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// JSON array of rule records.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let rules: Vec<NamingRule> = serde_json::from_str(&text)?;
        Ok(RuleSet::new(rules))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.rules)?;
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_rules_have_well_formed_patterns() {
        let rules = RuleSet::builtin();
        assert!(!rules.is_empty());
        for rule in rules.iter() {
            assert!(rule.pattern().is_some(), "rule {:?} has no pattern", rule);
            assert!(!rule.antecedent.is_empty());
            assert!(rule.confidence >= 0.8);
        }
    }

    #[test]
    fn pattern_classification() {
        let rule = NamingRule {
            node_kind: NodeKind::MethodInvocation,
            antecedent: vec!["fetch".into(), PLACEHOLDER.into()],
            consequent: PLACEHOLDER.into(),
            support: 1,
            confidence: 1.0,
        };
        assert!(matches!(
            rule.pattern(),
            Some(RulePattern::VerbPrefix { literals }) if literals == ["fetch".to_string()]
        ));

        let rule = NamingRule {
            node_kind: NodeKind::MethodInvocation,
            antecedent: vec![PLACEHOLDER_PLURAL_S.into(), "next".into()],
            consequent: PLACEHOLDER.into(),
            support: 1,
            confidence: 1.0,
        };
        assert!(matches!(
            rule.pattern(),
            Some(RulePattern::PluralReceiver { literals }) if literals == ["next".to_string()]
        ));
    }

    #[test]
    fn rule_ordering_puts_high_confidence_first() {
        let lo = NamingRule {
            node_kind: NodeKind::MethodInvocation,
            antecedent: vec!["a".into(), PLACEHOLDER.into()],
            consequent: PLACEHOLDER.into(),
            support: 5,
            confidence: 0.85,
        };
        let hi = NamingRule {
            node_kind: NodeKind::MethodInvocation,
            antecedent: vec!["b".into(), PLACEHOLDER.into()],
            consequent: PLACEHOLDER.into(),
            support: 3,
            confidence: 0.95,
        };
        let set = RuleSet::new(vec![lo, hi]);
        let first = set.iter().next().unwrap();
        assert_eq!(first.antecedent[0], "b");
    }

    #[test]
    fn round_trips_through_json() {
        let dir = std::env::temp_dir().join("varnamer-rules-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rules.json");
        let rules = RuleSet::builtin();
        rules.save(&path).unwrap();
        let loaded = RuleSet::load(&path).unwrap();
        let a: Vec<_> = rules.iter().collect();
        let b: Vec<_> = loaded.iter().collect();
        assert_eq!(a, b);
    }
}
