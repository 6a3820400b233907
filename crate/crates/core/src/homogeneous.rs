//! Homogeneous-variable search: declared variables whose initializer is
//! token-identical to the initialization being extracted.

use serde::{Deserialize, Serialize};

use crate::ast::{tokenize, AstNode, CompilationUnit, MethodView, NodeKind, Span};

/// Canonical text of an expression: token texts joined by single spaces.
/// Whitespace and comments vanish; no algebraic normalization happens, so
/// `a+b` and `b+a` stay distinct.
pub fn canonicalize_initialization(expr: &AstNode) -> String {
    canonicalize_text(expr.text())
}

pub fn canonicalize_text(text: &str) -> String {
    tokenize(text)
        .iter()
        .map(|t| t.text(text))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScopeLevel {
    #[default]
    Document,
    Package,
    Project,
}

/// The compilation units a search runs over. Document scope holds exactly
/// the unit of the extraction site; wider scopes append sibling units.
#[derive(Debug)]
pub struct SearchScope {
    pub level: ScopeLevel,
    pub units: Vec<CompilationUnit>,
}

impl SearchScope {
    pub fn document(unit: CompilationUnit) -> Self {
        SearchScope {
            level: ScopeLevel::Document,
            units: vec![unit],
        }
    }

    pub fn new(level: ScopeLevel, units: Vec<CompilationUnit>) -> Self {
        SearchScope { level, units }
    }
}

/// A declared variable whose canonical initializer equals the canonical
/// form of the queried initialization.
#[derive(Debug, Clone)]
pub struct HomogeneousVariable<'a> {
    pub name: String,
    /// The declaration statement (or field declaration) node.
    pub declaration: &'a AstNode,
    pub initializer: &'a AstNode,
    /// Absent for field declarations, which sit outside any method body.
    pub enclosing_method: Option<&'a MethodView>,
    pub unit: &'a CompilationUnit,
}

/// One declared variable with an initializer, as found by the declaration
/// walker shared by the search and the corpus miner.
pub(crate) struct DeclaredVariable<'a> {
    pub name: String,
    pub name_span: Span,
    pub declaration: &'a AstNode,
    pub initializer: &'a AstNode,
}

/// Collects local-variable and field declarations that carry initializers,
/// in source order. One entry per declarator.
pub(crate) fn declared_variables(unit: &CompilationUnit) -> Vec<DeclaredVariable<'_>> {
    let mut out = Vec::new();
    for node in unit.root.walk() {
        if !matches!(
            node.kind,
            NodeKind::LocalVariableDeclaration | NodeKind::FieldDeclaration
        ) {
            continue;
        }
        for declarator in &node.children {
            if declarator.kind != NodeKind::VariableDeclarator {
                continue;
            }
            let mut children = declarator.children.iter();
            let name_node = match children.next() {
                Some(n) if n.kind == NodeKind::SimpleName => n,
                _ => continue,
            };
            if let Some(init) = children.next() {
                out.push(DeclaredVariable {
                    name: name_node.text().to_string(),
                    name_span: name_node.span,
                    declaration: node,
                    initializer: init,
                });
            }
        }
    }
    out.sort_by_key(|v| v.declaration.span.start);
    out
}

/// All homogeneous variables for `site_initialization` within `scope`,
/// ordered by (unit path, source offset). The extraction site itself is
/// excluded by initializer span identity within the site's unit.
pub fn find_homogeneous<'a>(
    site_initialization: &AstNode,
    site_unit_path: &str,
    scope: &'a SearchScope,
) -> Vec<HomogeneousVariable<'a>> {
    let query = canonicalize_initialization(site_initialization);
    let mut results = Vec::new();

    let mut units: Vec<&CompilationUnit> = scope.units.iter().collect();
    units.sort_by(|a, b| a.path.cmp(&b.path));

    for unit in units {
        for var in declared_variables(unit) {
            if unit.path == site_unit_path && var.initializer.span == site_initialization.span {
                continue;
            }
            if canonicalize_initialization(var.initializer) != query {
                continue;
            }
            let enclosing_method = unit.enclosing_method(var.declaration.span.start);
            results.push(HomogeneousVariable {
                name: var.name,
                declaration: var.declaration,
                initializer: var.initializer,
                enclosing_method,
                unit,
            });
        }
    }
    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse_unit;

    fn init_node<'a>(unit: &'a CompilationUnit, var_name: &str) -> &'a AstNode {
        declared_variables(unit)
            .into_iter()
            .find(|v| v.name == var_name)
            .map(|v| v.initializer)
            .expect("declaration found")
    }

    #[test]
    fn canonical_text_is_whitespace_invariant() {
        assert_eq!(
            canonicalize_text("name().lastIndexOf( '.' )"),
            canonicalize_text("name().lastIndexOf('.')")
        );
        assert_eq!(
            canonicalize_text("new StringBuilder()"),
            "new StringBuilder ( )"
        );
        assert_ne!(canonicalize_text("a+b"), canonicalize_text("b+a"));
    }

    #[test]
    fn finds_sibling_homogeneous_variable() {
        let src = r#"
interface Named {
    default String packageName() {
        return name().substring(0, name().lastIndexOf('.'));
    }
    default String simpleName() {
        final int dotIdx = name().lastIndexOf('.');
        if (dotIdx < 0) {
            return name();
        } else {
            return name().substring(dotIdx + 1);
        }
    }
}
"#;
        let unit = parse_unit(src, "Named.java").unwrap();
        // Query with the inner lastIndexOf call from packageName.
        let query = unit
            .root
            .walk()
            .find(|n| {
                n.kind == NodeKind::MethodInvocation && n.text() == "name().lastIndexOf('.')"
            })
            .unwrap();
        let scope = SearchScope::document(unit.clone());
        let found = find_homogeneous(query, "Named.java", &scope);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].name, "dotIdx");
        assert_eq!(
            found[0].enclosing_method.map(|m| m.name.as_str()),
            Some("simpleName")
        );
    }

    #[test]
    fn no_match_yields_empty_list() {
        let unit = parse_unit("class A { void f() { int x = g(); } }", "A.java").unwrap();
        let query = init_node(&unit, "x");
        // The only declaration with this initializer IS the query site.
        let scope = SearchScope::document(unit.clone());
        assert!(find_homogeneous(query, "A.java", &scope).is_empty());
    }

    #[test]
    fn results_are_in_source_order_and_include_fields() {
        let src = r#"
class A {
    private int cached = foo();
    void m1() { int a = foo(); }
    void m2() { int b = foo(); }
    void m3() { int c = foo(); }
}
"#;
        let unit = parse_unit(src, "A.java").unwrap();
        let query = init_node(&unit, "c");
        let scope = SearchScope::document(unit.clone());
        let found = find_homogeneous(query, "A.java", &scope);
        let names: Vec<&str> = found.iter().map(|h| h.name.as_str()).collect();
        assert_eq!(names, vec!["cached", "a", "b"]);
        assert!(found[0].enclosing_method.is_none());
        for hv in &found {
            assert_eq!(
                canonicalize_initialization(hv.initializer),
                canonicalize_initialization(query)
            );
        }
    }

    #[test]
    fn wider_scope_only_adds_results() {
        let a = parse_unit("class A { void f() { int x = foo(); } }", "p/A.java").unwrap();
        let b = parse_unit("class B { void g() { int y = foo(); } }", "p/B.java").unwrap();
        let query_unit = parse_unit("class C { void h() { int q = foo(); } }", "p/C.java").unwrap();
        let query = init_node(&query_unit, "q");

        let document = SearchScope::document(query_unit.clone());
        let package = SearchScope::new(
            ScopeLevel::Package,
            vec![a.clone(), b.clone(), query_unit.clone()],
        );
        let doc_names: Vec<String> = find_homogeneous(query, "p/C.java", &document)
            .iter()
            .map(|h| h.name.clone())
            .collect();
        let pkg_names: Vec<String> = find_homogeneous(query, "p/C.java", &package)
            .iter()
            .map(|h| h.name.clone())
            .collect();
        for name in &doc_names {
            assert!(pkg_names.contains(name));
        }
        assert_eq!(pkg_names, vec!["x", "y"]);
    }
}
