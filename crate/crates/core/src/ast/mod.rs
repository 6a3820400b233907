//! Source model: a tolerant AST over a Java-subset grammar.
//!
//! Every node records its byte span into the original source and exposes the
//! verbatim text of that span. Statements the grammar cannot type become
//! [`NodeKind::OpaqueStatement`] nodes so similarity math degrades gracefully
//! instead of failing.

pub mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use lexer::{line_col, offset_of, tokenize, Token, TokenKind};
pub use parser::parse_unit;

/// Half-open byte range into a source file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn contains(&self, other: Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn contains_offset(&self, offset: usize) -> bool {
        self.start <= offset && offset < self.end.max(self.start + 1)
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Flat node taxonomy. Statement and expression kinds share one enum so the
/// kind multisets behind the structural similarity stay uniform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    CompilationUnit,
    TypeDeclaration,
    MethodDeclaration,
    FieldDeclaration,
    Parameter,
    TypeRef,
    Block,
    LocalVariableDeclaration,
    VariableDeclarator,
    ExpressionStatement,
    ReturnStatement,
    IfStatement,
    ForStatement,
    WhileStatement,
    DoStatement,
    TryStatement,
    ThrowStatement,
    OpaqueStatement,
    MethodInvocation,
    FieldAccess,
    SimpleName,
    Literal,
    InfixExpression,
    PrefixExpression,
    PostfixExpression,
    Assignment,
    ConditionalExpression,
    ObjectCreation,
    ArrayCreation,
    Cast,
    ArrayAccess,
    Parenthesized,
}

impl NodeKind {
    /// Kinds that stand on their own inside a block. `Block` itself is
    /// excluded: a reference always sits inside some finer statement.
    pub fn is_statement(self) -> bool {
        matches!(
            self,
            NodeKind::LocalVariableDeclaration
                | NodeKind::ExpressionStatement
                | NodeKind::ReturnStatement
                | NodeKind::IfStatement
                | NodeKind::ForStatement
                | NodeKind::WhileStatement
                | NodeKind::DoStatement
                | NodeKind::TryStatement
                | NodeKind::ThrowStatement
                | NodeKind::OpaqueStatement
        )
    }

    /// Control structures whose dependent node is their condition.
    pub fn is_control_structure(self) -> bool {
        matches!(
            self,
            NodeKind::IfStatement
                | NodeKind::ForStatement
                | NodeKind::WhileStatement
                | NodeKind::DoStatement
        )
    }

    pub fn is_expression(self) -> bool {
        matches!(
            self,
            NodeKind::MethodInvocation
                | NodeKind::FieldAccess
                | NodeKind::SimpleName
                | NodeKind::Literal
                | NodeKind::InfixExpression
                | NodeKind::PrefixExpression
                | NodeKind::PostfixExpression
                | NodeKind::Assignment
                | NodeKind::ConditionalExpression
                | NodeKind::ObjectCreation
                | NodeKind::ArrayCreation
                | NodeKind::Cast
                | NodeKind::ArrayAccess
                | NodeKind::Parenthesized
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            NodeKind::CompilationUnit => "compilation-unit",
            NodeKind::TypeDeclaration => "type-declaration",
            NodeKind::MethodDeclaration => "method-declaration",
            NodeKind::FieldDeclaration => "field-declaration",
            NodeKind::Parameter => "parameter",
            NodeKind::TypeRef => "type-ref",
            NodeKind::Block => "block",
            NodeKind::LocalVariableDeclaration => "local-variable-declaration",
            NodeKind::VariableDeclarator => "variable-declarator",
            NodeKind::ExpressionStatement => "expression-statement",
            NodeKind::ReturnStatement => "return-statement",
            NodeKind::IfStatement => "if-statement",
            NodeKind::ForStatement => "for-statement",
            NodeKind::WhileStatement => "while-statement",
            NodeKind::DoStatement => "do-statement",
            NodeKind::TryStatement => "try-statement",
            NodeKind::ThrowStatement => "throw-statement",
            NodeKind::OpaqueStatement => "opaque-statement",
            NodeKind::MethodInvocation => "method-invocation",
            NodeKind::FieldAccess => "field-access",
            NodeKind::SimpleName => "simple-name",
            NodeKind::Literal => "literal",
            NodeKind::InfixExpression => "infix-expression",
            NodeKind::PrefixExpression => "prefix-expression",
            NodeKind::PostfixExpression => "postfix-expression",
            NodeKind::Assignment => "assignment",
            NodeKind::ConditionalExpression => "conditional-expression",
            NodeKind::ObjectCreation => "object-creation",
            NodeKind::ArrayCreation => "array-creation",
            NodeKind::Cast => "cast",
            NodeKind::ArrayAccess => "array-access",
            NodeKind::Parenthesized => "parenthesized",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One AST node. Children are ordered by source position and their spans
/// nest inside the parent span without overlapping.
#[derive(Debug, Clone)]
pub struct AstNode {
    pub kind: NodeKind,
    pub span: Span,
    pub children: Vec<AstNode>,
    source: Arc<str>,
}

impl AstNode {
    pub(crate) fn new(kind: NodeKind, span: Span, children: Vec<AstNode>, source: Arc<str>) -> Self {
        AstNode {
            kind,
            span,
            children,
            source,
        }
    }

    /// Verbatim source slice of this node's span.
    pub fn text(&self) -> &str {
        &self.source[self.span.start..self.span.end]
    }

    /// Token texts of this node, recovered by re-scanning its span. This is
    /// how opaque statements retain their token list.
    pub fn token_texts(&self) -> Vec<&str> {
        let base = self.span.start;
        tokenize(self.text())
            .into_iter()
            .map(|t| &self.source[base + t.span.start..base + t.span.end])
            .collect()
    }

    /// Depth-first pre-order traversal including `self`.
    pub fn walk(&self) -> Walk<'_> {
        Walk { stack: vec![self] }
    }

    /// Innermost descendant (or `self`) whose span exactly equals `span`,
    /// preferring the deepest match.
    pub fn find_exact(&self, span: Span) -> Option<&AstNode> {
        if !self.span.contains(span) {
            return None;
        }
        for child in &self.children {
            if let Some(found) = child.find_exact(span) {
                return Some(found);
            }
        }
        if self.span == span {
            Some(self)
        } else {
            None
        }
    }

    /// Path (child indices) of the innermost node containing `span`.
    pub fn path_of_innermost(&self, span: Span) -> Vec<usize> {
        let mut path = Vec::new();
        let mut cur = self;
        'descend: loop {
            for (i, child) in cur.children.iter().enumerate() {
                if child.span.contains(span) {
                    path.push(i);
                    cur = child;
                    continue 'descend;
                }
            }
            return path;
        }
    }

    /// Resolves a child-index path starting at this node.
    pub fn resolve_path(&self, path: &[usize]) -> Option<&AstNode> {
        let mut cur = self;
        for &i in path {
            cur = cur.children.get(i)?;
        }
        Some(cur)
    }
}

pub struct Walk<'a> {
    stack: Vec<&'a AstNode>,
}

impl<'a> Iterator for Walk<'a> {
    type Item = &'a AstNode;

    fn next(&mut self) -> Option<&'a AstNode> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}

/// Multiset of node kinds over all descendants of `node`, excluding `node`
/// itself. Matching is by kind only, which is the loosened node identity the
/// structural similarity runs on.
pub fn node_kind_multiset(node: &AstNode) -> BTreeMap<NodeKind, usize> {
    let mut counts = BTreeMap::new();
    for n in node.walk().skip(1) {
        *counts.entry(n.kind).or_insert(0) += 1;
    }
    counts
}

/// Parameter of a method view: declared name plus the declared type text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamView {
    pub name: String,
    pub type_text: String,
}

/// Lightweight view onto a method declaration inside a unit.
#[derive(Debug, Clone)]
pub struct MethodView {
    pub name: String,
    pub params: Vec<ParamView>,
    pub span: Span,
    /// Child-index path from the unit root to the method-declaration node.
    pub path: Vec<usize>,
}

/// A parsed source file plus its method views.
#[derive(Debug, Clone)]
pub struct CompilationUnit {
    pub path: String,
    pub root: AstNode,
    pub methods: Vec<MethodView>,
    source: Arc<str>,
}

impl CompilationUnit {
    pub(crate) fn new(path: String, root: AstNode, methods: Vec<MethodView>, source: Arc<str>) -> Self {
        CompilationUnit {
            path,
            root,
            methods,
            source,
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// The method-declaration node behind a view.
    pub fn method_decl(&self, view: &MethodView) -> &AstNode {
        self.root
            .resolve_path(&view.path)
            .expect("method view path is valid by construction")
    }

    /// The body block of a method view; `None` for abstract declarations.
    pub fn method_body(&self, view: &MethodView) -> Option<&AstNode> {
        self.method_decl(view)
            .children
            .iter()
            .find(|c| c.kind == NodeKind::Block)
    }

    /// Innermost method view whose span contains `offset`.
    pub fn enclosing_method(&self, offset: usize) -> Option<&MethodView> {
        self.methods
            .iter()
            .filter(|m| m.span.contains_offset(offset))
            .max_by_key(|m| (m.path.len(), m.span.start))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> CompilationUnit {
        parse_unit(src, "test.java").expect("fixture parses")
    }

    #[test]
    fn multiset_of_leaf_is_empty() {
        let unit = parse("class A { void f() { return x; } }");
        let leaf = unit
            .root
            .walk()
            .find(|n| n.kind == NodeKind::SimpleName && n.text() == "x")
            .unwrap();
        assert!(node_kind_multiset(leaf).is_empty());
    }

    #[test]
    fn multiset_excludes_root() {
        let unit = parse("class A { void f() { return x; } }");
        let ret = unit
            .root
            .walk()
            .find(|n| n.kind == NodeKind::ReturnStatement)
            .unwrap();
        let counts = node_kind_multiset(ret);
        assert_eq!(counts.get(&NodeKind::SimpleName), Some(&1));
        assert_eq!(counts.len(), 1);
    }

    #[test]
    fn units_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<CompilationUnit>();
        assert_send_sync::<AstNode>();
    }

    #[test]
    fn multiset_superset_invariant() {
        let unit = parse(
            "class A { int f(int y) { if (y < 0) { return g(y, 1); } return y; } }",
        );
        for parent in unit.root.walk() {
            let parent_counts = node_kind_multiset(parent);
            for child in &parent.children {
                let mut expected = node_kind_multiset(child);
                *expected.entry(child.kind).or_insert(0) += 1;
                for (kind, count) in expected {
                    assert!(
                        parent_counts.get(&kind).copied().unwrap_or(0) >= count,
                        "parent multiset must cover child multiset plus child kind"
                    );
                }
            }
        }
    }
}
