//! Tolerant recursive-descent parser.
//!
//! The grammar covers the statement and expression forms the similarity math
//! cares about. Anything else degrades to an opaque-statement node through
//! panic-mode recovery (skip to `;` or a balancing `}`). The only fatal error
//! is a source file whose braces cannot be balanced at the top level.

use std::sync::Arc;

use super::lexer::{line_col, tokenize, Token, TokenKind};
use super::{AstNode, CompilationUnit, MethodView, NodeKind, ParamView, Span};
use crate::error::{Error, Result};

/// Internal, non-fatal parse failure; recovery happens at statement or
/// member boundaries.
struct Fail;

type PResult<T> = std::result::Result<T, Fail>;

const MODIFIERS: &[&str] = &[
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
    "default",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
];

const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "double", "float", "int", "long", "short", "void",
];

/// Parses `source` into a compilation unit. Empty input yields an empty unit;
/// malformed regions become opaque statements; only top-level brace imbalance
/// is an error.
pub fn parse_unit(source: &str, path: &str) -> Result<CompilationUnit> {
    let src: Arc<str> = Arc::from(source);
    let tokens = tokenize(source);
    check_brace_balance(source, &tokens, path)?;

    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        src: src.clone(),
    };
    let mut children = Vec::new();
    while parser.peek().is_some() {
        if parser.at_keyword("package") || parser.at_keyword("import") {
            children.push(parser.opaque_to_semicolon());
        } else if parser.at_type_decl_start() {
            let start = parser.pos;
            match parser.parse_type_decl() {
                Ok(node) => children.push(node),
                Err(Fail) => children.push(parser.recover_member(start)),
            }
        } else {
            let start = parser.pos;
            children.push(parser.recover_member(start));
        }
    }

    let root = AstNode::new(
        NodeKind::CompilationUnit,
        Span::new(0, source.len()),
        children,
        src.clone(),
    );
    let methods = collect_method_views(&root);
    Ok(CompilationUnit::new(path.to_string(), root, methods, src))
}

fn check_brace_balance(source: &str, tokens: &[Token], path: &str) -> Result<()> {
    let mut stack = Vec::new();
    for tok in tokens {
        match tok.text(source) {
            "{" => stack.push(tok.span.start),
            "}" if stack.pop().is_none() => {
                let (line, col) = line_col(source, tok.span.start);
                return Err(Error::UnrecoverableInput {
                    path: path.to_string(),
                    line,
                    col,
                    message: "unmatched '}' at top level".to_string(),
                });
            }
            _ => {}
        }
    }
    if let Some(open) = stack.pop() {
        let (line, col) = line_col(source, open);
        return Err(Error::UnrecoverableInput {
            path: path.to_string(),
            line,
            col,
            message: "unclosed '{'".to_string(),
        });
    }
    Ok(())
}

fn collect_method_views(root: &AstNode) -> Vec<MethodView> {
    let mut views = Vec::new();
    fn visit(node: &AstNode, path: &mut Vec<usize>, views: &mut Vec<MethodView>) {
        if node.kind == NodeKind::MethodDeclaration {
            let name = node
                .children
                .iter()
                .find(|c| c.kind == NodeKind::SimpleName)
                .map(|c| c.text().to_string())
                .unwrap_or_default();
            let params = node
                .children
                .iter()
                .filter(|c| c.kind == NodeKind::Parameter)
                .map(|p| {
                    let ty = p
                        .children
                        .iter()
                        .find(|c| c.kind == NodeKind::TypeRef)
                        .map(|c| c.text().to_string())
                        .unwrap_or_default();
                    let name = p
                        .children
                        .iter()
                        .find(|c| c.kind == NodeKind::SimpleName)
                        .map(|c| c.text().to_string())
                        .unwrap_or_default();
                    ParamView {
                        name,
                        type_text: ty,
                    }
                })
                .collect();
            views.push(MethodView {
                name,
                params,
                span: node.span,
                path: path.clone(),
            });
        }
        for (i, child) in node.children.iter().enumerate() {
            path.push(i);
            visit(child, path, views);
            path.pop();
        }
    }
    visit(root, &mut Vec::new(), &mut views);
    views.sort_by_key(|v| v.span.start);
    views
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    src: Arc<str>,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens.get(self.pos + offset)
    }

    fn peek_text(&self) -> &str {
        self.peek().map(|t| t.text(&self.src)).unwrap_or("")
    }

    fn text_at(&self, offset: usize) -> &str {
        self.peek_at(offset)
            .map(|t| t.text(&self.src))
            .unwrap_or("")
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn at(&self, text: &str) -> bool {
        self.peek_text() == text
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Keyword && t.text(&self.src) == kw)
    }

    fn at_identifier(&self) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Identifier)
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> PResult<()> {
        if self.eat(text) {
            Ok(())
        } else {
            Err(Fail)
        }
    }

    fn span_from(&self, start_tok: usize) -> Span {
        let end_tok = self.pos.max(start_tok + 1).min(self.tokens.len());
        if start_tok >= self.tokens.len() {
            let end = self.src.len();
            return Span::new(end, end);
        }
        Span::new(
            self.tokens[start_tok].span.start,
            self.tokens[end_tok - 1].span.end,
        )
    }

    fn node(&self, kind: NodeKind, start_tok: usize, children: Vec<AstNode>) -> AstNode {
        AstNode::new(kind, self.span_from(start_tok), children, self.src.clone())
    }

    fn leaf(&self, kind: NodeKind, tok: usize) -> AstNode {
        AstNode::new(kind, self.tokens[tok].span, Vec::new(), self.src.clone())
    }

    // ---- trivia ----------------------------------------------------------

    fn skip_annotations_and_modifiers(&mut self) {
        loop {
            if self.at("@") {
                self.bump();
                // Annotation name, possibly qualified, possibly with
                // a parenthesized argument list.
                while self.at_identifier() || self.at_keyword("interface") {
                    self.bump();
                    if !self.eat(".") {
                        break;
                    }
                }
                if self.at("(") {
                    self.skip_balanced("(", ")");
                }
                continue;
            }
            if MODIFIERS.contains(&self.peek_text()) {
                self.bump();
                continue;
            }
            break;
        }
    }

    fn skip_balanced(&mut self, open: &str, close: &str) {
        debug_assert!(self.at(open));
        let mut depth = 0usize;
        while let Some(_tok) = self.peek() {
            let text = self.peek_text();
            if text == open {
                depth += 1;
            } else if text == close {
                depth -= 1;
                self.bump();
                if depth == 0 {
                    return;
                }
                continue;
            }
            self.bump();
        }
    }

    // ---- recovery --------------------------------------------------------

    /// Consumes up to and including the next top-depth `;`, producing an
    /// opaque statement. Brace and paren nesting is respected so a single
    /// malformed construct becomes a single opaque node.
    fn recover_statement(&mut self, start: usize) -> AstNode {
        self.pos = start;
        let mut braces = 0usize;
        let mut parens = 0usize;
        while let Some(_tok) = self.peek() {
            match self.peek_text() {
                "{" => {
                    braces += 1;
                    self.bump();
                }
                "}" => {
                    if braces == 0 {
                        break;
                    }
                    braces -= 1;
                    self.bump();
                    if braces == 0 && parens == 0 {
                        // A block-shaped construct just ended; a trailing
                        // semicolon still belongs to it.
                        self.eat(";");
                        break;
                    }
                }
                "(" => {
                    parens += 1;
                    self.bump();
                }
                ")" => {
                    if parens == 0 {
                        break;
                    }
                    parens -= 1;
                    self.bump();
                }
                ";" => {
                    self.bump();
                    if braces == 0 && parens == 0 {
                        break;
                    }
                }
                _ => self.bump(),
            }
        }
        if self.pos == start {
            self.bump();
        }
        self.node(NodeKind::OpaqueStatement, start, Vec::new())
    }

    fn recover_member(&mut self, start: usize) -> AstNode {
        self.recover_statement(start)
    }

    fn opaque_to_semicolon(&mut self) -> AstNode {
        let start = self.pos;
        while let Some(_t) = self.peek() {
            if self.eat(";") {
                break;
            }
            if self.at("}") || self.at("{") {
                break;
            }
            self.bump();
        }
        if self.pos == start {
            self.bump();
        }
        self.node(NodeKind::OpaqueStatement, start, Vec::new())
    }

    // ---- types -----------------------------------------------------------

    fn at_type_decl_start(&self) -> bool {
        let mut i = 0;
        loop {
            let text = self.text_at(i);
            if text == "@" {
                // Annotations may precede the declaration; a rough scan is
                // enough for dispatch, the real parse skips them properly.
                i += 1;
                while !self.text_at(i).is_empty()
                    && (self
                        .peek_at(i)
                        .map(|t| t.kind == TokenKind::Identifier)
                        .unwrap_or(false)
                        || self.text_at(i) == ".")
                {
                    i += 1;
                }
                continue;
            }
            if MODIFIERS.contains(&text) {
                i += 1;
                continue;
            }
            return matches!(text, "class" | "interface" | "enum");
        }
    }

    /// Scans a generic argument list starting at `<`, accepting only
    /// type-shaped tokens inside. Returns false (without consuming) when the
    /// angle bracket turns out to be a comparison.
    fn try_scan_generics(&mut self) -> bool {
        if !self.at("<") {
            return false;
        }
        let start = self.pos;
        let mut depth: i32 = 0;
        while let Some(tok) = self.peek() {
            let text = self.peek_text();
            match text {
                "<" => depth += 1,
                ">" => depth -= 1,
                ">>" => depth -= 2,
                ">>>" => depth -= 3,
                "," | "." | "?" | "[" | "]" | "extends" | "super" | "&" => {}
                _ => {
                    let ok = tok.kind == TokenKind::Identifier
                        || PRIMITIVES.contains(&text);
                    if !ok {
                        self.pos = start;
                        return false;
                    }
                }
            }
            self.bump();
            if depth == 0 {
                return true;
            }
            if depth < 0 {
                self.pos = start;
                return false;
            }
        }
        self.pos = start;
        false
    }

    /// Parses a (possibly qualified, generic, array) type reference as a
    /// single leaf node.
    fn try_parse_type(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        if PRIMITIVES.contains(&self.peek_text()) {
            self.bump();
        } else if self.at_identifier() {
            self.bump();
            loop {
                if self.at(".")
                    && self
                        .peek_at(1)
                        .map(|t| t.kind == TokenKind::Identifier)
                        .unwrap_or(false)
                {
                    // Only extend the qualifier when the dotted name is not a
                    // call: `a.b.C x` is a type, `a.b()` is not.
                    let after = self.text_at(2);
                    if after == "(" {
                        break;
                    }
                    self.bump();
                    self.bump();
                } else {
                    break;
                }
            }
            self.try_scan_generics();
        } else {
            return Err(Fail);
        }
        while self.at("[") && self.text_at(1) == "]" {
            self.bump();
            self.bump();
        }
        Ok(self.node(NodeKind::TypeRef, start, Vec::new()))
    }

    // ---- declarations ----------------------------------------------------

    fn parse_type_decl(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        self.skip_annotations_and_modifiers();
        if !matches!(self.peek_text(), "class" | "interface" | "enum") {
            return Err(Fail);
        }
        self.bump();
        if !self.at_identifier() {
            return Err(Fail);
        }
        let name_tok = self.pos;
        self.bump();
        let name = self.leaf(NodeKind::SimpleName, name_tok);
        self.try_scan_generics();
        // extends / implements clauses: skip to the body.
        while !self.at("{") {
            if self.peek().is_none() || self.at(";") || self.at("}") {
                return Err(Fail);
            }
            self.bump();
        }
        self.expect("{")?;
        let mut children = vec![name];
        while !self.at("}") {
            if self.peek().is_none() {
                break;
            }
            let member_start = self.pos;
            match self.parse_member() {
                Ok(node) => children.push(node),
                Err(Fail) => children.push(self.recover_member(member_start)),
            }
        }
        self.eat("}");
        Ok(self.node(NodeKind::TypeDeclaration, start, children))
    }

    fn parse_member(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        self.skip_annotations_and_modifiers();
        if matches!(self.peek_text(), "class" | "interface" | "enum") {
            self.pos = start;
            return self.parse_type_decl();
        }
        // Constructor: identifier immediately followed by a parameter list.
        if self.at_identifier() && self.text_at(1) == "(" {
            let name_tok = self.pos;
            self.bump();
            let name = self.leaf(NodeKind::SimpleName, name_tok);
            return self.parse_method_rest(start, None, name);
        }
        // Generic method type parameters.
        if self.at("<") && !self.try_scan_generics() {
            return Err(Fail);
        }
        let ty = self.try_parse_type()?;
        if !self.at_identifier() {
            return Err(Fail);
        }
        let name_tok = self.pos;
        self.bump();
        let name = self.leaf(NodeKind::SimpleName, name_tok);
        if self.at("(") {
            return self.parse_method_rest(start, Some(ty), name);
        }
        // Field declaration.
        let mut children = vec![ty];
        let mut pending_name = Some((name_tok, name));
        loop {
            let (decl_tok, decl_name) = match pending_name.take() {
                Some(n) => n,
                None => {
                    if !self.at_identifier() {
                        return Err(Fail);
                    }
                    let t = self.pos;
                    self.bump();
                    (t, self.leaf(NodeKind::SimpleName, t))
                }
            };
            children.push(self.parse_declarator(decl_tok, decl_name)?);
            if self.eat(",") {
                continue;
            }
            break;
        }
        self.expect(";")?;
        Ok(self.node(NodeKind::FieldDeclaration, start, children))
    }

    fn parse_declarator(&mut self, name_tok: usize, name: AstNode) -> PResult<AstNode> {
        while self.at("[") && self.text_at(1) == "]" {
            self.bump();
            self.bump();
        }
        let mut children = vec![name];
        if self.eat("=") {
            children.push(self.parse_expression()?);
        }
        Ok(self.node(NodeKind::VariableDeclarator, name_tok, children))
    }

    fn parse_method_rest(
        &mut self,
        start: usize,
        return_type: Option<AstNode>,
        name: AstNode,
    ) -> PResult<AstNode> {
        let mut children = Vec::new();
        if let Some(ty) = return_type {
            children.push(ty);
        }
        children.push(name);
        self.expect("(")?;
        if !self.at(")") {
            loop {
                children.push(self.parse_parameter()?);
                if self.eat(",") {
                    continue;
                }
                break;
            }
        }
        self.expect(")")?;
        if self.eat("throws") {
            while self.at_identifier() {
                self.bump();
                while self.at(".") && self.peek_at(1).is_some() {
                    self.bump();
                    self.bump();
                }
                if !self.eat(",") {
                    break;
                }
            }
        }
        if self.at("{") {
            children.push(self.parse_block()?);
        } else {
            self.expect(";")?;
        }
        Ok(self.node(NodeKind::MethodDeclaration, start, children))
    }

    fn parse_parameter(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        self.skip_annotations_and_modifiers();
        let ty = self.try_parse_type()?;
        self.eat("...");
        if !self.at_identifier() {
            return Err(Fail);
        }
        let name_tok = self.pos;
        self.bump();
        let name = self.leaf(NodeKind::SimpleName, name_tok);
        while self.at("[") && self.text_at(1) == "]" {
            self.bump();
            self.bump();
        }
        Ok(self.node(NodeKind::Parameter, start, vec![ty, name]))
    }

    // ---- statements ------------------------------------------------------

    fn parse_block(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        self.expect("{")?;
        let mut children = Vec::new();
        while !self.at("}") {
            if self.peek().is_none() {
                return Err(Fail);
            }
            children.push(self.parse_statement());
        }
        self.expect("}")?;
        Ok(self.node(NodeKind::Block, start, children))
    }

    /// Never fails: unparseable statements come back opaque.
    fn parse_statement(&mut self) -> AstNode {
        let start = self.pos;
        match self.try_parse_statement() {
            Ok(node) => node,
            Err(Fail) => self.recover_statement(start),
        }
    }

    fn try_parse_statement(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        match self.peek_text() {
            "{" => self.parse_block(),
            "if" => {
                self.bump();
                self.expect("(")?;
                let cond = self.parse_expression()?;
                self.expect(")")?;
                let then = self.parse_statement();
                let mut children = vec![cond, then];
                if self.eat("else") {
                    children.push(self.parse_statement());
                }
                Ok(self.node(NodeKind::IfStatement, start, children))
            }
            "while" => {
                self.bump();
                self.expect("(")?;
                let cond = self.parse_expression()?;
                self.expect(")")?;
                let body = self.parse_statement();
                Ok(self.node(NodeKind::WhileStatement, start, vec![cond, body]))
            }
            "do" => {
                self.bump();
                let body = self.parse_statement();
                self.expect("while")?;
                self.expect("(")?;
                let cond = self.parse_expression()?;
                self.expect(")")?;
                self.expect(";")?;
                Ok(self.node(NodeKind::DoStatement, start, vec![body, cond]))
            }
            "for" => self.parse_for(start),
            "return" => {
                self.bump();
                let mut children = Vec::new();
                if !self.at(";") {
                    children.push(self.parse_expression()?);
                }
                self.expect(";")?;
                Ok(self.node(NodeKind::ReturnStatement, start, children))
            }
            "throw" => {
                self.bump();
                let expr = self.parse_expression()?;
                self.expect(";")?;
                Ok(self.node(NodeKind::ThrowStatement, start, vec![expr]))
            }
            "try" => self.parse_try(start),
            ";" => {
                self.bump();
                Ok(self.node(NodeKind::OpaqueStatement, start, Vec::new()))
            }
            // Constructs outside the subset go straight to recovery.
            "switch" | "synchronized" | "assert" | "break" | "continue" | "class"
            | "interface" | "enum" | "yield" => Err(Fail),
            _ => {
                if let Ok(decl) = self.try_parse_local_decl() {
                    return Ok(decl);
                }
                self.pos = start;
                let expr = self.parse_expression()?;
                self.expect(";")?;
                Ok(self.node(NodeKind::ExpressionStatement, start, vec![expr]))
            }
        }
    }

    fn try_parse_local_decl(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        self.skip_annotations_and_modifiers();
        let result = self.parse_local_decl_core(start);
        if result.is_err() {
            self.pos = start;
        }
        result
    }

    /// Type + declarator list + `;`. Used for locals, for-init, and
    /// try-resources (the latter two without the trailing semicolon).
    fn parse_local_decl_core(&mut self, start: usize) -> PResult<AstNode> {
        let ty = self.try_parse_type()?;
        if !self.at_identifier() {
            return Err(Fail);
        }
        let mut children = vec![ty];
        loop {
            if !self.at_identifier() {
                return Err(Fail);
            }
            let name_tok = self.pos;
            self.bump();
            let name = self.leaf(NodeKind::SimpleName, name_tok);
            children.push(self.parse_declarator(name_tok, name)?);
            if self.eat(",") {
                continue;
            }
            break;
        }
        self.expect(";")?;
        Ok(self.node(NodeKind::LocalVariableDeclaration, start, children))
    }

    /// Declaration without the trailing `;`, for headers.
    fn parse_header_decl(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        self.skip_annotations_and_modifiers();
        let ty = self.try_parse_type()?;
        if !self.at_identifier() {
            self.pos = start;
            return Err(Fail);
        }
        let name_tok = self.pos;
        self.bump();
        let name = self.leaf(NodeKind::SimpleName, name_tok);
        match self.parse_declarator(name_tok, name) {
            Ok(decl) => Ok(self.node(NodeKind::LocalVariableDeclaration, start, vec![ty, decl])),
            Err(Fail) => {
                self.pos = start;
                Err(Fail)
            }
        }
    }

    fn parse_for(&mut self, start: usize) -> PResult<AstNode> {
        self.expect("for")?;
        self.expect("(")?;

        // Enhanced for: `Type name : iterable`.
        let save = self.pos;
        let enhanced = (|| -> PResult<(AstNode, AstNode)> {
            let decl_start = self.pos;
            self.skip_annotations_and_modifiers();
            let ty = self.try_parse_type()?;
            if !self.at_identifier() {
                return Err(Fail);
            }
            let name_tok = self.pos;
            self.bump();
            let name = self.leaf(NodeKind::SimpleName, name_tok);
            let declarator = self.node(NodeKind::VariableDeclarator, name_tok, vec![name]);
            let decl = self.node(
                NodeKind::LocalVariableDeclaration,
                decl_start,
                vec![ty, declarator],
            );
            self.expect(":")?;
            let iterable = self.parse_expression()?;
            Ok((decl, iterable))
        })();
        match enhanced {
            Ok((decl, iterable)) => {
                self.expect(")")?;
                let body = self.parse_statement();
                return Ok(self.node(NodeKind::ForStatement, start, vec![decl, iterable, body]));
            }
            Err(Fail) => self.pos = save,
        }

        // Classic for: `init; cond; update`.
        let mut children = Vec::new();
        if !self.eat(";") {
            if let Ok(decl) = self.try_parse_local_decl() {
                children.push(decl);
            } else {
                loop {
                    let estart = self.pos;
                    let expr = self.parse_expression()?;
                    children.push(self.node(NodeKind::ExpressionStatement, estart, vec![expr]));
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect(";")?;
            }
        }
        if !self.at(";") {
            children.push(self.parse_expression()?);
        }
        self.expect(";")?;
        if !self.at(")") {
            loop {
                let estart = self.pos;
                let expr = self.parse_expression()?;
                children.push(self.node(NodeKind::ExpressionStatement, estart, vec![expr]));
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        let body = self.parse_statement();
        children.push(body);
        Ok(self.node(NodeKind::ForStatement, start, children))
    }

    fn parse_try(&mut self, start: usize) -> PResult<AstNode> {
        self.expect("try")?;
        let mut children = Vec::new();
        if self.eat("(") {
            loop {
                children.push(self.parse_header_decl()?);
                if self.eat(";") {
                    if self.at(")") {
                        break;
                    }
                    continue;
                }
                break;
            }
            self.expect(")")?;
        }
        children.push(self.parse_block()?);
        loop {
            if self.eat("catch") {
                self.expect("(")?;
                let pstart = self.pos;
                self.skip_annotations_and_modifiers();
                let ty_start = self.pos;
                // Multi-catch types: `A | B e`.
                let mut ty = self.try_parse_type()?;
                while self.eat("|") {
                    ty = self.try_parse_type()?;
                }
                let _ = ty_start;
                if !self.at_identifier() {
                    return Err(Fail);
                }
                let name_tok = self.pos;
                self.bump();
                let name = self.leaf(NodeKind::SimpleName, name_tok);
                let param = self.node(NodeKind::Parameter, pstart, vec![ty, name]);
                self.expect(")")?;
                children.push(param);
                children.push(self.parse_block()?);
                continue;
            }
            if self.eat("finally") {
                children.push(self.parse_block()?);
                continue;
            }
            break;
        }
        Ok(self.node(NodeKind::TryStatement, start, children))
    }

    // ---- expressions -----------------------------------------------------

    fn parse_expression(&mut self) -> PResult<AstNode> {
        self.parse_assignment()
    }

    fn parse_assignment(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        let left = self.parse_conditional()?;
        const ASSIGN_OPS: &[&str] = &[
            "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
        ];
        if ASSIGN_OPS.contains(&self.peek_text()) {
            self.bump();
            let right = self.parse_assignment()?;
            return Ok(self.node(NodeKind::Assignment, start, vec![left, right]));
        }
        Ok(left)
    }

    fn parse_conditional(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        let cond = self.parse_binary(0)?;
        if self.eat("?") {
            let then = self.parse_expression()?;
            self.expect(":")?;
            let otherwise = self.parse_conditional()?;
            return Ok(self.node(
                NodeKind::ConditionalExpression,
                start,
                vec![cond, then, otherwise],
            ));
        }
        Ok(cond)
    }

    fn parse_binary(&mut self, level: usize) -> PResult<AstNode> {
        const LEVELS: &[&[&str]] = &[
            &["||"],
            &["&&"],
            &["|"],
            &["^"],
            &["&"],
            &["==", "!="],
            &["<", ">", "<=", ">=", "instanceof"],
            &["<<", ">>", ">>>"],
            &["+", "-"],
            &["*", "/", "%"],
        ];
        if level >= LEVELS.len() {
            return self.parse_unary();
        }
        let start = self.pos;
        let mut left = self.parse_binary(level + 1)?;
        loop {
            let text = self.peek_text();
            if !LEVELS[level].contains(&text) {
                break;
            }
            let is_instanceof = text == "instanceof";
            self.bump();
            let right = if is_instanceof {
                self.try_parse_type()?
            } else {
                self.parse_binary(level + 1)?
            };
            left = self.node(NodeKind::InfixExpression, start, vec![left, right]);
        }
        Ok(left)
    }

    fn parse_unary(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        match self.peek_text() {
            "+" | "-" | "!" | "~" | "++" | "--" => {
                self.bump();
                let operand = self.parse_unary()?;
                Ok(self.node(NodeKind::PrefixExpression, start, vec![operand]))
            }
            _ => self.parse_postfix(),
        }
    }

    fn parse_postfix(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        let mut expr = self.parse_primary()?;
        loop {
            match self.peek_text() {
                "." => {
                    if self.text_at(1) == "class"
                        || self.text_at(1) == "this"
                        || self.text_at(1) == "super"
                    {
                        self.bump();
                        self.bump();
                        expr = self.node(NodeKind::FieldAccess, start, vec![expr]);
                        continue;
                    }
                    if self
                        .peek_at(1)
                        .map(|t| t.kind == TokenKind::Identifier)
                        .unwrap_or(false)
                    {
                        self.bump();
                        let name_tok = self.pos;
                        self.bump();
                        let name = self.leaf(NodeKind::SimpleName, name_tok);
                        if self.at("(") {
                            let mut children = vec![expr, name];
                            self.parse_arguments(&mut children)?;
                            expr = self.node(NodeKind::MethodInvocation, start, children);
                        } else {
                            expr = self.node(NodeKind::FieldAccess, start, vec![expr, name]);
                        }
                        continue;
                    }
                    return Err(Fail);
                }
                "[" => {
                    self.bump();
                    let index = self.parse_expression()?;
                    self.expect("]")?;
                    expr = self.node(NodeKind::ArrayAccess, start, vec![expr, index]);
                    continue;
                }
                "++" | "--" => {
                    self.bump();
                    expr = self.node(NodeKind::PostfixExpression, start, vec![expr]);
                    continue;
                }
                _ => break,
            }
        }
        Ok(expr)
    }

    fn parse_arguments(&mut self, children: &mut Vec<AstNode>) -> PResult<()> {
        self.expect("(")?;
        if !self.at(")") {
            loop {
                children.push(self.parse_expression()?);
                if self.eat(",") {
                    continue;
                }
                break;
            }
        }
        self.expect(")")
    }

    fn parse_primary(&mut self) -> PResult<AstNode> {
        let start = self.pos;
        let tok = self.peek().ok_or(Fail)?;
        match tok.kind {
            TokenKind::Number | TokenKind::Str | TokenKind::Char => {
                self.bump();
                Ok(self.leaf(NodeKind::Literal, start))
            }
            TokenKind::Identifier => {
                self.bump();
                let name = self.leaf(NodeKind::SimpleName, start);
                if self.at("(") {
                    let mut children = vec![name];
                    self.parse_arguments(&mut children)?;
                    return Ok(self.node(NodeKind::MethodInvocation, start, children));
                }
                Ok(name)
            }
            TokenKind::Keyword => match self.peek_text() {
                "true" | "false" | "null" => {
                    self.bump();
                    Ok(self.leaf(NodeKind::Literal, start))
                }
                "this" | "super" => {
                    self.bump();
                    let name = self.leaf(NodeKind::SimpleName, start);
                    if self.at("(") {
                        let mut children = vec![name];
                        self.parse_arguments(&mut children)?;
                        return Ok(self.node(NodeKind::MethodInvocation, start, children));
                    }
                    Ok(name)
                }
                "new" => self.parse_creation(start),
                _ => Err(Fail),
            },
            TokenKind::Punct if self.at("(") => self.parse_paren_or_cast(start),
            _ => Err(Fail),
        }
    }

    fn parse_creation(&mut self, start: usize) -> PResult<AstNode> {
        self.expect("new")?;
        let ty = self.try_parse_type()?;
        if self.at("[") {
            // Array creation: dimension expressions and/or an initializer.
            let mut children = vec![ty];
            while self.eat("[") {
                if !self.at("]") {
                    children.push(self.parse_expression()?);
                }
                self.expect("]")?;
            }
            if self.at("{") {
                self.parse_array_initializer(&mut children)?;
            }
            return Ok(self.node(NodeKind::ArrayCreation, start, children));
        }
        let mut children = vec![ty];
        self.parse_arguments(&mut children)?;
        if self.at("{") {
            // Anonymous class body: kept inside the creation's span without
            // typed children.
            self.skip_balanced("{", "}");
        }
        Ok(self.node(NodeKind::ObjectCreation, start, children))
    }

    fn parse_array_initializer(&mut self, children: &mut Vec<AstNode>) -> PResult<()> {
        self.expect("{")?;
        if !self.at("}") {
            loop {
                if self.at("{") {
                    // Nested initializer rows.
                    self.parse_array_initializer(children)?;
                } else {
                    children.push(self.parse_expression()?);
                }
                if self.eat(",") {
                    if self.at("}") {
                        break;
                    }
                    continue;
                }
                break;
            }
        }
        self.expect("}")
    }

    fn parse_paren_or_cast(&mut self, start: usize) -> PResult<AstNode> {
        let save = self.pos;
        self.expect("(")?;
        // Cast attempt.
        let primitive = PRIMITIVES.contains(&self.peek_text());
        if let Ok(ty) = self.try_parse_type() {
            if self.at(")") {
                let next = self.text_at(1);
                let next_kind = self.peek_at(1).map(|t| t.kind);
                let casts_expression = match next_kind {
                    Some(TokenKind::Identifier)
                    | Some(TokenKind::Number)
                    | Some(TokenKind::Str)
                    | Some(TokenKind::Char) => true,
                    Some(TokenKind::Keyword) => {
                        matches!(next, "new" | "this" | "super" | "true" | "false" | "null")
                    }
                    Some(TokenKind::Punct) => next == "(",
                    Some(TokenKind::Operator) => {
                        next == "!" || next == "~" || (primitive && (next == "+" || next == "-"))
                    }
                    None => false,
                };
                if casts_expression {
                    self.bump();
                    let operand = self.parse_unary()?;
                    return Ok(self.node(NodeKind::Cast, start, vec![ty, operand]));
                }
            }
        }
        self.pos = save;
        self.expect("(")?;
        let inner = self.parse_expression()?;
        self.expect(")")?;
        Ok(self.node(NodeKind::Parenthesized, start, vec![inner]))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{node_kind_multiset, NodeKind};
    use super::*;

    fn parse(src: &str) -> CompilationUnit {
        parse_unit(src, "test.java").expect("parses")
    }

    fn kinds_of_statements(unit: &CompilationUnit) -> Vec<NodeKind> {
        unit.root
            .walk()
            .filter(|n| n.kind.is_statement())
            .map(|n| n.kind)
            .collect()
    }

    const SIBLING_DOT_IDX: &str = r#"
interface Named {
    default String packageName() {
        final int dotIdx = name().lastIndexOf('.');
        if (dotIdx < 0) {
            return "";
        } else {
            return name().substring(0, dotIdx);
        }
    }
    default String simpleName() {
        // HomogeneousVariable: dotIdx
        final int dotIdx = name().lastIndexOf('.');
        if (dotIdx < 0) {
            return name();
        } else {
            return name().substring(dotIdx + 1);
        }
    }
}
"#;

    #[test]
    fn parses_sibling_methods_with_views() {
        let unit = parse(SIBLING_DOT_IDX);
        assert_eq!(unit.methods.len(), 2);
        assert_eq!(unit.methods[0].name, "packageName");
        assert_eq!(unit.methods[1].name, "simpleName");
        assert!(unit.method_body(&unit.methods[0]).is_some());
    }

    #[test]
    fn empty_input_is_empty_unit() {
        let unit = parse("");
        assert_eq!(unit.methods.len(), 0);
        assert!(unit.root.children.is_empty());
        assert_eq!(unit.root.span, Span::new(0, 0));
    }

    #[test]
    fn unbalanced_braces_are_fatal() {
        let err = parse_unit("class A { void f() {", "bad.java").unwrap_err();
        match err {
            Error::UnrecoverableInput { line, col, .. } => {
                assert_eq!(line, 1);
                assert!(col > 1);
            }
            other => panic!("expected UnrecoverableInput, got {other:?}"),
        }
        assert!(parse_unit("}", "bad.java").is_err());
    }

    #[test]
    fn lambda_statement_degrades_to_opaque_with_typed_siblings() {
        let unit = parse(
            "class A { void f() { int a = 1; list.forEach(x -> { x.run(); }); int b = 2; } }",
        );
        let kinds = kinds_of_statements(&unit);
        assert_eq!(
            kinds,
            vec![
                NodeKind::LocalVariableDeclaration,
                NodeKind::OpaqueStatement,
                NodeKind::LocalVariableDeclaration,
            ]
        );
        let opaque = unit
            .root
            .walk()
            .find(|n| n.kind == NodeKind::OpaqueStatement)
            .unwrap();
        assert!(opaque.text().contains("forEach"));
        assert!(opaque.token_texts().contains(&"run"));
    }

    #[test]
    fn parses_generics_annotations_and_try_with_resources() {
        let unit = parse(
            r#"
class C {
    private final Map<String, String> messages = new HashMap<>();
    @Override
    public Map<String, String> getMessages() {
        return new HashMap<>(messages);
    }
    void writeInternal(Response itemsResponse) {
        try (FeatureIterator features = itemsResponse.getItems().features()) {
            while (features.hasNext()) {
                builder.evaluate(writer, new TemplateBuilderContext(features.next()));
            }
        }
    }
}
"#,
        );
        assert_eq!(unit.methods.len(), 2);
        let field = unit
            .root
            .walk()
            .find(|n| n.kind == NodeKind::FieldDeclaration)
            .expect("field parsed");
        assert!(field.text().starts_with("private final Map"));
        assert!(unit
            .root
            .walk()
            .any(|n| n.kind == NodeKind::TryStatement));
        assert!(unit
            .root
            .walk()
            .any(|n| n.kind == NodeKind::WhileStatement));
        // The try resource is a typed declaration with its initializer.
        let resource = unit
            .root
            .walk()
            .find(|n| n.kind == NodeKind::LocalVariableDeclaration)
            .unwrap();
        assert!(resource.text().starts_with("FeatureIterator features"));
    }

    #[test]
    fn for_condition_is_the_only_bare_expression_child() {
        let unit = parse("class A { void f(int n) { for (int i = 0; i < n; i++) { g(i); } } }");
        let for_node = unit
            .root
            .walk()
            .find(|n| n.kind == NodeKind::ForStatement)
            .unwrap();
        let bare: Vec<_> = for_node
            .children
            .iter()
            .filter(|c| !c.kind.is_statement() && c.kind != NodeKind::Block)
            .collect();
        assert_eq!(bare.len(), 1);
        assert_eq!(bare[0].text(), "i < n");
    }

    #[test]
    fn invocation_shape_matches_expected_multiset() {
        let unit = parse(
            "class A { int f() { return name().substring(0, name().lastIndexOf('.')); } }",
        );
        let ret = unit
            .root
            .walk()
            .find(|n| n.kind == NodeKind::ReturnStatement)
            .unwrap();
        let counts = node_kind_multiset(ret);
        assert_eq!(counts.get(&NodeKind::MethodInvocation), Some(&4));
        assert_eq!(counts.get(&NodeKind::SimpleName), Some(&4));
        assert_eq!(counts.get(&NodeKind::Literal), Some(&2));
        assert_eq!(counts.values().sum::<usize>(), 10);
    }

    #[test]
    fn casts_and_parens_disambiguate() {
        let unit = parse("class A { void f(Object o) { Message m = (Message) o; int x = (1 + 2) * 3; } }");
        assert!(unit.root.walk().any(|n| n.kind == NodeKind::Cast));
        assert!(unit.root.walk().any(|n| n.kind == NodeKind::Parenthesized));
        assert!(!kinds_of_statements(&unit).contains(&NodeKind::OpaqueStatement));
    }

    #[test]
    fn deterministic_parse() {
        let a = parse(SIBLING_DOT_IDX);
        let b = parse(SIBLING_DOT_IDX);
        let dump = |unit: &CompilationUnit| {
            unit.root
                .walk()
                .map(|n| format!("{}@{}", n.kind, n.span))
                .collect::<Vec<_>>()
        };
        assert_eq!(dump(&a), dump(&b));
    }

    #[test]
    fn token_stream_round_trip() {
        // Every token ends up inside the tree: collecting the tokens owned
        // by each node (those not covered by a child) in DFS order must
        // reproduce the full token stream.
        let src = SIBLING_DOT_IDX;
        let unit = parse(src);
        let all: Vec<&str> = tokenize(src)
            .iter()
            .map(|t| &src[t.span.start..t.span.end])
            .collect();

        fn collect<'a>(node: &'a AstNode, out: &mut Vec<&'a str>) {
            let toks = tokenize(node.text());
            let base = node.span.start;
            let mut child_iter = node.children.iter().peekable();
            let mut i = 0;
            let node_text = node.text();
            while i < toks.len() {
                let abs_start = base + toks[i].span.start;
                if let Some(child) = child_iter.peek() {
                    if abs_start >= child.span.start {
                        collect(child, out);
                        let child_end = child.span.end;
                        while i < toks.len() && base + toks[i].span.start < child_end {
                            i += 1;
                        }
                        child_iter.next();
                        continue;
                    }
                }
                out.push(&node_text[toks[i].span.start..toks[i].span.end]);
                i += 1;
            }
        }

        // Collected via owned Vec of slices borrowed from per-node text;
        // compare as owned strings to sidestep lifetimes.
        let mut seen: Vec<&str> = Vec::new();
        collect(&unit.root, &mut seen);
        let seen: Vec<String> = seen.iter().map(|s| s.to_string()).collect();
        let all: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(seen, all);
    }
}
