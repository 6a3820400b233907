//! Variable Dependency Graph: dependency edges from a variable's
//! declaration to every statement-level node referencing it. References
//! sitting in the header of a control structure depend through the
//! structure's condition instead of the whole statement.

use crate::ast::{AstNode, CompilationUnit, MethodView, NodeKind, Span};
use crate::error::{Error, Result};
use crate::homogeneous::HomogeneousVariable;

#[derive(Debug)]
pub struct VariableDependencyGraph<'a> {
    /// Declaration statement of the variable; never a dependent node.
    pub variable_declaration: &'a AstNode,
    pub variable_name: String,
    dependent: Vec<&'a AstNode>,
}

impl<'a> VariableDependencyGraph<'a> {
    /// Dependent nodes in deterministic source order.
    pub fn dependent_nodes(&self) -> &[&'a AstNode] {
        &self.dependent
    }
}

/// Builds the VDG of a homogeneous variable inside its enclosing method.
/// Field-declared variables are searched across the whole unit instead.
pub fn build_vdg<'a>(
    unit: &'a CompilationUnit,
    method: Option<&MethodView>,
    variable: &HomogeneousVariable<'a>,
) -> Result<VariableDependencyGraph<'a>> {
    let search_root = match method {
        Some(view) => {
            let body = unit.method_body(view).ok_or_else(|| {
                Error::Precondition(format!("method {} has no body", view.name))
            })?;
            if !body.span.contains(variable.declaration.span) {
                return Err(Error::Precondition(format!(
                    "variable {} is not declared within method {}",
                    variable.name, view.name
                )));
            }
            body
        }
        None => &unit.root,
    };
    Ok(build_vdg_in(
        search_root,
        variable.declaration,
        &variable.name,
    ))
}

/// Core construction over an arbitrary search root.
pub fn build_vdg_in<'a>(
    search_root: &'a AstNode,
    declaration: &'a AstNode,
    variable_name: &str,
) -> VariableDependencyGraph<'a> {
    let mut dependent: Vec<&AstNode> = Vec::new();
    for reference in search_root.walk() {
        if reference.kind != NodeKind::SimpleName || reference.text() != variable_name {
            continue;
        }
        // References inside the declaration itself (the declared name or
        // its initializer) are not dependencies.
        if declaration.span.contains(reference.span) {
            continue;
        }
        if let Some(node) = dependent_for_reference(search_root, reference.span) {
            if node.span == declaration.span {
                continue;
            }
            if !dependent.iter().any(|d| d.span == node.span) {
                dependent.push(node);
            }
        }
    }
    dependent.sort_by_key(|n| n.span.start);
    VariableDependencyGraph {
        variable_declaration: declaration,
        variable_name: variable_name.to_string(),
        dependent,
    }
}

/// Convenience accessor mirroring the graph traversal: all dependent nodes
/// in source order.
pub fn dependent_nodes<'a>(vdg: &VariableDependencyGraph<'a>) -> Vec<&'a AstNode> {
    vdg.dependent_nodes().to_vec()
}

/// Maps a reference to its dependent node: the innermost statement-level
/// ancestor, except that control structures contribute their condition.
fn dependent_for_reference(root: &AstNode, reference: Span) -> Option<&AstNode> {
    let mut innermost: Option<&AstNode> = None;
    let mut cur = root;
    loop {
        if cur.kind.is_statement() || cur.kind == NodeKind::FieldDeclaration {
            innermost = Some(cur);
        }
        match cur
            .children
            .iter()
            .find(|c| c.span.contains(reference))
        {
            Some(child) => cur = child,
            None => break,
        }
    }
    let stmt = innermost?;
    if stmt.kind.is_control_structure() {
        return condition_of(stmt).or(Some(stmt));
    }
    Some(stmt)
}

/// The condition expression of a control structure; for enhanced `for`
/// loops this is the iterable expression.
pub fn condition_of(stmt: &AstNode) -> Option<&AstNode> {
    match stmt.kind {
        NodeKind::IfStatement | NodeKind::WhileStatement => stmt.children.first(),
        NodeKind::DoStatement => stmt.children.get(1),
        NodeKind::ForStatement => stmt.children.iter().find(|c| c.kind.is_expression()),
        _ => None,
    }
}
