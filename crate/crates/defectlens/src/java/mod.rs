//! Java front end: tree-sitter syntax trees reduced to [`ClassEntity`] values.
//!
//! Every class, interface, enum, record and annotation declaration becomes
//! one entity, including nested, local and anonymous ones. Records are
//! modeled as classes whose components are private fields.

mod body;
mod lines;

use std::cell::RefCell;
use std::collections::HashMap;

use defectlens_core::model::{
    ClassEntity, ClassKind, FieldDecl, Import, LineClass, LineSpan, MethodDecl, Nesting,
    Visibility,
};
use tree_sitter::{Node, Parser};

use body::BodyWalker;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{path}:{line}: unrecoverable syntax error")]
    Syntax { path: String, line: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParseDiagnostic {
    /// The parser recovered from a syntax error; entities may be incomplete.
    Syntax { path: String, line: u32 },
    /// The file was not UTF-8 and was decoded lossily.
    Encoding { path: String },
}

impl std::fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseDiagnostic::Syntax { path, line } => write!(f, "{path}:{line}: syntax error"),
            ParseDiagnostic::Encoding { path } => write!(f, "{path}: not valid UTF-8"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedUnit {
    /// Entities in source order, enclosing before enclosed.
    pub entities: Vec<ClassEntity>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

thread_local! {
    static PARSER: RefCell<Parser> = RefCell::new({
        let mut p = Parser::new();
        p.set_language(&tree_sitter_java::LANGUAGE.into())
            .expect("bundled Java grammar matches the tree-sitter ABI");
        p
    });
}

/// Parses raw file bytes, decoding non-UTF-8 input lossily with a diagnostic.
pub fn parse_bytes(bytes: &[u8], path: &str) -> Result<ParsedUnit, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(s) => parse_compilation_unit(s, path),
        Err(_) => {
            let text = String::from_utf8_lossy(bytes);
            let mut unit = parse_compilation_unit(&text, path)?;
            unit.diagnostics.insert(
                0,
                ParseDiagnostic::Encoding {
                    path: path.to_string(),
                },
            );
            Ok(unit)
        }
    }
}

/// Parses one compilation unit.
///
/// A file with syntax errors still yields the entities the parser could
/// recover, plus a diagnostic at the first error. It is an error only when
/// nothing could be recovered.
pub fn parse_compilation_unit(source: &str, path: &str) -> Result<ParsedUnit, ParseError> {
    let tree = PARSER
        .with(|p| p.borrow_mut().parse(source, None))
        .ok_or_else(|| ParseError::Syntax {
            path: path.to_string(),
            line: 1,
        })?;
    let root = tree.root_node();
    let line_count = source.lines().count().max(1);
    let mut unit = Unit {
        src: source,
        path,
        package: String::new(),
        imports: Vec::new(),
        lines: lines::classify_lines(root, line_count),
        slots: Vec::new(),
        anon_counts: HashMap::new(),
        local_counts: HashMap::new(),
    };
    let mut cursor = root.walk();
    for child in root.named_children(&mut cursor) {
        match child.kind() {
            "package_declaration" => {
                if let Some(name) = first_named(child, &["scoped_identifier", "identifier"]) {
                    unit.package = squash(unit.text(name));
                }
            }
            "import_declaration" => unit.import(child),
            _ => {}
        }
    }
    for child in root.named_children(&mut cursor) {
        if is_type_declaration(child.kind()) {
            unit.type_declaration(child, Placement::TopLevel);
        }
    }

    let entities: Vec<ClassEntity> = unit.slots.into_iter().flatten().collect();
    let mut diagnostics = Vec::new();
    if root.has_error() {
        let line = first_error_line(root);
        if entities.is_empty() {
            return Err(ParseError::Syntax {
                path: path.to_string(),
                line,
            });
        }
        diagnostics.push(ParseDiagnostic::Syntax {
            path: path.to_string(),
            line,
        });
    }
    Ok(ParsedUnit {
        entities,
        diagnostics,
    })
}

fn first_error_line(root: Node<'_>) -> u32 {
    let mut node = root;
    'outer: loop {
        let mut cursor = node.walk();
        for child in node.children(&mut cursor) {
            if child.is_error() || child.is_missing() {
                return child.start_position().row as u32 + 1;
            }
            if child.has_error() {
                node = child;
                continue 'outer;
            }
        }
        return node.start_position().row as u32 + 1;
    }
}

pub(crate) fn is_type_declaration(kind: &str) -> bool {
    matches!(
        kind,
        "class_declaration"
            | "interface_declaration"
            | "enum_declaration"
            | "record_declaration"
            | "annotation_type_declaration"
    )
}

pub(crate) fn first_named<'t>(node: Node<'t>, kinds: &[&str]) -> Option<Node<'t>> {
    let mut cursor = node.walk();
    let found = node
        .named_children(&mut cursor)
        .find(|c| kinds.contains(&c.kind()));
    found
}

/// Source text with all whitespace removed.
pub(crate) fn squash(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Collects type names from a type subtree: simple and qualified names, with
/// generic arguments contributing names of their own.
pub(crate) fn type_names(node: Node<'_>, src: &str, out: &mut Vec<String>) {
    match node.kind() {
        "type_identifier" => out.push(src[node.byte_range()].to_string()),
        "scoped_type_identifier" => out.push(squash(&src[node.byte_range()])),
        "annotation" | "marker_annotation" => {}
        _ => {
            let mut cursor = node.walk();
            for child in node.named_children(&mut cursor) {
                type_names(child, src, out);
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Placement<'p> {
    TopLevel,
    /// Member of the class `owner`.
    Member(&'p Owner),
    /// Declared inside a body of `owner`.
    Local(&'p Owner),
}

/// What a body walker needs to know about the class it is in.
pub(crate) struct Owner {
    fqn: String,
    named: bool,
    field_types: HashMap<String, String>,
    /// Record components in declaration order.
    components: Vec<(String, String)>,
}

#[derive(Default)]
struct Members {
    fields: Vec<FieldDecl>,
    methods: Vec<MethodDecl>,
    init_blocks: Vec<defectlens_core::model::BodyFacts>,
}

pub(crate) struct Unit<'s> {
    src: &'s str,
    path: &'s str,
    package: String,
    imports: Vec<Import>,
    lines: Vec<LineClass>,
    slots: Vec<Option<ClassEntity>>,
    anon_counts: HashMap<String, usize>,
    local_counts: HashMap<(String, String), usize>,
}

impl<'s> Unit<'s> {
    pub(crate) fn text(&self, node: Node<'_>) -> &'s str {
        &self.src[node.byte_range()]
    }

    fn import(&mut self, node: Node<'_>) {
        let mut cursor = node.walk();
        let mut is_static = false;
        let mut wildcard = false;
        let mut path = String::new();
        for c in node.children(&mut cursor) {
            match c.kind() {
                "static" => is_static = true,
                "asterisk" => wildcard = true,
                "identifier" | "scoped_identifier" => path = squash(self.text(c)),
                _ => {}
            }
        }
        if !path.is_empty() {
            self.imports.push(Import {
                path,
                wildcard,
                is_static,
            });
        }
    }

    fn span(&self, node: Node<'_>) -> LineSpan {
        let (start, end) = lines::row_range(node);
        LineSpan::new(start as u32 + 1, end.max(start) as u32 + 1)
    }

    fn entity(
        &self,
        fqn: String,
        simple_name: String,
        kind: ClassKind,
        nesting: Nesting,
        enclosing: Option<String>,
        span: LineSpan,
        supertype_names: Vec<String>,
        members: Members,
    ) -> ClassEntity {
        let lo = (span.start - 1) as usize;
        let hi = (span.end as usize).min(self.lines.len());
        let mut line_classes = self.lines[lo.min(hi)..hi].to_vec();
        line_classes.resize(span.len() as usize, LineClass::Blank);
        ClassEntity {
            fqn,
            simple_name,
            kind,
            file_path: self.path.to_string(),
            package: self.package.clone(),
            imports: self.imports.clone(),
            span,
            nesting,
            enclosing,
            supertype_names,
            fields: members.fields,
            methods: members.methods,
            init_blocks: members.init_blocks,
            line_classes,
        }
    }

    /// Emits a named (top-level, member or local) type declaration and
    /// everything inside it. Returns the simple name.
    fn type_declaration(&mut self, node: Node<'_>, placement: Placement<'_>) -> String {
        let simple = node
            .child_by_field_name("name")
            .map(|n| self.text(n).to_string())
            .unwrap_or_default();
        let (fqn, nesting, enclosing) = match placement {
            Placement::TopLevel if self.package.is_empty() => {
                (simple.clone(), Nesting::TopLevel, None)
            }
            Placement::TopLevel => (
                format!("{}.{}", self.package, simple),
                Nesting::TopLevel,
                None,
            ),
            Placement::Member(o) => (
                format!("{}.{}", o.fqn, simple),
                if o.named { Nesting::Nested } else { Nesting::Local },
                Some(o.fqn.clone()),
            ),
            Placement::Local(o) => {
                let n = self
                    .local_counts
                    .entry((o.fqn.clone(), simple.clone()))
                    .or_insert(0);
                *n += 1;
                (
                    format!("{}${}{}", o.fqn, n, simple),
                    Nesting::Local,
                    Some(o.fqn.clone()),
                )
            }
        };
        let kind = match node.kind() {
            "interface_declaration" => ClassKind::Interface,
            "enum_declaration" => ClassKind::Enum,
            "annotation_type_declaration" => ClassKind::Annotation,
            _ => ClassKind::Class,
        };

        let mut supertypes = Vec::new();
        let mut cursor = node.walk();
        for c in node.named_children(&mut cursor) {
            match c.kind() {
                "superclass" | "super_interfaces" | "extends_interfaces" => {
                    self.collect_supertypes(c, &mut supertypes)
                }
                _ => {}
            }
        }

        let slot = self.slots.len();
        self.slots.push(None);
        let body = node.child_by_field_name("body");
        let interface_like = matches!(kind, ClassKind::Interface | ClassKind::Annotation);
        let mut owner = Owner {
            fqn: fqn.clone(),
            named: nesting.is_named(),
            field_types: HashMap::new(),
            components: Vec::new(),
        };
        let mut members = Members::default();
        if node.kind() == "record_declaration" {
            if let Some(params) = node.child_by_field_name("parameters") {
                self.record_components(params, &mut owner, &mut members);
            }
        }
        if let Some(body) = body {
            self.class_body(body, &mut owner, interface_like, &simple, &mut members);
        }
        let entity = self.entity(
            fqn,
            simple.clone(),
            kind,
            nesting,
            enclosing,
            self.span(node),
            supertypes,
            members,
        );
        self.slots[slot] = Some(entity);
        simple
    }

    /// Emits an anonymous class whose body is `body`, created inside `owner`.
    pub(crate) fn anonymous(&mut self, body: Node<'_>, owner: &Owner, supertype: Option<String>) {
        let n = self.anon_counts.entry(owner.fqn.clone()).or_insert(0);
        *n += 1;
        let simple = format!("anon{n}");
        let fqn = format!("{}${}", owner.fqn, simple);
        let slot = self.slots.len();
        self.slots.push(None);
        let mut inner = Owner {
            fqn: fqn.clone(),
            named: false,
            field_types: HashMap::new(),
            components: Vec::new(),
        };
        let mut members = Members::default();
        self.class_body(body, &mut inner, false, "", &mut members);
        let entity = self.entity(
            fqn,
            simple,
            ClassKind::Class,
            Nesting::Anonymous,
            Some(owner.fqn.clone()),
            self.span(body),
            supertype.into_iter().collect(),
            members,
        );
        self.slots[slot] = Some(entity);
    }

    pub(crate) fn local_type(&mut self, node: Node<'_>, owner: &Owner) -> String {
        self.type_declaration(node, Placement::Local(owner))
    }

    fn collect_supertypes(&self, node: Node<'_>, out: &mut Vec<String>) {
        let mut cursor = node.walk();
        for c in node.named_children(&mut cursor) {
            match c.kind() {
                "type_list" => self.collect_supertypes(c, out),
                "annotation" | "marker_annotation" => {}
                _ => out.push(squash(self.text(c))),
            }
        }
    }

    fn record_components(&mut self, params: Node<'_>, owner: &mut Owner, members: &mut Members) {
        let mut cursor = params.walk();
        for p in params.named_children(&mut cursor) {
            if p.kind() != "formal_parameter" {
                continue;
            }
            let (Some(ty), Some(name)) = (p.child_by_field_name("type"), p.child_by_field_name("name"))
            else {
                continue;
            };
            let mut refs = Vec::new();
            type_names(ty, self.src, &mut refs);
            let name = self.text(name).to_string();
            owner.field_types.insert(name.clone(), squash(self.text(ty)));
            owner.components.push((name.clone(), squash(self.text(ty))));
            members.fields.push(FieldDecl {
                name,
                type_name: squash(self.text(ty)),
                type_refs: refs,
                visibility: Visibility::Private,
                has_initializer: false,
                initializer: None,
            });
        }
    }

    fn class_body(
        &mut self,
        body: Node<'_>,
        owner: &mut Owner,
        interface_like: bool,
        simple: &str,
        members: &mut Members,
    ) {
        // Field types first, so bodies can type receivers declared later.
        let mut cursor = body.walk();
        let mut items: Vec<Node<'_>> = Vec::new();
        for c in body.named_children(&mut cursor) {
            if c.kind() == "enum_body_declarations" {
                let mut inner = c.walk();
                items.extend(c.named_children(&mut inner));
            } else {
                items.push(c);
            }
        }
        for item in &items {
            if matches!(item.kind(), "field_declaration" | "constant_declaration") {
                if let Some(ty) = item.child_by_field_name("type") {
                    let mut dc = item.walk();
                    for d in item.children_by_field_name("declarator", &mut dc) {
                        if let Some(name) = d.child_by_field_name("name") {
                            owner
                                .field_types
                                .insert(self.text(name).to_string(), squash(self.text(ty)));
                        }
                    }
                }
            }
        }
        let owner: &Owner = owner;

        for item in items {
            match item.kind() {
                "field_declaration" | "constant_declaration" => {
                    self.field(item, owner, interface_like, members)
                }
                "method_declaration"
                | "constructor_declaration"
                | "compact_constructor_declaration"
                | "annotation_type_element_declaration" => {
                    let m = self.method(item, owner, interface_like, simple);
                    members.methods.push(m);
                }
                "static_initializer" => {
                    if let Some(block) = first_named(item, &["block"]) {
                        let mut w = BodyWalker::new(self, owner);
                        w.block(block);
                        members.init_blocks.push(w.finish());
                    }
                }
                "block" => {
                    let mut w = BodyWalker::new(self, owner);
                    w.block(item);
                    members.init_blocks.push(w.finish());
                }
                "enum_constant" => {
                    if let Some(b) = item.child_by_field_name("body") {
                        self.anonymous(b, owner, Some(simple.to_string()));
                    }
                }
                k if is_type_declaration(k) => {
                    self.type_declaration(item, Placement::Member(owner));
                }
                _ => {}
            }
        }
    }

    fn field(&mut self, node: Node<'_>, owner: &Owner, interface_like: bool, members: &mut Members) {
        let Some(ty) = node.child_by_field_name("type") else {
            return;
        };
        let visibility = visibility(node, interface_like);
        let type_name = squash(self.text(ty));
        let mut type_refs = Vec::new();
        type_names(ty, self.src, &mut type_refs);
        let mut cursor = node.walk();
        let declarators: Vec<Node<'_>> = node
            .children_by_field_name("declarator", &mut cursor)
            .collect();
        for d in declarators {
            let Some(name) = d.child_by_field_name("name") else {
                continue;
            };
            let initializer = d.child_by_field_name("value").map(|v| {
                let mut w = BodyWalker::new(self, owner);
                w.expression(v);
                w.finish()
            });
            members.fields.push(FieldDecl {
                name: self.text(name).to_string(),
                type_name: type_name.clone(),
                type_refs: type_refs.clone(),
                visibility,
                has_initializer: initializer.is_some(),
                initializer,
            });
        }
    }

    fn method(&mut self, node: Node<'_>, owner: &Owner, interface_like: bool, simple: &str) -> MethodDecl {
        let is_constructor = matches!(
            node.kind(),
            "constructor_declaration" | "compact_constructor_declaration"
        );
        let name = if is_constructor {
            simple.to_string()
        } else {
            node.child_by_field_name("name")
                .map(|n| self.text(n).to_string())
                .unwrap_or_default()
        };
        let mut type_refs = Vec::new();
        if let Some(ret) = node.child_by_field_name("type") {
            type_names(ret, self.src, &mut type_refs);
        }
        if let Some(throws) = first_named(node, &["throws"]) {
            type_names(throws, self.src, &mut type_refs);
        }

        let mut params: Vec<(String, String)> = Vec::new();
        let mut param_types: Vec<String> = Vec::new();
        let mut varargs = false;
        if let Some(fp) = node.child_by_field_name("parameters") {
            let mut cursor = fp.walk();
            for p in fp.named_children(&mut cursor) {
                match p.kind() {
                    "formal_parameter" => {
                        let ty = p.child_by_field_name("type");
                        let written = ty.map(|t| squash(self.text(t))).unwrap_or_default();
                        if let Some(t) = ty {
                            type_names(t, self.src, &mut type_refs);
                        }
                        if let Some(n) = p.child_by_field_name("name") {
                            params.push((self.text(n).to_string(), written.clone()));
                        }
                        param_types.push(written);
                    }
                    "spread_parameter" => {
                        varargs = true;
                        let mut pc = p.walk();
                        let mut written = String::new();
                        for c in p.named_children(&mut pc) {
                            match c.kind() {
                                "modifiers" | "annotation" | "marker_annotation" => {}
                                "variable_declarator" => {
                                    if let Some(n) = c.child_by_field_name("name") {
                                        params.push((
                                            self.text(n).to_string(),
                                            format!("{written}[]"),
                                        ));
                                    }
                                }
                                _ => {
                                    type_names(c, self.src, &mut type_refs);
                                    written = squash(self.text(c));
                                }
                            }
                        }
                        param_types.push(format!("{written}..."));
                    }
                    _ => {}
                }
            }
        } else if node.kind() == "compact_constructor_declaration" {
            // Canonical constructor: one parameter per record component.
            params = owner.components.clone();
            param_types = params.iter().map(|p| p.1.clone()).collect();
        }

        let body = node.child_by_field_name("body").map(|b| {
            let mut w = BodyWalker::new(self, owner);
            for (n, t) in &params {
                w.declare(n, t);
            }
            w.block(b);
            w.finish()
        });
        MethodDecl {
            signature: format!("{}({})", name, param_types.join(",")),
            name,
            arity: param_types.len(),
            varargs,
            visibility: visibility(node, interface_like),
            is_constructor,
            type_refs,
            body,
        }
    }
}

fn visibility(node: Node<'_>, interface_like: bool) -> Visibility {
    if let Some(mods) = first_named(node, &["modifiers"]) {
        let mut cursor = mods.walk();
        for m in mods.children(&mut cursor) {
            match m.kind() {
                "public" => return Visibility::Public,
                "protected" => return Visibility::Protected,
                "private" => return Visibility::Private,
                _ => {}
            }
        }
    }
    if interface_like {
        Visibility::Public
    } else {
        Visibility::Package
    }
}
