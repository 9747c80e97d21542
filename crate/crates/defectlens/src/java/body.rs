//! Reduction of executable code to [`BodyFacts`].

use defectlens_core::model::{BodyFacts, CallSite, ControlKind, ControlNode, Receiver};
use tree_sitter::Node;

use super::{is_type_declaration, lines::is_comment, squash, type_names, Owner, Unit};

#[derive(Default)]
struct Frame {
    /// Variables and parameters with their declared types.
    vars: Vec<(String, String)>,
    /// Local classes declared in this scope.
    types: Vec<String>,
}

pub(crate) struct BodyWalker<'u, 's, 'o> {
    unit: &'u mut Unit<'s>,
    owner: &'o Owner,
    facts: BodyFacts,
    frames: Vec<Frame>,
}

fn starts_upper(name: &str) -> bool {
    name.chars().next().is_some_and(char::is_uppercase)
}

fn argument_count(node: Option<Node<'_>>) -> usize {
    node.map_or(0, |args| {
        let mut cursor = args.walk();
        let n = args
            .named_children(&mut cursor)
            .filter(|c| !is_comment(c.kind()))
            .count();
        n
    })
}

impl<'u, 's, 'o> BodyWalker<'u, 's, 'o> {
    pub(crate) fn new(unit: &'u mut Unit<'s>, owner: &'o Owner) -> Self {
        Self {
            unit,
            owner,
            facts: BodyFacts::default(),
            frames: vec![Frame::default()],
        }
    }

    pub(crate) fn finish(self) -> BodyFacts {
        self.facts
    }

    pub(crate) fn declare(&mut self, name: &str, ty: &str) {
        if let Some(f) = self.frames.last_mut() {
            f.vars.push((name.to_string(), ty.to_string()));
        }
    }

    /// Walks a block-like node (block, constructor body or lambda body).
    pub(crate) fn block(&mut self, node: Node<'_>) {
        let mut out = Vec::new();
        self.walk(node, &mut out);
        self.facts.control.extend(out);
    }

    pub(crate) fn expression(&mut self, node: Node<'_>) {
        self.block(node);
    }

    fn var_type(&self, name: &str) -> Option<&str> {
        self.frames
            .iter()
            .rev()
            .flat_map(|f| f.vars.iter().rev())
            .find(|(n, _)| n == name)
            .map(|(_, t)| t.as_str())
    }

    fn is_local_type(&self, name: &str) -> bool {
        let head = name.split(['.', '<', '[']).next().unwrap_or(name);
        self.frames
            .iter()
            .any(|f| f.types.iter().any(|t| t == head))
    }

    fn add_types(&mut self, node: Node<'_>) {
        let mut names = Vec::new();
        type_names(node, self.unit.src, &mut names);
        for n in names {
            if n != "var" && !self.is_local_type(&n) {
                self.facts.type_refs.push(n);
            }
        }
    }

    fn type_receiver(&self, written: &str) -> Receiver {
        if written == "var" || written.is_empty() || self.is_local_type(written) {
            Receiver::Unknown
        } else {
            Receiver::Type(written.to_string())
        }
    }

    /// Static receiver of `object.m()`, as far as declarations tell.
    fn receiver_of(&self, object: Node<'_>) -> Receiver {
        let text = self.unit.text(object);
        match object.kind() {
            "this" => Receiver::Implicit,
            "super" => Receiver::Super,
            "identifier" => {
                if let Some(t) = self.var_type(text) {
                    self.type_receiver(t)
                } else if let Some(t) = self.owner.field_types.get(text) {
                    self.type_receiver(t)
                } else if starts_upper(text) {
                    self.type_receiver(text)
                } else {
                    Receiver::Unknown
                }
            }
            "field_access" => {
                let obj = object.child_by_field_name("object");
                let field = object.child_by_field_name("field");
                match (obj.map(|o| o.kind()), field) {
                    (Some("this"), Some(f)) => match self.owner.field_types.get(self.unit.text(f)) {
                        Some(t) => self.type_receiver(t),
                        None => Receiver::Unknown,
                    },
                    (_, Some(f)) if starts_upper(self.unit.text(f)) && self.is_dotted_name(object) => {
                        self.type_receiver(&squash(text))
                    }
                    _ => Receiver::Unknown,
                }
            }
            "object_creation_expression" => match object.child_by_field_name("type") {
                Some(t) if super::first_named(object, &["class_body"]).is_none() =>
                {
                    self.type_receiver(&squash(self.unit.text(t)))
                }
                _ => Receiver::Unknown,
            },
            "parenthesized_expression" => match object.named_child(0) {
                Some(inner) => self.receiver_of(inner),
                None => Receiver::Unknown,
            },
            "cast_expression" => match object.child_by_field_name("type") {
                Some(t) => self.type_receiver(&squash(self.unit.text(t))),
                None => Receiver::Unknown,
            },
            _ => Receiver::Unknown,
        }
    }

    /// `a.b.C`: a chain of plain identifiers, none of them a variable.
    fn is_dotted_name(&self, node: Node<'_>) -> bool {
        match node.kind() {
            "identifier" => {
                let t = self.unit.text(node);
                self.var_type(t).is_none() && !self.owner.field_types.contains_key(t)
            }
            "field_access" => {
                node.child_by_field_name("field")
                    .is_some_and(|f| f.kind() == "identifier")
                    && node
                        .child_by_field_name("object")
                        .is_some_and(|o| self.is_dotted_name(o))
            }
            _ => false,
        }
    }

    fn children(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        let mut cursor = node.walk();
        let kids: Vec<Node<'_>> = node.named_children(&mut cursor).collect();
        for c in kids {
            self.walk(c, out);
        }
    }

    fn scoped(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        self.frames.push(Frame::default());
        self.children(node, out);
        self.frames.pop();
    }

    fn control(&mut self, kind: ControlKind, node: Node<'_>, out: &mut Vec<ControlNode>) {
        let mut kids = Vec::new();
        self.scoped(node, &mut kids);
        out.push(ControlNode::with(kind, kids));
    }

    fn if_chain(&mut self, node: Node<'_>, kids: &mut Vec<ControlNode>) {
        for field in ["condition", "consequence"] {
            if let Some(c) = node.child_by_field_name(field) {
                self.walk(c, kids);
            }
        }
        if let Some(alt) = node.child_by_field_name("alternative") {
            if alt.kind() == "if_statement" {
                let mut inner = Vec::new();
                self.if_chain(alt, &mut inner);
                kids.push(ControlNode::with(ControlKind::ElseIf, inner));
            } else {
                self.walk(alt, kids);
            }
        }
    }

    fn declare_pattern(&mut self, name: Option<Node<'_>>, ty: Option<Node<'_>>) {
        if let Some(n) = name {
            let t = ty.map(|t| squash(self.unit.text(t))).unwrap_or_default();
            let n = self.unit.text(n).to_string();
            self.declare(&n, &t);
        }
    }

    fn switch(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        let mut kids = Vec::new();
        self.frames.push(Frame::default());
        if let Some(c) = node.child_by_field_name("condition") {
            self.walk(c, &mut kids);
        }
        if let Some(body) = node.child_by_field_name("body") {
            let mut cursor = body.walk();
            let groups: Vec<Node<'_>> = body.named_children(&mut cursor).collect();
            for g in groups {
                let mut gc = g.walk();
                let items: Vec<Node<'_>> = g.named_children(&mut gc).collect();
                for item in items {
                    if item.kind() == "switch_label" {
                        self.switch_label(item, &mut kids);
                    } else {
                        self.walk(item, &mut kids);
                    }
                }
            }
        }
        self.frames.pop();
        out.push(ControlNode::with(ControlKind::Switch, kids));
    }

    fn switch_label(&mut self, label: Node<'_>, kids: &mut Vec<ControlNode>) {
        if self.unit.text(label).trim_start().starts_with("case") {
            kids.push(ControlNode::leaf(ControlKind::Case));
        }
        let mut cursor = label.walk();
        let parts: Vec<Node<'_>> = label.named_children(&mut cursor).collect();
        for p in parts {
            match p.kind() {
                "guard" => self.walk(p, kids),
                "pattern" | "type_pattern" | "record_pattern" => self.pattern(p),
                _ => {}
            }
        }
    }

    /// Type patterns declare a variable and mention a type.
    fn pattern(&mut self, node: Node<'_>) {
        match node.kind() {
            "type_pattern" => {
                let mut cursor = node.walk();
                let parts: Vec<Node<'_>> = node.named_children(&mut cursor).collect();
                let ty = parts.iter().copied().find(|p| p.kind() != "identifier" && p.kind() != "modifiers");
                if let Some(t) = ty {
                    self.add_types(t);
                }
                let name = parts.iter().copied().find(|p| p.kind() == "identifier");
                self.declare_pattern(name, ty);
            }
            "record_pattern" | "record_pattern_body" | "record_pattern_component" | "pattern" => {
                let mut cursor = node.walk();
                let parts: Vec<Node<'_>> = node.named_children(&mut cursor).collect();
                for p in parts {
                    match p.kind() {
                        "identifier" => {
                            let n = self.unit.text(p).to_string();
                            self.declare(&n, "");
                        }
                        "type_identifier" | "scoped_type_identifier" | "generic_type" => {
                            self.add_types(p)
                        }
                        _ => self.pattern(p),
                    }
                }
            }
            _ => {}
        }
    }

    fn try_statement(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        let mut kids = Vec::new();
        self.frames.push(Frame::default());
        let mut cursor = node.walk();
        let parts: Vec<Node<'_>> = node.named_children(&mut cursor).collect();
        for p in parts {
            if p.kind() == "catch_clause" {
                let mut inner = Vec::new();
                self.frames.push(Frame::default());
                if let Some(param) = super::first_named(p, &["catch_formal_parameter"]) {
                    if let Some(ct) = super::first_named(param, &["catch_type"]) {
                        self.add_types(ct);
                        let name = param.child_by_field_name("name");
                        self.declare_pattern(name, Some(ct));
                    }
                }
                if let Some(b) = p.child_by_field_name("body") {
                    self.walk(b, &mut inner);
                }
                self.frames.pop();
                kids.push(ControlNode::with(ControlKind::Catch, inner));
            } else {
                self.walk(p, &mut kids);
            }
        }
        self.frames.pop();
        out.push(ControlNode::with(ControlKind::Try, kids));
    }

    fn local_variables(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        let ty = node.child_by_field_name("type");
        if let Some(t) = ty {
            self.add_types(t);
        }
        let written = ty.map(|t| squash(self.unit.text(t))).unwrap_or_default();
        let mut cursor = node.walk();
        let decls: Vec<Node<'_>> = node
            .children_by_field_name("declarator", &mut cursor)
            .collect();
        for d in decls {
            let value = d.child_by_field_name("value");
            if let Some(v) = value {
                self.walk(v, out);
            }
            let mut declared = written.clone();
            if declared == "var" {
                if let Some(v) = value.filter(|v| v.kind() == "object_creation_expression") {
                    if let Receiver::Type(t) = self.receiver_of(v) {
                        declared = t;
                    }
                }
            }
            if let Some(n) = d.child_by_field_name("name") {
                let n = self.unit.text(n).to_string();
                self.declare(&n, &declared);
            }
        }
    }

    fn lambda(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        self.frames.push(Frame::default());
        if let Some(params) = node.child_by_field_name("parameters") {
            match params.kind() {
                "identifier" => {
                    let n = self.unit.text(params).to_string();
                    self.declare(&n, "");
                }
                _ => {
                    let mut cursor = params.walk();
                    let ps: Vec<Node<'_>> = params.named_children(&mut cursor).collect();
                    for p in ps {
                        match p.kind() {
                            "identifier" => {
                                let n = self.unit.text(p).to_string();
                                self.declare(&n, "");
                            }
                            "formal_parameter" => {
                                let ty = p.child_by_field_name("type");
                                if let Some(t) = ty {
                                    self.add_types(t);
                                }
                                self.declare_pattern(p.child_by_field_name("name"), ty);
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        if let Some(b) = node.child_by_field_name("body") {
            self.walk(b, out);
        }
        self.frames.pop();
    }

    fn object_creation(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        let ty = node.child_by_field_name("type");
        let written = ty.map(|t| squash(self.unit.text(t))).unwrap_or_default();
        if let Some(t) = ty {
            self.add_types(t);
        }
        let args = node.child_by_field_name("arguments");
        let simple = defectlens_core::resolve::strip_generics(&written);
        let simple = simple.rsplit('.').next().unwrap_or_default().to_string();
        self.facts.calls.push(CallSite {
            receiver: self.type_receiver(&written),
            name: simple,
            arity: argument_count(args),
            constructor: true,
        });
        let mut cursor = node.walk();
        let parts: Vec<Node<'_>> = node.named_children(&mut cursor).collect();
        for p in parts {
            match p.kind() {
                "class_body" => {
                    let sup = (!written.is_empty()).then(|| written.clone());
                    self.unit.anonymous(p, self.owner, sup);
                }
                "argument_list" => self.walk(p, out),
                k if Some(p) == ty || k == "type_arguments" => {}
                "annotation" | "marker_annotation" => {}
                _ => self.walk(p, out),
            }
        }
    }

    fn invocation(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        let object = node.child_by_field_name("object");
        let receiver = match object {
            None => Receiver::Implicit,
            Some(o) => self.receiver_of(o),
        };
        let name = node
            .child_by_field_name("name")
            .map(|n| self.unit.text(n).to_string())
            .unwrap_or_default();
        let args = node.child_by_field_name("arguments");
        self.facts.calls.push(CallSite {
            receiver,
            name,
            arity: argument_count(args),
            constructor: false,
        });
        if let Some(o) = object {
            if !matches!(o.kind(), "this" | "super") && !self.is_dotted_name_of_type(o) {
                self.walk(o, out);
            }
        }
        if let Some(a) = args {
            self.walk(a, out);
        }
    }

    /// A dotted name that denotes a type rather than a variable.
    fn is_dotted_name_of_type(&self, node: Node<'_>) -> bool {
        let last = match node.kind() {
            "identifier" => node,
            "field_access" => match node.child_by_field_name("field") {
                Some(f) => f,
                None => return false,
            },
            _ => return false,
        };
        starts_upper(self.unit.text(last)) && self.is_dotted_name(node)
    }

    fn field_access(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        let object = node.child_by_field_name("object");
        let field = node.child_by_field_name("field");
        match object {
            Some(o) if o.kind() == "this" => {
                if let Some(f) = field.filter(|f| f.kind() == "identifier") {
                    self.facts.field_refs.push(self.unit.text(f).to_string());
                }
            }
            Some(o) if o.kind() == "super" => {}
            Some(o) if self.is_dotted_name_of_type(o) => {
                let t = squash(self.unit.text(o));
                if !self.is_local_type(&t) {
                    self.facts.type_refs.push(t);
                }
            }
            Some(o) => self.walk(o, out),
            None => {}
        }
    }

    fn method_reference(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        if let Some(first) = node.named_child(0) {
            match first.kind() {
                "type_identifier" | "scoped_type_identifier" | "generic_type" | "array_type" => {
                    self.add_types(first)
                }
                "identifier" | "field_access" if self.is_dotted_name_of_type(first) => {
                    let t = squash(self.unit.text(first));
                    if !self.is_local_type(&t) {
                        self.facts.type_refs.push(t);
                    }
                }
                "super" | "this" => {}
                _ => self.walk(first, out),
            }
        }
    }

    fn walk(&mut self, node: Node<'_>, out: &mut Vec<ControlNode>) {
        match node.kind() {
            "line_comment" | "block_comment" | "annotation" | "marker_annotation" | "modifiers" => {}
            "block" | "constructor_body" | "switch_block" => self.scoped(node, out),
            "if_statement" => {
                let mut kids = Vec::new();
                self.frames.push(Frame::default());
                self.if_chain(node, &mut kids);
                self.frames.pop();
                out.push(ControlNode::with(ControlKind::If, kids));
            }
            "switch_expression" | "switch_statement" => self.switch(node, out),
            "for_statement" => self.control(ControlKind::For, node, out),
            "enhanced_for_statement" => {
                let mut kids = Vec::new();
                self.frames.push(Frame::default());
                if let Some(v) = node.child_by_field_name("value") {
                    self.walk(v, &mut kids);
                }
                let ty = node.child_by_field_name("type");
                if let Some(t) = ty {
                    self.add_types(t);
                }
                self.declare_pattern(node.child_by_field_name("name"), ty);
                if let Some(b) = node.child_by_field_name("body") {
                    self.walk(b, &mut kids);
                }
                self.frames.pop();
                out.push(ControlNode::with(ControlKind::ForEach, kids));
            }
            "while_statement" => self.control(ControlKind::While, node, out),
            "do_statement" => self.control(ControlKind::Do, node, out),
            "try_statement" | "try_with_resources_statement" => self.try_statement(node, out),
            "ternary_expression" => {
                out.push(ControlNode::leaf(ControlKind::Ternary));
                self.children(node, out);
            }
            "binary_expression" => {
                let op = node.child_by_field_name("operator").map(|o| o.kind());
                match op {
                    Some("&&") => out.push(ControlNode::leaf(ControlKind::And)),
                    Some("||") => out.push(ControlNode::leaf(ControlKind::Or)),
                    _ => {}
                }
                self.children(node, out);
            }
            "lambda_expression" => self.lambda(node, out),
            "local_variable_declaration" => self.local_variables(node, out),
            "resource" => {
                let ty = node.child_by_field_name("type");
                if let Some(t) = ty {
                    self.add_types(t);
                }
                if let Some(v) = node.child_by_field_name("value") {
                    self.walk(v, out);
                }
                if ty.is_some() {
                    self.declare_pattern(node.child_by_field_name("name"), ty);
                } else {
                    self.children(node, out);
                }
            }
            "object_creation_expression" => self.object_creation(node, out),
            "method_invocation" => self.invocation(node, out),
            "explicit_constructor_invocation" => {
                let receiver = match node.child_by_field_name("constructor").map(|c| c.kind()) {
                    Some("super") => Receiver::Super,
                    _ => Receiver::Implicit,
                };
                let args = node.child_by_field_name("arguments");
                self.facts.calls.push(CallSite {
                    receiver,
                    name: String::new(),
                    arity: argument_count(args),
                    constructor: true,
                });
                if let Some(a) = args {
                    self.walk(a, out);
                }
            }
            "field_access" => self.field_access(node, out),
            "method_reference" => self.method_reference(node, out),
            "identifier" => {
                let name = self.unit.text(node);
                if self.var_type(name).is_none() {
                    self.facts.field_refs.push(name.to_string());
                }
            }
            "cast_expression" => {
                let mut cursor = node.walk();
                let parts: Vec<Node<'_>> = node.named_children(&mut cursor).collect();
                let value = node.child_by_field_name("value");
                for p in parts {
                    if Some(p) == value {
                        self.walk(p, out);
                    } else {
                        self.add_types(p);
                    }
                }
            }
            "instanceof_expression" => {
                if let Some(l) = node.child_by_field_name("left") {
                    self.walk(l, out);
                }
                let right = node.child_by_field_name("right");
                if let Some(r) = right {
                    self.add_types(r);
                }
                self.declare_pattern(node.child_by_field_name("name"), right);
                if let Some(p) = node.child_by_field_name("pattern") {
                    self.pattern(p);
                }
            }
            "class_literal" | "type_identifier" | "scoped_type_identifier" | "generic_type"
            | "array_type" | "type_arguments" => self.add_types(node),
            "array_creation_expression" => {
                if let Some(t) = node.child_by_field_name("type") {
                    self.add_types(t);
                }
                let mut cursor = node.walk();
                let parts: Vec<Node<'_>> = node.named_children(&mut cursor).collect();
                let ty = node.child_by_field_name("type");
                for p in parts.into_iter().filter(|p| Some(*p) != ty) {
                    self.walk(p, out);
                }
            }
            "labeled_statement" => {
                let mut cursor = node.walk();
                let parts: Vec<Node<'_>> = node.named_children(&mut cursor).collect();
                for p in parts.into_iter().filter(|p| p.kind() != "identifier") {
                    self.walk(p, out);
                }
            }
            "break_statement" | "continue_statement" => {}
            k if is_type_declaration(k) => {
                let name = self.unit.local_type(node, self.owner);
                if let Some(f) = self.frames.last_mut() {
                    f.types.push(name);
                }
            }
            _ => self.children(node, out),
        }
    }
}
