//! Parsed representation of Java type declarations.
//!
//! A [`ClassEntity`] is what a source parser emits for one class, interface,
//! enum or annotation declaration (including nested, anonymous and local
//! ones). Method bodies are not kept as syntax trees; the parser reduces each
//! body to [`BodyFacts`], which holds exactly what the metrics need: the
//! control-structure skeleton, referenced type names, call sites and
//! candidate attribute references.

use alloc::string::String;
use alloc::vec::Vec;

/// Inclusive 1-based line range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineSpan {
    pub start: u32,
    pub end: u32,
}

impl LineSpan {
    pub fn new(start: u32, end: u32) -> Self {
        debug_assert!(start >= 1 && start <= end);
        Self { start, end }
    }

    pub fn len(&self) -> u32 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, line: u32) -> bool {
        self.start <= line && line <= self.end
    }

    pub fn encloses(&self, other: &LineSpan) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKind {
    Class,
    Interface,
    Enum,
    Annotation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nesting {
    TopLevel,
    Nested,
    Anonymous,
    Local,
}

impl Nesting {
    /// Top-level and nested named classes are the ones that get metric rows.
    pub fn is_named(self) -> bool {
        matches!(self, Nesting::TopLevel | Nesting::Nested)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Visibility {
    Public,
    Protected,
    Package,
    Private,
}

/// How a single source line is classified.
///
/// `Mixed` lines hold both code and comment text; they count as logical and
/// as comment lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineClass {
    Blank,
    Comment,
    Code,
    Mixed,
}

impl LineClass {
    pub fn is_comment(self) -> bool {
        matches!(self, LineClass::Comment | LineClass::Mixed)
    }

    pub fn is_logical(self) -> bool {
        matches!(self, LineClass::Code | LineClass::Mixed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Import {
    /// Dotted path without the trailing `.*`.
    pub path: String,
    pub wildcard: bool,
    pub is_static: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ControlKind {
    If,
    /// An `if` that is the direct `else` branch of another `if`.
    ElseIf,
    Switch,
    Case,
    For,
    ForEach,
    While,
    Do,
    Try,
    Catch,
    Ternary,
    And,
    Or,
}

impl ControlKind {
    /// Contributes one to McCabe complexity.
    pub fn is_decision(self) -> bool {
        !matches!(self, ControlKind::Switch | ControlKind::Try)
    }

    /// Opens a new nesting level for NLE.
    pub fn deepens(self) -> bool {
        matches!(
            self,
            ControlKind::If
                | ControlKind::Switch
                | ControlKind::For
                | ControlKind::ForEach
                | ControlKind::While
                | ControlKind::Do
                | ControlKind::Try
        )
    }
}

/// Control-structure skeleton of a body. Children are the structures
/// syntactically inside this one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ControlNode {
    pub kind: ControlKind,
    pub children: Vec<ControlNode>,
}

impl ControlNode {
    pub fn leaf(kind: ControlKind) -> Self {
        Self {
            kind,
            children: Vec::new(),
        }
    }

    pub fn with(kind: ControlKind, children: Vec<ControlNode>) -> Self {
        Self { kind, children }
    }
}

/// Receiver of a call as far as syntax tells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Receiver {
    /// `m()` or `this.m()`; for constructors, `this(..)`.
    Implicit,
    /// `super.m()` or `super(..)`.
    Super,
    /// A receiver whose static type is known by name: `T.m()`, `new T().m()`,
    /// `v.m()` for a variable declared as `T`, or `new T(..)` itself.
    Type(String),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CallSite {
    pub receiver: Receiver,
    /// Method name; for constructor calls the simple class name.
    pub name: String,
    pub arity: usize,
    pub constructor: bool,
}

/// What the metrics need to know about one method body, initializer block or
/// field initializer. Code inside anonymous or local class bodies is not part
/// of the enclosing body.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BodyFacts {
    pub control: Vec<ControlNode>,
    /// Type names as written (generics already split into separate names).
    pub type_refs: Vec<String>,
    pub calls: Vec<CallSite>,
    /// Names that may refer to attributes of the declaring class: unshadowed
    /// simple identifiers and `this.x` accesses.
    pub field_refs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDecl {
    pub name: String,
    pub type_name: String,
    pub type_refs: Vec<String>,
    pub visibility: Visibility,
    pub has_initializer: bool,
    pub initializer: Option<BodyFacts>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MethodDecl {
    pub name: String,
    /// `name(T1,T2)` with parameter types as written.
    pub signature: String,
    pub arity: usize,
    pub varargs: bool,
    pub visibility: Visibility,
    pub is_constructor: bool,
    /// Parameter, return and `throws` types.
    pub type_refs: Vec<String>,
    /// `None` for abstract and interface methods without a body.
    pub body: Option<BodyFacts>,
}

impl MethodDecl {
    pub fn accepts_arity(&self, arity: usize) -> bool {
        if self.varargs {
            arity + 1 >= self.arity
        } else {
            arity == self.arity
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassEntity {
    pub fqn: String,
    pub simple_name: String,
    pub kind: ClassKind,
    pub file_path: String,
    /// Package of the compilation unit; empty for the default package.
    pub package: String,
    pub imports: Vec<Import>,
    pub span: LineSpan,
    pub nesting: Nesting,
    /// Fully qualified name of the directly enclosing entity.
    pub enclosing: Option<String>,
    /// `extends`/`implements` names as written.
    pub supertype_names: Vec<String>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub init_blocks: Vec<BodyFacts>,
    /// One entry per line of `span`.
    pub line_classes: Vec<LineClass>,
}

impl ClassEntity {
    pub fn comment_lines(&self) -> usize {
        self.line_classes.iter().filter(|c| c.is_comment()).count()
    }

    pub fn logical_lines(&self) -> usize {
        self.line_classes.iter().filter(|c| c.is_logical()).count()
    }

    pub fn blank_lines(&self) -> usize {
        self.line_classes
            .iter()
            .filter(|c| **c == LineClass::Blank)
            .count()
    }

    pub fn line_class(&self, line: u32) -> Option<LineClass> {
        if !self.span.contains(line) {
            return None;
        }
        self.line_classes
            .get((line - self.span.start) as usize)
            .copied()
    }

    /// All bodies with executable code: methods with bodies, then init blocks.
    pub fn bodies(&self) -> impl Iterator<Item = &BodyFacts> {
        self.methods
            .iter()
            .filter_map(|m| m.body.as_ref())
            .chain(self.init_blocks.iter())
    }
}
