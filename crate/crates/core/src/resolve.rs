//! Snapshot-internal name resolution and the project-wide type graph.
//!
//! A reference resolves only when its name unambiguously matches a named
//! (top-level or nested) entity of the same snapshot, taking the file's
//! package, its imports and the enclosing classes into account. Anything
//! else is recorded in [`ProjectModel::unresolved`] and never contributes to
//! a metric.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{BodyFacts, CallSite, ClassEntity, Receiver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(pub usize);

/// A method identified by its declaring entity and declaration index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MethodRef {
    pub entity: EntityId,
    pub index: usize,
}

/// The body a call was made from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Caller {
    Method(usize),
    InitBlock(usize),
    FieldInit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Invocation {
    pub entity: EntityId,
    pub caller: Caller,
    pub callee: MethodRef,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelDiagnostic {
    /// Two entities share a fully qualified name; the later one was dropped.
    DuplicateName { fqn: String, file_path: String },
    /// More than one entity matched a reference; it was left unresolved.
    AmbiguousName { from: String, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("inheritance cycle through {0}")]
    InheritanceCycle(String),
}

#[derive(Debug, Clone)]
pub struct ProjectModel {
    entities: Vec<ClassEntity>,
    by_fqn: BTreeMap<String, EntityId>,
    inherits: BTreeSet<(EntityId, EntityId)>,
    uses: BTreeSet<(EntityId, EntityId)>,
    invokes: Vec<Invocation>,
    unresolved: BTreeSet<String>,
    diagnostics: Vec<ModelDiagnostic>,
}

impl ProjectModel {
    pub fn entities(&self) -> &[ClassEntity] {
        &self.entities
    }

    pub fn entity(&self, id: EntityId) -> &ClassEntity {
        &self.entities[id.0]
    }

    pub fn id_of(&self, fqn: &str) -> Option<EntityId> {
        self.by_fqn.get(fqn).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = EntityId> + '_ {
        (0..self.entities.len()).map(EntityId)
    }

    /// Entities that get metric rows (top-level and nested named classes),
    /// in fully qualified name order.
    pub fn named_ids(&self) -> impl Iterator<Item = EntityId> + '_ {
        self.by_fqn
            .values()
            .copied()
            .filter(move |id| self.entity(*id).nesting.is_named())
    }

    /// Child -> direct supertype edges.
    pub fn inherits(&self) -> &BTreeSet<(EntityId, EntityId)> {
        &self.inherits
    }

    pub fn uses(&self) -> &BTreeSet<(EntityId, EntityId)> {
        &self.uses
    }

    pub fn invokes(&self) -> &[Invocation] {
        &self.invokes
    }

    pub fn unresolved(&self) -> &BTreeSet<String> {
        &self.unresolved
    }

    pub fn diagnostics(&self) -> &[ModelDiagnostic] {
        &self.diagnostics
    }

    pub fn parents(&self, id: EntityId) -> impl Iterator<Item = EntityId> + '_ {
        self.inherits
            .range((id, EntityId(0))..=(id, EntityId(usize::MAX)))
            .map(|(_, p)| *p)
    }

    pub fn children(&self, id: EntityId) -> impl Iterator<Item = EntityId> + '_ {
        self.inherits
            .iter()
            .filter(move |(_, p)| *p == id)
            .map(|(c, _)| *c)
    }

    pub fn enclosing(&self, id: EntityId) -> Option<EntityId> {
        self.entity(id)
            .enclosing
            .as_deref()
            .and_then(|fqn| self.id_of(fqn))
    }

    /// Nearest enclosing-or-self entity that is a named class.
    pub fn named_owner(&self, id: EntityId) -> Option<EntityId> {
        let mut cur = Some(id);
        while let Some(c) = cur {
            if self.entity(c).nesting.is_named() {
                return Some(c);
            }
            cur = self.enclosing(c);
        }
        None
    }

    /// Direct children in the lexical nesting tree.
    pub fn lexical_children(&self, id: EntityId) -> impl Iterator<Item = EntityId> + '_ {
        let fqn = self.entity(id).fqn.clone();
        self.ids()
            .filter(move |c| self.entity(*c).enclosing.as_deref() == Some(fqn.as_str()))
    }
}

enum Lookup {
    Found(EntityId),
    External(String),
    Ambiguous,
}

/// Strips generic arguments and array brackets: `Map<K, List<V>>[]` -> `Map`.
pub fn strip_generics(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    let mut depth = 0usize;
    for ch in name.chars() {
        match ch {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            '[' | ']' => {}
            c if depth == 0 && !c.is_whitespace() => out.push(c),
            _ => {}
        }
    }
    out
}

/// Every type name in a written type, generic arguments included:
/// `Map<K, List<? extends V>>` gives `Map`, `K`, `List`, `V`.
pub fn type_names_in(written: &str) -> Vec<String> {
    written
        .split(|c: char| matches!(c, '<' | '>' | ',' | '&' | '?' | '[' | ']') || c.is_whitespace())
        .filter(|t| !t.is_empty() && *t != "extends" && *t != "super")
        .map(String::from)
        .collect()
}

const IGNORED_TYPE_NAMES: [&str; 1] = ["var"];

struct Resolver<'a> {
    entities: &'a [ClassEntity],
    by_fqn: &'a BTreeMap<String, EntityId>,
    enclosing: Vec<Option<EntityId>>,
}

impl<'a> Resolver<'a> {
    fn is_target(&self, fqn: &str) -> Option<EntityId> {
        self.by_fqn
            .get(fqn)
            .copied()
            .filter(|id| self.entities[id.0].nesting.is_named())
    }

    fn resolve(&self, from: EntityId, raw: &str) -> Lookup {
        let name = strip_generics(raw);
        if let Some((head, rest)) = name.split_once('.') {
            if let Some(id) = self.is_target(&name) {
                return Lookup::Found(id);
            }
            return match self.resolve_simple(from, head) {
                Lookup::Found(h) => {
                    let joined = format!("{}.{}", self.entities[h.0].fqn, rest);
                    match self.is_target(&joined) {
                        Some(id) => Lookup::Found(id),
                        None => Lookup::External(joined),
                    }
                }
                Lookup::External(q) if q != head => Lookup::External(format!("{q}.{rest}")),
                Lookup::Ambiguous => Lookup::Ambiguous,
                Lookup::External(_) => Lookup::External(name),
            };
        }
        self.resolve_simple(from, &name)
    }

    fn resolve_simple(&self, from: EntityId, name: &str) -> Lookup {
        // Member types of the enclosing chain, or one of the chain itself.
        let mut cur = Some(from);
        while let Some(c) = cur {
            let e = &self.entities[c.0];
            if e.nesting.is_named() {
                if let Some(id) = self.is_target(&format!("{}.{}", e.fqn, name)) {
                    return Lookup::Found(id);
                }
                if e.simple_name == name {
                    return Lookup::Found(c);
                }
            }
            cur = self.enclosing[c.0];
        }
        let ctx = &self.entities[from.0];
        for imp in ctx.imports.iter().filter(|i| !i.wildcard && !i.is_static) {
            if imp.path == name || imp.path.ends_with(&format!(".{name}")) {
                return match self.is_target(&imp.path) {
                    Some(id) => Lookup::Found(id),
                    None => Lookup::External(imp.path.clone()),
                };
            }
        }
        let same_package = if ctx.package.is_empty() {
            name.to_string()
        } else {
            format!("{}.{}", ctx.package, name)
        };
        if let Some(id) = self.is_target(&same_package) {
            return Lookup::Found(id);
        }
        let mut hits: Vec<EntityId> = ctx
            .imports
            .iter()
            .filter(|i| i.wildcard && !i.is_static)
            .filter_map(|i| self.is_target(&format!("{}.{}", i.path, name)))
            .collect();
        hits.sort();
        hits.dedup();
        match hits.len() {
            0 => Lookup::External(name.to_string()),
            1 => Lookup::Found(hits[0]),
            _ => Lookup::Ambiguous,
        }
    }
}

struct Builder<'a> {
    resolver: Resolver<'a>,
    unresolved: BTreeSet<String>,
    diagnostics: BTreeSet<ModelDiagnostic>,
}

impl Builder<'_> {
    fn lookup(&mut self, from: EntityId, raw: &str) -> Option<EntityId> {
        let name = strip_generics(raw);
        if name.is_empty() || IGNORED_TYPE_NAMES.contains(&name.as_str()) {
            return None;
        }
        match self.resolver.resolve(from, &name) {
            Lookup::Found(id) => Some(id),
            Lookup::External(q) => {
                self.unresolved.insert(q);
                None
            }
            Lookup::Ambiguous => {
                self.diagnostics.insert(ModelDiagnostic::AmbiguousName {
                    from: self.resolver.entities[from.0].fqn.clone(),
                    name: name.clone(),
                });
                self.unresolved.insert(name);
                None
            }
        }
    }
}

fn collect_body_types<'b>(body: &'b BodyFacts, out: &mut Vec<&'b str>) {
    out.extend(body.type_refs.iter().map(String::as_str));
    for call in &body.calls {
        if let Receiver::Type(t) = &call.receiver {
            out.push(t.as_str());
        }
    }
}

/// Every type name an entity's own declarations mention.
fn mentioned_types(e: &ClassEntity) -> Vec<String> {
    let mut out: Vec<&str> = Vec::new();
    for f in &e.fields {
        out.extend(f.type_refs.iter().map(String::as_str));
        if let Some(init) = &f.initializer {
            collect_body_types(init, &mut out);
        }
    }
    for m in &e.methods {
        out.extend(m.type_refs.iter().map(String::as_str));
        if let Some(body) = &m.body {
            collect_body_types(body, &mut out);
        }
    }
    for b in &e.init_blocks {
        collect_body_types(b, &mut out);
    }
    let mut names: Vec<String> = e
        .supertype_names
        .iter()
        .flat_map(|s| type_names_in(s))
        .collect();
    names.extend(out.into_iter().map(String::from));
    names
}

/// Builds the resolved type graph for one release snapshot.
///
/// Entities are kept in input order except that a later entity whose fully
/// qualified name is already taken is dropped with a
/// [`ModelDiagnostic::DuplicateName`].
pub fn build_project_model(entities: Vec<ClassEntity>) -> Result<ProjectModel, ModelError> {
    let mut kept = Vec::with_capacity(entities.len());
    let mut by_fqn = BTreeMap::new();
    let mut diagnostics = BTreeSet::new();
    for e in entities {
        if by_fqn.contains_key(&e.fqn) {
            diagnostics.insert(ModelDiagnostic::DuplicateName {
                fqn: e.fqn.clone(),
                file_path: e.file_path.clone(),
            });
            continue;
        }
        by_fqn.insert(e.fqn.clone(), EntityId(kept.len()));
        kept.push(e);
    }
    let enclosing: Vec<Option<EntityId>> = kept
        .iter()
        .map(|e| e.enclosing.as_deref().and_then(|f| by_fqn.get(f).copied()))
        .collect();

    let mut b = Builder {
        resolver: Resolver {
            entities: &kept,
            by_fqn: &by_fqn,
            enclosing: enclosing.clone(),
        },
        unresolved: BTreeSet::new(),
        diagnostics,
    };

    // Inheritance among named entities only.
    let mut inherits = BTreeSet::new();
    for (i, e) in kept.iter().enumerate() {
        let id = EntityId(i);
        for sup in &e.supertype_names {
            if let Some(p) = b.lookup(id, sup) {
                if e.nesting.is_named() && p != id {
                    inherits.insert((id, p));
                }
            }
        }
    }
    check_acyclic(&kept, &inherits)?;

    let partial = ProjectModel {
        entities: Vec::new(),
        by_fqn: BTreeMap::new(),
        inherits: inherits.clone(),
        uses: BTreeSet::new(),
        invokes: Vec::new(),
        unresolved: BTreeSet::new(),
        diagnostics: Vec::new(),
    };

    // Invocations: resolved per body, for every entity.
    let mut invokes = Vec::new();
    for (i, e) in kept.iter().enumerate() {
        let id = EntityId(i);
        let mut bodies: Vec<(Caller, &BodyFacts)> = Vec::new();
        for (mi, m) in e.methods.iter().enumerate() {
            if let Some(body) = &m.body {
                bodies.push((Caller::Method(mi), body));
            }
        }
        for (bi, body) in e.init_blocks.iter().enumerate() {
            bodies.push((Caller::InitBlock(bi), body));
        }
        for (fi, f) in e.fields.iter().enumerate() {
            if let Some(init) = &f.initializer {
                bodies.push((Caller::FieldInit(fi), init));
            }
        }
        for (caller, body) in bodies {
            for call in &body.calls {
                if let Some(callee) = resolve_call(&mut b, &kept, &enclosing, &partial, id, call) {
                    invokes.push(Invocation {
                        entity: id,
                        caller,
                        callee,
                    });
                }
            }
        }
    }

    // Uses: edges between named classes; code of anonymous and local classes
    // counts for their nearest named owner.
    let mut uses = BTreeSet::new();
    let owner_of = |mut id: EntityId| -> Option<EntityId> {
        loop {
            if kept[id.0].nesting.is_named() {
                return Some(id);
            }
            id = enclosing[id.0]?;
        }
    };
    for (i, e) in kept.iter().enumerate() {
        let id = EntityId(i);
        let Some(owner) = owner_of(id) else { continue };
        for name in mentioned_types(e) {
            if let Some(t) = b.lookup(id, &name) {
                if t != owner {
                    uses.insert((owner, t));
                }
            }
        }
    }
    for inv in &invokes {
        if let Some(owner) = owner_of(inv.entity) {
            let target = inv.callee.entity;
            if target != owner && kept[target.0].nesting.is_named() {
                uses.insert((owner, target));
            }
        }
    }
    invokes.sort();
    invokes.dedup();

    let Builder {
        unresolved,
        diagnostics,
        ..
    } = b;
    Ok(ProjectModel {
        entities: kept,
        by_fqn,
        inherits,
        uses,
        invokes,
        unresolved,
        diagnostics: diagnostics.into_iter().collect(),
    })
}

fn check_acyclic(
    entities: &[ClassEntity],
    inherits: &BTreeSet<(EntityId, EntityId)>,
) -> Result<(), ModelError> {
    let n = entities.len();
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, p) in inherits {
        out[c.0].push(p.0);
        indegree[p.0] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|i| indegree[*i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = queue.pop_front() {
        seen += 1;
        for &p in &out[i] {
            indegree[p] -= 1;
            if indegree[p] == 0 {
                queue.push_back(p);
            }
        }
    }
    if seen == n {
        Ok(())
    } else {
        let culprit = (0..n).find(|i| indegree[*i] > 0).unwrap_or(0);
        Err(ModelError::InheritanceCycle(entities[culprit].fqn.clone()))
    }
}

fn find_method(e: &ClassEntity, name: &str, arity: usize, constructor: bool) -> Option<usize> {
    e.methods
        .iter()
        .position(|m| m.is_constructor == constructor && m.name == name && m.accepts_arity(arity))
}

/// Looks for a method in `start` and then breadth-first through its
/// resolvable supertypes.
fn find_in_hierarchy(
    entities: &[ClassEntity],
    model: &ProjectModel,
    start: EntityId,
    include_start: bool,
    name: &str,
    arity: usize,
) -> Option<MethodRef> {
    let mut queue = VecDeque::new();
    let mut seen = BTreeSet::new();
    if include_start {
        queue.push_back(start);
    } else {
        queue.extend(model.parents(start));
    }
    while let Some(id) = queue.pop_front() {
        if !seen.insert(id) {
            continue;
        }
        if let Some(index) = find_method(&entities[id.0], name, arity, false) {
            return Some(MethodRef { entity: id, index });
        }
        queue.extend(model.parents(id));
    }
    None
}

fn resolve_call(
    b: &mut Builder<'_>,
    entities: &[ClassEntity],
    enclosing: &[Option<EntityId>],
    model: &ProjectModel,
    from: EntityId,
    call: &CallSite,
) -> Option<MethodRef> {
    if call.constructor {
        let target = match &call.receiver {
            Receiver::Implicit => Some(from),
            Receiver::Super => model.parents(from).next(),
            Receiver::Type(t) => b.lookup(from, t),
            Receiver::Unknown => None,
        }?;
        let e = &entities[target.0];
        return find_method(e, &e.simple_name, call.arity, true)
            .map(|index| MethodRef { entity: target, index });
    }
    match &call.receiver {
        Receiver::Implicit => {
            let mut cur = Some(from);
            while let Some(c) = cur {
                if let Some(m) = find_in_hierarchy(entities, model, c, true, &call.name, call.arity) {
                    return Some(m);
                }
                cur = enclosing[c.0];
            }
            None
        }
        Receiver::Super => find_in_hierarchy(entities, model, from, false, &call.name, call.arity),
        Receiver::Type(t) => {
            let target = b.lookup(from, t)?;
            find_in_hierarchy(entities, model, target, true, &call.name, call.arity)
        }
        Receiver::Unknown => None,
    }
}
