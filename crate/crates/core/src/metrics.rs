//! The twelve class-level metrics.
//!
//! All functions take a named entity of a [`ProjectModel`]; anonymous and
//! local classes only matter through the lines they remove from their
//! enclosing class.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{BodyFacts, ControlKind, ControlNode, LineClass, Visibility};
use crate::resolve::{Caller, EntityId, MethodRef, ModelError, ProjectModel};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricVector {
    pub fqn: String,
    pub loc: u32,
    pub wmc: u32,
    pub dit: u32,
    pub noc: u32,
    pub cbo: u32,
    pub rfc: u32,
    pub lcom5: u32,
    pub npa: u32,
    pub npm: u32,
    pub nle: u32,
    pub cboi: u32,
    pub cd: f64,
}

impl MetricVector {
    /// Values in canonical order: LOC, WMC, DIT, NOC, CBO, RFC, LCOM5, NPA,
    /// NPM, NLE, CBOI, CD.
    pub fn features(&self) -> [f64; 12] {
        [
            self.loc as f64,
            self.wmc as f64,
            self.dit as f64,
            self.noc as f64,
            self.cbo as f64,
            self.rfc as f64,
            self.lcom5 as f64,
            self.npa as f64,
            self.npm as f64,
            self.nle as f64,
            self.cboi as f64,
            self.cd,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeAndDocs {
    pub loc: u32,
    pub cd: f64,
    pub npa: u32,
    pub npm: u32,
}

/// Line classes of the lines that belong to the class itself, i.e. its span
/// minus the spans of directly enclosed classes.
fn own_lines(model: &ProjectModel, id: EntityId) -> Vec<LineClass> {
    let e = model.entity(id);
    let mut excluded = vec![false; e.span.len() as usize];
    for child in model.lexical_children(id) {
        let span = model.entity(child).span;
        for line in span.start.max(e.span.start)..=span.end.min(e.span.end) {
            excluded[(line - e.span.start) as usize] = true;
        }
    }
    e.line_classes
        .iter()
        .zip(excluded)
        .filter_map(|(c, x)| (!x).then_some(*c))
        .collect()
}

pub fn size_and_docs(model: &ProjectModel, id: EntityId) -> SizeAndDocs {
    let e = model.entity(id);
    let lines = own_lines(model, id);
    let comment = lines.iter().filter(|c| c.is_comment()).count();
    let logical = lines.iter().filter(|c| c.is_logical()).count();
    let cd = if comment + logical == 0 {
        0.0
    } else {
        comment as f64 / (comment + logical) as f64
    };
    SizeAndDocs {
        loc: lines.len() as u32,
        cd,
        npa: e
            .fields
            .iter()
            .filter(|f| f.visibility == Visibility::Public)
            .count() as u32,
        npm: e
            .methods
            .iter()
            .filter(|m| m.visibility == Visibility::Public)
            .count() as u32,
    }
}

/// McCabe complexity of one body: one plus its decision points.
pub fn cyclomatic(body: &BodyFacts) -> u32 {
    fn count(nodes: &[ControlNode]) -> u32 {
        nodes
            .iter()
            .map(|n| u32::from(n.kind.is_decision()) + count(&n.children))
            .sum()
    }
    1 + count(&body.control)
}

/// Deepest control-structure nesting in one body. An `else if` sits at the
/// depth of the `if` it continues.
pub fn nesting_depth(body: &BodyFacts) -> u32 {
    fn walk(nodes: &[ControlNode], parent_depth: u32) -> u32 {
        nodes
            .iter()
            .map(|n| {
                let depth = match n.kind {
                    ControlKind::ElseIf => parent_depth,
                    k if k.deepens() => parent_depth + 1,
                    _ => parent_depth,
                };
                depth.max(walk(&n.children, depth))
            })
            .max()
            .unwrap_or(parent_depth)
    }
    walk(&body.control, 0)
}

/// (WMC, NLE) over local methods and initializer blocks. Methods without a
/// body count as complexity 1.
pub fn complexity(model: &ProjectModel, id: EntityId) -> (u32, u32) {
    let e = model.entity(id);
    let mut wmc = 0;
    let mut nle = 0;
    for m in &e.methods {
        match &m.body {
            Some(body) => {
                wmc += cyclomatic(body);
                nle = nle.max(nesting_depth(body));
            }
            None => wmc += 1,
        }
    }
    for body in &e.init_blocks {
        wmc += cyclomatic(body);
        nle = nle.max(nesting_depth(body));
    }
    (wmc, nle)
}

/// Longest path to an ancestor along resolvable inherits edges.
pub fn depth_of_inheritance(model: &ProjectModel, id: EntityId) -> Result<u32, ModelError> {
    fn longest(
        model: &ProjectModel,
        id: EntityId,
        memo: &mut BTreeMap<EntityId, u32>,
        stack: &mut BTreeSet<EntityId>,
    ) -> Result<u32, ModelError> {
        if let Some(d) = memo.get(&id) {
            return Ok(*d);
        }
        if !stack.insert(id) {
            return Err(ModelError::InheritanceCycle(model.entity(id).fqn.clone()));
        }
        let mut best = 0;
        for p in model.parents(id).collect::<Vec<_>>() {
            best = best.max(1 + longest(model, p, memo, stack)?);
        }
        stack.remove(&id);
        memo.insert(id, best);
        Ok(best)
    }
    longest(model, id, &mut BTreeMap::new(), &mut BTreeSet::new())
}

/// (DIT, NOC).
pub fn inheritance(model: &ProjectModel, id: EntityId) -> Result<(u32, u32), ModelError> {
    let dit = depth_of_inheritance(model, id)?;
    let noc = model.children(id).count() as u32;
    Ok((dit, noc))
}

/// Distinct resolved callees of the class's methods, init blocks and field
/// initializers.
fn callees(model: &ProjectModel, id: EntityId) -> BTreeSet<MethodRef> {
    model
        .invokes()
        .iter()
        .filter(|inv| inv.entity == id)
        .map(|inv| inv.callee)
        .collect()
}

/// (CBO, CBOI, RFC).
pub fn coupling(model: &ProjectModel, id: EntityId) -> (u32, u32, u32) {
    let cbo = model.uses().iter().filter(|(a, _)| *a == id).count() as u32;
    let cboi = model.uses().iter().filter(|(_, b)| *b == id).count() as u32;
    let mut response: BTreeSet<MethodRef> = (0..model.entity(id).methods.len())
        .map(|index| MethodRef { entity: id, index })
        .collect();
    response.extend(callees(model, id));
    (cbo, cboi, response.len() as u32)
}

/// Connected components of the method/attribute graph that contain at least
/// one method.
pub fn cohesion(model: &ProjectModel, id: EntityId) -> u32 {
    let e = model.entity(id);
    let methods = e.methods.len();
    if methods == 0 {
        return 0;
    }
    let mut uf = UnionFind::new(methods + e.fields.len());
    let field_index: BTreeMap<&str, usize> = e
        .fields
        .iter()
        .enumerate()
        .map(|(i, f)| (f.name.as_str(), methods + i))
        .collect();
    for (mi, m) in e.methods.iter().enumerate() {
        if let Some(body) = &m.body {
            for name in &body.field_refs {
                if let Some(&fi) = field_index.get(name.as_str()) {
                    uf.union(mi, fi);
                }
            }
        }
    }
    for inv in model.invokes().iter().filter(|i| i.entity == id) {
        if let Caller::Method(mi) = inv.caller {
            if inv.callee.entity == id {
                uf.union(mi, inv.callee.index);
            }
        }
    }
    let roots: BTreeSet<usize> = (0..methods).map(|m| uf.find(m)).collect();
    roots.len() as u32
}

pub fn metric_vector(model: &ProjectModel, id: EntityId) -> Result<MetricVector, ModelError> {
    let size = size_and_docs(model, id);
    let (wmc, nle) = complexity(model, id);
    let (dit, noc) = inheritance(model, id)?;
    let (cbo, cboi, rfc) = coupling(model, id);
    Ok(MetricVector {
        fqn: model.entity(id).fqn.clone(),
        loc: size.loc,
        wmc,
        dit,
        noc,
        cbo,
        rfc,
        lcom5: cohesion(model, id),
        npa: size.npa,
        npm: size.npm,
        nle,
        cboi,
        cd: size.cd,
    })
}

/// Metric vectors for every named class, in fully qualified name order.
pub fn compute_all(model: &ProjectModel) -> Result<Vec<MetricVector>, ModelError> {
    model.named_ids().map(|id| metric_vector(model, id)).collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
