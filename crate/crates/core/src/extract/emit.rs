use std::collections::HashMap;

use super::ast::*;
use super::symbols::{Counters, Lookup, SymbolTable, TypeIdx, TypeTarget};
use super::Diagnostic;
use crate::model::{
    make_stable_id, props, Edge, EdgeType, GraphNode, NodeKind, SemanticGraphFile, SourceLocation,
    StableSymbolId, SymbolKind,
};

/// Members every class inherits from `java.lang.Object`; calls to them are
/// external and not worth a diagnostic.
const OBJECT_METHODS: &[&str] = &[
    "clone",
    "equals",
    "finalize",
    "getClass",
    "hashCode",
    "notify",
    "notifyAll",
    "toString",
    "wait",
];

/// Resolves the bodies of file `file` and emits its graph. Nodes come out
/// in declaration order.
pub fn emit_file(table: &SymbolTable<'_>, file: usize) -> (SemanticGraphFile, Vec<Diagnostic>) {
    let parsed = &table.files()[file];
    let uri = parsed.uri.as_str();
    let mut e = Emitter {
        table,
        file,
        uri,
        package: parsed.unit.package_name(),
        basename: uri.rsplit('/').next().unwrap_or(uri).to_string(),
        nodes: Vec::new(),
        diags: Vec::new(),
        scopes: Vec::new(),
        ty: None,
        tparams: Vec::new(),
        owner: None,
        counters: Counters::default(),
        source: None,
    };
    for decl in &parsed.unit.types {
        e.type_decl(decl);
    }
    (SemanticGraphFile::new(uri, e.nodes), e.diags)
}

#[derive(Debug, Clone)]
struct Local {
    id: StableSymbolId,
    ty: Option<TypeTarget>,
}

/// What an expression denotes, as far as resolution is concerned.
#[derive(Debug, Clone)]
enum Res {
    /// A value, with its project-local type when known.
    Value(Option<TypeTarget>),
    Type(TypeIdx),
    Package(String),
    /// `super` inside the given type.
    Super(TypeIdx),
    Unknown,
}

struct Emitter<'t, 'a> {
    table: &'t SymbolTable<'a>,
    file: usize,
    uri: &'a str,
    package: String,
    basename: String,
    nodes: Vec<GraphNode>,
    diags: Vec<Diagnostic>,
    scopes: Vec<HashMap<String, Local>>,
    /// Innermost enclosing type.
    ty: Option<TypeIdx>,
    /// Type parameters of the enclosing method.
    tparams: Vec<(String, StableSymbolId)>,
    /// Node that declares locals met in the current body.
    owner: Option<usize>,
    counters: Counters,
    /// Node that receives CALL edges for references in the current body.
    source: Option<usize>,
}

impl Emitter<'_, '_> {
    fn location(&self, span: Span) -> SourceLocation {
        SourceLocation::new(
            self.uri,
            (span.start.line as i32, span.start.col as i32),
            (span.end.line as i32, span.end.col as i32),
        )
    }

    fn diag(&mut self, at: Pos, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(self.uri, at, msg));
    }

    fn push_node(&mut self, id: StableSymbolId, kind: NodeKind, name: &Ident, decl: Span) -> usize {
        let node = GraphNode::new(id, kind.clone(), name.name.clone())
            .with_location(self.location(name.span))
            .with_property(props::LOC, decl.line_count().to_string())
            .with_property(props::PACKAGE, self.package.clone())
            .with_property(props::FILE, self.basename.clone());
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn set_local(&mut self, n: usize, local: bool) {
        let v = if local { "true" } else { "false" };
        self.nodes[n]
            .properties
            .insert(props::IS_LOCAL.to_string(), v.to_string());
    }

    fn edge(&mut self, from: usize, to: &StableSymbolId, ty: EdgeType, span: Span) {
        let loc = self.location(span);
        self.nodes[from].edges.push(Edge::new(to.clone(), ty, loc));
    }

    fn call(&mut self, to: &StableSymbolId, span: Span) {
        if let Some(src) = self.source {
            self.edge(src, to, EdgeType::Call, span);
        }
    }

    fn resolve_type(&self, parts: &[Ident]) -> Option<TypeTarget> {
        self.table
            .resolve_type(self.file, self.ty, &self.tparams, parts)
    }

    fn target_id(&self, t: &TypeTarget) -> StableSymbolId {
        match t {
            TypeTarget::Type(i) => self.table.type_info(*i).id.clone(),
            TypeTarget::TypeParam(id) => id.clone(),
        }
    }

    /// Emits one `ty` edge per project-local type mentioned in `tr`,
    /// including type arguments.
    fn type_edges(&mut self, from: usize, tr: &TypeRef, ty: EdgeType) {
        if !tr.primitive && !(tr.parts.len() == 1 && tr.parts[0].name == "var") {
            if let Some(t) = self.resolve_type(&tr.parts) {
                let id = self.target_id(&t);
                let span = tr.parts.last().map(|p| p.span).unwrap_or(tr.span);
                self.edge(from, &id, ty.clone(), span);
            }
        }
        for a in &tr.args {
            self.type_edges(from, a, ty.clone());
        }
    }

    fn declared_type(&self, tr: &TypeRef) -> Option<TypeTarget> {
        if tr.primitive || tr.dims > 0 {
            return None;
        }
        self.resolve_type(&tr.parts)
    }

    // ------------------------------------------------------- declarations

    fn type_decl(&mut self, decl: &TypeDecl) {
        let Some(idx) = self.table.type_of_decl(self.file, decl.name.span.start) else {
            return; // duplicate, reported by the symbol table
        };
        let info = self.table.type_info(idx);
        let saved = (
            self.ty,
            std::mem::take(&mut self.tparams),
            self.owner,
            self.source,
        );
        let node = self.push_node(info.id.clone(), info.kind.clone(), &decl.name, decl.span);

        // supertypes resolve in the enclosing scope
        for tr in decl.extends.iter().chain(&decl.implements) {
            if let Some(TypeTarget::Type(t)) = self.resolve_type(&tr.parts) {
                if t != idx {
                    let id = self.table.type_info(t).id.clone();
                    let span = tr.parts.last().map(|p| p.span).unwrap_or(tr.span);
                    self.edge(node, &id, EdgeType::Extend, span);
                }
            }
        }
        self.ty = Some(idx);
        self.owner = None;
        for (tp, (_, id)) in decl.type_params.iter().zip(&info.type_params) {
            self.type_param(node, tp, id);
        }

        for c in &decl.enum_constants {
            let Some(f) = info.fields.iter().find(|f| f.span == c.span) else {
                continue;
            };
            let n = self.push_node(f.id.clone(), NodeKind::Value, &c.name, c.span);
            self.set_local(n, false);
            self.edge(node, &f.id, EdgeType::Declaration, c.name.span);
            self.source = Some(n);
            self.scopes.clear();
            for a in &c.args {
                self.expr(a);
            }
            if let Lookup::Found { method, .. } = self.table.find_ctor(idx, c.args.len()) {
                let id = method.id.clone();
                self.call(&id, c.name.span);
            }
        }

        let mut methods = info.methods.iter();
        let mut ctors = info.ctors.iter();
        // locals in initializer blocks belong to the type and share its counters
        let mut init_counters = info.counters.clone();
        for m in &decl.members {
            match m {
                Member::Field(f) => self.field(node, idx, f),
                Member::Method(md) => {
                    if let Some(mi) = methods.next() {
                        let (id, tps) = (mi.id.clone(), mi.type_params.clone());
                        self.method(node, idx, md, id, tps, NodeKind::Method);
                    }
                }
                Member::Constructor(md) => {
                    if let Some(mi) = ctors.next() {
                        let (id, tps) = (mi.id.clone(), mi.type_params.clone());
                        self.method(node, idx, md, id, tps, NodeKind::Constructor);
                    }
                }
                Member::Type(inner) => {
                    let before = self.nodes.len();
                    self.type_decl(inner);
                    if self.nodes.len() > before {
                        let id = self.nodes[before].id.clone();
                        self.edge(node, &id, EdgeType::Declaration, inner.name.span);
                    }
                }
                Member::Initializer(b) => {
                    self.owner = Some(node);
                    self.source = Some(node);
                    std::mem::swap(&mut self.counters, &mut init_counters);
                    self.scopes.clear();
                    self.block(b);
                    std::mem::swap(&mut self.counters, &mut init_counters);
                    self.owner = None;
                }
            }
        }
        (self.ty, self.tparams, self.owner, self.source) = saved;
    }

    fn type_param(&mut self, owner: usize, tp: &TypeParamDecl, id: &StableSymbolId) {
        let n = self.push_node(id.clone(), NodeKind::TypeParam, &tp.name, tp.name.span);
        self.edge(owner, id, EdgeType::TypeParameter, tp.name.span);
        for b in &tp.bounds {
            self.type_edges(n, b, EdgeType::Type);
        }
    }

    fn field(&mut self, owner: usize, idx: TypeIdx, f: &FieldDecl) {
        let info = self.table.type_info(idx);
        for v in &f.vars {
            let Some(fi) = info.fields.iter().find(|x| x.span == v.span) else {
                continue;
            };
            let decl_span = if f.vars.len() == 1 { f.span } else { v.span };
            let n = self.push_node(fi.id.clone(), fi.kind.clone(), &v.name, decl_span);
            self.set_local(n, false);
            self.edge(owner, &fi.id, EdgeType::Declaration, v.name.span);
            self.type_edges(n, &f.ty, EdgeType::Type);
            if let Some(init) = &v.init {
                self.source = Some(n);
                self.scopes.clear();
                self.expr(init);
                self.source = None;
            }
        }
    }

    fn method(
        &mut self,
        owner: usize,
        idx: TypeIdx,
        md: &MethodDecl,
        id: StableSymbolId,
        tparams: Vec<(String, StableSymbolId)>,
        kind: NodeKind,
    ) {
        let n = self.push_node(id.clone(), kind.clone(), &md.name, md.span);
        self.edge(owner, &id, EdgeType::Declaration, md.name.span);
        self.tparams = tparams.clone();
        for (tp, (_, tid)) in md.type_params.iter().zip(&tparams) {
            self.type_param(n, tp, tid);
        }
        let mut params = HashMap::new();
        for p in &md.params {
            let pid =
                match make_stable_id(&id, &p.name.name, SymbolKind::Node(NodeKind::Param), None) {
                    Ok(pid) => pid,
                    Err(err) => {
                        self.diag(p.name.span.start, err.to_string());
                        continue;
                    }
                };
            let pn = self.push_node(pid.clone(), NodeKind::Param, &p.name, p.span);
            self.edge(n, &pid, EdgeType::Parameter, p.name.span);
            self.type_edges(pn, &p.ty, EdgeType::Type);
            let ty = if p.varargs {
                None
            } else {
                self.declared_type(&p.ty)
            };
            params.insert(p.name.name.clone(), Local { id: pid, ty });
        }
        if let Some(r) = &md.result {
            self.type_edges(n, r, EdgeType::ReturnType);
        }
        if kind == NodeKind::Method && !md.modifiers.is_static {
            self.overrides(n, idx, md);
        }
        if let Some(body) = &md.body {
            self.owner = Some(n);
            self.source = Some(n);
            self.counters = Counters::default();
            self.scopes = vec![params];
            self.block(body);
            self.scopes.clear();
            self.owner = None;
            self.source = None;
        }
        self.tparams.clear();
    }

    /// One OVERRIDE edge per distinct nearest match along each direct
    /// supertype's ancestry.
    fn overrides(&mut self, n: usize, idx: TypeIdx, md: &MethodDecl) {
        let arity = md.params.len();
        let mut targets: Vec<StableSymbolId> = Vec::new();
        for &s in &self.table.type_info(idx).supertypes {
            let hit = self.table.ancestry(s).into_iter().find_map(|a| {
                self.table
                    .type_info(a)
                    .methods
                    .iter()
                    .find(|m| m.name == md.name.name && m.arity == arity && !m.is_static)
            });
            if let Some(m) = hit {
                if !targets.contains(&m.id) {
                    targets.push(m.id.clone());
                }
            }
        }
        for t in targets {
            self.edge(n, &t, EdgeType::Override, md.name.span);
        }
    }

    // --------------------------------------------------------- statements

    fn block(&mut self, b: &Block) {
        self.scopes.push(HashMap::new());
        for s in &b.stmts {
            self.stmt(s);
        }
        self.scopes.pop();
    }

    fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::LocalVar(d) => self.locals(d),
            Stmt::Expr(e) | Stmt::Throw(e) | Stmt::Return(Some(e), _) => {
                self.expr(e);
            }
            Stmt::Return(None, _) | Stmt::Empty | Stmt::Skipped(_) => {}
            Stmt::If { cond, then, els } => {
                self.expr(cond);
                self.stmt(then);
                if let Some(e) = els {
                    self.stmt(e);
                }
            }
            Stmt::Block(b) => self.block(b),
            Stmt::While { cond, body } => {
                self.expr(cond);
                self.stmt(body);
            }
            Stmt::For {
                init,
                cond,
                update,
                body,
            } => {
                self.scopes.push(HashMap::new());
                for s in init {
                    self.stmt(s);
                }
                if let Some(c) = cond {
                    self.expr(c);
                }
                for u in update {
                    self.expr(u);
                }
                self.stmt(body);
                self.scopes.pop();
            }
            Stmt::ForEach {
                var,
                iterable,
                body,
            } => {
                self.expr(iterable);
                self.scopes.push(HashMap::new());
                self.locals(var);
                self.stmt(body);
                self.scopes.pop();
            }
            Stmt::Try {
                body,
                catches,
                finally,
            } => {
                self.block(body);
                for (var, b) in catches {
                    self.scopes.push(HashMap::new());
                    self.locals(var);
                    self.block(b);
                    self.scopes.pop();
                }
                if let Some(f) = finally {
                    self.block(f);
                }
            }
        }
    }

    fn locals(&mut self, d: &LocalVarDecl) {
        let Some(owner) = self.owner else { return };
        let owner_id = self.nodes[owner].id.clone();
        let kind = if d.modifiers.is_final {
            NodeKind::Value
        } else {
            NodeKind::Variable
        };
        let inferred = d.ty.parts.len() == 1 && d.ty.parts[0].name == "var";
        let declared = self.declared_type(&d.ty);
        for v in &d.vars {
            let index = self.counters.next(&kind, &v.name.name);
            let id = match make_stable_id(
                &owner_id,
                &v.name.name,
                SymbolKind::Node(kind.clone()),
                index,
            ) {
                Ok(id) => id,
                Err(err) => {
                    self.diag(v.name.span.start, err.to_string());
                    continue;
                }
            };
            let decl_span = if d.vars.len() == 1 { d.span } else { v.span };
            let n = self.push_node(id.clone(), kind.clone(), &v.name, decl_span);
            self.set_local(n, true);
            self.edge(owner, &id, EdgeType::Declaration, v.name.span);
            self.type_edges(n, &d.ty, EdgeType::Type);
            let mut ty = declared.clone();
            if let Some(init) = &v.init {
                let saved = self.source.replace(n);
                let r = self.expr(init);
                self.source = saved;
                if inferred {
                    ty = match r {
                        Res::Value(t) => t,
                        _ => None,
                    };
                }
            }
            if let Some(scope) = self.scopes.last_mut() {
                scope.insert(v.name.name.clone(), Local { id, ty });
            }
        }
    }

    // -------------------------------------------------------- expressions

    fn expr(&mut self, e: &Expr) -> Res {
        match &e.kind {
            ExprKind::Name(id) => self.name(id, false),
            ExprKind::FieldAccess { target, name } => {
                let r = self.qualifier(target);
                self.member(r, name)
            }
            ExprKind::Call { target, name, args } => {
                let recv = target.as_ref().map(|t| self.qualifier(t));
                for a in args {
                    self.expr(a);
                }
                self.invoke(recv, name, args.len())
            }
            ExprKind::CtorCall { is_super, args } => {
                for a in args {
                    self.expr(a);
                }
                let Some(cur) = self.ty else {
                    return Res::Unknown;
                };
                let target = if *is_super {
                    self.table.type_info(cur).superclass
                } else {
                    Some(cur)
                };
                if let Some(t) = target {
                    self.ctor_call(t, args.len(), e.span);
                }
                Res::Unknown
            }
            ExprKind::New { ty, args } => {
                for a in args {
                    self.expr(a);
                }
                let target = self.declared_type(ty);
                if let Some(TypeTarget::Type(t)) = target {
                    let span = ty.parts.last().map(|p| p.span).unwrap_or(ty.span);
                    self.ctor_call(t, args.len(), span);
                }
                Res::Value(target)
            }
            ExprKind::NewArray { dims, init, .. } => {
                for x in dims.iter().chain(init) {
                    self.expr(x);
                }
                Res::Value(None)
            }
            ExprKind::ArrayInit(items) => {
                for x in items {
                    self.expr(x);
                }
                Res::Value(None)
            }
            ExprKind::This => Res::Value(self.ty.map(TypeTarget::Type)),
            ExprKind::Super => match self.ty {
                Some(t) => Res::Super(t),
                None => Res::Unknown,
            },
            ExprKind::Literal(_) | ExprKind::ClassLiteral(_) => Res::Value(None),
            ExprKind::Unary(x) => {
                self.expr(x);
                Res::Value(None)
            }
            ExprKind::Binary(a, b) => {
                self.expr(a);
                self.expr(b);
                Res::Value(None)
            }
            ExprKind::Assign { target, value } => {
                let r = self.expr(target);
                self.expr(value);
                r
            }
            ExprKind::Ternary { cond, then, els } => {
                self.expr(cond);
                let r = self.expr(then);
                self.expr(els);
                r
            }
            ExprKind::Cast { ty, expr } => {
                self.expr(expr);
                Res::Value(self.declared_type(ty))
            }
            ExprKind::InstanceOf { expr, .. } => {
                self.expr(expr);
                Res::Value(None)
            }
            ExprKind::Index { target, index } => {
                self.expr(target);
                self.expr(index);
                Res::Value(None)
            }
            ExprKind::Unsupported => Res::Unknown,
        }
    }

    /// Like `expr`, but a bare name may also denote a type or package.
    fn qualifier(&mut self, e: &Expr) -> Res {
        match &e.kind {
            ExprKind::Name(id) => self.name(id, true),
            _ => self.expr(e),
        }
    }

    fn name(&mut self, id: &Ident, qualifier: bool) -> Res {
        let name = id.name.as_str();
        if let Some(local) = self.scopes.iter().rev().find_map(|s| s.get(name)).cloned() {
            self.call(&local.id, id.span);
            return Res::Value(local.ty);
        }
        let mut cur = self.ty;
        while let Some(t) = cur {
            if let Some(f) = self.table.find_field(t, name) {
                let (fid, fty) = (f.id.clone(), f.ty.clone());
                self.call(&fid, id.span);
                return Res::Value(fty);
            }
            cur = self.table.type_info(t).outer;
        }
        match self.resolve_type(std::slice::from_ref(id)) {
            Some(TypeTarget::Type(t)) => return Res::Type(t),
            Some(TypeTarget::TypeParam(_)) => return Res::Unknown,
            None => {}
        }
        if let Some(r) = self.static_import_field(id) {
            return r;
        }
        if qualifier || self.table.is_package(name) {
            return Res::Package(name.to_string());
        }
        let quiet =
            name.starts_with(|c: char| c.is_uppercase()) || self.enclosing_has_external_members();
        if !quiet {
            self.diag(id.span.start, format!("unresolved name '{name}'"));
        }
        Res::Unknown
    }

    fn enclosing_has_external_members(&self) -> bool {
        let mut cur = self.ty;
        while let Some(t) = cur {
            if self.table.has_external_members(t) {
                return true;
            }
            cur = self.table.type_info(t).outer;
        }
        false
    }

    fn static_imports(&self) -> impl Iterator<Item = &Import> + '_ {
        self.table.files()[self.file]
            .unit
            .imports
            .iter()
            .filter(|i| i.is_static)
    }

    /// Owner types a static import could bring `name` in from.
    fn static_import_owners(&self, name: &str) -> Vec<TypeIdx> {
        self.static_imports()
            .filter_map(|imp| {
                let parts = &imp.name.parts;
                if imp.wildcard {
                    self.table.find_type(&imp.name.dotted())
                } else if parts.last().is_some_and(|p| p.name == name) && parts.len() > 1 {
                    let owner: Vec<&str> = parts[..parts.len() - 1]
                        .iter()
                        .map(|p| p.name.as_str())
                        .collect();
                    self.table.find_type(&owner.join("."))
                } else {
                    None
                }
            })
            .collect()
    }

    fn has_static_import_of(&self, name: &str) -> bool {
        self.static_imports()
            .any(|i| i.wildcard || i.name.parts.last().is_some_and(|p| p.name == name))
    }

    fn static_import_field(&mut self, id: &Ident) -> Option<Res> {
        for t in self.static_import_owners(&id.name) {
            if let Some(f) = self.table.find_field(t, &id.name) {
                let (fid, fty) = (f.id.clone(), f.ty.clone());
                self.call(&fid, id.span);
                return Some(Res::Value(fty));
            }
        }
        self.has_static_import_of(&id.name).then_some(Res::Unknown)
    }

    fn member(&mut self, recv: Res, name: &Ident) -> Res {
        match recv {
            Res::Value(Some(TypeTarget::Type(t))) | Res::Type(t) => {
                if let Some(f) = self.table.find_field(t, &name.name) {
                    let (fid, fty) = (f.id.clone(), f.ty.clone());
                    self.call(&fid, name.span);
                    return Res::Value(fty);
                }
                if matches!(recv, Res::Type(_)) {
                    if let Some(n) = self.table.nested_type(t, &name.name) {
                        return Res::Type(n);
                    }
                }
                Res::Value(None)
            }
            Res::Super(t) => {
                let supers = self.table.type_info(t).supertypes.clone();
                for s in supers {
                    if let Some(f) = self.table.find_field(s, &name.name) {
                        let (fid, fty) = (f.id.clone(), f.ty.clone());
                        self.call(&fid, name.span);
                        return Res::Value(fty);
                    }
                }
                Res::Value(None)
            }
            Res::Package(p) => {
                if let Some(t) = self.table.top_level(&p, &name.name) {
                    Res::Type(t)
                } else {
                    Res::Package(format!("{p}.{}", name.name))
                }
            }
            Res::Value(_) | Res::Unknown => Res::Unknown,
        }
    }

    fn invoke(&mut self, recv: Option<Res>, name: &Ident, args: usize) -> Res {
        let candidates: Vec<TypeIdx> = match recv {
            None => {
                let mut chain = Vec::new();
                let mut cur = self.ty;
                while let Some(t) = cur {
                    chain.push(t);
                    cur = self.table.type_info(t).outer;
                }
                chain.extend(self.static_import_owners(&name.name));
                chain
            }
            Some(Res::Value(Some(TypeTarget::Type(t))) | Res::Type(t)) => vec![t],
            Some(Res::Super(t)) => self.table.type_info(t).supertypes.clone(),
            Some(_) => return Res::Unknown,
        };
        let mut mismatch = false;
        for &t in &candidates {
            match self.table.find_method(t, &name.name, args) {
                Lookup::Found { method, ambiguous } => {
                    let (mid, ret) = (method.id.clone(), method.ret.clone());
                    if ambiguous {
                        let msg = format!(
                            "ambiguous call to '{}' with {args} argument(s); using {mid}",
                            name.name
                        );
                        self.diag(name.span.start, msg);
                    }
                    self.call(&mid, name.span);
                    return Res::Value(ret);
                }
                Lookup::ArityMismatch => {
                    mismatch = true;
                    break;
                }
                Lookup::NotFound => {}
            }
        }
        let external = OBJECT_METHODS.contains(&name.name.as_str())
            || candidates
                .iter()
                .any(|&t| self.table.has_external_members(t))
            || (recv_is_unqualified(&candidates, self.ty) && self.has_static_import_of(&name.name));
        if mismatch {
            let msg = format!("no overload of '{}' takes {args} argument(s)", name.name);
            self.diag(name.span.start, msg);
        } else if !external && !candidates.is_empty() {
            self.diag(
                name.span.start,
                format!("unresolved method '{}'", name.name),
            );
        }
        Res::Unknown
    }

    fn ctor_call(&mut self, t: TypeIdx, args: usize, span: Span) {
        match self.table.find_ctor(t, args) {
            Lookup::Found { method, ambiguous } => {
                let mid = method.id.clone();
                if ambiguous {
                    self.diag(
                        span.start,
                        format!("ambiguous constructor call; using {mid}"),
                    );
                }
                self.call(&mid, span);
            }
            Lookup::ArityMismatch => {
                let name = self.table.type_info(t).name.clone();
                self.diag(
                    span.start,
                    format!("no constructor of '{name}' takes {args} argument(s)"),
                );
            }
            // implicit default constructor: not a node
            Lookup::NotFound => {}
        }
    }
}

fn recv_is_unqualified(candidates: &[TypeIdx], cur: Option<TypeIdx>) -> bool {
    cur.is_some_and(|c| candidates.first() == Some(&c))
}
