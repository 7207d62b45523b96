use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use super::ast::*;
use super::parser::ParsedFile;
use super::Diagnostic;
use crate::model::{make_stable_id, NodeKind, StableSymbolId, SymbolKind, CONSTRUCTOR_NAME};

pub type TypeIdx = usize;

/// What a written type name refers to inside the project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeTarget {
    Type(TypeIdx),
    TypeParam(StableSymbolId),
}

#[derive(Debug, Clone)]
pub struct FieldInfo {
    pub name: String,
    pub id: StableSymbolId,
    pub kind: NodeKind,
    pub ty: Option<TypeTarget>,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub struct MethodInfo {
    pub name: String,
    pub id: StableSymbolId,
    pub arity: usize,
    pub varargs: bool,
    pub is_static: bool,
    pub ret: Option<TypeTarget>,
    pub type_params: Vec<(String, StableSymbolId)>,
}

impl MethodInfo {
    fn accepts(&self, args: usize) -> bool {
        self.arity == args || (self.varargs && args + 1 >= self.arity)
    }
}

/// Per-owner counters that produce overload indices. Terms rendered with
/// parentheses (methods, variables) share one counter per name so a field
/// and a method of the same name stay distinct; values count separately.
#[derive(Debug, Clone, Default)]
pub struct Counters {
    terms: HashMap<String, u32>,
    values: HashMap<String, u32>,
}

impl Counters {
    pub fn next(&mut self, kind: &NodeKind, name: &str) -> Option<u32> {
        let map = if *kind == NodeKind::Value {
            &mut self.values
        } else {
            &mut self.terms
        };
        let slot = map.entry(name.to_string()).or_insert(0);
        let n = *slot;
        *slot += 1;
        (n > 0).then_some(n)
    }
}

#[derive(Debug, Clone)]
pub struct TypeInfo {
    pub id: StableSymbolId,
    pub kind: NodeKind,
    pub name: String,
    /// Dotted package name, empty for the default package.
    pub package: String,
    pub file: usize,
    pub outer: Option<TypeIdx>,
    pub nested: BTreeMap<String, TypeIdx>,
    pub type_params: Vec<(String, StableSymbolId)>,
    /// Project-local direct supertypes in declaration order.
    pub supertypes: Vec<TypeIdx>,
    /// Project-local superclass of a class, target of `super(...)`.
    pub superclass: Option<TypeIdx>,
    /// Some written supertype lies outside the project.
    pub has_external_super: bool,
    pub fields: Vec<FieldInfo>,
    pub methods: Vec<MethodInfo>,
    pub ctors: Vec<MethodInfo>,
    pub counters: Counters,
}

/// Outcome of a member lookup.
#[derive(Debug)]
pub enum Lookup<'t> {
    Found {
        method: &'t MethodInfo,
        ambiguous: bool,
    },
    /// Methods with that name exist but none takes that many arguments.
    ArityMismatch,
    NotFound,
}

/// Project-wide index of declarations built before any body is resolved.
pub struct SymbolTable<'a> {
    files: &'a [ParsedFile],
    types: Vec<TypeInfo>,
    by_decl: HashMap<(usize, Pos), TypeIdx>,
    by_name: HashMap<(String, String), TypeIdx>,
    packages: HashSet<String>,
    diagnostics: Vec<Diagnostic>,
}

/// Registers every type and member of `files` and resolves supertypes and
/// member types. Duplicate types are reported and the first one wins.
pub fn build_symbol_table(files: &[ParsedFile]) -> SymbolTable<'_> {
    let mut t = SymbolTable {
        files,
        types: Vec::new(),
        by_decl: HashMap::new(),
        by_name: HashMap::new(),
        packages: HashSet::new(),
        diagnostics: Vec::new(),
    };
    let mut decls: Vec<&TypeDecl> = Vec::new();
    for (fi, f) in files.iter().enumerate() {
        let package = f.unit.package_name();
        let mut prefix = String::new();
        for part in package.split('.').filter(|s| !s.is_empty()) {
            if !prefix.is_empty() {
                prefix.push('.');
            }
            prefix.push_str(part);
            t.packages.insert(prefix.clone());
        }
        let owner = match StableSymbolId::package(&package) {
            Ok(id) => id,
            Err(e) => {
                let at = f
                    .unit
                    .package
                    .as_ref()
                    .map(|p| p.span.start)
                    .unwrap_or_default();
                t.diagnostics.push(Diagnostic::new(
                    &f.uri,
                    at,
                    format!("invalid package name: {e}"),
                ));
                continue;
            }
        };
        for decl in &f.unit.types {
            t.register(fi, &package, &owner, None, decl, &mut decls);
        }
    }
    // decls is parallel to t.types
    for (idx, decl) in decls.iter().enumerate() {
        t.resolve_supertypes(idx, decl);
    }
    for (idx, decl) in decls.iter().enumerate() {
        t.register_members(idx, decl);
    }
    t
}

impl<'a> SymbolTable<'a> {
    pub fn files(&self) -> &'a [ParsedFile] {
        self.files
    }

    pub fn types(&self) -> &[TypeInfo] {
        &self.types
    }

    pub fn type_info(&self, idx: TypeIdx) -> &TypeInfo {
        &self.types[idx]
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    /// Type registered for the declaration whose name starts at `name_pos`.
    pub fn type_of_decl(&self, file: usize, name_pos: Pos) -> Option<TypeIdx> {
        self.by_decl.get(&(file, name_pos)).copied()
    }

    /// Top-level or nested type by dotted name, e.g. `p.Outer.Inner`.
    pub fn find_type(&self, dotted: &str) -> Option<TypeIdx> {
        let parts: Vec<&str> = dotted.split('.').collect();
        (0..parts.len()).rev().find_map(|i| {
            let pkg = parts[..i].join(".");
            let top = *self.by_name.get(&(pkg, parts[i].to_string()))?;
            parts[i + 1..]
                .iter()
                .try_fold(top, |t, n| self.types[t].nested.get(*n).copied())
        })
    }

    pub fn is_package(&self, dotted: &str) -> bool {
        self.packages.contains(dotted)
    }

    pub fn top_level(&self, package: &str, name: &str) -> Option<TypeIdx> {
        self.by_name
            .get(&(package.to_string(), name.to_string()))
            .copied()
    }

    /// `start` and its project-local supertypes, breadth first, each once.
    pub fn ancestry(&self, start: TypeIdx) -> Vec<TypeIdx> {
        let mut seen = HashSet::from([start]);
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for &s in &self.types[t].supertypes {
                if seen.insert(s) {
                    order.push(s);
                    queue.push_back(s);
                }
            }
        }
        order
    }

    /// Whether `t` or any ancestor has a supertype outside the project, or
    /// is an enum (which inherits from `java.lang.Enum`).
    pub fn has_external_members(&self, t: TypeIdx) -> bool {
        self.ancestry(t)
            .iter()
            .any(|&a| self.types[a].has_external_super || self.types[a].kind == NodeKind::Enum)
    }

    /// Field lookup through project-local supertypes.
    pub fn find_field(&self, t: TypeIdx, name: &str) -> Option<&FieldInfo> {
        self.ancestry(t)
            .into_iter()
            .find_map(|a| self.types[a].fields.iter().find(|f| f.name == name))
    }

    /// Method lookup by name and argument count. The nearest type in the
    /// ancestry with an applicable overload wins; exact arity beats varargs;
    /// several equally good overloads resolve to the first declared.
    pub fn find_method(&self, t: TypeIdx, name: &str, args: usize) -> Lookup<'_> {
        let mut named = false;
        for a in self.ancestry(t) {
            let cands: Vec<&MethodInfo> = self.types[a]
                .methods
                .iter()
                .filter(|m| m.name == name)
                .collect();
            named |= !cands.is_empty();
            if let Some(hit) = pick_overload(&cands, args) {
                return hit;
            }
        }
        if named {
            Lookup::ArityMismatch
        } else {
            Lookup::NotFound
        }
    }

    /// Explicitly declared constructor of `t` taking `args` arguments.
    pub fn find_ctor(&self, t: TypeIdx, args: usize) -> Lookup<'_> {
        let cands: Vec<&MethodInfo> = self.types[t].ctors.iter().collect();
        match pick_overload(&cands, args) {
            Some(hit) => hit,
            None if cands.is_empty() => Lookup::NotFound,
            None => Lookup::ArityMismatch,
        }
    }

    /// Resolves a written type name as seen from `file`, inside type
    /// `scope` (innermost enclosing type), with method type parameters
    /// `method_tparams` in scope. `None` means primitive or external.
    pub fn resolve_type(
        &self,
        file: usize,
        scope: Option<TypeIdx>,
        method_tparams: &[(String, StableSymbolId)],
        parts: &[Ident],
    ) -> Option<TypeTarget> {
        let first = parts.first()?.name.as_str();
        let rest = &parts[1..];
        if rest.is_empty() {
            if let Some((_, id)) = method_tparams.iter().find(|(n, _)| n == first) {
                return Some(TypeTarget::TypeParam(id.clone()));
            }
            let mut cur = scope;
            while let Some(t) = cur {
                if let Some((_, id)) = self.types[t].type_params.iter().find(|(n, _)| n == first) {
                    return Some(TypeTarget::TypeParam(id.clone()));
                }
                cur = self.types[t].outer;
            }
        }
        let head = self.resolve_simple_type(file, scope, first);
        let head = match head {
            SimpleType::Found(t) => Some(t),
            SimpleType::External => return None,
            SimpleType::Missing => None,
        };
        if let Some(t) = head {
            return self.follow_nested(t, rest).map(TypeTarget::Type);
        }
        // fully qualified: longest matching package prefix
        let names: Vec<&str> = parts.iter().map(|p| p.name.as_str()).collect();
        (1..names.len()).rev().find_map(|i| {
            let top = self.top_level(&names[..i].join("."), names[i])?;
            self.follow_nested(top, &parts[i + 1..])
                .map(TypeTarget::Type)
        })
    }

    fn follow_nested(&self, t: TypeIdx, rest: &[Ident]) -> Option<TypeIdx> {
        rest.iter().try_fold(t, |t, n| self.nested_type(t, &n.name))
    }

    /// Member type `name` of `t`, including ones inherited from supertypes.
    pub fn nested_type(&self, t: TypeIdx, name: &str) -> Option<TypeIdx> {
        self.ancestry(t)
            .into_iter()
            .find_map(|a| self.types[a].nested.get(name).copied())
    }

    fn resolve_simple_type(&self, file: usize, scope: Option<TypeIdx>, name: &str) -> SimpleType {
        let mut cur = scope;
        while let Some(t) = cur {
            if self.types[t].name == name {
                return SimpleType::Found(t);
            }
            if let Some(n) = self.nested_type(t, name) {
                return SimpleType::Found(n);
            }
            cur = self.types[t].outer;
        }
        let unit = &self.files[file].unit;
        for imp in unit.imports.iter().filter(|i| !i.wildcard && !i.is_static) {
            if imp.name.parts.last().is_some_and(|p| p.name == name) {
                return match self.find_type(&imp.name.dotted()) {
                    Some(t) => SimpleType::Found(t),
                    None => SimpleType::External,
                };
            }
        }
        if let Some(t) = self.top_level(&unit.package_name(), name) {
            return SimpleType::Found(t);
        }
        for imp in unit.imports.iter().filter(|i| i.wildcard && !i.is_static) {
            let dotted = imp.name.dotted();
            if let Some(t) = self.top_level(&dotted, name) {
                return SimpleType::Found(t);
            }
            if let Some(t) = self
                .find_type(&dotted)
                .and_then(|o| self.nested_type(o, name))
            {
                return SimpleType::Found(t);
            }
        }
        SimpleType::Missing
    }

    // ---------------------------------------------------------- pass one

    fn register(
        &mut self,
        file: usize,
        package: &str,
        owner: &StableSymbolId,
        outer: Option<TypeIdx>,
        decl: &'a TypeDecl,
        decls: &mut Vec<&'a TypeDecl>,
    ) {
        let uri = &self.files[file].uri;
        let name = decl.name.name.as_str();
        let existing = match outer {
            Some(o) => self.types[o].nested.get(name).copied(),
            None => self.top_level(package, name),
        };
        if let Some(prev) = existing {
            let first = &self.files[self.types[prev].file].uri;
            let msg = format!("duplicate declaration of type {name}; the one in {first} is kept");
            self.diagnostics
                .push(Diagnostic::new(uri, decl.name.span.start, msg));
            return;
        }
        let kind = match decl.kind {
            TypeDeclKind::Class => NodeKind::Class,
            TypeDeclKind::Interface => NodeKind::Interface,
            TypeDeclKind::Enum => NodeKind::Enum,
        };
        let id = match make_stable_id(owner, name, SymbolKind::Node(kind.clone()), None) {
            Ok(id) => id,
            Err(e) => {
                self.diagnostics
                    .push(Diagnostic::new(uri, decl.name.span.start, e.to_string()));
                return;
            }
        };
        let type_params = decl
            .type_params
            .iter()
            .filter_map(|tp| {
                let tid = make_stable_id(
                    &id,
                    &tp.name.name,
                    SymbolKind::Node(NodeKind::TypeParam),
                    None,
                )
                .ok()?;
                Some((tp.name.name.clone(), tid))
            })
            .collect();
        let idx = self.types.len();
        self.types.push(TypeInfo {
            id: id.clone(),
            kind,
            name: name.to_string(),
            package: package.to_string(),
            file,
            outer,
            nested: BTreeMap::new(),
            type_params,
            supertypes: Vec::new(),
            superclass: None,
            has_external_super: false,
            fields: Vec::new(),
            methods: Vec::new(),
            ctors: Vec::new(),
            counters: Counters::default(),
        });
        decls.push(decl);
        self.by_decl.insert((file, decl.name.span.start), idx);
        match outer {
            Some(o) => {
                self.types[o].nested.insert(name.to_string(), idx);
            }
            None => {
                self.by_name
                    .insert((package.to_string(), name.to_string()), idx);
            }
        }
        for m in &decl.members {
            if let Member::Type(inner) = m {
                self.register(file, package, &id, Some(idx), inner, decls);
            }
        }
    }

    fn resolve_supertypes(&mut self, idx: TypeIdx, decl: &TypeDecl) {
        let file = self.types[idx].file;
        // supertypes are resolved from the enclosing scope, not the type itself
        let scope = self.types[idx].outer;
        let mut supers = Vec::new();
        let mut superclass = None;
        let mut external = false;
        let class_extends = decl.kind == TypeDeclKind::Class;
        for (i, tr) in decl.extends.iter().chain(&decl.implements).enumerate() {
            match self.resolve_type(file, scope, &[], &tr.parts) {
                Some(TypeTarget::Type(t)) if t != idx => {
                    if class_extends && i == 0 && !decl.extends.is_empty() {
                        superclass = Some(t);
                    }
                    if !supers.contains(&t) {
                        supers.push(t);
                    }
                }
                _ => external = true,
            }
        }
        let info = &mut self.types[idx];
        info.supertypes = supers;
        info.superclass = superclass;
        info.has_external_super = external;
    }

    fn register_members(&mut self, idx: TypeIdx, decl: &TypeDecl) {
        let file = self.types[idx].file;
        let uri = self.files[file].uri.clone();
        let owner = self.types[idx].id.clone();
        let mut counters = Counters::default();
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        let mut ctors = Vec::new();
        let mut diags = Vec::new();

        for c in &decl.enum_constants {
            let n = counters.next(&NodeKind::Value, &c.name.name);
            match make_stable_id(&owner, &c.name.name, SymbolKind::Node(NodeKind::Value), n) {
                Ok(id) => fields.push(FieldInfo {
                    name: c.name.name.clone(),
                    id,
                    kind: NodeKind::Value,
                    ty: Some(TypeTarget::Type(idx)),
                    span: c.span,
                }),
                Err(e) => diags.push(Diagnostic::new(&uri, c.name.span.start, e.to_string())),
            }
        }
        for m in &decl.members {
            match m {
                Member::Field(f) => {
                    let kind = field_kind(decl.kind, f);
                    let ty = self
                        .resolve_type(file, Some(idx), &[], &f.ty.parts)
                        .filter(|_| f.ty.dims == 0);
                    for v in &f.vars {
                        let n = counters.next(&kind, &v.name.name);
                        match make_stable_id(
                            &owner,
                            &v.name.name,
                            SymbolKind::Node(kind.clone()),
                            n,
                        ) {
                            Ok(id) => fields.push(FieldInfo {
                                name: v.name.name.clone(),
                                id,
                                kind: kind.clone(),
                                ty: ty.clone(),
                                span: v.span,
                            }),
                            Err(e) => {
                                diags.push(Diagnostic::new(&uri, v.name.span.start, e.to_string()))
                            }
                        }
                    }
                }
                Member::Method(md) | Member::Constructor(md) => {
                    let is_ctor = matches!(m, Member::Constructor(_));
                    let (kind, name) = if is_ctor {
                        (NodeKind::Constructor, CONSTRUCTOR_NAME)
                    } else {
                        (NodeKind::Method, md.name.name.as_str())
                    };
                    let n = counters.next(&kind, name);
                    let id = match make_stable_id(&owner, name, SymbolKind::Node(kind), n) {
                        Ok(id) => id,
                        Err(e) => {
                            diags.push(Diagnostic::new(&uri, md.name.span.start, e.to_string()));
                            continue;
                        }
                    };
                    let type_params: Vec<(String, StableSymbolId)> = md
                        .type_params
                        .iter()
                        .filter_map(|tp| {
                            let tid = make_stable_id(
                                &id,
                                &tp.name.name,
                                SymbolKind::Node(NodeKind::TypeParam),
                                None,
                            )
                            .ok()?;
                            Some((tp.name.name.clone(), tid))
                        })
                        .collect();
                    let ret =
                        md.result.as_ref().filter(|r| r.dims == 0).and_then(|r| {
                            self.resolve_type(file, Some(idx), &type_params, &r.parts)
                        });
                    let info = MethodInfo {
                        name: md.name.name.clone(),
                        id,
                        arity: md.params.len(),
                        varargs: md.params.last().is_some_and(|p| p.varargs),
                        is_static: md.modifiers.is_static,
                        ret,
                        type_params,
                    };
                    if is_ctor {
                        ctors.push(info);
                    } else {
                        methods.push(info);
                    }
                }
                Member::Type(_) | Member::Initializer(_) => {}
            }
        }
        self.diagnostics.extend(diags);
        let info = &mut self.types[idx];
        info.fields = fields;
        info.methods = methods;
        info.ctors = ctors;
        info.counters = counters;
    }
}

enum SimpleType {
    Found(TypeIdx),
    /// Imported from outside the project.
    External,
    Missing,
}

fn pick_overload<'t>(cands: &[&'t MethodInfo], args: usize) -> Option<Lookup<'t>> {
    let exact: Vec<&&MethodInfo> = cands.iter().filter(|m| m.arity == args).collect();
    let pool: Vec<&&MethodInfo> = if exact.is_empty() {
        cands.iter().filter(|m| m.accepts(args)).collect()
    } else {
        exact
    };
    let first = pool.first()?;
    Some(Lookup::Found {
        method: first,
        ambiguous: pool.len() > 1,
    })
}

/// Final fields and all interface fields (implicitly final) are values.
pub fn field_kind(owner: TypeDeclKind, f: &FieldDecl) -> NodeKind {
    if f.modifiers.is_final || owner == TypeDeclKind::Interface {
        NodeKind::Value
    } else {
        NodeKind::Variable
    }
}
