use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{Diagnostic, ParseError};

/// A parsed source file plus the recoverable problems found in it.
#[derive(Debug, Clone)]
pub struct ParsedFile {
    pub uri: String,
    pub unit: CompilationUnit,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses one file of the supported subset. Constructs outside the subset
/// are skipped with a diagnostic; only lexical errors and unbalanced
/// brackets fail the whole file.
pub fn parse_source(text: &str, uri: &str) -> Result<ParsedFile, ParseError> {
    let toks = tokenize(text)?;
    check_balance(&toks)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        diags: Vec::new(),
        uri: uri.to_string(),
    };
    let unit = p.compilation_unit();
    Ok(ParsedFile {
        uri: uri.to_string(),
        unit,
        diagnostics: p.diags,
    })
}

fn check_balance(toks: &[Token]) -> Result<(), ParseError> {
    let mut stack: Vec<(&str, Pos)> = Vec::new();
    for t in toks {
        let Tok::Op(op) = t.tok else { continue };
        match op {
            "{" | "(" | "[" => stack.push((op, t.span.start)),
            "}" | ")" | "]" => {
                let want = match op {
                    "}" => "{",
                    ")" => "(",
                    _ => "[",
                };
                match stack.pop() {
                    Some((open, _)) if open == want => {}
                    Some((open, at)) => {
                        return Err(ParseError::new(
                            t.span.start,
                            format!(
                                "'{op}' does not match '{open}' opened at {}:{}",
                                at.line + 1,
                                at.col + 1
                            ),
                        ))
                    }
                    None => return Err(ParseError::new(t.span.start, format!("unmatched '{op}'"))),
                }
            }
            _ => {}
        }
    }
    match stack.pop() {
        Some((open, at)) => Err(ParseError::new(at, format!("unclosed '{open}'"))),
        None => Ok(()),
    }
}

const KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
    "true",
    "false",
    "null",
];

const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double",
];

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "sealed",
];

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Debug)]
struct Syntax {
    at: Pos,
    msg: String,
}

type PResult<T> = Result<T, Syntax>;

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    diags: Vec<Diagnostic>,
    uri: String,
}

impl<'t> Parser<'t> {
    // ------------------------------------------------------------ helpers

    fn peek(&self) -> &'t Token {
        self.nth(0)
    }

    fn nth(&self, k: usize) -> &'t Token {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i]
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek().tok, Tok::Eof)
    }

    fn at_op(&self, op: &str) -> bool {
        self.peek().is_op(op)
    }

    fn at_kw(&self, kw: &str) -> bool {
        self.peek().is_ident(kw)
    }

    fn bump(&mut self) -> &'t Token {
        let t = self.peek();
        if !self.at_eof() {
            self.pos += 1;
        }
        t
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.at_op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn prev_end(&self) -> Pos {
        if self.pos == 0 {
            Pos::default()
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn span_from(&self, start: Pos) -> Span {
        Span {
            start,
            end: self.prev_end(),
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Syntax {
            at: self.peek().span.start,
            msg: msg.into(),
        })
    }

    fn expect_op(&mut self, op: &str) -> PResult<Span> {
        if self.at_op(op) {
            Ok(self.bump().span)
        } else {
            self.error(format!("expected '{op}', found {}", describe(self.peek())))
        }
    }

    fn expect_ident(&mut self) -> PResult<Ident> {
        match self.peek().ident() {
            Some(name) if !is_keyword(name) => {
                let t = self.bump();
                Ok(Ident {
                    name: name.to_string(),
                    span: t.span,
                })
            }
            _ => self.error(format!(
                "expected identifier, found {}",
                describe(self.peek())
            )),
        }
    }

    fn diag(&mut self, at: Pos, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(&self.uri, at, msg));
    }

    fn report(&mut self, e: Syntax) {
        self.diags.push(Diagnostic::new(&self.uri, e.at, e.msg));
    }

    /// Skips a balanced bracket group starting at the current opener.
    fn skip_group(&mut self) {
        let mut depth = 0usize;
        loop {
            let t = self.bump();
            match t.tok {
                Tok::Op("{" | "(" | "[") => depth += 1,
                Tok::Op("}" | ")" | "]") => {
                    depth = depth.saturating_sub(1);
                    if depth == 0 {
                        return;
                    }
                }
                Tok::Eof => return,
                _ => {}
            }
            if depth == 0 {
                return;
            }
        }
    }

    /// Error recovery: skip to just past the next `;` or balanced `{...}`
    /// at this nesting level, stopping before a closing `}`.
    fn recover(&mut self) {
        loop {
            if self.at_eof() || self.at_op("}") {
                return;
            }
            if self.at_op("{") {
                self.skip_group();
                // `try {} catch {}`, `if {} else {}` chains
                if !(self.at_kw("catch") || self.at_kw("finally") || self.at_kw("else")) {
                    return;
                }
                continue;
            }
            if self.at_op("(") || self.at_op("[") {
                self.skip_group();
                continue;
            }
            if self.bump().is_op(";") {
                return;
            }
        }
    }

    fn speculate<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> Option<T> {
        let (pos, ndiag) = (self.pos, self.diags.len());
        match f(self) {
            Ok(v) => Some(v),
            Err(_) => {
                self.pos = pos;
                self.diags.truncate(ndiag);
                None
            }
        }
    }

    // ------------------------------------------------------- declarations

    fn compilation_unit(&mut self) -> CompilationUnit {
        let mut unit = CompilationUnit::default();
        self.skip_annotations();
        if self.at_kw("package") {
            let start = self.bump().span.start;
            match self
                .qualified_name()
                .and_then(|q| self.expect_op(";").map(|_| q))
            {
                Ok(q) => unit.package = Some(q),
                Err(e) => {
                    self.report(e);
                    self.recover();
                }
            }
            let _ = start;
        }
        while self.at_kw("import") {
            let start = self.bump().span.start;
            match self.import(start) {
                Ok(i) => unit.imports.push(i),
                Err(e) => {
                    self.report(e);
                    self.recover();
                }
            }
        }
        while !self.at_eof() {
            if self.eat_op(";") {
                continue;
            }
            let before = self.pos;
            match self.type_decl_with_modifiers() {
                Ok(Some(t)) => unit.types.push(t),
                Ok(None) => {}
                Err(e) => {
                    self.report(e);
                    self.recover();
                    if self.at_op("}") {
                        self.bump();
                    }
                }
            }
            if self.pos == before {
                self.bump();
            }
        }
        unit
    }

    fn import(&mut self, start: Pos) -> PResult<Import> {
        let is_static = self.eat_kw("static");
        let first = self.expect_ident()?;
        let mut parts = vec![first];
        let mut wildcard = false;
        while self.eat_op(".") {
            if self.eat_op("*") {
                wildcard = true;
                break;
            }
            parts.push(self.expect_ident()?);
        }
        self.expect_op(";")?;
        let span = self.span_from(start);
        let qspan = parts[0].span.to(parts[parts.len() - 1].span);
        Ok(Import {
            name: QualifiedName { parts, span: qspan },
            wildcard,
            is_static,
            span,
        })
    }

    fn qualified_name(&mut self) -> PResult<QualifiedName> {
        let mut parts = vec![self.expect_ident()?];
        while self.at_op(".") && self.nth(1).ident().is_some() {
            self.bump();
            parts.push(self.expect_ident()?);
        }
        let span = parts[0].span.to(parts[parts.len() - 1].span);
        Ok(QualifiedName { parts, span })
    }

    fn skip_annotations(&mut self) {
        while self.at_op("@") && !self.nth(1).is_ident("interface") {
            self.bump();
            let _ = self.qualified_name();
            if self.at_op("(") {
                self.skip_group();
            }
        }
    }

    fn modifiers(&mut self) -> (Modifiers, Pos) {
        let start = self.peek().span.start;
        let mut m = Modifiers::default();
        loop {
            self.skip_annotations();
            let Some(name) = self.peek().ident() else {
                break;
            };
            if name == "non" && self.nth(1).is_op("-") && self.nth(2).is_ident("sealed") {
                self.pos += 3;
                continue;
            }
            if !MODIFIERS.contains(&name) {
                break;
            }
            // `default` inside a switch is not a modifier, but switch is skipped wholesale
            match name {
                "final" => m.is_final = true,
                "static" => m.is_static = true,
                "abstract" => m.is_abstract = true,
                _ => {}
            }
            self.bump();
        }
        (m, start)
    }

    /// Parses modifiers and a type declaration. Returns `Ok(None)` when an
    /// unsupported declaration (record, annotation type) was skipped.
    fn type_decl_with_modifiers(&mut self) -> PResult<Option<TypeDecl>> {
        let (modifiers, start) = self.modifiers();
        self.type_decl(modifiers, start)
    }

    fn type_decl(&mut self, modifiers: Modifiers, start: Pos) -> PResult<Option<TypeDecl>> {
        let kind = if self.eat_kw("class") {
            TypeDeclKind::Class
        } else if self.eat_kw("interface") {
            TypeDeclKind::Interface
        } else if self.eat_kw("enum") {
            TypeDeclKind::Enum
        } else if self.at_kw("record") || (self.at_op("@") && self.nth(1).is_ident("interface")) {
            let at = self.peek().span.start;
            self.diag(
                at,
                "record and annotation type declarations are not supported; skipped",
            );
            while !self.at_eof() && !self.at_op("{") {
                if self.at_op("(") {
                    self.skip_group();
                } else {
                    self.bump();
                }
            }
            self.skip_group();
            return Ok(None);
        } else {
            return self.error(format!(
                "expected type declaration, found {}",
                describe(self.peek())
            ));
        };
        let name = self.expect_ident()?;
        let type_params = if self.at_op("<") {
            self.type_params()?
        } else {
            Vec::new()
        };
        let mut extends = Vec::new();
        let mut implements = Vec::new();
        loop {
            if self.eat_kw("extends") {
                extends.extend(self.type_list()?);
            } else if self.eat_kw("implements") {
                implements.extend(self.type_list()?);
            } else if self.eat_kw("permits") {
                self.type_list()?;
            } else {
                break;
            }
        }
        self.expect_op("{")?;
        let mut decl = TypeDecl {
            kind,
            modifiers,
            name,
            type_params,
            extends,
            implements,
            enum_constants: Vec::new(),
            members: Vec::new(),
            span: Span::default(),
        };
        if kind == TypeDeclKind::Enum {
            self.enum_constants(&mut decl.enum_constants);
        }
        self.class_body(&decl.name.name.clone(), &mut decl.members);
        self.expect_op("}")?;
        decl.span = self.span_from(start);
        Ok(Some(decl))
    }

    fn type_list(&mut self) -> PResult<Vec<TypeRef>> {
        let mut v = vec![self.type_ref()?];
        while self.eat_op(",") {
            v.push(self.type_ref()?);
        }
        Ok(v)
    }

    fn type_params(&mut self) -> PResult<Vec<TypeParamDecl>> {
        self.expect_op("<")?;
        let mut out = Vec::new();
        loop {
            self.skip_annotations();
            let name = self.expect_ident()?;
            let mut bounds = Vec::new();
            if self.eat_kw("extends") {
                bounds.push(self.type_ref()?);
                while self.eat_op("&") {
                    bounds.push(self.type_ref()?);
                }
            }
            out.push(TypeParamDecl { name, bounds });
            if !self.eat_op(",") {
                break;
            }
        }
        self.expect_op(">")?;
        Ok(out)
    }

    fn enum_constants(&mut self, out: &mut Vec<EnumConstant>) {
        loop {
            self.skip_annotations();
            if self.eat_op(";") || self.at_op("}") {
                return;
            }
            let start = self.peek().span.start;
            let result = (|| {
                let name = self.expect_ident()?;
                let args = if self.at_op("(") {
                    self.arguments()?
                } else {
                    Vec::new()
                };
                if self.at_op("{") {
                    let at = self.peek().span.start;
                    self.diag(at, "enum constant body is not supported; skipped");
                    self.skip_group();
                }
                Ok(EnumConstant {
                    name,
                    args,
                    span: self.span_from(start),
                })
            })();
            match result {
                Ok(c) => out.push(c),
                Err(e) => {
                    self.report(e);
                    self.recover();
                    return;
                }
            }
            if !self.eat_op(",") {
                self.eat_op(";");
                return;
            }
        }
    }

    fn class_body(&mut self, class_name: &str, members: &mut Vec<Member>) {
        while !self.at_eof() && !self.at_op("}") {
            let before = self.pos;
            match self.member(class_name) {
                Ok(Some(m)) => members.push(m),
                Ok(None) => {}
                Err(e) => {
                    self.report(e);
                    self.recover();
                }
            }
            if self.pos == before {
                self.bump();
            }
        }
    }

    fn member(&mut self, class_name: &str) -> PResult<Option<Member>> {
        if self.eat_op(";") {
            return Ok(None);
        }
        if self.at_op("{") || (self.at_kw("static") && self.nth(1).is_op("{")) {
            self.eat_kw("static");
            return Ok(Some(Member::Initializer(self.block()?)));
        }
        let (modifiers, start) = self.modifiers();
        if self.at_kw("class")
            || self.at_kw("interface")
            || self.at_kw("enum")
            || self.at_kw("record")
            || (self.at_op("@") && self.nth(1).is_ident("interface"))
        {
            return Ok(self.type_decl(modifiers, start)?.map(Member::Type));
        }
        let type_params = if self.at_op("<") {
            self.type_params()?
        } else {
            Vec::new()
        };
        // constructor
        if self.peek().is_ident(class_name) && self.nth(1).is_op("(") {
            let name = self.expect_ident()?;
            let m = self.method_rest(modifiers, start, name, type_params, None)?;
            return Ok(Some(Member::Constructor(m)));
        }
        let result = if self.eat_kw("void") {
            None
        } else {
            Some(self.type_ref()?)
        };
        let name = self.expect_ident()?;
        if self.at_op("(") {
            let m = self.method_rest(modifiers, start, name, type_params, result)?;
            return Ok(Some(Member::Method(m)));
        }
        let Some(ty) = result else {
            return self.error("field cannot have type void");
        };
        let vars = self.declarators_after_first(name)?;
        self.expect_op(";")?;
        Ok(Some(Member::Field(FieldDecl {
            modifiers,
            ty,
            vars,
            span: self.span_from(start),
        })))
    }

    fn method_rest(
        &mut self,
        modifiers: Modifiers,
        start: Pos,
        name: Ident,
        type_params: Vec<TypeParamDecl>,
        result: Option<TypeRef>,
    ) -> PResult<MethodDecl> {
        self.expect_op("(")?;
        let mut params = Vec::new();
        if !self.at_op(")") {
            loop {
                let (pm, pstart) = self.modifiers();
                let ty = self.type_ref()?;
                let varargs = self.eat_op("...");
                // receiver parameter `Foo this`
                if self.at_kw("this") {
                    self.bump();
                } else {
                    let pname = self.expect_ident()?;
                    while self.at_op("[") && self.nth(1).is_op("]") {
                        self.pos += 2;
                    }
                    params.push(Param {
                        modifiers: pm,
                        ty,
                        varargs,
                        name: pname,
                        span: self.span_from(pstart),
                    });
                }
                if !self.eat_op(",") {
                    break;
                }
            }
        }
        self.expect_op(")")?;
        while self.at_op("[") && self.nth(1).is_op("]") {
            self.pos += 2;
        }
        if self.eat_kw("throws") {
            self.type_list()?;
        }
        let body = if self.at_op("{") {
            Some(self.block()?)
        } else {
            if self.eat_kw("default") {
                // annotation element default value
                self.expr()?;
            }
            self.expect_op(";")?;
            None
        };
        Ok(MethodDecl {
            modifiers,
            name,
            type_params,
            result,
            params,
            body,
            span: self.span_from(start),
        })
    }

    fn declarators_after_first(&mut self, first: Ident) -> PResult<Vec<VarDeclarator>> {
        let mut vars = Vec::new();
        let mut name = first;
        loop {
            let start = name.span.start;
            while self.at_op("[") && self.nth(1).is_op("]") {
                self.pos += 2;
            }
            let init = if self.eat_op("=") {
                Some(self.var_init()?)
            } else {
                None
            };
            vars.push(VarDeclarator {
                name,
                init,
                span: self.span_from(start),
            });
            if !self.eat_op(",") {
                break;
            }
            name = self.expect_ident()?;
        }
        Ok(vars)
    }

    fn var_init(&mut self) -> PResult<Expr> {
        if self.at_op("{") {
            self.array_init()
        } else {
            self.expr()
        }
    }

    fn array_init(&mut self) -> PResult<Expr> {
        let start = self.expect_op("{")?.start;
        let mut items = Vec::new();
        while !self.at_op("}") {
            items.push(self.var_init()?);
            if !self.eat_op(",") {
                break;
            }
        }
        self.expect_op("}")?;
        Ok(Expr {
            kind: ExprKind::ArrayInit(items),
            span: self.span_from(start),
        })
    }

    // -------------------------------------------------------------- types

    fn type_ref(&mut self) -> PResult<TypeRef> {
        self.skip_annotations();
        let start = self.peek().span.start;
        let first = match self.peek().ident() {
            Some(n) if PRIMITIVES.contains(&n) || n == "var" || !is_keyword(n) => {
                let t = self.bump();
                Ident {
                    name: n.to_string(),
                    span: t.span,
                }
            }
            _ => return self.error(format!("expected type, found {}", describe(self.peek()))),
        };
        let primitive = PRIMITIVES.contains(&first.name.as_str());
        let mut parts = vec![first];
        let mut args = Vec::new();
        if !primitive {
            loop {
                if self.at_op("<") {
                    args.extend(self.type_args()?);
                }
                if self.at_op(".") && self.nth(1).ident().is_some_and(|n| !is_keyword(n)) {
                    self.bump();
                    self.skip_annotations();
                    parts.push(self.expect_ident()?);
                } else {
                    break;
                }
            }
        }
        let mut dims = 0;
        while self.at_op("[") && self.nth(1).is_op("]") {
            self.pos += 2;
            dims += 1;
        }
        Ok(TypeRef {
            parts,
            args,
            dims,
            primitive,
            span: self.span_from(start),
        })
    }

    fn type_args(&mut self) -> PResult<Vec<TypeRef>> {
        self.expect_op("<")?;
        let mut out = Vec::new();
        if self.eat_op(">") {
            return Ok(out); // diamond
        }
        loop {
            self.skip_annotations();
            if self.eat_op("?") {
                if self.eat_kw("extends") || self.eat_kw("super") {
                    out.push(self.type_ref()?);
                }
            } else {
                out.push(self.type_ref()?);
            }
            if !self.eat_op(",") {
                break;
            }
        }
        self.expect_op(">")?;
        Ok(out)
    }

    // --------------------------------------------------------- statements

    fn block(&mut self) -> PResult<Block> {
        let start = self.expect_op("{")?.start;
        let mut stmts = Vec::new();
        while !self.at_eof() && !self.at_op("}") {
            let before = self.pos;
            match self.stmt() {
                Ok(s) => stmts.push(s),
                Err(e) => {
                    self.report(e);
                    self.recover();
                }
            }
            if self.pos == before {
                self.bump();
            }
        }
        self.expect_op("}")?;
        Ok(Block {
            stmts,
            span: self.span_from(start),
        })
    }

    fn skip_construct(&mut self, what: &str) -> Stmt {
        let start = self.peek().span.start;
        self.diag(start, format!("{what} is not supported; skipped"));
        self.bump();
        while !self.at_eof() && !self.at_op("{") && !self.at_op(";") && !self.at_op("}") {
            if self.at_op("(") {
                self.skip_group();
            } else {
                self.bump();
            }
        }
        if self.at_op("{") {
            self.skip_group();
        } else {
            self.eat_op(";");
        }
        Stmt::Skipped(self.span_from(start))
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let t = self.peek();
        if t.is_op("{") {
            return Ok(Stmt::Block(self.block()?));
        }
        if t.is_op(";") {
            self.bump();
            return Ok(Stmt::Empty);
        }
        if let Some(kw) = t.ident() {
            match kw {
                "if" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let then = Box::new(self.stmt()?);
                    let els = if self.eat_kw("else") {
                        Some(Box::new(self.stmt()?))
                    } else {
                        None
                    };
                    return Ok(Stmt::If { cond, then, els });
                }
                "while" => {
                    self.bump();
                    let cond = self.paren_expr()?;
                    let body = Box::new(self.stmt()?);
                    return Ok(Stmt::While { cond, body });
                }
                "do" => {
                    self.bump();
                    let body = Box::new(self.stmt()?);
                    if !self.eat_kw("while") {
                        return self.error("expected 'while' after do body");
                    }
                    let cond = self.paren_expr()?;
                    self.expect_op(";")?;
                    return Ok(Stmt::While { cond, body });
                }
                "for" => return self.for_stmt(),
                "try" => return self.try_stmt(),
                "return" => {
                    let start = self.bump().span.start;
                    let value = if self.at_op(";") {
                        None
                    } else {
                        Some(self.expr()?)
                    };
                    self.expect_op(";")?;
                    return Ok(Stmt::Return(value, self.span_from(start)));
                }
                "throw" => {
                    self.bump();
                    let e = self.expr()?;
                    self.expect_op(";")?;
                    return Ok(Stmt::Throw(e));
                }
                "break" | "continue" => {
                    self.bump();
                    if self.peek().ident().is_some() {
                        self.bump();
                    }
                    self.expect_op(";")?;
                    return Ok(Stmt::Empty);
                }
                "synchronized" if self.nth(1).is_op("(") => {
                    self.bump();
                    let lock = self.paren_expr()?;
                    let body = self.block()?;
                    let mut stmts = vec![Stmt::Expr(lock)];
                    stmts.extend(body.stmts);
                    return Ok(Stmt::Block(Block {
                        stmts,
                        span: body.span,
                    }));
                }
                "switch" => return Ok(self.skip_construct("switch statement")),
                "assert" => return Ok(self.skip_construct("assert statement")),
                "yield" if !self.nth(1).is_op("=") && !self.nth(1).is_op("(") => {
                    return Ok(self.skip_construct("yield statement"))
                }
                "class" | "interface" | "enum" | "record" | "abstract" | "static" => {
                    return Ok(self.skip_construct("local type declaration"))
                }
                _ => {}
            }
            if t.ident().is_some() && self.nth(1).is_op(":") && !is_keyword(kw) {
                // label
                self.pos += 2;
                return self.stmt();
            }
        }
        if self.at_kw("final") || self.at_op("@") {
            let (modifiers, start) = self.modifiers();
            if self.at_kw("class")
                || self.at_kw("interface")
                || self.at_kw("enum")
                || self.at_kw("record")
            {
                return Ok(self.skip_construct("local type declaration"));
            }
            let decl = self.local_var_rest(modifiers, start)?;
            self.expect_op(";")?;
            return Ok(Stmt::LocalVar(decl));
        }
        if let Some(decl) = self.speculate(|p| {
            let start = p.peek().span.start;
            let ty = p.type_ref()?;
            let name = p.expect_ident()?;
            if !(p.at_op("=") || p.at_op(";") || p.at_op(",") || p.at_op("[")) {
                return p.error("not a declaration");
            }
            let vars = p.declarators_after_first(name)?;
            p.expect_op(";")?;
            Ok(LocalVarDecl {
                modifiers: Modifiers::default(),
                ty,
                vars,
                span: p.span_from(start),
            })
        }) {
            return Ok(Stmt::LocalVar(decl));
        }
        let e = self.expr()?;
        self.expect_op(";")?;
        Ok(Stmt::Expr(e))
    }

    fn local_var_rest(&mut self, modifiers: Modifiers, start: Pos) -> PResult<LocalVarDecl> {
        let ty = self.type_ref()?;
        let name = self.expect_ident()?;
        let vars = self.declarators_after_first(name)?;
        Ok(LocalVarDecl {
            modifiers,
            ty,
            vars,
            span: self.span_from(start),
        })
    }

    fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect_op("(")?;
        let e = self.expr()?;
        self.expect_op(")")?;
        Ok(e)
    }

    fn for_stmt(&mut self) -> PResult<Stmt> {
        self.bump();
        self.expect_op("(")?;
        let foreach = self.speculate(|p| {
            let (modifiers, start) = p.modifiers();
            let ty = p.type_ref()?;
            let name = p.expect_ident()?;
            p.expect_op(":")?;
            let span = p.span_from(start);
            Ok(LocalVarDecl {
                modifiers,
                ty,
                vars: vec![VarDeclarator {
                    span: name.span,
                    name,
                    init: None,
                }],
                span,
            })
        });
        if let Some(var) = foreach {
            let iterable = self.expr()?;
            self.expect_op(")")?;
            let body = Box::new(self.stmt()?);
            return Ok(Stmt::ForEach {
                var,
                iterable,
                body,
            });
        }
        let mut init = Vec::new();
        if !self.at_op(";") {
            let decl = self.speculate(|p| {
                let (modifiers, start) = p.modifiers();
                let d = p.local_var_rest(modifiers, start)?;
                if !p.at_op(";") {
                    return p.error("not a declaration");
                }
                Ok(d)
            });
            match decl {
                Some(d) => init.push(Stmt::LocalVar(d)),
                None => loop {
                    init.push(Stmt::Expr(self.expr()?));
                    if !self.eat_op(",") {
                        break;
                    }
                },
            }
        }
        self.expect_op(";")?;
        let cond = if self.at_op(";") {
            None
        } else {
            Some(self.expr()?)
        };
        self.expect_op(";")?;
        let mut update = Vec::new();
        if !self.at_op(")") {
            loop {
                update.push(self.expr()?);
                if !self.eat_op(",") {
                    break;
                }
            }
        }
        self.expect_op(")")?;
        let body = Box::new(self.stmt()?);
        Ok(Stmt::For {
            init,
            cond,
            update,
            body,
        })
    }

    fn try_stmt(&mut self) -> PResult<Stmt> {
        self.bump();
        let mut resources = Vec::new();
        if self.eat_op("(") {
            while !self.at_op(")") {
                let (modifiers, start) = self.modifiers();
                match self.speculate(|p| {
                    let ty = p.type_ref()?;
                    let name = p.expect_ident()?;
                    p.expect_op("=")?;
                    let init = p.expr()?;
                    Ok((ty, name, init))
                }) {
                    Some((ty, name, init)) => resources.push(Stmt::LocalVar(LocalVarDecl {
                        modifiers,
                        ty,
                        vars: vec![VarDeclarator {
                            span: self.span_from(name.span.start),
                            name,
                            init: Some(init),
                        }],
                        span: self.span_from(start),
                    })),
                    None => resources.push(Stmt::Expr(self.expr()?)),
                }
                if !self.eat_op(";") {
                    break;
                }
            }
            self.expect_op(")")?;
        }
        let mut body = self.block()?;
        if !resources.is_empty() {
            resources.append(&mut body.stmts);
            body.stmts = resources;
        }
        let mut catches = Vec::new();
        while self.eat_kw("catch") {
            self.expect_op("(")?;
            let (modifiers, start) = self.modifiers();
            let ty = self.type_ref()?;
            while self.eat_op("|") {
                self.type_ref()?;
            }
            let name = self.expect_ident()?;
            self.expect_op(")")?;
            let decl = LocalVarDecl {
                modifiers,
                ty,
                vars: vec![VarDeclarator {
                    span: name.span,
                    name,
                    init: None,
                }],
                span: self.span_from(start),
            };
            catches.push((decl, self.block()?));
        }
        let finally = if self.eat_kw("finally") {
            Some(self.block()?)
        } else {
            None
        };
        Ok(Stmt::Try {
            body,
            catches,
            finally,
        })
    }

    // -------------------------------------------------------- expressions

    pub fn expr(&mut self) -> PResult<Expr> {
        let lhs = self.ternary()?;
        let assign = ASSIGN_OPS.iter().any(|op| self.at_op(op))
            || self.gt_combo().is_some_and(|(op, _)| op.ends_with('='));
        if assign {
            match self.gt_combo() {
                Some((_, n)) => self.pos += n,
                None => {
                    self.bump();
                }
            }
            let value = self.expr()?;
            let span = lhs.span.to(value.span);
            return Ok(Expr {
                kind: ExprKind::Assign {
                    target: Box::new(lhs),
                    value: Box::new(value),
                },
                span,
            });
        }
        Ok(lhs)
    }

    /// Operator formed by adjacent `>` tokens (and a trailing `=`), with
    /// the number of tokens it spans.
    fn gt_combo(&self) -> Option<(&'static str, usize)> {
        if !self.at_op(">") {
            return None;
        }
        let adjacent = |k: usize| self.nth(k).span.end == self.nth(k + 1).span.start;
        let mut n = 1;
        while n < 3 && self.nth(n).is_op(">") && adjacent(n - 1) {
            n += 1;
        }
        let eq = self.nth(n).is_op("=") && adjacent(n - 1);
        let op = match (n, eq) {
            (1, false) => ">",
            (1, true) => ">=",
            (2, false) => ">>",
            (2, true) => ">>=",
            (3, false) => ">>>",
            (3, true) => ">>>=",
            _ => unreachable!(),
        };
        Some((op, n + usize::from(eq)))
    }

    fn ternary(&mut self) -> PResult<Expr> {
        let cond = self.binary(1)?;
        if self.eat_op("?") {
            let then = self.expr()?;
            self.expect_op(":")?;
            let els = if self.is_lambda_start() {
                self.lambda()?
            } else {
                self.ternary()?
            };
            let span = cond.span.to(els.span);
            return Ok(Expr {
                kind: ExprKind::Ternary {
                    cond: Box::new(cond),
                    then: Box::new(then),
                    els: Box::new(els),
                },
                span,
            });
        }
        Ok(cond)
    }

    /// Binary operator at the cursor with its precedence and token length.
    fn binary_op(&self) -> Option<(u8, usize, bool)> {
        if let Some((op, n)) = self.gt_combo() {
            return match op {
                ">" | ">=" => Some((7, n, false)),
                ">>" | ">>>" => Some((8, n, false)),
                _ => None,
            };
        }
        if self.at_kw("instanceof") {
            return Some((7, 1, true));
        }
        let Tok::Op(op) = self.peek().tok else {
            return None;
        };
        let prec = match op {
            "||" => 1,
            "&&" => 2,
            "|" => 3,
            "^" => 4,
            "&" => 5,
            "==" | "!=" => 6,
            "<" | "<=" => 7,
            "<<" => 8,
            "+" | "-" => 9,
            "*" | "/" | "%" => 10,
            _ => return None,
        };
        Some((prec, 1, false))
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some((prec, len, instanceof)) = self.binary_op() {
            if prec < min_prec {
                break;
            }
            self.pos += len;
            if instanceof {
                self.eat_kw("final");
                let ty = self.type_ref()?;
                // pattern binding `x instanceof Foo f`
                if self.peek().ident().is_some_and(|n| !is_keyword(n)) {
                    let at = self.peek().span.start;
                    self.diag(
                        at,
                        "instanceof pattern binding is not supported; binding ignored",
                    );
                    self.bump();
                }
                let span = lhs.span.to(ty.span);
                lhs = Expr {
                    kind: ExprKind::InstanceOf {
                        expr: Box::new(lhs),
                        ty,
                    },
                    span,
                };
                continue;
            }
            let rhs = self.binary(prec + 1)?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr {
                kind: ExprKind::Binary(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.peek().span.start;
        if ["+", "-", "!", "~", "++", "--"]
            .iter()
            .any(|op| self.at_op(op))
        {
            self.bump();
            let e = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Unary(Box::new(e)),
                span: self.span_from(start),
            });
        }
        if self.at_op("(") {
            if self.is_lambda_start() {
                return self.lambda();
            }
            if let Some(cast) = self.speculate(|p| p.cast()) {
                return Ok(cast);
            }
        }
        let primary = self.primary()?;
        self.postfix(primary)
    }

    fn cast(&mut self) -> PResult<Expr> {
        let start = self.expect_op("(")?.start;
        let ty = self.type_ref()?;
        while self.eat_op("&") {
            self.type_ref()?;
        }
        self.expect_op(")")?;
        let next = self.peek();
        let operand_follows = match &next.tok {
            Tok::Ident(n) => n != "instanceof",
            Tok::Int | Tok::Float | Tok::Str | Tok::Char => true,
            Tok::Op(op) => matches!(*op, "(" | "!" | "~"),
            Tok::Eof => false,
        };
        let numeric_sign = (next.is_op("+") || next.is_op("-")) && ty.primitive;
        if !(operand_follows || numeric_sign) {
            return self.error("not a cast");
        }
        let e = self.unary()?;
        Ok(Expr {
            kind: ExprKind::Cast {
                ty,
                expr: Box::new(e),
            },
            span: self.span_from(start),
        })
    }

    fn is_lambda_start(&self) -> bool {
        if self.peek().ident().is_some() && self.nth(1).is_op("->") {
            return true;
        }
        if !self.at_op("(") {
            return false;
        }
        let mut depth = 0usize;
        let mut k = 0;
        loop {
            let t = self.nth(k);
            match t.tok {
                Tok::Op("(") => depth += 1,
                Tok::Op(")") => {
                    depth -= 1;
                    if depth == 0 {
                        return self.nth(k + 1).is_op("->");
                    }
                }
                Tok::Eof => return false,
                _ => {}
            }
            k += 1;
        }
    }

    fn lambda(&mut self) -> PResult<Expr> {
        let start = self.peek().span.start;
        self.diag(start, "lambda expression is not supported; body skipped");
        if self.at_op("(") {
            self.skip_group();
        } else {
            self.bump();
        }
        self.expect_op("->")?;
        if self.at_op("{") {
            self.skip_group();
        } else {
            // parsed only to find its end; the result is discarded
            let n = self.diags.len();
            self.expr()?;
            self.diags.truncate(n);
        }
        Ok(Expr {
            kind: ExprKind::Unsupported,
            span: self.span_from(start),
        })
    }

    fn arguments(&mut self) -> PResult<Vec<Expr>> {
        self.expect_op("(")?;
        let mut args = Vec::new();
        if !self.at_op(")") {
            loop {
                if self.is_lambda_start() {
                    args.push(self.lambda()?);
                } else {
                    args.push(self.expr()?);
                }
                if !self.eat_op(",") {
                    break;
                }
            }
        }
        self.expect_op(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.peek();
        let start = t.span.start;
        let lit = |kind| ExprKind::Literal(kind);
        let kind = match &t.tok {
            Tok::Int => {
                self.bump();
                lit(Literal::Int)
            }
            Tok::Float => {
                self.bump();
                lit(Literal::Float)
            }
            Tok::Str => {
                self.bump();
                lit(Literal::Str)
            }
            Tok::Char => {
                self.bump();
                lit(Literal::Char)
            }
            Tok::Op("(") => {
                self.bump();
                let inner = self.expr()?;
                self.expect_op(")")?;
                return Ok(Expr {
                    kind: inner.kind,
                    span: self.span_from(start),
                });
            }
            Tok::Op("{") => return self.array_init(),
            Tok::Ident(name) => match name.as_str() {
                "true" | "false" => {
                    self.bump();
                    lit(Literal::Bool)
                }
                "null" => {
                    self.bump();
                    lit(Literal::Null)
                }
                "this" | "super" => {
                    let is_super = name == "super";
                    self.bump();
                    if self.at_op("(") {
                        let args = self.arguments()?;
                        ExprKind::CtorCall { is_super, args }
                    } else if is_super {
                        ExprKind::Super
                    } else {
                        ExprKind::This
                    }
                }
                "new" => return self.creation(),
                "switch" => {
                    self.diag(start, "switch expression is not supported; skipped");
                    self.bump();
                    self.skip_group();
                    self.skip_group();
                    ExprKind::Unsupported
                }
                n if PRIMITIVES.contains(&n) || n == "void" => {
                    // int.class, int[].class
                    let ty = if n == "void" {
                        let t = self.bump();
                        TypeRef {
                            parts: vec![Ident {
                                name: "void".into(),
                                span: t.span,
                            }],
                            args: Vec::new(),
                            dims: 0,
                            primitive: true,
                            span: t.span,
                        }
                    } else {
                        self.type_ref()?
                    };
                    self.expect_op(".")?;
                    if !self.eat_kw("class") {
                        return self.error("expected '.class'");
                    }
                    ExprKind::ClassLiteral(ty)
                }
                n if is_keyword(n) => {
                    return self.error(format!("unexpected keyword '{n}' in expression"));
                }
                n => {
                    let id = Ident {
                        name: n.to_string(),
                        span: self.bump().span,
                    };
                    if self.at_op("(") {
                        let args = self.arguments()?;
                        ExprKind::Call {
                            target: None,
                            name: id,
                            args,
                        }
                    } else if self.at_op("[") && self.nth(1).is_op("]") {
                        // Foo[].class
                        let mut dims = 0;
                        while self.at_op("[") && self.nth(1).is_op("]") {
                            self.pos += 2;
                            dims += 1;
                        }
                        self.expect_op(".")?;
                        if !self.eat_kw("class") {
                            return self.error("expected '.class'");
                        }
                        let span = id.span;
                        ExprKind::ClassLiteral(TypeRef {
                            parts: vec![id],
                            args: Vec::new(),
                            dims,
                            primitive: false,
                            span,
                        })
                    } else {
                        ExprKind::Name(id)
                    }
                }
            },
            _ => return self.error(format!("unexpected {} in expression", describe(t))),
        };
        Ok(Expr {
            kind,
            span: self.span_from(start),
        })
    }

    fn creation(&mut self) -> PResult<Expr> {
        let start = self.bump().span.start;
        if self.at_op("<") {
            self.type_args()?;
        }
        self.skip_annotations();
        // element type without dims: `new int[3]` must not eat `[3]`
        let ty_start = self.peek().span.start;
        let mut parts = vec![match self.peek().ident() {
            Some(n) if PRIMITIVES.contains(&n) || !is_keyword(n) => {
                let t = self.bump();
                Ident {
                    name: n.to_string(),
                    span: t.span,
                }
            }
            _ => return self.error("expected type after 'new'"),
        }];
        let primitive = PRIMITIVES.contains(&parts[0].name.as_str());
        let mut args_t = Vec::new();
        if !primitive {
            loop {
                if self.at_op("<") {
                    args_t.extend(self.type_args()?);
                }
                if self.at_op(".") && self.nth(1).ident().is_some() {
                    self.bump();
                    parts.push(self.expect_ident()?);
                } else {
                    break;
                }
            }
        }
        let mut ty = TypeRef {
            parts,
            args: args_t,
            dims: 0,
            primitive,
            span: self.span_from(ty_start),
        };
        if self.at_op("[") {
            let mut dims = Vec::new();
            while self.eat_op("[") {
                if !self.at_op("]") {
                    dims.push(self.expr()?);
                }
                self.expect_op("]")?;
                ty.dims += 1;
            }
            let init = if self.at_op("{") {
                match self.array_init()?.kind {
                    ExprKind::ArrayInit(items) => items,
                    _ => Vec::new(),
                }
            } else {
                Vec::new()
            };
            return Ok(Expr {
                kind: ExprKind::NewArray { ty, dims, init },
                span: self.span_from(start),
            });
        }
        let args = self.arguments()?;
        if self.at_op("{") {
            let at = self.peek().span.start;
            self.diag(at, "anonymous class body is not supported; skipped");
            self.skip_group();
        }
        Ok(Expr {
            kind: ExprKind::New { ty, args },
            span: self.span_from(start),
        })
    }

    fn postfix(&mut self, mut e: Expr) -> PResult<Expr> {
        loop {
            let start = e.span.start;
            if self.at_op(".") {
                self.bump();
                if self.at_op("<") {
                    self.type_args()?;
                }
                if self.at_kw("new") {
                    // qualified inner creation `outer.new Inner()`
                    let created = self.creation()?;
                    e = created;
                    continue;
                }
                if self.eat_kw("this") {
                    e = Expr {
                        kind: ExprKind::This,
                        span: self.span_from(start),
                    };
                    continue;
                }
                if self.eat_kw("class") {
                    let ty = expr_as_type(&e).ok_or(Syntax {
                        at: start,
                        msg: "invalid class literal".into(),
                    })?;
                    e = Expr {
                        kind: ExprKind::ClassLiteral(ty),
                        span: self.span_from(start),
                    };
                    continue;
                }
                let name = if self.at_kw("super") {
                    let t = self.bump();
                    Ident {
                        name: "super".into(),
                        span: t.span,
                    }
                } else {
                    self.expect_ident()?
                };
                if name.name == "super" {
                    // Interface.super.m()
                    e = Expr {
                        kind: ExprKind::Super,
                        span: self.span_from(start),
                    };
                    continue;
                }
                if self.at_op("(") {
                    let args = self.arguments()?;
                    e = Expr {
                        kind: ExprKind::Call {
                            target: Some(Box::new(e)),
                            name,
                            args,
                        },
                        span: self.span_from(start),
                    };
                } else {
                    e = Expr {
                        kind: ExprKind::FieldAccess {
                            target: Box::new(e),
                            name,
                        },
                        span: self.span_from(start),
                    };
                }
            } else if self.at_op("[") {
                self.bump();
                let index = self.expr()?;
                self.expect_op("]")?;
                e = Expr {
                    kind: ExprKind::Index {
                        target: Box::new(e),
                        index: Box::new(index),
                    },
                    span: self.span_from(start),
                };
            } else if self.at_op("++") || self.at_op("--") {
                self.bump();
                e = Expr {
                    kind: ExprKind::Unary(Box::new(e)),
                    span: self.span_from(start),
                };
            } else if self.at_op("::") {
                let at = self.peek().span.start;
                self.diag(at, "method reference is not supported; skipped");
                self.bump();
                self.bump();
                e = Expr {
                    kind: ExprKind::Unsupported,
                    span: self.span_from(start),
                };
            } else {
                return Ok(e);
            }
        }
    }
}

fn expr_as_type(e: &Expr) -> Option<TypeRef> {
    let mut parts = Vec::new();
    fn walk(e: &Expr, parts: &mut Vec<Ident>) -> bool {
        match &e.kind {
            ExprKind::Name(id) => {
                parts.push(id.clone());
                true
            }
            ExprKind::FieldAccess { target, name } if walk(target, parts) => {
                parts.push(name.clone());
                true
            }
            _ => false,
        }
    }
    if !walk(e, &mut parts) {
        return None;
    }
    Some(TypeRef {
        parts,
        args: Vec::new(),
        dims: 0,
        primitive: false,
        span: e.span,
    })
}

fn describe(t: &Token) -> String {
    match &t.tok {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Op(o) => format!("'{o}'"),
        Tok::Int | Tok::Float => "number".into(),
        Tok::Str => "string literal".into(),
        Tok::Char => "char literal".into(),
        Tok::Eof => "end of file".into(),
    }
}
