//! Type expressions, the global type table, parametric polymorphism and
//! structural type equality.

use crate::diagnostic::{Code, Diagnostic};
use crate::span::Span;
use crate::syntax::ast::{TypeAst, TypeHeadAst};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicType {
    Int,
    Boolean,
    String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Container {
    Map,
    List,
    Set,
}

impl Container {
    pub fn arity(self) -> usize {
        match self {
            Container::Map => 2,
            Container::List | Container::Set => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Container::Map => "map",
            Container::List => "list",
            Container::Set => "set",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeHead {
    Container(Container),
    /// A user-declared polymorphic struct.
    Named(String),
}

/// A type expression. `App` never has an empty argument list: a struct used
/// without arguments is a `StructRef`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Basic(BasicType),
    Var(String),
    App { head: TypeHead, args: Vec<TypeExpr> },
    StructRef(String),
    Fun { params: Vec<TypeExpr>, ret: Box<TypeExpr> },
}

impl TypeExpr {
    pub const INT: TypeExpr = TypeExpr::Basic(BasicType::Int);
    pub const BOOLEAN: TypeExpr = TypeExpr::Basic(BasicType::Boolean);
    pub const STRING: TypeExpr = TypeExpr::Basic(BasicType::String);

    pub fn container(c: Container, args: Vec<TypeExpr>) -> TypeExpr {
        TypeExpr::App {
            head: TypeHead::Container(c),
            args,
        }
    }

    pub fn map(k: TypeExpr, v: TypeExpr) -> TypeExpr {
        Self::container(Container::Map, vec![k, v])
    }

    pub fn list(t: TypeExpr) -> TypeExpr {
        Self::container(Container::List, vec![t])
    }

    pub fn set(t: TypeExpr) -> TypeExpr {
        Self::container(Container::Set, vec![t])
    }

    /// A use of struct `name`; zero arguments gives a plain reference.
    pub fn named(name: impl Into<String>, args: Vec<TypeExpr>) -> TypeExpr {
        if args.is_empty() {
            TypeExpr::StructRef(name.into())
        } else {
            TypeExpr::App {
                head: TypeHead::Named(name.into()),
                args,
            }
        }
    }

    pub fn var(name: impl Into<String>) -> TypeExpr {
        TypeExpr::Var(name.into())
    }

    /// True when no type variable occurs anywhere inside.
    pub fn is_ground(&self) -> bool {
        match self {
            TypeExpr::Basic(_) | TypeExpr::StructRef(_) => true,
            TypeExpr::Var(_) => false,
            TypeExpr::App { args, .. } => args.iter().all(TypeExpr::is_ground),
            TypeExpr::Fun { params, ret } => params.iter().all(TypeExpr::is_ground) && ret.is_ground(),
        }
    }

    pub fn free_vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            TypeExpr::Basic(_) | TypeExpr::StructRef(_) => {}
            TypeExpr::Var(v) => out.push(v),
            TypeExpr::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            TypeExpr::Fun { params, ret } => {
                params.iter().for_each(|a| a.collect_vars(out));
                ret.collect_vars(out);
            }
        }
    }

    /// Struct name and arguments, if this is a struct type.
    pub fn as_struct(&self) -> Option<(&str, &[TypeExpr])> {
        match self {
            TypeExpr::StructRef(n) => Some((n, &[])),
            TypeExpr::App {
                head: TypeHead::Named(n),
                args,
            } => Some((n, args)),
            _ => None,
        }
    }

    pub fn as_container(&self) -> Option<(Container, &[TypeExpr])> {
        match self {
            TypeExpr::App {
                head: TypeHead::Container(c),
                args,
            } => Some((*c, args)),
            _ => None,
        }
    }

    /// Simultaneous substitution of type variables.
    pub fn subst(&self, map: &HashMap<&str, &TypeExpr>) -> TypeExpr {
        match self {
            TypeExpr::Var(v) => map.get(v.as_str()).map_or_else(|| self.clone(), |t| (*t).clone()),
            TypeExpr::Basic(_) | TypeExpr::StructRef(_) => self.clone(),
            TypeExpr::App { head, args } => TypeExpr::App {
                head: head.clone(),
                args: args.iter().map(|a| a.subst(map)).collect(),
            },
            TypeExpr::Fun { params, ret } => TypeExpr::Fun {
                params: params.iter().map(|a| a.subst(map)).collect(),
                ret: Box::new(ret.subst(map)),
            },
        }
    }

    /// Struct names mentioned anywhere inside, including container arguments.
    fn struct_mentions<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            TypeExpr::Basic(_) | TypeExpr::Var(_) => {}
            TypeExpr::StructRef(n) => out.push(n),
            TypeExpr::App { head, args } => {
                if let TypeHead::Named(n) = head {
                    out.push(n);
                }
                args.iter().for_each(|a| a.struct_mentions(out));
            }
            TypeExpr::Fun { params, ret } => {
                params.iter().for_each(|a| a.struct_mentions(out));
                ret.struct_mentions(out);
            }
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, ts: &[TypeExpr]) -> fmt::Result {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{t}")?;
            }
            Ok(())
        }
        match self {
            TypeExpr::Basic(BasicType::Int) => f.write_str("int"),
            TypeExpr::Basic(BasicType::Boolean) => f.write_str("boolean"),
            TypeExpr::Basic(BasicType::String) => f.write_str("string"),
            TypeExpr::Var(v) | TypeExpr::StructRef(v) => f.write_str(v),
            TypeExpr::App { head, args } => {
                match head {
                    TypeHead::Container(c) => f.write_str(c.name())?,
                    TypeHead::Named(n) => f.write_str(n)?,
                }
                f.write_str("<")?;
                list(f, args)?;
                f.write_str(">")
            }
            TypeExpr::Fun { params, ret } => {
                f.write_str("fun(")?;
                list(f, params)?;
                write!(f, ") : {ret}")
            }
        }
    }
}

/// Structural equality: same head, pointwise structurally equal arguments.
/// Struct types compare by declared name plus argument list.
pub fn structural_eq(a: &TypeExpr, b: &TypeExpr) -> bool {
    use TypeExpr::*;
    match (a, b) {
        (Basic(x), Basic(y)) => x == y,
        (Var(x), Var(y)) => x == y,
        (StructRef(x), StructRef(y)) => x == y,
        (App { head: h1, args: a1 }, App { head: h2, args: a2 }) => {
            h1 == h2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| structural_eq(x, y))
        }
        (Fun { params: p1, ret: r1 }, Fun { params: p2, ret: r2 }) => {
            p1.len() == p2.len() && p1.iter().zip(p2).all(|(x, y)| structural_eq(x, y)) && structural_eq(r1, r2)
        }
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    pub ty: TypeExpr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructDecl {
    pub name: String,
    pub type_params: Vec<String>,
    pub fields: Vec<FieldDecl>,
    pub span: Span,
}

impl StructDecl {
    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// Replaces the type parameters by `args` throughout the field list.
    pub fn substantiate(&self, args: &[TypeExpr]) -> Result<StructDecl, SubstError> {
        let map = bind(&self.name, &self.type_params, args)?;
        Ok(StructDecl {
            name: self.name.clone(),
            type_params: Vec::new(),
            fields: self
                .fields
                .iter()
                .map(|f| FieldDecl {
                    name: f.name.clone(),
                    ty: f.ty.subst(&map),
                    span: f.span,
                })
                .collect(),
            span: self.span,
        })
    }

    /// The type expression naming this struct at `args`.
    pub fn instance_type(&self, args: Vec<TypeExpr>) -> TypeExpr {
        TypeExpr::named(self.name.clone(), args)
    }
}

/// Container library functions with built-in semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    GetMap,
    PutMap,
    AddList,
    GetList,
    SizeList,
    AddSet,
    ContainsSet,
    SizeSet,
}

impl Builtin {
    pub const ALL: [Builtin; 8] = [
        Builtin::GetMap,
        Builtin::PutMap,
        Builtin::AddList,
        Builtin::GetList,
        Builtin::SizeList,
        Builtin::AddSet,
        Builtin::ContainsSet,
        Builtin::SizeSet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::GetMap => "get_map",
            Builtin::PutMap => "put_map",
            Builtin::AddList => "add_list",
            Builtin::GetList => "get_list",
            Builtin::SizeList => "size_list",
            Builtin::AddSet => "add_set",
            Builtin::ContainsSet => "contains_set",
            Builtin::SizeSet => "size_set",
        }
    }

    pub fn decl(self) -> FunDecl {
        let k = || TypeExpr::var("K");
        let v = || TypeExpr::var("V");
        let t = || TypeExpr::var("T");
        let (params, ps, ret): (&[&str], Vec<TypeExpr>, TypeExpr) = match self {
            Builtin::GetMap => (&["K", "V"], vec![TypeExpr::map(k(), v()), k()], v()),
            Builtin::PutMap => (
                &["K", "V"],
                vec![TypeExpr::map(k(), v()), k(), v()],
                TypeExpr::map(k(), v()),
            ),
            Builtin::AddList => (&["T"], vec![TypeExpr::list(t()), t()], TypeExpr::list(t())),
            Builtin::GetList => (&["T"], vec![TypeExpr::list(t()), TypeExpr::INT], t()),
            Builtin::SizeList => (&["T"], vec![TypeExpr::list(t())], TypeExpr::INT),
            Builtin::AddSet => (&["T"], vec![TypeExpr::set(t()), t()], TypeExpr::set(t())),
            Builtin::ContainsSet => (&["T"], vec![TypeExpr::set(t()), t()], TypeExpr::BOOLEAN),
            Builtin::SizeSet => (&["T"], vec![TypeExpr::set(t())], TypeExpr::INT),
        };
        FunDecl {
            name: self.name().to_string(),
            type_params: params.iter().map(|s| s.to_string()).collect(),
            params: ps,
            ret,
            builtin: Some(self),
            span: Span::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunDecl {
    pub name: String,
    pub type_params: Vec<String>,
    pub params: Vec<TypeExpr>,
    pub ret: TypeExpr,
    /// Set for library functions; user declarations have no body.
    pub builtin: Option<Builtin>,
    pub span: Span,
}

impl FunDecl {
    pub fn substantiate(&self, args: &[TypeExpr]) -> Result<FunDecl, SubstError> {
        let map = bind(&self.name, &self.type_params, args)?;
        Ok(FunDecl {
            name: self.name.clone(),
            type_params: Vec::new(),
            params: self.params.iter().map(|p| p.subst(&map)).collect(),
            ret: self.ret.subst(&map),
            builtin: self.builtin,
            span: self.span,
        })
    }

    pub fn signature(&self) -> TypeExpr {
        TypeExpr::Fun {
            params: self.params.clone(),
            ret: Box::new(self.ret.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("`{name}` takes {expected} type argument(s) but {found} were supplied")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("type `{ty}` is not fully substantiated")]
    Unsubstantiated { ty: TypeExpr },
}

impl SubstError {
    pub fn code(&self) -> Code {
        match self {
            SubstError::Arity { .. } => Code::Arity,
            SubstError::Unsubstantiated { .. } => Code::Unsubstantiated,
        }
    }
}

fn bind<'a>(
    name: &str,
    params: &'a [String],
    args: &'a [TypeExpr],
) -> Result<HashMap<&'a str, &'a TypeExpr>, SubstError> {
    if params.len() != args.len() {
        return Err(SubstError::Arity {
            name: name.to_string(),
            expected: params.len(),
            found: args.len(),
        });
    }
    Ok(params.iter().map(String::as_str).zip(args).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeDef {
    Struct(StructDecl),
    Fun(FunDecl),
}

impl TypeDef {
    pub fn name(&self) -> &str {
        match self {
            TypeDef::Struct(s) => &s.name,
            TypeDef::Fun(f) => &f.name,
        }
    }

    pub fn type_params(&self) -> &[String] {
        match self {
            TypeDef::Struct(s) => &s.type_params,
            TypeDef::Fun(f) => &f.type_params,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            TypeDef::Struct(s) => s.span,
            TypeDef::Fun(f) => f.span,
        }
    }
}

/// Substantiates either kind of polymorphic declaration. With `require_ground`
/// the result may not mention any type variable, as for variable declarations.
pub fn substantiate(def: &TypeDef, args: &[TypeExpr], require_ground: bool) -> Result<TypeDef, SubstError> {
    let out = match def {
        TypeDef::Struct(s) => TypeDef::Struct(s.substantiate(args)?),
        TypeDef::Fun(f) => TypeDef::Fun(f.substantiate(args)?),
    };
    if require_ground {
        if let Some(bad) = args.iter().find(|a| !a.is_ground()) {
            return Err(SubstError::Unsubstantiated { ty: bad.clone() });
        }
    }
    Ok(out)
}

/// Global table of struct and function declarations, pre-loaded with the
/// container library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeTable {
    defs: BTreeMap<String, TypeDef>,
}

impl Default for TypeTable {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl TypeTable {
    pub fn with_builtins() -> Self {
        let defs = Builtin::ALL
            .iter()
            .map(|b| (b.name().to_string(), TypeDef::Fun(b.decl())))
            .collect();
        TypeTable { defs }
    }

    pub fn get(&self, name: &str) -> Option<&TypeDef> {
        self.defs.get(name)
    }

    pub fn get_struct(&self, name: &str) -> Option<&StructDecl> {
        match self.defs.get(name) {
            Some(TypeDef::Struct(s)) => Some(s),
            _ => None,
        }
    }

    pub fn get_fun(&self, name: &str) -> Option<&FunDecl> {
        match self.defs.get(name) {
            Some(TypeDef::Fun(f)) => Some(f),
            _ => None,
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name)
    }

    /// Adds or replaces a declaration. Duplicate detection is the caller's job.
    pub fn insert(&mut self, def: TypeDef) {
        self.defs.insert(def.name().to_string(), def);
    }

    pub fn iter(&self) -> impl Iterator<Item = &TypeDef> {
        self.defs.values()
    }

    /// Field list of a struct type at its arguments.
    pub fn struct_fields(&self, ty: &TypeExpr) -> Option<Vec<FieldDecl>> {
        let (name, args) = ty.as_struct()?;
        let decl = self.get_struct(name)?;
        decl.substantiate(args).ok().map(|d| d.fields)
    }
}

/// Checks a declaration against the table: every referenced type is known,
/// polymorphic references have matching arity, every type variable is a
/// parameter of `def`, names are unique, and no struct reaches itself.
pub fn check_type_decl(def: &TypeDef, table: &TypeTable) -> Result<(), Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let params = def.type_params();
    let mut seen = HashSet::new();
    for p in params {
        if !seen.insert(p.as_str()) {
            diags.push(Diagnostic::new(
                Code::Duplicate,
                def.span(),
                format!("type parameter `{p}` of `{}` declared twice", def.name()),
            ));
        }
    }

    let check = |ty: &TypeExpr, span: Span, diags: &mut Vec<Diagnostic>| {
        check_type_expr(ty, params, table, span, diags);
    };
    match def {
        TypeDef::Struct(s) => {
            let mut fields = HashSet::new();
            for f in &s.fields {
                if !fields.insert(f.name.as_str()) {
                    diags.push(Diagnostic::new(
                        Code::Duplicate,
                        f.span,
                        format!("field `{}` declared twice in `{}`", f.name, s.name),
                    ));
                }
                check(&f.ty, f.span, &mut diags);
            }
            if let Some(field) = recursive_field(s, table) {
                diags.push(Diagnostic::new(
                    Code::RecursiveType,
                    field.span,
                    format!(
                        "field `{}` makes struct `{}` recursive; recursive types are not allowed",
                        field.name, s.name
                    ),
                ));
            }
        }
        TypeDef::Fun(f) => {
            for p in &f.params {
                check(p, f.span, &mut diags);
            }
            check(&f.ret, f.span, &mut diags);
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

fn check_type_expr(ty: &TypeExpr, params: &[String], table: &TypeTable, span: Span, diags: &mut Vec<Diagnostic>) {
    match ty {
        TypeExpr::Basic(_) => {}
        TypeExpr::Var(v) => {
            if !params.iter().any(|p| p == v) {
                diags.push(Diagnostic::new(
                    Code::UnboundTypeVar,
                    span,
                    format!("type variable `{v}` is not a parameter of the enclosing declaration"),
                ));
            }
        }
        TypeExpr::StructRef(n) => match table.get_struct(n) {
            None => diags.push(unknown_type(n, span)),
            Some(d) if !d.type_params.is_empty() => diags.push(Diagnostic::new(
                Code::Unsubstantiated,
                span,
                format!("`{n}` needs {} type argument(s)", d.type_params.len()),
            )),
            Some(_) => {}
        },
        TypeExpr::App { head, args } => {
            let expected = match head {
                TypeHead::Container(c) => Some(c.arity()),
                TypeHead::Named(n) => table.get_struct(n).map(|d| d.type_params.len()),
            };
            match expected {
                None => {
                    let TypeHead::Named(n) = head else { unreachable!() };
                    diags.push(unknown_type(n, span));
                }
                Some(k) if k != args.len() => diags.push(arity_error(head, k, args.len(), span)),
                Some(_) => {}
            }
            for a in args {
                check_type_expr(a, params, table, span, diags);
            }
        }
        TypeExpr::Fun { params: ps, ret } => {
            for p in ps {
                check_type_expr(p, params, table, span, diags);
            }
            check_type_expr(ret, params, table, span, diags);
        }
    }
}

fn unknown_type(name: &str, span: Span) -> Diagnostic {
    Diagnostic::new(Code::UnknownType, span, format!("unknown type `{name}`"))
}

fn arity_error(head: &TypeHead, expected: usize, found: usize, span: Span) -> Diagnostic {
    let name = match head {
        TypeHead::Container(c) => c.name(),
        TypeHead::Named(n) => n,
    };
    Diagnostic::new(
        Code::Arity,
        span,
        format!("`{name}` takes {expected} type argument(s) but {found} were supplied"),
    )
}

/// First field of `s` through which `s` reaches itself, if any.
fn recursive_field<'a>(s: &'a StructDecl, table: &TypeTable) -> Option<&'a FieldDecl> {
    s.fields.iter().find(|f| {
        let mut stack = Vec::new();
        f.ty.struct_mentions(&mut stack);
        let mut visited = HashSet::new();
        while let Some(n) = stack.pop() {
            if n == s.name {
                return true;
            }
            if !visited.insert(n) {
                continue;
            }
            if let Some(d) = table.get_struct(n) {
                for g in &d.fields {
                    g.ty.struct_mentions(&mut stack);
                }
            }
        }
        false
    })
}

/// Where a syntactic type is being interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeContext<'a> {
    /// Inside a struct or function declaration with these type parameters.
    Declaration(&'a [String]),
    /// A variable declaration or explicit type argument: must be ground.
    Variable,
}

/// Interprets a syntactic type against the table.
pub fn lower_type(ast: &TypeAst, table: &TypeTable, ctx: TypeContext<'_>) -> Result<TypeExpr, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let ty = lower(ast, table, ctx, &mut diags);
    match ty {
        Some(t) if diags.is_empty() => Ok(t),
        _ => Err(diags),
    }
}

fn lower(ast: &TypeAst, table: &TypeTable, ctx: TypeContext<'_>, diags: &mut Vec<Diagnostic>) -> Option<TypeExpr> {
    let args: Vec<Option<TypeExpr>> = ast.args.iter().map(|a| lower(a, table, ctx, diags)).collect();
    let container = match ast.head {
        TypeHeadAst::Int => return Some(TypeExpr::INT),
        TypeHeadAst::Boolean => return Some(TypeExpr::BOOLEAN),
        TypeHeadAst::String => return Some(TypeExpr::STRING),
        TypeHeadAst::Map => Some(Container::Map),
        TypeHeadAst::List => Some(Container::List),
        TypeHeadAst::Set => Some(Container::Set),
        TypeHeadAst::Named => None,
    };
    let (head, expected) = match container {
        Some(c) => (TypeHead::Container(c), c.arity()),
        None => {
            let name = &ast.name;
            if let TypeContext::Declaration(params) = ctx {
                if params.iter().any(|p| p == name) {
                    if !ast.args.is_empty() {
                        diags.push(Diagnostic::new(
                            Code::Arity,
                            ast.span,
                            format!("type variable `{name}` cannot take type arguments"),
                        ));
                        return None;
                    }
                    return Some(TypeExpr::Var(name.clone()));
                }
            }
            match table.get(name) {
                Some(TypeDef::Struct(d)) => (TypeHead::Named(name.clone()), d.type_params.len()),
                Some(TypeDef::Fun(_)) => {
                    diags.push(Diagnostic::new(
                        Code::UnknownType,
                        ast.span,
                        format!("`{name}` is a function, not a type"),
                    ));
                    return None;
                }
                None => {
                    diags.push(unknown_type(name, ast.span));
                    return None;
                }
            }
        }
    };
    if ast.args.is_empty() && expected > 0 {
        diags.push(Diagnostic::new(
            Code::Unsubstantiated,
            ast.span,
            format!(
                "polymorphic type `{}` must be given {expected} type argument(s)",
                head_name(&head)
            ),
        ));
        return None;
    }
    if ast.args.len() != expected {
        diags.push(arity_error(&head, expected, ast.args.len(), ast.span));
        return None;
    }
    let args: Option<Vec<TypeExpr>> = args.into_iter().collect();
    let args = args?;
    Some(match head {
        TypeHead::Named(n) => TypeExpr::named(n, args),
        h => TypeExpr::App { head: h, args },
    })
}

fn head_name(h: &TypeHead) -> &str {
    match h {
        TypeHead::Container(c) => c.name(),
        TypeHead::Named(n) => n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type_source;

    fn s1() -> StructDecl {
        StructDecl {
            name: "S1".into(),
            type_params: vec!["A".into()],
            fields: vec![FieldDecl {
                name: "a".into(),
                ty: TypeExpr::var("A"),
                span: Span::default(),
            }],
            span: Span::default(),
        }
    }

    fn field(name: &str, ty: TypeExpr) -> FieldDecl {
        FieldDecl {
            name: name.into(),
            ty,
            span: Span::default(),
        }
    }

    fn table_with(defs: Vec<StructDecl>) -> TypeTable {
        let mut t = TypeTable::with_builtins();
        for d in defs {
            t.insert(TypeDef::Struct(d));
        }
        t
    }

    #[test]
    fn polymorphic_struct_referencing_polymorphic_struct() {
        let s2 = StructDecl {
            name: "S2".into(),
            type_params: vec!["A".into(), "B".into()],
            fields: vec![
                field("s1", TypeExpr::named("S1", vec![TypeExpr::var("B")])),
                field("s2", TypeExpr::named("S1", vec![TypeExpr::var("A")])),
                field("s3", TypeExpr::named("S1", vec![TypeExpr::INT])),
                field("s4", TypeExpr::STRING),
            ],
            span: Span::default(),
        };
        let table = table_with(vec![s1(), s2.clone()]);
        assert_eq!(check_type_decl(&TypeDef::Struct(s2), &table), Ok(()));
    }

    #[test]
    fn recursion_is_rejected() {
        let r = StructDecl {
            name: "R".into(),
            type_params: vec![],
            fields: vec![field("r", TypeExpr::StructRef("R".into()))],
            span: Span::default(),
        };
        let table = table_with(vec![r.clone()]);
        let errs = check_type_decl(&TypeDef::Struct(r), &table).unwrap_err();
        assert_eq!(errs[0].code, Code::RecursiveType);

        // Mutual recursion through a container argument.
        let a = StructDecl {
            name: "A".into(),
            type_params: vec![],
            fields: vec![field("b", TypeExpr::list(TypeExpr::StructRef("B".into())))],
            span: Span::default(),
        };
        let b = StructDecl {
            name: "B".into(),
            type_params: vec![],
            fields: vec![field("a", TypeExpr::StructRef("A".into()))],
            span: Span::default(),
        };
        let table = table_with(vec![a.clone(), b]);
        let errs = check_type_decl(&TypeDef::Struct(a), &table).unwrap_err();
        assert_eq!(errs[0].code, Code::RecursiveType);
    }

    #[test]
    fn arity_and_unbound_and_unknown() {
        let table = table_with(vec![s1()]);
        let t = StructDecl {
            name: "T".into(),
            type_params: vec![],
            fields: vec![field("x", TypeExpr::named("S1", vec![TypeExpr::INT, TypeExpr::INT]))],
            span: Span::default(),
        };
        let errs = check_type_decl(&TypeDef::Struct(t), &table).unwrap_err();
        assert_eq!(errs[0].code, Code::Arity);

        let u = StructDecl {
            name: "U".into(),
            type_params: vec!["A".into()],
            fields: vec![
                field("x", TypeExpr::var("B")),
                field("y", TypeExpr::StructRef("Nope".into())),
            ],
            span: Span::default(),
        };
        let codes: Vec<_> = check_type_decl(&TypeDef::Struct(u), &table)
            .unwrap_err()
            .into_iter()
            .map(|d| d.code)
            .collect();
        assert_eq!(codes, [Code::UnboundTypeVar, Code::UnknownType]);
    }

    #[test]
    fn substantiate_pair() {
        let pair = StructDecl {
            name: "pair".into(),
            type_params: vec!["A".into(), "B".into()],
            fields: vec![field("first", TypeExpr::var("A")), field("second", TypeExpr::var("B"))],
            span: Span::default(),
        };
        let c = pair.substantiate(&[TypeExpr::INT, TypeExpr::BOOLEAN]).unwrap();
        assert_eq!(c.fields[0].ty, TypeExpr::INT);
        assert_eq!(c.fields[1].ty, TypeExpr::BOOLEAN);
        assert!(c.type_params.is_empty());
    }

    #[test]
    fn substantiate_symbolically_keeps_variables() {
        let inner = s1().substantiate(&[TypeExpr::var("A")]).unwrap();
        assert_eq!(inner.fields[0].ty, TypeExpr::var("A"));
        let err = substantiate(&TypeDef::Struct(s1()), &[TypeExpr::var("A")], true).unwrap_err();
        assert_eq!(err.code(), Code::Unsubstantiated);
    }

    #[test]
    fn substitution_is_simultaneous() {
        let pair = StructDecl {
            name: "P".into(),
            type_params: vec!["A".into(), "B".into()],
            fields: vec![field("x", TypeExpr::map(TypeExpr::var("A"), TypeExpr::var("B")))],
            span: Span::default(),
        };
        let swapped = pair.substantiate(&[TypeExpr::var("B"), TypeExpr::var("A")]).unwrap();
        assert_eq!(
            swapped.fields[0].ty,
            TypeExpr::map(TypeExpr::var("B"), TypeExpr::var("A"))
        );
    }

    #[test]
    fn get_map_signature() {
        let f = Builtin::GetMap
            .decl()
            .substantiate(&[TypeExpr::INT, TypeExpr::STRING])
            .unwrap();
        assert_eq!(
            f.params,
            vec![TypeExpr::map(TypeExpr::INT, TypeExpr::STRING), TypeExpr::INT]
        );
        assert_eq!(f.ret, TypeExpr::STRING);
        assert_eq!(f.signature().to_string(), "fun(map<int, string>, int) : string");

        let err = Builtin::GetMap.decl().substantiate(&[TypeExpr::INT]).unwrap_err();
        assert_eq!(err.code(), Code::Arity);
    }

    #[test]
    fn structural_equality_examples() {
        let s = |a: TypeExpr, b: TypeExpr| TypeExpr::named("S", vec![a, b]);
        assert!(structural_eq(
            &s(TypeExpr::INT, TypeExpr::INT),
            &s(TypeExpr::INT, TypeExpr::INT)
        ));
        assert!(!structural_eq(
            &s(TypeExpr::INT, TypeExpr::INT),
            &s(TypeExpr::STRING, TypeExpr::STRING)
        ));
        assert!(structural_eq(&TypeExpr::INT, &TypeExpr::INT));
        // Same shape, different declared names.
        assert!(!structural_eq(
            &TypeExpr::StructRef("A".into()),
            &TypeExpr::StructRef("B".into())
        ));
    }

    #[test]
    fn lowering_variable_types() {
        let table = table_with(vec![s1()]);
        let lower_var = |src: &str| lower_type(&parse_type_source(src).unwrap(), &table, TypeContext::Variable);
        assert_eq!(
            lower_var("map<int, S1<string>>").unwrap(),
            TypeExpr::map(TypeExpr::INT, TypeExpr::named("S1", vec![TypeExpr::STRING]))
        );
        assert_eq!(lower_var("S1").unwrap_err()[0].code, Code::Unsubstantiated);
        assert_eq!(lower_var("map").unwrap_err()[0].code, Code::Unsubstantiated);
        assert_eq!(lower_var("S1<int, int>").unwrap_err()[0].code, Code::Arity);
        assert_eq!(lower_var("list<int, int>").unwrap_err()[0].code, Code::Arity);
        assert_eq!(lower_var("Q").unwrap_err()[0].code, Code::UnknownType);
        assert_eq!(lower_var("get_map").unwrap_err()[0].code, Code::UnknownType);

        let params = vec!["A".to_string()];
        let t = lower_type(
            &parse_type_source("S1<A>").unwrap(),
            &table,
            TypeContext::Declaration(&params),
        )
        .unwrap();
        assert_eq!(t, TypeExpr::named("S1", vec![TypeExpr::var("A")]));
    }
}
