//! Quivers with relations: the data model, a small text format for writing
//! presentations down, and a catalog of shipped families.
//!
//! A presentation is a quiver, a list of relation expressions, and parameter
//! declarations (an integer size parameter `n`, scalar parameters such as the
//! `c` of the two-vertex semidihedral family).  Relations stay symbolic until
//! [`AlgebraPresentation::instantiate`] binds every parameter; expansion into
//! flat linear combinations of paths happens in [`crate::rewriting`].
//!
//! Composition is written right to left throughout: in a product `a*b`, the
//! path `b` is applied first.  Modules are left modules, so the projective at
//! a vertex `v` is spanned by the paths starting at `v`.

mod catalog;
mod parse;

pub use catalog::{
    bind_parameters, default_degree_cap, family_source, instantiate_family, CatalogError, FamilyId,
};
pub use parse::{parse_presentation, ParseError};

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{Field, FieldElement};

/// Index of a vertex in declaration order.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct VertexId(pub usize);

/// Index of an arrow in declaration order.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct ArrowId(pub usize);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A finite directed multigraph with uniquely named vertices and arrows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Quiver, ElabError> {
        let q = Quiver { vertices, arrows };
        for (i, v) in q.vertices.iter().enumerate() {
            if q.vertices[..i].contains(v) {
                return Err(ElabError::DuplicateName(v.clone()));
            }
        }
        for (i, a) in q.arrows.iter().enumerate() {
            if q.arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(ElabError::DuplicateName(a.name.clone()));
            }
            if a.source.0 >= q.vertices.len() || a.target.0 >= q.vertices.len() {
                return Err(ElabError::UnknownVertex(format!("arrow {}", a.name)));
            }
        }
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == label).map(VertexId)
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name).map(ArrowId)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrows.len()).map(ArrowId)
    }

    /// Arrows with the given source vertex.
    pub fn arrows_from(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.source == v).map(|(i, _)| ArrowId(i))
    }

    /// Arrows with the given target vertex.
    pub fn arrows_into(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.target == v).map(|(i, _)| ArrowId(i))
    }

    /// The reversed quiver: same names, sources and targets swapped.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
                .collect(),
        }
    }
}

/// Integer expressions in the size parameters, e.g. `2^(n-2)-1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IntExpr {
    Const(i64),
    Param(String),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Pow(Box<IntExpr>, Box<IntExpr>),
}

impl IntExpr {
    pub fn eval(&self, bindings: &BTreeMap<String, ParamValue>) -> Result<i64, ElabError> {
        match self {
            IntExpr::Const(n) => Ok(*n),
            IntExpr::Param(name) => match bindings.get(name) {
                Some(ParamValue::Int(n)) => Ok(*n),
                Some(ParamValue::Scalar(_)) => Err(ElabError::WrongParamKind(name.clone())),
                None => Err(ElabError::UnboundParam(name.clone())),
            },
            IntExpr::Add(a, b) => Ok(a.eval(bindings)? + b.eval(bindings)?),
            IntExpr::Sub(a, b) => Ok(a.eval(bindings)? - b.eval(bindings)?),
            IntExpr::Mul(a, b) => Ok(a.eval(bindings)? * b.eval(bindings)?),
            IntExpr::Pow(a, b) => {
                let base = a.eval(bindings)?;
                let exp = b.eval(bindings)?;
                if exp < 0 || exp > 62 {
                    return Err(ElabError::BadExponent(exp));
                }
                base.checked_pow(exp as u32).ok_or(ElabError::BadExponent(exp))
            }
        }
    }

    /// Evaluates when no parameters occur, for early validation.
    fn eval_const(&self) -> Option<i64> {
        self.eval(&BTreeMap::new()).ok()
    }
}

/// A scalar coefficient: an integer literal (reduced into the prime field) or
/// a declared scalar parameter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Coef {
    Int(i64),
    Param(String),
}

/// Abstract syntax of a relation expression.
///
/// `Mul(a, b)` composes right to left (`b` first).  Powers are only legal on
/// subexpressions whose source and target agree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PathExpr {
    /// The idempotent `e(v)` at a vertex.
    Vertex(String),
    Arrow(String),
    Mul(Box<PathExpr>, Box<PathExpr>),
    Pow(Box<PathExpr>, IntExpr),
    Scalar(Coef, Box<PathExpr>),
    Add(Box<PathExpr>, Box<PathExpr>),
    Sub(Box<PathExpr>, Box<PathExpr>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParamKind {
    Int { min: Option<i64> },
    Scalar,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamDecl {
    pub name: String,
    pub kind: ParamKind,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ParamValue {
    Int(i64),
    Scalar(FieldElement),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ElabError {
    DuplicateName(String),
    UnknownVertex(String),
    UnknownSymbol(String),
    NotComposable { left: String, right: String },
    InhomogeneousSum { detail: String },
    PowerOfNonEndomorphism { detail: String },
    BadExponent(i64),
    UnboundParam(String),
    WrongParamKind(String),
    UnknownParam(String),
    ParamConstraint { name: String, min: i64, got: i64 },
    MissingParam(String),
    ScalarOutsideField(String),
}

impl fmt::Display for ElabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElabError::DuplicateName(n) => write!(f, "duplicate name `{n}`"),
            ElabError::UnknownVertex(d) => write!(f, "unknown vertex in {d}"),
            ElabError::UnknownSymbol(n) => write!(f, "unknown symbol `{n}`"),
            ElabError::NotComposable { left, right } => {
                write!(f, "product `{left}*{right}` is not composable: target of `{right}` differs from source of `{left}`")
            }
            ElabError::InhomogeneousSum { detail } => {
                write!(f, "summands have different endpoints: {detail}")
            }
            ElabError::PowerOfNonEndomorphism { detail } => {
                write!(f, "power of a non-endomorphism path: {detail}")
            }
            ElabError::BadExponent(e) => write!(f, "exponent {e} out of range"),
            ElabError::UnboundParam(n) => write!(f, "parameter `{n}` is not bound"),
            ElabError::WrongParamKind(n) => write!(f, "parameter `{n}` used with the wrong kind"),
            ElabError::UnknownParam(n) => write!(f, "no declared parameter named `{n}`"),
            ElabError::ParamConstraint { name, min, got } => {
                write!(f, "parameter `{name}` must be >= {min}, got {got}")
            }
            ElabError::MissingParam(n) => write!(f, "missing value for parameter `{n}`"),
            ElabError::ScalarOutsideField(n) => {
                write!(f, "scalar for `{n}` does not lie in the presentation field")
            }
        }
    }
}

/// A quiver together with parameterized relations and a coefficient field.
///
/// Immutable after construction.  `bindings` is empty for a freshly parsed
/// presentation and total after [`instantiate`](Self::instantiate).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraPresentation {
    pub field: Field,
    pub quiver: Quiver,
    pub params: Vec<ParamDecl>,
    pub bindings: BTreeMap<String, ParamValue>,
    pub relations: Vec<PathExpr>,
}

impl AlgebraPresentation {
    /// Validates names, composability, endpoint homogeneity and constant
    /// exponents.  Called by the parser and by `instantiate`.
    pub fn validate(&self) -> Result<(), ElabError> {
        for p in &self.params {
            if self.quiver.arrow_id(&p.name).is_some() || self.quiver.vertex_id(&p.name).is_some() {
                return Err(ElabError::DuplicateName(p.name.clone()));
            }
        }
        for rel in &self.relations {
            self.signature(rel)?;
        }
        Ok(())
    }

    pub fn param(&self, name: &str) -> Option<&ParamDecl> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn is_instantiated(&self) -> bool {
        self.params.iter().all(|p| self.bindings.contains_key(&p.name))
    }

    /// The bound value of the conventional size parameter `n`, when present.
    pub fn size_parameter(&self) -> Option<i64> {
        match self.bindings.get("n") {
            Some(ParamValue::Int(n)) => Some(*n),
            _ => None,
        }
    }

    /// Source and target of a path expression, checking composability and
    /// endpoint homogeneity along the way.
    pub fn signature(&self, expr: &PathExpr) -> Result<(VertexId, VertexId), ElabError> {
        match expr {
            PathExpr::Vertex(label) => {
                let v = self
                    .quiver
                    .vertex_id(label)
                    .ok_or_else(|| ElabError::UnknownVertex(format!("e({label})")))?;
                Ok((v, v))
            }
            PathExpr::Arrow(name) => {
                let a = self
                    .quiver
                    .arrow_id(name)
                    .ok_or_else(|| ElabError::UnknownSymbol(name.clone()))?;
                let arrow = self.quiver.arrow(a);
                Ok((arrow.source, arrow.target))
            }
            PathExpr::Mul(l, r) => {
                let (ls, lt) = self.signature(l)?;
                let (rs, rt) = self.signature(r)?;
                if rt != ls {
                    return Err(ElabError::NotComposable {
                        left: print_expr(l),
                        right: print_expr(r),
                    });
                }
                Ok((rs, lt))
            }
            PathExpr::Pow(base, exp) => {
                let (s, t) = self.signature(base)?;
                if s != t {
                    return Err(ElabError::PowerOfNonEndomorphism { detail: print_expr(base) });
                }
                if let Some(n) = exp.eval_const() {
                    if n < 0 {
                        return Err(ElabError::BadExponent(n));
                    }
                }
                Ok((s, t))
            }
            PathExpr::Scalar(c, body) => {
                if let Coef::Param(name) = c {
                    match self.param(name) {
                        Some(ParamDecl { kind: ParamKind::Scalar, .. }) => {}
                        Some(_) => return Err(ElabError::WrongParamKind(name.clone())),
                        None => return Err(ElabError::UnknownSymbol(name.clone())),
                    }
                }
                self.signature(body)
            }
            PathExpr::Add(a, b) | PathExpr::Sub(a, b) => {
                let sa = self.signature(a)?;
                let sb = self.signature(b)?;
                if sa != sb {
                    return Err(ElabError::InhomogeneousSum {
                        detail: format!("`{}` vs `{}`", print_expr(a), print_expr(b)),
                    });
                }
                Ok(sa)
            }
        }
    }

    /// Binds every declared parameter, checking kinds and range constraints,
    /// and checks that all exponents evaluate to non-negative integers.
    pub fn instantiate(
        &self,
        values: &BTreeMap<String, ParamValue>,
    ) -> Result<AlgebraPresentation, ElabError> {
        for name in values.keys() {
            if self.param(name).is_none() {
                return Err(ElabError::UnknownParam(name.clone()));
            }
        }
        for decl in &self.params {
            let value = values.get(&decl.name).ok_or_else(|| ElabError::MissingParam(decl.name.clone()))?;
            match (&decl.kind, value) {
                (ParamKind::Int { min }, ParamValue::Int(n)) => {
                    if let Some(min) = min {
                        if n < min {
                            return Err(ElabError::ParamConstraint {
                                name: decl.name.clone(),
                                min: *min,
                                got: *n,
                            });
                        }
                    }
                }
                (ParamKind::Scalar, ParamValue::Scalar(s)) => {
                    if s.0 as u16 >= self.field.order() {
                        return Err(ElabError::ScalarOutsideField(decl.name.clone()));
                    }
                }
                _ => return Err(ElabError::WrongParamKind(decl.name.clone())),
            }
        }
        let inst = AlgebraPresentation { bindings: values.clone(), ..self.clone() };
        inst.validate()?;
        for rel in &inst.relations {
            check_exponents(rel, &inst.bindings)?;
        }
        Ok(inst)
    }

    /// Same presentation over a larger field of the same characteristic
    /// (used when a scalar parameter lives in a proper extension).
    pub fn with_field(&self, field: Field) -> Result<AlgebraPresentation, ElabError> {
        if field.characteristic() != self.field.characteristic() {
            return Err(ElabError::ScalarOutsideField("field change".to_owned()));
        }
        Ok(AlgebraPresentation { field, ..self.clone() })
    }

    /// The opposite presentation: arrows reversed and every product mirrored.
    pub fn opposite(&self) -> AlgebraPresentation {
        AlgebraPresentation {
            field: self.field,
            quiver: self.quiver.opposite(),
            params: self.params.clone(),
            bindings: self.bindings.clone(),
            relations: self.relations.iter().map(mirror_expr).collect(),
        }
    }
}

fn check_exponents(expr: &PathExpr, bindings: &BTreeMap<String, ParamValue>) -> Result<(), ElabError> {
    match expr {
        PathExpr::Vertex(_) | PathExpr::Arrow(_) => Ok(()),
        PathExpr::Mul(a, b) | PathExpr::Add(a, b) | PathExpr::Sub(a, b) => {
            check_exponents(a, bindings)?;
            check_exponents(b, bindings)
        }
        PathExpr::Scalar(_, b) => check_exponents(b, bindings),
        PathExpr::Pow(base, exp) => {
            let n = exp.eval(bindings)?;
            if n < 0 {
                return Err(ElabError::BadExponent(n));
            }
            check_exponents(base, bindings)
        }
    }
}

fn mirror_expr(expr: &PathExpr) -> PathExpr {
    match expr {
        PathExpr::Vertex(v) => PathExpr::Vertex(v.clone()),
        PathExpr::Arrow(a) => PathExpr::Arrow(a.clone()),
        PathExpr::Mul(a, b) => {
            PathExpr::Mul(Box::new(mirror_expr(b)), Box::new(mirror_expr(a)))
        }
        PathExpr::Pow(base, exp) => PathExpr::Pow(Box::new(mirror_expr(base)), exp.clone()),
        PathExpr::Scalar(c, b) => PathExpr::Scalar(c.clone(), Box::new(mirror_expr(b))),
        PathExpr::Add(a, b) => PathExpr::Add(Box::new(mirror_expr(a)), Box::new(mirror_expr(b))),
        PathExpr::Sub(a, b) => PathExpr::Sub(Box::new(mirror_expr(a)), Box::new(mirror_expr(b))),
    }
}

// ---------------------------------------------------------------------------
// canonical printing
// ---------------------------------------------------------------------------

fn print_int_expr(e: &IntExpr, parent_prec: u8) -> String {
    let (text, prec) = match e {
        IntExpr::Const(n) => (format!("{n}"), 3),
        IntExpr::Param(p) => (p.clone(), 3),
        IntExpr::Add(a, b) => (format!("{}+{}", print_int_expr(a, 1), print_int_expr(b, 2)), 1),
        IntExpr::Sub(a, b) => (format!("{}-{}", print_int_expr(a, 1), print_int_expr(b, 2)), 1),
        IntExpr::Mul(a, b) => (format!("{}*{}", print_int_expr(a, 2), print_int_expr(b, 3)), 2),
        IntExpr::Pow(a, b) => (format!("{}^{}", print_int_expr(a, 3), print_int_expr(b, 3)), 2),
    };
    if prec < parent_prec {
        format!("({text})")
    } else {
        text
    }
}

fn print_expr_prec(e: &PathExpr, parent_prec: u8) -> String {
    let (text, prec) = match e {
        PathExpr::Vertex(v) => (format!("e({v})"), 4),
        PathExpr::Arrow(a) => (a.clone(), 4),
        PathExpr::Mul(a, b) => {
            (format!("{}*{}", print_expr_prec(a, 2), print_expr_prec(b, 3)), 2)
        }
        PathExpr::Pow(base, exp) => {
            let exp_text = match exp {
                IntExpr::Const(n) if *n >= 0 => format!("{n}"),
                other => format!("({})", print_int_expr(other, 0)),
            };
            (format!("{}^{}", print_expr_prec(base, 4), exp_text), 3)
        }
        PathExpr::Scalar(c, b) => {
            let c_text = match c {
                Coef::Int(n) => format!("{n}"),
                Coef::Param(p) => p.clone(),
            };
            (format!("{}*{}", c_text, print_expr_prec(b, 3)), 2)
        }
        PathExpr::Add(a, b) => {
            (format!("{} + {}", print_expr_prec(a, 1), print_expr_prec(b, 2)), 1)
        }
        PathExpr::Sub(a, b) => {
            (format!("{} - {}", print_expr_prec(a, 1), print_expr_prec(b, 2)), 1)
        }
    };
    if prec < parent_prec {
        format!("({text})")
    } else {
        text
    }
}

/// Canonical text of a relation expression.
pub fn print_expr(e: &PathExpr) -> String {
    print_expr_prec(e, 0)
}

/// Canonical source text of a presentation; `parse_presentation` inverts this
/// on its output.
pub fn print_presentation(p: &AlgebraPresentation) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", p.field.order()));
    out.push_str("vertices");
    for v in p.quiver.vertex_labels() {
        out.push_str(&format!(" {v}"));
    }
    out.push('\n');
    for a in p.quiver.arrows() {
        out.push_str(&format!(
            "arrow {}: {} -> {}\n",
            a.name,
            p.quiver.vertex_label(a.source),
            p.quiver.vertex_label(a.target)
        ));
    }
    for decl in &p.params {
        match &decl.kind {
            ParamKind::Int { min: Some(m) } => {
                out.push_str(&format!("param {} int >= {m}\n", decl.name))
            }
            ParamKind::Int { min: None } => out.push_str(&format!("param {} int\n", decl.name)),
            ParamKind::Scalar => out.push_str(&format!("param {} field\n", decl.name)),
        }
    }
    for rel in &p.relations {
        out.push_str(&format!("relation {}\n", print_expr(rel)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sd2a1_shape() {
        let p = parse_presentation(family_source(&FamilyId::Sd2a1)).unwrap();
        assert_eq!(p.quiver.vertex_count(), 2);
        assert_eq!(p.quiver.arrow_count(), 3);
        assert_eq!(p.relations.len(), 4);
        assert_eq!(p.params.len(), 2);
        assert!(!p.is_instantiated());
    }

    #[test]
    fn fixture_q3b_shape() {
        let p = parse_presentation(family_source(&FamilyId::Q3b)).unwrap();
        assert_eq!(p.quiver.vertex_count(), 3);
        assert_eq!(p.quiver.arrow_count(), 5);
        assert_eq!(p.relations.len(), 7);
    }

    #[test]
    fn composability_is_rejected() {
        // beta: 0 -> 1 followed by alpha: 0 -> 0 does not compose.
        let src = "field 2\nvertices 0 1\narrow alpha: 0 -> 0\narrow beta: 0 -> 1\nrelation alpha*beta\n";
        let err = parse_presentation(src).unwrap_err();
        assert!(err.message.contains("not composable"), "{}", err.message);
    }

    #[test]
    fn print_parse_round_trip() {
        for id in [FamilyId::Sd2a1, FamilyId::Q3b, FamilyId::KleinFourLocal] {
            let p = parse_presentation(family_source(&id)).unwrap();
            let printed = print_presentation(&p);
            let reparsed = parse_presentation(&printed).unwrap();
            assert_eq!(p, reparsed, "round trip failed for {printed}");
        }
    }

    #[test]
    fn instantiate_checks_constraints() {
        let p = parse_presentation(family_source(&FamilyId::Q3b)).unwrap();
        let mut vals = BTreeMap::new();
        vals.insert("n".to_owned(), ParamValue::Int(3));
        let err = p.instantiate(&vals).unwrap_err();
        assert!(matches!(err, ElabError::ParamConstraint { min: 4, got: 3, .. }));
    }

    #[test]
    fn instantiate_requires_all_params() {
        let p = parse_presentation(family_source(&FamilyId::Sd2a1)).unwrap();
        let mut vals = BTreeMap::new();
        vals.insert("n".to_owned(), ParamValue::Int(4));
        assert!(matches!(p.instantiate(&vals), Err(ElabError::MissingParam(_))));
    }

    #[test]
    fn opposite_reverses_arrows() {
        let p = parse_presentation(family_source(&FamilyId::Q3b)).unwrap();
        let op = p.opposite();
        let beta = op.quiver.arrow_id("beta").unwrap();
        let a = op.quiver.arrow(beta);
        assert_eq!(op.quiver.vertex_label(a.source), "0");
        assert_eq!(op.quiver.vertex_label(a.target), "1");
        op.validate().expect("opposite presentation must still type-check");
    }
}
