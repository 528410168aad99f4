//! Shipped family presentations and their instantiation rules.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use crate::linalg::{Field, FieldElement};

use super::{parse_presentation, AlgebraPresentation, ElabError, ParamValue};

const SD2A1_QA: &str = include_str!("../../fixtures/sd2a1.qa");
const Q3B_QA: &str = include_str!("../../fixtures/q3b.qa");
const KLEIN4_QA: &str = include_str!("../../fixtures/klein4.qa");

/// Identifier of a presentation family.
///
/// The three shipped ids instantiate without file input; `UserDefined` names
/// a presentation file supplied by the caller.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilyId {
    Sd2a1,
    Q3b,
    KleinFourLocal,
    UserDefined(String),
}

impl FamilyId {
    pub fn parse(name: &str) -> Option<FamilyId> {
        match name.to_ascii_uppercase().as_str() {
            "SD2A1" => Some(FamilyId::Sd2a1),
            "Q3B" => Some(FamilyId::Q3b),
            "KLEIN4" | "KLEINFOUR" | "KLEINFOURLOCAL" => Some(FamilyId::KleinFourLocal),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            FamilyId::Sd2a1 => "SD2A1",
            FamilyId::Q3b => "Q3B",
            FamilyId::KleinFourLocal => "KleinFour",
            FamilyId::UserDefined(path) => path,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CatalogError {
    NeedsSource(String),
    OutOfRange { family: String, n: i64, expected: String },
    MissingScalar { family: String, name: String },
    UnknownScalar { family: String, name: String },
    BadScalar(String),
    Elab(ElabError),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::NeedsSource(p) => {
                write!(f, "family `{p}` is user-defined; load its source file and bind parameters")
            }
            CatalogError::OutOfRange { family, n, expected } => {
                write!(f, "n = {n} is out of range for {family} (expected {expected})")
            }
            CatalogError::MissingScalar { family, name } => {
                write!(f, "{family} requires the scalar parameter `{name}`")
            }
            CatalogError::UnknownScalar { family, name } => {
                write!(f, "{family} has no scalar parameter `{name}`")
            }
            CatalogError::BadScalar(m) => write!(f, "bad scalar value: {m}"),
            CatalogError::Elab(e) => write!(f, "{e}"),
        }
    }
}

impl From<ElabError> for CatalogError {
    fn from(e: ElabError) -> Self {
        CatalogError::Elab(e)
    }
}

/// The shipped presentation source for a family (`None` for user-defined).
pub fn family_source(id: &FamilyId) -> &'static str {
    match id {
        FamilyId::Sd2a1 => SD2A1_QA,
        FamilyId::Q3b => Q3B_QA,
        FamilyId::KleinFourLocal => KLEIN4_QA,
        FamilyId::UserDefined(_) => "",
    }
}

/// Smallest supported field of characteristic 2 containing all the given
/// scalar encodings.
fn field_for_scalars(scalars: &BTreeMap<String, u16>) -> Result<Field, CatalogError> {
    let max = scalars.values().copied().max().unwrap_or(0);
    let e = match max {
        0..=1 => 1,
        2..=3 => 2,
        4..=7 => 3,
        8..=15 => 4,
        other => return Err(CatalogError::BadScalar(format!("encoding {other} exceeds GF(16)"))),
    };
    Field::new(2, e).map_err(|e| CatalogError::BadScalar(format!("{e}")))
}

/// Instantiates a shipped family at size `n` with the given scalar values
/// (raw element encodings; values outside GF(2) upgrade the field to the
/// smallest extension that contains them).
pub fn instantiate_family(
    id: &FamilyId,
    n: i64,
    scalars: &BTreeMap<String, u16>,
) -> Result<AlgebraPresentation, CatalogError> {
    let (family, min_n, exact_n) = match id {
        FamilyId::Sd2a1 => ("SD2A1", 4, None),
        FamilyId::Q3b => ("Q3B", 4, None),
        FamilyId::KleinFourLocal => ("KleinFour", 2, Some(2)),
        FamilyId::UserDefined(path) => return Err(CatalogError::NeedsSource(path.clone())),
    };
    if n < min_n || exact_n.is_some_and(|m| n != m) {
        let expected = match exact_n {
            Some(m) => format!("exactly {m}"),
            None => format!(">= {min_n}"),
        };
        return Err(CatalogError::OutOfRange { family: family.to_string(), n, expected });
    }
    let symbolic = parse_presentation(family_source(id))
        .expect("shipped fixture sources always parse");
    bind_parameters(&symbolic, Some(n), scalars).map_err(|e| match e {
        CatalogError::MissingScalar { name, .. } => {
            CatalogError::MissingScalar { family: family.to_string(), name }
        }
        CatalogError::UnknownScalar { name, .. } => {
            CatalogError::UnknownScalar { family: family.to_string(), name }
        }
        other => other,
    })
}

/// Binds `n` and the scalar parameters of an already parsed presentation
/// (the entry point for user-defined families).
pub fn bind_parameters(
    presentation: &AlgebraPresentation,
    n: Option<i64>,
    scalars: &BTreeMap<String, u16>,
) -> Result<AlgebraPresentation, CatalogError> {
    let field = if scalars.values().any(|&v| v > 1) {
        let wanted = field_for_scalars(scalars)?;
        if wanted.order() > presentation.field.order() {
            wanted
        } else {
            presentation.field
        }
    } else {
        presentation.field
    };
    let presentation = presentation.with_field(field)?;

    let mut values: BTreeMap<String, ParamValue> = BTreeMap::new();
    for decl in &presentation.params {
        match decl.kind {
            super::ParamKind::Int { .. } => {
                let v = n.ok_or_else(|| CatalogError::Elab(ElabError::MissingParam(decl.name.clone())))?;
                values.insert(decl.name.clone(), ParamValue::Int(v));
            }
            super::ParamKind::Scalar => {
                let raw = scalars.get(&decl.name).ok_or_else(|| CatalogError::MissingScalar {
                    family: String::new(),
                    name: decl.name.clone(),
                })?;
                let elem: FieldElement = field
                    .element(*raw)
                    .map_err(|e| CatalogError::BadScalar(format!("{e}")))?;
                values.insert(decl.name.clone(), ParamValue::Scalar(elem));
            }
        }
    }
    for name in scalars.keys() {
        if presentation.param(name).is_none() {
            return Err(CatalogError::UnknownScalar { family: String::new(), name: name.clone() });
        }
    }
    Ok(presentation.instantiate(&values)?)
}

/// Default completion degree cap: comfortably above the Loewy lengths of the
/// shipped families (`4 * 2^(n-2) + 4` when a size parameter is bound).
pub fn default_degree_cap(p: &AlgebraPresentation) -> usize {
    if let Some(n) = p.size_parameter() {
        if (2..=24).contains(&n) {
            return (4usize << (n - 2) as usize) + 4;
        }
    }
    64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sd2a1_instantiates_with_scalar_zero() {
        let mut scalars = BTreeMap::new();
        scalars.insert("c".to_string(), 0u16);
        let p = instantiate_family(&FamilyId::Sd2a1, 4, &scalars).unwrap();
        assert!(p.is_instantiated());
        assert_eq!(p.field, Field::GF2);
        assert_eq!(default_degree_cap(&p), 20);
    }

    #[test]
    fn scalar_outside_gf2_upgrades_field() {
        let mut scalars = BTreeMap::new();
        scalars.insert("c".to_string(), 2u16);
        let p = instantiate_family(&FamilyId::Sd2a1, 4, &scalars).unwrap();
        assert_eq!(p.field, Field::new(2, 2).unwrap());
    }

    #[test]
    fn klein_four_is_pinned_to_n_two() {
        let p = instantiate_family(&FamilyId::KleinFourLocal, 2, &BTreeMap::new()).unwrap();
        assert_eq!(p.quiver.vertex_count(), 1);
        assert_eq!(p.quiver.arrow_count(), 2);
        assert_eq!(p.relations.len(), 3);
        let err = instantiate_family(&FamilyId::KleinFourLocal, 3, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, CatalogError::OutOfRange { .. }));
    }

    #[test]
    fn q3b_rejects_small_n() {
        let err = instantiate_family(&FamilyId::Q3b, 3, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, CatalogError::OutOfRange { n: 3, .. }));
    }

    #[test]
    fn missing_scalar_is_reported() {
        let err = instantiate_family(&FamilyId::Sd2a1, 4, &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, CatalogError::MissingScalar { .. }));
    }

    #[test]
    fn unknown_scalar_is_reported() {
        let mut scalars = BTreeMap::new();
        scalars.insert("d".to_string(), 1u16);
        let err = instantiate_family(&FamilyId::Q3b, 4, &scalars).unwrap_err();
        assert!(matches!(err, CatalogError::UnknownScalar { .. }));
    }
}
