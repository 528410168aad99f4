//! JSON output schemas.  All maps are `BTreeMap`s and module lists are
//! sorted, so identical runs produce byte-identical output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use blockforge_core::algebra::Algebra;
use blockforge_core::classifier::{ClassifiedModule, Partition, Tau3};
use blockforge_core::repmod::Representation;

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ParamsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<u16>,
}

#[derive(Serialize, Debug)]
pub struct ParseOut {
    pub field: String,
    pub vertices: usize,
    pub arrows: usize,
    pub relations: usize,
    pub params: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct BasisOut {
    pub family: String,
    pub params: ParamsJson,
    pub dimension: usize,
    /// per (source -> target) vertex pair counts of basis monomials
    pub pairs: BTreeMap<String, usize>,
    pub nilpotency: usize,
}

/// A representation as dimension vector plus integer matrices.
#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct RepJson {
    pub dims: BTreeMap<String, usize>,
    pub arrows: BTreeMap<String, Vec<Vec<u16>>>,
}

pub fn rep_to_json(alg: &Algebra, m: &Representation) -> RepJson {
    let quiver = alg.quiver();
    let mut dims = BTreeMap::new();
    for v in quiver.vertex_ids() {
        dims.insert(quiver.vertex_label(v).to_string(), m.dims[v.0]);
    }
    let mut arrows = BTreeMap::new();
    for a in quiver.arrow_ids() {
        let mat = &m.mats[a.0];
        let rows: Vec<Vec<u16>> = (0..mat.rows())
            .map(|i| (0..mat.cols()).map(|j| mat.get(i, j).0 as u16).collect())
            .collect();
        arrows.insert(quiver.arrow(a).name.clone(), rows);
    }
    RepJson { dims, arrows }
}

pub fn tau3_str(t: Tau3) -> &'static str {
    match t {
        Tau3::Yes => "yes",
        Tau3::No => "no",
        Tau3::NotApplicable => "not_applicable",
        Tau3::Indeterminate => "indeterminate",
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ModuleJson {
    pub name: String,
    pub dim: usize,
    pub dims: BTreeMap<String, usize>,
    pub d1: usize,
    pub tau3: String,
    pub end_dim: usize,
    pub absolutely_indecomposable: bool,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Default)]
pub struct PartitionJson {
    pub d1_zero_tube: Vec<String>,
    pub d1_zero_no_tube: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub d1_zero_indeterminate: Vec<String>,
    pub d1_one: Vec<String>,
    pub d1_two: Vec<String>,
}

impl From<Partition> for PartitionJson {
    fn from(p: Partition) -> Self {
        PartitionJson {
            d1_zero_tube: p.d1_zero_tube,
            d1_zero_no_tube: p.d1_zero_no_tube,
            d1_zero_indeterminate: p.d1_zero_indeterminate,
            d1_one: p.d1_one,
            d1_two: p.d1_two,
        }
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ClassifyOut {
    pub family: String,
    pub params: ParamsJson,
    pub field: String,
    pub cap: usize,
    pub cap_boundary_hit: bool,
    pub modules: Vec<ModuleJson>,
    pub partition: PartitionJson,
}

pub fn module_to_json(alg: &Algebra, m: &ClassifiedModule) -> ModuleJson {
    let quiver = alg.quiver();
    let mut dims = BTreeMap::new();
    for v in quiver.vertex_ids() {
        dims.insert(quiver.vertex_label(v).to_string(), m.rep.dims[v.0]);
    }
    ModuleJson {
        name: m.name.render(alg),
        dim: m.rep.total_dim(),
        dims,
        d1: m.d1,
        tau3: tau3_str(m.tau3).to_string(),
        end_dim: 1,
        absolutely_indecomposable: m.absolutely_indecomposable,
    }
}

#[derive(Serialize, Debug)]
pub struct ExtOut {
    pub family: String,
    pub params: ParamsJson,
    pub module: String,
    pub target: String,
    pub degree: usize,
    pub dim: usize,
}

#[derive(Serialize, Debug)]
pub struct TubeOut {
    pub family: String,
    pub params: ParamsJson,
    pub module: String,
    pub cap: usize,
    pub period: Option<usize>,
}

#[derive(Serialize, Debug)]
pub struct UbarOut {
    pub family: String,
    pub params: ParamsJson,
    pub module: String,
    pub dim: usize,
    pub socle: BTreeMap<String, usize>,
    pub nonsplit: bool,
    pub routes_agree: bool,
    pub ubar: RepJson,
}

#[derive(Serialize, Debug)]
pub struct LiftOut {
    pub family: String,
    pub params: ParamsJson,
    pub module: String,
    pub direction: Vec<u16>,
    pub max_order: usize,
    pub profile: usize,
}

#[derive(Serialize, Debug)]
pub struct ProvenanceJson {
    pub d1: &'static str,
    pub tau3: &'static str,
    pub height1: &'static str,
    pub tube_correspondence: &'static str,
    pub lifts_over_w: &'static str,
    pub mu: &'static str,
    pub q_n: &'static str,
    pub subquotient_of_wd: &'static str,
}

impl Default for ProvenanceJson {
    fn default() -> Self {
        ProvenanceJson {
            d1: "computed (self-extension dimension over k)",
            tau3: "computed (Ω²-period 3: end-of-tube criterion)",
            height1: "declared metadata (character-theoretic input)",
            tube_correspondence: "declared metadata (character-theoretic input)",
            lifts_over_w: "declared metadata (decomposition-matrix input)",
            mu: "opaque nonzero unit of W, not determined by mod-2 computation",
            q_n: "opaque monic polynomial of degree 2^(n-2)-1, coefficients not computed here",
            subquotient_of_wd: "asserted by the classification, not verified here",
        }
    }
}

#[derive(Serialize, Debug)]
pub struct UdrOut {
    pub family: String,
    pub params: ParamsJson,
    pub module: String,
    pub d1: usize,
    pub tau3: String,
    pub ring: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_degree: Option<usize>,
    pub flags: MetaEntry,
    pub provenance: ProvenanceJson,
}

/// One entry of a metadata file: declared facts per module name.
#[derive(Serialize, Deserialize, Debug, Clone, Default, PartialEq)]
pub struct MetaEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height1: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tube_correspondence: Option<bool>,
    #[serde(rename = "lifts_over_W", skip_serializing_if = "Option::is_none")]
    pub lifts_over_w: Option<bool>,
}

pub type MetadataFile = BTreeMap<String, MetaEntry>;

#[derive(Serialize, Debug)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
}

#[derive(Serialize, Debug)]
pub struct ErrorOut {
    pub error: ErrorBody,
}
