//! Constructors for modules with a prescribed Loewy shape: the uniserial
//! modules `S_{v1,...,vl}` and the two-layer modules `T_{u,v⊕w}` and
//! `T_{v⊕w,u}`.
//!
//! Both constructors search quotients of the projective cover of the
//! prescribed top, which is exhaustive because every module with that top is
//! such a quotient.  Uniqueness is verified, never assumed: finding two
//! non-isomorphic candidates is reported as `NotUnique`.
//!
//! The underlying enumeration lists all submodules of bounded codimension by
//! walking maximal submodules: every submodule of codimension `j+1` is
//! maximal in one of codimension `j`, and maximal submodules are preimages
//! of top hyperplanes, so the walk is complete.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::linalg::{kernel_basis, FieldElement, FieldMatrix};
use crate::presentations::VertexId;
use crate::repmod::{
    canonical_rows, iso_test, quotient, radical, radical_of, radical_series, reduce_vector, Iso,
    IsoOptions, ModuleError, Representation, Submodule,
};

/// A vertex or an unordered pair of vertices (one side of a `T` shape).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PairSpec {
    Single(VertexId),
    Pair(VertexId, VertexId),
}

impl PairSpec {
    fn validate(&self, alg: &Algebra) -> Result<(), ModuleError> {
        let count = alg.quiver().vertex_count();
        let check = |v: &VertexId| {
            if v.0 >= count {
                Err(ModuleError::UnknownVertex(format!("#{}", v.0)))
            } else {
                Ok(())
            }
        };
        match self {
            PairSpec::Single(v) => check(v),
            PairSpec::Pair(v, w) => {
                check(v)?;
                check(w)
            }
        }
    }
}

fn submodule_key(sub: &Submodule) -> Vec<u8> {
    let mut out = Vec::new();
    for rows in &sub.rows {
        out.push(rows.rows() as u8);
        for i in 0..rows.rows() {
            for j in 0..rows.cols() {
                out.push(rows.get(i, j).0);
            }
        }
        out.push(0xff);
    }
    out
}

/// All maximal submodules of `w` inside `ambient`.  Arrow images of `w` land
/// in its radical, so any subspace between `rad w` and `w` of codimension 1
/// (concentrated at a single vertex) is automatically arrow-closed.
fn maximal_submodules(alg: &Algebra, ambient: &Representation, w: &Submodule) -> Vec<Submodule> {
    let field = ambient.field;
    let rad = radical_of(alg, ambient, w);
    let mut out = Vec::new();
    for v in 0..ambient.dims.len() {
        // coset representatives of w_v / rad_v
        let mut reps: Vec<Vec<FieldElement>> = Vec::new();
        for i in 0..w.rows[v].rows() {
            let mut vec = w.rows[v].row(i).to_vec();
            reduce_vector(&rad.rows[v], &mut vec);
            if vec.iter().any(|c| c.0 != 0) {
                reps.push(vec);
            }
        }
        let reps_mat = canonical_rows(field, reps, ambient.dims[v]);
        let t = reps_mat.rows();
        if t == 0 {
            continue;
        }
        // hyperplanes of the t-dimensional top: kernels of normalized
        // functionals (first nonzero coordinate 1)
        for phi in normalized_functionals(field, t) {
            let phi_mat = FieldMatrix::from_rows(field, &[phi]);
            let ker = kernel_basis(&phi_mat);
            let mut rows: Vec<Vec<FieldElement>> = (0..rad.rows[v].rows())
                .map(|i| rad.rows[v].row(i).to_vec())
                .collect();
            for j in 0..ker.cols() {
                // lift the kernel vector through the coset representatives
                let mut lifted = vec![field.zero(); ambient.dims[v]];
                for i in 0..t {
                    let c = ker.get(i, j);
                    if c.0 == 0 {
                        continue;
                    }
                    for x in 0..ambient.dims[v] {
                        lifted[x] = field.add(lifted[x], field.mul(c, reps_mat.get(i, x)));
                    }
                }
                rows.push(lifted);
            }
            let mut new_rows = w.rows.clone();
            new_rows[v] = canonical_rows(field, rows, ambient.dims[v]);
            out.push(Submodule { rows: new_rows });
        }
    }
    out
}

fn normalized_functionals(field: crate::linalg::Field, t: usize) -> Vec<Vec<FieldElement>> {
    // all nonzero vectors of GF(q)^t with first nonzero coordinate = 1
    let q = field.order();
    let mut out = Vec::new();
    let mut v = vec![0u16; t];
    loop {
        let mut i = 0;
        loop {
            if i == t {
                return out;
            }
            v[i] += 1;
            if v[i] < q {
                break;
            }
            v[i] = 0;
            i += 1;
        }
        if v.iter().find(|&&c| c != 0) == Some(&1) {
            out.push(v.iter().map(|&c| field.element(c).unwrap()).collect());
        }
    }
}

// enough for every in-scope search; a runaway walk points at a misuse
const SUBMODULE_WALK_LIMIT: usize = 1 << 20;

/// All submodules of `start` (inside `ambient`) of codimension at most
/// `max_codim`, paired with their exact codimension.  Deterministic order.
pub fn submodules_up_to_codim(
    alg: &Algebra,
    ambient: &Representation,
    start: &Submodule,
    max_codim: usize,
) -> Vec<(usize, Submodule)> {
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    seen.insert(submodule_key(start));
    let mut out = vec![(0usize, start.clone())];
    let mut level = vec![start.clone()];
    for codim in 1..=max_codim {
        let mut next = Vec::new();
        for w in &level {
            for m in maximal_submodules(alg, ambient, w) {
                if seen.insert(submodule_key(&m)) {
                    out.push((codim, m.clone()));
                    next.push(m);
                }
            }
            assert!(
                out.len() <= SUBMODULE_WALK_LIMIT,
                "submodule walk exceeded {SUBMODULE_WALK_LIMIT} nodes; lower the codimension"
            );
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    out
}

/// Deduplicates candidate modules up to isomorphism; errors on ambiguity.
fn unique_candidate(
    alg: &Algebra,
    candidates: Vec<Representation>,
    what: &str,
) -> Result<Representation, ModuleError> {
    let opts = IsoOptions::default();
    let mut classes: Vec<Representation> = Vec::new();
    for c in candidates {
        let mut known = false;
        for existing in &classes {
            match iso_test(alg, existing, &c, &opts) {
                Iso::Yes => {
                    known = true;
                    break;
                }
                Iso::No => {}
                Iso::Indeterminate => {
                    return Err(ModuleError::Indeterminate(format!(
                        "isomorphism test inconclusive while building {what}"
                    )))
                }
            }
        }
        if !known {
            classes.push(c);
        }
    }
    match classes.len() {
        0 => Err(ModuleError::NoSuchModule(what.into())),
        1 => Ok(classes.into_iter().next().unwrap()),
        n => Err(ModuleError::NotUnique(format!("{what}: {n} non-isomorphic candidates"))),
    }
}

/// The unique uniserial module with the given descending composition
/// factors, found among quotients of the projective cover of the top.
pub fn uniserial(alg: &Algebra, labels: &[VertexId]) -> Result<Representation, ModuleError> {
    if labels.is_empty() {
        return Err(ModuleError::EmptyLabels);
    }
    for v in labels {
        if v.0 >= alg.quiver().vertex_count() {
            return Err(ModuleError::UnknownVertex(format!("#{}", v.0)));
        }
    }
    let len = labels.len();
    if len == 1 {
        return Ok(alg.simple(labels[0]).clone());
    }
    let p = alg.projective(labels[0]);
    let rad_p = radical(alg, p);
    let name = format!(
        "uniserial S_({})",
        labels.iter().map(|v| alg.quiver().vertex_label(*v)).collect::<Vec<_>>().join(",")
    );
    let mut candidates = Vec::new();
    for (codim, w) in submodules_up_to_codim(alg, p, &rad_p, len - 1) {
        if codim != len - 1 {
            continue;
        }
        let m = quotient(alg, p, &w);
        if has_uniserial_layers(alg, &m, labels) {
            candidates.push(m);
        }
    }
    unique_candidate(alg, candidates, &name)
}

fn has_uniserial_layers(alg: &Algebra, m: &Representation, labels: &[VertexId]) -> bool {
    let chain = radical_series(alg, m);
    if chain.len() != labels.len() + 1 {
        return false;
    }
    for (i, label) in labels.iter().enumerate() {
        let upper = chain[i].dims();
        let lower = chain[i + 1].dims();
        for v in 0..upper.len() {
            let expected = if v == label.0 { 1 } else { 0 };
            if upper[v] - lower[v] != expected {
                return false;
            }
        }
    }
    true
}

/// The unique indecomposable module with two semisimple radical layers:
/// `biserial_t(alg, top, bottom)` builds `T_{top, bottom}` where exactly one
/// of the two specs is a pair.
pub fn biserial_t(
    alg: &Algebra,
    top: PairSpec,
    bottom: PairSpec,
) -> Result<Representation, ModuleError> {
    top.validate(alg)?;
    bottom.validate(alg)?;
    let label = |v: &VertexId| alg.quiver().vertex_label(*v);
    match (&top, &bottom) {
        (PairSpec::Single(u), PairSpec::Pair(v, w)) => {
            let name = format!("T_({},{}+{})", label(u), label(v), label(w));
            let p = alg.projective(*u);
            let rad_p = radical(alg, p);
            let mut expected_rad = vec![0usize; alg.quiver().vertex_count()];
            expected_rad[v.0] += 1;
            expected_rad[w.0] += 1;
            let mut candidates = Vec::new();
            for (codim, sub) in submodules_up_to_codim(alg, p, &rad_p, 2) {
                if codim != 2 {
                    continue;
                }
                let m = quotient(alg, p, &sub);
                if two_layer_shape(alg, &m, None, &expected_rad) {
                    // simple top forces indecomposability
                    candidates.push(m);
                }
            }
            unique_candidate(alg, candidates, &name)
        }
        (PairSpec::Pair(v, w), PairSpec::Single(u)) => {
            let name = format!("T_({}+{},{})", label(v), label(w), label(u));
            let p = alg.projective(*v).direct_sum(alg.projective(*w));
            let rad_p = radical(alg, &p);
            let mut expected_rad = vec![0usize; alg.quiver().vertex_count()];
            expected_rad[u.0] += 1;
            let mut expected_top = vec![0usize; alg.quiver().vertex_count()];
            expected_top[v.0] += 1;
            expected_top[w.0] += 1;
            let opts = IsoOptions::default();
            let mut candidates = Vec::new();
            // quotients of total dimension 3: the kernel has codimension 1
            // inside rad(P_v ⊕ P_w)
            for (codim, sub) in submodules_up_to_codim(alg, &p, &rad_p, 1) {
                if codim != 1 {
                    continue;
                }
                let m = quotient(alg, &p, &sub);
                if !two_layer_shape(alg, &m, Some(&expected_top), &expected_rad) {
                    continue;
                }
                match crate::repmod::is_indecomposable(alg, &m, &opts) {
                    Some(true) => candidates.push(m),
                    Some(false) => {}
                    None => {
                        return Err(ModuleError::Indeterminate(format!(
                            "indecomposability inconclusive while building {name}"
                        )))
                    }
                }
            }
            unique_candidate(alg, candidates, &name)
        }
        _ => Err(ModuleError::BadShape(
            "exactly one of top and bottom must be a pair of vertices".into(),
        )),
    }
}

fn two_layer_shape(
    alg: &Algebra,
    m: &Representation,
    expected_top: Option<&[usize]>,
    expected_rad: &[usize],
) -> bool {
    let chain = radical_series(alg, m);
    if chain.len() != 3 {
        return false;
    }
    let rad_dims = chain[1].dims();
    if rad_dims != expected_rad {
        return false;
    }
    if let Some(top) = expected_top {
        let full = chain[0].dims();
        let diff: Vec<usize> = full.iter().zip(&rad_dims).map(|(a, b)| a - b).collect();
        if diff != top {
            return false;
        }
    }
    true
}
