//! Exhaustive classification of the modules with endomorphism ring `k`.
//!
//! The search is top-down: for every candidate top `T` (multiplicity-free of
//! length at most 2 by default — the shapes that actually occur; a debug
//! option lifts the restriction), every arrow-closed submodule `W` of
//! `rad(⊕ covers of T)` of small codimension yields a quotient with top `T`,
//! and the survivors of the `End = k` filter are deduplicated up to
//! isomorphism.  A brute-force enumerator over all small matrix tuples
//! provides an independent oracle for the same list.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::homology::{ext_dim, is_projective, tau_period};
use crate::linalg::FieldMatrix;
use crate::presentations::{FamilyId, VertexId};
use crate::repmod::{
    biserial_t, check_relations, end_dim, fingerprint, iso_test, quotient, radical,
    radical_series, reduce_vector, submodules_up_to_codim, uniserial, Iso, IsoOptions,
    ModuleError, PairSpec, Representation,
};

/// How a classified module matches the small-module constructors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ModuleName {
    /// `S_{v1,...,vl}`: the uniserial module with those descending factors.
    Uniserial(Vec<VertexId>),
    /// `T_{u, v⊕w}`: simple top, semisimple radical.
    TopSingle(VertexId, (VertexId, VertexId)),
    /// `T_{v⊕w, u}`: semisimple top of length 2, simple radical.
    TopPair((VertexId, VertexId), VertexId),
    /// No constructor shape matched.
    Unnamed(usize),
}

impl ModuleName {
    /// Canonical display form, e.g. `S_100` or `T_1+2,0`.  Multi-character
    /// vertex labels are joined with commas.
    pub fn render(&self, alg: &Algebra) -> String {
        let quiver = alg.quiver();
        let single_char = quiver.vertex_labels().iter().all(|l| l.len() == 1);
        let join = |vs: &[VertexId]| -> String {
            let labels: Vec<&str> = vs.iter().map(|v| quiver.vertex_label(*v)).collect();
            if single_char {
                labels.concat()
            } else {
                labels.join(",")
            }
        };
        match self {
            ModuleName::Uniserial(vs) => format!("S_{}", join(vs)),
            ModuleName::TopSingle(u, (v, w)) => format!(
                "T_{},{}+{}",
                quiver.vertex_label(*u),
                quiver.vertex_label(*v),
                quiver.vertex_label(*w)
            ),
            ModuleName::TopPair((v, w), u) => format!(
                "T_{}+{},{}",
                quiver.vertex_label(*v),
                quiver.vertex_label(*w),
                quiver.vertex_label(*u)
            ),
            ModuleName::Unnamed(i) => format!("X_{i}"),
        }
    }
}

/// Three-state answer for "lies at the end of a 3-tube" (τ-period 3).
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Tau3 {
    Yes,
    No,
    /// Only computed for modules with `d1 = 0`.
    NotApplicable,
    Indeterminate,
}

/// One isomorphism class with `End ≅ k`.
#[derive(Clone, Debug)]
pub struct ClassifiedModule {
    pub rep: Representation,
    pub name: ModuleName,
    /// `dim Ext^1(M, M)`.
    pub d1: usize,
    pub tau3: Tau3,
    /// `End = k` over the base field already forces `End = k` over every
    /// extension, so the class cannot split after base change.
    pub absolutely_indecomposable: bool,
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Maximal number of top composition factors searched (default 2).
    pub top_length: usize,
    /// Allow repeated vertices in the candidate top (debug/audit mode).
    pub allow_top_multiplicity: bool,
    pub iso: IsoOptions,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { top_length: 2, allow_top_multiplicity: false, iso: IsoOptions::default() }
    }
}

/// Result of the top-down enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub modules: Vec<Representation>,
    /// Some class was found at exactly the length cap; re-running with a
    /// larger cap is advisable.
    pub cap_boundary_hit: bool,
}

fn candidate_tops(alg: &Algebra, opts: &EnumerateOptions, cap: usize) -> Vec<Vec<VertexId>> {
    let vs: Vec<VertexId> = alg.quiver().vertex_ids().collect();
    let mut tops: Vec<Vec<VertexId>> = Vec::new();
    for &v in &vs {
        tops.push(vec![v]);
    }
    if opts.top_length >= 2 && cap >= 2 {
        for (i, &v) in vs.iter().enumerate() {
            if opts.allow_top_multiplicity {
                tops.push(vec![v, v]);
            }
            for &w in &vs[i + 1..] {
                tops.push(vec![v, w]);
            }
        }
    }
    // longer tops only in the audit mode
    if opts.allow_top_multiplicity && opts.top_length >= 3 {
        for len in 3..=opts.top_length.min(cap) {
            let mut stack: Vec<Vec<VertexId>> = vec![Vec::new()];
            for _ in 0..len {
                let mut next = Vec::new();
                for partial in &stack {
                    let start = partial.last().map_or(0, |v| v.0);
                    for &v in vs.iter().filter(|v| v.0 >= start) {
                        let mut p = partial.clone();
                        p.push(v);
                        next.push(p);
                    }
                }
                stack = next;
            }
            tops.extend(stack);
        }
    }
    tops
}

/// Deduplicates a list of representations up to isomorphism, grouping by
/// fingerprint first so full tests only run on lookalikes.
pub fn dedupe_by_iso(
    alg: &Algebra,
    reps: Vec<Representation>,
    opts: &IsoOptions,
) -> Result<Vec<Representation>, ModuleError> {
    let mut groups: BTreeMap<_, Vec<Representation>> = BTreeMap::new();
    for r in reps {
        let fp = fingerprint(alg, &r);
        let group = groups.entry(fp).or_default();
        let mut known = false;
        for existing in group.iter() {
            match iso_test(alg, existing, &r, opts) {
                Iso::Yes => {
                    known = true;
                    break;
                }
                Iso::No => {}
                Iso::Indeterminate => {
                    return Err(ModuleError::Indeterminate(
                        "isomorphism test inconclusive during deduplication".into(),
                    ))
                }
            }
        }
        if !known {
            group.push(r);
        }
    }
    Ok(groups.into_values().flatten().collect())
}

/// Enumerates, up to isomorphism, every module with `End ≅ k` and total
/// dimension at most `length_cap` (composition length equals dimension since
/// the simples are one-dimensional).
pub fn enumerate_endok(
    alg: &Algebra,
    length_cap: usize,
    opts: &EnumerateOptions,
) -> Result<Enumeration, ModuleError> {
    assert!(length_cap >= 1, "length cap must be positive");
    let mut found: Vec<Representation> = Vec::new();
    for top in candidate_tops(alg, opts, length_cap) {
        if top.len() > length_cap {
            continue;
        }
        let mut cover = alg.projective(top[0]).clone();
        for v in &top[1..] {
            cover = cover.direct_sum(alg.projective(*v));
        }
        let rad = radical(alg, &cover);
        let max_codim = length_cap - top.len();
        for (_, w) in submodules_up_to_codim(alg, &cover, &rad, max_codim) {
            let m = quotient(alg, &cover, &w);
            debug_assert!(check_relations(alg, &m));
            if end_dim(alg, &m) == 1 {
                found.push(m);
            }
        }
    }
    let modules = dedupe_by_iso(alg, found, &opts.iso)?;
    let cap_boundary_hit = modules.iter().any(|m| m.total_dim() == length_cap);
    Ok(Enumeration { modules, cap_boundary_hit })
}

/// Independent oracle: enumerate every dimension vector of total dimension
/// `<= dim_cap` and every arrow-matrix tuple over the field, filter by the
/// relations and `End = k`, and deduplicate up to isomorphism.  Exponential
/// in everything — the guard keeps it at desk scale.
pub fn brute_force_endok(
    alg: &Algebra,
    dim_cap: usize,
) -> Result<Vec<Representation>, ModuleError> {
    if dim_cap > 5 {
        return Err(ModuleError::BadShape(format!(
            "brute force is capped at total dimension 5, requested {dim_cap}"
        )));
    }
    let field = alg.field();
    let quiver = alg.quiver();
    let nv = quiver.vertex_count();
    let na = quiver.arrow_count();

    // arrow support of each relator, and the recursion depth at which each
    // relator becomes fully determined
    let supports: Vec<Vec<usize>> = alg
        .relators()
        .iter()
        .map(|r| {
            let mut s: Vec<usize> = r
                .terms
                .iter()
                .flat_map(|(_, m)| m.word.iter().map(|&a| a as usize))
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); na + 1];
    for (ri, s) in supports.iter().enumerate() {
        match s.last() {
            Some(&max) => check_at[max + 1].push(ri),
            None => check_at[0].push(ri),
        }
    }

    let mut dim_vectors: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..nv {
        let mut next = Vec::new();
        for partial in &stack {
            let used: usize = partial.iter().sum();
            for d in 0..=(dim_cap - used) {
                let mut p = partial.clone();
                p.push(d);
                next.push(p);
            }
        }
        stack = next;
    }
    for d in stack {
        let total: usize = d.iter().sum();
        if total >= 1 && total <= dim_cap {
            dim_vectors.push(d);
        }
    }

    let mut found: Vec<Representation> = Vec::new();
    for dims in dim_vectors {
        let mut rep = Representation {
            field,
            dims: dims.clone(),
            mats: quiver
                .arrows()
                .iter()
                .map(|a| FieldMatrix::zero(field, dims[a.target.0], dims[a.source.0]))
                .collect(),
        };
        // relators not involving any arrow must vanish on their own
        if !check_at[0].iter().all(|&ri| rep.evaluate(&alg.relators()[ri]).is_zero()) {
            continue;
        }
        // relators supported on a single arrow filter that arrow's matrix
        // list once, instead of being rechecked inside the nested loops
        let mut admissible: Vec<Vec<FieldMatrix>> = Vec::with_capacity(na);
        for k in 0..na {
            let singleton: Vec<usize> = supports
                .iter()
                .enumerate()
                .filter(|(_, s)| s.as_slice() == [k])
                .map(|(ri, _)| ri)
                .collect();
            let arrow = quiver.arrow(crate::presentations::ArrowId(k));
            let (rows, cols) = (dims[arrow.target.0], dims[arrow.source.0]);
            let mut list = Vec::new();
            for m in all_matrices(field, rows, cols) {
                rep.mats[k] = m.clone();
                if singleton.iter().all(|&ri| rep.evaluate(&alg.relators()[ri]).is_zero()) {
                    list.push(m);
                }
            }
            rep.mats[k] = FieldMatrix::zero(field, rows, cols);
            admissible.push(list);
        }
        let multi_check: Vec<Vec<usize>> = (0..=na)
            .map(|depth| {
                check_at[depth]
                    .iter()
                    .copied()
                    .filter(|&ri| supports[ri].len() >= 2)
                    .collect()
            })
            .collect();
        enumerate_arrow_tuples(alg, &mut rep, 0, &admissible, &multi_check, &mut found);
    }
    dedupe_by_iso(alg, found, &IsoOptions::default())
}

/// All matrices of a given shape over the field, odometer order.
fn all_matrices(field: crate::linalg::Field, rows: usize, cols: usize) -> Vec<FieldMatrix> {
    let entries = rows * cols;
    let mut out = Vec::new();
    let mut current = FieldMatrix::zero(field, rows, cols);
    loop {
        out.push(current.clone());
        let mut pos = 0;
        loop {
            if pos == entries {
                return out;
            }
            let (i, j) = (pos / cols.max(1), pos % cols.max(1));
            let next = current.get(i, j).0 as u16 + 1;
            if next < field.order() {
                current.set(i, j, field.element(next).unwrap());
                break;
            }
            current.set(i, j, field.zero());
            pos += 1;
        }
    }
}

fn enumerate_arrow_tuples(
    alg: &Algebra,
    rep: &mut Representation,
    k: usize,
    admissible: &[Vec<FieldMatrix>],
    multi_check: &[Vec<usize>],
    found: &mut Vec<Representation>,
) {
    if k == rep.mats.len() {
        if end_dim(alg, rep) == 1 {
            found.push(rep.clone());
        }
        return;
    }
    for m in &admissible[k] {
        rep.mats[k] = m.clone();
        let ok = multi_check[k + 1]
            .iter()
            .all(|&ri| rep.evaluate(&alg.relators()[ri]).is_zero());
        if ok {
            enumerate_arrow_tuples(alg, rep, k + 1, admissible, multi_check, found);
        }
    }
}

/// Family-specific annihilation identities.
///
/// For the two-vertex semidihedral family the composite `βγ` must act as
/// zero; for the quaternion three-vertex family `δη` must act as zero and
/// `α` must kill every vector outside the radical (the latter checked by
/// exhaustive vector enumeration).
pub fn annihilation_check(
    family: &FamilyId,
    alg: &Algebra,
    m: &Representation,
) -> Result<bool, ModuleError> {
    let quiver = alg.quiver();
    let arrow = |name: &str| {
        quiver
            .arrow_id(name)
            .ok_or_else(|| ModuleError::BadShape(format!("fixture arrow `{name}` missing")))
    };
    match family {
        FamilyId::Sd2a1 => {
            let beta = arrow("beta")?;
            let gamma = arrow("gamma")?;
            Ok(m.mats[beta.0].mul(&m.mats[gamma.0]).is_zero())
        }
        FamilyId::Q3b => {
            let delta = arrow("delta")?;
            let eta = arrow("eta")?;
            if !m.mats[delta.0].mul(&m.mats[eta.0]).is_zero() {
                return Ok(false);
            }
            // alpha must kill every vector outside rad M
            let alpha = arrow("alpha")?;
            let v1 = quiver.arrow(alpha).source;
            if m.total_dim() > 20 {
                return Err(ModuleError::BadShape(
                    "annihilation enumeration capped at dimension 20".into(),
                ));
            }
            let rad = radical(alg, m);
            let field = m.field;
            let total = m.total_dim();
            let mut counters = vec![0u16; total];
            loop {
                // odometer over all vectors of M
                let mut pos = 0;
                loop {
                    if pos == total {
                        return Ok(true);
                    }
                    counters[pos] += 1;
                    if counters[pos] < field.order() {
                        break;
                    }
                    counters[pos] = 0;
                    pos += 1;
                }
                // split into per-vertex components
                let mut per_vertex: Vec<Vec<crate::linalg::FieldElement>> = Vec::new();
                let mut offset = 0;
                for &d in &m.dims {
                    per_vertex.push(
                        counters[offset..offset + d]
                            .iter()
                            .map(|&c| field.element(c).unwrap())
                            .collect(),
                    );
                    offset += d;
                }
                // skip vectors inside the radical
                let mut outside = false;
                for (v, comp) in per_vertex.iter().enumerate() {
                    let mut w = comp.clone();
                    reduce_vector(&rad.rows[v], &mut w);
                    if w.iter().any(|c| c.0 != 0) {
                        outside = true;
                        break;
                    }
                }
                if !outside {
                    continue;
                }
                // alpha acts on the component at its source vertex
                let y = &per_vertex[v1.0];
                let a = &m.mats[alpha.0];
                for r in 0..a.rows() {
                    let mut acc = field.zero();
                    for c in 0..a.cols() {
                        acc = field.add(acc, field.mul(a.get(r, c), y[c]));
                    }
                    if acc.0 != 0 {
                        return Ok(false);
                    }
                }
            }
        }
        other => Err(ModuleError::BadShape(format!(
            "no annihilation identities are defined for family {other}"
        ))),
    }
}

/// Matches a module against the small-module constructors and verifies the
/// match by rebuilding it.
pub fn name_module(alg: &Algebra, m: &Representation, opts: &IsoOptions) -> ModuleName {
    let chain = radical_series(alg, m);
    let layers: Vec<Vec<usize>> = chain
        .windows(2)
        .map(|w| w[0].dims().iter().zip(w[1].dims()).map(|(a, b)| a - b).collect())
        .collect();
    let layer_verts = |layer: &Vec<usize>| -> Vec<VertexId> {
        let mut out = Vec::new();
        for (v, &mult) in layer.iter().enumerate() {
            for _ in 0..mult {
                out.push(VertexId(v));
            }
        }
        out
    };
    if !layers.is_empty() && layers.iter().all(|l| l.iter().sum::<usize>() == 1) {
        let labels: Vec<VertexId> = layers.iter().map(|l| layer_verts(l)[0]).collect();
        if let Ok(rebuilt) = uniserial(alg, &labels) {
            if iso_test(alg, &rebuilt, m, opts) == Iso::Yes {
                return ModuleName::Uniserial(labels);
            }
        }
    } else if layers.len() == 2 {
        let top = layer_verts(&layers[0]);
        let bottom = layer_verts(&layers[1]);
        if top.len() == 1 && bottom.len() == 2 {
            if let Ok(rebuilt) =
                biserial_t(alg, PairSpec::Single(top[0]), PairSpec::Pair(bottom[0], bottom[1]))
            {
                if iso_test(alg, &rebuilt, m, opts) == Iso::Yes {
                    return ModuleName::TopSingle(top[0], (bottom[0], bottom[1]));
                }
            }
        }
        if top.len() == 2 && bottom.len() == 1 {
            if let Ok(rebuilt) =
                biserial_t(alg, PairSpec::Pair(top[0], top[1]), PairSpec::Single(bottom[0]))
            {
                if iso_test(alg, &rebuilt, m, opts) == Iso::Yes {
                    return ModuleName::TopPair((top[0], top[1]), bottom[0]);
                }
            }
        }
    }
    ModuleName::Unnamed(0)
}

/// Full classification: enumerate, name, compute `d1`, and decide τ-period-3
/// membership for the `d1 = 0` classes.  Returns the classes and whether the
/// cap boundary was hit.
pub fn classify(
    alg: &Algebra,
    length_cap: usize,
    opts: &EnumerateOptions,
) -> Result<(Vec<ClassifiedModule>, bool), ModuleError> {
    let enumeration = enumerate_endok(alg, length_cap, opts)?;
    let mut out = Vec::with_capacity(enumeration.modules.len());
    let mut unnamed = 0usize;
    for rep in enumeration.modules {
        let mut name = name_module(alg, &rep, &opts.iso);
        if matches!(name, ModuleName::Unnamed(_)) {
            name = ModuleName::Unnamed(unnamed);
            unnamed += 1;
        }
        let d1 = ext_dim(alg, &rep, &rep, 1);
        let tau3 = tau3_status(alg, &rep, d1, &opts.iso)?;
        out.push(ClassifiedModule { rep, name, d1, tau3, absolutely_indecomposable: true });
    }
    // canonical report order: by dimension, then by rendered name
    out.sort_by(|a, b| {
        (a.rep.total_dim(), a.name.render(alg)).cmp(&(b.rep.total_dim(), b.name.render(alg)))
    });
    Ok((out, enumeration.cap_boundary_hit))
}

/// τ-period-3 status of a single module (computed only when `d1 = 0`).
pub fn tau3_status(
    alg: &Algebra,
    rep: &Representation,
    d1: usize,
    opts: &IsoOptions,
) -> Result<Tau3, ModuleError> {
    if d1 != 0 {
        return Ok(Tau3::NotApplicable);
    }
    if is_projective(alg, rep) {
        // projectives live outside the stable category
        return Ok(Tau3::No);
    }
    match tau_period(alg, rep, 6, opts) {
        Ok(Some(3)) => Ok(Tau3::Yes),
        Ok(_) => Ok(Tau3::No),
        Err(ModuleError::Indeterminate(_)) => Ok(Tau3::Indeterminate),
        Err(e) => Err(e),
    }
}

/// The computable partition of a classified list: `d1 = 0` split by
/// τ-period-3 membership, then the `d1 = 1` and `d1 = 2` cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub d1_zero_tube: Vec<String>,
    pub d1_zero_no_tube: Vec<String>,
    pub d1_zero_indeterminate: Vec<String>,
    pub d1_one: Vec<String>,
    pub d1_two: Vec<String>,
}

pub fn partition(alg: &Algebra, modules: &[ClassifiedModule]) -> Partition {
    let mut p = Partition::default();
    for m in modules {
        let name = m.name.render(alg);
        match (m.d1, m.tau3) {
            (0, Tau3::Yes) => p.d1_zero_tube.push(name),
            (0, Tau3::Indeterminate) => p.d1_zero_indeterminate.push(name),
            (0, _) => p.d1_zero_no_tube.push(name),
            (1, _) => p.d1_one.push(name),
            (_, _) => p.d1_two.push(name),
        }
    }
    p
}
