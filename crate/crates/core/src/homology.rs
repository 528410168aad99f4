//! Homological operations: Hom spaces, projective covers and syzygies, Ext
//! groups, stable endomorphism dimensions, extension modules for explicit
//! Ext classes, and `Ω²`-periodicity.
//!
//! `Ext^1(M, N)` is computed from the minimal projective cover
//! `0 → ΩM → P → M → 0` as the cokernel of the restriction map
//! `Hom(P, N) → Hom(ΩM, N)`; higher Ext groups shift along iterated
//! syzygies.  The Auslander-Reiten translate is taken to be `Ω²`, which is
//! correct for the symmetric algebras in scope; a guard checks the symmetry
//! symptom `soc P_v ≅ top P_v` before any periodicity run.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::linalg::{solve, Field, FieldElement, FieldMatrix};
use crate::presentations::VertexId;
use crate::repmod::{
    canonical_rows, dual_module, intertwiner_basis, is_indecomposable, iso_test, radical,
    socle_multiset, sub_representation, top_multiset, Iso, IsoOptions, ModuleError, ModuleMap,
    QuotientData, Representation, Submodule,
};

/// A basis of `Hom(M, N)`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub maps: Vec<ModuleMap>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }
}

/// Basis of the intertwiner space between two representations.
pub fn hom_basis(alg: &Algebra, m: &Representation, n: &Representation) -> HomSpace {
    HomSpace { maps: intertwiner_basis(alg, m, n) }
}

/// `dim_k End(M)`.
pub fn end_dim(alg: &Algebra, m: &Representation) -> usize {
    intertwiner_basis(alg, m, m).len()
}

/// A minimal projective cover `P ↠ M` with its kernel `ΩM`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    /// `⊕_v P_v^{t_v}` where `t_v` is the multiplicity of `S_v` in `top M`.
    pub cover: Representation,
    pub multiplicities: Vec<usize>,
    /// The surjection `P → M`.
    pub surjection: ModuleMap,
    /// `ΩM` as a submodule of the cover.
    pub kernel: Submodule,
    /// `ΩM` as a representation in its own right.
    pub syzygy: Representation,
    /// The inclusion `ΩM → P`.
    pub kernel_inclusion: ModuleMap,
}

/// Direct sum of several representations, with the per-vertex offset of each
/// summand.
fn direct_sum_many(
    field: Field,
    nvertices: usize,
    narrows: usize,
    summands: &[&Representation],
) -> (Representation, Vec<Vec<usize>>) {
    let mut dims = vec![0usize; nvertices];
    let mut offsets = Vec::with_capacity(summands.len());
    for s in summands {
        offsets.push(dims.clone());
        for v in 0..nvertices {
            dims[v] += s.dims[v];
        }
    }
    let mut mats = Vec::with_capacity(narrows);
    for a in 0..narrows {
        let rows = summands.iter().map(|s| s.mats[a].rows()).sum();
        let cols = summands.iter().map(|s| s.mats[a].cols()).sum();
        let mut m = FieldMatrix::zero(field, rows, cols);
        let mut ro = 0;
        let mut co = 0;
        for s in summands {
            let sm = &s.mats[a];
            for r in 0..sm.rows() {
                for c in 0..sm.cols() {
                    m.set(ro + r, co + c, sm.get(r, c));
                }
            }
            ro += sm.rows();
            co += sm.cols();
        }
        mats.push(m);
    }
    (Representation { field, dims, mats }, offsets)
}

/// Builds the minimal projective cover of `m` (the zero module gets the zero
/// cover).  Top representatives are chosen deterministically, so the cover
/// and the syzygy are canonical.
pub fn projective_cover(alg: &Algebra, m: &Representation) -> ProjectiveCover {
    let field = alg.field();
    let quiver = alg.quiver();
    let nv = quiver.vertex_count();
    let rad = radical(alg, m);
    let q = QuotientData::new(alg, m, &rad);
    let multiplicities: Vec<usize> = q.rep.dims.clone();

    // one summand per top basis vector, in vertex order; the lift of the
    // i-th top vector at v is the i-th section row (a standard basis vector)
    let mut summands: Vec<&Representation> = Vec::new();
    let mut generators: Vec<(VertexId, Vec<FieldElement>)> = Vec::new();
    for v in 0..nv {
        for i in 0..multiplicities[v] {
            summands.push(alg.projective(VertexId(v)));
            generators.push((VertexId(v), q.sections[v].row(i).to_vec()));
        }
    }
    let (cover, offsets) = direct_sum_many(field, nv, quiver.arrow_count(), &summands);

    // surjection: on the summand generated at (v, i), the cover basis vector
    // corresponding to a monomial g (source v) maps to g . x_{v,i}
    let mut blocks: Vec<FieldMatrix> = (0..nv)
        .map(|u| FieldMatrix::zero(field, m.dims[u], cover.dims[u]))
        .collect();
    let nb = alg.basis();
    for (s, (v, x)) in generators.iter().enumerate() {
        // local layout of P_v: basis monomials with source v, grouped by target
        let mut local_pos = vec![0usize; nv];
        for &g in nb.with_source(*v) {
            let mono = nb.monomial(g);
            let u = mono.target.0;
            let col = offsets[s][u] + local_pos[u];
            local_pos[u] += 1;
            let action = m.evaluate_monomial(mono);
            // image = action * x
            for r in 0..m.dims[u] {
                let mut acc = field.zero();
                for k in 0..m.dims[v.0] {
                    acc = field.add(acc, field.mul(action.get(r, k), x[k]));
                }
                blocks[u].set(r, col, acc);
            }
        }
    }
    let surjection = ModuleMap { blocks };
    debug_assert!(surjection.intertwines(alg, &cover, m));

    let kernel = surjection.kernel(&cover);
    let (syzygy, kernel_inclusion) = sub_representation(alg, &cover, &kernel);
    debug_assert_eq!(syzygy.total_dim(), cover.total_dim() - m.total_dim());
    ProjectiveCover { cover, multiplicities, surjection, kernel, syzygy, kernel_inclusion }
}

/// `ΩM`: the kernel of the minimal projective cover.
pub fn syzygy(alg: &Algebra, m: &Representation) -> Representation {
    projective_cover(alg, m).syzygy
}

/// `M` is projective iff its minimal cover has zero kernel.
pub fn is_projective(alg: &Algebra, m: &Representation) -> bool {
    projective_cover(alg, m).syzygy.is_zero()
}

/// Flattens a module map into a single coordinate vector (vertex by vertex,
/// row major).
fn vectorize(map: &ModuleMap) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for b in &map.blocks {
        for i in 0..b.rows() {
            out.extend_from_slice(b.row(i));
        }
    }
    out
}

/// `Ext^1(M, N)` with explicit cocycle representatives.
#[derive(Clone, Debug)]
pub struct Ext1 {
    /// cover data of `M`
    pub cover: ProjectiveCover,
    /// basis of `Hom(ΩM, N)`
    hom_syz: Vec<ModuleMap>,
    /// RREF rows, in `hom_syz` coordinates, of the restricted `Hom(P, N)`
    image_rows: FieldMatrix,
    /// indices of `hom_syz` elements whose classes form a basis of Ext^1
    complement: Vec<usize>,
    /// vectorized `hom_syz` basis, one column per element
    hom_matrix: FieldMatrix,
}

impl Ext1 {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// The cocycle `ΩM → N` representing the class with the given
    /// coordinates in the canonical complement basis.
    pub fn cocycle(&self, coords: &[FieldElement]) -> ModuleMap {
        assert_eq!(coords.len(), self.dim());
        let mut acc: Option<ModuleMap> = None;
        for (i, &c) in coords.iter().enumerate() {
            let term = self.hom_syz[self.complement[i]].scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.expect("Ext class with empty coordinate vector")
    }

    /// Coordinates of the class of an arbitrary cocycle `f: ΩM → N`.
    pub fn class_of(&self, f: &ModuleMap) -> Vec<FieldElement> {
        let v = vectorize(f);
        let mut w = solve(&self.hom_matrix, &v)
            .expect("shape")
            .expect("cocycle lies in Hom(ΩM, N)");
        crate::repmod::reduce_vector(&self.image_rows, &mut w);
        self.complement.iter().map(|&i| w[i]).collect()
    }
}

/// Computes `Ext^1(M, N)` as the cokernel of
/// `Hom(P, N) → Hom(ΩM, N)` for the minimal cover `P` of `M`.
pub fn ext1(alg: &Algebra, m: &Representation, n: &Representation) -> Ext1 {
    let field = alg.field();
    let cover = projective_cover(alg, m);
    let hom_syz = intertwiner_basis(alg, &cover.syzygy, n);
    let h = hom_syz.len();
    let vec_len: usize = n.dims.iter().zip(&cover.syzygy.dims).map(|(a, b)| a * b).sum();
    let mut hom_matrix = FieldMatrix::zero(field, vec_len, h);
    for (j, map) in hom_syz.iter().enumerate() {
        for (i, c) in vectorize(map).into_iter().enumerate() {
            hom_matrix.set(i, j, c);
        }
    }
    // restrict each Hom(P, N) basis element to the kernel and express it in
    // the Hom(ΩM, N) basis
    let hom_cover = intertwiner_basis(alg, &cover.cover, n);
    let mut image_coords: Vec<Vec<FieldElement>> = Vec::with_capacity(hom_cover.len());
    for phi in &hom_cover {
        let restricted = phi.compose(&cover.kernel_inclusion);
        let v = vectorize(&restricted);
        let coords = solve(&hom_matrix, &v)
            .expect("shape")
            .expect("restriction lies in Hom(ΩM, N)");
        image_coords.push(coords);
    }
    let image_rows = canonical_rows(field, image_coords, h);
    let mut is_pivot = vec![false; h];
    for i in 0..image_rows.rows() {
        if let Some(p) = (0..h).find(|&j| image_rows.get(i, j).0 != 0) {
            is_pivot[p] = true;
        }
    }
    let complement: Vec<usize> = (0..h).filter(|&j| !is_pivot[j]).collect();
    Ext1 { cover, hom_syz, image_rows, complement, hom_matrix }
}

/// `dim Ext^i(M, N)`; `Ext^i = Ext^1(Ω^{i-1} M, N)`.
pub fn ext_dim(alg: &Algebra, m: &Representation, n: &Representation, i: usize) -> usize {
    assert!(i >= 1, "ext_dim needs degree >= 1");
    let mut x = m.clone();
    for _ in 1..i {
        x = syzygy(alg, &x);
    }
    ext1(alg, &x, n).dim()
}

/// `dim End(M)` minus the dimension of the endomorphisms factoring through a
/// projective.  A map into `M` factors through a projective iff it factors
/// through the projective cover of `M`.
pub fn stable_end_dim(alg: &Algebra, m: &Representation) -> usize {
    if m.is_zero() {
        return 0;
    }
    let field = alg.field();
    let end = intertwiner_basis(alg, m, m);
    let h = end.len();
    let vec_len: usize = m.dims.iter().map(|d| d * d).sum();
    let mut end_matrix = FieldMatrix::zero(field, vec_len, h);
    for (j, map) in end.iter().enumerate() {
        for (i, c) in vectorize(map).into_iter().enumerate() {
            end_matrix.set(i, j, c);
        }
    }
    let cover = projective_cover(alg, m);
    let into_cover = intertwiner_basis(alg, m, &cover.cover);
    let mut coords: Vec<Vec<FieldElement>> = Vec::new();
    for g in &into_cover {
        let composite = cover.surjection.compose(g);
        let v = vectorize(&composite);
        let c = solve(&end_matrix, &v).expect("shape").expect("composite is an endomorphism");
        coords.push(c);
    }
    let image = canonical_rows(field, coords, h);
    h - image.rows()
}

/// An extension `0 → N → E → M → 0` realized from an Ext class.
#[derive(Clone, Debug)]
pub struct Extension {
    pub total: Representation,
    /// image of `N` inside `total`
    pub sub: Submodule,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

/// Builds the extension of `m` by `n` along a class in `Ext^1(m, n)`,
/// as the pushout of `ΩM → P(M)` along the cocycle.  The zero class gives
/// the direct sum.
pub fn extension_module(
    alg: &Algebra,
    n: &Representation,
    m: &Representation,
    ext: &Ext1,
    coords: &[FieldElement],
) -> Extension {
    let field = alg.field();
    let nv = n.dims.len();
    let cover = &ext.cover;
    let f = if ext.dim() == 0 || coords.iter().all(|c| c.0 == 0) {
        ModuleMap::zero(field, &cover.syzygy, n)
    } else {
        ext.cocycle(coords)
    };
    // big = n ⊕ P, D = { (f(w), -ι(w)) : w in ΩM }
    let (big, offsets) =
        direct_sum_many(field, nv, alg.quiver().arrow_count(), &[n, &cover.cover]);
    let mut d_rows: Vec<Vec<Vec<FieldElement>>> = vec![Vec::new(); nv];
    for v in 0..nv {
        for r in 0..cover.syzygy.dims[v] {
            let mut row = vec![field.zero(); big.dims[v]];
            for i in 0..n.dims[v] {
                row[offsets[0][v] + i] = f.blocks[v].get(i, r);
            }
            for i in 0..cover.cover.dims[v] {
                row[offsets[1][v] + i] = field.neg(cover.kernel_inclusion.blocks[v].get(i, r));
            }
            d_rows[v].push(row);
        }
    }
    let d = Submodule {
        rows: d_rows
            .into_iter()
            .enumerate()
            .map(|(v, rows)| canonical_rows(field, rows, big.dims[v]))
            .collect(),
    };
    let q = QuotientData::new(alg, &big, &d);
    let total = q.rep.clone();
    debug_assert_eq!(total.total_dim(), n.total_dim() + m.total_dim());
    debug_assert!(crate::repmod::check_relations(alg, &total));

    // inclusion of n: project the n-block of big into the quotient
    let inclusion_blocks: Vec<FieldMatrix> = (0..nv)
        .map(|v| {
            let mut emb = FieldMatrix::zero(field, big.dims[v], n.dims[v]);
            for i in 0..n.dims[v] {
                emb.set(offsets[0][v] + i, i, field.one());
            }
            q.projections[v].mul(&emb)
        })
        .collect();
    let inclusion = ModuleMap { blocks: inclusion_blocks };
    // projection to m: (0, π) vanishes on D, so it descends along sections
    let projection_blocks: Vec<FieldMatrix> = (0..nv)
        .map(|v| {
            let mut kill_n = FieldMatrix::zero(field, cover.cover.dims[v], big.dims[v]);
            for i in 0..cover.cover.dims[v] {
                kill_n.set(i, offsets[1][v] + i, field.one());
            }
            cover.surjection.blocks[v].mul(&kill_n).mul(&q.sections[v].transpose())
        })
        .collect();
    let projection = ModuleMap { blocks: projection_blocks };
    debug_assert!(inclusion.intertwines(alg, n, &total));
    debug_assert!(projection.intertwines(alg, &total, m));
    let sub = inclusion.image(&total);
    debug_assert_eq!(sub.total_dim(), n.total_dim());
    Extension { total, sub, inclusion, projection }
}

/// The same extension built through the opposite algebra: dualize, push out
/// over `Λ^op` with the roles of sub and quotient swapped, dualize back.
/// This exercises injective envelopes instead of projective covers and is
/// used as an independent route when verifying uniqueness claims.
pub fn extension_module_dual_route(
    alg: &Algebra,
    n: &Representation,
    m: &Representation,
    coords: &[FieldElement],
) -> Representation {
    let op = alg.opposite();
    let dn = dual_module(n);
    let dm = dual_module(m);
    // 0 → N → E → M → 0 dualizes to 0 → DM → DE → DN → 0
    let ext_op = ext1(op, &dn, &dm);
    assert_eq!(
        coords.len(),
        ext_op.dim(),
        "dual-route Ext dimension disagrees with the requested class length"
    );
    let e_op = extension_module(op, &dm, &dn, &ext_op, coords);
    dual_module(&e_op.total)
}

/// Vertices `v` with `P_v` a direct summand of `x`, via the local-ring
/// criterion: `P_v | x` iff some basis composite `f ∘ g` with `f: x → P_v`,
/// `g: P_v → x` is invertible.
pub fn projective_summands(alg: &Algebra, x: &Representation) -> Vec<VertexId> {
    let mut out = Vec::new();
    for v in alg.quiver().vertex_ids() {
        let p = alg.projective(v);
        if p.total_dim() > x.total_dim() || p.total_dim() == 0 {
            continue;
        }
        let to_p = intertwiner_basis(alg, x, p);
        let from_p = intertwiner_basis(alg, p, x);
        'search: for f in &to_p {
            for g in &from_p {
                if f.compose(g).is_invertible() {
                    out.push(v);
                    break 'search;
                }
            }
        }
    }
    out
}

/// The symmetric-algebra symptom: `soc P_v ≅ top P_v ≅ S_v` for every `v`.
pub fn socle_matches_top(alg: &Algebra) -> bool {
    alg.quiver().vertex_ids().all(|v| {
        let p = alg.projective(v);
        let soc = socle_multiset(alg, p);
        let top = top_multiset(alg, p);
        let mut expected = vec![0usize; alg.quiver().vertex_count()];
        expected[v.0] = 1;
        soc == expected && top == expected
    })
}

/// Smallest `r <= cap` with `Ω^{2r}(M) ≅ M`, or `None`.  `τ = Ω²` is valid
/// for symmetric algebras, which is asserted before iterating.  Lying at the
/// end of a 3-tube is reported as period 3.
pub fn tau_period(
    alg: &Algebra,
    m: &Representation,
    cap: usize,
    opts: &IsoOptions,
) -> Result<Option<usize>, ModuleError> {
    if !socle_matches_top(alg) {
        return Err(ModuleError::BadShape(
            "algebra fails the symmetric-algebra check (soc P_v vs top P_v)".into(),
        ));
    }
    if is_projective(alg, m) {
        return Err(ModuleError::BadShape("tau_period needs a non-projective module".into()));
    }
    match is_indecomposable(alg, m, opts) {
        Some(true) => {}
        Some(false) => {
            return Err(ModuleError::BadShape("tau_period needs an indecomposable module".into()))
        }
        None => {
            return Err(ModuleError::Indeterminate(
                "indecomposability of the input could not be decided".into(),
            ))
        }
    }
    let mut x = m.clone();
    for r in 1..=cap {
        x = syzygy(alg, &syzygy(alg, &x));
        match iso_test(alg, &x, m, opts) {
            Iso::Yes => return Ok(Some(r)),
            Iso::No => {}
            Iso::Indeterminate => {
                return Err(ModuleError::Indeterminate(format!(
                    "isomorphism test inconclusive at tau step {r}"
                )))
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{instantiate_family, FamilyId};
    use alloc::collections::BTreeMap;
    use alloc::string::ToString;

    fn klein_algebra() -> Algebra {
        let p = instantiate_family(&FamilyId::KleinFourLocal, 2, &BTreeMap::new()).unwrap();
        Algebra::build(&p).unwrap()
    }

    fn sd2a1_algebra(n: i64, c: u16) -> Algebra {
        let mut scalars = BTreeMap::new();
        scalars.insert("c".to_string(), c);
        let p = instantiate_family(&FamilyId::Sd2a1, n, &scalars).unwrap();
        Algebra::build(&p).unwrap()
    }

    fn q3b_algebra(n: i64) -> Algebra {
        let p = instantiate_family(&FamilyId::Q3b, n, &BTreeMap::new()).unwrap();
        Algebra::build(&p).unwrap()
    }

    fn v(alg: &Algebra, label: &str) -> VertexId {
        alg.quiver().vertex_id(label).unwrap()
    }

    #[test]
    fn hom_between_distinct_simples_vanishes() {
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0"));
        let s1 = alg.simple(v(&alg, "1"));
        assert_eq!(hom_basis(&alg, s0, s1).dim(), 0);
    }

    #[test]
    fn hom_from_projective_counts_dimension_at_vertex() {
        let alg = sd2a1_algebra(4, 0);
        let p0 = alg.projective(v(&alg, "0"));
        let s0 = alg.simple(v(&alg, "0"));
        assert_eq!(hom_basis(&alg, p0, s0).dim(), 1);
    }

    #[test]
    fn end_of_s10_is_one_dimensional() {
        let alg = sd2a1_algebra(4, 0);
        let m = crate::repmod::uniserial(&alg, &[v(&alg, "1"), v(&alg, "0")]).unwrap();
        assert_eq!(end_dim(&alg, &m), 1);
    }

    #[test]
    fn projectives_have_zero_syzygy() {
        let alg = q3b_algebra(4);
        for vid in alg.quiver().vertex_ids() {
            assert!(syzygy(&alg, alg.projective(vid)).is_zero());
            assert!(is_projective(&alg, alg.projective(vid)));
        }
    }

    #[test]
    fn cover_of_simple_is_the_projective() {
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0"));
        let cover = projective_cover(&alg, s0);
        assert_eq!(cover.cover.total_dim(), alg.projective(v(&alg, "0")).total_dim());
        assert_eq!(cover.syzygy.total_dim(), cover.cover.total_dim() - 1);
    }

    #[test]
    fn klein_syzygy_of_simple_has_dimension_three() {
        let alg = klein_algebra();
        let s = alg.simple(VertexId(0));
        assert_eq!(syzygy(&alg, s).total_dim(), 3);
    }

    #[test]
    fn ext_dims_between_simples_count_arrows() {
        for alg in [klein_algebra(), sd2a1_algebra(4, 0), sd2a1_algebra(4, 1), q3b_algebra(4)] {
            let quiver = alg.quiver();
            for a in quiver.vertex_ids() {
                for b in quiver.vertex_ids() {
                    let arrows = quiver
                        .arrow_ids()
                        .filter(|&x| quiver.arrow(x).source == a && quiver.arrow(x).target == b)
                        .count();
                    let d = ext_dim(&alg, alg.simple(a), alg.simple(b), 1);
                    assert_eq!(d, arrows, "Ext^1(S_{}, S_{})", a.0, b.0);
                }
            }
        }
    }

    #[test]
    fn sd2a1_ext_table_between_simples() {
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0"));
        let s1 = alg.simple(v(&alg, "1"));
        assert_eq!(ext_dim(&alg, s1, s1, 1), 0);
        assert_eq!(ext_dim(&alg, s0, s0, 1), 1);
        assert_eq!(ext_dim(&alg, s0, s1, 1), 1);
        assert_eq!(ext_dim(&alg, s1, s0, 1), 1);
    }

    #[test]
    fn klein_self_extensions_of_the_simple_are_two_dimensional() {
        let alg = klein_algebra();
        let s = alg.simple(VertexId(0));
        assert_eq!(ext_dim(&alg, s, s, 1), 2);
    }

    #[test]
    fn klein_ext_algebra_is_polynomial_on_two_generators() {
        // the cohomology of the four-group in characteristic 2 is a
        // polynomial algebra on two degree-1 generators, so the degree-i
        // component has dimension i + 1
        let alg = klein_algebra();
        let s = alg.simple(VertexId(0));
        for i in 1..=4 {
            assert_eq!(ext_dim(&alg, s, s, i), i + 1, "degree {i}");
        }
    }

    #[test]
    fn q3b_omega_squared_periods_are_at_most_two() {
        // quaternion-type algebras have stable tubes of rank at most 2, so
        // every periodic module returns within two translate steps
        let alg = q3b_algebra(4);
        let opts = IsoOptions::default();
        for vid in alg.quiver().vertex_ids() {
            let s = alg.simple(vid).clone();
            let period = tau_period(&alg, &s, 6, &opts).unwrap();
            assert!(matches!(period, Some(1) | Some(2)), "S_{}: {:?}", vid.0, period);
        }
    }

    #[test]
    fn stable_end_examples() {
        let alg = sd2a1_algebra(4, 0);
        for vid in alg.quiver().vertex_ids() {
            assert_eq!(stable_end_dim(&alg, alg.projective(vid)), 0);
        }
        let s0 = alg.simple(v(&alg, "0"));
        assert_eq!(stable_end_dim(&alg, s0), 1);
        assert!(stable_end_dim(&alg, s0) <= end_dim(&alg, s0));
    }

    #[test]
    fn zero_class_extension_is_the_direct_sum() {
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0")).clone();
        let s1 = alg.simple(v(&alg, "1")).clone();
        let ext = ext1(&alg, &s0, &s1);
        assert_eq!(ext.dim(), 1);
        let zero = extension_module(&alg, &s1, &s0, &ext, &[alg.field().zero()]);
        let sum = s1.direct_sum(&s0);
        assert_eq!(iso_test(&alg, &zero.total, &sum, &IsoOptions::default()), Iso::Yes);
    }

    #[test]
    fn nonzero_class_extension_is_nonsplit_and_uniserial() {
        // the unique nonzero class in Ext^1(S_0, S_0) for the two-vertex
        // semidihedral family is realized by the alpha Jordan block S_00
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0")).clone();
        let ext = ext1(&alg, &s0, &s0);
        assert_eq!(ext.dim(), 1);
        let e = extension_module(&alg, &s0, &s0, &ext, &[alg.field().one()]);
        assert_eq!(e.total.total_dim(), 2);
        let sum = s0.direct_sum(&s0);
        assert_eq!(iso_test(&alg, &e.total, &sum, &IsoOptions::default()), Iso::No);
        let s00 = crate::repmod::uniserial(&alg, &[v(&alg, "0"), v(&alg, "0")]).unwrap();
        assert_eq!(iso_test(&alg, &e.total, &s00, &IsoOptions::default()), Iso::Yes);
        // both construction routes produce the same module
        let other = extension_module_dual_route(&alg, &s0, &s0, &[alg.field().one()]);
        assert_eq!(iso_test(&alg, &e.total, &other, &IsoOptions::default()), Iso::Yes);
    }

    #[test]
    fn syzygies_have_no_projective_summands() {
        let alg = q3b_algebra(4);
        for vid in alg.quiver().vertex_ids() {
            let s = alg.simple(vid);
            let omega = syzygy(&alg, s);
            assert!(projective_summands(&alg, &omega).is_empty());
        }
    }

    #[test]
    fn tau_rejects_projectives() {
        let alg = sd2a1_algebra(4, 0);
        let p0 = alg.projective(v(&alg, "0")).clone();
        assert!(matches!(
            tau_period(&alg, &p0, 3, &IsoOptions::default()),
            Err(ModuleError::BadShape(_))
        ));
    }

    #[test]
    fn tau_period_of_s1_in_sd2a1_is_not_three() {
        let alg = sd2a1_algebra(4, 0);
        let s1 = alg.simple(v(&alg, "1")).clone();
        let period = tau_period(&alg, &s1, 6, &IsoOptions::default()).unwrap();
        assert_ne!(period, Some(3));
    }

    #[test]
    fn tau_period_of_q3b_simples_is_not_three() {
        let alg = q3b_algebra(4);
        for vid in alg.quiver().vertex_ids() {
            let s = alg.simple(vid).clone();
            let period = tau_period(&alg, &s, 6, &IsoOptions::default()).unwrap();
            assert_ne!(period, Some(3), "S_{}", vid.0);
        }
    }
}
