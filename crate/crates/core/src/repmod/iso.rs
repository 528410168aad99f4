//! Hom-space solving, isomorphism testing and indecomposability.
//!
//! `iso_test` first separates modules by cheap exact invariants (dimension
//! vectors, Loewy series, ranks of short arrow words, Hom dimensions); when
//! the invariants agree it searches the intertwiner space for an invertible
//! element — exhaustively while the solution space has at most `2^20`
//! elements, by seeded random sampling beyond that.  The answer is never
//! wrong: if both searches are exhausted the result is `Indeterminate`.

use alloc::vec;
use alloc::vec::Vec;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::algebra::Algebra;
use crate::linalg::{kernel_basis, FieldElement, FieldMatrix};
use crate::repmod::{radical_series, socle_series, ModuleMap, Representation};

/// Outcome of an isomorphism test.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Iso {
    Yes,
    No,
    /// Both the enumeration budget and the randomized search were exhausted.
    Indeterminate,
}

#[derive(Copy, Clone, Debug)]
pub struct IsoOptions {
    /// Exhaustive search bound on the number of Hom-space elements.
    pub max_enumeration: u64,
    /// Random candidates tried beyond the enumeration bound.
    pub random_tries: u32,
    pub seed: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { max_enumeration: 1 << 20, random_tries: 4096, seed: 0 }
    }
}

/// A basis of `Hom(M, N)`: the kernel of the stacked intertwining system.
pub fn intertwiner_basis(alg: &Algebra, m: &Representation, n: &Representation) -> Vec<ModuleMap> {
    let field = m.field;
    let quiver = alg.quiver();
    let nv = m.dims.len();
    let mut offsets = vec![0usize; nv + 1];
    for v in 0..nv {
        offsets[v + 1] = offsets[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = offsets[nv];
    let total_rows: usize = quiver
        .arrow_ids()
        .map(|a| {
            let arrow = quiver.arrow(a);
            n.dims[arrow.target.0] * m.dims[arrow.source.0]
        })
        .sum();
    let mut system = FieldMatrix::zero(field, total_rows, unknowns);
    let mut row = 0usize;
    for a in quiver.arrow_ids() {
        let arrow = quiver.arrow(a);
        let (s, t) = (arrow.source.0, arrow.target.0);
        let ma = &m.mats[a.0];
        let na = &n.mats[a.0];
        // f_t * M(a) - N(a) * f_s = 0, entry (r, c)
        for r in 0..n.dims[t] {
            for c in 0..m.dims[s] {
                for k in 0..m.dims[t] {
                    let col = offsets[t] + r * m.dims[t] + k;
                    let cur = system.get(row, col);
                    system.set(row, col, field.add(cur, ma.get(k, c)));
                }
                for k in 0..n.dims[s] {
                    let col = offsets[s] + k * m.dims[s] + c;
                    let cur = system.get(row, col);
                    system.set(row, col, field.sub(cur, na.get(r, k)));
                }
                row += 1;
            }
        }
    }
    debug_assert_eq!(row, total_rows);
    let kernel = kernel_basis(&system);
    let mut maps = Vec::with_capacity(kernel.cols());
    for j in 0..kernel.cols() {
        let mut blocks = Vec::with_capacity(nv);
        for v in 0..nv {
            let mut b = FieldMatrix::zero(field, n.dims[v], m.dims[v]);
            for r in 0..n.dims[v] {
                for c in 0..m.dims[v] {
                    b.set(r, c, kernel.get(offsets[v] + r * m.dims[v] + c, j));
                }
            }
            blocks.push(b);
        }
        maps.push(ModuleMap { blocks });
    }
    maps
}

/// `dim_k End(M)`.
pub fn end_dim(alg: &Algebra, m: &Representation) -> usize {
    intertwiner_basis(alg, m, m).len()
}

/// Exact isomorphism invariants used to separate modules cheaply and to
/// pre-group candidates before pairwise tests.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Fingerprint {
    pub dims: Vec<usize>,
    pub radical_layers: Vec<Vec<usize>>,
    pub socle_layers: Vec<Vec<usize>>,
    pub word_ranks: Vec<usize>,
}

pub fn fingerprint(alg: &Algebra, m: &Representation) -> Fingerprint {
    let radical_layers = radical_series(alg, m).iter().map(|s| s.dims()).collect();
    let socle_layers = socle_series(alg, m).iter().map(|s| s.dims()).collect();
    Fingerprint {
        dims: m.dims.clone(),
        radical_layers,
        socle_layers,
        word_ranks: word_ranks(alg, m),
    }
}

/// Ranks of all composable arrow words of length at most 3, in a canonical
/// order.
fn word_ranks(alg: &Algebra, m: &Representation) -> Vec<usize> {
    let quiver = alg.quiver();
    let mut out = Vec::new();
    let arrows: Vec<_> = quiver.arrow_ids().collect();
    for &a in &arrows {
        out.push(m.mats[a.0].rank());
        for &b in &arrows {
            if quiver.arrow(b).target != quiver.arrow(a).source {
                continue;
            }
            let ab = m.mats[a.0].mul(&m.mats[b.0]);
            out.push(ab.rank());
            for &c in &arrows {
                if quiver.arrow(c).target != quiver.arrow(b).source {
                    continue;
                }
                out.push(ab.mul(&m.mats[c.0]).rank());
            }
        }
    }
    out
}

/// Iterates coefficient tuples in `GF(q)^h`, skipping the zero tuple, and
/// reports whether any linear combination of the Hom basis is invertible.
fn search_invertible(
    basis: &[ModuleMap],
    m: &Representation,
    opts: &IsoOptions,
) -> Option<bool> {
    let field = m.field;
    let h = basis.len();
    let q = field.order() as u64;
    let nv = m.dims.len();
    // check vertices in ascending dimension order for early rejection
    let mut vertex_order: Vec<usize> = (0..nv).filter(|&v| m.dims[v] > 0).collect();
    vertex_order.sort_by_key(|&v| m.dims[v]);

    let combo_invertible = |coeffs: &[FieldElement]| -> bool {
        for &v in &vertex_order {
            let mut f = FieldMatrix::zero(field, basis[0].blocks[v].rows(), basis[0].blocks[v].cols());
            for (i, &c) in coeffs.iter().enumerate() {
                if c.0 != 0 {
                    f = f.add(&basis[i].blocks[v].scale(c));
                }
            }
            if !f.is_invertible() {
                return false;
            }
        }
        true
    };

    let space: u64 = q.checked_pow(h as u32).unwrap_or(u64::MAX);
    if space <= opts.max_enumeration {
        let mut coeffs = vec![field.zero(); h];
        // odometer over GF(q)^h
        loop {
            let mut i = 0;
            loop {
                if i == h {
                    return Some(false);
                }
                let next = coeffs[i].0 as u16 + 1;
                if next < q as u16 {
                    coeffs[i] = field.element(next).unwrap();
                    break;
                }
                coeffs[i] = field.zero();
                i += 1;
            }
            if combo_invertible(&coeffs) {
                return Some(true);
            }
        }
    }
    // randomized fallback; sound when it finds a witness, inconclusive otherwise
    let mut rng = SmallRng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_tries {
        let coeffs: Vec<FieldElement> = (0..h)
            .map(|_| field.element(rng.gen_range(0..field.order())).unwrap())
            .collect();
        if coeffs.iter().all(|c| c.0 == 0) {
            continue;
        }
        if combo_invertible(&coeffs) {
            return Some(true);
        }
    }
    None
}

/// Decides whether two representations of the same algebra are isomorphic.
///
/// Never returns a wrong answer: `Indeterminate` only after both the
/// exhaustive bound and the randomized search are spent.
pub fn iso_test(alg: &Algebra, m: &Representation, n: &Representation, opts: &IsoOptions) -> Iso {
    if m.dims != n.dims {
        return Iso::No;
    }
    if m.total_dim() == 0 {
        return Iso::Yes;
    }
    if fingerprint(alg, m) != fingerprint(alg, n) {
        return Iso::No;
    }
    let forward = intertwiner_basis(alg, m, n);
    if forward.is_empty() {
        return Iso::No;
    }
    // dim Hom(M,N) = dim Hom(N,M) and equal End dimensions are necessary
    let backward = intertwiner_basis(alg, n, m).len();
    if forward.len() != backward || end_dim(alg, m) != end_dim(alg, n) {
        return Iso::No;
    }
    match search_invertible(&forward, m, opts) {
        Some(true) => Iso::Yes,
        Some(false) => Iso::No,
        None => Iso::Indeterminate,
    }
}

/// Indecomposability via idempotents: `End(M)` has no idempotent other than
/// `0` and `1` iff `M` is indecomposable.  `None` when the End space is too
/// large to enumerate.
pub fn is_indecomposable(alg: &Algebra, m: &Representation, opts: &IsoOptions) -> Option<bool> {
    if m.total_dim() == 0 {
        return Some(false);
    }
    let basis = intertwiner_basis(alg, m, m);
    let h = basis.len();
    if h == 1 {
        return Some(true);
    }
    let field = m.field;
    let q = field.order() as u64;
    if q.checked_pow(h as u32).unwrap_or(u64::MAX) > opts.max_enumeration {
        return None;
    }
    let identity = ModuleMap::identity(m);
    let mut coeffs = vec![field.zero(); h];
    loop {
        let mut i = 0;
        loop {
            if i == h {
                return Some(true);
            }
            let next = coeffs[i].0 as u16 + 1;
            if next < q as u16 {
                coeffs[i] = field.element(next).unwrap();
                break;
            }
            coeffs[i] = field.zero();
            i += 1;
        }
        let mut e = ModuleMap::zero(field, m, m);
        for (i, &c) in coeffs.iter().enumerate() {
            if c.0 != 0 {
                e = e.add(&basis[i].scale(c));
            }
        }
        if e.compose(&e) == e && e != identity && !e.is_zero() {
            return Some(false);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::tests::{klein_algebra, q3b_algebra, sd2a1_algebra};
    use crate::repmod::{projective, uniserial};
    use crate::presentations::VertexId;

    fn opts() -> IsoOptions {
        IsoOptions::default()
    }

    #[test]
    fn module_is_isomorphic_to_itself() {
        let alg = sd2a1_algebra(4, 0);
        let p0 = projective(&alg, VertexId(0)).unwrap();
        assert_eq!(iso_test(&alg, &p0, &p0, &opts()), Iso::Yes);
    }

    #[test]
    fn different_tops_are_not_isomorphic() {
        let alg = sd2a1_algebra(4, 0);
        let v0 = alg.quiver().vertex_id("0").unwrap();
        let v1 = alg.quiver().vertex_id("1").unwrap();
        let s01 = uniserial(&alg, &[v0, v1]).unwrap();
        let s10 = uniserial(&alg, &[v1, v0]).unwrap();
        assert_eq!(iso_test(&alg, &s01, &s10, &opts()), Iso::No);
    }

    #[test]
    fn rebased_projective_is_isomorphic() {
        let alg = q3b_algebra(4);
        let p0 = projective(&alg, alg.quiver().vertex_id("0").unwrap()).unwrap();
        // conjugate by an explicit invertible change of basis at each vertex
        let field = alg.field();
        let mut rng = SmallRng::seed_from_u64(7);
        let mut basemats = Vec::new();
        for &d in &p0.dims {
            loop {
                let mut g = FieldMatrix::zero(field, d, d);
                for i in 0..d {
                    for j in 0..d {
                        g.set(i, j, field.element(rng.gen_range(0..field.order())).unwrap());
                    }
                }
                if g.is_invertible() {
                    basemats.push(g);
                    break;
                }
            }
        }
        let quiver = alg.quiver();
        let mut mats = Vec::new();
        for a in quiver.arrow_ids() {
            let arrow = quiver.arrow(a);
            let g_t = &basemats[arrow.target.0];
            let g_s_inv = basemats[arrow.source.0].inverse().unwrap();
            mats.push(g_t.mul(&p0.mats[a.0]).mul(&g_s_inv));
        }
        let rebased = Representation { field, dims: p0.dims.clone(), mats };
        assert!(crate::repmod::check_relations(&alg, &rebased));
        assert_eq!(iso_test(&alg, &p0, &rebased, &opts()), Iso::Yes);
    }

    #[test]
    fn end_dim_of_simples_is_one() {
        let alg = q3b_algebra(4);
        for v in alg.quiver().vertex_ids() {
            assert_eq!(end_dim(&alg, alg.simple(v)), 1);
        }
    }

    #[test]
    fn projectives_are_indecomposable_and_sums_are_not() {
        let alg = klein_algebra();
        let p = projective(&alg, VertexId(0)).unwrap();
        assert_eq!(is_indecomposable(&alg, &p, &opts()), Some(true));
        let s = alg.simple(VertexId(0)).clone();
        let ss = s.direct_sum(&s);
        assert_eq!(is_indecomposable(&alg, &ss, &opts()), Some(false));
    }

    #[test]
    fn iso_test_is_symmetric_on_examples() {
        let alg = q3b_algebra(4);
        let v0 = alg.quiver().vertex_id("0").unwrap();
        let v1 = alg.quiver().vertex_id("1").unwrap();
        let a = uniserial(&alg, &[v0, v1]).unwrap();
        let b = uniserial(&alg, &[v1, v0]).unwrap();
        assert_eq!(iso_test(&alg, &a, &b, &opts()), iso_test(&alg, &b, &a, &opts()));
        let a2 = uniserial(&alg, &[v0, v1]).unwrap();
        assert_eq!(iso_test(&alg, &a, &a2, &opts()), Iso::Yes);
    }
}
