//! Truncated-lift deformations over `k[t]/(t^m)` and the symbolic
//! deformation-ring classifier.
//!
//! A lift of a representation `M` at order `m` replaces every arrow matrix
//! by a matrix polynomial of degree `< m` whose constant term is `M`'s
//! matrix, with all relators vanishing modulo `t^m`.  Extending from order
//! `m` to `m+1` is a linear problem: the unknown `t^m` correction enters the
//! relators through the first-order linearization around the base, and the
//! lower coefficients contribute a constant obstruction.  The profile of a
//! first-order direction maximizes the reachable order over every correction
//! choice at every step (breadth-first over the solution torsors), which is
//! the versal semantics: an order is reachable if some chain of choices
//! reaches it.
//!
//! Everything here is mod-2 (over `k`); statements over the Witt vectors are
//! emitted as symbolic ring presentations with opaque symbols `mu` and
//! `q_n(t)`, consuming declared metadata for the facts that rest on
//! character-theoretic input.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::classifier::Tau3;
use crate::homology::{ext1, ext_dim, extension_module, extension_module_dual_route, Ext1};
use crate::linalg::{kernel_basis, rref, solve, FieldElement, FieldMatrix};
use crate::repmod::{
    canonical_rows, end_dim, iso_test, Iso, IsoOptions, ModuleError, ModuleMap, Representation,
};
use crate::rewriting::LinComb;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DeformError {
    Precondition(String),
    /// The two independent computation routes disagree; a bug, surfaced
    /// rather than silenced.
    RoutesDisagree(String),
    MissingMetadata(String),
    InconsistentMetadata(String),
    OutOfScope(String),
    SearchExhausted(String),
    Module(ModuleError),
}

impl core::fmt::Display for DeformError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DeformError::Precondition(s) => write!(f, "precondition violated: {s}"),
            DeformError::RoutesDisagree(s) => write!(f, "independent routes disagree: {s}"),
            DeformError::MissingMetadata(s) => write!(f, "missing metadata flag: {s}"),
            DeformError::InconsistentMetadata(s) => write!(f, "inconsistent metadata: {s}"),
            DeformError::OutOfScope(s) => write!(f, "outside the classified cases: {s}"),
            DeformError::SearchExhausted(s) => write!(f, "search exhausted: {s}"),
            DeformError::Module(e) => write!(f, "{e}"),
        }
    }
}

impl From<ModuleError> for DeformError {
    fn from(e: ModuleError) -> Self {
        DeformError::Module(e)
    }
}

/// A lift of a base representation over `k[t]/(t^order)`: per arrow, the
/// list of coefficient matrices of `t^0, ..., t^{order-1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedLift {
    pub base: Representation,
    pub order: usize,
    /// `coeffs[a][i]` is the `t^i` coefficient of arrow `a`; `coeffs[a][0]`
    /// equals the base matrix.
    pub coeffs: Vec<Vec<FieldMatrix>>,
}

impl TruncatedLift {
    /// The constant lift (no `t` terms) at the given order.
    pub fn constant(base: &Representation, order: usize) -> TruncatedLift {
        assert!(order >= 1);
        let coeffs = base
            .mats
            .iter()
            .map(|m| {
                let mut list = vec![m.clone()];
                for _ in 1..order {
                    list.push(FieldMatrix::zero(base.field, m.rows(), m.cols()));
                }
                list
            })
            .collect();
        TruncatedLift { base: base.clone(), order, coeffs }
    }

    /// Evaluates an endpoint-homogeneous relator over `k[t]/(t^cap)`,
    /// returning the coefficient matrices of `t^0 .. t^{cap-1}`.
    fn evaluate_relator(&self, lc: &LinComb, cap: usize) -> Vec<FieldMatrix> {
        let field = self.base.field;
        let Some((_, first)) = lc.terms.first() else {
            return Vec::new();
        };
        let (rows, cols) = (self.base.dims[first.target.0], self.base.dims[first.source.0]);
        let mut acc: Vec<FieldMatrix> =
            (0..cap).map(|_| FieldMatrix::zero(field, rows, cols)).collect();
        for (c, mono) in &lc.terms {
            // identity polynomial at the source vertex
            let mut word_val: Vec<FieldMatrix> = (0..cap)
                .map(|i| {
                    if i == 0 {
                        FieldMatrix::identity(field, self.base.dims[mono.source.0])
                    } else {
                        FieldMatrix::zero(
                            field,
                            self.base.dims[mono.source.0],
                            self.base.dims[mono.source.0],
                        )
                    }
                })
                .collect();
            for &letter in mono.word.iter().rev() {
                let arrow_poly = &self.coeffs[letter as usize];
                let out_rows = arrow_poly[0].rows();
                let mut next: Vec<FieldMatrix> = (0..cap)
                    .map(|_| FieldMatrix::zero(field, out_rows, word_val[0].cols()))
                    .collect();
                for (i, coeff) in arrow_poly.iter().enumerate() {
                    if i >= cap {
                        break;
                    }
                    for j in 0..cap - i {
                        let term = coeff.mul(&word_val[j]);
                        next[i + j] = next[i + j].add(&term);
                    }
                }
                word_val = next;
            }
            for i in 0..cap {
                acc[i] = acc[i].add(&word_val[i].scale(*c));
            }
        }
        acc
    }

    /// All relators vanish modulo `t^order` and the constant terms agree
    /// with the base.
    pub fn validate(&self, alg: &Algebra) -> bool {
        let base_ok = self
            .coeffs
            .iter()
            .zip(&self.base.mats)
            .all(|(poly, m)| poly.len() == self.order && &poly[0] == m);
        base_ok
            && alg.relators().iter().all(|r| {
                self.evaluate_relator(r, self.order).iter().all(|m| m.is_zero())
            })
    }

    /// Truncation to a lower order (drops high coefficients).
    pub fn truncate(&self, order: usize) -> TruncatedLift {
        assert!(order >= 1 && order <= self.order);
        TruncatedLift {
            base: self.base.clone(),
            order,
            coeffs: self.coeffs.iter().map(|poly| poly[..order].to_vec()).collect(),
        }
    }

    fn key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for poly in &self.coeffs {
            for m in poly {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        out.push(m.get(i, j).0);
                    }
                }
            }
            out.push(0xff);
        }
        out
    }
}

/// The first-order infrastructure around a base representation: the
/// linearization of the relators and a basis of cocycle directions modulo
/// conjugation coboundaries.
struct FirstOrder {
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    unknowns: usize,
    /// relator linearization, one block of rows per relator
    l_matrix: FieldMatrix,
    /// kernel of `l_matrix` (cocycles), as unknown-space vectors
    z_basis: Vec<Vec<FieldElement>>,
    /// indices into `z_basis` representing a basis of cocycles modulo
    /// coboundaries
    complement: Vec<usize>,
}

impl FirstOrder {
    fn direction_count(&self) -> usize {
        self.complement.len()
    }

    /// The unknown-space vector of a direction given by coordinates in the
    /// canonical complement basis.
    fn direction_vector(&self, coords: &[FieldElement], field: crate::linalg::Field) -> Vec<FieldElement> {
        assert_eq!(coords.len(), self.complement.len());
        let mut v = vec![field.zero(); self.unknowns];
        for (i, &c) in coords.iter().enumerate() {
            if c.0 == 0 {
                continue;
            }
            for (j, &z) in self.z_basis[self.complement[i]].iter().enumerate() {
                v[j] = field.add(v[j], field.mul(c, z));
            }
        }
        v
    }

    fn split_matrices(
        &self,
        v: &[FieldElement],
        field: crate::linalg::Field,
    ) -> Vec<FieldMatrix> {
        let mut out = Vec::with_capacity(self.shapes.len());
        for (a, &(rows, cols)) in self.shapes.iter().enumerate() {
            let mut m = FieldMatrix::zero(field, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, v[self.offsets[a] + r * cols + c]);
                }
            }
            out.push(m);
        }
        out
    }
}

fn first_order(alg: &Algebra, m: &Representation) -> FirstOrder {
    let field = alg.field();
    let quiver = alg.quiver();
    let shapes: Vec<(usize, usize)> = quiver
        .arrows()
        .iter()
        .map(|a| (m.dims[a.target.0], m.dims[a.source.0]))
        .collect();
    let mut offsets = vec![0usize; shapes.len() + 1];
    for (i, (r, c)) in shapes.iter().enumerate() {
        offsets[i + 1] = offsets[i] + r * c;
    }
    let unknowns = offsets[shapes.len()];

    // linearization of every relator around the base
    let total_rows: usize = alg
        .relators()
        .iter()
        .map(|r| {
            let (_, first) = &r.terms[0];
            m.dims[first.target.0] * m.dims[first.source.0]
        })
        .sum();
    let mut l_matrix = FieldMatrix::zero(field, total_rows, unknowns);
    let mut row_base = 0usize;
    for relator in alg.relators() {
        let (_, first) = &relator.terms[0];
        let (rt, rs) = (m.dims[first.target.0], m.dims[first.source.0]);
        for (coef, mono) in &relator.terms {
            let len = mono.word.len();
            // prefix products: prefix[i] = M(w_0) ... M(w_{i-1})
            let mut prefixes: Vec<FieldMatrix> = Vec::with_capacity(len + 1);
            prefixes.push(FieldMatrix::identity(field, m.dims[mono.target.0]));
            for i in 0..len {
                let a = mono.word[i] as usize;
                prefixes.push(prefixes[i].mul(&m.mats[a]));
            }
            // suffix products: suffix[i] = M(w_{i+1}) ... M(w_{len-1})
            let mut suffixes: Vec<FieldMatrix> =
                vec![FieldMatrix::identity(field, m.dims[mono.source.0]); len + 1];
            for i in (0..len).rev() {
                let a = mono.word[i] as usize;
                suffixes[i] = m.mats[a].mul(&suffixes[i + 1]);
            }
            for (i, &letter) in mono.word.iter().enumerate() {
                let a = letter as usize;
                let p = &prefixes[i];
                let s = &suffixes[i + 1];
                let (xr, xc) = shapes[a];
                for r in 0..rt {
                    for c in 0..rs {
                        let row = row_base + r * rs + c;
                        for r2 in 0..xr {
                            let pr = p.get(r, r2);
                            if pr.0 == 0 {
                                continue;
                            }
                            for c2 in 0..xc {
                                let val = field.mul(*coef, field.mul(pr, s.get(c2, c)));
                                if val.0 != 0 {
                                    let col = offsets[a] + r2 * xc + c2;
                                    let cur = l_matrix.get(row, col);
                                    l_matrix.set(row, col, field.add(cur, val));
                                }
                            }
                        }
                    }
                }
            }
        }
        row_base += rt * rs;
    }

    let kernel = kernel_basis(&l_matrix);
    let z_basis: Vec<Vec<FieldElement>> = (0..kernel.cols()).map(|j| kernel.column(j)).collect();
    let mut z_matrix = FieldMatrix::zero(field, unknowns, z_basis.len());
    for (j, z) in z_basis.iter().enumerate() {
        for (i, &c) in z.iter().enumerate() {
            z_matrix.set(i, j, c);
        }
    }

    // coboundaries: X_a = C_{t(a)} A_a - A_a C_{s(a)} over all C
    let mut boundary_coords: Vec<Vec<FieldElement>> = Vec::new();
    for v in 0..m.dims.len() {
        for i in 0..m.dims[v] {
            for j in 0..m.dims[v] {
                let mut x = vec![field.zero(); unknowns];
                for a in 0..shapes.len() {
                    let arrow = quiver.arrow(crate::presentations::ArrowId(a));
                    let (xr, xc) = shapes[a];
                    // (E_ij at t(a)) * A_a
                    if arrow.target.0 == v {
                        for c in 0..xc {
                            let val = m.mats[a].get(j, c);
                            if val.0 != 0 {
                                let col = offsets[a] + i * xc + c;
                                x[col] = field.add(x[col], val);
                            }
                        }
                    }
                    // - A_a * (E_ij at s(a))
                    if arrow.source.0 == v {
                        for r in 0..xr {
                            let val = m.mats[a].get(r, i);
                            if val.0 != 0 {
                                let col = offsets[a] + r * xc + j;
                                x[col] = field.sub(x[col], val);
                            }
                        }
                    }
                }
                if x.iter().any(|c| c.0 != 0) {
                    boundary_coords.push(x);
                }
            }
        }
    }
    // express the coboundaries in z-coordinates (they are cocycles)
    let mut in_z: Vec<Vec<FieldElement>> = Vec::new();
    for b in &boundary_coords {
        let coords = solve(&z_matrix, b).expect("shape").expect("coboundaries are cocycles");
        in_z.push(coords);
    }
    let boundary_rows = canonical_rows(field, in_z, z_basis.len());
    let mut is_pivot = vec![false; z_basis.len()];
    for i in 0..boundary_rows.rows() {
        if let Some(p) = (0..z_basis.len()).find(|&j| boundary_rows.get(i, j).0 != 0) {
            is_pivot[p] = true;
        }
    }
    let complement: Vec<usize> = (0..z_basis.len()).filter(|&j| !is_pivot[j]).collect();
    FirstOrder { offsets, shapes, unknowns, l_matrix, z_basis, complement }
}

/// `dim Ext^1(M, M)` computed twice: once through the syzygy route and once
/// as the dimension of first-order lifts modulo conjugation.  The two values
/// must agree; a mismatch is reported as an error rather than guessed away.
pub fn tangent_dim(alg: &Algebra, m: &Representation) -> Result<usize, DeformError> {
    if end_dim(alg, m) != 1 {
        return Err(DeformError::Precondition(
            "tangent_dim expects a module with End = k".into(),
        ));
    }
    let via_ext = ext_dim(alg, m, m, 1);
    let via_lifts = first_order(alg, m).direction_count();
    if via_ext != via_lifts {
        return Err(DeformError::RoutesDisagree(format!(
            "Ext^1 route gives {via_ext}, first-order lift route gives {via_lifts}"
        )));
    }
    Ok(via_ext)
}

/// Outcome of a one-order extension attempt.
#[derive(Clone, Debug)]
pub enum Extended {
    Lift(TruncatedLift),
    /// The linear system for the `t^m` correction is inconsistent; `defect`
    /// is the number of independent violated equations.
    Obstructed { defect: usize },
}

fn obstruction_vector(alg: &Algebra, lift: &TruncatedLift) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for relator in alg.relators() {
        let coeffs = lift.evaluate_relator(relator, lift.order + 1);
        let top = &coeffs[lift.order];
        for r in 0..top.rows() {
            for c in 0..top.cols() {
                out.push(top.get(r, c));
            }
        }
    }
    out
}

fn apply_correction(lift: &TruncatedLift, fo: &FirstOrder, x: &[FieldElement]) -> TruncatedLift {
    let field = lift.base.field;
    let mats = fo.split_matrices(x, field);
    let mut coeffs = lift.coeffs.clone();
    for (a, m) in mats.into_iter().enumerate() {
        coeffs[a].push(m);
    }
    TruncatedLift { base: lift.base.clone(), order: lift.order + 1, coeffs }
}

/// Extends a lift from order `m` to `m+1` if possible, choosing the
/// canonical (free-variables-zero) correction.  The output truncated back to
/// order `m` is bit-identical to the input.  The input must be a valid lift.
pub fn extend_lift(alg: &Algebra, lift: &TruncatedLift) -> Extended {
    assert!(lift.validate(alg), "extend_lift needs a valid truncated lift");
    let fo = first_order(alg, &lift.base);
    extend_with(alg, lift, &fo)
}

fn extend_with(alg: &Algebra, lift: &TruncatedLift, fo: &FirstOrder) -> Extended {
    let field = lift.base.field;
    let c = obstruction_vector(alg, lift);
    let rhs: Vec<FieldElement> = c.iter().map(|&v| field.neg(v)).collect();
    match solve(&fo.l_matrix, &rhs).expect("shape") {
        Some(x) => Extended::Lift(apply_correction(lift, fo, &x)),
        None => {
            let mut rhs_col = FieldMatrix::zero(field, rhs.len(), 1);
            for (i, &v) in rhs.iter().enumerate() {
                rhs_col.set(i, 0, v);
            }
            let aug = fo.l_matrix.hstack(&rhs_col);
            let defect = rref(&aug).rank - fo.l_matrix.rank();
            Extended::Obstructed { defect }
        }
    }
}

/// Every extension of `lift` by one order, up to gauge: the particular
/// solution shifted by each cocycle-modulo-coboundary representative.
/// Corrections differing by a coboundary are conjugate under `1 + t^m C`,
/// which fixes the lower coefficients, so gauge-equivalent lifts extend to
/// exactly the same orders and one representative per class suffices.
fn extend_all(
    alg: &Algebra,
    lift: &TruncatedLift,
    fo: &FirstOrder,
    limit: usize,
) -> Result<Vec<TruncatedLift>, DeformError> {
    let field = lift.base.field;
    let c = obstruction_vector(alg, lift);
    let rhs: Vec<FieldElement> = c.iter().map(|&v| field.neg(v)).collect();
    let Some(particular) = solve(&fo.l_matrix, &rhs).expect("shape") else {
        return Ok(Vec::new());
    };
    let q = field.order() as u64;
    let kdim = fo.complement.len();
    let count = q.checked_pow(kdim as u32).unwrap_or(u64::MAX);
    if count > limit as u64 {
        return Err(DeformError::SearchExhausted(format!(
            "torsor at order {} has {count} gauge classes (limit {limit})",
            lift.order
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut counters = vec![0u16; kdim];
    loop {
        let mut x = particular.clone();
        for (i, &cnt) in counters.iter().enumerate() {
            if cnt != 0 {
                let e = field.element(cnt).unwrap();
                for (j, &z) in fo.z_basis[fo.complement[i]].iter().enumerate() {
                    x[j] = field.add(x[j], field.mul(e, z));
                }
            }
        }
        out.push(apply_correction(lift, fo, &x));
        let mut pos = 0;
        loop {
            if pos == kdim {
                return Ok(out);
            }
            counters[pos] += 1;
            if counters[pos] < field.order() {
                break;
            }
            counters[pos] = 0;
            pos += 1;
        }
    }
}

/// Translation between first-order directions and `Ext^1(M, M)` classes:
/// each direction is realized as the module `[[A, X], [0, A]]` and its class
/// is read off through the cover.  The translation matrix is invertible — a
/// failure would mean the two pictures of the tangent space disagree.
struct DirectionTranslation {
    fo: FirstOrder,
    /// maps Ext-basis coordinates to direction coordinates
    from_ext: FieldMatrix,
}

fn direction_translation(
    alg: &Algebra,
    m: &Representation,
    ext: &Ext1,
) -> Result<DirectionTranslation, DeformError> {
    let field = alg.field();
    let fo = first_order(alg, m);
    let d = fo.direction_count();
    if d != ext.dim() {
        return Err(DeformError::RoutesDisagree(format!(
            "first-order directions {d} vs Ext dimension {}",
            ext.dim()
        )));
    }
    if d == 0 {
        return Ok(DirectionTranslation { fo, from_ext: FieldMatrix::zero(field, 0, 0) });
    }
    // to_ext columns: the Ext class of each direction representative
    let mut to_ext = FieldMatrix::zero(field, d, d);
    for (j, &zi) in fo.complement.iter().enumerate() {
        let x = fo.split_matrices(&fo.z_basis[zi], field);
        let e = double_module(alg, m, &x);
        let class = class_of_double(alg, m, &e, ext);
        for (i, &c) in class.iter().enumerate() {
            to_ext.set(i, j, c);
        }
    }
    let from_ext = to_ext.inverse().ok_or_else(|| {
        DeformError::RoutesDisagree("direction-to-Ext translation is singular".into())
    })?;
    Ok(DirectionTranslation { fo, from_ext })
}

/// The self-extension `[[A, X], [0, A]]` attached to a first-order
/// direction.
fn double_module(alg: &Algebra, m: &Representation, x: &[FieldMatrix]) -> Representation {
    let field = alg.field();
    let quiver = alg.quiver();
    let dims: Vec<usize> = m.dims.iter().map(|d| 2 * d).collect();
    let mut mats = Vec::with_capacity(m.mats.len());
    for a in quiver.arrow_ids() {
        let arrow = quiver.arrow(a);
        let (rt, rs) = (m.dims[arrow.target.0], m.dims[arrow.source.0]);
        let mut big = FieldMatrix::zero(field, 2 * rt, 2 * rs);
        for r in 0..rt {
            for c in 0..rs {
                let v = m.mats[a.0].get(r, c);
                big.set(r, c, v);
                big.set(rt + r, rs + c, v);
                big.set(r, rs + c, x[a.0].get(r, c));
            }
        }
        mats.push(big);
    }
    Representation { field, dims, mats }
}

/// Reads off the Ext class of a double module `0 → M → E → M → 0` where the
/// first block is the submodule copy: lift the cover surjection through `E`
/// and restrict to the syzygy.
fn class_of_double(
    alg: &Algebra,
    m: &Representation,
    e: &Representation,
    ext: &Ext1,
) -> Vec<FieldElement> {
    let field = alg.field();
    let quiver = alg.quiver();
    let nv = m.dims.len();
    let cover = &ext.cover;
    // unknown: sigma_v (e.dims[v] x cover.dims[v]); constraints:
    //   sigma E-intertwines the cover, and proj . sigma = surjection,
    // where proj is the second-block projection of e.
    let mut offsets = vec![0usize; nv + 1];
    for v in 0..nv {
        offsets[v + 1] = offsets[v] + e.dims[v] * cover.cover.dims[v];
    }
    let unknowns = offsets[nv];
    let mut rows_hom: usize = 0;
    for a in quiver.arrow_ids() {
        let arrow = quiver.arrow(a);
        rows_hom += e.dims[arrow.target.0] * cover.cover.dims[arrow.source.0];
    }
    let rows_proj: usize = (0..nv).map(|v| m.dims[v] * cover.cover.dims[v]).sum();
    let mut system = FieldMatrix::zero(field, rows_hom + rows_proj, unknowns);
    let mut rhs = vec![field.zero(); rows_hom + rows_proj];
    let mut row = 0;
    // intertwining: sigma_t * P(a) - E(a) * sigma_s = 0
    for a in quiver.arrow_ids() {
        let arrow = quiver.arrow(a);
        let (s, t) = (arrow.source.0, arrow.target.0);
        let pa = &cover.cover.mats[a.0];
        let ea = &e.mats[a.0];
        for r in 0..e.dims[t] {
            for c in 0..cover.cover.dims[s] {
                for k in 0..cover.cover.dims[t] {
                    let col = offsets[t] + r * cover.cover.dims[t] + k;
                    let cur = system.get(row, col);
                    system.set(row, col, field.add(cur, pa.get(k, c)));
                }
                for k in 0..e.dims[s] {
                    let col = offsets[s] + k * cover.cover.dims[s] + c;
                    let cur = system.get(row, col);
                    system.set(row, col, field.sub(cur, ea.get(r, k)));
                }
                row += 1;
            }
        }
    }
    // projection: (second block of sigma_v) = surjection_v
    for v in 0..nv {
        for r in 0..m.dims[v] {
            for c in 0..cover.cover.dims[v] {
                let col = offsets[v] + (m.dims[v] + r) * cover.cover.dims[v] + c;
                system.set(row, col, field.one());
                rhs[row] = cover.surjection.blocks[v].get(r, c);
                row += 1;
            }
        }
    }
    let sigma_vec = solve(&system, &rhs)
        .expect("shape")
        .expect("the cover lifts through the double module");
    let mut sigma_blocks = Vec::with_capacity(nv);
    for v in 0..nv {
        let mut b = FieldMatrix::zero(field, e.dims[v], cover.cover.dims[v]);
        for r in 0..e.dims[v] {
            for c in 0..cover.cover.dims[v] {
                b.set(r, c, sigma_vec[offsets[v] + r * cover.cover.dims[v] + c]);
            }
        }
        sigma_blocks.push(b);
    }
    let sigma = ModuleMap { blocks: sigma_blocks };
    // restrict to the syzygy and project onto the first (submodule) block
    let restricted = sigma.compose(&cover.kernel_inclusion);
    let f_blocks: Vec<FieldMatrix> = (0..nv)
        .map(|v| {
            let mut b = FieldMatrix::zero(field, m.dims[v], cover.syzygy.dims[v]);
            for r in 0..m.dims[v] {
                for c in 0..cover.syzygy.dims[v] {
                    b.set(r, c, restricted.blocks[v].get(r, c));
                }
            }
            b
        })
        .collect();
    ext.class_of(&ModuleMap { blocks: f_blocks })
}

/// The largest order `<= max_order` reachable by iterated one-order
/// extensions starting from the first-order lift in the given Ext direction,
/// maximizing over the correction choices at every step.
pub fn lift_profile(
    alg: &Algebra,
    m: &Representation,
    direction: &[FieldElement],
    max_order: usize,
) -> Result<usize, DeformError> {
    assert!(max_order >= 1);
    let field = alg.field();
    let ext = ext1(alg, m, m);
    if direction.len() != ext.dim() {
        return Err(DeformError::Precondition(format!(
            "direction has {} coordinates but Ext^1 is {}-dimensional",
            direction.len(),
            ext.dim()
        )));
    }
    if direction.iter().all(|c| c.0 == 0) {
        // the constant lift extends to every order
        return Ok(max_order);
    }
    if max_order == 1 {
        return Ok(1);
    }
    let translation = direction_translation(alg, m, &ext)?;
    let fo = &translation.fo;
    // direction coordinates in the first-order complement basis
    let mut dir_coords = vec![field.zero(); direction.len()];
    for (i, _) in dir_coords.clone().iter().enumerate() {
        let mut acc = field.zero();
        for (j, &c) in direction.iter().enumerate() {
            acc = field.add(acc, field.mul(translation.from_ext.get(i, j), c));
        }
        dir_coords[i] = acc;
    }
    let x = fo.direction_vector(&dir_coords, field);
    let start = apply_correction(&TruncatedLift::constant(m, 1), fo, &x);
    debug_assert!(start.validate(alg));

    let mut frontier = vec![start];
    let mut order = 2usize;
    while order < max_order {
        let mut next = Vec::new();
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        for lift in &frontier {
            for extended in extend_all(alg, lift, fo, 1 << 16)? {
                if seen.insert(extended.key()) {
                    next.push(extended);
                }
            }
            if next.len() > (1 << 16) {
                return Err(DeformError::SearchExhausted(format!(
                    "lift frontier exceeded 2^16 at order {order}"
                )));
            }
        }
        if next.is_empty() {
            return Ok(order);
        }
        frontier = next;
        order += 1;
    }
    Ok(max_order)
}

/// The unique self-extension module of a module with one-dimensional
/// self-Ext, together with its `k[t]/(t^2)` structure.
#[derive(Clone, Debug)]
pub struct Ubar {
    pub rep: Representation,
    /// `t` acts as `ι ∘ π`: square-zero with rank `dim M` at each lift.
    pub t_action: ModuleMap,
}

/// Builds the self-extension `0 → M → Ū → M → 0` along the nonzero class,
/// verifying uniqueness by comparing the projective-cover pushout with the
/// dual (injective-envelope) route.
pub fn build_ubar(alg: &Algebra, m: &Representation) -> Result<Ubar, DeformError> {
    let field = alg.field();
    let d1 = ext_dim(alg, m, m, 1);
    if d1 != 1 {
        return Err(DeformError::Precondition(format!(
            "build_ubar expects dim Ext^1(M, M) = 1, found {d1}"
        )));
    }
    let ext = ext1(alg, m, m);
    let e = extension_module(alg, m, m, &ext, &[field.one()]);
    let opts = IsoOptions::default();
    // nonsplit: the nonzero class cannot give the direct sum
    let sum = m.direct_sum(m);
    match iso_test(alg, &e.total, &sum, &opts) {
        Iso::No => {}
        Iso::Yes => {
            return Err(DeformError::RoutesDisagree(
                "the nonzero self-extension split".into(),
            ))
        }
        Iso::Indeterminate => {
            return Err(DeformError::Module(ModuleError::Indeterminate(
                "split check inconclusive".into(),
            )))
        }
    }
    // uniqueness: the dual route yields an isomorphic module
    let dual = extension_module_dual_route(alg, m, m, &[field.one()]);
    match iso_test(alg, &e.total, &dual, &opts) {
        Iso::Yes => {}
        Iso::No => {
            return Err(DeformError::RoutesDisagree(
                "pushout and dual-route self-extensions are not isomorphic".into(),
            ))
        }
        Iso::Indeterminate => {
            return Err(DeformError::Module(ModuleError::Indeterminate(
                "uniqueness check inconclusive".into(),
            )))
        }
    }
    let t_action = e.inclusion.compose(&e.projection);
    // k[t]/(t^2)-freeness: t^2 = 0 and rank t = dim M
    debug_assert!(t_action.compose(&t_action).is_zero());
    let rank: usize = t_action.blocks.iter().map(|b| b.rank()).sum();
    if rank != m.total_dim() {
        return Err(DeformError::RoutesDisagree(
            "t-action rank does not match a free k[t]/(t^2) structure".into(),
        ));
    }
    Ok(Ubar { rep: e.total, t_action })
}

// ---------------------------------------------------------------------------
// symbolic deformation rings
// ---------------------------------------------------------------------------

/// Declared per-module facts the computation cannot derive: membership of
/// the height-1 character family, the 3-tube correspondence, and liftability
/// over the Witt vectors.  All three rest on character-theoretic input.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UdrFlags {
    pub height1: Option<bool>,
    pub tube_correspondence: Option<bool>,
    pub lifts_over_w: Option<bool>,
}

/// Computed facts feeding the ring classifier.
#[derive(Clone, Debug)]
pub struct UdrInput {
    pub d1: usize,
    pub tau3: Tau3,
    /// the quiver has exactly two vertices (the `t^2 - 2μt` branch)
    pub two_vertex_quiver: bool,
    pub n: Option<i64>,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum RingBase {
    WittVectors,
    ResidueField,
}

/// A symbolic presentation of the output ring over `W` or `k`, with opaque
/// symbols `mu` (a unit of `W`) and `q_n(t)` (monic of degree `2^{n-2}-1`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingPresentation {
    pub base: RingBase,
    pub variables: Vec<String>,
    pub relators: Vec<String>,
    pub q_degree: Option<usize>,
}

impl RingPresentation {
    fn plain(base: RingBase) -> RingPresentation {
        RingPresentation { base, variables: Vec::new(), relators: Vec::new(), q_degree: None }
    }

    /// Canonical text, e.g. `W[[t]]/(t^2-2*mu*t)`.
    pub fn render(&self) -> String {
        let base = match self.base {
            RingBase::WittVectors => "W",
            RingBase::ResidueField => "k",
        };
        if self.variables.is_empty() {
            return base.to_string();
        }
        format!("{base}[[{}]]/({})", self.variables.join(","), self.relators.join(","))
    }
}

impl core::fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.render())
    }
}

/// The deformation-ring table at `p = 2`: dispatch on `d1`, the 3-tube
/// status, and the declared flags.
pub fn classify_udr(flags: &UdrFlags, input: &UdrInput) -> Result<RingPresentation, DeformError> {
    match input.d1 {
        2 => Ok(RingPresentation {
            base: RingBase::WittVectors,
            variables: vec!["t1".into(), "t2".into()],
            relators: vec!["t1^2-2*t1".into(), "t2^2-2*t2".into()],
            q_degree: None,
        }),
        0 => match input.tau3 {
            Tau3::Yes => Ok(RingPresentation::plain(RingBase::ResidueField)),
            Tau3::Indeterminate => Err(DeformError::MissingMetadata(
                "3-tube membership is undetermined for this module".into(),
            )),
            Tau3::No | Tau3::NotApplicable => match flags.lifts_over_w {
                Some(true) => Ok(RingPresentation::plain(RingBase::WittVectors)),
                Some(false) => Err(DeformError::InconsistentMetadata(
                    "a rigid module outside the 3-tubes always lifts over W in the classified cases"
                        .into(),
                )),
                None => Err(DeformError::MissingMetadata("lifts_over_W".into())),
            },
        },
        1 => match flags.height1 {
            None => Err(DeformError::MissingMetadata("height1".into())),
            Some(true) => {
                let n = input.n.ok_or_else(|| {
                    DeformError::MissingMetadata("size parameter n for q_n(t)".into())
                })?;
                if n < 4 {
                    return Err(DeformError::OutOfScope(format!(
                        "the q_n branch needs n >= 4, got {n}"
                    )));
                }
                let degree = (1usize << (n - 2)) - 1;
                let q = format!("q_{n}(t)");
                match flags.tube_correspondence {
                    None => Err(DeformError::MissingMetadata("tube_correspondence".into())),
                    Some(true) => Ok(RingPresentation {
                        base: RingBase::WittVectors,
                        variables: vec!["t".into()],
                        relators: vec![format!("t*{q}"), format!("2*{q}")],
                        q_degree: Some(degree),
                    }),
                    Some(false) => Ok(RingPresentation {
                        base: RingBase::WittVectors,
                        variables: vec!["t".into()],
                        relators: vec![q],
                        q_degree: Some(degree),
                    }),
                }
            }
            Some(false) => {
                if input.two_vertex_quiver {
                    Ok(RingPresentation {
                        base: RingBase::WittVectors,
                        variables: vec!["t".into()],
                        relators: vec!["t^2-2*mu*t".into()],
                        q_degree: None,
                    })
                } else {
                    Ok(RingPresentation {
                        base: RingBase::WittVectors,
                        variables: vec!["t".into()],
                        relators: vec!["t^2".into(), "2*t".into()],
                        q_degree: None,
                    })
                }
            }
        },
        other => Err(DeformError::OutOfScope(format!(
            "no classified case has dim Ext^1 = {other}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{classify, EnumerateOptions};
    use crate::presentations::{instantiate_family, FamilyId};
    use alloc::collections::BTreeMap as Map;

    fn klein_algebra() -> Algebra {
        let p = instantiate_family(&FamilyId::KleinFourLocal, 2, &Map::new()).unwrap();
        Algebra::build(&p).unwrap()
    }

    fn sd2a1_algebra(n: i64, c: u16) -> Algebra {
        let mut scalars = Map::new();
        scalars.insert("c".to_string(), c);
        let p = instantiate_family(&FamilyId::Sd2a1, n, &scalars).unwrap();
        Algebra::build(&p).unwrap()
    }

    fn v(alg: &Algebra, label: &str) -> crate::presentations::VertexId {
        alg.quiver().vertex_id(label).unwrap()
    }

    fn one() -> Vec<FieldElement> {
        vec![crate::linalg::Field::GF2.one()]
    }

    #[test]
    fn tangent_dimensions_match_the_lists() {
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0")).clone();
        let s1 = alg.simple(v(&alg, "1")).clone();
        assert_eq!(tangent_dim(&alg, &s0).unwrap(), 1);
        assert_eq!(tangent_dim(&alg, &s1).unwrap(), 0);
        let klein = klein_algebra();
        let s = klein.simple(crate::presentations::VertexId(0)).clone();
        assert_eq!(tangent_dim(&klein, &s).unwrap(), 2);
    }

    #[test]
    fn tangent_dim_requires_end_k() {
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0")).clone();
        let sum = s0.direct_sum(&s0);
        assert!(matches!(tangent_dim(&alg, &sum), Err(DeformError::Precondition(_))));
    }

    #[test]
    fn tangent_routes_agree_on_every_classified_module() {
        for alg in [klein_algebra(), sd2a1_algebra(4, 0), sd2a1_algebra(4, 1)] {
            let (modules, _) = classify(&alg, 4, &EnumerateOptions::default()).unwrap();
            for m in &modules {
                tangent_dim(&alg, &m.rep).expect("routes agree");
            }
        }
    }

    #[test]
    fn constant_lift_extends_to_every_order() {
        let alg = sd2a1_algebra(4, 0);
        let s1 = alg.simple(v(&alg, "1")).clone();
        let mut lift = TruncatedLift::constant(&s1, 1);
        for expected_order in 2..=6 {
            match extend_lift(&alg, &lift) {
                Extended::Lift(next) => {
                    assert_eq!(next.order, expected_order);
                    assert_eq!(next.truncate(lift.order), lift);
                    assert!(next.validate(&alg));
                    lift = next;
                }
                Extended::Obstructed { .. } => panic!("constant lift obstructed"),
            }
        }
    }

    #[test]
    fn s0_direction_obstructs_at_order_three() {
        // over k[t]/(t^3) the loop coefficient satisfies a^2 = 0, killing
        // the first-order term in characteristic 2
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0")).clone();
        assert_eq!(lift_profile(&alg, &s0, &one(), 5).unwrap(), 2);
    }

    #[test]
    fn zero_direction_reaches_max_order() {
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0")).clone();
        assert_eq!(lift_profile(&alg, &s0, &[alg.field().zero()], 5).unwrap(), 5);
    }

    #[test]
    fn klein_nontrivial_directions_obstruct_at_order_three() {
        let alg = klein_algebra();
        let s = alg.simple(crate::presentations::VertexId(0)).clone();
        let f = alg.field();
        for (a, b) in [(1u16, 0u16), (0, 1), (1, 1)] {
            let dir = vec![f.element(a).unwrap(), f.element(b).unwrap()];
            assert_eq!(lift_profile(&alg, &s, &dir, 5).unwrap(), 2, "direction ({a},{b})");
        }
    }

    #[test]
    fn e2_modules_have_profile_two() {
        let alg = sd2a1_algebra(4, 0);
        let v0 = v(&alg, "0");
        let v1 = v(&alg, "1");
        for labels in [vec![v0, v1], vec![v1, v0]] {
            let m = crate::repmod::uniserial(&alg, &labels).unwrap();
            assert_eq!(lift_profile(&alg, &m, &one(), 5).unwrap(), 2);
        }
    }

    #[test]
    fn height_one_classes_have_profile_two_pow_n_minus_two_minus_one() {
        // the length-3 and length-4 uniserials with repeated socle factor
        // reach exactly order 2^(n-2)-1: their mod-2 versal ring is
        // k[t]/(t^(2^(n-2)-1)), the shadow of the q_n ring form.  The value
        // scales with n and is independent of the scalar c.
        for (n, c, expected) in [(4, 0, 3), (4, 1, 3), (5, 0, 7)] {
            let alg = sd2a1_algebra(n, c);
            let v0 = v(&alg, "0");
            let v1 = v(&alg, "1");
            for labels in [vec![v0, v0, v1], vec![v1, v0, v0]] {
                let m = crate::repmod::uniserial(&alg, &labels).unwrap();
                assert_eq!(
                    lift_profile(&alg, &m, &one(), expected + 3).unwrap(),
                    expected,
                    "n={n} c={c} labels={labels:?}"
                );
            }
        }
    }

    #[test]
    fn ubar_of_s0_is_the_jordan_block() {
        let alg = sd2a1_algebra(4, 0);
        let s0 = alg.simple(v(&alg, "0")).clone();
        let ubar = build_ubar(&alg, &s0).unwrap();
        assert_eq!(ubar.rep.dims[v(&alg, "0").0], 2);
        assert_eq!(ubar.rep.dims[v(&alg, "1").0], 0);
        let s00 = crate::repmod::uniserial(&alg, &[v(&alg, "0"), v(&alg, "0")]).unwrap();
        assert_eq!(iso_test(&alg, &ubar.rep, &s00, &IsoOptions::default()), Iso::Yes);
        assert!(ubar.t_action.compose(&ubar.t_action).is_zero());
    }

    #[test]
    fn ubar_of_s10_has_dimension_four_and_simple_socle() {
        use crate::repmod::socle_multiset;
        let alg = sd2a1_algebra(4, 0);
        let m = crate::repmod::uniserial(&alg, &[v(&alg, "1"), v(&alg, "0")]).unwrap();
        let ubar = build_ubar(&alg, &m).unwrap();
        assert_eq!(ubar.rep.total_dim(), 4);
        let soc = socle_multiset(&alg, &ubar.rep);
        let mut expected = vec![0usize; 2];
        expected[v(&alg, "0").0] = 1;
        assert_eq!(soc, expected, "socle of Ubar is the single S_0");
        // the key vanishing used for the mod-2 ring: Ext^1(Ubar, M) = 0
        assert_eq!(ext_dim(&alg, &ubar.rep, &m, 1), 0);
    }

    #[test]
    fn ubar_rejects_rigid_modules() {
        let alg = sd2a1_algebra(4, 0);
        let s1 = alg.simple(v(&alg, "1")).clone();
        assert!(matches!(build_ubar(&alg, &s1), Err(DeformError::Precondition(_))));
    }

    #[test]
    fn ubar_admits_no_further_extensions_by_the_base() {
        // the vanishing Ext^1(Ubar, V) = 0 is what pins the mod-2 ring of
        // the d1 = 1 non-height-1 classes at k[t]/(t^2)
        let alg = sd2a1_algebra(4, 0);
        let v0 = v(&alg, "0");
        let v1 = v(&alg, "1");
        for labels in [vec![v0], vec![v0, v1], vec![v1, v0]] {
            let m = crate::repmod::uniserial(&alg, &labels).unwrap();
            let ubar = build_ubar(&alg, &m).unwrap();
            assert_eq!(ext_dim(&alg, &ubar.rep, &m, 1), 0, "{labels:?}");
        }
    }

    #[test]
    fn classified_modules_have_stable_end_one() {
        // none of the classified modules is projective, so nothing of the
        // identity can factor through a projective
        for alg in [klein_algebra(), sd2a1_algebra(4, 0)] {
            let (modules, _) = classify(&alg, 4, &EnumerateOptions::default()).unwrap();
            for m in &modules {
                assert_eq!(crate::homology::stable_end_dim(&alg, &m.rep), 1);
            }
        }
    }

    #[test]
    fn ring_table_renders_the_expected_forms() {
        let base = UdrInput { d1: 1, tau3: Tau3::NotApplicable, two_vertex_quiver: true, n: Some(4) };
        // d1 = 2
        let r = classify_udr(
            &UdrFlags::default(),
            &UdrInput { d1: 2, tau3: Tau3::NotApplicable, two_vertex_quiver: false, n: Some(2) },
        )
        .unwrap();
        assert_eq!(r.render(), "W[[t1,t2]]/(t1^2-2*t1,t2^2-2*t2)");
        // d1 = 0, in a 3-tube
        let r = classify_udr(
            &UdrFlags::default(),
            &UdrInput { d1: 0, tau3: Tau3::Yes, two_vertex_quiver: true, n: Some(4) },
        )
        .unwrap();
        assert_eq!(r.render(), "k");
        // d1 = 0, no tube, lifts over W
        let r = classify_udr(
            &UdrFlags { lifts_over_w: Some(true), ..Default::default() },
            &UdrInput { d1: 0, tau3: Tau3::No, two_vertex_quiver: true, n: Some(4) },
        )
        .unwrap();
        assert_eq!(r.render(), "W");
        // d1 = 1, not height 1, two-vertex quiver
        let r = classify_udr(&UdrFlags { height1: Some(false), ..Default::default() }, &base)
            .unwrap();
        assert_eq!(r.render(), "W[[t]]/(t^2-2*mu*t)");
        // d1 = 1, not height 1, bigger quiver
        let r = classify_udr(
            &UdrFlags { height1: Some(false), ..Default::default() },
            &UdrInput { two_vertex_quiver: false, ..base.clone() },
        )
        .unwrap();
        assert_eq!(r.render(), "W[[t]]/(t^2,2*t)");
        // d1 = 1, height 1, no tube correspondence
        let r = classify_udr(
            &UdrFlags { height1: Some(true), tube_correspondence: Some(false), ..Default::default() },
            &base,
        )
        .unwrap();
        assert_eq!(r.render(), "W[[t]]/(q_4(t))");
        assert_eq!(r.q_degree, Some(3));
        // d1 = 1, height 1, with tube correspondence
        let r = classify_udr(
            &UdrFlags { height1: Some(true), tube_correspondence: Some(true), ..Default::default() },
            &base,
        )
        .unwrap();
        assert_eq!(r.render(), "W[[t]]/(t*q_4(t),2*q_4(t))");
    }

    #[test]
    fn ring_table_missing_flags_error() {
        let input = UdrInput { d1: 1, tau3: Tau3::NotApplicable, two_vertex_quiver: true, n: Some(4) };
        assert!(matches!(
            classify_udr(&UdrFlags::default(), &input),
            Err(DeformError::MissingMetadata(_))
        ));
        let rigid = UdrInput { d1: 0, tau3: Tau3::No, two_vertex_quiver: true, n: Some(4) };
        assert!(matches!(
            classify_udr(&UdrFlags::default(), &rigid),
            Err(DeformError::MissingMetadata(_))
        ));
        assert!(matches!(
            classify_udr(&UdrFlags { lifts_over_w: Some(false), ..Default::default() }, &rigid),
            Err(DeformError::InconsistentMetadata(_))
        ));
    }
}
