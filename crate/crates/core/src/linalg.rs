//! Exact dense linear algebra over small finite fields `GF(p^e)`.
//!
//! `GF(2)` is the workhorse; extensions `GF(2^e)` for `e <= 4` are supported
//! through a fixed table of Conway-style irreducible polynomials so that
//! scalar parameters outside the prime field (the `c` of the two-vertex
//! semidihedral family) can be handled.  Matrices are dense and small — a
//! hundred or so on a side at most — so there is no sparse format and no
//! bit packing; plain byte rows optimize well enough.
//!
//! All results are deterministic: `rref` scans columns left to right,
//! `solve` sets non-pivot variables to zero, and `kernel_basis` orders its
//! columns by free column index.  Downstream canonical forms rely on this.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Irreducible polynomials over GF(2) for extension degrees 2..=4,
/// encoded with the leading bit included (x^2+x+1, x^3+x+1, x^4+x+1).
const GF2_REDUCTION: [u16; 5] = [0, 0, 0b111, 0b1011, 0b1_0011];

/// A small finite field `GF(p^e)`.
///
/// Elements are encoded in a `FieldElement` as an integer `< p^e`: for prime
/// fields the residue itself, for `GF(2^e)` the bit pattern of the polynomial
/// representative.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Field {
    p: u16,
    e: u8,
    q: u16,
    reduction: u16,
}

/// An element of a [`Field`], stored as its integer encoding.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u8);

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FieldError {
    NotPrime(u16),
    UnsupportedExtension { p: u16, e: u8 },
    ValueOutOfRange { value: u16, q: u16 },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not a supported prime"),
            FieldError::UnsupportedExtension { p, e } => {
                write!(f, "extension GF({p}^{e}) is not supported (e>1 needs p=2, e<=4)")
            }
            FieldError::ValueOutOfRange { value, q } => {
                write!(f, "element encoding {value} out of range for field of order {q}")
            }
        }
    }
}

fn is_prime(n: u16) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u16;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// The default field, GF(2).
    pub const GF2: Field = Field { p: 2, e: 1, q: 2, reduction: 0 };

    pub fn new(p: u16, e: u8) -> Result<Field, FieldError> {
        if !is_prime(p) || p > 251 {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 || (e > 1 && p != 2) || e > 4 {
            return Err(FieldError::UnsupportedExtension { p, e });
        }
        let mut q: u32 = 1;
        for _ in 0..e {
            q *= p as u32;
        }
        if q > 256 {
            return Err(FieldError::UnsupportedExtension { p, e });
        }
        let reduction = if p == 2 && e > 1 { GF2_REDUCTION[e as usize] } else { 0 };
        Ok(Field { p, e, q: q as u16, reduction })
    }

    /// Parses a field order `q = p^e`, e.g. 2, 4, 8, 16 or an odd prime.
    pub fn from_order(q: u32) -> Result<Field, FieldError> {
        if q >= 2 && q <= 16 && q.is_power_of_two() {
            return Field::new(2, q.trailing_zeros() as u8);
        }
        if q <= 251 {
            return Field::new(q as u16, 1);
        }
        Err(FieldError::NotPrime(q.min(u16::MAX as u32) as u16))
    }

    pub fn characteristic(&self) -> u16 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.e
    }

    pub fn order(&self) -> u16 {
        self.q
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Validates an integer encoding as an element of this field.
    pub fn element(&self, value: u16) -> Result<FieldElement, FieldError> {
        if value < self.q {
            Ok(FieldElement(value as u8))
        } else {
            Err(FieldError::ValueOutOfRange { value, q: self.q })
        }
    }

    /// The image of an integer under `Z -> GF(p^e)` (reduction mod p into the
    /// prime subfield).
    pub fn from_int(&self, n: i64) -> FieldElement {
        let r = n.rem_euclid(self.p as i64) as u8;
        FieldElement(r)
    }

    /// Iterator over all field elements (0 first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|v| FieldElement(v as u8))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            FieldElement(a.0 ^ b.0)
        } else {
            FieldElement(((a.0 as u16 + b.0 as u16) % self.p) as u8)
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 || a.0 == 0 {
            a
        } else {
            FieldElement((self.p - a.0 as u16) as u8)
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.e == 1 {
            FieldElement(((a.0 as u32 * b.0 as u32) % self.p as u32) as u8)
        } else {
            // carry-less multiply, then reduce by the table polynomial
            let mut acc: u32 = 0;
            let mut x = a.0 as u32;
            let mut y = b.0 as u32;
            while y != 0 {
                if y & 1 != 0 {
                    acc ^= x;
                }
                x <<= 1;
                y >>= 1;
            }
            let e = self.e as u32;
            let mut deg = 2 * e;
            while deg > e {
                deg -= 1;
                if acc & (1 << deg) != 0 {
                    acc ^= (self.reduction as u32) << (deg - e);
                }
            }
            FieldElement(acc as u8)
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(a.0 != 0, "inverse of zero");
        // a^(q-2) by square and multiply; q <= 256 so this is instant
        let mut result = self.one();
        let mut base = a;
        let mut exp = self.q - 2;
        while exp > 0 {
            if exp & 1 != 0 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }

    pub fn is_zero(&self, a: FieldElement) -> bool {
        a.0 == 0
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.e)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinalgError {
    DimensionMismatch { rows: usize, len: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::DimensionMismatch { rows, len } => {
                write!(f, "matrix has {rows} rows but right-hand side has length {len}")
            }
        }
    }
}

/// A dense row-major matrix over a fixed [`Field`].
///
/// Zero-row and zero-column matrices are legal everywhere; they show up
/// constantly as arrow matrices of modules supported on few vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> FieldMatrix {
        FieldMatrix { field, rows, cols, data: vec![FieldElement(0); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> FieldMatrix {
        let mut m = FieldMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<FieldElement>]) -> FieldMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = FieldMatrix::zero(field, rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Builds a matrix from integer entries (reduced into the prime subfield).
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> FieldMatrix {
        let converted: Vec<Vec<FieldElement>> =
            rows.iter().map(|r| r.iter().map(|&n| field.from_int(n)).collect()).collect();
        FieldMatrix::from_rows(field, &converted)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.0 == 0)
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = self.field.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = self.field.sub(*a, b);
        }
        out
    }

    pub fn scale(&self, c: FieldElement) -> FieldMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.field.mul(*a, c);
        }
        out
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let f = self.field;
        let mut out = FieldMatrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.0 == 0 {
                    continue;
                }
                let dst = i * out.cols;
                let src = k * other.cols;
                if f.p == 2 && f.e == 1 {
                    for j in 0..other.cols {
                        out.data[dst + j].0 ^= other.data[src + j].0;
                    }
                } else {
                    for j in 0..other.cols {
                        let t = f.mul(a, other.data[src + j]);
                        out.data[dst + j] = f.add(out.data[dst + j], t);
                    }
                }
            }
        }
        out
    }

    /// `self^k` for square matrices; `k = 0` gives the identity.
    pub fn pow(&self, k: usize) -> FieldMatrix {
        assert_eq!(self.rows, self.cols);
        let mut out = FieldMatrix::identity(self.field, self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.cols);
        let mut m = FieldMatrix::zero(self.field, self.rows + other.rows, self.cols);
        m.data[..self.data.len()].copy_from_slice(&self.data);
        m.data[self.data.len()..].copy_from_slice(&other.data);
        m
    }

    /// Places `self` left of `other`.
    pub fn hstack(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = FieldMatrix::zero(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Inverse of a square invertible matrix; `None` if singular.
    pub fn inverse(&self) -> Option<FieldMatrix> {
        assert_eq!(self.rows, self.cols);
        let aug = self.hstack(&FieldMatrix::identity(self.field, self.rows));
        let r = rref(&aug);
        if r.rank < self.rows {
            return None;
        }
        let mut inv = FieldMatrix::zero(self.field, self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                inv.set(i, j, r.matrix.get(i, self.rows + j));
            }
        }
        Some(inv)
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form. Row space is preserved; pivot columns are found
/// scanning left to right, so the result is canonical for a given row space.
pub fn rref(m: &FieldMatrix) -> Rref {
    let f = m.field();
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let mut pivot_row = None;
        for i in r..a.rows {
            if a.get(i, c).0 != 0 {
                pivot_row = Some(i);
                break;
            }
        }
        let Some(pr) = pivot_row else { continue };
        if pr != r {
            for j in 0..a.cols {
                let tmp = a.get(r, j);
                a.set(r, j, a.get(pr, j));
                a.set(pr, j, tmp);
            }
        }
        let pv = a.get(r, c);
        if pv != f.one() {
            let inv = f.inv(pv);
            for j in 0..a.cols {
                a.set(r, j, f.mul(a.get(r, j), inv));
            }
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c);
            if factor.0 == 0 {
                continue;
            }
            if f.p == 2 && f.e == 1 {
                let (ri, rr) = (i * a.cols, r * a.cols);
                for j in 0..a.cols {
                    a.data[ri + j].0 ^= a.data[rr + j].0;
                }
            } else {
                for j in 0..a.cols {
                    let t = f.mul(factor, a.get(r, j));
                    a.set(i, j, f.sub(a.get(i, j), t));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, rank: r, pivots }
}

/// A basis of the right null space, returned as the columns of a matrix with
/// `cols(m) - rank(m)` columns.  Each free column contributes a basis vector
/// with a 1 in its own position; columns are ordered by free column index.
pub fn kernel_basis(m: &FieldMatrix) -> FieldMatrix {
    let f = m.field();
    let r = rref(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    let mut basis = FieldMatrix::zero(f, n, free.len());
    for (k, &fc) in free.iter().enumerate() {
        basis.set(fc, k, f.one());
        for (i, &pc) in r.pivots.iter().enumerate() {
            basis.set(pc, k, f.neg(r.matrix.get(i, fc)));
        }
    }
    basis
}

/// Solves `a x = b` for a column vector `b`.
///
/// Returns `Ok(None)` exactly when `b` is outside the column space, and a
/// dimension mismatch is an error distinct from unsolvability.  When a
/// solution exists the non-pivot variables are set to zero, so the answer is
/// deterministic.
pub fn solve(a: &FieldMatrix, b: &[FieldElement]) -> Result<Option<Vec<FieldElement>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch { rows: a.rows(), len: b.len() });
    }
    let f = a.field();
    let mut bm = FieldMatrix::zero(f, b.len(), 1);
    for (i, &v) in b.iter().enumerate() {
        bm.set(i, 0, v);
    }
    let aug = a.hstack(&bm);
    let r = rref(&aug);
    if r.pivots.last() == Some(&a.cols()) {
        return Ok(None);
    }
    let mut x = vec![f.zero(); a.cols()];
    for (i, &pc) in r.pivots.iter().enumerate() {
        x[pc] = r.matrix.get(i, a.cols());
    }
    Ok(Some(x))
}

/// Solves `a X = B` column by column; `None` if any column is unsolvable.
pub fn solve_matrix(a: &FieldMatrix, b: &FieldMatrix) -> Option<FieldMatrix> {
    assert_eq!(a.rows(), b.rows());
    let f = a.field();
    let aug = a.hstack(b);
    let r = rref(&aug);
    if r.pivots.iter().any(|&p| p >= a.cols()) {
        return None;
    }
    let mut x = FieldMatrix::zero(f, a.cols(), b.cols());
    for (i, &pc) in r.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(pc, j, r.matrix.get(i, a.cols() + j));
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Field {
        Field::GF2
    }

    #[test]
    fn field_axioms_small_fields() {
        for field in [Field::GF2, Field::new(2, 2).unwrap(), Field::new(2, 4).unwrap(), Field::new(3, 1).unwrap()] {
            let els: Vec<_> = field.elements().collect();
            for &a in &els {
                assert_eq!(field.add(a, field.neg(a)), field.zero());
                assert_eq!(field.mul(a, field.one()), a);
                if a != field.zero() {
                    assert_eq!(field.mul(a, field.inv(a)), field.one());
                }
                for &b in &els {
                    assert_eq!(field.add(a, b), field.add(b, a));
                    assert_eq!(field.mul(a, b), field.mul(b, a));
                    for &c in &els {
                        let lhs = field.mul(a, field.add(b, c));
                        let rhs = field.add(field.mul(a, b), field.mul(a, c));
                        assert_eq!(lhs, rhs);
                        assert_eq!(field.mul(field.mul(a, b), c), field.mul(a, field.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_two() {
        let f = Field::new(2, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, a), f.zero());
        }
    }

    #[test]
    fn rref_zero_matrix() {
        let m = FieldMatrix::zero(gf2(), 3, 3);
        let r = rref(&m);
        assert!(r.matrix.is_zero());
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_identity() {
        let m = FieldMatrix::identity(gf2(), 2);
        let r = rref(&m);
        assert_eq!(r.matrix, m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one_gf2() {
        // [[1,1],[1,1]] over GF(2): second row cancels against the first.
        let m = FieldMatrix::from_ints(gf2(), &[&[1, 1], &[1, 1]]);
        let r = rref(&m);
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = FieldMatrix::identity(gf2(), 4);
        assert_eq!(kernel_basis(&m).cols(), 0);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let m = FieldMatrix::zero(gf2(), 2, 3);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
    }

    #[test]
    fn kernel_of_sum_functional() {
        // [[1,1]] over GF(2): checked against brute-force enumeration of GF(2)^2.
        let f = gf2();
        let m = FieldMatrix::from_ints(f, &[&[1, 1]]);
        let mut solutions = Vec::new();
        for x0 in 0..2i64 {
            for x1 in 0..2i64 {
                if (x0 + x1) % 2 == 0 && (x0, x1) != (0, 0) {
                    solutions.push((x0, x1));
                }
            }
        }
        assert_eq!(solutions, vec![(1, 1)]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!((k.get(0, 0).0, k.get(1, 0).0), (1, 1));
    }

    #[test]
    fn solve_identity_and_zero() {
        let f = gf2();
        let id = FieldMatrix::identity(f, 3);
        let b = [f.one(), f.zero(), f.one()];
        assert_eq!(solve(&id, &b).unwrap().unwrap(), b.to_vec());

        let z = FieldMatrix::zero(f, 2, 2);
        let b = [f.one(), f.zero()];
        assert_eq!(solve(&z, &b).unwrap(), None);
    }

    #[test]
    fn solve_free_variable_convention() {
        // Free variables are pinned to zero, so the answer is (1,0), not (0,1).
        // Enumerating all of GF(2)^2 confirms both solve the system.
        let f = gf2();
        let a = FieldMatrix::from_ints(f, &[&[1, 1], &[0, 0]]);
        let b = [f.one(), f.zero()];
        let mut all = Vec::new();
        for x0 in 0..2u8 {
            for x1 in 0..2u8 {
                if (x0 ^ x1) == 1 {
                    all.push((x0, x1));
                }
            }
        }
        assert_eq!(all.len(), 2);
        let x = solve(&a, &b).unwrap().unwrap();
        assert_eq!((x[0].0, x[1].0), (1, 0));
    }

    #[test]
    fn solve_dimension_mismatch_is_an_error() {
        let f = gf2();
        let a = FieldMatrix::identity(f, 2);
        let b = [f.one()];
        assert!(matches!(solve(&a, &b), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn empty_shapes() {
        let f = gf2();
        let a = FieldMatrix::zero(f, 0, 3);
        let b = FieldMatrix::zero(f, 3, 2);
        let c = a.mul(&b);
        assert_eq!((c.rows(), c.cols()), (0, 2));
        assert_eq!(kernel_basis(&a).cols(), 3);
        let d = FieldMatrix::zero(f, 2, 0);
        assert_eq!(d.rank(), 0);
        assert_eq!(kernel_basis(&d).cols(), 0);
        assert!(FieldMatrix::zero(f, 0, 0).is_invertible());
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::new(2, 2).unwrap();
        let m = FieldMatrix::from_ints(f, &[&[1, 1], &[0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FieldMatrix::identity(f, 2));
    }
}
