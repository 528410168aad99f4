//! Property tests for the linear algebra substrate and the presentation
//! printer.

use proptest::prelude::*;

use blockforge_core::linalg::{kernel_basis, rref, solve, Field, FieldElement, FieldMatrix};
use blockforge_core::presentations::{
    family_source, parse_presentation, print_presentation, FamilyId,
};

fn arb_matrix(q: u16) -> impl Strategy<Value = FieldMatrix> {
    (0usize..=8, 0usize..=8).prop_flat_map(move |(rows, cols)| {
        proptest::collection::vec(0..q, rows * cols).prop_map(move |entries| {
            let field = Field::from_order(q as u32).unwrap();
            let mut m = FieldMatrix::zero(field, rows, cols);
            for (i, v) in entries.into_iter().enumerate() {
                m.set(i / cols.max(1), i % cols.max(1), field.element(v).unwrap());
            }
            m
        })
    })
}

proptest! {
    #[test]
    fn rank_nullity_gf2(m in arb_matrix(2)) {
        let r = rref(&m);
        let k = kernel_basis(&m);
        prop_assert_eq!(r.rank + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn rank_nullity_gf4(m in arb_matrix(4)) {
        let r = rref(&m);
        let k = kernel_basis(&m);
        prop_assert_eq!(r.rank + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn rref_is_idempotent(m in arb_matrix(2)) {
        let once = rref(&m);
        let twice = rref(&once.matrix);
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn solve_solutions_are_exact(m in arb_matrix(2), seed in proptest::collection::vec(0u16..2, 0..8)) {
        // build b in the column space so a solution must exist, then check
        // the returned x reproduces it exactly
        let field = m.field();
        let mut x0 = vec![field.zero(); m.cols()];
        for (i, v) in seed.iter().enumerate() {
            if i < x0.len() {
                x0[i] = field.element(*v).unwrap();
            }
        }
        let mut b = vec![field.zero(); m.rows()];
        for r in 0..m.rows() {
            let mut acc = field.zero();
            for c in 0..m.cols() {
                acc = field.add(acc, field.mul(m.get(r, c), x0[c]));
            }
            b[r] = acc;
        }
        let x = solve(&m, &b).unwrap().expect("b lies in the column space");
        // a x = b exactly, no tolerance
        for r in 0..m.rows() {
            let mut acc = field.zero();
            for c in 0..m.cols() {
                acc = field.add(acc, field.mul(m.get(r, c), x[c]));
            }
            prop_assert_eq!(acc, b[r]);
        }
    }

    #[test]
    fn matrix_multiplication_is_associative(a in arb_matrix(4), b in arb_matrix(4), c in arb_matrix(4)) {
        // reshape to composable sizes by truncation
        let field = a.field();
        let n = a.rows().min(a.cols()).min(b.rows()).min(b.cols()).min(c.rows()).min(c.cols());
        let cut = |m: &FieldMatrix| {
            let mut out = FieldMatrix::zero(field, n, n);
            for i in 0..n {
                for j in 0..n {
                    out.set(i, j, m.get(i, j));
                }
            }
            out
        };
        let (a, b, c) = (cut(&a), cut(&b), cut(&c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }
}

#[test]
fn shipped_fixture_sources_round_trip() {
    for id in [FamilyId::Sd2a1, FamilyId::Q3b, FamilyId::KleinFourLocal] {
        let p = parse_presentation(family_source(&id)).unwrap();
        let printed = print_presentation(&p);
        let again = parse_presentation(&printed).unwrap();
        assert_eq!(p, again);
        assert_eq!(printed, print_presentation(&again));
    }
}

#[test]
fn field_element_encoding_rejects_out_of_range() {
    let f = Field::GF2;
    assert!(f.element(2).is_err());
    let f4 = Field::new(2, 2).unwrap();
    assert_eq!(f4.element(3).unwrap(), FieldElement(3));
    assert!(f4.element(4).is_err());
}

#[test]
fn core_values_are_shareable_across_threads() {
    // the concurrency contract: everything is immutable after construction
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<blockforge_core::linalg::FieldMatrix>();
    assert_send_sync::<blockforge_core::presentations::AlgebraPresentation>();
    assert_send_sync::<blockforge_core::rewriting::RewriteSystem>();
    assert_send_sync::<blockforge_core::rewriting::NormalBasis>();
    assert_send_sync::<blockforge_core::algebra::Algebra>();
    assert_send_sync::<blockforge_core::repmod::Representation>();
    assert_send_sync::<blockforge_core::repmod::Submodule>();
    assert_send_sync::<blockforge_core::repmod::ModuleMap>();
    assert_send_sync::<blockforge_core::homology::Ext1>();
    assert_send_sync::<blockforge_core::deformation::TruncatedLift>();
    assert_send_sync::<blockforge_core::classifier::ClassifiedModule>();
}
