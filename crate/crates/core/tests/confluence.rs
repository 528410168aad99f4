//! Confluence probe: the normal form of a random element must not depend on
//! the order in which rules are applied.  The library reducer always picks
//! the leftmost redex with the lowest rule index; this test reduces the same
//! elements with a seeded random choice of redex at every step and compares.

use std::collections::BTreeMap;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use blockforge_core::linalg::FieldElement;
use blockforge_core::presentations::{instantiate_family, ArrowId, FamilyId};
use blockforge_core::rewriting::{basis, complete, normal_form, LinComb, Monomial, RewriteSystem};

/// One random-order reduction step: pick any (rule, position) redex uniformly.
fn random_step(rs: &RewriteSystem, lc: &LinComb, rng: &mut SmallRng) -> Option<LinComb> {
    let field = rs.field;
    let mut redexes: Vec<(usize, usize, usize)> = Vec::new(); // (term, pos, rule)
    for (ti, (_, m)) in lc.terms.iter().enumerate() {
        for (ri, rule) in rs.rules.iter().enumerate() {
            let l = rule.lhs.word.len();
            if l == 0 || l > m.word.len() {
                continue;
            }
            for pos in 0..=(m.word.len() - l) {
                if m.word[pos..pos + l] == rule.lhs.word[..] {
                    redexes.push((ti, pos, ri));
                }
            }
        }
    }
    if redexes.is_empty() {
        return None;
    }
    let (ti, pos, ri) = redexes[rng.gen_range(0..redexes.len())];
    let (coef, m) = &lc.terms[ti];
    let rule = &rs.rules[ri];
    let l = rule.lhs.word.len();
    let mut terms: Vec<(FieldElement, Monomial)> = lc
        .terms
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != ti)
        .map(|(_, t)| t.clone())
        .collect();
    for (c, t) in &rule.rhs.terms {
        let mut word = Vec::new();
        word.extend_from_slice(&m.word[..pos]);
        word.extend_from_slice(&t.word);
        word.extend_from_slice(&m.word[pos + l..]);
        let mono = if word.is_empty() {
            Monomial::idempotent(t.source)
        } else {
            Monomial::from_word(&rs.quiver, &word).expect("substitution stays composable")
        };
        terms.push((field.mul(*coef, *c), mono));
    }
    Some(LinComb::from_terms(field, terms))
}

fn reduce_randomly(rs: &RewriteSystem, lc: &LinComb, rng: &mut SmallRng) -> LinComb {
    let mut current = lc.clone();
    while let Some(next) = random_step(rs, &current, rng) {
        current = next;
    }
    current
}

fn random_element(rs: &RewriteSystem, max_len: usize, rng: &mut SmallRng) -> LinComb {
    let field = rs.field;
    let quiver = &rs.quiver;
    let terms = rng.gen_range(1..=3);
    let mut collected = Vec::new();
    for _ in 0..terms {
        // random composable word built by walking the quiver
        let len = rng.gen_range(0..=max_len);
        let start = rng.gen_range(0..quiver.vertex_count());
        let mut word: Vec<u8> = Vec::new();
        let mut at = blockforge_core::presentations::VertexId(start);
        for _ in 0..len {
            let options: Vec<ArrowId> = quiver.arrows_from(at).collect();
            if options.is_empty() {
                break;
            }
            let a = options[rng.gen_range(0..options.len())];
            // prepend in composition order: new letter applied after
            word.insert(0, a.0 as u8);
            at = quiver.arrow(a).target;
        }
        let mono = if word.is_empty() {
            Monomial::idempotent(blockforge_core::presentations::VertexId(start))
        } else {
            Monomial::from_word(quiver, &word).unwrap()
        };
        let coef = loop {
            let c = field.element(rng.gen_range(0..field.order())).unwrap();
            if c != field.zero() {
                break c;
            }
        };
        collected.push((coef, mono));
    }
    LinComb::from_terms(field, collected)
}

#[test]
fn normal_forms_are_reduction_order_independent() {
    let mut scalars = BTreeMap::new();
    scalars.insert("c".to_string(), 1u16);
    let cases = vec![
        (instantiate_family(&FamilyId::KleinFourLocal, 2, &BTreeMap::new()).unwrap(), 8, 6),
        (instantiate_family(&FamilyId::Sd2a1, 4, &scalars).unwrap(), 20, 16),
        (instantiate_family(&FamilyId::Q3b, 4, &BTreeMap::new()).unwrap(), 20, 12),
    ];
    let mut rng = SmallRng::seed_from_u64(42);
    for (presentation, cap, max_len) in cases {
        let rs = complete(&presentation, cap).unwrap();
        basis(&rs).unwrap();
        // 1000 random elements per fixture, random reduction order each
        for _ in 0..1000 {
            let elem = random_element(&rs, max_len, &mut rng);
            let canonical = normal_form(&rs, &elem);
            let randomized = reduce_randomly(&rs, &elem, &mut rng);
            assert_eq!(canonical, randomized, "order-dependent normal form");
        }
    }
}
