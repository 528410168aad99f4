//! Acceptance suite: the headline classification results, the deformation
//! profiles, the oracle cross-checks, and the property suites, each with its
//! stated tolerance (everything here is exact) and runtime bound.
//!
//! Run with `cargo test -p blockforge --test acceptance -- --nocapture` to
//! see one PASS line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use blockforge_core::algebra::Algebra;
use blockforge_core::classifier::{
    annihilation_check, brute_force_endok, classify, enumerate_endok, ClassifiedModule,
    EnumerateOptions, Tau3,
};
use blockforge_core::deformation::{classify_udr, lift_profile, tangent_dim, UdrFlags, UdrInput};
use blockforge_core::homology::tau_period;
use blockforge_core::linalg::{kernel_basis, rref, Field, FieldMatrix};
use blockforge_core::presentations::{instantiate_family, FamilyId};
use blockforge_core::repmod::{iso_test, uniserial, Iso, IsoOptions};

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

fn build(family: &FamilyId, n: i64, c: Option<u16>) -> Algebra {
    let mut scalars = BTreeMap::new();
    if let Some(c) = c {
        scalars.insert("c".to_string(), c);
    }
    let p = instantiate_family(family, n, &scalars).unwrap();
    Algebra::build(&p).unwrap()
}

fn classified(alg: &Algebra, cap: usize) -> Vec<ClassifiedModule> {
    classify(alg, cap, &EnumerateOptions::default()).unwrap().0
}

fn names(alg: &Algebra, modules: &[ClassifiedModule]) -> BTreeSet<String> {
    modules.iter().map(|m| m.name.render(alg)).collect()
}

fn run_binary(args: &[&str]) -> serde_json::Value {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_blockforge"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn module_names(report: &serde_json::Value) -> BTreeSet<String> {
    report["modules"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["name"].as_str().unwrap().to_string())
        .collect()
}

const SD2A1_LIST: [&str; 6] = ["S_0", "S_1", "S_01", "S_10", "S_001", "S_100"];
const Q3B_LIST: [&str; 15] = [
    "S_0", "S_1", "S_2", "S_01", "S_10", "S_02", "S_20", "S_102", "S_201", "S_0102", "S_2010",
    "S_0201", "S_1020", "T_0,1+2", "T_1+2,0",
];

#[test]
fn acceptance_01_sd2a1_classification() {
    let expected: BTreeSet<String> = SD2A1_LIST.iter().map(|s| s.to_string()).collect();
    for (n, c) in [("4", "0"), ("4", "1"), ("5", "0"), ("5", "1")] {
        let start = Instant::now();
        let report =
            run_binary(&["classify", "--family", "SD2A1", "--n", n, "--c", c, "--cap", "4"]);
        let elapsed = start.elapsed();
        assert_eq!(module_names(&report), expected, "n={n} c={c}");
        assert!(elapsed.as_secs() < 60, "n={n} c={c} took {elapsed:?}");
    }
    println!("ACCEPTANCE 1 (two-vertex semidihedral End-k list, n=4,5 c=0,1): PASS");
}

#[test]
fn acceptance_02_q3b_classification() {
    let expected: BTreeSet<String> = Q3B_LIST.iter().map(|s| s.to_string()).collect();
    let start = Instant::now();
    let report = run_binary(&["classify", "--family", "Q3B", "--n", "4", "--cap", "4"]);
    let elapsed = start.elapsed();
    assert_eq!(module_names(&report), expected);
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    println!("ACCEPTANCE 2 (three-vertex quaternion End-k list with both T shapes): PASS");
}

#[test]
fn acceptance_03_klein_four_local_case() {
    let alg = build(&FamilyId::KleinFourLocal, 2, None);
    let modules = classified(&alg, 4);
    assert_eq!(names(&alg, &modules), BTreeSet::from(["S_0".to_string()]));
    let s = &modules[0].rep;
    assert_eq!(tangent_dim(&alg, s).unwrap(), 2);
    // every nontrivial first-order direction obstructs at order 3
    let f = alg.field();
    for (a, b) in [(1u16, 0u16), (0, 1), (1, 1)] {
        let dir = vec![f.element(a).unwrap(), f.element(b).unwrap()];
        assert_eq!(lift_profile(&alg, s, &dir, 5).unwrap(), 2, "direction ({a},{b})");
    }
    println!("ACCEPTANCE 3 (local case: single class, tangent dimension 2, order-3 obstruction): PASS");
}

#[test]
fn acceptance_04_ext_partition() {
    let alg = build(&FamilyId::Sd2a1, 4, Some(0));
    let modules = classified(&alg, 4);
    let d1: BTreeMap<String, usize> =
        modules.iter().map(|m| (m.name.render(&alg), m.d1)).collect();
    for name in ["S_0", "S_01", "S_10", "S_001", "S_100"] {
        assert_eq!(d1[name], 1, "{name}");
    }
    assert_eq!(d1["S_1"], 0);

    let alg = build(&FamilyId::Q3b, 4, None);
    let modules = classified(&alg, 4);
    for m in &modules {
        let expected = usize::from(m.name.render(&alg) == "S_1");
        assert_eq!(m.d1, expected, "{}", m.name.render(&alg));
    }
    println!("ACCEPTANCE 4 (self-extension dimensions match the partition lists): PASS");
}

#[test]
fn acceptance_05_annihilation_identities() {
    let alg = build(&FamilyId::Sd2a1, 4, Some(0));
    for m in &classified(&alg, 4) {
        assert_eq!(annihilation_check(&FamilyId::Sd2a1, &alg, &m.rep), Ok(true));
    }
    // negative control: the composite beta*gamma acts nontrivially on P_1
    let v1 = alg.quiver().vertex_id("1").unwrap();
    assert_eq!(annihilation_check(&FamilyId::Sd2a1, &alg, alg.projective(v1)), Ok(false));

    let alg = build(&FamilyId::Q3b, 4, None);
    for m in &classified(&alg, 4) {
        assert_eq!(annihilation_check(&FamilyId::Q3b, &alg, &m.rep), Ok(true));
    }
    println!("ACCEPTANCE 5 (annihilation identities hold; projective negative control fails): PASS");
}

#[test]
fn acceptance_06_oracle_equivalence() {
    let start = Instant::now();
    let opts = IsoOptions::default();
    let cases: Vec<(&str, Algebra)> = vec![
        ("SD2A1 c=0", build(&FamilyId::Sd2a1, 4, Some(0))),
        ("SD2A1 c=1", build(&FamilyId::Sd2a1, 4, Some(1))),
        ("Q3B", build(&FamilyId::Q3b, 4, None)),
        ("KleinFour", build(&FamilyId::KleinFourLocal, 2, None)),
    ];
    for (label, alg) in &cases {
        let searched = enumerate_endok(alg, 4, &EnumerateOptions::default()).unwrap().modules;
        let brute = brute_force_endok(alg, 4).unwrap();
        assert_eq!(searched.len(), brute.len(), "{label}: class counts differ");
        for b in &brute {
            let matches = searched
                .iter()
                .filter(|s| iso_test(alg, s, b, &opts) == Iso::Yes)
                .count();
            assert_eq!(matches, 1, "{label}: brute-force class has no unique partner");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    println!("ACCEPTANCE 6 (top-down search equals brute-force oracle on all fixtures, {elapsed:?}): PASS");
}

#[test]
fn acceptance_07_mod2_profiles_of_nontrivial_directions() {
    for c in [0u16, 1] {
        let alg = build(&FamilyId::Sd2a1, 4, Some(c));
        let v0 = alg.quiver().vertex_id("0").unwrap();
        let v1 = alg.quiver().vertex_id("1").unwrap();
        let one = vec![alg.field().one()];
        for labels in [vec![v0], vec![v0, v1], vec![v1, v0]] {
            let m = uniserial(&alg, &labels).unwrap();
            assert_eq!(lift_profile(&alg, &m, &one, 5).unwrap(), 2, "c={c}, {labels:?}");
        }
    }
    println!("ACCEPTANCE 7 (order-2 truncation wall for the non-height-1 classes): PASS");
}

#[test]
fn acceptance_08_three_tube_absence() {
    let alg = build(&FamilyId::Sd2a1, 4, Some(0));
    let s1 = alg.simple(alg.quiver().vertex_id("1").unwrap()).clone();
    let period = tau_period(&alg, &s1, 6, &IsoOptions::default()).unwrap();
    assert_ne!(period, Some(3));

    let alg = build(&FamilyId::Q3b, 4, None);
    let modules = classified(&alg, 4);
    for m in modules.iter().filter(|m| m.d1 == 0) {
        assert_eq!(m.tau3, Tau3::No, "{}", m.name.render(&alg));
    }
    println!("ACCEPTANCE 8 (no period-3 orbits where the classification forbids them): PASS");
}

#[test]
fn acceptance_09_ring_table_golden() {
    let golden_text = std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/ring_table.json"),
    )
    .unwrap();
    let golden: serde_json::Value = serde_json::from_str(&golden_text).unwrap();

    let cases: Vec<(&str, Algebra, Option<i64>, &str)> = vec![
        ("SD2A1(n=4)", build(&FamilyId::Sd2a1, 4, Some(0)), Some(4), include_str!("../assets/meta/sd2a1.json")),
        ("Q3B(n=4)", build(&FamilyId::Q3b, 4, None), Some(4), include_str!("../assets/meta/q3b.json")),
        ("KleinFour(n=2)", build(&FamilyId::KleinFourLocal, 2, None), Some(2), include_str!("../assets/meta/klein4.json")),
    ];
    let mut produced = serde_json::Map::new();
    for (label, alg, n, meta_text) in &cases {
        let meta: BTreeMap<String, serde_json::Value> = serde_json::from_str(meta_text).unwrap();
        let mut table = serde_json::Map::new();
        for m in &classified(alg, 4) {
            let name = m.name.render(alg);
            let entry = &meta[&name];
            let flags = UdrFlags {
                height1: entry["height1"].as_bool(),
                tube_correspondence: entry["tube_correspondence"].as_bool(),
                lifts_over_w: entry["lifts_over_W"].as_bool(),
            };
            let input = UdrInput {
                d1: m.d1,
                tau3: m.tau3,
                two_vertex_quiver: alg.quiver().vertex_count() == 2,
                n: *n,
            };
            let ring = classify_udr(&flags, &input).unwrap();
            let mut cell = serde_json::Map::new();
            cell.insert("ring".into(), serde_json::Value::String(ring.render()));
            if let Some(d) = ring.q_degree {
                cell.insert("q_degree".into(), serde_json::Value::from(d));
            }
            table.insert(name, serde_json::Value::Object(cell));
        }
        produced.insert(label.to_string(), serde_json::Value::Object(table));
    }
    assert_eq!(serde_json::Value::Object(produced), golden, "ring table drifted");
    println!("ACCEPTANCE 9 (deformation-ring table matches the golden file verbatim): PASS");
}

#[test]
fn acceptance_10_property_suites() {
    let start = Instant::now();

    // rank-nullity on ten thousand random matrices with dims <= 8
    let mut rng = SmallRng::seed_from_u64(0);
    let gf4 = Field::new(2, 2).unwrap();
    for i in 0..10_000 {
        let field = if i % 4 == 3 { gf4 } else { Field::GF2 };
        let rows = rng.gen_range(0..=8);
        let cols = rng.gen_range(0..=8);
        let mut m = FieldMatrix::zero(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, field.element(rng.gen_range(0..field.order())).unwrap());
            }
        }
        let r = rref(&m);
        let k = kernel_basis(&m);
        assert_eq!(r.rank + k.cols(), cols);
        assert!(m.mul(&k).is_zero());
    }

    // multiplication-table associativity on all composable basis triples
    for alg in [
        build(&FamilyId::KleinFourLocal, 2, None),
        build(&FamilyId::Sd2a1, 4, Some(0)),
        build(&FamilyId::Q3b, 4, None),
    ] {
        let nb = alg.basis();
        let field = alg.field();
        let dim = nb.dimension();
        for i in 0..dim {
            for j in 0..dim {
                if nb.monomial(j).target != nb.monomial(i).source {
                    continue;
                }
                let ij = nb.product(i, j);
                for k in 0..dim {
                    if nb.monomial(k).target != nb.monomial(j).source {
                        continue;
                    }
                    let jk = nb.product(j, k);
                    let mut left: BTreeMap<usize, u8> = BTreeMap::new();
                    for (c, t) in &ij {
                        for (d, u) in nb.product(*t, k) {
                            let e = field.mul(*c, d);
                            let entry = left.entry(u).or_insert(0);
                            *entry = field.add(field.element(*entry as u16).unwrap(), e).0;
                        }
                    }
                    let mut right: BTreeMap<usize, u8> = BTreeMap::new();
                    for (c, t) in &jk {
                        for (d, u) in nb.product(i, *t) {
                            let e = field.mul(*c, d);
                            let entry = right.entry(u).or_insert(0);
                            *entry = field.add(field.element(*entry as u16).unwrap(), e).0;
                        }
                    }
                    left.retain(|_, c| *c != 0);
                    right.retain(|_, c| *c != 0);
                    assert_eq!(left, right, "associativity at ({i},{j},{k})");
                }
            }
        }
    }

    // tangent dimensions computed along both routes on every classified module
    let all_algs = [
        build(&FamilyId::KleinFourLocal, 2, None),
        build(&FamilyId::Sd2a1, 4, Some(0)),
        build(&FamilyId::Sd2a1, 4, Some(1)),
        build(&FamilyId::Q3b, 4, None),
    ];
    for alg in &all_algs {
        for m in &classified(alg, 4) {
            let agreed = tangent_dim(alg, &m.rep).expect("both tangent routes agree");
            assert_eq!(agreed, m.d1);
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 900, "took {elapsed:?}");
    println!("ACCEPTANCE 10 (rank-nullity, associativity, dual-route tangents, {elapsed:?}): PASS");
}

/// The classification does not depend on the scalar parameter value.
#[test]
fn scalar_independence_of_the_classification() {
    let a0 = build(&FamilyId::Sd2a1, 4, Some(0));
    let a1 = build(&FamilyId::Sd2a1, 4, Some(1));
    let n0: Vec<(String, usize)> = classified(&a0, 4)
        .iter()
        .map(|m| (m.name.render(&a0), m.d1))
        .collect();
    let n1: Vec<(String, usize)> = classified(&a1, 4)
        .iter()
        .map(|m| (m.name.render(&a1), m.d1))
        .collect();
    assert_eq!(n0, n1);
}

/// A stress pass above the default cap: no additional classes appear.
#[test]
fn stress_cap_six_adds_no_classes() {
    let alg = build(&FamilyId::Sd2a1, 4, Some(0));
    let at6 = enumerate_endok(&alg, 6, &EnumerateOptions::default()).unwrap();
    let expected: BTreeSet<String> = SD2A1_LIST.iter().map(|s| s.to_string()).collect();
    let got: BTreeSet<String> = at6
        .modules
        .iter()
        .map(|m| {
            blockforge_core::classifier::name_module(&alg, m, &IsoOptions::default()).render(&alg)
        })
        .collect();
    assert_eq!(got, expected);
    assert!(!at6.cap_boundary_hit);

    let alg = build(&FamilyId::Q3b, 4, None);
    let at6 = enumerate_endok(&alg, 6, &EnumerateOptions::default()).unwrap();
    let expected: BTreeSet<String> = Q3B_LIST.iter().map(|s| s.to_string()).collect();
    let got: BTreeSet<String> = at6
        .modules
        .iter()
        .map(|m| {
            blockforge_core::classifier::name_module(&alg, m, &IsoOptions::default()).render(&alg)
        })
        .collect();
    assert_eq!(got, expected);
}

/// The audit mode with unrestricted tops finds nothing new either.
#[test]
fn audit_mode_with_top_multiplicities() {
    let alg = build(&FamilyId::KleinFourLocal, 2, None);
    let opts = EnumerateOptions {
        top_length: 3,
        allow_top_multiplicity: true,
        ..EnumerateOptions::default()
    };
    let found = enumerate_endok(&alg, 3, &opts).unwrap();
    assert_eq!(found.modules.len(), 1);
    assert_eq!(found.modules[0].total_dim(), 1);
}

/// The `tube_correspondence` flag is declared input, but its mod-2 shadow is
/// computable: the tube ring form reduces to `k[t]/(t^(2^(n-2)))` while the
/// plain `q_n` form reduces to `k[t]/(t^(2^(n-2)-1))`, and the lift profile
/// of the module reads that exponent off directly.  The shipped flags must
/// agree with the computed profiles.
#[test]
fn shipped_tube_flags_are_consistent_with_computed_profiles() {
    let meta: BTreeMap<String, serde_json::Value> =
        serde_json::from_str(include_str!("../assets/meta/sd2a1.json")).unwrap();
    let alg = build(&FamilyId::Sd2a1, 4, Some(0));
    let one = vec![alg.field().one()];
    for (name, labels) in [("S_001", ["0", "0", "1"]), ("S_100", ["1", "0", "0"])] {
        let verts: Vec<_> =
            labels.iter().map(|l| alg.quiver().vertex_id(l).unwrap()).collect();
        let m = uniserial(&alg, &verts).unwrap();
        let profile = lift_profile(&alg, &m, &one, 8).unwrap();
        let declared_tube = meta[name]["tube_correspondence"].as_bool().unwrap();
        // profile 2^(n-2) means the tube form, 2^(n-2)-1 the plain form
        let computed_tube = match profile {
            4 => true,
            3 => false,
            other => panic!("unexpected profile {other} for {name}"),
        };
        assert_eq!(
            declared_tube, computed_tube,
            "{name}: shipped flag disagrees with the computed mod-2 profile"
        );
    }
}

#[test]
fn gf4_scalar_instantiation_works_end_to_end() {
    // c outside the prime field: same dimensions, same classification names
    let alg = build(&FamilyId::Sd2a1, 4, Some(2));
    assert_eq!(alg.field().order(), 4);
    assert_eq!(alg.dimension(), 38);
    let modules = classified(&alg, 4);
    let expected: BTreeSet<String> = SD2A1_LIST.iter().map(|s| s.to_string()).collect();
    assert_eq!(names(&alg, &modules), expected);
}
