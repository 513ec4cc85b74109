//! The project's acceptance gate: eight checks, each printing one PASS line
//! with its timing. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; each check is also an ordinary assertion.

use std::process::Command;
use std::time::{Duration, Instant};

use descent_core::blseq::check_bl_sequence;
use descent_core::chainring::DivisorSpec;
use descent_core::descent::{
    datum_from_module, open_stratum_localization, pair_model, stratum_tower, verify_roundtrip,
};
use descent_core::groebner::VPoly;
use descent_core::module::{ModuleMap, PresentedModule};
use descent_core::morphism::RingMorphism;
use descent_core::ring::PresentedRing;
use descent_core::sample::{random_univariate_module, rng_from_seed};
use descent_core::smith::module_invariants;
use descent_core::strata::{chains, mask_contains, nerve_counts, subsets, Mask};
use descent_core::tower::completion_tower;
use descent_core::tower_module::{is_cocartesian_tower, module_to_tower, TowerModule};
use descent_core::{FieldDesc, Precision};

fn pass(name: &str, detail: &str, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed <= budget,
        "{name} took {elapsed:?}, budget {budget:?}"
    );
    println!(
        "[PASS] {name}: {detail} ({:.2?} of {:.0?} budget)",
        elapsed, budget
    );
}

fn qx() -> PresentedRing {
    PresentedRing::polynomial(FieldDesc::Rationals, &["x"])
}

fn qxy() -> PresentedRing {
    PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"])
}

/// 1. The affine line with the divisor at the origin: the open-stratum ring,
/// the tower levels, and the chain-model ring must match the expected
/// presentations exactly.
#[test]
fn criterion_1_affine_line_ring_presentations() {
    let start = Instant::now();
    let r = qx();
    let f = r.parse("x").unwrap();
    let divisor = DivisorSpec::new(r.clone(), vec![f.clone()]).unwrap();

    // localized ring k[x, 1/x] presented with one inversion variable
    let open = open_stratum_localization(&divisor).unwrap();
    assert_eq!(open.ring.describe(), "Q[x,t]/(x*t - 1)");
    let x = open.ring.parse("x").unwrap();
    let t = open.ring.parse("t").unwrap();
    let one = open.ring.one();
    let field = open.ring.field();
    assert!(open.ring.elems_equal(&x.mul(&field, &t), &one));
    assert_eq!(open.ring.inverse_of(&x).as_ref(), Some(&t));

    // truncated power-series levels k[x]/(x^l)
    let tower = stratum_tower(&divisor, 1, 8).unwrap();
    for l in 1..=8u32 {
        let expected = r
            .with_extra_relations(&[f.pow(&field, l)])
            .unwrap();
        assert_eq!(tower.level(l), &expected, "tower level {l}");
    }

    // truncated Laurent model: same body ring, component 0 invertible up to
    // pole bookkeeping, no inversion variable needed
    let model = pair_model(&divisor, 0, 1, 8).unwrap();
    let expected_body = r.with_extra_relations(&[f.pow(&field, 8)]).unwrap();
    assert_eq!(model.ring, expected_body);
    assert_eq!(model.tvar, None);
    assert_eq!(model.laurent, vec![0]);
    assert_eq!(model.completed, vec![0]);

    pass(
        "criterion 1",
        "A^1 stratum and chain rings have the expected presentations",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

/// 2. One-component exactness of 0 → R → R_f ⊕ R^ → R^_f → 0 over Q[x] at
/// precision 16 and over Q[x,y] at precision 8, with zero counterexamples.
#[test]
fn criterion_2_one_component_exactness() {
    let start = Instant::now();
    let r1 = qx();
    let f1 = r1.parse("x").unwrap();
    let rep1 = check_bl_sequence(&r1, &f1, 16, 10, 20, 0).unwrap();
    assert!(rep1.exact, "Q[x]: {:?}", rep1.lines());
    assert!(rep1.middle_counterexamples.is_empty());
    assert!(rep1.surjectivity_failures.is_empty());

    let r2 = qxy();
    let f2 = r2.parse("x").unwrap();
    let rep2 = check_bl_sequence(&r2, &f2, 8, 6, 20, 0).unwrap();
    assert!(rep2.exact, "Q[x,y]: {:?}", rep2.lines());
    assert!(rep2.middle_counterexamples.is_empty());
    assert!(rep2.surjectivity_failures.is_empty());

    pass(
        "criterion 2",
        "exactness holds over Q[x] (prec 16) and Q[x,y] (prec 8), zero counterexamples",
        start.elapsed(),
        Duration::from_secs(10),
    );
}

/// 3. Round trip for 25 seeded random modules over Q[x] (free rank ≤ 3 plus
/// at most 3 torsion factors x^k, k ≤ 5), with Smith invariants matching.
#[test]
fn criterion_3_univariate_roundtrip_suite() {
    let start = Instant::now();
    let r = qx();
    let f = r.parse("x").unwrap();
    let divisor = DivisorSpec::new(r.clone(), vec![f]).unwrap();
    let mut passed = 0;
    for seed in 0..25u64 {
        let mut rng = rng_from_seed(seed);
        let m = random_univariate_module(&r, &mut rng, 3, 3, 5);
        let rt = verify_roundtrip(&m, &divisor, Precision::default()).unwrap();
        assert!(rt.iso, "seed {seed}: roundtrip not an isomorphism");
        assert_eq!(
            rt.invariants_match,
            Some(true),
            "seed {seed}: invariant factors differ"
        );
        let glued = rt.report.module.as_ref().unwrap();
        let a = module_invariants(&m).unwrap();
        let b = module_invariants(glued).unwrap();
        assert_eq!(a.free_rank, b.free_rank, "seed {seed}");
        assert_eq!(a.invariant_factors, b.invariant_factors, "seed {seed}");
        passed += 1;
    }
    pass(
        "criterion 3",
        &format!("{passed}/25 seeded univariate roundtrips with matching invariants"),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

/// 4. Round trip across both components of D = V(xy) in the plane: free
/// rank 1, free rank 2, and the torsion module Q[x,y]/(x), at level ≤ 16.
#[test]
fn criterion_4_crossing_roundtrip_suite() {
    let start = Instant::now();
    let r = qxy();
    let fx = r.parse("x").unwrap();
    let fy = r.parse("y").unwrap();
    let divisor = DivisorSpec::new(r.clone(), vec![fx.clone(), fy]).unwrap();
    let prec = Precision::new(4, 16);
    let suite: Vec<(&str, PresentedModule)> = vec![
        ("free rank 1", PresentedModule::free(r.clone(), 1)),
        ("free rank 2", PresentedModule::free(r.clone(), 2)),
        (
            "Q[x,y]/(x)",
            PresentedModule::cyclic(r.clone(), &[fx]).unwrap(),
        ),
    ];
    let mut passed = 0;
    for (label, m) in &suite {
        let rt = verify_roundtrip(m, &divisor, prec).unwrap();
        assert!(rt.iso, "{label}: roundtrip not an isomorphism");
        assert!(rt.level_used <= 16, "{label}: level {} > 16", rt.level_used);
        passed += 1;
    }
    pass(
        "criterion 4",
        &format!("{passed}/3 crossing roundtrips at level ≤ 16"),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

/// Brute-force chain enumerator, independent of the library's generator.
fn brute_force_chain_count(n: u32, m: usize) -> u64 {
    fn extend(n: u32, chain: &mut Vec<Mask>, remaining: usize, count: &mut u64) {
        if remaining == 0 {
            *count += 1;
            return;
        }
        for cand in subsets(n) {
            let ok = match chain.last() {
                Some(&prev) => prev != cand && mask_contains(cand, prev),
                None => true,
            };
            if ok {
                chain.push(cand);
                extend(n, chain, remaining - 1, count);
                chain.pop();
            }
        }
    }
    let mut count = 0;
    extend(n, &mut Vec::new(), m, &mut count);
    count
}

/// 5. Nerve census against brute force: (2,1,0), (4,5,2), (8,19,18).
#[test]
fn criterion_5_nerve_census() {
    let start = Instant::now();
    let expected: [(u32, [u64; 3]); 3] = [(1, [2, 1, 0]), (2, [4, 5, 2]), (3, [8, 19, 18])];
    for (n, want) in expected {
        let got = nerve_counts(n, 3);
        assert_eq!(got, want.to_vec(), "nerve counts for n={n}");
        for m in 1..=3usize {
            let brute = brute_force_chain_count(n, m);
            assert_eq!(got[m - 1], brute, "brute force disagrees at n={n}, m={m}");
            assert_eq!(
                chains(n, m).len() as u64,
                brute,
                "chain generator disagrees at n={n}, m={m}"
            );
        }
    }
    pass(
        "criterion 5",
        "chain counts (2,1,0), (4,5,2), (8,19,18) match brute force",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

/// 6. Tower criterion: 20 spread-out modules are coCartesian; 5 constructed
/// counterexamples are rejected with the right (k, l) witness.
#[test]
fn criterion_6_tower_criterion() {
    let start = Instant::now();
    let r = qx();
    let f = r.parse("x").unwrap();
    let field = r.field();
    let tower = completion_tower(&r, &[f.clone()], 4).unwrap();

    let mut true_cases = 0;
    for seed in 100..120u64 {
        let mut rng = rng_from_seed(seed);
        let m = random_univariate_module(&r, &mut rng, 3, 3, 5);
        let tm = module_to_tower(&m, &tower).unwrap();
        let rep = is_cocartesian_tower(&tm).unwrap();
        assert!(rep.ok, "seed {seed}: witness {:?}", rep.witness);
        true_cases += 1;
    }

    // constructed counterexamples: a transition twisted by x (or a zero
    // transition) breaks the kernel = J·M_l comparison at a known pair
    let mut false_cases = 0;
    let mut expect_witness = |tm: &TowerModule, lower: u32, upper: u32, tag: &str| {
        let rep = is_cocartesian_tower(tm).unwrap();
        assert!(!rep.ok, "{tag}: expected a failure");
        let w = rep.witness.expect("witness present");
        assert_eq!((w.lower, w.upper), (lower, upper), "{tag}");
        assert!(!w.element.is_empty(), "{tag}");
        false_cases += 1;
    };

    // (a) depth 2 along x^2, transition multiplied by x
    let t2 = completion_tower(&r, &[r.parse("x^2").unwrap()], 2).unwrap();
    let m1 = PresentedModule::free(t2.level(1).clone(), 1);
    let m2 = PresentedModule::free(t2.level(2).clone(), 1);
    let src = m2.base_change(t2.transition(2)).unwrap();
    let xcol = VPoly::from_poly(1, 0, &t2.level(1).parse("x").unwrap());
    let tr = ModuleMap::new(src, m1.clone(), vec![xcol]).unwrap();
    let tm_a = TowerModule::new(t2.clone(), vec![m1.clone(), m2.clone()], vec![tr]).unwrap();
    expect_witness(&tm_a, 1, 2, "twisted transition");

    // (b) depth 2, zero transition
    let src = m2.base_change(t2.transition(2)).unwrap();
    let zero = ModuleMap::zero(src, m1.clone()).unwrap();
    let tm_b = TowerModule::new(t2.clone(), vec![m1.clone(), m2.clone()], vec![zero]).unwrap();
    expect_witness(&tm_b, 1, 2, "zero transition");

    // (c) depth 3 along x, honest at 2→1, twisted by x at 3→2
    let t3 = completion_tower(&r, &[f.clone()], 3).unwrap();
    let free_l: Vec<PresentedModule> = (1..=3)
        .map(|l| PresentedModule::free(t3.level(l).clone(), 1))
        .collect();
    let src21 = free_l[1].base_change(t3.transition(2)).unwrap();
    let honest21 =
        ModuleMap::new(src21, free_l[0].clone(), vec![free_l[0].generator(0)]).unwrap();
    let src32 = free_l[2].base_change(t3.transition(3)).unwrap();
    let xcol2 = VPoly::from_poly(1, 0, &t3.level(2).parse("x").unwrap());
    let twisted32 = ModuleMap::new(src32, free_l[1].clone(), vec![xcol2]).unwrap();
    // the twist at 3→2 also corrupts the composed 3→1 transition, and the
    // checker reports the first offending pair in (1,2), (1,3), (2,3) order
    let tm_c = TowerModule::new(t3.clone(), free_l.clone(), vec![honest21, twisted32]).unwrap();
    expect_witness(&tm_c, 1, 3, "twist at the top of a depth-3 tower");

    // (d) rank 2, transition diag(1, x)
    let m1 = PresentedModule::free(t2.level(1).clone(), 2);
    let m2 = PresentedModule::free(t2.level(2).clone(), 2);
    let src = m2.base_change(t2.transition(2)).unwrap();
    let e0 = m1.generator(0);
    let xe1 = VPoly::from_poly(2, 1, &t2.level(1).parse("x").unwrap());
    let tr = ModuleMap::new(src, m1.clone(), vec![e0, xe1]).unwrap();
    let tm_d = TowerModule::new(t2.clone(), vec![m1, m2], vec![tr]).unwrap();
    expect_witness(&tm_d, 1, 2, "diagonal twist on rank 2");

    // (e) level 1 presents the zero module while level 2 is free: the kernel
    // of M_2 → M_1 is everything, far bigger than x·M_2
    let t2x = completion_tower(&r, &[f.clone()], 2).unwrap();
    let one1 = t2x.level(1).one();
    let n1 = PresentedModule::new(
        t2x.level(1).clone(),
        1,
        vec![VPoly::from_poly(1, 0, &one1)],
    )
    .unwrap();
    let n2 = PresentedModule::free(t2x.level(2).clone(), 1);
    let src = n2.base_change(t2x.transition(2)).unwrap();
    let tr = ModuleMap::new(src, n1.clone(), vec![n1.generator(0)]).unwrap();
    let tm_e = TowerModule::new(t2x, vec![n1, n2], vec![tr]).unwrap();
    expect_witness(&tm_e, 1, 2, "zero level below a free level");

    let _ = field;
    assert_eq!(true_cases, 20);
    assert_eq!(false_cases, 5);
    pass(
        "criterion 6",
        "20/20 spread-out towers coCartesian, 5/5 counterexamples rejected with (k,l) witnesses",
        start.elapsed(),
        Duration::from_secs(60),
    );
}

/// 7. Negative controls through the binary: a cocycle-violating file exits 1
/// with the witness triple; a depth-2 tower hiding x^3-torsion exits 3.
#[test]
fn criterion_7_negative_controls() {
    let start = Instant::now();
    let fixture =
        |name: &str| format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let run = |path: &str| {
        Command::new(env!("CARGO_BIN_EXE_descent"))
            .args(["run", path])
            .output()
            .expect("binary runs")
    };

    let broken = run(&fixture("broken_cocycle.run"));
    assert_eq!(broken.status.code(), Some(1), "broken cocycle exit code");
    let text = String::from_utf8_lossy(&broken.stdout);
    assert!(
        text.contains("violated on (Y_empty, Y_{1}, Y_{1,2})"),
        "witness triple missing:\n{text}"
    );

    let shallow = run(&fixture("shallow_tower.run"));
    assert_eq!(shallow.status.code(), Some(3), "shallow tower exit code");

    pass(
        "criterion 7",
        "2/2 negative controls: exit 1 with witness triple, exit 3 on shallow tower",
        start.elapsed(),
        Duration::from_secs(30),
    );
}

/// 8. Tensor–limit property: tensoring with a deep truncation and then
/// truncating further agrees with truncating directly, levelwise, for 10
/// random modules at depth 8.
#[test]
fn criterion_8_tensor_limit_levelwise() {
    let start = Instant::now();
    let r = qx();
    let f = r.parse("x").unwrap();
    let tower = completion_tower(&r, &[f], 8).unwrap();
    let depth = 8u32;
    let mut passed = 0;
    for seed in 200..210u64 {
        let mut rng = rng_from_seed(seed);
        let m = random_univariate_module(&r, &mut rng, 2, 3, 5);
        let deep = m.base_change(tower.projection(depth)).unwrap();
        for l in 1..=depth {
            let direct = m.base_change(tower.projection(l)).unwrap();
            let through_limit = deep
                .base_change(
                    &RingMorphism::new(
                        tower.level(depth).clone(),
                        tower.level(l).clone(),
                        vec![tower.level(l).var(0)],
                    )
                    .unwrap(),
                )
                .unwrap();
            assert!(
                direct.same_presentation_span(&through_limit),
                "seed {seed}, level {l}"
            );
        }
        passed += 1;
    }
    // the datum built from a module states the same fact for the glue input
    let divisor = DivisorSpec::new(r.clone(), vec![r.parse("x").unwrap()]).unwrap();
    let m = PresentedModule::cyclic(r.clone(), &[r.parse("x^2").unwrap()]).unwrap();
    let datum = datum_from_module(&m, &divisor, depth).unwrap();
    datum.validate().unwrap();
    assert_eq!(passed, 10);
    pass(
        "criterion 8",
        "10/10 modules: deep truncation then restriction equals direct truncation at all 8 levels",
        start.elapsed(),
        Duration::from_secs(60),
    );
}
