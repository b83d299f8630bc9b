use std::time::Instant;

use proptest::prelude::*;
use vertop_core::filtered::{FilteredVector, Precision};
use vertop_core::induced::{
    borcherds_check, check_cofinality, check_confluence, compare_induced_heisenberg, induce,
    measure_gaussian_level, state_nproduct, AnnihilatorRule, BorcherdsCase, Letter, ModeAlgebra,
    PbwWord, Reconstructor, Strategy, SubalgebraSpec,
};
use vertop_core::report::ModeWindow;
use vertop_core::scalar::Scalar;

fn vacuum_module(n: u32, level: i64) -> std::sync::Arc<vertop_core::induced::InducedModule> {
    let alg = ModeAlgebra::sl(n);
    let spec = SubalgebraSpec::vacuum(&alg, Scalar::from_integer(level));
    induce(alg, spec).unwrap()
}

fn state(
    m: &vertop_core::induced::InducedModule,
    letters: &[(usize, i64)],
) -> FilteredVector<PbwWord> {
    let w: Vec<Letter> = letters.iter().map(|&(g, k)| Letter::new(g, k)).collect();
    let mut out = FilteredVector::zero(Precision::Exact);
    for (b, c) in m.straighten(&w, 40).unwrap().iter() {
        out.add_term(b.clone(), c.clone());
    }
    out
}

#[test]
fn vacuum_example() {
    // e(1) f(−1)|0> = h(0)|0> + tr(ef)·k|0> = k|0>.
    for k in [1, 3, -2] {
        let m = vacuum_module(2, k);
        let (e, f, h) = (0, 1, 2);
        let v = m
            .straighten(&[Letter::new(e, 1), Letter::new(f, -1)], 4)
            .unwrap();
        assert_eq!(
            v,
            m.vacuum()
                .truncate(4)
                .unwrap()
                .scaled(&Scalar::from_integer(k))
        );
        // h(1) h(−1)|0> = tr(hh)·k|0> = 2k|0>.
        let v = m
            .straighten(&[Letter::new(h, 1), Letter::new(h, -1)], 4)
            .unwrap();
        assert_eq!(
            v,
            m.vacuum()
                .truncate(4)
                .unwrap()
                .scaled(&Scalar::from_integer(2 * k))
        );
        // e(0) f(−1)|0> = h(−1)|0>.
        let v = m
            .straighten(&[Letter::new(e, 0), Letter::new(f, -1)], 4)
            .unwrap();
        assert_eq!(v, state(&m, &[(h, -1)]).truncate(4).unwrap());
    }
}

#[test]
fn state_products() {
    let m = vacuum_module(2, 5);
    let e = state(&m, &[(0, -1)]);
    let f = state(&m, &[(1, -1)]);
    assert_eq!(
        state_nproduct(&m, &e, &f, 0).unwrap(),
        state(&m, &[(2, -1)])
    );
    assert_eq!(
        state_nproduct(&m, &e, &f, 1).unwrap(),
        m.vacuum().scaled(&Scalar::from_integer(5))
    );
    assert!(state_nproduct(&m, &e, &f, 2).unwrap().is_zero());
    // a_(−1)b is the normal ordered product.
    assert_eq!(
        state_nproduct(&m, &e, &f, -1).unwrap(),
        state(&m, &[(0, -1), (1, -1)])
    );
}

#[test]
fn straightening_is_confluent() {
    for m in [vacuum_module(2, 1), vacuum_module(3, 2)] {
        let words = m.random_words(200, 4, 4, 7);
        let e = check_confluence(&m, &words, 4, 11);
        assert!(e.passed(), "{e:?}");
    }
    let alg = ModeAlgebra::heisenberg(2);
    let spec = SubalgebraSpec::gaussian(&alg, Scalar::one()).unwrap();
    let m = induce(alg, spec).unwrap();
    let e = check_confluence(&m, &m.random_words(200, 4, 4, 3), 4, 5);
    assert!(e.passed(), "{e:?}");
}

#[test]
fn drop_rule_is_sound() {
    let m = vacuum_module(2, 1);
    for w in m.random_words(150, 4, 3, 21) {
        for n in 1..4 {
            let short = m.straighten(&w, n).unwrap();
            let long = m.straighten(&w, n + 8).unwrap().truncate(n).unwrap();
            assert_eq!(short, long, "{}", m.render_word(&w));
        }
    }
}

#[test]
fn strategies_agree_on_a_long_word() {
    let m = vacuum_module(2, 1);
    let w: Vec<Letter> = [(0, 2), (1, -1), (2, 1), (1, -2), (0, -1), (2, 0)]
        .iter()
        .map(|&(g, k)| Letter::new(g, k))
        .collect();
    let a = m.straighten_with(&w, 3, Strategy::Leftmost).unwrap();
    for s in [
        Strategy::Rightmost,
        Strategy::Seeded(1),
        Strategy::Seeded(99),
    ] {
        assert_eq!(a, m.straighten_with(&w, 3, s).unwrap());
    }
}

#[test]
fn budget_is_enforced() {
    let m = vacuum_module(2, 1).with_budget(3);
    let w: Vec<Letter> = [(0, 2), (1, -1), (2, 1), (1, -2)]
        .iter()
        .map(|&(g, k)| Letter::new(g, k))
        .collect();
    assert!(m.straighten(&w, 3).is_err());
}

#[test]
fn bad_specs_are_rejected() {
    let alg = ModeAlgebra::sl(2);
    // e(−1) cannot annihilate: the subalgebra spec meets the creation part.
    let mut spec = SubalgebraSpec::vacuum(&alg, Scalar::one());
    spec.rules.push(AnnihilatorRule {
        gen: 0,
        min_mode: -1,
        image: Vec::new(),
    });
    spec.rules.retain(|r| !(r.gen == 0 && r.min_mode == 0));
    assert!(induce(alg.clone(), spec).is_err());
    // Only e(m), m ≥ 0 and f(m), m ≥ 1: [e(0), f(1)] = h(1) is not killed.
    let spec = SubalgebraSpec {
        name: "partial".into(),
        rules: vec![
            AnnihilatorRule {
                gen: 0,
                min_mode: 0,
                image: Vec::new(),
            },
            AnnihilatorRule {
                gen: 1,
                min_mode: 1,
                image: Vec::new(),
            },
        ],
        level: Scalar::one(),
        depth_gap: 1,
    };
    assert!(induce(alg.clone(), spec).is_err());
    // Gaussian rules need a Heisenberg algebra.
    assert!(SubalgebraSpec::gaussian(&alg, Scalar::one()).is_err());
}

#[test]
fn mode_algebras_satisfy_jacobi() {
    for alg in [
        ModeAlgebra::sl(2),
        ModeAlgebra::sl(3),
        ModeAlgebra::heisenberg(2),
    ] {
        let e = alg.check_jacobi(ModeWindow::new(-2, 2));
        assert!(e.passed(), "{e:?}");
    }
}

#[test]
fn cofinality_at_bounded_length() {
    let m = vacuum_module(2, 1);
    let e = check_cofinality(&m, 3, 4);
    assert!(e.passed(), "{e:?}");
}

#[test]
fn gaussian_level() {
    for g in 1..=2 {
        assert_eq!(measure_gaussian_level(g).unwrap(), Scalar::one());
    }
}

#[test]
fn induced_heisenberg_matches_model() {
    let t = Instant::now();
    for e in compare_induced_heisenberg(1, 3, ModeWindow::new(-2, 2), 2, 2) {
        assert!(e.passed(), "{e:?}");
        assert_eq!(e.get_param("level"), Some("1"));
    }
    println!("g=1 comparison: {:?}", t.elapsed());
}

#[test]
fn borcherds_on_the_vacuum_module() {
    let t = Instant::now();
    let m = vacuum_module(2, 1);
    let mut rec = Reconstructor::new(m.generator_fields());
    let states = [
        m.vacuum(),
        state(&m, &[(0, -1)]),
        state(&m, &[(1, -1)]),
        state(&m, &[(2, -2)]),
    ];
    let mut cases = Vec::new();
    for a in &states {
        for b in &states {
            for l in 0..2 {
                cases.push(BorcherdsCase::new(&m, &mut rec, a, b, l).unwrap());
            }
        }
    }
    let probes: Vec<_> = m
        .normal_words(2, 2)
        .into_iter()
        .map(FilteredVector::basis)
        .collect();
    let e = borcherds_check("V^1(sl2)", &cases, ModeWindow::new(-1, 1), &probes, 2, 2);
    assert!(e.passed(), "{e:?}");
    println!("borcherds: {} cases in {:?}", cases.len(), t.elapsed());
}

#[test]
fn borcherds_detects_a_level_mismatch() {
    // States at level 2, fields from the level-1 module.
    let m2 = vacuum_module(2, 2);
    let m1 = vacuum_module(2, 1);
    let mut rec = Reconstructor::new(m1.generator_fields());
    let e = state(&m2, &[(0, -1)]);
    let f = state(&m2, &[(1, -1)]);
    let case = BorcherdsCase::new(&m2, &mut rec, &e, &f, 1).unwrap();
    let probes: Vec<_> = m1
        .normal_words(1, 2)
        .into_iter()
        .map(FilteredVector::basis)
        .collect();
    let entry = borcherds_check("mismatch", &[case], ModeWindow::new(-1, 1), &probes, 2, 0);
    assert!(!entry.passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // [x, y] only involves the letters' summed mode.
    #[test]
    fn bracket_preserves_total_mode(a in 0usize..3, b in 0usize..3, m in -5i64..5, k in -5i64..5) {
        let alg = ModeAlgebra::sl(2);
        let br = alg.bracket(Letter::new(a, m), Letter::new(b, k));
        for (l, _) in &br.letters {
            prop_assert_eq!(l.mode, m + k);
        }
        if m + k != 0 {
            prop_assert!(br.central.is_zero());
        }
    }

    #[test]
    fn straightening_truncates_consistently(seed in 0u64..500) {
        let m = vacuum_module(2, 1);
        let w = &m.random_words(1, 3, 3, seed)[0];
        let s3 = m.straighten(w, 3).unwrap();
        prop_assert_eq!(s3.truncate(2).unwrap(), m.straighten(w, 2).unwrap());
    }
}
