use std::time::Instant;

use vertop_core::affine::{
    check_affine_bracket, check_affine_bracket_exploratory, check_eigen_relation,
    check_pi_t_relations, eigen_probes, sln_mode, SlnConfig, SlnElement,
};
use vertop_core::filtered::ModelSpace;
use vertop_core::{FilteredVector, ModeWindow, Monomial, Rational, Scalar, VariableId};

fn x(s: u32, d: u32) -> VariableId {
    VariableId::new(s, d)
}

#[test]
fn zero_mode_on_phi() {
    let cfg = SlnConfig::new(2, Rational::ONE).unwrap();
    let out = sln_mode(&cfg, &SlnElement::e(1, 2), 0)
        .apply(&cfg.space, &cfg.vacuum(), 3)
        .unwrap();
    // −Σ x²_{−i} ∂/∂x¹_{−i} φ_c = 2ρc Σ x²_{−i} x¹_{−i} φ_c
    let two_rho = &Scalar::rho() * &Scalar::from_integer(2);
    let mut expected = FilteredVector::zero(vertop_core::Precision::Finite(3));
    for i in 1..=3 {
        expected.add_term(Monomial::var(x(1, i)).times(x(2, i)), two_rho.clone());
    }
    assert_eq!(out, expected);
}

#[test]
fn eigenvalues() {
    for n in 1..=3u32 {
        for (c, lam) in [(1, Rational::ONE), (4, Rational::new(1, 1 << n))] {
            let space = ModelSpace::phi(n, Rational::from_integer(c)).unwrap();
            assert_eq!(space.lambda().unwrap(), lam);
            let probe = vertop_core::affine::Probe {
                label: "phi".into(),
                vector: FilteredVector::basis(Monomial::one()),
            };
            let e = check_eigen_relation(&space, &[probe], 4);
            assert!(e.passed(), "{e:?}");
        }
    }
}

#[test]
fn pi_t_relations() {
    let t = Instant::now();
    for n in 1..=3u32 {
        for c in [1, 4] {
            let space = ModelSpace::phi(n, Rational::from_integer(c)).unwrap();
            let e = check_pi_t_relations(&space, 4, 3);
            assert!(e.passed(), "{e:?}");
        }
    }
    eprintln!("pi_t relations: {:?}", t.elapsed());
}

#[test]
fn generation_one_probes_are_eigenvectors() {
    for c in [1, 4] {
        let cfg = SlnConfig::new(2, Rational::from_integer(c)).unwrap();
        let probes = eigen_probes(&cfg, 1, 5).unwrap();
        let e = check_eigen_relation(&cfg.space, &probes, 4);
        assert!(e.passed(), "{e:?}");
    }
}

#[test]
fn level_one_brackets() {
    for n in [2, 3] {
        for c in [1, 4] {
            let t = Instant::now();
            let cfg = SlnConfig::new(n, Rational::from_integer(c)).unwrap();
            let e = check_affine_bracket(&cfg, ModeWindow::new(-2, 2), 1, 4);
            eprintln!("sl{n} c={c}: {:?} {:?}", e.status, t.elapsed());
            assert!(e.passed(), "{e:?}");
        }
    }
}

#[test]
fn wrong_level_is_detected() {
    let cfg = SlnConfig::new(2, Rational::ONE).unwrap();
    for level in [
        Rational::ZERO,
        Rational::from_integer(2),
        Rational::from_integer(-1),
    ] {
        let e = vertop_core::affine::check_affine_bracket_at_level(
            &cfg,
            ModeWindow::new(-1, 1),
            0,
            3,
            &level,
        );
        assert!(!e.passed(), "level {level} accepted");
    }
}

#[test]
fn exploratory_brackets() {
    let cfg = SlnConfig::new(2, Rational::ONE).unwrap();
    let e = check_affine_bracket_exploratory(&cfg, ModeWindow::new(-1, 1), 2, 2, 3);
    eprintln!("{:?}", e.params);
    assert!(e.passed());
}

/// `−λ^{−j} π_t^j Σ_{i≤cut} x^v_{−i} ∂/∂x^u_{−i−j}` built from primitives.
fn negative_mode_oracle(
    cfg: &SlnConfig,
    u: u32,
    v: u32,
    j: u32,
    probe: &FilteredVector,
    cut: u32,
) -> FilteredVector {
    use vertop_core::filtered::{apply_primitive, PrimitiveOp};
    let mut acc: Option<FilteredVector> = None;
    for i in 1..=cut {
        let d = apply_primitive(&cfg.space, PrimitiveOp::Deriv(x(u, i + j)), probe).unwrap();
        let mut w = apply_primitive(&cfg.space, PrimitiveOp::Mult(x(v, i)), &d).unwrap();
        for _ in 0..j {
            w = apply_primitive(&cfg.space, PrimitiveOp::PiT, &w).unwrap();
        }
        acc = Some(match acc {
            None => w,
            Some(mut a) => {
                a.add_scaled(&Scalar::one(), &w);
                a
            }
        });
    }
    let lam = Scalar::from_rational(cfg.lambda.pow(-(j as i32)));
    acc.unwrap().scaled(&-lam)
}

#[test]
fn negative_modes_match_primitive_oracle() {
    for c in [1, 4] {
        let cfg = SlnConfig::new(2, Rational::from_integer(c)).unwrap();
        let probe = FilteredVector::basis(Monomial::var(x(1, 1)).times(x(2, 3)));
        for j in 1..=2u32 {
            for (u, v) in [(1, 2), (2, 1), (1, 1)] {
                let a = if u == v {
                    SlnElement::h(1, 2)
                } else {
                    SlnElement::e(u, v)
                };
                let engine = sln_mode(&cfg, &a, -(j as i64))
                    .apply(&cfg.space, &probe, 3)
                    .unwrap();
                let oracle = if u == v {
                    let mut o = negative_mode_oracle(&cfg, 1, 1, j, &probe, 12);
                    o.add_scaled(
                        &Scalar::from_integer(-1),
                        &negative_mode_oracle(&cfg, 2, 2, j, &probe, 12),
                    );
                    o
                } else {
                    negative_mode_oracle(&cfg, u, v, j, &probe, 12)
                };
                assert_eq!(engine, oracle.truncate(3).unwrap(), "c={c} j={j} ({u},{v})");
            }
        }
    }
}

#[test]
fn matrix_algebra() {
    let (e, f, h) = (
        SlnElement::e(1, 2),
        SlnElement::e(2, 1),
        SlnElement::h(1, 2),
    );
    assert_eq!(e.bracket(&f), h);
    assert_eq!(h.bracket(&e), e.scaled(&Rational::from_integer(2)));
    assert_eq!(e.trace_form(&f), Rational::ONE);
    assert_eq!(h.trace_form(&h), Rational::from_integer(2));
    assert_eq!(format!("{h}"), "cartan[1,2]");
    assert_eq!(format!("{e}"), "current[1,2]");
    assert!(SlnElement::from_entries([((1, 1), Rational::ONE)]).is_err());
}
