use vertop_core::betagamma::{beta_field, gamma_field, SymplecticConfig};
use vertop_core::fields::{derivative, identity, nproduct};
use vertop_core::{FilteredVector, Scalar};

fn probes(cfg: &SymplecticConfig) -> Vec<FilteredVector> {
    cfg.probes(3, 2)
}

#[test]
fn derivative_modes() {
    for cfg in [SymplecticConfig::plain(1), SymplecticConfig::gaussian(1)] {
        let b = beta_field(&cfg, 1).unwrap();
        let db = derivative(&b);
        for v in probes(&cfg) {
            for m in -3i64..=3 {
                let lhs = db.apply_mode(m, &v, 4).unwrap();
                let rhs = b
                    .apply_mode(m - 1, &v, 4)
                    .unwrap()
                    .scaled(&Scalar::from_integer(-m));
                assert_eq!(lhs, rhs, "m={m}");
            }
        }
    }
}

#[test]
fn identity_modes() {
    let cfg = SymplecticConfig::gaussian(1);
    let id = identity();
    for v in probes(&cfg) {
        for m in -3i64..=3 {
            let out = id.apply_mode(m, &v, 4).unwrap();
            if m == -1 {
                assert_eq!(out, v.truncate(4).unwrap());
            } else {
                assert!(out.is_zero(), "m={m}");
            }
        }
    }
}

/// `β_(0)γ = τ·id` and `β_(n)γ = 0` for `n ≥ 1`, from the single pole of the OPE.
#[test]
fn beta_gamma_products() {
    for cfg in [SymplecticConfig::plain(1), SymplecticConfig::gaussian(1)] {
        let (b, g) = (beta_field(&cfg, 1).unwrap(), gamma_field(&cfg, 1).unwrap());
        let zero = nproduct(&b, &g, 0);
        let one = nproduct(&b, &g, 1);
        for v in probes(&cfg) {
            for m in -2i64..=2 {
                let expected = if m == -1 {
                    v.truncate(3).unwrap().scaled(&Scalar::tau())
                } else {
                    FilteredVector::zero(vertop_core::Precision::Finite(3))
                };
                assert_eq!(zero.apply_mode(m, &v, 3).unwrap(), expected, "m={m}");
                assert!(one.apply_mode(m, &v, 3).unwrap().is_zero());
            }
        }
    }
}
