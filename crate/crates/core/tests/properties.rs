use num_rational::Ratio;
use proptest::prelude::*;
use vertop_core::affine::SlnElement;
use vertop_core::betagamma::{beta_field, gamma_field, SymplecticConfig};
use vertop_core::fields::{locality_holds, nproduct};
use vertop_core::scalar::{parse_scalar, GaussianRational};
use vertop_core::{Field, FilteredVector, ModeWindow, Monomial, Rational, Scalar, VariableId};

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-9i64..=9, 1i64..=6)
}

fn rational(p: (i64, i64)) -> Rational {
    Rational::new(p.0, p.1)
}

/// Sums of `(a + b i) ρ^k`, optionally divided by another such sum.
fn term() -> impl Strategy<Value = Scalar> {
    (small_rational(), small_rational(), -2i32..=2).prop_map(|(a, b, k)| {
        let c = Scalar::from_gaussian(GaussianRational::new(rational(a), rational(b)));
        &c * &Scalar::rho().pow(k).unwrap()
    })
}

fn sum() -> impl Strategy<Value = Scalar> {
    prop::collection::vec(term(), 1..3)
        .prop_map(|ts| ts.iter().fold(Scalar::zero(), |acc, t| &acc + t))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (sum(), prop::option::of(sum())).prop_map(|(n, d)| match d {
        Some(d) if !d.is_zero() => &n / &d,
        _ => n,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a / &a).is_one());
        }
    }

    #[test]
    fn scalar_text_round_trips(a in scalar()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn rationals_match_ratio(a in small_rational(), b in small_rational()) {
        let (x, y) = (rational(a), rational(b));
        let (rx, ry) = (Ratio::new(a.0 as i128, a.1 as i128), Ratio::new(b.0 as i128, b.1 as i128));
        let show = |r: Ratio<i128>| if *r.denom() == 1 { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) };
        prop_assert_eq!((&x + &y).to_string(), show(rx + ry));
        prop_assert_eq!((&x * &y).to_string(), show(rx * ry));
    }
}

fn free_fields(cfg: &SymplecticConfig) -> Vec<Field> {
    let (b, g) = (beta_field(cfg, 1).unwrap(), gamma_field(cfg, 1).unwrap());
    vec![
        b.clone(),
        g.clone(),
        nproduct(&b, &g, -1),
        nproduct(&b, &b, -1),
        nproduct(&g, &g, -2),
    ]
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((1u32..=2, 1u32..=4, 1u32..=2), 0..3).prop_map(|fs| {
        Monomial::from_factors(fs.into_iter().map(|(s, d, e)| (VariableId::new(s, d), e)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Changing the input inside `U_p`, `p` the reported input precision,
    /// does not change the output mod `U_n`.
    #[test]
    fn input_precision_is_sound(
        which in 0usize..5,
        gaussian in any::<bool>(),
        m in -3i64..=3,
        n in 1u32..=4,
        base in monomial(),
        tail in monomial(),
        species in 1u32..=2,
    ) {
        let cfg = if gaussian { SymplecticConfig::gaussian(1) } else { SymplecticConfig::plain(1) };
        let f = &free_fields(&cfg)[which];
        let p = f.input_precision(m, n);
        let deep = tail.times(VariableId::new(species, p + 1));
        let v = FilteredVector::basis(base.clone());
        let mut w = v.clone();
        w.add_term(deep, Scalar::from_integer(3));
        prop_assert_eq!(f.apply_mode(m, &v, n).unwrap(), f.apply_mode(m, &w, n).unwrap());
        prop_assert_eq!(f.apply_mode(m, &v, n).unwrap(), f.apply_mode(m, &v, n + 2).unwrap().truncate(n).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Products of mutually local fields stay local with both factors.
    #[test]
    fn locality_is_closed_under_products(i in 0usize..2, j in 0usize..2, k in 0usize..2, l in -2i64..=0) {
        let cfg = SymplecticConfig::plain(1);
        let gens = [beta_field(&cfg, 1).unwrap(), gamma_field(&cfg, 1).unwrap()];
        let prod = nproduct(&gens[i], &gens[j], l);
        let probes = cfg.probes(2, 2);
        let window = ModeWindow::new(-1, 1);
        prop_assert!(locality_holds(&prod, &gens[k], 4, window, &probes, 3).unwrap());
        prop_assert!(locality_holds(&gens[k], &prod, 4, window, &probes, 3).unwrap());
    }
}

fn sl3_element() -> impl Strategy<Value = SlnElement> {
    prop::collection::vec(-3i64..=3, 8).prop_map(|c| {
        let mut entries = Vec::new();
        let mut it = c.into_iter();
        for u in 1..=3u32 {
            for v in 1..=3u32 {
                if u != v {
                    entries.push(((u, v), Rational::from_integer(it.next().unwrap())));
                }
            }
        }
        let h12 = SlnElement::h(1, 2).scaled(&Rational::from_integer(it.next().unwrap()));
        let h = SlnElement::h(2, 3)
            .scaled(&Rational::from_integer(it.next().unwrap()))
            .plus(&h12);
        SlnElement::from_entries(entries).unwrap().plus(&h)
    })
}

proptest! {
    #[test]
    fn matrix_bracket_is_a_lie_bracket(a in sl3_element(), b in sl3_element(), c in sl3_element()) {
        let jacobi = a.bracket(&b.bracket(&c)).plus(&b.bracket(&c.bracket(&a))).plus(&c.bracket(&a.bracket(&b)));
        prop_assert!(jacobi.is_zero());
        prop_assert_eq!(a.bracket(&b), b.bracket(&a).scaled(&Rational::from_integer(-1)));
        prop_assert_eq!(a.bracket(&b).trace_form(&c), a.trace_form(&b.bracket(&c)));
    }
}
