use alloc::format;
use core::ops::RangeInclusive;

use super::Field;
use crate::filtered::{Basis, FilteredVector, Precision};
use crate::report::{record, CheckEntry, ModeWindow};
use crate::scalar::{binomial, Scalar};
use crate::Error;

fn locality_sum<B: Basis>(
    a: &Field<B>,
    b: &Field<B>,
    order: u32,
    m: i64,
    k: i64,
    v: &FilteredVector<B>,
    n: u32,
) -> Result<FilteredVector<B>, Error> {
    let mut acc = FilteredVector::zero(Precision::Finite(n));
    for s in 0..=order as i64 {
        let c = binomial(order as i64, s as u32);
        let c = if s % 2 == 0 { c } else { -c };
        acc.add_scaled(
            &Scalar::from_rational(c),
            &a.commutator(m - s, b, k + s, v, n)?,
        );
    }
    Ok(acc)
}

/// Whether `Σ_s (−1)^s C(order,s)[a_(m−s), b_(k+s)]` kills every probe mod
/// `U_n` for all `(m, k)` in the window.
pub fn locality_holds<B: Basis>(
    a: &Field<B>,
    b: &Field<B>,
    order: u32,
    window: ModeWindow,
    probes: &[FilteredVector<B>],
    n: u32,
) -> Result<bool, Error> {
    for (m, k) in window.pairs() {
        for v in probes {
            if !locality_sum(a, b, order, m, k, v, n)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn check_locality<B: Basis>(
    a: &Field<B>,
    b: &Field<B>,
    order: u32,
    window: ModeWindow,
    probes: &[FilteredVector<B>],
    n: u32,
) -> CheckEntry {
    let mut entry = CheckEntry::new("locality")
        .param("a", a.label())
        .param("b", b.label())
        .param("order", order)
        .param("window", window)
        .param("N", n);
    'outer: for (m, k) in window.pairs() {
        for (pi, v) in probes.iter().enumerate() {
            let Some(r) = record(&mut entry, locality_sum(a, b, order, m, k, v, n)) else {
                break 'outer;
            };
            if !r.is_zero() {
                entry.fail(format!("m={m} k={k} probe #{pi}: {r}"));
                break 'outer;
            }
        }
    }
    entry
}

/// Parameters of [`check_field_axioms`].
#[derive(Clone, Debug)]
pub struct AxiomOptions {
    pub precisions: RangeInclusive<u32>,
    pub margin: u32,
    /// Also require that `K(N) − 1` is not a valid bound on the probes.
    pub require_sharp: bool,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            precisions: 1..=5,
            margin: 3,
            require_sharp: false,
        }
    }
}

/// Condition (2) of a field: `Im a_(−k) ⊆ U_N` on every probe for
/// `K(N) ≤ k ≤ K(N) + margin`. The smallest bound valid on the probes is
/// recorded per `N` as `measured_K`.
pub fn check_field_axioms<B: Basis>(
    a: &Field<B>,
    probes: &[FilteredVector<B>],
    opts: &AxiomOptions,
) -> CheckEntry {
    let mut entry = CheckEntry::new("field-axioms")
        .param("field", a.label())
        .param(
            "N",
            format!("{}..{}", opts.precisions.start(), opts.precisions.end()),
        )
        .param("margin", opts.margin)
        .param("probes", probes.len());
    for n in opts.precisions.clone() {
        let big_k = a.deep_image(n);
        for k in big_k..=big_k + opts.margin as i64 {
            for (pi, v) in probes.iter().enumerate() {
                let Some(r) = record(&mut entry, a.apply_mode(-k, v, n)) else {
                    return entry;
                };
                if !r.is_zero() {
                    entry.fail(format!("N={n} K={big_k} mode={} probe #{pi}: {r}", -k));
                    return entry;
                }
            }
        }
        // Largest k below K(N) with a nonzero image, if any.
        let mut measured = 1;
        for k in (1..big_k).rev() {
            let mut nonzero = false;
            for v in probes {
                let Some(r) = record(&mut entry, a.apply_mode(-k, v, n)) else {
                    return entry;
                };
                if !r.is_zero() {
                    nonzero = true;
                    break;
                }
            }
            if nonzero {
                measured = k + 1;
                break;
            }
        }
        entry.set_param(&format!("K({n})"), big_k);
        entry.set_param(&format!("measured_K({n})"), measured);
        if opts.require_sharp && measured != big_k {
            entry.fail(format!(
                "N={n}: certified K={big_k} but already {measured} works on the probes"
            ));
        }
    }
    entry
}

/// Condition (1): each mode's image mod `U_n` is unchanged when the probe
/// is truncated to the certified input precision.
pub fn check_continuity<B: Basis>(
    a: &Field<B>,
    window: ModeWindow,
    probes: &[FilteredVector<B>],
    n: u32,
) -> CheckEntry {
    let mut entry = CheckEntry::new("continuity")
        .param("field", a.label())
        .param("window", window)
        .param("N", n)
        .param("probes", probes.len());
    for m in window.iter() {
        let req = a.input_precision(m, n);
        for (pi, v) in probes.iter().enumerate() {
            let full = a.apply_mode(m, v, n);
            let cut = v.truncate(req).and_then(|t| a.apply_mode(m, &t, n));
            let (Some(full), Some(cut)) = (record(&mut entry, full), record(&mut entry, cut))
            else {
                return entry;
            };
            if full != cut {
                entry.fail(format!(
                    "mode={m} input precision {req} probe #{pi}: {full} vs {cut}"
                ));
                return entry;
            }
        }
    }
    entry
}

/// Every internal cutoff extended by `slack` terms gives the same result.
pub fn check_cutoff_soundness<B: Basis>(
    a: &Field<B>,
    window: ModeWindow,
    probes: &[FilteredVector<B>],
    n: u32,
    slack: u32,
) -> CheckEntry {
    let mut entry = CheckEntry::new("cutoff-soundness")
        .param("field", a.label())
        .param("window", window)
        .param("N", n)
        .param("slack", slack);
    for m in window.iter() {
        for (pi, v) in probes.iter().enumerate() {
            let base = a.apply_mode(m, v, n);
            let wide = a.apply_mode_with_slack(m, v, n, slack);
            let (Some(base), Some(wide)) = (record(&mut entry, base), record(&mut entry, wide))
            else {
                return entry;
            };
            if base != wide {
                entry.fail(format!("mode={m} probe #{pi}: {base} vs {wide}"));
                return entry;
            }
        }
    }
    entry
}
