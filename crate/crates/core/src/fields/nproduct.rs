use alloc::format;
use alloc::string::String;

use super::{Field, FieldModes};
use crate::filtered::{Basis, FilteredVector, Precision};
use crate::scalar::{binomial, Rational, Scalar};
use crate::Error;

struct NProduct<B: Basis> {
    a: Field<B>,
    b: Field<B>,
    n: i64,
}

impl<B: Basis> NProduct<B> {
    fn sign(k: i64) -> Rational {
        if k.rem_euclid(2) == 0 {
            Rational::ONE
        } else {
            Rational::from_integer(-1)
        }
    }

    /// Number of terms of the first sum that can leave `U_out`.
    fn first_len(&self, out: u32) -> i64 {
        let k = (self.a.deep_image(out) + self.n).max(0);
        if self.n >= 0 {
            k.min(self.n + 1)
        } else {
            k
        }
    }

    fn second_len(&self, j: i64, out: u32) -> i64 {
        let k = (self.b.deep_image(out) + self.n + j).max(0);
        if self.n >= 0 {
            k.min(self.n + 1)
        } else {
            k
        }
    }

    fn first_precision(&self, i: i64, j: i64, out: u32) -> (u32, u32) {
        let mid = self.a.input_precision(self.n - i, out);
        (mid, self.b.input_precision(i + j, mid))
    }

    fn second_precision(&self, i: i64, j: i64, out: u32) -> (u32, u32) {
        let mid = self.b.input_precision(self.n - i + j, out);
        (mid, self.a.input_precision(i, mid))
    }
}

fn apply<B: Basis>(
    f: &Field<B>,
    mode: i64,
    v: &FilteredVector<B>,
    n: u32,
    slack: u32,
) -> Result<FilteredVector<B>, Error> {
    if slack == 0 {
        f.apply_mode(mode, v, n)
    } else {
        f.apply_mode_with_slack(mode, v, n, slack)
    }
}

impl<B: Basis> FieldModes<B> for NProduct<B> {
    fn apply_to_basis(&self, j: i64, b: &B, out: u32) -> Result<FilteredVector<B>, Error> {
        self.apply_with_slack(j, b, out, 0)
    }

    fn apply_with_slack(
        &self,
        j: i64,
        b: &B,
        out: u32,
        slack: u32,
    ) -> Result<FilteredVector<B>, Error> {
        let v = FilteredVector::basis(b.clone());
        let mut acc = FilteredVector::zero(Precision::Finite(out));
        let extra = slack as i64;
        for i in 0..self.first_len(out) + extra {
            let c = &Self::sign(i) * &binomial(self.n, i as u32);
            if c.is_zero() {
                continue;
            }
            let (mid, _) = self.first_precision(i, j, out);
            let inner = apply(&self.b, i + j, &v, mid, slack)?;
            if inner.is_zero() {
                continue;
            }
            acc.add_scaled(
                &Scalar::from_rational(c),
                &apply(&self.a, self.n - i, &inner, out, slack)?,
            );
        }
        for i in 0..self.second_len(j, out) + extra {
            let c = -(&Self::sign(self.n + i) * &binomial(self.n, i as u32));
            if c.is_zero() {
                continue;
            }
            let (mid, _) = self.second_precision(i, j, out);
            let inner = apply(&self.a, i, &v, mid, slack)?;
            if inner.is_zero() {
                continue;
            }
            acc.add_scaled(
                &Scalar::from_rational(c),
                &apply(&self.b, self.n - i + j, &inner, out, slack)?,
            );
        }
        Ok(acc)
    }

    fn input_precision(&self, j: i64, out: u32) -> u32 {
        let first = (0..self.first_len(out)).map(|i| self.first_precision(i, j, out).1);
        let second = (0..self.second_len(j, out)).map(|i| self.second_precision(i, j, out).1);
        first.chain(second).fold(out, u32::max)
    }

    fn deep_image(&self, out: u32) -> i64 {
        let mut k = self.n + self.b.deep_image(out);
        for i in 0..self.first_len(out) {
            let mid = self.a.input_precision(self.n - i, out);
            k = k.max(i + self.b.deep_image(mid));
        }
        k.max(1)
    }

    fn label(&self) -> String {
        format!("nprod({},{},{})", self.a.label(), self.b.label(), self.n)
    }
}

/// The `n`-th normal product `a(z)_(n) b(z)`, evaluated lazily with cutoffs
/// taken from the operands' deep-image certificates.
pub fn nproduct<B: Basis>(a: &Field<B>, b: &Field<B>, n: i64) -> Field<B> {
    Field::new(NProduct {
        a: a.clone(),
        b: b.clone(),
        n,
    })
    .cached()
}

/// `Σ_{i=0}^{n} C(n,i)(−1)^{n−i} [a_(i), b_(j−i+n)]·v` mod `U_out`, the
/// closed form of the `j`-th mode of `a_(n) b` for `n ≥ 0`.
pub fn commutator_formula<B: Basis>(
    a: &Field<B>,
    b: &Field<B>,
    n: u32,
    j: i64,
    v: &FilteredVector<B>,
    out: u32,
) -> Result<FilteredVector<B>, Error> {
    let mut acc = FilteredVector::zero(Precision::Finite(out));
    let n = n as i64;
    for i in 0..=n {
        let c = &binomial(n, i as u32) * &NProduct::<B>::sign(n - i);
        let br = a.commutator(i, b, j - i + n, v, out)?;
        acc.add_scaled(&Scalar::from_rational(c), &br);
    }
    Ok(acc)
}

/// For each `n` in `orders`, the lazy modes of `a_(n) b` agree with
/// [`commutator_formula`] on every probe for `j` in the window.
pub fn check_nproduct_consistency<B: Basis>(
    a: &Field<B>,
    b: &Field<B>,
    orders: core::ops::RangeInclusive<u32>,
    window: crate::report::ModeWindow,
    probes: &[FilteredVector<B>],
    out: u32,
) -> crate::report::CheckEntry {
    let mut entry = crate::report::CheckEntry::new("nproduct-consistency")
        .param("a", a.label())
        .param("b", b.label())
        .param("n", format!("{}..{}", orders.start(), orders.end()))
        .param("window", window)
        .param("N", out)
        .param("probes", probes.len());
    for n in orders {
        let c = nproduct(a, b, n as i64);
        for j in window.iter() {
            for (pi, v) in probes.iter().enumerate() {
                let lazy = c.apply_mode(j, v, out);
                let closed = commutator_formula(a, b, n, j, v, out);
                let (Some(lazy), Some(closed)) = (
                    crate::report::record(&mut entry, lazy),
                    crate::report::record(&mut entry, closed),
                ) else {
                    return entry;
                };
                if lazy != closed {
                    entry.fail(format!(
                        "n={n} j={j} probe #{pi}: lazy {lazy} vs closed {closed}"
                    ));
                    return entry;
                }
            }
        }
    }
    entry
}

/// Input precision needed by [`check_nproduct_consistency`].
pub fn nproduct_probe_precision<B: Basis>(
    a: &Field<B>,
    b: &Field<B>,
    orders: core::ops::RangeInclusive<u32>,
    window: crate::report::ModeWindow,
    out: u32,
) -> u32 {
    let mut p = out;
    for n in orders {
        let c = nproduct(a, b, n as i64);
        for j in window.iter() {
            p = p.max(c.input_precision(j, out));
            for i in 0..=n as i64 {
                p = p.max(a.commutator_precision(i, b, j - i + n as i64, out));
            }
        }
    }
    p
}
