use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::Field;
use crate::filtered::{Basis, FilteredVector, Precision};
use crate::scalar::Scalar;
use crate::Error;

/// A continuous functional: finite support, killing `U_vanishing_depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFunctional<B: Basis> {
    support: BTreeMap<B, Scalar>,
    vanishing_depth: u32,
}

impl<B: Basis> DualFunctional<B> {
    /// Support entries deeper than `vanishing_depth` are rejected.
    pub fn new(
        support: impl IntoIterator<Item = (B, Scalar)>,
        vanishing_depth: u32,
    ) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for (b, c) in support {
            if b.max_depth() > vanishing_depth {
                return Err(Error::IndexOutOfRange {
                    what: "support depth",
                    index: b.max_depth() as i64,
                    min: 0,
                    max: vanishing_depth as i64,
                });
            }
            if !c.is_zero() {
                map.insert(b, c);
            }
        }
        Ok(DualFunctional {
            support: map,
            vanishing_depth,
        })
    }

    /// The coefficient-of-`b` functional.
    pub fn coefficient(b: B, vanishing_depth: u32) -> Result<Self, Error> {
        Self::new([(b, Scalar::one())], vanishing_depth)
    }

    pub fn vanishing_depth(&self) -> u32 {
        self.vanishing_depth
    }

    pub fn support(&self) -> &BTreeMap<B, Scalar> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn evaluate(&self, v: &FilteredVector<B>) -> Result<Scalar, Error> {
        if !v.precision().covers(self.vanishing_depth) {
            return Err(Error::InsufficientPrecision {
                required: self.vanishing_depth,
                available: v.precision(),
            });
        }
        let mut acc = Scalar::zero();
        for (b, c) in &self.support {
            acc = &acc + &(c * &v.coefficient(b));
        }
        Ok(acc)
    }
}

/// `φ ∘ a_(n)`, restricted to the span of `basis`. The result kills
/// `U_M` with `M` the input precision `a_(n)` needs for output depth
/// `φ.vanishing_depth`; `basis` must reach depth `M`.
pub fn dual_mode<B: Basis>(
    a: &Field<B>,
    n: i64,
    phi: &DualFunctional<B>,
    basis: &[B],
) -> Result<DualFunctional<B>, Error> {
    let m = a.input_precision(n, phi.vanishing_depth);
    let reach = basis.iter().map(Basis::max_depth).max().unwrap_or(0);
    if reach < m {
        return Err(Error::InsufficientPrecision {
            required: m,
            available: Precision::Finite(reach),
        });
    }
    let mut support = Vec::new();
    for b in basis.iter().filter(|b| b.max_depth() <= m) {
        let img = a.apply_basis(n, b, phi.vanishing_depth)?;
        let val = phi.evaluate(&img)?;
        if !val.is_zero() {
            support.push((b.clone(), val));
        }
    }
    DualFunctional::new(support, m)
}

/// Input precision [`check_dual_field`] needs its basis to reach.
pub fn dual_reach<B: Basis>(a: &Field<B>, functionals: &[DualFunctional<B>], margin: u32) -> u32 {
    functionals
        .iter()
        .flat_map(|phi| {
            let n = phi.vanishing_depth;
            let k = a.deep_image(n);
            (k..=k + margin as i64).map(move |k| a.input_precision(-k, n))
        })
        .max()
        .unwrap_or(0)
}

/// For each functional `φ` killed by `U_N`, the dual modes `a*_(−k)φ`
/// vanish for `K(N) ≤ k ≤ K(N) + margin`.
pub fn check_dual_field<B: Basis>(
    a: &Field<B>,
    functionals: &[DualFunctional<B>],
    basis: &[B],
    margin: u32,
) -> crate::report::CheckEntry {
    let mut entry = crate::report::CheckEntry::new("dual-field")
        .param("field", a.label())
        .param("functionals", functionals.len())
        .param("margin", margin)
        .param("basis", basis.len());
    for phi in functionals {
        let n = phi.vanishing_depth;
        let k0 = a.deep_image(n);
        for k in k0..=k0 + margin as i64 {
            let Some(d) = crate::report::record(&mut entry, dual_mode(a, -k, phi, basis)) else {
                return entry;
            };
            if !d.is_zero() {
                entry.fail(alloc::format!(
                    "vanishing depth {n}, bound {k0}, mode {}: nonzero dual",
                    -k
                ));
                return entry;
            }
        }
    }
    entry
}
