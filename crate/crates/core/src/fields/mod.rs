//! Lazy fields on filtered spaces.
//!
//! A field is a family of modes `a_(k)` (the coefficient of `z^{-k-1}`),
//! evaluated on demand at a requested output precision, together with two
//! certificates: the input precision each mode needs (continuity) and the
//! bound `K(N)` past which negative modes land in `U_N`.

mod checks;
mod dual;
mod model;
mod nproduct;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

pub use checks::{
    check_continuity, check_cutoff_soundness, check_field_axioms, check_locality, locality_holds,
    AxiomOptions,
};
pub use dual::{check_dual_field, dual_mode, dual_reach, DualFunctional};
pub use model::ModelField;
pub use nproduct::{
    check_nproduct_consistency, commutator_formula, nproduct, nproduct_probe_precision,
};

use crate::filtered::{Basis, FilteredVector, Monomial, Precision};
use crate::scalar::Scalar;
use crate::Error;

/// The mode data of a field.
pub trait FieldModes<B: Basis>: Send + Sync {
    /// `a_(mode)·b` modulo `U_n`, for an exact basis element `b`.
    fn apply_to_basis(&self, mode: i64, b: &B, n: u32) -> Result<FilteredVector<B>, Error>;

    /// As [`apply_to_basis`](Self::apply_to_basis) with every internal
    /// truncation of an infinite sum extended by `slack` terms.
    fn apply_with_slack(
        &self,
        mode: i64,
        b: &B,
        n: u32,
        slack: u32,
    ) -> Result<FilteredVector<B>, Error> {
        let _ = slack;
        self.apply_to_basis(mode, b, n)
    }

    /// `a_(mode)·v` modulo `U_n`; `v` is already known to be precise enough.
    fn apply_vector(
        &self,
        mode: i64,
        v: &FilteredVector<B>,
        n: u32,
        slack: u32,
    ) -> Result<FilteredVector<B>, Error> {
        let mut out = FilteredVector::zero(Precision::Finite(n));
        for (b, c) in v.iter() {
            out.add_scaled(c, &self.apply_with_slack(mode, b, n, slack)?);
        }
        Ok(out)
    }

    /// Input precision needed for `a_(mode)` to be known mod `U_n`.
    fn input_precision(&self, mode: i64, n: u32) -> u32;

    /// `K(n)`: `Im a_(-k) ⊆ U_n` for all `k ≥ K(n)`.
    fn deep_image(&self, n: u32) -> i64;

    fn label(&self) -> String;
}

#[cfg(feature = "std")]
type MemoMap<B> = std::sync::RwLock<alloc::collections::BTreeMap<(i64, B, u32), FilteredVector<B>>>;

/// A field with shared, immutable mode data.
pub struct Field<B: Basis = Monomial> {
    modes: Arc<dyn FieldModes<B>>,
    #[cfg(feature = "std")]
    memo: Option<Arc<MemoMap<B>>>,
}

impl<B: Basis> Clone for Field<B> {
    fn clone(&self) -> Self {
        Field {
            modes: Arc::clone(&self.modes),
            #[cfg(feature = "std")]
            memo: self.memo.clone(),
        }
    }
}

impl<B: Basis> core::fmt::Debug for Field<B> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.label())
    }
}

impl<B: Basis> Field<B> {
    pub fn new(modes: impl FieldModes<B> + 'static) -> Self {
        Field {
            modes: Arc::new(modes),
            #[cfg(feature = "std")]
            memo: None,
        }
    }

    /// Memoizes basis evaluations keyed by (mode, basis element, precision).
    /// Without the `std` feature this is a no-op.
    #[cfg(feature = "std")]
    pub fn cached(mut self) -> Self {
        self.memo = Some(Arc::new(MemoMap::default()));
        self
    }

    #[cfg(not(feature = "std"))]
    pub fn cached(self) -> Self {
        self
    }

    pub fn label(&self) -> String {
        self.modes.label()
    }

    pub fn input_precision(&self, mode: i64, n: u32) -> u32 {
        self.modes.input_precision(mode, n)
    }

    pub fn deep_image(&self, n: u32) -> i64 {
        self.modes.deep_image(n)
    }

    pub fn apply_basis(&self, mode: i64, b: &B, n: u32) -> Result<FilteredVector<B>, Error> {
        #[cfg(feature = "std")]
        if let Some(memo) = &self.memo {
            let key = (mode, b.clone(), n);
            if let Some(v) = memo.read().expect("memo lock").get(&key) {
                return Ok(v.clone());
            }
            let v = self.modes.apply_to_basis(mode, b, n)?;
            memo.write().expect("memo lock").insert(key, v.clone());
            return Ok(v);
        }
        self.modes.apply_to_basis(mode, b, n)
    }

    /// `a_(mode)·v` modulo `U_n`.
    pub fn apply_mode(
        &self,
        mode: i64,
        v: &FilteredVector<B>,
        n: u32,
    ) -> Result<FilteredVector<B>, Error> {
        self.apply_mode_inner(mode, v, n, None)
    }

    /// [`apply_mode`](Self::apply_mode) with every cutoff extended by `slack`.
    pub fn apply_mode_with_slack(
        &self,
        mode: i64,
        v: &FilteredVector<B>,
        n: u32,
        slack: u32,
    ) -> Result<FilteredVector<B>, Error> {
        self.apply_mode_inner(mode, v, n, Some(slack))
    }

    fn apply_mode_inner(
        &self,
        mode: i64,
        v: &FilteredVector<B>,
        n: u32,
        slack: Option<u32>,
    ) -> Result<FilteredVector<B>, Error> {
        let required = self.input_precision(mode, n);
        if !v.precision().covers(required) {
            return Err(Error::InsufficientPrecision {
                required,
                available: v.precision(),
            });
        }
        #[cfg(feature = "std")]
        if let (Some(_), None) = (&self.memo, slack) {
            let mut out = FilteredVector::zero(Precision::Finite(n));
            for (b, c) in v.iter() {
                out.add_scaled(c, &self.apply_basis(mode, b, n)?);
            }
            return Ok(out);
        }
        self.modes.apply_vector(mode, v, n, slack.unwrap_or(0))
    }

    /// `[a_(m), b_(k)]·v` modulo `U_n`.
    pub fn commutator(
        &self,
        m: i64,
        other: &Field<B>,
        k: i64,
        v: &FilteredVector<B>,
        n: u32,
    ) -> Result<FilteredVector<B>, Error> {
        let ab = self.apply_mode(m, &other.apply_mode(k, v, self.input_precision(m, n))?, n)?;
        let ba = other.apply_mode(k, &self.apply_mode(m, v, other.input_precision(k, n))?, n)?;
        let mut out = ab;
        out.add_scaled(&Scalar::from_integer(-1), &ba);
        Ok(out)
    }

    /// Input precision for `[a_(m), b_(k)]` known mod `U_n`.
    pub fn commutator_precision(&self, m: i64, other: &Field<B>, k: i64, n: u32) -> u32 {
        other
            .input_precision(k, self.input_precision(m, n))
            .max(self.input_precision(m, other.input_precision(k, n)))
    }
}

struct Identity;

impl<B: Basis> FieldModes<B> for Identity {
    fn apply_to_basis(&self, mode: i64, b: &B, n: u32) -> Result<FilteredVector<B>, Error> {
        if mode == -1 {
            FilteredVector::basis(b.clone()).truncate(n)
        } else {
            Ok(FilteredVector::zero(Precision::Finite(n)))
        }
    }

    fn input_precision(&self, _mode: i64, n: u32) -> u32 {
        n
    }

    fn deep_image(&self, _n: u32) -> i64 {
        2
    }

    fn label(&self) -> String {
        String::from("id")
    }
}

/// `Y(1, z) = Id`: the only nonzero mode is `a_(-1) = Id`.
pub fn identity<B: Basis>() -> Field<B> {
    Field::new(Identity)
}

struct Combination<B: Basis> {
    parts: Vec<(Scalar, Field<B>)>,
}

impl<B: Basis> FieldModes<B> for Combination<B> {
    fn apply_to_basis(&self, mode: i64, b: &B, n: u32) -> Result<FilteredVector<B>, Error> {
        self.apply_with_slack(mode, b, n, 0)
    }

    fn apply_with_slack(
        &self,
        mode: i64,
        b: &B,
        n: u32,
        slack: u32,
    ) -> Result<FilteredVector<B>, Error> {
        let mut out = FilteredVector::zero(Precision::Finite(n));
        let v = FilteredVector::basis(b.clone());
        for (c, f) in &self.parts {
            let img = if slack == 0 {
                f.apply_basis(mode, b, n)?
            } else {
                f.apply_mode_with_slack(mode, &v, n, slack)?
            };
            out.add_scaled(c, &img);
        }
        Ok(out)
    }

    fn input_precision(&self, mode: i64, n: u32) -> u32 {
        self.parts
            .iter()
            .map(|(_, f)| f.input_precision(mode, n))
            .max()
            .unwrap_or(n)
    }

    fn deep_image(&self, n: u32) -> i64 {
        self.parts
            .iter()
            .map(|(_, f)| f.deep_image(n))
            .max()
            .unwrap_or(1)
    }

    fn label(&self) -> String {
        let mut s = String::new();
        for (k, (c, f)) in self.parts.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            if c.is_one() {
                s.push_str(&f.label());
            } else {
                s.push_str(&format!("({c}) * {}", f.label()));
            }
        }
        s
    }
}

/// `Σ cᵢ·fᵢ`.
pub fn combination<B: Basis>(parts: Vec<(Scalar, Field<B>)>) -> Field<B> {
    Field::new(Combination { parts })
}

pub fn scaled<B: Basis>(c: Scalar, f: &Field<B>) -> Field<B> {
    combination(alloc::vec![(c, f.clone())])
}

struct Derivative<B: Basis> {
    inner: Field<B>,
}

impl<B: Basis> FieldModes<B> for Derivative<B> {
    fn apply_to_basis(&self, mode: i64, b: &B, n: u32) -> Result<FilteredVector<B>, Error> {
        self.apply_with_slack(mode, b, n, 0)
    }

    fn apply_with_slack(
        &self,
        mode: i64,
        b: &B,
        n: u32,
        slack: u32,
    ) -> Result<FilteredVector<B>, Error> {
        if mode == 0 {
            return Ok(FilteredVector::zero(Precision::Finite(n)));
        }
        let img = if slack == 0 {
            self.inner.apply_basis(mode - 1, b, n)?
        } else {
            self.inner.apply_mode_with_slack(
                mode - 1,
                &FilteredVector::basis(b.clone()),
                n,
                slack,
            )?
        };
        Ok(img.scaled(&Scalar::from_integer(-mode)))
    }

    fn input_precision(&self, mode: i64, n: u32) -> u32 {
        self.inner.input_precision(mode - 1, n)
    }

    fn deep_image(&self, n: u32) -> i64 {
        (self.inner.deep_image(n) - 1).max(1)
    }

    fn label(&self) -> String {
        format!("d({})", self.inner.label())
    }
}

/// `d/dz a(z)`, so `(∂a)_(m) = −m·a_(m−1)`.
pub fn derivative<B: Basis>(a: &Field<B>) -> Field<B> {
    Field::new(Derivative { inner: a.clone() })
}

/// Boxed mode function used by [`ModelField`].
pub type ModeFn<T> = Box<dyn Fn(i64) -> T + Send + Sync>;
