//! Depth-filtered vectors.
//!
//! A vector is stored together with a precision `N`: only coefficients of
//! basis elements of maximal depth `≤ N` are known, i.e. the vector is a
//! class modulo `U_N`, the span of all basis elements of depth `> N`.

mod model;
mod monomial;
mod series;

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::String;
use core::fmt;

pub use model::{apply_primitive, monomial_basis, ModelSpace, PrimitiveOp, Twist};
pub use monomial::{filtration_degree, Monomial, VariableId};
pub use series::{OpTerm, OperatorSeries, TermFamily};

use crate::scalar::Scalar;
use crate::Error;

/// How far a vector is known: exactly, or modulo `U_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    Finite(u32),
    Exact,
}

impl Precision {
    pub fn covers(self, n: u32) -> bool {
        match self {
            Precision::Exact => true,
            Precision::Finite(m) => m >= n,
        }
    }

    pub fn min(self, other: Precision) -> Precision {
        match (self, other) {
            (Precision::Exact, p) | (p, Precision::Exact) => p,
            (Precision::Finite(a), Precision::Finite(b)) => Precision::Finite(a.min(b)),
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Precision::Finite(n) => Some(n),
            Precision::Exact => None,
        }
    }
}

impl PartialOrd for Precision {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Precision {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        use core::cmp::Ordering::*;
        match (self, other) {
            (Precision::Exact, Precision::Exact) => Equal,
            (Precision::Exact, _) => Greater,
            (_, Precision::Exact) => Less,
            (Precision::Finite(a), Precision::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Exact => f.write_str("exact"),
            Precision::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// A basis element of a depth-filtered space.
pub trait Basis: Clone + Ord + fmt::Display + fmt::Debug + Send + Sync + 'static {
    /// Largest depth occurring in the element; 0 for the unit/vacuum.
    fn max_depth(&self) -> u32;
}

/// Finite combination of basis elements known modulo `U_precision`.
#[derive(Clone, PartialEq, Eq)]
pub struct FilteredVector<B: Basis = Monomial> {
    terms: BTreeMap<B, Scalar>,
    precision: Precision,
}

impl<B: Basis> FilteredVector<B> {
    pub fn zero(precision: Precision) -> Self {
        FilteredVector {
            terms: BTreeMap::new(),
            precision,
        }
    }

    /// A single exact basis vector.
    pub fn basis(b: B) -> Self {
        Self::term(Scalar::one(), b)
    }

    /// `c·b`, exact.
    pub fn term(c: Scalar, b: B) -> Self {
        let mut v = Self::zero(Precision::Exact);
        v.add_term(b, c);
        v
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, Scalar> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: &B) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    /// Adds `c·b`, dropping it if `b` lies beyond the known precision.
    pub fn add_term(&mut self, b: B, c: Scalar) {
        if c.is_zero() || !self.precision.covers(b.max_depth()) {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c·other`; precision drops to the minimum of both.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Self) {
        self.lower_precision(other.precision);
        if c.is_zero() {
            return;
        }
        for (b, x) in other.iter() {
            if c.is_one() {
                self.add_term(b.clone(), x.clone());
            } else {
                self.add_term(b.clone(), c * x);
            }
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.precision);
        out.add_scaled(c, self);
        out
    }

    /// Drops all basis elements deeper than `n`, lowering precision to `n`.
    /// Requesting more than is known is an error.
    pub fn truncate(&self, n: u32) -> Result<Self, Error> {
        if !self.precision.covers(n) {
            return Err(Error::InsufficientPrecision {
                required: n,
                available: self.precision,
            });
        }
        let mut out = self.clone();
        out.lower_precision(Precision::Finite(n));
        Ok(out)
    }

    /// Lowers the precision (never raises it), discarding terms that become unknown.
    pub fn lower_precision(&mut self, p: Precision) {
        if p < self.precision {
            self.precision = p;
            if let Precision::Finite(n) = p {
                self.terms.retain(|b, _| b.max_depth() <= n);
            }
        }
    }

    /// Equality of the classes modulo `U_n`; both sides must be known that far.
    pub fn agrees_mod(&self, other: &Self, n: u32) -> Result<bool, Error> {
        Ok(self.truncate(n)?.terms == other.truncate(n)?.terms)
    }

    pub fn map_basis<C: Basis>(
        &self,
        mut f: impl FnMut(&B) -> FilteredVector<C>,
        precision: Precision,
    ) -> FilteredVector<C> {
        let mut out = FilteredVector::zero(precision);
        for (b, c) in self.iter() {
            let img = f(b);
            for (t, x) in img.iter() {
                out.add_term(t.clone(), c * x);
            }
        }
        out
    }
}

impl<B: Basis> FromIterator<(B, Scalar)> for FilteredVector<B> {
    fn from_iter<I: IntoIterator<Item = (B, Scalar)>>(iter: I) -> Self {
        let mut v = Self::zero(Precision::Exact);
        for (b, c) in iter {
            v.add_term(b, c);
        }
        v
    }
}

/// `Σ cᵢ·vᵢ` with precision the minimum of the inputs.
pub fn linear_combine<'a, B: Basis>(
    pairs: impl IntoIterator<Item = (&'a Scalar, &'a FilteredVector<B>)>,
) -> FilteredVector<B> {
    let mut out = FilteredVector::zero(Precision::Exact);
    for (c, v) in pairs {
        out.add_scaled(c, v);
    }
    out
}

fn write_coefficient(out: &mut String, c: &Scalar) {
    use alloc::string::ToString;
    let s = c.to_string();
    if s.contains(' ') {
        out.push('(');
        out.push_str(&s);
        out.push(')');
    } else {
        out.push_str(&s);
    }
}

impl<B: Basis> fmt::Display for FilteredVector<B> {
    /// `c1*b1 + c2*b2 @ precision N` (`@ exact` for exact vectors).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use alloc::string::ToString;
        let mut out = String::new();
        if self.terms.is_empty() {
            out.push('0');
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let bs = b.to_string();
            if bs == "1" {
                write_coefficient(&mut out, c);
            } else if c.is_one() {
                out.push_str(&bs);
            } else {
                write_coefficient(&mut out, c);
                out.push('*');
                out.push_str(&bs);
            }
        }
        match self.precision {
            Precision::Exact => write!(f, "{out} @ exact"),
            Precision::Finite(n) => write!(f, "{out} @ precision {n}"),
        }
    }
}

impl<B: Basis> fmt::Debug for FilteredVector<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
