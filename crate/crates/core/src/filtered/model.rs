//! Function models: polynomials in the coordinates `x_{s,-n}`, optionally
//! times a Gaussian `e^{-a Σ x²}` over all coordinates.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::{FilteredVector, Monomial, Precision, VariableId};
use crate::scalar::{Rational, Scalar};
use crate::Error;

/// The Gaussian factor multiplying every basis monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    /// Plain polynomials.
    None,
    /// `e^{-½ Σ x²}`.
    Half,
    /// `φ_c = e^{-ρc Σ x²}`, with `c = σ^{-2}` a square of a positive rational.
    Gaussian { c: Rational, sigma: Rational },
}

/// A model space: `species` coordinate families over all depths, plus a twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpace {
    species: u32,
    twist: Twist,
    /// The scalar `a` of the twist `e^{-a Σ x²}`.
    twist_scalar: Scalar,
}

impl ModelSpace {
    pub fn plain(species: u32) -> Self {
        ModelSpace {
            species,
            twist: Twist::None,
            twist_scalar: Scalar::zero(),
        }
    }

    pub fn half_gaussian(species: u32) -> Self {
        ModelSpace {
            species,
            twist: Twist::Half,
            twist_scalar: Scalar::ratio(1, 2),
        }
    }

    /// The `φ_c` model; `c` must be the square of a positive rational.
    pub fn phi(species: u32, c: Rational) -> Result<Self, Error> {
        if c.signum() <= 0 {
            return Err(Error::UnsupportedModel(format!("c = {c} is not positive")));
        }
        let root = c.sqrt_exact().ok_or_else(|| {
            Error::UnsupportedModel(format!("c = {c} is not the square of a rational"))
        })?;
        let sigma = root.checked_inv().expect("positive");
        let twist_scalar = &Scalar::rho() * &Scalar::from_rational(c.clone());
        Ok(ModelSpace {
            species,
            twist: Twist::Gaussian { c, sigma },
            twist_scalar,
        })
    }

    pub fn species(&self) -> u32 {
        self.species
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn twist_scalar(&self) -> &Scalar {
        &self.twist_scalar
    }

    /// `σ = c^{-1/2}` for the `φ_c` model.
    pub fn sigma(&self) -> Option<&Rational> {
        match &self.twist {
            Twist::Gaussian { sigma, .. } => Some(sigma),
            _ => None,
        }
    }

    /// `λ_c = σ^n`, the π_t eigenvalue of `φ_c`.
    pub fn lambda(&self) -> Option<Rational> {
        self.sigma().map(|s| s.pow(self.species as i32))
    }

    pub fn check_variable(&self, v: VariableId) -> Result<(), Error> {
        if v.species == 0 || v.species > self.species {
            return Err(Error::IndexOutOfRange {
                what: "species",
                index: v.species as i64,
                min: 1,
                max: self.species as i64,
            });
        }
        if v.depth == 0 {
            return Err(Error::IndexOutOfRange {
                what: "depth",
                index: 0,
                min: 1,
                max: i64::MAX,
            });
        }
        Ok(())
    }

    /// `∂/∂v` on `m·e^{-aΣx²}`: `(∂m − 2a·v·m)·e^{-aΣx²}`.
    pub fn deriv_monomial(
        &self,
        v: VariableId,
        m: &Monomial,
        out: &mut FilteredVector,
        coeff: &Scalar,
    ) {
        if let Some((e, q)) = m.without_one(v) {
            out.add_term(q, coeff.scale_rational(&Rational::from_integer(e as i64)));
        }
        if !self.twist_scalar.is_zero() {
            let c = (coeff * &self.twist_scalar).scale_rational(&Rational::from_integer(-2));
            out.add_term(m.times(v), c);
        }
    }

    /// π_t on `m·φ_c`: integrate the depth-1 coordinates against the Gaussian
    /// and shift every remaining depth down by one. `None` when the moment vanishes.
    pub fn pi_t_monomial(&self, m: &Monomial) -> Result<Option<(Scalar, Monomial)>, Error> {
        let (c, sigma) = match &self.twist {
            Twist::Gaussian { c, sigma } => (c, sigma),
            _ => return Err(Error::UnsupportedModel("π_t requires the φ_c model".into())),
        };
        let (top, rest) = m.split_depth_one();
        let mut half_total = 0i32;
        let mut dfact = Rational::ONE;
        for (_, e) in top {
            if e % 2 == 1 {
                return Ok(None);
            }
            half_total += (*e / 2) as i32;
            dfact = &dfact * &double_factorial(*e as i64 - 1);
        }
        let mut moment = Scalar::from_rational(&dfact * &sigma.pow(self.species as i32));
        if half_total > 0 {
            // (2ρc)^{-k}
            let two_rho_c = (&Scalar::rho() * &Scalar::from_rational(c.clone()))
                .scale_rational(&Rational::from_integer(2));
            moment = &moment * &two_rho_c.pow(-half_total)?;
        }
        Ok(Some((moment, Monomial::shifted_shallower(rest))))
    }
}

/// `k!!` with `(-1)!! = 0!! = 1`.
fn double_factorial(k: i64) -> Rational {
    let mut acc = 1i64;
    let mut j = k;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    Rational::from_integer(acc)
}

/// The primitive operators of the function models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimitiveOp {
    Mult(VariableId),
    Deriv(VariableId),
    PiT,
}

impl PrimitiveOp {
    /// Input precision needed for output known mod `U_n`.
    pub fn input_precision(&self, n: u32) -> u32 {
        match self {
            PrimitiveOp::Mult(_) => n,
            PrimitiveOp::Deriv(v) => n.max(v.depth),
            PrimitiveOp::PiT => n + 1,
        }
    }

    /// Output precision produced from input precision `p`, if any is determined.
    pub fn output_precision(&self, p: Precision) -> Option<Precision> {
        match (self, p) {
            (_, Precision::Exact) => Some(Precision::Exact),
            (PrimitiveOp::Mult(_), p) => Some(p),
            (PrimitiveOp::Deriv(v), Precision::Finite(m)) => {
                (m >= v.depth).then_some(Precision::Finite(m))
            }
            (PrimitiveOp::PiT, Precision::Finite(m)) => m.checked_sub(1).map(Precision::Finite),
        }
    }

    /// Applies the operator to an exact monomial, accumulating `coeff·op(m)` into `out`.
    pub fn apply_monomial(
        &self,
        space: &ModelSpace,
        m: &Monomial,
        coeff: &Scalar,
        out: &mut FilteredVector,
    ) -> Result<(), Error> {
        match self {
            PrimitiveOp::Mult(v) => out.add_term(m.times(*v), coeff.clone()),
            PrimitiveOp::Deriv(v) => space.deriv_monomial(*v, m, out, coeff),
            PrimitiveOp::PiT => {
                if let Some((c, img)) = space.pi_t_monomial(m)? {
                    out.add_term(img, coeff * &c);
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for PrimitiveOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimitiveOp::Mult(v) => write!(f, "{v}"),
            PrimitiveOp::Deriv(v) => write!(f, "d/d{v}"),
            PrimitiveOp::PiT => f.write_str("pi_t"),
        }
    }
}

/// Applies a primitive to a filtered vector, tracking precision.
pub fn apply_primitive(
    space: &ModelSpace,
    op: PrimitiveOp,
    v: &FilteredVector,
) -> Result<FilteredVector, Error> {
    match op {
        PrimitiveOp::Mult(x) | PrimitiveOp::Deriv(x) => space.check_variable(x)?,
        PrimitiveOp::PiT if space.sigma().is_none() => {
            return Err(Error::UnsupportedModel("π_t requires the φ_c model".into()))
        }
        PrimitiveOp::PiT => {}
    }
    let precision = op
        .output_precision(v.precision())
        .ok_or(Error::InsufficientPrecision {
            required: op.input_precision(0),
            available: v.precision(),
        })?;
    let mut out = FilteredVector::zero(precision);
    for (m, c) in v.iter() {
        op.apply_monomial(space, m, c, &mut out)?;
    }
    Ok(out)
}

/// All monomials in `species` families over depths `1..=max_depth` of total
/// degree `≤ max_degree`, in canonical order.
pub fn monomial_basis(species: u32, max_depth: u32, max_degree: u32) -> Vec<Monomial> {
    let vars: Vec<VariableId> = (1..=max_depth)
        .flat_map(|d| (1..=species).map(move |s| VariableId::new(s, d)))
        .collect();
    let mut out = Vec::new();
    fn rec(vars: &[VariableId], start: usize, left: u32, cur: &Monomial, out: &mut Vec<Monomial>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..vars.len() {
            rec(vars, i, left - 1, &cur.times(vars[i]), out);
        }
    }
    rec(&vars, 0, max_degree, &Monomial::one(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: u32, d: u32) -> VariableId {
        VariableId::new(s, d)
    }

    #[test]
    fn plain_derivative() {
        let space = ModelSpace::plain(2);
        let v = FilteredVector::basis(Monomial::var(x(1, 1)).times(x(1, 1)));
        let out = apply_primitive(&space, PrimitiveOp::Deriv(x(1, 1)), &v).unwrap();
        assert_eq!(
            out,
            FilteredVector::term(Scalar::from_integer(2), Monomial::var(x(1, 1)))
        );
    }

    #[test]
    fn twisted_derivative_of_gaussian() {
        let a = Scalar::ratio(1, 2);
        let space = ModelSpace::half_gaussian(2);
        let out = apply_primitive(
            &space,
            PrimitiveOp::Deriv(x(1, 1)),
            &FilteredVector::basis(Monomial::one()),
        )
        .unwrap();
        let expected = FilteredVector::term(
            (&a * &Scalar::from_integer(-2)).clone(),
            Monomial::var(x(1, 1)),
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn pi_t_eigenvalue_on_phi() {
        for (n, c, lam) in [
            (1, 4, Rational::new(1, 2)),
            (3, 4, Rational::new(1, 8)),
            (2, 1, Rational::ONE),
        ] {
            let space = ModelSpace::phi(n, Rational::from_integer(c)).unwrap();
            let out = apply_primitive(
                &space,
                PrimitiveOp::PiT,
                &FilteredVector::basis(Monomial::one()),
            )
            .unwrap();
            assert_eq!(
                out,
                FilteredVector::term(Scalar::from_rational(lam), Monomial::one())
            );
        }
    }

    #[test]
    fn pi_t_second_moment() {
        // ∫ y² e^{-πc y²} dy = σ / (2πc)
        let space = ModelSpace::phi(1, Rational::from_integer(4)).unwrap();
        let v = FilteredVector::basis(Monomial::var(x(1, 1)).times(x(1, 1)));
        let out = apply_primitive(&space, PrimitiveOp::PiT, &v).unwrap();
        let expected = &Scalar::ratio(1, 2) / &(&Scalar::rho() * &Scalar::from_integer(8));
        assert_eq!(out, FilteredVector::term(expected, Monomial::one()));
        let v = FilteredVector::basis(Monomial::var(x(1, 2)));
        let out = apply_primitive(&space, PrimitiveOp::PiT, &v).unwrap();
        assert_eq!(
            out,
            FilteredVector::term(Scalar::ratio(1, 2), Monomial::var(x(1, 1)))
        );
    }

    #[test]
    fn pi_t_needs_phi_model() {
        let v = FilteredVector::basis(Monomial::one());
        assert!(matches!(
            apply_primitive(&ModelSpace::plain(1), PrimitiveOp::PiT, &v),
            Err(Error::UnsupportedModel(_))
        ));
        assert!(ModelSpace::phi(1, Rational::from_integer(2)).is_err());
    }

    #[test]
    fn precision_transfer() {
        let space = ModelSpace::phi(1, Rational::ONE).unwrap();
        let v = FilteredVector::basis(Monomial::var(x(1, 2)))
            .truncate(3)
            .unwrap();
        assert_eq!(
            apply_primitive(&space, PrimitiveOp::PiT, &v)
                .unwrap()
                .precision(),
            Precision::Finite(2)
        );
        assert_eq!(
            apply_primitive(&space, PrimitiveOp::Mult(x(1, 5)), &v)
                .unwrap()
                .precision(),
            Precision::Finite(3)
        );
        assert!(apply_primitive(&space, PrimitiveOp::Deriv(x(1, 4)), &v).is_err());
    }

    #[test]
    fn basis_counts() {
        // 4 variables, degree ≤ 2: C(6, 2) = 15
        assert_eq!(monomial_basis(2, 2, 2).len(), 15);
        assert_eq!(monomial_basis(1, 3, 0), alloc::vec![Monomial::one()]);
    }
}
