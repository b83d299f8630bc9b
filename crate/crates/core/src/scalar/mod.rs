//! Exact coefficients: the field Q(i)(ρ), with ρ a formal transcendental
//! standing in for π and `τ = 2iρ` standing in for 2πi.

mod gaussian;
mod poly;
mod rational;
mod text;

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

pub use gaussian::GaussianRational;
pub use poly::RhoPoly;
pub use rational::Rational;
pub use text::parse_scalar;

use crate::Error;

/// A reduced fraction `num / den` of polynomials in ρ.
///
/// Canonical form: `den` is monic, `gcd(num, den) = 1`. Values of the form
/// `c·ρ^k` (including zero and every element of Q(i)) are stored inline
/// without polynomial buffers. Structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `c·ρ^k`; zero is `(0, 0)`.
    Mono(GaussianRational, i32),
    /// Anything else, reduced with `den` monic.
    Frac(RhoPoly, RhoPoly),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Mono(GaussianRational::ZERO, 0))
    }

    pub fn one() -> Self {
        Scalar(Repr::Mono(GaussianRational::ONE, 0))
    }

    pub fn from_gaussian(c: GaussianRational) -> Self {
        Scalar(Repr::Mono(c, 0))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_gaussian(GaussianRational::real(r))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(num, den))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::from_gaussian(GaussianRational::I)
    }

    /// The formal transcendental ρ (stands for π).
    pub fn rho() -> Self {
        Scalar(Repr::Mono(GaussianRational::ONE, 1))
    }

    /// `τ = 2iρ`, the stand-in for 2πi.
    pub fn tau() -> Self {
        Scalar(Repr::Mono(
            GaussianRational::new(Rational::ZERO, Rational::from_integer(2)),
            1,
        ))
    }

    fn mono(c: GaussianRational, k: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Scalar(Repr::Mono(c, k))
        }
    }

    /// Builds `num / den` and normalizes; errors when `den` is zero.
    pub fn from_parts(num: RhoPoly, den: RhoPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    /// Numerator and denominator of the canonical fraction.
    pub fn parts(&self) -> (RhoPoly, RhoPoly) {
        match &self.0 {
            Repr::Mono(c, k) if *k >= 0 => {
                (RhoPoly::monomial(c.clone(), *k as usize), RhoPoly::one())
            }
            Repr::Mono(c, k) => (
                RhoPoly::constant(c.clone()),
                RhoPoly::monomial(GaussianRational::ONE, (-k) as usize),
            ),
            Repr::Frac(n, d) => (n.clone(), d.clone()),
        }
    }

    pub fn numerator(&self) -> RhoPoly {
        self.parts().0
    }

    pub fn denominator(&self) -> RhoPoly {
        self.parts().1
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Mono(c, _) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Mono(c, 0) if c.is_one())
    }

    /// `Some((c, k))` when the value is `c·ρ^k`.
    pub fn as_monomial(&self) -> Option<(&GaussianRational, i32)> {
        match &self.0 {
            Repr::Mono(c, k) => Some((c, *k)),
            Repr::Frac(..) => None,
        }
    }

    /// The value as an element of Q(i) when it has no ρ dependence.
    pub fn as_gaussian(&self) -> Option<&GaussianRational> {
        match &self.0 {
            Repr::Mono(c, 0) => Some(c),
            Repr::Mono(c, _) if c.is_zero() => Some(c),
            _ => None,
        }
    }

    /// The value as a rational when it is real and ρ-free.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.as_gaussian().filter(|g| g.im.is_zero()).map(|g| &g.re)
    }

    fn normalize(num: RhoPoly, den: RhoPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(d) = den.degree().filter(|&d| d == den.valuation()) {
            // den = c·ρ^d
            let inv = den
                .leading()
                .and_then(GaussianRational::checked_inv)
                .expect("nonzero");
            return Self::reduce_rho_power(num.scale(&inv), d);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead_inv = den
            .leading()
            .and_then(GaussianRational::checked_inv)
            .expect("nonzero");
        let (num, den) = (num.scale(&lead_inv), den.scale(&lead_inv));
        if den.is_one() {
            return Self::reduce_rho_power(num, 0);
        }
        Scalar(Repr::Frac(num, den))
    }

    /// `num / ρ^k`, collapsing to a monomial when possible.
    fn reduce_rho_power(num: RhoPoly, k: usize) -> Self {
        let v = num.valuation();
        if num.degree() == Some(v) {
            return Self::mono(num.coeffs()[v].clone(), v as i32 - k as i32);
        }
        let s = v.min(k);
        Scalar(Repr::Frac(
            num.shift_down(s),
            RhoPoly::monomial(GaussianRational::ONE, k - s),
        ))
    }

    pub fn checked_inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.0 {
            Repr::Mono(c, k) => Ok(Self::mono(c.checked_inv().expect("nonzero"), -k)),
            Repr::Frac(n, d) => Ok(Self::normalize(d.clone(), n.clone())),
        }
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i32) -> Result<Self, Error> {
        let mut base = if exp < 0 {
            self.checked_inv()?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        match &self.0 {
            Repr::Mono(c, k) => Self::mono(c.scale(r), *k),
            Repr::Frac(n, d) => Scalar(Repr::Frac(
                n.scale(&GaussianRational::real(r.clone())),
                d.clone(),
            )),
        }
    }

    fn add_ref(&self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Mono(a, _), _) if a.is_zero() => rhs.clone(),
            (_, Repr::Mono(b, _)) if b.is_zero() => self.clone(),
            (Repr::Mono(a, j), Repr::Mono(b, k)) if j == k => Self::mono(a + b, *j),
            _ => {
                let (an, ad) = self.parts();
                let (bn, bd) = rhs.parts();
                if ad == bd {
                    return Self::normalize(an.add(&bn), ad);
                }
                if let (Some(a), Some(b)) = (ad.as_rho_power(), bd.as_rho_power()) {
                    let m = a.max(b);
                    return Self::reduce_rho_power(an.shift_up(m - a).add(&bn.shift_up(m - b)), m);
                }
                Self::normalize(an.mul(&bd).add(&bn.mul(&ad)), ad.mul(&bd))
            }
        }
    }

    fn mul_ref(&self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Mono(a, j), Repr::Mono(b, k)) => {
                if a.is_zero() || b.is_zero() {
                    Self::zero()
                } else {
                    Scalar(Repr::Mono(a * b, j + k))
                }
            }
            _ => {
                if self.is_zero() || rhs.is_zero() {
                    return Self::zero();
                }
                let (an, ad) = self.parts();
                let (bn, bd) = rhs.parts();
                Self::normalize(an.mul(&bn), ad.mul(&bd))
            }
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<GaussianRational> for Scalar {
    fn from(g: GaussianRational) -> Self {
        Scalar::from_gaussian(g)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_ref(rhs)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_ref(&-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

/// Panics on division by zero; use [`Scalar::checked_inv`] to handle it.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(&rhs.checked_inv().expect("division by zero scalar"))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Mono(c, k) => Scalar(Repr::Mono(-c, *k)),
            Repr::Frac(n, d) => Scalar(Repr::Frac(n.neg(), d.clone())),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Binomial coefficient `C(n, k)` for any integer `n` and `k ≥ 0`.
pub fn binomial(n: i64, k: u32) -> Rational {
    let mut acc = Rational::ONE;
    for j in 0..k as i64 {
        acc = &acc * &Rational::new(n - j, j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_times_inverse_is_one() {
        let t = Scalar::tau();
        assert_eq!(&t * &t.checked_inv().unwrap(), Scalar::one());
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_integer(-1));
    }

    #[test]
    fn tau_squared() {
        let expected = &Scalar::from_integer(-4) * &(&Scalar::rho() * &Scalar::rho());
        assert_eq!(&Scalar::tau() * &Scalar::tau(), expected);
    }

    #[test]
    fn inverse_of_tau_is_minus_half_i_over_rho() {
        let expected =
            &Scalar::from_gaussian(GaussianRational::new(Rational::ZERO, Rational::new(-1, 2)))
                * &Scalar::rho().checked_inv().unwrap();
        assert_eq!(Scalar::tau().checked_inv().unwrap(), expected);
        assert_eq!(expected.denominator().as_rho_power(), Some(1));
    }

    #[test]
    fn cancellation_normalizes() {
        // (ρ² − ρ)/ρ → ρ − 1
        let rho = Scalar::rho();
        let v = &(&(&rho * &rho) - &rho) / &rho;
        assert_eq!(v, &rho - &Scalar::one());
        assert!(v.denominator().is_one());
    }

    #[test]
    fn general_denominators_reduce() {
        // (ρ² − 1)/(ρ + 1) → ρ − 1
        let rho = Scalar::rho();
        let one = Scalar::one();
        let a = &(&rho * &rho) - &one;
        let b = &rho + &one;
        assert_eq!(&a / &b, &rho - &one);
        let c = &one / &b;
        assert_eq!(&c * &b, one);
        assert!(c.denominator().leading().unwrap().is_one());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(Scalar::zero().checked_inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn binomials_generalize_to_negative_n() {
        assert_eq!(binomial(4, 2), Rational::from_integer(6));
        assert_eq!(binomial(-1, 3), Rational::from_integer(-1));
        assert_eq!(binomial(-2, 2), Rational::from_integer(3));
        assert_eq!(binomial(2, 3), Rational::ZERO);
    }
}
