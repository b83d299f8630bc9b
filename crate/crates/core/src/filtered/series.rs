//! Operator series: finite sums of primitive compositions plus infinite
//! families `Σ_{i≥1} c·π_t^p ∘ x_{-(i+mo)} ∘ ∂_{x_{-(i+do)}}`.

use alloc::vec::Vec;
use core::fmt;

use super::{FilteredVector, ModelSpace, Monomial, Precision, PrimitiveOp, VariableId};
use crate::scalar::Scalar;
use crate::Error;

/// `coeff · ops[0] ∘ ops[1] ∘ …` (the last op acts first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTerm {
    pub coeff: Scalar,
    pub ops: Vec<PrimitiveOp>,
}

impl OpTerm {
    pub fn new(coeff: Scalar, ops: Vec<PrimitiveOp>) -> Self {
        OpTerm { coeff, ops }
    }

    pub fn input_precision(&self, n: u32) -> u32 {
        self.ops.iter().fold(n, |acc, op| op.input_precision(acc))
    }
}

/// `Σ_{i≥1} coeff · π_t^{pi_power} ∘ x^{mult.0}_{-(i+mult.1)} ∘ ∂_{x^{deriv.0}_{-(i+deriv.1)}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermFamily {
    pub coeff: Scalar,
    pub pi_power: u32,
    pub mult: (u32, u32),
    pub deriv: (u32, u32),
}

impl TermFamily {
    pub fn input_precision(&self, n: u32) -> u32 {
        n + self.pi_power + self.deriv.1.saturating_sub(self.mult.1)
    }

    /// Terms with index above this bound land in `U_n`: the multiplied
    /// variable has depth `> n + p` and survives `π_t^p` at depth `> n`.
    pub fn cutoff(&self, n: u32) -> u32 {
        (n + self.pi_power).saturating_sub(self.mult.1)
    }

    fn ops(&self, i: u32) -> [PrimitiveOp; 2] {
        [
            PrimitiveOp::Mult(VariableId::new(self.mult.0, i + self.mult.1)),
            PrimitiveOp::Deriv(VariableId::new(self.deriv.0, i + self.deriv.1)),
        ]
    }
}

/// A (possibly infinite) linear combination of primitive compositions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorSeries {
    pub terms: Vec<OpTerm>,
    pub families: Vec<TermFamily>,
}

impl OperatorSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        OperatorSeries {
            terms: alloc::vec![OpTerm::new(c, Vec::new())],
            families: Vec::new(),
        }
    }

    pub fn identity() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn primitive(c: Scalar, op: PrimitiveOp) -> Self {
        OperatorSeries {
            terms: alloc::vec![OpTerm::new(c, alloc::vec![op])],
            families: Vec::new(),
        }
    }

    pub fn family(f: TermFamily) -> Self {
        OperatorSeries {
            terms: Vec::new(),
            families: alloc::vec![f],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.families.is_empty()
    }

    pub fn plus(mut self, other: OperatorSeries) -> Self {
        self.terms.extend(other.terms);
        self.families.extend(other.families);
        self
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        OperatorSeries {
            terms: self
                .terms
                .iter()
                .map(|t| OpTerm::new(c * &t.coeff, t.ops.clone()))
                .collect(),
            families: self
                .families
                .iter()
                .map(|f| TermFamily {
                    coeff: c * &f.coeff,
                    ..f.clone()
                })
                .collect(),
        }
    }

    /// Input precision required for output known mod `U_n`.
    pub fn input_precision(&self, n: u32) -> u32 {
        let t = self.terms.iter().map(|t| t.input_precision(n));
        let f = self.families.iter().map(|f| f.input_precision(n));
        t.chain(f).max().unwrap_or(n)
    }

    /// Applies the series to one exact monomial, output mod `U_n`, summing
    /// `slack` extra family terms beyond each cutoff.
    pub fn apply_monomial_with_slack(
        &self,
        space: &ModelSpace,
        m: &Monomial,
        coeff: &Scalar,
        n: u32,
        slack: u32,
        out: &mut FilteredVector,
    ) -> Result<(), Error> {
        for t in &self.terms {
            apply_chain(space, &t.ops, m, &(coeff * &t.coeff), n, out)?;
        }
        for f in &self.families {
            let c = coeff * &f.coeff;
            let mut chain = Vec::with_capacity(2 + f.pi_power as usize);
            chain.extend(core::iter::repeat_n(PrimitiveOp::PiT, f.pi_power as usize));
            let direct = space.twist_scalar().is_zero();
            for i in 1..=f.cutoff(n) + slack {
                let [mul, der] = f.ops(i);
                if direct {
                    if let PrimitiveOp::Deriv(v) = der {
                        if m.exponent(v) == 0 {
                            continue;
                        }
                    }
                }
                chain.truncate(f.pi_power as usize);
                chain.push(mul);
                chain.push(der);
                apply_chain(space, &chain, m, &c, n, out)?;
            }
        }
        Ok(())
    }

    /// `self · v` mod `U_n`.
    pub fn apply(
        &self,
        space: &ModelSpace,
        v: &FilteredVector,
        n: u32,
    ) -> Result<FilteredVector, Error> {
        self.apply_with_slack(space, v, n, 0)
    }

    pub fn apply_with_slack(
        &self,
        space: &ModelSpace,
        v: &FilteredVector,
        n: u32,
        slack: u32,
    ) -> Result<FilteredVector, Error> {
        let required = self.input_precision(n);
        if !v.precision().covers(required) {
            return Err(Error::InsufficientPrecision {
                required,
                available: v.precision(),
            });
        }
        let mut out = FilteredVector::zero(Precision::Finite(n));
        for (m, c) in v.iter() {
            self.apply_monomial_with_slack(space, m, c, n, slack, &mut out)?;
        }
        Ok(out)
    }
}

/// Applies `ops[0] ∘ … ∘ ops[k-1]` to `coeff·m`, keeping intermediate results
/// only at the depth each later op needs.
fn apply_chain(
    space: &ModelSpace,
    ops: &[PrimitiveOp],
    m: &Monomial,
    coeff: &Scalar,
    n: u32,
    out: &mut FilteredVector,
) -> Result<(), Error> {
    match ops {
        [] => {
            out.add_term(m.clone(), coeff.clone());
            return Ok(());
        }
        [op] => return op.apply_monomial(space, m, coeff, out),
        _ => {}
    }
    // Precision needed after each stage, outermost first.
    let mut needs = Vec::with_capacity(ops.len());
    let mut acc = n;
    for op in ops {
        needs.push(acc);
        acc = op.input_precision(acc);
    }
    let mut cur = FilteredVector::zero(Precision::Finite(needs[ops.len() - 1]));
    ops[ops.len() - 1].apply_monomial(space, m, coeff, &mut cur)?;
    for k in (0..ops.len() - 1).rev() {
        if cur.is_empty() {
            return Ok(());
        }
        let mut next = FilteredVector::zero(Precision::Finite(needs[k]));
        for (b, c) in cur.iter() {
            ops[k].apply_monomial(space, b, c, &mut next)?;
        }
        cur = next;
    }
    for (b, c) in cur.iter() {
        out.add_term(b.clone(), c.clone());
    }
    Ok(())
}

impl fmt::Display for OperatorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for t in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})", t.coeff)?;
            for op in &t.ops {
                write!(f, "*{op}")?;
            }
        }
        for fam in &self.families {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(
                f,
                "({})*sum_i pi_t^{}*x[{},-(i+{})]*d/dx[{},-(i+{})]",
                fam.coeff, fam.pi_power, fam.mult.0, fam.mult.1, fam.deriv.0, fam.deriv.1
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn x(s: u32, d: u32) -> VariableId {
        VariableId::new(s, d)
    }

    #[test]
    fn euler_family_on_plain_model() {
        // Σ x_{-i} ∂_{x_{-i}} counts degree in species 1
        let space = ModelSpace::plain(2);
        let s = OperatorSeries::family(TermFamily {
            coeff: Scalar::one(),
            pi_power: 0,
            mult: (1, 0),
            deriv: (1, 0),
        });
        let m = Monomial::var(x(1, 1)).times(x(1, 3)).times(x(2, 2));
        let out = s
            .apply(&space, &FilteredVector::basis(m.clone()), 4)
            .unwrap();
        assert_eq!(
            out,
            FilteredVector::term(Scalar::from_integer(2), m)
                .truncate(4)
                .unwrap()
        );
    }

    #[test]
    fn twisted_family_is_truncated() {
        // Σ x²_{-i} ∂_{x¹_{-i}} on φ_c gives −2ρc Σ x²_{-i} x¹_{-i}
        let space = ModelSpace::phi(2, Rational::ONE).unwrap();
        let s = OperatorSeries::family(TermFamily {
            coeff: Scalar::one(),
            pi_power: 0,
            mult: (2, 0),
            deriv: (1, 0),
        });
        let out = s
            .apply(&space, &FilteredVector::basis(Monomial::one()), 3)
            .unwrap();
        assert_eq!(out.len(), 3);
        let slack = s
            .apply_with_slack(&space, &FilteredVector::basis(Monomial::one()), 3, 3)
            .unwrap();
        assert_eq!(out, slack);
    }

    #[test]
    fn reports_required_precision() {
        let space = ModelSpace::phi(1, Rational::ONE).unwrap();
        let s = OperatorSeries::family(TermFamily {
            coeff: Scalar::one(),
            pi_power: 2,
            mult: (1, 0),
            deriv: (1, 2),
        });
        assert_eq!(s.input_precision(3), 7);
        let v = FilteredVector::basis(Monomial::one()).truncate(5).unwrap();
        assert_eq!(
            s.apply(&space, &v, 3),
            Err(Error::InsufficientPrecision {
                required: 7,
                available: Precision::Finite(5)
            })
        );
    }
}
