use core::cmp::Ordering;

use core::fmt;
use smallvec::SmallVec;

use super::Basis;

/// The coordinate `x_{species, -depth}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VariableId {
    pub species: u32,
    pub depth: u32,
}

impl VariableId {
    pub const fn new(species: u32, depth: u32) -> Self {
        VariableId { species, depth }
    }

    /// The same species one level shallower (`depth − 1`).
    pub fn shallower(self) -> Self {
        VariableId {
            species: self.species,
            depth: self.depth - 1,
        }
    }
}

// Depth-major so that a monomial's deepest variable is its last factor.
impl Ord for VariableId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.depth, self.species).cmp(&(other.depth, other.species))
    }
}

impl PartialOrd for VariableId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},-{}]", self.species, self.depth)
    }
}

/// A product of coordinates; factors sorted, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    factors: Factors,
}

type Factors = SmallVec<[(VariableId, u32); 4]>;

impl Monomial {
    /// The constant monomial 1.
    pub fn one() -> Self {
        Monomial {
            factors: SmallVec::new(),
        }
    }

    pub fn var(v: VariableId) -> Self {
        Monomial {
            factors: smallvec::smallvec![(v, 1)],
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (VariableId, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in factors {
            m = m.times_pow(v, e);
        }
        m
    }

    pub fn factors(&self) -> &[(VariableId, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VariableId) -> u32 {
        match self.factors.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.factors[i].1,
            Err(_) => 0,
        }
    }

    pub fn times(&self, v: VariableId) -> Self {
        self.times_pow(v, 1)
    }

    pub fn times_pow(&self, v: VariableId, e: u32) -> Self {
        let mut factors = self.factors.clone();
        if e == 0 {
            return Monomial { factors };
        }
        match factors.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => factors[i].1 += e,
            Err(i) => factors.insert(i, (v, e)),
        }
        Monomial { factors }
    }

    /// Divides by one power of `v`; `None` when `v` does not occur.
    /// Returns the removed exponent with the quotient.
    pub fn without_one(&self, v: VariableId) -> Option<(u32, Self)> {
        let i = self.factors.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let mut factors = self.factors.clone();
        let e = factors[i].1;
        if e == 1 {
            factors.remove(i);
        } else {
            factors[i].1 -= 1;
        }
        Some((e, Monomial { factors }))
    }

    /// Splits into the depth-1 factors and the rest.
    pub fn split_depth_one(&self) -> (&[(VariableId, u32)], &[(VariableId, u32)]) {
        let k = self
            .factors
            .iter()
            .take_while(|(v, _)| v.depth == 1)
            .count();
        self.factors.split_at(k)
    }

    /// Lowers every depth by one; all factors must have depth ≥ 2.
    pub fn shifted_shallower(factors: &[(VariableId, u32)]) -> Self {
        Monomial {
            factors: factors.iter().map(|(v, e)| (v.shallower(), *e)).collect(),
        }
    }
}

impl Basis for Monomial {
    fn max_depth(&self) -> u32 {
        self.factors.last().map_or(0, |(v, _)| v.depth)
    }
}

/// The largest `n` with `m ∈ U_n` (0 when `m` lies in no `U_n`, `n ≥ 1`).
pub fn filtration_degree(m: &Monomial) -> u32 {
    m.max_depth().saturating_sub(1)
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn filtration_degrees() {
        let m = Monomial::var(VariableId::new(1, 5)).times(VariableId::new(2, 1));
        assert_eq!(filtration_degree(&m), 4);
        assert_eq!(filtration_degree(&Monomial::one()), 0);
        assert_eq!(filtration_degree(&Monomial::var(VariableId::new(1, 1))), 0);
    }

    #[test]
    fn canonical_order_and_rendering() {
        let a = Monomial::var(VariableId::new(2, 1))
            .times(VariableId::new(1, 3))
            .times(VariableId::new(2, 1));
        let b = Monomial::var(VariableId::new(1, 3)).times_pow(VariableId::new(2, 1), 2);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "x[2,-1]^2*x[1,-3]");
        assert_eq!(a.degree(), 3);
        let (e, q) = a.without_one(VariableId::new(2, 1)).unwrap();
        assert_eq!(e, 2);
        assert_eq!(q.to_string(), "x[2,-1]*x[1,-3]");
    }
}
