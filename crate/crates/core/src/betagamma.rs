//! The β–γ system on polynomial models.
//!
//! With `g` symplectic pairs, species `1..=g` carry the coordinates
//! `x_{i,-n}` and species `g+1..=2g` the coordinates `x_{g+i,-n}`:
//!
//! ```text
//! β_i(n−1) = ∂/∂x_{g+i,−n}     β_i(−n) = −τ·x_{i,−n}
//! γ_i(n−1) = ∂/∂x_{i,−n}       γ_i(−n) =  τ·x_{g+i,−n}
//! ```
//!
//! so that `[β_k(m), γ_j(n)] = τ·δ_{kj}·δ_{m+n+1,0}`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fields::{combination, nproduct, Field, ModelField};
use crate::filtered::{
    monomial_basis, FilteredVector, ModelSpace, OperatorSeries, Precision, PrimitiveOp, VariableId,
};
use crate::report::{first_failure, record, CheckEntry, ModeWindow};
use crate::scalar::{Rational, Scalar};
use crate::Error;

/// `g` pairs on a plain or half-Gaussian model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticConfig {
    pub g: u32,
    pub space: ModelSpace,
}

impl SymplecticConfig {
    pub fn plain(g: u32) -> Self {
        SymplecticConfig {
            g,
            space: ModelSpace::plain(2 * g),
        }
    }

    /// The Schwartz-type model `m·e^{−½Σx²}`.
    pub fn gaussian(g: u32) -> Self {
        SymplecticConfig {
            g,
            space: ModelSpace::half_gaussian(2 * g),
        }
    }

    fn check_index(&self, i: u32) -> Result<(), Error> {
        if i == 0 || i > self.g {
            return Err(Error::IndexOutOfRange {
                what: "pair",
                index: i as i64,
                min: 1,
                max: self.g as i64,
            });
        }
        Ok(())
    }

    /// Exact basis monomials of degree `≤ degree` and depth `≤ depth`.
    pub fn probes(&self, depth: u32, degree: u32) -> Vec<FilteredVector> {
        monomial_basis(2 * self.g, depth, degree)
            .into_iter()
            .map(FilteredVector::basis)
            .collect()
    }

    fn twist_label(&self) -> &'static str {
        if self.space.twist_scalar().is_zero() {
            "plain"
        } else {
            "gaussian"
        }
    }
}

/// `Σ coeff·e_j t^m + central·c` in the Heisenberg algebra on `W((t))`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeisenbergElement {
    pub terms: Vec<(u32, i64, Scalar)>,
    pub central: Scalar,
}

impl HeisenbergElement {
    pub fn basis(j: u32, m: i64) -> Self {
        HeisenbergElement {
            terms: vec![(j, m, Scalar::one())],
            central: Scalar::zero(),
        }
    }

    pub fn central(c: Scalar) -> Self {
        HeisenbergElement {
            terms: Vec::new(),
            central: c,
        }
    }

    /// `⟨e_i, e_{g+i}⟩ = 1 = −⟨e_{g+i}, e_i⟩`.
    pub fn pairing(g: u32, a: u32, b: u32) -> i64 {
        if a <= g && b == a + g {
            1
        } else if a > g && b + g == a {
            -1
        } else {
            0
        }
    }

    /// `[a f, b h] = ⟨a,b⟩·Res(f h)·c`, extended bilinearly.
    pub fn bracket(g: u32, x: &Self, y: &Self) -> Self {
        let mut c = Scalar::zero();
        for (a, m, s) in &x.terms {
            for (b, l, t) in &y.terms {
                if m + l == -1 {
                    let p = Self::pairing(g, *a, *b);
                    if p != 0 {
                        c = &c + &(&(s * t) * &Scalar::from_integer(p));
                    }
                }
            }
        }
        Self::central(c)
    }
}

impl fmt::Display for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*e{j}t^{m}")?;
        }
        if !self.central.is_zero() || first {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "({})*c", self.central)?;
        }
        Ok(())
    }
}

/// The action of one basis element `e_j t^m`.
fn heisenberg_basis_action(g: u32, j: u32, m: i64) -> OperatorSeries {
    let tau = Scalar::tau();
    if m < 0 {
        return OperatorSeries::primitive(
            Scalar::one(),
            PrimitiveOp::Deriv(VariableId::new(j, (-m) as u32)),
        );
    }
    let depth = (m + 1) as u32;
    if j > g {
        OperatorSeries::primitive(tau, PrimitiveOp::Mult(VariableId::new(j - g, depth)))
    } else {
        OperatorSeries::primitive(-tau, PrimitiveOp::Mult(VariableId::new(j + g, depth)))
    }
}

/// The representation of the Heisenberg algebra: `e_j t^{−n} ↦ ∂/∂x_{j,−n}`,
/// `e_{g+j} t^{n−1} ↦ τ·x_{j,−n}`, `e_j t^{n−1} ↦ −τ·x_{g+j,−n}`, `c ↦ τ·Id`.
pub fn heisenberg_action(g: u32, h: &HeisenbergElement) -> Result<OperatorSeries, Error> {
    let mut out = OperatorSeries::scalar(&h.central * &Scalar::tau());
    for (j, m, c) in &h.terms {
        if *j == 0 || *j > 2 * g {
            return Err(Error::IndexOutOfRange {
                what: "species",
                index: *j as i64,
                min: 1,
                max: 2 * g as i64,
            });
        }
        out = out.plus(heisenberg_basis_action(g, *j, *m).scaled(c));
    }
    Ok(out)
}

fn free_field(
    cfg: &SymplecticConfig,
    label: String,
    deriv_species: u32,
    mult_species: u32,
    sign: i64,
) -> Field {
    let coeff = &Scalar::tau() * &Scalar::from_integer(sign);
    Field::new(ModelField {
        space: cfg.space.clone(),
        label,
        modes: Box::new(move |k| {
            if k >= 0 {
                OperatorSeries::primitive(
                    Scalar::one(),
                    PrimitiveOp::Deriv(VariableId::new(deriv_species, (k + 1) as u32)),
                )
            } else {
                OperatorSeries::primitive(
                    coeff.clone(),
                    PrimitiveOp::Mult(VariableId::new(mult_species, (-k) as u32)),
                )
            }
        }),
        deep: Box::new(|n| n + 1),
    })
}

pub fn beta_field(cfg: &SymplecticConfig, i: u32) -> Result<Field, Error> {
    cfg.check_index(i)?;
    Ok(free_field(cfg, format!("beta[{i}]"), i + cfg.g, i, -1))
}

pub fn gamma_field(cfg: &SymplecticConfig, i: u32) -> Result<Field, Error> {
    cfg.check_index(i)?;
    Ok(free_field(cfg, format!("gamma[{i}]"), i, i + cfg.g, 1))
}

/// Checks `[β,β] = [γ,γ] = 0` and `[β_k(m), γ_j(n)] = τ·δ_{kj}·δ_{m+n+1,0}`.
pub fn check_heisenberg_relations(
    cfg: &SymplecticConfig,
    window: ModeWindow,
    probes: &[FilteredVector],
    n: u32,
) -> CheckEntry {
    let mut entry = CheckEntry::new("heisenberg")
        .param("g", cfg.g)
        .param("model", cfg.twist_label())
        .param("window", window)
        .param("N", n)
        .param("probes", probes.len());
    let mut betas = Vec::new();
    let mut gammas = Vec::new();
    for i in 1..=cfg.g {
        let (Some(b), Some(c)) = (
            record(&mut entry, beta_field(cfg, i)),
            record(&mut entry, gamma_field(cfg, i)),
        ) else {
            return entry;
        };
        betas.push(b);
        gammas.push(c);
    }
    let tau = Scalar::tau();
    let fields: Vec<&Field> = betas.iter().chain(gammas.iter()).collect();
    let g = cfg.g as usize;
    let modes: Vec<i64> = window.iter().collect();
    let inner = fields
        .iter()
        .flat_map(|f| modes.iter().map(move |m| f.input_precision(*m, n)))
        .max()
        .unwrap_or(n);
    let outcome = first_failure(probes, |v| {
        // once[f][k] = f_(k)·v, known deep enough for any outer mode
        let mut once = Vec::with_capacity(fields.len());
        for f in &fields {
            let mut row = Vec::with_capacity(modes.len());
            for k in &modes {
                row.push(f.apply_mode(*k, v, inner)?);
            }
            once.push(row);
        }
        let expected_central = v.truncate(n)?.scaled(&tau);
        let zero = FilteredVector::zero(Precision::Finite(n));
        for a in 0..fields.len() {
            for b in 0..fields.len() {
                // ββ, γγ, and β before γ
                if a >= g && b < g {
                    continue;
                }
                let paired = a < g && b == a + g;
                for (mi, m) in modes.iter().enumerate() {
                    for (ki, k) in modes.iter().enumerate() {
                        let mut lhs = fields[a].apply_mode(*m, &once[b][ki], n)?;
                        lhs.add_scaled(
                            &Scalar::from_integer(-1),
                            &fields[b].apply_mode(*k, &once[a][mi], n)?,
                        );
                        let expected = if paired && m + k + 1 == 0 {
                            &expected_central
                        } else {
                            &zero
                        };
                        if lhs != *expected {
                            return Ok(Some(format!(
                                "[{}({m}), {}({k})] on {v}: got {lhs}, expected {expected}",
                                fields[a].label(),
                                fields[b].label()
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    });
    entry.absorb(outcome);
    entry
}

/// Which quadratic `:uv:` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpKind {
    BetaBeta,
    GammaGamma,
    BetaGamma,
}

impl SpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpKind::BetaBeta => "bb",
            SpKind::GammaGamma => "gg",
            SpKind::BetaGamma => "bg",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bb" => Some(SpKind::BetaBeta),
            "gg" => Some(SpKind::GammaGamma),
            "bg" => Some(SpKind::BetaGamma),
            _ => None,
        }
    }
}

/// `τ^{−1}·:u_i v_j:` for the chosen kind.
pub fn sp_quadratic_field(
    cfg: &SymplecticConfig,
    kind: SpKind,
    i: u32,
    j: u32,
) -> Result<Field, Error> {
    let (u, v) = match kind {
        SpKind::BetaBeta => (beta_field(cfg, i)?, beta_field(cfg, j)?),
        SpKind::GammaGamma => (gamma_field(cfg, i)?, gamma_field(cfg, j)?),
        SpKind::BetaGamma => (beta_field(cfg, i)?, gamma_field(cfg, j)?),
    };
    let inv_tau = Scalar::tau().checked_inv()?;
    Ok(combination(vec![(inv_tau, nproduct(&u, &v, -1))]))
}

/// A generator of the free-field algebra: index `< g` is `β_{i+1}`, else `γ_{i−g+1}`.
type Gen = usize;

/// `ω(u, v)/τ` where `[u_(m), v_(n)] = ω(u,v)·δ_{m+n+1,0}`.
fn omega(g: usize, u: Gen, v: Gen) -> i64 {
    if u < g && v == u + g {
        1
    } else if u >= g && v + g == u {
        -1
    } else {
        0
    }
}

/// A normalized quadratic `τ^{−1}:u v:` as a symmetric pair of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Quad(Gen, Gen);

impl Quad {
    fn new(a: Gen, b: Gen) -> Self {
        if a <= b {
            Quad(a, b)
        } else {
            Quad(b, a)
        }
    }

    /// The generator action `c ↦ [X_(0), c]`, as a matrix on generators.
    fn action(self, g: usize) -> Vec<Vec<Rational>> {
        let mut m = vec![vec![Rational::ZERO; 2 * g]; 2 * g];
        for c in 0..2 * g {
            m[self.0][c] = &m[self.0][c] + &Rational::from_integer(omega(g, self.1, c));
            m[self.1][c] = &m[self.1][c] + &Rational::from_integer(omega(g, self.0, c));
        }
        m
    }
}

/// Classical bracket: `[X, τ^{−1}:cd:] = τ^{−1}(:(M_X c) d: + :c (M_X d):)`.
fn quad_bracket(g: usize, x: Quad, y: Quad) -> Vec<(Quad, Rational)> {
    let mx = x.action(g);
    let mut out: Vec<(Quad, Rational)> = Vec::new();
    let mut push = |q: Quad, c: Rational| {
        if c.is_zero() {
            return;
        }
        match out.iter_mut().find(|(p, _)| *p == q) {
            Some(slot) => slot.1 = &slot.1 + &c,
            None => out.push((q, c)),
        }
    };
    for r in 0..2 * g {
        push(Quad::new(r, y.1), mx[r][y.0].clone());
        push(Quad::new(y.0, r), mx[r][y.1].clone());
    }
    out.retain(|(_, c)| !c.is_zero());
    out.sort_by_key(|a| a.0);
    out
}

fn trace_form(g: usize, x: Quad, y: Quad) -> Rational {
    let (a, b) = (x.action(g), y.action(g));
    let mut t = Rational::ZERO;
    for i in 0..2 * g {
        for k in 0..2 * g {
            t = &t + &(&a[i][k] * &b[k][i]);
        }
    }
    t
}

fn quad_field(cfg: &SymplecticConfig, q: Quad) -> Result<Field, Error> {
    let g = cfg.g as usize;
    let name = |x: Gen| {
        if x < g {
            (true, x as u32 + 1)
        } else {
            (false, (x - g) as u32 + 1)
        }
    };
    match (name(q.0), name(q.1)) {
        ((true, i), (true, j)) => sp_quadratic_field(cfg, SpKind::BetaBeta, i, j),
        ((false, i), (false, j)) => sp_quadratic_field(cfg, SpKind::GammaGamma, i, j),
        ((true, i), (false, j)) => sp_quadratic_field(cfg, SpKind::BetaGamma, i, j),
        ((false, j), (true, i)) => sp_quadratic_field(cfg, SpKind::BetaGamma, i, j),
    }
}

fn quad_label(g: usize, q: Quad) -> String {
    let n = |x: Gen| {
        if x < g {
            format!("beta[{}]", x + 1)
        } else {
            format!("gamma[{}]", x - g + 1)
        }
    };
    format!(":{}{}:", n(q.0), n(q.1))
}

/// Brackets of normalized quadratic modes: checks
/// `[X_(m), Y_(k)] = [X,Y]_(m+k) + m·δ_{m+k,0}·κ·tr(M_X M_Y)` on the probes,
/// where `[X,Y]` is the classical bracket and `M_X` the action on
/// generators. The level `κ` is measured, required to be the same for
/// every pair, mode and probe, and recorded as `central`.
pub fn check_sp_bracket_closure(
    cfg: &SymplecticConfig,
    window: ModeWindow,
    probes: &[FilteredVector],
    n: u32,
) -> CheckEntry {
    let g = cfg.g as usize;
    let mut entry = CheckEntry::new("sp-closure")
        .param("g", cfg.g)
        .param("model", cfg.twist_label())
        .param("window", window)
        .param("N", n)
        .param("probes", probes.len());
    let mut quads = Vec::new();
    for a in 0..2 * g {
        for b in a..2 * g {
            quads.push(Quad(a, b));
        }
    }
    let mut fields = Vec::new();
    for q in &quads {
        let Some(f) = record(&mut entry, quad_field(cfg, *q)) else {
            return entry;
        };
        fields.push(f);
    }
    let index = |q: Quad| {
        quads
            .iter()
            .position(|p| *p == q)
            .expect("closed under bracket")
    };
    let mut level: Option<Scalar> = None;
    for (xi, x) in quads.iter().enumerate() {
        for (yi, y) in quads.iter().enumerate() {
            let closure = quad_bracket(g, *x, *y);
            let form = trace_form(g, *x, *y);
            for (m, k) in window.pairs() {
                for v in probes {
                    let Some(lhs) =
                        record(&mut entry, fields[xi].commutator(m, &fields[yi], k, v, n))
                    else {
                        return entry;
                    };
                    let mut diff = lhs;
                    for (q, c) in &closure {
                        let Some(t) = record(&mut entry, fields[index(*q)].apply_mode(m + k, v, n))
                        else {
                            return entry;
                        };
                        diff.add_scaled(&Scalar::from_rational(-c), &t);
                    }
                    let witness = || {
                        format!(
                            "[{}({m}), {}({k})] on {v}: residual {diff}",
                            quad_label(g, *x),
                            quad_label(g, *y)
                        )
                    };
                    if m + k != 0 || m == 0 || form.is_zero() {
                        if !diff.is_zero() {
                            entry.fail(witness());
                            return entry;
                        }
                        continue;
                    }
                    let Some(base) = record(&mut entry, v.truncate(n)) else {
                        return entry;
                    };
                    let Some((b0, c0)) = base.iter().next() else {
                        continue;
                    };
                    let weight = &Scalar::from_rational(&form * &Rational::from_integer(m)) * c0;
                    let kappa = &diff.coefficient(b0) / &weight;
                    if diff
                        != base.scaled(
                            &(&kappa * &Scalar::from_rational(&form * &Rational::from_integer(m))),
                        )
                    {
                        entry.fail(witness());
                        return entry;
                    }
                    match &level {
                        None => level = Some(kappa),
                        Some(l) if *l != kappa => {
                            entry.fail(format!("{}: level {kappa} differs from {l}", witness()));
                            return entry;
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }
    match level {
        Some(l) => entry.set_param("central", l),
        None => entry.set_param("central", "unmeasured"),
    }
    entry
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtered::Monomial;

    fn x(s: u32, d: u32) -> VariableId {
        VariableId::new(s, d)
    }

    #[test]
    fn mode_table() {
        let cfg = SymplecticConfig::plain(1);
        let b = beta_field(&cfg, 1).unwrap();
        let c = gamma_field(&cfg, 1).unwrap();
        let one = FilteredVector::basis(Monomial::one());
        let r = b.apply_mode(-1, &one, 3).unwrap();
        assert_eq!(
            r,
            FilteredVector::term(-Scalar::tau(), Monomial::var(x(1, 1)))
                .truncate(3)
                .unwrap()
        );
        let r = b
            .apply_mode(0, &FilteredVector::basis(Monomial::var(x(2, 1))), 3)
            .unwrap();
        assert_eq!(
            r,
            FilteredVector::basis(Monomial::one()).truncate(3).unwrap()
        );
        let r = c.apply_mode(-2, &one, 3).unwrap();
        assert_eq!(
            r,
            FilteredVector::term(Scalar::tau(), Monomial::var(x(2, 2)))
                .truncate(3)
                .unwrap()
        );
        let r = c
            .apply_mode(0, &FilteredVector::basis(Monomial::var(x(2, 1))), 3)
            .unwrap();
        assert!(r.is_zero());
        assert!(beta_field(&cfg, 0).is_err());
    }

    #[test]
    fn heisenberg_generators() {
        let cfg = SymplecticConfig::plain(1);
        let one = FilteredVector::basis(Monomial::one());
        let e2 = heisenberg_action(1, &HeisenbergElement::basis(2, 0)).unwrap();
        assert_eq!(
            e2.apply(&cfg.space, &one, 3).unwrap(),
            FilteredVector::term(Scalar::tau(), Monomial::var(x(1, 1)))
                .truncate(3)
                .unwrap()
        );
        let c = heisenberg_action(1, &HeisenbergElement::central(Scalar::one())).unwrap();
        assert_eq!(
            c.apply(&cfg.space, &one, 3).unwrap(),
            one.scaled(&Scalar::tau()).truncate(3).unwrap()
        );
    }

    #[test]
    fn quadratic_bracket_table() {
        // g = 1: 0 = β, 1 = γ; J = :βγ:, E = :ββ:, F = :γγ:
        let (e, j, f) = (Quad(0, 0), Quad(0, 1), Quad(1, 1));
        assert_eq!(quad_bracket(1, j, e), vec![(e, Rational::from_integer(-2))]);
        assert_eq!(quad_bracket(1, j, f), vec![(f, Rational::from_integer(2))]);
        assert_eq!(quad_bracket(1, e, f), vec![(j, Rational::from_integer(4))]);
        assert!(quad_bracket(1, e, e).is_empty());
        assert_eq!(trace_form(1, j, j), Rational::from_integer(2));
        assert_eq!(trace_form(1, e, f), Rational::from_integer(-4));
    }
}
