//! Level-one affine `sl_n` on the `φ_c` model.
//!
//! With `λ = c^{-n/2}` the π_t eigenvalue of `φ_c`, the currents act by
//!
//! ```text
//! π(E_uv t^j)    = −Σ_{i≥1} x^v_{−i−j} ∂/∂x^u_{−i}                (j ≥ 0)
//! π(E_uv t^{−j}) = −λ^{−j} π_t^j Σ_{i≥1} x^v_{−i} ∂/∂x^u_{−i−j}     (j > 0)
//! ```
//!
//! extended linearly to trace-zero matrices, and satisfy the level-one
//! relations on the π_t-eigenspace of `φ_c`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::fields::{Field, ModelField};
use crate::filtered::{
    apply_primitive, monomial_basis, FilteredVector, ModelSpace, Monomial, OperatorSeries,
    PrimitiveOp, TermFamily, VariableId,
};
use crate::report::{first_failure, record, CheckEntry, ModeWindow};
use crate::scalar::{Rational, Scalar};
use crate::Error;

/// `sl_n` with the `φ_c` model on `n` species.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlnConfig {
    pub n: u32,
    pub c: Rational,
    pub space: ModelSpace,
    pub lambda: Rational,
}

impl SlnConfig {
    pub fn new(n: u32, c: Rational) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::IndexOutOfRange {
                what: "rank n",
                index: n as i64,
                min: 2,
                max: i64::MAX,
            });
        }
        let space = ModelSpace::phi(n, c.clone())?;
        let lambda = space.lambda().expect("phi model");
        Ok(SlnConfig {
            n,
            c,
            space,
            lambda,
        })
    }

    pub fn basis(&self) -> Vec<SlnElement> {
        sln_basis(self.n)
    }

    pub fn check_element(&self, a: &SlnElement) -> Result<(), Error> {
        for &(u, v) in a.entries.keys() {
            for i in [u, v] {
                if i == 0 || i > self.n {
                    return Err(Error::IndexOutOfRange {
                        what: "matrix",
                        index: i as i64,
                        min: 1,
                        max: self.n as i64,
                    });
                }
            }
        }
        Ok(())
    }

    /// `φ_c` as an exact vector.
    pub fn vacuum(&self) -> FilteredVector {
        FilteredVector::basis(Monomial::one())
    }
}

/// `E_uv` (`u ≠ v`, row-major) followed by `E_uu − E_{u+1,u+1}`.
pub fn sln_basis(n: u32) -> Vec<SlnElement> {
    let mut out = Vec::new();
    for u in 1..=n {
        for v in 1..=n {
            if u != v {
                out.push(SlnElement::e(u, v));
            }
        }
    }
    for u in 1..n {
        out.push(SlnElement::h(u, u + 1));
    }
    out
}

/// Coordinates of a trace-zero matrix in [`sln_basis`].
pub fn sln_coordinates(n: u32, a: &SlnElement) -> Vec<Rational> {
    let basis = sln_basis(n);
    let mut out = alloc::vec![Rational::ZERO; basis.len()];
    let offdiag = (n * (n - 1)) as usize;
    let mut running = Rational::ZERO;
    for (u, v, c) in a.entries() {
        if u != v {
            let k = basis
                .iter()
                .position(|b| *b == SlnElement::e(u, v))
                .expect("matrix unit");
            out[k] = c.clone();
        }
    }
    for u in 1..n {
        running = &running + &a.entry(u, u);
        out[offdiag + (u - 1) as usize] = running.clone();
    }
    out
}

/// A trace-zero matrix with rational entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct SlnElement {
    entries: BTreeMap<(u32, u32), Rational>,
}

impl SlnElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The matrix unit `E_uv`, `u ≠ v`.
    pub fn e(u: u32, v: u32) -> Self {
        assert_ne!(u, v, "E_uu is not trace-zero");
        let mut entries = BTreeMap::new();
        entries.insert((u, v), Rational::ONE);
        SlnElement { entries }
    }

    /// `E_uu − E_vv`.
    pub fn h(u: u32, v: u32) -> Self {
        assert_ne!(u, v, "H(u,u) is zero");
        let mut out = SlnElement::zero();
        out.add_entry(u, u, Rational::ONE);
        out.add_entry(v, v, -Rational::ONE);
        out
    }

    /// Builds from entries, rejecting a nonzero trace.
    pub fn from_entries(
        entries: impl IntoIterator<Item = ((u32, u32), Rational)>,
    ) -> Result<Self, Error> {
        let mut out = SlnElement::zero();
        for ((u, v), c) in entries {
            out.add_entry(u, v, c);
        }
        if !out.trace().is_zero() {
            return Err(Error::Unsupported(format!(
                "matrix {out} has nonzero trace"
            )));
        }
        Ok(out)
    }

    fn add_entry(&mut self, u: u32, v: u32, c: Rational) {
        let slot = self.entries.entry((u, v)).or_insert(Rational::ZERO);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.entries.remove(&(u, v));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.entries.iter().map(|(&(u, v), c)| (u, v, c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, u: u32, v: u32) -> Rational {
        self.entries.get(&(u, v)).cloned().unwrap_or(Rational::ZERO)
    }

    fn trace(&self) -> Rational {
        self.entries()
            .filter(|(u, v, _)| u == v)
            .fold(Rational::ZERO, |acc, (_, _, c)| &acc + c)
    }

    pub fn scaled(&self, r: &Rational) -> Self {
        let mut out = SlnElement::zero();
        for (u, v, c) in self.entries() {
            out.add_entry(u, v, c * r);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (u, v, c) in other.entries() {
            out.add_entry(u, v, c.clone());
        }
        out
    }

    fn product(&self, other: &Self) -> BTreeMap<(u32, u32), Rational> {
        let mut out: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (u, v, a) in self.entries() {
            for (w, x, b) in other.entries() {
                if v == w {
                    let slot = out.entry((u, x)).or_insert(Rational::ZERO);
                    *slot = &*slot + &(a * b);
                }
            }
        }
        out
    }

    /// `[a, b] = ab − ba`.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = SlnElement::zero();
        for ((u, v), c) in self.product(other) {
            out.add_entry(u, v, c);
        }
        for ((u, v), c) in other.product(self) {
            out.add_entry(u, v, -c);
        }
        out
    }

    /// `tr(ab)`.
    pub fn trace_form(&self, other: &Self) -> Rational {
        self.product(other)
            .into_iter()
            .filter(|((u, v), _)| u == v)
            .fold(Rational::ZERO, |acc, (_, c)| &acc + &c)
    }
}

impl fmt::Display for SlnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<_> = self.entries().collect();
        match items.as_slice() {
            [] => return f.write_str("0"),
            [(u, v, c)] if c.is_one() => return write!(f, "current[{u},{v}]"),
            [(u, u2, a), (v, v2, b)] if u == u2 && v == v2 && a.is_one() && (-*b).is_one() => {
                return write!(f, "cartan[{u},{v}]")
            }
            [(u, u2, a), (v, v2, b)] if u == u2 && v == v2 && b.is_one() && (-*a).is_one() => {
                return write!(f, "cartan[{v},{u}]")
            }
            _ => {}
        }
        for (k, (u, v, c)) in items.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*E[{u},{v}]")?;
        }
        Ok(())
    }
}

/// `π(a t^k)` as an operator series.
pub fn sln_mode(cfg: &SlnConfig, a: &SlnElement, k: i64) -> OperatorSeries {
    let mut out = OperatorSeries::zero();
    let j = k.unsigned_abs() as u32;
    let weight = if k >= 0 {
        Scalar::one()
    } else {
        Scalar::from_rational(cfg.lambda.pow(-(j as i32)))
    };
    for (u, v, c) in a.entries() {
        let coeff = -(&weight * &Scalar::from_rational(c.clone()));
        let family = if k >= 0 {
            TermFamily {
                coeff,
                pi_power: 0,
                mult: (v, j),
                deriv: (u, 0),
            }
        } else {
            TermFamily {
                coeff,
                pi_power: j,
                mult: (v, 0),
                deriv: (u, j),
            }
        };
        out = out.plus(OperatorSeries::family(family));
    }
    out
}

/// The current `a(z) = Σ π(a t^k) z^{−k−1}`.
pub fn current_field(cfg: &SlnConfig, a: &SlnElement) -> Result<Field, Error> {
    cfg.check_element(a)?;
    let (mode_cfg, elem) = (cfg.clone(), a.clone());
    Ok(Field::new(ModelField {
        space: cfg.space.clone(),
        label: format!("{a}"),
        modes: Box::new(move |k| sln_mode(&mode_cfg, &elem, k)),
        deep: Box::new(|n| n + 1),
    })
    .cached())
}

/// A probe vector with a short description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub label: String,
    pub vector: FilteredVector,
}

/// Modes used to grow the probe orbit.
pub const PROBE_MODES: ModeWindow = ModeWindow { lo: -2, hi: 2 };

/// `φ_c` and its images under up to `generation` applications of basis
/// modes `π(a t^k)`, `k ∈ [−2, 2]`, known mod `U_n`. Zero images are dropped.
pub fn eigen_probes(cfg: &SlnConfig, generation: u32, n: u32) -> Result<Vec<Probe>, Error> {
    let basis = cfg.basis();
    let fields: Vec<Field> = basis
        .iter()
        .map(|a| current_field(cfg, a))
        .collect::<Result<_, _>>()?;
    let loss = fields
        .iter()
        .flat_map(|f| PROBE_MODES.iter().map(move |k| f.input_precision(k, n) - n))
        .max()
        .unwrap_or(0);
    // Generation g is computed at precision n + loss·(generation − g).
    let mut layer = alloc::vec![Probe {
        label: String::from("phi_c"),
        vector: cfg.vacuum()
    }];
    let mut all: Vec<Probe> = Vec::new();
    for gen in 0..=generation {
        let p = n + loss * (generation - gen);
        let mut next = Vec::new();
        for probe in &layer {
            all.push(Probe {
                label: probe.label.clone(),
                vector: probe.vector.truncate(n)?,
            });
            if gen == generation {
                continue;
            }
            for (a, f) in basis.iter().zip(&fields) {
                for k in PROBE_MODES.iter() {
                    let img = f.apply_mode(k, &probe.vector, p - loss)?;
                    if !img.is_zero() {
                        next.push(Probe {
                            label: format!("{a}({k}) {}", probe.label),
                            vector: img,
                        });
                    }
                }
            }
        }
        layer = next;
    }
    Ok(all)
}

/// `π_t v = λ v` mod `U_n` for every probe.
pub fn check_eigen_relation(space: &ModelSpace, probes: &[Probe], n: u32) -> CheckEntry {
    let mut entry = CheckEntry::new("pi-t-eigen")
        .param("species", space.species())
        .param("N", n)
        .param("probes", probes.len());
    let Some(lambda) = space.lambda() else {
        entry.error("π_t requires the φ_c model");
        return entry;
    };
    entry.set_param("lambda", &lambda);
    let pi = OperatorSeries::primitive(Scalar::one(), PrimitiveOp::PiT);
    let lam = Scalar::from_rational(lambda);
    let outcome = first_failure(probes, |p| {
        let lhs = pi.apply(space, &p.vector, n)?;
        let rhs = p.vector.truncate(n)?.scaled(&lam);
        Ok((lhs != rhs).then(|| format!("pi_t on {}: got {lhs}, expected {rhs}", p.label)))
    });
    entry.absorb(outcome);
    entry
}

/// The π_t relations on every monomial of degree `≤ degree` and depth `≤ depth`:
/// `x^s_{−i} π_t = π_t x^s_{−i−1}`, `∂_{x^s_{−i}} π_t = π_t ∂_{x^s_{−i−1}}`,
/// and `π_t^j ∂_{x^s_{−i}} = 0` for `i ≤ j`.
pub fn check_pi_t_relations(space: &ModelSpace, depth: u32, degree: u32) -> CheckEntry {
    let mut entry = CheckEntry::new("pi-t-relations")
        .param("species", space.species())
        .param("depth", depth)
        .param("degree", degree);
    let monomials = monomial_basis(space.species(), depth, degree);
    entry.set_param("monomials", monomials.len());
    let pi = |v: &FilteredVector| apply_primitive(space, PrimitiveOp::PiT, v);
    let outcome = first_failure(&monomials, |m| {
        let v = FilteredVector::basis(m.clone());
        let pv = pi(&v)?;
        for s in 1..=space.species() {
            for i in 1..=depth {
                let shallow = VariableId::new(s, i);
                let deep = VariableId::new(s, i + 1);
                for (name, a, b) in [
                    ("x", PrimitiveOp::Mult(shallow), PrimitiveOp::Mult(deep)),
                    ("d", PrimitiveOp::Deriv(shallow), PrimitiveOp::Deriv(deep)),
                ] {
                    let lhs = apply_primitive(space, a, &pv)?;
                    let rhs = pi(&apply_primitive(space, b, &v)?)?;
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "{name}[{s},-{i}] pi_t vs pi_t {name}[{s},-{}] on {m}: {lhs} vs {rhs}",
                            i + 1
                        )));
                    }
                }
                let mut w = apply_primitive(space, PrimitiveOp::Deriv(shallow), &v)?;
                for j in 1..=depth {
                    w = pi(&w)?;
                    if j >= i && !w.is_zero() {
                        return Ok(Some(format!("pi_t^{j} d/dx[{s},-{i}] on {m}: {w}")));
                    }
                }
            }
        }
        Ok(None)
    });
    entry.absorb(outcome);
    entry
}

/// How a bracket check treats discrepancies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketMode {
    /// Any discrepancy fails the entry.
    Strict,
    /// Discrepancies are counted and reported; the entry passes.
    Exploratory,
}

/// `[π(a t^m), π(b t^k)] = π([a,b] t^{m+k}) + m·δ_{m+k,0}·tr(ab)` on
/// eigen-probes of the given generation, mod `U_n`, for all basis pairs and
/// modes in the window.
pub fn check_affine_bracket(
    cfg: &SlnConfig,
    window: ModeWindow,
    generation: u32,
    n: u32,
) -> CheckEntry {
    check_affine_bracket_at_level(cfg, window, generation, n, &Rational::ONE)
}

/// [`check_affine_bracket`] with the central term scaled by `level`.
pub fn check_affine_bracket_at_level(
    cfg: &SlnConfig,
    window: ModeWindow,
    generation: u32,
    n: u32,
    level: &Rational,
) -> CheckEntry {
    let mut entry = CheckEntry::new("sln-bracket")
        .param("n", cfg.n)
        .param("c", &cfg.c)
        .param("window", window)
        .param("generation", generation)
        .param("level", level)
        .param("N", n);
    let Some(need) = record(&mut entry, bracket_precision(cfg, window, n)) else {
        return entry;
    };
    let Some(probes) = record(&mut entry, eigen_probes(cfg, generation, need)) else {
        return entry;
    };
    entry.set_param("probes", probes.len());
    bracket_on(cfg, window, &probes, n, level, BracketMode::Strict, entry)
}

/// The bracket relations on plain `m·φ_c` probes (degree `≤ degree`, depth
/// `≤ depth`), outside the eigenspace. Reports the number of discrepancies.
pub fn check_affine_bracket_exploratory(
    cfg: &SlnConfig,
    window: ModeWindow,
    depth: u32,
    degree: u32,
    n: u32,
) -> CheckEntry {
    let entry = CheckEntry::new("sln-bracket-exploratory")
        .param("n", cfg.n)
        .param("c", &cfg.c)
        .param("window", window)
        .param("depth", depth)
        .param("degree", degree)
        .param("N", n);
    let probes: Vec<Probe> = monomial_basis(cfg.n, depth, degree)
        .into_iter()
        .map(|m| Probe {
            label: format!("{m}"),
            vector: FilteredVector::basis(m),
        })
        .collect();
    let entry = entry.param("probes", probes.len());
    bracket_on(
        cfg,
        window,
        &probes,
        n,
        &Rational::ONE,
        BracketMode::Exploratory,
        entry,
    )
}

/// Probe precision needed by [`bracket_on`].
fn bracket_precision(cfg: &SlnConfig, window: ModeWindow, n: u32) -> Result<u32, Error> {
    let probe = current_field(cfg, &SlnElement::h(1, 2))?;
    let inner = window
        .iter()
        .map(|m| probe.input_precision(m, n))
        .max()
        .unwrap_or(n);
    let outer = window
        .iter()
        .map(|k| probe.input_precision(k, inner))
        .max()
        .unwrap_or(inner);
    let direct = window
        .pairs()
        .map(|(m, k)| probe.input_precision(m + k, n))
        .max()
        .unwrap_or(n);
    Ok(outer.max(direct))
}

fn bracket_on(
    cfg: &SlnConfig,
    window: ModeWindow,
    probes: &[Probe],
    n: u32,
    level: &Rational,
    mode: BracketMode,
    mut entry: CheckEntry,
) -> CheckEntry {
    let basis = cfg.basis();
    let Some(fields) = record(
        &mut entry,
        basis
            .iter()
            .map(|a| current_field(cfg, a))
            .collect::<Result<Vec<_>, _>>(),
    ) else {
        return entry;
    };
    let modes: Vec<i64> = window.iter().collect();
    let Some(need) = record(&mut entry, bracket_precision(cfg, window, n)) else {
        return entry;
    };
    let inner = fields
        .iter()
        .flat_map(|f| modes.iter().map(move |m| f.input_precision(*m, n)))
        .max()
        .unwrap_or(n);
    // Brackets and trace forms of basis pairs.
    let mut brackets = Vec::with_capacity(basis.len() * basis.len());
    for a in &basis {
        for b in &basis {
            brackets.push((a.bracket(b), &a.trace_form(b) * level));
        }
    }
    let check = |p: &Probe, discrepancies: &mut Vec<String>| -> Result<(), Error> {
        let v = &p.vector;
        if !v.precision().covers(need) {
            return Err(Error::InsufficientPrecision {
                required: need,
                available: v.precision(),
            });
        }
        let slots = basis.len() * modes.len();
        let mut once = Vec::with_capacity(slots);
        for f in &fields {
            for k in &modes {
                once.push(f.apply_mode(*k, v, inner)?);
            }
        }
        let mut twice: Vec<Option<FilteredVector>> = alloc::vec![None; slots * slots];
        let base = v.truncate(n)?;
        let mut direct: BTreeMap<(SlnElement, i64), FilteredVector> = BTreeMap::new();
        for x in 0..slots {
            for y in x + 1..slots {
                let (a, m) = (x / modes.len(), modes[x % modes.len()]);
                let (b, k) = (y / modes.len(), modes[y % modes.len()]);
                for (s, t) in [(x, y), (y, x)] {
                    if twice[s * slots + t].is_none() {
                        let f = &fields[s / modes.len()];
                        twice[s * slots + t] =
                            Some(f.apply_mode(modes[s % modes.len()], &once[t], n)?);
                    }
                }
                let mut lhs = twice[x * slots + y].clone().expect("filled");
                lhs.add_scaled(
                    &Scalar::from_integer(-1),
                    twice[y * slots + x].as_ref().expect("filled"),
                );
                let (ab, form) = &brackets[a * basis.len() + b];
                if !ab.is_zero() {
                    let key = (ab.clone(), m + k);
                    if !direct.contains_key(&key) {
                        let img = sln_mode(cfg, ab, m + k).apply(&cfg.space, v, n)?;
                        direct.insert(key.clone(), img);
                    }
                    lhs.add_scaled(&Scalar::from_integer(-1), &direct[&key]);
                }
                if m + k == 0 && m != 0 && !form.is_zero() {
                    let c = Scalar::from_rational(form * &Rational::from_integer(m));
                    lhs.add_scaled(&-c, &base);
                }
                if !lhs.is_zero() {
                    discrepancies.push(format!(
                        "[{}({m}), {}({k})] on {}: residual {lhs}",
                        basis[a], basis[b], p.label
                    ));
                    if mode == BracketMode::Strict {
                        return Ok(());
                    }
                }
            }
        }
        Ok(())
    };
    match mode {
        BracketMode::Strict => {
            let outcome = first_failure(probes, |p| {
                let mut d = Vec::new();
                check(p, &mut d)?;
                Ok(d.into_iter().next())
            });
            entry.absorb(outcome);
        }
        BracketMode::Exploratory => {
            let mut found = Vec::new();
            let mut bad_probes = 0usize;
            for p in probes {
                let before = found.len();
                if let Err(e) = check(p, &mut found) {
                    entry.error(format!("{e}"));
                    return entry;
                }
                if found.len() > before {
                    bad_probes += 1;
                }
            }
            entry.set_param("discrepancies", found.len());
            entry.set_param("discrepant_probes", bad_probes);
            entry.witness = found.into_iter().next();
        }
    }
    entry
}
