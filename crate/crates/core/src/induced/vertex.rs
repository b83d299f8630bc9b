//! Vacuum vertex algebras: state products, reconstruction of fields from
//! states, and the Borcherds identity on a module.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{InducedModule, PbwWord};
use crate::fields::{combination, identity, nproduct, Field};
use crate::filtered::{Basis, FilteredVector, Precision};
use crate::report::{first_failure, CheckEntry, ModeWindow};
use crate::Error;

/// Twice the largest grading weight among the words of `state`.
pub fn state_weight(module: &InducedModule, state: &FilteredVector<PbwWord>) -> i64 {
    state
        .iter()
        .map(|(w, _)| {
            w.letters()
                .iter()
                .map(|l| module.algebra().doubled_weight(*l))
                .sum::<i64>()
        })
        .max()
        .unwrap_or(i64::MIN / 4)
}

fn exact<B: Basis>(v: &FilteredVector<B>) -> FilteredVector<B> {
    let mut out = FilteredVector::zero(Precision::Exact);
    for (b, c) in v.iter() {
        out.add_term(b.clone(), c.clone());
    }
    out
}

fn require_exact(v: &FilteredVector<PbwWord>) -> Result<(), Error> {
    match v.precision() {
        Precision::Exact => Ok(()),
        p => Err(Error::InsufficientPrecision {
            required: u32::MAX,
            available: p,
        }),
    }
}

/// `a_(l) b` in the vacuum module, exactly: by homogeneity every word of
/// the result has weight `≤ wt a + wt b − l − 1`, which bounds its depth.
pub fn state_nproduct(
    module: &Arc<InducedModule>,
    a: &FilteredVector<PbwWord>,
    b: &FilteredVector<PbwWord>,
    l: i64,
) -> Result<FilteredVector<PbwWord>, Error> {
    require_exact(a)?;
    require_exact(b)?;
    let w2 = state_weight(module, a) + state_weight(module, b) - 2 * l - 2;
    if w2 < 0 {
        return Ok(FilteredVector::zero(Precision::Exact));
    }
    // Doubled weight of X(−d) is 2d (affine) or 2d − 1 (Heisenberg).
    let depth = ((w2 + 1) / 2) as u32;
    let ya = reconstruct_field(a, &module.generator_fields())?;
    Ok(exact(&ya.apply_mode(l, b, depth)?))
}

/// Reconstruction with a cache of word fields.
pub struct Reconstructor<B: Basis> {
    gens: Vec<Field<B>>,
    cache: BTreeMap<PbwWord, Field<B>>,
}

impl<B: Basis> Reconstructor<B> {
    pub fn new(gens: Vec<Field<B>>) -> Self {
        Reconstructor {
            gens,
            cache: BTreeMap::new(),
        }
    }

    /// `Y(X(m) w, z) = X(z)_(m) Y(w, z)` for a normal word; the vacuum gives `Id`.
    pub fn word_field(&mut self, w: &PbwWord) -> Result<Field<B>, Error> {
        if let Some(f) = self.cache.get(w) {
            return Ok(f.clone());
        }
        let f = match w.letters().first() {
            None => identity(),
            Some(first) => {
                if first.mode >= 0 {
                    return Err(Error::Unsupported(format!(
                        "state word {w} starts with a non-creation mode"
                    )));
                }
                let gen = self
                    .gens
                    .get(first.gen as usize)
                    .ok_or(Error::IndexOutOfRange {
                        what: "generator",
                        index: first.gen as i64,
                        min: 0,
                        max: self.gens.len() as i64 - 1,
                    })?;
                let gen = gen.clone();
                let rest = self.word_field(&w.tail())?;
                nproduct(&gen, &rest, first.mode)
            }
        };
        self.cache.insert(w.clone(), f.clone());
        Ok(f)
    }

    pub fn field(&mut self, state: &FilteredVector<PbwWord>) -> Result<Field<B>, Error> {
        require_exact(state)?;
        let mut parts = Vec::new();
        for (w, c) in state.iter() {
            parts.push((c.clone(), self.word_field(w)?));
        }
        if let [(c, f)] = parts.as_slice() {
            if c.is_one() {
                return Ok(f.clone());
            }
        }
        Ok(combination(parts))
    }
}

/// The field of an exact state, built from generator fields.
pub fn reconstruct_field<B: Basis>(
    state: &FilteredVector<PbwWord>,
    gens: &[Field<B>],
) -> Result<Field<B>, Error> {
    Reconstructor::new(gens.to_vec()).field(state)
}

/// Both sides of `Y(a_(l)b, z) = Y(a,z)_(l) Y(b,z)`.
pub struct BorcherdsCase<B: Basis> {
    pub label: String,
    pub lhs: Field<B>,
    pub rhs: Field<B>,
}

impl<B: Basis> BorcherdsCase<B> {
    pub fn new(
        module: &Arc<InducedModule>,
        rec: &mut Reconstructor<B>,
        a: &FilteredVector<PbwWord>,
        b: &FilteredVector<PbwWord>,
        l: i64,
    ) -> Result<Self, Error> {
        let ab = state_nproduct(module, a, b, l)?;
        let lhs = rec.field(&ab)?;
        let rhs = nproduct(&rec.field(a)?, &rec.field(b)?, l);
        Ok(BorcherdsCase {
            label: format!("a={a} b={b} l={l}"),
            lhs,
            rhs,
        })
    }

    /// Probe precision both sides need on the window.
    pub fn input_precision(&self, window: ModeWindow, n: u32) -> u32 {
        window
            .iter()
            .map(|k| {
                self.lhs
                    .input_precision(k, n)
                    .max(self.rhs.input_precision(k, n))
            })
            .max()
            .unwrap_or(n)
    }
}

/// Every case agrees mode by mode on every probe, mod `U_n`. With
/// `slack > 0` each side is also recomputed with every cutoff extended by
/// `slack` terms; a change means the truncated sums have not converged,
/// and the case fails.
pub fn borcherds_check<B: Basis>(
    name: &str,
    cases: &[BorcherdsCase<B>],
    window: ModeWindow,
    probes: &[FilteredVector<B>],
    n: u32,
    slack: u32,
) -> CheckEntry {
    let mut entry = CheckEntry::new("borcherds")
        .param("module", name)
        .param("cases", cases.len())
        .param("window", window)
        .param("N", n)
        .param("probes", probes.len())
        .param("slack", slack);
    let outcome = first_failure(cases, |case| {
        for k in window.iter() {
            for (i, v) in probes.iter().enumerate() {
                let lhs = case.lhs.apply_mode(k, v, n)?;
                let rhs = case.rhs.apply_mode(k, v, n)?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "{} mode {k} on probe #{i}: {lhs} vs {rhs}",
                        case.label
                    )));
                }
                if slack == 0 {
                    continue;
                }
                for (side, f, base) in [("left", &case.lhs, &lhs), ("right", &case.rhs, &rhs)] {
                    let wide = f.apply_mode_with_slack(k, v, n, slack)?;
                    if &wide != base {
                        return Ok(Some(format!(
                            "{} mode {k} on probe #{i}: {side} side does not converge ({base} vs {wide} with slack {slack})",
                            case.label
                        )));
                    }
                }
            }
        }
        Ok(None)
    });
    entry.absorb(outcome);
    entry
}

/// For normal words of length `≤ max_len` and letter depth `≤ max_depth`:
/// the depth filtration `U_n` sits inside the energy filtration
/// `N_{n+1}` (total depth `> n`), and `N_{max_len·n+1} ⊆ U_n`.
pub fn check_cofinality(module: &InducedModule, max_len: usize, max_depth: u32) -> CheckEntry {
    let mut entry = CheckEntry::new("cofinality")
        .param("algebra", module.algebra())
        .param("max_len", max_len)
        .param("max_depth", max_depth);
    let words = module.normal_words(max_len, max_depth);
    entry.set_param("words", words.len());
    for n in 1..max_depth {
        for w in &words {
            let energy: u32 = w.letters().iter().map(|l| l.depth()).sum();
            let deep = w.max_depth() > n;
            if deep && energy <= n {
                entry.fail(format!("{w} lies in U_{n} but has energy {energy}"));
                return entry;
            }
            if energy > max_len as u32 * n && !deep {
                entry.fail(format!("{w} has energy {energy} but lies outside U_{n}"));
                return entry;
            }
        }
    }
    entry
}
