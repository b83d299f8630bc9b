//! Borcherds identity on concrete realizations.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{
    borcherds_check, induce, BorcherdsCase, InducedModule, Letter, ModeAlgebra, PbwWord,
    Reconstructor, SubalgebraSpec,
};
use crate::affine::{current_field, eigen_probes, SlnConfig};
use crate::betagamma::{beta_field, gamma_field, SymplecticConfig};
use crate::fields::Field;
use crate::filtered::{FilteredVector, Precision};
use crate::report::{CheckEntry, ModeWindow};
use crate::scalar::Scalar;
use crate::Error;

fn exact_state(
    module: &InducedModule,
    letters: &[Letter],
) -> Result<FilteredVector<PbwWord>, Error> {
    let depth: u32 = letters.iter().map(|l| l.depth()).sum::<u32>() + 1;
    let mut out = FilteredVector::zero(Precision::Exact);
    for (w, c) in module.straighten(letters, depth)?.iter() {
        out.add_term(w.clone(), c.clone());
    }
    Ok(out)
}

fn cases<B: crate::filtered::Basis>(
    module: &Arc<InducedModule>,
    gens: Vec<Field<B>>,
    states: &[FilteredVector<PbwWord>],
    ls: ModeWindow,
) -> Result<Vec<BorcherdsCase<B>>, Error> {
    let mut rec = Reconstructor::new(gens);
    let mut out = Vec::new();
    for a in states {
        for b in states {
            for l in ls.iter() {
                out.push(BorcherdsCase::new(module, &mut rec, a, b, l)?);
            }
        }
    }
    Ok(out)
}

/// The β–γ vertex algebra (vacuum module of the Heisenberg algebra) acting
/// on the plain polynomial model: states are normal words of length
/// `≤ max_len` with letters of depth `≤ depth`, probes are monomials of
/// depth `≤ probe_depth` and degree `≤ probe_degree`.
pub fn borcherds_betagamma(
    g: u32,
    slack: u32,
    depth: u32,
    max_len: usize,
    ls: ModeWindow,
    window: ModeWindow,
    probe_depth: u32,
    probe_degree: u32,
    n: u32,
) -> CheckEntry {
    let run = || -> Result<CheckEntry, Error> {
        let alg = ModeAlgebra::heisenberg(g);
        let spec = SubalgebraSpec::vacuum(&alg, Scalar::one());
        let module = induce(alg, spec)?;
        let cfg = SymplecticConfig::plain(g);
        let mut gens = Vec::new();
        for j in 1..=g {
            gens.push(beta_field(&cfg, j)?);
        }
        for j in 1..=g {
            gens.push(gamma_field(&cfg, j)?);
        }
        let states: Vec<_> = module
            .normal_words(max_len, depth)
            .into_iter()
            .map(FilteredVector::basis)
            .collect();
        let cases = cases(&module, gens, &states, ls)?;
        let probes = cfg.probes(probe_depth, probe_degree);
        Ok(
            borcherds_check(&format!("betagamma{g}"), &cases, window, &probes, n, slack)
                .param("states", states.len())
                .param("l", ls)
                .param("probe_depth", probe_depth)
                .param("probe_degree", probe_degree),
        )
    };
    run().unwrap_or_else(|e| {
        let mut entry = CheckEntry::new("borcherds").param("module", format!("betagamma{g}"));
        entry.error(format!("{e}"));
        entry
    })
}

/// `V^1(sl_2)` acting on the eigenspace model with states
/// `a(−1)·1`, `a ∈ {e, f, h}`, on eigen-probes of generation
/// `≤ generation`.
pub fn borcherds_sl2(
    c: crate::scalar::Rational,
    slack: u32,
    ls: ModeWindow,
    window: ModeWindow,
    generation: u32,
    n: u32,
) -> CheckEntry {
    let run = || -> Result<CheckEntry, Error> {
        let alg = ModeAlgebra::sl(2);
        let spec = SubalgebraSpec::vacuum(&alg, Scalar::one());
        let module = induce(alg, spec)?;
        let cfg = SlnConfig::new(2, c.clone())?;
        let gens: Vec<Field> = cfg
            .basis()
            .iter()
            .map(|a| current_field(&cfg, a))
            .collect::<Result<_, _>>()?;
        let states: Vec<_> = (0..3)
            .map(|k| exact_state(&module, &[Letter::new(k, -1)]))
            .collect::<Result<_, _>>()?;
        let cases = cases(&module, gens, &states, ls)?;
        let p = cases
            .iter()
            .map(|c| c.input_precision(window, n))
            .max()
            .unwrap_or(n)
            + 2 * slack;
        let probes: Vec<FilteredVector> = eigen_probes(&cfg, generation, p)?
            .into_iter()
            .map(|p| p.vector)
            .collect();
        Ok(
            borcherds_check("V^1(sl2)", &cases, window, &probes, n, slack)
                .param("c", &c)
                .param("l", ls)
                .param("generation", generation)
                .param("probe_precision", p),
        )
    };
    run().unwrap_or_else(|e| {
        let mut entry = CheckEntry::new("borcherds").param("module", "V^1(sl2)");
        entry.error(format!("{e}"));
        entry
    })
}
