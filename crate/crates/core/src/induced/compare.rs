//! The Heisenberg module induced from the Gaussian annihilators against the
//! submodule of the half-Gaussian model generated by `e^{−½Σx²}`.

use alloc::format;
use alloc::vec::Vec;

use super::{induce, AlgebraKind, InducedModule, Letter, ModeAlgebra, PbwWord, SubalgebraSpec};
use crate::betagamma::{beta_field, gamma_field, SymplecticConfig};
use crate::fields::Field;
use crate::filtered::{FilteredVector, Monomial, Precision};
use crate::linalg::rank;
use crate::report::{first_failure, record, CheckEntry, ModeWindow};
use crate::scalar::Scalar;
use crate::Error;

fn model_generators(cfg: &SymplecticConfig) -> Result<Vec<Field>, Error> {
    let mut out = Vec::new();
    for j in 1..=cfg.g {
        out.push(beta_field(cfg, j)?);
    }
    for j in 1..=cfg.g {
        out.push(gamma_field(cfg, j)?);
    }
    Ok(out)
}

fn gaussian() -> FilteredVector {
    FilteredVector::basis(Monomial::one())
}

/// `K ↦ κ` such that `[b_1(0), c_1(−1)] = τκ` on the Gaussian.
pub fn measure_gaussian_level(g: u32) -> Result<Scalar, Error> {
    let cfg = SymplecticConfig::gaussian(g);
    let gens = model_generators(&cfg)?;
    let br = gens[0].commutator(0, &gens[g as usize], -1, &gaussian(), 2)?;
    let c = br.coefficient(&Monomial::one());
    let expected = gaussian().truncate(2)?.scaled(&c);
    if br != expected {
        return Err(Error::Unsupported(format!(
            "central element does not act by a scalar: {br}"
        )));
    }
    Ok(&c / &Scalar::tau())
}

/// `Φ(w) = w·e^{−½Σx²}` for a normal word of creation letters.
fn image(gens: &[Field], w: &PbwWord, n: u32) -> Result<FilteredVector, Error> {
    let mut v = gaussian();
    for l in w.letters().iter().rev() {
        let f = &gens[l.gen as usize];
        let p = f.input_precision(l.mode, n);
        v = f.apply_mode(l.mode, &v, p)?;
        if !v.precision().covers(n) {
            return Err(Error::InsufficientPrecision {
                required: n,
                available: v.precision(),
            });
        }
    }
    v.truncate(n)
}

fn image_of(gens: &[Field], v: &FilteredVector<PbwWord>, n: u32) -> Result<FilteredVector, Error> {
    let mut out = FilteredVector::zero(Precision::Finite(n));
    for (w, c) in v.iter() {
        out.add_scaled(c, &image(gens, w, n)?);
    }
    Ok(out)
}

/// Compares the Gaussian-induced Heisenberg module with its realization on
/// the half-Gaussian model: the annihilators kill the Gaussian, the map
/// `w·1 ↦ w·e^{−½Σx²}` intertwines every generator mode in the window on
/// normal words of length `≤ max_len` (letter depth `≤ max_depth`) mod
/// `U_n`, and it is injective on those words.
pub fn compare_induced_heisenberg(
    g: u32,
    n: u32,
    window: ModeWindow,
    max_len: usize,
    max_depth: u32,
) -> Vec<CheckEntry> {
    let params = |e: CheckEntry| e.param("g", g).param("N", n).param("window", window);
    let mut ann = params(CheckEntry::new("induced-heisenberg-annihilators"));
    let mut inter = params(CheckEntry::new("induced-heisenberg-intertwining"))
        .param("max_len", max_len)
        .param("max_depth", max_depth);
    let mut inj = params(CheckEntry::new("induced-heisenberg-injective"))
        .param("max_len", max_len)
        .param("max_depth", max_depth);
    let setup = (|| -> Result<_, Error> {
        let level = measure_gaussian_level(g)?;
        let algebra = ModeAlgebra::heisenberg(g);
        let spec = SubalgebraSpec::gaussian(&algebra, level.clone())?;
        let module = induce(algebra, spec)?;
        let cfg = SymplecticConfig::gaussian(g);
        Ok((level, module, model_generators(&cfg)?))
    })();
    let (level, module, gens) = match setup {
        Ok(s) => s,
        Err(e) => {
            for entry in [&mut ann, &mut inter, &mut inj] {
                entry.error(format!("{e}"));
            }
            return alloc::vec![ann, inter, inj];
        }
    };
    for entry in [&mut ann, &mut inter, &mut inj] {
        entry.set_param("level", &level);
    }
    annihilators_kill(&module, &gens, window, &mut ann);
    let words = module.normal_words(max_len, max_depth);
    inter.set_param("words", words.len());
    let pairs: Vec<(&PbwWord, usize)> = words
        .iter()
        .flat_map(|w| (0..gens.len()).map(move |k| (w, k)))
        .collect();
    let outcome = first_failure(&pairs, |(w, gen)| {
        let reach = n + window.hi.max(0) as u32 + 1;
        let phi_w = image(&gens, w, reach.max(w.max_depth_of()))?;
        for m in window.iter() {
            let mut word = Vec::with_capacity(w.len() + 1);
            word.push(Letter::new(*gen, m));
            word.extend_from_slice(w.letters());
            let lhs = image_of(&gens, &module.straighten(&word, n)?, n)?;
            let rhs = gens[*gen].apply_mode(m, &phi_w, n)?;
            if lhs != rhs {
                return Ok(Some(format!(
                    "{}({m}) on {w}: induced side {lhs}, model side {rhs}",
                    module.algebra().name(*gen)
                )));
            }
        }
        Ok(None)
    });
    inter.absorb(outcome);
    let images: Option<Vec<FilteredVector>> = record(
        &mut inj,
        words
            .iter()
            .map(|w| image(&gens, w, max_depth.max(1)))
            .collect::<Result<_, _>>(),
    );
    if let Some(images) = images {
        let r = rank(&images);
        inj.set_param("words", words.len());
        inj.set_param("rank", r);
        if r != words.len() {
            inj.fail(format!(
                "images of {} normal words span only {r} dimensions",
                words.len()
            ));
        }
    }
    alloc::vec![ann, inter, inj]
}

fn annihilators_kill(
    module: &InducedModule,
    gens: &[Field],
    window: ModeWindow,
    entry: &mut CheckEntry,
) {
    debug_assert!(matches!(module.kind(), AlgebraKind::Heisenberg(_)));
    let reach = window.hi.max(0) as u32 + 2;
    let mut count = 0usize;
    for r in &module.spec().rules {
        for m in r.min_mode.max(window.lo)..=window.hi {
            let mut acc = FilteredVector::zero(Precision::Finite(reach));
            let run = |acc: &mut FilteredVector, l: Letter, c: &Scalar| -> Result<(), Error> {
                let f = &gens[l.gen as usize];
                acc.add_scaled(c, &f.apply_mode(l.mode, &gaussian(), reach)?);
                Ok(())
            };
            let mut res = run(&mut acc, Letter::new(r.gen, m), &Scalar::one());
            for (g, off, c) in &r.image {
                res = res.and_then(|_| run(&mut acc, Letter::new(*g, off - m), &-c.clone()));
            }
            if record(entry, res).is_none() {
                return;
            }
            count += 1;
            if !acc.is_zero() {
                entry.fail(format!(
                    "annihilator at {}({m}) leaves {acc}",
                    module.algebra().name(r.gen)
                ));
                return;
            }
        }
    }
    entry.set_param("annihilators", count);
}

impl PbwWord {
    fn max_depth_of(&self) -> u32 {
        crate::filtered::Basis::max_depth(self)
    }
}
