//! Induced modules `U(ĝ) ⊗_{U(s)} C` over affine and Heisenberg mode
//! algebras, PBW straightening, vacuum vertex algebras and the Borcherds
//! identity.
//!
//! States are combinations of normal-ordered words `X₁(m₁)⋯X_k(m_k)·1`
//! in modes outside the annihilating subalgebra `s`, deepest letter first.
//! The depth filtration is by the deepest letter of a word.

mod algebra;
mod compare;
mod suites;
mod vertex;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

pub use algebra::{generator_name, AlgebraKind, Bracket, Letter, ModeAlgebra};
pub use compare::{compare_induced_heisenberg, measure_gaussian_level};
pub use suites::{borcherds_betagamma, borcherds_sl2};
pub use vertex::{
    borcherds_check, check_cofinality, reconstruct_field, state_nproduct, state_weight,
    BorcherdsCase, Reconstructor,
};

use crate::fields::{Field, FieldModes};
use crate::filtered::{Basis, FilteredVector, Precision};
use crate::linalg::rank;
use crate::report::{first_failure, CheckEntry};
use crate::scalar::Scalar;
use crate::Error;

/// A normal-ordered word acting on the induced vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwWord {
    kind: AlgebraKind,
    letters: SmallVec<[Letter; 4]>,
}

impl PbwWord {
    pub fn vacuum(kind: AlgebraKind) -> Self {
        PbwWord {
            kind,
            letters: SmallVec::new(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word without its first letter.
    pub fn tail(&self) -> PbwWord {
        PbwWord {
            kind: self.kind,
            letters: self.letters[1..].iter().copied().collect(),
        }
    }
}

impl Basis for PbwWord {
    fn max_depth(&self) -> u32 {
        self.letters.iter().map(|l| l.depth()).max().unwrap_or(0)
    }
}

impl fmt::Display for PbwWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(
                f,
                "{}({})",
                generator_name(self.kind, l.gen as usize),
                l.mode
            )?;
        }
        f.write_str("|0>")
    }
}

/// `X(m)·1 = Σ c·Y(offset − m)·1` for every mode `m ≥ min_mode`. An empty
/// image makes `X(m)` an annihilator of the induced vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorRule {
    pub gen: usize,
    pub min_mode: i64,
    pub image: Vec<(usize, i64, Scalar)>,
}

/// The subalgebra `s` (as rewriting rules), the level `K ↦ level`, and the
/// asserted gap `s ∩ g[t^{−1}]t^{−depth_gap} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraSpec {
    pub name: String,
    pub rules: Vec<AnnihilatorRule>,
    pub level: Scalar,
    pub depth_gap: u32,
}

impl SubalgebraSpec {
    /// All modes `X(m)`, `m ≥ 0`, annihilate: the vacuum module `V^k`.
    pub fn vacuum(algebra: &ModeAlgebra, level: Scalar) -> Self {
        let rules = (0..algebra.len())
            .map(|gen| AnnihilatorRule {
                gen,
                min_mode: 0,
                image: Vec::new(),
            })
            .collect();
        SubalgebraSpec {
            name: String::from("vacuum"),
            rules,
            level,
            depth_gap: 1,
        }
    }

    /// The Gaussian annihilators of the Heisenberg algebra:
    /// `c_j(n−1)·1 = τ^{−1} b_j(−n)·1` and `b_j(n−1)·1 = −τ^{−1} c_j(−n)·1`.
    pub fn gaussian(algebra: &ModeAlgebra, level: Scalar) -> Result<Self, Error> {
        let AlgebraKind::Heisenberg(g) = algebra.kind() else {
            return Err(Error::InvalidSpec(format!(
                "gaussian spec needs a Heisenberg algebra, got {algebra}"
            )));
        };
        let g = g as usize;
        let inv_tau = Scalar::tau().checked_inv()?;
        let mut rules = Vec::new();
        for j in 0..g {
            rules.push(AnnihilatorRule {
                gen: j,
                min_mode: 0,
                image: alloc::vec![(j + g, -1, -inv_tau.clone())],
            });
            rules.push(AnnihilatorRule {
                gen: j + g,
                min_mode: 0,
                image: alloc::vec![(j, -1, inv_tau.clone())],
            });
        }
        Ok(SubalgebraSpec {
            name: String::from("gaussian"),
            rules,
            level,
            depth_gap: 1,
        })
    }
}

/// Rewrite order used by [`InducedModule::straighten_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// Uniformly random among the reducible positions.
    Seeded(u64),
}

/// Default rewrite-step budget per straightening call.
pub const DEFAULT_BUDGET: usize = 1 << 20;

/// An induced module with straightening as its action.
#[derive(Debug)]
pub struct InducedModule {
    algebra: ModeAlgebra,
    spec: SubalgebraSpec,
    budget: usize,
}

/// Builds `U(ĝ) ⊗_{U(s)} C`, checking at bounded depth that the
/// annihilators avoid `g[t^{−1}]t^{−depth_gap}` and that their brackets
/// kill the induced vector.
pub fn induce(algebra: ModeAlgebra, spec: SubalgebraSpec) -> Result<Arc<InducedModule>, Error> {
    for r in &spec.rules {
        if r.gen >= algebra.len() || r.image.iter().any(|(g, _, _)| *g >= algebra.len()) {
            return Err(Error::InvalidSpec(format!(
                "rule for generator {} out of range",
                r.gen
            )));
        }
    }
    let module = InducedModule {
        algebra,
        spec,
        budget: DEFAULT_BUDGET,
    };
    module.check_depth_gap()?;
    module.check_annihilator_brackets()?;
    Ok(Arc::new(module))
}

impl InducedModule {
    pub fn algebra(&self) -> &ModeAlgebra {
        &self.algebra
    }

    pub fn spec(&self) -> &SubalgebraSpec {
        &self.spec
    }

    pub fn kind(&self) -> AlgebraKind {
        self.algebra.kind()
    }

    pub fn with_budget(mut self: Arc<Self>, budget: usize) -> Arc<Self> {
        if let Some(m) = Arc::get_mut(&mut self) {
            m.budget = budget;
            return self;
        }
        Arc::new(InducedModule {
            algebra: self.algebra.clone(),
            spec: self.spec.clone(),
            budget,
        })
    }

    fn rule_for(&self, l: Letter) -> Option<&AnnihilatorRule> {
        self.spec
            .rules
            .iter()
            .find(|r| r.gen == l.gen as usize && l.mode >= r.min_mode)
    }

    /// Whether `l` lies in the complement of `s` (survives in normal words).
    pub fn is_complement(&self, l: Letter) -> bool {
        self.rule_for(l).is_none()
    }

    pub fn word(&self, letters: &[Letter]) -> PbwWord {
        PbwWord {
            kind: self.kind(),
            letters: letters.iter().copied().collect(),
        }
    }

    pub fn vacuum(&self) -> FilteredVector<PbwWord> {
        FilteredVector::basis(PbwWord::vacuum(self.kind()))
    }

    fn out_of_order(&self, a: Letter, b: Letter) -> bool {
        match (self.is_complement(a), self.is_complement(b)) {
            (true, true) => (a.mode, a.gen) > (b.mode, b.gen),
            (false, true) => true,
            _ => false,
        }
    }

    /// A word is dropped mod `U_n` once a complement letter is deeper than
    /// `n` plus all the depth the letters to its left could remove.
    fn negligible(&self, w: &[Letter], n: u32) -> bool {
        let mut allowance = 0u32;
        for l in w {
            if self.is_complement(*l) && l.depth() > n + allowance {
                return true;
            }
            allowance += self.algebra.depth_lift(l.mode);
        }
        false
    }

    /// `word·1` in normal form, mod `U_n`.
    pub fn straighten(&self, word: &[Letter], n: u32) -> Result<FilteredVector<PbwWord>, Error> {
        self.straighten_with(word, n, Strategy::Rightmost)
    }

    pub fn straighten_with(
        &self,
        word: &[Letter],
        n: u32,
        strategy: Strategy,
    ) -> Result<FilteredVector<PbwWord>, Error> {
        let mut out = FilteredVector::zero(Precision::Finite(n));
        let mut rng = match strategy {
            Strategy::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
            _ => None,
        };
        let mut pending: BTreeMap<Vec<Letter>, Scalar> = BTreeMap::new();
        pending.insert(word.to_vec(), Scalar::one());
        let mut steps = 0usize;
        let push = |pending: &mut BTreeMap<Vec<Letter>, Scalar>, w: Vec<Letter>, c: Scalar| {
            if c.is_zero() {
                return;
            }
            let slot = pending.entry(w).or_insert_with(Scalar::zero);
            *slot = &*slot + &c;
        };
        let level = self.spec.level.clone();
        while let Some((w, c)) = pending.pop_first() {
            steps += 1;
            if steps > self.budget {
                return Err(Error::RewriteBudget(self.budget));
            }
            if c.is_zero() || self.negligible(&w, n) {
                continue;
            }
            let mut candidates: SmallVec<[usize; 8]> = SmallVec::new();
            for p in 0..w.len().saturating_sub(1) {
                if self.out_of_order(w[p], w[p + 1]) {
                    candidates.push(p);
                }
            }
            if let Some(&last) = w.last() {
                if !self.is_complement(last) {
                    candidates.push(w.len() - 1);
                }
            }
            let p = match (strategy, candidates.as_slice()) {
                (_, []) => {
                    out.add_term(self.word(&w), c);
                    continue;
                }
                (Strategy::Leftmost, cs) => cs[0],
                (Strategy::Rightmost, cs) => cs[cs.len() - 1],
                (Strategy::Seeded(_), cs) => {
                    cs[rng.as_mut().expect("seeded").gen_range(0..cs.len())]
                }
            };
            if p + 1 == w.len() && !self.is_complement(w[p]) {
                let rule = self.rule_for(w[p]).expect("non-complement letter");
                for (gen, offset, k) in &rule.image {
                    let mut next = w[..p].to_vec();
                    next.push(Letter::new(*gen, offset - w[p].mode));
                    push(&mut pending, next, &c * k);
                }
                continue;
            }
            let mut swapped = w.clone();
            swapped.swap(p, p + 1);
            push(&mut pending, swapped, c.clone());
            let br = self.algebra.bracket(w[p], w[p + 1]);
            for (z, k) in &br.letters {
                let mut next = w[..p].to_vec();
                next.push(*z);
                next.extend_from_slice(&w[p + 2..]);
                push(&mut pending, next, &c * k);
            }
            if !br.central.is_zero() {
                let mut next = w[..p].to_vec();
                next.extend_from_slice(&w[p + 2..]);
                push(&mut pending, next, &(&c * &br.central) * &level);
            }
        }
        Ok(out)
    }

    /// `X(m)·v` mod `U_n`.
    pub fn apply_letter(
        &self,
        l: Letter,
        v: &FilteredVector<PbwWord>,
        n: u32,
    ) -> Result<FilteredVector<PbwWord>, Error> {
        let required = n + self.algebra.depth_lift(l.mode);
        if !v.precision().covers(required) {
            return Err(Error::InsufficientPrecision {
                required,
                available: v.precision(),
            });
        }
        let mut out = FilteredVector::zero(Precision::Finite(n));
        for (w, c) in v.iter() {
            let mut word = Vec::with_capacity(w.len() + 1);
            word.push(l);
            word.extend_from_slice(w.letters());
            out.add_scaled(c, &self.straighten(&word, n)?);
        }
        Ok(out)
    }

    fn single(
        &self,
        l: Letter,
        c: &Scalar,
        out: &mut FilteredVector<PbwWord>,
    ) -> Result<(), Error> {
        out.add_scaled(c, &self.straighten(&[l], u32::MAX / 2)?);
        Ok(())
    }

    /// `s ∩ g[t^{−1}]t^{−n} = 0` for modes in `[−n−3, n+3]`, by exact rank.
    fn check_depth_gap(&self) -> Result<(), Error> {
        let n = self.spec.depth_gap as i64;
        let bound = n + 3;
        let single = |l: Letter| FilteredVector::basis(self.word(&[l]));
        let mut annihilators = Vec::new();
        for r in &self.spec.rules {
            for m in r.min_mode.max(-bound)..=bound {
                let mut a = single(Letter::new(r.gen, m));
                let mut inside = true;
                for (g, off, c) in &r.image {
                    let img = Letter::new(*g, off - m);
                    inside &= (-bound..=bound).contains(&img.mode);
                    a.add_scaled(&-c.clone(), &single(img));
                }
                if inside {
                    annihilators.push(a);
                }
            }
        }
        let deep: Vec<_> = (0..self.algebra.len())
            .flat_map(|g| (-bound..=-n).map(move |m| Letter::new(g, m)))
            .map(single)
            .collect();
        let mut both = annihilators.clone();
        both.extend(deep.iter().cloned());
        let meet = rank(&annihilators) + rank(&deep) - rank(&both);
        if meet > 0 {
            return Err(Error::InvalidSpec(format!(
                "annihilators meet g[t^-1]t^-{n} in dimension {meet} (modes within ±{bound})"
            )));
        }
        Ok(())
    }

    /// Brackets of annihilator elements `X(m) − Σ c·Y(offset − m)` must kill
    /// the induced vector, for modes in `[min_mode, 2]`.
    fn check_annihilator_brackets(&self) -> Result<(), Error> {
        let mut elements: Vec<Vec<(Letter, Scalar)>> = Vec::new();
        for r in &self.spec.rules {
            for m in r.min_mode.max(-2)..=2 {
                let mut e = alloc::vec![(Letter::new(r.gen, m), Scalar::one())];
                for (g, off, c) in &r.image {
                    e.push((Letter::new(*g, off - m), -c.clone()));
                }
                elements.push(e);
            }
        }
        for x in &elements {
            for y in &elements {
                let mut acc = FilteredVector::zero(Precision::Exact);
                let mut central = Scalar::zero();
                for (a, ca) in x {
                    for (b, cb) in y {
                        let br = self.algebra.bracket(*a, *b);
                        let c = ca * cb;
                        central = &central + &(&c * &br.central);
                        for (z, k) in &br.letters {
                            self.single(*z, &(&c * k), &mut acc)?;
                        }
                    }
                }
                acc.add_scaled(&(&central * &self.spec.level), &self.vacuum());
                if !acc.is_zero() {
                    let render = |e: &Vec<(Letter, Scalar)>| {
                        let parts: Vec<String> = e
                            .iter()
                            .map(|(l, c)| format!("({c}){}", self.algebra.render_letter(*l)))
                            .collect();
                        parts.join(" + ")
                    };
                    return Err(Error::InvalidSpec(format!(
                        "[{}, {}] does not kill the induced vector: {acc}",
                        render(x),
                        render(y)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The field `X(z)` acting on this module.
    pub fn generator_field(self: &Arc<Self>, gen: usize) -> Field<PbwWord> {
        Field::new(ModuleGenerator {
            module: Arc::clone(self),
            gen,
        })
        .cached()
    }

    pub fn generator_fields(self: &Arc<Self>) -> Vec<Field<PbwWord>> {
        (0..self.algebra.len())
            .map(|g| self.generator_field(g))
            .collect()
    }

    /// Normal-ordered complement words of length `≤ max_len` whose letters
    /// have depth in `1..=max_depth`.
    pub fn normal_words(&self, max_len: usize, max_depth: u32) -> Vec<PbwWord> {
        let mut letters: Vec<Letter> = (0..self.algebra.len())
            .flat_map(|g| (1..=max_depth as i64).map(move |d| Letter::new(g, -d)))
            .filter(|l| self.is_complement(*l))
            .collect();
        letters.sort_by_key(|l| (l.mode, l.gen));
        let mut out = Vec::new();
        fn rec(
            letters: &[Letter],
            start: usize,
            left: usize,
            cur: &mut Vec<Letter>,
            m: &InducedModule,
            out: &mut Vec<PbwWord>,
        ) {
            out.push(m.word(cur));
            if left == 0 {
                return;
            }
            for i in start..letters.len() {
                cur.push(letters[i]);
                rec(letters, i, left - 1, cur, m, out);
                cur.pop();
            }
        }
        rec(&letters, 0, max_len, &mut Vec::new(), self, &mut out);
        out.sort();
        out
    }

    /// `count` words of length `1..=max_len` with modes in `[−max_depth, max_depth]`.
    pub fn random_words(
        &self,
        count: usize,
        max_len: usize,
        max_depth: u32,
        seed: u64,
    ) -> Vec<Vec<Letter>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = max_depth as i64;
        (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=max_len);
                (0..len)
                    .map(|_| {
                        Letter::new(rng.gen_range(0..self.algebra.len()), rng.gen_range(-d..=d))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn render_word(&self, w: &[Letter]) -> String {
        let mut s = String::new();
        for l in w {
            s.push_str(&self.algebra.render_letter(*l));
        }
        s.push_str("|0>");
        s
    }
}

/// Straightening in leftmost, rightmost and seeded-random order agree mod `U_n`.
pub fn check_confluence(
    module: &InducedModule,
    words: &[Vec<Letter>],
    n: u32,
    seed: u64,
) -> CheckEntry {
    let mut entry = CheckEntry::new("straightening-confluence")
        .param("algebra", module.algebra())
        .param("spec", &module.spec().name)
        .param("words", words.len())
        .param("N", n)
        .param("seed", seed);
    let indexed: Vec<(usize, &Vec<Letter>)> = words.iter().enumerate().collect();
    let outcome = first_failure(&indexed, |(i, w)| {
        let base = module.straighten_with(w, n, Strategy::Leftmost)?;
        for s in [Strategy::Rightmost, Strategy::Seeded(seed ^ (*i as u64))] {
            let other = module.straighten_with(w, n, s)?;
            if other != base {
                return Ok(Some(format!(
                    "{} under {s:?}: {other} vs leftmost {base}",
                    module.render_word(w)
                )));
            }
        }
        Ok(None)
    });
    entry.absorb(outcome);
    entry
}

struct ModuleGenerator {
    module: Arc<InducedModule>,
    gen: usize,
}

impl FieldModes<PbwWord> for ModuleGenerator {
    fn apply_to_basis(
        &self,
        mode: i64,
        b: &PbwWord,
        n: u32,
    ) -> Result<FilteredVector<PbwWord>, Error> {
        let mut word = Vec::with_capacity(b.len() + 1);
        word.push(Letter::new(self.gen, mode));
        word.extend_from_slice(b.letters());
        self.module.straighten(&word, n)
    }

    fn input_precision(&self, mode: i64, n: u32) -> u32 {
        n + self.module.algebra.depth_lift(mode)
    }

    fn deep_image(&self, n: u32) -> i64 {
        n as i64 + 1
    }

    fn label(&self) -> String {
        String::from(self.module.algebra.name(self.gen))
    }
}
