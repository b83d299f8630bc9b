//! Named check suites assembled from the individual checks, with the
//! parameters a caller can vary collected in [`SuiteConfig`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::affine::{
    check_affine_bracket, check_eigen_relation, check_pi_t_relations, current_field, eigen_probes,
    Probe, SlnConfig,
};
use crate::betagamma::{
    beta_field, check_heisenberg_relations, check_sp_bracket_closure, gamma_field,
    sp_quadratic_field, SpKind, SymplecticConfig,
};
use crate::fields::{
    check_continuity, check_dual_field, check_field_axioms, check_nproduct_consistency, dual_reach,
    nproduct_probe_precision, AxiomOptions, DualFunctional, Field,
};
use crate::filtered::{monomial_basis, FilteredVector, ModelSpace, Monomial, Precision};
use crate::induced::{
    borcherds_betagamma, borcherds_sl2, check_confluence, compare_induced_heisenberg, induce,
    Letter, ModeAlgebra, SubalgebraSpec,
};
use crate::report::{CheckEntry, ModeWindow};
use crate::scalar::{Rational, Scalar};
use crate::Error;

/// Every suite name accepted by [`run_suite`].
pub const SUITES: &[&str] = &[
    "heisenberg",
    "betagamma-axioms",
    "sp",
    "sln",
    "sln-axioms",
    "pi-t",
    "nproduct",
    "borcherds",
    "dual",
    "induced-heisenberg",
];

/// Parameters shared by the suites. Each suite reads the ones it needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Truncation depth: results are compared mod `U_N`.
    pub precision: u32,
    pub degree: u32,
    pub depth: u32,
    pub window: ModeWindow,
    pub g: u32,
    /// Rank `n` of `sl_n`, also the species count of the φ_c model.
    pub n: u32,
    pub c: Rational,
    pub seed: u64,
    pub margin: u32,
    pub generation: u32,
    pub probes: usize,
    pub words: usize,
    pub max_len: usize,
    pub level: Rational,
    /// Extra terms used to test that truncated infinite sums have converged.
    pub slack: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            precision: 5,
            degree: 3,
            depth: 5,
            window: ModeWindow::new(-3, 3),
            g: 1,
            n: 2,
            c: Rational::ONE,
            seed: 0,
            margin: 3,
            generation: 1,
            probes: 20,
            words: 200,
            max_len: 4,
            level: Rational::ONE,
            slack: 2,
        }
    }
}

impl SuiteConfig {
    /// `(key, value)` pairs in a fixed order, as recorded in reports.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        alloc::vec![
            ("N", format!("{}", self.precision)),
            ("c", format!("{}", self.c)),
            ("degree", format!("{}", self.degree)),
            ("depth", format!("{}", self.depth)),
            ("g", format!("{}", self.g)),
            ("generation", format!("{}", self.generation)),
            ("level", format!("{}", self.level)),
            ("margin", format!("{}", self.margin)),
            ("max_len", format!("{}", self.max_len)),
            ("n", format!("{}", self.n)),
            ("probes", format!("{}", self.probes)),
            ("seed", format!("{}", self.seed)),
            ("slack", format!("{}", self.slack)),
            ("window", format!("{}", self.window)),
            ("words", format!("{}", self.words)),
        ]
    }
}

fn errored(name: &str, e: Error) -> CheckEntry {
    let mut entry = CheckEntry::new(name);
    entry.error(format!("{e}"));
    entry
}

/// Runs the named suite.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckEntry>, Error> {
    let entries = match name {
        "heisenberg" => heisenberg(cfg),
        "betagamma-axioms" => betagamma_axioms(cfg),
        "sp" => sp(cfg),
        "sln" => sln(cfg),
        "sln-axioms" => match SlnConfig::new(cfg.n, cfg.c.clone()) {
            Ok(s) => sln_axioms(&s, cfg),
            Err(e) => alloc::vec![errored("field-axioms", e)],
        },
        "pi-t" => pi_t(cfg),
        "nproduct" => nproduct(cfg),
        "borcherds" => borcherds(cfg),
        "dual" => dual(cfg),
        "induced-heisenberg" => induced(cfg),
        other => return Err(Error::Unsupported(format!("unknown suite `{other}`"))),
    };
    Ok(entries)
}

fn symplectic_models(g: u32) -> [SymplecticConfig; 2] {
    [SymplecticConfig::plain(g), SymplecticConfig::gaussian(g)]
}

/// `[β, β] = [γ, γ] = 0`, `[β_k(m), γ_j(n)] = τ·δ_{kj}δ_{m+n+1,0}` on both models.
pub fn heisenberg(cfg: &SuiteConfig) -> Vec<CheckEntry> {
    symplectic_models(cfg.g)
        .iter()
        .map(|m| {
            check_heisenberg_relations(
                m,
                cfg.window,
                &m.probes(cfg.depth, cfg.degree),
                cfg.precision,
            )
        })
        .collect()
}

fn generator_fields(m: &SymplecticConfig) -> Result<Vec<Field>, Error> {
    let mut out = Vec::new();
    for i in 1..=m.g {
        out.push(beta_field(m, i)?);
        out.push(gamma_field(m, i)?);
    }
    Ok(out)
}

fn sp_fields(m: &SymplecticConfig) -> Result<Vec<Field>, Error> {
    let mut out = Vec::new();
    for i in 1..=m.g {
        for j in 1..=m.g {
            if i <= j {
                out.push(sp_quadratic_field(m, SpKind::BetaBeta, i, j)?);
                out.push(sp_quadratic_field(m, SpKind::GammaGamma, i, j)?);
            }
            out.push(sp_quadratic_field(m, SpKind::BetaGamma, i, j)?);
        }
    }
    Ok(out)
}

/// `count` seeded probes: single monomials and short combinations of them
/// with small integer coefficients.
pub fn random_probes(basis: &[Monomial], count: usize, seed: u64) -> Vec<FilteredVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let terms = if i % 2 == 0 { 1 } else { rng.gen_range(2..=3) };
            let mut v = FilteredVector::zero(Precision::Exact);
            for _ in 0..terms {
                let m = basis[rng.gen_range(0..basis.len())].clone();
                let c = rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
                v.add_term(m, Scalar::from_integer(c));
            }
            v
        })
        .filter(|v| !v.is_zero())
        .collect()
}

/// Seeded combinations of eigen-probes; the eigenspace is linear, so these
/// stay eigenvectors.
pub fn mixed_eigen_probes(probes: &[Probe], count: usize, seed: u64) -> Vec<FilteredVector> {
    let mut out: Vec<FilteredVector> = probes
        .iter()
        .take(count)
        .map(|p| p.vector.clone())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count && probes.len() > 1 {
        let a = &probes[rng.gen_range(0..probes.len())].vector;
        let b = &probes[rng.gen_range(0..probes.len())].vector;
        let mut v = a.clone();
        v.add_scaled(&Scalar::from_integer(rng.gen_range(1..=3)), b);
        if !v.is_zero() {
            out.push(v);
        }
    }
    out
}

fn axioms_on(
    fields: &[Field],
    exhaustive: &[FilteredVector],
    sampled: &[FilteredVector],
    cfg: &SuiteConfig,
) -> Vec<CheckEntry> {
    let opts = AxiomOptions {
        precisions: 1..=cfg.precision,
        margin: cfg.margin,
        require_sharp: false,
    };
    let mut out = Vec::new();
    for f in fields {
        out.push(check_field_axioms(f, exhaustive, &opts));
        let mut cont = check_continuity(f, cfg.window, sampled, cfg.precision);
        cont.set_param("seed", cfg.seed);
        out.push(cont);
    }
    out
}

/// Field certificates for `β_i`, `γ_i` and the quadratic `sp` fields on
/// both models: condition (2) on every monomial of the configured degree
/// and depth, condition (1) on `probes` seeded probes.
pub fn betagamma_axioms(cfg: &SuiteConfig) -> Vec<CheckEntry> {
    let mut out = Vec::new();
    for m in symplectic_models(cfg.g) {
        let fields = match generator_fields(&m).and_then(|mut f| {
            f.extend(sp_fields(&m)?);
            Ok(f)
        }) {
            Ok(f) => f,
            Err(e) => {
                out.push(errored("field-axioms", e));
                continue;
            }
        };
        let basis = monomial_basis(2 * cfg.g, cfg.depth, cfg.degree);
        let exhaustive: Vec<FilteredVector> =
            basis.iter().cloned().map(FilteredVector::basis).collect();
        let sampled = random_probes(&basis, cfg.probes, cfg.seed);
        out.extend(
            axioms_on(&fields, &exhaustive, &sampled, cfg)
                .into_iter()
                .map(|e| e.param("model", model_label(&m))),
        );
    }
    out
}

/// The largest input precision any mode in `modes` needs for output `U_n`, `n ≤ top`.
fn axiom_reach(fields: &[Field], top: u32, margin: u32, window: ModeWindow) -> u32 {
    let mut p = top;
    for f in fields {
        for n in 1..=top {
            let k = f.deep_image(n);
            for k in 1..=k + margin as i64 {
                p = p.max(f.input_precision(-k, n));
            }
        }
        for m in window.iter() {
            p = p.max(f.input_precision(m, top));
        }
    }
    p
}

fn sln_fields(s: &SlnConfig) -> Result<Vec<Field>, Error> {
    s.basis().iter().map(|a| current_field(s, a)).collect()
}

/// `sl_n` currents: the probes are `π_t`-eigenvectors and the level-1
/// brackets hold on them.
pub fn sln(cfg: &SuiteConfig) -> Vec<CheckEntry> {
    let s = match SlnConfig::new(cfg.n, cfg.c.clone()) {
        Ok(s) => s,
        Err(e) => return alloc::vec![errored("sln-bracket", e)],
    };
    let eigen = match eigen_probes(&s, cfg.generation, cfg.precision + 1) {
        Ok(p) => {
            check_eigen_relation(&s.space, &p, cfg.precision).param("generation", cfg.generation)
        }
        Err(e) => errored("pi-t-eigen", e),
    };
    alloc::vec![
        eigen,
        check_affine_bracket(&s, cfg.window, cfg.generation, cfg.precision)
    ]
}

/// Field certificates for the currents on eigen-probes.
pub fn sln_axioms(s: &SlnConfig, cfg: &SuiteConfig) -> Vec<CheckEntry> {
    let run = || -> Result<Vec<CheckEntry>, Error> {
        let fields = sln_fields(s)?;
        let reach = axiom_reach(&fields, cfg.precision, cfg.margin, cfg.window);
        let probes = eigen_probes(s, cfg.generation, reach)?;
        let vectors: Vec<FilteredVector> = probes.iter().map(|p| p.vector.clone()).collect();
        let sampled = mixed_eigen_probes(&probes, cfg.probes, cfg.seed);
        let mut out = axioms_on(&fields, &vectors, &sampled, cfg);
        for e in &mut out {
            e.set_param("probe_precision", reach);
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| alloc::vec![errored("field-axioms", e)])
}

/// `π_t φ_c = c^{−n/2} φ_c` and the π_t relations, exhaustively on
/// monomials of the configured degree and depth.
pub fn pi_t(cfg: &SuiteConfig) -> Vec<CheckEntry> {
    let space = match ModelSpace::phi(cfg.n, cfg.c.clone()) {
        Ok(s) => s,
        Err(e) => return alloc::vec![errored("pi-t-eigen", e)],
    };
    let phi = Probe {
        label: String::from("phi_c"),
        vector: FilteredVector::basis(Monomial::one()),
    };
    let mut eigen = check_eigen_relation(&space, &[phi], cfg.precision);
    eigen.set_param("c", &cfg.c);
    alloc::vec![eigen, check_pi_t_relations(&space, cfg.depth, cfg.degree)]
}

/// Lazy `a_(n) b` against the finite commutator formula for `n ∈ {0, 1, 2}`.
pub fn nproduct(cfg: &SuiteConfig) -> Vec<CheckEntry> {
    let mut out = Vec::new();
    for m in symplectic_models(cfg.g) {
        let fields = match generator_fields(&m).and_then(|mut f| {
            f.push(sp_quadratic_field(&m, SpKind::BetaGamma, 1, 1)?);
            Ok(f)
        }) {
            Ok(f) => f,
            Err(e) => {
                out.push(errored("nproduct-consistency", e));
                continue;
            }
        };
        let basis = monomial_basis(2 * cfg.g, cfg.depth, cfg.degree);
        let probes = random_probes(&basis, cfg.probes, cfg.seed);
        for a in &fields {
            for b in &fields {
                out.push(
                    check_nproduct_consistency(a, b, 0..=2, cfg.window, &probes, cfg.precision)
                        .param("model", model_label(&m)),
                );
            }
        }
    }
    let run = || -> Result<Vec<CheckEntry>, Error> {
        let s = SlnConfig::new(cfg.n, cfg.c.clone())?;
        let fields = sln_fields(&s)?;
        let mut reach = cfg.precision;
        for a in &fields {
            for b in &fields {
                reach = reach.max(nproduct_probe_precision(
                    a,
                    b,
                    0..=2,
                    cfg.window,
                    cfg.precision,
                ));
            }
        }
        let probes = mixed_eigen_probes(
            &eigen_probes(&s, cfg.generation, reach)?,
            cfg.probes,
            cfg.seed,
        );
        let mut out = Vec::new();
        for a in &fields {
            for b in &fields {
                out.push(
                    check_nproduct_consistency(a, b, 0..=2, cfg.window, &probes, cfg.precision)
                        .param("model", "phi_c"),
                );
            }
        }
        Ok(out)
    };
    out.extend(run().unwrap_or_else(|e| alloc::vec![errored("nproduct-consistency", e)]));
    out
}

fn model_label(m: &SymplecticConfig) -> &'static str {
    if m.space.twist_scalar().is_zero() {
        "plain"
    } else {
        "gaussian"
    }
}

/// The β–γ vertex algebra on the plain model (states of depth `≤ 2`,
/// length `≤ 2`, `l ∈ [−2, 2]`) and `V^1(sl_2)` on the eigenspace model
/// (states `a(−1)·1`, `l ∈ [−1, 1]`).
pub fn borcherds(cfg: &SuiteConfig) -> Vec<CheckEntry> {
    alloc::vec![
        borcherds_betagamma(
            cfg.g,
            cfg.slack,
            2,
            2,
            ModeWindow::new(-2, 2),
            cfg.window,
            2,
            2,
            cfg.precision
        ),
        borcherds_sl2(
            cfg.c.clone(),
            cfg.slack,
            ModeWindow::new(-1, 1),
            cfg.window,
            cfg.generation,
            cfg.precision
        ),
    ]
}

/// `count` seeded coefficient functionals on monomials of depth `≤ depth`,
/// each killed by `U_d` for its own depth `d ≥ 1`.
pub fn coefficient_functionals(
    species: u32,
    depth: u32,
    degree: u32,
    count: usize,
    seed: u64,
) -> Vec<DualFunctional<Monomial>> {
    let basis = monomial_basis(species, depth, degree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .filter_map(|_| {
            let b = basis[rng.gen_range(0..basis.len())].clone();
            let d = crate::filtered::Basis::max_depth(&b).max(1);
            let d = rng.gen_range(d..=depth.max(d));
            DualFunctional::coefficient(b, d).ok()
        })
        .collect()
}

fn dual_on(fields: &[Field], species: u32, cfg: &SuiteConfig, model: &str) -> Vec<CheckEntry> {
    let depth = cfg.depth.min(4);
    let functionals =
        coefficient_functionals(species, depth, cfg.degree.min(2), cfg.probes, cfg.seed);
    let reach = fields
        .iter()
        .map(|f| dual_reach(f, &functionals, cfg.margin))
        .max()
        .unwrap_or(depth);
    let basis = monomial_basis(species, reach, cfg.degree.min(2) + 2);
    fields
        .iter()
        .map(|f| {
            check_dual_field(f, &functionals, &basis, cfg.margin)
                .param("model", model)
                .param("seed", cfg.seed)
        })
        .collect()
}

/// The dual-field property for every generator field.
pub fn dual(cfg: &SuiteConfig) -> Vec<CheckEntry> {
    let mut out = Vec::new();
    for m in symplectic_models(cfg.g) {
        match generator_fields(&m).and_then(|mut f| {
            f.extend(sp_fields(&m)?);
            Ok(f)
        }) {
            Ok(f) => out.extend(dual_on(&f, 2 * cfg.g, cfg, model_label(&m))),
            Err(e) => out.push(errored("dual-field", e)),
        }
    }
    match SlnConfig::new(cfg.n, cfg.c.clone()).and_then(|s| sln_fields(&s)) {
        Ok(f) => out.extend(dual_on(&f, cfg.n, cfg, "phi_c")),
        Err(e) => out.push(errored("dual-field", e)),
    }
    out
}

/// `e(1) f(−1)·1 = k·1` and `h(1) h(−1)·1 = 2k·1` in `V^k(sl_2)`.
pub fn check_vacuum_values(level: &Rational) -> CheckEntry {
    let mut entry = CheckEntry::new("vacuum-values").param("level", level);
    let run = || -> Result<Option<String>, Error> {
        let alg = ModeAlgebra::sl(2);
        let spec = SubalgebraSpec::vacuum(&alg, Scalar::from_rational(level.clone()));
        let m = induce(alg, spec)?;
        let k = Scalar::from_rational(level.clone());
        for (x, y, scale) in [(0usize, 1usize, 1i64), (1, 0, 1), (2, 2, 2)] {
            let v = m.straighten(&[Letter::new(x, 1), Letter::new(y, -1)], 3)?;
            let expected = m
                .vacuum()
                .truncate(3)?
                .scaled(&(&k * &Scalar::from_integer(scale)));
            if v != expected {
                return Ok(Some(format!(
                    "{}(1){}(-1)|0> = {v}, expected {expected}",
                    m.algebra().name(x),
                    m.algebra().name(y)
                )));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(Some(w)) => entry.fail(w),
        Ok(None) => {}
        Err(e) => entry.error(format!("{e}")),
    }
    entry
}

/// Straightening confluence on seeded random words, the `V^k(sl_2)`
/// vacuum values, and the Gaussian-induced Heisenberg module against its
/// half-Gaussian realization.
pub fn induced(cfg: &SuiteConfig) -> Vec<CheckEntry> {
    let mut out = Vec::new();
    let level = Scalar::from_rational(cfg.level.clone());
    let algebras = [ModeAlgebra::sl(cfg.n), ModeAlgebra::heisenberg(cfg.g)];
    for alg in algebras {
        let spec = match alg.kind() {
            crate::induced::AlgebraKind::Affine(_) => {
                Ok(SubalgebraSpec::vacuum(&alg, level.clone()))
            }
            crate::induced::AlgebraKind::Heisenberg(_) => {
                SubalgebraSpec::gaussian(&alg, Scalar::one())
            }
        };
        match spec.and_then(|s| induce(alg, s)) {
            Ok(m) => {
                let words = m.random_words(cfg.words, cfg.max_len, cfg.depth.min(4), cfg.seed);
                out.push(check_confluence(&m, &words, cfg.precision.min(4), cfg.seed));
            }
            Err(e) => out.push(errored("straightening-confluence", e)),
        }
    }
    out.push(check_vacuum_values(&cfg.level));
    out.extend(compare_induced_heisenberg(
        cfg.g,
        cfg.precision.min(4),
        cfg.window,
        cfg.max_len.min(3),
        cfg.precision.min(4),
    ));
    out
}

/// `[X_(m), Y_(k)]` of normalized quadratic modes close with one central level.
pub fn sp(cfg: &SuiteConfig) -> Vec<CheckEntry> {
    let m = SymplecticConfig::plain(cfg.g);
    alloc::vec![check_sp_bracket_closure(
        &m,
        cfg.window,
        &m.probes(cfg.depth, cfg.degree),
        cfg.precision
    )]
}
