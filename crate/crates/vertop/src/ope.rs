//! Identifying an expression as a combination of known fields.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use vertop_core::affine::{eigen_probes, SlnConfig};
use vertop_core::betagamma::{SpKind, SymplecticConfig};
use vertop_core::linalg::solve;
use vertop_core::suites::mixed_eigen_probes;
use vertop_core::{Field, FilteredVector, ModeWindow, Monomial, Scalar};

use crate::expr::{eval, EvalError, Family, FieldExpr, Model};

/// Settings for one `ope` evaluation.
#[derive(Clone, Debug)]
pub struct OpeOptions {
    pub precision: u32,
    pub window: ModeWindow,
    pub depth: u32,
    pub degree: u32,
    pub generation: u32,
    pub probes: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// `Σ c_j · candidate_j`, already rendered.
    Combination(String),
    /// No candidate combination matches; one line per mode and probe.
    Table(String),
}

impl Outcome {
    pub fn text(&self) -> &str {
        match self {
            Outcome::Combination(s) | Outcome::Table(s) => s,
        }
    }
}

pub fn candidates(model: &Model<'_>) -> Vec<FieldExpr> {
    let mut out = vec![FieldExpr::Id];
    let mut atoms = Vec::new();
    match model {
        Model::Symplectic(s) => {
            for i in 1..=s.g {
                atoms.push(FieldExpr::Beta(i));
                atoms.push(FieldExpr::Gamma(i));
            }
            out.extend(atoms.iter().cloned());
            out.extend(
                atoms
                    .iter()
                    .map(|a| FieldExpr::Derivative(Box::new(a.clone()))),
            );
            for i in 1..=s.g {
                for j in 1..=s.g {
                    if i <= j {
                        out.push(FieldExpr::Sp(SpKind::BetaBeta, i, j));
                        out.push(FieldExpr::Sp(SpKind::GammaGamma, i, j));
                    }
                    out.push(FieldExpr::Sp(SpKind::BetaGamma, i, j));
                }
            }
        }
        Model::Affine(cfg) => {
            for u in 1..=cfg.n {
                for v in 1..=cfg.n {
                    if u != v {
                        atoms.push(FieldExpr::Current(u, v));
                    }
                }
            }
            for u in 1..cfg.n {
                atoms.push(FieldExpr::Cartan(u, u + 1));
            }
            out.extend(atoms.iter().cloned());
            out.extend(
                atoms
                    .iter()
                    .map(|a| FieldExpr::Derivative(Box::new(a.clone()))),
            );
        }
    }
    out
}

type Key = (i64, usize, Monomial);

fn column(
    f: &Field,
    window: ModeWindow,
    probes: &[FilteredVector],
    n: u32,
) -> Result<BTreeMap<Key, Scalar>, vertop_core::Error> {
    let mut col = BTreeMap::new();
    for m in window.iter() {
        for (i, v) in probes.iter().enumerate() {
            for (mono, c) in f.apply_mode(m, v, n)?.iter() {
                col.insert((m, i, mono.clone()), c.clone());
            }
        }
    }
    Ok(col)
}

fn render_term(c: &Scalar, name: &str) -> String {
    if c.is_one() {
        return name.to_string();
    }
    let s = c.to_string();
    if s.contains(' ') {
        format!("({s}) * {name}")
    } else {
        format!("{s} * {name}")
    }
}

fn engine(expr: &FieldExpr) -> impl Fn(vertop_core::Error) -> EvalError + '_ {
    move |source| EvalError::Engine {
        expr: expr.to_string(),
        source,
    }
}

/// Evaluates `expr` on probes over the window and expresses it through the
/// candidate fields if possible.
pub fn identify(
    expr: &FieldExpr,
    g: u32,
    n: u32,
    c: &vertop_core::Rational,
    gaussian: bool,
    opts: &OpeOptions,
) -> Result<Outcome, EvalError> {
    let sym;
    let aff;
    let model = match expr.family()? {
        Family::Any | Family::Symplectic => {
            sym = if gaussian {
                SymplecticConfig::gaussian(g)
            } else {
                SymplecticConfig::plain(g)
            };
            Model::Symplectic(&sym)
        }
        Family::Affine => {
            aff = SlnConfig::new(n, c.clone()).map_err(engine(expr))?;
            Model::Affine(&aff)
        }
    };
    let target = eval(expr, &model)?;
    let names = candidates(&model);
    let fields: Vec<Field> = names
        .iter()
        .map(|e| eval(e, &model))
        .collect::<Result<_, _>>()?;
    let probes = match &model {
        Model::Symplectic(s) => s.probes(opts.depth, opts.degree),
        Model::Affine(cfg) => {
            let reach = fields
                .iter()
                .chain(std::iter::once(&target))
                .flat_map(|f| {
                    opts.window
                        .iter()
                        .map(move |m| f.input_precision(m, opts.precision))
                })
                .max()
                .unwrap_or(opts.precision);
            let base = eigen_probes(cfg, opts.generation, reach).map_err(engine(expr))?;
            mixed_eigen_probes(&base, opts.probes, opts.seed)
        }
    };
    let lhs = column(&target, opts.window, &probes, opts.precision).map_err(engine(expr))?;
    let cols: Vec<_> = fields
        .iter()
        .map(|f| column(f, opts.window, &probes, opts.precision))
        .collect::<Result<_, _>>()
        .map_err(engine(expr))?;
    if let Some(coeffs) = solve(&cols, &lhs) {
        let terms: Vec<String> = coeffs
            .iter()
            .zip(&names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, e)| render_term(c, &e.to_string()))
            .collect();
        let text = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        return Ok(Outcome::Combination(text));
    }
    let mut table = String::new();
    for m in opts.window.iter() {
        for (i, v) in probes.iter().enumerate() {
            let img = target
                .apply_mode(m, v, opts.precision)
                .map_err(engine(expr))?;
            let _ = writeln!(table, "mode {m} probe #{i}: {img}");
        }
    }
    Ok(Outcome::Table(table))
}
