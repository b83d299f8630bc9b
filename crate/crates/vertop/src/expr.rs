//! The field-expression language.
//!
//! ```text
//! expr := "id" | "d(" expr ")" | "nprod(" expr "," expr "," int ")"
//!       | "beta[" int "]" | "gamma[" int "]" | "sp[" kind "," int "," int "]"
//!       | "current[" int "," int "]" | "cartan[" int "," int "]"
//! kind := "bb" | "gg" | "bg"
//! ```

use std::fmt;

use thiserror::Error;
use vertop_core::affine::{current_field, SlnConfig, SlnElement};
use vertop_core::betagamma::{
    beta_field, gamma_field, sp_quadratic_field, SpKind, SymplecticConfig,
};
use vertop_core::fields::{derivative, identity, nproduct};
use vertop_core::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldExpr {
    Id,
    Beta(u32),
    Gamma(u32),
    Sp(SpKind, u32, u32),
    Current(u32, u32),
    Cartan(u32, u32),
    Derivative(Box<FieldExpr>),
    Nprod(Box<FieldExpr>, Box<FieldExpr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown atom `{name}` at byte {offset}")]
    UnknownAtom { offset: usize, name: String },
    #[error("index error at byte {offset}: {message}")]
    Index { offset: usize, message: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownAtom { offset, .. }
            | ParseError::Index { offset, .. } => *offset,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn found(&self) -> String {
        match self.src[self.pos..].chars().next() {
            None => "end of input".into(),
            Some(c) => format!("`{c}`"),
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            expected: expected.iter().map(|s| format!("`{s}`")).collect(),
            found: self.found(),
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            Ok(())
        } else {
            Err(self.error(&[tok]))
        }
    }

    fn ident(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(self.src.len() - start);
        self.pos += len;
        (start, &self.src[start..start + len])
    }

    fn int(&mut self) -> Result<(usize, i64), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let sign = usize::from(rest.starts_with('-') || rest.starts_with('+'));
        let digits = rest[sign..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len() - sign);
        if digits == 0 {
            self.pos = start + sign;
            return Err(self.error(&["integer"]));
        }
        let text = &rest[..sign + digits];
        let value = text.parse::<i64>().map_err(|_| ParseError::Index {
            offset: start,
            message: format!("{text} is out of range"),
        })?;
        self.pos = start + sign + digits;
        Ok((start, value))
    }

    fn index(&mut self) -> Result<u32, ParseError> {
        let (offset, v) = self.int()?;
        if v < 1 || v > u32::MAX as i64 {
            return Err(ParseError::Index {
                offset,
                message: format!("index {v} must be at least 1"),
            });
        }
        Ok(v as u32)
    }

    fn expr(&mut self) -> Result<FieldExpr, ParseError> {
        let (start, name) = self.ident();
        if name.is_empty() {
            return Err(self.error(&[
                "id", "d", "nprod", "beta", "gamma", "sp", "current", "cartan",
            ]));
        }
        Ok(match name {
            "id" => FieldExpr::Id,
            "d" => {
                self.expect("(")?;
                let inner = self.expr()?;
                self.expect(")")?;
                FieldExpr::Derivative(Box::new(inner))
            }
            "nprod" => {
                self.expect("(")?;
                let a = self.expr()?;
                self.expect(",")?;
                let b = self.expr()?;
                self.expect(",")?;
                let (_, n) = self.int()?;
                self.expect(")")?;
                FieldExpr::Nprod(Box::new(a), Box::new(b), n)
            }
            "beta" | "gamma" => {
                self.expect("[")?;
                let i = self.index()?;
                self.expect("]")?;
                if name == "beta" {
                    FieldExpr::Beta(i)
                } else {
                    FieldExpr::Gamma(i)
                }
            }
            "sp" => {
                self.expect("[")?;
                let (koff, k) = self.ident();
                let kind = SpKind::parse(k).ok_or_else(|| ParseError::Syntax {
                    offset: koff,
                    expected: vec!["`bb`".into(), "`gg`".into(), "`bg`".into()],
                    found: if k.is_empty() {
                        self.found()
                    } else {
                        format!("`{k}`")
                    },
                })?;
                self.expect(",")?;
                let i = self.index()?;
                self.expect(",")?;
                let j = self.index()?;
                self.expect("]")?;
                FieldExpr::Sp(kind, i, j)
            }
            "current" | "cartan" => {
                self.expect("[")?;
                let offset = self.pos;
                let u = self.index()?;
                self.expect(",")?;
                let v = self.index()?;
                self.expect("]")?;
                if u == v {
                    return Err(ParseError::Index {
                        offset,
                        message: format!("{name}[{u},{v}] needs distinct indices"),
                    });
                }
                if name == "current" {
                    FieldExpr::Current(u, v)
                } else {
                    FieldExpr::Cartan(u, v)
                }
            }
            other => {
                return Err(ParseError::UnknownAtom {
                    offset: start,
                    name: other.to_string(),
                })
            }
        })
    }
}

pub fn parse_expr(src: &str) -> Result<FieldExpr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.error(&["end of input"]));
    }
    Ok(e)
}

impl fmt::Display for FieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldExpr::Id => f.write_str("id"),
            FieldExpr::Beta(i) => write!(f, "beta[{i}]"),
            FieldExpr::Gamma(i) => write!(f, "gamma[{i}]"),
            FieldExpr::Sp(k, i, j) => write!(f, "sp[{},{i},{j}]", k.as_str()),
            FieldExpr::Current(u, v) => write!(f, "current[{u},{v}]"),
            FieldExpr::Cartan(u, v) => write!(f, "cartan[{u},{v}]"),
            FieldExpr::Derivative(a) => write!(f, "d({a})"),
            FieldExpr::Nprod(a, b, n) => write!(f, "nprod({a},{b},{n})"),
        }
    }
}

/// Which model an expression lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Only `id`.
    Any,
    Symplectic,
    Affine,
}

impl FieldExpr {
    pub fn family(&self) -> Result<Family, EvalError> {
        let own = match self {
            FieldExpr::Id => Family::Any,
            FieldExpr::Beta(_) | FieldExpr::Gamma(_) | FieldExpr::Sp(..) => Family::Symplectic,
            FieldExpr::Current(..) | FieldExpr::Cartan(..) => Family::Affine,
            FieldExpr::Derivative(a) => return a.family(),
            FieldExpr::Nprod(a, b, _) => {
                return match (a.family()?, b.family()?) {
                    (Family::Any, x) | (x, Family::Any) => Ok(x),
                    (x, y) if x == y => Ok(x),
                    _ => Err(EvalError::MixedModels(self.to_string())),
                }
            }
        };
        Ok(own)
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("`{0}` mixes free-field and affine atoms")]
    MixedModels(String),
    #[error("`{expr}`: {source}")]
    Engine {
        expr: String,
        source: vertop_core::Error,
    },
}

/// The models an expression can be evaluated on.
pub enum Model<'a> {
    Symplectic(&'a SymplecticConfig),
    Affine(&'a SlnConfig),
}

pub fn eval(e: &FieldExpr, model: &Model<'_>) -> Result<Field, EvalError> {
    let wrap = |r: Result<Field, vertop_core::Error>| {
        r.map_err(|source| EvalError::Engine {
            expr: e.to_string(),
            source,
        })
    };
    let mixed = || EvalError::MixedModels(e.to_string());
    match (e, model) {
        (FieldExpr::Id, _) => Ok(identity()),
        (FieldExpr::Derivative(a), _) => Ok(derivative(&eval(a, model)?)),
        (FieldExpr::Nprod(a, b, n), _) => Ok(nproduct(&eval(a, model)?, &eval(b, model)?, *n)),
        (FieldExpr::Beta(i), Model::Symplectic(s)) => wrap(beta_field(s, *i)),
        (FieldExpr::Gamma(i), Model::Symplectic(s)) => wrap(gamma_field(s, *i)),
        (FieldExpr::Sp(k, i, j), Model::Symplectic(s)) => wrap(sp_quadratic_field(s, *k, *i, *j)),
        (FieldExpr::Current(u, v), Model::Affine(s)) => {
            wrap(current_field(s, &SlnElement::e(*u, *v)))
        }
        (FieldExpr::Cartan(u, v), Model::Affine(s)) => {
            wrap(current_field(s, &SlnElement::h(*u, *v)))
        }
        _ => Err(mixed()),
    }
}
