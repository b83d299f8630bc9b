//! Affine and Heisenberg mode algebras with a central element `K`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::affine::{sln_basis, sln_coordinates};
use crate::report::{CheckEntry, ModeWindow};
use crate::scalar::Scalar;

/// A mode `X(m)` of a generator `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u16,
    pub mode: i64,
}

impl Letter {
    pub fn new(gen: usize, mode: i64) -> Self {
        Letter {
            gen: gen as u16,
            mode,
        }
    }

    /// `d` for `X(−d)`, else 0.
    pub fn depth(self) -> u32 {
        if self.mode < 0 {
            (-self.mode) as u32
        } else {
            0
        }
    }
}

/// Which loop algebra the modes belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraKind {
    /// `sl_n ⊗ C[t, t^{−1}] ⊕ CK`, `[a(m), b(k)] = [a,b](m+k) + m·δ_{m+k,0}·tr(ab)·K`.
    Affine(u32),
    /// Generators `b_j, c_j`, `[b_j(m), c_k(l)] = τ·δ_{jk}·δ_{m+l+1,0}·K`.
    Heisenberg(u32),
}

/// Name of generator `k`: `e, f, h` for `sl_2`, `E[u,v]` and `H[u]` for
/// `sl_n`, `b[j]` and `c[j]` for the Heisenberg algebra.
pub fn generator_name(kind: AlgebraKind, k: usize) -> String {
    match kind {
        AlgebraKind::Affine(2) => String::from(["e", "f", "h"][k]),
        AlgebraKind::Affine(n) => {
            let n = n as usize;
            let off = n * (n - 1);
            if k >= off {
                return format!("H[{}]", k - off + 1);
            }
            let u = k / (n - 1) + 1;
            let r = k % (n - 1) + 1;
            let v = if r >= u { r + 1 } else { r };
            format!("E[{u},{v}]")
        }
        AlgebraKind::Heisenberg(g) => {
            let g = g as usize;
            if k < g {
                format!("b[{}]", k + 1)
            } else {
                format!("c[{}]", k - g + 1)
            }
        }
    }
}

/// Result of a bracket: a combination of letters plus a multiple of `K`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bracket {
    pub letters: Vec<(Letter, Scalar)>,
    pub central: Scalar,
}

impl Bracket {
    fn push(&mut self, l: Letter, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.letters.iter_mut().find(|(x, _)| *x == l) {
            Some(slot) => {
                slot.1 = &slot.1 + &c;
                if slot.1.is_zero() {
                    self.letters.retain(|(x, _)| *x != l);
                }
            }
            None => self.letters.push((l, c)),
        }
    }

    fn add_scaled(&mut self, c: &Scalar, other: &Bracket) {
        for (l, x) in &other.letters {
            self.push(*l, c * x);
        }
        self.central = &self.central + &(c * &other.central);
    }

    fn normalize(mut self) -> Self {
        self.letters.sort_by_key(|a| a.0);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.letters.is_empty() && self.central.is_zero()
    }
}

/// A finite-dimensional Lie algebra looped with a central extension.
#[derive(Clone, Debug)]
pub struct ModeAlgebra {
    kind: AlgebraKind,
    names: Vec<String>,
    /// `[x, y] = Σ structure[x][y]`.
    structure: Vec<Vec<Vec<(usize, Scalar)>>>,
    /// Central coefficient table.
    form: Vec<Vec<Scalar>>,
}

impl ModeAlgebra {
    pub fn sl(n: u32) -> Self {
        let basis = sln_basis(n);
        let kind = AlgebraKind::Affine(n);
        let names: Vec<String> = (0..basis.len()).map(|k| generator_name(kind, k)).collect();
        let mut structure = Vec::new();
        let mut form = Vec::new();
        for a in &basis {
            let mut srow = Vec::new();
            let mut frow = Vec::new();
            for b in &basis {
                let coords = sln_coordinates(n, &a.bracket(b));
                srow.push(
                    coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (k, Scalar::from_rational(c)))
                        .collect(),
                );
                frow.push(Scalar::from_rational(a.trace_form(b)));
            }
            structure.push(srow);
            form.push(frow);
        }
        ModeAlgebra {
            kind: AlgebraKind::Affine(n),
            names,
            structure,
            form,
        }
    }

    pub fn heisenberg(g: u32) -> Self {
        let d = 2 * g as usize;
        let names: Vec<String> = (0..d)
            .map(|k| generator_name(AlgebraKind::Heisenberg(g), k))
            .collect();
        let structure = alloc::vec![alloc::vec![Vec::new(); d]; d];
        let mut form = alloc::vec![alloc::vec![Scalar::zero(); d]; d];
        let g = g as usize;
        for j in 0..g {
            form[j][j + g] = Scalar::tau();
            form[j + g][j] = -Scalar::tau();
        }
        ModeAlgebra {
            kind: AlgebraKind::Heisenberg(g as u32),
            names,
            structure,
            form,
        }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `[x, y]`.
    pub fn bracket(&self, x: Letter, y: Letter) -> Bracket {
        let (a, b) = (x.gen as usize, y.gen as usize);
        let mut out = Bracket::default();
        for (z, c) in &self.structure[a][b] {
            out.push(Letter::new(*z, x.mode + y.mode), c.clone());
        }
        let f = &self.form[a][b];
        if !f.is_zero() {
            out.central = match self.kind {
                AlgebraKind::Affine(_) if x.mode + y.mode == 0 => f * &Scalar::from_integer(x.mode),
                AlgebraKind::Heisenberg(_) if x.mode + y.mode + 1 == 0 => f.clone(),
                _ => Scalar::zero(),
            };
        }
        out.normalize()
    }

    /// `[x, Σ c·y + κK]`.
    fn bracket_with(&self, x: Letter, y: &Bracket) -> Bracket {
        let mut out = Bracket::default();
        for (l, c) in &y.letters {
            out.add_scaled(c, &self.bracket(x, *l));
        }
        out.normalize()
    }

    /// Twice the grading weight of a creation letter `X(−d)`: each mode
    /// `X(m)` shifts the weight by `−m` (affine) or `−m − ½` (Heisenberg).
    pub fn doubled_weight(&self, l: Letter) -> i64 {
        match self.kind {
            AlgebraKind::Affine(_) => -2 * l.mode,
            AlgebraKind::Heisenberg(_) => -2 * l.mode - 1,
        }
    }

    /// Depth that a mode-`m` letter can remove from a letter to its right.
    pub fn depth_lift(&self, mode: i64) -> u32 {
        if mode < 0 {
            0
        } else {
            match self.kind {
                AlgebraKind::Affine(_) => mode as u32,
                AlgebraKind::Heisenberg(_) => mode as u32 + 1,
            }
        }
    }

    pub fn render_letter(&self, l: Letter) -> String {
        format!("{}({})", self.names[l.gen as usize], l.mode)
    }

    /// Antisymmetry and the Jacobi identity on all letters with modes in
    /// the window.
    pub fn check_jacobi(&self, window: ModeWindow) -> CheckEntry {
        let mut entry = CheckEntry::new("mode-algebra")
            .param("algebra", self)
            .param("window", window);
        let letters: Vec<Letter> = (0..self.len())
            .flat_map(|g| window.iter().map(move |m| Letter::new(g, m)))
            .collect();
        for &x in &letters {
            for &y in &letters {
                let mut s = self.bracket(x, y);
                s.add_scaled(&Scalar::one(), &self.bracket(y, x));
                if !s.normalize().is_zero() {
                    entry.fail(format!(
                        "[{0},{1}] + [{1},{0}] ≠ 0",
                        self.render_letter(x),
                        self.render_letter(y)
                    ));
                    return entry;
                }
                for &z in &letters {
                    let mut j = self.bracket_with(x, &self.bracket(y, z));
                    j.add_scaled(&Scalar::one(), &self.bracket_with(y, &self.bracket(z, x)));
                    j.add_scaled(&Scalar::one(), &self.bracket_with(z, &self.bracket(x, y)));
                    if !j.normalize().is_zero() {
                        entry.fail(format!(
                            "Jacobi fails on {}, {}, {}",
                            self.render_letter(x),
                            self.render_letter(y),
                            self.render_letter(z)
                        ));
                        return entry;
                    }
                }
            }
        }
        entry
    }
}

impl fmt::Display for ModeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlgebraKind::Affine(n) => write!(f, "sl{n}"),
            AlgebraKind::Heisenberg(g) => write!(f, "heisenberg{g}"),
        }
    }
}
