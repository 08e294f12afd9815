//! The odd derivation `S` on the ghost ring determined by a bracket family
//! and an optional representation.
//!
//! `S η^j = -Σ_u C^j_u / mult(u)! η^u` over sorted tuples `u`, and on a
//! module vector `S f = Σ_u ρ(u) f / mult(u)! η^u`. Products are expanded
//! by the Leibniz rule, peeling off the last letter of a word.

use crate::ghost_ring::{add_scaled_terms, add_term, Coeff, GhostPolynomial, GhostRing, Monomial, Terms};
use crate::linf::{BracketFamily, RepresentationFamily};
use crate::rational::{factorial, sign_q, Matrix, Vector, Q};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::sync::Arc;

/// Which sign accompanies `a · S(b)` in `S(ab)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeibnizSide {
    /// `S(ab) = S(a) b - (-1)^{deg a} a S(b)` with `deg` of a product of `l`
    /// letters equal to their internal degrees plus `l - 1`.
    #[default]
    Left,
    /// `S(ab) = S(a) b + (-1)^{|a|} a S(b)` with additive internal degree `|a|`.
    Right,
}

impl LeibnizSide {
    /// Sign of `a · S(b)` for a word `a`.
    pub fn sign(self, ring: &GhostRing, a: &[usize]) -> i8 {
        let b = ring.basis();
        let total: i64 = match self {
            LeibnizSide::Left => a.iter().map(|&i| b.gdeg(i)).sum(),
            LeibnizSide::Right => a.iter().map(|&i| b.vdeg(i)).sum(),
        };
        if total % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// `S(w_1 ⋯ w_n)` from the images of single letters.
pub(crate) fn leibniz_word<T: Coeff>(
    ring: &GhostRing,
    side: LeibnizSide,
    word: &[usize],
    letter: &dyn Fn(usize) -> Terms<T>,
) -> Terms<T> {
    let Some((&last, head)) = word.split_last() else {
        return Terms::new();
    };
    if head.is_empty() {
        return letter(last);
    }
    let mut out = ring.times_mono(&leibniz_word(ring, side, head, letter), &Monomial::generator(last));
    if let Some((sign, mono)) = ring.monomial_of_word(head) {
        let s = sign * side.sign(ring, head);
        add_scaled_terms(&mut out, &ring.mono_times(&mono, &letter(last)), &sign_q(s));
    }
    out
}

/// Which input of a square check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareInput {
    Generator(usize),
    ModuleBasis(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SquareValue {
    Scalar(GhostPolynomial),
    Module(Terms<Vector>),
}

/// A nonzero value of `S²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareWitness {
    pub input: SquareInput,
    pub value: SquareValue,
}

#[derive(Debug, Clone)]
pub struct OddDerivation {
    ring: Arc<GhostRing>,
    brackets: BracketFamily,
    rep: Option<RepresentationFamily>,
    side: LeibnizSide,
    images: Vec<Terms<Q>>,
}

impl OddDerivation {
    pub fn new(
        brackets: &BracketFamily,
        rep: Option<&RepresentationFamily>,
        side: LeibnizSide,
    ) -> Result<Self> {
        if !brackets.is_skew() {
            return Err(Error::NotSkew);
        }
        if let Some(r) = rep {
            if !r.is_skew() {
                return Err(Error::NotSkew);
            }
            if r.ring() != brackets.ring() {
                return Err(Error::BasisMismatch);
            }
        }
        let ring = brackets.ring().clone();
        let mut d = OddDerivation {
            ring,
            brackets: brackets.clone(),
            rep: rep.cloned(),
            side,
            images: Vec::new(),
        };
        d.images = (0..d.ring.dim()).map(|j| d.sorted_image(j)).collect();
        Ok(d)
    }

    pub fn from_brackets(brackets: &BracketFamily) -> Result<Self> {
        Self::new(brackets, None, LeibnizSide::Left)
    }

    pub fn ring(&self) -> &Arc<GhostRing> {
        &self.ring
    }

    pub fn brackets(&self) -> &BracketFamily {
        &self.brackets
    }

    pub fn representation(&self) -> Option<&RepresentationFamily> {
        self.rep.as_ref()
    }

    pub fn side(&self) -> LeibnizSide {
        self.side
    }

    pub fn module_dim(&self) -> usize {
        self.rep.as_ref().map_or(0, |r| r.module_dim())
    }

    fn sorted_image(&self, j: usize) -> Terms<Q> {
        let mut out = Terms::new();
        for (u, v) in self.brackets.entries() {
            let mono = Monomial::from_sorted(u);
            let c = -&v.0[j] / mono.multiplicity_factorial();
            add_term(&mut out, mono, c);
        }
        out
    }

    /// `S η^j`, summed over sorted representatives.
    pub fn generator_image(&self, j: usize) -> Result<GhostPolynomial> {
        self.ring.basis().check(j)?;
        Ok(GhostPolynomial::from_terms(&self.ring, self.images[j].clone()))
    }

    /// `S η^j = -Σ_k 1/k! Σ_t C^j_t η^t` summed over every ordered tuple `t`.
    pub fn generator_image_full(&self, j: usize) -> Result<GhostPolynomial> {
        self.ring.basis().check(j)?;
        let mut out = Terms::new();
        for k in self.brackets.arities() {
            let w = Q::one() / factorial(k);
            for t in self.ring.all_tuples(k)? {
                let c = self.brackets.coefficient(j, &t);
                if c.is_zero() {
                    continue;
                }
                if let Some((sign, mono)) = self.ring.monomial_of_word(&t) {
                    add_term(&mut out, mono, -c * &w * sign_q(sign));
                }
            }
        }
        Ok(GhostPolynomial::from_terms(&self.ring, out))
    }

    /// `S(η^{w_1} ⋯ η^{w_n})` by the Leibniz recursion.
    pub fn apply_word(&self, word: &[usize]) -> Result<GhostPolynomial> {
        word.iter().try_for_each(|&i| self.ring.basis().check(i))?;
        let letter = |i: usize| self.images[i].clone();
        Ok(GhostPolynomial::from_terms(&self.ring, leibniz_word(&self.ring, self.side, word, &letter)))
    }

    pub fn apply(&self, p: &GhostPolynomial) -> Result<GhostPolynomial> {
        if p.ring() != &self.ring {
            return Err(Error::BasisMismatch);
        }
        let letter = |i: usize| self.images[i].clone();
        let mut out = Terms::new();
        for (m, c) in p.terms() {
            let img = leibniz_word(&self.ring, self.side, &m.word(), &letter);
            add_scaled_terms(&mut out, &img, c);
        }
        Ok(GhostPolynomial::from_terms(&self.ring, out))
    }

    /// `S f` for a module vector `f`.
    pub fn apply_vector(&self, f: &Vector) -> Result<Terms<Vector>> {
        let rep = self.rep.as_ref().ok_or(Error::MissingRepresentation)?;
        if f.dim() != rep.module_dim() {
            return Err(Error::Dimension(format!(
                "module vector has {} coordinates, module has dimension {}",
                f.dim(),
                rep.module_dim()
            )));
        }
        let mut out = Terms::new();
        for (u, m) in rep.maps() {
            let mono = Monomial::from_sorted(u);
            let w = Q::one() / mono.multiplicity_factorial();
            add_term(&mut out, mono, m.apply(f).scaled(&w));
        }
        Ok(out)
    }

    /// `S` on module-valued ghost polynomials `Σ f_u η^u`.
    pub fn apply_module(&self, x: &Terms<Vector>) -> Result<Terms<Vector>> {
        let letter = |i: usize| self.images[i].clone();
        let mut out = Terms::new();
        for (m, f) in x {
            let sf = self.apply_vector(f)?;
            for (k, v) in self.ring.times_mono(&sf, m) {
                add_term(&mut out, k, v);
            }
            let sm = leibniz_word(&self.ring, self.side, &m.word(), &letter);
            for (k, c) in sm {
                add_term(&mut out, k, f.scaled(&c));
            }
        }
        Ok(out)
    }

    pub fn square_on_generator(&self, j: usize) -> Result<GhostPolynomial> {
        self.apply(&self.generator_image(j)?)
    }

    pub fn square_on_module_basis(&self, f: usize) -> Result<Terms<Vector>> {
        let once = self.apply_vector(&Vector::unit(self.module_dim(), f))?;
        self.apply_module(&once)
    }

    /// All nonzero values of `S²` on generators and module basis vectors.
    pub fn square_residual(&self) -> Result<Vec<SquareWitness>> {
        let mut out = Vec::new();
        for j in 0..self.ring.dim() {
            let v = self.square_on_generator(j)?;
            if !v.is_zero() {
                out.push(SquareWitness { input: SquareInput::Generator(j), value: SquareValue::Scalar(v) });
            }
        }
        if self.rep.is_some() {
            for f in 0..self.module_dim() {
                let v = self.square_on_module_basis(f)?;
                if !v.is_empty() {
                    out.push(SquareWitness { input: SquareInput::ModuleBasis(f), value: SquareValue::Module(v) });
                }
            }
        }
        Ok(out)
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.square_residual()?.is_empty())
    }

    /// Words of length `≤ max_len` on which the Leibniz expansion disagrees
    /// with the exchange law `S(η^w) = κ(w) S(η^{sort w})`.
    pub fn inconsistent_words(&self, max_len: usize) -> Result<Vec<Vec<usize>>> {
        let mut bad = Vec::new();
        for n in 2..=max_len {
            for w in self.ring.all_tuples(n)? {
                let direct = self.apply_word(&w)?;
                let expected = match self.ring.monomial_of_word(&w) {
                    None => GhostPolynomial::zero(&self.ring),
                    Some((s, m)) => self.apply(&GhostPolynomial::monomial(&self.ring, m, sign_q(s)))?,
                };
                if direct != expected {
                    bad.push(w);
                }
            }
        }
        Ok(bad)
    }

    /// The part of `S` raising ghost degree by `k - 1`: brackets of arity `k`
    /// together with representation maps of arity `k - 1`.
    pub fn component(&self, k: usize) -> Result<Self> {
        let rep = self.rep.as_ref().map(|r| if k >= 2 { r.component(k - 1) } else { r.component(usize::MAX) });
        Self::new(&self.brackets.component(k), rep.as_ref(), self.side)
    }
}

/// Finite-dimensional commutative unital algebra over `Q` given by its multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutativeAlgebra {
    dim: usize,
    table: Vec<Vec<Vector>>,
    unit: Vector,
}

impl CommutativeAlgebra {
    /// `table[a][b] = e_a e_b`.
    pub fn new(table: Vec<Vec<Vector>>, unit: Vector) -> Result<Self> {
        let dim = table.len();
        if unit.dim() != dim || table.iter().any(|r| r.len() != dim || r.iter().any(|v| v.dim() != dim)) {
            return Err(Error::Dimension("multiplication table must be dim × dim × dim".into()));
        }
        let alg = CommutativeAlgebra { dim, table, unit };
        for a in 0..dim {
            let ea = Vector::unit(dim, a);
            if alg.mul(&alg.unit, &ea) != ea {
                return Err(Error::Invalid(format!("unit does not act as identity on e{a}")));
            }
            for b in 0..dim {
                if alg.table[a][b] != alg.table[b][a] {
                    return Err(Error::Invalid(format!("e{a} e{b} ≠ e{b} e{a}")));
                }
                for c in 0..dim {
                    let left = alg.mul(&alg.table[a][b], &Vector::unit(dim, c));
                    let right = alg.mul(&ea, &alg.table[b][c]);
                    if left != right {
                        return Err(Error::NotAssociative(format!("(e{a} e{b}) e{c} ≠ e{a} (e{b} e{c})")));
                    }
                }
            }
        }
        Ok(alg)
    }

    /// `Q[x]/(x^n)` in the monomial basis `1, x, …, x^{n-1}`.
    pub fn truncated_polynomials(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| if a + b < n { Vector::unit(n, a + b) } else { Vector::zeros(n) }).collect())
            .collect();
        CommutativeAlgebra { dim: n, table, unit: Vector::unit(n, 0) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim);
        for (a, xa) in x.0.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.0.iter().enumerate() {
                if !yb.is_zero() {
                    out.add_scaled(&self.table[a][b], &(xa * yb));
                }
            }
        }
        out
    }

    /// Whether `m` is a derivation of the algebra.
    pub fn is_derivation(&self, m: &Matrix) -> bool {
        (0..self.dim).all(|a| {
            (0..self.dim).all(|b| {
                let ea = Vector::unit(self.dim, a);
                let eb = Vector::unit(self.dim, b);
                let lhs = m.apply(&self.table[a][b]);
                let mut rhs = self.mul(&m.apply(&ea), &eb);
                rhs.add_scaled(&self.mul(&ea, &m.apply(&eb)), &Q::one());
                lhs == rhs
            })
        })
    }
}

/// `S` on `A[η]` where the structure functions take values in a commutative
/// algebra `A` and the anchor `ρ` acts on `A`.
#[derive(Debug, Clone)]
pub struct AlgebroidDerivation {
    ring: Arc<GhostRing>,
    algebra: CommutativeAlgebra,
    anchor: RepresentationFamily,
    images: Vec<Terms<Vector>>,
    side: LeibnizSide,
}

impl AlgebroidDerivation {
    /// `structure` lists `(j, sorted tuple u, C^j_u ∈ A)`.
    pub fn new(
        ring: &Arc<GhostRing>,
        algebra: CommutativeAlgebra,
        structure: impl IntoIterator<Item = (usize, Vec<usize>, Vector)>,
        anchor: RepresentationFamily,
    ) -> Result<Self> {
        if anchor.module_dim() != algebra.dim() {
            return Err(Error::Dimension("anchor must act on the coefficient algebra".into()));
        }
        if anchor.ring() != ring || !anchor.is_skew() {
            return Err(Error::BasisMismatch);
        }
        let mut images: Vec<Terms<Vector>> = vec![Terms::new(); ring.dim()];
        let basis = ring.basis();
        for (j, u, c) in structure {
            basis.check(j)?;
            u.iter().try_for_each(|&i| basis.check(i))?;
            if c.dim() != algebra.dim() {
                return Err(Error::Dimension("structure function outside the coefficient algebra".into()));
            }
            let expected: i64 = u.iter().map(|&i| basis.vdeg(i)).sum::<i64>() + u.len() as i64 - 2;
            if !c.is_zero() && basis.vdeg(j) != expected {
                return Err(Error::NonHomogeneous { tuple: u, output: j, got: basis.vdeg(j), expected });
            }
            let Some((sign, mono)) = ring.monomial_of_word(&u) else {
                if c.is_zero() {
                    continue;
                }
                return Err(Error::SkewViolation { tuple: u, detail: "vanishing ghost word".into() });
            };
            let w = -sign_q(sign) / mono.multiplicity_factorial();
            add_term(&mut images[j], mono, c.scaled(&w));
        }
        Ok(AlgebroidDerivation { ring: ring.clone(), algebra, anchor, images, side: LeibnizSide::Left })
    }

    pub fn algebra(&self) -> &CommutativeAlgebra {
        &self.algebra
    }

    /// `S a = Σ_u ρ(u) a / mult(u)! η^u`.
    pub fn apply_coefficient(&self, a: &Vector) -> Terms<Vector> {
        let mut out = Terms::new();
        for (u, m) in self.anchor.maps() {
            let mono = Monomial::from_sorted(u);
            let w = Q::one() / mono.multiplicity_factorial();
            add_term(&mut out, mono, m.apply(a).scaled(&w));
        }
        out
    }

    pub fn apply(&self, x: &Terms<Vector>) -> Terms<Vector> {
        let letter = |i: usize| self.images[i].clone();
        let mut out = Terms::new();
        for (m, a) in x {
            for (k, v) in self.ring.times_mono(&self.apply_coefficient(a), m) {
                add_term(&mut out, k, v);
            }
            let sm = leibniz_word(&self.ring, self.side, &m.word(), &letter);
            for (k, c) in sm {
                add_term(&mut out, k, self.algebra.mul(a, &c));
            }
        }
        out
    }

    pub fn generator_image(&self, j: usize) -> Result<Terms<Vector>> {
        self.ring.basis().check(j)?;
        Ok(self.images[j].clone())
    }

    /// Nonzero values of `S²` on generators and on the basis of `A`.
    pub fn square_residual(&self) -> Vec<(SquareInput, Terms<Vector>)> {
        let mut out = Vec::new();
        for j in 0..self.ring.dim() {
            let v = self.apply(&self.images[j]);
            if !v.is_empty() {
                out.push((SquareInput::Generator(j), v));
            }
        }
        for a in 0..self.algebra.dim() {
            let once = self.apply_coefficient(&Vector::unit(self.algebra.dim(), a));
            let v = self.apply(&once);
            if !v.is_empty() {
                out.push((SquareInput::ModuleBasis(a), v));
            }
        }
        out
    }

    pub fn is_nilpotent(&self) -> bool {
        self.square_residual().is_empty()
    }
}
