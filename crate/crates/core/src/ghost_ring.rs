//! The ghost ring `F[η^i]` with its graded commutation law, normal-form
//! monomials and exact arithmetic.

use crate::graded::{Convention, GradedBasis};
use crate::rational::{format_rational, Vector, Q};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Enumeration bounds. Arithmetic itself is never capped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest cochain arity / monomial length produced by enumeration.
    pub max_arity: usize,
    /// Largest exponent of a commuting generator produced by enumeration.
    pub exponent_cap: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_arity: 6, exponent_cap: 6 }
    }
}

/// Normal-form ghost monomial: `(generator, exponent)` pairs with strictly
/// increasing generator index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Monomial(vec![(i, 1)])
    }

    /// Builds a monomial from a non-decreasing index tuple.
    pub fn from_sorted(tuple: &[usize]) -> Self {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for &i in tuple {
            match out.last_mut() {
                Some((j, e)) if *j == i => *e += 1,
                _ => out.push((i, 1)),
            }
        }
        debug_assert!(out.windows(2).all(|w| w[0].0 < w[1].0));
        Monomial(out)
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of generator factors.
    pub fn len(&self) -> usize {
        self.0.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The monomial written out as a sorted word.
    pub fn word(&self) -> Vec<usize> {
        self.0
            .iter()
            .flat_map(|&(i, e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }

    /// `Π e_i!`, the number of orderings of the word that coincide.
    pub fn multiplicity_factorial(&self) -> Q {
        self.0
            .iter()
            .fold(Q::one(), |acc, &(_, e)| acc * crate::rational::factorial(e as usize))
    }
}

/// Coefficient types that can sit in front of ghost monomials.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn vanishes(&self) -> bool;
    fn accumulate(&mut self, other: &Self);
    fn times(&self, c: &Q) -> Self;
}

impl Coeff for Q {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
    fn times(&self, c: &Q) -> Self {
        self * c
    }
}

impl Coeff for Vector {
    fn vanishes(&self) -> bool {
        Vector::is_zero(self)
    }
    fn accumulate(&mut self, other: &Self) {
        self.add_scaled(other, &Q::one());
    }
    fn times(&self, c: &Q) -> Self {
        self.scaled(c)
    }
}

/// Sparse linear combination of normal-form monomials; zero coefficients are never stored.
pub type Terms<T> = BTreeMap<Monomial, T>;

pub fn add_term<T: Coeff>(terms: &mut Terms<T>, m: Monomial, c: T) {
    if c.vanishes() {
        return;
    }
    match terms.get_mut(&m) {
        Some(existing) => {
            existing.accumulate(&c);
            if existing.vanishes() {
                terms.remove(&m);
            }
        }
        None => {
            terms.insert(m, c);
        }
    }
}

pub fn add_scaled_terms<T: Coeff>(acc: &mut Terms<T>, other: &Terms<T>, c: &Q) {
    if c.is_zero() {
        return;
    }
    for (m, v) in other {
        add_term(acc, m.clone(), v.times(c));
    }
}

/// A graded basis together with the sign rule of its ghost ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhostRing {
    basis: GradedBasis,
    convention: Convention,
    limits: Limits,
}

impl GhostRing {
    pub fn new(basis: GradedBasis, convention: Convention) -> Arc<Self> {
        Arc::new(GhostRing { basis, convention, limits: Limits::default() })
    }

    pub fn with_limits(basis: GradedBasis, convention: Convention, limits: Limits) -> Arc<Self> {
        Arc::new(GhostRing { basis, convention, limits })
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn raw_swap_sign(&self, a: usize, b: usize) -> i8 {
        let odd = match self.convention {
            // -(-1)^{va vb}
            Convention::Primary => (self.basis.vdeg(a) * self.basis.vdeg(b)) % 2 == 0,
            Convention::StandardKoszul => (self.basis.gdeg(a) * self.basis.gdeg(b)) % 2 == 1,
        };
        if odd {
            -1
        } else {
            1
        }
    }

    /// `s(a,b)` with `η^a η^b = s(a,b) η^b η^a`.
    pub fn generator_swap_sign(&self, a: usize, b: usize) -> Result<i8> {
        self.basis.check(a)?;
        self.basis.check(b)?;
        Ok(self.raw_swap_sign(a, b))
    }

    pub(crate) fn s(&self, a: usize, b: usize) -> i8 {
        self.raw_swap_sign(a, b)
    }

    /// Generators whose square vanishes.
    pub fn is_anticommuting(&self, a: usize) -> bool {
        self.raw_swap_sign(a, a) < 0
    }

    /// Sign `κ(w)` with `η^{w_1}⋯η^{w_n} = κ(w) η^{sort(w)}`; zero if the word vanishes.
    pub fn word_sign(&self, word: &[usize]) -> i8 {
        let mut sign = 1i8;
        for i in 0..word.len() {
            for j in i + 1..word.len() {
                let (a, b) = (word[i], word[j]);
                if a == b && self.is_anticommuting(a) {
                    return 0;
                }
                if a > b {
                    sign *= self.s(a, b);
                }
            }
        }
        sign
    }

    /// Normal form of a word of generators.
    pub fn monomial_of_word(&self, word: &[usize]) -> Option<(i8, Monomial)> {
        let sign = self.word_sign(word);
        if sign == 0 {
            return None;
        }
        let mut sorted = word.to_vec();
        sorted.sort_unstable();
        Some((sign, Monomial::from_sorted(&sorted)))
    }

    /// `m1·m2` in normal form, or `None` when the product vanishes.
    pub fn mul_monomials(&self, m1: &Monomial, m2: &Monomial) -> Option<(i8, Monomial)> {
        let mut sign = 1i8;
        for &(a, ea) in &m1.0 {
            for &(b, eb) in &m2.0 {
                if a == b && self.is_anticommuting(a) {
                    return None;
                }
                if a > b && (ea * eb) % 2 == 1 {
                    sign *= self.s(a, b);
                }
            }
        }
        let mut merged = m1.0.clone();
        for &(b, eb) in &m2.0 {
            match merged.binary_search_by_key(&b, |&(i, _)| i) {
                Ok(pos) => merged[pos].1 += eb,
                Err(pos) => merged.insert(pos, (b, eb)),
            }
        }
        Some((sign, Monomial(merged)))
    }

    /// Bilinear product of two linear combinations with a coefficient pairing.
    pub fn product<A, B, C, F>(&self, p: &Terms<A>, q: &Terms<B>, pair: F) -> Terms<C>
    where
        A: Coeff,
        B: Coeff,
        C: Coeff,
        F: Fn(&A, &B) -> C,
    {
        let mut out = Terms::new();
        for (m1, a) in p {
            for (m2, b) in q {
                if let Some((sign, m)) = self.mul_monomials(m1, m2) {
                    let c = pair(a, b);
                    let c = if sign < 0 { c.times(&-Q::one()) } else { c };
                    add_term(&mut out, m, c);
                }
            }
        }
        out
    }

    /// `m · p` for a scalar monomial on the left.
    pub fn mono_times<T: Coeff>(&self, m: &Monomial, p: &Terms<T>) -> Terms<T> {
        let mut out = Terms::new();
        for (m2, c) in p {
            if let Some((sign, prod)) = self.mul_monomials(m, m2) {
                add_term(&mut out, prod, if sign < 0 { c.times(&-Q::one()) } else { c.clone() });
            }
        }
        out
    }

    /// `p · m` for a scalar monomial on the right.
    pub fn times_mono<T: Coeff>(&self, p: &Terms<T>, m: &Monomial) -> Terms<T> {
        let mut out = Terms::new();
        for (m1, c) in p {
            if let Some((sign, prod)) = self.mul_monomials(m1, m) {
                add_term(&mut out, prod, if sign < 0 { c.times(&-Q::one()) } else { c.clone() });
            }
        }
        out
    }

    pub fn ghost_degree(&self, m: &Monomial) -> i64 {
        m.0.iter().map(|&(i, e)| self.basis.gdeg(i) * e as i64).sum()
    }

    /// Sum of internal degrees over the factors of `m`.
    pub fn internal_degree(&self, m: &Monomial) -> i64 {
        m.0.iter().map(|&(i, e)| self.basis.vdeg(i) * e as i64).sum()
    }

    /// Whether a sorted tuple names a nonvanishing monomial.
    pub fn is_admissible(&self, sorted: &[usize]) -> bool {
        sorted.windows(2).all(|w| !(w[0] == w[1] && self.is_anticommuting(w[0])))
    }

    fn check_enumeration(&self, arity: usize) -> Result<()> {
        if arity > self.limits.max_arity {
            return Err(Error::ArityOverflow { arity, max: self.limits.max_arity });
        }
        let has_commuting = (0..self.dim()).any(|a| !self.is_anticommuting(a));
        if has_commuting && arity as u32 > self.limits.exponent_cap {
            return Err(Error::ExponentCap { arity, cap: self.limits.exponent_cap });
        }
        Ok(())
    }

    /// Sorted tuples of length `n` naming nonvanishing monomials, in lexicographic order.
    pub fn admissible_tuples(&self, n: usize) -> Result<Vec<Vec<usize>>> {
        self.check_enumeration(n)?;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        self.extend_tuples(n, 0, &mut cur, &mut out);
        Ok(out)
    }

    fn extend_tuples(&self, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in start..self.dim() {
            let next = if self.is_anticommuting(a) { a + 1 } else { a };
            cur.push(a);
            self.extend_tuples(n, next, cur, out);
            cur.pop();
        }
    }

    /// All tuples in `0..dim` of length `n`, in lexicographic order.
    pub fn all_tuples(&self, n: usize) -> Result<Vec<Vec<usize>>> {
        if n > self.limits.max_arity {
            return Err(Error::ArityOverflow { arity: n, max: self.limits.max_arity });
        }
        let d = self.dim();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..d).map(move |a| {
                        let mut t = t.clone();
                        t.push(a);
                        t
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Admissible monomials of total ghost degree `degree`.
    pub fn monomials_of_degree(&self, degree: i64) -> Result<Vec<Monomial>> {
        let mut out = Vec::new();
        if degree < 0 {
            return Ok(out);
        }
        // every generator has gdeg ≥ 1, so arity ≤ degree
        for n in 0..=degree as usize {
            for t in self.admissible_tuples(n)? {
                let m = Monomial::from_sorted(&t);
                if self.ghost_degree(&m) == degree {
                    out.push(m);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".into();
        }
        m.0.iter()
            .map(|&(i, e)| {
                if e == 1 {
                    format!("η^{}", self.basis.name(i))
                } else {
                    format!("(η^{})^{}", self.basis.name(i), e)
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

/// Element of the ghost ring with rational coefficients.
#[derive(Clone, PartialEq)]
pub struct GhostPolynomial {
    ring: Arc<GhostRing>,
    terms: Terms<Q>,
}

impl GhostPolynomial {
    pub fn zero(ring: &Arc<GhostRing>) -> Self {
        GhostPolynomial { ring: ring.clone(), terms: Terms::new() }
    }

    pub fn one(ring: &Arc<GhostRing>) -> Self {
        Self::monomial(ring, Monomial::one(), Q::one())
    }

    pub fn generator(ring: &Arc<GhostRing>, i: usize) -> Result<Self> {
        ring.basis().check(i)?;
        Ok(Self::monomial(ring, Monomial::generator(i), Q::one()))
    }

    pub fn monomial(ring: &Arc<GhostRing>, m: Monomial, c: Q) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, m, c);
        GhostPolynomial { ring: ring.clone(), terms }
    }

    pub fn from_terms(ring: &Arc<GhostRing>, terms: Terms<Q>) -> Self {
        let mut clean = Terms::new();
        for (m, c) in terms {
            add_term(&mut clean, m, c);
        }
        GhostPolynomial { ring: ring.clone(), terms: clean }
    }

    /// Product of generators in the given order.
    pub fn word(ring: &Arc<GhostRing>, word: &[usize]) -> Result<Self> {
        for &i in word {
            ring.basis().check(i)?;
        }
        Ok(match ring.monomial_of_word(word) {
            Some((s, m)) => Self::monomial(ring, m, crate::rational::sign_q(s)),
            None => Self::zero(ring),
        })
    }

    pub fn ring(&self) -> &Arc<GhostRing> {
        &self.ring
    }

    pub fn terms(&self) -> &Terms<Q> {
        &self.terms
    }

    pub fn into_terms(self) -> Terms<Q> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut terms = self.terms.clone();
        add_scaled_terms(&mut terms, &other.terms, &Q::one());
        Ok(GhostPolynomial { ring: self.ring.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut terms = Terms::new();
        add_scaled_terms(&mut terms, &self.terms, c);
        GhostPolynomial { ring: self.ring.clone(), terms }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let terms = self.ring.product(&self.terms, &other.terms, |a: &Q, b: &Q| a * b);
        Ok(GhostPolynomial { ring: self.ring.clone(), terms })
    }

    /// Homogeneous ghost degree, or `None` for zero / inhomogeneous elements.
    pub fn ghost_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| self.ring.ghost_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

pub fn monomial_multiply(ring: &Arc<GhostRing>, m1: &Monomial, m2: &Monomial) -> GhostPolynomial {
    match ring.mul_monomials(m1, m2) {
        Some((s, m)) => GhostPolynomial::monomial(ring, m, crate::rational::sign_q(s)),
        None => GhostPolynomial::zero(ring),
    }
}

pub fn poly_add(p: &GhostPolynomial, q: &GhostPolynomial) -> Result<GhostPolynomial> {
    p.add(q)
}

pub fn poly_scale(c: &Q, p: &GhostPolynomial) -> GhostPolynomial {
    p.scale(c)
}

pub fn poly_multiply(p: &GhostPolynomial, q: &GhostPolynomial) -> Result<GhostPolynomial> {
    p.multiply(q)
}

impl fmt::Debug for GhostPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GhostPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({})·{}", format_rational(c), self.ring.format_monomial(m)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn classical(n: usize) -> Arc<GhostRing> {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        GhostRing::new(
            GradedBasis::new(names.iter().map(|s| (s.as_str(), 0))).unwrap(),
            Convention::Primary,
        )
    }

    #[test]
    fn swap_sign_examples() {
        let r = GhostRing::new(
            GradedBasis::new([("a", 0), ("b", 0), ("c", 1), ("d", 1)]).unwrap(),
            Convention::Primary,
        );
        assert_eq!(r.generator_swap_sign(0, 1).unwrap(), -1);
        assert_eq!(r.generator_swap_sign(2, 3).unwrap(), 1);
        assert_eq!(r.generator_swap_sign(0, 2).unwrap(), -1);
        assert!(r.generator_swap_sign(0, 9).is_err());
        let s = GhostRing::new(r.basis().clone(), Convention::StandardKoszul);
        // the conventions differ only on mixed pairs
        assert_eq!(s.generator_swap_sign(0, 1).unwrap(), -1);
        assert_eq!(s.generator_swap_sign(2, 3).unwrap(), 1);
        assert_eq!(s.generator_swap_sign(0, 2).unwrap(), 1);
    }

    #[test]
    fn monomial_examples() {
        let r = classical(2);
        let one = Monomial::one();
        let e1 = Monomial::generator(0);
        let e2 = Monomial::generator(1);
        assert_eq!(monomial_multiply(&r, &one, &e1), GhostPolynomial::generator(&r, 0).unwrap());
        let p = monomial_multiply(&r, &e2, &e1);
        assert_eq!(p.coefficient(&Monomial::from_sorted(&[0, 1])), q(-1));
        assert!(monomial_multiply(&r, &e1, &e1).is_zero());
    }

    #[test]
    fn square_of_sum_vanishes() {
        let r = classical(2);
        let p = GhostPolynomial::generator(&r, 0)
            .unwrap()
            .add(&GhostPolynomial::generator(&r, 1).unwrap())
            .unwrap();
        assert!(p.multiply(&p).unwrap().is_zero());
        assert_eq!(p.add(&GhostPolynomial::zero(&r)).unwrap(), p);
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let a = classical(2);
        let b = classical(3);
        let p = GhostPolynomial::one(&a);
        let q = GhostPolynomial::one(&b);
        assert_eq!(p.add(&q).unwrap_err(), Error::BasisMismatch);
    }

    #[test]
    fn admissible_enumeration() {
        let r = GhostRing::new(GradedBasis::new([("a", 0), ("c", 1)]).unwrap(), Convention::Primary);
        assert_eq!(
            r.admissible_tuples(2).unwrap(),
            vec![vec![0, 1], vec![1, 1]]
        );
        let capped = GhostRing::with_limits(r.basis().clone(), Convention::Primary, Limits { max_arity: 8, exponent_cap: 4 });
        assert!(matches!(capped.admissible_tuples(5), Err(Error::ExponentCap { .. })));
        assert_eq!(r.admissible_tuples(5).unwrap().len(), 2);
        assert_eq!(classical(3).admissible_tuples(4).unwrap().len(), 0);
    }
}
