//! Cochains `C^n(L, V)`, their differentials, the bridge to the ghost
//! complex and exact cohomology.
//!
//! A skew cochain is stored on sorted tuples only and obeys the same
//! exchange law as the brackets. The ghost image of `ω ∈ C^n` is
//! `Σ_u ω(u) / mult(u)! η^u` over sorted tuples `u`.

use crate::derivations::{OddDerivation, SquareWitness};
use crate::ghost_ring::{add_term, GhostRing, Monomial, Terms};
use crate::linalg::{rank, rank_rational};
use crate::linf::{check_ga_infinity, exchange_sign, pick, prefix_sign, unshuffles, BracketFamily, RepresentationFamily, SumMode};
use crate::rational::{factorial, sign_q, Vector, Q};
use crate::{Error, Result};
use num_integer::binomial;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    ring: Arc<GhostRing>,
    arity: usize,
    module_dim: usize,
    skew: bool,
    values: BTreeMap<Vec<usize>, Vector>,
}

impl Cochain {
    pub fn zero(ring: &Arc<GhostRing>, arity: usize, module_dim: usize, skew: bool) -> Self {
        Cochain { ring: ring.clone(), arity, module_dim, skew, values: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<GhostRing> {
        &self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn is_skew(&self) -> bool {
        self.skew
    }

    pub fn values(&self) -> &BTreeMap<Vec<usize>, Vector> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn set(&mut self, tuple: &[usize], value: Vector) -> Result<()> {
        if tuple.len() != self.arity {
            return Err(Error::LengthMismatch { expected: self.arity, got: tuple.len() });
        }
        tuple.iter().try_for_each(|&i| self.ring.basis().check(i))?;
        if value.dim() != self.module_dim {
            return Err(Error::Dimension(format!(
                "cochain value has {} coordinates, module has dimension {}",
                value.dim(),
                self.module_dim
            )));
        }
        let (key, value) = if self.skew {
            let s = exchange_sign(&self.ring, tuple);
            if s == 0 {
                if value.is_zero() {
                    return Ok(());
                }
                return Err(Error::SkewViolation {
                    tuple: tuple.to_vec(),
                    detail: "repeated anticommuting generator must give zero".into(),
                });
            }
            let mut key = tuple.to_vec();
            key.sort_unstable();
            (key, value.scaled(&sign_q(s)))
        } else {
            (tuple.to_vec(), value)
        };
        if value.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, value);
        }
        Ok(())
    }

    pub fn eval(&self, tuple: &[usize]) -> Vector {
        let zero = || Vector::zeros(self.module_dim);
        if self.skew {
            let s = exchange_sign(&self.ring, tuple);
            if s == 0 {
                return zero();
            }
            let mut key = tuple.to_vec();
            key.sort_unstable();
            match self.values.get(&key) {
                Some(v) if s > 0 => v.clone(),
                Some(v) => v.scaled(&-Q::one()),
                None => zero(),
            }
        } else {
            self.values.get(tuple).cloned().unwrap_or_else(zero)
        }
    }

    /// `ω(v_{prefix}, y, v_{suffix})`.
    pub fn eval_inserted(&self, prefix: &[usize], y: &Vector, suffix: &[usize]) -> Vector {
        let mut out = Vector::zeros(self.module_dim);
        let mut t = Vec::with_capacity(self.arity);
        for (a, ya) in y.0.iter().enumerate() {
            if ya.is_zero() {
                continue;
            }
            t.clear();
            t.extend_from_slice(prefix);
            t.push(a);
            t.extend_from_slice(suffix);
            out.add_scaled(&self.eval(&t), ya);
        }
        out
    }

    /// Adds `c · other`; both must live in the same space.
    pub fn add_scaled(&mut self, other: &Cochain, c: &Q) -> Result<()> {
        if other.arity != self.arity || other.module_dim != self.module_dim || other.skew != self.skew {
            return Err(Error::Dimension("cochains live in different spaces".into()));
        }
        if other.ring != self.ring {
            return Err(Error::BasisMismatch);
        }
        for (t, v) in &other.values {
            let mut cur = self.values.get(t).cloned().unwrap_or_else(|| Vector::zeros(self.module_dim));
            cur.add_scaled(v, c);
            if cur.is_zero() {
                self.values.remove(t);
            } else {
                self.values.insert(t.clone(), cur);
            }
        }
        Ok(())
    }

    /// Index tuples spanning the cochain space: sorted admissible tuples when skew, all tuples otherwise.
    pub fn domain(ring: &GhostRing, arity: usize, skew: bool) -> Result<Vec<Vec<usize>>> {
        if skew {
            ring.admissible_tuples(arity)
        } else {
            ring.all_tuples(arity)
        }
    }

    /// The basis `δ_t ⊗ e_f` of the cochain space.
    pub fn basis(ring: &Arc<GhostRing>, arity: usize, module_dim: usize, skew: bool) -> Result<Vec<Cochain>> {
        let mut out = Vec::new();
        for t in Self::domain(ring, arity, skew)? {
            for f in 0..module_dim {
                let mut c = Cochain::zero(ring, arity, module_dim, skew);
                c.set(&t, Vector::unit(module_dim, f))?;
                out.push(c);
            }
        }
        Ok(out)
    }
}

/// Element of `Q[η] ⊗ V`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostCochain {
    pub ring: Arc<GhostRing>,
    pub module_dim: usize,
    pub terms: Terms<Vector>,
}

impl GhostCochain {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `ω̃ = Σ_u ω(u) / mult(u)! η^u`.
pub fn to_ghost(omega: &Cochain) -> Result<GhostCochain> {
    if !omega.skew {
        return Err(Error::Skew);
    }
    let mut terms = Terms::new();
    for (u, v) in &omega.values {
        let mono = Monomial::from_sorted(u);
        let w = Q::one() / mono.multiplicity_factorial();
        add_term(&mut terms, mono, v.scaled(&w));
    }
    Ok(GhostCochain { ring: omega.ring.clone(), module_dim: omega.module_dim, terms })
}

/// `ω̃ = 1/n! Σ_w ω(w) η^w` over every ordered tuple `w`; agrees with [`to_ghost`].
pub fn to_ghost_full(omega: &Cochain) -> Result<GhostCochain> {
    if !omega.skew {
        return Err(Error::Skew);
    }
    let ring = &omega.ring;
    let w = Q::one() / factorial(omega.arity);
    let mut terms = Terms::new();
    for t in ring.all_tuples(omega.arity)? {
        if let Some((s, mono)) = ring.monomial_of_word(&t) {
            add_term(&mut terms, mono, omega.eval(&t).scaled(&(&w * sign_q(s))));
        }
    }
    Ok(GhostCochain { ring: ring.clone(), module_dim: omega.module_dim, terms })
}

pub fn from_ghost(g: &GhostCochain, arity: usize) -> Result<Cochain> {
    let mut out = Cochain::zero(&g.ring, arity, g.module_dim, true);
    for (m, v) in &g.terms {
        if m.len() != arity {
            return Err(Error::LengthMismatch { expected: arity, got: m.len() });
        }
        out.set(&m.word(), v.scaled(&m.multiplicity_factorial()))?;
    }
    Ok(out)
}

fn resolve_rep(rep: Option<&RepresentationFamily>, ring: &Arc<GhostRing>, module_dim: usize) -> Result<RepresentationFamily> {
    match rep {
        Some(r) => {
            if r.module_dim() != module_dim {
                return Err(Error::Dimension(format!(
                    "representation acts on dimension {}, cochain takes values in dimension {}",
                    r.module_dim(),
                    module_dim
                )));
            }
            if r.ring() != ring {
                return Err(Error::BasisMismatch);
            }
            Ok(r.clone())
        }
        None => Ok(RepresentationFamily::new(ring, module_dim, true)),
    }
}

/// The classical Chevalley-Eilenberg differential
/// `Σ_i (-1)^{i+1} ρ(X_i) ω(…X̂_i…) + Σ_{j<k} (-1)^{j+k} ω([X_j,X_k], …X̂_j…X̂_k…)`.
pub fn ce_differential(omega: &Cochain, rep: Option<&RepresentationFamily>, fam: &BracketFamily) -> Result<Cochain> {
    let ring = fam.ring();
    if !ring.basis().is_classical() {
        return Err(Error::GradedInput);
    }
    if omega.ring() != ring {
        return Err(Error::BasisMismatch);
    }
    if !omega.skew || !fam.is_skew() {
        return Err(Error::NotSkew);
    }
    if fam.arities().iter().any(|&a| a != 2) {
        return Err(Error::Invalid("the classical differential takes a binary bracket only".into()));
    }
    let rep = resolve_rep(rep, ring, omega.module_dim)?;
    if rep.arities().iter().any(|&a| a != 1) {
        return Err(Error::Invalid("the classical differential takes a linear action only".into()));
    }
    let n = omega.arity + 1;
    let mut out = Cochain::zero(ring, n, omega.module_dim, true);
    for x in ring.admissible_tuples(n)? {
        let mut acc = Vector::zeros(omega.module_dim);
        for i in 0..n {
            let rest: Vec<usize> = x.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &v)| v).collect();
            let s = if i % 2 == 0 { Q::one() } else { -Q::one() };
            acc.add_scaled(&rep.eval(&[x[i]]).apply(&omega.eval(&rest)), &s);
        }
        for j in 0..n {
            for k in j + 1..n {
                let bracket = fam.eval(&[x[j], x[k]]);
                if bracket.is_zero() {
                    continue;
                }
                let rest: Vec<usize> =
                    x.iter().enumerate().filter(|&(p, _)| p != j && p != k).map(|(_, &v)| v).collect();
                // 1-based positions j+1, k+1 give the same parity as j+k
                let s = if (j + k) % 2 == 0 { Q::one() } else { -Q::one() };
                acc.add_scaled(&omega.eval_inserted(&[], &bracket, &rest), &s);
            }
        }
        out.set(&x, acc)?;
    }
    Ok(out)
}

fn check_component_inputs(omega: &Cochain, fam: &BracketFamily, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Invalid("components start at k = 1".into()));
    }
    if omega.ring() != fam.ring() {
        return Err(Error::BasisMismatch);
    }
    let max = fam.ring().limits().max_arity;
    let target = omega.arity + k - 1;
    if target > max {
        return Err(Error::ArityOverflow { arity: target, max });
    }
    Ok(())
}

/// `S_k : C^n → C^{n+k-1}` of a skew pair `(ρ, l)`.
pub fn cl_differential_component(
    k: usize,
    omega: &Cochain,
    rep: Option<&RepresentationFamily>,
    fam: &BracketFamily,
    mode: SumMode,
) -> Result<Cochain> {
    let ring = fam.ring();
    let rep = resolve_rep(rep, ring, omega.module_dim)?;
    check_component_inputs(omega, fam, k)?;
    if !omega.skew || !fam.is_skew() || !rep.is_skew() {
        return Err(Error::NotSkew);
    }
    let n = omega.arity;
    let total = n + k - 1;
    let mut out = Cochain::zero(ring, total, omega.module_dim, true);
    for z in ring.admissible_tuples(total)? {
        let v = match mode {
            SumMode::Unshuffle => cl_component_unshuffle(k, omega, &rep, fam, &z),
            SumMode::FullSymmetric => cl_component_full(k, omega, &rep, fam, &z)?,
        };
        out.set(&z, v)?;
    }
    Ok(out)
}

fn cl_component_unshuffle(k: usize, omega: &Cochain, rep: &RepresentationFamily, fam: &BracketFamily, z: &[usize]) -> Vector {
    let ring = fam.ring();
    let total = z.len();
    let mut acc = Vector::zeros(omega.module_dim);
    if k >= 2 {
        for (p, rest) in unshuffles(total, k - 1) {
            let a = pick(z, &p);
            let b = pick(z, &rest);
            let mut word = a.clone();
            word.extend_from_slice(&b);
            let s = exchange_sign(ring, &word);
            if s == 0 {
                continue;
            }
            let m = rep.eval(&a);
            if m.is_zero() {
                continue;
            }
            acc.add_scaled(&m.apply(&omega.eval(&b)), &sign_q(s));
        }
    }
    if k <= total {
        for (p, rest) in unshuffles(total, k) {
            let a = pick(z, &p);
            let b = pick(z, &rest);
            let mut word = a.clone();
            word.extend_from_slice(&b);
            let s = exchange_sign(ring, &word);
            if s == 0 {
                continue;
            }
            let y = fam.eval(&a);
            if y.is_zero() {
                continue;
            }
            acc.add_scaled(&omega.eval_inserted(&[], &y, &b), &sign_q(-s));
        }
    }
    acc
}

fn cl_component_full(k: usize, omega: &Cochain, rep: &RepresentationFamily, fam: &BracketFamily, z: &[usize]) -> Result<Vector> {
    let ring = fam.ring();
    let total = z.len();
    let n = omega.arity;
    let nf = factorial(total);
    let rho_weight = Q::from_integer(binomial(total, k - 1).into());
    let bracket_weight = &nf / (factorial(n) * factorial(k));
    let mut acc = Vector::zeros(omega.module_dim);
    for p in crate::graded::all_permutations(total)? {
        let w = p.apply(z);
        let kw = exchange_sign(ring, &w);
        if kw == 0 {
            continue;
        }
        if k >= 2 {
            let m = rep.eval(&w[..k - 1]);
            if !m.is_zero() {
                acc.add_scaled(&m.apply(&omega.eval(&w[k - 1..])), &(&rho_weight * sign_q(kw)));
            }
        }
        for l in 0..n {
            if l + k > total {
                break;
            }
            let y = fam.eval(&w[l..l + k]);
            if y.is_zero() {
                continue;
            }
            let s = -prefix_sign(ring, &w[..l]) * kw;
            acc.add_scaled(&omega.eval_inserted(&w[..l], &y, &w[l + k..]), &(&bracket_weight * sign_q(s)));
        }
    }
    Ok(acc.scaled(&(Q::one() / nf)))
}

/// Ordered `S_k` of a GA∞ pair: `ρ_{k-1}(x_1…x_{k-1}) ω(x_k…) - Σ_l ε_l ω(…, m_k(x_l…), …)`.
pub fn ga_differential_component(
    k: usize,
    omega: &Cochain,
    rep: Option<&RepresentationFamily>,
    fam: &BracketFamily,
) -> Result<(Cochain, Vec<String>)> {
    let ring = fam.ring();
    let rep = resolve_rep(rep, ring, omega.module_dim)?;
    check_component_inputs(omega, fam, k)?;
    let mut warnings = Vec::new();
    if !check_ga_infinity(fam)?.passed() {
        warnings.push("family does not satisfy the GA∞ equations".to_string());
    }
    let n = omega.arity;
    let total = n + k - 1;
    let mut out = Cochain::zero(ring, total, omega.module_dim, false);
    for x in ring.all_tuples(total)? {
        let mut acc = Vector::zeros(omega.module_dim);
        if k >= 2 {
            let m = rep.eval(&x[..k - 1]);
            if !m.is_zero() {
                acc.add_scaled(&m.apply(&omega.eval(&x[k - 1..])), &Q::one());
            }
        }
        for l in 0..n {
            let y = fam.eval(&x[l..l + k]);
            if y.is_zero() {
                continue;
            }
            let s = -prefix_sign(ring, &x[..l]);
            acc.add_scaled(&omega.eval_inserted(&x[..l], &y, &x[l + k..]), &sign_q(s));
        }
        out.set(&x, acc)?;
    }
    Ok((out, warnings))
}

/// Left-module bar differential of an associative algebra acting on itself:
/// `(dω)(a_0…a_n) = a_0·ω(a_1…a_n) + Σ_i (-1)^{i+1} ω(a_0,…,a_i a_{i+1},…,a_n)`.
pub fn hochschild_differential(omega: &Cochain, alg: &BracketFamily) -> Result<Cochain> {
    let ring = alg.ring();
    if !ring.basis().is_classical() {
        return Err(Error::GradedInput);
    }
    if omega.ring() != ring {
        return Err(Error::BasisMismatch);
    }
    let d = ring.dim();
    if omega.module_dim != d {
        return Err(Error::Dimension("Hochschild cochains take values in the algebra".into()));
    }
    if alg.arities().iter().any(|&a| a != 2) {
        return Err(Error::Invalid("expected a binary product only".into()));
    }
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let left = alg.eval_inserted(&[], &alg.eval(&[a, b]), &[c]);
                let right = alg.eval_inserted(&[a], &alg.eval(&[b, c]), &[]);
                if left != right {
                    let names = [ring.basis().name(a), ring.basis().name(b), ring.basis().name(c)];
                    return Err(Error::NotAssociative(format!("({}·{})·{2} ≠ {0}·({1}·{2})", names[0], names[1], names[2])));
                }
            }
        }
    }
    let mul = |a: &Vector, b: &Vector| -> Vector {
        let mut out = Vector::zeros(d);
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if !bj.is_zero() {
                    out.add_scaled(&alg.eval(&[i, j]), &(ai * bj));
                }
            }
        }
        out
    };
    let n = omega.arity;
    let mut out = Cochain::zero(ring, n + 1, d, false);
    for a in ring.all_tuples(n + 1)? {
        let mut acc = mul(&Vector::unit(d, a[0]), &omega.eval(&a[1..]));
        for i in 0..n {
            let prod = mul(&Vector::unit(d, a[i]), &Vector::unit(d, a[i + 1]));
            let s = if i % 2 == 0 { -Q::one() } else { Q::one() };
            acc.add_scaled(&omega.eval_inserted(&a[..i], &prod, &a[i + 2..]), &s);
        }
        out.set(&a, acc)?;
    }
    Ok(out)
}

/// Arities `k` for which `S_k` can be nonzero.
pub fn component_range(fam: &BracketFamily, rep: Option<&RepresentationFamily>) -> BTreeSet<usize> {
    let mut ks = fam.arities();
    if let Some(r) = rep {
        ks.extend(r.arities().into_iter().map(|a| a + 1));
    }
    ks
}

/// Cochains of several arities, viewed as one element of `C^*`.
pub type CochainSum = BTreeMap<usize, Cochain>;

fn accumulate(acc: &mut CochainSum, c: Cochain) -> Result<()> {
    match acc.get_mut(&c.arity) {
        Some(existing) => existing.add_scaled(&c, &Q::one()),
        None => {
            acc.insert(c.arity, c);
            Ok(())
        }
    }
}

/// `S = Σ_k S_k`, skew (CL∞) or ordered (GA∞) according to the family.
pub fn total_differential(
    omega: &CochainSum,
    rep: Option<&RepresentationFamily>,
    fam: &BracketFamily,
) -> Result<CochainSum> {
    let ks = component_range(fam, rep);
    let mut out = CochainSum::new();
    for c in omega.values() {
        for &k in &ks {
            let part = if fam.is_skew() {
                cl_differential_component(k, c, rep, fam, SumMode::Unshuffle)?
            } else {
                ga_differential_component(k, c, rep, fam)?.0
            };
            accumulate(&mut out, part)?;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

pub fn single(c: Cochain) -> CochainSum {
    let mut s = CochainSum::new();
    s.insert(c.arity, c);
    s
}

/// Ghost route: `S̃(ω̃)` read back as a cochain of arity `n + k - 1`.
pub fn ghost_route(k: usize, omega: &Cochain, rep: Option<&RepresentationFamily>, fam: &BracketFamily) -> Result<Cochain> {
    let rep = resolve_rep(rep, fam.ring(), omega.module_dim)?;
    let d = OddDerivation::new(fam, Some(&rep), Default::default())?.component(k)?;
    let g = to_ghost(omega)?;
    let image = d.apply_module(&g.terms)?;
    let target = omega.arity + k - 1;
    let mut terms = Terms::new();
    for (m, v) in image {
        if m.len() != target {
            return Err(Error::Invalid(format!("ghost image has a monomial of length {} in component {k}", m.len())));
        }
        terms.insert(m, v);
    }
    from_ghost(&GhostCochain { ring: fam.ring().clone(), module_dim: omega.module_dim, terms }, target)
}

/// `S̃_k ω̃ = (S_k ω)~`, compared exactly.
pub fn correspondence_check(
    omega: &Cochain,
    k: usize,
    rep: Option<&RepresentationFamily>,
    fam: &BracketFamily,
) -> Result<bool> {
    let tensor = cl_differential_component(k, omega, rep, fam, SumMode::Unshuffle)?;
    let ghost = ghost_route(k, omega, rep, fam)?;
    Ok(to_ghost(&tensor)? == to_ghost(&ghost)?)
}

/// One row of a cohomology table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyRow {
    pub degree: usize,
    pub cochain_dim: usize,
    /// Rank of the differential leaving this degree.
    pub rank: usize,
    pub cohomology_dim: usize,
}

#[derive(Debug, Clone)]
pub enum CohomologyError {
    NotNilpotent(Vec<SquareWitness>),
    Other(Error),
}

impl From<Error> for CohomologyError {
    fn from(e: Error) -> Self {
        CohomologyError::Other(e)
    }
}

/// Basis `f ⊗ η^u` of cochains of total ghost degree `degree`.
fn degree_basis(ring: &GhostRing, degree: usize, module_dim: usize) -> Result<Vec<(Vec<usize>, usize)>> {
    let mut out = Vec::new();
    for m in ring.monomials_of_degree(degree as i64)? {
        for f in 0..module_dim {
            out.push((m.word(), f));
        }
    }
    Ok(out)
}

/// Matrix of the total differential from degree `degree` to `degree + 1`,
/// one row per source basis element, in the sorted-tuple bases.
pub fn differential_matrix(
    degree: usize,
    rep: &RepresentationFamily,
    fam: &BracketFamily,
) -> Result<Vec<Vec<Q>>> {
    let ring = fam.ring();
    let md = rep.module_dim();
    let source = degree_basis(ring, degree, md)?;
    let target = degree_basis(ring, degree + 1, md)?;
    let index: BTreeMap<(Vec<usize>, usize), usize> = target.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut rows = Vec::with_capacity(source.len());
    for (u, f) in source {
        let mut omega = Cochain::zero(ring, u.len(), md, true);
        omega.set(&u, Vector::unit(md, f))?;
        let image = total_differential(&single(omega), Some(rep), fam)?;
        let mut row = vec![Q::zero(); target.len()];
        for c in image.values() {
            for (t, v) in c.values() {
                for (g, x) in v.0.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let Some(&col) = index.get(&(t.clone(), g)) else {
                        return Err(Error::InhomogeneousDifferential(format!(
                            "image of degree {degree} leaves degree {}",
                            degree + 1
                        )));
                    };
                    row[col] = x.clone();
                }
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

fn check_homogeneous_rep(rep: &RepresentationFamily) -> Result<()> {
    let ring = rep.ring();
    for t in rep.maps().keys() {
        let degree: i64 = t.iter().map(|&i| ring.basis().gdeg(i)).sum();
        if degree != 1 {
            let names: Vec<&str> = t.iter().map(|&i| ring.basis().name(i)).collect();
            return Err(Error::InhomogeneousDifferential(format!(
                "ρ({}) raises ghost degree by {degree}",
                names.join(",")
            )));
        }
    }
    Ok(())
}

/// Dimensions of cochains, ranks and cohomology in ghost degrees `0..=max_degree`.
/// Each rank is computed by fraction-free elimination and confirmed by Gauss-Jordan.
pub fn cohomology_table(
    fam: &BracketFamily,
    rep: Option<&RepresentationFamily>,
    max_degree: usize,
) -> std::result::Result<Vec<CohomologyRow>, CohomologyError> {
    if !fam.is_skew() {
        return Err(Error::NotSkew.into());
    }
    let ring = fam.ring();
    let rep = match rep {
        Some(r) => r.clone(),
        None => RepresentationFamily::trivial(ring, 1),
    };
    check_homogeneous_rep(&rep)?;
    let d = OddDerivation::new(fam, Some(&rep), Default::default())?;
    let witnesses = d.square_residual()?;
    if !witnesses.is_empty() {
        return Err(CohomologyError::NotNilpotent(witnesses));
    }
    let mut ranks = Vec::with_capacity(max_degree + 1);
    let mut dims = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let m = differential_matrix(n, &rep, fam)?;
        let r = rank(&m);
        let r2 = rank_rational(&m);
        if r != r2 {
            return Err(Error::Invalid(format!("rank routines disagree in degree {n}: {r} vs {r2}")).into());
        }
        dims.push(m.len());
        ranks.push(r);
    }
    Ok((0..=max_degree)
        .map(|n| CohomologyRow {
            degree: n,
            cochain_dim: dims[n],
            rank: ranks[n],
            cohomology_dim: dims[n] - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 },
        })
        .collect())
}

pub fn cohomology_dims(
    fam: &BracketFamily,
    rep: Option<&RepresentationFamily>,
    max_degree: usize,
) -> std::result::Result<Vec<usize>, CohomologyError> {
    Ok(cohomology_table(fam, rep, max_degree)?.into_iter().map(|r| r.cohomology_dim).collect())
}
