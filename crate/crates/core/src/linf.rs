//! Bracket families `l_n` / `m_k`, representation families `ρ_k`, and the
//! ghost-free checkers for their structure equations.
//!
//! Values on arbitrary index tuples follow the exchange law of the ghost
//! ring: if `η^{t} = κ η^{sort(t)}` then `f(t) = κ f(sort(t))`. Under the
//! primary convention `κ = (-1)^σ e(σ)` with Koszul signs in the internal
//! degrees; under the standard convention `κ = e(σ)` in ghost degrees.

use crate::ghost_ring::GhostRing;
use crate::graded::{all_permutations, Permutation};
use crate::rational::{factorial, format_rational, Matrix, Vector, Q};
use crate::{Error, Result};
use itertools::Itertools;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// How the symmetric-group sums of a checker are organised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumMode {
    /// Each distinct term once, indexed by unshuffles.
    #[default]
    Unshuffle,
    /// Full sums over `S_N` with slot-wise insertion and factorial weights.
    FullSymmetric,
}

/// `η^{t}` expressed against `η^{sort(t)}`.
pub(crate) fn exchange_sign(ring: &GhostRing, tuple: &[usize]) -> i8 {
    ring.word_sign(tuple)
}

fn sorted(tuple: &[usize]) -> Vec<usize> {
    let mut s = tuple.to_vec();
    s.sort_unstable();
    s
}

/// Leibniz sign `(-1)^{gdeg(w_1)+…+gdeg(w_{l-1})}` for the prefix `w[..l]`.
pub(crate) fn prefix_sign(ring: &GhostRing, prefix: &[usize]) -> i8 {
    let total: i64 = prefix.iter().map(|&i| ring.basis().gdeg(i)).sum();
    if total % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Splits positions `0..n` into a chosen `m`-subset and its complement.
pub(crate) fn unshuffles(n: usize, m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    (0..n)
        .combinations(m)
        .map(|p| {
            let rest = (0..n).filter(|i| !p.contains(i)).collect();
            (p, rest)
        })
        .collect()
}

pub(crate) fn pick(z: &[usize], positions: &[usize]) -> Vec<usize> {
    positions.iter().map(|&i| z[i]).collect()
}

fn check_tuple(ring: &GhostRing, tuple: &[usize]) -> Result<()> {
    tuple.iter().try_for_each(|&i| ring.basis().check(i))
}

/// A finite family of multilinear brackets `l_n : V^{⊗n} → V` given by
/// structure constants `C^j_{i_1..i_n}`.
#[derive(Clone, PartialEq)]
pub struct BracketFamily {
    ring: Arc<GhostRing>,
    skew: bool,
    entries: BTreeMap<Vec<usize>, Vector>,
}

impl BracketFamily {
    pub fn new(ring: &Arc<GhostRing>, skew: bool) -> Self {
        BracketFamily { ring: ring.clone(), skew, entries: BTreeMap::new() }
    }

    pub fn ring(&self) -> &Arc<GhostRing> {
        &self.ring
    }

    pub fn is_skew(&self) -> bool {
        self.skew
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// Stored entries; for skew families only sorted representatives.
    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Vector> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn arities(&self) -> BTreeSet<usize> {
        self.entries.keys().map(Vec::len).collect()
    }

    pub fn max_arity(&self) -> usize {
        self.arities().into_iter().max().unwrap_or(0)
    }

    /// Keeps only the brackets of arity `k`.
    pub fn component(&self, k: usize) -> Self {
        BracketFamily {
            ring: self.ring.clone(),
            skew: self.skew,
            entries: self.entries.iter().filter(|(t, _)| t.len() == k).map(|(t, v)| (t.clone(), v.clone())).collect(),
        }
    }

    fn check_homogeneous(&self, tuple: &[usize], output: &Vector) -> Result<()> {
        let basis = self.ring.basis();
        let expected: i64 = tuple.iter().map(|&i| basis.vdeg(i)).sum::<i64>() + tuple.len() as i64 - 2;
        for (j, c) in output.0.iter().enumerate() {
            if !c.is_zero() && basis.vdeg(j) != expected {
                return Err(Error::NonHomogeneous {
                    tuple: tuple.to_vec(),
                    output: j,
                    got: basis.vdeg(j),
                    expected,
                });
            }
        }
        Ok(())
    }

    /// Sets `l_n(v_{t_1},…,v_{t_n}) = output`. Skew families store the value
    /// transported to the sorted representative.
    pub fn set(&mut self, tuple: &[usize], output: Vector) -> Result<()> {
        check_tuple(&self.ring, tuple)?;
        if tuple.is_empty() {
            return Err(Error::Invalid("brackets need arity at least 1".into()));
        }
        if output.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "bracket output has {} coordinates, basis has {}",
                output.dim(),
                self.dim()
            )));
        }
        self.check_homogeneous(tuple, &output)?;
        let (key, value) = if self.skew {
            let s = exchange_sign(&self.ring, tuple);
            if s == 0 {
                if output.is_zero() {
                    return Ok(());
                }
                return Err(Error::SkewViolation {
                    tuple: tuple.to_vec(),
                    detail: "repeated anticommuting generator must give zero".into(),
                });
            }
            (sorted(tuple), output.scaled(&Q::from_integer(s.into())))
        } else {
            (tuple.to_vec(), output)
        };
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    /// Convenience for sparse outputs given as `(generator, coefficient)`.
    pub fn set_sparse(&mut self, tuple: &[usize], output: &[(usize, Q)]) -> Result<()> {
        let mut v = Vector::zeros(self.dim());
        for (j, c) in output {
            self.ring.basis().check(*j)?;
            v.0[*j] += c;
        }
        self.set(tuple, v)
    }

    /// `l_n(v_{t_1},…,v_{t_n})` as output coordinates.
    pub fn eval(&self, tuple: &[usize]) -> Vector {
        if self.skew {
            let s = exchange_sign(&self.ring, tuple);
            if s == 0 {
                return Vector::zeros(self.dim());
            }
            match self.entries.get(&sorted(tuple)) {
                Some(v) if s > 0 => v.clone(),
                Some(v) => v.scaled(&-Q::one()),
                None => Vector::zeros(self.dim()),
            }
        } else {
            self.entries.get(tuple).cloned().unwrap_or_else(|| Vector::zeros(self.dim()))
        }
    }

    /// `C^j_{t}`.
    pub fn coefficient(&self, j: usize, tuple: &[usize]) -> Q {
        self.eval(tuple).0[j].clone()
    }

    /// `l_n(v_{prefix}, y, v_{suffix})` for a vector `y` in one slot.
    pub fn eval_inserted(&self, prefix: &[usize], y: &Vector, suffix: &[usize]) -> Vector {
        let mut out = Vector::zeros(self.dim());
        let mut t: Vec<usize> = Vec::with_capacity(prefix.len() + suffix.len() + 1);
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

    /// Writes every ordering explicitly, producing an unconstrained family
    /// with the same values.
    pub fn expanded(&self) -> Result<Self> {
        let mut raw = BracketFamily::new(&self.ring, false);
        for t in self.entries.keys() {
            for p in all_permutations(t.len())? {
                let w = p.apply(t);
                let v = self.eval(&w);
                if !v.is_zero() {
                    raw.entries.insert(w, v);
                }
            }
        }
        Ok(raw)
    }

    /// Turns an explicitly written family into a skew one after verifying the exchange law.
    pub fn canonicalized(&self) -> Result<Self> {
        let report = check_skew(self)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::SkewViolation { tuple: v.tuple.clone(), detail: v.detail.clone() });
        }
        let mut out = BracketFamily::new(&self.ring, true);
        for (t, v) in &self.entries {
            out.set(t, v.clone())?;
        }
        Ok(out)
    }

    /// Relabels generators consistently with [`crate::graded::GradedBasis::permuted`].
    pub fn relabeled(&self, ring: &Arc<GhostRing>, perm: &Permutation) -> Result<Self> {
        let inv = perm.inverse();
        let mut out = BracketFamily::new(ring, self.skew);
        for (t, v) in &self.entries {
            let nt: Vec<usize> = t.iter().map(|&i| inv.images()[i]).collect();
            out.set(&nt, Vector(perm.apply(&v.0)))?;
        }
        Ok(out)
    }

    /// Direct entry replacement without normalisation; used to build corrupted tables.
    pub fn insert_raw(&mut self, tuple: Vec<usize>, value: Vector) {
        self.entries.insert(tuple, value);
    }
}

impl fmt::Debug for BracketFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.ring.basis();
        writeln!(f, "BracketFamily(skew={}) {{", self.skew)?;
        for (t, v) in &self.entries {
            let names: Vec<&str> = t.iter().map(|&i| b.name(i)).collect();
            let out: Vec<String> = v
                .0
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| format!("{}·{}", format_rational(c), b.name(j)))
                .collect();
            writeln!(f, "  l({}) = {}", names.join(","), out.join(" + "))?;
        }
        write!(f, "}}")
    }
}

/// Maps `ρ_k : V^{⊗k} → End(A)` into square matrices on a module of dimension `module_dim`.
#[derive(Clone, PartialEq)]
pub struct RepresentationFamily {
    ring: Arc<GhostRing>,
    module_dim: usize,
    skew: bool,
    maps: BTreeMap<Vec<usize>, Matrix>,
}

impl RepresentationFamily {
    pub fn new(ring: &Arc<GhostRing>, module_dim: usize, skew: bool) -> Self {
        RepresentationFamily { ring: ring.clone(), module_dim, skew, maps: BTreeMap::new() }
    }

    /// The zero representation on a module of the given dimension.
    pub fn trivial(ring: &Arc<GhostRing>, module_dim: usize) -> Self {
        Self::new(ring, module_dim, true)
    }

    pub fn ring(&self) -> &Arc<GhostRing> {
        &self.ring
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn is_skew(&self) -> bool {
        self.skew
    }

    pub fn maps(&self) -> &BTreeMap<Vec<usize>, Matrix> {
        &self.maps
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn arities(&self) -> BTreeSet<usize> {
        self.maps.keys().map(Vec::len).collect()
    }

    pub fn component(&self, k: usize) -> Self {
        RepresentationFamily {
            ring: self.ring.clone(),
            module_dim: self.module_dim,
            skew: self.skew,
            maps: self.maps.iter().filter(|(t, _)| t.len() == k).map(|(t, m)| (t.clone(), m.clone())).collect(),
        }
    }

    pub fn set(&mut self, tuple: &[usize], matrix: Matrix) -> Result<()> {
        check_tuple(&self.ring, tuple)?;
        if tuple.is_empty() {
            return Err(Error::Invalid("representation maps need arity at least 1".into()));
        }
        if matrix.dim != self.module_dim {
            return Err(Error::Dimension(format!(
                "matrix is {0}×{0}, module has dimension {1}",
                matrix.dim, self.module_dim
            )));
        }
        let (key, value) = if self.skew {
            let s = exchange_sign(&self.ring, tuple);
            if s == 0 {
                if matrix.is_zero() {
                    return Ok(());
                }
                return Err(Error::SkewViolation {
                    tuple: tuple.to_vec(),
                    detail: "repeated anticommuting generator must give zero".into(),
                });
            }
            (sorted(tuple), matrix.scaled(&Q::from_integer(s.into())))
        } else {
            (tuple.to_vec(), matrix)
        };
        if value.is_zero() {
            self.maps.remove(&key);
        } else {
            self.maps.insert(key, value);
        }
        Ok(())
    }

    pub fn eval(&self, tuple: &[usize]) -> Matrix {
        if self.skew {
            let s = exchange_sign(&self.ring, tuple);
            if s == 0 {
                return Matrix::zeros(self.module_dim);
            }
            match self.maps.get(&sorted(tuple)) {
                Some(m) if s > 0 => m.clone(),
                Some(m) => m.scaled(&-Q::one()),
                None => Matrix::zeros(self.module_dim),
            }
        } else {
            self.maps.get(tuple).cloned().unwrap_or_else(|| Matrix::zeros(self.module_dim))
        }
    }

    pub fn eval_inserted(&self, prefix: &[usize], y: &Vector, suffix: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.module_dim);
        let mut t = Vec::new();
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

    pub fn expanded(&self) -> Result<Self> {
        let mut raw = RepresentationFamily::new(&self.ring, self.module_dim, false);
        for t in self.maps.keys() {
            for p in all_permutations(t.len())? {
                let w = p.apply(t);
                let m = self.eval(&w);
                if !m.is_zero() {
                    raw.maps.insert(w, m);
                }
            }
        }
        Ok(raw)
    }

    pub fn canonicalized(&self) -> Result<Self> {
        let report = check_skew_representation(self)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::SkewViolation { tuple: v.tuple.clone(), detail: v.detail.clone() });
        }
        let mut out = RepresentationFamily::new(&self.ring, self.module_dim, true);
        for (t, m) in &self.maps {
            out.set(t, m.clone())?;
        }
        Ok(out)
    }

    pub fn insert_raw(&mut self, tuple: Vec<usize>, value: Matrix) {
        self.maps.insert(tuple, value);
    }
}

impl fmt::Debug for RepresentationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.ring.basis();
        writeln!(f, "RepresentationFamily(dim={}, skew={}) {{", self.module_dim, self.skew)?;
        for (t, m) in &self.maps {
            let names: Vec<&str> = t.iter().map(|&i| b.name(i)).collect();
            writeln!(f, "  ρ({}) = {:?}", names.join(","), m)?;
        }
        write!(f, "}}")
    }
}

/// Builds `l_2` from Lie structure constants `c^k_{ij}`, given as `((i, j), output)`.
pub fn brackets_from_lie(
    ring: &Arc<GhostRing>,
    constants: impl IntoIterator<Item = ((usize, usize), Vector)>,
) -> Result<BracketFamily> {
    if !ring.basis().is_classical() {
        return Err(Error::GradedInput);
    }
    let mut given: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for ((i, j), v) in constants {
        ring.basis().check(i)?;
        ring.basis().check(j)?;
        if i == j && !v.is_zero() {
            return Err(Error::SkewViolation { tuple: vec![i, j], detail: "[x,x] must vanish".into() });
        }
        if given.insert((i, j), v).is_some() {
            return Err(Error::Invalid(format!("duplicate structure constants for ({i},{j})")));
        }
    }
    let mut fam = BracketFamily::new(ring, true);
    for (&(i, j), v) in &given {
        if let Some(w) = given.get(&(j, i)) {
            if *w != v.scaled(&-Q::one()) {
                return Err(Error::SkewViolation {
                    tuple: vec![i, j],
                    detail: "c_{ij} ≠ -c_{ji}".into(),
                });
            }
        }
        if i != j {
            fam.set(&[i, j], v.clone())?;
        }
    }
    Ok(fam)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewViolation {
    pub tuple: Vec<usize>,
    pub permutation: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkewReport {
    pub violations: Vec<SkewViolation>,
}

impl SkewReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn skew_check_generic<T: PartialEq + fmt::Debug>(
    ring: &GhostRing,
    tuples: impl Iterator<Item = Vec<usize>>,
    eval: impl Fn(&[usize]) -> T,
    negate: impl Fn(&T) -> T,
    is_zero: impl Fn(&T) -> bool,
) -> Result<SkewReport> {
    let mut report = SkewReport::default();
    for t in tuples {
        let base = eval(&t);
        let st = exchange_sign(ring, &t);
        if st == 0 {
            if !is_zero(&base) {
                report.violations.push(SkewViolation {
                    tuple: t.clone(),
                    permutation: (0..t.len()).collect(),
                    detail: "repeated anticommuting generator carries a nonzero value".into(),
                });
            }
            continue;
        }
        for p in all_permutations(t.len())? {
            let w = p.apply(&t);
            // η^{w} = κ_w κ_t η^{t}
            let rel = exchange_sign(ring, &w) * st;
            let expected = if rel > 0 { eval(&t) } else { negate(&base) };
            let got = eval(&w);
            if got != expected {
                report.violations.push(SkewViolation {
                    tuple: t.clone(),
                    permutation: p.images().to_vec(),
                    detail: format!("value at {w:?} is {got:?}, exchange law requires {expected:?}"),
                });
            }
        }
    }
    Ok(report)
}

/// Verifies the exchange law on every stored tuple against every permutation.
pub fn check_skew(fam: &BracketFamily) -> Result<SkewReport> {
    skew_check_generic(
        &fam.ring,
        fam.entries.keys().cloned(),
        |t| fam.eval(t),
        |v| v.scaled(&-Q::one()),
        |v| v.is_zero(),
    )
}

pub fn check_skew_representation(rep: &RepresentationFamily) -> Result<SkewReport> {
    skew_check_generic(
        &rep.ring,
        rep.maps.keys().cloned(),
        |t| rep.eval(t),
        |m| m.scaled(&-Q::one()),
        |m| m.is_zero(),
    )
}

/// One nonzero entry of a structure-equation residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub arity: usize,
    pub tuple: Vec<usize>,
    /// Module basis vector the residual was applied to, for representation checks.
    pub module_basis: Option<usize>,
    pub value: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub residuals: Vec<Residual>,
    pub warnings: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Total arities `k + m - 1` reached by composing two brackets.
fn composite_arities(inner: &BTreeSet<usize>, outer: &BTreeSet<usize>) -> BTreeSet<usize> {
    inner.iter().flat_map(|m| outer.iter().map(move |k| k + m - 1)).collect()
}

/// Residual of the CL∞ structure equation at a sorted admissible tuple `z`.
pub fn cl_residual(fam: &BracketFamily, z: &[usize], mode: SumMode) -> Result<Vector> {
    let ring = &fam.ring;
    let n = z.len();
    let arities = fam.arities();
    let mut out = Vector::zeros(fam.dim());
    match mode {
        SumMode::Unshuffle => {
            for &m in &arities {
                if m > n {
                    continue;
                }
                let k = n + 1 - m;
                if !arities.contains(&k) {
                    continue;
                }
                for (p, rest) in unshuffles(n, m) {
                    let inner = pick(z, &p);
                    let outer = pick(z, &rest);
                    let mut word = inner.clone();
                    word.extend_from_slice(&outer);
                    let s = exchange_sign(ring, &word);
                    if s == 0 {
                        continue;
                    }
                    let y = fam.eval(&inner);
                    if y.is_zero() {
                        continue;
                    }
                    let v = fam.eval_inserted(&[], &y, &outer);
                    out.add_scaled(&v, &Q::from_integer(s.into()));
                }
            }
        }
        SumMode::FullSymmetric => {
            let perms = all_permutations(n)?;
            let nf = factorial(n);
            for p in &perms {
                let w = p.apply(z);
                let kw = exchange_sign(ring, &w);
                if kw == 0 {
                    continue;
                }
                for &m in &arities {
                    if m > n {
                        continue;
                    }
                    let k = n + 1 - m;
                    if !arities.contains(&k) {
                        continue;
                    }
                    let weight = &nf / (factorial(k) * factorial(m));
                    for l in 0..k {
                        let inner = &w[l..l + m];
                        let y = fam.eval(inner);
                        if y.is_zero() {
                            continue;
                        }
                        let s = prefix_sign(ring, &w[..l]) * kw;
                        let v = fam.eval_inserted(&w[..l], &y, &w[l + m..]);
                        out.add_scaled(&v, &(&weight * Q::from_integer(s.into())));
                    }
                }
            }
            out = out.scaled(&(Q::one() / nf));
        }
    }
    Ok(out)
}

/// Checks the CL∞ structure equations of a skew family.
pub fn check_cl_infinity(fam: &BracketFamily, mode: SumMode) -> Result<CheckReport> {
    if !fam.skew {
        return Err(Error::NotSkew);
    }
    let arities = fam.arities();
    let mut report = CheckReport::default();
    for n in composite_arities(&arities, &arities) {
        for z in fam.ring.admissible_tuples(n)? {
            let r = cl_residual(fam, &z, mode)?;
            if !r.is_zero() {
                report.residuals.push(Residual { arity: n, tuple: z, module_basis: None, value: r });
            }
        }
    }
    Ok(report)
}

/// Residual matrix of the representation equations at a sorted admissible tuple.
pub fn representation_residual(
    rep: &RepresentationFamily,
    fam: &BracketFamily,
    z: &[usize],
    mode: SumMode,
) -> Result<Matrix> {
    let ring = &fam.ring;
    let n = z.len();
    let rho_ar = rep.arities();
    let l_ar = fam.arities();
    let mut out = Matrix::zeros(rep.module_dim);
    match mode {
        SumMode::Unshuffle => {
            for &k1 in &rho_ar {
                if k1 >= n || !rho_ar.contains(&(n - k1)) {
                    continue;
                }
                for (p, rest) in unshuffles(n, k1) {
                    let a = pick(z, &p);
                    let b = pick(z, &rest);
                    let mut word = a.clone();
                    word.extend_from_slice(&b);
                    let s = exchange_sign(ring, &word);
                    if s == 0 {
                        continue;
                    }
                    out.add_scaled(&rep.eval(&a).mul(&rep.eval(&b)), &Q::from_integer(s.into()));
                }
            }
            for &m in &l_ar {
                if m > n || !rho_ar.contains(&(n + 1 - m)) {
                    continue;
                }
                for (p, rest) in unshuffles(n, m) {
                    let inner = pick(z, &p);
                    let outer = pick(z, &rest);
                    let mut word = inner.clone();
                    word.extend_from_slice(&outer);
                    let s = exchange_sign(ring, &word);
                    if s == 0 {
                        continue;
                    }
                    let y = fam.eval(&inner);
                    if y.is_zero() {
                        continue;
                    }
                    out.add_scaled(&rep.eval_inserted(&[], &y, &outer), &Q::from_integer((-s).into()));
                }
            }
        }
        SumMode::FullSymmetric => {
            let nf = factorial(n);
            for p in all_permutations(n)? {
                let w = p.apply(z);
                let kw = exchange_sign(ring, &w);
                if kw == 0 {
                    continue;
                }
                let kwq = Q::from_integer(kw.into());
                for &k1 in &rho_ar {
                    if k1 >= n || !rho_ar.contains(&(n - k1)) {
                        continue;
                    }
                    let weight = &nf / (factorial(k1) * factorial(n - k1));
                    out.add_scaled(&rep.eval(&w[..k1]).mul(&rep.eval(&w[k1..])), &(&weight * &kwq));
                }
                for &m in &l_ar {
                    if m > n || !rho_ar.contains(&(n + 1 - m)) {
                        continue;
                    }
                    let k = n + 1 - m;
                    let weight = &nf / (factorial(k) * factorial(m));
                    for l in 0..k {
                        let y = fam.eval(&w[l..l + m]);
                        if y.is_zero() {
                            continue;
                        }
                        let s = -prefix_sign(ring, &w[..l]) * kw;
                        let mat = rep.eval_inserted(&w[..l], &y, &w[l + m..]);
                        out.add_scaled(&mat, &(&weight * Q::from_integer(s.into())));
                    }
                }
            }
            out = out.scaled(&(Q::one() / nf));
        }
    }
    Ok(out)
}

fn check_rep_shapes(rep: &RepresentationFamily, fam: &BracketFamily) -> Result<()> {
    if !(Arc::ptr_eq(&rep.ring, &fam.ring) || rep.ring == fam.ring) {
        return Err(Error::BasisMismatch);
    }
    Ok(())
}

/// Checks the linear representation equations of a skew pair `(ρ, l)`.
pub fn check_representation(
    rep: &RepresentationFamily,
    fam: &BracketFamily,
    mode: SumMode,
) -> Result<CheckReport> {
    check_rep_shapes(rep, fam)?;
    if !fam.skew || !rep.skew {
        return Err(Error::NotSkew);
    }
    let mut report = CheckReport::default();
    if !check_cl_infinity(fam, SumMode::Unshuffle)?.passed() {
        report.warnings.push("bracket family does not satisfy the CL∞ equations".into());
    }
    let rho = rep.arities();
    let mut totals: BTreeSet<usize> = rho.iter().flat_map(|a| rho.iter().map(move |b| a + b)).collect();
    totals.extend(composite_arities(&fam.arities(), &rho));
    for n in totals {
        for z in fam.ring.admissible_tuples(n)? {
            let r = representation_residual(rep, fam, &z, mode)?;
            for f in 0..rep.module_dim {
                let col = Vector(r.rows.iter().map(|row| row[f].clone()).collect());
                if !col.is_zero() {
                    report.residuals.push(Residual {
                        arity: n,
                        tuple: z.clone(),
                        module_basis: Some(f),
                        value: col,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Ordered GA∞ / A∞ residual at an arbitrary tuple `x`:
/// `Σ_{i+j=n+1} Σ_l (-1)^{gdeg(x_1)+…+gdeg(x_{l-1})} m_i(x_{<l}, m_j(x_l…), x_{>})`.
pub fn ga_residual(fam: &BracketFamily, x: &[usize]) -> Vector {
    let ring = &fam.ring;
    let n = x.len();
    let arities = fam.arities();
    let mut out = Vector::zeros(fam.dim());
    for &j in &arities {
        if j > n {
            continue;
        }
        let i = n + 1 - j;
        if !arities.contains(&i) {
            continue;
        }
        for l in 0..i {
            let y = fam.eval(&x[l..l + j]);
            if y.is_zero() {
                continue;
            }
            let s = prefix_sign(ring, &x[..l]);
            out.add_scaled(&fam.eval_inserted(&x[..l], &y, &x[l + j..]), &Q::from_integer(s.into()));
        }
    }
    out
}

/// Checks the GA∞ structure equations on every ordered input tuple.
pub fn check_ga_infinity(fam: &BracketFamily) -> Result<CheckReport> {
    let arities = fam.arities();
    let mut report = CheckReport::default();
    for n in composite_arities(&arities, &arities) {
        for x in fam.ring.all_tuples(n)? {
            let r = ga_residual(fam, &x);
            if !r.is_zero() {
                report.residuals.push(Residual { arity: n, tuple: x, module_basis: None, value: r });
            }
        }
    }
    Ok(report)
}

/// Graded symmetrization of the ordered GA∞ residuals,
/// `(1/n!) Σ_σ κ(σ) R(x_σ)` at each sorted admissible tuple.
pub fn ga_symmetrized_residual(fam: &BracketFamily, z: &[usize]) -> Result<Vector> {
    let n = z.len();
    let mut out = Vector::zeros(fam.dim());
    for p in all_permutations(n)? {
        let w = p.apply(z);
        let k = exchange_sign(&fam.ring, &w);
        if k == 0 {
            continue;
        }
        out.add_scaled(&ga_residual(fam, &w), &Q::from_integer(k.into()));
    }
    Ok(out.scaled(&(Q::one() / factorial(n))))
}

/// Ordered residual of the GA∞ representation equations.
pub fn ga_representation_residual(rep: &RepresentationFamily, fam: &BracketFamily, x: &[usize]) -> Matrix {
    let ring = &fam.ring;
    let n = x.len();
    let rho = rep.arities();
    let mut out = Matrix::zeros(rep.module_dim);
    for &k1 in &rho {
        if k1 < n && rho.contains(&(n - k1)) {
            out.add_scaled(&rep.eval(&x[..k1]).mul(&rep.eval(&x[k1..])), &Q::one());
        }
    }
    for &m in &fam.arities() {
        if m > n || !rho.contains(&(n + 1 - m)) {
            continue;
        }
        let k = n + 1 - m;
        for l in 0..k {
            let y = fam.eval(&x[l..l + m]);
            if y.is_zero() {
                continue;
            }
            let s = -prefix_sign(ring, &x[..l]);
            out.add_scaled(&rep.eval_inserted(&x[..l], &y, &x[l + m..]), &Q::from_integer(s.into()));
        }
    }
    out
}

pub fn check_ga_representation(rep: &RepresentationFamily, fam: &BracketFamily) -> Result<CheckReport> {
    check_rep_shapes(rep, fam)?;
    let mut report = CheckReport::default();
    if !check_ga_infinity(fam)?.passed() {
        report.warnings.push("family does not satisfy the GA∞ equations".into());
    }
    let rho = rep.arities();
    let mut totals: BTreeSet<usize> = rho.iter().flat_map(|a| rho.iter().map(move |b| a + b)).collect();
    totals.extend(composite_arities(&fam.arities(), &rho));
    for n in totals {
        for x in fam.ring.all_tuples(n)? {
            let r = ga_representation_residual(rep, fam, &x);
            for f in 0..rep.module_dim {
                let col = Vector(r.rows.iter().map(|row| row[f].clone()).collect());
                if !col.is_zero() {
                    report.residuals.push(Residual {
                        arity: n,
                        tuple: x.clone(),
                        module_basis: Some(f),
                        value: col,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Left multiplication `ρ(a)b = m_2(a, b)` as a representation of the algebra on itself.
pub fn left_regular_representation(alg: &BracketFamily) -> Result<RepresentationFamily> {
    let d = alg.dim();
    let mut rep = RepresentationFamily::new(&alg.ring, d, false);
    for a in 0..d {
        let mut m = Matrix::zeros(d);
        for b in 0..d {
            let prod = alg.eval(&[a, b]);
            for (j, c) in prod.0.iter().enumerate() {
                m.rows[j][b] = c.clone();
            }
        }
        if !m.is_zero() {
            rep.set(&[a], m)?;
        }
    }
    Ok(rep)
}

impl BracketFamily {
    /// Transports the brackets along a degree-preserving change of basis:
    /// `l'(e_{t_1},…) = g⁻¹ l(g e_{t_1},…)`, where column `i` of `g` holds the
    /// old coordinates of the new basis vector `i`.
    pub fn transformed(&self, g: &Matrix, g_inv: &Matrix) -> Result<Self> {
        let d = self.dim();
        if g.dim != d || g_inv.dim != d || !g.mul(g_inv).eq(&Matrix::identity(d)) {
            return Err(Error::Dimension("basis change must be an invertible dim × dim matrix".into()));
        }
        let basis = self.ring.basis();
        for i in 0..d {
            for j in 0..d {
                if !g.rows[i][j].is_zero() && basis.vdeg(i) != basis.vdeg(j) {
                    return Err(Error::Invalid("basis change must preserve degrees".into()));
                }
            }
        }
        let mut out = BracketFamily::new(&self.ring, self.skew);
        for n in self.arities() {
            let targets = if self.skew { self.ring.admissible_tuples(n)? } else { self.ring.all_tuples(n)? };
            for t in targets {
                let mut acc = Vector::zeros(d);
                let columns: Vec<Vec<(usize, Q)>> = t
                    .iter()
                    .map(|&ti| (0..d).filter(|&a| !g.rows[a][ti].is_zero()).map(|a| (a, g.rows[a][ti].clone())).collect())
                    .collect();
                for choice in columns.iter().multi_cartesian_product() {
                    let word: Vec<usize> = choice.iter().map(|(a, _)| *a).collect();
                    let coef = choice.iter().fold(Q::one(), |acc, (_, c)| acc * c);
                    acc.add_scaled(&self.eval(&word), &coef);
                }
                let v = g_inv.apply(&acc);
                if !v.is_zero() {
                    out.set(&t, v)?;
                }
            }
        }
        Ok(out)
    }
}

impl RepresentationFamily {
    /// `ρ'(e_{t_1},…) = ρ(g e_{t_1},…)` for a degree-preserving basis change `g` of `V`.
    pub fn transformed(&self, g: &Matrix) -> Result<Self> {
        let d = self.ring.dim();
        if g.dim != d {
            return Err(Error::Dimension("basis change must be dim × dim".into()));
        }
        let mut out = RepresentationFamily::new(&self.ring, self.module_dim, self.skew);
        for n in self.arities() {
            let targets = if self.skew { self.ring.admissible_tuples(n)? } else { self.ring.all_tuples(n)? };
            for t in targets {
                let mut acc = Matrix::zeros(self.module_dim);
                let columns: Vec<Vec<(usize, Q)>> = t
                    .iter()
                    .map(|&ti| (0..d).filter(|&a| !g.rows[a][ti].is_zero()).map(|a| (a, g.rows[a][ti].clone())).collect())
                    .collect();
                for choice in columns.iter().multi_cartesian_product() {
                    let word: Vec<usize> = choice.iter().map(|(a, _)| *a).collect();
                    let coef = choice.iter().fold(Q::one(), |acc, (_, c)| acc * c);
                    acc.add_scaled(&self.eval(&word), &coef);
                }
                if !acc.is_zero() {
                    out.set(&t, acc)?;
                }
            }
        }
        Ok(out)
    }
}

impl BracketFamily {
    /// The same brackets over another ring with an identical basis and convention,
    /// typically one with different enumeration limits.
    pub fn rebased(&self, ring: &Arc<GhostRing>) -> Result<Self> {
        if ring.basis() != self.ring.basis() || ring.convention() != self.ring.convention() {
            return Err(Error::BasisMismatch);
        }
        Ok(BracketFamily { ring: ring.clone(), skew: self.skew, entries: self.entries.clone() })
    }
}

impl RepresentationFamily {
    pub fn rebased(&self, ring: &Arc<GhostRing>) -> Result<Self> {
        if ring.basis() != self.ring.basis() || ring.convention() != self.ring.convention() {
            return Err(Error::BasisMismatch);
        }
        Ok(RepresentationFamily { ring: ring.clone(), module_dim: self.module_dim, skew: self.skew, maps: self.maps.clone() })
    }
}
