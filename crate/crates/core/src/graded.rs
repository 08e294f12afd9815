//! Permutations, Koszul signs and the graded (anti)symmetrization operators.
//!
//! Permutations are stored in one-line form over `0..n`. Acting on a list
//! `x`, a permutation `p` produces `y[i] = x[p[i]]`.

use crate::rational::Q;
use crate::{Error, Result};
use itertools::Itertools;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

/// Largest symmetric group we are willing to enumerate.
pub const MAX_ENUMERATED_ORDER: usize = 8;

/// Which sign rule governs the ghost ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// `η^a η^b = -(-1)^{vdeg_a vdeg_b} η^b η^a`.
    #[default]
    Primary,
    /// Super-commutative in ghost degree: `η^a η^b = (-1)^{gdeg_a gdeg_b} η^b η^a`.
    StandardKoszul,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Primary => "primary",
            Convention::StandardKoszul => "standard-koszul",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub vdeg: u32,
}

/// Ordered list of named generators with internal degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl GradedBasis {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let mut generators = Vec::new();
        let mut index = HashMap::new();
        for (name, vdeg) in gens {
            let name = name.into();
            if index.insert(name.clone(), generators.len()).is_some() {
                return Err(Error::DuplicateGenerator(name));
            }
            generators.push(Generator { name, vdeg });
        }
        Ok(GradedBasis { generators, index })
    }

    /// All generators of internal degree zero, the classical Lie case.
    pub fn classical(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().map(|n| (*n, 0)))
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn check(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(i))
        }
    }

    pub fn vdeg(&self, i: usize) -> i64 {
        self.generators[i].vdeg as i64
    }

    /// Ghost degree `vdeg + 1`.
    pub fn gdeg(&self, i: usize) -> i64 {
        self.vdeg(i) + 1
    }

    /// Ghost parity, `gdeg mod 2`.
    pub fn parity(&self, i: usize) -> u8 {
        (self.gdeg(i) % 2) as u8
    }

    pub fn is_classical(&self) -> bool {
        self.generators.iter().all(|g| g.vdeg == 0)
    }

    pub fn vdegs(&self) -> Vec<i64> {
        (0..self.len()).map(|i| self.vdeg(i)).collect()
    }

    pub fn gdegs(&self) -> Vec<i64> {
        (0..self.len()).map(|i| self.gdeg(i)).collect()
    }

    /// Relabels generators: new generator `i` is old generator `perm[i]`.
    pub fn permuted(&self, perm: &Permutation) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: perm.len() });
        }
        Self::new(perm.apply(&self.generators).into_iter().map(|g| (g.name, g.vdeg)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::MalformedPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inversions(&self) -> usize {
        let p = &self.0;
        (0..p.len())
            .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count()
    }

    /// `(-1)^σ`.
    pub fn parity(&self) -> i8 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }

    /// Function composition `(self ∘ other)(i) = self(other(i))`.
    ///
    /// Acting on lists, `(σ ∘ τ).apply(x) == τ.apply(&σ.apply(x))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn apply<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        self.0.iter().map(|&i| xs[i].clone()).collect()
    }

    /// Koszul sign `e(σ)`: one factor `(-1)^{d_i d_j}` for every pair of
    /// entries whose relative order the permutation reverses.
    pub fn koszul(&self, degrees: &[i64]) -> Result<i8> {
        if degrees.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: degrees.len() });
        }
        let p = &self.0;
        let mut odd = 0u32;
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                if p[a] > p[b] && (degrees[p[a]] * degrees[p[b]]).rem_euclid(2) == 1 {
                    odd += 1;
                }
            }
        }
        Ok(if odd.is_multiple_of(2) { 1 } else { -1 })
    }
}

pub fn permutation_parity(perm: &[usize]) -> Result<i8> {
    Ok(Permutation::new(perm.to_vec())?.parity())
}

pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<i8> {
    Permutation::new(perm.to_vec())?.koszul(degrees)
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Result<Vec<Permutation>> {
    if n > MAX_ENUMERATED_ORDER {
        return Err(Error::PermutationTooLarge(n));
    }
    Ok((0..n).permutations(n).map(Permutation).collect())
}

/// Sparse coefficient family `f_{a_1..a_n}` on index tuples of fixed arity.
/// Missing tuples are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexedFamily {
    pub arity: usize,
    pub values: BTreeMap<Vec<usize>, Q>,
}

impl IndexedFamily {
    pub fn new(arity: usize) -> Self {
        IndexedFamily { arity, values: BTreeMap::new() }
    }

    pub fn get(&self, tuple: &[usize]) -> Q {
        self.values.get(tuple).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, tuple: Vec<usize>, value: Q) {
        if value.is_zero() {
            self.values.remove(&tuple);
        } else {
            self.values.insert(tuple, value);
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut out = IndexedFamily::new(self.arity);
        for (t, v) in &self.values {
            out.set(t.clone(), v * c);
        }
        out
    }
}

fn graded_sum(f: &IndexedFamily, degree_of: &[i64], with_parity: bool) -> Result<IndexedFamily> {
    let n = f.arity;
    let perms = all_permutations(n)?;
    let mut out = IndexedFamily::new(n);
    // Only tuples that are permutations of stored tuples can be nonzero.
    let mut targets: Vec<Vec<usize>> = Vec::new();
    for t in f.values.keys() {
        if let Some(&bad) = t.iter().find(|&&a| a >= degree_of.len()) {
            return Err(Error::UnknownGenerator(bad));
        }
        for p in &perms {
            targets.push(p.apply(t));
        }
    }
    targets.sort();
    targets.dedup();
    for a in targets {
        let degs: Vec<i64> = a.iter().map(|&i| degree_of[i]).collect();
        let mut acc = Q::zero();
        for p in &perms {
            let v = f.get(&p.apply(&a));
            if v.is_zero() {
                continue;
            }
            let mut s = p.koszul(&degs)?;
            if with_parity {
                s *= p.parity();
            }
            if s > 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        out.set(a, acc);
    }
    Ok(out)
}

/// `Ŝ f_{a} = Σ_σ (-1)^σ e(σ) f_{σ(a)}`; `degree_of[i]` is the degree of index `i`.
pub fn antisymmetrize(f: &IndexedFamily, degree_of: &[i64]) -> Result<IndexedFamily> {
    graded_sum(f, degree_of, true)
}

/// `S̃ f_{a} = Σ_σ e(σ) f_{σ(a)}`.
pub fn symmetrize(f: &IndexedFamily, degree_of: &[i64]) -> Result<IndexedFamily> {
    graded_sum(f, degree_of, false)
}
