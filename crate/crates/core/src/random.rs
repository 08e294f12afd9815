//! Seeded random instances for property tests and the acceptance suite.

use crate::ghost_ring::GhostRing;
use crate::graded::{Convention, GradedBasis};
use crate::linalg::inverse;
use crate::linf::{BracketFamily, RepresentationFamily};
use crate::rational::{q, Matrix, Vector};
use crate::Result;
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

/// Classical basis `x1..xn`, or degrees drawn from `{0, 1}` when `graded`.
pub fn basis<R: Rng>(rng: &mut R, dim: usize, graded: bool) -> GradedBasis {
    let gens = (0..dim).map(|i| (format!("x{}", i + 1), if graded { rng.gen_range(0..2u32) } else { 0 }));
    GradedBasis::new(gens).expect("generated names are distinct")
}

pub fn ring<R: Rng>(rng: &mut R, dim: usize, graded: bool, convention: Convention) -> Arc<GhostRing> {
    GhostRing::new(basis(rng, dim, graded), convention)
}

fn small_nonzero<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// Generators whose internal degree equals `degree`.
fn of_degree(ring: &GhostRing, degree: i64) -> Vec<usize> {
    (0..ring.dim()).filter(|&j| ring.basis().vdeg(j) == degree).collect()
}

/// Homogeneous skew brackets; every admissible tuple of each chosen arity
/// gets a nonzero value with probability `density`.
pub fn brackets<R: Rng>(
    rng: &mut R,
    ring: &Arc<GhostRing>,
    arities: &[usize],
    density: f64,
    bound: i64,
) -> Result<BracketFamily> {
    let mut fam = BracketFamily::new(ring, true);
    for &k in arities {
        for t in ring.admissible_tuples(k)? {
            let degree: i64 = t.iter().map(|&i| ring.basis().vdeg(i)).sum::<i64>() + k as i64 - 2;
            let targets = of_degree(ring, degree);
            if targets.is_empty() || !rng.gen_bool(density) {
                continue;
            }
            let mut v = Vector::zeros(ring.dim());
            for &j in &targets {
                if rng.gen_bool(0.6) {
                    v.0[j] = q(rng.gen_range(-bound..=bound));
                }
            }
            fam.set(&t, v)?;
        }
    }
    Ok(fam)
}

/// Skew representation maps of the given arities on a module of dimension `module_dim`.
pub fn representation<R: Rng>(
    rng: &mut R,
    ring: &Arc<GhostRing>,
    module_dim: usize,
    arities: &[usize],
    density: f64,
    bound: i64,
) -> Result<RepresentationFamily> {
    let mut rep = RepresentationFamily::new(ring, module_dim, true);
    for &k in arities {
        for t in ring.admissible_tuples(k)? {
            if !rng.gen_bool(density) {
                continue;
            }
            let mut m = Matrix::zeros(module_dim);
            for row in m.rows.iter_mut() {
                for x in row.iter_mut() {
                    if rng.gen_bool(0.4) {
                        *x = q(rng.gen_range(-bound..=bound));
                    }
                }
            }
            rep.set(&t, m)?;
        }
    }
    Ok(rep)
}

/// A random invertible degree-preserving basis change and its inverse.
pub fn basis_change<R: Rng>(rng: &mut R, ring: &GhostRing, bound: i64) -> (Matrix, Matrix) {
    let d = ring.dim();
    loop {
        let mut g = Matrix::identity(d);
        for i in 0..d {
            for j in 0..d {
                if i != j && ring.basis().vdeg(i) == ring.basis().vdeg(j) && rng.gen_bool(0.5) {
                    g.rows[i][j] = q(rng.gen_range(-bound..=bound));
                }
            }
        }
        if let Some(inv) = inverse(&g) {
            return (g, inv);
        }
    }
}

/// Adds a nonzero multiple of one generator to one bracket value, keeping
/// homogeneity. Returns `None` if no admissible entry exists.
pub fn perturb_one<R: Rng>(rng: &mut R, fam: &BracketFamily, arity: usize, bound: i64) -> Result<Option<BracketFamily>> {
    let ring = fam.ring();
    let mut slots = Vec::new();
    for t in ring.admissible_tuples(arity)? {
        let degree: i64 = t.iter().map(|&i| ring.basis().vdeg(i)).sum::<i64>() + arity as i64 - 2;
        for j in of_degree(ring, degree) {
            slots.push((t.clone(), j));
        }
    }
    let Some((t, j)) = slots.choose(rng).cloned() else {
        return Ok(None);
    };
    let mut v = fam.eval(&t);
    v.0[j] += q(small_nonzero(rng, bound));
    let mut out = fam.clone();
    out.set(&t, v)?;
    Ok(Some(out))
}
