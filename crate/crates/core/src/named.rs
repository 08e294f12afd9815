//! Small named instances used by the corpus, the tests and the CLI.

use crate::derivations::{AlgebroidDerivation, CommutativeAlgebra};
use crate::ghost_ring::GhostRing;
use crate::graded::{Convention, GradedBasis};
use crate::linf::{brackets_from_lie, BracketFamily, RepresentationFamily};
use crate::rational::{q, Matrix, Vector};
use crate::Result;
use std::sync::Arc;

/// A bracket family with an optional representation.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub brackets: BracketFamily,
    pub representation: Option<RepresentationFamily>,
}

impl Instance {
    pub fn ring(&self) -> &Arc<GhostRing> {
        self.brackets.ring()
    }

    /// The representation, or the zero action on a one-dimensional module.
    pub fn representation_or_trivial(&self) -> RepresentationFamily {
        self.representation.clone().unwrap_or_else(|| RepresentationFamily::trivial(self.ring(), 1))
    }
}

fn sparse(dim: usize, entries: &[(usize, i64)]) -> Vector {
    let mut v = Vector::zeros(dim);
    for &(i, c) in entries {
        v.0[i] += q(c);
    }
    v
}

pub fn abelian(n: usize) -> Result<Instance> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = GhostRing::new(GradedBasis::classical(&refs)?, Convention::Primary);
    Ok(Instance { name: format!("abelian-{n}"), brackets: BracketFamily::new(&ring, true), representation: None })
}

/// `[x, y] = z`.
pub fn heisenberg3() -> Result<Instance> {
    let ring = GhostRing::new(GradedBasis::classical(&["x", "y", "z"])?, Convention::Primary);
    let brackets = brackets_from_lie(&ring, [((0, 1), sparse(3, &[(2, 1)]))])?;
    Ok(Instance { name: "heisenberg-3".into(), brackets, representation: None })
}

fn sl2_with(he: i64) -> Result<BracketFamily> {
    let ring = GhostRing::new(GradedBasis::classical(&["e", "f", "h"])?, Convention::Primary);
    brackets_from_lie(
        &ring,
        [
            ((0, 1), sparse(3, &[(2, 1)])),
            ((2, 0), sparse(3, &[(0, he)])),
            ((2, 1), sparse(3, &[(1, -2)])),
        ],
    )
}

/// `[e,f] = h, [h,e] = 2e, [h,f] = -2f`.
pub fn sl2() -> Result<Instance> {
    Ok(Instance { name: "sl2".into(), brackets: sl2_with(2)?, representation: None })
}

/// sl2 with its defining two-dimensional representation.
pub fn sl2_defining() -> Result<Instance> {
    let brackets = sl2_with(2)?;
    let mut rep = RepresentationFamily::new(brackets.ring(), 2, true);
    rep.set(&[0], Matrix::from_ints(&[&[0, 1], &[0, 0]]))?;
    rep.set(&[1], Matrix::from_ints(&[&[0, 0], &[1, 0]]))?;
    rep.set(&[2], Matrix::from_ints(&[&[1, 0], &[0, -1]]))?;
    Ok(Instance { name: "sl2-defining".into(), brackets, representation: Some(rep) })
}

/// sl2 acting on itself.
pub fn sl2_adjoint() -> Result<Instance> {
    let brackets = sl2_with(2)?;
    let mut rep = RepresentationFamily::new(brackets.ring(), 3, true);
    for a in 0..3 {
        let mut m = Matrix::zeros(3);
        for b in 0..3 {
            for (j, c) in brackets.eval(&[a, b]).0.into_iter().enumerate() {
                m.rows[j][b] = c;
            }
        }
        rep.set(&[a], m)?;
    }
    Ok(Instance { name: "sl2-adjoint".into(), brackets, representation: Some(rep) })
}

/// `[h,e] = 3e` breaks the Jacobi identity: the cyclic sum on `(e,f,h)` is `h`.
pub fn sl2_corrupted() -> Result<Instance> {
    Ok(Instance { name: "sl2-corrupted".into(), brackets: sl2_with(3)?, representation: None })
}

/// `(i, j, [(k, c)])`: the product of generators `i` and `j` is `Σ c·x_k`.
type ProductTable<'a> = [(usize, usize, &'a [(usize, i64)])];

fn associative(names: &[&str], products: &ProductTable) -> Result<Instance> {
    let ring = GhostRing::new(GradedBasis::classical(names)?, Convention::Primary);
    let mut m2 = BracketFamily::new(&ring, false);
    for &(a, b, out) in products {
        m2.set(&[a, b], sparse(names.len(), out))?;
    }
    let rep = crate::linf::left_regular_representation(&m2)?;
    Ok(Instance { name: String::new(), brackets: m2, representation: Some(rep) })
}

/// `Q[ε]/(ε²)` in the basis `1, ε`, acting on itself from the left.
pub fn dual_numbers() -> Result<Instance> {
    let mut inst = associative(&["one", "eps"], &[(0, 0, &[(0, 1)]), (0, 1, &[(1, 1)]), (1, 0, &[(1, 1)])])?;
    inst.name = "dual-numbers".into();
    Ok(inst)
}

/// Upper-triangular 2×2 matrices in the basis `E11, E12, E22`.
pub fn upper_triangular_2x2() -> Result<Instance> {
    let mut inst = associative(
        &["e11", "e12", "e22"],
        &[(0, 0, &[(0, 1)]), (0, 1, &[(1, 1)]), (1, 2, &[(1, 1)]), (2, 2, &[(2, 1)])],
    )?;
    inst.name = "upper-triangular-2x2".into();
    Ok(inst)
}

/// `m_2` that fails associativity: `(a a) a ≠ a (a a)` for `a a = b`, `b a = a`.
pub fn non_associative() -> Result<Instance> {
    let mut inst = associative(&["a", "b"], &[(0, 0, &[(1, 1)]), (1, 0, &[(0, 1)])])?;
    inst.name = "non-associative".into();
    Ok(inst)
}

/// Primary convention, `x` of internal degree 0 and `y` of degree 1, no
/// brackets, `ρ(x) = 1` and `ρ(y) = E12` on a 2-dimensional module.
pub fn mixed_primary() -> Result<Instance> {
    let ring = GhostRing::new(GradedBasis::new([("x", 0), ("y", 1)])?, Convention::Primary);
    let brackets = BracketFamily::new(&ring, true);
    let mut rep = RepresentationFamily::new(&ring, 2, true);
    rep.set(&[0], Matrix::identity(2))?;
    rep.set(&[1], Matrix::from_ints(&[&[0, 1], &[0, 0]]))?;
    Ok(Instance { name: "mixed-primary".into(), brackets, representation: Some(rep) })
}

/// Standard convention: the string extension of sl2 by a degree-1 generator
/// `c` through `l_3(e,f,h) = c`, plus a contractible pair `l_1(d) = u`, seen
/// in the basis `u' = u + h`, `d' = d + c`. All of `l_1, l_2, l_3` are nonzero.
pub fn string_sl2() -> Result<Instance> {
    let basis = GradedBasis::new([("e", 0), ("f", 0), ("h", 0), ("u", 0), ("c", 1), ("d", 1)])?;
    let ring = GhostRing::new(basis, Convention::StandardKoszul);
    let mut l = BracketFamily::new(&ring, true);
    l.set(&[0, 1], sparse(6, &[(2, 1)]))?;
    l.set(&[2, 0], sparse(6, &[(0, 2)]))?;
    l.set(&[2, 1], sparse(6, &[(1, -2)]))?;
    l.set(&[0, 1, 2], sparse(6, &[(4, 1)]))?;
    l.set(&[5], sparse(6, &[(3, 1)]))?;
    let mut g = Matrix::identity(6);
    g.rows[2][3] = q(1);
    g.rows[4][5] = q(1);
    let mut g_inv = Matrix::identity(6);
    g_inv.rows[2][3] = q(-1);
    g_inv.rows[4][5] = q(-1);
    let brackets = l.transformed(&g, &g_inv)?;
    Ok(Instance { name: "string-sl2".into(), brackets, representation: None })
}

/// Every classical and graded instance that satisfies its structure equations.
pub fn corpus() -> Result<Vec<Instance>> {
    Ok(vec![
        abelian(4)?,
        heisenberg3()?,
        sl2()?,
        sl2_defining()?,
        sl2_adjoint()?,
        mixed_primary()?,
        string_sl2()?,
    ])
}

/// Bundle of Lie algebras over `Q[x]/(x³)` spanned by `E = x d/dx` and `F = x² d/dx`
/// acting on the coefficients, with `[E, F] = k F`; nilpotent exactly when `k = 1`.
pub fn derivation_algebroid(k: i64) -> Result<AlgebroidDerivation> {
    let ring = GhostRing::new(GradedBasis::classical(&["E", "F"])?, Convention::Primary);
    let alg = CommutativeAlgebra::truncated_polynomials(3);
    let mut anchor = RepresentationFamily::new(&ring, 3, true);
    anchor.set(&[0], Matrix::from_ints(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 2]]))?;
    anchor.set(&[1], Matrix::from_ints(&[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]))?;
    let structure = vec![(1, vec![0, 1], sparse(3, &[(0, k)]))];
    AlgebroidDerivation::new(&ring, alg, structure, anchor)
}

/// Brackets `[E, F] = x F` with values in `Q[x]/(x²)` and anchor `ρ(E) = x d/dx`.
pub fn varying_bracket_algebroid() -> Result<AlgebroidDerivation> {
    let ring = GhostRing::new(GradedBasis::classical(&["E", "F"])?, Convention::Primary);
    let alg = CommutativeAlgebra::truncated_polynomials(2);
    let mut anchor = RepresentationFamily::new(&ring, 2, true);
    anchor.set(&[0], Matrix::from_ints(&[&[0, 0], &[0, 1]]))?;
    AlgebroidDerivation::new(&ring, alg, vec![(1, vec![0, 1], sparse(2, &[(1, 1)]))], anchor)
}
