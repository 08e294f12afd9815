//! Exact rational scalars and small dense helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k))
}

/// Parses `"p"` or `"p/q"`. Zero denominators are rejected.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn sign_q(s: i8) -> Q {
    q(s as i64)
}

/// Dense vector with exact coordinates. Used for module-valued coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(pub Vec<Q>);

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Q::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Q::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b * c;
        }
    }

    pub fn scaled(&self, c: &Q) -> Vector {
        Vector(self.0.iter().map(|x| x * c).collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Square matrix over Q stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub dim: usize,
    pub rows: Vec<Vec<Q>>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, rows: vec![vec![Q::zero(); dim]; dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.rows[i][i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> crate::Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(crate::Error::Dimension("matrix is not square".into()));
        }
        Ok(Matrix { dim, rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
            .expect("square integer matrix")
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector(
            self.rows
                .iter()
                .map(|row| row.iter().zip(&v.0).fold(Q::zero(), |acc, (a, b)| acc + a * b))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.rows[i][j] += &self.rows[i][k] * &other.rows[k][j];
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Matrix, c: &Q) {
        for (ra, rb) in self.rows.iter_mut().zip(&other.rows) {
            for (a, b) in ra.iter_mut().zip(rb) {
                *a += b * c;
            }
        }
    }

    pub fn scaled(&self, c: &Q) -> Matrix {
        let mut m = Matrix::zeros(self.dim);
        m.add_scaled(self, c);
        m
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}
