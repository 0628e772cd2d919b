//! Exact normal-form computations in `O_{F,G}(T^d)`, the universal C*-algebra generated by
//! commuting unitaries `U_1, ..., U_d` and an isometry `S` with
//!
//! 1. `S* U^nu S = delta_{nu,0}` for `nu` in `I(F)`,
//! 2. `U_j^{a_j} S = S U^{G_j}`,
//! 3. `sum_{nu in I(F)} U^nu S S* U^{-nu} = 1`.
//!
//! Every element is stored as a finite sum of terms `S_alpha U^nu S_beta*` with
//! Gaussian-rational coefficients, where `S_mu = U^mu S` and `S_alpha = S_{alpha_1} ... S_{alpha_k}`.
//! Multi-indices in `I(F)` are stored as their rank in [`index_set`](crate::torquiver::index_set).

mod element;
mod level;
mod rewrite;
mod verify;
mod word;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub use element::{AlgebraElement, NormalTerm};
pub use level::{LaurentMatrix, LaurentPoly};
pub use verify::{
    verify_colimit_diagram, verify_crossed_product, verify_matrix_units, verify_power_quotient,
    verify_presentation, verify_subalgebra_generators, verify_twisted_family, Check,
    SubalgebraWitness, VerifyReport,
};
pub use word::{parse_word_sum, random_words, GeneratorWord, Letter, WordSum};

use crate::error::{Error, Result};
use crate::torquiver::{MultiIndex, TorusQuiverSpec};

/// Gaussian rational `re + im*i`.
pub type Coeff = Complex<BigRational>;

pub fn coeff(re: i64, im: i64) -> Coeff {
    Complex::new(
        BigRational::from_integer(re.into()),
        BigRational::from_integer(im.into()),
    )
}

pub(crate) struct Ctx {
    spec: TorusQuiverSpec,
    a: Vec<i64>,
    g: Vec<Vec<i64>>,
    adj_g: Vec<Vec<i64>>,
    det_g: i64,
    n: usize,
}

impl Ctx {
    pub(crate) fn d(&self) -> usize {
        self.a.len()
    }

    pub(crate) fn decode(&self, rank: usize) -> Vec<i64> {
        let mut out = vec![0; self.d()];
        let mut r = rank as i64;
        for j in (0..self.d()).rev() {
            out[j] = r % self.a[j];
            r /= self.a[j];
        }
        out
    }

    /// Rank of `v`, which must lie in `I(F)`.
    pub(crate) fn encode(&self, v: &[i64]) -> usize {
        v.iter()
            .zip(&self.a)
            .fold(0i64, |acc, (&x, &a)| acc * a + x) as usize
    }

    pub(crate) fn in_index_set(&self, v: &[i64]) -> bool {
        v.len() == self.d() && v.iter().zip(&self.a).all(|(&x, &a)| (0..a).contains(&x))
    }

    /// `w = lambda + F q` with `lambda` in `I(F)` (floored division).
    pub(crate) fn split(&self, w: &[i64]) -> (usize, Vec<i64>) {
        let mut lambda = 0i64;
        let mut q = Vec::with_capacity(self.d());
        for (&x, &a) in w.iter().zip(&self.a) {
            lambda = lambda * a + x.rem_euclid(a);
            q.push(x.div_euclid(a));
        }
        (lambda as usize, q)
    }

    /// `qG = sum_j q_j G_j`.
    pub(crate) fn row_times_g(&self, q: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.d()];
        for (qj, row) in q.iter().zip(&self.g) {
            if *qj != 0 {
                for (o, b) in out.iter_mut().zip(row) {
                    *o += qj * b;
                }
            }
        }
        out
    }

    /// Integer row vector `q` with `qG = target`, if there is one.
    pub(crate) fn solve_row_g(&self, target: &[i64]) -> Option<Vec<i64>> {
        (0..self.d())
            .map(|m| {
                let s: i64 = target
                    .iter()
                    .zip(&self.adj_g)
                    .map(|(t, row)| t * row[m])
                    .sum();
                (s % self.det_g == 0).then_some(s / self.det_g)
            })
            .collect()
    }

    /// `U^nu S_mu = S_lambda U^{qG}` where `nu + mu = lambda + F q`.
    pub(crate) fn push(&self, nu: &[i64], mu: usize) -> (usize, Vec<i64>) {
        let m = self.decode(mu);
        let w: Vec<i64> = nu.iter().zip(&m).map(|(x, y)| x + y).collect();
        let (lambda, q) = self.split(&w);
        (lambda, self.row_times_g(&q))
    }

    /// `U^nu S_path = S_path' U^nu'`.
    pub(crate) fn push_path(&self, nu: &[i64], path: &[usize]) -> (Vec<usize>, Vec<i64>) {
        let mut cur = nu.to_vec();
        let mut out = Vec::with_capacity(path.len());
        for &mu in path {
            let (lambda, next) = self.push(&cur, mu);
            out.push(lambda);
            cur = next;
        }
        (out, cur)
    }
}

/// The algebra `O_{F,G}(T^d)` for a fixed spec with positive diagonal `F`.
#[derive(Clone)]
pub struct Algebra(Arc<Ctx>);

impl Algebra {
    pub fn new(spec: TorusQuiverSpec) -> Result<Self> {
        let det = spec.det_g();
        let det_g = det
            .to_i64()
            .ok_or_else(|| Error::domain("det G does not fit in 64 bits"))?;
        let adj_g = spec.g().adjugate().to_i64_rows()?;
        Ok(Algebra(Arc::new(Ctx {
            a: spec.a().to_vec(),
            g: spec.g_rows().to_vec(),
            adj_g,
            det_g,
            n: spec.n(),
            spec,
        })))
    }

    /// `F = diag(a)`, `G` by rows.
    pub fn from_diag(a: &[i64], g_rows: &[Vec<i64>]) -> Result<Self> {
        Algebra::new(TorusQuiverSpec::from_diag(a, g_rows)?)
    }

    pub(crate) fn ctx(&self) -> &Ctx {
        &self.0
    }

    pub fn spec(&self) -> &TorusQuiverSpec {
        &self.0.spec
    }

    pub fn d(&self) -> usize {
        self.0.d()
    }

    /// `N = |I(F)|`.
    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn det_g(&self) -> BigInt {
        self.0.det_g.into()
    }

    pub fn same_as(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }

    pub(crate) fn check_same(&self, other: &Algebra) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "elements belong to different algebras ({self} and {other})"
            )))
        }
    }

    /// The multi-index with the given rank.
    pub fn index(&self, rank: usize) -> MultiIndex {
        MultiIndex(self.0.decode(rank))
    }

    pub fn rank(&self, nu: &[i64]) -> Result<usize> {
        if self.0.in_index_set(nu) {
            Ok(self.0.encode(nu))
        } else {
            Err(Error::domain(format!("{nu:?} is not in I(F)")))
        }
    }

    /// All paths of length `k` in `I(F)^k`, lexicographic.
    pub fn paths(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..self.n()).map(move |mu| {
                        let mut q = p.clone();
                        q.push(mu);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O(F = {}, G = {})", self.0.spec.f(), self.0.spec.g())
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
