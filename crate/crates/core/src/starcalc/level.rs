//! The levels `A_k`, matrix units, the endomorphism `rho` and matrices over Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::element::{accumulate, AlgebraElement, NormalTerm, Terms};
use super::word::write_scaled;
use super::{Algebra, Coeff};
use crate::error::{Error, Result};

/// A finite sum `sum c_nu U^nu`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly(BTreeMap<Vec<i64>, Coeff>);

impl LaurentPoly {
    pub fn monomial(nu: Vec<i64>, c: Coeff) -> Self {
        let mut p = LaurentPoly::default();
        p.add_term(nu, c);
        p
    }

    pub fn add_term(&mut self, nu: Vec<i64>, c: Coeff) {
        let e = self.0.entry(nu.clone()).or_insert_with(Coeff::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&nu);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Coeff)> {
        self.0.iter()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (nu, c) in &other.0 {
            out.add_term(nu.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (a, ca) in &self.0 {
            for (b, cb) in &other.0 {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (nu, c) in &self.0 {
            let body = nu
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("U{}", j + 1)
                    } else {
                        format!("U{}^{e}", j + 1)
                    }
                })
                .collect::<Vec<_>>()
                .join(" ");
            write_scaled(&mut out, c, &body, &mut first);
        }
        if first {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// An `N^k x N^k` matrix over the Laurent ring, rows and columns indexed by
/// `I(F)^k` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    pub k: usize,
    pub size: usize,
    entries: BTreeMap<(usize, usize), LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(n: usize, k: usize) -> Self {
        LaurentMatrix {
            k,
            size: n.pow(k as u32),
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, k: usize, d: usize) -> Self {
        let mut m = LaurentMatrix::zeros(n, k);
        for i in 0..m.size {
            m.entries
                .insert((i, i), LaurentPoly::monomial(vec![0; d], Coeff::one()));
        }
        m
    }

    pub fn entry(&self, row: usize, col: usize) -> LaurentPoly {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&(usize, usize), &LaurentPoly)> {
        self.entries.iter()
    }

    pub fn add_to(&mut self, row: usize, col: usize, p: &LaurentPoly) {
        let sum = self.entry(row, col).add(p);
        if sum.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), sum);
        }
    }

    pub fn mul(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.size != other.size {
            return Err(Error::domain("matrix sizes differ"));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &LaurentPoly)>> = BTreeMap::new();
        for (&(r, c), p) in &other.entries {
            by_row.entry(r).or_default().push((c, p));
        }
        let mut out = LaurentMatrix {
            k: self.k,
            size: self.size,
            entries: BTreeMap::new(),
        };
        for (&(i, m), p) in &self.entries {
            for &(j, q) in by_row.get(&m).map(Vec::as_slice).unwrap_or(&[]) {
                out.add_to(i, j, &p.mul(q));
            }
        }
        Ok(out)
    }

    /// Whether every exponent lies in `F^k Z^d`, i.e. every entry is a polynomial in
    /// `W_j = U_j^{a_j^k}`.
    pub fn in_w_subring(&self, a: &[i64]) -> bool {
        self.entries.values().all(|p| {
            p.terms().all(|(nu, _)| {
                nu.iter()
                    .zip(a)
                    .all(|(&e, &aj)| e % aj.pow(self.k as u32) == 0)
            })
        })
    }
}

fn path_index(n: usize, path: &[usize]) -> usize {
    path.iter().fold(0, |acc, &x| acc * n + x)
}

fn index_path(n: usize, k: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

impl Algebra {
    /// `E_{alpha beta} = S_alpha S_beta*` for paths given as ranks.
    pub fn matrix_unit(&self, alpha: &[usize], beta: &[usize]) -> Result<AlgebraElement> {
        if alpha.len() != beta.len() {
            return Err(Error::domain(format!(
                "matrix unit needs paths of equal length, got {} and {}",
                alpha.len(),
                beta.len()
            )));
        }
        if let Some(bad) = alpha.iter().chain(beta).find(|&&r| r >= self.n()) {
            return Err(Error::domain(format!("rank {bad} is outside I(F)")));
        }
        Ok(self.monomial(NormalTerm {
            alpha: alpha.to_vec(),
            nu: vec![0; self.d()],
            beta: beta.to_vec(),
        }))
    }

    /// `x = sum S_alpha m(alpha, beta) S_beta*`.
    pub fn from_matrix(&self, m: &LaurentMatrix) -> AlgebraElement {
        let mut terms = Terms::new();
        for (&(r, c), p) in m.nonzero_entries() {
            let (alpha, beta) = (index_path(self.n(), m.k, r), index_path(self.n(), m.k, c));
            for (nu, coef) in p.terms() {
                accumulate(
                    &mut terms,
                    NormalTerm {
                        alpha: alpha.clone(),
                        nu: nu.clone(),
                        beta: beta.clone(),
                    },
                    coef.clone(),
                );
            }
        }
        AlgebraElement::from_terms(self, terms)
    }
}

fn not_in_level(k: usize) -> Error {
    Error::domain(format!("not in level-{k} algebra"))
}

impl AlgebraElement {
    /// `rho(S_alpha U^nu S_beta*) = S_(0,alpha) U^nu S_(0,beta)*` on degree-0 elements.
    pub fn rho(&self) -> Result<AlgebraElement> {
        let mut terms = Terms::new();
        for (t, c) in self.terms() {
            if t.degree() != 0 {
                return Err(Error::domain(format!(
                    "rho is defined on gauge degree 0, found a term of degree {}",
                    t.degree()
                )));
            }
            let mut alpha = vec![0];
            alpha.extend(&t.alpha);
            let mut beta = vec![0];
            beta.extend(&t.beta);
            accumulate(
                &mut terms,
                NormalTerm {
                    alpha,
                    nu: t.nu.clone(),
                    beta,
                },
                c.clone(),
            );
        }
        Ok(AlgebraElement::from_terms(self.algebra(), terms))
    }

    /// Matrix of a degree-0 element at level `k`, read off its expansion to shape `(k, k)`.
    pub fn to_matrix(&self, k: usize) -> Result<LaurentMatrix> {
        let alg = self.algebra();
        let x = self.canonicalize();
        if x.terms().any(|(t, _)| t.degree() != 0 || t.beta.len() > k) {
            return Err(not_in_level(k));
        }
        let expanded = x.expand_level(k, k)?;
        let mut m = LaurentMatrix::zeros(alg.n(), k);
        for (t, c) in expanded.terms() {
            m.add_to(
                path_index(alg.n(), &t.alpha),
                path_index(alg.n(), &t.beta),
                &LaurentPoly::monomial(t.nu.clone(), c.clone()),
            );
        }
        Ok(m)
    }

    /// Same matrix computed entrywise as `S_alpha* x S_beta`.
    pub fn to_matrix_by_compression(&self, k: usize) -> Result<LaurentMatrix> {
        let alg = self.algebra();
        let paths = alg.paths(k);
        let zero = vec![0; alg.d()];
        let mut m = LaurentMatrix::zeros(alg.n(), k);
        for beta in &paths {
            let right = self.multiply(&alg.monomial(NormalTerm {
                alpha: beta.clone(),
                nu: zero.clone(),
                beta: vec![],
            }))?;
            for alpha in &paths {
                let entry = alg
                    .monomial(NormalTerm {
                        alpha: vec![],
                        nu: zero.clone(),
                        beta: alpha.clone(),
                    })
                    .multiply(&right)?;
                let mut p = LaurentPoly::default();
                for (t, c) in entry.terms() {
                    if !t.alpha.is_empty() || !t.beta.is_empty() {
                        return Err(not_in_level(k));
                    }
                    p.add_term(t.nu.clone(), c.clone());
                }
                if !p.is_zero() {
                    m.add_to(path_index(alg.n(), alpha), path_index(alg.n(), beta), &p);
                }
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg23() -> Algebra {
        Algebra::from_diag(&[2], &[vec![3]]).unwrap()
    }

    #[test]
    fn matrix_units_sum_to_one() {
        let a = alg23();
        let mut sum = a.zero();
        for p in a.paths(2) {
            sum = sum.add(&a.matrix_unit(&p, &p).unwrap()).unwrap();
        }
        assert_eq!(sum.len(), 1);
        assert_eq!(sum, a.one());
        assert!(a.matrix_unit(&[0], &[0, 1]).is_err());
        let e = a.matrix_unit(&[0, 1], &[1, 1]).unwrap();
        assert_eq!(e.adjoint(), a.matrix_unit(&[1, 1], &[0, 1]).unwrap());
    }

    #[test]
    fn rho_examples() {
        let a = alg23();
        assert_eq!(a.one().rho().unwrap(), a.normalize_str("S S*").unwrap());
        assert_eq!(
            a.u_pow(&[1]).unwrap().rho().unwrap(),
            a.normalize_str("S U1 S*").unwrap()
        );
        assert_eq!(
            a.matrix_unit(&[1], &[0]).unwrap().rho().unwrap(),
            a.matrix_unit(&[0, 1], &[0, 0]).unwrap()
        );
        assert!(a.s().rho().is_err());
    }

    #[test]
    fn matrices() {
        let a = alg23();
        let m = a.matrix_unit(&[0], &[1]).unwrap().to_matrix(1).unwrap();
        assert_eq!(m.nonzero_entries().count(), 1);
        assert_eq!(m.entry(0, 1), LaurentPoly::monomial(vec![0], Coeff::one()));
        let m = a.normalize_str("U1^2 S S*").unwrap().to_matrix(1).unwrap();
        assert_eq!(m.entry(0, 0), LaurentPoly::monomial(vec![3], Coeff::one()));
        assert_eq!(m.nonzero_entries().count(), 1);
        assert_eq!(
            a.one().to_matrix(2).unwrap(),
            LaurentMatrix::identity(2, 2, 1)
        );
        assert!(a.s().to_matrix(1).is_err());
        assert!(a
            .matrix_unit(&[0, 0], &[0, 1])
            .unwrap()
            .to_matrix(1)
            .is_err());
    }

    #[test]
    fn both_matrix_routes_agree() {
        let a = alg23();
        for w in ["U1", "U1^-3 S S* + 2 S U1 S*", "1/2i S S U1^5 S* S*"] {
            let x = a.normalize_str(w).unwrap();
            assert_eq!(
                x.to_matrix(2).unwrap(),
                x.to_matrix_by_compression(2).unwrap(),
                "{w}"
            );
            assert_eq!(a.from_matrix(&x.to_matrix(2).unwrap()), x);
        }
        assert!(a.s().to_matrix_by_compression(1).is_err());
    }
}
