use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::rewrite::rewrite_word;
use super::word::{write_scaled, WordSum};
use super::{Algebra, Coeff, Ctx};
use crate::error::{Error, Result};

/// `S_alpha U^nu S_beta*`; `alpha` and `beta` hold ranks of multi-indices in `I(F)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalTerm {
    pub alpha: Vec<usize>,
    pub nu: Vec<i64>,
    pub beta: Vec<usize>,
}

impl NormalTerm {
    pub fn identity(d: usize) -> Self {
        NormalTerm {
            alpha: vec![],
            nu: vec![0; d],
            beta: vec![],
        }
    }

    /// Gauge degree `|alpha| - |beta|`.
    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.alpha.len(), self.beta.len())
    }

    pub fn adjoint(&self) -> NormalTerm {
        NormalTerm {
            alpha: self.beta.clone(),
            nu: self.nu.iter().map(|x| -x).collect(),
            beta: self.alpha.clone(),
        }
    }

    fn key(&self) -> (i64, usize, &[usize], &[i64], &[usize]) {
        (
            self.degree(),
            self.beta.len(),
            &self.alpha,
            &self.nu,
            &self.beta,
        )
    }
}

impl Ord for NormalTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for NormalTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) type Terms = BTreeMap<NormalTerm, Coeff>;

pub(crate) fn accumulate(terms: &mut Terms, t: NormalTerm, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match terms.entry(t) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Product of two terms, `None` when it vanishes.
pub(crate) fn term_product(ctx: &Ctx, x: &NormalTerm, y: &NormalTerm) -> Option<NormalTerm> {
    let (beta, gamma) = (&x.beta, &y.alpha);
    if beta.len() <= gamma.len() {
        // S_beta* S_gamma = S_{gamma tail} when beta is a prefix of gamma
        if gamma[..beta.len()] != beta[..] {
            return None;
        }
        let (lambdas, nu) = ctx.push_path(&x.nu, &gamma[beta.len()..]);
        let mut alpha = x.alpha.clone();
        alpha.extend(lambdas);
        Some(NormalTerm {
            alpha,
            nu: nu.iter().zip(&y.nu).map(|(a, b)| a + b).collect(),
            beta: y.beta.clone(),
        })
    } else {
        // S_beta* S_gamma = S_{beta tail}*, and S_tail* U^mu = (U^{-mu} S_tail)*
        if beta[..gamma.len()] != gamma[..] {
            return None;
        }
        let neg: Vec<i64> = y.nu.iter().map(|v| -v).collect();
        let (lambdas, pushed) = ctx.push_path(&neg, &beta[gamma.len()..]);
        let mut new_beta = y.beta.clone();
        new_beta.extend(lambdas);
        Some(NormalTerm {
            alpha: x.alpha.clone(),
            nu: x.nu.iter().zip(&pushed).map(|(a, b)| a - b).collect(),
            beta: new_beta,
        })
    }
}

/// `S_alpha U^nu S_beta* = sum_mu S_(alpha,mu) U^{-qG} S_(beta,w)*` with `mu - nu = w + F q`.
pub(crate) fn expand_once(ctx: &Ctx, t: &NormalTerm) -> Vec<NormalTerm> {
    let neg: Vec<i64> = t.nu.iter().map(|x| -x).collect();
    (0..ctx.n)
        .map(|mu| {
            let (w, qg) = ctx.push(&neg, mu);
            let mut alpha = t.alpha.clone();
            alpha.push(mu);
            let mut beta = t.beta.clone();
            beta.push(w);
            NormalTerm {
                alpha,
                nu: qg.iter().map(|x| -x).collect(),
                beta,
            }
        })
        .collect()
}

fn expand_into(ctx: &Ctx, t: &NormalTerm, c: &Coeff, levels: usize, out: &mut Terms) {
    if levels == 0 {
        accumulate(out, t.clone(), c.clone());
        return;
    }
    for s in expand_once(ctx, t) {
        expand_into(ctx, &s, c, levels - 1, out);
    }
}

/// Expands every term of one gauge degree so that `|beta| = k2`.
fn expand_degree_to(ctx: &Ctx, terms: &[(&NormalTerm, &Coeff)], k2: usize) -> Terms {
    let mut out = Terms::new();
    for (t, c) in terms {
        expand_into(ctx, t, c, k2 - t.beta.len(), &mut out);
    }
    out
}

/// The term whose one-level expansion contains `t`, if any.
fn contraction_candidate(ctx: &Ctx, t: &NormalTerm) -> Option<NormalTerm> {
    let (&mu, alpha) = t.alpha.split_last()?;
    let (&w, beta) = t.beta.split_last()?;
    let neg: Vec<i64> = t.nu.iter().map(|x| -x).collect();
    let q = ctx.solve_row_g(&neg)?;
    let (m, wv) = (ctx.decode(mu), ctx.decode(w));
    let nu = (0..ctx.d())
        .map(|j| m[j] - wv[j] - ctx.a[j] * q[j])
        .collect();
    Some(NormalTerm {
        alpha: alpha.to_vec(),
        nu,
        beta: beta.to_vec(),
    })
}

/// One contraction step applied to every term of a single-shape, single-degree block.
fn contract_block(ctx: &Ctx, block: &Terms) -> Option<Terms> {
    let mut groups: BTreeMap<NormalTerm, Vec<(&NormalTerm, &Coeff)>> = BTreeMap::new();
    for (t, c) in block {
        groups
            .entry(contraction_candidate(ctx, t)?)
            .or_default()
            .push((t, c));
    }
    let mut out = Terms::new();
    for (cand, members) in groups {
        if members.len() != ctx.n {
            return None;
        }
        let c = members[0].1;
        if members.iter().any(|(_, c2)| *c2 != c) {
            return None;
        }
        let mut expected = expand_once(ctx, &cand);
        expected.sort();
        let mut got: Vec<&NormalTerm> = members.iter().map(|(t, _)| *t).collect();
        got.sort();
        if expected.iter().ne(got) {
            return None;
        }
        out.insert(cand, c.clone());
    }
    Some(out)
}

fn by_degree(terms: &Terms) -> BTreeMap<i64, Vec<(&NormalTerm, &Coeff)>> {
    let mut m: BTreeMap<i64, Vec<_>> = BTreeMap::new();
    for (t, c) in terms {
        m.entry(t.degree()).or_default().push((t, c));
    }
    m
}

/// Canonical form: per gauge degree, expand to the largest shape present, merge, then
/// contract while every term of that degree takes part in a complete expansion.
/// Expansion images of distinct terms are disjoint, so the result is the unique
/// smallest shape at which the element is a fixed-shape combination.
pub(crate) fn canonicalize(ctx: &Ctx, terms: &Terms) -> Terms {
    let mut result = Terms::new();
    for (_, group) in by_degree(terms) {
        let k2 = group.iter().map(|(t, _)| t.beta.len()).max().unwrap_or(0);
        let mut block = expand_degree_to(ctx, &group, k2);
        while !block.is_empty() {
            match contract_block(ctx, &block) {
                Some(smaller) => block = smaller,
                None => break,
            }
        }
        result.extend(block);
    }
    result
}

/// Expands both sides per degree to the largest shape on either side.
fn common_expansion(ctx: &Ctx, x: &Terms, y: &Terms) -> (Terms, Terms) {
    let (dx, dy) = (by_degree(x), by_degree(y));
    let mut ox = Terms::new();
    let mut oy = Terms::new();
    let degrees: std::collections::BTreeSet<i64> = dx.keys().chain(dy.keys()).copied().collect();
    for deg in degrees {
        let empty = Vec::new();
        let gx = dx.get(&deg).unwrap_or(&empty);
        let gy = dy.get(&deg).unwrap_or(&empty);
        let k2 = gx
            .iter()
            .chain(gy)
            .map(|(t, _)| t.beta.len())
            .max()
            .unwrap_or(0);
        ox.extend(expand_degree_to(ctx, gx, k2));
        oy.extend(expand_degree_to(ctx, gy, k2));
    }
    (ox, oy)
}

/// A finite sum of normal terms in a fixed algebra.
#[derive(Clone)]
pub struct AlgebraElement {
    alg: Algebra,
    terms: Terms,
    canonical: bool,
}

impl AlgebraElement {
    pub(crate) fn from_terms(alg: &Algebra, terms: Terms) -> Self {
        let terms = canonicalize(alg.ctx(), &terms);
        AlgebraElement {
            alg: alg.clone(),
            terms,
            canonical: true,
        }
    }

    pub(crate) fn raw(alg: &Algebra, terms: Terms) -> Self {
        AlgebraElement {
            alg: alg.clone(),
            terms,
            canonical: false,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalTerm, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the stored terms are in canonical (minimal-shape) form.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn canonicalize(&self) -> AlgebraElement {
        if self.canonical {
            self.clone()
        } else {
            AlgebraElement::from_terms(&self.alg, self.terms.clone())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.alg.check_same(&other.alg)?;
        let mut terms = self.terms.clone();
        for (t, c) in &other.terms {
            accumulate(&mut terms, t.clone(), c.clone());
        }
        Ok(AlgebraElement::from_terms(&self.alg, terms))
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&other.scale(&-Coeff::one()))
    }

    pub fn scale(&self, c: &Coeff) -> AlgebraElement {
        let mut terms = Terms::new();
        for (t, x) in &self.terms {
            accumulate(&mut terms, t.clone(), x * c);
        }
        AlgebraElement::from_terms(&self.alg, terms)
    }

    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.alg.check_same(&other.alg)?;
        let ctx = self.alg.ctx();
        let mut terms = Terms::new();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                if let Some(t) = term_product(ctx, x, y) {
                    accumulate(&mut terms, t, cx * cy);
                }
            }
        }
        Ok(AlgebraElement::from_terms(&self.alg, terms))
    }

    /// `(S_alpha U^nu S_beta*)* = S_beta U^{-nu} S_alpha*`, coefficients conjugated.
    pub fn adjoint(&self) -> AlgebraElement {
        let mut terms = Terms::new();
        for (t, c) in &self.terms {
            accumulate(&mut terms, t.adjoint(), c.conj());
        }
        AlgebraElement::from_terms(&self.alg, terms)
    }

    /// Equality after expanding both sides to a common shape in every gauge degree.
    pub fn equals(&self, other: &AlgebraElement) -> Result<bool> {
        self.alg.check_same(&other.alg)?;
        let (x, y) = common_expansion(self.alg.ctx(), &self.terms, &other.terms);
        Ok(x == y)
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(|t| t.degree()).collect();
        d.dedup();
        d
    }

    /// Gauge-invariant part `E(x)`: the degree-0 terms.
    pub fn expectation(&self) -> AlgebraElement {
        let terms = self
            .terms
            .iter()
            .filter(|(t, _)| t.degree() == 0)
            .map(|(t, c)| (t.clone(), c.clone()))
            .collect();
        AlgebraElement::from_terms(&self.alg, terms)
    }

    /// Rewrites every term at shape `(k1, k2)`; the result is left uncanonicalized.
    pub fn expand_level(&self, k1: usize, k2: usize) -> Result<AlgebraElement> {
        let target = k1 as i64 - k2 as i64;
        let ctx = self.alg.ctx();
        let mut out = Terms::new();
        for (t, c) in &self.terms {
            if t.degree() != target {
                return Err(Error::domain(format!(
                    "term of gauge degree {} cannot be expanded to shape ({k1}, {k2})",
                    t.degree()
                )));
            }
            if t.beta.len() > k2 {
                return Err(Error::domain(format!(
                    "term of shape ({}, {}) is already longer than ({k1}, {k2})",
                    t.alpha.len(),
                    t.beta.len()
                )));
            }
            expand_into(ctx, t, c, k2 - t.beta.len(), &mut out);
        }
        Ok(AlgebraElement::raw(&self.alg, out))
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct JsonTerm {
            alpha: Vec<Vec<i64>>,
            nu: Vec<i64>,
            beta: Vec<Vec<i64>>,
            re: String,
            im: String,
        }
        #[derive(Serialize)]
        struct JsonElement {
            degree_terms: Vec<JsonTerm>,
        }
        let ctx = self.alg.ctx();
        let degree_terms = self
            .terms
            .iter()
            .map(|(t, c)| JsonTerm {
                alpha: t.alpha.iter().map(|&r| ctx.decode(r)).collect(),
                nu: t.nu.clone(),
                beta: t.beta.iter().map(|&r| ctx.decode(r)).collect(),
                re: c.re.to_string(),
                im: c.im.to_string(),
            })
            .collect();
        serde_json::to_string(&JsonElement { degree_terms }).expect("element serializes")
    }

    /// Text form of one term in the word grammar.
    pub fn term_text(&self, t: &NormalTerm) -> String {
        let ctx = self.alg.ctx();
        let mut parts: Vec<String> = Vec::new();
        let upow = |v: &[i64], parts: &mut Vec<String>| {
            for (j, &e) in v.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("U{}", j + 1)),
                    _ => parts.push(format!("U{}^{e}", j + 1)),
                }
            }
        };
        for &a in &t.alpha {
            upow(&ctx.decode(a), &mut parts);
            parts.push("S".into());
        }
        upow(&t.nu, &mut parts);
        for &b in t.beta.iter().rev() {
            parts.push("S*".into());
            let neg: Vec<i64> = ctx.decode(b).iter().map(|x| -x).collect();
            upow(&neg, &mut parts);
        }
        parts.join(" ")
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (t, c) in &self.terms {
            write_scaled(&mut out, c, &self.term_text(t), &mut first);
        }
        if first {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({self})")
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl Algebra {
    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::from_terms(self, Terms::new())
    }

    pub fn one(&self) -> AlgebraElement {
        self.monomial(NormalTerm::identity(self.d()))
    }

    pub fn s(&self) -> AlgebraElement {
        self.monomial(NormalTerm {
            alpha: vec![0],
            nu: vec![0; self.d()],
            beta: vec![],
        })
    }

    pub fn s_star(&self) -> AlgebraElement {
        self.s().adjoint()
    }

    /// `U^nu`.
    pub fn u_pow(&self, nu: &[i64]) -> Result<AlgebraElement> {
        if nu.len() != self.d() {
            return Err(Error::domain(format!(
                "exponent {nu:?} must have length {}",
                self.d()
            )));
        }
        Ok(self.monomial(NormalTerm {
            alpha: vec![],
            nu: nu.to_vec(),
            beta: vec![],
        }))
    }

    /// A single term with coefficient 1; `alpha` and `beta` hold ranks.
    pub fn monomial(&self, t: NormalTerm) -> AlgebraElement {
        let mut terms = Terms::new();
        terms.insert(t, Coeff::one());
        AlgebraElement::from_terms(self, terms)
    }

    /// `S_alpha U^nu S_beta*` from explicit multi-indices.
    pub fn term(
        &self,
        alpha: &[Vec<i64>],
        nu: &[i64],
        beta: &[Vec<i64>],
    ) -> Result<AlgebraElement> {
        let ranks = |p: &[Vec<i64>]| p.iter().map(|v| self.rank(v)).collect::<Result<Vec<_>>>();
        if nu.len() != self.d() {
            return Err(Error::domain(format!(
                "exponent {nu:?} must have length {}",
                self.d()
            )));
        }
        Ok(self.monomial(NormalTerm {
            alpha: ranks(alpha)?,
            nu: nu.to_vec(),
            beta: ranks(beta)?,
        }))
    }

    /// Linear combination of terms, canonicalized.
    pub fn combination(
        &self,
        terms: impl IntoIterator<Item = (NormalTerm, Coeff)>,
    ) -> AlgebraElement {
        let mut map = Terms::new();
        for (t, c) in terms {
            accumulate(&mut map, t, c);
        }
        AlgebraElement::from_terms(self, map)
    }

    /// Rewrites each word with the rules R1-R3 and collects the result.
    pub fn normalize(&self, words: &WordSum) -> AlgebraElement {
        let mut terms = Terms::new();
        for (c, w) in words.terms() {
            if let Some(t) = rewrite_word(self.ctx(), w) {
                accumulate(&mut terms, t, c.clone());
            }
        }
        AlgebraElement::from_terms(self, terms)
    }

    pub fn normalize_str(&self, text: &str) -> Result<AlgebraElement> {
        Ok(self.normalize(&self.parse_word(text)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starcalc::coeff;

    fn alg23() -> Algebra {
        Algebra::from_diag(&[2], &[vec![3]]).unwrap()
    }

    fn term(alpha: &[usize], nu: &[i64], beta: &[usize]) -> NormalTerm {
        NormalTerm {
            alpha: alpha.to_vec(),
            nu: nu.to_vec(),
            beta: beta.to_vec(),
        }
    }

    fn single(x: &AlgebraElement) -> NormalTerm {
        assert_eq!(x.len(), 1, "{x}");
        let (t, c) = x.terms().next().unwrap();
        assert_eq!(*c, Coeff::one());
        t.clone()
    }

    #[test]
    fn normalize_examples() {
        let a = alg23();
        let n = |s| a.normalize_str(s).unwrap();
        assert_eq!(single(&n("S* S")), term(&[], &[0], &[]));
        assert_eq!(single(&n("S* U1^2 S")), term(&[], &[3], &[]));
        assert_eq!(single(&n("U1^-1 S")), term(&[1], &[-3], &[]));
        assert_eq!(single(&n("S S* + U1 S S* U1^-1")), term(&[], &[0], &[]));
        assert!(n("S* U1^3 S").is_zero());
        assert_eq!(n("S* U1^2 S").to_string(), "U1^3");
    }

    #[test]
    fn products() {
        let a = alg23();
        assert_eq!(
            single(&a.s().multiply(&a.s_star()).unwrap()),
            term(&[0], &[0], &[0])
        );
        let e01 = a.monomial(term(&[0], &[0], &[1]));
        let e10 = a.monomial(term(&[1], &[0], &[0]));
        assert_eq!(single(&e01.multiply(&e10).unwrap()), term(&[0], &[0], &[0]));
        assert!(e01.multiply(&e01).unwrap().is_zero());
        assert_eq!(e01, a.normalize_str("S S* U1^-1").unwrap());
    }

    #[test]
    fn adjoint_is_involution() {
        let a = alg23();
        let x = a.normalize_str("2i U1^-1 S + 3 S* U1 - 1/2 U1^5").unwrap();
        assert_eq!(x.adjoint().adjoint(), x);
        let y = a.normalize_str("U1^-1 S").unwrap().adjoint();
        assert_eq!(y, a.normalize_str("S* U1").unwrap());
    }

    #[test]
    fn equals_examples() {
        let a = alg23();
        assert!(a.normalize_str("S* S").unwrap().equals(&a.one()).unwrap());
        let sus = a.normalize_str("S U1 S*").unwrap();
        let expanded = sus.expand_level(2, 2).unwrap();
        assert_eq!(expanded.len(), 2);
        assert!(!expanded.is_canonical());
        assert!(expanded.equals(&sus).unwrap());
        assert_eq!(expanded.canonicalize().len(), 1);
        assert!(!a.normalize_str("S S*").unwrap().equals(&a.one()).unwrap());
    }

    #[test]
    fn expansion_of_one() {
        let a = alg23();
        let e = a.one().expand_level(1, 1).unwrap();
        let got: Vec<_> = e.terms().map(|(t, _)| t.clone()).collect();
        assert_eq!(got, vec![term(&[0], &[0], &[0]), term(&[1], &[0], &[1])]);
        let s = a.s().expand_level(2, 1).unwrap();
        assert_eq!(s.len(), 2);
        assert!(a.s().expand_level(1, 1).is_err());
    }

    #[test]
    fn expectation_filters_degrees() {
        let a = alg23();
        assert!(a.s().expectation().is_zero());
        let x = a.normalize_str("S U1 S* + S").unwrap();
        assert_eq!(x.expectation(), a.normalize_str("S U1 S*").unwrap());
        assert_eq!(a.one().expectation(), a.one());
    }

    #[test]
    fn mismatched_algebras() {
        let a = alg23();
        let b = Algebra::from_diag(&[3], &[vec![2]]).unwrap();
        assert!(a.one().multiply(&b.one()).is_err());
        assert!(a.one().equals(&b.one()).is_err());
    }

    #[test]
    fn printing_and_json() {
        let a = alg23();
        let x = a.normalize_str("1/2 U1^-1 S + 3i").unwrap();
        assert_eq!(a.normalize_str(&x.to_string()).unwrap(), x);
        assert_eq!(
            a.normalize_str("S* U1^2 S").unwrap().to_json(),
            r#"{"degree_terms":[{"alpha":[],"nu":[3],"beta":[],"re":"1","im":"0"}]}"#
        );
        assert_eq!(a.zero().to_string(), "0");
        assert_eq!(a.one().scale(&coeff(0, -1)).to_string(), "-1i");
    }

    #[test]
    fn unitary_case_collapses() {
        let a = Algebra::from_diag(&[1], &[vec![1]]).unwrap();
        assert_eq!(a.normalize_str("S S*").unwrap(), a.one());
        assert_eq!(a.normalize_str("S S*").unwrap().len(), 1);
    }
}
