//! Machine checks of the defining relations and of the finite identities behind the
//! structure results for `O_{F,G}(T^d)`. Every check is an exact comparison.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::element::{term_product, AlgebraElement, NormalTerm};
use super::word::{GeneratorWord, Letter, WordSum};
use super::{coeff, Algebra, Coeff};
use crate::error::{Error, Result};
use crate::numt::bezout;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub instances: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubalgebraWitness {
    /// 1-based index of the unitary `U_j` expressed by `word`.
    pub j: usize,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "G")]
    pub g: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_holds: Option<bool>,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<SubalgebraWitness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn new(suite: &str, alg: &Algebra, checks: Vec<Check>) -> Self {
        VerifyReport {
            suite: suite.into(),
            f: alg.spec().f().to_string(),
            g: alg.spec().g().to_string(),
            hypothesis: None,
            hypothesis_holds: None,
            passed: checks.iter().all(|c| c.passed),
            checks,
            witnesses: vec![],
            notes: vec![],
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} [F = {}, G = {}]: {}",
            self.suite,
            self.f,
            self.g,
            if self.passed { "PASS" } else { "FAIL" }
        )?;
        if let (Some(h), Some(holds)) = (&self.hypothesis, self.hypothesis_holds) {
            writeln!(
                f,
                "  hypothesis {h}: {}",
                if holds { "holds" } else { "violated" }
            )?;
        }
        for c in &self.checks {
            write!(
                f,
                "  {} {} ({} instance{})",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.instances,
                if c.instances == 1 { "" } else { "s" }
            )?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        for w in &self.witnesses {
            writeln!(f, "  U{} = {}", w.j, w.word)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Collects the outcome of many instances of one identity.
struct Family {
    name: String,
    total: usize,
    failed: usize,
    examples: Vec<String>,
}

impl Family {
    fn new(name: impl Into<String>) -> Self {
        Family {
            name: name.into(),
            total: 0,
            failed: 0,
            examples: vec![],
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < 3 {
                self.examples.push(detail());
            }
        }
    }

    fn identity(
        &mut self,
        label: impl FnOnce() -> String,
        lhs: &AlgebraElement,
        rhs: &AlgebraElement,
    ) {
        let ok = lhs.equals(rhs).unwrap_or(false);
        self.record(ok, || format!("{}: got {lhs}, expected {rhs}", label()));
    }

    fn finish(self) -> Check {
        let detail = (self.failed > 0).then(|| {
            let mut d = format!("{} of {} failed; ", self.failed, self.total);
            d.push_str(&self.examples.join("; "));
            d
        });
        Check {
            name: self.name,
            instances: self.total,
            passed: self.failed == 0,
            detail,
        }
    }
}

fn word(letters: impl IntoIterator<Item = Letter>) -> GeneratorWord {
    GeneratorWord::new(letters)
}

fn upow(v: &[i64]) -> GeneratorWord {
    GeneratorWord::u_power(v)
}

fn s() -> GeneratorWord {
    word([Letter::S])
}

fn s_star() -> GeneratorWord {
    word([Letter::SStar])
}

fn cat(parts: &[GeneratorWord]) -> GeneratorWord {
    parts
        .iter()
        .fold(GeneratorWord::default(), |acc, w| acc.concat(w))
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

fn unit(d: usize, j: usize) -> Vec<i64> {
    let mut e = vec![0; d];
    e[j] = 1;
    e
}

/// All integer vectors `v` with `0 <= v_j < bounds_j`, last coordinate fastest.
fn box_vectors(bounds: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Componentwise `w = w0 + a q` with `0 <= w0_j < a_j`.
fn floor_split(w: &[i64], a: &[i64]) -> (Vec<i64>, Vec<i64>) {
    w.iter()
        .zip(a)
        .map(|(&x, &aj)| (x.rem_euclid(aj), x.div_euclid(aj)))
        .unzip()
}

fn times_rows(q: &[i64], rows: &[Vec<i64>]) -> Vec<i64> {
    let mut out = vec![0; rows.first().map_or(0, Vec::len)];
    for (qj, row) in q.iter().zip(rows) {
        for (o, b) in out.iter_mut().zip(row) {
            *o += qj * b;
        }
    }
    out
}

fn norm(alg: &Algebra, w: GeneratorWord) -> AlgebraElement {
    alg.normalize(&WordSum::word(w))
}

fn norm_sum(alg: &Algebra, ws: impl IntoIterator<Item = GeneratorWord>) -> AlgebraElement {
    alg.normalize(&WordSum(
        ws.into_iter().map(|w| (Coeff::one(), w)).collect(),
    ))
}

fn delta(alg: &Algebra, yes: bool) -> AlgebraElement {
    if yes {
        alg.one()
    } else {
        alg.zero()
    }
}

/// The relations of the presentation, rule instances R1-R3 and the spanning identities.
pub fn verify_presentation(alg: &Algebra) -> VerifyReport {
    let d = alg.d();
    let a = alg.spec().a().to_vec();
    let g = alg.spec().g_rows().to_vec();
    let index = box_vectors(&a);
    let mut checks = Vec::new();

    let mut fam = Family::new("S* U^nu S = delta(nu, 0) for nu in I(F)");
    for nu in &index {
        let lhs = norm(alg, cat(&[s_star(), upow(nu), s()]));
        fam.identity(
            || format!("nu = {nu:?}"),
            &lhs,
            &delta(alg, nu.iter().all(|&x| x == 0)),
        );
    }
    checks.push(fam.finish());

    let mut fam = Family::new("U_j^a_j S = S U^G_j");
    for j in 0..d {
        let lhs = norm(
            alg,
            cat(&[
                upow(&(unit(d, j).iter().map(|x| x * a[j]).collect::<Vec<_>>())),
                s(),
            ]),
        );
        let rhs = alg.monomial(NormalTerm {
            alpha: vec![0],
            nu: g[j].clone(),
            beta: vec![],
        });
        fam.identity(|| format!("j = {}", j + 1), &lhs, &rhs);
    }
    checks.push(fam.finish());

    let mut fam = Family::new("sum_nu U^nu S S* U^-nu = 1");
    let lhs = norm_sum(
        alg,
        index
            .iter()
            .map(|nu| cat(&[upow(nu), s(), s_star(), upow(&neg(nu))])),
    );
    fam.identity(String::new, &lhs, &alg.one());
    checks.push(fam.finish());

    let mut fam = Family::new("U_i U_j = U_j U_i, U_j U_j* = U_j* U_j = 1, S* S = 1");
    for i in 0..d {
        for j in 0..d {
            let ij = norm(alg, cat(&[upow(&unit(d, i)), upow(&unit(d, j))]));
            let ji = norm(alg, cat(&[upow(&unit(d, j)), upow(&unit(d, i))]));
            fam.identity(|| format!("U{} U{}", i + 1, j + 1), &ij, &ji);
        }
        let u = word([Letter::U { j: i + 1, e: 1 }]);
        let us = word([Letter::U { j: i + 1, e: -1 }]);
        fam.identity(
            || format!("U{0} U{0}*", i + 1),
            &norm(alg, cat(&[u.clone(), us.clone()])),
            &alg.one(),
        );
        fam.identity(
            || format!("U{0}* U{0}", i + 1),
            &norm(alg, cat(&[us, u])),
            &alg.one(),
        );
    }
    fam.identity(
        || "S* S".into(),
        &norm(alg, cat(&[s_star(), s()])),
        &alg.one(),
    );
    checks.push(fam.finish());

    // rule instances over I(F) shifted by -1, 0, +1 in each direction
    let mut probes: Vec<Vec<i64>> = Vec::new();
    for nu in &index {
        probes.push(nu.clone());
        for j in 0..d {
            for s in [-1, 1] {
                let mut v = nu.clone();
                v[j] += s * a[j];
                probes.push(v);
            }
        }
    }
    let (mut r1, mut r2, mut r3) = (
        Family::new("R1: U^nu S = S_nu0 U^qG"),
        Family::new("R2: S* U^nu S = delta(nu0, 0) U^qG"),
        Family::new("R3: S* U^nu = U^-q'G S* U^-l"),
    );
    for nu in &probes {
        let (nu0, q) = floor_split(nu, &a);
        let qg = times_rows(&q, &g);
        let lhs = norm(alg, cat(&[upow(nu), s()]));
        let rhs = norm(alg, cat(&[upow(&nu0), s(), upow(&qg)]));
        r1.identity(|| format!("nu = {nu:?}"), &lhs, &rhs);

        let lhs = norm(alg, cat(&[s_star(), upow(nu), s()]));
        let rhs = if nu0.iter().all(|&x| x == 0) {
            alg.u_pow(&qg).expect("length d")
        } else {
            alg.zero()
        };
        r2.identity(|| format!("nu = {nu:?}"), &lhs, &rhs);

        let (l, q2) = floor_split(&neg(nu), &a);
        let lhs = norm(alg, cat(&[s_star(), upow(nu)]));
        let rhs = norm(
            alg,
            cat(&[upow(&neg(&times_rows(&q2, &g))), s_star(), upow(&neg(&l))]),
        );
        r3.identity(|| format!("nu = {nu:?}"), &lhs, &rhs);
    }
    checks.extend([r1.finish(), r2.finish(), r3.finish()]);

    let mut fam = Family::new("U_j* S = U_j^(a_j - 1) S U^-G_j");
    for j in 0..d {
        let lhs = norm(alg, word([Letter::U { j: j + 1, e: -1 }, Letter::S]));
        let mut shift = vec![0; d];
        shift[j] = a[j] - 1;
        let rhs = norm(alg, cat(&[upow(&shift), s(), upow(&neg(&g[j]))]));
        fam.identity(|| format!("j = {}", j + 1), &lhs, &rhs);
    }
    checks.push(fam.finish());

    let mut fam = Family::new("1, U_j, S, S* in the span of S_alpha U^nu S_beta*");
    let s_nu = |nu: &[i64]| cat(&[upow(nu), s()]);
    let s_nu_star = |nu: &[i64]| cat(&[s_star(), upow(&neg(nu))]);
    let one = norm_sum(alg, index.iter().map(|nu| cat(&[s_nu(nu), s_nu_star(nu)])));
    fam.identity(|| "1 = sum S_nu S_nu*".into(), &one, &alg.one());
    for j in 0..d {
        let e = unit(d, j);
        let sum = norm_sum(
            alg,
            index.iter().map(|nu| {
                let shifted: Vec<i64> = nu.iter().zip(&e).map(|(x, y)| x + y).collect();
                cat(&[s_nu(&shifted), s_nu_star(nu)])
            }),
        );
        fam.identity(
            || format!("U{} = sum S_(nu+e_j) S_nu*", j + 1),
            &sum,
            &alg.u_pow(&e).expect("length d"),
        );
    }
    let sum = norm_sum(
        alg,
        index.iter().map(|nu| cat(&[s(), s_nu(nu), s_nu_star(nu)])),
    );
    fam.identity(|| "S = sum S S_nu S_nu*".into(), &sum, &alg.s());
    let sum = norm_sum(
        alg,
        index
            .iter()
            .map(|nu| cat(&[s_nu(nu), s_nu_star(nu), s_star()])),
    );
    fam.identity(|| "S* = sum S_nu S_nu* S*".into(), &sum, &alg.s_star());
    checks.push(fam.finish());

    VerifyReport::new("presentation", alg, checks)
}

/// `S~ = S^k` against the relations of `O_{F^k, G^k}`.
pub fn verify_power_quotient(alg: &Algebra, k: u32) -> Result<VerifyReport> {
    if k < 1 {
        return Err(Error::domain("verify_power_quotient needs k >= 1"));
    }
    let d = alg.d();
    let ak: Vec<i64> = alg
        .spec()
        .a()
        .iter()
        .map(|&x| {
            x.checked_pow(k)
                .ok_or_else(|| Error::domain("a_j^k overflows"))
        })
        .collect::<Result<_>>()?;
    let gk = alg.spec().g().pow(k).to_i64_rows()?;
    let st = GeneratorWord::new(std::iter::repeat_n(Letter::S, k as usize));
    let st_star = st.adjoint();
    let index = box_vectors(&ak);
    let mut checks = Vec::new();

    let mut fam = Family::new("S~* U^nu S~ = delta(nu, 0) for nu in I(F^k)");
    for nu in &index {
        let lhs = norm(alg, cat(&[st_star.clone(), upow(nu), st.clone()]));
        fam.identity(
            || format!("nu = {nu:?}"),
            &lhs,
            &delta(alg, nu.iter().all(|&x| x == 0)),
        );
    }
    checks.push(fam.finish());

    let mut fam = Family::new("U_j^(a_j^k) S~ = S~ U^(G^k)_j");
    for j in 0..d {
        let mut e = vec![0; d];
        e[j] = ak[j];
        let lhs = norm(alg, cat(&[upow(&e), st.clone()]));
        let rhs = norm(alg, cat(&[st.clone(), upow(&gk[j])]));
        fam.identity(|| format!("j = {}", j + 1), &lhs, &rhs);
    }
    checks.push(fam.finish());

    let mut fam = Family::new("sum_{nu in I(F^k)} U^nu S~ S~* U^-nu = 1");
    let lhs = norm_sum(
        alg,
        index
            .iter()
            .map(|nu| cat(&[upow(nu), st.clone(), st_star.clone(), upow(&neg(nu))])),
    );
    fam.identity(String::new, &lhs, &alg.one());
    checks.push(fam.finish());

    let mut report = VerifyReport::new("power-quotient", alg, checks);
    report.hypothesis = Some("|det G| = 1".into());
    report.hypothesis_holds = Some(alg.det_g().abs().is_one());
    Ok(report)
}

/// Words in `U_j^{k_j}`, `S`, `S*` that evaluate to each `U_j`.
pub fn verify_subalgebra_generators(alg: &Algebra, ks: &[i64]) -> Result<VerifyReport> {
    let d = alg.d();
    let a = alg.spec().a().to_vec();
    if ks.len() != d {
        return Err(Error::domain(format!(
            "expected {d} exponents k_j, got {}",
            ks.len()
        )));
    }
    for (j, (&k, &aj)) in ks.iter().zip(&a).enumerate() {
        if k < 1 || aj % k != 0 {
            return Err(Error::domain(format!(
                "k_{} = {k} does not divide a_{} = {aj}",
                j + 1,
                j + 1
            )));
        }
    }
    let det_f: BigInt = a.iter().map(|&x| BigInt::from(x)).product();
    let det_g = alg.det_g();
    let gcd = det_f.gcd(&det_g);
    if !gcd.is_one() {
        return Err(Error::domain(format!(
            "gcd(det F, det G) = gcd({det_f}, {det_g}) = {gcd}, expected 1"
        )));
    }
    let adj = alg.spec().g().adjugate().to_i64_rows()?;
    let mut fam_eq = Family::new("normalize(witness) = U_j");
    let mut fam_gen = Family::new("witness uses only U_j^(+-k_j), S, S*");
    let mut witnesses = Vec::new();
    for j in 0..d {
        let w = if ks[j] == 1 {
            word([Letter::U { j: j + 1, e: 1 }])
        } else {
            // U_j = (U_j^a_j)^p (U_j^det G)^q and U_j^det G = prod_l (U^G_l)^adj(G)_jl
            let (one, p, q) = bezout(&BigInt::from(a[j]), &det_g)?;
            debug_assert!(one.is_one());
            let p = p
                .to_i64()
                .ok_or_else(|| Error::domain("Bezout coefficient too large"))?;
            let q = q
                .to_i64()
                .ok_or_else(|| Error::domain("Bezout coefficient too large"))?;
            let mut letters = Vec::new();
            if p != 0 {
                letters.push(Letter::U {
                    j: j + 1,
                    e: a[j] * p,
                });
            }
            for (l, &c) in adj[j].iter().enumerate() {
                if c * q != 0 {
                    letters.extend([
                        Letter::SStar,
                        Letter::U {
                            j: l + 1,
                            e: a[l] * c * q,
                        },
                        Letter::S,
                    ]);
                }
            }
            GeneratorWord(letters)
        };
        let allowed = w.letters().iter().all(|l| match *l {
            Letter::U { j, e } => e % ks[j - 1] == 0,
            _ => true,
        });
        fam_gen.record(allowed, || format!("U{}: {w}", j + 1));
        let got = norm(alg, w.clone());
        fam_eq.identity(|| format!("U{}", j + 1), &got, &alg.u_pow(&unit(d, j))?);
        witnesses.push(SubalgebraWitness {
            j: j + 1,
            word: w.to_string(),
        });
    }
    let mut report = VerifyReport::new("subalg-gens", alg, vec![fam_gen.finish(), fam_eq.finish()]);
    report.witnesses = witnesses;
    Ok(report)
}

/// Relations for `S~_l = U^(l k) S` and `W_j = U_j^k_j` when every `gcd(k_j, a_j) = 1`.
pub fn verify_twisted_family(alg: &Algebra, ks: &[i64]) -> Result<VerifyReport> {
    let d = alg.d();
    let a = alg.spec().a().to_vec();
    let g = alg.spec().g_rows().to_vec();
    if ks.len() != d {
        return Err(Error::domain(format!(
            "expected {d} exponents k_j, got {}",
            ks.len()
        )));
    }
    for (j, (&k, &aj)) in ks.iter().zip(&a).enumerate() {
        let gcd = k.gcd(&aj);
        if gcd != 1 {
            return Err(Error::domain(format!(
                "gcd(k_{0}, a_{0}) = gcd({k}, {aj}) = {gcd}, expected 1",
                j + 1
            )));
        }
    }
    let index = box_vectors(&a);
    let lk = |l: &[i64]| -> Vec<i64> { l.iter().zip(ks).map(|(x, k)| x * k).collect() };
    let st = |l: &[i64]| cat(&[upow(&lk(l)), s()]);
    let mut checks = Vec::new();

    let mut fam = Family::new("S~_nu* S~_nu' = delta(nu, nu')");
    for nu in &index {
        for nu2 in &index {
            let lhs = norm(alg, cat(&[st(nu).adjoint(), st(nu2)]));
            fam.identity(
                || format!("nu = {nu:?}, nu' = {nu2:?}"),
                &lhs,
                &delta(alg, nu == nu2),
            );
        }
    }
    checks.push(fam.finish());

    let mut fam = Family::new("W_j^a_j S~ = S~ W^G_j");
    let mut corrected = Family::new("W_j^a_j S~ = S~ U^(k_j G_j)");
    for j in 0..d {
        let mut e = vec![0; d];
        e[j] = ks[j] * a[j];
        let lhs = norm(alg, cat(&[upow(&e), s()]));
        let rhs = norm(alg, cat(&[s(), upow(&lk(&g[j]))]));
        fam.identity(|| format!("j = {}", j + 1), &lhs, &rhs);
        let scaled: Vec<i64> = g[j].iter().map(|x| x * ks[j]).collect();
        corrected.identity(
            || format!("j = {}", j + 1),
            &lhs,
            &norm(alg, cat(&[s(), upow(&scaled)])),
        );
    }
    checks.push(fam.finish());

    let mut fam = Family::new("sum_l S~_l S~_l* = 1");
    let lhs = norm_sum(alg, index.iter().map(|l| cat(&[st(l), st(l).adjoint()])));
    fam.identity(String::new, &lhs, &alg.one());
    checks.push(fam.finish());

    let mut fam = Family::new("S~_nu = W^nu S~ and sum_nu W^nu S~ S~* W^-nu = 1");
    for nu in &index {
        fam.identity(
            || format!("nu = {nu:?}"),
            &norm(alg, st(nu)),
            &norm(alg, cat(&[upow(&lk(nu)), s()])),
        );
    }
    let lhs = norm_sum(
        alg,
        index
            .iter()
            .map(|nu| cat(&[upow(&lk(nu)), s(), s_star(), upow(&neg(&lk(nu)))])),
    );
    fam.identity(|| "partition".into(), &lhs, &alg.one());
    checks.push(fam.finish());

    let mut report = VerifyReport::new("twisted", alg, checks);
    let corrected = corrected.finish();
    report.notes.push(format!(
        "W_j^a_j S~ = S~ U^(k_j G_j): {}",
        if corrected.passed {
            "holds for every j"
        } else {
            "fails"
        }
    ));
    Ok(report)
}

/// Matrix-unit laws at level `k`: `E_ab E_cd = delta(b, c) E_ad`, `sum_a E_aa = 1`, `E_ab* = E_ba`.
pub fn verify_matrix_units(alg: &Algebra, k: usize) -> VerifyReport {
    let ctx = alg.ctx();
    let paths = alg.paths(k);
    let zero = vec![0; alg.d()];
    let unit_term = |x: &[usize], y: &[usize]| NormalTerm {
        alpha: x.to_vec(),
        nu: zero.clone(),
        beta: y.to_vec(),
    };
    let units: Vec<Vec<NormalTerm>> = paths
        .iter()
        .map(|x| paths.iter().map(|y| unit_term(x, y)).collect())
        .collect();

    let mut fam = Family::new(format!("E_ab E_cd = delta(b, c) E_ad at level {k}"));
    for (ia, row) in units.iter().enumerate() {
        for (ib, e1) in row.iter().enumerate() {
            for (ic, row2) in units.iter().enumerate() {
                for (id, e2) in row2.iter().enumerate() {
                    let got = term_product(ctx, e1, e2);
                    let ok = if ib == ic {
                        got.as_ref() == Some(&units[ia][id])
                    } else {
                        got.is_none()
                    };
                    fam.record(ok, || format!("E_{ia},{ib} E_{ic},{id} = {got:?}"));
                }
            }
        }
    }
    let mut checks = vec![fam.finish()];

    let small = paths.len().pow(4) <= 4096;
    if small {
        let mut fam = Family::new(format!(
            "same law through full element products at level {k}"
        ));
        let elems: Vec<Vec<AlgebraElement>> = units
            .iter()
            .map(|row| row.iter().map(|t| alg.monomial(t.clone())).collect())
            .collect();
        for (ia, row) in elems.iter().enumerate() {
            for (ib, e1) in row.iter().enumerate() {
                for (ic, row2) in elems.iter().enumerate() {
                    for (id, e2) in row2.iter().enumerate() {
                        let got = e1.multiply(e2).expect("same algebra");
                        let want = if ib == ic {
                            elems[ia][id].clone()
                        } else {
                            alg.zero()
                        };
                        fam.identity(|| format!("E_{ia},{ib} E_{ic},{id}"), &got, &want);
                    }
                }
            }
        }
        checks.push(fam.finish());
    }

    let mut fam = Family::new(format!("sum_a E_aa = 1 at level {k}"));
    let sum = alg.combination(paths.iter().map(|p| (unit_term(p, p), Coeff::one())));
    fam.identity(String::new, &sum, &alg.one());
    checks.push(fam.finish());

    let mut fam = Family::new("E_ab* = E_ba");
    for (ia, row) in units.iter().enumerate() {
        for (ib, e) in row.iter().enumerate() {
            fam.record(e.adjoint() == units[ib][ia], || {
                format!("a = {ia}, b = {ib}")
            });
        }
    }
    checks.push(fam.finish());

    if paths.len().pow(2) <= 1296 {
        let mut fam = Family::new("E_ab = normalize(S_a S_b*)");
        for (ia, x) in paths.iter().enumerate() {
            for (ib, y) in paths.iter().enumerate() {
                let mut letters = GeneratorWord::default();
                for &m in x {
                    letters = cat(&[letters, upow(&ctx.decode(m)), s()]);
                }
                for &m in y.iter().rev() {
                    letters = cat(&[letters, s_star(), upow(&neg(&ctx.decode(m)))]);
                }
                let want = alg.monomial(units[ia][ib].clone());
                fam.identity(|| format!("a = {ia}, b = {ib}"), &norm(alg, letters), &want);
            }
        }
        checks.push(fam.finish());
    }

    VerifyReport::new("matrix-units", alg, checks)
}

/// The battery of exponents used for generators: `I(F)`, `0` and `+-G_j`.
fn nu_battery(alg: &Algebra) -> Vec<Vec<i64>> {
    let mut out = box_vectors(alg.spec().a());
    for row in alg.spec().g_rows() {
        out.push(row.clone());
        out.push(neg(row));
    }
    out.sort();
    out.dedup();
    out
}

/// `phi_{k+1} rho_k = rho_{k+1} phi_k` on every `S_a U^nu S_b*` at level `k`.
pub fn verify_colimit_diagram(alg: &Algebra, k: usize) -> VerifyReport {
    let paths = alg.paths(k);
    let battery = nu_battery(alg);
    let mut fam = Family::new(format!("expand(rho(g)) = rho(expand(g)) at level {k}"));
    for x in &paths {
        for y in &paths {
            for nu in &battery {
                let g = alg.monomial(NormalTerm {
                    alpha: x.clone(),
                    nu: nu.clone(),
                    beta: y.clone(),
                });
                let lhs = g.rho().and_then(|r| r.expand_level(k + 2, k + 2));
                let rhs = g.expand_level(k + 1, k + 1).and_then(|e| e.rho());
                let ok = match (&lhs, &rhs) {
                    (Ok(l), Ok(r)) => l.equals(r).unwrap_or(false),
                    _ => false,
                };
                fam.record(ok, || format!("alpha = {x:?}, nu = {nu:?}, beta = {y:?}"));
            }
        }
    }
    let mut report = VerifyReport::new("diagram", alg, vec![fam.finish()]);
    report.notes.push(format!("exponent battery: {battery:?}"));
    report
}

fn random_level_element(alg: &Algebra, k: usize, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let n = alg.n();
    let count = rng.random_range(1..=3);
    let terms = (0..count).map(|_| {
        let alpha = (0..k).map(|_| rng.random_range(0..n)).collect();
        let beta = (0..k).map(|_| rng.random_range(0..n)).collect();
        let nu = (0..alg.d()).map(|_| rng.random_range(-3..=3)).collect();
        let c = coeff(rng.random_range(-2..=2), rng.random_range(-2..=2));
        (NormalTerm { alpha, nu, beta }, c)
    });
    alg.combination(terms.collect::<Vec<_>>())
}

/// `S x S* = rho(x)` on seeded random degree-0 elements at level `k`, plus the
/// identities `S* U^(a_j e_j) S = U^G_j`, the partition of unity and `rho` being a
/// unital *-homomorphism on the same samples.
pub fn verify_crossed_product(
    alg: &Algebra,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport> {
    if trials < 1 {
        return Err(Error::domain(
            "verify_crossed_product needs at least one trial",
        ));
    }
    let d = alg.d();
    let a = alg.spec().a().to_vec();
    let (s_el, s_star_el) = (alg.s(), alg.s_star());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<AlgebraElement> = (0..trials)
        .map(|_| random_level_element(alg, k, &mut rng))
        .collect();

    let mut fam = Family::new(format!("S x S* = rho(x), {trials} random x at level {k}"));
    let mut hom = Family::new("rho(x y) = rho(x) rho(y), rho(x*) = rho(x)*");
    for (i, x) in samples.iter().enumerate() {
        let lhs = s_el.multiply(x)?.multiply(&s_star_el)?;
        fam.identity(|| format!("trial {i}: x = {x}"), &lhs, &x.rho()?);
        let y = &samples[(i + 1) % samples.len()];
        hom.identity(
            || format!("trials {i}, {}", (i + 1) % samples.len()),
            &x.multiply(y)?.rho()?,
            &x.rho()?.multiply(&y.rho()?)?,
        );
        hom.identity(
            || format!("trial {i} adjoint"),
            &x.adjoint().rho()?,
            &x.rho()?.adjoint(),
        );
    }
    let mut checks = vec![fam.finish(), hom.finish()];

    let mut fam = Family::new("S 1 S* = rho(1) and S E_ab S* = E_(0a)(0b)");
    fam.identity(
        || "x = 1".into(),
        &s_el.multiply(&s_star_el)?,
        &alg.one().rho()?,
    );
    let paths = alg.paths(k);
    if paths.len() <= 64 {
        for x in &paths {
            for y in &paths {
                let e = alg.matrix_unit(x, y)?;
                let (mut px, mut py) = (vec![0], vec![0]);
                px.extend(x);
                py.extend(y);
                let lhs = s_el.multiply(&e)?.multiply(&s_star_el)?;
                fam.identity(
                    || format!("a = {x:?}, b = {y:?}"),
                    &lhs,
                    &alg.matrix_unit(&px, &py)?,
                );
            }
        }
    }
    checks.push(fam.finish());

    let mut fam = Family::new("S* U^(a_j e_j) S = U^G_j");
    for j in 0..d {
        let mut e = vec![0; d];
        e[j] = a[j];
        let lhs = s_star_el.multiply(&alg.u_pow(&e)?)?.multiply(&s_el)?;
        fam.identity(
            || format!("j = {}", j + 1),
            &lhs,
            &alg.u_pow(&alg.spec().g_rows()[j])?,
        );
    }
    checks.push(fam.finish());

    let mut fam = Family::new("sum_nu U^nu S S* U^-nu = 1");
    let mut sum = alg.zero();
    for nu in box_vectors(&a) {
        let u = alg.u_pow(&nu)?;
        sum = sum.add(
            &u.multiply(&s_el)?
                .multiply(&s_star_el)?
                .multiply(&u.adjoint())?,
        )?;
    }
    fam.identity(String::new, &sum, &alg.one());
    checks.push(fam.finish());

    let mut report = VerifyReport::new("crossed-product", alg, checks);
    report.notes.push(format!("seed {seed}"));
    Ok(report)
}
