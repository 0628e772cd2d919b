//! Acceptance criteria, one line each. Exits with status 1 if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use grpquiv::finquiver::{algebra_decomposition, build, census, CyclicQuiver};
use grpquiv::numt::{divisor_count, gcd_u64, mult_order, smith_normal_form, IntMatrix};
use grpquiv::starcalc::{
    random_words, verify_colimit_diagram, verify_crossed_product, verify_matrix_units,
    verify_power_quotient, verify_presentation, verify_subalgebra_generators,
    verify_twisted_family, Algebra, VerifyReport, WordSum,
};
use grpquiv::torquiver::{verify_onb, OnbConfig, TorusQuiverSpec};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMITS: [u64; 7] = [1, 30, 10, 1, 5, 60, 30];
const ONB_TOL: f64 = 1e-9;
const WORDS: usize = 500;
const WORD_LEN: usize = 8;
const CROSSED_TRIALS: usize = 25;

type Outcome = Result<(), Vec<String>>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn finish(failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

fn criterion_1() -> Outcome {
    let mut f = Vec::new();
    for (p, n, want) in [
        (72, 5, vec![(1, 4), (2, 10), (6, 8)]),
        (77, 6, vec![(1, 1), (2, 3), (10, 7)]),
    ] {
        let got = algebra_decomposition(p, n, 1).map(|r| r.summands);
        check(&mut f, got.as_ref() == Ok(&want), || {
            format!("p = {p}, n = {n}: got {got:?}")
        });
    }
    finish(f)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn canonical_form(q: &CyclicQuiver, perms: &[Vec<usize>]) -> Vec<bool> {
    let n = q.p as usize;
    let mut adj = vec![false; n * n];
    for &[x, y] in &q.edges {
        adj[x as usize * n + y as usize] = true;
    }
    perms
        .iter()
        .map(|perm| {
            let mut img = vec![false; n * n];
            for x in 0..n {
                for y in 0..n {
                    img[perm[x] * n + perm[y]] = adj[x * n + y];
                }
            }
            img
        })
        .min()
        .unwrap()
}

fn criterion_2() -> Outcome {
    let mut f = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        let c = census(p).unwrap();
        let want = divisor_count(p as i64 - 1).unwrap() + 3;
        check(&mut f, c.class_count as u64 == want, || {
            format!("p = {p}: {} classes, expected {want}", c.class_count)
        });
        if p <= 7 {
            let perms = permutations(p as usize);
            let mut classes: BTreeMap<Vec<bool>, Vec<(u64, u64)>> = BTreeMap::new();
            for n in 0..p {
                for m in 0..p {
                    let q = build(p, n as i64, m as i64).unwrap();
                    classes
                        .entry(canonical_form(&q, &perms))
                        .or_default()
                        .push((n, m));
                }
            }
            let mut oracle: Vec<_> = classes.into_values().collect();
            oracle.sort();
            let mut got: Vec<_> = c.classes.iter().map(|k| k.members.clone()).collect();
            got.sort();
            check(&mut f, got == oracle, || {
                format!("p = {p}: classes differ from the exhaustive oracle")
            });
        }
    }
    check(&mut f, census(2).unwrap().class_count == 4, || {
        "p = 2 should have 4 classes".into()
    });
    let c3 = census(3).unwrap();
    check(&mut f, c3.class_count == 5, || {
        "p = 3 should have 5 classes".into()
    });
    for pair in [
        [(0, 1), (0, 2)],
        [(1, 1), (2, 2)],
        [(1, 2), (2, 1)],
        [(1, 0), (2, 0)],
    ] {
        let together = c3
            .classes
            .iter()
            .any(|k| pair.iter().all(|q| k.members.contains(q)));
        check(&mut f, together, || {
            format!("p = 3: {:?} and {:?} not in one class", pair[0], pair[1])
        });
    }
    finish(f)
}

fn criterion_3() -> Outcome {
    let mut f = Vec::new();
    for p in 2..=100u64 {
        for n in 1..p {
            if gcd_u64(n, p) != 1 {
                continue;
            }
            let mut nk = 1;
            for k in 1..=mult_order(n as i64, p).unwrap() {
                nk = nk * n % p;
                let brute = (0..p).filter(|&y| nk * y % p == y).count() as u64;
                let formula = gcd_u64((nk + p - 1) % p, p);
                check(&mut f, brute == formula, || {
                    format!("p = {p}, n = {n}, k = {k}: {formula} vs {brute}")
                });
            }
        }
    }
    finish(f)
}

fn criterion_4() -> Outcome {
    let mut f = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut done = 0;
    while done < 100 {
        let d = rng.random_range(1..=3);
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.random_range(-6..=6)).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows).unwrap();
        if m.det().is_zero() {
            continue;
        }
        done += 1;
        let s = smith_normal_form(&m).unwrap();
        let factors = s.invariant_factors();
        let ok = &(&s.u * &s.d) * &s.v == m
            && s.u.det().abs().is_one()
            && s.v.det().abs().is_one()
            && s.d.is_diagonal()
            && factors.iter().all(|x| x.is_positive())
            && factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        check(&mut f, ok, || format!("M = {m}"));
    }
    finish(f)
}

fn onb_battery() -> Vec<TorusQuiverSpec> {
    let mut out = Vec::new();
    for a in [1, 2, 3] {
        for g in [1, 3, -1] {
            out.push(TorusQuiverSpec::from_diag(&[a], &[vec![g]]).unwrap());
        }
    }
    for g in [
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![1, 1], vec![0, 1]],
        vec![vec![5, 0], vec![0, 1]],
    ] {
        out.push(TorusQuiverSpec::from_diag(&[2, 3], &g).unwrap());
    }
    out
}

fn criterion_5() -> Outcome {
    let mut f = Vec::new();
    for spec in onb_battery() {
        let r = verify_onb(
            &spec,
            OnbConfig {
                samples: 100,
                seed: 0,
                tol: ONB_TOL,
            },
        )
        .unwrap();
        let ok = r.max_orthonormality_defect < ONB_TOL && r.max_reconstruction_defect < ONB_TOL;
        check(&mut f, ok, || format!("{}: {r:?}", spec.to_json()));
    }
    finish(f)
}

fn algebra_battery() -> Vec<Algebra> {
    let mut out = Vec::new();
    for a in [2, 3] {
        for g in [1, 3, -1] {
            out.push(Algebra::from_diag(&[a], &[vec![g]]).unwrap());
        }
    }
    for g in [
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![1, 1], vec![0, 1]],
        vec![vec![5, 0], vec![0, 1]],
    ] {
        out.push(Algebra::from_diag(&[2, 3], &g).unwrap());
    }
    out
}

fn record(f: &mut Vec<String>, r: &VerifyReport, what: &str) {
    for c in r.failures() {
        f.push(format!(
            "{} {what} [F = {}, G = {}]: {}{}",
            r.suite,
            r.f,
            r.g,
            c.name,
            c.detail
                .as_deref()
                .map(|d| format!(" ({d})"))
                .unwrap_or_default()
        ));
    }
}

/// All vectors `k` with `1 <= k_j <= 3` that satisfy `keep`.
fn exponent_vectors(d: usize, keep: impl Fn(usize, i64) -> bool) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for j in 0..d {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (1..=3).filter(|&k| keep(j, k)).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

fn criterion_6() -> Outcome {
    let mut f = Vec::new();
    let battery = algebra_battery();
    for x in &battery {
        record(&mut f, &verify_presentation(x), "");
    }
    let small = [
        Algebra::from_diag(&[2], &[vec![3]]).unwrap(),
        Algebra::from_diag(&[3], &[vec![2]]).unwrap(),
        Algebra::from_diag(&[4], &[vec![1]]).unwrap(),
        Algebra::from_diag(&[2, 2], &[vec![1, 1], vec![0, 1]]).unwrap(),
    ];
    for x in &small {
        for k in 0..=3 {
            record(&mut f, &verify_matrix_units(x, k), &format!("k = {k}"));
        }
    }
    for x in battery.iter().filter(|x| x.det_g().abs().is_one()) {
        for k in 1..=3 {
            record(
                &mut f,
                &verify_power_quotient(x, k).unwrap(),
                &format!("k = {k}"),
            );
        }
    }
    for x in &battery {
        let a = x.spec().a().to_vec();
        let det_f: i64 = a.iter().product();
        if gcd_u64(det_f as u64, x.det_g().abs().try_into().unwrap()) == 1 {
            for ks in exponent_vectors(x.d(), |j, k| a[j] % k == 0) {
                record(
                    &mut f,
                    &verify_subalgebra_generators(x, &ks).unwrap(),
                    &format!("k = {ks:?}"),
                );
            }
        }
        for ks in exponent_vectors(x.d(), |j, k| gcd_u64(k as u64, a[j] as u64) == 1) {
            record(
                &mut f,
                &verify_twisted_family(x, &ks).unwrap(),
                &format!("k = {ks:?}"),
            );
        }
        for k in 0..=2 {
            record(&mut f, &verify_colimit_diagram(x, k), &format!("k = {k}"));
        }
        record(
            &mut f,
            &verify_crossed_product(x, 1, CROSSED_TRIALS, 0).unwrap(),
            "k = 1",
        );
    }
    finish(f)
}

fn criterion_7() -> Outcome {
    let mut f = Vec::new();
    for x in algebra_battery() {
        let words = random_words(x.d(), WORDS, WORD_LEN, 0);
        let norm: Vec<_> = words
            .iter()
            .map(|w| x.normalize(&WordSum::word(w.clone())))
            .collect();
        for (w, e) in words.iter().zip(&norm) {
            let again = e.canonicalize();
            check(&mut f, again.terms().eq(e.terms()), || {
                format!("{x}: not idempotent on {w}")
            });
            let star = x.normalize(&WordSum::word(w.adjoint()));
            check(&mut f, star.equals(&e.adjoint()).unwrap(), || {
                format!("{x}: adjoint of {w}")
            });
        }
        for i in 0..words.len() - 1 {
            let whole = x.normalize(&WordSum::word(words[i].concat(&words[i + 1])));
            let prod = norm[i].multiply(&norm[i + 1]).unwrap();
            check(&mut f, whole.equals(&prod).unwrap(), || {
                format!("{x}: product of {} and {}", words[i], words[i + 1])
            });
        }
        for i in 0..words.len() - 2 {
            let (a, b, c) = (&norm[i], &norm[i + 1], &norm[i + 2]);
            let left = a.multiply(b).unwrap().multiply(c).unwrap();
            let right = a.multiply(&b.multiply(c).unwrap()).unwrap();
            check(&mut f, left.equals(&right).unwrap(), || {
                format!("{x}: associativity at word {i}")
            });
        }
    }
    finish(f)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("finite decompositions for p = 72 and p = 77", criterion_1),
        ("census closed form and exhaustive oracle", criterion_2),
        ("base-point formula for p <= 100", criterion_3),
        ("Smith normal form certificates", criterion_4),
        ("orthonormal basis defects", criterion_5),
        ("symbolic relation suites", criterion_6),
        ("rewriting properties on the word battery", criterion_7),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let limit = Duration::from_secs(LIMITS[i]);
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let mut problems = outcome.err().unwrap_or_default();
        if took > limit {
            problems.push(format!("took {took:.2?}, limit {limit:?}"));
        }
        let pass = problems.is_empty();
        all &= pass;
        println!(
            "criterion {}: {} ({name}; {took:.2?}, limit {limit:?})",
            i + 1,
            if pass { "PASS" } else { "FAIL" }
        );
        for p in problems.iter().take(10) {
            println!("    {p}");
        }
        if problems.len() > 10 {
            println!("    ... {} more", problems.len() - 10);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
