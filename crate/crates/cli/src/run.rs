use grpquiv::finquiver::{algebra_decomposition, build, census, isomorphic};
use grpquiv::numt::IntMatrix;
use grpquiv::starcalc::{
    verify_colimit_diagram, verify_crossed_product, verify_matrix_units, verify_power_quotient,
    verify_presentation, verify_subalgebra_generators, verify_twisted_family, Algebra,
    VerifyReport,
};
use grpquiv::torquiver::{reduce, verify_onb, OnbConfig, TorusQuiverSpec};
use grpquiv::Error;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::{Check, Cli, Command, Finite, Matrices, Symbolic, Torus};

pub struct Output {
    pub text: String,
    pub code: u8,
}

pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => 1,
            Error::Domain(_) => 2,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 1,
    }
}

fn emit(cli: &Cli, value: Value, text: String, ok: bool) -> Output {
    let text = if cli.json {
        let mut s = serde_json::to_string_pretty(&value).expect("json serializes");
        s.push('\n');
        s
    } else {
        text
    };
    Output {
        text,
        code: if ok { 0 } else { 2 },
    }
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Finite(f) => finite(cli, f),
        Command::Torus(t) => torus(cli, t),
        Command::Symbolic(s) => symbolic(cli, s),
    }
}

fn parse_pair(flag: &str, text: &str) -> Result<(i64, i64), Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts[..] {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(usage(format!(
                "--{flag} expects two integers 'n,m', got '{text}'"
            ))),
        },
        _ => Err(usage(format!(
            "--{flag} expects two integers 'n,m', got '{text}'"
        ))),
    }
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<i64>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            usage(format!(
                "--{flag} expects a comma-separated list of integers, got '{text}'"
            ))
        })
}

fn finite(cli: &Cli, cmd: &Finite) -> Result<Output, Failure> {
    match cmd {
        Finite::Decompose(a) => {
            let r = algebra_decomposition(a.p, a.n, a.m)?;
            let summands: Vec<Value> = r
                .summands
                .iter()
                .map(|&(k, c)| json!({"size": k, "multiplicity": c}))
                .collect();
            let value = json!({
                "p": a.p,
                "n": a.n,
                "m": a.m,
                "summands": summands,
                "total_dimension": r.total_dimension(),
                "text": r.to_string(),
            });
            Ok(emit(cli, value, format!("{r}\n"), true))
        }
        Finite::Census { p } => {
            let c = census(*p)?;
            let mut text = format!("{} classes", c.class_count);
            if let Some(cf) = c.closed_form {
                text += &format!(" (divisor_count(p - 1) + 3 = {cf})");
            }
            text.push('\n');
            for class in &c.classes {
                let (n, m) = class.representative;
                let members: Vec<String> = class
                    .members
                    .iter()
                    .map(|(a, b)| format!("({a},{b})"))
                    .collect();
                text += &format!("Q_{{{n},{m}}}: {}\n", members.join(" "));
            }
            Ok(emit(
                cli,
                serde_json::to_value(&c).expect("census serializes"),
                text,
                true,
            ))
        }
        Finite::Iso { p, q1, q2 } => {
            let (n1, m1) = parse_pair("q1", q1)?;
            let (n2, m2) = parse_pair("q2", q2)?;
            let a = build(*p, n1, m1)?;
            let b = build(*p, n2, m2)?;
            let iso = isomorphic(&a, &b);
            let mut text = format!("isomorphic: {}\n", if iso.is_some() { "yes" } else { "no" });
            if let Some(w) = &iso {
                let map: Vec<String> = w
                    .vertex_map
                    .iter()
                    .enumerate()
                    .map(|(x, y)| format!("{x}->{y}"))
                    .collect();
                text += &format!("vertex map: {}\n", map.join(" "));
            }
            let value = json!({
                "p": p,
                "q1": [a.n, a.m],
                "q2": [b.n, b.m],
                "isomorphic": iso.is_some(),
                "witness": iso,
            });
            Ok(emit(cli, value, text, true))
        }
        Finite::Build(a) => {
            let q = build(a.p, a.n, a.m)?;
            let mut text = format!(
                "Q_{{{},{}}}(Z_{}): {} vertices, {} edges\n",
                q.n,
                q.m,
                q.p,
                q.p,
                q.edges.len()
            );
            for [x, y] in &q.edges {
                text += &format!("({x}, {y})\n");
            }
            Ok(emit(
                cli,
                serde_json::to_value(&q).expect("quiver serializes"),
                text,
                true,
            ))
        }
    }
}

fn matrix(flag: &str, text: &str) -> Result<IntMatrix, Failure> {
    text.parse::<IntMatrix>()
        .map_err(|e| usage(format!("--{flag}: {e}")))
}

fn rows(m: &IntMatrix) -> Result<Value, Failure> {
    Ok(json!(m.to_i64_rows()?))
}

/// Uses `(F, G)` as given when `F` is positive diagonal and reduces it otherwise.
fn spec(mats: &Matrices) -> Result<TorusQuiverSpec, Failure> {
    let f = matrix("F", &mats.f)?;
    let g = matrix("G", &mats.g)?;
    if f.dim() != g.dim() {
        return Err(usage("F and G must have the same size"));
    }
    if f.is_diagonal() && f.diag_entries().iter().all(|a| a.is_positive()) {
        return Ok(TorusQuiverSpec::new(f, g)?);
    }
    let r = reduce(&f, &g)?;
    eprintln!(
        "note: using the reduced pair F = {}, G = {}",
        r.spec.f(),
        r.spec.g()
    );
    Ok(r.spec)
}

fn torus(cli: &Cli, cmd: &Torus) -> Result<Output, Failure> {
    match cmd {
        Torus::Reduce(mats) => {
            let f = matrix("F", &mats.f)?;
            let g = matrix("G", &mats.g)?;
            let r = reduce(&f, &g)?;
            let text = format!(
                "F' = {}\nG' = {}\nU = {}\nV = {}\n",
                r.spec.f(),
                r.spec.g(),
                r.u,
                r.v
            );
            let value = json!({
                "d": r.spec.d(),
                "F": rows(r.spec.f())?,
                "G": rows(r.spec.g())?,
                "U": rows(&r.u)?,
                "V": rows(&r.v)?,
            });
            Ok(emit(cli, value, text, true))
        }
        Torus::Onb {
            mats,
            samples,
            seed,
            tol,
        } => {
            let s = spec(mats)?;
            let r = verify_onb(
                &s,
                OnbConfig {
                    samples: *samples,
                    seed: *seed,
                    tol: *tol,
                },
            )?;
            let text = format!(
                "orth_defect = {:e}\nrecon_defect = {:e}\nsamples = {}\nseed = {}\n{}\n",
                r.max_orthonormality_defect,
                r.max_reconstruction_defect,
                r.samples,
                r.seed,
                if r.passed() { "PASS" } else { "FAIL" }
            );
            let mut value = serde_json::to_value(&r).expect("report serializes");
            value["passed"] = json!(r.passed());
            Ok(emit(cli, value, text, r.passed()))
        }
    }
}

fn symbolic(cli: &Cli, cmd: &Symbolic) -> Result<Output, Failure> {
    match cmd {
        Symbolic::Normalize { mats, word } => {
            let alg = Algebra::new(spec(mats)?)?;
            let x = alg.normalize_str(word)?;
            let value: Value = serde_json::from_str(&x.to_json()).expect("element json");
            Ok(emit(cli, value, format!("{x}\n"), true))
        }
        Symbolic::Verify {
            check,
            mats,
            k,
            kvec,
            trials,
            seed,
        } => {
            let alg = Algebra::new(spec(mats)?)?;
            let kvec = || -> Result<Vec<i64>, Failure> {
                let text = kvec
                    .as_deref()
                    .ok_or_else(|| usage("this check needs --kvec k_1,...,k_d"))?;
                parse_list("kvec", text)
            };
            let report: VerifyReport = match check {
                Check::Presentation => verify_presentation(&alg),
                Check::PowerQuotient => {
                    let k = u32::try_from(k.unwrap_or(2)).map_err(|_| usage("--k is too large"))?;
                    verify_power_quotient(&alg, k)?
                }
                Check::SubalgGens => verify_subalgebra_generators(&alg, &kvec()?)?,
                Check::Twisted => verify_twisted_family(&alg, &kvec()?)?,
                Check::MatrixUnits => verify_matrix_units(&alg, k.unwrap_or(1)),
                Check::Diagram => verify_colimit_diagram(&alg, k.unwrap_or(1)),
                Check::CrossedProduct => {
                    verify_crossed_product(&alg, k.unwrap_or(1), *trials, *seed)?
                }
            };
            let ok = report.passed && report.hypothesis_holds != Some(false);
            let value: Value = serde_json::from_str(&report.to_json()).expect("report json");
            Ok(emit(cli, value, report.to_string(), ok))
        }
    }
}
