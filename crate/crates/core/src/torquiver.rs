//! Torus quivers `Q_{F,G}(T^d)`: edges `(x, y)` with `sigma_F(y) = sigma_G(x)`
//! where `sigma_F(e^{2 pi i t}) = e^{2 pi i F t}`.
//!
//! Points of `T^d` are stored as angle vectors in `[0, 1)^d`.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numt::{smith_normal_form, IntMatrix};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const POINT_TOL: f64 = 1e-12;

/// Validated torus quiver data with `F = diag(a_1, ..., a_d)`, `a_j >= 1`, `det G != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusQuiverSpec {
    f: IntMatrix,
    g: IntMatrix,
    diag: Vec<i64>,
    g_rows: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    d: usize,
    #[serde(rename = "F")]
    f: IntMatrix,
    #[serde(rename = "G")]
    g: IntMatrix,
}

impl TorusQuiverSpec {
    pub fn new(f: IntMatrix, g: IntMatrix) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(Error::domain(format!(
                "F is {0}x{0} but G is {1}x{1}",
                f.dim(),
                g.dim()
            )));
        }
        if f.det().is_zero() {
            return Err(Error::domain("singular F"));
        }
        if g.det().is_zero() {
            return Err(Error::domain("singular G"));
        }
        if !f.is_diagonal() || f.diag_entries().iter().any(|a| !a.is_positive()) {
            return Err(Error::domain(
                "F must be positive diagonal; reduce (F, G) first",
            ));
        }
        let diag = f
            .diag_entries()
            .iter()
            .map(|a| {
                a.to_i64()
                    .ok_or_else(|| Error::domain("diagonal entry of F too large"))
            })
            .collect::<Result<Vec<_>>>()?;
        let g_rows = g.to_i64_rows()?;
        Ok(TorusQuiverSpec { f, g, diag, g_rows })
    }

    /// Convenience constructor: `F = diag(a)`, `G` given by rows.
    pub fn from_diag(a: &[i64], g_rows: &[Vec<i64>]) -> Result<Self> {
        TorusQuiverSpec::new(
            IntMatrix::diagonal(a.iter().copied()),
            IntMatrix::from_rows(g_rows)?,
        )
    }

    pub fn d(&self) -> usize {
        self.diag.len()
    }

    pub fn f(&self) -> &IntMatrix {
        &self.f
    }

    pub fn g(&self) -> &IntMatrix {
        &self.g
    }

    /// Diagonal `(a_1, ..., a_d)` of `F`.
    pub fn a(&self) -> &[i64] {
        &self.diag
    }

    /// Rows `G_j` of `G`.
    pub fn g_rows(&self) -> &[Vec<i64>] {
        &self.g_rows
    }

    /// `N = det F = |I(F)|`.
    pub fn n(&self) -> usize {
        self.diag.iter().map(|&a| a as usize).product()
    }

    pub fn det_g(&self) -> BigInt {
        self.g.det()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpecJson {
            d: self.d(),
            f: self.f.clone(),
            g: self.g.clone(),
        })
        .expect("spec serializes")
    }

    /// Parses `{"d":int, "F":[[...]], "G":[[...]]}`; `F` must already be positive diagonal.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpecJson = serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("invalid spec JSON: {e}")))?;
        if raw.d != raw.f.dim() {
            return Err(Error::domain(format!(
                "d = {} does not match the size of F",
                raw.d
            )));
        }
        TorusQuiverSpec::new(raw.f, raw.g)
    }
}

/// Result of [`reduce`]: `F = u * F' * v` and `G = u * G' * v`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub spec: TorusQuiverSpec,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Replaces `(F, G)` by `(F', G') = (u^{-1} F v^{-1}, u^{-1} G v^{-1})` with `F'` positive diagonal.
///
/// A diagonal `F` keeps its entries (signs are absorbed into `u`); anything else goes
/// through the Smith normal form.
pub fn reduce(f: &IntMatrix, g: &IntMatrix) -> Result<Reduction> {
    if f.dim() != g.dim() {
        return Err(Error::domain("F and G must have the same size"));
    }
    if f.det().is_zero() {
        return Err(Error::domain("singular F"));
    }
    if g.det().is_zero() {
        return Err(Error::domain("singular G"));
    }
    let d = f.dim();
    let (u, f_red, v) = if f.is_diagonal() {
        let signs = f
            .diag_entries()
            .iter()
            .map(|a| a.signum())
            .collect::<Vec<_>>();
        let abs = f.diag_entries().iter().map(|a| a.abs()).collect::<Vec<_>>();
        (
            IntMatrix::diagonal(signs),
            IntMatrix::diagonal(abs),
            IntMatrix::identity(d),
        )
    } else {
        let s = smith_normal_form(f)?;
        (s.u, s.d, s.v)
    };
    let g_red = &(&u.unimodular_inverse()? * g) * &v.unimodular_inverse()?;
    Ok(Reduction {
        spec: TorusQuiverSpec::new(f_red, g_red)?,
        u,
        v,
    })
}

/// Multi-index in `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<i64>);

/// `I(F) = { nu : 0 <= nu_j <= a_j - 1 }`, lexicographic, last coordinate fastest.
pub fn index_set(spec: &TorusQuiverSpec) -> Vec<MultiIndex> {
    let a = spec.a();
    let mut out = vec![MultiIndex(vec![])];
    for &aj in a {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..aj).map(move |v| {
                    let mut next = prefix.0.clone();
                    next.push(v);
                    MultiIndex(next)
                })
            })
            .collect();
    }
    out
}

/// A point `e^{2 pi i t}` of `T^d`, angles reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint(Vec<f64>);

impl TorusPoint {
    pub fn new(t: impl IntoIterator<Item = f64>) -> Self {
        TorusPoint(t.into_iter().map(wrap_unit).collect())
    }

    pub fn angles(&self) -> &[f64] {
        &self.0
    }

    /// `z^nu = e^{2 pi i <nu, t>}`.
    pub fn monomial(&self, nu: &[i64]) -> Complex64 {
        let phase: f64 = self.0.iter().zip(nu).map(|(t, &k)| t * k as f64).sum();
        Complex64::from_polar(1.0, TAU * phase)
    }
}

fn wrap_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance from `x` to the nearest integer.
fn dist_to_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn g_times(spec: &TorusQuiverSpec, t: &[f64]) -> Vec<f64> {
    spec.g_rows()
        .iter()
        .map(|row| row.iter().zip(t).map(|(&b, &tj)| b as f64 * tj).sum())
        .collect()
}

/// `r^{-1}(x)`: the `N` points `y` with `sigma_F(y) = sigma_G(x)`, ordered like [`index_set`].
pub fn fiber(spec: &TorusQuiverSpec, x: &TorusPoint) -> Vec<TorusPoint> {
    let gt = g_times(spec, x.angles());
    index_set(spec)
        .into_iter()
        .map(|nu| {
            TorusPoint::new(
                spec.a()
                    .iter()
                    .zip(&gt)
                    .zip(&nu.0)
                    .map(|((&a, &g), &v)| (g + v as f64) / a as f64),
            )
        })
        .collect()
}

/// Largest deviation of `F y - G t` from the integer lattice over the fiber.
pub fn fiber_residual(spec: &TorusQuiverSpec, x: &TorusPoint, ys: &[TorusPoint]) -> f64 {
    let gt = g_times(spec, x.angles());
    ys.iter()
        .flat_map(|y| {
            y.angles()
                .iter()
                .zip(spec.a())
                .zip(&gt)
                .map(|((&s, &a), &g)| dist_to_int(a as f64 * s - g))
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// `<xi, eta>(x) = (1/N) sum_{y in r^{-1}(x)} conj(xi(x, y)) eta(x, y)`.
pub fn inner_product<A, B>(spec: &TorusQuiverSpec, xi: A, eta: B, x: &TorusPoint) -> Complex64
where
    A: Fn(&TorusPoint, &TorusPoint) -> Complex64,
    B: Fn(&TorusPoint, &TorusPoint) -> Complex64,
{
    let ys = fiber(spec, x);
    let sum: Complex64 = ys.iter().map(|y| xi(x, y).conj() * eta(x, y)).sum();
    sum / spec.n() as f64
}

/// `u_nu(x, y) = y^nu`.
pub fn basis_vector(nu: &MultiIndex) -> impl Fn(&TorusPoint, &TorusPoint) -> Complex64 + '_ {
    move |_x, y| y.monomial(&nu.0)
}

/// Exponent pairs `(a, b)` of the test functions `x^a y^b` with `|a|_1 + |b|_1 <= 3`.
pub fn test_battery(d: usize) -> Vec<(Vec<i64>, Vec<i64>)> {
    fn vectors(len: usize, budget: i64) -> Vec<(Vec<i64>, i64)> {
        if len == 0 {
            return vec![(vec![], 0)];
        }
        let mut out = Vec::new();
        for (tail, used) in vectors(len - 1, budget) {
            for v in -(budget - used)..=(budget - used) {
                let mut w = vec![v];
                w.extend(&tail);
                out.push((w, used + v.abs()));
            }
        }
        out
    }
    vectors(2 * d, 3)
        .into_iter()
        .map(|(v, _)| (v[..d].to_vec(), v[d..].to_vec()))
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct OnbConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for OnbConfig {
    fn default() -> Self {
        OnbConfig {
            samples: 100,
            seed: 0,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OnbReport {
    #[serde(rename = "orth_defect")]
    pub max_orthonormality_defect: f64,
    #[serde(rename = "recon_defect")]
    pub max_reconstruction_defect: f64,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip)]
    pub tol: f64,
}

impl OnbReport {
    pub fn passed(&self) -> bool {
        self.max_orthonormality_defect < self.tol && self.max_reconstruction_defect < self.tol
    }
}

/// Samples `x` uniformly and measures how far `{u_nu}` is from an orthonormal basis:
/// `|<u_nu, u_mu>(x) - delta|` and `|sum_nu u_nu <u_nu, xi>(x) - xi|` on the fiber
/// over `x`, for every function in [`test_battery`].
pub fn verify_onb(spec: &TorusQuiverSpec, cfg: OnbConfig) -> Result<OnbReport> {
    if cfg.samples < 1 {
        return Err(Error::domain("verify_onb needs at least one sample"));
    }
    let d = spec.d();
    let n = spec.n() as f64;
    let basis = index_set(spec);
    let battery = test_battery(d);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut orth: f64 = 0.0;
    let mut recon: f64 = 0.0;
    for _ in 0..cfg.samples {
        let x = TorusPoint::new((0..d).map(|_| rng.random::<f64>()));
        let ys = fiber(spec, &x);
        // u_nu evaluated on the fiber: values[nu][i] = y_i^nu
        let values: Vec<Vec<Complex64>> = basis
            .iter()
            .map(|nu| ys.iter().map(|y| y.monomial(&nu.0)).collect())
            .collect();
        for (i, u) in values.iter().enumerate() {
            for (j, v) in values.iter().enumerate() {
                let ip: Complex64 = u
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a.conj() * b)
                    .sum::<Complex64>()
                    / n;
                let target = if i == j {
                    Complex64::one()
                } else {
                    Complex64::zero()
                };
                orth = orth.max((ip - target).norm());
            }
        }
        for (xa, yb) in &battery {
            let xpart = x.monomial(xa);
            let xi: Vec<Complex64> = ys.iter().map(|y| xpart * y.monomial(yb)).collect();
            let coeffs: Vec<Complex64> = values
                .iter()
                .map(|u| {
                    u.iter()
                        .zip(&xi)
                        .map(|(a, b)| a.conj() * b)
                        .sum::<Complex64>()
                        / n
                })
                .collect();
            for (k, target) in xi.iter().enumerate() {
                let rebuilt: Complex64 = values.iter().zip(&coeffs).map(|(u, c)| u[k] * c).sum();
                recon = recon.max((rebuilt - target).norm());
            }
        }
    }
    Ok(OnbReport {
        max_orthonormality_defect: orth,
        max_reconstruction_defect: recon,
        samples: cfg.samples,
        seed: cfg.seed,
        tol: cfg.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: &[i64], g: &[Vec<i64>]) -> TorusQuiverSpec {
        TorusQuiverSpec::from_diag(a, g).unwrap()
    }

    #[test]
    fn index_sets() {
        let s = spec(&[2], &[vec![3]]);
        assert_eq!(
            index_set(&s),
            vec![MultiIndex(vec![0]), MultiIndex(vec![1])]
        );
        let s = spec(&[2, 3], &[vec![1, 0], vec![0, 1]]);
        let idx = index_set(&s);
        assert_eq!(idx.len(), 6);
        assert_eq!(idx.first().unwrap().0, vec![0, 0]);
        assert_eq!(idx[1].0, vec![0, 1]);
        assert_eq!(idx.last().unwrap().0, vec![1, 2]);
        let s = spec(&[1, 1], &[vec![1, 0], vec![0, 1]]);
        assert_eq!(index_set(&s), vec![MultiIndex(vec![0, 0])]);
    }

    #[test]
    fn fiber_of_y2_equals_x3() {
        let s = spec(&[2], &[vec![3]]);
        let ys = fiber(&s, &TorusPoint::new([1.0 / 3.0]));
        let mut angles: Vec<f64> = ys.iter().map(|y| y.angles()[0]).collect();
        angles.sort_by(f64::total_cmp);
        assert!(angles[0].abs() < 1e-12);
        assert!((angles[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn kernel_fiber_and_graph_fiber() {
        let s = spec(&[2, 3], &[vec![1, 1], vec![0, 1]]);
        let ys = fiber(&s, &TorusPoint::new([0.0, 0.0]));
        let idx = index_set(&s);
        for (y, nu) in ys.iter().zip(&idx) {
            assert!((y.angles()[0] - nu.0[0] as f64 / 2.0).abs() < 1e-15);
            assert!((y.angles()[1] - nu.0[1] as f64 / 3.0).abs() < 1e-15);
        }
        let s = spec(&[1], &[vec![5]]);
        let ys = fiber(&s, &TorusPoint::new([0.3]));
        assert_eq!(ys.len(), 1);
        assert!(dist_to_int(ys[0].angles()[0] - 1.5) < 1e-12);
    }

    #[test]
    fn inner_products() {
        let s = spec(&[2], &[vec![3]]);
        let x = TorusPoint::new([0.17]);
        let one = |_: &TorusPoint, _: &TorusPoint| Complex64::one();
        assert!((inner_product(&s, one, one, &x) - 1.0).norm() < 1e-12);
        let y = |_: &TorusPoint, y: &TorusPoint| y.monomial(&[1]);
        assert!((inner_product(&s, y, y, &x) - 1.0).norm() < 1e-12);
        let (i0, i1) = (MultiIndex(vec![0]), MultiIndex(vec![1]));
        let (u0, u1) = (basis_vector(&i0), basis_vector(&i1));
        assert!(inner_product(&s, &u0, &u1, &x).norm() < 1e-9);
    }

    #[test]
    fn trivial_onb_is_exact() {
        let s = spec(&[1], &[vec![7]]);
        let r = verify_onb(
            &s,
            OnbConfig {
                samples: 5,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.max_orthonormality_defect, 0.0);
        assert!(r.max_reconstruction_defect < 1e-12);
    }

    #[test]
    fn reduce_diagonal_cases() {
        let f: IntMatrix = "2,0;0,3".parse().unwrap();
        let g: IntMatrix = "1,1;0,1".parse().unwrap();
        let r = reduce(&f, &g).unwrap();
        assert_eq!(r.u, IntMatrix::identity(2));
        assert_eq!(r.v, IntMatrix::identity(2));
        assert_eq!(r.spec.g(), &g);

        let f: IntMatrix = "-2,0;0,3".parse().unwrap();
        let r = reduce(&f, &g).unwrap();
        assert_eq!(r.spec.a(), &[2, 3]);
        assert_eq!(&(&r.u * r.spec.f()) * &r.v, f);
        assert_eq!(&(&r.u * r.spec.g()) * &r.v, g);
    }

    #[test]
    fn reduce_through_smith() {
        let f: IntMatrix = "4,6;2,2".parse().unwrap();
        let g = IntMatrix::identity(2);
        let r = reduce(&f, &g).unwrap();
        assert_eq!(r.spec.a(), &[2, 2]);
        assert_eq!(r.spec.det_g().abs(), BigInt::one());
        assert_eq!(&(&r.u * r.spec.f()) * &r.v, f);
        assert_eq!(&(&r.u * r.spec.g()) * &r.v, g);
    }

    #[test]
    fn singular_inputs() {
        let ok = IntMatrix::identity(2);
        let bad: IntMatrix = "1,1;1,1".parse().unwrap();
        assert_eq!(reduce(&bad, &ok).unwrap_err(), Error::domain("singular F"));
        assert_eq!(reduce(&ok, &bad).unwrap_err(), Error::domain("singular G"));
    }

    #[test]
    fn spec_json() {
        let s = spec(&[2, 3], &[vec![1, 1], vec![0, 1]]);
        let text = s.to_json();
        assert_eq!(text, r#"{"d":2,"F":[[2,0],[0,3]],"G":[[1,1],[0,1]]}"#);
        assert_eq!(TorusQuiverSpec::from_json(&text).unwrap(), s);
        assert!(
            TorusQuiverSpec::from_json(r#"{"d":1,"F":[[2,1],[0,1]],"G":[[1,0],[0,1]]}"#).is_err()
        );
    }

    #[test]
    fn report_json_fields() {
        let r = OnbReport {
            max_orthonormality_defect: 0.0,
            max_reconstruction_defect: 0.5,
            samples: 3,
            seed: 7,
            tol: 1e-9,
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"orth_defect":0.0,"recon_defect":0.5,"samples":3,"seed":7}"#
        );
        assert!(!r.passed());
    }

    #[test]
    fn battery_size() {
        // lattice points of the l1 ball of radius 3 in Z^2 and Z^4
        assert_eq!(test_battery(1).len(), 25);
        assert_eq!(test_battery(2).len(), 129);
    }
}
