use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// `M = u * d * v` with `u`, `v` unimodular and `d` positive diagonal,
/// `d[0] | d[1] | ... | d[n-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diag_entries()
    }
}

/// Working state: `original = u * a * v` holds after every elementary step.
struct Reducer {
    n: usize,
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.n {
            let (x, y) = (self.a[(i, c)].clone(), self.a[(j, c)].clone());
            self.a[(i, c)] = y;
            self.a[(j, c)] = x;
            let (x, y) = (self.u[(c, i)].clone(), self.u[(c, j)].clone());
            self.u[(c, i)] = y;
            self.u[(c, j)] = x;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.n {
            let (x, y) = (self.a[(r, i)].clone(), self.a[(r, j)].clone());
            self.a[(r, i)] = y;
            self.a[(r, j)] = x;
            let (x, y) = (self.v[(i, r)].clone(), self.v[(j, r)].clone());
            self.v[(i, r)] = y;
            self.v[(j, r)] = x;
        }
    }

    /// row `dst` += c * row `src`
    fn add_row(&mut self, src: usize, dst: usize, c: &BigInt) {
        for k in 0..self.n {
            let delta = &self.a[(src, k)] * c;
            self.a[(dst, k)] += delta;
            let delta = &self.u[(k, dst)] * c;
            self.u[(k, src)] -= delta;
        }
    }

    /// col `dst` += c * col `src`
    fn add_col(&mut self, src: usize, dst: usize, c: &BigInt) {
        for k in 0..self.n {
            let delta = &self.a[(k, src)] * c;
            self.a[(k, dst)] += delta;
            let delta = &self.v[(dst, k)] * c;
            self.v[(src, k)] -= delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.n {
            self.a[(i, k)] = -&self.a[(i, k)];
            self.u[(k, i)] = -&self.u[(k, i)];
        }
    }

    fn smallest_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.n {
            for j in t..self.n {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn reduce_block(&mut self, t: usize) {
        loop {
            let (pi, pj) = self
                .smallest_entry(t)
                .expect("nonsingular matrix has a nonzero entry in every trailing block");
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..self.n {
                let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
                if !q.is_zero() {
                    self.add_row(t, i, &-q);
                }
                clean &= self.a[(i, t)].is_zero();
            }
            for j in t + 1..self.n {
                let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
                if !q.is_zero() {
                    self.add_col(t, j, &-q);
                }
                clean &= self.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let pivot = self.a[(t, t)].clone();
            let offender = (t + 1..self.n)
                .find(|&i| (t + 1..self.n).any(|j| !self.a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => self.add_row(i, t, &BigInt::from(1)),
                None => break,
            }
        }
        if self.a[(t, t)].is_negative() {
            self.negate_row(t);
        }
    }
}

/// Smith normal form of a nonsingular square integer matrix.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    if m.det().is_zero() {
        return Err(Error::domain(format!("matrix {m} is singular")));
    }
    let n = m.dim();
    let mut r = Reducer {
        n,
        a: m.clone(),
        u: IntMatrix::identity(n),
        v: IntMatrix::identity(n),
    };
    for t in 0..n {
        r.reduce_block(t);
    }
    Ok(SmithForm {
        u: r.u,
        d: r.a,
        v: r.v,
    })
}
