use std::fmt;
use std::ops::{Index, IndexMut, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix {
            dim,
            data: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal<I: Into<BigInt>>(entries: impl IntoIterator<Item = I>) -> Self {
        let entries: Vec<BigInt> = entries.into_iter().map(Into::into).collect();
        let mut m = Self::zeros(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Builds a matrix from rows; fails unless the rows form a non-empty square.
    pub fn from_rows<I: Into<BigInt> + Clone>(rows: &[Vec<I>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::domain("matrix must have at least one row"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::domain(format!(
                    "matrix is not square: row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    dim
                )));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.dim)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diag_entries(&self) -> Vec<BigInt> {
        (0..self.dim).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n * n - 1]
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let n = self.dim - 1;
        let mut m = IntMatrix::zeros(n);
        for (ri, i) in (0..self.dim).filter(|&i| i != skip_row).enumerate() {
            for (cj, j) in (0..self.dim).filter(|&j| j != skip_col).enumerate() {
                m[(ri, cj)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Adjugate (transposed cofactor matrix): `adj(M) * M = M * adj(M) = det(M) * I`.
    pub fn adjugate(&self) -> IntMatrix {
        if self.dim == 1 {
            return IntMatrix::identity(1);
        }
        let mut adj = IntMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let c = self.minor(i, j).det();
                adj[(j, i)] = if (i + j).is_even() { c } else { -c };
            }
        }
        adj
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let det = self.det();
        if det.abs() != BigInt::one() {
            return Err(Error::domain(format!(
                "matrix is not unimodular (determinant {det})"
            )));
        }
        Ok(self.adjugate().scale(&det))
    }

    /// Entries converted to `i64`, row-major.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.rows()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        x.to_i64()
                            .ok_or_else(|| Error::domain(format!("entry {x} exceeds 64 bits")))
                    })
                    .collect()
            })
            .collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({self})")
    }
}

/// Formats as `a,b;c,d`, the same syntax accepted by [`FromStr`].
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    /// Parses `r1c1,r1c2;r2c1,r2c2`. Whitespace around entries is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut offset = 0;
        for row_text in s.split(';') {
            let mut row = Vec::new();
            let mut col_offset = offset;
            for entry in row_text.split(',') {
                let trimmed = entry.trim();
                let lead = entry.len() - entry.trim_start().len();
                let value: BigInt = trimmed.parse().map_err(|_| {
                    Error::parse(col_offset + lead, format!("invalid integer {trimmed:?}"))
                })?;
                row.push(value);
                col_offset += entry.len() + 1;
            }
            offset += row_text.len() + 1;
            rows.push(row);
        }
        IntMatrix::from_rows(&rows)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows = self
            .to_i64_rows()
            .map_err(|e| serde::ser::Error::custom(e.to_string()))?;
        let mut seq = serializer.serialize_seq(Some(self.dim))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(deserializer)?;
        IntMatrix::from_rows(&rows).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let a: IntMatrix = "4,6; 2,2".parse().unwrap();
        assert_eq!(a, m(&[&[4, 6], &[2, 2]]));
        assert_eq!(a.to_string(), "4,6;2,2");
        assert_eq!("7".parse::<IntMatrix>().unwrap(), m(&[&[7]]));
    }

    #[test]
    fn parse_rejects_ragged_and_garbage() {
        assert!(matches!(
            "1,2;3".parse::<IntMatrix>(),
            Err(Error::Domain(_))
        ));
        assert_eq!(
            "1,x".parse::<IntMatrix>(),
            Err(Error::parse(2, "invalid integer \"x\""))
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&[4, 6], &[2, 2]]).det(), BigInt::from(-4));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).det(), BigInt::zero());
        assert_eq!(
            m(&[&[2, -3, 1], &[2, 0, -1], &[1, 4, 5]]).det(),
            BigInt::from(49)
        );
    }

    #[test]
    fn two_by_two_adjugate() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).adjugate(), m(&[&[4, -2], &[-3, 1]]));
        assert_eq!(m(&[&[9]]).adjugate(), m(&[&[1]]));
    }

    #[test]
    fn json_shape() {
        let a = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[[1,1],[0,1]]");
        let back: IntMatrix = serde_json::from_str("[[1,1],[0,1]]").unwrap();
        assert_eq!(back, a);
    }
}
