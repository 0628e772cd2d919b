//! The finite quivers `Q_{n,m}(Z_p)`: vertices `Z_p`, an edge `(x, y)` whenever
//! `n*y = m*x (mod p)`, range `r(x, y) = x` and source `s(x, y) = y`.

mod iso;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use iso::{isomorphic, Isomorphism};

use crate::error::{Error, Result};
use crate::numt::{self, gcd_u64, inverse_mod, reduce_mod};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicQuiver {
    pub p: u64,
    pub n: u64,
    pub m: u64,
    /// Sorted lexicographically.
    pub edges: Vec<[u64; 2]>,
}

impl CyclicQuiver {
    pub fn has_edge(&self, x: u64, y: u64) -> bool {
        self.edges.binary_search(&[x, y]).is_ok()
    }

    /// The same vertex set with every arrow reversed (`r` and `s` swapped).
    /// As an edge set this is `Q_{m,n}(Z_p)`.
    pub fn reverse(&self) -> CyclicQuiver {
        let mut edges: Vec<[u64; 2]> = self.edges.iter().map(|&[x, y]| [y, x]).collect();
        edges.sort_unstable();
        CyclicQuiver {
            p: self.p,
            n: self.m,
            m: self.n,
            edges,
        }
    }

    /// Sizes of the weakly connected components, sorted ascending.
    pub fn component_sizes(&self) -> Vec<u64> {
        let comps = self.components();
        let mut sizes: Vec<u64> = comps.iter().map(|c| c.len() as u64).collect();
        sizes.sort_unstable();
        sizes
    }

    /// Weakly connected components, each a sorted vertex list, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<u64>> {
        let n = self.p as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for &[x, y] in &self.edges {
            let (rx, ry) = (find(&mut parent, x as usize), find(&mut parent, y as usize));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
        let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for v in 0..n {
            let root = find(&mut parent, v);
            groups.entry(root).or_default().push(v as u64);
        }
        groups.into_values().collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quiver serializes")
    }
}

/// Builds `Q_{n,m}(Z_p)`; `n` and `m` are reduced modulo `p`.
pub fn build(p: u64, n: i64, m: i64) -> Result<CyclicQuiver> {
    if p < 1 {
        return Err(Error::domain("modulus p must be at least 1"));
    }
    let (n, m) = (reduce_mod(n, p), reduce_mod(m, p));
    let p128 = p as u128;
    let mut edges = Vec::new();
    for x in 0..p {
        let rhs = (m as u128 * x as u128) % p128;
        for y in 0..p {
            if (n as u128 * y as u128) % p128 == rhs {
                edges.push([x, y]);
            }
        }
    }
    Ok(CyclicQuiver { p, n, m, edges })
}

/// `(sinkless, sourceless)`: sourceless iff `r` is onto `Z_p`, sinkless iff `s` is onto.
pub fn sink_source_report(q: &CyclicQuiver) -> (bool, bool) {
    let mut hit_r = vec![false; q.p as usize];
    let mut hit_s = vec![false; q.p as usize];
    for &[x, y] in &q.edges {
        hit_r[x as usize] = true;
        hit_s[y as usize] = true;
    }
    (hit_s.iter().all(|&b| b), hit_r.iter().all(|&b| b))
}

fn require_unit(name: &str, c: u64, p: u64) -> Result<()> {
    if p == 1 || gcd_u64(c, p) == 1 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "coefficient {name} = {c} is not coprime to p = {p}"
        )))
    }
}

/// Number of `y` with `n^k * y = y (mod p)`, i.e. `gcd(n^k - 1, p)` with `gcd(0, p) = p`.
pub fn loop_base_points(p: u64, n: i64, k: u64) -> Result<u64> {
    if p < 1 || k < 1 {
        return Err(Error::domain("loop_base_points requires p >= 1 and k >= 1"));
    }
    let n = reduce_mod(n, p);
    require_unit("n", n, p)?;
    let nk = numt::pow_mod(n, k, p);
    Ok(gcd_u64((nk + p - 1) % p, p))
}

/// Orbit-length histogram of the permutation `x -> n^{-1} m x` of `Z_p`.
pub fn cycle_structure(p: u64, n: i64, m: i64) -> Result<BTreeMap<u64, u64>> {
    if p < 1 {
        return Err(Error::domain("modulus p must be at least 1"));
    }
    let (n, m) = (reduce_mod(n, p), reduce_mod(m, p));
    require_unit("n", n, p)?;
    require_unit("m", m, p)?;
    let mult = if p == 1 {
        0
    } else {
        let n_inv = inverse_mod(n, p).expect("unit has an inverse");
        ((n_inv as u128 * m as u128) % p as u128) as u64
    };
    let mut seen = vec![false; p as usize];
    let mut hist = BTreeMap::new();
    for start in 0..p {
        if seen[start as usize] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x as usize] {
            seen[x as usize] = true;
            len += 1;
            x = ((x as u128 * mult as u128) % p as u128) as u64;
        }
        *hist.entry(len).or_insert(0) += 1;
    }
    Ok(hist)
}

/// `sum_k M_k(C(T))^{c_k}` for a permutation quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub p: u64,
    /// `(block size k, multiplicity c_k)`, ascending in `k`.
    pub summands: Vec<(u64, u64)>,
}

impl DecompositionReport {
    pub fn total_dimension(&self) -> u64 {
        self.summands.iter().map(|(k, c)| k * c).sum()
    }
}

impl fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(k, c)) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊕ ")?;
            }
            if k == 1 {
                f.write_str("C(T)")?;
            } else {
                write!(f, "M{k}(C(T))")?;
            }
            if c != 1 {
                write!(f, "^{c}")?;
            }
        }
        Ok(())
    }
}

pub fn algebra_decomposition(p: u64, n: i64, m: i64) -> Result<DecompositionReport> {
    let hist = cycle_structure(p, n, m)?;
    Ok(DecompositionReport {
        p,
        summands: hist.into_iter().collect(),
    })
}

/// Component structure of `Q_{n,n}(Z_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NnComponents {
    pub component_count: u64,
    /// Each component is a copy of `Q_{0,0}(Z_g)` with `g = component_modulus`.
    pub component_modulus: u64,
}

/// `(p / gcd(n, p), gcd(n, p))`, confirmed against the connected components of
/// `build(p, n, n)`. `n = 0` gives the single component `Q_{0,0}(Z_p)`.
pub fn qnn_components(p: u64, n: i64) -> Result<NnComponents> {
    if p < 1 {
        return Err(Error::domain("modulus p must be at least 1"));
    }
    let n_red = reduce_mod(n, p);
    let g = gcd_u64(n_red, p);
    let expected = NnComponents {
        component_count: p / g,
        component_modulus: g,
    };
    let q = build(p, n, n)?;
    let comps = q.components();
    let complete = comps
        .iter()
        .all(|c| c.len() as u64 == g && c.iter().all(|&x| c.iter().all(|&y| q.has_edge(x, y))));
    let edge_total: usize = q.edges.len();
    if comps.len() as u64 != expected.component_count
        || !complete
        || edge_total as u64 != expected.component_count * g * g
    {
        return Err(Error::domain(format!(
            "component structure of Q_{{{n_red},{n_red}}}(Z_{p}) does not match p/gcd(n,p) copies of Q_{{0,0}}(Z_{g})"
        )));
    }
    Ok(expected)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusClass {
    /// Lexicographically least `(n, m)` in the class.
    pub representative: (u64, u64),
    /// All members, sorted.
    pub members: Vec<(u64, u64)>,
}

impl CensusClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub p: u64,
    pub class_count: usize,
    /// Ordered by representative.
    pub classes: Vec<CensusClass>,
    /// `divisor_count(p - 1) + 3` when `p` is prime.
    pub closed_form: Option<u64>,
}

/// Partitions all `p^2` quivers `Q_{n,m}(Z_p)` into isomorphism classes.
pub fn census(p: u64) -> Result<Census> {
    if p < 1 {
        return Err(Error::domain("modulus p must be at least 1"));
    }
    let mut reps: Vec<CyclicQuiver> = Vec::new();
    let mut classes: Vec<CensusClass> = Vec::new();
    for n in 0..p {
        for m in 0..p {
            let q = build(p, n as i64, m as i64)?;
            match reps.iter().position(|r| isomorphic(r, &q).is_some()) {
                Some(i) => classes[i].members.push((n, m)),
                None => {
                    classes.push(CensusClass {
                        representative: (n, m),
                        members: vec![(n, m)],
                    });
                    reps.push(q);
                }
            }
        }
    }
    let closed_form = if numt::is_prime(p) {
        Some(numt::divisor_count(p as i64 - 1)? + 3)
    } else {
        None
    };
    Ok(Census {
        p,
        class_count: classes.len(),
        classes,
        closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        assert_eq!(build(3, 1, 2).unwrap().edges, vec![[0, 0], [1, 2], [2, 1]]);
        assert_eq!(build(4, 0, 0).unwrap().edges.len(), 16);
        assert_eq!(build(2, 1, 1).unwrap().edges, vec![[0, 0], [1, 1]]);
        assert_eq!(build(1, 0, 0).unwrap().edges, vec![[0, 0]]);
        assert!(build(0, 1, 1).is_err());
    }

    #[test]
    fn identity_edge_always_present() {
        for p in 1..8 {
            for n in 0..p as i64 {
                for m in 0..p as i64 {
                    assert!(build(p, n, m).unwrap().has_edge(0, 0));
                }
            }
        }
    }

    #[test]
    fn sinks_and_sources() {
        assert_eq!(sink_source_report(&build(5, 1, 1).unwrap()), (true, true));
        // Q_{0,1}(Z_3): every arrow has range 0
        assert!(!sink_source_report(&build(3, 0, 1).unwrap()).1);
        // Q_{1,0}(Z_3): every arrow has source 0
        assert!(!sink_source_report(&build(3, 1, 0).unwrap()).0);
    }

    #[test]
    fn census_pairings_at_three() {
        let q = |n, m| build(3, n, m).unwrap();
        assert!(isomorphic(&q(1, 2), &q(2, 1)).is_some());
        assert!(isomorphic(&q(0, 1), &q(1, 0)).is_none());
        let same = isomorphic(&q(1, 2), &q(1, 2)).unwrap();
        assert!(same.is_valid_between(&q(1, 2), &q(1, 2)));
    }

    #[test]
    fn base_points_examples() {
        assert_eq!(loop_base_points(72, 5, 2).unwrap(), 24);
        assert_eq!(loop_base_points(72, 5, 6).unwrap(), 72);
        assert_eq!(loop_base_points(72, 5, 1).unwrap(), 4);
        assert_eq!(loop_base_points(11, 1, 1).unwrap(), 11);
        assert!(loop_base_points(72, 6, 1).is_err());
    }

    #[test]
    fn decompositions() {
        let d = algebra_decomposition(72, 5, 1).unwrap();
        assert_eq!(d.summands, vec![(1, 4), (2, 10), (6, 8)]);
        assert_eq!(d.to_string(), "C(T)^4 ⊕ M2(C(T))^10 ⊕ M6(C(T))^8");
        let d = algebra_decomposition(77, 6, 1).unwrap();
        assert_eq!(d.summands, vec![(1, 1), (2, 3), (10, 7)]);
        assert_eq!(d.to_string(), "C(T) ⊕ M2(C(T))^3 ⊕ M10(C(T))^7");
        assert_eq!(
            algebra_decomposition(5, 1, 1).unwrap().summands,
            vec![(1, 5)]
        );
    }

    #[test]
    fn non_coprime_error_names_coefficient() {
        let err = cycle_structure(12, 5, 4).unwrap_err().to_string();
        assert!(err.contains("m = 4"), "{err}");
        let err = cycle_structure(12, 3, 5).unwrap_err().to_string();
        assert!(err.contains("n = 3"), "{err}");
    }

    #[test]
    fn qnn_examples() {
        let c = |p, n| {
            let r = qnn_components(p, n).unwrap();
            (r.component_count, r.component_modulus)
        };
        assert_eq!(c(6, 2), (3, 2));
        assert_eq!(c(7, 1), (7, 1));
        assert_eq!(c(4, 2), (2, 2));
        assert_eq!(c(5, 0), (1, 5));
    }

    #[test]
    fn small_census() {
        assert_eq!(census(1).unwrap().class_count, 1);
        assert_eq!(census(2).unwrap().class_count, 4);
        let c3 = census(3).unwrap();
        assert_eq!(c3.class_count, 5);
        assert_eq!(c3.closed_form, Some(5));
        let reps: Vec<_> = c3.classes.iter().map(|c| c.representative).collect();
        assert_eq!(reps, vec![(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]);
    }

    #[test]
    fn json_is_sorted_and_stable() {
        assert_eq!(
            build(3, 1, 2).unwrap().to_json(),
            r#"{"p":3,"n":1,"m":2,"edges":[[0,0],[1,2],[2,1]]}"#
        );
    }
}
