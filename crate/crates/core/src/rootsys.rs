//! Finite crystallographic root systems.
//!
//! Roots are integer vectors in the basis of simple roots. The Cartan
//! convention is `cartan[i][j] = <alpha_i^vee, alpha_j>`, so that
//! `s_i(alpha_j) = alpha_j - cartan[i][j] * alpha_i`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hard bound on the reflection closure. Anything larger is treated as
/// infinite type.
pub const MAX_ROOTS: usize = 10_000;

/// Cartan matrix together with a diagram automorphism `phi`.
///
/// `twist` is the combinatorial shadow of the Frobenius endomorphism; it is
/// the identity for split groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanDatum {
    pub cartan: Vec<Vec<i32>>,
    pub twist: Vec<usize>,
}

impl CartanDatum {
    /// Split datum (identity twist).
    pub fn new(cartan: Vec<Vec<i32>>) -> Result<Self> {
        let rank = cartan.len();
        Self::with_twist(cartan, (0..rank).collect())
    }

    pub fn with_twist(cartan: Vec<Vec<i32>>, twist: Vec<usize>) -> Result<Self> {
        let datum = CartanDatum { cartan, twist };
        datum.validate()?;
        Ok(datum)
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn is_split(&self) -> bool {
        self.twist.iter().enumerate().all(|(i, &j)| i == j)
    }

    fn validate(&self) -> Result<()> {
        let n = self.rank();
        if n == 0 {
            return Err(Error::InvalidCartan("rank must be positive".into()));
        }
        if n > 32 {
            return Err(Error::InvalidCartan("rank above 32 is not supported".into()));
        }
        for (i, row) in self.cartan.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCartan(format!("row {} has wrong length", i + 1)));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", i + 1)));
                }
                if i != j {
                    if a > 0 {
                        return Err(Error::InvalidCartan(format!(
                            "positive off-diagonal entry at ({}, {})",
                            i + 1,
                            j + 1
                        )));
                    }
                    if (a == 0) != (self.cartan[j][i] == 0) {
                        return Err(Error::InvalidCartan(format!(
                            "asymmetric zero pattern at ({}, {})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        if self.twist.len() != n {
            return Err(Error::InvalidCartan("twist has wrong length".into()));
        }
        let mut seen = vec![false; n];
        for &t in &self.twist {
            if t >= n || seen[t] {
                return Err(Error::InvalidCartan("twist is not a permutation".into()));
            }
            seen[t] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if self.cartan[self.twist[i]][self.twist[j]] != self.cartan[i][j] {
                    return Err(Error::InvalidCartan("twist does not preserve the Cartan matrix".into()));
                }
            }
        }
        Ok(())
    }

    /// Builds a datum from a type label.
    ///
    /// Accepts irreducible labels `A1`, `B4`, `C3`, `D5`, `E6`, `F4`, `G2`,
    /// products joined by `x` (`A2xB2`), and twisted labels `2An`, `2Dn`,
    /// `3D4`, `2E6` carrying the corresponding diagram automorphism.
    pub fn from_label(label: &str) -> Result<Self> {
        let label = label.trim();
        let unknown = || Error::UnknownLabel(label.to_string());
        let (order, body) = match label.as_bytes().first() {
            Some(b'2') | Some(b'3') => (label[..1].parse::<u8>().unwrap(), &label[1..]),
            _ => (1, label),
        };
        if order > 1 {
            let (kind, n) = parse_component(body).ok_or_else(unknown)?;
            let cartan = irreducible_cartan(kind, n).ok_or_else(unknown)?;
            let twist: Vec<usize> = match (order, kind, n) {
                (2, 'A', n) if n >= 2 => (0..n).rev().collect(),
                (2, 'D', n) if n >= 4 => {
                    let mut t: Vec<usize> = (0..n).collect();
                    t.swap(n - 2, n - 1);
                    t
                }
                (3, 'D', 4) => vec![2, 1, 3, 0],
                (2, 'E', 6) => vec![5, 1, 4, 3, 2, 0],
                _ => return Err(unknown()),
            };
            return Self::with_twist(cartan, twist);
        }
        let mut blocks = Vec::new();
        for part in body.split(['x', '+']) {
            let (kind, n) = parse_component(part).ok_or_else(unknown)?;
            blocks.push(irreducible_cartan(kind, n).ok_or_else(unknown)?);
        }
        Self::new(block_diagonal(&blocks))
    }
}

fn parse_component(s: &str) -> Option<(char, usize)> {
    let mut chars = s.trim().chars();
    let kind = chars.next()?.to_ascii_uppercase();
    let n: usize = chars.as_str().parse().ok()?;
    Some((kind, n))
}

fn block_diagonal(blocks: &[Vec<Vec<i32>>]) -> Vec<Vec<i32>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                out[off + i][off + j] = a;
            }
        }
        off += b.len();
    }
    out
}

/// Cartan matrix of an irreducible type.
///
/// Numbering follows Bourbaki except for `B_n`/`C_n`, where the doubly-laced
/// end is node 1 so that `t_2, …, t_n` span a parabolic of type `A_{n-1}`.
fn irreducible_cartan(kind: char, n: usize) -> Option<Vec<Vec<i32>>> {
    let chain = |n: usize| {
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            m[i][i] = 2;
            if i + 1 < n {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        }
        m
    };
    let m = match kind {
        'A' if n >= 1 => chain(n),
        'B' if n >= 2 => {
            let mut m = chain(n);
            // alpha_1 short
            m[0][1] = -2;
            m
        }
        'C' if n >= 2 => {
            let mut m = chain(n);
            m[1][0] = -2;
            m
        }
        'D' if n >= 4 => {
            let mut m = chain(n);
            m[n - 2][n - 1] = 0;
            m[n - 1][n - 2] = 0;
            m[n - 3][n - 1] = -1;
            m[n - 1][n - 3] = -1;
            m
        }
        'E' if (6..=8).contains(&n) => {
            let mut m = vec![vec![0; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 2;
            }
            let mut edges = vec![(0, 2), (1, 3), (2, 3)];
            edges.extend((3..n - 1).map(|i| (i, i + 1)));
            for (i, j) in edges {
                m[i][j] = -1;
                m[j][i] = -1;
            }
            m
        }
        'F' if n == 4 => {
            let mut m = chain(4);
            m[2][1] = -2;
            m
        }
        'G' if n == 2 => vec![vec![2, -3], vec![-1, 2]],
        _ => return None,
    };
    Some(m)
}

/// A finite root system with precomputed reflection tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    datum: CartanDatum,
    roots: Vec<Vec<i32>>,
    index: HashMap<Vec<i32>, usize>,
    positive: Vec<bool>,
    negation: Vec<usize>,
    simple: Vec<usize>,
    /// `reflection[i][r]` is the index of `s_i(roots[r])`.
    reflection: Vec<Vec<usize>>,
    /// `twist_table[r]` is the index of `phi(roots[r])`.
    twist_table: Vec<usize>,
}

impl RootSystem {
    /// Reflection closure of the simple roots.
    pub fn build(datum: CartanDatum) -> Result<Self> {
        datum.validate()?;
        let n = datum.rank();
        let reflect_vec = |i: usize, v: &[i32]| -> Vec<i32> {
            let pairing: i32 = (0..n).map(|j| datum.cartan[i][j] * v[j]).sum();
            let mut out = v.to_vec();
            out[i] -= pairing;
            out
        };
        let mut found: HashMap<Vec<i32>, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            found.insert(e.clone(), ());
            queue.push_back(e);
        }
        while let Some(v) = queue.pop_front() {
            for i in 0..n {
                let image = reflect_vec(i, &v);
                if !found.contains_key(&image) {
                    // no finite-type root has a coefficient above 6
                    if found.len() >= MAX_ROOTS || image.iter().any(|c| c.abs() > 6) {
                        return Err(Error::NotFiniteType);
                    }
                    found.insert(image.clone(), ());
                    queue.push_back(image);
                }
            }
        }
        let mut roots: Vec<Vec<i32>> = found.into_keys().collect();
        for r in &roots {
            let pos = r.iter().all(|&c| c >= 0);
            let neg = r.iter().all(|&c| c <= 0);
            if !(pos || neg) {
                return Err(Error::NotFiniteType);
            }
        }
        roots.sort_by(|a, b| {
            let ha: i32 = a.iter().sum();
            let hb: i32 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        let index: HashMap<Vec<i32>, usize> =
            roots.iter().enumerate().map(|(k, r)| (r.clone(), k)).collect();
        let positive = roots.iter().map(|r| r.iter().sum::<i32>() > 0).collect();
        let negation = roots
            .iter()
            .map(|r| index[&r.iter().map(|c| -c).collect::<Vec<_>>()])
            .collect();
        let simple = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                index[&e]
            })
            .collect();
        let reflection = (0..n)
            .map(|i| roots.iter().map(|r| index[&reflect_vec(i, r)]).collect())
            .collect();
        let twist_table = roots
            .iter()
            .map(|r| {
                let mut image = vec![0; n];
                for (j, &c) in r.iter().enumerate() {
                    image[datum.twist[j]] = c;
                }
                index[&image]
            })
            .collect();
        Ok(RootSystem {
            datum,
            roots,
            index,
            positive,
            negation,
            simple,
            reflection,
            twist_table,
        })
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Self::build(CartanDatum::from_label(label)?)
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn root(&self, r: usize) -> &[i32] {
        &self.roots[r]
    }

    pub fn roots(&self) -> &[Vec<i32>] {
        &self.roots
    }

    pub fn root_index(&self, coords: &[i32]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn is_positive(&self, r: usize) -> bool {
        self.positive[r]
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.roots.len()).filter(|&r| self.positive[r])
    }

    pub fn negate(&self, r: usize) -> usize {
        self.negation[r]
    }

    /// Index of the simple root `alpha_i`.
    pub fn simple_root(&self, i: usize) -> usize {
        self.simple[i]
    }

    /// Index of `s_i(roots[r])`.
    pub fn reflect(&self, i: usize, r: usize) -> usize {
        self.reflection[i][r]
    }

    pub(crate) fn reflection_table(&self, i: usize) -> &[usize] {
        &self.reflection[i]
    }

    pub(crate) fn twist_table(&self) -> &[usize] {
        &self.twist_table
    }

    /// Simple indices with nonzero coefficient in `roots[r]`.
    pub fn support(&self, r: usize) -> u32 {
        self.roots[r]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    /// `Phi_I`: roots whose support lies in the simple subset `mask`.
    pub fn parabolic_roots(&self, mask: u32) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&r| self.support(r) & !mask == 0)
            .collect()
    }

    pub fn in_parabolic(&self, r: usize, mask: u32) -> bool {
        self.support(r) & !mask == 0
    }

    /// Whether `s_i` fixes `alpha_j`.
    pub fn commutes(&self, i: usize, j: usize) -> bool {
        i != j && self.datum.cartan[i][j] == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_root_counts() {
        assert_eq!(RootSystem::from_label("A1").unwrap().num_roots(), 2);
        let a2 = RootSystem::from_label("A2").unwrap();
        assert_eq!((a2.num_roots(), a2.num_positive()), (6, 3));
        let b2 = RootSystem::from_label("B2").unwrap();
        assert_eq!((b2.num_roots(), b2.num_positive()), (8, 4));
        assert_eq!(RootSystem::from_label("G2").unwrap().num_positive(), 6);
        assert_eq!(RootSystem::from_label("F4").unwrap().num_positive(), 24);
        assert_eq!(RootSystem::from_label("E6").unwrap().num_positive(), 36);
        assert_eq!(RootSystem::from_label("D4").unwrap().num_positive(), 12);
        assert_eq!(RootSystem::from_label("A2xB2").unwrap().num_positive(), 7);
    }

    #[test]
    fn reflect_examples() {
        let a2 = RootSystem::from_label("A2").unwrap();
        let a1 = a2.simple_root(0);
        let a12 = a2.root_index(&[1, 1]).unwrap();
        assert_eq!(a2.reflect(0, a1), a2.negate(a1));
        assert_eq!(a2.reflect(0, a2.simple_root(1)), a12);
        for i in 0..2 {
            for r in 0..a2.num_roots() {
                assert_eq!(a2.reflect(i, a2.reflect(i, r)), r);
            }
        }
    }

    #[test]
    fn parabolic_root_examples() {
        let a2 = RootSystem::from_label("A2").unwrap();
        assert!(a2.parabolic_roots(0).is_empty());
        let p = a2.parabolic_roots(0b01);
        assert_eq!(p.len(), 2);
        assert!(p.contains(&a2.simple_root(0)));
        let b2 = RootSystem::from_label("B2").unwrap();
        assert_eq!(b2.parabolic_roots(0b11).len(), 8);
    }

    #[test]
    fn canonical_order_is_height_then_lex() {
        let b3 = RootSystem::from_label("B3").unwrap();
        let again = RootSystem::from_label("B3").unwrap();
        assert_eq!(b3.roots(), again.roots());
        for w in b3.roots().windows(2) {
            let (h0, h1): (i32, i32) = (w[0].iter().sum(), w[1].iter().sum());
            assert!(h0 < h1 || (h0 == h1 && w[0] < w[1]));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            CartanDatum::new(vec![vec![2, 1], vec![-1, 2]]),
            Err(Error::InvalidCartan(_))
        ));
        assert!(matches!(
            CartanDatum::new(vec![vec![2, 0], vec![-1, 2]]),
            Err(Error::InvalidCartan(_))
        ));
        // affine A_1
        let affine = CartanDatum::new(vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert_eq!(RootSystem::build(affine), Err(Error::NotFiniteType));
        // hyperbolic rank 2
        let hyp = CartanDatum::new(vec![vec![2, -3], vec![-3, 2]]).unwrap();
        assert_eq!(RootSystem::build(hyp), Err(Error::NotFiniteType));
        assert!(matches!(CartanDatum::from_label("Q7"), Err(Error::UnknownLabel(_))));
        // the flip of B2 does not preserve the Cartan matrix
        assert!(CartanDatum::with_twist(
            CartanDatum::from_label("B2").unwrap().cartan,
            vec![1, 0]
        )
        .is_err());
    }

    #[test]
    fn twisted_labels() {
        let d = CartanDatum::from_label("2A3").unwrap();
        assert_eq!(d.twist, vec![2, 1, 0]);
        assert!(!d.is_split());
        assert!(CartanDatum::from_label("3D4").is_ok());
        assert!(CartanDatum::from_label("2E6").is_ok());
        assert!(CartanDatum::from_label("2D5").is_ok());
        assert!(CartanDatum::from_label("2B3").is_err());
    }
}
