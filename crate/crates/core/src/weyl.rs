//! Weyl group arithmetic on root permutations.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rootsys::RootSystem;
use crate::{Error, Result};

/// A subset of the simple reflections, stored as a bit mask.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleSubset(pub u32);

impl SimpleSubset {
    pub const EMPTY: SimpleSubset = SimpleSubset(0);

    pub fn all(rank: usize) -> Self {
        SimpleSubset(((1u64 << rank) - 1) as u32)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        SimpleSubset(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: SimpleSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: SimpleSubset) -> Self {
        SimpleSubset(self.0 & other.0)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }
}

impl fmt::Display for SimpleSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| format!("t{}", i + 1)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A Weyl group element, stored as the permutation it induces on roots.
///
/// Equality and hashing are those of the permutation, so two words for the
/// same group element compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt {
    perm: Box<[u32]>,
    length: u32,
}

impl WeylElt {
    /// Image of the root with index `r`.
    pub fn act(&self, r: usize) -> usize {
        self.perm[r] as usize
    }

    pub fn length(&self) -> usize {
        self.length as usize
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }
}

/// The Weyl group of a root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylGroup {
    rs: RootSystem,
    positive: Vec<usize>,
}

impl WeylGroup {
    pub fn new(rs: RootSystem) -> Self {
        let positive = rs.positive_roots().collect();
        WeylGroup { rs, positive }
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Ok(Self::new(RootSystem::from_label(label)?))
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// All simple reflections.
    pub fn s(&self) -> SimpleSubset {
        SimpleSubset::all(self.rank())
    }

    fn make(&self, perm: Box<[u32]>) -> WeylElt {
        let length = self
            .positive
            .iter()
            .filter(|&&r| !self.rs.is_positive(perm[r] as usize))
            .count() as u32;
        WeylElt { perm, length }
    }

    pub fn identity(&self) -> WeylElt {
        WeylElt {
            perm: (0..self.rs.num_roots() as u32).collect(),
            length: 0,
        }
    }

    pub fn simple(&self, i: usize) -> WeylElt {
        let perm = self.rs.reflection_table(i).iter().map(|&r| r as u32).collect();
        WeylElt { perm, length: 1 }
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::InvalidSimpleIndex(i))
        }
    }

    pub fn check_subset(&self, set: SimpleSubset) -> Result<()> {
        match set.indices().find(|&i| i >= self.rank()) {
            Some(i) => Err(Error::InvalidSimpleIndex(i)),
            None => Ok(()),
        }
    }

    fn check_parent(&self, a: &WeylElt) -> Result<()> {
        if a.perm.len() == self.rs.num_roots() {
            Ok(())
        } else {
            Err(Error::MixedParents)
        }
    }

    /// Product of simple reflections, left to right.
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElt> {
        for &i in word {
            self.check_index(i)?;
        }
        let mut out = self.identity();
        for &i in word {
            out = self.mul_simple_right(&out, i);
        }
        Ok(out)
    }

    /// `a * b`, i.e. apply `b` first.
    pub fn mul(&self, a: &WeylElt, b: &WeylElt) -> WeylElt {
        assert_eq!(a.perm.len(), b.perm.len(), "mixed parents");
        let perm = b.perm.iter().map(|&r| a.perm[r as usize]).collect();
        self.make(perm)
    }

    pub fn checked_mul(&self, a: &WeylElt, b: &WeylElt) -> Result<WeylElt> {
        self.check_parent(a)?;
        self.check_parent(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inv(&self, a: &WeylElt) -> WeylElt {
        let mut perm = vec![0u32; a.perm.len()].into_boxed_slice();
        for (r, &image) in a.perm.iter().enumerate() {
            perm[image as usize] = r as u32;
        }
        WeylElt { perm, length: a.length }
    }

    /// `s_i * a`.
    pub fn mul_simple_left(&self, a: &WeylElt, i: usize) -> WeylElt {
        let table = self.rs.reflection_table(i);
        let perm = a.perm.iter().map(|&r| table[r as usize] as u32).collect();
        let length = if self.is_left_descent(a, i) { a.length - 1 } else { a.length + 1 };
        WeylElt { perm, length }
    }

    /// `a * s_i`.
    pub fn mul_simple_right(&self, a: &WeylElt, i: usize) -> WeylElt {
        let table = self.rs.reflection_table(i);
        let perm = table.iter().map(|&r| a.perm[r]).collect();
        let length = if self.is_right_descent(a, i) { a.length - 1 } else { a.length + 1 };
        WeylElt { perm, length }
    }

    /// `l(s_i a) < l(a)`, equivalently `a^{-1}(alpha_i) < 0`.
    pub fn is_left_descent(&self, a: &WeylElt, i: usize) -> bool {
        let alpha = self.rs.simple_root(i);
        // a^{-1}(alpha_i) is negative iff some negative root maps to alpha_i
        let pre = a.perm.iter().position(|&r| r as usize == alpha).unwrap();
        !self.rs.is_positive(pre)
    }

    /// `l(a s_i) < l(a)`, equivalently `a(alpha_i) < 0`.
    pub fn is_right_descent(&self, a: &WeylElt, i: usize) -> bool {
        !self.rs.is_positive(a.act(self.rs.simple_root(i)))
    }

    pub fn left_descents(&self, a: &WeylElt) -> SimpleSubset {
        SimpleSubset::from_indices((0..self.rank()).filter(|&i| self.is_left_descent(a, i)))
    }

    pub fn right_descents(&self, a: &WeylElt) -> SimpleSubset {
        SimpleSubset::from_indices((0..self.rank()).filter(|&i| self.is_right_descent(a, i)))
    }

    /// Deterministic reduced word: repeatedly strip the smallest left descent.
    pub fn reduced_word(&self, a: &WeylElt) -> Vec<usize> {
        let mut word = Vec::with_capacity(a.length());
        let mut cur = a.clone();
        while !cur.is_identity() {
            let i = (0..self.rank()).find(|&i| self.is_left_descent(&cur, i)).unwrap();
            word.push(i);
            cur = self.mul_simple_left(&cur, i);
        }
        word
    }

    /// Every reduced word of `a`, in lexicographic order.
    pub fn all_reduced_words(&self, a: &WeylElt) -> Vec<Vec<usize>> {
        if a.is_identity() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in self.left_descents(a).indices() {
            for tail in self.all_reduced_words(&self.mul_simple_left(a, i)) {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(i);
                w.extend(tail);
                out.push(w);
            }
        }
        out
    }

    /// Bruhat order via the subword property.
    ///
    /// Walks the canonical reduced word of `w` and greedily consumes each
    /// letter that is a left descent of what remains of `u`.
    pub fn bruhat_leq(&self, u: &WeylElt, w: &WeylElt) -> bool {
        self.bruhat_leq_word(u, &self.reduced_word(w))
    }

    /// Bruhat comparison against an explicit reduced word of the upper
    /// element.
    pub fn bruhat_leq_word(&self, u: &WeylElt, word: &[usize]) -> bool {
        if u.length() > word.len() {
            return false;
        }
        let mut rest = u.clone();
        for &i in word {
            if self.is_left_descent(&rest, i) {
                rest = self.mul_simple_left(&rest, i);
            }
        }
        rest.is_identity()
    }

    /// Longest element `w_I` of the parabolic subgroup `W_I`.
    pub fn longest_element(&self, set: SimpleSubset) -> WeylElt {
        let mut cur = self.identity();
        'grow: loop {
            for i in set.indices() {
                if !self.is_right_descent(&cur, i) {
                    cur = self.mul_simple_right(&cur, i);
                    continue 'grow;
                }
            }
            return cur;
        }
    }

    pub fn longest(&self) -> WeylElt {
        self.longest_element(self.s())
    }

    /// Image under the diagram automorphism: `phi o a o phi^{-1}`.
    pub fn apply_f(&self, a: &WeylElt) -> WeylElt {
        let t = self.rs.twist_table();
        let mut perm = vec![0u32; a.perm.len()].into_boxed_slice();
        for r in 0..a.perm.len() {
            perm[t[r]] = t[a.perm[r] as usize] as u32;
        }
        WeylElt { perm, length: a.length }
    }

    pub fn apply_f_subset(&self, set: SimpleSubset) -> SimpleSubset {
        let twist = &self.rs.datum().twist;
        SimpleSubset::from_indices(set.indices().map(|i| twist[i]))
    }

    pub fn is_reduced(&self, a: &WeylElt, set: SimpleSubset, side: Side) -> bool {
        set.indices().all(|i| match side {
            Side::Left => !self.is_left_descent(a, i),
            Side::Right => !self.is_right_descent(a, i),
        })
    }

    /// `^{wF} I = I`: for each `i` in `I`, `w(alpha_{phi(i)})` is a simple
    /// root `alpha_j` with `j` in `I`.
    pub fn normalizes(&self, w: &WeylElt, set: SimpleSubset, with_f: bool) -> bool {
        let twist = &self.rs.datum().twist;
        let mut image = SimpleSubset::EMPTY;
        for i in set.indices() {
            let src = if with_f { twist[i] } else { i };
            let r = w.act(self.rs.simple_root(src));
            match (0..self.rank()).find(|&j| self.rs.simple_root(j) == r) {
                Some(j) if set.contains(j) => image.insert(j),
                _ => return false,
            }
        }
        image == set
    }

    /// Membership in `W_I`: every inversion of `w` lies in `Phi_I`.
    pub fn in_parabolic(&self, w: &WeylElt, set: SimpleSubset) -> bool {
        self.positive
            .iter()
            .filter(|&&r| !self.rs.is_positive(w.act(r)))
            .all(|&r| self.rs.in_parabolic(r, set.0))
    }

    /// Support of the canonical reduced word.
    pub fn support(&self, w: &WeylElt) -> SimpleSubset {
        SimpleSubset::from_indices(self.reduced_word(w))
    }

    /// Positive roots sent negative by `w`.
    pub fn inversions(&self, w: &WeylElt) -> Vec<usize> {
        self.positive
            .iter()
            .copied()
            .filter(|&r| !self.rs.is_positive(w.act(r)))
            .collect()
    }

    /// Elements of `W_I`, breadth first from the identity.
    pub fn parabolic_elements(&self, set: SimpleSubset) -> Vec<WeylElt> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        let e = self.identity();
        seen.insert(e.clone());
        queue.push_back(e);
        while let Some(a) = queue.pop_front() {
            for i in set.indices() {
                let b = self.mul_simple_right(&a, i);
                if seen.insert(b.clone()) {
                    queue.push_back(b);
                }
            }
            out.push(a);
        }
        out
    }

    pub fn elements(&self) -> Vec<WeylElt> {
        self.parabolic_elements(self.s())
    }

    /// Sort key used everywhere for reproducible output.
    pub fn canonical_key(&self, a: &WeylElt) -> (usize, Vec<usize>) {
        (a.length(), self.reduced_word(a))
    }

    pub fn sort_canonical(&self, elts: &mut [WeylElt]) {
        elts.sort_by_cached_key(|a| self.canonical_key(a));
    }

    /// A Coxeter element: each simple reflection exactly once.
    pub fn is_coxeter(&self, w: &WeylElt) -> bool {
        w.length() == self.rank() && self.support(w) == self.s()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(label: &str) -> WeylGroup {
        WeylGroup::from_label(label).unwrap()
    }

    #[test]
    fn words_and_braids() {
        let g = w("A2");
        assert_eq!(g.from_word(&[0, 1, 0]).unwrap(), g.from_word(&[1, 0, 1]).unwrap());
        assert_eq!(g.from_word(&[]).unwrap(), g.identity());
        assert_eq!(g.from_word(&[0, 0]).unwrap(), g.identity());
        assert_eq!(g.from_word(&[0, 3]), Err(Error::InvalidSimpleIndex(3)));
    }

    #[test]
    fn from_word_acts_left_to_right() {
        // s1 s2 applied to alpha_1: s1(s2(alpha_1)) = s1(alpha_1 + alpha_2) = alpha_2
        let g = w("A2");
        let rs = g.root_system();
        let x = g.from_word(&[0, 1]).unwrap();
        assert_eq!(x.act(rs.simple_root(0)), rs.simple_root(1));
    }

    #[test]
    fn group_ops() {
        let g = w("B2");
        let a = g.from_word(&[0, 1, 0]).unwrap();
        assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
        assert_eq!(g.identity().act(5), 5);
        assert_eq!(g.mul(&g.simple(0), &g.simple(1)).length(), 2);
        let other = w("A3");
        assert_eq!(g.checked_mul(&a, &other.identity()), Err(Error::MixedParents));
    }

    #[test]
    fn lengths_of_longest() {
        assert_eq!(w("B2").longest().length(), 4);
        assert_eq!(w("A3").longest().length(), 6);
        assert_eq!(w("A3").simple(1).length(), 1);
        let g = w("A2");
        assert_eq!(g.longest(), g.from_word(&[0, 1, 0]).unwrap());
        assert_eq!(g.longest_element(SimpleSubset::EMPTY), g.identity());
        let b3 = w("B3");
        let set = SimpleSubset::from_indices([1, 2]);
        let phi_i = b3.root_system().parabolic_roots(set.0).len() / 2;
        assert_eq!(b3.longest_element(set).length(), phi_i);
    }

    #[test]
    fn reduced_word_examples() {
        let g = w("A2");
        assert!(g.reduced_word(&g.identity()).is_empty());
        assert_eq!(g.reduced_word(&g.longest()), vec![0, 1, 0]);
    }

    #[test]
    fn bruhat_examples() {
        let g = w("A2");
        let s1 = g.simple(0);
        let s2 = g.simple(1);
        let s1s2 = g.from_word(&[0, 1]).unwrap();
        assert!(g.bruhat_leq(&g.identity(), &s1s2));
        assert!(g.bruhat_leq(&s1, &s1s2));
        assert!(!g.bruhat_leq(&s1s2, &s2));
    }

    #[test]
    fn frobenius_twist() {
        let split = w("A3");
        let a = split.from_word(&[0, 1]).unwrap();
        assert_eq!(split.apply_f(&a), a);
        let twisted = w("2A3");
        assert_eq!(twisted.apply_f(&twisted.simple(0)), twisted.simple(2));
        let b = twisted.from_word(&[0, 1]).unwrap();
        let c = twisted.from_word(&[2, 1, 0]).unwrap();
        assert_eq!(
            twisted.apply_f(&twisted.mul(&b, &c)),
            twisted.mul(&twisted.apply_f(&b), &twisted.apply_f(&c))
        );
        assert_eq!(
            twisted.apply_f_subset(SimpleSubset::from_indices([0, 1])),
            SimpleSubset::from_indices([1, 2])
        );
    }

    #[test]
    fn reducedness() {
        let b2 = w("B2");
        let i = SimpleSubset::from_indices([0]);
        assert!(b2.is_reduced(&b2.identity(), i, Side::Left));
        let w2 = b2.from_word(&[1, 0, 1]).unwrap();
        assert!(b2.is_reduced(&w2, i, Side::Left));
        assert!(!b2.is_reduced(&b2.simple(0), i, Side::Left));
        assert!(!b2.is_reduced(&b2.simple(0), i, Side::Right));
    }

    #[test]
    fn normalizer_examples() {
        let b2 = w("B2");
        let i = SimpleSubset::from_indices([0]);
        assert!(b2.normalizes(&b2.identity(), i, false));
        assert!(b2.normalizes(&b2.from_word(&[1, 0, 1]).unwrap(), i, true));
        let a2 = w("A2");
        assert!(!a2.normalizes(&a2.simple(0), SimpleSubset::from_indices([1]), false));
    }

    #[test]
    fn parabolic_membership_matches_support() {
        let g = w("B3");
        for set in 0..8u32 {
            let set = SimpleSubset(set);
            for x in g.elements() {
                assert_eq!(g.in_parabolic(&x, set), g.support(&x).is_subset(set));
            }
        }
    }

    #[test]
    fn coxeter_detection() {
        let g = w("A3");
        assert!(g.is_coxeter(&g.from_word(&[1, 0, 2]).unwrap()));
        assert!(!g.is_coxeter(&g.from_word(&[0, 1]).unwrap()));
        assert!(!g.is_coxeter(&g.from_word(&[0, 1, 0]).unwrap()));
    }
}
