//! Minimal double-coset representatives `W_J \ W / W_I` and the subset `K_x`.

use std::collections::{HashSet, VecDeque};

use crate::weyl::{Side, SimpleSubset, WeylElt, WeylGroup};
use crate::{Error, Result};

/// `x(alpha_i) > 0` for `i` in `I` and `x^{-1}(alpha_j) > 0` for `j` in `J`.
pub fn is_double_reduced(g: &WeylGroup, x: &WeylElt, j: SimpleSubset, i: SimpleSubset) -> bool {
    g.is_reduced(x, j, Side::Left) && g.is_reduced(x, i, Side::Right)
}

/// Minimal-length representatives of `W_J \ W / W_I`, sorted by length and
/// then by canonical reduced word.
///
/// Left-`J`-reduced elements are closed under stripping a right descent, so
/// they are reached by a breadth-first search that multiplies on the right;
/// the right-`I`-reduced ones are kept.
pub fn double_coset_min_reps(g: &WeylGroup, j: SimpleSubset, i: SimpleSubset) -> Vec<WeylElt> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let mut reps = Vec::new();
    let e = g.identity();
    seen.insert(e.clone());
    queue.push_back(e);
    while let Some(a) = queue.pop_front() {
        for k in 0..g.rank() {
            if g.is_right_descent(&a, k) {
                continue;
            }
            let b = g.mul_simple_right(&a, k);
            if g.is_reduced(&b, j, Side::Left) && seen.insert(b.clone()) {
                queue.push_back(b);
            }
        }
        if g.is_reduced(&a, i, Side::Right) {
            reps.push(a);
        }
    }
    g.sort_canonical(&mut reps);
    reps
}

/// Minimal element of `W_J x W_I`, by descending through `J`-descents on the
/// left and `I`-descents on the right.
pub fn min_in_double_coset(g: &WeylGroup, x: &WeylElt, j: SimpleSubset, i: SimpleSubset) -> WeylElt {
    let mut cur = x.clone();
    loop {
        if let Some(k) = j.indices().find(|&k| g.is_left_descent(&cur, k)) {
            cur = g.mul_simple_left(&cur, k);
        } else if let Some(k) = i.indices().find(|&k| g.is_right_descent(&cur, k)) {
            cur = g.mul_simple_right(&cur, k);
        } else {
            return cur;
        }
    }
}

/// Cross-check enumeration over all of `W`. Only sensible for small groups.
pub fn double_coset_min_reps_full(g: &WeylGroup, j: SimpleSubset, i: SimpleSubset) -> Vec<WeylElt> {
    let reps: HashSet<WeylElt> = g
        .elements()
        .iter()
        .map(|x| min_in_double_coset(g, x, j, i))
        .collect();
    let mut reps: Vec<WeylElt> = reps.into_iter().collect();
    g.sort_canonical(&mut reps);
    reps
}

/// `K_x = J ∩ x(Phi_I)`: the `j` in `J` with `x^{-1}(alpha_j)` in `Phi_I`.
pub fn k_of(g: &WeylGroup, x: &WeylElt, j: SimpleSubset, i: SimpleSubset) -> Result<SimpleSubset> {
    if !is_double_reduced(g, x, j, i) {
        return Err(Error::Precondition("x not J-reduced-I"));
    }
    let rs = g.root_system();
    let x_inv = g.inv(x);
    Ok(SimpleSubset::from_indices(
        j.indices()
            .filter(|&k| rs.in_parabolic(x_inv.act(rs.simple_root(k)), i.0)),
    ))
}

/// Root regions whose intersections measure unipotent subgroups.
#[derive(Debug, Clone)]
pub enum RootRegion {
    /// `Phi^-`
    Negative,
    /// `w(Phi^+)`
    WPositive(WeylElt),
    /// `x^{-1}(Phi^+ \ Phi_J)`, the roots of `x^{-1} U_J x`.
    ConjugatedRadical(WeylElt, SimpleSubset),
}

/// Dimension of an intersection of root subgroups: the number of roots
/// lying in every region.
pub fn unipotent_intersection_dim(g: &WeylGroup, regions: &[RootRegion]) -> usize {
    let rs = g.root_system();
    let inverses: Vec<Option<WeylElt>> = regions
        .iter()
        .map(|reg| match reg {
            RootRegion::Negative => None,
            RootRegion::WPositive(w) => Some(g.inv(w)),
            RootRegion::ConjugatedRadical(x, _) => Some(x.clone()),
        })
        .collect();
    (0..rs.num_roots())
        .filter(|&r| {
            regions.iter().zip(&inverses).all(|(reg, inv)| match reg {
                RootRegion::Negative => !rs.is_positive(r),
                RootRegion::WPositive(_) => rs.is_positive(inv.as_ref().unwrap().act(r)),
                RootRegion::ConjugatedRadical(_, j) => {
                    // r = x^{-1}(beta) with beta positive outside Phi_J
                    let beta = inv.as_ref().unwrap().act(r);
                    rs.is_positive(beta) && !rs.in_parabolic(beta, j.0)
                }
            })
        })
        .count()
}

/// `e = dim(x^{-1} U_J x ∩ wU ∩ U^-)`.
pub fn e_dimension(g: &WeylGroup, x: &WeylElt, w: &WeylElt, j: SimpleSubset) -> usize {
    unipotent_intersection_dim(
        g,
        &[
            RootRegion::ConjugatedRadical(x.clone(), j),
            RootRegion::WPositive(w.clone()),
            RootRegion::Negative,
        ],
    )
}
