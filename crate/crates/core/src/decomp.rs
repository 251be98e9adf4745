//! Pieces `X_x` of `X(I, wF)` along the `P_J`-orbits of `G/P_I`, and their
//! classification.
//!
//! A nonempty piece is
//!
//! - *Case 1* when `v = x w F(x)^{-1}` lies in `W_J` and is left
//!   `W_{K_x}`-reduced;
//! - *Case 2* when some left descent `s` of `w = s w'` satisfies
//!   (i) `v = x w' F(x)^{-1} ∈ W_J` with `l(v) = l(w')`,
//!   (ii) `s` fixes `Phi_I` pointwise,
//!   (iii) `x (W_I s) x^{-1}` meets no element of `W_J`;
//! - *Unclassified* otherwise.
//!
//! Chains `I_1 -w_1-> I_2 -> ⋯ -w_r-> I_{r+1} = F(I_1)` with optional
//! minimal degenerations are validated rather than derived.

use serde::Serialize;

use crate::cosets::{double_coset_min_reps, e_dimension, is_double_reduced, k_of};
use crate::deodhar::{piece_nonempty, witness_cells, CellSummary};
use crate::weyl::{Side, SimpleSubset, WeylElt, WeylGroup};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub x: WeylElt,
    pub nonempty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Empty,
    Case1 {
        v: WeylElt,
        k: SimpleSubset,
        e: usize,
    },
    Case2 {
        s: usize,
        w_prime: WeylElt,
        v: WeylElt,
        k: SimpleSubset,
    },
    Unclassified {
        note: String,
    },
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Empty => "Empty",
            Status::Case1 { .. } => "Case1",
            Status::Case2 { .. } => "Case2",
            Status::Unclassified { .. } => "Unclassified",
        }
    }
}

/// A witness cell: `y ∈ W_I` and a distinguished subexpression of `yw`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCell {
    pub y_word: Vec<usize>,
    pub cell: CellSummary,
    /// `x p F(x)^{-1}` for the product `p` of the subexpression.
    pub v_word: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceClassification {
    pub x: WeylElt,
    pub status: Status,
    /// Set when Case 1 holds and some left descent also meets the Case 2
    /// hypotheses.
    pub also_case2: Option<usize>,
    pub cells: Vec<WitnessCell>,
}

fn check_inputs(g: &WeylGroup, i: SimpleSubset, w: &WeylElt, j: SimpleSubset) -> Result<()> {
    g.check_subset(i)?;
    g.check_subset(j)?;
    if !g.is_reduced(w, i, Side::Left) {
        return Err(Error::Precondition("w not I-reduced"));
    }
    if !g.normalizes(w, i, true) {
        return Err(Error::Precondition("wF does not normalise I"));
    }
    if g.apply_f_subset(j) != j {
        return Err(Error::Precondition("J not F-stable"));
    }
    Ok(())
}

/// One entry per minimal double-coset representative, in canonical order.
pub fn enumerate_pieces(g: &WeylGroup, i: SimpleSubset, w: &WeylElt, j: SimpleSubset) -> Result<Vec<Piece>> {
    check_inputs(g, i, w, j)?;
    double_coset_min_reps(g, j, i)
        .into_iter()
        .map(|x| {
            let nonempty = piece_nonempty(g, i, w, j, &x)?;
            Ok(Piece { x, nonempty })
        })
        .collect()
}

/// `x y s x^{-1} ∉ W_J` for every `y ∈ W_I`.
fn coset_avoids_levi(g: &WeylGroup, x: &WeylElt, i: SimpleSubset, s: &WeylElt, j: SimpleSubset) -> bool {
    let x_inv = g.inv(x);
    g.parabolic_elements(i)
        .iter()
        .all(|y| !g.in_parabolic(&g.mul(&g.mul(x, &g.mul(y, s)), &x_inv), j))
}

/// `s_k` fixes every root of `Phi_I`.
fn fixes_parabolic_roots(g: &WeylGroup, k: usize, i: SimpleSubset) -> bool {
    let rs = g.root_system();
    i.indices().all(|t| rs.commutes(k, t))
}

/// Case 2 data for the descent `s`, if hypotheses (i)–(iii) hold.
fn case2_for(
    g: &WeylGroup,
    i: SimpleSubset,
    w: &WeylElt,
    j: SimpleSubset,
    x: &WeylElt,
    s: usize,
) -> Option<(WeylElt, WeylElt)> {
    if !g.is_left_descent(w, s) {
        return None;
    }
    let w_prime = g.mul_simple_left(w, s);
    let fx_inv = g.inv(&g.apply_f(x));
    let v = g.mul(&g.mul(x, &w_prime), &fx_inv);
    let cond_i = g.in_parabolic(&v, j) && v.length() == w_prime.length();
    if cond_i && fixes_parabolic_roots(g, s, i) && coset_avoids_levi(g, x, i, &g.simple(s), j) {
        Some((w_prime, v))
    } else {
        None
    }
}

pub fn classify_piece(
    g: &WeylGroup,
    i: SimpleSubset,
    w: &WeylElt,
    j: SimpleSubset,
    x: &WeylElt,
) -> Result<PieceClassification> {
    check_inputs(g, i, w, j)?;
    if !is_double_reduced(g, x, j, i) {
        return Err(Error::Precondition("x not J-reduced-I"));
    }
    let empty = |status| PieceClassification {
        x: x.clone(),
        status,
        also_case2: None,
        cells: Vec::new(),
    };
    if !piece_nonempty(g, i, w, j, x)? {
        return Ok(empty(Status::Empty));
    }
    let k = k_of(g, x, j, i)?;
    let fx_inv = g.inv(&g.apply_f(x));
    let cells = witness_cells(g, i, w, j, x)
        .into_iter()
        .map(|(y, sub)| WitnessCell {
            y_word: g.reduced_word(&y),
            cell: sub.summary(),
            v_word: g.reduced_word(&g.mul(&g.mul(x, &sub.product), &fx_inv)),
        })
        .collect();
    let case2 = g
        .left_descents(w)
        .indices()
        .find_map(|s| case2_for(g, i, w, j, x, s).map(|(wp, v)| (s, wp, v)));

    let v1 = g.mul(&g.mul(x, w), &fx_inv);
    let mut note = None;
    if g.in_parabolic(&v1, j) {
        if g.is_reduced(&v1, k, Side::Left) {
            let e = e_dimension(g, x, w, j);
            return Ok(PieceClassification {
                x: x.clone(),
                status: Status::Case1 { v: v1, k, e },
                also_case2: case2.map(|(s, _, _)| s),
                cells,
            });
        }
        note = Some("x w F(x)^-1 lies in W_J but is not W_K-reduced".to_string());
    }
    let status = match case2 {
        Some((s, w_prime, v)) => Status::Case2 { s, w_prime, v, k },
        None => Status::Unclassified {
            note: note.unwrap_or_else(|| "neither Case 1 nor Case 2 hypotheses hold".to_string()),
        },
    };
    Ok(PieceClassification {
        x: x.clone(),
        status,
        also_case2: None,
        cells,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterReport {
    pub x: WeylElt,
    pub v: WeylElt,
    /// Number of `gamma_i = 1` in the unique witness cell.
    pub gm_exponent: usize,
    pub nonempty_count: usize,
}

/// The unique nonempty piece of `X(w)` for a split Coxeter element `w`,
/// with the induced element `v` of `W_J`.
pub fn coxeter_report(g: &WeylGroup, w: &WeylElt, j: SimpleSubset) -> Result<CoxeterReport> {
    g.check_subset(j)?;
    if !g.is_coxeter(w) {
        return Err(Error::NotCoxeter);
    }
    if !g.root_system().datum().is_split() {
        return Err(Error::Precondition("twist is not split"));
    }
    let pieces = enumerate_pieces(g, SimpleSubset::EMPTY, w, j)?;
    let nonempty: Vec<&Piece> = pieces.iter().filter(|p| p.nonempty).collect();
    let x = match nonempty.first() {
        Some(p) if nonempty.len() == 1 => p.x.clone(),
        _ => return Err(Error::Precondition("expected exactly one nonempty piece")),
    };
    let cells = witness_cells(g, SimpleSubset::EMPTY, w, j, &x);
    let [(_, cell)] = cells.as_slice() else {
        return Err(Error::Precondition("expected exactly one witness cell"));
    };
    let v = g.mul(&g.mul(&x, &cell.product), &g.inv(&x));
    Ok(CoxeterReport {
        x,
        v,
        gm_exponent: cell.m_gamma,
        nonempty_count: nonempty.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTerm {
    pub i: SimpleSubset,
    pub w: WeylElt,
    pub gamma: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    pub terms: Vec<ChainTerm>,
    pub x: Vec<WeylElt>,
}

/// Outcome of the hypotheses at one index of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermVerdict {
    pub index: usize,
    pub z: WeylElt,
    pub v: WeylElt,
    pub k: SimpleSubset,
    /// `(hypothesis name, holds)` in evaluation order.
    pub checks: Vec<(&'static str, bool)>,
    /// `v_i K_{x_{i+1}} v_i^{-1} = K_{x_i}`; reported, never enforced.
    pub k_compatible: bool,
}

impl TermVerdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|&(_, ok)| ok)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|&(n, _)| n).collect()
    }
}

fn conjugate_subset(g: &WeylGroup, a: &WeylElt, set: SimpleSubset) -> Option<SimpleSubset> {
    let rs = g.root_system();
    let mut out = SimpleSubset::EMPTY;
    for t in set.indices() {
        let r = a.act(rs.simple_root(t));
        out.insert((0..g.rank()).find(|&k| rs.simple_root(k) == r)?);
    }
    Some(out)
}

/// Checks the structural shape of a chain and then the per-index
/// hypotheses. Structural defects are errors; hypothesis failures are
/// reported in the verdicts.
pub fn validate_chain(g: &WeylGroup, spec: &ChainSpec, j: SimpleSubset) -> Result<Vec<TermVerdict>> {
    let r = spec.terms.len();
    let bad = |msg: String| Err(Error::InvalidChain(msg));
    if r == 0 {
        return bad("empty chain".into());
    }
    if spec.x.len() != r {
        return bad(format!("expected {r} x-elements, got {}", spec.x.len()));
    }
    g.check_subset(j)?;
    if g.apply_f_subset(j) != j {
        return Err(Error::Precondition("J not F-stable"));
    }
    let next_i = |idx: usize| {
        if idx + 1 < r {
            spec.terms[idx + 1].i
        } else {
            g.apply_f_subset(spec.terms[0].i)
        }
    };
    for (idx, t) in spec.terms.iter().enumerate() {
        g.check_subset(t.i)?;
        if !g.is_reduced(&t.w, t.i, Side::Left) {
            return bad(format!("term {}: w not I-reduced", idx + 1));
        }
        if conjugate_subset(g, &t.w, next_i(idx)) != Some(t.i) {
            return bad(format!("term {}: w does not conjugate the next I onto I", idx + 1));
        }
        if let Some(s) = t.gamma {
            g.check_index(s)?;
            if !g.is_left_descent(&t.w, s) {
                return bad(format!("term {}: gamma is not a left descent of w", idx + 1));
            }
        }
        if !is_double_reduced(g, &spec.x[idx], j, t.i) {
            return bad(format!("term {}: x not J-reduced-I", idx + 1));
        }
    }
    if spec.x.iter().any(|x| x.length() != spec.x[0].length()) {
        return bad("x-elements of unequal length".into());
    }

    let x_next = |idx: usize| {
        if idx + 1 < r {
            spec.x[idx + 1].clone()
        } else {
            g.apply_f(&spec.x[0])
        }
    };
    let mut verdicts = Vec::with_capacity(r);
    let ks: Vec<SimpleSubset> = spec
        .terms
        .iter()
        .zip(&spec.x)
        .map(|(t, x)| k_of(g, x, j, t.i))
        .collect::<Result<_>>()?;
    for (idx, t) in spec.terms.iter().enumerate() {
        let x = &spec.x[idx];
        let z = match t.gamma {
            Some(s) => g.mul_simple_left(&t.w, s),
            None => t.w.clone(),
        };
        let v = g.mul(&g.mul(x, &z), &g.inv(&x_next(idx)));
        let k = ks[idx];
        let checks = match t.gamma {
            None => vec![
                ("v in W_J", g.in_parabolic(&v, j)),
                ("v K-reduced", g.is_reduced(&v, k, Side::Left)),
            ],
            Some(s) => vec![
                ("(i) v in W_J", g.in_parabolic(&v, j)),
                ("(i) l(v) = l(z)", v.length() == z.length()),
                ("(ii) gamma fixes Phi_I", fixes_parabolic_roots(g, s, t.i)),
                ("(iii) x(W_I gamma) avoids W_J", coset_avoids_levi(g, x, t.i, &g.simple(s), j)),
            ],
        };
        let k_next = if idx + 1 < r { ks[idx + 1] } else { g.apply_f_subset(ks[0]) };
        let k_compatible = conjugate_subset(g, &v, k_next) == Some(k);
        verdicts.push(TermVerdict {
            index: idx,
            z,
            v,
            k,
            checks,
            k_compatible,
        });
    }
    Ok(verdicts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSummary {
    /// Number of degenerated terms: the dimension of the torus.
    pub d: usize,
    /// `sum_i dim(x_i^{-1} U_J x_i ∩ z_i U ∩ U^-)`.
    pub e: usize,
    /// `(v_1, …, v_r)`; the braid element is the tuple, not its image in `W`.
    pub v: Vec<WeylElt>,
    pub v_product: WeylElt,
}

pub fn chain_summary(g: &WeylGroup, spec: &ChainSpec, j: SimpleSubset) -> Result<ChainSummary> {
    let verdicts = validate_chain(g, spec, j)?;
    if let Some(bad) = verdicts.iter().find(|v| !v.passed()) {
        return Err(Error::InvalidChain(format!(
            "term {}: {}",
            bad.index + 1,
            bad.failures().join(", ")
        )));
    }
    let d = spec.terms.iter().filter(|t| t.gamma.is_some()).count();
    let e = verdicts
        .iter()
        .zip(&spec.x)
        .map(|(v, x)| e_dimension(g, x, &v.z, j))
        .sum();
    let v: Vec<WeylElt> = verdicts.into_iter().map(|t| t.v).collect();
    let v_product = v.iter().fold(g.identity(), |acc, a| g.mul(&acc, a));
    Ok(ChainSummary { d, e, v, v_product })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ix: &[usize]) -> SimpleSubset {
        SimpleSubset::from_indices(ix.iter().copied())
    }

    #[test]
    fn j_equal_s_has_one_piece() {
        let g = WeylGroup::from_label("A3").unwrap();
        let w = g.from_word(&[0, 1, 2]).unwrap();
        let pieces = enumerate_pieces(&g, set(&[]), &w, g.s()).unwrap();
        assert_eq!(pieces, vec![Piece { x: g.identity(), nonempty: true }]);
    }

    #[test]
    fn rejects_unstable_j() {
        let g = WeylGroup::from_label("2A3").unwrap();
        let w = g.from_word(&[0, 1, 2]).unwrap();
        assert_eq!(
            enumerate_pieces(&g, set(&[]), &w, set(&[0])),
            Err(Error::Precondition("J not F-stable"))
        );
        assert!(enumerate_pieces(&g, set(&[]), &w, set(&[0, 2])).is_ok());
    }

    #[test]
    fn coxeter_extremes() {
        let g = WeylGroup::from_label("A3").unwrap();
        let w = g.from_word(&[0, 1, 2]).unwrap();
        let all = coxeter_report(&g, &w, g.s()).unwrap();
        assert_eq!((all.x.clone(), all.v.clone(), all.gm_exponent), (g.identity(), w.clone(), 0));
        let none = coxeter_report(&g, &w, set(&[])).unwrap();
        assert_eq!((none.x, none.v, none.gm_exponent), (g.longest(), g.identity(), 3));
        assert_eq!(
            coxeter_report(&g, &g.from_word(&[0, 1]).unwrap(), set(&[])),
            Err(Error::NotCoxeter)
        );
    }

    #[test]
    fn one_term_chains_match_classification() {
        // B_4: x_2 is Case 1, y_4 is Case 2 with s = t_4
        let g = WeylGroup::from_label("B4").unwrap();
        let (i, j) = (set(&[0]), set(&[0, 1, 2]));
        let w = g.from_word(&[3, 2, 1, 0, 1]).unwrap();
        let x2 = g.from_word(&[3, 2, 1]).unwrap();
        let y4 = g.mul(&g.longest(), &g.longest_element(j));

        let plain = ChainSpec {
            terms: vec![ChainTerm { i, w: w.clone(), gamma: None }],
            x: vec![x2.clone()],
        };
        let verdicts = validate_chain(&g, &plain, j).unwrap();
        assert!(verdicts[0].passed());
        let c1 = classify_piece(&g, i, &w, j, &x2).unwrap();
        assert!(matches!(c1.status, Status::Case1 { ref v, .. } if *v == verdicts[0].v));
        assert_eq!(chain_summary(&g, &plain, j).unwrap().d, 0);

        let degenerate = ChainSpec {
            terms: vec![ChainTerm { i, w: w.clone(), gamma: Some(3) }],
            x: vec![y4.clone()],
        };
        let verdicts = validate_chain(&g, &degenerate, j).unwrap();
        assert!(verdicts[0].passed(), "{:?}", verdicts[0].failures());
        let summary = chain_summary(&g, &degenerate, j).unwrap();
        assert_eq!(summary.d, 1);
        let c2 = classify_piece(&g, i, &w, j, &y4).unwrap();
        assert!(matches!(c2.status, Status::Case2 { ref v, s: 3, .. } if *v == summary.v_product));

        // y_4 without degeneration fails the Case 1 hypothesis
        let wrong = ChainSpec {
            terms: vec![ChainTerm { i, w, gamma: None }],
            x: vec![y4],
        };
        assert!(!validate_chain(&g, &wrong, j).unwrap()[0].passed());
    }

    #[test]
    fn chain_structure_errors() {
        let g = WeylGroup::from_label("A3").unwrap();
        let e = g.identity();
        let trivial = ChainSpec {
            terms: vec![ChainTerm { i: set(&[]), w: e.clone(), gamma: None }],
            x: vec![e.clone()],
        };
        let s = chain_summary(&g, &trivial, set(&[])).unwrap();
        assert_eq!((s.d, s.e), (0, 0));
        let uneven = ChainSpec {
            terms: vec![
                ChainTerm { i: set(&[]), w: g.simple(0), gamma: None },
                ChainTerm { i: set(&[]), w: g.simple(1), gamma: None },
            ],
            x: vec![e.clone(), g.simple(2)],
        };
        assert!(matches!(validate_chain(&g, &uneven, set(&[])), Err(Error::InvalidChain(_))));
        let not_descent = ChainSpec {
            terms: vec![ChainTerm { i: set(&[]), w: g.simple(0), gamma: Some(1) }],
            x: vec![e],
        };
        assert!(matches!(validate_chain(&g, &not_descent, set(&[])), Err(Error::InvalidChain(_))));
    }
}
