//! Distinguished subexpressions and the Deodhar–Curtis cell data.
//!
//! Fix a reduced word `s_1 ⋯ s_r` of `w`. A subexpression chooses
//! `gamma_i ∈ {1, s_i}`; it is `x`-distinguished when `gamma_i = s_i` is taken
//! at every position where `x gamma_1 ⋯ gamma_{i-1} s_i` is longer than
//! `x gamma_1 ⋯ gamma_{i-1}`. The nonempty cell of a distinguished `gamma` is
//! `A^{n_gamma} × G_m^{m_gamma}`, with `n_gamma` the number of such forced
//! ascents and `m_gamma` the number of positions with `gamma_i = 1`.

use std::collections::HashMap;

use serde::Serialize;

use crate::cosets::is_double_reduced;
use crate::poly::Poly;
use crate::weyl::{Side, SimpleSubset, WeylElt, WeylGroup};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subexpression {
    pub word: Vec<usize>,
    /// `true` keeps `s_i`, `false` means `gamma_i = 1`.
    pub mask: Vec<bool>,
    pub product: WeylElt,
    pub n_gamma: usize,
    pub m_gamma: usize,
    pub distinguished: bool,
}

/// Serializable summary of a cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellSummary {
    pub mask: Vec<u8>,
    pub n_gamma: usize,
    pub m_gamma: usize,
}

impl Subexpression {
    pub fn summary(&self) -> CellSummary {
        CellSummary {
            mask: self.mask.iter().map(|&b| b as u8).collect(),
            n_gamma: self.n_gamma,
            m_gamma: self.m_gamma,
        }
    }

    pub fn cell_polynomial(&self) -> Poly {
        Poly::cell(self.n_gamma, self.m_gamma)
    }
}

/// Evaluates a subexpression of `word` relative to `x`.
pub fn evaluate(g: &WeylGroup, word: &[usize], mask: &[bool], x: &WeylElt) -> Subexpression {
    assert_eq!(word.len(), mask.len());
    let mut prefix = g.identity();
    let mut running = x.clone();
    let (mut n, mut m) = (0, 0);
    let mut distinguished = true;
    for (&s, &keep) in word.iter().zip(mask) {
        let ascent = !g.is_right_descent(&running, s);
        if ascent {
            n += 1;
            if !keep {
                distinguished = false;
            }
        }
        if keep {
            prefix = g.mul_simple_right(&prefix, s);
            running = g.mul_simple_right(&running, s);
        } else {
            m += 1;
        }
    }
    Subexpression {
        word: word.to_vec(),
        mask: mask.to_vec(),
        product: prefix,
        n_gamma: n,
        m_gamma: m,
        distinguished,
    }
}

pub fn is_distinguished(g: &WeylGroup, word: &[usize], mask: &[bool], x: &WeylElt) -> bool {
    evaluate(g, word, mask, x).distinguished
}

/// Depth-first walk over all `x`-distinguished subexpressions of `word`.
///
/// At an ascent the letter is forced, so branches that would drop it are
/// never opened. The visitor returns `false` to stop the walk early; the
/// function reports whether the walk ran to completion.
pub fn walk_distinguished<F>(g: &WeylGroup, word: &[usize], x: &WeylElt, visit: &mut F) -> bool
where
    F: FnMut(&[bool], &WeylElt, usize, usize) -> bool,
{
    struct Frame<'a, F> {
        g: &'a WeylGroup,
        word: &'a [usize],
        mask: Vec<bool>,
        visit: &'a mut F,
    }
    fn go<F>(fr: &mut Frame<'_, F>, pos: usize, prefix: WeylElt, running: WeylElt, n: usize, m: usize) -> bool
    where
        F: FnMut(&[bool], &WeylElt, usize, usize) -> bool,
    {
        if pos == fr.word.len() {
            return (fr.visit)(&fr.mask, &prefix, n, m);
        }
        let s = fr.word[pos];
        let ascent = !fr.g.is_right_descent(&running, s);
        let kept_prefix = fr.g.mul_simple_right(&prefix, s);
        let kept_running = fr.g.mul_simple_right(&running, s);
        fr.mask.push(true);
        let cont = go(fr, pos + 1, kept_prefix, kept_running, n + ascent as usize, m);
        fr.mask.pop();
        if !cont {
            return false;
        }
        if !ascent {
            fr.mask.push(false);
            let cont = go(fr, pos + 1, prefix, running, n, m + 1);
            fr.mask.pop();
            if !cont {
                return false;
            }
        }
        true
    }
    let mut frame = Frame {
        g,
        word,
        mask: Vec::with_capacity(word.len()),
        visit,
    };
    go(&mut frame, 0, g.identity(), x.clone(), 0, 0)
}

/// All `x`-distinguished subexpressions of `word`, in mask order with kept
/// letters first.
pub fn distinguished_subexpressions(g: &WeylGroup, word: &[usize], x: &WeylElt) -> Vec<Subexpression> {
    let mut out = Vec::new();
    walk_distinguished(g, word, x, &mut |mask, product, n, m| {
        out.push(Subexpression {
            word: word.to_vec(),
            mask: mask.to_vec(),
            product: product.clone(),
            n_gamma: n,
            m_gamma: m,
            distinguished: true,
        });
        true
    });
    out
}

/// Distinguished subexpressions of the canonical reduced word of `w` with
/// product `w_prime`: the nonempty cells of `BwB ∩ B^x w' B`.
pub fn enumerate_cells(g: &WeylGroup, w: &WeylElt, x: &WeylElt, w_prime: &WeylElt) -> Vec<Subexpression> {
    enumerate_cells_for_word(g, &g.reduced_word(w), x, w_prime)
}

pub fn enumerate_cells_for_word(
    g: &WeylGroup,
    word: &[usize],
    x: &WeylElt,
    w_prime: &WeylElt,
) -> Vec<Subexpression> {
    distinguished_subexpressions(g, word, x)
        .into_iter()
        .filter(|s| &s.product == w_prime)
        .collect()
}

/// Sum of `q^{n_gamma} (q-1)^{m_gamma}` over every distinguished
/// subexpression of `w`, whatever its product.
pub fn deodhar_mass(g: &WeylGroup, w: &WeylElt, x: &WeylElt) -> Poly {
    let mut counts: HashMap<(usize, usize), i64> = HashMap::new();
    walk_distinguished(g, &g.reduced_word(w), x, &mut |_, _, n, m| {
        *counts.entry((n, m)).or_default() += 1;
        true
    });
    let mut keys: Vec<_> = counts.into_iter().collect();
    keys.sort();
    keys.iter().fold(Poly::zero(), |acc, &((n, m), c)| {
        &acc + &(&Poly::from_coeffs(vec![c]) * &Poly::cell(n, m))
    })
}

fn check_piece_preconditions(
    g: &WeylGroup,
    i: SimpleSubset,
    w: &WeylElt,
    j: SimpleSubset,
    x: &WeylElt,
) -> Result<()> {
    g.check_subset(i)?;
    g.check_subset(j)?;
    if !g.is_reduced(w, i, Side::Left) {
        return Err(Error::Precondition("w not I-reduced"));
    }
    if !g.normalizes(w, i, true) {
        return Err(Error::Precondition("wF does not normalise I"));
    }
    if !is_double_reduced(g, x, j, i) {
        return Err(Error::Precondition("x not J-reduced-I"));
    }
    Ok(())
}

/// Whether `x p F(x)^{-1}` lies in `W_J`.
pub fn lands_in_levi(g: &WeylGroup, x: &WeylElt, p: &WeylElt, fx_inv: &WeylElt, j: SimpleSubset) -> bool {
    g.in_parabolic(&g.mul(&g.mul(x, p), fx_inv), j)
}

/// Emptiness test for the piece `X_x`: nonempty iff some `y ∈ W_I` and some
/// `x`-distinguished subexpression of `yw` have product in
/// `x^{-1} W_J F(x)`. Uses the canonical reduced word of `yw`.
pub fn piece_nonempty(g: &WeylGroup, i: SimpleSubset, w: &WeylElt, j: SimpleSubset, x: &WeylElt) -> Result<bool> {
    check_piece_preconditions(g, i, w, j, x)?;
    Ok(piece_nonempty_with(g, i, j, x, |y| g.reduced_word(&g.mul(y, w))))
}

/// Same test with an explicit reduced word for `w`; the word for `yw` is the
/// canonical word of `y` followed by `w_word`.
pub fn piece_nonempty_for_word(
    g: &WeylGroup,
    i: SimpleSubset,
    w_word: &[usize],
    j: SimpleSubset,
    x: &WeylElt,
) -> Result<bool> {
    let w = g.from_word(w_word)?;
    if w.length() != w_word.len() {
        return Err(Error::Precondition("word not reduced"));
    }
    check_piece_preconditions(g, i, &w, j, x)?;
    Ok(piece_nonempty_with(g, i, j, x, |y| {
        let mut word = g.reduced_word(y);
        word.extend_from_slice(w_word);
        word
    }))
}

fn piece_nonempty_with<F>(
    g: &WeylGroup,
    i: SimpleSubset,
    j: SimpleSubset,
    x: &WeylElt,
    word_of: F,
) -> bool
where
    F: Fn(&WeylElt) -> Vec<usize>,
{
    let fx_inv = g.inv(&g.apply_f(x));
    g.parabolic_elements(i).iter().any(|y| {
        let word = word_of(y);
        let completed = walk_distinguished(g, &word, x, &mut |_, p, _, _| !lands_in_levi(g, x, p, &fx_inv, j));
        !completed
    })
}

/// Cells witnessing a nonempty piece: `(y, gamma)` with `gamma` an
/// `x`-distinguished subexpression of the canonical word of `yw` whose
/// product lands in `x^{-1} W_J F(x)`.
pub fn witness_cells(
    g: &WeylGroup,
    i: SimpleSubset,
    w: &WeylElt,
    j: SimpleSubset,
    x: &WeylElt,
) -> Vec<(WeylElt, Subexpression)> {
    let fx_inv = g.inv(&g.apply_f(x));
    let mut out = Vec::new();
    for y in g.parabolic_elements(i) {
        let word = g.reduced_word(&g.mul(&y, w));
        for sub in distinguished_subexpressions(g, &word, x) {
            if lands_in_levi(g, x, &sub.product, &fx_inv, j) {
                out.push((y.clone(), sub));
            }
        }
    }
    out
}

/// Kazhdan–Lusztig R-polynomials by the standard left-descent recursion.
pub struct RPolynomials<'a> {
    g: &'a WeylGroup,
    memo: HashMap<(WeylElt, WeylElt), Poly>,
}

impl<'a> RPolynomials<'a> {
    pub fn new(g: &'a WeylGroup) -> Self {
        RPolynomials { g, memo: HashMap::new() }
    }

    pub fn get(&mut self, u: &WeylElt, w: &WeylElt) -> Poly {
        if u == w {
            return Poly::one();
        }
        if u.length() >= w.length() {
            return Poly::zero();
        }
        let key = (u.clone(), w.clone());
        if let Some(p) = self.memo.get(&key) {
            return p.clone();
        }
        let g = self.g;
        let s = g.left_descents(w).indices().next().unwrap();
        let sw = g.mul_simple_left(w, s);
        let su = g.mul_simple_left(u, s);
        let value = if g.is_left_descent(u, s) {
            self.get(&su, &sw)
        } else {
            let a = &Poly::q() * &self.get(&su, &sw);
            let b = &Poly::from_coeffs(vec![-1, 1]) * &self.get(u, &sw);
            &a + &b
        };
        self.memo.insert(key, value.clone());
        value
    }
}

pub fn r_polynomial(g: &WeylGroup, u: &WeylElt, w: &WeylElt) -> Poly {
    RPolynomials::new(g).get(u, w)
}
