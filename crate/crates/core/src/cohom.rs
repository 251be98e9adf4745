//! Formal graded-cohomology bookkeeping.
//!
//! A [`GradedModule`] is a finite multiset of `(degree, q-exponent, label)`
//! triples standing for `H^degree_c` constituents on which Frobenius acts by
//! `q^exponent`. Labels are unipotent characters: bipartitions for type
//! `B`, partitions for type `A`, opaque tags otherwise, and
//! [`CharLabel::Trivial`] for the label-free `G_m` factors.
//!
//! Degree convention: `shift(M, n)` adds `n` to every stored degree, so the
//! complex `C[n]` with `(C[n])^k = C^{k+n}` is recorded as `shift(M, -n)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Weakly decreasing list of positive parts.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidLabel(format!("zero part in {parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(a)` for `a > 0`, empty for `a = 0`.
    pub fn row(a: u32) -> Self {
        Partition(if a == 0 { Vec::new() } else { vec![a] })
    }

    /// `1^a`.
    pub fn column(a: u32) -> Self {
        Partition(vec![1; a as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Partitions obtained by removing one removable box, largest first.
    pub fn remove_one_box(&self) -> Vec<Partition> {
        let p = &self.0;
        (0..p.len())
            .filter(|&r| r + 1 == p.len() || p[r] > p[r + 1])
            .map(|r| {
                let mut q = p.clone();
                q[r] -= 1;
                if q[r] == 0 {
                    q.pop();
                }
                Partition(q)
            })
            .collect()
    }
}

/// Single parts are written bare, several parts as `(a,b,…)`, and the empty
/// partition as `-`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => write!(f, "-"),
            [a] => write!(f, "{a}"),
            parts => {
                let body: Vec<String> = parts.iter().map(u32::to_string).collect();
                write!(f, "({})", body.join(","))
            }
        }
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidLabel(s.to_string());
        if s == "-" || s == "\u{2212}" {
            return Ok(Partition::empty());
        }
        let body = match s.strip_prefix('(') {
            Some(rest) => rest.strip_suffix(')').ok_or_else(bad)?,
            None => s,
        };
        let parts: Vec<u32> = body
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if parts.len() > 1 && !s.starts_with('(') {
            return Err(bad());
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(bad());
        }
        Partition::new(parts).map_err(|_| bad())
    }
}

/// A pair `[λ;μ]` labelling a principal-series unipotent character of type
/// `B_n`, `n = |λ| + |μ|`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bipartition {
    pub lambda: Partition,
    pub mu: Partition,
}

impl Bipartition {
    pub fn new(lambda: Partition, mu: Partition) -> Self {
        Bipartition { lambda, mu }
    }

    pub fn size(&self) -> u32 {
        self.lambda.size() + self.mu.size()
    }

    /// `[n;-]`.
    pub fn trivial(n: u32) -> Self {
        Bipartition::new(Partition::row(n), Partition::empty())
    }

    /// `[-;1^n]`.
    pub fn steinberg(n: u32) -> Self {
        Bipartition::new(Partition::empty(), Partition::column(n))
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{}]", self.lambda, self.mu)
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLabel(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (l, m) = inner.split_once(';').ok_or_else(bad)?;
        Ok(Bipartition::new(l.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?))
    }
}

/// Character label of a graded constituent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CharLabel {
    /// Label of the `G_m` factors; the unit for [`tensor`].
    Trivial,
    Bipartition(Bipartition),
    Partition(Partition),
    Opaque(String),
}

impl CharLabel {
    pub fn kind(&self) -> &'static str {
        match self {
            CharLabel::Trivial => "trivial",
            CharLabel::Bipartition(_) => "bipartition",
            CharLabel::Partition(_) => "partition",
            CharLabel::Opaque(_) => "opaque",
        }
    }
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharLabel::Trivial => write!(f, "1"),
            CharLabel::Bipartition(b) => write!(f, "{b}"),
            CharLabel::Partition(p) => write!(f, "{p}"),
            CharLabel::Opaque(tag) => write!(f, "{tag}"),
        }
    }
}

impl Serialize for CharLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<Bipartition> for CharLabel {
    fn from(b: Bipartition) -> Self {
        CharLabel::Bipartition(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Entry {
    pub degree: i64,
    pub q_exponent: i64,
    pub character: CharLabel,
}

impl Entry {
    pub fn new(degree: i64, q_exponent: i64, character: impl Into<CharLabel>) -> Self {
        Entry {
            degree,
            q_exponent,
            character: character.into(),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.degree, self.q_exponent, self.character)
    }
}

/// Finite multiset of entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedModule {
    entries: BTreeMap<Entry, usize>,
}

impl GradedModule {
    pub fn new() -> Self {
        Self::default()
    }

    /// `H_c` of a point.
    pub fn point() -> Self {
        gm_cohomology(0)
    }

    pub fn add(&mut self, e: Entry, mult: usize) {
        if mult > 0 {
            *self.entries.entry(e).or_insert(0) += mult;
        }
    }

    pub fn insert(&mut self, e: Entry) {
        self.add(e, 1);
    }

    /// Removes one copy; false when absent.
    pub fn remove(&mut self, e: &Entry) -> bool {
        match self.entries.get_mut(e) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.entries.remove(e);
                true
            }
            None => false,
        }
    }

    pub fn multiplicity(&self, e: &Entry) -> usize {
        self.entries.get(e).copied().unwrap_or(0)
    }

    /// Distinct entries with multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Entry, usize)> {
        self.entries.iter().map(|(e, &m)| (e, m))
    }

    /// Entries repeated by multiplicity, ordered by degree.
    pub fn expanded(&self) -> Vec<Entry> {
        let mut out: Vec<Entry> = self
            .iter()
            .flat_map(|(e, m)| std::iter::repeat_n(e.clone(), m))
            .collect();
        out.sort();
        out
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.values().sum()
    }

    /// `sum (-1)^degree · mult`.
    pub fn euler_characteristic(&self) -> i64 {
        self.iter()
            .map(|(e, m)| if e.degree.rem_euclid(2) == 0 { m as i64 } else { -(m as i64) })
            .sum()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.entries.values().all(|&m| m == 1)
    }

    fn map_entries(&self, f: impl Fn(&Entry) -> Entry) -> Self {
        let mut out = GradedModule::new();
        for (e, m) in self.iter() {
            out.add(f(e), m);
        }
        out
    }

    /// Adds `n` to every degree.
    pub fn shift(&self, n: i64) -> Self {
        self.map_entries(|e| Entry {
            degree: e.degree + n,
            ..e.clone()
        })
    }

    /// Adds `e` to every `q`-exponent.
    pub fn twist(&self, t: i64) -> Self {
        self.map_entries(|e| Entry {
            q_exponent: e.q_exponent + t,
            ..e.clone()
        })
    }

    /// Multiset sum.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, m) in other.iter() {
            out.add(e.clone(), m);
        }
        out
    }

    /// Multiset difference `self - other`, clamped at zero.
    pub fn difference(&self, other: &Self) -> Self {
        let mut out = GradedModule::new();
        for (e, m) in self.iter() {
            out.add(e.clone(), m.saturating_sub(other.multiplicity(e)));
        }
        out
    }

    fn is_labeled(&self) -> bool {
        self.entries.keys().any(|e| e.character != CharLabel::Trivial)
    }
}

impl FromIterator<Entry> for GradedModule {
    fn from_iter<T: IntoIterator<Item = Entry>>(iter: T) -> Self {
        let mut out = GradedModule::new();
        for e in iter {
            out.insert(e);
        }
        out
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .iter()
            .map(|(e, m)| if m == 1 { e.to_string() } else { format!("{e}x{m}") })
            .collect();
        write!(f, "{{{}}}", body.join(", "))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `H_c((G_m)^d)`: `(d + k, k, 1)` with multiplicity `C(d, k)`.
pub fn gm_cohomology(d: usize) -> GradedModule {
    let mut out = GradedModule::new();
    for k in 0..=d {
        out.add(
            Entry::new((d + k) as i64, k as i64, CharLabel::Trivial),
            binomial(d as u64, k as u64) as usize,
        );
    }
    out
}

/// Künneth product. At most one side may carry non-trivial labels.
pub fn tensor(a: &GradedModule, b: &GradedModule) -> Result<GradedModule> {
    if a.is_labeled() && b.is_labeled() {
        return Err(Error::AmbiguousCharacterProduct);
    }
    let mut out = GradedModule::new();
    for (x, m) in a.iter() {
        for (y, n) in b.iter() {
            let character = if x.character == CharLabel::Trivial {
                y.character.clone()
            } else {
                x.character.clone()
            };
            out.add(
                Entry {
                    degree: x.degree + y.degree,
                    q_exponent: x.q_exponent + y.q_exponent,
                    character,
                },
                m * n,
            );
        }
    }
    Ok(out)
}

/// Harish-Chandra restriction from `B_n` to `B_{n-1}`: remove one box from
/// `λ` or from `μ`.
pub fn branch_restrict_b(bp: &Bipartition) -> Result<Vec<Bipartition>> {
    if bp.size() == 0 {
        return Err(Error::OutOfRange("cannot restrict a bipartition of 0".into()));
    }
    let mut out: Vec<Bipartition> = bp
        .lambda
        .remove_one_box()
        .into_iter()
        .map(|l| Bipartition::new(l, bp.mu.clone()))
        .chain(
            bp.mu
                .remove_one_box()
                .into_iter()
                .map(|m| Bipartition::new(bp.lambda.clone(), m)),
        )
        .collect();
    out.sort();
    Ok(out)
}

/// Applies [`branch_restrict_b`] entrywise. Opaque labels stand for
/// cuspidal characters and restrict to zero.
pub fn hc_restrict_module(m: &GradedModule) -> Result<GradedModule> {
    let mut rank = None;
    let mut out = GradedModule::new();
    for (e, mult) in m.iter() {
        let bp = match &e.character {
            CharLabel::Bipartition(bp) => bp,
            CharLabel::Opaque(_) => continue,
            _ => return Err(Error::MixedLabelKinds),
        };
        if *rank.get_or_insert(bp.size()) != bp.size() {
            return Err(Error::MixedLabelKinds);
        }
        for r in branch_restrict_b(bp)? {
            out.add(Entry::new(e.degree, e.q_exponent, r), mult);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Coefficient {
    #[serde(rename = "triv")]
    Trivial,
    St,
}

impl FromStr for Coefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triv" | "Id" => Ok(Coefficient::Trivial),
            "St" => Ok(Coefficient::St),
            _ => Err(Error::InvalidLabel(format!("unknown coefficient {s}"))),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coefficient::Trivial => "triv",
            Coefficient::St => "St",
        })
    }
}

/// Principal-series part of `H_c(X(I, w_n))` in type `B_n` with
/// `I = {t_1}` and `w_n = t_n ⋯ t_2 t_1 t_2`.
pub fn bn_table(n: u32, coeff: Coefficient) -> Result<GradedModule> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("n must be at least 2, got {n}")));
    }
    let (n_i, mut out) = (i64::from(n), GradedModule::new());
    let hook = |k: u32, rest: u32| {
        let mut mu = vec![2];
        mu.extend(std::iter::repeat_n(1, rest as usize));
        Bipartition::new(Partition::row(k), Partition(mu))
    };
    match coeff {
        Coefficient::Trivial => {
            for k in 1..n {
                out.insert(Entry::new(n_i + i64::from(k), i64::from(k), hook(k - 1, n - k - 1)));
            }
            out.insert(Entry::new(2 * n_i + 2, n_i + 1, Bipartition::trivial(n)));
        }
        Coefficient::St => {
            out.insert(Entry::new(n_i + 1, 0, Bipartition::steinberg(n)));
            for k in 2..=n {
                let lambda = Partition::new(vec![k - 1, 1]).expect("k >= 2");
                out.insert(Entry::new(
                    n_i + i64::from(k),
                    i64::from(k),
                    Bipartition::new(lambda, Partition::column(n - k)),
                ));
            }
        }
    }
    Ok(out)
}

/// A cancelling pair of the long exact sequence: an open-piece entry and a
/// closed-piece entry with the same label and `q`-exponent in adjacent
/// degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cancellation {
    pub open: Entry,
    pub closed: Entry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub cancellations: Vec<Cancellation>,
    /// Entries that could not be accounted for; empty when consistent.
    pub leftover: Vec<Entry>,
    /// Every cancellation has its closed entry one degree below its open
    /// entry, as for the connecting map `H^k_c(closed) -> H^{k+1}_c(open)`.
    pub directed: bool,
}

type Group = (i64, CharLabel);

fn group_by_label(m: &GradedModule) -> BTreeMap<Group, BTreeMap<i64, usize>> {
    let mut out: BTreeMap<Group, BTreeMap<i64, usize>> = BTreeMap::new();
    for (e, mult) in m.iter() {
        *out.entry((e.q_exponent, e.character.clone()))
            .or_default()
            .entry(e.degree)
            .or_insert(0) += mult;
    }
    out
}

/// Pairs the unused open and closed counts along consecutive degrees.
/// Leftovers at degree `d` can only pair with degree `d + 1` once `d - 1`
/// is exhausted, so the sweep is forced.
fn sweep(degrees: &[i64], open: &[usize], closed: &[usize]) -> Option<Vec<(i64, i64)>> {
    // (open degree, closed degree) per pair
    let mut pairs = Vec::new();
    let (mut pend_open, mut pend_closed) = (0usize, 0usize);
    let mut prev: Option<i64> = None;
    for (idx, &d) in degrees.iter().enumerate() {
        if prev != Some(d - 1) && (pend_open > 0 || pend_closed > 0) {
            return None;
        }
        let (mut o, mut c) = (open[idx], closed[idx]);
        if c < pend_open || o < pend_closed {
            return None;
        }
        pairs.extend(std::iter::repeat_n((d - 1, d), pend_open));
        pairs.extend(std::iter::repeat_n((d, d - 1), pend_closed));
        c -= pend_open;
        o -= pend_closed;
        pend_open = o;
        pend_closed = c;
        prev = Some(d);
    }
    (pend_open == 0 && pend_closed == 0).then_some(pairs)
}

/// Chooses, degree by degree, how many target copies come from the open
/// piece; the rest come from the closed piece.
fn solve_group(
    degrees: &[i64],
    target: &[usize],
    open: &[usize],
    closed: &[usize],
    split: &mut Vec<usize>,
) -> Option<Vec<(i64, i64)>> {
    let idx = split.len();
    if idx == degrees.len() {
        let rest_open: Vec<usize> = open.iter().zip(split.iter()).map(|(o, s)| o - s).collect();
        let rest_closed: Vec<usize> = closed
            .iter()
            .zip(target)
            .zip(split.iter())
            .map(|((c, t), s)| c - (t - s))
            .collect();
        return sweep(degrees, &rest_open, &rest_closed);
    }
    let t = target[idx];
    if t > open[idx] + closed[idx] {
        return None;
    }
    for from_open in (t.saturating_sub(closed[idx])..=t.min(open[idx])).rev() {
        split.push(from_open);
        if let Some(p) = solve_group(degrees, target, open, closed, split) {
            return Some(p);
        }
        split.pop();
    }
    None
}

/// Decides whether `target = open ⊎ closed` minus cancelling pairs.
pub fn check_les_consistency(
    target: &GradedModule,
    open: &GradedModule,
    closed: &GradedModule,
) -> ConsistencyReport {
    let (tg, og, cg) = (group_by_label(target), group_by_label(open), group_by_label(closed));
    let mut keys: Vec<&Group> = tg.keys().chain(og.keys()).chain(cg.keys()).collect();
    keys.sort();
    keys.dedup();
    let empty = BTreeMap::new();
    let mut cancellations = Vec::new();
    let mut leftover = GradedModule::new();
    for key in keys {
        let (t, o, c) = (
            tg.get(key).unwrap_or(&empty),
            og.get(key).unwrap_or(&empty),
            cg.get(key).unwrap_or(&empty),
        );
        let mut degrees: Vec<i64> = t.keys().chain(o.keys()).chain(c.keys()).copied().collect();
        degrees.sort_unstable();
        degrees.dedup();
        let count = |m: &BTreeMap<i64, usize>| -> Vec<usize> {
            degrees.iter().map(|d| m.get(d).copied().unwrap_or(0)).collect()
        };
        let (tv, ov, cv) = (count(t), count(o), count(c));
        let entry = |d: i64| Entry::new(d, key.0, key.1.clone());
        match solve_group(&degrees, &tv, &ov, &cv, &mut Vec::new()) {
            Some(pairs) => cancellations.extend(pairs.into_iter().map(|(od, cd)| Cancellation {
                open: entry(od),
                closed: entry(cd),
            })),
            None => {
                // report the naive imbalance per degree
                for (idx, &d) in degrees.iter().enumerate() {
                    let have = ov[idx] + cv[idx];
                    leftover.add(entry(d), have.abs_diff(tv[idx]).max(usize::from(tv[idx] > have)));
                }
                if leftover.is_empty() {
                    for &d in &degrees {
                        leftover.insert(entry(d));
                    }
                }
            }
        }
    }
    let consistent = leftover.is_empty();
    let directed = cancellations.iter().all(|c| c.open.degree == c.closed.degree + 1);
    ConsistencyReport {
        consistent,
        cancellations: if consistent { cancellations } else { Vec::new() },
        leftover: leftover.expanded(),
        directed,
    }
}

/// Which role the known module plays in the two-piece assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    KnownOpen,
    KnownClosed,
}

/// An unknown contribution that, together with the known one, reproduces
/// the target through the long exact sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub orientation: Orientation,
    pub unknown: GradedModule,
    pub report: ConsistencyReport,
}

/// Admissible unknown contributions: multiplicity-free, every label a
/// bipartition of `rank`, and `degree - q_exponent` constant, the shape of
/// a shifted and twisted Coxeter-variety contribution.
pub fn is_admissible(m: &GradedModule, rank: u32) -> bool {
    let mut offsets = m.iter().map(|(e, _)| e.degree - e.q_exponent);
    let first = offsets.next();
    m.is_multiplicity_free()
        && offsets.all(|o| Some(o) == first)
        && m.iter()
            .all(|(e, _)| matches!(&e.character, CharLabel::Bipartition(b) if b.size() == rank))
}

/// Searches for admissible unknown contributions `X` such that `target` is
/// the long exact sequence assembly of `known` and `X`.
///
/// `X` must contain the part of `target` not covered by `known`, plus one
/// partner for each entry of `known` that is missing from `target`: one
/// degree below when `known` is the open piece, one above when it is the
/// closed piece. Every candidate is confirmed by [`check_les_consistency`]
/// with directed cancellations. Both orientations are reported.
pub fn les_certificates(target: &GradedModule, known: &GradedModule, rank: u32) -> Vec<Certificate> {
    let forced = target.difference(known);
    let surplus = known.difference(target);
    let mut out = Vec::new();
    for orientation in [Orientation::KnownOpen, Orientation::KnownClosed] {
        let step = match orientation {
            Orientation::KnownOpen => -1,
            Orientation::KnownClosed => 1,
        };
        let mut unknown = forced.clone();
        for (e, m) in surplus.iter() {
            unknown.add(Entry { degree: e.degree + step, ..e.clone() }, m);
        }
        if !is_admissible(&unknown, rank) {
            continue;
        }
        let report = match orientation {
            Orientation::KnownOpen => check_les_consistency(target, known, &unknown),
            Orientation::KnownClosed => check_les_consistency(target, &unknown, known),
        };
        if report.consistent && report.directed {
            out.push(Certificate {
                orientation,
                unknown,
                report,
            });
        }
    }
    out
}

/// The two-piece assembly for `B_n`: target `hc_restrict(bn_table(n))`,
/// known piece `G_m × (table for B_{n-1})`.
pub fn bn_assembly_certificates(n: u32, coeff: Coefficient) -> Result<Vec<Certificate>> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("n must be at least 3, got {n}")));
    }
    let target = hc_restrict_module(&bn_table(n, coeff)?)?;
    let known = tensor(&gm_cohomology(1), &bn_table(n - 1, coeff)?)?;
    Ok(les_certificates(&target, &known, n - 1))
}
