//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::HashMap;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dlq_core::cohom::{
    bn_assembly_certificates, bn_table, gm_cohomology, tensor, Bipartition, Coefficient, Entry, GradedModule,
};
use dlq_core::cosets::{double_coset_min_reps, k_of};
use dlq_core::decomp::{classify_piece, coxeter_report, enumerate_pieces, Status};
use dlq_core::deodhar::{deodhar_mass, enumerate_cells, piece_nonempty_for_word, RPolynomials};
use dlq_core::{Poly, Side, SimpleSubset, WeylElt, WeylGroup};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(label: &str) -> WeylGroup {
    WeylGroup::from_label(label).unwrap()
}

fn set(ix: impl IntoIterator<Item = usize>) -> SimpleSubset {
    SimpleSubset::from_indices(ix)
}

fn word(g: &WeylGroup, w: &[usize]) -> WeylElt {
    g.from_word(w).unwrap()
}

fn show(g: &WeylGroup, w: &WeylElt) -> String {
    let ws: Vec<String> = g.reduced_word(w).iter().map(|i| format!("t{}", i + 1)).collect();
    if ws.is_empty() {
        "e".into()
    } else {
        ws.join("")
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {limit:?}", start.elapsed()))
}

/// B_n with I = {t_1}, w_n = t_n ⋯ t_2 t_1 t_2, J = {t_1, …, t_{n-1}}.
fn bn_decomposition(n: usize) -> Result<(), String> {
    let g = group(&format!("B{n}"));
    let i = set([0]);
    let j = set(0..n - 1);
    let mut w_word: Vec<usize> = (0..n).rev().collect();
    w_word.push(1);
    let w = word(&g, &w_word);
    let x2 = word(&g, &(1..n).rev().collect::<Vec<_>>());
    let yn = g.mul(&g.longest_element(j), &g.longest());

    let pieces = enumerate_pieces(&g, i, &w, j).map_err(|e| e.to_string())?;
    let nonempty: Vec<WeylElt> = pieces.into_iter().filter(|p| p.nonempty).map(|p| p.x).collect();
    let mut expected = vec![x2.clone(), yn.clone()];
    g.sort_canonical(&mut expected);
    ensure(nonempty == expected, || {
        let got: Vec<String> = nonempty.iter().map(|x| show(&g, x)).collect();
        format!("n={n}: nonempty pieces {got:?}")
    })?;

    let c = classify_piece(&g, i, &w, j, &x2).map_err(|e| e.to_string())?;
    let v_expected = word(&g, &(0..n - 1).rev().collect::<Vec<_>>());
    ensure(
        matches!(&c.status, Status::Case1 { v, k, .. } if *v == v_expected && k.is_empty()),
        || format!("n={n}: x_2 classified {:?}", c.status),
    )?;

    let c = classify_piece(&g, i, &w, j, &yn).map_err(|e| e.to_string())?;
    // w_{n-1} = t_{n-1} ⋯ t_2 t_1 t_2, the same element one rank down
    let mut prev_word: Vec<usize> = (0..n - 1).rev().collect();
    prev_word.push(1);
    let w_prev = word(&g, &prev_word);
    ensure(
        matches!(&c.status, Status::Case2 { s, v, k, .. } if *s == n - 1 && *v == w_prev && *k == i),
        || match &c.status {
            Status::Unclassified { note } => format!("n={n}: y_n unclassified ({note})"),
            other => format!("n={n}: y_n classified {other:?}"),
        },
    )
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 2..=5 {
        let t = Instant::now();
        if let Err(e) = bn_decomposition(n) {
            failures.push(e);
        }
        if n == 5 {
            within(Duration::from_secs(10), t)?;
        }
    }
    within(Duration::from_secs(40), start)?;
    if failures.is_empty() {
        Ok("B2..B5: pieces {x_2, y_n}, Case1 / Case2 as stated".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for n in 3..=6 {
        let g = group(&format!("A{n}"));
        let j = set(0..n - 1);
        let mut w_word: Vec<usize> = (0..n).collect();
        w_word.push(n - 2);
        let w = word(&g, &w_word);
        let x = |i: usize| word(&g, &(i - 1..n).rev().collect::<Vec<_>>());
        let pieces = enumerate_pieces(&g, SimpleSubset::EMPTY, &w, j).map_err(|e| e.to_string())?;
        ensure(pieces.len() == n + 1, || format!("n={n}: {} pieces", pieces.len()))?;
        let nonempty: Vec<WeylElt> = pieces.into_iter().filter(|p| p.nonempty).map(|p| p.x).collect();
        let mut expected = vec![x(1), x(n)];
        g.sort_canonical(&mut expected);
        ensure(nonempty == expected, || {
            format!("n={n}: nonempty {:?}", nonempty.iter().map(|x| show(&g, x)).collect::<Vec<_>>())
        })?;

        let c = classify_piece(&g, SimpleSubset::EMPTY, &w, j, &x(n)).map_err(|e| e.to_string())?;
        let v_n = word(&g, &(0..n - 1).collect::<Vec<_>>());
        ensure(matches!(&c.status, Status::Case1 { v, .. } if *v == v_n), || {
            format!("n={n}: x_n classified {:?}", c.status)
        })?;

        let c = classify_piece(&g, SimpleSubset::EMPTY, &w, j, &x(1)).map_err(|e| e.to_string())?;
        let mut v1: Vec<usize> = (0..n - 1).collect();
        v1.push(n - 3);
        let v_1 = word(&g, &v1);
        ensure(matches!(&c.status, Status::Case2 { v, .. } if *v == v_1), || {
            format!("n={n}: x_1 classified {:?}", c.status)
        })?;
    }
    within(Duration::from_secs(10), start)?;
    Ok("A3..A6: pieces {x_1, x_n}, x_n Case1, x_1 Case2".into())
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (k, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for label in ["A2", "A3", "A4", "B2", "B3"] {
        let g = group(label);
        let r = g.rank();
        let mut coxeters: Vec<WeylElt> = permutations(&(0..r).collect::<Vec<_>>())
            .iter()
            .map(|p| word(&g, p))
            .collect();
        g.sort_canonical(&mut coxeters);
        coxeters.dedup();
        for w in &coxeters {
            for mask in 0..(1u32 << r) {
                let j = SimpleSubset(mask);
                let rep = coxeter_report(&g, w, j).map_err(|e| format!("{label} J={j}: {e}"))?;
                let x_expected = g.mul(&g.longest_element(j), &g.longest());
                ensure(rep.x == x_expected, || format!("{label} w={} J={j}: x = {}", show(&g, w), show(&g, &rep.x)))?;
                ensure(
                    rep.v.length() == j.len() && g.support(&rep.v) == j,
                    || format!("{label} w={} J={j}: v = {} not Coxeter in W_J", show(&g, w), show(&g, &rep.v)),
                )?;
                ensure(rep.gm_exponent == r - j.len(), || {
                    format!("{label} J={j}: exponent {}", rep.gm_exponent)
                })?;
                checked += 1;
            }
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("{checked} (w, J) pairs over A2..A4, B2, B3"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for label in ["A3", "B2"] {
        let g = group(label);
        let elements = g.elements();
        for w in &elements {
            let expected = Poly::monomial(1, w.length());
            for x in &elements {
                let mass = deodhar_mass(&g, w, x);
                ensure(mass == expected, || {
                    format!("{label} w={} x={}: mass {mass}", show(&g, w), show(&g, x))
                })?;
                pairs += 1;
            }
        }
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{pairs} (w, x) pairs sum to q^l(w)"))
}

fn criterion_5() -> Outcome {
    let mut pairs = 0;
    for label in ["A2", "A3", "B2"] {
        let g = group(label);
        let w0 = g.longest();
        let mut oracle = RPolynomials::new(&g);
        let elements = g.elements();
        for w in &elements {
            for u in elements.iter().filter(|u| g.bruhat_leq(u, w)) {
                let cells = enumerate_cells(&g, w, &w0, u);
                let sum = cells.iter().fold(Poly::zero(), |acc, c| &acc + &c.cell_polynomial());
                let r = oracle.get(u, w);
                ensure(sum == r, || format!("{label} u={} w={}: cells {sum}, R {r}", show(&g, u), show(&g, w)))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs u <= w match R_(u,w)"))
}

/// Every valid (I, J, x) for `w`, where valid means the preconditions hold.
fn valid_problems(g: &WeylGroup, w: &WeylElt) -> Vec<(SimpleSubset, SimpleSubset, WeylElt)> {
    let mut out = Vec::new();
    for im in 0..(1u32 << g.rank()) {
        let i = SimpleSubset(im);
        if !g.is_reduced(w, i, Side::Left) || !g.normalizes(w, i, true) {
            continue;
        }
        for jm in 0..(1u32 << g.rank()) {
            let j = SimpleSubset(jm);
            for x in double_coset_min_reps(g, j, i) {
                out.push((i, j, x));
            }
        }
    }
    out
}

fn verdicts(g: &WeylGroup, problems: &[(SimpleSubset, SimpleSubset, WeylElt)], w_word: &[usize]) -> Vec<bool> {
    problems
        .iter()
        .map(|(i, j, x)| piece_nonempty_for_word(g, *i, w_word, *j, x).unwrap())
        .collect()
}

fn criterion_6() -> Outcome {
    let g = group("A3");
    let mut expressions = 0;
    for w in g.elements() {
        let problems = valid_problems(&g, &w);
        let words = g.all_reduced_words(&w);
        let reference = verdicts(&g, &problems, &words[0]);
        for ws in &words[1..] {
            ensure(verdicts(&g, &problems, ws) == reference, || format!("A3 w={}: word {ws:?} disagrees", show(&g, &w)))?;
        }
        expressions += words.len();
    }

    let g = group("B3");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let elements: Vec<WeylElt> = g.elements().into_iter().filter(|w| w.length() >= 2).collect();
    for _ in 0..50 {
        let w = elements.choose(&mut rng).unwrap();
        let ws = g.all_reduced_words(w).choose(&mut rng).unwrap().clone();
        let problems = valid_problems(&g, w);
        let reference = verdicts(&g, &problems, &g.reduced_word(w));
        ensure(verdicts(&g, &problems, &ws) == reference, || format!("B3 w={}: word {ws:?} disagrees", show(&g, w)))?;
    }
    Ok(format!("A3: {expressions} expressions; B3: 50 sampled expressions"))
}

fn module(entries: &[(i64, i64, &str)]) -> GradedModule {
    entries
        .iter()
        .map(|&(d, e, s)| Entry::new(d, e, s.parse::<Bipartition>().unwrap()))
        .collect()
}

fn criterion_7() -> Outcome {
    let expected = [
        (2, Coefficient::Trivial, module(&[(3, 1, "[-;2]"), (6, 3, "[2;-]")])),
        (2, Coefficient::St, module(&[(3, 0, "[-;(1,1)]"), (4, 2, "[(1,1);-]")])),
        (3, Coefficient::Trivial, module(&[(4, 1, "[-;(2,1)]"), (5, 2, "[1;2]"), (8, 4, "[3;-]")])),
        (
            3,
            Coefficient::St,
            module(&[(4, 0, "[-;(1,1,1)]"), (5, 2, "[(1,1);1]"), (6, 3, "[(2,1);-]")]),
        ),
    ];
    for (n, coeff, table) in &expected {
        let got = bn_table(*n, *coeff).map_err(|e| e.to_string())?;
        ensure(&got == table, || format!("bn_table({n}, {coeff}) = {got}"))?;
    }
    let mut certificates = Vec::new();
    for coeff in [Coefficient::Trivial, Coefficient::St] {
        let certs = bn_assembly_certificates(3, coeff).map_err(|e| e.to_string())?;
        let cert = certs.first().ok_or_else(|| format!("n=3 {coeff}: no certificate"))?;
        let cancelled: Vec<String> = cert
            .report
            .cancellations
            .iter()
            .map(|c| format!("{} ~ {}", c.open, c.closed))
            .collect();
        certificates.push(format!(
            "{coeff}: known piece {:?}, x_2 = {}, cancels [{}]",
            cert.orientation,
            cert.unknown,
            cancelled.join(", ")
        ));
    }
    Ok(format!("tables n=2,3 exact; certificates {}", certificates.join("; ")))
}

fn criterion_8() -> Outcome {
    for label in ["A3", "B3"] {
        let g = group(label);
        let size = g.elements().len();
        let r = g.rank();
        for jm in 0..(1u32 << r) {
            for im in 0..(1u32 << r) {
                let (j, i) = (SimpleSubset(jm), SimpleSubset(im));
                let (wj, wi) = (g.parabolic_elements(j), g.parabolic_elements(i));
                let mut seen: HashMap<WeylElt, usize> = HashMap::new();
                for x in double_coset_min_reps(&g, j, i) {
                    let k = k_of(&g, &x, j, i).map_err(|e| e.to_string())?;
                    for a in wj.iter().filter(|a| g.is_reduced(a, k, Side::Right)) {
                        let ax = g.mul(a, &x);
                        for b in &wi {
                            let w = g.mul(&ax, b);
                            ensure(w.length() == a.length() + x.length() + b.length(), || {
                                format!("{label} J={j} I={i}: lengths do not add")
                            })?;
                            *seen.entry(w).or_default() += 1;
                        }
                    }
                }
                ensure(seen.len() == size && seen.values().all(|&c| c == 1), || {
                    format!("{label} J={j} I={i}: factorization not unique")
                })?;
            }
        }
    }
    for n in 1..=5 {
        let b = group(&format!("B{n}").replace("B1", "A1"));
        ensure(b.root_system().num_positive() == n * n, || format!("|Phi+(B{n})|"))?;
        let a = group(&format!("A{n}"));
        ensure(a.root_system().num_positive() == n * (n + 1) / 2, || format!("|Phi+(A{n})|"))?;
    }
    let sample = module(&[(3, 1, "[-;2]"), (4, 2, "[1;1]"), (4, 2, "[1;1]")]);
    for d in 0..=6 {
        let gm = gm_cohomology(d);
        ensure(gm.total_multiplicity() == 1 << d, || format!("gm({d}) mass"))?;
        ensure(d == 0 || gm.euler_characteristic() == 0, || format!("gm({d}) Euler"))?;
        let t = tensor(&sample, &gm).map_err(|e| e.to_string())?;
        ensure(t.total_multiplicity() == sample.total_multiplicity() << d, || format!("tensor gm({d}) mass"))?;
        ensure(d == 0 || t.euler_characteristic() == 0, || format!("tensor gm({d}) Euler"))?;
    }
    Ok("double cosets A3/B3 exhaustive, root counts n<=5, gm/tensor mass and Euler".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("B_n decomposition", criterion_1),
        ("A_n decomposition", criterion_2),
        ("Coxeter elements", criterion_3),
        ("Deodhar mass identity", criterion_4),
        ("R-polynomial oracle", criterion_5),
        ("reduced-word independence", criterion_6),
        ("B_n tables and assembly", criterion_7),
        ("structural invariants", criterion_8),
    ];
    panic::set_hook(Box::new(|_| {}));
    let suite = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({secs:.2}s) {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({secs:.2}s) {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2}s",
        criteria.len() - failed,
        suite.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
