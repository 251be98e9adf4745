//! `dlq`: decompose parabolic Deligne–Lusztig varieties from the command
//! line. Every report is pretty-printed JSON on stdout; every failure is one
//! line on stderr with exit code 2.

mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use dlq_core::cohom::{bn_assembly_certificates, bn_table, hc_restrict_module, Coefficient, GradedModule};
use dlq_core::decomp::{chain_summary, classify_piece, coxeter_report, enumerate_pieces, PieceClassification, Status};
use dlq_core::deodhar::{deodhar_mass, enumerate_cells};
use dlq_core::{Poly, WeylElt, WeylGroup};

use spec::{one_based, parse_group, parse_list, subset_one_based, ProblemSpec};

#[derive(Parser)]
#[command(name = "dlq", version, about = "Pieces of parabolic Deligne-Lusztig varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Type label such as B3, 2A3, A1xA2, or a Cartan matrix as JSON.
    #[arg(long)]
    group: Option<String>,
    /// Diagram automorphism as a 1-based permutation, e.g. 3,2,1.
    #[arg(long)]
    twist: Option<String>,
    #[arg(long = "I")]
    i: Option<String>,
    /// Word in 1-based simple indices, e.g. 3,2,1,2.
    #[arg(long)]
    w: Option<String>,
    #[arg(long = "J")]
    j: Option<String>,
    /// JSON problem file; flags win on conflict.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Worker threads for piece classification.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate and classify every piece X_x.
    Pieces(Common),
    /// Classify the single piece X_x.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: Option<String>,
    },
    /// The unique nonempty piece for a Coxeter element.
    Coxeter(Common),
    /// Validate a chain given in the spec file.
    Chain(Common),
    /// Distinguished subexpressions and cell data.
    Deodhar {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: Option<String>,
        #[arg(long = "wprime", alias = "w-prime")]
        w_prime: Option<String>,
    },
    /// Principal-series table for B_n.
    CohomBn {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u32>,
        /// triv or St.
        #[arg(long)]
        coeff: Option<String>,
    },
}

fn load(common: &Common, extra: ProblemSpec) -> Result<ProblemSpec> {
    let file = match &common.spec {
        Some(p) => ProblemSpec::load(p)?,
        None => ProblemSpec::default(),
    };
    let opt_list = |s: &Option<String>| s.as_deref().map(parse_list).transpose();
    let flags = ProblemSpec {
        group: common.group.as_deref().map(parse_group).transpose()?,
        twist: opt_list(&common.twist)?,
        i: opt_list(&common.i)?,
        w: opt_list(&common.w)?,
        j: opt_list(&common.j)?,
        ..extra
    };
    Ok(file.overlay(flags))
}

fn word_of(g: &WeylGroup, a: &WeylElt) -> Vec<usize> {
    one_based(&g.reduced_word(a))
}

fn classification_json(g: &WeylGroup, c: &PieceClassification) -> Value {
    let mut obj = json!({
        "x_word": word_of(g, &c.x),
        "length": c.x.length(),
        "nonempty": c.status != Status::Empty,
        "status": c.status.name(),
    });
    let map = obj.as_object_mut().expect("object");
    match &c.status {
        Status::Empty => {}
        Status::Case1 { v, k, e } => {
            map.insert("v_word".into(), json!(word_of(g, v)));
            map.insert("K".into(), json!(subset_one_based(*k)));
            map.insert("e".into(), json!(e));
            if let Some(s) = c.also_case2 {
                map.insert("also_case2_s".into(), json!(s + 1));
            }
        }
        Status::Case2 { s, w_prime, v, k } => {
            map.insert("s".into(), json!(s + 1));
            map.insert("w_prime_word".into(), json!(word_of(g, w_prime)));
            map.insert("v_word".into(), json!(word_of(g, v)));
            map.insert("K".into(), json!(subset_one_based(*k)));
        }
        Status::Unclassified { note } => {
            map.insert("note".into(), json!(note));
        }
    }
    if c.status != Status::Empty {
        let cells: Vec<Value> = c
            .cells
            .iter()
            .map(|w| {
                json!({
                    "y_word": one_based(&w.y_word),
                    "mask": w.cell.mask,
                    "n_gamma": w.cell.n_gamma,
                    "m_gamma": w.cell.m_gamma,
                    "v_word": one_based(&w.v_word),
                })
            })
            .collect();
        map.insert("cells".into(), json!(cells));
    }
    obj
}

fn run_pieces(common: &Common) -> Result<Value> {
    let spec = load(common, ProblemSpec::default())?;
    let g = spec::build_group(&spec)?;
    let i = spec::subset(&g, spec.i.as_ref())?;
    let j = spec::subset(&g, spec.j.as_ref())?;
    let w = spec::element(&g, spec.w.as_ref(), "w")?;
    let pieces = enumerate_pieces(&g, i, &w, j)?;
    let classify = |p: &dlq_core::decomp::Piece| classify_piece(&g, i, &w, j, &p.x).map(|c| classification_json(&g, &c));
    let rows: Vec<Value> = match common.jobs {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            pool.install(|| pieces.par_iter().map(classify).collect::<Result<_, _>>())?
        }
        _ => pieces.iter().map(classify).collect::<Result<_, _>>()?,
    };
    Ok(Value::Array(rows))
}

fn run_classify(common: &Common, x: &Option<String>) -> Result<Value> {
    let extra = ProblemSpec {
        x: x.as_deref().map(parse_list).transpose()?,
        ..Default::default()
    };
    let spec = load(common, extra)?;
    let g = spec::build_group(&spec)?;
    let i = spec::subset(&g, spec.i.as_ref())?;
    let j = spec::subset(&g, spec.j.as_ref())?;
    let w = spec::element(&g, spec.w.as_ref(), "w")?;
    let x = spec::element(&g, spec.x.as_ref(), "x")?;
    Ok(classification_json(&g, &classify_piece(&g, i, &w, j, &x)?))
}

fn run_coxeter(common: &Common) -> Result<Value> {
    let spec = load(common, ProblemSpec::default())?;
    let g = spec::build_group(&spec)?;
    let j = spec::subset(&g, spec.j.as_ref())?;
    let w = spec::element(&g, spec.w.as_ref(), "w")?;
    let r = coxeter_report(&g, &w, j)?;
    Ok(json!({
        "x_word": word_of(&g, &r.x),
        "v_word": word_of(&g, &r.v),
        "gm_exponent": r.gm_exponent,
        "nonempty_count": r.nonempty_count,
    }))
}

fn run_chain(common: &Common) -> Result<Value> {
    let spec = load(common, ProblemSpec::default())?;
    let g = spec::build_group(&spec)?;
    let j = spec::subset(&g, spec.j.as_ref())?;
    let file = spec.chain.as_ref().ok_or_else(|| anyhow!("missing chain block"))?;
    let chain = spec::chain(&g, file)?;
    let verdicts = dlq_core::decomp::validate_chain(&g, &chain, j)?;
    let valid = verdicts.iter().all(|v| v.passed());
    let rows: Vec<Value> = verdicts
        .iter()
        .map(|v| {
            let checks: serde_json::Map<String, Value> =
                v.checks.iter().map(|(name, ok)| (name.to_string(), json!(ok))).collect();
            json!({
                "index": v.index + 1,
                "z_word": word_of(&g, &v.z),
                "v_word": word_of(&g, &v.v),
                "K": subset_one_based(v.k),
                "checks": checks,
                "passed": v.passed(),
                "k_compatible": v.k_compatible,
            })
        })
        .collect();
    let mut out = json!({ "valid": valid, "terms": rows });
    if valid {
        let s = chain_summary(&g, &chain, j)?;
        out["summary"] = json!({
            "d": s.d,
            "e": s.e,
            "v_words": s.v.iter().map(|v| word_of(&g, v)).collect::<Vec<_>>(),
            "v_product_word": word_of(&g, &s.v_product),
        });
    }
    Ok(out)
}

fn run_deodhar(common: &Common, x: &Option<String>, w_prime: &Option<String>) -> Result<Value> {
    let extra = ProblemSpec {
        x: x.as_deref().map(parse_list).transpose()?,
        w_prime: w_prime.as_deref().map(parse_list).transpose()?,
        ..Default::default()
    };
    let spec = load(common, extra)?;
    let g = spec::build_group(&spec)?;
    let w = spec::element(&g, spec.w.as_ref(), "w")?;
    let x = spec::element(&g, spec.x.as_ref(), "x")?;
    let cells = match &spec.w_prime {
        Some(_) => {
            let wp = spec::element(&g, spec.w_prime.as_ref(), "wPrime")?;
            enumerate_cells(&g, &w, &x, &wp)
        }
        None => dlq_core::deodhar::distinguished_subexpressions(&g, &g.reduced_word(&w), &x),
    };
    let cells_poly = cells.iter().fold(Poly::zero(), |acc, c| &acc + &c.cell_polynomial());
    Ok(json!({
        "reduced_word": word_of(&g, &w),
        "cells": cells.iter().map(|c| json!({
            "mask": c.summary().mask,
            "n_gamma": c.n_gamma,
            "m_gamma": c.m_gamma,
            "product_word": word_of(&g, &c.product),
        })).collect::<Vec<_>>(),
        "mass_polynomial": deodhar_mass(&g, &w, &x).coeffs(),
        "cells_polynomial": cells_poly.coeffs(),
    }))
}

fn table_json(m: &GradedModule) -> Vec<Value> {
    m.expanded()
        .iter()
        .map(|e| json!({ "degree": e.degree, "q_exponent": e.q_exponent, "character": e.character.to_string() }))
        .collect()
}

fn run_cohom_bn(common: &Common, n: Option<u32>, coeff: &Option<String>) -> Result<Value> {
    let extra = ProblemSpec {
        n,
        coeff: coeff.clone(),
        ..Default::default()
    };
    let spec = load(common, extra)?;
    let n = spec.n.ok_or_else(|| anyhow!("missing n"))?;
    let coeff: Coefficient = spec.coeff.as_deref().unwrap_or("triv").parse()?;
    let table = bn_table(n, coeff)?;
    let mut out = json!({
        "n": n,
        "coeff": coeff.to_string(),
        "table": table_json(&table),
        "hc_restricted": table_json(&hc_restrict_module(&table)?),
    });
    if n >= 3 {
        let certs = bn_assembly_certificates(n, coeff)?;
        out["assembly"] = json!(certs
            .iter()
            .map(|c| json!({
                "orientation": c.orientation,
                "unknown": table_json(&c.unknown),
                "cancellations": c.report.cancellations,
            }))
            .collect::<Vec<_>>());
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<Value> {
    match &cli.command {
        Command::Pieces(c) => run_pieces(c),
        Command::Classify { common, x } => run_classify(common, x),
        Command::Coxeter(c) => run_coxeter(c),
        Command::Chain(c) => run_chain(c),
        Command::Deodhar { common, x, w_prime } => run_deodhar(common, x, w_prime),
        Command::CohomBn { common, n, coeff } => run_cohom_bn(common, *n, coeff),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments").trim());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
