use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use schubert_core::scheme::{self, verify_scheme, CheckMode, VerifyOptions};
use schubert_core::schubert::{all_cells, cell_scheme, point_to_matrix, ENUMERATION_BOUND};
use schubert_core::verify::{gaussian_binomial, verify_cell, verify_counting, verify_gaussian_binomial};
use schubert_core::wreath::{build_gwp, cross_validate, GwpSpec};
use schubert_core::{
    CellDescriptor, CellPoint, CellSelector, FiniteField, Parallelism, Partition, PosetJson, SchemeInstance, Status,
    SuiteConfig, VerificationReport,
};
use serde_json::{json, Value};

use crate::args::{
    parse_components, CellsArgs, ComponentSpec, Format, GaussianArgs, GwpArgs, JobsArgs, SchemeArgs, VerifyArgs,
};
use crate::output::{alpha_arg, csv_field, emit, envelope, json_text, lambda_arg, opt, reject_csv};

/// Runs `f` under the requested worker count.
fn with_jobs<T: Send>(jobs: &JobsArgs, f: impl FnOnce(Parallelism) -> T + Send) -> Result<T> {
    match jobs.jobs {
        Some(0) => bail!("--jobs must be at least 1"),
        Some(1) => Ok(f(Parallelism::Sequential)),
        #[cfg(feature = "parallel")]
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build().context("cannot start worker pool")?;
            Ok(pool.install(|| f(Parallelism::Parallel)))
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(f(Parallelism::Sequential)),
        None => Ok(f(Parallelism::Parallel)),
    }
}

fn select_cells(n: usize, m: usize, sel: Option<CellSelector>) -> Result<Vec<CellDescriptor>> {
    Ok(match sel {
        Some(s) => vec![CellDescriptor::new(n, m, &s)?],
        None => all_cells(n, m)?,
    })
}

fn relation_count(cell: &CellDescriptor) -> Option<usize> {
    cell.free_poset().antichains().ok().map(|a| a.len())
}

pub fn cells(a: &CellsArgs) -> Result<bool> {
    let field = a.field.field()?;
    let q = field.order();
    let cells = select_cells(a.n, a.m, a.select.selector()?)?;
    let sizes: Vec<Option<u128>> = cells.iter().map(|c| c.size(q)).collect();
    let total = sizes.iter().try_fold(0u128, |acc, s| s.and_then(|s| acc.checked_add(s)));
    let gauss = gaussian_binomial(a.n as u32, a.m as u32, q);
    let text = match a.out.format {
        Format::Json => {
            let rows: Vec<Value> = cells
                .iter()
                .zip(&sizes)
                .map(|(c, size)| {
                    let rep = point_to_matrix(c, &CellPoint::zero(c)).expect("zero point");
                    json!({
                        "alpha": c.alpha(),
                        "lambda": c.lambda(),
                        "dimension": c.dimension(),
                        "size": size,
                        "relations": relation_count(c),
                        "representative": rep,
                    })
                })
                .collect();
            json_text(&envelope(
                "cells",
                json!({
                    "n": a.n, "m": a.m, "q": q,
                    "cells": rows,
                    "total": { "cells": cells.len(), "size": total, "gaussian_binomial": gauss },
                }),
            ))
        }
        Format::Csv => {
            let mut s = String::from("alpha,lambda,dimension,size,relations\n");
            for (c, size) in cells.iter().zip(&sizes) {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    csv_field(&alpha_arg(c.alpha())),
                    csv_field(&lambda_arg(c.lambda())),
                    c.dimension(),
                    opt(*size),
                    opt(relation_count(c))
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!("Gr({}, {}) over GF({q})\n", a.m, a.n);
            let _ = writeln!(s, "{:<28} {:<14} {:>4} {:>12} {:>9}", "alpha", "lambda", "|D|", "|O|", "relations");
            for (c, size) in cells.iter().zip(&sizes) {
                let _ = writeln!(
                    s,
                    "{:<28} {:<14} {:>4} {:>12} {:>9}",
                    c.alpha().to_string(),
                    c.lambda().to_string(),
                    c.dimension(),
                    opt(*size),
                    opt(relation_count(c))
                );
            }
            let _ = writeln!(s, "total: {} cells, {} points; Gaussian binomial {}", cells.len(), opt(total), opt(gauss));
            s
        }
    };
    emit(&a.out, text)?;
    Ok(true)
}

pub fn scheme(a: &SchemeArgs) -> Result<bool> {
    let field = a.field.field()?;
    let q = field.order();
    let sel = a.select.selector()?.unwrap_or_else(|| {
        let top = Partition::new(vec![a.m as u32; a.n.saturating_sub(a.m)]).expect("constant parts");
        CellSelector::Lambda(top)
    });
    let cell = CellDescriptor::new(a.n, a.m, &sel)?;
    let size = cell.size(q).unwrap_or(u128::MAX);
    if size > a.max_cell_size && !a.allow_large {
        bail!("cell has {size} points, above --max-cell-size {}; pass --allow-large to build it", a.max_cell_size);
    }
    let (cs, verdict) = with_jobs(&a.jobs, |mode| -> Result<_> {
        let cs = cell_scheme(&cell, &field, ENUMERATION_BOUND, mode)?;
        let opts = VerifyOptions { samples: a.samples, seed: a.seed, mode, ..Default::default() };
        let v = verify_scheme(&cs.scheme, &opts);
        Ok((cs, v))
    })??;
    let ok = verdict.is_valid();
    let valencies = scheme::valencies(&cs.scheme);
    let config = json!({
        "n": a.n, "m": a.m, "q": q,
        "alpha": cell.alpha(), "lambda": cell.lambda(), "size": cs.scheme.size(),
    });
    let text = match a.out.format {
        Format::Csv => match &verdict.parameters {
            Some(p) => p.intersection_numbers.to_csv(),
            None => bail!("the scheme failed verification; no intersection numbers to print"),
        },
        Format::Json => {
            let labels: Vec<Value> = cs
                .labels
                .iter()
                .zip(&valencies)
                .enumerate()
                .map(|(i, (b, v))| json!({ "id": i, "beta": b, "valency": v }))
                .collect();
            let params = verdict.parameters.as_ref();
            json_text(&envelope(
                "scheme",
                json!({
                    "config": config,
                    "status": verdict.status,
                    "mode": verdict.mode,
                    "pairs_checked": verdict.pairs_checked,
                    "counterexample": verdict.counterexample,
                    "labels": labels,
                    "symmetric": params.map(|p| p.symmetric),
                    "transpose": params.map(|p| &p.transpose),
                    "intersection_numbers": params.map(|p| p.intersection_numbers.nonzero()),
                }),
            ))
        }
        Format::Text => {
            let mut s = format!(
                "X_α for α = {}, λ = {} in Gr({}, {}) over GF({q}): {} points, {} relations\n",
                cell.alpha(),
                cell.lambda(),
                a.m,
                a.n,
                cs.scheme.size(),
                cs.labels.len()
            );
            let _ = writeln!(s, "{:>4}  {:<28} {:>8}", "id", "beta", "valency");
            for (i, (b, v)) in cs.labels.iter().zip(&valencies).enumerate() {
                let _ = writeln!(s, "{i:>4}  {:<28} {v:>8}", b.to_string());
            }
            s.push_str(&verdict_text(&verdict));
            s
        }
    };
    emit(&a.out, text)?;
    Ok(ok)
}

fn verdict_text(v: &schubert_core::SchemeVerdict) -> String {
    let mode = match v.mode {
        CheckMode::Exhaustive => "exhaustive",
        CheckMode::Sampled => "sampled",
    };
    match (&v.parameters, &v.counterexample) {
        (Some(p), _) => {
            let mut s = format!(
                "association scheme: yes ({mode}, {} pairs); symmetric: {}\n",
                v.pairs_checked,
                if p.symmetric { "yes" } else { "no" }
            );
            for [k, i, j, val] in p.intersection_numbers.nonzero() {
                let _ = writeln!(s, "p^{k}_{{{i},{j}}} = {val}");
            }
            s
        }
        (None, c) => format!(
            "association scheme: NO ({mode}); {}\n",
            c.as_ref().map(|c| serde_json::to_string(c).unwrap_or_default()).unwrap_or_default()
        ),
    }
}

pub fn verify(a: &VerifyArgs) -> Result<bool> {
    reject_csv(a.out.format, "verify")?;
    let field = a.field.field()?;
    let q = field.order();
    let sel = a.select.selector()?;
    let ms: Vec<usize> = match a.m {
        Some(m) => vec![m],
        None if sel.is_some() => bail!("--alpha/--lambda select one cell and need --m"),
        None => (1..a.n).collect(),
    };
    let mut cells = Vec::new();
    for &m in &ms {
        cells.extend(select_cells(a.n, m, sel.clone())?);
    }
    let (counting, reports) = with_jobs(&a.jobs, |mode| {
        let cfg = SuiteConfig {
            max_cell_size: a.max_cell_size,
            allow_large: a.allow_large,
            trials: a.trials,
            seed: a.seed,
            mode,
            pair_witness: a.pair_witness,
            timings: a.timings,
            ..Default::default()
        };
        let counting: Vec<VerificationReport> = ms.iter().map(|&m| verify_counting(a.n, m, q, a.timings)).collect();
        (counting, run_cells(&cells, &field, &cfg))
    })?;
    let all: Vec<&VerificationReport> = counting.iter().chain(&reports).collect();
    let tally = |s: Status| all.iter().flat_map(|r| &r.checks).filter(|c| c.status == s).count();
    let (pass, fail, skipped) = (tally(Status::Pass), tally(Status::Fail), tally(Status::Skipped));
    let ok = fail == 0;
    let verdict = if ok { "PASS" } else { "FAIL" };
    let text = match a.out.format {
        Format::Json => json_text(&envelope(
            "verify",
            json!({
                "n": a.n, "m": ms, "q": q, "seed": a.seed,
                "status": verdict,
                "summary": { "pass": pass, "fail": fail, "skipped": skipped },
                "counting": counting,
                "cells": reports,
            }),
        )),
        _ => {
            let mut s = String::new();
            for r in &counting {
                let _ = writeln!(s, "Gr({}, {}) over GF({q})", r.config.m, r.config.n);
                check_lines(&mut s, r);
            }
            for r in &reports {
                let _ = writeln!(
                    s,
                    "cell α = {}, λ = {} in Gr({}, {}), {} points",
                    opt(r.config.alpha.as_ref()),
                    opt(r.config.lambda.as_ref()),
                    r.config.m,
                    r.config.n,
                    opt(r.config.size)
                );
                check_lines(&mut s, r);
            }
            let _ = writeln!(s, "{verdict}: {pass} passed, {fail} failed, {skipped} skipped");
            s
        }
    };
    emit(&a.out, text)?;
    Ok(ok)
}

fn check_lines(s: &mut String, r: &VerificationReport) {
    for c in &r.checks {
        let status = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        };
        let time = c.elapsed_ms.map(|t| format!(" [{t} ms]")).unwrap_or_default();
        let _ = writeln!(s, "  {:<24} {status:<7}{time} {}", c.name, c.detail);
    }
}

#[cfg(feature = "parallel")]
fn run_cells(cells: &[CellDescriptor], field: &FiniteField, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    use rayon::prelude::*;
    if cfg.mode == Parallelism::Parallel {
        cells.par_iter().map(|c| verify_cell(c, field, cfg)).collect()
    } else {
        cells.iter().map(|c| verify_cell(c, field, cfg)).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_cells(cells: &[CellDescriptor], field: &FiniteField, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    cells.iter().map(|c| verify_cell(c, field, cfg)).collect()
}

pub fn gwp(a: &GwpArgs) -> Result<bool> {
    reject_csv(a.out.format, "gwp")?;
    let raw = std::fs::read_to_string(&a.poset).with_context(|| format!("cannot read {}", a.poset.display()))?;
    let pj: PosetJson = serde_json::from_str(&raw).with_context(|| format!("{} is not a poset file", a.poset.display()))?;
    let poset = pj.into_poset()?;
    let specs = parse_components(&a.components)?;
    let k = poset.len();
    let specs: Vec<&ComponentSpec> = match specs.len() {
        1 => vec![&specs[0]; k],
        l if l == k => specs.iter().collect(),
        l => bail!("{l} components for a poset with {k} elements"),
    };
    let components = specs
        .iter()
        .map(|s| match s {
            ComponentSpec::OneClass(q) => scheme::one_class_scheme(*q),
            ComponentSpec::Cyclic(q) => scheme::cyclic_difference_scheme(*q),
        })
        .collect::<schubert_core::Result<Vec<SchemeInstance>>>()?;
    let (g, verdict, cross) = with_jobs(&a.jobs, |mode| -> Result<_> {
        let g = build_gwp(GwpSpec::new(poset, components)?, a.max_size, mode)?;
        let v = verify_scheme(&g.scheme, &VerifyOptions { seed: a.seed, mode, ..Default::default() });
        let cross = cross_validate(&g, mode);
        Ok((g, v, cross))
    })??;
    let ok = verdict.is_valid() && cross.is_ok();
    let valencies = scheme::valencies(&g.scheme);
    let text = match a.out.format {
        Format::Json => {
            let labels: Vec<Value> = g
                .labels
                .iter()
                .zip(&valencies)
                .enumerate()
                .map(|(i, (l, v))| json!({ "id": i, "label": l.to_json(&g.spec.poset), "valency": v }))
                .collect();
            let params = verdict.parameters.as_ref();
            json_text(&envelope(
                "gwp",
                json!({
                    "elements": g.spec.poset.elements(),
                    "class_counts": g.spec.class_counts(),
                    "size": g.scheme.size(),
                    "status": verdict.status,
                    "mode": verdict.mode,
                    "pairs_checked": verdict.pairs_checked,
                    "counterexample": verdict.counterexample,
                    "cross_validation": cross.as_ref().map(|_| "PASS".to_string()).unwrap_or_else(|e| e.to_string()),
                    "labels": labels,
                    "symmetric": params.map(|p| p.symmetric),
                    "intersection_numbers": params.map(|p| p.intersection_numbers.nonzero()),
                }),
            ))
        }
        _ => {
            let mut s = format!(
                "generalized wreath product over {} elements: {} points, {} relations\n",
                k,
                g.scheme.size(),
                g.labels.len()
            );
            for (i, (name, v)) in g.scheme.labels().iter().zip(&valencies).enumerate() {
                let _ = writeln!(s, "{i:>4}  {name:<28} {v:>8}");
            }
            let _ = writeln!(
                s,
                "cross-validation: {}",
                cross.as_ref().map(|_| "PASS".to_string()).unwrap_or_else(|e| format!("FAIL ({e})"))
            );
            s.push_str(&verdict_text(&verdict));
            s
        }
    };
    emit(&a.out, text)?;
    Ok(ok)
}

pub fn gaussian(a: &GaussianArgs) -> Result<bool> {
    reject_csv(a.out.format, "gaussian")?;
    let q = a.field.field()?.order();
    let check = verify_gaussian_binomial(a.n, a.m, q)?;
    let value = gaussian_binomial(a.n as u32, a.m as u32, q);
    let ok = check.status == Status::Pass;
    let text = match a.out.format {
        Format::Json => json_text(&envelope(
            "gaussian",
            json!({ "n": a.n, "m": a.m, "q": q, "value": value, "check": check }),
        )),
        _ => format!(
            "[{} choose {}]_{q} = {}\n{}: {}\n",
            a.n,
            a.m,
            opt(value),
            if ok { "PASS" } else { "FAIL" },
            check.detail
        ),
    };
    emit(&a.out, text)?;
    Ok(ok)
}
