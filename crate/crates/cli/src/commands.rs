use std::fs;
use std::path::Path;

use lpreps::entropy::{entropy_table, table_csv, CompactClass};
use lpreps::moduli::{ModKind, Modulus};
use lpreps::name::{check_query_bound, len_fn, Query, Sop, Trace};
use lpreps::operators::{
    budget_from_env, cauchy_to_xp, differentiate, discontinuity_demo, embed_to_first, evaluate, integrate,
    min_radius_exponent, norm_plan, norm_xpd, sobolev_embed, sobolev_to_continuous, xp_to_cauchy, Source,
    CAUCHY_LENGTH_CAP,
};
use lpreps::reps::{derivative, make_xr_name, name_for, step_within, validate_name, Grid, RepKind};
use lpreps::symbolic::{format_rational, pow2q, Func, FunctionSpec, Q};
use lpreps::{DyBox, Dyadic};
use num_traits::{Signed, Zero};
use serde_json::json;

use crate::artifact::{Failure, Manifest, Sink};
use crate::{Cli, Command, RepArgs};

/// Moduli for generated names are fitted on the grid up to this precision.
const FIT_N: usize = 8;

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Manifest(msg.into())
}

fn load_spec(path: &Path, files: &mut Vec<(String, String)>) -> Result<Func, Failure> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let spec = FunctionSpec::from_json(&text)?;
    files.push((path.display().to_string(), text));
    Ok(Func::new(&spec)?)
}

fn parse_rep(a: &RepArgs, d: usize) -> Result<RepKind, Failure> {
    let (p, m) = (a.p, a.m);
    let rep = match a.rep.as_str() {
        "xc" => RepKind::Xc,
        "xs" => RepKind::Xs { d },
        "xp" => RepKind::Xp { p, d },
        "xpd" => RepKind::Xpd { p, d },
        "xmp" => RepKind::Xmp { m, p },
        "cauchy" => RepKind::Cauchy { p, d },
        other => return Err(bad(format!("unknown representation {other:?}"))),
    };
    rep.check()?;
    Ok(rep)
}

fn parse_point(s: &str, d: usize) -> Result<Vec<Dyadic>, Failure> {
    let v: Vec<Dyadic> = s.split(',').map(|t| t.parse::<Dyadic>()).collect::<Result<_, _>>()?;
    if v.len() != d {
        return Err(bad(format!("expected {d} coordinates in {s:?}")));
    }
    Ok(v)
}

fn parse_box(s: &str, d: usize) -> Result<(Vec<Dyadic>, Vec<Dyadic>), Failure> {
    let (a, b) = s.split_once(':').ok_or_else(|| bad(format!("box {s:?} is not lo:hi")))?;
    Ok((parse_point(a, d)?, parse_point(b, d)?))
}

fn dy_q(x: &[Dyadic]) -> Vec<Q> {
    x.iter().map(Dyadic::to_rational).collect()
}

fn within(v: &Dyadic, exact: &Q, n: usize) -> bool {
    (v.to_rational() - exact).abs() < pow2q(-(n as i64))
}

fn dyadic_bbox(f: &Func) -> Result<DyBox, Failure> {
    let (lo, hi) = f.bbox();
    let conv = |x: &[Q]| -> Result<Vec<Dyadic>, Failure> {
        x.iter().map(|v| Dyadic::from_rational(v).ok_or_else(|| bad("domain corners must be dyadic"))).collect()
    };
    Ok(DyBox::new(conv(&lo)?, conv(&hi)?)?)
}

fn source_of(rep: RepKind, f: &Func) -> Result<Source, Failure> {
    match rep {
        RepKind::Xs { .. } => Ok(Source::Singular),
        RepKind::Xp { .. } | RepKind::Xmp { .. } => {
            let (lo, hi) = f.bbox();
            let sides: Vec<Q> = lo.iter().zip(&hi).map(|(a, b)| b - a).collect();
            let lambda = sides.iter().fold(Q::from_integer(1.into()), |acc, s| acc * s);
            let diam = sides.iter().cloned().fold(Q::zero(), |a, b| if b > a { b } else { a });
            Ok(Source::Lp { lambda, diam })
        }
        _ => Err(bad("integrate needs an xs, xp or xmp name")),
    }
}

fn contract(ok: bool, what: &str) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Contract(format!("{what} failed its check")))
    }
}

pub fn run(cli: &Cli, sink: &Sink) -> Result<(), Failure> {
    let budget = cli.budget.unwrap_or_else(budget_from_env);
    let mut files = Vec::new();
    let params = serde_json::to_value(&cli.command).expect("arguments serialize");
    let name = params.as_object().and_then(|o| o.keys().next().cloned()).unwrap_or_default();
    // Files are hashed as they are read; the manifest is completed before output.
    let manifest = |files: Vec<(String, String)>| Manifest { command: name.clone(), params: params.clone(), seed: cli.seed, budget, files };
    match &cli.command {
        Command::Integrate { rep, bx, prec } => {
            let f = load_spec(&rep.spec, &mut files)?;
            let kind = parse_rep(rep, f.dim())?;
            let (lo, hi) = parse_box(bx, f.dim())?;
            let phi = name_for(kind, &f, FIT_N)?;
            let trace = Trace::with_budget(budget);
            let xs: Vec<_> = lo.iter().map(|v| make_xr_name(&v.to_rational()).traced(&trace)).collect();
            let ys: Vec<_> = hi.iter().map(|v| make_xr_name(&v.to_rational()).traced(&trace)).collect();
            let v = integrate(&phi.traced(&trace), &source_of(kind, &f)?, &xs, &ys, *prec)?;
            let exact = f.integral_box(&dy_q(&lo), &dy_q(&hi));
            let ok = within(&v, &exact, *prec);
            sink.json(
                &manifest(files),
                json!({"value": v, "error_exp": prec, "exact": format_rational(&exact), "within": ok, "queries": trace.queries()}),
            )?;
            contract(ok, "integrate")
        }
        Command::Evaluate { spec, x, prec } => {
            let f = load_spec(spec, &mut files)?;
            let x = parse_point(x, 1)?.remove(0);
            let phi = name_for(RepKind::Xc, &f, FIT_N)?;
            let trace = Trace::with_budget(budget);
            let v = evaluate(&phi.traced(&trace), &make_xr_name(&x.to_rational()).traced(&trace), *prec)?;
            let exact = f.eval(&[x.to_rational()]);
            let ok = within(&v, &exact, *prec);
            sink.json(
                &manifest(files),
                json!({"value": v, "error_exp": prec, "exact": format_rational(&exact), "within": ok, "queries": trace.queries()}),
            )?;
            contract(ok, "evaluate")
        }
        Command::Translate { rep, to, prec } => {
            let f = load_spec(&rep.spec, &mut files)?;
            let d = f.dim();
            let (p, m) = (rep.p, rep.m);
            let grid = Grid::default();
            let (result, ok) = match to.as_str() {
                "xp-to-cauchy" => {
                    let phi = name_for(RepKind::Xp { p, d }, &f, FIT_N)?;
                    let s = xp_to_cauchy(&phi, p, &dyadic_bbox(&f)?, *prec, budget)?;
                    let ok = step_within(&f, &s, p, *prec)?;
                    (json!({"cells": s.len(), "step": s, "within": ok}), ok)
                }
                "cauchy-to-xp" => {
                    let phi = name_for(RepKind::Cauchy { p, d }, &f, FIT_N)?;
                    let out = cauchy_to_xp(&phi, p, &dyadic_bbox(&f)?, CAUCHY_LENGTH_CAP)?;
                    let r = validate_name(RepKind::Xp { p, d }, &out, &f, (*prec).min(4), grid)?;
                    (serde_json::to_value(&r).expect("report"), r.valid)
                }
                "xmp-to-xc" => {
                    let phi = name_for(RepKind::Xmp { m, p }, &f, FIT_N)?;
                    let out = sobolev_to_continuous(&embed_to_first(&phi, m, p)?)?;
                    let r = validate_name(RepKind::Xc, &out, &f, *prec, grid)?;
                    (serde_json::to_value(&r).expect("report"), r.valid)
                }
                "xmp-to-xp" => {
                    let phi = name_for(RepKind::Xmp { m, p }, &f, FIT_N)?;
                    let out = sobolev_embed(&phi, m, p)?;
                    let target = if m == 1 { RepKind::Xp { p, d } } else { RepKind::Xmp { m: m - 1, p } };
                    let r = validate_name(target, &out, &f, *prec, grid)?;
                    (serde_json::to_value(&r).expect("report"), r.valid)
                }
                other => return Err(bad(format!("unknown translation {other:?}"))),
            };
            sink.json(&manifest(files), result)?;
            contract(ok, "translation")
        }
        Command::Differentiate { rep, k, bx, prec } => {
            let f = load_spec(&rep.spec, &mut files)?;
            let (lo, hi) = parse_box(bx, 1)?;
            let phi = name_for(RepKind::Xmp { m: rep.m, p: rep.p }, &f, FIT_N)?;
            let trace = Trace::with_budget(budget);
            let g = differentiate(&phi.traced(&trace), rep.m, rep.p, *k)?;
            let v = g.ask_value(&Query::Integral { b: DyBox::new(lo.clone(), hi.clone())?, n: *prec })?;
            let exact = derivative(&f, *k)?.integral_box(&dy_q(&lo), &dy_q(&hi));
            let ok = within(&v, &exact, *prec);
            sink.json(
                &manifest(files),
                json!({"value": v, "error_exp": prec, "exact": format_rational(&exact), "within": ok, "queries": trace.queries()}),
            )?;
            contract(ok, "differentiate")
        }
        Command::Norm { spec, p, prec } => {
            let f = load_spec(spec, &mut files)?;
            let phi = name_for(RepKind::Xpd { p: *p, d: f.dim() }, &f, FIT_N)?;
            let a = min_radius_exponent(&f.bbox());
            let plan = norm_plan(&phi, f.dim(), a, *prec);
            let trace = Trace::with_budget(budget);
            let v = norm_xpd(&phi.traced(&trace), *p, a, *prec, budget)?;
            let exact = f.lp_pow_exact(*p)?;
            let ok = norm_within(&v, &exact, *p, *prec);
            sink.json(
                &manifest(files),
                json!({"value": v, "error_exp": prec, "exact_pow": format_rational(&exact), "within": ok,
                       "queries": trace.queries(), "plan": plan}),
            )?;
            contract(ok, "norm")
        }
        Command::Entropy { class, la, lb, c, p, from, to } => {
            let cls = match class.as_str() {
                "aa" => CompactClass::Aa { l: Modulus::affine(ModKind::Continuity, *la, *lb), c: *c },
                "fk" => CompactClass::Fk { l: Modulus::affine(ModKind::Lp { p: *p }, *la, *lb), p: *p },
                "lipschitz" => CompactClass::Lipschitz { big_l: *c },
                other => return Err(bad(format!("unknown class {other:?}"))),
            };
            let rows = entropy_table(&cls, *from..=*to)?;
            sink.csv(&manifest(files), &table_csv(&rows))?;
            contract(rows.iter().all(|r| r.sandwich), "entropy sandwich")
        }
        Command::DemoDiscontinuity { m } => {
            let r = discontinuity_demo(*m)?;
            let ok = r.zero_baseline_valid && r.rows.iter().all(|row| row.agree && row.norm1 == "1");
            sink.json(&manifest(files), serde_json::to_value(&r).expect("report"))?;
            contract(ok, "discontinuity demo")
        }
        Command::Profile { op, spec, p, from, to } => {
            let f = match spec {
                Some(s) => load_spec(s, &mut files)?,
                None => lpreps::symbolic::corpus::hat(),
            };
            let body = profile(op, &f, *p, *from, *to, budget)?;
            sink.csv(&manifest(files), &body)
        }
        Command::Validate { rep, n_max, shorten } => {
            let f = load_spec(&rep.spec, &mut files)?;
            let kind = parse_rep(rep, f.dim())?;
            let mut phi = name_for(kind, &f, FIT_N)?;
            if *shorten > 0 {
                let base = phi.length_fn();
                let s = *shorten;
                phi = phi.with_length(len_fn(move |l| base(l).saturating_sub(s)));
            }
            let r = validate_name(kind, &phi, &f, *n_max, Grid::default())?;
            sink.json(&manifest(files), serde_json::to_value(&r).expect("report"))?;
            contract(r.valid, "validate")
        }
    }
}

/// `|v - ||f||_p| < 2^{-n}` from the exact `p`-th power.
fn norm_within(v: &Dyadic, exact_pow: &Q, p: u32, n: usize) -> bool {
    let eps = pow2q(-(n as i64));
    let pow = |x: &Q| (0..p).fold(Q::from_integer(1.into()), |acc, _| acc * x);
    let v = v.to_rational();
    let lo = &v - &eps;
    let below = lo.is_negative() || pow(&lo) < *exact_pow;
    below && *exact_pow < pow(&(&v + &eps))
}

fn profile(op: &str, f: &Func, p: u32, from: usize, to: usize, budget: u64) -> Result<String, Failure> {
    match op {
        "integrate" => {
            let phi = name_for(RepKind::Xs { d: 1 }, f, FIT_N)?;
            let mut s = String::from("n,queries,bits,bound,holds\n");
            for n in from..=to {
                let t = Trace::with_budget(budget);
                let x = [make_xr_name(&Q::new(1.into(), 3.into())).traced(&t)];
                let y = [make_xr_name(&Q::new(2.into(), 3.into())).traced(&t)];
                integrate(&phi.traced(&t), &Source::Singular, &x, &y, n)?;
                let len = |k: u64| phi.declared_length(k as usize) as u64;
                let r = check_query_bound(&t, &Sop::constant(3), &len, n as u64);
                let holds = r.queries <= r.bound;
                s.push_str(&format!("{n},{},{},{},{holds}\n", r.queries, r.bits, r.bound));
            }
            Ok(s)
        }
        "norm" => {
            let phi = name_for(RepKind::Xpd { p, d: 1 }, f, FIT_N)?;
            let a = min_radius_exponent(&f.bbox());
            let mut s = String::from("n,big_m,planned,queries,ran\n");
            for n in from..=to {
                let plan = norm_plan(&phi, 1, a, n);
                let (queries, ran) = if plan.queries <= budget {
                    let t = Trace::with_budget(budget);
                    norm_xpd(&phi.traced(&t), p, a, n, budget)?;
                    (t.queries(), true)
                } else {
                    (0, false)
                };
                s.push_str(&format!("{n},{},{},{queries},{ran}\n", plan.big_m, plan.queries));
            }
            Ok(s)
        }
        other => Err(bad(format!("unknown profile op {other:?}"))),
    }
}
