//! Algorithms on names: integration, evaluation, translations between
//! representations, Sobolev embeddings, differentiation and the norm.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::{DyBox, Dyadic};
use crate::error::{Error, Result};
use crate::moduli::{clb, ModKind, Modulus};
use crate::name::{len_fn, Answer, AnswerKind, LenFn, Name, Query, QueryShape, Trace};
use crate::reps::{int_bits, make_xs_name, make_xs_name_unchecked, round_answer, validate_name, Grid, RepKind};
use crate::step::StepFunction;
use crate::symbolic::{corpus, pow2q, qi, Q, RBox};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Query budget, overridable through `LPREPS_BUDGET`.
pub fn budget_from_env() -> u64 {
    std::env::var("LPREPS_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

fn check_budget(planned: u64, budget: u64) -> Result<()> {
    if planned > budget {
        Err(Error::Budget { used: planned, budget })
    } else {
        Ok(())
    }
}

/// Machine-readable statement of what an operator result guarantees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claimed_error_exponent: usize,
    pub queries: u64,
    pub answer_bits: u64,
}

impl Certificate {
    pub fn new(n: usize, trace: &Trace) -> Self {
        Certificate { claimed_error_exponent: n, queries: trace.queries(), answer_bits: trace.bits() }
    }
}

fn clamp01(x: &Dyadic) -> Dyadic {
    Dyadic::min(&Dyadic::max(x, &Dyadic::zero()), &Dyadic::one())
}

fn unit_interval_query(n: usize) -> Query {
    Query::Integral { b: DyBox::unit(1), n }
}

/// How the length of an integral name bounds endpoint sensitivity.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    /// The length is a singularity modulus.
    Singular,
    /// The length is an Lp-modulus on a domain of measure `lambda` and diameter `diam`.
    Lp { lambda: Q, diam: Q },
}

impl Source {
    fn shift(&self, d: usize) -> i64 {
        match self {
            Source::Singular => 0,
            Source::Lp { lambda, diam } => 1 + clb(lambda) + (d as i64 - 1) * clb(diam),
        }
    }
}

/// Integral of `f` over the box spanned by the real points `x` and `y`.
pub fn integrate(phi: &Name, src: &Source, x: &[Name], y: &[Name], n: usize) -> Result<Dyadic> {
    let d = phi.dim();
    if x.len() != d || y.len() != d {
        return Err(Error::Precondition("endpoint dimension".into()));
    }
    let slack = 2 + clb(&qi(d as i64)).max(0) + src.shift(d);
    let e = phi.declared_length((n as i64 + slack).max(0) as usize);
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for i in 0..d {
        let a = x[i].ask_value(&Query::Real { n: e })?;
        let b = y[i].ask_value(&Query::Real { n: e })?;
        lo.push(Dyadic::min(&a, &b));
        hi.push(Dyadic::max(&a, &b));
    }
    phi.ask_value(&Query::Integral { b: DyBox::new(lo, hi)?, n: n + 1 })
}

/// `f(x)` from a continuous name and a real name.
pub fn evaluate(phi: &Name, x: &Name, n: usize) -> Result<Dyadic> {
    let e = phi.declared_length(n + 1);
    let a = x.ask_value(&Query::Real { n: e })?;
    phi.ask_value(&Query::Point { x: vec![a], n: n + 1 })
}

/// Exponents describing one approximant: `2^k` boxes, sides `<= 2^l`,
/// values `<= 2^m`.
fn step_params(s: &StepFunction) -> (i64, i64, i64) {
    let k = if s.len() <= 1 { 0 } else { clb(&qi(s.len() as i64)) };
    let mut l = i64::MIN;
    let mut m = i64::MIN;
    for (b, v) in &s.entries {
        for (a, c) in b.lower.iter().zip(&b.upper) {
            let side = (c - a).to_rational();
            if side.is_positive() {
                l = l.max(clb(&side));
            }
        }
        if !v.is_zero() {
            m = m.max(clb(&v.abs().to_rational()));
        }
    }
    (k, if l == i64::MIN { 0 } else { l }, m)
}

fn step_integral(s: &StepFunction, b: &DyBox) -> Q {
    s.entries
        .iter()
        .filter_map(|(c, v)| c.intersect(b).map(|i| (i.volume() * v.clone()).to_rational()))
        .sum()
}

fn step_l1(s: &StepFunction) -> Q {
    s.entries.iter().map(|(b, v)| (b.volume() * v.abs()).to_rational()).sum()
}

fn step_answer(phi: &Name, n: usize) -> Result<StepFunction> {
    match phi.ask(&Query::Index { n })? {
        Answer::Step(s) => Ok(s),
        _ => Err(Error::Contract("Cauchy name returned a non-step answer".into())),
    }
}

/// Precision up to which the output length of [`cauchy_to_xp`] is computed
/// from approximants; beyond it the table is continued affinely.
pub const CAUCHY_LENGTH_CAP: usize = 10;

/// `xi_p`-name from a Cauchy name of `f` on the box `dom`.
pub fn cauchy_to_xp(phi: &Name, p: u32, dom: &DyBox, cap: usize) -> Result<Name> {
    let d = dom.dim();
    let lambda = dom.volume().to_rational();
    let q_exp = (Q::from_integer(clb(&lambda).max(0).into()) * (qi(1) - Q::new(1.into(), (p as i64).into())))
        .ceil()
        .to_integer()
        .to_i64()
        .unwrap_or(0) as usize;
    let s0 = step_answer(phi, 0)?;
    let ib = int_bits(&(step_l1(&s0) + lambda.clone().max(qi(1))));
    let cld = clb(&qi(d as i64)).max(0);
    let mut table: Vec<usize> = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let s = step_answer(phi, n + 2)?;
        let r = if s.is_empty() {
            0
        } else {
            let (k, l, m) = step_params(&s);
            (p as i64 * (k + m + n as i64 + 1) + (d as i64 - 1) * l + cld + 2).max(0) as usize
        };
        let mut v = r.max(n + 2 * ib);
        if let Some(&prev) = table.last() {
            v = v.max(prev);
            if prev > 0 {
                v = v.max(prev + 1);
            }
        }
        table.push(v);
    }
    let slope = table.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(1).max(1);
    let last = *table.last().unwrap();
    let length = len_fn(move |l| if l <= cap { table[l] } else { last + slope * (l - cap) });
    let phi = phi.clone();
    let dom = dom.clone();
    Ok(Name::semantic(
        QueryShape::Integral,
        d,
        AnswerKind::Value,
        length,
        Arc::new(move |q| match q {
            Query::Integral { b, n } => {
                let Some(b) = b.intersect(&dom) else {
                    return Ok(Answer::Value(Dyadic::zero()));
                };
                let s = step_answer(&phi, n + 1 + q_exp)?;
                Ok(Answer::Value(round_answer(&step_integral(&s, &b), *n)))
            }
            _ => Err(Error::Invariant("integral query expected".into())),
        }),
    )
    .with_tag("xp"))
}

/// Step function `F` with `||f - F||_p < 2^{-n}` from a `xi_p`-name.
pub fn xp_to_cauchy(phi: &Name, p: u32, dom: &DyBox, n: usize, budget: u64) -> Result<StepFunction> {
    let d = dom.dim();
    let c = clb(&dom.volume().to_rational()).max(0) as usize;
    let big_n = phi.declared_length(n + 1);
    let shift = (d * (big_n + c)).div_ceil(p as usize);
    let big_m = phi.declared_length(n + shift + 2);
    let k = d * big_n + n + 2;
    if big_m > 40 {
        return Err(Error::Budget { used: u64::MAX, budget });
    }
    let half = Dyadic::pow2(-(big_m as i64) - 1);
    let ranges: Vec<(i64, i64)> = (0..d)
        .map(|i| {
            let lo = (&dom.lower[i] - &half).shl(big_m as i64).floor().to_i64().unwrap_or(0) + 1;
            let hi = (&dom.upper[i] + &half).shl(big_m as i64).ceil().to_i64().unwrap_or(0) - 1;
            (lo, hi)
        })
        .collect();
    let planned = ranges.iter().map(|(a, b)| (b - a + 1).max(0) as u64).fold(1u64, |x, y| x.saturating_mul(y));
    check_budget(planned, budget)?;
    let r = Dyadic::pow2(-(big_n as i64) - 1);
    let scale = big_n as i64 * d as i64;
    let mut entries = Vec::new();
    let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if planned > 0 {
        loop {
            let z: Vec<Dyadic> = idx.iter().map(|&j| Dyadic::new(j, big_m as u32)).collect();
            let qbox = DyBox::new(z.iter().map(|c| c - &r).collect(), z.iter().map(|c| c + &r).collect())?;
            let v = phi.ask_value(&Query::Integral { b: qbox, n: k })?.shl(scale);
            if !v.is_zero() {
                let cell = DyBox::new(z.iter().map(|c| c - &half).collect(), z.iter().map(|c| c + &half).collect())?;
                entries.push((cell, v));
            }
            let mut i = 0;
            loop {
                if i == d {
                    return Ok(StepFunction { d, entries }.simplify());
                }
                idx[i] += 1;
                if idx[i] <= ranges[i].1 {
                    break;
                }
                idx[i] = ranges[i].0;
                i += 1;
            }
        }
    }
    Ok(StepFunction::zero(d))
}

/// `Q'` with `||f||_inf <= 2^{Q'}` from a `xi_{1,p}`-name on `[0,1]`.
pub fn sup_norm_bound(phi: &Name) -> Result<i64> {
    let a = phi.ask_value(&unit_interval_query(0))?;
    let q = clb(&(a.abs().to_rational() + qi(1))).max(0);
    Ok(q.max(phi.declared_length(1) as i64) + 1)
}

/// `xi_C`-name of the continuous representative from a `xi_{1,p}`-name.
pub fn sobolev_to_continuous(phi: &Name) -> Result<Name> {
    let qb = sup_norm_bound(phi)?;
    let ib = qb.max(0) as usize + 1;
    let inner = phi.clone();
    let mu = phi.length_fn();
    let length = len_fn(move |l| mu(l + 1).max(l + 2 * ib));
    Ok(Name::semantic(
        QueryShape::Point,
        1,
        AnswerKind::Value,
        length,
        Arc::new(move |q| match q {
            Query::Point { x, n } => {
                let e = inner.declared_length(n + 3);
                let w = Dyadic::pow2(-(e as i64));
                let c = clamp01(&x[0]);
                let lo = Dyadic::max(&Dyadic::min(&(&c - &w.shl(-1)), &(&Dyadic::one() - &w)), &Dyadic::zero());
                let b = DyBox::interval(lo.clone(), &lo + &w)?;
                let a = inner.ask_value(&Query::Integral { b, n: e + n + 2 })?;
                let avg = a.shl(e as i64).to_rational();
                Ok(Answer::Value(Dyadic::round_rational(&avg, (n + 2) as u32)))
            }
            _ => Err(Error::Invariant("point query expected".into())),
        }),
    )
    .with_tag("xc"))
}

fn relength(phi: &Name, length: LenFn, tag: &str) -> Name {
    let inner = phi.clone();
    Name::semantic(QueryShape::Integral, 1, AnswerKind::Value, length, Arc::new(move |q| inner.ask(q))).with_tag(tag)
}

/// `xi_p`-name from a `xi_{1,p}`-name: `n -> max{|phi|(n+2), p(n+Q'+1)+2}`.
pub fn sobolev_to_lp(phi: &Name, p: u32) -> Result<Name> {
    let qb = sup_norm_bound(phi)?.max(0) as usize;
    let mu = phi.length_fn();
    let length = len_fn(move |l| mu(l + 2).max(p as usize * (l + qb + 1) + 2));
    Ok(relength(phi, length, "xp"))
}

/// Bound `2^Q >= ||f^{(m-1)}||_inf` from `2^{m-1}` interval queries.
pub fn derivative_sup_bound(phi: &Name, m: u32) -> Result<i64> {
    let w = Dyadic::pow2(-(m as i64));
    let mut worst = Q::zero();
    for i in 0..(1i64 << (m - 1)) {
        let a = Dyadic::new(2 * i, m);
        let b = DyBox::interval(a.clone(), &a + &w)?;
        let v = phi.ask_value(&Query::Integral { b, n: 0 })?.abs().to_rational() + qi(1);
        worst = worst.max(v);
    }
    let c = worst * pow2q(m as i64);
    let bound = c * pow2q((m * m) as i64 - 1) + pow2q(phi.declared_length(1) as i64);
    Ok(clb(&bound).max(0))
}

/// `xi_{m-1,p}`-name from a `xi_{m,p}`-name on `[0,1]`.
pub fn sobolev_embed(phi: &Name, m: u32, p: u32) -> Result<Name> {
    if m == 0 {
        return Err(Error::Precondition("embedding needs m >= 1".into()));
    }
    if m == 1 {
        return sobolev_to_lp(phi, p);
    }
    let qb = derivative_sup_bound(phi, m)? as usize;
    let mu = phi.length_fn();
    let length = len_fn(move |l| mu(l + 2).max(p as usize * (l + qb + 1) + 2));
    Ok(relength(phi, length, &format!("x{}p", m - 1)))
}

/// The chain `xi_{m,p} -> ... -> xi_{1,p}`.
pub fn embed_to_first(phi: &Name, m: u32, p: u32) -> Result<Name> {
    let mut cur = phi.clone();
    for j in (2..=m).rev() {
        cur = sobolev_embed(&cur, j, p)?;
    }
    Ok(cur)
}

fn derivative_step(phi: &Name, m: u32, p: u32) -> Result<Name> {
    let first = embed_to_first(phi, m, p)?;
    let qb = sup_norm_bound(&first)?.max(0) as usize;
    let cname = sobolev_to_continuous(&first)?;
    let mu = phi.length_fn();
    let length = len_fn(move |l| mu(l).max(l + 2 * (qb + 2)));
    Ok(Name::semantic(
        QueryShape::Integral,
        1,
        AnswerKind::Value,
        length,
        Arc::new(move |q| match q {
            Query::Integral { b, n } => {
                let a = clamp01(&b.lower[0]);
                let c = clamp01(&b.upper[0]);
                let fa = cname.ask_value(&Query::Point { x: vec![a], n: n + 2 })?;
                let fc = cname.ask_value(&Query::Point { x: vec![c], n: n + 2 })?;
                Ok(Answer::Value(round_answer(&(&fc - &fa).to_rational(), *n)))
            }
            _ => Err(Error::Invariant("integral query expected".into())),
        }),
    )
    .with_tag(&format!("x{}p", m - 1)))
}

/// `xi_{m-k,p}`-name of `f^{(k)}` from a `xi_{m,p}`-name of `f`.
pub fn differentiate(phi: &Name, m: u32, p: u32, k: u32) -> Result<Name> {
    if k > m {
        return Err(Error::Precondition(format!("cannot take {k} derivatives of a W^{{{m},p}} name")));
    }
    let mut cur = phi.clone();
    for j in 0..k {
        cur = derivative_step(&cur, m - j, p)?;
    }
    Ok(cur)
}

/// Smallest `A >= 0` with `[-2^A, 2^A]^d` at distance more than one from
/// the box `dom`.
pub fn min_radius_exponent(dom: &RBox) -> u32 {
    let r = dom.0.iter().chain(&dom.1).map(|x| x.abs()).fold(Q::zero(), |a, b| a.max(b)) + qi(1);
    let mut a = 0;
    while pow2q(a as i64) <= r {
        a += 1;
    }
    a
}

/// Grid parameters used by [`norm_xpd`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormPlan {
    pub big_n: usize,
    pub big_m: usize,
    pub k: usize,
    pub queries: u64,
}

pub fn norm_plan(phi: &Name, d: usize, a: u32, n: usize) -> NormPlan {
    let mu = |n: usize| phi.declared_length(n);
    let big_n = mu(n + d + 1);
    let cld = clb(&qi(d as i64 + 1)).max(0) as usize;
    let big_m = d * big_n.saturating_sub(1) + big_n + a as usize + mu(0) + cld + 1;
    let k = n + (d + 1) * (mu(big_n) + 2) + mu(0) + 1;
    let per_axis = if big_m + a as usize + 1 >= 63 { u64::MAX } else { (1u64 << (big_m + a as usize + 1)) + 1 };
    let queries = (0..d).fold(1u64, |acc, _| acc.saturating_mul(per_axis));
    NormPlan { big_n, big_m, k, queries }
}

/// `2^{-n}`-approximation of `||f||_p` from a `xi_p^D`-name.
pub fn norm_xpd(phi: &Name, p: u32, a: u32, n: usize, budget: u64) -> Result<Dyadic> {
    let d = phi.dim();
    if d != 1 {
        return Err(Error::Unsupported("norm_xpd is implemented in one dimension".into()));
    }
    let plan = norm_plan(phi, d, a, n);
    check_budget(plan.queries, budget)?;
    let reach = 1i64 << (plan.big_m + a as usize);
    let mut sum = Dyadic::zero();
    for j in -reach..=reach {
        let z = Dyadic::new(j, plan.big_m as u32);
        let v = phi.ask_value(&Query::Mollified { x: vec![z], k: plan.big_n, n: plan.k })?.abs();
        if !v.is_zero() {
            let mut t = Dyadic::one();
            for _ in 0..p {
                t = &t * &v;
            }
            sum = &sum + &t;
        }
    }
    let s = sum.shl(-((d * plan.big_m) as i64));
    Ok(pth_root_floor(&s, p, n as u32 + 3))
}

/// Largest point of `2^{-bits} Z` whose `p`-th power is at most `s >= 0`.
pub fn pth_root_floor(s: &Dyadic, p: u32, bits: u32) -> Dyadic {
    let x: BigInt = s.shl((p * bits) as i64).floor();
    if !x.is_positive() {
        return Dyadic::zero();
    }
    Dyadic::new(x.nth_root(p), bits)
}

/// One row of the discontinuity witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoRow {
    pub m: u32,
    /// All bit strings of length `< m` were compared.
    pub strings_checked: u64,
    /// Grid box queries with precision `< m` that were compared.
    pub grid_checked: u64,
    pub agree: bool,
    /// Every query of at most this length gets the zero-name's answer.
    pub agree_prefix: usize,
    pub norm1: String,
    pub name_valid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub zero_baseline_valid: bool,
    pub rows: Vec<DemoRow>,
}

/// Name of the oscillator `f_m` that answers zero below precision `m`,
/// and a zero-function name with the same length.
pub fn oscillator_names(m: u32) -> Result<(Name, Name)> {
    let mu = Modulus::affine(ModKind::Singularity, 1, 1);
    let base = make_xs_name(&corpus::oscillator(m), &mu)?;
    let b2 = base.clone();
    let phi = Name::semantic(
        QueryShape::Integral,
        1,
        AnswerKind::Value,
        base.length_fn(),
        Arc::new(move |q| {
            if q.precision() < m as usize {
                Ok(Answer::Value(Dyadic::zero()))
            } else {
                b2.ask(q)
            }
        }),
    )
    .with_tag("xs");
    let zero = make_xs_name_unchecked(&corpus::zero(), &mu).with_length(base.length_fn());
    Ok((phi, zero))
}

pub fn discontinuity_demo(m_max: u32) -> Result<DemoReport> {
    let grid = Grid::default();
    let zero_mu = Modulus::zero(ModKind::Singularity);
    let z0 = make_xs_name(&corpus::zero(), &zero_mu)?;
    let zero_baseline_valid = validate_name(RepKind::Xs { d: 1 }, &z0, &corpus::zero(), 6, grid)?.valid;
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let (phi, zero) = oscillator_names(m)?;
        let mut strings = 0u64;
        let mut agree_prefix = usize::MAX;
        for len in 0..m as usize {
            for a in crate::dyadic::BitString::all_of_len(len) {
                strings += 1;
                if phi.query(&a)? != zero.query(&a)? && agree_prefix == usize::MAX {
                    agree_prefix = len.saturating_sub(1);
                }
            }
        }
        let mut grid_checked = 0u64;
        let step = Dyadic::pow2(-3);
        let pts: Vec<Dyadic> = (-2..=10).map(|j| &Dyadic::from_int(j) * &step).collect();
        let mut agree = agree_prefix == usize::MAX;
        for n in 0..m as usize {
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let q = Query::Integral { b: DyBox::interval(pts[i].clone(), pts[j].clone())?, n };
                    grid_checked += 1;
                    if phi.ask(&q)? != zero.ask(&q)? {
                        agree = false;
                    }
                }
            }
        }
        let f = corpus::oscillator(m);
        let norm1 = f.lp_pow_exact(1)?.to_string();
        let name_valid = validate_name(RepKind::Xs { d: 1 }, &phi, &f, (m as usize + 2).min(8), grid)?.valid;
        rows.push(DemoRow {
            m,
            strings_checked: strings,
            grid_checked,
            agree,
            agree_prefix: if agree_prefix == usize::MAX { m as usize - 1 } else { agree_prefix },
            norm1,
            name_valid,
        });
    }
    Ok(DemoReport { zero_baseline_valid, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::{make_cauchy_name, make_xc_name, make_xmp_name, make_xp_name, make_xpd_name, make_xr_name, staircase_scheme};
    use crate::symbolic::q;

    fn close(v: &Dyadic, x: &Q, n: i64) -> bool {
        (v.to_rational() - x).abs() < pow2q(-n)
    }

    #[test]
    fn integrate_real_endpoints() {
        let one = corpus::constant(qi(1));
        let phi = make_xs_name(&one, &Modulus::affine(ModKind::Singularity, 1, 1)).unwrap();
        let t = Trace::new();
        let x = [make_xr_name(&q(1, 3)).traced(&t)];
        let y = [make_xr_name(&q(2, 3)).traced(&t)];
        let v = integrate(&phi.traced(&t), &Source::Singular, &x, &y, 8).unwrap();
        assert!(close(&v, &q(1, 3), 8));
        assert_eq!(t.queries(), 3);
    }

    #[test]
    fn evaluate_hat() {
        let hat = corpus::hat();
        let phi = make_xc_name(&hat, &Modulus::affine(ModKind::Continuity, 1, 2)).unwrap();
        let v = evaluate(&phi, &make_xr_name(&q(1, 3)), 6).unwrap();
        assert!(close(&v, &q(2, 3), 6));
    }

    #[test]
    fn xp_to_cauchy_indicator() {
        let chi = corpus::chi_half();
        let phi = make_xp_name(&chi, &Modulus::affine(ModKind::Lp { p: 1 }, 1, 2), 1).unwrap();
        let s = xp_to_cauchy(&phi, 1, &DyBox::unit(1), 3, DEFAULT_BUDGET).unwrap();
        assert!(crate::reps::step_within(&chi, &s, 1, 3).unwrap());
    }

    #[test]
    fn cauchy_round_trip() {
        let id = corpus::identity();
        let c = make_cauchy_name(&id, 2, staircase_scheme(&id, 2), 4).unwrap();
        let x = cauchy_to_xp(&c, 2, &DyBox::unit(1), 6).unwrap();
        let r = validate_name(RepKind::Xp { p: 2, d: 1 }, &x, &id, 4, Grid::default()).unwrap();
        assert!(r.valid, "{r:?}");
    }

    #[test]
    fn sobolev_chain() {
        let f = corpus::half_square();
        let mu = Modulus::affine(ModKind::Lp { p: 1 }, 1, 2);
        let phi = make_xmp_name(&f, &mu, 1, 1).unwrap();
        let c = sobolev_to_continuous(&phi).unwrap();
        let v = c.ask_value(&Query::Point { x: vec!["1/2".parse().unwrap()], n: 5 }).unwrap();
        assert!(close(&v, &q(1, 8), 5));
        let lp = sobolev_to_lp(&phi, 1).unwrap();
        assert!(validate_name(RepKind::Xp { p: 1, d: 1 }, &lp, &f, 4, Grid::default()).unwrap().valid);
        let d = differentiate(&phi, 1, 1, 1).unwrap();
        let b = DyBox::interval(Dyadic::zero(), "1/2".parse().unwrap()).unwrap();
        let v = d.ask_value(&Query::Integral { b, n: 6 }).unwrap();
        assert!(close(&v, &q(1, 8), 6));
        assert!(differentiate(&phi, 1, 1, 2).is_err());
    }

    #[test]
    fn mean_value_desk_check() {
        let c = q(1, 4);
        assert_eq!(c * pow2q(2 * 2 - 1), qi(2));
    }

    #[test]
    fn norm_of_constant() {
        let one = corpus::constant(qi(1));
        let mu = Modulus::affine(ModKind::Lp { p: 1 }, 1, 2);
        let phi = make_xpd_name(&one, &mu, 1).unwrap();
        let a = min_radius_exponent(&one.bbox());
        assert_eq!(a, 2);
        let v = norm_xpd(&phi, 1, a, 1, DEFAULT_BUDGET).unwrap();
        assert!(close(&v, &qi(1), 1));
    }

    #[test]
    fn roots() {
        let s = Dyadic::new(1, 1);
        let r = pth_root_floor(&s, 2, 10);
        let rq = r.to_rational();
        assert!(&rq * &rq <= q(1, 2));
        let up = &rq + pow2q(-10);
        assert!(&up * &up > q(1, 2));
    }

    #[test]
    fn demo_small() {
        let r = discontinuity_demo(3).unwrap();
        assert!(r.zero_baseline_valid);
        let row = &r.rows[2];
        assert!(row.agree && row.name_valid);
        assert_eq!(row.agree_prefix, 2);
        assert_eq!(row.norm1, "1");
    }
}
