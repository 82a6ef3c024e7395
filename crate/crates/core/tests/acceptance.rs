//! Acceptance suite: one PASS/FAIL line per criterion, with every tolerance
//! and cap pinned below. Known failures are listed in `EXPECTED_FAILURES`;
//! the test fails if the observed set of failing checks differs from it.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use lpreps::dyadic::{
    decode_dyadic, decode_int, decode_nat, encode_dyadic, encode_int, encode_nat, encoded_len, pair, unpair,
    BitString, Dyadic, DyBox,
};
use lpreps::entropy::{
    aa_cover, aa_cover_bound_exp, aa_cover_count, aa_spanning, aa_spanning_count, cauchy_rep_metric, entropy_table,
    fk_spanning, greedy_code, lipschitz_samples, min_pairwise_sup, pl_sup_dist, CodeSet, CompactClass, LipschitzNet,
};
use lpreps::moduli::{
    continuity_to_lp, indicator_modulus, least_modulus, linear_singularity_modulus, lp_modulus_from_derivative_norm,
    lp_of_derivative_to_continuity, lp_to_singularity, lq_from_lp, norm_bound_from_modulus, validate_modulus, ModKind,
    Modulus,
};
use lpreps::name::{check_query_bound, Query, Sop, Trace};
use lpreps::operators::{
    cauchy_to_xp, differentiate, discontinuity_demo, evaluate, integrate, min_radius_exponent, norm_plan, norm_xpd,
    sobolev_to_continuous, xp_to_cauchy, Source, CAUCHY_LENGTH_CAP,
};
use lpreps::reps::{derivative, make_xr_name, name_for, step_within, validate_name, Grid, RepKind};
use lpreps::symbolic::corpus::{self, Entry};
use lpreps::symbolic::{mollifier_grad_sup, mollifier_integral, pow2q, q, qi, Func, MollifierScale, Q};
use lpreps::Error;

/// Longest bit string enumerated by criterion 1.
const C1_MAX_BITS: usize = 12;
/// Largest precision for modulus validation.
const C2_N_MAX: usize = 10;
/// Validation grid refinement: resolution `2^{-mu(n)-G}`.
const G: u32 = 2;
const C3_N_MAX: usize = 8;
const C3_M_MAX: u32 = 6;
const C4_N_MAX: usize = 10;
const C4_CAUCHY_N_MAX: usize = 4;
const C4_CAUCHY_VALIDATE_N: usize = 4;
/// Query budget per `xp_to_cauchy` call.
const C4_BUDGET: u64 = 1 << 20;
const C5_N_MAX: usize = 3;
/// Plans above this many mollifier queries are not run.
const C5_QUERY_CAP: u64 = 1 << 23;
const C5_INTEGRATE_N_MAX: usize = 10;
const C5_INTEGRATE_QUERIES: u64 = 3;
const C6_M_MAX: u32 = 6;
const C7_BUDGET: u64 = 1 << 16;
const C7_CODE_N_MAX: usize = 24;
const C7_CODE_M_MAX: usize = 8;
const C8_PAIRS: usize = 50;
const C8_N: usize = 3;
const C8_SEED: u64 = 2024;

const RUNTIME: [Duration; 8] = [
    Duration::from_secs(10),
    Duration::from_secs(120),
    Duration::from_secs(300),
    Duration::from_secs(300),
    Duration::from_secs(600),
    Duration::from_secs(300),
    Duration::from_secs(600),
    Duration::from_secs(60),
];

/// Checks that are known to fail, by label.
///
/// * `3:gradient identity`: unit mass forces `||grad g^D_m||_inf = (d+1) 2^{d(m-1)+m}`,
///   so the stated `d 2^{d(m-1)+m}` cannot hold together with `int g^D_m = 1`.
/// * `4:xp_to_cauchy ...`: the grid `2^{-|phi|(n + shift + 2)}` exceeds the query budget.
/// * `5:norm p=... within cap`: the planned grid `2^{M+A+1}+1` exceeds `C5_QUERY_CAP`.
const EXPECTED_FAILURES: &[&str] = &[
    "3:gradient identity",
    "4:xp_to_cauchy p=1 within budget",
    "4:xp_to_cauchy p=2 within budget",
    "5:norm p=1 within cap",
    "5:norm p=2 within cap",
];

struct Check {
    criterion: usize,
    label: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn add(&mut self, criterion: usize, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { criterion, label: label.into(), ok, detail: detail.into() });
    }

    fn failing(&self, criterion: usize) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.criterion == criterion && !c.ok).collect()
    }
}

fn within(v: &Dyadic, exact: &Q, n: usize) -> bool {
    (v.to_rational() - exact).abs() < pow2q(-(n as i64))
}

fn dy(x: &Q) -> Dyadic {
    Dyadic::from_rational(x).expect("dyadic")
}

fn unit() -> (Q, Q) {
    (qi(1), qi(1))
}

fn continuous_entries() -> Vec<Entry> {
    corpus::corpus().into_iter().filter(|e| e.continuous).collect()
}

// ------------------------------------------------------------------ 1

fn criterion1(s: &mut Suite) {
    let mut strings = 0u64;
    let mut nat_ok = true;
    let mut int_ok = true;
    let mut bin_ok = true;
    let mut pad_ok = true;
    let mut pair_ok = true;
    for len in 0..=C1_MAX_BITS {
        for a in BitString::all_of_len(len) {
            strings += 1;
            if let Ok(v) = decode_nat(&a) {
                let first_one = a.bits().iter().position(|&b| b).unwrap();
                nat_ok &= encode_nat(&v).unwrap().bits() == &a.bits()[first_one..];
            } else {
                nat_ok &= a.bits().iter().all(|&b| !b);
            }
            if let Ok(z) = decode_int(&a) {
                let e = encode_int(&z);
                int_ok &= decode_int(&e).unwrap() == z && e.len() <= a.len().max(1);
            } else {
                int_ok &= a.is_empty();
            }
            if let Ok(x) = decode_dyadic(&a) {
                let e = encode_dyadic(&x);
                bin_ok &= decode_dyadic(&e).unwrap() == x && e.len() == encoded_len(&x);
                if !x.is_zero() {
                    bin_ok &= e.len() <= a.len();
                }
                for extra in 0..=4 {
                    let padded = e.padded(e.len() + extra).unwrap();
                    pad_ok &= decode_dyadic(&padded).ok() == Some(x.clone());
                }
            }
            if let Ok((u, v)) = unpair(&a) {
                pair_ok &= pair(&u, &v) == a;
            }
        }
    }
    // Every value whose code fits is reached and round-trips.
    let mut values = 0u64;
    for v in 1u32..(1 << C1_MAX_BITS) {
        let b = BigUint::from(v);
        let e = encode_nat(&b).unwrap();
        nat_ok &= decode_nat(&e).unwrap() == b;
        values += 1;
    }
    for z in 1 - (1i64 << (C1_MAX_BITS - 1))..(1i64 << (C1_MAX_BITS - 1)) {
        let e = encode_int(&z.into());
        int_ok &= e.len() <= C1_MAX_BITS && decode_int(&e).unwrap() == z.into();
        values += 1;
    }
    for exp in 0..=C1_MAX_BITS as u32 {
        for num in -(1i64 << C1_MAX_BITS)..=(1i64 << C1_MAX_BITS) {
            let x = Dyadic::new(num, exp);
            if encoded_len(&x) > C1_MAX_BITS || x.exponent() != exp {
                continue;
            }
            values += 1;
            bin_ok &= decode_dyadic(&encode_dyadic(&x)).unwrap() == x;
        }
    }
    for la in 0..=C1_MAX_BITS / 2 {
        for lb in 0..=(C1_MAX_BITS / 2).saturating_sub(la + 1) {
            for a in BitString::all_of_len(la) {
                for b in BitString::all_of_len(lb) {
                    values += 1;
                    pair_ok &= unpair(&pair(&a, &b)).ok() == Some((a.clone(), b.clone()));
                }
            }
        }
    }
    let detail = format!("{strings} strings and {values} values up to {C1_MAX_BITS} bits");
    s.add(1, "1:nu_N round trip", nat_ok, detail.clone());
    s.add(1, "1:nu_Z round trip", int_ok, detail.clone());
    s.add(1, "1:bin round trip", bin_ok, detail.clone());
    s.add(1, "1:bin padding invariance", pad_ok, detail.clone());
    s.add(1, "1:pairing round trip", pair_ok, detail);
}

// ------------------------------------------------------------------ 2

fn validates(mu: &Modulus, f: &Func) -> Result<bool, Error> {
    Ok(validate_modulus(mu, f, C2_N_MAX, G)?.valid)
}

/// Smallest `C >= 0` with `||f'||_p < 2^C`.
fn derivative_norm_exponent(f: &Func, p: u32) -> i64 {
    let d = f.weak_derivative().unwrap();
    let pow = d.lp_pow_exact(p).unwrap();
    (0..).find(|c| pow < pow2q(c * p as i64)).unwrap()
}

fn criterion2(s: &mut Suite) {
    let (lambda, diam) = unit();
    let mut tally: Vec<(String, usize, Vec<String>)> = Vec::new();
    let mut record = |what: &str, who: String, ok: bool| {
        let i = match tally.iter().position(|t| t.0 == what) {
            Some(i) => i,
            None => {
                tally.push((what.to_string(), 0, Vec::new()));
                tally.len() - 1
            }
        };
        tally[i].1 += 1;
        if !ok {
            tally[i].2.push(who);
        }
    };
    let mut norm_fail = Vec::new();
    let mut norm_count = 0;
    for e in corpus::corpus() {
        let f = &e.f;
        for p in [1u32, 2] {
            let who = format!("{} p={p}", e.name);
            let mu = least_modulus(ModKind::Lp { p }, f, C2_N_MAX, G).unwrap();
            record("least Lp-modulus", who.clone(), validates(&mu, f).unwrap());
            let sing = lp_to_singularity(&mu, &lambda, &diam, 1);
            record("lp_to_singularity", who.clone(), validates(&sing, f).unwrap());
            norm_count += 1;
            if f.lp_pow_exact(p).unwrap() >= norm_bound_from_modulus(&mu, &diam, p) {
                norm_fail.push(who.clone());
            }
            if p == 2 {
                let l1 = lq_from_lp(&mu, 2, 1, &lambda).unwrap();
                record("lq_from_lp", who.clone(), validates(&l1, f).unwrap());
                let lin = linear_singularity_modulus(2, 1, 2).unwrap();
                record("linear_singularity_modulus", who.clone(), validates(&lin, f).unwrap());
            }
            if e.continuous {
                let mc = least_modulus(ModKind::Continuity, f, C2_N_MAX, G).unwrap();
                let eta = continuity_to_lp(&mc, &indicator_modulus(p), e.sup_log, &lambda, p);
                record("continuity_to_lp", who.clone(), validates(&eta, f).unwrap());
                let d = f.weak_derivative().unwrap();
                let md = least_modulus(ModKind::Lp { p }, &d, C2_N_MAX, G).unwrap();
                let mc2 = lp_of_derivative_to_continuity(&md);
                record("lp_of_derivative_to_continuity", who.clone(), validates(&mc2, f).unwrap());
            }
            if f.extension_continuous() {
                let c = derivative_norm_exponent(f, p);
                let m = lp_modulus_from_derivative_norm(f, p, c).unwrap();
                record("lp_modulus_from_derivative_norm", who.clone(), validates(&m, f).unwrap());
            }
        }
    }
    let small_hat = corpus::hat_on(q(1, 4), q(3, 4), q(1, 2));
    for p in [1u32, 2] {
        let m = lp_modulus_from_derivative_norm(&small_hat, p, 2).unwrap();
        record("lp_modulus_from_derivative_norm", format!("small hat p={p}"), validates(&m, &small_hat).unwrap());
        record(
            "indicator_modulus",
            format!("one p={p}"),
            validates(&indicator_modulus(p), &corpus::constant(qi(1))).unwrap(),
        );
    }
    let rejects = lp_modulus_from_derivative_norm(&corpus::identity(), 1, 2).is_err();
    for (what, count, fails) in tally {
        let detail = if fails.is_empty() { format!("{count} cases") } else { format!("{count} cases, failing: {fails:?}") };
        s.add(2, format!("2:{what}"), fails.is_empty(), detail);
    }
    s.add(2, "2:derivative-norm precondition", rejects, "identity is rejected");
    s.add(
        2,
        "2:norm estimate",
        norm_fail.is_empty(),
        format!("{norm_count} cases of ||f||_p^p < bound^p, failing: {norm_fail:?}"),
    );
}

// ------------------------------------------------------------------ 3

fn criterion3(s: &mut Suite) {
    let mut cont_fail = Vec::new();
    let mut moll_fail = Vec::new();
    let mut cases = 0;
    for e in corpus::corpus() {
        for p in [1u32, 2] {
            let mu = least_modulus(ModKind::Lp { p }, &e.f, C3_N_MAX, G).unwrap();
            for n in 0..=C3_N_MAX {
                cases += 1;
                let m = mu.at(n) as u32;
                let fm = e.f.continuous_approx(m).unwrap();
                let bound = pow2q(-(n as i64) * p as i64);
                if !e.f.pw().sub(fm.pw()).lp_pow_lt(p, &bound).unwrap() {
                    cont_fail.push(format!("{} p={p} n={n}", e.name));
                }
                let fd = e.f.mollified(m).unwrap();
                let bound_d = pow2q((1 - n as i64) * p as i64);
                if !e.f.pw().sub(fd.pw()).lp_pow_lt(p, &bound_d).unwrap() {
                    moll_fail.push(format!("{} p={p} n={n}", e.name));
                }
            }
        }
    }
    s.add(
        3,
        "3:continuous approximation",
        cont_fail.is_empty(),
        format!("{cases} cases of ||f - f_mu(n)||_p < 2^-n, failing: {cont_fail:?}"),
    );
    s.add(
        3,
        "3:differentiable approximation",
        moll_fail.is_empty(),
        format!("{cases} cases of ||f - f^D_mu(n)||_p < 2^(1-n), failing: {moll_fail:?}"),
    );
    let mut mass_ok = true;
    let mut grad = Vec::new();
    for d in 1..=2u32 {
        for m in 0..=C3_M_MAX {
            mass_ok &= mollifier_integral(d, m, MollifierScale::Normalized) == Q::one();
            let stated = qi(d as i64) * pow2q(d as i64 * (m as i64 - 1) + m as i64);
            let got = mollifier_grad_sup(d, m, MollifierScale::Normalized);
            if got != stated {
                grad.push(format!("d={d} m={m}: {got} vs {stated}"));
            }
        }
    }
    s.add(3, "3:mass identity", mass_ok, format!("int g^D_m = 1 for d <= 2, m <= {C3_M_MAX}"));
    let first = grad.first().cloned().unwrap_or_default();
    s.add(
        3,
        "3:gradient identity",
        grad.is_empty(),
        format!("{} of {} differ, e.g. {first}", grad.len(), 2 * (C3_M_MAX + 1)),
    );
}

// ------------------------------------------------------------------ 4

fn endpoints() -> Vec<Q> {
    vec![qi(0), q(1, 3), q(1, 2), q(5, 7), qi(1)]
}

fn dyadic_points() -> Vec<Q> {
    vec![qi(0), q(1, 4), q(3, 8), q(1, 2), q(13, 16), qi(1)]
}

fn criterion4(s: &mut Suite) {
    let (lambda, diam) = unit();
    let ends = endpoints();
    // integrate from xs and xp names.
    let mut fails = Vec::new();
    let mut count = 0;
    for e in corpus::corpus() {
        let reps = [
            (RepKind::Xs { d: 1 }, Source::Singular),
            (RepKind::Xp { p: 1, d: 1 }, Source::Lp { lambda: lambda.clone(), diam: diam.clone() }),
            (RepKind::Xp { p: 2, d: 1 }, Source::Lp { lambda: lambda.clone(), diam: diam.clone() }),
        ];
        for (rep, src) in reps {
            let phi = name_for(rep, &e.f, C4_N_MAX).unwrap();
            for i in 0..ends.len() {
                for j in i + 1..ends.len() {
                    let x = [make_xr_name(&ends[i])];
                    let y = [make_xr_name(&ends[j])];
                    let exact = e.f.integral_box(&[ends[i].clone()], &[ends[j].clone()]);
                    for n in 0..=C4_N_MAX {
                        count += 1;
                        let v = integrate(&phi, &src, &x, &y, n).unwrap();
                        if !within(&v, &exact, n) {
                            fails.push(format!("{} {rep:?} n={n}", e.name));
                        }
                    }
                }
            }
        }
    }
    s.add(4, "4:integrate", fails.is_empty(), format!("{count} requests, failing: {fails:?}"));

    let mut fails = Vec::new();
    let mut count = 0;
    for e in continuous_entries() {
        let phi = name_for(RepKind::Xc, &e.f, C4_N_MAX).unwrap();
        for x in &ends {
            let xn = make_xr_name(x);
            let exact = e.f.eval(std::slice::from_ref(x));
            for n in 0..=C4_N_MAX {
                count += 1;
                if !within(&evaluate(&phi, &xn, n).unwrap(), &exact, n) {
                    fails.push(format!("{} x={x} n={n}", e.name));
                }
            }
        }
    }
    s.add(4, "4:evaluate", fails.is_empty(), format!("{count} requests, failing: {fails:?}"));

    let pts = dyadic_points();
    let mut fails = Vec::new();
    let mut count = 0;
    for e in continuous_entries() {
        for p in [1u32, 2] {
            let phi = name_for(RepKind::Xmp { m: 1, p }, &e.f, C4_N_MAX).unwrap();
            let c = sobolev_to_continuous(&phi).unwrap();
            for x in &pts {
                let exact = e.f.eval(std::slice::from_ref(x));
                for n in 0..=C4_N_MAX {
                    count += 1;
                    let v = c.ask_value(&Query::Point { x: vec![dy(x)], n }).unwrap();
                    if !within(&v, &exact, n) {
                        fails.push(format!("{} p={p} x={x} n={n}", e.name));
                    }
                }
            }
        }
    }
    s.add(4, "4:sobolev_to_continuous", fails.is_empty(), format!("{count} requests, failing: {fails:?}"));

    let mut fails = Vec::new();
    let mut count = 0;
    for e in continuous_entries() {
        let second = derivative(&e.f, 2).is_ok() && e.name != "hat";
        for p in [1u32, 2] {
            let orders: &[(u32, u32)] = if second { &[(1, 1), (2, 1), (2, 2)] } else { &[(1, 1)] };
            for &(m, k) in orders {
                let phi = name_for(RepKind::Xmp { m, p }, &e.f, C4_N_MAX).unwrap();
                let g = differentiate(&phi, m, p, k).unwrap();
                let fk = derivative(&e.f, k).unwrap();
                for i in 0..pts.len() {
                    for j in i + 1..pts.len() {
                        let b = DyBox::interval(dy(&pts[i]), dy(&pts[j])).unwrap();
                        let exact = fk.integral_box(&[pts[i].clone()], &[pts[j].clone()]);
                        for n in 0..=C4_N_MAX {
                            count += 1;
                            let v = g.ask_value(&Query::Integral { b: b.clone(), n }).unwrap();
                            if !within(&v, &exact, n) {
                                fails.push(format!("{} m={m} k={k} p={p} n={n}", e.name));
                            }
                        }
                    }
                }
            }
        }
    }
    s.add(4, "4:differentiate", fails.is_empty(), format!("{count} requests, failing: {fails:?}"));

    let dom = DyBox::unit(1);
    for p in [1u32, 2] {
        let mut bad = Vec::new();
        let mut infeasible = Vec::new();
        let mut count = 0;
        for e in corpus::corpus() {
            let phi = name_for(RepKind::Xp { p, d: 1 }, &e.f, C4_N_MAX).unwrap();
            for n in 0..=C4_CAUCHY_N_MAX {
                count += 1;
                match xp_to_cauchy(&phi, p, &dom, n, C4_BUDGET) {
                    Ok(st) => {
                        if !step_within(&e.f, &st, p, n).unwrap() {
                            bad.push(format!("{} n={n}", e.name));
                        }
                    }
                    Err(Error::Budget { .. }) => infeasible.push(format!("{} n={n}", e.name)),
                    Err(other) => bad.push(format!("{} n={n}: {other}", e.name)),
                }
            }
        }
        s.add(4, format!("4:xp_to_cauchy p={p} accuracy"), bad.is_empty(), format!("{count} requests, failing: {bad:?}"));
        let first = infeasible.first().cloned();
        s.add(
            4,
            format!("4:xp_to_cauchy p={p} within budget"),
            infeasible.is_empty(),
            format!("{} of {count} over {C4_BUDGET} queries, first {first:?}", infeasible.len()),
        );
    }

    let mut fails = Vec::new();
    let mut count = 0;
    for e in corpus::corpus() {
        for p in [1u32, 2] {
            count += 1;
            let phi = name_for(RepKind::Cauchy { p, d: 1 }, &e.f, C4_CAUCHY_VALIDATE_N).unwrap();
            let out = cauchy_to_xp(&phi, p, &dom, CAUCHY_LENGTH_CAP).unwrap();
            let r = validate_name(RepKind::Xp { p, d: 1 }, &out, &e.f, C4_CAUCHY_VALIDATE_N, Grid::default()).unwrap();
            if !r.valid {
                fails.push(format!("{} p={p}: {:?}", e.name, r.reason));
            }
        }
    }
    s.add(4, "4:cauchy_to_xp names validate", fails.is_empty(), format!("{count} names, failing: {fails:?}"));
}

// ------------------------------------------------------------------ 5

fn norm_within(v: &Dyadic, exact_pow: &Q, p: u32, n: usize) -> bool {
    let eps = pow2q(-(n as i64));
    let pow = |x: &Q| (0..p).fold(Q::one(), |acc, _| acc * x);
    let v = v.to_rational();
    let lo = &v - &eps;
    (lo.is_negative() || pow(&lo) < *exact_pow) && *exact_pow < pow(&(&v + &eps))
}

fn criterion5(s: &mut Suite) {
    let mut ran = 0;
    let mut witness_ok = true;
    let mut largest = 0u64;
    let mut skipped: [Vec<String>; 2] = Default::default();
    for e in corpus::corpus() {
        for p in [1u32, 2] {
            let phi = name_for(RepKind::Xpd { p, d: 1 }, &e.f, C2_N_MAX).unwrap();
            let a = min_radius_exponent(&e.f.bbox());
            let exact = e.f.lp_pow_exact(p).unwrap();
            let mut bad = Vec::new();
            for n in 0..=C5_N_MAX {
                let plan = norm_plan(&phi, 1, a, n);
                if plan.queries > C5_QUERY_CAP {
                    skipped[p as usize - 1].push(format!("{} from n={n} (M = {})", e.name, plan.big_m));
                    break;
                }
                let t = Trace::new();
                let v = norm_xpd(&phi.traced(&t), p, a, n, C5_QUERY_CAP).unwrap();
                ran += 1;
                largest = largest.max(t.queries());
                witness_ok &= plan.big_m < 64 && t.queries() >= 1u64 << plan.big_m;
                if !norm_within(&v, &exact, p, n) {
                    bad.push(n);
                }
            }
            s.add(5, format!("5:norm {} p={p} accuracy", e.name), bad.is_empty(), format!("failing n: {bad:?}"));
        }
    }
    for p in [1usize, 2] {
        let list = &skipped[p - 1];
        s.add(
            5,
            format!("5:norm p={p} within cap"),
            list.is_empty(),
            format!("{} functions stop below n = {C5_N_MAX} at {C5_QUERY_CAP} queries: {list:?}", list.len()),
        );
    }
    s.add(5, "5:exponential witness", witness_ok, format!("{ran} runs, queries >= 2^M, largest {largest}"));

    let f = corpus::hat();
    let phi = name_for(RepKind::Xs { d: 1 }, &f, C5_INTEGRATE_N_MAX).unwrap();
    let mut worst = 0;
    let mut ok = true;
    for n in 0..=C5_INTEGRATE_N_MAX {
        let t = Trace::new();
        let x = [make_xr_name(&q(1, 3)).traced(&t)];
        let y = [make_xr_name(&q(2, 3)).traced(&t)];
        integrate(&phi.traced(&t), &Source::Singular, &x, &y, n).unwrap();
        let len = |k: u64| phi.declared_length(k as usize) as u64;
        let r = check_query_bound(&t, &Sop::constant(C5_INTEGRATE_QUERIES), &len, n as u64);
        worst = worst.max(r.queries);
        ok &= r.queries <= r.bound;
    }
    s.add(5, "5:integrate query count", ok, format!("at most {worst} queries per request for n <= {C5_INTEGRATE_N_MAX}"));
}

// ------------------------------------------------------------------ 6

fn criterion6(s: &mut Suite) {
    let r = discontinuity_demo(C6_M_MAX).unwrap();
    s.add(6, "6:zero baseline", r.zero_baseline_valid, "zero-function name validates");
    let agree = r.rows.iter().all(|row| row.agree);
    let strings: u64 = r.rows.iter().map(|row| row.strings_checked).sum();
    let grid: u64 = r.rows.iter().map(|row| row.grid_checked).sum();
    s.add(6, "6:short queries agree", agree, format!("{strings} strings and {grid} grid queries for m <= {C6_M_MAX}"));
    let norms = r.rows.iter().all(|row| row.norm1 == "1");
    let direct = (1..=C6_M_MAX).all(|m| corpus::oscillator(m).lp_pow_exact(1).unwrap() == Q::one());
    s.add(6, "6:unit norm", norms && direct, "||f_m||_1 = 1 exactly");
    s.add(6, "6:oscillator names valid", r.rows.iter().all(|row| row.name_valid), "each phi_m validates");
}

// ------------------------------------------------------------------ 7

/// No two words closer than `M`: pairwise when small, else by scanning the
/// Hamming ball of radius `M - 1` around every word.
fn code_is_separated(c: &CodeSet) -> bool {
    let k = c.words.len() as u64;
    if k * k / 2 <= 1 << 24 {
        return c.words.iter().enumerate().all(|(i, a)| {
            c.words[i + 1..].iter().all(|b| (a ^ b).count_ones() as usize >= c.m)
        });
    }
    let mut member = vec![false; 1 << c.n];
    for &w in &c.words {
        if member[w as usize] {
            return false;
        }
        member[w as usize] = true;
    }
    let mut patterns = Vec::new();
    for e in 1u32..(1 << c.n) {
        if (e.count_ones() as usize) < c.m {
            patterns.push(e);
        }
    }
    c.words.iter().all(|&w| patterns.iter().all(|&e| !member[(w ^ e) as usize]))
}

fn criterion7(s: &mut Suite) {
    let mut count_ok = true;
    let mut details = Vec::new();
    let mut spread = Vec::new();
    for (n, c, ln) in [(1usize, 0u32, 1usize), (2, 0, 2), (2, 1, 2)] {
        let l = Modulus::affine(ModKind::Continuity, 1, (ln as i64) - (n as i64));
        let net = aa_cover(&l, c, n, C7_BUDGET).unwrap();
        let formula = (BigUint::one() << (n + c as usize + 1)) + BigUint::one();
        let formula = formula * BigUint::from(3u32).pow(1 << ln);
        let bound = BigUint::one() << ((1usize << (ln + 1)) + n + c as usize + 2);
        let size = BigUint::from(net.len());
        count_ok &= size == formula && size == aa_cover_count(ln, c, n) && size <= bound;
        count_ok &= aa_cover_bound_exp(ln, c, n) == BigUint::from((1usize << (ln + 1)) + n + c as usize + 2);
        details.push(format!("({n},{c},{ln}): {size}"));
        let fam = aa_spanning(&l, c, n, C7_BUDGET).unwrap();
        let fs: Vec<Func> = fam.iter().map(|m| m.f.clone()).collect();
        let least = min_pairwise_sup(&fs).unwrap().unwrap();
        let ok = least >= pow2q(-(n as i64) - 1) && BigUint::from(fam.len()) == aa_spanning_count(ln, c, n);
        spread.push((format!("({n},{c},{ln}): {} members, least {least}", fam.len()), ok));
    }
    s.add(7, "7:aa_cover size", count_ok, format!("sizes {details:?}"));
    s.add(
        7,
        "7:aa_spanning separation",
        spread.iter().all(|x| x.1),
        format!("{:?}", spread.iter().map(|x| &x.0).collect::<Vec<_>>()),
    );

    let mut codes = 0;
    let mut ok = true;
    let mut biggest = 0;
    for n in 1..=C7_CODE_N_MAX {
        for m in 1..=C7_CODE_M_MAX.min(n) {
            let c = greedy_code(n, m).unwrap();
            codes += 1;
            biggest = biggest.max(c.words.len());
            ok &= c.words.first() == Some(&0) && code_is_separated(&c);
        }
    }
    s.add(7, "7:greedy_code", ok, format!("{codes} codes verified, largest {biggest} words"));

    let l = Modulus::affine(ModKind::Lp { p: 1 }, 1, 2);
    let mut ok = true;
    let mut det = Vec::new();
    for n in [3usize, 4] {
        let fam = fk_spanning(&l, 1, n, C7_BUDGET).unwrap();
        let (pairs, equal, least) = fam.check_pairs().unwrap();
        let least = least.unwrap_or_else(Q::zero);
        let member = fam.membership(&l, C2_N_MAX).unwrap();
        ok &= equal && least >= pow2q(-(n as i64)) && member.valid;
        det.push(format!("n={n}: {} members, {pairs} pairs, least {least}, members valid {}", fam.members.len(), member.valid));
    }
    s.add(7, "7:fk_spanning", ok, det.join("; "));

    let mut rows = 0;
    let mut ok = true;
    let classes = [
        CompactClass::Aa { l: Modulus::affine(ModKind::Continuity, 1, 0), c: 0 },
        CompactClass::Aa { l: Modulus::affine(ModKind::Continuity, 1, 0), c: 1 },
        CompactClass::Fk { l: Modulus::affine(ModKind::Lp { p: 1 }, 1, 2), p: 1 },
        CompactClass::Lipschitz { big_l: 0 },
    ];
    for class in &classes {
        let range = match class {
            CompactClass::Aa { .. } => 2..=4,
            CompactClass::Fk { .. } => 3..=4,
            CompactClass::Lipschitz { .. } => 1..=3,
        };
        for r in entropy_table(class, range).unwrap() {
            rows += 1;
            ok &= r.sandwich;
        }
    }
    s.add(7, "7:entropy sandwich", ok, format!("{rows} rows"));
}

// ------------------------------------------------------------------ 8

fn criterion8(s: &mut Suite) {
    let net = LipschitzNet { big_l: 0 };
    let fs = lipschitz_samples(0, 2 * C8_PAIRS, C8_SEED);
    let tol = pow2q(-(C8_N as i64));
    let mut close = 0;
    let mut bounded = 0;
    let mut worst = Q::zero();
    let mut most = 0;
    for pair in fs.chunks(2) {
        let (a, b) = (net.name(&pair[0]), net.name(&pair[1]));
        let r = cauchy_rep_metric(&net, &a, &b, C8_N).unwrap();
        let err = (r.value.to_rational() - pl_sup_dist(&pair[0], &pair[1]).unwrap()).abs();
        if err < tol {
            close += 1;
        }
        worst = worst.max(err);
        most = most.max(r.queries);
        if r.bound.holds {
            bounded += 1;
        }
    }
    s.add(8, "8:metric accuracy", close == C8_PAIRS, format!("{close}/{C8_PAIRS} within 2^-{C8_N}, worst error {worst}"));
    s.add(8, "8:exponential bound", bounded == C8_PAIRS, format!("{bounded}/{C8_PAIRS} inside bound, at most {most} queries"));
}

#[test]
fn acceptance() {
    let mut suite = Suite::default();
    let runs: [fn(&mut Suite); 8] =
        [criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8];
    for (i, run) in runs.iter().enumerate() {
        let k = i + 1;
        let t = Instant::now();
        run(&mut suite);
        let took = t.elapsed();
        suite.add(k, format!("{k}:runtime"), took < RUNTIME[i], format!("{:.1}s of {}s", took.as_secs_f64(), RUNTIME[i].as_secs()));
        let fails = suite.failing(k);
        if fails.is_empty() {
            println!("PASS criterion {k}: {} checks in {:.1}s", suite.checks.iter().filter(|c| c.criterion == k).count(), took.as_secs_f64());
        } else {
            let labels: Vec<&str> = fails.iter().map(|c| c.label.as_str()).collect();
            println!("FAIL criterion {k}: {}", labels.join(", "));
        }
        for c in suite.checks.iter().filter(|c| c.criterion == k) {
            println!("    [{}] {}: {}", if c.ok { "ok" } else { "FAIL" }, c.label, c.detail);
        }
    }
    let observed: BTreeSet<&str> = suite.checks.iter().filter(|c| !c.ok).map(|c| c.label.as_str()).collect();
    let expected: BTreeSet<&str> = EXPECTED_FAILURES.iter().copied().collect();
    assert_eq!(observed, expected, "failing checks differ from the documented set");
}
