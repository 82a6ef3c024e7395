//! Constructors and validators for names of reals, continuous functions,
//! integrable and Sobolev functions, and Cauchy names.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::{DyBox, Dyadic};
use crate::error::{Error, Result};
use crate::moduli::{clb, validate_modulus, Affine, ModKind, Modulus, ModulusReport, Witness};
use crate::name::{check_name_on, len_fn, Answer, AnswerKind, LenFn, Name, Query, QueryShape};
use crate::step::StepFunction;
use crate::symbolic::{format_rational, pow2q, qi, Func, Q};

/// Highest precision at which constructors validate their modulus.
pub const CHECK_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rep", rename_all = "snake_case")]
pub enum RepKind {
    Xr,
    Xc,
    Xs { d: usize },
    Xp { p: u32, d: usize },
    Xmp { m: u32, p: u32 },
    Xpd { p: u32, d: usize },
    Cauchy { p: u32, d: usize },
}

impl RepKind {
    pub fn check(&self) -> Result<()> {
        let dim_ok = |d: usize| (1..=2).contains(&d);
        let ok = match *self {
            RepKind::Xr | RepKind::Xc => true,
            RepKind::Xs { d } => dim_ok(d),
            RepKind::Xp { p, d } | RepKind::Xpd { p, d } | RepKind::Cauchy { p, d } => p >= 1 && dim_ok(d),
            RepKind::Xmp { p, .. } => p >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("unsupported parameters {self:?}")))
        }
    }

    pub fn shape(&self) -> QueryShape {
        match self {
            RepKind::Xr => QueryShape::Real,
            RepKind::Xc => QueryShape::Point,
            RepKind::Xs { .. } | RepKind::Xp { .. } | RepKind::Xmp { .. } => QueryShape::Integral,
            RepKind::Xpd { .. } => QueryShape::Mollified,
            RepKind::Cauchy { .. } => QueryShape::Index,
        }
    }

    /// Kind of modulus the declared length must be.
    pub fn modulus_kind(&self) -> Option<ModKind> {
        match *self {
            RepKind::Xr | RepKind::Cauchy { .. } => None,
            RepKind::Xc => Some(ModKind::Continuity),
            RepKind::Xs { .. } => Some(ModKind::Singularity),
            RepKind::Xp { p, .. } | RepKind::Xmp { p, .. } | RepKind::Xpd { p, .. } => Some(ModKind::Lp { p }),
        }
    }
}

/// Bound on `sup |f|` from coefficient magnitudes.
pub fn sup_bound(f: &Func) -> Q {
    let mut best = Q::zero();
    for (lo, hi, p) in f.pw().cells() {
        let r: Vec<Q> = lo.iter().zip(&hi).map(|(a, b)| a.abs().max(b.abs())).collect();
        let mut s = Q::zero();
        for (e, c) in p.terms() {
            let mut t = c.abs();
            for (x, &k) in r.iter().zip(e) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            s += t;
        }
        if s > best {
            best = s;
        }
    }
    if f.dim() == 1 {
        let enc = f.sup_abs(&pow2q(-8));
        if enc.hi < best {
            best = enc.hi;
        }
    }
    best
}

/// Bound on `||f||_1`.
pub fn l1_bound(f: &Func) -> Q {
    sup_bound(f) * f.lambda()
}

/// Smallest `b >= 0` with `x + 1 <= 2^b`.
pub fn int_bits(x: &Q) -> usize {
    clb(&(x + qi(1))).max(0) as usize
}

/// `L -> max(mu(L), L + extra)`.
pub fn fit_len(mu: &Modulus, extra: usize) -> LenFn {
    let mu = mu.repair();
    len_fn(move |l| mu.at(l).max(l + extra))
}

/// Nearest point of `2^{-n-1} Z`, error at most `2^{-n-2}`.
pub fn round_answer(r: &Q, n: usize) -> Dyadic {
    Dyadic::round_rational(r, (n + 1) as u32)
}

fn dy_q(x: &[Dyadic]) -> Vec<Q> {
    x.iter().map(Dyadic::to_rational).collect()
}

fn require_valid(mu: &Modulus, f: &Func, what: &str) -> Result<()> {
    let r = validate_modulus(mu, f, CHECK_N, 2)?;
    if r.valid {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what}: {}", r.reason.unwrap_or_default())))
    }
}

/// `xi_R` name of an exact rational.
pub fn make_xr_name(x: &Q) -> Name {
    let x = x.clone();
    let ib = int_bits(&x.abs());
    Name::semantic(
        QueryShape::Real,
        1,
        AnswerKind::Value,
        len_fn(move |l| 2 * l + 2 * ib + 3),
        Arc::new(move |q| Ok(Answer::Value(round_answer(&x, q.precision())))),
    )
    .with_tag("xr")
}

pub type Scheme = Arc<dyn Fn(usize) -> Dyadic + Send + Sync>;

/// `xi_R` name from approximations `|a_n - x| < 2^{-n}` with `|x| <= bound`.
pub fn make_xr_name_scheme(bound: &Q, scheme: Scheme) -> Name {
    let ib = int_bits(&(bound + qi(1)));
    Name::semantic(
        QueryShape::Real,
        1,
        AnswerKind::Value,
        len_fn(move |l| 2 * l + 2 * ib + 3),
        Arc::new(move |q| {
            let n = q.precision();
            Ok(Answer::Value(round_answer(&scheme(n + 1).to_rational(), n)))
        }),
    )
    .with_tag("xr")
}

/// `xi_C` name on the bounding interval of `f`'s domain.
pub fn make_xc_name(f: &Func, mu: &Modulus) -> Result<Name> {
    if mu.kind != ModKind::Continuity || f.dim() != 1 {
        return Err(Error::Precondition("xc names need a one-dimensional continuity modulus".into()));
    }
    require_valid(mu, f, "modulus of continuity")?;
    Ok(make_xc_name_unchecked(f, mu))
}

pub fn make_xc_name_unchecked(f: &Func, mu: &Modulus) -> Name {
    let ib = int_bits(&sup_bound(f));
    let (lo, hi) = f.bbox();
    let f = f.clone();
    Name::semantic(
        QueryShape::Point,
        1,
        AnswerKind::Value,
        fit_len(mu, 2 * ib),
        Arc::new(move |q| match q {
            Query::Point { x, n } => {
                let x = x[0].to_rational().max(lo[0].clone()).min(hi[0].clone());
                Ok(Answer::Value(round_answer(&f.eval(&[x]), *n)))
            }
            _ => Err(Error::Invariant("point query expected".into())),
        }),
    )
    .with_tag("xc")
}

fn integral_name(f: &Func, mu: &Modulus, tag: &str) -> Name {
    let ib = int_bits(&l1_bound(f));
    let f = f.clone();
    Name::semantic(
        QueryShape::Integral,
        f.dim(),
        AnswerKind::Value,
        fit_len(mu, 2 * ib),
        Arc::new(move |q| match q {
            Query::Integral { b, n } => {
                let v = f.integral_box(&dy_q(&b.lower), &dy_q(&b.upper));
                Ok(Answer::Value(round_answer(&v, *n)))
            }
            _ => Err(Error::Invariant("integral query expected".into())),
        }),
    )
    .with_tag(tag)
}

pub fn make_xs_name(f: &Func, mu: &Modulus) -> Result<Name> {
    if mu.kind != ModKind::Singularity {
        return Err(Error::Precondition("xs names need a singularity modulus".into()));
    }
    require_valid(mu, f, "singularity modulus")?;
    Ok(integral_name(f, mu, "xs"))
}

pub fn make_xs_name_unchecked(f: &Func, mu: &Modulus) -> Name {
    integral_name(f, mu, "xs")
}

pub fn make_xp_name(f: &Func, mu: &Modulus, p: u32) -> Result<Name> {
    if mu.kind != (ModKind::Lp { p }) {
        return Err(Error::Precondition("xp names need an Lp-modulus with matching p".into()));
    }
    require_valid(mu, f, "Lp-modulus")?;
    Ok(integral_name(f, mu, "xp"))
}

pub fn make_xp_name_unchecked(f: &Func, mu: &Modulus) -> Name {
    integral_name(f, mu, "xp")
}

/// `k`-th weak derivative.
pub fn derivative(f: &Func, k: u32) -> Result<Func> {
    let mut g = f.clone();
    for _ in 0..k {
        g = g.weak_derivative()?;
    }
    Ok(g)
}

/// `xi_{m,p}` name: integrals of `f`, length an Lp-modulus of `f^{(m)}`.
pub fn make_xmp_name(f: &Func, mu: &Modulus, m: u32, p: u32) -> Result<Name> {
    if f.dim() != 1 || mu.kind != (ModKind::Lp { p }) {
        return Err(Error::Precondition("xmp names are one-dimensional with an Lp-modulus".into()));
    }
    let dm = derivative(f, m)?;
    require_valid(mu, &dm, "Lp-modulus of the highest derivative")?;
    Ok(make_xmp_name_unchecked(f, mu, m))
}

pub fn make_xmp_name_unchecked(f: &Func, mu: &Modulus, m: u32) -> Name {
    let tag = if m == 0 { "xp".to_string() } else { format!("x{m}p") };
    integral_name(f, mu, &tag)
}

/// `xi_p^D` name answering `<a, 1^k, 1^n>` with `f^D_k(a)`.
pub fn make_xpd_name(f: &Func, mu: &Modulus, p: u32) -> Result<Name> {
    if f.dim() != 1 {
        return Err(Error::Unsupported("xpd names are implemented in one dimension".into()));
    }
    if mu.kind != (ModKind::Lp { p }) {
        return Err(Error::Precondition("xpd names need an Lp-modulus".into()));
    }
    require_valid(mu, f, "Lp-modulus")?;
    Ok(make_xpd_name_unchecked(f, mu))
}

pub fn make_xpd_name_unchecked(f: &Func, mu: &Modulus) -> Name {
    let ib = int_bits(&sup_bound(f));
    let f = f.clone();
    let cache: Arc<Mutex<HashMap<usize, Arc<Func>>>> = Arc::default();
    Name::semantic(
        QueryShape::Mollified,
        1,
        AnswerKind::Value,
        fit_len(mu, 2 * ib),
        Arc::new(move |q| match q {
            Query::Mollified { x, k, n } => {
                let g = mollified_cached(&f, &cache, *k)?;
                Ok(Answer::Value(round_answer(&g.eval(&dy_q(x)), *n)))
            }
            _ => Err(Error::Invariant("mollified query expected".into())),
        }),
    )
    .with_tag("xpd")
}

fn mollified_cached(f: &Func, cache: &Mutex<HashMap<usize, Arc<Func>>>, k: usize) -> Result<Arc<Func>> {
    if let Some(g) = cache.lock().unwrap().get(&k) {
        return Ok(g.clone());
    }
    let g = Arc::new(f.mollified(k as u32)?);
    cache.lock().unwrap().insert(k, g.clone());
    Ok(g)
}

pub type Approximants = Arc<dyn Fn(usize) -> Result<StepFunction> + Send + Sync>;

/// Exact `||f - s||_p^p < 2^{-np}`.
pub fn step_within(f: &Func, s: &StepFunction, p: u32, n: usize) -> Result<bool> {
    let diff = f.pw().sub(&s.to_pw()?);
    diff.lp_pow_lt(p, &pow2q(-(n as i64) * p as i64))
}

/// Cauchy name listing `approx(n)`; each approximant is checked up to `check_n`.
pub fn make_cauchy_name(f: &Func, p: u32, approx: Approximants, check_n: usize) -> Result<Name> {
    for n in 0..=check_n {
        if !step_within(f, &approx(n)?, p, n)? {
            return Err(Error::Precondition(format!("approximant {n} is not within 2^-{n}")));
        }
    }
    Ok(make_cauchy_name_unchecked(f.dim(), approx))
}

pub fn make_cauchy_name_unchecked(d: usize, approx: Approximants) -> Name {
    let answers: Arc<Mutex<HashMap<usize, StepFunction>>> = Arc::default();
    let lens: Arc<Mutex<Vec<usize>>> = Arc::default();
    let get = {
        let answers = answers.clone();
        let approx = approx.clone();
        move |n: usize| -> Result<StepFunction> {
            if let Some(s) = answers.lock().unwrap().get(&n) {
                return Ok(s.clone());
            }
            let s = approx(n)?;
            answers.lock().unwrap().insert(n, s.clone());
            Ok(s)
        }
    };
    let get = Arc::new(get);
    let g2 = get.clone();
    let length = len_fn(move |l| {
        let mut t = lens.lock().unwrap();
        while t.len() <= l {
            let n = t.len();
            let here = g2(n).map(|s| s.encode().len()).unwrap_or(0);
            let prev = t.last().copied().unwrap_or(0);
            t.push(here.max(prev));
        }
        t[l]
    });
    Name::semantic(
        QueryShape::Index,
        d,
        AnswerKind::Step(d),
        length,
        Arc::new(move |q| Ok(Answer::Step(get(q.precision())?))),
    )
    .with_tag("cauchy")
}

/// Cell averages of `f` on `2^k` equal cells per axis of its bounding box,
/// rounded to `bits` fractional bits.
pub fn staircase(f: &Func, k: u32, bits: u32) -> Result<StepFunction> {
    let d = f.dim();
    let (lo, hi) = f.bbox();
    let cells = 1usize << k;
    let side: Vec<Q> = (0..d).map(|i| (&hi[i] - &lo[i]) * pow2q(-(k as i64))).collect();
    let mut entries = Vec::new();
    let total = cells.pow(d as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut a = Vec::with_capacity(d);
        let mut b = Vec::with_capacity(d);
        for i in 0..d {
            let j = rem % cells;
            rem /= cells;
            let x = &lo[i] + &side[i] * qi(j as i64);
            b.push(&x + &side[i]);
            a.push(x);
        }
        let vol = side.iter().fold(qi(1), |v, s| v * s);
        let avg = f.integral_box(&a, &b) / vol;
        let v = Dyadic::round_rational(&avg, bits);
        if v.is_zero() {
            continue;
        }
        let to_d = |v: &[Q]| -> Result<Vec<Dyadic>> {
            v.iter().map(|x| Dyadic::from_rational(x).ok_or_else(|| Error::Unsupported("non-dyadic cell".into()))).collect()
        };
        entries.push((DyBox::new(to_d(&a)?, to_d(&b)?)?, v));
    }
    Ok(StepFunction { d, entries }.simplify())
}

/// Approximants `n -> staircase` with the fewest cells meeting `2^{-n}` in Lp.
pub fn staircase_scheme(f: &Func, p: u32) -> Approximants {
    let f = f.clone();
    let last_k: Arc<Mutex<u32>> = Arc::default();
    Arc::new(move |n| {
        let mut k = *last_k.lock().unwrap();
        loop {
            let s = staircase(&f, k, n as u32 + 4)?;
            if step_within(&f, &s, p, n)? {
                let mut g = last_k.lock().unwrap();
                *g = (*g).max(k.saturating_sub(1)).min(k);
                return Ok(s);
            }
            k += 1;
            if k > 24 {
                return Err(Error::Budget { used: 1 << 24, budget: 1 << 24 });
            }
        }
    })
}

/// Name of `f` in `rep` with the least grid-validated modulus up to `n_max`.
pub fn name_for(rep: RepKind, f: &Func, n_max: usize) -> Result<Name> {
    rep.check()?;
    let least = |kind: ModKind, g: &Func| crate::moduli::least_modulus(kind, g, n_max, 2);
    match rep {
        RepKind::Xr => Err(Error::Precondition("xr names are built from reals".into())),
        RepKind::Xc => Ok(make_xc_name_unchecked(f, &least(ModKind::Continuity, f)?)),
        RepKind::Xs { .. } => Ok(make_xs_name_unchecked(f, &least(ModKind::Singularity, f)?)),
        RepKind::Xp { p, .. } => Ok(make_xp_name_unchecked(f, &least(ModKind::Lp { p }, f)?)),
        RepKind::Xpd { p, .. } => Ok(make_xpd_name_unchecked(f, &least(ModKind::Lp { p }, f)?)),
        RepKind::Xmp { m, p } => {
            let dm = derivative(f, m)?;
            Ok(make_xmp_name_unchecked(f, &least(ModKind::Lp { p }, &dm)?, m))
        }
        RepKind::Cauchy { p, .. } => make_cauchy_name(f, p, staircase_scheme(f, p), n_max.min(4)),
    }
}

/// Declared length tabulated as a modulus up to `n_max + 1`.
pub fn length_as_modulus(name: &Name, kind: ModKind, n_max: usize) -> Modulus {
    let table: Vec<usize> = (0..=n_max + 1).map(|n| name.declared_length(n)).collect();
    let last = *table.last().unwrap();
    Modulus::new(kind, table, Affine { a: 1, b: last as i64 - (n_max as i64 + 1) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NameReport {
    pub valid: bool,
    pub checks: u64,
    pub length: Option<ModulusReport>,
    pub worst: Option<Witness>,
    pub reason: Option<String>,
}

/// Validation grids.
#[derive(Clone, Copy, Debug)]
pub struct Grid {
    /// Shift-grid refinement for the modulus check.
    pub g: u32,
    /// Query points are multiples of `2^{-q}`.
    pub q: u32,
    /// Largest `k` for mollified queries.
    pub k_max: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { g: 2, q: 3, k_max: 4 }
    }
}

struct Acc {
    checks: u64,
    worst: Option<Witness>,
    reason: Option<String>,
}

impl Acc {
    fn see(&mut self, n: usize, at: Vec<String>, err: Q) {
        self.checks += 1;
        let bound = pow2q(-(n as i64));
        let ratio = num_traits::ToPrimitive::to_f64(&(&err / &bound)).unwrap_or(f64::INFINITY);
        if err >= bound && self.reason.is_none() {
            self.reason = Some(format!("answer off by {} at n = {n}", format_rational(&err)));
        }
        if self.worst.as_ref().map_or(true, |w| ratio > w.ratio) {
            self.worst = Some(Witness { n, at, value: format_rational(&err), ratio });
        }
    }
}

fn grid_points(lo: &Q, hi: &Q, q: u32, pad: bool) -> Vec<Q> {
    let step = pow2q(-(q as i64));
    let margin = if pad { pow2q(-2) } else { Q::zero() };
    let start = lo - &margin;
    let end = hi + &margin;
    let mut out = Vec::new();
    let mut x = start;
    while x <= end {
        out.push(x.clone());
        x += &step;
    }
    out
}

fn to_dy(x: &Q) -> Result<Dyadic> {
    Dyadic::from_rational(x).ok_or_else(|| Error::Unsupported("non-dyadic grid point".into()))
}

fn bit_check(name: &Name, q: &Query, acc: &mut Acc) -> Result<()> {
    let a = q.encode();
    check_name_on(name, &a)?;
    let bits = name.untraced().query(&a)?;
    let via_bits = name.kind().decode(&bits)?;
    let direct = name.untraced().ask(q)?;
    if via_bits != direct {
        acc.reason.get_or_insert_with(|| "bit and semantic answers differ".into());
    }
    Ok(())
}

/// Checks a name against the exact function: answer contracts on the query
/// grid for `n <= n_max` and the declared length as a modulus.
pub fn validate_name(rep: RepKind, name: &Name, f: &Func, n_max: usize, grid: Grid) -> Result<NameReport> {
    match validate_inner(rep, name, f, n_max, grid) {
        Err(Error::Invariant(reason)) => {
            Ok(NameReport { valid: false, checks: 0, length: None, worst: None, reason: Some(reason) })
        }
        r => r,
    }
}

fn validate_inner(rep: RepKind, name: &Name, f: &Func, n_max: usize, grid: Grid) -> Result<NameReport> {
    rep.check()?;
    let nm = name.untraced();
    let mut acc = Acc { checks: 0, worst: None, reason: None };
    let (lo, hi) = f.bbox();
    match rep {
        RepKind::Xr => return Err(Error::Precondition("use validate_real_name".into())),
        RepKind::Xs { .. } | RepKind::Xp { .. } | RepKind::Xmp { .. } => {
            let pad = !matches!(rep, RepKind::Xmp { .. });
            let d = f.dim();
            let ns: Vec<usize> = if d == 1 { (0..=n_max).collect() } else { vec![0, n_max / 2, n_max] };
            let q = if d == 1 { grid.q } else { grid.q.min(2) };
            let axes: Vec<Vec<Q>> = (0..d).map(|i| grid_points(&lo[i], &hi[i], q, pad)).collect();
            let pairs: Vec<Vec<(Q, Q)>> = axes
                .iter()
                .map(|a| {
                    let mut v = Vec::new();
                    for i in 0..a.len() {
                        for j in i + 1..a.len() {
                            v.push((a[i].clone(), a[j].clone()));
                        }
                    }
                    v
                })
                .collect();
            let mut boxes: Vec<(Vec<Q>, Vec<Q>)> = vec![(Vec::new(), Vec::new())];
            for axis in &pairs {
                let mut next = Vec::new();
                for (l, u) in &boxes {
                    for (a, b) in axis {
                        let mut l2 = l.clone();
                        let mut u2 = u.clone();
                        l2.push(a.clone());
                        u2.push(b.clone());
                        next.push((l2, u2));
                    }
                }
                boxes = next;
            }
            for &n in &ns {
                for (i, (a, b)) in boxes.iter().enumerate() {
                    let bx = DyBox::new(a.iter().map(to_dy).collect::<Result<_>>()?, b.iter().map(to_dy).collect::<Result<_>>()?)?;
                    let q = Query::Integral { b: bx, n };
                    let ans = nm.ask_value(&q)?.to_rational();
                    let exact = f.integral_box(a, b);
                    let at = a.iter().chain(b).map(format_rational).collect();
                    acc.see(n, at, (ans - exact).abs());
                    if i % 97 == 0 {
                        bit_check(&nm, &q, &mut acc)?;
                    }
                }
            }
        }
        RepKind::Xc => {
            for n in 0..=n_max {
                for (i, x) in grid_points(&lo[0], &hi[0], grid.q + 1, false).iter().enumerate() {
                    let q = Query::Point { x: vec![to_dy(x)?], n };
                    let ans = nm.ask_value(&q)?.to_rational();
                    acc.see(n, vec![format_rational(x)], (ans - f.eval(std::slice::from_ref(x))).abs());
                    if i % 7 == 0 {
                        bit_check(&nm, &q, &mut acc)?;
                    }
                }
            }
        }
        RepKind::Xpd { .. } => {
            for k in 0..=grid.k_max {
                let g = f.mollified(k as u32)?;
                for n in 0..=n_max {
                    for x in grid_points(&lo[0], &hi[0], grid.q, true) {
                        let q = Query::Mollified { x: vec![to_dy(&x)?], k, n };
                        let ans = nm.ask_value(&q)?.to_rational();
                        acc.see(n, vec![format_rational(&x), k.to_string()], (ans - g.eval(&[x.clone()])).abs());
                    }
                }
            }
        }
        RepKind::Cauchy { p, d } => {
            for n in 0..=n_max {
                let s = match nm.ask(&Query::Index { n })? {
                    Answer::Step(s) => s,
                    _ => return Err(Error::Invariant("step answer expected".into())),
                };
                if s.d != d {
                    acc.reason.get_or_insert_with(|| "step dimension".into());
                }
                let diff = f.pw().sub(&s.to_pw()?);
                let e = diff.lp_pow(p, &pow2q(-40))?;
                let bound = pow2q(-(n as i64) * p as i64);
                acc.checks += 1;
                let ok = match e.lt(&bound) {
                    Some(b) => b,
                    None => diff.lp_pow_lt(p, &bound)?,
                };
                if !ok && acc.reason.is_none() {
                    acc.reason = Some(format!("approximant {n} too far"));
                }
                let ratio = num_traits::ToPrimitive::to_f64(&(&e.hi / &bound)).unwrap_or(f64::INFINITY);
                if acc.worst.as_ref().map_or(true, |w| ratio > w.ratio) {
                    acc.worst = Some(Witness { n, at: vec![], value: format_rational(&e.hi), ratio });
                }
                bit_check(&nm, &Query::Index { n }, &mut acc)?;
            }
        }
    }
    let length = match rep.modulus_kind() {
        Some(kind) => {
            let target = match rep {
                RepKind::Xmp { m, .. } => derivative(f, m)?,
                _ => f.clone(),
            };
            let r = validate_modulus(&length_as_modulus(&nm, kind, n_max), &target, n_max, grid.g)?;
            if !r.valid && acc.reason.is_none() {
                acc.reason = Some(format!("declared length is not a modulus: {}", r.reason.clone().unwrap_or_default()));
            }
            Some(r)
        }
        None => None,
    };
    Ok(NameReport { valid: acc.reason.is_none(), checks: acc.checks, length, worst: acc.worst, reason: acc.reason })
}

/// Checks `|answer(1^n) - x| < 2^{-n}` for `n <= n_max`.
pub fn validate_real_name(name: &Name, x: &Q, n_max: usize) -> Result<NameReport> {
    let nm = name.untraced();
    let mut acc = Acc { checks: 0, worst: None, reason: None };
    for n in 0..=n_max {
        let q = Query::Real { n };
        let ans = nm.ask_value(&q)?.to_rational();
        acc.see(n, vec![], (ans - x).abs());
        bit_check(&nm, &q, &mut acc)?;
    }
    Ok(NameReport { valid: acc.reason.is_none(), checks: acc.checks, length: None, worst: acc.worst, reason: acc.reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::{check_name_exhaustive, pair_names};
    use crate::symbolic::{corpus, q};

    #[test]
    fn reals() {
        let third = q(1, 3);
        let nm = make_xr_name(&third);
        assert!(validate_real_name(&nm, &third, 12).unwrap().valid);
        let scheme = make_xr_name_scheme(
            &qi(1),
            Arc::new(|n| Dyadic::round_rational(&(pow2q(n as i64) / qi(3)).round(), 0).shl(-(n as i64))),
        );
        assert!(validate_real_name(&scheme, &third, 12).unwrap().valid);
        let p = pair_names(&make_xr_name(&q(1, 3)), &make_xr_name(&q(2, 3)));
        let (a, b) = p.components().unwrap();
        assert!(validate_real_name(&a, &q(1, 3), 8).unwrap().valid);
        assert!(validate_real_name(&b, &q(2, 3), 8).unwrap().valid);
        check_name_exhaustive(&nm, 10).unwrap();
    }

    #[test]
    fn integral_names() {
        let chi = corpus::chi_half();
        let mu = Modulus::affine(ModKind::Lp { p: 1 }, 1, 2);
        let nm = make_xp_name(&chi, &mu, 1).unwrap();
        let b = DyBox::interval("1/4".parse().unwrap(), "3/4".parse().unwrap()).unwrap();
        let v = nm.ask_value(&Query::Integral { b, n: 6 }).unwrap().to_rational();
        assert!((v - q(1, 4)).abs() < pow2q(-6));
        let r = validate_name(RepKind::Xp { p: 1, d: 1 }, &nm, &chi, 6, Grid::default()).unwrap();
        assert!(r.valid, "{r:?}");
        check_name_exhaustive(&nm, 10).unwrap();
        assert!(make_xp_name(&chi, &Modulus::affine(ModKind::Lp { p: 1 }, 1, 1), 1).is_err());
        let short = nm.with_length(len_fn(|l| l.saturating_sub(40)));
        assert!(!validate_name(RepKind::Xp { p: 1, d: 1 }, &short, &chi, 6, Grid::default()).unwrap().valid);
    }

    #[test]
    fn off_by_exactly_two_to_minus_n_is_rejected() {
        let chi = corpus::chi_half();
        let mu = Modulus::affine(ModKind::Lp { p: 1 }, 1, 2);
        let good = make_xp_name(&chi, &mu, 1).unwrap();
        let g2 = good.clone();
        let bad = Name::semantic(
            QueryShape::Integral,
            1,
            AnswerKind::Value,
            good.length_fn(),
            Arc::new(move |q| {
                let v = g2.ask_value(q)?;
                let exact = match q {
                    Query::Integral { b, .. } => corpus::chi_half().integral_box(&dy_q(&b.lower), &dy_q(&b.upper)),
                    _ => unreachable!(),
                };
                let _ = v;
                Ok(Answer::Value(Dyadic::from_rational(&(exact + pow2q(-(q.precision() as i64)))).unwrap()))
            }),
        );
        let r = validate_name(RepKind::Xp { p: 1, d: 1 }, &bad, &chi, 4, Grid::default()).unwrap();
        assert!(!r.valid);
        assert_eq!(r.worst.unwrap().ratio, 1.0);
    }

    #[test]
    fn continuous_names() {
        let x = corpus::identity();
        let nm = make_xc_name(&x, &Modulus::affine(ModKind::Continuity, 1, 1)).unwrap();
        let v = nm.ask_value(&Query::Point { x: vec!["1/2".parse().unwrap()], n: 4 }).unwrap();
        assert_eq!(v.to_string(), "1/2");
        let hat = corpus::hat();
        let nm = make_xc_name(&hat, &Modulus::affine(ModKind::Continuity, 1, 2)).unwrap();
        assert!(validate_name(RepKind::Xc, &nm, &hat, 8, Grid::default()).unwrap().valid);
    }

    #[test]
    fn mollified_and_cauchy() {
        let one = corpus::constant(qi(1));
        let mu = Modulus::affine(ModKind::Lp { p: 1 }, 1, 2);
        let nm = make_xpd_name(&one, &mu, 1).unwrap();
        let v = nm.ask_value(&Query::Mollified { x: vec!["1/2".parse().unwrap()], k: 3, n: 5 }).unwrap();
        assert!((v.to_rational() - qi(1)).abs() < pow2q(-5));
        let chi = corpus::chi_half();
        let nm = make_xpd_name(&chi, &mu, 1).unwrap();
        let v = nm.ask_value(&Query::Mollified { x: vec!["1/4".parse().unwrap()], k: 4, n: 6 }).unwrap();
        assert!((v.to_rational() - qi(1)).abs() < pow2q(-6));
        let id = corpus::identity();
        let c = make_cauchy_name(&id, 2, staircase_scheme(&id, 2), 6).unwrap();
        let r = validate_name(RepKind::Cauchy { p: 2, d: 1 }, &c, &id, 6, Grid::default()).unwrap();
        assert!(r.valid, "{r:?}");
        check_name_exhaustive(&c, 6).unwrap();
    }
}
