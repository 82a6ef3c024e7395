//! Moduli of continuity, singularity moduli and Lp-moduli: representation,
//! exact grid validation and the conversions between them.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::ceil_log2_rational;
use crate::error::{Error, Result};
use crate::symbolic::{pow2q, qi, Func, Pw, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModKind {
    Continuity,
    Singularity,
    Lp { p: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    pub a: u64,
    pub b: i64,
}

impl Affine {
    pub fn at(&self, n: usize) -> usize {
        (self.a as i128 * n as i128 + self.b as i128).max(0) as usize
    }
}

/// Finite table followed by an affine tail `a*n + b` (clamped at 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modulus {
    #[serde(flatten)]
    pub kind: ModKind,
    pub table: Vec<usize>,
    pub tail: Affine,
}

impl Modulus {
    pub fn new(kind: ModKind, table: Vec<usize>, tail: Affine) -> Self {
        Modulus { kind, table, tail }
    }

    /// `n -> a*n + b`.
    pub fn affine(kind: ModKind, a: u64, b: i64) -> Self {
        Modulus { kind, table: Vec::new(), tail: Affine { a, b } }
    }

    pub fn zero(kind: ModKind) -> Self {
        Modulus::affine(kind, 0, 0)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("modulus: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("modulus serializes")
    }

    pub fn with_kind(&self, kind: ModKind) -> Self {
        Modulus { kind, ..self.clone() }
    }

    pub fn at(&self, n: usize) -> usize {
        self.table.get(n).copied().unwrap_or_else(|| self.tail.at(n))
    }

    pub fn at_i(&self, n: i64) -> usize {
        self.at(n.max(0) as usize)
    }

    /// `n -> mu(max(0, n + s))`.
    pub fn shift(&self, s: i64) -> Modulus {
        let len = (self.table.len() as i64 - s).max(if s < 0 { -s } else { 0 }) as usize;
        let table = (0..len).map(|n| self.at_i(n as i64 + s)).collect();
        let tail = Affine { a: self.tail.a, b: self.tail.b.saturating_add((self.tail.a as i64).saturating_mul(s)) };
        Modulus { kind: self.kind, table, tail }.compact()
    }

    /// Pointwise maximum.
    pub fn max(&self, o: &Modulus) -> Modulus {
        let (t1, t2) = (self.tail, o.tail);
        let mut len = self.table.len().max(o.table.len());
        let tail = if t1.a == t2.a {
            Affine { a: t1.a, b: t1.b.max(t2.b) }
        } else {
            let (hi, lo) = if t1.a > t2.a { (t1, t2) } else { (t2, t1) };
            let gap = lo.b - hi.b;
            let da = (hi.a - lo.a) as i64;
            if gap > 0 {
                len = len.max(((gap + da - 1) / da) as usize);
            }
            hi
        };
        let table = (0..len).map(|n| self.at(n).max(o.at(n))).collect();
        Modulus { kind: self.kind, table, tail }.compact()
    }

    /// Enforces `mu(n) != 0 => mu(n+1) > mu(n)`.
    pub fn repair(&self) -> Modulus {
        let mut t = self.tail;
        if t.a == 0 && t.b > 0 {
            t = Affine { a: 1, b: t.b - self.table.len() as i64 };
        }
        let grown = Modulus { kind: self.kind, table: self.table.clone(), tail: t };
        let mut table: Vec<usize> = Vec::new();
        let mut n = 0;
        loop {
            let raw = grown.at(n);
            let v = match table.last() {
                Some(&prev) if prev > 0 => raw.max(prev + 1),
                _ => raw,
            };
            let beyond = n >= grown.table.len();
            table.push(v);
            if beyond && v == raw && (t.a >= 1 || v == 0) {
                break;
            }
            if n > grown.table.len() + 1_000_000 {
                break;
            }
            n += 1;
        }
        let tail = if t.a == 0 && table.last() == Some(&0) { Affine { a: 0, b: 0 } } else { t };
        Modulus { kind: self.kind, table, tail }.compact()
    }

    /// Drops table entries that agree with the tail at the end.
    fn compact(mut self) -> Modulus {
        while let Some(&v) = self.table.last() {
            let n = self.table.len() - 1;
            if v == self.tail.at(n) && (self.tail.a as i128 * n as i128 + self.tail.b as i128) >= 0 {
                self.table.pop();
            } else {
                break;
            }
        }
        self
    }

    /// First `n < upto` violating the side condition.
    pub fn side_condition_violation(&self, upto: usize) -> Option<usize> {
        if self.kind == ModKind::Singularity {
            return None;
        }
        (0..upto).find(|&n| self.at(n) != 0 && self.at(n + 1) <= self.at(n))
    }
}

/// Violation or closest call found by [`validate_modulus`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    pub at: Vec<String>,
    /// Measured quantity (the `p`-th power for Lp-moduli).
    pub value: String,
    /// `value` relative to its bound; `>= 1` is a violation.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusReport {
    pub valid: bool,
    pub checks: u64,
    pub worst: Option<Witness>,
    pub reason: Option<String>,
}

fn qs(x: &Q) -> String {
    crate::symbolic::format_rational(x)
}

fn ratio(v: &Q, bound: &Q) -> f64 {
    (v / bound).to_f64().unwrap_or(f64::INFINITY)
}

fn consider(worst: &mut Option<Witness>, w: Witness) {
    if worst.as_ref().map_or(true, |o| w.ratio > o.ratio) {
        *worst = Some(w);
    }
}

/// Grid shifts `j 2^{-r}` per axis with `|h|_inf <= 2^{-m}`, `r = m + g`.
fn shift_grid(d: usize, m: usize, g: u32) -> Vec<Vec<Q>> {
    let step = pow2q(-((m as i64) + g as i64));
    let k = 1i64 << g;
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::new();
        for v in &out {
            for j in -k..=k {
                let mut w = v.clone();
                w.push(&step * qi(j));
                next.push(w);
            }
        }
        out = next;
    }
    out.retain(|h: &Vec<Q>| h.iter().any(|x| !x.is_zero()));
    out
}

#[allow(clippy::too_many_arguments)]
fn check_lp(
    f: &Func,
    p: u32,
    n: usize,
    m: usize,
    g: u32,
    checks: &mut u64,
    worst: &mut Option<Witness>,
    stop_at_violation: bool,
) -> Result<bool> {
    let bound = pow2q(-(n as i64) * p as i64);
    let tol = pow2q(-30);
    let mut ok = true;
    for h in shift_grid(f.dim(), m, g) {
        *checks += 1;
        let diff: Pw = f.shift_diff(&h);
        let enc = diff.lp_pow(p, &tol)?;
        let violated = match enc.lt(&bound) {
            Some(b) => !b,
            None => !diff.lp_pow_lt(p, &bound)?,
        };
        consider(
            worst,
            Witness { n, at: h.iter().map(qs).collect(), value: qs(&enc.hi), ratio: ratio(&enc.hi, &bound) },
        );
        if violated {
            ok = false;
            if stop_at_violation {
                break;
            }
        }
    }
    Ok(ok)
}

fn check_continuity(f: &Func, n: usize, m: usize, g: u32, checks: &mut u64, worst: &mut Option<Witness>) -> Result<bool> {
    if f.dim() != 1 {
        return Err(Error::Unsupported("continuity moduli are checked in one dimension".into()));
    }
    let step = pow2q(-((m + g as usize) as i64));
    if let [(lo, hi)] = f.domain() {
        let span = (&hi[0] - &lo[0]) / &step;
        if span.is_integer() {
            let breaks = f.pw().breaks().first().cloned().unwrap_or_default();
            let grid = PointGrid {
                start: lo[0].clone(),
                step,
                npts: span.to_integer().to_i64().unwrap_or(i64::MAX) + 1,
                breaks: &breaks,
                deg: degree_bound(f.pw()),
            };
            return Ok(grid.scan(&|x| f.eval(std::slice::from_ref(x)), 1 << g, n, checks, worst));
        }
    }
    let bound = pow2q(-(n as i64));
    let mut pts: Vec<Q> = Vec::new();
    for (lo, hi) in f.domain() {
        let mut x = lo[0].clone();
        while x <= hi[0] {
            pts.push(x.clone());
            x += &step;
        }
        if pts.last() != Some(&hi[0]) {
            pts.push(hi[0].clone());
        }
    }
    pts.sort();
    pts.dedup();
    let vals: Vec<Q> = pts.iter().map(|x| f.eval(std::slice::from_ref(x))).collect();
    let reach = pow2q(-(m as i64));
    let mut ok = true;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if &pts[j] - &pts[i] > reach {
                break;
            }
            *checks += 1;
            let v = (&vals[j] - &vals[i]).abs();
            if v >= bound {
                ok = false;
            }
            consider(worst, Witness { n, at: vec![qs(&pts[i]), qs(&pts[j])], value: qs(&v), ratio: ratio(&v, &bound) });
        }
    }
    Ok(ok)
}

/// Points `start + i step`, `0 <= i < npts`.
struct PointGrid<'a> {
    start: Q,
    step: Q,
    npts: i64,
    breaks: &'a [Q],
    /// Degree bound of the scanned function between breaks; differences
    /// within one piece have degree one less.
    deg: u32,
}

impl PointGrid<'_> {
    fn x(&self, i: i64) -> Q {
        &self.start + &self.step * qi(i)
    }

    fn index(&self, x: &Q) -> i64 {
        ((x - &self.start) / &self.step).floor().to_integer().to_i64().unwrap_or(i64::MAX)
    }

    /// Checks `|v(x_{i+j}) - v(x_i)| < 2^{-n}` for `1 <= j <= k` exactly.
    ///
    /// Between breaks the difference is a polynomial in `i`, so only the
    /// segment ends, their neighbours and the vertex of a quadratic can be
    /// extremal; higher degrees are scanned in full.
    fn scan(&self, v: &dyn Fn(&Q) -> Q, k: i64, n: usize, checks: &mut u64, worst: &mut Option<Witness>) -> bool {
        let bound = pow2q(-(n as i64));
        let mut ok = true;
        for j in 1..=k.min(self.npts - 1) {
            let imax = self.npts - 1 - j;
            let delta = &self.step * qi(j);
            let mut crit = vec![0, imax];
            for b in self.breaks {
                for c in [b.clone(), b - &delta] {
                    let t = self.index(&c);
                    for u in t - 1..=t + 1 {
                        crit.push(u.clamp(0, imax));
                    }
                }
            }
            crit.sort_unstable();
            crit.dedup();
            let d_at = |i: i64| v(&self.x(i + j)) - v(&self.x(i));
            let mut cand = crit.clone();
            for w in crit.windows(2) {
                let (u, e) = (w[0], w[1]);
                if e - u < 2 {
                    continue;
                }
                cand.extend([u + 1, e - 1]);
                let piece = |x: &Q| self.breaks.partition_point(|b| b <= x);
                let same = piece(&self.x(u + 1)) == piece(&self.x(u + 1 + j));
                let deg = if same { self.deg.saturating_sub(1) } else { self.deg };
                if deg < 2 {
                    continue;
                }
                if deg > 2 || e - u < 5 {
                    cand.extend(u + 1..e);
                    continue;
                }
                let (d0, d1, d2) = (d_at(u + 1), d_at(u + 2), d_at(u + 3));
                let c2 = &d2 - &d1 * qi(2) + &d0;
                if !c2.is_zero() {
                    let t = (Q::new(1.into(), 2.into()) - (&d1 - &d0) / &c2).floor().to_integer().to_i64().unwrap_or(0);
                    for o in [t, t + 1] {
                        if (1..e - u).contains(&(o + 1)) {
                            cand.push(u + 1 + o);
                        }
                    }
                }
            }
            cand.sort_unstable();
            cand.dedup();
            *checks += (imax + 1) as u64;
            for i in cand {
                let val = d_at(i).abs();
                if val >= bound {
                    ok = false;
                }
                consider(
                    worst,
                    Witness { n, at: vec![qs(&self.x(i)), qs(&self.x(i + j))], value: qs(&val), ratio: ratio(&val, &bound) },
                );
            }
        }
        ok
    }
}

fn degree_bound(pw: &Pw) -> u32 {
    pw.cells().map(|(_, _, p)| p.degree()).max().unwrap_or(0)
}

/// Grid `lo - 2^{-m} + i 2^{-m-g}` up to the first point beyond `hi`.
#[allow(clippy::too_many_arguments)]
fn check_singularity_1d(
    pw: &Pw,
    lo: &Q,
    hi: &Q,
    n: usize,
    m: usize,
    g: u32,
    checks: &mut u64,
    worst: &mut Option<Witness>,
) -> bool {
    let pre = pw.prefix_1d();
    let breaks = pw.breaks().first().cloned().unwrap_or_default();
    let mut grid = PointGrid {
        start: lo - pow2q(-(m as i64)),
        step: pow2q(-((m + g as usize) as i64)),
        npts: 0,
        breaks: &breaks,
        deg: if pw.cell_count() == 0 { 0 } else { degree_bound(pw) + 1 },
    };
    grid.npts = grid.index(hi).max(-1) + 2;
    grid.scan(&|x| pre.at(x), 1 << g, n, checks, worst)
}

/// Checks the defining implication of the modulus on a grid of resolution
/// `2^{-mu(n)-g}` for `n <= n_max` (`g >= 2`), plus the side condition.
pub fn validate_modulus(mu: &Modulus, f: &Func, n_max: usize, g: u32) -> Result<ModulusReport> {
    if g < 2 {
        return Err(Error::Precondition("grid must have resolution at most 2^{-mu(n)-2}".into()));
    }
    let mut checks = 0;
    let mut worst = None;
    let mut reason = None;
    if let Some(n) = mu.side_condition_violation(n_max) {
        reason = Some(format!("not strictly increasing at {n}"));
    }
    for n in 0..=n_max {
        let m = mu.at(n);
        let ok = match mu.kind {
            ModKind::Lp { p } => check_lp(f, p, n, m, g, &mut checks, &mut worst, false)?,
            ModKind::Continuity => check_continuity(f, n, m, g, &mut checks, &mut worst)?,
            ModKind::Singularity => {
                let mut ok = true;
                for i in 0..f.dim() {
                    let fi = if f.dim() == 1 { f.clone() } else { f.marginal(i) };
                    let (lo, hi) = fi.bbox();
                    ok &= check_singularity_1d(fi.pw(), &lo[0], &hi[0], n, m, g, &mut checks, &mut worst);
                }
                ok
            }
        };
        if !ok && reason.is_none() {
            reason = Some(format!("implication fails at n = {n}"));
        }
    }
    Ok(ModulusReport { valid: reason.is_none(), checks, worst, reason })
}

/// Largest `k` with a break of `f` in `2^{-k} Z \ 2^{-k+1} Z` (dyadic breaks only).
fn break_resolution(f: &Func) -> u32 {
    f.pw()
        .breaks()
        .iter()
        .flatten()
        .filter_map(|b| {
            let d = b.denom();
            let k = d.trailing_zeros().unwrap_or(0);
            (d >> k as usize == 1.into()).then_some(k as u32)
        })
        .max()
        .unwrap_or(0)
}

/// Smallest value per `n` passing the grid check, then repaired.
///
/// The search grid is refined to at least the break resolution of `f`, so
/// shifts cannot alias with its pieces.
pub fn least_modulus(kind: ModKind, f: &Func, n_max: usize, g: u32) -> Result<Modulus> {
    let res = break_resolution(f);
    let mut table = Vec::new();
    let mut m = 0;
    for n in 0..=n_max {
        loop {
            let g = g.max((res + 2).saturating_sub(m as u32));
            let mut w = None;
            let mut c = 0;
            let ok = match kind {
                ModKind::Lp { p } => check_lp(f, p, n, m, g, &mut c, &mut w, true)?,
                ModKind::Continuity => check_continuity(f, n, m, g, &mut c, &mut w)?,
                ModKind::Singularity => validate_at_singular(f, n, m, g),
            };
            if ok {
                break;
            }
            m += 1;
            if m > 64 {
                return Err(Error::Precondition("no modulus below 64 bits found".into()));
            }
        }
        table.push(m);
    }
    let last = *table.last().unwrap();
    let prev = if table.len() > 1 { table[table.len() - 2] } else { last };
    let a = (last - prev).max(1) as u64;
    let tail = Affine { a, b: last as i64 - a as i64 * n_max as i64 };
    Ok(Modulus::new(kind, table, tail).repair())
}

fn validate_at_singular(f: &Func, n: usize, m: usize, g: u32) -> bool {
    let (mut c, mut w) = (0, None);
    (0..f.dim()).all(|i| {
        let fi = if f.dim() == 1 { f.clone() } else { f.marginal(i) };
        let (lo, hi) = fi.bbox();
        check_singularity_1d(fi.pw(), &lo[0], &hi[0], n, m, g, &mut c, &mut w)
    })
}

/// `ceil(lb r)` for positive `r`.
pub fn clb(r: &Q) -> i64 {
    ceil_log2_rational(r).unwrap_or(0)
}

/// `max{mu(n + max(0, ceil(lb lambda)) + 1), nu(n + c_f + 1)}`, repaired.
pub fn continuity_to_lp(mu: &Modulus, nu: &Modulus, c_f: i64, lambda: &Q, p: u32) -> Modulus {
    let a = mu.shift(clb(lambda).max(0) + 1);
    let b = nu.shift(c_f + 1);
    a.max(&b).with_kind(ModKind::Lp { p }).repair()
}

/// `n -> mu(n + 1 + ceil(lb lambda) + (d-1) ceil(lb diam))`.
pub fn lp_to_singularity(mu: &Modulus, lambda: &Q, diam: &Q, d: usize) -> Modulus {
    let s = 1 + clb(lambda) + (d as i64 - 1) * clb(diam);
    mu.shift(s).with_kind(ModKind::Singularity)
}

/// `n -> mu(n + 1)` for an Lp-modulus of the derivative.
pub fn lp_of_derivative_to_continuity(mu: &Modulus) -> Modulus {
    mu.shift(1).with_kind(ModKind::Continuity).repair()
}

/// `(ceil(diam) 2^{mu(0) - 1/p})^p`, the `p`-th power of the norm bound.
pub fn norm_bound_from_modulus(mu: &Modulus, diam: &Q, p: u32) -> Q {
    let c = Q::from_integer(diam.ceil().to_integer());
    num_traits::pow(c, p as usize) * pow2q(p as i64 * mu.at(0) as i64 - 1)
}

/// `n -> D(n + C)`; needs `p > 1` and `D(p - 1) >= p`.
pub fn linear_singularity_modulus(p: u32, c: i64, dd: u64) -> Result<Modulus> {
    if p <= 1 {
        return Err(Error::Precondition("linear singularity moduli need p > 1".into()));
    }
    if dd * (p as u64 - 1) < p as u64 {
        return Err(Error::Precondition("D must be at least (1 - 1/p)^{-1}".into()));
    }
    Ok(Modulus::affine(ModKind::Singularity, dd, dd as i64 * c))
}

/// `n -> n + C` for `f` whose extension is continuous.
pub fn lp_modulus_from_derivative_norm(f: &Func, p: u32, c: i64) -> Result<Modulus> {
    if !f.extension_continuous() {
        return Err(Error::Precondition("function must vanish on the boundary".into()));
    }
    Ok(Modulus::affine(ModKind::Lp { p }, 1, c))
}

/// Shift so that `||g||_q <= (2 lambda)^{1/q - 1/p} ||g||_p` absorbs the
/// measure factor.
pub fn lq_shift(p: u32, q: u32, lambda: &Q) -> i64 {
    let e = Q::new(1.into(), (q as i64).into()) - Q::new(1.into(), (p as i64).into());
    let t = e * qi(1 + clb(lambda));
    t.ceil().to_integer().to_i64().unwrap_or(0).max(0)
}

pub fn lq_from_lp(mu: &Modulus, p: u32, q: u32, lambda: &Q) -> Result<Modulus> {
    if q > p || q == 0 {
        return Err(Error::Precondition("need 1 <= q <= p".into()));
    }
    Ok(mu.shift(lq_shift(p, q, lambda)).with_kind(ModKind::Lp { p: q }).repair())
}

/// `m -> p m + 2`, an Lp-modulus of the indicator of a unit-measure interval.
pub fn indicator_modulus(p: u32) -> Modulus {
    Modulus::affine(ModKind::Lp { p }, p as u64, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::corpus;

    #[test]
    fn json_form() {
        let m = Modulus::from_json(r#"{"kind":"lp","p":2,"table":[3,5],"tail":{"a":1,"b":4}}"#).unwrap();
        assert_eq!((m.at(0), m.at(1), m.at(2), m.at(5)), (3, 5, 6, 9));
        assert_eq!(Modulus::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn shift_max_repair() {
        let m = Modulus::new(ModKind::Lp { p: 1 }, vec![3, 5], Affine { a: 1, b: 4 });
        let s = m.shift(1);
        assert_eq!((0..6).map(|n| s.at(n)).collect::<Vec<_>>(), vec![5, 6, 7, 8, 9, 10]);
        let s = m.shift(-2);
        assert_eq!((0..5).map(|n| s.at(n)).collect::<Vec<_>>(), vec![3, 3, 3, 5, 6]);
        let r = s.repair();
        assert_eq!((0..5).map(|n| r.at(n)).collect::<Vec<_>>(), vec![3, 4, 5, 6, 7]);
        let c = Modulus::affine(ModKind::Lp { p: 1 }, 0, 3).repair();
        assert_eq!((0..3).map(|n| c.at(n)).collect::<Vec<_>>(), vec![3, 4, 5]);
        let x = Modulus::affine(ModKind::Lp { p: 1 }, 2, 0).max(&Modulus::affine(ModKind::Lp { p: 1 }, 1, 5));
        assert_eq!((0..8).map(|n| x.at(n)).collect::<Vec<_>>(), vec![5, 6, 7, 8, 9, 10, 12, 14]);
        assert_eq!(Modulus::zero(ModKind::Continuity).repair().at(7), 0);
    }

    #[test]
    fn indicator_strictness() {
        let f = corpus::chi_half();
        let good = Modulus::affine(ModKind::Lp { p: 1 }, 1, 2);
        assert!(validate_modulus(&good, &f, 6, 2).unwrap().valid);
        let bad = Modulus::affine(ModKind::Lp { p: 1 }, 1, 1);
        let r = validate_modulus(&bad, &f, 6, 2).unwrap();
        assert!(!r.valid);
        assert_eq!(r.worst.unwrap().ratio, 1.0);
    }

    #[test]
    fn oscillator_singularity() {
        let s = Modulus::affine(ModKind::Singularity, 1, 1);
        for m in 1..=4 {
            assert!(validate_modulus(&s, &corpus::oscillator(m), 7, 2).unwrap().valid);
        }
    }

    #[test]
    fn conversions() {
        let one = corpus::constant(qi(1));
        let eta = continuity_to_lp(
            &Modulus::zero(ModKind::Continuity),
            &Modulus::affine(ModKind::Lp { p: 2 }, 2, 1),
            0,
            &qi(1),
            2,
        );
        assert_eq!((0..4).map(|n| eta.at(n)).collect::<Vec<_>>(), vec![3, 5, 7, 9]);
        assert!(validate_modulus(&eta, &one, 6, 2).unwrap().valid);
        let s = lp_to_singularity(&Modulus::affine(ModKind::Lp { p: 1 }, 1, 2), &qi(1), &qi(1), 1);
        assert_eq!(s.at(0), 3);
        assert!(validate_modulus(&s, &corpus::chi_half(), 8, 2).unwrap().valid);
        assert!(linear_singularity_modulus(1, 1, 2).is_err());
        assert_eq!(linear_singularity_modulus(2, 1, 2).unwrap().at(3), 8);
        assert_eq!(norm_bound_from_modulus(&Modulus::affine(ModKind::Lp { p: 1 }, 1, 2), &qi(1), 1), qi(2));
        assert!(lp_modulus_from_derivative_norm(&corpus::identity(), 1, 2).is_err());
    }

    fn brute_singularity(f: &Func, m: usize, g: u32) -> Q {
        let pre = f.pw().prefix_1d();
        let step = pow2q(-((m + g as usize) as i64));
        let mut xs = Vec::new();
        let mut x = qi(0) - pow2q(-(m as i64));
        while x <= qi(1) {
            xs.push(x.clone());
            x += &step;
        }
        xs.push(x);
        let mut best = Q::zero();
        for i in 0..xs.len() {
            for j in i + 1..(i + (1 << g) + 1).min(xs.len()) {
                best = best.max((pre.at(&xs[j]) - pre.at(&xs[i])).abs());
            }
        }
        best
    }

    #[test]
    fn segment_check_matches_brute_force() {
        for f in [corpus::chi_half(), corpus::hat(), corpus::hat_antiderivative(), corpus::half_square(), corpus::oscillator(3)] {
            for m in 0..7 {
                let (mut c, mut w) = (0, None);
                check_singularity_1d(f.pw(), &qi(0), &qi(1), 0, m, 2, &mut c, &mut w);
                let got = w.map(|w| w.value).unwrap_or_default();
                assert_eq!(got, qs(&brute_singularity(&f, m, 2)), "m = {m}");
            }
        }
    }

    #[test]
    fn continuity_scan_matches_brute_force() {
        for f in [corpus::hat(), corpus::half_square(), corpus::hat_antiderivative(), corpus::identity()] {
            for m in 0..7 {
                let step = pow2q(-(m as i64) - 2);
                let pts: Vec<Q> = (0..=(1i64 << (m + 2))).map(|i| &step * qi(i)).collect();
                let mut best = Q::zero();
                for i in 0..pts.len() {
                    for j in i + 1..(i + 5).min(pts.len()) {
                        best = best.max((f.eval(&[pts[j].clone()]) - f.eval(&[pts[i].clone()])).abs());
                    }
                }
                let (mut c, mut w) = (0, None);
                check_continuity(&f, 0, m, 2, &mut c, &mut w).unwrap();
                assert_eq!(w.map(|w| w.value).unwrap_or_default(), qs(&best), "m = {m}");
            }
        }
    }
}
