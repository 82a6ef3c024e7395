//! Covering nets, spanning families, greedy codes and entropy tables for
//! the compact classes `K^inf_{l,C}` and `K^p_l`, plus a representation
//! built from a net.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dyadic::{BitString, Dyadic};
use crate::error::{Error, Result};
use crate::moduli::{validate_modulus, ModKind, Modulus, ModulusReport};
use crate::name::{len_fn, Answer, AnswerKind, ExpBound, ExpReport, Name, Query, QueryShape, Trace};
use crate::symbolic::{format_rational, pow2q, q, qi, Func, Poly, Pw, Q};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum CompactClass {
    /// `K^inf_{l,C}`: modulus of continuity `l`, sup norm at most `2^C`.
    Aa { l: Modulus, c: u32 },
    /// `K^p_l`: Lp-modulus `l` on `[0,1]`.
    Fk { l: Modulus, p: u32 },
    /// Lipschitz constant `2^L`, vanishing at 0.
    Lipschitz { big_l: u32 },
}

fn check_count(count: &BigUint, budget: u64) -> Result<usize> {
    match count.to_u64() {
        Some(c) if c <= budget => Ok(c as usize),
        _ => Err(Error::Budget { used: count.to_u64().unwrap_or(u64::MAX), budget }),
    }
}

/// `ceil(lb x)` for `x >= 1`.
pub fn ceil_log2_big(x: &BigUint) -> u64 {
    if x.is_zero() || x.is_one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

fn pow2_big(k: u64) -> BigUint {
    BigUint::one() << k
}

/// Sup distance of continuous piecewise-linear functions on `[0,1]`.
pub fn pl_sup_dist(f: &Func, g: &Func) -> Result<Q> {
    pl_sup(&f.pw().sub(g.pw()))
}

/// Sup of `|h|` over `[0,1]` for piecewise-linear `h`.
pub fn pl_sup(h: &Pw) -> Result<Q> {
    let (zero, one) = (qi(0), qi(1));
    let mut best = qi(0);
    for (lo, hi, p) in h.cells() {
        if hi[0] <= zero || lo[0] >= one {
            continue;
        }
        if p.degree() > 1 {
            return Err(Error::Unsupported("sup distance needs piecewise-linear functions".into()));
        }
        let a = lo[0].clone().max(zero.clone());
        let b = hi[0].clone().min(one.clone());
        for x in [a, b] {
            let v = p.eval(&[x]).abs();
            if v > best {
                best = v;
            }
        }
    }
    Ok(best)
}

/// Piecewise-linear function through `(j 2^{-grid}, v_j)`, `j = 0..=2^grid`.
pub fn pl_from_nodes(grid: u32, v: &[Q]) -> Func {
    let k = 1usize << grid;
    assert_eq!(v.len(), k + 1);
    let dx = pow2q(-(grid as i64));
    let mut breaks = Vec::with_capacity(k + 1);
    let mut polys = Vec::with_capacity(k);
    for j in 0..=k {
        breaks.push(&dx * qi(j as i64));
    }
    for j in 0..k {
        let slope = (&v[j + 1] - &v[j]) / &dx;
        let c0 = &v[j] - &slope * &breaks[j];
        polys.push(Poly::univariate(&[c0, slope]));
    }
    Func::on_unit(Pw::from_1d(breaks, polys))
}

/// Node values `sigma_0 s, sigma_0 s + sigma_1 s, ...` with step `s = 2^{-n}`.
pub fn sigma_nodes(n: usize, sigma0: i64, steps: &[i8]) -> Vec<Q> {
    let s = pow2q(-(n as i64));
    let mut acc = qi(sigma0);
    let mut out = vec![&acc * &s];
    for &st in steps {
        acc += qi(st as i64);
        out.push(&acc * &s);
    }
    out
}

/// Greedy path through `targets` with steps in `{-1,0,1}` of size `2^{-n}`.
pub fn track(n: usize, targets: &[Q]) -> (i64, Vec<i8>) {
    let scale = pow2q(n as i64);
    let first = &targets[0] * &scale;
    let sigma0 = (first + q(1, 2)).floor().to_integer().to_i64().unwrap_or(0);
    let mut level = BigInt::from(sigma0);
    let mut steps = Vec::with_capacity(targets.len().saturating_sub(1));
    for t in &targets[1..] {
        let t = t * &scale;
        let (mut best, mut err) = (0i8, None::<Q>);
        for s in [0i8, 1, -1] {
            let e = (Q::from(&level + BigInt::from(s)) - &t).abs();
            if err.as_ref().map_or(true, |b| e < *b) {
                best = s;
                err = Some(e);
            }
        }
        level += BigInt::from(best);
        steps.push(best);
    }
    (sigma0, steps)
}

// ---------------------------------------------------------------- aa nets

/// `(2^{n+C+1}+1) 3^{2^{l(n)}}`.
pub fn aa_cover_count(l_n: usize, c: u32, n: usize) -> BigUint {
    (pow2_big((n + c as usize + 1) as u64) + 1u32) * BigUint::from(3u32).pow(1u32 << l_n)
}

/// Exponent of the upper bound `2^{2^{l(n)+1}+n+C+2}` on the net size.
pub fn aa_cover_bound_exp(l_n: usize, c: u32, n: usize) -> BigUint {
    pow2_big(l_n as u64 + 1) + BigUint::from(n + c as usize + 2)
}

#[derive(Clone, Debug)]
pub struct NetMember {
    pub sigma0: i64,
    pub steps: Vec<i8>,
    pub f: Func,
}

/// All `f_sigma`, `sigma` in `{-2^{n+C}..2^{n+C}} x {0,1,-1}^{2^{l(n)}}`.
pub fn aa_cover(l: &Modulus, c: u32, n: usize, budget: u64) -> Result<Vec<NetMember>> {
    let l_n = l.at(n);
    if l_n > 20 {
        return Err(Error::Budget { used: u64::MAX, budget });
    }
    let count = check_count(&aa_cover_count(l_n, c, n), budget)?;
    let slots = 1usize << l_n;
    let r = 1i64 << (n + c as usize);
    let mut out = Vec::with_capacity(count);
    let mut steps = vec![0i8; slots];
    for sigma0 in -r..=r {
        steps.iter_mut().for_each(|s| *s = 0);
        loop {
            let f = pl_from_nodes(l_n as u32, &sigma_nodes(n, sigma0, &steps));
            out.push(NetMember { sigma0, steps: steps.clone(), f });
            // Odometer over {0,1,-1}.
            let mut i = 0;
            while i < slots {
                steps[i] = match steps[i] {
                    0 => 1,
                    1 => -1,
                    _ => 0,
                };
                if steps[i] != 0 {
                    break;
                }
                i += 1;
            }
            if i == slots {
                break;
            }
        }
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

/// Net element assigned to `f` by greedy tracking of its node values.
pub fn aa_nearest(l: &Modulus, n: usize, f: &Func) -> NetMember {
    let l_n = l.at(n) as u32;
    let dx = pow2q(-(l_n as i64));
    let targets: Vec<Q> = (0..=(1usize << l_n)).map(|j| f.eval(&[&dx * qi(j as i64)])).collect();
    let (sigma0, steps) = track(n, &targets);
    let g = pl_from_nodes(l_n, &sigma_nodes(n, sigma0, &steps));
    NetMember { sigma0, steps, f: g }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverCheck {
    pub n: usize,
    pub sampled: usize,
    pub rejected: usize,
    pub covered: usize,
    pub worst: String,
    pub in_range: bool,
}

/// Random `sigma`-paths with real increments in `(-2^{-n}, 2^{-n})`, kept
/// inside `[-2^C, 2^C]`, followed by four extreme slope paths.
pub fn aa_samples(l: &Modulus, c: u32, n: usize, count: usize, seed: u64) -> Vec<Func> {
    let l_n = l.at(n) as u32;
    let slots = 1usize << l_n;
    let fine = (n + 6) as i64;
    let lim = 1i64 << 6;
    let cap = pow2q(c as i64);
    let unit = pow2q(-fine);
    let clamp = |x: Q| x.max(-cap.clone()).min(cap.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count + 4);
    for _ in 0..count {
        let start = rng.gen_range(-(1i64 << (fine + c as i64))..=(1i64 << (fine + c as i64)));
        let mut v = vec![&unit * qi(start)];
        for _ in 0..slots {
            let inc = &unit * qi(rng.gen_range(-(lim - 1)..=(lim - 1)));
            let next = clamp(v.last().unwrap() + inc);
            v.push(next);
        }
        out.push(pl_from_nodes(l_n, &v));
    }
    let big = &unit * qi(lim - 1);
    for pattern in 0..4 {
        let mut v = vec![qi(0)];
        for j in 0..slots {
            let inc = match pattern {
                0 => big.clone(),
                1 => -big.clone(),
                2 if j % 2 == 0 => big.clone(),
                2 => -big.clone(),
                _ => qi(0),
            };
            let next = clamp(v.last().unwrap() + inc);
            v.push(next);
        }
        out.push(pl_from_nodes(l_n, &v));
    }
    out
}

/// Covering check on samples; members failing the class test up to
/// `n_max` are rejected instead of counted.
pub fn aa_cover_check(l: &Modulus, c: u32, n: usize, samples: &[Func], n_max: usize) -> Result<CoverCheck> {
    let radius = pow2q(-(n as i64));
    let cap = pow2q(c as i64);
    let r = 1i64 << (n + c as usize);
    let lc = l.with_kind(ModKind::Continuity);
    let (mut rejected, mut covered) = (0, 0);
    let mut worst = qi(0);
    let mut in_range = true;
    for f in samples {
        if pl_sup(f.pw())? > cap || !validate_modulus(&lc, f, n_max, 2)?.valid {
            rejected += 1;
            continue;
        }
        let g = aa_nearest(l, n, f);
        in_range &= g.sigma0.abs() <= r;
        let d = pl_sup_dist(f, &g.f)?;
        if d < radius {
            covered += 1;
        }
        if d > worst {
            worst = d;
        }
    }
    Ok(CoverCheck { n, sampled: samples.len(), rejected, covered, worst: format_rational(&worst), in_range })
}

// ------------------------------------------------------------ aa spanning

#[derive(Clone, Debug)]
pub struct SpanMember {
    /// Vertical offset in units of `2^{-n-1}`.
    pub level: i64,
    pub bumps: Vec<bool>,
    pub f: Func,
}

/// `2^{2^{l(n)} + n + C + 2}`.
pub fn aa_spanning_count(l_n: usize, c: u32, n: usize) -> BigUint {
    pow2_big((1u64 << l_n) + (n + c as usize + 2) as u64)
}

fn bump_member(l_n: u32, n: usize, level: i64, bumps: &[bool]) -> Func {
    let k = 1usize << l_n;
    let base = &pow2q(-(n as i64) - 1) * qi(level);
    let top = &base + pow2q(-(n as i64) - 1);
    let mut v = Vec::with_capacity(2 * k + 1);
    v.push(base.clone());
    for &b in bumps {
        v.push(if b { top.clone() } else { base.clone() });
        v.push(base.clone());
    }
    pl_from_nodes(l_n + 1, &v)
}

/// Offsets `k 2^{-n-1}`, `-2^{n+C+1} <= k < 2^{n+C+1}`, plus any subset of
/// tent bumps of height `2^{-n-1}` on the cells of width `2^{-l(n)}`.
pub fn aa_spanning(l: &Modulus, c: u32, n: usize, budget: u64) -> Result<Vec<SpanMember>> {
    let l_n = l.at(n);
    if l_n > 20 {
        return Err(Error::Budget { used: u64::MAX, budget });
    }
    let count = check_count(&aa_spanning_count(l_n, c, n), budget)?;
    let k = 1usize << l_n;
    let r = 1i64 << (n + c as usize + 1);
    let mut out = Vec::with_capacity(count);
    for level in -r..r {
        for mask in 0u64..(1u64 << k) {
            let bumps: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            let f = bump_member(l_n as u32, n, level, &bumps);
            out.push(SpanMember { level, bumps, f });
        }
    }
    Ok(out)
}

/// Least pairwise sup distance, exact.
pub fn min_pairwise_sup(family: &[Func]) -> Result<Option<Q>> {
    let mut best: Option<Q> = None;
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let d = pl_sup_dist(&family[i], &family[j])?;
            if best.as_ref().map_or(true, |b| d < *b) {
                best = Some(d);
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub valid: bool,
    pub checked: usize,
    pub norm_ok: bool,
    pub first_failure: Option<ModulusReport>,
}

/// Class test for the offset-zero members (the offsets do not change the
/// modulus) and the sup bound for the extreme offsets.
pub fn aa_spanning_membership(l: &Modulus, c: u32, n: usize, family: &[SpanMember], n_max: usize) -> Result<Membership> {
    let cap = pow2q(c as i64);
    let lc = l.with_kind(ModKind::Continuity);
    let mut checked = 0;
    let mut first_failure = None;
    let mut norm_ok = true;
    for m in family {
        norm_ok &= pl_sup(m.f.pw())? <= cap;
        if m.level != 0 {
            continue;
        }
        checked += 1;
        let rep = validate_modulus(&lc, &m.f, n_max.max(n + 2), 2)?;
        if !rep.valid && first_failure.is_none() {
            first_failure = Some(rep);
        }
    }
    Ok(Membership { valid: first_failure.is_none() && norm_ok, checked, norm_ok, first_failure })
}

// ------------------------------------------------------------ greedy code

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSet {
    pub n: usize,
    pub m: usize,
    pub words: Vec<u32>,
}

impl CodeSet {
    pub fn word(&self, i: usize) -> BitString {
        let w = self.words[i];
        BitString((0..self.n).map(|k| w >> (self.n - 1 - k) & 1 == 1).collect())
    }

    pub fn min_distance(&self) -> Option<u32> {
        let mut best = None;
        for i in 0..self.words.len() {
            for j in i + 1..self.words.len() {
                let d = (self.words[i] ^ self.words[j]).count_ones();
                if best.map_or(true, |b| d < b) {
                    best = Some(d);
                }
            }
        }
        best
    }

    /// Exhaustive pairwise check.
    pub fn verify(&self) -> bool {
        self.min_distance().map_or(true, |d| d as usize >= self.m)
    }
}

/// Lexicographic greedy code: scans all words in increasing order and
/// keeps a word iff it is at distance `>= M` from every kept word.
pub fn greedy_code(n: usize, m: usize) -> Result<CodeSet> {
    if n == 0 || m == 0 || m > n {
        return Err(Error::Precondition("greedy_code needs 0 < M <= N".into()));
    }
    if n > 24 {
        return Err(Error::Budget { used: 1u64 << n.min(63), budget: 1 << 24 });
    }
    let size = 1usize << n;
    // covered[v]: v lies within distance < M of the span of the kept words.
    let mut covered = vec![false; size];
    for (v, c) in covered.iter_mut().enumerate() {
        *c = (v as u32).count_ones() < m as u32;
    }
    let mut words = vec![0u32];
    for w in 1..size {
        if covered[w] {
            continue;
        }
        let new: Vec<u32> = words.iter().map(|c| c ^ w as u32).collect();
        words.extend(new);
        for v in 0..size {
            if covered[v] {
                covered[v ^ w] = true;
            }
        }
    }
    words.sort_unstable();
    Ok(CodeSet { n, m, words })
}

// ------------------------------------------------------------ fk spanning

/// Smallest `h' >= (p+1)^{1/p} 2^{-n+1}` on the grid `2^{-n-8}`; exact for `p = 1`.
pub fn fk_height(p: u32, n: usize) -> Q {
    let target = BigUint::from(p + 1) << (9 * p as usize);
    let mut t = target.nth_root(p);
    if t.pow(p) < target {
        t += 1u32;
    }
    Q::from(BigInt::from(t)) * pow2q(-(n as i64) - 8)
}

#[derive(Clone, Debug)]
pub struct FkFamily {
    pub n: usize,
    pub p: u32,
    pub h: Q,
    pub w: Q,
    pub code: CodeSet,
    pub members: Vec<Func>,
}

fn signed_hats(h: &Q, grid: u32, word: u32, slots: usize) -> Func {
    let mut v = vec![qi(0)];
    for i in 0..slots {
        let s = if word >> (slots - 1 - i) & 1 == 1 { h.clone() } else { -h.clone() };
        v.push(s);
        v.push(qi(0));
    }
    pl_from_nodes(grid + 1, &v)
}

/// `f_sigma = h sum_i s_i hat((x - i w)/w)` with signs `s_i = +-1` read
/// from the words of `greedy_code(N, N/4)`, `N = 2^{l(n-3)}`, `w = 1/N`.
pub fn fk_spanning(l: &Modulus, p: u32, n: usize, budget: u64) -> Result<FkFamily> {
    if n < 3 {
        return Err(Error::Precondition("fk_spanning needs n >= 3".into()));
    }
    let grid = l.at(n - 3);
    if grid > 24 {
        return Err(Error::Budget { used: u64::MAX, budget });
    }
    let slots = 1usize << grid;
    if slots > 24 {
        return Err(Error::Budget { used: 1u64 << slots.min(63), budget: 1 << 24 });
    }
    let code = greedy_code(slots, (slots / 4).max(1))?;
    check_count(&BigUint::from(code.words.len()), budget)?;
    let h = fk_height(p, n);
    let w = pow2q(-(grid as i64));
    let members = code.words.iter().map(|&word| signed_hats(&h, grid as u32, word, slots)).collect();
    Ok(FkFamily { n, p, h, w, code, members })
}

impl FkFamily {
    /// `(2h)^p #dis w / (p+1)`, the `p`-th power of the closed form.
    pub fn closed_form_pow(&self, dis: u32) -> Q {
        let two_h = &self.h * qi(2);
        let mut hp = qi(1);
        for _ in 0..self.p {
            hp *= &two_h;
        }
        hp * qi(dis as i64) * &self.w / qi(self.p as i64 + 1)
    }

    /// Every pair: exact `||f_s - f_t||_p^p` equals the closed form and is
    /// at least `2^{-np}`. Returns `(pairs, all_equal, least)`.
    pub fn check_pairs(&self) -> Result<(usize, bool, Option<Q>)> {
        let mut pairs = 0;
        let mut equal = true;
        let mut least: Option<Q> = None;
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                pairs += 1;
                let dis = (self.code.words[i] ^ self.code.words[j]).count_ones();
                let exact = self.members[i].sub(&self.members[j]).lp_pow_exact(self.p)?;
                equal &= exact == self.closed_form_pow(dis);
                if least.as_ref().map_or(true, |b| exact < *b) {
                    least = Some(exact);
                }
            }
        }
        Ok((pairs, equal, least))
    }

    pub fn separated(&self) -> Result<bool> {
        let (_, equal, least) = self.check_pairs()?;
        let bound = pow2q(-(self.n as i64) * self.p as i64);
        Ok(equal && least.map_or(true, |d| d >= bound))
    }

    pub fn membership(&self, l: &Modulus, n_max: usize) -> Result<Membership> {
        let lp = l.with_kind(ModKind::Lp { p: self.p });
        let mut first_failure = None;
        for f in &self.members {
            let rep = validate_modulus(&lp, f, n_max, 2)?;
            if !rep.valid {
                first_failure = Some(rep);
                break;
            }
        }
        Ok(Membership { valid: first_failure.is_none(), checked: self.members.len(), norm_ok: true, first_failure })
    }
}

// --------------------------------------------------------------- fk cover

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FkNet {
    pub n: usize,
    pub p: u32,
    /// Averaging level `N = l(n+1)`.
    pub big_n: usize,
    /// Node grid exponent `n + 2 + ceil(d/p) N`.
    pub grid: usize,
    /// Sup bound exponent `l(1 + ceil(d/p) l(1))`.
    pub c_bound: usize,
    pub log2_size: u64,
    pub upper_exp: String,
    pub improved_a: Option<u32>,
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Net of `K^p_l` at precision `n` through `f -> f_{l(n+1)}` and the
/// `K^inf` net at precision `n+1`; elements are produced on demand.
pub fn fk_cover(l: &Modulus, p: u32, d: usize, n: usize) -> Result<FkNet> {
    if d != 1 {
        return Err(Error::Unsupported("fk_cover is one-dimensional".into()));
    }
    let dp = ceil_div(d, p as usize);
    let big_n = l.at(n + 1);
    let grid = n + 2 + dp * big_n;
    let c_bound = l.at(1 + dp * l.at(1));
    if grid > 40 {
        return Err(Error::Budget { used: u64::MAX, budget: 1 << 40 });
    }
    let log2_size = ceil_log2_big(&aa_cover_count(grid, c_bound as u32, n + 1));
    let upper = pow2_big(l.at(n + 2 + dp * l.at(n + 1)) as u64 + 1) + BigUint::from(n + c_bound + 2);
    let improved_a = (1..=8u32).find(|&a| {
        let e = a as u64 * l.at(n + d + 1) as u64 + l.at(0) as u64;
        e < 4096 && BigUint::from(log2_size) <= pow2_big(e) + BigUint::from(n)
    });
    Ok(FkNet { n, p, big_n, grid, c_bound, log2_size, upper_exp: upper.to_string(), improved_a })
}

impl FkNet {
    pub fn within_upper(&self) -> bool {
        BigUint::from(self.log2_size) <= self.upper_exp.parse::<BigUint>().expect("decimal")
    }

    /// Net element for `f`: track `f_N` on the node grid with steps `2^{-n-1}`.
    pub fn nearest(&self, f: &Func) -> Result<NetMember> {
        let fa = f.continuous_approx(self.big_n as u32)?;
        let dx = pow2q(-(self.grid as i64));
        let targets: Vec<Q> = (0..=(1usize << self.grid)).map(|j| fa.pw().eval(&[&dx * qi(j as i64)])).collect();
        let (sigma0, steps) = track(self.n + 1, &targets);
        if sigma0.abs() > 1i64 << (self.n + 1 + self.c_bound).min(62) {
            return Err(Error::Invariant("net offset out of range".into()));
        }
        let g = pl_from_nodes(self.grid as u32, &sigma_nodes(self.n + 1, sigma0, &steps));
        Ok(NetMember { sigma0, steps, f: g })
    }

    /// `||f - g||_p` strictly below `2^{-n}`, certified by an enclosure
    /// of width at most `2^{-np-4}`.
    pub fn covers(&self, f: &Func) -> Result<bool> {
        let g = self.nearest(f)?;
        let bound = pow2q(-(self.n as i64) * self.p as i64);
        let tol = pow2q(-(self.n as i64) * self.p as i64 - 4);
        Ok(f.sub(&g.f).lp_pow(self.p, &tol)?.hi < bound)
    }
}

/// Tents of height `k/64`, `|k| <= 3`, on the sixteen cells of width `1/16`.
/// `||f'||_1 <= 3/2`, so `m -> m+2` is an L1-modulus.
pub fn hat_samples(count: usize, seed: u64) -> Vec<Func> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut v = vec![qi(0)];
            for _ in 0..16 {
                v.push(q(rng.gen_range(-3..=3), 64));
                v.push(qi(0));
            }
            pl_from_nodes(5, &v)
        })
        .collect()
}

// ------------------------------------------------------ net representation

/// Cauchy-style representation of the Lipschitz class with constant `2^L`
/// vanishing at 0. Precision `n` names the net element of level `n+1`:
/// a path on the grid `2^{-(n+1+L)}` with steps `{-1,0,1} 2^{-n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipschitzNet {
    pub big_l: u32,
}

impl LipschitzNet {
    pub fn grid(&self, level: usize) -> u32 {
        (level + self.big_l as usize) as u32
    }

    /// `2^{n+L+2}` bits per answer.
    pub fn length(&self, n: usize) -> usize {
        1usize.checked_shl((n + self.big_l as usize + 2) as u32).unwrap_or(usize::MAX)
    }

    pub fn encode_path(steps: &[i8]) -> BitString {
        let mut b = BitString::new();
        for &s in steps {
            let (x, y) = match s {
                0 => (false, false),
                1 => (false, true),
                _ => (true, false),
            };
            b.push(x);
            b.push(y);
        }
        b
    }

    pub fn decode_path(bits: &BitString) -> Result<Vec<i8>> {
        bits.bits()
            .chunks(2)
            .map(|c| match c {
                [false, false] => Ok(0),
                [false, true] => Ok(1),
                [true, false] => Ok(-1),
                _ => Err(Error::Parse("net path".into())),
            })
            .collect()
    }

    pub fn element(&self, level: usize, steps: &[i8]) -> Func {
        pl_from_nodes(self.grid(level), &sigma_nodes(level, 0, steps))
    }

    pub fn name(&self, f: &Func) -> Name {
        let me = *self;
        let f = f.clone();
        let len = len_fn(move |n| me.length(n));
        Name::semantic(
            QueryShape::Index,
            1,
            AnswerKind::Bits,
            len,
            Arc::new(move |qy: &Query| {
                let level = qy.precision() + 1;
                let g = me.grid(level);
                if g > 24 {
                    return Err(Error::Budget { used: 1 << g.min(63), budget: 1 << 24 });
                }
                let dx = pow2q(-(g as i64));
                let t: Vec<Q> = (0..=(1usize << g)).map(|j| f.eval(&[&dx * qi(j as i64)])).collect();
                let (_, steps) = track(level, &t);
                Ok(Answer::Bits(LipschitzNet::encode_path(&steps)))
            }),
        )
        .with_tag("net")
    }

    /// Distance oracle: exact sup distance of two net elements of one level.
    pub fn distance(&self, level: usize, a: &[i8], b: &[i8]) -> Q {
        let mut acc = 0i64;
        let mut best = 0i64;
        for (x, y) in a.iter().zip(b) {
            acc += (*x - *y) as i64;
            best = best.max(acc.abs());
        }
        &pow2q(-(level as i64)) * qi(best)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricResult {
    pub value: Dyadic,
    pub queries: u64,
    pub bound: ExpReport,
}

/// `d(f,g)` within `2^{-n}` from two names and the distance oracle:
/// three queries in total.
pub fn cauchy_rep_metric(net: &LipschitzNet, phi: &Name, psi: &Name, n: usize) -> Result<MetricResult> {
    let trace = Trace::new();
    let (a, b) = (phi.traced(&trace), psi.traced(&trace));
    let q = Query::Index { n: n + 2 };
    let path = |x: Answer| match x {
        Answer::Bits(bits) => LipschitzNet::decode_path(&bits),
        _ => Err(Error::Invariant("expected a path".into())),
    };
    let sa = path(a.ask(&q)?)?;
    let sb = path(b.ask(&q)?)?;
    let dist = net.distance(n + 3, &sa, &sb);
    trace.record(2 * net.length(n + 2), crate::dyadic::encoded_len(&Dyadic::round_rational(&dist, (n + 2) as u32)), "dist")?;
    let value = Dyadic::round_rational(&dist, (n + 2) as u32);
    let len = |k: u64| net.length(k as usize) as u64;
    let bound = crate::name::check_exp_bound(&trace, ExpBound { a: 1, b: 0, c: 0 }, &len, n as u64);
    Ok(MetricResult { value, queries: trace.queries(), bound })
}

/// Lipschitz samples: slopes `k 2^{L-3}`, `|k| <= 8`, on the grid `2^{-6}`.
pub fn lipschitz_samples(big_l: u32, count: usize, seed: u64) -> Vec<Func> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dx = pow2q(-6);
    (0..count)
        .map(|_| {
            let mut v = vec![qi(0)];
            for _ in 0..64 {
                let s = &pow2q(big_l as i64 - 3) * qi(rng.gen_range(-8..=8));
                let next = v.last().unwrap() + &s * &dx;
                v.push(next);
            }
            pl_from_nodes(6, &v)
        })
        .collect()
}

// ------------------------------------------------------------------ table

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub n: usize,
    /// `lb` of the witnessed `2^{-n+1}`-separated family.
    pub spanning: u64,
    /// `ceil(lb)` of the witnessed net size at radius `2^{-n}`.
    pub net: u64,
    pub lower_formula: String,
    pub upper_formula: String,
    pub sandwich: bool,
}

/// `ceil(lb(3) 2^k)`.
pub fn lipschitz_size(k: u32) -> u64 {
    ceil_log2_big(&BigUint::from(3u32).pow(1u32 << k))
}

pub fn entropy_table(class: &CompactClass, ns: std::ops::RangeInclusive<usize>) -> Result<Vec<EntropyRow>> {
    let mut rows = Vec::new();
    for n in ns {
        let row = match class {
            CompactClass::Aa { l, c } => {
                if n < 2 {
                    return Err(Error::Precondition("aa rows start at n = 2".into()));
                }
                let spanning = ceil_log2_big(&aa_spanning_count(l.at(n - 2), *c, n - 2));
                let net = ceil_log2_big(&aa_cover_count(l.at(n), *c, n));
                let lower = pow2_big(l.at(n - 2) as u64) + BigUint::from(n + *c as usize);
                let upper = aa_cover_bound_exp(l.at(n), *c, n);
                let sandwich = spanning <= net
                    && BigUint::from(spanning) >= lower
                    && lower <= BigUint::from(net)
                    && BigUint::from(net) <= upper;
                EntropyRow { n, spanning, net, lower_formula: lower.to_string(), upper_formula: upper.to_string(), sandwich }
            }
            CompactClass::Fk { l, p } => {
                let code = greedy_code(1usize << l.at(n.saturating_sub(3)), ((1usize << l.at(n.saturating_sub(3))) / 4).max(1))?;
                let spanning = if n >= 3 { (code.words.len() as u64).ilog2() as u64 } else { 0 };
                let fk = fk_cover(l, *p, 1, n)?;
                let lower = if n >= 3 { BigUint::from(spanning) } else { BigUint::zero() };
                let sandwich = spanning <= fk.log2_size && fk.within_upper();
                EntropyRow { n, spanning, net: fk.log2_size, lower_formula: lower.to_string(), upper_formula: fk.upper_exp, sandwich }
            }
            CompactClass::Lipschitz { big_l } => {
                let net = lipschitz_size(n as u32 + *big_l);
                let spanning = if n + *big_l as usize >= 2 { 1u64 << (n + *big_l as usize - 2) } else { 0 };
                let upper = BigUint::from(net);
                let sandwich = spanning <= net;
                EntropyRow { n, spanning, net, lower_formula: spanning.to_string(), upper_formula: upper.to_string(), sandwich }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

pub fn table_csv(rows: &[EntropyRow]) -> String {
    let mut s = String::from("n,spanning,net,lower_formula,upper_formula,sandwich\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{},{}\n", r.n, r.spanning, r.net, r.lower_formula, r.upper_formula, r.sandwich));
    }
    s
}
